"""Compare the compiled and pure-Python elimination kernels.

Usage: python3 benchmarks/bench_rank.py [--repeat N] [--skip-end-to-end]

Inputs are random sparse integer matrices and the Cech differentials of
the deformation complex of the point ideal on P^2. Both kernels must agree
on every rank; the script exits nonzero if they do not. A final table
times the whole ``quaddef report`` command under each backend.
"""

import argparse
import os
import random
import subprocess
import sys
import tempfile
import time
import timeit

from quaddef import _kernels_py, cech, corpus, docformat, exactla
from quaddef.defcomplex import build_deformation_complex
from quaddef.exactla import RatMatrix


def random_sparse(rng, nrows, ncols, per_row):
    """A few entries in {-2, -1, 1, 2} per row, like a Cech differential."""
    rows = []
    for _ in range(nrows):
        cols = rng.sample(range(ncols), per_row)
        rows.append({j: rng.choice((-2, -1, 1, 2)) for j in cols})
    return RatMatrix(nrows, ncols, rows)


def cech_differentials():
    q = docformat.load(corpus.get("ideal-point-p2").text)
    out = []
    for window in (4, 10):
        total = cech.CechTotal(build_deformation_complex(q).complex, window)
        out += [(f"cech W={window} d^{t}", total.differential(t)) for t in (0, 1, 2)]
    return out


def end_to_end(names):
    print()
    print(f"{'quaddef report':<30}{'cython s':>11}{'python s':>11}{'speedup':>9}")
    for name in names:
        with tempfile.NamedTemporaryFile("w", suffix=".qd", delete=False) as fh:
            fh.write(corpus.get(name).text)
        times = []
        for pure in (False, True):
            env = dict(os.environ)
            env.pop("QUADDEF_PURE_PYTHON", None)
            if pure:
                env["QUADDEF_PURE_PYTHON"] = "1"
            start = time.perf_counter()
            subprocess.run(
                [sys.executable, "-m", "quaddef.cli", "report", fh.name],
                env=env, check=True, stdout=subprocess.DEVNULL,
            )
            times.append(time.perf_counter() - start)
        os.unlink(fh.name)
        print(f"{name:<30}{times[0]:>11.2f}{times[1]:>11.2f}{times[1] / times[0]:>8.1f}x")


def cases(rng):
    out = []
    for n, k in ((100, 3), (300, 3), (600, 2)):
        out.append((f"random {n}x{n} k={k}", random_sparse(rng, n, n, k)))
    return out + cech_differentials()


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--skip-end-to-end", action="store_true")
    args = ap.parse_args(argv)
    try:
        from quaddef import _kernels as compiled
    except ImportError:
        print("compiled kernel not built; run: python3 setup.py build_ext --inplace")
        return 1
    print(f"selected backend: {exactla.BACKEND}")
    print(f"{'case':<26}{'shape':>12}{'rank':>7}{'cython s':>11}{'python s':>11}{'speedup':>9}")
    for label, m in cases(random.Random(0)):
        if m.nrows > m.ncols:
            m = m.transpose()
        rows = exactla._integer_rows(m)
        try:
            r_c = compiled.echelon_rank(rows, m.ncols)
        except OverflowError:
            print(f"{label:<26}: int64 overflow, the library falls back to Python here")
            continue
        r_p = _kernels_py.echelon_rank(rows, m.ncols)
        if r_c != r_p:
            print(f"{label}: kernels disagree ({r_c} vs {r_p})")
            return 2
        t_c = min(timeit.repeat(lambda: compiled.echelon_rank(rows, m.ncols), number=1, repeat=args.repeat))
        t_p = min(timeit.repeat(lambda: _kernels_py.echelon_rank(rows, m.ncols), number=1, repeat=args.repeat))
        shape = f"{m.nrows}x{m.ncols}"
        print(f"{label:<26}{shape:>12}{r_c:>7}{t_c:>11.4f}{t_p:>11.4f}{t_p / t_c:>8.1f}x")
    if not args.skip_end_to_end:
        end_to_end(["ideal-point-p2", "ideal-point-padded-p2"])
    return 0


if __name__ == "__main__":
    sys.exit(main())
