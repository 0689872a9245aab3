"""Time a few fixed jobs under both scalar backends.

Each backend runs in its own interpreter because the scalar type is chosen
at import time.  Usage::

    python3 benchmarks/bench_backends.py [--repeat 3]
"""

import argparse
import json
import os
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]

JOBS = [
    ("rank1", "rank1_shear.json"),
    ("rank1", "rank1_jordan3.json"),
    ("rank1", "rank1_given_L.json"),
    ("airy", "airy_square_block.json"),
    ("jordan", "jordan_mixed.json"),
]

# runs inside the child interpreter
_CHILD = r"""
import json, sys, time, io, contextlib
from ncdx import cli
from ncdx._scalar import BACKEND
out = {"backend": BACKEND, "times": {}}
for mode, path in json.loads(sys.argv[1]):
    best = None
    for _ in range(int(sys.argv[2])):
        t = time.perf_counter()
        with contextlib.redirect_stdout(io.StringIO()):
            code = cli.main([mode, "--input", path])
        dt = time.perf_counter() - t
        assert code == 0, (mode, path, code)
        best = dt if best is None else min(best, dt)
    out["times"]["%s %s" % (mode, path.rsplit("/", 1)[-1])] = best
print(json.dumps(out))
"""


def run(backend, repeat):
    env = dict(os.environ, NCDX_SCALAR=backend)
    jobs = [(m, str(ROOT / "fixtures" / f)) for m, f in JOBS]
    res = subprocess.run([sys.executable, "-c", _CHILD, json.dumps(jobs), str(repeat)],
                         env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    fast, slow = run("gmpy2", args.repeat), run("python", args.repeat)
    print("%-28s %10s %10s %7s" % ("job", fast["backend"], slow["backend"], "ratio"))
    for job, t in fast["times"].items():
        s = slow["times"][job]
        print("%-28s %9.3fs %9.3fs %6.2fx" % (job, t, s, s / t))


if __name__ == "__main__":
    main()
