"""Compare the compiled and pure-Python elimination kernels on subset sweeps.

Run: python3 benchmarks/bench_kernel.py [fixture ...]
Both backends must return identical homology for every subset; the script
exits nonzero otherwise.
"""
import sys
import time

from quadric_links.homology import _sphere_faces
from quadric_links.kernel.accel import backend_module
from quadric_links.polytopes import builtin

DEFAULT = ["cube", "truncated_cube", "book:6", "cyclic_dual:4:8", "rp2_truncation"]


def sweep(module, faces, n):
    table = module.FaceTable(faces)
    face_set = set(faces)
    out = []
    for mask in range(1 << n):
        cone = mask & -mask if mask and mask not in face_set else 0
        out.append(table.induced(mask, cone))
    return out


def main(names):
    try:
        compiled = backend_module("compiled")
    except ImportError:
        print("compiled kernel not built; nothing to compare")
        return 1
    python = backend_module("python")
    status = 0
    print(f"{'fixture':<20}{'n':>4}{'python s':>11}{'compiled s':>12}{'speedup':>9}")
    for name in names:
        p = builtin(name)
        faces = sorted(_sphere_faces(p))
        t0 = time.perf_counter()
        slow = sweep(python, faces, p.n)
        t1 = time.perf_counter()
        fast = sweep(compiled, faces, p.n)
        t2 = time.perf_counter()
        same = [tuple(map(tuple, a)) for a in slow] == [tuple(map(tuple, b)) for b in fast]
        if not same:
            status = 1
        print(f"{name:<20}{p.n:>4}{t1 - t0:>11.3f}{t2 - t1:>12.3f}{(t1 - t0) / max(t2 - t1, 1e-9):>8.1f}x{'' if same else '  MISMATCH'}")
    return status


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:] or DEFAULT))
