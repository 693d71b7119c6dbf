"""The compiled and pure-Python elimination kernels must agree exactly."""
import os
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadric_links import polytopes as poly
from quadric_links.homology import _sphere_faces
from quadric_links.kernel import accel

try:
    COMPILED = accel.backend_module("compiled")
except ImportError:
    COMPILED = None

PYTHON = accel.backend_module("python")
needs_compiled = pytest.mark.skipif(COMPILED is None, reason="compiled kernel not built")


def sweep(module, faces, n):
    table = module.FaceTable(faces)
    face_set = set(faces)
    full = (1 << n) - 1
    out = []
    for mask in range(1 << n):
        cone = mask & -mask if mask and mask not in face_set else 0
        out.append(table.induced(mask, cone))
        comp = full ^ mask
        if comp not in face_set:
            out.append(table.link(comp, comp & -comp))
    return out


@needs_compiled
@pytest.mark.parametrize("name", ["cube", "truncated_cube", "book:6", "cyclic_dual:4,7", "pentagon"])
def test_backends_agree_on_subset_sweeps(name):
    p = poly.builtin(name)
    faces = sorted(_sphere_faces(p))
    assert sweep(COMPILED, faces, p.n) == sweep(PYTHON, faces, p.n)


@needs_compiled
@settings(max_examples=100, deadline=None)
@given(st.lists(st.sets(st.integers(0, 7), min_size=1, max_size=4), min_size=1, max_size=10))
def test_backends_agree_on_random_cell_sets(faces):
    masks = {0}
    for f in faces:
        bits = [1 << v for v in f]
        for r in range(1 << len(bits)):
            masks.add(sum(b for t, b in enumerate(bits) if r >> t & 1))
    top = max(bin(m).count("1") for m in masks)
    by = [sorted(m for m in masks if bin(m).count("1") == q) for q in range(top + 1)]
    assert COMPILED.cells_homology(by) == PYTHON.cells_homology(by)


def test_pure_python_switch():
    code = "from quadric_links.kernel import accel; print(accel.BACKEND)"
    env = dict(os.environ, QUADRIC_LINKS_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@needs_compiled
def test_compiled_backend_is_selected_by_default():
    env = {k: v for k, v in os.environ.items() if k != "QUADRIC_LINKS_PURE_PYTHON"}
    out = subprocess.run([sys.executable, "-c", "from quadric_links.kernel import accel; print(accel.BACKEND)"], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "compiled"
