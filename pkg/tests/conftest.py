"""Shared helpers: small independent oracles used across the test modules."""
from fractions import Fraction
from itertools import combinations

import pytest

from quadric_links import polytopes as poly


def cofactor_determinant(m):
    """Integer determinant by cofactor expansion (independent of the kernel)."""
    size = len(m)
    if size == 0:
        return 1
    if size == 1:
        return m[0][0]
    total = 0
    for j in range(size):
        if m[0][j]:
            minor = [row[:j] + row[j + 1 :] for row in m[1:]]
            total += (-1) ** j * m[0][j] * cofactor_determinant(minor)
    return total


def rank_mod(rows, prime):
    """Rank over GF(prime) (prime = 0 means over Q) by plain elimination."""
    if prime:
        a = [[x % prime for x in r] for r in rows]
    else:
        a = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    width = len(a[0]) if a else 0
    for col in range(width):
        pivot = next((r for r in range(rank, len(a)) if a[r][col]), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        inv = pow(int(a[rank][col]), -1, prime) if prime else 1 / a[rank][col]
        a[rank] = [(x * inv) % prime if prime else x * inv for x in a[rank]]
        for r in range(len(a)):
            if r != rank and a[r][col]:
                f = a[r][col]
                a[r] = [((x - f * y) % prime) if prime else x - f * y for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank


def reduced_betti_mod(face_sets, prime):
    """Reduced Betti numbers over GF(prime) or Q of a complex given by all its faces."""
    faces = sorted({tuple(sorted(f)) for f in face_sets} | {()}, key=lambda f: (len(f), f))
    top = max(len(f) for f in faces)
    by = {q: [f for f in faces if len(f) == q] for q in range(top + 1)}
    ranks = {}
    for q in range(1, top + 1):
        index = {f: i for i, f in enumerate(by[q - 1])}
        rows = []
        for f in by[q]:
            row = [0] * len(by[q - 1])
            for t in range(len(f)):
                row[index[f[:t] + f[t + 1 :]]] = (-1) ** t
            rows.append(row)
        ranks[q] = rank_mod(rows, prime) if rows and by[q - 1] else 0
    return {q - 1: len(by[q]) - ranks.get(q, 0) - ranks.get(q + 1, 0) for q in range(top + 1)}


def all_faces(maximal):
    out = set()
    for f in maximal:
        f = tuple(sorted(f))
        for r in range(len(f) + 1):
            out.update(combinations(f, r))
    return out


@pytest.fixture(scope="session")
def cube():
    return poly.builtin("cube")


@pytest.fixture(scope="session")
def truncated_cube():
    return poly.builtin("truncated_cube")


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
