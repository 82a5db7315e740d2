"""Brute-force oracles and seeded generators shared by the test modules.

The oracles enumerate: row spaces as frozensets of vector tuples, kernels by
trying every vector, and pairings by explicit loops. They never call the
code paths they are used to check.
"""

from itertools import product

import numpy as np

from slicerank import (
    BlockStructure,
    FieldMatrix,
    PrimeField,
    SliceDecomposition,
    SliceTerm,
    Subspace,
    Tensor,
)


def all_vectors(p, n):
    for coeffs in product(range(p), repeat=n):
        yield np.array(coeffs, dtype=np.int64)


def span_tuples(rows, p):
    """Every vector in the row span, as a frozenset of tuples."""
    rows = np.asarray(rows, dtype=np.int64) % p
    k, n = rows.shape
    out = set()
    for coeffs in product(range(p), repeat=k):
        v = (np.array(coeffs, dtype=np.int64) @ rows) % p if k else np.zeros(n, dtype=np.int64)
        out.add(tuple(int(x) for x in v))
    return frozenset(out)


def brute_kernel_tuples(mat, p):
    """Kernel of a matrix found by trying every vector."""
    mat = np.asarray(mat, dtype=np.int64) % p
    n = mat.shape[1]
    out = set()
    for v in all_vectors(p, n):
        if not ((mat @ v) % p).any():
            out.add(tuple(int(x) for x in v))
    return frozenset(out)


def subspace_tuples(sub: Subspace):
    return span_tuples(sub.basis.data, sub.field.p)


def brute_matrix_rank(mat, p):
    """Rank as the log-size of the row span."""
    size = len(span_tuples(mat, p))
    rank = 0
    while p**rank < size:
        rank += 1
    return rank


def pairing_zero(t: Tensor, cert) -> bool:
    """Explicit check of the annihilation condition, one basis tuple at a time."""
    p = t.field.p
    rows_per_axis = [list(s.basis.data) for s in cert.subspaces]
    for combo in product(*rows_per_axis):
        total = t.data
        for u in combo:
            total = np.tensordot(u, total, axes=([0], [0])) % p
        if int(total) % p != 0:
            return False
    return True


def random_matrix(rng, field: PrimeField, rows, cols) -> FieldMatrix:
    return FieldMatrix(field, rng.integers(0, field.p, size=(rows, cols)))


def random_subspace(rng, field: PrimeField, n) -> Subspace:
    rows = int(rng.integers(0, n + 1))
    return Subspace.from_rows(field, rng.integers(0, field.p, size=(rows, n)), ambient_dim=n)


def random_decomposition(rng, field: PrimeField, shape, max_terms_per_axis=2) -> SliceDecomposition:
    terms = []
    for axis in range(len(shape)):
        rest = shape[:axis] + shape[axis + 1 :]
        for _ in range(int(rng.integers(0, max_terms_per_axis + 1))):
            u = rng.integers(0, field.p, size=shape[axis])
            v = rng.integers(0, field.p, size=rest)
            terms.append(SliceTerm(axis, u, v))
    return SliceDecomposition(field, tuple(shape), tuple(terms))


def random_distinguished_axis_tensor(rng, field: PrimeField, blocks: BlockStructure) -> Tensor:
    """Random tensor whose blocks vanish unless the last axis index is 2nd or all are 1st."""
    d = blocks.order
    data = np.zeros(blocks.shape, dtype=np.int64)
    for alpha in product(range(2), repeat=d):
        if alpha[-1] == 1 or all(a == 0 for a in alpha):
            sl = blocks.block_slices(alpha)
            size = tuple(s.stop - s.start for s in sl)
            data[sl] = rng.integers(0, field.p, size=size)
    return Tensor(field, blocks.shape, data)
