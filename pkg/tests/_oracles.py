"""Shared independent oracles for the test suite.

The chamber-chart Jacobian here is measured by matrix exponentials and
central finite differences only; it never touches the root-product
formula it is used to verify.
"""

import numpy as np
from scipy.linalg import expm, null_space


def _coords_fn(basis):
    """Coordinates in an orthonormal matrix basis under
    <A, B> = Re tr(A B^dagger); asserts orthonormality."""
    stack = np.stack([np.asarray(b, dtype=complex) for b in basis])
    gram = np.real(np.einsum("aij,bij->ab", stack, np.conj(stack)))
    assert np.allclose(gram, np.eye(len(stack)), atol=1e-12), "basis not orthonormal"

    def coords(mat):
        return np.real(np.einsum("kij,ij->k", np.conj(stack), np.asarray(mat, dtype=complex)))

    def matrix(c):
        return np.tensordot(np.asarray(c, dtype=float), stack, axes=1)

    return coords, matrix


def _angle_directions(factor):
    """Raw angle-space perturbation directions (su: sum-zero plane)."""
    if factor.kind == "su":
        return null_space(np.ones((1, factor.angle_len))).T
    return np.eye(factor.angle_len)


def chamber_jacobian_fd(factor, angles, g0=None, step=1e-5):
    """|det dPhi| of the conjugation chart Phi(g, H) = Ad(g) H at the
    point (g0, h_matrix(angles)), by central finite differences.

    Tangent coordinates: an orthonormal basis of the Cartan directions
    (orthonormalized h_matrix images) plus an orthonormal basis of
    their complement in the factor's matrix basis.  Ad(g0) is isometric
    so the determinant is independent of g0; passing one exercises the
    chart away from the identity coset.
    """
    coords, matrix = _coords_fn(factor.basis())
    dim = factor.dim
    h0 = np.asarray(factor.h_matrix(angles), dtype=complex)
    traw = np.stack([coords(factor.h_matrix(q)) for q in _angle_directions(factor)])
    tdirs, _ = np.linalg.qr(traw.T)  # (dim, rank) orthonormal
    mdirs = null_space(tdirs.T)  # (dim, dim - rank) orthonormal
    dirs = np.concatenate([mdirs, tdirs], axis=1)
    assert dirs.shape == (dim, dim)
    nm = mdirs.shape[1]
    if g0 is None:
        g0 = np.eye(h0.shape[0], dtype=complex)

    def phi(p):
        y = matrix(dirs[:, :nm] @ p[:nm])
        h = h0 + matrix(tdirs @ p[nm:])
        g = g0 @ expm(y)
        return coords(factor.conjugate(g, h))

    cols = np.empty((dim, dim))
    for a in range(dim):
        e = np.zeros(dim)
        e[a] = step
        cols[:, a] = (phi(e) - phi(-e)) / (2.0 * step)
    return abs(np.linalg.det(cols))
