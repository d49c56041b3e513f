"""Skew forms B_x on V, their Pfaffians, and square integrability.

A functional on the center g of n = g + V is identified with its metric
dual X in g.  The associated bilinear form is

    B_x(u, v) = <pi(X) u, v>,

and the coadjoint orbit of the functional is flat exactly when B_x is
nondegenerate ("square-integrable" below).  For most cases the absolute
Pfaffian of B_x has a closed product form over the weights of the
complexified V restricted to a Cartan subalgebra containing the
conjugated X; `pfaffian_via_weights` evaluates those products, while
`pfaffian_abs` computes |Pf| numerically from any skew matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import torus
from .algebra import LauretAlgebra

_RANK_TOL = 1e-10


def skew_form(alg: LauretAlgebra, x):
    """Matrix M = pi(X) of the form B_x(u, v) = <M u, v> on V."""
    return alg.pi_of(x)


def pfaffian_abs(mat):
    """|Pf(M)| of a real skew-symmetric matrix, 0 when dim is odd.

    Computed as the product of the positive eigenvalues of 1j M, which
    is stable for the moderate dimensions used here.
    """
    mat = np.asarray(mat, dtype=float)
    n = mat.shape[0]
    if n % 2 == 1:
        return 0.0
    if n == 0:
        return 1.0
    ev = np.linalg.eigvalsh(1j * mat)
    pos = ev[ev > 0]
    if len(pos) < n // 2:
        return 0.0
    return float(np.prod(np.sort(ev)[n // 2:]))


@dataclass(frozen=True)
class SquareIntegrability:
    """Classification verdict for one functional."""

    square_integrable: bool
    kernel_dim: int
    pfaffian: float

    @property
    def verdict(self):
        return "SquareIntegrable" if self.square_integrable else "Degenerate"


def classify(alg: LauretAlgebra, x, tol=_RANK_TOL) -> SquareIntegrability:
    """Decide square integrability of the functional dual to x.

    The kernel dimension is the numerical nullity of B_x (singular
    values below tol times the largest one).
    """
    m = skew_form(alg, x)
    s = np.linalg.svd(m, compute_uv=False)
    smax = s[0] if len(s) else 0.0
    if smax == 0.0:
        rank = 0
    else:
        rank = int(np.sum(s > tol * smax))
    kernel = alg.dim_v - rank
    return SquareIntegrability(
        square_integrable=(kernel == 0 and alg.dim_v > 0),
        kernel_dim=kernel,
        pfaffian=pfaffian_abs(m),
    )


class Functional:
    """A functional on g, dual to the g-coordinates x.

    Carries the polar data used downstream: the norm lam = |x|, the unit
    direction y, and the dominant chamber representative of the g' part
    of y together with the conjugating torus data.
    """

    def __init__(self, alg: LauretAlgebra, x):
        x = np.asarray(x, dtype=float).copy()
        if x.shape != (alg.dim_g,):
            raise ValueError(f"expected g-coordinates of length {alg.dim_g}")
        self.alg = alg
        self.x = x
        self.norm = float(np.linalg.norm(x))
        self.y = x / self.norm if self.norm > 0 else x.copy()

    @cached_property
    def chamber(self):
        """(angles, zc, regular): dominant angles of the g' part of the
        unit direction y, its central coordinates, and chamber
        regularity."""
        yp, zc = self.alg.split_center(self.y)
        if self.alg.dim_gp == 0:
            return (), zc, True
        rs = self.alg.root_system()
        if not rs.factors:
            # g' is nonabelian but carries no implemented torus factor
            # (free case with odd n); chamber coordinates are undefined
            raise NotImplementedError(
                f"case {self.alg.spec.case} has no Cartan chamber for its "
                "g' part")
        mats = self.alg.ops.to_factor_mats(yp)
        _, point = torus.to_chamber(rs, mats)
        return point.angles, zc, point.regular

    @property
    def regular(self):
        return self.chamber[2]

    def classify(self, tol=_RANK_TOL) -> SquareIntegrability:
        return classify(self.alg, self.x, tol=tol)


def weight_table(alg: LauretAlgebra, x):
    """Weights of the complexified V against the conjugated direction of
    x, as (value, multiplicity) pairs; the form B_x has eigenvalue pairs
    +- 1j * value with that multiplicity.

    Only tabulated for the cases where V decomposes into explicit weight
    spaces (I, V, VI even, VII, VIII, IX); raises NotImplementedError
    otherwise.
    """
    if not alg.ops.has_weights:
        raise NotImplementedError(
            f"no tabulated weights for case {alg.spec.case}; use pfaffian_abs"
        )
    xp, zc = alg.split_center(np.asarray(x, dtype=float))
    if alg.dim_gp:
        rs = alg.root_system()
        mats = alg.ops.to_factor_mats(xp)
        _, point = torus.to_chamber(rs, mats)
        angles = point.angles
    else:
        angles = ()
    return alg.ops.weights(angles, zc)


def pfaffian_via_weights(alg: LauretAlgebra, x):
    """|Pf(B_x)| as the product of |value|^(mult/2) over the weight
    table; agrees with pfaffian_abs(skew_form(alg, x)) on the tabulated
    cases."""
    table = weight_table(alg, x)
    out = 1.0
    for value, mult in table:
        out *= abs(value) ** (mult / 2.0)
    return float(out)
