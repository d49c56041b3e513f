"""Two-step nilpotent algebras n = g + V built from compact pairs.

The algebra is determined by an orthogonal representation pi of a
compact Lie algebra g on a Euclidean space V.  The bracket of two
vectors of V is the element of g defined by

    <bracket(u, v), X> = <pi(X) u, v>   for all X in g,

all other brackets vanish, and g is the center of n.  The group N is
V x g with the Baker-Campbell-Hausdorff product

    (z1, v1) (z2, v2) = (z1 + z2 + bracket(v1, v2) / 2, v1 + v2).

`build_case` constructs the classified models by label; see
`cases.CASES` for the parameter names of each family.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .cases import CASES
from .numerics import as_rng


@dataclass(frozen=True)
class CaseSpec:
    """Label plus parameters of one classified model, e.g.
    CaseSpec("VIII", {"k": 1, "n": 2})."""

    case: str
    params: dict

    @classmethod
    def from_json(cls, obj):
        obj = dict(obj)
        case = str(obj.pop("case"))
        return cls(case=case, params=obj)

    def to_json(self):
        return {"case": self.case, **self.params}

    def __str__(self):
        inner = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.case}({inner})"


class LauretAlgebra:
    """A concrete two-step algebra with orthonormal bases of g and V.

    Attributes
    ----------
    spec : CaseSpec
    dim_g, dim_v, dim_c, dim_gp : int
        Dimensions of g, V, the center c of g and of g' = [g, g].
        Coordinates on g list g' first and c last.
    basis_names : list of str
        Labels of the orthonormal basis of g.
    pi : ndarray, shape (dim_g, dim_v, dim_v)
        Skew matrices of the generators acting on V.
    v_blocks : list of (str, int)
        Irreducible block structure of V with real dimensions.
    """

    def __init__(self, spec: CaseSpec):
        if spec.case not in CASES:
            raise ValueError(f"unknown case label {spec.case!r}")
        cls, names = CASES[spec.case]
        missing = [k for k in names if k not in spec.params and k != "n"]
        extra = [k for k in spec.params if k not in names]
        if extra:
            raise ValueError(f"unexpected parameters for case {spec.case}: {extra}")
        if missing:
            raise ValueError(f"missing parameters for case {spec.case}: {missing}")
        self.spec = spec
        self.ops = cls(spec.params)
        self.pi = self.ops.pi
        self.dim_g = self.ops.dim_g
        self.dim_v = self.ops.dim_v
        self.dim_c = self.ops.dim_c
        self.dim_gp = self.ops.dim_gp
        self.basis_names = list(self.ops.names)
        self.v_blocks = list(self.ops.v_blocks)
        self._constants = None

    # -- coordinates ---------------------------------------------------------
    def split_center(self, x):
        """Split g-coordinates into (g' part, center part)."""
        x = np.asarray(x, dtype=float)
        return x[: self.dim_gp], x[self.dim_gp:]

    def join_center(self, xp, zc):
        return np.concatenate([np.atleast_1d(np.asarray(xp, dtype=float)),
                               np.atleast_1d(np.asarray(zc, dtype=float))])

    def pi_of(self, x):
        """The skew matrix pi(X) of X with g-coordinates x."""
        return np.tensordot(np.asarray(x, dtype=float), self.pi, axes=1)

    # -- bracket ---------------------------------------------------------------
    def bracket(self, u, v):
        """bracket(u, v) in g-coordinates, characterized by
        <bracket(u, v), X> = <pi(X) u, v>.  Leading batch axes of u and
        v broadcast."""
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        return np.einsum("xij,...j,...i->...x", self.pi, u, v)

    @property
    def bracket_tensor(self):
        """T with T[x, i, j] = <bracket(e_i, e_j), X_x> = <pi(X_x) e_i, e_j>
        (shape (dim_g, dim_v, dim_v))."""
        return np.swapaxes(self.pi, 1, 2).copy()

    @property
    def structure_constants(self):
        """f with [X_a, X_b] = sum_c f[a, b, c] X_c, recovered from the
        commutators of the pi matrices (pi is faithful on g)."""
        if self._constants is None:
            d = self.dim_g
            flat = self.pi.reshape(d, -1).T
            f = np.zeros((d, d, d))
            resid = 0.0
            for a in range(d):
                for b in range(a + 1, d):
                    comm = (self.pi[a] @ self.pi[b] - self.pi[b] @ self.pi[a]).ravel()
                    coef, res, *_ = np.linalg.lstsq(flat, comm, rcond=None)
                    f[a, b] = coef
                    f[b, a] = -coef
                    resid = max(resid, np.linalg.norm(flat @ coef - comm))
            self._constants = (f, resid)
        return self._constants[0]

    def g_bracket(self, x, y):
        """Bracket of two elements of g in g-coordinates."""
        f = self.structure_constants
        return np.einsum("abc,a,b->c", f, np.asarray(x, dtype=float), np.asarray(y, dtype=float))

    # -- group law ---------------------------------------------------------------
    def group_mult(self, p, q):
        """BCH product of two points p = (z, v) of N."""
        z1, v1 = p
        z2, v2 = q
        z1 = np.asarray(z1, dtype=float)
        z2 = np.asarray(z2, dtype=float)
        v1 = np.asarray(v1, dtype=float)
        v2 = np.asarray(v2, dtype=float)
        return (z1 + z2 + 0.5 * self.bracket(v1, v2), v1 + v2)

    def group_inverse(self, p):
        z, v = p
        return (-np.asarray(z, dtype=float), -np.asarray(v, dtype=float))

    def identity_point(self):
        return (np.zeros(self.dim_g), np.zeros(self.dim_v))

    def root_system(self):
        return self.ops.root_system()

    def __repr__(self):
        return f"LauretAlgebra({self.spec}, dim_g={self.dim_g}, dim_v={self.dim_v})"


def build_case(case, **params) -> LauretAlgebra:
    """Construct a classified model.

    Parameters
    ----------
    case : str or CaseSpec or dict
        Label "I".."X" with keyword parameters, a CaseSpec, or a JSON
        dict {"case": ..., <params>}.
    """
    if isinstance(case, CaseSpec):
        spec = case
    elif isinstance(case, dict):
        spec = CaseSpec.from_json(case)
    else:
        spec = CaseSpec(str(case), dict(params))
    return LauretAlgebra(spec)


def bracket_of(alg: LauretAlgebra, u, v):
    """bracket(u, v) for u, v in V, in g-coordinates."""
    return alg.bracket(u, v)


@dataclass(frozen=True)
class OrthAutomorphism:
    """An automorphism of n acting orthogonally: v -> v_mat v on V and
    z -> g_mat z on g."""

    g_mat: np.ndarray
    v_mat: np.ndarray

    def apply(self, z, v):
        return self.g_mat @ np.asarray(z, dtype=float), self.v_mat @ np.asarray(v, dtype=float)

    def apply_functional(self, x):
        """Push a functional's g-coordinates forward (same as the
        g-action since the matrix is orthogonal)."""
        return self.g_mat @ np.asarray(x, dtype=float)


def apply_automorphism(alg: LauretAlgebra, k: OrthAutomorphism, point):
    """Apply k to a point (z, v) of N."""
    z, v = point
    return k.apply(z, v)


def _materialize_batch(alg: LauretAlgebra, batch, count):
    """Turn a G' sample batch of closures into explicit (Ad, pi) matrix
    pairs, identity on the center."""
    dgp, dc, dv = alg.dim_gp, alg.dim_c, alg.dim_v
    admats = np.zeros((count, alg.dim_g, alg.dim_g))
    for i in range(dgp):
        admats[:, :dgp, i] = batch.ad(np.eye(dgp)[i])
    for i in range(dc):
        admats[:, dgp + i, dgp + i] = 1.0
    vmats = np.zeros((count, dv, dv))
    for j in range(dv):
        vmats[:, :, j] = batch.act_v(np.eye(dv)[j])
    return admats, vmats


def sample_automorphisms(alg: LauretAlgebra, rng=None, count=8, include_u=True):
    """Haar-ish sample of orthogonal automorphisms: Ad(g) x pi(g) for g
    in G', plus intertwiners that fix g where the case provides them."""
    rng = as_rng(rng)
    batch = alg.ops.sample_gprime(rng, count)
    admats, vmats = _materialize_batch(alg, batch, count)
    out = [OrthAutomorphism(admats[s], vmats[s]) for s in range(count)]
    if include_u:
        for _ in range(max(2, count // 4)):
            u = alg.ops.u_part_automorphism(rng)
            if u is None:
                break
            out.append(OrthAutomorphism(np.eye(alg.dim_g), np.asarray(u, dtype=float)))
    return out


def sample_k_actions(alg: LauretAlgebra, rng=None, count=8):
    """Haar sample of the full compact factor K acting on N: each
    element composes a G' pair (Ad, pi) with an independent
    V-intertwiner that fixes g, where the case provides one."""
    rng = as_rng(rng)
    batch = alg.ops.sample_gprime(rng, count)
    admats, vmats = _materialize_batch(alg, batch, count)
    out = []
    for s in range(count):
        vm = vmats[s]
        u = alg.ops.u_part_automorphism(rng)
        if u is not None:
            vm = np.asarray(u, dtype=float) @ vm
        out.append(OrthAutomorphism(admats[s], vm))
    return out


@dataclass
class StructureReport:
    """Residuals of the defining identities, all of which should sit at
    rounding level for a correctly assembled model."""

    spec: CaseSpec
    max_skewness: float
    max_closure_residual: float
    max_jacobi_residual: float
    max_invariance_residual: float
    max_bracket_residual: float
    bracket_rank: int
    dim_g: int
    trials: int

    def passed(self, tol=1e-10):
        return (
            self.max_skewness <= tol
            and self.max_closure_residual <= tol
            and self.max_jacobi_residual <= tol
            and self.max_invariance_residual <= tol
            and self.max_bracket_residual <= tol
            and self.bracket_rank == self.dim_g
        )

    def summary(self):
        flag = "ok" if self.passed() else "FAILED"
        return (
            f"{self.spec}: skew={self.max_skewness:.2e} closure={self.max_closure_residual:.2e} "
            f"jacobi={self.max_jacobi_residual:.2e} invariance={self.max_invariance_residual:.2e} "
            f"bracket={self.max_bracket_residual:.2e} rank={self.bracket_rank}/{self.dim_g} [{flag}]"
        )


def check_structure(alg: LauretAlgebra, rng=None, trials=100) -> StructureReport:
    """Verify the defining identities of the model.

    Checks pi skewness, closure of commutators of pi matrices inside
    pi(g) (with the Jacobi identity and invariance of the inner product
    for the recovered structure constants), the bracket identity
    <bracket(u, v), X> = <pi(X) u, v> on random triples, and that the
    brackets of V with itself span all of g.
    """
    rng = as_rng(rng)
    skew = float(np.max(np.abs(alg.pi + np.swapaxes(alg.pi, 1, 2))))
    f = alg.structure_constants
    closure = alg._constants[1]
    d = alg.dim_g
    # Jacobi: sum over cyclic permutations of f([a,b],c)
    jac = np.einsum("abx,xcy->abcy", f, f)
    jacobi = jac + np.einsum("bcx,xay->abcy", f, f) + np.einsum("cax,xby->abcy", f, f)
    jacobi_res = float(np.max(np.abs(jacobi))) if d else 0.0
    invariance = float(np.max(np.abs(f + np.swapaxes(f, 1, 2)))) if d else 0.0
    bracket_res = 0.0
    for _ in range(trials):
        u = rng.standard_normal(alg.dim_v)
        v = rng.standard_normal(alg.dim_v)
        x = rng.standard_normal(alg.dim_g)
        lhs = float(alg.bracket(u, v) @ x)
        rhs = float(alg.pi_of(x) @ u @ v)
        scale = max(1.0, abs(lhs), abs(rhs))
        bracket_res = max(bracket_res, abs(lhs - rhs) / scale)
    mats = []
    for _ in range(4 * alg.dim_g + 8):
        u = rng.standard_normal(alg.dim_v)
        v = rng.standard_normal(alg.dim_v)
        mats.append(alg.bracket(u, v))
    rank = int(np.linalg.matrix_rank(np.stack(mats), tol=1e-8))
    return StructureReport(
        spec=alg.spec,
        max_skewness=skew,
        max_closure_residual=closure,
        max_jacobi_residual=jacobi_res,
        max_invariance_residual=invariance,
        max_bracket_residual=bracket_res,
        bracket_rank=rank,
        dim_g=alg.dim_g,
        trials=trials,
    )
