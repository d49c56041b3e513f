"""Shared numerical kernels: Laguerre recurrences, Haar sampling,
Monte-Carlo averaging and tensor-product quadrature.

Everything here is deterministic given an explicit seed, and grid sizes
are guarded by the NILHARM_BUDGET environment variable (total tensor
nodes; default 3e7).
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass

import numpy as np
from scipy.linalg import qr

from . import quat

DEFAULT_BUDGET = 30_000_000


class BudgetError(RuntimeError):
    """Raised when a requested grid exceeds the configured node budget."""


def node_budget():
    raw = os.environ.get("NILHARM_BUDGET", "")
    if not raw:
        return DEFAULT_BUDGET
    return int(float(raw))


def as_rng(seed):
    """Coerce an int seed (or an existing Generator) to a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


# ---------------------------------------------------------------------------
# Laguerre polynomials
# ---------------------------------------------------------------------------

def laguerre(k, alpha, x):
    """Generalized Laguerre polynomial L_k^alpha(x), vectorized in x.

    Uses the stable upward three-term recurrence

        (m+1) L_{m+1} = (2m+1+alpha-x) L_m - (m+alpha) L_{m-1}.
    """
    if k < 0 or int(k) != k:
        raise ValueError("k must be a nonnegative integer")
    if alpha <= -1:
        raise ValueError("alpha must exceed -1")
    x = np.asarray(x, dtype=float)
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    for m in range(int(k)):
        prev, cur = cur, ((2 * m + 1 + alpha - x) * cur - (m + alpha) * prev) / (m + 1)
    return cur


def laguerre_all(kmax, alpha, x):
    """All of L_0^alpha ... L_kmax^alpha at once; shape (kmax+1,) + x.shape."""
    x = np.asarray(x, dtype=float)
    out = np.empty((kmax + 1,) + x.shape)
    out[0] = 1.0
    if kmax >= 1:
        out[1] = 1.0 + alpha - x
    for m in range(1, kmax):
        out[m + 1] = ((2 * m + 1 + alpha - x) * out[m] - (m + alpha) * out[m - 1]) / (m + 1)
    return out


def sphere_character(a):
    """Normalized average of exp(i a <xi, e>) over the unit sphere S^2.

    Equals sin(a)/a, with the even Taylor series used near a = 0; the
    classical Bessel form sqrt(pi/(2a)) J_{1/2}(a) is proportional to
    this (we keep the normalization value 1 at a = 0).
    """
    a = np.asarray(a, dtype=float)
    small = np.abs(a) < 1e-4
    a2 = a * a
    series = 1.0 - a2 / 6.0 + a2 * a2 / 120.0
    with np.errstate(invalid="ignore", divide="ignore"):
        full = np.where(small, series, np.sin(np.where(small, 1.0, a)) / np.where(small, 1.0, a))
    return full if full.shape else float(full)


# ---------------------------------------------------------------------------
# Haar sampling
# ---------------------------------------------------------------------------

_GROUP_RE = re.compile(r"^\s*(SO|SU|U|Sp|torus)\s*\(\s*(\d+)\s*\)\s*$")


def _qr_unitary(z):
    """QR with the phase correction that makes the factor Haar distributed."""
    q, r = qr(z)
    d = np.diagonal(r)
    ph = d / np.abs(d)
    return q * ph


def haar_orthogonal(n, rng):
    return _qr_unitary(rng.standard_normal((n, n)))


def haar_special_orthogonal(n, rng):
    q = haar_orthogonal(n, rng)
    if np.linalg.det(q) < 0:
        q = q.copy()
        q[:, 0] = -q[:, 0]
    return q


def haar_unitary(n, rng):
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    return _qr_unitary(z)


def haar_special_unitary(n, rng):
    u = haar_unitary(n, rng)
    det = np.linalg.det(u)
    return u * det ** (-1.0 / n)


def haar_torus(n, rng):
    return np.diag(np.exp(1j * rng.uniform(0.0, 2 * np.pi, size=n)))


def haar_symplectic_quat(n, rng):
    """Haar sample of Sp(n) as an (n, n, 4) quaternionic unitary matrix.

    Quaternionic Ginibre followed by quaternionic modified Gram-Schmidt;
    the diagonal "R" entries are positive reals, which fixes the phase
    ambiguity exactly as in the complex QR construction.
    """
    m = rng.standard_normal((n, n, 4))
    for col in range(n):
        v = m[:, col, :]
        for prev in range(col):
            u = m[:, prev, :]
            # quaternionic inner product <u, v> = sum conj(u_a) v_a
            coef = quat.qmul(quat.qconj(u), v).sum(axis=0)
            v = v - quat.qmul(u, coef[None, :])
        nrm = np.sqrt((v ** 2).sum())
        m[:, col, :] = v / nrm
    return m


def haar_symplectic(n, rng):
    """Haar sample of Sp(n) as a 2n x 2n complex unitary commuting with
    the quaternionic structure."""
    return quat.qmat_to_complex(haar_symplectic_quat(n, rng))


def haar_sample(group, seed=0):
    """One Haar sample from a named compact group.

    group is a string "SO(n)", "SU(n)", "U(n)", "Sp(n)" or "torus(n)",
    or a sequence of such strings for a direct product (a list of
    samples is returned in that case).
    """
    rng = as_rng(seed)
    if not isinstance(group, str):
        return [haar_sample(g, rng) for g in group]
    m = _GROUP_RE.match(group)
    if not m:
        raise ValueError(f"unrecognized group spec: {group!r}")
    kind, n = m.group(1), int(m.group(2))
    if n < 1:
        raise ValueError("group rank must be positive")
    if kind == "SO":
        return haar_special_orthogonal(n, rng)
    if kind == "SU":
        return haar_special_unitary(n, rng)
    if kind == "U":
        return haar_unitary(n, rng)
    if kind == "Sp":
        return haar_symplectic(n, rng)
    return haar_torus(n, rng)


# ---------------------------------------------------------------------------
# Monte-Carlo averaging
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MCEstimate:
    """Monte-Carlo mean with a standard error.

    For complex-valued integrands stderr combines the real and
    imaginary sample variances: sqrt((var Re + var Im) / samples).
    """

    mean: complex
    stderr: float
    samples: int
    seed: int

    def consistent_with(self, value, nsigma=3.0):
        return abs(self.mean - value) <= nsigma * max(self.stderr, 1e-300)


def estimate_from_samples(values, seed):
    values = np.asarray(values)
    n = values.shape[0]
    mean = values.mean(axis=0)
    if n > 1:
        var = values.real.var(ddof=1) + (values.imag.var(ddof=1) if np.iscomplexobj(values) else 0.0)
    else:
        var = 0.0
    return MCEstimate(mean=complex(mean), stderr=float(np.sqrt(var / n)), samples=n, seed=seed)


def mc_integrate(f, group, n, seed=0):
    """Average f over n Haar samples of the named group.

    f takes one group sample (matrix, or list of matrices for products)
    and returns a real or complex scalar.  Same seed and n give a
    bit-identical estimate.
    """
    if n < 1:
        raise ValueError("need at least one sample")
    rng = as_rng(seed)
    vals = np.empty(n, dtype=complex)
    for i in range(n):
        vals[i] = f(haar_sample(group, rng))
    if np.allclose(vals.imag, 0.0):
        vals = vals.real
    return estimate_from_samples(vals, seed if isinstance(seed, int) else -1)


# ---------------------------------------------------------------------------
# Tensor-product quadrature
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadratureSpec:
    """Tensor-product grid description.

    nodes is the per-axis node count; box the per-axis half-width
    (scalar broadcasts); rule "gauss-legendre" or "trapezoid".
    """

    nodes: int
    box: tuple
    rule: str = "gauss-legendre"

    @staticmethod
    def cube(nodes, half_width, dim, rule="gauss-legendre"):
        return QuadratureSpec(nodes=nodes, box=(float(half_width),) * dim, rule=rule)

    @property
    def dim(self):
        return len(self.box)

    def axis_rule(self, half_width):
        if self.rule == "gauss-legendre":
            x, w = np.polynomial.legendre.leggauss(self.nodes)
            return x * half_width, w * half_width
        if self.rule == "trapezoid":
            x = np.linspace(-half_width, half_width, self.nodes)
            w = np.full(self.nodes, 2.0 * half_width / (self.nodes - 1))
            w[0] *= 0.5
            w[-1] *= 0.5
            return x, w
        raise ValueError(f"unknown rule {self.rule!r}")

    def grid(self):
        """Return (points, weights): (P, dim) nodes and (P,) weights."""
        total = self.nodes ** self.dim
        if total > node_budget():
            raise BudgetError(
                f"{self.nodes}^{self.dim} = {total} nodes exceed NILHARM_BUDGET={node_budget()}"
            )
        axes, wts = zip(*(self.axis_rule(h) for h in self.box))
        mesh = np.meshgrid(*axes, indexing="ij")
        points = np.stack([m.ravel() for m in mesh], axis=-1)
        wmesh = np.meshgrid(*wts, indexing="ij")
        weights = np.ones(total)
        for w in wmesh:
            weights = weights * w.ravel()
        return points, weights


def gaussian_half_width(min_decay, tail=1e-16):
    """Half-width w with exp(-w^2 * min_decay) < tail."""
    if min_decay <= 0:
        raise ValueError("decay rate must be positive")
    return float(np.sqrt(-np.log(tail) / min_decay))


def grid_quadrature(f, spec):
    """Integrate a vectorized integrand over the spec's box.

    f maps an (P, dim) array of points to (P,) values.
    """
    points, weights = spec.grid()
    vals = np.asarray(f(points))
    return np.sum(weights * vals)
