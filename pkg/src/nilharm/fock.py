"""Truncated Fock-space model of the square-integrable representations.

The representation of the Heisenberg-type quotient at frequency lam > 0
acts on entire functions of n complex variables by

    pi_lam(t, v) F(z) = e^{i lam t} e^{-lam |v|^2/4 - (lam/2) <z, v>} F(z + v),

with <z, v> = sum z_i conj(v_i); for lam < 0 the representation is the
entrywise conjugate of the one at |lam| (antiholomorphic model).  The
normalized monomials z^m / ||z^m|| form an orthonormal basis with
||z^m||^2 = prod m_i! (2/lam)^{|m|}, where the Gaussian measure is
normalized so that ||1|| = 1, hence <pi(0, v) 1, 1> = e^{-lam |v|^2/4}.

Matrix entries of pi(t, v) in this basis are finite sums and therefore
exact; truncation at total degree D only affects operator products
(composition leaks degree), so operator identities are asserted on
degrees <= D - 2.

Coordinates with negative frequency (needed when the conjugated
direction of the functional acts with mixed signs) use the conjugate
model per coordinate; the product of per-coordinate cocycles then
reproduces the group cocycle of the two-step law.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial
from typing import Optional

import numpy as np

from .numerics import node_budget


def monomials_of_degree(nvars, degree):
    """All exponent tuples of the given total degree, lex ascending."""
    if nvars == 0:
        return [()] if degree == 0 else []
    if nvars == 1:
        return [(degree,)]
    out = []
    for a in range(degree + 1):
        out.extend((a,) + rest for rest in monomials_of_degree(nvars - 1, degree - a))
    return out


class FockBasis:
    """Monomial multi-indices |m| <= max_degree in graded-lex order."""

    def __init__(self, n, max_degree):
        if n < 1 or max_degree < 0:
            raise ValueError("need n >= 1 and max_degree >= 0")
        self.n = int(n)
        self.max_degree = int(max_degree)
        idx = []
        self._degree_start = []
        for d in range(self.max_degree + 1):
            self._degree_start.append(len(idx))
            idx.extend(monomials_of_degree(self.n, d))
        self._degree_start.append(len(idx))
        self.indices = np.array(idx, dtype=int)
        self.degrees = self.indices.sum(axis=1)
        self.index_of = {tuple(m): i for i, m in enumerate(idx)}

    @property
    def count(self):
        return len(self.indices)

    def degree_slice(self, d):
        """Positions of the degree-d monomials (contiguous)."""
        return slice(self._degree_start[d], self._degree_start[d + 1])

    def norms(self, lam):
        """||z^m|| for lam > 0 under the unit-mass Gaussian weight."""
        if lam <= 0:
            raise ValueError("norms need lam > 0")
        logs = np.zeros(self.count)
        lf = np.cumsum(np.log(np.arange(1, self.max_degree + 1)))
        lf = np.concatenate([[0.0], lf])  # log m!
        for j in range(self.n):
            logs += lf[self.indices[:, j]]
        logs += self.degrees * np.log(2.0 / lam)
        return np.exp(0.5 * logs)

    def __repr__(self):
        return f"FockBasis(n={self.n}, max_degree={self.max_degree}, count={self.count})"


def _entry_series(mu, vj, r, m):
    """<pi_mu(v) e_m, e_r> for one coordinate, mu > 0, without the
    normalization ratio or Gaussian factor: the shift-series coefficient
    sum_q (-mu conj(v)/2)^(r-q)/(r-q)! C(m, q) v^(m-q)."""
    vj = np.asarray(vj, dtype=complex)
    out = np.zeros(vj.shape, dtype=complex)
    for q in range(min(r, m) + 1):
        term = ((-0.5 * mu * np.conj(vj)) ** (r - q) / factorial(r - q)) * (
            comb(m, q) * vj ** (m - q)
        )
        out += term
    return out


def _coord_table(mu, vj, dmax):
    """Full (dmax+1, dmax+1) entry table for one coordinate at one or
    more points, including norm ratios and the coordinate's Gaussian
    factor.  tab[r, m] = <pi_mu(v) e_m, e_r>."""
    vj = np.asarray(vj, dtype=complex)
    gauss = np.exp(-0.25 * mu * np.abs(vj) ** 2)
    lognorm = np.array(
        [0.5 * (np.log(float(factorial(m))) + m * np.log(2.0 / mu)) for m in range(dmax + 1)]
    )
    tab = np.zeros((dmax + 1, dmax + 1) + vj.shape, dtype=complex)
    for r in range(dmax + 1):
        for m in range(dmax + 1):
            ratio = np.exp(lognorm[r] - lognorm[m])
            tab[r, m] = gauss * ratio * _entry_series(mu, vj, r, m)
    return tab


def _as_complex_vector(v, n):
    v = np.asarray(v)
    if np.iscomplexobj(v):
        if v.shape[-1] != n:
            raise ValueError(f"expected {n} complex coordinates")
        return v.astype(complex)
    if v.shape[-1] == 2 * n:
        return v[..., 0::2] + 1j * v[..., 1::2]
    if v.shape[-1] == n:
        return v.astype(complex)
    raise ValueError(f"cannot interpret shape {v.shape} as C^{n}")


def pi_matrix(lam, t, v, basis: FockBasis, weights=None):
    """Matrix of pi_lam(t, v) on the normalized monomial basis.

    Parameters
    ----------
    lam : float, nonzero
        Frequency; negative values give the conjugate model.
    t : float
        Central coordinate; contributes the exact phase e^{i lam t}.
    v : array
        Point of V as n complex numbers (or 2n interleaved reals).
    basis : FockBasis
    weights : array, optional
        Per-coordinate frequency multipliers w_j (default all 1): the
        coordinate j evolves at frequency lam * w_j.  Signs select the
        conjugate model per coordinate.

    Returns
    -------
    (count, count) complex matrix B with B[r, m] = <pi(t, v) e_m, e_r>.
    Entries are exact (finite sums); only compositions are affected by
    truncation.
    """
    lam = float(lam)
    if lam == 0.0:
        raise ValueError("lam must be nonzero")
    alam, conj_all = abs(lam), lam < 0
    z = _as_complex_vector(v, basis.n)
    if weights is None:
        weights = np.ones(basis.n)
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (basis.n,) or np.any(weights == 0):
        raise ValueError("weights must be nonzero, one per coordinate")
    dmax = basis.max_degree
    ridx = basis.indices
    out = np.full((basis.count, basis.count), np.exp(1j * alam * float(t)), dtype=complex)
    for j in range(basis.n):
        mu = alam * abs(weights[j])
        tab = _coord_table(mu, np.array(z[j]), dmax)
        if weights[j] < 0:
            tab = np.conj(tab)
        out *= tab[ridx[:, None, j], ridx[None, :, j]]
    if conj_all:
        out = np.conj(out)
    return out


def matrix_coefficient(lam, h, hprime, t, v, basis: FockBasis, weights=None):
    """e_lam(h, h')(t, v) = <pi_lam(t, v) h, h'> for coefficient vectors
    h, h' over the basis."""
    b = pi_matrix(lam, t, v, basis, weights=weights)
    h = np.asarray(h, dtype=complex)
    hprime = np.asarray(hprime, dtype=complex)
    return complex(hprime.conj() @ (b @ h))


def coefficient_grid(lam, basis: FockBasis, m, r, t, v, weights=None):
    """e_lam(e_m, e_r)(t, v) = <pi_lam(t, v) e_m, e_r> evaluated on a
    batch of points: t (P,), v (P, n) complex.  Exact per point."""
    lam = float(lam)
    if lam == 0.0:
        raise ValueError("lam must be nonzero")
    alam = abs(lam)
    m = tuple(m)
    r = tuple(r)
    z = _as_complex_vector(np.asarray(v), basis.n)
    z = np.atleast_2d(z)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if weights is None:
        weights = np.ones(basis.n)
    weights = np.asarray(weights, dtype=float)
    out = np.exp(1j * alam * t).astype(complex)
    for j in range(basis.n):
        mu = alam * abs(weights[j])
        rj, mj = r[j], m[j]
        ratio = np.sqrt(factorial(rj) * (2.0 / mu) ** rj / (factorial(mj) * (2.0 / mu) ** mj))
        ent = (
            np.exp(-0.25 * mu * np.abs(z[:, j]) ** 2)
            * ratio
            * _entry_series(mu, z[:, j], rj, mj)
        )
        if weights[j] < 0:
            ent = np.conj(ent)
        out = out * ent
    if lam < 0:
        out = np.conj(out)
    return out


def truncation_defect(lam, t, v, basis: FockBasis, margin=2, weights=None):
    """Operator-norm defect of unitarity of pi(t, v) restricted to
    degrees <= max_degree - margin; bounds truncation leakage."""
    b = pi_matrix(lam, t, v, basis, weights=weights)
    g = b.conj().T @ b
    sel = basis.degrees <= basis.max_degree - margin
    d = g[np.ix_(sel, sel)] - np.eye(int(sel.sum()))
    return float(np.linalg.norm(d, 2))


# ---------------------------------------------------------------------------
# metaplectic decomposition bookkeeping
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MetaplecticComponent:
    """One irreducible component of the metaplectic action on the
    polynomial model, with its Fock monomial basis where the component
    is a span of monomials (cases I, V, VI, VII, IX-central)."""

    case: str
    index: tuple
    dim: int
    degree: int
    basis: Optional[tuple] = None


def homog_dim(nvars, d):
    """dim of the homogeneous degree-d polynomials in nvars complex
    variables (1 at d = 0 when nvars = 0)."""
    if nvars == 0:
        return 1 if d == 0 else 0
    return comb(nvars - 1 + d, d)


def gl_dim(hw, k):
    """Weyl dimension of the irreducible GL(k) module with highest
    weight the partition hw padded with zeros; 0 if hw needs more than k
    rows."""
    hw = [int(a) for a in hw]
    if any(hw[i] < hw[i + 1] for i in range(len(hw) - 1)) or (hw and hw[-1] < 0):
        raise ValueError("hw must be a partition")
    if len([a for a in hw if a > 0]) > k:
        return 0
    lam = hw + [0] * (k - len(hw))
    num, den = 1, 1
    for i in range(k):
        for j in range(i + 1, k):
            num *= lam[i] - lam[j] + j - i
            den *= j - i
    return num // den


def sp_dim(hw, n):
    """Weyl dimension of the irreducible Sp(n) module with highest
    weight the partition hw (padded); 0 if hw needs more than n rows."""
    hw = [int(a) for a in hw]
    if len([a for a in hw if a > 0]) > n:
        return 0
    lam = hw + [0] * (n - len(hw))
    rho = [n - i for i in range(n)]
    lr = [lam[i] + rho[i] for i in range(n)]
    num, den = 1, 1
    for i in range(n):
        num *= lr[i]
        den *= rho[i]
        for j in range(i + 1, n):
            num *= (lr[i] - lr[j]) * (lr[i] + lr[j])
            den *= (rho[i] - rho[j]) * (rho[i] + rho[j])
    return num // den


def _monomial_components(case, nvars, max_degree):
    out = []
    for d in range(max_degree + 1):
        for m in monomials_of_degree(nvars, d):
            out.append(MetaplecticComponent(case, m, 1, d, basis=(m,)))
    return out


def _degree_components(case, nvars, max_degree):
    out = []
    for j in range(max_degree + 1):
        mons = tuple(monomials_of_degree(nvars, j))
        out.append(MetaplecticComponent(case, (j,), len(mons), j, basis=mons))
    return out


def metaplectic_components(case, params, max_degree):
    """Irreducible components of the metaplectic action up to total
    degree max_degree, ordered by degree.

    For cases I, V, VI, VII (and the purely central case IX) the
    components are spans of monomials and carry their bases; for III,
    IV, VIII, X only the index enumeration with dimensions is returned.

    Parameters: I/V/VI/VII/IX take the integer case parameter n; III
    takes (k1, k2); VIII takes (k, n) with the keyword-free convention
    that n = 0 enumerations include only the indices the Sp(0) factor
    allows; X takes (m, k, n).
    """
    D = int(max_degree)
    if case == "I":
        n = int(params)
        return _degree_components(case, 2 * n, D)
    if case == "VII":
        return _degree_components(case, int(params), D)
    if case == "V":
        return _monomial_components(case, int(params), D)
    if case == "VI":
        n = int(params)
        if n % 2:
            raise ValueError("case VI components need even n")
        return _monomial_components(case, n // 2, D)
    if case == "IX":
        # purely central direction: U(n)-isotypic pieces, one per degree
        return _degree_components(case, int(params), D)
    if case == "III":
        k1, k2 = (int(a) for a in params)
        out = []
        for d in range(D + 1):
            for j in range(d + 1):
                for l1 in range(d - j + 1):
                    for l2 in range(d - j - l1 + 1):
                        s = d - j - l1 - l2
                        dim = homog_dim(2 * k1, j) * homog_dim(2 * k2, s)
                        if dim:
                            out.append(MetaplecticComponent(case, (j, l1, l2, s), dim, d))
        return out
    if case == "IV":
        n = int(params)
        out = []
        for d in range(D + 1):
            for r in range(d + 1):
                s = d - r
                for j in range(min(r, s) + 1):
                    for i in range(j + 1):
                        dim = sp_dim((r + s - j - i, j - i), n)
                        if dim:
                            out.append(MetaplecticComponent(case, (r, s, j, i), dim, d))
        return out
    if case == "VIII":
        k, n = (int(a) for a in params)
        out = []
        for d in range(D + 1):
            for r in range(d + 1):
                for s in range(d - r + 1):
                    l = d - r - s
                    lag = homog_dim(2 * n, l)
                    if lag == 0:
                        continue
                    for j in range(min(r, s) + 1):
                        dim = gl_dim((r + s - j, j), k) * lag
                        if dim:
                            out.append(MetaplecticComponent(case, (r, s, j, l), dim, d))
        return out
    if case == "X":
        m, k, n = (int(a) for a in params)
        out = []
        for d in range(D + 1):
            for dk in range(d + 1):
                for kvec in monomials_of_degree(m, dk):
                    rem = d - dk
                    for r in range(rem + 1):
                        for s in range(rem - r + 1):
                            j = rem - r - s
                            lag = homog_dim(2 * n, j)
                            if lag == 0:
                                continue
                            for i in range(min(r, s) + 1):
                                dim = gl_dim((r + s - i, i), k) * lag
                                if dim:
                                    out.append(
                                        MetaplecticComponent(case, (kvec, r, s, i, j), dim, d)
                                    )
        return out
    raise ValueError(f"unsupported case {case!r}")


def psi_numeric(case, lam, j, t, v, weights=None):
    """Partial trace of pi_lam(t, v) over the indexed metaplectic
    component, from exact diagonal matrix entries.

    Supported cases: I and VII (index j = scalar degree), V and VI
    (index j = monomial multi-index).  `weights` are per-coordinate
    frequency multipliers as in `pi_matrix`; the default (all ones)
    corresponds to the symplectically normalized coordinates in which
    the closed Laguerre forms are stated.
    """
    lam = float(lam)
    if lam == 0.0:
        raise ValueError("lam must be nonzero")
    if case in ("I", "VII"):
        deg = int(j[0]) if np.ndim(j) else int(j)
        nvars = None
    elif case in ("V", "VI"):
        mono = tuple(int(a) for a in np.atleast_1d(j))
        nvars = len(mono)
    else:
        raise ValueError(f"psi_numeric supports cases I, V, VI, VII; got {case!r}")
    z = np.asarray(v)
    if np.iscomplexobj(z):
        z = z.reshape(-1).astype(complex)
    else:
        # interleaved real coordinates (for case I the quaternionic
        # (1, i | j, k) pairs are the aligned complex pairs)
        z = np.asarray(z, dtype=float).reshape(-1)
        if len(z) % 2:
            raise ValueError("real V-coordinates must interleave complex pairs")
        z = z[0::2] + 1j * z[1::2]
    if nvars is None:
        nvars = len(z)
        mons = monomials_of_degree(nvars, deg)
    else:
        if len(z) != nvars:
            raise ValueError(f"expected {nvars} complex coordinates")
        mons = [mono]
    if weights is None:
        weights = np.ones(nvars)
    weights = np.asarray(weights, dtype=float)
    alam = abs(lam)
    total = 0.0
    for m in mons:
        term = 1.0
        for i, mi in enumerate(m):
            mu = alam * abs(weights[i])
            x = abs(z[i]) ** 2
            # diagonal entry: exact series, real-valued
            acc = 0.0
            for q in range(mi + 1):
                acc += comb(mi, q) * (-0.5 * mu * x) ** (mi - q) / factorial(mi - q)
            term *= acc * np.exp(-0.25 * mu * x)
        total += term
    phase = np.exp(1j * lam * float(t))
    return complex(phase * total)


# ---------------------------------------------------------------------------
# twisted convolution
# ---------------------------------------------------------------------------

def symplectic_form(w, v):
    """B(w, v) = -Im <w, v> on C^n, the bracket of the Heisenberg pair
    in aligned coordinates."""
    return -np.imag(np.sum(w * np.conj(v), axis=-1))


def twisted_convolution(f, g, lam, quad):
    """lam-twisted convolution on C^n.

    Parameters
    ----------
    f, g : callables
        Vectorized on complex points of shape (P, n).
    lam : float
    quad : QuadratureSpec
        Rule over R^(2n) (interleaved real coordinates) for the w
        integral.

    Returns
    -------
    callable evaluating (f x_lam g)(v) = int f(w) g(v - w)
    e^{(i lam / 2) B(w, v)} dw on complex points (P, n).
    """
    pts, wts = quad.grid()
    n = pts.shape[1] // 2
    w = pts[:, 0::2] + 1j * pts[:, 1::2]
    fw = np.asarray(f(w), dtype=complex) * wts

    def convolved(v):
        v = np.atleast_2d(_as_complex_vector(np.asarray(v), n))
        out = np.empty(len(v), dtype=complex)
        chunk = max(1, int(node_budget() // max(1, len(w))))
        for a in range(0, len(v), chunk):
            vb = v[a : a + chunk]
            diff = vb[:, None, :] - w[None, :, :]
            gv = np.asarray(g(diff.reshape(-1, n)), dtype=complex).reshape(len(vb), len(w))
            phase = np.exp(0.5j * lam * (-np.imag(w[None, :, :] * np.conj(vb[:, None, :])).sum(axis=-1)))
            out[a : a + chunk] = (fw[None, :] * gv * phase).sum(axis=1)
        return out

    return convolved
