"""Concrete models for the classified pairs (g, V).

Each case bundles an orthonormal basis of g = g' + c (center last), the
stack of skew matrices pi(X_i) on V, the block structure of V, bridges
between g'-coordinates and the matrix models used by the torus module,
weight tables for the Pfaffian where available, and batched Haar
samplers for G' used by orbit integrals.

Conventions fixed here and relied on elsewhere:

* su(2) is identified with the imaginary quaternions via
  i <-> diag(1j, -1j), j <-> [[0, 1], [-1, 0]], k <-> [[0, 1j], [1j, 0]].
* Complex blocks C^m sit inside R^(2m) with interleaved coordinates
  (Re z_1, Im z_1, Re z_2, ...); quaternionic blocks use (1, i, j, k)
  components per coordinate.
* The inner product on the center is normalized so that the generator
  acting as multiplication by 1j on its block has norm one.  This makes
  central characters integral (zeta(t Z0) = 1j t) and removes stray
  sqrt(dim) factors from the densities and spherical functions.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import block_diag

from . import quat, torus
from .numerics import haar_special_orthogonal, haar_special_unitary, haar_unitary

E1 = np.array([[1j, 0], [0, -1j]])
E2 = np.array([[0, 1], [-1, 0]], dtype=complex)
E3 = np.array([[0, 1j], [1j, 0]])
SU2_MATS = (E1, E2, E3)
SU2_QUATS = (quat.I, quat.J, quat.K)


def realify(a):
    """Complex (m, m) matrix as a real (2m, 2m) matrix on interleaved
    coordinates."""
    a = np.asarray(a, dtype=complex)
    m = a.shape[0]
    out = np.zeros((2 * m, 2 * m))
    out[0::2, 0::2] = a.real
    out[0::2, 1::2] = -a.imag
    out[1::2, 0::2] = a.imag
    out[1::2, 1::2] = a.real
    return out


def complex_vec(x):
    x = np.asarray(x, dtype=float)
    return x[..., 0::2] + 1j * x[..., 1::2]


def real_vec(z):
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape[:-1] + (2 * z.shape[-1],))
    out[..., 0::2] = z.real
    out[..., 1::2] = z.imag
    return out


def cross_matrix(u):
    u1, u2, u3 = u
    return np.array([[0.0, -u3, u2], [u3, 0.0, -u1], [-u2, u1, 0.0]])


class GPrimeBatch:
    """A batch of Haar samples of G' exposed through their actions."""

    def __init__(self, size, ad, ad_inv, act_v):
        self.size = size
        self.ad = ad          # x (dgp,) -> (S, dgp), Ad(g) x
        self.ad_inv = ad_inv  # x (dgp,) -> (S, dgp), Ad(g^-1) x
        self.act_v = act_v    # v (dV,)  -> (S, dV), pi(g) v


def _identity_batch(size, dgp, dv):
    def ad(x):
        return np.broadcast_to(np.asarray(x, dtype=float), (size, dgp)).copy()

    def act_v(v):
        return np.broadcast_to(np.asarray(v, dtype=float), (size, dv)).copy()

    return GPrimeBatch(size, ad, ad, act_v)


def _su_like_batch(us, basis_stack, act_v):
    """Ad and Ad^-1 through matrix conjugation, coefficients via the
    orthonormal basis (works for su(n) and so(n) models)."""
    conj_t = us.conj().swapaxes(-1, -2)
    bconj = basis_stack.conj()

    def _coeffs(mats):
        return np.real(np.einsum("sab,iab->si", mats, bconj))

    def ad(x):
        xm = np.tensordot(np.asarray(x, dtype=float), basis_stack, axes=1)
        return _coeffs(us @ xm @ conj_t)

    def ad_inv(x):
        xm = np.tensordot(np.asarray(x, dtype=float), basis_stack, axes=1)
        return _coeffs(conj_t @ xm @ us)

    return ad, ad_inv, act_v


class CaseOps:
    """Shared plumbing; subclasses fill in the per-case data."""

    label = "?"
    has_weights = False

    def __init__(self, params):
        self.params = dict(params)

    # -- structure ---------------------------------------------------------
    @property
    def dim_g(self):
        return self.pi.shape[0]

    @property
    def dim_gp(self):
        return self.dim_g - self.dim_c

    @property
    def dim_v(self):
        return self.pi.shape[1]

    # -- torus bridges -----------------------------------------------------
    root_spec = None

    def root_system(self):
        if self.root_spec is None:
            return torus.RootSystem(factors=(), n_abelian=self.dim_c)
        return torus.root_system(self.root_spec)

    def to_factor_mats(self, xp):
        raise NotImplementedError(f"case {self.label} has no Cartan bridge")

    def from_factor_mats(self, mats):
        raise NotImplementedError(f"case {self.label} has no Cartan bridge")

    def embed_angles(self, angles):
        rs = self.root_system()
        return self.from_factor_mats(torus.chamber_matrices(rs, tuple(np.atleast_1d(a) for a in angles)))

    def weights(self, angles, zc):
        raise NotImplementedError(f"case {self.label} has no tabulated weight data")

    # -- samplers ----------------------------------------------------------
    def sample_gprime(self, rng, size):
        return _identity_batch(size, self.dim_gp, self.dim_v)

    def u_part_automorphism(self, rng):
        """One orthogonal intertwiner from U (identity on g), or None."""
        return None

    # -- Fock bridge ---------------------------------------------------------
    fock_n = None

    def to_complex(self, v):
        raise NotImplementedError(f"case {self.label} has no aligned complex structure")


def _su2_to_factor(xp):
    xp = np.asarray(xp, dtype=float)
    return xp[0] * E1 + xp[1] * E2 + xp[2] * E3


def _su2_from_factor(m):
    return np.array([m[0, 0].imag, m[0, 1].real, m[0, 1].imag])


def _quat_block_batch(g, v, n):
    """Left-multiply the n quaternionic coordinates of v by the batch g."""
    vq = quat.quat_coords(np.asarray(v, dtype=float))
    out = quat.qvec_mul(g, vq)
    return out.reshape(g.shape[0], 4 * n)


class CaseI(CaseOps):
    """su(2) acting on H^n by left quaternion multiplication."""

    label = "I"
    has_weights = True
    root_spec = "su(2)"

    def __init__(self, params):
        super().__init__(params)
        n = int(params["n"])
        if n < 1:
            raise ValueError("case I needs n >= 1")
        self.n = n
        self.dim_c = 0
        self.names = ["i", "j", "k"]
        self.v_blocks = [("(C^2)^n", 4 * n)]
        self.pi = np.stack(
            [block_diag(*([quat.left_mult_matrix(q)] * n)) for q in SU2_QUATS]
        )
        self.fock_n = 2 * n

    def to_factor_mats(self, xp):
        return [_su2_to_factor(xp)]

    def from_factor_mats(self, mats):
        return _su2_from_factor(mats[0])

    def weights(self, angles, zc):
        th = float(np.atleast_1d(angles[0])[0])
        return [(th, 2 * self.n), (-th, 2 * self.n)]

    def sample_gprime(self, rng, size):
        g = quat.random_unit(rng, size)
        rot = quat.rotation_matrix(g)

        def ad(x):
            return np.einsum("sab,b->sa", rot, np.asarray(x, dtype=float))

        def ad_inv(x):
            return np.einsum("sba,b->sa", rot, np.asarray(x, dtype=float))

        def act_v(v):
            return _quat_block_batch(g, v, self.n)

        return GPrimeBatch(size, ad, ad_inv, act_v)

    def u_part_automorphism(self, rng):
        a = quat.random_unit(rng)
        # right multiplication by the conjugate commutes with all left
        # multiplications and is orthogonal
        block = quat.right_mult_matrix(quat.qconj(a))
        return block_diag(*([block] * self.n))

    def to_complex(self, v):
        return complex_vec(v)


class CaseII(CaseI):
    """su(2) on R^3 + H^n; never square integrable."""

    label = "II"
    has_weights = False
    root_spec = "su(2)"

    def __init__(self, params):
        n = int(params["n"])
        if n < 0:
            raise ValueError("case II needs n >= 0")
        CaseOps.__init__(self, params)
        self.n = n
        self.dim_c = 0
        self.names = ["i", "j", "k"]
        self.v_blocks = [("R^3", 3), ("(C^2)^n", 4 * n)]
        mats = []
        for u, q in zip(np.eye(3), SU2_QUATS):
            rot = 2.0 * cross_matrix(u)
            blocks = [rot] + [quat.left_mult_matrix(q)] * n
            mats.append(block_diag(*blocks))
        self.pi = np.stack(mats)
        self.fock_n = None

    def weights(self, angles, zc):
        raise NotImplementedError("case II has no tabulated weight data")

    def sample_gprime(self, rng, size):
        g = quat.random_unit(rng, size)
        rot = quat.rotation_matrix(g)

        def ad(x):
            return np.einsum("sab,b->sa", rot, np.asarray(x, dtype=float))

        def ad_inv(x):
            return np.einsum("sba,b->sa", rot, np.asarray(x, dtype=float))

        def act_v(v):
            v = np.asarray(v, dtype=float)
            first = np.einsum("sab,b->sa", rot, v[:3])
            if self.n == 0:
                return first
            rest = _quat_block_batch(g, v[3:], self.n)
            return np.concatenate([first, rest], axis=1)

        return GPrimeBatch(size, ad, ad_inv, act_v)

    def u_part_automorphism(self, rng):
        return None

    def to_complex(self, v):
        raise NotImplementedError("case II has no aligned complex structure")


class CaseIII(CaseOps):
    """su(2)+su(2) on H^k1 + R^4 + H^k2 (R^4 carries the so(4) action)."""

    label = "III"
    root_spec = "su(2)+su(2)"

    def __init__(self, params):
        super().__init__(params)
        k1, k2 = int(params["k1"]), int(params["k2"])
        if k1 < 0 or k2 < 0 or k1 + k2 < 1:
            raise ValueError("case III needs k1, k2 >= 0 with k1 + k2 >= 1")
        self.k1, self.k2 = k1, k2
        self.dim_c = 0
        self.names = ["i1", "j1", "k1", "i2", "j2", "k2"]
        self.v_blocks = [("(C^2)^k1", 4 * k1), ("R^4", 4), ("(C^2)^k2", 4 * k2)]
        mats = []
        for q in SU2_QUATS:
            blocks = [quat.left_mult_matrix(q)] * k1 + [quat.left_mult_matrix(q)] + [np.zeros((4, 4))] * k2
            mats.append(block_diag(*blocks))
        for q in SU2_QUATS:
            blocks = [np.zeros((4, 4))] * k1 + [-quat.right_mult_matrix(q)] + [quat.left_mult_matrix(q)] * k2
            mats.append(block_diag(*blocks))
        self.pi = np.stack(mats)

    def to_factor_mats(self, xp):
        return [_su2_to_factor(xp[:3]), _su2_to_factor(xp[3:])]

    def from_factor_mats(self, mats):
        return np.concatenate([_su2_from_factor(mats[0]), _su2_from_factor(mats[1])])

    def sample_gprime(self, rng, size):
        g1 = quat.random_unit(rng, size)
        g2 = quat.random_unit(rng, size)
        rot1, rot2 = quat.rotation_matrix(g1), quat.rotation_matrix(g2)
        k1, k2 = self.k1, self.k2

        def _split(x):
            x = np.asarray(x, dtype=float)
            return x[:3], x[3:]

        def ad(x):
            a, b = _split(x)
            return np.concatenate(
                [np.einsum("sab,b->sa", rot1, a), np.einsum("sab,b->sa", rot2, b)], axis=1
            )

        def ad_inv(x):
            a, b = _split(x)
            return np.concatenate(
                [np.einsum("sba,b->sa", rot1, a), np.einsum("sba,b->sa", rot2, b)], axis=1
            )

        def act_v(v):
            v = np.asarray(v, dtype=float)
            parts = []
            if k1:
                parts.append(_quat_block_batch(g1, v[: 4 * k1], k1))
            mid = v[4 * k1: 4 * k1 + 4]
            parts.append(quat.qmul(g1, quat.qmul(mid, quat.qconj(g2))))
            if k2:
                parts.append(_quat_block_batch(g2, v[4 * k1 + 4:], k2))
            return np.concatenate(parts, axis=1)

        return GPrimeBatch(size, ad, ad_inv, act_v)


class CaseIV(CaseOps):
    """sp(2) acting componentwise on (H^2)^n."""

    label = "IV"
    root_spec = "sp(2)"

    def __init__(self, params):
        super().__init__(params)
        n = int(params["n"])
        if n < 1:
            raise ValueError("case IV needs n >= 1")
        self.n = n
        self.dim_c = 0
        self.qbasis = torus.sp_basis_quat(2)
        self.names = [f"sp2_{i}" for i in range(len(self.qbasis))]
        self.v_blocks = [("(C^4)^n", 8 * n)]
        mats = []
        for b in self.qbasis:
            blk = np.block(
                [[quat.left_mult_matrix(b[a, c]) for c in range(2)] for a in range(2)]
            )
            mats.append(block_diag(*([blk] * n)))
        self.pi = np.stack(mats)
        self._qstack = np.stack(self.qbasis)

    def to_factor_mats(self, xp):
        xq = np.tensordot(np.asarray(xp, dtype=float), self._qstack, axes=1)
        return [quat.qmat_to_complex(xq)]

    def from_factor_mats(self, mats):
        xq = quat.complex_to_qmat(np.asarray(mats[0]))
        return np.einsum("abc,iabc->i", xq, self._qstack)

    def sample_gprime(self, rng, size):
        from .numerics import haar_symplectic_quat

        gs = np.stack([haar_symplectic_quat(2, rng) for _ in range(size)])
        gdag = quat.qmat_dagger(gs)
        qstack = self._qstack

        def _coeffs(mats):
            return np.einsum("sabc,iabc->si", mats, qstack)

        def ad(x):
            xq = np.tensordot(np.asarray(x, dtype=float), qstack, axes=1)
            return _coeffs(quat.qmat_mul(quat.qmat_mul(gs, xq[None]), gdag))

        def ad_inv(x):
            xq = np.tensordot(np.asarray(x, dtype=float), qstack, axes=1)
            return _coeffs(quat.qmat_mul(quat.qmat_mul(gdag, xq[None]), gs))

        def act_v(v):
            vq = quat.quat_coords(np.asarray(v, dtype=float)).reshape(self.n, 2, 4)
            cols = [quat.qmat_vec(gs, vq[l]) for l in range(self.n)]
            return np.concatenate([c.reshape(size, 8) for c in cols], axis=1)

        return GPrimeBatch(size, ad, ad_inv, act_v)


class CaseV(CaseOps):
    """su(n) acting on C^n, n >= 3."""

    label = "V"
    has_weights = True

    def __init__(self, params):
        super().__init__(params)
        n = int(params["n"])
        if n < 3:
            raise ValueError("case V needs n >= 3")
        self.n = n
        self.dim_c = 0
        self.basis = torus.su_basis(n)
        self._bstack = np.stack(self.basis)
        self.names = [f"su{n}_{i}" for i in range(len(self.basis))]
        self.v_blocks = [("C^n", 2 * n)]
        self.pi = np.stack([realify(b) for b in self.basis])
        self.root_spec = f"su({n})"
        self.fock_n = n

    def to_factor_mats(self, xp):
        return [np.tensordot(np.asarray(xp, dtype=float), self._bstack, axes=1)]

    def from_factor_mats(self, mats):
        return np.real(np.einsum("ab,iab->i", np.asarray(mats[0]), self._bstack.conj()))

    def weights(self, angles, zc):
        th = np.atleast_1d(angles[0])
        return [(float(t), 1) for t in th] + [(-float(t), 1) for t in th]

    def _unitary_batch(self, rng, size):
        return np.stack([haar_special_unitary(self.n, rng) for _ in range(size)])

    def sample_gprime(self, rng, size):
        us = self._unitary_batch(rng, size)

        def act_v(v):
            return real_vec(np.einsum("sab,b->sa", us, complex_vec(v)))

        ad, ad_inv, act_v = _su_like_batch(us, self._bstack, act_v)
        return GPrimeBatch(size, ad, ad_inv, act_v)

    def u_part_automorphism(self, rng):
        return realify(np.exp(1j * rng.uniform(0, 2 * np.pi)) * np.eye(self.n))

    def to_complex(self, v):
        return complex_vec(v)


class CaseVI(CaseOps):
    """Free two-step algebra: so(n) acting on R^n."""

    label = "VI"

    def __init__(self, params):
        super().__init__(params)
        n = int(params["n"])
        if n < 2:
            raise ValueError("case VI needs n >= 2")
        self.n = n
        self.basis = torus.so_basis(n)
        self._bstack = np.stack(self.basis) if self.basis else np.zeros((0, n, n))
        self.names = [f"so{n}_{i}" for i in range(len(self.basis))]
        self.v_blocks = [("R^n", n)]
        self.pi = np.stack([b for b in self.basis])
        # so(2) is abelian: the whole of g is then center
        self.dim_c = 1 if n == 2 else 0
        if n % 2 == 0 and n >= 4:
            self.root_spec = f"so({n})"
            self.has_weights = True
        elif n == 2:
            self.root_spec = None
            self.has_weights = True
        self.fock_n = n // 2 if n % 2 == 0 else None

    def to_factor_mats(self, xp):
        if self.n == 2:
            raise NotImplementedError("so(2) is central; no Cartan bridge")
        return [np.tensordot(np.asarray(xp, dtype=float), self._bstack, axes=1)]

    def from_factor_mats(self, mats):
        return np.einsum("ab,iab->i", np.asarray(mats[0], dtype=float), self._bstack)

    def weights(self, angles, zc):
        if self.n % 2:
            raise NotImplementedError("weight data covers even n only")
        if self.n == 2:
            t = float(np.atleast_1d(zc)[0]) / np.sqrt(2.0)
            return [(t, 1), (-t, 1)]
        th = np.atleast_1d(angles[0])
        return [(float(t), 1) for t in th] + [(-float(t), 1) for t in th]

    def sample_gprime(self, rng, size):
        if self.n == 2:
            return _identity_batch(size, 0, self.dim_v)
        os = np.stack([haar_special_orthogonal(self.n, rng) for _ in range(size)])

        def act_v(v):
            return np.einsum("sab,b->sa", os, np.asarray(v, dtype=float))

        ad, ad_inv, act_v = _su_like_batch(os.astype(complex), self._bstack.astype(complex), act_v)
        return GPrimeBatch(size, ad, ad_inv, act_v)

    def to_complex(self, v):
        if self.n % 2:
            raise NotImplementedError("odd free case has no aligned complex structure")
        return complex_vec(v)


class CaseVII(CaseOps):
    """The Heisenberg pair: g = R acting on C^n by multiples of 1j."""

    label = "VII"
    has_weights = True

    def __init__(self, params):
        super().__init__(params)
        n = int(params["n"])
        if n < 1:
            raise ValueError("case VII needs n >= 1")
        self.n = n
        self.dim_c = 1
        self.names = ["t"]
        self.v_blocks = [("C^n", 2 * n)]
        self.pi = realify(1j * np.eye(n))[None, :, :]
        self.fock_n = n

    def weights(self, angles, zc):
        t = float(np.atleast_1d(zc)[0])
        return [(t, self.n), (-t, self.n)]

    def u_part_automorphism(self, rng):
        return realify(haar_unitary(self.n, rng))

    def to_complex(self, v):
        return complex_vec(v)


class CaseVIII(CaseOps):
    """u(2) on (C^2)^k + (C^2)^n; the center acts only on the first block."""

    label = "VIII"
    has_weights = True
    root_spec = "su(2)"

    def __init__(self, params):
        super().__init__(params)
        k, n = int(params["k"]), int(params.get("n", 0))
        if k < 1 or n < 0:
            raise ValueError("case VIII needs k >= 1 and n >= 0")
        self.k, self.n = k, n
        self.dim_c = 1
        self.names = ["i", "j", "k", "z0"]
        self.v_blocks = [("(C^2)^k", 4 * k), ("(C^2)^n", 4 * n)]
        mats = []
        for m2, q in zip(SU2_MATS, SU2_QUATS):
            blocks = [realify(m2)] * k + [quat.left_mult_matrix(q)] * n
            mats.append(block_diag(*blocks))
        central = block_diag(*([realify(1j * np.eye(2))] * k + [np.zeros((4, 4))] * n))
        mats.append(central)
        self.pi = np.stack(mats)

    def to_factor_mats(self, xp):
        return [_su2_to_factor(xp)]

    def from_factor_mats(self, mats):
        return _su2_from_factor(mats[0])

    def weights(self, angles, zc):
        th = float(np.atleast_1d(angles[0])[0])
        t = float(np.atleast_1d(zc)[0])
        out = [(th + t, self.k), (-th + t, self.k), (th - t, self.k), (-th - t, self.k)]
        if self.n:
            out += [(th, 2 * self.n), (-th, 2 * self.n)]
        return out

    def sample_gprime(self, rng, size):
        g = quat.random_unit(rng, size)
        rot = quat.rotation_matrix(g)
        su2 = quat.to_su2(g)
        k, n = self.k, self.n

        def ad(x):
            return np.einsum("sab,b->sa", rot, np.asarray(x, dtype=float))

        def ad_inv(x):
            return np.einsum("sba,b->sa", rot, np.asarray(x, dtype=float))

        def act_v(v):
            v = np.asarray(v, dtype=float)
            zk = complex_vec(v[: 4 * k]).reshape(k, 2)
            out = np.einsum("sab,cb->sca", su2, zk).reshape(size, 2 * k)
            parts = [real_vec(out)]
            if n:
                parts.append(_quat_block_batch(g, v[4 * k:], n))
            return np.concatenate(parts, axis=1)

        return GPrimeBatch(size, ad, ad_inv, act_v)

    def u_part_automorphism(self, rng):
        u = haar_unitary(self.k, rng)
        big = np.kron(u, np.eye(2))
        return block_diag(realify(big), np.eye(4 * self.n))


class CaseIX(CaseOps):
    """u(n) = su(n) + R Z0 acting on C^n, n >= 3."""

    label = "IX"
    has_weights = True

    def __init__(self, params):
        super().__init__(params)
        n = int(params["n"])
        if n < 3:
            raise ValueError("case IX needs n >= 3")
        self.n = n
        self.dim_c = 1
        self.basis = torus.su_basis(n)
        self._bstack = np.stack(self.basis)
        self.names = [f"su{n}_{i}" for i in range(len(self.basis))] + ["z0"]
        self.v_blocks = [("C^n", 2 * n)]
        mats = [realify(b) for b in self.basis] + [realify(1j * np.eye(n))]
        self.pi = np.stack(mats)
        self.root_spec = f"su({n})"
        self.fock_n = n

    def to_factor_mats(self, xp):
        return [np.tensordot(np.asarray(xp, dtype=float), self._bstack, axes=1)]

    def from_factor_mats(self, mats):
        return np.real(np.einsum("ab,iab->i", np.asarray(mats[0]), self._bstack.conj()))

    def weights(self, angles, zc):
        th = np.atleast_1d(angles[0])
        t = float(np.atleast_1d(zc)[0])
        return [(float(a) + t, 1) for a in th] + [(-float(a) - t, 1) for a in th]

    def sample_gprime(self, rng, size):
        us = np.stack([haar_special_unitary(self.n, rng) for _ in range(size)])

        def act_v(v):
            return real_vec(np.einsum("sab,b->sa", us, complex_vec(v)))

        ad, ad_inv, act_v = _su_like_batch(us, self._bstack, act_v)
        return GPrimeBatch(size, ad, ad_inv, act_v)

    def u_part_automorphism(self, rng):
        return realify(np.exp(1j * rng.uniform(0, 2 * np.pi)) * np.eye(self.n))

    def to_complex(self, v):
        return complex_vec(v)


class CaseX(CaseOps):
    """Worked instance su(m) + su(2) + c on C^m + (C^2)^k + (C^2)^n.

    The one-dimensional center acts as multiplication by 1j on both the
    C^m and (C^2)^k blocks; the general members of this family are not
    built.
    """

    label = "X"

    def __init__(self, params):
        super().__init__(params)
        m, k, n = int(params["m"]), int(params["k"]), int(params.get("n", 0))
        if m < 3 or k < 1 or n < 0:
            raise ValueError("case X instance needs m >= 3, k >= 1, n >= 0")
        self.m, self.k, self.n = m, k, n
        self.dim_c = 1
        self.su_basis = torus.su_basis(m)
        self._bstack = np.stack(self.su_basis)
        self.names = (
            [f"su{m}_{i}" for i in range(len(self.su_basis))] + ["i", "j", "k", "z0"]
        )
        self.v_blocks = [("C^m", 2 * m), ("(C^2)^k", 4 * k), ("(C^2)^n", 4 * n)]
        zero_m = np.zeros((2 * m, 2 * m))
        mats = []
        for b in self.su_basis:
            mats.append(block_diag(realify(b), np.zeros((4 * k + 4 * n, 4 * k + 4 * n))))
        for m2, q in zip(SU2_MATS, SU2_QUATS):
            blocks = [zero_m] + [realify(m2)] * k + [quat.left_mult_matrix(q)] * n
            mats.append(block_diag(*blocks))
        central = block_diag(
            realify(1j * np.eye(m)), *([realify(1j * np.eye(2))] * k + [np.zeros((4, 4))] * n)
        )
        mats.append(central)
        self.pi = np.stack(mats)
        self.root_spec = f"su({m})+su(2)"

    def to_factor_mats(self, xp):
        xp = np.asarray(xp, dtype=float)
        d = len(self.su_basis)
        return [np.tensordot(xp[:d], self._bstack, axes=1), _su2_to_factor(xp[d:])]

    def from_factor_mats(self, mats):
        first = np.real(np.einsum("ab,iab->i", np.asarray(mats[0]), self._bstack.conj()))
        return np.concatenate([first, _su2_from_factor(mats[1])])

    def sample_gprime(self, rng, size):
        us = np.stack([haar_special_unitary(self.m, rng) for _ in range(size)])
        g = quat.random_unit(rng, size)
        rot = quat.rotation_matrix(g)
        su2 = quat.to_su2(g)
        m, k, n = self.m, self.k, self.n
        d = len(self.su_basis)
        ad_su, ad_inv_su, _ = _su_like_batch(us, self._bstack, None)

        def ad(x):
            x = np.asarray(x, dtype=float)
            return np.concatenate([ad_su(x[:d]), np.einsum("sab,b->sa", rot, x[d:])], axis=1)

        def ad_inv(x):
            x = np.asarray(x, dtype=float)
            return np.concatenate([ad_inv_su(x[:d]), np.einsum("sba,b->sa", rot, x[d:])], axis=1)

        def act_v(v):
            v = np.asarray(v, dtype=float)
            zfirst = np.einsum("sab,b->sa", us, complex_vec(v[: 2 * m]))
            parts = [real_vec(zfirst)]
            if k:
                zk = complex_vec(v[2 * m: 2 * m + 4 * k]).reshape(k, 2)
                out = np.einsum("sab,cb->sca", su2, zk)
                parts.append(real_vec(out.reshape(size, -1)))
            if n:
                parts.append(_quat_block_batch(g, v[2 * m + 4 * k:], n))
            return np.concatenate(parts, axis=1)

        return GPrimeBatch(size, ad, ad_inv, act_v)


CASES = {
    "I": (CaseI, ("n",)),
    "II": (CaseII, ("n",)),
    "III": (CaseIII, ("k1", "k2")),
    "IV": (CaseIV, ("n",)),
    "V": (CaseV, ("n",)),
    "VI": (CaseVI, ("n",)),
    "VII": (CaseVII, ("n",)),
    "VIII": (CaseVIII, ("k", "n")),
    "IX": (CaseIX, ("n",)),
    "X": (CaseX, ("m", "k", "n")),
}
