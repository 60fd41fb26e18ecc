"""Four-vector algebra, SL(2,C) Lorentz maps, spin-frames, null tetrads, Wigner phases.

Metric signature is (+,-,-,-). A null momentum k = omega*(1, dir) is represented
by its frequency and unit direction. Lorentz maps carry a 4x4 matrix together
with an SL(2,C) representative built from the same generator parameters, so the
pair is consistent by construction.

The spinor chart is the half-angle chart with its cut at dir = -z:

    pi(k)   = sqrt(2 omega) * (cos(t/2), sin(t/2) e^{i phi})
    omic(k) = (-sin(t/2) e^{-i phi}, cos(t/2)) / sqrt(2 omega)

with (t, phi) the polar coordinates of dir. The pair (pi, omic) has unit
symplectic pairing det2(pi, omic) = 1, and pi's flagpole reproduces k:
pi pi^dag = K(k) = k0*I + k.sigma.

The null tetrad (k, q, m, mbar) is built from spinor outer products:
k ~ pi pi^dag, q ~ omic omic^dag, m ~ omic (x) conj(pi). It satisfies
k.k = q.q = m.m = k.m = q.m = 0, k.q = 1, m.mbar = -1.

The Wigner phase 2*Theta(L, k) is extracted numerically from
A pi(L^-1 k) = e^{-i Theta(L,k)} pi(k); only 2*Theta mod 2pi is exposed
because the +/-A double-cover ambiguity shifts Theta by pi.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ChartError, ConsistencyError, InputError

__all__ = [
    "NullMomentum",
    "LorentzMap",
    "Spinor",
    "SpinFrame",
    "NullTetrad",
    "minkowski_dot",
    "identity_map",
    "boost",
    "rotation",
    "compose",
    "inverse",
    "apply",
    "standard_spinor",
    "spin_frame",
    "null_tetrad",
    "wigner_phase",
    "wrap_angle",
    "tetrad_covariance_residual",
    "tetrad_gauge_defect",
]

_CHART_TOL = 1e-9

_ETA = np.diag([1.0, -1.0, -1.0, -1.0])

_SIGMA = np.array(
    [
        [[0.0, 1.0], [1.0, 0.0]],
        [[0.0, -1.0j], [1.0j, 0.0]],
        [[1.0, 0.0], [0.0, -1.0]],
    ],
    dtype=np.complex128,
)


def wrap_angle(x):
    """Reduce an angle (or array of angles) to the interval (-pi, pi]."""
    return np.pi - np.mod(np.pi - np.asarray(x), 2.0 * np.pi)


def minkowski_dot(u, v) -> complex:
    """Signature (+,-,-,-) inner product of two four-vectors (complex allowed)."""
    u = np.asarray(u)
    v = np.asarray(v)
    return u[0] * v[0] - u[1] * v[1] - u[2] * v[2] - u[3] * v[3]


def _unit3(axis) -> np.ndarray:
    a = np.asarray(axis, dtype=np.float64).reshape(3)
    n = math.sqrt(float(a @ a))
    if not math.isfinite(n) or abs(n - 1.0) > 1e-10:
        raise InputError(f"axis must be a unit 3-vector, got |axis| = {n!r}")
    return a / n


@dataclass(frozen=True)
class NullMomentum:
    """Forward null four-vector: freq > 0 and a unit direction."""

    freq: float
    dir: np.ndarray

    def __post_init__(self):
        f = float(self.freq)
        if not (math.isfinite(f) and f > 0.0):
            raise InputError(f"freq must be positive and finite, got {self.freq!r}")
        d = np.asarray(self.dir, dtype=np.float64).reshape(3)
        n = math.sqrt(float(d @ d))
        if abs(n - 1.0) > 1e-12:
            raise InputError(f"|dir| must be 1 within 1e-12, got {n!r}")
        object.__setattr__(self, "freq", f)
        object.__setattr__(self, "dir", d)
        self.dir.setflags(write=False)

    @property
    def four_vec(self) -> np.ndarray:
        """k = freq*(1, dir); satisfies k.k = 0 exactly by construction."""
        return np.concatenate(([self.freq], self.freq * self.dir))


@dataclass(frozen=True)
class LorentzMap:
    """Proper orthochronous transformation: 4x4 matrix + SL(2,C) representative."""

    matrix: np.ndarray
    sl2c: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.float64).reshape(4, 4)
        a = np.asarray(self.sl2c, dtype=np.complex128).reshape(2, 2)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "sl2c", a)
        self.matrix.setflags(write=False)
        self.sl2c.setflags(write=False)


def identity_map() -> LorentzMap:
    return LorentzMap(np.eye(4), np.eye(2, dtype=np.complex128))


def boost(rapidity: float, axis) -> LorentzMap:
    """Pure boost with the given rapidity along a unit axis.

    Acting on momenta: a momentum parallel to the axis has its frequency scaled
    by e^rapidity.
    """
    eta = float(rapidity)
    if not math.isfinite(eta):
        raise InputError(f"rapidity must be finite, got {rapidity!r}")
    n = _unit3(axis)
    ch, sh = math.cosh(eta), math.sinh(eta)
    mat = np.eye(4)
    mat[0, 0] = ch
    mat[0, 1:] = sh * n
    mat[1:, 0] = sh * n
    mat[1:, 1:] += (ch - 1.0) * np.outer(n, n)
    nsig = n[0] * _SIGMA[0] + n[1] * _SIGMA[1] + n[2] * _SIGMA[2]
    a = math.cosh(eta / 2.0) * np.eye(2, dtype=np.complex128) + math.sinh(eta / 2.0) * nsig
    return LorentzMap(mat, a)


def rotation(angle: float, axis) -> LorentzMap:
    """Active right-handed rotation by `angle` about a unit axis."""
    chi = float(angle)
    if not math.isfinite(chi):
        raise InputError(f"angle must be finite, got {angle!r}")
    n = _unit3(axis)
    c, s = math.cos(chi), math.sin(chi)
    cross = np.array([[0.0, -n[2], n[1]], [n[2], 0.0, -n[0]], [-n[1], n[0], 0.0]])
    r3 = c * np.eye(3) + s * cross + (1.0 - c) * np.outer(n, n)
    mat = np.eye(4)
    mat[1:, 1:] = r3
    nsig = n[0] * _SIGMA[0] + n[1] * _SIGMA[1] + n[2] * _SIGMA[2]
    a = math.cos(chi / 2.0) * np.eye(2, dtype=np.complex128) - 1.0j * math.sin(chi / 2.0) * nsig
    return LorentzMap(mat, a)


def compose(a: LorentzMap, b: LorentzMap) -> LorentzMap:
    """Map that applies b first, then a (matrix product a.b)."""
    return LorentzMap(a.matrix @ b.matrix, a.sl2c @ b.sl2c)


def inverse(a: LorentzMap) -> LorentzMap:
    """Exact inverse: eta L^T eta for the matrix, adjugate for the unit-det sl2c."""
    minv = _ETA @ a.matrix.T @ _ETA
    s = a.sl2c
    sinv = np.array([[s[1, 1], -s[0, 1]], [-s[1, 0], s[0, 0]]], dtype=np.complex128)
    return LorentzMap(minv, sinv)


def apply(a: LorentzMap, k: NullMomentum) -> NullMomentum:
    """Image momentum L k. The frequency stays positive (orthochronous maps)."""
    v = a.matrix @ k.four_vec
    sp = v[1:]
    f = math.sqrt(float(sp @ sp))
    return NullMomentum(f, sp / f)


@dataclass(frozen=True)
class Spinor:
    """Two-component complex spinor."""

    c0: complex
    c1: complex

    @property
    def as_array(self) -> np.ndarray:
        return np.array([self.c0, self.c1], dtype=np.complex128)


@dataclass(frozen=True)
class SpinFrame:
    """Spinor pair (pi, omic) with unit symplectic pairing."""

    pi: Spinor
    omic: Spinor


@dataclass(frozen=True)
class NullTetrad:
    """Null tetrad (k, q, m, mbar) derived from the spin-frame at k."""

    k_vec: np.ndarray
    q_vec: np.ndarray
    m_vec: np.ndarray
    mbar_vec: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.mbar_vec is None:
            object.__setattr__(self, "mbar_vec", np.conj(self.m_vec))


def _chart_check_scalar(dir3: np.ndarray) -> None:
    dx, dy, dz = float(dir3[0]), float(dir3[1]), float(dir3[2])
    if math.sqrt(dx * dx + dy * dy + (dz + 1.0) ** 2) < _CHART_TOL:
        raise ChartError(
            "direction lies on the spinor chart cut (within 1e-9 of -z); "
            "rotate the scene away from the excluded direction"
        )


def _batch_spinors(freqs: np.ndarray, dirs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Chart spinor components (p0, p1) for arrays of momenta.

    freqs: (n,), dirs: (n,3).  Uses the closed forms
    p0 = sqrt(omega (1+dz)), p1 = sqrt(omega/(1+dz)) (dx + i dy),
    which satisfy the flagpole identity exactly.
    """
    freqs = np.asarray(freqs, dtype=np.float64)
    dirs = np.asarray(dirs, dtype=np.float64)
    dx, dy, dz = dirs[..., 0], dirs[..., 1], dirs[..., 2]
    dist2 = dx * dx + dy * dy + (dz + 1.0) ** 2
    if np.any(dist2 < _CHART_TOL * _CHART_TOL):
        raise ChartError(
            "a momentum direction lies on the spinor chart cut (within 1e-9 of -z)"
        )
    opz = 1.0 + dz
    p0 = np.sqrt(freqs * opz).astype(np.complex128)
    p1 = np.sqrt(freqs / opz) * (dx + 1.0j * dy)
    return p0, p1


def standard_spinor(k: NullMomentum) -> Spinor:
    """Flagpole spinor of k in the half-angle chart: pi pi^dag = K(k) exactly."""
    _chart_check_scalar(k.dir)
    p0, p1 = _batch_spinors(np.array([k.freq]), k.dir.reshape(1, 3))
    return Spinor(complex(p0[0]), complex(p1[0]))


def spin_frame(k: NullMomentum) -> SpinFrame:
    """Spin-frame (pi, omic) at k with pairing pi0*omic1 - pi1*omic0 = 1."""
    _chart_check_scalar(k.dir)
    dx, dy, dz = (float(v) for v in k.dir)
    w = k.freq
    opz = 1.0 + dz
    p0 = complex(math.sqrt(w * opz))
    p1 = math.sqrt(w / opz) * complex(dx, dy)
    # omic = (-sin(t/2) e^{-i phi}, cos(t/2)) / sqrt(2 w), written smoothly:
    o0 = -complex(dx, -dy) / (2.0 * math.sqrt(w * opz))
    o1 = complex(math.sqrt(opz / w) / 2.0)
    return SpinFrame(Spinor(p0, p1), Spinor(o0, o1))


def _vector_of_matrix(m00, m01, m10, m11, c):
    """Four-vector of a 2x2 matrix under the Pauli map K(v) = v0 I + v.sigma."""
    return np.array(
        [
            c * (m00 + m11),
            c * (m01 + m10),
            1.0j * c * (m01 - m10),
            c * (m00 - m11),
        ],
        dtype=np.complex128,
    )


def null_tetrad(k: NullMomentum) -> NullTetrad:
    """Null tetrad at k, all four legs built from the spin-frame."""
    fr = spin_frame(k)
    p = fr.pi.as_array
    o = fr.omic.as_array
    pc = np.conj(p)
    oc = np.conj(o)
    k_vec = _vector_of_matrix(p[0] * pc[0], p[0] * pc[1], p[1] * pc[0], p[1] * pc[1], 0.5).real
    q_vec = _vector_of_matrix(o[0] * oc[0], o[0] * oc[1], o[1] * oc[0], o[1] * oc[1], 1.0).real
    m_vec = math.sqrt(2.0) * _vector_of_matrix(
        o[0] * pc[0], o[0] * pc[1], o[1] * pc[0], o[1] * pc[1], 0.5
    )
    return NullTetrad(k_vec=k_vec, q_vec=q_vec, m_vec=m_vec)


def batch_spin_frames(
    freqs: np.ndarray, dirs: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Spin-frame components (p0, p1, o0, o1) for arrays of momenta.

    Vectorized form of spin_frame; the pairing p0*o1 - p1*o0 = 1 holds
    exactly for every entry.
    """
    freqs = np.asarray(freqs, dtype=np.float64)
    dirs = np.asarray(dirs, dtype=np.float64)
    p0, p1 = _batch_spinors(freqs, dirs)
    dx, dy, dz = dirs[..., 0], dirs[..., 1], dirs[..., 2]
    opz = 1.0 + dz
    o0 = -(dx - 1.0j * dy) / (2.0 * np.sqrt(freqs * opz))
    o1 = (np.sqrt(opz / freqs) / 2.0).astype(np.complex128)
    return p0, p1, o0, o1


def batch_m_vectors(freqs: np.ndarray, dirs: np.ndarray) -> np.ndarray:
    """Tetrad legs m(k_i) as an (n, 4) complex array (vectorized null_tetrad)."""
    p0, p1, o0, o1 = batch_spin_frames(freqs, dirs)
    pc0, pc1 = np.conj(p0), np.conj(p1)
    c = 0.5 * math.sqrt(2.0)
    m00, m01, m10, m11 = o0 * pc0, o0 * pc1, o1 * pc0, o1 * pc1
    return np.stack(
        [
            c * (m00 + m11),
            c * (m01 + m10),
            1.0j * c * (m01 - m10),
            c * (m00 - m11),
        ],
        axis=-1,
    )


def batch_wigner_phases(a: LorentzMap, freqs: np.ndarray, dirs: np.ndarray) -> np.ndarray:
    """2*Theta(L, k_i) for arrays of momenta, each reduced to (-pi, pi]."""
    return _batch_wigner(a, freqs, dirs)


def wigner_phase(a: LorentzMap, k: NullMomentum) -> float:
    """Value of 2*Theta(L, k), reduced to (-pi, pi].

    Computed from s = A pi(L^-1 k), which must be proportional to pi(k);
    the proportionality factor is e^{-i Theta}.
    """
    kpre = apply(inverse(a), k)
    s = a.sl2c @ standard_spinor(kpre).as_array
    p = standard_spinor(k).as_array
    i = int(np.argmax(np.abs(p)))
    ratio = s[i] / p[i]
    resid = float(np.max(np.abs(s - ratio * p))) / float(np.max(np.abs(p)))
    if resid >= 1e-8:
        raise ConsistencyError(
            f"A pi(L^-1 k) is not proportional to pi(k): relative residual {resid:.3e}"
        )
    return float(wrap_angle(-2.0 * np.angle(ratio)))


def _batch_wigner(a: LorentzMap, freqs: np.ndarray, dirs: np.ndarray) -> np.ndarray:
    """Vectorized 2*Theta(L, k_i) for arrays of momenta; returns values in (-pi, pi]."""
    freqs = np.asarray(freqs, dtype=np.float64)
    dirs = np.asarray(dirs, dtype=np.float64)
    inv = inverse(a)
    four = np.concatenate([freqs[:, None], freqs[:, None] * dirs], axis=1)
    pre = four @ inv.matrix.T
    pre_sp = pre[:, 1:]
    pre_f = np.sqrt(np.sum(pre_sp * pre_sp, axis=1))
    pre_d = pre_sp / pre_f[:, None]
    q0, q1 = _batch_spinors(pre_f, pre_d)
    s0 = a.sl2c[0, 0] * q0 + a.sl2c[0, 1] * q1
    s1 = a.sl2c[1, 0] * q0 + a.sl2c[1, 1] * q1
    p0, p1 = _batch_spinors(freqs, dirs)
    use0 = np.abs(p0) >= np.abs(p1)
    ratio = np.where(use0, s0 / np.where(use0, p0, 1.0), s1 / np.where(use0, 1.0, p1))
    scale = np.maximum(np.abs(p0), np.abs(p1))
    resid = np.maximum(np.abs(s0 - ratio * p0), np.abs(s1 - ratio * p1)) / scale
    worst = float(np.max(resid)) if resid.size else 0.0
    if worst >= 1e-8:
        raise ConsistencyError(
            f"A pi(L^-1 k) is not proportional to pi(k): relative residual {worst:.3e}"
        )
    return wrap_angle(-2.0 * np.angle(ratio))


def tetrad_covariance_residual(a: LorentzMap, k: NullMomentum) -> float:
    """Gauge-invariant covariance residual of the tetrad leg m under the map a.

    The transformation rule compared is L m(L^-1 k) = e^{+2i Theta(L,k)} m(k)
    (and the conjugate rule for mbar). The defect of the chart's m is always a
    complex multiple of k itself -- the spin-frame is fixed only up to
    omic -> omic + lambda*pi, which shifts m by lambda*k while preserving every
    spin-frame and tetrad invariant. This function therefore removes the
    k-collinear (gauge) component before taking the norm; the raw defect is
    available from tetrad_gauge_defect.
    """
    t = null_tetrad(k)
    tpre = null_tetrad(apply(inverse(a), k))
    two_theta = wigner_phase(a, k)
    worst = 0.0
    for mpre, mk, phase in (
        (tpre.m_vec, t.m_vec, np.exp(1.0j * two_theta)),
        (tpre.mbar_vec, t.mbar_vec, np.exp(-1.0j * two_theta)),
    ):
        d = a.matrix @ mpre - phase * mk
        c = minkowski_dot(d, t.q_vec)  # k.q = 1, so this is the k-component
        d_perp = d - c * t.k_vec
        worst = max(worst, float(np.linalg.norm(d_perp)))
    return worst


def tetrad_gauge_defect(a: LorentzMap, k: NullMomentum) -> tuple[float, float]:
    """Raw (unprojected) m-covariance defect and the modulus of its gauge coefficient.

    Returns (|| L m(L^-1 k) - e^{2i Theta} m(k) ||, |c|) where c is the
    coefficient of the k-collinear part of the defect. For rotations both
    numbers vanish to machine precision; for boosts the defect is nonzero but
    k-collinear, so the first number equals |c| * ||k|| up to rounding.
    """
    t = null_tetrad(k)
    tpre = null_tetrad(apply(inverse(a), k))
    two_theta = wigner_phase(a, k)
    d = a.matrix @ tpre.m_vec - np.exp(1.0j * two_theta) * t.m_vec
    c = minkowski_dot(d, t.q_vec)
    return float(np.linalg.norm(d)), float(abs(c))
