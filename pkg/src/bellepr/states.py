"""Two-photon amplitudes, Bell-state constructors, polarization-angle fields.

Helicity amplitudes psi_ss'(k, k') are built from the spin-frame chart:

* ``bell11`` / ``bell12``: psi_+-(k,k') = m(k).mbar(k'), psi_-+ = conj of
  the tetrad part; the diagonal value is psi_+-(k,k) = -1 and
  |psi_+-| = cos^2(gamma/2) where gamma is the angle between the two
  directions.  Opposite-helicity pairs only.
* ``bell21`` / ``bell22``: psi_++(k,k') = conj(D(pi(k), pi(k')))^2 with D the
  symplectic spinor pairing, psi_-- its conjugate; |psi_++| = 2 k.k' (Lorentz
  invariant) and the diagonal vanishes.  Equal-helicity pairs only.
* ``general``: an explicit table of evaluators for all four slots.

The two kinds in each pair share one amplitude table; they differ in which
phase condition (difference- or sum-coupled, plus or minus branch) their
polarization-angle field satisfies.  A field solving the plus-branch
condition solves the minus branch after a quarter-turn shift: subtracting
pi/4 from one arm of a difference-coupled field (condition 11 <-> 12), or
pi/4 overall for a sum-coupled one (condition 21 <-> 22).

Each slot is multiplied by a product envelope g(k) g(k') when one is given.
Equal-helicity bell amplitudes transform exactly under
psi(L^-1 k, L^-1 k') = e^{2is Theta(L,k)} e^{2is' Theta(L,k')} psi(k, k');
opposite-helicity ones obey the same rule under rotations, while boosts add
a defect tied to the k-collinear gauge freedom of the chart's m leg (see
spinor_tetrad).

Polarization-angle fields theta(k) come in constant, azimuthal
(theta0 + c*phi(k)) and tabulated (nearest-axis cone constants) kinds; a
field may carry a composed Lorentz map, evaluating as
theta(L^-1 k) + 2*Theta(L, k), the Wigner-shifted transform of the base
field.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Callable, Mapping, NamedTuple

import numpy as np

from .errors import InputError
from .measure import DetectorRegion, QuadratureSpec, full_sphere_region, invariant_node_set
from .spinor_tetrad import (
    LorentzMap,
    NullMomentum,
    _batch_spinors,
    _batch_wigner,
    apply,
    batch_m_vectors,
    inverse,
    wigner_phase,
    wrap_angle,
)
from .vacuum import VacuumDensity, evaluate_batch

__all__ = [
    "PolarizationAngleField",
    "TwoPhotonAmplitude",
    "FitResult",
    "constant_field",
    "azimuthal_field",
    "tabulated_field",
    "with_transform_field",
    "field_value",
    "field_values",
    "bell_amplitude",
    "amplitude_eval",
    "amplitude_pair_tables",
    "symmetry_residual",
    "bell_condition_residual",
    "theta_wigner_residual",
    "covariance_residual",
    "two_photon_norm",
    "fit_theta",
]

_BELL_KINDS = ("bell11", "bell12", "bell21", "bell22")
_ALL_SLOTS = ((1, 1), (1, -1), (-1, 1), (-1, -1))
_MINK_SIGNS = np.array([1.0, -1.0, -1.0, -1.0])


def _active_slots(kind: str) -> tuple[tuple[int, int], ...]:
    if kind in ("bell11", "bell12"):
        return ((1, -1), (-1, 1))
    if kind in ("bell21", "bell22"):
        return ((1, 1), (-1, -1))
    return _ALL_SLOTS


# --------------------------------------------------------------------------
# polarization-angle fields


@dataclass(frozen=True)
class PolarizationAngleField:
    """Momentum-dependent polarization angle theta(k).

    kinds: "constant" (theta0), "azimuthal" (theta0 + coeff*phi(k) with phi
    the chart azimuth), "tabulated" (value of the nearest axis).  When
    ``lorentz_map`` is set the field evaluates as the Wigner-shifted
    transform of its base parameters: theta_base(L^-1 k) + 2*Theta(L, k).
    """

    kind: str
    theta0: float = 0.0
    coeff: float = 0.0
    axes: np.ndarray | None = None
    values: np.ndarray | None = None
    lorentz_map: LorentzMap | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("constant", "azimuthal", "tabulated"):
            raise InputError(f"unknown polarization field kind {self.kind!r}")
        if self.kind == "tabulated":
            if self.axes is None or self.values is None:
                raise InputError("tabulated field needs axes and values")
            axes = np.asarray(self.axes, dtype=np.float64).reshape(-1, 3)
            norms = np.linalg.norm(axes, axis=1)
            if np.any(np.abs(norms - 1.0) > 1e-9):
                raise InputError("tabulated axes must be unit vectors")
            vals = np.asarray(self.values, dtype=np.float64).reshape(-1)
            if vals.size != axes.shape[0]:
                raise InputError("tabulated axes/values length mismatch")
            object.__setattr__(self, "axes", axes)
            object.__setattr__(self, "values", vals)


def constant_field(theta0: float) -> PolarizationAngleField:
    return PolarizationAngleField(kind="constant", theta0=float(theta0))


def azimuthal_field(theta0: float, coeff: float) -> PolarizationAngleField:
    return PolarizationAngleField(kind="azimuthal", theta0=float(theta0), coeff=float(coeff))


def tabulated_field(axes, values) -> PolarizationAngleField:
    return PolarizationAngleField(kind="tabulated", axes=axes, values=values)


def with_transform_field(
    field: PolarizationAngleField, lorentz_map: LorentzMap
) -> PolarizationAngleField:
    """Wigner-shifted transform: evaluates as theta(L^-1 k) + 2*Theta(L, k).

    Composes with a previously attached map (the shift composes through the
    phase cocycle, so stacking maps equals attaching their composition).
    """
    from .spinor_tetrad import compose

    new_map = (
        lorentz_map
        if field.lorentz_map is None
        else compose(lorentz_map, field.lorentz_map)
    )
    return dataclasses.replace(field, lorentz_map=new_map)


def field_values(
    field: PolarizationAngleField, freqs: np.ndarray, dirs: np.ndarray
) -> np.ndarray:
    """theta at a batch of momenta (frequency + unit-direction arrays)."""
    freqs = np.asarray(freqs, dtype=np.float64)
    dirs = np.asarray(dirs, dtype=np.float64)
    if field.lorentz_map is not None:
        shift = _batch_wigner(field.lorentz_map, freqs, dirs)
        inv = inverse(field.lorentz_map)
        four = np.concatenate([freqs[:, None], freqs[:, None] * dirs], axis=1)
        pre = four @ inv.matrix.T
        pre_f = np.linalg.norm(pre[:, 1:], axis=1)
        pre_d = pre[:, 1:] / pre_f[:, None]
        base = dataclasses.replace(field, lorentz_map=None)
        return field_values(base, pre_f, pre_d) + shift
    if field.kind == "constant":
        return np.full(freqs.shape, field.theta0)
    if field.kind == "azimuthal":
        return field.theta0 + field.coeff * np.arctan2(dirs[:, 1], dirs[:, 0])
    # tabulated: value of the nearest axis
    idx = np.argmax(dirs @ field.axes.T, axis=1)
    return field.values[idx]


def field_value(field: PolarizationAngleField, k: NullMomentum) -> float:
    return float(field_values(field, np.array([k.freq]), k.dir.reshape(1, 3))[0])


def theta_wigner_residual(
    field: PolarizationAngleField, lorentz_map: LorentzMap, k: NullMomentum
) -> float:
    """Violation of the Wigner-shift rule theta'(k) = theta(L^-1 k) + 2 Theta(L,k).

    For a plain field this measures its own failure to be invariant:
    |wrap(theta(L^-1 k) - theta(k) + 2 Theta(L, k))|.  For a field carrying a
    composed map it compares the field against the Wigner-shifted base field,
    which is exactly zero when the attached map equals the queried one.
    """
    shift = wigner_phase(lorentz_map, k)
    kpre = apply(inverse(lorentz_map), k)
    if field.lorentz_map is None:
        diff = field_value(field, kpre) - field_value(field, k) + shift
        return float(abs(wrap_angle(diff)))
    base = dataclasses.replace(field, lorentz_map=None)
    diff = field_value(base, kpre) + shift - field_value(field, k)
    return float(abs(wrap_angle(diff)))


# --------------------------------------------------------------------------
# two-photon amplitudes


@dataclass(frozen=True)
class TwoPhotonAmplitude:
    """Two-photon helicity amplitude psi_ss'(k, k').

    ``kind`` selects one of the four Bell constructions (tetrad-built) or
    "general" (explicit ``table`` mapping (s, s') to scalar evaluators).
    ``envelope`` is an optional per-momentum factor applied as g(k) g(k');
    it takes batch arrays (freqs, dirs) and returns an array.
    """

    kind: str
    envelope: Callable | None = None
    table: Mapping[tuple[int, int], Callable] | None = None

    def __post_init__(self) -> None:
        if self.kind not in _BELL_KINDS + ("general",):
            raise InputError(f"unknown amplitude kind {self.kind!r}")
        if self.kind == "general" and self.table is None:
            raise InputError("general amplitude needs a table of evaluators")


def _envelope_factor(
    amp: TwoPhotonAmplitude,
    f1: np.ndarray,
    d1: np.ndarray,
    f2: np.ndarray,
    d2: np.ndarray,
    outer: bool,
) -> np.ndarray | float:
    if amp.envelope is None:
        return 1.0
    e1 = np.asarray(amp.envelope(f1, d1))
    e2 = np.asarray(amp.envelope(f2, d2))
    return e1[:, None] * e2[None, :] if outer else e1 * e2


def amplitude_pair_tables(
    amp: TwoPhotonAmplitude,
    f1: np.ndarray,
    d1: np.ndarray,
    f2: np.ndarray,
    d2: np.ndarray,
    *,
    outer: bool = True,
) -> dict[tuple[int, int], np.ndarray]:
    """Active helicity slots evaluated on momentum batches.

    ``outer=True`` returns (n1, n2) tables over the Cartesian product of the
    two batches; ``outer=False`` evaluates elementwise on paired batches.
    Slots outside the kind's support are omitted (exactly zero).
    """
    f1 = np.asarray(f1, dtype=np.float64)
    d1 = np.asarray(d1, dtype=np.float64)
    f2 = np.asarray(f2, dtype=np.float64)
    d2 = np.asarray(d2, dtype=np.float64)
    env = _envelope_factor(amp, f1, d1, f2, d2, outer)
    out: dict[tuple[int, int], np.ndarray] = {}
    if amp.kind in ("bell21", "bell22"):
        p0, p1 = _batch_spinors(f1, d1)
        q0, q1 = _batch_spinors(f2, d2)
        if outer:
            pairing = p0[:, None] * q1[None, :] - p1[:, None] * q0[None, :]
        else:
            pairing = p0 * q1 - p1 * q0
        out[(1, 1)] = np.conj(pairing) ** 2 * env
        out[(-1, -1)] = pairing**2 * env
        return out
    if amp.kind in ("bell11", "bell12"):
        m1 = batch_m_vectors(f1, d1) * _MINK_SIGNS
        m2c = np.conj(batch_m_vectors(f2, d2))
        if outer:
            core = m1 @ m2c.T
        else:
            core = np.sum(m1 * m2c, axis=-1)
        out[(1, -1)] = core * env
        out[(-1, 1)] = np.conj(core) * env
        return out
    # general: scalar evaluators
    n1, n2 = f1.shape[0], f2.shape[0]
    for slot, fn in amp.table.items():
        if outer:
            vals = np.empty((n1, n2), dtype=np.complex128)
            for i in range(n1):
                ki = NullMomentum(float(f1[i]), d1[i])
                for j in range(n2):
                    vals[i, j] = fn(ki, NullMomentum(float(f2[j]), d2[j]))
        else:
            vals = np.array(
                [
                    fn(NullMomentum(float(f1[i]), d1[i]), NullMomentum(float(f2[i]), d2[i]))
                    for i in range(n1)
                ],
                dtype=np.complex128,
            )
        out[slot] = vals * env
    return out


def amplitude_eval(
    amp: TwoPhotonAmplitude, k: NullMomentum, kp: NullMomentum, s: int, sp: int
) -> complex:
    """psi_ss'(k, k') for a single pair; slots outside the kind's support are 0."""
    if (s, sp) not in _active_slots(amp.kind):
        return 0.0 + 0.0j
    tables = amplitude_pair_tables(
        amp,
        np.array([k.freq]),
        k.dir.reshape(1, 3),
        np.array([kp.freq]),
        kp.dir.reshape(1, 3),
    )
    if (s, sp) not in tables:
        return 0.0 + 0.0j
    return complex(tables[(s, sp)][0, 0])


def bell_amplitude(
    kind: str,
    k: NullMomentum,
    kp: NullMomentum,
    s: int,
    sp: int,
    envelope: Callable | None = None,
) -> complex:
    """Tetrad Bell amplitude psi_ss'(k, k') times the envelope."""
    return amplitude_eval(TwoPhotonAmplitude(kind=kind, envelope=envelope), k, kp, s, sp)


def symmetry_residual(
    amp: TwoPhotonAmplitude, k: NullMomentum, kp: NullMomentum
) -> float:
    """max over s, s' of |psi_ss'(k, k') - psi_s's(k', k)|."""
    worst = 0.0
    for s, sp in _ALL_SLOTS:
        a = amplitude_eval(amp, k, kp, s, sp)
        b = amplitude_eval(amp, kp, k, sp, s)
        worst = max(worst, abs(a - b))
    return worst


def bell_condition_residual(
    condition: int,
    amp: TwoPhotonAmplitude,
    theta: PolarizationAngleField,
    k: NullMomentum,
    kp: NullMomentum,
) -> float:
    """Modulus of the maximal-correlation condition defect at one pair.

    11: |e^{+i(t-t')} psi_+- + e^{-i(t-t')} psi_-+|
    12: |e^{+i(t-t')} psi_+- - e^{-i(t-t')} psi_-+|
    21: |e^{+i(t+t')} psi_++ + e^{-i(t+t')} psi_--|
    22: |e^{+i(t+t')} psi_++ - e^{-i(t+t')} psi_--|
    with t = theta(k), t' = theta(k').
    """
    t = field_value(theta, k)
    tp = field_value(theta, kp)
    if condition in (11, 12):
        ang = t - tp
        a = amplitude_eval(amp, k, kp, 1, -1)
        b = amplitude_eval(amp, k, kp, -1, 1)
        sign = 1.0 if condition == 11 else -1.0
    elif condition in (21, 22):
        ang = t + tp
        a = amplitude_eval(amp, k, kp, 1, 1)
        b = amplitude_eval(amp, k, kp, -1, -1)
        sign = 1.0 if condition == 21 else -1.0
    else:
        raise InputError(f"condition must be one of 11, 12, 21, 22; got {condition}")
    return abs(np.exp(1.0j * ang) * a + sign * np.exp(-1.0j * ang) * b)


def covariance_residual(
    amp: TwoPhotonAmplitude, lorentz_map: LorentzMap, k: NullMomentum, kp: NullMomentum
) -> float:
    """Defect of the helicity transformation rule at one pair, maximized
    over the kind's active slots:

    |psi_ss'(L^-1 k, L^-1 k') - e^{2is Theta(L,k)} e^{2is' Theta(L,k')} psi_ss'(k, k')|
    """
    kpre = apply(inverse(lorentz_map), k)
    kppre = apply(inverse(lorentz_map), kp)
    two_th = wigner_phase(lorentz_map, k)
    two_thp = wigner_phase(lorentz_map, kp)
    worst = 0.0
    for s, sp in _active_slots(amp.kind):
        lhs = amplitude_eval(amp, kpre, kppre, s, sp)
        rhs = (
            np.exp(1.0j * s * two_th)
            * np.exp(1.0j * sp * two_thp)
            * amplitude_eval(amp, k, kp, s, sp)
        )
        worst = max(worst, abs(lhs - rhs))
    return worst


# --------------------------------------------------------------------------
# norms


def _norm_region(z: VacuumDensity) -> DetectorRegion:
    """Full-sphere region with a frequency window outside which the
    vacuum-weighted norm integrands are negligible at double precision."""
    params = dict(z.params)
    if z.family == "power-exponential":
        cap = params["scale"] * (60.0 + 10.0 * params["exponent"])
        return full_sphere_region(0.0, cap)
    w = params["width"]
    lo = params["scale"] * math.exp(-8.0 * w * w - 8.0 * w)
    hi = params["scale"] * math.exp(4.0 * w * w + 8.0 * w)
    return full_sphere_region(lo, hi)


def _norm_spec(z: VacuumDensity) -> QuadratureSpec:
    """Default norm quadrature: log-spaced frequency nodes for log-normal
    weights (content spread over decades), linear otherwise."""
    radial_map = "log" if z.family == "log-normal-isotropic" else "linear"
    return QuadratureSpec(n_freq=32, n_polar=8, n_azimuth=8, radial_map=radial_map)


def two_photon_norm(
    amp: TwoPhotonAmplitude,
    z: VacuumDensity,
    n_osc,
    spec: QuadratureSpec | None = None,
    region: DetectorRegion | None = None,
) -> float:
    """Squared norm of the two-photon state over N oscillators:

        (2/N)   * sum_ss' integral dGamma |psi_ss'(k,k)|^2 Z(k)
      + (2(N-1)/N) * sum_ss' double integral |psi_ss'(k,k')|^2 Z(k) Z(k')

    ``n_osc`` is an integer >= 1 or math.inf (limit factors 0 and 2).  The
    integrals run over all momenta by default (frequency-capped where the
    vacuum weight has decayed to double-precision zero); pass ``region`` to
    restrict the support instead of encoding it in the envelope.
    """
    if n_osc == math.inf:
        first_fac, second_fac = 0.0, 2.0
    else:
        if not isinstance(n_osc, (int, np.integer)) or n_osc < 1:
            raise InputError(f"n_osc must be a positive integer or inf, got {n_osc!r}")
        first_fac = 2.0 / n_osc
        second_fac = 2.0 * (n_osc - 1) / n_osc
    if region is None:
        region = _norm_region(z)
        quad = spec or _norm_spec(z)
    else:
        quad = spec or QuadratureSpec(n_freq=32, n_polar=8, n_azimuth=8)
    nodes = invariant_node_set(region, quad)
    zvals = evaluate_batch(z, nodes.freqs, nodes.dirs)
    u = nodes.weights * zvals

    diag_total = 0.0
    if first_fac != 0.0:
        diag_tables = amplitude_pair_tables(
            amp, nodes.freqs, nodes.dirs, nodes.freqs, nodes.dirs, outer=False
        )
        for vals in diag_tables.values():
            diag_total += float(np.sum(np.abs(vals) ** 2 * u))

    cross_total = 0.0
    cross_tables = amplitude_pair_tables(
        amp, nodes.freqs, nodes.dirs, nodes.freqs, nodes.dirs, outer=True
    )
    for vals in cross_tables.values():
        cross_total += float(u @ (np.abs(vals) ** 2) @ u)

    return first_fac * diag_total + second_fac * cross_total


# --------------------------------------------------------------------------
# theta fitting


class FitResult(NamedTuple):
    field: PolarizationAngleField
    residual_rel: float


def fit_theta(
    amp: TwoPhotonAmplitude,
    condition: int,
    region_a: DetectorRegion,
    region_b: DetectorRegion,
    spec: QuadratureSpec | None = None,
    weight_fn: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None,
) -> FitResult:
    """Least-squares constant-per-cone polarization angle for a Bell condition.

    Minimizes the measure-weighted squared condition residual over pairs
    (k in region_a, k' in region_b).  For conditions 11/12 only the angle
    difference theta_a - theta_b enters; for 21/22 the sum does.  The closed
    forms are

        11: 2*delta = pi - arg S,   12: 2*delta = -arg S,
        21: 2*sigma = pi - arg T,   22: 2*sigma = -arg T,

    with S = sum w w' psi_+- conj(psi_-+) and T = sum w w' psi_++ conj(psi_--);
    these are the exact minimizers of the quadratic objective.  Returns a
    tabulated two-cone field (value on region_a's axis, 0 on region_b's) and
    the relative root-mean-square residual after the fit.

    A ``weight_fn(freqs, dirs)`` factor (for instance the vacuum density)
    multiplies the quadrature weights on each arm, aligning the fitted angle
    with correlation averages computed under the same weighting.
    """
    quad = spec or QuadratureSpec(n_freq=4, n_polar=4, n_azimuth=8)
    na = invariant_node_set(region_a, quad)
    nb = invariant_node_set(region_b, quad)
    tables = amplitude_pair_tables(amp, na.freqs, na.dirs, nb.freqs, nb.dirs, outer=True)
    wa, wb = na.weights, nb.weights
    if weight_fn is not None:
        wa = wa * np.asarray(weight_fn(na.freqs, na.dirs), dtype=np.float64)
        wb = wb * np.asarray(weight_fn(nb.freqs, nb.dirs), dtype=np.float64)
    w_outer = wa[:, None] * wb[None, :]
    if condition in (11, 12):
        a, b = tables[(1, -1)], tables[(-1, 1)]
    elif condition in (21, 22):
        a, b = tables[(1, 1)], tables[(-1, -1)]
    else:
        raise InputError(f"condition must be one of 11, 12, 21, 22; got {condition}")
    cross = complex(np.sum(w_outer * a * np.conj(b)))
    if abs(cross) == 0.0:
        raise InputError("condition cross term vanishes; the fit is degenerate")
    sign = 1.0 if condition in (11, 21) else -1.0
    # minimize sum w |e^{i x} a + sign e^{-i x} b|^2 over x
    two_x = (math.pi if sign > 0 else 0.0) - float(np.angle(cross))
    fitted = float(wrap_angle(two_x)) / 2.0

    axis_gap = float(np.linalg.norm(region_a.axis - region_b.axis))
    if axis_gap < 1e-6:
        theta0 = 0.0 if condition in (11, 12) else fitted / 2.0
        field = constant_field(theta0)
    else:
        field = tabulated_field(
            np.stack([region_a.axis, region_b.axis]), np.array([fitted, 0.0])
        )

    phase = np.exp(1.0j * fitted)
    resid2 = np.abs(phase * a + sign * b / phase) ** 2
    scale2 = np.abs(a) ** 2 + np.abs(b) ** 2
    rel = math.sqrt(float(np.sum(w_outer * resid2)) / float(np.sum(w_outer * scale2)))
    return FitResult(field=field, residual_rel=rel)
