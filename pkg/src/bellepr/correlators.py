"""Normalized EPR correlation values for two-photon states seen by a pair of
cone detectors.

The correlation of two fixed-angle circular/linear analyzer outcomes is a
ratio ``numerator / denominator``:

* numerator — the unnormalized average.  For disjoint detector cones it is a
  double sum over the two cones of the two helicity-slot products
  ``conj(psi_++) psi_--`` (weighted by the analyzer-angle sum) and
  ``conj(psi_+-) psi_-+`` (weighted by the angle difference), carrying the
  oscillator-count factor 8(N-1)/N and one vacuum density factor per slot.
* denominator — the squared norm of the state restricted to the detector
  cones: a same-momentum (coincidence) term with factor 2/N over each cone
  plus all ordered cone-pair blocks with factor 2(N-1)/N.

Detector transforms are handled by one rule per transformed arm: mesh the
laboratory acceptance cone, pull each node back through the map, and shift
the arm's analyzer angle per node by minus twice the Wigner phase of the map
at the acceptance node.  The amplitude and the vacuum density are then read
at the pulled-back momenta.  Applying the rule to both arms gives the
joint-transform case; to one arm, the single-moving-detector case.

For the joint case the module also evaluates the equivalent vacuum-side
bookkeeping — plain angles over the laboratory cones with the transported
state and the composed vacuum density — plus a "realized" variant that
rebuilds the state's tables at the laboratory momenta instead of
transporting them.  The gap of the realized variant measures how well the
constructed amplitude family satisfies the phase transport rule.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InputError, PreconditionError
from .measure import (
    DetectorRegion,
    NodeSet,
    QuadratureSpec,
    invariant_node_set,
    map_nodes,
    regions_disjoint,
)
from .spinor_tetrad import (
    LorentzMap,
    NullMomentum,
    batch_wigner_phases,
    inverse,
)
from .states import (
    PolarizationAngleField,
    TwoPhotonAmplitude,
    amplitude_pair_tables,
    field_values,
    theta_wigner_residual,
)
from .vacuum import VacuumDensity, evaluate_batch, with_transform

__all__ = [
    "DEFAULT_QUADRATURE",
    "TransformCase",
    "rest_case",
    "joint_case",
    "alice_only_case",
    "DetectorSetting",
    "Scenario",
    "CorrelationResult",
    "swap_roles",
    "epr_general_rest",
    "epr_bell_rest",
    "epr_case1",
    "epr_case2",
    "bound_check",
]

#: Default per-cone product rule: 6 frequency x 4 polar x 8 azimuth nodes.
DEFAULT_QUADRATURE = QuadratureSpec(n_freq=6, n_polar=4, n_azimuth=8)

_SUM_KINDS = ("bell21", "bell22")
_DIFF_KINDS = ("bell11", "bell12")
_BELL_KINDS = _DIFF_KINDS + _SUM_KINDS


# --------------------------------------------------------------------------
# scenario types


@dataclass(frozen=True)
class TransformCase:
    """Which detectors move: nobody, both jointly, or Alice's side only."""

    kind: str
    lorentz_map: LorentzMap | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("rest", "joint", "alice_only"):
            raise InputError(
                f"transform kind must be 'rest', 'joint' or 'alice_only', got {self.kind!r}"
            )
        if self.kind == "rest" and self.lorentz_map is not None:
            raise InputError("rest case carries no Lorentz map")
        if self.kind != "rest" and self.lorentz_map is None:
            raise InputError(f"{self.kind} case requires a Lorentz map")


def rest_case() -> TransformCase:
    return TransformCase(kind="rest")


def joint_case(lorentz_map: LorentzMap) -> TransformCase:
    return TransformCase(kind="joint", lorentz_map=lorentz_map)


def alice_only_case(lorentz_map: LorentzMap) -> TransformCase:
    return TransformCase(kind="alice_only", lorentz_map=lorentz_map)


@dataclass(frozen=True)
class DetectorSetting:
    """One detector: acceptance cone plus a single fixed analyzer angle."""

    region: DetectorRegion
    angle: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.angle):
            raise InputError(f"analyzer angle must be finite, got {self.angle!r}")


@dataclass(frozen=True)
class Scenario:
    """A complete correlation experiment.

    ``n_osc`` is the oscillator count N: an integer >= 2 or ``math.inf``.
    N = 1 is rejected because every disjoint-detector numerator carries an
    (N-1) factor and would vanish identically.  ``theta_field`` is the
    state's linear-polarization angle field; optional for general
    amplitudes, required for Bell-kind diagnostics.
    """

    amplitude: TwoPhotonAmplitude
    vacuum: VacuumDensity
    bob: DetectorSetting
    alice: DetectorSetting
    n_osc: float = math.inf
    theta_field: PolarizationAngleField | None = None
    transform: TransformCase = TransformCase(kind="rest")
    quadrature: QuadratureSpec = DEFAULT_QUADRATURE

    def __post_init__(self) -> None:
        n = self.n_osc
        if n != math.inf:
            if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
                raise InputError(
                    f"n_osc must be an integer >= 2 or math.inf, got {n!r}"
                )
            if n == 1:
                raise InputError(
                    "n_osc = 1 is rejected: the disjoint-detector correlation "
                    "numerator carries an (N-1) factor and vanishes identically"
                )
            if n < 1:
                raise InputError(f"n_osc must be an integer >= 2 or math.inf, got {n!r}")
        if not regions_disjoint(self.bob.region, self.alice.region):
            raise PreconditionError(
                "detector cones must be directionally disjoint; overlapping "
                "acceptance adds a same-momentum coincidence term that only "
                "the discrete-grid oracle evaluates"
            )


@dataclass(frozen=True)
class CorrelationResult:
    """numerator/denominator of one correlation average with an error
    estimate (full-rule vs halved-rule difference plus a roundoff floor)
    and scalar diagnostics."""

    numerator: float
    denominator: float
    value: float
    err_estimate: float
    diagnostics: dict[str, float]


def swap_roles(scenario: Scenario) -> Scenario:
    """Exchange the two detectors (regions and angles).

    Rest values are invariant under the swap by the symmetry of the
    two-photon amplitude; with a transform attached, the swap moves the
    transformed side from Alice's arm to Bob's.
    """
    return dataclasses.replace(scenario, bob=scenario.alice, alice=scenario.bob)


# --------------------------------------------------------------------------
# arm descriptors and the four-term core


class _Arm(NamedTuple):
    """Per-node data for one detector arm.

    ``freqs/dirs`` are the momenta at which amplitude tables and the vacuum
    density are read (pulled back through the arm's map when one is set),
    ``weights`` the invariant-measure weights of the acceptance mesh,
    ``zvals`` the vacuum density at the table momenta, and ``angles`` the
    per-node effective analyzer angle (the scalar setting, shifted by minus
    twice the map's Wigner phase at each acceptance node)."""

    freqs: np.ndarray
    dirs: np.ndarray
    weights: np.ndarray
    zvals: np.ndarray
    angles: np.ndarray
    mesh_freqs: np.ndarray
    mesh_dirs: np.ndarray
    wigner: np.ndarray


def _arm(
    setting: DetectorSetting,
    arm_map: LorentzMap | None,
    z: VacuumDensity,
    spec: QuadratureSpec,
) -> _Arm:
    nodes = invariant_node_set(setting.region, spec)
    if arm_map is None:
        wig = np.zeros(len(nodes))
        pts = nodes
    else:
        wig = batch_wigner_phases(arm_map, nodes.freqs, nodes.dirs)
        pts = map_nodes(inverse(arm_map), nodes)
    angles = setting.angle - wig
    zv = evaluate_batch(z, pts.freqs, pts.dirs)
    return _Arm(
        freqs=pts.freqs,
        dirs=pts.dirs,
        weights=nodes.weights,
        zvals=zv,
        angles=angles,
        mesh_freqs=nodes.freqs,
        mesh_dirs=nodes.dirs,
        wigner=wig,
    )


def _num_factor(n_osc) -> float:
    if n_osc == math.inf:
        return 8.0
    return 8.0 * (n_osc - 1) / n_osc


def _den_factors(n_osc) -> tuple[float, float]:
    if n_osc == math.inf:
        return 0.0, 2.0
    return 2.0 / n_osc, 2.0 * (n_osc - 1) / n_osc


def _slot_products(
    tables: dict[tuple[int, int], np.ndarray],
) -> tuple[np.ndarray | None, np.ndarray | None]:
    """Equal-helicity product conj(psi_++) psi_-- and opposite-helicity
    product conj(psi_+-) psi_-+, or None where the slots are absent."""
    t_sum = None
    if (1, 1) in tables and (-1, -1) in tables:
        t_sum = np.conj(tables[(1, 1)]) * tables[(-1, -1)]
    t_diff = None
    if (1, -1) in tables and (-1, 1) in tables:
        t_diff = np.conj(tables[(1, -1)]) * tables[(-1, 1)]
    return t_sum, t_diff


def _numerator(
    amp: TwoPhotonAmplitude, bob: _Arm, alice: _Arm, n_osc
) -> tuple[float, dict[tuple[int, int], np.ndarray]]:
    """Four-term unnormalized average over the Bob-cone x Alice-cone block.

    Re[e^{-2i(beta_i+alpha_j)} conj(psi_++)psi_-- +
       e^{-2i(beta_i-alpha_j)} conj(psi_+-)psi_-+] summed with invariant
    weights and one vacuum factor per arm, times 8(N-1)/N.
    """
    tables = amplitude_pair_tables(
        amp, bob.freqs, bob.dirs, alice.freqs, alice.dirs, outer=True
    )
    t_sum, t_diff = _slot_products(tables)
    ub = bob.weights * bob.zvals * np.exp(-2.0j * bob.angles)
    ua = alice.weights * alice.zvals
    ua_plus = ua * np.exp(-2.0j * alice.angles)
    ua_minus = ua * np.exp(2.0j * alice.angles)
    total = 0.0 + 0.0j
    if t_sum is not None:
        total += ub @ t_sum @ ua_plus
    if t_diff is not None:
        total += ub @ t_diff @ ua_minus
    return _num_factor(n_osc) * float(total.real), tables


def _denominator(
    amp: TwoPhotonAmplitude, bob: _Arm, alice: _Arm, n_osc
) -> tuple[float, float]:
    """Support-restricted squared norm over the two cones.

    Same-momentum term (2/N) over each cone plus all four ordered cone-pair
    blocks (2(N-1)/N), each with every active helicity slot.  Also returns
    the relative mismatch of the two cross-cone blocks, which the symmetry
    of |psi|^2 Z Z' makes equal up to quadrature: the identity behind
    folding both orderings into twice one block.
    """
    first_fac, cross_fac = _den_factors(n_osc)
    arms = (bob, alice)

    diag_total = 0.0
    if first_fac != 0.0:
        for arm in arms:
            u = arm.weights * arm.zvals
            tabs = amplitude_pair_tables(
                amp, arm.freqs, arm.dirs, arm.freqs, arm.dirs, outer=False
            )
            for vals in tabs.values():
                diag_total += float(np.sum(np.abs(vals) ** 2 * u))

    blocks = np.zeros((2, 2))
    for a, arm_a in enumerate(arms):
        ua = arm_a.weights * arm_a.zvals
        for b, arm_b in enumerate(arms):
            ub = arm_b.weights * arm_b.zvals
            tabs = amplitude_pair_tables(
                amp, arm_a.freqs, arm_a.dirs, arm_b.freqs, arm_b.dirs, outer=True
            )
            blocks[a, b] = sum(
                float(ua @ (np.abs(vals) ** 2) @ ub) for vals in tabs.values()
            )
    cross_total = float(blocks.sum())
    scale = max(abs(blocks[0, 1]), abs(blocks[1, 0]), 1e-300)
    swap_residual = abs(blocks[0, 1] - blocks[1, 0]) / scale
    return first_fac * diag_total + cross_fac * cross_total, swap_residual


# --------------------------------------------------------------------------
# diagnostics


def _bell_diagnostics(
    scn: Scenario,
    bob: _Arm,
    alice: _Arm,
    tables: dict[tuple[int, int], np.ndarray],
    denominator: float,
    value: float,
) -> dict[str, float]:
    """Residual of the polarization-angle condition over the sampled node
    pairs, and the reduced single-cosine value it implies, compared against
    the four-term value."""
    kind = scn.amplitude.kind
    field = scn.theta_field
    if kind not in _BELL_KINDS or field is None:
        return {}
    th_b = field_values(field, bob.freqs, bob.dirs)
    th_a = field_values(field, alice.freqs, alice.dirs)
    if kind in _SUM_KINDS:
        a_tab, b_tab = tables[(1, 1)], tables[(-1, -1)]
        x = th_b[:, None] + th_a[None, :]
        branch = 1.0 if kind == "bell21" else -1.0
        combo = (bob.angles[:, None] + alice.angles[None, :]) - x
        moduli = b_tab
    else:
        a_tab, b_tab = tables[(1, -1)], tables[(-1, 1)]
        x = th_b[:, None] - th_a[None, :]
        branch = 1.0 if kind == "bell11" else -1.0
        combo = (bob.angles[:, None] - alice.angles[None, :]) - x
        moduli = b_tab
    res = np.abs(np.exp(1j * x) * a_tab + branch * np.exp(-1j * x) * b_tab)
    scale2 = 0.5 * (np.abs(a_tab) ** 2 + np.abs(b_tab) ** 2)
    w_outer = (bob.weights * bob.zvals)[:, None] * (alice.weights * alice.zvals)[
        None, :
    ]
    denom = float(np.sum(w_outer * scale2))
    rel = math.sqrt(float(np.sum(w_outer * res**2)) / (2.0 * denom)) if denom > 0 else 0.0
    sign = -branch
    spec_num = (
        _num_factor(scn.n_osc)
        * sign
        * float(np.sum(w_outer * np.cos(2.0 * combo) * np.abs(moduli) ** 2))
    )
    spec_value = spec_num / denominator
    return {
        "bell_residual_max": float(res.max(initial=0.0)),
        "bell_residual_rel": rel,
        "specialized_value": spec_value,
        "specialized_gap": abs(value - spec_value),
    }


def _theta_shift_diag(scn: Scenario) -> dict[str, float]:
    """Worst violation of the angle-field transport rule over a few sampled
    acceptance directions (zero for fields carrying a matching map)."""
    field = scn.theta_field
    m = scn.transform.lorentz_map
    if field is None or m is None:
        return {}
    worst = 0.0
    for region in (scn.bob.region, scn.alice.region):
        nodes = invariant_node_set(
            region, QuadratureSpec(n_freq=2, n_polar=2, n_azimuth=2)
        )
        for i in range(len(nodes)):
            k = NullMomentum(float(nodes.freqs[i]), nodes.dirs[i])
            worst = max(worst, theta_wigner_residual(field, m, k))
    return {"theta_shift_residual": worst}


# --------------------------------------------------------------------------
# evaluation routes


def _route_arms(scn: Scenario, spec: QuadratureSpec) -> tuple[_Arm, _Arm]:
    """Arms for the defining (detector-side) evaluation of the scenario."""
    m = scn.transform.lorentz_map
    kind = scn.transform.kind
    bob_map = m if kind == "joint" else None
    alice_map = m if kind in ("joint", "alice_only") else None
    return (
        _arm(scn.bob, bob_map, scn.vacuum, spec),
        _arm(scn.alice, alice_map, scn.vacuum, spec),
    )


def _evaluate(scn: Scenario, spec: QuadratureSpec) -> tuple[float, float, _Arm, _Arm, dict]:
    bob, alice = _route_arms(scn, spec)
    num, tables = _numerator(scn.amplitude, bob, alice, scn.n_osc)
    den, swap_res = _denominator(scn.amplitude, bob, alice, scn.n_osc)
    if den <= 0.0:
        raise PreconditionError(
            "denominator is not positive: state has no weight on the detector cones"
        )
    return num, den, bob, alice, {"den_swap_block_residual": swap_res, "tables": tables}


def _transported_value(scn: Scenario, spec: QuadratureSpec) -> float:
    """Joint-transform value via the vacuum-side bookkeeping: plain analyzer
    angles over the laboratory cones, slot tables transported by the phase
    rule (each slot picks e^{-2i s Theta} per arm), and the vacuum density
    read through the inverse map.  Exactly equals the detector-side value
    when the phase bookkeeping is consistent."""
    m = scn.transform.lorentz_map
    assert m is not None
    bob, alice = _route_arms(scn, spec)
    tables = amplitude_pair_tables(
        scn.amplitude, bob.freqs, bob.dirs, alice.freqs, alice.dirs, outer=True
    )
    transported: dict[tuple[int, int], np.ndarray] = {}
    for (s, sp), vals in tables.items():
        phase = np.exp(-1.0j * s * bob.wigner)[:, None] * np.exp(
            -1.0j * sp * alice.wigner
        )[None, :]
        transported[(s, sp)] = phase * vals
    t_sum, t_diff = _slot_products(transported)
    ub = bob.weights * bob.zvals * np.exp(-2.0j * scn.bob.angle)
    ua = alice.weights * alice.zvals
    total = 0.0 + 0.0j
    if t_sum is not None:
        total += ub @ t_sum @ (ua * np.exp(-2.0j * scn.alice.angle))
    if t_diff is not None:
        total += ub @ t_diff @ (ua * np.exp(2.0j * scn.alice.angle))
    num = _num_factor(scn.n_osc) * float(total.real)
    den, _ = _denominator(scn.amplitude, bob, alice, scn.n_osc)
    return num / den


def _realized_rest_value(scn: Scenario, spec: QuadratureSpec) -> float:
    """Rest-form evaluation with the vacuum density composed with the
    inverse map and the slot tables rebuilt at the laboratory momenta.
    Differs from the joint-transform value exactly by the amplitude
    family's failure to satisfy the phase transport rule."""
    m = scn.transform.lorentz_map
    assert m is not None
    rest = dataclasses.replace(
        scn,
        transform=TransformCase(kind="rest"),
        vacuum=with_transform(scn.vacuum, m),
    )
    num, den, _, _, _ = _evaluate(rest, spec)
    return num / den


_ERR_FLOOR = 64.0 * np.finfo(np.float64).eps


def _finish(scn: Scenario, extra_diag: dict[str, float] | None = None) -> CorrelationResult:
    spec = scn.quadrature
    num, den, bob, alice, parts = _evaluate(scn, spec)
    value = num / den
    num_h, den_h, _, _, _ = _evaluate(scn, spec.halved())
    err = abs(value - num_h / den_h) + _ERR_FLOOR * (1.0 + abs(value))
    diagnostics: dict[str, float] = {
        "den_swap_block_residual": parts["den_swap_block_residual"]
    }
    diagnostics.update(
        _bell_diagnostics(scn, bob, alice, parts["tables"], den, value)
    )
    diagnostics.update(_theta_shift_diag(scn))
    if extra_diag:
        diagnostics.update(extra_diag)
    return CorrelationResult(
        numerator=num,
        denominator=den,
        value=value,
        err_estimate=err,
        diagnostics=diagnostics,
    )


# --------------------------------------------------------------------------
# public operations


def _require_case(scn: Scenario, kind: str, op: str) -> None:
    if scn.transform.kind != kind:
        raise InputError(
            f"{op} requires a scenario with the {kind!r} transform case, "
            f"got {scn.transform.kind!r}"
        )


def epr_general_rest(scenario: Scenario) -> CorrelationResult:
    """Normalized correlation of the two analyzer outcomes, both detectors
    at rest, for an arbitrary two-photon amplitude."""
    _require_case(scenario, "rest", "epr_general_rest")
    return _finish(scenario)


def epr_bell_rest(scenario: Scenario) -> CorrelationResult:
    """Rest-frame correlation for a Bell-kind amplitude.

    The value comes from the four-term formula; the diagnostics carry the
    reduced single-cosine value implied by the polarization-angle condition
    together with the condition residual over the sampled nodes.
    """
    _require_case(scenario, "rest", "epr_bell_rest")
    if scenario.amplitude.kind not in _BELL_KINDS:
        raise InputError(
            f"epr_bell_rest requires a Bell-kind amplitude, got {scenario.amplitude.kind!r}"
        )
    return _finish(scenario)


def epr_case1(scenario: Scenario) -> CorrelationResult:
    """Correlation with both detectors transformed by the same map.

    The value uses the detector-side form (pulled-back momenta,
    Wigner-shifted per-node angles).  Diagnostics add the vacuum-side form
    (``vacuum_picture_value`` with its own error estimate and the gap to the
    detector-side value) and the realized-amplitude variant
    (``realized_value``/``realized_gap``) whose gap measures the transport
    defect of the constructed amplitude family.
    """
    _require_case(scenario, "joint", "epr_case1")
    spec = scenario.quadrature
    vac_full = _transported_value(scenario, spec)
    vac_half = _transported_value(scenario, spec.halved())
    vac_err = abs(vac_full - vac_half) + _ERR_FLOOR * (1.0 + abs(vac_full))
    realized = _realized_rest_value(scenario, spec)
    result = _finish(scenario)
    diag = dict(result.diagnostics)
    diag["vacuum_picture_value"] = vac_full
    diag["vacuum_picture_err"] = vac_err
    diag["picture_gap"] = abs(result.value - vac_full)
    diag["realized_value"] = realized
    diag["realized_gap"] = abs(result.value - realized)
    return dataclasses.replace(result, diagnostics=diag)


def _mapped_bounding_region(region: DetectorRegion, m: LorentzMap) -> DetectorRegion:
    """Circular cone bounding the image of ``region``'s directions under the
    map (directions aberrate independently of frequency; the cone is grown
    to the farthest mapped rim direction)."""
    axis = np.asarray(region.axis, dtype=np.float64)
    probe = np.array([0.0, 0.0, 1.0]) if abs(axis[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    e1 = np.cross(axis, probe)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(axis, e1)
    phi = np.linspace(0.0, 2.0 * math.pi, 64, endpoint=False)
    rim = (
        math.cos(region.half_angle) * axis[None, :]
        + math.sin(region.half_angle)
        * (np.cos(phi)[:, None] * e1[None, :] + np.sin(phi)[:, None] * e2[None, :])
    )
    dirs = np.concatenate([axis[None, :], rim], axis=0)
    four = np.concatenate([np.ones((dirs.shape[0], 1)), dirs], axis=1)
    img = four @ m.matrix.T
    img_dirs = img[:, 1:] / np.linalg.norm(img[:, 1:], axis=1)[:, None]
    new_axis = img_dirs[0]
    cosang = np.clip(img_dirs @ new_axis, -1.0, 1.0)
    half = float(np.arccos(cosang).max())
    half = min(max(half, 1e-9), math.pi)
    return DetectorRegion(
        axis=new_axis, half_angle=half, freq_lo=0.5, freq_hi=2.0
    )


def epr_case2(scenario: Scenario) -> CorrelationResult:
    """Correlation with only Alice's detector transformed.

    Alice's acceptance cone is meshed in the laboratory, each node pulled
    back through the map, and her analyzer angle shifted per node by minus
    twice the map's Wigner phase; Bob's arm is untouched.  Requires Bob's
    cone to stay directionally disjoint from the pulled-back Alice cone.
    """
    _require_case(scenario, "alice_only", "epr_case2")
    m = scenario.transform.lorentz_map
    assert m is not None
    pulled = _mapped_bounding_region(scenario.alice.region, inverse(m))
    if not regions_disjoint(scenario.bob.region, pulled):
        raise PreconditionError(
            "Bob's cone overlaps the pulled-back image of Alice's cone; "
            "the same-momentum coincidence term is out of scope here"
        )
    return _finish(scenario)


def bound_check(result: CorrelationResult, *, block_tol: float = 1e-8) -> bool:
    """True iff |value| <= 1 + err_estimate and the two ordered cross-cone
    denominator blocks agree (the symmetry that folds both orderings into
    twice a single block)."""
    if abs(result.value) > 1.0 + result.err_estimate:
        return False
    swap = result.diagnostics.get("den_swap_block_residual", 0.0)
    return swap <= block_tol
