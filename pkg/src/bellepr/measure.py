"""Lorentz-invariant momentum measure, detector cones, and quadrature.

The invariant measure on the forward light cone is

    dGamma(k) = d^3k / ((2*pi)^3 * 2*|k|)
              = omega * d(omega) * d(Omega_sph) / (2*(2*pi)^3)

in spherical parametrization (omega = frequency, Omega_sph = solid angle).
Detector acceptance regions are cones: an axis, an angular half-opening,
and a frequency window.  Product quadrature uses Gauss-Legendre nodes in
cos(polar) and in omega (about the region axis) and a uniform periodic rule
in azimuth, which is spectrally accurate for smooth integrands.  A seeded
Monte Carlo mode provides an independent cross-check.

Boosted regions are never meshed directly (the aberration image of a cone
is not a cone); instead integrals over a mapped region are computed by the
change of variables l = Lambda u, which carries no Jacobian because the
measure is invariant.

Semi-infinite frequency windows (freq_hi = inf) are supported for
normalization integrals via the substitution u = exp(-omega/scale), i.e.
omega = -scale*ln(u), with composite Gauss-Legendre panels on (0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, NamedTuple, Sequence

import numpy as np

from .errors import EvaluationError, InputError, PreconditionError
from .spinor_tetrad import LorentzMap, NullMomentum

__all__ = [
    "DetectorRegion",
    "QuadratureSpec",
    "NodeSet",
    "IntegralResult",
    "invariant_node_set",
    "region_measure",
    "integrate_region",
    "integrate_boosted_region",
    "regions_disjoint",
    "map_nodes",
    "full_sphere_region",
]

#: 1 / (2*(2*pi)^3): the constant prefactor of the invariant measure.
_MEASURE_CONST = 1.0 / (2.0 * (2.0 * math.pi) ** 3)

#: Number of dyadic Gauss-Legendre panels for semi-infinite radial rules.
#: Panel j covers u in [2^-(j+1), 2^-j]; the final panel covers the stub
#: [0, 2^-J].  48 panels put the effective truncation near omega = 33*scale.
_RADIAL_PANELS = 48


@dataclass(frozen=True)
class DetectorRegion:
    """Conical acceptance region: axis, angular half-opening, frequency window.

    ``half_angle`` may range up to pi (full sphere) so that the same type
    also describes hemispheres and all of momentum space; ``freq_hi`` may be
    ``inf`` for normalization integrals over all frequencies (in which case
    ``freq_lo`` must be 0 and only decaying integrands make sense).
    """

    axis: np.ndarray
    half_angle: float
    freq_lo: float
    freq_hi: float

    def __post_init__(self) -> None:
        ax = np.asarray(self.axis, dtype=np.float64).reshape(3)
        n = float(np.linalg.norm(ax))
        if not np.isfinite(n) or abs(n - 1.0) > 1e-9:
            raise InputError(f"region axis must be a unit 3-vector, got norm {n!r}")
        object.__setattr__(self, "axis", ax / n)
        if not (0.0 < self.half_angle <= math.pi):
            raise InputError(
                f"half_angle must lie in (0, pi], got {self.half_angle!r}"
            )
        if math.isinf(self.freq_hi):
            if self.freq_lo != 0.0:
                raise InputError(
                    "semi-infinite frequency window requires freq_lo = 0"
                )
        else:
            if not (0.0 <= self.freq_lo < self.freq_hi):
                raise InputError(
                    f"need 0 <= freq_lo < freq_hi, got [{self.freq_lo}, {self.freq_hi}]"
                )

    @property
    def is_semi_infinite(self) -> bool:
        return math.isinf(self.freq_hi)


def full_sphere_region(freq_lo: float = 0.0, freq_hi: float = math.inf) -> DetectorRegion:
    """All directions with the given frequency window (default: all momenta)."""
    return DetectorRegion(np.array([0.0, 0.0, 1.0]), math.pi, freq_lo, freq_hi)


@dataclass(frozen=True)
class QuadratureSpec:
    """Node counts and mode for region quadrature.

    ``mode`` is "product" (deterministic Gauss-Legendre/uniform product rule)
    or "mc" (seeded Monte Carlo; requires a finite frequency window).
    ``radial_scale`` sets the decay scale of the omega = -scale*ln(u)
    substitution used for semi-infinite windows.  ``radial_map`` selects the
    finite-window frequency rule: "linear" (Gauss-Legendre in omega) or
    "log" (Gauss-Legendre in ln omega; requires freq_lo > 0), the latter
    suited to integrands spread over decades such as log-normal weights.
    """

    n_freq: int = 16
    n_polar: int = 16
    n_azimuth: int = 16
    mode: str = "product"
    seed: int = 0
    n_samples: int = 20000
    radial_scale: float = 1.0
    radial_map: str = "linear"

    def __post_init__(self) -> None:
        if self.mode not in ("product", "mc"):
            raise InputError(f"mode must be 'product' or 'mc', got {self.mode!r}")
        if min(self.n_freq, self.n_polar, self.n_azimuth) < 2:
            raise InputError("node counts must be >= 2")
        if self.mode == "mc" and self.n_samples < 2:
            raise InputError("n_samples must be >= 2")
        if not (self.radial_scale > 0.0):
            raise InputError("radial_scale must be positive")
        if self.radial_map not in ("linear", "log"):
            raise InputError(
                f"radial_map must be 'linear' or 'log', got {self.radial_map!r}"
            )
        if self.mode == "mc" and self.radial_map != "linear":
            raise InputError("mc mode supports only the linear radial map")

    def halved(self) -> "QuadratureSpec":
        """Spec with all node counts halved (floor 2); used for error estimates."""
        return QuadratureSpec(
            n_freq=max(2, self.n_freq // 2),
            n_polar=max(2, self.n_polar // 2),
            n_azimuth=max(2, self.n_azimuth // 2),
            mode=self.mode,
            seed=self.seed,
            n_samples=max(2, self.n_samples // 2),
            radial_scale=self.radial_scale,
            radial_map=self.radial_map,
        )


@dataclass(frozen=True)
class NodeSet:
    """Batch of quadrature nodes on the forward light cone.

    Stored as arrays for vectorized evaluation; iterating yields
    ``(NullMomentum, weight)`` pairs.  Weights realize the invariant measure
    dGamma, so ``weights.sum()`` equals the region measure for finite
    product rules.
    """

    freqs: np.ndarray
    dirs: np.ndarray
    weights: np.ndarray

    def __len__(self) -> int:
        return self.freqs.shape[0]

    def __iter__(self) -> Iterator[tuple[NullMomentum, float]]:
        for i in range(len(self)):
            yield NullMomentum(float(self.freqs[i]), self.dirs[i]), float(
                self.weights[i]
            )

    def __getitem__(self, i: int) -> tuple[NullMomentum, float]:
        return NullMomentum(float(self.freqs[i]), self.dirs[i]), float(self.weights[i])


class IntegralResult(NamedTuple):
    value: complex
    err: float


def _gauss_legendre(n: int, lo: float, hi: float) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights mapped to [lo, hi]."""
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w


def _radial_rule(
    freq_lo: float,
    freq_hi: float,
    n_freq: int,
    radial_scale: float,
    radial_map: str = "linear",
) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights realizing integral( . d omega) over the frequency window.

    Finite windows use Gauss-Legendre in omega, or in ln(omega) when
    ``radial_map`` is "log" (freq_lo must then be positive).  Semi-infinite
    windows use the substitution omega = -scale*ln(u) with composite
    Gauss-Legendre panels on dyadic subdivisions of (0, 1], which is
    near-exact for integrands with exponential (or faster-decaying-in-log)
    tails.
    """
    if not math.isinf(freq_hi):
        if radial_map == "log":
            if freq_lo <= 0.0:
                raise PreconditionError(
                    "log radial map requires a positive freq_lo"
                )
            t, wt = _gauss_legendre(n_freq, math.log(freq_lo), math.log(freq_hi))
            om = np.exp(t)
            return om, wt * om
        return _gauss_legendre(n_freq, freq_lo, freq_hi)
    omegas = []
    wts = []
    edges_hi = [2.0 ** (-j) for j in range(_RADIAL_PANELS)]
    for j, hi in enumerate(edges_hi):
        lo = 0.0 if j == _RADIAL_PANELS - 1 else hi / 2.0
        u, wu = _gauss_legendre(n_freq, lo, hi)
        omegas.append(-radial_scale * np.log(u))
        wts.append(radial_scale * wu / u)
    om = np.concatenate(omegas)
    wt = np.concatenate(wts)
    order = np.argsort(om, kind="stable")
    return om[order], wt[order]


def _axis_frame(axis: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Two unit vectors completing ``axis`` to a right-handed orthonormal frame."""
    ref = np.array([0.0, 0.0, 1.0]) if abs(axis[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    e1 = np.cross(ref, axis)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(axis, e1)
    return e1, e2


def _dirs_from_angles(
    region: DetectorRegion, cosines: np.ndarray, azimuths: np.ndarray
) -> np.ndarray:
    """Direction vectors for a (cos polar) x (azimuth) grid about the region axis."""
    e1, e2 = _axis_frame(region.axis)
    sin_t = np.sqrt(np.clip(1.0 - cosines**2, 0.0, None))
    ca, sa = np.cos(azimuths), np.sin(azimuths)
    # broadcast: cosines (nc, 1), azimuths (1, na) -> (nc, na, 3)
    d = (
        sin_t[:, None, None] * (ca[None, :, None] * e1 + sa[None, :, None] * e2)
        + cosines[:, None, None] * region.axis
    )
    return d


def invariant_node_set(region: DetectorRegion, spec: QuadratureSpec) -> NodeSet:
    """Quadrature nodes and weights realizing dGamma over the region.

    Product mode: Gauss-Legendre in omega and cos(polar), uniform periodic
    rule in azimuth.  MC mode: seeded samples drawn from the measure itself
    (density proportional to omega * d omega * d cos * d phi), each carrying
    weight region_measure / n_samples.
    """
    if spec.mode == "mc":
        return _mc_node_set(region, spec)
    om, w_om = _radial_rule(
        region.freq_lo,
        region.freq_hi,
        spec.n_freq,
        spec.radial_scale,
        spec.radial_map,
    )
    cos_lo = math.cos(region.half_angle)
    cosines, w_cos = _gauss_legendre(spec.n_polar, cos_lo, 1.0)
    azimuths = 2.0 * math.pi * np.arange(spec.n_azimuth) / spec.n_azimuth
    w_az = 2.0 * math.pi / spec.n_azimuth

    dirs_grid = _dirs_from_angles(region, cosines, azimuths)  # (nc, na, 3)
    nf, nc, na = om.size, cosines.size, azimuths.size
    freqs = np.repeat(om, nc * na)
    dirs = np.tile(dirs_grid.reshape(nc * na, 3), (nf, 1))
    w_grid = (om * w_om)[:, None, None] * w_cos[None, :, None] * w_az * _MEASURE_CONST
    weights = np.broadcast_to(w_grid, (nf, nc, na)).reshape(-1).copy()
    return NodeSet(freqs=freqs, dirs=dirs, weights=weights)


def _mc_node_set(region: DetectorRegion, spec: QuadratureSpec) -> NodeSet:
    if region.is_semi_infinite:
        raise PreconditionError(
            "Monte Carlo mode requires a finite frequency window"
        )
    rng = np.random.default_rng(spec.seed)
    n = spec.n_samples
    u = rng.random(n)
    freqs = np.sqrt(region.freq_lo**2 + u * (region.freq_hi**2 - region.freq_lo**2))
    cosines = math.cos(region.half_angle) + rng.random(n) * (
        1.0 - math.cos(region.half_angle)
    )
    azimuths = 2.0 * math.pi * rng.random(n)
    e1, e2 = _axis_frame(region.axis)
    sin_t = np.sqrt(np.clip(1.0 - cosines**2, 0.0, None))
    dirs = (
        sin_t[:, None] * (np.cos(azimuths)[:, None] * e1 + np.sin(azimuths)[:, None] * e2)
        + cosines[:, None] * region.axis
    )
    w = np.full(n, region_measure(region) / n)
    return NodeSet(freqs=freqs, dirs=dirs, weights=w)


def region_measure(region: DetectorRegion) -> float:
    """Closed-form invariant measure of a conical region.

    integral(dGamma) = [(freq_hi^2 - freq_lo^2)/2] * [2*pi*(1 - cos(half_angle))]
                       / (2*(2*pi)^3).
    """
    if region.is_semi_infinite:
        raise PreconditionError("region measure diverges for a semi-infinite window")
    radial = 0.5 * (region.freq_hi**2 - region.freq_lo**2)
    angular = 2.0 * math.pi * (1.0 - math.cos(region.half_angle))
    return radial * angular * _MEASURE_CONST


def _evaluate(
    f: Callable, nodes: NodeSet, batch: bool
) -> np.ndarray:
    if batch:
        vals = np.asarray(f(nodes.freqs, nodes.dirs))
    else:
        vals = np.array([f(k) for k, _ in nodes])
    if vals.shape != nodes.freqs.shape:
        raise EvaluationError(
            f"integrand returned shape {vals.shape}, expected {nodes.freqs.shape}"
        )
    bad = ~np.isfinite(vals)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise EvaluationError(
            "integrand non-finite at node "
            f"(freq={nodes.freqs[i]!r}, dir={nodes.dirs[i]!r})"
        )
    return vals


def _sum_weighted(vals: np.ndarray, weights: np.ndarray) -> complex:
    # np.sum uses pairwise accumulation over a fixed array order, so results
    # are deterministic regardless of how evaluation was parallelized.
    return complex(np.sum(vals * weights))


def integrate_region(
    f: Callable,
    region: DetectorRegion,
    spec: QuadratureSpec,
    *,
    batch: bool = False,
    lorentz_map: LorentzMap | None = None,
) -> IntegralResult:
    """Integrate f against dGamma over the region, with an error estimate.

    Product mode estimates error by comparison with the half-resolution rule;
    MC mode uses the sample standard error.  ``batch=True`` means f takes
    ``(freqs, dirs)`` arrays and returns an array; otherwise f is called on
    each node as a NullMomentum.  If ``lorentz_map`` is given, f is evaluated
    at the mapped nodes (change of variables for integrals over the image
    region; the measure carries no Jacobian).
    """
    nodes = invariant_node_set(region, spec)
    if lorentz_map is not None:
        nodes = map_nodes(lorentz_map, nodes)
    vals = _evaluate(f, nodes, batch)
    value = _sum_weighted(vals, nodes.weights)
    if spec.mode == "mc":
        mean = np.mean(vals)
        var = np.mean(np.abs(vals - mean) ** 2)
        err = region_measure(region) * math.sqrt(var / len(nodes))
        return IntegralResult(value, float(err))
    coarse_nodes = invariant_node_set(region, spec.halved())
    if lorentz_map is not None:
        coarse_nodes = map_nodes(lorentz_map, coarse_nodes)
    coarse = _sum_weighted(_evaluate(f, coarse_nodes, batch), coarse_nodes.weights)
    floor = 64.0 * np.finfo(np.float64).eps * float(np.sum(np.abs(vals * nodes.weights)))
    return IntegralResult(value, abs(value - coarse) + floor)


def integrate_boosted_region(
    f: Callable,
    region: DetectorRegion,
    lorentz_map: LorentzMap,
    spec: QuadratureSpec,
    *,
    batch: bool = False,
) -> IntegralResult:
    """Integrate f over the image of the region under the map.

    Computes integral over {Lambda u : u in region} of f(l) dGamma(l) as the
    integral over the region of f(Lambda u) dGamma(u): the invariant measure
    makes the change of variables Jacobian-free, and the image of a cone
    (not itself a cone) is never meshed directly.
    """
    return integrate_region(f, region, spec, batch=batch, lorentz_map=lorentz_map)


def map_nodes(lorentz_map: LorentzMap, nodes: NodeSet) -> NodeSet:
    """Push nodes forward through a Lorentz map; weights are unchanged.

    The frequency of each image node is recomputed as the norm of its spatial
    part, so image momenta are exactly null.
    """
    four = np.empty((len(nodes), 4))
    four[:, 0] = nodes.freqs
    four[:, 1:] = nodes.freqs[:, None] * nodes.dirs
    img = four @ lorentz_map.matrix.T
    freqs = np.linalg.norm(img[:, 1:], axis=1)
    dirs = img[:, 1:] / freqs[:, None]
    return NodeSet(freqs=freqs, dirs=dirs, weights=nodes.weights)


def regions_disjoint(a: DetectorRegion, b: DetectorRegion) -> bool:
    """True iff the angular cones are separated: angle between the axes
    exceeds the sum of the half-openings (sufficient for all coincident
    same-momentum contributions between the two regions to vanish)."""
    cosang = float(np.clip(np.dot(a.axis, b.axis), -1.0, 1.0))
    return math.acos(cosang) > a.half_angle + b.half_angle
