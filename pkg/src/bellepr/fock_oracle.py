"""Brute-force finite-dimensional oracle for the reducible N-oscillator
representation on a small momentum grid.

Everything here is literal linear algebra: ladder, number, and center
operators as sparse matrices on ``grid x two truncated oscillator modes``
tensored N times, with state vectors built by applying creation operators
to an explicit vacuum.  The module exists to validate the closed-form
integral formulas used elsewhere, so it makes no approximations beyond the
occupation cutoff (which is exact for the two-photon sector when the
cutoff is at least 2).

Conventions
-----------
A grid cell (k_i, w_i) stands for a cell of the invariant measure with
weight w_i, so the distributional normalization of momentum kets becomes
``<k_i|k_j> = delta_ij / w_i``.  The stored basis vector for cell i is the
unit vector e_i, i.e. it represents sqrt(w_i)|k_i>; with that choice the
numpy inner product equals the physical one, the projector |k_i><k_i|
becomes (1/w_i) e_i e_i^T, and integrals over the grid are plain weighted
sums.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Mapping, NamedTuple, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import InputError, PreconditionError
from .spinor_tetrad import NullMomentum

__all__ = [
    "CheckResult",
    "DiscreteGrid",
    "OracleSpace",
    "OscillatorTruncation",
    "center_op",
    "circular_ladder",
    "coincidence_scale",
    "coincident_term",
    "commutator",
    "cutoff_safe_projector",
    "epr_oracle",
    "epr_unnormalized",
    "four_term_reference",
    "hamiltonian_single_polarization",
    "ladder",
    "linear_ladder",
    "norm_reference",
    "number_op",
    "number_op_quadratic",
    "two_photon_vector",
    "vacuum_vector",
    "verify_suite",
    "whole_spectrum_number",
    "yes_no_op",
]

_MAX_DIMENSION = 200_000


# --------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class DiscreteGrid:
    """Finite stand-in for the invariant measure: cells (k_i, w_i > 0)."""

    cells: tuple[tuple[NullMomentum, float], ...]

    def __init__(self, cells: Sequence[tuple[NullMomentum, float]]):
        entries = []
        for k, w in cells:
            if not isinstance(k, NullMomentum):
                raise InputError(f"grid cell momentum must be a NullMomentum, got {k!r}")
            w = float(w)
            if not (math.isfinite(w) and w > 0.0):
                raise InputError(f"grid cell weight must be positive, got {w!r}")
            entries.append((k, w))
        if not entries:
            raise InputError("grid needs at least one cell")
        for a in range(len(entries)):
            for b in range(a + 1, len(entries)):
                ka, kb = entries[a][0], entries[b][0]
                gap = abs(ka.freq - kb.freq) + float(np.max(np.abs(ka.dir - kb.dir)))
                if gap <= 1e-12:
                    raise InputError(
                        f"grid cells {a} and {b} carry the same momentum; "
                        "cells must be distinct"
                    )
        object.__setattr__(self, "cells", tuple(entries))

    @property
    def size(self) -> int:
        return len(self.cells)

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for _, w in self.cells])

    @property
    def freqs(self) -> np.ndarray:
        return np.array([k.freq for k, _ in self.cells])


@dataclass(frozen=True)
class OscillatorTruncation:
    """Occupation cutoff per polarization mode.

    At least 2, so that two creation operators applied to the vacuum stay
    inside the truncated space exactly.
    """

    max_occupation: int = 2

    def __post_init__(self) -> None:
        if not isinstance(self.max_occupation, int) or isinstance(
            self.max_occupation, bool
        ):
            raise InputError("max_occupation must be an integer")
        if self.max_occupation < 2:
            raise InputError(
                "max_occupation must be >= 2: two-photon states put occupation "
                "2 on a single mode"
            )


@dataclass(frozen=True)
class OracleSpace:
    """Tensor-power workspace: (grid x mode1 x mode2)^n_osc.

    ``dim_single`` is the one-oscillator dimension ``cells * (cutoff+1)^2``
    and ``dim`` the full ``dim_single ** n_osc``.
    """

    grid: DiscreteGrid
    trunc: OscillatorTruncation
    n_osc: int

    def __post_init__(self) -> None:
        if not isinstance(self.n_osc, int) or isinstance(self.n_osc, bool):
            raise InputError("n_osc must be a positive integer")
        if self.n_osc < 1:
            raise InputError("n_osc must be a positive integer")
        if self.dim > _MAX_DIMENSION:
            raise InputError(
                f"oracle dimension {self.dim} exceeds the supported limit "
                f"{_MAX_DIMENSION}; use fewer cells, lower cutoff, or smaller n_osc"
            )

    @property
    def levels(self) -> int:
        return self.trunc.max_occupation + 1

    @property
    def dim_single(self) -> int:
        return self.grid.size * self.levels * self.levels

    @property
    def dim(self) -> int:
        return self.dim_single**self.n_osc


class CheckResult(NamedTuple):
    """One named verification: residual against its pass threshold."""

    name: str
    residual: float
    threshold: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.threshold


# --------------------------------------------------------------------------
# single-oscillator building blocks


def _lowering_matrix(levels: int) -> sp.csr_matrix:
    data = np.sqrt(np.arange(1, levels))
    return sp.diags(data, offsets=1, format="csr")


def _mode_op(space: OracleSpace, osc_matrix: sp.spmatrix, mode: int) -> sp.csr_matrix:
    """grid-identity tensor single-mode operator on one oscillator slot."""
    eye_g = sp.identity(space.grid.size, format="csr")
    eye_m = sp.identity(space.levels, format="csr")
    if mode == 1:
        return sp.kron(eye_g, sp.kron(osc_matrix, eye_m), format="csr")
    if mode == 2:
        return sp.kron(eye_g, sp.kron(eye_m, osc_matrix), format="csr")
    raise InputError(f"mode must be 1 or 2, got {mode!r}")


def _cell_op(space: OracleSpace, cell: int, osc_pair_matrix: sp.spmatrix) -> sp.csr_matrix:
    """(1/w_i) |e_i><e_i| tensor (two-mode operator), on one oscillator slot."""
    if not (0 <= cell < space.grid.size):
        raise InputError(f"cell index {cell} outside grid of size {space.grid.size}")
    w = space.grid.weights[cell]
    proj = sp.csr_matrix(
        ([1.0 / w], ([cell], [cell])), shape=(space.grid.size, space.grid.size)
    )
    return sp.kron(proj, osc_pair_matrix, format="csr")


def _slot_embed(space: OracleSpace, op1: sp.spmatrix, slot: int) -> sp.csr_matrix:
    out = None
    for n in range(space.n_osc):
        factor = op1 if n == slot else sp.identity(space.dim_single, format="csr")
        out = factor if out is None else sp.kron(out, factor, format="csr")
    return out


def _symmetrized(space: OracleSpace, op1: sp.spmatrix, scale: float) -> sp.csr_matrix:
    total = None
    for n in range(space.n_osc):
        term = _slot_embed(space, op1, n)
        total = term if total is None else total + term
    return (scale * total).tocsr()


# --------------------------------------------------------------------------
# operators


def ladder(space: OracleSpace, cell: int, mode: int, kind: str = "lower") -> sp.csr_matrix:
    """Cell-local ladder operator in the n_osc representation: the slot sum
    of |k_i><k_i| tensor a_mode with the 1/sqrt(n_osc) normalization."""
    if kind not in ("lower", "raise"):
        raise InputError(f"kind must be 'lower' or 'raise', got {kind!r}")
    a = _lowering_matrix(space.levels)
    eye = sp.identity(space.levels, format="csr")
    pair = sp.kron(a, eye) if mode == 1 else sp.kron(eye, a) if mode == 2 else None
    if pair is None:
        raise InputError(f"mode must be 1 or 2, got {mode!r}")
    op1 = _cell_op(space, cell, pair)
    out = _symmetrized(space, op1, 1.0 / math.sqrt(space.n_osc))
    return out.conjugate().transpose().tocsr() if kind == "raise" else out


def number_op(space: OracleSpace, cell: int, mode: int) -> sp.csr_matrix:
    """Cell-local number operator: plain slot sum (no 1/n_osc) of
    |k_i><k_i| tensor a_mode^dag a_mode."""
    a = _lowering_matrix(space.levels)
    n_m = (a.conjugate().transpose() @ a).tocsr()
    eye = sp.identity(space.levels, format="csr")
    pair = sp.kron(n_m, eye) if mode == 1 else sp.kron(eye, n_m) if mode == 2 else None
    if pair is None:
        raise InputError(f"mode must be 1 or 2, got {mode!r}")
    return _symmetrized(space, _cell_op(space, cell, pair), 1.0)


def number_op_quadratic(space: OracleSpace, cell: int, mode: int) -> sp.csr_matrix:
    """The raise-then-lower alternative a^dag(k_i) a(k_i).

    For a single oscillator this equals ``coincidence_scale`` times
    ``number_op`` — the two definitions are inequivalent by exactly the
    coincidence factor of the discrete measure.
    """
    low = ladder(space, cell, mode, "lower")
    return (ladder(space, cell, mode, "raise") @ low).tocsr()


def coincidence_scale(space: OracleSpace, cell: int) -> float:
    """The discrete stand-in for the measure delta at coincident momenta."""
    return 1.0 / space.grid.weights[cell]


def center_op(space: OracleSpace, cell: int) -> sp.csr_matrix:
    """Central element of the commutation algebra: (1/n_osc) slot sum of
    |k_i><k_i| tensor identity."""
    pair = sp.identity(space.levels * space.levels, format="csr")
    return _symmetrized(space, _cell_op(space, cell, pair), 1.0 / space.n_osc)


def circular_ladder(space: OracleSpace, cell: int, s: int) -> sp.csr_matrix:
    """Circular-basis lowering operator: (a_1 - i s a_2)/sqrt(2) at one cell."""
    if s not in (1, -1):
        raise InputError(f"s must be +1 or -1, got {s!r}")
    a1 = ladder(space, cell, 1, "lower")
    a2 = ladder(space, cell, 2, "lower")
    return ((a1 - 1.0j * s * a2) / math.sqrt(2.0)).tocsr()


def linear_ladder(space: OracleSpace, cell: int, theta: float) -> sp.csr_matrix:
    """Linear-basis lowering operator at polarization angle theta, built
    from the circular pair as (1/sqrt(2)) sum_s a_s e^{i s theta}."""
    total = None
    for s in (1, -1):
        term = circular_ladder(space, cell, s) * (
            np.exp(1.0j * s * theta) / math.sqrt(2.0)
        )
        total = term if total is None else total + term
    return total.tocsr()


def cutoff_safe_projector(space: OracleSpace) -> sp.csr_matrix:
    """Projector onto states with every mode occupation strictly below the
    cutoff — the domain on which truncated ladder commutators are exact."""
    keep_mode = np.ones(space.levels)
    keep_mode[-1] = 0.0
    diag1 = np.kron(
        np.ones(space.grid.size), np.kron(keep_mode, keep_mode)
    )
    diag = diag1.copy()
    for _ in range(space.n_osc - 1):
        diag = np.kron(diag, diag1)
    return sp.diags(diag, format="csr")


def commutator(a: sp.spmatrix, b: sp.spmatrix) -> sp.csr_matrix:
    return (a @ b - b @ a).tocsr()


def whole_spectrum_number(space: OracleSpace, mode: int) -> sp.csr_matrix:
    """Weighted cell sum of the number operators — the photon count for one
    polarization over the whole grid; integer spectrum."""
    total = None
    for i in range(space.grid.size):
        term = space.grid.weights[i] * number_op(space, i, mode)
        total = term if total is None else total + term
    return total.tocsr()


def hamiltonian_single_polarization(space: OracleSpace) -> sp.csr_matrix:
    """Single-mode energy operator on one oscillator slot: weighted cell sum
    of freq * |k_i><k_i| tensor (a^dag a + 1/2); basis kets |k_i, n, .>
    are eigenvectors with eigenvalue freq_i (n + 1/2)."""
    a = _lowering_matrix(space.levels)
    n_m = (a.conjugate().transpose() @ a).tocsr()
    half = n_m + 0.5 * sp.identity(space.levels, format="csr")
    eye = sp.identity(space.levels, format="csr")
    total = None
    for i in range(space.grid.size):
        pair = sp.kron(half, eye, format="csr")
        term = (space.grid.weights[i] * space.grid.freqs[i]) * _cell_op(space, i, pair)
        total = term if total is None else total + term
    return _slot_embed(space, total.tocsr(), 0)


def yes_no_op(
    space: OracleSpace,
    cells: Sequence[int],
    angle: float,
    construction: str = "number",
) -> sp.csr_matrix:
    """Polarization yes/no observable over a cell subset at one analyzer
    angle: +1 on photons linearly polarized along the angle, -1 on the
    perpendicular ones.

    ``construction`` selects the build route: "number" subtracts the two
    perpendicular linear-mode number operators; "circular" uses the
    equivalent circular-basis combination e^{2 i s angle} a_{-s}^dag a_s.
    Both produce the same matrix.
    """
    cells = list(cells)
    if len(set(cells)) != len(cells):
        raise InputError("cell subset contains duplicates")
    if construction not in ("number", "circular"):
        raise InputError(
            f"construction must be 'number' or 'circular', got {construction!r}"
        )
    a = _lowering_matrix(space.levels)
    eye = sp.identity(space.levels, format="csr")
    a1 = sp.kron(a, eye, format="csr")
    a2 = sp.kron(eye, a, format="csr")
    if construction == "number":
        b_par = math.cos(angle) * a1 + math.sin(angle) * a2
        b_perp = -math.sin(angle) * a1 + math.cos(angle) * a2
        pair = (
            b_par.conjugate().transpose() @ b_par
            - b_perp.conjugate().transpose() @ b_perp
        ).tocsr()
    else:
        a_circ = {s: ((a1 - 1.0j * s * a2) / math.sqrt(2.0)).tocsr() for s in (1, -1)}
        pair = sum(
            np.exp(2.0j * s * angle) * (a_circ[-s].conjugate().transpose() @ a_circ[s])
            for s in (1, -1)
        ).tocsr()
    total = None
    for i in cells:
        term = space.grid.weights[i] * _symmetrized(
            space, _cell_op(space, i, pair), 1.0
        )
        total = term if total is None else total + term
    if total is None:
        raise InputError("cell subset is empty")
    return total.tocsr()


# --------------------------------------------------------------------------
# state vectors


def _normalized_o(space: OracleSpace, o_values: Sequence[complex]) -> np.ndarray:
    o = np.asarray(o_values, dtype=np.complex128).reshape(-1)
    if o.size != space.grid.size:
        raise InputError(
            f"need one vacuum amplitude per cell ({space.grid.size}), got {o.size}"
        )
    nrm2 = float(np.sum(space.grid.weights * np.abs(o) ** 2))
    if nrm2 <= 0.0:
        raise InputError("vacuum amplitudes must not all vanish")
    return o / math.sqrt(nrm2)


def vacuum_vector(space: OracleSpace, o_values: Sequence[complex]) -> np.ndarray:
    """Product vacuum with per-cell amplitudes, unit-normalized so the
    weighted square sum of the amplitudes is one; annihilated by every
    lowering operator."""
    o = _normalized_o(space, o_values)
    single = np.zeros(space.dim_single, dtype=np.complex128)
    stride = space.levels * space.levels
    for i in range(space.grid.size):
        single[i * stride] = math.sqrt(space.grid.weights[i]) * o[i]
    vec = single
    for _ in range(space.n_osc - 1):
        vec = np.kron(vec, single)
    return vec


def _check_tables(space: OracleSpace, tables: Mapping[tuple[int, int], np.ndarray]):
    out = {}
    m = space.grid.size
    for slot, tab in tables.items():
        s, spp = slot
        if s not in (1, -1) or spp not in (1, -1):
            raise InputError(f"amplitude slot must use helicities +-1, got {slot!r}")
        arr = np.asarray(tab, dtype=np.complex128)
        if arr.shape != (m, m):
            raise InputError(
                f"amplitude table for slot {slot} must be {m}x{m}, got {arr.shape}"
            )
        out[slot] = arr
    if not out:
        raise InputError("amplitude tables are empty")
    return out


def two_photon_vector(
    space: OracleSpace,
    tables: Mapping[tuple[int, int], np.ndarray],
    o_values: Sequence[complex],
) -> np.ndarray:
    """Pair state: weighted double cell sum of psi_ss'(k_i, k_j) times two
    circular creation operators applied to the vacuum (not normalized)."""
    tables = _check_tables(space, tables)
    vac = vacuum_vector(space, o_values)
    w = space.grid.weights
    raised = {
        (s, i): circular_ladder(space, i, s).conjugate().transpose().tocsr() @ vac
        for s in (1, -1)
        for i in range(space.grid.size)
    }
    out = np.zeros_like(vac)
    for (s, spp), tab in tables.items():
        for i in range(space.grid.size):
            create_i = circular_ladder(space, i, s).conjugate().transpose().tocsr()
            inner = np.zeros_like(vac)
            for j in range(space.grid.size):
                coef = w[i] * w[j] * tab[i, j]
                if coef != 0.0:
                    inner += coef * raised[(spp, j)]
            out += create_i @ inner
    return out


# --------------------------------------------------------------------------
# closed-form references (literal discretizations of the integral formulas)


def _z_values(space: OracleSpace, z_values: Sequence[float]) -> np.ndarray:
    z = np.asarray(z_values, dtype=np.float64).reshape(-1)
    if z.size != space.grid.size:
        raise InputError(
            f"need one density value per cell ({space.grid.size}), got {z.size}"
        )
    if np.any(z < 0.0):
        raise InputError("density values must be nonnegative")
    return z


def norm_reference(
    space: OracleSpace,
    tables: Mapping[tuple[int, int], np.ndarray],
    z_values: Sequence[float],
) -> float:
    """Closed-form squared norm of the pair state: (2/N) weighted diagonal
    sum plus (2(N-1)/N) weighted double sum, over all stored slots."""
    tables = _check_tables(space, tables)
    z = _z_values(space, z_values)
    w = space.grid.weights
    n = space.n_osc
    diag = 0.0
    cross = 0.0
    for tab in tables.values():
        diag += float(np.sum(w * np.abs(np.diag(tab)) ** 2 * z))
        cross += float((w * z) @ (np.abs(tab) ** 2) @ (w * z))
    return (2.0 / n) * diag + (2.0 * (n - 1) / n) * cross


def four_term_reference(
    space: OracleSpace,
    tables: Mapping[tuple[int, int], np.ndarray],
    z_values: Sequence[float],
    subset_b: Sequence[int],
    subset_a: Sequence[int],
    beta: float,
    alpha: float,
) -> float:
    """Disjoint-detector correlation numerator, discretized: 8(N-1)/N times
    the four cos/sin 2(beta +- alpha) combinations of the slot products over
    the two cell subsets."""
    tables = _check_tables(space, tables)
    z = _z_values(space, z_values)
    w = space.grid.weights
    ib = np.asarray(list(subset_b), dtype=int)
    ia = np.asarray(list(subset_a), dtype=int)
    ub = (w * z)[ib]
    ua = (w * z)[ia]
    t_sum = complex(
        ub @ (np.conj(tables[(1, 1)][np.ix_(ib, ia)]) * tables[(-1, -1)][np.ix_(ib, ia)]) @ ua
    ) if (1, 1) in tables and (-1, -1) in tables else 0.0j
    t_diff = complex(
        ub @ (np.conj(tables[(1, -1)][np.ix_(ib, ia)]) * tables[(-1, 1)][np.ix_(ib, ia)]) @ ua
    ) if (1, -1) in tables and (-1, 1) in tables else 0.0j
    fac = 8.0 * (space.n_osc - 1) / space.n_osc
    total = (
        math.cos(2.0 * (beta + alpha)) * t_sum.real
        + math.sin(2.0 * (beta + alpha)) * t_sum.imag
        + math.cos(2.0 * (beta - alpha)) * t_diff.real
        + math.sin(2.0 * (beta - alpha)) * t_diff.imag
    )
    return fac * total


def coincident_term(
    space: OracleSpace,
    tables: Mapping[tuple[int, int], np.ndarray],
    z_values: Sequence[float],
    subset_b: Sequence[int],
    subset_a: Sequence[int],
    beta: float,
    alpha: float,
) -> complex:
    """Every contribution to the unnormalized correlation that fires only
    where the two subsets share cells: the same-cell part of the two-point
    vacuum factor in the ordinary term, plus the explicitly coincident term
    with its whole-grid inner sum.  Complex in general — the two analyzer
    observables do not commute on shared cells."""
    tables = _check_tables(space, tables)
    z = _z_values(space, z_values)
    w = space.grid.weights
    n = space.n_osc
    shared = sorted(set(subset_b) & set(subset_a))
    total = 0.0 + 0.0j
    for i in shared:
        # same-cell piece of the two-point vacuum factor in the ordinary term
        for (s, spp), tab in tables.items():
            partner = tables.get((-spp, -s))
            if partner is None:
                continue
            phase = np.exp(-2.0j * (s * beta + spp * alpha))
            total += (
                4.0
                * w[i]
                * phase
                * np.conj(tab[i, i])
                * partner[i, i]
                * (1.0 / n)
                * z[i]
            )
        # explicitly coincident term: inner momentum sum over the whole grid
        for (s, spp), tab in tables.items():
            phase = np.exp(-2.0j * s * (beta - alpha))
            row = tab[i, :]
            inner = np.conj(row) * row * w * (
                (1.0 / n) * (np.arange(space.grid.size) == i) / w * z[i]
                + ((n - 1) / n) * z * z[i]
            )
            total += 4.0 * w[i] * phase * np.sum(inner)
    return complex(total)


# --------------------------------------------------------------------------
# oracle correlation


def _subset_ok(space: OracleSpace, subset: Sequence[int]) -> list[int]:
    cells = list(subset)
    if not cells:
        raise InputError("detector cell subset is empty")
    if len(set(cells)) != len(cells):
        raise InputError("detector cell subset contains duplicates")
    for i in cells:
        if not (0 <= i < space.grid.size):
            raise InputError(f"cell index {i} outside grid of size {space.grid.size}")
    return cells


def epr_unnormalized(
    space: OracleSpace,
    tables: Mapping[tuple[int, int], np.ndarray],
    o_values: Sequence[complex],
    subset_b: Sequence[int],
    subset_a: Sequence[int],
    beta: float,
    alpha: float,
) -> complex:
    """<pair| Y_beta Y_alpha |pair> by explicit matrices; handles subsets
    that share cells (the closed-form module refuses those).

    Real for disjoint subsets; on shared cells the two analyzer
    observables do not commute, so the ordered product picks up an
    imaginary part and the real part is the symmetrized average."""
    sb = _subset_ok(space, subset_b)
    sa = _subset_ok(space, subset_a)
    vec = two_photon_vector(space, tables, o_values)
    y_b = yes_no_op(space, sb, beta)
    y_a = yes_no_op(space, sa, alpha)
    return complex(np.vdot(vec, y_b @ (y_a @ vec)))


def epr_oracle(
    space: OracleSpace,
    tables: Mapping[tuple[int, int], np.ndarray],
    o_values: Sequence[complex],
    subset_b: Sequence[int],
    subset_a: Sequence[int],
    beta: float,
    alpha: float,
) -> float:
    """Normalized correlation: the symmetrized (real-part) expectation
    divided by the squared norm of the pair state."""
    vec = two_photon_vector(space, tables, o_values)
    nrm2 = float(np.vdot(vec, vec).real)
    if nrm2 <= 0.0:
        raise PreconditionError("pair state has zero norm on this grid")
    raw = epr_unnormalized(space, tables, o_values, subset_b, subset_a, beta, alpha)
    return raw.real / nrm2


# --------------------------------------------------------------------------
# verification suite


def _opnorm(m: sp.spmatrix) -> float:
    m = m.tocoo()
    if m.nnz == 0:
        return 0.0
    return float(np.max(np.abs(m.data)))


def _sym_random_tables(rng, m: int, slots) -> dict:
    out = {}
    for s, spp in slots:
        a = rng.normal(size=(m, m)) + 1.0j * rng.normal(size=(m, m))
        out[(s, spp)] = a
    # enforce the exchange symmetry psi_ss'(k,k') = psi_s's(k',k)
    sym = {}
    for (s, spp), tab in out.items():
        partner = out.get((spp, s))
        sym[(s, spp)] = 0.5 * (tab + partner.T) if partner is not None else tab
    return sym


def verify_suite(
    grid: DiscreteGrid,
    n_osc: int = 2,
    trunc: OscillatorTruncation | None = None,
    seed: int = 0,
    fault_scale: float = 1.0,
) -> list[CheckResult]:
    """Full oracle regression on one grid: commutation algebra, center,
    basis change, eigenvalues, spectra, norm formula, and correlation
    agreement, each as a named residual with its pass threshold.

    ``fault_scale`` multiplies the expected central element in the
    ladder-pair check; any value other than 1 is a deliberate fault that
    must make that check fail — a self-test that the harness can detect
    violations."""
    trunc = trunc or OscillatorTruncation()
    space = OracleSpace(grid, trunc, n_osc)
    rng = np.random.default_rng(seed)
    m = space.grid.size
    w = space.grid.weights
    guard = cutoff_safe_projector(space)
    tight, loose = 1e-12, 1e-8
    checks: list[CheckResult] = []

    # ladder commutation with central right-hand side
    worst = 0.0
    for i in range(m):
        for j in range(m):
            for mo, mo2 in ((1, 1), (1, 2)):
                lhs = commutator(
                    ladder(space, i, mo, "lower"), ladder(space, j, mo2, "raise")
                )
                rhs = (
                    (fault_scale / w[i]) * center_op(space, i)
                    if (i == j and mo == mo2)
                    else sp.csr_matrix((space.dim, space.dim))
                )
                worst = max(worst, _opnorm((lhs - rhs) @ guard))
    checks.append(CheckResult("ladder-pair-commutator-central", worst, tight))

    # number-operator commutators (exact on the full truncated space)
    worst_low, worst_raise = 0.0, 0.0
    for i in range(m):
        for j in range(m):
            low = ladder(space, i, 1, "lower")
            num = number_op(space, j, 1)
            rhs = (1.0 / w[i]) * low if i == j else sp.csr_matrix((space.dim, space.dim))
            worst_low = max(worst_low, _opnorm(commutator(low, num) - rhs))
            rai = ladder(space, i, 1, "raise")
            rhs2 = (
                (-1.0 / w[i]) * rai if i == j else sp.csr_matrix((space.dim, space.dim))
            )
            worst_raise = max(worst_raise, _opnorm(commutator(rai, num) - rhs2))
        num2 = number_op(space, i, 2)
        worst_low = max(
            worst_low, _opnorm(commutator(ladder(space, i, 1, "lower"), num2))
        )
    checks.append(CheckResult("lowering-number-commutator", worst_low, tight))
    checks.append(CheckResult("raising-number-commutator", worst_raise, tight))

    # center: commutes with ladders and resolves the identity
    worst = 0.0
    for i in range(m):
        cen = center_op(space, i)
        for j in range(m):
            worst = max(
                worst, _opnorm(commutator(ladder(space, j, 1, "lower"), cen))
            )
            worst = max(
                worst, _opnorm(commutator(ladder(space, j, 2, "raise"), cen))
            )
    checks.append(CheckResult("center-commutes-with-ladders", worst, tight))
    resolution = sum(w[i] * center_op(space, i) for i in range(m))
    checks.append(
        CheckResult(
            "center-resolution-of-identity",
            _opnorm(resolution - sp.identity(space.dim, format="csr")),
            tight,
        )
    )

    # single-oscillator ladder matches the cell-projector tensor form
    space1 = OracleSpace(grid, trunc, 1)
    a = _lowering_matrix(space1.levels)
    eye = sp.identity(space1.levels, format="csr")
    direct = _cell_op(space1, 0, sp.kron(a, eye, format="csr"))
    checks.append(
        CheckResult(
            "single-oscillator-ladder-form",
            _opnorm(ladder(space1, 0, 1, "lower") - direct),
            tight,
        )
    )

    # raise-then-lower number alternative: coincidence scale at n_osc = 1
    alt = number_op_quadratic(space1, 0, 1)
    scaled = coincidence_scale(space1, 0) * number_op(space1, 0, 1)
    checks.append(
        CheckResult("quadratic-number-coincidence-scale", _opnorm(alt - scaled), tight)
    )

    # basis change: linear ladder from circular pair equals mode rotation
    worst = 0.0
    for theta in (0.0, 0.37, -1.2):
        lin = linear_ladder(space, 0, theta)
        rot = math.cos(theta) * ladder(space, 0, 1, "lower") + math.sin(
            theta
        ) * ladder(space, 0, 2, "lower")
        worst = max(worst, _opnorm(lin - rot))
        # and back: circular from the two perpendicular linear modes
        lin_perp = linear_ladder(space, 0, theta + math.pi / 2.0)
        for s in (1, -1):
            back = (
                np.exp(-1.0j * s * theta)
                / math.sqrt(2.0)
                * (lin - 1.0j * s * lin_perp)
            )
            worst = max(worst, _opnorm(circular_ladder(space, 0, s) - back))
    checks.append(CheckResult("circular-linear-basis-change", worst, tight))

    # circular/linear ladders keep the central commutator
    worst = 0.0
    for i in range(m):
        lhs = commutator(
            linear_ladder(space, i, 0.4),
            linear_ladder(space, i, 0.4).conjugate().transpose().tocsr(),
        )
        worst = max(worst, _opnorm((lhs - (1.0 / w[i]) * center_op(space, i)) @ guard))
    checks.append(CheckResult("linear-ladder-commutator-central", worst, tight))

    # yes/no observable: two constructions agree; eigenvalues +-1
    worst = 0.0
    for ang in (0.0, 0.7):
        y_num = yes_no_op(space, range(m), ang, "number")
        y_cir = yes_no_op(space, range(m), ang, "circular")
        worst = max(worst, _opnorm(y_num - y_cir))
    checks.append(CheckResult("yesno-construction-equality", worst, tight))

    ang = 0.61
    o_vals = rng.normal(size=m) + 0.2
    vac = vacuum_vector(space, o_vals)
    worst_p, worst_m_ = 0.0, 0.0
    photon_par = sum(
        w[i]
        * math.sqrt(w[i])
        * (linear_ladder(space, i, ang).conjugate().transpose().tocsr() @ vac)
        for i in range(m)
    )
    photon_perp = sum(
        w[i]
        * math.sqrt(w[i])
        * (
            linear_ladder(space, i, ang + math.pi / 2.0)
            .conjugate()
            .transpose()
            .tocsr()
            @ vac
        )
        for i in range(m)
    )
    y_full = yes_no_op(space, range(m), ang)
    worst_p = float(
        np.max(np.abs(y_full @ photon_par - photon_par))
        / max(np.max(np.abs(photon_par)), 1e-300)
    )
    worst_m_ = float(
        np.max(np.abs(y_full @ photon_perp + photon_perp))
        / max(np.max(np.abs(photon_perp)), 1e-300)
    )
    checks.append(CheckResult("yesno-aligned-eigenvalue-plus-one", worst_p, tight))
    checks.append(CheckResult("yesno-crossed-eigenvalue-minus-one", worst_m_, tight))

    # vacuum: unit norm, annihilated by all lowering operators
    worst = abs(float(np.vdot(vac, vac).real) - 1.0)
    for i in range(m):
        for mo in (1, 2):
            worst = max(
                worst, float(np.max(np.abs(ladder(space, i, mo, "lower") @ vac)))
            )
    checks.append(CheckResult("vacuum-normalized-and-annihilated", worst, tight))

    # energy operator: basis kets are eigenvectors with freq*(n + 1/2)
    ham = hamiltonian_single_polarization(space)
    worst = 0.0
    stride = space.levels * space.levels
    for i in range(m):
        for occ in range(space.levels):
            idx = (i * stride + occ * space.levels) * (space.dim_single ** (space.n_osc - 1))
            basis = np.zeros(space.dim)
            basis[idx] = 1.0
            expect = space.grid.freqs[i] * (occ + 0.5)
            worst = max(worst, float(np.max(np.abs(ham @ basis - expect * basis))))
    checks.append(CheckResult("energy-eigenvalues-half-integer", worst, tight))

    # whole-spectrum photon count: diagonal with integer spectrum
    nsum = whole_spectrum_number(space, 1)
    diag = nsum.diagonal()
    off = nsum - sp.diags(diag)
    worst = max(
        _opnorm(off), float(np.max(np.abs(diag - np.round(diag.real))))
    )
    checks.append(CheckResult("whole-spectrum-count-integer", worst, tight))

    # pair-state norm against the closed form
    z_vals = np.abs(_normalized_o(space, o_vals)) ** 2
    tables = _sym_random_tables(rng, m, [(1, 1), (1, -1), (-1, 1), (-1, -1)])
    vec = two_photon_vector(space, tables, o_vals)
    nrm2 = float(np.vdot(vec, vec).real)
    ref = norm_reference(space, tables, z_vals)
    checks.append(
        CheckResult(
            "pair-norm-closed-form",
            abs(nrm2 - ref) / max(abs(ref), 1e-300),
            1e-10,
        )
    )

    # correlation: disjoint subsets match the four-term formula
    if m >= 2:
        sb, sa = [0], [m - 1]
        beta, alpha = 0.55, -0.3
        oracle_num = epr_unnormalized(space, tables, o_vals, sb, sa, beta, alpha)
        ref_num = four_term_reference(space, tables, z_vals, sb, sa, beta, alpha)
        checks.append(
            CheckResult(
                "correlation-disjoint-four-term",
                abs(oracle_num - ref_num) / max(abs(ref_num), 1.0),
                loose,
            )
        )
        # overlapping subsets: the excess over the four-term formula is the
        # coincident contribution
        sb2, sa2 = [0, 1], [0]
        oracle2 = epr_unnormalized(space, tables, o_vals, sb2, sa2, beta, alpha)
        ref2 = four_term_reference(space, tables, z_vals, sb2, sa2, beta, alpha)
        coin = coincident_term(space, tables, z_vals, sb2, sa2, beta, alpha)
        checks.append(
            CheckResult(
                "correlation-coincident-isolation",
                abs(oracle2 - ref2 - coin) / max(abs(oracle2), 1.0),
                loose,
            )
        )
    return checks
