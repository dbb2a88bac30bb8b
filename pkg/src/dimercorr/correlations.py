"""Quantum-correlation panel of the thermal dimer and its critical temperatures.

For D = 0 the thermal state is fully determined by the scalar
G = (4/3) <S1.S2>, and every measure has a closed form in G.  The general
path (Wootters concurrence, Horodecki CHSH bound, measurement-optimized
discord) works for any valid two-qubit state and is what a nonzero
Dzyaloshinskii-Moriya coupling requires; the two routes cross-validate
each other at D = 0.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .constants import KB_MEV_PER_K
from .numerics import bisect_boundary, golden_section_max
from .quantum_core import (
    PAULIS,
    SIGMA_Y,
    DimerModel,
    g_parameter,
    gibbs_state,
    spin_correlator,
)

_SYSY = np.kron(SIGMA_Y, SIGMA_Y)
_PAULI_PAIRS = np.stack(
    [np.stack([np.kron(PAULIS[a], PAULIS[b]) for b in range(3)]) for a in range(3)]
)

WITNESS_BOUND = 0.25  # product states satisfy |<S1.S2>| <= 1/4


def _xlog2(value):
    """x log2 x with the continuity convention 0 log 0 = 0."""
    if value <= 0.0:
        return 0.0
    return value * math.log2(value)


def _check_range(name, value, lo, hi):
    if not lo <= value <= hi:
        raise ValueError(f"{name} must lie in [{lo}, {hi}], got {value}")


def von_neumann_entropy(matrix):
    """Entropy -sum lam log2 lam of a Hermitian PSD matrix, in bits."""
    lam = np.clip(np.linalg.eigvalsh(matrix), 0.0, None)
    nonzero = lam[lam > 0.0]
    return float(-np.sum(nonzero * np.log2(nonzero)))


def reduced_states(rho):
    """Single-spin reduced states (site 1, site 2) as 2x2 arrays."""
    r4 = rho.matrix.reshape(2, 2, 2, 2)
    return np.einsum("abcb->ac", r4), np.einsum("abac->bc", r4)


# ---------------------------------------------------------------------------
# Entanglement witness and concurrence
# ---------------------------------------------------------------------------

def witness(rho):
    """Entanglement witness |<S1.S2>| and whether it exceeds the product bound 1/4."""
    value = abs(spin_correlator(rho))
    return value, value > WITNESS_BOUND


def concurrence_closed(G):
    """Concurrence of the D = 0 thermal dimer state, max{0, |G| - |1+G|/2}."""
    _check_range("G", G, -1.0, 1.0 / 3.0)
    return max(0.0, abs(G) - 0.5 * abs(1.0 + G))


def concurrence_wootters(rho):
    """Concurrence from the spin-flipped product spectrum, for any two-qubit state.

    The eigenvalues of rho.rho_tilde (rho_tilde the sigma_y x sigma_y spin
    flip of the complex conjugate) equal the spectrum of the Hermitian
    product M = sqrt(rho) rho_tilde sqrt(rho), so no general non-Hermitian
    eigensolver is needed.  M factors as B B^dag with
    B = sqrt(rho) (sigma_y x sigma_y) sqrt(rho)*, and the required
    sqrt-eigenvalues are the singular values of B; taking them directly
    keeps the near-zero ones at full absolute precision, where eigenvalues
    of the squared product would lose half the digits.
    """
    vals, vecs = np.linalg.eigh(rho.matrix)
    sqrt_rho = (vecs * np.sqrt(np.clip(vals, 0.0, None))) @ vecs.conj().T
    flip_factor = sqrt_rho @ _SYSY @ sqrt_rho.conj()
    lam = np.linalg.svd(flip_factor, compute_uv=False)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


# ---------------------------------------------------------------------------
# Mutual information, classical correlation, discord: closed forms in G
# ---------------------------------------------------------------------------

def mutual_information(G):
    """Mutual information of the D = 0 thermal state, in bits.

    (1/4)[(1-3G) log2(1-3G) + 3(1+G) log2(1+G)]; equals 2 - S(rho) because
    both single-spin marginals are maximally mixed.
    """
    _check_range("G", G, -1.0, 1.0 / 3.0)
    return 0.25 * (_xlog2(1.0 - 3.0 * G) + 3.0 * _xlog2(1.0 + G))


def classical_correlation_closed(G):
    """Maximal classical correlation of the D = 0 thermal state, in bits.

    (1/2)[(1-G) log2(1-G) + (1+G) log2(1+G)]; the optimum over projective
    measurements is direction-independent for these isotropic states.
    """
    _check_range("G", G, -1.0, 1.0)
    return 0.5 * (_xlog2(1.0 - G) + _xlog2(1.0 + G))


def discord(G):
    """Quantum discord of the D = 0 thermal state: mutual information minus
    classical correlation, in bits."""
    return mutual_information(G) - classical_correlation_closed(G)


# ---------------------------------------------------------------------------
# Measurement-optimized discord for general states
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class MeasurementBasis:
    """Bloch angles of the rank-1 projective measurement axis on spin 2."""

    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0.0 <= self.phi < 2.0 * math.pi:
            raise ValueError(f"phi must lie in [0, 2*pi), got {self.phi}")


_GRID_THETA = np.linspace(0.0, math.pi, 181)
_GRID_PHI = np.linspace(0.0, 2.0 * math.pi, 360, endpoint=False)


def _bloch_axes(theta, phi):
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)


def _branch_entropy_terms(mats):
    """sum_k -lam_k log2(lam_k / p) for each unnormalized 2x2 branch state.

    This is p * S(state / p); branches with vanishing probability contribute 0.
    """
    tr = np.real(mats[..., 0, 0] + mats[..., 1, 1])
    det = np.real(mats[..., 0, 0] * mats[..., 1, 1] - mats[..., 0, 1] * mats[..., 1, 0])
    disc = np.sqrt(np.maximum(tr * tr - 4.0 * det, 0.0))
    p = np.maximum(tr, 0.0)
    out = np.zeros_like(tr)
    for lam in (0.5 * (tr + disc), 0.5 * (tr - disc)):
        lam = np.maximum(lam, 0.0)
        mask = (lam > 0.0) & (p > 0.0)
        out[mask] -= lam[mask] * np.log2(lam[mask] / p[mask])
    return out


def _measured_correlation_evaluator(rho):
    """Vectorized J(axis) = S(rho1) - sum_b p_b S(rho1|b) over measurement axes."""
    r4 = rho.matrix.reshape(2, 2, 2, 2)
    rho1 = np.einsum("abcb->ac", r4)
    kvec = np.stack([np.einsum("abcw,wb->ac", r4, sigma) for sigma in PAULIS])
    base_entropy = von_neumann_entropy(rho1)

    def evaluate(axes):
        plus = 0.5 * (rho1[None, :, :] + np.einsum("na,aij->nij", axes, kvec))
        minus = rho1[None, :, :] - plus
        return base_entropy - _branch_entropy_terms(plus) - _branch_entropy_terms(minus)

    return evaluate


def classical_correlation_optimized(rho, tol=1e-9):
    """Classical correlation maximized over projective measurements on spin 2.

    A 181 x 360 angular grid seeds an alternating golden-section refinement
    of (theta, phi) that stops once a full round improves the value by less
    than tol.  Returns (value in bits, optimizing MeasurementBasis).
    """
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    evaluate = _measured_correlation_evaluator(rho)
    tgrid, pgrid = np.meshgrid(_GRID_THETA, _GRID_PHI, indexing="ij")
    values = evaluate(_bloch_axes(tgrid.ravel(), pgrid.ravel()))
    best = int(np.argmax(values))
    theta = float(tgrid.ravel()[best])
    phi = float(pgrid.ravel()[best])
    value = float(values[best])

    def at(th, ph):
        return float(evaluate(_bloch_axes([th], [ph]))[0])

    window = math.pi / 180.0
    for _ in range(60):
        round_start = value
        candidate, candidate_value = golden_section_max(
            lambda t: at(t, phi), max(0.0, theta - window), min(math.pi, theta + window),
            xtol=1e-8,
        )
        if candidate_value > value:
            theta, value = candidate, candidate_value
        candidate, candidate_value = golden_section_max(
            lambda p: at(theta, p), phi - window, phi + window, xtol=1e-8
        )
        if candidate_value > value:
            phi, value = candidate, candidate_value
        window *= 0.5
        if value - round_start < tol:
            break
    return value, MeasurementBasis(min(max(theta, 0.0), math.pi), phi % (2.0 * math.pi))


def mutual_information_from_state(rho):
    """S(rho1) + S(rho2) - S(rho) in bits, for any two-qubit state."""
    rho1, rho2 = reduced_states(rho)
    return (
        von_neumann_entropy(rho1)
        + von_neumann_entropy(rho2)
        - von_neumann_entropy(rho.matrix)
    )


def discord_optimized(rho, tol=1e-9):
    """Quantum discord from the Henderson-Vedral measurement optimization.

    Ground truth for D != 0 states; agrees with discord(G) at D = 0.
    """
    value, _ = classical_correlation_optimized(rho, tol)
    return mutual_information_from_state(rho) - value


# ---------------------------------------------------------------------------
# CHSH maximum (Horodecki criterion)
# ---------------------------------------------------------------------------

def chsh_max(rho):
    """Maximal CHSH expectation 2 sqrt(t1 + t2), t1 >= t2 the largest two
    eigenvalues of T^T T with T the Pauli correlation matrix.

    Values above 2 certify nonlocality; D = 0 thermal states give
    2 sqrt(2) |G|.
    """
    t = np.real(np.einsum("ij,abji->ab", rho.matrix, _PAULI_PAIRS))
    eigs = np.linalg.eigvalsh(t.T @ t)
    return float(2.0 * math.sqrt(max(eigs[-1] + eigs[-2], 0.0)))


# ---------------------------------------------------------------------------
# Correlation panel at one temperature
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class CorrelationPoint:
    """The full correlation panel of the thermal dimer at one temperature.

    Entropic quantities are in bits; entangled means concurrence > 0 and
    nonlocal_flag means chsh_max > 2.
    """

    T: float
    G: float
    witness: float
    concurrence: float
    mutual_info: float
    classical_corr: float
    discord: float
    chsh_max: float
    entangled: bool
    nonlocal_flag: bool

    def __post_init__(self):
        if abs(self.discord - (self.mutual_info - self.classical_corr)) > 1e-9:
            raise ValueError("discord must equal mutual_info - classical_corr")
        if self.classical_corr < -1e-12 or self.classical_corr > self.mutual_info + 1e-9:
            raise ValueError("classical correlation must lie in [0, mutual_info]")
        if self.entangled != (self.concurrence > 0.0):
            raise ValueError("entangled flag inconsistent with concurrence")
        if self.nonlocal_flag != (self.chsh_max > 2.0):
            raise ValueError("nonlocal flag inconsistent with chsh_max")


def correlation_point(model, temperature, tol=1e-9):
    """Evaluate the whole panel at one temperature.

    Uses the closed forms in G when D = 0 and the general state-based path
    (Wootters, Horodecki, measurement optimization) otherwise.
    """
    if model.D == 0.0:
        G = g_parameter(model, temperature)
        witness_value = 0.75 * abs(G)
        conc = concurrence_closed(G)
        mi = mutual_information(G)
        cc = classical_correlation_closed(G)
        bell = 2.0 * math.sqrt(2.0) * abs(G)
    else:
        rho = gibbs_state(model, temperature)
        correlator = spin_correlator(rho)
        G = (4.0 / 3.0) * correlator
        witness_value = abs(correlator)
        conc = concurrence_wootters(rho)
        mi = mutual_information_from_state(rho)
        cc, _ = classical_correlation_optimized(rho, tol)
        bell = chsh_max(rho)
    return CorrelationPoint(
        T=temperature,
        G=G,
        witness=witness_value,
        concurrence=conc,
        mutual_info=mi,
        classical_corr=cc,
        discord=mi - cc,
        chsh_max=bell,
        entangled=conc > 0.0,
        nonlocal_flag=bell > 2.0,
    )


# ---------------------------------------------------------------------------
# Critical temperatures
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class CriticalTemperatures:
    """tc_entanglement: concurrence reaches 0; tc_chsh: CHSH maximum reaches 2;
    t_cross: concurrence and discord cross."""

    tc_entanglement: float
    tc_chsh: float
    t_cross: float

    def __post_init__(self):
        for name in ("tc_entanglement", "tc_chsh", "t_cross"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")


def entanglement_tc_closed(J):
    """Closed-form entanglement critical temperature J / (kB ln 3) for D = 0."""
    if J <= 0.0:
        raise ValueError("a ferromagnetic dimer is never thermally entangled")
    return J / (KB_MEV_PER_K * math.log(3.0))


def chsh_tc_closed(J):
    """Closed-form CHSH critical temperature J / (kB ln((3+sqrt2)/(sqrt2-1)))."""
    if J <= 0.0:
        raise ValueError("a ferromagnetic dimer never violates CHSH thermally")
    return J / (KB_MEV_PER_K * math.log((3.0 + math.sqrt(2.0)) / (math.sqrt(2.0) - 1.0)))


def _upper_bracket(model):
    return 10.0 * model.J / KB_MEV_PER_K


def find_entanglement_tc(model, resolution=1e-3):
    """Entanglement death temperature by bisection on the Wootters concurrence."""
    if model.J <= 0.0:
        raise ValueError("a ferromagnetic dimer is never thermally entangled")
    return bisect_boundary(
        lambda T: concurrence_wootters(gibbs_state(model, T)) > 0.0,
        1.0,
        _upper_bracket(model),
        resolution,
    )


def find_chsh_tc(model, resolution=1e-3):
    """Temperature where the CHSH maximum drops to 2, by bisection."""
    if model.J <= 0.0:
        raise ValueError("a ferromagnetic dimer never violates CHSH thermally")
    return bisect_boundary(
        lambda T: chsh_max(gibbs_state(model, T)) > 2.0,
        1.0,
        _upper_bracket(model),
        resolution,
    )


def find_crossing_temperature(model, resolution=1e-3, tol=1e-9):
    """Temperature where concurrence and discord cross, by bracketed bisection.

    A coarse scan first locates the region where concurrence - discord is
    safely positive; at very low T both measures saturate and their
    difference underflows, so the scan maximum (not the bracket edge)
    anchors the bisection.
    """
    if model.J <= 0.0:
        raise ValueError("crossing temperature requires J > 0")
    if model.D == 0.0:
        def difference(T):
            G = g_parameter(model, T)
            return concurrence_closed(G) - discord(G)
    else:
        def difference(T):
            rho = gibbs_state(model, T)
            return concurrence_wootters(rho) - discord_optimized(rho, tol)

    grid = np.linspace(1.0, _upper_bracket(model), 96)
    values = np.array([difference(t) for t in grid])
    i_pos = int(np.argmax(values))
    if values[i_pos] <= 0.0:
        raise ValueError("concurrence never exceeds discord on the scan grid")
    negatives = np.nonzero(values[i_pos:] < 0.0)[0]
    if negatives.size == 0:
        raise ValueError("no concurrence-discord crossing below the scan ceiling")
    i_neg = i_pos + int(negatives[0])
    return bisect_boundary(
        lambda T: difference(T) > 0.0, grid[i_pos], grid[i_neg], resolution
    )


def critical_temperatures(model, resolution=1e-3, tol=1e-9):
    """All three characteristic temperatures of the model.

    Closed forms for D = 0, bisection at 1e-3 K resolution otherwise; the
    concurrence-discord crossing always comes from bisection.
    """
    if model.J <= 0.0:
        raise ValueError("critical temperatures require an antiferromagnetic J > 0")
    if model.D == 0.0:
        tc_ent = entanglement_tc_closed(model.J)
        tc_bell = chsh_tc_closed(model.J)
    else:
        tc_ent = find_entanglement_tc(model, resolution)
        tc_bell = find_chsh_tc(model, resolution)
    t_cross = find_crossing_temperature(model, resolution, tol)
    return CriticalTemperatures(tc_ent, tc_bell, t_cross)
