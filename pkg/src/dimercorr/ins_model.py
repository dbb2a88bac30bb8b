"""Forward model of the dimer's inelastic-neutron-scattering observables.

The dispersionless singlet-triplet transition sits at energy transfer J;
its powder-averaged momentum dependence carries the intra-dimer separation
through the interference factor 1 - sin(QR)/(QR).  The module also ships
the magnetic form factor machinery, a synthetic-spectrum generator for the
fitting round trip, and the isolated-dimer molar susceptibility as an
independent consistency check on J.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .constants import AVOGADRO, KB_ERG_PER_K, KB_MEV_PER_K, MU_B_ERG_PER_G
from .fitting import FWHM_OVER_SIGMA, FitModelParams, evaluate_model
from .numerics import golden_section_max
from .quantum_core import SPIN_SITE1, SPIN_SITE2, DimerModel, build_hamiltonian, eigh4
from .spectra import Spectrum

SIGMA_FLOOR = 1e-9  # counts; keeps noiseless spectra weightable


@dataclasses.dataclass(frozen=True)
class FormFactorParams:
    """Dipole approximation coefficients: F(Q) = A e^(-a s^2) + B e^(-b s^2)
    + C e^(-c s^2) + D0 with s = Q/(4 pi) in 1/angstrom.

    Normalization requires F(0) = A + B + C + D0 within 1% of unity.
    """

    A: float
    a: float
    B: float
    b: float
    C: float
    c: float
    D0: float

    def __post_init__(self):
        f0 = self.A + self.B + self.C + self.D0
        if not 0.99 <= f0 <= 1.01:
            raise ValueError(f"form factor normalization F(0) = {f0} is not within 1% of 1")


@dataclasses.dataclass(frozen=True)
class LineShape:
    """Gaussian replacement of the energy delta function.

    fwhm is the full width at half maximum in meV; include_antistokes adds
    the energy-gain mirror peak when synthesizing spectra.
    """

    fwhm: float
    include_antistokes: bool = False

    def __post_init__(self):
        if self.fwhm <= 0.0:
            raise ValueError(f"fwhm must be positive, got {self.fwhm}")


@dataclasses.dataclass(frozen=True)
class SynthConfig:
    """Everything needed to synthesize one seeded spectrum."""

    model: DimerModel
    T: float
    lineshape: LineShape
    background_slope: float = 0.0
    background_intercept: float = 0.0
    amplitude: float = 10.0
    noise_fraction: float = 0.0
    grid: tuple = (2.0, 14.0, 200)
    rng_seed: int = 0

    def __post_init__(self):
        emin, emax, n_points = self.grid
        if not emin < emax:
            raise ValueError(f"grid requires Emin < Emax, got ({emin}, {emax})")
        if int(n_points) != n_points or n_points < 2:
            raise ValueError(f"grid needs at least 2 points, got {n_points}")
        if self.noise_fraction < 0.0:
            raise ValueError(f"noise_fraction must be nonnegative, got {self.noise_fraction}")
        if self.amplitude < 0.0:
            raise ValueError(f"amplitude must be nonnegative, got {self.amplitude}")
        if self.T <= 0.0:
            raise ValueError(f"temperature must be positive, got {self.T}")


def interference_factor(q, separation):
    """Dimer interference term 1 - sin(QR)/(QR), zero at Q = 0 by continuity."""
    if separation <= 0.0:
        raise ValueError(f"separation must be positive, got {separation}")
    q = np.asarray(q, dtype=float)
    if np.any(q < 0.0):
        raise ValueError("momentum transfer must be nonnegative")
    # np.sinc(x) = sin(pi x)/(pi x), so rescale to plain sin(x)/x.
    result = 1.0 - np.sinc(q * separation / math.pi)
    return float(result) if result.ndim == 0 else result


def form_factor(q, params):
    """Magnetic ion form factor in the dipole approximation, dimensionless."""
    q = np.asarray(q, dtype=float)
    if np.any(q < 0.0):
        raise ValueError("momentum transfer must be nonnegative")
    s2 = (q / (4.0 * math.pi)) ** 2
    result = (
        params.A * np.exp(-params.a * s2)
        + params.B * np.exp(-params.b * s2)
        + params.C * np.exp(-params.c * s2)
        + params.D0
    )
    return float(result) if result.ndim == 0 else result


def load_form_factor(path):
    """Read form-factor coefficients from a flat 'key = value' text file.

    Keys are the case-sensitive field names A, a, B, b, C, c, D0; '#'
    starts a comment.
    """
    values = {}
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
            key, _, text = line.partition("=")
            key = key.strip()
            try:
                values[key] = float(text.strip())
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: bad number {text.strip()!r}") from exc
    missing = [k for k in ("A", "a", "B", "b", "C", "c", "D0") if k not in values]
    if missing:
        raise ValueError(f"{path}: missing form-factor keys {missing}")
    return FormFactorParams(**{k: values[k] for k in ("A", "a", "B", "b", "C", "c", "D0")})


def default_form_factor():
    """Tabulated dipole-approximation coefficients for V4+ shipped with the package."""
    from importlib import resources

    with resources.as_file(resources.files("dimercorr").joinpath("data/v4plus_j0.txt")) as path:
        return load_form_factor(path)


def powder_intensity(q, model, params):
    """Powder-averaged transition intensity |F(Q)|^2 [1 - sin(QR)/(QR)].

    Overall scale is arbitrary; only the Q dependence is meaningful.
    """
    return form_factor(q, params) ** 2 * interference_factor(q, model.R)


def transition_weights(model, temperature):
    """Boltzmann populations (p_singlet, p_triplet per level) of the dimer.

    Z = e^(3J/4kT) + 3 e^(-J/4kT), so p_singlet + 3 p_triplet = 1; evaluated
    in an overflow-safe branch for either sign of J.
    """
    if temperature <= 0.0:
        raise ValueError(f"temperature must be positive, got {temperature}")
    x = model.J / (KB_MEV_PER_K * temperature)
    if x >= 0.0:
        ratio = math.exp(-x)  # triplet weight relative to singlet
        p_singlet = 1.0 / (1.0 + 3.0 * ratio)
        return p_singlet, ratio * p_singlet
    ratio = math.exp(x)  # singlet weight relative to triplet
    p_triplet = 1.0 / (ratio + 3.0)
    return ratio * p_triplet, p_triplet


def cross_section(model, q_vec, omega, temperature, ff_params, lineshape, dw_2w=0.0):
    """Thermal magnetic neutron cross section of the dimer, arbitrary scale.

    Sums over all ordered eigenstate pairs i -> f: Boltzmann weight of the
    initial state, site-summed spin matrix elements with the intra-dimer
    phase (ions at 0 and R x_hat), the transverse polarization projector
    delta_ab - Qhat_a Qhat_b, the squared form factor, Debye-Waller
    attenuation exp(-dw_2w), and a unit-area Gaussian line shape at the
    transition energy.  The constant prefactor (including (g gamma r0/2)^2
    and k_f/k_i) is folded into the arbitrary scale.

    q_vec may be a single 3-vector or an (N, 3) stack of them; omega may be
    a scalar or, with a single q_vec, a 1-D array.
    """
    if temperature <= 0.0:
        raise ValueError(f"temperature must be positive, got {temperature}")
    q = np.asarray(q_vec, dtype=float)
    single_q = q.ndim == 1
    q2d = np.atleast_2d(q)
    if q2d.shape[-1] != 3:
        raise ValueError(f"q_vec must have 3 components, got shape {q.shape}")
    qnorm = np.linalg.norm(q2d, axis=-1)
    if np.any(qnorm == 0.0):
        raise ValueError("momentum transfer must be nonzero")
    omega = np.asarray(omega, dtype=float)
    if omega.ndim > 0 and not single_q:
        raise ValueError("pass either many q_vec directions or many omega values, not both")

    system = eigh4(build_hamiltonian(model))
    beta = 1.0 / (KB_MEV_PER_K * temperature)
    boltzmann = np.exp(-(system.values - system.values[0]) * beta)
    populations = boltzmann / boltzmann.sum()

    positions = np.array([[0.0, 0.0, 0.0], [model.R, 0.0, 0.0]])
    phases = np.exp(1j * q2d @ positions.T)  # (N, 2)
    qhat = q2d / qnorm[:, None]
    scale = form_factor(qnorm, ff_params) ** 2 * math.exp(-dw_2w)  # (N,)

    # amplitudes[l, a, i, f] = <i| S_l^a |f> in the eigenbasis
    vdag = system.vectors.conj().T
    amplitudes = np.empty((2, 3, 4, 4), dtype=complex)
    for l, site_ops in enumerate((SPIN_SITE1, SPIN_SITE2)):
        for a in range(3):
            amplitudes[l, a] = vdag @ site_ops[a] @ system.vectors

    width = lineshape.fwhm / FWHM_OVER_SIGMA
    norm = 1.0 / (width * math.sqrt(2.0 * math.pi))
    total = np.zeros(omega.shape if omega.ndim > 0 else qnorm.shape)
    for i in range(4):
        if populations[i] == 0.0:
            continue
        for f in range(4):
            summed = phases @ amplitudes[:, :, i, f]  # (N, 3)
            transverse = np.sum(np.abs(summed) ** 2, axis=-1) - np.abs(
                np.einsum("na,na->n", qhat, summed)
            ) ** 2
            strength = populations[i] * scale * transverse  # (N,)
            gap = system.values[f] - system.values[i]
            line = norm * np.exp(-0.5 * ((omega - gap) / width) ** 2)
            if omega.ndim > 0:
                total += strength[0] * line
            else:
                total += strength * float(line)
    if omega.ndim > 0:
        return total
    return float(total[0]) if single_q else total


def synth_spectrum(config):
    """Seeded synthetic spectrum: Gaussian singlet-triplet peak at E = J on a
    linear background, with optional anti-Stokes mirror peak and
    multiplicative Gaussian noise.

    The noise standard deviation per point is noise_fraction times the
    noiseless intensity; the reported sigma column is that value floored at
    1e-9 counts.  Identical configs produce bit-identical spectra.
    """
    emin, emax, n_points = config.grid
    energy = np.linspace(emin, emax, int(n_points))
    p_singlet, p_triplet = transition_weights(config.model, config.T)
    width = config.lineshape.fwhm / FWHM_OVER_SIGMA
    peak = FitModelParams(
        amplitude=config.amplitude * p_singlet,
        center=config.model.J,
        sigma_width=width,
        slope=config.background_slope,
        intercept=config.background_intercept,
    )
    base = evaluate_model(peak, energy)
    if config.lineshape.include_antistokes:
        mirror = (energy + config.model.J) / width
        base = base + config.amplitude * p_triplet * np.exp(-0.5 * mirror * mirror)
    noise_std = config.noise_fraction * np.abs(base)
    rng = np.random.default_rng(config.rng_seed)
    intensity = base + rng.standard_normal(energy.size) * noise_std
    return Spectrum(energy, intensity, np.maximum(noise_std, SIGMA_FLOOR))


def bleaney_bowers_chi(model, temperature):
    """Molar susceptibility of isolated dimers, emu/mol of dimers.

    chi(T) = 2 N_A g^2 mu_B^2 / [kB T (3 + e^(J/kT))]; reduces to the
    two-spin Curie law N_A g^2 mu_B^2 / (2 kB T) at high temperature and is
    gapped to zero as T -> 0 for antiferromagnetic J.
    """
    if temperature <= 0.0:
        raise ValueError(f"temperature must be positive, got {temperature}")
    x = model.J / (KB_MEV_PER_K * temperature)
    curie = 2.0 * AVOGADRO * model.g**2 * MU_B_ERG_PER_G**2 / (KB_ERG_PER_K * temperature)
    if x > 0.0:
        damp = math.exp(-x)
        return curie * damp / (3.0 * damp + 1.0)
    return curie / (3.0 + math.exp(x))


def bleaney_bowers_peak_temperature(model, t_min=1.0, t_max=500.0, xtol=1e-4):
    """Temperature of the susceptibility maximum, by golden-section search."""
    peak, _ = golden_section_max(
        lambda T: bleaney_bowers_chi(model, T), t_min, t_max, xtol=xtol
    )
    return peak
