#!/usr/bin/env python3
"""Synthesize a dimer excitation spectrum, fit it, and propagate the fitted
exchange constant into the entanglement critical temperature.

Demonstrates the full extraction chain on seeded synthetic counts: the peak
center estimates J, its covariance gives the J uncertainty, and
Tc = J / (kB ln 3) carries both forward.
"""

import argparse

from dimercorr import (
    DimerModel,
    LineShape,
    SynthConfig,
    bleaney_bowers_peak_temperature,
    fit_gaussian_linear,
    propagate_tc,
    synth_spectrum,
)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--J", type=float, default=7.81, help="true exchange constant, meV")
    parser.add_argument("--T", type=float, default=10.0, help="sample temperature, K")
    parser.add_argument("--noise", type=float, default=0.05, help="noise fraction")
    parser.add_argument("--seed", type=int, default=42, help="RNG seed")
    args = parser.parse_args()

    model = DimerModel(J=args.J)
    config = SynthConfig(
        model=model,
        T=args.T,
        lineshape=LineShape(fwhm=1.0),
        background_slope=0.2,
        background_intercept=3.0,
        amplitude=10.0,
        noise_fraction=args.noise,
        grid=(2.0, 14.0, 200),
        rng_seed=args.seed,
    )
    fit = fit_gaussian_linear(synth_spectrum(config))
    tc, tc_sigma = propagate_tc(fit)

    print(f"true J           : {args.J:.4f} meV")
    print(f"fitted center    : {fit.params.center:.4f} +- {fit.center_uncertainty():.4f} meV")
    print(f"reduced chi^2    : {fit.chi2_reduced:.3f}  (converged: {fit.converged})")
    print(f"Tc from fit      : {tc:.2f} +- {tc_sigma:.2f} K")
    print(f"chi(T) peak      : {bleaney_bowers_peak_temperature(model):.2f} K "
          "(independent susceptibility cross-check)")


if __name__ == "__main__":
    main()
