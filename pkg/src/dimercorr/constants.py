"""Physical constants in the unit system used throughout (meV, K, angstrom, cgs)."""

# Boltzmann constant (CODATA 2018), meV/K.
KB_MEV_PER_K = 8.617333262e-2

# cgs constants for molar susceptibilities (emu/mol = cm^3/mol).
AVOGADRO = 6.02214076e23            # 1/mol
MU_B_ERG_PER_G = 9.2740100783e-21   # Bohr magneton, erg/G
KB_ERG_PER_K = 1.380649e-16         # erg/K
