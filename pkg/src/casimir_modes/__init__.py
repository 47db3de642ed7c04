"""Casimir energies of dispersive and dissipative planar cavities via mode sums."""
