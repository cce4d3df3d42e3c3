"""Inverse Kasteleyn kernels and dimer correlations for the two-periodic Aztec diamond."""
