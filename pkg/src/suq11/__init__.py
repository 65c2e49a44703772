"""Clebsch-Gordan coefficients of the quantum algebra su_q(1,1)."""
