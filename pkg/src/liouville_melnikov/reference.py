"""Reference values for the mu = 1/8, kappa = 1 run."""

REFERENCE_WINDOWS = (1.0, 2.0, 3.0, 5.0, 10.0, 20.0)

# A_L(1), 8 significant figures
REFERENCE_A = (1.5990894, 1.0073283, 0.59562584, 0.48440447, 0.47929061, 0.47929047)

# bound for B_L(1) as printed; the exponents of the first three rows disagree with
# the bound formula by powers of ten, the mantissas agree
REFERENCE_BOUND_PRINTED = (7.951683e4, 1.337684e4, 1.868009e1, 3.438049, 1.561013e-4, 3.217488e-13)
REFERENCE_BOUND_MANTISSA = (7.951683, 1.337684, 1.868009, 3.438049, 1.561013, 3.217488)

REFERENCE_MU = 0.125
REFERENCE_KAPPA = 1.0
