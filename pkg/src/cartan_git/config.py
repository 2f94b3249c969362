"""Numerical tolerances shared by the library, the CLI and the acceptance tests."""

FD_STEP = 1e-5
STABILIZER_SVD_TOL = 1e-8
SVD_GAP_RATIO = 0.1

# momentum map and bundle
MOMENTUM_DEFECT_TOL = 1e-6
COCYCLE_TOL = 1e-10
EQUIVARIANCE_TOL = 1e-5
RHO_FD_TOL = 1e-6
STABILIZER_KERNEL_TOL = 1e-10

# Futaki character and extremal elements
FUTAKI_SPREAD_REL = 1e-5
CHARACTER_TOL = 1e-6
FUTAKI_INVARIANCE_TOL = 1e-10
XI_FORM_SPREAD = 1e-6
EXTREMAL_RESIDUAL = 1e-8
OBSTRUCTION_LEVEL = 1e-3

# Kempf-Ness function
KN_DERIVATIVE_TOL = 1e-6
KN_CLOSED_FORM_TOL = 1e-8
KN_SECOND_DERIVATIVE_TOL = 1e-6
CONVEXITY_FLOOR = -1e-8
CONVEXITY_MATCH = 1e-4
EXACTNESS_TOL = 1e-5
ABELIAN_EXACTNESS_TOL = 1e-8
SLOPE_TOL = 1e-6
PLATEAU_REL = 1e-9
ARMIJO_C = 1e-4
MOMENTUM_ZERO_TOL = 1e-8
UNIQUENESS_TOL = 1e-6

# CP^1 reduction
CP1_SCALAR_TOL = 1e-6
CP1_FUTAKI_TOL = 1e-4
CP1_PATH_INDEPENDENCE = 1e-6
CP1_CROSS_FORMULA_REL = 1e-3
CP1_CONVEXITY_FLOOR = -1e-6
CP1_LEGENDRE_TOL = 1e-8
CP1_DESCENT_TARGET = 1e-3
CP1_DESCENT_MAX_ITER = 500
CP1_ORDER_RATIO = (3.0, 5.5)

# densities on the circle
MASS_DRIFT_TOL = 1e-8
CONTINUITY_TOL = 1e-4
CONTINUITY_ORDER_RATIO = (3.0, 5.5)
HELMHOLTZ_TOL = 1e-8
RK4_MAX_STEP = 1e-3
