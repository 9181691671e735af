"""
Clustering Configuration

Numeric tolerances, iteration caps and defaults shared by the linear algebra
kernels, the sparse loading solver and the divisive engine.
"""

# Matrix invariants
SYMMETRY_TOL = 1e-12
PSD_TOL = -1e-8                 # smallest admissible eigenvalue of a sampled correlation matrix
STANDARDIZE_TOL = 1e-10

# Dense initialisation of the sparse loading solver (power iteration)
POWER_TOL = 1e-9
POWER_MAX_ITER = 1000

# Sparse rank-1 alternating solver
SPARSE_TOL = 1e-6
SPARSE_MAX_ITER = 500
ZERO_MATRIX_TOL = 1e-14
RESIDUAL_TOL = 1e-12            # deflation stops below this Frobenius norm
TIE_RTOL = 1e-10                # magnitudes closer than this times max|z| are tied
FIXED_POINT_AFTER = 5           # settled iterations before solving the fixed point directly

# Split distances
COLLINEARITY_TOL = 1e-12

# Divisive engine
DEFAULT_EXHAUSTIVE_THRESHOLD = 6   # clusters up to this size are split by full enumeration
BRUTE_FORCE_MAX_P = 14             # 2^13 bipartitions per split
ULTRAMETRIC_TOL = 1e-12

# Default run settings
DEFAULT_DISTANCE = 'single'
DEFAULT_HEIGHTS = 'split'
DEFAULT_LOADINGS = 'kaiser'
