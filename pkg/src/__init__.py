"""HC-SVD - Hierarchical clustering of variables via sparse loadings.

Modules:
    models - Data models (matrices, split trees, benchmark records)
    helpers - Dense numerical kernels (matrixkit)
    clustering - Sparse loadings, split distances, the divisive engine, baselines
    simbench - Simulation designs, sampling, ARI and the benchmark driver
    formats - CSV tables and dendrogram serialization
    monitoring - Sentry error tracking and timing decorators
    config - Run and benchmark configuration
"""

__version__ = '1.0.0'
