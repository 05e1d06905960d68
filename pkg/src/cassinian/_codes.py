"""Integer codes shared by the compiled and pure kernel backends."""

METRIC_CASSINIAN = 0
METRIC_DISTANCE_RATIO = 1
METRIC_HYPERBOLIC = 2
METRIC_QUASIHYPERBOLIC = 3
METRIC_EUCLIDEAN = 4

DOMAIN_PUNCTURED_PLANE = 0
DOMAIN_UNIT_DISK = 1
DOMAIN_PUNCTURED_DISK = 2
DOMAIN_HALF_PLANE = 3

RAY_CROSSED = 1
RAY_NO_CROSSING = 0
RAY_TRUNCATED = 2
