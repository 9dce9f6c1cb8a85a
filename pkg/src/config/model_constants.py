"""
Constants of the simulated model families.
Growth-model indices are 1-based to match θ1..θ8 in the model equations.
"""

from enums.model_family import GrowthVariant

GROWTH_PARAMETER_COUNT = 8

# Index of the process and measurement noise variances in the growth model
PROCESS_VARIANCE_INDEX = 7
MEASUREMENT_VARIANCE_INDEX = 8
GROWTH_VARIANCE_INDICES = (PROCESS_VARIANCE_INDEX, MEASUREMENT_VARIANCE_INDEX)

COSINE_INPUT_FREQUENCY = 1.2

# Lower edge of every variance prior
VARIANCE_PRIOR_EPSILON = 1e-3

GROWTH_FIXED_VALUES = {
    GrowthVariant.M1.value: {1: 0.5, 2: 25.0, 3: 1.0, 4: 1.0, 5: 8.0, 6: 1.0},
    GrowthVariant.M2.value: {1: 0.0, 3: 0.04, 4: 1.0, 5: 1.0},
}

GROWTH_FREE_INDICES = {
    GrowthVariant.M1.value: (7, 8),
    GrowthVariant.M2.value: (2, 6, 7, 8),
}

# True parameter vectors used for test sets, ordered like the free indices
GROWTH_TRUE_THETA = {
    GrowthVariant.M1.value: (1.0, 0.1),
    GrowthVariant.M2.value: (0.7, 1.0, 0.1, 0.1),
}

# Uniform prior boxes, ordered like the free indices
GROWTH_PRIOR_BOXES = {
    GrowthVariant.M1.value: ((0.1, 1.5), (VARIANCE_PRIOR_EPSILON, 1.0)),
    GrowthVariant.M2.value: ((0.0, 1.0), (0.1, 2.0), (VARIANCE_PRIOR_EPSILON, 1.0), (VARIANCE_PRIOR_EPSILON, 1.0)),
}

# Coupled electric drives benchmark
DRIVES_SAMPLING_PERIOD = 0.02
DRIVES_INPUT_HOLD = 5
DRIVES_PRBS_AMPLITUDE = 0.5
DRIVES_PRIOR_SPREAD = 0.2
DRIVES_NOISE_PRIOR_UPPER = 0.01

# Linear toy model
FIR_TRUE_THETA = (0.7, 0.7)
FIR_NOISE_VARIANCE = 0.09
FIR_PRIOR_MEAN = (1.0, 1.0)
FIR_PRIOR_VARIANCE = 1.0 / 3.0
