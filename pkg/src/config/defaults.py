"""
Default settings for training, sampling and evaluation runs.
None of these are fixed by the estimation method itself; every run records the values it used.
"""

DATASET_FORMAT_VERSION = 1
CHECKPOINT_FORMAT_VERSION = 1

SPLIT_RATIO = 0.75

# RNN training
LEARNING_RATE = 1e-3
EPOCHS = 300
BATCH_SIZE = 128
LR_DECAY_FACTOR = 0.9
PATIENCE = 3
TOLERANCE = 5e-3
CLIP_NORM = 10.0
ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPSILON = 1e-8
LSTM_FORGET_BIAS = 1.0

GRID_LAYERS = (1, 2)
GRID_HIDDEN = (30, 40, 50, 60)
GRID_DENSE = (32, 40)

# Particle filter and Metropolis-Hastings
N_PARTICLES = 500
T_BURN_IN = 2000
T_REQUIRED = 8000
TARGET_ACCEPTANCE = 0.3
PILOT_STEPS = 500
PILOT_ROUNDS = 4
INITIAL_PROPOSAL_STD = 0.1

# Evaluation
K_TEST = 100

# Drives fit
N_STARTS = 16
NELDER_MEAD_MAX_ITER = 20000
