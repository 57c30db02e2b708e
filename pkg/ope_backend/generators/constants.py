"""
Defaults for instance generators.
"""
GENERATOR_KINDS = ("random", "lift-forward", "lift-backward", "toy", "scaled-toy")
DEFAULT_EPSILON = 0.3        # behavior exploration weight
DEFAULT_BASE_STATES = 4      # relevant states of a lift
DEFAULT_NOISE = 2            # noise values per relevant state
DEFAULT_ACTIONS = 2
