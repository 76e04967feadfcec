"""Global knobs."""

# How many levels below its own level a set may be refined while resolving
# the Vershik map near the roof before giving up with a DepthError.
REFINEMENT_BUDGET = 8

# Cap on states visited by modular cycle detection (per query).
CYCLE_STATE_LIMIT = 200_000
