"""Circle skew products over Cantor minimal systems."""

from .cocycle import CircleCocycle, load_cocycle, parse_cocycle, serialize_cocycle, skew_orbit
from .constructions import (EtaFunction, OmegaResult, eta_construction, omega_construction,
                            orientation_class, parity_hypothesis, straighten)
from .isom import IDENTITY, LAMBDA, IsomT, circle_norm, minimal_lift
from .combina import Combina, combina
from .decide import check_wacxt_certificates, decide_wacxt, decide_wacxt_symmetric
