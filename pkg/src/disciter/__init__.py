"""disciter: numerics for holomorphic iteration on the unit disc.

Subpackages by role:

- hypgeo:   hyperbolic metric/distance kernels, Stolz angles, horodiscs,
            Julia and distance-lemma checks
- domains:  concrete domains with exact Riemann maps and boundary distances
- maps:     the model-map zoo with linearizing charts and orbit engines
- rates:    divergence/Euclidean rate series, fits, verdicts
- slope:    slope series and tangentiality classification
- semiflow: continuous-time trajectories through the charts
- qgeo:     discrete/continuous quasi-geodesic certification
- harmonic: Poisson quadrature and walk-on-spheres harmonic measure
- opnorm:   composition-operator norm bounds
- cli:      command-line front end and the acceptance suite driver
"""

from . import acceptance, cli, domains, harmonic, hypgeo, maps, opnorm, qgeo, rates, semiflow, slope
from .errors import ConfigError, InvalidPointError, UnsupportedModelError

__all__ = [
    "acceptance", "cli", "domains", "harmonic", "hypgeo", "maps", "opnorm",
    "qgeo", "rates", "semiflow", "slope",
    "ConfigError", "InvalidPointError", "UnsupportedModelError",
]

__version__ = "0.1.0"
