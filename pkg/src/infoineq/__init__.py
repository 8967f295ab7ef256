"""Exact verification toolkit for linear and conditional information inequalities.

Core pieces:

* :mod:`infoineq.distribution` -- exact rational joint distributions, entropy
  profiles, structural independence checks;
* :mod:`infoineq.expressions` -- the expression DSL and canonical linear
  functionals over entropy coordinates;
* :mod:`infoineq.cone` -- the Shannon cone, exact-LP membership with Farkas
  certificates, and the non-Shannon inequality catalog;
* :mod:`infoineq.families` -- counterexample distribution families;
* :mod:`infoineq.conditional` -- the conditional-inequality registry and the
  essential-conditionality refutation engine;
* :mod:`infoineq.constructions` -- common-information witnesses and
  limit-point violation certificates.
"""

from .cone import (
    Certificate,
    ConeDescription,
    SeparatingPoint,
    conditional_implied_by,
    elemental_inequalities,
    is_polymatroid,
    is_shannon_type,
    known_nonshannon_registry,
)
from .conditional import REGISTRY, ConditionalInequality, RefutationWitness, check, refute
from .constructions import aep_margin, aep_point, double_markov_witness, verify_ingleton_via_w
from .distribution import (
    EntropyVector,
    JointDistribution,
    entropy_profile,
    is_cond_independent,
    is_functional,
    marginal,
    parse_distribution,
)
from .expressions import InfoExpression, box_expression, canonicalize, format_expression, parse
from .families import generate, geometric, geometric_closed_profile

__all__ = [
    "Certificate",
    "ConditionalInequality",
    "ConeDescription",
    "EntropyVector",
    "InfoExpression",
    "JointDistribution",
    "REGISTRY",
    "RefutationWitness",
    "SeparatingPoint",
    "aep_margin",
    "aep_point",
    "box_expression",
    "canonicalize",
    "check",
    "conditional_implied_by",
    "double_markov_witness",
    "elemental_inequalities",
    "entropy_profile",
    "format_expression",
    "generate",
    "geometric",
    "geometric_closed_profile",
    "is_cond_independent",
    "is_functional",
    "is_polymatroid",
    "is_shannon_type",
    "known_nonshannon_registry",
    "marginal",
    "parse",
    "parse_distribution",
    "refute",
    "verify_ingleton_via_w",
]

__version__ = "0.1.0"
