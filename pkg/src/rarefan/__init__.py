"""Second-class particles in rarefaction fans.

Simulation of the exclusion process, lattice last-passage percolation and
the Hammersley particle system, with the closed-form limit laws for the
asymptotic speed of a second-class particle and the direction of the
competition interface, cross-checked against Monte Carlo estimators and
brute-force oracles.
"""

from . import (
    cli,
    errors,
    hammersley_lpp,
    lattice_lpp,
    limit_laws,
    oracles,
    particle_sim,
    profiles,
    walks,
)
from .profiles import (
    CountingProcess,
    TasepProfile,
    asymptotic_densities,
    bar_transform,
    build_builtin,
    profile_from_config,
    profile_to_config,
    sigma_from_eta,
)

__all__ = [
    "cli",
    "errors",
    "hammersley_lpp",
    "lattice_lpp",
    "limit_laws",
    "oracles",
    "particle_sim",
    "profiles",
    "walks",
    "CountingProcess",
    "TasepProfile",
    "asymptotic_densities",
    "bar_transform",
    "build_builtin",
    "profile_from_config",
    "profile_to_config",
    "sigma_from_eta",
]

__version__ = "0.1.0"
