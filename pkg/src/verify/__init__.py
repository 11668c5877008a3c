"""Verification probes for pseudoconvexity, pseudoconcavity and exhaustions."""

from src.verify.discs import DiscFamily, disc_family_sweep
from src.verify.domains import DomainSpec
from src.verify.principles import exhaustion_fill_check, local_max_check, peak_obstruction
from src.verify.probes import hartogs_probe, hat_fill_probe

__all__ = [
    "DiscFamily",
    "DomainSpec",
    "disc_family_sweep",
    "exhaustion_fill_check",
    "hartogs_probe",
    "hat_fill_probe",
    "local_max_check",
    "peak_obstruction",
]
