"""Multi-robot hazard characterisation simulator with a dual sound-set
sonification engine.

The package is organised around a tick-based world simulation (hazard
fields, semi-autonomous robots, markers, tagging), two families of
hazard-level sonifications (`cog` and `comp`) with alert machinery and a
scene mixer, a signal-analysis decoder that inverts each mapping from
rendered audio, and a machine-run listening-study harness.
"""

__version__ = "0.1.0"

from sonifleet.hazards import HazardField, HazardSphere, HazardType

__all__ = ["HazardField", "HazardSphere", "HazardType", "__version__"]
