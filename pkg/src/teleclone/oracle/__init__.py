"""Independent verification backends: truncated Fock space and Monte Carlo."""
from .fock import FockState, fock_ladder, fock_moment, fock_overlap, fock_parity, fock_tmsv, fock_vacuum
from .montecarlo import RNG_ALGORITHM, MCResult, mc_integral

__all__ = [
    "FockState",
    "fock_vacuum",
    "fock_tmsv",
    "fock_ladder",
    "fock_moment",
    "fock_overlap",
    "fock_parity",
    "MCResult",
    "mc_integral",
    "RNG_ALGORITHM",
]
