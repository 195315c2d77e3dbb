from .hac import default_bandwidth, newey_west_cov
from .hansen import HansenLcResult, hansen_lc, score_matrix
from .johansen import JohansenResult, VecmSpec, johansen_rrr, maxeig_stat, trace_stat
from .vecm import VecmFit, estimate_vecm

__all__ = [
    "HansenLcResult",
    "JohansenResult",
    "VecmFit",
    "VecmSpec",
    "default_bandwidth",
    "estimate_vecm",
    "hansen_lc",
    "johansen_rrr",
    "maxeig_stat",
    "newey_west_cov",
    "score_matrix",
    "trace_stat",
]
