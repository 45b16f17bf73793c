from .chi2 import chi2_statistic
from .est import choose_ve, est_statistic, est_test
from .normal import normal_cdf, normal_quantile, normal_sf, z_upper
from .outcome import TestOutcome
from .scan import (
    bennett_h,
    bennett_h_inv,
    bennett_threshold,
    centered_adjacency,
    edge_density,
    oracle_scan,
    scan_threshold,
    signed_scan_exhaustive,
    signed_scan_test,
)
from .sgnq import EtaHat, eta_hat, sgnq_psi, sgnq_q_fast, sgnq_q_naive

__all__ = [
    "EtaHat", "TestOutcome", "bennett_h", "bennett_h_inv", "bennett_threshold",
    "centered_adjacency", "chi2_statistic", "choose_ve", "edge_density",
    "est_statistic", "est_test", "eta_hat", "normal_cdf", "normal_quantile",
    "normal_sf", "oracle_scan", "scan_threshold", "sgnq_psi", "sgnq_q_fast",
    "sgnq_q_naive", "signed_scan_exhaustive", "signed_scan_test", "z_upper",
]
