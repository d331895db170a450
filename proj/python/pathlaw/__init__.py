"""Anticipative Brownian path transforms and identity-in-law verification."""

import json as _json

from ._core import (  # noqa: F401
    apply_c,
    apply_c_lambda,
    apply_s_mu,
    apply_tz,
    bessel_k,
    bessel_k_log,
    bessel_k_ratio,
    conditional_density,
    euler_maruyama,
    exp_functional,
    k_mu,
    preset_labels,
    sample_bm,
    sample_bm_drift,
    solve_h_lambda,
    time_reverse,
)
from ._core import run_identity as _run_identity_json

__all__ = [
    "apply_c",
    "apply_c_lambda",
    "apply_s_mu",
    "apply_tz",
    "bessel_k",
    "bessel_k_log",
    "bessel_k_ratio",
    "conditional_density",
    "euler_maruyama",
    "exp_functional",
    "k_mu",
    "preset_labels",
    "run_identity",
    "sample_bm",
    "sample_bm_drift",
    "solve_h_lambda",
    "time_reverse",
]


def run_identity(label, n_paths=2000, n_steps=64, t_end=1.0, seed=42, shards=1, threads=0):
    """Run one bundled identity spec; returns the report as a dict."""
    return _json.loads(
        _run_identity_json(label, n_paths, n_steps, t_end, seed, shards, threads)
    )
