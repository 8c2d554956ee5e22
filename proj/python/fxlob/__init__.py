"""Limit order book simulation, feed reconstruction and clustering statistics."""

from ._fxlob import (
    ConfigError,
    IoError,
    ParseError,
    Reconstruction,
    Session,
    SessionConfig,
    chi2_uniformity,
    encode_feed,
    fit_geometric,
    fit_power_law,
    generate_quiet_session,
    generate_session,
    headline,
    normalize_feed,
    reconstruct,
    statistic,
    statistic_names,
)

__all__ = [
    "ConfigError",
    "IoError",
    "ParseError",
    "Reconstruction",
    "Session",
    "SessionConfig",
    "chi2_uniformity",
    "encode_feed",
    "fit_geometric",
    "fit_power_law",
    "generate_quiet_session",
    "generate_session",
    "headline",
    "normalize_feed",
    "reconstruct",
    "statistic",
    "statistic_names",
]
