"""Dissipation-driven transport on a periodic lattice of two-level systems.

Configs are plain dicts with the same layout as the JSON files the ``dqt``
command-line tool reads; missing keys take their defaults.
"""

import json

from . import _dqt
from ._dqt import ConfigError, IntegrationError, trace_distance

__all__ = [
    "ConfigError",
    "IntegrationError",
    "default_config",
    "markov_rates",
    "rates",
    "run",
    "simulate",
    "trace_distance",
    "validate",
]


def _text(config):
    if config is None:
        return "{}"
    if isinstance(config, str):
        return config
    return json.dumps(config)


def default_config():
    return json.loads(_dqt.default_config_json())


def simulate(config=None):
    """Run one simulation in memory.

    Returns a dict with ``times`` (samples,), ``occupation`` (N, samples),
    the normalized and raw trace-distance series of the target node, and
    ``summary`` (t_max, P_max, v_N, ...).
    """
    out = _dqt.simulate(_text(config))
    out["summary"] = json.loads(out.pop("summary_json"))
    return out


def run(config, out_dir):
    """Write the CSV/JSON artifacts for a single run or a sweep."""
    return json.loads(_dqt.run(_text(config), str(out_dir)))


def validate(config=None):
    return json.loads(_dqt.validate(_text(config)))


def rates(config, t):
    """[(Gamma_n, gamma_n)] for the two system levels at time t."""
    return _dqt.rates(_text(config), float(t))


def markov_rates(config=None):
    return _dqt.markov_rates(_text(config))
