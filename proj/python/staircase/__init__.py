"""Exact correlation and spectral diagnostics for staircase rank-one constructions."""

import json
from fractions import Fraction

from . import _core
from ._core import CapExceededError, DomainError, PrecisionError, PreconditionError

__version__ = _core.__version__

__all__ = [
    "CapExceededError",
    "DomainError",
    "Oracle",
    "PrecisionError",
    "PreconditionError",
    "build",
    "config_hash",
    "identity",
    "identity_residual",
    "mixing",
    "normalize_config",
    "rho",
    "rho_csv",
    "verify",
]


def _cfg(config=None, **overrides):
    merged = dict(config or {})
    merged.update(overrides)
    return json.dumps(merged)


def normalize_config(config=None, **overrides):
    """Config dict with every default filled in."""
    return json.loads(_core.normalize_config(_cfg(config, **overrides)))


def config_hash(config=None, **overrides):
    return _core.config_hash(_cfg(config, **overrides))


def build(config=None, **overrides):
    return json.loads(_core.build(_cfg(config, **overrides)))


def verify(config=None, **overrides):
    """Returns (report, exit_code); exit_code is 1 iff some verdict is FALSE."""
    text, code = _core.verify(_cfg(config, **overrides))
    return json.loads(text), code


def rho(config=None, **overrides):
    return json.loads(_core.rho(_cfg(config, **overrides)))


def rho_csv(config=None, **overrides):
    return _core.rho_csv(_cfg(config, **overrides))


def identity(r_min=3, r_max=100, config=None):
    return json.loads(_core.identity(_cfg(config), r_min, r_max))


def identity_residual(r):
    return json.loads(_core.identity_residual(r))


def mixing(points=64, config=None, **overrides):
    return json.loads(_core.mixing(_cfg(config, **overrides), points))


class Oracle:
    """Exact gamma(a) = <T^a f, f> enclosures for the construction described by a config."""

    def __init__(self, config=None, **overrides):
        self._impl = _core._Oracle(_cfg(config, **overrides))

    @property
    def k_cap(self):
        return self._impl.k_cap

    @property
    def k_ceiling(self):
        return self._impl.k_ceiling

    def height(self, j):
        return int(self._impl.height(j))

    def count(self, K, a):
        return int(self._impl.count(K, str(int(a))))

    def correlation(self, a, K=None, normalized=False):
        K = self.k_cap if K is None else K
        fn = self._impl.normalized_correlation if normalized else self._impl.correlation
        lo, hi = fn(str(int(a)), K)
        return Fraction(lo), Fraction(hi)
