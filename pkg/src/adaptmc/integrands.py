"""Built-in test integrands with reference values, and a name registry.

All integrands are vectorized: they take an array of shape ``(n, d)`` and
return shape ``(n,)``; a single point of shape ``(d,)`` gives a float.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import erf


@dataclass(frozen=True)
class NamedIntegrand:
    name: str
    dim: int
    fn: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    params: dict = field(default_factory=dict)
    exact_value: float | None = None

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if x.ndim == 1:
            return float(self.fn(x[None, :])[0])
        return self.fn(x)


def disc_indicator(x) -> np.ndarray:
    """1 inside the closed unit disc, 0 outside."""
    x = np.asarray(x, dtype=float)
    r2 = x[..., 0] ** 2 + x[..., 1] ** 2
    return (r2 <= 1.0).astype(float)


def gaussian(x, alpha: float) -> np.ndarray:
    """``exp(-alpha * |x|^2)``; ``alpha`` must be positive (peak at the origin)."""
    if not alpha > 0:
        raise ValueError("use positive alpha; exp(-alpha |x|^2) peaks at the origin")
    x = np.asarray(x, dtype=float)
    return np.exp(-alpha * np.sum(x * x, axis=-1))


def gaussian_integral_1d(alpha: float) -> float:
    # int_0^1 exp(-alpha t^2) dt
    r = math.sqrt(alpha)
    return math.sqrt(math.pi) / (2 * r) * float(erf(r))


def constant(c: float = 1.0, dim: int = 2) -> NamedIntegrand:
    c = float(c)
    return NamedIntegrand("const", dim, lambda x: np.full(len(x), c), {"c": c}, c)


def disc() -> NamedIntegrand:
    return NamedIntegrand("disc", 2, disc_indicator, {}, math.pi / 4)


def gauss(alpha: float = 50.0, dim: int = 2) -> NamedIntegrand:
    alpha = float(alpha)
    if not alpha > 0:
        raise ValueError("use positive alpha; exp(-alpha |x|^2) peaks at the origin")
    name = {2: "gauss2d", 3: "gauss3d"}.get(dim, "gaussNd")
    return NamedIntegrand(name, dim, lambda x: gaussian(x, alpha),
                          {"alpha": alpha}, gaussian_integral_1d(alpha) ** dim)


REGISTRY = {
    "const": lambda c=1.0, dim=2, **_: constant(c, dim),
    "disc": lambda **_: disc(),
    "gauss2d": lambda alpha=50.0, **_: gauss(alpha, 2),
    "gauss3d": lambda alpha=50.0, **_: gauss(alpha, 3),
    "gaussNd": lambda alpha=50.0, dim=2, **_: gauss(alpha, dim),
}


def registry_lookup(name: str, **params) -> NamedIntegrand:
    """Build a registered integrand; unused params are ignored.

    >>> registry_lookup("const", c=7).exact_value
    7.0
    """
    try:
        make = REGISTRY[name]
    except KeyError:
        raise ValueError(f"unknown integrand {name!r}; available: {', '.join(REGISTRY)}") from None
    params = {k: v for k, v in params.items() if v is not None}
    return make(**params)
