"""Univariate Gaussian mixture head.

Raw network outputs are converted to valid mixture parameters here, the
negative log-likelihood loss (and its gradient back into the raw head) is
computed here, and PDFs, CDFs, quantiles and moments are evaluated
analytically so inference never needs Monte Carlo sampling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import erf

from .errors import InvalidModelOutputError, UsageError
from .nn import softmax, softplus

SCALE_FLOOR = 1e-4

_LOG_2PI = np.log(2.0 * np.pi)
_SQRT2 = np.sqrt(2.0)


@dataclass
class MixtureParams:
    """Weights, means and scales of an m-component Gaussian mixture.

    Weights form a simplex, scales sit above SCALE_FLOOR; both are checked
    at construction so downstream evaluation can assume validity.
    """

    weights: np.ndarray
    means: np.ndarray
    scales: np.ndarray

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.float64)
        self.means = np.asarray(self.means, dtype=np.float64)
        self.scales = np.asarray(self.scales, dtype=np.float64)
        if not (self.weights.shape == self.means.shape == self.scales.shape):
            raise UsageError("weights, means and scales must have equal length")
        if self.weights.ndim != 1 or self.weights.size == 0:
            raise UsageError("mixture parameters must be non-empty vectors")
        for name, arr in (("weights", self.weights), ("means", self.means),
                          ("scales", self.scales)):
            if not np.isfinite(arr).all():
                raise InvalidModelOutputError(f"non-finite mixture {name}")
        if (self.weights < -1e-12).any():
            raise UsageError("mixture weights must be non-negative")
        if abs(self.weights.sum() - 1.0) > 1e-10:
            raise UsageError(
                f"mixture weights sum to {self.weights.sum()!r}, expected 1"
            )
        if (self.scales < SCALE_FLOOR - 1e-12).any():
            raise UsageError(f"mixture scales must be >= {SCALE_FLOOR}")

    @property
    def m(self) -> int:
        return self.weights.size


def mixture_from_raw(raw) -> MixtureParams:
    """Map a raw head vector [weight logits | means | scale pre-activations].

    Weights go through softmax, scales through softplus plus the floor.
    """
    raw = np.asarray(raw, dtype=np.float64)
    if raw.ndim != 1 or raw.size == 0 or raw.size % 3 != 0:
        raise UsageError(f"raw head vector length {raw.size} not divisible by 3")
    if not np.isfinite(raw).all():
        raise InvalidModelOutputError("non-finite raw mixture head output")
    m = raw.size // 3
    return MixtureParams(
        weights=softmax(raw[:m]),
        means=raw[m:2 * m].copy(),
        scales=softplus(raw[2 * m:]) + SCALE_FLOOR,
    )


def mixture_from_raw_batch(raw: np.ndarray):
    """Batched head transform; returns (weights, means, scales) as (B, m) arrays."""
    raw = np.asarray(raw, dtype=np.float64)
    if raw.ndim != 2 or raw.shape[1] % 3 != 0:
        raise UsageError(f"raw batch shape {raw.shape} not (B, 3m)")
    if not np.isfinite(raw).all():
        raise InvalidModelOutputError("non-finite raw mixture head output")
    m = raw.shape[1] // 3
    return (
        softmax(raw[:, :m]),
        raw[:, m:2 * m],
        softplus(raw[:, 2 * m:]) + SCALE_FLOOR,
    )


def mixture_pdf(p: MixtureParams, y):
    """Density sum_i w_i N(y; mu_i, sigma_i^2); y may be a scalar or array."""
    y = np.asarray(y, dtype=np.float64)
    z = (y[..., None] - p.means) / p.scales
    comp = np.exp(-0.5 * z * z) / (p.scales * np.sqrt(2.0 * np.pi))
    out = comp @ p.weights
    return float(out) if out.ndim == 0 else out


def mixture_log_pdf(p: MixtureParams, y):
    """Log density via log-sum-exp over components."""
    y = np.asarray(y, dtype=np.float64)
    z = (y[..., None] - p.means) / p.scales
    log_comp = np.log(p.weights) - np.log(p.scales) - 0.5 * (_LOG_2PI + z * z)
    m = log_comp.max(axis=-1, keepdims=True)
    out = (m + np.log(np.exp(log_comp - m).sum(axis=-1, keepdims=True)))[..., 0]
    return float(out) if out.ndim == 0 else out


def nll_loss(batch_raw, targets, reduction: str = "sum"):
    """Negative log-likelihood of targets under per-row raw mixture heads.

    Returns (loss, gradient w.r.t. batch_raw). The loss is the sum over the
    batch by default; a mean reduction is available for batch-size-robust
    schedules.
    """
    raw = np.asarray(batch_raw, dtype=np.float64)
    if raw.ndim == 1:
        raw = raw[None, :]
    t = np.asarray(targets, dtype=np.float64).reshape(-1)
    if raw.shape[0] == 0:
        raise UsageError("empty batch")
    if raw.shape[0] != t.shape[0]:
        raise UsageError(
            f"batch size mismatch: {raw.shape[0]} raw rows, {t.shape[0]} targets"
        )
    if reduction not in ("sum", "mean"):
        raise UsageError(f"unknown reduction {reduction!r}")
    if raw.shape[1] == 0 or raw.shape[1] % 3 != 0:
        raise UsageError(f"raw head width {raw.shape[1]} not divisible by 3")
    m = raw.shape[1] // 3
    logits = raw[:, :m]
    means = raw[:, m:2 * m]
    pre_scale = raw[:, 2 * m:]

    # forward: weights, scales, per-component log densities
    shifted = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    weights = e / e.sum(axis=1, keepdims=True)
    scales = softplus(pre_scale) + SCALE_FLOOR
    z = (t[:, None] - means) / scales
    log_comp = np.log(weights) - np.log(scales) - 0.5 * (_LOG_2PI + z * z)
    mx = log_comp.max(axis=1, keepdims=True)
    log_p = mx[:, 0] + np.log(np.exp(log_comp - mx).sum(axis=1))
    loss = -log_p.sum()

    # backward: responsibilities drive every head gradient
    resp = np.exp(log_comp - log_p[:, None])
    g_logits = weights - resp
    g_means = -resp * z / scales
    g_pre = resp * (1.0 / scales - z * z / scales)
    g_pre *= 1.0 / (1.0 + np.exp(-pre_scale))  # d softplus
    grad = np.concatenate([g_logits, g_means, g_pre], axis=1)
    if reduction == "mean":
        n = raw.shape[0]
        return loss / n, grad / n
    return loss, grad


def mixture_mean(p: MixtureParams) -> float:
    return float(p.weights @ p.means)


def mixture_variance(p: MixtureParams) -> float:
    mean = p.weights @ p.means
    second = p.weights @ (p.scales ** 2 + p.means ** 2)
    return float(max(second - mean * mean, 0.0))


def _phi(z):
    return 0.5 * (1.0 + erf(z / _SQRT2))


def mixture_cdf(p: MixtureParams, y):
    """CDF sum_i w_i Phi((y - mu_i)/sigma_i); y scalar or array."""
    y = np.asarray(y, dtype=np.float64)
    z = (y[..., None] - p.means) / p.scales
    out = _phi(z) @ p.weights
    return float(out) if out.ndim == 0 else out


def _quantile_bracket(p: MixtureParams):
    span = 12.0 * p.scales.max()
    return p.means.min() - span, p.means.max() + span


def mixture_quantile(p: MixtureParams, v: float) -> float:
    """Inverse CDF by bisection; unconditionally convergent between modes."""
    return float(mixture_quantile_batch(p, np.asarray([v]))[0])


def mixture_quantile_batch(p: MixtureParams, v) -> np.ndarray:
    """Vectorized bisection quantiles for an array of probabilities."""
    v = np.asarray(v, dtype=np.float64)
    if (v <= 0.0).any() or (v >= 1.0).any():
        raise UsageError("quantile probabilities must lie strictly in (0, 1)")
    lo, hi = _quantile_bracket(p)
    # expand until the bracket straddles every requested probability
    while mixture_cdf(p, lo) > v.min():
        lo -= (hi - lo)
    while mixture_cdf(p, hi) < v.max():
        hi += (hi - lo)
    a = np.full(v.shape, lo)
    b = np.full(v.shape, hi)
    while True:
        mid = 0.5 * (a + b)
        width = b - a
        if (width <= 1e-10 * (1.0 + np.abs(mid))).all():
            return mid
        below = mixture_cdf(p, mid) < v
        a = np.where(below, mid, a)
        b = np.where(below, b, mid)


def mixture_sample(p: MixtureParams, rng: np.random.Generator, size=None):
    """Draw by picking a component then sampling its Gaussian.

    Used only as a test oracle; the metric paths stay analytic.
    """
    n = 1 if size is None else int(size)
    idx = rng.choice(p.m, size=n, p=p.weights)
    out = rng.normal(p.means[idx], p.scales[idx])
    return float(out[0]) if size is None else out
