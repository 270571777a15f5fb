"""Differentiable graph scan statistics in regularized minimization form.

Every statistic is wrapped as f(x) = -stat(x) + 0.5 * x'x so the solvers
minimize a function bounded below. The toy objective -w'x + 0.5 ||x||^2 keeps
the same shape with a linear statistic.

Numerical conventions: every ratio denominator gets +1e-12, log arguments are
clamped at 1e-12, and the all-but-zero point ||x||_1 < epsilon uses the limit
value 0 with gradient -counts (signal-aligned first descent direction). The
gradient is the exact derivative of the guarded objective wherever no clamp is
active, so finite differences agree away from the clamps.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, InputError, NumericError
from .graphs import SupportSet

EMS = "ems"
KULLDORFF = "kulldorff"
EBP = "ebp"
TOY_QUADRATIC = "toy_quadratic"

STAT_KINDS = (EMS, KULLDORFF, EBP)

_DEN = 1e-12  # denominator guard
_LOG_FLOOR = 1e-12  # clamp for log arguments
SUPPORT_EPS = 1e-8  # positive-entry threshold for support extraction


@dataclass(frozen=True)
class ScanObjective:
    kind: str
    counts: np.ndarray | None = None
    baselines: np.ndarray | None = None
    weights: np.ndarray | None = None
    epsilon: float = 1e-9

    def __post_init__(self):
        def freeze(name, arr):
            if arr is None:
                return None
            arr = np.ascontiguousarray(np.asarray(arr, dtype=np.float64))
            if arr.ndim != 1:
                raise InputError(f"{name} must be a 1-d vector")
            if not np.all(np.isfinite(arr)):
                raise InputError(f"{name} must be finite")
            arr.setflags(write=False)
            return arr

        object.__setattr__(self, "counts", freeze("counts", self.counts))
        object.__setattr__(self, "baselines", freeze("baselines", self.baselines))
        object.__setattr__(self, "weights", freeze("weights", self.weights))
        if self.kind == TOY_QUADRATIC:
            if self.weights is None:
                raise InputError("toy quadratic objective needs weights")
        elif self.kind == EMS:
            if self.counts is None:
                raise InputError("ems objective needs counts")
            if np.abs(self.counts).max(initial=0.0) >= 1.0:
                raise InputError(
                    "ems counts must satisfy max|c_i| < 1; run normalize_counts_ems first")
        elif self.kind in (KULLDORFF, EBP):
            if self.counts is None or self.baselines is None:
                raise InputError(f"{self.kind} objective needs counts and baselines")
            if np.any(self.counts < 0) or np.any(self.baselines < 0):
                raise InputError(f"{self.kind} counts and baselines must be nonnegative")
            if self.counts.shape != self.baselines.shape:
                raise DimensionError("counts and baselines must have equal length")
        else:
            raise InputError(f"unknown objective kind {self.kind!r}")

    @property
    def n(self) -> int:
        for arr in (self.counts, self.weights):
            if arr is not None:
                return arr.shape[0]
        raise InputError("objective has no vectors")


def ems_objective(counts) -> ScanObjective:
    return ScanObjective(EMS, counts=counts)


def kulldorff_objective(counts, baselines) -> ScanObjective:
    return ScanObjective(KULLDORFF, counts=counts, baselines=baselines)


def ebp_objective(counts, baselines) -> ScanObjective:
    return ScanObjective(EBP, counts=counts, baselines=baselines)


def toy_quadratic_objective(weights) -> ScanObjective:
    return ScanObjective(TOY_QUADRATIC, weights=weights)


def _check_x(obj: ScanObjective, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (obj.n,):
        raise DimensionError(f"x has length {x.shape}, objective expects {obj.n}")
    if not np.all(np.isfinite(x)):
        raise NumericError("x contains non-finite entries")
    return x


def _log_ratio(num: float, den: float):
    """log(num/(den+guard)) with the clamp; also reports whether it was active."""
    r = num / (den + _DEN)
    if r < _LOG_FLOOR:
        return np.log(_LOG_FLOOR), True
    return np.log(r), False


def _stat_and_grad(obj: ScanObjective, x: np.ndarray):
    """Raw statistic value and gradient (before negation and the quadratic)."""
    if obj.kind == TOY_QUADRATIC:
        return float(obj.weights @ x), obj.weights.copy()
    c = obj.counts
    if obj.kind == EMS:
        u = float(c @ x)
        v = float(x.sum()) + _DEN
        val = u * u / v
        grad = 2.0 * u / v * c - (u * u) / (v * v)
        return val, grad
    b = obj.baselines
    u = float(c @ x)
    w = float(b @ x)
    if obj.kind == EBP:
        l1, clamped = _log_ratio(u, w)
        val = u * l1 + w - u
        grad = c * l1 + b - c
        if not clamped:
            grad = grad + (c - u / (w + _DEN) * b)
        return val, grad
    # Kulldorff
    C = float(c.sum())
    B = float(b.sum())
    l1, cl1 = _log_ratio(u, w)
    lg, clg = _log_ratio(C, B)
    l2, cl2 = _log_ratio(C - u, B - w)
    val = u * l1 - C * lg + (C - u) * l2
    grad = c * l1 - c * l2
    if not cl1:
        grad = grad + (c - u / (w + _DEN) * b)
    if not cl2:
        grad = grad + (-c + (C - u) / (B - w + _DEN) * b)
    return val, grad


def objective_value(obj: ScanObjective, x) -> float:
    """f(x) = -stat(x) + 0.5 x'x, with value 0 at the all-zero point."""
    x = _check_x(obj, x)
    if obj.kind != TOY_QUADRATIC and float(np.abs(x).sum()) < obj.epsilon:
        return 0.0
    val, _ = _stat_and_grad(obj, x)
    out = -val + 0.5 * float(x @ x)
    if not np.isfinite(out):
        raise NumericError(f"{obj.kind} objective non-finite at ||x||={np.linalg.norm(x):.3g}")
    return out


def objective_gradient(obj: ScanObjective, x) -> np.ndarray:
    """Analytic gradient of f; at the near-zero point, -counts by convention."""
    x = _check_x(obj, x)
    if obj.kind == TOY_QUADRATIC:
        return x - obj.weights
    if float(np.abs(x).sum()) < obj.epsilon:
        return -obj.counts.copy()
    _, grad = _stat_and_grad(obj, x)
    out = -grad + x
    if not np.all(np.isfinite(out)):
        raise NumericError(f"{obj.kind} gradient non-finite at ||x||={np.linalg.norm(x):.3g}")
    return out


def scan_score(obj: ScanObjective, support: SupportSet) -> float:
    """Raw scan-statistic score of a node subset (indicator evaluation).

    The elevated-mean statistic is reported in its likelihood-ratio form
    sum(c_S)/sqrt(|S|); the count statistics evaluate their formulas on the
    indicator vector. Empty support scores 0.
    """
    if support.size == 0:
        return 0.0
    if obj.kind == TOY_QUADRATIC:
        return float(obj.weights[list(support.members)].sum())
    if obj.kind == EMS:
        return float(obj.counts[list(support.members)].sum()) / np.sqrt(support.size)
    x = support.to_mask(obj.n).astype(np.float64)
    val, _ = _stat_and_grad(obj, x)
    return float(val)


def normalize_counts_ems(raw) -> np.ndarray:
    """Standardize and rescale counts so max|c_i| = 0.99.

    Z-score first (constant vectors map to all zeros), then scale the result
    so its largest magnitude is 0.99, keeping the elevated-mean statistic's
    normalized-counts assumption valid.
    """
    raw = np.asarray(raw, dtype=np.float64)
    if not np.all(np.isfinite(raw)):
        raise InputError("counts must be finite")
    if raw.size == 0:
        return raw.copy()
    std = float(raw.std())
    if std == 0.0:
        return np.zeros_like(raw)
    z = (raw - raw.mean()) / std
    peak = float(np.abs(z).max())
    if peak == 0.0:
        return np.zeros_like(raw)
    return z * (0.99 / peak)


def wrsc_delta_ems(xi: float, c_hat: float) -> float:
    """Contraction constant sqrt(1 - 2 xi (1 - c_hat^2) + xi^2) for the
    elevated-mean objective with normalized counts.

    Valid for 0 <= c_hat < 1 and 0 < xi < 2 (1 - c_hat^2); the result is
    always below 1 there.
    """
    if not (0.0 <= c_hat < 1.0):
        raise InputError(f"c_hat must be in [0, 1), got {c_hat}")
    bound = 2.0 * (1.0 - c_hat * c_hat)
    if not (0.0 < xi < bound):
        raise InputError(f"xi must be in (0, {bound:.6g}), got {xi}")
    inner = 1.0 - 2.0 * xi * (1.0 - c_hat * c_hat) + xi * xi
    return float(np.sqrt(max(inner, 0.0)))


def ems_hessian_quadratic_form(obj: ScanObjective, x, d) -> float:
    """d' H d / d'd for the elevated-mean objective's Hessian at x."""
    if obj.kind != EMS:
        raise InputError("hessian form implemented for the ems objective only")
    x = _check_x(obj, x)
    d = np.asarray(d, dtype=np.float64)
    c = obj.counts
    u = float(c @ x)
    v = float(x.sum()) + _DEN
    w = c - (u / v)
    dot = float(w @ d)
    dd = float(d @ d)
    return (dd - (2.0 / v) * dot * dot) / dd
