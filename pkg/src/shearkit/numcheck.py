"""Reusable numerical verification utilities: convexity probes, finite
differences, seeded segment sampling, and structured pass/fail reports.

Thresholds (shared by every convexity check in the package): a suite counts
as strictly convex when all second differences exceed ``STRICT_SECOND_DIFF``
and all midpoint margins exceed ``STRICT_MARGIN``; any value below
``VIOLATION`` is a convexity violation; values in between are recorded as
inconclusive rather than failed, since genuinely affine directions exist.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "STRICT_SECOND_DIFF",
    "STRICT_MARGIN",
    "VIOLATION",
    "ProbeEvaluationError",
    "ConvexityReport",
    "midpoint_probe",
    "fd_gradient",
    "fd_hessian",
    "segment_sampler",
]

STRICT_SECOND_DIFF = 1e-8
STRICT_MARGIN = 1e-9
VIOLATION = -1e-9


class ProbeEvaluationError(RuntimeError):
    """An objective failed to evaluate during a probe; carries the witness input."""

    def __init__(self, witness, cause):
        super().__init__(f"probe evaluation failed at {witness!r}: {cause}")
        self.witness = witness
        self.cause = cause


def midpoint_probe(f, p1, p2):
    """Midpoint-convexity margin (f(p1) + f(p2))/2 - f((p1 + p2)/2).

    Nonnegative (up to roundoff) for convex f, strictly positive where f is
    strictly convex along the segment.  Evaluation failures raise
    ``ProbeEvaluationError`` carrying the offending input.
    """
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    mid = 0.5 * (p1 + p2)
    vals = []
    for p in (p1, p2, mid):
        try:
            vals.append(float(f(p)))
        except Exception as exc:  # noqa: BLE001 - witness must be reported
            raise ProbeEvaluationError(tuple(p), exc) from exc
    return 0.5 * (vals[0] + vals[1]) - vals[2]


def fd_gradient(f, p, step=1e-6):
    """Central-difference gradient of f at p."""
    p = np.asarray(p, dtype=float)
    g = np.empty_like(p)
    for i in range(p.size):
        e = np.zeros_like(p)
        e[i] = step
        g[i] = (f(p + e) - f(p - e)) / (2.0 * step)
    return g

def fd_hessian(f, p, step=1e-4):
    """Central-difference Hessian of f at p, symmetrized."""
    p = np.asarray(p, dtype=float)
    n = p.size
    h = np.empty((n, n))
    f0 = f(p)
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = step
        h[i, i] = (f(p + ei) - 2.0 * f0 + f(p - ei)) / (step * step)
        for j in range(i + 1, n):
            ej = np.zeros(n)
            ej[j] = step
            hij = (f(p + ei + ej) - f(p + ei - ej) - f(p - ei + ej) + f(p - ei - ej)) / (
                4.0 * step * step
            )
            h[i, j] = hij
            h[j, i] = hij
    return 0.5 * (h + h.T)


def segment_sampler(bounds, count, seed):
    """``count`` random segments (p1, p2) in the box given by ``bounds``.

    ``bounds`` is a sequence of (lo, hi) pairs, one per coordinate.
    Deterministic for a fixed seed; the two endpoints of each pair are
    guaranteed distinct.  Raises ValueError on an empty domain.
    """
    bounds = [(float(lo), float(hi)) for lo, hi in bounds]
    if not bounds or any(hi <= lo for lo, hi in bounds):
        raise ValueError("segment_sampler needs a nonempty box domain")
    rng = np.random.default_rng(seed)
    lows = np.array([lo for lo, _ in bounds])
    spans = np.array([hi - lo for lo, hi in bounds])
    out = []
    while len(out) < count:
        p1 = lows + spans * rng.random(len(bounds))
        p2 = lows + spans * rng.random(len(bounds))
        if np.array_equal(p1, p2):
            continue
        out.append((p1, p2))
    return out


@dataclass
class ConvexityReport:
    """Outcome of a convexity probe suite.

    ``verdict`` is one of "StrictlyConvex", "Convex", "NotConvex", derived
    from the recorded minima and the module thresholds.  ``failures`` lists
    witness inputs for violations and evaluation errors; ``inconclusive``
    counts samples that were neither strict nor violating.
    """

    samples: int
    min_midpoint_margin: float | None
    min_second_difference: float | None
    verdict: str
    inconclusive: int = 0
    failures: list = field(default_factory=list)

    @staticmethod
    def from_samples(margins=None, second_differences=None, failures=None):
        margins = [] if margins is None else list(margins)
        second_differences = [] if second_differences is None else list(second_differences)
        failures = [] if failures is None else list(failures)
        n = len(margins) + len(second_differences)
        min_margin = min(margins) if margins else None
        min_d2 = min(second_differences) if second_differences else None
        finite = [v for v in margins + second_differences if not math.isnan(v)]
        if failures or any(v < VIOLATION for v in finite):
            verdict = "NotConvex"
        else:
            strict = all(v > STRICT_MARGIN for v in margins) and all(
                v > STRICT_SECOND_DIFF for v in second_differences
            )
            verdict = "StrictlyConvex" if (strict and finite) else "Convex"
        inconclusive = sum(
            1 for v in margins if VIOLATION <= v <= STRICT_MARGIN
        ) + sum(1 for v in second_differences if VIOLATION <= v <= STRICT_SECOND_DIFF)
        return ConvexityReport(
            samples=n,
            min_midpoint_margin=min_margin,
            min_second_difference=min_d2,
            verdict=verdict,
            inconclusive=inconclusive,
            failures=failures,
        )

    def to_json(self):
        return json.dumps(
            {
                "samples": self.samples,
                "min_midpoint_margin": self.min_midpoint_margin,
                "min_second_difference": self.min_second_difference,
                "verdict": self.verdict,
                "inconclusive": self.inconclusive,
                "failures": [repr(w) for w in self.failures],
            },
            sort_keys=True,
        )
