"""Closed-form predictions for random walks on G(n, m, p).

Covers Stirling numbers of the second kind (log space), the expected degree
counts D̄(k, i), the λ constants behind the cover time, Erdős–Rényi
comparisons, and numeric suites for the λ and Stirling-series inequalities.
Everything here is a pure function of its arguments.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .model import DerivedQuantities, ParameterError

__all__ = [
    "stirling2_exact",
    "stirling2_log",
    "stirling2_log_table",
    "LambdaFamily",
    "lambda_value",
    "lambda_family",
    "dbar",
    "dbar_k",
    "dbar_table",
    "cover_prediction",
    "time_scales",
    "er_cover_prediction",
    "er_same_density_prediction",
    "figure1_ratio",
    "figure1_rows",
    "figure1_csv",
    "Fact5Report",
    "fact5_check",
    "Fact6Result",
    "fact6_sums",
    "stirling_inequalities_check",
    "DegreeBands",
    "degree_bands",
    "TheoryReport",
    "theory_report",
    "dbar_csv",
]

STIRLING_KMAX = 2000
_EXACT_CHECK_KMAX = 25


# -- Stirling numbers of the second kind -------------------------------------

@lru_cache(maxsize=None)
def _stirling2_row(k: int) -> tuple[int, ...]:
    if k == 0:
        return (1,)
    prev = _stirling2_row(k - 1)
    row = [0] * (k + 1)
    for i in range(1, k + 1):
        row[i] = i * (prev[i] if i < len(prev) else 0) + prev[i - 1]
    return tuple(row)


def stirling2_exact(k: int, i: int) -> int:
    """Exact integer S(k, i) by the row recurrence."""
    if k < 0 or i < 0:
        raise ParameterError("negative argument")
    if i > k:
        return 0
    return _stirling2_row(k)[i]


class _LogStirlingTable:
    """Rows of ln S(k, i) built incrementally by

    S(k+1, i) = i S(k, i) + S(k, i-1)

    evaluated with ``logaddexp``.  Rows up to k = 25 are checked against
    exact integers as they are produced.
    """

    def __init__(self):
        self._rows = np.full((1, 1), -np.inf)
        self._rows[0, 0] = 0.0

    @property
    def kmax(self) -> int:
        return self._rows.shape[0] - 1

    def ensure(self, kmax: int) -> np.ndarray:
        have = self.kmax
        if kmax <= have:
            return self._rows
        new = np.full((kmax + 1, kmax + 1), -np.inf)
        new[: have + 1, : have + 1] = self._rows
        log_i = np.log(np.arange(1, kmax + 1, dtype=np.float64))
        for k in range(have, kmax):
            prev = new[k]
            row = new[k + 1]
            row[1 : k + 2] = np.logaddexp(log_i[: k + 1] + prev[1 : k + 2], prev[: k + 1])
            if k + 1 <= _EXACT_CHECK_KMAX:
                exact = np.array([math.log(s) for s in _stirling2_row(k + 1)[1:]])
                err = np.max(np.abs(row[1 : k + 2] - exact) / np.maximum(1.0, np.abs(exact)))
                if err > 1e-12:
                    raise AssertionError(f"log-space Stirling row {k + 1} drifted by {err:g}")
        new.flags.writeable = False
        self._rows = new
        return new


_TABLE = _LogStirlingTable()


def stirling2_log_table(kmax: int) -> np.ndarray:
    """Read-only array ``L`` with ``L[k, i] = ln S(k, i)`` (``-inf`` where zero)."""
    return _TABLE.ensure(kmax)


def stirling2_log(k: int, i: int) -> float:
    """Natural log of S(k, i) for 1 <= i <= k <= 2000."""
    if not (1 <= i <= k):
        raise ParameterError(f"need 1 <= i <= k, got k={k}, i={i}")
    if k > STIRLING_KMAX:
        raise ParameterError(f"k={k} exceeds supported range {STIRLING_KMAX}")
    return float(_TABLE.ensure(k)[k, i])


def _stirling_log_columns(icap: int, kmax: int) -> np.ndarray:
    """ln S(k, j) for k <= kmax, j <= icap only; cheap for long thin ranges."""
    out = np.full((kmax + 1, icap + 1), -np.inf)
    out[0, 0] = 0.0
    log_j = np.log(np.arange(1, icap + 1, dtype=np.float64))
    for k in range(kmax):
        prev = out[k]
        out[k + 1, 1:] = np.logaddexp(log_j + prev[1:], prev[:-1])
    return out


# -- λ constants ---------------------------------------------------------------

def _check_c(c: float, what: str = "c") -> None:
    if not c > 1.0:
        raise ParameterError(f"{what} must exceed 1, got {c!r}")


def lambda_value(np_: float, c: float) -> float:
    """λ(np, c) = ln(np / ln(a + 1)) with a = (c-1)/c (e^np - 1)."""
    _check_c(c)
    if not np_ > 0.0:
        raise ParameterError(f"np must be positive, got {np_!r}")
    a = (c - 1.0) / c * math.expm1(np_)
    return math.log(np_ / math.log1p(a))


@dataclass(frozen=True)
class LambdaFamily:
    lam: float
    lambda0: float
    lambda1: float | None
    lambda1_status: str  # "defined", "near-boundary" or "undefined"
    a: float
    A: float
    eps_n: float
    x: float
    y: float
    y1: float | None

    @property
    def lambda1_defined(self) -> bool:
        return self.lambda1 is not None


def lambda_family(n: int, c: float, np_: float) -> LambdaFamily:
    """λ, λ₀, λ₁ and helpers for given n, c, np.

    λ₁ needs ln(A a + 1) < np; at small n that fails and λ₁ is reported as
    undefined.  When it is defined but below λ/10 it is flagged
    ``near-boundary``.
    """
    _check_c(c)
    if n < 8:
        raise ParameterError(f"n must be >= 8, got {n}")
    if not np_ > 0.0:
        raise ParameterError(f"np must be positive, got {np_!r}")
    ln_n = math.log(n)
    lnln_n = math.log(ln_n)
    a = (c - 1.0) / c * math.expm1(np_)
    log_A = 10.0 * lnln_n / ((c - 1.0) * ln_n)
    A = math.exp(log_A) if log_A < 700.0 else math.inf
    eps_n = lnln_n / ln_n
    lam = math.log(np_ / math.log1p(a))
    # ln(A a + 1) >= ln A + ln a, which settles huge A without overflow
    denom1 = math.log1p(A * a) if log_A < 700.0 else log_A + math.log(a)
    if denom1 >= np_:
        lambda1, status, y1 = None, "undefined", None
    else:
        lambda1 = math.log(np_ / denom1)
        status = "defined" if lambda1 >= 0.1 * lam else "near-boundary"
        y1 = np_ * math.exp(-lambda1)
    # m p from the threshold relation m p (1 - e^{-np}) = c ln n
    mp = c * ln_n / -math.expm1(-np_)
    return LambdaFamily(
        lam=lam,
        lambda0=(1.0 + eps_n) * lam,
        lambda1=lambda1,
        lambda1_status=status,
        a=a,
        A=A,
        eps_n=eps_n,
        x=mp * math.exp(-np_),
        y=np_ * math.exp(-lam),
        y1=y1,
    )


# -- expected degree counts ------------------------------------------------

def _log_dbar_terms(q: DerivedQuantities, kmax: int) -> np.ndarray:
    """``T[k, i] = ln D̄(k, i)`` for 0 <= i <= k <= kmax."""
    L = stirling2_log_table(kmax)[: kmax + 1, : kmax + 1]
    k = np.arange(kmax + 1, dtype=np.float64)
    i = np.arange(kmax + 1, dtype=np.float64)
    ln_x = math.log(q.m * q.p) - q.np
    lgam = np.array([math.lgamma(v + 1.0) for v in k])
    with np.errstate(invalid="ignore"):
        T = (
            L
            - lgam[:, None]
            + i[None, :] * ln_x
            + k[:, None] * math.log(q.np)
            + (1.0 - q.c) * math.log(q.n)
        )
    T[np.isnan(T)] = -np.inf
    return T


def dbar(k: int, i: int, q: DerivedQuantities) -> float:
    """D̄(k, i) = S(k, i)/k! (m p e^{-np})^i (np)^k n^{1-c}."""
    if not (1 <= i <= k):
        raise ParameterError(f"need 1 <= i <= k, got k={k}, i={i}")
    log_val = (
        stirling2_log(k, i)
        - math.lgamma(k + 1.0)
        + i * (math.log(q.m * q.p) - q.np)
        + k * math.log(q.np)
        + (1.0 - q.c) * math.log(q.n)
    )
    return math.exp(log_val)


def dbar_k(k: int, q: DerivedQuantities) -> float:
    """D̄(k) = sum over i of D̄(k, i)."""
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    T = _log_dbar_terms(q, k)
    return float(np.exp(T[k, 1 : k + 1]).sum())


def dbar_table(q: DerivedQuantities, kmax: int | None = None) -> np.ndarray:
    """Array ``D`` of length kmax+1 with ``D[k] = D̄(k)`` (``D[0] = 0``)."""
    kmax = q.delta if kmax is None else kmax
    T = _log_dbar_terms(q, kmax)
    out = np.exp(T[:, 1:]).sum(axis=1)
    out[0] = 0.0
    return out


def dbar_matrix(q: DerivedQuantities, kmax: int | None = None) -> np.ndarray:
    """``M[k, i] = D̄(k, i)`` for 1 <= i <= k <= kmax, zero elsewhere."""
    kmax = q.delta if kmax is None else kmax
    M = np.exp(_log_dbar_terms(q, kmax))
    M[:, 0] = 0.0
    return M


# -- cover-time predictions ---------------------------------------------------

def cover_prediction(q: DerivedQuantities) -> float:
    """Principal term λ κ c n ln n of the cover time, with the realised c."""
    lam = lambda_value(q.np, q.c)
    return lam * q.kappa * q.c * q.n * math.log(q.n)


def time_scales(q: DerivedQuantities) -> tuple[float, float | None]:
    """``(t0, t1)`` = (λ₀, λ₁) · m n² p²; t1 is None when λ₁ is undefined."""
    fam = lambda_family(q.n, q.c, q.np)
    scale = q.m * q.n * q.n * q.p * q.p
    t1 = fam.lambda1 * scale if fam.lambda1 is not None else None
    return fam.lambda0 * scale, t1


def er_cover_prediction(n: int, c: float) -> float:
    """ln(c/(c-1)) c n ln n, the G(n, c ln n / n) cover time."""
    _check_c(c)
    return math.log(c / (c - 1.0)) * c * n * math.log(n)


def er_same_density_prediction(q: DerivedQuantities) -> float:
    """ER cover time at the same edge density, multiplier c̄ = κ c."""
    _check_c(q.cbar, "c̄")
    return er_cover_prediction(q.n, q.cbar)


def figure1_ratio(np_: float, c: float, n: int | None = None) -> float:
    """λ(np, c) / ln(c̄/(c̄-1)); n does not enter."""
    lam = lambda_value(np_, c)
    cbar = c * np_ / -math.expm1(-np_)
    return lam / math.log(cbar / (cbar - 1.0))


FIGURE1_C = (1.1, 2.0, 10.0)


def figure1_rows(cs=FIGURE1_C, np_max: float = 30.0, steps: int = 600) -> list[tuple]:
    """Rows (np, c, lambda, log_ratio_denominator, ratio) on np = np_max·j/steps."""
    rows = []
    for c in cs:
        for j in range(1, steps + 1):
            np_ = np_max * j / steps
            lam = lambda_value(np_, c)
            cbar = c * np_ / -math.expm1(-np_)
            den = math.log(cbar / (cbar - 1.0))
            rows.append((np_, c, lam, den, lam / den))
    return rows


def figure1_csv(rows=None) -> str:
    rows = figure1_rows() if rows is None else rows
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["np", "c", "lambda", "log_ratio_denominator", "ratio"])
    for r in rows:
        w.writerow([repr(float(v)) for v in r])
    return buf.getvalue()


# -- numeric suites ------------------------------------------------------------

@dataclass(frozen=True)
class Fact5Report:
    lam: float
    checks: dict
    detail: dict

    @property
    def passed(self) -> bool:
        return all(v for v in self.checks.values() if v is not None)


def fact5_check(np_: float, c: float, n: int) -> Fact5Report:
    fam = lambda_family(n, c, np_)
    lam = fam.lam
    ln_n = math.log(n)
    lnln_n = math.log(ln_n)
    kappa = np_ / -math.expm1(-np_)
    lower = math.log(c * kappa / (c * kappa - 1.0))
    upper = math.log(c / (c - 1.0))
    checks = {
        "positive": lam > 0.0,
        "at_most_2lnln": lam <= 2.0 * lnln_n,
        # only asserted close to the threshold
        "near_threshold_lower": (lam >= lnln_n / 4.0) if (c - 1.0) <= ln_n ** (-1.0 / 3.0) else None,
        "sandwich": lower < lam < upper,
    }
    detail = {
        "lower": lower,
        "upper": upper,
        "two_lnln_n": 2.0 * lnln_n,
        "lnln_n_over_4": lnln_n / 4.0,
        "lambda1_status": fam.lambda1_status,
        "lambda1_rel_gap": abs(fam.lambda1 - lam) / lam if fam.lambda1 is not None else None,
        "scale_ratio": lam / (1.0 + abs(math.log(c - 1.0))),
    }
    return Fact5Report(lam, checks, detail)


@dataclass(frozen=True)
class Fact6Result:
    y: float
    i: int
    value: float
    tail_bound: float
    truncation: int
    identity_sum: float
    identity_target: float
    bounds: dict = field(default_factory=dict)

    @property
    def identity_rel_err(self) -> float:
        return abs(self.identity_sum - self.identity_target) / self.identity_target

    @property
    def bounds_ok(self) -> bool:
        return all(self.bounds.values())


def fact6_sums(y: float, i: int, tol: float = 1e-9) -> Fact6Result:
    """Σ_{k≥i} S(k,i) y^k/(k!·k) with a rigorous tail bound, plus the bounds
    it is compared against and the generating-function identity
    Σ_{k≥i} S(k,i) y^k/k! = (e^y - 1)^i / i!.

    Terms are truncated at K = i + ⌈2 e y i⌉ + 40.  Beyond K the bound
    S(k,i) ≤ i^k/i! makes the tail a Poisson-type remainder with ratio below
    1/(2e).
    """
    if not 0.0 < y <= 5.0:
        raise ParameterError(f"y must lie in (0, 5], got {y!r}")
    if not 1 <= i <= 100:
        raise ParameterError(f"i must lie in [1, 100], got {i!r}")
    K = i + math.ceil(2.0 * math.e * y * i) + 40
    L = _stirling_log_columns(i, K)[:, i]
    ks = np.arange(i, K + 1)
    lgam = np.array([math.lgamma(k + 1.0) for k in ks])
    log_terms = L[i:] + ks * math.log(y) - lgam
    value = float(np.exp(log_terms - np.log(ks)).sum())
    identity_sum = float(np.exp(log_terms).sum())

    iy = i * y
    log_tail = (K + 1) * math.log(iy) - math.lgamma(K + 2.0) - math.lgamma(i + 1.0)
    tail = math.exp(log_tail) / (1.0 - iy / (K + 2.0))

    ey1 = math.expm1(y)
    target = math.exp(i * math.log(ey1) - math.lgamma(i + 1.0))
    fact_i = math.factorial(i)
    bounds = {
        "first": value + tail <= (i + 1) / (i * i * fact_i) * ey1**i / y,
        "first_loose": (i + 1) / (i * i * fact_i) * ey1**i / y <= 4.0 * ey1**i / (math.factorial(i + 1) * y),
    }
    if ey1 < 0.5:
        b2 = 1.5 / (fact_i * i) * ey1 ** (i + 1) / y
        bounds["second"] = value + tail <= b2
        bounds["second_loose"] = b2 <= 3.0 * ey1 ** (i + 1) / (math.factorial(i + 1) * y)
    bounds["tail_within_tol"] = tail <= tol * value
    return Fact6Result(
        y=y,
        i=i,
        value=value,
        tail_bound=tail,
        truncation=K,
        identity_sum=identity_sum,
        identity_target=target,
        bounds=bounds,
    )


def stirling_inequalities_check(k: int, i: int, t: int | None = None, h: int | None = None) -> dict:
    """Exact-integer check of the Stirling inequality chain used for degree counts.

    Returns a dict of named inequalities mapped to booleans.  ``t`` enables
    the comparison with S(k, t), ``h`` the shifted-row comparisons.
    """
    if not (1 <= i <= k <= 60):
        raise ParameterError("need 1 <= i <= k <= 60")
    s_ki = stirling2_exact(k, i)
    out = {}
    # the binomial bound needs i < k: at i = k it reads 1/2 >= 1
    if i < k:
        out["binomial_upper"] = Fraction(math.comb(k, i) * i ** (k - i), 2) >= s_ki
    if t is not None:
        if not 1 <= t < i:
            raise ParameterError("need 1 <= t < i")
        out["lower_by_smaller_block"] = s_ki >= Fraction(stirling2_exact(k, t), k ** (2 * (i - t)))
    if h is not None:
        if not 1 <= h <= k - i + 1:
            raise ParameterError("need 1 <= h <= k - i + 1")
        mid = i ** (h - 1) * stirling2_exact(k - h + 1, i)
        low = i ** (h - 1) * stirling2_exact(k - h, i - 1)
        out["row_shift"] = s_ki >= mid
        out["row_and_block_shift"] = mid >= low
    return out


# -- degree bands ------------------------------------------------------------

@dataclass(frozen=True)
class DegreeBands:
    K1: frozenset
    K2: frozenset
    K3: frozenset
    I: frozenset


def degree_bands(q: DerivedQuantities) -> DegreeBands:
    ln_n = math.log(q.n)
    lnln_n = math.log(ln_n)
    D = dbar_table(q, q.delta)
    K1 = frozenset(k for k in range(1, min(20, q.delta) + 1) if D[k] <= lnln_n)
    K2 = frozenset(k for k in range(21, q.delta + 1) if D[k] <= ln_n**2)
    K3 = frozenset(range(1, q.delta + 1)) - K1 - K2
    kmax = max(q.k0, q.delta)
    Dk_i0 = np.exp(_log_dbar_terms(q, kmax)[:, q.i0])
    I = frozenset(k for k in range(q.i0, q.k0 + 1) if Dk_i0[k] >= q.i0**2)
    return DegreeBands(K1, K2, K3, I)


# -- report --------------------------------------------------------------------

@dataclass(frozen=True)
class TheoryReport:
    params: dict
    lambda_family: LambdaFamily
    cover_prediction: float
    t0: float
    t1: float | None
    er_prediction_same_c: float
    er_prediction_same_density: float
    figure1_ratio: float
    dbar_table: dict
    bands: DegreeBands

    def to_dict(self) -> dict:
        fam = self.lambda_family
        return {
            "schema": "report-v1",
            "kind": "theory",
            "params": self.params,
            "lambda": fam.lam,
            "lambda0": fam.lambda0,
            "lambda1": fam.lambda1,
            "lambda1_status": fam.lambda1_status,
            "a": fam.a,
            "A": fam.A,
            "x": fam.x,
            "y": fam.y,
            "y1": fam.y1,
            "cover_prediction": self.cover_prediction,
            "t0": self.t0,
            "t1": self.t1,
            "er_prediction_same_c": self.er_prediction_same_c,
            "er_prediction_same_density": self.er_prediction_same_density,
            "figure1_ratio": self.figure1_ratio,
            "dbar_table": {str(k): v for k, v in self.dbar_table.items()},
            "band_K1": sorted(self.bands.K1),
            "band_K2": sorted(self.bands.K2),
            "band_K3": sorted(self.bands.K3),
            "set_I": sorted(self.bands.I),
        }


def theory_report(q: DerivedQuantities) -> TheoryReport:
    fam = lambda_family(q.n, q.c, q.np)
    t0, t1 = time_scales(q)
    D = dbar_table(q)
    return TheoryReport(
        params=q.as_dict(),
        lambda_family=fam,
        cover_prediction=cover_prediction(q),
        t0=t0,
        t1=t1,
        er_prediction_same_c=er_cover_prediction(q.n, q.c),
        er_prediction_same_density=er_same_density_prediction(q),
        figure1_ratio=figure1_ratio(q.np, q.c, q.n),
        dbar_table={k: float(D[k]) for k in range(1, q.delta + 1)},
        bands=degree_bands(q),
    )


def dbar_csv(q: DerivedQuantities) -> str:
    """CSV with columns (k, i, dbar, band) for 1 <= i <= k <= Δ."""
    M = dbar_matrix(q)
    bands = degree_bands(q)
    label = {}
    for name in ("K1", "K2", "K3"):
        for k in getattr(bands, name):
            label[k] = name
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "i", "dbar", "band"])
    for k in range(1, q.delta + 1):
        for i in range(1, k + 1):
            w.writerow([k, i, repr(float(M[k, i])), label.get(k, "")])
    return buf.getvalue()
