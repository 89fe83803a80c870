"""Finite-measurement-time spectral estimator and generalized Wiener-Khinchin
machinery.

The estimator follows the plain finite-time transform

    Us(w) = int_0^tm dU(t) sin(wt) dt,   Uc likewise with cos,
    S(f)  = < Us^2 + Uc^2 > / tm,        w = 2 pi f,

with trapezoidal discretization and literal ensemble averaging (no windowing
or overlap).  For covariances growing like log|tau|, which have no ordinary
Fourier transform, the difference construction

    Sigma(f) = int_{-tm}^{tm} S(tau) e^{iw tau} dtau
             - (1/tm) int_{-tm}^{tm} |tau| S(tau) e^{iw tau} dtau

stays finite as tm grows; the quadrature here uses per-period Gauss-Legendre
panels so that the log(tm)-sized oscillating pieces of the two terms cancel
without losing the -pi/|w| residual.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import sici


class SpectralError(ValueError):
    """Invalid input to a spectral operation."""


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SignalRecord:
    """Uniformly sampled voltage fluctuation record (volts, seconds)."""

    samples: np.ndarray
    dt: float

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        object.__setattr__(self, "samples", samples)
        if samples.ndim != 1 or samples.size < 2:
            raise SpectralError("a signal record needs at least 2 samples")
        if not np.all(np.isfinite(samples)):
            raise SpectralError("signal samples must be finite")
        if not self.dt > 0:
            raise SpectralError(f"sampling step must be positive, got {self.dt}")

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def t_m(self) -> float:
        return self.dt * (self.n - 1)

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n) * self.dt


@dataclass(frozen=True)
class FourierPair:
    """Finite-time sine/cosine transforms of a record at one frequency (V*s)."""

    us: float
    uc: float
    omega: float


@dataclass(frozen=True)
class SpectrumSeries:
    """(f, S(f)) result arrays, with per-point standard errors."""

    f: np.ndarray
    value: np.ndarray
    stderr: np.ndarray
    annotations: dict = field(default_factory=dict)

    def __post_init__(self):
        f = np.asarray(self.f, dtype=float)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "value", np.asarray(self.value, dtype=float))
        object.__setattr__(self, "stderr", np.asarray(self.stderr, dtype=float))
        if np.any(np.diff(f) <= 0):
            raise SpectralError("frequency grid must be strictly increasing")
        if not (np.all(np.isfinite(self.value)) and np.all(np.isfinite(self.stderr))):
            raise SpectralError("spectrum values must be finite")


@dataclass(frozen=True)
class CovarianceModel:
    """Covariance S(tau) models for the Sigma(f) construction.

    kinds: "log-law"  amplitude * ln(a_cov + (tau/tau0)^2)
           "exponential"  amplitude * exp(-|tau|/tau0)
           "constant"  amplitude
           "user-function"  func(tau), vectorized over numpy arrays
    """

    kind: str
    tau0: float = 1.0
    a_cov: float = 1.0
    amplitude: float = 1.0
    func: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        if self.kind not in ("log-law", "exponential", "constant", "user-function"):
            raise SpectralError(f"unknown covariance kind '{self.kind}'")
        if not self.tau0 > 0:
            raise SpectralError("tau0 must be positive")
        if self.kind == "log-law" and not self.a_cov > 0:
            raise SpectralError("log-law covariance needs a_cov > 0")
        if self.kind == "user-function" and self.func is None:
            raise SpectralError("user-function covariance needs func")

    def evaluate(self, tau) -> np.ndarray:
        tau = np.asarray(tau, dtype=float)
        if self.kind == "log-law":
            return self.amplitude * np.log(self.a_cov + (tau / self.tau0) ** 2)
        if self.kind == "exponential":
            return self.amplitude * np.exp(-np.abs(tau) / self.tau0)
        if self.kind == "constant":
            return np.full_like(tau, self.amplitude)
        return np.asarray(self.func(tau), dtype=float)


@dataclass(frozen=True)
class WkIdentityResult:
    """Both finite-time log-kernel integrals, their difference and the limit."""

    lhs1: float          # int_{-tm}^{tm} ln|tau| e^{iw tau} dtau (real part)
    lhs2: float          # (1/tm) int_{-tm}^{tm} |tau| ln|tau| e^{iw tau} dtau
    difference: float
    target: float        # -pi/|w|


# ---------------------------------------------------------------------------
# estimator
# ---------------------------------------------------------------------------

def finite_time_fourier(rec: SignalRecord, f: float) -> FourierPair:
    """Trapezoidal finite-time sine/cosine transform at frequency f >= 0."""
    if f < 0:
        raise SpectralError("frequency must be nonnegative")
    omega = 2.0 * math.pi * f
    t = rec.times
    us = np.trapezoid(rec.samples * np.sin(omega * t), dx=rec.dt)
    uc = np.trapezoid(rec.samples * np.cos(omega * t), dx=rec.dt)
    return FourierPair(us=float(us), uc=float(uc), omega=omega)


def power_spectrum_estimate(ensemble: Sequence[SignalRecord], f_grid) -> SpectrumSeries:
    """Ensemble-averaged power spectrum (Us^2 + Uc^2)/tm on a frequency grid."""
    if len(ensemble) < 1:
        raise SpectralError("ensemble must contain at least one record")
    n, dt = ensemble[0].n, ensemble[0].dt
    for rec in ensemble:
        if rec.n != n or rec.dt != dt:
            raise SpectralError(
                f"inconsistent records: expected n={n}, dt={dt}, got n={rec.n}, dt={rec.dt}")
    f = np.asarray(f_grid, dtype=float)
    if np.any(f < 0):
        raise SpectralError("frequencies must be nonnegative")
    t = ensemble[0].times
    w = np.full(n, dt)
    w[0] = w[-1] = dt / 2.0  # trapezoid weights
    x = np.stack([rec.samples for rec in ensemble]) * w  # (n_rec, n)
    phase = 2.0 * math.pi * np.outer(f, t)               # (n_f, n)
    us = x @ np.sin(phase).T
    uc = x @ np.cos(phase).T                              # (n_rec, n_f)
    t_m = ensemble[0].t_m
    p = (us ** 2 + uc ** 2) / t_m
    mean = p.mean(axis=0)
    if len(ensemble) > 1:
        stderr = p.std(axis=0, ddof=1) / math.sqrt(len(ensemble))
    else:
        stderr = np.zeros_like(mean)
    return SpectrumSeries(f=f, value=mean, stderr=stderr)


# ---------------------------------------------------------------------------
# oscillatory panel quadrature
# ---------------------------------------------------------------------------

_NODES_PER_PANEL = 24  # one panel per oscillation period


def _panel_points(edges: np.ndarray, n_nodes: int = _NODES_PER_PANEL):
    nodes, weights = leggauss(n_nodes)
    lo, hi = edges[:-1], edges[1:]
    half = 0.5 * (hi - lo)
    pts = (0.5 * (hi + lo))[:, None] + half[:, None] * nodes
    wts = half[:, None] * weights
    return pts.ravel(), wts.ravel()


def _oscillation_edges(omega: float, t_m: float, inner_scale: float | None = None) -> np.ndarray:
    """Panel edges on [0, t_m]: one per period, log-refined near tau = 0."""
    period = 2.0 * math.pi / abs(omega)
    n_periods = int(math.floor(t_m / period))
    edges = [0.0]
    first = min(period, t_m)
    if inner_scale is not None and inner_scale > 0:
        # resolve the covariance scale before the first oscillation boundary
        s = inner_scale * 1e-4
        while s < first:
            edges.append(s)
            s *= 10.0
    edges.extend(period * k for k in range(1, n_periods + 1))
    if edges[-1] < t_m:
        edges.append(t_m)
    return np.unique(np.asarray(edges))


def sigma_spectrum(cov: CovarianceModel, f: float, t_m: float) -> float:
    """Finite-time value of the generalized Wiener-Khinchin difference Sigma(f).

    Requires t_m >= 100/(2 pi |f|) so the O(1/t_m) remainder is below the
    percent scale.  For even covariances the imaginary part cancels; it is
    asserted to be < 1e-9 of the real part.
    """
    if f == 0:
        raise SpectralError("Sigma(f) is not defined at f = 0")
    omega = 2.0 * math.pi * f
    t_min = 100.0 / abs(omega)
    if t_m < t_min:
        raise SpectralError(
            f"t_m={t_m:g} s too small for f={f:g} Hz; need t_m >= {t_min:g} s")
    edges = _oscillation_edges(omega, t_m, inner_scale=cov.tau0)
    tau, wts = _panel_points(edges)
    sp, sm = cov.evaluate(tau), cov.evaluate(-tau)
    ep, em = np.exp(1j * omega * tau), np.exp(-1j * omega * tau)
    term1 = np.sum(wts * (sp * ep + sm * em))
    term2 = np.sum(wts * tau * (sp * ep + sm * em)) / t_m
    result = term1 - term2
    if abs(result.imag) >= 1e-9 * max(abs(result.real), 1e-300):
        raise SpectralError(
            f"imaginary part {result.imag:g} not negligible against {result.real:g}; "
            "covariance is not even")
    return float(result.real)


def wk_identity_check(omega: float, t_m: float) -> WkIdentityResult:
    """Numerically verify the log-kernel integral identities.

    Both integrals diverge like log(t_m) with an oscillating coefficient, but
    their difference converges to -pi/|omega|.  The log singularity at tau=0
    is integrated with its exact antiderivative (via the sine integral).
    """
    if omega == 0 or not t_m > 0:
        raise SpectralError("need omega != 0 and t_m > 0")
    w = abs(omega)  # both integrals are even in omega
    period = 2.0 * math.pi / w
    b = min(period / 8.0, t_m / 2.0)
    # exact ln-weight panel: int_0^b ln(tau) cos(w tau) dtau
    si_b, _ = sici(w * b)
    head = math.sin(w * b) * math.log(b) / w - si_b / w
    edges = _oscillation_edges(w, t_m)
    edges = np.unique(np.concatenate([edges[edges >= b], [b]]))
    tau, wts = _panel_points(edges)
    lhs1 = 2.0 * (head + float(np.sum(wts * np.log(tau) * np.cos(w * tau))))
    # |tau| ln|tau| is continuous at 0; log-refine its head panels instead
    head_edges = b * np.logspace(-8, 0, 9)
    edges2 = np.unique(np.concatenate([[0.0], head_edges, edges]))
    tau2, wts2 = _panel_points(edges2)
    integrand2 = tau2 * np.where(tau2 > 0, np.log(np.where(tau2 > 0, tau2, 1.0)), 0.0)
    lhs2 = 2.0 / t_m * float(np.sum(wts2 * integrand2 * np.cos(w * tau2)))
    return WkIdentityResult(lhs1=lhs1, lhs2=lhs2, difference=lhs1 - lhs2,
                            target=-math.pi / w)


def sign_function_transform(omega: float, t_m: float) -> complex:
    """int_{-tm}^{tm} (tau/|tau|) e^{i w tau} dtau by panel quadrature.

    Closed form: 2i (1 - cos(w t_m)) / w.
    """
    if omega == 0 or not t_m > 0:
        raise SpectralError("need omega != 0 and t_m > 0")
    edges = _oscillation_edges(abs(omega), t_m)
    tau, wts = _panel_points(edges)
    return complex(2j * np.sum(wts * np.sin(omega * tau)))


# ---------------------------------------------------------------------------
# power-law noise synthesis
# ---------------------------------------------------------------------------

def synthesize_power_law_noise(gamma: float, n: int, dt: float, seed: int,
                               variance: float = 1.0) -> SignalRecord:
    """Deterministic 1/f^gamma noise via frequency-domain shaping.

    Random phases on a fixed amplitude profile |X(f)| ~ f^(-gamma/2) with
    Hermitian symmetry; the output is rescaled to the requested sample
    variance.  gamma must lie in [0, 2] and n must be a power of two.
    """
    if not 0.0 <= gamma <= 2.0:
        raise SpectralError(f"gamma must be in [0, 2], got {gamma}")
    if n < 2 or n & (n - 1):
        raise SpectralError(f"n must be a power of two >= 2, got {n}")
    if not (dt > 0 and variance > 0):
        raise SpectralError("dt and variance must be positive")
    rng = np.random.default_rng(seed)
    freqs = np.fft.rfftfreq(n, d=dt)
    amp = np.zeros(n // 2 + 1)
    amp[1:] = freqs[1:] ** (-gamma / 2.0)
    phases = rng.uniform(0.0, 2.0 * math.pi, size=n // 2 + 1)
    spectrum = amp * np.exp(1j * phases)
    spectrum[0] = 0.0
    spectrum[-1] = amp[-1] * math.cos(phases[-1])  # Nyquist bin must be real
    x = np.fft.irfft(spectrum, n=n)
    x *= math.sqrt(variance / np.mean(x ** 2))
    return SignalRecord(samples=x, dt=dt)


# ---------------------------------------------------------------------------
# CSV import/export
# ---------------------------------------------------------------------------

def write_signal_csv(rec: SignalRecord, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "value"])
        for t, v in zip(rec.times, rec.samples):
            writer.writerow([f"{t:.9g}", f"{v:.9g}"])


def read_signal_csv(path) -> SignalRecord:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:2]] != ["t", "value"]:
            raise SpectralError(f"{path}: expected header 't,value'")
        rows = [(float(r[0]), float(r[1])) for r in reader if r]
    if len(rows) < 2:
        raise SpectralError(f"{path}: need at least 2 samples")
    t = np.array([r[0] for r in rows])
    steps = np.diff(t)
    dt = steps[0]
    if dt <= 0 or np.any(np.abs(steps - dt) > 1e-9 * max(abs(dt), 1.0)):
        raise SpectralError(f"{path}: time grid is not uniform")
    return SignalRecord(samples=np.array([r[1] for r in rows]), dt=float(dt))


def spectrum_csv_text(series: SpectrumSeries) -> str:
    lines = ["f,S,stderr"]
    for f, s, e in zip(series.f, series.value, series.stderr):
        lines.append(f"{f:.6g},{s:.6g},{e:.6g}")
    return "\n".join(lines) + "\n"


def write_spectrum_csv(series: SpectrumSeries, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(spectrum_csv_text(series))
