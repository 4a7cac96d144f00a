"""Synthetic series with analytically known scaling or volatility structure.

These generators provide the oracles used throughout the test suite:
fractional Gaussian noise (exact covariance via circulant embedding), the
binomial multiplicative cascade (closed-form generalized Hurst exponents)
and GARCH-family simulators matching the estimation module's recursions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_BURN_IN = 1000


@dataclass(frozen=True)
class GeneratorSpec:
    """Declarative description of one synthetic series."""

    kind: str  # fgn | binomial_cascade | iid_gaussian | garch_sim
    length: int
    seed: int
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        kinds = {"fgn", "binomial_cascade", "iid_gaussian", "garch_sim"}
        if self.kind not in kinds:
            raise ValueError(f"unknown generator kind {self.kind!r}; expected one of {sorted(kinds)}")
        if self.length <= 0:
            raise ValueError("length must be positive")
        p = self.params
        if self.kind == "fgn" and not (0.0 < p.get("H", 0.5) < 1.0):
            raise ValueError("fgn requires 0 < H < 1")
        if self.kind == "binomial_cascade" and not (0.5 < p.get("p", 0.75) < 1.0):
            raise ValueError("binomial cascade requires 0.5 < p < 1")

    def generate(self) -> np.ndarray:
        if self.kind == "fgn":
            return gen_fgn(self.params.get("H", 0.5), self.length, self.seed)
        if self.kind == "binomial_cascade":
            levels = self.params.get("levels", int(np.log2(self.length)))
            return gen_binomial_cascade(self.params.get("p", 0.75), levels, self.seed)
        if self.kind == "iid_gaussian":
            return np.random.default_rng(self.seed).standard_normal(self.length)
        model = self.params.get("model", "gjr")
        keys = ("omega", "alpha1", "alpha2", "beta")
        params = tuple(float(self.params[k]) for k in keys)
        return gen_garch(model, params, self.length, self.seed)


def fgn_autocov(H: float, lags: np.ndarray) -> np.ndarray:
    """Autocovariance of unit-variance fractional Gaussian noise."""
    k = np.abs(np.asarray(lags, dtype=float))
    return 0.5 * ((k + 1) ** (2 * H) - 2 * k ** (2 * H) + np.abs(k - 1) ** (2 * H))


def gen_fgn(H: float, N: int, seed: int) -> np.ndarray:
    """Fractional Gaussian noise by circulant embedding.

    Exact method: the covariance of the output is the fGn autocovariance
    to machine precision, which is what makes h(2) = H a trustworthy
    oracle. N must be a power of two (embedding convenience).

    Parameters
    ----------
    H : Hurst index in (0, 1)
    N : length, a power of two >= 1024
    seed : RNG seed; output is bit-reproducible per seed
    """
    if not (0.0 < H < 1.0):
        raise ValueError(f"H must lie in (0, 1), got {H}")
    if N < 1024 or (N & (N - 1)) != 0:
        raise ValueError(f"N must be a power of two >= 1024, got {N}")
    gamma = fgn_autocov(H, np.arange(N))
    row = np.concatenate([gamma, [0.0], gamma[1:][::-1]])
    lam = np.fft.fft(row).real
    if lam.min() < -1e-9 * lam.max():
        raise ValueError("circulant embedding is not nonnegative definite")
    lam = np.clip(lam, 0.0, None)
    m = 2 * N
    rng = np.random.default_rng(seed)
    g1 = rng.standard_normal(N + 1)
    g2 = rng.standard_normal(N + 1)
    w = np.empty(m, dtype=complex)
    w[0] = np.sqrt(lam[0] / m) * g1[0]
    w[1:N] = np.sqrt(lam[1:N] / (2 * m)) * (g1[1:N] + 1j * g2[1:N])
    w[N] = np.sqrt(lam[N] / m) * g2[0]
    w[N + 1:] = np.conj(w[1:N][::-1])
    return np.fft.fft(w)[:N].real


def cascade_hurst(p: float, q) -> np.ndarray | float:
    """Closed-form generalized Hurst exponent of the binomial cascade.

    h(q) = 1/q - ln(p^q + (1-p)^q) / (q ln 2); at q = 0 the removable
    singularity is replaced by its limit -(ln p + ln(1-p)) / (2 ln 2).
    """
    q = np.asarray(q, dtype=float)
    out = np.empty_like(q)
    nz = q != 0
    qnz = q[nz]
    out[nz] = 1.0 / qnz - np.log(p ** qnz + (1 - p) ** qnz) / (qnz * np.log(2))
    # q -> 0 limit of the same expression
    out[~nz] = -(np.log(p) + np.log(1 - p)) / (2 * np.log(2))
    return out if out.ndim else float(out)


def cascade_tau(p: float, q) -> np.ndarray:
    """Closed-form Renyi exponent tau(q) = -ln(p^q + (1-p)^q) / ln 2."""
    q = np.asarray(q, dtype=float)
    return -np.log(p ** q + (1 - p) ** q) / np.log(2)


def cascade_alpha_range(p: float) -> tuple[float, float]:
    """Endpoints of the analytic singularity spectrum: [-log2 p, -log2 (1-p)]."""
    return (-np.log2(p), -np.log2(1 - p))


def gen_binomial_cascade(p: float, levels: int, seed: int) -> np.ndarray:
    """Binomial multiplicative cascade of length 2**levels.

    Mass 1 is split p : (1-p) at every node; the side receiving p is
    drawn per node from the seeded RNG. The multiset of masses in every
    dyadic box is independent of those draws, so the closed-form h(q)
    and tau(q) oracles hold for every seed. Output is rescaled by
    2**levels so the mean is 1.
    """
    if not (0.5 < p < 1.0):
        raise ValueError(f"cascade weight p must lie in (0.5, 1), got {p}")
    if levels < 10:
        raise ValueError(f"levels must be >= 10, got {levels}")
    rng = np.random.default_rng(seed)
    w = np.array([1.0])
    for _ in range(levels):
        left = np.where(rng.random(w.size) < 0.5, p, 1.0 - p)
        nxt = np.empty(2 * w.size)
        nxt[0::2] = w * left
        nxt[1::2] = w * (1.0 - left)
        w = nxt
    return w * w.size


def _gjr_unconditional(omega, alpha1, alpha2, beta):
    persistence = alpha1 + alpha2 / 2.0 + beta
    if omega <= 0 or alpha1 < 0 or alpha1 + alpha2 < 0 or beta < 0 or persistence >= 1:
        raise ValueError("GJR parameters violate positivity/stationarity "
                         "(need omega>0, alpha1>=0, alpha1+alpha2>=0, beta>=0, "
                         "alpha1+alpha2/2+beta<1)")
    return omega / (1.0 - persistence)


def _simulate_garch(model: str, params: tuple, N: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Simulate (returns, sigma) paths; shared core for gen_garch."""
    omega, alpha1, alpha2, beta = (float(v) for v in params)
    if model not in ("gjr", "egarch"):
        raise ValueError(f"unknown GARCH model {model!r}")
    rng = np.random.default_rng(seed)
    eps = rng.standard_normal(N + _BURN_IN)
    r = np.empty(N + _BURN_IN)
    sig = np.empty(N + _BURN_IN)
    if model == "gjr":
        s2 = _gjr_unconditional(omega, alpha1, alpha2, beta)
        for t in range(N + _BURN_IN):
            sig[t] = np.sqrt(s2)
            r[t] = sig[t] * eps[t]
            s2 = omega + (alpha1 + alpha2 * (r[t] < 0.0)) * r[t] ** 2 + beta * s2
    else:
        if abs(beta) >= 1:
            raise ValueError("EGARCH requires |beta| < 1")
        # start at the stationary mean of ln sigma2 (E|eps| = sqrt(2/pi))
        ls2 = (omega + alpha1 * np.sqrt(2.0 / np.pi)) / (1.0 - beta)
        for t in range(N + _BURN_IN):
            sig[t] = np.exp(0.5 * ls2)
            r[t] = sig[t] * eps[t]
            ls2 = omega + alpha1 * abs(eps[t]) + alpha2 * eps[t] + beta * ls2
    return r[_BURN_IN:], sig[_BURN_IN:]


def gen_garch(model: str, params: tuple, N: int, seed: int) -> np.ndarray:
    """Simulate r_t = sigma_t * eps_t with Gaussian innovations.

    model 'gjr':    sigma2_t = omega + (alpha1 + alpha2*[r<0]) r_{t-1}^2 + beta sigma2_{t-1}
    model 'egarch': ln sigma2_t = omega + alpha1 |eps_{t-1}| + alpha2 eps_{t-1} + beta ln sigma2_{t-1}

    The first 1000 draws are burn-in and discarded. Explosive parameter
    sets are rejected before any simulation.
    """
    return _simulate_garch(model, params, N, seed)[0]
