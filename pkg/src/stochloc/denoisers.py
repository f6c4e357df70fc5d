"""Posterior-mean denoisers for every supported observation channel.

Each function computes an exact conditional expectation for its channel, by
enumeration over the target support or in closed form.  All evaluators accept
a single observation of shape (d,) or a batch of shape (B, d) and vectorize
over the batch; time arguments are scalars.

Bayes weights are always formed in the log domain and normalized with
log-sum-exp, so large observation norms (||y|| ~ t ||x||) stay finite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InconsistentObservationError, ValidationError
from .targets import (
    CirculantGaussian,
    DiscreteTarget,
    NonnegativeTarget,
    TwoGaussianMixture,
    support,
)

__all__ = [
    "Denoiser",
    "ConvKernel",
    "WindowSpectrum",
    "posterior_mean_discrete",
    "mixture_posterior_mean",
    "mixture_posterior_mean_limit",
    "mixture_match_threshold",
    "gaussian_posterior_mean",
    "anisotropic_posterior_mean",
    "solve_windowed_kernel",
    "window_spectrum",
    "windowed_kernel_closed_form",
    "fit_windowed_kernel",
    "binary_magnetization",
    "qary_beliefs",
    "poisson_posterior_mean",
    "average_channel_guess_drift",
    "average_channel_operator",
    "linear_channel_posterior_mean",
    "shrinkage_matrix",
    "discrete_denoiser",
    "anisotropic_denoiser",
    "mixture_denoiser",
    "component_denoiser",
    "linear_gaussian_denoiser",
    "windowed_denoiser",
    "guess_drift_denoiser",
]

# channel tags used by the samplers to verify denoiser compatibility
CHANNEL_ISO = "isotropic-gaussian"
CHANNEL_ANISO = "anisotropic-gaussian"
CHANNEL_LINEAR = "linear-observation"
CHANNEL_BINARY = "binary-symmetric"
CHANNEL_QARY = "q-ary-symmetric"
CHANNEL_POISSON = "poisson-counting"


@dataclass(frozen=True)
class Denoiser:
    """A channel-tagged posterior-mean evaluator.

    ``fn(y, t)`` maps a (B, n_obs) batch and a scalar time to a (B, n_out)
    batch.  Anisotropic evaluators take ``fn(y, omega)`` where omega is either
    a scalar (meaning omega = t I, evaluated on the isotropic fast path) or an
    (n, n) PSD matrix.
    """

    channel: str
    fn: Callable
    n_obs: int
    n_out: int

    def __call__(self, y, t):
        return self.fn(y, t)


def _as_batch(y: np.ndarray, d: int) -> tuple[np.ndarray, bool]:
    y = np.asarray(y, dtype=float)
    if y.ndim == 1:
        if y.shape != (d,):
            raise ValidationError(f"observation must have {d} coordinates")
        return y[None, :], True
    if y.ndim == 2 and y.shape[1] == d:
        return y, False
    raise ValidationError(f"observation batch must have shape (B, {d})")


def _softmax_rows(logw: np.ndarray) -> np.ndarray:
    m = logw.max(axis=1, keepdims=True)
    bad = ~np.isfinite(m[:, 0])
    if np.any(bad):
        raise InconsistentObservationError("observation has zero likelihood on the whole support")
    w = np.exp(logw - m)
    return w / w.sum(axis=1, keepdims=True)


# ---------------------------------------------------------------------------
# Gaussian channel, discrete targets


def posterior_mean_discrete(target, y, t: float):
    """E[x | t x + sqrt(t) G = y] by enumeration over the target support.

    Tilt weights are w_j proportional to mu_j * exp(<y, x_j> - t ||x_j||^2 / 2).
    """
    pts, wts = support(target)
    if t < 0:
        raise ValidationError("t must be nonnegative")
    yb, single = _as_batch(y, pts.shape[1])
    logw = yb @ pts.T - 0.5 * t * np.sum(pts * pts, axis=1)[None, :]
    logw += np.log(wts)[None, :]
    post = _softmax_rows(logw)
    out = post @ pts
    return out[0] if single else out


# ---------------------------------------------------------------------------
# two-Gaussian mixture, closed form


def mixture_posterior_mean(mix: TwoGaussianMixture, y, t: float):
    """Exact posterior mean for the two-Gaussian mixture.

    m(y; t) = y/(1+t) + a * phi(<a,y>/||a||^2; t) where phi collapses to
    (w_plus - p)/(1+t) with w_plus the posterior weight of the first
    component.  The two exponents are combined through logaddexp, so the
    formula is stable for ||a||^2 up to 1e4 and beyond.
    """
    yb, single = _as_batch(y, mix.n)
    out = yb / (1.0 + t)
    a2 = float(mix.a @ mix.a)
    p = mix.p
    if a2 > 0.0 and 0.0 < p < 1.0:
        s = (yb @ mix.a) / a2
        phi = _mixture_phi(s, t, a2, p)
        out = out + phi[:, None] * mix.a[None, :]
    return out[0] if single else out


def _mixture_phi(s: np.ndarray, t: float, a2: float, p: float) -> np.ndarray:
    # exponents of the two component evidences, up to a shared constant
    ea = ((1.0 - p) * s / (1.0 + t) - t * (1.0 - p) ** 2 / (2.0 * (1.0 + t))) * a2
    eb = -(p * s / (1.0 + t) + t * p**2 / (2.0 * (1.0 + t))) * a2
    la = np.log(p) + ea
    lb = np.log1p(-p) + eb
    w_plus = np.exp(la - np.logaddexp(la, lb))
    return (w_plus - p) / (1.0 + t)


def mixture_match_threshold(mix: TwoGaussianMixture, t: float) -> float:
    """Projection value where the two component evidences match.

    The exponent difference is ||a||^2 (s - (1-2p) t / 2) / (1+t), so the
    regimes split at s = (1-2p) t / 2, the midpoint of the projected
    component centers t(1-p) and -tp.
    """
    return 0.5 * (1.0 - 2.0 * mix.p) * t


def mixture_posterior_mean_limit(mix: TwoGaussianMixture, y, t: float, delta: float):
    """Large-||a|| limit of the mixture posterior mean.

    Returns (y + (1-p) a)/(1+t) on the upper side of the matching threshold
    and (y - p a)/(1+t) on the lower side.  Observations within `delta` of
    the threshold are rejected: the limit does not apply in the window.
    """
    if delta <= 0:
        raise ValidationError("delta must be positive")
    a2 = float(mix.a @ mix.a)
    if a2 == 0.0:
        raise ValidationError("limit requires a != 0")
    yb, single = _as_batch(y, mix.n)
    s = (yb @ mix.a) / a2
    thr = mixture_match_threshold(mix, t)
    if np.any(np.abs(s - thr) < delta):
        raise ValidationError("observation inside the matching window; limit not applicable")
    shift = np.where(s > thr, 1.0 - mix.p, -mix.p)
    out = (yb + shift[:, None] * mix.a[None, :]) / (1.0 + t)
    return out[0] if single else out


# ---------------------------------------------------------------------------
# Gaussian targets, linear shrinkage


def gaussian_posterior_mean(sigma: np.ndarray, y, t: float):
    """m(y; t) = (I + t Sigma)^{-1} Sigma y for mu = N(0, Sigma)."""
    sigma = np.asarray(sigma, dtype=float)
    n = sigma.shape[0]
    yb, single = _as_batch(y, n)
    a = np.eye(n) + t * sigma
    out = np.linalg.solve(a, sigma @ yb.T).T
    return out[0] if single else out


def shrinkage_matrix(sigma: np.ndarray, t: float) -> np.ndarray:
    """(I + t Sigma)^{-1} Sigma, the linear map y -> m(y; t)."""
    sigma = np.asarray(sigma, dtype=float)
    return np.linalg.solve(np.eye(sigma.shape[0]) + t * sigma, sigma)


# ---------------------------------------------------------------------------
# anisotropic Gaussian channel


def _psd_decompose(omega: np.ndarray, tol: float = 1e-10):
    lam, v = np.linalg.eigh(omega)
    lam = np.where(lam < tol * max(1.0, lam.max(initial=0.0)), 0.0, lam)
    return lam, v


def anisotropic_posterior_mean(target, y, omega):
    """E[x | Omega x + Omega^{1/2} G = y].

    `omega` may be a scalar t (meaning Omega = t I; the isotropic evaluator is
    used verbatim) or an (n, n) PSD matrix, possibly singular.  For a singular
    Omega the observation must lie in range(Omega); the tilt weights on a
    discrete support are w_j proportional to mu_j exp(<x_j, y> - <x_j, Omega
    x_j>/2).  Gaussian targets use the closed-form joint-Gaussian formula.
    """
    if np.isscalar(omega):
        if isinstance(target, CirculantGaussian):
            return gaussian_posterior_mean(target.sigma(), y, float(omega))
        return posterior_mean_discrete(target, y, float(omega))
    omega = np.asarray(omega, dtype=float)
    n = omega.shape[0]
    if omega.shape != (n, n) or not np.allclose(omega, omega.T, atol=1e-10):
        raise ValidationError("omega must be symmetric PSD")
    yb, single = _as_batch(y, n)
    lam, v = _psd_decompose(omega)
    if np.any(lam < 0):
        raise ValidationError("omega must be PSD")
    null = v[:, lam == 0.0]
    if null.shape[1] and np.any(
        np.linalg.norm(yb @ null, axis=1) > 1e-8 * (1.0 + np.linalg.norm(yb, axis=1))
    ):
        raise ValidationError("observation outside the range of the observation map")
    if isinstance(target, CirculantGaussian):
        sig = target.sigma()
        gram = omega @ sig @ omega + omega
        out = (sig @ omega @ np.linalg.pinv(gram, hermitian=True) @ yb.T).T
        return out[0] if single else out
    pts, wts = support(target)
    if pts.shape[1] != n:
        raise ValidationError("target dimension does not match omega")
    logw = yb @ pts.T - 0.5 * np.sum(pts * (pts @ omega), axis=1)[None, :]
    logw += np.log(wts)[None, :]
    post = _softmax_rows(logw)
    out = post @ pts
    return out[0] if single else out


# ---------------------------------------------------------------------------
# shift-invariant windowed kernels


@dataclass(frozen=True)
class ConvKernel:
    """Symmetric convolution kernel supported on |u| <= r.

    `coeffs` stores ell(-r..r) (length 2r+1, index u+r); symmetry
    ell(u) = ell(-u) is exact by construction.  `n` is the ambient circulant
    dimension, 2r+1 <= n.
    """

    r: int
    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=float).ravel()
        if coeffs.shape != (2 * self.r + 1,):
            raise ValidationError("coeffs must have length 2r+1")
        if 2 * self.r + 1 > self.n:
            raise ValidationError("window 2r+1 must fit inside dimension n")
        coeffs = 0.5 * (coeffs + coeffs[::-1])  # exact symmetry
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    def at(self, u: int) -> float:
        if abs(u) > self.r:
            return 0.0
        return float(self.coeffs[u + self.r])

    def as_matrix(self) -> np.ndarray:
        row = np.zeros(self.n)
        for u in range(-self.r, self.r + 1):
            row[u % self.n] += self.at(u)
        idx = (np.arange(self.n)[:, None] - np.arange(self.n)[None, :]) % self.n
        return row[idx]

    def gain(self, q: float) -> float:
        """Transfer value sum_u ell(u) cos(q u) at angular frequency q."""
        u = np.arange(-self.r, self.r + 1)
        return float(np.sum(self.coeffs * np.cos(q * u)))

    def apply(self, y: np.ndarray) -> np.ndarray:
        """Circular convolution with the kernel along the last axis."""
        yb, single = _as_batch(y, self.n)
        row = np.zeros(self.n)
        for u in range(-self.r, self.r + 1):
            row[u % self.n] += self.at(u)
        out = np.fft.ifft(np.fft.fft(yb, axis=1) * np.fft.fft(row)[None, :], axis=1).real
        return out[0] if single else out


def _window_system(c: np.ndarray, r: int) -> tuple[np.ndarray, np.ndarray]:
    """Window operator [c(u-v)] and right-hand side c(u), lags taken mod n."""
    n = c.shape[0]
    u = np.arange(-r, r + 1)
    cw = c[np.mod(u, n)]
    mat = c[np.mod(u[:, None] - u[None, :], n)]
    return mat, cw


def solve_windowed_kernel(c: np.ndarray, r: int, t: float, n: int | None = None) -> ConvKernel:
    """Best shift-invariant kernel with window radius r at time t.

    Solves ell(u) + t sum_{|v|<=r} c(u-v) ell(v) = c(u) for |u| <= r, the
    stationarity condition of min_A E||x - A(t x + sqrt(t) G)||^2 over
    symmetric banded circulants.  `c` is the circulant symbol of Cov(x).
    """
    c = np.asarray(c, dtype=float).ravel()
    n = c.shape[0] if n is None else n
    if 2 * r + 1 > c.shape[0]:
        raise ValidationError("window exceeds the circulant period")
    if t < 0:
        raise ValidationError("t must be nonnegative")
    mat, cw = _window_system(c, r)
    ell = np.linalg.solve(np.eye(2 * r + 1) + t * mat, cw)
    return ConvKernel(r, n, ell)


@dataclass(frozen=True)
class WindowSpectrum:
    """Spectral data of the window operator [c(u-v)], |u|,|v| <= r.

    `values` holds the window spectrum c_hat_k = lambda_k / (2r+1) and
    `modes` the orthonormal eigenvectors, one column per mode.  The cosine
    display of this transform is not an exact eigenbasis of the window
    operator; the convention here is fixed by exact agreement with
    :func:`solve_windowed_kernel` (the basis is the true eigenbasis, the
    shrinkage per mode is c_hat/(1 + t (2r+1) c_hat)).
    """

    r: int
    n: int
    values: np.ndarray
    modes: np.ndarray

    @property
    def eigenvalues(self) -> np.ndarray:
        return (2 * self.r + 1) * self.values


def window_spectrum(c: np.ndarray, r: int, n: int | None = None) -> WindowSpectrum:
    """Window spectrum (c_hat transform) of a circulant symbol sequence."""
    c = np.asarray(c, dtype=float).ravel()
    n = c.shape[0] if n is None else n
    mat, _ = _window_system(c, r)
    lam, v = np.linalg.eigh(mat)
    return WindowSpectrum(r, n, lam / (2 * r + 1), v)


def windowed_kernel_closed_form(spec: WindowSpectrum, t: float) -> ConvKernel:
    """Kernel from the window spectrum: per-mode shrinkage, no linear solve.

    ell_t(u) = sum_k [c_hat_k / (1 + t (2r+1) c_hat_k)] psi_k(u) with
    psi_k(u) = (2r+1) w_k(0) w_k(u) over the eigenmodes w_k.  At t=0 this
    reconstructs c on the window; as t -> infinity it vanishes.
    """
    w = 2 * spec.r + 1
    lam = w * spec.values
    weights = (lam / (1.0 + t * lam)) * spec.modes[spec.r, :]
    return ConvKernel(spec.r, spec.n, spec.modes @ weights)


def fit_windowed_kernel(samples: np.ndarray, r: int, t: float, ridge: float = 1e-8) -> ConvKernel:
    """Fit the windowed kernel from samples of x alone.

    Minimizes the empirical version of E||x - A(t x + sqrt(t) G)||^2 with the
    Gaussian noise integrated analytically, which reduces to the window
    system with c replaced by the circularly averaged empirical
    autocorrelation c_emp(k) = (1/(N n)) sum_i sum_j x_{i,j} x_{i,(j+k) mod n}.
    A ridge of `ridge` is added if the solve fails.
    """
    x = np.asarray(samples, dtype=float)
    if x.ndim != 2:
        raise ValidationError("samples must be an (N, n) array")
    nsamp, n = x.shape
    if nsamp < 2 * r + 2:
        raise ValidationError("need at least 2r+2 samples")
    if 2 * r + 1 > n:
        raise ValidationError("window exceeds the sample dimension")
    power = np.abs(np.fft.fft(x, axis=1)) ** 2
    c_emp = np.fft.ifft(power.mean(axis=0)).real / n
    mat, cw = _window_system(c_emp, r)
    lhs = np.eye(2 * r + 1) + t * mat
    try:
        ell = np.linalg.solve(lhs, cw)
        if not np.all(np.isfinite(ell)):
            raise np.linalg.LinAlgError
    except np.linalg.LinAlgError:
        ell = np.linalg.solve(lhs + ridge * np.eye(2 * r + 1), cw)
    return ConvKernel(r, n, ell)


# ---------------------------------------------------------------------------
# binary symmetric channel


def binary_magnetization(target, y, t: float):
    """Coordinatewise posterior means E[x_i | Y = y] for the binary channel.

    The channel keeps each coordinate with probability (1+t)/2 and flips it
    otherwise, independently across coordinates.
    """
    if not 0.0 <= t < 1.0:
        raise ValidationError("binary channel requires t in [0, 1)")
    pts, wts = support(target)
    if not np.all(np.abs(pts) == 1.0):
        raise ValidationError("binary channel requires a sign-valued target")
    yb, single = _as_batch(y, pts.shape[1])
    n = pts.shape[1]
    # agreement count a: log-lik = a log((1+t)/2) + (n-a) log((1-t)/2)
    agree = 0.5 * (n + yb @ pts.T)
    logw = agree * np.log((1.0 + t) / 2.0) + (n - agree) * np.log((1.0 - t) / 2.0)
    logw += np.log(wts)[None, :]
    post = _softmax_rows(logw)
    out = post @ pts
    return out[0] if single else out


# ---------------------------------------------------------------------------
# q-ary symmetric channel


def qary_beliefs(target, y, t: float):
    """Posterior belief tensor b[., i, z] = P(x_i = z | Y = y).

    Per-coordinate channel: P(Y_i = y | x_i) = (1 + (q-1) t)/q if y = x_i and
    (1 - t)/q otherwise.  Output shape (B, n, q), squeezed to (n, q) for a
    single observation.
    """
    if not 0.0 <= t < 1.0:
        raise ValidationError("q-ary channel requires t in [0, 1)")
    q = target.q
    configs = target.configs()
    wts = target.table
    n = target.n
    y = np.asarray(y)
    single = y.ndim == 1
    yb = y[None, :] if single else y
    if yb.shape[1] != n:
        raise ValidationError(f"observation must have {n} coordinates")
    if np.any(yb < 0) or np.any(yb >= q):
        raise ValidationError("observation letter outside the alphabet")
    agree = np.sum(yb[:, None, :] == configs[None, :, :], axis=2)
    logw = agree * np.log((1.0 + (q - 1) * t) / q) + (n - agree) * np.log((1.0 - t) / q)
    logw += np.log(wts)[None, :]
    post = _softmax_rows(logw)
    onehot = (configs[:, :, None] == np.arange(q)[None, None, :]).astype(float)
    out = np.einsum("bs,siz->biz", post, onehot)
    return out[0] if single else out


# ---------------------------------------------------------------------------
# Poisson counting channel


def poisson_posterior_mean(target: NonnegativeTarget, y, t: float):
    """E[x | Y_t = y] for coordinatewise Poisson counts Y_k ~ Poisson(t x_k).

    Likelihood per atom: prod_k (t x_k)^{y_k} exp(-t x_k), with 0^0 = 1.
    Observations with zero likelihood under every atom raise
    InconsistentObservationError.
    """
    if t < 0:
        raise ValidationError("t must be nonnegative")
    pts, wts = support(target)
    y = np.asarray(y)
    single = y.ndim == 1
    yb = np.atleast_2d(y).astype(float)
    if yb.shape[1] != pts.shape[1]:
        raise ValidationError("count vector has the wrong length")
    if np.any(yb < 0) or np.any(yb != np.floor(yb)):
        raise ValidationError("counts must be nonnegative integers")
    tx = t * pts  # (J, n)
    with np.errstate(divide="ignore"):
        log_tx = np.where(tx > 0.0, np.log(np.where(tx > 0.0, tx, 1.0)), -np.inf)
    # y * log(tx) with the 0 * (-inf) = 0 convention for y = 0
    term = yb[:, None, :] * log_tx[None, :, :]
    term = np.where(yb[:, None, :] == 0.0, 0.0, term)
    logw = term.sum(axis=2) - tx.sum(axis=1)[None, :] + np.log(wts)[None, :]
    post = _softmax_rows(logw)
    out = post @ pts
    return out[0] if single else out


# ---------------------------------------------------------------------------
# linear observation channels


def linear_channel_posterior_mean(target, a_mat: np.ndarray, y, t: float):
    """E[A x | t A x + sqrt(t) G = y] by enumeration over the target support."""
    a_mat = np.asarray(a_mat, dtype=float)
    pts, wts = support(target)
    imgs = pts @ a_mat.T  # (J, m)
    yb, single = _as_batch(y, a_mat.shape[0])
    logw = yb @ imgs.T - 0.5 * t * np.sum(imgs * imgs, axis=1)[None, :]
    logw += np.log(wts)[None, :]
    post = _softmax_rows(logw)
    out = post @ imgs
    return out[0] if single else out


def average_channel_operator(n: int, b: float, channels: int = 1) -> np.ndarray:
    """Observation operator stacking scaled channel averages on the identity.

    Coordinates are split into `channels` contiguous blocks of equal size;
    the first `channels` rows observe b * (block average) and the remaining
    n rows are the identity.  For channels=1 this is the (n+1) x n operator
    [b/n 1^T; I].
    """
    if n % channels != 0:
        raise ValidationError("channels must divide n")
    block = n // channels
    top = np.zeros((channels, n))
    for ch in range(channels):
        top[ch, ch * block : (ch + 1) * block] = b / block
    return np.vstack([top, np.eye(n)])


def average_channel_guess_drift(y0, ystar, t: float, alpha: float, b: float):
    """Product-form drift guess for the average-augmented channel.

    For the operator [b/n 1^T; I] applied to x ~ N(0, I + alpha 11^T), the
    average row is treated as a scalar Gaussian channel and the identity rows
    as unit-variance coordinates recentered on the average estimate:

        m0    = alpha b^2 y0 / (1 + alpha b^2 t)
        mstar = (ystar - (alpha b y0 / (1 + alpha b^2 t)) 1) / (1 + t)
                + (alpha b y0 / (1 + alpha b^2 t)) 1

    Returns (m0, mstar); shapes follow the inputs (scalars/(n,) or batches
    (B,)/(B, n)).
    """
    y0 = np.asarray(y0, dtype=float)
    ystar = np.asarray(ystar, dtype=float)
    kappa = alpha * b * b
    m0 = kappa * y0 / (1.0 + kappa * t)
    center = alpha * b * y0 / (1.0 + kappa * t)
    c = center[..., None] if ystar.ndim > y0.ndim else center
    mstar = (ystar - c) / (1.0 + t) + c
    return m0, mstar


# ---------------------------------------------------------------------------
# Denoiser factories for the samplers


def discrete_denoiser(target) -> Denoiser:
    pts, _ = support(target)
    n = pts.shape[1]
    return Denoiser(CHANNEL_ISO, lambda y, t: posterior_mean_discrete(target, y, t), n, n)


def anisotropic_denoiser(target) -> Denoiser:
    n = target.n if isinstance(target, CirculantGaussian) else support(target)[0].shape[1]
    return Denoiser(CHANNEL_ANISO, lambda y, om: anisotropic_posterior_mean(target, y, om), n, n)


def mixture_denoiser(mix: TwoGaussianMixture) -> Denoiser:
    return Denoiser(CHANNEL_ISO, lambda y, t: mixture_posterior_mean(mix, y, t), mix.n, mix.n)


def component_denoiser(mix: TwoGaussianMixture, sign: int) -> Denoiser:
    """Exact posterior mean of one mixture component: m(y; t) = (y + c)/(1+t)."""
    c = mix.mean_plus if sign > 0 else mix.mean_minus

    def fn(y, t):
        return (np.asarray(y, dtype=float) + c) / (1.0 + t)

    return Denoiser(CHANNEL_ISO, fn, mix.n, mix.n)


def linear_gaussian_denoiser(sigma: np.ndarray, grid_nodes=None) -> Denoiser:
    """Exact N(0, Sigma) denoiser; shrinkage matrices cached per grid node."""
    sigma = np.asarray(sigma, dtype=float)
    n = sigma.shape[0]
    cache: dict[float, np.ndarray] = {}
    if grid_nodes is not None:
        for t in np.asarray(grid_nodes, dtype=float):
            cache[float(t)] = shrinkage_matrix(sigma, float(t))

    def fn(y, t):
        mat = cache.get(float(t))
        if mat is None:
            mat = shrinkage_matrix(sigma, float(t))
            cache[float(t)] = mat
        return np.asarray(y, dtype=float) @ mat.T

    return Denoiser(CHANNEL_ISO, fn, n, n)


def windowed_denoiser(c: np.ndarray, r: int) -> Denoiser:
    """Shift-invariant denoiser; the kernel is re-solved at each queried time."""
    c = np.asarray(c, dtype=float).ravel()
    n = c.shape[0]
    cache: dict[float, ConvKernel] = {}

    def fn(y, t):
        ker = cache.get(float(t))
        if ker is None:
            ker = solve_windowed_kernel(c, r, float(t))
            cache[float(t)] = ker
        return ker.apply(y)

    return Denoiser(CHANNEL_ISO, fn, n, n)


def guess_drift_denoiser(n: int, alpha: float, b: float) -> Denoiser:
    """Average-channel guess drift packaged for the linear-observation sampler."""

    def fn(y, t):
        y = np.asarray(y, dtype=float)
        single = y.ndim == 1
        yb = np.atleast_2d(y)
        m0, mstar = average_channel_guess_drift(yb[:, 0], yb[:, 1:], t, alpha, b)
        out = np.concatenate([m0[:, None], mstar], axis=1)
        return out[0] if single else out

    return Denoiser(CHANNEL_LINEAR, fn, n + 1, n + 1)
