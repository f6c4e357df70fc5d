"""Target distributions and exact samplers.

Six target families are supported:

* ``DiscreteTarget``      -- weighted atoms in R^n.
* ``HypercubeTarget``     -- full probability table on {+1,-1}^n, n <= 20.
* ``QaryTarget``          -- full probability table on {0,...,q-1}^n.
* ``TwoGaussianMixture``  -- p N((1-p)a, I) + (1-p) N(-p a, I), mean zero.
* ``CirculantGaussian``   -- N(0, Sigma) with circulant Sigma given by its
  first row c(0..n-1), c(k) = c(n-k).
* ``NonnegativeTarget``   -- discrete atoms restricted to the nonnegative
  orthant (counting-channel targets).

Table indexing convention (documented bijection): a configuration is encoded
base q with coordinate 0 most significant, so index
``i = sum_k digit_k * q**(n-1-k)``.  On the hypercube digit 0 maps to +1 and
digit 1 maps to -1; index 0 is the all-plus configuration.

Probability tables must sum to one within ``NORM_TOL``; inputs farther off are
rejected rather than renormalized.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
import configparser
import csv
import io
import os

import numpy as np

from .errors import ValidationError

NORM_TOL = 1e-12

__all__ = [
    "NORM_TOL",
    "DiscreteTarget",
    "HypercubeTarget",
    "QaryTarget",
    "TwoGaussianMixture",
    "CirculantGaussian",
    "NonnegativeTarget",
    "sample_exact",
    "moments",
    "support",
    "index_to_digits",
    "digits_to_index",
    "hypercube_configs",
    "qary_configs",
    "target_to_config_text",
    "target_from_config_text",
    "target_from_section",
    "table_from_csv",
    "table_to_csv",
]


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def _check_table(table: np.ndarray, size: int) -> None:
    if table.shape != (size,):
        raise ValidationError(f"table must have {size} entries, got shape {table.shape}")
    if not np.all(np.isfinite(table)) or np.any(table < 0):
        raise ValidationError("table entries must be finite and nonnegative")
    if abs(float(table.sum()) - 1.0) > NORM_TOL:
        raise ValidationError(
            f"table sums to {table.sum()!r}; must be 1 within {NORM_TOL} (not renormalized)"
        )


# ---------------------------------------------------------------------------
# index <-> configuration bijections


def index_to_digits(index: int, n: int, q: int) -> np.ndarray:
    """Base-q digits of `index`, coordinate 0 most significant."""
    if not 0 <= index < q**n:
        raise ValidationError(f"index {index} out of range for q={q}, n={n}")
    digits = np.empty(n, dtype=np.int64)
    for k in range(n - 1, -1, -1):
        digits[k] = index % q
        index //= q
    return digits


def digits_to_index(digits: np.ndarray, q: int) -> int:
    digits = np.asarray(digits, dtype=np.int64)
    if np.any(digits < 0) or np.any(digits >= q):
        raise ValidationError("digit out of alphabet range")
    index = 0
    for d in digits:
        index = index * q + int(d)
    return index


@lru_cache(maxsize=32)
def qary_configs(n: int, q: int) -> np.ndarray:
    """All q^n configurations as an (q^n, n) int array in index order."""
    idx = np.arange(q**n)
    out = np.empty((q**n, n), dtype=np.int64)
    for k in range(n - 1, -1, -1):
        out[:, k] = idx % q
        idx = idx // q
    out.setflags(write=False)
    return out


@lru_cache(maxsize=32)
def hypercube_configs(n: int) -> np.ndarray:
    """All sign configurations, (2^n, n), index order; digit 0 -> +1."""
    signs = 1 - 2 * qary_configs(n, 2)
    signs = signs.astype(float)
    signs.setflags(write=False)
    return signs


# ---------------------------------------------------------------------------
# target types


@dataclass(frozen=True)
class DiscreteTarget:
    """Weighted atoms x_1..x_J in R^n.

    Parameters
    ----------
    atoms : (J, n) array of support points.
    weights : (J,) probability vector summing to one within ``NORM_TOL``.
    """

    atoms: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        atoms = np.atleast_2d(np.asarray(self.atoms, dtype=float))
        weights = np.asarray(self.weights, dtype=float).ravel()
        if atoms.ndim != 2 or atoms.shape[0] != weights.shape[0]:
            raise ValidationError("atoms and weights must agree in length")
        if atoms.shape[0] == 0:
            raise ValidationError("need at least one atom")
        if not np.all(np.isfinite(atoms)):
            raise ValidationError("atoms must be finite")
        _check_table(weights, weights.shape[0])
        object.__setattr__(self, "atoms", _freeze(atoms))
        object.__setattr__(self, "weights", _freeze(weights))

    @property
    def n(self) -> int:
        return self.atoms.shape[1]

    @property
    def natoms(self) -> int:
        return self.atoms.shape[0]


@dataclass(frozen=True)
class HypercubeTarget:
    """Probability table on {+1,-1}^n in the documented index order."""

    n: int
    table: np.ndarray

    def __post_init__(self):
        if not 1 <= self.n <= 20:
            raise ValidationError("hypercube dimension must be in 1..20")
        table = np.asarray(self.table, dtype=float).ravel()
        _check_table(table, 2**self.n)
        object.__setattr__(self, "table", _freeze(table))

    def configs(self) -> np.ndarray:
        return hypercube_configs(self.n)


@dataclass(frozen=True)
class QaryTarget:
    """Probability table on {0,...,q-1}^n in the documented index order."""

    n: int
    q: int
    table: np.ndarray

    def __post_init__(self):
        if self.q < 2:
            raise ValidationError("alphabet size q must be >= 2")
        if self.n < 1 or self.q**self.n > 2**20:
            raise ValidationError("q^n too large to tabulate")
        table = np.asarray(self.table, dtype=float).ravel()
        _check_table(table, self.q**self.n)
        object.__setattr__(self, "table", _freeze(table))

    def configs(self) -> np.ndarray:
        return qary_configs(self.n, self.q)


@dataclass(frozen=True)
class TwoGaussianMixture:
    """p N((1-p)a, I_n) + (1-p) N(-p a, I_n); overall mean is zero.

    The generic regime is p strictly inside (0, 1); the endpoints are accepted
    and degenerate to a single unit-covariance Gaussian.
    """

    n: int
    a: np.ndarray
    p: float

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float).ravel()
        if a.shape != (self.n,):
            raise ValidationError(f"a must have shape ({self.n},)")
        if not np.all(np.isfinite(a)):
            raise ValidationError("a must be finite")
        if not 0.0 <= self.p <= 1.0 or not np.isfinite(self.p):
            raise ValidationError("p must lie in [0, 1]")
        object.__setattr__(self, "a", _freeze(a))

    @property
    def mean_plus(self) -> np.ndarray:
        return (1.0 - self.p) * self.a

    @property
    def mean_minus(self) -> np.ndarray:
        return -self.p * self.a


@dataclass(frozen=True)
class CirculantGaussian:
    """N(0, Sigma) with Sigma circulant: Sigma[i, j] = c((i - j) mod n).

    The symbol sequence must satisfy c(k) = c(n-k) and have a nonnegative
    discrete Fourier spectrum (Sigma positive semidefinite).
    """

    n: int
    c: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float).ravel()
        if c.shape != (self.n,):
            raise ValidationError(f"c must have shape ({self.n},)")
        if not np.all(np.isfinite(c)):
            raise ValidationError("c must be finite")
        if not np.allclose(c, np.roll(c[::-1], 1), rtol=0, atol=1e-12):
            raise ValidationError("c must satisfy c(k) = c(n-k)")
        spec = np.fft.fft(c)
        if np.max(np.abs(spec.imag)) > 1e-9 * max(1.0, np.max(np.abs(spec.real))):
            raise ValidationError("symbol sequence has a non-real spectrum")
        lam = spec.real
        if lam.min() < -1e-10 * max(1.0, lam.max()):
            raise ValidationError("implied covariance is not positive semidefinite")
        object.__setattr__(self, "c", _freeze(c))

    @classmethod
    def rank_one(cls, n: int, alpha: float) -> "CirculantGaussian":
        """Sigma = I + alpha 11^T: c(0) = 1 + alpha, c(k) = alpha otherwise."""
        if alpha < 0:
            raise ValidationError("alpha must be nonnegative")
        c = np.full(n, float(alpha))
        c[0] += 1.0
        return cls(n, c)

    def spectrum(self) -> np.ndarray:
        """Fourier eigenvalues of Sigma (clipped at zero)."""
        return np.clip(np.fft.fft(self.c).real, 0.0, None)

    def sigma(self) -> np.ndarray:
        idx = (np.arange(self.n)[:, None] - np.arange(self.n)[None, :]) % self.n
        return self.c[idx]


@dataclass(frozen=True)
class NonnegativeTarget:
    """Discrete atoms constrained to the nonnegative orthant."""

    base: DiscreteTarget

    def __post_init__(self):
        if np.any(self.base.atoms < 0):
            raise ValidationError("atoms must be coordinatewise nonnegative")

    @property
    def atoms(self) -> np.ndarray:
        return self.base.atoms

    @property
    def weights(self) -> np.ndarray:
        return self.base.weights

    @property
    def n(self) -> int:
        return self.base.n


# ---------------------------------------------------------------------------
# support enumeration, sampling, moments


def support(target) -> tuple[np.ndarray, np.ndarray]:
    """(points, weights) for targets with enumerable support."""
    if isinstance(target, DiscreteTarget):
        return target.atoms, target.weights
    if isinstance(target, NonnegativeTarget):
        return target.atoms, target.weights
    if isinstance(target, HypercubeTarget):
        return target.configs(), target.table
    if isinstance(target, QaryTarget):
        return target.configs().astype(float), target.table
    raise ValidationError(f"target {type(target).__name__} has no enumerable support")


def _categorical(table: np.ndarray, rng: np.random.Generator, size: int) -> np.ndarray:
    # inverse-CDF draw; one uniform per sample
    cum = np.cumsum(table)
    cum[-1] = 1.0
    return np.searchsorted(cum, rng.random(size), side="right")


def sample_exact(target, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Exact draw(s) from the target law.

    Returns shape (n,) when size is None, else (size, n).  Stream consumption
    is fixed per family: table targets draw one uniform per sample; the
    mixture draws `size` uniforms then a (size, n) normal block; the circulant
    Gaussian draws a (size, n) normal block transformed in the Fourier domain.
    """
    squeeze = size is None
    m = 1 if squeeze else int(size)
    if isinstance(target, (DiscreteTarget, NonnegativeTarget)):
        atoms = target.atoms
        out = atoms[_categorical(target.weights, rng, m)]
    elif isinstance(target, HypercubeTarget):
        out = target.configs()[_categorical(target.table, rng, m)]
    elif isinstance(target, QaryTarget):
        out = target.configs()[_categorical(target.table, rng, m)]
    elif isinstance(target, TwoGaussianMixture):
        comp = rng.random(m) < target.p
        g = rng.standard_normal((m, target.n))
        means = np.where(comp[:, None], target.mean_plus[None, :], target.mean_minus[None, :])
        out = means + g
    elif isinstance(target, CirculantGaussian):
        lam = target.spectrum()
        g = rng.standard_normal((m, target.n))
        out = np.fft.ifft(np.sqrt(lam)[None, :] * np.fft.fft(g, axis=1), axis=1).real
    else:
        raise ValidationError(f"cannot sample target {type(target).__name__}")
    return out[0] if squeeze else out


def moments(target) -> tuple[np.ndarray, np.ndarray]:
    """Exact mean and covariance."""
    if isinstance(target, (DiscreteTarget, NonnegativeTarget, HypercubeTarget, QaryTarget)):
        pts, wts = support(target)
        pts = np.asarray(pts, dtype=float)
        mean = wts @ pts
        cov = (pts * wts[:, None]).T @ pts - np.outer(mean, mean)
        return mean, cov
    if isinstance(target, TwoGaussianMixture):
        mean = np.zeros(target.n)
        cov = np.eye(target.n) + target.p * (1.0 - target.p) * np.outer(target.a, target.a)
        return mean, cov
    if isinstance(target, CirculantGaussian):
        return np.zeros(target.n), target.sigma()
    raise ValidationError(f"no moments for target {type(target).__name__}")


# ---------------------------------------------------------------------------
# serialization: structured key-value text with a [target] section


def _fmt_vec(v: np.ndarray) -> str:
    return ",".join(format(x, ".17g") for x in np.asarray(v).ravel())


def _parse_vec(s: str) -> np.ndarray:
    return np.array([float(tok) for tok in s.replace(";", ",").split(",") if tok.strip() != ""])


def table_to_csv(path: str, table: np.ndarray) -> None:
    """Write a probability table as (index, probability) rows."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["index", "probability"])
        for i, p in enumerate(np.asarray(table).ravel()):
            w.writerow([i, format(p, ".17g")])


def table_from_csv(path: str, size: int) -> np.ndarray:
    """Read a probability table written by :func:`table_to_csv`."""
    table = np.full(size, np.nan)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if rows and rows[0][:1] == ["index"]:
        rows = rows[1:]
    for row in rows:
        if not row:
            continue
        i = int(row[0])
        if not 0 <= i < size:
            raise ValidationError(f"table row index {i} out of range 0..{size - 1}")
        if not np.isnan(table[i]):
            raise ValidationError(f"duplicate table row for index {i}")
        table[i] = float(row[1])
    if np.any(np.isnan(table)):
        raise ValidationError("table CSV does not cover every configuration index")
    return table


def target_to_config_text(target) -> str:
    """Serialize a target to key-value text with a [target] section."""
    cp = configparser.ConfigParser()
    cp.add_section("target")
    sec = cp["target"]
    if isinstance(target, NonnegativeTarget):
        sec["kind"] = "nonnegative"
        sec["atoms"] = ";".join(_fmt_vec(row) for row in target.atoms)
        sec["weights"] = _fmt_vec(target.weights)
    elif isinstance(target, DiscreteTarget):
        sec["kind"] = "discrete"
        sec["atoms"] = ";".join(_fmt_vec(row) for row in target.atoms)
        sec["weights"] = _fmt_vec(target.weights)
    elif isinstance(target, HypercubeTarget):
        sec["kind"] = "hypercube"
        sec["n"] = str(target.n)
        sec["table"] = _fmt_vec(target.table)
    elif isinstance(target, QaryTarget):
        sec["kind"] = "qary"
        sec["n"] = str(target.n)
        sec["q"] = str(target.q)
        sec["table"] = _fmt_vec(target.table)
    elif isinstance(target, TwoGaussianMixture):
        sec["kind"] = "mixture"
        sec["n"] = str(target.n)
        sec["a"] = _fmt_vec(target.a)
        sec["p"] = format(target.p, ".17g")
    elif isinstance(target, CirculantGaussian):
        sec["kind"] = "circulant"
        sec["n"] = str(target.n)
        sec["c"] = _fmt_vec(target.c)
    else:
        raise ValidationError(f"cannot serialize target {type(target).__name__}")
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()


def target_from_section(sec, base_dir: str = "."):
    """Build a target from a [target] config section (mapping-like)."""
    kind = sec.get("kind", "").strip().lower()
    if kind in ("discrete", "nonnegative"):
        atoms = np.array([_parse_vec(row) for row in sec["atoms"].split(";") if row.strip()])
        weights = _parse_vec(sec["weights"])
        base = DiscreteTarget(atoms, weights)
        return NonnegativeTarget(base) if kind == "nonnegative" else base
    if kind in ("hypercube", "qary"):
        n = int(sec["n"])
        q = int(sec.get("q", "2")) if kind == "qary" else 2
        size = q**n
        if "table_csv" in sec:
            table = table_from_csv(os.path.join(base_dir, sec["table_csv"]), size)
        elif "table" in sec:
            table = _parse_vec(sec["table"])
        else:
            raise ValidationError("table targets need `table` or `table_csv`")
        return QaryTarget(n, q, table) if kind == "qary" else HypercubeTarget(n, table)
    if kind == "mixture":
        n = int(sec["n"])
        a = _parse_vec(sec["a"])
        if a.size == 1:
            a = np.full(n, float(a[0]))
        return TwoGaussianMixture(n, a, float(sec["p"]))
    if kind == "circulant":
        n = int(sec["n"])
        if "alpha" in sec:
            return CirculantGaussian.rank_one(n, float(sec["alpha"]))
        return CirculantGaussian(n, _parse_vec(sec["c"]))
    raise ValidationError(f"unknown target kind {kind!r}")


def target_from_config_text(text: str, base_dir: str = "."):
    cp = configparser.ConfigParser()
    cp.read_string(text)
    if not cp.has_section("target"):
        raise ValidationError("config text lacks a [target] section")
    return target_from_section(cp["target"], base_dir)
