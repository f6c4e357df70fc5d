"""Euler-discretized samplers for the Gaussian observation channels.

All samplers run the explicit scheme

    Y_{k+1} = Y_k + drift(Y_k, t_k) dt_k + (noise scale) sqrt(dt_k) G_k

and decode the final state through the denoiser.  Chains are independent;
chain i draws all of its randomness from ``chain_stream(seed, i)``, so results
are bit-reproducible and do not depend on how chains are grouped into memory
blocks (block_bytes only bounds peak memory).  Stream consumption per chain is
part of each sampler's contract:

    simulate_isotropic / simulate_anisotropic / simulate_linear_observation:
        one standard_normal((steps, d)) block
    simulate_reverse_ou:
        standard_normal(d) for the initial state, then standard_normal((steps, d))
    simulate_halfspace_mixture:
        one uniform (component label), then standard_normal((steps, d))

Snapshots record the pre-step state at the grid node nearest each requested
time: y_value is the observation-scale state, x_value the drift/denoised
value at that node (for the linear channel this lives in observation space).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .denoisers import CHANNEL_ANISO, CHANNEL_ISO, CHANNEL_LINEAR, Denoiser
from .errors import ChainFailureError, ValidationError
from .grids import TimeGrid
from .streams import block_sizes, chain_stream

__all__ = [
    "ChainResult",
    "SnapshotSet",
    "forward_observation_path",
    "observation_path_from_noise",
    "simulate_isotropic",
    "simulate_anisotropic",
    "simulate_linear_observation",
    "simulate_reverse_ou",
    "simulate_halfspace_mixture",
    "estimate_split",
    "reverse_ou_coefficients",
]

_PSD_TOL = 1e-10


@dataclass(frozen=True)
class SnapshotSet:
    """States recorded at selected grid nodes, stacked over chains."""

    node_indices: np.ndarray  # (S,) indices into grid.nodes, increasing
    times: np.ndarray  # (S,)
    y: np.ndarray  # (S, B, d) observation-scale states
    x: np.ndarray  # (S, B, d) drift / denoised values at the same nodes


@dataclass(frozen=True)
class ChainResult:
    """Final states of a batch of chains plus optional snapshots.

    x is the denoiser-based sample (m(Y_T; T), or the decode documented by the
    sampler); y_final is the raw final observation state.
    """

    x: np.ndarray
    y_final: np.ndarray
    seed: int
    grid: TimeGrid
    chain_ids: np.ndarray
    snapshots: SnapshotSet | None = None
    x_pinv: np.ndarray | None = None  # pseudoinverse decode (linear channel only)
    labels: np.ndarray | None = None  # component labels (half-space sampler only)

    @property
    def n_chains(self) -> int:
        return self.x.shape[0]

    @property
    def step_count(self) -> int:
        return self.grid.steps


# ---------------------------------------------------------------------------
# forward process


def observation_path_from_noise(x: np.ndarray, grid: TimeGrid, noise: np.ndarray) -> np.ndarray:
    """Path Y_{t_k} = t_k x + W_{t_k} built from given unit increments.

    x: (n,) or (B, n); noise: matching (steps, n) or (B, steps, n).
    Returns (steps+1, n) or (B, steps+1, n), node 0 included.
    """
    if grid.nodes[0] != 0.0:
        raise ValidationError("forward observation path requires a grid starting at t=0")
    x = np.asarray(x, dtype=float)
    noise = np.asarray(noise, dtype=float)
    single = x.ndim == 1
    xb = x[None, :] if single else x
    nb = noise[None, :, :] if single else noise
    if nb.shape != (xb.shape[0], grid.steps, xb.shape[1]):
        raise ValidationError("noise shape does not match (chains, steps, dim)")
    deltas = grid.deltas
    incr = xb[:, None, :] * deltas[None, :, None] + np.sqrt(deltas)[None, :, None] * nb
    path = np.concatenate([np.zeros_like(xb)[:, None, :], np.cumsum(incr, axis=1)], axis=1)
    return path[0] if single else path


def forward_observation_path(
    x: np.ndarray, grid: TimeGrid, rng: np.random.Generator
) -> np.ndarray:
    """Sample Y_t = t x + W_t at the grid nodes (one standard_normal call)."""
    x = np.asarray(x, dtype=float)
    shape = (grid.steps, x.shape[-1]) if x.ndim == 1 else (x.shape[0], grid.steps, x.shape[1])
    return observation_path_from_noise(x, grid, rng.standard_normal(shape))


# ---------------------------------------------------------------------------
# shared machinery


def _resolve_ids(n_chains: int, chain_ids) -> np.ndarray:
    if chain_ids is None:
        if n_chains < 0:
            raise ValidationError("n_chains must be nonnegative")
        return np.arange(n_chains, dtype=np.int64)
    ids = np.atleast_1d(np.asarray(chain_ids, dtype=np.int64))
    return ids


def _noise_for(seed: int, stream_ids: np.ndarray, steps: int, dim: int, init_dim: int = 0):
    """Per-chain noise blocks; optional leading draw consumed before the block."""
    lead = np.empty((stream_ids.size, init_dim)) if init_dim else None
    out = np.empty((stream_ids.size, steps, dim))
    for j, cid in enumerate(stream_ids):
        g = chain_stream(seed, int(cid))
        if init_dim:
            lead[j] = g.standard_normal(init_dim)
        out[j] = g.standard_normal((steps, dim))
    return lead, out


def _snapshot_plan(grid: TimeGrid, snapshot_times, n_chains: int, dim: int):
    if snapshot_times is None:
        return None, None, None, None
    req = np.atleast_1d(np.asarray(snapshot_times, dtype=float))
    idx = np.unique([int(np.argmin(np.abs(grid.nodes - t))) for t in req])
    snap_map = {int(k): s for s, k in enumerate(idx)}
    shape = (idx.size, n_chains, dim)
    return snap_map, idx, np.empty(shape), np.empty(shape)


def _check_drift(m: np.ndarray, k: int, stream_ids: np.ndarray):
    ok = np.isfinite(m).all(axis=tuple(range(1, m.ndim)))
    if not ok.all():
        bad = int(stream_ids[int(np.argmin(ok))])
        raise ChainFailureError(f"non-finite drift in chain {bad}", step=k)


def _diffusion_loop(drift, grid, noise, y, pos, sid, snap_map, snap_y, snap_x):
    """Unit-noise Euler loop; drift(y, k) -> (B, d). Returns final y."""
    deltas = grid.deltas
    for k in range(grid.steps):
        m = drift(y, k)
        _check_drift(m, k, sid)
        if snap_map is not None and k in snap_map:
            s = snap_map[k]
            snap_y[s, pos] = y
            snap_x[s, pos] = m
        y = y + m * deltas[k] + np.sqrt(deltas[k]) * noise[:, k, :]
    return y


def _finish_snapshots(snap_map, snap_idx, snap_y, snap_x, grid, pos, y, x):
    if snap_map is not None and grid.steps in snap_map:
        s = snap_map[grid.steps]
        snap_y[s, pos] = y
        snap_x[s, pos] = x
    if snap_idx is None:
        return None
    return SnapshotSet(snap_idx, grid.nodes[snap_idx], snap_y, snap_x)


def _blocks(ids: np.ndarray, per_chain_bytes: float, block_bytes):
    start = 0
    sizes = (
        block_sizes(ids.size, per_chain_bytes)
        if block_bytes is None
        else block_sizes(ids.size, per_chain_bytes, block_bytes)
    )
    for size in sizes:
        pos = np.arange(start, start + size)
        yield pos, ids[pos]
        start += size


# ---------------------------------------------------------------------------
# isotropic channel


def simulate_isotropic(
    denoiser: Denoiser,
    grid: TimeGrid,
    n_chains: int,
    seed: int,
    snapshot_times=None,
    chain_ids=None,
    block_bytes=None,
) -> ChainResult:
    """Generative sampler dY = m(Y;t) dt + dB from Y_0 = 0, decoded as m(Y_T;T).

    chain_ids overrides the default stream indices 0..n_chains-1 (the count is
    then len(chain_ids)); chain i is bit-identical whether run alone or batched.
    """
    if denoiser.channel != CHANNEL_ISO:
        raise ValidationError(f"need an isotropic-gaussian denoiser, got {denoiser.channel}")
    if grid.nodes[0] != 0.0:
        raise ValidationError("isotropic sampler starts at t=0; grid must include it")
    n = denoiser.n_obs
    nodes = grid.nodes
    ids = _resolve_ids(n_chains, chain_ids)
    x_out = np.empty((ids.size, n))
    y_out = np.empty((ids.size, n))
    snap_map, snap_idx, snap_y, snap_x = _snapshot_plan(grid, snapshot_times, ids.size, n)
    snaps = None
    for pos, sid in _blocks(ids, grid.steps * n * 8, block_bytes):
        _, noise = _noise_for(seed, sid, grid.steps, n)
        y = _diffusion_loop(
            lambda yy, k: denoiser(yy, nodes[k]),
            grid,
            noise,
            np.zeros((pos.size, n)),
            pos,
            sid,
            snap_map,
            snap_y,
            snap_x,
        )
        x = denoiser(y, nodes[-1])
        x_out[pos], y_out[pos] = x, y
        snaps = _finish_snapshots(snap_map, snap_idx, snap_y, snap_x, grid, pos, y, x)
    return ChainResult(x_out, y_out, seed, grid, ids, snapshots=snaps)


# ---------------------------------------------------------------------------
# anisotropic channel


def _psd_root(q: np.ndarray, what: str) -> np.ndarray:
    if not np.allclose(q, q.T, atol=1e-10):
        raise ValidationError(f"{what} is not symmetric")
    w, v = np.linalg.eigh(q)
    if w.min() < -_PSD_TOL:
        raise ValidationError(f"{what} is not PSD (min eigenvalue {w.min():.3e})")
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.T


def simulate_anisotropic(
    denoiser: Denoiser,
    q_mat,
    grid: TimeGrid,
    n_chains: int,
    seed: int,
    snapshot_times=None,
    chain_ids=None,
    block_bytes=None,
) -> ChainResult:
    """Sampler dY = Q(t) m(Y; Omega(t)) dt + Q(t)^{1/2} dB, Omega' = Q.

    q_mat: None or exact identity for the isotropic specialization (then the
    arithmetic, streams, and outputs are bit-identical to simulate_isotropic
    on the matching denoiser), a constant scalar/PSD matrix (Omega in closed
    form Q t_k, the exact value of the left-endpoint rule), or a callable
    t -> PSD matrix (Omega accumulated by the same left-endpoint rule as the
    Euler step).
    """
    if denoiser.channel not in (CHANNEL_ANISO, CHANNEL_ISO):
        raise ValidationError(f"need an anisotropic or isotropic denoiser, got {denoiser.channel}")
    if grid.nodes[0] != 0.0:
        raise ValidationError("anisotropic sampler starts at t=0; grid must include it")
    n = denoiser.n_obs
    nodes, deltas = grid.nodes, grid.deltas
    ids = _resolve_ids(n_chains, chain_ids)

    q_const = None
    if q_mat is None:
        identity = True
    elif callable(q_mat):
        identity = False
    else:
        q_arr = np.asarray(q_mat, dtype=float)
        if q_arr.ndim == 0:
            if q_arr < 0:
                raise ValidationError("scalar Q must be nonnegative")
            identity = float(q_arr) == 1.0
            q_const = float(q_arr)
        else:
            if q_arr.shape != (n, n):
                raise ValidationError("Q must be n x n")
            identity = np.array_equal(q_arr, np.eye(n))
            q_const = q_arr

    x_out = np.empty((ids.size, n))
    y_out = np.empty((ids.size, n))
    snap_map, snap_idx, snap_y, snap_x = _snapshot_plan(grid, snapshot_times, ids.size, n)
    snaps = None

    if identity:
        # exact specialization: same stream use and same update expression as
        # the isotropic sampler, with scalar Omega(t_k) = t_k
        for pos, sid in _blocks(ids, grid.steps * n * 8, block_bytes):
            _, noise = _noise_for(seed, sid, grid.steps, n)
            y = _diffusion_loop(
                lambda yy, k: denoiser(yy, nodes[k]),
                grid,
                noise,
                np.zeros((pos.size, n)),
                pos,
                sid,
                snap_map,
                snap_y,
                snap_x,
            )
            x = denoiser(y, nodes[-1])
            x_out[pos], y_out[pos] = x, y
            snaps = _finish_snapshots(snap_map, snap_idx, snap_y, snap_x, grid, pos, y, x)
        return ChainResult(x_out, y_out, seed, grid, ids, snapshots=snaps)

    if denoiser.channel != CHANNEL_ANISO:
        raise ValidationError("non-identity Q needs a denoiser that accepts Omega")

    if callable(q_mat):
        q_steps = [np.asarray(q_mat(t), dtype=float) for t in nodes[:-1]]
        roots = [_psd_root(q, f"Q(t={t:g})") for q, t in zip(q_steps, nodes[:-1])]
        omegas = [np.zeros((n, n))]
        for q, d in zip(q_steps, deltas):
            omegas.append(omegas[-1] + q * d)
    elif np.isscalar(q_const):
        q_steps = [q_const] * grid.steps
        roots = [np.sqrt(q_const)] * grid.steps
        omegas = [q_const * t for t in nodes]
    else:
        root = _psd_root(q_const, "Q")
        q_steps = [q_const] * grid.steps
        roots = [root] * grid.steps
        omegas = [q_const * t for t in nodes]

    for pos, sid in _blocks(ids, grid.steps * n * 8, block_bytes):
        _, noise = _noise_for(seed, sid, grid.steps, n)
        y = np.zeros((pos.size, n))
        for k in range(grid.steps):
            m = denoiser(y, omegas[k])
            _check_drift(m, k, sid)
            if snap_map is not None and k in snap_map:
                s = snap_map[k]
                snap_y[s, pos] = y
                snap_x[s, pos] = m
            g = noise[:, k, :]
            if np.isscalar(q_steps[k]):
                y = y + q_steps[k] * m * deltas[k] + roots[k] * np.sqrt(deltas[k]) * g
            else:
                # Q symmetric, so row-vector application m Q equals (Q m^T)^T
                y = y + (m @ q_steps[k]) * deltas[k] + np.sqrt(deltas[k]) * (g @ roots[k])
        x = denoiser(y, omegas[-1])
        x_out[pos], y_out[pos] = x, y
        snaps = _finish_snapshots(snap_map, snap_idx, snap_y, snap_x, grid, pos, y, x)
    return ChainResult(x_out, y_out, seed, grid, ids, snapshots=snaps)


# ---------------------------------------------------------------------------
# linear observation channel


def simulate_linear_observation(
    denoiser: Denoiser,
    a_mat: np.ndarray,
    grid: TimeGrid,
    n_chains: int,
    seed: int,
    snapshot_times=None,
    drift_decode: str = "pinv",
    chain_ids=None,
    block_bytes=None,
) -> ChainResult:
    """Sampler dY = m_A(Y;t) dt + dB in observation space, with two decodes.

    The drift must estimate A x from the observation (exact posterior mean or
    a structured guess).  Returned fields: x_pinv is the model-free decode
    pinv(A) Y_T / t_m; x is the drift-based decode, either pinv(A) m(Y_T;T)
    (drift_decode="pinv") or, when the trailing rows of A are the identity,
    the corresponding block of the final drift (drift_decode="block").
    """
    a_mat = np.asarray(a_mat, dtype=float)
    if a_mat.ndim != 2:
        raise ValidationError("A must be a matrix")
    d_obs, n = a_mat.shape
    if denoiser.channel not in (CHANNEL_LINEAR, CHANNEL_ISO):
        raise ValidationError(f"need a linear-channel denoiser, got {denoiser.channel}")
    if denoiser.n_obs != d_obs:
        raise ValidationError("denoiser dimension does not match rows of A")
    if grid.nodes[0] != 0.0:
        raise ValidationError("linear-observation sampler starts at t=0; grid must include it")
    if np.linalg.matrix_rank(a_mat) < n:
        raise ValidationError("pseudoinverse decode needs A of full column rank")
    if drift_decode == "block":
        if d_obs < n or not np.array_equal(a_mat[d_obs - n :], np.eye(n)):
            raise ValidationError("block decode needs the trailing rows of A to be the identity")
    elif drift_decode != "pinv":
        raise ValidationError("drift_decode must be 'pinv' or 'block'")
    pinv = np.linalg.pinv(a_mat)
    nodes = grid.nodes
    ids = _resolve_ids(n_chains, chain_ids)

    x_out = np.empty((ids.size, n))
    xp_out = np.empty((ids.size, n))
    y_out = np.empty((ids.size, d_obs))
    snap_map, snap_idx, snap_y, snap_x = _snapshot_plan(grid, snapshot_times, ids.size, d_obs)
    snaps = None
    for pos, sid in _blocks(ids, grid.steps * d_obs * 8, block_bytes):
        _, noise = _noise_for(seed, sid, grid.steps, d_obs)
        y = _diffusion_loop(
            lambda yy, k: denoiser(yy, nodes[k]),
            grid,
            noise,
            np.zeros((pos.size, d_obs)),
            pos,
            sid,
            snap_map,
            snap_y,
            snap_x,
        )
        m_fin = denoiser(y, nodes[-1])
        x = m_fin[:, d_obs - n :] if drift_decode == "block" else m_fin @ pinv.T
        x_out[pos], y_out[pos] = x, y
        xp_out[pos] = (y / nodes[-1]) @ pinv.T
        snaps = _finish_snapshots(snap_map, snap_idx, snap_y, snap_x, grid, pos, y, m_fin)
    return ChainResult(x_out, y_out, seed, grid, ids, snapshots=snaps, x_pinv=xp_out)


# ---------------------------------------------------------------------------
# reverse-time Ornstein-Uhlenbeck form


def reverse_ou_coefficients(t: float):
    """(drift coefficient on ybar, squared noise scale, observation scale).

    The normalized state ybar = Y_t / h(t), h = sqrt(t(1+t)), solves
    dybar = [a(t) ybar + m(h ybar; t)/h] dt + sqrt(g(t)) dB with
    a = -(1+2t)/(2t(1+t)) and g = 1/(t(1+t)); a is pinned by the identity
    h'(t) ybar + h(t) F(t, ybar) = m(h ybar; t) and by N(0, I) stationarity
    under the standard normal prior.
    """
    h2 = t * (1.0 + t)
    return -(1.0 + 2.0 * t) / (2.0 * h2), 1.0 / h2, np.sqrt(h2)


def simulate_reverse_ou(
    denoiser: Denoiser,
    grid: TimeGrid,
    n_chains: int,
    seed: int,
    snapshot_times=None,
    chain_ids=None,
    block_bytes=None,
) -> ChainResult:
    """Euler sampler for the normalized (OU-form) process, started at N(0, I).

    y_final is reported on the observation scale h(t_m) ybar; x = m(y_final; t_m).
    """
    if denoiser.channel != CHANNEL_ISO:
        raise ValidationError(f"need an isotropic-gaussian denoiser, got {denoiser.channel}")
    if grid.nodes[0] <= 0.0:
        raise ValidationError("reverse OU undefined at t=0")
    n = denoiser.n_obs
    nodes, deltas = grid.nodes, grid.deltas
    coeff = [reverse_ou_coefficients(t) for t in nodes]
    ids = _resolve_ids(n_chains, chain_ids)

    x_out = np.empty((ids.size, n))
    y_out = np.empty((ids.size, n))
    snap_map, snap_idx, snap_y, snap_x = _snapshot_plan(grid, snapshot_times, ids.size, n)
    snaps = None
    for pos, sid in _blocks(ids, (grid.steps + 1) * n * 8, block_bytes):
        ybar, noise = _noise_for(seed, sid, grid.steps, n, init_dim=n)
        for k in range(grid.steps):
            a, g, h = coeff[k]
            m = denoiser(h * ybar, nodes[k])
            _check_drift(m, k, sid)
            if snap_map is not None and k in snap_map:
                s = snap_map[k]
                snap_y[s, pos] = h * ybar
                snap_x[s, pos] = m
            ybar = ybar + (a * ybar + m / h) * deltas[k] + np.sqrt(g * deltas[k]) * noise[:, k, :]
        h_fin = coeff[-1][2]
        y = h_fin * ybar
        x = denoiser(y, nodes[-1])
        x_out[pos], y_out[pos] = x, y
        snaps = _finish_snapshots(snap_map, snap_idx, snap_y, snap_x, grid, pos, y, x)
    return ChainResult(x_out, y_out, seed, grid, ids, snapshots=snaps)


# ---------------------------------------------------------------------------
# two-component pipeline


def estimate_split(samples: np.ndarray):
    """Principal direction of the uncentered second moment and its halfspace mass.

    Returns (v, q_hat): v the top eigenvector of sum x x^T / N, q_hat the
    fraction of samples with <x, v> >= 0.  The sign of v is fixed so that
    q_hat >= 1/2; on an exact tie the first nonzero coordinate of v is made
    positive (keeps the output platform-independent).
    """
    samples = np.asarray(samples, dtype=float)
    if samples.ndim != 2 or samples.shape[0] < 1:
        raise ValidationError("need a (N, n) sample array with N >= 1")
    if not np.any(samples):
        raise ValidationError("all samples are zero; split direction undefined")
    second = samples.T @ samples / samples.shape[0]
    _, vecs = np.linalg.eigh(second)
    v = vecs[:, -1]
    proj = samples @ v
    q_plus = float(np.mean(proj >= 0))
    q_minus = float(np.mean(-proj >= 0))
    if q_minus > q_plus:
        return -v, q_minus
    if q_plus == q_minus:
        lead = v[np.flatnonzero(v)[0]]
        if lead < 0:
            v = -v
    return v, q_plus


def simulate_halfspace_mixture(
    q_hat: float,
    denoiser_plus: Denoiser,
    denoiser_minus: Denoiser,
    grid: TimeGrid,
    n_chains: int,
    seed: int,
    snapshot_times=None,
    chain_ids=None,
    block_bytes=None,
) -> ChainResult:
    """Two-component sampler: draw S = +1 w.p. q_hat, then run the isotropic
    chain with the component denoiser m_S and decode X_T = m_S(Y_T; T).

    labels holds the drawn S per chain.
    """
    if not 0.0 <= q_hat <= 1.0:
        raise ValidationError("q_hat must be a probability")
    for den in (denoiser_plus, denoiser_minus):
        if den.channel != CHANNEL_ISO:
            raise ValidationError("component denoisers must be isotropic-gaussian")
    if denoiser_plus.n_obs != denoiser_minus.n_obs:
        raise ValidationError("component denoisers disagree on dimension")
    if grid.nodes[0] != 0.0:
        raise ValidationError("isotropic sampler starts at t=0; grid must include it")
    n = denoiser_plus.n_obs
    nodes = grid.nodes
    ids = _resolve_ids(n_chains, chain_ids)

    x_out = np.empty((ids.size, n))
    y_out = np.empty((ids.size, n))
    labels = np.empty(ids.size, dtype=int)
    snap_map, snap_idx, snap_y, snap_x = _snapshot_plan(grid, snapshot_times, ids.size, n)
    snaps = None
    for pos, sid in _blocks(ids, (grid.steps + 1) * n * 8, block_bytes):
        noise = np.empty((pos.size, grid.steps, n))
        lab = np.empty(pos.size, dtype=int)
        for j, cid in enumerate(sid):
            g = chain_stream(seed, int(cid))
            lab[j] = 1 if g.random() < q_hat else -1
            noise[j] = g.standard_normal((grid.steps, n))
        labels[pos] = lab
        for sign, den in ((1, denoiser_plus), (-1, denoiser_minus)):
            side = np.flatnonzero(lab == sign)
            if side.size == 0:
                continue
            y = _diffusion_loop(
                lambda yy, k: den(yy, nodes[k]),
                grid,
                noise[side],
                np.zeros((side.size, n)),
                pos[side],
                sid[side],
                snap_map,
                snap_y,
                snap_x,
            )
            x = den(y, nodes[-1])
            x_out[pos[side]], y_out[pos[side]] = x, y
            snaps = _finish_snapshots(
                snap_map, snap_idx, snap_y, snap_x, grid, pos[side], y, x
            )
    return ChainResult(x_out, y_out, seed, grid, ids, snapshots=snaps, labels=labels)
