"""Propagation of single-excitation amplitudes and derived observables.

The equation of motion dc/dt = V c is linear with constant V, so the
primary propagator is exact stepping with the matrix exponential: each
distinct grid spacing Delta gets one exp(V * Delta) (scaling-and-squaring
with diagonal Pade, via scipy), and states are advanced by repeated
application.  A uniform grid therefore costs a single small expm.

Every propagation can be cross-checked against an independently coded
adaptive embedded Runge-Kutta integrator (Dormand-Prince 5(4)); the two
backends disagreeing beyond 1e-8 in max norm raises IntegrityError, on
the theory that silent numerical corruption is worse than a crash.

Observables: site populations P_m = |c_m|^2, total population P_tot,
the emitted intensity I_tot = -c^dag (V + V^dag) c = -dP_tot/dt (always
>= 0 because -(V + V^dag) is positive semidefinite), pair coherences,
and the t -> infinity state by spectral projection onto the null space
of V.

Populations below 1e-300 are clamped to zero and flagged, so extreme
subradiance studies cannot leak denormals into downstream analysis.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import IO, Optional

import numpy as np
from scipy.linalg import expm

from .chain import CouplingMatrix
from .errors import ConfigError, IntegrityError, NumericsError

__all__ = [
    "StateVector",
    "Trajectory",
    "SteadyStateResult",
    "uniform_excitation",
    "uniform_grid",
    "log_grid",
    "propagate",
    "rk_propagate",
    "intensity",
    "steady_state",
    "long_time_populations",
    "write_trajectory_csv",
    "write_trajectory_json",
]

_UNDERFLOW_FLOOR = 1e-300
_NORM_SLACK = 1e-9
_CHECK_SEED = 0x5EED


@dataclass(frozen=True)
class StateVector:
    """Complex site amplitudes at one instant; norm**2 <= 1 (+ slack)."""

    amplitudes: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 1 or amps.size < 1:
            raise ConfigError("amplitudes must be a non-empty 1D array")
        norm_sq = float(np.sum(np.abs(amps) ** 2))
        if norm_sq > 1.0 + _NORM_SLACK:
            raise ConfigError(
                f"state norm^2 = {norm_sq!r} exceeds 1 beyond tolerance")
        object.__setattr__(self, "amplitudes", amps)
        amps.flags.writeable = False

    @property
    def n_atoms(self) -> int:
        return self.amplitudes.size

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @property
    def total_population(self) -> float:
        return float(np.sum(self.populations))


def uniform_excitation(n_atoms: int) -> StateVector:
    """The symmetric state c_m = 1/sqrt(N) shared by the whole chain."""
    if n_atoms < 1:
        raise ConfigError(f"n_atoms must be >= 1, got {n_atoms!r}")
    return StateVector(np.full(n_atoms, 1.0 / math.sqrt(n_atoms), dtype=complex))


def uniform_grid(horizon: float = 20.0, points: int = 2000) -> np.ndarray:
    """Uniformly spaced times [0, horizon] (times in units of 1/gamma)."""
    if not math.isfinite(horizon) or horizon <= 0.0:
        raise ConfigError(f"horizon must be positive, got {horizon!r}")
    if points < 2:
        raise ConfigError(f"points must be >= 2, got {points!r}")
    return np.linspace(0.0, horizon, points)


def log_grid(horizon: float = 1e4, points_per_decade: int = 400,
             t_min: float = 1e-2) -> np.ndarray:
    """t = 0 followed by log-spaced times from t_min to horizon."""
    if not (0.0 < t_min < horizon) or not math.isfinite(horizon):
        raise ConfigError(
            f"need 0 < t_min < horizon, got t_min={t_min!r} horizon={horizon!r}")
    if points_per_decade < 1:
        raise ConfigError("points_per_decade must be >= 1")
    decades = math.log10(horizon / t_min)
    count = max(2, int(round(decades * points_per_decade)) + 1)
    times = np.logspace(math.log10(t_min), math.log10(horizon), count)
    times[-1] = horizon
    return np.concatenate(([0.0], times))


@dataclass(frozen=True)
class Trajectory:
    """Propagated amplitudes plus derived observables on a time grid.

    times has shape (K,), amplitudes (K, N).  populations are clamped at
    the underflow floor; total and intensity derive from the clamped and
    raw amplitudes respectively.  gamma records the time-unit rate of the
    generating matrix so detector defaults can scale with it.
    """

    times: np.ndarray
    amplitudes: np.ndarray
    populations: np.ndarray
    total: np.ndarray
    intensity: np.ndarray
    gamma: float
    underflow_clamped: bool = False

    def __len__(self) -> int:
        return self.times.size

    @property
    def n_atoms(self) -> int:
        return self.amplitudes.shape[1]

    def population(self, site: int) -> np.ndarray:
        """P_site(t) for a 1-based site index."""
        if not 1 <= site <= self.n_atoms:
            raise ConfigError(f"site must be in 1..{self.n_atoms}, got {site}")
        return self.populations[:, site - 1]

    def coherence(self, site_a: int, site_b: int) -> np.ndarray:
        """C_ab(t) = c_a(t) * conj(c_b(t)) for 1-based site indices."""
        for s in (site_a, site_b):
            if not 1 <= s <= self.n_atoms:
                raise ConfigError(f"site must be in 1..{self.n_atoms}, got {s}")
        return self.amplitudes[:, site_a - 1] * np.conj(self.amplitudes[:, site_b - 1])

    def state_at(self, index: int) -> StateVector:
        return StateVector(self.amplitudes[index], time=float(self.times[index]))

    def final_state(self) -> StateVector:
        return self.state_at(len(self) - 1)


def _validate_grid(grid: np.ndarray) -> np.ndarray:
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or g.size < 2:
        raise ConfigError("grid must be a 1D array with at least 2 points")
    if g[0] != 0.0:
        raise ConfigError(f"grid must start at 0, got {g[0]!r}")
    if np.any(np.diff(g) <= 0.0):
        raise ConfigError("grid must be strictly increasing")
    if not np.all(np.isfinite(g)):
        raise ConfigError("grid must be finite")
    return g


def _observables(matrix: CouplingMatrix, states: np.ndarray
                 ) -> tuple[np.ndarray, np.ndarray, np.ndarray, bool]:
    populations = np.abs(states) ** 2
    clamp = populations != 0.0
    clamp &= populations < _UNDERFLOW_FLOOR
    clamped = bool(np.any(clamp))
    if clamped:
        populations = populations.copy()
        populations[clamp] = 0.0
    total = populations.sum(axis=1)
    emission = matrix.dissipator()
    intensity_arr = np.einsum("ki,ij,kj->k", states.conj(), emission, states).real
    return populations, total, intensity_arr, clamped


def propagate(matrix: CouplingMatrix, initial: StateVector, grid,
              *, cross_check: bool = True, check_tol: float = 1e-8,
              max_check_points: int = 10) -> Trajectory:
    """Evolve the initial state to every grid time via matrix exponentials.

    With cross_check on (the default), up to max_check_points grid times
    are re-solved by the adaptive Runge-Kutta backend and compared in max
    norm; disagreement beyond check_tol raises IntegrityError.
    """
    grid = _validate_grid(grid)
    if initial.n_atoms != matrix.n_atoms:
        raise ConfigError(
            f"state has {initial.n_atoms} sites but matrix has {matrix.n_atoms}")
    v = matrix.entries
    states = np.empty((grid.size, matrix.n_atoms), dtype=complex)
    states[0] = initial.amplitudes
    steppers: dict[float, np.ndarray] = {}
    current = initial.amplitudes
    for k, delta in enumerate(np.diff(grid)):
        step = steppers.get(delta)
        if step is None:
            step = expm(v * delta)
            steppers[delta] = step
        current = step @ current
        states[k + 1] = current

    if cross_check and grid.size > 1:
        rng = np.random.default_rng(_CHECK_SEED)
        n_check = min(max_check_points, grid.size - 1)
        picks = np.sort(rng.choice(np.arange(1, grid.size), size=n_check,
                                   replace=False))
        if picks[-1] != grid.size - 1:
            picks[-1] = grid.size - 1
        rk_states = _dp54(v, initial.amplitudes, grid[picks])
        deviation = float(np.max(np.abs(states[picks] - rk_states)))
        if deviation > check_tol:
            raise IntegrityError(
                "matrix-exponential and Runge-Kutta backends disagree "
                f"({deviation:.3e} > {check_tol:.1e})",
                estimate=deviation, residual=deviation)

    populations, total, intensity_arr, clamped = _observables(matrix, states)
    return Trajectory(times=grid, amplitudes=states, populations=populations,
                      total=total, intensity=intensity_arr,
                      gamma=matrix.gamma, underflow_clamped=clamped)


def rk_propagate(matrix: CouplingMatrix, initial: StateVector, grid,
                 *, rtol: float = 1e-12, atol: float = 1e-12) -> Trajectory:
    """Same contract as propagate, but solved by the adaptive RK backend.

    Exists so the two routes can be compared over whole trajectories; the
    matrix-exponential path is both faster and tighter, so use propagate
    for production runs.
    """
    grid = _validate_grid(grid)
    if initial.n_atoms != matrix.n_atoms:
        raise ConfigError(
            f"state has {initial.n_atoms} sites but matrix has {matrix.n_atoms}")
    record = _dp54(matrix.entries, initial.amplitudes, grid[1:],
                   rtol=rtol, atol=atol)
    states = np.vstack([initial.amplitudes[None, :], record])
    populations, total, intensity_arr, clamped = _observables(matrix, states)
    return Trajectory(times=grid, amplitudes=states, populations=populations,
                      total=total, intensity=intensity_arr,
                      gamma=matrix.gamma, underflow_clamped=clamped)


# Dormand-Prince 5(4) tableau
_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
)
_DP_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_DP_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200,
          187 / 2100, 1 / 40)
_DP_ERR = tuple(b5 - b4 for b5, b4 in zip(_DP_B5, _DP_B4))


def _dp54(v: np.ndarray, c0: np.ndarray, record_times: np.ndarray,
          rtol: float = 1e-12, atol: float = 1e-12) -> np.ndarray:
    """Integrate dc/dt = V c from t = 0, recording at the given times."""
    out = np.empty((record_times.size, c0.size), dtype=complex)
    t = 0.0
    y = c0.astype(complex)
    k1 = v @ y
    h = 1e-3
    for idx, t_target in enumerate(record_times):
        while t < t_target:
            clipped = t + h >= t_target
            h_step = (t_target - t) if clipped else h
            k2 = v @ (y + h_step * (_DP_A[1][0] * k1))
            k3 = v @ (y + h_step * (_DP_A[2][0] * k1 + _DP_A[2][1] * k2))
            k4 = v @ (y + h_step * (_DP_A[3][0] * k1 + _DP_A[3][1] * k2
                                    + _DP_A[3][2] * k3))
            k5 = v @ (y + h_step * (_DP_A[4][0] * k1 + _DP_A[4][1] * k2
                                    + _DP_A[4][2] * k3 + _DP_A[4][3] * k4))
            k6 = v @ (y + h_step * (_DP_A[5][0] * k1 + _DP_A[5][1] * k2
                                    + _DP_A[5][2] * k3 + _DP_A[5][3] * k4
                                    + _DP_A[5][4] * k5))
            y5 = y + h_step * (_DP_B5[0] * k1 + _DP_B5[2] * k3 + _DP_B5[3] * k4
                               + _DP_B5[4] * k5 + _DP_B5[5] * k6)
            k7 = v @ y5
            err_vec = h_step * (_DP_ERR[0] * k1 + _DP_ERR[2] * k3
                                + _DP_ERR[3] * k4 + _DP_ERR[4] * k5
                                + _DP_ERR[5] * k6 + _DP_ERR[6] * k7)
            scale = atol + rtol * np.maximum(np.abs(y), np.abs(y5))
            err = float(np.max(np.abs(err_vec) / scale))
            if err <= 1.0:
                t = t_target if clipped else t + h_step
                y = y5
                k1 = k7  # first-same-as-last
                factor = min(5.0, max(0.2, 0.9 * max(err, 1e-16) ** -0.2))
                h = h_step * factor
            else:
                h = h_step * max(0.2, 0.9 * err ** -0.2)
            if h < 1e-13:
                raise NumericsError(
                    "Runge-Kutta step size underflow", estimate=t, residual=h)
        out[idx] = y
    return out


def intensity(matrix: CouplingMatrix, state: StateVector) -> float:
    """Instantaneous emitted intensity -c^dag (V + V^dag) c (>= 0)."""
    if state.n_atoms != matrix.n_atoms:
        raise ConfigError(
            f"state has {state.n_atoms} sites but matrix has {matrix.n_atoms}")
    c = state.amplitudes
    return float(np.real(c.conj() @ matrix.dissipator() @ c))


@dataclass(frozen=True)
class SteadyStateResult:
    """The t -> infinity state and how it was obtained.

    method 'eigen' means exact spectral projection onto the null space of
    V; 'propagation' means the eigenbasis was too ill-conditioned (e.g.
    the defective cascaded limit) and the state is a long-time propagation
    extrapolation, flagged approximate.
    """

    state: StateVector
    method: str

    @property
    def approximate(self) -> bool:
        return self.method == "propagation"


def steady_state(matrix: CouplingMatrix, initial: StateVector,
                 *, cond_limit: float = 1e12, zero_tol: float = 1e-9,
                 fallback_horizon: float = 1e3) -> SteadyStateResult:
    """Project the initial state onto the decoherence-free subspace of V.

    Expands the state in the (generally non-orthogonal) eigenbasis of V
    and keeps the components with eigenvalue 0; every other eigenvalue
    has a strictly negative real part, so its component dies out.  If the
    eigenvector matrix has condition number above cond_limit the matrix
    is (near-)defective and the spectral route is meaningless; the state
    is then propagated to gamma*t = fallback_horizon and Aitken-
    extrapolated, and the result is flagged approximate.
    """
    if initial.n_atoms != matrix.n_atoms:
        raise ConfigError(
            f"state has {initial.n_atoms} sites but matrix has {matrix.n_atoms}")
    v = matrix.entries
    eigvals, eigvecs = np.linalg.eig(v)
    cond = float(np.linalg.cond(eigvecs))
    if cond <= cond_limit:
        coeffs = np.linalg.solve(eigvecs, initial.amplitudes)
        scale = max(float(np.max(np.abs(eigvals))), matrix.gamma)
        dark = np.abs(eigvals) <= zero_tol * scale
        if np.any(dark):
            c_inf = eigvecs[:, dark] @ coeffs[dark]
        else:
            c_inf = np.zeros(matrix.n_atoms, dtype=complex)
        return SteadyStateResult(
            state=StateVector(c_inf, time=math.inf), method="eigen")

    horizon = fallback_horizon / matrix.gamma
    delta = horizon / 20.0
    grid = np.array([0.0, horizon - 2 * delta, horizon - delta, horizon])
    traj = propagate(matrix, initial, grid, cross_check=False)
    s0, s1, s2 = traj.amplitudes[1], traj.amplitudes[2], traj.amplitudes[3]
    denom = s2 - 2.0 * s1 + s0
    c_inf = s2.copy()
    usable = np.abs(denom) > 1e-14 * (np.abs(s0) + np.abs(s1) + np.abs(s2) + 1e-300)
    c_inf[usable] = s2[usable] - (s2[usable] - s1[usable]) ** 2 / denom[usable]
    c_inf[np.abs(c_inf) < 1e-150] = 0.0
    return SteadyStateResult(
        state=StateVector(c_inf, time=math.inf), method="propagation")


def long_time_populations(matrix: CouplingMatrix, initial: StateVector,
                          horizon: float = 1e4, log_spacing: bool = True,
                          *, points_per_decade: int = 400,
                          cross_check: bool = True) -> Trajectory:
    """Trajectory out to a long horizon (units 1/gamma) on a log grid.

    log_spacing=False falls back to a 2000-point uniform grid.  The
    cross-check samples 10 grid times as in propagate.
    """
    if log_spacing:
        grid = log_grid(horizon=horizon, points_per_decade=points_per_decade)
    else:
        grid = uniform_grid(horizon=horizon, points=2000)
    return propagate(matrix, initial, grid, cross_check=cross_check)


# ---------------------------------------------------------------------------
# trajectory export
# ---------------------------------------------------------------------------

def _format(x: float) -> str:
    return repr(float(x))


def write_trajectory_csv(trajectory: Trajectory, stream: IO[str],
                         metadata: Optional[dict] = None) -> None:
    """CSV columns t, P_1..P_N, P_tot, I_tot with # metadata lines."""
    if metadata:
        for key, value in metadata.items():
            stream.write(f"# {key} = {value}\n")
    if trajectory.underflow_clamped:
        stream.write("# underflow_clamped = true\n")
    n = trajectory.n_atoms
    header = ["t"] + [f"P_{m}" for m in range(1, n + 1)] + ["P_tot", "I_tot"]
    stream.write(",".join(header) + "\n")
    for k in range(len(trajectory)):
        row = [_format(trajectory.times[k])]
        row += [_format(p) for p in trajectory.populations[k]]
        row.append(_format(trajectory.total[k]))
        row.append(_format(trajectory.intensity[k]))
        stream.write(",".join(row) + "\n")


def write_trajectory_json(trajectory: Trajectory, stream: IO[str],
                          metadata: Optional[dict] = None) -> None:
    """Full complex amplitudes as arrays of [re, im] pairs."""
    payload = {
        "metadata": dict(metadata or {}),
        "gamma": trajectory.gamma,
        "underflow_clamped": trajectory.underflow_clamped,
        "times": [float(t) for t in trajectory.times],
        "amplitudes": [
            [[float(z.real), float(z.imag)] for z in row]
            for row in trajectory.amplitudes
        ],
    }
    json.dump(payload, stream, indent=None, sort_keys=True)
    stream.write("\n")
