"""
Independent numerical references for the closed-form dynamics.

Two routes are provided. ``qme_evolve`` integrates a Lindblad master
equation for the atoms plus one lossy cavity mode, truncated to the
vacuum + single-excitation subspace. ``volterra_evolve`` integrates the
atomic amplitudes directly against the Lorentzian memory kernel with
trapezoidal quadrature. Neither uses the Laplace-transform solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse as sp
from scipy import integrate

from .analytic import CoefficientVector, PopulationVector, TCParams
from .errors import SizeLimitExceeded, StepTooLarge, ZeroLinewidth

TRACE_TOL = 1e-9
TRACE_DRIFT_LIMIT = 1e-6
COLLECTIVE_MAX_ATOMS = 12


# --------------------------------------------------------------------------
# spectral density and memory kernel


def spectral_density(params: TCParams, detuning: float) -> float:
    """Lorentzian J at detuning omega_s - omega."""
    if params.kappa == 0:
        raise ZeroLinewidth("J is a delta function when kappa = 0")
    k = params.kappa
    return params.g**2 / (2 * math.pi) * k / (detuning**2 + (k / 2) ** 2)


def integrated_spectral_density(params: TCParams, half_width: float) -> float:
    """Numerical integral of J over detunings in [-half_width, half_width]."""
    val, _ = integrate.quad(
        lambda d: spectral_density(params, d),
        -half_width,
        half_width,
        points=[0.0],
        limit=500,
        epsabs=0.0,
        epsrel=1e-12,
    )
    return val


def memory_kernel(params: TCParams, tau: float, quadrature: bool = False) -> float:
    """Fourier transform of J, f(tau) = g**2 exp(-kappa tau / 2).

    With ``quadrature=True`` the defining integral over all detunings is
    evaluated numerically instead (QUADPACK's Fourier-integral routine),
    which is the cross-check for the closed form.
    """
    if params.kappa == 0:
        raise ZeroLinewidth("memory kernel needs kappa > 0")
    if tau < 0:
        raise ValueError("tau must be >= 0")
    if not quadrature:
        return params.g**2 * math.exp(-params.kappa * tau / 2)
    if params.g == 0:
        return 0.0

    def J(d):
        return spectral_density(params, d)

    if tau == 0:
        val, _ = integrate.quad(J, -np.inf, np.inf, epsabs=0.0, epsrel=1e-12, limit=500)
        return val
    # J is even in detuning, so the sine part vanishes
    val, _ = integrate.quad(
        J, 0.0, np.inf, weight="cos", wvar=tau, epsabs=1e-12 * params.g**2, limlst=200
    )
    return 2.0 * val


# --------------------------------------------------------------------------
# master equation on the single-excitation subspace


@dataclass
class SubspaceState:
    """Density matrix on |vac>, |e_1>..|e_N>, |photon> (dimension N + 2)."""

    n_atoms: int
    rho: np.ndarray

    @property
    def dim(self) -> int:
        return self.n_atoms + 2

    @property
    def photon(self) -> int:
        return self.n_atoms + 1

    def trace(self) -> float:
        return float(np.trace(self.rho).real)

    def check(self, trace_tol: float = TRACE_TOL) -> None:
        rho = self.rho
        if not np.allclose(rho, rho.conj().T, rtol=0, atol=1e-10):
            raise ValueError("density matrix is not Hermitian")
        if abs(self.trace() - 1) > trace_tol:
            raise ValueError(f"trace {self.trace()!r} differs from 1")
        if np.any(np.diag(rho).real < -1e-10):
            raise ValueError("negative population")

    def populations(self, t: float) -> PopulationVector:
        diag = np.diag(self.rho).real
        return PopulationVector(
            float(t), diag[1 : self.n_atoms + 1].copy(), float(diag[0] + diag[self.photon])
        )

    @classmethod
    def initial(cls, params: TCParams) -> "SubspaceState":
        psi = np.zeros(params.n_atoms + 2, dtype=complex)
        psi[1 : params.n_atoms + 1] = params.c0
        return cls(params.n_atoms, np.outer(psi, psi.conj()))


def subspace_operators(params: TCParams) -> tuple[np.ndarray, np.ndarray]:
    """Rotating-frame Hamiltonian and cavity collapse operator.

    H = g sum_n (|e_n><photon| + |photon><e_n|),  C = sqrt(kappa) |vac><photon|
    """
    n = params.n_atoms
    d = n + 2
    ph = n + 1
    H = np.zeros((d, d), dtype=complex)
    H[1 : n + 1, ph] = params.g
    H[ph, 1 : n + 1] = params.g
    C = np.zeros((d, d), dtype=complex)
    C[0, ph] = math.sqrt(params.kappa)
    return H, C


def lindblad_superoperator(params: TCParams) -> np.ndarray:
    """Generator L acting on row-major vec(rho): d vec(rho)/dt = L vec(rho)."""
    H, C = subspace_operators(params)
    d = H.shape[0]
    eye = np.eye(d)
    CdC = C.conj().T @ C
    # row-major: vec(A X B) = kron(A, B.T) vec(X)
    return (
        -1j * (np.kron(H, eye) - np.kron(eye, H.T))
        + np.kron(C, C.conj())
        - 0.5 * np.kron(CdC, eye)
        - 0.5 * np.kron(eye, CdC.T)
    )


def _rk4_propagator(L: np.ndarray, h: float) -> np.ndarray:
    # one classical RK4 step of a linear ODE is this 4th-order Taylor polynomial
    hL = h * L
    out = np.eye(L.shape[0], dtype=complex)
    term = out
    for k in range(1, 5):
        term = term @ hL / k
        out = out + term
    return out


@dataclass
class IntegratorConfig:
    dt: float
    t_grid: np.ndarray
    method: str = "rk4"
    check_halving: bool = False

    def __post_init__(self):
        self.t_grid = np.asarray(self.t_grid, dtype=float)
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.t_grid.size == 0 or self.t_grid[0] != 0:
            raise ValueError("t_grid must start at 0")
        if np.any(np.diff(self.t_grid) < 0):
            raise ValueError("t_grid must be nondecreasing")
        if self.method != "rk4":
            raise ValueError(f"unsupported method {self.method!r}")

    @classmethod
    def default(cls, params: TCParams, t_grid) -> "IntegratorConfig":
        scale = max(1.0, params.collective_rate, params.kappa)
        return cls(dt=1e-3 / scale, t_grid=t_grid, check_halving=True)


def _qme_run(params: TCParams, dt: float, t_grid: np.ndarray) -> list[SubspaceState]:
    L = lindblad_superoperator(params)
    state = SubspaceState.initial(params)
    d = state.dim
    vec = state.rho.reshape(-1).copy()
    cache: dict[tuple[int, float], np.ndarray] = {}
    out = []
    t = 0.0
    for t_next in t_grid:
        span = t_next - t
        if span > 0:
            steps = max(1, math.ceil(span / dt - 1e-9))
            h = span / steps
            key = (steps, span)
            if key not in cache:
                cache[key] = _rk4_propagator(L, h)
            P = cache[key]
            for _ in range(steps):
                vec = P @ vec
            t = t_next
        snap = SubspaceState(params.n_atoms, vec.reshape(d, d).copy())
        drift = abs(snap.trace() - 1)
        if drift > TRACE_DRIFT_LIMIT:
            raise StepTooLarge(f"trace drifted by {drift:.3e} at t={t_next}")
        out.append(snap)
    return out


def qme_states(params: TCParams, config: IntegratorConfig) -> list[SubspaceState]:
    """Full subspace density matrices at every grid time."""
    states = _qme_run(params, config.dt, config.t_grid)
    if config.check_halving:
        fine = _qme_run(params, config.dt / 2, config.t_grid)
        err = max(
            np.max(np.abs(np.diag(a.rho) - np.diag(b.rho))) for a, b in zip(states, fine)
        )
        if err > TRACE_DRIFT_LIMIT:
            raise StepTooLarge(f"halving dt changed populations by {err:.3e}")
    return states


def qme_evolve(params: TCParams, config: IntegratorConfig) -> list[PopulationVector]:
    """Atom and ground populations from the master equation.

    The ground population adds the vacuum and the cavity-photon diagonal,
    since both mean "no atom excited".
    """
    return [s.populations(t) for s, t in zip(qme_states(params, config), config.t_grid)]


# --------------------------------------------------------------------------
# memory-kernel (Volterra) route


@dataclass
class KernelConfig:
    h: float = 2.5e-4
    detuning_range: float = 200.0  # in units of kappa
    tol: float = 1e-3
    check_halving: bool = True

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError("h must be positive")


def _volterra_grid(params: TCParams, h: float, n_steps: int) -> np.ndarray:
    """Amplitudes on t_k = k h, shape (n_steps + 1, N)."""
    n = params.n_atoms
    k = np.arange(n_steps + 1)
    f = params.g**2 * np.exp(-params.kappa * h * k / 2)
    c = np.empty((n_steps + 1, n))
    c[0] = params.c0
    B = np.empty(n_steps + 1)
    B[0] = c[0].sum()
    I_prev = 0.0
    denom = 1.0 + n * h * h * f[0] / 4
    for j in range(n_steps):
        # trapezoid of f(t_{j+1} - t') sum_m c_m(t') without the t' = t_{j+1} end
        known = h * (0.5 * f[j + 1] * B[0] + np.dot(f[j:0:-1], B[1 : j + 1]))
        B[j + 1] = (B[j] - 0.5 * h * n * (I_prev + known)) / denom
        I_next = known + 0.5 * h * f[0] * B[j + 1]
        c[j + 1] = c[j] - 0.5 * h * (I_prev + I_next)
        I_prev = I_next
    return c


def _sample_grid(c: np.ndarray, h: float, t_grid: np.ndarray) -> np.ndarray:
    nodes = np.arange(c.shape[0]) * h
    out = np.empty((t_grid.size, c.shape[1]))
    for i, t in enumerate(t_grid):
        r = t / h
        k = int(round(r))
        if abs(r - k) < 1e-9:
            out[i] = c[k]
        else:
            out[i] = [np.interp(t, nodes, col) for col in c.T]
    return out


def volterra_evolve(
    params: TCParams, config: KernelConfig, t_grid: Sequence[float]
) -> list[CoefficientVector]:
    """Atomic amplitudes from the integro-differential equation.

    dc_n/dt = -int_0^t f(t - t') sum_m c_m(t') dt'

    Both the memory integral and the time stepping use the trapezoidal
    rule on a uniform grid of step ``config.h``; cost is O(M**2) in the
    number of steps. The implicit end-point term is linear and solved
    exactly at every step.
    """
    if params.kappa == 0:
        raise ZeroLinewidth("volterra route needs kappa > 0")
    t_grid = np.asarray(t_grid, dtype=float)
    t_max = float(t_grid.max()) if t_grid.size else 0.0
    h = config.h
    n_steps = max(1, math.ceil(t_max / h - 1e-9))
    values = _sample_grid(_volterra_grid(params, h, n_steps), h, t_grid)
    if config.check_halving:
        fine = _sample_grid(_volterra_grid(params, h / 2, 2 * n_steps), h / 2, t_grid)
        err = float(np.max(np.abs(fine - values)))
        if err > 10 * config.tol:
            raise StepTooLarge(f"halving h changed amplitudes by {err:.3e}")
    return [CoefficientVector(float(t), v) for t, v in zip(t_grid, values)]


# --------------------------------------------------------------------------
# collective spin operators


@dataclass(frozen=True)
class CollectiveOperators:
    Sz: sp.csr_matrix
    Splus: sp.csr_matrix
    Sminus: sp.csr_matrix = field(repr=False)


def collective_operators(n_atoms: int) -> CollectiveOperators:
    """Sparse S_z and S^+- on the 2**N atomic space.

    Local basis order is (|up>, |down>) with sigma_z = diag(1, -1); the
    first tensor factor is atom 1.
    """
    if n_atoms < 1:
        raise ValueError("n_atoms must be >= 1")
    if n_atoms > COLLECTIVE_MAX_ATOMS:
        raise SizeLimitExceeded(f"n_atoms={n_atoms} exceeds {COLLECTIVE_MAX_ATOMS}")
    sz = sp.csr_matrix(np.diag([0.5, -0.5]))
    splus = sp.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]))
    dim = 2**n_atoms
    Sz = sp.csr_matrix((dim, dim))
    Sp = sp.csr_matrix((dim, dim))
    for j in range(n_atoms):
        left = sp.identity(2**j, format="csr")
        right = sp.identity(2 ** (n_atoms - j - 1), format="csr")
        Sz = Sz + sp.kron(sp.kron(left, sz), right, format="csr")
        Sp = Sp + sp.kron(sp.kron(left, splus), right, format="csr")
    return CollectiveOperators(Sz.tocsr(), Sp.tocsr(), Sp.T.tocsr())
