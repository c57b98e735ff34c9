"""Single bosonic mode in a truncated number basis.

Operators are dense complex matrices built against a FockSpace; states carry
their space and are either a pure amplitude vector or a density matrix.
Everything downstream (circuits, noise, metrics) works on these arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import expm

SQRT_PI = math.sqrt(math.pi)
SQRT_2PI = math.sqrt(2.0 * math.pi)

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-8
POSITIVITY_TOL = -1e-8
PURE_NORM_TOL = 1e-10
EDGE_FRACTION = 0.05
EDGE_TOL_DEFAULT = 1e-10


class TruncationOverflowError(RuntimeError):
    """Raised when a state has too much weight near the truncation edge."""


class DimensionMismatchError(ValueError):
    """Raised when operator and state dimensions disagree."""


class StateValidationError(ValueError):
    """Raised when a density matrix or amplitude vector fails sanity checks."""


@dataclass(frozen=True)
class FockSpace:
    """Number basis truncated to levels 0 .. dim-1."""

    dim: int

    def __post_init__(self):
        if not isinstance(self.dim, int) or self.dim < 2:
            raise ValueError(f"FockSpace dim must be an integer >= 2, got {self.dim}")


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@lru_cache(maxsize=32)
def _destroy(dim: int) -> np.ndarray:
    a = np.zeros((dim, dim), dtype=complex)
    ns = np.arange(1, dim)
    a[ns - 1, ns] = np.sqrt(ns)
    return _readonly(a)


def destroy(space: FockSpace) -> np.ndarray:
    """Annihilation operator a with a[n-1, n] = sqrt(n)."""
    return _destroy(space.dim)


def create(space: FockSpace) -> np.ndarray:
    return _readonly(_destroy(space.dim).conj().T.copy())


def number_op(space: FockSpace) -> np.ndarray:
    return _readonly(np.diag(np.arange(space.dim).astype(complex)))


def identity(space: FockSpace) -> np.ndarray:
    return _readonly(np.eye(space.dim, dtype=complex))


@lru_cache(maxsize=32)
def _quadratures(dim: int) -> tuple[np.ndarray, np.ndarray]:
    a = _destroy(dim)
    q = (a + a.conj().T) / math.sqrt(2.0)
    p = 1j * (a.conj().T - a) / math.sqrt(2.0)
    return _readonly(q), _readonly(p)


def quadratures(space: FockSpace) -> tuple[np.ndarray, np.ndarray]:
    """Dimensionless quadratures q = (a+a†)/√2 and p = i(a†−a)/√2."""
    return _quadratures(space.dim)


def displacement(space: FockSpace, beta: complex) -> np.ndarray:
    """D(beta) = exp(beta a† − beta* a) by matrix exponential of the truncated generator.

    Exactly unitary for any beta (the generator stays anti-Hermitian under
    truncation), but only faithful on states with |beta|² well below dim.
    """
    beta = complex(beta)
    if not (math.isfinite(beta.real) and math.isfinite(beta.imag)):
        raise ValueError(f"displacement amplitude must be finite, got {beta}")
    a = _destroy(space.dim)
    gen = beta * a.conj().T - np.conj(beta) * a
    return expm(gen)


def stabilizers(space: FockSpace) -> tuple[np.ndarray, np.ndarray]:
    """Commuting phase-space translations S_p = e^{ip√(2π)}, S_q = e^{iq√(2π)}.

    As displacements: S_p = D(−√π) shifts q by −√(2π), S_q = D(i√π) shifts p
    by +√(2π).
    """
    return _stabilizers(space.dim)


@lru_cache(maxsize=16)
def _stabilizers(dim: int) -> tuple[np.ndarray, np.ndarray]:
    space = FockSpace(dim)
    s_p = displacement(space, -SQRT_PI)
    s_q = displacement(space, 1j * SQRT_PI)
    return _readonly(s_p), _readonly(s_q)


def displacement_from_uv(space: FockSpace, u: float, v: float) -> np.ndarray:
    """exp(−iu p̂ + iv q̂) as D(beta) with u = √2 Re(beta), v = √2 Im(beta)."""
    return displacement(space, (u + 1j * v) / math.sqrt(2.0))


@dataclass(frozen=True, eq=False)
class CavityState:
    """Sensor-mode state: pure amplitude vector or density matrix."""

    space: FockSpace
    vector: np.ndarray | None = None
    matrix: np.ndarray | None = None

    def __post_init__(self):
        if (self.vector is None) == (self.matrix is None):
            raise ValueError("provide exactly one of vector or matrix")
        d = self.space.dim
        if self.vector is not None:
            v = np.ascontiguousarray(self.vector, dtype=complex)
            if v.shape != (d,):
                raise DimensionMismatchError(f"vector shape {v.shape} for dim {d}")
            object.__setattr__(self, "vector", _readonly(v))
        else:
            m = np.ascontiguousarray(self.matrix, dtype=complex)
            if m.shape != (d, d):
                raise DimensionMismatchError(f"matrix shape {m.shape} for dim {d}")
            object.__setattr__(self, "matrix", _readonly(m))

    @property
    def is_pure(self) -> bool:
        return self.vector is not None

    def density(self) -> np.ndarray:
        if self.vector is not None:
            return np.outer(self.vector, self.vector.conj())
        return np.array(self.matrix)

    def expectation(self, op: np.ndarray) -> complex:
        d = self.space.dim
        if op.shape != (d, d):
            raise DimensionMismatchError(f"operator shape {op.shape} for dim {d}")
        if self.vector is not None:
            return complex(np.vdot(self.vector, op @ self.vector))
        return complex(np.trace(op @ self.matrix))

    def number_populations(self) -> np.ndarray:
        if self.vector is not None:
            return np.abs(self.vector) ** 2
        return np.real(np.diag(self.matrix)).copy()

    def mean_photons(self) -> float:
        pops = self.number_populations()
        return float(np.dot(pops, np.arange(self.space.dim)))

    def edge_weight(self, fraction: float = EDGE_FRACTION) -> float:
        """Population in the top `fraction` of retained levels."""
        cut = int(math.ceil((1.0 - fraction) * self.space.dim))
        return float(np.sum(self.number_populations()[cut:]))

    def validate(self) -> "CavityState":
        if self.vector is not None:
            norm = np.linalg.norm(self.vector)
            if abs(norm - 1.0) > PURE_NORM_TOL:
                raise StateValidationError(f"pure-state norm {norm} off unity")
        else:
            m = self.matrix
            herm = np.max(np.abs(m - m.conj().T))
            if herm > HERMITICITY_TOL:
                raise StateValidationError(f"hermiticity violation {herm:.2e}")
            tr = np.trace(m).real
            if abs(tr - 1.0) > TRACE_TOL:
                raise StateValidationError(f"trace {tr} off unity")
            w = np.linalg.eigvalsh(m)
            if w.min() < POSITIVITY_TOL:
                raise StateValidationError(f"negative eigenvalue {w.min():.2e}")
        return self


def expectation(op: np.ndarray, state: CavityState) -> complex:
    """Tr(op ρ) for mixed states, ⟨ψ|op|ψ⟩ for pure ones."""
    return state.expectation(op)


def _coherent_vector(dim: int, alpha: complex) -> np.ndarray:
    # c_{n+1} = c_n alpha / sqrt(n+1), stable for the |alpha| <= O(10) used here
    v = np.zeros(dim, dtype=complex)
    c = math.exp(-0.5 * abs(alpha) ** 2)
    v[0] = c
    for n in range(1, dim):
        c = c * alpha / math.sqrt(n)
        v[n] = c
    return v


def _squeeze_operator(space: FockSpace, zeta: float) -> np.ndarray:
    # S(zeta) = exp(zeta (a² − a†²)/2); zeta > 0 squeezes q
    a = _destroy(space.dim)
    gen = 0.5 * zeta * (a @ a - a.conj().T @ a.conj().T)
    return expm(gen)


def _squeezed_vector(space: FockSpace, delta: float, axis: str) -> np.ndarray:
    if axis not in ("q", "p"):
        raise ValueError(f"squeeze axis must be 'q' or 'p', got {axis!r}")
    zeta = math.log(1.0 / delta)
    if axis == "p":
        zeta = -zeta
    vac = np.zeros(space.dim, dtype=complex)
    vac[0] = 1.0
    return _squeeze_operator(space, zeta) @ vac


def grid_peak_range(delta: float) -> int:
    """Envelope cutoff: terms beyond this carry < e^-16 relative weight."""
    return int(math.ceil(4.0 / (SQRT_PI * delta)))


def _grid_vector(space: FockSpace, delta: float) -> np.ndarray:
    # Gaussian-filtered comb of q-squeezed peaks at q = sqrt(2π) t
    base = _squeezed_vector(space, delta, "q")
    d_up = displacement(space, SQRT_PI)
    d_dn = d_up.conj().T
    t_max = grid_peak_range(delta)
    acc = base.copy()
    up = base.copy()
    dn = base.copy()
    for t in range(1, t_max + 1):
        up = d_up @ up
        dn = d_dn @ dn
        w = math.exp(-math.pi * delta**2 * t**2)
        acc += w * (up + dn)
    return acc


def _compass_vector(space: FockSpace, alpha: complex) -> np.ndarray:
    acc = np.zeros(space.dim, dtype=complex)
    for phase in (1, -1, 1j, -1j):
        acc += _coherent_vector(space.dim, phase * alpha)
    return acc


def make_state(space: FockSpace, kind: str, *, alpha: complex = 0.0,
               delta: float = 0.2, n: int = 0, axis: str = "q",
               edge_tol: float = EDGE_TOL_DEFAULT) -> CavityState:
    """Build a normalized sensor state.

    kinds: vacuum | coherent(alpha) | number(n) | squeezed_vacuum(delta, axis)
    | grid(delta) | compass(alpha).  Raises TruncationOverflowError when the
    top 5% of levels hold more than edge_tol population.
    """
    dim = space.dim
    if kind == "vacuum":
        vec = np.zeros(dim, dtype=complex)
        vec[0] = 1.0
    elif kind == "coherent":
        alpha = complex(alpha)
        if not np.isfinite(alpha):
            raise ValueError("coherent amplitude must be finite")
        vec = _coherent_vector(dim, alpha)
    elif kind == "number":
        if not 0 <= n < dim:
            raise ValueError(f"number state n={n} outside [0, {dim})")
        vec = np.zeros(dim, dtype=complex)
        vec[n] = 1.0
    elif kind == "squeezed_vacuum":
        if not (0 < delta <= 1 and math.isfinite(delta)):
            raise ValueError(f"squeezing parameter must be in (0, 1], got {delta}")
        vec = _squeezed_vector(space, delta, axis)
    elif kind == "grid":
        if not (0 < delta < 1 and math.isfinite(delta)):
            raise ValueError(f"grid delta must be in (0, 1), got {delta}")
        vec = _grid_vector(space, delta)
    elif kind == "compass":
        alpha = complex(alpha)
        if not np.isfinite(alpha) or alpha == 0:
            raise ValueError("compass amplitude must be finite and nonzero")
        vec = _compass_vector(space, alpha)
    else:
        raise ValueError(f"unknown state kind {kind!r}")

    vec = vec / np.linalg.norm(vec)
    state = CavityState(space, vector=vec)
    w = state.edge_weight()
    if w > edge_tol:
        raise TruncationOverflowError(
            f"{kind} state carries {w:.2e} population in the top 5% of levels "
            f"(dim={dim}, tolerance {edge_tol:.1e}); increase dim"
        )
    return state.validate()


def compass_overlap(alpha: float, beta: complex) -> float:
    """Large-alpha approximation of ⟨compass|D(beta)|compass⟩, unity at beta = 0."""
    return 0.5 * (math.cos(alpha * beta.imag) + math.cos(alpha * beta.real))


def hermite_functions(xs: np.ndarray, n_max: int) -> np.ndarray:
    """Harmonic-oscillator eigenfunctions φ_0..φ_{n_max-1} on xs, shape (n_max, len(xs))."""
    xs = np.asarray(xs, dtype=float)
    out = np.empty((n_max, xs.size))
    out[0] = math.pi ** (-0.25) * np.exp(-0.5 * xs**2)
    if n_max > 1:
        out[1] = math.sqrt(2.0) * xs * out[0]
    for k in range(2, n_max):
        out[k] = math.sqrt(2.0 / k) * xs * out[k - 1] - math.sqrt((k - 1) / k) * out[k - 2]
    return out


def position_wavefunction(vec: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """ψ(q) = Σ_n c_n φ_n(q)."""
    phis = hermite_functions(xs, len(vec))
    return vec @ phis.astype(complex)


def momentum_wavefunction(vec: np.ndarray, ps: np.ndarray) -> np.ndarray:
    """ψ̃(p) = Σ_n c_n (−i)^n φ_n(p)."""
    phis = hermite_functions(ps, len(vec))
    signs = (-1j) ** np.arange(len(vec))
    return (vec * signs) @ phis.astype(complex)


def wrap_angle(theta):
    """Reduce an angle to [−π, π)."""
    return (np.asarray(theta) + math.pi) % (2.0 * math.pi) - math.pi


def wrap_fundamental(x):
    """Reduce a displacement parameter to the unambiguous cell [−√(π/2), √(π/2))."""
    half = math.sqrt(math.pi / 2.0)
    return (np.asarray(x) + half) % (2.0 * half) - half
