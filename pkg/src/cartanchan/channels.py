"""Two-parameter Cartan-covariant channels: action, Choi matrices, spectra, Kraus form.

Choi convention: identity on the first tensor factor, channel on the second,
rho_E = (1 (x) E)(|Psi><Psi|) with |Psi> = sum_i |ii> / sqrt(D).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import (
    CartanBasis,
    Flavor,
    Kind,
    as_kind,
    cartan_involution,
    cartan_partition,
    closed_form_dims,
    is_power_of_two,
    pauli_basis,
)
from .liealg import _sum_kron

CP_TOL = 1e-12


@dataclass(frozen=True)
class CartanChannel:
    """Unital channel acting as 1 on the identity, alpha on A and beta on B."""

    dim: int
    kind: Kind
    alpha: float
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "kind", as_kind(self.kind))
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise ValueError("channel parameters must be finite")
        if self.dim < 2:
            raise ValueError(f"need D >= 2, got {self.dim}")
        if self.kind is Kind.SP and self.dim % 2:
            raise ValueError(f"SP requires even dimension, got D={self.dim}")

    @property
    def point(self) -> tuple[float, float]:
        return self.alpha, self.beta

    def mirrored(self) -> "CartanChannel":
        """The channel whose Choi matrix is isospectral to this one's partial transpose."""
        return CartanChannel(self.dim, self.kind, -self.alpha, self.beta)


@dataclass(frozen=True)
class ChoiMatrix:
    dim: int
    matrix: np.ndarray
    source: CartanChannel | None = None
    construction: str = "direct"

    def hermiticity_residual(self) -> float:
        return float(np.abs(self.matrix - self.matrix.conj().T).max())

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.matrix))


@dataclass(frozen=True)
class KrausSet:
    operators: tuple[np.ndarray, ...]
    source_rank: int

    def completeness_residual(self) -> float:
        D = self.operators[0].shape[0]
        total = sum(K.conj().T @ K for K in self.operators)
        return float(np.abs(total - np.eye(D)).max())

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return sum(K @ rho @ K.conj().T for K in self.operators)


@dataclass(frozen=True)
class SpectrumReport:
    analytic: tuple[tuple[float, int], ...]
    numeric: tuple[float, ...]
    max_deviation: float


def _check_match(ch: CartanChannel, cb: CartanBasis) -> None:
    if cb.dim != ch.dim or cb.kind is not ch.kind:
        raise ValueError(
            f"partition ({cb.kind.value}, D={cb.dim}) does not match channel ({ch.kind.value}, D={ch.dim})"
        )


def _eigen_per_element(ch: CartanChannel, cb: CartanBasis) -> np.ndarray:
    lam = np.zeros(len(cb.basis))
    lam[0] = 1.0
    lam[list(cb.a_indices)] = ch.alpha
    if cb.b_indices:
        lam[list(cb.b_indices)] = ch.beta
    return lam


def transfer_matrix(ch: CartanChannel, cb: CartanBasis) -> np.ndarray:
    _check_match(ch, cb)
    return np.diag(_eigen_per_element(ch, cb))


def apply_channel(ch: CartanChannel, rho: np.ndarray, cb: CartanBasis) -> np.ndarray:
    """(1/D)[tr(rho) 1 + alpha sum_r tr(A_r rho) A_r + beta sum_mu tr(B_mu rho) B_mu].

    Linear in rho, so it also accepts non-Hermitian matrices.
    """
    _check_match(ch, cb)
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape != (ch.dim, ch.dim):
        raise ValueError(f"expected a {ch.dim}x{ch.dim} matrix, got shape {rho.shape}")
    G = cb.basis.elements
    coeff = np.einsum("kab,ba->k", G, rho)
    return np.einsum("k,kab->ab", _eigen_per_element(ch, cb) * coeff, G) / ch.dim


def compose(c1: CartanChannel, c2: CartanChannel) -> CartanChannel:
    """Diagonal transfer matrices multiply entrywise."""
    if c1.dim != c2.dim or c1.kind is not c2.kind:
        raise ValueError("can only compose channels of the same dimension and kind")
    return CartanChannel(c1.dim, c1.kind, c1.alpha * c2.alpha, c1.beta * c2.beta)


def max_entangled_state(dim: int, basis=None, tol: float = 1e-10) -> np.ndarray:
    """omega = |Psi><Psi|; with ``basis`` also checks omega = (1/D^2) sum_i G_i (x) G_i^T."""
    if dim < 2:
        raise ValueError(f"need D >= 2, got {dim}")
    psi = np.eye(dim).reshape(-1) / np.sqrt(dim)
    omega = np.outer(psi, psi).astype(complex)
    if basis is not None:
        resid = float(np.abs(mes_expansion(basis) - omega).max())
        if resid > tol:
            raise ValueError(f"maximally entangled state expansion fails by {resid:.3g}")
    return omega


def mes_expansion(basis) -> np.ndarray:
    G = basis.elements
    D = basis.dim
    return np.einsum("iab,idc->acbd", G, G).reshape(D * D, D * D) / D**2


def mes_coefficients(basis) -> np.ndarray:
    """c_ij = tr((G_i (x) G_j^T) omega) / D^2."""
    G = basis.elements
    D = basis.dim
    omega = max_entangled_state(D).reshape(D, D, D, D)
    return np.einsum("iab,jdc,bdac->ij", G, G, omega).real / D**2


def choi_direct(ch: CartanChannel, cb: CartanBasis) -> ChoiMatrix:
    """(1/D^2)(1 - alpha sum_r A_r (x) A_r + beta sum_mu B_mu (x) B_mu)."""
    _check_match(ch, cb)
    D = ch.dim
    mat = (np.eye(D * D) - ch.alpha * _sum_kron(cb.A, D) + ch.beta * _sum_kron(cb.B, D)) / D**2
    return ChoiMatrix(D, mat, ch, "direct")


def choi_via_action(ch: CartanChannel, cb: CartanBasis) -> ChoiMatrix:
    """(1 (x) E) applied to |Psi><Psi| = (1/D) sum_ab E_ab (x) E_ab, one matrix unit at a time."""
    _check_match(ch, cb)
    D = ch.dim
    mat = np.zeros((D * D, D * D), dtype=complex)
    unit = np.zeros((D, D), dtype=complex)
    for a in range(D):
        for b in range(D):
            unit[a, b] = 1.0
            mat += np.kron(unit, apply_channel(ch, unit, cb)) / D
            unit[a, b] = 0.0
    return ChoiMatrix(D, mat, ch, "action")


def partial_transpose(m: np.ndarray, dim: int) -> np.ndarray:
    """Transpose the second tensor factor in the computational basis."""
    m = np.asarray(m)
    if m.shape != (dim * dim, dim * dim):
        raise ValueError(f"expected a {dim**2}x{dim**2} matrix, got shape {m.shape}")
    return m.reshape(dim, dim, dim, dim).transpose(0, 3, 2, 1).reshape(dim * dim, dim * dim)


def pi_values(ch: CartanChannel) -> tuple[float, float, float]:
    """(pi_1, pi_A, pi_A^c): Choi eigenvalues times D^2, in multiplicity order (1, a, b)."""
    D, al, be = ch.dim, ch.alpha, ch.beta
    a, b = closed_form_dims(D, ch.kind)
    h = D / 2
    pi1 = 1 + a * al + b * be
    up = 1 + h * al - (h + 1) * be
    down = 1 - h * al + (h - 1) * be
    if ch.kind is Kind.SO:
        return pi1, up, down
    return pi1, down, up


def analytic_spectrum(ch: CartanChannel) -> tuple[tuple[float, int], ...]:
    a, b = closed_form_dims(ch.dim, ch.kind)
    D2 = ch.dim**2
    return tuple((p / D2, m) for p, m in zip(pi_values(ch), (1, a, b)))


def expand_multiset(spectrum) -> np.ndarray:
    return np.sort(np.concatenate([np.full(m, v) for v, m in spectrum]))


def numeric_spectrum(choi: ChoiMatrix | np.ndarray) -> np.ndarray:
    """Ascending eigenvalues; eigensolver failures propagate as LinAlgError."""
    mat = choi.matrix if isinstance(choi, ChoiMatrix) else np.asarray(choi)
    return np.linalg.eigvalsh(mat)


def spectrum_report(ch: CartanChannel, cb: CartanBasis) -> SpectrumReport:
    analytic = analytic_spectrum(ch)
    numeric = numeric_spectrum(choi_direct(ch, cb))
    dev = float(np.abs(expand_multiset(analytic) - numeric).max())
    return SpectrumReport(analytic, tuple(float(x) for x in numeric), dev)


def is_cp(ch: CartanChannel, tol: float = CP_TOL) -> bool:
    # zero-multiplicity sectors (b = 0) impose nothing
    return all(p * ch.dim**2 >= -tol for p, m in analytic_spectrum(ch) if m > 0)


def is_ccp(ch: CartanChannel, tol: float = CP_TOL) -> bool:
    return is_cp(ch.mirrored(), tol)


def is_ppt(ch: CartanChannel, tol: float = CP_TOL) -> bool:
    return is_cp(ch, tol) and is_ccp(ch, tol)


def kraus_from_choi(choi: ChoiMatrix, tol: float = 1e-10) -> KrausSet:
    """Kraus operators sqrt(lambda D) * reshape(v).T from eigenpairs with lambda > tol.

    Meant for Choi matrices built against |Psi> (``choi_via_action``); for SO the
    direct construction coincides.
    """
    D = choi.dim
    vals, vecs = np.linalg.eigh(choi.matrix)
    if vals[0] < -tol:
        raise ValueError(f"not a channel: Choi matrix has eigenvalue {vals[0]:.3g}")
    ops = tuple(
        np.sqrt(lam * D) * vecs[:, k].reshape(D, D).T
        for k, lam in enumerate(vals) if lam > tol
    )
    return KrausSet(ops, len(ops))


def _pauli_bits(label: str) -> list[int]:
    bits = []
    for ch in label:
        bits += {"I": [0, 0], "Z": [0, 1], "X": [1, 0], "Y": [1, 1]}[ch]
    return bits


def pauli_eigenvalues(ch: CartanChannel, cb: CartanBasis | None = None) -> np.ndarray:
    """Transfer-matrix eigenvalues indexed by (x1, z1, ..., xN, zN), x1 most significant."""
    if not is_power_of_two(ch.dim):
        raise ValueError(f"qubit check needs D = 2^N, got {ch.dim}")
    if cb is None:
        n = ch.dim.bit_length() - 1
        cb = cartan_partition(pauli_basis(n, max_dim=max(ch.dim, 2)), cartan_involution(ch.dim, ch.kind))
    if cb.basis.flavor is not Flavor.PAULI:
        raise ValueError("qubit check requires a Pauli-string partition")
    _check_match(ch, cb)
    lam = _eigen_per_element(ch, cb)
    eps = np.zeros(ch.dim**2)
    for label, value in zip(cb.basis.labels, lam):
        idx = int("".join(map(str, _pauli_bits(label))), 2)
        eps[idx] = value
    return eps


def hadamard_vector(ch: CartanChannel, cb: CartanBasis | None = None) -> np.ndarray:
    """Apply Hbar^(x 2N), Hbar = [[1, -1], [1, 1]], one tensor axis at a time."""
    eps = pauli_eigenvalues(ch, cb)
    n_axes = 2 * (ch.dim.bit_length() - 1)
    hbar = np.array([[1.0, -1.0], [1.0, 1.0]])
    t = eps.reshape((2,) * n_axes)
    for ax in range(n_axes):
        t = np.moveaxis(np.tensordot(hbar, t, axes=([1], [ax])), 0, ax)
    return t.reshape(-1)


def qubit_hadamard_cp_check(ch: CartanChannel, cb: CartanBasis | None = None,
                            tol: float = CP_TOL) -> bool:
    return bool(np.all(hadamard_vector(ch, cb) >= -tol))
