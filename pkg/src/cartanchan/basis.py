"""Hermitian operator bases of u(D), Cartan involutions and the A/B splitting.

All bases use the normalization tr(G_i G_j) = D delta_ij with G_0 the identity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

HERMITIAN_TOL = 1e-12
EIGEN_TOL = 1e-10
LEAKAGE_TOL = 1e-10
MAX_BASIS_DIM = 32

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class Kind(str, Enum):
    SO = "so"
    SP = "sp"


class Flavor(str, Enum):
    GELLMANN = "gellmann"
    PAULI = "pauli"
    INVOLUTION_EIGEN = "involution_eigen"


def as_kind(kind: Kind | str) -> Kind:
    return kind if isinstance(kind, Kind) else Kind(str(kind).lower())


def closed_form_dims(dim: int, kind: Kind | str) -> tuple[int, int]:
    """Return (a, b), the dimensions of the subalgebra and its complement."""
    kind = as_kind(kind)
    if kind is Kind.SO:
        return dim * (dim - 1) // 2, (dim + 2) * (dim - 1) // 2
    return dim * (dim + 1) // 2, (dim - 2) * (dim + 1) // 2


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class OperatorBasis:
    dim: int
    elements: np.ndarray  # shape (D^2, D, D)
    labels: tuple[str, ...]
    flavor: Flavor

    def __post_init__(self):
        els = np.asarray(self.elements, dtype=complex)
        if els.shape != (self.dim**2, self.dim, self.dim):
            raise ValueError(f"expected {self.dim**2} elements of size {self.dim}, got {els.shape}")
        if len(self.labels) != len(els):
            raise ValueError("one label per element is required")
        object.__setattr__(self, "elements", _frozen(els))

    def __len__(self) -> int:
        return len(self.elements)

    def gram(self) -> np.ndarray:
        """Matrix of tr(G_i^dagger G_j)."""
        flat = self.elements.reshape(len(self), -1)
        return flat.conj() @ flat.T

    def orthogonality_residual(self) -> float:
        return float(np.abs(self.gram() - self.dim * np.eye(len(self))).max())

    def hermiticity_residual(self) -> float:
        return float(np.abs(self.elements - self.elements.conj().transpose(0, 2, 1)).max())


def gellmann_basis(dim: int) -> OperatorBasis:
    """Identity plus generalized Gell-Mann matrices scaled to tr(G_i G_j) = D delta_ij.

    Ordering is antisymmetric family, symmetric family, then diagonal family, so
    the orthogonal subalgebra occupies indices 1..D(D-1)/2.
    """
    if dim < 2:
        raise ValueError(f"Gell-Mann basis needs D >= 2, got {dim}")
    scale = np.sqrt(dim / 2)
    elements = [np.eye(dim, dtype=complex)]
    labels = ["I"]
    pairs = list(itertools.combinations(range(dim), 2))
    for j, k in pairs:
        m = np.zeros((dim, dim), dtype=complex)
        m[j, k], m[k, j] = -1j, 1j
        elements.append(scale * m)
        labels.append(f"a{j}{k}" if dim <= 10 else f"a{j},{k}")
    for j, k in pairs:
        m = np.zeros((dim, dim), dtype=complex)
        m[j, k] = m[k, j] = 1
        elements.append(scale * m)
        labels.append(f"s{j}{k}" if dim <= 10 else f"s{j},{k}")
    for l in range(1, dim):
        diag = np.zeros(dim)
        diag[:l] = 1
        diag[l] = -l
        elements.append(np.diag(diag * np.sqrt(dim / (l * (l + 1)))).astype(complex))
        labels.append(f"d{l}")
    return OperatorBasis(dim, np.array(elements), tuple(labels), Flavor.GELLMANN)


def pauli_string(label: str) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for ch in label:
        out = np.kron(out, _PAULI[ch])
    return out


def pauli_basis(n_qubits: int, max_dim: int = MAX_BASIS_DIM) -> OperatorBasis:
    """All 4^N Pauli strings, identity first, then lexicographic in 'IXYZ'."""
    if n_qubits < 1:
        raise ValueError(f"need at least one qubit, got {n_qubits}")
    dim = 2**n_qubits
    if dim > max_dim:
        raise ValueError(f"Pauli basis for D={dim} exceeds the size budget D <= {max_dim}")
    labels = ["".join(p) for p in itertools.product("IXYZ", repeat=n_qubits)]
    elements = np.array([pauli_string(lbl) for lbl in labels])
    return OperatorBasis(dim, elements, tuple(labels), Flavor.PAULI)


def is_power_of_two(dim: int) -> bool:
    return dim >= 1 and dim & (dim - 1) == 0


def symplectic_form(dim: int, variant: str = "canonical") -> np.ndarray:
    """Antisymmetric unitary J, either [[0, 1], [-1, 0]] blocks or i Y (x) X...X."""
    if dim < 2 or dim % 2:
        raise ValueError(f"symplectic form requires an even dimension, got {dim}")
    if variant == "canonical":
        h = dim // 2
        J = np.zeros((dim, dim), dtype=complex)
        J[:h, h:] = np.eye(h)
        J[h:, :h] = -np.eye(h)
        return J
    if variant == "pauli":
        if not is_power_of_two(dim):
            raise ValueError(f"Pauli-string symplectic form requires D = 2^N, got {dim}")
        n = dim.bit_length() - 1
        return 1j * pauli_string("Y" + "X" * (n - 1))
    raise ValueError(f"unknown symplectic variant {variant!r}")


@dataclass(frozen=True)
class CartanInvolution:
    """O -> -V O^T V^dagger, with V the identity (SO) or a symplectic form (SP)."""

    kind: Kind
    dim: int
    conjugator: np.ndarray

    def __post_init__(self):
        V = np.asarray(self.conjugator, dtype=complex)
        if V.shape != (self.dim, self.dim):
            raise ValueError("conjugator shape does not match dimension")
        if np.abs(V @ V.conj().T - np.eye(self.dim)).max() > 1e-12:
            raise ValueError("conjugator must be unitary")
        if self.kind is Kind.SP and np.abs(V.T + V).max() > 1e-12:
            raise ValueError("symplectic conjugator must be antisymmetric")
        object.__setattr__(self, "conjugator", _frozen(V))

    def __call__(self, m: np.ndarray) -> np.ndarray:
        return apply_involution(self, m)


def cartan_involution(dim: int, kind: Kind | str, variant: str = "canonical") -> CartanInvolution:
    kind = as_kind(kind)
    if kind is Kind.SP:
        if dim % 2:
            raise ValueError(f"SP requires even dimension, got D={dim}")
        return CartanInvolution(kind, dim, symplectic_form(dim, variant))
    if dim < 2:
        raise ValueError(f"need D >= 2, got {dim}")
    return CartanInvolution(kind, dim, np.eye(dim, dtype=complex))


def apply_involution(inv: CartanInvolution, m: np.ndarray) -> np.ndarray:
    m = np.asarray(m)
    if m.shape[-2:] != (inv.dim, inv.dim):
        raise ValueError(f"matrix of shape {m.shape} does not match D={inv.dim}")
    V = inv.conjugator
    return -V @ np.swapaxes(m, -1, -2) @ V.conj().T


@dataclass(frozen=True)
class CartanBasis:
    basis: OperatorBasis
    involution: CartanInvolution
    a_indices: tuple[int, ...]
    b_indices: tuple[int, ...]
    a: int = field(init=False)
    b: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "a", len(self.a_indices))
        object.__setattr__(self, "b", len(self.b_indices))
        if sorted(self.a_indices + self.b_indices) != list(range(1, len(self.basis))):
            raise ValueError("A and B indices must partition 1..D^2-1")

    @property
    def dim(self) -> int:
        return self.basis.dim

    @property
    def kind(self) -> Kind:
        return self.involution.kind

    @property
    def A(self) -> np.ndarray:
        return self.basis.elements[list(self.a_indices)]

    @property
    def B(self) -> np.ndarray:
        if not self.b_indices:
            return np.zeros((0, self.dim, self.dim), dtype=complex)
        return self.basis.elements[list(self.b_indices)]

    def eigenvalues(self) -> np.ndarray:
        """+1 on A, -1 on B, and 0 for the identity slot."""
        sign = np.zeros(len(self.basis))
        sign[list(self.a_indices)] = 1
        sign[list(self.b_indices)] = -1
        return sign


def _hs_gram_schmidt(vectors: np.ndarray, dim: int, cutoff: float = 1e-8) -> list[np.ndarray]:
    """Modified Gram-Schmidt under <X, Y> = tr(X^dagger Y) / D on flattened matrices."""
    kept: list[np.ndarray] = []
    for v in vectors:
        w = v.copy()
        for q in kept:
            w = w - q * (np.vdot(q, w) / dim)
        norm = np.sqrt(np.vdot(w, w).real / dim)
        if norm > cutoff:
            kept.append(w / norm)
    return kept


def cartan_partition(basis: OperatorBasis, inv: CartanInvolution) -> CartanBasis:
    """Split a basis into +1 (A) and -1 (B) eigenvectors of the involution.

    If the basis is not already an eigenbasis, the eigenspaces are rebuilt from the
    eigenprojections and re-orthonormalized, giving an InvolutionEigen basis.
    """
    if basis.dim != inv.dim:
        raise ValueError(f"basis D={basis.dim} and involution D={inv.dim} differ")
    dim = basis.dim
    expected = closed_form_dims(dim, inv.kind)
    traceless = basis.elements[1:]
    images = apply_involution(inv, traceless)
    plus = np.abs(images - traceless).reshape(len(traceless), -1).max(axis=1)
    minus = np.abs(images + traceless).reshape(len(traceless), -1).max(axis=1)

    if np.all(np.minimum(plus, minus) <= EIGEN_TOL):
        a_idx = tuple(int(i) + 1 for i in np.flatnonzero(plus <= EIGEN_TOL))
        b_idx = tuple(int(i) + 1 for i in np.flatnonzero(plus > EIGEN_TOL))
        cb = CartanBasis(basis, inv, a_idx, b_idx)
    else:
        flat = traceless.reshape(len(traceless), -1)
        img = images.reshape(len(traceless), -1)
        A = _hs_gram_schmidt((flat + img) / 2, dim)
        B = _hs_gram_schmidt((flat - img) / 2, dim)
        elements = np.concatenate(
            [basis.elements[:1], np.array(A + B).reshape(-1, dim, dim)]
        )
        labels = ("I",) + tuple(f"A{r}" for r in range(len(A))) + tuple(f"B{m}" for m in range(len(B)))
        new = OperatorBasis(dim, elements, labels, Flavor.INVOLUTION_EIGEN)
        cb = CartanBasis(
            new, inv, tuple(range(1, len(A) + 1)), tuple(range(len(A) + 1, len(A) + len(B) + 1))
        )
    if (cb.a, cb.b) != expected:
        raise ValueError(
            f"partition gave (a, b) = {(cb.a, cb.b)}, expected {expected} for "
            f"{inv.kind.value.upper()} at D={dim}: invalid basis/involution pairing"
        )
    return cb


def subspace_projector(cb: CartanBasis, sector: str = "A") -> np.ndarray:
    """Orthogonal projector (on vectorized D x D matrices) onto span A or span B."""
    els = cb.A if sector == "A" else cb.B
    flat = els.reshape(len(els), -1)
    return flat.T @ flat.conj() / cb.dim


def default_basis(dim: int, flavor: str = "auto") -> OperatorBasis:
    """Pauli strings when D is a power of two and flavor is auto, else Gell-Mann."""
    if flavor == "pauli" or (flavor == "auto" and is_power_of_two(dim)):
        return pauli_basis(dim.bit_length() - 1)
    if flavor in ("gellmann", "auto"):
        return gellmann_basis(dim)
    raise ValueError(f"unknown basis flavor {flavor!r}")


def build_cartan_basis(dim: int, kind: Kind | str, flavor: str = "auto",
                       variant: str = "canonical") -> CartanBasis:
    return cartan_partition(default_basis(dim, flavor), cartan_involution(dim, kind, variant))


@dataclass(frozen=True)
class CommutationReport:
    dim: int
    kind: Kind
    leakage: dict[str, float | None]  # None marks a vacuous relation
    tol: float = LEAKAGE_TOL
    notes: tuple[str, ...] = ()

    @property
    def vacuous(self) -> tuple[str, ...]:
        return tuple(k for k, v in self.leakage.items() if v is None)

    @property
    def passed(self) -> bool:
        return all(v is None or v <= self.tol for v in self.leakage.values())


def _odd_weight(label: str) -> bool:
    return sum(ch != "I" for ch in label) % 2 == 1


def commutation_audit(cb: CartanBasis, tol: float = LEAKAGE_TOL) -> CommutationReport:
    """Expand every commutator in the basis and measure weight in the forbidden sector."""
    dim = cb.dim
    A, B = cb.A, cb.B
    a_idx, b_idx = list(cb.a_indices), list(cb.b_indices)
    G = cb.basis.elements

    def leak(X, Y, forbidden):
        if len(X) == 0 or len(Y) == 0:
            return None
        if not forbidden:
            return 0.0
        comm = np.einsum("iab,jbc->ijac", X, Y) - np.einsum("jab,ibc->ijac", Y, X)
        coeff = np.einsum("ijac,kca->ijk", comm, G[forbidden]) / dim
        return float(np.abs(coeff).max())

    leakage = {
        "[A,A]<A": leak(A, A, b_idx),
        "[A,B]<B": leak(A, B, a_idx),
        "[B,B]<A": leak(B, B, b_idx),
    }
    notes = []
    if cb.basis.flavor is Flavor.PAULI and cb.kind is Kind.SP:
        labels = [cb.basis.labels[i] for i in a_idx]
        odd = [lbl for lbl in cb.basis.labels[1:] if _odd_weight(lbl)]
        if set(labels) != set(odd):
            notes.append(
                f"A-sector is not the set of odd-weight Pauli strings "
                f"({len(odd)} odd-weight strings vs a={cb.a})"
            )
    return CommutationReport(dim, cb.kind, leakage, tol, tuple(notes))


def basis_to_json(cb: CartanBasis) -> dict:
    els = cb.basis.elements
    return {
        "dim": cb.dim,
        "kind": cb.kind.value,
        "flavor": cb.basis.flavor.value,
        "labels": list(cb.basis.labels),
        "a": cb.a,
        "b": cb.b,
        "a_indices": list(cb.a_indices),
        "b_indices": list(cb.b_indices),
        "matrices": [
            [[[float(z.real), float(z.imag)] for z in row] for row in m] for m in els
        ],
    }
