"""Structure constants, their Cartan block views, invariant operators and projectors.

Structure constants are indexed over the traceless elements G_1..G_{D^2-1}, so
tensor index ``i`` refers to basis element ``i + 1``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .basis import CartanBasis, Kind

DEFAULT_MAX_DIM = 8
IDENTITY_TOL = 1e-8


def max_bruteforce_dim() -> int:
    """Brute-force cap, overridable through CARTANCHAN_MAX_DIM."""
    return int(os.environ.get("CARTANCHAN_MAX_DIM", DEFAULT_MAX_DIM))


def rel_residual(lhs: np.ndarray, rhs: np.ndarray) -> float:
    lhs, rhs = np.asarray(lhs), np.asarray(rhs)
    scale = max(1.0, float(np.abs(rhs).max(initial=0.0)))
    return float(np.abs(lhs - rhs).max(initial=0.0)) / scale


@dataclass(frozen=True)
class StructureConstants:
    dim: int
    Y: np.ndarray
    U: np.ndarray
    partition: CartanBasis
    imag_residual: float = 0.0

    @property
    def a_slots(self) -> np.ndarray:
        return np.asarray(self.partition.a_indices, dtype=int) - 1

    @property
    def b_slots(self) -> np.ndarray:
        return np.asarray(self.partition.b_indices, dtype=int) - 1


def structure_constants(cb: CartanBasis, imag_tol: float = 1e-8) -> StructureConstants:
    """Y_ijk = -(i/D) tr([G_i, G_j] G_k) and U_ijk = (1/D) tr({G_i, G_j} G_k)."""
    D = cb.dim
    G = cb.basis.elements[1:]
    n = len(G)
    prod = np.einsum("iab,jbc->ijac", G, G).reshape(n * n, D * D)
    # T_ijk = tr(G_i G_j G_k)
    T = (prod @ G.transpose(0, 2, 1).reshape(n, D * D).T).reshape(n, n, n)
    Tswap = T.transpose(1, 0, 2)
    Yc = -1j * (T - Tswap) / D
    Uc = (T + Tswap) / D
    imag = float(max(np.abs(Yc.imag).max(), np.abs(Uc.imag).max()))
    if imag > imag_tol:
        raise ValueError(f"structure constants have imaginary residue {imag:.3g}; basis is not orthonormal")
    Y = Yc.real.copy()
    idx = np.arange(n)
    Y[idx, idx, :] = 0.0
    return StructureConstants(D, Y, Uc.real.copy(), cb, imag)


def reconstruction_residual(sc: StructureConstants) -> float:
    """Max entry error of G_i G_j = delta_ij 1 + (1/2) sum_k (i Y_ijk + U_ijk) G_k."""
    G = sc.partition.basis.elements[1:]
    n, D = len(G), sc.dim
    lhs = np.einsum("iab,jbc->ijac", G, G)
    rhs = np.einsum("ijk,kac->ijac", 0.5 * (1j * sc.Y + sc.U), G)
    rhs = rhs + np.einsum("ij,ac->ijac", np.eye(n), np.eye(D))
    return float(np.abs(lhs - rhs).max())


def symmetry_residuals(sc: StructureConstants) -> dict[str, float]:
    Y, U = sc.Y, sc.U
    perms = [(1, 0, 2), (0, 2, 1), (2, 1, 0)]
    return {
        "Y_antisymmetry": float(max(np.abs(Y + Y.transpose(p)).max() for p in perms)),
        "U_symmetry": float(max(np.abs(U - U.transpose(p)).max() for p in perms)),
        "U_trace": float(np.abs(np.einsum("iij->j", U)).max()),
    }


@dataclass(frozen=True)
class BlockViews:
    """Block families of (Y_j)_ik = Y_ijk and (U_j)_ik = U_ijk split along A/B."""

    x: np.ndarray  # (a, a, a), x[r] antisymmetric
    z: np.ndarray  # (a, b, b), z[r] antisymmetric
    y: np.ndarray  # (b, a, b)
    u: np.ndarray  # (a, a, b)
    v: np.ndarray  # (b, a, a), v[mu] symmetric
    w: np.ndarray  # (b, b, b), w[mu] symmetric
    leakage: dict[str, float] = field(default_factory=dict)
    block_traces: dict[str, float] = field(default_factory=dict)

    @property
    def max_leakage(self) -> float:
        return max(self.leakage.values(), default=0.0)


def _block(T: np.ndarray, rows, mid, cols) -> np.ndarray:
    # returns M[j, i, k] = T[i, j, k] for i in rows, j in mid, k in cols
    return T[np.ix_(rows, mid, cols)].transpose(1, 0, 2)


def _maxabs(arr: np.ndarray) -> float:
    return float(np.abs(arr).max(initial=0.0))


def block_decompose(sc: StructureConstants) -> BlockViews:
    A, B = sc.a_slots, sc.b_slots
    Y, U = sc.Y, sc.U
    leakage = {
        "Y_r[A,B]": _maxabs(_block(Y, A, A, B)),
        "Y_mu[A,A]": _maxabs(_block(Y, A, B, A)),
        "Y_mu[B,B]": _maxabs(_block(Y, B, B, B)),
        "U_r[A,A]": _maxabs(_block(U, A, A, A)),
        "U_r[B,B]": _maxabs(_block(U, B, A, B)),
        "U_mu[A,B]": _maxabs(_block(U, A, B, B)),
    }
    x, z = _block(Y, A, A, A), _block(Y, B, A, B)
    v, w = _block(U, A, B, A), _block(U, B, B, B)
    traces = {
        "tr x_r": _maxabs(np.einsum("rii->r", x)),
        "tr z_r": _maxabs(np.einsum("rii->r", z)),
        "tr v_mu": _maxabs(np.einsum("mii->m", v)),
        "tr w_mu": _maxabs(np.einsum("mii->m", w)),
    }
    return BlockViews(x=x, z=z, y=_block(Y, A, B, B), u=_block(U, A, A, B), v=v, w=w,
                      leakage=leakage, block_traces=traces)


def block_trace_constants(dim: int, kind: Kind) -> dict[str, float]:
    """Closed forms c with tr(q_s q_t) = c delta_st for each block family q."""
    D = dim
    if kind is Kind.SO:
        return {"x": -D * (D - 2), "z": -D * (D + 2), "v": D * (D - 2), "w": (D - 2) * (D + 4)}
    return {"x": -D * (D + 2), "z": -D * (D - 2), "v": D * (D + 2), "w": (D + 2) * (D - 4)}


def quadratic_coefficients(dim: int, kind: Kind) -> dict[str, tuple[float, float, float]]:
    """(c_1, c_L, c_Lbar) for L^2, Lbar^2 and L Lbar in span{1, L, Lbar}."""
    h = dim / 2
    if kind is Kind.SO:
        a, b = dim * (dim - 1) / 2, (dim + 2) * (dim - 1) / 2
        return {
            "L^2": (a, -h * (h - 1), h * (h - 1)),
            "Lbar^2": (b, -h * (h + 1), (h + 2) * (h - 1)),
            "L*Lbar": (0.0, (h + 1) * (h - 1), -h * h),
        }
    a, b = dim * (dim + 1) / 2, (dim - 2) * (dim + 1) / 2
    return {
        "L^2": (a, -h * (h + 1), h * (h + 1)),
        "Lbar^2": (b, -h * (h - 1), (h + 1) * (h - 2)),
        "L*Lbar": (0.0, (h + 1) * (h - 1), -h * h),
    }


@dataclass(frozen=True)
class InvariantOperators:
    L: np.ndarray
    Lbar: np.ndarray

    def commutator_norm(self) -> float:
        return float(np.linalg.norm(self.L @ self.Lbar - self.Lbar @ self.L, 2))


def _sum_kron(ops: np.ndarray, dim: int) -> np.ndarray:
    if len(ops) == 0:
        return np.zeros((dim * dim, dim * dim), dtype=complex)
    return np.einsum("rab,rcd->acbd", ops, ops).reshape(dim * dim, dim * dim)


def invariant_operators(cb: CartanBasis) -> InvariantOperators:
    """L = sum_r A_r (x) A_r and Lbar = sum_mu B_mu (x) B_mu."""
    return InvariantOperators(_sum_kron(cb.A, cb.dim), _sum_kron(cb.B, cb.dim))


@dataclass(frozen=True)
class ProjectorSet:
    pi1: np.ndarray
    piA: np.ndarray
    piAc: np.ndarray
    kind: Kind

    def as_tuple(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.pi1, self.piA, self.piAc

    def residuals(self) -> dict[str, float]:
        P = self.as_tuple()
        n = len(self.pi1)
        prod = max(
            float(np.abs(P[i] @ P[j] - (P[i] if i == j else 0)).max())
            for i in range(3) for j in range(3)
        )
        return {
            "products": prod,
            "completeness": float(np.abs(sum(P) - np.eye(n)).max()),
        }

    def traces(self) -> tuple[float, float, float]:
        return tuple(float(np.trace(p).real) for p in self.as_tuple())


def projectors(cb: CartanBasis, ops: InvariantOperators | None = None,
               tol: float = IDENTITY_TOL) -> ProjectorSet:
    ops = ops if ops is not None else invariant_operators(cb)
    D = cb.dim
    one = np.eye(D * D)
    pi1 = (one - ops.L + ops.Lbar) / D**2
    if cb.kind is Kind.SO:
        piA = (D * (D - 1) / 2 * one - D / 2 * ops.L - D / 2 * ops.Lbar) / D**2
    else:
        piA = (D * (D + 1) / 2 * one + D / 2 * ops.L + D / 2 * ops.Lbar) / D**2
    ps = ProjectorSet(pi1, piA, one - pi1 - piA, cb.kind)
    res = ps.residuals()
    if res["products"] > tol:
        raise ValueError(f"projector products violate Pi_I Pi_J = delta_IJ Pi_I by {res['products']:.3g}")
    return ps


@dataclass(frozen=True)
class IdentityCheck:
    residual: float
    passed: bool
    informational: bool = False
    vacuous: bool = False

    def to_json(self) -> dict:
        out = {"residual": self.residual, "pass": self.passed}
        if self.informational:
            out["informational"] = True
        if self.vacuous:
            out["vacuous"] = True
        return out


@dataclass(frozen=True)
class IdentityReport:
    dim: int
    kind: Kind
    checks: dict[str, IdentityCheck]
    fitted: dict[str, tuple[float, ...]]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values() if not c.informational)

    def failures(self) -> list[str]:
        return [k for k, c in self.checks.items() if not c.passed and not c.informational]

    def to_json(self) -> dict:
        out = {"dim": self.dim, "kind": self.kind.value}
        out.update({k: c.to_json() for k, c in self.checks.items()})
        return out


def _delta_check(gram: np.ndarray, const: float) -> float:
    return rel_residual(gram, const * np.eye(len(gram)))


def _fit_span(target: np.ndarray, basis_ops: list[np.ndarray]) -> tuple[np.ndarray, float]:
    M = np.stack([op.ravel() for op in basis_ops], axis=1)
    coef, *_ = np.linalg.lstsq(M, target.ravel(), rcond=None)
    resid = rel_residual(M @ coef, target.ravel())
    return coef.real, resid


def verify_identities(sc: StructureConstants, ops: InvariantOperators | None = None,
                     tol: float = IDENTITY_TOL) -> IdentityReport:
    """Check every structure-constant and quadratic identity; residuals are relative."""
    cb = sc.partition
    D, kind, a, b = sc.dim, cb.kind, cb.a, cb.b
    Y, U = sc.Y, sc.U
    blocks = block_decompose(sc)
    ops = ops if ops is not None else invariant_operators(cb)
    checks: dict[str, IdentityCheck] = {}

    def put(name, resid, informational=False, vacuous=False):
        checks[name] = IdentityCheck(float(resid), bool(resid <= tol), informational, vacuous)

    sym = symmetry_residuals(sc)
    for name, val in sym.items():
        put(name, val)
    put("reconstruction", reconstruction_residual(sc))
    put("Y_global", _delta_check(np.einsum("ijk,ijl->kl", Y, Y), 2 * D**2))
    put("U_global", _delta_check(np.einsum("ijk,ijl->kl", U, U), 2 * (D**2 - 4)))
    put("block_sparsity", blocks.max_leakage)
    put("block_traces", max(blocks.block_traces.values()))

    consts = block_trace_constants(D, kind)
    for fam in ("x", "z", "v", "w"):
        q = getattr(blocks, fam)
        if len(q) == 0:
            put(f"{fam}_trace", 0.0, vacuous=True)
            continue
        gram = np.einsum("sij,tji->st", q, q)
        put(f"{fam}_trace", _delta_check(gram, consts[fam]))

    w2 = float(np.einsum("mij,mji->", blocks.w, blocks.w))
    put("w_sum", rel_residual(np.array(w2), np.array((D**2 - 4) * (3 * b - (D**2 - 1)))),
        vacuous=(b == 0))
    if b:
        gram = np.einsum("sij,tji->st", blocks.w, blocks.w)
        put("w_delta", _delta_check(gram, (D**2 - 4) * (3 * b - (D**2 - 1)) / b))
    else:
        put("w_delta", 0.0, vacuous=True)

    # derivation step; summation over all traceless i
    sumU = float(np.einsum("ijk,ijk->", U, U))
    Umu = U[:, sc.b_slots, :]
    rhs = 3 * float(np.einsum("imk,imk->", Umu, Umu)) - 2 * w2
    put("U_sum_split", rel_residual(np.array(sumU), np.array(rhs)), informational=True)

    L, Lb = ops.L, ops.Lbar
    one = np.eye(D * D)
    put("[L,Lbar]", float(np.linalg.norm(L @ Lb - Lb @ L, 2)) / max(1.0, float(np.abs(L).max())))
    put("tr L", abs(np.trace(L)) / D**2)
    put("tr Lbar", abs(np.trace(Lb)) / D**2)

    coeffs = quadratic_coefficients(D, kind)
    products = {"L^2": L @ L, "Lbar^2": Lb @ Lb, "L*Lbar": L @ Lb}
    fitted: dict[str, tuple[float, ...]] = {}
    span = [one, L] + ([Lb] if b else [])
    for name, lhs in products.items():
        c1, cL, cLb = coeffs[name]
        rhs = c1 * one + cL * L + cLb * Lb
        put(name, rel_residual(lhs, rhs), vacuous=(b == 0 and name != "L^2"))
        coef, resid = _fit_span(lhs, span)
        fitted[name] = tuple(float(c) for c in coef)
        put(f"{name} in span", resid)
        expected = np.array([c1, cL, cLb][: len(span)])
        put(f"{name} coefficients", rel_residual(coef, expected))
    return IdentityReport(D, kind, checks, fitted)


def projector_checks(cb: CartanBasis, ps: ProjectorSet, tol: float = IDENTITY_TOL) -> dict[str, IdentityCheck]:
    res = ps.residuals()
    expected = (1.0, float(cb.a), float(cb.b))
    tr_res = max(abs(t - e) for t, e in zip(ps.traces(), expected))
    return {
        "projector_products": IdentityCheck(res["products"], res["products"] <= tol),
        "projector_completeness": IdentityCheck(res["completeness"], res["completeness"] <= tol),
        "projector_traces": IdentityCheck(tr_res, tr_res <= tol),
    }
