"""Convex regions in the (alpha, beta) plane: CP, PPT and the WEB trapezoid.

Compositions of channels act as (a1, b1) * (a2, b2) -> (a1 a2, b1 b2), which is
bilinear, so the compositions of a polygon with itself are spanned by the
pairwise compositions of its vertices.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .basis import CartanBasis, Kind, as_kind, closed_form_dims
from .channels import CartanChannel, choi_direct, compose
from .liealg import projectors

log = logging.getLogger(__name__)

GEOM_TOL = 1e-10
EXTREME_LABELS = ("v1", "v2", "h1", "h2")

Point = tuple[float, float]


class RegionError(ValueError):
    """Empty, unbounded or degenerate half-plane intersection."""


@dataclass(frozen=True)
class HalfPlane:
    """c0 + cA alpha + cB beta >= 0."""

    c0: float
    cA: float
    cB: float
    label: str = ""

    def __post_init__(self):
        if self.cA == 0 and self.cB == 0:
            raise ValueError(f"half-plane {self.label!r} has a zero normal")

    def value(self, alpha: float, beta: float) -> float:
        return self.c0 + self.cA * alpha + self.cB * beta

    def mirrored(self) -> "HalfPlane":
        return HalfPlane(self.c0, -self.cA, self.cB, self.label + "~")


@dataclass(frozen=True)
class Region2D:
    vertices: tuple[Point, ...]
    halfplanes: tuple[HalfPlane, ...]
    area: float

    def convexity_residual(self) -> float:
        """Most negative half-plane value over the vertices (0 when all satisfied)."""
        worst = min(hp.value(*v) for v in self.vertices for hp in self.halfplanes)
        return max(0.0, -worst)


@dataclass(frozen=True)
class Containment:
    inside: bool
    margin: float


def _check_dims(dim: int, kind: Kind) -> None:
    if dim < 2:
        raise ValueError(f"need D >= 2, got {dim}")
    if kind is Kind.SP and dim % 2:
        raise ValueError(f"SP requires even dimension, got D={dim}")


def cp_halfplanes(dim: int, kind: Kind | str) -> list[HalfPlane]:
    """The three pi >= 0 constraints, ordered (pi_1, pi_A, pi_A^c).

    With an empty B sector (SP, D = 2) beta does not act, so its coefficients are dropped.
    """
    kind = as_kind(kind)
    _check_dims(dim, kind)
    a, b = closed_form_dims(dim, kind)
    h = dim / 2
    up = (1.0, h, -(h + 1))
    down = (1.0, -h, h - 1)
    rows = [("pi_1", (1.0, float(a), float(b)))]
    if kind is Kind.SO:
        rows += [("pi_so", up), ("pi_so_c", down)]
    else:
        rows += [("pi_sp", down), ("pi_sp_c", up)]
    if b == 0:
        rows = [(lbl, (c0, cA, 0.0)) for lbl, (c0, cA, _) in rows]
    return [HalfPlane(*coef, label=lbl) for lbl, coef in rows]


def ppt_halfplanes(dim: int, kind: Kind | str) -> list[HalfPlane]:
    cp = cp_halfplanes(dim, kind)
    return cp + [hp.mirrored() for hp in cp]


def halfplanes_from_basis(cb: CartanBasis) -> list[HalfPlane]:
    """CP constraints measured numerically from a concrete basis.

    Each constraint is D^2 tr(Pi rho(alpha, beta)) / rank(Pi), evaluated at three
    points to read off its affine coefficients. Rank-zero sectors are skipped.
    """
    ps = projectors(cb)
    D = cb.dim
    pts = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]
    chois = [choi_direct(CartanChannel(D, cb.kind, a, b), cb).matrix for a, b in pts]
    out = []
    for label, P, rank in zip(("pi_1", "pi_A", "pi_A_c"), ps.as_tuple(), (1, cb.a, cb.b)):
        if rank == 0:
            continue
        vals = [D**2 * float(np.trace(P @ rho).real) / rank for rho in chois]
        cB = vals[2] - vals[0] if cb.b else 0.0
        out.append(HalfPlane(vals[0], vals[1] - vals[0], cB, label))
    return out


def _recession_direction(hps: list[HalfPlane], tol: float) -> bool:
    # the recession cone of a 2D polyhedron is spanned by directions orthogonal to some normal
    for hp in hps:
        n = np.array([hp.cA, hp.cB])
        for d in (np.array([-n[1], n[0]]), np.array([n[1], -n[0]])):
            d = d / np.linalg.norm(d)
            if all(h.cA * d[0] + h.cB * d[1] >= -tol * math.hypot(h.cA, h.cB) for h in hps):
                return True
    return False


def _order_ccw(points: list[Point]) -> list[Point]:
    cx = sum(p[0] for p in points) / len(points)
    cy = sum(p[1] for p in points) / len(points)
    return sorted(points, key=lambda p: math.atan2(p[1] - cy, p[0] - cx))


def shoelace(points) -> float:
    n = len(points)
    s = sum(points[i][0] * points[(i + 1) % n][1] - points[(i + 1) % n][0] * points[i][1]
            for i in range(n))
    return 0.5 * s


def intersect_halfplanes(hps, tol: float = GEOM_TOL) -> Region2D:
    """Bounded intersection by enumerating pairwise line crossings."""
    hps = list(hps)
    if len(hps) < 3:
        raise RegionError("a bounded region needs at least three half-planes")
    candidates: list[Point] = []
    for h1, h2 in itertools.combinations(hps, 2):
        det = h1.cA * h2.cB - h2.cA * h1.cB
        if abs(det) < 1e-14:
            continue
        al = (-h1.c0 * h2.cB + h2.c0 * h1.cB) / det
        be = (-h1.cA * h2.c0 + h2.cA * h1.c0) / det
        if all(h.value(al, be) >= -tol for h in hps):
            if not any(abs(al - p[0]) <= tol and abs(be - p[1]) <= tol for p in candidates):
                candidates.append((al + 0.0, be + 0.0))
    if _recession_direction(hps, tol):
        if candidates:
            raise RegionError("half-plane intersection is unbounded")
        raise RegionError("half-plane intersection is empty or unbounded")
    if not candidates:
        raise RegionError("half-plane intersection is empty")
    if len(candidates) < 3:
        raise RegionError(f"half-plane intersection is degenerate ({len(candidates)} vertices)")
    verts = _order_ccw(candidates)
    return Region2D(tuple(verts), tuple(hps), shoelace(verts))


def cp_region(dim: int, kind: Kind | str) -> Region2D:
    return intersect_halfplanes(cp_halfplanes(dim, kind))


def ppt_region(dim: int, kind: Kind | str) -> Region2D:
    return intersect_halfplanes(ppt_halfplanes(dim, kind))


def extreme_ppt(dim: int, kind: Kind | str) -> list[Point]:
    """Closed-form PPT vertices in the order (v1, v2, h1, h2)."""
    kind = as_kind(kind)
    D = dim
    if kind is Kind.SO:
        if D < 3:
            raise ValueError(f"SO extreme PPT points need D >= 3, got {D}")
        h = (D - 2) / ((D + 2) * (D - 1))
        return [(0.0, 2 / (D + 2)), (0.0, -2 / ((D - 1) * (D + 2))), (1 / (D - 1), h), (-1 / (D - 1), h)]
    if D < 4 or D % 2:
        raise ValueError(f"SP extreme PPT points need even D >= 4, got {D}")
    return [(0.0, 2 / (D + 2)), (0.0, -2 / ((D - 2) * (D + 1))), (1 / (D + 1), 1 / (D + 1)),
            (-1 / (D + 1), 1 / (D + 1))]


def web_halfplanes(dim: int) -> list[HalfPlane]:
    D = dim
    return [
        HalfPlane(1.0, 0.0, -(D + 1.0), "top"),
        HalfPlane(1.0, 0.0, D * D - 1.0, "bottom"),
        HalfPlane(2.0, -D * (D + 1.0), (D + 1.0) * (D - 2.0), "right"),
        HalfPlane(2.0, D * (D + 1.0), (D + 1.0) * (D - 2.0), "left"),
    ]


def web_vertices(dim: int) -> list[Point]:
    top, bot = 1 / (dim + 1), 1 / (dim * dim - 1)
    return _order_ccw([(top, top), (-top, top), (-bot, -bot), (bot, -bot)])


def web_region(dim: int) -> Region2D:
    """Hull of the PPT depolarizing segment and its mirror under alpha -> -alpha."""
    if dim < 2:
        raise ValueError(f"need D >= 2, got {dim}")
    verts = web_vertices(dim)
    return Region2D(tuple(verts), tuple(web_halfplanes(dim)), shoelace(verts))


def contains(region: Region2D, p: Point, tol: float = 1e-12) -> Containment:
    margin = min(hp.value(*p) for hp in region.halfplanes)
    return Containment(margin >= -tol, margin)


def vertex_distance(found, expected) -> float:
    """Max over expected of distance to the nearest found vertex, symmetrized."""
    if len(found) != len(expected):
        return math.inf
    f, e = np.asarray(found, float), np.asarray(expected, float)
    d = np.abs(f[:, None, :] - e[None, :, :]).max(axis=2)
    return float(max(d.min(axis=0).max(), d.min(axis=1).max()))


@dataclass(frozen=True)
class Composition:
    pair: tuple[str, str]
    point: Point
    in_web: bool
    margin: float


@dataclass(frozen=True)
class NamedCheck:
    name: str
    pair: tuple[str, str]
    closed_form: Point
    composed: Point
    error: float
    matches: bool
    bound_holds: bool
    bound: str


@dataclass(frozen=True)
class Ppt2Report:
    dim: int
    kind: Kind
    compositions: tuple[Composition, ...]
    named: tuple[NamedCheck, ...]
    informational: bool = False
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def verdict(self) -> bool:
        return all(c.in_web for c in self.compositions)

    @property
    def named_ok(self) -> bool:
        return all(n.matches and n.bound_holds for n in self.named)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "kind": self.kind.value,
            "verdict": self.verdict,
            "informational": self.informational,
            "compositions": [
                {"pair": list(c.pair), "alpha": c.point[0], "beta": c.point[1],
                 "in_web": c.in_web, "margin": c.margin}
                for c in self.compositions
            ],
            "named": [
                {"name": n.name, "pair": list(n.pair), "closed_form": list(n.closed_form),
                 "composed": list(n.composed), "error": n.error, "matches": n.matches,
                 "bound": n.bound, "bound_holds": n.bound_holds}
                for n in self.named
            ],
            "notes": list(self.notes),
        }


def _named_closed_forms(D: int, kind: Kind):
    """(name, pair, closed form, bound description, bound predicate on the point)."""
    top, bot = 1 / (D + 1), -1 / (D * D - 1)
    web_edge = lambda p: (D + 1) * (D - 2) * p[1] - D * (D + 1) * p[0] + 2 > 0
    if kind is Kind.SO:
        return [
            ("beta_1v", ("v1", "v1"), (0.0, 4 / (D + 2) ** 2), "beta < 1/(D+1)", lambda p: p[1] < top),
            ("beta_2v", ("v1", "v2"), (0.0, -4 / ((D + 2) ** 2 * (D - 1))), "beta > -1/(D^2-1)",
             lambda p: p[1] > bot),
            ("beta_1vh", ("v1", "h1"), (0.0, 4 / (D + 2) ** 2 * (D / 2 - 1) / (D - 1)), "beta < 1/(D+1)",
             lambda p: p[1] < top),
            ("beta_2vh", ("v2", "h1"), (0.0, -(D / 2 - 1) / ((D / 2 + 1) ** 2 * (D - 1) ** 2)),
             "beta > -1/(D^2-1)", lambda p: p[1] > bot),
            ("h1h1", ("h1", "h1"), (1 / (D - 1) ** 2, (D - 2) ** 2 / ((D + 2) ** 2 * (D - 1) ** 2)),
             "(D+1)(D-2)beta - D(D+1)alpha + 2 > 0", web_edge),
        ]
    return [
        ("beta_1v", ("v1", "v1"), (0.0, 4 / (D + 2) ** 2), "beta < 1/(D+1)", lambda p: p[1] < top),
        ("beta_2v", ("v1", "v2"), (0.0, -4 / ((D * D - 4) * (D + 1))), "beta > -1/(D^2-1)",
         lambda p: p[1] > bot),
        ("beta_1vh", ("v1", "h1"), (0.0, 2 / ((D + 2) * (D + 1))), "beta < 1/(D+1)", lambda p: p[1] < top),
        # the (D-1) variant of this denominator does not equal the v2 o h1 composition
        ("beta_2vh", ("v2", "h1"), (0.0, -2 / ((D - 2) * (D + 1) ** 2)), "beta > -1/(D^2-1)",
         lambda p: p[1] > bot),
        ("h1h1", ("h1", "h1"), (1 / (D + 1) ** 2, 1 / (D + 1) ** 2), "alpha < 1/(D^2-1), beta < 1/(D+1)",
         lambda p: p[0] < -bot and p[1] < top),
    ]


def ppt2_verify(dim: int, kind: Kind | str, named_tol: float = 1e-12) -> Ppt2Report:
    """Compose every pair of extreme PPT channels and test membership in WEB."""
    kind = as_kind(kind)
    pts = dict(zip(EXTREME_LABELS, extreme_ppt(dim, kind)))
    web = web_region(dim)
    comps = []
    for l1, l2 in itertools.combinations_with_replacement(EXTREME_LABELS, 2):
        c = compose(CartanChannel(dim, kind, *pts[l1]), CartanChannel(dim, kind, *pts[l2]))
        res = contains(web, c.point)
        comps.append(Composition((l1, l2), c.point, res.inside, res.margin))
    composed = {c.pair: c.point for c in comps}
    named = []
    for name, pair, closed, bound, pred in _named_closed_forms(dim, kind):
        got = composed[pair]
        err = max(abs(got[0] - closed[0]), abs(got[1] - closed[1]))
        named.append(NamedCheck(name, pair, closed, got, err, err <= named_tol, bool(pred(got)), bound))
    small = dim < 5 or (kind is Kind.SP and dim < 6)
    notes = ("D below the range covered by the WEB argument; reported for information",) if small else ()
    report = Ppt2Report(dim, kind, tuple(comps), tuple(named), small, notes)
    if not report.verdict and not small:
        log.error("PPT^2 check FAILED for %s D=%d: composition outside WEB", kind.value, dim)
    return report


@dataclass(frozen=True)
class SweepEntry:
    dim: int
    kind: Kind
    cp: Region2D | None
    ppt: Region2D | None
    error: str | None = None


def region_sweep(dims, kind: Kind | str) -> list[SweepEntry]:
    kind = as_kind(kind)
    out = []
    for D in dims:
        try:
            out.append(SweepEntry(D, kind, cp_region(D, kind), ppt_region(D, kind)))
        except ValueError as exc:
            out.append(SweepEntry(D, kind, None, None, str(exc)))
    return out


def sample_cp_channels(dim: int, kind: Kind | str, n: int, seed: int = 0) -> list[CartanChannel]:
    """Seeded rejection sampling from the bounding box of the CP region."""
    kind = as_kind(kind)
    rng = np.random.default_rng(seed)
    hps = cp_halfplanes(dim, kind)
    _, b = closed_form_dims(dim, kind)
    if b == 0:
        # SP at D = 2: beta does not act and the CP set is the strip -1/3 <= alpha <= 1
        box = (-1 / 3, 1.0, -1.0, 1.0)
    else:
        verts = cp_region(dim, kind).vertices
        box = (min(v[0] for v in verts), max(v[0] for v in verts),
               min(v[1] for v in verts), max(v[1] for v in verts))
    out: list[CartanChannel] = []
    while len(out) < n:
        al = rng.uniform(box[0], box[1])
        be = rng.uniform(box[2], box[3])
        if all(hp.value(al, be) >= 0 for hp in hps):
            out.append(CartanChannel(dim, kind, al, be))
    return out
