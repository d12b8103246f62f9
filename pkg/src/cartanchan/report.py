"""Certification runs, figure data and serialization shared by the CLI."""

from __future__ import annotations

import itertools
import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import basis as bs
from . import channels as chn
from . import liealg as la
from . import regions as rg
from .basis import Kind
from .config import SCHEMA, RunConfig

log = logging.getLogger(__name__)


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def write_json(path: Path, obj) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_json(obj), encoding="utf-8")
    return path


def fmt17(x: float) -> str:
    return format(float(x) + 0.0, ".17g")


def write_points_csv(path: Path, points) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = ["alpha,beta"] + [f"{fmt17(a)},{fmt17(b)}" for a, b in points]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def _pts(points) -> list[list[float]]:
    return [[float(a) + 0.0, float(b) + 0.0] for a, b in points]


# -- per-command payloads -------------------------------------------------------------


def basis_payload(dim: int, kind: Kind, flavor: str) -> dict:
    cb = bs.build_cartan_basis(dim, kind, flavor)
    return {"schema": SCHEMA, **bs.basis_to_json(cb)}


def liealg_payload(dim: int, kind: Kind, flavor: str, tol: float = la.IDENTITY_TOL) -> tuple[dict, bool]:
    cb = bs.build_cartan_basis(dim, kind, flavor)
    sc = la.structure_constants(cb)
    ops = la.invariant_operators(cb)
    rep = la.verify_identities(sc, ops, tol)
    out = rep.to_json()
    passed = rep.passed
    try:
        ps = la.projectors(cb, ops, tol=max(tol, la.IDENTITY_TOL))
        for name, chk in la.projector_checks(cb, ps, tol).items():
            out[name] = chk.to_json()
            passed = passed and chk.passed
    except ValueError as exc:
        out["projectors"] = {"error": str(exc), "pass": False}
        passed = False
    if cb.b == 0:
        out["notes"] = ["empty B sector: B-dependent identities are vacuous"]
    return out, passed


def spectrum_payload(ch: chn.CartanChannel, cb: bs.CartanBasis, with_matrix: bool = False) -> dict:
    rep = chn.spectrum_report(ch, cb)
    out = {
        "dim": ch.dim,
        "kind": ch.kind.value,
        "alpha": ch.alpha,
        "beta": ch.beta,
        "analytic": [[v, m] for v, m in rep.analytic],
        "numeric": list(rep.numeric),
        "max_deviation": rep.max_deviation,
        "is_cp": chn.is_cp(ch),
        "is_ccp": chn.is_ccp(ch),
        "is_ppt": chn.is_ppt(ch),
    }
    if with_matrix:
        m = chn.choi_via_action(ch, cb).matrix
        out["matrix"] = [[[float(z.real), float(z.imag)] for z in row] for row in m]
    return out


def region_payload(dim: int, kind: Kind) -> dict:
    cp = rg.cp_region(dim, kind)
    ppt = rg.ppt_region(dim, kind)
    web = rg.web_region(dim)
    return {
        "dim": dim,
        "kind": kind.value,
        "cp_vertices": _pts(cp.vertices),
        "ppt_vertices": _pts(ppt.vertices),
        "web_vertices": _pts(web.vertices),
        "areas": {"cp": cp.area, "ppt": ppt.area, "web": web.area},
    }


# -- certification --------------------------------------------------------------------


@dataclass
class Section:
    name: str
    items: list[dict] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(it["pass"] for it in self.items)

    def to_json(self) -> dict:
        return {"pass": self.passed, "items": self.items, "skipped": self.skipped}


@dataclass
class CertificationReport:
    sections: list[Section]
    config: dict

    @property
    def overall(self) -> bool:
        return all(s.passed for s in self.sections)

    @property
    def timings(self) -> dict[str, float]:
        return {s.name: s.seconds for s in self.sections}

    def to_json(self) -> dict:
        # timings are kept out so that reruns are byte-identical
        return {
            "schema": SCHEMA,
            "config": self.config,
            "overall": self.overall,
            "sections": {s.name: s.to_json() for s in self.sections},
        }


def _random_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (m + m.conj().T) / 2


def involution_idempotency(inv: bs.CartanInvolution, n: int, seed: int) -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        h = _random_hermitian(rng, inv.dim)
        worst = max(worst, float(np.abs(bs.apply_involution(inv, bs.apply_involution(inv, h)) - h).max()))
    return worst


def basis_section(cfg: RunConfig, cap: int) -> Section:
    sec = Section("basis")
    tol = min(cfg.tolerance, bs.LEAKAGE_TOL)
    for dim, kind in cfg.pairs():
        if dim > cap:
            sec.skipped.append(f"{kind.value} D={dim}: above brute-force cap {cap}")
            continue
        cb = bs.build_cartan_basis(dim, kind, cfg.flavor_for(dim))
        audit = bs.commutation_audit(cb, tol)
        orth = cb.basis.orthogonality_residual()
        idem = involution_idempotency(cb.involution, 100, cfg.seed)
        ok = (audit.passed and orth <= tol and idem <= 1e-12
              and (cb.a, cb.b) == bs.closed_form_dims(dim, kind))
        sec.items.append({
            "dim": dim, "kind": kind.value, "flavor": cb.basis.flavor.value, "a": cb.a, "b": cb.b,
            "orthogonality": orth, "hermiticity": cb.basis.hermiticity_residual(),
            "involution_idempotency": idem, "leakage": audit.leakage,
            "vacuous": list(audit.vacuous), "notes": list(audit.notes), "pass": bool(ok),
        })
    for dim, kind in cfg.pairs():
        if dim in (4, 8) and dim <= cap:
            sec.items.append(basis_independence(dim, kind, cfg.tolerance))
    return sec


def basis_independence(dim: int, kind: Kind, tol: float = 1e-10) -> dict:
    """Gell-Mann-derived vs Pauli-derived partitions under the same involution."""
    inv = bs.cartan_involution(dim, kind)
    gm = bs.cartan_partition(bs.gellmann_basis(dim), inv)
    pa = bs.cartan_partition(bs.pauli_basis(dim.bit_length() - 1), inv)
    proj = float(np.linalg.norm(bs.subspace_projector(gm) - bs.subspace_projector(pa), 2))
    ch = chn.CartanChannel(dim, kind, 0.1, 0.05)
    spec = float(np.abs(chn.numeric_spectrum(chn.choi_direct(ch, gm))
                        - chn.numeric_spectrum(chn.choi_direct(ch, pa))).max())
    vg = rg.intersect_halfplanes(rg.halfplanes_from_basis(gm))
    vp = rg.intersect_halfplanes(rg.halfplanes_from_basis(pa))
    vert = rg.vertex_distance(vg.vertices, vp.vertices)
    ok = ((gm.a, gm.b) == (pa.a, pa.b) and proj <= max(tol, 1e-10)
          and spec <= max(tol, 1e-10) and vert <= 1e-10)
    return {"check": "basis_independence", "dim": dim, "kind": kind.value,
            "ab_gellmann": [gm.a, gm.b], "ab_pauli": [pa.a, pa.b], "projector_diff": proj,
            "spectrum_diff": spec, "vertex_diff": vert, "pass": bool(ok)}


def liealg_section(cfg: RunConfig, cap: int) -> Section:
    sec = Section("lie_structure")
    for dim, kind in cfg.pairs():
        if dim > cap:
            sec.skipped.append(f"{kind.value} D={dim}: above brute-force cap {cap}")
            continue
        out, passed = liealg_payload(dim, kind, cfg.flavor_for(dim), min(cfg.tolerance, la.IDENTITY_TOL))
        out["pass"] = bool(passed)
        sec.items.append(out)
    return sec


def channel_checks(dim: int, kind: Kind, cb: bs.CartanBasis, samples, tol: float,
                   cp_tol: float) -> dict:
    spec_dev = two_path = pt_dev = 0.0
    for ch in samples:
        direct = chn.choi_direct(ch, cb).matrix
        via = chn.choi_via_action(ch, cb).matrix
        spec_dev = max(spec_dev, chn.spectrum_report(ch, cb).max_deviation)
        ev_d, ev_v = np.linalg.eigvalsh(direct), np.linalg.eigvalsh(via)
        two_path = max(two_path, float(np.abs(ev_d - ev_v).max()))
        if kind is Kind.SO:
            two_path = max(two_path, float(np.abs(direct - via).max()))
        pt = chn.partial_transpose(via, dim)
        mirror = chn.choi_via_action(ch.mirrored(), cb).matrix
        pt_dev = max(pt_dev, float(np.abs(np.linalg.eigvalsh(pt) - np.linalg.eigvalsh(mirror)).max()))
        if kind is Kind.SO:
            pt_dev = max(pt_dev, float(np.abs(pt - mirror).max()))
    kraus_dev = 0.0
    for ch in samples[:3]:
        ks = chn.kraus_from_choi(chn.choi_via_action(ch, cb))
        kraus_dev = max(kraus_dev, ks.completeness_residual())
        for G in cb.basis.elements:
            kraus_dev = max(kraus_dev, float(np.abs(ks.apply(G) - chn.apply_channel(ch, G, cb)).max()))
    unital = max(float(np.abs(chn.apply_channel(ch, np.eye(dim) / dim, cb) - np.eye(dim) / dim).max())
                 for ch in samples)
    ident = chn.CartanChannel(dim, kind, 1.0, 1.0)
    dep = -1 / (dim**2 - 1)
    sat = abs(chn.pi_values(chn.CartanChannel(dim, kind, dep, dep))[0])
    out = {
        "dim": dim, "kind": kind.value, "samples": len(samples),
        "spectrum_deviation": spec_dev, "two_path": two_path, "pt_rule": pt_dev,
        "kraus_roundtrip": kraus_dev, "unitality": unital,
        "identity_cp": chn.is_cp(ident, cp_tol), "identity_ppt": chn.is_ppt(ident, cp_tol),
        "depolarizing_pi1": sat,
    }
    ok = (spec_dev <= tol and two_path <= max(tol, 1e-10) and pt_dev <= max(tol, 1e-10)
          and kraus_dev <= max(tol, 1e-9) and unital <= max(tol, 1e-12)
          and out["identity_cp"] and not out["identity_ppt"] and sat <= 1e-12)
    if bs.is_power_of_two(dim):
        grid = np.linspace(-0.5, 1.0, 5)
        dis = sum(
            chn.qubit_hadamard_cp_check(chn.CartanChannel(dim, kind, a, b), tol=cp_tol)
            != chn.is_cp(chn.CartanChannel(dim, kind, a, b), cp_tol)
            for a, b in itertools.product(grid, grid)
        )
        out["hadamard_disagreements"] = int(dis)
        ok = ok and dis == 0
    out["pass"] = bool(ok)
    return out


def channels_section(cfg: RunConfig, cap: int) -> Section:
    sec = Section("channels")
    for dim, kind in cfg.pairs():
        if dim > cap:
            sec.skipped.append(f"{kind.value} D={dim}: above brute-force cap {cap}")
            continue
        cb = bs.build_cartan_basis(dim, kind, cfg.flavor_for(dim))
        samples = rg.sample_cp_channels(dim, kind, cfg.samples, cfg.seed)
        sec.items.append(channel_checks(dim, kind, cb, samples, cfg.tolerance, cfg.cp_tolerance))
    return sec


def region_checks(dim: int, kind: Kind) -> dict:
    cp = rg.cp_region(dim, kind)
    ppt = rg.ppt_region(dim, kind)
    web = rg.web_region(dim)
    out = {"dim": dim, "kind": kind.value, "cp_area": cp.area, "ppt_area": ppt.area}
    ok = True
    try:
        delta = rg.vertex_distance(ppt.vertices, rg.extreme_ppt(dim, kind))
        out["extreme_vertex_delta"] = delta
        ok = delta <= 1e-10
    except ValueError:
        out["extreme_vertex_delta"] = None
    web_delta = rg.vertex_distance(rg.intersect_halfplanes(rg.web_halfplanes(dim)).vertices, web.vertices)
    mirror = rg.vertex_distance(ppt.vertices, [(-a, b) for a, b in ppt.vertices])
    identity = min(max(abs(a - 1), abs(b - 1)) for a, b in cp.vertices)
    web_in_ppt = min(hp.value(*v) for v in web.vertices for hp in ppt.halfplanes)
    out.update({"web_vertex_delta": web_delta, "mirror_symmetry": mirror,
                "identity_vertex_delta": identity, "web_in_ppt_margin": web_in_ppt})
    ok = ok and web_delta <= 1e-10 and mirror <= 1e-12 and identity <= 1e-12 and web_in_ppt >= -1e-12
    out["pass"] = bool(ok)
    return out


def ppt2_range(kind: Kind, max_dim: int) -> list[int]:
    return list(range(5, max_dim + 1)) if kind is Kind.SO else list(range(6, max_dim + 1, 2))


def regions_section(cfg: RunConfig) -> Section:
    sec = Section("regions")
    for dim, kind in cfg.pairs():
        try:
            sec.items.append(region_checks(dim, kind))
        except rg.RegionError as exc:
            sec.skipped.append(f"{kind.value} D={dim}: {exc}")
    for kind in cfg.kinds:
        for dim in ppt2_range(kind, cfg.ppt2_max_dim):
            rep = rg.ppt2_verify(dim, kind)
            sec.items.append({
                "check": "ppt2", "dim": dim, "kind": kind.value, "verdict": rep.verdict,
                "named_ok": rep.named_ok,
                "min_margin": min(c.margin for c in rep.compositions),
                "pass": bool(rep.verdict and rep.named_ok),
            })
    return sec


def check_all(cfg: RunConfig) -> CertificationReport:
    cap = la.max_bruteforce_dim()
    sections = []
    for build in (lambda: basis_section(cfg, cap), lambda: liealg_section(cfg, cap),
                  lambda: channels_section(cfg, cap), lambda: regions_section(cfg)):
        t0 = time.perf_counter()
        sec = build()
        sec.seconds = time.perf_counter() - t0
        log.info("section %s: %s (%.2fs)", sec.name, "pass" if sec.passed else "FAIL", sec.seconds)
        sections.append(sec)
    config = {
        "dims": list(cfg.dims), "kinds": [k.value for k in cfg.kinds], "tolerance": cfg.tolerance,
        "cp_tolerance": cfg.cp_tolerance, "basis": cfg.basis_flavor, "seed": cfg.seed,
        "samples": cfg.samples, "ppt2_max_dim": cfg.ppt2_max_dim, "max_bruteforce_dim": cap,
    }
    return CertificationReport(sections, config)


# -- figures --------------------------------------------------------------------------


def emit_figures(out_dir: Path, dims=(4, 8, 16, 32), kinds=(Kind.SO, Kind.SP),
                 fig3=((Kind.SO, 5), (Kind.SP, 8))) -> dict:
    """Write CSV polygons for the CP/PPT region plots and the PPT^2 composition plot."""
    index: dict = {"schema": SCHEMA, "regions": [], "ppt2": []}
    figure_no = {Kind.SO: 1, Kind.SP: 2}
    for kind in kinds:
        for entry in rg.region_sweep([d for d in dims if not (kind is Kind.SP and d % 2)], kind):
            if entry.error:
                index["regions"].append({"dim": entry.dim, "kind": kind.value, "error": entry.error})
                continue
            n = figure_no[kind]
            cp_file = f"fig{n}a_cp_{kind.value}_D{entry.dim}.csv"
            ppt_file = f"fig{n}b_ppt_{kind.value}_D{entry.dim}.csv"
            write_points_csv(out_dir / cp_file, entry.cp.vertices)
            write_points_csv(out_dir / ppt_file, entry.ppt.vertices)
            index["regions"].append({
                "dim": entry.dim, "kind": kind.value, "cp_file": cp_file, "ppt_file": ppt_file,
                "cp_area": entry.cp.area, "ppt_area": entry.ppt.area,
            })
    for kind, dim in fig3:
        rep = rg.ppt2_verify(dim, kind)
        web_file = f"fig3_{kind.value}_D{dim}_web.csv"
        comp_file = f"fig3_{kind.value}_D{dim}_compositions.csv"
        write_points_csv(out_dir / web_file, rg.web_region(dim).vertices)
        write_points_csv(out_dir / comp_file, [c.point for c in rep.compositions])
        index["ppt2"].append({"dim": dim, "kind": kind.value, "web_file": web_file,
                              "compositions_file": comp_file, "verdict": rep.verdict})
    write_json(out_dir / "figures.json", index)
    return index
