"""`cartanchan` command-line entry point."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import channels as chn
from . import liealg as la
from . import regions as rg
from . import report as rp
from .basis import Kind, build_cartan_basis
from .config import DEFAULT_DIMS, FIGURE_DIMS, SCHEMA, ConfigError, RunConfig

log = logging.getLogger("cartanchan")

COMMANDS = ("basis", "verify-liealg", "choi", "spectrum", "region", "ppt2", "emit-figures", "check-all")


def _dims(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad --dims {text!r}; expected e.g. 4,8") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cartanchan", description="Verify Cartan-covariant quantum channels.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--dims", type=_dims, default=None, help="comma separated dimensions")
    p.add_argument("--kind", choices=("so", "sp", "both"), default="both")
    p.add_argument("--basis", choices=("auto", "gellmann", "pauli"), default="auto")
    p.add_argument("--tol", type=float, default=1e-9, help="identity tolerance")
    p.add_argument("--cp-tol", type=float, default=1e-12, help="constraint tolerance")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--out", type=Path, default=None, help="output directory (stdout if omitted)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--alpha", type=float, default=0.1)
    p.add_argument("--beta", type=float, default=0.05)
    p.add_argument("--ppt2-max", type=int, default=16, help="largest D in the check-all PPT^2 sweep")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def config_from_args(args) -> RunConfig:
    kinds = (Kind.SO, Kind.SP) if args.kind == "both" else (Kind(args.kind),)
    default = FIGURE_DIMS if args.command == "emit-figures" else DEFAULT_DIMS
    return RunConfig(
        dims=args.dims if args.dims is not None else default,
        kinds=kinds, tolerance=args.tol, cp_tolerance=args.cp_tol, basis_flavor=args.basis,
        seed=args.seed, samples=args.samples, output_dir=args.out, format=args.format,
        ppt2_max_dim=args.ppt2_max, alpha=args.alpha, beta=args.beta,
    )


class Sink:
    """Writes named outputs into a directory, or concatenates them on stdout."""

    def __init__(self, out_dir: Path | None):
        self.out_dir = out_dir

    def json(self, name: str, obj) -> None:
        if self.out_dir is None:
            sys.stdout.write(rp.dump_json(obj))
        else:
            rp.write_json(self.out_dir / name, obj)
            log.info("wrote %s", self.out_dir / name)

    def csv(self, name: str, points) -> None:
        if self.out_dir is None:
            sys.stdout.write(f"# {name}\nalpha,beta\n")
            sys.stdout.writelines(f"{rp.fmt17(a)},{rp.fmt17(b)}\n" for a, b in points)
        else:
            rp.write_points_csv(self.out_dir / name, points)
            log.info("wrote %s", self.out_dir / name)


def _tag(dim: int, kind: Kind) -> str:
    return f"{kind.value}_D{dim}"


def cmd_basis(cfg: RunConfig, sink: Sink) -> bool:
    for dim, kind in cfg.pairs():
        sink.json(f"basis_{_tag(dim, kind)}.json", rp.basis_payload(dim, kind, cfg.flavor_for(dim)))
    return True


def cmd_verify_liealg(cfg: RunConfig, sink: Sink) -> bool:
    cap = la.max_bruteforce_dim()
    over = [d for d in cfg.dims if d > cap]
    if over:
        raise ConfigError(f"D={over[0]} exceeds the brute-force cap {cap} (set CARTANCHAN_MAX_DIM to raise it)")
    ok = True
    for dim, kind in cfg.pairs():
        out, passed = rp.liealg_payload(dim, kind, cfg.flavor_for(dim), min(cfg.tolerance, la.IDENTITY_TOL))
        sink.json(f"liealg_{_tag(dim, kind)}.json", {"schema": SCHEMA, **out, "pass": passed})
        ok = ok and passed
    return ok


def _channel_cmd(cfg: RunConfig, sink: Sink, with_matrix: bool) -> bool:
    ok = True
    prefix = "choi" if with_matrix else "spectrum"
    for dim, kind in cfg.pairs():
        cb = build_cartan_basis(dim, kind, cfg.flavor_for(dim))
        ch = chn.CartanChannel(dim, kind, cfg.alpha, cfg.beta)
        out = rp.spectrum_payload(ch, cb, with_matrix)
        out["pass"] = out["max_deviation"] <= cfg.tolerance
        ok = ok and out["pass"]
        sink.json(f"{prefix}_{_tag(dim, kind)}.json", {"schema": SCHEMA, **out})
    return ok


def cmd_choi(cfg: RunConfig, sink: Sink) -> bool:
    return _channel_cmd(cfg, sink, True)


def cmd_spectrum(cfg: RunConfig, sink: Sink) -> bool:
    return _channel_cmd(cfg, sink, False)


def cmd_region(cfg: RunConfig, sink: Sink) -> bool:
    for dim, kind in cfg.pairs():
        out = rp.region_payload(dim, kind)
        if cfg.format == "csv":
            sink.csv(f"region_{_tag(dim, kind)}_cp.csv", out["cp_vertices"])
            sink.csv(f"region_{_tag(dim, kind)}_ppt.csv", out["ppt_vertices"])
        else:
            sink.json(f"region_{_tag(dim, kind)}.json", {"schema": SCHEMA, **out})
    return True


def cmd_ppt2(cfg: RunConfig, sink: Sink) -> bool:
    ok = True
    for dim, kind in cfg.pairs():
        rep = rg.ppt2_verify(dim, kind)
        if not rep.informational:
            ok = ok and rep.verdict and rep.named_ok
        sink.json(f"ppt2_{_tag(dim, kind)}.json", {"schema": SCHEMA, **rep.to_json(), "named_ok": rep.named_ok})
    return ok


def cmd_emit_figures(cfg: RunConfig, sink: Sink) -> bool:
    out = cfg.output_dir or Path("figures")
    index = rp.emit_figures(out, cfg.dims, cfg.kinds)
    log.info("wrote %d region entries to %s", len(index["regions"]), out)
    return all("error" not in e for e in index["regions"]) and all(e["verdict"] for e in index["ppt2"])


def cmd_check_all(cfg: RunConfig, sink: Sink) -> bool:
    report = rp.check_all(cfg)
    sink.json("check_all.json", report.to_json())
    for sec in report.sections:
        print(f"{sec.name}: {'pass' if sec.passed else 'FAIL'} ({sec.seconds:.2f}s)", file=sys.stderr)
    return report.overall


HANDLERS = {
    "basis": cmd_basis, "verify-liealg": cmd_verify_liealg, "choi": cmd_choi,
    "spectrum": cmd_spectrum, "region": cmd_region, "ppt2": cmd_ppt2,
    "emit-figures": cmd_emit_figures, "check-all": cmd_check_all,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        cfg = config_from_args(args)
        ok = HANDLERS[args.command](cfg, Sink(cfg.output_dir))
    except (ConfigError, ValueError) as exc:
        print(f"cartanchan: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"cartanchan: io error: {exc}", file=sys.stderr)
        return 3
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
