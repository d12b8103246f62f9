from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .basis import Kind, as_kind, is_power_of_two

SCHEMA = "cartanchan/1"
DEFAULT_DIMS = (2, 4, 5, 8, 16)
FIGURE_DIMS = (4, 8, 16, 32)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    dims: tuple[int, ...] = DEFAULT_DIMS
    kinds: tuple[Kind, ...] = (Kind.SO, Kind.SP)
    tolerance: float = 1e-9
    cp_tolerance: float = 1e-12
    basis_flavor: str = "auto"
    seed: int = 42
    samples: int = 50
    output_dir: Path | None = None
    format: str = "json"
    ppt2_max_dim: int = 16
    alpha: float = 0.1
    beta: float = 0.05

    def __post_init__(self):
        if not self.dims:
            raise ConfigError("dims must be nonempty")
        if any(d < 2 for d in self.dims):
            raise ConfigError(f"dimensions must be >= 2, got {list(self.dims)}")
        kinds = tuple(as_kind(k) for k in self.kinds)
        object.__setattr__(self, "kinds", kinds)
        # with both kinds, odd D just skips SP; SP alone must not see odd D
        if kinds == (Kind.SP,):
            odd = [d for d in self.dims if d % 2]
            if odd:
                raise ConfigError(f"SP requires even dimension (got D={odd[0]})")
        if self.basis_flavor not in ("auto", "gellmann", "pauli"):
            raise ConfigError(f"unknown basis flavor {self.basis_flavor!r}")
        if self.format not in ("json", "csv"):
            raise ConfigError(f"unknown format {self.format!r}")
        if self.seed < 0:
            raise ConfigError("seed must be unsigned")

    def pairs(self) -> list[tuple[int, Kind]]:
        """Valid (dim, kind) work items in a fixed order."""
        return [(d, k) for d in self.dims for k in self.kinds if not (k is Kind.SP and d % 2)]

    def flavor_for(self, dim: int) -> str:
        if self.basis_flavor == "pauli" and not is_power_of_two(dim):
            raise ConfigError(f"Pauli basis needs D = 2^N, got D={dim}")
        if self.basis_flavor == "auto":
            return "pauli" if is_power_of_two(dim) else "gellmann"
        return self.basis_flavor
