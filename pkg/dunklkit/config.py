"""
Experiment configuration

TOML documents validated into pydantic models. Every tolerance and quadrature budget used by
the experiments and verification suites has a documented default here.
"""

import logging
import re
from pathlib import Path
from typing import Any, List, Literal, Optional, Tuple, Union

import tomli_w
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .area import AreaBudget
from .errors import ConfigError
from .poisson import BoundaryDatum
from .polyring import parse_poly
from .rootsys import RootSystemData, build_root_system

logger = logging.getLogger(__name__)

_POSITION = re.compile(r"line (\d+), column (\d+)")


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid")


class RootSystemSpec(_Model):
    kind: Literal["Z2d", "A", "B", "custom"] = "Z2d"
    lambdas: Optional[List[float]] = Field(default_factory=lambda: [0.5])
    rank: Optional[int] = None
    kappa: Optional[Union[float, List[float]]] = None
    d: Optional[int] = None
    kappa0: Optional[float] = None
    kappa1: Optional[float] = None
    roots: Optional[List[List[float]]] = None

    def build(self) -> RootSystemData:
        if self.kind == "Z2d":
            return build_root_system("Z2d", lambdas=self.lambdas)
        if self.kind == "A":
            return build_root_system("A", rank=self.rank, kappa=self.kappa)
        if self.kind == "B":
            return build_root_system("B", d=self.d, kappa0=self.kappa0, kappa1=self.kappa1)
        return build_root_system("custom", roots=self.roots, kappa=self.kappa)


class DatumSpec(_Model):
    """Boundary datum of a Poisson-backed field"""

    kind: Literal["constant", "polynomial_box", "indicator_box", "gaussian", "tabulated", "dirac"]
    value: float = 1.0
    lo: List[float] = Field(default_factory=list)
    hi: List[float] = Field(default_factory=list)
    polynomial: Optional[str] = None
    center: List[float] = Field(default_factory=list)
    width: float = 1.0
    amplitude: float = 1.0
    axes: List[List[float]] = Field(default_factory=list)
    values: List[Any] = Field(default_factory=list)

    def build(self, dim: int) -> BoundaryDatum:
        if self.kind == "constant":
            return BoundaryDatum.constant(self.value, dim)
        if self.kind == "indicator_box":
            return BoundaryDatum.indicator_box(self.lo, self.hi)
        if self.kind == "polynomial_box":
            return BoundaryDatum.polynomial_box(parse_poly(self.polynomial or "0", dim, has_y=False), self.lo, self.hi)
        if self.kind == "gaussian":
            return BoundaryDatum.gaussian(self.center or [0.0] * dim, self.width, self.amplitude)
        if self.kind == "tabulated":
            return BoundaryDatum.tabulated(self.axes, self.values)
        return BoundaryDatum.dirac(dim, self.amplitude)


class FieldSpec(_Model):
    kind: Literal["polynomial", "poisson"] = "poisson"
    polynomial: Optional[str] = None
    datum: Optional[DatumSpec] = None

    @model_validator(mode="after")
    def _complete(self) -> "FieldSpec":
        if self.kind == "polynomial" and not self.polynomial:
            raise ValueError("a polynomial field needs 'polynomial'")
        if self.kind == "poisson" and self.datum is None:
            raise ValueError("a poisson field needs a 'datum' table")
        return self


class ConeSettings(_Model):
    a: float = Field(1.0, gt=0)
    h: float = Field(1.0, gt=0)


class GridSpec(_Model):
    """points: boundary vertices; x/t/y: axes of a kernel-bound product grid; apertures for sweeps"""

    points: List[List[float]] = Field(default_factory=list)
    x: List[float] = Field(default_factory=list)
    t: List[float] = Field(default_factory=list)
    y: List[float] = Field(default_factory=list)
    apertures: List[float] = Field(default_factory=lambda: [1.0])

    @field_validator("points", mode="before")
    @classmethod
    def _scalars_are_points(cls, value: Any) -> Any:
        if isinstance(value, list):
            return [[v] if isinstance(v, (int, float)) else v for v in value]
        return value


class QuadratureBudget(_Model):
    n_jacobi: int = 64
    n_sphere: int = 16
    n_panel: int = 24
    levels: int = 12
    n_y: int = 8
    n_r: int = 12
    n_t: int = 32
    cheb_degree: int = 24
    n_slice: int = 16
    nt_levels: int = 14


class Tolerances(_Model):
    tol_mv: float = 1e-7
    tol_fd: float = 1e-6
    h_fd: float = 1e-4
    tol_harm: float = 1e-4
    fd_ratio: float = 1e-3
    tol_nt: float = 1e-3
    nt_bound_ratio: float = 2.0
    nt_window: int = Field(default=3, ge=1)
    nt_refinement: float = 0.05
    sandwich: float = 1e-5
    refinement: float = 0.05
    delta_rel: float = 1e-6
    divergence_ratio: float = 0.9
    normalization: float = 1e-6
    kernel_mass: float = 1e-8
    translation: float = 2e-6
    shift: float = 1e-10
    green: float = 1e-4
    maximum_principle: float = 1e-6
    agreement: float = 0.95


def area_budget(quadrature: QuadratureBudget, tolerances: Tolerances) -> AreaBudget:
    """The area-integral budget assembled from the configured quadrature sizes and tolerances"""
    q, tol = quadrature, tolerances
    return AreaBudget(
        levels=q.levels, n_y=q.n_y, n_r=q.n_r, n_t=q.n_t, n_sphere=q.n_sphere,
        n_jacobi=q.n_jacobi, cheb_degree=q.cheb_degree, rel_tol=tol.delta_rel,
        divergence_ratio=tol.divergence_ratio,
    )


class OutputSettings(_Model):
    directory: Optional[str] = None
    stem: str = "experiment"
    formats: List[Literal["json", "csv", "md"]] = Field(default_factory=lambda: ["json", "csv"])


class ExperimentConfig(_Model):
    experiment: Literal["fatou", "kernel_bounds", "area_sweep"]
    name: str = "experiment"
    seed: int = 0
    root_system: RootSystemSpec = Field(default_factory=RootSystemSpec)
    field: Optional[FieldSpec] = None
    cone: ConeSettings = Field(default_factory=ConeSettings)
    grid: GridSpec = Field(default_factory=GridSpec)
    quadrature: QuadratureBudget = Field(default_factory=QuadratureBudget)
    tolerances: Tolerances = Field(default_factory=Tolerances)
    output: OutputSettings = Field(default_factory=OutputSettings)

    @model_validator(mode="after")
    def _grid_matches_experiment(self) -> "ExperimentConfig":
        if self.experiment in ("fatou", "area_sweep"):
            if not self.grid.points:
                raise ValueError("empty grid: 'grid.points' lists no vertices")
            if self.field is None:
                raise ValueError(f"experiment '{self.experiment}' needs a 'field' table")
        if self.experiment == "kernel_bounds" and not (self.grid.x and self.grid.t and self.grid.y):
            raise ValueError("empty grid: 'grid.x', 'grid.t' and 'grid.y' must all be non-empty")
        return self

    def area_budget(self) -> AreaBudget:
        return area_budget(self.quadrature, self.tolerances)

    def to_toml(self) -> str:
        return tomli_w.dumps(self.model_dump(mode="json", exclude_none=True))

    @classmethod
    def from_toml(cls, text: str) -> "ExperimentConfig":
        try:
            data = tomllib.loads(text)
        except tomllib.TOMLDecodeError as e:
            line, column = _position(e)
            raise ConfigError(f"malformed config: {e}", line=line, column=column) from e
        try:
            return cls.model_validate(data)
        except ValidationError as e:
            problems = "; ".join(
                f"{'.'.join(str(p) for p in err['loc']) or '<root>'}: {err['msg']}" for err in e.errors()
            )
            raise ConfigError(f"invalid config: {problems}") from e

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ExperimentConfig":
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigError(f"cannot read config {path}: {e}") from e
        config = cls.from_toml(text)
        logger.info(f"Loaded {config.experiment} config '{config.name}' from {path}")
        return config


def _position(error: tomllib.TOMLDecodeError) -> Tuple[Optional[int], Optional[int]]:
    line = getattr(error, "lineno", None)
    column = getattr(error, "colno", None)
    if line is None:
        match = _POSITION.search(str(error))
        if match:
            line, column = int(match.group(1)), int(match.group(2))
    return line, column


def bundled_config(name: str) -> Path:
    """Path of a config shipped in dunklkit/configs"""
    path = Path(__file__).parent / "configs" / (name if name.endswith(".toml") else f"{name}.toml")
    if not path.exists():
        raise ConfigError(f"no bundled config named {name}")
    return path


__all__ = [
    "ConeSettings",
    "DatumSpec",
    "ExperimentConfig",
    "FieldSpec",
    "GridSpec",
    "OutputSettings",
    "QuadratureBudget",
    "RootSystemSpec",
    "Tolerances",
    "area_budget",
    "bundled_config",
]
