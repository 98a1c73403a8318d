import cmath
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional
import logging

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator
from pydantic_core.core_schema import ValidationInfo

from core.dynamics import GammaParams
from core.errors import ConfigError

logger = logging.getLogger(__name__)


class StateKind(str, Enum):
    COHERENT = "coherent"
    PHASE = "phase"
    FOCK = "fock"
    CAT = "cat"
    RANDOM = "random"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class WignerTarget(str, Enum):
    RHO = "rho"
    RHO_D = "rho_D"
    RHO_ND = "rho_ND"
    ROP = "Rop"
    ROP_D = "Rop_D"
    ROP_ND = "Rop_ND"


class ExperimentConfig(BaseModel):
    """Flat experiment description; defaults follow the figure captions"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    # Model
    gamma: float = 1.0
    epsilon: float = Field(1.0, gt=0)
    omega: float = 0.0
    lam: float = 1.0
    hbar: float = Field(1.0, gt=0)
    delta_scale: float = 1.0

    # Initial state
    state: StateKind = StateKind.COHERENT
    alpha: float = 2.0
    alpha_phase: float = 0.0
    r: int = Field(6, ge=0)
    n: int = Field(0, ge=0)
    sign: int = 1
    seed: int = 0
    n_max: Optional[int] = Field(None, ge=0)

    # Time sampling
    dt: float = Field(0.01, gt=0)
    t_max: float = Field(2000.0, gt=0)
    t: float = 0.0

    # Phase-space grid, half_width None means auto
    grid_points: int = Field(201, ge=3)
    half_width: Optional[float] = Field(None, gt=0)

    # Output
    out: Path = Path("echo.csv")
    format: OutputFormat = OutputFormat.CSV

    # Sweeps and targets
    gammas: List[float] = Field(default_factory=lambda: [1.0, 2.0, 3.0, 4.0, 1.7, 3.5, -0.5, -1.0])
    sweep_r: List[int] = Field(default_factory=lambda: list(range(3, 16)))
    sweep_alpha: List[float] = Field(default_factory=lambda: [1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0])
    basis_sizes: List[int] = Field(default_factory=lambda: [4, 8, 16, 32])
    seeds_per_size: int = Field(50, ge=1)
    samples: int = Field(201, ge=1)
    targets: List[WignerTarget] = Field(default_factory=lambda: [WignerTarget.RHO])

    @field_validator("sign")
    def check_sign(cls, sign: int) -> int:
        if sign not in (1, -1):
            raise ValueError("must be +1 or -1")
        return sign

    @field_validator("grid_points")
    def check_grid_points(cls, grid_points: int) -> int:
        if grid_points % 2 == 0:
            raise ValueError("must be odd")
        return grid_points

    @field_validator("t_max")
    def check_t_max(cls, t_max: float, info: ValidationInfo) -> float:
        dt = info.data.get("dt")
        if dt is not None and t_max < dt:
            raise ValueError(f"must be >= dt ({dt})")
        return t_max

    @property
    def complex_alpha(self) -> complex:
        return cmath.rect(self.alpha, self.alpha_phase)

    def gamma_params(self, gamma: Optional[float] = None) -> GammaParams:
        return GammaParams(
            omega=self.omega,
            lam=self.lam,
            gamma=self.gamma if gamma is None else gamma,
            epsilon=self.epsilon,
            hbar=self.hbar,
            delta_scale=self.delta_scale,
        )

    def provenance(self) -> Dict[str, str]:
        """Resolved config as flat strings, for output headers"""
        return {key: _render(value) for key, value in self.model_dump(mode="json").items()}


def _render(value: Any) -> str:
    if isinstance(value, list):
        return " ".join(str(item) for item in value)
    return str(value)


def _read_file(path: Path) -> Dict[str, Any]:
    try:
        document = yaml.safe_load(path.read_text())
    except FileNotFoundError:
        raise ConfigError("config", f"file {path} not found")
    except yaml.YAMLError as e:
        raise ConfigError("config", f"cannot parse {path}: {e}")

    if document is None:
        return {}
    if not isinstance(document, dict):
        raise ConfigError("config", f"{path} must hold a flat key/value mapping")
    for key, value in document.items():
        if isinstance(value, dict):
            raise ConfigError(str(key), "nested mappings are not allowed")
    return document


def load_config(path: Optional[Path] = None, overrides: Optional[Mapping[str, Any]] = None) -> ExperimentConfig:
    """Merge flag overrides over the config file, then validate"""
    raw: Dict[str, Any] = _read_file(path) if path is not None else {}
    raw.update({key: value for key, value in (overrides or {}).items() if value is not None})
    try:
        config = ExperimentConfig(**raw)
    except ValidationError as e:
        error = e.errors()[0]
        key = ".".join(str(part) for part in error["loc"]) or "config"
        raise ConfigError(key, error["msg"])
    logger.debug(f"Resolved config: {config.provenance()}")
    return config
