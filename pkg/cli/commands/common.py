from contextlib import contextmanager
from pathlib import Path
from typing import Annotated, Any, Dict, Iterator, Optional, Sequence
import logging

import pandas as pd
import typer

from cli.settings import echo_settings
from core.errors import ConfigError, GammaEchoError
from experiments.config import ExperimentConfig, OutputFormat, load_config
from experiments.export import write_table

logger = logging.getLogger(__name__)

######################################################
## Options shared by every subcommand
######################################################

ConfigOption = Annotated[Optional[Path], typer.Option("--config", help="Flat YAML experiment config")]
GammaOption = Annotated[Optional[float], typer.Option("--gamma", help="Nonlinearity exponent")]
EpsilonOption = Annotated[Optional[float], typer.Option("--epsilon", help="Offset in (N^2 + epsilon)^gamma")]
AlphaOption = Annotated[Optional[float], typer.Option("--alpha", help="Coherent/cat amplitude |alpha|")]
ROption = Annotated[Optional[int], typer.Option("--r", help="Phase state size")]
TMaxOption = Annotated[Optional[float], typer.Option("--t-max", help="Final sample time")]
DtOption = Annotated[Optional[float], typer.Option("--dt", help="Sampling step")]
GridPointsOption = Annotated[Optional[int], typer.Option("--grid-points", help="Points per phase-space axis")]
SeedOption = Annotated[Optional[int], typer.Option("--seed", help="Random-state seed")]
OutOption = Annotated[Optional[Path], typer.Option("--out", help="Output file")]
FormatOption = Annotated[Optional[OutputFormat], typer.Option("--format", help="Output format")]


def resolve_config(config_path: Optional[Path], **overrides: Any) -> ExperimentConfig:
    config = load_config(config_path, overrides)
    if not config.out.is_absolute():
        config = config.model_copy(update={"out": echo_settings.output_dir / config.out})
    return config


@contextmanager
def handle_errors() -> Iterator[None]:
    """Exit 2 on configuration errors, 1 on numerical failures"""
    try:
        yield
    except ConfigError as e:
        logger.error(f"Invalid configuration: {e}")
        raise typer.Exit(code=2)
    except GammaEchoError as e:
        logger.error(f"{type(e).__name__}: {e}")
        raise typer.Exit(code=1)


def export(
    frame: pd.DataFrame,
    config: ExperimentConfig,
    extra_header: Optional[Dict[str, str]] = None,
    nullable: Sequence[str] = (),
) -> Path:
    header = dict(extra_header or {})
    header.update(config.provenance())
    return write_table(frame, config.out, config.format, header, nullable)


def suffixed_path(path: Path, suffix: str) -> Path:
    """echo.csv -> echo_<suffix>.csv"""
    return path.with_name(f"{path.stem}_{suffix}{path.suffix}")
