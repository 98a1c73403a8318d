from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Dict, Optional, Tuple

import yaml

from core.errors import ConfigError

REFERENCE_FILE = "reference_values.yaml"

COHERENT_TABLE = "coherent_alpha_2"
PHASE_TABLE = "phase_r_6"


@dataclass(frozen=True)
class ReferenceValues:
    tables: Dict[str, Dict[float, Tuple[float, float]]]
    saturation_mu: float
    tolerance: float

    def lookup(self, table: str, gamma: float) -> Optional[Tuple[float, float]]:
        return self.tables.get(table, {}).get(float(gamma))


@lru_cache(maxsize=1)
def load_reference_values() -> ReferenceValues:
    document = yaml.safe_load(resources.files("data").joinpath(REFERENCE_FILE).read_text())
    try:
        tables = {
            name: {float(gamma): (float(pair[0]), float(pair[1])) for gamma, pair in document[name].items()}
            for name in (COHERENT_TABLE, PHASE_TABLE)
        }
        return ReferenceValues(
            tables=tables,
            saturation_mu=float(document["saturation_mu"]),
            tolerance=float(document["tolerance"]),
        )
    except KeyError as e:
        raise ConfigError(str(e.args[0]), f"missing from {REFERENCE_FILE}")
