import dataclasses
import json
from typing import Any, Dict, Optional, Union

from idlattice.pmfcore.tolerances import Tolerances, DEFAULT_TOLERANCES


DEFAULT_SWEEP_SIZES = {
    'theorem1': 1000,
    'theorem2': 200,
    'theorem3': 200,
    'theorem4': 200,
    'theorem5': 500,
    'corollary3': 500,
    'remark1': 100,
    'roundtrip': 500,
    'property1': 200,
}


@dataclasses.dataclass
class Settings:
    truncation: int = 256
    tolerances: Tolerances = DEFAULT_TOLERANCES
    seed: Optional[int] = None
    sweep_sizes: Dict[str, int] = dataclasses.field(default_factory=lambda: dict(DEFAULT_SWEEP_SIZES))

    @staticmethod
    def from_source(source: Union[str, Dict[str, Any], None]) -> 'Settings':
        """
        Settings from a dictionary or from the path of a JSON file holding one. All keys are optional:

        - **truncation** Largest index stored for constructed families. Default is 256.

        - **tolerances** Dictionary of numerical thresholds overriding the defaults, e.g. {"negativity": 1e-10}.
        Unknown names are rejected.

        - **seed** Seed of the random verification sweeps. Default is fresh entropy on every run.

        - **sweep_sizes** Dictionary of instance counts per verification suite, e.g. {"theorem1": 100}.
        """
        if source is None:
            return Settings()
        if isinstance(source, str):
            with open(source) as fp:
                source = json.load(fp)
        truncation = int(source.get('truncation', 256))
        tolerances = DEFAULT_TOLERANCES.updated(**source.get('tolerances', {}))
        seed = source.get('seed', None)
        sweep_sizes = dict(DEFAULT_SWEEP_SIZES)
        sweep_sizes.update({k: int(v) for k, v in source.get('sweep_sizes', {}).items()})
        return Settings(truncation, tolerances, seed, sweep_sizes)
