"""Campaign configuration.

Values come from, in order of precedence:
1) explicit arguments (CLI flags)
2) PENDLAB_* environment variables, including a local .env file
3) the built-in defaults below (the release protocol: N = 5, 10, 20, 100,
   three trials at 45 degrees, 10 s sampled over 1000 frames)
"""
import logging
import math
import os
from dataclasses import asdict, dataclass, replace
from typing import Any, Dict, Tuple

from dotenv import load_dotenv

from pendlab.errors import ConfigError
from pendlab.integrator import IntegrationConfig
from pendlab.period_lab import PERTURBATION_WIDTH

load_dotenv()

logger = logging.getLogger(__name__)

ENV_PREFIX = 'PENDLAB_'

DEFAULTS = {
    'N_VALUES': '5,10,20,100',
    'TRIALS': '3',
    'THETA0_DEG': '45',
    'DURATION': '10',
    'FRAMES': '1000',
    'DT': '0.001',
    'SEED': '2024',
    'OUT': 'output',
    'JOBS': '2',
    'LOG_LEVEL': 'INFO',
}


def env_value(name: str) -> str:
    """PENDLAB_<name> from the environment, or its built-in default"""
    return os.getenv(ENV_PREFIX + name, DEFAULTS[name])


def parse_n_values(raw: str) -> Tuple[int, ...]:
    try:
        values = tuple(int(part) for part in raw.split(',') if part.strip())
    except ValueError as e:
        raise ConfigError(f"invalid pendulum counts {raw!r}: {e}") from e
    if not values:
        raise ConfigError("at least one pendulum count is required")
    return values


@dataclass(frozen=True)
class CampaignConfig:
    n_values: Tuple[int, ...] = (5, 10, 20, 100)
    trials: int = 3
    theta0: float = math.pi / 4
    duration: float = 10.0
    frames: int = 1000
    dt: float = 1e-3
    seed: int = 2024
    output_dir: str = 'output'
    jobs: int = 2
    write_trajectories: bool = True

    @classmethod
    def from_env(cls, **overrides: Any) -> 'CampaignConfig':
        """Config from PENDLAB_* variables; non-None overrides win"""
        try:
            config = cls(
                n_values=parse_n_values(env_value('N_VALUES')),
                trials=int(env_value('TRIALS')),
                theta0=math.radians(float(env_value('THETA0_DEG'))),
                duration=float(env_value('DURATION')),
                frames=int(env_value('FRAMES')),
                dt=float(env_value('DT')),
                seed=int(env_value('SEED')),
                output_dir=env_value('OUT'),
                jobs=int(env_value('JOBS')),
            )
        except ValueError as e:
            raise ConfigError(f"invalid {ENV_PREFIX}* environment value: {e}") from e
        changes = {key: value for key, value in overrides.items() if value is not None}
        return replace(config, **changes)

    def validate(self) -> 'CampaignConfig':
        try:
            self._check()
        except ConfigError as e:
            logger.error(f"❌ Invalid campaign config: {e}")
            raise
        return self

    def _check(self) -> None:
        if any(n < 1 for n in self.n_values) or not self.n_values:
            raise ConfigError(f"pendulum counts must be >= 1, got {self.n_values}")
        if len(set(self.n_values)) != len(self.n_values):
            raise ConfigError(f"pendulum counts must be distinct, got {self.n_values}")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if self.frames < 1:
            raise ConfigError(f"frames must be >= 1, got {self.frames}")
        if self.jobs < 1:
            raise ConfigError(f"jobs must be >= 1, got {self.jobs}")
        if not 0.0 <= self.theta0 < math.pi - PERTURBATION_WIDTH:
            raise ConfigError(
                f"theta0 must lie in [0, pi - {PERTURBATION_WIDTH}) rad so the perturbed release "
                f"stays below pi, got {self.theta0}"
            )
        if not self.dt > 0 or self.duration / self.frames < self.dt:
            raise ConfigError(
                f"frame interval {self.duration / self.frames} s must be >= dt {self.dt} s"
            )
        self.integration()

    def integration(self) -> IntegrationConfig:
        return IntegrationConfig.from_frames(self.duration, self.frames, self.dt)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['n_values'] = list(self.n_values)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'CampaignConfig':
        data = dict(data)
        data['n_values'] = tuple(data['n_values'])
        return cls(**data)
