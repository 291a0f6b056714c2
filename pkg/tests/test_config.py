import math

import pytest

from pendlab.config import DEFAULTS, ENV_PREFIX, CampaignConfig, env_value, parse_n_values
from pendlab.errors import ConfigError


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in DEFAULTS:
        monkeypatch.delenv(ENV_PREFIX + name, raising=False)


def test_defaults_describe_release_protocol():
    config = CampaignConfig.from_env()
    assert config == CampaignConfig()
    assert config.n_values == (5, 10, 20, 100)
    assert config.trials == 3
    assert config.theta0 == pytest.approx(math.pi / 4)
    assert config.integration().sample_stride == 10
    assert config.integration().n_steps == 10000


def test_environment_overrides_defaults(monkeypatch):
    monkeypatch.setenv('PENDLAB_N_VALUES', '3, 7')
    monkeypatch.setenv('PENDLAB_TRIALS', '5')
    monkeypatch.setenv('PENDLAB_THETA0_DEG', '30')
    monkeypatch.setenv('PENDLAB_OUT', 'runs/env')
    config = CampaignConfig.from_env()
    assert config.n_values == (3, 7)
    assert config.trials == 5
    assert config.theta0 == pytest.approx(math.radians(30))
    assert config.output_dir == 'runs/env'
    assert env_value('JOBS') == '2'


def test_explicit_values_beat_environment(monkeypatch):
    monkeypatch.setenv('PENDLAB_SEED', '11')
    monkeypatch.setenv('PENDLAB_JOBS', '8')
    config = CampaignConfig.from_env(seed=99, jobs=None)
    assert config.seed == 99
    assert config.jobs == 8


def test_bad_environment_value(monkeypatch):
    monkeypatch.setenv('PENDLAB_TRIALS', 'three')
    with pytest.raises(ConfigError):
        CampaignConfig.from_env()


@pytest.mark.parametrize('raw', ['', '5,x', ' , '])
def test_bad_pendulum_counts(raw):
    with pytest.raises(ConfigError):
        parse_n_values(raw)


@pytest.mark.parametrize('changes', [
    {'n_values': ()},
    {'n_values': (0, 5)},
    {'n_values': (5, 5)},
    {'trials': 0},
    {'frames': 0},
    {'jobs': 0},
    {'theta0': math.pi},
    {'theta0': math.pi - 0.005},
    {'theta0': -0.1},
    {'dt': 0.0},
    {'dt': 0.02},
    {'dt': 3e-3},
])
def test_validate_rejects(changes):
    with pytest.raises(ConfigError):
        CampaignConfig(**changes).validate()


def test_rejection_is_logged(caplog):
    with pytest.raises(ConfigError):
        CampaignConfig(theta0=3.13).validate()
    assert any('theta0' in record.getMessage() for record in caplog.records if record.levelname == 'ERROR')
    assert CampaignConfig(theta0=3.12).validate().theta0 == 3.12


def test_dict_round_trip():
    config = CampaignConfig(n_values=(2, 4), seed=5, write_trajectories=False)
    data = config.to_dict()
    assert data['n_values'] == [2, 4]
    assert CampaignConfig.from_dict(data) == config
