"""Experiment campaigns and their artifacts.

A campaign runs `trials` perturbed releases for every chain size, in
parallel, and writes:

    trajectories/n<N>_trial<k>.csv   sampled angles and angular velocities
    model_table.csv                  analytic T0, dT and the T0 +/- dT band
    summary.csv                      one row per (N, trial)
    bob_periods.csv                  per-bob mean pseudo-periods
    result.json                      the full CampaignResult (see docs/RESULT_SCHEMA.md)

Everything is a pure function of the config, so a fixed seed gives
byte-identical files.
"""
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from pendlab.chain_model import PendulumChain, cartesian_arrays, uniform_chain
from pendlab.config import CampaignConfig
from pendlab.errors import ContractViolation, DomainError, OutputError, PendlabError
from pendlab.integrator import IntegrationConfig, Trajectory
from pendlab.linear_analysis import model_row, pseudo_period_corrected
from pendlab.period_lab import (
    TrialReport,
    TrialSetStatistics,
    perturb_initial,
    simulate_trial,
    trial_set_statistics,
)
from pendlab.utils.csv_utils import PathLike, write_csv

logger = logging.getLogger(__name__)

PHASE_SPACE_HEADER = ('t', 'x', 'y', 'vx', 'vy')
MODEL_TABLE_HEADER = ('N', 'T0', 'dT', 'T_low', 'T_high')
SUMMARY_HEADER = (
    'n', 'trial', 'seed', 'status', 'theta0_used', 'measured_period', 'model_t0',
    'model_t_real', 'decimal_error', 'measured_bobs', 'failed_bobs', 'energy_drift', 'error',
)
BOB_PERIODS_HEADER = ('n', 'trial', 'bob_index', 'mean_period')

RunKey = Tuple[int, int]


@dataclass(frozen=True)
class ModelRow:
    n: int
    t0: float
    delta_t: float
    t_low: float
    t_high: float


@dataclass(frozen=True)
class CampaignResult:
    config: CampaignConfig
    reports: Dict[RunKey, TrialReport]
    model_table: Tuple[ModelRow, ...]
    summary: Dict[int, TrialSetStatistics] = field(default_factory=dict)

    @property
    def failures(self) -> List[TrialReport]:
        return [r for r in self.reports.values() if not r.ok]

    @property
    def partial(self) -> bool:
        return bool(self.failures)

    def decimal_error_matrix(self) -> Dict[int, List[float]]:
        """Decimal errors per N in trial order (None for failed runs)"""
        matrix: Dict[int, List[float]] = {}
        for (n, _), report in sorted(self.reports.items()):
            matrix.setdefault(n, []).append(report.decimal_error)
        return matrix

    def to_dict(self) -> Dict[str, Any]:
        return {
            'config': self.config.to_dict(),
            'model_table': [asdict(row) for row in self.model_table],
            'reports': [asdict(self.reports[key]) for key in sorted(self.reports)],
            'summary': [asdict(self.summary[n]) for n in sorted(self.summary)],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'CampaignResult':
        reports = {}
        for item in data['reports']:
            item = {k: tuple(v) if isinstance(v, list) else v for k, v in item.items()}
            report = TrialReport(**item)
            reports[(report.n, report.trial)] = report
        return cls(
            config=CampaignConfig.from_dict(data['config']),
            reports=reports,
            model_table=tuple(ModelRow(**row) for row in data['model_table']),
            summary={row['n']: TrialSetStatistics(**row) for row in data['summary']},
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + '\n'

    @classmethod
    def from_json(cls, text: str) -> 'CampaignResult':
        return cls.from_dict(json.loads(text))


def trial_seed(seed: int, n: int, trial: int) -> int:
    """Independent, reproducible seed for one (N, trial) run"""
    return int(np.random.SeedSequence([seed, n, trial]).generate_state(1)[0])


def emit_phase_space(chain: PendulumChain, trajectory: Trajectory, bob_index: int,
                     path: PathLike) -> Path:
    """t, x, y, vx, vy of one bob for every sample"""
    if not 1 <= bob_index <= chain.n:
        raise ContractViolation(f"bob index {bob_index} outside 1..{chain.n}")
    col = bob_index - 1
    xs, ys, vxs, vys = cartesian_arrays(chain.lengths, trajectory.thetas, trajectory.omegas)
    rows = zip(trajectory.times.tolist(), xs[:, col].tolist(), ys[:, col].tolist(),
               vxs[:, col].tolist(), vys[:, col].tolist())
    return write_csv(path, PHASE_SPACE_HEADER, rows)


def emit_trajectory(trajectory: Trajectory, path: PathLike) -> Path:
    n = trajectory.chain.n
    header = ['t'] + [f'theta_{i}' for i in range(1, n + 1)] + [f'omega_{i}' for i in range(1, n + 1)]
    rows = (
        [t] + thetas + omegas
        for t, thetas, omegas in zip(trajectory.times.tolist(), trajectory.thetas.tolist(),
                                     trajectory.omegas.tolist())
    )
    return write_csv(path, header, rows)


def build_model_table(n_values: Sequence[int], theta0: float) -> Tuple[ModelRow, ...]:
    return tuple(ModelRow(*model_row(n, theta0)) for n in n_values)


def emit_model_table(n_values: Sequence[int], theta0: float, path: PathLike) -> Path:
    """Analytic table for equal unit chains: N, T0, dT = correction * T0, T0 -/+ dT"""
    rows = [(r.n, r.t0, r.delta_t, r.t_low, r.t_high) for r in build_model_table(n_values, theta0)]
    return write_csv(path, MODEL_TABLE_HEADER, rows)


def emit_summary(result: CampaignResult, path: PathLike) -> Path:
    rows = []
    for key in sorted(result.reports):
        r = result.reports[key]
        rows.append((r.n, r.trial, r.seed, r.status, r.theta0_used, r.measured_period, r.model_t0,
                     r.model_t_real, r.decimal_error, r.measured_bobs, r.failed_bobs,
                     r.energy_drift, r.error))
    return write_csv(path, SUMMARY_HEADER, rows)


def emit_bob_periods(result: CampaignResult, path: PathLike) -> Path:
    rows = []
    for key in sorted(result.reports):
        r = result.reports[key]
        for bob, period in zip(r.measured_bobs, r.bob_periods):
            rows.append((r.n, r.trial, bob, period))
    return write_csv(path, BOB_PERIODS_HEADER, rows)


def _failed_report(n: int, trial: int, seed: int, theta0: float, error: Exception) -> TrialReport:
    theta0_used = perturb_initial(theta0, seed)
    try:
        model = pseudo_period_corrected(uniform_chain(n), theta0_used)
        t0, t_real = model.t0, model.t_real
    except DomainError:
        t0 = t_real = None
    return TrialReport(n=n, trial=trial, seed=seed, theta0_used=theta0_used,
                       model_t0=t0, model_t_real=t_real,
                       status='failed', error=str(error))


def _run_one(config: CampaignConfig, integration: IntegrationConfig, out_dir: Path,
             n: int, trial: int) -> TrialReport:
    seed = trial_seed(config.seed, n, trial)
    try:
        trajectory, report = simulate_trial(n, config.theta0, seed, integration, trial)
    except PendlabError as e:
        logger.error(f"❌ N={n} trial {trial} failed: {e}")
        return _failed_report(n, trial, seed, config.theta0, e)
    if config.write_trajectories:
        emit_trajectory(trajectory, out_dir / 'trajectories' / f'n{n:03d}_trial{trial}.csv')
    return report


def write_result_json(result: CampaignResult, path: PathLike) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(result.to_json(), encoding='utf-8')
    except OSError as e:
        raise OutputError(path, e) from e
    return path


def run_campaign(config: CampaignConfig) -> CampaignResult:
    """Run every (N, trial) release and write the campaign artifacts"""
    config.validate()
    integration = config.integration()
    out_dir = Path(config.output_dir)
    keys = [(n, trial) for n in config.n_values for trial in range(1, config.trials + 1)]

    logger.info(f"🚀 Campaign: N={list(config.n_values)}, {config.trials} trial(s), "
                f"theta0={config.theta0:.5f} rad, {len(keys)} run(s) on {config.jobs} worker(s)")

    with ThreadPoolExecutor(max_workers=config.jobs, thread_name_prefix='trial-') as pool:
        futures = {key: pool.submit(_run_one, config, integration, out_dir, *key) for key in keys}
        # output errors propagate from result() and abort the campaign
        reports = {key: futures[key].result() for key in keys}

    result = CampaignResult(
        config=config,
        reports=reports,
        model_table=build_model_table(config.n_values, config.theta0),
        summary=trial_set_statistics([reports[key] for key in keys]),
    )

    emit_model_table(config.n_values, config.theta0, out_dir / 'model_table.csv')
    emit_summary(result, out_dir / 'summary.csv')
    emit_bob_periods(result, out_dir / 'bob_periods.csv')
    write_result_json(result, out_dir / 'result.json')

    if result.partial:
        logger.warning(f"⚠️  {len(result.failures)} of {len(keys)} run(s) failed")
    else:
        logger.info(f"✅ Campaign complete: {len(keys)} run(s), artifacts in {out_dir}")
    return result
