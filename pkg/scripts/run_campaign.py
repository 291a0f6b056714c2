#!/usr/bin/env python3
"""
Pseudo-period campaign: release equal unit chains, measure, compare to the model

This script:
1. Builds the campaign config (flags > PENDLAB_* environment / .env > defaults)
2. Runs every (N, trial) release in parallel with a seeded perturbation
3. Writes per-run trajectories, the model table, a summary CSV and result.json

Usage:
    python scripts/run_campaign.py [--n N ...] [--trials T] [--theta0-deg DEG] [--out DIR]

Exit codes:
    0  every run succeeded
    2  campaign finished but some runs failed (recorded in summary.csv)
    1  hard failure (bad config, unwritable output)
"""

import argparse
import logging
import math
import sys
from pathlib import Path

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from pendlab.config import CampaignConfig, env_value
from pendlab.campaign import run_campaign
from pendlab.errors import PendlabError

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description='Run the pendulum-chain pseudo-period campaign',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python scripts/run_campaign.py
  python scripts/run_campaign.py --n 5 --n 10 --trials 3 --seed 7 --out runs/seed7
  PENDLAB_JOBS=4 python scripts/run_campaign.py --n 100 --no-trajectories
        """
    )
    parser.add_argument('--n', type=int, action='append', dest='n_values',
                        help='Pendulum count; repeat for several (default: 5 10 20 100)')
    parser.add_argument('--trials', type=int, help='Trials per pendulum count (default: 3)')
    parser.add_argument('--theta0-deg', type=float,
                        help='Nominal release angle in degrees (default: 45)')
    parser.add_argument('--duration', type=float, help='Simulated time in seconds (default: 10)')
    parser.add_argument('--frames', type=int, help='Recorded frames over the run (default: 1000)')
    parser.add_argument('--dt', type=float, help='Integration step in seconds (default: 0.001)')
    parser.add_argument('--seed', type=int, help='Campaign seed (default: 2024)')
    parser.add_argument('--out', dest='output_dir', help='Output directory (default: output)')
    parser.add_argument('--jobs', type=int, help='Parallel runs (default: 2)')
    parser.add_argument('--no-trajectories', action='store_true',
                        help='Skip the per-run trajectory CSVs')
    parser.add_argument('--log-level', default=env_value('LOG_LEVEL'),
                        help='Logging level (default: INFO)')
    return parser


def config_from_args(args: argparse.Namespace) -> CampaignConfig:
    return CampaignConfig.from_env(
        n_values=tuple(args.n_values) if args.n_values else None,
        trials=args.trials,
        theta0=math.radians(args.theta0_deg) if args.theta0_deg is not None else None,
        duration=args.duration,
        frames=args.frames,
        dt=args.dt,
        seed=args.seed,
        output_dir=args.output_dir,
        jobs=args.jobs,
        write_trajectories=False if args.no_trajectories else None,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=args.log_level.upper(),
        format='%(asctime)s - %(levelname)s - %(message)s'
    )

    try:
        config = config_from_args(args).validate()
    except PendlabError as e:
        logger.error(f"❌ Invalid configuration: {e}")
        return 1

    try:
        result = run_campaign(config)
    except PendlabError as e:
        logger.error(f"❌ Campaign aborted: {e}")
        return 1

    logger.info("=" * 70)
    logger.info(f"{'N':>5} {'T0 [s]':>10} {'dT [s]':>10}   decimal errors")
    errors = result.decimal_error_matrix()
    for row in result.model_table:
        cells = ' '.join('failed' if e is None else f'{e:.3f}' for e in errors.get(row.n, []))
        logger.info(f"{row.n:>5} {row.t0:>10.3f} {row.delta_t:>10.3f}   {cells}")
    logger.info("=" * 70)

    if result.partial:
        logger.warning(f"⚠️  Partial campaign: {len(result.failures)} run(s) failed")
        return 2
    return 0


if __name__ == '__main__':
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        logger.info("\n❌ Campaign interrupted by user")
        sys.exit(1)
