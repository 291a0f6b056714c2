#!/usr/bin/env python3
"""
Analytic pseudo-period table for equal unit chains

Columns: N, T0 = 2 pi sqrt(N/g), dT = (dT/T0) * T0 from the amplitude
series, and the band T0 -/+ dT.

Usage:
    python scripts/model_table.py [--n 5 --n 10 ...] [--theta0-deg 45] [--out output/model_table.csv]
"""

import argparse
import logging
import math
import sys
from pathlib import Path

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from pendlab.campaign import build_model_table, emit_model_table
from pendlab.config import env_value, parse_n_values
from pendlab.errors import PendlabError
from pendlab.linear_analysis import circular_error_bound

logger = logging.getLogger(__name__)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description='Write the analytic pseudo-period table')
    parser.add_argument('--n', type=int, action='append', dest='n_values',
                        help='Pendulum count; repeat for several (default: 5 10 20 100)')
    parser.add_argument('--theta0-deg', type=float, default=float(env_value('THETA0_DEG')),
                        help='Amplitude in degrees (default: 45)')
    parser.add_argument('--out', default=str(Path(env_value('OUT')) / 'model_table.csv'),
                        help='Output CSV path')
    parser.add_argument('--log-level', default=env_value('LOG_LEVEL'))
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=args.log_level.upper(),
        format='%(asctime)s - %(levelname)s - %(message)s'
    )

    theta0 = math.radians(args.theta0_deg)
    try:
        n_values = tuple(args.n_values) if args.n_values else parse_n_values(env_value('N_VALUES'))
        path = emit_model_table(n_values, theta0, args.out)
        rows = build_model_table(n_values, theta0)
        bound = circular_error_bound(theta0)
    except PendlabError as e:
        logger.error(f"❌ Model table failed: {e}")
        return 1

    for row in rows:
        logger.info(f"N={row.n:>4}: T0={row.t0:.3f} s, T={row.t0:.3f} ± {row.delta_t:.3f} s")
    logger.info(f"📊 Circular error bound at {args.theta0_deg}°: {bound:.5f}")
    logger.info(f"✅ Wrote {path}")
    return 0


if __name__ == '__main__':
    sys.exit(main())
