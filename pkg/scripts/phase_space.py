#!/usr/bin/env python3
"""
Phase-space trace of one bob of an equal unit chain released from rest

Writes t, x, y, vx, vy for every recorded frame, ready for external plotting
(the default reproduces the chaotic N=3 trace released at 45 degrees).

Usage:
    python scripts/phase_space.py [--n 3] [--bob 3] [--theta0-deg 45] [--out output/phase_space.csv]
"""

import argparse
import logging
import math
import sys
from pathlib import Path

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from pendlab.campaign import emit_phase_space
from pendlab.chain_model import uniform_chain, uniform_state
from pendlab.config import env_value
from pendlab.errors import PendlabError
from pendlab.integrator import IntegrationConfig, integrate

logger = logging.getLogger(__name__)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description='Emit a bob phase-space trace as CSV')
    parser.add_argument('--n', type=int, default=3, help='Pendulum count (default: 3)')
    parser.add_argument('--bob', type=int, default=None, help='Bob index, 1-based (default: last bob)')
    parser.add_argument('--theta0-deg', type=float, default=float(env_value('THETA0_DEG')),
                        help='Release angle in degrees (default: 45)')
    parser.add_argument('--duration', type=float, default=float(env_value('DURATION')))
    parser.add_argument('--frames', type=int, default=int(env_value('FRAMES')))
    parser.add_argument('--dt', type=float, default=float(env_value('DT')))
    parser.add_argument('--out', default=str(Path(env_value('OUT')) / 'phase_space.csv'),
                        help='Output CSV path')
    parser.add_argument('--log-level', default=env_value('LOG_LEVEL'))
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=args.log_level.upper(),
        format='%(asctime)s - %(levelname)s - %(message)s'
    )

    bob = args.bob if args.bob is not None else args.n
    try:
        chain = uniform_chain(args.n)
        config = IntegrationConfig.from_frames(args.duration, args.frames, args.dt)
        trajectory = integrate(chain, uniform_state(args.n, math.radians(args.theta0_deg)), config)
        path = emit_phase_space(chain, trajectory, bob, args.out)
    except PendlabError as e:
        logger.error(f"❌ Phase-space export failed: {e}")
        return 1

    logger.info(f"✅ Wrote {len(trajectory)} samples of bob {bob} to {path} "
                f"(energy drift {trajectory.energy_drift:.2e})")
    return 0


if __name__ == '__main__':
    sys.exit(main())
