"""pendlab: N-link pendulum chain dynamics and pseudo-period measurement."""

__version__ = '0.1.0'
