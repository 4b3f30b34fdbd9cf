"""Read-only figure rendering for the damped-wave laboratory's batch outputs.

This package never computes physics: every number plotted comes from the
CSV/JSON files written by the simulation CLI.
"""

__version__ = "0.1.0"
