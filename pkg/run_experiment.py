#!/usr/bin/env python3
"""
Experiment Launcher

Runs the workbench command line, e.g.

    python run_experiment.py run configs/zeta_vs_power.toml
    python run_experiment.py kernels --plot
"""

import sys

from src.harness.cli import main

if __name__ == "__main__":
    sys.exit(main())
