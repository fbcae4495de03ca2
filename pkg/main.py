#!/usr/bin/env python3
# main.py
from rich.console import Console

from bellcond.correlations import correlation_report
from bellcond.display import display_correlation_summary
from bellcond.experiment import ExperimentConfig, run_experiment
from bellcond.observables import ChshAngles
from bellcond.states import SettingModel, bell_state
from bellcond.stats import estimate

# ================================
#  SETUP: source, generators, PBS orientations
# ================================

rho = bell_state("phi_plus")
generators = SettingModel.uniform()
angles = ChshAngles.tsirelson()

# ================================
#  ANALYTIC AND SIMULATED CORRELATIONS
# ================================

report = correlation_report(rho, generators, angles)

config = ExperimentConfig(rho, angles, generators.p, generators.q, trials=200_000, seed=42)
estimates = estimate(run_experiment(config))

display_correlation_summary(report, Console(), estimates)
