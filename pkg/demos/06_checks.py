"""Seeded property checks for every quantitative guarantee.

Run: python demos/06_checks.py
"""
from pdembed import CheckConfig, run_checks

cfg = CheckConfig(n=2, samples=100, oracle_samples=50, separation_samples=30, multiscale_samples=30)
for r in run_checks("all", cfg):
    print(f"{r.name:<32} {r.samples:>6} {r.worst_margin:>12.3e}  {'pass' if r.passed else 'FAIL'}")
