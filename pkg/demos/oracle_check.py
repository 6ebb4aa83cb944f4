"""Branching-process oracle against the diffusion formulas.

Runs the near-critical Galton-Watson oracle at lambda = 1.01 over 100
generations and prints the three goodness-of-fit statistics.  The ancestor
count test is sensitive enough at 10^4 paths to see the O(lambda - 1)
discreteness of the pre-limit process.
"""
import sys

from fellertree import cli

paths = sys.argv[1] if len(sys.argv) > 1 else "2000"
cli.run(["oracle", "bgw", "--paths", paths])
