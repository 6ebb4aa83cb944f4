"""Draw a few genealogies and compare their T2 with the closed-form law."""
import numpy as np

from fellertree import densities as D
from fellertree import samplers as S

rng = S.make_rng(S.DEFAULT_SEED)
for ax in (0.1, 1.0, 10.0, 100.0):
    tree = S.sample_tree(D.InfT1(), ax, 1.0, rng, depth=3)
    print(f"alpha x = {ax:6.1f}: {S.to_newick(tree)}")

print("\nmedian T2, sampled vs closed form")
for ax in (0.1, 1.0, 10.0, 100.0):
    t2 = S.sample_coalescent_times(D.InfT1(), ax, 1.0, rng, depth=1, size=20_000)[:, 0]
    grid = np.linspace(0.0, 20.0, 20001)[1:]
    cdf = D.coalescent_time_cdf(2, grid, ax, D.InfT1(), 1.0)
    exact = grid[np.searchsorted(cdf, 0.5)]
    print(f"alpha x = {ax:6.1f}: {np.median(t2):.4f}  {exact:.4f}"
          f"  log(2 alpha x) = {np.log(2 * ax):+.4f}")
