"""Age and size of the mitochondrial-Eve lineage founder.

A present population of 3 million with growth rate log(lambda) = 0.0015 per
generation and offspring variance 2 is mapped onto the diffusion, and the
large-x limit gives the mean and spread of the MRCA time and population.
"""
from fellertree import densities as D

GENERATION_YEARS = 20.0

r = D.mte_summary(3e6, 0.0015, 2.0)
print(f"alpha x             {r.alpha_x:.0f}")
print(f"E[T2] generations   {r.mean_generations:.0f}  (sd {r.sd_generations:.0f})")
print(f"E[T2] years         {GENERATION_YEARS * r.mean_generations:.0f}"
      f"  (sd {GENERATION_YEARS * r.sd_generations:.0f})")
print(f"E[X_MRCA]           {r.mean_population:.0f}  (sd {r.sd_population:.0f})")

# the same mean from the Gumbel marginal on the shifted scale
a = 0.0015
print(f"shift log(2 a x)/a  {float(D.shift(r.alpha_x / a, a)):.0f} generations")
