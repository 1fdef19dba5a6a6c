"""Effect of the regularization weight.

``lam`` scales the data term against the core trace norm, so a small value
shrinks the core hard and a large value trusts the data.  On noiseless data
of exact rank, larger ``lam`` gives more accurate completions; on noisy data
a moderate value wins because the shrinkage removes noise.
"""

from roid import SolverConfig, add_noise, gen_tucker, rse, sample_mask, solve_roid

truth = gen_tucker(30, 3, seed=4)
mask = sample_mask(truth.shape, 0.3, seed=5)
noisy = add_noise(truth, 0.01, seed=6)

print("lambda    clean rse   noisy rse")
for k in range(0, 6):
    lam = 10.0**k
    clean = solve_roid(mask.fill(truth), SolverConfig(3, lam=lam))
    dirty = solve_roid(mask.fill(noisy), SolverConfig(5, lam=lam))
    print(f"1e{k}      {rse(clean.completed, truth):.3e}   {rse(dirty.completed, truth):.3e}")
