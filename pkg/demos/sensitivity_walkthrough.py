"""Sensitivity of a few seeds under a simple ternary model.

Builds the seed automaton, prints its size, computes sensitivity by the
product DP and cross-checks a short length against brute force.
"""

from seedsens import (
    DNA_SUBSET,
    TERNARY,
    bernoulli,
    brute_force_sensitivity,
    build_spi_automaton,
    minimize,
    parse_seed,
    sensitivity,
)

model = bernoulli(TERNARY, {"1": 0.7, "h": 0.2, "0": 0.1})

for text in ["#########", "##_#__#_####", "##@#_#@_###"]:
    seed = parse_seed(text, DNA_SUBSET)
    spi = build_spi_automaton(seed)
    print(f"{text:14s} weight {seed.design_weight:4.1f}  states {spi.num_states:4d}"
          f"  minimal {minimize(spi).num_states:4d}  sens(64) {sensitivity(seed, 64, model):.4f}")

# short targets can be enumerated directly
seed = parse_seed("#@_#", DNA_SUBSET)
print("dp", sensitivity(seed, 10, model), "oracle", brute_force_sensitivity(seed, 10, model))
