"""Best spaced vs best subset seed of weight 7 under a codon-periodic model."""

from seedsens import TERNARY, EnumSpec, ProbTransducer, best_seed

# three states cycle with the codon position; third positions mutate more
per_position = [[0.75, 0.17, 0.08], [0.7, 0.2, 0.1], [0.55, 0.35, 0.1]]
model = ProbTransducer(
    TERNARY, 3, 0,
    tuple((q, a, (q + 1) % 3, p) for q in range(3) for a, p in enumerate(per_position[q])),
)

for mode in ("spaced", "subset"):
    best, top = best_seed(EnumSpec(mode, 7, 11), model, 32, top=3)
    print(mode)
    for score in top:
        print(f"  {score.seed:12s} {score.sensitivity:.4f}")
