"""Average automaton sizes over all spaced seeds of small weight."""

from seedsens import EnumSpec, automaton_stats

print(" w   seeds   AC     S_pi   minimal")
for w in range(4, 9):
    row = automaton_stats(EnumSpec("spaced", w, w + 7))
    print(f"{w:2d} {row.seeds:7d} {row.ac_avg:7.2f} {row.spi_avg:6.2f} {row.min_avg:7.2f}")
