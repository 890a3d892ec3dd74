"""
Coarsening partitions and complete monogamy
===========================================

Partitions of the parties are ordered by coarsening: discarding blocks,
merging blocks, or discarding parties inside a block. When a measure does not
drop along a coarsening step, complete monogamy forces it to vanish on a
residual set of partitions. Here we list those sets and probe them numerically.
"""

from unient import GlobalMeasureKind, MeasureParams, Partition, RoofConfig, coarser, ghz_state, xi_set
from unient.multipartite import complete_monogamy_scan
from unient.partitions import coarser_a, coarser_b, coarser_c, enumerate_partitions
from unient.states import basis_state, bell_state
from unient.verify import monogamy_scan

P = Partition.parse
print("three-party bipartitions:", [str(g) for g in enumerate_partitions(3, 2)])
for g, h in (("A|B|C|D", "A|B|D"), ("A|B|C|D", "AC|B|D"), ("A|BC", "A|B"), ("A|B|C|D", "AC|B")):
    g = P(g)
    h = P(h, g.universe)
    moves = [m for m, f in zip("abc", (coarser_a, coarser_b, coarser_c)) if f(g, h)]
    print(f"{g} > {h}: {coarser(g, h)} via {moves or 'several moves'}")

for g, h in (("A|B|C|D", "A|BCD"), ("A|B|C", "A|BC")):
    print(f"Xi({g} - {h}) =", [str(x) for x in xi_set(P(g), P(h))])

# For GHZ the measure drops along A|B|C -> A|BC, so nothing is forced. The
# pair marginals are separable anyway, and the residual set reads zero.
kind = GlobalMeasureKind.of("SumQS", 2, 1)
scan = complete_monogamy_scan(ghz_state(3), "A|B|C", "A|BC", kind, RoofConfig(restarts=4))
print("GHZ: E(A|B|C) - E(A|BC) =", round(scan.equality_residual, 6), " max over Xi =", scan.xi_max)

# The tripartite monogamy inequality E(A|BC) >= E(AB) + E(AC).
p = MeasureParams.qs(2, 1)
for name, psi in (("GHZ", ghz_state(3)), ("Bell x |0>", bell_state().kron(basis_state([0])))):
    rep = monogamy_scan(psi, p, RoofConfig(restarts=4))
    print(f"{name}: E(A|BC)={rep.e_a_bc:.4f} E(AB)={rep.e_ab:.4f} E(AC)={rep.e_ac:.4f} residual={rep.eq5_residual:.4f}")
