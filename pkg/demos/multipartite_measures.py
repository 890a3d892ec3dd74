"""
Global and genuine measures on three and four qubits
====================================================

GHZ and W states are the two inequivalent classes of genuinely entangled
three-qubit states. We evaluate the four global forms on them, then the
genuine measure and its two lower bounds.
"""

from unient import (
    GlobalMeasureKind,
    MeasureParams,
    c_gme,
    gem_lower_bounds,
    gem_pure,
    ghz_state,
    glmem_pure,
    w_state,
)
from unient.states import bell_state

kinds = [
    GlobalMeasureKind.of("SumQS", 2, 1),
    GlobalMeasureKind.of("SumRT", 0.5, 1),
    GlobalMeasureKind.of("ProdQS", 3, 1),
    GlobalMeasureKind.of("ProdRT", 0.5, 1),
]

for name, psi in (("GHZ", ghz_state(3)), ("W", w_state(3))):
    print(name)
    for kind in kinds:
        print(f"  {str(kind):<14} A|B|C {glmem_pure(psi, 'A|B|C', kind):.6f}   A|BC {glmem_pure(psi, 'A|BC', kind):.6f}")

# The genuine measure is the smallest block entropy over all bipartitions.
p = MeasureParams.qs(2, 1)
for name, psi in (("GHZ", ghz_state(3)), ("W", w_state(3))):
    print(f"{name}: GEM {gem_pure(psi, p):.6f}  C_gme {c_gme(psi):.6f}  bounds {gem_lower_bounds(psi, p)}")

# Two Bell pairs shared as AC and BD are product across AC|BD, so the genuine
# measure is zero. Every single party is still maximally mixed, which pushes
# both lower bounds above zero: they do not carry over to four parties.
pairs = bell_state().kron(bell_state()).permute([0, 2, 1, 3])
print("Bell(AC) x Bell(BD): GEM", gem_pure(pairs, p), " bounds", gem_lower_bounds(pairs, p))
