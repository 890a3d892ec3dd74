import itertools

import pytest
from hypothesis import given, strategies as st

from unient.partitions import (
    Partition,
    PartitionError,
    XiUndefinedError,
    bipartitions,
    coarser,
    coarser_a,
    coarser_b,
    coarser_c,
    coarser_or_equal,
    coarsenings,
    enumerate_partitions,
    set_partitions,
    stirling2,
    xi_set,
)

P = Partition.parse


def brute_force_count(n, k):
    # label every party with a block id and count distinct groupings
    seen = set()
    for labels in itertools.product(range(k), repeat=n):
        if len(set(labels)) != k:
            continue
        blocks = frozenset(frozenset(i for i in range(n) if labels[i] == b) for b in range(k))
        seen.add(blocks)
    return len(seen)


def test_parse_and_print_roundtrip():
    g = P("CA|B|D")
    assert g.blocks == ((0, 2), (1,), (3,))
    assert str(g) == "AC|B|D"
    assert g.universe == 4
    assert P("A|B", universe=4).universe == 4


@pytest.mark.parametrize("text", ["", "A||B", "A|A", "A|1"])
def test_parse_rejects_malformed(text):
    with pytest.raises(PartitionError):
        P(text)


def test_index_outside_universe():
    with pytest.raises(PartitionError):
        Partition(((0,), (3,)), 3)


def test_canonical_form_is_idempotent():
    g = Partition(((3, 1), (2,), (0,)), 4)
    assert Partition(g.blocks, g.universe) == g
    assert g.blocks == ((0,), (1, 3), (2,))


def test_n3_k2():
    got = {str(g) for g in enumerate_partitions(3, 2)}
    assert got == {"A|BC", "AC|B", "AB|C"}


@pytest.mark.parametrize("n,k,count", [(4, 2, 7), (4, 3, 6)])
def test_small_counts(n, k, count):
    assert len(enumerate_partitions(n, k)) == count


@pytest.mark.parametrize("n", range(2, 8))
def test_counts_match_brute_force(n):
    for k in range(2, n + 1):
        parts = enumerate_partitions(n, k)
        assert len(parts) == len(set(parts)) == stirling2(n, k) == brute_force_count(n, k)
        assert all(p.covers(n) and p.k == k for p in parts)


@pytest.mark.parametrize("n,k", [(3, 1), (3, 4), (1, 1)])
def test_k_out_of_range(n, k):
    with pytest.raises(ValueError):
        enumerate_partitions(n, k)


def test_bipartitions_are_two_block():
    assert bipartitions(4) == enumerate_partitions(4, 2)


def test_set_partitions_bell_numbers():
    assert [sum(1 for _ in set_partitions(range(n))) for n in range(1, 6)] == [1, 2, 5, 15, 52]


def test_single_move_examples():
    assert coarser_a(P("A|B|C|D"), P("A|B|D"))
    assert coarser_b(P("A|B|C|D"), P("AC|B|D"))
    assert coarser_c(P("A|BC"), P("A|B", universe=3))
    assert not coarser_a(P("A|B|C|D"), P("AC|B|D"))
    assert not coarser_b(P("A|B|C|D"), P("A|B|D"))


def test_composite_move():
    # merge then partial discard
    g, h = P("A|B|C|D"), P("AC|B", universe=4)
    assert coarser(g, h)
    assert not (coarser_a(g, h) or coarser_b(g, h) or coarser_c(g, h))


def test_splitting_is_not_coarsening():
    assert not coarser(P("AB|C"), P("A|B|C"))
    assert not coarser(P("AB|CD"), P("AC|BD"))


def test_universe_mismatch():
    with pytest.raises(PartitionError):
        coarser(P("A|B"), P("A|B", universe=3))


def test_xi_tail_merge_example():
    got = {str(p) for p in xi_set(P("A|B|C|D"), P("A|BCD"))}
    assert got == {"B|C|D", "B|CD", "BC|D", "BD|C", "B|C", "C|D", "B|D"}


def test_xi_tight_example():
    assert [str(p) for p in xi_set(P("A|B|C"), P("A|BC"))] == ["B|C"]


def test_xi_complete_example():
    got = {str(p) for p in xi_set(P("A|B|C"), P("A|B", universe=3))}
    assert got == {"A|C", "B|C"}


def test_xi_requires_coarser():
    with pytest.raises(PartitionError):
        xi_set(P("A|BC"), P("A|B|C"))


def test_xi_undefined_pattern():
    # two separate merges are neither a tail merge nor a discard
    with pytest.raises(XiUndefinedError):
        xi_set(P("A|B|C|D"), P("AB|CD"))


def test_xi_is_deterministic():
    g, h = P("A|B|C|D"), P("A|BCD")
    assert xi_set(g, h) == xi_set(g, h) == sorted(xi_set(g, h))


def _universe(n):
    out = []
    for r in range(1, n + 1):
        for subset in itertools.combinations(range(n), r):
            out.extend(Partition(b, n) for b in set_partitions(subset))
    return out


UNIVERSE4 = _universe(4)
part4 = st.sampled_from(UNIVERSE4)


@given(part4)
def test_irreflexive(g):
    assert not coarser(g, g)
    assert coarser_or_equal(g, g)


@given(part4, part4, part4)
def test_transitive(g, h, f):
    if coarser(g, h) and coarser(h, f):
        assert coarser(g, f)


@given(part4, part4)
def test_antisymmetric(g, h):
    assert not (coarser(g, h) and coarser(h, g))


@given(part4, part4)
def test_single_moves_imply_coarser(g, h):
    if coarser_a(g, h) or coarser_b(g, h) or coarser_c(g, h):
        assert coarser(g, h)


@given(part4, part4)
def test_xi_members_are_coarser(g, h):
    if not coarser(g, h):
        return
    try:
        xi = xi_set(g, h)
    except XiUndefinedError:
        return
    assert all(coarser(g, p) for p in xi)


def test_coarsenings_respect_min_blocks():
    cs = coarsenings(Partition.finest(4))
    assert all(p.k >= 2 for p in cs)
    assert len(cs) == len([p for p in UNIVERSE4 if p.k >= 2]) - 1
