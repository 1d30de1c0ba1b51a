import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from katohodge.diamond import BettiVector, HodgeDiamond, hodge_sums, standard_table
from katohodge.modifications import (
    Center,
    Direction,
    InfeasibleBlowDown,
    ModificationSequence,
    ModificationStep,
    bimeromorphic_invariants_check,
    blowdown_betti,
    blowdown_hodge,
    blowup_betti,
    blowup_hodge,
    builtin_center,
    evaluate_sequence,
)

POINT = builtin_center("point")
ELLIPTIC = builtin_center("elliptic")


def diag(d):
    return tuple(d[p, p] for p in range(d.n + 1))


def test_point_blowup_of_cp3():
    x = blowup_hodge(standard_table("cpn", 3), POINT, 3)
    assert diag(x) == (1, 2, 2, 1)
    assert set(x.entries()) == {(p, p) for p in range(4)}
    assert blowup_betti(standard_table("cpn_betti", 3), POINT, 3).b == (1, 0, 2, 0, 2, 0, 1)


def test_elliptic_blowup_of_cp4_adds_shifted_copies():
    before = standard_table("cpn", 4)
    after = blowup_hodge(before, ELLIPTIC, 3)
    added = {pq: after[pq] - before[pq] for pq in itertools.product(range(5), repeat=2) if after[pq] != before[pq]}
    assert added == {(1, 1): 1, (1, 2): 1, (2, 1): 1, (2, 2): 2, (2, 3): 1, (3, 2): 1, (3, 3): 1}
    b = blowup_betti(standard_table("cpn_betti", 4), ELLIPTIC, 3)
    assert b[3] == 2 and b.b == (1, 0, 2, 2, 3, 2, 2, 0, 1)


def test_zero_center_is_identity():
    zero = Center("zero", HodgeDiamond.zero(1), BettiVector(1, (0, 0, 0)))
    x = standard_table("cpn", 3)
    assert blowup_hodge(x, zero, 2) == x
    assert blowdown_hodge(x, zero, 2) == x
    assert blowup_betti(standard_table("cpn_betti", 3), zero, 2) == standard_table("cpn_betti", 3)


def test_blowdown_inverts_point_blowup():
    x = standard_table("cpn", 3)
    assert blowdown_hodge(blowup_hodge(x, POINT, 3), POINT, 3) == x


def test_blowdown_of_cp3_by_a_point_is_feasible():
    # numerically feasible: each diagonal entry drops from 1 to 0
    x = blowdown_hodge(standard_table("cpn", 3), POINT, 3)
    assert diag(x) == (1, 0, 0, 1)


def _infeasible_pairs():
    """Brute force over small ambient diamonds and built-in centers."""
    centers = ["point", "elliptic", "cpn:1", "cpn:2", "riemann_surface:2"]
    found = []
    for n in (2, 3, 4):
        for spec in centers:
            z = builtin_center(spec)
            r = n - z.dim
            if r < 2:
                continue
            x = standard_table("cpn", n)
            shifted = [[sum(z.diamond[p - i, q - i] for i in range(1, r)) for q in range(n + 1)] for p in range(n + 1)]
            if any(x[p, q] < shifted[p][q] for p in range(n + 1) for q in range(n + 1)):
                found.append((n, spec, r))
    return found


def test_brute_force_finds_infeasible_blowdowns():
    pairs = _infeasible_pairs()
    assert (3, "elliptic", 2) in pairs
    for n, spec, r in pairs:
        with pytest.raises(InfeasibleBlowDown):
            blowdown_hodge(standard_table("cpn", n), builtin_center(spec), r)


def test_infeasible_blowdown_checks_every_entry():
    with pytest.raises(InfeasibleBlowDown, match=r"h\(1,2\) = -1"):
        blowdown_hodge(standard_table("cpn", 3), ELLIPTIC, 2)
    with pytest.raises(InfeasibleBlowDown, match="b_3"):
        blowdown_betti(standard_table("cpn_betti", 3), ELLIPTIC, 2)


def test_dimension_checks():
    with pytest.raises(ValueError, match="dimension"):
        blowup_hodge(standard_table("cpn", 3), POINT, 2)
    with pytest.raises(ValueError, match="codimension"):
        ModificationStep(Direction.UP, POINT, 1)
    with pytest.raises(ValueError, match="step 0"):
        ModificationSequence(3, (ModificationStep(Direction.UP, ELLIPTIC, 3),))


def test_evaluate_sequence_examples():
    cp3, b3 = standard_table("cpn", 3), standard_table("cpn_betti", 3)
    h, b = evaluate_sequence(cp3, b3, ModificationSequence.point_blowups(3, 1))
    assert diag(h) == (1, 2, 2, 1) and b.b == (1, 0, 2, 0, 2, 0, 1)
    assert evaluate_sequence(cp3, b3, ModificationSequence(3, ())) == (cp3, b3)
    seq = ModificationSequence(
        4, (ModificationStep(Direction.UP, POINT, 4), ModificationStep(Direction.UP, ELLIPTIC, 3))
    )
    h, _ = evaluate_sequence(standard_table("cpn", 4), standard_table("cpn_betti", 4), seq)
    assert (h[1, 1], h[2, 2], h[1, 2], h[2, 1], h[3, 3]) == (3, 4, 1, 1, 3)


def test_evaluate_sequence_names_failing_step():
    seq = ModificationSequence(
        3, (ModificationStep(Direction.UP, POINT, 3), ModificationStep(Direction.DOWN, ELLIPTIC, 2))
    )
    with pytest.raises(InfeasibleBlowDown, match="step 1"):
        evaluate_sequence(standard_table("cpn", 3), standard_table("cpn_betti", 3), seq)


def test_builtin_centers():
    assert builtin_center("cpn:2").diamond == standard_table("cpn", 2)
    assert builtin_center("riemann_surface:3").betti.b == (1, 6, 1)
    for bad in ("cpn", "torus", "point:1"):
        with pytest.raises(ValueError):
            builtin_center(bad)


def test_custom_center_validation():
    d = HodgeDiamond.from_entries(1, {(0, 1): 1, (1, 0): 2}, compact=False)
    with pytest.raises(ValueError, match="Serre"):
        Center("bad", d, BettiVector(1, (0, 3, 0)))
    with pytest.raises(ValueError, match="Betti"):
        Center("bad", standard_table("cpn", 1), BettiVector(0, (1,)))


def test_bimeromorphic_invariants():
    cp3 = standard_table("cpn", 3)
    assert bimeromorphic_invariants_check(cp3, blowup_hodge(cp3, POINT, 3)).passed
    rep = bimeromorphic_invariants_check(cp3, standard_table("hopf_hodge", 3))
    assert "h(0,1)" in [c.name for c in rep.failures()]
    assert bimeromorphic_invariants_check(cp3, cp3).passed


CENTERS = ["point", "elliptic", "cpn:1", "cpn:2", "riemann_surface:0", "riemann_surface:2"]


@st.composite
def up_sequences(draw, n_range=(3, 5), max_steps=4):
    n = draw(st.integers(*n_range))
    steps = []
    for _ in range(draw(st.integers(0, max_steps))):
        spec = draw(st.sampled_from([c for c in CENTERS if builtin_center(c).dim <= n - 2]))
        z = builtin_center(spec)
        steps.append(ModificationStep(Direction.UP, z, n - z.dim))
    return ModificationSequence(n, tuple(steps))


@settings(max_examples=60)
@given(up_sequences())
def test_blowups_preserve_decomposition_and_invariants(seq):
    n = seq.ambient_n
    h, b = evaluate_sequence(standard_table("cpn", n), standard_table("cpn_betti", n), seq)
    assert hodge_sums(h) == b.b
    assert bimeromorphic_invariants_check(standard_table("cpn", n), h).passed


@settings(max_examples=60)
@given(up_sequences())
def test_reversed_blowdowns_return_to_start(seq):
    n = seq.ambient_n
    h, b = evaluate_sequence(standard_table("cpn", n), standard_table("cpn_betti", n), seq)
    back = tuple(ModificationStep(Direction.DOWN, s.center, s.codim) for s in reversed(seq.steps))
    assert evaluate_sequence(h, b, ModificationSequence(n, back)) == (standard_table("cpn", n), standard_table("cpn_betti", n))


@settings(max_examples=40)
@given(up_sequences())
def test_sequence_json_roundtrip(seq):
    assert ModificationSequence.from_json(seq.to_json()) == seq


def test_custom_center_json_roundtrip():
    z = Center("k3", HodgeDiamond.from_entries(2, {(0, 0): 1, (2, 0): 1, (0, 2): 1, (1, 1): 20, (2, 2): 1}), BettiVector(2, (1, 0, 22, 0, 1)))
    seq = ModificationSequence(4, (ModificationStep(Direction.UP, POINT, 4), ModificationStep(Direction.UP, z, 2)))
    assert ModificationSequence.from_json(seq.to_json()) == seq
