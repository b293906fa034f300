"""Invariant checks over randomized inputs, driven by hypothesis."""

from hypothesis import given, settings
from hypothesis import strategies as st

from collatz_arbor.core import decompose, w_term, z_term
from collatz_arbor.forward import f_step, valuation2
from collatz_arbor.inverse import (
    branch_forms,
    g_branch,
    initial_vertex,
    multiples_sequence,
    sibling_gap,
    siblings,
)
from collatz_arbor.verify import CollisionProbe, check_collision_parity

odd_positive = st.integers(min_value=0, max_value=10**30).map(lambda k: 2 * k + 1)
parents = odd_positive.filter(lambda u: u % 3 != 0)
small_index = st.integers(min_value=1, max_value=48)


@given(odd_positive)
def test_decompose_recomposes(x):
    d = decompose(x)
    assert 3 * d.multiple + d.residue == x
    assert d.residue == x % 3
    assert (d.multiple % 2 == 0) == (d.residue == 1)


@given(st.integers(min_value=1, max_value=10**25), st.integers(min_value=1, max_value=80))
def test_valuation_strips_exact_power(odd_part, a):
    m = odd_part * 2 // 2 * 2 + 1  # force odd
    m = (2 * odd_part - 1) << a
    assert valuation2(m) == a


@given(odd_positive)
def test_forward_step_reduces_to_odd(x):
    y, a = f_step(x)
    assert y % 2 == 1
    assert a >= 1
    assert 3 * x + 1 == y << a


@given(parents, small_index)
def test_forward_inverts_every_branch(u, n):
    v = g_branch(u, n)
    e = 2 * n if u % 3 == 1 else 2 * n - 1
    assert f_step(v) == (u, e)


@given(parents, small_index)
def test_branch_formulations_agree(u, n):
    forms = branch_forms(u, n)
    assert len(set(forms.values())) == 1


@given(parents, small_index)
def test_gap_closed_form(u, n):
    gap = sibling_gap(u, n)
    e = 2 * n if u % 3 == 1 else 2 * n - 1
    assert gap == (1 << e) * u
    assert gap == g_branch(u, n + 1) - g_branch(u, n)


@given(parents)
def test_sibling_residues_cycle(u):
    vals = siblings(u, count=9).values()
    first = vals[0] % 3
    assert [v % 3 for v in vals] == [(first + i) % 3 for i in range(9)]


@given(parents)
def test_initial_vertex_residue_forms(u):
    v1 = initial_vertex(u)
    if u % 3 == 1:
        assert v1 % 8 == 1
    else:
        assert v1 % 4 == 3


@given(parents)
@settings(max_examples=50)
def test_multiples_ascend_and_match_closed_form(u):
    seq = multiples_sequence(u, 12)
    assert seq.strictly_ascending
    assert seq.all_match


@given(st.integers(min_value=1, max_value=300))
def test_base_sequence_terms_interlock(n):
    z = z_term(n)
    assert z_term(n + 1) == 1 + 4 * z
    assert w_term(n) == (z - z % 3) // 3
    assert z % 3 == n % 3


@given(st.integers(min_value=1, max_value=128), st.integers(min_value=0, max_value=10**9),
       st.booleans())
def test_collision_probe_always_forces_odd(d, base, same_class):
    partner = 2 * base if same_class else 2 * base + 1
    required, is_odd = check_collision_parity(CollisionProbe(d, partner, same_class))
    assert is_odd
    assert required % 2 == 1
