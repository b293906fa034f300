import pytest

from collatz_arbor.core import BaseSequences, OddInteger, base_sequences, decompose, w_term, z_term
from collatz_arbor.errors import InconsistencyError


class TestDecompose:
    def test_base_case(self):
        assert decompose(1) == OddInteger(1, 1, 0)

    def test_direct_definition(self):
        assert decompose(5) == OddInteger(5, 2, 1)

    def test_member_of_base_sequence(self):
        # 85 sits in Z with multiple 28 sitting in W
        assert decompose(85) == OddInteger(85, 1, 28)
        assert z_term(4) == 85 and w_term(4) == 28

    @pytest.mark.parametrize("bad", [0, -3, 4, 100])
    def test_rejects_even_or_nonpositive(self, bad):
        with pytest.raises(ValueError):
            decompose(bad)

    def test_rejects_non_int(self):
        with pytest.raises(TypeError):
            decompose(5.0)

    def test_roundtrip_range(self):
        for x in range(1, 20_001, 2):
            d = decompose(x)
            assert 3 * d.multiple + d.residue == x

    def test_multiple_parity_by_class(self):
        for x in range(1, 20_001, 2):
            d = decompose(x)
            if d.residue == 1:
                assert d.multiple % 2 == 0
            else:
                assert d.multiple % 2 == 1

    def test_invalid_record_rejected(self):
        with pytest.raises(ValueError):
            OddInteger(7, 1, 3)  # 3*3+1 != 7
        with pytest.raises(ValueError):
            OddInteger(7, 0, 2)  # wrong residue


class TestZ:
    def test_first_terms(self):
        assert [z_term(n) for n in range(1, 6)] == [1, 5, 21, 85, 341]

    def test_recurrence(self):
        for n in range(1, 200):
            assert z_term(n + 1) == 1 + 4 * z_term(n)

    def test_strictly_ascending(self):
        terms = [z_term(n) for n in range(1, 100)]
        assert all(a < b for a, b in zip(terms, terms[1:]))

    def test_large_index_exceeds_fixed_width(self):
        assert z_term(64) > 2**64
        assert 3 * z_term(200) + 1 == 1 << 400

    @pytest.mark.parametrize("bad", [0, -1])
    def test_rejects_bad_index(self, bad):
        with pytest.raises(ValueError):
            z_term(bad)


class TestW:
    def test_first_terms(self):
        assert [w_term(n) for n in range(1, 7)] == [0, 1, 7, 28, 113, 455]

    def test_matches_multiple_of_z(self):
        for n in range(1, 200):
            assert w_term(n) == decompose(z_term(n)).multiple

    def test_branch_selector_matches_z_residue(self):
        # the piecewise branch is picked by n mod 3, which must equal z_n mod 3
        for n in range(1, 200):
            assert z_term(n) % 3 == n % 3

    def test_rejects_bad_index(self):
        with pytest.raises(ValueError):
            w_term(0)


class TestBaseSequences:
    def test_prefix(self):
        seqs = base_sequences(6)
        assert isinstance(seqs, BaseSequences)
        assert seqs.z == {1: 1, 2: 5, 3: 21, 4: 85, 5: 341, 6: 1365}
        assert seqs.w == {1: 0, 2: 1, 3: 7, 4: 28, 5: 113, 6: 455}

    def test_rejects_zero_count(self):
        with pytest.raises(ValueError):
            base_sequences(0)
