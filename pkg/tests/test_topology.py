"""
Tests for prefspace.core.topology: explicit finite topologies, specialization
preorders, separation, connectivity, bases and continuity.
"""
import pytest

from prefspace.core.errors import DomainError, SizeError
from prefspace.core.topology import (
    FiniteTopology,
    SierpinskiPoint,
    SpecPreorder,
    alexandrov_topology,
    connectivity,
    enumerate_topologies,
    generate_from_subbasis,
    is_basis,
    is_continuous_map,
    mask_of,
    members,
    path_between,
    separation_axioms,
    sierpinski_space,
    specialization,
    specialization_path,
)


def discrete(n: int) -> FiniteTopology:
    return generate_from_subbasis(n, [[i] for i in range(n)])


class TestMasks:
    def test_round_trip(self):
        assert mask_of([0, 2, 3]) == 0b1101
        assert members(0b1101) == [0, 2, 3]


class TestFiniteTopology:
    """Axioms are enforced on construction."""

    def test_missing_empty_set(self):
        with pytest.raises(DomainError):
            FiniteTopology(2, frozenset({0b11}))

    def test_union_closure(self):
        with pytest.raises(DomainError):
            FiniteTopology(3, frozenset({0, 0b001, 0b010, 0b111}))

    def test_sierpinski(self):
        s = sierpinski_space()
        assert s.sorted_opens() == [[], [1], [0, 1]]
        assert s.is_open([SierpinskiPoint.OPEN])
        assert not s.is_open([SierpinskiPoint.CLOSED])

    def test_closure(self):
        s = sierpinski_space()
        assert s.closure([1]) == 0b11
        assert s.closure([0]) == 0b01
        assert s.is_closed([0])


class TestGeneration:
    def test_from_subbasis(self):
        t = generate_from_subbasis(3, [[0, 1], [1, 2]])
        assert t.sorted_opens() == [[], [1], [0, 1], [1, 2], [0, 1, 2]]

    def test_empty_subbasis_is_indiscrete(self):
        assert generate_from_subbasis(3, []).sorted_opens() == [[], [0, 1, 2]]

    def test_alexandrov_matches_specialization(self):
        pre = SpecPreorder.from_pairs(3, [(0, 1), (1, 2)])
        t = alexandrov_topology(pre)
        assert specialization(t).up == pre.up

    def test_from_pairs_is_transitive(self):
        pre = SpecPreorder.from_pairs(3, [(0, 1), (1, 2)])
        assert pre.leq(0, 2)
        assert not pre.leq(2, 0)
        pre.validate()

    def test_validate_rejects_non_transitive(self):
        with pytest.raises(DomainError):
            SpecPreorder(3, (0b011, 0b110, 0b100)).validate()


class TestEnumeration:
    """Labelled topology counts 1, 4, 29, 355."""

    @pytest.mark.parametrize("n,count", [(1, 1), (2, 4), (3, 29), (4, 355)])
    def test_counts(self, n, count):
        topologies = enumerate_topologies(n)
        assert len(topologies) == count
        assert len({t.opens for t in topologies}) == count

    def test_cap(self):
        with pytest.raises(SizeError):
            enumerate_topologies(5)


class TestSeparationAndConnectivity:
    def test_discrete(self):
        sep = separation_axioms(discrete(3))
        assert sep.t0 and sep.t1 and sep.t2
        conn = connectivity(discrete(3))
        assert not conn.connected
        assert conn.totally_path_disconnected
        assert len(conn.components) == 3

    def test_sierpinski(self):
        sep = separation_axioms(sierpinski_space())
        assert sep.t0
        assert not sep.t1 and not sep.t2
        assert connectivity(sierpinski_space()).path_connected

    def test_indiscrete_is_not_t0(self):
        assert not separation_axioms(generate_from_subbasis(2, [])).t0

    def test_specialization_path(self):
        path = specialization_path(sierpinski_space(), 0, 1)
        assert path(0) == 0
        assert path(0.5) == 1
        assert path(1) == 1

    def test_path_between(self):
        pre = SpecPreorder.from_pairs(3, [(0, 1), (2, 1)])
        assert path_between(pre, 0, 2) == [0, 1, 2]
        assert path_between(discrete(2), 0, 1) is None

    def test_incomparable_points(self):
        with pytest.raises(DomainError):
            specialization_path(discrete(2), 0, 1)


class TestBasisAndContinuity:
    def test_singletons_are_a_basis(self):
        assert is_basis([[0], [1], [2]], discrete(3)).ok

    def test_whole_space_is_not_a_basis(self):
        check = is_basis([[0, 1, 2]], discrete(3))
        assert not check.ok
        assert check.witness == (0b001, 0)

    def test_non_open_member(self):
        check = is_basis([[0]], sierpinski_space())
        assert not check.ok
        assert check.reason == "member is not open"

    def test_indicator_of_open_set_is_continuous(self):
        t = generate_from_subbasis(3, [[0, 1], [1, 2]])
        assert is_continuous_map([1, 1, 0], t, sierpinski_space())
        assert not is_continuous_map([1, 0, 0], t, sierpinski_space())

    def test_map_size_mismatch(self):
        with pytest.raises(DomainError):
            is_continuous_map([0], discrete(2), sierpinski_space())
