import pytest
from fractions import Fraction
from hypothesis import given, strategies as st

from schurtoda.partitions import (
    HalfInt,
    Partition,
    SizeLimitError,
    TruncationError,
    contains,
    enumerate_partitions,
    occupies,
    partition_from_points,
    point_config,
)

# p(0..10), independent of the enumerator
P_OF_N = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]

partitions = st.lists(st.integers(1, 6), max_size=6).map(lambda xs: Partition(tuple(sorted(xs, reverse=True))))


def test_enumeration_counts():
    parts = enumerate_partitions(10)
    assert len(parts) == sum(P_OF_N) == 139
    for n, count in enumerate(P_OF_N):
        assert sum(1 for p in parts if p.size == n) == count


def test_enumeration_order_and_uniqueness():
    parts = enumerate_partitions(8)
    assert parts == sorted(parts)
    assert len(set(parts)) == len(parts)


def test_enumeration_cap():
    with pytest.raises(SizeLimitError):
        enumerate_partitions(41)


def test_partition_validation():
    assert Partition((3, 1, 0, 0)).parts == (3, 1)
    with pytest.raises(ValueError):
        Partition((1, 2))
    with pytest.raises(ValueError):
        Partition((2, -1))


def test_halfint_parsing():
    assert HalfInt.of("3/2").twice == 3
    assert HalfInt.of(-0.5).twice == -1
    assert HalfInt.of(Fraction(5, 2)).twice == 5
    assert str(HalfInt(-7)) == "-7/2"
    assert float(HalfInt(3)) == 1.5
    assert HalfInt(1) + 1 == HalfInt(3)
    for bad in (1, 0.25, "3/4"):
        with pytest.raises(ValueError):
            HalfInt.of(bad)


def test_point_config_examples():
    assert [str(x) for x in point_config(Partition(), 0, 2)] == ["-1/2", "-3/2"]
    assert [str(x) for x in point_config(Partition((1,)), 1, 3)] == ["3/2", "-1/2", "-3/2"]
    with pytest.raises(TruncationError):
        point_config(Partition((2, 1)), 0, 1)


@given(partitions)
def test_conjugate_involution(lam):
    assert lam.conjugate().conjugate() == lam
    assert lam.conjugate().size == lam.size


@given(partitions, st.integers(-3, 3))
def test_points_round_trip(lam, n):
    pts = point_config(lam, n, lam.length + 2)
    assert partition_from_points([p.twice for p in pts], n) == lam
    for p in pts:
        assert occupies(lam, n, p.twice)


@given(partitions, st.integers(-3, 3))
def test_charge_from_configuration(lam, n):
    # |S+| - |S-| == n, reading S to a depth that reaches the filled sea
    depth = lam.length + abs(n) + 3
    pts = [p.twice for p in point_config(lam, n, depth)]
    plus = sum(1 for x in pts if x > 0)
    holes = sum(1 for x in range(pts[-1], 0, 2) if x not in pts)
    assert plus - holes == n


@given(partitions)
def test_json_round_trip(lam):
    assert Partition.from_json(lam.to_json()) == lam


def test_contains():
    assert contains(Partition((3, 2)), Partition((2, 2)))
    assert not contains(Partition((3, 2)), Partition((1, 1, 1)))
    assert contains(Partition((1,)), Partition())
