import pytest

from modpoints.curves import CurveModel
from modpoints.errors import EmptyDegreeList, EvenPrime
from modpoints.galois import Status, has_two_isogeny, isogeny_coprimality, surjectivity

SURJECTIVE = [("35a1", 7), ("143a1", 7), ("21a4", 5), ("45a1", 5), ("34a1", 11), ("37b3", 11)]


@pytest.mark.parametrize("label,p", SURJECTIVE)
def test_paper_surjective_cases(by_label, label, p):
    v = surjectivity(by_label[label].model, p)
    assert v.surjective
    assert {w.tag for w in v.witnesses} == {"nonsplit", "split", "exceptional"}


@pytest.mark.parametrize("label,p", [("11a1", 5), ("26b1", 7), ("143a1", 3), ("35a1", 3)])
def test_inconclusive(by_label, label, p):
    # 11a1 has a 5-isogeny and 26b1 a 7-isogeny; at 3 the exceptional class is never seen
    assert surjectivity(by_label[label].model, p).status is Status.INCONCLUSIVE


def test_witnesses_are_minimal_and_stable(by_label):
    m = by_label["143a1"].model
    small = surjectivity(m, 7, 100)
    big = surjectivity(m, 7, 2000)
    assert small.witnesses == big.witnesses


def test_two_isogeny_matches_dataset(db):
    for rec in db:
        assert has_two_isogeny(rec.model) == (2 in rec.isogeny_degrees), rec.label
    assert has_two_isogeny(CurveModel(0, 0, 0, -1, 0))


def test_isogeny_coprimality():
    assert isogeny_coprimality([1, 3], 143)
    assert not isogeny_coprimality([1, 3], 45)
    with pytest.raises(EmptyDegreeList):
        isogeny_coprimality([], 11)


def test_even_prime_rejected(by_label):
    with pytest.raises(EvenPrime):
        surjectivity(by_label["11a1"].model, 2)
