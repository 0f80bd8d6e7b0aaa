import pytest
from sympy import Poly, Rational, roots, symbols

from conftest import FIXTURES
from modpoints.checker import (
    Certificate,
    Status,
    Verdict,
    check_condition,
    check_semibig,
    find,
    load_db,
    log_valuation_certificate,
    parse_record,
    render_record,
    search,
)
from modpoints.curves import invariants
from modpoints.errors import (
    BadReductionClass,
    ConductorMismatch,
    EvenPrime,
    Malformed,
    NotTateAtP,
    SingularModel,
    SupersingularAp,
)


def test_dataset_size_and_roundtrip(db):
    assert len(db) >= 20
    for rec in db:
        line = render_record(rec)
        assert parse_record(line) == rec
        assert render_record(parse_record(line)) == line


def test_parse_examples():
    rec = parse_record("143a1|0,-1,1,-1,-2|143|1")
    assert rec.conductor_factorization == [(11, 1), (13, 1)]
    with pytest.raises(ConductorMismatch):
        parse_record("35a1|0,-1,1,9,1|34|1;3")
    with pytest.raises(SingularModel):
        parse_record("x|0,0,0,0,0|1|1")
    for bad in ("143a1|0,-1,1,-1|143|1", "143a1|0,-1,1,-1,-2|143|3", "143a1|0,a,1,-1,-2|143|1", "143a1|0,-1,1,-1,-2|143"):
        with pytest.raises(Malformed):
            parse_record(bad)


def test_corrupted_fixtures():
    with pytest.raises(ConductorMismatch):
        load_db(FIXTURES / "conductor_mismatch.txt")
    with pytest.raises(SingularModel):
        load_db(FIXTURES / "singular.txt")


X = symbols("X")


def _two_torsion(a):
    a1, a2, a3, a4, a6 = a
    b2, b4, b6 = a1 * a1 + 4 * a2, 2 * a4 + a1 * a3, a3 * a3 + 4 * a6
    for r in roots(Poly(4 * X**3 + b2 * X**2 + 2 * b4 * X + b6, X)):
        if r.is_rational:
            yield Rational(r), -(a1 * Rational(r) + a3) / 2


def _velu2(a, pt):
    a1, a2, a3, a4, a6 = a
    x0, y0 = pt
    t = 3 * x0**2 + 2 * a2 * x0 + a4 - a1 * y0
    return (a1, a2, a3, a4 - 5 * t, a6 - (a1 * a1 + 4 * a2) * t - 7 * x0 * t)


def _j(a):
    a1, a2, a3, a4, a6 = a
    b2, b4, b6 = a1 * a1 + 4 * a2, 2 * a4 + a1 * a3, a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    return Rational(c4**3) / (-b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6)


def two_power_degrees(ainvs):
    """2-power isogeny degrees, walking the 2-isogeny tree with Velu's formulas."""
    start = tuple(Rational(x) for x in ainvs)
    nodes, js, depth = [start], [_j(start)], [0]
    i = 0
    while i < len(nodes):
        for pt in _two_torsion(nodes[i]):
            b = _velu2(nodes[i], pt)
            if _j(b) not in js:
                nodes.append(b)
                js.append(_j(b))
                depth.append(depth[i] + 1)
        i += 1
    return {2**d for d in depth}


def has_three_isogeny(model):
    inv = invariants(model)
    psi3 = Poly(3 * X**4 + inv.b2 * X**3 + 3 * inv.b4 * X**2 + 3 * inv.b6 * X + inv.b8, X)
    return any(r.is_rational for r in roots(psi3))


def test_dataset_isogeny_degrees(db):
    for rec in db:
        degs = set(rec.isogeny_degrees)
        assert {d for d in degs if d & (d - 1) == 0} == two_power_degrees(rec.model.ainvs), rec.label
        assert has_three_isogeny(rec.model) == (3 in degs), rec.label


def test_condition_examples(by_label):
    E, A = by_label["143a1"], by_label["35a1"]
    c6 = check_condition(6, E, A, 7)
    assert c6.status is Status.PASS
    assert c6.evidence["residues"] == {11: "-35->0:Zero", 13: "-27->1:Residue"}
    assert check_condition(1, E, by_label["45a1"], 7).status is Status.FAIL
    c3 = check_condition(3, E, A, 7)
    assert c3.status is Status.PASS and c3.evidence["gcd"] == {1: 1, 3: 1}
    with pytest.raises(EvenPrime):
        check_condition(1, E, A, 2)
    with pytest.raises(ValueError):
        check_condition(7, E, A, 7)


def test_condition6_prime_sets(by_label):
    def primes(e, a, p, strict=False):
        return sorted(check_condition(6, by_label[e], by_label[a], p, strict_cond6=strict).evidence["residues"])

    assert primes("143a1", "35a1", 7) == [11, 13]
    assert primes("45a1", "21a4", 5) == []
    assert primes("45a1", "21a4", 5, strict=True) == [3]
    assert primes("34a1", "37b3", 11) == [2, 17]


@pytest.mark.parametrize("e,a,p", [("143a1", "35a1", 7), ("45a1", "21a4", 5), ("34a1", "37b3", 11)])
def test_paper_examples_pass(by_label, e, a, p):
    v = check_semibig(by_label[e], by_label[a], p, 4)
    assert v.overall is Status.PASS
    assert f"{p}^4" in v.conclusion


def test_even_prime(by_label):
    with pytest.raises(EvenPrime):
        check_semibig(by_label["143a1"], by_label["35a1"], 2, 1)


def test_overall_rule():
    ok = Certificate(1, Status.PASS, {"x": 1})
    for bad in (Status.FAIL, Status.UNVERIFIED):
        for i in range(6):
            certs = [ok] * 6
            certs[i] = Certificate(i + 1, bad, {"x": 1})
            assert Verdict("E", "A", 5, 1, tuple(certs)).overall is bad
    assert Verdict("E", "A", 5, 1, (ok,) * 6).overall is Status.PASS


def test_unverified_and_assumed(by_label):
    # 11a1 has a 5-isogeny, so surjectivity at 5 cannot be certified
    E, A = by_label["143a1"], by_label["11a1"]
    c = check_condition(4, E, A, 5)
    assert c.status is Status.UNVERIFIED
    assert check_condition(4, E, A, 5, assume_surjective=True).evidence["assumed"]


def test_search_example_three(db):
    res = search(db, "34a1", "37b3", 13)
    assert [v.p for v in res.passing] == [11]
    by_p = {v.p: v for v in res.verdicts}
    assert by_p[3].certificate(2).evidence["reason"] == "anomalous"
    assert by_p[5].certificate(6).status is Status.FAIL
    assert by_p[7].certificate(6).status is Status.FAIL


def test_search_order_and_workers(db):
    sub = db[:6]
    one = search(sub, pmax=13)
    many = search(sub, pmax=13, workers=4)
    assert [(v.e_label, v.a_label, v.p, v.overall) for v in one.verdicts] == [
        (v.e_label, v.a_label, v.p, v.overall) for v in many.verdicts
    ]
    index = {r.label: i for i, r in enumerate(sub)}
    keys = [(index[v.e_label], index[v.a_label], v.p) for v in one.verdicts]
    assert keys == sorted(keys)


def test_prime_conductor_filter(db):
    res = search(db, pmax=3, prime_conductor_only=True)
    labels = {v.e_label for v in res.verdicts} | {v.a_label for v in res.verdicts}
    assert "143a1" not in labels and "37b3" in labels


def test_log_valuation(by_label):
    E = by_label["143a1"]
    c, cert = log_valuation_certificate(E, by_label["21a4"], 7)
    assert c == 1 and cert.tail_certified and cert.terms[0] == (1, 1)
    A20 = parse_record("20a1|0,1,0,4,4|20|1;2;3;6")
    c, cert = log_valuation_certificate(E, A20, 5)
    assert c == 2 and cert.closed_form == 2 and cert.tamagawa_A == 2
    assert all(t is None or t > 2 for _, t in cert.terms[1:])
    with pytest.raises(NotTateAtP):
        log_valuation_certificate(E, by_label["37a1"], 7)
    with pytest.raises(SupersingularAp):
        # 34a1 is supersingular at 5
        log_valuation_certificate(by_label["34a1"], A20, 5)
    with pytest.raises(BadReductionClass):
        # 34a1 is anomalous at 3
        log_valuation_certificate(by_label["34a1"], by_label["21a4"], 3)


def test_find(db):
    assert find(db, "11a1").conductor == 11
    with pytest.raises(KeyError):
        find(db, "nope")
