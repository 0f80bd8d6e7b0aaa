"""The six-condition gate for higher Selmer elements, curve records and dataset search."""

from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from math import gcd
from pathlib import Path
from typing import Callable, Iterable

from sympy import isprime, primerange

from .arith import factorization, ordp, require_odd_prime
from .curves import CurveModel, Kind, conductor, invariants, local_data, reduction_class
from .errors import (
    BadReductionClass,
    ConductorMismatch,
    Malformed,
    NotTateAtP,
    SupersingularAp,
)
from .galois import isogeny_coprimality, surjectivity
from .hecke import a_coefficients, a_ell, square_class


@dataclass(frozen=True)
class CurveRecord:
    label: str
    model: CurveModel
    conductor: int
    isogeny_degrees: tuple[int, ...]

    @property
    def conductor_factorization(self) -> list[tuple[int, int]]:
        return factorization(self.conductor)


def parse_record(line: str) -> CurveRecord:
    """Parse ``label|a1,a2,a3,a4,a6|conductor|d1;d2;...`` and validate it."""
    fields = line.strip().split("|")
    if len(fields) != 4:
        raise Malformed(f"expected 4 fields, got {len(fields)}: {line!r}")
    label, ainvs, cond, degs = (f.strip() for f in fields)
    if not label:
        raise Malformed("empty label")
    try:
        a = [int(x) for x in ainvs.split(",")]
        N = int(cond)
        degrees = tuple(int(x) for x in degs.split(";"))
    except ValueError as exc:
        raise Malformed(f"non-integer field in {line!r}") from exc
    if len(a) != 5:
        raise Malformed(f"expected 5 coefficients, got {len(a)}")
    if N < 1:
        raise Malformed("conductor must be positive")
    if 1 not in degrees or list(degrees) != sorted(set(degrees)) or min(degrees) < 1:
        raise Malformed(f"isogeny degrees {degrees} must ascend and include 1")
    model = CurveModel(*a)
    invariants(model)  # raises SingularModel
    actual = conductor(model)
    if actual != N:
        raise ConductorMismatch(f"{label}: stated conductor {N}, recomputed {actual}")
    return CurveRecord(label, model, N, degrees)


def render_record(rec: CurveRecord) -> str:
    a = ",".join(str(x) for x in rec.model.ainvs)
    d = ";".join(str(x) for x in rec.isogeny_degrees)
    return f"{rec.label}|{a}|{rec.conductor}|{d}"


def _records(lines: Iterable[str]) -> list[CurveRecord]:
    out = []
    for line in lines:
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(parse_record(line))
    return out


def load_db(path: str | Path | None = None) -> list[CurveRecord]:
    """Load a record file; with no path, the bundled dataset."""
    if path is None:
        text = resources.files("modpoints").joinpath("data/curves.txt").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return _records(text.splitlines())


def find(db: list[CurveRecord], label: str) -> CurveRecord:
    for rec in db:
        if rec.label == label:
            return rec
    raise KeyError(f"no curve labelled {label!r}")


class Status(enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    UNVERIFIED = "UNVERIFIED"


@dataclass(frozen=True)
class Certificate:
    index: int
    status: Status
    evidence: dict = field(default_factory=dict)

    def line(self) -> str:
        ev = " ".join(f"{k}={_fmt(v)}" for k, v in self.evidence.items())
        return f"COND {self.index} {self.status.value} {ev}".rstrip()


def _fmt(v) -> str:
    if isinstance(v, dict):
        return "{" + ",".join(f"{k}:{_fmt(x)}" for k, x in v.items()) + "}"
    if isinstance(v, (list, tuple)):
        return "[" + ",".join(_fmt(x) for x in v) + "]"
    if isinstance(v, enum.Enum):
        return str(v.value)
    return str(v).replace(" ", "")


@dataclass(frozen=True)
class Verdict:
    e_label: str
    a_label: str
    p: int
    n: int
    certificates: tuple[Certificate, ...]
    assume_surjective: bool = False
    strict_cond6: bool = False

    @property
    def overall(self) -> Status:
        statuses = [c.status for c in self.certificates]
        if Status.FAIL in statuses:
            return Status.FAIL
        if Status.UNVERIFIED in statuses:
            return Status.UNVERIFIED
        return Status.PASS

    @property
    def conclusion(self) -> str:
        if self.overall is not Status.PASS:
            return "no conclusion"
        p, n = self.p, self.n
        return f"there is an element of order {p}^{n} in Sel^({p}^{n})(E/L_{n}) for E = {self.e_label}"

    def certificate(self, i: int) -> Certificate:
        return self.certificates[i - 1]


def _cond6_primes(E: CurveRecord, A: CurveRecord, p: int, strict: bool) -> list[int]:
    return [
        ell
        for ell, _ in E.conductor_factorization
        if ell != p and (strict or A.conductor % ell)
    ]


def check_condition(
    i: int,
    E: CurveRecord,
    A: CurveRecord,
    p: int,
    *,
    strict_cond6: bool = False,
    assume_surjective: bool = False,
    lmax: int = 1000,
) -> Certificate:
    require_odd_prime(p)
    if i == 1:
        fac = A.conductor_factorization
        ok = all(e == 1 for _, e in fac)
        return Certificate(1, Status.PASS if ok else Status.FAIL, {"N_A": A.conductor, "factorization": fac})
    if i == 2:
        ld = reduction_class(E.model, p)
        ev = {"kind": ld.kind, "ord_disc": ld.ord_disc}
        reason = None
        if ld.kind is Kind.SPLIT_MULTIPLICATIVE:
            if ld.ord_disc % p == 0:
                reason = "p|ord_disc"
        elif ld.kind is Kind.GOOD_ORDINARY:
            ev["a_p"] = a_ell(E.model, p)
            if ld.anomalous:
                reason = "anomalous"
        elif ld.kind is Kind.GOOD_SUPERSINGULAR:
            ev["a_p"] = a_ell(E.model, p)
            reason = "supersingular"
        elif ld.kind is Kind.ADDITIVE:
            reason = "additive"
        ok = reason is None
        if reason:
            ev["reason"] = reason
        return Certificate(2, Status.PASS if ok else Status.FAIL, ev)
    if i == 3:
        ok = isogeny_coprimality(list(A.isogeny_degrees), E.conductor)
        gcds = {d: gcd(d, E.conductor) for d in A.isogeny_degrees}
        return Certificate(3, Status.PASS if ok else Status.FAIL, {"N_E": E.conductor, "gcd": gcds})
    if i in (4, 5):
        rec = A if i == 4 else E
        v = surjectivity(rec.model, p, lmax)
        ev = {
            "curve": rec.label,
            "witnesses": [f"{w.tag}@{w.ell}" for w in v.witnesses],
            "lmax": lmax,
        }
        if v.surjective:
            return Certificate(i, Status.PASS, ev)
        if assume_surjective:
            ev["assumed"] = True
            return Certificate(i, Status.PASS, ev)
        return Certificate(i, Status.UNVERIFIED, ev)
    if i == 6:
        residues = {}
        ok = True
        for ell in _cond6_primes(E, A, p, strict_cond6):
            d = a_ell(A.model, ell) ** 2 - 4 * ell
            cls = square_class(d, p)
            residues[ell] = f"{d}->{d % p}:{cls.value}"
            ok = ok and cls.is_square
        ev = {"residues": residues, "strict": strict_cond6}
        return Certificate(6, Status.PASS if ok else Status.FAIL, ev)
    raise ValueError(f"condition index must be 1..6, got {i}")


def check_semibig(
    E: CurveRecord,
    A: CurveRecord,
    p: int,
    n: int = 1,
    *,
    strict_cond6: bool = False,
    assume_surjective: bool = False,
    lmax: int = 1000,
) -> Verdict:
    """Evaluate all six conditions. ``n`` only enters the conclusion text."""
    require_odd_prime(p)
    if n < 1:
        raise ValueError("n must be at least 1")
    certs = tuple(
        check_condition(
            i, E, A, p, strict_cond6=strict_cond6, assume_surjective=assume_surjective, lmax=lmax
        )
        for i in range(1, 7)
    )
    return Verdict(E.label, A.label, p, n, certs, assume_surjective, strict_cond6)


@dataclass
class SearchResult:
    verdicts: list[Verdict]

    @property
    def passing(self) -> list[Verdict]:
        return [v for v in self.verdicts if v.overall is Status.PASS]

    @property
    def unverified(self) -> list[Verdict]:
        return [v for v in self.verdicts if v.overall is Status.UNVERIFIED]

    def triples(self, status: Status = Status.PASS) -> list[tuple[str, str, int]]:
        return [(v.e_label, v.a_label, v.p) for v in self.verdicts if v.overall is status]


Filter = Callable[[CurveRecord], bool] | str | None


def _as_pred(f: Filter) -> Callable[[CurveRecord], bool]:
    if f is None:
        return lambda rec: True
    if isinstance(f, str):
        return lambda rec: rec.label == f
    return f


def _run(args) -> Verdict:
    E, A, p, assume = args
    return check_semibig(E, A, p, 1, assume_surjective=assume)


def search(
    db: list[CurveRecord],
    e_filter: Filter = None,
    a_filter: Filter = None,
    pmax: int = 13,
    *,
    workers: int = 1,
    prime_conductor_only: bool = False,
    assume_surjective: bool = False,
) -> SearchResult:
    """Check every (E, A, p) with odd p <= pmax, ordered by (E index, A index, p)."""
    if pmax < 3:
        raise ValueError("pmax must be at least 3")
    pe, pa = _as_pred(e_filter), _as_pred(a_filter)

    def ok(rec):
        return not prime_conductor_only or (isprime(rec.conductor) and rec.conductor >= 11)

    es = [r for r in db if pe(r) and ok(r)]
    as_ = [r for r in db if pa(r) and ok(r)]
    jobs = [(E, A, p, assume_surjective) for E in es for A in as_ for p in primerange(3, pmax + 1)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            verdicts = list(pool.map(_run, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        verdicts = [_run(j) for j in jobs]
    return SearchResult(verdicts)


@dataclass(frozen=True)
class ValuationCertificate:
    p: int
    c: int
    tamagawa_A: int
    split_A: bool
    a_p: int
    terms: tuple[tuple[int, int | None], ...]  # (n, ord_p(a_n/n) + n c), None when a_n = 0
    n_bound: int
    tail_certified: bool
    closed_form: int
    notes: tuple[str, ...] = ()


def log_valuation_certificate(
    E: CurveRecord, A: CurveRecord, p: int, N: int = 30
) -> tuple[int, ValuationCertificate]:
    """Valuation of the formal logarithm sum_n a_n(E)/n q_A^n at p.

    With c = -ord_p(j(A)) = ord_p(q_A), the n-th term has valuation
    ord_p(a_n/n) + n c. Terms up to N are listed; beyond N they are bounded
    below by n c - floor(log_p n), which exceeds c once p^(N c) > N + 1.
    """
    require_odd_prime(p)
    if N < 1:
        raise ValueError("N must be at least 1")
    j = invariants(A.model).j
    c = -ordp(j, p)
    if c <= 0:
        raise NotTateAtP(f"j({A.label}) is integral at {p}")
    ld = reduction_class(E.model, p)
    if ld.kind is Kind.ADDITIVE:
        raise BadReductionClass(f"{E.label} has additive reduction at {p}")
    if ld.kind is Kind.SPLIT_MULTIPLICATIVE and ld.ord_disc % p == 0:
        raise BadReductionClass(f"{p} divides ord_p(disc) for split {E.label}")
    if ld.kind.is_good and ld.anomalous:
        raise BadReductionClass(f"{p} is anomalous for {E.label}")
    ap = a_ell(E.model, p)
    if ap % p == 0:
        raise SupersingularAp(f"{p} divides a_p({E.label}) = {ap}")
    an = a_coefficients(E.model, N)
    terms = []
    for n in range(1, N + 1):
        if an[n] == 0:
            terms.append((n, None))
        else:
            terms.append((n, ordp(an[n], p) - ordp(n, p) + n * c))
    vals = [t for _, t in terms if t is not None]
    assert terms[0] == (1, c)
    unique = all(t > c for _, t in terms[1:] if t is not None)
    tail = p ** (N * c) > N + 1
    ldA = local_data(A.model, p)
    closed = min(c, ordp(ap, p) + p * c - 1)
    notes = ["Manin constant taken to be a p-adic unit"]
    if ldA.kind is not Kind.SPLIT_MULTIPLICATIVE:
        notes.append("A is not split at p: ord_p(q_A) and c_p(A) may differ")
    cert = ValuationCertificate(
        p,
        c,
        ldA.c,
        ldA.kind is Kind.SPLIT_MULTIPLICATIVE,
        ap,
        tuple(terms),
        N,
        unique and tail,
        closed,
        tuple(notes),
    )
    if not (unique and tail and min(vals) == c and closed == c):
        raise AssertionError("valuation certificate failed")
    return c, cert
