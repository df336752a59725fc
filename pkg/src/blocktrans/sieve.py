"""Arithmetic feasibility sieves for block-transitive 3-designs with small blocks.

Four scenarios are covered: intersection patterns of a block with an
imprimitivity system, and the product, simple diagonal and twisted wreath
types of primitive groups. Everything is exact integer (or ``Fraction``)
arithmetic.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from importlib import resources
from math import comb, prod
from pathlib import Path

from .design import DesignParams, derive_params
from .errors import ValidationError
from .perm import PermGroup

K_RANGE = range(3, 7)


def _check_k(k: int) -> None:
    if k not in K_RANGE:
        raise ValidationError(f"k={k} outside {K_RANGE.start}..{K_RANGE.stop - 1}")


def falling(x: int, t: int) -> int:
    return prod(x - i for i in range(t))


@dataclass(frozen=True)
class PartitionVector:
    """Intersection sizes of a k-set with the ``d`` classes, weakly decreasing."""

    parts: tuple[int, ...]

    def __post_init__(self):
        if any(a < b for a, b in zip(self.parts, self.parts[1:])) or any(p < 0 for p in self.parts):
            raise ValidationError(f"parts {self.parts} must be nonnegative and weakly decreasing")

    @property
    def k(self) -> int:
        return sum(self.parts)

    @property
    def d(self) -> int:
        return len(self.parts)

    @property
    def nonzero(self) -> tuple[int, ...]:
        return tuple(p for p in self.parts if p)

    def bt(self, t: int) -> int:
        return sum(falling(x, t) for x in self.parts)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.nonzero)) + ")"


def bt(x: PartitionVector, t: int) -> int:
    if not 1 <= t <= 3:
        raise ValidationError("t must be 1, 2 or 3")
    return x.bt(t)


def partitions(k: int, max_part: int | None = None):
    """Partitions of ``k`` as weakly decreasing tuples, in reverse lexicographic order."""
    if max_part is None:
        max_part = k
    if k == 0:
        yield ()
        return
    for first in range(min(k, max_part), 0, -1):
        for rest in partitions(k - first, first):
            yield (first,) + rest


class Scenario(str, Enum):
    IMPRIMITIVE = "imprimitive-partition"
    PRODUCT = "product-action"
    DIAGONAL = "simple-diagonal"
    TWISTED = "twisted-wreath"


@dataclass(frozen=True)
class Elimination:
    candidate: tuple
    condition: str
    witness: str


@dataclass
class SieveReport:
    scenario: Scenario
    inputs: dict
    candidates: list[tuple] = field(default_factory=list)
    surviving: list[tuple] = field(default_factory=list)
    eliminations: list[Elimination] = field(default_factory=list)
    # rendered sections, in order; stage summaries and tables live here
    sections: list[tuple[str, list[str]]] = field(default_factory=list)

    def eliminated(self, condition: str | None = None) -> list[Elimination]:
        return [e for e in self.eliminations if condition is None or e.condition == condition]

    def is_exhaustive(self) -> bool:
        seen = [e.candidate for e in self.eliminations] + list(self.surviving)
        return len(seen) == len(set(seen)) and set(seen) == set(self.candidates)


# ---------------------------------------------------------------- imprimitive

@dataclass(frozen=True)
class ImprimitiveCandidate:
    x: PartitionVector
    c: int
    d: int

    @property
    def v(self) -> int:
        return self.c * self.d

    def __str__(self) -> str:
        return f"x={self.x} c={self.c} d={self.d} v={self.v}"


def delandtsheer_doyen_bound(k: int) -> int:
    return (comb(k, 2) - 1) ** 2


def imprimitive_partition_sieve(k: int) -> SieveReport:
    """Patterns ``x`` and systems ``(c, d)`` compatible with a 3-design orbit.

    Stages: the pair condition ``b2 (v-1) = k(k-1)(c-1)``; fit (``c >= x1`` and
    at least as many classes as nonzero parts); the triple condition
    ``b3 (v-1)(v-2) = k(k-1)(k-2)(c-1)(c-2)``; nontriviality ``v > k+1``.
    """
    _check_k(k)
    bound = delandtsheer_doyen_bound(k)
    report = SieveReport(Scenario.IMPRIMITIVE, {"k": k, "v_max": bound})
    pairs = [(c, d) for c in range(2, bound // 2 + 1) for d in range(2, bound // c + 1)]
    table: list[str] = []
    for parts in partitions(k):
        if len(parts) < 2:
            continue
        row = []
        for c, d in pairs:
            x = PartitionVector(parts)
            cand = ImprimitiveCandidate(x, c, d)
            key = (parts, c, d)
            report.candidates.append(key)
            v = c * d
            b2, b3 = x.bt(2), x.bt(3)
            rhs2 = k * (k - 1) * (c - 1)
            if b2 * (v - 1) != rhs2:
                report.eliminations.append(Elimination(
                    key, "b2", f"b2={b2} but k(k-1)(c-1)/(v-1) = {_frac(rhs2, v - 1)}"))
                continue
            row.append(f"({c},{d})")
            if c < parts[0] or d < len(parts):
                report.eliminations.append(Elimination(
                    key, "fit", f"a block with x={cand.x} needs c >= {parts[0]} and d >= {len(parts)}"))
                continue
            rhs3 = k * (k - 1) * (k - 2) * (c - 1) * (c - 2)
            if b3 * (v - 1) * (v - 2) != rhs3:
                report.eliminations.append(Elimination(
                    key, "b3", f"b3={b3} but k(k-1)(k-2)(c-1)(c-2)/((v-1)(v-2)) = {_frac(rhs3, (v - 1) * (v - 2))}"))
                continue
            if v <= k + 1:
                report.eliminations.append(Elimination(key, "nontrivial", f"v={v} <= k+1={k + 1}"))
                continue
            report.surviving.append(key)
        table.append(f"x={_pstr(parts)}: " + (",".join(row) if row else "none"))
    report.sections.append((
        f"candidates: {len(report.candidates)} triples (x, c, d); x a partition of {k} with >= 2 parts, "
        f"c,d >= 2, v = cd <= (C(k,2)-1)^2 = {bound}", []))
    report.sections.append(("b2 stage: b2 = k(k-1)(c-1)/(v-1)", table))
    report.sections.append((f"b2 stage eliminated: {len(report.eliminated('b2'))}", []))
    report.sections.append(("later eliminations:", [
        f"eliminated {_ckey(e.candidate)}: {e.condition}: {e.witness}"
        for e in report.eliminations if e.condition != "b2"]))
    return report


def b2_table(report: SieveReport) -> dict[tuple[int, ...], list[tuple[int, int]]]:
    """Per partition, the ``(c, d)`` pairs passing the pair condition."""
    out: dict[tuple[int, ...], list[tuple[int, int]]] = {}
    for key in report.candidates:
        out.setdefault(key[0], [])
    failed = {e.candidate for e in report.eliminated("b2")}
    for key in report.candidates:
        if key not in failed:
            out[key[0]].append((key[1], key[2]))
    return out


def _pstr(parts) -> str:
    return "(" + ",".join(map(str, parts)) + ")"


def _ckey(key) -> str:
    parts, c, d = key
    return f"x={_pstr(parts)} c={c} d={d} v={c * d}"


def _frac(num: int, den: int) -> str:
    f = Fraction(num, den)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


# ---------------------------------------------------------------- product action

def _product_ok(k: int, v0: int, m: int, s: int) -> tuple[bool, int, Fraction]:
    v = v0**m
    dmax = Fraction(m * (v0 - 1), s - 1)
    lhs = (v - 1) * (v - 2)
    rhs = falling(k, 3) * dmax * (dmax - 1)
    return lhs <= rhs, lhs, rhs


# rank-3 primitive groups of almost simple or diagonal type on 5..9 points: none
RANK3_NONE_DEGREES = range(5, 10)


def product_action_sieve(k: int) -> SieveReport:
    """Product-type primitive groups ``G <= K wr S_m`` on ``v0^m`` points.

    Stage 1 is the subdegree bound with ``D = m(v0-1)/(s-1)``, ``s`` the rank of
    ``K``. The scan in ``v0`` stops at the first failure for ``s = 2`` (the
    largest right side), and in ``m`` at the first ``m`` failing at ``v0 = 5``.
    """
    _check_k(k)
    report = SieveReport(Scenario.PRODUCT, {"k": k})
    stage1: dict[tuple[int, int], list[int]] = {}
    m = 2
    while True:
        v0 = 5
        while True:
            for s in range(2, v0 + 1):
                key = (v0, m, s)
                report.candidates.append(key)
                ok, lhs, rhs = _product_ok(k, v0, m, s)
                if ok:
                    stage1.setdefault((m, s), []).append(v0)
                    report.surviving.append(key)
                else:
                    report.eliminations.append(Elimination(
                        key, "stage1", f"(v0^m-1)(v0^m-2) = {lhs} > k(k-1)(k-2)D(D-1) = {_frac(rhs.numerator, rhs.denominator)}"))
            if not _product_ok(k, v0, m, 2)[0]:
                break
            v0 += 1
        if not _product_ok(k, 5, m, 2)[0]:
            break
        m += 1

    rows = []
    for ms in sorted(set(stage1) | {(2, 2), (2, 3), (3, 2)}):
        vals = stage1.get(ms, [])
        rows.append(f"(m,s)=({ms[0]},{ms[1]}): v0 in " + ("{" + ",".join(map(str, vals)) + "}" if vals else "{}"))
    report.sections.append((
        f"candidates: {len(report.candidates)} triples (v0, m, s) with v0 >= 5, m >= 2, 2 <= s <= v0", []))
    report.sections.append(("stage 1: (v0^m-1)(v0^m-2) <= k(k-1)(k-2) D(D-1), D = m(v0-1)/(s-1)", rows))
    report.sections.append((f"stage 1 eliminated: {len(report.eliminated('stage1'))}", []))

    lines = []
    survivors = []
    ff = falling(k, 3)
    for key in report.surviving:
        v0, m, s = key
        if s == 2:
            # K 2-transitive: H = K wr S_m has a suborbit of size m(v0-1)
            sub = m * (v0 - 1)
            n_ = (v0**m - 1) * (v0**m - 2)
            big = ff * sub * (sub - 1)
            if big % n_:
                e = Elimination(key, "stage2", f"{n_} does not divide {big} = k(k-1)(k-2)*{sub}*{sub - 1}")
                report.eliminations.append(e)
                lines.append(f"eliminated v0={v0} m={m} s={s}: {e.witness}")
                continue
        elif s == 3 and m == 2 and v0 in RANK3_NONE_DEGREES:
            e = Elimination(key, "asserted",
                            f"no primitive almost simple or diagonal group of rank 3 on {v0} points "
                            "(asserted, not recomputed)")
            report.eliminations.append(e)
            lines.append(f"eliminated v0={v0} m={m} s={s}: {e.witness}")
            continue
        survivors.append(key)
    report.surviving = survivors
    report.sections.append(("stage 2:", lines))
    return report


def product_stage1_table(report: SieveReport) -> dict[tuple[int, int], list[int]]:
    out: dict[tuple[int, int], list[int]] = {}
    for key in report.candidates:
        v0, m, s = key
        if key in report.surviving or any(e.candidate == key and e.condition != "stage1"
                                          for e in report.eliminations):
            out.setdefault((m, s), []).append(v0)
    return {ms: sorted(v) for ms, v in out.items()}


# ---------------------------------------------------------------- simple groups

@dataclass(frozen=True)
class SimpleGroupRecord:
    name: str
    order: int
    out_order: int

    def __post_init__(self):
        if self.order < 60:
            raise ValidationError(f"{self.name}: order {self.order} < 60 is not nonabelian simple")
        if self.out_order < 1:
            raise ValidationError(f"{self.name}: |Out| must be positive")


def parse_simple_groups(text: str) -> list[SimpleGroupRecord]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header != ["name", "order", "out_order"]:
        raise ValidationError(f"simple-group table header must be name,order,out_order, got {header}")
    out = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 3 or not row[1].isdigit() or not row[2].isdigit():
            raise ValidationError(f"line {lineno}: malformed row {row}")
        out.append(SimpleGroupRecord(row[0], int(row[1]), int(row[2])))
    if not out:
        raise ValidationError("simple-group table is empty")
    return out


def load_simple_groups(path: str | Path | None = None) -> list[SimpleGroupRecord]:
    if path is None:
        text = resources.files("blocktrans").joinpath("data/simple_groups.csv").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return parse_simple_groups(text)


def _diag_ok(k: int, order: int, m: int, exponent_shift: int = 1) -> tuple[bool, int, int]:
    v = order ** (m - exponent_shift)
    lhs = (v - 1) * (v - 2)
    rhs = falling(k, 3) * m * order * (m * order - 1)
    return lhs <= rhs, lhs, rhs


def diagonal_sieve(k: int, table: list[SimpleGroupRecord] | None = None) -> SieveReport:
    """Simple diagonal type: socle ``T^m`` on ``|T|^(m-1)`` points."""
    _check_k(k)
    if table is None:
        table = load_simple_groups()
    if not table:
        raise ValidationError("simple-group table is empty")
    for rec in table:
        if rec.order < 60:
            raise ValidationError(f"{rec.name}: order {rec.order} < 60")
    report = SieveReport(Scenario.DIAGONAL, {"k": k, "records": len(table)})
    lines = []
    m = 2
    max_m = None
    while True:
        ok, lhs, rhs = _diag_ok(k, 60, m)
        report.candidates.append(("m", m))
        if ok:
            max_m = m
            lines.append(f"m={m} holds: {lhs} <= {rhs}")
        else:
            lines.append(f"m={m} fails: {lhs} > {rhs}")
            report.eliminations.append(Elimination(("m", m), "stage1", f"{lhs} > {rhs}"))
            break
        m += 1
    lines.append(f"max m = {max_m}")
    report.inputs["max_m"] = max_m
    report.sections.append(("stage 1 at |T|=60: (|T|^(m-1)-1)(|T|^(m-1)-2) <= k(k-1)(k-2) m|T|(m|T|-1)", lines))

    coeff = 4 * falling(k, 3)
    lines = []
    for rec in table:
        key = ("T", rec.name)
        report.candidates.append(key)
        lhs = (rec.order - 1) * (rec.order - 2)
        rhs = coeff * rec.out_order
        if lhs < rhs:
            report.surviving.append(key)
            lines.append(f"survivor {rec.name} |T|={rec.order} |Out|={rec.out_order}: {lhs} < {rhs}")
        else:
            w = f"{lhs} >= {rhs}"
            report.eliminations.append(Elimination(key, "stage2", w))
            lines.append(f"eliminated {rec.name} |T|={rec.order} |Out|={rec.out_order}: {w}")
    for mm in range(2, max_m + 1):
        if mm != 2:
            report.eliminations.append(Elimination(("m", mm), "unhandled", "stage 2 covers m=2 only"))
        elif report.surviving:
            report.surviving.append(("m", 2))
        else:
            report.eliminations.append(Elimination(("m", 2), "stage2", "no table record passes"))
    report.sections.append((
        f"stage 2 (m=2): (|T|-1)(|T|-2) < 4k(k-1)(k-2)|Out(T)| = {coeff}|Out(T)|", lines))
    top = max(r.order for r in table)
    need = (top - 1) * (top - 2) // coeff + 1
    report.sections.append((
        f"beyond the table (|T| > {top}) the inequality would need |Out(T)| >= {need}", []))
    report.sections.append(("no survivors" if not report.surviving else f"{len(report.surviving)} survivors", []))
    return report


def twisted_wreath_sieve(k: int, order: int = 60) -> SieveReport:
    """Twisted wreath type: the subdegree bound against the structural ``m >= 6``."""
    _check_k(k)
    report = SieveReport(Scenario.TWISTED, {"k": k, "order": order})
    lines = []
    max_m = 0
    m_top = 6
    for m in range(1, m_top + 1):
        ok, lhs, rhs = _diag_ok(k, order, m)
        report.candidates.append(("m", m))
        if ok:
            max_m = m
        lines.append(f"m={m} {'holds' if ok else 'fails'}: {lhs} {'<=' if ok else '>'} {rhs}")
        if m < 6:
            report.eliminations.append(Elimination(("m", m), "structure", "needs m >= 6"))
        elif ok:
            report.surviving.append(("m", m))
        else:
            report.eliminations.append(Elimination(("m", m), "bound", f"{lhs} > {rhs}, ratio > {lhs // rhs}"))
    report.inputs["max_m"] = max_m
    report.sections.append((
        f"inequality at |T|={order}: (|T|^(m-1)-1)(|T|^(m-1)-2) <= k(k-1)(k-2) m|T|(m|T|-1)", lines))
    strong = max((m for m in range(1, m_top + 1) if _diag_ok(k, order, m, 0)[0]), default=0)
    report.inputs["max_m_full_degree"] = strong
    report.sections.append((f"with v = |T|^m on the left: max m = {strong}", []))
    verdict = "eliminated" if max_m < 6 else "not eliminated"
    report.sections.append((f"max m = {max_m}; requires m >= 6; {verdict}", []))
    return report


# ---------------------------------------------------------------- divisibility

def divisibility_conditions(v: int, k: int, lam: int, d: int) -> tuple[bool, bool]:
    """``(r | k lam d(d-1), (v-1)(v-2) | k(k-1)(k-2) d(d-1))`` for a 3-design."""
    p = derive_params(v, k, lam, 3)
    return (k * lam * d * (d - 1)) % p.r == 0, (falling(k, 3) * d * (d - 1)) % ((v - 1) * (v - 2)) == 0


def block_transitive_checks(g: PermGroup, params: DesignParams) -> dict[str, bool]:
    """Divisibility consequences of block-transitivity on a 3-design, per condition."""
    v, k, lam, r = params.v, params.k, params.lam, params.r
    out = {f"r | k|G_a| ({r} | {k}*{g.stabilizer(1).order()})": (k * g.stabilizer(1).order()) % r == 0}
    for d in sorted(set(g.subdegrees(1).orbit_sizes)):
        if d == 1:
            continue
        a, b = divisibility_conditions(v, k, lam, d)
        out[f"r | k lam d(d-1), d={d}"] = a
        out[f"(v-1)(v-2) | k(k-1)(k-2)d(d-1), d={d}"] = b
    return out


# ---------------------------------------------------------------- rendering

def format_report(report: SieveReport, verbose: bool = False) -> str:
    name = {
        Scenario.IMPRIMITIVE: "imprimitive",
        Scenario.PRODUCT: "product",
        Scenario.DIAGONAL: "diagonal",
        Scenario.TWISTED: "twisted",
    }[report.scenario]
    out = [f"sieve {name} k={report.inputs['k']}"]
    for head, lines in report.sections:
        out.append(head)
        out += ["  " + ln for ln in lines]
    if verbose:
        out.append("all eliminations:")
        out += [f"  {e.candidate}: {e.condition}: {e.witness}" for e in report.eliminations]
    if report.scenario in (Scenario.IMPRIMITIVE, Scenario.PRODUCT):
        if report.surviving:
            fmt = _ckey if report.scenario is Scenario.IMPRIMITIVE else (
                lambda key: f"v0={key[0]} m={key[1]} s={key[2]}")
            out += [f"survivor: {fmt(key)}" for key in report.surviving]
        else:
            out.append("no survivors")
    return "\n".join(out) + "\n"
