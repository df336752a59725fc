"""Acceptance criteria 1-8.

Each test records one pass/fail line (shown in the terminal summary) before
asserting. Expected values are written out literally; none are read back from
the code under test.

Criterion 8 has a conditional part: set BLOCKTRANS_TRANSITIVE16 to a catalog
file holding the transitive groups of degree 16 to run it in full.
"""

import io
import os
import random
import re
import time

from blocktrans.catalog import builtin_fixtures, builtin_group
from blocktrans.classify import canonical_form, iso_classes
from blocktrans.cli import main
from blocktrans.design import (
    ag2_planes_design, block_orbit, intersection_pattern, subset_orbit_designs, verify_design,
)
from blocktrans.sieve import (
    block_transitive_checks, diagonal_sieve, format_report, imprimitive_partition_sieve,
    load_simple_groups, product_action_sieve, product_stage1_table, twisted_wreath_sieve,
)

from classify_support import brute_force_key, random_relabel, sixteen_point_designs, small_designs

EXPECTED_LAMBDAS = {4, 12, 16, 24, 28, 48, 56, 64, 84, 96, 112, 140}
CLASS_COUNTS = {4: 5, 12: 4, 16: 5, 24: 1, 28: 1, 48: 6, 56: 1, 64: 1, 84: 1, 96: 1, 112: 1, 140: 1}


def _evaluate(number, report_criterion, limit, body, note=""):
    """Run ``body`` (returns a list of failure strings), record the line, assert."""
    start = time.perf_counter()
    failures = body()
    seconds = time.perf_counter() - start
    if limit is not None and seconds >= limit:
        failures.append(f"runtime {seconds:.2f} s >= {limit} s")
    detail = "; ".join(failures) if failures else "all checks hold"
    if note:
        detail += f" [{note}]"
    report_criterion(number, not failures, detail, seconds)
    assert not failures, detail


# ---------------------------------------------------------------- 1

K5_B2_ROWS = {(4, 1): [], (3, 1, 1): [(7, 3)], (3, 2): [(3, 2)], (2, 2, 1): [(2, 3), (4, 4)]}
K6_B2_ROWS = {
    (4, 1, 1): [(3, 2)], (4, 2): [(8, 2)], (3, 3): [(3, 2)],
    (3, 2, 1): [], (3, 1, 1, 1): [(2, 3), (4, 4)],
}


def test_criterion_1_partition_sieve(report_criterion):
    def body():
        bad = []
        k5, k6, k4 = (imprimitive_partition_sieve(k) for k in (5, 6, 4))
        for table, rep, label in ((K5_B2_ROWS, k5, "k=5"), (K6_B2_ROWS, k6, "k=6")):
            text = format_report(rep)
            for parts, pairs in table.items():
                line = f"  x=({','.join(map(str, parts))}): " + (
                    ",".join(f"({c},{d})" for c, d in pairs) if pairs else "none")
                if line not in text.splitlines():
                    bad.append(f"{label} row missing: {line.strip()}")
        if k5.surviving:
            bad.append(f"k=5 survivors {k5.surviving}")
        if k4.surviving:
            bad.append(f"k=4 survivors {k4.surviving}")
        expected = [((4, 2), 8, 2)]
        if k6.surviving != expected:
            extra = [s for s in k6.surviving if s not in expected]
            bad.append(f"k=6 survivors {k6.surviving}, expected exactly {expected}; extra {extra}")
        return bad
    _evaluate(1, report_criterion, 1.0, body)


# ---------------------------------------------------------------- 2

PRODUCT_STAGE1 = {
    4: {(2, 2): [5, 6, 7, 8], (2, 3): [], (3, 2): []},
    5: {(2, 2): list(range(5, 15)), (2, 3): [5, 6], (3, 2): []},
    6: {(2, 2): list(range(5, 21)), (2, 3): [5, 6, 7, 8, 9], (3, 2): [5]},
}


def test_criterion_2_product_sieve(report_criterion):
    def body():
        bad = []
        for k, rows in PRODUCT_STAGE1.items():
            rep = product_action_sieve(k)
            got = product_stage1_table(rep)
            for key, vals in rows.items():
                if sorted(got.get(key, [])) != vals:
                    bad.append(f"k={k} {key}: {got.get(key)} != {vals}")
            reasons = {e.candidate: e for e in rep.eliminations}
            for (m, s), vals in rows.items():
                for v0 in vals:
                    e = reasons.get((v0, m, s))
                    if e is None:
                        bad.append(f"k={k} ({v0},{m},{s}) not eliminated")
                    elif (m, s) != (2, 3) and "does not divide" not in e.witness:
                        bad.append(f"k={k} ({v0},{m},{s}) lacks a divisibility witness")
            if rep.surviving:
                bad.append(f"k={k} survivors {rep.surviving}")
        text = format_report(product_action_sieve(6))
        if "eliminated v0=5 m=3 s=2: 15252 does not divide 15840" not in text:
            bad.append("k=6 v0=5 m=3 witness line missing")
        return bad
    _evaluate(2, report_criterion, 1.0, body)


# ---------------------------------------------------------------- 3

def test_criterion_3_diagonal_and_twisted(report_criterion):
    def body():
        bad = []
        table = load_simple_groups()
        for k in (3, 4, 5, 6):
            rep = diagonal_sieve(k, table)
            if rep.inputs["max_m"] != 2:
                bad.append(f"diagonal k={k}: max m {rep.inputs['max_m']}")
            if rep.surviving:
                bad.append(f"diagonal k={k}: survivors {rep.surviving}")
            tw = twisted_wreath_sieve(k)
            if "requires m >= 6; eliminated" not in format_report(tw) or tw.surviving:
                bad.append(f"twisted k={k}: no m >= 6 contradiction")
        return bad
    _evaluate(3, report_criterion, 1.0, body)


# ---------------------------------------------------------------- 4

def test_criterion_4_wreath_design(report_criterion):
    def body():
        bad = []
        g = builtin_group("S8wrS2").group()
        d = block_orbit(g, (1, 2, 3, 4, 9, 10))
        p = verify_design(d, 3)
        if (d.b, p.v, p.k, p.lam, p.r) != (3920, 16, 6, 140, 1470):
            bad.append(f"got b={d.b} params={p}")
        (system,) = g.block_systems()
        if {intersection_pattern(b, system.classes) for b in d.blocks} != {(4, 2)}:
            bad.append("some block is not of pattern (4,2)")
        sub = g.subdegrees(1)
        if sub.orbit_sizes != (1, 7, 8) or sub.rank != 3:
            bad.append(f"subdegrees {sub.orbit_sizes}")
        return bad
    _evaluate(4, report_criterion, 5.0, body)


# ---------------------------------------------------------------- 5

def test_criterion_5_divisibility_on_fixture_designs(report_criterion):
    def body():
        bad = []
        count = 0
        for rec in builtin_fixtures():
            g = rec.group()
            for od in subset_orbit_designs(g, 6, 3):
                count += 1
                for cond, ok in block_transitive_checks(g, od.params).items():
                    if not ok:
                        bad.append(f"{rec.name} lambda={od.params.lam}: {cond}")
        if count < 10:
            bad.append(f"only {count} designs produced")
        return bad
    _evaluate(5, report_criterion, None, body)


# ---------------------------------------------------------------- 6

def test_criterion_6_affine_fixtures(report_criterion):
    def body():
        bad = []
        d3, d4 = ag2_planes_design(3), ag2_planes_design(4)
        p3, p4 = verify_design(d3), verify_design(d4)
        if (p3.label(), d3.b) != ("3-(8,4,1)", 14):
            bad.append(f"AG(3,2): {p3.label()} b={d3.b}")
        if p4.lam != 1:
            bad.append(f"AG(4,2): lambda {p4.lam}")
        return bad
    _evaluate(6, report_criterion, 1.0, body)


# ---------------------------------------------------------------- 7

def _classifier_fixtures():
    named = {"AG(3,2)": ag2_planes_design(3), "AG(4,2)": ag2_planes_design(4)}
    for (group, idx), od in sixteen_point_designs().items():
        if od.design.b <= 800:
            named[f"{group}#{idx} lambda={od.params.lam}"] = od.design
    return named


def test_criterion_7_classifier(report_criterion):
    fixtures = _classifier_fixtures()
    small = small_designs()

    def body():
        bad = []
        rng = random.Random(2024)
        for name, d in fixtures.items():
            cf = canonical_form(d)
            if any(canonical_form(random_relabel(d, rng)) != cf for _ in range(100)):
                bad.append(f"{name}: form changed under relabeling")
        keys = [brute_force_key(d) for d in small]
        forms = [canonical_form(d) for d in small]
        for i in range(len(small)):
            for j in range(i + 1, len(small)):
                if (forms[i] == forms[j]) != (keys[i] == keys[j]):
                    bad.append(f"oracle disagrees on small designs {i},{j}")
        for name, d in fixtures.items():
            group = [d] + [random_relabel(d, rng) for _ in range(3)]
            if len(iso_classes(group)) != 1:
                bad.append(f"{name}: relabelings split into classes")
        return bad
    _evaluate(7, report_criterion, 60.0, body)


# ---------------------------------------------------------------- 8

def _run_cli(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def _search_and_classify(source, tmp_path):
    outdir = tmp_path / "designs"
    code, text = _run_cli("design", "search", "--catalog", source, "--pattern", "4,2", "--out-dir", str(outdir))
    lam_line = text.strip().splitlines()[-1]
    lambdas = [int(x) for x in re.findall(r"\d+", lam_line)]
    per_design = [int(m) for m in re.findall(r" lambda=(\d+) ", text)]
    code2, ctext = _run_cli("classify", str(outdir))
    return lambdas, per_design, ctext


def test_criterion_8_lambda_set(report_criterion, tmp_path):
    catalog = os.environ.get("BLOCKTRANS_TRANSITIVE16")

    def body():
        bad = []
        lambdas, per_design, ctext = _search_and_classify("builtin", tmp_path / "sample")
        stray = [l for l in per_design if l not in EXPECTED_LAMBDAS]
        if stray:
            bad.append(f"sample lambdas outside the expected set: {sorted(set(stray))}")
        if 140 not in lambdas:
            bad.append("sample lacks lambda=140")
        if catalog:
            lambdas, _, ctext = _search_and_classify(catalog, tmp_path / "full")
            if set(lambdas) != EXPECTED_LAMBDAS:
                bad.append(f"full lambda set {sorted(lambdas)}")
            head = ctext.splitlines()
            if head[0] != "28 classes":
                bad.append(f"full catalog: {head[0]}")
            lam_row = [int(x) for x in head[1].split()[1:]]
            n_row = [int(x) for x in head[2].split()[1:]]
            if dict(zip(lam_row, n_row)) != CLASS_COUNTS:
                bad.append(f"distribution {dict(zip(lam_row, n_row))}")
        return bad

    note = f"full catalog: {catalog}" if catalog else "sample only; full-catalog part needs BLOCKTRANS_TRANSITIVE16"
    _evaluate(8, report_criterion, None, body, note)
