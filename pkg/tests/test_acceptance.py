"""Acceptance suite: one test per numbered criterion, network-free.

Each criterion prints a PASS/FAIL line (run with -s to see them inline).
Criterion 5's image-column assertion is knowingly red on one cell: the
committed coefficient data for 49.2.c.a (which reproduces every displayed
coefficient of that form exactly) forces a reducible mod-7 representation
with ratio character of order 2, so the scan reports C2 where the reference
table prints C3.  The reference value is asserted verbatim anyway; see the
repository notes for the full derivation.  The hasse-flag half of criterion
5 is split out so its pass/fail state stays visible.
"""

import os
import time

import pytest

from hassecheck.dchar import quadratic_characters, twist_modulus
from hassecheck.hasse import (
    classify_pgl2,
    enumerate_subgroups,
    global_fixed_points,
    is_hasse,
    lemma31_check,
)
from hassecheck.lmfdb import DataSource, fetch_form
from hassecheck.matgrp import (
    Matrix,
    block_diagonal,
    closure,
    fixed_points,
    fixed_points_scan,
    matrix,
    projectivize,
    standard_constructors,
)
from hassecheck.nfdata import split_primes, sturm_bound
from hassecheck.pipeline import scan
from hassecheck.refdata import (
    REFERENCE_HASSE_LOW,
    REFERENCE_IMAGES_LOW,
    REFERENCE_IMAGES_SIMPLE,
    reference_discrepancies,
)

SRC = DataSource(mode="fixtures")


def note(criterion, ok, detail=""):
    print(f"ACCEPTANCE CRITERION {criterion}: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, f"criterion {criterion}: {detail}"


@pytest.fixture(scope="module")
def pgl2_f7_lattice():
    ambient = projectivize(standard_constructors("gl2", 7))
    return enumerate_subgroups(ambient)


@pytest.fixture(scope="module")
def low_level_rows():
    return scan(SRC, 7, level_max=189)


@pytest.fixture(scope="module")
def catalogue():
    """Block-sum catalogue: (hasse factor, no-global-fixed-point factor) pairs."""
    pairs = []
    h1 = closure([matrix([[2, 0], [0, 1]], 7), matrix([[0, 1], [1, 0]], 7)])
    h2 = closure(
        [matrix([[2, 0], [0, 1]], 7), matrix([[0, 1], [1, 0]], 7), matrix([[3, 0], [0, 3]], 7)]
    )
    others7 = [
        standard_constructors("nonsplit_cartan", 7),
        standard_constructors("nonsplit_cartan_normalizer", 7),
        standard_constructors("split_cartan_normalizer", 7),
        standard_constructors("sl2", 7),
        standard_constructors("gl2", 7),
        closure([matrix([[0, -3], [1, 1]], 7)]),
    ]
    for h in (h1, h2):
        for g in others7:
            pairs.append((h, g))
    pairs.append((h1, h1))
    h3 = closure([matrix([[4, 0], [0, 1]], 11), matrix([[0, 1], [1, 0]], 11)])
    h4 = closure([matrix([[8, 0], [0, 2]], 11), matrix([[0, 1], [1, 0]], 11)])
    others11 = [
        standard_constructors("nonsplit_cartan", 11),
        standard_constructors("nonsplit_cartan_normalizer", 11),
        standard_constructors("split_cartan_normalizer", 11),
        standard_constructors("sl2", 11),
        closure([matrix([[0, -4], [1, 1]], 11)]),
    ]
    for h in (h3, h4):
        for g in others11:
            pairs.append((h, g))
    return pairs


def test_criterion_1_pgl2_f2_exhaustion():
    t0 = time.monotonic()
    ambient = projectivize(standard_constructors("gl2", 2))
    subs = enumerate_subgroups(ambient)
    hasse = [s for s in subs if is_hasse(s).is_hasse]
    dt = time.monotonic() - t0
    note(1, len(subs) == 4 and hasse == [] and dt < 1.0,
         f"(classes={len(subs)}, hasse={len(hasse)}, {dt:.2f}s)")


def test_criterion_2_d6_positive_control():
    t0 = time.monotonic()
    group = closure([matrix([[2, 0], [0, 1]], 7), matrix([[0, 1], [1, 0]], 7)])
    proj = projectivize(group)
    brute = is_hasse(proj)
    cls = classify_pgl2(proj)
    s = cls.sutherland
    ok = (
        brute.is_hasse
        and cls.dickson_label == "dihedral(6)"
        and s.cond1_dihedral_odd_n
        and s.cond2_ell_3mod4
        and s.cond3_split_cartan_normalizer
        and s.cond4_index2_fixes
    )
    dt = time.monotonic() - t0
    note(2, ok and dt < 1.0, f"({cls.dickson_label}, {dt:.2f}s)")


def test_criterion_3_criterion_oracle_equivalence(pgl2_f7_lattice):
    t0 = time.monotonic()
    mismatches = []
    psl_excluded = []
    for sub in pgl2_f7_lattice:
        cls = classify_pgl2(sub)
        brute = is_hasse(sub).is_hasse
        if cls.projective_det_surjective:
            if cls.sutherland.predicted_hasse != brute:
                mismatches.append((sub.order(), cls.dickson_label))
        elif cls.sutherland.predicted_hasse and not brute:
            psl_excluded.append((sub.order(), cls.dickson_label))
    dt = time.monotonic() - t0
    ok = not mismatches and len(psl_excluded) >= 1 and dt < 300
    note(3, ok, f"(classes={len(pgl2_f7_lattice)}, psl-excluded={psl_excluded}, {dt:.1f}s)")


def test_criterion_4_block_sum_sufficiency(catalogue):
    t0 = time.monotonic()
    assert len(catalogue) >= 20
    checked = 0
    for h, g in catalogue:
        # catalogue preconditions: one factor brute-force Hasse, the other
        # without a global fixed point
        assert is_hasse(projectivize(h)).is_hasse
        assert not global_fixed_points(projectivize(g))
        out = lemma31_check(h, g)
        assert out["predicted"], (h.order(), g.order())
        assert out["brute_force"].is_hasse, (h.order(), g.order())
        checked += 1
    dt = time.monotonic() - t0
    note(4, checked >= 20 and dt < 120, f"(pairs={checked}, {dt:.1f}s)")


def _analyzed(rows):
    return {r["label"]: r for r in rows if "reports" in r}


def test_criterion_5a_low_level_image_column(low_level_rows):
    rows = _analyzed(low_level_rows)
    observed = {}
    for label in REFERENCE_IMAGES_LOW:
        images = sorted(set(rows[label]["images"]))
        observed[label] = images[0] if len(images) == 1 else str(images)
    expected = dict(REFERENCE_IMAGES_LOW)
    diffs = {k: (expected[k], observed[k]) for k in expected if expected[k] != observed[k]}
    note("5a", observed == expected, f"(diffs={diffs})")


def test_criterion_5b_low_level_hasse_flags(low_level_rows):
    t0 = time.monotonic()
    rows = _analyzed(low_level_rows)
    flagged = {label for label, row in rows.items() if row["verdict"]["verdict"] == "hasse"}
    dt = time.monotonic() - t0
    note("5b", flagged == REFERENCE_HASSE_LOW, f"(flagged={sorted(flagged)}, {dt:.1f}s)")


def test_criterion_6_two_ideal_consistency(low_level_rows):
    rows = _analyzed(low_level_rows)
    ok = True
    for label in REFERENCE_IMAGES_LOW:
        reports = rows[label]["reports"]
        if len(reports) != 2:
            ok = False
            break
        a, b = reports
        if (a["status"], a["n"]) != (b["status"], b["n"]):
            ok = False
            break
    note(6, ok)


def test_criterion_7_simple_rows():
    consistent = {
        "7938.2.a.bk": ("D6", "(1 + 2b)"),
        "9099.2.a.e": ("D12", "(1 - 2b)"),
        "9099.2.a.g": ("D12", "(1 - 2b)"),
    }
    rows = scan(SRC, 7, labels=list(REFERENCE_IMAGES_SIMPLE), bound=1000)
    by_label = _analyzed(rows)
    ok = True
    details = []
    for label, (image, ideal) in consistent.items():
        reports = {r["ideal"]: r for r in by_label[label]["reports"]}
        rep = reports.get(ideal)
        if rep is None or rep["image"] != image or rep["status"] != "dihedral":
            ok = False
            details.append(f"{label}: dihedral side wrong")
        other = next(r for r in by_label[label]["reports"] if r["ideal"] != ideal)
        if not (other["not_borel_witness"] is not None or other["irreducible"]):
            ok = False
            details.append(f"{label}: other ideal not certified")
    if by_label["7938.2.a.bk"]["verdict"]["verdict"] != "hasse":
        ok = False
        details.append("bk verdict")
    # the three rows with displayed coefficients inconsistent with the table:
    # output recorded, mismatch surfaced as a structured discrepancy report
    disc = reference_discrepancies(rows)
    disc_labels = {d["label"] for d in disc}
    expected_disc = {"7938.2.a.bj", "7938.2.a.bp", "7938.2.a.bq"}
    if disc_labels != expected_disc:
        ok = False
        details.append(f"discrepancies={sorted(disc_labels)}")
    for label in expected_disc:
        reports = by_label[label]["reports"]
        flagged = any(r["flags"].get("order_evidence_inconsistent") for r in reports)
        if not flagged or by_label[label]["verdict"]["verdict"] == "hasse":
            ok = False
            details.append(f"{label}: tension not surfaced")
    note(7, ok, f"({'; '.join(details) if details else 'discrepancies surfaced for bj/bp/bq'})")


def test_criterion_8_sturm_and_twist_arithmetic():
    ok = (
        sturm_bound(189, 2) == 48
        and twist_modulus(189) == 3
        and twist_modulus(7938) == 21
        and len(quadratic_characters(21)) == 4
    )
    note(8, ok)


def test_criterion_9_property_suites(catalogue):
    import random

    from hassecheck.nfdata import QuadElement

    # reduce is a ring homomorphism: 1000 random elements
    rng = random.Random(0)
    r3 = split_primes((-2, 0, 1), 7)[0]
    for _ in range(1000):
        x = QuadElement.make(rng.randrange(-99, 99), rng.randrange(-99, 99), -2, 0)
        y = QuadElement.make(rng.randrange(-99, 99), rng.randrange(-99, 99), -2, 0)
        assert r3.apply(x + y) == r3.apply(x) + r3.apply(y)
        assert r3.apply(x * y) == r3.apply(x) * r3.apply(y)

    # conjugation invariance of is_hasse: 100 random conjugators
    from hassecheck.matgrp import ProjGroup

    base = projectivize(closure([matrix([[2, 0], [0, 1]], 7), matrix([[0, 1], [1, 0]], 7)]))
    ambient = sorted(projectivize(standard_constructors("gl2", 7)).elements)
    expected = is_hasse(base).is_hasse
    for _ in range(100):
        c = ambient[rng.randrange(len(ambient))]
        cinv = base.inv(c)
        conj = frozenset(base.mul(base.mul(c, h), cinv) for h in base.elements)
        gens = tuple(base.mul(base.mul(c, g), cinv) for g in base.generators)
        assert is_hasse(ProjGroup(gens, 2, 7, conj)).is_hasse == expected

    # scalar invariance of fixed points
    for _ in range(50):
        while True:
            m = matrix([[rng.randrange(7) for _ in range(2)] for _ in range(2)], 7)
            if m.det() != 0:
                break
        base_pts = fixed_points(m)
        for lam in range(2, 7):
            scaled = matrix([[lam * e for e in row] for row in m.rows()], 7)
            assert fixed_points(scaled) == base_pts

    # eigenvalue method vs point scan on every element of the l=7 catalogue
    seen = set()
    for h, g in catalogue:
        for grp in (h, g):
            if grp.modulus != 7 or grp.elements in seen:
                continue
            seen.add(grp.elements)
            for elt in projectivize(grp).elements:
                m = Matrix(elt, 2, 7)
                assert fixed_points(m) == fixed_points_scan(m)
    # and on one dim-4 block group
    block = block_diagonal(
        closure([matrix([[2, 0], [0, 1]], 7), matrix([[0, 1], [1, 0]], 7)]),
        closure([matrix([[0, -3], [1, 1]], 7)]),
    )
    for elt in projectivize(block).elements:
        m = Matrix(elt, 4, 7)
        assert fixed_points(m) == fixed_points_scan(m)
    note(9, True)


def test_criterion_10_offline_stand_in():
    # the full corpus analysis runs network-free from committed fixtures
    rows = scan(SRC, 7, bound=500)
    assert len(rows) >= 18
    note(10, True, "(committed-fixture scan; live smoke test is opt-in)")


@pytest.mark.skipif(
    os.environ.get("HASSE_LIVE_TEST") != "1",
    reason="live smoke test only with HASSE_LIVE_TEST=1",
)
def test_criterion_10_live_smoke(tmp_path):
    from hassecheck.lmfdb import from_env

    live = from_env("http")
    live.cache_dir = tmp_path
    fetched = fetch_form(live, "189.2.p.a", bound=200)
    fixture = fetch_form(SRC, "189.2.p.a")
    for p in (2, 5, 11, 13, 199):
        assert fetched.ap[p] == fixture.ap[p]
