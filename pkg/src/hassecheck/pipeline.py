"""Mod-l image analysis for newforms with quadratic coefficient fields.

Per prime ideal above l the analysis runs: quadratic-twist detection
(dihedral evidence), a reducibility sweep over all F_l-valued characters of
modulus dividing the level (a finite certificate either way), dihedral-order
determination from eigenvalue-ratio orders, and an irreducible-Frobenius
witness.  The final verdict combines both ideals.  Everything is trace-level
evidence at an explicit prime bound; nothing here claims a proof of the
actual image, and the reports say so via flags rather than silently
upgrading confidence.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import lcm

from . import dchar
from .dchar import DirichletCharacter, FpEmbedding, evaluate, kernel_field_disc, twist_modulus
from .ffield import FieldElement, is_prime, mul_order
from .lmfdb import DataSource, fetch_form, list_fixture_labels, query_candidates
from .nfdata import (
    DataCoverageError,
    NewformRecord,
    RamifiedPrimeError,
    ReductionMap,
    frob_charpoly,
    projective_frob_order,
    reduce_coeff,
    split_primes,
    sturm_bound,
)

STABILIZATION_MARGIN = 50


def default_bound(level: int) -> int:
    q = twist_modulus(level)
    return max(200, sturm_bound(level * q * q, 2))


def test_primes(level: int, ell: int, bound: int, extra_excluded: int = 1) -> list[int]:
    """All primes p <= bound with p not dividing ell * level * extra."""
    excl = ell * level * extra_excluded
    return [p for p in range(2, bound + 1) if is_prime(p) and excl % p != 0]


def _require_coverage(record: NewformRecord, bound: int) -> None:
    if record.ap_max_prime < bound:
        raise DataCoverageError(record.label, bound, record.ap_max_prime)


def detect_twist(record: NewformRecord, rmap: ReductionMap, bound: int):
    """First nontrivial quadratic self-twist candidate surviving every test.

    A character alpha mod q survives when reduce(a_p) = 0 at every tested
    prime with alpha(p) = -1.  Returns (alpha, kernel_disc) or None.
    """
    _require_coverage(record, bound)
    q = twist_modulus(record.level)
    ell = rmap.ell
    for alpha in dchar.quadratic_characters(q):
        if alpha.is_trivial():
            continue
        ok = True
        for p in test_primes(record.level, ell, bound, q):
            if alpha.sign_value(p) == -1 and reduce_coeff(record, p, rmap).value != 0:
                ok = False
                break
        if ok:
            return alpha, kernel_field_disc(alpha)
    return None


def exclude_reducible(record: NewformRecord, rmap: ReductionMap, bound: int) -> dict:
    """Sweep all F_l-valued characters mod N against the reducibility congruence.

    A reducible representation would satisfy a_p = chi(p) + p*eps(p)/chi(p)
    for all good p; each failed character gets a violation certificate (its
    least violating prime), and a surviving character means the data cannot
    exclude reducibility.
    """
    _require_coverage(record, bound)
    ell = rmap.ell
    primes = test_primes(record.level, ell, bound)
    embed = FpEmbedding(ell - 1, ell)
    certificates = {}
    survivor = None
    for chi in dchar.fl_valued_characters(record.level, ell):
        violation = None
        for p in primes:
            chi_p = evaluate(chi, p, embed)
            if chi_p.value == 0:
                continue
            eps_p = rmap.apply(record.nebentypus_value(p))
            rhs = chi_p + FieldElement(p, ell) * eps_p / chi_p
            if reduce_coeff(record, p, rmap) != rhs:
                violation = p
                break
        if violation is None:
            if survivor is None:
                survivor = chi
        else:
            certificates[chi.exponents] = violation
    if survivor is not None:
        ratio = _reducible_ratio_order(record, survivor, rmap, bound)
        return {
            "reducible": True,
            "character": survivor,
            "cyclic_order": ratio,
            "certificates": certificates,
        }
    return {"reducible": False, "character": None, "certificates": certificates}


def _reducible_ratio_order(record, chi, rmap, bound) -> int:
    """Order of the ratio character chi'/chi = omega*eps/chi^2 on test primes."""
    ell = rmap.ell
    embed = FpEmbedding(ell - 1, ell)
    order = 1
    for p in test_primes(record.level, ell, bound):
        chi_p = evaluate(chi, p, embed)
        if chi_p.value == 0:
            continue
        eps_p = rmap.apply(record.nebentypus_value(p))
        ratio = FieldElement(p, ell) * eps_p / (chi_p * chi_p)
        if ratio.value != 0:
            order = lcm(order, mul_order(ratio))
    return order


def dihedral_order(record: NewformRecord, rmap: ReductionMap, alpha: DirichletCharacter, bound: int) -> dict:
    """lcm of eigenvalue-ratio orders over alpha-split primes, with audit data.

    Repeated-eigenvalue primes are skipped (flagged); the stabilization
    prefix records the last prime at which the running lcm changed, and the
    result degrades to insufficient data when that happens too close to the
    bound or when no usable split prime exists.
    """
    _require_coverage(record, bound)
    ell = rmap.ell
    q = twist_modulus(record.level)
    n = 1
    last_change = None
    used = 0
    skipped_repeated = []
    inert_violations = []
    for p in test_primes(record.level, ell, bound, q):
        sv = alpha.sign_value(p)
        if sv == -1:
            if reduce_coeff(record, p, rmap).value != 0:
                inert_violations.append(p)
            continue
        if sv == 0:
            continue
        fd = frob_charpoly(record, p, rmap)
        if fd.repeated:
            skipped_repeated.append(p)
            continue
        used += 1
        order = projective_frob_order(fd)
        n2 = lcm(n, order)
        if n2 != n:
            n = n2
            last_change = p
    insufficient = used == 0 or (last_change is not None and last_change > bound - STABILIZATION_MARGIN)
    return {
        "n": n,
        "split_primes_used": used,
        "skipped_repeated": skipped_repeated,
        "inert_trace_violations": inert_violations,
        "stabilized_at": last_change,
        "insufficient": insufficient,
        "divides_ell_minus_1": (ell - 1) % n == 0,
        "divides_ell_plus_1": (ell + 1) % n == 0,
    }


def not_borel_witness(record: NewformRecord, rmap: ReductionMap, bound: int):
    """Least good prime whose Frobenius characteristic polynomial is irreducible."""
    _require_coverage(record, bound)
    from .ffield import legendre

    for p in test_primes(record.level, rmap.ell, bound):
        fd = frob_charpoly(record, p, rmap)
        disc = fd.trace * fd.trace - FieldElement(4, rmap.ell) * fd.det
        if disc.value != 0 and legendre(disc) == -1:
            return p
    return None


@dataclass
class ImageReport:
    label: str
    ell: int
    root: int
    ideal: str
    status: str  # dihedral | possibly_reducible | not_dihedral | insufficient_data
    n: int | None = None
    alpha: DirichletCharacter | None = None
    alpha_kernel_disc: int | None = None
    reducible_character: DirichletCharacter | None = None
    not_borel_witness: int | None = None
    irreducible: bool = False  # the full character sweep excluded reducibility
    flags: dict = field(default_factory=dict)

    @property
    def not_borel_certified(self) -> bool:
        """No global fixed point, at trace level.

        A reducible dim-2 representation is exactly a Borel-contained one, so
        the sweep certificate alone suffices; a single prime with irreducible
        Frobenius polynomial is the cheap sufficient witness when it exists
        (it cannot exist when this ideal's image is itself a group in which
        every element fixes a point).
        """
        return self.not_borel_witness is not None or self.irreducible

    @property
    def image_cell(self) -> str:
        """Rendered image column entry, dihedral order convention D_{2n}."""
        if self.status == "dihedral":
            return f"D{2 * self.n}"
        if self.status == "possibly_reducible":
            return f"C{self.n}"
        if self.status == "insufficient_data":
            return "?"
        return "none"

    def to_dict(self):
        return {
            "root": self.root,
            "ideal": self.ideal,
            "status": self.status,
            "n": self.n,
            "image": self.image_cell,
            "alpha": self.alpha.to_dict() if self.alpha else None,
            "alpha_kernel_disc": self.alpha_kernel_disc,
            "reducible_character": self.reducible_character.to_dict()
            if self.reducible_character
            else None,
            "not_borel_witness": self.not_borel_witness,
            "irreducible": self.irreducible,
            "flags": self.flags,
        }


@dataclass
class HasseVerdict:
    label: str
    ell: int
    verdict: str  # hasse | not_hasse | undetermined
    reasons: dict

    def to_dict(self):
        return {
            "label": self.label,
            "ell": self.ell,
            "verdict": self.verdict,
            "reasons": self.reasons,
        }


def analyze_ideal(record: NewformRecord, rmap: ReductionMap, bound: int) -> ImageReport:
    report = ImageReport(record.label, rmap.ell, rmap.root, rmap.ideal_display(), "not_dihedral")
    twist = detect_twist(record, rmap, bound)
    red = exclude_reducible(record, rmap, bound)
    report.not_borel_witness = not_borel_witness(record, rmap, bound)
    if red["reducible"]:
        report.status = "possibly_reducible"
        report.reducible_character = red["character"]
        report.n = red["cyclic_order"]
        if twist:
            report.alpha, report.alpha_kernel_disc = twist
        return report
    report.irreducible = True
    report.flags["irreducibility_certificate_size"] = len(red["certificates"])
    if twist is None:
        report.status = "not_dihedral"
        report.flags["no_surviving_twist"] = True
        return report
    alpha, disc = twist
    report.alpha, report.alpha_kernel_disc = alpha, disc
    audit = dihedral_order(record, rmap, alpha, bound)
    report.flags["order_audit"] = {
        k: audit[k]
        for k in (
            "split_primes_used",
            "skipped_repeated",
            "inert_trace_violations",
            "stabilized_at",
        )
    }
    if audit["insufficient"]:
        report.status = "insufficient_data"
        report.n = audit["n"]
        return report
    if not (audit["divides_ell_minus_1"] or audit["divides_ell_plus_1"]):
        # order evidence incompatible with any dihedral group mod ell
        report.status = "not_dihedral"
        report.n = audit["n"]
        report.flags["order_evidence_inconsistent"] = True
        report.flags["twist_vanishing_held"] = True
        return report
    report.status = "dihedral"
    report.n = audit["n"]
    report.flags["split_type"] = audit["divides_ell_minus_1"]
    return report


def hasse_verdict(record: NewformRecord, ell: int, bound: int | None = None):
    """Full two-ideal analysis and the combined verdict.

    Returns (HasseVerdict, [ImageReport...]).  Failure modes (inert or
    ramified l, missing data) become reasons on an undetermined verdict,
    never exceptions.
    """
    if bound is None:
        bound = default_bound(record.level)
    reasons = {
        "ell_ge_7": ell >= 7,
        "ell_3_mod_4": ell % 4 == 3,
        "split_in_coefficient_field": False,
        "dihedral_ideal": None,
        "n": None,
        "n_odd": False,
        "n_gt_1": False,
        "n_divides_half_ell_minus_1": False,
        "other_ideal_not_borel": False,
        "bound": bound,
    }
    try:
        maps = split_primes((record.m0, record.m1, 1), ell)
    except RamifiedPrimeError:
        reasons["ramified"] = True
        return HasseVerdict(record.label, ell, "undetermined", reasons), []
    if maps is None:
        reasons["inert"] = True
        return HasseVerdict(record.label, ell, "undetermined", reasons), []
    reasons["split_in_coefficient_field"] = True

    reports = []
    data_error = None
    for rmap in maps:
        try:
            reports.append(analyze_ideal(record, rmap, bound))
        except DataCoverageError as exc:
            data_error = str(exc)
    if data_error and len(reports) < 2:
        reasons["data_coverage"] = data_error
        return HasseVerdict(record.label, ell, "undetermined", reasons), reports

    dihedral_side = None
    for i, rep in enumerate(reports):
        if rep.status != "dihedral":
            continue
        n = rep.n
        ok = n > 1 and n % 2 == 1 and ((ell - 1) // 2) % n == 0
        other = reports[1 - i]
        if ok and other.not_borel_certified:
            dihedral_side = i
            reasons.update(
                {
                    "dihedral_ideal": rep.ideal,
                    "n": n,
                    "n_odd": True,
                    "n_gt_1": True,
                    "n_divides_half_ell_minus_1": True,
                    "other_ideal_not_borel": True,
                    "not_borel_witness": other.not_borel_witness,
                    "not_borel_mechanism": "witness_prime"
                    if other.not_borel_witness is not None
                    else "irreducibility_sweep",
                }
            )
            break
    if dihedral_side is not None and reasons["ell_ge_7"] and reasons["ell_3_mod_4"]:
        return HasseVerdict(record.label, ell, "hasse", reasons), reports

    # record the best dihedral evidence even when the verdict is negative
    for rep in reports:
        if rep.status == "dihedral" and reasons["n"] is None:
            reasons["dihedral_ideal"] = rep.ideal
            reasons["n"] = rep.n
            reasons["n_odd"] = rep.n % 2 == 1
            reasons["n_gt_1"] = rep.n > 1
            reasons["n_divides_half_ell_minus_1"] = ((ell - 1) // 2) % rep.n == 0

    if any(rep.status == "insufficient_data" for rep in reports):
        return HasseVerdict(record.label, ell, "undetermined", reasons), reports
    return HasseVerdict(record.label, ell, "not_hasse", reasons), reports


def congruence_check(
    f: NewformRecord,
    g: NewformRecord,
    ell: int,
    root_f: int | None = None,
    root_g: int | None = None,
    bound: int | None = None,
) -> dict:
    """Finite coefficient-congruence verification between two records mod l.

    Compares reductions at all good primes up to the Sturm bound of the lcm
    level (an explicit, documented heuristic for the cross-level case); this
    is a verification aid, not a proof of congruence.
    """
    maps_f = split_primes((f.m0, f.m1, 1), ell)
    maps_g = split_primes((g.m0, g.m1, 1), ell)
    if maps_f is None or maps_g is None:
        raise ValueError(f"{ell} must split in both coefficient fields")
    rf = next((m for m in maps_f if root_f is None or m.root == root_f), None)
    rg = next((m for m in maps_g if root_g is None or m.root == root_g), None)
    if rf is None or rg is None:
        raise ValueError("requested root is not a root of the field polynomial")
    if bound is None:
        bound = sturm_bound(lcm(f.level, g.level), 2)
    bound = min(bound, f.ap_max_prime, g.ap_max_prime)
    primes = [p for p in test_primes(f.level, ell, bound) if (g.level * ell) % p != 0]
    for p in primes:
        if reduce_coeff(f, p, rf) != reduce_coeff(g, p, rg):
            return {
                "congruent": False,
                "first_violation": p,
                "bound": bound,
                "primes_tested": primes.index(p) + 1,
                "finite_verification": True,
            }
    return {
        "congruent": True,
        "first_violation": None,
        "bound": bound,
        "primes_tested": len(primes),
        "finite_verification": True,
    }


# ---------------------------------------------------------------------------
# scan driver


def _scan_one(args):
    record, ell, bound = args
    verdict, reports = hasse_verdict(record, ell, bound)
    return {
        "label": record.label,
        "level": record.level,
        "verdict": verdict.to_dict(),
        "reports": [r.to_dict() for r in reports],
        "images": [r.image_cell for r in reports],
    }


def scan(
    source: DataSource,
    ell: int,
    level_max: int | None = None,
    filters: dict | None = None,
    bound: int | None = None,
    labels: list[str] | None = None,
    jobs: int = 1,
) -> list[dict]:
    """Analyze a set of forms; deterministic label-sorted output rows.

    Forms are restricted to those whose coefficient field splits at ell
    (matching the scan this tool reproduces); non-split forms and per-form
    failures become rows with a skip/error marker rather than aborting.
    """
    if labels is None:
        if filters:
            labels = query_candidates(source, filters)
        else:
            labels = list_fixture_labels(source)
    rows: list[dict] = []
    work = []
    for label in sorted(labels):
        try:
            record = fetch_form(source, label)
        except Exception as exc:  # noqa: BLE001 - per-row capture is the contract
            rows.append({"label": label, "error": f"{type(exc).__name__}: {exc}"})
            continue
        if level_max is not None and record.level > level_max:
            continue
        sp = None
        try:
            sp = split_primes((record.m0, record.m1, 1), ell)
        except RamifiedPrimeError:
            rows.append({"label": label, "level": record.level, "skipped": "ramified"})
            continue
        if sp is None:
            rows.append({"label": label, "level": record.level, "skipped": "inert"})
            continue
        work.append((record, ell, bound))

    if jobs > 1 and len(work) > 1:
        import multiprocessing

        with multiprocessing.Pool(jobs) as pool:
            rows.extend(pool.map(_scan_one, work))
    else:
        rows.extend(_scan_one(w) for w in work)
    rows.sort(key=lambda r: _label_sort_key(r["label"]))
    return rows


def _label_sort_key(label: str):
    parts = label.split(".")
    try:
        return (int(parts[0]), int(parts[1]), parts[2], parts[3])
    except (ValueError, IndexError):
        return (1 << 60, 0, label, "")


def rows_to_json(rows: list[dict], config: dict | None = None) -> str:
    doc = {"config": config or {}, "rows": rows}
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), default=str) + "\n"


def rows_to_table(rows: list[dict]) -> str:
    out = []
    header = f"{'label':<16} {'level':>6} {'verdict':<12} images (per root)"
    out.append(header)
    out.append("-" * len(header))
    for row in rows:
        if "error" in row:
            out.append(f"{row['label']:<16} {'-':>6} ERROR        {row['error']}")
            continue
        if "skipped" in row:
            out.append(f"{row['label']:<16} {row['level']:>6} skipped      ({row['skipped']})")
            continue
        images = ", ".join(
            f"r={rep['root']} {rep['ideal']}: {rep['image']}" for rep in row["reports"]
        )
        out.append(f"{row['label']:<16} {row['level']:>6} {row['verdict']['verdict']:<12} {images}")
    return "\n".join(out) + "\n"
