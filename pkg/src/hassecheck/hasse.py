"""The Hasse property test, PGL2 classification, and the block-sum checker.

A projective group is Hasse when every element fixes a point of the ambient
projective space but no point is fixed by the whole group.  For dim-2
groups we also compute a full structural classification (cyclic/dihedral/
A4/S4/..., stabilised point-pairs, projective determinant) and evaluate the
four classical criterion conditions for elliptic-type images.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ffield import ExtElement
from .matgrp import (
    MatrixGroup,
    ProjGroup,
    ProjPoint,
    all_proj_points,
    block_diagonal,
    fixed_points,
    has_eigenvalue,
    mat_det,
    mat_identity,
    Matrix,
    point_canonical,
    projectivize,
)


@dataclass(frozen=True)
class HasseResult:
    is_hasse: bool
    violating_element: tuple | None = None
    global_fixed_point: ProjPoint | None = None

    def to_dict(self):
        return {
            "is_hasse": self.is_hasse,
            "violating_element": list(self.violating_element) if self.violating_element else None,
            "global_fixed_point": list(self.global_fixed_point.coords) if self.global_fixed_point else None,
        }


def _element_fixed_points(elt: tuple, dim: int, p: int) -> set[ProjPoint]:
    return fixed_points(Matrix(elt, dim, p))


def global_fixed_points(group: ProjGroup) -> set[ProjPoint]:
    """Points fixed by every generator (equivalently, by the whole group)."""
    common: set[ProjPoint] | None = None
    for g in group.generators:
        pts = _element_fixed_points(g, group.dim, group.modulus)
        common = pts if common is None else common & pts
        if not common:
            return set()
    if common is None:  # no generators: trivial group fixes everything
        return set(all_proj_points(group.dim, group.modulus))
    return common


def is_hasse(group: ProjGroup) -> HasseResult:
    """Both defining conditions, with deterministic witnesses.

    The violating element (fixing no point) and the global fixed point are
    reported as the lexicographically least candidates so output is stable.
    """
    dim, p = group.dim, group.modulus
    violator = None
    for elt in sorted(group.elements):
        if not has_eigenvalue(elt, dim, p):
            violator = elt
            break
    if violator is not None:
        return HasseResult(False, violating_element=violator)
    common = global_fixed_points(group)
    if common:
        return HasseResult(False, global_fixed_point=min(common))
    return HasseResult(True)


# ---------------------------------------------------------------------------
# dim-2 classification


@dataclass(frozen=True)
class SutherlandConditions:
    cond1_dihedral_odd_n: bool
    cond2_ell_3mod4: bool
    cond3_split_cartan_normalizer: bool
    cond4_index2_fixes: bool

    @property
    def predicted_hasse(self) -> bool:
        # conditions (3) and (4) follow from (1) and (2); only those two decide
        return self.cond1_dihedral_odd_n and self.cond2_ell_3mod4

    def to_dict(self):
        return {
            "cond1_dihedral_odd_n": self.cond1_dihedral_odd_n,
            "cond2_ell_3mod4": self.cond2_ell_3mod4,
            "cond3_split_cartan_normalizer": self.cond3_split_cartan_normalizer,
            "cond4_index2_fixes": self.cond4_index2_fixes,
            "predicted_hasse": self.predicted_hasse,
        }


@dataclass(frozen=True)
class Pgl2Classification:
    order: int
    dickson_label: str
    stabilized_pair: str  # "split", "nonsplit" or "none"
    rotation_subgroup_fixed_point: bool
    projective_det_surjective: bool
    sutherland: SutherlandConditions
    dihedral_n: int | None = None
    cyclic_n: int | None = None

    def to_dict(self):
        return {
            "order": self.order,
            "dickson_label": self.dickson_label,
            "stabilized_pair": self.stabilized_pair,
            "rotation_subgroup_fixed_point": self.rotation_subgroup_fixed_point,
            "projective_det_surjective": self.projective_det_surjective,
            "sutherland": self.sutherland.to_dict(),
        }


def _proj_orders(group: ProjGroup) -> dict[tuple, int]:
    return {elt: group.element_order(elt) for elt in group.elements}


def _is_abelian(group: ProjGroup) -> bool:
    elems = sorted(group.elements)
    for i, a in enumerate(elems):
        for b in elems[i + 1 :]:
            if group.mul(a, b) != group.mul(b, a):
                return False
    return True


def _cyclic_subgroup(group: ProjGroup, g: tuple) -> frozenset:
    ident = tuple(mat_identity(group.dim))
    from .matgrp import proj_canonical

    ident = proj_canonical(ident, group.modulus)
    out = {ident}
    x = g
    while x != ident:
        out.add(x)
        x = group.mul(x, g)
    return frozenset(out)


def _dihedral_structure(group: ProjGroup, orders: dict):
    """Return n if the group is dihedral of order 2n (n >= 2), else None.

    Dihedral here means: a cyclic index-2 subgroup plus an involution that
    inverts it.  The Klein four-group counts as dihedral with n = 2.
    """
    size = group.order()
    if size % 2 or size < 4:
        return None
    n = size // 2
    for g, og in orders.items():
        if og != n:
            continue
        cyc = _cyclic_subgroup(group, g)
        if len(cyc) != n:
            continue
        ginv = group.inv(g)
        for r in group.elements:
            if r in cyc or orders[r] != 2:
                continue
            if group.mul(group.mul(r, g), r) == ginv:
                return n
    return None


def _pair_stabilized(group: ProjGroup) -> str:
    """Does the group stabilise an unordered pair of points of P^1?

    Split pairs live in P^1(F_p); nonsplit pairs are Frobenius-conjugate
    pairs of points of P^1(F_{p^2}) outside P^1(F_p).
    """
    p = group.modulus
    pts = all_proj_points(2, p)
    for i, a in enumerate(pts):
        for b in pts[i + 1 :]:
            ok = True
            for g in group.generators:
                imgs = set()
                for pt in (a, b):
                    img = tuple(
                        sum(g[r * 2 + c] * pt.coords[c] for c in range(2)) % p for r in range(2)
                    )
                    imgs.add(point_canonical(img, p))
                if imgs != {a, b}:
                    ok = False
                    break
            if ok:
                return "split"
    # nonsplit: points (x : 1) with x in F_{p^2} \ F_p, paired with conjugate
    seen = set()
    for a0 in range(p):
        for b0 in range(1, p):
            x = ExtElement(a0, b0, p)
            key = frozenset({(x.a, x.b), (x.a, (-x.b) % p)})
            if key in seen:
                continue
            seen.add(key)
            pair = {(x.a, x.b), (x.a, (-x.b) % p)}
            ok = True
            for g in group.generators:
                imgs = set()
                for (xa, xb) in pair:
                    xe = ExtElement(xa, xb, p)
                    num = ExtElement(g[0] * xe.a % p, g[0] * xe.b % p, p)
                    num = ExtElement((num.a + g[1]) % p, num.b, p)
                    den = ExtElement(g[2] * xe.a % p, g[2] * xe.b % p, p)
                    den = ExtElement((den.a + g[3]) % p, den.b, p)
                    if not den:
                        ok = False  # image is the rational point at infinity
                        break
                    img = num * den.inverse()
                    imgs.add((img.a, img.b))
                if not ok or imgs != pair:
                    ok = False
                    break
            if ok:
                return "nonsplit"
    return "none"


def _proj_det_values(group: ProjGroup) -> set[int]:
    """Determinants of canonical lifts modulo squares, as {+1, -1} values."""
    p = group.modulus
    vals = set()
    for elt in group.elements:
        d = mat_det(elt, 2, p)
        vals.add(1 if pow(d, (p - 1) // 2, p) == 1 else -1)
    return vals


def classify_pgl2(group: ProjGroup) -> Pgl2Classification:
    if group.dim != 2:
        raise ValueError("classify_pgl2 expects a dim-2 projective group")
    p = group.modulus
    size = group.order()
    orders = _proj_orders(group)
    order_multiset = tuple(sorted(orders.values()))

    cyclic_n = None
    dihedral_n = None
    if size == max(orders.values()) and _is_abelian(group):
        # cyclic iff some element has full order
        if any(o == size for o in orders.values()):
            cyclic_n = size

    label = None
    if cyclic_n is not None:
        label = f"cyclic({cyclic_n})"
    else:
        dihedral_n = _dihedral_structure(group, orders)
        if dihedral_n is not None:
            label = f"dihedral({2 * dihedral_n})"
    if label is None:
        full = p * (p * p - 1)
        if size == full:
            label = "pgl2"
        elif size == full // 2 and _proj_det_values(group) == {1}:
            label = "psl2"
        elif size == 12 and set(orders.values()) <= {1, 2, 3}:
            label = "A4"
        elif size == 24 and order_multiset == tuple(sorted([1] + [2] * 9 + [3] * 8 + [4] * 6)):
            label = "S4"
        elif size == 60 and set(orders.values()) <= {1, 2, 3, 5}:
            label = "A5"
        elif global_fixed_points(group):
            label = "borel_contained"
        else:
            label = "other"

    pair = _pair_stabilized(group)
    det_surjective = _proj_det_values(group) == {1, -1}

    # index-2 rotation subgroup and its fixed points (dihedral groups only)
    rotation_fixes = False
    if dihedral_n is not None:
        n = dihedral_n
        candidates = []
        if n == 2:
            # Klein: each of the three C2's is an index-2 cyclic subgroup
            candidates = [
                _cyclic_subgroup(group, g) for g, o in orders.items() if o == 2
            ]
        else:
            for g, o in orders.items():
                if o == n:
                    candidates = [_cyclic_subgroup(group, g)]
                    break
        for cyc in candidates:
            common: set | None = None
            for elt in cyc:
                pts = _element_fixed_points(elt, 2, p)
                common = pts if common is None else common & pts
                if not common:
                    break
            if common:
                rotation_fixes = True
                break

    cond1 = (
        dihedral_n is not None
        and dihedral_n > 1
        and dihedral_n % 2 == 1
        and ((p - 1) // 2) % dihedral_n == 0
    )
    sut = SutherlandConditions(
        cond1_dihedral_odd_n=cond1,
        cond2_ell_3mod4=(p % 4 == 3),
        cond3_split_cartan_normalizer=(pair == "split"),
        cond4_index2_fixes=rotation_fixes,
    )
    return Pgl2Classification(
        order=size,
        dickson_label=label,
        stabilized_pair=pair,
        rotation_subgroup_fixed_point=rotation_fixes,
        projective_det_surjective=det_surjective,
        sutherland=sut,
        dihedral_n=dihedral_n,
        cyclic_n=cyclic_n,
    )


# ---------------------------------------------------------------------------
# block-sum sufficiency


def has_global_fixed_point(group: MatrixGroup) -> bool:
    """Borel containment test for dim-2 groups: a common projective fixed point."""
    return bool(global_fixed_points(projectivize(group)))


def lemma31_check(g1: MatrixGroup, g2: MatrixGroup):
    """Sufficiency test for the block-sum construction.

    predicted: one factor is Hasse and the other has no global fixed point.
    brute_force: the full Hasse test on the projectivised dim-4 block group.
    The contract is one-directional: predicted implies brute_force Hasse.
    """
    if g1.modulus != g2.modulus:
        raise ValueError("factors must share the modulus")
    h1, h2 = projectivize(g1), projectivize(g2)
    r1, r2 = is_hasse(h1), is_hasse(h2)
    borel1 = bool(global_fixed_points(h1))
    borel2 = bool(global_fixed_points(h2))
    predicted = (r1.is_hasse and not borel2) or (r2.is_hasse and not borel1)
    brute = is_hasse(projectivize(block_diagonal(g1, g2)))
    return {"predicted": predicted, "brute_force": brute}


# ---------------------------------------------------------------------------
# subgroup enumeration


def _subgroup_closure(group: ProjGroup, gens: frozenset) -> frozenset:
    from .matgrp import proj_canonical

    ident = proj_canonical(tuple(mat_identity(group.dim)), group.modulus)
    seen = {ident}
    frontier = [ident]
    gen_list = list(gens)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gen_list:
                y = group.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def enumerate_subgroups(ambient: ProjGroup, bound: int = 1320) -> list[ProjGroup]:
    """All subgroups of `ambient` up to conjugacy.

    Iterative extension: every subgroup arises from a smaller one by
    adjoining a single element, so a breadth-first sweep over conjugacy-class
    representatives is exhaustive.  Deduplication stores the full conjugation
    orbit of each subgroup found, which keeps the conjugacy tests O(1).
    Internally everything runs on an indexed multiplication table.
    """
    n = ambient.order()
    if n > bound:
        raise ValueError(f"ambient order {n} exceeds bound {bound}")
    elements = sorted(ambient.elements)
    index = {e: i for i, e in enumerate(elements)}
    table = [[0] * n for _ in range(n)]
    for i, a in enumerate(elements):
        row = table[i]
        for j, b in enumerate(elements):
            row[j] = index[ambient.mul(a, b)]
    from .matgrp import proj_canonical

    ident = index[proj_canonical(tuple(mat_identity(ambient.dim)), ambient.modulus)]
    inv = [0] * n
    for i in range(n):
        inv[i] = table[i].index(ident)

    def close(gens: frozenset) -> frozenset:
        seen = {ident}
        frontier = [ident]
        gen_list = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                row = table[x]
                for g in gen_list:
                    y = row[g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def conjugates(sub: frozenset) -> set[frozenset]:
        out = set()
        for c in range(n):
            ci = inv[c]
            crow = table[c]
            out.add(frozenset(table[crow[h]][ci] for h in sub))
        return out

    trivial = frozenset({ident})
    seen: set[frozenset] = set(conjugates(trivial))
    reps: list[frozenset] = [trivial]
    queue = [trivial]
    while queue:
        sub = queue.pop()
        for g in range(n):
            if g in sub:
                continue
            ext = close(frozenset(sub | {g}))
            if ext in seen:
                continue
            seen |= conjugates(ext)
            reps.append(ext)
            queue.append(ext)
    reps.sort(key=lambda s: (len(s), sorted(elements[i] for i in s)))
    out = []
    for s in reps:
        elems = frozenset(elements[i] for i in s)
        out.append(ProjGroup(tuple(sorted(elems)), ambient.dim, ambient.modulus, elems))
    return out
