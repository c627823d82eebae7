"""Dirichlet characters mod N with values as abstract root-of-unity exponents.

A character is stored by its images on a fixed generating set of (Z/NZ)^x,
as exponents of an abstract primitive m-th root of unity.  Evaluation into a
concrete ring (F_l^x, or a quadratic coefficient ring) goes through an
explicit embedding object, so the same character can be reduced through the
same prime-ideal map as the Fourier coefficients it accompanies.

Generators follow the usual CRT convention: for each odd prime power p^k
dividing N, the smallest primitive root mod p^k lifted to be 1 at the other
factors; for 4 the class of -1; for 2^k (k >= 3) the classes of -1 and 5.
Discrete logs are brute-forced, which is fine for the moduli in scope.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .ffield import FieldElement, factorize


class EmbeddingError(ValueError):
    pass


def _crt_lift(residue: int, q: int, modulus: int) -> int:
    """Integer x mod `modulus` with x = residue mod q and x = 1 mod modulus/q."""
    rest = modulus // q
    if rest == 1:
        return residue % modulus
    inv = pow(rest, -1, q)
    x = (1 + rest * ((residue - 1) * inv % q)) % modulus
    return x


def _primitive_root_pk(p: int, k: int) -> int:
    """Smallest primitive root mod p^k, p odd."""
    pk = p**k
    target = pk - pk // p
    for g in range(2, pk):
        if gcd(g, p) != 1:
            continue
        order = 1
        x = g % pk
        while x != 1:
            x = x * g % pk
            order += 1
            if order > target:
                break
        if order == target:
            return g
    raise ValueError(f"no primitive root mod {p}^{k}")


@dataclass(frozen=True)
class UnitGroupBasis:
    modulus: int
    generators: tuple
    orders: tuple

    @staticmethod
    @lru_cache(maxsize=None)
    def for_modulus(n: int) -> "UnitGroupBasis":
        if n < 1:
            raise ValueError("modulus must be positive")
        gens: list[int] = []
        orders: list[int] = []
        for p, k in sorted(factorize(n).items()):
            q = p**k
            if p == 2:
                if k == 1:
                    continue
                if k == 2:
                    gens.append(_crt_lift(3, 4, n))
                    orders.append(2)
                else:
                    gens.append(_crt_lift(q - 1, q, n))
                    orders.append(2)
                    gens.append(_crt_lift(5, q, n))
                    orders.append(2 ** (k - 2))
            else:
                g = _primitive_root_pk(p, k)
                gens.append(_crt_lift(g, q, n))
                orders.append(q - q // p)
        return UnitGroupBasis(n, tuple(gens), tuple(orders))

    @property
    def phi(self) -> int:
        out = 1
        for o in self.orders:
            out *= o
        return out

    def dlog(self, a: int) -> tuple:
        """Exponent vector of a over the basis; brute force per component."""
        n = self.modulus
        a %= n
        if gcd(a, n) != 1:
            raise ValueError(f"{a} is not a unit mod {n}")
        return self._dlog_table()[a]

    @lru_cache(maxsize=None)
    def _dlog_table(self) -> dict:
        n = self.modulus
        table = {}

        def rec(i, acc, exps):
            if i == len(self.generators):
                table[acc] = tuple(exps)
                return
            g, og = self.generators[i], self.orders[i]
            x = 1
            for e in range(og):
                rec(i + 1, acc * x % n, exps + [e])
                x = x * g % n

        rec(0, 1 % n, [])
        return table


# ---------------------------------------------------------------------------
# embeddings of the abstract root of unity


class FpEmbedding:
    """zeta_m -> the canonical element of exact order m in F_l^x."""

    def __init__(self, m: int, ell: int):
        self.m = m
        self.ell = ell
        if m == 1:
            self.zeta = FieldElement(1, ell)
            return
        if (ell - 1) % m:
            raise EmbeddingError(f"F_{ell} has no element of order {m}")
        from .matgrp import primitive_root

        g = FieldElement(primitive_root(ell), ell)
        self.zeta = g ** ((ell - 1) // m)

    def zero(self):
        return FieldElement(0, self.ell)

    def root_power(self, k: int):
        return self.zeta ** (k % self.m)


class RingEmbedding:
    """zeta_m -> a designated element of a coefficient ring."""

    def __init__(self, m: int, zeta, one, zero):
        self.m = m
        self._zeta = zeta
        self._one = one
        self._zero = zero

    def zero(self):
        return self._zero

    def root_power(self, k: int):
        out = self._one
        for _ in range(k % self.m):
            out = out * self._zeta
        return out


@dataclass(frozen=True)
class DirichletCharacter:
    basis: UnitGroupBasis
    zeta_order: int
    exponents: tuple

    def __post_init__(self):
        if len(self.exponents) != len(self.basis.generators):
            raise ValueError("one exponent per generator required")
        for e, o in zip(self.exponents, self.basis.orders):
            if (e * o) % self.zeta_order:
                raise ValueError("exponent incompatible with generator order")

    @property
    def modulus(self) -> int:
        return self.basis.modulus

    def exponent_at(self, a: int):
        """Exponent k with chi(a) = zeta^k, or None when gcd(a, N) > 1."""
        n = self.modulus
        if gcd(a, n) != 1:
            return None
        dl = self.basis.dlog(a)
        return sum(e * x for e, x in zip(self.exponents, dl)) % self.zeta_order

    def order(self) -> int:
        m = self.zeta_order
        g = m
        for e in self.exponents:
            g = gcd(g, e)
        return m // g if m else 1

    def is_trivial(self) -> bool:
        return all(e == 0 for e in self.exponents)

    def parity(self) -> int:
        """chi(-1) as +1 or -1."""
        k = self.exponent_at(-1)
        return 1 if k == 0 else -1  # chi(-1)^2 = 1 forces k in {0, m/2}

    def conductor(self) -> int:
        n = self.modulus
        divisors = sorted(d for d in range(1, n + 1) if n % d == 0)
        for d in divisors:
            ok = True
            for a in range(1, n):
                if gcd(a, n) == 1 and a % d == 1 % d:
                    if self.exponent_at(a) != 0:
                        ok = False
                        break
            if ok:
                return d
        return n

    def sign_value(self, a: int) -> int:
        """chi(a) in {-1, 0, +1}; only valid for characters of order <= 2."""
        if self.order() > 2:
            raise ValueError("sign_value needs a quadratic or trivial character")
        k = self.exponent_at(a)
        if k is None:
            return 0
        return 1 if k == 0 else -1

    def to_dict(self):
        return {
            "modulus": self.modulus,
            "zeta_order": self.zeta_order,
            "generator_images": [
                {"generator": g, "exponent": e}
                for g, e in zip(self.basis.generators, self.exponents)
            ],
        }

    @staticmethod
    def from_dict(data) -> "DirichletCharacter":
        basis = UnitGroupBasis.for_modulus(data["modulus"])
        images = {gi["generator"]: gi["exponent"] for gi in data["generator_images"]}
        if set(images) != set(basis.generators):
            raise ValueError(
                "generator set does not match the canonical basis "
                f"for modulus {data['modulus']}"
            )
        exps = tuple(images[g] for g in basis.generators)
        return DirichletCharacter(basis, data["zeta_order"], exps)


def trivial_character(n: int) -> DirichletCharacter:
    basis = UnitGroupBasis.for_modulus(n)
    return DirichletCharacter(basis, 1, tuple(0 for _ in basis.generators))


def evaluate(chi: DirichletCharacter, a: int, embed):
    """chi(a) under the given embedding; the embedding's zero when gcd(a,N)>1."""
    if chi.zeta_order > 1 and embed.m % chi.zeta_order:
        raise EmbeddingError(
            f"embedding of order {embed.m} cannot host a character of zeta order {chi.zeta_order}"
        )
    k = chi.exponent_at(a)
    if k is None:
        return embed.zero()
    if chi.zeta_order == 1:
        return embed.root_power(0)
    return embed.root_power(k * (embed.m // chi.zeta_order))


def evaluate_fp(chi: DirichletCharacter, a: int, ell: int) -> FieldElement:
    m = chi.order()
    return evaluate(chi, a, FpEmbedding(chi.zeta_order if m > 1 else 1, ell))


def twist_modulus(n: int) -> int:
    """Product of the primes whose square divides n."""
    if n < 1:
        raise ValueError("modulus must be positive")
    q = 1
    for p, k in factorize(n).items():
        if k >= 2:
            q *= p
    return q


def quadratic_characters(q: int) -> list[DirichletCharacter]:
    """All characters mod q of order dividing 2, trivial one first.

    Sorted by (conductor, exponent vector) so iteration order is canonical.
    """
    basis = UnitGroupBasis.for_modulus(q)
    chars = []

    def rec(i, exps):
        if i == len(basis.generators):
            chars.append(DirichletCharacter(basis, 2, tuple(exps)))
            return
        rec(i + 1, exps + [0])
        if basis.orders[i] % 2 == 0:
            rec(i + 1, exps + [1])

    rec(0, [])
    chars.sort(key=lambda c: (c.conductor(), c.exponents))
    return chars


def kernel_field_disc(chi: DirichletCharacter) -> int:
    """Discriminant of the quadratic field cut out by a quadratic character.

    Computed from conductor and parity: |disc| = conductor, sign = chi(-1).
    The trivial character yields 1.
    """
    if chi.order() > 2:
        raise ValueError("kernel field only defined for quadratic characters")
    if chi.is_trivial() or chi.order() == 1:
        return 1
    f = chi.conductor()
    return f if chi.sign_value(-1) == 1 else -f


def fl_valued_characters(n: int, ell: int) -> list[DirichletCharacter]:
    """All characters mod n of order dividing ell - 1, canonical order."""
    basis = UnitGroupBasis.for_modulus(n)
    m = ell - 1
    chars = []

    def rec(i, exps):
        if i == len(basis.generators):
            chars.append(DirichletCharacter(basis, m, tuple(exps)))
            return
        o = basis.orders[i]
        step = m // gcd(o, m)
        for e in range(0, m, step):
            rec(i + 1, exps + [e])

    rec(0, [])
    chars.sort(key=lambda c: c.exponents)
    return chars
