"""Dirichlet characters over Q, quadratic sign profiles, Gauss sums.

Characters are stored as exponent vectors on a fixed generating set of the
unit group modulo m (CRT components; primitive roots at odd prime powers,
{-1, 5} at 2-powers).  All character values are carried as exact rational
phases r with chi(a) = exp(2 pi i r) and converted to floating complex only
at the boundary, so primitivity and parity tests are exact.

`brute_force_character_table` is an independent cross-check enumerator: it
knows nothing about primitive roots or CRT and builds every homomorphism of
the unit group by subgroup extension.  Tests and the self-check suite compare
the two routes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from .errors import RamifiedOverlapError
from .fields import FinitePlace, LevelIdeal, Place, RATIONALS, FieldProfile
from .special import digamma


# ---------------------------------------------------------------------------
# unit-group structure


def _factorize(m: int) -> list[tuple[int, int]]:
    out = []
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return out


def _primitive_root(q: int, phi: int) -> int:
    prime_factors = {p for p, _ in _factorize(phi)}
    for g in range(2, q):
        if math.gcd(g, q) != 1:
            continue
        if all(pow(g, phi // p, q) != 1 for p in prime_factors):
            return g
    raise ArithmeticError(f"no primitive root modulo {q}")


@dataclass(frozen=True)
class _UnitGroup:
    """Generators, orders and discrete-log tables of (Z/m)^x.

    ``meta`` records, per generator, the prime-power component it came from
    and its role: "odd" (primitive root at an odd prime power), "m4" (the
    order-2 generator mod 4), "neg"/"five" (the pair at 2-powers >= 8).
    """

    modulus: int
    generators: tuple[int, ...]
    orders: tuple[int, ...]
    log_table: Mapping[int, tuple[int, ...]]
    meta: tuple[tuple[int, int, str], ...] = ()

    @property
    def size(self) -> int:
        out = 1
        for n in self.orders:
            out *= n
        return out


@lru_cache(maxsize=4096)
def unit_group(m: int) -> _UnitGroup:
    if m < 1:
        raise ValueError("modulus must be positive")
    if m == 1:
        return _UnitGroup(1, (), (), {0: ()}, ())
    components: list[tuple[int, list[int], list[int], list[tuple[int, int, str]]]] = []
    for p, e in _factorize(m):
        q = p**e
        if p == 2:
            if e == 1:
                components.append((q, [], [], []))
            elif e == 2:
                components.append((q, [3], [2], [(2, 2, "m4")]))
            else:
                components.append(
                    (q, [q - 1, 5], [2, q // 4], [(2, e, "neg"), (2, e, "five")])
                )
        else:
            phi = q // p * (p - 1)
            components.append((q, [_primitive_root(q, phi)], [phi], [(p, e, "odd")]))
    # CRT-lift each component generator to a global generator ≡ 1 elsewhere.
    gens: list[int] = []
    orders: list[int] = []
    meta: list[tuple[int, int, str]] = []
    for i, (q, gs, ns, ms) in enumerate(components):
        rest = m // q
        # x ≡ g (mod q), x ≡ 1 (mod m/q)
        inv_rest = pow(rest, -1, q)
        for g, n, mt in zip(gs, ns, ms):
            x = (1 + rest * ((g - 1) * inv_rest % q)) % m
            gens.append(x)
            orders.append(n)
            meta.append(mt)
    # Discrete logs by joint enumeration of all exponent tuples.
    table: dict[int, tuple[int, ...]] = {}
    exps = [0] * len(gens)
    values = [1] * (len(gens) + 1)

    def rec(i: int, acc: int) -> None:
        if i == len(gens):
            table[acc] = tuple(exps)
            return
        x = acc
        for e in range(orders[i]):
            exps[i] = e
            rec(i + 1, x)
            x = x * gens[i] % m
        exps[i] = 0

    rec(0, 1)
    return _UnitGroup(m, tuple(gens), tuple(orders), table, tuple(meta))


# ---------------------------------------------------------------------------
# Dirichlet characters


@dataclass(frozen=True)
class DirichletCharacter:
    """A character modulo m, stored as exponents on the canonical generators."""

    modulus: int
    exponents: tuple[int, ...]

    def __post_init__(self) -> None:
        g = unit_group(self.modulus)
        if len(self.exponents) != len(g.orders):
            raise ValueError("exponent vector length does not match the unit group")
        object.__setattr__(
            self, "exponents", tuple(e % n for e, n in zip(self.exponents, g.orders))
        )

    # -- construction -------------------------------------------------------

    @classmethod
    def trivial(cls, m: int = 1) -> DirichletCharacter:
        return cls(m, tuple(0 for _ in unit_group(m).orders))

    @classmethod
    def quadratic(cls, m: int) -> DirichletCharacter:
        """A primitive real character mod m, preferring the even one.

        Unique for odd or fundamental-discriminant moduli; at m = 8 both
        parities exist and the even one is returned.
        """
        candidates = [
            chi
            for chi in enumerate_character_group(m)
            if chi.order() == 2 and chi.is_primitive()
        ]
        for chi in candidates:
            if chi.is_even():
                return chi
        if candidates:
            return candidates[0]
        raise ValueError(f"no primitive quadratic character of conductor {m}")

    @classmethod
    def from_json_dict(cls, doc: Mapping) -> DirichletCharacter:
        return cls(int(doc["modulus"]), tuple(int(e) for e in doc["exponents"]))

    def to_json_dict(self) -> dict:
        return {"modulus": self.modulus, "exponents": list(self.exponents)}

    # -- exact values --------------------------------------------------------

    def phase(self, a: int) -> Fraction | None:
        """Exact phase r with chi(a) = e^{2 pi i r}; None when gcd(a, m) > 1."""
        g = unit_group(self.modulus)
        a = a % self.modulus
        if self.modulus == 1:
            return Fraction(0)
        if math.gcd(a, self.modulus) != 1:
            return None
        logs = g.log_table[a]
        r = Fraction(0)
        for e, x, n in zip(self.exponents, logs, g.orders):
            r += Fraction(e * x, n)
        return r % 1

    def value(self, a: int) -> complex:
        r = self.phase(a)
        if r is None:
            return 0.0 + 0.0j
        return complex(math.cos(2 * math.pi * r), math.sin(2 * math.pi * r))

    def values_array(self) -> np.ndarray:
        """chi(0), chi(1), ..., chi(m-1) as a complex vector."""
        m = self.modulus
        out = np.zeros(m, dtype=complex)
        for a in range(m):
            r = self.phase(a)
            if r is not None:
                out[a] = complex(
                    math.cos(2 * math.pi * r), math.sin(2 * math.pi * r)
                )
        if m == 1:
            out[0] = 1.0
        return out

    # -- structure -----------------------------------------------------------

    def order(self) -> int:
        g = unit_group(self.modulus)
        out = 1
        for e, n in zip(self.exponents, g.orders):
            out = math.lcm(out, n // math.gcd(e, n))
        return out

    def is_even(self) -> bool:
        if self.modulus <= 2:
            return True
        return self.phase(self.modulus - 1) == 0

    def is_real(self) -> bool:
        return self.order() <= 2

    def conductor(self) -> int:
        """Conductor from the component orders (exact, no value scan).

        At an odd prime power the conductor exponent is v_p(order) + 1 for a
        nontrivial component; at 2-powers the pair {-1, 5} contributes 2 or
        v_2(order on 5) + 2.  Cross-checked against the divisor-test variant.
        """
        g = unit_group(self.modulus)
        if self.modulus == 1:
            return 1
        by_prime: dict[int, int] = {}
        two_neg_odd = False
        two_five_exp = 0
        for e, n, (p, a, kind) in zip(self.exponents, g.orders, g.meta):
            if kind == "odd":
                if e % n == 0:
                    continue
                d = n // math.gcd(e, n)
                t = 0
                while d % p == 0:
                    d //= p
                    t += 1
                by_prime[p] = max(by_prime.get(p, 0), t + 1)
            elif kind == "m4":
                if e % 2 == 1:
                    by_prime[2] = max(by_prime.get(2, 0), 2)
            elif kind == "neg":
                two_neg_odd = e % 2 == 1
            elif kind == "five":
                if e % n != 0:
                    d = n // math.gcd(e, n)
                    two_five_exp = d.bit_length() + 1  # v_2(d) + 2 for d a 2-power
        if two_five_exp:
            by_prime[2] = max(by_prime.get(2, 0), two_five_exp)
        elif two_neg_odd:
            by_prime[2] = max(by_prime.get(2, 0), 2)
        out = 1
        for p, f in by_prime.items():
            out *= p**f
        return out

    def conductor_by_divisor_test(self) -> int:
        """Smallest d | m with chi trivial on residues ≡ 1 (mod d); slow dual route."""
        m = self.modulus
        if m == 1:
            return 1
        for d in sorted(d for d in range(1, m + 1) if m % d == 0):
            if all(
                self.phase(a) == 0
                for a in range(1, m + 1, d)
                if math.gcd(a, m) == 1
            ):
                return d
        return m

    def is_primitive(self) -> bool:
        return self.conductor() == self.modulus

    def primitive_character(self) -> DirichletCharacter:
        """The primitive character inducing this one."""
        f = self.conductor()
        if f == self.modulus:
            return self
        gf = unit_group(f)
        exps = []
        for gen, n in zip(gf.generators, gf.orders):
            # Lift gen to a residue coprime to the full modulus.
            a = gen
            while math.gcd(a, self.modulus) != 1:
                a += f
            r = self.phase(a)
            assert r is not None
            e = r * n
            if e.denominator != 1:
                raise ArithmeticError("inconsistent phase when reducing to conductor")
            exps.append(int(e) % n)
        return DirichletCharacter(f, tuple(exps))

    def __mul__(self, other: DirichletCharacter) -> DirichletCharacter:
        if other.modulus != self.modulus:
            raise ValueError("characters must share a modulus to be multiplied")
        return DirichletCharacter(
            self.modulus,
            tuple(a + b for a, b in zip(self.exponents, other.exponents)),
        )

    def conjugate(self) -> DirichletCharacter:
        return DirichletCharacter(self.modulus, tuple(-e for e in self.exponents))

    def square(self) -> DirichletCharacter:
        return self * self

    def __str__(self) -> str:
        return f"chi_{self.modulus}{list(self.exponents)}"


def enumerate_character_group(m: int) -> list[DirichletCharacter]:
    """Every character modulo m, in lexicographic exponent order."""
    g = unit_group(m)
    chars = []
    exps = [0] * len(g.orders)

    def rec(i: int) -> None:
        if i == len(g.orders):
            chars.append(DirichletCharacter(m, tuple(exps)))
            return
        for e in range(g.orders[i]):
            exps[i] = e
            rec(i + 1)
        exps[i] = 0

    rec(0)
    return chars


# ---------------------------------------------------------------------------
# Gauss sums


@dataclass(frozen=True)
class GaussSumValue:
    """The classical character sum tau(chi) together with its modulus."""

    value: complex
    modulus: int

    def abs_defect(self) -> float:
        """| |tau| - sqrt(m) | ; zero for primitive characters."""
        return abs(abs(self.value) - math.sqrt(self.modulus))


def gauss_sum(chi: DirichletCharacter) -> GaussSumValue:
    """tau(chi) = sum_a chi(a) e^{2 pi i a / m}; requires chi primitive."""
    if not chi.is_primitive():
        raise ValueError("gauss_sum requires a primitive character")
    m = chi.modulus
    if m == 1:
        return GaussSumValue(1.0 + 0.0j, 1)
    vals = chi.values_array()
    a = np.arange(m)
    tau = complex(np.sum(vals * np.exp(2j * np.pi * a / m)))
    return GaussSumValue(tau, m)


def adelic_gauss_sum(chi: DirichletCharacter) -> complex:
    """The adelically normalized Gauss sum tau(chi) / sqrt(m) (modulus one).

    The classical tau and this normalized variant are both exposed; the two
    differ by the m**(1/2) volume normalization and agree in modulus only.
    """
    g = gauss_sum(chi)
    return g.value / math.sqrt(g.modulus)


def gauss_sums_for_modulus(m: int) -> list[tuple[DirichletCharacter, complex]]:
    """Gauss sums of every primitive character mod m, batched.

    One integer matrix product yields all character values at once, so the
    whole family up to several hundred moduli stays fast.
    """
    if m == 1:
        return [(DirichletCharacter.trivial(1), 1.0 + 0.0j)]
    g = unit_group(m)
    primitive = [chi for chi in enumerate_character_group(m) if chi.is_primitive()]
    if not primitive:
        return []
    lcm = 1
    for n in g.orders:
        lcm = math.lcm(lcm, n)
    residues = np.array(sorted(g.log_table), dtype=np.int64)
    logs = np.array([g.log_table[int(a)] for a in residues], dtype=np.int64)  # (res, gens)
    scale = np.array([lcm // n for n in g.orders], dtype=np.int64)
    expmat = np.array([chi.exponents for chi in primitive], dtype=np.int64)  # (chars, gens)
    phases = (expmat * scale) @ logs.T % lcm  # (chars, res)
    values = np.exp(2j * np.pi * phases / lcm)
    kernel = np.exp(2j * np.pi * residues / m)
    taus = values @ kernel
    return [(chi, complex(t)) for chi, t in zip(primitive, taus)]


# ---------------------------------------------------------------------------
# the level census


def enumerate_xi(n: LevelIdeal | int, profile: FieldProfile = RATIONALS) -> list[DirichletCharacter]:
    """All even primitive characters whose conductor squared divides the level.

    Rational profile only.  The trivial character (conductor 1) is always in
    the list; entries are sorted by (conductor, exponents).
    """
    if not profile.is_rationals:
        raise ValueError("character enumeration is implemented over Q only")
    if isinstance(n, int):
        n = LevelIdeal.from_integer(n, profile)
    out: list[DirichletCharacter] = []
    for c in n.square_divisor_conductors():
        m = c.norm()
        for chi in enumerate_character_group(m):
            if chi.is_even() and chi.is_primitive():
                out.append(chi)
    return sorted(out, key=lambda c: (c.modulus, c.exponents))


def character_census(n: LevelIdeal | int, profile: FieldProfile = RATIONALS) -> int:
    """|Xi(n)| — the number of even characters with conductor squared dividing n."""
    return len(enumerate_xi(n, profile))


def census_proof_bound(n: LevelIdeal) -> float:
    """N(n)**(1/2) times the number of square divisors (class number one)."""
    return math.sqrt(n.norm()) * len(n.square_divisor_conductors())


# ---------------------------------------------------------------------------
# L(1, chi) by the digamma formula


def l_one(chi: DirichletCharacter) -> float | complex:
    """Finite-part L(1, chi) = -(1/m) sum_a chi(a) psi(a/m) for nontrivial even chi."""
    if chi.order() == 1:
        raise ValueError("L(1) of the trivial character is a pole")
    m = chi.modulus
    acc = 0.0 + 0.0j
    for a in range(1, m):
        r = chi.phase(a)
        if r is None:
            continue
        val = complex(math.cos(2 * math.pi * r), math.sin(2 * math.pi * r))
        acc += val * complex(digamma(a / m))
    acc = -acc / m
    if abs(acc.imag) < 1e-12 * max(1.0, abs(acc.real)):
        return acc.real
    return acc


def l_one_completed(chi: DirichletCharacter) -> float | complex:
    """Completed L(1, chi) = sqrt(m) * L_fin(1, chi) for even primitive chi."""
    if not (chi.is_even() and chi.is_primitive()):
        raise ValueError("completed L(1) accessor expects an even primitive character")
    return math.sqrt(chi.modulus) * l_one(chi)


# ---------------------------------------------------------------------------
# quadratic sign profiles


@dataclass(frozen=True)
class QuadraticCharacterProfile:
    """A quadratic character seen through its local data.

    ``signs`` lists values at uniformizers for places outside the conductor
    support.  For profiles built from a concrete quadratic character over Q,
    unlisted places fall back to the character value at the prime.  The
    trivial profile answers +1 everywhere.
    """

    conductor: LevelIdeal
    signs: tuple[tuple[FinitePlace, int], ...] = ()
    archimedean_trivial: bool = True
    dirichlet: DirichletCharacter | None = None
    all_plus: bool = False

    def __post_init__(self) -> None:
        conductor_support = set(self.conductor.support())
        for place, s in self.signs:
            if s not in (1, -1):
                raise ValueError("unramified signs must be +1 or -1")
            if place in conductor_support:
                raise ValueError(
                    f"sign listed at ramified place {place.label}"
                )
        if not self.archimedean_trivial:
            raise ValueError("archimedean components must be trivial")

    @classmethod
    def trivial(cls) -> QuadraticCharacterProfile:
        return cls(conductor=LevelIdeal.unit(), all_plus=True)

    @classmethod
    def from_signs(
        cls, signs: Mapping[FinitePlace, int], conductor: LevelIdeal | None = None
    ) -> QuadraticCharacterProfile:
        return cls(
            conductor=conductor or LevelIdeal.unit(),
            signs=tuple(sorted(signs.items(), key=lambda t: (t[0].q, t[0].label))),
        )

    @classmethod
    def from_dirichlet(cls, chi: DirichletCharacter, profile: FieldProfile = RATIONALS) -> QuadraticCharacterProfile:
        if not (chi.order() <= 2 and chi.is_even() and chi.is_primitive()):
            raise ValueError("profile requires an even primitive quadratic (or trivial) character")
        return cls(
            conductor=LevelIdeal.from_integer(chi.modulus, profile),
            dirichlet=chi,
            all_plus=chi.order() == 1,
        )

    def is_trivial(self) -> bool:
        if self.dirichlet is not None:
            return self.dirichlet.order() == 1
        return self.all_plus and self.conductor.is_unit() and not self.signs

    def sign_at(self, place: FinitePlace) -> int:
        if self.conductor.ord_at(place) > 0:
            raise RamifiedOverlapError(
                f"character is ramified at {place.label}"
            )
        for p, s in self.signs:
            if p == place:
                return s
        if self.dirichlet is not None:
            ph = self.dirichlet.phase(place.q)
            if ph is None:
                raise RamifiedOverlapError(
                    f"character is ramified at {place.label}"
                )
            return 1 if ph == 0 else -1
        if self.all_plus:
            return 1
        raise KeyError(f"no sign recorded at place {place.label}")

    def value_on_ideal(self, n: LevelIdeal) -> int:
        """Product of local signs raised to the exponents of n."""
        out = 1
        for place, e in n.factors:
            out *= self.sign_at(place) ** e
        return out


def eta_tilde(eta: QuadraticCharacterProfile, n: LevelIdeal) -> int:
    """Sign of the quadratic character on the ideal n ( ±1 )."""
    return eta.value_on_ideal(n)


def is_admissible_level(
    n: LevelIdeal,
    s_places: Iterable[Place],
    eta: QuadraticCharacterProfile,
) -> bool:
    """The three admissibility conditions for a level against (S, eta).

    (1) the level support avoids both S and the conductor of eta,
    (2) every local sign of eta on the level support is -1,
    (3) the global sign of eta on the level is +1.
    """
    s_finite = {p for p in s_places if isinstance(p, FinitePlace)}
    support = set(n.support())
    conductor_support = set(eta.conductor.support())
    if support & conductor_support or support & s_finite:
        return False
    if any(eta.sign_at(p) != -1 for p in support):
        return False
    return eta.value_on_ideal(n) == 1


# ---------------------------------------------------------------------------
# independent brute-force enumeration (cross-check oracle)


def brute_force_character_table(m: int) -> list[dict[int, Fraction]]:
    """Every character of (Z/m)^x as an exact phase table, built by subgroup
    extension only (no CRT, no primitive roots).  Cross-check oracle."""
    if m == 1:
        return [{0: Fraction(0)}]
    residues = [a for a in range(1, m) if math.gcd(a, m) == 1]
    chars: list[dict[int, Fraction]] = [{1: Fraction(0)}]
    for g in residues:
        nxt: list[dict[int, Fraction]] = []
        for chi in chars:
            if g in chi:
                nxt.append(chi)
                continue
            # relative order of g over the domain subgroup
            r = 1
            x = g
            while x not in chi:
                x = x * g % m
                r += 1
            base = chi[x]
            powers = [1]
            for _ in range(r - 1):
                powers.append(powers[-1] * g % m)
            for j in range(r):
                phase_g = (Fraction(base, r) + Fraction(j, r)) % 1
                ext = dict(chi)
                for i in range(1, r):
                    shift = (i * phase_g) % 1
                    for h, ph in chi.items():
                        ext[h * powers[i] % m] = (ph + shift) % 1
                nxt.append(ext)
        chars = nxt
    return chars


def brute_force_conductor(table: Mapping[int, Fraction], m: int) -> int:
    """Conductor of a brute-force phase table by the divisor test."""
    if m == 1:
        return 1
    for d in sorted(x for x in range(1, m + 1) if m % x == 0):
        if all(
            table.get(a, None) == 0
            for a in range(1, m + 1, d)
            if math.gcd(a, m) == 1
        ):
            return d
    return m


def brute_force_is_even(table: Mapping[int, Fraction], m: int) -> bool:
    if m <= 2:
        return True
    return table[m - 1] == 0
