"""Explicit constants of the moment identity: level constants, edge Laurent
data, the residual/Eisenstein constant family, and the orbit-side kernels.

The per-place building blocks come in two families.  The *edge place factors*
(functions of the continuous parameter, with closed first and second
derivatives at the edge point -1) assemble into the Taylor data of a product
over the support of a choice assignment.  The *residue place factors*
(functions of a twisting variable z, with closed derivatives at 0) assemble
into the constants of the residual spectrum contribution.  Every closed-form
derivative here is dual-checked against finite differences by the test suite.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from .characters import (
    DirichletCharacter,
    QuadraticCharacterProfile,
    adelic_gauss_sum,
)
from .errors import CapExceededError, PoleError, RamifiedOverlapError
from .fields import (
    FieldProfile,
    FinitePlace,
    LevelIdeal,
    Place,
    RATIONALS,
    index_k0,
)
from .lfunctions import (
    EdgeCoefficients,
    LaurentData,
    completed_zeta,
    edge_coefficients,
    epsilon_of_minus_z,
    l_fin,
    laurent_at_1,
    zeta_fin,
)
from .special import EULER_GAMMA, digamma, gamma, log_gamma

# ---------------------------------------------------------------------------
# level constants


def level_constant(n: LevelIdeal) -> float:
    """The density constant of the level family: a product over the places of
    exponent two of 1 - (q**2 - q)**(-1) and, over exponents three and more,
    of 1 - q**(-2).  Equals 1 on squarefree levels."""
    out = 1.0
    for place, e in n.factors:
        q = place.q
        if e == 2:
            out *= 1.0 - 1.0 / (q * q - q)
        elif e >= 3:
            out *= 1.0 - 1.0 / (q * q)
    return out


def mean_square_constant(
    n: LevelIdeal, laurent: LaurentData, profile: FieldProfile = RATIONALS
) -> float:
    """Constant term of the second-moment asymptotic at level n.

    c0 + residue * { (d/2)(gamma + 2 log 2 - log pi) + log(D * N(n)**(1/2)) },
    built from the Laurent data of the completed L-function of the character.
    """
    d_f = profile.degree
    bracket = 0.5 * d_f * (EULER_GAMMA + 2.0 * math.log(2.0) - math.log(math.pi))
    bracket += math.log(profile.discriminant_abs) + 0.5 * n.log_norm()
    return laurent.c0 + laurent.residue * bracket


# ---------------------------------------------------------------------------
# choice assignments over the level support


@dataclass(frozen=True)
class RhoAssignment:
    """A choice of depth 0..e_v at every place of a base ideal."""

    base: LevelIdeal
    choices: tuple[tuple[FinitePlace, int], ...]

    def __post_init__(self) -> None:
        for place, j in self.choices:
            e = self.base.ord_at(place)
            if not 0 <= j <= e:
                raise ValueError(f"choice {j} at {place.label} outside 0..{e}")

    def choice_at(self, place: FinitePlace) -> int:
        for p, j in self.choices:
            if p == place:
                return j
        return 0

    def active(self) -> tuple[tuple[FinitePlace, int], ...]:
        """Places with a positive choice, paired with that choice."""
        return tuple((p, j) for p, j in self.choices if j >= 1)

    def is_empty(self) -> bool:
        return not self.active()


def enumerate_rho(n: LevelIdeal, cap: int = 100_000) -> list[RhoAssignment]:
    """All choice assignments over the support of n; size prod(e_v + 1)."""
    total = 1
    for _, e in n.factors:
        total *= e + 1
    if total > cap:
        raise CapExceededError(
            f"assignment enumeration would produce {total} > cap {cap}"
        )
    places = [p for p, _ in n.factors]
    ranges = [range(n.ord_at(p) + 1) for p in places]
    out = []
    for combo in itertools.product(*ranges):
        out.append(RhoAssignment(n, tuple(zip(places, combo))))
    return out


def flat_section_at_identity(
    rho: RhoAssignment, sign_at: Callable[[FinitePlace], int]
) -> float:
    """Value at the identity of the normalized flat section attached to rho.

    Depth-one places contribute sign * q**(1/2); depth k >= 2 contributes
    (1 - 1/q) sign**k ((q+1)/(q-1))**(1/2) q**(k/2).
    """
    out = 1.0
    for place, k in rho.active():
        q = place.q
        s = sign_at(place)
        if k == 1:
            out *= s * math.sqrt(q)
        else:
            out *= (1.0 - 1.0 / q) * s**k * math.sqrt((q + 1.0) / (q - 1.0)) * q ** (k / 2.0)
    return out


# ---------------------------------------------------------------------------
# edge place factors and their closed-form derivatives


@dataclass(frozen=True)
class EdgePlaceBlock:
    """Per-place data (q, depth k, sign) of an edge factor."""

    q: int
    k: int
    sign: int

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("depth must be >= 1")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @property
    def leading(self) -> float:
        """1 at depth one, ((q+1)/(q-1))**(1/2) at depth two or more."""
        if self.k == 1:
            return 1.0
        return math.sqrt((self.q + 1.0) / (self.q - 1.0))


def edge_place_factor(nu: complex, block: EdgePlaceBlock) -> complex:
    """C {q + 1 + sign (q**((1+nu)/2) + q**((1-nu)/2))} q**(k nu / 2) / (q - q**nu)."""
    q, k, s = block.q, block.k, block.sign
    nu = complex(nu)
    qnu = q**nu
    if abs(q - qnu) < 1e-13 * q:
        raise PoleError(f"edge factor pole at nu = {nu}")
    bracket = q + 1.0 + s * (q ** ((1.0 + nu) / 2.0) + q ** ((1.0 - nu) / 2.0))
    return block.leading * bracket * q ** (k * nu / 2.0) / (q - qnu)


def edge_place_at_edge(block: EdgePlaceBlock) -> float:
    """Value at nu = -1: C (1 + sign) q**(1 - k/2) / (q - 1)."""
    q, k, s = block.q, block.k, block.sign
    return block.leading * (1.0 + s) * q ** (1.0 - k / 2.0) / (q - 1.0)


def edge_place_d1(block: EdgePlaceBlock) -> float:
    """Closed-form first derivative of the edge factor at nu = -1."""
    q, k, s = block.q, block.k, block.sign
    lq = k * math.log(q)
    num = -s * q * (q - 1.0) ** 2 + k * (1.0 + s) * q * (q * q - 1.0) + 2.0 * (1.0 + s) * q
    den = 2.0 * k * (q * q - 1.0) * (q - 1.0)
    return block.leading * lq * q ** (-k / 2.0) * num / den


def edge_place_d2(block: EdgePlaceBlock) -> float:
    """Closed-form second derivative of the edge factor at nu = -1."""
    q, k, s = block.q, block.k, block.sign
    lq2 = (k * math.log(q)) ** 2
    qk = q ** (-k / 2.0)
    t1 = (
        s
        * lq2
        * qk
        * ((1.0 + q) * (q - 1.0 / q) + (1.0 - q) * (k * (q - 1.0 / q) + 2.0 / q))
        / (4.0 * k * k * (q - 1.0 / q) ** 2)
    )
    t2 = lq2 * qk * (s * (k * (q**3 - q) + 2.0 * q)) / (4.0 * k * k * (1.0 + q) * (1.0 - q * q))
    t3 = (
        lq2
        * qk
        * ((1.0 + s) * q)
        / (k * k * (q * q - 1.0) ** 3 * (q - 1.0))
        * (
            (k * k / 4.0 * (q * q - 1.0) + 1.0) * (q * q - 1.0) ** 2
            + (k * (q * q - 1.0) + 2.0) * (q * q - 1.0)
        )
    )
    return block.leading * (t1 + t2 + t3)


def _blocks_for(rho: RhoAssignment, sign_at: Callable[[FinitePlace], int]) -> list[EdgePlaceBlock]:
    return [EdgePlaceBlock(p.q, k, sign_at(p)) for p, k in rho.active()]


def eta_on_different(
    eta: QuadraticCharacterProfile, profile: FieldProfile
) -> int:
    """Sign of the character on the different ideal (1 over Q, where all
    different exponents vanish)."""
    out = 1
    for place in profile.finite_places:
        if place.d > 0:
            out *= eta.sign_at(place) ** place.d
    return out


def edge_product_taylor(
    rho: RhoAssignment,
    eta: QuadraticCharacterProfile,
    profile: FieldProfile = RATIONALS,
) -> tuple[float, float, float]:
    """Taylor coefficients (orders 0, 1, 2) at the edge point of the product of
    edge place factors over the active places, scaled by the character's sign
    on the different.

    The order-0 coefficient is the explicit product of edge values; orders 1
    and 2 come from the product rule through the closed-form derivatives.
    """
    eps = eta_on_different(eta, profile)
    blocks = _blocks_for(rho, eta.sign_at)
    values = [edge_place_at_edge(b) for b in blocks]
    d1 = [edge_place_d1(b) for b in blocks]
    d2 = [edge_place_d2(b) for b in blocks]
    m = len(blocks)

    def prod_except(skip: set[int]) -> float:
        out = 1.0
        for i, v in enumerate(values):
            if i not in skip:
                out *= v
        return out

    t0 = eps * prod_except(set())
    t1 = eps * math.fsum(d1[w] * prod_except({w}) for w in range(m))
    t2 = 0.5 * eps * math.fsum(
        math.fsum(d1[w] * d1[x] * prod_except({w, x}) for x in range(m) if x != w)
        + d2[w] * prod_except({w})
        for w in range(m)
    )
    return t0, t1, t2


# ---------------------------------------------------------------------------
# residue place factors and their closed-form derivatives


def residue_place_factor(z: complex, block: EdgePlaceBlock) -> complex:
    """The per-place factor of the residual constant as a function of z."""
    q, k = block.q, block.k
    z = complex(z)
    if k == 1:
        return (q**z - 1.0) * q**-0.5 / (1.0 - 1.0 / q)
    poly = (
        q ** (k * z)
        - q ** ((k - 1) * z) / q
        - q ** ((k - 1) * z)
        + q ** ((k - 2) * z) / q
    )
    return poly * block.leading * q ** (-k / 2.0) / (1.0 - q**-2)


def residue_place_d1(block: EdgePlaceBlock) -> float:
    q, k = block.q, block.k
    if k == 1:
        return math.log(q) * q**-0.5 / (1.0 - 1.0 / q)
    return math.log(q) * block.leading * q ** (-k / 2.0) / (1.0 + 1.0 / q)


def residue_place_d2(block: EdgePlaceBlock) -> float:
    q, k = block.q, block.k
    if k == 1:
        return math.log(q) ** 2 * q**-0.5 / (1.0 - 1.0 / q)
    lq2 = (k * math.log(q)) ** 2
    return (
        lq2
        * (2.0 * k - 1.0 - (2.0 * k - 3.0) / q)
        / (k * k)
        * block.leading
        * q ** (-k / 2.0)
        / (1.0 - q**-2)
    )


def residue_product(z: complex, rho: RhoAssignment, profile: FieldProfile) -> complex:
    """D**(-z) times the product of residue place factors over the active places."""
    blocks = _blocks_for(rho, lambda p: 1)
    out = profile.discriminant_abs ** (-complex(z))
    for b in blocks:
        out *= residue_place_factor(z, b)
    return out


def residue_product_d1_at_0(rho: RhoAssignment, profile: FieldProfile) -> float:
    log_d_inv = -math.log(profile.discriminant_abs)
    blocks = _blocks_for(rho, lambda p: 1)
    values = [residue_place_factor(0.0, b).real for b in blocks]
    d1 = [residue_place_d1(b) for b in blocks]
    m = len(blocks)

    def prod_except(skip: set[int]) -> float:
        out = 1.0
        for i, v in enumerate(values):
            if i not in skip:
                out *= v
        return out

    return log_d_inv * prod_except(set()) + math.fsum(
        d1[w] * prod_except({w}) for w in range(m)
    )


def residue_product_d2_at_0(rho: RhoAssignment, profile: FieldProfile) -> float:
    log_d_inv = -math.log(profile.discriminant_abs)
    blocks = _blocks_for(rho, lambda p: 1)
    values = [residue_place_factor(0.0, b).real for b in blocks]
    d1 = [residue_place_d1(b) for b in blocks]
    d2 = [residue_place_d2(b) for b in blocks]
    m = len(blocks)

    def prod_except(skip: set[int]) -> float:
        out = 1.0
        for i, v in enumerate(values):
            if i not in skip:
                out *= v
        return out

    cross = math.fsum(
        math.fsum(d1[w] * d1[x] * prod_except({w, x}) for x in range(m) if x != w)
        + d2[w] * prod_except({w})
        for w in range(m)
    )
    return (
        log_d_inv**2 * prod_except(set())
        + 2.0 * log_d_inv * math.fsum(d1[w] * prod_except({w}) for w in range(m))
        + cross
    )


# ---------------------------------------------------------------------------
# character context bundling the analytic inputs


@dataclass(frozen=True)
class EtaContext:
    """Analytic data of a sign character over Q, gathered once.

    Bundles the quadratic profile, the concrete character (None = trivial),
    the normalized Gauss sum, Laurent data at 1 for both the character and
    the trivial character, and the edge coefficients of the central-value
    series.
    """

    profile: FieldProfile
    eta: QuadraticCharacterProfile
    dirichlet: DirichletCharacter | None
    gauss_adelic: complex
    laurent_trivial: LaurentData
    laurent_eta: LaurentData
    edge: EdgeCoefficients
    zeta2: float

    @property
    def is_trivial(self) -> bool:
        return self.dirichlet is None

    @property
    def residue(self) -> float:
        return self.laurent_trivial.residue


def eta_context(
    chi: DirichletCharacter | None, profile: FieldProfile = RATIONALS
) -> EtaContext:
    """Build the full analytic context for a trivial or even quadratic character."""
    if not profile.is_rationals:
        raise ValueError("the analytic context is implemented over Q only")
    if chi is not None and chi.order() == 1:
        chi = None
    laurent_trivial = laurent_at_1(None)
    if chi is None:
        eta = QuadraticCharacterProfile.trivial()
        gauss = 1.0 + 0.0j
        laurent_eta = laurent_trivial
    else:
        if not (chi.order() == 2 and chi.is_even() and chi.is_primitive()):
            raise ValueError("context requires the trivial or an even primitive quadratic character")
        eta = QuadraticCharacterProfile.from_dirichlet(chi, profile)
        gauss = adelic_gauss_sum(chi)
        laurent_eta = laurent_at_1(chi)
    return EtaContext(
        profile=profile,
        eta=eta,
        dirichlet=chi,
        gauss_adelic=gauss,
        laurent_trivial=laurent_trivial,
        laurent_eta=laurent_eta,
        edge=edge_coefficients(chi, profile.discriminant_abs),
        zeta2=completed_zeta(2.0).real,
    )


# ---------------------------------------------------------------------------
# residual specializations and the residual term constant


@dataclass(frozen=True)
class ResidueSpecializations:
    """The four scalars of the residual constant at a choice assignment."""

    value_half_one: float  # the closed product at (1/2, 1) with the character's signs
    twisted_zero: complex  # epsilon(0) times the above
    twisted_d1: float | None  # derivatives at 0 of the trivial-character twist
    twisted_d2: float | None


def residue_value_half_one(
    rho: RhoAssignment, sign_at: Callable[[FinitePlace], int]
) -> float:
    """The closed-form product over active places at the point (1/2, 1)."""
    out = 1.0
    for place, k in rho.active():
        q = place.q
        s = sign_at(place)
        if k == 1:
            out *= (s - 1.0) * q**-0.5 / (1.0 - 1.0 / q)
        else:
            out *= (
                s**k
                * (s - 1.0)
                * (s - 1.0 / q)
                / (1.0 - q**-2)
                * math.sqrt((q + 1.0) / (q - 1.0))
                * q ** (-k / 2.0)
            )
    return out


def residue_specializations(rho: RhoAssignment, ctx: EtaContext) -> ResidueSpecializations:
    value = residue_value_half_one(rho, ctx.eta.sign_at)
    eps0 = epsilon_of_minus_z(0.0, ctx.dirichlet)
    twisted_zero = eps0 * value
    # Derivatives are consumed only through the trivial-character twist, whose
    # epsilon is identically 1 over Q.
    twisted_d1 = residue_product_d1_at_0(rho, ctx.profile)
    twisted_d2 = residue_product_d2_at_0(rho, ctx.profile)
    return ResidueSpecializations(value, twisted_zero, twisted_d1, twisted_d2)


def residual_term_constant(rho: RhoAssignment, ctx: EtaContext) -> float:
    """The scalar a(rho) entering the order -1 spectral edge constant."""
    r_f = ctx.residue
    if ctx.is_trivial:
        spec = residue_specializations(rho, ctx)
        b0 = spec.twisted_zero.real
        assert spec.twisted_d2 is not None
        return (
            -0.5 * spec.twisted_d2 * r_f * r_f
            - 2.0 * b0 * r_f * ctx.laurent_trivial.c1
            + b0 * ctx.laurent_trivial.c0**2
        )
    spec = residue_specializations(rho, ctx)
    return (spec.twisted_zero * ctx.laurent_eta.c0**2).real


# ---------------------------------------------------------------------------
# the spectral edge constants


def spectral_edge_constant(n: LevelIdeal, ctx: EtaContext, order: int, cap: int = 100_000) -> float:
    """The constant of the stated order (2, 1, 0 or -1) in the edge expansion
    of the residual-plus-degenerate spectral contribution at level n.

    Orders 2..0 weight the choice-assignment sums by the character's flat
    section and the edge Taylor data; order -1 uses the trivial section and
    the residual term constants.  Orders 2..0 enter the moment identity only
    for an everywhere-unramified character, but are defined for any context.
    """
    if order not in (2, 1, 0, -1):
        raise ValueError("order must be one of 2, 1, 0, -1")
    d_half = ctx.profile.discriminant_abs**-0.5
    terms = []
    for rho in enumerate_rho(n, cap):
        empty = 1.0 if rho.is_empty() else 0.0
        if order == -1:
            section = flat_section_at_identity(rho, lambda p: 1)
            weight = ctx.gauss_adelic.real * d_half / ctx.zeta2
            terms.append(weight * (section + empty) * residual_term_constant(rho, ctx))
            continue
        section = flat_section_at_identity(rho, ctx.eta.sign_at)
        t0, t1, t2 = edge_product_taylor(rho, ctx.eta, ctx.profile)
        e = ctx.edge
        if order == 2:
            combo = 0.5 * t0 * e.c_minus2
        elif order == 1:
            combo = e.c_minus1 * t0 + e.c_minus2 * t1
        else:
            combo = e.c_minus2 * t2 + e.c_minus1 * t1 + e.c_zero * t0
        terms.append(d_half * (section + empty) * combo)
    return math.fsum(terms)


# ---------------------------------------------------------------------------
# orbit-side kernels


def unipotent_orbit_factor(
    s_by_place: Mapping[Place, complex],
    eta_sign_at: Callable[[FinitePlace], int],
) -> complex:
    """Product over S of the orbit-side archimedean and finite factors.

    Archimedean: -(1/8) Gamma((s+1)/4)**2 / Gamma((s+3)/4)**2.  Finite:
    (1 - q**((s+1)/2))**(-1) (1 - sign * q**(-(s+1)/2))**(-1).
    """
    out = 1.0 + 0.0j
    for place in sorted(s_by_place, key=_place_sort_key):
        s = complex(s_by_place[place])
        if isinstance(place, FinitePlace):
            q = place.q
            up = q ** ((s + 1.0) / 2.0)
            if abs(1.0 - up) < 1e-13 or abs(1.0 - eta_sign_at(place) / up) < 1e-13:
                raise PoleError(f"orbit factor pole at {place.label}, s = {s}")
            out /= (1.0 - up) * (1.0 - eta_sign_at(place) / up)
        else:
            a = (s + 1.0) / 4.0
            b = (s + 3.0) / 4.0
            if a.real > 0.0 and b.real > 0.0:
                out *= -0.125 * cmath.exp(2.0 * (log_gamma(a) - log_gamma(b)))
            else:
                ratio = gamma(a) / gamma(b)
                out *= -0.125 * ratio * ratio
    return out


def _place_sort_key(place: Place):
    if isinstance(place, FinitePlace):
        return (1, place.q, place.label)
    return (0, 0, place.label)


def unipotent_orbit_constant(
    s_by_place: Mapping[Place, complex],
    a_ideal: LevelIdeal,
    laurent: LaurentData,
    profile: FieldProfile = RATIONALS,
) -> complex:
    """The additive orbit-side constant attached to an ideal and an s-tuple.

    For a character without residue (nontrivial) this collapses to the
    constant term c0 = L(1, eta), independent of the ideal and of s.  For the
    trivial character the residue multiplies a bracket with the log of
    D * N(a)**(1/2), digamma terms at the archimedean places and geometric
    series terms at the finite places.
    """
    c0, r = laurent.c0, laurent.residue
    if r == 0.0:
        return complex(c0)
    bracket: complex = math.log(profile.discriminant_abs) + 0.5 * a_ideal.log_norm()
    bracket += 0.5 * profile.degree * (EULER_GAMMA + 2.0 * math.log(2.0) - math.log(math.pi))
    for place in sorted(s_by_place, key=_place_sort_key):
        s = complex(s_by_place[place])
        if isinstance(place, FinitePlace):
            q = place.q
            up = q ** ((s + 1.0) / 2.0)
            if abs(1.0 - up) < 1e-13:
                raise PoleError(f"orbit constant pole at {place.label}, s = {s}")
            bracket += math.log(q) / (1.0 - up)
        else:
            bracket += 0.5 * (digamma((s + 1.0) / 4.0) + digamma((s + 3.0) / 4.0))
    return c0 + r * bracket


def kernel_normalization(
    n: LevelIdeal, s_places: Iterable[Place], profile: FieldProfile = RATIONALS
) -> float:
    """(-1)**|S| D**(-1/2) [K : K0(n)]**(-1); S must avoid the level support."""
    s_list = list(s_places)
    finite = {p for p in s_list if isinstance(p, FinitePlace)}
    if finite & set(n.support()):
        raise ValueError("S must be disjoint from the support of the level")
    return (-1.0) ** len(s_list) * profile.discriminant_abs**-0.5 / float(index_k0(n))


def intertwining_ratio(
    chi: DirichletCharacter | None,
    rho: RhoAssignment,
    nu: complex,
) -> complex:
    """Constant-term ratio N(f)**(-nu) prod q**(-k nu) L(1+nu)/L(1-nu).

    The L-ratio is the global finite-part ratio for chi**2; the per-place
    powers run over the active places of the assignment.  The removable
    0/0 point nu = 0 is defined as 1 (identical numerator and denominator);
    genuine zeros of the denominator are signaled.
    """
    nu = complex(nu)
    conductor = 1 if chi is None else chi.primitive_character().modulus
    for place, _ in rho.active():
        if chi is not None and chi.phase(place.q) is None:
            raise RamifiedOverlapError(
                f"character is ramified at the active place {place.label}"
            )
    power = conductor ** (-nu)
    for place, k in rho.active():
        power *= place.q ** (-k * nu)
    if abs(nu) < 1e-14:
        return power
    chi_sq = None if chi is None else chi.square().primitive_character()
    if chi_sq is None or chi_sq.modulus == 1:
        num = zeta_fin(1.0 + nu)
        den = zeta_fin(1.0 - nu)
    else:
        num = l_fin(1.0 + nu, chi_sq)
        den = l_fin(1.0 - nu, chi_sq.conjugate())
    if abs(den) < 1e-280:
        raise PoleError(f"intertwining ratio pole at nu = {nu}")
    return power * num / den


def predicted_moment_average(
    n: LevelIdeal,
    test_functions,
    eta: QuadraticCharacterProfile,
    l_one_eta: float,
    profile: FieldProfile = RATIONALS,
    tol: float = 1e-10,
):
    """Right-hand side of the moment asymptotic: the level constant times the
    pairing of the test function against the product spectral measure."""
    from .quadrature import QuadratureResult
    from .measures import spectral_pairing

    pairing = spectral_pairing(test_functions, eta.sign_at, l_one_eta, profile, tol)
    c = level_constant(n)
    return QuadratureResult(c * pairing.value, abs(c) * pairing.error_estimate, pairing.subdivisions)
