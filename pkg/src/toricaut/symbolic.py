"""Character algebra with a formal parameter s, and the certificates built
on it: the root-subgroup comorphism, regularity of its charts, the action
law, faithfulness witnesses, homogeneous derivations and the Lie-algebra
dimension count.

All coefficients are integers (binomial coefficients), so every formula
specializes to an arbitrary base field; no field arithmetic appears.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product as iproduct
from typing import Optional, Sequence

from .fan import Fan, IncompleteFanError, is_complete
from .lattice import Vec, is_primitive, pairing, vec, vec_add, vec_neg, vec_scale
from .roots import DemazureRoot, demazure_roots

#: Height bound for monomial samples in bounded certificates.  The
#: closed-form criteria are the real checks; sampling is a redundant
#: cross-validation, so a fixed small height suffices.
SAMPLE_HEIGHT = 4


class LocalizationRequiredError(ValueError):
    """Comorphism values with negative pairing require localization."""


class GradedLaurentPoly:
    """Integer-coefficient polynomial in s over the character lattice M.

    Terms map (s_exponent, m) to a nonzero coefficient; multiplication
    follows chi^m * chi^m' = chi^(m+m') and s-exponents add.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        data = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for (k, m), c in items:
            if c:
                key = (int(k), vec(m))
                c = data.get(key, 0) + c
                if c:
                    data[key] = c
                else:
                    del data[key]
        self.terms = data

    @classmethod
    def chi(cls, m: Sequence[int], coeff: int = 1, s_exp: int = 0) -> "GradedLaurentPoly":
        return cls([((s_exp, vec(m)), coeff)])

    @classmethod
    def one(cls, rank: int) -> "GradedLaurentPoly":
        return cls.chi((0,) * rank)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, GradedLaurentPoly) and self.terms == other.terms

    __hash__ = None

    def __add__(self, other: "GradedLaurentPoly") -> "GradedLaurentPoly":
        merged = dict(self.terms)
        for key, c in other.terms.items():
            merged[key] = merged.get(key, 0) + c
        return GradedLaurentPoly(merged)

    def __neg__(self) -> "GradedLaurentPoly":
        return GradedLaurentPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "GradedLaurentPoly") -> "GradedLaurentPoly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return GradedLaurentPoly({k: other * c for k, c in self.terms.items()})
        out = {}
        for (k1, m1), c1 in self.terms.items():
            for (k2, m2), c2 in other.terms.items():
                key = (k1 + k2, vec_add(m1, m2))
                out[key] = out.get(key, 0) + c1 * c2
        return GradedLaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "GradedLaurentPoly":
        if n < 0:
            raise ValueError("negative powers are not representable")
        if not self.terms:
            return GradedLaurentPoly() if n else self
        rank = len(next(iter(self.terms))[0][1])
        result = GradedLaurentPoly.one(rank)
        for _ in range(n):
            result = result * self
        return result

    def s_coefficient(self, k: int) -> dict:
        """Map m -> coefficient of s^k chi^m."""
        return {m: c for (j, m), c in self.terms.items() if j == k}

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for (k, m), c in sorted(self.terms.items()):
            s = "" if k == 0 else ("s" if k == 1 else f"s^{k}")
            bits.append(f"{c}{s}*chi{list(m)}")
        return " + ".join(bits)


@dataclass(frozen=True)
class HomogeneousDerivation:
    """Derivation of the character algebra: chi^m -> <p, m> chi^(m+e)."""

    p: Vec
    e: Vec

    def __post_init__(self):
        if not is_primitive(self.p):
            raise ValueError("derivation direction p must be primitive")


def derivation_apply(d: HomogeneousDerivation,
                     poly: GradedLaurentPoly) -> GradedLaurentPoly:
    """Term-wise application, extended linearly; s is a constant."""
    return GradedLaurentPoly(
        [((k, vec_add(m, d.e)), c * pairing(d.p, m)) for (k, m), c in poly.terms.items()])


def comorphism_apply(fan: Fan, root: DemazureRoot,
                     m: Sequence[int]) -> GradedLaurentPoly:
    """chi^m (1 + s chi^e)^<rho_e, m>, expanded as a polynomial in s.

    Requires <rho_e, m> >= 0; for negative pairing the chart needs the
    localized form, which regularity_check certifies combinatorially.
    """
    m = vec(m)
    rho = fan.rays[root.rho_e]
    k = pairing(rho, m)
    if k < 0:
        raise LocalizationRequiredError(
            f"<rho_e, m> = {k} < 0 requires localization")
    return GradedLaurentPoly(
        [((i, vec_add(m, vec_scale(root.e, i))), math.comb(k, i)) for i in range(k + 1)])


def infinitesimal_check(fan: Fan, root: DemazureRoot, m: Sequence[int]) -> bool:
    """Does the s-linear part of the comorphism equal d_{rho_e, e}(chi^m)?"""
    m = vec(m)
    lhs = comorphism_apply(fan, root, m).s_coefficient(1)
    d = HomogeneousDerivation(p=fan.rays[root.rho_e], e=root.e)
    rhs = derivation_apply(d, GradedLaurentPoly.chi(m)).s_coefficient(0)
    return lhs == rhs


def action_additivity_check(fan: Fan, root: DemazureRoot, m: Sequence[int]) -> bool:
    """Acting by s' and then by s equals acting by s + s'.

    Both sides are expanded as integer polynomials in two formal
    parameters with character monomials and compared term by term.
    """
    m = vec(m)
    rho = fan.rays[root.rho_e]
    k = pairing(rho, m)
    if k < 0:
        raise LocalizationRequiredError("additivity check needs <rho_e, m> >= 0")
    e = root.e
    two_step = {}
    for i in range(k + 1):
        for j in range(k - i + 1):
            key = (j, i, vec_add(m, vec_scale(e, i + j)))
            two_step[key] = two_step.get(key, 0) + math.comb(k, i) * math.comb(k - i, j)
    one_step = {}
    for t in range(k + 1):
        for a in range(t + 1):
            key = (a, t - a, vec_add(m, vec_scale(e, t)))
            one_step[key] = one_step.get(key, 0) + math.comb(k, t) * math.comb(t, a)
    return two_step == one_step


@lru_cache(maxsize=None)
def dual_monomials(fan: Fan, cone_idx: tuple, height: int) -> tuple:
    """Lattice points of the dual cone with coordinates bounded by height."""
    rays = [fan.rays[i] for i in cone_idx]
    box = iproduct(*(range(-height, height + 1) for _ in range(fan.rank)))
    return tuple(m for m in box if all(pairing(r, m) >= 0 for r in rays))


@dataclass(frozen=True)
class ConeChartCertificate:
    """Regularity evidence for one maximal cone.

    If the cone contains the distinguished ray, the chart is polynomial
    and the evidence is the ray-wise inequalities.  Otherwise the chart
    lives on the cone sigma' spanned by rho_e and the e-orthogonal face,
    which must itself belong to the fan, and each sampled monomial gets an
    explicit shift exponent moving it into the cone's dual.
    """

    cone: tuple
    contains_distinguished_ray: bool
    ray_inequalities_ok: bool
    sigma_prime: Optional[tuple]
    sigma_prime_in_fan: Optional[bool]
    samples_checked: int
    samples_ok: bool
    max_shift: int

    @property
    def ok(self) -> bool:
        if not self.ray_inequalities_ok:
            return False
        if self.contains_distinguished_ray:
            return True
        return bool(self.sigma_prime_in_fan) and self.samples_ok


@dataclass(frozen=True)
class RegularityCertificate:
    root: DemazureRoot
    entries: tuple

    @property
    def ok(self) -> bool:
        return all(entry.ok for entry in self.entries)


def regularity_check(fan: Fan, root: DemazureRoot,
                     height: int = SAMPLE_HEIGHT) -> RegularityCertificate:
    """Certify that the root-subgroup action is regular on every chart."""
    fan.require_valid()
    if not is_complete(fan):
        raise IncompleteFanError("regularity certificates need a complete fan")
    e = root.e
    entries = []
    for cone_idx in fan.max_cones:
        if root.rho_e in cone_idx:
            ok = all(pairing(fan.rays[i], e) >= 0
                     for i in cone_idx if i != root.rho_e)
            entries.append(ConeChartCertificate(
                cone=cone_idx, contains_distinguished_ray=True,
                ray_inequalities_ok=ok, sigma_prime=None, sigma_prime_in_fan=None,
                samples_checked=0, samples_ok=True, max_shift=0))
            continue
        values = {i: pairing(fan.rays[i], e) for i in cone_idx}
        ok = all(v >= 0 for v in values.values())
        sigma_prime = tuple(sorted([root.rho_e] + [i for i, v in values.items() if v == 0]))
        in_fan = sigma_prime in fan.all_cones
        samples_ok = True
        max_shift = 0
        samples = dual_monomials(fan, sigma_prime, height) if in_fan else ()
        for m in samples:
            shift = max([0] + [-pairing(fan.rays[i], m)
                               for i, v in values.items() if v > 0])
            max_shift = max(max_shift, shift)
            shifted = vec_add(m, vec_scale(e, shift))
            if not all(pairing(fan.rays[i], shifted) >= 0 for i in cone_idx):
                samples_ok = False
        entries.append(ConeChartCertificate(
            cone=cone_idx, contains_distinguished_ray=False,
            ray_inequalities_ok=ok, sigma_prime=sigma_prime,
            sigma_prime_in_fan=in_fan, samples_checked=len(samples),
            samples_ok=samples_ok, max_shift=max_shift))
    return RegularityCertificate(root=root, entries=tuple(entries))


@dataclass(frozen=True)
class WitnessMonomial:
    """Faithfulness witness: m0 in the dual of a chart containing rho_e
    with <rho_e, m0> = 1, so the comorphism moves chi^m0 by s*chi^(m0+e)."""

    m0: Vec
    cone: tuple
    witness_s_exp: int
    witness_character: Vec


def faithfulness_check(fan: Fan, root: DemazureRoot,
                       max_radius: int = 16) -> WitnessMonomial:
    """Find the canonical (smallest) witness monomial for the root.

    Candidates range over the duals of all maximal cones containing
    rho_e; the winner minimizes (L1 norm, lexicographic order).
    Existence is a theorem (rho_e is primitive); not finding one within
    the search radius signals a bug and raises.
    """
    fan.require_valid()
    charts = [c for c in fan.max_cones if root.rho_e in c]
    if not charts:
        raise ValueError("distinguished ray lies in no maximal cone")
    rho = fan.rays[root.rho_e]

    def candidates(radius):
        box = iproduct(*(range(-radius, radius + 1) for _ in range(fan.rank)))
        for m in box:
            if pairing(rho, m) != 1:
                continue
            for cone_idx in charts:
                if all(pairing(fan.rays[i], m) >= 0 for i in cone_idx):
                    yield (sum(abs(x) for x in m), m, cone_idx)
                    break

    radius = 1
    while radius <= max_radius:
        found = sorted(candidates(radius))
        if found:
            norm = found[0][0]
            if norm > radius:
                found = sorted(candidates(norm))
            _, m0, cone_idx = found[0]
            return WitnessMonomial(
                m0=vec(m0), cone=cone_idx, witness_s_exp=1,
                witness_character=vec_add(m0, root.e))
        radius *= 2
    raise RuntimeError("no faithfulness witness found; this indicates a bug")


@dataclass(frozen=True)
class ClassificationResult:
    """Whether d_{p,e} preserves every cone algebra of the fan."""

    p: Vec
    e: Vec
    preserved: bool
    reason: str
    root: Optional[DemazureRoot]
    sampler_preserved: bool
    sampler_witness: Optional[tuple]

    @property
    def agrees_with_sampler(self) -> bool:
        return self.preserved == self.sampler_preserved


def derivation_classification_check(fan: Fan, p: Sequence[int], e: Sequence[int],
                                    height: int = SAMPLE_HEIGHT) -> ClassificationResult:
    """Closed-form criterion plus a bounded brute-force cross-check.

    The derivation d_{p,e} preserves every cone algebra iff e = 0 (torus
    direction) or e is a root with p = +/- rho_e.  The sampler re-tests
    the defining condition <rho, m+e> >= 0 on height-bounded monomials m
    in each cone's dual with <p, m> != 0.
    """
    p, e = vec(p), vec(e)
    if not is_primitive(p):
        raise ValueError("p must be primitive")
    roots_by_e = {r.e: r for r in demazure_roots(fan)}
    if not any(e):
        preserved, reason, root = True, "degree_zero_torus_direction", None
    elif e not in roots_by_e:
        preserved, reason, root = False, "degree_is_not_a_root", None
    else:
        root = roots_by_e[e]
        rho = fan.rays[root.rho_e]
        if p in (rho, vec_neg(rho)):
            preserved, reason = True, "root_derivation"
        else:
            preserved, reason = False, "direction_not_distinguished_ray"
    witness = None
    for cone_idx in fan.max_cones:
        rays = [fan.rays[i] for i in cone_idx]
        for m in dual_monomials(fan, cone_idx, height):
            if pairing(p, m) == 0:
                continue
            shifted = vec_add(m, e)
            bad = next((r for r in rays if pairing(r, shifted) < 0), None)
            if bad is not None:
                witness = (cone_idx, m, bad)
                break
        if witness:
            break
    return ClassificationResult(
        p=p, e=e, preserved=preserved, reason=reason, root=root,
        sampler_preserved=witness is None, sampler_witness=witness)


def lie_dimension(fan: Fan) -> int:
    """rank(N) + number of roots: the torus directions plus one
    independent derivation per root degree."""
    fan.require_valid()
    if not is_complete(fan):
        raise IncompleteFanError("Lie dimension is defined for complete fans")
    return fan.rank + len(demazure_roots(fan))
