"""Genus-2 curves over Q with (period, index) in {(1,1), (2,2), (1,2)} and a degree-2 map to E."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import poly
from .arith import (
    Modulus,
    Place,
    as_fraction,
    factorize,
    format_rational,
    legendre,
    prime_in_progression,
)
from .curves import EllipticModel, HyperellipticModel, elliptic_discriminant, genus_of_model
from .divisors import Case3Certificate, verify_case3_identity
from .local import (
    INFINITY_RATIONAL,
    DeficiencyReport,
    PlaceCertificate,
    deficiency_at_place,
    deficiency_report,
)
from .tower import DegenerateExtension, TowerField, express_root, tower_extend

SMALL_RESIDUE_PRIMES = (2, 3, 5, 7, 11, 13)
S_STRENGTHENING = (
    "S also contains the odd primes dividing b - c, so pi cannot divide disc(E) "
    "and E has good reduction at pi"
)

# (case) -> (period, index)
CASE_INVARIANTS = {1: (1, 1), 2: (2, 2), 3: (1, 2)}


class ForgeError(RuntimeError):
    pass


@dataclass(frozen=True)
class ForgeParams:
    E: EllipticModel
    case: int
    a: Fraction | None = None
    modulus: Modulus | None = None
    pi: int | None = None
    alpha: int | None = None
    tower: TowerField | None = None

    def __post_init__(self):
        if self.case not in CASE_INVARIANTS:
            raise ValueError(f"case must be 1, 2 or 3, not {self.case}")
        if self.case == 1:
            if self.a is None or self.a in (0, self.E.b, self.E.c):
                raise ForgeError(f"degenerate parameter a = {self.a}: f would not be squarefree")
            return
        M = self.modulus.M
        if self.pi % M != 1 % M:
            raise ForgeError(f"pi = {self.pi} is not 1 mod {M}")
        if legendre(self.alpha, self.pi) != -1:
            raise ForgeError(f"alpha = {self.alpha} is not a nonresidue mod pi = {self.pi}")
        if elliptic_discriminant(self.E) % self.pi == 0:
            raise ForgeError(f"pi = {self.pi} divides disc(E)")

    def to_json(self) -> dict:
        out: dict[str, Any] = {"E": self.E.to_json(), "case": self.case}
        if self.a is not None:
            out["a"] = format_rational(self.a)
        if self.modulus is not None:
            out["modulus"] = {
                "M": str(self.modulus.M),
                "factors": [[str(p), e] for p, e in self.modulus.factors],
                "real_sign_condition": self.modulus.real_sign_condition,
            }
            out["pi"] = str(self.pi)
            out["alpha"] = str(self.alpha)
        if self.tower is not None:
            out["tower"] = self.tower.to_json()
        return out


@dataclass
class Genus2Curve:
    model: HyperellipticModel
    params: ForgeParams
    claimed_period: int
    claimed_index: int
    certificates: dict[str, Any] = field(default_factory=dict)
    deviations: list[str] = field(default_factory=list)

    def __post_init__(self):
        if genus_of_model(self.model) != 2:
            raise ForgeError("model does not have genus 2")
        if (self.claimed_period, self.claimed_index) != CASE_INVARIANTS[self.params.case]:
            raise ForgeError("claimed invariants do not match the case")


def build_modulus(E: EllipticModel) -> Modulus:
    """2^3 * 3*5*7*11*13 times every odd prime > 13 dividing b*c*(b - c), with positivity."""
    factors = {2: 3}
    for p in SMALL_RESIDUE_PRIMES[1:]:
        factors[p] = 1
    for p in factorize(abs(E.b * E.c * (E.b - E.c))):
        if p > 13:
            factors[p] = 1
    return Modulus.from_dict(factors, real_sign_condition=True)


def find_pi(m: Modulus) -> int:
    return prime_in_progression(1, m)


def find_alpha(pi: int) -> int:
    if pi == 2:
        raise ValueError("pi must be odd")
    alpha = 2
    while legendre(alpha, pi) != -1:
        alpha += 1
    return alpha


def map_to_elliptic(params: ForgeParams) -> dict[str, str]:
    """The degree-2 map Y -> E as substitution formulas."""
    if params.case == 1:
        return {"x": f"z^2 + {format_rational(params.a)}", "y": "y"}
    return {"x": f"(z^2 - {params.alpha}) / {params.pi}", "y": "y"}


def check_map_identity(model: HyperellipticModel, params: ForgeParams) -> bool:
    """E's right-hand side composed with x(z) must reproduce f."""
    E = params.E
    if params.case == 1:
        x = [params.a, Fraction(0), Fraction(1)]
    else:
        x = [Fraction(-params.alpha, params.pi), Fraction(0), Fraction(1, params.pi)]
    rhs = poly.mul(poly.mul(x, poly.sub(x, [E.b])), poly.sub(x, [E.c]))
    target = [model.field(c) for c in rhs] if model.field.depth else rhs
    return tuple(target) == model.coeffs


def default_case1_a(E: EllipticModel) -> Fraction:
    a = -1
    while a in (E.b, E.c):
        a -= 1
    return Fraction(a)


def case1_model(E: EllipticModel, a: Fraction) -> HyperellipticModel:
    return HyperellipticModel.from_factors(1, [[a, 0, 1], [a - E.b, 0, 1], [a - E.c, 0, 1]], label="case1")


def build_case1(E: EllipticModel, a=None) -> Genus2Curve:
    a = default_case1_a(E) if a is None else as_fraction(a)
    params = ForgeParams(E, 1, a=a)
    model = case1_model(E, a)
    real = PlaceCertificate(Place.real(), INFINITY_RATIONAL, False, {"leading_coefficient": "1"})
    certs = {
        "infinity": [real.to_json()],
        "residual_claim": "leading coefficient 1 is a square at every place: both points at infinity are rational",
        "map": map_to_elliptic(params),
        "map_identity": check_map_identity(model, params),
    }
    return Genus2Curve(model, params, 1, 1, certs)


def case2_params(E: EllipticModel, case: int = 2) -> ForgeParams:
    m = build_modulus(E)
    pi = find_pi(m)
    return ForgeParams(E, case, modulus=m, pi=pi, alpha=find_alpha(pi))


def case2_model(params: ForgeParams) -> HyperellipticModel:
    E, pi, alpha = params.E, params.pi, params.alpha
    return HyperellipticModel.from_factors(
        Fraction(1, pi**3),
        [[-alpha, 0, 1], [-alpha - pi * E.b, 0, 1], [-alpha - pi * E.c, 0, 1]],
        label="case2",
    )


def build_case2(E: EllipticModel, bound: int = 1000, precision: int = 3) -> Genus2Curve:
    params = case2_params(E)
    model = case2_model(params)
    report = deficiency_report(model, params, bound, precision)
    deficient = report.deficient_places
    if deficient != [Place(params.pi)]:
        raise ForgeError(f"expected exactly one deficient place at {params.pi}, found {deficient}")
    certs = {
        "deficiency_report": report,
        "map": map_to_elliptic(params),
        "map_identity": check_map_identity(model, params),
        "period_argument": (
            "exactly one deficient place (an odd number), so the period does not divide g - 1 = 1; "
            "P | I | 2 forces P = 2"
        ),
        "index_argument": (
            f"no point over Q_{params.pi} or any odd-degree extension, so I is even; "
            "I | 2g - 2 = 2 forces I = 2"
        ),
    }
    return Genus2Curve(model, params, 2, 2, certs, [S_STRENGTHENING])


@dataclass
class Case3Tower:
    K1: TowerField
    K2: TowerField
    roots: tuple
    generator: str
    radicands: tuple[Fraction, Fraction]


def case3_tower(params: ForgeParams) -> Case3Tower:
    E, pi, alpha = params.E, params.pi, params.alpha
    r1 = Fraction(alpha + pi * E.b, alpha)
    r2 = Fraction(alpha + pi * E.c, alpha)
    Q = TowerField.rationals()
    try:
        Ka = tower_extend(Q, r1, "s1")
        K1 = tower_extend(Ka, r2, "s2")
    except DegenerateExtension as exc:
        raise ForgeError(f"degenerate tower K': {exc}") from exc
    try:
        K2 = tower_extend(K1, alpha, "t")
    except DegenerateExtension as exc:
        raise ForgeError(f"degenerate tower K'': {exc}") from exc
    t, s1, s2 = K2.gen("t"), K2.gen("s1"), K2.gen("s2")
    roots = (t, t * s1, t * s2)
    # the three square roots generate the same quadratic extension of K'
    for target in (alpha * (alpha + pi * E.b), alpha * (alpha + pi * E.c)):
        if express_root(K1, target) is None:
            raise ForgeError(f"{target} is not a square in K'")
    for r, sq in zip(roots, (alpha, alpha + pi * E.b, alpha + pi * E.c)):
        if r * r != sq:
            raise ForgeError("root bookkeeping failed")
    return Case3Tower(K1, K2, roots, "t", (r1, r2))


def split_certificate(params: ForgeParams, radicands) -> dict:
    pi = params.pi
    out = []
    for r in radicands:
        res = r.numerator * pow(r.denominator, -1, pi) % pi
        if res != 1 or legendre(res, pi) != 1:
            raise ForgeError(f"radicand {r} is not 1 mod pi")
        out.append({"radicand": format_rational(r), "mod_pi": res, "legendre": 1})
    return {"radicands": out, "conclusion": f"{pi} splits completely in K'; each completion of K' above it is Q_{pi}"}


def build_case3(E: EllipticModel) -> Genus2Curve:
    params0 = case2_params(E, case=3)
    tw = case3_tower(params0)
    params = ForgeParams(E, 3, modulus=params0.modulus, pi=params0.pi, alpha=params0.alpha, tower=tw.K2)
    model = case2_model(params)
    split = split_certificate(params, tw.radicands)
    pi_cert = deficiency_at_place(model, params, Place(params.pi))
    lead = model.lead
    linear = []
    for r in tw.roots:
        linear += [[-r, tw.K2(1)], [r, tw.K2(1)]]
    big = HyperellipticModel.from_factors(lead, linear, tw.K2, label="case3")
    if big.coeffs != tuple(tw.K2(c) for c in model.coeffs):
        raise ForgeError("factorization over K'' does not reproduce f")
    div_cert: Case3Certificate = verify_case3_identity(big, tw.roots, tw.generator)
    if not div_cert.holds:
        raise ForgeError("divisor identity div(y / prod(z - r)) = sigma(D) - D failed")
    certs = {
        "tower_K1": tw.K1.to_json(),
        "tower_K2": tw.K2.to_json(),
        "split": split,
        "pi_place": pi_cert,
        "divisor_certificate": div_cert,
        "map": map_to_elliptic(params),
        "map_identity": check_map_identity(model, params),
        "index_argument": "no point over the completions of K' above pi (each is Q_pi) or their odd-degree extensions; I = 2",
        "period_argument": "D has degree 3 and its class is K'-rational; the canonical class has degree 2; P | gcd(3, 2) = 1",
    }
    return Genus2Curve(model, params, 1, 2, certs, [S_STRENGTHENING])


def forge(case: int, E: EllipticModel, a=None, bound: int = 1000) -> Genus2Curve:
    if case == 1:
        return build_case1(E, a)
    if case == 2:
        return build_case2(E, bound)
    if case == 3:
        return build_case3(E)
    raise ValueError(f"unknown case {case}")


def report_of(curve: Genus2Curve) -> DeficiencyReport | None:
    return curve.certificates.get("deficiency_report")
