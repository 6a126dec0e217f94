"""Local points on hyperelliptic models and per-place deficiency certificates."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, NamedTuple, Sequence

from . import kernels, poly
from .arith import (
    Place,
    as_fraction,
    format_rational,
    is_square_local,
    legendre,
    primes_up_to,
    sqrt_mod_prime,
    sqrt_unit_padic,
    val,
)
from .curves import HyperellipticModel, elliptic_discriminant, reduce_mod_p

POINT_FOUND = "point_found"
INFINITY_RATIONAL = "infinity_rational"
EMPTY_BY_VALUATION = "empty_by_valuation"
EMPTY_BY_PADIC_SEARCH = "empty_by_padic_search"


class CertificateError(RuntimeError):
    """A hypothesis needed for a local certificate failed."""

    def __init__(self, place: Place, hypothesis: str, detail: str = ""):
        msg = f"at place {place}: hypothesis '{hypothesis}' failed"
        super().__init__(msg + (f" ({detail})" if detail else ""))
        self.place = place
        self.hypothesis = hypothesis


# -- finite-field counting --------------------------------------------------


def weil_lower_bound(q: int) -> int:
    """ceil(q + 1 - 4 sqrt(q)), exactly."""
    if q < 2:
        raise ValueError("q must be at least 2")
    return q + 1 - math.isqrt(16 * q)


def count_affine_points(fbar: Sequence[int], p: int) -> tuple[int, int]:
    """(total, smooth) affine points on y^2 = fbar(z) over F_p."""
    if not poly.trim_mod(fbar, p):
        raise ValueError("fbar must be nonzero mod p")
    return kernels.count_points(list(fbar), p)


# -- Hensel lifting ---------------------------------------------------------


class LocalPoint(NamedTuple):
    z: int
    y: int
    p: int
    k: int

    def check(self, f: Sequence) -> bool:
        mod = self.p**self.k
        return (self.y * self.y - _eval_mod(f, self.z, mod)) % mod == 0


def _int_mod(c, mod: int) -> int:
    c = as_fraction(c)
    return c.numerator * pow(c.denominator, -1, mod) % mod


def _eval_mod(f: Sequence, z: int, mod: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * z + _int_mod(c, mod)) % mod
    return acc


def hensel_lift(f: Sequence, p: int, seed: tuple[int, int], k: int) -> LocalPoint:
    """Lift a smooth point of y^2 = f(z) mod p to one mod p^k (f p-integral)."""
    z0, y0 = seed
    if k < 1:
        raise ValueError("precision must be positive")
    df = poly.deriv([as_fraction(c) for c in f])
    if (y0 * y0 - _eval_mod(f, z0, p)) % p:
        raise ValueError("seed does not lie on the curve mod p")
    mod = p**k
    if y0 % p:
        if p == 2:
            c = _eval_mod(f, z0, 8)
            if (y0 * y0 - c) % 8:
                raise ValueError("p = 2 lift needs y0^2 = f(z0) mod 8")
            y = sqrt_unit_padic(_eval_mod(f, z0, 2 ** (k + 3)), 2, k)
            return LocalPoint(z0 % mod, y % mod, p, k)
        c = _eval_mod(f, z0, mod)
        y, prec = y0 % p, 1
        while prec < k:
            prec = min(2 * prec, k)
            m = p**prec
            y = (y - (y * y - c) * pow(2 * y, -1, m)) % m
        return LocalPoint(z0 % mod, y % mod, p, k)
    if _eval_mod(df, z0, p) == 0:
        raise ValueError(f"seed ({z0}, {y0}) is singular mod {p}")
    target = y0 * y0
    z, prec = z0 % p, 1
    while prec < k:
        prec = min(2 * prec, k)
        m = p**prec
        z = (z - (_eval_mod(f, z, m) - target) * pow(_eval_mod(df, z, m), -1, m)) % m
    return LocalPoint(z % mod, y0 % mod, p, k)


def infinity_rational(H: HyperellipticModel, v: Place) -> bool:
    """Whether the points at infinity of a degree 5/6 model are defined over Q_v."""
    if H.degree == 5:
        return True
    if H.degree != 6:
        raise ValueError("infinity_rational needs deg f in {5, 6}")
    return is_square_local(H.leading, v)


# -- Q_p decision procedure ---------------------------------------------------


@dataclass
class QpResult:
    exists: bool
    evidence: dict[str, Any]

    def __bool__(self) -> bool:
        return self.exists


def _ival(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def padic_integral(f: Sequence) -> list[int]:
    """d^2 f as integers, d the least common denominator (an even rescaling of y)."""
    fr = [as_fraction(c) for c in f]
    d = 1
    for c in fr:
        d = math.lcm(d, c.denominator)
    return [int(c * d * d) for c in fr]


def _chart_polys(F: list[int]) -> list[tuple[str, list[int], int]]:
    n = len(F) - 1
    even = n + (n % 2)
    return [("z", F, 0), ("w", poly.reverse(F, even) or [0], 1)]


def _unit_square(u: int, p: int) -> bool:
    if p == 2:
        return u % 8 == 1
    return legendre(u, p) == 1


def _square_witness(F: list[int], p: int, z: int, chart: str, extra: int = 8) -> dict:
    value = poly.evaluate(F, z)
    v = _ival(value, p)
    N = v + extra
    u = value // p**v
    s = sqrt_unit_padic(u % p ** (extra + 3), p, extra)
    y = p ** (v // 2) * s % p**N
    return {"chart": chart, "z": str(z % p**N), "y": str(y), "precision": N}


def _root_witness(F: list[int], p: int, a: int, chart: str, extra: int = 8) -> dict:
    # Newton converges p-adically from a because v(F(a)) > 2 v(F'(a)).
    dF = poly.deriv(F)
    z = a
    N = _ival(poly.evaluate(F, a), p) + extra
    mod = p**N
    while True:
        fz = poly.evaluate(F, z)
        if fz % mod == 0:
            break
        d = poly.evaluate(dF, z)
        vd = _ival(d, p)
        z = (z - (fz // p**vd) * pow(d // p**vd, -1, mod)) % mod
    return {"chart": chart, "z": str(z % mod), "y": "0", "precision": N}


def verify_witness(f: Sequence, p: int, evidence: dict) -> bool:
    """Check y^2 = F(z) mod p^precision in the recorded chart of the integral model."""
    F = padic_integral(f)
    charts = {name: G for name, G, _ in _chart_polys(F)}
    G = charts[evidence["chart"]]
    z, y = int(evidence["z"]), int(evidence["y"])
    if evidence["chart"] == "w" and z % p:
        return False
    if evidence["precision"] == "exact":
        return y == 0 and poly.evaluate(G, z) == 0
    mod = p ** int(evidence["precision"])
    return (y * y - poly.evaluate(G, z)) % mod == 0


def _bruteforce_threshold() -> int:
    return 1 << 12


def qp_points_exist(f, p: int, max_depth: int = 64) -> QpResult:
    """Decide whether y^2 = f(z) has a Q_p-point (affine or at infinity).

    z ranges over Z_p in the chart ``z`` and 1/z over pZ_p in the reversed chart
    ``w``. A disc a + p^k Z_p is settled by the Taylor expansion of f there:
    a dominant constant term fixes the square class on the whole disc, a Hensel
    root of f gives a Weierstrass point, and otherwise only the residues where
    the reduced expansion vanishes are subdivided (all residues when p = 2).
    """
    if isinstance(f, HyperellipticModel):
        f = f.coeffs
    fr = poly.trim([as_fraction(c) for c in f])
    if len(fr) < 2:
        raise ValueError("f must be nonconstant")
    if len(poly.gcd(fr, poly.deriv(fr))) > 1:
        raise ValueError("f is not squarefree")
    F = padic_integral(fr)
    trace: list[dict] = []
    discs = 0
    deepest = 0
    for chart, G, k0 in _chart_polys(F):
        stack = [(0, k0)]
        while stack:
            a, k = stack.pop()
            discs += 1
            deepest = max(deepest, k)
            if k > max_depth:
                raise RuntimeError(f"disc subdivision exceeded depth {max_depth} at {a} + {p}^{k}")
            T = poly.taylor_shift(G, a, p**k)
            if T[0] == 0:
                return QpResult(True, {"chart": chart, "z": str(a), "y": "0", "precision": "exact",
                                       "reason": "root of f", "discs": discs})
            v0 = _ival(T[0], p)
            vs = [_ival(c, p) for c in T[1:] if c]
            vmin = min(vs) if vs else math.inf
            unit = T[0] // p**v0
            if v0 < vmin:
                if v0 % 2:
                    trace.append({"chart": chart, "center": str(a), "k": k, "reason": "odd valuation", "v": v0})
                    continue
                if p != 2 or vmin - v0 >= 3:
                    if _unit_square(unit, p):
                        w = _square_witness(G, p, a, chart)
                        w.update(reason="square value", discs=discs)
                        return QpResult(True, w)
                    trace.append({"chart": chart, "center": str(a), "k": k, "reason": "nonsquare unit", "v": v0})
                    continue
            d1 = poly.evaluate(poly.deriv(G), a)
            if d1:
                vd = _ival(d1, p)
                if v0 > 2 * vd and v0 - vd >= k:
                    w = _root_witness(G, p, a, chart)
                    w.update(reason="Hensel root of f", discs=discs)
                    return QpResult(True, w)
            step = p**k
            if p == 2:
                stack.extend([(a + step, k + 1), (a, k + 1)])
                continue
            wmin = min(v0, vmin)
            h = [c // p**wmin for c in T]
            hbar = poly.trim_mod(h, p)
            if len(hbar) > 1 and p <= _bruteforce_threshold():
                rts = kernels.roots(hbar, p)
            else:
                rts = poly.roots_mod(hbar, p)
            if wmin % 2 == 0:
                j = kernels.first_square_value(hbar, p)
                if j >= 0:
                    w = _square_witness(G, p, a + step * j, chart)
                    w.update(reason="square value", discs=discs)
                    return QpResult(True, w)
            trace.append({"chart": chart, "center": str(a), "k": k, "reason": "split",
                          "w": wmin, "roots": [str(r) for r in rts]})
            stack.extend((a + step * j, k + 1) for j in reversed(rts))
    return QpResult(False, {"discs": discs, "max_depth": deepest, "trace": trace})


# -- certificates -----------------------------------------------------------


@dataclass
class PlaceCertificate:
    place: Place
    verdict: str
    deficient: bool
    data: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict in (POINT_FOUND, INFINITY_RATIONAL) and self.deficient:
            raise ValueError("a place with a local point is not deficient")
        if self.deficient and not self.data.get("odd_degree_extensions"):
            raise ValueError("deficiency needs the odd-degree-extension argument")

    def to_json(self) -> dict:
        return {"place": self.place.to_json(), "verdict": self.verdict, "deficient": self.deficient,
                "data": self.data}

    @classmethod
    def from_json(cls, d: dict) -> PlaceCertificate:
        return cls(Place.from_json(d["place"]), d["verdict"], d["deficient"], d["data"])


@dataclass
class DeficiencyReport:
    model: HyperellipticModel
    certificates: list[PlaceCertificate]
    residual_claim: str
    partition: dict[str, list[str]] = field(default_factory=dict)

    @property
    def deficient_places(self) -> list[Place]:
        return [c.place for c in self.certificates if c.deficient]

    def to_json(self) -> dict:
        return {
            "certificates": [c.to_json() for c in self.certificates],
            "residual_claim": self.residual_claim,
            "partition": self.partition,
            "deficient_places": [p.to_json() for p in self.deficient_places],
        }


def _cert_bad_place(model, params, v: Place) -> PlaceCertificate:
    if v.is_real and params.pi <= 0:
        raise CertificateError(v, "pi > 0 at the real place")
    if not infinity_rational(model, v):
        raise CertificateError(v, "leading coefficient is a square in Q_v", f"lc = {model.leading}")
    data = {"leading_coefficient": format_rational(model.leading)}
    if not v.is_real:
        data["pi_mod_p_power"] = str(params.pi % v.p ** params.modulus.multiplicity(v.p))
    return PlaceCertificate(v, INFINITY_RATIONAL, False, data)


def _cert_pi_place(model, params, v: Place) -> PlaceCertificate:
    pi, alpha, E = params.pi, params.alpha, params.E
    hyps = []
    if elliptic_discriminant(E) % pi == 0:
        raise CertificateError(v, "good reduction of E at pi")
    hyps.append(f"good reduction of E at {pi}: {pi} does not divide disc(E) = {elliptic_discriminant(E)}")
    if legendre(alpha, pi) != -1:
        raise CertificateError(v, "alpha nonresidue mod pi", f"legendre({alpha}, {pi}) = {legendre(alpha, pi)}")
    hyps.append(f"alpha nonresidue: legendre({alpha}, {pi}) = -1")
    e = val(model.leading, pi)
    if e % 2 == 0:
        raise CertificateError(v, "odd pi-scaling exponent", f"val(lc) = {e}")
    hyps.append(f"pi-scaling exponent {e} is odd")
    cross = qp_points_exist(model.coeffs, pi)
    if cross.exists:
        raise CertificateError(v, "independent Q_p search finds no point", str(cross.evidence))
    data = {
        "hypotheses": hyps,
        "odd_degree_extensions": True,
        "padic_cross_check": {"exists": False, "discs": cross.evidence["discs"]},
    }
    return PlaceCertificate(v, EMPTY_BY_VALUATION, True, data)


def _cert_good_place(model, params, v: Place, precision: int = 3) -> PlaceCertificate:
    p = v.p
    if p < 17:
        raise CertificateError(v, "residue field has at least 17 elements")
    fbar, reduced, scale_k = reduce_mod_p(model, p)
    if not reduced:
        raise CertificateError(v, "reduction is reduced (f mod p nonzero)")
    lower = weil_lower_bound(p)
    if lower < 2:
        raise CertificateError(v, "Weil lower bound at least 2")
    total, smooth = count_affine_points(fbar, p)
    singular = total - smooth
    f = [c * Fraction(p) ** (2 * scale_k) for c in model.coeffs]
    data: dict[str, Any] = {"q": p, "weil_lower_bound": lower, "affine_points": total,
                            "smooth_affine_points": smooth, "singular_points": singular}
    if singular > 1:
        data["anomaly"] = "more than one singular point on the reduction"
    chart, g = "z", list(fbar)
    z0 = kernels.first_smooth_z(g, p)
    if z0 < 0:
        chart, g = "w", poly.trim_mod(poly.reverse(list(fbar), 6), p)
        f = poly.reverse(f, 6)
        z0 = kernels.first_smooth_z(g, p)
        if z0 < 0:
            raise CertificateError(v, "a smooth point exists on the reduction")
    y0 = sqrt_mod_prime(poly.evaluate(g, z0) % p, p)
    pt = hensel_lift(f, p, (z0, y0), precision)
    if not pt.check(f):
        raise CertificateError(v, "lifted point satisfies the equation")
    data["witness"] = {"chart": chart, "z": str(pt.z), "y": str(pt.y), "precision": pt.k}
    return PlaceCertificate(v, POINT_FOUND, False, data)


def deficiency_at_place(model: HyperellipticModel, params, v: Place, precision: int = 3) -> PlaceCertificate:
    """Certificate for the Case 2/3 model at one place of Q.

    ``params`` carries ``E``, ``pi``, ``alpha`` and ``modulus``.
    """
    if v.is_real or params.modulus.multiplicity(v.p):
        return _cert_bad_place(model, params, v)
    if v.p == params.pi:
        return _cert_pi_place(model, params, v)
    return _cert_good_place(model, params, v, precision)


def deficiency_report(model: HyperellipticModel, params, bound: int = 1000, precision: int = 3) -> DeficiencyReport:
    bad = [Place.real()] + [Place(p) for p in params.modulus.primes]
    good = [Place(p) for p in primes_up_to(bound) if not params.modulus.multiplicity(p) and p != params.pi]
    certs = [deficiency_at_place(model, params, v, precision) for v in bad]
    certs += [deficiency_at_place(model, params, v, precision) for v in good]
    certs.append(deficiency_at_place(model, params, Place(params.pi), precision))
    residual = (
        f"finite places p > {bound}, p != {params.pi}, p not dividing {params.modulus.M}: "
        "f mod p is nonzero because pi*b and pi*c are units, q >= 17 gives q + 1 - 4 sqrt(q) >= 2, "
        "the reduction has at most one singular point, so a smooth point exists and lifts by Hensel"
    )
    partition = {
        "modulus": [v.to_json() for v in bad],
        "pi": [str(params.pi)],
        "good_enumerated": [v.to_json() for v in good],
    }
    return DeficiencyReport(model, certs, residual, partition)
