"""Divisibility calculus for (genus, period, index) and the higher-genus derivation.

Traces are lists of :class:`TraceStep` whose operands are small integer
expressions over named quantities (``P_Y``, ``m*I_hat`` ...). They are graded by
:mod:`pix.tracecheck`, which shares no code with this module.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

# quantity names used in traces
NAMES = {
    "P_hat": "P^", "I_hat": "I^", "ell": "l", "m": "m", "d": "deg(Y -> Y')",
    "P_X": "P(X)", "I_X": "I(X)", "P_Yp": "P(Y')", "I_Yp": "I(Y')", "g_Yp": "g(Y')",
    "P_Y": "P(Y)", "I_Y": "I(Y)", "g_Y": "g(Y)",
}


class InadmissibleTriple(ValueError):
    def __init__(self, failed: list[str]):
        super().__init__("inadmissible triple: " + "; ".join(failed))
        self.failed = failed


class UnsupportedTriple(ValueError):
    pass


@dataclass(frozen=True)
class Triple:
    g: int
    P: int
    I: int

    def __post_init__(self):
        if self.g < 0 or self.P < 1 or self.I < 1:
            raise ValueError(f"bad triple {self}")


def _divides(a: int, b: int) -> bool:
    return b == 0 if a == 0 else b % a == 0


def is_admissible(t: Triple) -> tuple[bool, list[str]]:
    """Lichtenbaum's global conditions plus I | 2(g-1); returns (ok, violated conditions)."""
    g, P, I = t.g, t.P, t.I
    failed = []
    if not _divides(P, I):
        failed.append("P | I")
    if not _divides(I, 2 * P * P):
        failed.append("I | 2P^2")
    canon = 2 * (g - 1)
    if not _divides(I, canon):
        failed.append("I | 2(g-1)")
    else:
        ratio_even = (canon // I) % 2 == 0
        if (ratio_even or P % 2 == 0) and not _divides(I, P * P):
            failed.append("2(g-1)/I or P even => I | P^2")
    return not failed, failed


def is_locally_admissible(t: Triple) -> bool:
    """Conditions over a finite extension of Q_p: P | g-1, I | 2P, and I = P when (g-1)/P is even."""
    if t.g < 1:
        raise ValueError("local conditions need g >= 1")
    g1 = t.g - 1
    if not _divides(t.P, g1) or not _divides(t.I, 2 * t.P):
        return False
    if (g1 // t.P) % 2 == 0 and t.I != t.P:
        return False
    return True


@dataclass(frozen=True)
class MapdivConstraints:
    """P(C') | P(C) | d P(C') and I(C') | I(C) | d I(C') for a degree-d map C -> C'."""

    period_target: int
    index_target: int
    d: int

    @property
    def period_interval(self) -> tuple[int, int]:
        return self.period_target, self.d * self.period_target

    @property
    def index_interval(self) -> tuple[int, int]:
        return self.index_target, self.d * self.index_target

    def allows(self, period: int, index: int) -> bool:
        lo, hi = self.period_interval
        ilo, ihi = self.index_interval
        return _divides(lo, period) and _divides(period, hi) and _divides(ilo, index) and _divides(index, ihi)

    def period_candidates(self) -> list[int]:
        lo, hi = self.period_interval
        return [x for x in range(lo, hi + 1) if _divides(lo, x) and _divides(x, hi)]

    def index_candidates(self) -> list[int]:
        lo, hi = self.index_interval
        return [x for x in range(lo, hi + 1) if _divides(lo, x) and _divides(x, hi)]


def mapdiv_constraints(period_target: int, index_target: int, d: int) -> MapdivConstraints:
    if d < 1:
        raise ValueError("map degree must be positive")
    return MapdivConstraints(period_target, index_target, d)


@dataclass(frozen=True)
class SetupQuantities:
    P_hat: int
    I_hat: int
    ell: int
    m: int


def _exact(a: int, b: int, what: str) -> int:
    if a % b:
        raise AssertionError(f"{what}: {b} does not divide {a}")
    return a // b


def _check_supported(t: Triple) -> None:
    ok, failed = is_admissible(t)
    if not ok:
        raise InadmissibleTriple(failed)
    if t.I % 4 == 0:
        raise UnsupportedTriple(f"4 | I = {t.I}: outside the construction (needs 4 not dividing I)")
    if t.g < 3:
        raise UnsupportedTriple("g < 3: genus 1 and 2 are handled directly, not by the fiber product")


def setup_quantities(t: Triple) -> SetupQuantities:
    _check_supported(t)
    P_hat = t.P // 2 if t.P % 2 == 0 else t.P
    I_hat = t.I // 2 if t.I % 2 == 0 else t.I
    ell = _exact(I_hat, P_hat, "ell = I^/P^")
    m = _exact(t.g - 1, I_hat, "m = (g-1)/I^")
    return SetupQuantities(P_hat, I_hat, ell, m)


def riemann_hurwitz_genus(m: int, I_hat: int) -> int:
    """Genus of an unramified degree m*I_hat cover of a genus-2 curve."""
    if m < 1 or I_hat < 1:
        raise ValueError("degrees must be positive")
    return m * I_hat + 1


def classify_case(t: Triple) -> str:
    if t.P % 2 == 0:
        return "iii"
    return "i" if _divides(t.I, t.P * t.P) else "ii"


# Y' invariants required per case
GENUS2_INGREDIENT = {"i": (1, 1), "ii": (1, 2), "iii": (2, 2)}
FORGE_CASE_FOR = {"i": 1, "ii": 3, "iii": 2}


@dataclass
class TraceStep:
    claim: str
    kind: str  # divides | equals | parity | assumption
    operands: list[str]
    justification_tag: str

    def to_json(self) -> dict:
        return {"claim": self.claim, "kind": self.kind, "operands": list(self.operands),
                "justification_tag": self.justification_tag}

    @classmethod
    def from_json(cls, d: dict) -> TraceStep:
        return cls(d["claim"], d["kind"], list(d["operands"]), d["justification_tag"])


@dataclass
class CurveInvariantRecord:
    label: str
    genus: int
    period: int
    index: int
    hypotheses: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"label": self.label, "genus": self.genus, "period": self.period,
                "index": self.index, "hypotheses": list(self.hypotheses)}


@dataclass
class DerivationTrace:
    triple: Triple
    case: str
    setup: SetupQuantities
    steps: list[TraceStep]
    records: list[CurveInvariantRecord]
    hypotheses: list[str]
    conclusion: dict[str, int]

    def to_json(self) -> dict[str, Any]:
        s = self.setup
        return {
            "triple": {"g": self.triple.g, "P": self.triple.P, "I": self.triple.I},
            "case": self.case,
            "setup": {"P_hat": s.P_hat, "I_hat": s.I_hat, "ell": s.ell, "m": s.m},
            "steps": [st.to_json() for st in self.steps],
            "records": [r.to_json() for r in self.records],
            "hypotheses": list(self.hypotheses),
            "conclusion": dict(self.conclusion),
        }


class _Builder:
    def __init__(self):
        self.steps: list[TraceStep] = []

    def eq(self, lhs: str, rhs: str, tag: str, claim: str | None = None):
        self.steps.append(TraceStep(claim or f"{lhs} = {rhs}", "equals", [lhs, rhs], tag))

    def div(self, a: str, b: str, tag: str, claim: str | None = None):
        self.steps.append(TraceStep(claim or f"{a} | {b}", "divides", [a, b], tag))

    def parity(self, expr: str, which: str, tag: str, claim: str | None = None):
        self.steps.append(TraceStep(claim or f"{expr} is {which}", "parity", [expr, which], tag))

    def assume(self, claim: str, tag: str, name: str | None = None, value: str | None = None):
        ops = [name, value] if name is not None else []
        self.steps.append(TraceStep(claim, "assumption", ops, tag))


def derive_period_index(t: Triple) -> DerivationTrace:
    """Period and index of the fiber product Y = Y' x_E'' X for an admissible (g, P, I) with 4 not dividing I."""
    su = setup_quantities(t)
    case = classify_case(t)
    pY1, iY1 = GENUS2_INGREDIENT[case]
    b = _Builder()
    b.eq("g", str(t.g), "input")
    b.eq("P", str(t.P), "input")
    b.eq("I", str(t.I), "input")
    b.div("P", "I", "lichtenbaum-global")
    b.div("I", "2*P*P", "lichtenbaum-global")
    b.div("I", "2*(g-1)", "canonical-class")
    b.parity("I", "even" if t.I % 2 == 0 else "odd", "input")
    b.parity("I/2" if t.I % 2 == 0 else "I", "odd", "hypothesis-4-does-not-divide-I",
             claim="4 does not divide I")
    b.parity("P", "even" if t.P % 2 == 0 else "odd", "input")
    b.eq("P_hat", "P/2" if t.P % 2 == 0 else "P", "setup-definition")
    b.eq("I_hat", "I/2" if t.I % 2 == 0 else "I", "setup-definition")
    b.div("I_hat", "g-1", "setup-I-hat-divides-g-minus-1")
    b.eq("m", "(g-1)/I_hat", "setup-definition")
    b.eq("ell", "I_hat/P_hat", "setup-definition")

    hypotheses = [
        "E over K has E[P^] in E(K), and E[4] in E(K) when P^ is even",
        f"isogeny phi0: E -> E' with kernel Z/{su.P_hat} x Z/{su.ell}",
        f"isogeny E' -> E'' of degree m = {su.m} with E''[2] rational",
        f"genus-1 curve X with Jacobian E', period {su.P_hat} and index {su.I_hat} (genus-1 existence theorem)",
        f"degree-{su.I_hat} map X -> E' from a minimal rational effective divisor",
    ]
    for h in hypotheses:
        b.assume(h, "setup-ingredient")
    b.assume(f"P(X) = {su.P_hat}", "genus1-existence", "P_X", "P_hat")
    b.assume(f"I(X) = {su.I_hat}", "genus1-existence", "I_X", "I_hat")
    b.assume(f"P(Y') = {pY1}", "genus2-forge", "P_Yp", str(pY1))
    b.assume(f"I(Y') = {iY1}", "genus2-forge", "I_Yp", str(iY1))
    b.eq("g_Yp", "2", "genus2-forge")
    b.eq("d", "m*I_hat", "degree-of-phi", claim="deg(Y -> Y') = deg(X -> E'') = m*I^")
    b.eq("g_Y", "d*(g_Yp-1)+1", "riemann-hurwitz-unramified",
         claim="2g(Y) - 2 = m*I^*(2g(Y') - 2), so g(Y) = m*I^ + 1")
    b.eq("g_Y", "g", "riemann-hurwitz-unramified")

    b.div("P_X", "P_Y", "mapdiv-fact-1")
    b.div("P_Y", "2*P_X", "mapdiv-fact-1")
    b.div("I_X", "I_Y", "mapdiv-fact-2")
    b.div("I_Y", "2*I_X", "mapdiv-fact-2")
    b.div("P_Yp", "P_Y", "mapdiv-fact-3")
    b.div("P_Y", "d*P_Yp", "mapdiv-fact-3")
    b.div("I_Yp", "I_Y", "mapdiv-fact-4")
    b.div("I_Y", "d*I_Yp", "mapdiv-fact-4")
    b.div("P_Y", "I_Y", "period-divides-index")

    if case == "i":
        case_hyps = ["rank E'(K) >= 1 (unverified)", "a = x(Q'') for Q'' the image of a point of infinite order"]
        for h in case_hyps:
            b.assume(h, "case-i-ingredient")
        hypotheses += case_hyps
        b.parity("P", "odd", "case-i")
        b.parity("I", "odd", "case-i")
        b.div("I_Y", "I", "case-i-ramified-pullback",
              claim="pullback of [Q'] to Y is 2*D0 with D0 rational of degree I, so I(Y) | I")
    elif case == "ii":
        b.parity("m", "odd", "case-ii-m-odd",
                 claim="m = (2g-2)/I is odd, else Lichtenbaum would force I | P^2")
        b.parity("d*P_Yp", "odd", "case-ii-m-odd", claim="m*I(X)*P(Y') is odd")
    else:
        b.parity("I_X", "odd", "case-iii-parity")
        b.parity("P_X", "odd", "case-iii-parity")

    b.eq("P_Y", "P", f"case-{case}-conclusion")
    b.eq("I_Y", "I", f"case-{case}-conclusion")

    records = [
        CurveInvariantRecord("E", 1, 1, 1, ["has a rational point"]),
        CurveInvariantRecord("E'", 1, 1, 1, ["rank >= 1 assumed"] if case == "i" else []),
        CurveInvariantRecord("E''", 1, 1, 1, ["E''[2] rational"]),
        CurveInvariantRecord("X", 1, su.P_hat, su.I_hat, ["constructed by the genus-1 existence theorem"]),
        CurveInvariantRecord("Y'", 2, pY1, iY1, [f"forge case {FORGE_CASE_FOR[case]}"]),
        CurveInvariantRecord("Y", t.g, t.P, t.I, ["fiber product Y' x_E'' X"]),
    ]
    return DerivationTrace(t, case, su, b.steps, records, hypotheses, {"P": t.P, "I": t.I, "g": t.g})
