"""Certificate bundles (schema ``pix/1``): building, canonical serialization and verification."""
from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import poly
from .arith import Place, format_rational, is_prime, legendre, parse_rational
from .calculus import FORGE_CASE_FOR, Triple, classify_case, derive_period_index
from .curves import EllipticModel, HyperellipticModel, elliptic_discriminant, genus_of_model, reduce_mod_p
from .forge import CASE_INVARIANTS, Genus2Curve, build_modulus, forge
from .local import EMPTY_BY_VALUATION, INFINITY_RATIONAL, POINT_FOUND, LocalPoint, infinity_rational
from .tracecheck import TraceError, check_trace

SCHEMA = "pix/1"


class BundleError(ValueError):
    pass


def canonical(obj: Any) -> Any:
    """JSON-ready copy with every exact number as a decimal string."""
    if hasattr(obj, "to_json"):
        return canonical(obj.to_json())
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, Fraction)):
        return format_rational(obj)
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(data: dict) -> str:
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


@dataclass
class CertificateBundle:
    command: str
    inputs: dict[str, Any]
    artifacts: dict[str, Any]
    conclusions: dict[str, Any]
    deviations: list[str] = field(default_factory=list)
    version: str = SCHEMA

    def to_json(self) -> dict:
        return canonical({
            "version": self.version,
            "command": self.command,
            "inputs": self.inputs,
            "artifacts": self.artifacts,
            "conclusions": self.conclusions,
            "deviations": self.deviations,
        })

    def dumps(self) -> str:
        return dumps(self.to_json())

    @classmethod
    def from_json(cls, d: dict) -> CertificateBundle:
        missing = {"version", "command", "inputs", "artifacts", "conclusions", "deviations"} - set(d)
        if missing:
            raise BundleError(f"schema mismatch: missing {sorted(missing)}")
        if d["version"] != SCHEMA:
            raise BundleError(f"schema mismatch: version {d['version']!r}, expected {SCHEMA!r}")
        return cls(d["command"], d["inputs"], d["artifacts"], d["conclusions"], d["deviations"], d["version"])

    @classmethod
    def loads(cls, text: str) -> CertificateBundle:
        try:
            return cls.from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise BundleError(f"not JSON: {exc}") from exc


def write_atomic(path: str | os.PathLike, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        os.chmod(tmp, 0o644)
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- building ------------------------------------------------------------------


def _curve_artifacts(curve: Genus2Curve) -> dict:
    out = {"params": curve.params, "model": curve.model}
    out.update(curve.certificates)
    return out


def forge_bundle(case: int, b: int, c: int, a=None, bound: int = 1000) -> CertificateBundle:
    E = EllipticModel(b, c)
    curve = forge(case, E, a, bound)
    inputs: dict[str, Any] = {"case": case, "b": b, "c": c}
    if case == 1:
        inputs["a"] = curve.params.a
    if case == 2:
        inputs["bound"] = bound
    concl = {"genus": 2, "period": curve.claimed_period, "index": curve.claimed_index}
    return CertificateBundle("forge", inputs, _curve_artifacts(curve), concl, curve.deviations)


def pipeline_bundle(g: int, P: int, I: int, b: int, c: int, bound: int = 1000) -> CertificateBundle:
    t = Triple(g, P, I)
    trace = derive_period_index(t)
    fcase = FORGE_CASE_FOR[trace.case]
    ingredient = forge_bundle(fcase, b, c, bound=bound)
    env = check_trace([s.to_json() for s in trace.steps])
    if (env["P_Y"], env["I_Y"], env["g_Y"]) != (P, I, g):
        raise BundleError("trace checker disagrees with the derivation")
    inputs = {"g": g, "P": P, "I": I, "b": b, "c": c, "bound": bound}
    artifacts = {
        "case": trace.case,
        "derivation_trace": trace,
        "genus2_ingredient": {"forge_case": fcase, "inputs": ingredient.inputs,
                              "artifacts": ingredient.artifacts, "conclusions": ingredient.conclusions},
    }
    deviations = list(ingredient.deviations)
    if trace.case == "i":
        deviations.append("case i uses the default parameter a; the required a = x(Q'') is an assumption of the trace")
    return CertificateBundle("pipeline", inputs, artifacts, {"genus": g, "period": P, "index": I}, deviations)


def regenerate(bundle: CertificateBundle) -> CertificateBundle:
    i = bundle.inputs
    num = lambda k, default=None: int(i[k]) if k in i else default  # noqa: E731
    if bundle.command == "forge":
        a = parse_rational(i["a"]) if "a" in i else None
        return forge_bundle(num("case"), num("b"), num("c"), a, num("bound", 1000))
    if bundle.command == "pipeline":
        return pipeline_bundle(num("g"), num("P"), num("I"), num("b"), num("c"), num("bound", 1000))
    raise BundleError(f"unknown command {bundle.command!r}")


# -- verification ----------------------------------------------------------------


def _diff(a: Any, b: Any, path: str = "", out: list | None = None, limit: int = 20) -> list[str]:
    out = [] if out is None else out
    if len(out) >= limit:
        return out
    if isinstance(a, dict) and isinstance(b, dict):
        for k in sorted(set(a) | set(b)):
            if k not in a or k not in b:
                out.append(f"{path}/{k}: present on one side only")
            else:
                _diff(a[k], b[k], f"{path}/{k}", out, limit)
    elif isinstance(a, list) and isinstance(b, list):
        if len(a) != len(b):
            out.append(f"{path}: length {len(a)} != {len(b)}")
        for n, (x, y) in enumerate(zip(a, b)):
            _diff(x, y, f"{path}[{n}]", out, limit)
    elif a != b:
        out.append(f"{path}: {str(a)[:60]!r} != {str(b)[:60]!r}")
    return out


def _check_params(params: dict, E: EllipticModel, problems: list[str]) -> None:
    if "pi" not in params:
        return
    pi, alpha = int(params["pi"]), int(params["alpha"])
    M = int(params["modulus"]["M"])
    prod = 1
    for p, e in params["modulus"]["factors"]:
        prod *= int(p) ** int(e)
    if prod != M or M != build_modulus(E).M:
        problems.append("hypothesis failed: modulus M matches its recipe")
    if not is_prime(pi):
        problems.append("hypothesis failed: pi is prime")
    if pi % M != 1 % M:
        problems.append("hypothesis failed: pi = 1 mod M")
    if pi > 2 and legendre(alpha % pi, pi) != -1:
        problems.append(f"hypothesis failed: alpha nonresidue (legendre({alpha}, {pi}) != -1)")
    if elliptic_discriminant(E) % pi == 0:
        problems.append("hypothesis failed: pi does not divide disc(E)")


def _check_witness(model: HyperellipticModel, p: int, w: dict) -> bool:
    scale = reduce_mod_p(model, p).scale_k
    f = [cf * Fraction(p) ** (2 * scale) for cf in model.coeffs]
    if w["chart"] == "w":
        f = poly.reverse(f, 6)
    return LocalPoint(int(w["z"]), int(w["y"]), p, int(w["precision"])).check(f)


def _check_report(model: HyperellipticModel, report: dict, params: dict, problems: list[str]) -> None:
    pi = int(params["pi"])
    deficient = []
    for cert in report["certificates"]:
        v = Place.from_json(cert["place"])
        verdict = cert["verdict"]
        if cert["deficient"]:
            deficient.append(v)
        if verdict == INFINITY_RATIONAL and not infinity_rational(model, v):
            problems.append(f"place {v.to_json()}: points at infinity are not rational")
        elif verdict == POINT_FOUND:
            w = cert["data"]["witness"]
            if int(w["precision"]) < 3 or not _check_witness(model, v.p, w):
                problems.append(f"place {v.to_json()}: Hensel witness fails")
        elif verdict == EMPTY_BY_VALUATION:
            if v.p != pi or not cert["deficient"] or not cert["data"].get("odd_degree_extensions"):
                problems.append(f"place {v.to_json()}: empty-by-valuation certificate misplaced")
        elif verdict not in (INFINITY_RATIONAL,):
            problems.append(f"place {v.to_json()}: unexpected verdict {verdict}")
    if deficient != [Place(pi)]:
        problems.append(f"deficient places {[d.to_json() for d in deficient]} are not exactly [{pi}]")
    if report["deficient_places"] != [d.to_json() for d in deficient]:
        problems.append("deficient_places list disagrees with the certificates")


def _check_curve_artifacts(art: dict, inputs: dict, concl: dict, problems: list[str]) -> None:
    E = EllipticModel(int(inputs["b"]), int(inputs["c"]))
    case = int(inputs["case"])
    params = art["params"]
    model = HyperellipticModel.from_json(art["model"])
    if genus_of_model(model) != 2:
        problems.append("model does not have genus 2")
    if art.get("map_identity") is not True:
        problems.append("map identity flag is not true")
    _check_params(params, E, problems)
    P, I = CASE_INVARIANTS[case]
    if (concl.get("genus"), concl.get("period"), concl.get("index")) != ("2", str(P), str(I)):
        problems.append(f"conclusions do not match case {case}: expected (2, {P}, {I})")
    if case == 2:
        _check_report(model, art["deficiency_report"], params, problems)
    if case == 3:
        dc = art["divisor_certificate"]
        if dc.get("holds") is not True or dc["div_function"] != dc["sigma_D_minus_D"]:
            problems.append("divisor identity does not hold")
        if dc.get("period_bound") != "1":
            problems.append("period bound from the divisor certificate is not 1")


def check_bundle(bundle: CertificateBundle) -> list[str]:
    """Explicit hypothesis checks on recorded data; returns a list of problems."""
    problems: list[str] = []
    try:
        if bundle.command == "forge":
            _check_curve_artifacts(bundle.artifacts, bundle.inputs, bundle.conclusions, problems)
        elif bundle.command == "pipeline":
            tr = bundle.artifacts["derivation_trace"]
            try:
                env = check_trace(tr["steps"])
                got = {"genus": str(env["g_Y"]), "period": str(env["P_Y"]), "index": str(env["I_Y"])}
                if got != bundle.conclusions:
                    problems.append(f"trace concludes {got}, bundle claims {bundle.conclusions}")
            except (TraceError, KeyError) as exc:
                problems.append(f"trace check failed: {exc}")
            t = Triple(int(bundle.inputs["g"]), int(bundle.inputs["P"]), int(bundle.inputs["I"]))
            if bundle.artifacts.get("case") != classify_case(t):
                problems.append("recorded case label is wrong")
            ing = bundle.artifacts["genus2_ingredient"]
            _check_curve_artifacts(ing["artifacts"], ing["inputs"], ing["conclusions"], problems)
        else:
            problems.append(f"unknown command {bundle.command!r}")
    except (KeyError, TypeError, ValueError) as exc:
        problems.append(f"malformed bundle: {type(exc).__name__}: {exc}")
    return problems


def verify_bundle(bundle: CertificateBundle) -> list[str]:
    """Explicit checks, then regeneration from the recorded inputs and a full diff."""
    problems = check_bundle(bundle)
    try:
        fresh = regenerate(bundle).to_json()
    except Exception as exc:  # noqa: BLE001 - any construction failure is a verification failure
        return problems + [f"regeneration failed: {type(exc).__name__}: {exc}"]
    problems += [f"divergence {d}" for d in _diff(bundle.to_json(), fresh)]
    return problems
