"""Independent checker for derivation traces.

Walks the steps with a tiny integer-expression interpreter. Names get values
from ``equals``/``assumption`` bindings; claims about unbound names become
constraints, and a later ``equals`` on such a name is accepted only if every
assignment satisfying the constraints gives that value.
"""
from __future__ import annotations

import ast
import itertools
from typing import Iterable


class TraceError(ValueError):
    pass


def _eval(expr: str, env: dict[str, int]) -> int | None:
    """Value of ``expr`` or None when it mentions an unbound name."""
    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise TraceError(f"bad expression {expr!r}") from exc

    def go(node):
        if isinstance(node, ast.Expression):
            return go(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.Name):
            return env.get(node.id)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            v = go(node.operand)
            return None if v is None else -v
        if isinstance(node, ast.BinOp):
            a, b = go(node.left), go(node.right)
            if a is None or b is None:
                return None
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                if b == 0 or a % b:
                    raise TraceError(f"inexact division in {expr!r}")
                return a // b
        raise TraceError(f"unsupported syntax in {expr!r}")

    return go(tree)


def _names(expr: str) -> set[str]:
    return {n.id for n in ast.walk(ast.parse(expr, mode="eval")) if isinstance(n, ast.Name)}


def _holds(kind: str, ops: list[str], env: dict[str, int]) -> bool | None:
    if kind == "divides":
        a, b = _eval(ops[0], env), _eval(ops[1], env)
        if a is None or b is None:
            return None
        return b == 0 if a == 0 else b % a == 0
    if kind == "parity":
        v = _eval(ops[0], env)
        if v is None:
            return None
        return (v % 2 == 1) == (ops[1] == "odd")
    if kind == "equals":
        a, b = _eval(ops[0], env), _eval(ops[1], env)
        if a is None or b is None:
            return None
        return a == b
    raise TraceError(f"unknown step kind {kind}")


def _domain(name: str, constraints: list[tuple[str, list[str]]], env: dict[str, int]) -> list[int]:
    bound = None
    for kind, ops in constraints:
        if kind == "divides" and ops[0].strip() == name:
            v = _eval(ops[1], env)
            if v:
                bound = abs(v) if bound is None else _gcd(bound, abs(v))
    if bound is None:
        raise TraceError(f"{name} is not bounded by any divisibility constraint")
    return [x for x in range(1, bound + 1) if bound % x == 0]


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _solve(target: str, constraints, env) -> set[int]:
    unknowns = sorted(set().union(*(_names(o) for _, ops in constraints for o in ops if o not in ("odd", "even"))) - set(env))
    domains = [_domain(u, constraints, env) for u in unknowns]
    values = set()
    for combo in itertools.product(*domains):
        trial = dict(env, **dict(zip(unknowns, combo)))
        if all(_holds(k, ops, trial) for k, ops in constraints):
            values.add(trial[target])
    return values


def check_trace(steps: Iterable[dict]) -> dict[str, int]:
    """Validate every step; returns the final environment. Raises TraceError on failure."""
    env: dict[str, int] = {}
    pending: list[tuple[str, list[str]]] = []
    for i, st in enumerate(steps):
        kind, ops = st["kind"], list(st["operands"])
        where = f"step {i} ({st.get('claim', '')})"
        if kind == "assumption":
            if ops:
                name, expr = ops
                v = _eval(expr, env)
                if v is None or name in env:
                    raise TraceError(f"{where}: cannot bind {name}")
                env[name] = v
            continue
        if kind not in ("divides", "parity", "equals"):
            raise TraceError(f"{where}: unknown kind {kind}")
        if kind == "equals" and ops[0].isidentifier() and ops[0] not in env:
            name = ops[0]
            rhs = _eval(ops[1], env)
            if rhs is None:
                raise TraceError(f"{where}: right-hand side is not determined")
            involved = [c for c in pending if any(name in _names(o) for o in c[1] if o not in ("odd", "even"))]
            if involved:
                sols = _solve(name, pending, env)
                if sols != {rhs}:
                    raise TraceError(f"{where}: constraints allow {sorted(sols)} for {name}, not just {rhs}")
            env[name] = rhs
            still = []
            for c in pending:
                r = _holds(c[0], c[1], env)
                if r is False:
                    raise TraceError(f"{where}: binding {name} violates {c}")
                if r is None:
                    still.append(c)
            pending = still
            continue
        r = _holds(kind, ops, env)
        if r is False:
            raise TraceError(f"{where}: claim is false")
        if r is None:
            pending.append((kind, ops))
    if pending:
        raise TraceError(f"unresolved constraints at end of trace: {pending}")
    return env
