import copy

import pytest

from pix.calculus import (
    InadmissibleTriple,
    Triple,
    UnsupportedTriple,
    classify_case,
    derive_period_index,
    is_admissible,
    is_locally_admissible,
    mapdiv_constraints,
    riemann_hurwitz_genus,
    setup_quantities,
)
from pix.tracecheck import TraceError, check_trace


def admissible_by_hand(g, P, I):
    # written independently of the library: "x | 0" holds for every x, and 0 counts as even
    if I % P or (2 * P * P) % I:
        return False
    canon = 2 * (g - 1)
    if canon % I:
        return False
    if ((canon // I) % 2 == 0 or P % 2 == 0) and (P * P) % I:
        return False
    return True


def test_admissible_examples():
    assert is_admissible(Triple(2, 1, 2)) == (True, [])
    ok, failed = is_admissible(Triple(1, 2, 8))
    assert not ok and failed
    assert is_admissible(Triple(3, 2, 4))[0]


def test_admissible_box():
    for g in range(0, 7):
        for P in range(1, 21):
            for I in range(1, 21):
                assert is_admissible(Triple(g, P, I))[0] == admissible_by_hand(g, P, I), (g, P, I)


def test_genus_two_pairs():
    pairs = {(P, I) for P in range(1, 21) for I in range(1, 21) if is_admissible(Triple(2, P, I))[0]}
    assert pairs == {(1, 1), (1, 2), (2, 2)}


def test_local_examples():
    assert is_locally_admissible(Triple(2, 1, 2))
    assert is_locally_admissible(Triple(3, 2, 2))
    assert not is_locally_admissible(Triple(3, 1, 2))
    with pytest.raises(ValueError):
        is_locally_admissible(Triple(0, 1, 1))


def test_mapdiv_examples():
    c = mapdiv_constraints(1, 1, 2)
    assert c.period_candidates() == [1, 2]
    assert mapdiv_constraints(3, 3, 1).period_candidates() == [3]
    assert mapdiv_constraints(1, 2, 6).index_candidates() == [2, 4, 6, 12]
    assert c.allows(2, 1) and not c.allows(3, 1)
    with pytest.raises(ValueError):
        mapdiv_constraints(1, 1, 0)


def test_setup_and_rh_examples():
    s = setup_quantities(Triple(4, 3, 3))
    assert (s.P_hat, s.I_hat, s.ell, s.m) == (3, 3, 1, 1)
    s = setup_quantities(Triple(4, 1, 2))
    assert (s.P_hat, s.I_hat, s.ell, s.m) == (1, 1, 1, 3)
    s = setup_quantities(Triple(3, 2, 2))
    assert (s.P_hat, s.I_hat, s.ell, s.m) == (1, 1, 1, 2)
    assert riemann_hurwitz_genus(1, 3) == 4
    assert riemann_hurwitz_genus(3, 1) == 4
    assert riemann_hurwitz_genus(1, 1) == 2


def test_classify_examples():
    assert classify_case(Triple(4, 3, 3)) == "i"
    assert classify_case(Triple(4, 1, 2)) == "ii"
    assert classify_case(Triple(3, 2, 2)) == "iii"


def test_rejections():
    with pytest.raises(UnsupportedTriple, match="4 \\| I"):
        derive_period_index(Triple(3, 2, 4))
    with pytest.raises(InadmissibleTriple):
        derive_period_index(Triple(3, 1, 3))
    with pytest.raises(UnsupportedTriple):
        derive_period_index(Triple(2, 1, 2))


def all_triples():
    for g in range(3, 11):
        for P in range(1, 21):
            for I in range(1, 21):
                t = Triple(g, P, I)
                if is_admissible(t)[0] and I % 4:
                    yield t


def test_every_trace_checks():
    seen = set()
    for t in all_triples():
        tr = derive_period_index(t)
        env = check_trace([s.to_json() for s in tr.steps])
        assert (env["P_Y"], env["I_Y"], env["g_Y"]) == (t.P, t.I, t.g)
        assert tr.conclusion == {"P": t.P, "I": t.I, "g": t.g}
        if tr.case == "ii":
            assert env["m"] % 2 == 1
        if tr.case == "i":
            assert any("rank" in h for h in tr.hypotheses)
        seen.add(tr.case)
    assert seen == {"i", "ii", "iii"}


def test_case_ii_example_has_odd_m_step():
    tr = derive_period_index(Triple(4, 1, 2))
    assert any(s.kind == "parity" and s.operands == ["m", "odd"] for s in tr.steps)
    assert [r.label for r in tr.records] == ["E", "E'", "E''", "X", "Y'", "Y"]
    assert tr.records[4].period == 1 and tr.records[4].index == 2


def _steps(t):
    return [s.to_json() for s in derive_period_index(t).steps]


def test_checker_rejects_wrong_conclusion():
    steps = _steps(Triple(4, 1, 2))
    steps[-1]["operands"] = ["I_Y", "1"]
    with pytest.raises(TraceError):
        check_trace(steps)


def test_checker_rejects_missing_squeeze():
    steps = [s for s in _steps(Triple(4, 1, 2)) if s["justification_tag"] != "mapdiv-fact-4"]
    with pytest.raises(TraceError, match="constraints allow"):
        check_trace(steps)


def test_checker_rejects_false_divisibility():
    steps = _steps(Triple(4, 3, 6))
    for s in steps:
        if s["operands"] == ["I_hat", "g-1"]:
            s["operands"] = ["I_hat", "g"]
    with pytest.raises(TraceError, match="false"):
        check_trace(steps)


def test_checker_rejects_case_ii_with_even_m():
    steps = _steps(Triple(4, 1, 2))
    steps[0]["operands"] = ["g", "3"]  # m becomes 2
    with pytest.raises(TraceError):
        check_trace(steps)


def test_checker_rejects_unsupported_syntax():
    steps = copy.deepcopy(_steps(Triple(3, 2, 2)))
    steps[3]["operands"] = ["P", "__import__('os')"]
    with pytest.raises(TraceError):
        check_trace(steps)
