import io
import random

import pytest

from bddproof import checker
from bddproof.checker import check
from bddproof.cnf import Cnf
from bddproof.solver import UNSAT, solve
from bddproof.trace import Trace

from mutation import mutate
from oracles import proof_is_valid, random_cnf


XNX = [[1], [-1]]


def test_accepts_trivial():
    assert check(XNX, "3 0 1 2 0\n")
    assert check(XNX, "3 0 2 1 0\n")


def test_repeated_hint_rejected():
    r = check(XNX, "3 0 1 1 0\n")
    assert not r and r.reason in (checker.BAD_HINT, checker.NO_CONFLICT)


def test_no_conflict():
    r = check([[1, 2], [-1, 3]], "3 0 1 0\n")
    assert not r and r.reason == checker.BAD_HINT
    r = check([[1, 2], [-1, 3]], "3 2 0 1 0\n")
    assert not r and r.reason == checker.NO_CONFLICT


def test_missing_empty_clause():
    r = check([[1, 2], [-2]], "3 1 0 1 2 0\n")
    assert not r and r.reason == checker.NO_EMPTY_CLAUSE


def test_dead_hint_and_dead_delete():
    r = check(XNX, "2 d 1 0\n3 0 1 2 0\n")
    assert not r and r.reason == checker.BAD_HINT
    r = check(XNX, "2 d 1 0\n2 d 1 0\n")
    assert not r and r.reason == checker.DEAD_DELETE


def test_parse_errors():
    for text in ("3 0 1 2\n", "x 0 0\n", "3 d 1\n", "2 0 1 2 0\n"):
        r = check(XNX, text)
        assert not r and r.reason == checker.PARSE_ERROR, text


def test_root_unit_justification_checks():
    # a | -b | c with order a < b < c, then units that contradict the clause.
    inputs = [[1, -2, 3], [-1], [2], [-3]]
    proof = [
        "5 -4 3 0 0", "6 4 -3 0 0",                      # uc = c ? 1 : 0   (LD, HU)
        "7 -5 -2 4 0 0", "8 5 -2 -4 0 0", "9 5 2 0 0",   # ub = b ? uc : 1  (HD, HU, LU)
        "10 -6 1 5 0 0", "11 6 -1 0 0", "12 6 1 -5 0 0",  # ua = a ? 1 : ub  (LD, HU, LU)
        "13 6 0 11 12 9 8 6 1 0",
        "14 0 13 2 10 3 7 5 4 0",
    ]
    r = check(inputs, proof)
    assert r, r.describe()
    assert r.non_fresh_pivots == 5  # every defining clause after the first of its node


def test_blocked_clauses():
    st = checker.CheckerState([[1, 2]])
    assert st.blocked_verify([5, -1]) is True
    st.add(2, [5, -1])
    assert st.blocked_verify([-5, 1]) is False
    st.add(3, [-5, 1])
    st2 = checker.CheckerState([[-1, 2]])
    with pytest.raises(checker._Fail):
        st2.blocked_verify([1, 3])
    with pytest.raises(checker._Fail):
        st2.blocked_verify([])


def test_hu_after_hd_ld_is_blocked():
    # x=1, children t=2 (hi) and e=3 (lo); node u=4
    st = checker.CheckerState([[2, 3]])
    for cid, c in enumerate([[-4, -1, 2], [-4, 1, 3]], start=2):
        st.blocked_verify(c)
        st.add(cid, c)
    st.blocked_verify([4, -1, -2])


def test_rat_hints():
    st = checker.CheckerState([[1, 2]])
    st.add(2, [-5, 1])
    st.rat_verify([5, -1], [-2])
    st.rat_verify([5, 2], [-2, 1])
    with pytest.raises(checker._Fail):
        st.rat_verify([5, 2], [])
    with pytest.raises(checker._Fail):
        st.rat_verify([5, 2], [-2])


def solved_proof(seed):
    rng = random.Random(seed)
    while True:
        n, clauses = random_cnf(rng, 8, 30)
        cnf = Cnf(n, clauses)
        out = io.StringIO()
        s = solve(cnf, rng.choice(("linear", "bucket")), trace=Trace(out), seed=seed)
        if s.verdict.status == UNSAT:
            return cnf, out.getvalue().splitlines()


@pytest.mark.parametrize("seed", range(30))
def test_mutations_never_falsely_accepted(seed):
    cnf, lines = solved_proof(seed)
    assert check(cnf, lines)
    rng = random.Random(seed)
    for _ in range(5):
        bad = mutate(lines, rng, cnf.num_vars)
        if check(cnf, bad):
            assert proof_is_valid(cnf.clauses, bad)


@pytest.mark.parametrize("seed", range(10))
def test_stripping_deletions_keeps_acceptance(seed):
    cnf, lines = solved_proof(seed)
    kept = [l for l in lines if l.split()[1] != "d"]
    assert check(cnf, kept)


def test_check_files(tmp_path):
    (tmp_path / "f.cnf").write_text("p cnf 1 2\n1 0\n-1 0\n")
    (tmp_path / "f.lrat").write_text("3 0 1 2 0\n")
    assert checker.check_files(str(tmp_path / "f.cnf"), str(tmp_path / "f.lrat"))
