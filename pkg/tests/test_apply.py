import io
import itertools
import random

import pytest

from bddproof import apply as ops
from bddproof.bdd import LEAF0, LEAF1, Manager
from bddproof.checker import check
from bddproof.cnf import Cnf
from bddproof.trace import ProofError, Trace

from oracles import extension_model


def setup(n, clauses=(), ordering=None):
    out = io.StringIO()
    t = Trace(out, keep_steps=True, self_check=True)
    t.load_inputs(Cnf(n, [list(c) for c in clauses]))
    return Manager(n, t, ordering), out


def from_table(mgr, table, level=1):
    """BDD of a function given as a tuple indexed by assignments of levels level..n."""
    if all(table):
        return LEAF1
    if not any(table):
        return LEAF0
    half = len(table) // 2
    # Rows are ordered with the current variable most significant, False first.
    lo = from_table(mgr, table[:half], level + 1)
    hi = from_table(mgr, table[half:], level + 1)
    return mgr.get_node(level, hi, lo)


def table_of(mgr, node, n):
    return tuple(mgr.evaluate(node, dict(zip(range(1, n + 1), bits)))
                 for bits in itertools.product((False, True), repeat=n))


def rup_steps_valid(mgr, n):
    model = extension_model(mgr)
    inputs = [s.clause for s in mgr.trace.steps if s.kind == "input"]
    for s in mgr.trace.steps:
        if s.kind == "rup":
            assert model.clause_valid(s.clause, n, inputs), s


def step_by_id(mgr, sid):
    return next(s for s in mgr.trace.steps if s.id == sid)


# Clause conversion


def test_clause_root_justification_example():
    # a < b < c, clause a | -b | c
    mgr, _ = setup(3, [[1, -2, 3]])
    node, step = ops.clause_to_bdd(mgr, [1, -2, 3], 1)
    ua = node
    ub = ua.lo
    uc = ub.hi
    assert (ua.var, ub.var, uc.var) == (1, 2, 3)
    assert ub.lo is LEAF1 and uc.lo is LEAF0
    s = step_by_id(mgr, step)
    assert s.clause == [ua.xvar]
    assert s.hints == [ua.hu, ua.lu, ub.lu, ub.hu, uc.hu, 1]


def test_clause_root_unit_propagation_sequence():
    mgr, out = setup(3, [[1, -2, 3]])
    node, step = ops.clause_to_bdd(mgr, [1, -2, 3], 1)
    ua, ub, uc = node, node.lo, node.lo.hi
    s = step_by_id(mgr, step)
    true = {-ua.xvar}
    seq = []
    clauses = {x.id: x.clause for x in mgr.trace.steps if x.clause is not None}
    clauses[1] = [1, -2, 3]
    for h in s.hints:
        free = [l for l in clauses[h] if -l not in true]
        seq.append(free[0] if free else None)
        true.update(free)
    assert seq == [-1, -ub.xvar, 2, -uc.xvar, -3, None]


def test_single_literal_clause():
    mgr, _ = setup(2, [[2]])
    node, step = ops.clause_to_bdd(mgr, [2], 1)
    assert node is mgr.var_node(2)
    assert step_by_id(mgr, step).hints == [node.hu, 1]


def test_clause_canonical_and_degenerate():
    mgr, _ = setup(2, [[1, 2], [2, 1]])
    a, _ = ops.clause_to_bdd(mgr, [1, 2], 1)
    b, _ = ops.clause_to_bdd(mgr, [2, 1], 2)
    assert a is b
    assert ops.clause_to_bdd(mgr, [], 1) == (LEAF0, 0)
    assert ops.clause_to_bdd(mgr, [1, -1], 1) == (LEAF1, 0)


def test_clause_with_permuted_order_checks():
    clauses = [[3, -1, 2], [-3, 1], [1, 2], [-2, 3]]
    mgr, out = setup(3, clauses, ordering=[3, 1, 2])
    for cid, c in enumerate(clauses, start=1):
        ops.clause_to_bdd(mgr, c, cid)
    rup_steps_valid(mgr, 3)


# Conjunction


def test_and_terminal_cases():
    mgr, _ = setup(2)
    u = mgr.var_node(1)
    assert ops.and_apply(mgr, u, LEAF1) == (u, 0)
    assert ops.and_apply(mgr, u, u) == (u, 0)
    assert ops.and_apply(mgr, LEAF0, u) == (LEAF0, 0)


def _and_steps(mgr, count_before):
    return [s for s in mgr.trace.steps[count_before:] if s.kind == "rup"]


def test_standard_case_two_steps():
    # u = x ? y : -y, v = x ? z : -z.  Both recursive steps are nontrivial.
    mgr, _ = setup(3)
    y, z = mgr.var_node(2), mgr.var_node(3)
    ny, nz = mgr.get_node(2, LEAF0, LEAF1), mgr.get_node(3, LEAF0, LEAF1)
    u = mgr.get_node(1, y, ny)
    v = mgr.get_node(1, z, nz)
    if u.id > v.id:
        u, v = v, u
    w1, andh = ops.and_apply(mgr, u.hi, v.hi)
    w0, andl = ops.and_apply(mgr, u.lo, v.lo)
    assert andh and andl
    mark = len(mgr.trace.steps)
    w, step = ops.and_apply(mgr, u, v)
    assert (w.hi, w.lo) == (w1, w0)
    first, second = _and_steps(mgr, mark)
    assert first.clause == [-1, -u.xvar, -v.xvar, w.xvar]
    assert first.hints == [u.hd, v.hd, w.hu, andh]
    assert second.clause == [-u.xvar, -v.xvar, w.xvar]
    assert second.hints == [first.id, u.ld, v.ld, w.lu, andl]
    assert second.id == step
    assert first.id not in mgr.trace.live
    rup_steps_valid(mgr, 3)


def test_high_child_false_single_step():
    # u = x ? 0 : y, v = x ? -z : z.  The vhd clause is satisfied early and filtered.
    mgr, _ = setup(3)
    y, z = mgr.var_node(2), mgr.var_node(3)
    nz = mgr.get_node(3, LEAF0, LEAF1)
    u = mgr.get_node(1, LEAF0, y)
    v = mgr.get_node(1, nz, z)
    w0, andl = ops.and_apply(mgr, y, z)
    mark = len(mgr.trace.steps)
    w, step = ops.and_apply(mgr, u, v)
    steps = _and_steps(mgr, mark)
    assert len(steps) == 1
    assert steps[0].hints == [u.hd, u.ld, v.ld, w.lu, andl]
    assert step_by_id(mgr, u.hd).clause == [-u.xvar, -1]
    rup_steps_valid(mgr, 3)


def test_independent_operand_equal_results():
    # u = y does not split on x; v = x ? z : (z | -y); both branches give y & z.
    mgr, _ = setup(3)
    y, z = mgr.var_node(2), mgr.var_node(3)
    z_or_ny = mgr.get_node(2, z, LEAF1)
    v = mgr.get_node(1, z, z_or_ny)
    u = y
    _, andh = ops.and_apply(mgr, u, z)
    _, andl = ops.and_apply(mgr, u, z_or_ny)
    assert andh and andl
    mark = len(mgr.trace.steps)
    w, step = ops.and_apply(mgr, u, v)
    first, second = _and_steps(mgr, mark)
    assert first.hints == [v.hd, andh]
    assert second.hints == [first.id, v.ld, andl]
    rup_steps_valid(mgr, 3)


def random_tables(rng, n, count):
    return [tuple(rng.random() < 0.5 for _ in range(2 ** n)) for _ in range(count)]


@pytest.mark.parametrize("seed", range(40))
def test_and_truth_table_oracle(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 6)
    mgr, _ = setup(n)
    ta, tb = random_tables(rng, n, 2)
    a, b = from_table(mgr, ta), from_table(mgr, tb)
    w, step = ops.and_apply(mgr, a, b)
    assert table_of(mgr, w, n) == tuple(x and y for x, y in zip(ta, tb))
    if step:
        c = step_by_id(mgr, step).clause
        assert sorted(c) == sorted(ops.make_clause(ops.neg(a), ops.neg(b), ops.pos(w)))
    rup_steps_valid(mgr, n)


def test_and_recursion_bound():
    rng = random.Random(7)
    for _ in range(20):
        n = rng.randint(2, 6)
        mgr, _ = setup(n)
        a, b = (from_table(mgr, t) for t in random_tables(rng, n, 2))
        before = mgr.and_recursions
        ops.and_apply(mgr, a, b)
        assert mgr.and_recursions - before <= mgr.node_count(a) * mgr.node_count(b)


# Quantification and implication


def test_exists_basics():
    mgr, _ = setup(2)
    x = mgr.var_node(1)
    assert ops.exists(mgr, x, [1]) is LEAF1
    assert ops.exists(mgr, x, []) is x
    assert ops.exists(mgr, x, [2]) is x


@pytest.mark.parametrize("seed", range(40))
def test_exists_and_imply_oracle(seed):
    rng = random.Random(1000 + seed)
    n = rng.randint(1, 6)
    mgr, _ = setup(n)
    (t,) = random_tables(rng, n, 1)
    u = from_table(mgr, t)
    qs = [v for v in range(1, n + 1) if rng.random() < 0.4]
    w = ops.exists(mgr, u, qs)
    expect = []
    for bits in itertools.product((False, True), repeat=n):
        hit = False
        for alt in itertools.product((False, True), repeat=len(qs)):
            asg = dict(zip(range(1, n + 1), bits))
            asg.update(zip(qs, alt))
            hit = hit or mgr.evaluate(u, asg)
        expect.append(hit)
    assert table_of(mgr, w, n) == tuple(expect)
    step = ops.imply_check(mgr, u, w)
    if step:
        assert step_by_id(mgr, step).clause == [-u.xvar, w.xvar]
    rup_steps_valid(mgr, n)


def test_imply_terminals_and_failure():
    mgr, _ = setup(2)
    x, y = mgr.var_node(1), mgr.var_node(2)
    assert ops.imply_check(mgr, LEAF0, x) == 0
    assert ops.imply_check(mgr, x, x) == 0
    assert ops.imply_check(mgr, x, LEAF1) == 0
    with pytest.raises(ProofError):
        ops.imply_check(mgr, x, y)


def test_conjunction_unsat_pair_checks():
    cnf = Cnf(1, [[1], [-1]])
    out = io.StringIO()
    t = Trace(out)
    t.load_inputs(cnf)
    mgr = Manager(1, t)
    a, sa = ops.clause_to_bdd(mgr, [1], 1)
    b, sb = ops.clause_to_bdd(mgr, [-1], 2)
    w, s = ops.and_apply(mgr, a, b)
    assert w is LEAF0
    t.emit_rup([], [h for h in (sa, sb, s) if h])
    assert check(cnf, out.getvalue())


def test_propagation_hints_filter():
    # Under -1: clause 10 yields 2, 11 is satisfied, 12 is not unit, 13 conflicts.
    cands = [(10, [1, 2]), (11, [-1, 2]), (12, [3, 4]), (13, [-2])]
    assert ops.propagation_hints([1], cands) == [10, 13]
    assert ops.propagation_hints([1], [(10, [2, 3])]) is None
