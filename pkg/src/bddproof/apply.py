"""Proof-generating BDD operations.

Each conjunction returns ``(w, step)`` where ``step`` proves the clause
``-u -v w`` (0 when that clause is a tautology).  The implication check
returns a step proving ``-u v``.  Existential quantification emits no proof
of its own; callers certify its result with :func:`imply_check`.

Justification follows the recursion: at a node splitting on variable ``x``
the supporting clauses are grouped into a high set (valid under ``x``) and a
low set (valid under ``-x``).  When the recursive result on one side is a
tautology a single RUP step is attempted; otherwise, or if that attempt does
not reach a conflict, a weaker clause with ``-x`` added is derived from the
high set first and then the target from it plus the low set.  Antecedent
lists keep only clauses that propagate a new unit or conflict, scanning the
candidates once in order.
"""

from __future__ import annotations

from typing import Iterable, List, Optional, Sequence, Tuple

from .bdd import LEAF0, LEAF1, Manager, Node
from .trace import ProofError

AND, IMPLY, OR, EXISTS = "and", "imply", "or", "exists"

Support = Tuple[int, List[int]]


def pos(n: Node):
    if n is LEAF1:
        return True
    if n is LEAF0:
        return False
    return n.xvar


def neg(n: Node):
    if n is LEAF1:
        return False
    if n is LEAF0:
        return True
    return -n.xvar


def make_clause(*lits) -> Optional[List[int]]:
    """Clause from literals that may be the constants True/False.

    Returns None for a tautology; False literals and duplicates are dropped.
    """
    out: List[int] = []
    for l in lits:
        if l is True:
            return None
        if l is False:
            continue
        if -l in out:
            return None
        if l not in out:
            out.append(l)
    return out


def propagation_hints(target: Sequence[int], candidates: Iterable[Support]) -> Optional[List[int]]:
    """Antecedent ids that refute the negation of `target` by unit propagation.

    Candidates are scanned once in order; a candidate is kept only when it is
    unit (its literal is asserted) or falsified (scan stops).  None when no
    conflict is reached.
    """
    true = {-l for l in target}
    hints = []
    for sid, lits in candidates:
        free = 0
        nfree = 0
        for l in lits:
            if l in true:
                nfree = -1
                break
            if -l not in true:
                nfree += 1
                free = l
        if nfree == 0:
            hints.append(sid)
            return hints
        if nfree == 1:
            hints.append(sid)
            true.add(free)
    return None


def justify(mgr: Manager, x: int, target: List[int], high: List[Support], low: List[Support],
            high_taut: bool, low_taut: bool) -> int:
    trace = mgr.trace
    if high_taut:
        hints = propagation_hints(target, high + low)
        if hints is not None:
            return trace.emit_rup(target, hints)
    if low_taut:
        hints = propagation_hints(target, low + high)
        if hints is not None:
            return trace.emit_rup(target, hints)
    weak = [-x] + target
    hints = propagation_hints(weak, high)
    if hints is None:
        raise ProofError("cannot justify %s from high-side support" % weak)
    s1 = trace.emit_rup(weak, hints)
    hints = propagation_hints(target, [(s1, weak)] + low)
    if hints is None:
        raise ProofError("cannot justify %s from low-side support" % target)
    s2 = trace.emit_rup(target, hints)
    trace.emit_delete([s1])
    return s2


def clause_to_bdd(mgr: Manager, clause: Sequence[int], cid: int) -> Tuple[Node, int]:
    """BDD for input clause `cid` plus a RUP step proving its root's unit clause.

    Returns (LEAF0, 0) for the empty clause and (LEAF1, 0) for a tautology.
    """
    lits = []
    for l in clause:
        if -l in lits:
            return LEAF1, 0
        if l not in lits:
            lits.append(l)
    if not lits:
        return LEAF0, 0
    level = mgr.var_to_level
    lits.sort(key=lambda l: level[abs(l)], reverse=True)
    node = LEAF0
    chain = []
    for l in lits:
        if l > 0:
            node = mgr.get_node(level[l], LEAF1, node)
        else:
            node = mgr.get_node(level[-l], node, LEAF1)
        chain.append((l, node))
    hints = []
    for l, n in reversed(chain):
        first, second = (n.hu, n.lu) if l > 0 else (n.lu, n.hu)
        if first is not None:
            hints.append(first)
        if second is not None:
            hints.append(second)
    hints.append(cid)
    return node, mgr.trace.emit_rup([node.xvar], hints)


def and_apply(mgr: Manager, u: Node, v: Node) -> Tuple[Node, int]:
    if u is v:
        return u, 0
    if u is LEAF0 or v is LEAF0:
        return LEAF0, 0
    if u is LEAF1:
        return v, 0
    if v is LEAF1:
        return u, 0
    if u.id > v.id:
        u, v = v, u
    key = (AND, u, v)
    hit = mgr.cache.get(key)
    if hit is not None:
        return hit
    mgr.and_recursions += 1
    level = u.level if u.level < v.level else v.level
    x = mgr.level_to_var[level]
    high: List[Support] = []
    low: List[Support] = []
    if u.level == level:
        u1, u0 = u.hi, u.lo
        if u.hd is not None:
            high.append((u.hd, make_clause(-u.xvar, -x, pos(u1))))
        if u.ld is not None:
            low.append((u.ld, make_clause(-u.xvar, x, pos(u0))))
    else:
        u1 = u0 = u
    if v.level == level:
        v1, v0 = v.hi, v.lo
        if v.hd is not None:
            high.append((v.hd, make_clause(-v.xvar, -x, pos(v1))))
        if v.ld is not None:
            low.append((v.ld, make_clause(-v.xvar, x, pos(v0))))
    else:
        v1 = v0 = v
    w1, s1 = and_apply(mgr, u1, v1)
    w0, s0 = and_apply(mgr, u0, v0)
    if w1 is w0:
        w = w1
    else:
        w = mgr.get_node(level, w1, w0)
        if w.hu is not None:
            high.append((w.hu, make_clause(w.xvar, -x, neg(w1))))
        if w.lu is not None:
            low.append((w.lu, make_clause(w.xvar, x, neg(w0))))
    target = make_clause(-u.xvar, -v.xvar, pos(w))
    if target is None:
        step = 0
    else:
        if s1:
            high.append((s1, make_clause(neg(u1), neg(v1), pos(w1))))
        if s0:
            low.append((s0, make_clause(neg(u0), neg(v0), pos(w0))))
        step = justify(mgr, x, target, high, low, s1 == 0, s0 == 0)
    result = (w, step)
    mgr.cache[key] = result
    return result


def imply_check(mgr: Manager, u: Node, v: Node) -> int:
    """Step proving ``-u v``; ProofError if u does not imply v."""
    if u is v or u is LEAF0 or v is LEAF1:
        return 0
    if u is LEAF1 or v is LEAF0:
        raise ProofError("implication does not hold")
    key = (IMPLY, u, v)
    hit = mgr.cache.get(key)
    if hit is not None:
        return hit[1]
    level = u.level if u.level < v.level else v.level
    x = mgr.level_to_var[level]
    high: List[Support] = []
    low: List[Support] = []
    if u.level == level:
        u1, u0 = u.hi, u.lo
        if u.hd is not None:
            high.append((u.hd, make_clause(-u.xvar, -x, pos(u1))))
        if u.ld is not None:
            low.append((u.ld, make_clause(-u.xvar, x, pos(u0))))
    else:
        u1 = u0 = u
    if v.level == level:
        v1, v0 = v.hi, v.lo
        if v.hu is not None:
            high.append((v.hu, make_clause(v.xvar, -x, neg(v1))))
        if v.lu is not None:
            low.append((v.lu, make_clause(v.xvar, x, neg(v0))))
    else:
        v1 = v0 = v
    s1 = imply_check(mgr, u1, v1)
    s0 = imply_check(mgr, u0, v0)
    if s1:
        high.append((s1, make_clause(neg(u1), pos(v1))))
    if s0:
        low.append((s0, make_clause(neg(u0), pos(v0))))
    step = justify(mgr, x, [-u.xvar, v.xvar], high, low, s1 == 0, s0 == 0)
    mgr.cache[key] = (None, step)
    return step


def or_apply(mgr: Manager, u: Node, v: Node) -> Node:
    """Disjunction without proof output (new nodes still get defining clauses)."""
    if u is v or v is LEAF0:
        return u
    if u is LEAF0:
        return v
    if u is LEAF1 or v is LEAF1:
        return LEAF1
    if u.id > v.id:
        u, v = v, u
    key = (OR, u, v)
    hit = mgr.cache.get(key)
    if hit is not None:
        return hit[0]
    level = u.level if u.level < v.level else v.level
    if u.level == level:
        u1, u0 = u.hi, u.lo
    else:
        u1 = u0 = u
    if v.level == level:
        v1, v0 = v.hi, v.lo
    else:
        v1 = v0 = v
    w = mgr.get_node(level, or_apply(mgr, u1, v1), or_apply(mgr, u0, v0))
    mgr.cache[key] = (w, 0)
    return w


def exists(mgr: Manager, u: Node, variables: Iterable[int]) -> Node:
    """Existentially quantify external `variables` out of `u` in one pass."""
    levels = frozenset(mgr.var_to_level[v] for v in variables)
    if not levels:
        return u
    bottom = max(levels)
    qkey = (EXISTS, levels)

    def rec(n: Node) -> Node:
        if n.level > bottom:
            return n
        key = (qkey, n)
        hit = mgr.cache.get(key)
        if hit is not None:
            return hit[0]
        h = rec(n.hi)
        if n.level in levels:
            r = LEAF1 if h is LEAF1 else or_apply(mgr, h, rec(n.lo))
        else:
            r = mgr.get_node(n.level, h, rec(n.lo))
        mgr.cache[key] = (r, 0)
        return r

    return rec(u)
