"""BDD-based SAT solving with extended-resolution proof output.

Every live root carries the id of a unit clause asserting its extension
variable, derived from the input clauses.  Conjunction and quantification
results get their unit clause from the operands' units plus the step
returned by the proof-generating operation; reaching LEAF0 yields the empty
clause.
"""

from __future__ import annotations

import random
import sys
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence

from . import apply as ops
from .bdd import LEAF0, LEAF1, Manager, Node
from .cnf import Cnf
from .schedule import Conjoin, Push, Quantify, ScheduleCmd, validate_schedule
from .trace import ResourceLimit, Trace

MODES = ("linear", "bucket", "scheduled")

UNSAT, SAT, UNKNOWN = "UNSAT", "SAT", "UNKNOWN"


@dataclass
class Root:
    node: Node
    unit: int


@dataclass
class Verdict:
    status: str
    empty_step: Optional[int] = None
    witness: Optional[Dict[int, bool]] = None
    reason: str = ""


@dataclass
class SolveStats:
    variables: int
    clauses: int
    total_proof_clauses: int
    max_live_clauses: int
    total_bdd_nodes: int
    solve_seconds: float
    extra: Dict[str, int] = field(default_factory=dict)

    def lines(self) -> List[str]:
        return [
            "variables=%d" % self.variables,
            "clauses=%d" % self.clauses,
            "total-proof-clauses=%d" % self.total_proof_clauses,
            "max-live-clauses=%d" % self.max_live_clauses,
            "total-bdd-nodes=%d" % self.total_bdd_nodes,
            "solve-seconds=%.3f" % self.solve_seconds,
        ]


class _Unsat(Exception):
    def __init__(self, step: int):
        self.step = step


def random_ordering(num_vars: int, seed: int) -> List[int]:
    order = list(range(1, num_vars + 1))
    random.Random(seed).shuffle(order)
    return order


class Solver:
    def __init__(self, cnf: Cnf, trace: Optional[Trace] = None, ordering: Optional[Sequence[int]] = None,
                 max_nodes: Optional[int] = None, delete_inputs: bool = False, gc_floor: int = 50000):
        self.cnf = cnf
        self.trace = trace if trace is not None else Trace()
        self.trace.load_inputs(cnf)
        self.mgr = Manager(cnf.num_vars, self.trace, ordering, max_nodes=max_nodes, gc_floor=gc_floor)
        self.delete_inputs = delete_inputs
        self.verdict: Optional[Verdict] = None
        self.seconds = 0.0
        limit = 4 * cnf.num_vars + 1000
        if sys.getrecursionlimit() < limit:
            sys.setrecursionlimit(limit)

    # Root operations

    def clause_root(self, cid: int) -> Root:
        node, step = ops.clause_to_bdd(self.mgr, self.cnf.clause(cid), cid)
        if node is LEAF0:
            raise _Unsat(self.trace.emit_rup([], [cid]))
        if self.delete_inputs:
            self.trace.emit_delete([cid])
        self.mgr.addref(node)
        return Root(node, step)

    def release(self, root: Root) -> None:
        self.mgr.delref(root.node)
        if root.unit:
            self.trace.emit_delete([root.unit])
            root.unit = 0

    def combine_roots(self, a: Root, b: Root) -> Root:
        """Conjoin two roots.  Raises _Unsat carrying the empty-clause id on LEAF0."""
        w, step = ops.and_apply(self.mgr, a.node, b.node)
        hints = [h for h in (a.unit, b.unit, step) if h]
        if w is LEAF0:
            raise _Unsat(self.trace.emit_rup([], hints))
        if w is a.node:
            self.release(b)
            return a
        if w is b.node:
            self.release(a)
            return b
        unit = self.trace.emit_rup([w.xvar], hints)
        self.mgr.addref(w)
        self.release(a)
        self.release(b)
        self.mgr.maybe_gc()
        return Root(w, unit)

    def quantify_root(self, a: Root, variables: Iterable[int]) -> Root:
        if a.node is LEAF1:
            return a
        v = ops.exists(self.mgr, a.node, variables)
        if v is a.node:
            return a
        step = ops.imply_check(self.mgr, a.node, v)
        if v is LEAF1:
            self.release(a)
            return Root(LEAF1, 0)
        unit = self.trace.emit_rup([v.xvar], [h for h in (a.unit, step) if h])
        self.mgr.addref(v)
        self.release(a)
        self.mgr.maybe_gc()
        return Root(v, unit)

    def conjoin_fifo(self, roots: Iterable[Root]) -> Root:
        queue = deque(roots)
        if not queue:
            return Root(LEAF1, 0)
        while len(queue) > 1:
            a = queue.popleft()
            b = queue.popleft()
            queue.append(self.combine_roots(a, b))
        return queue[0]

    # Evaluation mechanisms

    def _run(self, body) -> Verdict:
        start = time.perf_counter()
        try:
            self.verdict = body()
        except _Unsat as u:
            self.verdict = Verdict(UNSAT, empty_step=u.step)
        except ResourceLimit as e:
            self.verdict = Verdict(UNKNOWN, reason=str(e))
        self.seconds = time.perf_counter() - start
        w = self.verdict.witness
        if self.verdict.status == SAT and not self.cnf.satisfied_by(w):
            raise AssertionError("witness does not satisfy the formula")
        return self.verdict

    def solve_linear(self) -> Verdict:
        def body():
            roots = [self.clause_root(cid) for cid in range(1, self.cnf.num_clauses + 1)]
            final = self.conjoin_fifo(roots)
            return Verdict(SAT, witness=self._complete(self.mgr.satisfying_path(final.node)))
        return self._run(body)

    def solve_bucket(self) -> Verdict:
        mgr = self.mgr
        kept: List[tuple] = []

        def body():
            buckets: Dict[int, deque] = {}

            def place(r: Root):
                if r.node is not LEAF1:
                    buckets.setdefault(r.node.level, deque()).append(r)

            for cid in range(1, self.cnf.num_clauses + 1):
                place(self.clause_root(cid))
            for level in range(1, self.cnf.num_vars + 1):
                bucket = buckets.pop(level, None)
                if not bucket:
                    continue
                while len(bucket) > 1:
                    r = self.combine_roots(bucket.popleft(), bucket.popleft())
                    if r.node.level == level:
                        bucket.append(r)
                    else:
                        place(r)
                if bucket:
                    r = bucket[0]
                    mgr.addref(r.node)
                    kept.append((level, r.node))
                    place(self.quantify_root(r, [mgr.level_to_var[level]]))
            return Verdict(SAT, witness=self._bucket_witness(kept))

        return self._run(body)

    def solve_scheduled(self, schedule: Sequence[ScheduleCmd]) -> Verdict:
        validate_schedule(schedule, self.cnf.num_clauses, self.cnf.num_vars)

        def body():
            stack: List[Root] = []
            used = set()
            for cmd in schedule:
                if isinstance(cmd, Push):
                    for cid in cmd.clauses:
                        used.add(cid)
                        stack.append(self.clause_root(cid))
                elif isinstance(cmd, Conjoin):
                    items = stack[-cmd.count:]
                    del stack[-cmd.count:]
                    stack.append(self.conjoin_fifo(items))
                elif isinstance(cmd, Quantify):
                    stack.append(self.quantify_root(stack.pop(), cmd.variables))
            for cid in range(1, self.cnf.num_clauses + 1):
                if cid not in used:
                    stack.append(self.clause_root(cid))
            self.conjoin_fifo(stack)
            witness = find_witness(self.cnf)
            if witness is None:
                return Verdict(UNKNOWN, reason="schedule quantified variables too early; no refutation found")
            return Verdict(SAT, witness=witness)

        return self._run(body)

    # Witnesses

    def _complete(self, partial: Optional[Dict[int, bool]]) -> Dict[int, bool]:
        full = {v: False for v in range(1, self.cnf.num_vars + 1)}
        full.update(partial or {})
        return full

    def _bucket_witness(self, kept: List[tuple]) -> Dict[int, bool]:
        assignment: Dict[int, bool] = {}
        for level, node in reversed(kept):
            var = self.mgr.level_to_var[level]
            assignment[var] = True
            if not self.mgr.evaluate(node, assignment):
                assignment[var] = False
        return self._complete(assignment)

    def stats(self) -> SolveStats:
        return SolveStats(
            variables=self.cnf.num_vars,
            clauses=self.cnf.num_clauses,
            total_proof_clauses=self.trace.total_clauses,
            max_live_clauses=self.trace.max_live,
            total_bdd_nodes=self.mgr.nodes_created,
            solve_seconds=self.seconds,
            extra={"gc-runs": self.mgr.gc_runs, "peak-live-nodes": self.mgr.peak_nodes,
                   "and-recursions": self.mgr.and_recursions},
        )


def find_witness(cnf: Cnf) -> Optional[Dict[int, bool]]:
    """Satisfying assignment by plain linear conjunction, or None if UNSAT."""
    v = Solver(cnf).solve_linear()
    return v.witness if v.status == SAT else None


def solve(cnf: Cnf, mode: str = "bucket", trace: Optional[Trace] = None,
          ordering: Optional[Sequence[int]] = None, seed: Optional[int] = None,
          schedule: Optional[Sequence[ScheduleCmd]] = None, max_nodes: Optional[int] = None,
          delete_inputs: bool = False) -> Solver:
    """Run one solve and return the Solver (verdict, trace and statistics attached)."""
    if mode not in MODES:
        raise ValueError("unknown mode %r" % mode)
    if ordering is None and seed is not None:
        ordering = random_ordering(cnf.num_vars, seed)
    solver = Solver(cnf, trace, ordering, max_nodes=max_nodes, delete_inputs=delete_inputs)
    if mode == "linear":
        solver.solve_linear()
    elif mode == "bucket":
        solver.solve_bucket()
    else:
        if schedule is None:
            raise ValueError("scheduled mode requires a schedule")
        solver.solve_scheduled(schedule)
    solver.trace.finalize()
    return solver
