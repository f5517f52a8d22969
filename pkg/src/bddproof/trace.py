"""Append-only extended-resolution proof trace with streaming LRAT output.

Clause ids 1..m are the input clauses.  Every added clause takes the next id;
deletion lines reuse the id of the most recently added clause.  Extension
(defining) clauses are written with an empty hint list, or, in the ``compat``
dialect, with one negative hint per earlier clause that contains the
complement of the pivot (all such resolvents are tautologies).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, TextIO

INPUT, RUP, EXTENSION, DELETION = "input", "rup", "extension", "deletion"

DIALECTS = ("empty-hints", "compat")


class ProofError(RuntimeError):
    """Internal inconsistency in proof emission.  Always a bug, never bad input."""


class ResourceLimit(Exception):
    """Raised when a configured node or clause ceiling is exceeded."""


@dataclass
class ProofStep:
    id: int
    kind: str
    clause: Optional[List[int]] = None
    hints: List[int] = field(default_factory=list)
    deleted_ids: List[int] = field(default_factory=list)


@dataclass
class TraceSummary:
    input_clauses: int
    total_clauses: int
    max_live: int
    deleted: int
    empty_clause: Optional[int]

    @property
    def complete(self) -> bool:
        return self.empty_clause is not None


class Trace:
    def __init__(self, out: Optional[TextIO] = None, dialect: str = "empty-hints",
                 self_check: bool = False, keep_steps: bool = False,
                 max_steps: Optional[int] = None):
        if dialect not in DIALECTS:
            raise ValueError("unknown LRAT dialect %r" % dialect)
        self.out = out
        self.dialect = dialect
        self.self_check = self_check
        self.max_steps = max_steps
        self.steps: Optional[List[ProofStep]] = [] if keep_steps else None
        self.num_inputs = 0
        self.next_id = 1
        self.live = set()
        self.max_live = 0
        self.deleted = 0
        self.empty_clause: Optional[int] = None
        # Clause bodies are kept only when a self-check needs them.
        self._bodies: Dict[int, List[int]] = {}

    @property
    def live_count(self) -> int:
        return len(self.live)

    @property
    def last_id(self) -> int:
        return self.next_id - 1

    @property
    def total_clauses(self) -> int:
        """Clauses added by the proof (inputs excluded)."""
        return self.next_id - 1 - self.num_inputs

    def load_inputs(self, cnf) -> "Trace":
        if self.next_id != 1:
            raise ProofError("inputs must be loaded before any proof step")
        m = len(cnf.clauses)
        self.num_inputs = m
        self.next_id = m + 1
        self.live = set(range(1, m + 1))
        self.max_live = m
        if self.self_check:
            for i, clause in enumerate(cnf.clauses, start=1):
                self._bodies[i] = list(clause)
        if self.steps is not None:
            for i, clause in enumerate(cnf.clauses, start=1):
                self.steps.append(ProofStep(i, INPUT, list(clause)))
        return self

    def _add(self, clause: Sequence[int], hints: Sequence[int], kind: str) -> int:
        if self.max_steps is not None and self.total_clauses >= self.max_steps:
            raise ResourceLimit("proof clause ceiling %d reached" % self.max_steps)
        sid = self.next_id
        self.next_id += 1
        self.live.add(sid)
        if len(self.live) > self.max_live:
            self.max_live = len(self.live)
        if self.out is not None:
            self.out.write("%d %s0 %s0\n" % (
                sid,
                "".join("%d " % l for l in clause),
                "".join("%d " % h for h in hints)))
        if self.self_check:
            self._bodies[sid] = list(clause)
        if self.steps is not None:
            self.steps.append(ProofStep(sid, kind, list(clause), list(hints)))
        if not clause and self.empty_clause is None:
            self.empty_clause = sid
        return sid

    def emit_rup(self, clause: Sequence[int], hints: Sequence[int]) -> int:
        if not hints:
            raise ProofError("RUP step without antecedents")
        live = self.live
        for h in hints:
            if h not in live:
                raise ProofError("antecedent %d is not live" % h)
        if self.self_check:
            self._check_rup(clause, hints)
        return self._add(clause, hints, RUP)

    def emit_extension(self, clauses: Sequence[Sequence[int]]) -> List[int]:
        """Add defining clauses of one fresh extension variable.

        The first literal of each clause is over the fresh variable and acts
        as the blocking pivot.
        """
        ids = []
        compat = self.dialect == "compat"
        for k, clause in enumerate(clauses):
            hints: List[int] = []
            if compat:
                neg = -clause[0]
                hints = [-ids[j] for j in range(k) if neg in clauses[j]]
            ids.append(self._add(clause, hints, EXTENSION))
        return ids

    def emit_delete(self, ids: Iterable[int]) -> None:
        ids = list(ids)
        if not ids:
            return
        live = self.live
        for i in ids:
            if i not in live:
                raise ProofError("deleting clause %d which is not live" % i)
            live.remove(i)
            self._bodies.pop(i, None)
        self.deleted += len(ids)
        if self.out is not None:
            self.out.write("%d d %s0\n" % (self.last_id, "".join("%d " % i for i in ids)))
        if self.steps is not None:
            self.steps.append(ProofStep(self.last_id, DELETION, deleted_ids=ids))

    def finalize(self) -> TraceSummary:
        if self.out is not None:
            self.out.flush()
        return TraceSummary(self.num_inputs, self.total_clauses, self.max_live,
                            self.deleted, self.empty_clause)

    def _check_rup(self, clause: Sequence[int], hints: Sequence[int]) -> None:
        true = {-l for l in clause}
        for h in hints:
            body = self._bodies.get(h)
            if body is None:
                raise ProofError("self-check: no body for clause %d" % h)
            free = None
            nfree = 0
            for l in body:
                if l in true:
                    raise ProofError("self-check: hint %d satisfied before use" % h)
                if -l not in true:
                    nfree += 1
                    free = l
            if nfree == 0:
                return
            if nfree > 1:
                raise ProofError("self-check: hint %d not unit" % h)
            true.add(free)
        raise ProofError("self-check: no conflict deriving %s" % list(clause))


def parse_lrat_line(line: str):
    """Split one LRAT line into ``(id, 'd', ids)`` or ``(id, 'a', lits, hints)``."""
    toks = line.split()
    sid = int(toks[0])
    if toks[1] == "d":
        ids = [int(t) for t in toks[2:]]
        if not ids or ids[-1] != 0:
            raise ValueError("deletion not terminated by 0")
        return sid, "d", ids[:-1]
    nums = [int(t) for t in toks[1:]]
    z = nums.index(0)
    lits = nums[:z]
    hints = nums[z + 1:]
    if not hints or hints[-1] != 0:
        raise ValueError("hint list not terminated by 0")
    return sid, "a", lits, hints[:-1]


def replay(lines: Iterable[str], num_inputs: int) -> TraceSummary:
    """Recompute summary statistics from LRAT text alone."""
    live = set(range(1, num_inputs + 1))
    max_live = len(live)
    added = 0
    deleted = 0
    empty = None
    for line in lines:
        if not line.strip():
            continue
        rec = parse_lrat_line(line)
        if rec[1] == "d":
            for i in rec[2]:
                live.remove(i)
            deleted += len(rec[2])
        else:
            sid, _, lits, hints = rec
            for h in hints:
                if abs(h) not in live:
                    raise ValueError("step %d references dead clause %d" % (sid, abs(h)))
            live.add(sid)
            added += 1
            max_live = max(max_live, len(live))
            if not lits and empty is None:
                empty = sid
    return TraceSummary(num_inputs, added, max_live, deleted, empty)
