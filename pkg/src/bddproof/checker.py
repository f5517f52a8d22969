"""Independent LRAT checker with blocked-clause additions.

An addition with hints is checked by reverse unit propagation in strict
mode: every positive hint must be unit or falsified when reached.  An
addition with no hints must be blocked on its first literal with respect to
the live clauses.  Negative hints select RAT checking on the first literal,
where each listed clause ``-j`` is followed by the hints for the resolvent.
Deletions must name live clauses.  The proof is accepted once an empty
clause verifies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Set, TextIO, Union

BAD_HINT = "bad-hint"
NO_CONFLICT = "no-conflict"
NOT_BLOCKED = "not-blocked"
DEAD_DELETE = "dead-delete"
PARSE_ERROR = "parse-error"
NO_EMPTY_CLAUSE = "no-empty-clause"


@dataclass
class CheckResult:
    accepted: bool
    step: Optional[int] = None
    reason: str = ""
    detail: str = ""
    clauses_checked: int = 0
    peak_live: int = 0
    non_fresh_pivots: int = 0

    def __bool__(self):
        return self.accepted

    def describe(self) -> str:
        if self.accepted:
            return "ACCEPT (%d clauses checked, peak live %d)" % (self.clauses_checked, self.peak_live)
        where = "" if self.step is None else " at step %d" % self.step
        return "REJECT %s%s: %s" % (self.reason, where, self.detail)


class _Fail(Exception):
    def __init__(self, reason: str, detail: str = ""):
        self.reason = reason
        self.detail = detail


class CheckerState:
    def __init__(self, clauses: Iterable[Sequence[int]]):
        self.clauses: Dict[int, List[int]] = {}
        self.occurs: Dict[int, Set[int]] = {}
        self.last_id = 0
        self.peak_live = 0
        for cid, clause in enumerate(clauses, start=1):
            self.add(cid, list(clause))

    def add(self, cid: int, clause: List[int]) -> None:
        self.clauses[cid] = clause
        occurs = self.occurs
        for l in set(clause):
            s = occurs.get(l)
            if s is None:
                occurs[l] = {cid}
            else:
                s.add(cid)
        self.last_id = cid
        if len(self.clauses) > self.peak_live:
            self.peak_live = len(self.clauses)

    def remove(self, cid: int) -> None:
        clause = self.clauses.pop(cid)
        for l in set(clause):
            s = self.occurs[l]
            s.discard(cid)
            if not s:
                del self.occurs[l]

    def is_fresh(self, var: int) -> bool:
        """True when no live clause mentions `var`."""
        return var not in self.occurs and -var not in self.occurs

    def _propagate(self, true: Set[int], hints: Sequence[int]) -> bool:
        """Apply hints in order; True on conflict.  Raises _Fail for bad hints."""
        clauses = self.clauses
        for h in hints:
            body = clauses.get(h)
            if body is None:
                raise _Fail(BAD_HINT, "hint %d is not a live clause" % h)
            free = 0
            nfree = 0
            for l in body:
                if l in true:
                    raise _Fail(BAD_HINT, "hint %d is already satisfied" % h)
                if -l not in true:
                    nfree += 1
                    free = l
            if nfree == 0:
                return True
            if nfree > 1:
                raise _Fail(BAD_HINT, "hint %d is not unit" % h)
            true.add(free)
        return False

    def rup_verify(self, clause: Sequence[int], hints: Sequence[int]) -> None:
        true = set()
        for l in clause:
            if l in true:
                return
            true.add(-l)
        if not self._propagate(true, hints):
            raise _Fail(NO_CONFLICT, "hints exhausted without conflict")

    def blocked_verify(self, clause: Sequence[int]) -> bool:
        """Check blockedness on the first literal; returns whether the pivot was fresh."""
        if not clause:
            raise _Fail(NOT_BLOCKED, "empty clause cannot be blocked")
        pivot = clause[0]
        fresh = self.is_fresh(abs(pivot))
        rest = set(clause)
        if any(-l in rest for l in rest):
            return fresh
        for cid in self.occurs.get(-pivot, ()):
            other = self.clauses[cid]
            if any(-l in rest for l in other if l != -pivot):
                continue
            if any(-l in other for l in other):
                continue
            raise _Fail(NOT_BLOCKED, "non-tautological resolvent with clause %d" % cid)
        return fresh

    def rat_verify(self, clause: Sequence[int], hints: Sequence[int]) -> None:
        if not clause:
            raise _Fail(NO_CONFLICT, "RAT hints on the empty clause")
        pivot = clause[0]
        true = set()
        for l in clause:
            if l in true:
                return
            true.add(-l)
        k = 0
        while k < len(hints) and hints[k] > 0:
            k += 1
        if self._propagate(true, hints[:k]):
            return
        groups: Dict[int, List[int]] = {}
        while k < len(hints):
            j = -hints[k]
            k += 1
            start = k
            while k < len(hints) and hints[k] > 0:
                k += 1
            if j in groups:
                raise _Fail(BAD_HINT, "clause %d listed twice in RAT hints" % j)
            groups[j] = list(hints[start:k])
        for cid in sorted(self.occurs.get(-pivot, ())):
            other = self.clauses[cid]
            if any(l in true for l in other if l != -pivot):
                continue
            if cid not in groups:
                raise _Fail(NOT_BLOCKED, "no RAT hints for clause %d" % cid)
            local = set(true)
            for l in other:
                if l != -pivot:
                    local.add(-l)
            if any(-l in local for l in local):
                continue
            if not self._propagate(local, groups[cid]):
                raise _Fail(NO_CONFLICT, "RAT candidate %d: no conflict" % cid)


def check(cnf, lrat: Union[str, Iterable[str], TextIO]) -> CheckResult:
    """Check LRAT text (a string, an iterable of lines, or an open file) against `cnf`."""
    if isinstance(cnf, (list, tuple)):
        clauses = cnf
    else:
        clauses = cnf.clauses
    if isinstance(lrat, str):
        lrat = lrat.splitlines()
    state = CheckerState(clauses)
    checked = 0
    non_fresh = 0
    step = None
    try:
        for lineno, line in enumerate(lrat, start=1):
            toks = line.split()
            if not toks or toks[0] == "c":
                continue
            try:
                step = int(toks[0])
                if len(toks) > 1 and toks[1] == "d":
                    ids = [int(t) for t in toks[2:]]
                    if not ids or ids[-1] != 0 or 0 in ids[:-1]:
                        raise ValueError("bad deletion line")
                    for i in ids[:-1]:
                        if i not in state.clauses:
                            raise _Fail(DEAD_DELETE, "clause %d is not live" % i)
                        state.remove(i)
                    continue
                nums = [int(t) for t in toks[1:]]
                z = nums.index(0)
                lits = nums[:z]
                hints = nums[z + 1:]
                if not hints or hints[-1] != 0 or 0 in hints[:-1]:
                    raise ValueError("hint list not terminated by 0")
                hints = hints[:-1]
            except ValueError as e:
                raise _Fail(PARSE_ERROR, "line %d: %s" % (lineno, e)) from None
            if step <= state.last_id:
                raise _Fail(PARSE_ERROR, "clause id %d not increasing" % step)
            if not hints:
                if not state.blocked_verify(lits):
                    non_fresh += 1
            elif any(h < 0 for h in hints):
                state.rat_verify(lits, hints)
            else:
                state.rup_verify(lits, hints)
            state.add(step, lits)
            checked += 1
            if not lits:
                return CheckResult(True, step, clauses_checked=checked, peak_live=state.peak_live,
                                   non_fresh_pivots=non_fresh)
        step = None
        raise _Fail(NO_EMPTY_CLAUSE, "proof ended without deriving the empty clause")
    except _Fail as f:
        return CheckResult(False, step, f.reason, f.detail, checked, state.peak_live, non_fresh)


def check_files(cnf_path: str, lrat_path: str) -> CheckResult:
    from .cnf import read_dimacs
    cnf = read_dimacs(cnf_path)
    with open(lrat_path) as f:
        return check(cnf, f)
