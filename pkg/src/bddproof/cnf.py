"""CNF formulas and DIMACS reading/writing."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, TextIO


class DimacsError(ValueError):
    """Malformed DIMACS input.  Carries the offending line number when known."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)


@dataclass
class Cnf:
    num_vars: int
    clauses: List[List[int]] = field(default_factory=list)
    comments: List[str] = field(default_factory=list)

    def __post_init__(self):
        if self.num_vars < 0:
            raise ValueError("negative variable count")
        for idx, clause in enumerate(self.clauses):
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError("clause %d: literal %d out of range" % (idx + 1, lit))

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def clause(self, cid: int) -> List[int]:
        """Clause by its 1-based id."""
        return self.clauses[cid - 1]

    def satisfied_by(self, assignment) -> bool:
        """`assignment` maps variable -> bool; missing variables count as False."""
        for clause in self.clauses:
            if not any(assignment.get(abs(l), False) == (l > 0) for l in clause):
                return False
        return True

    def to_dimacs(self) -> str:
        lines = ["c %s" % c for c in self.comments]
        lines.append("p cnf %d %d" % (self.num_vars, len(self.clauses)))
        for clause in self.clauses:
            lines.append(" ".join(str(l) for l in clause) + " 0")
        return "\n".join(lines) + "\n"

    def write(self, out: TextIO) -> None:
        out.write(self.to_dimacs())


def parse_dimacs(text: str) -> Cnf:
    """Parse DIMACS CNF text.

    Comment lines (``c ...``) may appear anywhere.  Clauses may span lines or
    share a line; the clause count must match the header and no literal may
    exceed the declared variable count.
    """
    num_vars = None
    expected = None
    clauses: List[List[int]] = []
    comments: List[str] = []
    current: List[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line[0] == "c":
            comments.append(line[1:].strip())
            continue
        if line[0] == "%":
            # Trailer used by some benchmark archives.
            break
        if line[0] == "p":
            if num_vars is not None:
                raise DimacsError("duplicate header", lineno)
            fields = line.split()
            if len(fields) != 4 or fields[1] != "cnf":
                raise DimacsError("bad header %r" % line, lineno)
            try:
                num_vars, expected = int(fields[2]), int(fields[3])
            except ValueError:
                raise DimacsError("bad header %r" % line, lineno) from None
            if num_vars < 0 or expected < 0:
                raise DimacsError("negative count in header", lineno)
            continue
        if num_vars is None:
            raise DimacsError("clause before header", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError("bad token %r" % tok, lineno) from None
            if lit == 0:
                clauses.append(current)
                current = []
            elif abs(lit) > num_vars:
                raise DimacsError("literal %d exceeds variable count %d" % (lit, num_vars), lineno)
            else:
                current.append(lit)
    if num_vars is None:
        raise DimacsError("missing header")
    if current:
        raise DimacsError("last clause not terminated by 0")
    if len(clauses) != expected:
        raise DimacsError("header declares %d clauses, found %d" % (expected, len(clauses)))
    return Cnf(num_vars, clauses, comments)


def read_dimacs(path: str) -> Cnf:
    with open(path) as f:
        return parse_dimacs(f.read())


def parse_order(text: str, num_vars: int) -> List[int]:
    """Variable-order file: one variable id per line, forming a permutation."""
    order = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith("c"):
            continue
        for tok in line.split():
            try:
                order.append(int(tok))
            except ValueError:
                raise DimacsError("bad variable %r in order file" % tok, lineno) from None
    check_permutation(order, num_vars)
    return order


def check_permutation(order: Sequence[int], num_vars: int) -> None:
    if sorted(order) != list(range(1, num_vars + 1)):
        raise ValueError("ordering is not a permutation of 1..%d" % num_vars)


def format_order(order: Iterable[int]) -> str:
    return "".join("%d\n" % v for v in order)
