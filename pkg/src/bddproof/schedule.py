"""Stack-machine schedules for scheduled evaluation.

One command per line::

    c <clause id>+    push the BDDs of these input clauses
    a <m>             replace the top m stack entries by their conjunction
    q <var>+          existentially quantify these variables from the top entry

Blank lines and lines starting with ``#`` are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union


class ScheduleError(ValueError):
    def __init__(self, message: str, line: int = None):
        self.line = line
        if line is not None:
            message = "schedule line %d: %s" % (line, message)
        super().__init__(message)


@dataclass(frozen=True)
class Push:
    clauses: Tuple[int, ...]


@dataclass(frozen=True)
class Conjoin:
    count: int


@dataclass(frozen=True)
class Quantify:
    variables: Tuple[int, ...]


ScheduleCmd = Union[Push, Conjoin, Quantify]


def parse_schedule(text: str) -> List[ScheduleCmd]:
    cmds: List[ScheduleCmd] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        op, args = fields[0], fields[1:]
        try:
            nums = [int(a) for a in args]
        except ValueError:
            raise ScheduleError("non-integer argument in %r" % line, lineno) from None
        if any(n <= 0 for n in nums):
            raise ScheduleError("arguments must be positive", lineno)
        if op == "c":
            if not nums:
                raise ScheduleError("'c' needs at least one clause id", lineno)
            cmds.append(Push(tuple(nums)))
        elif op == "a":
            if len(nums) != 1:
                raise ScheduleError("'a' takes exactly one count", lineno)
            if nums[0] < 2:
                raise ScheduleError("'a' needs a count of at least 2", lineno)
            cmds.append(Conjoin(nums[0]))
        elif op == "q":
            if not nums:
                raise ScheduleError("'q' needs at least one variable", lineno)
            cmds.append(Quantify(tuple(nums)))
        else:
            raise ScheduleError("unknown command %r" % op, lineno)
    return cmds


def format_schedule(cmds: Sequence[ScheduleCmd]) -> str:
    lines = []
    for cmd in cmds:
        if isinstance(cmd, Push):
            lines.append("c " + " ".join(map(str, cmd.clauses)))
        elif isinstance(cmd, Conjoin):
            lines.append("a %d" % cmd.count)
        else:
            lines.append("q " + " ".join(map(str, cmd.variables)))
    return "".join(l + "\n" for l in lines)


def validate_schedule(cmds: Sequence[ScheduleCmd], num_clauses: int, num_vars: int) -> None:
    """Reject references to missing clauses/variables and stack underflow."""
    depth = 0
    for k, cmd in enumerate(cmds, start=1):
        if isinstance(cmd, Push):
            bad = [c for c in cmd.clauses if c > num_clauses]
            if bad:
                raise ScheduleError("command %d: clause %d does not exist" % (k, bad[0]))
            depth += len(cmd.clauses)
        elif isinstance(cmd, Conjoin):
            if cmd.count < 2:
                raise ScheduleError("command %d: conjunction of fewer than 2 entries" % k)
            if cmd.count > depth:
                raise ScheduleError("command %d: conjoining %d entries with stack depth %d"
                                    % (k, cmd.count, depth))
            depth -= cmd.count - 1
        else:
            bad = [v for v in cmd.variables if v > num_vars]
            if bad:
                raise ScheduleError("command %d: variable %d does not exist" % (k, bad[0]))
            if depth == 0:
                raise ScheduleError("command %d: quantifying an empty stack" % k)


def strip_quantification(cmds: Sequence[ScheduleCmd]) -> List[ScheduleCmd]:
    return [c for c in cmds if not isinstance(c, Quantify)]
