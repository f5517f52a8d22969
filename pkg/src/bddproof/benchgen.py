"""Generators for the parity, Urquhart, mutilated chessboard and pigeonhole families.

Each generator returns a :class:`BenchBundle`: the CNF, optionally a
variable ordering (top to bottom) and optionally a column-scan schedule.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .cnf import Cnf, check_permutation, format_order
from .schedule import Conjoin, Push, Quantify, ScheduleCmd, format_schedule, validate_schedule


@dataclass
class BenchBundle:
    cnf: Cnf
    order: Optional[List[int]] = None
    schedule: Optional[List[ScheduleCmd]] = None

    def __post_init__(self):
        if self.order is not None:
            check_permutation(self.order, self.cnf.num_vars)
        if self.schedule is not None:
            validate_schedule(self.schedule, self.cnf.num_clauses, self.cnf.num_vars)

    def write(self, stem: str) -> List[str]:
        """Write ``stem.cnf`` plus ``.order``/``.sched`` when present; returns the paths."""
        paths = [stem + ".cnf"]
        with open(paths[0], "w") as f:
            self.cnf.write(f)
        if self.order is not None:
            paths.append(stem + ".order")
            with open(paths[-1], "w") as f:
                f.write(format_order(self.order))
        if self.schedule is not None:
            paths.append(stem + ".sched")
            with open(paths[-1], "w") as f:
                f.write(format_schedule(self.schedule))
        return paths


def xor_clauses(a: int, b: int, c: int) -> List[List[int]]:
    """Clauses for ``a XOR b = c`` over literals."""
    return [[-a, -b, -c], [a, b, -c], [a, -b, c], [-a, b, c]]


def parity_clauses(lits: List[int], odd: bool) -> List[List[int]]:
    """Direct CNF of ``XOR(lits) = odd``: one clause per forbidden assignment."""
    out = []
    for signs in itertools.product((1, -1), repeat=len(lits)):
        # The clause falsified exactly by the assignment making each literal
        # false where sign=1 and true where sign=-1.
        ones = sum(1 for s in signs if s < 0)
        if (ones % 2 == 1) != odd:
            out.append([s * l for s, l in zip(signs, lits)])
    return out


# Reordered parity


def gen_parity(n: int, seed: int = 0) -> BenchBundle:
    """x1^...^xn = 1 and, over a shuffled order with one input negated, also = 1.

    Variables: inputs 1..n, then n-1 chain outputs for each of the two sums.
    """
    if n < 2:
        raise ValueError("parity needs n >= 2")
    rng = random.Random(seed)
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    flip = rng.randrange(n)
    terms = [-x if i == flip else x for i, x in enumerate(perm)]
    clauses: List[List[int]] = []
    next_var = n + 1

    def chain(inputs):
        nonlocal next_var
        acc = inputs[0]
        for t in inputs[1:]:
            out = next_var
            next_var += 1
            clauses.extend(xor_clauses(acc, t, out))
            acc = out
        return acc

    a = chain(list(range(1, n + 1)))
    b = chain(terms)
    clauses.append([a])
    clauses.append([b])
    comments = ["reordered parity n=%d seed=%d" % (n, seed),
                "permutation %s" % " ".join(map(str, perm)),
                "negated input %d" % perm[flip]]
    return BenchBundle(Cnf(next_var - 1, clauses, comments))


# Urquhart formulas


def margulis_edges(m: int) -> List[Tuple[int, int]]:
    """Bipartite Gabber-Galil/Margulis expander on Z_m x Z_m, parallel edges merged."""
    edges = []
    seen = set()
    for x in range(m):
        for y in range(m):
            left = x * m + y
            for (a, b) in ((x, y), (x, (x + y) % m), (x, (x + y + 1) % m),
                           ((x + y) % m, y), ((x + y + 1) % m, y)):
                e = (left, a * m + b)
                if e not in seen:
                    seen.add(e)
                    edges.append(e)
    return edges


def random_bipartite_edges(m: int, seed: int, degree: int = 5) -> List[Tuple[int, int]]:
    """Union of `degree` random perfect matchings between two sides of size m^2."""
    rng = random.Random(seed)
    size = m * m
    edges = []
    seen = set()
    for _ in range(degree):
        right = list(range(size))
        rng.shuffle(right)
        for left, r in enumerate(right):
            if (left, r) not in seen:
                seen.add((left, r))
                edges.append((left, r))
    edges.sort()
    return edges


def urquhart_cnf(m: int, edges: List[Tuple[int, int]], comments: List[str]) -> Cnf:
    size = m * m
    incident: Dict[int, List[int]] = {v: [] for v in range(2 * size)}
    for var, (l, r) in enumerate(edges, start=1):
        incident[l].append(var)
        incident[size + r].append(var)
    counts: Dict[int, int] = {}
    clauses = []
    for vertex in range(2 * size):
        lits = incident[vertex]
        if len(lits) > 5:
            raise AssertionError("vertex degree exceeds 5")
        polarity = vertex == 0
        clauses.extend(parity_clauses(lits, polarity))
        for v in lits:
            counts[v] = counts.get(v, 0) + 1
    if any(c != 2 for c in counts.values()) or len(counts) != len(edges):
        raise AssertionError("edge variable not shared by exactly two vertices")
    return Cnf(len(edges), clauses, comments)


def gen_urquhart_li(m: int) -> BenchBundle:
    if m < 3:
        raise ValueError("Urquhart formulas need m >= 3")
    edges = margulis_edges(m)
    return BenchBundle(urquhart_cnf(m, edges, ["urquhart (margulis graph) m=%d" % m]))


def gen_urquhart_simon(m: int, seed: int = 0) -> BenchBundle:
    if m < 3:
        raise ValueError("Urquhart formulas need m >= 3")
    edges = random_bipartite_edges(m, seed)
    return BenchBundle(urquhart_cnf(m, edges, ["urquhart (random graph) m=%d seed=%d" % (m, seed)]))


# Mutilated chessboard


def gen_chess(n: int) -> BenchBundle:
    """Domino tiling of an n x n board missing its upper-left and lower-right squares.

    x(i,j) joins squares (i,j) and (i,j+1); y(i,j) joins (i,j) and (i+1,j).
    Edges into the removed squares get no variable.
    """
    if n < 4 or n % 2:
        raise ValueError("chessboard needs even n >= 4")
    removed = {(1, 1), (n, n)}
    xv: Dict[Tuple[int, int], int] = {}
    yv: Dict[Tuple[int, int], int] = {}
    var = 0
    for i in range(1, n + 1):
        for j in range(1, n):
            if (i, j) in removed or (i, j + 1) in removed:
                continue
            var += 1
            xv[i, j] = var
    for i in range(1, n):
        for j in range(1, n + 1):
            if (i, j) in removed or (i + 1, j) in removed:
                continue
            var += 1
            yv[i, j] = var

    clauses: List[List[int]] = []
    schedule: List[ScheduleCmd] = []
    for j in range(1, n + 1):
        first = len(clauses) + 1
        for i in range(1, n + 1):
            if (i, j) in removed:
                continue
            edges = [v for v in (yv.get((i - 1, j)), xv.get((i, j - 1)),
                                 xv.get((i, j)), yv.get((i, j))) if v is not None]
            clauses.append(list(edges))
            for a, b in itertools.combinations(edges, 2):
                clauses.append([-a, -b])
        ids = tuple(range(first, len(clauses) + 1))
        schedule.append(Push(ids))
        schedule.append(Conjoin(len(ids)))
        col_y = tuple(yv[i, j] for i in range(1, n) if (i, j) in yv)
        if col_y:
            schedule.append(Quantify(col_y))
        if j > 1:
            schedule.append(Conjoin(2))
            prev_x = tuple(xv[i, j - 1] for i in range(1, n + 1) if (i, j - 1) in xv)
            schedule.append(Quantify(prev_x))

    order = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if (i, j) in xv:
                order.append(xv[i, j])
            if (i, j) in yv:
                order.append(yv[i, j])
    cnf = Cnf(var, clauses, ["mutilated chessboard n=%d" % n])
    return BenchBundle(cnf, order, schedule)


# Pigeonhole


def gen_pigeon_sinz(n: int) -> BenchBundle:
    """n+1 pigeons into n holes; at-most-one per hole through a signal chain.

    p(i,j): pigeon j in hole i (1<=j<=n+1); s(i,j): hole i taken by a pigeon <= j.
    """
    if n < 2:
        raise ValueError("pigeonhole needs n >= 2")

    def p(i, j):
        return (i - 1) * (n + 1) + j

    def s(i, j):
        return n * (n + 1) + (i - 1) * n + j

    clauses: List[List[int]] = []
    by_pigeon: Dict[int, List[int]] = {j: [] for j in range(1, n + 2)}

    def add(j, clause):
        clauses.append(clause)
        by_pigeon[j].append(len(clauses))

    for j in range(1, n + 2):
        add(j, [p(i, j) for i in range(1, n + 1)])
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            add(j, [-p(i, j), s(i, j)])
        for j in range(2, n + 1):
            add(j, [-s(i, j - 1), s(i, j)])
        for j in range(2, n + 2):
            add(j, [-s(i, j - 1), -p(i, j)])

    schedule: List[ScheduleCmd] = []
    for j in range(1, n + 2):
        ids = tuple(by_pigeon[j])
        schedule.append(Push(ids))
        schedule.append(Conjoin(len(ids)))
        schedule.append(Quantify(tuple(p(i, j) for i in range(1, n + 1))))
        if j > 1:
            schedule.append(Conjoin(2))
            schedule.append(Quantify(tuple(s(i, j - 1) for i in range(1, n + 1))))

    order = []
    for i in range(1, n + 1):
        for j in range(1, n + 2):
            order.append(p(i, j))
            if j <= n:
                order.append(s(i, j))
    cnf = Cnf(n * (2 * n + 1), clauses, ["pigeonhole sinz n=%d" % n])
    return BenchBundle(cnf, order, schedule)


def gen_pigeon_direct(n: int) -> BenchBundle:
    if n < 1:
        raise ValueError("pigeonhole needs n >= 1")

    def p(i, j):
        return (i - 1) * (n + 1) + j

    clauses = [[p(i, j) for i in range(1, n + 1)] for j in range(1, n + 2)]
    for i in range(1, n + 1):
        for j, k in itertools.combinations(range(1, n + 2), 2):
            clauses.append([-p(i, j), -p(i, k)])
    return BenchBundle(Cnf(n * (n + 1), clauses, ["pigeonhole direct n=%d" % n]))


FAMILIES = {
    "parity": gen_parity,
    "chess": gen_chess,
    "pigeon-sinz": gen_pigeon_sinz,
    "pigeon-direct": gen_pigeon_direct,
    "urquhart-li": gen_urquhart_li,
    "urquhart-simon": gen_urquhart_simon,
}
