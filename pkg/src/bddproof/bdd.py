"""Reduced ordered BDD manager whose nodes double as extension variables.

Every node created by :meth:`Manager.get_node` receives a fresh extension
variable and up to four defining clauses encoding
``u <-> ITE(x, hi, lo)``, emitted to the proof trace in the order HD, LD, HU,
LU with the extension literal first:

    HD: -u -x hi      LD: -u x lo      HU: u -x -hi      LU: u x -lo

Leaf children turn literals into constants; tautological clauses are
dropped and false literals removed.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence

from .cnf import check_permutation
from .trace import ProofError, ResourceLimit, Trace

LEAF_LEVEL = 1 << 60


class Node:
    __slots__ = ("id", "level", "var", "hi", "lo", "xvar", "hd", "ld", "hu", "lu", "refs")

    def __init__(self, id, level, var, hi, lo, xvar):
        self.id = id
        self.level = level
        self.var = var
        self.hi = hi
        self.lo = lo
        self.xvar = xvar
        self.hd = self.ld = self.hu = self.lu = None
        self.refs = 0

    @property
    def is_leaf(self) -> bool:
        return self.level == LEAF_LEVEL

    def __repr__(self):
        if self is LEAF0:
            return "LEAF0"
        if self is LEAF1:
            return "LEAF1"
        return "Node(%d: x%d ? %s : %s)" % (self.xvar, self.var, _short(self.hi), _short(self.lo))


def _short(n: Node) -> str:
    if n is LEAF0:
        return "0"
    if n is LEAF1:
        return "1"
    return "N%d" % n.xvar


LEAF0 = Node(0, LEAF_LEVEL, 0, None, None, None)
LEAF1 = Node(-1, LEAF_LEVEL, 0, None, None, None)


def defining_clauses(x: int, u: int, hi: Node, lo: Node) -> List[Optional[List[int]]]:
    """[HD, LD, HU, LU] for extension variable `u`; None marks a tautology."""
    if hi is LEAF1:
        hd = None
        hu = [u, -x]
    elif hi is LEAF0:
        hd = [-u, -x]
        hu = None
    else:
        hd = [-u, -x, hi.xvar]
        hu = [u, -x, -hi.xvar]
    if lo is LEAF1:
        ld = None
        lu = [u, x]
    elif lo is LEAF0:
        ld = [-u, x]
        lu = None
    else:
        ld = [-u, x, lo.xvar]
        lu = [u, x, -lo.xvar]
    return [hd, ld, hu, lu]


class Manager:
    def __init__(self, num_input_vars: int, trace: Trace, ordering: Optional[Sequence[int]] = None,
                 max_nodes: Optional[int] = None, gc_floor: int = 50000):
        """`ordering` lists external variables from top (level 1) to bottom."""
        if num_input_vars < 0:
            raise ValueError("negative variable count")
        if ordering is None:
            ordering = range(1, num_input_vars + 1)
        ordering = list(ordering)
        check_permutation(ordering, num_input_vars)
        self.num_input_vars = num_input_vars
        self.trace = trace
        self.level_to_var = [0] + ordering
        self.var_to_level = [0] * (num_input_vars + 1)
        for level, v in enumerate(ordering, start=1):
            self.var_to_level[v] = level
        self.unique: Dict[tuple, Node] = {}
        self.cache: Dict[tuple, tuple] = {}
        self.next_xvar = num_input_vars + 1
        self.max_nodes = max_nodes
        self.nodes_created = 0
        self.gc_runs = 0
        self.peak_nodes = 0
        self.and_recursions = 0
        self.gc_floor = gc_floor
        self._gc_threshold = gc_floor
        self._var_nodes: Dict[int, Node] = {}

    def level(self, var: int) -> int:
        return self.var_to_level[var]

    def get_node(self, level: int, hi: Node, lo: Node) -> Node:
        if hi is lo:
            return hi
        key = (level, hi, lo)
        node = self.unique.get(key)
        if node is not None:
            return node
        if level >= hi.level or level >= lo.level:
            raise ProofError("ordering violation creating node at level %d" % level)
        if self.max_nodes is not None and self.nodes_created >= self.max_nodes:
            raise ResourceLimit("BDD node ceiling %d reached" % self.max_nodes)
        u = self.next_xvar
        self.next_xvar += 1
        x = self.level_to_var[level]
        node = Node(u, level, x, hi, lo, u)
        hd, ld, hu, lu = defining_clauses(x, u, hi, lo)
        present = [c for c in (hd, ld, hu, lu) if c is not None]
        ids = iter(self.trace.emit_extension(present))
        node.hd = next(ids) if hd is not None else None
        node.ld = next(ids) if ld is not None else None
        node.hu = next(ids) if hu is not None else None
        node.lu = next(ids) if lu is not None else None
        self.unique[key] = node
        self.nodes_created += 1
        if len(self.unique) > self.peak_nodes:
            self.peak_nodes = len(self.unique)
        return node

    def var_node(self, var: int) -> Node:
        if not 1 <= var <= self.num_input_vars:
            raise ValueError("variable %d out of range 1..%d" % (var, self.num_input_vars))
        return self.get_node(self.var_to_level[var], LEAF1, LEAF0)

    # Operation cache.  Values are (result, step) pairs; step 0 means tautology.

    def cache_get(self, op, args: Sequence) -> Optional[tuple]:
        return self.cache.get((op, *args))

    def cache_put(self, op, args: Sequence, result, step: int = 0) -> None:
        key = (op, *args)
        old = self.cache.get(key)
        if old is not None and old[1] and old[1] != step:
            self.trace.emit_delete([old[1]])
        self.cache[key] = (result, step)

    def clear_cache(self) -> None:
        steps = [s for _, s in self.cache.values() if s]
        self.cache.clear()
        self.trace.emit_delete(steps)

    # Reference counting and garbage collection.

    def addref(self, node: Node) -> None:
        if node.level != LEAF_LEVEL:
            node.refs += 1

    def delref(self, node: Node) -> None:
        if node.level == LEAF_LEVEL:
            return
        if node.refs <= 0:
            raise ProofError("reference count underflow on %r" % node)
        node.refs -= 1

    def gc(self) -> int:
        """Reclaim nodes unreachable from referenced roots.

        The whole operation cache is flushed first, deleting the justification
        clauses it holds; must not be called while an operation is in flight.
        """
        self.gc_runs += 1
        self.clear_cache()
        marked = set()
        stack = [n for n in self.unique.values() if n.refs > 0]
        while stack:
            n = stack.pop()
            if n.level == LEAF_LEVEL or n.id in marked:
                continue
            marked.add(n.id)
            stack.append(n.hi)
            stack.append(n.lo)
        dead_keys = [k for k, n in self.unique.items() if n.id not in marked]
        doomed = []
        for k in dead_keys:
            n = self.unique.pop(k)
            doomed.extend(s for s in (n.hd, n.ld, n.hu, n.lu) if s is not None)
            n.hd = n.ld = n.hu = n.lu = None
        self.trace.emit_delete(doomed)
        return len(dead_keys)

    def maybe_gc(self) -> int:
        if len(self.unique) < self._gc_threshold:
            return 0
        reclaimed = self.gc()
        self._gc_threshold = max(self.gc_floor, 2 * len(self.unique))
        return reclaimed

    # Inspection helpers.

    def node_count(self, root: Node) -> int:
        """Nodes reachable from `root`, leaves included."""
        seen = set()
        stack = [root]
        while stack:
            n = stack.pop()
            if id(n) in seen:
                continue
            seen.add(id(n))
            if n.level != LEAF_LEVEL:
                stack.append(n.hi)
                stack.append(n.lo)
        return len(seen)

    def support(self, root: Node) -> List[int]:
        """External variables the function depends on."""
        vars_ = set()
        seen = set()
        stack = [root]
        while stack:
            n = stack.pop()
            if n.level == LEAF_LEVEL or n.id in seen:
                continue
            seen.add(n.id)
            vars_.add(n.var)
            stack.append(n.hi)
            stack.append(n.lo)
        return sorted(vars_)

    def evaluate(self, root: Node, assignment) -> bool:
        n = root
        while n.level != LEAF_LEVEL:
            n = n.hi if assignment.get(n.var, False) else n.lo
        return n is LEAF1

    def satisfying_path(self, root: Node) -> Optional[Dict[int, bool]]:
        """Some assignment (over the path's variables) making `root` true."""
        if root is LEAF0:
            return None
        path = {}
        n = root
        while n.level != LEAF_LEVEL:
            if n.lo is not LEAF0:
                path[n.var] = False
                n = n.lo
            else:
                path[n.var] = True
                n = n.hi
        return path

    def live_nodes(self) -> Iterable[Node]:
        return self.unique.values()
