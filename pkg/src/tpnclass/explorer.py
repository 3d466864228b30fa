"""Breadth-first construction of state class graphs.

Reductions: ``none`` (merge equal classes), ``inclusion``, ``convex-union``
and ``step-aggl`` (one edge per maximal set of concurrent transitions).
Levels are expanded in node order so output is deterministic; with
``jobs > 1`` the successors of a level are computed in worker processes and
inserted in the same order.
"""
from __future__ import annotations

import json
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import networkx as nx

from . import aclasses as ac
from . import agglomeration as ag
from . import pclasses as pc
from .dbm import convex_union
from .model import ANet, ERR
from .pclasses import CSCG, SCG, format_class

REDUCTIONS = ("none", "inclusion", "convex-union", "step-aggl")


class TruncatedGraph(RuntimeError):
    pass


@dataclass(frozen=True)
class ExploreConfig:
    model: str | None = None  # ptpn | atpn; checked against the net when given
    graph: str = CSCG
    reduce: str = "none"
    budget: int = 100_000
    jobs: int = 1
    seed: int = 0

    def validate(self, net):
        if self.model is not None and self.model != net.kind:
            raise ValueError(f"--model {self.model} does not match the {net.kind} net")
        if self.graph not in (SCG, CSCG):
            raise ValueError(f"unknown graph kind {self.graph!r}")
        if self.reduce not in REDUCTIONS:
            raise ValueError(f"unknown reduction {self.reduce!r}")
        if self.reduce == "step-aggl" and self.graph != CSCG:
            raise ValueError("step-aggl needs --graph cscg")
        if self.budget < 1 or self.jobs < 1:
            raise ValueError("budget and jobs must be positive")


# per-kind class operations


def initial(net, kind):
    if isinstance(net, ANet):
        return ac.initial_class_a(net, kind)
    return pc.initial_class(net, kind)


def firable_transitions(net, c):
    if isinstance(net, ANet):
        return ac.firable_transitions_a(net, c)
    return pc.firable_transitions(net, c)


def fire(net, c, t):
    return ac.fire_a(net, c, t) if isinstance(net, ANet) else pc.fire(net, c, t)


def err_dead_set(net, c):
    return ac.err_dead_set_a(net, c) if isinstance(net, ANet) else pc.err_dead_set(net, c)


def fire_err(net, c):
    return ac.fire_err_class_a(net, c) if isinstance(net, ANet) else pc.fire_err_class(net, c)


def group_key(net, c):
    """Everything of a class but its domain."""
    if isinstance(net, ANet):
        return (c.marking, c.dead)
    return (c.live,)


def class_key(net, c):
    return group_key(net, c) + (c.dom,)


def all_dead(net, c) -> bool:
    if isinstance(net, ANet):
        return bool(c.dead) and not c.live_arcs(net)
    return bool(c.marking) and not c.live


# step sets


def structurally_conflicting(net, t) -> bool:
    """Some other transition of the net shares an input place with ``t``."""
    return any(net.outputs(p) != (t,) for p in net.pre[t])


def concurrent_sets(net, c, fir) -> list:
    """Maximal sets of firable, pairwise independent, jointly firable transitions."""
    g = nx.Graph()
    free = [t for t in fir if not structurally_conflicting(net, t)]
    g.add_nodes_from(free)
    for i, t in enumerate(free):
        for u in free[i + 1:]:
            if not net.in_conflict(t, u) and ag.jointly_firable(net, c, [t, u]):
                g.add_edge(t, u)
    out = set()
    for clique in nx.find_cliques(g):
        if len(clique) < 2:
            continue
        for part in _split(net, c, net.sort_transitions(clique)):
            if len(part) >= 2:
                out.add(tuple(part))
    # drop sets contained in another one (splitting may produce some)
    sets = sorted(out, key=lambda s: [net.transition_index(t) for t in s])
    return [s for s in sets if not any(set(s) < set(o) for o in sets)]


def _split(net, c, clique) -> list:
    """Greedy split of a clique into jointly firable parts."""
    parts = []
    rest = list(clique)
    while rest:
        part = [rest.pop(0)]
        for t in list(rest):
            if ag.jointly_firable(net, c, part + [t]):
                part.append(t)
                rest.remove(t)
        parts.append(part)
    return parts


def expand(net, c, reduce: str) -> list:
    """Outgoing ``(label, class)`` pairs; set labels are tuples of transitions."""
    fir = firable_transitions(net, c)
    if not fir:
        if err_dead_set(net, c):
            return [(ERR, fire_err(net, c))]
        return []
    if reduce != "step-aggl":
        return [(t, fire(net, c, t)) for t in fir]
    sets = concurrent_sets(net, c, fir)
    covered = set().union(*map(set, sets)) if sets else set()
    out = [(s, ag.aggl_successor(net, c, list(s))) for s in sets]
    for t in fir:
        conflicting = any(net.in_conflict(t, u) for u in fir if u != t)
        if t not in covered or conflicting:
            out.append((t, fire(net, c, t)))
    order = {t: i for i, t in enumerate(net.transitions)}
    out.sort(key=lambda e: (len(e[0]) if isinstance(e[0], tuple) else 1,
                            [order.get(x, -1) for x in _members(e[0])]))
    return out


def _members(label) -> tuple:
    return label if isinstance(label, tuple) else (label,)


def format_label(label) -> str:
    if isinstance(label, tuple):
        return "{" + ",".join(label) + "}"
    return label


def _expand_job(args):
    net, c, reduce = args
    return expand(net, c, reduce)


# graph


class ClassGraph:
    def __init__(self, net, cfg: ExploreConfig):
        self.net = net
        self.cfg = cfg
        self.nodes = []  # classes, index = node id
        self.out = []  # per node: list of (label, target)
        self.alias = {}  # merged node -> surviving node
        self.truncated = False
        self.merges = {"equal": 0, "inclusion": 0, "convex": 0}

    @property
    def initial(self) -> int:
        return 0

    def find(self, i: int) -> int:
        while i in self.alias:
            i = self.alias[i]
        return i

    def live_nodes(self) -> list:
        return [i for i in range(len(self.nodes)) if i not in self.alias]

    def edges(self) -> list:
        """Deduplicated ``(source, label, target)`` over surviving nodes."""
        seen = set()
        out = []
        for i in self.live_nodes():
            for label, j in self.out[i]:
                e = (i, label, self.find(j))
                if e not in seen:
                    seen.add(e)
                    out.append(e)
        return out

    def successors(self, i: int) -> list:
        seen = []
        for label, j in self.out[self.find(i)]:
            e = (label, self.find(j))
            if e not in seen:
                seen.append(e)
        return seen


def explore(net, cfg: ExploreConfig | None = None) -> ClassGraph:
    cfg = cfg or ExploreConfig()
    cfg.validate(net)
    g = ClassGraph(net, cfg)
    index = {}  # class key -> node
    groups = {}  # group key -> nodes (inclusion / convex modes)

    def add(c) -> int | None:
        k = class_key(net, c)
        if k in index:
            g.merges["equal"] += 1
            return g.find(index[k])
        if cfg.reduce in ("inclusion", "convex-union"):
            hit = _absorb(g, net, c, groups.setdefault(group_key(net, c), []), cfg.reduce, index, frontier_again)
            if hit is not None:
                return hit
        if len(g.nodes) >= cfg.budget:
            g.truncated = True
            return None
        i = len(g.nodes)
        g.nodes.append(c)
        g.out.append([])
        index[k] = i
        groups.setdefault(group_key(net, c), []).append(i)
        nxt.append(i)
        return i

    frontier_again = []
    nxt = []
    add(initial(net, cfg.graph))
    pool = ProcessPoolExecutor(cfg.jobs) if cfg.jobs > 1 else None
    try:
        while nxt and not g.truncated:
            level = sorted(set(g.find(i) for i in nxt))
            nxt = []
            frontier_again.clear()
            jobs = [(net, g.nodes[i], cfg.reduce) for i in level]
            results = list(pool.map(_expand_job, jobs)) if pool else [_expand_job(j) for j in jobs]
            for (_, c0, _), i, succ in zip(jobs, level, results):
                if i in g.alias or g.nodes[i] is not c0:
                    continue  # merged or replaced meanwhile: expanded again later
                edges = []
                for label, c in succ:
                    j = add(c)
                    if j is None:
                        break
                    edges.append((label, j))
                g.out[i] = edges
                if g.truncated:
                    break
            nxt.extend(frontier_again)
    finally:
        if pool:
            pool.shutdown()
    return g


def _absorb(g, net, c, members, mode, index, again):
    """Try to merge ``c`` into an existing node of its group; return that node."""
    for i in list(members):
        if i in g.alias:
            continue
        old = g.nodes[i]
        if old.dom.includes(c.dom):
            g.merges["inclusion"] += 1
            return i
        grown = None
        if c.dom.includes(old.dom):
            g.merges["inclusion"] += 1
            grown = c
        elif mode == "convex-union":
            hull = convex_union([old.dom, c.dom])
            if hull is not None:
                g.merges["convex"] += 1
                grown = _with_dom(old, hull)
        if grown is not None:
            _replace(g, net, i, grown, members, mode, index, again)
            return i
    return None


def _with_dom(c, dom):
    if c.kind == CSCG:
        dom = dom.triangular_view()
    return type(c)(c.marking, c.dead, dom, c.kind)


def _replace(g, net, i, c, members, mode, index, again):
    """Node ``i`` now stands for the larger class ``c``; fold in what it covers."""
    changed = True
    while changed:
        changed = False
        for j in members:
            if j == i or j in g.alias:
                continue
            other = g.nodes[j].dom
            if c.dom.includes(other):
                g.merges["inclusion"] += 1
            elif mode == "convex-union" and (hull := convex_union([c.dom, other])) is not None:
                g.merges["convex"] += 1
                c = _with_dom(c, hull)
            else:
                continue
            g.alias[j] = i
            g.out[j] = []
            changed = True
    g.nodes[i] = c
    index[class_key(net, c)] = i
    g.out[i] = []
    again.append(i)
    members[:] = [j for j in members if j not in g.alias]


# statistics and output


def stats(g: ClassGraph) -> dict:
    edges = g.edges()
    live = g.live_nodes()
    terminals = sum(1 for i in live if not g.out[i] and all_dead(g.net, g.nodes[i]))
    return {
        "nodes": len(live),
        "edges": len(edges),
        "err_edges": sum(1 for _, label, _ in edges if label == ERR),
        "all_dead_terminals": terminals,
        "merges": dict(g.merges),
        "truncated": g.truncated,
    }


def _renumber(g):
    return {i: k for k, i in enumerate(g.live_nodes())}


def to_dot(g: ClassGraph) -> str:
    num = _renumber(g)
    lines = [f'digraph "{g.net.name}" {{', "  node [shape=box];"]
    for i, k in num.items():
        label = format_class(g.net, g.nodes[i]).replace('"', '\\"')
        extra = ", peripheries=2" if not g.out[i] and all_dead(g.net, g.nodes[i]) else ""
        lines.append(f'  n{k} [label="{k}: {label}"{extra}];')
    for i, label, j in g.edges():
        lines.append(f'  n{num[i]} -> n{num[j]} [label="{format_label(label)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json(g: ClassGraph) -> str:
    return json.dumps(stats(g)) + "\n"


def to_text(g: ClassGraph) -> str:
    num = _renumber(g)
    lines = []
    for i, k in num.items():
        lines.append(f"{k}: {format_class(g.net, g.nodes[i])}")
        for label, j in g.successors(i):
            lines.append(f"  --{format_label(label)}--> {num[j]}")
    lines.append(json.dumps(stats(g)))
    return "\n".join(lines) + "\n"


# untimed traces


def independent(net, x, pending) -> bool:
    """``x`` shares no place with any transition of ``pending``."""
    if x == ERR:
        return not pending
    mine = net.pre[x] | net.post[x]
    return not any(mine & (net.pre[u] | net.post[u]) for u in pending)


def untimed_language_accepts(g: ClassGraph, trace) -> bool:
    """True iff ``trace`` labels a path up to commuting independent transitions.

    A set edge accepts its members in any order. Members still due may be
    overtaken by later labels that are independent of them.
    """
    if g.truncated:
        raise TruncatedGraph("graph was truncated; its language is incomplete")
    net = g.net
    # state: (node, tuple of frozensets still due, oldest block first)
    states = {(g.initial, ())}
    for x in trace:
        nxt = set()
        for node, due in states:
            for k, block in enumerate(due):
                if x in block:
                    earlier = set().union(*due[:k]) if k else set()
                    if independent(net, x, earlier):
                        rest = due[:k] + ((block - {x},) if len(block) > 1 else ()) + due[k + 1:]
                        nxt.add((node, rest))
            flat = set().union(*due) if due else set()
            if not independent(net, x, flat):
                continue
            for label, j in g.successors(node):
                if label == x:
                    nxt.add((j, due))
                elif isinstance(label, tuple) and x in label:
                    nxt.add((j, due + (frozenset(label) - {x},)))
        if not nxt:
            return False
        states = nxt
    return True


def words(g: ClassGraph, depth: int) -> set:
    """All label words of length <= depth along paths of a graph without set edges."""
    out = {()}
    todo = deque([(g.initial, ())])
    while todo:
        node, w = todo.popleft()
        if len(w) >= depth:
            continue
        for label, j in g.successors(node):
            if isinstance(label, tuple):
                raise ValueError("words() needs a graph without set edges")
            w2 = w + (label,)
            out.add(w2)
            todo.append((j, w2))
    return out


def block_paths(g: ClassGraph, depth: int) -> set:
    """Paths as tuples of label blocks (total length <= depth)."""
    out = {()}
    todo = deque([(g.initial, (), 0)])
    while todo:
        node, path, n = todo.popleft()
        for label, j in g.successors(node):
            block = _members(label)
            if n + len(block) > depth:
                continue
            p2 = path + (block,)
            out.add(p2)
            todo.append((j, p2, n + len(block)))
    return out
