"""Agglomerated successors for sets of concurrent transitions in CSCG classes.

For a set Tm of firable, pairwise non-conflicting transitions, the union of
the classes reached by all interleavings of Tm is computed directly from an
order-free formula over firing variables ``<t>`` and instance variables
``x@t`` (variable ``x`` created by ``t``).

The same code serves both net kinds; :func:`_plan` describes, per member,
which class variables it consumes and which it creates.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from . import aclasses as ac
from . import pclasses as pc
from .dbm import convex_union
from .model import ANet, NotFirable, PNet, SafetyViolation
from .pclasses import CSCG, fire_var


class ConflictError(ValueError):
    pass


def inst_var(var, t) -> str:
    return f"{var}@{t}"


@dataclass
class _Member:
    t: str
    inputs: list  # class variables equal to <t>
    others: list  # variables removed with the consumed tokens (A-TPN only)
    created: list  # (final variable, Interval)


def _is_a(net) -> bool:
    return isinstance(net, ANet)


def _plan(net, c, tm) -> list:
    """Validate ``tm`` against ``c`` and describe each member."""
    tm = list(tm)
    if len(set(tm)) != len(tm):
        raise ValueError("repeated transition in set")
    for i, t in enumerate(tm):
        for u in tm[i + 1:]:
            if net.in_conflict(t, u):
                raise ConflictError(f"{t} and {u} are in conflict")
    members = []
    for t in tm:
        if _is_a(net):
            if not ac._enabled_live(net, c, t):
                raise NotFirable(f"{t} has a dead or missing input arc")
            ins = [ac.arc_var(a) for a in ac._input_arcs(net, t)]
            others = [ac.arc_var((p, u)) for p in net.sort_places(net.pre[t])
                      for u in net.outputs(p) if u != t and (p, u) not in c.dead]
            created = [(ac.arc_var((p, u)), net.isa[(p, u)])
                       for p in net.sort_places(net.post[t]) for u in net.outputs(p)]
        else:
            if not net.pre[t] or not net.pre[t] <= c.live:
                raise NotFirable(f"{t} is not enabled by live tokens")
            ins = net.sort_places(net.pre[t])
            others = []
            created = [(p, net.isp[p]) for p in net.sort_places(net.post[t])]
        members.append(_Member(t, ins, others, created))
    return members


def _extended(c, members):
    names = []
    for m in members:
        names.append(fire_var(m.t))
        names.extend(inst_var(v, m.t) for v, _ in m.created)
    return c.dom.extend(names)


def _common(d, members):
    """Blocks shared by both formulas: inputs equal <t>, created windows."""
    for m in members:
        tv = fire_var(m.t)
        for v in m.inputs:
            d = d.conjoin(v, tv, 0).conjoin(tv, v, 0)
        for v, iv in m.created:
            x = inst_var(v, m.t)
            d = d.conjoin(tv, x, -iv.lo)
            if iv.hi is not None:
                d = d.conjoin(x, tv, iv.hi)
    return d


def _check_c(c):
    if c.kind != CSCG:
        raise ValueError("agglomeration is defined on CSCG classes only")


def seq_condition(net, c, seq):
    """Firing condition of the sequence ``seq`` from ``c`` (order matters)."""
    _check_c(c)
    members = _plan(net, c, seq)
    if not members:
        return c.dom
    d = _common(_extended(c, members), members)
    gone = set()
    insts = []
    for k, m in enumerate(members):
        tv = fire_var(m.t)
        for v in c.dom.vars:
            if v not in gone:
                d = d.conjoin(tv, v, 0)
        for x in insts:
            d = d.conjoin(tv, x, 0)
        if k + 1 < len(members):
            d = d.conjoin(tv, fire_var(members[k + 1].t), 0)
        gone.update(m.inputs)
        gone.update(m.others)
        insts.extend(inst_var(v, m.t) for v, _ in m.created)
    return d.canonical()


seq_condition_a = seq_condition


def order_free_condition(net, c, tm, literal: bool = False):
    """Order-free joint condition of ``tm``.

    With ``literal=True`` on A-TPN, the constraints ``<t> <= x`` for the
    other output arcs ``x`` of places consumed by ``t`` are left out.
    Those constraints are not implied by the rest: without them the formula
    admits firings that would overpass the deadline of such an arc.
    """
    _check_c(c)
    members = _plan(net, c, tm)
    if not members:
        return c.dom
    d = _common(_extended(c, members), members)
    removed = set()
    for m in members:
        removed.update(m.inputs)
        removed.update(m.others)
    survivors = [v for v in c.dom.vars if v not in removed]
    insts = [inst_var(v, m.t) for m in members for v, _ in m.created]
    for m in members:
        tv = fire_var(m.t)
        for v in survivors:
            d = d.conjoin(tv, v, 0)
        for x in insts:
            d = d.conjoin(tv, x, 0)
        if not literal:
            for v in m.others:
                d = d.conjoin(tv, v, 0)
    return d.canonical()


def ordering_chain(d, seq):
    for a, b in zip(seq, seq[1:]):
        d = d.conjoin(fire_var(a), fire_var(b), 0)
    return d.canonical()


def _result(net, c, members, cond):
    marking = c.marking
    for m in members:
        marking = net.fire_marking(marking, m.t)
    drop = [fire_var(m.t) for m in members]
    for m in members:
        drop.extend(m.inputs)
        drop.extend(m.others)
    d = cond.project_out(drop)
    mapping = {}
    for m in members:
        for v, _ in m.created:
            if v in mapping.values() or v in d.vars:
                raise SafetyViolation(m.t, {v})
            mapping[inst_var(v, m.t)] = v
    d = d.rename(mapping)
    if _is_a(net):
        consumed = set().union(*(net.pre[m.t] for m in members))
        dead = frozenset(a for a in c.dead if a[0] not in consumed)
        live = [a for a in net.enabled_arcs(marking) if a not in dead]
        d = d.reorder([ac.arc_var(a) for a in net.sort_arcs(live)]).triangular_view()
        return ac.AClass(marking, dead, d, CSCG)
    d = d.reorder(net.sort_places(marking - c.dead)).triangular_view()
    return pc.PClass(marking, c.dead, d, CSCG)


def aggl_successor(net, c, tm, literal: bool = False):
    """Union of the classes reached by every interleaving of ``tm`` from ``c``.

    Raises NotFirable when no interleaving of ``tm`` is firable.
    """
    members = _plan(net, c, tm)
    if not members:
        raise ValueError("empty transition set")
    # instance naming is keyed by transition, so listing order does not matter
    cond = order_free_condition(net, c, tm, literal=literal)
    if not cond.is_consistent():
        raise NotFirable(f"{{{','.join(tm)}}} is not jointly firable")
    return _result(net, c, members, cond)


aggl_successor_a = aggl_successor


def jointly_firable(net, c, tm) -> bool:
    try:
        return order_free_condition(net, c, tm).is_consistent()
    except (NotFirable, ConflictError):
        return False


def _fire_any(net, c, t):
    return ac.fire_a(net, c, t) if _is_a(net) else pc.fire_cscg(net, c, t)


def stepwise_union(net, c, tm) -> list:
    """Classes reached by iterated firing along each firable ordering of ``tm``."""
    _check_c(c)
    _plan(net, c, tm)
    out = []
    for order in permutations(tm):
        cur = c
        try:
            for t in order:
                cur = _fire_any(net, cur, t)
        except NotFirable:
            continue
        out.append((order, cur))
    return out


def stepwise_hull(net, c, tm):
    """``(classes, hull)``; hull is None when the union is not convex."""
    classes = [k for _, k in stepwise_union(net, c, tm)]
    if not classes:
        return classes, None
    return classes, convex_union([k.dom for k in classes])


def check_set(net, c, tm, literal: bool = False) -> str | None:
    """Compare the agglomerated successor with the stepwise union.

    Returns None on agreement, else a short description of the mismatch.
    """
    classes, hull = stepwise_hull(net, c, tm)
    try:
        agg = aggl_successor(net, c, tm, literal=literal)
    except NotFirable:
        agg = None
    if not classes:
        return None if agg is None else "aggregate exists but no interleaving fires"
    if agg is None:
        return "interleavings fire but the aggregate is empty"
    if hull is None:
        return "union of interleavings is not convex"
    if any(k.marking != agg.marking or k.dead != agg.dead for k in classes):
        return "marking or dead set differs"
    if hull.triangular_view() != agg.dom:
        return f"domain differs: union {hull.constraints()} vs aggregate {agg.dom.constraints()}"
    return None


def check_redundancy(net, c, seq) -> bool:
    """The sequence condition equals the order-free condition plus the ordering chain."""
    a = seq_condition(net, c, seq)
    b = ordering_chain(order_free_condition(net, c, seq), list(seq))
    return a == b
