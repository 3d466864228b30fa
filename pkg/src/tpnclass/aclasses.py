"""State classes of A-TPN: one delay variable per live enabled input arc.

Arc ``(p, t)`` is the variable ``pt(p,t)``. Dead arcs are kept in ``dead``
until the token of their place is consumed.
"""
from __future__ import annotations

from dataclasses import dataclass

from .dbm import REF, Dbm
from .model import ANet, NotFirable
from .pclasses import CSCG, SCG, fire_var


def arc_var(arc) -> str:
    p, t = arc
    return f"pt({p},{t})"


@dataclass(frozen=True)
class AClass:
    marking: frozenset
    dead: frozenset  # dead arcs
    dom: Dbm
    kind: str = CSCG

    def live_arcs(self, net: ANet) -> list:
        return [a for a in net.enabled_arcs(self.marking) if a not in self.dead]

    def key(self):
        return (self.kind, self.marking, self.dead, self.dom)


def _vars(net, arcs) -> list:
    return [arc_var(a) for a in net.sort_arcs(arcs)]


def initial_class_a(net: ANet, kind: str = CSCG) -> AClass:
    arcs = net.enabled_arcs(net.m0)
    names = _vars(net, arcs)
    cons = []
    for a in arcs:
        iv = net.isa[a]
        if kind == SCG:
            cons.append((REF, arc_var(a), -iv.lo))
            if iv.hi is not None:
                cons.append((arc_var(a), REF, iv.hi))
        elif iv.hi is not None:
            for b in arcs:
                if b != a:
                    cons.append((arc_var(a), arc_var(b), iv.hi - net.isa[b].lo))
    dom = Dbm.from_constraints(names, cons, net.scale).canonical()
    return AClass(net.m0, frozenset(), dom, kind)


def initial_cscg_a(net: ANet) -> AClass:
    return initial_class_a(net, CSCG)


def initial_scg_a(net: ANet) -> AClass:
    return initial_class_a(net, SCG)


def _input_arcs(net, t) -> list:
    return net.sort_arcs((p, t) for p in net.pre[t])


def _enabled_live(net, c, t) -> bool:
    if not net.pre[t] or not net.pre[t] <= c.marking:
        return False
    return not any(a in c.dead for a in _input_arcs(net, t))


def firing_condition_a(net: ANet, c: AClass, t) -> Dbm | None:
    if not _enabled_live(net, c, t):
        return None
    dom = c.dom
    for a in _input_arcs(net, t):
        va = arc_var(a)
        for vb in c.dom.vars:
            if vb != va:
                dom = dom.conjoin(va, vb, 0)
    return dom.canonical()


def firable_a(net: ANet, c: AClass, t) -> bool:
    cond = firing_condition_a(net, c, t)
    return cond is not None and cond.is_consistent()


def firable_transitions_a(net: ANet, c: AClass) -> list:
    return [t for t in net.transitions if firable_a(net, c, t)]


def fire_a(net: ANet, c: AClass, t) -> AClass:
    cond = firing_condition_a(net, c, t)
    if cond is None or not cond.is_consistent():
        raise NotFirable(f"{t} is not firable from this class")
    marking = net.fire_marking(c.marking, t)
    consumed = net.pre[t]
    ins = [arc_var(a) for a in _input_arcs(net, t)]
    tv = fire_var(t)
    # other output arcs of consumed tokens disappear with the tokens
    gone = [v for v in cond.vars if v not in ins and _arc_place(net, v, c) in consumed]
    d = cond.project_out(gone + ins[1:]).rename({ins[0]: tv})
    created = [(p, t2) for p in net.sort_places(net.post[t]) for t2 in net.outputs(p)]
    d = d.extend([arc_var(a) for a in created])
    for a in created:
        iv = net.isa[a]
        d = d.conjoin(tv, arc_var(a), -iv.lo)
        if iv.hi is not None:
            d = d.conjoin(arc_var(a), tv, iv.hi)
    if c.kind == SCG:
        d = d.substitute_shift([v for v in d.vars if v != tv], tv)
    d = d.project_out([tv])
    dead = frozenset(a for a in c.dead if a[0] not in consumed)
    live = [a for a in net.enabled_arcs(marking) if a not in dead]
    d = d.reorder(_vars(net, live))
    if c.kind == CSCG:
        d = d.triangular_view()
    return AClass(marking, dead, d, c.kind)


def _arc_place(net, var, c):
    for a in net.enabled_arcs(c.marking):
        if arc_var(a) == var:
            return a[0]
    raise KeyError(var)


def err_dead_set_a(net: ANet, c: AClass) -> frozenset:
    """Live arcs that no transition with all input arcs alive can beat."""
    en = [t for t in net.transitions if _enabled_live(net, c, t)]
    dead = set()
    for a in c.live_arcs(net):
        va = arc_var(a)
        ok = False
        for t in en:
            cons = [(arc_var(b), va, 0) for b in _input_arcs(net, t)]
            if c.dom.conjoin_all(cons).is_consistent():
                ok = True
                break
        if not ok:
            dead.add(a)
    return frozenset(dead)


def err_firable_a(net: ANet, c: AClass) -> frozenset:
    return err_dead_set_a(net, c)


def fire_err_class_a(net: ANet, c: AClass) -> AClass:
    dying = err_dead_set_a(net, c)
    if not dying:
        raise NotFirable("Err is not firable from this class")
    dom = c.dom.project_out([arc_var(a) for a in dying])
    if c.kind == CSCG:
        dom = dom.triangular_view()
    return AClass(c.marking, c.dead | dying, dom, c.kind)


def class_equal_a(a: AClass, b: AClass) -> bool:
    if a.kind != b.kind:
        raise ValueError("cannot compare SCG and CSCG classes")
    if a.marking != b.marking or a.dead != b.dead:
        return False
    if a.kind == SCG:
        return a.dom == b.dom
    return a.dom.triangular_view() == b.dom.triangular_view()


def quotient_a(c: AClass) -> AClass:
    if c.kind != SCG:
        raise ValueError("quotient expects an SCG class")
    return AClass(c.marking, c.dead, c.dom.triangular_view(), CSCG)
