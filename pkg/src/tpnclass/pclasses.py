"""State classes of P-TPN: SCG and contracted (CSCG) flavours.

A class is ``(marking, dead tokens, domain)`` where the domain constrains one
delay variable per live token, named after its place. CSCG domains keep only
differences between variables (row and column 0 unbounded).

Transitions with an empty preset are never firable here, matching the
concrete semantics in :mod:`tpnclass.semantics`.
"""
from __future__ import annotations

from dataclasses import dataclass

from .dbm import REF, Dbm
from .model import NotFirable, PNet

SCG = "scg"
CSCG = "cscg"


def fire_var(t) -> str:
    """Name of the firing-delay variable of transition ``t``."""
    return f"<{t}>"


@dataclass(frozen=True)
class PClass:
    marking: frozenset
    dead: frozenset
    dom: Dbm
    kind: str = SCG

    @property
    def live(self) -> frozenset:
        return self.marking - self.dead

    def key(self):
        """Identity under class equality: live tokens plus canonical domain."""
        return (self.kind, self.live, self.dom)


def _ordered(net: PNet, places) -> tuple:
    return tuple(net.sort_places(places))


def initial_scg(net: PNet) -> PClass:
    places = _ordered(net, net.m0)
    cons = []
    for p in places:
        iv = net.isp[p]
        cons.append((REF, p, -iv.lo))
        if iv.hi is not None:
            cons.append((p, REF, iv.hi))
    dom = Dbm.from_constraints(places, cons, net.scale).canonical()
    return PClass(net.m0, frozenset(), dom, SCG)


def initial_cscg(net: PNet) -> PClass:
    places = _ordered(net, net.m0)
    cons = []
    for p in places:
        for q in places:
            if p != q and net.isp[p].hi is not None:
                cons.append((p, q, net.isp[p].hi - net.isp[q].lo))
    dom = Dbm.from_constraints(places, cons, net.scale).canonical()
    return PClass(net.m0, frozenset(), dom, CSCG)


def initial_class(net: PNet, kind: str = SCG) -> PClass:
    return initial_scg(net) if kind == SCG else initial_cscg(net)


def firing_condition(net: PNet, c: PClass, t) -> Dbm | None:
    """Domain restricted to states where ``t`` fires first; None if ``t`` is not enabled."""
    pre = net.pre[t]
    if not pre or not pre <= c.live:
        return None
    dom = c.dom
    for pf in _ordered(net, pre):
        for pi in c.dom.vars:
            if pi != pf:
                dom = dom.conjoin(pf, pi, 0)
    return dom.canonical()


def firable(net: PNet, c: PClass, t) -> bool:
    cond = firing_condition(net, c, t)
    return cond is not None and cond.is_consistent()


def firable_transitions(net: PNet, c: PClass) -> list:
    return [t for t in net.transitions if firable(net, c, t)]


def _fire(net: PNet, c: PClass, t, shift: bool) -> PClass:
    cond = firing_condition(net, c, t)
    if cond is None or not cond.is_consistent():
        raise NotFirable(f"{t} is not firable from this class")
    marking = net.fire_marking(c.marking, t)
    pre = _ordered(net, net.pre[t])
    tv = fire_var(t)
    # preset variables are all equal to the firing delay: keep one, rename it
    d = cond.project_out(pre[1:]).rename({pre[0]: tv})
    created = _ordered(net, net.post[t])
    d = d.extend(created)
    for p in created:
        iv = net.isp[p]
        d = d.conjoin(tv, p, -iv.lo)
        if iv.hi is not None:
            d = d.conjoin(p, tv, iv.hi)
    tokens = [v for v in d.vars if v != tv]
    if shift:
        d = d.substitute_shift(tokens, tv)
    d = d.project_out([tv])
    d = d.reorder(_ordered(net, marking - c.dead))
    if not shift:
        d = d.triangular_view()
    return PClass(marking, c.dead, d, SCG if shift else CSCG)


def fire_scg(net: PNet, c: PClass, t) -> PClass:
    if c.kind != SCG:
        raise ValueError("fire_scg needs an SCG class")
    return _fire(net, c, t, shift=True)


def fire_cscg(net: PNet, c: PClass, t) -> PClass:
    if c.kind != CSCG:
        raise ValueError("fire_cscg needs a CSCG class")
    return _fire(net, c, t, shift=False)


def fire(net: PNet, c: PClass, t) -> PClass:
    return _fire(net, c, t, shift=c.kind == SCG)


def err_dead_set(net: PNet, c: PClass) -> frozenset:
    """Live tokens that no enabled transition can consume before they expire."""
    live = c.live
    en = [t for t in net.transitions if net.pre[t] and net.pre[t] <= live]
    dead = set()
    for pi in c.dom.vars:
        if all(not c.dom.conjoin_all((pf, pi, 0) for pf in net.pre[t]).is_consistent() for t in en):
            dead.add(pi)
    return frozenset(dead)


def err_firable(net: PNet, c: PClass) -> frozenset:
    return err_dead_set(net, c)


def fire_err_class(net: PNet, c: PClass) -> PClass:
    dying = err_dead_set(net, c)
    if not dying:
        raise NotFirable("Err is not firable from this class")
    dom = c.dom.project_out(dying)
    if c.kind == CSCG:
        dom = dom.triangular_view()
    return PClass(c.marking, c.dead | dying, dom, c.kind)


def class_equal(a: PClass, b: PClass) -> bool:
    if a.kind != b.kind:
        raise ValueError("cannot compare SCG and CSCG classes")
    if a.live != b.live:
        return False
    if a.kind == SCG:
        return a.dom == b.dom
    return a.dom.triangular_view() == b.dom.triangular_view()


def quotient(c: PClass) -> PClass:
    if c.kind != SCG:
        raise ValueError("quotient expects an SCG class")
    return PClass(c.marking, c.dead, c.dom.triangular_view(), CSCG)


def format_class(net, c) -> str:
    marked = "+".join(net.sort_places(c.marking)) or "0"
    dead = ",".join(_format_dead(net, c.dead))
    cons = ", ".join(c.dom.constraints()) or "true"
    return f"({marked}; dead={{{dead}}}; {cons})"


def _format_dead(net, dead):
    items = list(dead)
    if items and isinstance(items[0], tuple):
        return [f"({p},{t})" for p, t in net.sort_arcs(items)]
    return net.sort_places(items)
