import pytest

from tpnclass import pclasses as pc
from tpnclass.dbm import Dbm
from tpnclass.model import NotFirable, parse_net
from tpnclass.netgen import random_pnet


def dbm(vars, *cons):
    return Dbm.from_constraints(vars, cons)


def box(x, lo, hi):
    return [("0", x, -lo), (x, "0", hi)]


ALPHA0 = dbm(["p1", "p2"], *box("p1", 1, 3), *box("p2", 2, 4))
ALPHA1 = dbm(["p3", "p4"], *box("p3", 0, 1), *box("p4", 2, 2), ("p3", "p4", -1), ("p4", "p3", 2))
ALPHA2 = dbm(["p3", "p4"], *box("p3", 1, 1), *box("p4", 1, 2), ("p3", "p4", 0), ("p4", "p3", 1))
BETA1 = dbm(["p3", "p4"], ("p3", "p4", -1), ("p4", "p3", 2))
BETA2 = dbm(["p3", "p4"], ("p3", "p4", 0), ("p4", "p3", 1))


def run(net, c, *seq):
    for t in seq:
        c = pc.fire(net, c, t)
    return c


def test_initial_scg(fig2a, fig2b):
    assert pc.initial_scg(fig2a).dom == ALPHA0
    assert pc.initial_scg(fig2b).dom == dbm(["p1", "p2"], *box("p1", 1, 3), *box("p2", 2, 6))
    empty = parse_net("net ptpn e\nplace p [0,1]\n")
    c = pc.initial_scg(empty)
    assert c.marking == frozenset() and c.dom.vars == ()


def test_initial_cscg(fig2a, fig2b):
    assert pc.initial_cscg(fig2a).dom == dbm(["p1", "p2"], ("p1", "p2", 1), ("p2", "p1", 3))
    assert pc.initial_cscg(fig2b).dom == dbm(["p1", "p2"], ("p1", "p2", 1), ("p2", "p1", 5))
    one = parse_net("net ptpn o\nplace p [1,2] marked\ntrans t pre p post\n")
    assert pc.initial_cscg(one).dom == Dbm.universe(["p"])


def test_firable(fig2a, ndead):
    a0 = pc.initial_scg(fig2a)
    assert pc.firable(fig2a, a0, "t1")
    assert not pc.firable(fig2a, a0, "t3")
    assert not pc.firable(ndead, pc.initial_scg(ndead), "t")
    assert not pc.firable(ndead, pc.initial_cscg(ndead), "t")


def test_fire_scg_figure_classes(fig2a):
    a0 = pc.initial_scg(fig2a)
    c = pc.fire_scg(fig2a, a0, "t1")
    assert c.marking == {"p2", "p3"}
    assert c.dom == dbm(["p2", "p3"], *box("p2", 0, 3), *box("p3", 1, 1))
    assert run(fig2a, a0, "t1", "t2").dom == ALPHA1
    assert run(fig2a, a0, "t2", "t1").dom == ALPHA2
    with pytest.raises(NotFirable):
        pc.fire_scg(fig2a, a0, "t3")
    with pytest.raises(ValueError):
        pc.fire_cscg(fig2a, a0, "t1")


def test_fire_cscg_figure_classes(fig2a):
    b0 = pc.initial_cscg(fig2a)
    assert run(fig2a, b0, "t1", "t2").dom == BETA1
    assert run(fig2a, b0, "t2", "t1").dom == BETA2
    one = parse_net("net ptpn o\nplace p [1,2] marked\nplace q [0,3]\ntrans t pre p post q\n")
    c = pc.fire_cscg(one, pc.initial_cscg(one), "t")
    assert c.marking == {"q"} and c.dom == Dbm.universe(["q"])


def test_err_ndead(ndead):
    for init in (pc.initial_scg, pc.initial_cscg):
        c = init(ndead)
        assert pc.err_firable(ndead, c) == {"p1"}
        c1 = pc.fire_err_class(ndead, c)
        assert c1.marking == {"p1", "p2"} and c1.dead == {"p1"}
        if c.kind == pc.SCG:
            assert c1.dom == dbm(["p2"], *box("p2", 3, 4))
        assert pc.err_firable(ndead, c1) == {"p2"}
        c2 = pc.fire_err_class(ndead, c1)
        assert c2.live == frozenset()
        with pytest.raises(NotFirable):
            pc.fire_err_class(ndead, c2)


def test_no_err_when_covered(fig2a):
    c = pc.initial_scg(fig2a)
    assert pc.err_firable(fig2a, c) == frozenset()
    with pytest.raises(NotFirable):
        pc.fire_err_class(fig2a, c)


def test_class_equal(fig2a):
    a1 = pc.PClass(frozenset({"p3", "p4"}), frozenset(), ALPHA1)
    a2 = pc.PClass(frozenset({"p3", "p4"}), frozenset(), ALPHA2)
    assert not pc.class_equal(a1, a2)
    again = pc.PClass(a1.marking, a1.dead, ALPHA1.canonical().reorder(["p4", "p3"]))
    assert pc.class_equal(a1, again)
    wide = pc.PClass(a1.marking, a1.dead, dbm(["p3", "p4"], *box("p3", 0, 2), *box("p4", 2, 3),
                                               ("p3", "p4", -1), ("p4", "p3", 2)))
    assert not pc.class_equal(a1, wide)
    assert pc.class_equal(pc.quotient(a1), pc.quotient(wide))
    with pytest.raises(ValueError):
        pc.class_equal(a1, pc.quotient(a1))


def test_quotient_examples(fig2a):
    a0 = pc.initial_scg(fig2a)
    assert pc.class_equal(pc.quotient(a0), pc.initial_cscg(fig2a))
    assert pc.quotient(run(fig2a, a0, "t1", "t2")).dom == BETA1
    assert pc.quotient(run(fig2a, a0, "t2", "t1")).dom == BETA2
    empty = pc.initial_scg(parse_net("net ptpn e\nplace p [0,1]\n"))
    assert pc.quotient(empty).dom.vars == ()


def _walk(net, depth):
    """SCG classes reachable in ``depth`` steps, Err included, with the edges taken."""
    frontier = [pc.initial_scg(net)]
    seen = set()
    for _ in range(depth):
        nxt = []
        for c in frontier:
            if c.key() in seen:
                continue
            seen.add(c.key())
            fir = pc.firable_transitions(net, c)
            dying = pc.err_firable(net, c)
            yield c, fir, dying
            nxt += [pc.fire_scg(net, c, t) for t in fir]
            if dying:
                nxt.append(pc.fire_err_class(net, c))
        frontier = nxt


def desk_nets(fig2a, fig2b, ndead, n=25):
    return [fig2a, fig2b, ndead] + [random_pnet(s, max_places=5, cmax=4) for s in range(n)]


def test_quotient_commutes_with_fire(fig2a, fig2b, ndead):
    for net in desk_nets(fig2a, fig2b, ndead):
        for c, fir, _ in _walk(net, 4):
            q = pc.quotient(c)
            assert pc.firable_transitions(net, q) == fir
            for t in fir:
                assert pc.class_equal(pc.quotient(pc.fire_scg(net, c, t)), pc.fire_cscg(net, q, t))


def test_class_invariants(fig2a, fig2b, ndead):
    for net in desk_nets(fig2a, fig2b, ndead):
        for c, fir, dying in _walk(net, 4):
            # Err and ordinary firings exclude each other
            assert not (fir and dying)
            for t in fir:
                d = pc.fire_scg(net, c, t)
                assert d.dead == c.dead
                assert d.dom.is_consistent() and d.dom.is_canonical
                assert set(d.dom.vars) == d.live
            if dying:
                d = pc.fire_err_class(net, c)
                assert d.dead > c.dead


def test_format_class(fig2a, ndead):
    assert pc.format_class(fig2a, pc.initial_cscg(fig2a)) == "(p1+p2; dead={}; p1 - p2 <= 1, p2 - p1 <= 3)"
    c = pc.fire_err_class(ndead, pc.initial_cscg(ndead))
    assert pc.format_class(ndead, c) == "(p1+p2; dead={p1}; true)"
