"""Acceptance criteria, one PASS/FAIL line each (printed in the terminal summary).

Run standalone with ``python tests/test_acceptance.py`` to print the lines only.
"""
import itertools
import random
import time
from fractions import Fraction

import numpy as np
import pytest

import figure_classes as P
from conftest import ACCEPTANCE, NETS
from dbm_oracle import box_points, grid_points, members, random_pair
from tpnclass import aclasses as ac
from tpnclass import agglomeration as ag
from tpnclass import checks
from tpnclass import explorer as ex
from tpnclass import pclasses as pc
from tpnclass.dbm import convex_union, difference, enclosing
from tpnclass.model import load_net, translate_p_to_a
from tpnclass.netgen import random_anet, random_pnet

pytestmark = pytest.mark.acceptance

N_RANDOM = 200
P_SEEDS = range(1000, 1000 + N_RANDOM)
A_SEEDS = range(2000, 2000 + N_RANDOM)


def fig(name):
    return load_net(NETS / f"{name}.net")


def report(n, title, failures, elapsed, limit=None, detail=""):
    slow = limit is not None and elapsed >= limit
    ok = not failures and not slow
    parts = [detail] if detail else []
    parts.append(f"{elapsed:.2f}s" + (f" of {limit}s" if limit else ""))
    if failures:
        parts.append(f"{len(failures)} failures, first: {failures[0]}")
    if slow:
        parts.append("over the time limit")
    line = f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {title} ({'; '.join(parts)})"
    ACCEPTANCE[n] = line
    print(line)
    assert ok, line


def expect(failures, label, got, want):
    if got != want:
        failures.append(f"{label}: got {got!r}, want {want!r}")


def test_criterion_1_scg_fig2a():
    t = time.perf_counter()
    net = fig("fig2a")
    a0 = pc.initial_scg(net)
    bad = []
    expect(bad, "alpha0", a0.dom, P.ALPHA0)
    c1 = pc.fire_scg(net, a0, "t1")
    expect(bad, "t1 marking", c1.marking, frozenset({"p2", "p3"}))
    expect(bad, "t1", c1.dom, P.AFTER_T1)
    expect(bad, "t1t2", pc.fire_scg(net, c1, "t2").dom, P.ALPHA1)
    expect(bad, "t2t1", pc.fire_scg(net, pc.fire_scg(net, a0, "t2"), "t1").dom, P.ALPHA2)
    report(1, "Fig 2.a SCG classes", bad, time.perf_counter() - t, 1)


def test_criterion_2_cscg_fig2a():
    t = time.perf_counter()
    net = fig("fig2a")
    b0 = pc.initial_cscg(net)
    bad = []
    expect(bad, "beta0", b0.dom, P.BETA0)
    b1 = pc.fire_cscg(net, pc.fire_cscg(net, b0, "t1"), "t2").dom
    b2 = pc.fire_cscg(net, pc.fire_cscg(net, b0, "t2"), "t1").dom
    expect(bad, "beta1", b1, P.BETA1)
    expect(bad, "beta2", b2, P.BETA2)
    expect(bad, "beta1 u beta2", convex_union([b1, b2]), P.BETA12)
    expect(bad, "alpha1 u alpha2", convex_union([P.ALPHA1, P.ALPHA2]), None)
    report(2, "Fig 2.a CSCG classes and convex unions", bad, time.perf_counter() - t, 1)


def test_criterion_3_conditions_fig2b():
    t = time.perf_counter()
    net = fig("fig2b")
    b0 = pc.initial_cscg(net)
    bad = []
    expect(bad, "phi_p1", ag.seq_condition(net, b0, ["t1", "t2"]), P.PHI1)
    expect(bad, "phi_p2", ag.seq_condition(net, b0, ["t2", "t1"]), P.PHI2)
    printed = P.PHI_UNION.project_out(["p1", "p2", P.T1, P.T2])
    printed = printed.rename({P.P3: "p3", P.P5: "p5", P.P4: "p4", P.P6: "p6"}).triangular_view()
    agg = ag.aggl_successor(net, b0, ["t1", "t2"])
    expect(bad, "aggregate", agg.dom, printed)
    expect(bad, "aggregate marking", agg.marking, frozenset({"p3", "p4", "p5", "p6"}))
    report(3, "Fig 2.b firing conditions and aggregate", bad, time.perf_counter() - t, 1)


def test_criterion_4_atpn_fig2a():
    t = time.perf_counter()
    net = translate_p_to_a(fig("fig2a"))
    s0 = ac.initial_scg_a(net)
    g1 = ac.fire_a(net, ac.fire_a(net, s0, "t1"), "t2").dom
    g2 = ac.fire_a(net, ac.fire_a(net, s0, "t2"), "t1").dom
    bad = []
    expect(bad, "t1t2", g1, P.GAMMA1)
    expect(bad, "t2t1", g2, P.GAMMA2)
    expect(bad, "union", convex_union([g1, g2]), None)
    report(4, "translated Fig 2.a SCG classes", bad, time.perf_counter() - t, 1)


def _union(nets):
    checked, bad = 0, []
    for net in nets:
        rep = checks.union_suite(net, depth=3, sizes=(2, 3))
        checked += rep.checked
        bad += [(net.name,) + f for f in rep.failures]
    return checked, bad


def test_criterion_5_union_ptpn():
    t = time.perf_counter()
    checked, bad = _union(random_pnet(s) for s in P_SEEDS)
    report(5, "aggregate = union of interleavings, P-TPN", bad, time.perf_counter() - t, 60,
           f"{N_RANDOM} nets, {checked} sets")


def test_criterion_6_union_atpn():
    t = time.perf_counter()
    checked, bad = _union(itertools.chain((random_anet(s) for s in A_SEEDS),
                                            (translate_p_to_a(random_pnet(s)) for s in P_SEEDS)))
    report(6, "aggregate = union of interleavings, A-TPN", bad, time.perf_counter() - t, 60,
           f"{N_RANDOM} native + {N_RANDOM} translated nets, {checked} sets")


def test_criterion_7_redundancy():
    t = time.perf_counter()
    checked, bad = 0, []
    nets = itertools.chain((random_pnet(s) for s in P_SEEDS), (random_anet(s) for s in A_SEEDS),
                           [fig("fig2a"), fig("fig2b")])
    for net in nets:
        rep = checks.redundancy_suite(net, depth=3)
        checked += rep.checked
        bad += [(net.name,) + f for f in rep.failures]
    report(7, "sequence condition = order-free condition + ordering", bad, time.perf_counter() - t,
           detail=f"{checked} orderings")


def test_criterion_8_oracle():
    t = time.perf_counter()
    nets = [fig("fig2a"), fig("fig2b"), fig("ndead")] + [random_pnet(s) for s in range(1000, 1050)]
    traces = words = 0
    bad = []
    for net in nets:
        rep = checks.oracle_containment(net, horizon=4, grid=Fraction(1, 2))
        traces += rep.checked
        bad += [(net.name, "trace not accepted", w) for w in rep.failures]
        rep = checks.aggl_equivalence(net, depth=4)
        words += rep.checked
        bad += [(net.name,) + f for f in rep.failures]
    nets_failing = len({b[0] for b in bad})
    with_err = sum(1 for b in bad if "Err" in repr(b[-1]))
    report(8, "run traces accepted; step-aggl equivalent to classic", bad, time.perf_counter() - t, 120,
           f"{len(nets)} nets, {traces} traces, {words} words, {nets_failing} nets failing, "
           f"{with_err} of {len(bad)} failing words contain Err")


def test_criterion_9_dbm():
    t = time.perf_counter()
    rng = random.Random(9)
    grids = {k: grid_points(k, hi=10, denom=1) for k in range(1, 5)}
    bad = []
    dbms = pairs = 0
    while pairs < 1000:
        vars = ("w", "x", "y", "z")[:rng.randint(1, 4)]
        a, b = random_pair(rng, vars, hi=10)
        dbms += 2
        pts = grids[len(vars)]
        for d in (a, b):
            c = d.canonical()
            md = members(d, pts, 1)
            if c.canonical() != c:
                bad.append((dbms, "canonicalize not idempotent"))
            if c.is_consistent() != bool(md.any()):
                bad.append((dbms, "consistency"))
            elif c.is_consistent() and not np.array_equal(members(c, pts, 1), md):
                bad.append((dbms, "solution set changed"))
        ma, mb = members(a, pts, 1), members(b, pts, 1)
        if a.includes(b) != bool(np.all(ma[mb])):
            bad.append((dbms, "includes"))
        if not (a.is_consistent() and b.is_consistent()):
            continue
        pairs += 1
        # difference and union pieces carry strict bounds: use a 1/2 grid
        hull = enclosing([a, b])
        hp = box_points(hull, 2)
        ha, hb = members(a, hp, 2), members(b, hp, 2)
        got = np.zeros(len(hp), dtype=bool)
        for piece in difference(a, b):
            mp = members(piece, hp, 2)
            if (got & mp).any():
                bad.append((dbms, "difference pieces overlap"))
            got |= mp
        if not np.array_equal(got, ha & ~hb):
            bad.append((dbms, "difference"))
        u = convex_union([a, b])
        if u is None:
            if not (members(hull, hp, 2) & ~(ha | hb)).any():
                bad.append((dbms, "not convex without a witness point"))
        elif not np.array_equal(members(u, hp, 2), ha | hb):
            bad.append((dbms, "convex union"))
    report(9, "DBM operations vs point enumeration", bad, time.perf_counter() - t, 30,
           f"{dbms} DBMs, {pairs} consistent pairs")


def test_criterion_10_reduction():
    import json
    t = time.perf_counter()
    net = fig("fig2a")
    full = json.loads(ex.to_json(ex.explore(net, ex.ExploreConfig(reduce="none"))))
    agg = json.loads(ex.to_json(ex.explore(net, ex.ExploreConfig(reduce="step-aggl"))))
    bad = [] if agg["nodes"] < full["nodes"] else [f"{agg['nodes']} >= {full['nodes']}"]
    report(10, "step-aggl graph smaller on Fig 2.a", bad, time.perf_counter() - t,
           detail=f"{agg['nodes']} vs {full['nodes']} nodes")


if __name__ == "__main__":
    tests = [(int(k.split("_")[2]), fn) for k, fn in globals().items() if k.startswith("test_criterion_")]
    for _, fn in sorted(tests):
        try:
            fn()
        except AssertionError:
            pass
