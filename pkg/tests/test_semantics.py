from fractions import Fraction

import pytest

from tpnclass import semantics as sem
from tpnclass.model import ERR, Interval, NotFirable, parse_net, translate_p_to_a
from tpnclass.netgen import random_pnet


def test_elapse_examples(fig2a):
    s0 = sem.initial_state(fig2a)
    s1 = sem.elapse(s0, 1)
    assert s1.interval("p1") == Interval(0, 2)
    assert s1.interval("p2") == Interval(1, 3)
    assert sem.elapse(s0, 0) == s0
    assert sem.elapse(s0, 4) is None
    with pytest.raises(ValueError):
        sem.elapse(s0, -1)


def test_elapse_additive(fig2b):
    s = sem.initial_state(fig2b)
    for a in (Fraction(0), Fraction(1, 2), Fraction(1)):
        for b in (Fraction(1, 2), Fraction(3, 2)):
            whole = sem.elapse(s, a + b)
            first = sem.elapse(s, a)
            if whole is not None and first is not None:
                assert sem.elapse(first, b) == whole


def test_fire_after_elapse(fig2a):
    s = sem.fire(fig2a, sem.elapse(sem.initial_state(fig2a), 1), "t1")
    assert s.m == {"p2", "p3"}
    assert s.interval("p2") == Interval(1, 3)
    assert s.interval("p3") == Interval(1, 1)


def test_not_firable_cases(fig2a, ndead):
    half = sem.elapse(sem.initial_state(fig2a), Fraction(1, 2))
    assert not sem.is_firable(fig2a, half, "t1")
    with pytest.raises(NotFirable):
        sem.fire(fig2a, half, "t1")
    s = sem.fire_err(ndead, sem.elapse(sem.initial_state(ndead), 1))
    assert not sem.is_firable(ndead, sem.elapse(s, 3), "t")


def test_err_example(ndead):
    s = sem.elapse(sem.initial_state(ndead), 1)
    assert sem.err_firable(ndead, s)
    s2 = sem.fire_err(ndead, s)
    assert s2.dead == {"p1"}
    assert s2.interval("p2") == s.interval("p2")


def test_err_not_firable(fig2a):
    s = sem.elapse(sem.initial_state(fig2a), 1)
    assert sem.firable_transitions(fig2a, s) == ["t1"]
    assert not sem.err_firable(fig2a, s)
    assert not sem.err_firable(fig2a, sem.initial_state(fig2a))


def test_err_grows_dead_set():
    for seed in range(30):
        net = random_pnet(seed)
        s = sem.initial_state(net)
        for _ in range(6):
            succ = list(sem.successors(net, s, Fraction(1, 2)))
            if not succ:
                break
            d, label, s2 = succ[-1]
            if label == ERR:
                before = dict(sem.elapse(s, d).ip)
                assert s2.dead > s.dead
                assert all(before[p] == iv for p, iv in s2.ip)
            s = s2


def test_runs_include_both_orders(fig2a):
    traces = {tuple(label for _, label in r) for r in sem.enumerate_runs(fig2a, 2, Fraction(1, 2))}
    assert ("t1", "t2") in traces and ("t2", "t1") in traces
    assert sem.enumerate_runs(fig2a, 0, Fraction(1, 2)) == {()}


def test_ndead_runs_start_with_err(ndead):
    runs = sem.enumerate_runs(ndead, 2, 1)
    maximal = [r for r in runs if r and not any(len(o) > len(r) and o[:len(r)] == r for o in runs)]
    assert maximal
    assert all(r[0][1] == ERR for r in maximal)


def test_untimed_traces_match_runs(fig2b):
    runs = sem.enumerate_runs(fig2b, 3, 1)
    assert sem.untimed_traces(fig2b, 3, 1) == {tuple(x for _, x in r) for r in runs}


def test_translated_traces_agree(fig2a, fig2b):
    for net in (fig2a, fig2b):
        assert sem.untimed_traces(net, 4, Fraction(1, 2)) == \
            sem.untimed_traces(translate_p_to_a(net), 4, Fraction(1, 2))


def test_candidate_delays_include_endpoints():
    net = parse_net("net ptpn n\nplace p [1/3,5/3] marked\ntrans t pre p post\n")
    ds = sem.candidate_delays(sem.initial_state(net), Fraction(1, 2))
    assert Fraction(1, 3) in ds and Fraction(5, 3) in ds
    assert max(ds) == Fraction(5, 3)


def test_atpn_err_bound_readings():
    net = parse_net("net atpn a\nplace p marked\nplace q marked\nplace r marked\n"
                    "trans t pre p:[0,1] q:[3,4] post\ntrans u pre p:[0,5] r:[3,4] post\n")
    s = sem.elapse(sem.initial_state(net), 1)
    assert sem.err_firable(net, s)
    assert sem.fire_err(net, s).dead == {("p", "t")}
    assert sem.fire_err(net, s, err_bound="lower").dead == {("p", "t"), ("p", "u")}


def test_budget():
    net = parse_net("net ptpn loop\nplace p [0,1] marked\ntrans t pre p post p\n")
    with pytest.raises(sem.BudgetExceeded):
        sem.enumerate_runs(net, 8, Fraction(1, 4), budget=50)


def test_format_run(fig2a):
    assert sem.format_run(((Fraction(1), "t1"), (Fraction(1, 2), "t2"))) == "1 t1 1/2 t2"
