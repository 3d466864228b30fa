"""Cross-validation suites shared by the ``check`` command and the tests."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import agglomeration as ag
from . import explorer as ex
from . import semantics as sem
from .model import NotFirable, SafetyViolation
from .pclasses import CSCG


@dataclass
class Report:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = f", {len(self.failures)} failures" if self.failures else ""
        return f"{status} {self.name} ({self.checked} checked{extra})"


def reachable_classes(net, depth: int, kind: str = CSCG) -> list:
    """Distinct classes reachable in at most ``depth`` firings (no Err)."""
    init = ex.initial(net, kind)
    seen = {ex.class_key(net, init): init}
    frontier = [init]
    for _ in range(depth):
        nxt = []
        for c in frontier:
            for t in ex.firable_transitions(net, c):
                d = ex.fire(net, c, t)
                k = ex.class_key(net, d)
                if k not in seen:
                    seen[k] = d
                    nxt.append(d)
        frontier = nxt
    return list(seen.values())


def concurrent_subsets(net, c, sizes=(2, 3)):
    fir = ex.firable_transitions(net, c)
    for m in sizes:
        for tm in itertools.combinations(fir, m):
            if not any(net.in_conflict(a, b) for a, b in itertools.combinations(tm, 2)):
                yield list(tm)


def union_suite(net, depth: int = 3, sizes=(2, 3), literal: bool = False) -> Report:
    """Agglomerated successor equals the convex union of all interleavings."""
    rep = Report("aggregate-union")
    for c in reachable_classes(net, depth):
        for tm in concurrent_subsets(net, c, sizes):
            rep.checked += 1
            try:
                why = ag.check_set(net, c, tm, literal=literal)
            except SafetyViolation as e:
                why = f"safety violation: {e}"
            if why:
                rep.failures.append((ex.format_class(net, c), tuple(tm), why))
    return rep


def redundancy_suite(net, depth: int = 3, sizes=(2, 3)) -> Report:
    """Sequence condition == order-free condition plus the ordering chain."""
    rep = Report("redundancy")
    for c in reachable_classes(net, depth):
        for tm in concurrent_subsets(net, c, sizes):
            for seq in itertools.permutations(tm):
                rep.checked += 1
                if not ag.check_redundancy(net, c, list(seq)):
                    rep.failures.append((ex.format_class(net, c), seq))
                elif ag.seq_condition(net, c, list(seq)).is_consistent() != _fires(net, c, seq):
                    rep.failures.append((ex.format_class(net, c), seq, "consistency differs from stepwise firing"))
    return rep


def _fires(net, c, seq) -> bool:
    try:
        for t in seq:
            c = ex.fire(net, c, t)
    except NotFirable:
        return False
    return True


def oracle_containment(net, horizon: int = 4, grid=Fraction(1, 2), err_bound="upper", budget=200_000) -> Report:
    """Every untimed trace of the concrete semantics is accepted by the classic CSCG."""
    rep = Report("oracle-containment")
    g = ex.explore(net, ex.ExploreConfig(graph=CSCG))
    for w in sorted(sem.untimed_traces(net, horizon, grid, budget=budget, err_bound=err_bound)):
        rep.checked += 1
        if not ex.untimed_language_accepts(g, w):
            rep.failures.append(w)
    return rep


def aggl_equivalence(net, depth: int = 4) -> Report:
    """Step-agglomerated and classic CSCG accept the same traces up to ``depth``.

    Checked both ways: every classic word is accepted by the reduced graph,
    and every path of the reduced graph orders into some classic word.
    """
    rep = Report("step-aggl-equivalence")
    gc = ex.explore(net, ex.ExploreConfig(graph=CSCG))
    ga = ex.explore(net, ex.ExploreConfig(graph=CSCG, reduce="step-aggl"))
    for w in sorted(ex.words(gc, depth)):
        rep.checked += 1
        if not ex.untimed_language_accepts(ga, w):
            rep.failures.append(("classic word not accepted", w))
    for path in sorted(ex.block_paths(ga, depth)):
        rep.checked += 1
        if not any(ex.untimed_language_accepts(gc, tuple(x for b in combo for x in b))
                   for combo in itertools.product(*[itertools.permutations(b) for b in path])):
            rep.failures.append(("reduced path has no classic ordering", path))
    return rep


def run_all(net, depth: int = 3, horizon: int = 4, grid=Fraction(1, 2), err_bound="upper") -> list:
    reports = [union_suite(net, depth), redundancy_suite(net, depth),
               oracle_containment(net, horizon, grid, err_bound), aggl_equivalence(net, horizon)]
    return reports
