"""Concrete strong-semantics states of P-TPN and A-TPN, used as a test oracle.

A P-TPN state keeps one residence interval per live token; an A-TPN state
keeps one availability interval per live enabled arc. Time elapse, firing
and ``Err`` follow the net's timed transition system exactly, with exact
rationals.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import ERR, ANet, Interval, NotFirable, PNet, format_rational


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class PState:
    m: frozenset
    dead: frozenset
    ip: tuple  # sorted ((place, Interval), ...) over m - dead

    def interval(self, p) -> Interval:
        return dict(self.ip)[p]

    @property
    def items(self):
        return self.ip


@dataclass(frozen=True)
class AState:
    m: frozenset
    dead: frozenset  # dead arcs
    ia: tuple  # sorted (((place, transition), Interval), ...) over EE(m) - dead

    def interval(self, arc) -> Interval:
        return dict(self.ia)[arc]

    @property
    def items(self):
        return self.ia


def _pack(mapping):
    return tuple(sorted(mapping.items()))


def initial_state(net):
    if isinstance(net, PNet):
        return PState(net.m0, frozenset(), _pack({p: net.isp[p] for p in net.m0}))
    arcs = net.enabled_arcs(net.m0)
    return AState(net.m0, frozenset(), _pack({a: net.isa[a] for a in arcs}))


def max_delay(s):
    """Largest admissible elapse from ``s`` (None when unbounded)."""
    his = [iv.hi for _, iv in s.items if iv.hi is not None]
    return min(his) if his else None


def elapse(s, d):
    """State after ``d`` time units, or None when ``d`` overpasses a live interval."""
    d = Fraction(d)
    if d < 0:
        raise ValueError("negative delay")
    if d == 0:
        return s
    limit = max_delay(s)
    if limit is not None and d > limit:
        return None
    moved = tuple((k, iv.shifted(d)) for k, iv in s.items)
    if isinstance(s, PState):
        return PState(s.m, s.dead, moved)
    return AState(s.m, s.dead, moved)


def _p_firable(net: PNet, s: PState, t) -> bool:
    if not net.pre[t] or not net.pre[t] <= s.m - s.dead:
        return False
    ip = dict(s.ip)
    return all(ip[p].lo == 0 for p in net.pre[t])


def _a_firable(net: ANet, s: AState, t) -> bool:
    ia = dict(s.ia)
    arcs = [(p, t) for p in net.pre[t]]
    if not arcs or not net.pre[t] <= s.m:
        return False
    return all(a in ia and ia[a].lo == 0 for a in arcs)


def is_firable(net, s, t) -> bool:
    if isinstance(s, PState):
        return _p_firable(net, s, t)
    return _a_firable(net, s, t)


def firable_transitions(net, s) -> list:
    return [t for t in net.transitions if is_firable(net, s, t)]


def fire(net, s, t):
    """Fire ``t`` immediately; raises NotFirable or SafetyViolation."""
    if not is_firable(net, s, t):
        raise NotFirable(f"{t} is not firable")
    m2 = net.fire_marking(s.m, t)
    if isinstance(s, PState):
        ip = {p: iv for p, iv in s.ip if p not in net.pre[t]}
        for p in net.post[t]:
            ip[p] = net.isp[p]
        return PState(m2, s.dead, _pack(ip))
    consumed = net.pre[t]
    ia = {a: iv for a, iv in s.ia if a[0] not in consumed}
    for p in net.post[t]:
        for t2 in net.outputs(p):
            ia[(p, t2)] = net.isa[(p, t2)]
    dead = frozenset(a for a in s.dead if a[0] not in consumed)
    return AState(m2, dead, _pack(ia))


def err_firable(net, s) -> bool:
    if firable_transitions(net, s):
        return False
    return any(iv.hi == 0 for _, iv in s.items)


def fire_err(net, s, err_bound: str = "upper"):
    """Kill every live token (arc) whose interval upper bound has reached 0.

    For A-TPN states, ``err_bound="lower"`` kills arcs whose lower bound is 0
    instead (alternative reading of the dead-arc clause).
    """
    if not err_firable(net, s):
        raise NotFirable("Err is not firable")
    if isinstance(s, PState) or err_bound == "upper":
        dying = {k for k, iv in s.items if iv.hi == 0}
    else:
        dying = {k for k, iv in s.items if iv.lo == 0}
    rest = tuple((k, iv) for k, iv in s.items if k not in dying)
    if isinstance(s, PState):
        return PState(s.m, s.dead | dying, rest)
    return AState(s.m, s.dead | dying, rest)


# run enumeration


def candidate_delays(s, grid: Fraction) -> list:
    """Grid multiples within the admissible window plus every interval endpoint in it."""
    limit = max_delay(s)
    ends = set()
    for _, iv in s.items:
        ends.add(iv.lo)
        if iv.hi is not None:
            ends.add(iv.hi)
    if limit is None:
        # past the largest endpoint nothing changes but the (unbounded) clocks
        limit = max(ends, default=Fraction(0)) + grid
    out = {e for e in ends if e <= limit}
    k = 0
    while k * grid <= limit:
        out.add(k * grid)
        k += 1
    return sorted(out)


def successors(net, s, grid, err_bound="upper"):
    """``(delay, label, state)`` for every grid-admissible step from ``s``."""
    for d in candidate_delays(s, grid):
        s1 = elapse(s, d)
        if s1 is None:
            continue
        fired = False
        for t in net.transitions:
            if is_firable(net, s1, t):
                fired = True
                yield d, t, fire(net, s1, t)
        if not fired and err_firable(net, s1):
            yield d, ERR, fire_err(net, s1, err_bound)


def enumerate_runs(net, horizon: int, grid, budget: int = 200_000, err_bound="upper") -> set:
    """All timed runs of at most ``horizon`` steps with grid-admissible delays.

    Each run is a tuple of ``(delay, label)`` pairs; the empty run is included.
    """
    grid = Fraction(grid)
    if horizon < 0 or grid <= 0:
        raise ValueError("horizon must be >= 0 and grid > 0")
    runs = {()}
    count = 0
    stack = [((), initial_state(net))]
    while stack:
        run, s = stack.pop()
        if len(run) >= horizon:
            continue
        count += 1
        if count > budget:
            raise BudgetExceeded(f"run enumeration exceeded {budget} states")
        for d, label, s2 in successors(net, s, grid, err_bound):
            r2 = run + ((d, label),)
            runs.add(r2)
            stack.append((r2, s2))
    return runs


def untimed_traces(net, horizon: int, grid, budget: int = 200_000, err_bound="upper") -> set:
    """Untimed traces (label tuples) of all runs up to ``horizon`` steps, memoized on states."""
    grid = Fraction(grid)
    if horizon < 0 or grid <= 0:
        raise ValueError("horizon must be >= 0 and grid > 0")
    memo = {}
    counter = [0]

    def walk(s, h):
        key = (s, h)
        if key in memo:
            return memo[key]
        counter[0] += 1
        if counter[0] > budget:
            raise BudgetExceeded(f"trace enumeration exceeded {budget} states")
        out = {()}
        if h > 0:
            for _, label, s2 in successors(net, s, grid, err_bound):
                out.update((label,) + tail for tail in walk(s2, h - 1))
        memo[key] = out
        return out

    return walk(initial_state(net), horizon)


def format_run(run) -> str:
    return " ".join(f"{format_rational(d)} {label}" for d, label in run)
