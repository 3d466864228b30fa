"""Seeded random nets for property tests."""
from __future__ import annotations

import random

from .model import ANet, Interval, PNet, SafetyViolation


def _interval(rng, cmax):
    lo = rng.randint(0, cmax)
    if rng.random() < 0.1:
        return Interval(lo, None)
    return Interval(lo, rng.randint(lo, cmax))


def _structure(rng, n_places, n_trans):
    """Places split into state-machine components, one token each.

    A transition moves the token of one component, or synchronizes two
    components; it may also drop a token. Nets built this way are safe.
    """
    places = [f"p{i + 1}" for i in range(n_places)]
    transitions = [f"t{i + 1}" for i in range(n_trans)]
    shuffled = places[:]
    rng.shuffle(shuffled)
    comps = []
    i = 0
    while i < n_places:
        size = rng.randint(1, 3)
        comps.append(shuffled[i:i + size])
        i += size
    pre, post = {}, {}
    for t in transitions:
        chosen = rng.sample(comps, 2 if len(comps) > 1 and rng.random() < 0.3 else 1)
        pre[t] = [rng.choice(comp) for comp in chosen]
        post[t] = [rng.choice(comp) for comp in chosen if rng.random() < 0.85]
    m0 = [rng.choice(comp) for comp in comps if rng.random() < 0.9]
    return places, transitions, pre, post, m0


def is_safe(net, limit: int = 2000) -> bool:
    """Untimed reachability check that no firing puts a second token in a place."""
    seen = {net.m0}
    todo = [net.m0]
    while todo:
        m = todo.pop()
        for t in net.enabled(m):
            if not net.pre[t]:
                continue
            try:
                m2 = net.fire_marking(m, t)
            except SafetyViolation:
                return False
            if m2 not in seen:
                seen.add(m2)
                if len(seen) > limit:
                    return False
                todo.append(m2)
    return True


def random_pnet(seed, max_places=6, max_trans=5, cmax=4, safe=True) -> PNet:
    """Random P-TPN; with ``safe`` the structure is redrawn until untimed-safe."""
    rng = random.Random(seed)
    while True:
        n_places = rng.randint(2, max_places)
        n_trans = rng.randint(1, max_trans)
        places, transitions, pre, post, m0 = _structure(rng, n_places, n_trans)
        isp = {p: _interval(rng, cmax) for p in places}
        net = PNet(f"rand{seed}", places, transitions, pre, post, m0, isp=isp)
        if not safe or is_safe(net):
            return net


def random_anet(seed, max_places=6, max_trans=5, cmax=4, safe=True) -> ANet:
    rng = random.Random(seed)
    while True:
        n_places = rng.randint(2, max_places)
        n_trans = rng.randint(1, max_trans)
        places, transitions, pre, post, m0 = _structure(rng, n_places, n_trans)
        isa = {(p, t): _interval(rng, cmax) for t in transitions for p in pre[t]}
        net = ANet(f"rand{seed}", places, transitions, pre, post, m0, isa=isa)
        if not safe or is_safe(net):
            return net
