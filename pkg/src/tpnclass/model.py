"""Net structures for P-Time and A-Time Petri nets and their text format.

Net text format (line oriented, ``#`` starts a comment)::

    net ptpn <name>
    place <id> [<lo>,<hi>] [marked]
    trans <id> pre <id>* post <id>*

For ``net atpn`` nets, place lines carry no interval and each preset entry
carries the arc interval: ``trans t pre p1:[1,3] p2:[0,inf] post p3``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

ERR = "Err"
_ID_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_.]*\Z")
_KEYWORDS = {"net", "place", "trans", "pre", "post", "marked", "inf", ERR}
_TOKEN_RE = re.compile(r"[^\s\[]*\[[^\]]*\]|\S+")


class NetError(ValueError):
    """Base class for malformed nets."""


class NetSyntaxError(NetError):
    def __init__(self, message, line=0, column=0):
        super().__init__(f"line {line}, column {column}: {message}")
        self.reason = message
        self.line = line
        self.column = column


class NetSemanticError(NetError):
    def __init__(self, message, ident=None, line=0):
        where = f"line {line}: " if line else ""
        super().__init__(f"{where}{message}")
        self.reason = message
        self.ident = ident
        self.line = line


class SafetyViolation(RuntimeError):
    """Firing would put a second token in a marked place."""

    def __init__(self, transition, places):
        names = ", ".join(sorted(places))
        super().__init__(f"firing {transition} puts a second token in {names}: net is not safe")
        self.transition = transition
        self.places = frozenset(places)


class NotFirable(ValueError):
    pass


def parse_rational(text: str) -> Fraction:
    """Parse ``3``, ``3/4`` or ``0.25`` into an exact Fraction (``ValueError`` otherwise)."""
    if not re.fullmatch(r"\d+(/\d+|\.\d+)?", text):
        raise ValueError(f"not a nonnegative rational: {text!r}")
    value = Fraction(text)
    return value


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo, hi]`` of nonnegative rationals; ``hi=None`` is +inf."""

    lo: Fraction
    hi: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        if self.hi is not None:
            object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo < 0:
            raise ValueError(f"negative lower bound {self.lo}")
        if self.hi is not None and self.hi < self.lo:
            raise ValueError(f"empty interval [{self.lo},{self.hi}]")

    @property
    def bounded(self) -> bool:
        return self.hi is not None

    def shifted(self, d) -> "Interval":
        """The interval after ``d`` time units elapse (caller checks ``d <= hi``)."""
        hi = None if self.hi is None else self.hi - d
        return Interval(max(Fraction(0), self.lo - d), hi)

    def __str__(self):
        hi = "inf" if self.hi is None else format_rational(self.hi)
        return f"[{format_rational(self.lo)},{hi}]"


def _interval_denominators(intervals: Iterable[Interval]):
    for iv in intervals:
        yield iv.lo.denominator
        if iv.hi is not None:
            yield iv.hi.denominator


@dataclass(frozen=True, eq=True)
class _Net:
    name: str
    places: tuple
    transitions: tuple
    pre: Mapping
    post: Mapping
    m0: frozenset
    _pindex: dict = field(init=False, repr=False, compare=False)
    _tindex: dict = field(init=False, repr=False, compare=False)
    _outputs: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "places", tuple(self.places))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        object.__setattr__(self, "pre", {t: frozenset(self.pre.get(t, ())) for t in self.transitions})
        object.__setattr__(self, "post", {t: frozenset(self.post.get(t, ())) for t in self.transitions})
        object.__setattr__(self, "m0", frozenset(self.m0))
        object.__setattr__(self, "_pindex", {p: i for i, p in enumerate(self.places)})
        object.__setattr__(self, "_tindex", {t: i for i, t in enumerate(self.transitions)})
        outs = {p: [] for p in self.places}
        for t in self.transitions:
            for p in self.pre[t]:
                if p in outs:
                    outs[p].append(t)
        object.__setattr__(self, "_outputs", {p: tuple(ts) for p, ts in outs.items()})
        self._validate()

    def _validate(self):
        if set(self.places) & set(self.transitions):
            dup = sorted(set(self.places) & set(self.transitions))[0]
            raise NetSemanticError(f"id {dup!r} names both a place and a transition", dup)
        if len(set(self.places)) != len(self.places):
            raise NetSemanticError("duplicate place id")
        if len(set(self.transitions)) != len(self.transitions):
            raise NetSemanticError("duplicate transition id")
        for t in self.transitions:
            for p in self.pre[t] | self.post[t]:
                if p not in self._pindex:
                    raise NetSemanticError(f"transition {t} references undefined place {p!r}", p)
        for p in self.m0:
            if p not in self._pindex:
                raise NetSemanticError(f"initial marking references undefined place {p!r}", p)

    # structural queries

    def place_index(self, p) -> int:
        return self._pindex[p]

    def transition_index(self, t) -> int:
        return self._tindex[t]

    def outputs(self, p) -> tuple:
        """Transitions having ``p`` in their preset (``p°``), in declaration order."""
        return self._outputs[p]

    def sort_places(self, places) -> list:
        return sorted(places, key=self._pindex.__getitem__)

    def sort_transitions(self, transitions) -> list:
        return sorted(transitions, key=self._tindex.__getitem__)

    def enabled(self, marking) -> list:
        marking = frozenset(marking)
        return [t for t in self.transitions if self.pre[t] <= marking]

    def in_conflict(self, t1, t2) -> bool:
        return bool(self.pre[t1] & self.pre[t2])

    def fire_marking(self, marking, t) -> frozenset:
        """``(M - Pre(t)) + Post(t)``, raising SafetyViolation if a token would double up."""
        rest = frozenset(marking) - self.pre[t]
        clash = rest & self.post[t]
        if clash:
            raise SafetyViolation(t, clash)
        return rest | self.post[t]


@dataclass(frozen=True, eq=True)
class PNet(_Net):
    """P-TPN: static residence interval ``isp[p]`` on every place."""

    isp: Mapping = field(default_factory=dict)

    def _validate(self):
        super()._validate()
        for p in self.places:
            if p not in self.isp:
                raise NetSemanticError(f"place {p} has no interval", p)
        extra = set(self.isp) - set(self.places)
        if extra:
            p = sorted(extra)[0]
            raise NetSemanticError(f"interval given for undefined place {p!r}", p)

    @property
    def kind(self) -> str:
        return "ptpn"

    @property
    def scale(self) -> int:
        """Least common denominator of all interval bounds."""
        return math.lcm(1, *_interval_denominators(self.isp.values()))


@dataclass(frozen=True, eq=True)
class ANet(_Net):
    """A-TPN: static availability interval ``isa[(p, t)]`` on every input arc."""

    isa: Mapping = field(default_factory=dict)

    def _validate(self):
        super()._validate()
        arcs = set(self.input_arcs())
        missing = arcs - set(self.isa)
        if missing:
            p, t = sorted(missing)[0]
            raise NetSemanticError(f"input arc ({p},{t}) has no interval", p)
        extra = set(self.isa) - arcs
        if extra:
            p, t = sorted(extra)[0]
            raise NetSemanticError(f"interval given for non-arc ({p},{t})", p)

    @property
    def kind(self) -> str:
        return "atpn"

    @property
    def scale(self) -> int:
        return math.lcm(1, *_interval_denominators(self.isa.values()))

    def input_arcs(self) -> list:
        """IE in (place, transition) declaration order."""
        return [(p, t) for p in self.places for t in self.outputs(p)]

    def enabled_arcs(self, marking) -> list:
        """EE(M): input arcs whose place is marked."""
        return [(p, t) for p in self.places if p in marking for t in self.outputs(p)]

    def sort_arcs(self, arcs) -> list:
        return sorted(arcs, key=lambda a: (self._pindex[a[0]], self._tindex[a[1]]))


def enabled(net, marking) -> list:
    return net.enabled(marking)


def in_conflict(net, t1, t2) -> bool:
    return net.in_conflict(t1, t2)


def translate_p_to_a(net: PNet) -> ANet:
    """A-TPN with ``isa(p, t) = isp(p)`` on every input arc."""
    isa = {(p, t): net.isp[p] for t in net.transitions for p in net.pre[t]}
    return ANet(net.name, net.places, net.transitions, net.pre, net.post, net.m0, isa=isa)


# text format


def _parse_interval(token: str, lineno: int, col: int) -> Interval:
    m = re.fullmatch(r"\[\s*([^,\s]+)\s*,\s*([^,\s\]]+)\s*\]", token)
    if not m:
        raise NetSyntaxError(f"malformed interval {token!r}", lineno, col)
    try:
        lo = parse_rational(m.group(1))
        hi = None if m.group(2) == "inf" else parse_rational(m.group(2))
    except ValueError as exc:
        raise NetSyntaxError(str(exc), lineno, col) from None
    if hi is not None and lo > hi:
        raise NetSyntaxError(f"empty interval {token}", lineno, col)
    return Interval(lo, hi)


def _check_id(token, lineno, col, what):
    if not _ID_RE.match(token) or token in _KEYWORDS:
        raise NetSyntaxError(f"invalid {what} id {token!r}", lineno, col)
    return token


def parse_net(text: str):
    """Parse the net text format into a PNet or ANet."""
    kind = name = None
    places, transitions = [], []
    isp, isa, pre, post = {}, {}, {}, {}
    marked = set()
    seen = {}
    refs = []  # (place, lineno) for deferred resolution

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        tokens = [(m.group(0), m.start() + 1) for m in _TOKEN_RE.finditer(line)]
        if not tokens:
            continue
        head, hcol = tokens[0]
        if kind is None:
            if head != "net":
                raise NetSyntaxError("no net header", lineno, hcol)
            if len(tokens) != 3 or tokens[1][0] not in ("ptpn", "atpn"):
                raise NetSyntaxError("expected 'net ptpn|atpn <name>'", lineno, hcol)
            kind, name = tokens[1][0], tokens[2][0]
            continue
        if head == "net":
            raise NetSyntaxError("duplicate net header", lineno, hcol)

        if head in ("place", "trans"):
            if len(tokens) < 2:
                raise NetSyntaxError(f"missing {head} id", lineno, hcol + len(head))
            ident = _check_id(tokens[1][0], lineno, tokens[1][1], head)
            if ident in seen:
                raise NetSemanticError(f"duplicate id {ident!r} (first defined on line {seen[ident]})", ident, lineno)
            seen[ident] = lineno

        if head == "place":
            rest = tokens[2:]
            if kind == "ptpn":
                if not rest or not rest[0][0].startswith("["):
                    raise NetSyntaxError(f"place {ident} needs an interval", lineno, rest[0][1] if rest else len(line) + 1)
                isp[ident] = _parse_interval(rest[0][0], lineno, rest[0][1])
                rest = rest[1:]
            if rest and rest[0][0] == "marked":
                marked.add(ident)
                rest = rest[1:]
            if rest:
                raise NetSyntaxError(f"unexpected {rest[0][0]!r}", lineno, rest[0][1])
            places.append(ident)
        elif head == "trans":
            rest = tokens[2:]
            if not rest or rest[0][0] != "pre":
                raise NetSyntaxError("expected 'pre'", lineno, rest[0][1] if rest else len(line) + 1)
            words = [w for w, _ in rest]
            if "post" not in words:
                raise NetSyntaxError("expected 'post'", lineno, len(line) + 1)
            split = words.index("post")
            tpre, tpost = [], []
            for tok, col in rest[1:split]:
                if kind == "atpn":
                    if ":" not in tok:
                        raise NetSyntaxError(f"arc {tok!r} needs an interval (p:[lo,hi])", lineno, col)
                    pid, ivtext = tok.split(":", 1)
                    _check_id(pid, lineno, col, "place")
                    isa[(pid, ident)] = _parse_interval(ivtext, lineno, col + len(pid) + 1)
                else:
                    pid = _check_id(tok, lineno, col, "place")
                if pid in tpre:
                    raise NetSemanticError(f"place {pid} listed twice in pre of {ident}", pid, lineno)
                tpre.append(pid)
                refs.append((pid, lineno))
            for tok, col in rest[split + 1:]:
                pid = _check_id(tok, lineno, col, "place")
                if pid in tpost:
                    raise NetSemanticError(f"place {pid} listed twice in post of {ident}", pid, lineno)
                tpost.append(pid)
                refs.append((pid, lineno))
            transitions.append(ident)
            pre[ident], post[ident] = tpre, tpost
        else:
            raise NetSyntaxError(f"unknown directive {head!r}", lineno, hcol)

    if kind is None:
        raise NetSyntaxError("no net header", 1, 1)
    place_set = set(places)
    for pid, lineno in refs:
        if pid not in place_set:
            kind_of = "transition" if pid in seen else "undefined place"
            raise NetSemanticError(f"reference to {kind_of} {pid!r}", pid, lineno)
    if kind == "ptpn":
        return PNet(name, places, transitions, pre, post, marked, isp=isp)
    return ANet(name, places, transitions, pre, post, marked, isa=isa)


def load_net(path):
    with open(path, encoding="utf-8") as fh:
        return parse_net(fh.read())


def format_net(net) -> str:
    """Pretty-print a net in the text format; ``parse_net`` inverts it."""
    lines = [f"net {net.kind} {net.name}"]
    for p in net.places:
        parts = ["place", p]
        if isinstance(net, PNet):
            parts.append(str(net.isp[p]))
        if p in net.m0:
            parts.append("marked")
        lines.append(" ".join(parts))
    for t in net.transitions:
        ins = net.sort_places(net.pre[t])
        if isinstance(net, ANet):
            ins = [f"{p}:{net.isa[(p, t)]}" for p in ins]
        outs = net.sort_places(net.post[t])
        lines.append(" ".join(["trans", t, "pre", *ins, "post", *outs]))
    return "\n".join(lines) + "\n"
