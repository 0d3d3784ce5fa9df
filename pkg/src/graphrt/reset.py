"""Enumerable subsets of naturals as lazy, memoized, fuel-bounded enumerations.

A ReSet is an immutable descriptor: an explicit finite set, one of the
distinguished constants, or an application node.  Descriptors are interned,
so structurally equal descriptors are the same object and share discovery
state.  Application denotes the graph-model operator

    X . Y  =  { n | exists k subseteq Y with pair(k, n) in X }

and is total: apply always returns a descriptor, whose enumeration dovetails.

Enumeration is driven by ticks.  One tick of a node performs a bounded amount
of its own scheduling work and may grant each of its children one tick.  The
list of elements discovered by a node after t ticks is a pure function of
(descriptor, t): schedules are deterministic, children are granted ticks at a
fixed rate, and a node only ever reads the prefix of a child's log that its
own grants have paid for.  Fuel in the public API is a tick budget for the
queried node.

Application nodes whose head spine is a constant with a registered
partial-application rule enumerate through that rule (an exact,
denotation-preserving specialization); everything else uses the generic
dovetailer, which tracks pending pairs from the left operand and confirms
their subset obligations against the right operand as it is discovered.
"""

from __future__ import annotations

import itertools
import sys
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Optional

from .coding import iter_bits, unpair

sys.setrecursionlimit(2_000_000)

# Tuples evaluated per lane per tick; bounds per-tick work.
_PROC = 16
# Backlog size above which a lane stops expanding its covered box.
_SLACK = 96


class ReSet:
    """Interned descriptor of an enumerable subset of the naturals."""

    __slots__ = ("kind", "elems", "cname", "fn", "arg", "spine", "_state")

    def __init__(self, kind, elems=None, cname=None, fn=None, arg=None, spine=None):
        self.kind = kind          # "explicit" | "const" | "apply"
        self.elems = elems        # frozenset[int] for explicit
        self.cname = cname        # constant id for const
        self.fn = fn              # ReSet for apply
        self.arg = arg            # ReSet for apply
        self.spine = spine        # (cname, args tuple) when head is a constant
        self._state = None

    def __repr__(self):
        if self.kind == "explicit":
            inner = ",".join(str(e) for e in sorted(self.elems)[:8])
            more = ",..." if len(self.elems) > 8 else ""
            return f"{{{inner}{more}}}"
        if self.kind == "const":
            return self.cname
        return f"({self.fn!r} {self.arg!r})"


_INTERN: dict[object, ReSet] = {}


def explicit(elements: Iterable[int]) -> ReSet:
    es = frozenset(elements)
    if any(e < 0 for e in es):
        raise ValueError("explicit sets contain naturals only")
    key = ("E", es)
    r = _INTERN.get(key)
    if r is None:
        r = _INTERN[key] = ReSet("explicit", elems=es)
    return r


EMPTY = explicit(())


@dataclass(frozen=True)
class ConstantDef:
    """A distinguished constant: decidable membership plus application rules.

    member: decides whether a natural belongs to the constant's denotation
        (comprehensions are decidable once decoded, so the base raw
        enumeration is an ascending membership scan: sound, complete in the
        limit).
    rules: arity -> factory(args) -> list of lanes; an exact enumerator for
        the constant applied to that many operands.
    raw_lanes: extra generating lanes for the raw enumeration.  Elements of
        these comprehensions have values that are towers of pair codes over
        small parameters; a value scan never reaches them, so each constant
        also enumerates its small-parameter families directly.
    """

    name: str
    member: Callable[[int], bool]
    rules: dict[int, Callable[..., list["_Lane"]]]
    raw_lanes: Callable[[], list["_Lane"]] | None = None


_CONSTANTS: dict[str, ConstantDef] = {}


def register_constant(defn: ConstantDef) -> None:
    _CONSTANTS[defn.name] = defn


def const(name: str) -> ReSet:
    if name not in _CONSTANTS:
        raise KeyError(f"unknown constant: {name}")
    key = ("C", name)
    r = _INTERN.get(key)
    if r is None:
        r = _INTERN[key] = ReSet("const", cname=name, spine=(name, ()))
    return r


def apply(x: ReSet, y: ReSet) -> ReSet:
    """Application node; totality is structural, the result always exists."""
    key = ("A", id(x), id(y))
    r = _INTERN.get(key)
    if r is None:
        spine = None
        if x.spine is not None:
            cname, args = x.spine
            spine = (cname, args + (y,))
        r = _INTERN[key] = ReSet("apply", fn=x, arg=y, spine=spine)
    return r


def apply_chain(x: ReSet, *ys: ReSet) -> ReSet:
    for y in ys:
        x = apply(x, y)
    return x


# ---------------------------------------------------------------------------
# Discovery state


class _State:
    __slots__ = ("log_ticks", "log_elems", "elem_tick", "ticks", "gen")

    def __init__(self, gen):
        self.log_ticks: list[int] = []
        self.log_elems: list[int] = []
        self.elem_tick: dict[int, int] = {}
        self.ticks = 0
        self.gen = gen


def _state(r: ReSet) -> _State:
    st = r._state
    if st is None:
        st = r._state = _State(_machine(r))
    return st


def _ensure(r: ReSet, ticks: int) -> _State:
    st = _state(r)
    while st.ticks < ticks:
        batch = next(st.gen)
        st.ticks += 1
        if batch:
            for e in batch:
                if e not in st.elem_tick:
                    st.elem_tick[e] = st.ticks
                    st.log_ticks.append(st.ticks)
                    st.log_elems.append(e)
    return st


def _count_upto(st: _State, ticks: int) -> int:
    # log_ticks is nondecreasing; count entries with tick <= ticks.
    import bisect

    return bisect.bisect_right(st.log_ticks, ticks)


def enumerate_elements(r: ReSet, fuel: int) -> list[int]:
    """Elements discovered within fuel ticks, in discovery order."""
    if fuel < 0:
        raise ValueError("fuel must be a natural")
    st = _ensure(r, fuel)
    return st.log_elems[: _count_upto(st, fuel)]


def reset_universe() -> None:
    """Drop all interned descriptors and discovery state (test isolation)."""
    _INTERN.clear()


# ---------------------------------------------------------------------------
# Machines


def _machine(r: ReSet) -> Iterator[list[int]]:
    if r.kind == "explicit":
        return _explicit_machine(r)
    if r.kind == "const":
        defn = _CONSTANTS[r.cname]
        lanes = [_Lane([("raw",)], _member_scan_emit(r.cname))]
        if defn.raw_lanes is not None:
            lanes.extend(defn.raw_lanes())
        return _lane_machine(lanes)
    # apply
    if r.spine is not None:
        target = _chase_aliases(r)
        if target is _CYCLE:
            return _empty_machine()
        if target is not r:
            return _passthrough_machine(target)
        cname, args = r.spine
        defn = _CONSTANTS[cname]
        factory = defn.rules.get(len(args))
        if factory is not None:
            return _lane_machine(factory(*args))
    return _generic_apply_machine(r.fn, r.arg)


_CYCLE = object()
_CHASE_BOUND = 256


def _chase_aliases(r: ReSet):
    """Follow saturated-spine reducts eagerly (bounded) so lazy alias chains
    stay shallow.  A chase that revisits a node is a pure alias cycle; such a
    set has no finite derivation for any element, hence denotes empty."""
    seen = {id(r)}
    cur = r
    for _ in range(_CHASE_BOUND):
        if cur.spine is None:
            break
        t = _alias_target(*cur.spine)
        if t is None:
            break
        if id(t) in seen:
            return _CYCLE
        seen.add(id(t))
        cur = t
    return cur


def _empty_machine() -> Iterator[list[int]]:
    while True:
        yield []


def _alias_target(cname: str, args: tuple) -> Optional[ReSet]:
    """Saturated combinator spines enumerate through their reducts.

    k a b c... == a c...  and  s a b c... == (a c)(b c)...  hold as set
    identities in the model, so the alias is denotation-exact; expansion is
    lazy (one granted tick per level), giving weak-head reduction of
    combinator towers without ever materializing the head's graph.
    """
    if cname == "k" and len(args) >= 3:
        return apply_chain(args[0], *args[2:])
    if cname == "s" and len(args) >= 3:
        return apply_chain(apply(args[0], args[2]), apply(args[1], args[2]), *args[3:])
    return None


def _passthrough_machine(target: ReSet) -> Iterator[list[int]]:
    granted = 0
    i = 0
    while True:
        granted += 1
        st = _ensure(target, granted)
        n = _count_upto(st, granted)
        out = st.log_elems[i:n]
        i = n
        yield out


def _explicit_machine(r: ReSet) -> Iterator[list[int]]:
    yield sorted(r.elems)
    while True:
        yield []


def _member_scan_emit(cname: str):
    defn = _CONSTANTS[cname]

    def emit(n: int) -> list[int]:
        return [n] if defn.member(n) else []

    return emit


def _generic_apply_machine(x: ReSet, y: ReSet) -> Iterator[list[int]]:
    granted = 0
    ix = iy = 0
    yview: set[int] = set()
    # waiting[e] = obligations blocked on e in discovery order; an obligation
    # is (missing, n) with missing a list of still-unconfirmed bits of k.
    waiting: dict[int, list] = {}
    while True:
        granted += 1
        out: list[int] = []

        sx = _ensure(x, granted)
        nx = _count_upto(sx, granted)
        while ix < nx:
            m = sx.log_elems[ix]
            ix += 1
            k, n = unpair(m)
            missing = [b for b in iter_bits(k) if b not in yview]
            if not missing:
                out.append(n)
            else:
                waiting.setdefault(missing[-1], []).append((missing, n))

        sy = _ensure(y, granted)
        ny = _count_upto(sy, granted)
        while iy < ny:
            e = sy.log_elems[iy]
            iy += 1
            yview.add(e)
            for missing, n in waiting.pop(e, ()):  # re-park or emit
                while missing and missing[-1] in yview:
                    missing.pop()
                if missing:
                    waiting.setdefault(missing[-1], []).append((missing, n))
                else:
                    out.append(n)
        yield out


# ---------------------------------------------------------------------------
# Graded product lanes (specialized constant applications)


class _Lane:
    """Fair enumerator of a product of index dimensions.

    dims entries are ("view", reset) for an index into the discovered prefix
    of a child, or ("raw",) for a bare natural that grows without bound.  The
    covered box only expands while the backlog is drained, so per-tick work
    stays bounded while every index tuple is eventually evaluated.  emit maps
    resolved dimension values to candidate elements.
    """

    def __init__(self, dims, emit):
        self.dims = dims
        self.emit = emit
        self.caps = [0] * len(dims)
        self.backlog: deque = deque()
        self.pending = 0
        self.granted = 0
        self.states = [None] * len(dims)

    def tick(self, out: list[int]) -> None:
        self.granted += 1
        targets = []
        for i, dim in enumerate(self.dims):
            if dim[0] in ("view", "viewpos"):
                st = _ensure(dim[1], self.granted)
                self.states[i] = st
                targets.append(_count_upto(st, self.granted))
            else:
                # raw dimensions widen slowly: fast delivery lives at small
                # raw values (empty subset codes, small numerals); view
                # dimensions carry the combinatorial load.  Periodic growth
                # under backlog pressure prevents starvation.
                grow = 1 if (self.pending == 0 or self.granted % 64 == 0) else 0
                targets.append(max(1, self.caps[i] + grow))
        if self.pending < _SLACK and targets != self.caps:
            k = len(self.dims)
            for d in range(k):
                if targets[d] > self.caps[d]:
                    ranges = (
                        [range(targets[e]) for e in range(d)]
                        + [range(self.caps[d], targets[d])]
                        + [range(self.caps[e]) for e in range(d + 1, k)]
                    )
                    size = 1
                    for rg in ranges:
                        size *= len(rg)
                    if size:
                        self.backlog.append(itertools.product(*ranges))
                        self.pending += size
            self.caps = targets
        done = 0
        while self.backlog and done < _PROC:
            it = self.backlog[0]
            tup = next(it, None)
            if tup is None:
                self.backlog.popleft()
                continue
            done += 1
            self.pending -= 1
            vals = []
            for i, dim in enumerate(self.dims):
                if dim[0] == "view":
                    vals.append(self.states[i].log_elems[tup[i]])
                elif dim[0] == "viewpos":
                    # position plus the (append-only) log; emit may read the
                    # prefix up to and including that position
                    vals.append((tup[i], self.states[i].log_elems))
                else:
                    vals.append(tup[i])
            out.extend(self.emit(*vals))


def _lane_machine(lanes: list[_Lane]) -> Iterator[list[int]]:
    while True:
        out: list[int] = []
        for lane in lanes:
            lane.tick(out)
        yield out


# ---------------------------------------------------------------------------
# Fuel-bounded membership and equality


@dataclass(frozen=True)
class Member:
    """Outcome of a membership query: Yes, or Unknown at this fuel.

    For explicit descriptors Unknown is definitive absence and callers may
    read it as No; `definitive` records that.
    """

    yes: bool
    definitive: bool

    def __bool__(self) -> bool:
        return self.yes


def member(r: ReSet, n: int, fuel: int) -> Member:
    if r.kind == "explicit":
        return Member(n in r.elems, True)
    st = _ensure(r, fuel)
    found = st.elem_tick.get(n, fuel + 1) <= fuel
    return Member(found, found)


@dataclass(frozen=True)
class EqVerdict:
    """Fuel-relative equality verdict.

    kind "differ" is definitive: some element was discovered on one side and
    is provably absent from the other (that side explicit).  kind "agree"
    means the discovered sets coincide at the comparison fuel; it is
    definitive only when both sides are explicit or the descriptors are the
    same node.  kind "unknown" means the discovered sets differ but neither
    discrepancy is provable.
    """

    kind: str                     # "agree" | "differ" | "unknown"
    witness: Optional[int] = None
    side: Optional[str] = None    # side that has the witness
    definitive: bool = False

    @property
    def agree(self) -> bool:
        return self.kind == "agree"


def _eq_ladder(fuel: int) -> list[int]:
    rungs = []
    f = 64
    while f < fuel:
        rungs.append(f)
        f *= 4
    rungs.append(fuel)
    return rungs


def eq_within_fuel(x: ReSet, y: ReSet, fuel: int) -> EqVerdict:
    """Compare discovered elements; may conclude agreement at an internal
    checkpoint below fuel (the verdict is fuel-relative either way)."""
    if x is y:
        return EqVerdict("agree", definitive=True)
    if x.kind == "explicit" and y.kind == "explicit":
        if x.elems == y.elems:
            return EqVerdict("agree", definitive=True)
        diff = sorted(x.elems ^ y.elems)[0]
        side = "left" if diff in x.elems else "right"
        return EqVerdict("differ", witness=diff, side=side, definitive=True)
    for rung in _eq_ladder(fuel):
        dx = set(enumerate_elements(x, rung)) if x.kind != "explicit" else set(x.elems)
        dy = set(enumerate_elements(y, rung)) if y.kind != "explicit" else set(y.elems)
        if y.kind == "explicit":
            extra = dx - dy
            if extra:
                return EqVerdict("differ", witness=min(extra), side="left", definitive=True)
        if x.kind == "explicit":
            extra = dy - dx
            if extra:
                return EqVerdict("differ", witness=min(extra), side="right", definitive=True)
        if dx == dy:
            return EqVerdict("agree")
    return EqVerdict("unknown")
