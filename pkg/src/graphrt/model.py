"""Denotations of the nine distinguished constants as enumerable sets.

Each constant is a comprehension over coded tuples; membership of any given
natural is decidable by decoding, so the raw descriptor enumerates by an
ascending membership scan.  Partial applications get exact specialized
enumerators (registered as rules) derived by unfolding the comprehension
against the discovered prefix of each operand; these deliver nested
applications at desk-scale fuel, which a blind scan cannot.

Two displayed tables are repaired so the applicative axioms hold with
numerals read as singletons {n}:

  * successor maps the code 2**n (the singleton {n}) to the bare element
    n + 1, and predecessor maps 2**(n+1) to n; the unrepaired variants are
    kept under the names sN_display / pN_display for the axiom-failure demo;
  * definition-by-cases yields elements of the FIRST applied argument when
    the two numeral arguments agree.
"""

from __future__ import annotations

from .coding import is_power_of_two, iter_bits, pair, singleton_exponent, subset_code, unpair
from .reset import ConstantDef, ReSet, _Lane, apply, const, explicit, register_constant

CONSTANT_IDS = ("k", "s", "p", "p0", "p1", "d", "sN", "pN", "zero")


class AmbiguousNumeral(Exception):
    """Raised when a set meant to be read as a numeral shows two elements."""


# ---------------------------------------------------------------------------
# Membership tests (raw enumeration)


def _k_member(t: int) -> bool:
    x, r = unpair(t)
    _y, z = unpair(r)
    return bool((x >> z) & 1)


def _witnessed(a: int, y: int, z: int) -> bool:
    # forall c in e_a exists (z2, c) in e_y with z2 subseteq z
    for c in iter_bits(a):
        if not any(
            unpair(q)[1] == c and subset_code(unpair(q)[0], z) for q in iter_bits(y)
        ):
            return False
    return True


def _s_member(t: int) -> bool:
    x, r = unpair(t)
    y, r2 = unpair(r)
    z, w = unpair(r2)
    for q in iter_bits(x):
        z1, r3 = unpair(q)
        a, w2 = unpair(r3)
        if w2 == w and subset_code(z1, z) and _witnessed(a, y, z):
            return True
    return False


def _p_member(t: int) -> bool:
    u, r = unpair(t)
    v, w = unpair(r)
    n = singleton_exponent(u)
    if n is not None and w == 2 * n:
        return True
    m = singleton_exponent(v)
    return m is not None and w == 2 * m + 1


def _p0_member(t: int) -> bool:
    u, v = unpair(t)
    e = singleton_exponent(u)
    return e is not None and e % 2 == 0 and v == e // 2


def _p1_member(t: int) -> bool:
    u, v = unpair(t)
    e = singleton_exponent(u)
    return e is not None and e % 2 == 1 and v == (e - 1) // 2


def _d_member(t: int) -> bool:
    y, r = unpair(t)
    x, r2 = unpair(r)
    u, r3 = unpair(r2)
    v, z = unpair(r3)
    m = singleton_exponent(u)
    n = singleton_exponent(v)
    if m is None or n is None:
        return False
    if m == n:
        return bool((y >> z) & 1)
    return bool((x >> z) & 1)


def _sN_member(t: int) -> bool:
    u, v = unpair(t)
    n = singleton_exponent(u)
    return n is not None and v == n + 1


def _pN_member(t: int) -> bool:
    u, v = unpair(t)
    e = singleton_exponent(u)
    return e is not None and e >= 1 and v == e - 1


def _sN_display_member(t: int) -> bool:
    u, v = unpair(t)
    n = singleton_exponent(u)
    return n is not None and v == 1 << (n + 1)


def _pN_display_member(t: int) -> bool:
    u, v = unpair(t)
    e = singleton_exponent(u)
    return e is not None and e >= 1 and v == 1 << (e - 1)


# ---------------------------------------------------------------------------
# Raw generating lanes.  Each emits a small-parameter slice of the
# comprehension whose element values are far beyond any value scan: the
# singleton-code / empty-witness families that applications actually consume.


def _k_raw():
    return [
        _Lane([("raw",)], lambda z: [pair(1 << z, pair(0, z))]),
        _Lane([("raw",), ("raw",)], lambda y, z: [pair(1 << z, pair(y, z))]),
    ]


def _canonical_witness_code(acode: int) -> int:
    # the witness set {(0, c) : c in e_a}, the representative every lane
    # family emits first (empty subset component)
    y = 0
    for c in iter_bits(acode):
        y |= 1 << pair(0, c)
    return y


def _s_raw():
    def fast(z1, w):
        q = pair(z1, pair(0, w))
        return [pair(1 << q, pair(0, pair(z1, w)))]

    def canonical(z1, acode, w):
        q = pair(z1, pair(acode, w))
        return [pair(1 << q, pair(_canonical_witness_code(acode), pair(z1, w)))]

    def wide(z1, y, zx, w):
        q = pair(z1, pair(0, w))
        z = z1 | zx
        return [pair(1 << q, pair(y, pair(z, w)))]

    return [
        _Lane([("raw",), ("raw",)], fast),
        _Lane([("raw",), ("raw",), ("raw",)], canonical),
        _Lane([("raw",), ("raw",), ("raw",), ("raw",)], wide),
    ]


def _p_raw():
    return [
        _Lane([("raw",), ("raw",)], lambda n, y: [pair(1 << n, pair(y, 2 * n))]),
        _Lane([("raw",)], lambda m: [pair(0, pair(1 << m, 2 * m + 1))]),
        _Lane([("raw",), ("raw",)], lambda x, m: [pair(x, pair(1 << m, 2 * m + 1))]),
    ]


def _p0_raw():
    return [_Lane([("raw",)], lambda n: [pair(1 << (2 * n), n)])]


def _p1_raw():
    return [_Lane([("raw",)], lambda n: [pair(1 << (2 * n + 1), n)])]


def _d_raw():
    return [
        _Lane(
            [("raw",), ("raw",)],
            lambda z, m: [pair(1 << z, pair(0, pair(1 << m, pair(1 << m, z))))],
        ),
        _Lane(
            [("raw",), ("raw",), ("raw",)],
            lambda z, m, n: []
            if m == n
            else [pair(0, pair(1 << z, pair(1 << m, pair(1 << n, z))))],
        ),
    ]


def _sN_raw():
    return [_Lane([("raw",)], lambda n: [pair(1 << n, n + 1)])]


def _pN_raw():
    return [_Lane([("raw",)], lambda n: [pair(1 << (n + 1), n)])]


def _sN_display_raw():
    return [_Lane([("raw",)], lambda n: [pair(1 << n, 1 << (n + 1))])]


def _pN_display_raw():
    return [_Lane([("raw",)], lambda n: [pair(1 << (n + 1), 1 << n)])]


# ---------------------------------------------------------------------------
# Specialized application rules


def _k_rules():
    def arity1(a: ReSet):
        return [_Lane([("view", a), ("raw",)], lambda z, y: [pair(y, z)])]

    def arity2(a: ReSet, b: ReSet):
        return [_Lane([("view", a)], lambda z: [z])]

    return {1: arity1, 2: arity2}


def _s_rules():
    def arity1(a: ReSet):
        def emit_raw(q, y, zx):
            z1, r = unpair(q)
            acode, w = unpair(r)
            z = z1 | zx
            if _witnessed(acode, y, z):
                return [pair(y, pair(z, w))]
            return []

        def emit_canonical(q, zx):
            z1, r = unpair(q)
            acode, w = unpair(r)
            return [pair(_canonical_witness_code(acode), pair(z1 | zx, w))]

        return [
            _Lane([("view", a), ("raw",)], emit_canonical),
            _Lane([("view", a), ("raw",), ("raw",)], emit_raw),
        ]

    def arity2(a: ReSet, b: ReSet):
        def emit_novars(q, zx):
            z1, r = unpair(q)
            acode, w = unpair(r)
            if acode != 0:
                return []
            return [pair(z1 | zx, w)]

        # incremental second-component index over b's log: c -> [(pos, z2)]
        windex: dict[int, list[tuple[int, int]]] = {}
        wcursor = [0]

        def emit_joined(q, zx, jpos):
            j, blog = jpos
            while wcursor[0] <= j:
                p_ = wcursor[0]
                z2_, c_ = unpair(blog[p_])
                windex.setdefault(c_, []).append((p_, z2_))
                wcursor[0] += 1
            z1, r = unpair(q)
            acode, w = unpair(r)
            if acode == 0:
                return []
            cs = list(iter_bits(acode))
            # the element at position j must itself be a witness, else this
            # pivot produces nothing new
            cj = unpair(blog[j])[1]
            if cj not in cs:
                return []
            cands = []
            for c in cs:
                cc = windex.get(c)
                if not cc or cc[0][0] > j:
                    return []
                cands.append(cc)
            out = []

            # product over per-c witness choices, pivoted on position j so
            # each combination is produced exactly once across tuples
            def rec(slot, zacc, maxpos):
                if slot == len(cands):
                    if maxpos == j:
                        out.append(pair(z1 | zacc | zx, w))
                    return
                for p_, z2 in cands[slot]:
                    if p_ > j:
                        break
                    rec(slot + 1, zacc | z2, max(maxpos, p_))

            rec(0, 0, -1)
            return out

        return [
            _Lane([("view", a), ("raw",)], emit_novars),
            _Lane([("view", a), ("raw",), ("viewpos", b)], emit_joined),
        ]

    return {1: arity1, 2: arity2}


def _p_rules():
    def arity1(a: ReSet):
        return [
            _Lane([("view", a), ("raw",)], lambda n, y: [pair(y, 2 * n)]),
            _Lane([("raw",)], lambda m: [pair(1 << m, 2 * m + 1)]),
        ]

    def arity2(a: ReSet, b: ReSet):
        return [
            _Lane([("view", a)], lambda n: [2 * n]),
            _Lane([("view", b)], lambda m: [2 * m + 1]),
        ]

    return {1: arity1, 2: arity2}


def _proj_rule(parity: int):
    def arity1(a: ReSet):
        def emit(e):
            if e % 2 == parity:
                return [(e - parity) // 2]
            return []

        return [_Lane([("view", a)], emit)]

    return {1: arity1}


def _succ_rules():
    def arity1(a: ReSet):
        return [_Lane([("view", a)], lambda n: [n + 1])]

    return {1: arity1}


def _pred_rules():
    def arity1(a: ReSet):
        return [_Lane([("view", a)], lambda n: [n - 1] if n >= 1 else [])]

    return {1: arity1}


def _succ_display_rules():
    def arity1(a: ReSet):
        return [_Lane([("view", a)], lambda n: [1 << (n + 1)])]

    return {1: arity1}


def _pred_display_rules():
    def arity1(a: ReSet):
        return [_Lane([("view", a)], lambda n: [1 << (n - 1)] if n >= 1 else [])]

    return {1: arity1}


def _d_rules():
    def arity1(a: ReSet):
        def emit_neq(z, xr, m, n):
            if m == n:
                return []
            x = (1 << z) | xr
            return [pair(x, pair(1 << m, pair(1 << n, z)))]

        return [
            _Lane(
                [("view", a), ("raw",), ("raw",)],
                lambda z, x, m: [pair(x, pair(1 << m, pair(1 << m, z)))],
            ),
            _Lane([("raw",), ("raw",), ("raw",), ("raw",)], emit_neq),
        ]

    def arity2(a: ReSet, b: ReSet):
        return [
            _Lane([("view", a), ("raw",)], lambda z, m: [pair(1 << m, pair(1 << m, z))]),
            _Lane(
                [("view", b), ("raw",), ("raw",)],
                lambda z, m, n: [] if m == n else [pair(1 << m, pair(1 << n, z))],
            ),
        ]

    def arity3(a: ReSet, b: ReSet, c1: ReSet):
        return [
            _Lane([("view", a), ("view", c1)], lambda z, m: [pair(1 << m, z)]),
            _Lane(
                [("view", b), ("view", c1), ("raw",)],
                lambda z, m, n: [] if m == n else [pair(1 << n, z)],
            ),
        ]

    def arity4(a: ReSet, b: ReSet, c1: ReSet, c2: ReSet):
        return [
            _Lane(
                [("view", a), ("view", c1), ("view", c2)],
                lambda z, m, n: [z] if m == n else [],
            ),
            _Lane(
                [("view", b), ("view", c1), ("view", c2)],
                lambda z, m, n: [] if m == n else [z],
            ),
        ]

    return {1: arity1, 2: arity2, 3: arity3, 4: arity4}


def _register_all() -> None:
    register_constant(ConstantDef("k", _k_member, _k_rules(), _k_raw))
    register_constant(ConstantDef("s", _s_member, _s_rules(), _s_raw))
    register_constant(ConstantDef("p", _p_member, _p_rules(), _p_raw))
    register_constant(ConstantDef("p0", _p0_member, _proj_rule(0), _p0_raw))
    register_constant(ConstantDef("p1", _p1_member, _proj_rule(1), _p1_raw))
    register_constant(ConstantDef("d", _d_member, _d_rules(), _d_raw))
    register_constant(ConstantDef("sN", _sN_member, _succ_rules(), _sN_raw))
    register_constant(ConstantDef("pN", _pN_member, _pred_rules(), _pN_raw))
    register_constant(
        ConstantDef("sN_display", _sN_display_member, _succ_display_rules(), _sN_display_raw)
    )
    register_constant(
        ConstantDef("pN_display", _pN_display_member, _pred_display_rules(), _pN_display_raw)
    )


_register_all()


# ---------------------------------------------------------------------------
# Public surface


def const_set(name: str) -> ReSet:
    """Denotation of a distinguished constant; zero is the explicit {0}."""
    if name == "zero":
        return explicit({0})
    if name not in CONSTANT_IDS and name not in ("sN_display", "pN_display"):
        raise KeyError(f"unknown constant: {name}")
    return const(name)


def numeral(n: int) -> ReSet:
    """The numeral value {n}: a singleton explicit set."""
    if n < 0:
        raise ValueError("numerals are naturals")
    return explicit({n})


def read_numeral(x: ReSet, fuel: int) -> int | None:
    """First discovered element, provided it stays unique within fuel.

    Returns None when nothing is discovered; raises AmbiguousNumeral when a
    second distinct element shows up (the set is not a numeral).
    """
    from .reset import enumerate_elements

    els = enumerate_elements(x, fuel)
    if not els:
        return None
    if len(els) > 1:
        raise AmbiguousNumeral(tuple(sorted(els)[:2]))
    return els[0]


def successor(x: ReSet) -> ReSet:
    return apply(const("sN"), x)
