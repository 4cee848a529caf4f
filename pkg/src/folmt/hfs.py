"""Hereditarily finite sets and the membership model of an n-ary relation.

Sets are kept in canonical form (members sorted and duplicate free, all the
way down), so structural equality is extensional equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Sequence

from folmt.errors import PreconditionError
from folmt.semantics import FiniteModel, make_model
from folmt.syntax import Signature


class HfSet:
    __slots__ = ("elems", "rank", "_key", "_hash", "_members")

    def __init__(self, elems: tuple):
        # callers guarantee ``elems`` is canonical; use from_list otherwise
        self.elems = elems
        self.rank = 1 + max((e.rank for e in elems), default=-1)
        self._key = (self.rank, tuple(e._key for e in elems))
        self._hash = hash(self._key)
        self._members = None

    def __eq__(self, other):
        return isinstance(other, HfSet) and self._key == other._key

    def __hash__(self):
        return self._hash

    def __lt__(self, other: "HfSet"):
        return self._key < other._key

    def __le__(self, other: "HfSet"):
        return self._key <= other._key

    def __len__(self):
        return len(self.elems)

    def __iter__(self):
        return iter(self.elems)

    def __contains__(self, x):
        if self._members is None:
            self._members = frozenset(self.elems)
        return x in self._members

    def __repr__(self):
        return show(self)


EMPTY = HfSet(())


def from_list(xs: Iterable[HfSet]) -> HfSet:
    return HfSet(tuple(sorted(set(xs))))


def mem(a: HfSet, b: HfSet) -> bool:
    return a in b


def eq(a: HfSet, b: HfSet) -> bool:
    return a == b


def show(a: HfSet) -> str:
    return "{" + ",".join(show(e) for e in a.elems) + "}"


def pair(p: HfSet, q: HfSet) -> HfSet:
    """Kuratowski pair ``{{p}, {p, q}}``."""
    return from_list([from_list([p]), from_list([p, q])])


def tuple_(xs: Sequence[HfSet]) -> HfSet:
    """Right-nested pairs ``(x1, (x2, ..., xn))``; a 1-tuple is its only component."""
    if not xs:
        raise PreconditionError("tuple of an empty list")
    out = xs[-1]
    for x in reversed(xs[:-1]):
        out = pair(x, out)
    return out


def powerset(a: HfSet) -> HfSet:
    subsets = [from_list(c) for r in range(len(a) + 1) for c in combinations(a.elems, r)]
    return from_list(subsets)


def transitive_closure(a: HfSet) -> list[HfSet]:
    """``a`` followed by all its hereditary members, breadth first, without repeats."""
    seen = {a}
    out = [a]
    i = 0
    while i < len(out):
        for e in out[i].elems:
            if e not in seen:
                seen.add(e)
                out.append(e)
        i += 1
    return out


def ordinal(n: int) -> HfSet:
    """Von Neumann ordinal ``{0, 1, ..., n-1}``; a transitive set with ``n`` members."""
    x = EMPTY
    for _ in range(n):
        x = from_list(x.elems + (x,))
    return x


@dataclass
class MembershipModel:
    domain: list[HfSet]
    mem: frozenset                  # (a, b) positions with domain[a] in domain[b]
    d: HfSet
    r: HfSet
    i: list[HfSet]                  # source element -> set
    s: dict = field(repr=False)     # set -> source element
    arity: int = 1

    def __post_init__(self):
        self.pos = {x: j for j, x in enumerate(self.domain)}

    def index(self, x: HfSet) -> int:
        return self.pos[x]

    def to_model(self, rel: str = "mem") -> FiniteModel:
        sig = Signature((), ((rel, 2),))
        return make_model(sig, len(self.domain), {}, {rel: self.mem})


def relation_to_membership_model(m: int, n: int, table) -> MembershipModel:
    """Encode an ``n``-ary relation over ``{0..m-1}`` by membership.

    ``table`` is a predicate on ``n``-tuples or a collection of true tuples.
    ``d`` is the ordinal ``m`` (so ``i(x)`` is the ordinal ``x``), ``r`` the
    set of encoded true tuples, and the domain is the transitive closure of
    ``d``, ``r`` and every ``n``-tuple over members of ``d``.
    """
    if m < 1:
        raise PreconditionError("source domain must be inhabited")
    if n < 1:
        raise PreconditionError("arity must be at least 1")
    holds = table if callable(table) else (lambda v, t=frozenset(map(tuple, table)): tuple(v) in t)
    d = ordinal(m)
    i = [ordinal(x) for x in range(m)]
    tuples = {v: tuple_([i[x] for x in v]) for v in product(range(m), repeat=n)}
    r = from_list(t for v, t in tuples.items() if holds(v))
    universe: set = set()
    for root in [d, r, *tuples.values()]:
        if root not in universe:
            universe.update(transitive_closure(root))
    domain = sorted(universe)
    pos = {x: j for j, x in enumerate(domain)}
    mem_pairs = frozenset((pos[e], pos[y]) for y in domain for e in y.elems)
    s = {x: j for j, x in enumerate(i)}
    return MembershipModel(domain, mem_pairs, d, r, i, s, n)


def section(mm: MembershipModel, y: HfSet) -> int:
    """The ``s`` map: inverse of ``i`` on members of ``d``, 0 elsewhere."""
    return mm.s.get(y, 0)


def membership_properties(mm: MembershipModel, m: int, n: int, table) -> dict[str, bool]:
    """Check the seven properties of the membership model as booleans."""
    holds = table if callable(table) else (lambda v, t=frozenset(map(tuple, table)): tuple(v) in t)
    N = len(mm.domain)
    members = [set() for _ in range(N)]
    owners = [set() for _ in range(N)]
    for a, b in mm.mem:
        members[b].add(a)
        owners[a].add(b)
    ext_pairs = [(x, y) for x in range(N) for y in range(N) if members[x] == members[y]]
    dpos = mm.index(mm.d)
    rpos = mm.index(mm.r)
    d_members = members[dpos]
    i_pos = [mm.pos.get(x) for x in mm.i]
    out = {
        "1_extensional": all(owners[x] <= owners[y] for x, y in ext_pairs),
        "2_ext_equal_is_equal": all(x == y for x, y in ext_pairs),
        "3_tuples_exist": all(tuple_([mm.domain[a] for a in v]) in mm.pos
                              for v in product(sorted(d_members), repeat=n)),
        "4_i_into_d": all(p is not None and p in d_members for p in i_pos),
        "5_d_exhausted": all(any(mm.domain[y] == ix for ix in mm.i) for y in d_members),
        "6_s_after_i": all(section(mm, mm.i[x]) == x for x in range(m)),
    }
    seven = True
    for v in product(range(m), repeat=n):
        t = tuple_([mm.i[x] for x in v])
        is_member = t in mm.pos and mm.pos[t] in members[rpos]
        if bool(holds(v)) != is_member:
            seven = False
            break
    out["7_relation_by_tuples"] = seven
    return out
