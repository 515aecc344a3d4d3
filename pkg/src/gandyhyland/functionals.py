"""Type-two functionals, their countable associates, and bounded search.

A Functional wraps a total continuous operation on points together with an
optional modulus (how long a prefix determines the value). An Associate is
the countable face of the same thing: a query on finite prefixes answering
0 for "not yet decided" and v+1 for "decided, value v". The two directions
of the correspondence are associate_from_functional and
functional_from_associate.

All possibly-unbounded scans take a Fuel budget and raise FuelExhausted
instead of diverging.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable

from .errors import FuelExhausted, InvariantViolation
from .sequences import EMPTY, FinSeq, Point, _from_trusted_tuple, decode, extend, pad, take

DEFAULT_FUEL = 100_000


class Fuel:
    """Step budget for a bounded search. Strictly decreases; never refills."""

    __slots__ = ("budget", "remaining")

    def __init__(self, max_steps: int = DEFAULT_FUEL):
        if max_steps < 0:
            raise ValueError("fuel budget must be a natural")
        self.budget = max_steps
        self.remaining = max_steps

    def spend(self, context: str = "search") -> None:
        if self.remaining <= 0:
            raise FuelExhausted(f"{context}: no steps left of {self.budget}")
        self.remaining -= 1

    def try_spend(self) -> bool:
        """Non-raising variant for scans where running dry is an answer."""
        if self.remaining <= 0:
            return False
        self.remaining -= 1
        return True


@dataclass(frozen=True)
class Associate:
    """Prefix-indexed description of a continuous functional.

    query(sigma) = 0 when sigma is too short to decide the value, and
    v + 1 once decided. Deciding prefixes must stay decided with the same
    answer along every extension; check_neighbourhood tests that law on a
    bounded grid.
    """

    query: Callable[[FinSeq], int]
    name: str = "associate"

    def __repr__(self) -> str:
        return f"Associate({self.name})"


@dataclass
class Functional:
    """Total continuous operation on points, with an optional modulus.

    modulus(f) is a length m such that the value only depends on the first
    m values of f. It may be None for functionals only used where no
    modulus is required.
    """

    apply: Callable[[Point], int]
    modulus: Callable[[Point], int] | None = None
    name: str = "functional"

    def __repr__(self) -> str:
        return f"Functional({self.name})"


def associate_apply(gamma: Associate, alpha: Point, fuel: Fuel) -> int:
    """Value of the functional described by gamma at the point alpha.

    Scans prefixes of alpha until gamma decides; the scan is fuel-bounded
    because an associate may simply never decide along a given point.
    """
    read: list[int] = []
    while True:
        fuel.spend(f"associate_apply({gamma.name})")
        q = gamma.query(_from_trusted_tuple(tuple(read)))
        if q > 0:
            return q - 1
        read.append(alpha.value_at(len(read)))


def modulus_from_associate(gamma: Associate, alpha: Point, fuel: Fuel) -> int:
    """Length of the first deciding prefix of alpha under gamma."""
    read: list[int] = []
    while True:
        fuel.spend(f"modulus_from_associate({gamma.name})")
        if gamma.query(_from_trusted_tuple(tuple(read))) > 0:
            return len(read)
        read.append(alpha.value_at(len(read)))


def check_neighbourhood(gamma: Associate, depth: int, width: int) -> bool:
    """Exhaustively test the associate law on bounded sequences.

    Once a prefix decides, every extension must report the same decision.
    Checks all sequences with entries below width and length up to depth;
    only comparable pairs (a prefix and its extensions) matter, so a DFS
    carrying the first decision down each path covers them all.
    """

    def walk(sigma: FinSeq, decided: int) -> bool:
        q = gamma.query(sigma)
        if decided > 0 and q != decided:
            return False
        if decided == 0 and q > 0:
            decided = q
        if len(sigma) == depth:
            return True
        return all(walk(extend(sigma, v), decided) for v in range(width))

    return walk(EMPTY, 0)


def associate_from_functional(y: Functional) -> Associate:
    """Canonical associate of a functional that carries a modulus.

    A prefix decides as soon as it is at least as long as the modulus at
    its zero-padding, and then reports the value there.
    """
    if y.modulus is None:
        raise InvariantViolation(f"{y.name} has no modulus; cannot build associate")

    def query(sigma: FinSeq) -> int:
        p = pad(sigma, 0)
        if y.modulus(p) <= len(sigma):
            return y.apply(p) + 1
        return 0

    return Associate(query, name=f"assoc({y.name})")


def functional_from_associate(gamma: Associate, fuel_budget: int = DEFAULT_FUEL) -> Functional:
    """Functional evaluating gamma along its argument; fresh fuel per call."""
    return Functional(
        apply=lambda alpha: associate_apply(gamma, alpha, Fuel(fuel_budget)),
        modulus=lambda alpha: modulus_from_associate(gamma, alpha, Fuel(fuel_budget)),
        name=f"fn({gamma.name})",
    )


def mu(f: Point, fuel: Fuel) -> int:
    """Least n with f(n) = 0, by fuel-bounded linear scan."""
    n = 0
    while True:
        fuel.spend("mu")
        if f.value_at(n) == 0:
            return n
        n += 1


def _flag_associate(h: Point, offset: int, name: str) -> Associate:
    """Shared body of the two flag associates.

    A prefix sigma decides once h fires strictly below |sigma|, i.e. there
    is a least n < |sigma| with h(n) != 0; the decision is offset + sigma(n).
    The search for the firing index is incremental and cached so repeated
    queries stay cheap on long prefixes.
    """
    state: dict[str, int | None] = {"frontier": 0, "found": None}

    def first_firing_below(m: int) -> int | None:
        found = state["found"]
        if found is not None:
            return found if found < m else None
        frontier = state["frontier"]
        while frontier < m:
            if h.value_at(frontier) != 0:
                state["found"] = frontier
                state["frontier"] = frontier
                return frontier
            frontier += 1
        state["frontier"] = frontier
        return None

    def query(sigma: FinSeq) -> int:
        n0 = first_firing_below(len(sigma))
        if n0 is None:
            return 0
        return offset + sigma[n0]

    return Associate(query, name=name)


def gamma_flag(h: Point) -> Associate:
    """Flag associate of h: report 1 + sigma(n0) at the first firing index."""
    return _flag_associate(h, 1, name=f"flag({h.name})")


def epsilon_flag(h: Point) -> Associate:
    """Sibling flag reporting 2 + sigma(n0); differs from gamma_flag only
    in the offset, which is what makes the pair useful as an
    extensionality probe."""
    return _flag_associate(h, 2, name=f"flag+1({h.name})")


def enumerate_sequences(depth: int, width: int) -> list[FinSeq]:
    """Every sequence with length <= depth and entries < width.

    Test-sized helper; the count is sum of width^k, so keep the grid small.
    """
    out: list[FinSeq] = [EMPTY]
    for k in range(1, depth + 1):
        out.extend(FinSeq(p) for p in product(range(width), repeat=k))
    return out


def indexed_value(obj: Point | Associate, i: int) -> int:
    """Uniform enumeration of a point or an associate by natural index.

    Points are read at positions; associates are read at decoded sequence
    codes. ext_witness scans both kinds through this single lens.
    """
    if isinstance(obj, Point):
        return obj.value_at(i)
    return obj.query(decode(i))
