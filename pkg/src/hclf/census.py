"""Effective divisors and the class-count tables N(x, d) = #{D >= 0 : D ~ x + d*D1}."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .curve import CurveModel, level, places_at_level, zeta_numerator_at_level
from .jacobian import (
    BasePointConfig, Divisor, DivisorClass, Jacobian, _place_multisets, effective_place_divisors,
    jacobian, place_ideal,
)
from .divisor import combine, zero_divisor


class CensusError(ValueError):
    pass


def effective_divisors(model: CurveModel, n: int, d: int, bound: int | None = None) -> list[Divisor]:
    """All effective divisors of degree d over F_{q^n}, in a fixed order."""
    bound = 2 * model.genus if bound is None else bound
    if d < 0 or d > bound:
        raise CensusError(f"degree {d} outside 0..{bound}")
    return list(effective_place_divisors(model, n, d))


def effective_divisor_count(model: CurveModel, n: int, d: int) -> int:
    """t^d coefficient of P_n(t) / ((1 - t)(1 - q^n t))."""
    P = zeta_numerator_at_level(model, n)
    Q = model.q ** n
    total = 0
    for i, c in enumerate(P[: d + 1]):
        k = d - i
        total += c * (Q ** (k + 1) - 1) // (Q - 1)
    return total


def class_count_closed_form(model: CurveModel, d: int, n: int = 1) -> int:
    """N(x, d) for d > 2g - 2, the same for every class x."""
    g = model.genus
    if d <= 2 * g - 2:
        raise CensusError("closed form needs d > 2g - 2")
    Q = model.q ** n
    return (Q ** (d - g + 1) - 1) // (Q - 1)


def _count_chunk(args):
    model, base, n, d, first = args
    J = jacobian(model, base, n)
    L = J.L
    by_deg = {e: places_at_level(model, n, e) for e in range(1, d + 1)}
    fast = J.has_mumford_table
    out: dict = {}
    for ms in _multisets_starting(by_deg, d, first):
        D = zero_divisor(L)
        for P, k in ms:
            D = combine(L, D, place_ideal(L, P), k)
        x = J.reduced_class(D, d) if fast else J.canonical(D)
        out[x] = out.get(x, 0) + 1
    return out


def _multisets_starting(by_deg, d, first):
    """Multisets whose smallest place is by_deg[e][i] for first = (e, i); None means d == 0."""
    if first is None:
        yield ()
        return
    e, i = first
    P = by_deg[e][i]
    for k in range(1, d // e + 1):
        for rest in _place_multisets(by_deg, d - k * e, (e, i + 1)):
            yield ((P, k),) + rest


def _partition(model, n, d):
    if d == 0:
        return [None]
    return [(e, i) for e in range(1, d + 1) for i in range(len(places_at_level(model, n, e)))]


def class_counts(model: CurveModel, base: BasePointConfig | None, n: int, d: int,
                 workers: int = 1, bound: int | None = None) -> dict[DivisorClass, int]:
    """Histogram of class_of over effective divisors of degree d; every class is a key."""
    bound = 2 * model.genus if bound is None else bound
    if d < 0 or d > bound:
        raise CensusError(f"degree {d} outside 0..{bound}")
    J = jacobian(model, base, n)
    base = J.base
    G = J.enumerate()
    parts = _partition(model, n, d)
    if workers > 1 and len(parts) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            chunks = list(ex.map(_count_chunk, [(model, base, n, d, p) for p in parts], chunksize=8))
    else:
        chunks = [_count_chunk((model, base, n, d, p)) for p in parts]
    counts = {x: 0 for x in G}
    for ch in chunks:
        for x, c in ch.items():
            counts[J.canonical(x.rep)] += c
    return counts


@dataclass
class CensusTable:
    level: int
    max_degree: int
    counts: dict = field(default_factory=dict)

    def slice(self, d: int) -> dict:
        return {x: c for (x, e), c in self.counts.items() if e == d}

    def __getitem__(self, key):
        return self.counts[key]


def census_table(model: CurveModel, base: BasePointConfig | None, n: int, d_max: int | None = None,
                 workers: int = 1) -> CensusTable:
    """N(x, d) for d <= d_max; enumeration up to 2g - 2 and the closed form above."""
    g = model.genus
    d_max = 2 * g if d_max is None else d_max
    J = jacobian(model, base, n)
    counts = {}
    for d in range(d_max + 1):
        if d <= 2 * g - 2:
            sl = class_counts(model, base, n, d, workers=workers, bound=d_max)
        else:
            c = class_count_closed_form(model, d, n)
            sl = {x: c for x in J.enumerate()}
        for x, c in sl.items():
            counts[(x, d)] = c
    return CensusTable(n, d_max, counts)
