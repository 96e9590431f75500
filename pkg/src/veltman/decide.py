"""Bounded countermodel search over enumerated generalized frames.

``enumerate_frames`` streams every legal generalized frame on n canonical
worlds (w0, w1, ...), with the accessibility relation deduplicated up to
relabeling (lexicographically least orbit representative); the S families on
a fixed R are enumerated exactly, as the mandatory singleton generators plus
an antichain of extra generators per (w, u), kept only when
quasi-transitivity survives.  Frames for a logic beyond IL are filtered by
the corresponding frame conditions.

``countermodel_search`` walks frames smallest first and sweeps every
valuation of the formula's variables; the verdict is honest about its bound:
``NoCountermodelUpTo(n)`` only reports a bounded search, it does not claim
theoremhood.  ``decide`` upgrades to ``CheckedTheorem`` when a Hilbert proof
of the formula is supplied and verifies.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from itertools import combinations, permutations, product

from .formula import Formula, normalize
from .hilbert import Logic, ProofObject, check_proof, get_logic
from .model import GenFrame, GenModel, World, _quasi_transitivity_violation, close_s
from .properties import check_property, frame_validates

MAX_ENUM_WORLDS = 4

FRAME_CONDITIONS: dict[str, tuple[str, ...]] = {
    "IL": (),
    "ILM": ("Mgen",),
    "ILM0": ("M0gen",),
    "ILP": ("Pgen",),
    "ILP0": ("P0gen",),
    "ILR": ("Rgen",),
    "ILW": ("Wgen",),
    "ILWstar": ("M0gen", "Wgen"),
}


@dataclass(frozen=True)
class SearchBudget:
    max_worlds: int = 3
    max_generators: int | None = None  # bound on len(S_w(u)) during enumeration
    time_limit: float | None = None  # seconds

    def __post_init__(self):
        if self.max_worlds < 1:
            raise ValueError("max_worlds must be positive")
        if self.max_generators is not None and self.max_generators < 1:
            raise ValueError("max_generators must be positive")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time_limit must be positive")


@dataclass(frozen=True)
class Refuted:
    model: GenModel
    world: World


@dataclass(frozen=True)
class NoCountermodelUpTo:
    max_worlds: int


@dataclass(frozen=True)
class CheckedTheorem:
    proof: ProofObject


Verdict = Refuted | NoCountermodelUpTo | CheckedTheorem


class SearchTimeout(Exception):
    """Budget ran out before the bounded search finished."""

    def __init__(self, completed_worlds: int):
        super().__init__(f"time limit hit after finishing size {completed_worlds}")
        self.completed_worlds = completed_worlds


def _logic(logic: Logic | str) -> Logic:
    return logic if isinstance(logic, Logic) else get_logic(logic)


def _transitive(edges: frozenset[tuple[int, int]]) -> bool:
    return all((a, d) in edges for a, b in edges for c, d in edges if b == c)


def _canonical_relations(n: int) -> list[frozenset[tuple[int, int]]]:
    """Transitive irreflexive relations on 0..n-1, one per relabeling orbit,
    ordered by edge count then lexicographically."""
    slots = [(i, j) for i in range(n) for j in range(n) if i != j]
    out = []
    for k in range(len(slots) + 1):
        for chosen in combinations(slots, k):
            edges = frozenset(chosen)
            if not _transitive(edges):
                continue
            key = tuple(sorted(edges))
            if all(key <= tuple(sorted((p[a], p[b]) for a, b in edges))
                   for p in permutations(range(n))):
                out.append(edges)
    return out


def _antichains(pool: tuple[World, ...]) -> list[tuple[frozenset[World], ...]]:
    """All antichains of nonempty subsets of ``pool`` (the empty antichain first)."""
    subsets = [frozenset(c) for r in range(1, len(pool) + 1)
               for c in combinations(pool, r)]
    out = []
    for r in range(len(subsets) + 1):
        for combo in combinations(subsets, r):
            if all(not (a < b or b < a) for a, b in combinations(combo, 2)):
                out.append(tuple(sorted(combo, key=lambda g: (len(g), sorted(g)))))
    return sorted(out, key=lambda c: (len(c), [(len(g), sorted(g)) for g in c]))


def _passes(frame: GenFrame, conditions: tuple[str, ...]) -> bool:
    return all(check_property(frame, pid).holds for pid in conditions)


def enumerate_frames(n: int, logic: Logic | str = "IL",
                     max_generators: int | None = None):
    """Yield the legal generalized frames for ``logic`` on n canonical worlds."""
    if not 1 <= n <= MAX_ENUM_WORLDS:
        raise ValueError(f"frame enumeration supports 1..{MAX_ENUM_WORLDS} worlds, got {n}")
    conditions = FRAME_CONDITIONS[_logic(logic).name]
    worlds = tuple(f"w{i}" for i in range(n))
    for edges in _canonical_relations(n):
        pairs = frozenset((worlds[a], worlds[b]) for a, b in edges)
        succ = {w: frozenset(b for a, b in pairs if a == w) for w in worlds}
        keyed = sorted((w, u) for w in worlds for u in succ[w])
        mandatory = {
            (w, u): {frozenset({u})} | {frozenset({v}) for v in succ[u]}
            for w, u in keyed}
        pools = [tuple(sorted(succ[w] - {u} - succ[u])) for w, u in keyed]
        option_lists = [_antichains(pool) for pool in pools]
        combos = sorted(
            product(*option_lists),
            key=lambda combo: (sum(len(c) for c in combo),
                               [[(len(g), sorted(g)) for g in c] for c in combo]))
        for combo in combos:
            families: dict[World, dict[World, set[frozenset[World]]]] = {}
            oversize = False
            for (w, u), extras in zip(keyed, combo):
                gens = mandatory[(w, u)] | set(extras)
                if max_generators is not None and len(gens) > max_generators:
                    oversize = True
                    break
                families.setdefault(w, {})[u] = gens
            if oversize:
                continue
            frame = GenFrame(worlds, pairs, families)
            if _quasi_transitivity_violation(frame) is not None:
                continue
            if conditions and not _passes(frame, conditions):
                continue
            yield frame


def sample_frames(n: int, count: int, logic: Logic | str = "IL", seed: int = 0,
                  max_attempts: int = 200000) -> list[GenFrame]:
    """Deterministically sample ``count`` legal frames for ``logic`` on n worlds.

    Random strict orders are drawn, closed S families built from random extra
    generators, and frames failing the logic's conditions rejected.
    """
    conditions = FRAME_CONDITIONS[_logic(logic).name]
    rng = random.Random(seed)
    worlds = tuple(f"w{i}" for i in range(n))
    out: list[GenFrame] = []
    for _ in range(max_attempts):
        if len(out) >= count:
            return out
        order = list(range(n))
        rng.shuffle(order)
        edges = set()
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.45:
                    edges.add((order[i], order[j]))
        closed = set(edges)
        changed = True
        while changed:
            changed = False
            for a, b in list(closed):
                for c, d in list(closed):
                    if b == c and (a, d) not in closed:
                        closed.add((a, d))
                        changed = True
        pairs = {(worlds[a], worlds[b]) for a, b in closed}
        succ = {w: frozenset(b for a, b in pairs if a == w) for w in worlds}
        families: dict[World, dict[World, list[frozenset[World]]]] = {}
        for w in worlds:
            for u in succ[w]:
                pool = sorted(succ[w] - {u} - succ[u])
                if pool and rng.random() < 0.4:
                    size = rng.randint(1, len(pool))
                    extra = frozenset(rng.sample(pool, size))
                    families.setdefault(w, {})[u] = [extra]
        frame = close_s(GenFrame(worlds, pairs, families))
        if conditions and not _passes(frame, conditions):
            continue
        out.append(frame)
    raise RuntimeError(f"could not sample {count} {_logic(logic).name} frames "
                       f"on {n} worlds within {max_attempts} attempts")


def countermodel_search(f: Formula, logic: Logic | str,
                        budget: SearchBudget = SearchBudget()) -> Verdict:
    """Search frames of size 1..max_worlds for a world refuting ``f``.

    Deterministic: smallest frames first, valuations in bitmask order, first
    refuting world.  Raises SearchTimeout when the time budget runs out.
    """
    logic = _logic(logic)
    if budget.max_worlds > MAX_ENUM_WORLDS:
        raise ValueError(f"search is bounded at {MAX_ENUM_WORLDS} worlds")
    started = time.monotonic()
    for n in range(1, budget.max_worlds + 1):
        for frame in enumerate_frames(n, logic, budget.max_generators):
            if budget.time_limit is not None and time.monotonic() - started > budget.time_limit:
                raise SearchTimeout(n - 1)
            fals = frame_validates(frame, f, cap=MAX_ENUM_WORLDS)
            if fals is not True:
                model = GenModel(frame, fals.valuation)
                return Refuted(model, fals.world)
    return NoCountermodelUpTo(budget.max_worlds)


def decide(f: Formula, logic: Logic | str, budget: SearchBudget = SearchBudget(),
           proof: ProofObject | None = None) -> Verdict:
    """Check a supplied proof first; fall back to bounded countermodel search."""
    logic = _logic(logic)
    if proof is not None and check_proof(proof, logic).accepted \
            and normalize(proof.conclusion()) == normalize(f):
        return CheckedTheorem(proof)
    return countermodel_search(f, logic, budget)


def verdict_to_json(v: Verdict) -> dict:
    if isinstance(v, Refuted):
        return {"verdict": "refuted",
                "countermodel": v.model.to_json(),
                "refuted_at": v.world}
    if isinstance(v, NoCountermodelUpTo):
        return {"verdict": "no-countermodel-up-to", "max_worlds": v.max_worlds}
    if isinstance(v, CheckedTheorem):
        return {"verdict": "theorem", "proof_lines": len(v.proof.lines)}
    raise TypeError(f"not a verdict: {v!r}")
