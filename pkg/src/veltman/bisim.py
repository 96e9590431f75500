"""Bisimulations between generalized models.

A relation Z is a bisimulation when related worlds agree on all
propositional variables and the two transfer clauses hold: an R-step on
either side can be matched by an R-step on the other such that every
S-image of the matching successor is refined by an S-image of the original
(every member of the original image has a Z-partner in the other image).

The transfer clauses only need the stored generator sets: the inner
"every member has a partner in V'" condition is monotone in V', and an
S-image witness V can always be shrunk to a generator, so checking
generators on both sides decides the clause for the full monotone closure.

``largest_autobisimulation`` iterates Z -> Z & ok(Z) starting from atomic
agreement.  Each iterate stays an equivalence, so the loop refines a
partition at most |W| times before reaching the greatest fixpoint, which is
the union of all autobisimulations.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import GenModel, World


@dataclass(frozen=True)
class BisimViolation:
    clause: str  # "at", "forth" or "back"
    pair: tuple[World, World]
    detail: str


@dataclass(frozen=True)
class Partition:
    class_of: dict[World, str]
    classes: dict[str, frozenset[World]]

    def to_json(self) -> dict:
        return {cid: sorted(ws) for cid, ws in sorted(self.classes.items())}


def _partition_from_blocks(blocks) -> Partition:
    class_of: dict[World, str] = {}
    classes: dict[str, frozenset[World]] = {}
    for block in blocks:
        cid = min(block)
        classes[cid] = frozenset(block)
        for w in block:
            class_of[w] = cid
    return Partition(class_of, classes)


def _atoms(m: GenModel, w: World, names) -> frozenset[str]:
    return frozenset(p for p in names if w in m.valuation.get(p, ()))


def _forth_ok(m1: GenModel, m2: GenModel, x: World, y: World, z: set) -> bool:
    """Every R-step from x is matched from y, with S-image refinement."""
    for u in m1.frame.successors(x):
        if not any((u, u2) in z and _images_refine(m1, m2, x, u, y, u2, z)
                   for u2 in m2.frame.successors(y)):
            return False
    return True


def _images_refine(m1: GenModel, m2: GenModel, x: World, u: World,
                   y: World, u2: World, z: set) -> bool:
    for g2 in m2.frame.gens(y, u2):
        if not any(all(any((v, v2) in z for v2 in g2) for v in g1)
                   for g1 in m1.frame.gens(x, u)):
            return False
    return True


def bisimulation_violation(m1: GenModel, m2: GenModel,
                           z: set[tuple[World, World]]) -> BisimViolation | None:
    """First clause broken by Z, or None when Z is a bisimulation."""
    names = set(m1.valuation) | set(m2.valuation)
    inverse = {(b, a) for a, b in z}
    for w, w2 in sorted(z):
        if _atoms(m1, w, names) != _atoms(m2, w2, names):
            return BisimViolation("at", (w, w2), "variable sets differ")
        if not _forth_ok(m1, m2, w, w2, z):
            return BisimViolation("forth", (w, w2), "unmatched R-successor")
        if not _forth_ok(m2, m1, w2, w, inverse):
            return BisimViolation("back", (w, w2), "unmatched R-successor")
    return None


def is_bisimulation(m1: GenModel, m2: GenModel, z: set[tuple[World, World]]) -> bool:
    return bisimulation_violation(m1, m2, z) is None


def largest_autobisimulation(m: GenModel) -> Partition:
    """Greatest autobisimulation of ``m`` as a partition of its worlds."""
    names = sorted(m.valuation)
    sig = {w: _atoms(m, w, names) for w in m.worlds}
    z = {(a, b) for a in m.worlds for b in m.worlds if sig[a] == sig[b]}
    while True:
        keep = {(a, b) for a, b in z
                if _forth_ok(m, m, a, b, z) and _forth_ok(m, m, b, a, z)}
        if keep == z:
            break
        z = keep
    blocks: dict[World, set[World]] = {}
    for a, b in z:
        blocks.setdefault(a, set()).add(b)
    seen = set()
    unique = []
    for w in m.worlds:
        block = frozenset(blocks.get(w, {w}))
        if block not in seen:
            seen.add(block)
            unique.append(block)
    return _partition_from_blocks(unique)
