"""Filtration of generalized models through an adequate formula set.

Worlds are identified along the largest autobisimulation.  Writing [w] for
classes, the quotient is assembled from three clauses:

  1. [w] R~ [u] iff some w' in [w], u' in [u] have w' R u' and some box-like
     formula in the adequate set fails at w' while holding at u';
  2. [u] S~_[w] V~ iff [w] R~ [u], V~ is a set of R~-successor classes of
     [w], and for every w' in [w], u' in [u] with w' R u' some S_{w'}-image
     of u' projects into V~;
  3. a variable from the adequate set holds at [w] iff it holds at w; every
     other variable is false everywhere.

A formula counts as box-like when its normalized form is  ~A |> bot.

The quotient's S families store the minimal V~ satisfying clause 2, found by
scanning the subsets of R~[[w]].  Truth of every formula in the adequate set
is preserved from model to quotient; ``verify_filtration`` checks this
exhaustively and returns the first disagreement, if any.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .bisim import Partition, largest_autobisimulation
from .formula import Bot, Formula, Neg, Rhd, Var, adequate_set, normalize
from .model import GenFrame, GenModel, Violation, World, validate


@dataclass(frozen=True)
class FiltrationResult:
    quotient: GenModel
    partition: Partition
    gamma: frozenset[Formula]
    origin: GenModel
    violations: tuple[Violation, ...]


def box_like(f: Formula) -> bool:
    g = normalize(f)
    return isinstance(g, Rhd) and isinstance(g.left, Neg) and isinstance(g.right, Bot)


def filtrate(m: GenModel, d: frozenset[Formula]) -> FiltrationResult:
    """Quotient ``m`` through the adequate closure of ``d``.

    ``d`` should already be closed under subformulas and single negation;
    the adequate set is computed here.  Any frame-clause violation in the
    constructed quotient is reported in the result rather than repaired.
    """
    gamma = adequate_set(d)
    partition = largest_autobisimulation(m)
    boxes = sorted((f for f in gamma if box_like(f)), key=str)

    class_ids = sorted(partition.classes)
    members = {cid: sorted(partition.classes[cid]) for cid in class_ids}

    r_pairs: set[tuple[World, World]] = set()
    r_witness_pairs: dict[tuple[World, World], list[tuple[World, World]]] = {}
    for cw in class_ids:
        for cu in class_ids:
            pairs = [(w, u) for w in members[cw] for u in members[cu]
                     if (w, u) in m.frame.pairs]
            if not pairs:
                continue
            r_witness_pairs[(cw, cu)] = pairs
            if any(not m.forces(w, f) and m.forces(u, f)
                   for f in boxes for (w, u) in pairs):
                r_pairs.add((cw, cu))

    succ_of = {cw: sorted(cu for (a, cu) in r_pairs if a == cw) for cw in class_ids}
    families: dict[World, dict[World, list[frozenset[World]]]] = {}
    for cw, cu in sorted(r_pairs):
        candidates = []
        for r in range(1, len(succ_of[cw]) + 1):
            for combo in combinations(succ_of[cw], r):
                v_tilde = frozenset(combo)
                if _s_clause(m, partition, r_witness_pairs[(cw, cu)], v_tilde):
                    candidates.append(v_tilde)
        if candidates:
            families.setdefault(cw, {})[cu] = candidates

    frame = GenFrame(class_ids, r_pairs, families)
    valuation = {
        p: [cid for cid in class_ids if m.forces(members[cid][0], Var(p))]
        for p in sorted({f.name for f in gamma if isinstance(f, Var)})}
    quotient = GenModel(frame, valuation)
    return FiltrationResult(quotient, partition, gamma, m,
                            tuple(validate(frame)))


def _s_clause(m: GenModel, partition: Partition,
              witness_pairs: list[tuple[World, World]],
              v_tilde: frozenset[World]) -> bool:
    for w, u in witness_pairs:
        if not any({partition.class_of[v] for v in g} <= v_tilde
                   for g in m.frame.gens(w, u)):
            return False
    return True


def verify_filtration(m: GenModel, result: FiltrationResult) -> tuple[World, Formula] | None:
    """First (world, formula) where model and quotient disagree, else None."""
    for f in sorted(result.gamma, key=str):
        for w in m.worlds:
            if m.forces(w, f) != result.quotient.forces(result.partition.class_of[w], f):
                return (w, f)
    return None
