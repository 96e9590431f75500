"""Ordinary and generalized Veltman frames and models.

A generalized frame has a transitive irreflexive accessibility relation R and,
for every w, a relation S_w between worlds u in R[w] and nonempty subsets of
R[w].  S_w is required to be quasi-reflexive (u S_w {u}), monotone, closed
under successor steps (w R u R v forces u S_w {v}) and quasi-transitive.
Monotonicity is not stored: S_w(u) is kept as an antichain of minimal
generator sets, and ``s_holds(w, u, V)`` means some generator is contained in
V.  An ordinary frame keeps S_w as a set of world pairs instead.

JSON interchange format::

    {"kind": "gen" | "ord",
     "worlds": ["w", ...],
     "R": [["w", "u"], ...],
     "S": {"w": {"u": [["v", ...], ...]}}        # gen: generator sets
          {"w": [["u", "v"], ...]}               # ord: S_w pairs
     "valuation": {"p": ["w", ...]}}

Empty generator sets are not representable: the constructor rejects them.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping

from .formula import (And, Bot, Box, Dia, Formula, Impl, Neg, Or, Rhd, Top,
                      Var)

World = str


class FrameError(ValueError):
    """Structurally malformed frame or model data."""


@dataclass(frozen=True)
class Violation:
    clause: str
    witness: tuple
    message: str

    def __str__(self) -> str:
        return f"{self.clause} {self.witness}: {self.message}"


def _antichain(gens: Iterable[frozenset[World]]) -> tuple[frozenset[World], ...]:
    """Drop duplicate and non-minimal sets; order by size then members."""
    sets = set(gens)
    minimal = [g for g in sets if not any(h < g for h in sets)]
    return tuple(sorted(minimal, key=lambda g: (len(g), sorted(g))))


class GenFrame:
    """Generalized Veltman frame with antichain-represented S families."""

    def __init__(self, worlds: Iterable[World], pairs: Iterable[tuple[World, World]],
                 families: Mapping[World, Mapping[World, Iterable[Iterable[World]]]]):
        self.worlds: tuple[World, ...] = tuple(sorted(set(worlds)))
        if not self.worlds:
            raise FrameError("empty world set")
        wset = set(self.worlds)
        self.pairs: frozenset[tuple[World, World]] = frozenset((a, b) for a, b in pairs)
        for a, b in self.pairs:
            if a not in wset or b not in wset:
                raise FrameError(f"R edge ({a}, {b}) mentions an unknown world")
        self._succ: dict[World, frozenset[World]] = {
            w: frozenset(b for a, b in self.pairs if a == w) for w in self.worlds}
        fam: dict[World, dict[World, tuple[frozenset[World], ...]]] = {}
        for w, per_u in families.items():
            if w not in wset:
                raise FrameError(f"S family keyed by unknown world {w}")
            for u, gens in per_u.items():
                if u not in wset:
                    raise FrameError(f"S family for {w} keyed by unknown world {u}")
                sets = [frozenset(g) for g in gens]
                for g in sets:
                    if not g:
                        raise FrameError(f"empty S-image set for ({w}, {u})")
                    if not g <= wset:
                        raise FrameError(f"S-image for ({w}, {u}) mentions an unknown world")
                if sets:
                    fam.setdefault(w, {})[u] = _antichain(sets)
        self.families = fam

    def successors(self, w: World) -> frozenset[World]:
        return self._succ[w]

    def gens(self, w: World, u: World) -> tuple[frozenset[World], ...]:
        return self.families.get(w, {}).get(u, ())

    def s_holds(self, w: World, u: World, vs: Iterable[World]) -> bool:
        """u S_w V in the monotone closure: requires u in R[w], V inside R[w],
        V nonempty, and some stored generator contained in V."""
        v = frozenset(vs)
        if not v or u not in self._succ[w] or not v <= self._succ[w]:
            return False
        return any(g <= v for g in self.gens(w, u))

    def _key(self):
        fam = tuple(sorted(
            (w, tuple(sorted((u, tuple(sorted(tuple(sorted(g)) for g in gens)))
                             for u, gens in per_u.items())))
            for w, per_u in self.families.items()))
        return (self.worlds, tuple(sorted(self.pairs)), fam)

    def __eq__(self, other) -> bool:
        return isinstance(other, GenFrame) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def validate(self) -> list[Violation]:
        return validate(self)

    def to_json(self) -> dict:
        return {
            "kind": "gen",
            "worlds": list(self.worlds),
            "R": sorted([a, b] for a, b in self.pairs),
            "S": {w: {u: [sorted(g) for g in gens]
                      for u, gens in sorted(per_u.items())}
                  for w, per_u in sorted(self.families.items())},
        }


class OrdFrame:
    """Ordinary Veltman frame: S_w is a set of world pairs over R[w]."""

    def __init__(self, worlds: Iterable[World], pairs: Iterable[tuple[World, World]],
                 s: Mapping[World, Iterable[tuple[World, World]]]):
        self.worlds: tuple[World, ...] = tuple(sorted(set(worlds)))
        if not self.worlds:
            raise FrameError("empty world set")
        wset = set(self.worlds)
        self.pairs = frozenset((a, b) for a, b in pairs)
        for a, b in self.pairs:
            if a not in wset or b not in wset:
                raise FrameError(f"R edge ({a}, {b}) mentions an unknown world")
        self._succ = {w: frozenset(b for a, b in self.pairs if a == w) for w in self.worlds}
        self.s: dict[World, frozenset[tuple[World, World]]] = {}
        for w, rel in s.items():
            if w not in wset:
                raise FrameError(f"S relation keyed by unknown world {w}")
            rel = frozenset((a, b) for a, b in rel)
            for a, b in rel:
                if a not in wset or b not in wset:
                    raise FrameError(f"S_{w} pair ({a}, {b}) mentions an unknown world")
            if rel:
                self.s[w] = rel

    def successors(self, w: World) -> frozenset[World]:
        return self._succ[w]

    def s_pairs(self, w: World) -> frozenset[tuple[World, World]]:
        return self.s.get(w, frozenset())

    def validate(self) -> list[Violation]:
        return validate(self)

    def _key(self):
        return (self.worlds, tuple(sorted(self.pairs)),
                tuple(sorted((w, tuple(sorted(rel))) for w, rel in self.s.items())))

    def __eq__(self, other) -> bool:
        return isinstance(other, OrdFrame) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def to_json(self) -> dict:
        return {
            "kind": "ord",
            "worlds": list(self.worlds),
            "R": sorted([a, b] for a, b in self.pairs),
            "S": {w: sorted([a, b] for a, b in rel) for w, rel in sorted(self.s.items())},
        }


def _r_violations(frame) -> list[Violation]:
    out = []
    for a, b in sorted(frame.pairs):
        if a == b:
            out.append(Violation("R-irreflexivity", (a,), f"R contains the loop ({a}, {a})"))
    for a, b in sorted(frame.pairs):
        for c in sorted(frame.successors(b)):
            if (a, c) not in frame.pairs:
                out.append(Violation("R-transitivity", (a, b, c),
                                     f"{a} R {b} R {c} but not {a} R {c}"))
    return out


def validate(frame) -> list[Violation]:
    """Every violated frame clause, each with a concrete witness tuple."""
    if isinstance(frame, (GenModel, OrdModel)):
        return validate(frame.frame)
    out = _r_violations(frame)
    if isinstance(frame, GenFrame):
        for w in frame.worlds:
            ru = frame.successors(w)
            for u, gens in sorted(frame.families.get(w, {}).items()):
                if u not in ru:
                    out.append(Violation("a", (w, u), f"S_{w} keyed by {u} outside R[{w}]"))
                for g in gens:
                    if not g <= ru:
                        out.append(Violation("a", (w, u, tuple(sorted(g))),
                                             f"S_{w} image of {u} leaves R[{w}]"))
        for w, u in sorted(frame.pairs):
            if not frame.s_holds(w, u, {u}):
                out.append(Violation("b", (w, u), f"missing {u} S_{w} {{{u}}}"))
        for w, u in sorted(frame.pairs):
            for v in sorted(frame.successors(u)):
                if not frame.s_holds(w, u, {v}):
                    out.append(Violation("d", (w, u, v),
                                         f"{w} R {u} R {v} but not {u} S_{w} {{{v}}}"))
        qt = _quasi_transitivity_violation(frame)
        if qt is not None:
            w, u, g, union = qt
            out.append(Violation("c", (w, u, tuple(sorted(g)), tuple(sorted(union))),
                                 "quasi-transitivity fails"))
        return out
    if isinstance(frame, OrdFrame):
        for w in frame.worlds:
            ru = frame.successors(w)
            rel = frame.s_pairs(w)
            for a, b in sorted(rel):
                if a not in ru or b not in ru:
                    out.append(Violation("a", (w, a, b), f"S_{w} pair ({a}, {b}) leaves R[{w}]"))
            for u in sorted(ru):
                if (u, u) not in rel:
                    out.append(Violation("b", (w, u), f"S_{w} is not reflexive at {u}"))
            for a, b in sorted(rel):
                for c in sorted(x for y, x in rel if y == b):
                    if (a, c) not in rel:
                        out.append(Violation("c", (w, a, b, c), f"S_{w} is not transitive"))
            for u in sorted(ru):
                for v in sorted(frame.successors(u)):
                    if (u, v) not in rel:
                        out.append(Violation("d", (w, u, v),
                                             f"{w} R {u} R {v} but not {u} S_{w} {v}"))
        return out
    raise TypeError(f"not a frame or model: {frame!r}")


def _quasi_transitivity_violation(frame: GenFrame):
    """First (w, u, G, union) where chaining generators escapes S_w(u)."""
    for w in frame.worlds:
        per_u = frame.families.get(w, {})
        for u in sorted(per_u):
            for g in per_u[u]:
                vs = sorted(g)
                options = [frame.gens(w, v) for v in vs]
                if any(not opt for opt in options):
                    continue  # no S_w-image to chain through; nothing to check
                for pick in product(*options):
                    union = frozenset().union(*pick)
                    if not frame.s_holds(w, u, union):
                        return (w, u, g, union)
    return None


def close_s(frame: GenFrame) -> GenFrame:
    """Least extension of the S families satisfying quasi-reflexivity, the
    successor-step clause and quasi-transitivity.  R must already be
    transitive and irreflexive, and all input generators inside R[w]."""
    bad = _r_violations(frame)
    if bad:
        raise FrameError(f"cannot close S over an illegal R: {bad[0]}")
    fam: dict[World, dict[World, set[frozenset[World]]]] = {
        w: {u: set(gens) for u, gens in per_u.items()}
        for w, per_u in frame.families.items()}
    for w in frame.worlds:
        ru = frame.successors(w)
        for u in ru:
            gens = fam.setdefault(w, {}).setdefault(u, set())
            gens.add(frozenset({u}))
            for v in frame.successors(u):
                gens.add(frozenset({v}))

    def holds(w: World, u: World, v: frozenset[World]) -> bool:
        return any(g <= v for g in fam[w].get(u, ()))

    changed = True
    while changed:
        changed = False
        for w in frame.worlds:
            for u in sorted(fam.get(w, {})):
                for g in list(fam[w][u]):
                    options = [sorted(fam[w].get(v, ())) for v in sorted(g)]
                    if any(not opt for opt in options):
                        continue
                    for pick in product(*options):
                        union = frozenset().union(*pick)
                        if not holds(w, u, union):
                            fam[w][u].add(union)
                            changed = True
    return GenFrame(frame.worlds, frame.pairs, fam)


class GenModel:
    """Generalized frame plus valuation; forcing is memoized per formula."""

    def __init__(self, frame: GenFrame, valuation: Mapping[str, Iterable[World]]):
        self.frame = frame
        wset = set(frame.worlds)
        self.valuation: dict[str, frozenset[World]] = {}
        for p, ws in valuation.items():
            ws = frozenset(ws)
            if not ws <= wset:
                raise FrameError(f"valuation of {p} mentions an unknown world")
            self.valuation[p] = ws
        self._truth: dict[Formula, frozenset[World]] = {}

    @property
    def worlds(self) -> tuple[World, ...]:
        return self.frame.worlds

    def truth_set(self, f: Formula) -> frozenset[World]:
        cached = self._truth.get(f)
        if cached is not None:
            return cached
        frame = self.frame
        if isinstance(f, Var):
            out = self.valuation.get(f.name, frozenset())
        elif isinstance(f, Bot):
            out = frozenset()
        elif isinstance(f, Top):
            out = frozenset(frame.worlds)
        elif isinstance(f, Neg):
            out = frozenset(frame.worlds) - self.truth_set(f.arg)
        elif isinstance(f, And):
            out = self.truth_set(f.left) & self.truth_set(f.right)
        elif isinstance(f, Or):
            out = self.truth_set(f.left) | self.truth_set(f.right)
        elif isinstance(f, Impl):
            out = (frozenset(frame.worlds) - self.truth_set(f.left)) | self.truth_set(f.right)
        elif isinstance(f, Box):
            body = self.truth_set(f.arg)
            out = frozenset(w for w in frame.worlds if frame.successors(w) <= body)
        elif isinstance(f, Dia):
            body = self.truth_set(f.arg)
            out = frozenset(w for w in frame.worlds if frame.successors(w) & body)
        elif isinstance(f, Rhd):
            a = self.truth_set(f.left)
            b = self.truth_set(f.right)
            out = frozenset(
                w for w in frame.worlds
                if all(any(g <= b for g in frame.gens(w, u))
                       for u in frame.successors(w) & a))
        else:
            raise TypeError(f"not a formula: {f!r}")
        self._truth[f] = out
        return out

    def forces(self, w: World, f: Formula) -> bool:
        return w in self.truth_set(f)

    def to_json(self) -> dict:
        out = self.frame.to_json()
        out["valuation"] = {p: sorted(ws) for p, ws in sorted(self.valuation.items())}
        return out


class OrdModel:
    """Ordinary frame plus valuation."""

    def __init__(self, frame: OrdFrame, valuation: Mapping[str, Iterable[World]]):
        self.frame = frame
        wset = set(frame.worlds)
        self.valuation: dict[str, frozenset[World]] = {}
        for p, ws in valuation.items():
            ws = frozenset(ws)
            if not ws <= wset:
                raise FrameError(f"valuation of {p} mentions an unknown world")
            self.valuation[p] = ws
        self._truth: dict[Formula, frozenset[World]] = {}

    @property
    def worlds(self) -> tuple[World, ...]:
        return self.frame.worlds

    def truth_set(self, f: Formula) -> frozenset[World]:
        cached = self._truth.get(f)
        if cached is not None:
            return cached
        frame = self.frame
        if isinstance(f, Var):
            out = self.valuation.get(f.name, frozenset())
        elif isinstance(f, Bot):
            out = frozenset()
        elif isinstance(f, Top):
            out = frozenset(frame.worlds)
        elif isinstance(f, Neg):
            out = frozenset(frame.worlds) - self.truth_set(f.arg)
        elif isinstance(f, And):
            out = self.truth_set(f.left) & self.truth_set(f.right)
        elif isinstance(f, Or):
            out = self.truth_set(f.left) | self.truth_set(f.right)
        elif isinstance(f, Impl):
            out = (frozenset(frame.worlds) - self.truth_set(f.left)) | self.truth_set(f.right)
        elif isinstance(f, Box):
            body = self.truth_set(f.arg)
            out = frozenset(w for w in frame.worlds if frame.successors(w) <= body)
        elif isinstance(f, Dia):
            body = self.truth_set(f.arg)
            out = frozenset(w for w in frame.worlds if frame.successors(w) & body)
        elif isinstance(f, Rhd):
            a = self.truth_set(f.left)
            b = self.truth_set(f.right)
            out = frozenset(
                w for w in frame.worlds
                if all(any(v in b for x, v in frame.s_pairs(w) if x == u)
                       for u in frame.successors(w) & a))
        else:
            raise TypeError(f"not a formula: {f!r}")
        self._truth[f] = out
        return out

    def forces(self, w: World, f: Formula) -> bool:
        return w in self.truth_set(f)

    def to_json(self) -> dict:
        out = self.frame.to_json()
        out["valuation"] = {p: sorted(ws) for p, ws in sorted(self.valuation.items())}
        return out


def gen_of_ordinary(m: OrdModel) -> GenModel:
    """Embed an ordinary model: S'_w(u) is generated by the singletons {v}
    with u S_w v.  Forcing is preserved for every formula."""
    families = {
        w: {u: [frozenset({v}) for x, v in m.frame.s_pairs(w) if x == u]
            for u in sorted({x for x, _ in m.frame.s_pairs(w)})}
        for w in m.frame.worlds if m.frame.s_pairs(w)}
    frame = GenFrame(m.frame.worlds, m.frame.pairs, families)
    return GenModel(frame, m.valuation)


def model_from_json(obj: dict) -> GenModel | OrdModel:
    """Build a model from the interchange dict; structural errors raise FrameError."""
    if not isinstance(obj, dict):
        raise FrameError("model document must be a JSON object")
    kind = obj.get("kind")
    if kind not in ("gen", "ord"):
        raise FrameError(f"unknown model kind {kind!r}")
    try:
        worlds = [str(w) for w in obj["worlds"]]
        pairs = [(str(a), str(b)) for a, b in obj["R"]]
        valuation = {str(p): [str(w) for w in ws]
                     for p, ws in obj.get("valuation", {}).items()}
        raw_s = obj["S"]
        if kind == "gen":
            families = {str(w): {str(u): [[str(v) for v in g] for g in gens]
                                 for u, gens in per_u.items()}
                        for w, per_u in raw_s.items()}
            return GenModel(GenFrame(worlds, pairs, families), valuation)
        s = {str(w): [(str(a), str(b)) for a, b in rel] for w, rel in raw_s.items()}
        return OrdModel(OrdFrame(worlds, pairs, s), valuation)
    except FrameError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FrameError(f"malformed model document: {exc}") from exc


def model_to_json(m: GenModel | OrdModel) -> dict:
    return m.to_json()
