"""Bisimulation clauses and largest autobisimulation."""

import itertools
import random

from veltman.bisim import (
    bisimulation_violation,
    is_bisimulation,
    largest_autobisimulation,
)
from veltman.decide import enumerate_frames, sample_frames
from veltman.formula import Var
from veltman.model import GenFrame, GenModel, close_s


def chain3(suffix=""):
    w, u, v = f"w{suffix}", f"u{suffix}", f"v{suffix}"
    return close_s(GenFrame([w, u, v], [(w, u), (w, v), (u, v)], {}))


class TestIsBisimulation:
    def test_identity_relation(self):
        m = GenModel(chain3(), {"p": ["u"]})
        ident = {(w, w) for w in m.worlds}
        assert is_bisimulation(m, m, ident)

    def test_isolated_equal_atoms_total(self):
        m1 = GenModel(GenFrame(["a"], [], {}), {"p": ["a"]})
        m2 = GenModel(GenFrame(["b"], [], {}), {"p": ["b"]})
        assert is_bisimulation(m1, m2, {("a", "b")})

    def test_isolated_differing_atoms(self):
        m1 = GenModel(GenFrame(["a"], [], {}), {"p": ["a"]})
        m2 = GenModel(GenFrame(["b"], [], {}), {"p": []})
        violation = bisimulation_violation(m1, m2, {("a", "b")})
        assert violation is not None
        assert violation.clause == "at"
        assert violation.pair == ("a", "b")

    def test_forth_violation(self):
        m1 = GenModel(close_s(GenFrame(["a", "b"], [("a", "b")], {})), {})
        m2 = GenModel(GenFrame(["c"], [], {}), {})
        violation = bisimulation_violation(m1, m2, {("a", "c")})
        assert violation is not None and violation.clause == "forth"

    def test_back_violation(self):
        m1 = GenModel(GenFrame(["a"], [], {}), {})
        m2 = GenModel(close_s(GenFrame(["c", "d"], [("c", "d")], {})), {})
        violation = bisimulation_violation(m1, m2, {("a", "c")})
        assert violation is not None and violation.clause == "back"

    def test_chain_to_its_copy(self):
        m1 = GenModel(chain3(), {"p": ["u"]})
        m2 = GenModel(chain3("2"), {"p": ["u2"]})
        z = {("w", "w2"), ("u", "u2"), ("v", "v2")}
        assert is_bisimulation(m1, m2, z)


class TestLargestAutobisimulation:
    def test_no_r_equal_atoms_one_class(self):
        m = GenModel(GenFrame(["a", "b", "c"], [], {}), {})
        part = largest_autobisimulation(m)
        assert len(part.classes) == 1

    def test_atom_split(self):
        m = GenModel(close_s(GenFrame(["w", "u"], [("w", "u")], {})),
                     {"p": ["u"]})
        part = largest_autobisimulation(m)
        assert len(part.classes) == 2

    def test_two_copies_three_classes(self):
        fr1, fr2 = chain3(), chain3("2")
        merged = GenFrame(
            list(fr1.worlds) + list(fr2.worlds),
            [(a, b) for fr in (fr1, fr2)
             for a in fr.worlds for b in fr.successors(a)],
            {w: {u: [list(g) for g in fr.gens(w, u)]
                 for u in fr.successors(w)}
             for fr in (fr1, fr2) for w in fr.worlds})
        m = GenModel(merged, {"p": ["u", "u2"]})
        part = largest_autobisimulation(m)
        classes = sorted(sorted(ws) for ws in part.to_json().values())
        assert classes == [["u", "u2"], ["v", "v2"], ["w", "w2"]]

    def test_output_is_a_bisimulation(self):
        rng = random.Random(13)
        for fr in sample_frames(4, 30, seed=3):
            m = GenModel(fr, {"p": [w for w in fr.worlds if rng.random() < 0.5]})
            part = largest_autobisimulation(m)
            z = {(a, b) for ws in part.to_json().values()
                 for a in ws for b in ws}
            assert is_bisimulation(m, m, z)

    def test_classes_partition_worlds(self):
        for fr in enumerate_frames(3, "IL"):
            m = GenModel(fr, {"p": [fr.worlds[0]]})
            part = largest_autobisimulation(m)
            seen = sorted(w for ws in part.to_json().values() for w in ws)
            assert seen == sorted(fr.worlds)

    def test_class_ids_are_least_members(self):
        m = GenModel(GenFrame(["b", "a", "d", "c"], [], {}), {})
        part = largest_autobisimulation(m)
        assert set(part.to_json()) == {"a"}


def _partitions(items):
    """All set partitions of a small list, as lists of blocks."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for sub in _partitions(rest):
        for i in range(len(sub)):
            yield [blk | {first} if j == i else blk for j, blk in enumerate(sub)]
        yield sub + [{first}]


def _equivalences(worlds):
    """All equivalence relations on a small world set."""
    for blocks in _partitions(list(worlds)):
        yield frozenset((a, b) for blk in blocks for a in blk for b in blk)


def test_maximality_brute_force():
    # no strictly coarser equivalence is a bisimulation
    rng = random.Random(29)
    frames = list(enumerate_frames(3, "IL")) + sample_frames(4, 10, seed=7)
    for fr in frames:
        m = GenModel(fr, {"p": [w for w in fr.worlds if rng.random() < 0.5]})
        part = largest_autobisimulation(m)
        best = {(a, b) for ws in part.to_json().values() for a in ws for b in ws}
        for rel in _equivalences(fr.worlds):
            if is_bisimulation(m, m, rel):
                assert rel <= best, (fr.to_json(), sorted(rel - best))


def test_bisimilar_worlds_agree_on_forces():
    from veltman.formula import BOT, TOP, And, Box, Dia, Impl, Neg, Or, Rhd

    rng = random.Random(41)

    def rand_formula(depth):
        if depth == 0 or rng.random() < 0.3:
            return rng.choice([Var("p"), Var("q"), BOT, TOP])
        k = rng.randrange(7)
        if k == 0:
            return Neg(rand_formula(depth - 1))
        if k == 1:
            return Box(rand_formula(depth - 1))
        if k == 2:
            return Dia(rand_formula(depth - 1))
        ctor = (And, Or, Impl, Rhd)[k - 3]
        return ctor(rand_formula(depth - 1), rand_formula(depth - 1))

    def duplicated(fr, val):
        # disjoint union of a model with a relabeled copy of itself:
        # every world is bisimilar to its twin
        ren = {w: w + "_c" for w in fr.worlds}
        merged = GenFrame(
            list(fr.worlds) + list(ren.values()),
            [(a, b) for a in fr.worlds for b in fr.successors(a)]
            + [(ren[a], ren[b]) for a in fr.worlds for b in fr.successors(a)],
            {**{w: {u: [list(g) for g in fr.gens(w, u)]
                    for u in fr.successors(w)} for w in fr.worlds},
             **{ren[w]: {ren[u]: [[ren[v] for v in g] for g in fr.gens(w, u)]
                         for u in fr.successors(w)} for w in fr.worlds}})
        return GenModel(merged, {p: ws + [ren[w] for w in ws]
                                 for p, ws in val.items()})

    pool = []
    for fr in sample_frames(3, 12, seed=19) + sample_frames(4, 12, seed=20):
        val = {"p": [w for w in fr.worlds if rng.random() < 0.5],
               "q": [w for w in fr.worlds if rng.random() < 0.5]}
        m = duplicated(fr, val)
        part = largest_autobisimulation(m)
        pairs = [(a, b) for ws in part.to_json().values()
                 for a in ws for b in ws if a < b]
        assert pairs, "duplicated model must have bisimilar twins"
        pool.append((m, pairs))

    for i in range(1000):
        m, pairs = pool[i % len(pool)]
        f = rand_formula(3)
        for a, b in pairs:
            assert m.forces(a, f) == m.forces(b, f), (str(f), a, b)


def test_refinement_rounds_bounded_by_world_count():
    # the gfp loop must stabilize within |W| iterations; emulate it here
    for fr in sample_frames(4, 15, seed=31):
        m = GenModel(fr, {"p": [fr.worlds[0]]})
        part = largest_autobisimulation(m)
        z = {(a, b) for ws in part.to_json().values() for a in ws for b in ws}
        # one more refinement round must be a no-op
        assert is_bisimulation(m, m, z)
