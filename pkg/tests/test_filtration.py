"""Filtration through an adequate set and its verification."""

import dataclasses
import random

from veltman.bisim import largest_autobisimulation
from veltman.decide import sample_frames
from veltman.filtration import box_like, filtrate, verify_filtration
from veltman.formula import (
    Box,
    Neg,
    Rhd,
    Var,
    adequate_set,
    d_closure,
    parse,
    variables,
)
from veltman.model import GenFrame, GenModel, close_s, validate


def chain2():
    fr = close_s(GenFrame(["w", "u"], [("w", "u")], {}))
    return GenModel(fr, {"p": ["u"]})


class TestBoxLike:
    def test_box_node(self):
        assert box_like(Box(Var("p")))

    def test_expanded_form(self):
        assert box_like(parse("~p |> bot"))

    def test_plain_rhd_is_not(self):
        assert not box_like(parse("p |> bot"))
        assert not box_like(parse("p |> q"))

    def test_var_is_not(self):
        assert not box_like(Var("p"))


class TestFiltrateSmall:
    def test_single_world(self):
        m = GenModel(GenFrame(["w"], [], {}), {"p": ["w"]})
        res = filtrate(m, d_closure([Var("p")]))
        assert len(res.quotient.worlds) == 1
        assert res.quotient.frame.pairs == frozenset()
        assert res.violations == ()
        assert verify_filtration(m, res) is None

    def test_two_chain_r_edge_survives(self):
        m = chain2()
        d = d_closure([Var("p")])
        res = filtrate(m, d)
        assert len(res.quotient.worlds) == 2
        cw = res.partition.class_of["w"]
        cu = res.partition.class_of["u"]
        assert (cw, cu) in res.quotient.frame.pairs
        # clause (1) witness evaluated directly: some box-like A in gamma
        # with w not forcing it and u forcing it
        witnesses = [g for g in res.gamma if box_like(g)
                     and not m.forces("w", g) and m.forces("u", g)]
        assert witnesses, "the R-edge needs a box-like witness"
        assert Box(Neg(Var("p"))) in witnesses

    def test_two_chain_truth_preservation(self):
        m = chain2()
        d = d_closure([Var("p")])
        res = filtrate(m, d)
        assert verify_filtration(m, res) is None
        for f in res.gamma:
            for w in m.worlds:
                assert m.forces(w, f) == res.quotient.forces(
                    res.partition.class_of[w], f), str(f)

    def test_collapses_duplicate_copies(self):
        fr = close_s(GenFrame(
            ["w1", "u1", "w2", "u2"],
            [("w1", "u1"), ("w2", "u2")], {}))
        m = GenModel(fr, {"p": ["u1", "u2"]})
        res = filtrate(m, d_closure([Var("p")]))
        assert len(res.quotient.worlds) == 2
        assert res.violations == ()
        assert verify_filtration(m, res) is None

    def test_valuation_restricted_to_gamma_variables(self):
        fr = close_s(GenFrame(["w", "u"], [("w", "u")], {}))
        m = GenModel(fr, {"p": ["u"], "zebra": ["w", "u"]})
        res = filtrate(m, d_closure([Var("p")]))
        assert "zebra" not in res.quotient.valuation
        cu = res.partition.class_of["u"]
        assert res.quotient.forces(cu, Var("p"))
        assert not res.quotient.forces(cu, Var("zebra"))

    def test_gamma_is_adequate_for_d(self):
        d = d_closure([parse("p |> q")])
        res = filtrate(chain2(), d)
        assert res.gamma == adequate_set(d)

    def test_origin_points_back(self):
        m = chain2()
        res = filtrate(m, d_closure([Var("p")]))
        assert res.origin is m


def test_corrupted_quotient_detected():
    m = chain2()
    res = filtrate(m, d_closure([Var("p")]))
    bad_frame = GenFrame(res.quotient.frame.worlds, [], {})
    bad = dataclasses.replace(
        res, quotient=GenModel(bad_frame, res.quotient.valuation))
    hit = verify_filtration(m, bad)
    assert hit is not None
    world, formula = hit
    assert world in m.worlds
    assert formula in res.gamma


def _random_model(rng, n_worlds):
    frames = sample_frames(n_worlds, 1, seed=rng.randrange(10 ** 6))
    fr = frames[0]
    val = {v: [w for w in fr.worlds if rng.random() < 0.5]
           for v in ("p", "q")}
    return GenModel(fr, val)


SEED_POOL = ["p", "q", "p & q", "p |> q", "[]p", "<>q", "~p", "p -> q",
             "q |> p", "p | q", "[]~p", "p |> p"]


def test_verify_filtration_on_200_random_pairs():
    rng = random.Random(2024)
    for trial in range(200):
        m = _random_model(rng, rng.randrange(2, 6))
        seeds = [parse(s) for s in
                 rng.sample(SEED_POOL, rng.randrange(1, 5))]
        d = d_closure(seeds)
        res = filtrate(m, d)
        assert res.violations == (), (trial, [str(v) for v in res.violations])
        assert validate(res.quotient) == []
        assert len(res.quotient.worlds) <= len(m.worlds)
        bad = verify_filtration(m, res)
        assert bad is None, (trial, bad[0], str(bad[1]))


def test_refiltration_does_not_grow():
    rng = random.Random(99)
    for _ in range(40):
        m = _random_model(rng, rng.randrange(2, 6))
        d = d_closure([parse(rng.choice(SEED_POOL))])
        res = filtrate(m, d)
        again = filtrate(res.quotient, d)
        assert len(again.quotient.worlds) <= len(res.quotient.worlds)
        assert again.violations == ()


def test_quotient_worlds_match_partition_classes():
    rng = random.Random(7)
    for _ in range(30):
        m = _random_model(rng, 4)
        res = filtrate(m, d_closure([Var("p")]))
        assert sorted(res.quotient.worlds) == sorted(res.partition.classes)
        merged = sorted(w for ws in res.partition.to_json().values() for w in ws)
        assert merged == sorted(m.worlds)


def test_partition_is_the_largest_autobisimulation():
    m = chain2()
    res = filtrate(m, d_closure([Var("p")]))
    assert res.partition == largest_autobisimulation(m)
