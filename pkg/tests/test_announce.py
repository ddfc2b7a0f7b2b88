"""Announcement reduction: axiom cases, traces, replay, soundness."""

import pytest

from _gen import random_announcement_formula, random_model
from nbhdmc.announce import (ReductionInputError, ReductionStep, format_trace,
                             reduce, replay)
from nbhdmc.formula import desugar, has_announcement, parse, pretty
from nbhdmc.model import supplementation
from nbhdmc.search import SplitMix64
from nbhdmc.semantics import extension


def _axioms(steps):
    return [st.axiom for st in steps]


# --- single axiom cases -------------------------------------------------------

@pytest.mark.parametrize("text, axiom, out", [
    ("[q] p", "AP", "q -> p"),
    ("[q] true", "AT", "true"),
    ("[q] false", "AB", "q -> false"),
    ("[q] ! p", "AN", "q -> ! [q] p"),
    ("[q] (p & r)", "AC", "[q] p & [q] r"),
    ("[q] [p] r", "AA", "[q & [q] p] r"),
    ("[q] U p", "AU", "q -> U [q] p"),
    ("[q] W p", "AW", "q -> W [q] p"),
])
def test_first_step_per_body_shape(text, axiom, out):
    _, steps = reduce(parse(text))
    assert steps[0].axiom == axiom
    assert pretty(steps[0].after) == out


# --- frozen traces --------------------------------------------------------------

def test_reduce_w_announcement():
    reduced, steps = reduce(parse("[W p] W p"))
    assert pretty(reduced) == "W p -> W (W p -> p)"
    assert format_trace(steps) == (
        "1. AW @ root: [W p] W p ==> W p -> W [W p] p\n"
        "2. AP @ 1.0: W p -> W [W p] p ==> W p -> W (W p -> p)")


def test_reduce_bullet_announcement():
    reduced, steps = reduce(parse("[U p] ! U p"))
    assert pretty(reduced) == "U p -> ! (U p -> U (U p -> p))"
    assert _axioms(steps) == ["AN", "AU", "AP"]
    assert [st.path for st in steps] == [(), (1, 0), (1, 0, 1, 0)]


def test_reduce_negated_bullet_announcement():
    reduced, _ = reduce(parse("[! U p] ! U p"))
    assert pretty(reduced) == "! U p -> ! (! U p -> U (! U p -> p))"


def test_reduce_nested_announcements():
    reduced, steps = reduce(parse("[p] [q] r"))
    assert pretty(reduced) == "p & (p -> q) -> r"
    assert [(st.axiom, st.path) for st in steps] == \
        [("AA", ()), ("AP", ()), ("AP", (0, 1))]


def test_outermost_leftmost_order():
    _, steps = reduce(parse("[p] q & [r] q"))
    assert steps[0].path == (0,)
    assert steps[1].path == (1,)


def test_trace_records_whole_formulas():
    f = parse("U q & [p] W p")
    _, steps = reduce(f)
    assert steps[0].before == f
    assert steps[0].path == (1,)
    for earlier, later in zip(steps, steps[1:]):
        assert earlier.after == later.before
    assert format_trace(steps).splitlines()[0].startswith("1. AW @ 1: U q &")


# --- input fragment ---------------------------------------------------------------

@pytest.mark.parametrize("text", ["[p] K q", "[p | q] p", "[p] (q -> r)",
                                  "K [p] q", "[p] O q", "p <-> [q] p"])
def test_reduce_rejects_sugared_input(text):
    with pytest.raises(ReductionInputError, match="desugar"):
        reduce(parse(text))


def test_desugared_input_is_accepted():
    reduced, _ = reduce(desugar(parse("[p | q] O r")))
    assert not has_announcement(reduced)


def test_announcement_free_input_is_fixed():
    f = parse("U p & W q")
    assert reduce(f) == (f, ())


# --- replay ------------------------------------------------------------------------

def test_replay_round_trip():
    f = parse("[U p] ! U p")
    reduced, steps = reduce(f)
    assert replay(f, steps) == reduced


def test_replay_rejects_tampered_traces():
    f = parse("[q] U p")
    reduced, steps = reduce(f)
    with pytest.raises(ValueError, match="does not match"):
        replay(parse("[q] U q"), steps)
    wrong_axiom = (ReductionStep("AP", steps[0].path, steps[0].before,
                                 steps[0].after),) + steps[1:]
    with pytest.raises(ValueError, match="axiom"):
        replay(f, wrong_axiom)
    bad_path = (ReductionStep(steps[0].axiom, (0,), steps[0].before,
                              steps[0].after),) + steps[1:]
    with pytest.raises(ValueError, match="no announcement"):
        replay(f, bad_path)


# --- soundness --------------------------------------------------------------------

def test_reduction_preserves_extensions_on_monotone_models():
    rng = SplitMix64(777)
    for _ in range(60):
        f = random_announcement_formula(rng)
        reduced, _ = reduce(f)
        assert not has_announcement(reduced)
        for _ in range(3):
            model = supplementation(random_model(rng, 1 + rng.below(3)))
            assert extension(model, f) == extension(model, reduced), \
                (pretty(f), model)
