"""Morphism checks: frozen witnesses, closure laws, invariance replay."""

import pytest

from _gen import random_model
from nbhdmc.formula import Bullet, Wrong, parse
from nbhdmc.model import (NeighborhoodFrame, NeighborhoodModel,
                          PerturbationMap, PointedModel, StateSet, perturb)
from nbhdmc.morphism import (StateMap, check_bullet_morphism, check_w_morphism,
                             verify_invariance)
from nbhdmc.search import SplitMix64, fragment_representatives
from nbhdmc.semantics import evaluate


def _model(states, families, valuation=()):
    n = len(states)
    val = {a: StateSet(n, b) for a, b in valuation}
    frame = NeighborhoodFrame(
        tuple(states),
        tuple(tuple(StateSet(n, b) for b in fam) for fam in families))
    return NeighborhoodModel(frame, val)


W_BASE = _model(("s", "t"), ((3,), (3,)), (("p", 2),))
W_EXT = _model(("s", "t"), ((2, 3), (3,)), (("p", 2),))      # bullet-add {t}@s
B_BASE = _model(("s", "t"), ((3,), (3,)), (("p", 1),))
B_EXT = _model(("s", "t"), ((1, 3), (3,)), (("p", 1),))      # wrong-add {s}@s


def _identity(source, target):
    return StateMap(source, target, tuple(range(source.size)))


# --- frozen separation witnesses ---------------------------------------------

def test_bullet_add_keeps_bullet_breaks_w():
    sm = _identity(W_BASE, W_EXT)
    assert check_bullet_morphism(sm) == (True, None)
    ok, witness = check_w_morphism(sm)
    assert not ok and witness == (0, StateSet(2, 2))


def test_wrong_add_keeps_w_breaks_bullet():
    sm = _identity(B_BASE, B_EXT)
    assert check_w_morphism(sm) == (True, None)
    ok, witness = check_bullet_morphism(sm)
    assert not ok and witness == (0, StateSet(2, 1))


def test_witness_scans_states_then_subsets_then_atoms():
    source = _model(("s", "t"), ((), ()), (("a", 2), ("b", 2)))
    target = _model(("s", "t"), ((), ()), (("a", 0), ("b", 0)))
    ok, witness = check_bullet_morphism(_identity(source, target))
    assert not ok and witness == (1, "a")
    # a frame mismatch at the same state is reported before any atom
    target2 = _model(("s", "t"), ((), (1,)), (("a", 0),))
    ok, witness = check_w_morphism(_identity(source, target2))
    assert not ok and witness == (1, StateSet(2, 1))


# --- closure laws ----------------------------------------------------------------

def _permuted(model, perm):
    n = model.size
    inv = [0] * n
    for i, j in enumerate(perm):
        inv[j] = i

    def image(mask):
        return sum(1 << perm[i] for i in range(n) if mask >> i & 1)

    states = tuple(model.states[inv[j]] for j in range(n))
    fams = tuple(
        tuple(StateSet(n, b)
              for b in sorted(image(ss.bits)
                              for ss in model.frame.neighborhoods[inv[j]]))
        for j in range(n))
    val = {a: StateSet(n, image(ss.bits)) for a, ss in model.valuation}
    return NeighborhoodModel(NeighborhoodFrame(states, fams), val)


def test_isomorphisms_pass_both_checks():
    rng = SplitMix64(88)
    for _ in range(30):
        model = random_model(rng, 3)
        perm = (1, 2, 0)
        sm = StateMap(model, _permuted(model, perm), perm)
        assert check_bullet_morphism(sm) == (True, None)
        assert check_w_morphism(sm) == (True, None)


def _legal_pmap(rng, n, kind):
    fams = []
    for w in range(n):
        fam = []
        for _ in range(rng.below(3)):
            mask = rng.below(1 << n)
            mask = mask & ~(1 << w) if kind == "bullet" else mask | 1 << w
            fam.append(StateSet(n, mask))
        fams.append(tuple(fam))
    return PerturbationMap(kind, "add", tuple(fams))


@pytest.mark.parametrize("kind, check", [
    ("bullet", check_bullet_morphism),
    ("wrong", check_w_morphism),
])
def test_identity_into_legal_perturbation_is_a_morphism(kind, check):
    rng = SplitMix64(512 if kind == "bullet" else 513)
    for _ in range(60):
        n = 2 + rng.below(2)
        model = random_model(rng, n)
        bigger = perturb(model, _legal_pmap(rng, n, kind))
        assert check(_identity(model, bigger)) == (True, None)
        removed = perturb(bigger, PerturbationMap(
            kind, "remove", _legal_pmap(rng, n, kind).families))
        assert check(_identity(bigger, removed)) == (True, None)


def test_morphisms_compose():
    sm1 = _identity(W_BASE, W_EXT)
    perm = (1, 0)
    sm2 = StateMap(W_EXT, _permuted(W_EXT, perm), perm)
    composed = StateMap(W_BASE, sm2.target,
                        tuple(sm2.mapping[i] for i in sm1.mapping))
    assert check_bullet_morphism(composed) == (True, None)


# --- invariance replay -------------------------------------------------------------

def test_invariance_along_bullet_morphism():
    sm = _identity(W_BASE, W_EXT)
    reps = fragment_representatives((W_BASE, W_EXT), ("p",), (Bullet,), 2)
    assert verify_invariance(sm, "bullet", [f for f, _ in reps]) == []


def test_invariance_along_w_morphism():
    sm = _identity(B_BASE, B_EXT)
    reps = fragment_representatives((B_BASE, B_EXT), ("p",), (Wrong,), 2)
    assert verify_invariance(sm, "wrong", [f for f, _ in reps]) == []


def test_invariance_requires_a_checked_morphism():
    sm = _identity(W_BASE, W_EXT)
    with pytest.raises(ValueError, match="morphism check fails"):
        verify_invariance(sm, "wrong", [parse("p")])
    with pytest.raises(ValueError, match="kind"):
        verify_invariance(sm, "box", [parse("p")])


def test_separating_formulas_change_truth_across_kinds():
    # the bullet-add pair is told apart by a W formula, and conversely
    assert not evaluate(PointedModel(W_BASE, 0), parse("W p"))
    assert evaluate(PointedModel(W_EXT, 0), parse("W p"))
    assert evaluate(PointedModel(B_BASE, 0), parse("U p"))
    assert not evaluate(PointedModel(B_EXT, 0), parse("U p"))


# --- state maps ----------------------------------------------------------------------

def test_state_map_from_names():
    sm = StateMap.from_names(W_BASE, W_EXT, {"s": "t", "t": "t"})
    assert sm.mapping == (1, 1)
    with pytest.raises(ValueError, match="no image"):
        StateMap.from_names(W_BASE, W_EXT, {"s": "t"})
    with pytest.raises(ValueError, match="outside the source"):
        StateMap.from_names(W_BASE, W_EXT, {"s": "t", "t": "t", "u": "s"})


def test_state_map_validation():
    with pytest.raises(ValueError):
        StateMap(W_BASE, W_EXT, (0,))
    with pytest.raises(ValueError):
        StateMap(W_BASE, W_EXT, (0, 5))
    assert StateMap(W_BASE, W_EXT, (0, 1)).image_mask(0b10) == 0b10
