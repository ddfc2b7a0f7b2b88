"""Workbench for finite neighborhood models of unknown truths and false
beliefs: formulas, models, truth evaluation, morphisms, announcement
reduction, and bounded countermodel search."""

from .announce import (ReductionInputError, ReductionStep, format_trace,
                       reduce, replay)
from .formula import (Announce, And, Atom, Bot, Box, Bullet, Circ, Formula,
                      Iff, Imp, Not, Or, ParseError, Top, Wrong, atoms_of,
                      children, desugar, has_announcement, modal_depth, parse,
                      pretty, replace_at, subformula_at)
from .model import (MAX_STATES, ModelFormatError, NeighborhoodFrame,
                    NeighborhoodModel, NonMonotoneError, PerturbationError,
                    PerturbationMap, PointedModel, StateSet, check_property,
                    intersection_submodel, model_from_json, model_from_text,
                    model_to_json, model_to_text, perturb, pmap_from_json,
                    supplementation, transitive_closure)
from .morphism import (StateMap, check_bullet_morphism, check_w_morphism,
                       verify_invariance)
from .search import (ClassSpec, Countermodel, NoCounterexampleUpTo,
                     SplitMix64, count_frames, distinguish, enumerate_frames,
                     find_countermodel, fragment_representatives,
                     verdict_to_json, verdict_to_text)
from .semantics import evaluate, extension, frame_valid

__version__ = "0.1.0"

__all__ = [
    "Announce", "And", "Atom", "Bot", "Box", "Bullet", "Circ", "ClassSpec",
    "Countermodel", "Formula", "Iff", "Imp", "MAX_STATES",
    "ModelFormatError", "NeighborhoodFrame", "NeighborhoodModel",
    "NoCounterexampleUpTo", "NonMonotoneError", "Not", "Or", "ParseError",
    "PerturbationError", "PerturbationMap", "PointedModel",
    "ReductionInputError", "ReductionStep", "SplitMix64", "StateMap",
    "StateSet", "Top", "Wrong", "atoms_of", "check_bullet_morphism",
    "check_property", "check_w_morphism", "children", "count_frames",
    "desugar", "distinguish", "enumerate_frames", "evaluate", "extension",
    "find_countermodel", "format_trace", "fragment_representatives",
    "frame_valid", "has_announcement", "intersection_submodel",
    "modal_depth", "model_from_json", "model_from_text", "model_to_json",
    "model_to_text", "parse", "perturb", "pmap_from_json", "pretty",
    "reduce", "replace_at", "replay", "subformula_at", "supplementation",
    "transitive_closure", "verdict_to_json", "verdict_to_text",
    "verify_invariance",
]
