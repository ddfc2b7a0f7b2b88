"""Bounded countermodel search, frame enumeration, and distinguishability.

Frames are enumerated through per-state family codes: subsets of the
universe are numbered by their bit masks, and a family is the bit set
of its members' masks, so a frame on n states is a tuple of n codes.
Enumeration order is lexicographic in those codes with state 0 most
significant, which fixes the canonical countermodel order (fewest
states, then frame encoding, then valuation encoding, then lowest
falsifying state).

Sampled mode expands a 64-bit seed splitmix-style; each sample draws,
in order, one value per state to index the class-allowed family list
(by modulo) and one value per atom (sorted) for its valuation mask.
Only verdict counts are meant to be reproducible across rewrites, not
the sequences themselves.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .formula import (And, Atom, Bullet, Formula, Not, Wrong, atoms_of,
                      has_announcement)
from .model import (MAX_STATES, NeighborhoodFrame, NeighborhoodModel,
                    PointedModel, StateSet, model_to_json)
from .semantics import _Ctx, _ctx_for, evaluate

__all__ = [
    "SplitMix64", "ClassSpec", "Countermodel", "NoCounterexampleUpTo",
    "enumerate_frames", "count_frames", "find_countermodel", "distinguish",
    "fragment_representatives", "verdict_to_json", "verdict_to_text",
    "allowed_family_codes",
]

EXHAUSTIVE_MAX_STATES = 3  # frame space is 2^(2^n * n); n=4 would be 2^64
SAMPLED_MAX_STATES = 4     # family-code tables stay enumerable up to 2^16

_STATE_NAMES = ("s", "t", "u", "v")

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """Deterministic 64-bit stream: state += 0x9E3779B97F4A7C15, then
    z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
    z *= 0x94D049BB133111EB; z ^= z >> 31."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, k: int) -> int:
        return self.next() % k


CLASS_PROPERTY_IDS = frozenset(("m", "c", "n", "r", "neg-suppl"))


@dataclass(frozen=True)
class ClassSpec:
    """A frame class: required properties, state bound, atom budget."""

    properties: frozenset = frozenset()
    max_states: int = EXHAUSTIVE_MAX_STATES
    atoms: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        props = frozenset(self.properties)
        unknown = props - CLASS_PROPERTY_IDS
        if unknown:
            msg = f"unknown class properties: {sorted(unknown)}"
            raise ValueError(msg)
        if not 1 <= self.max_states <= MAX_STATES:
            msg = f"max_states must be 1..{MAX_STATES}, got {self.max_states}"
            raise ValueError(msg)
        object.__setattr__(self, "properties", props)
        object.__setattr__(self, "atoms", tuple(sorted(set(self.atoms))))


@dataclass(frozen=True)
class Countermodel:
    pointed: PointedModel


@dataclass(frozen=True)
class NoCounterexampleUpTo:
    max_states: int
    valuations: str  # "exhaustive" or "sampled"
    samples: int | None = None
    seed: int | None = None


def verdict_to_json(verdict) -> dict:
    if isinstance(verdict, Countermodel):
        return {"verdict": "countermodel",
                "model": model_to_json(verdict.pointed.model),
                "state": verdict.pointed.point_name}
    out = {"verdict": "no-counterexample",
           "max_states": verdict.max_states,
           "valuations": verdict.valuations}
    if verdict.valuations == "sampled":
        out["samples"] = verdict.samples
        out["seed"] = verdict.seed
    return out


def verdict_to_text(verdict) -> str:
    import json
    return json.dumps(verdict_to_json(verdict), separators=(", ", ": "))


# --- family codes -------------------------------------------------------------


@lru_cache(maxsize=None)
def _superset_closure(n: int) -> tuple[int, ...]:
    """For each subset mask x, the family code of {y | x subset of y}."""
    return tuple(sum(1 << y for y in range(1 << n) if y & x == x)
                 for x in range(1 << n))


@lru_cache(maxsize=None)
def _containing_state(n: int, w: int) -> int:
    """Family code of {y | w in y}."""
    return sum(1 << y for y in range(1 << n) if y >> w & 1)


def _family_code_ok(n: int, code: int, prop: str, state: int) -> bool:
    full = (1 << n) - 1
    members = [x for x in range(1 << n) if code >> x & 1]
    if prop == "n":
        return bool(code >> full & 1)
    if prop == "m":
        sup = _superset_closure(n)
        return all(code & sup[x] == sup[x] for x in members)
    if prop == "c":
        return all(code >> (x & y) & 1 for x in members for y in members)
    if prop == "r":
        core = full
        for x in members:
            core &= x
        return bool(code >> core & 1)
    if prop == "neg-suppl":
        sup = _superset_closure(n)
        avoid = ~_containing_state(n, state)
        return all(code & (need := sup[x] & avoid) == need for x in members)
    msg = f"unknown property id: {prop!r}"
    raise ValueError(msg)


@lru_cache(maxsize=None)
def allowed_family_codes(n: int, properties: frozenset,
                         state: int) -> tuple[int, ...]:
    """Family codes at the given state satisfying every class property."""
    return tuple(code for code in range(1 << (1 << n))
                 if all(_family_code_ok(n, code, p, state) for p in properties))


@lru_cache(maxsize=None)
def _family_sets(n: int, code: int) -> tuple[StateSet, ...]:
    return tuple(StateSet(n, x) for x in range(1 << n) if code >> x & 1)


def _family_masks_from_code(n: int, code: int) -> frozenset[int]:
    return frozenset(x for x in range(1 << n) if code >> x & 1)


def _frame_from_codes(n: int, codes) -> NeighborhoodFrame:
    return NeighborhoodFrame(_STATE_NAMES[:n],
                             tuple(_family_sets(n, c) for c in codes))


def _decode_index(idx: int, allowed: list[tuple[int, ...]]) -> tuple[int, ...]:
    digits = []
    for options in reversed(allowed):
        digits.append(options[idx % len(options)])
        idx //= len(options)
    return tuple(reversed(digits))


def _allowed_lists(n: int, properties: frozenset) -> list[tuple[int, ...]]:
    return [allowed_family_codes(n, properties, w) for w in range(n)]


def enumerate_frames(n: int, cls: ClassSpec | None = None,
                     index_range: tuple[int, int] | None = None):
    """Yield every n-state frame of the class in canonical order.

    index_range selects a contiguous slice of that order (the
    parallelization unit).  Refuses n beyond 3: the full space grows as
    2^(n*2^n) and exhaustion stops being meaningful.
    """
    if not 1 <= n <= EXHAUSTIVE_MAX_STATES:
        msg = (f"exhaustive enumeration supports 1..{EXHAUSTIVE_MAX_STATES} "
               f"states, got {n}; use sampled mode")
        raise ValueError(msg)
    allowed = _allowed_lists(n, cls.properties if cls else frozenset())
    total = 1
    for options in allowed:
        total *= len(options)
    lo, hi = index_range if index_range else (0, total)
    if not 0 <= lo <= hi <= total:
        msg = f"index range {index_range!r} outside 0..{total}"
        raise ValueError(msg)
    for idx in range(lo, hi):
        yield _frame_from_codes(n, _decode_index(idx, allowed))


def count_frames(n: int, cls: ClassSpec | None = None) -> int:
    """Size of the enumeration without materializing it."""
    if not 1 <= n <= EXHAUSTIVE_MAX_STATES:
        msg = (f"exhaustive enumeration supports 1..{EXHAUSTIVE_MAX_STATES} "
               f"states, got {n}; use sampled mode")
        raise ValueError(msg)
    total = 1
    for options in _allowed_lists(n, cls.properties if cls else frozenset()):
        total *= len(options)
    return total


# --- countermodel search ------------------------------------------------------


def _scan_range(args):
    """Scan one contiguous frame-index slice; return the first witness.

    Witness tuples are (frame_index, family_codes, valuation_masks,
    state) and the scan follows canonical order, so the first hit is
    the slice minimum.
    """
    f, n, properties, atoms, lo, hi = args
    allowed = _allowed_lists(n, properties)
    full = (1 << n) - 1
    assignments = list(product(range(1 << n), repeat=len(atoms)))
    for idx in range(lo, hi):
        codes = _decode_index(idx, allowed)
        fams = tuple(_family_masks_from_code(n, c) for c in codes)
        for assignment in assignments:
            ctx = _Ctx(n, fams, dict(zip(atoms, assignment)), False)
            e = ctx.ext(f)
            if e != full:
                state = next(s for s in range(n) if not e >> s & 1)
                return (idx, codes, assignment, state)
    return None


def _witness_to_countermodel(f: Formula, n: int, codes, atoms, assignment,
                             state: int) -> Countermodel:
    frame = _frame_from_codes(n, codes)
    valuation = {a: StateSet(n, bits) for a, bits in zip(atoms, assignment)}
    pm = PointedModel(NeighborhoodModel(frame, valuation), state)
    if evaluate(pm, f):
        msg = "countermodel self-check failed; evaluator disagrees with scan"
        raise RuntimeError(msg)
    return Countermodel(pm)


def _chunk_ranges(total: int, jobs: int) -> list[tuple[int, int]]:
    if total == 0:
        return []
    parts = min(total, max(jobs, 1) * 4)
    step, extra = divmod(total, parts)
    ranges, lo = [], 0
    for i in range(parts):
        hi = lo + step + (1 if i < extra else 0)
        ranges.append((lo, hi))
        lo = hi
    return ranges


def _run_chunks(f, n, properties, atoms, total, jobs):
    """First witness across ordered slices; parallel-safe and deterministic.

    Slices are consumed in order, so a witness is only accepted after
    every earlier slice came back empty; chunk boundaries cannot change
    the answer.
    """
    tasks = [(f, n, properties, atoms, lo, hi)
             for lo, hi in _chunk_ranges(total, jobs)]
    if jobs <= 1 or len(tasks) <= 1:
        for task in tasks:
            hit = _scan_range(task)
            if hit:
                return hit
        return None
    try:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_scan_range, task) for task in tasks]
            for fut in futures:
                hit = fut.result()
                if hit:
                    for other in futures:
                        other.cancel()
                    return hit
        return None
    except (OSError, PermissionError):
        # no subprocess support here; same order, same answer
        for task in tasks:
            hit = _scan_range(task)
            if hit:
                return hit
        return None


def find_countermodel(f: Formula, cls: ClassSpec, mode: str = "exhaustive",
                      seed: int = 0, samples: int = 0, jobs: int = 1):
    """Search the class for a pointed model falsifying f.

    Exhaustive mode climbs n = 1..max_states and returns the canonical
    minimum countermodel, or NoCounterexampleUpTo (never a validity
    claim).  Sampled mode draws `samples` (frame, valuation) pairs at
    n = max_states from the seeded generator.
    """
    if mode not in ("exhaustive", "sampled"):
        msg = f"mode must be 'exhaustive' or 'sampled', got {mode!r}"
        raise ValueError(msg)
    if has_announcement(f) and "m" not in cls.properties:
        msg = ("announcement formulas are only searched over classes "
               "requiring property m")
        raise ValueError(msg)
    atoms = cls.atoms if cls.atoms else atoms_of(f)
    if mode == "sampled":
        return _sampled_search(f, cls, atoms, seed, samples)
    if cls.max_states > EXHAUSTIVE_MAX_STATES:
        msg = (f"exhaustive search caps max_states at {EXHAUSTIVE_MAX_STATES}, "
               f"got {cls.max_states}; use sampled mode")
        raise ValueError(msg)
    for n in range(1, cls.max_states + 1):
        total = count_frames(n, cls)
        hit = _run_chunks(f, n, cls.properties, atoms, total, jobs)
        if hit:
            _, codes, assignment, state = hit
            return _witness_to_countermodel(f, n, codes, atoms, assignment, state)
    return NoCounterexampleUpTo(cls.max_states, "exhaustive")


def _sampled_search(f: Formula, cls: ClassSpec, atoms, seed: int, samples: int):
    n = cls.max_states
    if n > SAMPLED_MAX_STATES:
        msg = (f"sampled search caps max_states at {SAMPLED_MAX_STATES}, "
               f"got {n}")
        raise ValueError(msg)
    if samples <= 0:
        msg = f"sampled mode needs a positive sample count, got {samples}"
        raise ValueError(msg)
    allowed = _allowed_lists(n, cls.properties)
    full = (1 << n) - 1
    rng = SplitMix64(seed)
    for _ in range(samples):
        codes = tuple(options[rng.below(len(options))] for options in allowed)
        assignment = tuple(rng.below(1 << n) for _ in atoms)
        fams = tuple(_family_masks_from_code(n, c) for c in codes)
        ctx = _Ctx(n, fams, dict(zip(atoms, assignment)), False)
        e = ctx.ext(f)
        if e != full:
            state = next(s for s in range(n) if not e >> s & 1)
            return _witness_to_countermodel(f, n, codes, atoms, assignment, state)
    return NoCounterexampleUpTo(n, "sampled", samples, seed)


# --- distinguishability -------------------------------------------------------


_FRAGMENT_OPS = {"bullet": (Bullet,), "wrong": (Wrong,),
                 "full": (Bullet, Wrong)}


def fragment_representatives(models, atoms, operators, max_depth: int):
    """Representatives of the fragment up to joint extension signature.

    Closes the sorted atoms under negation, conjunction and the given
    unary operators, keeping one formula (first discovered) per joint
    signature and tracking the least modal depth that realizes it, so
    the depth bound cuts exactly.  Returns [(formula, signature)] in
    discovery order; signatures are tuples of extension masks, one per
    model.
    """
    ctxs = [_ctx_for(m, False) for m in models]
    reps: list[list] = []  # [formula, signature, best known modal depth]
    index: dict[tuple, int] = {}

    def offer(formula: Formula, depth: int) -> bool:
        sig = tuple(ctx.ext(formula) for ctx in ctxs)
        pos = index.get(sig)
        if pos is None:
            index[sig] = len(reps)
            reps.append([formula, sig, depth])
            return True
        if depth < reps[pos][2]:
            reps[pos][2] = depth
            return True
        return False

    for name in sorted(set(atoms)):
        offer(Atom(name), 0)
    changed = True
    while changed:
        changed = False
        i = 0
        while i < len(reps):
            f, _, d = reps[i]
            if offer(Not(f), d):
                changed = True
            j = 0
            while j < len(reps):
                g, _, dg = reps[j]
                if offer(And(f, g), max(d, dg)):
                    changed = True
                j += 1
            i += 1
        for pos in range(len(reps)):
            f, _, d = reps[pos]
            if d < max_depth:
                for op in operators:
                    if offer(op(f), d + 1):
                        changed = True
    return [(f, sig) for f, sig, _ in reps]


def distinguish(pm1: PointedModel, pm2: PointedModel, fragment: str,
                depth: int):
    """First fragment formula telling the two points apart, or None.

    None is a bounded verdict: no distinguishing formula up to the
    modal depth over the shared atoms.
    """
    if fragment not in _FRAGMENT_OPS:
        msg = f"fragment must be one of {sorted(_FRAGMENT_OPS)}, got {fragment!r}"
        raise ValueError(msg)
    atoms = {name for name, _ in pm1.model.valuation}
    atoms.update(name for name, _ in pm2.model.valuation)
    reps = fragment_representatives((pm1.model, pm2.model), sorted(atoms),
                                    _FRAGMENT_OPS[fragment], depth)
    for formula, (e1, e2) in reps:
        if bool(e1 >> pm1.point & 1) != bool(e2 >> pm2.point & 1):
            return formula
    return None
