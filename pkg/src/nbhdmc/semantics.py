"""Truth evaluation on neighborhood models: eval, extensions, frame validity.

Clauses at state s, writing E for the child's extension:
    U f   holds iff s is in E and E is not a neighborhood of s
    O f   holds iff s in E implies E is a neighborhood of s
    W f   holds iff E is a neighborhood of s and s is not in E
    K f   holds iff E is a neighborhood of s
    [a] b holds iff a's truth at s implies b's truth at s inside the
          submodel obtained by restricting to a's extension

The core works on raw bit masks; extensions are memoized per
subformula within one model, and each announcement evaluates its body
in a fresh submodel context (no cache crosses models).
"""

from __future__ import annotations

from itertools import product

from .formula import (And, Announce, Atom, Bot, Box, Bullet, Circ, Formula,
                      Iff, Imp, Not, Or, Top, Wrong, atoms_of)
from .model import (NeighborhoodFrame, NeighborhoodModel, NonMonotoneError,
                    PointedModel, StateSet, _strict_supersets)

__all__ = ["evaluate", "extension", "frame_valid"]

VALUATION_SPACE_CAP = 24  # frame_valid refuses when atoms * states exceeds this


def _is_monotone(fams: tuple[frozenset[int], ...], full: int) -> bool:
    for fam in fams:
        for x in fam:
            if any(y not in fam for y in _strict_supersets(x, full)):
                return False
    return True


class _Ctx:
    """One model's evaluation context over raw masks."""

    __slots__ = ("n", "full", "fams", "val", "force", "cache", "_monotone")

    def __init__(self, n: int, fams: tuple[frozenset[int], ...],
                 val: dict[str, int], force: bool):
        self.n = n
        self.full = (1 << n) - 1
        self.fams = fams
        self.val = val
        self.force = force
        self.cache: dict[Formula, int] = {}
        self._monotone: bool | None = None

    def monotone(self) -> bool:
        if self._monotone is None:
            self._monotone = _is_monotone(self.fams, self.full)
        return self._monotone

    def ext(self, f: Formula) -> int:
        bits = self.cache.get(f)
        if bits is None:
            bits = self._compute(f)
            self.cache[f] = bits
        return bits

    def _compute(self, f: Formula) -> int:
        full = self.full
        if isinstance(f, Atom):
            return self.val.get(f.name, 0)
        if isinstance(f, Top):
            return full
        if isinstance(f, Bot):
            return 0
        if isinstance(f, Not):
            return full ^ self.ext(f.child)
        if isinstance(f, And):
            return self.ext(f.left) & self.ext(f.right)
        if isinstance(f, Or):
            return self.ext(f.left) | self.ext(f.right)
        if isinstance(f, Imp):
            return (full ^ self.ext(f.left)) | self.ext(f.right)
        if isinstance(f, Iff):
            return full ^ self.ext(f.left) ^ self.ext(f.right)
        if isinstance(f, Bullet):
            e = self.ext(f.child)
            return sum(1 << s for s in range(self.n)
                       if e >> s & 1 and e not in self.fams[s])
        if isinstance(f, Circ):
            e = self.ext(f.child)
            return sum(1 << s for s in range(self.n)
                       if not e >> s & 1 or e in self.fams[s])
        if isinstance(f, Wrong):
            e = self.ext(f.child)
            return sum(1 << s for s in range(self.n)
                       if e in self.fams[s] and not e >> s & 1)
        if isinstance(f, Box):
            e = self.ext(f.child)
            return sum(1 << s for s in range(self.n) if e in self.fams[s])
        if isinstance(f, Announce):
            return self._announce(f)
        msg = f"not a formula: {f!r}"
        raise TypeError(msg)

    def _announce(self, f: Announce) -> int:
        pa = self.ext(f.announced)
        if pa == 0:
            return self.full  # nothing satisfies the announcement; vacuously true
        if not self.monotone() and not self.force:
            msg = ("announcement on a model not closed under supersets; "
                   "pass force to apply the submodel formula anyway")
            raise NonMonotoneError(msg)
        kept = [s for s in range(self.n) if pa >> s & 1]
        position = {old: new for new, old in enumerate(kept)}

        def compress(mask: int) -> int:
            out = 0
            for old, new in position.items():
                if mask >> old & 1:
                    out |= 1 << new
            return out

        sub_fams = tuple(frozenset(compress(p & pa) for p in self.fams[old])
                         for old in kept)
        sub_val = {name: compress(v & pa) for name, v in self.val.items()}
        sub = _Ctx(len(kept), sub_fams, sub_val, self.force)
        eb = sub.ext(f.body)
        bits = self.full ^ pa
        for j, old in enumerate(kept):
            if eb >> j & 1:
                bits |= 1 << old
        return bits


def _ctx_for(model: NeighborhoodModel, force: bool) -> _Ctx:
    return _Ctx(model.size, model.frame.family_masks(),
                {name: ss.bits for name, ss in model.valuation}, force)


def extension(model: NeighborhoodModel, f: Formula,
              force: bool = False) -> StateSet:
    """The set of states where f holds."""
    return StateSet(model.size, _ctx_for(model, force).ext(f))


def evaluate(pm: PointedModel, f: Formula, force: bool = False) -> bool:
    """Truth of f at the point; by definition, membership in the extension."""
    return bool(_ctx_for(pm.model, force).ext(f) >> pm.point & 1)


def frame_valid(frame: NeighborhoodFrame, f: Formula,
                force: bool = False) -> bool:
    """Truth at every state under every valuation of f's atoms.

    Valuations run in lexicographic order of (atom name, bit vector);
    atoms not occurring in f are irrelevant and never enumerated.
    Refuses when atoms * states exceeds 24 (2^24 valuations).
    """
    n = frame.size
    atoms = atoms_of(f)
    if len(atoms) * n > VALUATION_SPACE_CAP:
        msg = (f"{len(atoms)} atoms over {n} states exceeds the "
               f"2^{VALUATION_SPACE_CAP} valuation cap; use sampled search")
        raise ValueError(msg)
    fams = frame.family_masks()
    full = (1 << n) - 1
    for assignment in product(range(1 << n), repeat=len(atoms)):
        ctx = _Ctx(n, fams, dict(zip(atoms, assignment)), force)
        if ctx.ext(f) != full:
            return False
    return True
