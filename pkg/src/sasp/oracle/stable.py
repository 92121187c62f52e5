"""Gelfond-Lifschitz stable models of ground programs."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import AtomBoundExceeded
from ._kernels import Packed, enumerate_choice_sets, least_model_of
from .ground import FALSE, GroundProgram


def gl_reduct(gp: GroundProgram, m) -> list:
    """Positive rules (head, pos) of the reduct with respect to atom set m."""
    m = set(m)
    return [(h, pos) for h, pos, neg in gp.rules if not any(a in m for a in neg)]


def least_model(positive_rules) -> set:
    """Least model of positive rules; FALSE appears in it when a constraint fires."""
    lm: set = set()
    changed = True
    while changed:
        changed = False
        for h, pos in positive_rules:
            if h not in lm and all(a in lm for a in pos):
                lm.add(h)
                changed = True
    return lm


def is_stable(gp: GroundProgram, m) -> bool:
    m = set(m)
    return FALSE not in m and least_model(gl_reduct(gp, m)) == m


def is_stable_minimal(gp: GroundProgram, m) -> bool:
    """Independent check: m satisfies every rule, and no proper subset of m
    is a model of the reduct."""
    m = frozenset(m)
    for h, pos, neg in gp.rules:
        if all(a in m for a in pos) and not any(a in m for a in neg):
            if h == FALSE or h not in m:
                return False
    reduct = [(h, pos) for h, pos, neg in gp.rules if not any(a in m for a in neg)]
    items = sorted(m)
    for mask in range((1 << len(items)) - 1):
        sub = {items[i] for i in range(len(items)) if (mask >> i) & 1}
        if all(h != FALSE and (h in sub) or not all(a in sub for a in pos) for h, pos in reduct):
            return False
    return True


def simplify(gp: GroundProgram) -> tuple:
    """Drop rules that cannot fire in any stable model.

    Returns (rules, certain) where certain atoms hold in every stable model.
    """
    rules = list(gp.rules)
    while True:
        possible = least_model([(h, pos) for h, pos, _ in rules])
        certain = least_model([(h, pos) for h, pos, neg in rules if not neg])
        out = []
        for h, pos, neg in rules:
            if not all(a in possible for a in pos):
                continue
            if any(a in certain for a in neg):
                continue
            neg = tuple(a for a in neg if a in possible)
            out.append((h, pos, neg))
        if out == rules:
            return out, certain - {FALSE}
        rules = out


@dataclass
class StableModelSet:
    gp: GroundProgram
    models: list

    def __len__(self):
        return len(self.models)

    def __iter__(self):
        return iter(self.models)

    def render(self) -> list:
        return [sorted(self.gp.atom_str(a) for a in m) for m in self.models]


def enumerate_stable_models(gp: GroundProgram, bound: int = 20, use_numba: bool | None = None) -> StableModelSet:
    """All stable models, found by trying every truth assignment of the atoms
    that occur under negation and checking it against the reduct's least model."""
    rules, _certain = simplify(gp)
    if any(h == FALSE and not pos and not neg for h, pos, neg in rules):
        return StableModelSet(gp, [])
    choice = sorted({a for _, _, neg in rules for a in neg})
    if len(choice) > bound:
        raise AtomBoundExceeded(f"{len(choice)} atoms occur under negation (bound {bound})")
    packed = Packed(len(gp.atoms), rules, choice)
    masks = enumerate_choice_sets(packed, use_numba)
    models = [frozenset(int(a) for a in least_model_of(packed, int(s))) for s in masks]
    models.sort(key=lambda m: sorted(gp.atom_str(a) for a in m))
    return StableModelSet(gp, models)


def enumerate_by_subsets(gp: GroundProgram, bound: int = 20) -> list:
    """Reference enumeration over all atom subsets (exponential in atom count)."""
    n = len(gp.atoms)
    if n > bound:
        raise AtomBoundExceeded(f"{n} atoms (bound {bound})")
    out = []
    for mask in range(1 << n):
        m = {i for i in range(n) if (mask >> i) & 1}
        if is_stable(gp, m):
            out.append(frozenset(m))
    return out
