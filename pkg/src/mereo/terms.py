"""Terms over the partial join/meet of a model and their evaluation.

Evaluation returns ``None`` for an undefined value; undefinedness propagates
upward. Two weak equalities are provided:

* ``weak_equal``   holds when either side is undefined, else the values agree;
* ``strong_weak_equal`` holds when both sides are undefined, or both are
  defined and agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

from .model import GranularSpaceModel


class UnboundVariable(KeyError):
    pass


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Bottom:
    def __str__(self) -> str:
        return "⊥"


@dataclass(frozen=True)
class Join:
    left: "Term"
    right: "Term"

    def __str__(self) -> str:
        return f"({self.left} ∨ {self.right})"


@dataclass(frozen=True)
class Meet:
    left: "Term"
    right: "Term"

    def __str__(self) -> str:
        return f"({self.left} ∧ {self.right})"


Term = Union[Var, Bottom, Join, Meet]


def variables(t: Term) -> list[str]:
    """Variable names of ``t`` in first-occurrence order."""
    out: list[str] = []

    def walk(node: Term) -> None:
        if isinstance(node, Var):
            if node.name not in out:
                out.append(node.name)
        elif isinstance(node, (Join, Meet)):
            walk(node.left)
            walk(node.right)

    walk(t)
    return out


def depth(t: Term) -> int:
    if isinstance(t, (Join, Meet)):
        return 1 + max(depth(t.left), depth(t.right))
    return 0


def eval_partial_term(m: GranularSpaceModel, t: Term, env: Mapping[str, int]) -> int | None:
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise UnboundVariable(t.name) from None
    if isinstance(t, Bottom):
        return m.bottom
    left = eval_partial_term(m, t.left, env)
    right = eval_partial_term(m, t.right, env)
    if left is None or right is None:
        return None
    if isinstance(t, Join):
        return m.join(left, right)
    return m.meet(left, right)


def weak_equal(m: GranularSpaceModel, s: Term, t: Term, env: Mapping[str, int]) -> bool:
    a = eval_partial_term(m, s, env)
    b = eval_partial_term(m, t, env)
    return a is None or b is None or a == b


def strong_weak_equal(m: GranularSpaceModel, s: Term, t: Term, env: Mapping[str, int]) -> bool:
    a = eval_partial_term(m, s, env)
    b = eval_partial_term(m, t, env)
    return a == b


def join_of(names: list[str]) -> Term:
    """Left-nested join of the given variables; the empty join is bottom."""
    if not names:
        return Bottom()
    term: Term = Var(names[0])
    for name in names[1:]:
        term = Join(term, Var(name))
    return term
