"""Named games used by tests, the CLI and the simulation fixtures."""
from __future__ import annotations

from fractions import Fraction as F

from .game import Game, GameError

N, Y = 0, 1
A, B, C = 0, 1, 2


def counterexample_game() -> Game:
    """The 2x3 game on which mean-based learners are Pareto-dominated."""
    return Game(2, 3, [[0, F(-1, 6), F(-1, 2)], [0, F(1, 3), F(1, 2)]], name="counterexample",
                optimizer_labels=("N", "Y"), learner_labels=("A", "B", "C"))


def perturbed_game(eps) -> Game:
    """Perturbation of :func:`counterexample_game` by ``eps = (e1, ..., e6)``.

    Requires every ``e_k`` in ``(0, 1/100]`` and ``e1 > e2``.
    """
    e = [F(v) for v in eps]
    if len(e) != 6:
        raise GameError("need six perturbation parameters")
    if any(not 0 < v <= F(1, 100) for v in e) or not e[0] > e[1]:
        raise GameError("perturbations must lie in (0, 1/100] with e1 > e2")
    uL = [[e[0], F(-1, 6) + e[2], F(-1, 2) + e[4]],
          [e[1], F(1, 3) + e[3], F(1, 2) + e[5]]]
    label = ",".join(str(v) for v in e)
    return Game(2, 3, uL, name=f"perturbed[{label}]",
                optimizer_labels=("N", "Y"), learner_labels=("A", "B", "C"))


PERTURBATIONS = (
    (F(1, 100), F(1, 200), F(1, 150), F(1, 300), F(1, 120), F(1, 250)),
    (F(1, 200), F(1, 400), F(1, 100), F(1, 100), F(1, 100), F(1, 100)),
    (F(3, 400), F(1, 400), F(1, 500), F(1, 600), F(1, 700), F(1, 800)),
    (F(1, 100), F(1, 1000), F(1, 1000), F(1, 1000), F(1, 1000), F(1, 1000)),
    (F(1, 150), F(1, 160), F(1, 170), F(1, 180), F(1, 190), F(1, 110)),
    (F(1, 300), F(1, 301), F(1, 101), F(1, 102), F(1, 103), F(1, 104)),
)


def rps_game() -> Game:
    # learner action j beats optimizer action j-1
    uL = [[0, 1, -1], [-1, 0, 1], [1, -1, 0]]
    return Game(3, 3, uL, name="rps", optimizer_labels=("R", "P", "S"),
                learner_labels=("R", "P", "S"))


def examples_game() -> Game:
    """2x2 game of the worked examples, rescaled by 1/3 into [-1, 1]."""
    return Game(2, 2, [[F(1, 3), F(2, 3)], [1, 0]], name="examples",
                optimizer_labels=("A", "B"), learner_labels=("P", "Q"))


def _two_by_two():
    return [
        examples_game(),
        Game(2, 2, [[1, F(-1, 2)], [-1, F(1, 2)]], name="skewed-pennies"),
        Game(2, 2, [[1, 0], [0, F(1, 2)]], name="coordination"),
        Game(2, 2, [[F(1, 2), F(-1, 4)], [0, F(1, 4)]], name="stag"),
        Game(2, 2, [[0, F(3, 5)], [F(2, 5), 0]], name="anti-coordination"),
    ]


def corpus() -> list[Game]:
    """At least ten validated games from 2x2 up to 3x3."""
    games = _two_by_two()
    games += [
        counterexample_game(),
        Game(3, 2, [[1, 0], [0, F(1, 2)], [F(-1, 2), F(1, 4)]], name="three-by-two"),
        Game(3, 3, [[1, 0, 0], [0, F(1, 2), 0], [0, 0, F(1, 4)]], name="coordination-3"),
        Game(3, 3, [[0, F(1, 2), F(-1, 3)], [F(-1, 2), 0, F(1, 4)], [F(1, 3), F(-1, 4), 0]],
             name="cyclic-3"),
        Game(2, 3, [[F(3, 4), 0, F(-1, 2)], [F(-1, 4), F(1, 4), F(1, 2)]], name="ladder"),
        perturbed_game(PERTURBATIONS[0]),
        rps_game(),
    ]
    return games


def two_by_two_corpus() -> list[Game]:
    return [g for g in corpus() if g.m == 2 and g.n == 2]


def by_name(name: str) -> Game:
    if name == "counterexample":
        return counterexample_game()
    if name == "rps":
        return rps_game()
    if name == "examples":
        return examples_game()
    if name.startswith("perturbed:"):
        return perturbed_game(PERTURBATIONS[int(name.split(":", 1)[1])])
    for g in corpus():
        if g.name == name:
            return g
    raise KeyError(name)
