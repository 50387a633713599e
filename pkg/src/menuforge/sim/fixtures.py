"""Optimizer fixtures used for convergence and audit sweeps."""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, NamedTuple

from ..corpus import PERTURBATIONS, by_name, counterexample_game, examples_game, perturbed_game, rps_game
from ..game import Game
from ..meanbased import tau_star
from .learners import LearnerSpec
from .optimizers import OptimizerSpec


class Fixture(NamedTuple):
    name: str
    game: Game
    optimizer: Callable[[int], OptimizerSpec]


def _fixed(x):
    return lambda T: OptimizerSpec("fixed", x=x)


def _switch(a, b, frac):
    return lambda T: OptimizerSpec("schedule", rounds=[(int(frac * T), a), (1, b)])


def _cycle(xs, block):
    return lambda T: OptimizerSpec("schedule", rounds=[(block, x) for x in xs], repeat=True)


def fixtures() -> list[Fixture]:
    ce = counterexample_game()
    pg = perturbed_game(PERTURBATIONS[0])
    rps = rps_game()
    ex = examples_game()
    cyc = by_name("cyclic-3")
    third = Fraction(1, 3)
    return [
        Fixture("counterexample/tau_star", ce,
                lambda T: OptimizerSpec("trajectory", trajectory=tau_star(ce), eps=Fraction(1, 1000))),
        Fixture("counterexample/fixed-N", ce, _fixed((1, 0))),
        Fixture("counterexample/switch", ce, _switch((0, 1), (1, 0), Fraction(1, 2))),
        Fixture("perturbed/tau_star", pg,
                lambda T: OptimizerSpec("trajectory", trajectory=tau_star(pg), eps=Fraction(1, 1000))),
        Fixture("rps/fixed-R", rps, _fixed((1, 0, 0))),
        Fixture("rps/cycle", rps, _cycle([(1, 0, 0), (0, 1, 0), (0, 0, 1)], 1000)),
        Fixture("rps/uniform", rps, _fixed((third, third, third))),
        Fixture("examples/fixed-A", ex, _fixed((1, 0))),
        Fixture("examples/switch", ex, _switch((0, 1), (1, 0), Fraction(1, 2))),
        Fixture("cyclic-3/mixed", cyc, _fixed((Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)))),
    ]


P, Q = (1, 0), (0, 1)
HALF = (Fraction(1, 2), Fraction(1, 2))


def example_learners() -> dict:
    """The four learners of the 2x2 worked examples (optimizer A/B, learner P/Q)."""
    return {
        "A1": LearnerSpec("fixed", y=Q),
        "A2": LearnerSpec("fixed", y=HALF),
        "A3": LearnerSpec("cyclic", cycle=(P, Q)),
        "A4": LearnerSpec("grim_trigger", y=P, trigger=0, after=Q),
    }


def example_mixes(name: str, T: int) -> list:
    """Round-by-round mixes of the oblivious example learners."""
    if name == "A1":
        return [Q] * T
    if name == "A2":
        return [HALF] * T
    if name == "A3":
        return [P if t % 2 == 0 else Q for t in range(T)]
    raise ValueError(f"{name} is not oblivious")


def defect_schedule(t0: int, after: int, m: int = 2) -> OptimizerSpec:
    """Play B for ``t0`` rounds, A once, then ``after`` forever."""
    pure = lambda i: tuple(int(k == i) for k in range(m))
    rounds = [(t0, pure(1))] if t0 else []
    rounds += [(1, pure(0)), (1, pure(after))]
    return OptimizerSpec("schedule", rounds=rounds)
