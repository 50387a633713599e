"""Bimatrix games, genericity checks, best responses and regret of CSPs.

Row ``i`` of a payoff matrix is an optimizer action, column ``j`` a learner
action. A CSP is a flat tuple of length ``m * n`` indexed by ``i * n + j``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .core.geometry import HalfspaceSystem, solve_lp
from .core.lp import OPTIMAL
from .rational import format_rational, parse_rational

NON_DOMINATED = "non-dominated"
WEAKLY_DOMINATED = "weakly dominated"
STRICTLY_DOMINATED = "strictly dominated"


class GameError(ValueError):
    pass


def _matrix(rows, m, n, name):
    M = tuple(tuple(parse_rational(v) for v in row) for row in rows)
    if len(M) != m or any(len(r) != n for r in M):
        raise GameError(f"{name} must be {m}x{n}")
    for r in M:
        for v in r:
            if not -1 <= v <= 1:
                raise GameError(f"{name} entry {v} outside [-1, 1]")
    return M


@dataclass(frozen=True)
class Game:
    m: int
    n: int
    uL: tuple
    uO: tuple | None = None
    name: str = ""
    optimizer_labels: tuple = field(default=(), compare=False)
    learner_labels: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise GameError("need at least one action per player")
        object.__setattr__(self, "uL", _matrix(self.uL, self.m, self.n, "u_L"))
        if self.uO is not None:
            object.__setattr__(self, "uO", _matrix(self.uO, self.m, self.n, "u_O"))
        if not self.optimizer_labels:
            object.__setattr__(self, "optimizer_labels", tuple(f"x{i}" for i in range(self.m)))
        if not self.learner_labels:
            object.__setattr__(self, "learner_labels", tuple(f"y{j}" for j in range(self.n)))

    @property
    def dim(self) -> int:
        return self.m * self.n

    @property
    def uL_flat(self) -> tuple:
        return tuple(v for row in self.uL for v in row)

    @property
    def uO_flat(self) -> tuple | None:
        if self.uO is None:
            return None
        return tuple(v for row in self.uO for v in row)

    def index(self, i: int, j: int) -> int:
        return i * self.n + j

    def pure(self, i: int, j: int) -> tuple:
        phi = [Fraction(0)] * self.dim
        phi[self.index(i, j)] = Fraction(1)
        return tuple(phi)

    def payoff_vector(self, x: Sequence) -> tuple:
        """``u_L(x, j)`` for every learner action ``j``."""
        return tuple(sum((x[i] * self.uL[i][j] for i in range(self.m) if x[i]), Fraction(0))
                     for j in range(self.n))

    def phi_plus(self) -> tuple[int, int]:
        best = max(self.uL_flat)
        k = self.uL_flat.index(best)
        return divmod(k, self.n)


@dataclass(frozen=True)
class ValidationReport:
    entries_ok: bool
    phi_plus_unique: bool
    phi_plus: tuple
    phi_plus_value: Fraction
    classes: tuple
    margins: tuple

    @property
    def valid(self) -> bool:
        return self.entries_ok and all(c == NON_DOMINATED for c in self.classes)

    def to_dict(self, game: Game | None = None) -> dict:
        labels = game.learner_labels if game is not None else None
        return {
            "valid": self.valid,
            "phi_plus_unique": self.phi_plus_unique,
            "phi_plus": list(self.phi_plus),
            "phi_plus_value": format_rational(self.phi_plus_value),
            "actions": [
                {"action": j if labels is None else labels[j], "class": c,
                 "margin": format_rational(d)}
                for j, (c, d) in enumerate(zip(self.classes, self.margins))
            ],
        }


def _margin_lp(game: Game, j: int):
    m, n = game.m, game.n
    # variables (x_0..x_{m-1}, d), d capped at 1 to keep the LP bounded
    rows = []
    for i in range(m):
        a = [0] * (m + 1)
        a[i] = -1
        rows.append((a, 0))
    rows.append(([0] * m + [1], 1))
    for k in range(n):
        if k != j:
            rows.append(([game.uL[i][k] - game.uL[i][j] for i in range(m)] + [1], 0))
    res = solve_lp([0] * m + [1], HalfspaceSystem(m + 1, rows, [([1] * m + [0], 1)]), "max")
    return res.value, res.point[:m]


def incentive_margin(game: Game, j: int) -> Fraction:
    """Largest ``d <= 1`` such that some ``x`` makes ``j`` better than every other action by ``d``."""
    return _margin_lp(game, j)[0]


def incentivizing_mix(game: Game, j: int) -> tuple:
    """A mix attaining :func:`incentive_margin` for action ``j``."""
    return _margin_lp(game, j)[1]


def validate(game: Game) -> ValidationReport:
    flat = game.uL_flat
    best = max(flat)
    unique = flat.count(best) == 1
    margins = tuple(incentive_margin(game, j) for j in range(game.n))
    classes = tuple(
        NON_DOMINATED if d > 0 else WEAKLY_DOMINATED if d == 0 else STRICTLY_DOMINATED
        for d in margins
    )
    return ValidationReport(True, unique, game.phi_plus(), best, classes, margins)


def check_distribution(x: Sequence, size: int, what: str = "x") -> tuple:
    x = tuple(Fraction(v) for v in x)
    if len(x) != size:
        raise GameError(f"{what} must have {size} entries")
    if any(v < 0 for v in x) or sum(x) != 1:
        raise GameError(f"{what} is not a probability distribution")
    return x


def best_responses(game: Game, x: Sequence) -> frozenset:
    x = check_distribution(x, game.m)
    vals = game.payoff_vector(x)
    top = max(vals)
    return frozenset(j for j, v in enumerate(vals) if v == top)


def zero_sum_value(game: Game) -> tuple[Fraction, tuple, tuple]:
    """``min_x max_j u_L(x, j)`` with an optimizer minimax mix and a learner maximin mix."""
    U, x = _minimax_primal(game)
    W, y = _maximin_dual(game)
    if U != W:
        raise ArithmeticError("primal and dual zero-sum values differ")
    return U, x, y


def _minimax_primal(game: Game):
    m, n = game.m, game.n
    rows = []
    for i in range(m):
        a = [0] * (m + 1)
        a[i] = -1
        rows.append((a, 0))
    for j in range(n):
        rows.append(([game.uL[i][j] for i in range(m)] + [-1], 0))
    res = solve_lp([0] * m + [1], HalfspaceSystem(m + 1, rows, [([1] * m + [0], 1)]), "min")
    assert res.status == OPTIMAL
    return res.value, res.point[:m]


def _maximin_dual(game: Game):
    m, n = game.m, game.n
    rows = []
    for j in range(n):
        a = [0] * (n + 1)
        a[j] = -1
        rows.append((a, 0))
    for i in range(m):
        rows.append(([-game.uL[i][j] for j in range(n)] + [1], 0))
    res = solve_lp([0] * n + [1], HalfspaceSystem(n + 1, rows, [([1] * n + [0], 1)]), "max")
    assert res.status == OPTIMAL
    return res.value, res.point[:n]


def check_csp(game: Game, phi: Sequence) -> tuple:
    return check_distribution(phi, game.dim, "CSP")


def learner_utility(game: Game, phi: Sequence) -> Fraction:
    return sum((p * u for p, u in zip(phi, game.uL_flat) if p), Fraction(0))


def optimizer_utility(game: Game, phi: Sequence, uO: Sequence | None = None) -> Fraction:
    u = game.uO_flat if uO is None else uO
    return sum((p * Fraction(v) for p, v in zip(phi, u) if p), Fraction(0))


def marginals(game: Game, phi: Sequence) -> tuple[tuple, tuple]:
    n = game.n
    x = tuple(sum(phi[i * n:(i + 1) * n], Fraction(0)) for i in range(game.m))
    y = tuple(sum((phi[i * n + j] for i in range(game.m)), Fraction(0)) for j in range(n))
    return x, y


def product(x: Sequence, y: Sequence) -> tuple:
    return tuple(Fraction(a) * Fraction(b) for a in x for b in y)


def _deviation_gains(game: Game, phi, j: int) -> list:
    # gain of moving all mass on learner action j to each alternative
    n = game.n
    col = [phi[i * n + j] for i in range(game.m)]
    base = sum((c * game.uL[i][j] for i, c in enumerate(col) if c), Fraction(0))
    return [sum((c * game.uL[i][k] for i, c in enumerate(col) if c), Fraction(0)) - base
            for k in range(n)]


def regret(game: Game, phi: Sequence) -> Fraction:
    phi = check_csp(game, phi)
    x, _ = marginals(game, phi)
    return max(game.payoff_vector(x)) - learner_utility(game, phi)


def swap_regret(game: Game, phi: Sequence) -> Fraction:
    phi = check_csp(game, phi)
    return sum((max(_deviation_gains(game, phi, j)) for j in range(game.n)), Fraction(0))


def best_swap(game: Game, phi: Sequence) -> dict:
    """For each learner action, the deviation target and its gain (only positive gains)."""
    phi = check_csp(game, phi)
    out = {}
    for j in range(game.n):
        gains = _deviation_gains(game, phi, j)
        k = max(range(game.n), key=lambda a: (gains[a], -a))
        if gains[k] > 0:
            out[j] = (k, gains[k])
    return out


def mixture_value(menu_value: Callable[[Sequence], Fraction], components) -> Fraction:
    """Learner value against a finite mixture of optimizers, given per-optimizer values."""
    comps = [(Fraction(w), u) for w, u in components]
    if not comps:
        raise GameError("need at least one component")
    if any(w < 0 for w, _ in comps) or sum(w for w, _ in comps) != 1:
        raise GameError("mixture weights must be nonnegative and sum to 1")
    return sum((w * Fraction(menu_value(u)) for w, u in comps if w), Fraction(0))


# ---------------------------------------------------------------------------
# JSON


def game_to_dict(game: Game) -> dict:
    d = {
        "m": game.m,
        "n": game.n,
        "u_L": [[format_rational(v) for v in row] for row in game.uL],
    }
    if game.uO is not None:
        d["u_O"] = [[format_rational(v) for v in row] for row in game.uO]
    if game.name:
        d["name"] = game.name
    if game.optimizer_labels != tuple(f"x{i}" for i in range(game.m)):
        d["optimizer_labels"] = list(game.optimizer_labels)
    if game.learner_labels != tuple(f"y{j}" for j in range(game.n)):
        d["learner_labels"] = list(game.learner_labels)
    return d


def game_from_dict(d: dict) -> Game:
    try:
        m, n = int(d["m"]), int(d["n"])
        uL = d["u_L"]
    except (KeyError, TypeError, ValueError) as exc:
        raise GameError(f"malformed game: {exc}") from exc
    return Game(m, n, uL, d.get("u_O"), d.get("name", ""),
                tuple(d.get("optimizer_labels", ())), tuple(d.get("learner_labels", ())))


def dumps_game(game: Game) -> str:
    return json.dumps(game_to_dict(game), indent=2)


def loads_game(text: str) -> Game:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GameError(f"invalid JSON: {exc}") from exc
    if not isinstance(d, dict):
        raise GameError("game JSON must be an object")
    return game_from_dict(d)


def load_game(path) -> Game:
    with open(path) as fh:
        return loads_game(fh.read())
