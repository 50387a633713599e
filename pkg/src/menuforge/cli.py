"""``menuforge`` command line."""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .corpus import by_name, corpus
from .game import Game, GameError, game_from_dict, learner_utility, load_game, swap_regret, validate
from .menus import (
    MenuError, build_nr_menu, build_nsr_menu, dumps_menu, extend_menu, fixed_action_menu,
    is_valid_menu, loads_menu, menu_to_dict,
)
from .meanbased import ShapeError, build_mb_menu, tau_star, trajectory_from_dict
from .pareto import (
    PreconditionError, SearchFailure, audit_dominance, check_pareto_optimal, find_separating_uO,
    sample_uO,
)
from .rational import format_vector, parse_rational, parse_vector

EXIT_OK, EXIT_INPUT, EXIT_ASSUMPTION, EXIT_SHAPE, EXIT_INCONCLUSIVE = 0, 1, 2, 3, 4


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# artifacts


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


def write_manifest(path, command: str, inputs, outputs, seed=None) -> None:
    manifest = {
        "command": command,
        "inputs": [{"path": str(p), "sha256": _sha256(p)} for p in inputs],
        "outputs": [{"path": str(p), "sha256": _sha256(p)} for p in outputs],
        "versions": {"menuforge": __version__, "python": sys.version.split()[0],
                     "numpy": np.__version__},
        "seed": seed,
    }
    Path(path).write_text(json.dumps(manifest, indent=2) + "\n")


def _emit(obj, out, args, inputs, seed=None) -> None:
    text = json.dumps(obj, indent=2) + "\n"
    if out is None:
        sys.stdout.write(text)
        return
    Path(out).write_text(text)
    write_manifest(f"{out}.manifest.json", " ".join(args.argv), inputs, [out], seed)


def _load_game(path) -> Game:
    try:
        return load_game(path)
    except (OSError, GameError) as exc:
        raise InputError(str(exc)) from exc


def _load_menu(path, game_path=None):
    game = _load_game(game_path) if game_path else None
    try:
        return loads_menu(Path(path).read_text(), game)
    except (OSError, ValueError, KeyError) as exc:
        raise InputError(f"{path}: {exc}") from exc


# ---------------------------------------------------------------------------
# game / menu


def cmd_game_validate(args) -> int:
    game = _load_game(args.path)
    report = validate(game)
    _emit(report.to_dict(game), args.out, args, [args.path])
    return EXIT_OK if report.valid else EXIT_ASSUMPTION


def build_menu(game: Game, kind: str, jobs=None):
    if kind == "nr":
        return build_nr_menu(game)
    if kind == "nsr":
        return build_nsr_menu(game)
    if kind == "mb":
        return build_mb_menu(game, jobs)
    if kind.startswith("fixed:"):
        try:
            j = int(kind.split(":", 1)[1])
        except ValueError as exc:
            raise InputError(f"bad menu kind {kind!r}") from exc
        return fixed_action_menu(game, j)
    raise InputError(f"unknown menu kind {kind!r}")


def cmd_menu_build(args) -> int:
    game = _load_game(args.path)
    try:
        menu = build_menu(game, args.kind, args.jobs)
    except ShapeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SHAPE
    _emit(menu_to_dict(menu, with_halfspaces=args.halfspaces), args.out, args, [args.path])
    return EXIT_OK


def cmd_menu_check_valid(args) -> int:
    menu = _load_menu(args.menu, args.game)
    rep = is_valid_menu(menu, args.grid, args.jobs)
    out = {"passed": rep.passed, "checked": rep.checked,
           "failing_x": format_vector(rep.failing_x) if rep.failing_x else None}
    _emit(out, args.out, args, [args.menu])
    return EXIT_OK


# ---------------------------------------------------------------------------
# pareto


def cmd_pareto(args) -> int:
    inputs = [p for p in (args.game,) if p]
    if args.mode == "check":
        if not args.menu:
            raise InputError("pareto check needs --menu")
        menu = _load_menu(args.menu, args.game)
        verdict = check_pareto_optimal(menu)
        out = verdict.to_dict()
        if args.dominating_out and verdict.dominating_menu is not None:
            Path(args.dominating_out).write_text(dumps_menu(verdict.dominating_menu) + "\n")
        _emit(out, args.out, args, [args.menu] + inputs)
        return EXIT_OK
    if args.mode == "falsify":
        if not (args.winner and args.loser):
            raise InputError("pareto falsify needs --winner and --loser")
        win, lose = _load_menu(args.winner, args.game), _load_menu(args.loser, args.game)
        try:
            w = find_separating_uO(win, lose, sweep_budget=args.budget)
        except PreconditionError as exc:
            raise InputError(str(exc)) from exc
        except SearchFailure as exc:
            _emit({"witness": None, "inconclusive": str(exc)}, args.out, args,
                  [args.winner, args.loser] + inputs)
            return EXIT_INCONCLUSIVE
        _emit({"witness": w.to_dict()}, args.out, args, [args.winner, args.loser] + inputs)
        return EXIT_OK
    if not (args.candidate and args.baseline):
        raise InputError("pareto audit needs --candidate and --baseline")
    cand, base = _load_menu(args.candidate, args.game), _load_menu(args.baseline, args.game)
    samples = sample_uO(cand.game.dim, args.samples, args.seed)
    rep = audit_dominance(cand, base, samples, args.jobs)
    _emit(rep.to_dict(), args.out, args, [args.candidate, args.baseline] + inputs, args.seed)
    return EXIT_OK


# ---------------------------------------------------------------------------
# simulation


def _config_game(spec, base_dir) -> Game:
    if isinstance(spec, dict):
        return game_from_dict(spec)
    path = Path(base_dir, spec)
    if path.exists():
        return load_game(path)
    try:
        return by_name(spec)
    except (KeyError, IndexError, ValueError) as exc:
        raise InputError(f"unknown game {spec!r}") from exc


def _config_menu(spec, game: Game, base_dir):
    if spec is None:
        return None
    if isinstance(spec, str):
        path = Path(base_dir, spec)
        if path.exists():
            return loads_menu(path.read_text(), game)
        return build_menu(game, spec)
    if "extend" in spec:
        inner = _config_menu(spec["extend"], game, base_dir)
        return extend_menu(inner, [_config_point(p, game) for p in spec.get("points", [])])
    return loads_menu(json.dumps(spec), game)


def _config_point(p, game):
    if p == "profile(tau_star)":
        from .meanbased import profile
        return profile(tau_star(game), game.n)
    return parse_vector(p)


def _config_learner(d, game, base_dir):
    from .sim import LearnerSpec

    if d is None:
        return None
    vec = lambda v: None if v is None else parse_vector(v)
    return LearnerSpec(
        kind=d["kind"],
        regularizer=d.get("regularizer", "negentropy"),
        eta=None if d.get("eta") is None else float(parse_rational(d["eta"])),
        target_menu=_config_menu(d.get("target_menu"), game, base_dir),
        base=_config_learner(d.get("base"), game, base_dir),
        y=vec(d.get("y")),
        cycle=None if d.get("cycle") is None else tuple(parse_vector(c) for c in d["cycle"]),
        trigger=d.get("trigger"),
        after=vec(d.get("after")),
    )


def _config_optimizer(d, game, T, learner):
    from .sim import OptimizerSpec
    from .sim.protocol import cooperative_optimizer, net_point, protocol_parameters

    kind = d["kind"]
    eps = parse_rational(d.get("eps", "1/1000"))
    if kind == "fixed":
        return OptimizerSpec("fixed", x=parse_vector(d["x"])), None
    if kind == "schedule":
        rounds = [(int(c), parse_vector(x)) for c, x in d["rounds"]]
        return OptimizerSpec("schedule", rounds=rounds, repeat=bool(d.get("repeat", False))), None
    if kind == "trajectory":
        tr = d["trajectory"]
        tau = tau_star(game) if tr == "tau_star" else trajectory_from_dict(tr)
        return OptimizerSpec("trajectory", trajectory=tau, eps=eps), None
    if kind == "exploiter":
        u = d["uO"]
        if u == "-uL":
            uO = tuple(-v for v in game.uL_flat)
        elif u == "uL":
            uO = game.uL_flat
        else:
            uO = parse_vector(u)
        return OptimizerSpec("exploiter", uO=uO, eps=eps), None
    if kind == "cooperative":
        C = protocol_parameters(game.m, game.n, T).C
        counts = net_point(_config_point(d["target"], game), C)
        return cooperative_optimizer(game, counts, T), counts
    raise InputError(f"unknown optimizer kind {kind!r}")


def _curve_rows(game, tr, reg, swap, nsr_V, points=200):
    from .core.distance import project

    T = tr.T
    ts = sorted({max(1, round(T * k / points)) for k in range(1, points + 1)})
    cum = np.cumsum(tr.optimizer_mixes[:, :, None] * tr.learner_mixes[:, None, :], axis=0)
    rows = []
    for t in ts:
        phi = cum[t - 1].ravel() / t
        _, dist, _ = project(phi, nsr_V)
        rows.append((t, float(reg[t - 1] / t), float(swap[t - 1] / t), float(dist)))
    return rows


def simulate(config: dict, base_dir=".") -> tuple[dict, object, list]:
    """Run one configured simulation; returns ``(metrics, transcript, curve rows)``."""
    from .sim import (
        empirical_csp, empirical_csp_rational, l1_distance, mean_based_audit, regret_curves, run,
    )
    from .sim.protocol import protocol_bound, protocol_parameters

    game = _config_game(config["game"], base_dir)
    T = int(config["T"])
    seed = int(config.get("seed", 0))
    learner = _config_learner(config["learner"], game, base_dir)
    optimizer, counts = _config_optimizer(config["optimizer"], game, T, learner)
    tr = run(game, learner, optimizer, T, seed)
    reg, swap = regret_curves(game, tr)
    phi = empirical_csp_rational(tr)
    nsr = build_nsr_menu(game)
    metrics = {
        "T": T,
        "seed": seed,
        "empirical_csp": format_vector(phi),
        "learner_utility_per_round": float(learner_utility(game, phi)),
        "regret_per_round": float(reg[-1] / T),
        "swap_regret_per_round": float(swap[-1] / T),
        "csp_swap_regret": float(swap_regret(game, phi)),
        "l1_distance_to_nsr": float(l1_distance(phi, nsr.vertices)),
        "mean_based_violations": mean_based_audit(game, tr),
    }
    if optimizer.uO is not None:
        metrics["optimizer_utility_per_round"] = float(
            sum(a * b for a, b in zip(optimizer.uO, phi)))
    if learner.kind == "blackwell":
        from .core.geometry import point_distance
        metrics["distance_to_target"] = point_distance(empirical_csp(tr), learner.target_menu.vertices)
    if counts is not None:
        C = protocol_parameters(game.m, game.n, T).C
        target = np.array(counts, dtype=float) / C
        metrics["protocol"] = {
            "C": C,
            "target": format_vector([Fraction(c, C) for c in counts]),
            "linf_gap": float(np.abs(empirical_csp(tr) - target).max()),
            "bound": protocol_bound(game.m, game.n, T),
        }
    nsr_V = np.array([[float(a) for a in v] for v in nsr.vertices])
    return metrics, tr, _curve_rows(game, tr, reg, swap, nsr_V)


def cmd_sim_run(args) -> int:
    from .sim import transcript_csv

    try:
        config = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{args.config}: {exc}") from exc
    try:
        metrics, tr, curves = simulate(config, Path(args.config).parent)
    except (KeyError, TypeError) as exc:
        raise InputError(f"bad config: {exc}") from exc
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    game = _config_game(config["game"], Path(args.config).parent)
    files = []
    p = out / "metrics.json"
    p.write_text(json.dumps(metrics, indent=2) + "\n")
    files.append(p)
    p = out / "curves.csv"
    p.write_text("t,regret_per_round,swap_regret_per_round,distance_to_nsr\n"
                 + "".join(f"{t},{a!r},{b!r},{c!r}\n" for t, a, b, c in curves))
    files.append(p)
    if config.get("write_transcript", True):
        p = out / "transcript.csv"
        p.write_text(transcript_csv(game, tr))
        files.append(p)
    write_manifest(out / "manifest.json", " ".join(args.argv), [args.config], files,
                   metrics["seed"])
    sys.stdout.write(json.dumps(metrics, indent=2) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# report


def cmd_report_bundle(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    games = [by_name(n) for n in args.games] if args.games else corpus()
    files, summary = [], []
    for g in games:
        name = g.name or f"game{len(summary)}"
        entry = {"game": name, "valid": validate(g).valid, "menus": {}}
        kinds = ["nr", "nsr"] + (["mb"] if (g.m, g.n) == (2, 3) else [])
        for kind in kinds:
            menu = build_menu(g, kind, args.jobs)
            p = out / f"{name}.{kind}.json"
            p.write_text(dumps_menu(menu) + "\n")
            files.append(p)
            verdict = check_pareto_optimal(menu)
            entry["menus"][kind] = {"vertices": len(menu.vertices), "optimal": verdict.optimal,
                                    "reason": verdict.reason}
        summary.append(entry)
    p = out / "summary.json"
    p.write_text(json.dumps(summary, indent=2) + "\n")
    files.append(p)
    write_manifest(out / "manifest.json", " ".join(args.argv), [], files)
    sys.stdout.write(json.dumps(summary, indent=2) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="menuforge", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("--jobs", type=int, default=None,
                    help="worker processes (default: $MENUFORGE_JOBS or 1)")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS)
    sub = ap.add_subparsers(dest="group", required=True)

    g = sub.add_parser("game").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("validate", parents=[common])
    p.add_argument("path")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_game_validate)

    m = sub.add_parser("menu").add_subparsers(dest="cmd", required=True)
    p = m.add_parser("build", parents=[common])
    p.add_argument("path")
    p.add_argument("--kind", required=True, help="nr | nsr | mb | fixed:<j>")
    p.add_argument("--out")
    p.add_argument("--halfspaces", action="store_true")
    p.set_defaults(fn=cmd_menu_build)
    p = m.add_parser("check-valid", parents=[common])
    p.add_argument("menu")
    p.add_argument("--grid", type=int, required=True)
    p.add_argument("--game")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_menu_check_valid)

    p = sub.add_parser("pareto", parents=[common])
    p.add_argument("mode", choices=["check", "falsify", "audit"])
    p.add_argument("--menu")
    p.add_argument("--winner")
    p.add_argument("--loser")
    p.add_argument("--candidate")
    p.add_argument("--baseline")
    p.add_argument("--game", help="game file for menus that do not embed one")
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=400)
    p.add_argument("--dominating-out")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_pareto)

    s = sub.add_parser("sim").add_subparsers(dest="cmd", required=True)
    p = s.add_parser("run", parents=[common])
    p.add_argument("config")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_sim_run)

    r = sub.add_parser("report").add_subparsers(dest="cmd", required=True)
    p = r.add_parser("bundle", parents=[common])
    p.add_argument("--out", required=True)
    p.add_argument("games", nargs="*")
    p.set_defaults(fn=cmd_report_bundle)
    return ap


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    args.argv = ["menuforge"] + argv
    if args.jobs is not None:
        os.environ["MENUFORGE_JOBS"] = str(args.jobs)
    try:
        return args.fn(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (GameError, MenuError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
