"""Точка входа: генерация экземпляров, решение релаксаций, прогон набора, экспорт LP."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from pydantic import ValidationError

from .config import settings
from .constants import EXPERIMENT_RELAXATIONS
from .core.lp import LinearModel, Separator
from .errors import FracxError
from .logging_config import setup_logging
from .models import BilinearFractionalProgram, FractionalProgram, SuiteConfig, UnivariateInstance

logger = logging.getLogger(__name__)

ALL_RELAXATIONS = sorted({r for names in EXPERIMENT_RELAXATIONS.values() for r in names} | {"BILINEAR"})


def parse_seeds(text: str) -> list[int]:
    """«0-29», «1,5,7» или их смесь «0-4,10»."""
    seeds: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            lo, hi = part.split("-", 1)
            seeds.extend(range(int(lo), int(hi) + 1))
        else:
            seeds.append(int(part))
    return seeds


def pair_sizes(ns: list[int], ms: list[int]) -> list[tuple[int, int]]:
    """--n и --m попарно; одиночное значение распространяется на все."""
    if len(ms) == 1:
        ms = ms * len(ns)
    if len(ns) == 1:
        ns = ns * len(ms)
    if len(ns) != len(ms):
        raise ValueError(f"--n ({len(ns)}) и --m ({len(ms)}) разной длины")
    return list(zip(ns, ms))


def build_model(
    instance: FractionalProgram | UnivariateInstance | BilinearFractionalProgram,
    relaxation: str,
    k: int = 1,
) -> tuple[LinearModel, list[Separator]]:
    """Модель и отсечения релаксации для экземпляра любого типа."""
    from .core.bilinear import build_bilinear_frac
    from .core.program import compute_bounds, validate_program
    from .core.suite import RELAXATION_BUILDERS
    from .core.univariate import build_uni_mc, build_uni_mh

    relaxation = relaxation.upper()
    if isinstance(instance, BilinearFractionalProgram):
        if relaxation != "BILINEAR":
            raise FracxError(f"для билинейной дроби доступна только BILINEAR, получено {relaxation}")
        return build_bilinear_frac(instance)
    if isinstance(instance, UnivariateInstance):
        if relaxation == "UNI-MC":
            return build_uni_mc(instance), []
        if relaxation == "UNI-MH":
            return build_uni_mh(instance)
        raise FracxError(f"для одномерной задачи доступны UNI-MC и UNI-MH, получено {relaxation}")
    if relaxation not in RELAXATION_BUILDERS:
        raise FracxError(f"неизвестная релаксация {relaxation}")
    validate_program(instance)
    bounds = compute_bounds(instance)
    return RELAXATION_BUILDERS[relaxation](instance, bounds, k)


def cmd_gen(args: argparse.Namespace) -> int:
    from .exporters import save_instance
    from .generators import GENERATORS

    generator = GENERATORS[args.experiment]
    instance = generator.generate(args.n[0], args.m[0], args.seed)
    if args.out:
        save_instance(instance, Path(args.out))
    else:
        print(instance.model_dump_json(indent=2))
    return 0


def cmd_solve(args: argparse.Namespace) -> int:
    from .core.lp import cutting_loop
    from .exporters import load_instance

    instance = load_instance(Path(args.instance))
    model, separators = build_model(instance, args.relaxation, args.k[0])
    solution = cutting_loop(model, separators, max_rounds=args.max_rounds, tol=args.tol).require_optimal()
    result = {
        "relaxation": model.name,
        "value": solution.objective,
        "rounds": solution.rounds,
        "cuts": solution.cuts_added,
        "rows": model.n_rows,
        "cols": model.n_cols,
    }
    if isinstance(instance, FractionalProgram) and instance.all_binary and instance.n <= settings.oracle_max_binary:
        from .core.oracle import brute_force_binary

        result["oracle"] = brute_force_binary(instance).value
    print(json.dumps(result, ensure_ascii=False, indent=2))
    return 0


def cmd_suite(args: argparse.Namespace) -> int:
    from .core.suite import run_suite

    config = SuiteConfig(
        experiment=args.experiment,
        sizes=pair_sizes(args.n, args.m),
        seeds=parse_seeds(args.seeds),
        relaxations=args.relaxations or [],
        k=args.k,
        out=Path(args.out or "reports/report.csv"),
        tol=args.tol,
        max_rounds=args.max_rounds,
        threads=args.threads,
    )
    result = run_suite(config)
    if result.failed:
        logger.warning("Строк с ошибками: %d из %d", result.failed, len(result.rows))
    return result.exit_code


def cmd_export_lp(args: argparse.Namespace) -> int:
    from .exporters import export_lp, load_instance, write_lp

    instance = load_instance(Path(args.instance))
    model, _ = build_model(instance, args.relaxation, args.k[0])
    if args.out:
        write_lp(model, Path(args.out))
    else:
        sys.stdout.write(export_lp(model))
    return 0


def cmd_membership(args: argparse.Namespace) -> int:
    from .core.moments import ShiftVector, conv_G_membership, moment_membership

    if args.poles:
        shifts = ShiftVector.build(args.poles, args.a, args.b, r0=args.r0)
        verdict = conv_G_membership(args.point, shifts, tol=args.tol)
    else:
        verdict = moment_membership(args.point, args.a, args.b, cone=args.cone, tol=args.tol)
    print(json.dumps({
        "inside": verdict.inside,
        "min_eig": verdict.min_eig,
        "block": verdict.block,
        "witness": [float(v) for v in verdict.witness],
    }, ensure_ascii=False, indent=2))
    return 0


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(description="Релаксации дробных программ")
    parser.add_argument("-v", "--verbose", action="store_true", help="Подробный вывод (DEBUG)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--tol", type=float, default=None, help="Порог нарушения отсечения")
        p.add_argument("--max-rounds", type=int, default=None, help="Лимит раундов отсечений")
        p.add_argument("--k", type=int, nargs="+", default=[1], help="Уровни k для KTERM")

    gen = sub.add_parser("gen", help="Сгенерировать экземпляр")
    gen.add_argument("--experiment", choices=["uniform", "assortment", "univariate", "bilinear"], required=True)
    gen.add_argument("--n", type=int, nargs=1, default=[1])
    gen.add_argument("--m", type=int, nargs=1, default=[1])
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", default=None, help="JSON-файл (по умолчанию stdout)")
    gen.set_defaults(handler=cmd_gen)

    solve = sub.add_parser("solve", help="Решить релаксацию экземпляра")
    solve.add_argument("--instance", required=True)
    solve.add_argument("--relaxation", choices=ALL_RELAXATIONS, type=str.upper, default="LEF")
    common(solve)
    solve.set_defaults(handler=cmd_solve)

    suite = sub.add_parser("suite", help="Прогон набора экспериментов")
    suite.add_argument("--experiment", choices=list(EXPERIMENT_RELAXATIONS), required=True)
    suite.add_argument("--n", type=int, nargs="+", required=True)
    suite.add_argument("--m", type=int, nargs="+", required=True)
    suite.add_argument("--seeds", default="", help="Например 0-29 или 1,5,7")
    suite.add_argument("--relaxations", default=None, help="Через запятую: LEF,CEF,1TERM-CONIC")
    suite.add_argument("--out", default=None)
    suite.add_argument("--threads", type=int, default=None, help="Процессов (по умолчанию FRACX_THREADS)")
    common(suite)
    suite.set_defaults(handler=cmd_suite)

    export = sub.add_parser("export-lp", help="Записать модель релаксации в LP-формате")
    export.add_argument("--instance", required=True)
    export.add_argument("--relaxation", choices=ALL_RELAXATIONS, type=str.upper, default="LEF")
    export.add_argument("--out", default=None)
    common(export)
    export.set_defaults(handler=cmd_export_lp)

    member = sub.add_parser("membership", help="Принадлежность моментной оболочке")
    member.add_argument("--point", type=float, nargs="+", required=True, help="μ или (1, ν, x − r0)")
    member.add_argument("--a", type=float, default=0.0)
    member.add_argument("--b", type=float, default=1.0)
    member.add_argument("--poles", type=float, nargs="*", default=None)
    member.add_argument("--r0", type=float, default=0.0)
    member.add_argument("--cone", action="store_true", help="Проверять конус без μ0 = 1")
    member.add_argument("--tol", type=float, default=None)
    member.set_defaults(handler=cmd_membership)

    return parser.parse_args(argv)


def main(argv: list[str] | None = None) -> int:
    args = parse_args(argv)
    setup_logging(args.verbose)
    try:
        return args.handler(args)
    except (FracxError, ValidationError, ValueError) as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
