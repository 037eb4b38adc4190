#!/usr/bin/env python3
"""
mzvq - вычисление Q(4n,d) тремя способами и проверка тождеств.

Команды:
    eval       значение ζ(s_1,...,s_d) с гарантированной погрешностью
    q          Q(4n,d): формула, ряд, прямое суммирование или все сразу
    verify     наборы проверок тождеств
    series     таблица Q(4n,d)/π^{4n} из производящей функции
    ode-check  символьные проверки дифференциальных систем и разложения G_d
"""

import argparse
import csv
import io
import logging
import sys
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel

from errors import MzvqError
from exact_arith import PiRational
from identities import (
    alternating_even_sum,
    batch,
    depth2_vs_series,
    diagonal_closed_form,
    euler_alternating,
    euler_full,
    euler_product,
    gkz_even,
    q_depth2,
    q_theorem,
    theorem_vs_bruteforce,
    theorem_vs_series,
)
from mzv_numeric import ApproxReal, MzvIndex, PrecisionConfig, mzv_eval, q_bruteforce, stuffle_depth2
from ode_verify import gd_report, verify_tilde_system, verify_u_system, verify_w0_binomial
from reports import (
    RationalRecord,
    ReportRecord,
    TableRecord,
    ValueRecord,
    VerificationReport,
    format_mpf,
    fraction_pair,
    summarize,
)
from series_lab import q_rational_table, verify_division_roundtrip, verify_f_product
from settings import get_settings, setup_logging

logger = logging.getLogger("mzvq")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

# Пары (n, d) для сравнения формулы с прямым суммированием
BRUTEFORCE_PAIRS = [(3, 3), (4, 3), (5, 3), (4, 4), (5, 4), (6, 5), (6, 6)]
GD_TOLERANCE = 1e-25
# Пары (a, b) для stuffle-проверки по умолчанию
STUFFLE_PAIRS = [(4, 4), (4, 8), (8, 4), (6, 6)]


class UsageError(MzvqError):
    """Неверные аргументы командной строки."""


@dataclass
class SuiteContext:
    cfg: PrecisionConfig
    max_n: Optional[int]
    max_d: Optional[int]

    def n_or(self, default: int) -> int:
        return default if self.max_n is None else self.max_n

    def d_or(self, default: int) -> int:
        return default if self.max_d is None else self.max_d


def _suite_product(ctx: SuiteContext) -> List[VerificationReport]:
    return [euler_product(n) for n in range(2, ctx.n_or(20) + 1)]


def _suite_alternating_even(ctx: SuiteContext) -> List[VerificationReport]:
    return [alternating_even_sum(w) for w in range(2, ctx.n_or(10) + 1)]


def _suite_euler(ctx: SuiteContext) -> List[VerificationReport]:
    reports = []
    for n in range(2, ctx.n_or(6) + 1):
        reports.append(euler_alternating(n, ctx.cfg))
        reports.append(euler_full(n, ctx.cfg))
    return reports


def _suite_gkz(ctx: SuiteContext) -> List[VerificationReport]:
    return [gkz_even(n, ctx.cfg) for n in range(2, ctx.n_or(6) + 1)]


def _suite_theorem_vs_series(ctx: SuiteContext) -> List[VerificationReport]:
    max_n = ctx.n_or(10)
    max_d = min(ctx.d_or(max_n), max_n)
    if max_n < 3 or max_d < 3:
        return []
    table = q_rational_table(max_n, max_d)
    return [theorem_vs_series(n, d, table)
            for n in range(3, max_n + 1) for d in range(3, min(n, max_d) + 1)]


def _suite_theorem_vs_bruteforce(ctx: SuiteContext) -> List[VerificationReport]:
    pairs = [(n, d) for n, d in BRUTEFORCE_PAIRS
             if (ctx.max_n is None or n <= ctx.max_n) and (ctx.max_d is None or d <= ctx.max_d)]
    return [theorem_vs_bruteforce(n, d, ctx.cfg) for n, d in pairs]


def _suite_diagonal(ctx: SuiteContext) -> List[VerificationReport]:
    return [diagonal_closed_form(d) for d in range(3, ctx.d_or(ctx.n_or(10)) + 1)]


def _suite_depth2_vs_series(ctx: SuiteContext) -> List[VerificationReport]:
    max_n = ctx.n_or(10)
    if max_n < 2:
        return []
    table = q_rational_table(max_n, 2)
    return [depth2_vs_series(n, table) for n in range(2, max_n + 1)]


def _suite_stuffle(ctx: SuiteContext) -> List[VerificationReport]:
    if ctx.max_n is None:
        return [stuffle_depth2(a, b, ctx.cfg) for a, b in STUFFLE_PAIRS]
    top = ctx.max_n
    return [stuffle_depth2(a, b, ctx.cfg) for a in range(2, top + 1) for b in range(a, top + 1)]


def _suite_ode_tilde(ctx: SuiteContext) -> List[VerificationReport]:
    return verify_tilde_system(ctx.n_or(8))


def _suite_ode_u(ctx: SuiteContext) -> List[VerificationReport]:
    return verify_u_system(ctx.d_or(ctx.n_or(8)))


def _suite_gd(ctx: SuiteContext) -> List[VerificationReport]:
    samples = get_settings().gd_sample_points()
    return [gd_report(d, s, tolerance=GD_TOLERANCE)
            for d in range(ctx.d_or(4) + 1) for s in samples]


def _suite_f_product(ctx: SuiteContext) -> List[VerificationReport]:
    order = ctx.n_or(20)
    if verify_f_product(order):
        return [VerificationReport.exact("f-product", [order], None)]
    return [VerificationReport.mismatch("f-product", [order], "коэффициенты sin·sinh/(2x²) не совпали с g(x⁴)")]


def _suite_w_binomial(ctx: SuiteContext) -> List[VerificationReport]:
    return verify_w0_binomial(ctx.d_or(30))


def _suite_series_roundtrip(ctx: SuiteContext) -> List[VerificationReport]:
    return [verify_division_roundtrip(ctx.n_or(get_settings().series_order))]


SUITES: Dict[str, Callable[[SuiteContext], List[VerificationReport]]] = {
    "product": _suite_product,
    "alternating-even": _suite_alternating_even,
    "euler": _suite_euler,
    "gkz": _suite_gkz,
    "theorem-vs-series": _suite_theorem_vs_series,
    "theorem-vs-bruteforce": _suite_theorem_vs_bruteforce,
    "diagonal": _suite_diagonal,
    "depth2-vs-series": _suite_depth2_vs_series,
    "stuffle": _suite_stuffle,
    "ode-tilde": _suite_ode_tilde,
    "ode-u": _suite_ode_u,
    "gd-decomposition": _suite_gd,
    "f-product": _suite_f_product,
    "w-binomial": _suite_w_binomial,
    "series-roundtrip": _suite_series_roundtrip,
}

ODE_SUITES = ["ode-tilde", "ode-u", "w-binomial", "gd-decomposition"]


def parse_suites(raw: str) -> List[str]:
    """Список наборов из строки через запятую; 'all' - все наборы."""
    names = [part.strip() for part in raw.split(",") if part.strip()]
    if not names:
        raise UsageError("Пустой список наборов")
    if "all" in names:
        return list(SUITES)
    unknown = [name for name in names if name not in SUITES]
    if unknown:
        raise UsageError(f"Неизвестный набор проверок: {', '.join(unknown)}. Доступны: {', '.join(SUITES)}")
    return names


# ---------------------------------------------------------------------------
# Вывод


def rational_record(x: PiRational) -> RationalRecord:
    num, den = fraction_pair(x.coeff)
    return RationalRecord(num=num, den=den, pi_power=x.pi_power)


def value_record(x: ApproxReal) -> ValueRecord:
    return ValueRecord(value=format_mpf(x.value), abs_err=format_mpf(x.err, 6))


def _text_line(label: str, record: BaseModel) -> str:
    if isinstance(record, RationalRecord):
        return f"{label} = {record.num}/{record.den} · π^{record.pi_power}"
    if isinstance(record, ValueRecord):
        return f"{label} = {record.value} ± {record.abs_err}"
    return f"{label}: {record.model_dump_json()}"


def emit(records: Sequence[tuple], fmt: str, out,
         reports: Sequence[VerificationReport] = ()) -> None:
    """
    Печать пар (метка, запись) и отчетов о согласии в одном потоке.
    json - одна запись на строку, csv - одна таблица
    label,kind,num,den,pi_power,value,abs_err,passed.
    """
    if fmt == "json":
        for _, record in records:
            print(record.model_dump_json(), file=out)
        for report in reports:
            print(ReportRecord.from_report(report).model_dump_json(), file=out)
        return
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["label", "kind", "num", "den", "pi_power", "value", "abs_err", "passed"])
        for label, record in records:
            data = record.model_dump()
            writer.writerow([label, data["kind"], data.get("num", ""), data.get("den", ""),
                             data.get("pi_power", ""), data.get("value", ""), data.get("abs_err", ""), ""])
        for report in reports:
            value, err = _residual_cells(report)
            writer.writerow([report.name, "report", "", "", "", value, err, report.passed])
        out.write(buffer.getvalue())
        return
    for label, record in records:
        print(_text_line(label, record), file=out)
    if reports:
        emit_reports(list(reports), fmt, out)


def _residual_cells(report: VerificationReport) -> Tuple[str, str]:
    residual = report.residual
    return (residual, "") if isinstance(residual, str) else (residual.value, residual.abs_err)


def emit_reports(reports: List[VerificationReport], fmt: str, out) -> None:
    if fmt == "json":
        for report in reports:
            print(ReportRecord.from_report(report).model_dump_json(), file=out)
        return
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["name", "instance", "mode", "passed", "residual", "abs_err"])
        for report in reports:
            value, err = _residual_cells(report)
            writer.writerow([report.name, ";".join(str(x) for x in report.instance),
                             report.mode, report.passed, value, err])
        out.write(buffer.getvalue())
        return
    for report in reports:
        print(report.line(), file=out)
    stats = summarize(reports)
    print(f"📊 Всего: {stats['total']}, пройдено: {stats['passed']}, провалено: {stats['failed']}", file=out)


# ---------------------------------------------------------------------------
# Команды


def cmd_eval(args, cfg: PrecisionConfig, out) -> int:
    idx = MzvIndex.parse(args.index)
    value = mzv_eval(idx, cfg)
    emit([(str(idx), value_record(value))], args.format, out)
    return EXIT_OK


def _agreement(label: str, n: int, d: int, a, b) -> VerificationReport:
    if isinstance(a, PiRational) and isinstance(b, PiRational):
        return VerificationReport.exact(f"agree:{label}", [n, d], a - b)
    exact, approx = (a, b) if isinstance(a, PiRational) else (b, a)
    residual = ApproxReal.exact(exact, approx.digits) - approx
    return VerificationReport.numeric(f"agree:{label}", [n, d], residual.value, residual.err,
                                      get_settings().pass_tolerance)


def cmd_q(args, cfg: PrecisionConfig, out) -> int:
    n, d = args.n, args.d
    if not 1 <= d <= n:
        raise UsageError(f"q requires n ≥ d ≥ 1, получено n={n}, d={d}")
    if args.method == "all":
        methods = ["series", "bruteforce"]
        if d >= 3:
            methods.insert(0, "theorem")
        if d == 2:
            methods.insert(0, "depth2")
    else:
        methods = [args.method]

    results = {}
    for method in methods:
        if method == "theorem":
            results[method] = q_theorem(n, d)
        elif method == "depth2":
            if d != 2:
                raise UsageError(f"depth2 requires d = 2, получено d={d}")
            results[method] = q_depth2(n)
        elif method == "series":
            results[method] = q_rational_table(n, d).to_pi_rational(n, d)
        else:
            results[method] = q_bruteforce(n, d, cfg)

    records = []
    for method, value in results.items():
        record = rational_record(value) if isinstance(value, PiRational) else value_record(value)
        records.append((f"Q({4 * n},{d}) [{method}]", record))
    names = list(results)
    reports = [_agreement(f"{names[i]}-{names[j]}", n, d, results[names[i]], results[names[j]])
               for i in range(len(names)) for j in range(i + 1, len(names))]
    emit(records, args.format, out, reports)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


def _run_suites(names: List[str], ctx: SuiteContext, fmt: str, out) -> int:
    reports: List[VerificationReport] = []
    for name in names:
        logger.info(f"Набор проверок {name}")
        try:
            reports.extend(batch(SUITES[name](ctx)))
        except MzvqError as e:
            logger.error(f"Набор {name} прерван: {e}")
            reports.append(VerificationReport.mismatch(name, [], str(e)))
    emit_reports(reports, fmt, out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


def cmd_verify(args, cfg: PrecisionConfig, out) -> int:
    names = parse_suites("all" if args.all_suites else args.suite)
    return _run_suites(names, SuiteContext(cfg, args.max_n, args.max_d), args.format, out)


def cmd_ode_check(args, cfg: PrecisionConfig, out) -> int:
    return _run_suites(ODE_SUITES, SuiteContext(cfg, args.max_n, args.max_d), args.format, out)


def cmd_series(args, cfg: PrecisionConfig, out) -> int:
    size = get_settings().series_order
    max_n = size if args.max_n is None else args.max_n
    max_d = size if args.max_d is None else args.max_d
    table = q_rational_table(max_n, max_d)
    cells = [[table[n][d] for d in range(1, max_d + 1)] for n in range(1, max_n + 1)]
    if args.format == "json":
        record = TableRecord(max_n=max_n, max_d=max_d,
                             rows=[[fraction_pair(c) for c in row] for row in cells])
        print(record.model_dump_json(), file=out)
    elif args.format == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["n"] + [f"d={d}" for d in range(1, max_d + 1)])
        for n, row in enumerate(cells, start=1):
            writer.writerow([n] + [f"{c.numerator}/{c.denominator}" for c in row])
        out.write(buffer.getvalue())
    else:
        for n, row in enumerate(cells, start=1):
            for d, c in enumerate(row, start=1):
                print(f"c[{n}][{d}] = {c}", file=out)
    return EXIT_OK


COMMANDS = {
    "eval": cmd_eval,
    "q": cmd_q,
    "verify": cmd_verify,
    "series": cmd_series,
    "ode-check": cmd_ode_check,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--prec",
        type=float,
        default=None,
        help="Целевая абсолютная погрешность (по умолчанию из настроек, 1e-12)"
    )
    common.add_argument(
        "--format",
        choices=["text", "json", "csv"],
        default="text",
        help="Формат вывода"
    )
    common.add_argument(
        "--verbose",
        action="store_true",
        help="Подробное логирование (INFO) в stderr"
    )

    parser = argparse.ArgumentParser(
        prog="mzvq",
        description="Ограниченные суммы кратных дзета-значений Q(4n,d) и проверка тождеств"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", parents=[common], help="Значение ζ(s_1,...,s_d)")
    p_eval.add_argument("index", help="Индекс через запятую, например 4,4")

    p_q = sub.add_parser("q", parents=[common], help="Q(4n,d)")
    p_q.add_argument("--n", type=int, required=True, help="Вес 4n задается через n")
    p_q.add_argument("--d", type=int, required=True, help="Глубина")
    p_q.add_argument(
        "--method",
        choices=["theorem", "series", "bruteforce", "depth2", "all"],
        default="all",
        help="Способ вычисления (по умолчанию все применимые)"
    )

    for name, help_text in (("verify", "Наборы проверок тождеств"),
                            ("ode-check", "Проверки дифференциальных систем и G_d")):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name == "verify":
            p.add_argument("--suite", default="all",
                           help=f"Наборы через запятую или all: {', '.join(SUITES)}")
            p.add_argument("--all", dest="all_suites", action="store_true",
                           help="Все наборы, то же что --suite all")
        p.add_argument("--max-n", type=int, default=None, help="Верхняя граница по n")
        p.add_argument("--max-d", type=int, default=None, help="Верхняя граница по d")

    p_series = sub.add_parser("series", parents=[common], help="Таблица Q(4n,d)/π^{4n}")
    p_series.add_argument("--max-n", type=int, default=None, help="Максимальное n")
    p_series.add_argument("--max-d", type=int, default=None, help="Максимальное d")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    setup_logging("INFO" if args.verbose else None)
    try:
        cfg = PrecisionConfig.from_target(args.prec)
        return COMMANDS[args.command](args, cfg, sys.stdout)
    except (MzvqError, ValueError) as e:
        logger.debug("Ошибка выполнения команды", exc_info=True)
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
