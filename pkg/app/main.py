"""
Командная строка: construct, verify, cover, casolo, gheri, table, scan.

Отчет (JSON или текст) печатается в stdout либо пишется в --out; журнал идет в stderr.
Коды выхода: 0 - успех, 1 - ошибка конфигурации, 2 - найден контрпример, 3 - превышен бюджет.
"""
from pathlib import Path
from typing import Any, List, Optional, Tuple
import argparse
import json
import logging
import sys

from pydantic import BaseModel, ValidationError

from app import __version__
from app.config import settings
from app.dependencies import get_settings
from app.exceptions import SylowToolError, UsageError
from app.metrics import write_metrics
from app.models import CoverMethod, ExitCode, OutputFormat, Provenance, SearchMode
from app.schemas import ErrorResponse, RunConfig, ScanConfig
from app.services import pipeline

logger = logging.getLogger(__name__)

MAX_TABLE_PRIME = 101


class ArgumentParser(argparse.ArgumentParser):
    """Ошибки разбора превращаются в UsageError (код выхода 1)"""

    def error(self, message):
        raise UsageError(message)


def _add_provenance(parser: argparse.ArgumentParser):
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--thm1", dest="provenance", action="store_const", const=Provenance.THM1,
                       help="регулярный модуль над GF(q) по модулю тривиального")
    group.add_argument("--thm2", dest="provenance", action="store_const", const=Provenance.THM2,
                       help="сумма p+1 одномерных модулей над GF(q_min)")


def build_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.JSON.value)
    common.add_argument("--out", default=None, help="файл для отчета")
    common.add_argument("--metrics-out", default=None, help="файл для метрик Prometheus (\"-\" - stderr)")
    common.add_argument("--log-level", default=None)

    instance = ArgumentParser(add_help=False)
    _add_provenance(instance)
    instance.add_argument("--group", default=None, help="имя группы: C2^2, C4xC2, D8, Q8, Heis3, ...")
    instance.add_argument("--group-file", default=None, help="JSON с таблицей умножения")
    instance.add_argument("--q", type=int, default=None)
    instance.add_argument("--ceiling", type=int, default=None, help="потолок перечисления силовских подгрупп")
    instance.add_argument("--budget", type=int, default=None, help="бюджет узлов точного поиска")

    search = ArgumentParser(add_help=False)
    search.add_argument("--method", choices=[m.value for m in CoverMethod], default=CoverMethod.ALL.value)
    search.add_argument("--mode", choices=[m.value for m in SearchMode], default=SearchMode.EXACT.value)

    parser = ArgumentParser(prog="sylow-tool", description="Избыточные силовские подгруппы в G = N x| P")
    parser.add_argument("--version", action="version", version=__version__)
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser("construct", parents=[common, instance], help="построить экземпляр и базовый отчет")
    commands.add_parser("verify", parents=[common, instance, search], help="полный набор проверок")
    cover = commands.add_parser("cover", parents=[common, instance, search], help="покрытия G_p")
    cover.add_argument("--pair", type=int, default=None, help="номер пары (N_{2i-1}, N_{2i}) для общей трансверсали")
    commands.add_parser("casolo", parents=[common, instance], help="тождество Казоло")
    commands.add_parser("gheri", parents=[common, instance], help="неравенство Гери")

    table = commands.add_parser("table", parents=[common], help="таблица q^{p+1}")
    table.add_argument("--pmax", type=int, default=29)

    scan = commands.add_parser("scan", parents=[common], help="перебор сетки групп и q")
    _add_provenance(scan)
    scan.add_argument("--groups", nargs="*", default=[])
    scan.add_argument("--qs", nargs="*", type=int, default=[])
    scan.add_argument("--default-grid", action="store_true")
    scan.add_argument("--workers", type=int, default=None)
    scan.add_argument("--ceiling", type=int, default=None)
    return parser


def _text_lines(data: Any, prefix: str = "") -> List[str]:
    if isinstance(data, dict):
        lines = []
        for key, value in data.items():
            if isinstance(value, (dict, list)) and value and not _is_flat_list(value):
                lines.append(f"{prefix}{key}:")
                lines.extend(_text_lines(value, prefix + "  "))
            else:
                lines.append(f"{prefix}{key}: {_scalar(value)}")
        return lines
    if isinstance(data, list):
        lines = []
        for i, item in enumerate(data):
            lines.append(f"{prefix}[{i}]")
            lines.extend(_text_lines(item, prefix + "  "))
        return lines
    return [f"{prefix}{_scalar(data)}"]


def _is_flat_list(value: Any) -> bool:
    return isinstance(value, list) and all(not isinstance(v, (dict, list)) for v in value)


def _scalar(value: Any) -> str:
    if isinstance(value, list):
        return "[" + ", ".join(_scalar(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{}"
    if value is None:
        return "-"
    return str(value)


def render(report: BaseModel, fmt: OutputFormat) -> str:
    """Текстовый вид строится из того же JSON, что и машинный"""
    data = json.loads(report.model_dump_json())
    if fmt == OutputFormat.JSON:
        return json.dumps(data, indent=2, ensure_ascii=False)
    return "\n".join(_text_lines(data))


def _emit(report: BaseModel, fmt: OutputFormat, out: Optional[str]):
    text = render(report, fmt)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
        logger.info(f"Отчет записан в {out}")
    else:
        sys.stdout.write(text + "\n")


def _run_config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        group=args.group,
        group_file=args.group_file,
        q=args.q,
        provenance=args.provenance or Provenance.THM1,
        ceiling=args.ceiling,
        budget=args.budget,
        method=getattr(args, "method", CoverMethod.ALL.value),
        mode=getattr(args, "mode", SearchMode.EXACT.value),
        pair=getattr(args, "pair", None),
        output=args.out,
        format=args.format,
    )


def _dispatch(args: argparse.Namespace) -> Tuple[BaseModel, int]:
    if args.command == "table":
        if not 2 <= args.pmax <= MAX_TABLE_PRIME:
            raise UsageError(f"--pmax должно быть в пределах 2..{MAX_TABLE_PRIME}, получено {args.pmax}")
        return pipeline.run_table(args.pmax), ExitCode.OK

    if args.command == "scan":
        scan = ScanConfig(
            groups=args.groups,
            qs=args.qs,
            default_grid=args.default_grid,
            provenance=args.provenance or Provenance.THM1,
            workers=args.workers or settings.scan_workers,
            ceiling=args.ceiling,
            output=args.out,
            format=args.format,
        )
        report = pipeline.run_scan(scan, get_settings(ceiling=args.ceiling))
        failed = any(entry.findings for entry in report.entries)
        return report, ExitCode.COUNTEREXAMPLE if failed else ExitCode.OK

    run = _run_config(args)
    config = get_settings(ceiling=run.ceiling, budget=run.budget)
    if args.command == "construct":
        return pipeline.run_construct(run, config), ExitCode.OK
    if args.command == "verify":
        report = pipeline.run_verify(run, config)
        return report, ExitCode.COUNTEREXAMPLE if report.findings else ExitCode.OK
    if args.command == "cover":
        report = pipeline.run_cover(run, config)
        return report, ExitCode.COUNTEREXAMPLE if report.findings else ExitCode.OK
    if args.command == "casolo":
        report = pipeline.run_casolo(run, config)
        return report, ExitCode.OK if report.casolo_verified else ExitCode.COUNTEREXAMPLE
    report = pipeline.run_gheri(run, config)
    return report, ExitCode.OK if report.gheri.satisfied else ExitCode.COUNTEREXAMPLE


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    fmt = OutputFormat.JSON
    try:
        args = parser.parse_args(argv)
        fmt = OutputFormat(args.format)
        logging.basicConfig(
            level=(args.log_level or settings.log_level).upper(),
            stream=sys.stderr,
            format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        )
        report, exit_code = _dispatch(args)
    except SylowToolError as e:
        logger.error(f"{e.code}: {e.message}")
        _emit(ErrorResponse(error=e.code, message=e.message, exit_code=e.exit_code, details=e.details), fmt, None)
        return e.exit_code
    except ValidationError as e:
        message = "; ".join(err["msg"] for err in e.errors())
        logger.error(f"Некорректная конфигурация: {message}")
        _emit(ErrorResponse(error="ConfigError", message=message, exit_code=int(ExitCode.CONFIG_ERROR)), fmt, None)
        return int(ExitCode.CONFIG_ERROR)

    _emit(report, fmt, args.out)
    if args.metrics_out:
        write_metrics(args.metrics_out)
    return int(exit_code)


if __name__ == "__main__":
    sys.exit(main())
