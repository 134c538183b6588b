"""
Command-line interface for the Steinberg character calculator

Subcommands: char, verify, table, length, hecke-mul, euler, unipotent.
Command output goes to stdout in text, JSON or CSV; logs go to stderr.
Exit codes: 0 success, 1 verification failure, 2 usage or parse error.
"""

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import yaml
from loguru import logger

from config_manager import ApplicationConfig, config_manager
from pipeline_manager import PipelineOptions, VerificationPipeline, parse_suites
from src.affine_weyl import affine_weyl_group
from src.errors import CalculatorError, CapExceededError, ParseError
from src.hecke_algebra import HeckeAlgebra, char_thm43, trace_T
from src.logger_config import configure_logging
from src.module_loader import ModuleLoader
from src.root_datum import RootDatum, parse_datum_descriptor
from src.steinberg_character import CharMethod, CharResult, UnipotentData, steinberg_character
from src.utils import (
    box_grid,
    calculate_result_summary,
    parse_list,
    parse_vector,
    render,
    results_to_frame,
    save_results,
)

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_USAGE = 2

COMMANDS = ("char", "verify", "table", "length", "hecke-mul", "euler", "unipotent")

# Options whose values may start with "-", as in --y -1,2
SIGNED_VALUE_OPTIONS = ("--y", "--ymin", "--ymax")


@dataclass
class RunConfig:
    """Everything a command needs; commands are deterministic given a RunConfig"""
    command: str
    datum: Optional[str] = None
    arguments: Dict[str, Any] = field(default_factory=dict)
    output_format: str = "text"
    max_rank: int = 6
    bfs_max_radius: int = 14

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ParseError("command", f"unknown command {self.command!r}")
        if self.output_format not in ("text", "json", "csv"):
            raise ParseError("format", f"unknown output format {self.output_format!r}")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        known = {key: data[key] for key in cls.__dataclass_fields__ if key in data}
        if "command" not in known:
            raise ParseError("command", "run configuration has no command")
        known["arguments"] = dict(known.get("arguments") or {})
        return cls(**known)

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=True)

    @classmethod
    def from_yaml(cls, text: str) -> "RunConfig":
        data = yaml.safe_load(text)
        if not isinstance(data, dict):
            raise ParseError("run config", "expected a mapping")
        return cls.from_dict(data)


class CommandRunner:
    """Executes one RunConfig against an ApplicationConfig"""

    def __init__(self, run: RunConfig, config: ApplicationConfig):
        self.run = run
        self.config = config
        self.exit_code = EXIT_OK

    @property
    def args(self) -> Dict[str, Any]:
        return self.run.arguments

    def datum(self) -> RootDatum:
        if not self.run.datum:
            raise ParseError("datum", "a datum descriptor such as 'A2' or 'A1:adjoint' is required")
        return parse_datum_descriptor(self.run.datum, max_rank=self.run.max_rank)

    def execute(self) -> List[Dict[str, Any]]:
        handlers: Dict[str, Callable[[], List[Dict[str, Any]]]] = {
            "char": self.cmd_char,
            "verify": self.cmd_verify,
            "table": self.cmd_table,
            "length": self.cmd_length,
            "hecke-mul": self.cmd_hecke_mul,
            "euler": self.cmd_euler,
            "unipotent": self.cmd_unipotent,
        }
        logger.debug(f"Running {self.run.command} with {self.run.to_dict()}")
        return handlers[self.run.command]()

    # -- commands -----------------------------------------------------------

    def cmd_char(self) -> List[Dict[str, Any]]:
        """Closed form, alternating sum, x_w collapse and (with a module) the Hecke trace formula"""
        datum = self.datum()
        evaluator = steinberg_character(datum)
        y = datum.check_cochar(parse_vector(self.args["y"]))
        conjugate = bool(self.args.get("conjugate"))

        closed = evaluator.closed_form(y)
        dominant = closed.dominant_y
        if dominant != y and not conjugate:
            logger.info(f"y = {y} is not dominant; evaluating at its dominant conjugate {dominant}")
        results = [
            closed,
            evaluator.alternating_sum(y, conjugate=True),
            evaluator.xw_collapse(dominant),
            evaluator.corollary34_split(y),
        ]
        module_source = self.args.get("module")
        if module_source:
            module = ModuleLoader(datum).load(module_source)
            results.append(CharResult(char_thm43(dominant, module), CharMethod.THM43, datum.descriptor, y, dominant))

        records = [result.to_dict() for result in results]
        for record in records:
            if module_source and record["method"] == CharMethod.THM43.value:
                record["module"] = str(module_source)
            if self.run.output_format != "json":
                record.pop("terms")
        values = {record["value"] for record in records}
        if len(values) != 1:
            logger.error(f"Methods disagree at y = {y}: {sorted(values)}")
            self.exit_code = EXIT_VERIFICATION_FAILED
        return records

    def cmd_verify(self) -> List[Dict[str, Any]]:
        suites = parse_suites(parse_list(self.args.get("suite", "all")))
        types = self.args.get("types")
        options = PipelineOptions(
            types=parse_list(types) if types else None,
            lattices=parse_list(self.args["lattices"]) if self.args.get("lattices") else None,
            ymax=self.args.get("ymax"),
            radius=self.args.get("radius"),
            max_rank=self.args.get("euler_max_rank"),
            stop_on_failure=bool(self.args.get("stop_on_failure")),
        )
        pipeline = VerificationPipeline(self.config, options)
        summary = pipeline.run_suites(suites)

        if self.run.output_format == "text":
            sys.stderr.write(pipeline.report() + "\n")
        if self.args.get("report"):
            Path(self.args["report"]).write_text(pipeline.report())
        if self.args.get("summary_dir"):
            pipeline.export_summary(summary, Path(self.args["summary_dir"]))

        if not summary["passed"]:
            logger.error("Verification failed")
            self.exit_code = EXIT_VERIFICATION_FAILED

        records = []
        for name, suite in summary["suites"].items():
            records.append({
                "suite": name,
                "status": suite["status"],
                "checked": suite["checked"],
                "issues": suite["issues"],
                "warnings": suite["warnings"],
                "counterexamples": summary["counterexamples"].get(name, []),
                "error": suite["error"],
            })
        return records

    def cmd_table(self) -> List[Dict[str, Any]]:
        """One row per dominant y in the box: l(y), <y, 2 rho>, tr(T_y) and phi_V(y)"""
        datum = self.datum()
        ymin, ymax = int(self.args.get("ymin", 0)), int(self.args.get("ymax", 3))
        if ymax < ymin:
            raise ParseError("ymax", f"ymax {ymax} is below ymin {ymin}")
        box_size = (ymax - ymin + 1) ** datum.rank
        cap = self.config.limits.table_max_rows
        if box_size > cap:
            raise CapExceededError("table grid size", box_size, cap)
        save_path = self.args.get("save")
        if save_path and Path(save_path).suffix not in (".csv", ".json"):
            raise ParseError("save", f"expected a .csv or .json path, got {save_path!r}")

        module = ModuleLoader(datum).load(self.args.get("module", "sign"))
        group = affine_weyl_group(datum)
        ys = [y for y in box_grid(datum.rank, ymin, ymax) if datum.is_dominant(y)]
        skipped = box_size - len(ys)
        if skipped:
            logger.info(f"Skipping {skipped} non-dominant y in the grid")

        def row(y) -> Dict[str, Any]:
            translation = group.translation(y)
            return {
                "y": list(y),
                "length": group.length(translation),
                "pairing_2rho": datum.pairing(y, datum.two_rho),
                "trace": str(trace_T(translation, module)),
                "phi": str(char_thm43(y, module)),
            }

        with ThreadPoolExecutor(max_workers=self.config.limits.max_workers) as pool:
            rows = list(pool.map(row, ys))
        logger.info(f"Built {len(rows)} table rows for {datum.descriptor} with module '{module.name}'")

        if save_path:
            frame = results_to_frame(rows)
            save_results(frame, Path(save_path), metadata={
                "datum": datum.descriptor,
                "module": module.name,
                "ymin": ymin,
                "ymax": ymax,
                "summary": calculate_result_summary(frame),
            })
        return rows

    def cmd_length(self) -> List[Dict[str, Any]]:
        datum = self.datum()
        group = affine_weyl_group(datum)
        element = group.parse(self.args["element"])
        first = group.decompose(element, prefer="first")
        last = group.decompose(element, prefer="last")
        record = {
            "element": str(element),
            "length": group.length(element),
            "reduced_word": str(first),
            "reduced_word_last": str(last),
            "omega_index": first.omega_index,
        }
        radius = self.args.get("radius")
        if radius is not None:
            limits = self.config.limits
            record["bfs_distance"] = group.length_bfs_oracle(
                element, int(radius), min(limits.bfs_max_radius, self.run.bfs_max_radius), limits.bfs_max_rank
            )
        return [record]

    def cmd_hecke_mul(self) -> List[Dict[str, Any]]:
        datum = self.datum()
        group = affine_weyl_group(datum)
        algebra = HeckeAlgebra(group)
        a, b = group.parse(self.args["a"]), group.parse(self.args["b"])
        product = algebra.basis(a) * algebra.basis(b)
        ab = group.multiply(a, b)
        return [
            {"basis": str(element), "length": group.length(element), "coefficient": str(coefficient),
             "is_ab": element == ab}
            for element, coefficient in sorted(product.items(), key=lambda item: (group.length(item[0]), str(item[0])))
        ]

    def cmd_euler(self) -> List[Dict[str, Any]]:
        datum = self.datum()
        report = steinberg_character(datum).facet_euler_check(cross_check=datum.rank <= 3)
        if not report.holds:
            logger.error(f"Signed facet count {report.signed_count} differs from {report.expected}")
            self.exit_code = EXIT_VERIFICATION_FAILED
        rows = [dict(row, datum=report.datum) for row in report.rows]
        rows.append({"datum": report.datum, "J": "total", "signed": report.signed_count,
                     "expected": report.expected, "holds": report.holds,
                     "character_value": report.character_value})
        return rows

    def cmd_unipotent(self) -> List[Dict[str, Any]]:
        datum = self.datum()
        data = parse_unipotent(datum, self.args.get("n", "1"))
        value = steinberg_character(datum).unipotent_expansion(data)
        exponent, coefficient = value.leading()
        return [{
            "datum": datum.descriptor,
            "n": list(data.n),
            "value": str(value),
            "leading_coefficient": coefficient,
            "leading_v_exponent": exponent,
        }]


def parse_unipotent(datum: RootDatum, text: str) -> UnipotentData:
    """'2' for a constant, '2,1,1' per positive root, or '1=2,2=1,3=1' keyed by 1-based root index"""
    text = str(text).strip()
    if "=" in text:
        mapping = {}
        for item in parse_list(text):
            key, _, value = item.partition("=")
            mapping[key.strip()] = value.strip()
        return UnipotentData.from_mapping(datum, mapping)
    values = parse_vector(text, field="n_alpha")
    if len(values) == 1:
        return UnipotentData.constant(datum, values[0])
    return UnipotentData(datum, values)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json", "csv"], default=None, help="output format")
    common.add_argument("--config", type=Path, help="YAML configuration file")
    common.add_argument("--run-config", type=Path, help="YAML RunConfig to execute instead of flags")
    common.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")
    common.add_argument("--max-rank", type=int, help="largest rank accepted (default from configuration)")
    common.add_argument("--bfs-max-radius", type=int, help="largest BFS radius accepted")

    parser = argparse.ArgumentParser(prog="stchar", description="Exact Steinberg character calculator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("char", parents=[common], help="character value at a split very regular element")
    p.add_argument("datum")
    p.add_argument("--y", required=True, help="cocharacter in Y-basis coordinates, e.g. 1,0")
    p.add_argument("--module", help="built-in module name or JSON module file")
    p.add_argument("--conjugate", action="store_true", help="accept non-dominant y silently")

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("suite", nargs="?", default="all", help="suite name(s), comma separated, or 'all'")
    p.add_argument("--types", help="comma separated type labels, e.g. A1,A2,B2")
    p.add_argument("--type", dest="single_type", help="a single type label")
    p.add_argument("--lattices", help="comma separated lattices (sc, adjoint)")
    p.add_argument("--ymax", type=int)
    p.add_argument("--radius", type=int)
    p.add_argument("--stop-on-failure", action="store_true")
    p.add_argument("--report", type=Path, help="write the text report here")
    p.add_argument("--summary-dir", type=Path, help="export the JSON run summary here")

    p = sub.add_parser("table", parents=[common], help="table of phi_V over a grid of dominant y")
    p.add_argument("datum")
    p.add_argument("--ymin", type=int, default=0)
    p.add_argument("--ymax", type=int, default=3)
    p.add_argument("--module", default="sign")
    p.add_argument("--save", help="also write the table to this .csv or .json file, with a .meta.json sidecar")

    p = sub.add_parser("length", parents=[common], help="Iwahori-Matsumoto length and reduced words")
    p.add_argument("datum")
    p.add_argument("element", help="'y=[1,0] w=s1' or 's0 s1 | omega=1'")
    p.add_argument("--radius", type=int, help="also report the BFS distance within this radius")

    p = sub.add_parser("hecke-mul", parents=[common], help="product T_a T_b in the Iwahori-Hecke algebra")
    p.add_argument("datum")
    p.add_argument("a")
    p.add_argument("b")

    p = sub.add_parser("euler", parents=[common], help="facet Euler identity for one datum")
    p.add_argument("datum")

    p = sub.add_parser("unipotent", parents=[common], help="expansion on a topologically unipotent element")
    p.add_argument("datum")
    p.add_argument("--n", default="1", help="'2', '2,1,1' or '1=2,2=1,3=1'")

    return parser


def run_config_from_args(args: argparse.Namespace, config: ApplicationConfig) -> RunConfig:
    excluded = {"command", "datum", "format", "config", "run_config", "log_level", "max_rank", "bfs_max_radius"}
    arguments = {key: (str(value) if isinstance(value, Path) else value)
                 for key, value in vars(args).items() if key not in excluded and value is not None}
    if args.command == "verify":
        if arguments.pop("single_type", None):
            arguments["types"] = args.single_type
        if args.max_rank is not None:
            arguments["euler_max_rank"] = args.max_rank
    max_rank = config.limits.max_rank
    if args.max_rank is not None:
        max_rank = args.max_rank if args.command != "verify" else max(max_rank, args.max_rank)
    return RunConfig(
        command=args.command,
        datum=getattr(args, "datum", None),
        arguments=arguments,
        output_format=args.format or config.output.default_format,
        max_rank=max_rank,
        bfs_max_radius=args.bfs_max_radius if args.bfs_max_radius is not None else config.limits.bfs_max_radius,
    )


def attach_signed_values(argv: Sequence[str]) -> List[str]:
    """Rewrite '--y -1,2' as '--y=-1,2' so argparse does not read the value as an option"""
    tokens = list(argv)
    joined: List[str] = []
    i = 0
    while i < len(tokens):
        token = tokens[i]
        following = tokens[i + 1] if i + 1 < len(tokens) else ""
        if token in SIGNED_VALUE_OPTIONS and following[:1] == "-" and following[1:2].isdigit():
            joined.append(f"{token}={following}")
            i += 2
            continue
        joined.append(token)
        i += 1
    return joined


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = parser.parse_args(attach_signed_values(argv))
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK

    try:
        config = config_manager.load_config(args.config)
        configure_logging(config, level=args.log_level)
        if args.run_config:
            run = RunConfig.from_yaml(args.run_config.read_text())
        else:
            run = run_config_from_args(args, config)
        config.limits.max_rank = run.max_rank
        config.limits.bfs_max_radius = run.bfs_max_radius

        runner = CommandRunner(run, config)
        records = runner.execute()
        sys.stdout.write(render(records, run.output_format).rstrip("\n") + "\n")
        return runner.exit_code

    except (CalculatorError, OSError, yaml.YAMLError) as exc:
        logger.error(str(exc))
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
