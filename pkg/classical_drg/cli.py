"""
Command-line surface: every layer behind one subcommand, records written to stdout as
JSON or CSV, diagnostics and errors to stderr.
"""
import argparse
import csv
import json
import logging
import sys
import typing

from classical_drg.convergence import qclt_convergence, weak_convergence
from classical_drg.exceptions import (
    ClassicalDrgException,
    InfeasibleParameters,
    OracleError,
    UsageError,
    ValidationError,
)
from classical_drg.families import FamilyDescriptor, catalog, tail_samples
from classical_drg.fock import all_words
from classical_drg.gibbs import check_negative_powers, gibbs_distribution, gibbs_point
from classical_drg.limits import LimitRegime, Preset, PresetName, classify, family_closed_form, limit_measure
from classical_drg.oracle.battery import BATTERY, run_battery
from classical_drg.oracle.graphs import dump_edgelist
from classical_drg.params import (
    ClassicalParams,
    feasibility_check,
    feasibility_notes,
    intersection_array,
    spectral_table,
)
from classical_drg.serializers import (
    CatalogEntrySerializer,
    ClassifyInputSerializer,
    ClassicalParamsSerializer,
    ConvergeInputSerializer,
    ConvergenceRowSerializer,
    DiscreteMeasureSerializer,
    GibbsInputSerializer,
    GibbsPointSerializer,
    GlobalOptionsSerializer,
    IntersectionArraySerializer,
    LimitInputSerializer,
    LimitRegimeSerializer,
    OracleInputSerializer,
    OracleReportSerializer,
    OutputRecordSerializer,
    ParamsInputSerializer,
    PsdCheckInputSerializer,
    QcltInputSerializer,
    QcltRowSerializer,
    RegimeReportSerializer,
    SpectralTableSerializer,
)
from classical_drg.settings import CSV, Config, set_global_config

__all__ = (
    "build_parser",
    "run",
    "main",
)

logger = logging.getLogger(__name__)

COMMANDS = ("params", "gibbs", "psd-check", "limit", "classify", "converge", "qclt", "oracle", "families")
_GLOBAL_OPTIONS = ("tol", "prec", "jmax", "jmin", "fmt", "seed")


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        raise UsageError(message)


def _common_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--tol", help="comparison tolerance (default 1e-10)")
    parser.add_argument("--prec", help="truncation eps for infinite products (default 1e-14)")
    parser.add_argument("--jmax", help="largest atom label of a limit measure (default 40)")
    parser.add_argument("--jmin", help="smallest atom label of a two-sided measure (default -12)")
    parser.add_argument("--format", dest="fmt", help="json (default) or csv")
    parser.add_argument("--seed", help="seed for randomized checks (default 0)")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="log to stderr, twice for debug")
    return parser


def _params_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--d", required=True, help="diameter")
    parser.add_argument("--b", required=True, help="base, a nonzero integer")
    parser.add_argument("--alpha", required=True, help="rational, e.g. 2 or 1/3")
    parser.add_argument("--beta", required=True, help="rational")
    return parser


def _family_parser(d_list: bool = True) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--family", required=True, help="family name, see `families`")
    parser.add_argument("--q", required=True, help="base q (or r) of the family")
    parser.add_argument("--n", help="fixed n of Grassmann-type or paired families")
    parser.add_argument("--e", help="fixed e of bilinear forms graphs")
    parser.add_argument("--delta", help="n = 2d + 2 delta - 1 (Grassmann), e = d + 2 delta (bilinear)")
    parser.add_argument("--epsilon", help="n = 2d + epsilon for paired families")
    parser.add_argument("--kind", help="dual polar type: C, B, D, 2D, 2A_even, 2A_odd")
    if d_list:
        parser.add_argument("--d-list", dest="d_list", required=True, help="comma-separated diameters")
    parser.add_argument("--t-rule", dest="t_rule", required=True, help="zero, const:<t> or power:<slope>[,<intercept>]")
    parser.add_argument("--parity", help="subnet: d_even, d_odd, n_even or n_odd")
    return parser


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    params = _params_parser()
    family = _family_parser()

    parser = _Parser(prog="classical-drg", description="Spectral theory of distance-regular graphs "
                                                      "with classical parameters.")
    subparsers = parser.add_subparsers(dest="command", parser_class=_Parser)

    subparsers.add_parser("params", parents=[common, params], help="intersection array and spectral table")

    gibbs = subparsers.add_parser("gibbs", parents=[common, params], help="Gibbs state and its distribution")
    gibbs.add_argument("--t", required=True, help="rational t")

    psd = subparsers.add_parser("psd-check", parents=[common, params], help="K_t >= 0 at t = b^-i")
    psd.add_argument("--i-max", dest="i_max", help="largest i (default 6)")

    limit = subparsers.add_parser("limit", parents=[common], help="limit measure of a preset or a regime")
    limit.add_argument("--preset", help=", ".join(name.value for name in PresetName))
    limit.add_argument("--q", help="base q (or r) of the preset")
    limit.add_argument("--delta", help="Grassmann / bilinear shape")
    limit.add_argument("--epsilon", help="half dual polar shape, 0 or 1")
    limit.add_argument("--sign", help="subnet of b = -r presets, +1 (d odd) or -1")
    limit.add_argument("--e", help="dual polar type exponent")
    limit.add_argument("--parity", help="n_even / n_odd (alternating), d_even / d_odd (dual polar)")
    limit.add_argument("--kind", help="regime kind: case_i_rho, case_i_alpha_over_rho, case_ii")
    limit.add_argument("--b", help="regime base")
    limit.add_argument("--alpha", help="regime alpha")
    limit.add_argument("--rho", help="regime rho")
    limit.add_argument("--eta", help="regime eta (rho = 0)")
    limit.add_argument("--gamma", help="limit of t sqrt(k), default 0")
    limit.add_argument("--derived-gamma", dest="derived_gamma", action="store_true",
                       help="use the gamma of the t = b^-d schedule of the preset")

    regime = subparsers.add_parser("classify", parents=[common, _family_parser(d_list=False)],
                                   help="limit regime of a family from its far members")
    regime.add_argument("--depth", help="smallest far diameter sampled (default 120)")

    subparsers.add_parser("converge", parents=[common, family], help="finite distributions against the limit")

    qclt = subparsers.add_parser("qclt", parents=[common, family], help="finite mixed moments against the limit")
    qclt.add_argument("--words", help="comma-separated words over + - o (default: all of length <= 4)")
    qclt.add_argument("--truncation", help="Fock space levels kept on the limit side (default 12)")

    oracle = subparsers.add_parser("oracle", parents=[common], help="brute-force equivalence report")
    oracle.add_argument("--name", help=f"one of {', '.join(BATTERY)} or all")
    oracle.add_argument("--dump", help="write the edge list of the built graph to this path")

    subparsers.add_parser("families", parents=[common], help="list families and limit presets")
    return parser


def _validate(serializer_class, data: dict) -> dict:
    serializer = serializer_class(data=data)
    serializer.is_valid(raise_exception=True)
    return serializer.validated_data


def _inputs(args: argparse.Namespace) -> dict:
    """Echo of the given command arguments, exactly as typed"""
    skip = set(_GLOBAL_OPTIONS) | {"command", "verbose"}
    return {key: value for key, value in vars(args).items() if key not in skip and value not in (None, False)}


def _config(args: argparse.Namespace) -> Config:
    options = _validate(GlobalOptionsSerializer, {name: getattr(args, name) for name in _GLOBAL_OPTIONS})
    try:
        return Config.from_env(**options)
    except AssertionError as e:
        raise ValidationError({"error": str(e)})


def _cp(data: dict) -> ClassicalParams:
    return ClassicalParams.build(data["d"], data["b"], data["alpha"], data["beta"])


def _params(args, conf: Config) -> dict:
    cp = _cp(_validate(ParamsInputSerializer, _inputs(args)))
    ia = intersection_array(cp)
    st = spectral_table(cp, ia)
    return {
        "cp": ClassicalParamsSerializer(cp).data,
        "intersection_array": IntersectionArraySerializer(ia).data,
        "spectral_table": SpectralTableSerializer(st).data,
        "feasibility": feasibility_check(cp),
        "notes": feasibility_notes(cp, st),
    }


def _gibbs(args, conf: Config) -> dict:
    data = _validate(GibbsInputSerializer, _inputs(args))
    cp = _cp(data)
    st = spectral_table(cp)
    gp = gibbs_point(cp, st, data["t"])
    # zero variance leaves the state well defined but the normalized distribution undefined
    mu = gibbs_distribution(cp, st, gp.t, gp) if gp.variance > 0 else None
    return {
        "gibbs_point": GibbsPointSerializer(gp).data,
        "in_pi": min(gp.kt_spectrum) >= 0,
        "measure": DiscreteMeasureSerializer(mu).data if mu is not None else None,
    }


def _psd_check(args, conf: Config) -> dict:
    data = _validate(PsdCheckInputSerializer, _inputs(args))
    violations = check_negative_powers(_cp(data), data["i_max"])
    return {"i_max": data["i_max"], "violations": violations, "passed": not violations}


def _limit(args, conf: Config) -> dict:
    data = _validate(LimitInputSerializer, _inputs(args))
    if data["preset"] is not None:
        preset = Preset(
            name=data["preset"],
            base=data["q"],
            delta=data["delta"] if data["delta"] is not None else 0,
            epsilon=data["epsilon"],
            sign=data["sign"],
            e=data["e"],
            parity=data["parity"],
        )
        gamma = preset.derived_gamma() if data["derived_gamma"] else (data["gamma"] or 0.0)
        regime = preset.regime(gamma)
        mu = family_closed_form(preset, gamma, conf.jmin, conf.jmax, conf.prec)
    else:
        regime = LimitRegime(
            kind=data["kind"],
            b=data["b"],
            alpha=data["alpha"],
            gamma=data["gamma"] or 0.0,
            rho=data["rho"],
            eta=data["eta"],
        )
        mu = limit_measure(regime, conf.jmin, conf.jmax, conf.prec)
    return {"regime": LimitRegimeSerializer(regime).data, "measure": DiscreteMeasureSerializer(mu).data}


def _descriptor(data: dict) -> FamilyDescriptor:
    return FamilyDescriptor(
        name=data["family"],
        base=data["q"],
        n=data["n"],
        e=data["e"],
        delta=data["delta"],
        epsilon=data["epsilon"],
        kind=data["kind"],
    )


def _classify(args, conf: Config) -> dict:
    data = _validate(ClassifyInputSerializer, _inputs(args))
    depth = data["depth"] or conf.far_diameter
    report = classify(tail_samples(_descriptor(data), data["t_rule"], data["parity"], depth))
    return {"depth": depth, "report": RegimeReportSerializer(report).data}


def _converge(args, conf: Config) -> dict:
    data = _validate(ConvergeInputSerializer, _inputs(args))
    rows = weak_convergence(_descriptor(data), data["d_list"], data["t_rule"], data["parity"], conf)
    return {"rows": ConvergenceRowSerializer(many=True).dump(rows)}


def _qclt(args, conf: Config) -> dict:
    data = _validate(QcltInputSerializer, _inputs(args))
    words = data["words"] or list(all_words(4))
    rows = qclt_convergence(
        _descriptor(data),
        data["d_list"],
        data["t_rule"],
        words=words,
        parity=data["parity"],
        conf=conf,
        truncation=data["truncation"],
    )
    return {"rows": QcltRowSerializer(many=True).dump(rows)}


def _oracle(args, conf: Config) -> dict:
    data = _validate(OracleInputSerializer, _inputs(args))
    names = list(BATTERY) if data["name"] == "all" else [data["name"]]
    if data["dump"] is not None:
        if len(names) != 1:
            raise UsageError("--dump needs a single battery instance")
        dump_edgelist(BATTERY[names[0]].build(conf), data["dump"])
    reports = run_battery(names, conf)
    return {
        "rows": OracleReportSerializer(many=True).dump(reports),
        "passed": all(report.passed for report in reports),
    }


def _families(args, conf: Config) -> dict:
    return {
        "rows": CatalogEntrySerializer(many=True).dump(catalog()),
        "presets": [name.value for name in PresetName],
    }


_HANDLERS = {
    "params": _params,
    "gibbs": _gibbs,
    "psd-check": _psd_check,
    "limit": _limit,
    "classify": _classify,
    "converge": _converge,
    "qclt": _qclt,
    "oracle": _oracle,
    "families": _families,
}


def _exit_code(command: str, payload: dict) -> int:
    """Nonzero when the record is complete but reports a failed check"""
    if command == "params" and payload["feasibility"]:
        logger.warning("infeasible parameters: %s", "; ".join(payload["feasibility"]))
        return InfeasibleParameters.exit_code
    if command == "oracle" and not payload["passed"]:
        logger.warning("brute-force values disagree with the formulas")
        return OracleError.exit_code
    return 0


def _flatten(value, prefix: str = "") -> typing.Iterator[typing.Tuple[str, typing.Any]]:
    if isinstance(value, dict):
        if {"num", "den", "float"} == value.keys():
            yield prefix, f"{value['num']}/{value['den']}"
            return
        for key, item in value.items():
            yield from _flatten(item, f"{prefix}.{key}" if prefix else str(key))
    elif isinstance(value, list):
        for index, item in enumerate(value):
            yield from _flatten(item, f"{prefix}.{index}" if prefix else str(index))
    else:
        yield prefix, value


def write_csv(record: dict, stream: typing.TextIO) -> None:
    """Measures one atom/mass pair per row, tables one row per entry, anything else as key,value rows"""
    payload = record["payload"]
    writer = csv.writer(stream)
    measure = payload.get("measure") if isinstance(payload, dict) else None
    if measure:
        writer.writerow(["label", "atom", "mass"])
        writer.writerows(zip(measure["labels"], measure["atoms"], measure["masses"]))
        return
    rows = payload.get("rows") if isinstance(payload, dict) else None
    if rows:
        flat_rows = [dict(_flatten(row)) for row in rows]
        header = list(dict.fromkeys(key for row in flat_rows for key in row))
        dict_writer = csv.DictWriter(stream, fieldnames=header)
        dict_writer.writeheader()
        dict_writer.writerows(flat_rows)
        return
    writer.writerow(["key", "value"])
    writer.writerows(_flatten(payload))


def _configure_logging(verbosity: int, stream: typing.TextIO) -> None:
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    root = logging.getLogger("classical_drg")
    root.handlers = []
    handler = logging.StreamHandler(stream)
    handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
    root.addHandler(handler)
    root.setLevel(level)


def _report_error(error: ClassicalDrgException, stream: typing.TextIO) -> int:
    detail = error.detail if isinstance(error, ValidationError) else {"error": error.message}
    json.dump(detail, stream)
    stream.write("\n")
    return error.exit_code


def run(
    argv: typing.Sequence[str],
    stdout: typing.Optional[typing.TextIO] = None,
    stderr: typing.Optional[typing.TextIO] = None,
) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(list(argv))
        if args.command is None:
            raise UsageError(f"missing subcommand, one of {', '.join(COMMANDS)}")
        _configure_logging(args.verbose, stderr)
        conf = _config(args)
        set_global_config(conf)
        payload = _HANDLERS[args.command](args, conf)
        record = OutputRecordSerializer({"command": args.command, "inputs": _inputs(args), "payload": payload}).data
    except ClassicalDrgException as e:
        logger.debug("%s failed", " ".join(argv), exc_info=True)
        return _report_error(e, stderr)
    finally:
        set_global_config(None)

    if conf.fmt == CSV:
        write_csv(record, stdout)
    else:
        json.dump(record, stdout, indent=2)
        stdout.write("\n")
    return _exit_code(args.command, payload)


def main() -> None:
    sys.exit(run(sys.argv[1:]))
