from app.env import load_env_once

# Ensure .env is loaded before the configuration is read
load_env_once()

import json
import logging
import sys
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import typer

from app.config import get_config
from app.errors import BAD_PARAMETERS, EngineError, InputError
from app.families import FamilyRegistry
from app.pipeline import analyze_pair, check_exponents, run_oracle
from app.reports import (
    analysis_report,
    attach_timings,
    exponents_report,
    families_report,
    oracle_report,
    render,
)
from app.schemas import (
    PAIR_SCHEMA,
    PROFILE_SCHEMA,
    ExponentProfileDocument,
    PairDescriptor,
    ProfileEntry,
    read_json,
    validate_document,
)

logger = logging.getLogger(__name__)

app = typer.Typer(
    name="sympair",
    help="H-integrability of matrix coefficients for symmetric pairs, in exact arithmetic.",
    add_completion=False,
    no_args_is_help=True,
)


class OutputFormat(str, Enum):
    tree = "tree"
    table = "table"


class DocumentKind(str, Enum):
    pair = "pair"
    profile = "profile"


@app.callback()
def configure(verbose: bool = typer.Option(False, "--verbose", "-v", help="Log engine stages on stderr")):
    level = "INFO" if verbose else get_config().log_level
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )


def _emit(document: Dict[str, Any], fmt: OutputFormat) -> None:
    typer.echo(render(document, fmt.value))


def _guard(action: Callable[[], None]) -> None:
    """Run a command body; engine errors become a JSON error object and an exit code."""
    try:
        action()
    except EngineError as e:
        logger.error(f"❌ {e.kind}: {e.message}")
        typer.echo(json.dumps(e.to_dict(), sort_keys=True, indent=2, default=str))
        raise typer.Exit(code=e.exit_code)


def _parse_params(pairs: List[str]) -> Dict[str, str]:
    params = {}
    for item in pairs:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise InputError(BAD_PARAMETERS, f"--param expects key=value, got {item!r}")
        params[key.strip()] = value.strip()
    return params


def _descriptor(path: Optional[Path], family: Optional[str], params: List[str]) -> PairDescriptor:
    if (path is None) == (family is None):
        raise InputError(BAD_PARAMETERS, "give exactly one of a descriptor file and --family")
    if family is not None:
        return PairDescriptor.from_document({"family": family, "params": _parse_params(params)})
    if params:
        raise InputError(BAD_PARAMETERS, "--param only applies together with --family")
    return PairDescriptor.from_document(read_json(path))


def _profile(path: Optional[Path]) -> Optional[ExponentProfileDocument]:
    if path is None:
        return None
    return ExponentProfileDocument.from_document(read_json(path))


DescriptorArg = typer.Argument(None, help="Pair descriptor JSON file", show_default=False)
FamilyOpt = typer.Option(None, "--family", "-f", help="Built-in family tag")
ParamOpt = typer.Option([], "--param", "-p", help="Family parameter as key=value (repeatable)")
FormatOpt = typer.Option(OutputFormat.tree, "--format", help="Report layout")
TimingsOpt = typer.Option(False, "--timings", help="Attach stage timings (not deterministic)")


@app.command()
def analyze(
    descriptor: Optional[Path] = DescriptorArg,
    family: Optional[str] = FamilyOpt,
    param: List[str] = ParamOpt,
    fmt: OutputFormat = FormatOpt,
    timings: bool = TimingsOpt,
):
    """Descendent system, transversal, relative test characters and the pair classification."""

    def body():
        analysis = analyze_pair(_descriptor(descriptor, family, param))
        document = analysis_report(analysis)
        _emit(attach_timings(document) if timings else document, fmt)

    _guard(body)


@app.command("check-exponents")
def check_exponents_command(
    descriptor: Optional[Path] = DescriptorArg,
    exponents: Path = typer.Option(..., "--exponents", "-e", help="Exponent profile JSON file"),
    family: Optional[str] = FamilyOpt,
    param: List[str] = ParamOpt,
    strict: bool = typer.Option(True, "--strict/--weak", help="Strict or weak relative positivity"),
    fmt: OutputFormat = FormatOpt,
    timings: bool = TimingsOpt,
):
    """H-integrability of a representation given the real parts of its exponents."""

    def body():
        pair = _descriptor(descriptor, family, param)
        document_in = _profile(exponents)
        analysis = analyze_pair(pair)
        profile, verdict = check_exponents(analysis, document_in, strict)
        for warning in verdict.warnings:
            logger.warning(warning)
        document = exponents_report(analysis, profile, verdict)
        _emit(attach_timings(document) if timings else document, fmt)

    _guard(body)


@app.command()
def oracle(
    descriptor: Optional[Path] = DescriptorArg,
    exponents: Optional[Path] = typer.Option(None, "--exponents", "-e", help="Exponent profile JSON file (default: zero exponent at J = [])"),
    family: Optional[str] = FamilyOpt,
    param: List[str] = ParamOpt,
    q: Optional[int] = typer.Option(None, "--q", help="Residue field cardinality"),
    depth: Optional[int] = typer.Option(None, "--depth", help="Terms in the numeric partial sums"),
    box: Optional[int] = typer.Option(None, "--box", help="Bound on pairing coordinates for the exact cone sums"),
    fmt: OutputFormat = FormatOpt,
    timings: bool = TimingsOpt,
):
    """Cone-lattice series oracle, cross-checked against the strict criterion."""

    def body():
        pair = _descriptor(descriptor, family, param)
        document_in = _profile(exponents)
        analysis = analyze_pair(pair)
        if document_in is None:
            zero = [0] * analysis.descendent.dim
            document_in = ExponentProfileDocument(parabolics=[ProfileEntry(J=[], exponents=[zero])])
        run = run_oracle(analysis, document_in, q=q, depth=depth, box=box)
        document = oracle_report(analysis, run)
        _emit(attach_timings(document) if timings else document, fmt)

    _guard(body)


@app.command()
def families(fmt: OutputFormat = FormatOpt):
    """List the built-in families, their parameters and the model each encodes."""
    _guard(lambda: _emit(families_report(FamilyRegistry.describe()), fmt))


@app.command()
def validate(
    document: Path = typer.Argument(..., help="JSON document to check"),
    kind: DocumentKind = typer.Option(DocumentKind.pair, "--kind", "-k", help="Which schema to check against"),
):
    """Schema-only validation of a descriptor or exponent profile."""

    def body():
        schema = PAIR_SCHEMA if kind is DocumentKind.pair else PROFILE_SCHEMA
        validate_document(read_json(document), schema)
        typer.echo(json.dumps({"valid": True, "schema": schema}, sort_keys=True, indent=2))

    _guard(body)


if __name__ == "__main__":
    app()
