"""Command-line front end.

Every command builds one report dictionary and prints it either as JSON
(``--json``) or as an indented text rendering of the same data.

Exit codes: 0 success (``analyze``: intrinsic), 10 not intrinsic,
1 a verification was refuted, 2 bad input or a rejected transform.
"""
from __future__ import annotations

import json
import math
import sys
import time
from pathlib import Path

import click

from . import __version__
from .complex import FiniteComplex, ball_statistics
from .diagram import irreducible_components, parse_diagram
from .errors import CandidateNotProper, CapExceeded, CoxToolError
from .intrinsic import build_context, check_bdg1, decide_intrinsic
from .oracle import verify_coxeter_generating_set
from .suite import COMPLEX_LIMIT, run_verify_suite
from .transforms import blow_down, compose, diagram_twist
from .words import DEFAULT_MAX_ENUM, DEFAULT_ORDER_CAP

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_INPUT = 2
EXIT_NOT_INTRINSIC = 10


def _jsonable(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in x]
        return sorted(items, key=str) if isinstance(x, (set, frozenset)) else items
    if hasattr(x, "__float__") and not isinstance(x, (bool, int, float)):
        return float(x)
    return x


def to_json(report: dict) -> str:
    return json.dumps(_jsonable(report), indent=2, sort_keys=True)


def render_text(data, indent: int = 0) -> str:
    """Stable, line-oriented rendering of a report."""
    pad = "  " * indent
    lines = []
    if isinstance(data, dict):
        for key in sorted(data):
            value = data[key]
            if isinstance(value, (dict, list)) and value:
                lines.append(f"{pad}{key}:")
                lines.append(render_text(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_scalar(value)}")
    elif isinstance(data, list):
        for item in data:
            if isinstance(item, (dict, list)) and item:
                lines.append(f"{pad}-")
                lines.append(render_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(item)}")
    else:
        lines.append(f"{pad}{_scalar(data)}")
    return "\n".join(lines)


def _scalar(x) -> str:
    if isinstance(x, bool):
        return "yes" if x else "no"
    if x is None:
        return "-"
    if x == [] or x == {}:
        return "(none)"
    return str(x)


class Reporter:
    def __init__(self, name: str, as_json: bool, **echo):
        self.as_json = as_json
        self.started = time.perf_counter()
        self.report = {"command": {"name": name, **echo}}

    def emit(self, code: int, **fields):
        self.report.update(fields)
        self.report["exit_code"] = code
        self.report["elapsed_seconds"] = round(time.perf_counter() - self.started, 3)
        data = _jsonable(self.report)
        click.echo(to_json(data) if self.as_json else render_text(data))
        sys.exit(code)

    def fail(self, exc: Exception):
        self.emit(EXIT_INPUT, error={"type": type(exc).__name__, "message": str(exc)})


def _load(path: str):
    return parse_diagram(Path(path).read_text(encoding="utf-8"))


@click.group()
@click.version_option(__version__, prog_name="coxtool")
@click.option("--max-enum", type=int, default=DEFAULT_MAX_ENUM, show_default=True,
              envvar="COXTOOL_MAX_ENUM", help="Element cap for group enumeration.")
@click.option("--order-cap", type=int, default=DEFAULT_ORDER_CAP, show_default=True,
              envvar="COXTOOL_ORDER_CAP", help="Largest element order computed before giving up.")
@click.pass_context
def main(ctx, max_enum, order_cap):
    """Intrinsic reflections of Coxeter systems."""
    ctx.obj = {"max_enum": max_enum, "order_cap": order_cap}


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--generator", "-g", required=True, help="Right-angled generator to analyze.")
@click.option("--json", "as_json", is_flag=True, help="Emit JSON.")
@click.pass_obj
def analyze(obj, file, generator, as_json):
    """Decide whether GENERATOR is an intrinsic reflection."""
    out = Reporter("analyze", as_json, file=file, generator=generator)
    try:
        M = _load(file)
        v = decide_intrinsic(M, generator, obj["max_enum"])
    except (CoxToolError, KeyError) as exc:
        out.fail(exc)
    out.emit(
        EXIT_OK if v.intrinsic else EXIT_NOT_INTRINSIC,
        verdict={
            "s": v.s,
            "verdict": v.verdict,
            "reason": v.reason,
            "component": list(v.component),
            "component_type": v.component_type,
            "candidate": v.candidate.to_dict(M) if v.candidate else None,
        },
        certificates=list(v.certificates),
    )


def _candidate(M, s, a, max_enum):
    cand = check_bdg1(build_context(M, s), a, max_enum)
    if not cand:
        raise CoxToolError(f"{a} is not a blowing-down candidate: {cand.reason}")
    return cand


def _verify_block(M, gs, max_enum):
    try:
        expected = gs.to_matrix()
    except ValueError as exc:
        return {"status": "Skipped", "reason": str(exc)}
    try:
        return verify_coxeter_generating_set(M, gs, expected, max_enum).to_dict()
    except CapExceeded as exc:
        return {"status": "Skipped", "reason": f"CapExceeded: {exc}"}


def _expected_type(gs):
    try:
        dec = irreducible_components(gs.to_matrix())
    except ValueError:
        return None
    return " x ".join(str(t) for t in dec.types)


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--generator", "-g", required=True)
@click.option("--candidate", "-c", required=True, help="The generator a of s^perp to blow down.")
@click.option("--verify", is_flag=True, help="Check the result by enumeration when W is finite.")
@click.option("--auto-twist", is_flag=True, help="Apply the diagram twist first if needed.")
@click.option("--json", "as_json", is_flag=True)
@click.pass_obj
def blowdown(obj, file, generator, candidate, verify, auto_twist, as_json):
    """Blow down GENERATOR along CANDIDATE."""
    out = Reporter("blowdown", as_json, file=file, generator=generator, candidate=candidate,
                   verify=verify, auto_twist=auto_twist)
    cap, max_enum = obj["order_cap"], obj["max_enum"]
    try:
        M = _load(file)
        cand = _candidate(M, generator, candidate, max_enum)
        if not cand.proper and auto_twist:
            M1, twist = diagram_twist(M, generator, cand, cap, max_enum)
            cand1 = _candidate(M1, generator, candidate, max_enum)
            gs = compose(blow_down(M1, generator, cand1, cap, max_enum), twist)
        else:
            gs = blow_down(M, generator, cand, cap, max_enum)
    except CandidateNotProper as exc:
        out.fail(CandidateNotProper(f"{exc}; rerun with --auto-twist or use the twist command"))
    except (CoxToolError, KeyError) as exc:
        out.fail(exc)
    fields = {"generating_set": gs.to_dict(), "derived_type": _expected_type(gs)}
    code = EXIT_OK
    if verify:
        fields["verification"] = _verify_block(M, gs, max_enum)
        if fields["verification"]["status"] == "Refuted":
            code = EXIT_REFUTED
    out.emit(code, **fields)


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--generator", "-g", required=True)
@click.option("--candidate", "-c", required=True)
@click.option("--output", "-o", type=click.Path(dir_okay=False), help="Write the twisted diagram here.")
@click.option("--json", "as_json", is_flag=True)
@click.pass_obj
def twist(obj, file, generator, candidate, output, as_json):
    """Twist the diagram so that CANDIDATE becomes proper."""
    out = Reporter("twist", as_json, file=file, generator=generator, candidate=candidate)
    cap, max_enum = obj["order_cap"], obj["max_enum"]
    try:
        M = _load(file)
        M1, gs = diagram_twist(M, generator, _candidate(M, generator, candidate, max_enum), cap, max_enum)
    except (CoxToolError, KeyError) as exc:
        out.fail(exc)
    fields = {"generating_set": gs.to_dict(), "twisted_diagram": M1.to_text().splitlines()}
    if output:
        Path(output).write_text(M1.to_text(), encoding="utf-8")
        fields["written"] = output
    out.emit(EXIT_OK, **fields)


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--json", "as_json", is_flag=True)
@click.option("--figures", type=click.Path(file_okay=False), help="Write figures to this directory.")
@click.pass_obj
def verify(obj, file, as_json, figures):
    """Run the invariant suites on the spherical subsets of a diagram."""
    out = Reporter("verify", as_json, file=file)
    try:
        M = _load(file)
        reports = run_verify_suite(M, obj["max_enum"])
    except (CoxToolError, KeyError) as exc:
        out.fail(exc)
    counts = {k: sum(r.status == k for r in reports) for k in ("Verified", "Refuted", "Skipped")}
    fields = {"checks": [r.to_dict() for r in reports], "summary": counts}
    if figures:
        from .plotting import plot_verify_orders

        rows = [(r.claim.rsplit(":", 1)[0], r.evidence["enumerated"], r.evidence["table"])
                for r in reports if r.claim.endswith(":order")]
        fields["figures"] = plot_verify_orders(rows, figures)
    out.emit(EXIT_REFUTED if counts["Refuted"] else EXIT_OK, **fields)


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--radius", type=int, default=4, show_default=True,
              help="Ball radius used when the group is infinite or large.")
@click.option("--json", "as_json", is_flag=True)
@click.option("--figures", type=click.Path(file_okay=False), help="Write figures to this directory.")
@click.pass_obj
def complex(obj, file, radius, as_json, figures):
    """Chamber, wall and root statistics of the Coxeter complex."""
    out = Reporter("complex", as_json, file=file, radius=radius)
    try:
        M = _load(file)
        dec = irreducible_components(M)
        if dec.is_spherical and dec.order <= min(COMPLEX_LIMIT, obj["max_enum"]):
            stats = {"mode": "finite", **FiniteComplex(M, obj["max_enum"]).statistics()}
        else:
            stats = {"mode": "ball", **ball_statistics(M, radius, obj["max_enum"])}
    except (CoxToolError, KeyError) as exc:
        out.fail(exc)
    fields = {"statistics": stats}
    if figures:
        from .plotting import plot_complex_statistics

        fields["figures"] = plot_complex_statistics(stats, figures)
    out.emit(EXIT_OK, **fields)


if __name__ == "__main__":
    main()
