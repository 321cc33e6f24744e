"""Command-line front end: sequences, groups, verification, derivation.

Exit codes: 0 success, 1 verification or derivation failure, 2 usage error.
All output is deterministic for a fixed precision; --seedless is accepted
for interface stability but changes nothing.
"""

from __future__ import annotations

import json as jsonlib
import sys

import click
from mpmath import mp

from .catalog import builtin_catalog, scan_s7_patterns
from .evaluator import evaluate_all, quadrature
from .family import FamilyBreak, derive_child, step_to_json, verify_identity
from .poly import NotRoughSupported, expand_series
from .recognize import AmbiguousMatch, recognize
from .rough import OEIS_IDS, mmg as build_mmg, rough_prefix


def _fmt_value(v, dps: int) -> str:
    with mp.workdps(dps + 10):
        return mp.nstr(v, dps)


def _echo_json(payload) -> None:
    click.echo(jsonlib.dumps(payload, indent=2, sort_keys=True))


@click.group()
@click.option("--precision", type=int, default=30, show_default=True,
              help="Working decimal digits.")
@click.option("--format", "fmt", type=click.Choice(["text", "json", "csv"]),
              default="text", show_default=True, help="Output format.")
@click.option("--seedless", is_flag=True,
              help="Reserved; output is always deterministic.")
@click.pass_context
def cli(ctx, precision, fmt, seedless):
    """Exact and high-precision checks for rough-number pi formulas."""
    if precision < 10:
        raise click.UsageError("--precision must be at least 10")
    ctx.obj = {"dps": precision, "fmt": fmt}


@cli.command()
@click.argument("k", type=int)
@click.option("--limit", type=int, required=True,
              help="Largest value to include.")
@click.option("--bfile", is_flag=True, help="Emit OEIS b-file lines (index value).")
@click.pass_obj
def roughs(obj, k, limit, bfile):
    """List the k-rough numbers up to LIMIT."""
    try:
        values = rough_prefix(k, limit)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    if obj["fmt"] == "json":
        _echo_json({
            "k": k,
            "limit": limit,
            "oeis": OEIS_IDS.get(k),
            "values": list(values),
        })
    elif obj["fmt"] == "csv":
        click.echo("index,value")
        for i, n in enumerate(values, start=1):
            click.echo(f"{i},{n}")
    elif bfile:
        for i, n in enumerate(values, start=1):
            click.echo(f"{i} {n}")
    else:
        for n in values:
            click.echo(n)


@cli.command("mmg")
@click.argument("k", type=int)
@click.pass_obj
def mmg_cmd(obj, k):
    """Multiplication group of residues coprime to the primorial of k."""
    try:
        group = build_mmg(k)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    if obj["fmt"] == "json":
        _echo_json({
            "k": k,
            "modulus": group.modulus,
            "order": group.order,
            "elements": list(group.elements),
        })
    elif obj["fmt"] == "csv":
        click.echo("index,element")
        for i, n in enumerate(group.elements, start=1):
            click.echo(f"{i},{n}")
    else:
        click.echo(f"modulus {group.modulus}")
        click.echo(f"order {group.order}")
        click.echo("elements " + " ".join(str(n) for n in group.elements))


def _resolve(query: str):
    try:
        return builtin_catalog().resolve(query)
    except KeyError as exc:
        raise click.UsageError(str(exc.args[0]))


@cli.command()
@click.argument("target")
@click.option("--tol", default="1e-10", show_default=True,
              help="Agreement tolerance for residue/quadrature/expected.")
@click.pass_context
def verify(ctx, target, tol):
    """Evaluate one formula (or 'all') three ways and cross-check."""
    obj = ctx.obj
    dps = obj["dps"]
    formulas = list(builtin_catalog()) if target == "all" else [_resolve(target)]
    with mp.workdps(dps + 10):
        tolerance = mp.mpf(tol)
        series_tol = max(tolerance, mp.mpf("1e-6"))
    results = []
    for f in formulas:
        report = evaluate_all(f, dps)
        results.append((report, report.passes(tolerance, series_tol)))
    if obj["fmt"] == "json":
        _echo_json([
            dict(report.to_json(), passed=ok) for report, ok in results
        ])
    elif obj["fmt"] == "csv":
        click.echo("id,passed,quadrature,series,residue,expected")
        for report, ok in results:
            cells = [
                report.formula_id,
                str(ok).lower(),
                report.to_json()["quadrature_value"] or "",
                report.to_json()["series_value"] or "",
                report.to_json()["residue_value"] or "",
                report.to_json()["expected_value"] or "",
            ]
            click.echo(",".join(cells))
    else:
        for report, ok in results:
            quad = report.quadrature_value
            line = f"{'PASS' if ok else 'FAIL'} {report.formula_id:<8}"
            if quad is not None:
                line += f" quadrature={_fmt_value(quad, 15)}"
            if report.expected_value is not None:
                line += f" expected={_fmt_value(report.expected_value, 15)}"
                line += f" delta={_fmt_value(report.deltas['quadrature_expected'], 3)}"
            if report.absences:
                line += " absent=" + ",".join(
                    f"{k}:{v}" for k, v in sorted(report.absences.items())
                )
            click.echo(line)
        passed = sum(1 for _, ok in results if ok)
        click.echo(f"{passed} passed, {len(results) - passed} failed")
    if any(not ok for _, ok in results):
        ctx.exit(1)


def _term_str(position: int, coeff: int) -> str:
    if position == 1 and abs(coeff) == 1:
        return "1"
    if abs(coeff) == 1:
        return f"1/{position}"
    return f"{abs(coeff)}/{position}"


@cli.command()
@click.argument("formula_id")
@click.option("--terms", type=int, default=16, show_default=True,
              help="Number of series terms to print.")
@click.pass_obj
def expand(obj, formula_id, terms):
    """Print the series of a formula in bracketed one-period blocks."""
    if terms < 1:
        raise click.UsageError("--terms must be positive")
    f = _resolve(formula_id)
    period = f.integrand.period
    per_block = len(expand_series(f.integrand, period).nonzero())
    blocks_needed = -(-terms // per_block)
    prefix = expand_series(f.integrand, blocks_needed * period)
    entries = prefix.nonzero()[:terms]
    if obj["fmt"] == "json":
        _echo_json({
            "id": f.id,
            "integrand": str(f.integrand),
            "terms": [[pos, coeff] for pos, coeff in entries],
        })
    elif obj["fmt"] == "csv":
        click.echo("n,coeff")
        for pos, coeff in entries:
            click.echo(f"{pos},{coeff}")
    else:
        click.echo(str(f.integrand))
        rendered_blocks = []
        for start in range(0, len(entries), per_block):
            block = entries[start:start + per_block]
            parts = []
            for pos, coeff in block:
                term = _term_str(pos, coeff)
                if not parts:
                    parts.append(term if coeff > 0 else f"-{term}")
                else:
                    parts.append(f"{'+' if coeff > 0 else '-'} {term}")
            rendered_blocks.append("[" + " ".join(parts) + "]")
        click.echo(" + ".join(rendered_blocks))


@cli.command()
@click.argument("formula_id")
@click.option("--k", "prime_k", type=int, required=True,
              help="Prime index to excise.")
@click.pass_context
def derive(ctx, formula_id, prime_k):
    """Derive the child formula over the next rough set."""
    obj = ctx.obj
    dps = obj["dps"]
    parent = _resolve(formula_id)
    try:
        step = derive_child(parent.integrand, prime_k)
    except (FamilyBreak, NotRoughSupported) as exc:
        raise click.ClickException(str(exc))
    except ValueError as exc:
        raise click.UsageError(str(exc))
    check = verify_identity(step)
    child = step.child
    value = quadrature(child, dps=dps)
    try:
        form = recognize(value, dps=dps)
    except AmbiguousMatch:
        form = None
    match = None
    for f in builtin_catalog():
        same = (
            f.integrand.numerator == child.numerator
            and f.integrand.denom_sign == child.denom_sign
            and f.integrand.period == child.period
        )
        if same:
            match = f.id
            break
    payload = {
        "step": step_to_json(step, parent_id=parent.id),
        "identity_ok": bool(check),
        "quadrature": _fmt_value(value, dps),
        "recognized": form.canonical() if form is not None else None,
        "catalog_match": match,
    }
    if obj["fmt"] == "json":
        _echo_json(payload)
    else:
        click.echo(f"parent {parent.id}: {parent.integrand}")
        click.echo(f"k {step.k}  sign {'+' if step.sign > 0 else '-'}  "
                   f"scale {step.scale}")
        click.echo(f"child period {child.period}, "
                   f"{len(child.numerator)} terms, degree {child.numerator.degree}")
        click.echo(f"identity {'PASS' if check else 'FAIL'}")
        click.echo(f"quadrature {_fmt_value(value, 15)}")
        if form is not None:
            click.echo(f"recognized {form.canonical()}")
        if match is not None:
            click.echo(f"catalog match {match}")
    if not check:
        ctx.exit(1)


@cli.command("scan-s7")
@click.pass_obj
def scan_s7(obj):
    """Brute-force the 16 period-30 sign choices and report conflicts."""
    dps = obj["dps"]
    report = scan_s7_patterns(dps)

    def signs_str(signs, denom_sign):
        return "".join("+" if s > 0 else "-" for s in signs) + (
            "/+" if denom_sign > 0 else "/-"
        )

    if obj["fmt"] == "json":
        _echo_json({
            "rows": [
                {
                    "signs": list(row.signs),
                    "denom_sign": row.denom_sign,
                    "pattern": row.pattern.pattern,
                    "block_sign": row.pattern.block_sign,
                    "value": _fmt_value(row.value, dps) if row.value is not None else None,
                    "recognized": row.recognized.canonical() if row.recognized else None,
                    "note": row.note,
                }
                for row in report.rows
            ],
            "conflicts": [c._asdict() for c in report.conflicts],
            "value_matches": report.value_matches,
            "pattern_matches": report.pattern_matches,
        })
    elif obj["fmt"] == "csv":
        click.echo("s6,s10,s12,denom,pattern,block,value,recognized,note")
        for row in report.rows:
            click.echo(",".join([
                str(row.signs[0]), str(row.signs[1]), str(row.signs[2]),
                str(row.denom_sign), row.pattern.pattern,
                row.pattern.block_sign,
                _fmt_value(row.value, dps) if row.value is not None else "",
                row.recognized.canonical() if row.recognized else "",
                row.note,
            ]))
    else:
        for row in report.rows:
            head = f"{signs_str(row.signs, row.denom_sign)}  " \
                   f"({row.pattern.pattern}){row.pattern.block_sign}"
            if row.value is None:
                click.echo(f"{head}  {row.note}")
            else:
                tail = row.recognized.canonical() if row.recognized else "unrecognized"
                click.echo(f"{head}  {_fmt_value(row.value, 15)}  -> {tail}")
        for c in report.conflicts:
            click.echo(f"conflict[{c.kind}] {c.label}: {c.detail}; {c.resolution}")


@cli.command("catalog")
@click.option("--dump", is_flag=True, help="Emit the full canonical JSON.")
@click.pass_obj
def catalog_cmd(obj, dump):
    """List the built-in formulas (or dump the catalog as JSON)."""
    cat = builtin_catalog()
    if dump:
        click.echo(cat.to_json_str(), nl=False)
        return
    if obj["fmt"] == "json":
        _echo_json([
            {
                "id": f.id,
                "family": f.family,
                "k": f.k,
                "integrand": str(f.integrand),
                "expected": f.expected.canonical() if f.expected else None,
            }
            for f in cat
        ])
    elif obj["fmt"] == "csv":
        click.echo("id,family,k,integrand,expected")
        for f in cat:
            expected = f.expected.canonical() if f.expected else ""
            click.echo(f"{f.id},{f.family},{f.k},{f.integrand},{expected}")
    else:
        for f in cat:
            expected = f.expected.canonical() if f.expected else "(none)"
            click.echo(f"{f.id:<8} k={f.k:<3} {f.integrand}  =  {expected}")


def cli_main(argv=None) -> int:
    """Run the CLI without exiting the process; returns the exit code."""
    try:
        # In non-standalone mode click returns ctx.exit codes instead of
        # raising SystemExit, so the return value carries the status.
        rv = cli.main(args=argv, standalone_mode=False, prog_name="roughpi")
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        exc.show(file=sys.stderr)
        return 2
    except click.ClickException as exc:
        exc.show(file=sys.stderr)
        return exc.exit_code
    return rv if isinstance(rv, int) else 0


def main() -> None:
    sys.exit(cli_main())
