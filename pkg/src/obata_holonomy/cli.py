"""Command-line front end.

Exit codes: 0 all checks passed, 2 some check failed, 3 bad configuration
or input (including click usage errors).
"""

from __future__ import annotations

import json
import sys

import click

from . import curvature, holonomy, hyper, lie, obata, suites
from .suites import Config, ConfigError

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 2, 3


class _Group(click.Group):
    """Maps usage errors to exit code 3 and command return values to exit codes."""

    def main(self, *args, standalone_mode: bool = True, **kwargs):
        try:
            rv = super().main(*args, standalone_mode=False, **kwargs)
        except click.ClickException as err:
            err.show()
            rv = EXIT_CONFIG
        except click.Abort:
            click.echo("Aborted!", err=True)
            rv = 1
        if not standalone_mode:
            return rv
        sys.exit(rv if isinstance(rv, int) else 0)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _config_error(err: Exception) -> int:
    click.echo(f"config error: {err}", err=True)
    return EXIT_CONFIG


def _resolve(config_path, **flags) -> Config:
    file_values = suites.read_config_file(config_path) if config_path else {}
    return suites.resolve(file_values, **flags)


_common = [
    click.option("--format", "fmt", type=str, default=None, help="json (default) or text."),
    click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write here instead of stdout."),
    click.option("--config", "config_path", type=click.Path(), default=None,
                 help="Plain key=value file; flags win."),
]
_transport_opts = [
    click.option("--loops", type=int, default=None, help="Number of sampled loops (default 200)."),
    click.option("--scale", type=float, default=None, help="Loop scale eps in (0, 0.5] (default 0.1)."),
    click.option("--seed", type=int, default=None, help="Seed for random vectors and loops (default 0)."),
    click.option("--tolerance", type=float, default=None, help="Relative rank threshold (default 1e-6)."),
]


def _apply(opts):
    def deco(f):
        for o in reversed(opts):
            f = o(f)
        return f
    return deco


@click.group(cls=_Group)
def cli():
    """Exact verification of the Obata connection on SU(3) and its holonomy."""


@cli.command()
@click.option("--suite", type=str, default=None,
              help="all, or one of: " + ", ".join(suites.SUITES))
@_apply(_transport_opts)
@_apply(_common)
def verify(suite, loops, scale, seed, tolerance, fmt, out, config_path):
    """Run check suites and print a report."""
    try:
        cfg = _resolve(config_path, suite=suite, loops=loops, scale=scale, seed=seed,
                       tolerance=tolerance, format=fmt, out=out)
    except ConfigError as err:
        return _config_error(err)
    rep, code = suites.run_suite(cfg)
    _emit(rep.to_json() if cfg.format == "json" else rep.to_text(), cfg.out)
    return code


@cli.command(name="holonomy")
@click.option("--method", type=str, default="nomizu", help="Only 'nomizu' is available.")
@_apply(_common)
def holonomy_cmd(method, fmt, out, config_path):
    """Holonomy algebra by Nomizu closure and its identification with gl(2,H)."""
    try:
        if method != "nomizu":
            raise ConfigError(f"unknown method {method!r}")
        cfg = _resolve(config_path, format=fmt, out=out)
    except ConfigError as err:
        return _config_error(err)
    H, C = suites.joyce()
    hol = suites.joyce_holonomy()
    rep = holonomy.identify_gl2h(hol, H, C)
    summary = {
        "dim": hol.dim,
        "commutant_dim": holonomy.commutant(list(H.structures.values()), H.dim).dim,
        "equals_commutant": rep["holonomy.equals_gl2H"].status == "pass",
        "hol_in_commutant": rep["holonomy.hol_in_commutant"].status == "pass",
        "commutant_in_hol": rep["holonomy.commutant_in_hol"].status == "pass",
        "invariant_tensor_dims": holonomy.invariant_profile(hol),
        "report": rep.to_dict(),
    }
    if cfg.format == "json":
        text = json.dumps(summary, indent=2, sort_keys=True) + "\n"
    else:
        lines = [f"dim: {summary['dim']}", f"commutant_dim: {summary['commutant_dim']}",
                 f"equals_commutant: {summary['equals_commutant']}"]
        lines += [f"invariant {k}: {v}" for k, v in summary["invariant_tensor_dims"].items()]
        text = "\n".join(lines) + "\n" + rep.to_text()
    _emit(text, cfg.out)
    return EXIT_OK if rep.ok else EXIT_FAIL


@cli.command(name="transport")
@_apply(_transport_opts)
@_apply(_common)
def transport_cmd(loops, scale, seed, tolerance, fmt, out, config_path):
    """Numerical holonomy dimension from sampled loop transports."""
    try:
        cfg = _resolve(config_path, suite="transport", loops=loops, scale=scale, seed=seed,
                       tolerance=tolerance, format=fmt, out=out)
    except ConfigError as err:
        return _config_error(err)
    rep, code = suites.run_suite(cfg)
    _emit(rep.to_json() if cfg.format == "json" else rep.to_text(), cfg.out)
    return code


@cli.command()
@click.option("--valence", required=True,
              help="K,M for (K,M) tensors, '0,2s' for symmetric forms, 'top' for top forms.")
@click.option("--instance", type=str, default="joyce", help="joyce (default) or hopf.")
@_apply(_common)
def invariants(valence, instance, fmt, out, config_path):
    """Dimension of holonomy-invariant tensors of one valence."""
    try:
        cfg = _resolve(config_path, format=fmt, out=out)
        key = holonomy.parse_valence(valence)
        if instance not in ("joyce", "hopf"):
            raise ConfigError(f"unknown instance {instance!r}")
    except ValueError as err:
        return _config_error(err)
    hol = suites.joyce_holonomy() if instance == "joyce" else suites.hopf_holonomy()
    dim = holonomy.invariant_tensor_dims(hol, key)
    if cfg.format == "json":
        text = json.dumps({"instance": instance, "valence": key, "dim": dim}, sort_keys=True) + "\n"
    else:
        text = f"{instance} {holonomy.VALENCES[key]} ({key}): {dim}\n"
    _emit(text, cfg.out)
    return EXIT_OK


DUMPS = ("structure-constants", "ijk", "lambda", "curvature", "holonomy-basis")


@cli.command()
@click.option("--what", required=True, help=", ".join(DUMPS))
@click.option("--instance", type=str, default="joyce", help="joyce (default) or hopf.")
@click.option("--format", "fmt", type=str, default="json", help="Only json.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def dump(what, instance, fmt, out):
    """Dump exact objects as JSON with rationals as "p/q" strings."""
    if what not in DUMPS:
        return _config_error(ValueError(f"unknown object {what!r}; choose from {', '.join(DUMPS)}"))
    if fmt != "json":
        return _config_error(ValueError("dump supports only --format json"))
    if instance not in ("joyce", "hopf"):
        return _config_error(ValueError(f"unknown instance {instance!r}"))
    H, C = suites.joyce() if instance == "joyce" else suites.hopf()
    if what == "structure-constants":
        data = lie.to_json_dict(H.algebra)
    elif what == "ijk":
        data = hyper.to_json_dict(H)
    elif what == "lambda":
        data = obata.to_json_dict(C)
    elif what == "curvature":
        data = curvature.to_json_dict(C)
    else:
        hol = suites.joyce_holonomy() if instance == "joyce" else suites.hopf_holonomy()
        data = holonomy.to_json_dict(hol)
    _emit(json.dumps(data, indent=2) + "\n", out)
    return EXIT_OK


main = cli

if __name__ == "__main__":  # pragma: no cover
    cli()
