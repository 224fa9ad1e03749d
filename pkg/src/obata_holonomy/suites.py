"""Check suites and the resolved run configuration."""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields
from functools import lru_cache
from pathlib import Path

from . import curvature, holonomy, hyper, lie, obata, transport
from .report import CheckReport

SUITES = ("algebra", "hypercomplex", "connection", "curvature", "holonomy", "transport")


class ConfigError(ValueError):
    """Invalid configuration or input; maps to exit code 3."""


@dataclass
class Config:
    suite: str = "all"
    loops: int = 200
    scale: float = 0.1
    seed: int = 0
    tolerance: float = 1e-6
    format: str = "json"
    out: str | None = None

    def validate(self) -> "Config":
        if self.suite != "all" and self.suite not in SUITES:
            raise ConfigError(f"unknown suite {self.suite!r}")
        if self.loops < 1:
            raise ConfigError("loops must be at least 1")
        if not 0 < self.scale <= 0.5:
            raise ConfigError("scale must lie in (0, 0.5]")
        if not self.tolerance > 0:
            raise ConfigError("tolerance must be positive")
        if self.format not in ("json", "text"):
            raise ConfigError(f"unknown format {self.format!r}")
        return self

    def echo(self) -> dict:
        return asdict(self)


_CASTS = {"loops": int, "seed": int, "scale": float, "tolerance": float}


def read_config_file(path: str | Path) -> dict:
    """Plain key=value lines; blank lines and '#' comments are ignored."""
    known = {f.name for f in fields(Config)}
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise ConfigError(f"cannot read config file: {err}") from err
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in known:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            out[key] = _CASTS.get(key, str)(value)
        except ValueError as err:
            raise ConfigError(f"line {lineno}: bad value for {key}: {value!r}") from err
    return out


def resolve(file_values: dict | None = None, **flags) -> Config:
    """Defaults, then the config file, then flags (None means unset)."""
    values = dict(file_values or {})
    values.update({k: v for k, v in flags.items() if v is not None})
    try:
        cfg = Config(**values)
    except TypeError as err:
        raise ConfigError(str(err)) from err
    return cfg.validate()


# ---------------------------------------------------------------------------
# instances are built once per process


@lru_cache(maxsize=None)
def joyce():
    H = hyper.build_joyce_su3()
    return H, obata.obata_lambda(H)


@lru_cache(maxsize=None)
def hopf():
    H = hyper.build_hopf_g0()
    return H, obata.obata_lambda(H)


@lru_cache(maxsize=None)
def joyce_holonomy():
    return holonomy.nomizu_closure(joyce()[1])


@lru_cache(maxsize=None)
def hopf_holonomy():
    return holonomy.nomizu_closure(hopf()[1])


def _algebra(cfg: Config) -> CheckReport:
    rep = lie.verify_lie_axioms(lie.build_su(3), "algebra.su3")
    H, _ = joyce()
    Hh, _ = hopf()
    rep.extend(lie.verify_lie_axioms(H.algebra, "algebra.joyce-su3"))
    rep.extend(lie.verify_lie_axioms(Hh.algebra, "algebra.hopf-g0"))
    rep.extend(hyper.su3_certificate(H))
    return rep


def _hypercomplex(cfg: Config) -> CheckReport:
    rep = hyper.verify_hypercomplex(joyce()[0])
    return rep.extend(hyper.verify_hypercomplex(hopf()[0]))


def _connection(cfg: Config) -> CheckReport:
    rep = CheckReport()
    for H, C in (joyce(), hopf()):
        rep.extend(obata.verify_connection(C))
        rep.extend(obata.verify_uniqueness(H))
        rep.extend(obata.euler_report(H, C))
    return rep


def _curvature(cfg: Config) -> CheckReport:
    rep = CheckReport()
    for _, C in (joyce(), hopf()):
        rep.extend(curvature.verify_curvature(C, seed=cfg.seed))
    return rep


def _holonomy(cfg: Config) -> CheckReport:
    H, C = joyce()
    rep = holonomy.identify_gl2h(joyce_holonomy(), H, C)
    rep.extend(holonomy.hopf_report(hopf()[1]))
    rep.extend(holonomy.verify_eliminations(seed=cfg.seed))
    return rep


def _transport(cfg: Config) -> CheckReport:
    kw = dict(n_loops=cfg.loops, scale=cfg.scale, seed=cfg.seed, tol=cfg.tolerance)
    rep = transport.verify_transport(joyce()[1], joyce_holonomy(), expected_dim=16, **kw)
    rep.extend(transport.verify_transport(hopf()[1], hopf_holonomy(), expected_dim=0, **kw))
    return rep


_RUNNERS = {"algebra": _algebra, "hypercomplex": _hypercomplex, "connection": _connection,
            "curvature": _curvature, "holonomy": _holonomy, "transport": _transport}


def run_suite(cfg: Config) -> tuple[CheckReport, int]:
    """Run the selected suites in fixed order; exit code 0 or 2."""
    cfg.validate()
    names = SUITES if cfg.suite == "all" else (cfg.suite,)
    rep = CheckReport(config_echo=cfg.echo())
    for name in names:
        rep.extend(_RUNNERS[name](cfg))
    return rep, (0 if rep.ok else 2)
