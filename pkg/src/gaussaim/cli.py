"""Command line entry point: ``gaussaim spectrum`` and ``gaussaim convergence``."""

from __future__ import annotations

import csv
import io
import json
import os
import sys
from dataclasses import dataclass, fields, replace

import click

from .aim import aim_levels, convergence_table
from .errors import ContractError, GaussAimError
from .models import AimConfig, Method, PotentialModel, QuantumNumbers, SpectrumEntry
from .numerov import shoot_eigenvalue
from .variational import optimize_b

PRECISION_ENV = "GAUSSAIM_PRECISION_BITS"
CSV_FIELDS = ("n", "l", "method", "binding_energy", "k_used", "b_star", "status")
METHODS = ("aim", "variational", "numerov", "all")
OUTPUTS = ("csv", "json", "table")


@dataclass(frozen=True)
class RunConfig:
    method: str = "aim"
    a: float = 400.0
    n_max: int = 4
    l_max: int = 7
    beta: float = 10.0
    truncation_order: int = 10
    precision_bits: int = 256
    k_max: int = 40
    output: str = "csv"

    def __post_init__(self):
        if self.method not in METHODS:
            raise ContractError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.output not in OUTPUTS:
            raise ContractError(f"output must be one of {OUTPUTS}, got {self.output!r}")
        for name in ("n_max", "l_max"):
            if getattr(self, name) < 0:
                raise ContractError(f"{name} must be non-negative")
        self.potential()
        self.aim_config()

    def potential(self) -> PotentialModel:
        return PotentialModel(depth=self.a)

    def aim_config(self) -> AimConfig:
        return AimConfig(beta=self.beta, truncation_order=self.truncation_order,
                         k_max=self.k_max, precision_bits=self.precision_bits)

    @property
    def methods(self) -> tuple[Method, ...]:
        if self.method == "all":
            return (Method.AIM, Method.VARIATIONAL, Method.NUMEROV)
        return (Method(self.method),)


_TYPES = {f.name: f.type for f in fields(RunConfig)}
_CASTS = {"float": float, "int": int, "str": str}


def parse_config_file(text: str) -> dict:
    """Flat ``key = value`` lines; ``#`` starts a comment, keys may use ``-`` or ``_``."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ContractError(f"config line {lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_").lower()
        if key not in _TYPES:
            raise ContractError(f"config line {lineno}: unknown key {key!r}")
        try:
            values[key] = _CASTS[_TYPES[key]](value)
        except ValueError as exc:
            raise ContractError(f"config line {lineno}: bad value for {key}: {value!r}") from exc
    return values


def resolve_config(flags: dict, config_text: str | None = None, env=os.environ) -> RunConfig:
    """Merge layers: flags over config file over environment over built-in defaults."""
    merged = {}
    if env.get(PRECISION_ENV):
        try:
            merged["precision_bits"] = int(env[PRECISION_ENV])
        except ValueError as exc:
            raise ContractError(f"{PRECISION_ENV} must be an integer") from exc
    if config_text is not None:
        merged.update(parse_config_file(config_text))
    merged.update({k: v for k, v in flags.items() if v is not None})
    return RunConfig(**merged)


def _fmt(value) -> str:
    return "" if value is None else format(value, ".12g")


def quantize(entry: SpectrumEntry) -> SpectrumEntry:
    """Round floats to the 12 significant digits written to disk."""
    def q(x):
        return None if x is None else float(format(x, ".12g"))
    return replace(entry, binding_energy=q(entry.binding_energy), b_star=q(entry.b_star))


def solve_spectrum(cfg: RunConfig) -> list[SpectrumEntry]:
    """Every requested level, ordered n-major then l then method."""
    pot = cfg.potential()
    ns = range(cfg.n_max + 1)
    found: dict[tuple[int, int, Method], SpectrumEntry] = {}
    for method in cfg.methods:
        for l in range(cfg.l_max + 1):
            if method is Method.AIM:
                for e in aim_levels(l, list(ns), pot, cfg.aim_config()):
                    found[e.n, l, method] = e
                continue
            for n in ns:
                try:
                    if method is Method.VARIATIONAL:
                        e = optimize_b(QuantumNumbers(n, l), pot)[1]
                    else:
                        e = shoot_eigenvalue(QuantumNumbers(n, l), pot)
                except GaussAimError as exc:
                    e = SpectrumEntry.failed(n, l, method, exc)
                found[n, l, method] = e
    return [quantize(found[n, l, m]) for n in ns for l in range(cfg.l_max + 1) for m in cfg.methods]


def entries_to_csv(entries) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for e in entries:
        w.writerow([e.n, e.l, e.method.value, _fmt(e.binding_energy),
                    "" if e.k_used is None else e.k_used, _fmt(e.b_star), e.status])
    return buf.getvalue()


def entries_to_json(entries) -> str:
    rows = [{"n": e.n, "l": e.l, "method": e.method.value,
             "binding_energy": None if e.binding_energy is None else float(_fmt(e.binding_energy)),
             "k_used": e.k_used,
             "b_star": None if e.b_star is None else float(_fmt(e.b_star)),
             "status": e.status} for e in entries]
    return json.dumps(rows, indent=1) + "\n"


def entries_from_json(text: str) -> list[SpectrumEntry]:
    return [SpectrumEntry(d["n"], d["l"], Method(d["method"]), d["binding_energy"],
                          k_used=d["k_used"], b_star=d["b_star"], status=d["status"])
            for d in json.loads(text)]


def entries_to_table(entries) -> str:
    lines = [f"{'n':>2} {'l':>2}  {'method':<11} {'-E':>10} {'k':>3} {'b*':>8}  status"]
    for e in entries:
        be = "" if e.binding_energy is None else f"{e.binding_energy:.3f}"
        b = "" if e.b_star is None else f"{e.b_star:.4f}"
        k = "" if e.k_used is None else str(e.k_used)
        lines.append(f"{e.n:>2} {e.l:>2}  {e.method.value:<11} {be:>10} {k:>3} {b:>8}  {e.status}")
    return "\n".join(lines) + "\n"


def convergence_rows(table, betas, ks) -> list[list[str]]:
    rows = [["k"] + [f"beta={format(b, 'g')}" for b in betas]]
    for k, row in zip(ks, table):
        rows.append([str(k)] + ["ABSENT" if v is None else _fmt(v) for v in row])
    return rows


def render_convergence(rows, output: str) -> str:
    if output == "json":
        head = rows[0]
        return json.dumps([dict(zip(head, r)) for r in rows[1:]], indent=1) + "\n"
    if output == "table":
        width = max(len(c) for r in rows for c in r)
        return "\n".join(" ".join(c.rjust(width) for c in r) for r in rows) + "\n"
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out is None:
        click.echo(text, nl=False)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _number_list(text: str, cast) -> list:
    try:
        values = [cast(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise click.BadParameter(f"not a comma separated list: {text!r}") from exc
    if not values:
        raise click.BadParameter("empty list")
    return values


def _common(fn):
    opts = [
        click.option("--a", "a", type=float, default=None, help="Well depth A (default 400)."),
        click.option("--beta", type=float, default=None, help="AIM asymptotic parameter (default 10)."),
        click.option("--truncation-order", type=int, default=None, help="Highest power kept in V (default 10)."),
        click.option("--precision-bits", type=int, default=None,
                     help=f"MPFR precision (default 256, or ${PRECISION_ENV})."),
        click.option("--k-max", type=int, default=None, help="Largest AIM iteration (default 40)."),
        click.option("--output", type=click.Choice(OUTPUTS), default=None, help="Output format."),
        click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write to file."),
        click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
                     default=None, help="key=value defaults file."),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def _resolve(flags: dict, config_path: str | None) -> RunConfig:
    text = None
    if config_path is not None:
        with open(config_path, encoding="utf-8") as fh:
            text = fh.read()
    try:
        return resolve_config(flags, text)
    except ContractError as exc:
        raise click.UsageError(str(exc)) from exc


@click.group()
def cli():
    """Bound states of the Gaussian well by AIM, Rayleigh-Ritz and Numerov."""


@cli.command()
@click.option("--method", type=click.Choice(METHODS), default=None, help="Solver (default aim).")
@click.option("--n-max", type=int, default=None, help="Largest n (default 4).")
@click.option("--l-max", type=int, default=None, help="Largest l (default 7).")
@_common
def spectrum(out, config_path, **flags):
    """Binding energies for every n <= n-max, l <= l-max."""
    cfg = _resolve(flags, config_path)
    entries = solve_spectrum(cfg)
    render = {"csv": entries_to_csv, "json": entries_to_json, "table": entries_to_table}[cfg.output]
    _emit(render(entries), out)
    sys.exit(0 if all(e.ok for e in entries) else 1)


@cli.command()
@click.option("--betas", default="5,10,15,20,25", show_default=True, help="Comma separated beta values.")
@click.option("--ks", default="5,10,15,20,25,30,35", show_default=True, help="Comma separated iteration counts.")
@click.option("--n", "n", type=int, default=0, show_default=True)
@click.option("--l", "l", type=int, default=0, show_default=True)
@_common
def convergence(betas, ks, n, l, out, config_path, **flags):
    """Raw AIM estimates for each (k, beta): rows k, columns beta."""
    beta_list = _number_list(betas, float)
    k_list = _number_list(ks, int)
    cfg = _resolve(flags, config_path)
    try:
        nq = QuantumNumbers(n, l)
        base = cfg.aim_config().with_(k_max=max(max(k_list), 2))
        if min(k_list) < 1 or min(beta_list) <= 0:
            raise ContractError("k values must be >= 1 and beta values > 0")
    except ContractError as exc:
        raise click.UsageError(str(exc)) from exc
    table = convergence_table(nq, cfg.potential(), beta_list, k_list, base)
    _emit(render_convergence(convergence_rows(table, beta_list, k_list), cfg.output), out)
    sys.exit(0 if all(v is not None for row in table for v in row) else 1)


def main(argv=None):
    cli.main(args=argv, prog_name="gaussaim")


if __name__ == "__main__":
    main()
