"""Command-line front end: figure sweeps, randomized inequality checks, reports, plot scripts."""

from __future__ import annotations

import argparse
import csv
import io
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .bounds import (
    DISCORD_TOL,
    ENTROPY_TOL,
    BoundReport,
    eq6_rhs,
    theorem2_check,
    theorem3_check,
    tripartite_lhs,
)
from .core import DensityMatrix, Observable, QuantumError, named_observable, project_pure
from .states import Family, StateFamilyPoint, random_ginibre, random_haar_pure, swept_parameter, sweep_grid

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_VIOLATION = 0, 1, 2, 3

CSV_HEADER = ("param,D_AB,D_AC,discord_sum,bound_new,bound_hufan,delta1,delta2,"
              "s_a,lhs_uncertainty,q_mu,applicable_monogamy")
CSV_COLUMNS = tuple(CSV_HEADER.split(","))

THEOREMS = ("EQ6", "T1_15", "T1_16", "T2", "T3", "EQ19", "HUFAN")
DISCORD_FREE = {"EQ6"}
MULTIPARTITE = {"T3", "EQ19"}


class UsageError(QuantumError):
    pass


class ParseError(QuantumError):
    """Malformed matrix or CSV input; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def fmt(x: float) -> str:
    """12 significant digits; -0 printed as 0."""
    return f"{float(x) + 0.0:.12g}"


_PI_RE = re.compile(r"^\s*([-+]?\d*\.?\d*)\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*))?\s*$")


def parse_number(text: str) -> float:
    """Float literal, or a multiple of pi such as ``pi/4`` or ``3pi/2``."""
    try:
        return float(text)
    except ValueError:
        pass
    m = _PI_RE.match(text.lower())
    if not m:
        raise UsageError(f"cannot parse number {text!r}")
    coef = m.group(1)
    coef = 1.0 if coef in ("", "+") else -1.0 if coef == "-" else float(coef)
    den = float(m.group(2)) if m.group(2) else 1.0
    return coef * np.pi / den


def parse_params(items: Sequence[str] | None) -> dict[str, float]:
    out = {}
    for item in items or ():
        key, sep, val = item.partition("=")
        if not sep or not key.strip():
            raise UsageError(f"expected key=value, got {item!r}")
        out[key.strip()] = parse_number(val)
    return out


def parse_observables(text: str | None, n: int) -> list[Observable]:
    if text is None:
        names = {2: ["x", "z"], 3: ["x", "y", "z"]}.get(n)
        if names is None:
            raise UsageError(f"no default observables for {n} memories; pass --obs")
    else:
        names = [s for s in text.split(",") if s.strip()]
    if len(names) != n:
        raise UsageError(f"expected {n} observables, got {len(names)}")
    return [named_observable(s) for s in names]


# -- matrix files -------------------------------------------------------------

def read_matrix_file(path) -> DensityMatrix:
    """Parse the plain-text matrix format.

    First non-comment line: subsystem dims.  Then one line per row, each entry
    written ``re,im``; blank lines and lines starting with ``#`` are skipped.
    """
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from e
    lines = [(i, ln.strip()) for i, ln in enumerate(text.splitlines(), 1)]
    lines = [(i, ln) for i, ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ParseError("empty matrix file", 1)
    i0, head = lines[0]
    try:
        dims = [int(t) for t in head.split()]
    except ValueError:
        raise ParseError(f"bad dims line {head!r}", i0) from None
    if not dims or any(d < 2 for d in dims):
        raise ParseError(f"dims must all be >= 2, got {dims}", i0)
    d = int(np.prod(dims))
    rows = lines[1:]
    if len(rows) != d:
        where = rows[-1][0] if rows else i0
        raise ParseError(f"expected {d} matrix rows, found {len(rows)}", where)
    m = np.zeros((d, d), dtype=complex)
    for r, (lineno, ln) in enumerate(rows):
        entries = ln.split()
        if len(entries) != d:
            raise ParseError(f"expected {d} entries, found {len(entries)}", lineno)
        for c, tok in enumerate(entries):
            re_s, sep, im_s = tok.partition(",")
            try:
                m[r, c] = complex(float(re_s), float(im_s) if sep else 0.0)
            except ValueError:
                raise ParseError(f"bad complex entry {tok!r}", lineno) from None
    try:
        return DensityMatrix(m, tuple(dims))
    except QuantumError as e:
        raise ParseError(f"not a valid density matrix: {e}", rows[0][0]) from e


def write_matrix_file(rho: DensityMatrix, path) -> None:
    out = [" ".join(str(d) for d in rho.dims)]
    for row in rho.matrix:
        out.append(" ".join(f"{z.real:.17g},{z.imag:.17g}" for z in row))
    Path(path).write_text("\n".join(out) + "\n")


# -- sweeps -------------------------------------------------------------------

@dataclass(frozen=True)
class SweepSpec:
    family: Family
    grid: int
    fixed: dict = field(default_factory=dict)
    observables: tuple[str, ...] = ("x", "z")
    output: str | None = None
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        fam = self.family if isinstance(self.family, Family) else Family.parse(self.family)
        object.__setattr__(self, "family", fam)
        if self.grid < 2:
            raise UsageError("grid must be >= 2")
        swept = swept_parameter(fam)
        if swept in self.fixed:
            raise UsageError(f"{swept} is the swept parameter and cannot be fixed")
        # validates the fixed parameters against the family domain
        StateFamilyPoint(fam, dict(self.fixed))

    def points(self) -> list[StateFamilyPoint]:
        swept = swept_parameter(self.family)
        return [StateFamilyPoint(self.family, {**self.fixed, swept: float(v)}, seed=self.seed)
                for v in sweep_grid(self.family, self.grid)]


def _sweep_row(args) -> str:
    point, obs_names = args
    x, z = (named_observable(n) for n in obs_names)
    r = theorem2_check(point.build(), x, z, monogamy=False)
    value = point.params[swept_parameter(point.family)]
    nums = (value, r.d_ab, r.d_ac, r.discord_sum, r.bound_new, r.bound_hufan, r.delta1,
            r.delta2, r.s_a, r.lhs_uncertainty, r.q_mu)
    return ",".join(fmt(v) for v in nums) + "," + ("true" if r.applicable_monogamy else "false")


def sweep_csv(spec: SweepSpec) -> str:
    """CSV text for a sweep; rows come out in grid order whatever the worker count."""
    jobs = [(p, tuple(spec.observables)) for p in spec.points()]
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            rows = list(pool.map(_sweep_row, jobs, chunksize=max(1, len(jobs) // (4 * spec.workers))))
    else:
        rows = [_sweep_row(j) for j in jobs]
    return "\n".join([CSV_HEADER, *rows]) + "\n"


def cmd_sweep(spec: SweepSpec) -> str:
    if not spec.output:
        return sweep_csv(spec)
    try:
        fh = open(spec.output, "w", newline="\n")
    except OSError as e:
        raise OSError(f"cannot write {spec.output}: {e.strerror}") from e
    with fh:
        text = sweep_csv(spec)
        fh.write(text)
    return text


def read_sweep_csv(path) -> dict[str, np.ndarray]:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from e
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or ",".join(rows[0]) != CSV_HEADER:
        raise ParseError("header does not match the sweep CSV format", 1)
    cols: dict[str, list] = {c: [] for c in CSV_COLUMNS}
    for lineno, row in enumerate(rows[1:], 2):
        if not row:
            continue
        if len(row) != len(CSV_COLUMNS):
            raise ParseError(f"expected {len(CSV_COLUMNS)} fields, found {len(row)}", lineno)
        try:
            for c, v in zip(CSV_COLUMNS[:-1], row[:-1]):
                cols[c].append(float(v))
        except ValueError:
            raise ParseError("non-numeric field", lineno) from None
        cols["applicable_monogamy"].append(row[-1] == "true")
    return {c: np.array(v) for c, v in cols.items()}


# -- checks -------------------------------------------------------------------

@dataclass(frozen=True)
class CheckSpec:
    theorem: str
    trials: int = 200
    seed: int = 0
    source: Family = Family.RANDOM_GINIBRE
    parts: int | None = None
    observables: str | None = None

    def __post_init__(self):
        tag = self.theorem.upper()
        if tag not in THEOREMS:
            raise UsageError(f"unknown theorem {self.theorem!r}; expected one of {', '.join(THEOREMS)}")
        object.__setattr__(self, "theorem", tag)
        if self.trials < 1:
            raise UsageError("trials must be >= 1")
        src = self.source if isinstance(self.source, Family) else Family.parse(self.source)
        if src not in (Family.RANDOM_GINIBRE, Family.RANDOM_PURE):
            raise UsageError("check source must be RANDOM_GINIBRE or RANDOM_PURE")
        object.__setattr__(self, "source", src)
        parts = self.parts if self.parts is not None else (4 if tag in MULTIPARTITE else 3)
        if tag in MULTIPARTITE:
            if not 3 <= parts <= 4:
                raise UsageError(f"{tag} needs 3 or 4 qubits, got {parts}")
        elif parts != 3:
            raise UsageError(f"{tag} is a tripartite relation; --parts must be 3")
        object.__setattr__(self, "parts", parts)

    @property
    def tolerance(self) -> float:
        return ENTROPY_TOL if self.theorem in DISCORD_FREE else DISCORD_TOL

    def state(self, trial_seed: int) -> DensityMatrix:
        dims = (2,) * self.parts
        if self.source is Family.RANDOM_PURE:
            return project_pure(random_haar_pure(dims, trial_seed))
        return random_ginibre(dims, trial_seed)


def theorem_slack(theorem: str, rho: DensityMatrix, observables: Sequence[Observable]) -> float:
    """Nonnegative when the named relation holds for ``rho``."""
    if theorem in MULTIPARTITE:
        rep = theorem3_check(rho, observables)
        return rep.slack if theorem == "T3" else rep.eq19_slack
    x, z = observables
    if theorem == "EQ6":
        return tripartite_lhs(rho, x, z) - eq6_rhs(rho, x, z)
    r = theorem2_check(rho, x, z, monogamy=False)
    return {
        "T1_15": r.lhs_uncertainty - r.rhs_eq15,
        "T1_16": r.lhs_uncertainty - r.rhs_eq16,
        "T2": r.slack,
        "HUFAN": r.bound_hufan - r.discord_sum,
    }[theorem]


@dataclass(frozen=True)
class CheckSummary:
    theorem: str
    trials: int
    min_slack: float
    mean_slack: float
    worst_seed: int | None
    tolerance: float
    violations: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def render(self) -> str:
        lines = [
            f"theorem: {self.theorem}",
            f"trials: {self.trials}",
            f"min_slack: {fmt(self.min_slack)}",
            f"mean_slack: {fmt(self.mean_slack)}",
            f"worst_seed: {self.worst_seed if self.worst_seed is not None else '-'}",
            f"tolerance: {self.tolerance:g}",
            f"violations: {len(self.violations)}",
        ]
        if self.violations:
            lines.append("violating_seeds: " + " ".join(str(s) for s in self.violations))
            lines.append(f"status: VIOLATION (reproduce with --seed {self.worst_seed} --trials 1)")
        else:
            lines.append("status: OK")
        return "\n".join(lines) + "\n"


def run_check(theorem: str, states: Iterable[tuple[int | None, DensityMatrix]],
              observables: Sequence[Observable], tolerance: float) -> CheckSummary:
    slacks, seeds = [], []
    for seed, rho in states:
        slacks.append(theorem_slack(theorem, rho, observables))
        seeds.append(seed)
    arr = np.array(slacks)
    worst = int(np.argmin(arr))
    bad = tuple(s for s, v in zip(seeds, slacks) if v < -tolerance)
    return CheckSummary(theorem, len(slacks), float(arr.min()), float(arr.mean()),
                        seeds[worst], tolerance, bad)


def cmd_check(spec: CheckSpec) -> CheckSummary:
    obs = parse_observables(spec.observables, spec.parts - 1)
    states = ((spec.seed + i, spec.state(spec.seed + i)) for i in range(spec.trials))
    return run_check(spec.theorem, states, obs, spec.tolerance)


# -- reports ------------------------------------------------------------------

def render_report(rho: DensityMatrix, observables: str | None = None) -> str:
    n = rho.n_parts - 1
    if n < 2:
        raise UsageError("report needs at least three subsystems")
    obs = parse_observables(observables, n)
    lines = [f"dims: {' '.join(str(d) for d in rho.dims)}",
             f"observables: {','.join(o.name or '?' for o in obs)}"]
    if n == 2:
        r: BoundReport = theorem2_check(rho, *obs, monogamy=True)
        for k, v in r.as_dict().items():
            if isinstance(v, bool):
                lines.append(f"{k}: {'true' if v else 'false'}")
            elif v is None:
                lines.append(f"{k}: -")
            else:
                lines.append(f"{k}: {fmt(v)}")
        lines.append(f"theorem2_slack: {fmt(r.slack)}")
        if r.saturated:
            lines.append("note: S(X|B) + S(Z|C) saturates q_MU")
    else:
        m = theorem3_check(rho, obs)
        for k, v in m.as_dict().items():
            if v is None:
                lines.append(f"{k}: -")
            elif isinstance(v, tuple):
                lines.append(f"{k}: {' '.join(fmt(x) for x in v)}")
            elif isinstance(v, int):
                lines.append(f"{k}: {v}")
            else:
                lines.append(f"{k}: {fmt(v)}")
        lines.append(f"theorem3_slack: {fmt(m.slack)}")
        lines.append(f"eq19_slack: {fmt(m.eq19_slack)}")
    return "\n".join(lines) + "\n"


# -- plot scripts -------------------------------------------------------------

_PLOT_TEMPLATE = '''\
"""Shareability bounds from {source}."""
import matplotlib.pyplot as plt

param = {param}
discord_sum = {discord_sum}
bound_new = {bound_new}
bound_hufan = {bound_hufan}

fig, ax = plt.subplots(figsize=(6, 4))
ax.plot(param, discord_sum, "k-", label="D_A(AB) + D_A(AC)")
ax.plot(param, bound_new, "r--", label="Delta1 + Delta2 + S(A)")
ax.plot(param, bound_hufan, "b:", label="S(A) + delta_T")
ax.set_xlabel("{xlabel}")
ax.set_ylabel("bits")
ax.legend()
fig.tight_layout()
fig.savefig("{png}", dpi=150)
'''


def cmd_plotscript(csv_path, out_path, warn: Callable[[str], None] | None = None) -> str:
    data = read_sweep_csv(csv_path)
    if data["param"].size == 0 and warn is not None:
        warn(f"{csv_path}: no data rows; the script will draw empty axes")
    as_list = lambda a: "[" + ", ".join(fmt(v) for v in a) + "]"  # noqa: E731
    script = _PLOT_TEMPLATE.format(
        source=Path(csv_path).name,
        param=as_list(data["param"]),
        discord_sum=as_list(data["discord_sum"]),
        bound_new=as_list(data["bound_new"]),
        bound_hufan=as_list(data["bound_hufan"]),
        xlabel="parameter",
        png=Path(out_path).with_suffix(".png").name,
    )
    Path(out_path).write_text(script)
    return script


# -- entry point --------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qdshare", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("sweep", help="evaluate the shareability bounds over a family grid")
    s.add_argument("--family", required=True)
    s.add_argument("--grid", type=int, default=201)
    s.add_argument("--param", action="append", metavar="K=V")
    s.add_argument("--obs", default="x,z")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    s.add_argument("-o", "--output")

    c = sub.add_parser("check", help="randomized validity check of one relation")
    c.add_argument("--theorem", required=True)
    c.add_argument("--trials", type=int, default=200)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--parts", type=int)
    c.add_argument("--source", default="RANDOM_GINIBRE")
    c.add_argument("--obs")
    c.add_argument("--family", help="check a single family point instead of random states")
    c.add_argument("--param", action="append", metavar="K=V")

    r = sub.add_parser("report", help="print every bound for one state")
    g = r.add_mutually_exclusive_group(required=True)
    g.add_argument("--state", help="matrix file")
    g.add_argument("--family")
    r.add_argument("--param", action="append", metavar="K=V")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--parts", type=int, default=3)
    r.add_argument("--obs")

    ps = sub.add_parser("plotscript", help="write a matplotlib script for a sweep CSV")
    ps.add_argument("csv")
    ps.add_argument("-o", "--output", required=True)
    return p


def _family_point(tag, params, seed, parts=3) -> StateFamilyPoint:
    fam = Family.parse(tag)
    dims = (2,) * parts
    if parts != 3 and fam not in (Family.RANDOM_GINIBRE, Family.RANDOM_PURE):
        raise UsageError(f"family {fam.value} is tripartite")
    return StateFamilyPoint(fam, parse_params(params), seed=seed, dims=dims)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    out = sys.stdout
    try:
        if args.command == "sweep":
            spec = SweepSpec(args.family, args.grid, parse_params(args.param),
                             tuple(s.strip() for s in args.obs.split(",")), args.output,
                             args.seed, max(1, args.workers))
            text = cmd_sweep(spec)
            if not args.output:
                out.write(text)
            return EXIT_OK
        if args.command == "check":
            if args.family:
                point = _family_point(args.family, args.param, args.seed)
                tag = args.theorem.upper()
                if tag not in THEOREMS or tag in MULTIPARTITE:
                    raise UsageError(f"--family checks support the tripartite relations, not {args.theorem!r}")
                tol = ENTROPY_TOL if tag in DISCORD_FREE else DISCORD_TOL
                summary = run_check(tag, [(args.seed, point.build())],
                                    parse_observables(args.obs, 2), tol)
            else:
                summary = cmd_check(CheckSpec(args.theorem, args.trials, args.seed, args.source,
                                              args.parts, args.obs))
            out.write(summary.render())
            return EXIT_OK if summary.ok else EXIT_VIOLATION
        if args.command == "report":
            if args.state:
                rho = read_matrix_file(args.state)
            else:
                rho = _family_point(args.family, args.param, args.seed, args.parts).build()
            out.write(render_report(rho, args.obs))
            return EXIT_OK
        if args.command == "plotscript":
            cmd_plotscript(args.csv, args.output, warn=lambda m: print(f"warning: {m}", file=sys.stderr))
            return EXIT_OK
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except QuantumError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
