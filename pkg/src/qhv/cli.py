"""Batch verification driver.

Runs named check suites over configured twist ranges and streams one JSON
report per check (``--human`` switches to plain lines).  Exit code 0 means
every check passed, 1 that some check failed or a golden comparison
mismatched, 2 that the command line or config file could not be parsed.

Reports are deterministic for a fixed configuration; ``duration_ms`` is the
only varying field and is ignored by golden comparisons (``--golden DIR``
compares the stream against ``DIR/<command>.jsonl``, ``--update-golden``
rewrites it).  Resource budgets are taken from ``--budget``, the config file,
or the ``QHV_BUDGET`` environment variable, in that order.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import degenerations as dg
from . import ideals, ruled, singular

DEFAULT_QUADRIC_TWISTS = (1, 3, 5, 7, 9)
DEFAULT_F4_TWISTS = (0, 1, 2, 3)
DEFAULT_TERMINAL_N_MAX = 50
DEFAULT_WPS = ((1, 1, 1, 2), (1, 1, 2, 3))
DEFAULT_BUNDLE = (1, 2, 1)


@dataclass
class CheckReport:
    check_name: str
    params: dict
    status: str  # pass | fail | error
    witnesses: list = field(default_factory=list)
    duration_ms: int = 0

    def payload(self, with_duration: bool = True) -> dict:
        out = {
            "check_name": self.check_name,
            "params": self.params,
            "status": self.status,
            "witnesses": self.witnesses,
        }
        if with_duration:
            out["duration_ms"] = self.duration_ms
        return out

    def to_json(self, with_duration: bool = True) -> str:
        return json.dumps(self.payload(with_duration), separators=(",", ":"))


def _run_check(name: str, params: dict, body) -> CheckReport:
    """Time one check; ``body`` returns (passed, witnesses)."""
    start = time.perf_counter()
    try:
        passed, witnesses = body()
        status = "pass" if passed else "fail"
    except Exception as exc:  # noqa: BLE001 - reported, not swallowed
        status = "error"
        witnesses = [{"error": f"{type(exc).__name__}: {exc}"}]
    duration = int((time.perf_counter() - start) * 1000)
    if status == "fail" and not witnesses:
        witnesses = [{"error": "check failed without detail"}]
    return CheckReport(name, params, status, witnesses, duration)


# -- suites --------------------------------------------------------------------


def suite_verify_quadric(cfg) -> list[CheckReport]:
    reports = []
    for k in cfg.quadric_k:
        for l in cfg.quadric_l:
            def body(k=k, l=l):
                fam = dg.glued_family("quadric", k, l)
                rep = dg.verify_gluing(fam)
                return rep["passed"], rep["witnesses"]

            reports.append(_run_check("quadric-gluing", {"k": k, "l": l}, body))
    return reports


def suite_verify_f4(cfg) -> list[CheckReport]:
    reports = []
    for k in cfg.f4_k:
        def adjudication(k=k):
            rep = dg.adjudicate_f4_generators(k)
            return rep["matched"], rep["rows"]

        reports.append(_run_check("f4-adjudication", {"k": k}, adjudication))

        def embedding(k=k):
            rep = dg.verify_embedding(k)
            return rep["passed"], rep["witnesses"]

        reports.append(_run_check("f4-embedding", {"k": k}, embedding))
    for k in cfg.f4_k:
        for l in cfg.f4_l:
            def gluing(k=k, l=l):
                fam = dg.glued_family("f4", k, l)
                rep = dg.verify_gluing(fam)
                return rep["passed"], rep["witnesses"]

            reports.append(_run_check("f4-gluing", {"k": k, "l": l}, gluing))
    return reports


def suite_verify_quotient(cfg) -> list[CheckReport]:
    reports = []
    for k in cfg.f4_k:
        def body(k=k):
            rep = dg.verify_quotient(k)
            return rep["passed"], rep["witnesses"]

        reports.append(_run_check("f4-quotient", {"k": k}, body))
    return reports


def suite_equivariance(cfg) -> list[CheckReport]:
    reports = []
    plans = []
    if cfg.family in ("both", "quadric"):
        plans += [("quadric", k, l) for k in cfg.quadric_k for l in cfg.quadric_l]
    if cfg.family in ("both", "f4"):
        plans += [("f4", k, l) for k in cfg.f4_k for l in cfg.f4_l]
    for family, k, l in plans:
        def body(family=family, k=k, l=l):
            fam = dg.glued_family(family, k, l)
            rep = dg.verify_equivariance(fam)
            return rep["passed"], rep["torus"] + rep["sl2_mismatches"]

        reports.append(
            _run_check("equivariance", {"family": family, "k": k, "l": l}, body)
        )
    return reports


def suite_singular_locus(cfg) -> list[CheckReport]:
    reports = []
    for k in cfg.quadric_k:
        def body(k=k):
            rep = dg.quadric_singular_loci(k)
            return rep["passed"], [{"chart": c, **r} for c, r in rep["charts"].items()]

        reports.append(_run_check("quadric-singular-locus", {"k": k}, body))
    return reports


def suite_terminal(cfg) -> list[CheckReport]:
    def body():
        table = singular.classify_terminal_types(cfg.terminal_n_max)
        return not table, [{"n_max": cfg.terminal_n_max, "counterexamples": table}]

    return [_run_check("terminal-classification", {"n_max": cfg.terminal_n_max}, body)]


def suite_wps(cfg) -> list[CheckReport]:
    reports = []
    for weights in cfg.wps_weights:
        def body(weights=weights):
            rows = singular.wps_singularity_report(list(weights))
            witnesses = [
                {
                    "vertex": r["vertex"],
                    "type": r["type"],
                    "isolated": r["isolated"],
                    "terminal": r["terminal"],
                }
                for r in rows
            ]
            return all(r["terminal"] for r in rows), witnesses

        name = ",".join(str(w) for w in weights)
        reports.append(_run_check("wps-vertices", {"weights": name}, body))
    return reports


def suite_bundle_normalize(cfg) -> list[CheckReport]:
    n, k0, kinf = cfg.bundle

    def body():
        state = ruled.construct_twisted(n, k0, kinf)
        final, steps = ruled.figure1_normalize(state)
        replayed = ruled.replay_reversed(n, steps)
        ok = (
            final.fiber_m == 0
            and len(steps) == k0 + kinf
            and replayed == state
        )
        witness = {
            "construction": list(state.transcript),
            "normalization": list(steps),
            "steps": len(steps),
            "final_fiber": final.fiber_m,
            "round_trip": replayed == state,
        }
        return ok, [witness]

    return [_run_check("bundle-normalize", {"n": n, "k0": k0, "kinf": kinf}, body)]


def suite_dp_homology(cfg) -> list[CheckReport]:
    reports = []

    def counts():
        # 0 on the minimal surface, 3 after one blow-up, 6 after two (the
        # degree-six del Pezzo's classical six lines).
        expected = {0: 0, 1: 3, 2: 6}
        rows = []
        ok = True
        for r, want in expected.items():
            classes = ruled.minus_one_curves(ruled.quadric_blowup(r))
            rows.append(
                {"r": r, "count": len(classes), "classes": [str(c) for c in classes]}
            )
            ok = ok and len(classes) == want
        return ok, rows

    reports.append(_run_check("minus-one-count", {}, counts))
    for fiber in ("sigma1", "blowup1", "blowup2"):
        def body(fiber=fiber):
            rep = ruled.homology_lemma_cases(fiber)
            return rep["passed"], rep["cases"]

        reports.append(_run_check("homology-lemma", {"fiber": fiber}, body))
    return reports


SUITES = {
    "verify-quadric": suite_verify_quadric,
    "verify-f4": suite_verify_f4,
    "verify-quotient": suite_verify_quotient,
    "equivariance": suite_equivariance,
    "singular-locus": suite_singular_locus,
    "terminal": suite_terminal,
    "wps": suite_wps,
    "bundle-normalize": suite_bundle_normalize,
    "dp-homology": suite_dp_homology,
}

ALL_ORDER = (
    "verify-quadric",
    "verify-f4",
    "verify-quotient",
    "equivariance",
    "singular-locus",
    "terminal",
    "wps",
    "bundle-normalize",
    "dp-homology",
)


# -- configuration ---------------------------------------------------------------


@dataclass
class RunConfig:
    quadric_k: tuple[int, ...] = DEFAULT_QUADRIC_TWISTS
    quadric_l: tuple[int, ...] = DEFAULT_QUADRIC_TWISTS
    f4_k: tuple[int, ...] = DEFAULT_F4_TWISTS
    f4_l: tuple[int, ...] = DEFAULT_F4_TWISTS
    family: str = "both"
    terminal_n_max: int = DEFAULT_TERMINAL_N_MAX
    wps_weights: tuple[tuple[int, ...], ...] = DEFAULT_WPS
    bundle: tuple[int, int, int] = DEFAULT_BUNDLE


class ConfigError(ValueError):
    pass


def _parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.replace(" ", "").split(",") if tok)
    except ValueError as exc:
        raise ConfigError(f"expected comma-separated integers, got {text!r}") from exc


def read_config_file(path: str) -> dict:
    """Flat ``key = value`` text format; '#' starts a comment."""
    values: dict[str, str] = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


_CONFIG_KEYS = {
    "quadric-k": ("quadric_k", _parse_int_list),
    "quadric-l": ("quadric_l", _parse_int_list),
    "f4-k": ("f4_k", _parse_int_list),
    "f4-l": ("f4_l", _parse_int_list),
    "family": ("family", str),
    "terminal-n-max": ("terminal_n_max", int),
    "wps-weights": (
        "wps_weights",
        lambda text: tuple(_parse_int_list(part) for part in text.split(";")),
    ),
    "bundle": ("bundle", _parse_int_list),
    "budget": ("budget", int),
}


def build_config(args, file_values: dict) -> tuple[RunConfig, int | None]:
    cfg = RunConfig()
    budget = None
    for key, raw in file_values.items():
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"unknown config key {key!r}")
        attr, convert = _CONFIG_KEYS[key]
        try:
            value = convert(raw)
        except (ValueError, ConfigError) as exc:
            raise ConfigError(f"config key {key!r}: {exc}") from exc
        if attr == "budget":
            budget = value
        else:
            setattr(cfg, attr, value)
    # flags win over the config file
    if getattr(args, "k", None) is not None:
        cfg.quadric_k = _parse_int_list(args.k)
        cfg.f4_k = cfg.quadric_k
    if getattr(args, "l", None) is not None:
        cfg.quadric_l = _parse_int_list(args.l)
        cfg.f4_l = cfg.quadric_l
    if getattr(args, "family", None) is not None:
        cfg.family = args.family
    if getattr(args, "n_max", None) is not None:
        cfg.terminal_n_max = args.n_max
    if getattr(args, "weights", None):
        cfg.wps_weights = tuple(_parse_int_list(w) for w in args.weights)
    bundle = list(cfg.bundle)
    for i, name in enumerate(("n", "k0", "kinf")):
        if getattr(args, name, None) is not None:
            bundle[i] = getattr(args, name)
    cfg.bundle = tuple(bundle)
    if getattr(args, "budget", None) is not None:
        budget = args.budget
    if len(cfg.bundle) != 3:
        raise ConfigError("bundle needs exactly n, k0, kinf")
    if cfg.family not in ("both", "quadric", "f4"):
        raise ConfigError(f"unknown family {cfg.family!r}")
    return cfg, budget


# -- entry point -----------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    # The shared flags may appear before or after the subcommand; SUPPRESS
    # keeps the subparser from clobbering values the main parser already set.
    sup = argparse.SUPPRESS
    common = argparse.ArgumentParser(add_help=False)
    mode = common.add_mutually_exclusive_group()
    mode.add_argument("--json", action="store_true", default=sup,
                      help="JSON lines output (default)")
    mode.add_argument("--human", action="store_true", default=sup,
                      help="plain text output")
    common.add_argument("--golden", metavar="DIR", default=sup,
                        help="compare reports against stored files")
    common.add_argument("--update-golden", action="store_true", default=sup,
                        help="rewrite the stored golden file")
    common.add_argument("--config", metavar="FILE", default=sup,
                        help="flat key=value config file")
    common.add_argument("--budget", type=int, default=sup,
                        help="reduction step budget override")

    parser = argparse.ArgumentParser(
        prog="qhv",
        description="exact degeneration and bundle verification suites",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, **kwargs):
        return sub.add_parser(name, parents=[common], **kwargs)

    verify = add("verify", help="gluing, adjudication and quotient checks")
    verify.add_argument("target", choices=("quadric", "f4", "quotient"))
    verify.add_argument("--k", help="comma-separated twists for the zero chart")
    verify.add_argument("--l", help="comma-separated twists for the infinity chart")

    equi = add("equivariance", help="action/gluing commutation checks")
    equi.add_argument("--family", choices=("both", "quadric", "f4"))
    equi.add_argument("--k", help="comma-separated twists")
    equi.add_argument("--l", help="comma-separated twists")

    sing = add("singular-locus", help="per-chart Jacobian certification")
    sing.add_argument("--k", help="comma-separated twists")

    term = add("terminal", help="terminality classification table")
    term.add_argument("--n-max", type=int, dest="n_max")

    wps = add("wps", help="weighted projective vertex reports")
    wps.add_argument(
        "--weights", action="append", help="comma-separated weights (repeatable)"
    )

    bn = add("bundle-normalize", help="normal-form walk of a twisted bundle")
    bn.add_argument("--n", type=int)
    bn.add_argument("--k0", type=int)
    bn.add_argument("--kinf", type=int)

    add("dp-homology", help="minus-one curves and homology-lemma cases")
    add("all", help="every suite at the configured ranges")
    return parser


def _suite_names(args) -> tuple[str, list[str]]:
    if args.command == "verify":
        name = f"verify-{args.target}"
        return name, [name]
    if args.command == "all":
        return "all", list(ALL_ORDER)
    return args.command, [args.command]


def run(suites: list[str], cfg: RunConfig) -> list[CheckReport]:
    reports = []
    for suite in suites:
        reports.extend(SUITES[suite](cfg))
    return reports


def _golden_compare(label: str, reports: list[CheckReport], directory: str, update: bool):
    """Returns an error message or None; golden files ignore duration_ms."""
    path = Path(directory) / f"{label}.jsonl"
    produced = [r.to_json(with_duration=False) for r in reports]
    if update:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(produced) + "\n")
        return None
    if not path.exists():
        return f"golden file {path} does not exist (run with --update-golden)"
    stored = [line for line in path.read_text().splitlines() if line]
    if stored == produced:
        return None
    diff = [
        f"line {i + 1}:\n  golden:   {s}\n  produced: {p}"
        for i, (s, p) in enumerate(zip(stored, produced))
        if s != p
    ]
    if len(stored) != len(produced):
        diff.append(f"line counts differ: golden {len(stored)}, produced {len(produced)}")
    return f"golden mismatch for {path}:\n" + "\n".join(diff[:5])


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)

    def opt(name, default=None):
        return getattr(args, name, default)

    try:
        config_path = opt("config")
        file_values = read_config_file(config_path) if config_path else {}
        cfg, budget = build_config(args, file_values)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if budget is not None:
        try:
            ideals.set_step_budget(budget)
        except ValueError as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return 2

    label, suites = _suite_names(args)
    reports = run(suites, cfg)

    human = opt("human", False)
    for report in reports:
        if human:
            shown = " ".join(f"{k}={v}" for k, v in report.params.items())
            print(f"{report.status.upper():5s} {report.check_name} {shown} "
                  f"({report.duration_ms} ms)")
        else:
            print(report.to_json())

    exit_code = 0 if all(r.status == "pass" for r in reports) else 1
    golden_dir = opt("golden")
    if golden_dir:
        message = _golden_compare(
            label, reports, golden_dir, opt("update_golden", False)
        )
        if message:
            print(message, file=sys.stderr)
            exit_code = max(exit_code, 1)
    return exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
