"""Command-line front end.

Three entry points:

    idealfilt compute WHAT   --instance FILE [--point ...] [--poly ...]
    idealfilt verify SUITE   --instance FILE [--seed S] [--trials K]
    idealfilt random-instance --char P --dim D --gens N ... [--output FILE]

Reports are JSON on stdout (``--format text`` for a flat human rendering)
and carry the precision block (T, E) of the instance.  The stratify report
additionally writes a tab-separated table with ``--output`` and, with
``--figures``, renders stratum-size and order-ratio charts as PNG files next
to it.  Exit codes: 0 all checks passed, 1 a refutation was found, 2 usage
or parse problem.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import suites
from .errors import IdealfiltError, ParseError
from .expansion import (OrdValue, check_coefficient_lemma, check_fcl,
                        expand, fcl_iterate, ord_h_expansion,
                        ord_h_membership, reassemble)
from .instances import (Instance, dump_instance, load_instance, parse_point,
                        point_to_data)
from .invariants import (check_lgs_independence, check_nsp, mu_tilde,
                         stratify)
from .leading import default_horizon, extract_lgs, jump_degree, sigma

_ORD_WINDOW = 4  # fcl_iterate step allowance per unit of truncation


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except ParseError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except IdealfiltError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="idealfilt",
        description="Exact jet-space invariants of derivative-closed "
                    "idealistic filtrations.")
    sub = parser.add_subparsers(dest="command", required=True)

    compute = sub.add_parser("compute", help="evaluate one quantity")
    compute.add_argument("what", choices=["saturate", "sigma", "lgs", "expand",
                                          "ordh", "mu", "stratify", "nsp"])
    _common_flags(compute)
    compute.add_argument("--poly", help="polynomial argument (expand/ordh)")
    compute.add_argument("--output", type=Path,
                         help="stratify: write the table here (TSV)")
    compute.add_argument("--figures", action="store_true",
                         help="stratify: render PNG charts next to --output")
    compute.set_defaults(run=_cmd_compute)

    verify = sub.add_parser("verify", help="run a property suite")
    verify.add_argument("suite", choices=["fcl", "coeff", "uniq",
                                          "independence", "semicont", "nsp",
                                          "all"])
    _common_flags(verify)
    verify.add_argument("--trials", type=int, default=50)
    verify.set_defaults(run=_cmd_verify)

    rand = sub.add_parser("random-instance",
                          help="emit a reproducible instance file")
    rand.add_argument("--char", type=int, required=True)
    rand.add_argument("--dim", type=int, default=2)
    rand.add_argument("--gens", type=int, default=1)
    rand.add_argument("--max-deg", type=int, default=4)
    rand.add_argument("--max-level", type=int, default=3)
    rand.add_argument("--seed", type=int, default=0)
    rand.add_argument("--output", type=Path)
    rand.set_defaults(run=_cmd_random_instance)
    return parser


def _common_flags(cmd: argparse.ArgumentParser) -> None:
    cmd.add_argument("--instance", required=True)
    cmd.add_argument("--point", help="comma-separated coordinates")
    cmd.add_argument("--truncation", type=int)
    cmd.add_argument("--horizon", type=int)
    cmd.add_argument("--seed", type=int)
    cmd.add_argument("--format", choices=["json", "text"], default="json")


def _load(args) -> Instance:
    try:
        text = Path(args.instance).read_text()
        data = json.loads(text)
    except OSError as err:
        raise ParseError(f"cannot read instance file: {err}") from err
    except json.JSONDecodeError as err:
        raise ParseError(f"instance file is not JSON: {err}") from err
    if not isinstance(data, dict):
        raise ParseError("instance must be a JSON object")
    if args.truncation is not None:
        data["truncation"] = args.truncation
    if getattr(args, "horizon", None) is not None:
        data["horizon"] = args.horizon
    return load_instance(data)


def _horizons(inst: Instance):
    """(E to use, censored flag): clamp the requested horizon to what the
    window can certify."""
    hard = default_horizon(inst.field, inst.ring.trunc)
    requested = inst.horizon
    if requested is None:
        return hard, False
    return min(requested, hard), requested > hard


def _point(args, inst: Instance) -> list:
    if args.point is None:
        return [inst.field.zero] * inst.ring.nvars
    return parse_point(inst.field, args.point.split(","), inst.ring.nvars,
                       "--point")


def _sigma_list(sig, E: int) -> list[int]:
    return [0] * (E + 1) if sig is None else list(sig)


def _emit(report: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        for line in _text_lines(report, 0):
            print(line)


def _text_lines(obj, depth: int):
    pad = "  " * depth
    if isinstance(obj, dict):
        for key in sorted(obj):
            value = obj[key]
            if isinstance(value, (dict, list)):
                yield f"{pad}{key}:"
                yield from _text_lines(value, depth + 1)
            else:
                yield f"{pad}{key}: {value}"
    elif isinstance(obj, list):
        for value in obj:
            if isinstance(value, (dict, list)):
                yield f"{pad}-"
                yield from _text_lines(value, depth + 1)
            else:
                yield f"{pad}- {value}"
    else:
        yield f"{pad}{obj}"


# ---------------------------------------------------------------------------
# compute

def _cmd_compute(args) -> int:
    inst = _load(args)
    E, censored = _horizons(inst)
    filt = inst.saturated()
    point = _point(args, inst)
    report = {"command": f"compute {args.what}", "T": inst.ring.trunc,
              "E": E, "censored": censored}
    code = 0

    if args.what == "saturate":
        report["generators"] = [{"poly": inst.ring.to_text(f),
                                 "level": str(a)} for f, a in filt.pairs]
    elif args.what == "sigma":
        sig = sigma(filt, E, point)
        report["point"] = point_to_data(inst.field, point)
        report["in_support"] = sig is not None
        report["sigma"] = _sigma_list(sig, E)
    elif args.what == "lgs":
        lgs = extract_lgs(filt, point, E)
        report["point"] = point_to_data(inst.field, point)
        report["sigma"] = _sigma_list(lgs.sigma, E)
        report["entries"] = lgs.describe()
        report["frame"] = [[inst.field.to_text(c) for c in row]
                           for row in lgs.C]
    elif args.what in ("expand", "ordh"):
        if not args.poly:
            raise ParseError(f"compute {args.what} needs --poly")
        f = inst.ring.from_text(args.poly)
        lgs = extract_lgs(filt, point, E)
        report["point"] = point_to_data(inst.field, point)
        if args.what == "expand":
            report["coefficients"] = expand(f, lgs).to_records()
        else:
            by_exp = ord_h_expansion(f, lgs)
            by_mem = ord_h_membership(f, lgs)
            report["expansion"] = by_exp.to_json()
            report["membership"] = by_mem.to_json()
            report["agree"] = by_exp == by_mem
            if not report["agree"]:
                code = 1
    elif args.what == "mu":
        report["point"] = point_to_data(inst.field, point)
        if filt.in_support(point):
            mu = mu_tilde(filt, extract_lgs(filt, point, E))
        else:
            mu = OrdValue.exact(Fraction(0))
        report["mu"] = mu.to_text()
        report["detail"] = mu.to_json()
    elif args.what == "stratify":
        result = stratify(filt, inst.points, E, inst.neighborhoods)
        rows = [_stratum_row(inst, r, E) for r in result["rows"]]
        report["rows"] = rows
        report["semicontinuity"] = result["semicontinuity"]
        report["purification"] = result["purification"]
        if not result["semicontinuity"]["pass"]:
            code = 1
        if args.figures and not args.output:
            raise ParseError("--figures needs --output to anchor file names")
        if args.output:
            _write_tsv(args.output, rows)
            if args.figures:
                _write_figures(args.output, rows, inst.ring.trunc)
    elif args.what == "nsp":
        result = check_nsp(filt, point, E, inst.center_samples)
        report.update(_nsp_jsonable(inst, result, E))
        if result["verdict"] == "refuted":
            code = 1

    _emit(report, args.format)
    return code


def _stratum_row(inst: Instance, row: dict, E: int) -> dict:
    mu = row["mu"]
    return {"point": point_to_data(inst.field, row["point"]),
            "in_support": row["in_support"],
            "sigma": _sigma_list(row["sigma"], E),
            "mu": mu.to_text(), "mu_detail": mu.to_json()}


def _nsp_jsonable(inst: Instance, result: dict, E: int) -> dict:
    out = dict(result)
    out["point"] = point_to_data(inst.field, result["point"])
    if "sigma" in out:
        out["sigma"] = list(out["sigma"])
    if "samples" in out:
        out["samples"] = [dict(s, point=point_to_data(inst.field, s["point"]),
                               sigma=_sigma_list(
                                   None if s["sigma"] is None else s["sigma"],
                                   E))
                          for s in result["samples"]]
    return out


def _write_tsv(path: Path, rows: list[dict]) -> None:
    lines = ["index\tpoint\tin_support\tsigma\tmu"]
    for i, row in enumerate(rows):
        lines.append("\t".join([
            str(i), ";".join(row["point"]),
            "true" if row["in_support"] else "false",
            ",".join(str(s) for s in row["sigma"]), row["mu"]]))
    path.write_text("\n".join(lines) + "\n")


def _write_figures(table_path: Path, rows: list[dict], trunc: int) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    base = table_path.with_suffix("")
    counts: dict[str, int] = {}
    for row in rows:
        label = ",".join(str(s) for s in row["sigma"])
        counts[label] = counts.get(label, 0) + 1
    fig, ax = plt.subplots(figsize=(6, 4))
    labels = sorted(counts)
    ax.bar(range(len(labels)), [counts[k] for k in labels])
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=30, ha="right")
    ax.set_xlabel("sigma stratum")
    ax.set_ylabel("sample points")
    ax.set_title("stratum sizes")
    fig.tight_layout()
    fig.savefig(f"{base}_strata.png", dpi=120)
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(6, 4))
    xs = range(len(rows))
    ys, marks = [], []
    for row in rows:
        detail = row["mu_detail"]
        value = detail["value"]
        ys.append(float(Fraction(value)) if value is not None else trunc + 1.0)
        marks.append(detail["kind"])
    for kind, marker in (("exact", "o"), ("at_least", "^"), ("infinite", "*")):
        pts = [(x, y) for x, y, m in zip(xs, ys, marks) if m == kind]
        if pts:
            ax.scatter([p[0] for p in pts], [p[1] for p in pts],
                       marker=marker, label=kind)
    ax.set_xlabel("sample index")
    ax.set_ylabel("minimal order ratio (lower bound)")
    ax.set_title("order ratio across the sample")
    ax.legend()
    fig.tight_layout()
    fig.savefig(f"{base}_mu.png", dpi=120)
    plt.close(fig)


# ---------------------------------------------------------------------------
# verify

def _cmd_verify(args) -> int:
    inst = _load(args)
    E, _ = _horizons(inst)
    seed = args.seed if args.seed is not None else (inst.seed or 0)
    names = (["uniq", "fcl", "coeff", "independence", "semicont", "nsp"]
             if args.suite == "all" else [args.suite])
    results = [_run_suite(name, inst, E, seed, args.trials) for name in names]
    report = {"command": f"verify {args.suite}", "T": inst.ring.trunc, "E": E,
              "seed": seed, "results": results,
              "pass": all(r["pass"] for r in results)}
    _emit(report, args.format)
    return 0 if report["pass"] else 1


def _origin_system(inst: Instance, filt, E):
    origin = [inst.field.zero] * inst.ring.nvars
    if not filt.in_support(origin):
        return None
    return extract_lgs(filt, None, E)


def _run_suite(name: str, inst: Instance, E: int, seed, trials: int) -> dict:
    filt = inst.saturated()
    ring = inst.ring
    rng = suites.rng_for(seed, name)
    out = {"suite": name, "pass": True, "trials": 0, "failures": []}

    if name in ("uniq", "fcl", "coeff"):
        lgs = _origin_system(inst, filt, E)
        if lgs is None:
            out["skipped"] = "origin is outside the support"
            return out

    if name == "uniq":
        exp_qs = None
        for f in suites.random_jets(ring, rng, trials):
            result = expand(f, lgs)
            if exp_qs is None:
                exp_qs = lgs.orders()
            ok = reassemble(result) == ring.truncate(f, ring.trunc)
            window = all(e[l] < exp_qs[l]
                         for _, aB in result.items() for e in aB
                         for l in range(lgs.size))
            out["trials"] += 1
            if not (ok and window):
                out["failures"].append({"poly": ring.to_text(f),
                                        "round_trip": ok, "window": window})
    elif name == "fcl":
        for f, a in suites.filtration_elements(filt, rng, trials):
            rep = check_fcl(filt, f, a, lgs)
            steps = fcl_iterate(filt, f, a, lgs, _ORD_WINDOW * ring.trunc + 16)
            out["trials"] += 1
            if not (rep["holds"] and steps["holds"]):
                out["failures"].append({"poly": ring.to_text(f),
                                        "level": str(a),
                                        "coefficients": rep["holds"],
                                        "iteration": steps["holds"]})
    elif name == "coeff":
        mu = mu_tilde(filt, lgs)
        levels = sorted({a for _, a in inst.generators}) or [Fraction(1)]
        slopes = [Fraction(0)]
        floor = mu.lower_bound()
        if floor is not None and floor > 1:
            slopes.append((1 + floor) / 2)
        elif floor is None:
            slopes.append(Fraction(3, 2))
        for nu in slopes:
            rep = check_coefficient_lemma(filt, levels[-1], nu, lgs)
            out["trials"] += 1
            if not rep["holds"]:
                out["failures"].append({"nu": str(nu),
                                        "forward": rep["forward_failures"],
                                        "reverse": rep["reverse_failures"]})
    elif name == "independence":
        lgs = _origin_system(inst, filt, E)
        if lgs is None:
            out["skipped"] = "origin is outside the support"
            return out
        cands = suites.candidate_systems(lgs, rng, 3)
        rep = check_lgs_independence(filt, cands)
        out["trials"] = rep["candidates"]
        if not rep["pass"]:
            out["failures"].append(rep)
    elif name == "semicont":
        rep = stratify(filt, inst.points, E, inst.neighborhoods)
        out["trials"] = len(inst.points)
        if not rep["semicontinuity"]["pass"]:
            out["failures"] = rep["semicontinuity"]["witnesses"]
    elif name == "nsp":
        rep = check_nsp(filt, None, E, inst.center_samples)
        out["trials"] = 1
        out["verdict"] = rep["verdict"]
        if rep["verdict"] == "refuted":
            out["failures"].append({"low_coefficients":
                                    rep.get("low_coefficients", [])})

    out["pass"] = not out["failures"]
    return out


# ---------------------------------------------------------------------------
# random-instance

def _cmd_random_instance(args) -> int:
    data = suites.random_instance_data(args.char, args.dim, args.gens,
                                       args.max_deg, args.max_level,
                                       args.seed)
    text = dump_instance(data)
    if args.output:
        args.output.write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
