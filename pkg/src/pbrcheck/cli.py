"""Command-line reports.

Every subcommand builds a report document, prints it as a table, JSON or
CSV, and exits with status 1 if any of its checks failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from importlib import resources

from . import cabbolet as cb
from .ontology import OntologicalModel, classify, overlapping_preparations, product_model, validate_against_quantum
from .pbr import (
    PRODUCT_PREPARATION_LABELS,
    SINGLE_PREPARATIONS,
    antidistinguishes,
    build_xi_basis,
    find_contradiction_witness,
    overlap_fraction_affected,
    product_preparations,
    verify_witness,
)
from .qlinalg import born_probability, computational_basis, gram_residual, is_entangled

DEFAULTS = {"format": "table", "tol": 1e-12, "seed": 42, "n": 100_000}
SAMPLE_TOL = 0.01


@dataclass
class Report:
    command: str
    inputs: dict
    results: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def check(self, name, claim, value, expected, tol, passed=None):
        if passed is None:
            passed = abs(value - expected) <= tol
        self.checks.append(
            {"name": name, "claim": claim, "value": value, "expected": expected, "tol": tol, "passed": bool(passed)}
        )

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "pass_fail": {c["name"]: c["passed"] for c in self.checks},
            "checks": self.checks,
            "notes": self.notes,
            "passed": self.passed,
        }


def _key(label) -> str:
    return ",".join(label) if isinstance(label, tuple) else str(label)


def _cplx(z) -> list:
    return [float(z.real), float(z.imag)]


def load_model(path) -> OntologicalModel:
    if path is None:
        return cb.build_cabbolet_model()
    with open(path) as fp:
        return OntologicalModel.loads(fp.read())


def bundled_model_path(name: str):
    return resources.files("pbrcheck") / "data" / name


def cmd_xi_basis(args) -> Report:
    rep = Report("xi-basis", {"basis": args.basis, "tol": args.tol})
    basis = build_xi_basis() if args.basis == "xi" else computational_basis(4)
    preps = list(product_preparations().values())
    residual = gram_residual(basis)
    rep.results["vectors"] = {_key(lab): [_cplx(a) for a in v.amplitudes] for lab, v in zip(basis.labels, basis)}
    rep.results["gram_residual"] = residual
    rep.check("orthonormal", "outcome vectors form an orthonormal basis", residual, 0.0, args.tol)
    cert = antidistinguishes(basis, preps, tol=args.tol)
    if cert is None:
        rep.results["certificate"] = None
        rep.check(
            "antidistinguishes",
            "each outcome is orthogonal to one product preparation",
            math.nan,
            0.0,
            args.tol,
            passed=False,
        )
    else:
        rep.results["certificate"] = {
            "pairing": {str(i + 1): _key(PRODUCT_PREPARATION_LABELS[j]) for i, j in cert.pairing.items()},
            "max_residual": cert.max_residual,
        }
        rep.check(
            "antidistinguishes",
            "each outcome is orthogonal to one product preparation",
            cert.max_residual,
            0.0,
            args.tol,
        )
        if args.basis == "xi":
            rep.check(
                "pairing_diagonal",
                "outcome i excludes product preparation i",
                float(all(i == j for i, j in cert.pairing.items())),
                1.0,
                0.0,
            )
    rep.results["entangled"] = {_key(lab): is_entangled(v) for lab, v in zip(basis.labels, basis)}
    return rep


def cmd_step1(args) -> Report:
    rep = Report("step1", {"model": args.model or "builtin:cabbolet", "tol": args.tol})
    single = load_model(args.model)
    model = product_model(single, single)
    basis = build_xi_basis()
    prep_states = product_preparations()
    rep.results["classification"] = classify(single)
    rep.results["overlaps"] = {
        f"{p}|{q}": sorted(map(_key, shared)) for (p, q), shared in overlapping_preparations(single).items()
    }
    witness = find_contradiction_witness(model, basis, prep_states, tol=args.tol)
    if witness is None:
        rep.results["witness"] = None
        rep.check("witness", "some pair state admits no outcome", 0.0, 1.0, 0.0)
        return rep
    region = {witness.ontic_label}
    fractions = overlap_fraction_affected(model, region, PRODUCT_PREPARATION_LABELS)
    rep.results["witness"] = {
        "ontic": list(witness.ontic_label),
        "forbidden": {out: _key(prep) for out, (prep, _) in witness.forbidden.items()},
        "forbidden_prob": {out: prob for out, (_, prob) in witness.forbidden.items()},
    }
    rep.results["affected_fraction"] = {_key(p): f for p, f in fractions.items()}
    rep.check("witness", "some pair state admits no outcome", 1.0, 1.0, 0.0)
    rep.check(
        "witness_verified",
        "every outcome is excluded by a preparation reaching the witness",
        float(verify_witness(witness, model, basis, prep_states, tol=args.tol)),
        1.0,
        0.0,
    )
    for p, f in fractions.items():
        rep.check(f"fraction[{_key(p)}]", "one quarter of each ensemble sits on the witness", f, 0.25, args.tol)
    return rep


def cmd_mismatch(args) -> Report:
    rep = Report("mismatch", {"tol": args.tol})
    rep.notes.append(cb.UNPRIMED_NOTE)
    xi = build_xi_basis()
    preps = product_preparations()
    rows = {}
    for instr, vec in zip(cb.INSTRUCTIONS, xi):
        test = cb.default_test_state(instr)
        main = cb.born_mismatch(instr, vec, test)
        sweep = {_key(p): cb.born_mismatch(instr, vec, s) for p, s in preps.items()}
        basis, effect = cb.plus_one_effect(instr)
        rows[instr.name] = {
            "test_state": [_cplx(a) for a in test.amplitudes],
            "operational_prob": main.operational_prob,
            "entangled_born_prob": main.entangled_born_prob,
            "discrepancy": main.discrepancy,
            "sweep": {
                p: {"operational": r.operational_prob, "born": r.entangled_born_prob, "discrepancy": r.discrepancy}
                for p, r in sweep.items()
            },
            "plus_one_members": [_key(basis.labels[i]) for i in sorted(effect.member_indices)],
            "members_entangled": [is_entangled(basis[i]) for i in sorted(effect.member_indices)],
            "xi_entangled": is_entangled(vec),
            "equivalent": main.discrepancy <= args.tol,
        }
        rep.check(f"{instr.name}.operational", "+1 is certain on its own product vector", main.operational_prob, 1.0, args.tol)
        rep.check(f"{instr.name}.born", "the entangled vector gives one half there", main.entangled_born_prob, 0.5, args.tol)
        rep.check(
            f"{instr.name}.not_equivalent",
            "the +1 coarse-graining differs from the entangled outcome",
            main.discrepancy,
            0.0,
            args.tol,
            passed=main.discrepancy > args.tol,
        )
        rep.check(
            f"{instr.name}.entanglement",
            "entangled outcome vector versus product +1 members",
            float(is_entangled(vec) and not any(rows[instr.name]["members_entangled"])),
            1.0,
            0.0,
        )
    rep.results["instructions"] = rows
    return rep


def _sample_all(args):
    model = cb.build_cabbolet_pair_model()
    return model, {p: cb.draw_ensemble(model, p, args.n, args.seed) for p in PRODUCT_PREPARATION_LABELS}


def cmd_sample(args) -> Report:
    if args.n < 1:
        raise ValueError("--n must be at least 1")
    # 0.01 at the default n; five binomial standard deviations for small samples
    tol = max(SAMPLE_TOL, 5 * math.sqrt(0.25 * 0.75 / args.n))
    rep = Report("sample", {"n": args.n, "seed": args.seed, "tol": tol})
    model, samples = _sample_all(args)
    ensembles = {}
    for p, sample in samples.items():
        freqs = sample.frequencies()
        mu = model.preparation(p)
        overlap = freqs[cb.OVERLAP_PAIR]
        conditional = {
            instr.name: cb.empirical_instruction_stats(instr, sample, region={cb.OVERLAP_PAIR})
            for instr in cb.INSTRUCTIONS
        }
        ensembles[_key(p)] = {
            "frequencies": {_key(lam): f for lam, f in freqs.items()},
            "exact": {_key(lam): mu[lam] for lam in model.space},
            "plus_one_frequency": {i.name: cb.empirical_instruction_stats(i, sample) for i in cb.INSTRUCTIONS},
            "plus_one_exact": {i.name: cb.exact_plus_one_probability(model, p, i) for i in cb.INSTRUCTIONS},
            "conditional_plus_one_on_overlap": conditional,
        }
        rep.check(f"overlap[{_key(p)}]", "a quarter of the pairs land on the overlap", overlap, 0.25, tol)
        for name, f in conditional.items():
            if not math.isnan(f):
                rep.check(f"conditional[{_key(p)}].{name}", "no instruction yields +1 on the overlap", f, 0.0, 0.0)
    rep.results["ensembles"] = ensembles
    rep.results["instruction_stats"] = [
        {"preparation": _key(p), **cb.instruction_stats_dict(i, s)} for p, s in samples.items() for i in cb.INSTRUCTIONS
    ]
    return rep


def cmd_validate_model(args) -> Report:
    rep = Report("validate-model", {"model": args.model or "builtin:cabbolet", "tol": args.tol})
    model = load_model(args.model)
    targets = [
        (p, m, out, born_probability(vec, SINGLE_PREPARATIONS[p]))
        for p in SINGLE_PREPARATIONS
        for m, basis in cb.LOCAL_BASES.items()
        for out, vec in zip(basis.labels, basis)
    ]
    report = validate_against_quantum(model, targets, tol=args.tol)
    rep.results["classification"] = classify(model)
    rep.results["outcome_deterministic"] = model.is_outcome_deterministic()
    rep.results["rows"] = [
        {"prep": r.prep, "meas": r.meas, "outcome": r.outcome, "predicted": r.predicted, "required": r.required}
        for r in report.rows
    ]
    for r in report.rows:
        rep.check(f"P({r.outcome}|{r.prep},{r.meas})", "single-system Born statistics", r.predicted, r.required, args.tol)
    return rep


COMMANDS = {
    "xi-basis": cmd_xi_basis,
    "step1": cmd_step1,
    "mismatch": cmd_mismatch,
    "sample": cmd_sample,
    "validate-model": cmd_validate_model,
}


def render_table(rep: Report) -> str:
    lines = [f"== {rep.command} ==  " + ", ".join(f"{k}={v}" for k, v in rep.inputs.items())]
    for note in rep.notes:
        lines.append(f"note: {note}")
    for c in rep.checks:
        status = "PASS" if c["passed"] else "FAIL"
        lines.append(
            f"[{status}] {c['name']:<32} value={c['value']:.12g} expected={c['expected']:.12g} "
            f"tol={c['tol']:g}  ({c['claim']})"
        )
    lines.append("overall: " + ("PASS" if rep.passed else "FAIL"))
    return "\n".join(lines)


def render_csv(rep: Report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["name", "value", "expected", "tol", "passed", "claim"])
    for c in rep.checks:
        w.writerow([c["name"], repr(c["value"]), repr(c["expected"]), repr(c["tol"]), c["passed"], c["claim"]])
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json", "csv"), default=DEFAULTS["format"])
    common.add_argument("--tol", type=float, default=DEFAULTS["tol"])
    common.add_argument("--seed", type=int, default=DEFAULTS["seed"])
    common.add_argument("--n", type=int, default=DEFAULTS["n"])
    common.add_argument("--model", default=None, help="single-system model JSON (default: built-in toy model)")

    parser = argparse.ArgumentParser(prog="pbrcheck", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    xi = sub.add_parser("xi-basis", parents=[common], help="entangled basis and antidistinguishability")
    xi.add_argument("--basis", choices=("xi", "computational"), default="xi")
    sub.add_parser("step1", parents=[common], help="search the pair model for a contradiction witness")
    sub.add_parser("mismatch", parents=[common], help="compare M1'..M4' with the entangled outcomes")
    smp = sub.add_parser("sample", parents=[common], help="Monte-Carlo ensembles of pairs")
    smp.add_argument(
        "--prep", default="0,+", help="ensemble dumped with --format csv, e.g. '0,+' (default: %(default)s)"
    )
    sub.add_parser("validate-model", parents=[common], help="compare a model with single-system Born statistics")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rep = COMMANDS[args.command](args)
    except (ValueError, KeyError, OSError) as exc:
        print(f"pbrcheck: error: {exc}", file=sys.stderr)
        return 2
    if args.format == "json":
        print(json.dumps(rep.to_dict(), indent=2, sort_keys=True))
    elif args.format == "csv" and args.command == "sample":
        prep = tuple(args.prep.split(","))
        if prep not in PRODUCT_PREPARATION_LABELS:
            print(f"pbrcheck: error: unknown ensemble {args.prep!r}", file=sys.stderr)
            return 2
        model = cb.build_cabbolet_pair_model()
        buf = io.StringIO()
        cb.write_sample_csv(cb.draw_ensemble(model, prep, args.n, args.seed), buf)
        sys.stdout.write(buf.getvalue())
    elif args.format == "csv":
        sys.stdout.write(render_csv(rep))
    else:
        print(render_table(rep))
    return 0 if rep.passed else 1


if __name__ == "__main__":
    sys.exit(main())
