"""Command line entry point: ``labelsem {combine,simulate,fixed-point,verify}``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import verification
from .combination import (
    CompositeConcept,
    CompoundConcept,
    composite_membership,
    compound_membership,
    flatten_compound,
)
from .errors import ConfigError, LabelSemError, UnsupportedStructureError
from .experiments import ExperimentConfig, run_sweep, summarize, write_csv
from .game import ElementDistribution, positive_region_probability, predicted_fixed_point, standard_error
from .semantics import Label, Sign, SignedLabel, ThresholdDistribution

EXIT_OK, EXIT_FAILED, EXIT_BAD_INPUT = 0, 1, 2

_SIGNS = {"+": Sign.POSITIVE, "positive": Sign.POSITIVE, "1": Sign.POSITIVE,
          "-": Sign.NEGATIVE, "~": Sign.NEGATIVE, "negative": Sign.NEGATIVE, "0": Sign.NEGATIVE}


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(str(path), f"invalid JSON: {exc}") from None


def _parse_label(spec, where):
    if not isinstance(spec, dict):
        raise ConfigError(where, "label must be an object")
    sign = _SIGNS.get(str(spec.get("sign", "+")).lower())
    if sign is None:
        raise ConfigError(f"{where}.sign", f"unknown sign {spec.get('sign')!r}")
    label = Label(spec.get("prototype", [1.0]), ThresholdDistribution(float(spec.get("threshold", 1.0))))
    return SignedLabel(label, sign)


def _parse_composite(spec, where):
    if not isinstance(spec, dict) or "labels" not in spec or "weights" not in spec:
        raise ConfigError(where, "composite needs 'labels' and 'weights'")
    labels = [_parse_label(l, f"{where}.labels[{i}]") for i, l in enumerate(spec["labels"])]
    return CompositeConcept(labels, spec["weights"])


def _memberships(concept, spec, where):
    if "memberships" in spec:
        return spec["memberships"]
    if "points" in spec:
        return concept.label_memberships(spec["points"])
    raise ConfigError(where, "need 'points' or 'memberships'")


def evaluate_concept(spec: dict) -> dict:
    """Evaluate a composite or compound concept described as JSON."""
    if "left" in spec or "right" in spec:
        left = _parse_composite(spec.get("left"), "left")
        right = _parse_composite(spec.get("right"), "right")
        compound = CompoundConcept(left, right, tuple(spec.get("pair_weights", (1.0, 1.0))))
        m_left = _memberships(left, spec if ("points" in spec or "memberships" in spec) else spec["left"], "left")
        m_right = _memberships(right, spec if ("points" in spec or "memberships" in spec) else spec["right"], "right")
        mu_left = composite_membership(left, m_left)
        mu_right = composite_membership(right, m_right)
        try:
            coefficients = flatten_compound(compound).tolist()
        except (UnsupportedStructureError, ValueError):
            coefficients = None
        return {
            "kind": "compound",
            "membership": compound_membership(compound, mu_left, mu_right),
            "left_membership": mu_left,
            "right_membership": mu_right,
            "coefficients": coefficients,
        }
    concept = _parse_composite(spec, "concept")
    return {
        "kind": "composite",
        "membership": composite_membership(concept, _memberships(concept, spec, "concept")),
        "prototype_bits": list(concept.prototype_bits),
    }


def cmd_combine(args):
    if not args.config:
        raise ConfigError("--config", "a concept description is required")
    print(json.dumps(evaluate_concept(_read_json(args.config)), indent=2))
    return EXIT_OK


def cmd_simulate(args):
    if not args.config:
        raise ConfigError("--config", "an experiment config is required")
    data = _read_json(args.config)
    if args.seed is not None and isinstance(data, dict):
        data["master_seed"] = args.seed
    cfg = ExperimentConfig.from_dict(data)
    records = run_sweep(cfg, thin=args.thin)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_csv(records, fh)
    else:
        write_csv(records, sys.stdout)
    for s in summarize(records):
        print(f"w={s.w:g} t={s.timestep} mean_lambda={s.mean_lambda:.4f} mean_sd={s.mean_sd:.4f} "
              f"({s.replicates} replicates)", file=sys.stderr)
    return EXIT_OK


def cmd_fixed_point(args):
    if args.config:
        data = _read_json(args.config)
        if not isinstance(data, dict) or "element_distribution" not in data:
            raise ConfigError("element_distribution", "missing from config")
        bounds = data["element_distribution"]
    else:
        bounds = (args.x1, args.x2)
    try:
        dist = ElementDistribution(tuple(tuple(b) for b in bounds))
    except (TypeError, ValueError) as exc:
        raise ConfigError("element_distribution", str(exc)) from None
    predicted = predicted_fixed_point(dist)
    seed = 0 if args.seed is None else args.seed
    mc = positive_region_probability(dist, predicted, 1.0, args.samples, seed)
    print(f"predicted_fixed_point {predicted:.6f}")
    print(f"monte_carlo_p_plus {mc:.6f} +- {standard_error(mc, args.samples):.6f} ({args.samples} samples)")
    return EXIT_OK


def cmd_verify(args):
    results = verification.run_all(seed=0 if args.seed is None else args.seed)
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILED


def build_parser():
    parser = argparse.ArgumentParser(prog="labelsem", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", type=Path, help="JSON input file")
        p.add_argument("--seed", type=int, help="override the master seed")
        return p

    common(sub.add_parser("combine", help="evaluate a composite or compound concept")).set_defaults(func=cmd_combine)

    p = common(sub.add_parser("simulate", help="run a language game sweep and write CSV"))
    p.add_argument("--out", type=Path, help="CSV output path (default stdout)")
    p.add_argument("--thin", type=int, default=10, help="record every K timesteps")
    p.set_defaults(func=cmd_simulate)

    p = common(sub.add_parser("fixed-point", help="predicted weight limit at w = 1"))
    p.add_argument("--x1", type=float, nargs=2, default=(0.0, 1.0), metavar=("A", "B"))
    p.add_argument("--x2", type=float, nargs=2, default=(0.0, 0.5), metavar=("A", "B"))
    p.add_argument("--samples", type=int, default=10**6)
    p.set_defaults(func=cmd_fixed_point)

    common(sub.add_parser("verify", help="run the oracle equivalence suites")).set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (LabelSemError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
