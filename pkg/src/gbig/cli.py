"""Command-line front end: generate, train, explain, evaluate.

Exit codes: 0 success, 1 domain error, 2 usage error. Log verbosity is
controlled by the GBIG_LOG environment variable (DEBUG/INFO/WARNING).
"""

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import bundle_io, metrics, synthgen
from .attribution import explanation_mask
from .errors import GbigError
from .gcn import GcnClassifier
from .metrics import METHOD_NAMES, MethodConfig

log = logging.getLogger("gbig")


def _add_method_flags(p):
    p.add_argument("--threshold", type=float, default=0.8)
    p.add_argument("--steps", type=int, default=64)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--mode", choices=["target-substitution", "path-node"],
                   default="target-substitution")
    p.add_argument("--weighting", choices=["per-path", "unweighted"],
                   default="per-path")
    p.add_argument("--path-budget", type=int, default=1024)
    p.add_argument("--seed", type=int, default=0)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="gbig",
        description="Graph-based integrated gradients toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a synthetic motif bundle")
    p.add_argument("--out", required=True)
    p.add_argument("--motif", choices=["house", "circle"], default="house")
    p.add_argument("--homophily", type=int, choices=[-1, 1], default=1)
    p.add_argument("--num-subgraphs", type=int, default=10)
    p.add_argument("--subgraph-size", type=int, default=12)
    p.add_argument("--edge-prob", type=float, default=0.15)
    p.add_argument("--feature-dim", type=int, default=16)
    p.add_argument("--informative-dim", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("train", help="train a GCN on a bundle")
    p.add_argument("--bundle", required=True)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--lr", type=float, default=0.01)
    p.add_argument("--epochs", type=int, default=200)
    p.add_argument("--weight-decay", type=float, default=5e-4)
    p.add_argument("--hidden-dim", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("explain", help="dump one target's attribution")
    p.add_argument("--bundle", required=True)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--target", type=int, required=True)
    p.add_argument("--method", choices=METHOD_NAMES, default="gb-ig")
    p.add_argument("--out", required=True)
    _add_method_flags(p)

    p = sub.add_parser("evaluate", help="run metrics over the test targets")
    p.add_argument("--bundle", required=True)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--methods", default="ig-zero,ig-uniform,ig-gaussian,gb-ig")
    p.add_argument("--out", required=True)
    _add_method_flags(p)

    return parser


def _load_model(args):
    bundle = bundle_io.read_bundle(args.bundle)
    weights = bundle_io.load_checkpoint(args.checkpoint)
    model = GcnClassifier.from_weights(bundle.graph, weights)
    return bundle, model


def _method_configs(args):
    names = [m.strip() for m in args.methods.split(",") if m.strip()]
    return [
        MethodConfig(name=m, steps=args.steps, sigma=args.sigma,
                     mode=args.mode, weighting=args.weighting,
                     path_budget=args.path_budget, seed=args.seed)
        for m in names
    ]


def _cmd_generate(args):
    params = synthgen.GenParams(
        motif=args.motif, homophily=args.homophily,
        num_subgraphs=args.num_subgraphs, subgraph_size=args.subgraph_size,
        edge_prob=args.edge_prob, feature_dim=args.feature_dim,
        informative_dim=args.informative_dim, seed=args.seed,
    )
    bundle = synthgen.generate(params)
    bundle_io.write_bundle(bundle, args.out)
    log.info("wrote bundle %s (%d nodes)", args.out, bundle.graph.num_nodes)
    return 0


def _cmd_train(args):
    bundle = bundle_io.read_bundle(args.bundle)
    model = GcnClassifier(
        hidden_dim=args.hidden_dim, learning_rate=args.lr, epochs=args.epochs,
        weight_decay=args.weight_decay, seed=args.seed,
    )
    model.fit(bundle.graph, bundle.features, bundle.labels,
              bundle.masks["train"])
    bundle_io.save_checkpoint(model.weights_, args.checkpoint)
    losses = model.loss_history_
    log.info("loss %.6f -> %.6f over %d epochs", losses[0], losses[-1], len(losses))
    for i, v in enumerate(losses):
        log.debug("epoch %d loss %.6f", i, v)
    acc = model.score(bundle.features, bundle.labels, bundle.masks["test"])
    log.info("test accuracy %.4f", acc)
    return 0


def _cmd_explain(args):
    bundle, model = _load_model(args)
    cfg = _method_configs_single(args)
    attribution = metrics.explain_target(
        model, bundle.graph, bundle.features, args.target, cfg
    )
    mask = explanation_mask(attribution, bundle.graph, args.threshold)
    obj = {
        "target": attribution.target,
        "method": attribution.method,
        "params": {k: v for k, v in attribution.params.items()},
        "values": [[float(v) for v in row] for row in attribution.values],
        "mask_nodes": sorted(mask.nodes),
        "node_scores": {str(k): v for k, v in sorted(mask.scores.items())},
        "threshold": args.threshold,
    }
    Path(args.out).write_text(json.dumps(obj, sort_keys=True) + "\n")
    return 0


def _method_configs_single(args):
    return MethodConfig(name=args.method, steps=args.steps, sigma=args.sigma,
                        mode=args.mode, weighting=args.weighting,
                        path_budget=args.path_budget, seed=args.seed)


def _cmd_evaluate(args):
    bundle, model = _load_model(args)
    methods = _method_configs(args)
    rows = metrics.evaluate(model, bundle, methods, threshold=args.threshold)
    config = {
        "threshold": args.threshold,
        "steps": args.steps,
        "sigma": args.sigma,
        "mode": args.mode,
        "weighting": args.weighting,
        "path_budget": args.path_budget,
        "seed": args.seed,
    }
    bundle_io.write_report(rows, args.out, config=config)
    print(metrics.format_table(rows))
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "train": _cmd_train,
    "explain": _cmd_explain,
    "evaluate": _cmd_evaluate,
}


def run(argv):
    logging.basicConfig(
        level=os.environ.get("GBIG_LOG", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s",
    )
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except GbigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
