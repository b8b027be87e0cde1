"""Command-line front end for the node-file storage simulator.

Exit codes: 0 success, 1 verification or decoding failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import storage
from .model import CodeParams, ParamError
from .repair import ErasedRead, Undecodable


def parse_params(text: str, width: int) -> CodeParams:
    try:
        n, k, n_a, tau = (int(x) for x in text.split(","))
    except ValueError:
        raise ParamError("--params takes n,k,nA,tau") from None
    return CodeParams(n, k, n_a, tau, width)


def _params(args) -> CodeParams | None:
    if args.params is None:
        return None
    return parse_params(args.params, args.field_width)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lowrepair", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="verb", required=True)

    def verb(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("store", help="store directory")
        return sp

    def code_flags(sp, required):
        sp.add_argument("--params", required=required, help="n,k,nA,tau")
        sp.add_argument("--field-width", type=int, default=8, help="symbol width w (default 8)")

    sp = verb("create", "write a manifest for a new store")
    code_flags(sp, True)

    sp = verb("ingest", "encode a file into node files")
    sp.add_argument("input")
    code_flags(sp, False)

    sp = verb("fail", "inject a node failure")
    sp.add_argument("node", type=int)

    sp = verb("repair", "restore failed nodes")
    sp.add_argument("--json", action="store_true", help="print the repair report as JSON")

    sp = verb("reassemble", "write the stored file back out")
    sp.add_argument("output")

    sp = verb("verify", "check every erasure pattern up to --max-erasures")
    sp.add_argument("--max-erasures", type=int, default=None)
    sp.add_argument("--seed", type=int, default=0, help="seed for sampled checks on large codes")

    sp = verb("report", "print metrics and optionally write them as CSV")
    sp.add_argument("--csv", default=None)
    for name in ("r", "t", "t_r", "l"):
        sp.add_argument(f"--{name.replace('_', '-')}", dest=name, type=int, default=None,
                        help=f"baseline parameter {name}")

    verb("puncture", "remove the highest-indexed Class B node")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return _run(args)
    except Undecodable as exc:
        print(f"undecodable: {exc}", file=sys.stderr)
        return 1
    except (ParamError, storage.StoreError, ErasedRead, IndexError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _run(args) -> int:
    if args.verb == "create":
        m = storage.create(args.store, _params(args))
        print(f"created (n={m.code.n}, k={m.code.k}) store in {args.store}")
    elif args.verb == "ingest":
        m = storage.ingest(args.input, args.store, _params(args))
        print(f"ingested {m.length} bytes into {m.stripes} stripes across {m.code.n} nodes")
    elif args.verb == "fail":
        storage.fail(args.store, args.node)
        print(f"node {args.node} failed")
    elif args.verb == "repair":
        rep, failed = storage.repair_store(args.store)
        if args.json:
            print(json.dumps(rep.to_json(), indent=1))
        else:
            k = storage.NodeStore(args.store).load_manifest().code.k
            print(f"repaired nodes {failed} ({rep.mode} repair)")
            print(f"symbols read: {rep.total_reads} ({rep.read_count} per stripe, lambda={rep.read_count / k:.4g})")
            if rep.fallback:
                print(f"row-decode fallback for {len(rep.fallback)} symbols per stripe")
    elif args.verb == "reassemble":
        size = storage.reassemble(args.store, args.output)
        print(f"wrote {size} bytes to {args.output}")
    elif args.verb == "verify":
        res = storage.verify(args.store, args.max_erasures, args.seed)
        print(res.summary())
        for pattern in res.failing:
            print(f"  undecodable: {list(pattern)}")
        return 0 if res.passed else 1
    elif args.verb == "report":
        extras = {name: getattr(args, name) for name in ("r", "t", "t_r", "l")}
        print(storage.report(args.store, args.csv, extras))
    elif args.verb == "puncture":
        m = storage.puncture(args.store)
        print(f"punctured to (n={m.code.n}, k={m.code.k})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
