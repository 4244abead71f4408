"""mkit: analyse k-fold circuits, verify the k-fold circuit property, build lattices.

Exit codes: 0 pass, 1 counterexample / failed check, 2 unreadable or
malformed input, 3 schema or precondition error, 4 capacity exceeded.
"""
import argparse
import json
import random
import sys

from . import __version__
from .count import CountMatroid, technicolour_vertices
from .document import ParseError, SchemaError, load_document
from .errors import CapacityError, DomainError, InvariantViolation
from .kfold import (MatchingInstance, balance_report, ear_decomposition, is_trivial, kfold_order,
                    matching_upper_bound, principal_partition, verify_kfold_property)
from .lattice import is_pseudomodular, lattice_of_cyclic_sets, lattice_of_flats

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_PARSE, EXIT_SCHEMA, EXIT_CAPACITY = 0, 1, 2, 3, 4
REPORT_VERSION = 1


def _subset_mask(m, text, default=None):
    if text is None:
        return m.full if default is None else m.mask(default)
    if text.strip() == "":
        return 0
    by_name = {str(e): e for e in m.ground}
    labels = []
    for tok in text.split(","):
        tok = tok.strip()
        if tok not in by_name:
            raise DomainError(f"{tok!r} is not in the ground set")
        labels.append(by_name[tok])
    return m.mask(labels)


def _els(m, mask):
    return list(m.elements(mask))


def analyze(doc, m, subset_text=None):
    s = _subset_mask(m, subset_text, doc.subset)
    out = {"ground_size": m.n, "rank": m.rank(), "subset": _els(m, s), "rank_of_subset": m.rank(s),
           "cyclic": m.is_cyclic(s), "k": kfold_order(m, s)}
    if out["k"] is None:
        out["status"] = "not cyclic"
    elif s == 0:
        out.update({"parts": [], "ell": 0, "connected": True, "trivial": True, "ears": 0,
                    "balance": {"intersection_rank": 0, "bound": 0, "balanced": True}})
    else:
        kf = principal_partition(m, s)
        out["parts"] = [_els(m, p) for p in kf.parts]
        out["ell"] = kf.ell
        out["connected"] = kf.connected
        out["trivial"] = is_trivial(kf, m)
        if kf.connected:
            out["ears"] = len(ear_decomposition(m, s))
        else:
            comps = m.components(s)
            out["components"] = [{"elements": _els(m, c), "k": m.corank(c),
                                  "ears": len(ear_decomposition(m, c)) if m.corank(c) else 0}
                                 for c in comps]
            out["ears"] = sum(c["ears"] for c in out["components"])
        rep = balance_report(m, kf)
        out["balance"] = rep.to_json(m)
        if isinstance(m, CountMatroid):
            out["technicolour_vertices"] = sorted(technicolour_vertices(m, kf))
    if doc.matching is not None:
        k, flats = doc.matching
        inst = MatchingInstance(m, k, [m.mask(f) for f in flats])
        bound, (z, part) = matching_upper_bound(inst)
        out["matching"] = {"k": k, "nu": inst.exact_nu, "bound": bound,
                           "witness": {"Z": _els(m, z), "partition": part}}
    return out, EXIT_OK


def _windows(m, count, size, seed):
    rng = random.Random(seed)
    size = min(size, m.n)
    for _ in range(count):
        picked = rng.sample(range(m.n), size)
        mask = 0
        for i in picked:
            mask |= 1 << i
        yield mask


def verify(doc, m, k_max, mode, seed, windows, window_size):
    if k_max < 1:
        raise DomainError("--k-max must be at least 1")
    if mode == "exhaustive":
        regions = [m.full]
    else:
        regions = list(_windows(m, windows, window_size, seed))
    counts = {}
    bad = []
    seen = set()
    for region in regions:
        v = verify_kfold_property(m, k_max, within=region)
        for k, c in v.counts.items():
            counts[k] = counts.get(k, 0) + c
        for rep in v.counterexamples:
            if rep.circuit.support not in seen:
                seen.add(rep.circuit.support)
                bad.append(rep.to_json(m))
    out = {"k_max": k_max, "mode": mode, "regions": len(regions),
           "counts": {str(k): c for k, c in sorted(counts.items())},
           "passed": not bad, "counterexamples": bad}
    if mode == "sampled":
        out["window_size"] = min(window_size, m.n)
    return out, EXIT_OK if not bad else EXIT_COUNTEREXAMPLE


def lattice(doc, m, which, check, mode, seed):
    lat = lattice_of_flats(m) if which == "flats" else lattice_of_cyclic_sets(m)
    fname = "r" if which == "flats" else "rho"
    out = {"which": which, "size": len(lat), "function": fname,
           "lattice": lat.to_json(lambda mask: _els(m, mask))}
    code = EXIT_OK
    if check == "pseudomodular":
        v = is_pseudomodular(lat, fname, mode, seed=seed)
        out["check"] = v.to_json(lambda i: _els(m, lat.elements[i]))
        code = EXIT_OK if v.passed else EXIT_COUNTEREXAMPLE
    elif check == "geometric":
        geo = lat.check_geometric(fname)
        out["check"] = {"check": "geometric", "passed": all(geo.values()), **geo}
        code = EXIT_OK if all(geo.values()) else EXIT_COUNTEREXAMPLE
    return out, code, lat


def _text(report):
    res = report["result"]
    lines = [f"mkit {report['command']}: {report['status']}"]
    for key in sorted(res):
        if key == "lattice":
            continue
        lines.append(f"  {key}: {json.dumps(res[key], sort_keys=True)}")
    return "\n".join(lines) + "\n"


def build_parser():
    p = argparse.ArgumentParser(prog="mkit", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"mkit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("file", help="matroid document (JSON)")
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.add_argument("--format", choices=("json", "text"), default="json")

    a = sub.add_parser("analyze", help="k-fold order, principal partition, ears and balance of a subset")
    common(a)
    a.add_argument("--subset", help="comma-separated element labels (default: the document's subset, else E)")

    v = sub.add_parser("verify", help="check every k-fold circuit up to --k-max for balance")
    common(v)
    v.add_argument("--k-max", type=int, default=2)
    v.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--windows", type=int, default=100, help="sampled mode: number of random windows")
    v.add_argument("--window-size", type=int, default=12, help="sampled mode: elements per window")

    lt = sub.add_parser("lattice", help="lattice of flats or cyclic sets, with optional checks")
    common(lt)
    lt.add_argument("--which", choices=("flats", "cyclic"), default="flats")
    lt.add_argument("--check", choices=("pseudomodular", "geometric", "none"), default="none")
    lt.add_argument("--emit", choices=("json", "dot"), default="json")
    lt.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    lt.add_argument("--seed", type=int, default=0)
    return p


def _write(text, path):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(args):
    doc = load_document(args.file)
    m = doc.build()
    flags = {}
    dot = None
    if args.command == "analyze":
        flags = {"subset": args.subset}
        result, code = analyze(doc, m, args.subset)
    elif args.command == "verify":
        flags = {"k_max": args.k_max, "mode": args.mode, "seed": args.seed}
        if args.mode == "sampled":
            flags.update(windows=args.windows, window_size=args.window_size)
        result, code = verify(doc, m, args.k_max, args.mode, args.seed, args.windows, args.window_size)
    else:
        flags = {"which": args.which, "check": args.check, "emit": args.emit, "mode": args.mode,
                 "seed": args.seed}
        result, code, lat = lattice(doc, m, args.which, args.check, args.mode, args.seed)
        if args.emit == "dot":
            dot = lat.to_dot(lambda mask: ",".join(map(str, m.elements(mask))) or "{}")
    status = "pass" if code == EXIT_OK else "fail"
    report = {"version": REPORT_VERSION, "mkit": __version__, "command": args.command,
              "input": {"file": args.file, "document": doc.to_json()}, "flags": flags,
              "status": status, "result": result}
    if dot is not None:
        _write(dot, args.out)
        sys.stderr.write(_text({**report, "result": result.get("check", {})}))
    elif args.format == "text":
        _write(_text(report), args.out)
    else:
        _write(json.dumps(report, sort_keys=True, indent=2) + "\n", args.out)
    return code


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except ParseError as exc:
        print(f"mkit: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"mkit: cannot read input: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (SchemaError, DomainError) as exc:
        print(f"mkit: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except CapacityError as exc:
        print(f"mkit: capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except InvariantViolation as exc:
        print(f"mkit: invariant violated: {exc}", file=sys.stderr)
        return EXIT_COUNTEREXAMPLE


if __name__ == "__main__":
    sys.exit(main())
