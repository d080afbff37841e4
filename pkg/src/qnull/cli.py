"""Command-line front end: ``qnull {obstruct,construct,verify,pushforward}``.

Exit codes: 0 accept (or success), 1 reject, 2 bad input, including loops
sampled too coarsely to decide anything.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from . import io
from .obstruction import WindingError, obstruction_trace
from .spaces import LiftError, ContractionError, RP2, WEDGE, rp2_generator
from .tolerances import default_verify_tol

EXIT_OK, EXIT_REJECT, EXIT_INPUT = 0, 1, 2


def _err(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return EXIT_INPUT


def cmd_obstruct(args) -> int:
    try:
        w, dets = obstruction_trace(args.n, args.samples)
    except WindingError as exc:
        return _err(f"refused: {exc}")
    except ValueError as exc:
        return _err(str(exc))
    print(f"winding = {w}")
    phases = np.unwrap(np.angle(dets))
    rows = [(k, k / len(dets), d.real, d.imag, ph) for k, (d, ph) in enumerate(zip(dets, phases))]
    out = open(args.csv, "w", newline="") if args.csv else sys.stdout
    try:
        writer = csv.writer(out)
        writer.writerow(["k", "s", "re_det", "im_det", "phase"])
        for row in rows:
            writer.writerow([row[0]] + [format(v, ".17g") for v in row[1:]])
    finally:
        if args.csv:
            out.close()
    return EXIT_OK


def _print_log(cert) -> None:
    for entry in cert.construction_log:
        mod = entry.get("modulus")
        mod = "-" if mod is None else f"{mod:.4f}"
        print(f"  layer {entry.get('layer', '?'):<24} rows {entry.get('rows', '-'):>5}  "
              f"modulus {mod}")


def cmd_construct(args) -> int:
    from .constructor import (ConstructionError, build_rp2_certificate,
                              build_wedge_commutator_certificate)
    from .spaces import wedge_commutator_loop
    from .words import loop_word

    space = {"rp2": RP2, "wedge": WEDGE}[args.space]
    note = None
    try:
        if space == RP2:
            if args.loop:
                loop = io.read_loop(args.loop)
                if loop.space != RP2:
                    return _err(f"loop file holds a {loop.space} loop, expected RP2")
            elif args.generator:
                loop = rp2_generator(args.samples, args.times)
            else:
                return _err("rp2 needs --generator or --loop")
            cert = build_rp2_certificate(loop)
        else:
            if args.loop:
                return _err("wedge certificates are built from --a-turns/--b-turns")
            cert = build_wedge_commutator_certificate(args.a_turns, args.b_turns)
            word = loop_word(wedge_commutator_loop(args.a_turns, args.b_turns, 4096))
            note = (f"boundary word {word or 'e'}: "
                    + ("[a,b] != e, not nullhomotopic in the wedge" if word
                       else "trivial word"))
    except io.SchemaError as exc:
        return _err(f"schema: {exc}")
    except (LiftError, ContractionError, ConstructionError, ValueError) as exc:
        return _err(f"construction failed: {exc}")
    io.write_certificate(cert, args.out)
    print(f"certificate {args.out}: space {cert.space}, rings {cert.grid.R}, "
          f"samples {cert.grid.N}, mesh bound {cert.mesh_bound:.3f}")
    _print_log(cert)
    if note:
        print(note)
    return EXIT_OK


def _report_path(cert_path: str, explicit: str | None) -> Path:
    if explicit:
        return Path(explicit)
    p = Path(cert_path)
    name = p.name[:-3] if p.name.endswith(".gz") else p.name
    return p.with_name(Path(name).stem + ".report.json")


def cmd_verify(args) -> int:
    from .verifier import MalformedCertificateError, verify

    try:
        cert = io.read_certificate(args.cert)
        loop = io.read_loop(args.loop) if args.loop else None
        tol = default_verify_tol() if args.tol is None else args.tol
        report = verify(cert, loop, tol)
    except (io.SchemaError, MalformedCertificateError, ValueError) as exc:
        return _err(f"malformed certificate: {exc}")
    print(report.text())
    io.write_json(report.as_dict(), _report_path(args.cert, args.report))
    return EXIT_OK if report.accepted else EXIT_REJECT


def cmd_pushforward(args) -> int:
    from .constructor import pushforward_certificate

    try:
        cert = io.read_certificate(args.cert)
        image = pushforward_certificate(cert, args.map)
    except (io.SchemaError, ValueError, KeyError) as exc:
        return _err(str(exc))
    io.write_certificate(image, args.out)
    print(f"wrote {args.out}: {cert.space} -> {image.space} via {args.map}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qnull", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    o = sub.add_parser("obstruct", help="determinant winding of the embedded identity loop")
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--samples", type=int, default=256)
    o.add_argument("--csv", help="write the phase trace here instead of stdout")
    o.set_defaults(func=cmd_obstruct)

    c = sub.add_parser("construct", help="build a certificate")
    c.add_argument("--space", choices=["rp2", "wedge"], required=True)
    src = c.add_mutually_exclusive_group()
    src.add_argument("--loop", help="loop file (JSON with 'space' and 'points')")
    src.add_argument("--generator", action="store_true")
    c.add_argument("--times", type=int, default=1, help="generator traversals")
    c.add_argument("--samples", type=int, default=256)
    c.add_argument("--a-turns", type=int, default=1)
    c.add_argument("--b-turns", type=int, default=1)
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="check a certificate")
    v.add_argument("--cert", required=True)
    v.add_argument("--loop", help="compare against this loop instead of the stored one")
    v.add_argument("--tol", type=float)
    v.add_argument("--report", help="machine-readable report path")
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("pushforward", help="push a certificate along a map of spaces")
    f.add_argument("--cert", required=True)
    f.add_argument("--map", choices=["collapseA", "collapseB", "project"], required=True)
    f.add_argument("--out", required=True)
    f.set_defaults(func=cmd_pushforward)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
