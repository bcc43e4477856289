"""Command-line entry point.

Data goes to stdout, diagnostics to stderr.  Exit status: 0 on success,
1 on a verification failure, 2 on usage errors (argparse's default).
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import abelian, certify, homs, lomodule, presentations, quotients
from .words import Word, default_names, parse_word, word_to_str


@dataclass
class RunConfig:
    subcommand: str
    rank: int | None = None
    words: tuple[str, ...] = ()
    input_path: str | None = None
    assign_path: str | None = None
    emit_path: str | None = None
    format: str = "plain"
    full: bool = False
    jobs: int = 1
    sub: str | None = None
    as_json: bool = False
    ring_op: str | None = None
    bound: int = 10**6
    seed: int | None = None  # reserved for randomized property-run wrappers


def _load_presentation(path: str) -> presentations.Presentation:
    with open(path, "r", encoding="utf-8") as fh:
        return presentations.parse_presentation_json(fh.read())


def _cmd_count(cfg: RunConfig) -> int:
    n = presentations.v_full(cfg.rank) if cfg.full else presentations.v(cfg.rank)
    print(n)
    return 0


def _cmd_present(cfg: RunConfig) -> int:
    if cfg.input_path:
        base = _load_presentation(cfg.input_path)
        pres = presentations.x_presentation_of(base, full=cfg.full)
    else:
        pres = presentations.x_presentation_free(cfg.rank, full=cfg.full)
    sys.stdout.write(presentations.export(pres, cfg.format))
    return 0


def _derive_one(args: tuple[str, int]) -> str:
    text, m = args
    w = parse_word(text, m)
    cert = certify.derive_box(w, m)
    if not certify.verify_certificate(cert):  # pragma: no cover - defect guard
        raise certify.IdentityError(f"derived certificate failed for {text!r}")
    return certify.certificate_to_json(cert)


def _cmd_certify(cfg: RunConfig) -> int:
    m = cfg.rank
    tasks = [(t, m) for t in cfg.words]
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            payloads = list(pool.map(_derive_one, tasks))
    else:
        payloads = [_derive_one(t) for t in tasks]
    if cfg.emit_path:
        if len(payloads) != 1:
            print("--emit requires exactly one --word", file=sys.stderr)
            return 2
        with open(cfg.emit_path, "w", encoding="utf-8") as fh:
            fh.write(payloads[0])
        print(f"wrote {cfg.emit_path}", file=sys.stderr)
    for text, payload in zip(cfg.words, payloads):
        obj = json.loads(payload)
        print(f"{text}\tfactors={len(obj['factors'])}\tverified=true")
    return 0


def _cmd_verify(cfg: RunConfig) -> int:
    with open(cfg.input_path, "r", encoding="utf-8") as fh:
        cert = certify.certificate_from_json(fh.read())
    report = certify.verify_certificate_detailed(cert)
    if report.ok:
        print(f"OK\tfactors={report.nfactors}")
        return 0
    if report.bad_basis_index is not None:
        print(
            f"FAIL\tfactor {report.bad_basis_index}: relator not in basis",
            file=sys.stderr,
        )
    else:
        print(
            f"FAIL\tproduct does not reduce to target "
            f"(residue length {report.residue_length} after {report.nfactors} factors)",
            file=sys.stderr,
        )
    return 1


def _cmd_rho(cfg: RunConfig) -> int:
    w = parse_word(cfg.words[0], cfg.rank)
    t = homs.rho(w)
    if cfg.as_json:
        print(
            json.dumps(
                {
                    "g1": word_to_str(t.g1),
                    "g2": word_to_str(t.g2),
                    "g3": word_to_str(t.g3),
                },
                sort_keys=True,
            )
        )
    else:
        print(f"({word_to_str(t.g1)}, {word_to_str(t.g2)}, {word_to_str(t.g3)})")
    return 0


def _cmd_member(cfg: RunConfig) -> int:
    w = parse_word(cfg.words[0], cfg.rank)
    pred = {"L": homs.in_L, "D": homs.in_D, "W": homs.in_W}[cfg.sub]
    result = pred(w)
    print("true" if result else "false")
    return 0


def _cmd_nu(cfg: RunConfig) -> int:
    w = parse_word(cfg.words[0], cfg.rank)
    elem = lomodule.nu(w)
    names = default_names(cfg.rank)
    coeffs = {
        mono.label(tuple(names)): c for mono, c in elem.v.items()
    }
    out = {"coeffs": coeffs, "g": word_to_str(elem.g)}
    print(json.dumps(out, sort_keys=True))
    return 0


def _cmd_ring(cfg: RunConfig) -> int:
    if cfg.ring_op != "reduce":
        print(f"unknown ring operation {cfg.ring_op!r}", file=sys.stderr)
        return 2
    w = parse_word(cfg.words[0], cfg.rank)
    elem = lomodule.reduce_word(w)
    names = default_names(cfg.rank)
    coeffs = {mono.label(tuple(names)): c for mono, c in elem.items()}
    print(json.dumps({"coeffs": coeffs}, sort_keys=True))
    return 0


def _cmd_abelianize(cfg: RunConfig) -> int:
    pres = _load_presentation(cfg.input_path)
    inv = abelian.abelianization(pres)
    print(
        json.dumps(
            {"torsion": list(inv.torsion), "free_rank": inv.free_rank},
            sort_keys=True,
        )
    )
    return 0


def _cmd_quotient(cfg: RunConfig) -> int:
    pres = _load_presentation(cfg.input_path)
    with open(cfg.assign_path, "r", encoding="utf-8") as fh:
        asg = quotients.Assignment.from_json(fh.read())
    ok = quotients.verify_quotient(pres, asg)
    order = quotients.closure_order(asg.mapping.values(), cfg.bound)
    print(json.dumps({"relators_hold": ok, "image_order": order}, sort_keys=True))
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xcomm",
        description="Weak-commutativity groups: presentations, certificates, invariants.",
    )
    subs = parser.add_subparsers(dest="subcommand", required=True)

    p = subs.add_parser("count", help="relator count v(m)")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--full", action="store_true")

    p = subs.add_parser("present", help="presentation of X(F_m) or X(G)")
    p.add_argument("--rank", type=int)
    p.add_argument("--input", dest="input_path")
    p.add_argument("--full", action="store_true")
    p.add_argument(
        "--format", choices=["plain", "gap", "magma", "json"], default="plain"
    )

    p = subs.add_parser("certify", help="derive a box-relator certificate")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--word", action="append", required=True, dest="words")
    p.add_argument("--emit", dest="emit_path")
    p.add_argument("--jobs", type=int, default=1)

    p = subs.add_parser("verify", help="verify a certificate file")
    p.add_argument("input_path")

    p = subs.add_parser("rho", help="image under the triple homomorphism")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--json", action="store_true", dest="as_json")

    p = subs.add_parser("member", help="membership in L, D or W")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--sub", choices=["L", "D", "W"], required=True)
    p.add_argument("--word", required=True)

    p = subs.add_parser("nu", help="image under the wreath representation")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--word", required=True)

    p = subs.add_parser("ring", help="group-ring quotient arithmetic")
    p.add_argument("ring_op", choices=["reduce"])
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--word", required=True)

    p = subs.add_parser("abelianize", help="abelianization of a presentation")
    p.add_argument("--input", dest="input_path", required=True)

    p = subs.add_parser("quotient", help="verify a permutation quotient")
    p.add_argument("--pres", dest="input_path", required=True)
    p.add_argument("--assign", dest="assign_path", required=True)
    p.add_argument("--bound", type=int, default=10**6)

    return parser


def config_from_args(argv: list[str] | None = None) -> RunConfig:
    args = build_parser().parse_args(argv)
    words = getattr(args, "words", None)
    if words is None:
        word = getattr(args, "word", None)
        words = (word,) if word else ()
    return RunConfig(
        subcommand=args.subcommand,
        rank=getattr(args, "rank", None),
        words=tuple(words),
        input_path=getattr(args, "input_path", None),
        assign_path=getattr(args, "assign_path", None),
        emit_path=getattr(args, "emit_path", None),
        format=getattr(args, "format", "plain"),
        full=getattr(args, "full", False),
        jobs=getattr(args, "jobs", 1),
        sub=getattr(args, "sub", None),
        as_json=getattr(args, "as_json", False),
        ring_op=getattr(args, "ring_op", None),
        bound=getattr(args, "bound", 10**6),
    )


_HANDLERS = {
    "count": _cmd_count,
    "present": _cmd_present,
    "certify": _cmd_certify,
    "verify": _cmd_verify,
    "rho": _cmd_rho,
    "member": _cmd_member,
    "nu": _cmd_nu,
    "ring": _cmd_ring,
    "abelianize": _cmd_abelianize,
    "quotient": _cmd_quotient,
}


def run(config: RunConfig) -> int:
    handler = _HANDLERS.get(config.subcommand)
    if handler is None:
        print(f"unknown subcommand {config.subcommand!r}", file=sys.stderr)
        return 2
    return handler(config)


def main(argv: list[str] | None = None) -> int:
    try:
        return run(config_from_args(argv))
    except (certify.CertifyError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
