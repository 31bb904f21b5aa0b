"""Command-line front end: analyze, generators, encode, certify, oracle.

Reports are line-oriented ``key: value`` text on stdout, deterministic for
fixed inputs and flags (timing goes to stderr).  Exit codes: 0 all checks
passed, 1 a verdict was negative, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .control import (analyze_controllability, monotone_after_success,
                      weak_controllability_check)
from .encoders import (CanonicalGeneratorSet, ConjugacyCertificate, Encoder,
                       Horizons, PipelineFailure, canonical_generators,
                       conjugacy_certificate, encode, primary_shift)
from .groups import FiniteAbelianGroup
from .residues import howell_form
from .shifts import GroupShift, enumerate_window_code, finite_type_memory
from .specfmt import ShiftSpec, SpecParseError, parse_message, parse_spec
from .words import Word

DISCLAIMER = ("all verdicts are window-scale certificates at the recorded "
              "horizons, not infinite-horizon claims")


class Report:
    def __init__(self) -> None:
        self.lines: list[str] = []

    def add(self, key: str, value) -> None:
        if isinstance(value, bool):
            value = "yes" if value else "no"
        self.lines.append(f"{key}: {value}")

    def emit(self) -> None:
        sys.stdout.write("\n".join(self.lines) + "\n")


def _format_symbols(group: FiniteAbelianGroup, symbols) -> str:
    parts = []
    for s in symbols:
        if group.rank == 1:
            parts.append(str(s[0]))
        else:
            parts.append("(" + ",".join(str(c) for c in s) + ")")
    return " ".join(parts) if parts else "0"


def _format_window_row(group: FiniteAbelianGroup, lo: int, vec) -> str:
    r = group.rank
    syms = [group.scaled_to_coords(tuple(vec[i:i + r]))
            for i in range(0, len(vec), r)]
    return _format_symbols(group, syms)


def _echo_input(report: Report, command: str, path: str, spec: ShiftSpec) -> None:
    shift = spec.shift
    report.add("report", command)
    report.add("spec", Path(path).name)
    report.add("group", shift.alphabet.format())
    report.add("generator_count", len(shift.generators))
    for i, g in enumerate(shift.generators, start=1):
        report.add(f"generator.{i}", g.format())
    if shift.memory_hint is not None:
        report.add("declared_memory", shift.memory_hint)


def _echo_horizons(report: Report, horizons: Horizons) -> None:
    report.add("horizon.margin", horizons.margin)
    report.add("horizon.support_cap", horizons.support_cap)
    report.add("horizon.block_cap", horizons.block_cap)
    report.add("horizon.window_horizon", horizons.window_horizon)
    report.add("horizon.n_cap", horizons.n_cap)


def _load_spec(path: str) -> ShiftSpec:
    return parse_spec(Path(path).read_text(encoding="utf-8"))


def _horizons_from_args(shift: GroupShift, args) -> Horizons:
    overrides = dict(margin=args.margin, support_cap=args.support_cap,
                     block_cap=args.block_cap, n_cap=args.n_cap,
                     window_horizon=args.horizon, enum_cap=args.enum_cap)
    return Horizons.derive(shift, **overrides)


def _genset_lines(report: Report, prefix: str, genset: CanonicalGeneratorSet) -> None:
    report.add(f"{prefix}.order_controllability_index", genset.order_index)
    report.add(f"{prefix}.socle_rank", genset.socle_rank)
    report.add(f"{prefix}.generator_count", len(genset.entries))
    for i, e in enumerate(genset.entries, start=1):
        report.add(f"{prefix}.entry.{i}.height", e.height)
        report.add(f"{prefix}.entry.{i}.torsion_word", e.torsion_word.format())
        report.add(f"{prefix}.entry.{i}.tap", e.tap.format())


def _encoder_lines(report: Report, prefix: str, encoder: Encoder) -> None:
    report.add(f"{prefix}.source", encoder.source.format())
    report.add(f"{prefix}.memory", encoder.memory)
    for i, tap in enumerate(encoder.taps, start=1):
        report.add(f"{prefix}.tap.{i}", tap.format())


def cmd_analyze(args) -> int:
    spec = _load_spec(args.spec)
    shift = spec.shift
    horizons = _horizons_from_args(shift, args)
    window_horizon = spec.horizon_override or horizons.window_horizon
    report = Report()
    _echo_input(report, "analyze", args.spec, spec)
    _echo_horizons(report, horizons)
    negative = False

    weak = weak_controllability_check(shift, "self", horizon=window_horizon,
                                      margin=horizons.margin)
    report.add("weakly_controllable", weak.holds)
    report.add("weakly_controllable.windows",
               " ".join(f"[{a},{b}]" for a, b in weak.windows))
    negative |= not weak.holds

    for p in shift.alphabet.primes():
        socle = weak_controllability_check(shift, "socle", p=p,
                                           horizon=window_horizon,
                                           margin=horizons.margin)
        report.add(f"socle.{p}.weakly_controllable", socle.holds)
        if not socle.holds:
            report.add(f"socle.{p}.detail", socle.detail)
            negative = True

    ft = finite_type_memory(shift, cap=args.ft_cap, horizon=window_horizon)
    report.add("finite_type_memory",
               ft.memory if ft.memory is not None else f"not-verified<={ft.cap}")
    negative |= ft.memory is None

    ctrl = analyze_controllability(shift, cap=horizons.n_cap,
                                   horizon=window_horizon)
    for label, search in (("controllability", ctrl.plain),
                          ("order_controllability", ctrl.ordered)):
        idx = search.index
        report.add(f"{label}_index",
                   idx if idx is not None else f"not-found<={search.cap}")
        report.add(f"{label}.past_horizons",
                   " ".join(str(x) for x in search.past_horizons))
        report.add(f"{label}.condition_table",
                   " ".join("ok" if b else "fail" for b in search.condition_table))
        report.add(f"{label}.monotone", monotone_after_success(search))
        if search.witness is not None:
            report.add(f"{label}.witness", search.witness.format())
        negative |= idx is None or not monotone_after_success(search)
    if ctrl.n_c is not None and ctrl.n_o is not None:
        report.add("index_consistency.n_c_le_n_o", ctrl.consistent())
        negative |= not ctrl.consistent()

    report.add("scope", DISCLAIMER)
    report.add("verdict", "pass" if not negative else "negative")
    report.emit()
    return 1 if negative else 0


def cmd_generators(args) -> int:
    spec = _load_spec(args.spec)
    shift = spec.shift
    horizons = _horizons_from_args(shift, args)
    report = Report()
    _echo_input(report, "generators", args.spec, spec)
    _echo_horizons(report, horizons)
    primes = [args.prime] if args.prime else list(shift.alphabet.primes())
    negative = False
    for p in primes:
        part = primary_shift(shift, p)
        try:
            genset = canonical_generators(part, p, horizons)
            _genset_lines(report, f"prime.{p}", genset)
        except PipelineFailure as exc:
            report.add(f"prime.{p}.failure", f"{exc.stage}: {exc.detail}")
            negative = True
    report.add("scope", DISCLAIMER)
    report.add("verdict", "pass" if not negative else "negative")
    report.emit()
    return 1 if negative else 0


def _certificate_report(report: Report, cert: ConjugacyCertificate) -> bool:
    negative = False
    for pc in cert.primaries:
        prefix = f"prime.{pc.prime}"
        if pc.genset is not None:
            _genset_lines(report, prefix, pc.genset)
        for check in pc.checks:
            detail = f" ({check.detail})" if check.detail and not check.passed else ""
            value = ("pass" if check.passed else "fail") + detail
            if check.passed and check.detail:
                value = f"pass [{check.detail}]"
            report.add(f"{prefix}.check.{check.name}", value)
        report.add(f"{prefix}.complete", pc.complete)
        negative |= not pc.complete
    for check in cert.global_checks:
        report.add(f"check.{check.name}", "pass" if check.passed else "fail")
        negative |= not check.passed
    if cert.product_encoder is not None:
        _encoder_lines(report, "encoder", cert.product_encoder)
    report.add("certificate", "complete" if cert.complete else "partial")
    return negative or not cert.complete


def _presentation_audit(report: Report, shift: GroupShift,
                        horizons: Horizons, args) -> bool:
    """Audit the presentation's own generators as encoder taps."""
    from .encoders import (check_injectivity, check_noncatastrophic,
                           presentation_encoder)
    encoder = presentation_encoder(shift)
    _encoder_lines(report, "presentation_encoder", encoder)
    negative = False
    if len(set(encoder.tap_primes)) == 1:
        inj = check_injectivity(encoder, horizons.block_cap)
        report.add("presentation.check.independent-block",
                   f"pass [N={inj.block}]" if inj.block is not None
                   else f"fail (no block <= {horizons.block_cap})")
        if inj.block is None and inj.dependent_combination:
            combo = " ".join(f"tap{j}@{t}*{c}"
                             for j, t, c in inj.dependent_combination)
            report.add("presentation.check.dependent-combination", combo)
        negative |= inj.block is None
    noncat = check_noncatastrophic(encoder, shift, trials=args.trials,
                                   horizon=horizons.window_horizon,
                                   margin=horizons.margin, seed=args.seed)
    report.add("presentation.check.noncatastrophic",
               "pass" if noncat.ok else "fail")
    if not noncat.ok and noncat.witness is not None:
        report.add("presentation.check.witness",
                   f"{noncat.witness.format()} has no finite preimage at "
                   f"horizon {noncat.horizon}")
    negative |= not noncat.ok
    report.add("presentation.complete", not negative)
    return negative


def cmd_certify(args) -> int:
    spec = _load_spec(args.spec)
    shift = spec.shift
    horizons = _horizons_from_args(shift, args)
    report = Report()
    _echo_input(report, "certify", args.spec, spec)
    _echo_horizons(report, horizons)
    if args.check_presentation:
        negative = _presentation_audit(report, shift, horizons, args)
        report.add("scope", DISCLAIMER)
        report.add("verdict", "pass" if not negative else "negative")
        report.emit()
        return 1 if negative else 0
    cert = conjugacy_certificate(shift, horizons, trials=args.trials,
                                 seed=args.seed)
    negative = _certificate_report(report, cert)
    if args.window:
        lo, hi = args.window
        module = shift.window(lo, hi)
        report.add(f"window_image.{lo}..{hi}.size", module.size())
        for i, row in enumerate(module.form.rows, start=1):
            report.add(f"window_image.{lo}..{hi}.row.{i}",
                       _format_window_row(shift.alphabet, lo, row))
    report.add("scope", DISCLAIMER)
    report.add("verdict", "pass" if not negative else "negative")
    report.emit()
    return 1 if negative else 0


def cmd_encode(args) -> int:
    spec = _load_spec(args.spec)
    shift = spec.shift
    horizons = _horizons_from_args(shift, args)
    cert = conjugacy_certificate(shift, horizons, trials=args.trials,
                                 seed=args.seed)
    report = Report()
    _echo_input(report, "encode", args.spec, spec)
    if cert.product_encoder is None:
        report.add("failure", "encoder synthesis failed; run certify for details")
        report.add("verdict", "negative")
        report.emit()
        return 1
    encoder = cert.product_encoder
    message = parse_message(Path(args.message).read_text(encoding="utf-8"),
                            encoder.source)
    window = tuple(args.window) if args.window else None
    image = encode(encoder, message, window)
    report.add("source", encoder.source.format())
    report.add("message", message.format())
    if window:
        report.add("window", f"{window[0]}..{window[1]}")
    report.add("word", image.format())
    report.add("verdict", "pass")
    report.emit()
    return 0


def cmd_oracle(args) -> int:
    spec = _load_spec(args.spec)
    shift = spec.shift
    lo, hi = args.window
    report = Report()
    _echo_input(report, "oracle", args.spec, spec)
    elements = enumerate_window_code(shift, lo, hi, cap=args.enum_cap or 1 << 20)
    report.add(f"window", f"{lo}..{hi}")
    report.add("code_size", len(elements))
    group = shift.alphabet
    width = hi - lo + 1
    if len(elements) <= args.list_cap:
        for i, flat in enumerate(elements, start=1):
            syms = [flat[k * group.rank:(k + 1) * group.rank] for k in range(width)]
            report.add(f"element.{i}", _format_symbols(group, syms))
    scaled = [Word.make(group, lo, [flat[k * group.rank:(k + 1) * group.rank]
                                    for k in range(width)]).window_vector(lo, hi)
              for flat in elements]
    m = max(group.exponent, 2)
    form = howell_form(scaled, m)
    report.add(f"window_image.{lo}..{hi}.size", form.size())
    for i, row in enumerate(form.rows, start=1):
        report.add(f"window_image.{lo}..{hi}.row.{i}",
                   _format_window_row(group, lo, row))
    report.add("verdict", "pass")
    report.emit()
    return 0


def _window_arg(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split(":")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError("window must look like a:b")
    if hi < lo:
        raise argparse.ArgumentTypeError("window must satisfy a <= b")
    return lo, hi


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--margin", type=int, default=None,
                        help="membership certification margin")
    parser.add_argument("--support-cap", type=int, default=None,
                        help="max support length for generator searches")
    parser.add_argument("--block-cap", type=int, default=None,
                        help="injectivity block search cap")
    parser.add_argument("--n-cap", type=int, default=None,
                        help="controllability index search cap")
    parser.add_argument("--horizon", type=int, default=None,
                        help="window horizon for module checks")
    parser.add_argument("--enum-cap", type=int, default=None,
                        help="module enumeration element cap")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for randomized exact checks")
    parser.add_argument("--trials", type=int, default=64,
                        help="random messages per invariant check")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="groupshift",
        description="group shifts over finite abelian alphabets: "
                    "controllability, canonical generators, encoders")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="controllability and finite-type analysis")
    p.add_argument("spec")
    p.add_argument("--ft-cap", type=int, default=8,
                   help="finite-type memory search cap")
    _add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("generators", help="canonical generating sets per prime")
    p.add_argument("spec")
    p.add_argument("--prime", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_generators)

    p = sub.add_parser("certify", help="full conjugacy certificate pipeline")
    p.add_argument("spec")
    p.add_argument("--window", type=_window_arg, default=None,
                   help="also print the window image a:b")
    p.add_argument("--check-presentation", action="store_true",
                   help="audit the spec's own generators as encoder taps "
                        "instead of synthesizing a canonical set")
    _add_common(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("encode", help="encode a message file with the "
                                      "synthesized encoder")
    p.add_argument("spec")
    p.add_argument("message")
    p.add_argument("--window", type=_window_arg, default=None,
                   help="restrict the output to the window a:b")
    _add_common(p)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("oracle", help="brute-force window code enumeration")
    p.add_argument("spec")
    p.add_argument("--window", type=_window_arg, required=True)
    p.add_argument("--list-cap", type=int, default=64,
                   help="print elements only up to this count")
    p.add_argument("--enum-cap", type=int, default=None)
    p.set_defaults(func=cmd_oracle)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    started = time.monotonic()
    try:
        code = args.func(args)
    except (SpecParseError, FileNotFoundError, ValueError) as exc:
        sys.stdout.write(f"error: {exc}\n")
        return 2
    finally:
        sys.stderr.write(f"elapsed: {time.monotonic() - started:.3f}s\n")
    return code


if __name__ == "__main__":
    raise SystemExit(main())
