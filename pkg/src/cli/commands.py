"""
agfft command line: info, encode, unencode, verify, bench

stdout carries JSON reports, CSV or vector files; diagnostics go to stderr.
Exit codes: 0 ok, 1 mismatch or internal error, 2 invalid input, 3 not a codeword.
"""

import argparse
import csv
import io
import json
import logging
import math
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from algebra.field import OpCounter
from coding.encoder import EncodePlan, decode_message, encode_message, fmpe_encode, fmpe_unencode
from coding.formats import CODEWORD, MESSAGE, Codeword, format_vector, read_vector
from coding.oracle import naive_encode_many
from geometry.curves import (
    census, default_lambda, descriptor_from_json, hasse_weil, hermitian_as, hermitian_kummer,
    hermitian_tower, norm_trace_x, norm_trace_y,
)
from geometry.rroch import genus, message_to_function
from geometry.tower import ExtensionDescriptor, PointSet, build_point_set, verify_p4
from utils.config import get_config
from utils.exceptions import AgfftError, NotInCode, UnsupportedBase, ValidationError
from utils.logger import ROOT_LOGGER, log_error, log_run_event, setup_logger
from utils.prng import SplitMix64

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID = 2
EXIT_NOT_IN_CODE = 3

CURVES = ("hermitian", "norm-trace-x", "norm-trace-y", "tower")
BENCH_HEADER = ["curve", "N", "lambda", "field_muls", "field_adds", "wall_ns", "muls_per_nlogn"]
CENSUS_LIMIT = 1 << 16


def build_parser() -> argparse.ArgumentParser:
    curve = argparse.ArgumentParser(add_help=False)
    group = curve.add_argument_group("curve")
    group.add_argument("--curve", choices=CURVES, default="hermitian")
    group.add_argument("--kappa", type=int, default=4)
    group.add_argument("--form", choices=("as", "kummer"), default="as")
    group.add_argument("--n", type=int, default=2, help="tower height")
    group.add_argument("--r", type=int, default=2, help="norm-trace extension degree")
    group.add_argument("--e", type=int, default=None, help="norm-trace exponent (Y form)")
    group.add_argument("--descriptor", type=Path, default=None, help="JSON descriptor file")
    group.add_argument("--lambda", dest="lam", type=int, default=None)
    group.add_argument("--log-level", default=None)

    parser = argparse.ArgumentParser(prog="agfft", description="Fast encoding of one-point AG codes")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("info", parents=[curve], help="curve parameters as JSON")

    enc = sub.add_parser("encode", parents=[curve], help="message file -> codeword file")
    enc.add_argument("--in", dest="input", type=Path, required=True)
    enc.add_argument("--out", dest="output", type=Path, default=None)

    dec = sub.add_parser("unencode", parents=[curve], help="codeword file -> message file")
    dec.add_argument("--in", dest="input", type=Path, required=True)
    dec.add_argument("--out", dest="output", type=Path, default=None)
    dec.add_argument("--verify", action="store_true", help="re-encode and compare")

    ver = sub.add_parser("verify", parents=[curve], help="compare against the naive oracle")
    ver.add_argument("--trials", type=int, default=None)
    ver.add_argument("--seed", type=int, default=None)

    bench = sub.add_parser("bench", parents=[curve], help="operation counts and timings as CSV")
    bench.add_argument("--sizes", default=None, help="comma-separated kappa values")
    bench.add_argument("--seed", type=int, default=None)
    bench.add_argument("--out", dest="output", type=Path, default=None)
    return parser


def descriptor_from_args(args: argparse.Namespace, kappa: Optional[int] = None) -> ExtensionDescriptor:
    if args.descriptor is not None:
        try:
            data = json.loads(args.descriptor.read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise ValidationError(f"cannot read descriptor {args.descriptor}: {e}")
        return descriptor_from_json(data)
    kappa = args.kappa if kappa is None else kappa
    if args.curve == "hermitian":
        return hermitian_as(kappa) if args.form == "as" else hermitian_kummer(kappa)
    if args.curve == "norm-trace-x":
        return norm_trace_x(kappa, args.r)
    if args.curve == "norm-trace-y":
        return norm_trace_y(kappa, args.r, args.e)
    return hermitian_tower(kappa, args.n, args.form)


def curve_label(desc: ExtensionDescriptor) -> str:
    if not desc.params:
        return desc.name
    values = ":".join(str(v) for k, v in sorted(desc.params.items()) if k != "V_basis")
    return f"{desc.name}:{values}"


class CommandLineApp:
    """Dispatches parsed arguments to the command handlers"""

    def __init__(self, stdout=None):
        self.config = get_config()
        self.stdout = stdout if stdout is not None else sys.stdout
        self.logger = logging.getLogger(ROOT_LOGGER)

    def setup_logging(self, level: Optional[str]):
        level_name = (level or self.config.get_log_level()).upper()
        self.logger = setup_logger(
            log_level=getattr(logging, level_name, logging.INFO),
            log_dir=self.config.get_log_dir(),
            max_file_size_mb=int(self.config.get("logging.max_file_size_mb", 10)),
            backup_count=int(self.config.get("logging.backup_count", 5)),
        )

    def emit(self, text: str):
        self.stdout.write(text)
        if not text.endswith("\n"):
            self.stdout.write("\n")

    def emit_json(self, report: Dict[str, Any]):
        self.emit(json.dumps(report, sort_keys=True))

    # shared setup

    def _curve(self, args, kappa: Optional[int] = None):
        desc = descriptor_from_args(args, kappa)
        report = verify_p4(desc)
        if not report.passed:
            raise ValidationError(f"descriptor fails structural checks: {'; '.join(report.details)}")
        pts = build_point_set(desc)
        lam = args.lam if args.lam is not None else default_lambda(desc, pts.N)
        if not 0 <= lam < pts.N:
            raise ValidationError(f"lambda must lie in [0, {pts.N}), got {lam}")
        return desc, pts, lam

    # commands

    def cmd_info(self, args) -> int:
        desc = descriptor_from_args(args)
        report = verify_p4(desc)
        if not report.passed:
            self.emit_json({"curve": curve_label(desc), "p4": report.to_json()})
            raise ValidationError(f"descriptor fails structural checks: {'; '.join(report.details)}")
        pts = build_point_set(desc)
        lam = args.lam if args.lam is not None else default_lambda(desc, pts.N)
        if not 0 <= lam < pts.N:
            raise ValidationError(f"lambda must lie in [0, {pts.N}), got {lam}")
        p = EncodePlan(desc, lam, pts)
        try:
            g: Optional[int] = genus(desc)
        except UnsupportedBase:
            g = None
        info: Dict[str, Any] = {
            "curve": curve_label(desc),
            "descriptor": desc.fingerprint,
            "field": desc.field_spec.to_json(),
            "q": desc.field.q,
            "N": pts.N,
            "base_places": pts.s,
            "genus": g,
            "lambda": lam,
            "k": p.k,
            "dmin_bound": pts.N - lam,
            "levels": p.primes,
            "base_domain": p.base_domain.kind,
            "p4": report.to_json(),
            "census": None,
            "hasse_weil": None,
        }
        if desc.field.q * desc.m <= CENSUS_LIMIT:
            counts = census(desc)
            info["census"] = counts.to_json()
            if g is not None:
                info["hasse_weil"] = hasse_weil(desc.field.q, g, counts.total).to_json()
        self.emit_json(info)
        return EXIT_OK

    def cmd_encode(self, args) -> int:
        desc, pts, lam = self._curve(args)
        p = EncodePlan(desc, lam, pts)
        message = read_vector(args.input, MESSAGE, p.k, desc.field.q, desc.fingerprint, lam)
        codeword = encode_message(p, message)
        self._write(args.output, format_vector(CODEWORD, codeword.values, desc.fingerprint, lam))
        return EXIT_OK

    def cmd_unencode(self, args) -> int:
        desc, pts, lam = self._curve(args)
        p = EncodePlan(desc, lam, pts)
        values = read_vector(args.input, CODEWORD, pts.N, desc.field.q, desc.fingerprint, lam)
        verify = args.verify or bool(self.config.get("encoder.verify_unencode", False))
        message = decode_message(p, Codeword(values, desc.fingerprint, lam), verify=verify)
        self._write(args.output, format_vector(MESSAGE, message, desc.fingerprint, lam))
        return EXIT_OK

    def _write(self, path: Optional[Path], text: str):
        if path is None:
            self.emit(text)
        else:
            path.write_text(text)

    def cmd_verify(self, args) -> int:
        desc, pts, lam = self._curve(args)
        trials = args.trials if args.trials is not None else self.config.get_default_trials()
        seed = args.seed if args.seed is not None else self.config.get_default_seed()
        if trials < 1:
            raise ValidationError(f"trials must be positive, got {trials}")
        p = EncodePlan(desc, lam, pts)
        p.reset_metrics()
        rng = SplitMix64(seed)
        q = desc.field.q
        functions = [message_to_function(desc, lam, rng.nonzero_vector(q, p.k)) for _ in range(trials)]

        fast = [fmpe_encode(p, f) for f in functions]
        fmpe_ops = p.metrics()["encode"]
        naive_counter = OpCounter()
        naive = naive_encode_many(desc, lam, pts, functions, naive_counter)

        mismatches = sum(1 for a, b in zip(fast, naive) if a.values != b.values)
        roundtrip = sum(1 for f, c in zip(functions, fast) if fmpe_unencode(p, c).coeffs != f.coeffs)
        weights = [c.weight() for c in fast]
        violations = sum(1 for w in weights if w < pts.N - lam)
        report = {
            "curve": curve_label(desc),
            "N": pts.N,
            "lambda": lam,
            "k": p.k,
            "trials": trials,
            "seed": seed,
            "mismatches": mismatches,
            "roundtrip_failures": roundtrip,
            "weight_violations": violations,
            "min_weight": min(weights),
            "ops": {"fmpe": fmpe_ops, "naive": naive_counter.as_dict()},
        }
        self.emit_json(report)
        clean = mismatches == 0 and roundtrip == 0 and violations == 0
        return EXIT_OK if clean else EXIT_FAILURE

    def cmd_bench(self, args) -> int:
        if args.sizes:
            try:
                sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
            except ValueError:
                raise ValidationError(f"--sizes must be comma-separated integers, got {args.sizes!r}")
        else:
            sizes = self.config.get_bench_sizes()
        seed = args.seed if args.seed is not None else self.config.get_default_seed()
        limit = self.config.get_oracle_max_length()
        repeats = int(self.config.get("bench.repeats", 1))
        rows: List[List[Any]] = []
        agreed = True
        for kappa in sizes:
            desc, pts, lam = self._curve(args, kappa)
            curve_rows, matched = self._bench_rows(desc, pts, lam, seed, limit, repeats)
            rows.extend(curve_rows)
            agreed = agreed and matched
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(BENCH_HEADER)
        writer.writerows(rows)
        self._write(args.output, buffer.getvalue())
        return EXIT_OK if agreed else EXIT_FAILURE

    def _bench_rows(self, desc: ExtensionDescriptor, pts: PointSet, lam: int,
                    seed: int, limit: int, repeats: int = 1) -> Tuple[List[List[Any]], bool]:
        p = EncodePlan(desc, lam, pts)
        rng = SplitMix64(seed)
        f = message_to_function(desc, lam, rng.nonzero_vector(desc.field.q, p.k))
        label = curve_label(desc)
        nlogn = pts.N * math.log2(pts.N)

        # best wall time over the configured repeats, ops from one run
        elapsed = None
        for _ in range(max(1, repeats)):
            p.reset_metrics()
            start = time.perf_counter_ns()
            fast = fmpe_encode(p, f)
            took = time.perf_counter_ns() - start
            elapsed = took if elapsed is None else min(elapsed, took)
        ops = p.metrics()["encode"]
        rows = [[label, pts.N, lam, ops["mul"], ops["add"], elapsed, f"{ops['mul'] / nlogn:.6f}"]]
        matched = True

        if pts.N <= limit:
            counter = OpCounter()
            start = time.perf_counter_ns()
            naive = naive_encode_many(desc, lam, pts, [f], counter)[0]
            elapsed = time.perf_counter_ns() - start
            if naive.values != fast.values:
                matched = False
                self.logger.error(f"bench: fast and naive codewords differ on {label}")
            rows.append([f"{label}:naive", pts.N, lam, counter.mul, counter.add, elapsed,
                         f"{counter.mul / nlogn:.6f}"])
        self.logger.info(f"bench {label}: N={pts.N}, fmpe muls={ops['mul']}")
        return rows, matched

    def run(self, argv: Optional[Sequence[str]] = None) -> int:
        parser = build_parser()
        try:
            args = parser.parse_args(argv)
        except SystemExit as e:
            return EXIT_INVALID if e.code else EXIT_OK
        self.setup_logging(args.log_level)
        handler = getattr(self, f"cmd_{args.command}")
        details = {"curve": args.curve, "kappa": args.kappa, "lambda": args.lam}
        try:
            code = handler(args)
        except NotInCode as e:
            print(f"not a codeword: {e}", file=sys.stderr)
            log_run_event(self.logger, args.command, details, "not_in_code")
            return EXIT_NOT_IN_CODE
        except ValidationError as e:
            print(f"invalid input: {e}", file=sys.stderr)
            log_run_event(self.logger, args.command, details, "invalid")
            return EXIT_INVALID
        except AgfftError as e:
            print(f"error: {e}", file=sys.stderr)
            log_error(self.logger, e, f"command {args.command}")
            return EXIT_FAILURE
        log_run_event(self.logger, args.command, details, "ok" if code == EXIT_OK else "failed")
        return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    return CommandLineApp().run(argv)
