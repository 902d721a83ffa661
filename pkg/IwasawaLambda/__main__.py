import argparse
import json
import signal
import sys
import threading
import time

from IwasawaLambda.config import settings
from IwasawaLambda.cyclolayer import BetaCertificate, verify_certificate
from IwasawaLambda.demo import TOPICS, run_topic, selftest
from IwasawaLambda.errors import LambdaError
from IwasawaLambda.logger import configure_logging, log
from IwasawaLambda.quadfield import SplitType, gold_test, nonsplit_lambda2_test, split_type
from IwasawaLambda.quadfield.forms import require_fundamental
from IwasawaLambda.report import LambdaReport, from_certificate, from_gold
from IwasawaLambda.sweep import SweepRunner

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVARIANT = 5
EXIT_INTERRUPTED = 130


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="IwasawaLambda", description="λ-invariant bounds and Massey calculus")
    parser.add_argument("--log-level", default=None, help="overrides LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--prec", type=int, default=None, help=f"p-adic precision (default {settings.prec})")
        p.add_argument("--budget", type=int, default=None, help="generator enumeration budget")
        p.add_argument("--json", action="store_true", help="emit schema-versioned JSON")

    gold = sub.add_parser("gold", help="λ ≥ 2 via the Gold criterion")
    gold.add_argument("--disc", type=int, required=True)
    gold.add_argument("--p", type=int, required=True)
    gold.add_argument("--experimental", action="store_true",
                      help="for inert or ramified p, run the EXPERIMENTAL local norm criterion")
    common(gold)

    verify = sub.add_parser("verify", help="check a β certificate for λ ≥ 3")
    verify.add_argument("--cert", required=True)
    common(verify)

    sweep = sub.add_parser("sweep", help="Gold reports over a discriminant range")
    sweep.add_argument("--dmin", type=int, required=True)
    sweep.add_argument("--dmax", type=int, required=True)
    sweep.add_argument("--p", type=int, required=True)
    sweep.add_argument("--out", required=True)
    sweep.add_argument("--workers", type=int, default=None)
    common(sweep)

    demo = sub.add_parser("demo", help="run one invariant suite")
    demo.add_argument("topic", choices=TOPICS)
    demo.add_argument("--p", type=int, default=3)
    demo.add_argument("--n", type=int, default=2)
    demo.add_argument("--seed", type=int, default=None)

    check = sub.add_parser("selftest", help="run every invariant suite")
    check.add_argument("--seed", type=int, default=None)
    return parser


class LambdaApp:
    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.stop_event = threading.Event()

    def setup_signal_handlers(self):
        if threading.current_thread() is not threading.main_thread():
            return
        signal.signal(signal.SIGTERM, lambda s, f: self.stop_event.set())

    def _emit(self, report: LambdaReport) -> None:
        if self.args.json:
            print(json.dumps(report.to_json(), ensure_ascii=False, sort_keys=True))
        else:
            print(report.render())

    def cmd_gold(self) -> int:
        a = self.args
        start = time.perf_counter()
        require_fundamental(a.disc)
        if a.experimental and split_type(a.disc, a.p) != SplitType.SPLIT:
            log.warning("p does not split; using the experimental nonsplit criterion", disc=a.disc, p=a.p)
            gold = nonsplit_lambda2_test(a.disc, a.p, a.prec, a.budget)
        else:
            gold = gold_test(a.disc, a.p, a.prec, a.budget)
        self._emit(from_gold(gold, time.perf_counter() - start))
        return EXIT_OK

    def cmd_verify(self) -> int:
        a = self.args
        start = time.perf_counter()
        cert = BetaCertificate.load(a.cert)
        self._emit(from_certificate(verify_certificate(cert, a.prec, a.budget), time.perf_counter() - start))
        return EXIT_OK

    def cmd_sweep(self) -> int:
        a = self.args
        runner = SweepRunner(a.p, a.prec, a.budget, a.workers)
        self.stop_event = runner.stop_event
        result = runner.run(a.dmin, a.dmax)
        result.write(a.out)
        summary = {"schema": 1, "rows": len(result.rows), "stopped": result.stopped, "out": a.out}
        print(json.dumps(summary) if a.json else f"wrote {len(result.rows)} rows to {a.out}")
        return EXIT_OK

    def cmd_demo(self) -> int:
        a = self.args
        result = run_topic(a.topic, a.p, a.n, a.seed)
        print(result.render())
        return EXIT_OK if result.ok else EXIT_INVARIANT

    def cmd_selftest(self) -> int:
        results = selftest(self.args.seed)
        for result in results:
            print(result.render())
        failed = [r.topic for r in results if not r.ok]
        if failed:
            log.error("Self-test failed", topics=failed)
            return EXIT_INVARIANT
        log.info("Self-test passed", suites=len(results))
        return EXIT_OK

    def run(self) -> int:
        self.setup_signal_handlers()
        handler = getattr(self, f"cmd_{self.args.command}")
        return handler()


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    if args.log_level:
        configure_logging(args.log_level)
    elif getattr(args, "json", False):
        configure_logging("WARNING")
    try:
        return LambdaApp(args).run()
    except LambdaError as e:
        log.error("Command failed", command=args.command, code=e.code, detail=e.message, **e.context)
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except ValueError as e:
        log.error("Invalid argument", command=args.command, detail=str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except KeyboardInterrupt:
        log.info("Interrupted by user")
        return EXIT_INTERRUPTED
    except Exception as e:
        log.error("Fatal error", error=str(e))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
