"""
Command line entry point: ``mustar-alba <command> ...``.

Commands
--------
classify
    Level and witnessing order-types of an inequality.
run
    Run the calculus and print the pure system (or where it got stuck).
verify
    Compare the validity of the input with the validity of the pure output
    on finite algebras.
oracle-test
    Rule-soundness and Ackermann property harnesses.
goldens
    Known classifications and runs.

Exit codes: 0 success, 1 negative result, 2 input error, 3 internal
invariant breach.
"""
import argparse
import json
import logging
import os
import sys
from enum import Enum, IntEnum

from mustaralba._version import __version__
from mustaralba.algebra import battery, load_algebra
from mustaralba.classifier import Level, classify
from mustaralba.engine import Engine
from mustaralba.goldens import SUITES, check_suite
from mustaralba.oracle import AckermannOracle, SoundnessOracle, verify
from mustaralba.parser import parse_inequality
from mustaralba.system import Mode

logger = logging.getLogger(__name__)


class Command(Enum):
    CLASSIFY = 'classify'
    RUN = 'run'
    VERIFY = 'verify'
    ORACLE_TEST = 'oracle-test'
    GOLDENS = 'goldens'


class ExitStatus(IntEnum):
    SUCCESS = 0
    NEGATIVE = 1
    INPUT_ERROR = 2
    INTERNAL_ERROR = 3


_STYLES = {'good': '32', 'bad': '31', 'head': '1'}


class _Output:
    """Writes text or JSON to a stream, styling text when allowed."""

    def __init__(self, stream, as_json=False):
        self.stream = stream
        self.as_json = as_json
        isatty = getattr(stream, 'isatty', lambda: False)()
        self.color = isatty and os.environ.get('MUSTAR_ALBA_COLOR', '1') != '0'

    def style(self, text, kind):
        if not self.color:
            return text
        return '\033[%sm%s\033[0m' % (_STYLES[kind], text)

    def line(self, text=''):
        self.stream.write(text + '\n')

    def json(self, obj):
        self.stream.write(json.dumps(obj, indent=2, ensure_ascii=False) + '\n')


def _add_common(parser):
    parser.add_argument('--json', action='store_true', help='Machine-readable output')
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='Log to stderr (-v info, -vv debug)')


def build_parser():
    parser = argparse.ArgumentParser(prog='mustar-alba',
                                     description='Correspondence calculus for inductive mu-inequalities')
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    commands = parser.add_subparsers(dest='command', required=True)

    classify_parser = commands.add_parser(Command.CLASSIFY.value, help='Classify an inequality')
    classify_parser.add_argument('input', help='Inequality, e.g. "<>p <= []<>p"')
    _add_common(classify_parser)

    run_parser = commands.add_parser(Command.RUN.value, help='Run the calculus')
    run_parser.add_argument('input')
    run_parser.add_argument('--mode', choices=[m.value for m in Mode], default=Mode.AUTO.value)
    run_parser.add_argument('--trace', metavar='PATH', default=None, help='Write the JSON trace to PATH')
    run_parser.add_argument('--max-steps', type=int, default=500)
    _add_common(run_parser)

    verify_parser = commands.add_parser(Command.VERIFY.value, help='Check input/output equivalence on algebras')
    verify_parser.add_argument('input')
    verify_parser.add_argument('--mode', choices=[m.value for m in Mode], default=Mode.AUTO.value)
    verify_parser.add_argument('--algebra', metavar='PATH', action='append', default=[],
                               help='Algebra JSON file (repeatable); the fixed battery when omitted')
    verify_parser.add_argument('--max-algebra-size', type=int, default=8)
    _add_common(verify_parser)

    oracle_parser = commands.add_parser(Command.ORACLE_TEST.value, help='Run the soundness harnesses')
    oracle_parser.add_argument('--seed', type=int, default=1)
    oracle_parser.add_argument('--algebra-count', type=int, default=50)
    oracle_parser.add_argument('--formula-count', type=int, default=40)
    oracle_parser.add_argument('--walk-length', type=int, default=6)
    oracle_parser.add_argument('--max-algebra-size', type=int, default=8)
    oracle_parser.add_argument('--triples', type=int, default=0,
                               help='Ackermann triples per side (0 skips the Ackermann harness)')
    _add_common(oracle_parser)

    goldens_parser = commands.add_parser(Command.GOLDENS.value, help='Check the golden cases')
    goldens_parser.add_argument('suite', nargs='?', choices=sorted(SUITES), default='all')
    _add_common(goldens_parser)
    return parser


def cmd_classify(args, out):
    classification = classify(parse_inequality(args.input))
    if out.as_json:
        out.json(classification.to_json())
    else:
        out.line(out.style('Level: %s' % classification.level.label, 'head'))
        for witness in classification.witnesses:
            out.line('  epsilon: %s   omega: %s' % (witness.epsilon, witness.omega))
        for level in sorted(classification.levels - {classification.level}, reverse=True):
            found = classification.witnesses_at(level)
            out.line('  also %s: %s' % (level.label, ' '.join(str(w.epsilon) for w in found)))
        if classification.note:
            out.line('  note: %s' % classification.note)
    return ExitStatus.NEGATIVE if classification.level is Level.NONE else ExitStatus.SUCCESS


def _write_trace(path, result):
    with open(path, 'w') as file:
        json.dump(result.to_json(trace=True), file, indent=2, ensure_ascii=False)
    logger.info('Trace written to %s', path)


def cmd_run(args, out):
    result = Engine(args.mode, max_steps=args.max_steps).run(parse_inequality(args.input))
    if args.trace:
        _write_trace(args.trace, result)
    if out.as_json:
        out.json(result.to_json(trace=False))
    else:
        out.line(out.style(result.status, 'good' if result.success else 'bad')
                 + ('  (%s)' % result.run_kind if result.run_kind else ''))
        if len(result.preprocessed) > 1:
            out.line('Preprocessed into %d inequalities' % len(result.preprocessed))
        out.line(result.system.to_text())
        if not result.success:
            reasons = [a.reason for a in result.attempts if a.reason]
            if reasons:
                out.line('stuck: %s' % reasons[-1])
    return ExitStatus.SUCCESS if result.success else ExitStatus.NEGATIVE


def cmd_verify(args, out):
    ineq = parse_inequality(args.input)
    if args.algebra:
        algebras = [load_algebra(path) for path in args.algebra]
    else:
        algebras = battery(max_size=args.max_algebra_size)
    report = verify(ineq, algebras, args.mode)
    if out.as_json:
        out.json(report.to_json())
    elif report.frame is None:
        out.line(out.style(report.status, 'bad'))
        out.line('The run did not reach a pure system; nothing to compare.')
    else:
        out.line(report.frame.to_string(index=False))
        out.line(out.style('equivalent' if report.equivalent else 'NOT equivalent',
                           'good' if report.equivalent else 'bad'))
    if report.frame is None:
        return ExitStatus.NEGATIVE
    return ExitStatus.SUCCESS if report.equivalent else ExitStatus.INTERNAL_ERROR


def _print_report(out, title, report):
    out.line(out.style(title, 'head'))
    summary = report.summary()
    if not summary.empty:
        out.line(summary.to_string())
    violations = len(report.violations)
    out.line(out.style('%d violations' % violations, 'bad' if violations else 'good'))
    unchecked = len(report.unchecked)
    if unchecked:
        out.line(out.style('%d steps skipped on every algebra' % unchecked, 'bad'))
    for counterexample in report.counterexamples:
        out.line('counterexample for %s on %s:' % (counterexample['rule'], counterexample['algebra']))
        out.line(counterexample['system'])


def cmd_oracle_test(args, out):
    reports = {'soundness': SoundnessOracle(seed=args.seed, algebra_count=args.algebra_count,
                                            formula_count=args.formula_count,
                                            max_algebra_size=args.max_algebra_size,
                                            walk_length=args.walk_length).run()}
    if args.triples > 0:
        reports['ackermann'] = AckermannOracle(seed=args.seed, triple_count=args.triples,
                                               max_algebra_size=min(args.max_algebra_size, 6)).run()
    if out.as_json:
        out.json({name: report.to_json() for name, report in reports.items()})
    else:
        for name, report in reports.items():
            _print_report(out, name, report)
    passed = all(report.passed for report in reports.values())
    return ExitStatus.SUCCESS if passed else ExitStatus.INTERNAL_ERROR


def cmd_goldens(args, out):
    outcomes = check_suite(args.suite)
    if out.as_json:
        out.json([outcome.to_json() for outcome in outcomes])
    else:
        for outcome in outcomes:
            mark = out.style('PASS', 'good') if outcome.passed else out.style('FAIL', 'bad')
            out.line('%s %-22s %.3fs %s' % (mark, outcome.case.name, outcome.seconds, outcome.detail))
    return ExitStatus.SUCCESS if all(o.passed for o in outcomes) else ExitStatus.NEGATIVE


_COMMANDS = {
    Command.CLASSIFY: cmd_classify,
    Command.RUN: cmd_run,
    Command.VERIFY: cmd_verify,
    Command.ORACLE_TEST: cmd_oracle_test,
    Command.GOLDENS: cmd_goldens,
}


def _configure_logging(verbose):
    if verbose <= 0:
        return
    logging.basicConfig(stream=sys.stderr, level=logging.DEBUG if verbose > 1 else logging.INFO,
                        format='%(levelname)s %(name)s: %(message)s')


def main(argv=None, stdout=None, stderr=None):
    """Parse `argv`, dispatch, and return the exit status.

    Errors in the input (syntax, language, algebra files) exit with 2 and a
    message on stderr; internal assertion failures exit with 3.
    """
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    out = _Output(stdout, as_json=args.json)
    command = Command(args.command)
    try:
        return int(_COMMANDS[command](args, out))
    except AssertionError as e:
        logger.exception('Internal invariant breached')
        stderr.write('internal error: %s\n' % e)
        return int(ExitStatus.INTERNAL_ERROR)
    except (ValueError, OSError) as e:
        stderr.write('error: %s\n' % e)
        return int(ExitStatus.INPUT_ERROR)


if __name__ == '__main__':
    sys.exit(main())
