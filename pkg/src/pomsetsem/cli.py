"""Command-line front end.

Every command reads one program (a file, or inline text with ``-e``), except
the corpus checks, which also accept a directory of ``*.prog`` files or,
with no program at all, a generated corpus.  Output is deterministic for a
given program text and set of flags.

Exit status: 0 success, 1 a check failed, 2 syntax or usage error,
3 semantic error (unknown variable, uninterpreted action, parallel
composition where none is allowed).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import corpus as corpus_mod
from .domains import ConvexDomain, DimensionMismatch, all_states, hull_equal, make_domain
from .lang import ProgramSyntaxError, denote, has_par, parse, program_vars, size
from .linearize import ContainsParallel, convex_semantics, lin
from .powdom import check_diagram, denote_powdom, flip_race, language_to_json, sort_language, tr
from .terms import UninterpretedAction, UnknownVariable, parse_state

EXIT_CHECK = 1
EXIT_SYNTAX = 2
EXIT_SEMANTIC = 3

SEMANTIC_ERRORS = (UnknownVariable, UninterpretedAction, ContainsParallel, DimensionMismatch)


class _Output:
    def __init__(self, path):
        self.path = path
        self.parts = []

    def write(self, text: str):
        self.parts.append(text)

    def close(self):
        text = "".join(self.parts)
        if self.path:
            Path(self.path).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _read_program(args):
    if args.expr is not None:
        return args.expr, "<inline>"
    if args.program is None:
        raise _UsageError("a program file or -e TEXT is required")
    path = Path(args.program)
    return path.read_text(encoding="utf-8"), str(path)


class _UsageError(Exception):
    pass


def _initial_state(args, c):
    if args.state is not None:
        return parse_state(args.state)
    return parse_state(",".join("%s=0" % v for v in sorted(program_vars(c))))


def _states(args, c) -> list:
    if args.state is not None:
        return [parse_state(args.state)]
    return all_states(program_vars(c), args.vmax)


def _programs(args, family: str) -> list:
    """(name, Cmd) pairs for the corpus checks, in a fixed order."""
    if args.expr is not None:
        return [("<inline>", parse(args.expr))]
    if args.program is None:
        progs = corpus_mod.generate(args.seed, args.count, family, vmax=args.vmax)
        return [("%s#%03d" % (family, i), c) for i, c in enumerate(progs)]
    path = Path(args.program)
    if path.is_dir():
        files = sorted(p for p in path.iterdir() if p.suffix == ".prog")
        return [(str(p), parse(p.read_text(encoding="utf-8"))) for p in files]
    return [(str(path), parse(path.read_text(encoding="utf-8")))]


# -- commands ------------------------------------------------------------------------

def cmd_parse(args, out):
    text, _ = _read_program(args)
    c = parse(text)
    if args.json:
        out.write(_dump({"program": str(c), "size": size(c), "variables": sorted(program_vars(c))}))
    else:
        out.write("%s\n" % c)
    return 0


def cmd_denote(args, out):
    c = parse(_read_program(args)[0])
    pom = denote(c, args.depth)
    out.write(pom.to_dot() + "\n" if args.dot else _dump(pom.to_json()))
    return 0


def cmd_lin(args, out):
    c = parse(_read_program(args)[0])
    dom = make_domain(args.domain, args.vmax)
    s = _initial_state(args, c)
    result = lin(denote(c, args.depth), None, s, dom)
    out.write(_dump({"domain": dom.name, "state": str(s), "depth": args.depth, "result": dom.to_json(result)}))
    return 0


def _write_language(lang, args, out):
    if args.dot:
        for i, member in enumerate(sort_language(lang)):
            out.write(member.to_dot("member%d" % i) + "\n")
    else:
        out.write(_dump(language_to_json(lang)))


def cmd_powdom(args, out):
    c = parse(_read_program(args)[0])
    _write_language(denote_powdom(c, args.depth), args, out)
    return 0


def cmd_tr(args, out):
    c = parse(_read_program(args)[0])
    _write_language(tr(denote(c, args.depth)), args, out)
    return 0


def _check_corpus(args, out, family, check_one) -> int:
    programs = _programs(args, family)
    failures = []
    for name, c in programs:
        problems = check_one(c)
        status = "FAIL" if problems else "PASS"
        if not args.json:
            out.write("%s %s  %s\n" % (status, name, c))
            for p in problems:
                out.write(_dump(p))
        if problems:
            failures.append({"name": name, "program": str(c), "mismatches": problems})
    depths = "1..%d" % args.depth
    if args.json:
        out.write(_dump({
            "programs": len(programs), "depths": depths,
            "passed": len(programs) - len(failures), "failures": failures,
        }))
    else:
        verdict = "FAIL" if failures else "PASS"
        out.write("%s %d/%d programs agree at depths %s\n" % (
            verdict, len(programs) - len(failures), len(programs), depths))
    return EXIT_CHECK if failures else 0


def cmd_check_diagram(args, out):
    def one(c):
        problems = []
        for n in range(1, args.depth + 1):
            pom, lang = denote(c, n), denote_powdom(c, n)
            for s in _states(args, c):
                report = check_diagram(c, n, s, args.vmax, pomset=pom, language=lang)
                if not report.ok:
                    problems.append(report.to_json())
        return problems

    return _check_corpus(args, out, "flip-free", one)


def cmd_check_sequential(args, out):
    dom = ConvexDomain(args.vmax)

    def one(c):
        if has_par(c):
            raise ContainsParallel(str(c))
        problems = []
        for n in range(1, args.depth + 1):
            pom = denote(c, n)
            for s in _states(args, c):
                via_pomset = lin(pom, None, s, dom)
                direct = convex_semantics(c, n, s, dom)
                if not hull_equal(via_pomset, direct):
                    problems.append({
                        "depth": n, "state": str(s),
                        "lin_of_denote": via_pomset.to_json(),
                        "convex_semantics": direct.to_json(),
                    })
        return problems

    return _check_corpus(args, out, "parallel-free", one)


def cmd_example18(args, out):
    s = parse_state(args.state) if args.state is not None else None
    report = flip_race(s, args.vmax)
    out.write(_dump(report.to_json()))
    out.write("%s four-corner convex set, half mass on bottom per translated pomset, "
              "language union differs\n" % ("PASS" if report.ok else "FAIL"))
    return 0 if report.ok else EXIT_CHECK


def cmd_corpus(args, out):
    progs = corpus_mod.generate(args.seed, args.count, args.family, vmax=args.vmax)
    if args.out:
        d = Path(args.out)
        d.mkdir(parents=True, exist_ok=True)
        for i, c in enumerate(progs):
            (d / ("%03d.prog" % i)).write_text("%s\n" % c, encoding="utf-8")
        out.path = None
        out.write("wrote %d programs to %s\n" % (len(progs), d))
    elif args.json:
        out.write(_dump([str(c) for c in progs]))
    else:
        for c in progs:
            out.write("%s\n" % c)
    return 0


COMMANDS = {
    "parse": (cmd_parse, "parse and pretty-print a program"),
    "denote": (cmd_denote, "pomset of a program at the given loop depth"),
    "lin": (cmd_lin, "linearise the pomset of a program from one state"),
    "powdom": (cmd_powdom, "pomset-language semantics"),
    "tr": (cmd_tr, "translate the pomset of a program to a language"),
    "check-diagram": (cmd_check_diagram, "three-way agreement of pomset and language semantics (Hoare)"),
    "check-theorem24": (cmd_check_sequential, "pomset vs direct convex semantics on parallel-free programs"),
    "example18": (cmd_example18, "the flip-then-race program: corners and the language counterexample"),
    "corpus": (cmd_corpus, "print or write a seeded random corpus"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pomsetsem", description="Pomset semantics with probability and nondeterminism.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("program", nargs="?", help="program file (or directory for check commands)")
        p.add_argument("-e", "--expr", help="inline program text")
        p.add_argument("--depth", type=int, default=2, help="loop unrolling depth (default 2)")
        p.add_argument("--domain", choices=("hoare", "convex"), default="convex")
        p.add_argument("--vmax", type=int, default=3, help="variables range over 0..vmax (default 3)")
        p.add_argument("--state", help='initial state, e.g. "x=0,y=0"')
        p.add_argument("--dot", action="store_true", help="emit Graphviz DOT")
        p.add_argument("--json", action="store_true", help="emit JSON")
        p.add_argument("--out", help="write output to this path")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--count", type=int, default=25)
        p.add_argument("--family", choices=corpus_mod.FAMILIES, default="any")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.depth < 0:
        parser.error("--depth must be non-negative")
    if args.vmax < 1:
        parser.error("--vmax must be at least 1")
    func = COMMANDS[args.command][0]
    out = _Output(args.out)
    try:
        status = func(args, out)
    except ProgramSyntaxError as e:
        print("syntax error: %s" % e.msg, file=sys.stderr)
        return EXIT_SYNTAX
    except (_UsageError, OSError) as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_SYNTAX
    except SEMANTIC_ERRORS as e:
        print("semantic error: %s: %s" % (type(e).__name__, e), file=sys.stderr)
        return EXIT_SEMANTIC
    except ValueError as e:
        print("semantic error: %s" % e, file=sys.stderr)
        return EXIT_SEMANTIC
    out.close()
    return status


if __name__ == "__main__":
    sys.exit(main())
