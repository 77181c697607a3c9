"""Command-line surface: presentation files, dispatch, report emission.

Presentation files (.orm) declare a single-character alphabet and one
relation:

    alphabet: a b c
    relation: aba = aca

Blank lines and lines starting with # are ignored.  A relation side
written as 1 is the empty word (unless 1 is a declared letter).  Every
command prints one Report; --format picks the rendering.  Exit codes:
0 success, 1 property violation found, 2 usage or parse error, 3 budget
exhaustion.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass, field

from .cayley import (
    BudgetExceeded,
    CayleyBall,
    CellVariant,
    CheckKind,
    NotCompressible,
    attach_cells,
    build_ball,
    matrices_csv,
    structure_checks,
    to_dot,
    to_json_dict,
    two_cycle_basis,
)
from .classify import classify_full
from .compress import NotCompressing, Strategy, compress_chain, compress_step
from .squier import (
    UndecidableClass,
    injectivity_harness,
    random_walk_check,
    relation_edge,
)
from .words import Presentation, Word, make_presentation, spell
from .wp import Distinct, Equal, OracleBudget, Unknown, equal_bounded

FORMATS = ("json", "text", "dot", "csv")


class UsageError(Exception):
    """Bad flags, bad words, or a format the command cannot render."""


class PresentationSyntaxError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


class UndeclaredLetter(PresentationSyntaxError):
    def __init__(self, letter: str, line: int, col: int):
        super().__init__(f"undeclared letter {letter!r}", line, col)
        self.letter = letter


class MultipleRelations(PresentationSyntaxError):
    def __init__(self, line: int):
        super().__init__("more than one relation", line, 1)


# ------------------------------------------------------------ file format


def _parse_side(segment: str, line_no: int, base_col: int,
                alphabet: tuple[str, ...]) -> Word:
    if segment.strip() == "1" and "1" not in alphabet:
        return ()
    letters = []
    for off, ch in enumerate(segment):
        if ch == " ":
            continue
        if ch not in alphabet:
            raise UndeclaredLetter(ch, line_no, base_col + off)
        letters.append(ch)
    return tuple(letters)


def parse_presentation(text: str) -> Presentation:
    """Parse .orm text into a normalized presentation."""
    alphabet: tuple[str, ...] | None = None
    relation: tuple[Word, Word] | None = None
    line_no = 0
    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.rstrip()
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        if line.startswith("alphabet:"):
            if alphabet is not None:
                raise PresentationSyntaxError("more than one alphabet",
                                              line_no, 1)
            tokens = line[len("alphabet:"):].split()
            for tok in tokens:
                if len(tok) != 1:
                    col = line.index(tok) + 1
                    raise PresentationSyntaxError(
                        f"letters are single characters, got {tok!r}",
                        line_no, col)
            if len(set(tokens)) != len(tokens):
                raise PresentationSyntaxError("duplicate letter", line_no, 1)
            if not tokens:
                raise PresentationSyntaxError("empty alphabet", line_no, 1)
            alphabet = tuple(tokens)
        elif line.startswith("relation:"):
            if relation is not None:
                raise MultipleRelations(line_no)
            if alphabet is None:
                raise PresentationSyntaxError(
                    "alphabet must be declared before the relation",
                    line_no, 1)
            body = line[len("relation:"):]
            if body.count("=") != 1:
                raise PresentationSyntaxError(
                    "relation needs exactly one '='", line_no,
                    len("relation:") + 1)
            eq = body.index("=")
            lhs = _parse_side(body[:eq], line_no,
                              len("relation:") + 1, alphabet)
            rhs = _parse_side(body[eq + 1:], line_no,
                              len("relation:") + eq + 2, alphabet)
            relation = (lhs, rhs)
        else:
            raise PresentationSyntaxError(
                f"expected 'alphabet:' or 'relation:', got {line.split(':')[0]!r}",
                line_no, 1)
    if alphabet is None:
        raise PresentationSyntaxError("missing alphabet line", line_no + 1, 1)
    if relation is None:
        raise PresentationSyntaxError("missing relation line", line_no + 1, 1)
    return make_presentation(alphabet, relation[0], relation[1])


def render_presentation(P: Presentation) -> str:
    """The .orm text for a presentation; parses back to the same value."""
    lhs = spell(P.u) if P.u else "1"
    rhs = spell(P.v) if P.v else "1"
    return (f"alphabet: {' '.join(P.alphabet)}\n"
            f"relation: {lhs} = {rhs}\n")


# ------------------------------------------------------------------ report


@dataclass(frozen=True)
class Report:
    command: str
    input_digest: str
    payload: dict
    verdict_counts: dict[str, int]
    seeds: tuple[int, ...]
    budgets: dict
    approximate: bool
    renders: dict[str, str] = field(default_factory=dict, repr=False,
                                    compare=False)


def _as_json_obj(report: Report) -> dict:
    return {
        "command": report.command,
        "inputDigest": report.input_digest,
        "payload": report.payload,
        "verdictCounts": report.verdict_counts,
        "seeds": list(report.seeds),
        "budgets": report.budgets,
        "approximate": report.approximate,
    }


def _text_lines(value, indent: str) -> list[str]:
    if isinstance(value, dict):
        out = []
        for k in sorted(value, key=str):
            v = value[k]
            if isinstance(v, (dict, list, tuple)) and v:
                out.append(f"{indent}{k}:")
                out.extend(_text_lines(v, indent + "  "))
            else:
                out.append(f"{indent}{k}: {_scalar(v)}")
        return out
    if isinstance(value, (list, tuple)):
        out = []
        for v in value:
            if isinstance(v, (dict, list, tuple)) and v:
                out.append(f"{indent}-")
                out.extend(_text_lines(v, indent + "  "))
            else:
                out.append(f"{indent}- {_scalar(v)}")
        return out
    return [f"{indent}{_scalar(value)}"]


def _scalar(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (dict, list, tuple)):
        return "empty"
    return str(v)


def emit(report: Report, fmt: str = "json") -> bytes:
    """Render a report deterministically; raises UsageError on a format
    the command did not produce."""
    if fmt == "json":
        text = json.dumps(_as_json_obj(report), sort_keys=True, indent=2,
                          ensure_ascii=False)
        return (text + "\n").encode()
    if fmt == "text":
        lines = [f"command: {report.command}",
                 f"input: {report.input_digest or 'none'}"]
        lines += _text_lines(report.payload, "")
        for k in sorted(report.verdict_counts):
            lines.append(f"verdict {k}: {report.verdict_counts[k]}")
        if report.seeds:
            lines.append("seeds: " + " ".join(map(str, report.seeds)))
        for k in sorted(report.budgets, key=str):
            lines.append(f"budget {k}: {_scalar(report.budgets[k])}")
        lines.append(f"approximate: {_scalar(report.approximate)}")
        return ("\n".join(lines) + "\n").encode()
    if fmt in report.renders:
        return report.renders[fmt].encode()
    if fmt in FORMATS:
        raise UsageError(f"format {fmt!r} not supported for {report.command}")
    raise UsageError(f"unknown format {fmt!r}")


# ------------------------------------------------------------- dispatch


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _budget(ns) -> OracleBudget:
    kwargs = {}
    if getattr(ns, "budget_words", None) is not None:
        if ns.budget_words < 1:
            raise UsageError("--budget-words must be positive")
        kwargs["max_words"] = ns.budget_words
    if getattr(ns, "budget_len", None) is not None:
        if ns.budget_len < 0:
            raise UsageError("--budget-len must be nonnegative")
        kwargs["max_len"] = ns.budget_len
    return OracleBudget(**kwargs)


def _threads() -> int:
    raw = os.environ.get("ORMKIT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _budget_info(b: OracleBudget) -> dict:
    return {"maxWords": b.max_words, "maxLen": b.max_len,
            "threads": _threads()}


def _load(path: str) -> tuple[Presentation, str]:
    with open(path, "rb") as fh:
        raw = fh.read()
    digest = "sha256:" + hashlib.sha256(raw).hexdigest()
    return parse_presentation(raw.decode()), digest


def _parse_word(text: str, P: Presentation) -> Word:
    if text == "1" and "1" not in P.alphabet:
        return ()
    letters = tuple(ch for ch in text if ch != " ")
    for ch in letters:
        if ch not in P.alphabet:
            raise UsageError(f"undeclared letter {ch!r} in word {text!r}")
    return letters


def _word_text(P: Presentation, w: Word) -> str:
    sep = "" if all(len(a) == 1 for a in P.alphabet) else " "
    return sep.join(w)


def _cells_variant(name: str) -> CellVariant:
    return (CellVariant.FULL_RELATION if name == "full"
            else CellVariant.COMPRESSED_IDEAL)


def _ball_renders(P: Presentation, ball: CayleyBall) -> dict[str, str]:
    per_matrix = matrices_csv(ball)
    rows = ["matrix,row,col,value"]
    for name in ("d1", "d2"):
        body = per_matrix[name].splitlines()[1:]
        rows += [f"{name},{line}" for line in body]
    return {"dot": to_dot(ball), "csv": "\n".join(rows) + "\n"}


def _step_dict(data) -> dict:
    return {
        "by": spell(data.r),
        "alphabet": list(data.compressed.alphabet),
        "lhs": list(data.compressed.u),
        "rhs": list(data.compressed.v),
        "relation": data.compressed.describe(),
    }


def _cmd_classify(ns) -> tuple[int, Report]:
    P, digest = _load(ns.file)
    c = classify_full(P)
    payload = {
        "presentation": P.describe(),
        "caseTag": c.case.value,
        "torsion": c.torsion,
        "compressing": [spell(r) for r in c.compressing],
        "cdLeft": list(c.cd_left.as_pair()),
        "cdRight": list(c.cd_right.as_pair()),
        "gdLeft": list(c.gd_left.as_pair()),
        "gdRight": list(c.gd_right.as_pair()),
        "asphericity": c.asphericity.value,
    }
    return 0, Report("classify", digest, payload, {c.case.value: 1}, (),
                     _budget_info(_budget(ns)), False)


def _cmd_compress(ns) -> tuple[int, Report]:
    P, digest = _load(ns.file)
    payload: dict = {"presentation": P.describe()}
    if ns.by is not None:
        r = _parse_word(ns.by, P)
        try:
            data = compress_step(P, r)
        except NotCompressing as e:
            raise UsageError(str(e))
        payload["step"] = _step_dict(data)
        counts = {"steps": 1}
    else:
        strategy = (Strategy.SHORTEST_FIRST if ns.chain == "shortest-first"
                    else Strategy.LONGEST_FIRST)
        chain = compress_chain(P, strategy)
        payload["strategy"] = ns.chain
        payload["steps"] = [_step_dict(d) for d in chain.steps]
        payload["terminal"] = chain.terminal.describe()
        counts = {"steps": len(chain.steps)}
    return 0, Report("compress", digest, payload, counts, (),
                     _budget_info(_budget(ns)), False)


def _cmd_wp(ns) -> tuple[int, Report]:
    P, digest = _load(ns.file)
    b = _budget(ns)
    w1 = _parse_word(ns.w1, P)
    w2 = _parse_word(ns.w2, P)
    try:
        verdict = equal_bounded(P, w1, w2, b)
    except ValueError as e:
        raise UsageError(str(e))
    payload: dict = {
        "presentation": P.describe(),
        "w1": _word_text(P, w1),
        "w2": _word_text(P, w2),
        "verdict": type(verdict).__name__,
    }
    code = 0
    if isinstance(verdict, Equal):
        payload["path"] = [_word_text(P, w) for w in verdict.path]
        payload["pathLength"] = verdict.path_length
    elif isinstance(verdict, Distinct):
        payload["certificate"] = verdict.certificate
    elif isinstance(verdict, Unknown):
        payload["reason"] = verdict.reason
        code = 3
    return code, Report("wp", digest, payload,
                        {payload["verdict"]: 1}, (), _budget_info(b), False)


def _build_complex(ns, P) -> CayleyBall:
    ball = build_ball(P, ns.radius, _budget(ns))
    if getattr(ns, "cells", None):
        try:
            ball = attach_cells(ball, _cells_variant(ns.cells))
        except NotCompressible as e:
            raise UsageError(str(e))
    return ball


def _cmd_ball(ns) -> tuple[int, Report]:
    P, digest = _load(ns.file)
    ball = _build_complex(ns, P)
    payload = {
        "presentation": P.describe(),
        "radius": ns.radius,
        "cells": ns.cells,
        "graph": to_json_dict(ball),
    }
    counts = {"vertices": len(ball.vertices), "edges": len(ball.edges),
              "cells": len(ball.cells)}
    return 0, Report("ball", digest, payload, counts, (),
                     _budget_info(_budget(ns)), ball.approximate,
                     renders=_ball_renders(P, ball))


def _cmd_homology(ns) -> tuple[int, Report]:
    P, digest = _load(ns.file)
    ball = _build_complex(ns, P)
    basis = two_cycle_basis(ball)
    rendered = []
    for vec in basis:
        rendered.append([
            {"cellIndex": i,
             "base": _word_text(P, ball.vertices[ball.cells[i].base_vertex]),
             "variant": ball.cells[i].variant.value,
             "coeff": vec[i]}
            for i in sorted(vec)
        ])
    payload = {
        "presentation": P.describe(),
        "radius": ns.radius,
        "cells": ns.cells,
        "basisSize": len(basis),
        "basis": rendered,
    }
    return 0, Report("homology", digest, payload, {"cycles": len(basis)}, (),
                     _budget_info(_budget(ns)), ball.approximate,
                     renders={"csv": _ball_renders(P, ball)["csv"]})


def _cmd_squier_check(ns) -> tuple[int, Report]:
    P, digest = _load(ns.file)
    b = _budget(ns)
    walk = random_walk_check(P, (relation_edge(),), ns.walk_steps,
                             seed=ns.seed, budget=b)
    payload = {
        "presentation": P.describe(),
        "seed": walk.seed,
        "requested": walk.requested,
        "applied": walk.applied,
        "passed": walk.passed,
        "violation": walk.violation,
        "log": list(walk.log),
    }
    counts = {"applied": walk.applied,
              "violations": 0 if walk.passed else 1}
    return (0 if walk.passed else 1), Report("squier-check", digest, payload,
                                             counts, (ns.seed,),
                                             _budget_info(b), False)


def _cmd_inject_check(ns) -> tuple[int, Report]:
    P, digest = _load(ns.file)
    b = _budget(ns)
    try:
        rep = injectivity_harness(P, samples=ns.samples,
                                  max_support=ns.max_support, seed=ns.seed,
                                  budget=b, radius=ns.radius)
    except ValueError as e:
        raise UsageError(str(e))
    payload = {
        "presentation": P.describe(),
        "samples": rep.samples,
        "skipped": rep.skipped,
        "violations": list(rep.violations),
        "singletonChecked": rep.singleton_checked,
        "singletonSkipped": rep.singleton_skipped,
        "singletonViolations": list(rep.singleton_violations),
        "preconditions": {
            "incompressible": rep.pre_incompressible,
            "sharedLastLetter": rep.pre_shared_last_letter,
            "aspherical": rep.pre_aspherical,
        },
        "passed": rep.passed,
    }
    counts = {"violations": len(rep.violations) + len(rep.singleton_violations),
              "skipped": rep.skipped + rep.singleton_skipped}
    return (0 if rep.passed else 1), Report("inject-check", digest, payload,
                                            counts, (ns.seed,),
                                            _budget_info(b), False)


def _cmd_structure_check(ns) -> tuple[int, Report]:
    P, digest = _load(ns.file)
    b = _budget(ns)
    kinds = ([CheckKind(ns.check)] if ns.check else list(CheckKind))
    entries = []
    passed = failed = inapplicable = 0
    for kind in kinds:
        try:
            rep = structure_checks(P, kind, b, ns.radius)
        except (ValueError, NotCompressible, NotCompressing) as e:
            if ns.check:
                raise UsageError(str(e))
            entries.append({"check": kind.value, "applicable": False,
                            "reason": str(e)})
            inapplicable += 1
            continue
        entries.append({
            "check": kind.value,
            "applicable": True,
            "passed": rep.passed,
            "checked": rep.checked,
            "skipped": rep.skipped,
            "failures": list(rep.failures),
            "notes": list(rep.notes),
        })
        if rep.passed:
            passed += 1
        else:
            failed += 1
    payload = {"presentation": P.describe(), "radius": ns.radius,
               "checks": entries}
    counts = {"passed": passed, "failed": failed,
              "inapplicable": inapplicable}
    return (1 if failed else 0), Report("structure-check", digest, payload,
                                        counts, (), _budget_info(b), False)


_HANDLERS = {
    "classify": _cmd_classify,
    "compress": _cmd_compress,
    "wp": _cmd_wp,
    "ball": _cmd_ball,
    "homology": _cmd_homology,
    "squier-check": _cmd_squier_check,
    "inject-check": _cmd_inject_check,
    "structure-check": _cmd_structure_check,
}


def _parser() -> _Parser:
    p = _Parser(prog="ormkit",
                description="One-relator monoid toolkit: compression, "
                            "classification, word problem, complexes.")
    sub = p.add_subparsers(dest="command", required=True,
                           parser_class=_Parser)

    def add(name: str, **kwargs):
        sp = sub.add_parser(name, **kwargs)
        sp.add_argument("file", help="presentation file (.orm)")
        sp.add_argument("--format", choices=FORMATS, default="json")
        sp.add_argument("--budget-words", type=int, default=None)
        sp.add_argument("--budget-len", type=int, default=None)
        return sp

    add("classify", help="case tag, torsion, dimension bounds")

    sp = add("compress", help="compress the relation by a sealing word")
    group = sp.add_mutually_exclusive_group()
    group.add_argument("--by", default=None, metavar="WORD")
    group.add_argument("--chain", default="shortest-first",
                       choices=["shortest-first", "longest-first"],
                       metavar="STRATEGY")

    sp = add("wp", help="decide equality of two words")
    sp.add_argument("w1")
    sp.add_argument("w2")

    sp = add("ball", help="Cayley graph ball, optionally with 2-cells")
    sp.add_argument("--radius", type=int, default=4)
    sp.add_argument("--cells", choices=["full", "ideal"], default=None)

    sp = add("homology", help="interior 2-cycle basis of the complex")
    sp.add_argument("--radius", type=int, default=4)
    sp.add_argument("--cells", choices=["full", "ideal"], default="full")

    sp = add("squier-check", help="random-walk parity invariance check")
    sp.add_argument("--walk-steps", type=int, default=200)
    sp.add_argument("--seed", type=int, default=0)

    sp = add("inject-check", help="sampled formal-sum injectivity harness")
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--max-support", type=int, default=4)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--radius", type=int, default=6)

    sp = add("structure-check", help="oracle-backed structural checks")
    sp.add_argument("check", nargs="?", default=None,
                    choices=[k.value for k in CheckKind])
    sp.add_argument("--radius", type=int, default=6)

    return p


def _error_report(command: str, message: str) -> Report:
    return Report(command, "", {"error": message}, {"error": 1}, (), {},
                  False)


def dispatch(argv: list[str]) -> tuple[int, Report]:
    """Run one command; never raises for user-input problems."""
    command = ""
    try:
        ns = _parser().parse_args(argv)
        command = ns.command
        return _HANDLERS[command](ns)
    except UsageError as e:
        return 2, _error_report(command or "usage", str(e))
    except PresentationSyntaxError as e:
        return 2, _error_report(command, str(e))
    except OSError as e:
        return 2, _error_report(command, str(e))
    except BudgetExceeded as e:
        return 3, _error_report(command, f"budget exhausted: {e}")
    except UndecidableClass as e:
        return 3, _error_report(command,
                                f"class not saturated within budget: {e}")


def _requested_format(argv: list[str]) -> str:
    for i, arg in enumerate(argv):
        if arg == "--format" and i + 1 < len(argv):
            return argv[i + 1]
        if arg.startswith("--format="):
            return arg.split("=", 1)[1]
    return "json"


def main(argv: list[str] | None = None) -> int:
    args = list(sys.argv[1:] if argv is None else argv)
    code, report = dispatch(args)
    fmt = _requested_format(args)
    if fmt not in FORMATS:
        fmt = "json"
    try:
        out = emit(report, fmt)
    except UsageError as e:
        out = emit(_error_report(report.command, str(e)))
        code = 2
    sys.stdout.buffer.write(out)
    sys.stdout.buffer.flush()
    return code


if __name__ == "__main__":
    raise SystemExit(main())
