"""End-to-end tour of the toolkit on the two running examples.

Run from the repository root:

    python3 scripts/worked_example.py
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from ormkit import (
    CellVariant,
    Strategy,
    attach_cells,
    build_ball,
    classify_full,
    compress_chain,
    compress_step,
    equal_bounded,
    make_presentation,
    spell,
    two_cycle_basis,
    word,
)
from ormkit.squier import random_walk_check, relation_edge


def show_compression():
    P = make_presentation(("a", "b"), word("ababbaba"), word("ababa"))
    print(f"presentation {P.describe()}")
    step = compress_step(P, word("a"))
    print(f"  compress by 'a'   -> {step.compressed.describe()}")
    step = compress_step(P, word("aba"))
    print(f"  compress by 'aba' -> {step.compressed.describe()}")
    chain = compress_chain(P, Strategy.SHORTEST_FIRST)
    print(f"  shortest-first chain terminates after {len(chain.steps)} "
          f"steps at {chain.terminal.describe()}")


def show_classification():
    rows = [
        (("a",), "aa", "a"),
        (("a", "b"), "babab", "b"),
        (("a", "b", "c"), "aba", "aca"),
        (("a", "b"), "ababbaba", "ababa"),
    ]
    for alphabet, lhs, rhs in rows:
        P = make_presentation(alphabet, word(lhs), word(rhs))
        c = classify_full(P)
        lo, hi = c.cd_left.as_pair()
        print(f"  {P.describe():38} {c.case.value:36} cd in [{lo}, {hi}]")


def show_word_problem():
    P = make_presentation(("a", "b", "c"), word("aba"), word("aca"))
    for w1, w2 in (("ababa", "abaca"), ("ab", "ac")):
        verdict = equal_bounded(P, word(w1), word(w2))
        print(f"  {w1} vs {w2}: {type(verdict).__name__}")


def show_sphere():
    P = make_presentation(("a", "b", "c"), word("aba"), word("aca"))
    ball = attach_cells(build_ball(P, 6), CellVariant.FULL_RELATION)
    basis = two_cycle_basis(ball)
    print(f"  radius-6 ball: {len(ball.vertices)} vertices, "
          f"{len(ball.cells)} cells, {len(basis)} interior 2-cycles")
    vec = basis[0]
    terms = " + ".join(f"{c}*cell[{spell(ball.vertices[ball.cells[i].base_vertex])}]"
                       for i, c in sorted(vec.items()))
    print(f"  first cycle: {terms}")


def show_walk():
    P = make_presentation(("a", "b", "c"), word("aba"), word("aca"))
    report = random_walk_check(P, (relation_edge(),), steps=500, seed=42)
    state = "held" if report.passed else f"BROKEN: {report.violation}"
    print(f"  500-step walk, seed 42: parity invariant {state}")


if __name__ == "__main__":
    print("== relation compression ==")
    show_compression()
    print("== classification ==")
    show_classification()
    print("== word problem ==")
    show_word_problem()
    print("== interior 2-cycles ==")
    show_sphere()
    print("== parity random walk ==")
    show_walk()
