"""Word primitives for one-relator monoid presentations.

A word is a tuple of letter names.  Letter names are single characters in
the file format, but compression introduces letters whose names are the
spellings of words over the previous alphabet (for example "ba"), so
nothing in this module assumes one-character names.

The central notion is *sealing*: a nonempty word r seals w when w both
starts and ends with r (the two occurrences may overlap, so "aba" seals
"ababa").  A word sealing both sides of the defining relation is a
*compressing word*; these form a chain under sealing, the shortest one is
self-overlap-free, and they drive the whole compression calculus.
"""

from __future__ import annotations

from dataclasses import dataclass

Word = tuple[str, ...]

EMPTY: Word = ()


def word(text: str) -> Word:
    """Build a word from a string of single-character letters."""
    return tuple(text)


def spell(w: Word) -> str:
    """Flatten a word to the concatenation of its letter names."""
    return "".join(w)


def starts_with(w: Word, prefix: Word) -> bool:
    return w[: len(prefix)] == prefix


def ends_with(w: Word, suffix: Word) -> bool:
    if not suffix:
        return True
    return w[-len(suffix):] == suffix


def find_occurrences(haystack: Word, needle: Word) -> list[int]:
    """All start positions of needle in haystack, overlaps included.

    An empty needle occurs at every boundary position 0..len(haystack).
    """
    n = len(needle)
    if n == 0:
        return list(range(len(haystack) + 1))
    return [i for i in range(len(haystack) - n + 1) if haystack[i:i + n] == needle]


@dataclass(frozen=True)
class Presentation:
    """A normalized one-relator presentation <alphabet | u = v>.

    Normalized means |v| <= |u|, with the shortlex tie-break u >= v when
    the lengths agree.  Shortlex uses the alphabet declaration order.
    Construct through :func:`make_presentation` to get normalization for
    free; the constructor itself rejects unnormalized input.
    """

    alphabet: tuple[str, ...]
    u: Word
    v: Word

    def __post_init__(self) -> None:
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("duplicate letters in alphabet")
        used = set(self.u) | set(self.v)
        missing = used - set(self.alphabet)
        if missing:
            raise ValueError(f"letters not declared in alphabet: {sorted(missing)}")
        if self.shortlex_key(self.u) < self.shortlex_key(self.v):
            raise ValueError("presentation not normalized: need u >= v in shortlex")

    def letter_index(self, letter: str) -> int:
        return self.alphabet.index(letter)

    def shortlex_key(self, w: Word) -> tuple:
        idx = {a: i for i, a in enumerate(self.alphabet)}
        return (len(w), tuple(idx[x] for x in w))

    def letter_counts(self, w: Word) -> tuple[int, ...]:
        return tuple(w.count(a) for a in self.alphabet)

    def describe(self) -> str:
        # multi-character letter names would be ambiguous when flattened
        sep = "" if all(len(a) == 1 for a in self.alphabet) else " "
        lhs = sep.join(self.u) if self.u else "1"
        rhs = sep.join(self.v) if self.v else "1"
        return f"<{' '.join(self.alphabet)} | {lhs} = {rhs}>"


def make_presentation(alphabet: tuple[str, ...] | list[str],
                      lhs: Word, rhs: Word) -> Presentation:
    """Normalize and build a presentation from an unordered relation pair."""
    alphabet = tuple(alphabet)
    idx = {a: i for i, a in enumerate(alphabet)}
    for w in (lhs, rhs):
        for x in w:
            if x not in idx:
                raise ValueError(f"letter {x!r} not declared in alphabet")

    def key(w: Word) -> tuple:
        return (len(w), tuple(idx[x] for x in w))

    if key(lhs) >= key(rhs):
        return Presentation(alphabet, tuple(lhs), tuple(rhs))
    return Presentation(alphabet, tuple(rhs), tuple(lhs))


def ovl(x: Word, y: Word) -> set[Word]:
    """Nonempty words that are simultaneously a suffix of x and a prefix of y.

    A word may overlap itself completely, so ovl(w, w) always contains w
    for nonempty w.
    """
    out: set[Word] = set()
    for k in range(1, min(len(x), len(y)) + 1):
        if x[-k:] == y[:k]:
            out.add(y[:k])
    return out


def is_sof(r: Word) -> bool:
    """True when no proper nonempty prefix of r is also a suffix of r.

    Equivalently ovl(r, r) == {r}.  Raises on the empty word, for which
    the notion is not defined.
    """
    if not r:
        raise ValueError("self-overlap-freeness is undefined for the empty word")
    return all(r[:k] != r[-k:] for k in range(1, len(r)))


def seals(r: Word, w: Word) -> bool:
    """True when nonempty r is both a prefix and a suffix of w.

    The occurrences may overlap: ("a","b","a") seals ("a","b","a","b","a").
    """
    if not r:
        raise ValueError("only nonempty words can seal")
    return len(r) <= len(w) and starts_with(w, r) and ends_with(w, r)


def compressing_words(P: Presentation) -> list[Word]:
    """All nonempty words sealing both sides of the relation, shortest first.

    Any such word is a prefix (and suffix) of the shorter side v, so only
    prefixes of v need checking.  The result is empty exactly when P is
    incompressible; in particular whenever v is empty.  The words form a
    chain under sealing and the first one is self-overlap-free.
    """
    out = []
    for k in range(1, len(P.v) + 1):
        r = P.v[:k]
        if seals(r, P.u) and seals(r, P.v):
            out.append(r)
    return out


def common_affixes(u: Word, v: Word) -> tuple[Word, Word]:
    """The longest common prefix and the longest common suffix of u and v."""
    n = min(len(u), len(v))
    p = 0
    while p < n and u[p] == v[p]:
        p += 1
    s = 0
    while s < n and u[len(u) - 1 - s] == v[len(v) - 1 - s]:
        s += 1
    suffix = u[len(u) - s:] if s else EMPTY
    return u[:p], suffix


def proper_power_root(w: Word) -> tuple[Word, int]:
    """Write w as p^k with k maximal; returns (p, k).

    k >= 2 exactly when w is a proper power.  Raises on the empty word.
    """
    n = len(w)
    if n == 0:
        raise ValueError("the empty word has no power root")
    for d in range(1, n + 1):
        if n % d == 0 and w[:d] * (n // d) == w:
            return w[:d], n // d
    raise AssertionError("unreachable: w is always w^1")
