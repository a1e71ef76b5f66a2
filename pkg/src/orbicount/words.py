"""Symbolic layer: reduced words, conjugacy canonical forms, flags.

Words are tuples of signed 1-based generator indices (letter ``+k`` is the
k-th generator, ``-k`` its inverse), the convention used by the signature's
``parse_word``/``format_word``.  Reduction performs free cancellation plus
torsion normalization (exponents of a cone generator of order m live in
(-m/2, m/2]).  Canonical forms additionally quotient by conjugation
(cyclic rotation), inversion (unoriented curves), and by shortening moves
against the defining relator, and take the lexicographic minimum under the
fixed letter order: declaration order, inverse after positive.

Shortening against the relator makes the canonical form exact for torsion
detection at the word lengths used here; where a symbolic verdict and the
numeric holonomy classification still disagree, the numeric verdict wins
and a ``VerdictMismatchWarning`` is emitted rather than guessing silently.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache

from . import hypgeom
from .errors import NotHyperbolic
from .orbifold import FuchsianGroup, OrbifoldSignature

Word = tuple[int, ...]


class VerdictMismatchWarning(UserWarning):
    """Symbolic and numeric verdicts disagreed for a word."""


def inverse_word(word: Word) -> Word:
    return tuple(-x for x in reversed(word))


def conjugate(word: Word, by: Word) -> Word:
    return tuple(by) + tuple(word) + inverse_word(by)


def _normalize_exp(e: int, m: int | None) -> int:
    """Torsion exponent representative in (-m/2, m/2]."""
    if m is None:
        return e
    e %= m
    if 2 * e > m:
        e -= m
    return e


def _runs(word, sig: OrbifoldSignature):
    """Stack-based reduction into (generator, exponent) runs."""
    stack: list[list[int]] = []
    for letter in word:
        g, e = abs(letter), (1 if letter > 0 else -1)
        if stack and stack[-1][0] == g:
            stack[-1][1] = _normalize_exp(stack[-1][1] + e, sig.torsion_order(g))
            if stack[-1][1] == 0:
                stack.pop()
                # merging may expose a new adjacent pair; handled because
                # subsequent letters re-examine the new top of stack
        else:
            e = _normalize_exp(e, sig.torsion_order(g))
            if e != 0:
                stack.append([g, e])
    # a pop can leave two equal-generator runs adjacent; fix in passes
    changed = True
    while changed:
        changed = False
        out: list[list[int]] = []
        for g, e in stack:
            if out and out[-1][0] == g:
                out[-1][1] = _normalize_exp(out[-1][1] + e, sig.torsion_order(g))
                if out[-1][1] == 0:
                    out.pop()
                changed = True
            else:
                out.append([g, e])
        stack = out
    return stack


def _runs_to_letters(runs) -> Word:
    out: list[int] = []
    for g, e in runs:
        out.extend([g if e > 0 else -g] * abs(e))
    return tuple(out)


def reduce(word, sig: OrbifoldSignature) -> Word:
    """Free reduction plus torsion normalization, to a fixed point."""
    return _runs_to_letters(_runs(word, sig))


def cyclic_reduce(word, sig: OrbifoldSignature) -> Word:
    """Reduce, then cancel and merge around the seam of the cyclic word."""
    runs = _runs(word, sig)
    while len(runs) > 1 and runs[0][0] == runs[-1][0]:
        g = runs[0][0]
        e = _normalize_exp(runs[0][1] + runs[-1][1], sig.torsion_order(g))
        runs = runs[1:-1]
        if e != 0:
            # neighbors of the merged run are distinct generators already
            runs.insert(0, [g, e])
            break
    return _runs_to_letters(runs)


# ----------------------------------------------------------------------
# relator-aware shortening


def _letter_code(letter: int) -> int:
    """Total order on letters: declaration order, inverse after positive."""
    return 2 * abs(letter) + (1 if letter < 0 else 0)


def _encode(word: Word) -> str:
    return "".join(chr(33 + _letter_code(x)) for x in word)


@lru_cache(maxsize=64)
def _dehn_table(sig: OrbifoldSignature):
    """Shortening rules: encoded proper prefixes u (longer than half the
    relator) of every rotation of the relator and its inverse, each mapped
    to the shorter replacement word."""
    genus, k, b = sig.genus, len(sig.cone_orders), sig.boundary
    relator: list[int] = []
    for i in range(genus):
        ai, bi = 2 * i + 1, 2 * i + 2
        relator += [ai, bi, -ai, -bi]
    relator += [2 * genus + j + 1 for j in range(k)]
    relator += [2 * genus + k + l + 1 for l in range(b)]
    rel = reduce(tuple(relator), sig)
    n = len(rel)
    if n < 2:
        return ()
    rules = {}
    for base in (rel, inverse_word(rel)):
        for r in range(n):
            rot = base[r:] + base[:r]
            for L in range(n - 1, n // 2, -1):
                u, v = rot[:L], rot[L:]
                repl = reduce(inverse_word(v), sig)
                if len(repl) >= L:
                    continue
                key = _encode(u)
                if key not in rules:
                    rules[key] = repl
    # longest patterns first so the biggest shortening is found first
    return tuple(sorted(rules.items(), key=lambda kv: (-len(kv[0]), kv[0])))


def dehn_shorten(word: Word, sig: OrbifoldSignature) -> Word:
    """Apply relator shortening moves to the cyclic word until none fire.

    Each move replaces a subword matching more than half of (a rotation of)
    the relator by the inverse of the complement, which preserves the
    conjugacy class and strictly decreases length.  Deterministic: the
    longest, leftmost match in the doubled word is applied first.
    """
    w = cyclic_reduce(word, sig)
    table = _dehn_table(sig)
    if not table:
        return w
    while True:
        if not w:
            return w
        s = _encode(w)
        doubled = s + s
        best = None
        for pat, repl in table:
            if len(pat) > len(s):
                continue
            pos = doubled.find(pat)
            if pos < len(s) and pos >= 0:
                best = (pos, len(pat), repl)
                break
        if best is None:
            return w
        pos, plen, repl = best
        rotated = w[pos:] + w[:pos]          # match now at the front
        w = cyclic_reduce(repl + rotated[plen:], sig)


def _least_rotation(word: Word) -> Word:
    """Booth's algorithm for the lexicographically least rotation."""
    n = len(word)
    if n <= 1:
        return word
    codes = [_letter_code(x) for x in word]
    s = codes + codes
    f = [-1] * len(s)
    k = 0
    for j in range(1, len(s)):
        sj = s[j]
        i = f[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != s[k + i + 1]:
            if sj < s[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return word[k:] + word[:k]


def canonicalize(word, sig: OrbifoldSignature) -> Word:
    """Canonical conjugacy-class representative of an unoriented word."""
    w = dehn_shorten(tuple(word), sig)
    if not w:
        return ()
    cands = (_least_rotation(w), _least_rotation(inverse_word(w)))
    return min(cands, key=lambda ww: [_letter_code(x) for x in ww])


def word_letter_count(word: Word) -> int:
    """Syllable-weighted letter count (sum of |exponents|)."""
    return len(word)


def is_proper_power(word: Word) -> bool:
    """Is the cyclic word a proper power (period a proper divisor)?"""
    n = len(word)
    if n == 0:
        return False
    s = _encode(word)
    return (s + s).find(s, 1) < n


# ----------------------------------------------------------------------
# flags


def _boundary_indices(sig: OrbifoldSignature) -> list[int]:
    n0 = 2 * sig.genus + len(sig.cone_orders)
    return [n0 + l + 1 for l in range(sig.boundary)]


def _is_peripheral(canon: Word, group: FuchsianGroup) -> bool:
    sig = group.signature
    bidx = _boundary_indices(sig)
    if not bidx:
        return False
    try:
        lw = group.word_length(canon)
    except NotHyperbolic:
        return False
    for ci in bidx:
        lc = group.word_length((ci,))
        nmax = int(round(lw / lc)) + 1
        for nn in range(1, nmax + 1):
            if canon == canonicalize((ci,) * nn, sig):
                return True
            if canon == canonicalize((-ci,) * nn, sig):
                return True
    return False


def _symbolic_finite_order(canon: Word, sig: OrbifoldSignature) -> bool:
    """Torsion detection on the canonical form: empty, or one torsion run."""
    if not canon:
        return True
    gens = {abs(x) for x in canon}
    if len(gens) == 1:
        g = next(iter(gens))
        if sig.torsion_order(g) is not None:
            return True
    return False


def is_essential(word, group: FuchsianGroup) -> bool:
    """Neither finite order nor a power of a boundary generator.

    Symbolic-first: in a Fuchsian group every finite-order element is
    conjugate into a cone stabilizer, so after canonicalization torsion
    classes are single cone-generator runs.  The numeric classification of
    the holonomy cross-checks the verdict.
    """
    sig = group.signature
    canon = canonicalize(word, sig)
    symbolic_torsion = _symbolic_finite_order(canon, sig)
    kind = hypgeom.classify(group.holonomy(canon)).kind if canon else "identity"
    numeric_torsion = kind in ("elliptic", "identity")
    if symbolic_torsion != numeric_torsion:
        warnings.warn(
            f"word {canon}: symbolic torsion={symbolic_torsion} but holonomy "
            f"is {kind}; trusting the numeric verdict",
            VerdictMismatchWarning,
            stacklevel=2,
        )
    if numeric_torsion or symbolic_torsion:
        return False
    if kind == "parabolic":
        return False
    return not _is_peripheral(canon, group)


def is_primitive(word, group: FuchsianGroup) -> bool:
    """Canonical word is not a proper power of a shorter cyclic word."""
    canon = canonicalize(word, group.signature)
    return not is_proper_power(canon)


@dataclass(frozen=True)
class CurveClass:
    """Canonical representative of an unoriented free homotopy class."""

    canonical: Word
    length: float
    essential: bool
    primitive: bool

    def text(self, sig: OrbifoldSignature) -> str:
        return sig.format_word(self.canonical)

    def __lt__(self, other: "CurveClass"):
        return (self.length, self.canonical) < (other.length, other.canonical)


def curve_class(word, group: FuchsianGroup) -> CurveClass:
    """Build a CurveClass (canonical form, geodesic length, flags)."""
    sig = group.signature
    if isinstance(word, str):
        word = sig.parse_word(word)
    canon = canonicalize(word, sig)
    essential = is_essential(canon, group)
    primitive = is_primitive(canon, group) if canon else False
    length = 0.0
    if canon:
        try:
            length = group.word_length(canon)
        except NotHyperbolic:
            length = 0.0
    return CurveClass(canon, length, essential, primitive)
