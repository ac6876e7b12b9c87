"""Free-group words and the truncated group-ring calculus on them.

A :class:`Word` is a freely reduced sequence of (generator index, sign)
letters over a fixed ordered :class:`GenSet`.  Reduction happens on
construction, so every Word in circulation is canonical and equality is
literal tuple equality.

:func:`fox_expand` rewrites a group-ring element, modulo the (n+1)-st
power of the augmentation ideal, as a combination of products
``(s_1 - 1)(s_2 - 1) ... (s_k - 1)`` over *positive* generators with
k <= n.  A monomial is stored as the tuple of its generator indices; the
empty tuple is the unit and carries the augmentation of the element.
Inverse letters enter through the truncated geometric series
``(s^-1 - 1) = -(s-1) + (s-1)^2 - ...`` and concatenation uses the
product rule ``(uv - 1) = (u-1)(v-1) + (u-1) + (v-1)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .rings import Ring


class WordSyntaxError(ValueError):
    """Malformed word/token ("syntax")."""

    code = "syntax"


class UnknownGeneratorError(ValueError):
    """Word uses a generator outside the generator set ("unknown_generator")."""

    code = "unknown_generator"


class GeneratorMismatchError(ValueError):
    """Operands built over different generator sets ("gen_mismatch")."""

    code = "gen_mismatch"


_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TOKEN_RE = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+))?$")


@dataclass(frozen=True)
class GenSet:
    """Ordered set of distinct generator names."""

    names: tuple

    def __post_init__(self):
        if not isinstance(self.names, tuple):
            object.__setattr__(self, "names", tuple(self.names))
        for name in self.names:
            if not isinstance(name, str) or not _NAME_RE.fullmatch(name):
                raise WordSyntaxError(f"bad generator name {name!r}")
        if len(set(self.names)) != len(self.names):
            raise WordSyntaxError(f"duplicate generator names in {self.names}")

    @staticmethod
    def of(*names: str) -> "GenSet":
        return GenSet(tuple(names))

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownGeneratorError(
                f"unknown generator {name!r} (have {', '.join(self.names)})"
            ) from None


def _require_same_gens(a: GenSet, b: GenSet):
    if a.names != b.names:
        raise GeneratorMismatchError(f"generator sets differ: {a.names} vs {b.names}")


@dataclass(frozen=True, order=True)
class Word:
    """Freely reduced word; letters are (generator index, +1 or -1)."""

    gens: GenSet = field(compare=False)
    letters: tuple = ()

    def __post_init__(self):
        stack = []
        for letter in self.letters:
            g, s = letter
            if not 0 <= g < len(self.gens):
                raise UnknownGeneratorError(f"generator index {g} out of range")
            if s not in (1, -1):
                raise WordSyntaxError(f"letter sign must be +-1, got {s}")
            if stack and stack[-1][0] == g and stack[-1][1] == -s:
                stack.pop()
            else:
                stack.append((g, s))
        object.__setattr__(self, "letters", tuple(stack))

    @staticmethod
    def identity(gens: GenSet) -> "Word":
        return Word(gens, ())

    @staticmethod
    def generator(gens: GenSet, name: str, power: int = 1) -> "Word":
        g = gens.index(name)
        sign = 1 if power > 0 else -1
        return Word(gens, ((g, sign),) * abs(power))

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        _require_same_gens(self.gens, other.gens)
        return Word(self.gens, self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(self.gens, tuple((g, -s) for g, s in reversed(self.letters)))

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        out = Word.identity(self.gens)
        for _ in range(abs(k)):
            out = out * base
        return out

    def is_identity(self) -> bool:
        return not self.letters

    def to_text(self) -> str:
        """Round-trippable text: runs compressed, identity shown as "1"."""
        if not self.letters:
            return "1"
        parts = []
        i = 0
        while i < len(self.letters):
            g, s = self.letters[i]
            j = i
            while j < len(self.letters) and self.letters[j] == (g, s):
                j += 1
            k = (j - i) * s
            parts.append(self.gens.names[g] if k == 1 else f"{self.gens.names[g]}^{k}")
            i = j
        return " ".join(parts)


def parse_word(text: str, gens: GenSet) -> Word:
    """Parse whitespace-separated tokens ``g``, ``g^-1``, ``g^k`` (k nonzero).

    The empty string and the bare token "1" denote the identity.
    """
    letters = []
    tokens = text.split()
    if tokens == ["1"]:
        return Word.identity(gens)
    for token in tokens:
        m = _TOKEN_RE.fullmatch(token)
        if not m:
            raise WordSyntaxError(f"bad token {token!r}")
        name, exp = m.group(1), m.group(2)
        g = gens.index(name)
        k = 1 if exp is None else int(exp)
        if k == 0:
            raise WordSyntaxError(f"zero exponent in token {token!r}")
        sign = 1 if k > 0 else -1
        letters.extend([(g, sign)] * abs(k))
    return Word(gens, tuple(letters))


def conjugate(g: Word, w: Word) -> Word:
    """g * w * g^-1."""
    return g * w * g.inverse()


# Letters in enumeration order: a before a^-1 before b ...
def _letter_order(gens: GenSet):
    out = []
    for g in range(len(gens)):
        out.append((g, 1))
        out.append((g, -1))
    return out


def words_up_to(gens: GenSet, max_len: int):
    """All reduced words of length <= max_len, by (length, lexicographic) order."""
    current = [Word.identity(gens)]
    yield current[0]
    order = _letter_order(gens)
    for _ in range(max_len):
        nxt = []
        for w in current:
            last = w.letters[-1] if w.letters else None
            for g, s in order:
                if last is not None and last[0] == g and last[1] == -s:
                    continue
                nxt.append(Word(gens, w.letters + ((g, s),)))
        yield from nxt
        current = nxt


def random_reduced_word(rng, gens: GenSet, max_len: int, exact_len: int | None = None) -> Word:
    """Uniform-ish reduced word with the given length bound; deterministic in rng."""
    length = exact_len if exact_len is not None else rng.randrange(0, max_len + 1)
    letters = []
    order = _letter_order(gens)
    for _ in range(length):
        options = [
            (g, s)
            for g, s in order
            if not letters or not (letters[-1][0] == g and letters[-1][1] == -s)
        ]
        if not options:
            break
        letters.append(rng.choice(options))
    return Word(gens, tuple(letters))


# ---------------------------------------------------------------------------
# Group-ring elements
# ---------------------------------------------------------------------------


@dataclass
class GroupRingElement:
    """Finite formal combination of words with coefficients in the ring."""

    ring: Ring
    gens: GenSet
    terms: dict  # Word -> coefficient, no zero values

    def __post_init__(self):
        clean = {}
        for w, c in self.terms.items():
            c = self.ring.canon(c)
            if c != self.ring.zero():
                clean[w] = c
        self.terms = clean

    @staticmethod
    def zero(ring: Ring, gens: GenSet) -> "GroupRingElement":
        return GroupRingElement(ring, gens, {})

    @staticmethod
    def from_word(ring: Ring, w: Word, coeff=1) -> "GroupRingElement":
        return GroupRingElement(ring, w.gens, {w: ring.from_int(coeff) if isinstance(coeff, int) else coeff})

    @staticmethod
    def one(ring: Ring, gens: GenSet) -> "GroupRingElement":
        return GroupRingElement.from_word(ring, Word.identity(gens))

    def coefficient(self, w: Word):
        return self.terms.get(w, self.ring.zero())

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        _require_same_gens(self.gens, other.gens)
        acc = dict(self.terms)
        for w, c in other.terms.items():
            acc[w] = self.ring.add(acc.get(w, self.ring.zero()), c)
        return GroupRingElement(self.ring, self.gens, acc)

    def __neg__(self) -> "GroupRingElement":
        return GroupRingElement(
            self.ring, self.gens, {w: self.ring.neg(c) for w, c in self.terms.items()}
        )

    def __sub__(self, other: "GroupRingElement") -> "GroupRingElement":
        return self + (-other)

    def scale(self, coeff) -> "GroupRingElement":
        return GroupRingElement(
            self.ring,
            self.gens,
            {w: self.ring.mul(c, coeff) for w, c in self.terms.items()},
        )

    def __mul__(self, other: "GroupRingElement") -> "GroupRingElement":
        _require_same_gens(self.gens, other.gens)
        acc = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 * w2
                acc[w] = self.ring.add(acc.get(w, self.ring.zero()), self.ring.mul(c1, c2))
        return GroupRingElement(self.ring, self.gens, acc)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GroupRingElement)
            and self.ring == other.ring
            and self.gens.names == other.gens.names
            and self.terms == other.terms
        )


def augmentation(x: GroupRingElement):
    """Sum of coefficients: the image of x under words -> 1."""
    acc = x.ring.zero()
    for c in x.terms.values():
        acc = x.ring.add(acc, c)
    return acc


def word_minus_one(ring: Ring, w: Word) -> GroupRingElement:
    # built by subtraction so that w = identity correctly gives zero
    return GroupRingElement.from_word(ring, w) - GroupRingElement.one(ring, w.gens)


# ---------------------------------------------------------------------------
# Truncated expansion in the augmentation filtration
# ---------------------------------------------------------------------------


@dataclass
class MonomialCombination:
    """Combination of positive-generator monomials, truncated in degree.

    A key ``(i_1, ..., i_k)`` stands for the product
    ``(s_{i_1} - 1) ... (s_{i_k} - 1)`` with k <= max_degree; the empty
    key is the unit.  ``exact_mod_higher`` records that the represented
    element equals the original one exactly modulo monomials of length
    > max_degree (true for everything this module produces).
    """

    ring: Ring
    gens: GenSet
    max_degree: int
    terms: dict  # tuple of generator indices -> coefficient, no zeros
    exact_mod_higher: bool = True

    def __post_init__(self):
        clean = {}
        for mono, c in self.terms.items():
            if len(mono) > self.max_degree:
                continue
            c = self.ring.canon(c)
            if c != self.ring.zero():
                clean[mono] = c
        self.terms = clean

    def coefficient(self, mono):
        return self.terms.get(tuple(mono), self.ring.zero())

    def degrees(self):
        return sorted({len(m) for m in self.terms})

    def __add__(self, other: "MonomialCombination") -> "MonomialCombination":
        _require_same_gens(self.gens, other.gens)
        n = min(self.max_degree, other.max_degree)
        acc = {m: c for m, c in self.terms.items() if len(m) <= n}
        for m, c in other.terms.items():
            if len(m) <= n:
                acc[m] = self.ring.add(acc.get(m, self.ring.zero()), c)
        return MonomialCombination(self.ring, self.gens, n, acc)

    def multiply(self, other: "MonomialCombination") -> "MonomialCombination":
        """Concatenation product, truncated at the common degree bound."""
        _require_same_gens(self.gens, other.gens)
        n = min(self.max_degree, other.max_degree)
        acc = {}
        for m1, c1 in self.terms.items():
            if len(m1) > n:
                continue
            for m2, c2 in other.terms.items():
                if len(m1) + len(m2) > n:
                    continue
                key = m1 + m2
                acc[key] = self.ring.add(acc.get(key, self.ring.zero()), self.ring.mul(c1, c2))
        return MonomialCombination(self.ring, self.gens, n, acc)

    def scale(self, coeff) -> "MonomialCombination":
        return MonomialCombination(
            self.ring,
            self.gens,
            self.max_degree,
            {m: self.ring.mul(c, coeff) for m, c in self.terms.items()},
        )

    @staticmethod
    def monomial(ring: Ring, gens: GenSet, mono, max_degree: int, coeff=1) -> "MonomialCombination":
        return MonomialCombination(ring, gens, max_degree, {tuple(mono): ring.from_int(coeff)})


def _mono_mul(d1: dict, d2: dict, n: int) -> dict:
    out = {}
    for m1, c1 in d1.items():
        for m2, c2 in d2.items():
            if len(m1) + len(m2) <= n:
                key = m1 + m2
                out[key] = out.get(key, 0) + c1 * c2
    return {m: c for m, c in out.items() if c}


def _expand_word_minus_one(letters: tuple, n: int, cache: dict) -> dict:
    """Integer-coefficient expansion of (word - 1), degrees 1..n."""
    if not letters:
        return {}
    hit = cache.get(letters)
    if hit is not None:
        return hit
    if len(letters) == 1:
        g, s = letters[0]
        if s == 1:
            out = {(g,): 1} if n >= 1 else {}
        else:
            out = {(g,) * k: (-1) ** k for k in range(1, n + 1)}
    else:
        head = _expand_word_minus_one(letters[:1], n, cache)
        tail = _expand_word_minus_one(letters[1:], n, cache)
        out = _mono_mul(head, tail, n)
        for part in (head, tail):
            for m, c in part.items():
                out[m] = out.get(m, 0) + c
        out = {m: c for m, c in out.items() if c}
    cache[letters] = out
    return out


def fox_expand(x: GroupRingElement, n: int) -> MonomialCombination:
    """Expansion of x in positive monomials up to degree n.

    The result represents x exactly modulo the (n+1)-st power of the
    augmentation ideal; its empty-monomial coefficient is aug(x).
    """
    if n < 0:
        raise ValueError(f"truncation degree must be >= 0, got {n}")
    ring = x.ring
    cache: dict = {}
    acc = {(): augmentation(x)}
    for w, c in x.terms.items():
        for mono, k in _expand_word_minus_one(w.letters, n, cache).items():
            acc[mono] = ring.add(acc.get(mono, ring.zero()), ring.mul(c, ring.from_int(k)))
    return MonomialCombination(ring, x.gens, n, acc)
