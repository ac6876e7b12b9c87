"""Braided letter-counting tensors and their evaluation on words.

A :class:`BraidingTensor` of weight p assigns a coefficient to each
length-p sequence of positive generators; it is a finite combination of
pure tensors of duals of the generators.  Evaluating it on a word w sums,
over weakly increasing tuples of letter positions, the products of the
slot values at those positions:

* slot value of generator-dual t at letter s is +1, at letter s^-1 is -1,
  and 0 unless s = t;
* consecutive chosen positions must increase strictly after a positive
  letter and weakly after an inverse letter (so several consecutive
  slots may sit on one inverse letter, which is what makes the value
  invariant under free reduction).

The evaluation runs as a dynamic program over letter positions, linear
in word length for each stored coefficient, so long words are cheap.

The cycle operator rotates coordinate sequences; its invariants are
spanned by necklace orbit sums, and those are the tensors that have a
chance of being conjugation-invariant functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .rings import Ring
from .words import (
    GenSet,
    GeneratorMismatchError,
    GroupRingElement,
    UnknownGeneratorError,
    Word,
    _require_same_gens,
)


@dataclass
class BraidingTensor:
    """Finite combination of generator-dual pure tensors, any mix of weights.

    ``terms`` maps a tuple of generator indices (the sequence of duals,
    outermost first) to a nonzero ring coefficient; the empty tuple is
    the weight-0 scalar component.
    """

    ring: Ring
    gens: GenSet
    terms: dict  # tuple[int, ...] -> coefficient

    def __post_init__(self):
        clean = {}
        for seq, c in self.terms.items():
            seq = tuple(seq)
            for g in seq:
                if not 0 <= g < len(self.gens):
                    raise UnknownGeneratorError(f"generator index {g} out of range")
            c = self.ring.canon(c)
            if c != self.ring.zero():
                clean[seq] = c
        self.terms = clean

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero(ring: Ring, gens: GenSet) -> "BraidingTensor":
        return BraidingTensor(ring, gens, {})

    @staticmethod
    def pure(ring: Ring, gens: GenSet, names, coeff=1) -> "BraidingTensor":
        """Pure tensor of generator duals given by name, e.g. ("a", "b")."""
        seq = tuple(gens.index(n) for n in names)
        return BraidingTensor(ring, gens, {seq: ring.from_int(coeff)})

    @staticmethod
    def scalar(ring: Ring, gens: GenSet, coeff) -> "BraidingTensor":
        return BraidingTensor(ring, gens, {(): coeff})

    # -- structure ------------------------------------------------------

    def max_weight(self) -> int:
        return max((len(s) for s in self.terms), default=0)

    def weights(self):
        return sorted({len(s) for s in self.terms})

    def component(self, p: int) -> "BraidingTensor":
        return BraidingTensor(
            self.ring, self.gens, {s: c for s, c in self.terms.items() if len(s) == p}
        )

    def coefficient(self, seq):
        return self.terms.get(tuple(seq), self.ring.zero())

    def __add__(self, other: "BraidingTensor") -> "BraidingTensor":
        _require_same_gens(self.gens, other.gens)
        acc = dict(self.terms)
        for s, c in other.terms.items():
            acc[s] = self.ring.add(acc.get(s, self.ring.zero()), c)
        return BraidingTensor(self.ring, self.gens, acc)

    def __neg__(self) -> "BraidingTensor":
        return BraidingTensor(
            self.ring, self.gens, {s: self.ring.neg(c) for s, c in self.terms.items()}
        )

    def __sub__(self, other: "BraidingTensor") -> "BraidingTensor":
        return self + (-other)

    def scale(self, coeff) -> "BraidingTensor":
        return BraidingTensor(
            self.ring,
            self.gens,
            {s: self.ring.mul(c, coeff) for s, c in self.terms.items()},
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BraidingTensor)
            and self.ring == other.ring
            and self.gens.names == other.gens.names
            and self.terms == other.terms
        )

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def eval_letters(T: BraidingTensor, letters):
    """Evaluate on an arbitrary spelling (not necessarily reduced).

    The result agrees with :func:`eval_word` on the reduction of the
    spelling; tests exercise exactly that invariance.
    """
    ring = T.ring
    total = ring.zero()
    for seq, coeff in T.terms.items():
        p = len(seq)
        if p == 0:
            total = ring.add(total, coeff)
            continue
        # acc[j] = weighted count of ways to place slots 1..j on the
        # letters seen so far, respecting the order constraints.
        acc = [ring.one()] + [ring.zero()] * p
        for g, s in letters:
            here = [ring.zero()] * (p + 1)  # placements whose last slot is this letter
            for j in range(1, p + 1):
                if seq[j - 1] != g:
                    continue
                ways = acc[j - 1]
                if s == -1:
                    ways = ring.add(ways, here[j - 1])  # weak order: chain on an inverse letter
                if ways != ring.zero():
                    here[j] = ring.mul(ways, ring.from_int(s))
            for j in range(1, p + 1):
                if here[j] != ring.zero():
                    acc[j] = ring.add(acc[j], here[j])
        total = ring.add(total, ring.mul(coeff, acc[p]))
    return total


def eval_word(T: BraidingTensor, w: Word):
    """Value of the tensor's invariant on a reduced word."""
    _require_same_gens(T.gens, w.gens)
    return eval_letters(T, w.letters)


def eval_group_ring(T: BraidingTensor, x: GroupRingElement):
    """Linear extension of eval_word to group-ring elements."""
    if T.ring != x.ring:
        raise GeneratorMismatchError(
            f"coefficient rings differ: {T.ring.spec} vs {x.ring.spec}"
        )
    _require_same_gens(T.gens, x.gens)
    acc = T.ring.zero()
    for w, c in x.terms.items():
        acc = T.ring.add(acc, T.ring.mul(c, eval_word(T, w)))
    return acc


def eval_monomial(T: BraidingTensor, mono):
    """Value on the product (s_{i_1} - 1)...(s_{i_k} - 1) of positive generators.

    For these products the invariant simply reads off the tensor
    coefficient at the index sequence (and 0 in every other weight),
    which is what makes the coordinate basis dual to the monomials.
    """
    mono = tuple(mono)
    for g in mono:
        if not 0 <= g < len(T.gens):
            raise UnknownGeneratorError(f"generator index {g} out of range")
    return T.terms.get(mono, T.ring.zero())


# ---------------------------------------------------------------------------
# Cycle rotation and its invariants
# ---------------------------------------------------------------------------


def cycle(T: BraidingTensor) -> BraidingTensor:
    """Rotate each coordinate sequence: the weight-p component transforms
    by sending the coefficient at (s_1,...,s_p) to (s_p, s_1,...,s_{p-1})."""
    out = {}
    ring = T.ring
    for seq, c in T.terms.items():
        key = seq[-1:] + seq[:-1] if seq else seq
        out[key] = ring.add(out.get(key, ring.zero()), c)
    return BraidingTensor(T.ring, T.gens, out)


def _min_rotation(seq):
    return min(seq[i:] + seq[:i] for i in range(len(seq)))


def cycle_invariant_basis(gens: GenSet, p: int, ring: Ring):
    """Orbit-sum basis of the cycle-invariant weight-p tensors.

    One tensor per rotation orbit (necklace) of length-p generator
    sequences, each the sum of the distinct rotations of its
    representative, listed by lexicographically smallest representative.
    """
    if p < 1:
        raise ValueError(f"weight must be >= 1, got {p}")
    k = len(gens)
    orbits = {}
    for seq in product(range(k), repeat=p):
        orbits.setdefault(_min_rotation(seq), set()).add(seq)
    basis = []
    for rep in sorted(orbits):
        terms = {seq: ring.one() for seq in orbits[rep]}
        basis.append(BraidingTensor(ring, gens, terms))
    return basis


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def tensor_to_obj(T: BraidingTensor) -> dict:
    return {
        "ring": T.ring.spec,
        "gens": list(T.gens.names),
        "terms": [
            {"seq": [T.gens.names[g] for g in seq], "coeff": T.ring.show(c)}
            for seq, c in T.sorted_terms()
        ],
    }


def tensor_from_obj(obj: dict) -> BraidingTensor:
    if not isinstance(obj, dict):
        raise ValueError("tensor file must contain a JSON object")
    try:
        ring = Ring.from_spec(obj["ring"])
        gens = GenSet(tuple(obj["gens"]))
        raw_terms = obj["terms"]
    except KeyError as exc:
        raise ValueError(f"tensor object missing key {exc}") from None
    terms: dict = {}
    if not isinstance(raw_terms, list):
        raise ValueError("tensor terms must be a list")
    for item in raw_terms:
        seq = tuple(gens.index(name) for name in item["seq"])
        coeff = ring.parse(str(item["coeff"]))
        terms[seq] = ring.add(terms.get(seq, ring.zero()), coeff)
    return BraidingTensor(ring, gens, terms)
