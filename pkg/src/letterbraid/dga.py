"""Finite differential graded algebras and simplicial-set cochain models.

Two constructors matter in practice:

* :func:`cochain_algebra` — normalized cochains of a finite simplicial set
  with the Alexander-Whitney cup product (front face times back face);
* :func:`wedge_algebra` — the square-zero algebra on a set of degree-1
  letters, the cochain model of a wedge of circles.

Simplicial sets are given by their nondegenerate simplices; faces may hit
degenerate simplices, which we store in Eilenberg-Zilber canonical form
(a strictly decreasing word of degeneracy operators applied to a
nondegenerate base).  The simplicial identity d_i d_j = d_{j-1} d_i
(i < j) is checked on load.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from .rings import IntMatrix, Ring


class BadSimplicialSetError(ValueError):
    code = "bad_simplicial_set"


# ---------------------------------------------------------------------------
# Simplicial sets
# ---------------------------------------------------------------------------

# A simplex reference is (degeneracies, (dim, index)): the strictly
# decreasing word of s_j operators applied to a nondegenerate simplex.


def _insert_degeneracy(word, k):
    """Canonical form of s_k applied to the canonical word (s_i s_j =
    s_{j+1} s_i for i <= j keeps words strictly decreasing)."""
    out = []
    i = 0
    while i < len(word) and k <= word[i]:
        out.append(word[i] + 1)
        i += 1
    out.append(k)
    out.extend(word[i:])
    return tuple(out)


def canonical_ref(degeneracies, base):
    ref = ((), base)
    for k in reversed(tuple(degeneracies)):
        ref = (_insert_degeneracy(ref[0], k), ref[1])
    return ref


@dataclass(frozen=True)
class SimplicialSetModel:
    """Nondegenerate simplices per dimension plus their face references."""

    cells: tuple  # cells[d] = tuple of names of nondegenerate d-simplices
    faces: dict  # (d, i) -> tuple of d+1 simplex references
    name: str = "space"

    def __post_init__(self):
        seen = {}
        for d, names in enumerate(self.cells):
            for name in names:
                if name in seen:
                    raise BadSimplicialSetError(f"duplicate simplex id {name!r}")
                seen[name] = d
        for d, names in enumerate(self.cells):
            if d == 0:
                continue
            for i in range(len(names)):
                fs = self.faces.get((d, i))
                if fs is None or len(fs) != d + 1:
                    raise BadSimplicialSetError(
                        f"simplex {names[i]!r} needs {d + 1} faces"
                    )
                for ref in fs:
                    degens, (bd, bi) = ref
                    if bd >= len(self.cells) or not 0 <= bi < len(self.cells[bd]):
                        raise BadSimplicialSetError(
                            f"face of {names[i]!r} references a missing simplex"
                        )
                    if len(degens) + bd != d - 1:
                        raise BadSimplicialSetError(
                            f"face of {names[i]!r} has wrong dimension"
                        )
                    if any(degens[j] <= degens[j + 1] for j in range(len(degens) - 1)):
                        raise BadSimplicialSetError(
                            f"face of {names[i]!r}: degeneracy word not canonical"
                        )
        _check_simplicial_identities(self)

    @property
    def dim(self) -> int:
        return len(self.cells) - 1

    def n_cells(self, d: int) -> int:
        return len(self.cells[d]) if 0 <= d <= self.dim else 0

    def cell_name(self, d: int, i: int) -> str:
        return self.cells[d][i]

    def face(self, ref, i):
        """The i-th face of an arbitrary (possibly degenerate) simplex."""
        degens, base = ref
        if degens:
            j = degens[0]
            rest = (degens[1:], base)
            if i < j:
                inner = self.face(rest, i)
                return (_insert_degeneracy(inner[0], j - 1), inner[1])
            if i in (j, j + 1):
                return rest
            inner = self.face(rest, i - 1)
            return (_insert_degeneracy(inner[0], j), inner[1])
        d, idx = base
        return self.faces[(d, idx)][i]

    def front_face(self, ref, p):
        """Restriction to the first p+1 vertices: d_{p+1} ... d_n, last first."""
        n = len(ref[0]) + ref[1][0]
        for i in range(n, p, -1):
            ref = self.face(ref, i)
        return ref

    def back_face(self, ref, q):
        """Restriction to the last q+1 vertices: (d_0)^{n-q}."""
        n = len(ref[0]) + ref[1][0]
        for _ in range(n - q):
            ref = self.face(ref, 0)
        return ref


def _check_simplicial_identities(X: SimplicialSetModel):
    for d in range(2, len(X.cells)):
        for idx in range(len(X.cells[d])):
            ref = ((), (d, idx))
            for j in range(1, d + 1):
                for i in range(j):
                    lhs = X.face(X.face(ref, j), i)
                    rhs = X.face(X.face(ref, i), j - 1)
                    if lhs != rhs:
                        raise BadSimplicialSetError(
                            f"simplicial identity fails on {X.cells[d][idx]!r}: "
                            f"d_{i} d_{j} != d_{j - 1} d_{i}"
                        )


def model_to_obj(X: SimplicialSetModel) -> dict:
    simplices = {str(d): list(X.cells[d]) for d in range(len(X.cells))}
    faces = {}
    for d in range(1, len(X.cells)):
        for i, name in enumerate(X.cells[d]):
            entries = []
            for degens, (bd, bi) in X.faces[(d, i)]:
                entries.append(
                    {"target": X.cells[bd][bi], "degeneracies": list(degens)}
                )
            faces[name] = entries
    return {"dims": X.dim, "simplices": simplices, "faces": faces}


def model_from_obj(obj: dict, name: str = "space") -> SimplicialSetModel:
    if not isinstance(obj, dict) or "simplices" not in obj:
        raise BadSimplicialSetError("simplicial set file needs a 'simplices' object")
    raw = obj["simplices"]
    top = max((int(k) for k in raw), default=-1)
    declared = obj.get("dims")
    if declared is not None and declared != top:
        raise BadSimplicialSetError(f"'dims' is {declared} but top simplices have dimension {top}")
    cells = tuple(tuple(raw.get(str(d), ())) for d in range(top + 1))
    where = {}
    for d, names in enumerate(cells):
        for i, n in enumerate(names):
            where[n] = (d, i)
    faces = {}
    raw_faces = obj.get("faces", {})
    for d in range(1, top + 1):
        for i, n in enumerate(cells[d]):
            if n not in raw_faces:
                raise BadSimplicialSetError(f"no faces given for simplex {n!r}")
            entries = []
            for item in raw_faces[n]:
                target = item["target"]
                if target not in where:
                    raise BadSimplicialSetError(
                        f"face of {n!r} references unknown simplex {target!r}"
                    )
                degens = tuple(item.get("degeneracies", ()))
                entries.append(canonical_ref(degens, where[target]))
            faces[(d, i)] = tuple(entries)
    return SimplicialSetModel(cells, faces, name=name)


# -- stock models -----------------------------------------------------------


def point_model() -> SimplicialSetModel:
    return SimplicialSetModel((("v",),), {}, name="point")


def circle_model() -> SimplicialSetModel:
    v = ((), (0, 0))
    return SimplicialSetModel((("v",), ("e",)), {(1, 0): (v, v)}, name="circle")


def wedge_model(k: int) -> SimplicialSetModel:
    """Wedge of k circles: one vertex, k loops."""
    v = ((), (0, 0))
    names = tuple(f"e{i + 1}" for i in range(k)) if k != 1 else ("e",)
    faces = {(1, i): (v, v) for i in range(k)}
    return SimplicialSetModel((("v",), names), faces, name=f"wedge{k}")


def torus_model() -> SimplicialSetModel:
    """Minimal torus: one vertex, edges a, b, c = diagonal, two triangles."""
    e = {n: ((), (1, i)) for i, n in enumerate(("a", "b", "c"))}
    faces = {
        (1, 0): (((), (0, 0)), ((), (0, 0))),
        (1, 1): (((), (0, 0)), ((), (0, 0))),
        (1, 2): (((), (0, 0)), ((), (0, 0))),
        (2, 0): (e["b"], e["c"], e["a"]),  # P: d0=b, d1=c, d2=a
        (2, 1): (e["a"], e["c"], e["b"]),  # Q: d0=a, d1=c, d2=b
    }
    return SimplicialSetModel((("v",), ("a", "b", "c"), ("P", "Q")), faces, name="torus")


def wedge_with_trivial_2cells(k: int, extra: int = 2) -> SimplicialSetModel:
    """Wedge of k circles with extra 2-simplices all of whose faces are the
    degenerate edge on the vertex: adds 2-spheres, leaves loops alone."""
    base = wedge_model(k)
    degenerate_edge = ((0,), (0, 0))
    cells = (base.cells[0], base.cells[1], tuple(f"T{i + 1}" for i in range(extra)))
    faces = dict(base.faces)
    for i in range(extra):
        faces[(2, i)] = (degenerate_edge,) * 3
    return SimplicialSetModel(cells, faces, name=f"wedge{k}+spheres")


def interval_model() -> SimplicialSetModel:
    """Two vertices joined by an edge: a legal model that is not reduced
    to one vertex (used to exercise connectedness rejection)."""
    return SimplicialSetModel(
        (("u", "w"), ("e",)), {(1, 0): (((), (0, 1)), ((), (0, 0)))}, name="interval"
    )


def random_two_complex(rng, n_edges: int, n_triangles: int) -> SimplicialSetModel:
    """Random single-vertex 2-complex; any face assignment is simplicial
    because every edge endpoint is the unique vertex."""
    edge_refs = [((), (1, i)) for i in range(n_edges)] + [((0,), (0, 0))]
    cells = (
        ("v",),
        tuple(f"e{i + 1}" for i in range(n_edges)),
        tuple(f"t{i + 1}" for i in range(n_triangles)),
    )
    v = ((), (0, 0))
    faces = {(1, i): (v, v) for i in range(n_edges)}
    for i in range(n_triangles):
        faces[(2, i)] = tuple(rng.choice(edge_refs) for _ in range(3))
    return SimplicialSetModel(cells, faces, name="random2complex")


# ---------------------------------------------------------------------------
# Finite dg-algebras
# ---------------------------------------------------------------------------


@dataclass
class FiniteDGA:
    """Explicit finite dg-algebra: basis labels per degree, differential
    matrices, sparse multiplication table, unit and augmentation in
    degree 0.  Products and differentials landing above the stored top
    degree are zero; ``truncated`` records whether that cut anything."""

    ring: Ring
    basis: tuple  # basis[d] = tuple of labels
    diff: dict  # d -> IntMatrix (dim(d+1) x dim(d)); absent means zero
    mult: dict  # (d1, i1, d2, i2) -> tuple of (j, coeff); absent means zero
    unit: tuple  # coefficients over basis[0]
    aug: tuple  # row vector over basis[0]
    truncated: bool = False
    name: str = "algebra"

    def dim(self, d: int) -> int:
        return len(self.basis[d]) if 0 <= d < len(self.basis) else 0

    @property
    def top_degree(self) -> int:
        return len(self.basis) - 1

    @property
    def is_connected(self) -> bool:
        return self.dim(0) == 1

    def label(self, d: int, i: int) -> str:
        return self.basis[d][i]

    def basis_index(self, d: int, label: str) -> int:
        return self.basis[d].index(label)

    def diff_matrix(self, d: int) -> IntMatrix:
        if d in self.diff:
            return self.diff[d]
        return IntMatrix.zeros(self.ring, self.dim(d + 1), self.dim(d))

    def diff_column(self, d: int, i: int):
        """Differential of a basis element as a list of (index, coeff)."""
        if d not in self.diff:
            return ()
        M = self.diff[d]
        out = []
        for j in range(M.rows):
            c = M.get(j, i)
            if c != self.ring.zero():
                out.append((j, c))
        return tuple(out)

    def product(self, d1: int, i1: int, d2: int, i2: int):
        """Product of two basis elements as (index, coeff) pairs in degree d1+d2."""
        return self.mult.get((d1, i1, d2, i2), ())

    def augmentation_ideal_basis(self):
        """(degree, index) pairs of the positive-degree basis directions."""
        return tuple(
            (d, i) for d in range(1, len(self.basis)) for i in range(self.dim(d))
        )


def wedge_algebra(names, ring: Ring) -> FiniteDGA:
    """Square-zero algebra on degree-1 letters: the wedge-of-circles model."""
    names = tuple(names)
    mult = {(0, 0, 0, 0): ((0, ring.one()),)}
    for i in range(len(names)):
        mult[(0, 0, 1, i)] = ((i, ring.one()),)
        mult[(1, i, 0, 0)] = ((i, ring.one()),)
        # degree-1 products are zero: no table entries
    return FiniteDGA(
        ring=ring,
        basis=(("1",), names),
        diff={},
        mult=mult,
        unit=(ring.one(),),
        aug=(ring.one(),),
        name=f"wedge_algebra({len(names)})",
    )


def cochain_algebra(X: SimplicialSetModel, ring: Ring, maxdeg: int | None = None) -> FiniteDGA:
    """Normalized cochains of X with the front-face/back-face cup product.

    Degrees above maxdeg (when given) are dropped and the result is
    flagged as truncated; degree-0 computations only ever consume
    degrees <= 2, so maxdeg must be at least 2.
    """
    if maxdeg is None:
        top = X.dim
        truncated = False
    else:
        if maxdeg < 2:
            raise ValueError(f"maxdeg must be >= 2, got {maxdeg}")
        top = min(maxdeg, X.dim)
        truncated = X.dim > maxdeg
    top = max(top, 0)

    basis = tuple(tuple(X.cells[d]) for d in range(top + 1))
    diff = {}
    for d in range(top):
        rows, cols = X.n_cells(d + 1), X.n_cells(d)
        entries = [[0] * cols for _ in range(rows)]
        for r in range(rows):
            ref = ((), (d + 1, r))
            for i in range(d + 2):
                degens, (bd, bi) = X.face(ref, i)
                if not degens:  # normalized cochains ignore degenerate faces
                    entries[r][bi] += -1 if i % 2 else 1
        if any(any(row) for row in entries):
            diff[d] = IntMatrix.from_rows(
                ring, [[ring.from_int(e) for e in row] for row in entries]
            )

    mult = {}
    for p in range(top + 1):
        for q in range(top + 1 - p):
            for r in range(X.n_cells(p + q)):
                ref = ((), (p + q, r))
                fdeg, fbase = X.front_face(ref, p)
                bdeg, bbase = X.back_face(ref, q)
                if fdeg or bdeg:
                    continue
                key = (p, fbase[1], q, bbase[1])
                mult.setdefault(key, []).append((r, ring.one()))
    mult = {k: tuple(v) for k, v in mult.items()}

    n0 = X.n_cells(0)
    return FiniteDGA(
        ring=ring,
        basis=basis,
        diff=diff,
        mult=mult,
        unit=(ring.one(),) * n0,
        aug=(ring.one(),) + (ring.zero(),) * (n0 - 1),
        truncated=truncated,
        name=f"cochains({X.name})",
    )


# ---------------------------------------------------------------------------
# Axiom verification
# ---------------------------------------------------------------------------


def _lin_mul(A: FiniteDGA, x: dict, y: dict) -> dict:
    ring = A.ring
    acc = {}
    for (d1, i1), c1 in x.items():
        for (d2, i2), c2 in y.items():
            for j, c in A.product(d1, i1, d2, i2):
                key = (d1 + d2, j)
                val = ring.add(acc.get(key, ring.zero()), ring.mul(ring.mul(c1, c2), c))
                acc[key] = val
    return {k: v for k, v in acc.items() if v != ring.zero()}


def _lin_diff(A: FiniteDGA, x: dict) -> dict:
    ring = A.ring
    acc = {}
    for (d, i), c in x.items():
        for j, e in A.diff_column(d, i):
            key = (d + 1, j)
            acc[key] = ring.add(acc.get(key, ring.zero()), ring.mul(c, e))
    return {k: v for k, v in acc.items() if v != ring.zero()}


def verify_dga(A: FiniteDGA) -> dict:
    """Check d^2 = 0, Leibniz, associativity, unit and augmentation axioms
    exhaustively over basis elements; returns {"ok": bool, "violations": [...]}.
    """
    ring = A.ring
    bad = []
    all_basis = [(d, i) for d in range(len(A.basis)) for i in range(A.dim(d))]

    for d in range(len(A.basis) - 1):
        M2 = A.diff_matrix(d + 1).mul(A.diff_matrix(d))
        if not M2.is_zero():
            bad.append(f"d^2 != 0 out of degree {d}")

    unit_el = {(0, i): c for i, c in enumerate(A.unit) if c != ring.zero()}
    for b in all_basis:
        x = {b: ring.one()}
        if _lin_mul(A, unit_el, x) != x or _lin_mul(A, x, unit_el) != x:
            bad.append(f"unit fails on {A.label(*b)}")

    for b1, b2 in iproduct(all_basis, repeat=2):
        x, y = {b1: ring.one()}, {b2: ring.one()}
        lhs = _lin_diff(A, _lin_mul(A, x, y))
        sign = ring.from_int(-1 if b1[0] % 2 else 1)
        rhs = _lin_mul(A, _lin_diff(A, x), y)
        for k, v in _lin_mul(A, x, _lin_diff(A, y)).items():
            rhs[k] = ring.add(rhs.get(k, ring.zero()), ring.mul(sign, v))
        rhs = {k: v for k, v in rhs.items() if v != ring.zero()}
        if lhs != rhs:
            bad.append(f"Leibniz fails on ({A.label(*b1)}, {A.label(*b2)})")

    for b1, b2, b3 in iproduct(all_basis, repeat=3):
        x, y, z = ({b: ring.one()} for b in (b1, b2, b3))
        if _lin_mul(A, _lin_mul(A, x, y), z) != _lin_mul(A, x, _lin_mul(A, y, z)):
            bad.append(
                f"associativity fails on ({A.label(*b1)}, {A.label(*b2)}, {A.label(*b3)})"
            )

    aug_of_unit = ring.zero()
    for i, c in enumerate(A.unit):
        aug_of_unit = ring.add(aug_of_unit, ring.mul(A.aug[i], c))
    if aug_of_unit != ring.one():
        bad.append("augmentation of the unit is not 1")
    n0 = A.dim(0)
    for i1 in range(n0):
        for i2 in range(n0):
            val = ring.zero()
            for j, c in A.product(0, i1, 0, i2):
                val = ring.add(val, ring.mul(A.aug[j], c))
            if val != ring.mul(A.aug[i1], A.aug[i2]):
                bad.append(
                    f"augmentation not multiplicative on ({A.label(0, i1)}, {A.label(0, i2)})"
                )

    return {"ok": not bad, "violations": bad}
