"""Representations of acyclic quivers over small prime fields.

This is the concrete finite-length hereditary abelian category in which
every filtration statement of the package is checked by exhaustive
enumeration: subobject lattices are finite and computed as mask sets,
Hom spaces are kernels of exact linear systems over F_p, and Ext^1 is
read off a projective resolution (the category is hereditary, so there
is nothing above Ext^1).

Everything is exact integer arithmetic mod p; the enumeration cost is
controlled by a hard resource bound on the total dimension.
"""

from __future__ import annotations

import functools
import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .exact import RatComplex
from .lattice import InputError


class ResourceBound(RuntimeError):
    """An exhaustive enumeration was requested beyond the configured bound."""


DEFAULT_TOTAL_DIM = 8
DEFAULT_MAX_P = 3
MAX_VERTEX_DIM = 4  # subspace counts explode beyond F_p^4


# ---------------------------------------------------------------------------
# linear algebra over F_p


def rref_mod_p(rows: list[list[int]], p: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form mod p; returns (rows, pivot columns)."""
    m = [[x % p for x in row] for row in rows]
    if not m:
        return [], []
    cols = len(m[0])
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace_mod_p(rows: list[list[int]], cols: int, p: int) -> list[list[int]]:
    """Basis of the kernel of the matrix (rows x cols) over F_p."""
    red, pivots = rref_mod_p(rows, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * cols
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-red[i][fc]) % p
        basis.append(v)
    return basis


def rank_mod_p(rows: list[list[int]], p: int) -> int:
    return len(rref_mod_p(rows, p)[0])


def mat_apply(mat: Sequence[Sequence[int]], v: Sequence[int], p: int) -> tuple:
    return tuple(sum(row[j] * v[j] for j in range(len(v))) % p for row in mat)


def mat_is_invertible(mat: Sequence[Sequence[int]], p: int) -> bool:
    n = len(mat)
    if n == 0:
        return True
    if any(len(row) != n for row in mat):
        return False
    return rank_mod_p([list(r) for r in mat], p) == n


# ---------------------------------------------------------------------------
# subspaces of F_p^d, globally cached per (p, d)


def _encode(v: Sequence[int], p: int) -> int:
    code = 0
    for x in reversed(v):
        code = code * p + (x % p)
    return code


def _decode(code: int, d: int, p: int) -> tuple:
    v = []
    for _ in range(d):
        v.append(code % p)
        code //= p
    return tuple(v)


@dataclass(frozen=True)
class Subspace:
    dim: int
    elems: frozenset  # encoded vectors
    basis: tuple  # tuple of vector tuples


@functools.lru_cache(maxsize=None)
def subspaces_of(d: int, p: int) -> tuple:
    """All subspaces of F_p^d, ordered by (dim, sorted element set)."""
    zero = Subspace(0, frozenset([0]), ())
    found = {zero.elems: zero}
    frontier = [zero]
    all_codes = range(p**d)
    while frontier:
        nxt = []
        for sp in frontier:
            for code in all_codes:
                if code in sp.elems:
                    continue
                v = _decode(code, d, p)
                elems = set(sp.elems)
                for e in sp.elems:
                    w = _decode(e, d, p)
                    for c in range(1, p):
                        elems.add(
                            _encode([(a + c * b) % p for a, b in zip(w, v)], p)
                        )
                key = frozenset(elems)
                if key not in found:
                    new = Subspace(sp.dim + 1, key, sp.basis + (v,))
                    found[key] = new
                    nxt.append(new)
        frontier = nxt
    return tuple(sorted(found.values(), key=lambda s: (s.dim, sorted(s.elems))))


@functools.lru_cache(maxsize=None)
def subspace_leq_table(d: int, p: int) -> tuple:
    """leq[i][j] = subspace i is contained in subspace j."""
    spaces = subspaces_of(d, p)
    return tuple(
        tuple(a.elems <= b.elems for b in spaces) for a in spaces
    )


# ---------------------------------------------------------------------------
# quivers and representations


@dataclass(frozen=True)
class Quiver:
    """Finite acyclic quiver with a field size; vertices are 0..n-1."""

    n: int
    arrows: tuple
    p: int

    def __init__(self, n: int, arrows, p: int):
        arrows = tuple((int(a), int(b)) for a, b in arrows)
        if n <= 0:
            raise InputError("need at least one vertex")
        for a, b in arrows:
            if not (0 <= a < n and 0 <= b < n):
                raise InputError(f"arrow ({a},{b}) out of range")
        if p < 2 or any(p % q == 0 for q in range(2, p)):
            raise InputError("p must be prime")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "arrows", arrows)
        object.__setattr__(self, "p", p)
        if self._topological_order() is None:
            raise InputError("quiver must be acyclic")

    def _topological_order(self) -> Optional[list[int]]:
        indeg = [0] * self.n
        for _, b in self.arrows:
            indeg[b] += 1
        queue = [v for v in range(self.n) if indeg[v] == 0]
        order = []
        while queue:
            v = queue.pop()
            order.append(v)
            for a, b in self.arrows:
                if a == v:
                    indeg[b] -= 1
                    if indeg[b] == 0:
                        queue.append(b)
        return order if len(order) == self.n else None

    @staticmethod
    def a_n(n: int, p: int = 2) -> "Quiver":
        """Linear orientation 0 -> 1 -> ... -> n-1."""
        return Quiver(n, [(i, i + 1) for i in range(n - 1)], p)

    @staticmethod
    def kronecker(arrows: int = 2, p: int = 2) -> "Quiver":
        return Quiver(2, [(0, 1)] * arrows, p)

    @staticmethod
    def from_json_dict(data: dict) -> "Quiver":
        return Quiver(data["vertices"], [tuple(a) for a in data["arrows"]], data["p"])

    def to_json_dict(self) -> dict:
        return {"vertices": self.n, "arrows": [list(a) for a in self.arrows], "p": self.p}


@dataclass(frozen=True)
class QuiverRep:
    """dims[v] and one matrix per arrow, shaped dims[target] x dims[source]."""

    dims: tuple
    mats: tuple

    def __init__(self, dims, mats, quiver: Optional[Quiver] = None):
        dims = tuple(int(d) for d in dims)
        mats = tuple(tuple(tuple(int(x) for x in row) for row in m) for m in mats)
        if quiver is not None:
            if len(dims) != quiver.n or len(mats) != len(quiver.arrows):
                raise InputError("rep shape disagrees with the quiver")
            for (a, b), m in zip(quiver.arrows, mats):
                if len(m) != dims[b] or any(len(row) != dims[a] for row in m):
                    raise InputError(
                        f"matrix for arrow ({a},{b}) must be {dims[b]}x{dims[a]}"
                    )
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "mats", mats)

    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim() == 0

    @staticmethod
    def zero(Q: Quiver) -> "QuiverRep":
        return QuiverRep((0,) * Q.n, tuple(() for _ in Q.arrows), Q)

    @staticmethod
    def simple(Q: Quiver, v: int) -> "QuiverRep":
        dims = tuple(1 if i == v else 0 for i in range(Q.n))
        mats = []
        for a, b in Q.arrows:
            mats.append(
                tuple(tuple(0 for _ in range(dims[a])) for _ in range(dims[b]))
            )
        return QuiverRep(dims, tuple(mats), Q)

    def direct_sum(self, other: "QuiverRep", Q: Quiver) -> "QuiverRep":
        dims = tuple(a + b for a, b in zip(self.dims, other.dims))
        mats = []
        for idx, (a, b) in enumerate(Q.arrows):
            m1, m2 = self.mats[idx], other.mats[idx]
            rows = []
            for r in range(self.dims[b]):
                rows.append(tuple(m1[r]) + (0,) * other.dims[a])
            for r in range(other.dims[b]):
                rows.append((0,) * self.dims[a] + tuple(m2[r]))
            mats.append(tuple(rows))
        return QuiverRep(dims, tuple(mats), Q)


def check_resource(E: QuiverRep, Q: Quiver, total_bound: int = DEFAULT_TOTAL_DIM):
    if E.total_dim() > total_bound:
        raise ResourceBound(
            f"total dimension {E.total_dim()} exceeds the bound {total_bound}"
        )
    if any(d > MAX_VERTEX_DIM for d in E.dims):
        raise ResourceBound(
            f"vertex dimension above {MAX_VERTEX_DIM} makes subspace "
            "enumeration intractable"
        )
    if Q.p > DEFAULT_MAX_P:
        raise ResourceBound(f"field size {Q.p} exceeds the bound {DEFAULT_MAX_P}")


# ---------------------------------------------------------------------------
# Hom, Ext^1, Euler form


def hom_space(E: QuiverRep, F: QuiverRep, Q: Quiver) -> tuple[int, list]:
    """Dimension and basis of Hom(E, F): solutions of the commuting-square
    system  phi_tgt o E_a = F_a o phi_src  over F_p.

    A basis element is a tuple of matrices (phi_v), one per vertex.
    """
    if len(E.dims) != Q.n or len(F.dims) != Q.n:
        raise InputError("representations do not live on this quiver")
    p = Q.p
    # unknowns: entries of phi_v, row-major, v = 0..n-1
    offsets = []
    total = 0
    for v in range(Q.n):
        offsets.append(total)
        total += F.dims[v] * E.dims[v]

    def var(v, i, j):  # phi_v[i][j], i < F.dims[v], j < E.dims[v]
        return offsets[v] + i * E.dims[v] + j

    rows = []
    for idx, (a, b) in enumerate(Q.arrows):
        Ea, Fa = E.mats[idx], F.mats[idx]
        # equation block: for each (i < F.dims[b], j < E.dims[a]):
        #   sum_k phi_b[i][k] Ea[k][j] - sum_k Fa[i][k] phi_a[k][j] = 0
        for i in range(F.dims[b]):
            for j in range(E.dims[a]):
                row = [0] * total
                for k in range(E.dims[b]):
                    row[var(b, i, k)] = (row[var(b, i, k)] + Ea[k][j]) % p
                for k in range(F.dims[a]):
                    row[var(a, k, j)] = (row[var(a, k, j)] - Fa[i][k]) % p
                rows.append(row)
    kernel = nullspace_mod_p(rows, total, p)
    basis = []
    for kv in kernel:
        phis = []
        for v in range(Q.n):
            mat = tuple(
                tuple(kv[var(v, i, j)] for j in range(E.dims[v]))
                for i in range(F.dims[v])
            )
            phis.append(mat)
        basis.append(tuple(phis))
    return len(kernel), basis


def ext1_dim(E: QuiverRep, F: QuiverRep, Q: Quiver) -> int:
    """dim Ext^1(E, F), from the two-term resolution: the cokernel of
    (phi_v) |-> (F_a phi_src - phi_tgt E_a).  Independent of the Euler
    bookkeeping, which it is tested against."""
    p = Q.p
    dom = sum(F.dims[v] * E.dims[v] for v in range(Q.n))
    cod = sum(F.dims[b] * E.dims[a] for a, b in Q.arrows)
    offsets = []
    total = 0
    for v in range(Q.n):
        offsets.append(total)
        total += F.dims[v] * E.dims[v]

    def var(v, i, j):
        return offsets[v] + i * E.dims[v] + j

    rows = []
    for idx, (a, b) in enumerate(Q.arrows):
        Ea, Fa = E.mats[idx], F.mats[idx]
        for i in range(F.dims[b]):
            for j in range(E.dims[a]):
                row = [0] * total
                for k in range(E.dims[b]):
                    row[var(b, i, k)] = (row[var(b, i, k)] + Ea[k][j]) % p
                for k in range(F.dims[a]):
                    row[var(a, k, j)] = (row[var(a, k, j)] - Fa[i][k]) % p
                rows.append(row)
    assert len(rows) == cod and total == dom
    return cod - rank_mod_p(rows, p)


def euler_pairing(d: Sequence[int], e: Sequence[int], Q: Quiver) -> int:
    """<d, e> = sum_v d_v e_v - sum_{a: i->j} d_i e_j (hereditary Euler
    form; equals hom - ext^1 on dimension vectors)."""
    if len(d) != Q.n or len(e) != Q.n:
        raise InputError("dimension vector length mismatch")
    total = sum(int(x) * int(y) for x, y in zip(d, e))
    for a, b in Q.arrows:
        total -= int(d[a]) * int(e[b])
    return total


# ---------------------------------------------------------------------------
# subobject lattices


@dataclass(frozen=True)
class SubobjectEntry:
    """One arrow-closed tuple of subspaces: indices into subspaces_of(d,p)
    per vertex, plus the induced dimension vector."""

    space_idx: tuple
    dims: tuple

    def total_dim(self) -> int:
        return sum(self.dims)


class SubobjectLattice:
    """All subrepresentations of a rep, with O(1) containment tests."""

    def __init__(self, E: QuiverRep, Q: Quiver, total_bound: int = DEFAULT_TOTAL_DIM):
        check_resource(E, Q, total_bound)
        self.E, self.Q = E, Q
        p = Q.p
        per_vertex = [subspaces_of(d, p) for d in E.dims]
        self._per_vertex = per_vertex
        self._leq_tables = [subspace_leq_table(d, p) for d in E.dims]
        # image table: for each arrow and each source-subspace index, the
        # set of encoded image vectors
        img: list[list[frozenset]] = []
        for idx, (a, b) in enumerate(Q.arrows):
            mat = E.mats[idx]
            table = {}
            d_src = E.dims[a]
            codes = {}
            for code in range(p**d_src):
                v = _decode(code, d_src, p)
                codes[code] = _encode(mat_apply(mat, v, p), p)
            arr = []
            for sp in per_vertex[a]:
                arr.append(frozenset(codes[c] for c in sp.elems))
            img.append(arr)
        entries = []
        ranges = [range(len(per_vertex[v])) for v in range(Q.n)]
        for choice in itertools.product(*ranges):
            ok = True
            for idx, (a, b) in enumerate(Q.arrows):
                if not img[idx][choice[a]] <= per_vertex[b][choice[b]].elems:
                    ok = False
                    break
            if ok:
                dims = tuple(per_vertex[v][choice[v]].dim for v in range(Q.n))
                entries.append(SubobjectEntry(choice, dims))
        # deterministic order: total dim, then dims, then space indices
        entries.sort(key=lambda s: (s.total_dim(), s.dims, s.space_idx))
        self.entries = entries
        self._index = {e.space_idx: i for i, e in enumerate(entries)}
        self.bottom = self._index[tuple(0 for _ in range(Q.n))]
        top_choice = tuple(len(per_vertex[v]) - 1 for v in range(Q.n))
        self.top = self._index[top_choice]

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def leq(self, i: int, j: int) -> bool:
        a, b = self.entries[i], self.entries[j]
        return all(
            self._leq_tables[v][a.space_idx[v]][b.space_idx[v]]
            for v in range(self.Q.n)
        )

    def basis_of(self, i: int) -> tuple:
        """Per-vertex bases of the subobject (tuples of vectors)."""
        e = self.entries[i]
        return tuple(
            self._per_vertex[v][e.space_idx[v]].basis for v in range(self.Q.n)
        )

    def sub_rep(self, i: int) -> QuiverRep:
        """The subobject as a representation, in its own basis."""
        bases = self.basis_of(i)
        return _restricted_rep(self.E, self.Q, bases)

    def quotient_rep(self, i: int) -> QuiverRep:
        bases = self.basis_of(i)
        return _quotient_rep(self.E, self.Q, bases)

    def interval_quotient_class(self, lo: int, hi: int) -> tuple:
        """Dimension vector of entries[hi]/entries[lo] (assumes lo <= hi)."""
        a, b = self.entries[lo], self.entries[hi]
        return tuple(y - x for x, y in zip(a.dims, b.dims))


def subobjects(E: QuiverRep, Q: Quiver, total_bound: int = DEFAULT_TOTAL_DIM):
    """Exhaustive list of subrepresentation witnesses, in a deterministic
    order (zero first, E last)."""
    lat = SubobjectLattice(E, Q, total_bound)
    return lat


def _solve_in_basis(basis: Sequence[tuple], target: tuple, p: int) -> list[int]:
    """Coordinates of target in the given independent family (must lie in
    the span)."""
    if not basis:
        if any(x % p for x in target):
            raise AssertionError("vector outside subspace")
        return []
    rows = [[basis[j][i] for j in range(len(basis))] for i in range(len(target))]
    aug = [row + [target[i]] for i, row in enumerate(rows)]
    red, pivots = rref_mod_p(aug, p)
    coords = [0] * len(basis)
    for r, c in enumerate(pivots):
        if c == len(basis):
            raise AssertionError("vector outside subspace")
        coords[c] = red[r][len(basis)]
    return coords


def _restricted_rep(E: QuiverRep, Q: Quiver, bases: Sequence[tuple]) -> QuiverRep:
    p = Q.p
    dims = tuple(len(b) for b in bases)
    mats = []
    for idx, (a, b) in enumerate(Q.arrows):
        mat = E.mats[idx]
        cols = []
        for v in bases[a]:
            img = mat_apply(mat, v, p)
            cols.append(_solve_in_basis(bases[b], img, p))
        rows = tuple(
            tuple(cols[j][i] for j in range(dims[a])) for i in range(dims[b])
        )
        mats.append(rows)
    return QuiverRep(dims, tuple(mats), Q)


def _extend_basis(basis: Sequence[tuple], d: int, p: int) -> list[tuple]:
    """Complete a basis of a subspace to a basis of F_p^d; returns the
    added vectors."""
    current = [list(v) for v in basis]
    added = []
    for code in range(1, p**d):
        if len(current) == d:
            break
        v = _decode(code, d, p)
        test = current + [list(v)]
        if rank_mod_p([list(r) for r in zip(*test)] if test else [], p) == len(test):
            current.append(list(v))
            added.append(v)
    return added


def _quotient_rep(E: QuiverRep, Q: Quiver, bases: Sequence[tuple]) -> QuiverRep:
    p = Q.p
    full_bases = []
    added = []
    for v in range(Q.n):
        extra = _extend_basis(bases[v], E.dims[v], p)
        added.append(extra)
        full_bases.append(list(bases[v]) + extra)
    dims = tuple(len(a) for a in added)
    mats = []
    for idx, (a, b) in enumerate(Q.arrows):
        mat = E.mats[idx]
        cols = []
        for v in added[a]:
            img = mat_apply(mat, v, p)
            coords = _solve_in_basis(tuple(full_bases[b]), img, p)
            # quotient coordinates: drop the subspace components
            cols.append(coords[len(bases[b]):])
        rows = tuple(tuple(cols[j][i] for j in range(dims[a])) for i in range(dims[b]))
        mats.append(rows)
    return QuiverRep(dims, tuple(mats), Q)


# ---------------------------------------------------------------------------
# enumeration of representations


def enumerate_matrices(rows: int, cols: int, p: int) -> Iterator[tuple]:
    entries = rows * cols
    for flat in itertools.product(range(p), repeat=entries):
        yield tuple(
            tuple(flat[r * cols + c] for c in range(cols)) for r in range(rows)
        )


def count_reps(dims: Sequence[int], Q: Quiver) -> int:
    total = 1
    for a, b in Q.arrows:
        total *= Q.p ** (dims[b] * dims[a])
    return total


def enumerate_reps_of_dims(dims: Sequence[int], Q: Quiver) -> Iterator[QuiverRep]:
    dims = tuple(dims)
    gens = [enumerate_matrices(dims[b], dims[a], Q.p) for a, b in Q.arrows]
    for mats in itertools.product(*[list(g) for g in gens]):
        yield QuiverRep(dims, mats, Q)


def enumerate_reps(
    Q: Quiver,
    max_dims: Sequence[int],
    total_bound: Optional[int] = None,
    include_zero: bool = False,
) -> Iterator[QuiverRep]:
    """All representations with dims[v] <= max_dims[v] (and total dimension
    <= total_bound if given), in deterministic order."""
    max_dims = tuple(int(x) for x in max_dims)
    if len(max_dims) != Q.n:
        raise InputError("max_dims length disagrees with the quiver")
    for dims in itertools.product(*[range(m + 1) for m in max_dims]):
        if sum(dims) == 0 and not include_zero:
            continue
        if total_bound is not None and sum(dims) > total_bound:
            continue
        yield from enumerate_reps_of_dims(dims, Q)


def random_rep(dims: Sequence[int], Q: Quiver, rng) -> QuiverRep:
    mats = []
    for a, b in Q.arrows:
        mats.append(
            tuple(
                tuple(rng.randrange(Q.p) for _ in range(dims[a]))
                for _ in range(dims[b])
            )
        )
    return QuiverRep(tuple(dims), tuple(mats), Q)


# ---------------------------------------------------------------------------
# config files


def load_quiver_config(path) -> tuple[Quiver, "object"]:
    """Read {"vertices", "arrows", "p", "charge"} JSON; returns (Quiver,
    HeartCharge).  Imported lazily to avoid a module cycle."""
    from .heart import HeartCharge

    with open(path) as fh:
        data = json.load(fh)
    Q = Quiver.from_json_dict(data)
    charge = data.get("charge")
    if charge is None:
        zc = None
    else:
        zs = [
            RatComplex(Fraction(str(re)), Fraction(str(im))) for re, im in charge
        ]
        zc = HeartCharge(zs)
    return Q, zc
