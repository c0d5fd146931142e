"""Exact lattice geometry for integer polytopes.

Hermite-normal-form lattices, facet descriptions via incremental double
description over exact rationals, lattice-point enumeration in dilates, the
integer decomposition property check, and the fiber product that mirrors
tree gluing.

Heavy enumeration runs on int64 numpy arrays; magnitude bounds are computed
with Python integers first and the run aborts (ScaleExceeded) rather than
risk wraparound, so every reported number is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from .errors import (BlockWidthMismatchError, ProjectionNotInSimplexError,
                     ScaleExceededError)
from .polytope import ModelPolytope, build_polytope, negate_block
from .trees import glue


def _primitive(row):
    g = 0
    for x in row:
        g = gcd(g, x)
        if g == 1:
            return tuple(row)
    if g == 0:
        return tuple(row)
    return tuple(x // g for x in row)


def hermite_normal_form(rows):
    """Row-style HNF of an integer matrix: echelon form, positive pivots,
    entries above a pivot reduced into [0, pivot). Zero rows dropped."""
    work = [list(r) for r in rows]
    if not work:
        return []
    cols = len(work[0])
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, len(work)):
            if work[i][c]:
                piv = i
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        for i in range(r + 1, len(work)):
            while work[i][c]:
                q = work[r][c] // work[i][c]
                work[r] = [a - q * b for a, b in zip(work[r], work[i])]
                work[r], work[i] = work[i], work[r]
        if work[r][c] < 0:
            work[r] = [-a for a in work[r]]
        for i in range(r):
            q = work[i][c] // work[r][c]
            if q:
                work[i] = [a - q * b for a, b in zip(work[i], work[r])]
        r += 1
    return [tuple(row) for row in work[:r]]


@dataclass(frozen=True)
class AffineLattice:
    """anchor + (integer span of basis rows); basis is in HNF."""

    anchor: tuple
    basis: tuple   # tuple of integer row tuples, echelon

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coordinates(self, point, scale: int = 1):
        """Integer coordinates of point - scale*anchor in the basis, or None.

        scale k tests membership in the lattice translated to k*anchor,
        which is the point lattice of the dilate kP.
        """
        v = [p - scale * a for p, a in zip(point, self.anchor)]
        coords = []
        for row in self.basis:
            c = next(i for i, x in enumerate(row) if x)
            q, rem = divmod(v[c], row[c])
            if rem:
                return None
            coords.append(q)
            v = [a - q * b for a, b in zip(v, row)]
        if any(v):
            return None
        return tuple(coords)

    def contains(self, point, scale: int = 1) -> bool:
        return self.coordinates(point, scale) is not None


def spanned_lattice(points) -> AffineLattice:
    """The affine lattice generated by a point set: anchored at the smallest
    point, spanned by all differences."""
    pts = sorted(tuple(p) for p in points)
    if not pts:
        raise ValueError("need at least one point")
    anchor = pts[0]
    diffs = [[x - a for x, a in zip(p, anchor)] for p in pts[1:]]
    return AffineLattice(anchor=anchor, basis=tuple(hermite_normal_form(diffs)))


@dataclass(frozen=True)
class HRep:
    """Exact halfspace description: equalities c.x == rhs and inequalities
    c.x <= rhs, all integer and primitive. Dilates scale the right side."""

    equalities: tuple
    inequalities: tuple

    def contains(self, point, scale: int = 1) -> bool:
        for c, b in self.equalities:
            if sum(x * y for x, y in zip(c, point)) != b * scale:
                return False
        for c, b in self.inequalities:
            if sum(x * y for x, y in zip(c, point)) > b * scale:
                return False
        return True


def _row_reduce_pivots(rows):
    """Gaussian elimination over Fraction; returns (reduced rows, pivot cols)."""
    work = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    ncols = len(work[0]) if work else 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(work)):
            if work[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = work[r][c]
        work[r] = [x / inv for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
    return work[:r], pivots


def _affine_hull(points):
    """(equalities, pivot columns): primitive integer equations of the hull
    and a coordinate subset that restricts to a full-dimensional copy."""
    base = points[0]
    diffs = [[x - b for x, b in zip(p, base)] for p in points[1:]]
    reduced, pivots = _row_reduce_pivots(diffs) if diffs else ([], [])
    ambient = len(base)
    free = [c for c in range(ambient) if c not in pivots]
    equalities = []
    for f in free:
        # direction-space normal with 1 at the free column
        coeff = [Fraction(0)] * ambient
        coeff[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            coeff[p] = -row[f]
        den = 1
        for x in coeff:
            den = den * x.denominator // gcd(den, x.denominator)
        ints = [int(x * den) for x in coeff]
        ints = list(_primitive(ints))
        rhs = sum(c * x for c, x in zip(ints, base))
        equalities.append((tuple(ints), rhs))
    return equalities, pivots


def _initial_simplex(zpoints, d):
    """Indices of d+1 affinely independent points (greedy)."""
    idx = [0]
    rows = []
    for i in range(1, len(zpoints)):
        cand = [a - b for a, b in zip(zpoints[i], zpoints[0])]
        test, _ = _row_reduce_pivots(rows + [cand])
        if len(test) > len(rows):
            rows = test
            idx.append(i)
            if len(idx) == d + 1:
                return idx
    raise AssertionError("points are not full-dimensional after restriction")


def _invert_fraction_matrix(mat):
    n = len(mat)
    aug = [[Fraction(x) for x in row] + [Fraction(1 if i == j else 0)
                                         for j in range(n)]
           for i, row in enumerate(mat)]
    for c in range(n):
        piv = next(i for i in range(c, n) if aug[i][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = aug[c][c]
        aug[c] = [x / inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def _dual_dd(zpoints, d):
    """Facets of conv(zpoints) in R^d (full-dimensional case) by double
    description on the polar cone {v : (z_i, 1).v <= 0}: one constraint per
    point, extreme rays of the cone are the facets."""
    cons = [tuple(z) + (1,) for z in zpoints]
    start = _initial_simplex(zpoints, d)
    amat = [cons[i] for i in start]
    ainv = _invert_fraction_matrix(amat)
    rays = []
    zero_sets = []
    start_set = set(start)
    for j in range(d + 1):
        col = [-ainv[i][j] for i in range(d + 1)]
        den = 1
        for x in col:
            den = den * x.denominator // gcd(den, x.denominator)
        ray = _primitive([int(x * den) for x in col])
        rays.append(ray)
        zero_sets.append(frozenset(start_set - {start[j]}))

    order = [i for i in range(len(cons)) if i not in start_set]
    for t in order:
        a = cons[t]
        vals = [sum(x * y for x, y in zip(a, r)) for r in rays]
        plus = [i for i, v in enumerate(vals) if v > 0]
        if not plus:
            zero_sets = [zs | {t} if vals[i] == 0 else zs
                         for i, zs in enumerate(zero_sets)]
            continue
        minus = [i for i, v in enumerate(vals) if v < 0]
        zero = [i for i, v in enumerate(vals) if v == 0]
        new_rays = [rays[i] for i in minus + zero]
        new_zero = [zero_sets[i] for i in minus] + \
            [zero_sets[i] | {t} for i in zero]
        for i in plus:
            for j in minus:
                common = zero_sets[i] & zero_sets[j]
                adjacent = True
                for k, zs in enumerate(zero_sets):
                    if k != i and k != j and common <= zs:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                comb = [vals[i] * rj - vals[j] * ri
                        for ri, rj in zip(rays[i], rays[j])]
                new_rays.append(_primitive(comb))
                new_zero.append(common | {t})
        rays, zero_sets = new_rays, new_zero

    facets = []
    for ray in rays:
        c, c0 = ray[:-1], ray[-1]
        facets.append((tuple(c), -c0))
    return facets


def facet_description(points, point_cap: int = 1500, dim_cap: int = 24) -> HRep:
    """Exact H-representation of conv(points): affine-hull equalities plus
    facet inequalities found by double description on a full-dimensional
    coordinate restriction."""
    pts = sorted(set(tuple(p) for p in points))
    if not pts:
        raise ValueError("need at least one point")
    if len(pts) > point_cap:
        raise ScaleExceededError(f"{len(pts)} points exceed cap {point_cap}")
    equalities, pivots = _affine_hull(pts)
    d = len(pivots)
    if d > dim_cap:
        raise ScaleExceededError(f"dimension {d} exceeds cap {dim_cap}")
    inequalities = []
    if d > 0:
        zpoints = [tuple(p[c] for c in pivots) for p in pts]
        for c, rhs in _dual_dd(zpoints, d):
            full = [0] * len(pts[0])
            for x, col in zip(c, pivots):
                full[col] = x
            inequalities.append((tuple(full), rhs))
    rep = HRep(equalities=tuple(equalities), inequalities=tuple(inequalities))
    for p in pts:
        if not rep.contains(p):
            raise AssertionError("facet description rejects an input point")
    return rep


def _dilate_setup(points, lat: AffineLattice, hrep: HRep, n: int):
    """Constraints and box in intrinsic lattice coordinates y, where a point
    is x = n*anchor + y.B. Equalities vanish identically there (checked)."""
    basis = lat.basis
    r = len(basis)
    for c, b in hrep.equalities:
        if any(sum(bi * ci for bi, ci in zip(row, c)) for row in basis):
            raise AssertionError("equality not constant on the lattice span")
        if sum(ci * ai for ci, ai in zip(c, lat.anchor)) != b:
            raise AssertionError("anchor violates an equality")
    W = []
    offs = []
    for c, b in hrep.inequalities:
        W.append(tuple(sum(bi * ci for bi, ci in zip(row, c))
                       for row in basis))
        offs.append(b - sum(ci * ai for ci, ai in zip(c, lat.anchor)))
    ys = []
    for p in points:
        y = lat.coordinates(p)
        if y is None:
            raise AssertionError("input point outside its own lattice")
        ys.append(y)
    lo = [n * min(y[j] for y in ys) for j in range(r)]
    hi = [n * max(y[j] for y in ys) for j in range(r)]
    return W, offs, lo, hi, ys


def _dilate_points_py(W, offs, n, lo, hi):
    """Reference enumeration: depth-first with per-level bound propagation,
    Python integers throughout."""
    r = len(lo)
    F = len(W)
    minrest = [[0] * (r + 1) for _ in range(F)]
    for f in range(F):
        for j in range(r - 1, -1, -1):
            w = W[f][j]
            minrest[f][j] = minrest[f][j + 1] + min(w * lo[j], w * hi[j])
    out = []
    y = [0] * r

    def rec(j, dots):
        if j == r:
            out.append(tuple(y))
            return
        lo_j, hi_j = lo[j], hi[j]
        for f in range(F):
            w = W[f][j]
            if w == 0:
                continue
            slack = n * offs[f] - dots[f] - minrest[f][j + 1]
            if w > 0:
                hi_j = min(hi_j, slack // w)
            else:
                lo_j = max(lo_j, -((-slack) // w))
        for v in range(lo_j, hi_j + 1):
            y[j] = v
            rec(j + 1, [dots[f] + W[f][j] * v for f in range(F)])

    rec(0, [0] * F)
    return out


_CHUNK = 200_000


def _dilate_points_np(W, offs, n, lo, hi, row_cap):
    """Level-wise frontier scan on int64 arrays. Bounds are conservative at
    inner levels and exact at the last, so no post-filter is needed."""
    r = len(lo)
    F = len(W)
    # magnitude guard, computed exactly before touching numpy
    biggest = 0
    for f in range(F):
        tot = abs(n * offs[f])
        for j in range(r):
            tot += max(abs(W[f][j] * lo[j]), abs(W[f][j] * hi[j]))
        biggest = max(biggest, tot)
    if biggest >= 2 ** 60:
        raise ScaleExceededError("dilate enumeration would overflow int64")
    Wn = np.array(W, dtype=np.int64).reshape(F, r) if F else np.zeros((0, r), np.int64)
    bn = np.array([n * o for o in offs], dtype=np.int64)
    minrest = np.zeros((F, r + 1), dtype=np.int64)
    for j in range(r - 1, -1, -1):
        w = Wn[:, j]
        minrest[:, j] = minrest[:, j + 1] + np.minimum(w * lo[j], w * hi[j])

    frontier = np.zeros((1, 0), dtype=np.int64)
    for j in range(r):
        pieces = []
        total = 0
        for s in range(0, len(frontier), _CHUNK):
            chunk = frontier[s:s + _CHUNK]
            if F:
                dots = chunk @ Wn[:, :j].T if j else \
                    np.zeros((len(chunk), F), dtype=np.int64)
                slack = bn[None, :] - dots - minrest[:, j + 1][None, :]
                lo_j = np.full(len(chunk), lo[j], dtype=np.int64)
                hi_j = np.full(len(chunk), hi[j], dtype=np.int64)
                for f in range(F):
                    w = int(Wn[f, j])
                    if w > 0:
                        np.minimum(hi_j, slack[:, f] // w, out=hi_j)
                    elif w < 0:
                        np.maximum(lo_j, -((-slack[:, f]) // w), out=lo_j)
            else:
                lo_j = np.full(len(chunk), lo[j], dtype=np.int64)
                hi_j = np.full(len(chunk), hi[j], dtype=np.int64)
            counts = hi_j - lo_j + 1
            np.maximum(counts, 0, out=counts)
            keep = counts > 0
            m = int(counts[keep].sum())
            total += m
            if total > row_cap:
                raise ScaleExceededError(
                    f"dilate frontier exceeded {row_cap} rows")
            if m == 0:
                continue
            rows = chunk[keep]
            cts = counts[keep]
            starts = lo_j[keep]
            idx = np.repeat(np.arange(len(rows)), cts)
            ends = np.cumsum(cts)
            within = np.arange(m) - np.repeat(ends - cts, cts)
            vals = np.repeat(starts, cts) + within
            pieces.append(np.concatenate(
                [rows[idx], vals[:, None]], axis=1))
        frontier = np.concatenate(pieces, axis=0) if pieces else \
            np.zeros((0, j + 1), dtype=np.int64)
    return frontier


def _dilate_array(points, n, lat, hrep, row_cap):
    """Points of nP on the dilated lattice, as an int64 array (rows x)."""
    pts = [tuple(p) for p in points]
    if lat.rank == 0:
        x = tuple(n * a for a in lat.anchor)
        return np.array([x] if hrep.contains(x, n) else [],
                        dtype=np.int64).reshape(-1, len(lat.anchor))
    W, offs, lo, hi, _ = _dilate_setup(pts, lat, hrep, n)
    ys = _dilate_points_np(W, offs, n, lo, hi, row_cap)
    basis = np.array(lat.basis, dtype=np.int64)
    anchor = np.array(lat.anchor, dtype=np.int64)
    return ys @ basis + n * anchor[None, :]


def lattice_points_in_dilate(points, n: int, lat: AffineLattice = None,
                             hrep: HRep = None,
                             row_cap: int = 20_000_000):
    """All points of (the lattice anchored at n*anchor) inside n*conv(points),
    sorted. Enumeration runs intrinsically in lattice coordinates."""
    pts = [tuple(p) for p in points]
    if lat is None:
        lat = spanned_lattice(pts)
    if hrep is None:
        hrep = facet_description(pts)
    xs = _dilate_array(pts, n, lat, hrep, row_cap)
    out = [tuple(int(v) for v in row) for row in xs]
    out.sort()
    return out


def _undecomposable(sn, s1a, prev, d):
    """Rows of the array sn admitting no split q = v + p with v a row of s1a
    and p a row of prev.

    Uses radix-16 packing, valid because the caller guarantees
    max digit of s1 + max digit of prev <= 15: then code(v) + code(p) is the
    canonical code of v + p (no carries), so code equality alone certifies a
    digitwise decomposition."""
    radix = np.int64(16) ** np.arange(d, dtype=np.int64)
    prev_sorted = np.sort(prev @ radix)
    codes = sn @ radix
    undecided = np.arange(len(sn))
    for vcode in s1a @ radix:
        t = codes - vcode
        pos = np.searchsorted(prev_sorted, t)
        pos_c = np.minimum(pos, len(prev_sorted) - 1)
        hit = prev_sorted[pos_c] == t
        undecided = undecided[~hit]
        codes = codes[~hit]
        if not len(undecided):
            return []
    return [tuple(int(v) for v in sn[i]) for i in undecided]


@dataclass(frozen=True)
class IdpReport:
    verdict: str                 # "Normal" | "NotNormal"
    degrees_checked: tuple
    witness: tuple = None
    witness_degree: int = None
    points_per_degree: tuple = ()   # ((degree, count), ...)

    @property
    def normal(self) -> bool:
        return self.verdict == "Normal"

    def to_text(self) -> str:
        lines = [f"verdict: {self.verdict}"]
        if self.degrees_checked:
            lines.append("degrees checked: "
                         f"{self.degrees_checked[0]}..{self.degrees_checked[-1]}")
        else:
            lines.append("degrees checked: none")
        if self.witness is not None:
            lines.append(f"witness degree: {self.witness_degree}")
            lines.append("witness: " + " ".join(str(x) for x in self.witness))
        lines.append("points per degree: " + " ".join(
            f"{d}={c}" for d, c in self.points_per_degree))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class DecompositionResult:
    found: tuple     # n points summing to q, or None
    examined: int    # nodes visited; with found None this certifies the search


def decompose(q, n: int, points, lat: AffineLattice = None,
              hrep: HRep = None) -> DecompositionResult:
    """Exhaustive search for q = p_1 + ... + p_n with each p_i a lattice
    point of conv(points); index-nondecreasing, so multisets are visited
    once. Failure is a complete-search certificate."""
    pts = [tuple(p) for p in points]
    if lat is None:
        lat = spanned_lattice(pts)
    if hrep is None:
        hrep = facet_description(pts)
    s1 = lattice_points_in_dilate(pts, 1, lat, hrep)
    q = tuple(q)
    examined = 0
    dead = set()

    def rec(rest, k, min_idx):
        nonlocal examined
        examined += 1
        if k == 0:
            return [] if not any(rest) else None
        key = (rest, k, min_idx)
        if key in dead:
            return None
        if not hrep.contains(rest, k) or not lat.contains(rest, k):
            dead.add(key)
            return None
        for idx in range(min_idx, len(s1)):
            v = s1[idx]
            sub = rec(tuple(a - b for a, b in zip(rest, v)), k - 1, idx)
            if sub is not None:
                return [v] + sub
        dead.add(key)
        return None

    found = rec(q, n, 0)
    return DecompositionResult(
        found=None if found is None else tuple(found), examined=examined)


def idp_check(poly, lat: AffineLattice = None, max_degree: int = None,
              hrep: HRep = None, row_cap: int = 20_000_000) -> IdpReport:
    """Integer decomposition property, degree by degree.

    For each n, every lattice point of nP must split as v + (point of
    (n-1)P) with v a lattice point of P; by induction that is exactly
    decomposability into n points. The default degree ceiling max(2, dim-1)
    suffices for full normality of a lattice polytope. A failure is
    re-verified independently (halfspaces, lattice membership, exhaustive
    search) before it is reported."""
    pts = list(poly.vertices) if isinstance(poly, ModelPolytope) else \
        [tuple(p) for p in poly]
    if lat is None:
        lat = spanned_lattice(pts)
    if hrep is None:
        hrep = facet_description(pts)
    if max_degree is None:
        max_degree = max(2, lat.rank - 1)
    s1 = _dilate_array(pts, 1, lat, hrep, row_cap)
    counts = [(1, len(s1))]
    d = len(pts[0])
    prev = s1
    degrees = []
    for n in range(2, max_degree + 1):
        sn = _dilate_array(pts, n, lat, hrep, row_cap)
        counts.append((n, len(sn)))
        packable = (d <= 16 and int(sn.max()) <= 15 and int(sn.min()) >= 0
                    and int(s1.min()) >= 0 and int(prev.min()) >= 0
                    and int(s1.max()) + int(prev.max()) <= 15)
        if packable:
            bad = _undecomposable(sn, s1, prev, d)
        else:
            bad = _undecomposable_py(
                [tuple(int(v) for v in row) for row in sn],
                [tuple(int(v) for v in row) for row in s1],
                set(tuple(int(v) for v in row) for row in prev))
        degrees.append(n)
        if bad:
            witness = min(bad)
            if not hrep.contains(witness, n):
                raise AssertionError("witness fails the halfspace check")
            if not lat.contains(witness, n):
                raise AssertionError("witness fails the lattice check")
            if decompose(witness, n, pts, lat, hrep).found is not None:
                raise AssertionError("witness decomposed on re-verification")
            return IdpReport(verdict="NotNormal", degrees_checked=tuple(degrees),
                             witness=witness, witness_degree=n,
                             points_per_degree=tuple(counts))
        prev = sn
    return IdpReport(verdict="Normal", degrees_checked=tuple(degrees),
                     points_per_degree=tuple(counts))


def _undecomposable_py(sn, s1, prev_set):
    bad = []
    for q in sn:
        if not any(tuple(a - b for a, b in zip(q, v)) in prev_set for v in s1):
            bad.append(q)
    return bad


def fiber_product(p1: ModelPolytope, block1: int, p2: ModelPolytope,
                  block2: int) -> ModelPolytope:
    """Pairs of vertices agreeing on the designated blocks, with the shared
    block written once: the polytope analogue of gluing trees along a leaf
    edge. Both block projections must land in the standard simplex."""
    if p1.block_width != p2.block_width:
        raise BlockWidthMismatchError(
            f"block widths {p1.block_width} and {p2.block_width} differ")
    if p1.flavor != p2.flavor:
        raise BlockWidthMismatchError("cannot mix polytope flavors")
    for poly, blk in ((p1, block1), (p2, block2)):
        if not 0 <= blk < poly.n_blocks:
            raise ValueError(f"no block {blk}")
        for v in poly.vertices:
            proj = poly.block(v, blk)
            if any(x < 0 for x in proj) or sum(proj) != 1:
                raise ProjectionNotInSimplexError(
                    f"block {blk} projection {proj} is not a simplex vertex")
    w = p1.block_width
    by_proj = {}
    for v in p2.vertices:
        key = p2.block(v, block2)
        rest = v[:block2 * w] + v[(block2 + 1) * w:]
        by_proj.setdefault(key, []).append(rest)
    verts = []
    for v in p1.vertices:
        key = p1.block(v, block1)
        for rest in by_proj.get(key, ()):
            verts.append(v + rest)
    verts = sorted(set(verts))
    return ModelPolytope(vertices=tuple(verts),
                         n_blocks=p1.n_blocks + p2.n_blocks - 1,
                         block_width=w, flavor=p1.flavor,
                         provenance=f"{p1.provenance}|{p2.provenance}")


def glued_polytope(model, t1, leaf1, t2, leaf2, cap: int = 10 ** 6):
    """Polytope of the glued tree computed through the fiber product.

    Edge orientation flips recorded by glue() act on abelian blocks as the
    character negation involution; the matching condition across the merged
    edge carries one extra negation. The returned polytope's blocks follow
    the glued tree's edge order, so it compares directly against
    build_polytope on the glued tree."""
    res = glue(t1, leaf1, t2, leaf2)
    q1 = build_polytope(t1, model, cap=cap)
    q2 = build_polytope(t2, model, cap=cap)
    for i in res.flipped1:
        q1 = negate_block(q1, model, i)
    negs2 = set(res.flipped2) ^ {res.glued2}
    for i in negs2:
        q2 = negate_block(q2, model, i)
    prod = fiber_product(q1, res.glued1, q2, res.glued2)
    return res, prod
