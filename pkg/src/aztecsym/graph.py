"""Weighted planar graphs with exact embeddings and two exact counting backends.

Vertices carry doubled coordinates (x2, y2) so that all positions are exact
half-integers in the rotated frame; weights are exact rationals.  Matchings
can be counted by exhaustive enumeration (the oracle) or via a Kasteleyn
orientation and a fraction-free integer determinant (polynomial time).  The
two backends agree exactly wherever both apply.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

Pair = Tuple[int, int]

DEFAULT_ENUM_CAP = 34


class GraphError(Exception):
    pass


class CapExceeded(GraphError):
    """Vertex count exceeds the enumeration cap."""


class NonPlanar(GraphError):
    """The stored embedding does not satisfy Euler's formula."""


class Unmatchable(GraphError):
    """A vertex cannot be covered by any matching."""


class NotCentrallySymmetric(GraphError):
    """The embedding is not invariant under the 180-degree rotation."""


class NotBipartite(GraphError):
    pass


@dataclass(frozen=True)
class Vertex:
    id: int
    x2: int
    y2: int
    color: str  # "black" | "white"
    label: Optional[int] = None


@dataclass(frozen=True)
class Matching:
    edges: Tuple[Pair, ...]  # sorted pairs, sorted tuple
    weight: Fraction


def _norm_edge(u: int, v: int) -> Pair:
    if u == v:
        raise GraphError("self-loops are not allowed")
    return (u, v) if u < v else (v, u)


class WeightedGraph:
    """Immutable undirected graph with exact rational edge weights."""

    def __init__(
        self,
        vertices: Iterable[Vertex],
        edges: Iterable[Tuple[int, int, Fraction]],
        merge_parallel: bool = False,
    ):
        self.vertices: Dict[int, Vertex] = {}
        for v in vertices:
            if v.id in self.vertices:
                raise GraphError("duplicate vertex id %d" % v.id)
            self.vertices[v.id] = v
        self.weights: Dict[Pair, Fraction] = {}
        for (u, v, w) in edges:
            if u not in self.vertices or v not in self.vertices:
                raise GraphError("edge (%d,%d) references missing vertex" % (u, v))
            w = Fraction(w)
            if w <= 0:
                raise GraphError("edge weights must be positive")
            key = _norm_edge(u, v)
            if key in self.weights:
                if not merge_parallel:
                    raise GraphError("parallel edge %r" % (key,))
                self.weights[key] += w
            else:
                self.weights[key] = w
        adj: Dict[int, List[int]] = {i: [] for i in self.vertices}
        for (u, v) in self.weights:
            adj[u].append(v)
            adj[v].append(u)
        self.adj: Dict[int, Tuple[int, ...]] = {
            i: tuple(sorted(ns)) for i, ns in adj.items()
        }

    # -- basics ------------------------------------------------------------

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.weights)

    def edge_weight(self, u: int, v: int) -> Fraction:
        return self.weights[_norm_edge(u, v)]

    def has_edge(self, u: int, v: int) -> bool:
        return _norm_edge(u, v) in self.weights

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def edges(self) -> Iterator[Tuple[int, int, Fraction]]:
        for (u, v), w in sorted(self.weights.items()):
            yield u, v, w

    def position(self, v: int) -> Tuple[int, int]:
        vv = self.vertices[v]
        return (vv.x2, vv.y2)

    def without_vertices(self, drop: Iterable[int]) -> "WeightedGraph":
        dropset = set(drop)
        return WeightedGraph(
            [v for i, v in self.vertices.items() if i not in dropset],
            [
                (u, v, w)
                for (u, v), w in self.weights.items()
                if u not in dropset and v not in dropset
            ],
        )

    def without_edges(self, drop: Iterable[Pair]) -> "WeightedGraph":
        dropset = {_norm_edge(*e) for e in drop}
        return WeightedGraph(
            self.vertices.values(),
            [(u, v, w) for (u, v), w in self.weights.items() if (u, v) not in dropset],
        )

    def with_scaled_edges(self, scaled: Dict[Pair, Fraction]) -> "WeightedGraph":
        scaled = {_norm_edge(*k): f for k, f in scaled.items()}
        return WeightedGraph(
            self.vertices.values(),
            [
                (u, v, w * scaled.get((u, v), Fraction(1)))
                for (u, v), w in self.weights.items()
            ],
        )

    def components(self) -> List[Tuple[int, ...]]:
        seen: set[int] = set()
        comps = []
        for start in sorted(self.vertices):
            if start in seen:
                continue
            stack, comp = [start], []
            seen.add(start)
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in self.adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            comps.append(tuple(sorted(comp)))
        return comps

    # -- bipartition ---------------------------------------------------------

    def check_colors(self) -> None:
        """Verify that stored colors form a proper 2-coloring."""
        for (u, v) in self.weights:
            if self.vertices[u].color == self.vertices[v].color:
                raise NotBipartite("edge (%d,%d) joins equal colors" % (u, v))

    def color_classes(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        self.check_colors()
        blacks = tuple(sorted(i for i, v in self.vertices.items() if v.color == "black"))
        whites = tuple(sorted(i for i, v in self.vertices.items() if v.color == "white"))
        if len(blacks) + len(whites) != len(self.vertices):
            raise NotBipartite("unknown vertex color present")
        return blacks, whites

    # -- serialization -------------------------------------------------------

    def canonical_json(self) -> str:
        obj = {
            "vertices": [
                {
                    "id": v.id,
                    "x2": v.x2,
                    "y2": v.y2,
                    "color": v.color,
                    **({"label": v.label} if v.label is not None else {}),
                }
                for v in sorted(self.vertices.values(), key=lambda v: v.id)
            ],
            "edges": [
                [u, v, "%d/%d" % (w.numerator, w.denominator)]
                for (u, v), w in sorted(self.weights.items())
            ],
        }
        return json.dumps(obj, sort_keys=True, separators=(",", ":"))

    def canonical_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()

    def congruence_key(self) -> str:
        """Serialization invariant under translation, axis flips and 90-degree
        rotation of the embedding (ids, colors and labels are dropped)."""
        pts = {(v.x2, v.y2) for v in self.vertices.values()}
        best = None
        for t in range(8):
            tr = {}
            for v in self.vertices.values():
                x, y = v.x2, v.y2
                if t & 4:
                    x, y = y, x
                if t & 1:
                    x = -x
                if t & 2:
                    y = -y
                tr[v.id] = (x, y)
            xs = [p[0] for p in tr.values()]
            ys = [p[1] for p in tr.values()]
            dx, dy = min(xs), min(ys)
            tr = {i: (p[0] - dx, p[1] - dy) for i, p in tr.items()}
            if len(set(tr.values())) != len(tr):
                continue
            edges = sorted(
                tuple(sorted((tr[u], tr[v]))) + ("%s" % (w,),)
                for (u, v), w in self.weights.items()
            )
            ser = json.dumps(edges)
            if best is None or ser < best:
                best = ser
        if best is None:
            raise GraphError("degenerate embedding: coincident vertices")
        return best


# ---------------------------------------------------------------------------
# Exhaustive enumeration.
# ---------------------------------------------------------------------------

def enumerate_perfect_matchings(
    g: WeightedGraph, cap: int = DEFAULT_ENUM_CAP
) -> List[Matching]:
    """All perfect matchings, in lexicographic order of their sorted edge lists.

    Deterministic: branches on the lowest-id uncovered vertex, neighbors in
    increasing order.  Raises CapExceeded when the graph is larger than `cap`.
    """
    if len(g) > cap:
        raise CapExceeded("%d vertices exceeds enumeration cap %d" % (len(g), cap))
    ids = sorted(g.vertices)
    covered: set[int] = set()
    chosen: List[Pair] = []
    out: List[Matching] = []

    def rec() -> None:
        free = [i for i in ids if i not in covered]
        if not free:
            w = Fraction(1)
            for e in chosen:
                w *= g.weights[e]
            out.append(Matching(tuple(sorted(chosen)), w))
            return
        v = free[0]
        for u in g.adj[v]:
            if u in covered:
                continue
            covered.add(v)
            covered.add(u)
            chosen.append(_norm_edge(v, u))
            rec()
            chosen.pop()
            covered.discard(v)
            covered.discard(u)

    rec()
    out.sort(key=lambda m: m.edges)
    return out


# ---------------------------------------------------------------------------
# Kasteleyn backend.
# ---------------------------------------------------------------------------

def _half(dx: int, dy: int) -> int:
    # 0 for the open upper half plane plus the positive x axis, 1 otherwise
    return 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1


def _angle_less(a: Tuple[int, int], b: Tuple[int, int]) -> bool:
    ha, hb = _half(*a), _half(*b)
    if ha != hb:
        return ha < hb
    cross = a[0] * b[1] - a[1] * b[0]
    return cross > 0


def _rotation_system(g: WeightedGraph) -> Dict[int, List[int]]:
    rot: Dict[int, List[int]] = {}
    for v in g.vertices:
        x0, y0 = g.position(v)
        ns = list(g.adj[v])
        # insertion sort with the exact angular comparator (lists are tiny)
        ordered: List[int] = []
        for n in ns:
            d = (g.vertices[n].x2 - x0, g.vertices[n].y2 - y0)
            if d == (0, 0):
                raise GraphError("coincident endpoints for edge (%d,%d)" % (v, n))
            i = 0
            while i < len(ordered):
                d2 = (g.vertices[ordered[i]].x2 - x0, g.vertices[ordered[i]].y2 - y0)
                if _angle_less(d, d2):
                    break
                i += 1
            ordered.insert(i, n)
        rot[v] = ordered
    return rot


def _faces(g: WeightedGraph) -> List[List[Tuple[int, int]]]:
    """Face cycles of the embedding as lists of directed edges; each directed
    edge appears in exactly one face."""
    rot = _rotation_system(g)
    index = {v: {n: i for i, n in enumerate(ns)} for v, ns in rot.items()}
    remaining = {(u, v) for (u, v) in g.weights} | {(v, u) for (u, v) in g.weights}
    faces = []
    while remaining:
        start = min(remaining)
        face = []
        e = start
        while True:
            face.append(e)
            remaining.discard(e)
            u, v = e
            ns = rot[v]
            e = (v, ns[(index[v][u] - 1) % len(ns)])
            if e == start:
                break
        faces.append(face)
    return faces


def _face_area2(g: WeightedGraph, face: Sequence[Tuple[int, int]]) -> int:
    # twice the signed area (shoelace) in doubled coordinates
    s = 0
    for (u, v) in face:
        xu, yu = g.position(u)
        xv, yv = g.position(v)
        s += xu * yv - xv * yu
    return s


def planar_faces(g: WeightedGraph) -> Tuple[List[List[Tuple[int, int]]], List[int]]:
    """Faces of the stored embedding plus the indices of the bounded ones.

    Validates Euler's formula per connected component; raises NonPlanar when
    the rotation system does not describe a planar embedding.
    """
    comps = g.components()
    faces = _faces(g)
    # distribute faces to components by any vertex on them
    comp_of = {}
    for ci, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = ci
    n_faces = [0] * len(comps)
    for f in faces:
        n_faces[comp_of[f[0][0]]] += 1
    n_edges = [0] * len(comps)
    for (u, v) in g.weights:
        n_edges[comp_of[u]] += 1
    for ci, comp in enumerate(comps):
        isolated = all(g.degree(v) == 0 for v in comp)
        f = n_faces[ci] if not isolated else 1
        if len(comp) - n_edges[ci] + f != 2:
            raise NonPlanar(
                "component %d violates Euler formula: V=%d E=%d F=%d"
                % (ci, len(comp), n_edges[ci], f)
            )
    bounded = [i for i, f in enumerate(faces) if _face_area2(g, f) > 0]
    # per component exactly one unbounded face
    if len(faces) - len(bounded) != sum(1 for c in comps if any(g.degree(v) > 0 for v in c)):
        raise NonPlanar("embedding has crossing edges (face orientation mismatch)")
    return faces, bounded


def kasteleyn_orientation(g: WeightedGraph) -> Dict[Pair, Tuple[int, int]]:
    """Orient every edge so each bounded face has an odd number of clockwise
    edges.  Returns {sorted pair: directed pair}."""
    faces, bounded = planar_faces(g)
    orient: Dict[Pair, Tuple[int, int]] = {}

    # spanning forest first
    seen: set[int] = set()
    for root in sorted(g.vertices):
        if root in seen:
            continue
        seen.add(root)
        stack = [root]
        while stack:
            x = stack.pop()
            for y in g.adj[x]:
                if y not in seen:
                    seen.add(y)
                    orient[_norm_edge(x, y)] = (x, y)
                    stack.append(y)

    pending = [faces[i] for i in bounded]
    while pending:
        progressed = False
        rest = []
        for face in pending:
            free = [e for e in face if _norm_edge(*e) not in orient]
            if len(free) == 0:
                continue
            if len(free) > 1:
                rest.append(face)
                continue
            # count clockwise edges: oriented against the (counterclockwise)
            # face traversal
            cw = 0
            for (u, v) in face:
                d = orient.get(_norm_edge(u, v))
                if d is not None and d == (v, u):
                    cw += 1
            (u, v) = free[0]
            # even so far: the last edge must run clockwise (against traversal)
            orient[_norm_edge(u, v)] = (v, u) if cw % 2 == 0 else (u, v)
            progressed = True
        if rest and not progressed:
            raise NonPlanar("Kasteleyn orientation did not converge")
        pending = rest
    for face in (faces[i] for i in bounded):
        cw = sum(1 for (u, v) in face if orient[_norm_edge(u, v)] == (v, u))
        if cw % 2 != 1:
            raise NonPlanar("face fails odd-clockwise condition")
    return orient


def _det_bareiss(m: List[List[int]]) -> int:
    """Exact determinant of an integer matrix by fraction-free elimination."""
    n = len(m)
    if n == 0:
        return 1
    m = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _count_kasteleyn(g: WeightedGraph) -> Fraction:
    if len(g) == 0:
        return Fraction(1)
    if len(g) % 2 == 1:
        return Fraction(0)
    blacks, whites = g.color_classes()
    if len(blacks) != len(whites):
        return Fraction(0)
    total = Fraction(1)
    for comp in g.components():
        cset = set(comp)
        sub = g.without_vertices([v for v in g.vertices if v not in cset])
        b = [v for v in comp if g.vertices[v].color == "black"]
        w = [v for v in comp if g.vertices[v].color == "white"]
        if len(b) != len(w):
            return Fraction(0)
        if not b:
            continue
        orient = kasteleyn_orientation(sub)
        n = len(b)
        bi = {v: i for i, v in enumerate(b)}
        wi = {v: i for i, v in enumerate(w)}
        denom_lcm = 1
        for wt in sub.weights.values():
            denom_lcm = denom_lcm * wt.denominator // gcd(denom_lcm, wt.denominator)
        mat = [[0] * n for _ in range(n)]
        for (u, v), wt in sub.weights.items():
            x = int(wt * denom_lcm)
            if sub.vertices[u].color == "white":
                u, v = v, u
            # u black, v white
            sgn = 1 if orient[_norm_edge(u, v)] == (u, v) else -1
            mat[bi[u]][wi[v]] = sgn * x
        det = _det_bareiss(mat)
        total *= Fraction(abs(det), denom_lcm ** n)
    return total


def count_matchings(g: WeightedGraph, backend: str = "auto", cap: int = DEFAULT_ENUM_CAP) -> Fraction:
    """Exact weighted count of perfect matchings.

    backend "enumerate" uses the exhaustive oracle (subject to `cap`),
    "kasteleyn" the planar determinant method, "auto" picks enumeration for
    small graphs and Kasteleyn above the cap.
    """
    if backend == "auto":
        backend = "enumerate" if len(g) <= min(cap, 20) else "kasteleyn"
    if backend == "enumerate":
        return sum((m.weight for m in enumerate_perfect_matchings(g, cap)), Fraction(0))
    if backend == "kasteleyn":
        return _count_kasteleyn(g)
    raise GraphError("unknown backend %r" % (backend,))


# ---------------------------------------------------------------------------
# Central symmetry.
# ---------------------------------------------------------------------------

class Involution:
    """A vertex permutation with map(map(v)) == v."""

    def __init__(self, mapping: Dict[int, int]):
        for u, v in mapping.items():
            if mapping.get(v) != u:
                raise GraphError("not an involution at %d" % u)
        self.mapping = dict(mapping)

    def __call__(self, v: int) -> int:
        return self.mapping[v]

    def fixed_points(self) -> Tuple[int, ...]:
        return tuple(sorted(v for v, u in self.mapping.items() if u == v))

    def map_edge(self, e: Pair) -> Pair:
        return _norm_edge(self.mapping[e[0]], self.mapping[e[1]])


def central_involution(g: WeightedGraph) -> Involution:
    """Pair every vertex with its image under the 180-degree rotation about
    the centroid; verifies adjacency and weights are preserved."""
    if len(g) == 0:
        return Involution({})
    n = len(g)
    sx = sum(v.x2 for v in g.vertices.values())
    sy = sum(v.y2 for v in g.vertices.values())
    if (2 * sx) % n or (2 * sy) % n:
        raise NotCentrallySymmetric("centroid is not half-integral")
    cx2, cy2 = 2 * sx // n, 2 * sy // n  # doubled-doubled coordinates
    pos = {(v.x2, v.y2): v.id for v in g.vertices.values()}
    mapping = {}
    for v in g.vertices.values():
        img = (cx2 - v.x2, cy2 - v.y2)
        if img not in pos:
            raise NotCentrallySymmetric("vertex %d has no rotated partner" % v.id)
        mapping[v.id] = pos[img]
    sigma = Involution(mapping)
    for (u, v), w in g.weights.items():
        e2 = sigma.map_edge((u, v))
        if e2 not in g.weights or g.weights[e2] != w:
            raise NotCentrallySymmetric("edge (%d,%d) has no matching image" % (u, v))
    return sigma


def count_symmetric_matchings(
    g: WeightedGraph,
    sigma: Involution,
    backend: str = "filter",
    cap: int = DEFAULT_ENUM_CAP,
) -> Fraction:
    """Weighted count of perfect matchings invariant under `sigma`.

    backend "filter" enumerates everything and keeps the invariant ones;
    backend "orbit" builds the orbit graph and counts its matchings.
    """
    if backend == "filter":
        total = Fraction(0)
        for m in enumerate_perfect_matchings(g, cap):
            es = set(m.edges)
            if all(sigma.map_edge(e) in es for e in m.edges):
                total += m.weight
        return total
    if backend == "orbit":
        from .rewrite import count_symmetric_via_orbit

        return count_symmetric_via_orbit(g, sigma)
    raise GraphError("unknown backend %r" % (backend,))


# ---------------------------------------------------------------------------
# Forced edges.
# ---------------------------------------------------------------------------

def reduce_forced_edges(g: WeightedGraph) -> Tuple[WeightedGraph, Fraction]:
    """Repeatedly remove pendant-forced edges together with their endpoints.

    Returns (reduced graph, multiplier) with M(g) = multiplier * M(reduced).
    A vertex left without any incident edge makes the graph unmatchable; the
    multiplier is then 0 and the current graph is returned unchanged.
    """
    cur = g
    mult = Fraction(1)
    while True:
        if len(cur) == 0:
            return cur, mult
        if any(cur.degree(v) == 0 for v in cur.vertices):
            return cur, Fraction(0)
        pend = next((v for v in sorted(cur.vertices) if cur.degree(v) == 1), None)
        if pend is None:
            return cur, mult
        u = cur.adj[pend][0]
        mult *= cur.edge_weight(pend, u)
        cur = cur.without_vertices([pend, u])


# ---------------------------------------------------------------------------
# Small-graph isomorphism (test helper).
# ---------------------------------------------------------------------------

def are_isomorphic(g1: WeightedGraph, g2: WeightedGraph) -> bool:
    """Weighted graph isomorphism by refinement plus backtracking.  Intended
    for small graphs in tests; ignores the embedding."""
    if len(g1) != len(g2) or g1.n_edges != g2.n_edges:
        return False

    def profile(g: WeightedGraph) -> Dict[int, tuple]:
        prof = {
            v: (g.degree(v), tuple(sorted(g.weights[_norm_edge(v, n)] for n in g.adj[v])))
            for v in g.vertices
        }
        for _ in range(len(g)):
            nxt = {
                v: (prof[v], tuple(sorted(prof[n] for n in g.adj[v]))) for v in g.vertices
            }
            if len(set(nxt.values())) == len(set(prof.values())):
                prof = nxt
                break
            prof = nxt
        return prof

    p1, p2 = profile(g1), profile(g2)
    if sorted(p1.values()) != sorted(p2.values()):
        return False
    order = sorted(g1.vertices, key=lambda v: (p1[v], v))
    cands = {v: [u for u in g2.vertices if p2[u] == p1[v]] for v in order}
    assign: Dict[int, int] = {}
    used: set[int] = set()

    def bt(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for u in cands[v]:
            if u in used:
                continue
            ok = True
            for n in g1.adj[v]:
                if n in assign:
                    if not g2.has_edge(u, assign[n]) or g2.edge_weight(
                        u, assign[n]
                    ) != g1.edge_weight(v, n):
                        ok = False
                        break
            if ok and g1.degree(v) == g2.degree(u):
                assign[v] = u
                used.add(u)
                if bt(i + 1):
                    return True
                del assign[v]
                used.discard(u)
        return False

    return bt(0)
