"""Matching-count-preserving graph transformations.

Each operation returns a rewritten graph together with an exact multiplier so
that multiplier * M(after) == M(before); every rule is enumeration-checkable
on small instances.  The module also provides the symmetry machinery: the
factorization cut along a horizontal axis, orbit graphs of centrally
symmetric graphs, and the cutting procedure for axes that are not cut sets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .graph import (
    GraphError,
    Involution,
    Vertex,
    WeightedGraph,
    central_involution,
    count_matchings,
    _norm_edge,
)

Pair = Tuple[int, int]


class RewriteError(GraphError):
    pass


class BadPartition(RewriteError):
    pass


class LocusMismatch(RewriteError):
    pass


class WeightConditionViolated(RewriteError):
    pass


class NotACutSet(RewriteError):
    pass


class OddAxisCount(RewriteError):
    pass


class NotSymmetric(RewriteError):
    pass


class LabelingFailure(RewriteError):
    pass


@dataclass(frozen=True)
class RewriteStep:
    rule: str
    locus: Tuple[int, ...]
    multiplier: Fraction


@dataclass
class RewriteTrace:
    initial_hash: str
    steps: List[RewriteStep] = field(default_factory=list)
    final_hash: Optional[str] = None

    def record(self, rule: str, locus: Iterable[int], mult) -> None:
        self.steps.append(RewriteStep(rule, tuple(locus), Fraction(mult)))

    @property
    def multiplier(self) -> Fraction:
        out = Fraction(1)
        for s in self.steps:
            out *= s.multiplier
        return out

    def to_json(self) -> dict:
        return {
            "initial": self.initial_hash,
            "final": self.final_hash,
            "multiplier": str(self.multiplier),
            "steps": [
                {"rule": s.rule, "locus": list(s.locus), "multiplier": str(s.multiplier)}
                for s in self.steps
            ],
        }


# ---------------------------------------------------------------------------
# Local moves.
# ---------------------------------------------------------------------------

def vertex_split(
    g: WeightedGraph,
    v: int,
    H: Iterable[int],
    K: Iterable[int],
    positions: Optional[Sequence[Tuple[int, int]]] = None,
) -> Tuple[WeightedGraph, Fraction]:
    """Split v into v'-x-v'' with N(v') = H + {x} and N(v'') = K + {x}.

    Returns (graph, 1); the matching count is unchanged.  `positions` may
    place (v', x, v'') explicitly (doubled coordinates); the default stacks x
    and v'' above v, which is fine for counting but may break a straight-line
    embedding.  New ids are taken above the current maximum.
    """
    H, K = set(H), set(K)
    if H & K or H | K != set(g.adj[v]):
        raise BadPartition("H, K must partition N(v)")
    base = max(g.vertices) + 1 if g.vertices else 0
    vv = g.vertices[v]
    if positions is None:
        positions = ((vv.x2, vv.y2), (vv.x2, vv.y2 + 1), (vv.x2, vv.y2 + 2))
    other = "white" if vv.color == "black" else "black"
    verts = [u for u in g.vertices.values() if u.id != v]
    verts.append(Vertex(base, positions[0][0], positions[0][1], vv.color, vv.label))
    verts.append(Vertex(base + 1, positions[1][0], positions[1][1], other))
    verts.append(Vertex(base + 2, positions[2][0], positions[2][1], vv.color))
    edges = [(a, b, w) for (a, b, w) in g.edges() if v not in (a, b)]
    for h in H:
        edges.append((base, h, g.edge_weight(v, h)))
    for k in K:
        edges.append((base + 2, k, g.edge_weight(v, k)))
    edges.append((base, base + 1, Fraction(1)))
    edges.append((base + 1, base + 2, Fraction(1)))
    return WeightedGraph(verts, edges), Fraction(1)


def star_scale(g: WeightedGraph, v: int, t) -> Tuple[WeightedGraph, Fraction]:
    """Multiply all edges at v by t > 0; returns (graph, 1/t)."""
    t = Fraction(t)
    if t <= 0:
        raise RewriteError("factor must be positive")
    scaled = {(v, u): t for u in g.adj[v]}
    return g.with_scaled_edges(scaled), Fraction(1) / t


def urban_renewal(g: WeightedGraph, inner: Sequence[int]) -> Tuple[WeightedGraph, Fraction]:
    """Renew the cell whose four inner vertices are listed in cyclic order.

    Each inner vertex must have at most one neighbor outside the cell (its
    tip); cell edges may be absent (weight 0).  The inner vertices are
    deleted and each opposite cell weight, divided by the multiplier
    xz + yt, becomes an edge between consecutive tips.
    """
    if len(inner) != 4 or len(set(inner)) != 4:
        raise LocusMismatch("need four distinct inner vertices in cyclic order")
    innerset = set(inner)
    tips: List[Optional[int]] = []
    for v in inner:
        outside = [u for u in g.adj[v] if u not in innerset]
        if len(outside) > 1:
            raise LocusMismatch(
                "inner vertex %d has %d outside neighbors" % (v, len(outside))
            )
        tips.append(outside[0] if outside else None)
    real_tips = [t for t in tips if t is not None]
    if len(set(real_tips)) != len(real_tips):
        raise LocusMismatch("tips must be distinct")

    def wt(i: int, j: int) -> Fraction:
        return g.weights.get(_norm_edge(inner[i], inner[j]), Fraction(0))

    w = [wt(i, (i + 1) % 4) for i in range(4)]
    if wt(0, 2) or wt(1, 3):
        raise LocusMismatch("cell has a chord")
    delta = w[0] * w[2] + w[1] * w[3]
    if delta == 0:
        raise LocusMismatch("degenerate cell: both opposite edge products vanish")
    out = g.without_vertices(inner)
    extra = []
    for i in range(4):
        new_w = w[(i + 2) % 4] / delta
        if new_w == 0:
            continue
        a, b = tips[i], tips[(i + 1) % 4]
        if a is None or b is None:
            raise LocusMismatch("missing tip for a nonzero replacement edge")
        if out.has_edge(a, b):
            raise LocusMismatch("replacement edge (%d,%d) already present" % (a, b))
        extra.append((a, b, new_w))
    return WeightedGraph(out.vertices.values(), list(out.edges()) + extra), delta


def edge_inversion(g: WeightedGraph, u: int, v: int) -> Tuple[WeightedGraph, Fraction]:
    """Renew a one-edge cell: u-v (weight x) with single outside neighbors
    (tips) tu, tv is replaced by the edge tu-tv of weight 1/x; multiplier x."""
    x = g.edge_weight(u, v)
    tu = [a for a in g.adj[u] if a != v]
    tv = [a for a in g.adj[v] if a != u]
    if len(tu) != 1 or len(tv) != 1:
        raise LocusMismatch("endpoints must have exactly one outside neighbor")
    if g.has_edge(tu[0], tv[0]):
        raise LocusMismatch("replacement edge already present")
    out = g.without_vertices([u, v])
    return (
        WeightedGraph(out.vertices.values(), list(out.edges()) + [(tu[0], tv[0], 1 / x)]),
        x,
    )


def spider_variant(
    g: WeightedGraph, locus: Sequence[int], variant: str
) -> Tuple[WeightedGraph, Fraction]:
    """Boundary variants of the renewal, multiplier 2.

    variant "b": locus (W, S, E) is an inner path (weights x = wt(W,S),
    y = wt(S,E)) whose vertices each have exactly one outside neighbor (their
    tips tw, ts, te).  The path is deleted, a new vertex D appears at the
    missing fourth corner, and the tips are joined by tw-D: y/2, D-te: x/2,
    tw-ts: 1/(2x), ts-te: 1/(2y).  variant "c": locus (W, S) is an inner edge
    (weight x) with tips tw, ts; it is replaced by two new vertices D ~ tw
    and C ~ ts with tw-D: 1/2, D-C: x/2, C-ts: 1/2, tw-ts: 1/(2x).  Both
    replacements divide every transfer configuration by exactly 2.
    """
    base = max(g.vertices) + 1 if g.vertices else 0

    def tip(v: int, inside: set) -> int:
        outside = [u for u in g.adj[v] if u not in inside]
        if len(outside) != 1:
            raise LocusMismatch("vertex %d must have exactly one outside neighbor" % v)
        return outside[0]

    if variant == "b":
        if len(locus) != 3:
            raise LocusMismatch("variant b takes (W, S, E)")
        W, S, E = locus
        if not (g.has_edge(W, S) and g.has_edge(S, E)) or g.has_edge(W, E):
            raise LocusMismatch("locus is not an induced path")
        x, y = g.edge_weight(W, S), g.edge_weight(S, E)
        inside = {W, S, E}
        tw, ts, te = tip(W, inside), tip(S, inside), tip(E, inside)
        wv, sv, ev = g.vertices[W], g.vertices[S], g.vertices[E]
        out = g.without_vertices([W, S, E])
        verts = list(out.vertices.values())
        # D sits at the missing fourth corner of the cell
        verts.append(Vertex(base, wv.x2 + ev.x2 - sv.x2, wv.y2 + ev.y2 - sv.y2,
                            sv.color))
        if out.has_edge(tw, ts) or out.has_edge(ts, te):
            raise LocusMismatch("replacement edge already present")
        edges = list(out.edges())
        edges.append((tw, base, y / 2))
        edges.append((base, te, x / 2))
        edges.append((tw, ts, 1 / (2 * x)))
        edges.append((ts, te, 1 / (2 * y)))
        return WeightedGraph(verts, edges), Fraction(2)
    if variant == "c":
        if len(locus) != 2:
            raise LocusMismatch("variant c takes (W, S)")
        W, S = locus
        if not g.has_edge(W, S):
            raise LocusMismatch("locus is not an edge")
        x = g.edge_weight(W, S)
        inside = {W, S}
        tw, ts = tip(W, inside), tip(S, inside)
        wv, sv = g.vertices[W], g.vertices[S]
        out = g.without_vertices([W, S])
        verts = list(out.vertices.values())
        dx, dy = sv.x2 - wv.x2, sv.y2 - wv.y2
        verts.append(Vertex(base, wv.x2 - dy, wv.y2 + dx, wv.color))      # D ~ tw
        verts.append(Vertex(base + 1, sv.x2 - dy, sv.y2 + dx, sv.color))  # C ~ ts
        edges = list(out.edges())
        edges.append((tw, base, Fraction(1, 2)))
        edges.append((base, base + 1, x / 2))
        edges.append((base + 1, ts, Fraction(1, 2)))
        edges.append((tw, ts, 1 / (2 * x)))
        return WeightedGraph(verts, edges, merge_parallel=True), Fraction(2)
    raise LocusMismatch("unknown variant %r" % (variant,))


def four_cycle_contract(
    g: WeightedGraph, locus: Sequence[int]
) -> Tuple[WeightedGraph, Fraction]:
    """Two 4-cycles sharing the vertex a: (a, b1, b2, b3) and (a, c1, c2, c3)
    in cyclic order, with only b3 and c3 connected to the rest of the graph.
    Deletes b1, b2, c1, c2; multiplier 2 wt(b1,b2) wt(c1,c2)."""
    if len(locus) != 7 or len(set(locus)) != 7:
        raise LocusMismatch("locus is (a, b1, b2, b3, c1, c2, c3)")
    a, b1, b2, b3, c1, c2, c3 = locus
    allowed = set(locus)
    for cyc in ((a, b1, b2, b3), (a, c1, c2, c3)):
        for i in range(4):
            if not g.has_edge(cyc[i], cyc[(i + 1) % 4]):
                raise LocusMismatch("4-cycle edge missing")
    for v in (a, b1, b2, c1, c2):
        if any(u not in allowed for u in g.adj[v]):
            raise LocusMismatch("vertex %d has neighbors outside the locus" % v)
    for (p, q, r, s) in ((a, b1, b2, b3), (a, c1, c2, c3)):
        if g.edge_weight(p, q) * g.edge_weight(r, s) != g.edge_weight(q, r) * g.edge_weight(s, p):
            raise WeightConditionViolated("opposite edge products differ")
    mult = 2 * g.edge_weight(b1, b2) * g.edge_weight(c1, c2)
    return g.without_vertices([b1, b2, c1, c2]), mult


# ---------------------------------------------------------------------------
# Reflection symmetry and the factorization cut.
# ---------------------------------------------------------------------------

def reflection_involution(g: WeightedGraph) -> Tuple[Involution, Fraction]:
    """The vertical reflection symmetry of the embedding.

    Returns (involution, axis) where axis is the horizontal axis height in
    doubled coordinates (possibly half-integral).
    """
    n = len(g)
    if n == 0:
        raise NotSymmetric("empty graph")
    axis2 = Fraction(2 * sum(v.y2 for v in g.vertices.values()), n)  # = 2 * axis
    pos = {(v.x2, v.y2): v.id for v in g.vertices.values()}
    mapping = {}
    for v in g.vertices.values():
        ty = axis2 - v.y2
        if ty.denominator != 1:
            raise NotSymmetric("axis is not half-integral")
        img = pos.get((v.x2, int(ty)))
        if img is None:
            raise NotSymmetric("vertex %d has no mirror image" % v.id)
        mapping[v.id] = img
    sigma = Involution(mapping)
    for (u, v), w in g.weights.items():
        if g.weights.get(sigma.map_edge((u, v))) != w:
            raise NotSymmetric("edge weights are not mirror symmetric")
    return sigma, axis2 / 2


def _axis_sorted(g: WeightedGraph, sigma: Involution) -> List[int]:
    return sorted(sigma.fixed_points(), key=lambda i: g.vertices[i].x2)


def factor_cut(g: WeightedGraph) -> Tuple[WeightedGraph, WeightedGraph, int]:
    """Cut a bipartite graph that is symmetric about a horizontal axis whose
    vertices form a cut set.  Returns (plus, minus, eta) with
    M(g) = 2^eta * M(plus) * M(minus)."""
    g.check_colors()
    sigma, axis = reflection_involution(g)
    axis_vs = _axis_sorted(g, sigma)
    if len(axis_vs) % 2:
        raise OddAxisCount("odd number of axis vertices")
    if not axis_vs:
        raise NotACutSet("no vertices on the symmetry axis")
    eta = len(axis_vs) // 2
    white = g.vertices[axis_vs[0]].color
    cut_above = set()
    cut_below = set()
    for idx, vid in enumerate(axis_vs):
        is_a = idx % 2 == 0
        is_white = g.vertices[vid].color == white
        if is_a == is_white:
            cut_above.add(vid)
        else:
            cut_below.add(vid)

    def side(v: int) -> int:
        d = Fraction(g.vertices[v].y2) - axis
        return 0 if d == 0 else (1 if d > 0 else -1)

    edges = []
    for (u, v), w in g.weights.items():
        su, sv = side(u), side(v)
        if su == 0 and sv == 0:
            edges.append((u, v, w / 2))
            continue
        if (u in cut_above and sv > 0) or (v in cut_above and su > 0):
            continue
        if (u in cut_below and sv < 0) or (v in cut_below and su < 0):
            continue
        edges.append((u, v, w))
    cut = WeightedGraph(g.vertices.values(), edges)
    plus_ids: set = set()
    minus_ids: set = set()
    for comp in cut.components():
        has_above = any(side(c) > 0 for c in comp)
        has_below = any(side(c) < 0 for c in comp)
        if has_above and has_below:
            raise NotACutSet("axis vertices do not separate the graph")
        if has_above:
            plus_ids |= set(comp)
        elif has_below:
            minus_ids |= set(comp)
        else:
            # axis-only components keep the side their surviving edges point to
            if all(c in cut_above for c in comp):
                minus_ids |= set(comp)
            else:
                plus_ids |= set(comp)
    plus = cut.without_vertices([i for i in cut.vertices if i not in plus_ids])
    minus = cut.without_vertices([i for i in cut.vertices if i not in minus_ids])
    return plus, minus, eta


# ---------------------------------------------------------------------------
# Orbit graphs of centrally symmetric graphs.
# ---------------------------------------------------------------------------

def orbit_graph(g: WeightedGraph, sigma: Optional[Involution] = None) -> WeightedGraph:
    """Right half of a centrally symmetric graph with the vertical-axis
    vertex pairs identified; M(orbit) equals the invariant matching count.

    The identified vertices are strung along the horizontal axis to the left
    of the half graph, so the result keeps a horizontal reflection symmetry.
    Parallel edges produced by the identification are merged by weight sum.
    Center-fixed vertices and center-crossing edges are rejected (they are
    resolved by count_symmetric_via_orbit).
    """
    if sigma is None:
        sigma = central_involution(g)
    if len(g) == 0:
        return g
    if sigma.fixed_points():
        raise NotSymmetric("center vertex prevents the orbit construction")
    n = len(g)
    cx2 = Fraction(2 * sum(v.x2 for v in g.vertices.values()), n)
    cy2 = Fraction(2 * sum(v.y2 for v in g.vertices.values()), n)
    if (cy2 / 2).denominator != 1:
        raise NotSymmetric("horizontal axis does not sit on the coordinate grid")
    ybase = int(cy2 / 2)
    for (u, v) in g.weights:
        if sigma(u) == v:
            raise NotSymmetric("center-crossing edge; resolve it by a case split")
    on_axis = {v.id for v in g.vertices.values() if Fraction(2 * v.x2) == cx2}
    right = {v.id for v in g.vertices.values() if Fraction(2 * v.x2) > cx2}
    uppers = sorted(
        (i for i in on_axis if Fraction(2 * g.vertices[i].y2) > cy2),
        key=lambda i: abs(Fraction(2 * g.vertices[i].y2) - cy2),
    )
    keep = right | on_axis
    ident = {sigma(i): i for i in uppers}
    xmin = min(v.x2 for v in g.vertices.values() if v.id in keep) if keep else 0
    verts: List[Vertex] = []
    for i in sorted(keep):
        v = g.vertices[i]
        if i in ident:
            continue
        if i in uppers:
            j = uppers.index(i) + 1
            verts.append(Vertex(i, xmin - 2 * j, ybase, v.color, v.label))
        else:
            verts.append(Vertex(i, v.x2, v.y2, v.color, v.label))
    edges = []
    for (u, v), w in g.weights.items():
        if u not in keep or v not in keep:
            continue
        edges.append((ident.get(u, u), ident.get(v, v), w))
    return WeightedGraph(verts, edges, merge_parallel=True)


def count_symmetric_via_orbit(g: WeightedGraph, sigma: Involution) -> Fraction:
    """Invariant matching count via the orbit graph; center-fixed vertices
    give 0 and center-crossing edges are resolved by a two-way case split."""
    if len(g) == 0:
        return Fraction(1)
    if sigma.fixed_points():
        return Fraction(0)
    for (u, v), w in sorted(g.weights.items()):
        if sigma(u) == v:
            total = Fraction(0)
            with_e = g.without_vertices([u, v])
            if len(with_e) == 0:
                total += w
            else:
                try:
                    total += w * count_symmetric_via_orbit(
                        with_e, central_involution(with_e)
                    )
                except GraphError:
                    pass
            total += count_symmetric_via_orbit(
                g.without_edges([(u, v)]), Involution(sigma.mapping)
            )
            return total
    ob = orbit_graph(g, sigma)
    return count_matchings(ob, "kasteleyn" if len(ob) > 20 else "enumerate")


# ---------------------------------------------------------------------------
# Cutting procedure for an axis that is not a cut set.
# ---------------------------------------------------------------------------

def axis_cut_variant(g: WeightedGraph, choices: Sequence[int]) -> WeightedGraph:
    """Cut above (1) or below (0) at each a-vertex (odd-position axis vertex)
    according to `choices`; weights unchanged.  All such variants of a
    symmetric graph have the same matching count."""
    sigma, axis = reflection_involution(g)
    axis_vs = _axis_sorted(g, sigma)
    a_vertices = axis_vs[0::2]
    if len(choices) != len(a_vertices):
        raise LabelingFailure("need one choice per a-vertex")
    cut_dir = dict(zip(a_vertices, choices))

    def side(v: int) -> int:
        d = Fraction(g.vertices[v].y2) - axis
        return 0 if d == 0 else (1 if d > 0 else -1)

    edges = []
    for (u, v), w in g.weights.items():
        drop = False
        for end, other in ((u, v), (v, u)):
            if end in cut_dir and side(other) != 0:
                if cut_dir[end] == 1 and side(other) > 0:
                    drop = True
                if cut_dir[end] == 0 and side(other) < 0:
                    drop = True
        if not drop:
            edges.append((u, v, w))
    return WeightedGraph(g.vertices.values(), edges)


def si_cut(g: WeightedGraph) -> Tuple[WeightedGraph, int]:
    """Cutting procedure along a horizontal symmetry axis that need not be a
    cut set; returns (Si, eta) with M(g) = 2^eta * M(Si).

    Axis vertices alternate a_1, b_1, a_2, b_2, ... from the left; they are
    recolored by the chain rule (copy the left neighbor's color unless an
    axis edge joins them, then flip).  Edges above white a's and black b's
    and below black a's and white b's are cut; axis edges are halved.
    """
    sigma, axis = reflection_involution(g)
    axis_vs = _axis_sorted(g, sigma)
    if len(axis_vs) % 2:
        raise OddAxisCount("odd number of axis vertices")
    eta = len(axis_vs) // 2
    if eta == 0:
        return g, 0
    chain: Dict[int, str] = {axis_vs[0]: "white"}
    for i in range(1, len(axis_vs)):
        prev = chain[axis_vs[i - 1]]
        if g.has_edge(axis_vs[i - 1], axis_vs[i]):
            chain[axis_vs[i]] = "black" if prev == "white" else "white"
        else:
            chain[axis_vs[i]] = prev
    pos_of = {vid: idx for idx, vid in enumerate(axis_vs)}

    def side(v: int) -> int:
        d = Fraction(g.vertices[v].y2) - axis
        return 0 if d == 0 else (1 if d > 0 else -1)

    edges = []
    for (u, v), w in g.weights.items():
        su, sv = side(u), side(v)
        if su == 0 and sv == 0:
            edges.append((u, v, w / 2))
            continue
        drop = False
        for end, s_other in ((u, sv), (v, su)):
            if side(end) != 0:
                continue
            is_a = pos_of[end] % 2 == 0
            col = chain[end]
            cut_up = (is_a and col == "white") or (not is_a and col == "black")
            if cut_up and s_other > 0:
                drop = True
            if not cut_up and s_other < 0:
                drop = True
        if not drop:
            edges.append((u, v, w))
    return WeightedGraph(g.vertices.values(), edges), eta
