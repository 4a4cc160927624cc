"""Constructors for Aztec-rectangle-type graph families.

All families live on an odd-by-odd chessboard with black corners: the AR
family takes the white squares (diagonal adjacency), the OR family the black
squares.  Baseless variants drop the bottom board row, half-column variants
drop the leftmost column.  Trimming removes every other vertex along the left
side; bottom vertices can then be kept or removed by position, matching the
product-formula conventions.

Frame: vertex of board cell (r, c) sits at x2 = c - (N+1), y2 = (M+1) - r, so
the horizontal symmetry axis of AR_{M,N} is y2 = 0 and the vertical one is
x2 = 0.  Adjacent vertices differ by (+-1, +-1); all coordinates are integers
in doubled units.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .graph import Vertex, WeightedGraph

KINDS = ("AR", "OR", "AR_baseless", "AR_halfcol")
TRIMS = (None, "odd", "even")


class InvalidSpec(ValueError):
    pass


class InvalidHoleSet(InvalidSpec):
    pass


class LengthMismatch(ValueError):
    pass


class MergeCollision(ValueError):
    pass


def _parse_half(x) -> int:
    """Accept 3, "3", 2.5, "5/2" and return the doubled integer."""
    if isinstance(x, int):
        return 2 * x
    if isinstance(x, float):
        d = 2 * x
        if d != int(d):
            raise InvalidSpec("parameter %r is not a half-integer" % (x,))
        return int(d)
    if isinstance(x, str):
        if "/" in x:
            num, den = x.split("/")
            if int(den) != 2:
                raise InvalidSpec("parameter %r is not a half-integer" % (x,))
            return int(num)
        return 2 * int(x)
    raise InvalidSpec("cannot parse parameter %r" % (x,))


@dataclass(frozen=True)
class FamilySpec:
    """A trimmed Aztec-rectangle family member.

    m2/n2 are doubled so half-integer parameters stay integral: AR_{5/2,4}
    has m2=5, n2=8.  `bottom` holds the kept bottom positions for AR and
    half-column kinds and the removed ones for OR and baseless kinds.
    """

    kind: str
    m2: int
    n2: int
    trim: Optional[str] = None
    bottom: Tuple[int, ...] = ()
    appended_edges: bool = False
    leftmost_half_weight: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidSpec("unknown kind %r" % (self.kind,))
        if self.trim not in TRIMS:
            raise InvalidSpec("unknown trim %r" % (self.trim,))
        if self.kind in ("AR", "OR") and (self.m2 % 2 or self.n2 % 2):
            raise InvalidSpec("%s requires integer parameters" % self.kind)
        if self.kind == "AR_baseless" and (self.m2 % 2 == 0 or self.n2 % 2):
            raise InvalidSpec("AR_baseless requires m half-integral, n integral")
        if self.kind == "AR_halfcol" and (self.m2 % 2 or self.n2 % 2 == 0):
            raise InvalidSpec("AR_halfcol requires m integral, n half-integral")
        if self.m2 <= 0 or self.n2 <= 0:
            raise InvalidSpec("parameters must be positive")
        bt = tuple(sorted(self.bottom))
        if bt != tuple(self.bottom):
            object.__setattr__(self, "bottom", bt)
        if any(b <= 0 for b in bt) or len(set(bt)) != len(bt):
            raise InvalidSpec("bottom positions must be distinct positive integers")
        if self.leftmost_half_weight and not self.appended_edges:
            raise InvalidSpec("leftmost_half_weight requires appended_edges")

    @classmethod
    def make(cls, kind, m, n, trim=None, bottom=(), appended_edges=False,
             leftmost_half_weight=False) -> "FamilySpec":
        return cls(kind, _parse_half(m), _parse_half(n), trim, tuple(bottom),
                   appended_edges, leftmost_half_weight)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "m": self.m2 // 2 if self.m2 % 2 == 0 else "%d/2" % self.m2,
            "n": self.n2 // 2 if self.n2 % 2 == 0 else "%d/2" % self.n2,
            "trim": self.trim,
            "bottom": list(self.bottom),
            "appended_edges": self.appended_edges,
            "leftmost_half_weight": self.leftmost_half_weight,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "FamilySpec":
        return cls.make(
            obj["kind"], obj["m"], obj["n"], obj.get("trim"),
            obj.get("bottom", ()), obj.get("appended_edges", False),
            obj.get("leftmost_half_weight", False),
        )


# ---------------------------------------------------------------------------
# Board machinery.
# ---------------------------------------------------------------------------

def _board_vertices(cells: Iterable[Tuple[int, int]], M_full: int, N_full: int):
    """Vertices and diagonal edges for a set of board cells."""
    cellset = set(cells)
    order = sorted(cellset)
    ids = {rc: i for i, rc in enumerate(order)}
    verts = [
        Vertex(
            ids[(r, c)],
            c - (N_full + 1),
            (M_full + 1) - r,
            "black" if r % 2 == 0 else "white",
        )
        for (r, c) in order
    ]
    edges = []
    for (r, c) in order:
        for (r2, c2) in ((r + 1, c - 1), (r + 1, c + 1)):
            if (r2, c2) in cellset:
                edges.append((ids[(r, c)], ids[(r2, c2)], Fraction(1)))
    return verts, edges, ids


def _family_cells(spec: FamilySpec) -> Tuple[List[Tuple[int, int]], int, int, int]:
    """Board cells of the untrimmed family plus (M_full, N_full, bottom_row)."""
    if spec.kind == "AR":
        M, N = spec.m2 // 2, spec.n2 // 2
        rows = range(1, 2 * M + 2)
        cols = range(1, 2 * N + 2)
        parity = 1  # white squares: r+c odd
        bottom_row = 2 * M + 1
    elif spec.kind == "OR":
        # black squares; the top board row is all forced away and is omitted
        M, N = spec.m2 // 2, spec.n2 // 2
        rows = range(2, 2 * M + 2)
        cols = range(1, 2 * N + 2)
        parity = 0
        bottom_row = 2 * M + 1
    elif spec.kind == "AR_baseless":
        M, N = (spec.m2 + 1) // 2, spec.n2 // 2
        rows = range(1, 2 * M + 1)
        cols = range(1, 2 * N + 2)
        parity = 1
        bottom_row = 2 * M
    else:  # AR_halfcol
        M, N = spec.m2 // 2, (spec.n2 + 1) // 2
        rows = range(1, 2 * M + 2)
        cols = range(2, 2 * N + 2)
        parity = 1
        bottom_row = 2 * M + 1
    cells = [(r, c) for r in rows for c in cols if (r + c) % 2 == parity]
    return cells, M, N, bottom_row


def _left_side(spec: FamilySpec, cells: Sequence[Tuple[int, int]], bottom_row: int):
    """Left-side cells ordered bottom-up together with their first label."""
    col = min(c for (_, c) in cells)
    side = sorted([rc for rc in cells if rc[1] == col], reverse=True)
    start = 0 if spec.kind == "OR" else 1
    return side, start


def _bottom_label(spec: FamilySpec, c: int) -> int:
    """Label of the bottom vertex in board column c, left to right."""
    if spec.kind == "AR":
        return c // 2
    if spec.kind == "OR":
        return (c - 1) // 2
    if spec.kind == "AR_baseless":
        return (c - 1) // 2  # leftmost corner is 0
    return (c - 2) // 2  # AR_halfcol: leftmost corner is 0


def build_family(spec: FamilySpec) -> WeightedGraph:
    """Realize a family spec as an embedded weighted graph."""
    cells, M, N, bottom_row = _family_cells(spec)
    cellset = set(cells)

    if spec.trim is not None:
        side, start = _left_side(spec, cells, bottom_row)
        want = 1 if spec.trim == "odd" else 0
        for j, rc in enumerate(side):
            if (start + j) % 2 == want:
                cellset.discard(rc)

    bottoms = sorted(rc for rc in cellset if rc[0] == bottom_row)
    if spec.bottom:
        labels = {rc: _bottom_label(spec, rc[1]) for rc in bottoms}
        maxlab = max(labels.values())
        if any(b > maxlab for b in spec.bottom):
            raise InvalidSpec("bottom position exceeds label range 1..%d" % maxlab)
        keep_semantics = spec.kind in ("AR", "AR_halfcol")
        for rc, lab in labels.items():
            if keep_semantics:
                if lab not in spec.bottom:
                    cellset.discard(rc)
            else:
                if lab in spec.bottom or (spec.kind == "AR_baseless"
                                          and spec.trim == "even" and lab == 0):
                    cellset.discard(rc)

    verts, edges, ids = _board_vertices(cellset, M, N)
    g = WeightedGraph(verts, edges)
    if spec.appended_edges:
        g = append_pendant_edges(g, spec.leftmost_half_weight)
    return g


def bottom_attachment_ids(g: WeightedGraph) -> List[int]:
    """Bottommost vertices ordered left to right (attachment convention for
    connected sums).  Degree-1 bottom corners that are forced anyway are
    skipped when they sit strictly left of the others at the same level."""
    ymin = min(v.y2 for v in g.vertices.values())
    row = sorted(
        (v for v in g.vertices.values() if v.y2 == ymin), key=lambda v: v.x2
    )
    return [v.id for v in row]


def append_pendant_edges(g: WeightedGraph, leftmost_half: bool = False) -> WeightedGraph:
    """Append one vertical pendant edge below every bottommost vertex."""
    bots = bottom_attachment_ids(g)
    verts = list(g.vertices.values())
    edges = list(g.edges())
    nid = max(g.vertices) + 1 if g.vertices else 0
    for i, b in enumerate(bots):
        bv = g.vertices[b]
        col = "black" if bv.color == "white" else "white"
        verts.append(Vertex(nid, bv.x2, bv.y2 - 2, col))
        w = Fraction(1, 2) if (leftmost_half and i == 0) else Fraction(1)
        edges.append((b, nid, w))
        nid += 1
    return WeightedGraph(verts, edges)


# ---------------------------------------------------------------------------
# Aztec rectangles with axis holes.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HoledARSpec:
    """Aztec rectangle with vertices removed along the horizontal axis.

    The graph is AR with row parameter 2m or 2m-1 and column parameter 2n or
    2n-1, selected by `case`:

        a: AR_{2m, 2n}      (n >= m,     |S| = n - m)
        b: AR_{2m-1, 2n-1}  (m > n > m/2, |S| = m - n)
        c: AR_{2m-1, 2n}    (m > n > m/2, |S| = m - n - 1)
        d: AR_{2m, 2n-1}    (n > m,      |S| = n - m - 1)

    S lists removed non-center axis labels; the center vertex (label 0), when
    it exists (cases c and d), is always removed for bipartite balance.
    """

    m: int
    n: int
    S: Tuple[int, ...] = ()
    case: str = "a"

    def __post_init__(self):
        if self.case not in "abcd" or len(self.case) != 1:
            raise InvalidSpec("case must be one of a, b, c, d")
        object.__setattr__(self, "S", tuple(sorted(self.S)))
        if any(s <= 0 for s in self.S) or len(set(self.S)) != len(self.S):
            raise InvalidHoleSet("S must hold distinct positive labels")
        m, n, k = self.m, self.n, len(self.S)
        ok = {
            "a": n >= m and k == n - m,
            "b": m > n > m / 2 and k == m - n,
            "c": m > n > m / 2 and k == m - n - 1,
            "d": n > m and k == n - m - 1,
        }[self.case]
        if not ok:
            raise InvalidHoleSet(
                "case %s size constraint violated for (m=%d, n=%d, |S|=%d)"
                % (self.case, m, n, k)
            )

    @property
    def rows(self) -> int:
        return 2 * self.m - (1 if self.case in "bc" else 0)

    @property
    def cols(self) -> int:
        return 2 * self.n - (1 if self.case in "bd" else 0)

    def to_json(self) -> dict:
        return {"case": self.case, "m": self.m, "n": self.n, "S": list(self.S)}

    @classmethod
    def from_json(cls, obj: dict) -> "HoledARSpec":
        return cls(obj["m"], obj["n"], tuple(obj.get("S", ())), obj.get("case", "a"))


def _ar_axis_labels(g: WeightedGraph) -> Dict[int, int]:
    """Distance-rank labels of the vertices on the horizontal axis y2 = 0."""
    axis = sorted(
        (v for v in g.vertices.values() if v.y2 == 0), key=lambda v: abs(v.x2)
    )
    labels: Dict[int, int] = {}
    ranks: Dict[int, int] = {}
    nxt = 0 if axis and axis[0].x2 == 0 else 1
    for v in axis:
        d = abs(v.x2)
        if d not in ranks:
            ranks[d] = nxt
            nxt += 1
        labels[v.id] = ranks[d]
    return labels


def build_holed_AR(spec: HoledARSpec) -> WeightedGraph:
    """AR rows x cols graph minus the S-labeled axis vertex pairs (and the
    center vertex when present); remaining axis vertices keep their labels."""
    base = build_family(FamilySpec("AR", 2 * spec.rows, 2 * spec.cols))
    labels = _ar_axis_labels(base)
    top = max(labels.values()) if labels else 0
    if any(s > top for s in spec.S):
        raise InvalidHoleSet("label exceeds axis extent %d" % top)
    drop = [i for i, lab in labels.items() if lab in spec.S or lab == 0]
    g = base.without_vertices(drop)
    relabeled = [
        Vertex(v.id, v.x2, v.y2, v.color, labels.get(v.id))
        for v in g.vertices.values()
    ]
    return WeightedGraph(relabeled, list(g.edges()))


def surviving_axis_labels(spec: HoledARSpec) -> Tuple[int, ...]:
    top = spec.n if spec.case in "abc" else spec.n - 1
    return tuple(x for x in range(1, top + 1) if x not in spec.S)


def axis_label_split(spec: HoledARSpec) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Surviving axis labels split by the parity of their sorted position."""
    s = surviving_axis_labels(spec)
    return s[0::2], s[1::2]


def aztec_diamond(n: int) -> WeightedGraph:
    """The order-n Aztec diamond graph AD_n = AR_{n,n}."""
    return build_family(FamilySpec("AR", 2 * n, 2 * n))


# ---------------------------------------------------------------------------
# Connected sums.
# ---------------------------------------------------------------------------

def connected_sum(
    g: WeightedGraph,
    g2: WeightedGraph,
    v_list: Sequence[int],
    v2_list: Sequence[int],
) -> WeightedGraph:
    """Glue g2 onto g by identifying v2_list[i] with v_list[i].

    Vertices of g2 are renumbered above g's ids; identified vertices keep g's
    position and color.  Creating a parallel edge raises MergeCollision.
    """
    if len(v_list) != len(v2_list):
        raise LengthMismatch("attachment lists differ in length")
    if len(set(v_list)) != len(v_list) or len(set(v2_list)) != len(v2_list):
        raise LengthMismatch("attachment lists must be duplicate-free")
    offset = (max(g.vertices) + 1 if g.vertices else 0)
    ident = {v2: v1 for v1, v2 in zip(v_list, v2_list)}

    def new_id(old: int) -> int:
        return ident[old] if old in ident else old + offset

    verts = list(g.vertices.values())
    for v in g2.vertices.values():
        if v.id in ident:
            continue
        verts.append(Vertex(new_id(v.id), v.x2, v.y2, v.color, v.label))
    edges = [(u, v, w) for (u, v, w) in g.edges()]
    seen = {(u, v) for (u, v) in g.weights}
    for (u, v, w) in g2.edges():
        nu, nv = new_id(u), new_id(v)
        key = (nu, nv) if nu < nv else (nv, nu)
        if key in seen:
            raise MergeCollision("identification creates parallel edge %r" % (key,))
        seen.add(key)
        edges.append((nu, nv, w))
    return WeightedGraph(verts, edges)
