"""Quivers with relations over Q(zeta_c) and the builders used downstream.

Paths are stored in traversal order: ``(a1, a2, ..., ak)`` walks ``a1``
first.  The algebra product follows composition, so ``p * q`` is "``q`` then
``p``" and ``e_j * a * e_i = a`` for an arrow ``a: i -> j``.  Left modules are
therefore representations of the quiver, and ``A e_i`` is spanned by the
paths starting at ``i``.

Coefficients live in Q(zeta_c); the emitted algebra is its restriction of
scalars to Q, with basis elements ``path * zeta^a`` for ``a < phi(c)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DuplicatePoints, MalformedInput, NotFiniteDimensional, UnknownType
from .exact_linear import CyclotomicElem, EchelonBasis, as_fraction, as_int, format_rational, totient
from .findim_algebra import AlgebraPresentation

Path = tuple  # arrow indices in traversal order


@dataclass(frozen=True)
class Arrow:
    source: int
    target: int
    label: str


@dataclass
class Quiver:
    vertices: int
    arrows: list[Arrow]

    def __post_init__(self):
        labels = [a.label for a in self.arrows]
        if len(set(labels)) != len(labels):
            raise MalformedInput("arrow labels must be unique")
        for a in self.arrows:
            if not (0 <= a.source < self.vertices and 0 <= a.target < self.vertices):
                raise MalformedInput(f"arrow {a.label} has an endpoint out of range")

    def arrow_index(self, label: str) -> int:
        for i, a in enumerate(self.arrows):
            if a.label == label:
                return i
        raise MalformedInput(f"unknown arrow {label!r}")

    def is_acyclic(self) -> bool:
        indeg = [0] * self.vertices
        for a in self.arrows:
            indeg[a.target] += 1
        ready = [v for v in range(self.vertices) if indeg[v] == 0]
        seen = 0
        while ready:
            v = ready.pop()
            seen += 1
            for a in self.arrows:
                if a.source == v:
                    indeg[a.target] -= 1
                    if indeg[a.target] == 0:
                        ready.append(a.target)
        return seen == self.vertices


@dataclass
class RelationElement:
    """A formal combination sum c * path of parallel nontrivial paths."""

    terms: list  # (coefficient: CyclotomicElem | Fraction, path labels tuple)

    def as_index_terms(self, quiver: Quiver, conductor: int):
        out = []
        ends = set()
        for coeff, labels in self.terms:
            if not labels:
                raise MalformedInput("relations use nontrivial paths only")
            path = tuple(quiver.arrow_index(lab) for lab in labels)
            for x, y in zip(path, path[1:]):
                if quiver.arrows[x].target != quiver.arrows[y].source:
                    raise MalformedInput(f"path {labels} is not composable")
            ends.add((quiver.arrows[path[0]].source, quiver.arrows[path[-1]].target))
            c = _as_cyclotomic(coeff, conductor)
            if not c.is_zero():
                out.append((c, path))
        if len(ends) > 1:
            raise MalformedInput("relation mixes non-parallel paths")
        if not out:
            raise MalformedInput("relation has no nonzero coefficient")
        return out


def _as_cyclotomic(value, conductor: int) -> CyclotomicElem:
    if isinstance(value, CyclotomicElem):
        if value.conductor != conductor:
            raise MalformedInput("relation coefficient has the wrong conductor")
        return value
    if isinstance(value, (list, tuple)):
        return CyclotomicElem(conductor, [as_fraction(x) for x in value])
    return CyclotomicElem.rational(conductor, as_fraction(value))


@dataclass
class QuiverAlgebraSpec:
    quiver: Quiver
    relations: list = field(default_factory=list)
    conductor: int = 1
    kill_length: int | None = None  # all paths of this length vanish
    length_bound: int | None = None
    name: str = ""

    def bound(self) -> int:
        if self.length_bound is not None:
            return self.length_bound
        base = self.quiver.vertices + 4
        if self.kill_length is not None:
            base = max(base, self.kill_length)
        return base

    def to_json(self) -> dict:
        return {
            "schema": "hecurve/1",
            "vertices": self.quiver.vertices,
            "arrows": [{"src": a.source, "dst": a.target, "label": a.label} for a in self.quiver.arrows],
            "relations": [
                {
                    "terms": [
                        {"coeff": [format_rational(x) for x in _as_cyclotomic(c, self.conductor).coeffs],
                         "path": list(p)}
                        for c, p in rel.terms
                    ]
                }
                for rel in self.relations
            ],
            "conductor": self.conductor,
            "kill_length": self.kill_length,
        }

    @classmethod
    def from_json(cls, data: dict) -> "QuiverAlgebraSpec":
        try:
            quiver = Quiver(
                as_int(data["vertices"]),
                [Arrow(as_int(a["src"]), as_int(a["dst"]), str(a["label"])) for a in data["arrows"]],
            )
            conductor = as_int(data.get("conductor", 1))
            rels = [
                RelationElement([(t["coeff"], tuple(t["path"])) for t in r["terms"]])
                for r in data.get("relations", [])
            ]
            return cls(quiver, rels, conductor, data.get("kill_length"), data.get("length_bound"),
                       data.get("name", ""))
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"bad quiver JSON: {exc}") from exc


# ---------------------------------------------------------------------------
# basis enumeration


@dataclass
class QuiverBasis:
    spec: QuiverAlgebraSpec
    paths: list  # all (start, path) up to the bound, in column order
    basis_paths: list  # surviving (start, path)
    ideal: EchelonBasis
    phi: int
    index_of: dict

    @property
    def dim(self) -> int:
        return len(self.basis_paths) * self.phi


def _enumerate_paths(quiver: Quiver, max_len: int) -> list:
    out = [(v, ()) for v in range(quiver.vertices)]
    frontier = list(out)
    for _ in range(max_len):
        nxt = []
        for start, path in frontier:
            end = quiver.arrows[path[-1]].target if path else start
            for k, a in enumerate(quiver.arrows):
                if a.source == end:
                    nxt.append((start, path + (k,)))
        out.extend(nxt)
        frontier = nxt
        if not frontier:
            break
    return out


def _sort_key(quiver: Quiver, item):
    start, path = item
    # longest paths first so they become pivots and short paths survive
    return (-len(path), start, tuple(quiver.arrows[k].label for k in path))


def enumerate_basis(spec: QuiverAlgebraSpec) -> QuiverBasis:
    """Paths modulo the two-sided ideal of the relations (plus optional length cut)."""
    quiver = spec.quiver
    L = spec.bound()
    phi = totient(spec.conductor)
    paths = sorted(_enumerate_paths(quiver, L + 1), key=lambda it: _sort_key(quiver, it))
    index_of = {item: n for n, item in enumerate(paths)}
    by_end: dict = {}
    by_start: dict = {}
    for item in paths:
        start, path = item
        end = quiver.arrows[path[-1]].target if path else start
        by_start.setdefault(start, []).append(item)
        by_end.setdefault(end, []).append(item)

    rels = [r.as_index_terms(quiver, spec.conductor) for r in spec.relations]
    if spec.kill_length is not None:
        one = CyclotomicElem.one(spec.conductor)
        for start, path in paths:
            if len(path) == spec.kill_length:
                rels.append([(one, path)])

    full = EchelonBasis()
    truncated = EchelonBasis()
    zetas = [CyclotomicElem.zeta(spec.conductor, a) for a in range(phi)]
    for rel in rels:
        r_start = quiver.arrows[rel[0][1][0]].source
        r_end = quiver.arrows[rel[0][1][-1]].target
        rel_lens = [len(p) for _, p in rel]
        for _, before in by_end.get(r_start, []):
            for _, after in by_start.get(r_end, []):
                lens = [len(before) + n + len(after) for n in rel_lens]
                if min(lens) > L + 1:
                    continue
                for zeta in zetas:
                    vec_full: dict = {}
                    vec_cut: dict = {}
                    for coeff, p in rel:
                        whole = before + p + after
                        c = coeff * zeta
                        start = quiver.arrows[whole[0]].source
                        key = index_of.get((start, whole))
                        for a, x in enumerate(c.coeffs):
                            if not x:
                                continue
                            if key is not None:
                                vec_full[key * phi + a] = vec_full.get(key * phi + a, 0) + x
                                if len(whole) <= L:
                                    vec_cut[key * phi + a] = vec_cut.get(key * phi + a, 0) + x
                    if max(lens) <= L + 1:
                        full.add(vec_full)
                    truncated.add(vec_cut)
    # every path of length L+1 must already lie in the honest ideal
    for item in paths:
        if len(item[1]) == L + 1:
            key = index_of[item]
            for a in range(phi):
                if not full.contains({key * phi + a: 1}):
                    raise NotFiniteDimensional(
                        f"paths of length {L + 1} survive; algebra may be infinite-dimensional",
                        bound=L,
                    )
    # quotient of paths of length <= L by the truncated generators
    for item in paths:
        if len(item[1]) > L:
            key = index_of[item]
            for a in range(phi):
                truncated.add({key * phi + a: 1})
    survivors = []
    for item in paths:
        key = index_of[item]
        if key * phi not in truncated.rows:
            survivors.append(item)
    survivors.sort(key=lambda it: (len(it[1]), it[0], tuple(quiver.arrows[k].label for k in it[1])))
    return QuiverBasis(spec, paths, survivors, truncated, phi, index_of)


def path_label(quiver: Quiver, item) -> str:
    start, path = item
    if not path:
        return f"e{start}"
    return "*".join(quiver.arrows[k].label for k in reversed(path))


def to_algebra(spec: QuiverAlgebraSpec) -> AlgebraPresentation:
    """Structure constants of the quotient path algebra, restricted to Q."""
    qb = enumerate_basis(spec)
    quiver, phi, n = spec.quiver, qb.phi, spec.conductor
    basis_index = {}
    labels = []
    for m, item in enumerate(qb.basis_paths):
        for a in range(phi):
            basis_index[(qb.index_of[item], a)] = m * phi + a
            lab = path_label(quiver, item)
            labels.append(lab if a == 0 else f"{lab}.z^{a}")
    def end_of(item):
        start, path = item
        return quiver.arrows[path[-1]].target if path else start

    L = spec.bound()
    products = {}
    zeta = [CyclotomicElem.zeta(n, a) for a in range(n)]
    for m1, left in enumerate(qb.basis_paths):
        for m2, right in enumerate(qb.basis_paths):
            # left * right = right then left
            if end_of(right) != left[0]:
                continue
            whole = right[1] + left[1]
            start = right[0]
            if len(whole) > L:
                continue
            key = qb.index_of[(start, whole)]
            for a in range(phi):
                for b in range(phi):
                    c = zeta[(a + b) % n]
                    raw = {key * phi + k: x for k, x in enumerate(c.coeffs) if x}
                    res = qb.ideal.residue(raw)
                    vec = {}
                    for col, x in res.items():
                        vec[basis_index[(col // phi, col % phi)]] = x
                    if vec:
                        products[(m1 * phi + a, m2 * phi + b)] = vec
    idems = []
    for v in range(quiver.vertices):
        k = qb.index_of[(v, ())]
        idx = basis_index.get((k, 0))
        if idx is None:
            raise NotFiniteDimensional(f"vertex {v} idempotent lies in the ideal")
        idems.append({idx: Fraction(1)})
    unit = {}
    for e in idems:
        unit.update(e)
    return AlgebraPresentation(len(labels), products, unit, idems, labels, name=spec.name)


def path_algebra_dimension(quiver: Quiver) -> int:
    """Total number of paths of an acyclic quiver (dimension without relations)."""
    if not quiver.is_acyclic():
        raise NotFiniteDimensional("quiver has an oriented cycle")
    return len(_enumerate_paths(quiver, quiver.vertices))


# ---------------------------------------------------------------------------
# builders


def _point_key(point, conductor: int):
    a = _as_cyclotomic(point[0], conductor)
    b = _as_cyclotomic(point[1], conductor)
    if a.is_zero() and b.is_zero():
        raise MalformedInput("(0:0) is not a point of the projective line")
    if not b.is_zero():
        return (a / b, CyclotomicElem.one(conductor))
    return (CyclotomicElem.one(conductor), CyclotomicElem.zero(conductor))


def _check_points(points, conductor: int) -> list:
    normalised = [_point_key(p, conductor) for p in points]
    seen = set()
    for key in normalised:
        if key in seen:
            raise DuplicatePoints("points of the projective line must be pairwise distinct")
        seen.add(key)
    return [(_as_cyclotomic(p[0], conductor), _as_cyclotomic(p[1], conductor)) for p in points]


def canonical_quiver(points: Sequence, weights: Sequence[int], conductor: int = 1) -> QuiverAlgebraSpec:
    """Canonical algebra: source 0 and sink 1 joined by u, v and one arm per point.

    The arm of a weight-w point has w arrows ``d{i}_1 .. d{i}_w`` through
    ``w - 1`` interior vertices and satisfies ``arm = beta*u - alpha*v``.
    Weights must be at least 2.
    """
    if len(points) != len(weights):
        raise MalformedInput("one weight per point")
    if any(w < 2 for w in weights):
        raise MalformedInput("canonical weights must be at least 2")
    pts = _check_points(points, conductor)
    arrows = [Arrow(0, 1, "u"), Arrow(0, 1, "v")]
    relations = []
    next_vertex = 2
    for i, (w, (alpha, beta)) in enumerate(zip(weights, pts), start=1):
        chain = [0] + list(range(next_vertex, next_vertex + w - 1)) + [1]
        next_vertex += w - 1
        labels = []
        for k in range(w):
            lab = f"d{i}_{k + 1}"
            arrows.append(Arrow(chain[k], chain[k + 1], lab))
            labels.append(lab)
        relations.append(
            RelationElement([(CyclotomicElem.one(conductor), tuple(labels)), (-beta, ("u",)), (alpha, ("v",))])
        )
    name = "canonical(" + ",".join(map(str, weights)) + ")"
    return QuiverAlgebraSpec(Quiver(next_vertex, arrows), relations, conductor, name=name)


def squid_quiver(points: Sequence, weights: Sequence[int], conductor: int = 1) -> QuiverAlgebraSpec:
    """Squid algebra: Kronecker head a -(u,v)-> b and arms of weight-1 arrows out of b.

    Vertex 0 is the Kronecker source ``a``, vertex 1 the Kronecker sink ``b``;
    arm ``i`` then occupies the next ``weight_i - 1`` vertices from the inside
    out.  Relation: ``c{i}_1 (beta u - alpha v) = 0``.  A weight of 1 adds no arm.
    """
    if len(points) != len(weights):
        raise MalformedInput("one weight per point")
    if any(w < 1 for w in weights):
        raise MalformedInput("weights must be positive")
    pts = _check_points(points, conductor)
    arrows = [Arrow(0, 1, "u"), Arrow(0, 1, "v")]
    relations = []
    next_vertex = 2
    for i, (w, (alpha, beta)) in enumerate(zip(weights, pts), start=1):
        if w == 1:
            continue
        chain = [1] + list(range(next_vertex, next_vertex + w - 1))
        next_vertex += w - 1
        for k in range(w - 1):
            arrows.append(Arrow(chain[k], chain[k + 1], f"c{i}_{k + 1}"))
        first = f"c{i}_1"
        relations.append(RelationElement([(beta, ("u", first)), (-alpha, ("v", first))]))
    name = "squid(" + ",".join(map(str, weights)) + ")"
    return QuiverAlgebraSpec(Quiver(next_vertex, arrows), relations, conductor, name=name)


def squid_block_order(weights: Sequence[int]) -> list[int]:
    """Squid-quiver vertices listed in the block order of the block-matrix squid.

    Block order: points in input order, each arm from its outermost vertex
    inwards, then the Kronecker sink, then the Kronecker source.
    """
    order = []
    next_vertex = 2
    for w in weights:
        if w == 1:
            continue
        arm = list(range(next_vertex, next_vertex + w - 1))
        next_vertex += w - 1
        order.extend(reversed(arm))
    return order + [1, 0]


def standard_points(count: int, lam=2) -> list:
    """(1:0), (0:1), (1:1), (lam:1), then (k:1) for further points."""
    base = [(1, 0), (0, 1), (1, 1), (as_fraction(lam), 1)]
    extra = [(k, 1) for k in range(3, 3 + max(0, count - 4)) if k != as_fraction(lam)]
    pts = (base + extra)[:count]
    while len(pts) < count:  # pragma: no cover - only reached for unusual lam
        pts.append((len(pts) + 10, 1))
    return pts


def cyclic_quiver(n: int, kill_length: int, conductor: int = 1) -> QuiverAlgebraSpec:
    """Oriented n-cycle a_k: k -> k+1 (mod n) with all paths of length kill_length killed."""
    arrows = [Arrow(k, (k + 1) % n, f"a{k}") for k in range(n)]
    return QuiverAlgebraSpec(Quiver(n, arrows), [], conductor, kill_length=kill_length,
                             name=f"cyclic{n}")


def linear_quiver(n: int) -> QuiverAlgebraSpec:
    arrows = [Arrow(k, k + 1, f"a{k}") for k in range(n - 1)]
    return QuiverAlgebraSpec(Quiver(n, arrows), name=f"A{n}")


def kronecker_quiver(conductor: int = 1) -> QuiverAlgebraSpec:
    return QuiverAlgebraSpec(Quiver(2, [Arrow(0, 1, "u"), Arrow(0, 1, "v")]), conductor=conductor,
                             name="kronecker")


_TYPE_RE = re.compile(r"^\s*([ADE])\s*~\s*\(?\s*([0-9]+)\s*(?:,\s*([0-9]+)\s*)?\)?\s*$")


def parse_euclidean_type(text: str):
    m = _TYPE_RE.match(text)
    if not m:
        raise UnknownType(f"unknown Euclidean type {text!r}")
    letter, first = m.group(1), int(m.group(2))
    second = None if m.group(3) is None else int(m.group(3))
    if letter == "A":
        if second is None or first < 1 or second < 1:
            raise UnknownType("A~ needs two positive path lengths, e.g. A~(2,3)")
        return ("A", first, int(second))
    if second is not None:
        raise UnknownType(f"{letter}~ takes a single index")
    if letter == "D" and first >= 4:
        return ("D", first)
    if letter == "E" and first in (6, 7, 8):
        return ("E", first)
    raise UnknownType(f"unknown Euclidean type {text!r}")


def _tree_spec(edges: list, vertices: int, name: str, toward: int, inward: bool) -> QuiverAlgebraSpec:
    """Orient a tree toward (or away from) a root vertex."""
    adj: dict = {v: [] for v in range(vertices)}
    for x, y in edges:
        adj[x].append(y)
        adj[y].append(x)
    arrows = []
    seen = {toward}
    stack = [toward]
    while stack:
        v = stack.pop()
        for w in sorted(adj[v]):
            if w in seen:
                continue
            seen.add(w)
            stack.append(w)
            src, dst = (w, v) if inward else (v, w)
            arrows.append(Arrow(src, dst, f"x{src}_{dst}"))
    arrows.sort(key=lambda a: (a.source, a.target))
    return QuiverAlgebraSpec(Quiver(vertices, arrows), name=name)


def _star(arms: Sequence[int]):
    """Star with a center 0 and arms of the given edge counts."""
    edges, nxt = [], 1
    for length in arms:
        prev = 0
        for _ in range(length):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    return edges, nxt


def euclidean_quiver(kind: str, orientation: str = "inward") -> QuiverAlgebraSpec:
    """Extended Dynkin quiver with arrows toward ("inward") or away from a branch vertex.

    For A~(p,q), vertex 0 is a source (inward) joined to the sink by paths
    of lengths p and q; "outward" reverses every arrow.
    """
    if orientation not in ("inward", "outward"):
        raise UnknownType(f"orientation must be inward or outward, not {orientation!r}")
    inward = orientation == "inward"
    parsed = parse_euclidean_type(kind)
    if parsed[0] == "A":
        p, q = parsed[1], parsed[2]
        n = p + q
        sink = p
        top = [0] + list(range(1, p)) + [sink]
        bottom = [0] + list(range(p + 1, n)) + [sink]
        arrows = []
        for chain, tag in ((top, "p"), (bottom, "q")):
            for k in range(len(chain) - 1):
                s, t = chain[k], chain[k + 1]
                if not inward:
                    s, t = t, s
                arrows.append(Arrow(s, t, f"{tag}{k}"))
        return QuiverAlgebraSpec(Quiver(n, arrows), name=f"A~({p},{q})")
    if parsed[0] == "D":
        n = parsed[1]
        # chain 0 .. n-4 with two leaves on each end (a star when n = 4)
        last = n - 4
        edges = [(k, k + 1) for k in range(last)]
        edges += [(0, n - 3), (0, n - 2), (last, n - 1), (last, n)]
        return _tree_spec(edges, n + 1, f"D~{n}", 0, inward)
    arms = {6: [2, 2, 2], 7: [1, 3, 3], 8: [1, 2, 5]}[parsed[1]]
    edges, count = _star(arms)
    return _tree_spec(edges, count, f"E~{parsed[1]}", 0, inward)


def euclidean_for_triple(weights: Sequence[int]) -> str:
    """Extended Dynkin type whose path algebra matches the squid of these weights."""
    ws = sorted(w for w in weights if w > 1)
    if len(ws) <= 2:
        full = sorted(list(weights) + [1, 1])[-2:]
        return f"A~({full[0]},{full[1]})"
    if len(ws) == 3 and ws[0] == 2 and ws[1] == 2:
        return f"D~{ws[2] + 2}"
    table = {(2, 3, 3): "E~6", (2, 3, 4): "E~7", (2, 3, 5): "E~8"}
    key = tuple(ws)
    if key not in table:
        raise UnknownType(f"weights {tuple(weights)} are not of Dynkin type")
    return table[key]
