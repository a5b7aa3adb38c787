"""Block-matrix squid algebras over tame bimodule bases.

The base Lambda = [[f, w], [0, g]] is realised over Q.  Its left modules are
pairs (U_g, U_f) with a structure map w (x) U_g -> U_f; for Kronecker bases
these are representations U_a => U_b with a = source, b = sink.

For every special point the regular simple U_i is a concrete matrix module.
With D_i = End(U_i)^op and V_i = Hom_Q(U_i, Q) (row vectors: endomorphisms
act by right multiplication, Lambda by its action matrices) the algebra is

    [ T_1          V_1 ]
    [     ...      ... ]        T_i = upper triangular m_i x m_i over D_i
    [         T_t  V_t ]        m_i = weight_i - 1
    [ 0   ... 0  Lambda]

Distinguished idempotents follow the block order: every arm from its top row
down, then the Lambda idempotents for f (Kronecker sink) and g (source).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Sequence

from .errors import (
    DuplicatePoints,
    EndNotDivision,
    MalformedInput,
    NotDivision,
    UnknownKind,
    UnsupportedResidue,
    WrongEndDimension,
)
from .exact_linear import (
    CyclotomicElem,
    EchelonBasis,
    PolyQ,
    QuaternionElem,
    as_fraction,
    as_int,
    conductor_lift,
    format_rational,
    mat_mul,
    quaternion_is_division,
    totient,
)
from .findim_algebra import (
    AlgebraPresentation,
    InvariantReport,
    ModulePresentation,
    hom_space,
    invariant_report,
    is_division_algebra,
    permute_idempotents,
)
from .quiver_relations import (
    QuiverAlgebraSpec,
    canonical_quiver,
    enumerate_basis,
    kronecker_quiver,
    squid_block_order,
    squid_quiver,
    to_algebra,
)

BASE_KINDS = ("alg_closed", "re", "co", "qt")


# ---------------------------------------------------------------------------
# bases


@dataclass
class TameBimoduleBase:
    kind: str
    algebra: AlgebraPresentation
    conductor: int = 1
    quaternion: tuple | None = None
    quiver_spec: QuiverAlgebraSpec | None = None

    @property
    def sink_idempotent(self) -> dict:
        return self.algebra.idempotents[1]

    @property
    def source_idempotent(self) -> dict:
        return self.algebra.idempotents[0]


def quaternion_algebra(a=-1, b=-1) -> AlgebraPresentation:
    """(a, b)_Q on the basis 1, i, j, k; a division algebra or M_2(Q)."""
    a, b = as_fraction(a), as_fraction(b)
    quat = [QuaternionElem.basis(a, b, k) for k in range(4)]
    products = {}
    for k in range(4):
        for l in range(4):
            prod = quat[k] * quat[l]
            products[(k, l)] = {m: c for m, c in enumerate(prod.coords) if c}
    return AlgebraPresentation(4, products, {0: Fraction(1)}, [{0: Fraction(1)}], list("1ijk"),
                               name=f"({a},{b})_Q")


def quaternion_base_algebra(a=-1, b=-1) -> AlgebraPresentation:
    """[[Q, H], [0, H]] with H = (a, b)_Q.

    Basis: 0 = f unit, 1..4 = w in the quaternion basis 1, i, j, k, 5..8 = g.
    Idempotents are listed as [e_g, e_f] to mirror [source, sink].
    """
    a, b = as_fraction(a), as_fraction(b)
    quat = [QuaternionElem.basis(a, b, k) for k in range(4)]

    def vec(q: QuaternionElem, offset: int) -> dict:
        return {offset + k: c for k, c in enumerate(q.coords) if c}

    products = {(0, 0): {0: Fraction(1)}}
    for k in range(4):
        products[(0, 1 + k)] = {1 + k: Fraction(1)}
        for l in range(4):
            products[(1 + k, 5 + l)] = vec(quat[k] * quat[l], 1)
            products[(5 + k, 5 + l)] = vec(quat[k] * quat[l], 5)
    labels = ["f"] + [f"w.{n}" for n in "1ijk"] + [f"g.{n}" for n in "1ijk"]
    e_f, e_g = {0: Fraction(1)}, {5: Fraction(1)}
    return AlgebraPresentation(9, products, {0: Fraction(1), 5: Fraction(1)}, [e_g, e_f], labels,
                               name=f"Lambda_qt({a},{b})")


def base_bimodule(kind: str, quaternion=(-1, -1)) -> TameBimoduleBase:
    if kind in ("alg_closed", "re"):
        spec = kronecker_quiver(1)
        return TameBimoduleBase(kind, to_algebra(spec), 1, quiver_spec=spec)
    if kind == "co":
        spec = kronecker_quiver(4)
        return TameBimoduleBase(kind, to_algebra(spec), 4, quiver_spec=spec)
    if kind == "qt":
        a, b = (as_fraction(x) for x in quaternion)
        if not quaternion_is_division(a, b):
            raise NotDivision(f"quaternion algebra ({a},{b}) splits over Q")
        return TameBimoduleBase(kind, quaternion_base_algebra(a, b), 1, quaternion=(a, b))
    raise UnknownKind(f"unknown base kind {kind!r}")


# ---------------------------------------------------------------------------
# modules


def realify(x: CyclotomicElem) -> list[list[Fraction]]:
    return x.mult_matrix()


def quiver_representation(spec: QuiverAlgebraSpec, vertex_dims: Sequence[int], arrow_maps: dict,
                          label: str = "") -> ModulePresentation:
    """Restriction to Q of an F-representation (F = Q(zeta_c)) of a quiver algebra.

    ``arrow_maps[label]`` is an F-matrix (rows = target dim, columns = source dim).
    Coordinates: vertices in order, each F-coordinate expanded along 1, zeta, ...
    """
    c = spec.conductor
    phi = totient(c)
    A = to_algebra(spec)
    qb = enumerate_basis(spec)
    quiver = spec.quiver
    offsets, off = [], 0
    for d in vertex_dims:
        offsets.append(off)
        off += d * phi
    total = off
    lifted = {}
    for arrow in quiver.arrows:
        if arrow.label not in arrow_maps:
            raise MalformedInput(f"no matrix for arrow {arrow.label}")
        m = arrow_maps[arrow.label]
        rows, cols = vertex_dims[arrow.target], vertex_dims[arrow.source]
        if len(m) != rows or any(len(r) != cols for r in m):
            raise MalformedInput(f"arrow {arrow.label} has the wrong shape")
        lifted[arrow.label] = [[_cyc(x, c) for x in r] for r in m]
    actions = []
    for start, path in qb.basis_paths:
        mat = [[CyclotomicElem.one(c) if i == j else CyclotomicElem.zero(c)
                for j in range(vertex_dims[start])] for i in range(vertex_dims[start])]
        end = start
        for k in path:
            arrow = quiver.arrows[k]
            mat = _cyc_mat_mul(lifted[arrow.label], mat)
            end = arrow.target
        for a in range(phi):
            z = CyclotomicElem.zeta(c, a)
            big = [[Fraction(0)] * total for _ in range(total)]
            for i, row in enumerate(mat):
                for j, x in enumerate(row):
                    if x.is_zero():
                        continue
                    block = realify(x * z)
                    for r in range(phi):
                        for s in range(phi):
                            if block[r][s]:
                                big[offsets[end] + i * phi + r][offsets[start] + j * phi + s] = block[r][s]
            actions.append(big)
    module = ModulePresentation(A, total, actions, label)
    module.validate()
    return module


def _cyc(x, c: int) -> CyclotomicElem:
    if isinstance(x, CyclotomicElem):
        return conductor_lift(x, c) if x.conductor != c else x
    return CyclotomicElem.rational(c, as_fraction(x))


def _cyc_mat_mul(a, b):
    c = a[0][0].conductor if a and a[0] else b[0][0].conductor
    out = []
    for row in a:
        new = []
        for j in range(len(b[0]) if b else 0):
            acc = CyclotomicElem.zero(c)
            for k, x in enumerate(row):
                if not x.is_zero() and not b[k][j].is_zero():
                    acc = acc + x * b[k][j]
            new.append(acc)
        out.append(new)
    return out


def companion_matrix(poly: PolyQ) -> list[list[Fraction]]:
    """Companion of a monic polynomial: multiplication by t on Q[t]/(poly)."""
    d = poly.degree
    lead = poly.coeffs[-1]
    coeffs = [c / lead for c in poly.coeffs]
    m = [[Fraction(0)] * d for _ in range(d)]
    for i in range(1, d):
        m[i][i - 1] = Fraction(1)
    for i in range(d):
        m[i][d - 1] = -coeffs[i]
    return m


def qt_module_from_subspace(base: TameBimoduleBase, subspace: Sequence[Sequence], label: str = "") -> dict:
    """Action matrices of U = (U_g = H, U_f = H / W, w (x) x -> class of w x).

    Returns the JSON form used by the fixture file.
    """
    a, b = base.quaternion
    quat = [QuaternionElem.basis(a, b, k) for k in range(4)]
    W = EchelonBasis({k: as_fraction(x) for k, x in enumerate(v) if as_fraction(x)} for v in subspace)
    free = [k for k in range(4) if k not in W.pivots]
    n_f = len(free)
    dim = 4 + n_f

    def left_mult(q: QuaternionElem):
        cols = [(q * quat[k]).coords for k in range(4)]
        return [[cols[c][r] for c in range(4)] for r in range(4)]

    def project(coords) -> list:
        res = W.residue({k: x for k, x in enumerate(coords) if x})
        return [res.get(k, Fraction(0)) for k in free]

    actions = []
    zero = lambda: [[Fraction(0)] * dim for _ in range(dim)]  # noqa: E731
    m = zero()
    for r in range(n_f):
        m[4 + r][4 + r] = Fraction(1)
    actions.append(m)  # f
    for k in range(4):  # w_k: U_g -> U_f
        m = zero()
        for col in range(4):
            image = project((quat[k] * quat[col]).coords)
            for r, x in enumerate(image):
                m[4 + r][col] = x
        actions.append(m)
    for k in range(4):  # g_k on U_g
        m = zero()
        L = left_mult(quat[k])
        for r in range(4):
            for col in range(4):
                m[r][col] = L[r][col]
        actions.append(m)
    return {
        "label": label,
        "dim": dim,
        "actions": [[[format_rational(x) for x in row] for row in mat] for mat in actions],
    }


def module_from_fixture(base: TameBimoduleBase, data: dict) -> ModulePresentation:
    try:
        dim = as_int(data["dim"])
        actions = [[[as_fraction(x) for x in row] for row in mat] for mat in data["actions"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad module fixture: {exc}") from exc
    module = ModulePresentation(base.algebra, dim, actions, data.get("label", ""))
    module.validate()
    return module


def load_qt_fixtures() -> dict:
    text = resources.files("hecurve").joinpath("data/qt_points.json").read_text(encoding="utf-8")
    return json.loads(text)


# ---------------------------------------------------------------------------
# point data


@dataclass
class PointDatum:
    label: str
    weight: int
    module: ModulePresentation
    end_dim: int
    bar: bool = False
    coords: tuple | None = None  # rational or F-rational point (alpha : beta)
    residue: str = "rational"
    end_basis: list = field(default_factory=list)  # End(U) basis matrices

    @property
    def arm_length(self) -> int:
        return self.weight - 1


def _end_basis(module: ModulePresentation) -> list:
    mats = hom_space(module, module)
    flat = [{r * module.dim + c: x for r, row in enumerate(X) for c, x in enumerate(row) if x} for X in mats]
    ech = EchelonBasis(flat)
    out = []
    for vec in ech.basis():
        X = [[Fraction(0)] * module.dim for _ in range(module.dim)]
        for idx, v in vec.items():
            X[idx // module.dim][idx % module.dim] = v
        out.append(X)
    return out, ech


def residue_algebra(datum: PointDatum) -> AlgebraPresentation:
    """D = End(U)^op on the stored basis: d_a * d_b = X_b X_a."""
    basis = datum.end_basis
    n = datum.module.dim
    ech = EchelonBasis({r * n + c: x for r, row in enumerate(X) for c, x in enumerate(row) if x} for X in basis)
    index = {p: k for k, p in enumerate(ech.pivots)}

    def coords(X) -> dict:
        co = ech.coords({r * n + c: x for r, row in enumerate(X) for c, x in enumerate(row) if x})
        return {index[p]: v for p, v in co.items()}

    products = {}
    for a, Xa in enumerate(basis):
        for b, Xb in enumerate(basis):
            vec = coords(mat_mul(Xb, Xa))
            if vec:
                products[(a, b)] = vec
    ident = [[Fraction(int(r == c)) for c in range(n)] for r in range(n)]
    unit = coords(ident)
    return AlgebraPresentation(len(basis), products, unit, [unit], name=f"D({datum.label})")


def _finish_point(label, weight, module, expected_dim, bar, coords=None, residue="rational") -> PointDatum:
    if weight < 1:
        raise MalformedInput("weights must be positive")
    basis, _ = _end_basis(module)
    if len(basis) != expected_dim:
        raise WrongEndDimension(f"End of U({label}) has dimension {len(basis)}, expected {expected_dim}",
                                point=label)
    datum = PointDatum(label, weight, module, expected_dim, bar, coords, residue, basis)
    if not is_division_algebra(residue_algebra(datum)):
        raise EndNotDivision(f"End of U({label}) is not a division algebra", point=label)
    return datum


def regular_simple(base: TameBimoduleBase, point: dict) -> PointDatum:
    """Point JSON: {label, weight, bar?, coords [alpha, beta] | form [c_0..c_d] | fixture}."""
    label = str(point.get("label", "x"))
    weight = as_int(point["weight"])
    bar = bool(point.get("bar", False))
    kind = base.kind
    if "fixture" in point or "module" in point:
        if kind != "qt":
            raise MalformedInput("module fixtures are only used on the qt base")
        data = point.get("module") or load_qt_fixtures()["points"][point["fixture"]]
        module = module_from_fixture(base, data)
        return _finish_point(label, weight, module, as_int(data.get("end_dim", 2)), bar, residue="complex")
    if kind == "qt":
        raise MalformedInput("qt points need a module fixture")
    if "form" in point:
        if kind != "re":
            raise MalformedInput("binary forms describe closed points of the real line only")
        poly = PolyQ([as_fraction(x) for x in point["form"]])
        if poly.degree < 2 or not poly.is_irreducible():
            raise MalformedInput("a non-rational point needs an irreducible form of degree >= 2")
        C = companion_matrix(poly)
        d = poly.degree
        ident = [[Fraction(int(r == c)) for c in range(d)] for r in range(d)]
        module = quiver_representation(base.quiver_spec, [d, d], {"u": C, "v": ident}, label)
        return _finish_point(label, weight, module, d, bar, residue="complex" if d == 2 else f"degree{d}")
    if "coords" not in point:
        raise MalformedInput("point needs coords, form or a module fixture")
    c = base.conductor
    alpha, beta = (_point_value(x, c) for x in point["coords"])
    if alpha.is_zero() and beta.is_zero():
        raise MalformedInput("(0:0) is not a point")
    module = quiver_representation(base.quiver_spec, [1, 1], {"u": [[alpha]], "v": [[beta]]}, label)
    return _finish_point(label, weight, module, totient(c), bar, (alpha, beta),
                         residue="rational" if c == 1 else "complex")


def _point_value(x, conductor: int) -> CyclotomicElem:
    if isinstance(x, dict):
        return _cyc(CyclotomicElem.from_json(x), conductor)
    return _cyc(x, conductor)


# ---------------------------------------------------------------------------
# assembling the squid


@dataclass
class SquidSpec:
    base: TameBimoduleBase
    points: list  # PointDatum
    name: str = ""

    @property
    def weights(self) -> list:
        return [p.weight for p in self.points]

    @classmethod
    def from_json(cls, data: dict) -> "SquidSpec":
        try:
            base_data = data["base"]
            params = base_data.get("params", {})
            base = base_bimodule(base_data["kind"], tuple(params.get("quaternion", (-1, -1))))
            points = [regular_simple(base, p) for p in data.get("points", [])]
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"bad squid spec: {exc}") from exc
        return cls(base, points, data.get("name", ""))


def check_distinct_points(points: Sequence[PointDatum]) -> None:
    for i, p in enumerate(points):
        for q in points[i + 1:]:
            if hom_space(p.module, q.module) or hom_space(q.module, p.module):
                raise DuplicatePoints(f"points {p.label} and {q.label} have isomorphic simples",
                                      pair=(p.label, q.label))


@dataclass
class SquidLayout:
    """Index bookkeeping for the basis of the block algebra."""

    diag: dict = field(default_factory=dict)  # (point, row, col) -> offset of the D block
    vrow: dict = field(default_factory=dict)  # (point, row) -> offset of the V_i row
    base_offset: int = 0
    dim: int = 0


def build_squid(spec: SquidSpec, check_points: bool = True) -> AlgebraPresentation:
    if check_points:
        check_distinct_points(spec.points)
    Lam = spec.base.algebra
    layout = SquidLayout()
    labels: list[str] = []
    off = 0
    residues = []
    for i, p in enumerate(spec.points):
        D = residue_algebra(p)
        residues.append(D)
        m = p.arm_length
        for r in range(m):
            for s in range(r, m):
                layout.diag[(i, r, s)] = off
                labels.extend(f"D{i}[{r},{s}].{k}" for k in range(D.dim))
                off += D.dim
        for r in range(m):
            layout.vrow[(i, r)] = off
            labels.extend(f"V{i}[{r}].{k}" for k in range(p.module.dim))
            off += p.module.dim
    layout.base_offset = off
    labels.extend(f"L.{lab}" for lab in (Lam.labels or [str(k) for k in range(Lam.dim)]))
    off += Lam.dim
    layout.dim = off

    products: dict = {}

    def put(i: int, j: int, vec: dict) -> None:
        if vec:
            products[(i, j)] = vec

    for i, p in enumerate(spec.points):
        D, m, n = residues[i], p.arm_length, p.module.dim
        X = p.end_basis
        for r in range(m):
            for s in range(r, m):
                for t in range(s, m):
                    o1, o2, o3 = layout.diag[(i, r, s)], layout.diag[(i, s, t)], layout.diag[(i, r, t)]
                    for (a, b), vec in D.products.items():
                        put(o1 + a, o2 + b, {o3 + k: v for k, v in vec.items()})
            for s in range(r, m):
                o1, ov, ot = layout.diag[(i, r, s)], layout.vrow[(i, s)], layout.vrow[(i, r)]
                for a in range(D.dim):
                    for k in range(n):
                        put(o1 + a, ov + k, {ot + col: x for col, x in enumerate(X[a][k]) if x})
            ov = layout.vrow[(i, r)]
            for l in range(Lam.dim):
                L = p.module.actions[l]
                for k in range(n):
                    put(ov + k, layout.base_offset + l, {ov + col: x for col, x in enumerate(L[k]) if x})
    bo = layout.base_offset
    for (a, b), vec in Lam.products.items():
        put(bo + a, bo + b, {bo + k: v for k, v in vec.items()})

    idems: list[dict] = []
    unit: dict = {}
    for i, p in enumerate(spec.points):
        D = residues[i]
        for r in range(p.arm_length):
            e = {layout.diag[(i, r, r)] + k: v for k, v in D.unit.items()}
            idems.append(e)
            unit.update(e)
    base_idems = [Lam.idempotents[1], Lam.idempotents[0]]  # f (sink) first, then g (source)
    for e in base_idems:
        idems.append({bo + k: v for k, v in e.items()})
    unit.update({bo + k: v for k, v in Lam.unit.items()})
    name = spec.name or f"Pi_{spec.base.kind}(" + ",".join(str(p.weight) for p in spec.points) + ")"
    A = AlgebraPresentation(layout.dim, products, unit, idems, labels, name=name)
    A.cache["squid_layout"] = layout
    return A


def expected_squid_dim(spec: SquidSpec) -> int:
    total = spec.base.algebra.dim
    for p in spec.points:
        m = p.arm_length
        total += m * (m + 1) // 2 * p.end_dim + m * p.module.dim
    return total


# ---------------------------------------------------------------------------
# canonical companion and quick constructors


def build_canonical(spec: SquidSpec) -> AlgebraPresentation:
    kind = spec.base.kind
    if kind == "qt" or any(p.coords is None for p in spec.points):
        raise UnsupportedResidue("canonical algebras need every residue algebra equal to the base field")
    if any(p.weight < 2 for p in spec.points):
        raise MalformedInput("canonical weights must be at least 2")
    pts = [p.coords for p in spec.points]
    return to_algebra(canonical_quiver(pts, spec.weights, spec.base.conductor))


def squid_path_algebra(spec: SquidSpec) -> AlgebraPresentation:
    """The quiver form of the squid, with idempotents reordered to the block order."""
    if spec.base.kind == "qt" or any(p.coords is None for p in spec.points):
        raise UnsupportedResidue("the quiver squid needs points with coordinates")
    pts = [p.coords for p in spec.points]
    A = to_algebra(squid_quiver(pts, spec.weights, spec.base.conductor))
    return permute_idempotents(A, squid_block_order(spec.weights))


def rational_squid_spec(points: Sequence, weights: Sequence[int], kind: str = "alg_closed") -> SquidSpec:
    base = base_bimodule(kind)
    data = [regular_simple(base, {"label": f"x{k}", "coords": list(pt), "weight": w, "bar": kind == "re"})
            for k, (pt, w) in enumerate(zip(points, weights))]
    return SquidSpec(base, data)


# ---------------------------------------------------------------------------
# representation type


@dataclass
class TypeReport:
    kind: str
    invariants: InvariantReport

    def to_json(self) -> dict:
        return {"type": self.kind, **self.invariants.to_json()}


def classify_invariants(report: InvariantReport) -> str:
    """tubular: corank 2 and periodic Coxeter map; domestic: corank <= 1 and semidefinite form."""
    if report.symmetrized_corank == 2 and report.coxeter_order is not None:
        return "tubular"
    if report.symmetrized_corank <= 1 and report.symmetrized_semidefinite:
        return "domestic"
    return "wild_candidate"


def classify_type(A: AlgebraPresentation, bound: int = 120) -> TypeReport:
    report = invariant_report(A, bound)
    return TypeReport(classify_invariants(report), report)

