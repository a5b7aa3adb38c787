"""Finite-dimensional pointed Q-algebras and their homological invariants.

An :class:`AlgebraPresentation` stores sparse structure constants over Q.
Vectors are sparse ``dict[int, Fraction]`` maps from basis index to
coefficient.  All module theory is done on the basic corner ``fAf`` where
``f`` is the sum of one primitive idempotent per simple module; this is a
Morita equivalence, so multiplicities and Ext dimensions agree with those of
``A`` while the linear algebra stays small.

Indices of idempotents, simples and projectives are 0-based throughout.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import (
    IndexOutOfRange,
    InvalidAlgebra,
    InvalidModule,
    MalformedInput,
    NonIntegralMultiplicity,
    ResolutionTooLong,
    SingularEulerMatrix,
)
from .exact_linear import (
    EchelonBasis,
    Matrix,
    PolyQ,
    as_fraction,
    as_int,
    char_poly,
    format_rational,
    identity,
    is_positive_semidefinite,
    kernel_of_map,
    lcm,
    mat_inv,
    mat_mul,
    mat_pow,
    mat_rank,
    matrix_to_json,
    quaternion_is_division,
    transpose,
)

SCHEMA = "hecurve/1"
FULL_ASSOCIATIVITY_LIMIT = 40
SAMPLED_TRIPLES = 3000

Vec = dict


# ---------------------------------------------------------------------------
# sparse vector helpers


def vec_axpy(acc: dict, vec: dict, scale=1) -> dict:
    """acc += scale * vec, dropping zeros; returns acc."""
    if not scale:
        return acc
    for k, v in vec.items():
        nv = acc.get(k, 0) + scale * v
        if nv:
            acc[k] = nv
        else:
            acc.pop(k, None)
    return acc


def vec_scale(vec: dict, scale) -> dict:
    if not scale:
        return {}
    return {k: v * scale for k, v in vec.items()}


def vec_sub(a: dict, b: dict) -> dict:
    return vec_axpy(dict(a), b, -1)


def dense_to_sparse(values: Sequence) -> dict:
    return {i: as_fraction(v) for i, v in enumerate(values) if as_fraction(v)}


def sparse_to_dense(vec: dict, dim: int) -> list[Fraction]:
    out = [Fraction(0)] * dim
    for k, v in vec.items():
        out[k] = as_fraction(v)
    return out


# ---------------------------------------------------------------------------
# algebras


@dataclass(eq=False)
class AlgebraPresentation:
    """A finite-dimensional Q-algebra by structure constants.

    ``products[(i, j)]`` is the sparse coordinate vector of ``b_i * b_j``;
    absent keys mean zero.  ``idempotents`` is the distinguished complete
    orthogonal family.  ``primitives`` optionally lists primitive idempotents
    ``f_i <= e_i`` used as witnesses when the ``e_i`` are not primitive.
    """

    dim: int
    products: dict
    unit: dict
    idempotents: list
    labels: list = field(default_factory=list)
    primitives: list | None = None
    name: str = ""

    def __post_init__(self):
        if not self.labels:
            self.labels = [f"b{i}" for i in range(self.dim)]
        self._left = None
        self.cache: dict = {}

    # basic arithmetic -------------------------------------------------
    def basis_vec(self, i: int) -> dict:
        return {i: Fraction(1)}

    def left_table(self) -> dict:
        if self._left is None:
            table: dict = {}
            for (i, j), vec in self.products.items():
                if vec:
                    table.setdefault(i, []).append((j, vec))
            self._left = table
        return self._left

    def mul(self, x: dict, y: dict) -> dict:
        out: dict = {}
        if not x or not y:
            return out
        table = self.left_table()
        for i, a in x.items():
            row = table.get(i)
            if not row:
                continue
            for j, vec in row:
                b = y.get(j)
                if b:
                    vec_axpy(out, vec, a * b)
        return out

    def mul_basis(self, i: int, j: int) -> dict:
        return self.products.get((i, j), {})

    def witnesses(self) -> list:
        """One primitive idempotent per simple module (the idempotents if none given)."""
        return list(self.primitives) if self.primitives is not None else list(self.idempotents)

    @property
    def rank(self) -> int:
        """Number of distinguished idempotents, i.e. size of Cartan/Euler matrices."""
        return len(self.witnesses())

    # validation -------------------------------------------------------
    def validate(self, full: bool | None = None, check_primitive: bool = True) -> None:
        """Raise InvalidAlgebra unless the presentation satisfies its invariants.

        Associativity is checked on every triple up to dimension
        ``FULL_ASSOCIATIVITY_LIMIT`` and on a fixed pseudo-random sample of
        triples above it (``full=True`` forces the exhaustive check).
        """
        for (i, j), vec in self.products.items():
            if not (0 <= i < self.dim and 0 <= j < self.dim) or any(
                not 0 <= k < self.dim for k in vec
            ):
                raise InvalidAlgebra("structure constant index out of range", pair=(i, j))
        one = self.unit
        for i in range(self.dim):
            b = self.basis_vec(i)
            if self.mul(one, b) != b or self.mul(b, one) != b:
                raise InvalidAlgebra("unit is not a two-sided identity", basis=self.labels[i])
        if full is None:
            full = self.dim <= FULL_ASSOCIATIVITY_LIMIT
        if full:
            triples: Iterable = (
                (i, j, k) for i in range(self.dim) for j in range(self.dim) for k in range(self.dim)
            )
        else:
            rng = random.Random(self.dim)
            triples = [tuple(rng.randrange(self.dim) for _ in range(3)) for _ in range(SAMPLED_TRIPLES)]
        for i, j, k in triples:
            left = self.mul(self.mul_basis(i, j), self.basis_vec(k))
            right = self.mul(self.basis_vec(i), self.mul_basis(j, k))
            if left != right:
                raise InvalidAlgebra(
                    "associativity fails",
                    triple=(self.labels[i], self.labels[j], self.labels[k]),
                )
        _check_idempotent_family(self, self.idempotents, complete=True)
        if self.primitives is not None:
            if len(self.primitives) != len(self.idempotents):
                raise InvalidAlgebra("need one primitive witness per idempotent")
            _check_idempotent_family(self, self.primitives, complete=False)
            for f, e in zip(self.primitives, self.idempotents):
                if self.mul(e, f) != f or self.mul(f, e) != f:
                    raise InvalidAlgebra("primitive witness not below its idempotent")
        if check_primitive:
            for i, f in enumerate(self.witnesses()):
                top = quotient_by_radical(corner(self, f).algebra)
                if not is_division_algebra(top):
                    raise InvalidAlgebra("corner modulo radical is not a division algebra", index=i)

    # serialisation ----------------------------------------------------
    def to_json(self) -> dict:
        structure = [
            [i, j, k, format_rational(v)]
            for (i, j) in sorted(self.products)
            for k, v in sorted(self.products[(i, j)].items())
            if v
        ]
        out = {
            "schema": SCHEMA,
            "dim": self.dim,
            "labels": list(self.labels),
            "structure": structure,
            "unit": [format_rational(x) for x in sparse_to_dense(self.unit, self.dim)],
            "idempotents": [
                [format_rational(x) for x in sparse_to_dense(e, self.dim)] for e in self.idempotents
            ],
        }
        if self.primitives is not None:
            out["primitives"] = [
                [format_rational(x) for x in sparse_to_dense(e, self.dim)] for e in self.primitives
            ]
        if self.name:
            out["name"] = self.name
        return out

    @classmethod
    def from_json(cls, data: dict) -> "AlgebraPresentation":
        try:
            if data.get("schema", SCHEMA) != SCHEMA:
                raise MalformedInput(f"unsupported schema {data.get('schema')!r}")
            dim = as_int(data["dim"])
            products: dict = {}
            for entry in data["structure"]:
                i, j, k, v = entry
                q = as_fraction(v)
                if q:
                    products.setdefault((int(i), int(j)), {})[int(k)] = q
            unit = dense_to_sparse(data["unit"])
            idems = [dense_to_sparse(e) for e in data["idempotents"]]
            prims = data.get("primitives")
            prims = None if prims is None else [dense_to_sparse(e) for e in prims]
            return cls(
                dim=dim,
                products=products,
                unit=unit,
                idempotents=idems,
                labels=list(data.get("labels") or []),
                primitives=prims,
                name=data.get("name", ""),
            )
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise MalformedInput(f"bad algebra JSON: {exc}") from exc


def _check_idempotent_family(A: AlgebraPresentation, family: list, complete: bool) -> None:
    total: dict = {}
    for a, e in enumerate(family):
        vec_axpy(total, e)
        for b, f in enumerate(family):
            prod = A.mul(e, f)
            expected = e if a == b else {}
            if prod != expected:
                raise InvalidAlgebra("idempotents are not orthogonal idempotents", pair=(a, b))
    if complete and total != {k: v for k, v in A.unit.items() if v}:
        raise InvalidAlgebra("idempotents do not sum to the unit")


def algebra_from_table(
    dim: int,
    rule: Callable[[int, int], dict],
    unit: dict,
    idempotents: list,
    labels: list | None = None,
    primitives: list | None = None,
    name: str = "",
) -> AlgebraPresentation:
    """Build a presentation by evaluating ``rule(i, j)`` on all basis pairs."""
    products = {}
    for i in range(dim):
        for j in range(dim):
            vec = rule(i, j)
            if vec:
                products[(i, j)] = vec
    return AlgebraPresentation(dim, products, unit, idempotents, labels or [], primitives, name)


def product_algebra(factors: Sequence[AlgebraPresentation]) -> AlgebraPresentation:
    """Direct product; the distinguished idempotents are concatenated."""
    offsets, off = [], 0
    for F in factors:
        offsets.append(off)
        off += F.dim
    products, unit, idems, labels, prims = {}, {}, [], [], []
    for F, o in zip(factors, offsets):
        for (i, j), vec in F.products.items():
            products[(i + o, j + o)] = {k + o: v for k, v in vec.items()}
        unit.update({k + o: v for k, v in F.unit.items()})
        idems.extend({k + o: v for k, v in e.items()} for e in F.idempotents)
        prims.extend({k + o: v for k, v in e.items()} for e in F.witnesses())
        labels.extend(f"{F.name or 'A'}{o}:{lab}" for lab in F.labels)
    has_prims = any(F.primitives is not None for F in factors)
    return AlgebraPresentation(off, products, unit, idems, labels, prims if has_prims else None)


def opposite_algebra(A: AlgebraPresentation) -> AlgebraPresentation:
    products = {(j, i): vec for (i, j), vec in A.products.items()}
    return AlgebraPresentation(
        A.dim, products, dict(A.unit), list(A.idempotents), list(A.labels), A.primitives, A.name + "^op"
    )


# ---------------------------------------------------------------------------
# subalgebras and quotients


@dataclass
class Corner:
    """The corner eAe with basis vectors given as A-vectors."""

    algebra: AlgebraPresentation
    basis: list  # A-vectors, one per corner basis element
    echelon: EchelonBasis
    pivots: list

    def to_corner(self, vec: dict) -> dict:
        """Corner coordinates of an A-vector lying in eAe."""
        coords = self.echelon.coords(vec)
        if coords is None:
            raise InvalidAlgebra("vector does not lie in the corner")
        index = {p: n for n, p in enumerate(self.pivots)}
        return {index[p]: v for p, v in coords.items()}

    def from_corner(self, vec: dict) -> dict:
        out: dict = {}
        for n, c in vec.items():
            vec_axpy(out, self.basis[n], c)
        return out


def subalgebra_from_span(A: AlgebraPresentation, ech: EchelonBasis, unit: dict) -> Corner:
    """Structure constants of a subalgebra spanned by ``ech`` with the given unit."""
    basis = ech.basis()
    pivots = ech.pivots
    index = {p: n for n, p in enumerate(pivots)}
    products = {}
    for a, x in enumerate(basis):
        for b, y in enumerate(basis):
            prod = A.mul(x, y)
            if prod:
                coords = {index[p]: prod[p] for p in pivots if prod.get(p)}
                if coords:
                    products[(a, b)] = coords
    labels = [A.labels[p] if len(basis[n]) == 1 else f"<{A.labels[p]}>" for n, p in enumerate(pivots)]
    sub = AlgebraPresentation(len(basis), products, {}, [], labels)
    corner_obj = Corner(sub, basis, ech, pivots)
    sub.unit = corner_obj.to_corner(unit) if unit else {}
    sub.idempotents = [sub.unit] if sub.unit else []
    return corner_obj


def corner(A: AlgebraPresentation, e: dict) -> Corner:
    """The corner algebra eAe (unit e, single distinguished idempotent)."""
    ech = EchelonBasis()
    for i in range(A.dim):
        ech.add(A.mul(A.mul(e, A.basis_vec(i)), e))
    return subalgebra_from_span(A, ech, e)


def quotient_by_ideal(A: AlgebraPresentation, ideal: EchelonBasis) -> AlgebraPresentation:
    """A / I, with basis the standard vectors off the pivots of I."""
    keep = [k for k in range(A.dim) if k not in ideal.rows]
    index = {k: n for n, k in enumerate(keep)}

    def project(vec: dict) -> dict:
        res = ideal.residue(vec)
        return {index[k]: v for k, v in res.items()}

    products = {}
    for a, i in enumerate(keep):
        for b, j in enumerate(keep):
            prod = project(A.mul_basis(i, j))
            if prod:
                products[(a, b)] = prod
    unit = project(A.unit)
    idems = [p for p in (project(e) for e in A.idempotents) if p]
    return AlgebraPresentation(len(keep), products, unit, idems, [A.labels[k] for k in keep])


def quotient_by_radical(A: AlgebraPresentation) -> AlgebraPresentation:
    return quotient_by_ideal(A, radical_echelon(A))


# ---------------------------------------------------------------------------
# radical, center, powers


def trace_vector(A: AlgebraPresentation) -> dict:
    """t_k = trace of left multiplication by b_k."""
    tr: dict = {}
    for (i, j), vec in A.products.items():
        c = vec.get(j)
        if c:
            tr[i] = tr.get(i, 0) + c
    return {k: v for k, v in tr.items() if v}


def radical_echelon(A: AlgebraPresentation) -> EchelonBasis:
    """Jacobson radical as the kernel of the trace form Tr(L_{xy}).

    In characteristic zero this kernel is already the radical: it is a
    nil ideal, and modulo it the trace form is nondegenerate, so the
    quotient is semisimple.
    """
    cached = A.cache.get("radical")
    if cached is not None:
        return cached
    tr = trace_vector(A)
    columns: list[dict] = [{} for _ in range(A.dim)]
    for (i, j), vec in A.products.items():
        value = sum((c * tr[k] for k, c in vec.items() if k in tr), Fraction(0))
        if value:
            columns[i][j] = value
    ech = EchelonBasis(kernel_of_map(columns))
    A.cache["radical"] = ech
    return ech


def radical(A: AlgebraPresentation) -> list[dict]:
    return radical_echelon(A).basis()


def span_equal_echelon(a: EchelonBasis, b: EchelonBasis) -> bool:
    return a.dim == b.dim and all(a.contains(v) for v in b.basis())


def product_span(A: AlgebraPresentation, left: Sequence[dict], right: Sequence[dict]) -> EchelonBasis:
    ech = EchelonBasis()
    for x in left:
        for y in right:
            ech.add(A.mul(x, y))
    return ech


def radical_power_dims(A: AlgebraPresentation) -> list[int]:
    """[dim rad^1, dim rad^2, ...] down to and including the first zero."""
    rad = radical(A)
    dims = [len(rad)]
    current = rad
    while current:
        nxt = product_span(A, rad, current)
        current = nxt.basis()
        dims.append(len(current))
        if len(dims) > A.dim + 1:  # pragma: no cover - radical is nilpotent
            raise InvalidAlgebra("radical is not nilpotent")
    return dims


def center(A: AlgebraPresentation) -> list[dict]:
    """Basis of the center, as the kernel of x -> ([x, b_j])_j."""
    images = []
    for i in range(A.dim):
        img: dict = {}
        for j in range(A.dim):
            comm = vec_sub(A.mul_basis(i, j), A.mul_basis(j, i))
            for k, v in comm.items():
                img[j * A.dim + k] = v
        images.append(img)
    return kernel_of_map(images)


def left_mult_matrix(A: AlgebraPresentation, x: dict) -> Matrix:
    cols = [A.mul(x, A.basis_vec(j)) for j in range(A.dim)]
    return [[cols[c].get(r, Fraction(0)) for c in range(A.dim)] for r in range(A.dim)]


# ---------------------------------------------------------------------------
# division algebras


def _is_field(A: AlgebraPresentation, elements: list[dict]) -> bool:
    """Is the commutative semisimple subalgebra spanned by ``elements`` a field?

    A field has a primitive element; along the moment curve sum t^i x_i only
    finitely many t fail, while every element of a product of fields has a
    reducible characteristic polynomial.
    """
    d = len(elements)
    if d == 1:
        return True
    ech = EchelonBasis(elements)
    basis = ech.basis()
    pivots = ech.pivots
    for t in range(1, 4 * d + 12):
        x: dict = {}
        for i, b in enumerate(basis):
            vec_axpy(x, b, Fraction(t) ** i)
        cols = []
        for b in basis:
            prod = A.mul(x, b)
            cols.append([prod.get(p, Fraction(0)) for p in pivots])
        if char_poly(transpose(cols)).is_irreducible():
            return True
    return False


def is_division_algebra(A: AlgebraPresentation) -> bool:
    """Exact division-algebra test for the shapes that occur in this package.

    Supported: fields (any dimension up to 8) and central simple algebras of
    dimension 4 over Q (via the Hilbert symbol).  Other shapes fall back to a
    deterministic zero-divisor search that can only refute.
    """
    if A.dim == 0:
        return False
    if not A.unit:
        return False
    if radical_echelon(A).dim:
        return False
    if A.dim == 1:
        return True
    z = center(A)
    if not _is_field(A, z):
        return False
    if len(z) == A.dim:
        return True
    if len(z) == 1 and A.dim == 4:
        params = _quaternion_parameters(A)
        if params is None:
            return False
        return quaternion_is_division(*params)
    rng = random.Random(1)
    for _ in range(200):
        x = {k: Fraction(rng.randint(-3, 3)) for k in range(A.dim)}
        x = {k: v for k, v in x.items() if v}
        if x and mat_rank(left_mult_matrix(A, x)) < A.dim:
            return False
    raise InvalidAlgebra(f"division test inconclusive for a dimension-{A.dim} algebra")


def _quaternion_parameters(A: AlgebraPresentation):
    """(a, b) with A = (a, b)_Q, or None if a nonzero square-zero element shows up."""
    tr = trace_vector(A)
    one = A.unit
    pure_images = [{0: tr.get(k, Fraction(0))} for k in range(A.dim)]
    pure = kernel_of_map(pure_images)  # trace-zero subspace, dim 3

    def scalar_of(vec: dict):
        # vec must be a multiple of the unit
        k = next(iter(one))
        s = vec.get(k, Fraction(0)) / one[k]
        return s if vec_sub(vec, vec_scale(one, s)) == {} else None

    first = None
    for x in pure:
        sq = scalar_of(A.mul(x, x))
        if sq is None:
            raise InvalidAlgebra("trace-zero element with non-scalar square")
        if sq == 0:
            return None
        first = (x, sq)
        break
    if first is None:
        return None
    x, a = first
    images = []
    for y in pure:
        images.append(vec_axpy(A.mul(x, y), A.mul(y, x)))
    for coeffs in kernel_of_map(images):
        y: dict = {}
        for n, c in coeffs.items():
            vec_axpy(y, pure[n], c)
        if not y:
            continue
        b = scalar_of(A.mul(y, y))
        if b is None or b == 0:
            return None
        return a, b
    return None


# ---------------------------------------------------------------------------
# modules given by matrices


@dataclass(eq=False)
class ModulePresentation:
    """A left module: ``actions[k]`` is the matrix of basis element k (columns are images)."""

    algebra: AlgebraPresentation
    dim: int
    actions: list
    label: str = ""

    def act(self, x: dict, v: dict) -> dict:
        out: dict = {}
        for k, a in x.items():
            m = self.actions[k]
            for col, c in v.items():
                for row in range(self.dim):
                    e = m[row][col]
                    if e:
                        out[row] = out.get(row, 0) + a * c * e
        return {k: v for k, v in out.items() if v}

    def matrix_of(self, x: dict) -> Matrix:
        out = [[Fraction(0)] * self.dim for _ in range(self.dim)]
        for k, a in x.items():
            m = self.actions[k]
            for r in range(self.dim):
                for c in range(self.dim):
                    if m[r][c]:
                        out[r][c] += a * m[r][c]
        return out

    def validate(self) -> None:
        A = self.algebra
        if len(self.actions) != A.dim:
            raise InvalidModule("need one action matrix per algebra basis element")
        if self.matrix_of(A.unit) != identity(self.dim):
            raise InvalidModule("unit does not act as the identity")
        for i in range(A.dim):
            for j in range(A.dim):
                lhs = mat_mul(self.actions[i], self.actions[j])
                if lhs != self.matrix_of(A.mul_basis(i, j)):
                    raise InvalidModule("action does not respect products", pair=(i, j))

    def idempotent_dims(self) -> list[int]:
        return [mat_rank(self.matrix_of(e)) for e in self.algebra.idempotents]


def module_from_subspace(
    A: AlgebraPresentation, span: EchelonBasis, quotient: EchelonBasis | None = None, label: str = ""
) -> ModulePresentation:
    """Left module (span + Q)/Q for A-stable subspaces of the regular module."""
    quotient = quotient if quotient is not None else EchelonBasis()
    total = quotient.copy()
    chosen = []
    for v in span.basis():
        if total.add(v):
            chosen.append(v)
    # coordinates: reduce modulo Q, then express in the chosen complement
    comp = EchelonBasis()
    comp_rows = []
    for v in chosen:
        comp_rows.append(quotient.residue(v))
    for r in comp_rows:
        comp.add(r)
    index = {p: n for n, p in enumerate(comp.pivots)}
    comp_basis = comp.basis()
    actions = []
    for k in range(A.dim):
        cols = []
        for v in comp_basis:
            img = quotient.residue(A.mul(A.basis_vec(k), v))
            coords = comp.coords(img)
            if coords is None:
                raise InvalidModule("subspace is not a submodule")
            cols.append({index[p]: c for p, c in coords.items()})
        n = len(comp_basis)
        actions.append([[cols[c].get(r, Fraction(0)) for c in range(n)] for r in range(n)])
    return ModulePresentation(A, len(comp_basis), actions, label)


def projective(A: AlgebraPresentation, i: int) -> ModulePresentation:
    """Indecomposable projective A f_i, with f_i the i-th primitive witness."""
    f = _witness(A, i)
    span = EchelonBasis(A.mul(A.basis_vec(k), f) for k in range(A.dim))
    return module_from_subspace(A, span, label=f"P{i}")


def simple_top(A: AlgebraPresentation, i: int) -> ModulePresentation:
    f = _witness(A, i)
    proj = EchelonBasis(A.mul(A.basis_vec(k), f) for k in range(A.dim))
    rad_p = product_span(A, radical(A), proj.basis())
    return module_from_subspace(A, proj, rad_p, label=f"S{i}")


def _witness(A: AlgebraPresentation, i: int) -> dict:
    wit = A.witnesses()
    if not 0 <= i < len(wit):
        raise IndexOutOfRange(f"idempotent index {i} outside 0..{len(wit) - 1}")
    return wit[i]


def hom_space(M: ModulePresentation, N: ModulePresentation) -> list[Matrix]:
    """Basis of Hom_A(M, N) as N.dim x M.dim matrices."""
    m, n = M.dim, N.dim
    images = []
    for r in range(n):
        for c in range(m):
            # unknown X = E_rc ; contribution to N_a X - X M_a for every a
            img: dict = {}
            for a in range(M.algebra.dim):
                Na, Ma = N.actions[a], M.actions[a]
                base = a * n * m
                for rr in range(n):
                    v = Na[rr][r]
                    if v:
                        img[base + rr * m + c] = img.get(base + rr * m + c, 0) + v
                for cc in range(m):
                    v = Ma[c][cc]
                    if v:
                        key = base + r * m + cc
                        img[key] = img.get(key, 0) - v
            images.append({k: v for k, v in img.items() if v})
    out = []
    for vec in kernel_of_map(images):
        X = [[Fraction(0)] * m for _ in range(n)]
        for idx, v in vec.items():
            X[idx // m][idx % m] = v
        out.append(X)
    return out


def end_algebra(M: ModulePresentation) -> AlgebraPresentation:
    """End_A(M) with product f*g = f o g."""
    basis = hom_space(M, M)
    flat = [{r * M.dim + c: x for r, row in enumerate(X) for c, x in enumerate(row) if x} for X in basis]
    ech = EchelonBasis(flat)
    # re-express in the normalised echelon basis for clean coordinates
    ebasis = ech.basis()
    pivots = ech.pivots
    mats = []
    for vec in ebasis:
        X = [[Fraction(0)] * M.dim for _ in range(M.dim)]
        for idx, v in vec.items():
            X[idx // M.dim][idx % M.dim] = v
        mats.append(X)
    index = {p: n for n, p in enumerate(pivots)}

    def coords(X):
        flatx = {r * M.dim + c: x for r, row in enumerate(X) for c, x in enumerate(row) if x}
        co = ech.coords(flatx)
        if co is None:  # pragma: no cover - composition of endomorphisms
            raise InvalidModule("composition left the endomorphism space")
        return {index[p]: v for p, v in co.items()}

    products = {}
    for a, X in enumerate(mats):
        for b, Y in enumerate(mats):
            c = coords(mat_mul(X, Y))
            if c:
                products[(a, b)] = c
    unit = coords(identity(M.dim))
    return AlgebraPresentation(len(mats), products, unit, [unit], name=f"End({M.label})")


# ---------------------------------------------------------------------------
# homological engine on the basic corner


class _SubModule:
    """(W + Q) / Q inside an ambient space with a given B-action."""

    __slots__ = ("act", "spanning", "quotient")

    def __init__(self, act, spanning, quotient):
        self.act = act
        self.spanning = spanning
        self.quotient = quotient


class HomologicalEngine:
    """Projective covers and resolutions over the basic corner of an algebra."""

    def __init__(self, A: AlgebraPresentation):
        self.source = A
        witnesses = A.witnesses()
        if A.primitives is None:
            self.corner = None
            B = A
            prims = witnesses
        else:
            f: dict = {}
            for w in witnesses:
                vec_axpy(f, w)
            self.corner = corner(A, f)
            B = self.corner.algebra
            prims = [self.corner.to_corner(w) for w in witnesses]
        self.B = B
        self.prims = prims
        self.n = B.dim
        self.rad = radical(B)
        self.proj_basis = []
        self.d = []
        for fi in prims:
            pb = EchelonBasis(B.mul(B.basis_vec(k), fi) for k in range(B.dim))
            self.proj_basis.append(pb.basis())
            corner_dim = EchelonBasis(B.mul(fi, v) for v in self.proj_basis[-1]).dim
            rad_corner = EchelonBasis(B.mul(B.mul(fi, r), fi) for r in self.rad).dim
            self.d.append(corner_dim - rad_corner)

    # free module B^m, flattened as copy * n + index
    def _free_act(self, x: dict, v: dict) -> dict:
        n = self.n
        parts: dict = {}
        for k, c in v.items():
            parts.setdefault(k // n, {})[k % n] = c
        out: dict = {}
        for copy, part in parts.items():
            prod = self.B.mul(x, part)
            base = copy * n
            for k, c in prod.items():
                out[base + k] = c
        return out

    def simple_module(self, i: int) -> _SubModule:
        proj = self.proj_basis[i]
        q = EchelonBasis()
        for r in self.rad:
            for p in proj:
                q.add(self.B.mul(r, p))
        return _SubModule(self._free_act, proj, q)

    def module_from_presentation(self, M: ModulePresentation) -> _SubModule:
        A = self.source
        if M.algebra is not A:
            raise InvalidModule("module belongs to a different algebra")
        embed = self.corner.from_corner if self.corner else (lambda x: x)

        def act(x, v):
            return M.act(embed(x), v)

        if self.corner is None:
            spanning = [{k: Fraction(1)} for k in range(M.dim)]
        else:
            f: dict = {}
            for w in A.witnesses():
                vec_axpy(f, w)
            spanning = EchelonBasis(M.act(f, {k: Fraction(1)}) for k in range(M.dim)).basis()
        return _SubModule(act, spanning, EchelonBasis())

    def cover(self, module: _SubModule, want_kernel: bool = True):
        """Minimal generators (by vertex) and the kernel of the projective cover."""
        span = module.quotient.copy()
        for r in self.rad:
            for w in module.spanning:
                span.add(module.act(r, w))
        gens = []
        for i, fi in enumerate(self.prims):
            for w in module.spanning:
                fw = module.act(fi, w)
                if not fw or span.contains(fw):
                    continue
                gens.append((i, fw))
                for p in self.proj_basis[i]:
                    span.add(module.act(p, fw))
        mult = [0] * len(self.prims)
        for i, _ in gens:
            mult[i] += 1
        if not want_kernel or not gens:
            return mult, None
        domain, images = [], []
        n = self.n
        for slot, (i, g) in enumerate(gens):
            for p in self.proj_basis[i]:
                domain.append((slot, p))
                images.append(module.quotient.residue(module.act(p, g)))
        kernel = []
        for coeffs in kernel_of_map(images):
            vec: dict = {}
            for idx, c in coeffs.items():
                slot, p = domain[idx]
                for k, v in p.items():
                    key = slot * n + k
                    nv = vec.get(key, 0) + c * v
                    if nv:
                        vec[key] = nv
                    else:
                        vec.pop(key, None)
            kernel.append(vec)
        return mult, kernel

    def resolve(self, module: _SubModule, max_len: int, require_finite: bool) -> list[list[int]]:
        terms = []
        current = module
        for step in range(max_len + 1):
            last = step == max_len
            mult, kernel = self.cover(current, want_kernel=require_finite or not last)
            if not any(mult):
                break
            terms.append(mult)
            if kernel is None:
                break
            if not kernel:
                return terms
            if last:
                raise ResolutionTooLong(
                    f"minimal resolution does not stop by length {max_len}", max_len=max_len
                )
            current = _SubModule(self._free_act, kernel, EchelonBasis())
        return terms


def engine(A: AlgebraPresentation) -> HomologicalEngine:
    eng = A.cache.get("engine")
    if eng is None:
        eng = HomologicalEngine(A)
        A.cache["engine"] = eng
    return eng


def division_dims(A: AlgebraPresentation) -> list[int]:
    """dim_Q of f_i A f_i / rad for each primitive witness."""
    return list(engine(A).d)


def min_proj_resolution(
    A: AlgebraPresentation,
    S: ModulePresentation | int,
    max_len: int = 4,
    require_finite: bool = True,
) -> list[list[int]]:
    """Multiplicity vectors of the terms P_0, P_1, ... of a minimal projective resolution.

    ``S`` is a module or the index of a simple module.  With
    ``require_finite=False`` the resolution is truncated after ``max_len``
    instead of raising ResolutionTooLong.
    """
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    eng = engine(A)
    if isinstance(S, int):
        _witness(A, S)
        module = eng.simple_module(S)
    else:
        module = eng.module_from_presentation(S)
    return eng.resolve(module, max_len, require_finite)


def ext_dims(
    A: AlgebraPresentation, i: int, j: int, max_len: int = 4, require_finite: bool = True
) -> list[int]:
    """[dim_Q Ext^l(S_i, S_j) for l = 0, 1, ...] from the minimal resolution of S_i."""
    _witness(A, j)
    terms = min_proj_resolution(A, i, max_len, require_finite)
    d = engine(A).d[j]
    return [t[j] * d for t in terms]


def ext_table(A: AlgebraPresentation, degree: int, require_finite: bool = False) -> list[list[int]]:
    s = A.rank
    out = []
    for i in range(s):
        terms = min_proj_resolution(A, i, max_len=degree, require_finite=require_finite)
        d = engine(A).d
        row = []
        for j in range(s):
            row.append(terms[degree][j] * d[j] if degree < len(terms) else 0)
        out.append(row)
    return out


def cartan_matrix(A: AlgebraPresentation) -> Matrix:
    """C[i][j] = [P_j : S_i] = dim_Q(f_i A f_j) / dim_Q(D_i)."""
    eng = engine(A)
    B, prims = eng.B, eng.prims
    s = len(prims)
    out = []
    for i in range(s):
        row = []
        for j in range(s):
            dim_ij = EchelonBasis(B.mul(prims[i], v) for v in eng.proj_basis[j]).dim
            q, r = divmod(dim_ij, eng.d[i])
            if r:
                raise NonIntegralMultiplicity(
                    f"dim f_{i} A f_{j} = {dim_ij} is not a multiple of {eng.d[i]}", pair=(i, j)
                )
            row.append(Fraction(q))
        out.append(row)
    return out


def euler_matrix(A: AlgebraPresentation, max_len: int = 4) -> Matrix:
    """E[i][j] = sum_l (-1)^l dim_Q Ext^l(S_i, S_j)."""
    eng = engine(A)
    s = len(eng.prims)
    out = []
    for i in range(s):
        terms = min_proj_resolution(A, i, max_len=max_len)
        row = []
        for j in range(s):
            row.append(Fraction(sum((-1) ** l * t[j] * eng.d[j] for l, t in enumerate(terms))))
        out.append(row)
    return out


def coxeter_matrix_from_euler(E: Matrix) -> Matrix:
    try:
        inv = mat_inv(E)
    except ZeroDivisionError as exc:
        raise SingularEulerMatrix("Euler matrix is singular") from exc
    return [[-x for x in row] for row in mat_mul(inv, transpose(E))]


def coxeter_matrix(A: AlgebraPresentation) -> Matrix:
    return coxeter_matrix_from_euler(euler_matrix(A))


def coxeter_polynomial(A: AlgebraPresentation) -> PolyQ:
    return char_poly(coxeter_matrix(A))


def coxeter_order_of(phi: Matrix, bound: int) -> int | None:
    """Least m <= bound with phi^m = I, else None.

    A finite-order matrix is diagonalisable with root-of-unity eigenvalues,
    so its order is the lcm of the cyclotomic indices in its characteristic
    polynomial; one matrix power confirms there is no Jordan block.
    """
    factors = char_poly(phi).cyclotomic_factors()
    if factors is None:
        return None
    m = 1
    for k in factors:
        m = lcm(m, k)
    if m > bound:
        return None
    return m if mat_pow(phi, m) == identity(len(phi)) else None


def coxeter_order(A: AlgebraPresentation, bound: int = 120) -> int | None:
    return coxeter_order_of(coxeter_matrix(A), bound)


def symmetrized_corank_of(E: Matrix) -> int:
    sym = [[E[i][j] + E[j][i] for j in range(len(E))] for i in range(len(E))]
    return len(E) - mat_rank(sym)


def symmetrized_semidefinite_of(E: Matrix) -> bool:
    return is_positive_semidefinite([[E[i][j] + E[j][i] for j in range(len(E))] for i in range(len(E))])


def symmetrized_corank(A: AlgebraPresentation) -> int:
    return symmetrized_corank_of(euler_matrix(A))


@dataclass
class InvariantReport:
    cartan: Matrix
    euler: Matrix
    coxeter_poly: PolyQ
    coxeter_order: int | None
    symmetrized_corank: int
    symmetrized_semidefinite: bool

    def to_json(self) -> dict:
        return {
            "cartan": matrix_to_json(self.cartan),
            "euler": matrix_to_json(self.euler),
            "coxeter_poly": self.coxeter_poly.to_json(),
            "coxeter_poly_text": str(self.coxeter_poly),
            "coxeter_order": self.coxeter_order,
            "symmetrized_corank": self.symmetrized_corank,
            "symmetrized_semidefinite": self.symmetrized_semidefinite,
        }


def invariant_report(A: AlgebraPresentation, bound: int = 120) -> InvariantReport:
    E = euler_matrix(A)
    phi = coxeter_matrix_from_euler(E)
    return InvariantReport(
        cartan=cartan_matrix(A),
        euler=E,
        coxeter_poly=char_poly(phi),
        coxeter_order=coxeter_order_of(phi, bound),
        symmetrized_corank=symmetrized_corank_of(E),
        symmetrized_semidefinite=symmetrized_semidefinite_of(E),
    )


def permute_idempotents(A: AlgebraPresentation, order: Sequence[int]) -> AlgebraPresentation:
    """Same algebra with the distinguished idempotents (and witnesses) reordered."""
    idems = [A.idempotents[k] for k in order]
    prims = None if A.primitives is None else [A.primitives[k] for k in order]
    return AlgebraPresentation(A.dim, A.products, A.unit, idems, list(A.labels), prims, A.name)
