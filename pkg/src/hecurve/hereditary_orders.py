"""Standard hereditary orders H(A, p) over a truncated series ring A = F[z]/(z^N).

Matrix positions ``(u, v)`` of an ``n x n`` matrix, ``n = sum(p)``, carry
``F z^k`` for ``k < N``; above the block diagonal only ``k >= 1`` occurs
(the entries in ``J = zA``).  F = Q(zeta_c) is restricted to Q, so a basis
element is ``e_uv z^k zeta^a``.

Blocks are indexed from 0 and the successor of block ``j`` is
``(j + 1) % r``.  The block of ``j`` is the ``j``-th weight.

Every basis element has a level ``r*k + block(u) - block(v) >= 0``; levels
add under multiplication and the radical is the span of positive levels.
With ``radical_cut=M`` the order is truncated at ``rad^M`` instead of
``z^N``; this is the truncation that matches path-length cuts of cyclic
quivers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import IndexOutOfRange, MalformedInput, PatternMismatch
from .exact_linear import CyclotomicElem, EchelonBasis, as_int, kernel_of_map, totient
from .findim_algebra import (
    AlgebraPresentation,
    engine,
    division_dims,
    min_proj_resolution,
    radical_echelon,
    span_equal_echelon,
)


@dataclass(frozen=True)
class TruncatedDVR:
    conductor: int = 1
    N: int = 2

    def __post_init__(self):
        if self.N < 1:
            raise MalformedInput("truncation order must be positive")
        totient(self.conductor)

    @property
    def residue_dim(self) -> int:
        """dim_Q of the residue field D = A/zA."""
        return totient(self.conductor)


@dataclass(frozen=True)
class StandardOrderSpec:
    base: TruncatedDVR
    weights: tuple
    radical_cut: int | None = None

    def __post_init__(self):
        try:
            weights = tuple(as_int(p) for p in self.weights)
        except (TypeError, ValueError):
            weights = ()
        if not weights or any(p < 1 for p in weights):
            raise MalformedInput("weights must be a nonempty list of positive integers")
        object.__setattr__(self, "weights", weights)

    @property
    def r(self) -> int:
        return len(self.weights)

    @property
    def size(self) -> int:
        return sum(self.weights)

    def block_of(self) -> list[int]:
        out = []
        for b, p in enumerate(self.weights):
            out.extend([b] * p)
        return out

    def first_rows(self) -> list[int]:
        rows, start = [], 0
        for p in self.weights:
            rows.append(start)
            start += p
        return rows

    def to_json(self) -> dict:
        out = {"conductor": self.base.conductor, "N": self.base.N, "weights": list(self.weights)}
        if self.radical_cut is not None:
            out["radical_cut"] = self.radical_cut
        return out

    @classmethod
    def from_json(cls, data: dict) -> "StandardOrderSpec":
        try:
            return cls(
                TruncatedDVR(as_int(data.get("conductor", 1)), as_int(data.get("N", 2))),
                tuple(as_int(p) for p in data["weights"]),
                data.get("radical_cut"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"bad order spec: {exc}") from exc


def order_spec(weights: Sequence[int], N: int = 2, conductor: int = 1, radical_cut: int | None = None):
    return StandardOrderSpec(TruncatedDVR(conductor, N), tuple(weights), radical_cut)


# ---------------------------------------------------------------------------
# construction


@dataclass
class OrderBasis:
    spec: StandardOrderSpec
    entries: list  # (u, v, k, a)
    index: dict

    def level(self, entry) -> int:
        u, v, k, _ = entry
        block = self.spec.block_of()
        return self.spec.r * k + block[u] - block[v]


def allowed_powers(spec: StandardOrderSpec, u: int, v: int) -> range:
    block = spec.block_of()
    low = 1 if block[u] < block[v] else 0
    if spec.radical_cut is None:
        return range(low, spec.base.N)
    # keep level r*k + block(u) - block(v) < radical_cut
    limit = spec.radical_cut - (block[u] - block[v])
    high = -(-limit // spec.r)  # ceil(limit / r)
    return range(low, max(low, high))


def order_basis(spec: StandardOrderSpec) -> OrderBasis:
    n, phi = spec.size, spec.base.residue_dim
    entries = []
    for u in range(n):
        for v in range(n):
            for k in allowed_powers(spec, u, v):
                for a in range(phi):
                    entries.append((u, v, k, a))
    return OrderBasis(spec, entries, {e: i for i, e in enumerate(entries)})


def build_standard_order(spec: StandardOrderSpec) -> AlgebraPresentation:
    """Structure constants of H(A, p) with block idempotents and row witnesses."""
    ob = order_basis(spec)
    n, c = spec.size, spec.base.conductor
    phi = spec.base.residue_dim
    zeta = [CyclotomicElem.zeta(c, a).coeffs for a in range(c)]
    by_row: dict = {}
    for i, (u, v, k, a) in enumerate(ob.entries):
        by_row.setdefault(u, []).append(i)
    products = {}
    index = ob.index
    for i, (u, v, k, a) in enumerate(ob.entries):
        for j in by_row.get(v, ()):
            _, w, l, b = ob.entries[j]
            vec = {}
            for t, x in enumerate(zeta[(a + b) % c]):
                if x:
                    target = index.get((u, w, k + l, t))
                    if target is not None:
                        vec[target] = Fraction(x)
            if vec:
                products[(i, j)] = vec
    block = spec.block_of()
    idems = []
    for b in range(spec.r):
        idems.append({index[(u, u, 0, 0)]: Fraction(1) for u in range(n) if block[u] == b})
    prims = [{index[(u, u, 0, 0)]: Fraction(1)} for u in spec.first_rows()]
    unit = {index[(u, u, 0, 0)]: Fraction(1) for u in range(n)}
    labels = [f"e{u}{v}z{k}" + (f"w{a}" if a else "") for (u, v, k, a) in ob.entries]
    A = AlgebraPresentation(len(ob.entries), products, unit, idems, labels, prims,
                            name=f"H{list(spec.weights)}")
    A.cache["order_basis"] = ob
    return A


def _order_basis_of(A: AlgebraPresentation, spec: StandardOrderSpec) -> OrderBasis:
    ob = A.cache.get("order_basis")
    return ob if ob is not None else order_basis(spec)


# ---------------------------------------------------------------------------
# radical


@dataclass
class RadicalPatternReport:
    pattern_dim: int
    radical_dim: int
    quotient_dim: int
    expected_quotient_dim: int
    verified: bool

    def to_json(self) -> dict:
        return {
            "pattern_dim": self.pattern_dim,
            "radical_dim": self.radical_dim,
            "quotient_dim": self.quotient_dim,
            "expected_quotient_dim": self.expected_quotient_dim,
            "verified": self.verified,
        }


def radical_pattern_basis(spec: StandardOrderSpec, A: AlgebraPresentation | None = None) -> list[dict]:
    """Basis elements of positive level: everything except the block-diagonal z^0 entries."""
    ob = _order_basis_of(A, spec) if A is not None else order_basis(spec)
    return [{i: Fraction(1)} for i, e in enumerate(ob.entries) if ob.level(e) > 0]


def radical_pattern(spec: StandardOrderSpec, A: AlgebraPresentation | None = None) -> RadicalPatternReport:
    """Compare the displayed radical pattern with the trace-form radical."""
    A = A if A is not None else build_standard_order(spec)
    pattern = EchelonBasis(radical_pattern_basis(spec, A))
    computed = radical_echelon(A)
    if not span_equal_echelon(pattern, computed):
        raise PatternMismatch(
            "radical pattern differs from the computed radical",
            pattern_dim=pattern.dim,
            radical_dim=computed.dim,
        )
    expected = spec.base.residue_dim * sum(p * p for p in spec.weights)
    quotient = A.dim - computed.dim
    if quotient != expected:
        raise PatternMismatch(
            "H/rad has the wrong dimension", quotient_dim=quotient, expected=expected
        )
    return RadicalPatternReport(pattern.dim, computed.dim, quotient, expected, True)


# ---------------------------------------------------------------------------
# projectives and the resolution maps


@dataclass
class SimpleResolutionMap:
    """epsilon_j : P_{j+1} -> P_j given by right multiplication by ``multiplier``."""

    j: int
    multiplier: str
    source_dim: int
    target_dim: int
    image_dim: int
    kernel_dim: int
    cokernel_dim: int
    simple_dim: int
    image_is_expected: bool

    @property
    def exact(self) -> bool:
        return self.cokernel_dim == self.simple_dim and self.image_is_expected

    def to_json(self) -> dict:
        return {
            "j": self.j,
            "multiplier": self.multiplier,
            "source_dim": self.source_dim,
            "target_dim": self.target_dim,
            "image_dim": self.image_dim,
            "kernel_dim": self.kernel_dim,
            "cokernel_dim": self.cokernel_dim,
            "simple_dim": self.simple_dim,
            "exact": self.exact,
        }


def column_module(A: AlgebraPresentation, spec: StandardOrderSpec, j: int) -> list[int]:
    """Basis indices of the column module P_j = H e_{u_j u_j}."""
    ob = _order_basis_of(A, spec)
    col = spec.first_rows()[j]
    return [i for i, (u, v, k, a) in enumerate(ob.entries) if v == col]


def simple_resolution(spec: StandardOrderSpec, j: int, A: AlgebraPresentation | None = None) -> SimpleResolutionMap:
    """The map P_{j+1} -> P_j whose cokernel is S_j.

    For ``j < r-1`` it is the inclusion of column modules (right
    multiplication by the matrix unit e_{u_{j+1}, u_j}); for the last block
    it is right multiplication by z e_{u_0, u_{r-1}}, i.e. by the chosen
    generator w = z of J.  At truncation the last map loses injectivity on
    the top z-degree, which the report records as ``kernel_dim``.
    """
    if not 0 <= j < spec.r:
        raise IndexOutOfRange(f"block index {j} outside 0..{spec.r - 1}")
    A = A if A is not None else build_standard_order(spec)
    ob = _order_basis_of(A, spec)
    rows = spec.first_rows()
    nxt = (j + 1) % spec.r
    power = 1 if nxt == 0 else 0
    mult_entry = (rows[nxt], rows[j], power, 0)
    if mult_entry not in ob.index:
        raise MalformedInput("truncation too short for the resolution map")
    mult = {ob.index[mult_entry]: Fraction(1)}
    source = column_module(A, spec, nxt)
    target = column_module(A, spec, j)
    images = [A.mul({i: Fraction(1)}, mult) for i in source]
    image = EchelonBasis(images)
    kernel_dim = len(kernel_of_map(images))
    # expected image: target entries whose preimage entry exists in P_{j+1}
    src_col = rows[nxt]
    expected = EchelonBasis(
        {i: 1}
        for i in target
        if (ob.entries[i][0], src_col, ob.entries[i][2] - power, ob.entries[i][3]) in ob.index
    )
    simple_dim = spec.weights[j] * spec.base.residue_dim
    label = f"z*e[{rows[nxt]},{rows[j]}]" if power else f"e[{rows[nxt]},{rows[j]}]"
    return SimpleResolutionMap(
        j=j,
        multiplier=label,
        source_dim=len(source),
        target_dim=len(target),
        image_dim=image.dim,
        kernel_dim=kernel_dim,
        cokernel_dim=len(target) - image.dim,
        simple_dim=simple_dim,
        image_is_expected=span_equal_echelon(image, expected),
    )


# ---------------------------------------------------------------------------
# Hom / Ext tables and Morita data


@dataclass
class OrderHomExtTable:
    hom: list
    ext1: list

    def to_json(self) -> dict:
        return {"hom": self.hom, "ext1": self.ext1}


def hom_ext_table(spec: StandardOrderSpec, A: AlgebraPresentation | None = None) -> OrderHomExtTable:
    """dim_Q Hom(S_i, S_j) and Ext^1(S_i, S_j) from minimal resolutions of the simples."""
    A = A if A is not None else build_standard_order(spec)
    r = spec.r
    hom = [[0] * r for _ in range(r)]
    ext1 = [[0] * r for _ in range(r)]
    d = division_dims(A)
    for i in range(r):
        terms = min_proj_resolution(A, i, max_len=1, require_finite=False)
        terms = terms + [[0] * r] * (2 - len(terms))
        for j in range(r):
            hom[i][j], ext1[i][j] = terms[0][j] * d[j], terms[1][j] * d[j]
    return OrderHomExtTable(hom, ext1)


def expected_hom_ext(spec: StandardOrderSpec) -> OrderHomExtTable:
    """The pattern: Hom = d on the diagonal, Ext^1 = d on the cyclic superdiagonal."""
    r, d = spec.r, spec.base.residue_dim
    hom = [[d if i == j else 0 for j in range(r)] for i in range(r)]
    ext1 = [[d if j == (i + 1) % r else 0 for j in range(r)] for i in range(r)]
    return OrderHomExtTable(hom, ext1)


def tau_on_simples(spec: StandardOrderSpec) -> list[int]:
    """Auslander-Reiten translate on simples as the shift i -> i+1 (mod r)."""
    return [(i + 1) % spec.r for i in range(spec.r)]


def ar_duality_holds(spec: StandardOrderSpec, table: OrderHomExtTable) -> bool:
    """dim Hom(S_i, S_j) == dim Ext^1(S_j, tau S_i) for all i, j."""
    tau = tau_on_simples(spec)
    r = spec.r
    return all(table.hom[i][j] == table.ext1[j][tau[i]] for i in range(r) for j in range(r))


def morita_profile(spec: StandardOrderSpec, A: AlgebraPresentation | None = None) -> dict:
    """Morita-invariant fingerprint: block count, residue dimension and the tables."""
    table = hom_ext_table(spec, A)
    return {
        "r": spec.r,
        "dim_D": spec.base.residue_dim,
        "hom": table.hom,
        "ext1": table.ext1,
    }


def rotate_table(table: OrderHomExtTable, shift: int) -> OrderHomExtTable:
    """Re-index a table by i -> i + shift (mod r)."""
    r = len(table.hom)
    perm = lambda M: [[M[(i + shift) % r][(j + shift) % r] for j in range(r)] for i in range(r)]
    return OrderHomExtTable(perm(table.hom), perm(table.ext1))


def order_report(spec: StandardOrderSpec) -> dict:
    A = build_standard_order(spec)
    pattern = radical_pattern(spec, A)
    table = hom_ext_table(spec, A)
    expected = expected_hom_ext(spec)
    resolutions = [simple_resolution(spec, j, A) for j in range(spec.r)]
    return {
        "spec": spec.to_json(),
        "dim": A.dim,
        "radical": pattern.to_json(),
        "hom": table.hom,
        "ext1": table.ext1,
        "matches_pattern": table.hom == expected.hom and table.ext1 == expected.ext1,
        "tau": tau_on_simples(spec),
        "ar_duality": ar_duality_holds(spec, table),
        "resolutions": [res.to_json() for res in resolutions],
    }
