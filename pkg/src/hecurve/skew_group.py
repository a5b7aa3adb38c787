"""Skew group algebras A[G, phi] and the structural checks built on them.

The base rings are truncated series rings F[z]/(z^N) with F = Q(zeta_c), or
cyclotomic fields, always restricted to Q.  A semilinear automorphism of
F[z]/(z^N) is encoded as ``SeriesAutomorphism(s, e)``: coefficients move by
the Galois element zeta -> zeta^s and ``z -> zeta^e z``.

Product rule: ``a[f] * b[g] = a phi_f(b) [fg]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Sequence

from .errors import (
    ActionRelationViolation,
    CheckFailed,
    ConductorTooSmall,
    MalformedInput,
    NotIso,
    NotTransitive,
)
from .exact_linear import CyclotomicElem, EchelonBasis, as_int, lcm, mat_solve, totient
from .findim_algebra import (
    AlgebraPresentation,
    _check_idempotent_family,
    center,
    corner,
    ext_table,
    is_division_algebra,
    product_algebra,
    radical_echelon,
    radical_power_dims,
    vec_axpy,
)
from .hereditary_orders import build_standard_order, expected_hom_ext, order_spec
from .quiver_relations import cyclic_quiver, enumerate_basis, to_algebra


# ---------------------------------------------------------------------------
# finite groups


@dataclass
class FiniteGroup:
    """A finite group by elements, a multiplication function and named generators."""

    kind: str
    n: int
    elements: list
    mult: Callable
    identity: object
    generators: dict

    @property
    def order(self) -> int:
        return len(self.elements)

    def index(self, g) -> int:
        return self.elements.index(g)

    def inverse(self, g):
        for h in self.elements:
            if self.mult(g, h) == self.identity:
                return h
        raise ValueError("element has no inverse")  # pragma: no cover

    def power(self, g, k: int):
        out = self.identity
        for _ in range(k % self.order if k >= 0 else k % self.order):
            out = self.mult(out, g)
        return out

    def table_ok(self) -> bool:
        """Associativity and identity on the multiplication table."""
        els = self.elements
        for a in els:
            if self.mult(a, self.identity) != a or self.mult(self.identity, a) != a:
                return False
        return all(
            self.mult(self.mult(a, b), c) == self.mult(a, self.mult(b, c))
            for a in els for b in els for c in els
        )


def cyclic_group(n: int) -> FiniteGroup:
    return FiniteGroup("cyclic", n, list(range(n)), lambda a, b: (a + b) % n, 0, {"h": 1 % n if n else 0})


def dihedral_group(n: int) -> FiniteGroup:
    """D_n of order 2n; (a, b) stands for rho^a sigma^b."""
    els = [(a, b) for b in (0, 1) for a in range(n)]

    def mult(x, y):
        a, b = x
        c, d = y
        return ((a + (-1) ** b * c) % n, (b + d) % 2)

    return FiniteGroup("dihedral", n, els, mult, (0, 0), {"rho": (1 % n, 0), "sigma": (0, 1)})


def klein_four() -> FiniteGroup:
    group = dihedral_group(2)
    group.kind = "klein_four"
    return group


def product_group(first: FiniteGroup, second: FiniteGroup) -> FiniteGroup:
    els = [(a, b) for a in first.elements for b in second.elements]
    gens = {f"{k}.1": (g, second.identity) for k, g in first.generators.items()}
    gens.update({f"{k}.2": (first.identity, g) for k, g in second.generators.items()})
    return FiniteGroup(
        "product",
        first.order * second.order,
        els,
        lambda x, y: (first.mult(x[0], y[0]), second.mult(x[1], y[1])),
        (first.identity, second.identity),
        gens,
    )


def dihedral_relations_hold(group: FiniteGroup) -> bool:
    sigma, rho = group.generators["sigma"], group.generators["rho"]
    e = group.identity
    return (
        group.mult(sigma, sigma) == e
        and group.power(rho, group.n) == e
        and group.mult(group.mult(sigma, rho), group.inverse(sigma)) == group.inverse(rho)
    )


# ---------------------------------------------------------------------------
# base rings and automorphisms


def truncated_series_algebra(conductor: int, N: int) -> AlgebraPresentation:
    """F[z]/(z^N) over Q with basis z^k zeta^a at index k*phi + a."""
    phi = totient(conductor)
    zeta = [CyclotomicElem.zeta(conductor, a).coeffs for a in range(conductor)]
    products = {}
    for k in range(N):
        for l in range(N - k):
            for a in range(phi):
                for b in range(phi):
                    vec = {(k + l) * phi + t: Fraction(x) for t, x in enumerate(zeta[(a + b) % conductor]) if x}
                    products[(k * phi + a, l * phi + b)] = vec
    labels = [f"z{k}" + (f"w{a}" if a else "") for k in range(N) for a in range(phi)]
    one = {0: Fraction(1)}
    A = AlgebraPresentation(N * phi, products, one, [one], labels, name=f"F{conductor}[z]/z^{N}")
    A.cache["conductor"] = conductor
    return A


def cyclotomic_field_algebra(conductor: int) -> AlgebraPresentation:
    return truncated_series_algebra(conductor, 1)


@dataclass(frozen=True)
class SeriesAutomorphism:
    """alpha z^k -> galois_s(alpha) zeta^(e k) z^k on F[z]/(z^N), F = Q(zeta_c)."""

    conductor: int
    s: int = 1
    e: int = 0

    def __post_init__(self):
        if gcd(self.s, self.conductor) != 1:
            raise MalformedInput("Galois exponent must be a unit modulo the conductor")
        object.__setattr__(self, "s", self.s % self.conductor if self.conductor > 1 else 1)
        object.__setattr__(self, "e", self.e % self.conductor if self.conductor > 1 else 0)

    def compose(self, other: "SeriesAutomorphism") -> "SeriesAutomorphism":
        """self o other."""
        c = self.conductor
        return SeriesAutomorphism(c, self.s * other.s, self.e + self.s * other.e)

    def images(self, N: int) -> list[dict]:
        """phi(b_k) for every basis element of F[z]/(z^N)."""
        c, phi = self.conductor, totient(self.conductor)
        out = []
        for k in range(N):
            scale = CyclotomicElem.zeta(c, self.e * k)
            for a in range(phi):
                val = CyclotomicElem.zeta(c, a).galois(self.s) * scale
                out.append({k * phi + t: x for t, x in enumerate(val.coeffs) if x})
        return out


def conjugation(conductor: int) -> SeriesAutomorphism:
    return SeriesAutomorphism(conductor, -1, 0)


def rotation(conductor: int, n: int) -> SeriesAutomorphism:
    """z -> xi z with xi = a primitive n-th root of unity in Q(zeta_c)."""
    if conductor % n:
        raise ConductorTooSmall(f"Q(zeta_{conductor}) has no primitive {n}-th root of unity")
    return SeriesAutomorphism(conductor, 1, conductor // n)


# ---------------------------------------------------------------------------
# generic skew group algebra


@dataclass(eq=False)
class SkewGroupAlgebra:
    algebra: AlgebraPresentation
    base: AlgebraPresentation
    group: FiniteGroup
    action: list  # action[g_index] = list of images of base basis vectors

    def element(self, base_vec: dict, g) -> dict:
        """The algebra element a[g] for a base vector a."""
        off = self.group.index(g) * self.base.dim
        return {off + k: v for k, v in base_vec.items()}

    def group_element(self, g) -> dict:
        return self.element(self.base.unit, g)


def apply_linear(images: list[dict], vec: dict) -> dict:
    out: dict = {}
    for k, c in vec.items():
        vec_axpy(out, images[k], c)
    return out


def check_action(base: AlgebraPresentation, group: FiniteGroup, action: list) -> None:
    """phi_g must be unital ring automorphisms with phi_e = id and phi_f phi_g = phi_fg."""
    d = base.dim
    ident = group.index(group.identity)
    for k in range(d):
        if action[ident][k] != {k: Fraction(1)}:
            raise ActionRelationViolation("identity element does not act trivially")
    for gi, g in enumerate(group.elements):
        img = action[gi]
        if apply_linear(img, base.unit) != base.unit:
            raise ActionRelationViolation("action does not fix the unit", element=str(g))
        for i in range(d):
            for j in range(d):
                lhs = apply_linear(img, base.mul_basis(i, j))
                rhs = base.mul(img[i], img[j])
                if lhs != rhs:
                    raise ActionRelationViolation("action is not multiplicative", element=str(g))
        for hi, h in enumerate(group.elements):
            fg = group.index(group.mult(g, h))
            for k in range(d):
                if apply_linear(img, action[hi][k]) != action[fg][k]:
                    raise ActionRelationViolation(
                        "action is not a group homomorphism", pair=(str(g), str(h))
                    )


def skew_group_algebra(
    base: AlgebraPresentation, group: FiniteGroup, action: list, check: bool = True, name: str = ""
) -> SkewGroupAlgebra:
    """Basis b_k[g] at index g_index * dim(base) + k."""
    if check:
        check_action(base, group, action)
    d = base.dim
    products = {}
    for fi, f in enumerate(group.elements):
        for gi, g in enumerate(group.elements):
            fg = group.index(group.mult(f, g))
            for l in range(d):
                image = action[fi][l]
                for k in range(d):
                    prod = base.mul({k: Fraction(1)}, image)
                    if prod:
                        products[(fi * d + k, gi * d + l)] = {fg * d + t: v for t, v in prod.items()}
    ident = group.index(group.identity)
    unit = {ident * d + k: v for k, v in base.unit.items()}
    labels = [f"{base.labels[k]}[{g}]" for g in group.elements for k in range(d)]
    A = AlgebraPresentation(d * group.order, products, unit, [unit], labels, name=name)
    return SkewGroupAlgebra(A, base, group, action)


def series_action(group: FiniteGroup, generator_maps: dict, N: int) -> tuple[list, dict]:
    """Extend generator automorphisms to the group; raises on inconsistent relations.

    Returns the per-element image lists and the automorphism of each element.
    """
    maps = {group.identity: None}
    conductor = next(iter(generator_maps.values())).conductor if generator_maps else 1
    maps[group.identity] = SeriesAutomorphism(conductor, 1, 0)
    frontier = [group.identity]
    while frontier:
        g = frontier.pop()
        for name, gen in group.generators.items():
            if name not in generator_maps:
                raise MalformedInput(f"no automorphism given for generator {name}")
            h = group.mult(g, gen)
            candidate = maps[g].compose(generator_maps[name])
            if h in maps:
                if maps[h] != candidate:
                    raise ActionRelationViolation(
                        "generator automorphisms violate the group relations", element=str(h)
                    )
            else:
                maps[h] = candidate
                frontier.append(h)
    return [maps[g].images(N) for g in group.elements], maps


# ---------------------------------------------------------------------------
# builders for the standard actions


def build_skew_group(conductor: int, N: int, group: FiniteGroup, generator_maps: dict) -> SkewGroupAlgebra:
    base = truncated_series_algebra(conductor, N)
    action, _ = series_action(group, generator_maps, N)
    return skew_group_algebra(base, group, action, name=f"{group.kind}{group.n}-skew")


def cyclic_skew_algebra(n: int, N: int, conductor: int) -> SkewGroupAlgebra:
    """A[Z_n] with h: z -> xi z, xi = zeta_c^(c/n), coefficients fixed."""
    return build_skew_group(conductor, N, cyclic_group(n), {"h": rotation(conductor, n)})


def dihedral_conductor(n: int) -> int:
    """Conductor of the C-model used for the dihedral action of D_n."""
    return n if totient(n) == 2 else lcm(4, n)


def dihedral_skew_algebra(n: int, N: int, conductor: int | None = None) -> SkewGroupAlgebra:
    c = conductor or dihedral_conductor(n)
    group = dihedral_group(n)
    return build_skew_group(c, N, group, {"rho": rotation(c, n), "sigma": conjugation(c)})


# ---------------------------------------------------------------------------
# cyclic idempotents and the cyclic quiver isomorphism


def cyclic_idempotents(skew: SkewGroupAlgebra, n: int) -> list[dict]:
    """eps_k = (1/n) sum_j xi^(-k j) [h]^j for k = 0..n-1, with xi the rotation root.

    With this indexing z * eps_k = eps_{k+1} * z, so eps_{k+1} z eps_k is the
    arrow from vertex k to vertex k+1.
    """
    conductor = skew.base.cache["conductor"]
    xi_power = conductor // n
    out = []
    for k in range(n):
        vec: dict = {}
        for j in range(n):
            coeff = CyclotomicElem.zeta(conductor, -xi_power * k * j) * Fraction(1, n)
            vec_axpy(vec, skew.element({t: x for t, x in enumerate(coeff.coeffs) if x}, j % n))
        out.append(vec)
    return out


def idempotents_cyclic(n: int, conductor: int, N: int = 1):
    """The idempotents eps_k in A[Z_n]; verifies orthogonality and completeness exactly."""
    if conductor % n:
        raise ConductorTooSmall(f"conductor {conductor} is not divisible by {n}")
    skew = cyclic_skew_algebra(n, N, conductor)
    eps = cyclic_idempotents(skew, n)
    A = skew.algebra
    try:
        _check_idempotent_family(A, eps, complete=True)
    except Exception as exc:
        raise CheckFailed(f"cyclic idempotents fail: {exc}") from exc
    return skew, eps


@dataclass
class CyclicIsoReport:
    n: int
    N: int
    conductor: int
    source_dim: int
    target_dim: int
    rank: int
    homomorphism: bool
    idempotents_ok: bool
    arrows_ok: bool

    @property
    def verified(self) -> bool:
        return (
            self.source_dim == self.target_dim == self.rank
            and self.homomorphism
            and self.idempotents_ok
            and self.arrows_ok
        )

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "N": self.N,
            "conductor": self.conductor,
            "source_dim": self.source_dim,
            "target_dim": self.target_dim,
            "rank": self.rank,
            "homomorphism": self.homomorphism,
            "idempotents_to_vertices": self.idempotents_ok,
            "arrows": self.arrows_ok,
            "verified": self.verified,
        }


def cyclic_iso_to_order(n: int, N: int, conductor: int | None = None) -> CyclicIsoReport:
    """Verify mu: A[Z_n] -> F[cyclic n-quiver]/(paths of length >= N).

    mu sends [h]^j to sum_k xi^(k j) e_k, z to the sum of the arrows and
    fixes scalars; this is the extension of eps_k -> e_k and
    eps_{k+1} z eps_k -> a_k.
    """
    c = conductor or n
    if c % n:
        raise ConductorTooSmall(f"conductor {c} is not divisible by {n}")
    skew = cyclic_skew_algebra(n, N, c)
    src = skew.algebra
    spec = cyclic_quiver(n, N, c) if n > 1 else _loop_spec(N, c)
    qb = enumerate_basis(spec)
    tgt = to_algebra(spec)
    phi = totient(c)
    path_index = {}
    for m, item in enumerate(qb.basis_paths):
        path_index[item] = m
    xi = c // n

    def path_from(k: int, length: int):
        if n == 1:
            return (0, tuple([0] * length))
        return (k, tuple((k + t) % n for t in range(length)))

    def mu_basis(idx: int) -> dict:
        g, rest = divmod(idx, skew.base.dim)
        m, a = divmod(rest, phi)
        out: dict = {}
        for k in range(n):
            coeff = CyclotomicElem.zeta(c, a) * CyclotomicElem.zeta(c, xi * k * g)
            item = path_from(k, m)
            base = path_index[item] * phi
            for t, x in enumerate(coeff.coeffs):
                if x:
                    out[base + t] = out.get(base + t, 0) + x
        return {k: v for k, v in out.items() if v}

    images = [mu_basis(i) for i in range(src.dim)]
    rank = EchelonBasis(images).dim

    def mu(vec: dict) -> dict:
        out: dict = {}
        for k, v in vec.items():
            vec_axpy(out, images[k], v)
        return out

    hom_ok = all(
        mu(src.mul_basis(i, j)) == tgt.mul(images[i], images[j])
        for i in range(src.dim)
        for j in range(src.dim)
    )
    eps = cyclic_idempotents(skew, n)
    idem_ok = all(mu(e) == tgt.idempotents[k] for k, e in enumerate(eps))
    z = skew.element({phi: Fraction(1)}, 0) if N > 1 else {}
    arrows_ok = True
    if N > 1:
        for k in range(n):
            arrow = src.mul(src.mul(eps[(k + 1) % n], z), eps[k])
            item = path_from(k, 1)
            expected = {path_index[item] * phi: Fraction(1)}
            arrows_ok &= mu(arrow) == expected
    report = CyclicIsoReport(n, N, c, src.dim, tgt.dim, rank, hom_ok, idem_ok, arrows_ok)
    if not report.verified:
        raise NotIso("cyclic quiver isomorphism check failed", **report.to_json())
    return report


def _loop_spec(N: int, conductor: int):
    from .quiver_relations import Arrow, Quiver, QuiverAlgebraSpec

    return QuiverAlgebraSpec(Quiver(1, [Arrow(0, 0, "a0")]), [], conductor, kill_length=N, name="loop")


def cyclic_hom_ext(n: int, N: int, conductor: int | None = None) -> dict:
    """Hom/Ext^1 tables of the skew ring pointed by the eps_k, next to the order pattern."""
    c = conductor or n
    skew = cyclic_skew_algebra(n, N, c)
    A = skew.algebra
    A.idempotents = cyclic_idempotents(skew, n)
    hom = ext_table(A, 0)
    ext1 = ext_table(A, 1)
    expected = expected_hom_ext(order_spec([1] * n, N, c))
    return {"hom": hom, "ext1": ext1, "expected_hom": expected.hom, "expected_ext1": expected.ext1}


# ---------------------------------------------------------------------------
# dihedral decomposition


@dataclass
class DihedralDecompositionReport:
    n: int
    N: int
    conductor: int
    dim_iterated: int
    dim_direct: int
    structure_constants_equal: bool
    psi_fixes_idempotents: bool
    psi_is_action: bool

    @property
    def verified(self) -> bool:
        return (
            self.dim_iterated == self.dim_direct
            and self.structure_constants_equal
            and self.psi_fixes_idempotents
            and self.psi_is_action
        )

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "N": self.N,
            "conductor": self.conductor,
            "dim_iterated": self.dim_iterated,
            "dim_direct": self.dim_direct,
            "structure_constants_equal": self.structure_constants_equal,
            "psi_fixes_idempotents": self.psi_fixes_idempotents,
            "psi_is_action": self.psi_is_action,
            "verified": self.verified,
        }


def dihedral_decompose(n: int, N: int, conductor: int | None = None) -> DihedralDecompositionReport:
    """(A[N, phi])[C, psi] versus A[D_n, phi] under (a[h]){sigma^m} -> a[h sigma^m]."""
    c = conductor or dihedral_conductor(n)
    direct = dihedral_skew_algebra(n, N, c)
    inner = cyclic_skew_algebra(n, N, c)  # A[<rho>]
    B = inner.algebra
    d = inner.base.dim
    conj_images = conjugation(c).images(N)
    # psi_sigma(a[rho^j]) = phi_sigma(a)[rho^-j]
    psi = []
    for idx in range(B.dim):
        j, k = divmod(idx, d)
        psi.append({((-j) % n) * d + t: v for t, v in conj_images[k].items()})
    ident = [{k: Fraction(1)} for k in range(B.dim)]
    C = cyclic_group(2)
    try:
        check_action(B, C, [ident, psi])
        psi_ok = True
    except ActionRelationViolation:
        psi_ok = False
    iterated = skew_group_algebra(B, C, [ident, psi], check=False)
    # bijection: iterated index m*dim(B) + j*d + k  ->  direct index of b_k[rho^j sigma^m]
    group = direct.group
    perm = {}
    for m in range(2):
        for j in range(n):
            for k in range(d):
                g = group.mult((j, 0), (0, m))
                perm[m * B.dim + j * d + k] = group.index(g) * d + k
    It, Di = iterated.algebra, direct.algebra
    same = len(perm) == Di.dim and sorted(perm.values()) == list(range(Di.dim))
    if same:
        for (i, j), vec in It.products.items():
            mapped = {perm[k]: v for k, v in vec.items()}
            if Di.products.get((perm[i], perm[j]), {}) != mapped:
                same = False
                break
        if same:
            inverse = {v: k for k, v in perm.items()}
            for (i, j), vec in Di.products.items():
                if (inverse[i], inverse[j]) not in It.products and vec:
                    same = False
                    break
    eps = cyclic_idempotents(inner, n)
    fixes = all(apply_linear(psi, e) == e for e in eps)
    report = DihedralDecompositionReport(n, N, c, It.dim, Di.dim, same, fixes, psi_ok)
    if not report.verified:
        raise NotIso("dihedral decomposition check failed", **report.to_json())
    return report


# ---------------------------------------------------------------------------
# dihedral structure versus M_2(H_n(O))


@dataclass
class DihedralStructureReport:
    n: int
    M: int
    dims: tuple
    centers: tuple
    radical_filtrations: tuple
    fixed_ring_dim: int

    @property
    def agree(self) -> bool:
        return (
            self.dims[0] == self.dims[1]
            and self.centers[0] == self.centers[1]
            and self.radical_filtrations[0] == self.radical_filtrations[1]
        )

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "M": self.M,
            "dims": list(self.dims),
            "center_dims": list(self.centers),
            "radical_filtrations": [list(x) for x in self.radical_filtrations],
            "fixed_ring_dim": self.fixed_ring_dim,
            "agree": self.agree,
        }


def matrix_order_comparison(n: int, T: int) -> AlgebraPresentation:
    """M_2(H_n(O)) modulo t^T, with O = Q[t]; as the standard order with weights (2,...,2).

    Truncating at rad^(nT) gives diagonal and lower blocks t^0..t^(T-1) and
    upper blocks t^1..t^T, i.e. exactly the quotient by t^T M_2(H_n(O)).
    """
    return build_standard_order(order_spec([2] * n, N=T + 1, conductor=1, radical_cut=n * T))


def dihedral_structure_check(n: int, M: int) -> DihedralStructureReport:
    """A[D_n, phi] with A = C[z]/(z^M) against M_2(H_n(O)) with O truncated at t^(M/n)."""
    if n < 1 or M < 1 or M % n:
        raise CheckFailed(f"truncation {M} must be a positive multiple of n = {n}")
    T = M // n
    skew = dihedral_skew_algebra(n, M).algebra
    target = matrix_order_comparison(n, T)
    report = DihedralStructureReport(
        n=n,
        M=M,
        dims=(skew.dim, target.dim),
        centers=(len(center(skew)), len(center(target))),
        radical_filtrations=(tuple(radical_power_dims(skew)), tuple(radical_power_dims(target))),
        fixed_ring_dim=T,
    )
    if not report.agree:
        raise CheckFailed("dihedral skew ring and matrix order differ", **report.to_json())
    return report


# ---------------------------------------------------------------------------
# Galois skew group rings of cyclotomic fields


def unit_group(n: int) -> list[int]:
    return [k for k in range(1, max(n, 2)) if gcd(k, n) == 1] if n > 1 else [1]


def subgroup_closure(n: int, generators: Sequence[int]) -> list[int]:
    group = {1 % n if n > 1 else 1}
    frontier = list(group)
    while frontier:
        g = frontier.pop()
        for s in generators:
            h = (g * s) % n if n > 1 else 1
            if h not in group:
                group.add(h)
                frontier.append(h)
    return sorted(group)


def all_subgroups(n: int) -> list[list[int]]:
    units = unit_group(n)
    seen = set()
    out = []
    for a in units:
        for b in units:
            H = tuple(subgroup_closure(n, [a, b]))
            if H not in seen:
                seen.add(H)
                out.append(list(H))
    return sorted(out, key=lambda H: (len(H), H))


@dataclass
class GaloisReport:
    conductor: int
    subgroup: list
    dim: int
    radical_dim: int
    center_dim: int
    fixed_degree: int
    witness_count: int
    witnesses_ok: bool
    corner_dims: list
    corners_division: bool

    @property
    def verified(self) -> bool:
        g = len(self.subgroup)
        return (
            self.radical_dim == 0
            and self.center_dim == self.fixed_degree
            and self.dim == g * g * self.fixed_degree
            and self.witness_count == g
            and self.witnesses_ok
            and all(d == self.fixed_degree for d in self.corner_dims)
            and self.corners_division
        )

    def to_json(self) -> dict:
        return {
            "conductor": self.conductor,
            "subgroup": self.subgroup,
            "dim": self.dim,
            "radical_dim": self.radical_dim,
            "center_dim": self.center_dim,
            "fixed_degree": self.fixed_degree,
            "witness_count": self.witness_count,
            "matrix_units_ok": self.witnesses_ok,
            "corner_dims": self.corner_dims,
            "corners_division": self.corners_division,
            "verified": self.verified,
        }


def galois_matrix_check(conductor: int, generators: Sequence[int]) -> GaloisReport:
    """L[G] for G a subgroup of Gal(Q(zeta_n)/Q) must be M_|G|(K), K = L^G."""
    n = conductor
    G = subgroup_closure(n, generators)
    phi = totient(n)
    L = cyclotomic_field_algebra(n)
    group = FiniteGroup("galois", n, G, lambda a, b: (a * b) % n if n > 1 else 1, 1 % n if n > 1 else 1,
                        {f"g{s}": s % n if n > 1 else 1 for s in generators})
    action = [SeriesAutomorphism(n, g, 0).images(1) for g in G]
    skew = skew_group_algebra(L, group, action)
    A = skew.algebra
    m = len(G)
    degree = phi // m

    def field_elem(vec: dict) -> CyclotomicElem:
        return CyclotomicElem(n, [vec.get(t, Fraction(0)) for t in range(phi)])

    def as_vec(x: CyclotomicElem) -> dict:
        return {t: c for t, c in enumerate(x.coeffs) if c}

    def rel_trace(x: CyclotomicElem) -> CyclotomicElem:
        total = CyclotomicElem.zero(n)
        for g in G:
            total = total + x.galois(g)
        return total

    basis = [CyclotomicElem.zeta(n, i) for i in range(m)]
    duals = []
    for j in range(m):
        # unknown y in L with Tr(y b_l) = delta_jl for all l (equalities in L)
        rows, rhs = [], []
        for l in range(m):
            images = [rel_trace(CyclotomicElem.zeta(n, t) * basis[l]).coeffs for t in range(phi)]
            for coord in range(phi):
                rows.append([images[t][coord] for t in range(phi)])
                rhs.append(Fraction(1 if (j == l and coord == 0) else 0))
        sol = mat_solve(rows, rhs)
        if sol is None:
            raise CheckFailed("no trace-dual basis found", conductor=n)
        duals.append(CyclotomicElem(n, sol))
    units = {}
    for i in range(m):
        for j in range(m):
            vec: dict = {}
            for g in G:
                vec_axpy(vec, skew.element(as_vec(basis[i] * duals[j].galois(g)), g))
            units[(i, j)] = vec
    ok = True
    total: dict = {}
    for i in range(m):
        vec_axpy(total, units[(i, i)])
        for j in range(m):
            for k in range(m):
                for l in range(m):
                    expected = units[(i, l)] if j == k else {}
                    if A.mul(units[(i, j)], units[(k, l)]) != expected:
                        ok = False
    ok &= total == A.unit
    witnesses = [units[(i, i)] for i in range(m)]
    corners = [corner(A, w).algebra for w in witnesses]
    division = all(is_division_algebra(cn) for cn in corners)
    report = GaloisReport(
        conductor=n,
        subgroup=G,
        dim=A.dim,
        radical_dim=radical_echelon(A).dim,
        center_dim=len(center(A)),
        fixed_degree=degree,
        witness_count=len(witnesses),
        witnesses_ok=ok,
        corner_dims=[cn.dim for cn in corners],
        corners_division=division,
    )
    if not report.verified:
        raise CheckFailed("Galois skew group ring is not the expected matrix algebra", **report.to_json())
    return report


# ---------------------------------------------------------------------------
# reduction of transitive product actions


@dataclass
class ProductActionSpec:
    """A cyclic group of order ``order`` acting on t copies of F[z]/(z^N).

    The generator sends factor i to factor ``perm[i]`` by the automorphism
    ``maps[i]``.
    """

    copies: int
    N: int
    conductor: int
    order: int
    perm: list
    maps: list  # SeriesAutomorphism per factor

    @classmethod
    def from_json(cls, data: dict) -> "ProductActionSpec":
        try:
            c = as_int(data.get("conductor", 1))
            maps = [SeriesAutomorphism(c, as_int(m.get("galois", 1)), as_int(m.get("xi_exponent", 0)))
                    for m in data["maps"]]
            return cls(as_int(data["copies"]), as_int(data["N"]), c, as_int(data["order"]),
                       [as_int(p) for p in data["perm"]], maps)
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"bad product action spec: {exc}") from exc


@dataclass
class ReductionReport:
    copies: int
    group_order: int
    stabilizer_order: int
    corner_dim: int
    reduced_dim: int
    isomorphic: bool

    def to_json(self) -> dict:
        return {
            "copies": self.copies,
            "group_order": self.group_order,
            "stabilizer_order": self.stabilizer_order,
            "corner_dim": self.corner_dim,
            "reduced_dim": self.reduced_dim,
            "isomorphic": self.isomorphic,
        }


def _product_action_images(spec: ProductActionSpec, single_dim: int) -> list[dict]:
    out = [None] * (spec.copies * single_dim)
    for i in range(spec.copies):
        imgs = spec.maps[i].images(spec.N)
        dest = spec.perm[i] * single_dim
        for k in range(single_dim):
            out[i * single_dim + k] = {dest + t: v for t, v in imgs[k].items()}
    return out


def reduce_transitive(spec: ProductActionSpec) -> ReductionReport:
    """Compare e_1 A[G] e_1 with A_1[G_stab] through a[g] -> a[g]."""
    t, m = spec.copies, spec.order
    if sorted(spec.perm) != list(range(t)) or len(spec.maps) != t:
        raise MalformedInput("perm must be a permutation with one map per factor")
    orbit, x = {0}, spec.perm[0]
    while x != 0:
        orbit.add(x)
        x = spec.perm[x]
    if len(orbit) != t:
        raise NotTransitive("the generator does not permute the factors transitively")
    single = truncated_series_algebra(spec.conductor, spec.N)
    d = single.dim
    base = product_algebra([single] * t)
    gen_images = _product_action_images(spec, d)
    powers = [[{k: Fraction(1)} for k in range(base.dim)]]
    for _ in range(1, m):
        powers.append([apply_linear(gen_images, v) for v in powers[-1]])
    if [apply_linear(gen_images, v) for v in powers[-1]] != powers[0]:
        raise ActionRelationViolation("generator does not have the declared order")
    group = cyclic_group(m)
    skew = skew_group_algebra(base, group, powers)
    # stabilizer of the first factor: powers divisible by t
    stab = [g for g in range(m) if g % t == 0]
    sub_group = cyclic_group(m // t)
    stab_action = [[{k: v for k, v in powers[g][k].items()} for k in range(d)] for g in stab]
    reduced = skew_group_algebra(single, sub_group, stab_action)
    e1 = skew.element({k: v for k, v in single.unit.items()}, 0)
    cn = corner(skew.algebra, e1)
    # correspondence a[g] -> a[g] on the first factor
    images = []
    for gi, g in enumerate(stab):
        for k in range(d):
            images.append(skew.element({k: Fraction(1)}, g))
    in_corner = all(cn.echelon.contains(v) for v in images)
    spans = EchelonBasis(images).dim == cn.algebra.dim == reduced.algebra.dim
    mult_ok = True
    if in_corner and spans:
        R = reduced.algebra
        for i in range(R.dim):
            for j in range(R.dim):
                lhs: dict = {}
                for k, v in R.mul_basis(i, j).items():
                    vec_axpy(lhs, images[k], v)
                if skew.algebra.mul(images[i], images[j]) != lhs:
                    mult_ok = False
                    break
            if not mult_ok:
                break
    report = ReductionReport(t, m, len(stab), cn.algebra.dim, reduced.algebra.dim,
                             in_corner and spans and mult_ok)
    if not report.isomorphic:
        raise NotIso("corner and reduced skew ring differ", **report.to_json())
    return report


# ---------------------------------------------------------------------------
# JSON action specs


def group_from_json(data: dict) -> FiniteGroup:
    kind = data.get("kind")
    if kind == "cyclic":
        return cyclic_group(as_int(data["n"]))
    if kind == "dihedral":
        return dihedral_group(as_int(data["n"]))
    if kind == "klein_four":
        return klein_four()
    if kind == "product":
        first, second = (group_from_json(g) for g in data["factors"])
        return product_group(first, second)
    raise MalformedInput(f"unknown group kind {kind!r}")


def skew_from_json(data: dict) -> SkewGroupAlgebra:
    """Build from {group, conductor, truncation, generators: {name: {conjugate, xi_exponent}}}."""
    try:
        group = group_from_json(data["group"])
        c = as_int(data.get("conductor", 1))
        N = as_int(data.get("truncation", 1))
        maps = {}
        for name, gen in data["generators"].items():
            s = -1 if gen.get("conjugate", False) else as_int(gen.get("galois", 1))
            maps[name] = SeriesAutomorphism(c, s, as_int(gen.get("xi_exponent", 0)))
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad action spec: {exc}") from exc
    return build_skew_group(c, N, group, maps)
