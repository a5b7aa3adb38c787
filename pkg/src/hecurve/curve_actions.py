"""Finite group actions on plane projective curves over cyclotomic fields.

Points are verified, never solved for: callers hand in candidate points and
the module checks curve membership, stabilizers and orbits exactly.  Group
elements act by monomial matrices, optionally composed with complex
conjugation (the Galois element zeta -> zeta^-1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import (
    CurveNotPreserved,
    Inconsistent,
    MalformedInput,
    PointNotOnCurve,
    RelationFails,
    UnknownKind,
)
from .exact_linear import CyclotomicElem, as_fraction, as_int, conductor_lift
from .skew_group import FiniteGroup, cyclic_group, dihedral_group, group_from_json


def _lift(value, conductor: int) -> CyclotomicElem:
    if isinstance(value, CyclotomicElem):
        return conductor_lift(value, conductor) if value.conductor != conductor else value
    return CyclotomicElem.rational(conductor, as_fraction(value))


def _conj(value: CyclotomicElem, flag: bool) -> CyclotomicElem:
    return value.conjugate() if flag else value


# ---------------------------------------------------------------------------
# curves and points


@dataclass
class PlaneCurve:
    """Homogeneous F(x, y, z) as {(a, b, c): coefficient}."""

    conductor: int
    terms: dict
    genus: int
    name: str = ""

    def __post_init__(self):
        self.terms = {tuple(k): _lift(v, self.conductor) for k, v in self.terms.items()}
        self.terms = {k: v for k, v in self.terms.items() if not v.is_zero()}
        degrees = {sum(k) for k in self.terms}
        if len(degrees) > 1:
            raise MalformedInput("curve equation is not homogeneous", degrees=sorted(degrees))
        self.degree = degrees.pop() if degrees else 0

    def evaluate(self, point: Sequence[CyclotomicElem]) -> CyclotomicElem:
        total = CyclotomicElem.zero(self.conductor)
        for exps, coeff in self.terms.items():
            term = coeff
            for x, e in zip(point, exps):
                term = term * x**e
            total = total + term
        return total

    def contains(self, point) -> bool:
        return self.evaluate(point).is_zero()

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "conductor": self.conductor,
            "degree": self.degree,
            "genus": self.genus,
            "terms": [[list(k), v.to_json()] for k, v in sorted(self.terms.items())],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PlaneCurve":
        c = as_int(data.get("conductor", 1))
        terms = {tuple(k): _value_from_json(v, c) for k, v in data["terms"]}
        curve = cls(c, terms, as_int(data.get("genus", 1)), data.get("name", ""))
        if "degree" in data and as_int(data["degree"]) != curve.degree:
            raise MalformedInput("declared degree does not match the equation")
        return curve


def _value_from_json(value, conductor: int) -> CyclotomicElem:
    if isinstance(value, dict):
        return _lift(CyclotomicElem.from_json(value), conductor)
    return CyclotomicElem.rational(conductor, as_fraction(value))


def normalize_point(point: Sequence[CyclotomicElem]) -> tuple:
    """Scale so the last nonzero coordinate is 1."""
    for x in reversed(point):
        if not x.is_zero():
            inv = x.inv()
            return tuple(c * inv for c in point)
    raise MalformedInput("the zero vector is not a projective point")


def point_text(point) -> str:
    return "(" + ":".join(str(c) for c in point) + ")"


# ---------------------------------------------------------------------------
# semilinear projective maps


@dataclass(frozen=True)
class SemilinearProjMap:
    """p -> M conj^c(p) with M monomial: row i reads coordinate perm[i] times scale[i]."""

    perm: tuple
    scale: tuple
    conjugate: bool = False

    def __post_init__(self):
        if sorted(self.perm) != [0, 1, 2] or any(s.is_zero() for s in self.scale):
            raise MalformedInput("map must be an invertible monomial 3x3 matrix")

    @classmethod
    def from_matrix(cls, matrix, conductor: int, conjugate: bool = False) -> "SemilinearProjMap":
        perm, scale = [], []
        for row in matrix:
            entries = [_lift(x, conductor) if not isinstance(x, dict) else _value_from_json(x, conductor)
                       for x in row]
            nonzero = [j for j, x in enumerate(entries) if not x.is_zero()]
            if len(nonzero) != 1:
                raise MalformedInput("map matrix must have one nonzero entry per row")
            perm.append(nonzero[0])
            scale.append(entries[nonzero[0]])
        return cls(tuple(perm), tuple(scale), conjugate)

    @classmethod
    def identity(cls, conductor: int) -> "SemilinearProjMap":
        one = CyclotomicElem.one(conductor)
        return cls((0, 1, 2), (one, one, one))

    def apply(self, point) -> tuple:
        p = [_conj(x, self.conjugate) for x in point]
        return tuple(self.scale[i] * p[self.perm[i]] for i in range(3))

    def compose(self, other: "SemilinearProjMap") -> "SemilinearProjMap":
        """self o other, i.e. (M1, c1)(M2, c2) = (M1 c1(M2), c1 xor c2)."""
        perm = tuple(other.perm[self.perm[i]] for i in range(3))
        scale = tuple(self.scale[i] * _conj(other.scale[self.perm[i]], self.conjugate) for i in range(3))
        return SemilinearProjMap(perm, scale, self.conjugate != other.conjugate)

    def projectively_equal(self, other: "SemilinearProjMap") -> bool:
        if self.perm != other.perm or self.conjugate != other.conjugate:
            return False
        ratio = self.scale[0] / other.scale[0]
        return all(self.scale[i] == ratio * other.scale[i] for i in range(3))

    def curve_factor(self, curve: PlaneCurve) -> CyclotomicElem | None:
        """lambda with conj^c(F)(M q) = lambda F(q), or None when the curve is not preserved.

        A point p lies on the image curve iff F(M conj(p)) = 0, and
        F(M conj(p)) = conj( conj(F)(conj(M) p) ), so invariance is
        tested on the substituted polynomial.
        """
        out: dict = {}
        for exps, coeff in curve.terms.items():
            new_exps = [0, 0, 0]
            term = _conj(coeff, self.conjugate)
            for i, e in enumerate(exps):
                if e:
                    term = term * _conj(self.scale[i], self.conjugate) ** e
                    new_exps[self.perm[i]] += e
            key = tuple(new_exps)
            out[key] = out.get(key, CyclotomicElem.zero(curve.conductor)) + term
        out = {k: v for k, v in out.items() if not v.is_zero()}
        if set(out) != set(curve.terms):
            return None
        key = next(iter(curve.terms))
        factor = out[key] / curve.terms[key]
        if all(out[k] == factor * curve.terms[k] for k in curve.terms):
            return factor
        return None

    def describe(self) -> str:
        names = "xyz"
        coords = ":".join(f"{self.scale[i]}*{names[self.perm[i]]}" for i in range(3))
        return ("conj then " if self.conjugate else "") + f"({coords})"


# ---------------------------------------------------------------------------
# actions


@dataclass
class SuppliedPoint:
    """A point whose local data is provided by the caller (e.g. a branch over a singular point)."""

    label: str
    linear_order: int
    contains_conjugation: bool
    orbit: list


@dataclass
class FiniteActionSpec:
    group: FiniteGroup
    generators: dict  # generator name -> SemilinearProjMap
    curve: PlaneCurve
    name: str = ""
    base_hint: str | None = None  # force "alg_closed" for curves over an algebraically closed field
    _elements: dict | None = field(default=None, init=False, repr=False)

    @property
    def conductor(self) -> int:
        return self.curve.conductor

    def element_maps(self) -> dict:
        """Map for every group element, built from generator words; checks relations."""
        if self._elements is None:
            identity = SemilinearProjMap.identity(self.conductor)
            maps = {self.group.identity: identity}
            frontier = [self.group.identity]
            while frontier:
                g = frontier.pop()
                for name, gen in self.group.generators.items():
                    if name not in self.generators:
                        raise MalformedInput(f"no map assigned to generator {name}")
                    h = self.group.mult(g, gen)
                    candidate = maps[g].compose(self.generators[name])
                    if h in maps:
                        if not maps[h].projectively_equal(candidate):
                            raise RelationFails("generator maps violate the group relations",
                                                generator=name, element=str(h))
                    else:
                        maps[h] = candidate
                        frontier.append(h)
            if len(maps) != self.group.order:
                raise RelationFails("generators do not reach every group element")
            self._elements = maps
        return self._elements

    @property
    def has_antilinear(self) -> bool:
        return any(m.conjugate for m in self.element_maps().values())


@dataclass
class ActionReport:
    relations_hold: bool
    scalar_factors: dict
    faithful: bool

    def to_json(self) -> dict:
        return {
            "relations_hold": self.relations_hold,
            "scalar_factors": {k: str(v) for k, v in self.scalar_factors.items()},
            "faithful": self.faithful,
        }


def verify_action(spec: FiniteActionSpec) -> ActionReport:
    maps = spec.element_maps()
    factors = {}
    for name, gen in sorted(spec.generators.items()):
        factor = gen.curve_factor(spec.curve)
        if factor is None:
            raise CurveNotPreserved(f"generator {name} does not preserve the curve", generator=name)
        factors[name] = factor
    identity = SemilinearProjMap.identity(spec.conductor)
    faithful = sum(1 for m in maps.values() if m.projectively_equal(identity)) == 1
    return ActionReport(True, factors, faithful)


def _check_on_curve(spec: FiniteActionSpec, point) -> tuple:
    p = tuple(_lift(x, spec.conductor) for x in point)
    if len(p) != 3:
        raise MalformedInput("points need three homogeneous coordinates")
    if not spec.curve.contains(p):
        raise PointNotOnCurve(f"{point_text(p)} is not on the curve")
    return normalize_point(p)


@dataclass
class StabilizerInfo:
    order: int
    linear_order: int
    contains_conjugation: bool

    @property
    def weight(self) -> int:
        return self.linear_order

    @property
    def type_label(self) -> str:
        return f"{self.linear_order}" + ("bar" if self.contains_conjugation else "")


def stabilizer(spec: FiniteActionSpec, point) -> StabilizerInfo:
    p = _check_on_curve(spec, point)
    fixing = [m for m in spec.element_maps().values() if normalize_point(m.apply(p)) == p]
    linear = [m for m in fixing if not m.conjugate]
    return StabilizerInfo(len(fixing), len(linear), len(linear) != len(fixing))


def orbit(spec: FiniteActionSpec, point) -> list:
    p = _check_on_curve(spec, point)
    seen = {p}
    ordered = [p]
    frontier = [p]
    gens = list(spec.generators.values())
    while frontier:
        q = frontier.pop()
        for g in gens:
            r = normalize_point(g.apply(q))
            if r not in seen:
                seen.add(r)
                ordered.append(r)
                frontier.append(r)
    return ordered


@dataclass
class OrbitEntry:
    representative: str
    orbit: list
    stabilizer_order: int
    linear_order: int
    contains_conjugation: bool

    @property
    def weight(self) -> int:
        return self.linear_order

    def to_json(self) -> dict:
        return {
            "representative": self.representative,
            "orbit": self.orbit,
            "stabilizer_order": self.stabilizer_order,
            "linearity": "contains_conjugation" if self.contains_conjugation else "linear",
            "weight": self.linear_order,
            "bar": self.contains_conjugation,
        }


@dataclass
class WeightFunctionDescriptor:
    base_kind: str
    points: list  # (label, weight, bar)

    @property
    def weights(self) -> list:
        return [w for _, w, _ in self.points]

    def signature(self) -> str:
        ordered = sorted(self.points, key=lambda item: (item[2], item[1]))
        parts = [f"{w}" + ("\u0304" if bar else "") for _, w, bar in ordered]
        return f"X_{self.base_kind}(" + ",".join(parts) + ")"

    def to_json(self) -> dict:
        return {
            "base_kind": self.base_kind,
            "points": [{"label": lab, "weight": w, "bar": bar} for lab, w, bar in self.points],
            "signature": self.signature(),
        }


@dataclass
class SpecialLocusReport:
    descriptor: WeightFunctionDescriptor
    orbits: list

    def to_json(self) -> dict:
        return {"weight_function": self.descriptor.to_json(), "orbits": [o.to_json() for o in self.orbits]}


def _orbit_entry(spec: FiniteActionSpec, cand) -> OrbitEntry:
    if isinstance(cand, SuppliedPoint):
        order = cand.linear_order * (2 if cand.contains_conjugation else 1)
        return OrbitEntry(cand.label, list(cand.orbit), order, cand.linear_order, cand.contains_conjugation)
    pts = orbit(spec, cand)
    st = stabilizer(spec, cand)
    if len(pts) * st.order != spec.group.order:
        raise Inconsistent("orbit-stabilizer count fails", point=point_text(pts[0]))
    return OrbitEntry(point_text(pts[0]), [point_text(q) for q in pts], st.order, st.linear_order,
                      st.contains_conjugation)


def infer_base_kind(spec: FiniteActionSpec, entries: Sequence[OrbitEntry]) -> str:
    """co when every element is linear, re when some stabilizer meets conjugation, qt otherwise."""
    if spec.base_hint:
        return spec.base_hint
    if not spec.has_antilinear:
        return "co"
    if any(e.contains_conjugation for e in entries):
        return "re"
    return "qt"


def special_locus(spec: FiniteActionSpec, candidates: Sequence) -> SpecialLocusReport:
    entries: list[OrbitEntry] = []
    covered: set = set()
    for cand in candidates:
        entry = _orbit_entry(spec, cand)
        if entry.representative in covered:
            continue
        covered.update(entry.orbit)
        entries.append(entry)
    kind = infer_base_kind(spec, entries)
    special = [e for e in entries if e.weight >= 2]
    descriptor = WeightFunctionDescriptor(kind, [(e.representative, e.weight, e.contains_conjugation)
                                                 for e in special])
    return SpecialLocusReport(descriptor, special)


# ---------------------------------------------------------------------------
# Riemann-Hurwitz and orbifold characteristic


def riemann_hurwitz_check(genus_cover: int, group_order: int, stabilizer_orders: Sequence[int]) -> int:
    """Genus of Y/G from 2g_Y - 2 = |G|(2g_X - 2) + sum over orbits (|G|/e)(e - 1)."""
    ramification = Fraction(0)
    for e in stabilizer_orders:
        if e < 1 or group_order % e:
            raise Inconsistent(f"stabilizer order {e} does not divide {group_order}")
        ramification += Fraction(group_order, e) * (e - 1)
    twice = (Fraction(2 * genus_cover - 2) - ramification) / group_order + 2
    if twice.denominator != 1 or twice.numerator % 2 or twice < 0:
        raise Inconsistent("Riemann-Hurwitz gives no admissible quotient genus",
                           value=str(twice / 2))
    return twice.numerator // 2


def linear_part_orbits(spec: FiniteActionSpec, candidates: Sequence) -> tuple[int, list[int]]:
    """Orbits of the subgroup of linear elements: (subgroup order, stabilizer orders >= 2)."""
    maps = [m for m in spec.element_maps().values() if not m.conjugate]
    orders: list[int] = []
    seen: set = set()
    for cand in candidates:
        if isinstance(cand, SuppliedPoint):
            # each supplied orbit splits into linear orbits of equal size
            pieces = len(cand.orbit) * cand.linear_order // len(maps) if cand.linear_order else 0
            labels = tuple(cand.orbit)
            if labels not in seen and cand.linear_order >= 2:
                seen.add(labels)
                orders.extend([cand.linear_order] * max(pieces, 1))
            continue
        for q in orbit(spec, cand):
            if q in seen:
                continue
            lin_orbit = {normalize_point(m.apply(q)) for m in maps}
            seen.update(lin_orbit)
            e = len(maps) // len(lin_orbit)
            if e >= 2:
                orders.append(e)
    return len(maps), orders


def action_quotient_genus(spec: FiniteActionSpec, candidates: Sequence) -> int:
    order, stabs = linear_part_orbits(spec, candidates)
    return riemann_hurwitz_check(spec.curve.genus, order, stabs)


_UNDERLYING_EULER = {
    "sphere": 2,
    "disk": 1,
    "projective_plane": 1,
    "torus": 0,
    "klein_bottle": 0,
    "annulus": 0,
    "mobius": 0,
}


def orbifold_euler(surface: str, cone_orders: Sequence[int] = (), corner_orders: Sequence[int] = ()) -> Fraction:
    if surface not in _UNDERLYING_EULER:
        raise UnknownKind(f"unknown surface {surface!r}")
    if any(n < 2 for n in list(cone_orders) + list(corner_orders)):
        raise MalformedInput("orbifold point orders must be at least 2")
    chi = Fraction(_UNDERLYING_EULER[surface])
    chi -= sum((1 - Fraction(1, n) for n in cone_orders), Fraction(0))
    chi -= sum((1 - Fraction(1, m) for m in corner_orders), Fraction(0)) / 2
    return chi


_PSL2 = {
    "cyclic": (lambda n: n, lambda n: (n, n)),
    "binary_dihedral": (lambda n: 2 * n, lambda n: (2, 2, n)),
    "tetra": (lambda n: 12, lambda n: (2, 3, 3)),
    "octa": (lambda n: 24, lambda n: (2, 3, 4)),
    "icosa": (lambda n: 60, lambda n: (2, 3, 5)),
}


def psl2_weights(kind: str, n: int | None = None) -> tuple:
    """Weight sequence of P^1 modulo the image in PSL_2 of a finite subgroup of SL_2."""
    if kind not in _PSL2:
        raise UnknownKind(f"unknown finite subgroup kind {kind!r}")
    if kind in ("cyclic", "binary_dihedral") and (n is None or n < 2):
        raise MalformedInput(f"{kind} needs n >= 2")
    order_of, weights_of = _PSL2[kind]
    weights = weights_of(n)
    if riemann_hurwitz_check(0, order_of(n), weights) != 0:
        raise Inconsistent("tabulated weights fail Riemann-Hurwitz")  # pragma: no cover
    return weights


# ---------------------------------------------------------------------------
# JSON interface


def action_from_json(data: dict) -> tuple[FiniteActionSpec, list]:
    """{curve, group, generators: {name: {matrix, conjugate}}, candidates, supplied?}."""
    try:
        curve = PlaneCurve.from_json(data["curve"])
        group = group_from_json(data["group"])
        gens = {
            name: SemilinearProjMap.from_matrix(g["matrix"], curve.conductor, bool(g.get("conjugate", False)))
            for name, g in data["generators"].items()
        }
        cands = [tuple(_value_from_json(x, curve.conductor) for x in p) for p in data.get("candidates", [])]
        cands += [SuppliedPoint(s["label"], as_int(s["linear_order"]), bool(s.get("contains_conjugation", False)),
                                list(s["orbit"])) for s in data.get("supplied", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad action JSON: {exc}") from exc
    return FiniteActionSpec(group, gens, curve, data.get("name", ""), data.get("base_hint")), cands


def action_to_json(spec: FiniteActionSpec, candidates: Sequence) -> dict:
    """Inverse of action_from_json."""
    zero = CyclotomicElem.zero(spec.conductor).to_json()
    gens = {}
    for name, g in sorted(spec.generators.items()):
        matrix = [[zero] * 3 for _ in range(3)]
        for row, (col, x) in enumerate(zip(g.perm, g.scale)):
            matrix[row][col] = x.to_json()
        gens[name] = {"matrix": matrix, "conjugate": g.conjugate}
    pts = [c for c in candidates if not isinstance(c, SuppliedPoint)]
    supplied = [c for c in candidates if isinstance(c, SuppliedPoint)]
    out = {
        "schema": "hecurve/1",
        "name": spec.name,
        "curve": spec.curve.to_json(),
        "group": {"kind": spec.group.kind, "n": spec.group.n},
        "generators": gens,
        "candidates": [[x.to_json() for x in p] for p in pts],
    }
    if supplied:
        out["supplied"] = [{"label": c.label, "linear_order": c.linear_order,
                            "contains_conjugation": c.contains_conjugation, "orbit": list(c.orbit)}
                           for c in supplied]
    if spec.base_hint:
        out["base_hint"] = spec.base_hint
    return out


# ---------------------------------------------------------------------------
# shipped examples


def _z(c: int, k: int = 1) -> CyclotomicElem:
    return CyclotomicElem.zeta(c, k)


def _r(c: int, v) -> CyclotomicElem:
    return CyclotomicElem.rational(c, as_fraction(v))


def _diag(c: int, a, b, d, conj: bool = False) -> SemilinearProjMap:
    return SemilinearProjMap((0, 1, 2), tuple(_lift(x, c) for x in (a, b, d)), conj)


def _conj_map(c: int) -> SemilinearProjMap:
    return _diag(c, 1, 1, 1, conj=True)


def _point(c: int, *coords) -> tuple:
    return tuple(_lift(x, c) for x in coords)


@dataclass
class CurveExample:
    spec: FiniteActionSpec
    candidates: list
    expected_signature: str
    expected_weights: tuple


def _weierstrass_cubic(c: int, constant, linear=0, name="") -> PlaneCurve:
    """z y^2 = x^3 + linear x z^2 + constant z^3."""
    terms = {(0, 2, 1): 1, (3, 0, 0): -1}
    if linear:
        terms[(1, 0, 2)] = -as_fraction(linear)
    if constant:
        terms[(0, 0, 3)] = -as_fraction(constant)
    return PlaneCurve(c, terms, 1, name)


def legendre_curve(lam=2, conductor: int = 1) -> PlaneCurve:
    """z y^2 = x (x - z)(x - lam z)."""
    lam = as_fraction(lam)
    terms = {(0, 2, 1): 1, (3, 0, 0): -1, (2, 0, 1): 1 + lam, (1, 0, 2): -lam}
    return PlaneCurve(conductor, terms, 1, f"Y_{lam}")


def example_legendre_involution(lam=2) -> CurveExample:
    c = 1
    curve = legendre_curve(lam, c)
    spec = FiniteActionSpec(cyclic_group(2), {"h": _diag(c, 1, -1, 1)}, curve, "legendre_involution",
                            base_hint="alg_closed")
    cands = [_point(c, 0, 0, 1), _point(c, 0, 1, 0), _point(c, 1, 0, 1), _point(c, lam, 0, 1)]
    return CurveExample(spec, cands, "X_alg_closed(2,2,2,2)", (2, 2, 2, 2))


def example_cyclic_six() -> CurveExample:
    """(I): rho(x:y:z) = (xi x : -y : z) on z y^2 = x^3 + z^3, xi = zeta_3."""
    c = 3
    curve = _weierstrass_cubic(c, 1, name="y2=x3+1")
    spec = FiniteActionSpec(cyclic_group(6), {"h": _diag(c, _z(c), -1, 1)}, curve, "cyclic_six",
                            base_hint="alg_closed")
    cands = [_point(c, -1, 0, 1), _point(c, 0, 1, 1), _point(c, 0, 1, 0)]
    return CurveExample(spec, cands, "X_alg_closed(2,3,6)", (2, 3, 6))


def example_cyclic_three() -> CurveExample:
    """(II): the subgroup generated by rho^4, (x:y:z) -> (xi x : y : z)."""
    c = 3
    curve = _weierstrass_cubic(c, 1, name="y2=x3+1")
    xi = _z(c) ** 4
    spec = FiniteActionSpec(cyclic_group(3), {"h": _diag(c, xi, 1, 1)}, curve, "cyclic_three",
                            base_hint="alg_closed")
    cands = [_point(c, -1, 0, 1), _point(c, 0, 1, 1), _point(c, 0, -1, 1), _point(c, 0, 1, 0)]
    return CurveExample(spec, cands, "X_alg_closed(3,3,3)", (3, 3, 3))


def example_cyclic_four() -> CurveExample:
    """(III): rho(x:y:z) = (-x : i y : z) on z y^2 = x^3 - x z^2."""
    c = 4
    curve = _weierstrass_cubic(c, 0, linear=-1, name="y2=x3-x")
    spec = FiniteActionSpec(cyclic_group(4), {"h": _diag(c, -1, _z(c), 1)}, curve, "cyclic_four",
                            base_hint="alg_closed")
    cands = [_point(c, 1, 0, 1), _point(c, 0, 0, 1), _point(c, 0, 1, 0)]
    return CurveExample(spec, cands, "X_alg_closed(2,4,4)", (2, 4, 4))


def example_real_klein_four(lam=2) -> CurveExample:
    """D_2 = <sigma, rho> on y^2 z = (x - lam z)(x^2 + z^2), rho: y -> -y."""
    c = 4
    lam = as_fraction(lam)
    # (x - lam z)(x^2 + z^2) = x^3 - lam x^2 z + x z^2 - lam z^3
    terms = {(0, 2, 1): 1, (3, 0, 0): -1, (2, 0, 1): lam, (1, 0, 2): -1, (0, 0, 3): lam}
    curve = PlaneCurve(c, terms, 1, f"real_Y_{lam}")
    gens = {"rho": _diag(c, 1, -1, 1), "sigma": _conj_map(c)}
    spec = FiniteActionSpec(dihedral_group(2), gens, curve, "real_klein_four")
    cands = [_point(c, _z(c), 0, 1), _point(c, lam, 0, 1), _point(c, 0, 1, 0)]
    return CurveExample(spec, cands, "X_re(2,2̄,2̄)", (2, 2, 2))


def example_real_dihedral_six() -> CurveExample:
    """D_6 = <sigma, rho>, rho(x:y:z) = (xi x : -y : z) on z y^2 = x^3 + z^3."""
    c = 3
    curve = _weierstrass_cubic(c, 1, name="y2=x3+1")
    gens = {"rho": _diag(c, _z(c), -1, 1), "sigma": _conj_map(c)}
    spec = FiniteActionSpec(dihedral_group(6), gens, curve, "real_dihedral_six")
    cands = [_point(c, -1, 0, 1), _point(c, 0, 1, 1), _point(c, 0, 1, 0)]
    return CurveExample(spec, cands, "X_re(2̄,3̄,6̄)", (2, 3, 6))


def example_real_dihedral_three() -> CurveExample:
    """D_3 = <sigma, rho^4> on z y^2 = x^3 + z^3."""
    c = 3
    curve = _weierstrass_cubic(c, 1, name="y2=x3+1")
    gens = {"rho": _diag(c, _z(c) ** 4, 1, 1), "sigma": _conj_map(c)}
    spec = FiniteActionSpec(dihedral_group(3), gens, curve, "real_dihedral_three")
    cands = [_point(c, 0, 1, 1), _point(c, 0, -1, 1), _point(c, 0, 1, 0)]
    return CurveExample(spec, cands, "X_re(3̄,3̄,3̄)", (3, 3, 3))


def example_trigyro() -> CurveExample:
    """D_3 = <sigma, rho>, rho(x:y:z) = (xi x : y : z) on z y^2 = x^3 - z^3."""
    c = 12
    curve = _weierstrass_cubic(c, -1, name="y2=x3-1")
    gens = {"rho": _diag(c, _z(c, 4), 1, 1), "sigma": _conj_map(c)}
    spec = FiniteActionSpec(dihedral_group(3), gens, curve, "trigyro")
    cands = [_point(c, 0, _z(c, 3), 1), _point(c, 0, 1, 0), _point(c, 1, 0, 1)]
    return CurveExample(spec, cands, "X_re(3,3̄)", (3, 3))


def diglide_curve(lam=Fraction(3, 4), conductor: int = 4) -> PlaneCurve:
    """Plane closure y^2 z^2 + (x^2 + lam z^2)^2 + z^4 = 0 (singular at (0:1:0), genus 1 after normalizing)."""
    lam = as_fraction(lam)
    terms = {(0, 2, 2): 1, (4, 0, 0): 1, (2, 0, 2): 2 * lam, (0, 0, 4): lam * lam + 1}
    return PlaneCurve(conductor, terms, 1, f"diglide_{lam}")


def example_diglide(lam=Fraction(3, 4)) -> CurveExample:
    """D_2 = <sigma, rho>, rho: x -> -x; the two branches over (0:1:0) are supplied."""
    c = 4
    lam = as_fraction(lam)
    curve = diglide_curve(lam, c)
    gens = {"rho": _diag(c, -1, 1, 1), "sigma": _conj_map(c)}
    spec = FiniteActionSpec(dihedral_group(2), gens, curve, "diglide")
    root = _square_root_rational(1 + lam * lam)
    if root is None:
        raise MalformedInput("1 + lam^2 must be a rational square for the shipped fixture")
    cands = [_point(c, 0, _z(c) * root, 1), SuppliedPoint("o+", 2, False, ["o+", "o-"])]
    return CurveExample(spec, cands, "X_qt(2,2)", (2, 2))


def _square_root_rational(q: Fraction) -> Fraction | None:
    from math import isqrt

    if q < 0:
        return None
    a, b = isqrt(q.numerator), isqrt(q.denominator)
    return Fraction(a, b) if a * a == q.numerator and b * b == q.denominator else None


EXAMPLES = {
    "legendre_involution": example_legendre_involution,
    "cyclic_six": example_cyclic_six,
    "cyclic_three": example_cyclic_three,
    "cyclic_four": example_cyclic_four,
    "real_klein_four": example_real_klein_four,
    "real_dihedral_six": example_real_dihedral_six,
    "real_dihedral_three": example_real_dihedral_three,
    "trigyro": example_trigyro,
    "diglide": example_diglide,
}


def analyze_action(spec: FiniteActionSpec, candidates: Sequence) -> dict:
    """Verification, orbit report and quotient genus of one action."""
    action = verify_action(spec)
    locus = special_locus(spec, candidates)
    return {
        "name": spec.name,
        "action": action.to_json(),
        "special_locus": locus.to_json(),
        "signature": locus.descriptor.signature(),
        "quotient_genus": action_quotient_genus(spec, candidates),
    }


def run_example(name: str) -> dict:
    if name not in EXAMPLES:
        raise UnknownKind(f"unknown curve example {name!r}")
    ex = EXAMPLES[name]()
    report = analyze_action(ex.spec, ex.candidates)
    report["name"] = name
    report["expected_signature"] = ex.expected_signature
    report["matches"] = report["signature"] == ex.expected_signature and report["quotient_genus"] == 0
    return report
