"""Coordinate data (A, B, C, s + bilinear maps) and the exact condition checker.

Every map is a QArray tensor with the output index last:

    circ_A, bracket_A : A x A -> A      D_AA : A x A -> s
    act_AB : A x B -> B                  act_CA : C x A -> C
    T : B x C -> A                       D_BC : B x C -> s
    cross_B : B x B -> C                 cross_C : C x C -> B
    s_bracket : s x s -> s               s_on_A/B/C : s x X -> X

Each identity is evaluated as a residual tensor over *all* basis tuples; the
identities are multilinear (cubic ones after full polarization, valid in
characteristic 0), so basis verdicts are verdicts on all elements.
"""
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .algebra import (StructureAlgebra, Subspace, associator_ideal, center, is_associative,
                      is_commutative, is_ideal, nucleus)
from .exact import QArray, einsum, rat, rat_str
from .exact.tensor import concatenate

THIRD = Fraction(1, 3)

MAP_SLOTS = {
    "circ_A": ("A", "A", "A"), "bracket_A": ("A", "A", "A"), "D_AA": ("A", "A", "s"),
    "act_AB": ("A", "B", "B"), "act_CA": ("C", "A", "C"), "T": ("B", "C", "A"),
    "D_BC": ("B", "C", "s"), "cross_B": ("B", "B", "C"), "cross_C": ("C", "C", "B"),
    "s_bracket": ("s", "s", "s"), "s_on_A": ("s", "A", "A"), "s_on_B": ("s", "B", "B"),
    "s_on_C": ("s", "C", "C"),
}


class DatumError(ValueError):
    pass


@dataclass
class CoordinateDatum:
    name: str
    labels: dict
    unit: int
    maps: dict
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        for key in ("A", "B", "C", "s"):
            self.labels.setdefault(key, [])
        dims = self.dims
        for name, slots in MAP_SLOTS.items():
            shape = tuple(dims[s] for s in slots)
            m = self.maps.get(name)
            if m is None:
                self.maps[name] = QArray.zeros(shape)
            elif m.shape != shape:
                raise DatumError(f"map {name} has shape {m.shape}, expected {shape}")

    @property
    def dims(self):
        return {k: len(v) for k, v in self.labels.items()}

    def __getattr__(self, name):
        maps = self.__dict__.get("maps")
        if maps is not None and name in maps:
            return maps[name]
        raise AttributeError(name)

    @property
    def product_A(self):
        return (self.circ_A + self.bracket_A) * Fraction(1, 2)

    def A_algebra(self):
        return StructureAlgebra(self.product_A, self.labels["A"], self.unit, check=False)

    def replace(self, name=None, **maps):
        new = dict(self.maps)
        new.update(maps)
        return CoordinateDatum(name or self.name, {k: list(v) for k, v in self.labels.items()},
                               self.unit, new, dict(self.meta))

    # -- validation -------------------------------------------------------------
    def validate(self):
        """Shape-level invariants: symmetry types and the distinguished element.

        The element 1 must satisfy 1 o a = 2a (so that 1 is the unit of
        aa' = (a o a' + [a, a'])/2), [1, a] = 0, D_{1,a} = 0, 1b = b, c1 = c, d1 = 0.
        """
        m = self.maps
        problems = []
        if not m["circ_A"] == m["circ_A"].transpose(1, 0, 2):
            problems.append("circ_A is not commutative")
        if not m["bracket_A"] == -m["bracket_A"].transpose(1, 0, 2):
            problems.append("bracket_A is not anticommutative")
        if not m["D_AA"] == -m["D_AA"].transpose(1, 0, 2):
            problems.append("D_AA is not skew")
        if not m["cross_B"] == m["cross_B"].transpose(1, 0, 2):
            problems.append("cross_B is not symmetric")
        if not m["cross_C"] == m["cross_C"].transpose(1, 0, 2):
            problems.append("cross_C is not symmetric")
        if not m["s_bracket"] == -m["s_bracket"].transpose(1, 0, 2):
            problems.append("s_bracket is not antisymmetric")
        d = self.dims
        if not 0 <= self.unit < max(d["A"], 1):
            problems.append("unit index out of range")
        else:
            u = self.unit
            if not m["circ_A"][u] == QArray.eye(d["A"]) * 2:
                problems.append("1 o a != 2a")
            if not m["bracket_A"][u].is_zero():
                problems.append("[1, a] != 0")
            if not m["D_AA"][u].is_zero():
                problems.append("D_{1,a} != 0")
            if d["B"] and not m["act_AB"][u] == QArray.eye(d["B"]):
                problems.append("1 does not act as the identity on B")
            if d["C"] and not m["act_CA"][:, u, :] == QArray.eye(d["C"]):
                problems.append("1 does not act as the identity on C")
            if d["s"] and not m["s_on_A"][:, u, :].is_zero():
                problems.append("s does not kill 1")
        if problems:
            raise DatumError(f"{self.name}: " + "; ".join(problems))
        return self

    # -- io -----------------------------------------------------------------------
    def to_json(self):
        return {
            "name": self.name,
            "labels": self.labels,
            "unit": self.unit,
            "maps": {k: [list(ix) + [rat_str(c)] for ix, c in v.nonzero_entries()]
                     for k, v in self.maps.items()},
            "meta": {k: (rat_str(v) if isinstance(v, Fraction) else v) for k, v in self.meta.items()},
        }

    @classmethod
    def from_json(cls, d):
        try:
            labels = {k: list(d["labels"].get(k, [])) for k in ("A", "B", "C", "s")}
            unit = int(d.get("unit", 0))
            raw = d.get("maps", {})
        except (AttributeError, KeyError, TypeError) as exc:
            raise DatumError(f"datum: malformed header ({exc})") from None
        dims = {k: len(v) for k, v in labels.items()}
        maps = {}
        for name, entries in raw.items():
            if name not in MAP_SLOTS:
                raise DatumError(f"maps.{name}: unknown map")
            shape = tuple(dims[s] for s in MAP_SLOTS[name])
            arr = np.zeros(shape, dtype=object)
            arr[...] = 0
            for pos, e in enumerate(entries):
                try:
                    *ix, c = e
                    arr[tuple(int(i) for i in ix)] = rat(c)
                except (ValueError, TypeError, IndexError) as exc:
                    raise DatumError(f"maps.{name}[{pos}]: {exc}") from None
            maps[name] = QArray.from_fractions(arr) if arr.size else QArray.zeros(shape)
        return cls(d.get("name", "datum"), labels, unit, maps, dict(d.get("meta", {})))


# -- reports ------------------------------------------------------------------
@dataclass
class Failure:
    identity: str
    witness: tuple

    def to_json(self):
        return {"identity": self.identity, "witness": list(self.witness)}


@dataclass
class ConditionReport:
    verdicts: dict
    failures: dict

    @property
    def passed(self):
        return all(self.verdicts.values())

    def first_failure(self):
        for k, ok in self.verdicts.items():
            if not ok:
                return k, self.failures[k][0]
        return None

    def to_json(self):
        return {"passed": self.passed,
                "verdicts": {k: v for k, v in self.verdicts.items()},
                "failures": {k: [f.to_json() for f in v] for k, v in self.failures.items() if v}}


class _Collector:
    def __init__(self, datum):
        self.datum = datum
        self.verdicts = {}
        self.failures = {}

    def section(self, key):
        self.verdicts.setdefault(key, True)
        self.failures.setdefault(key, [])
        self.key = key

    def check(self, name, residual, slots):
        """Record the first nonzero entry of residual (C order) as a witness."""
        bad = np.argwhere(residual.num != 0)
        if len(bad) == 0:
            return True
        ix = bad[0]
        labels = self.datum.labels
        wit = tuple(labels[s][int(i)] if s in labels else int(i) for s, i in zip(slots, ix))
        self.verdicts[self.key] = False
        self.failures[self.key].append(Failure(name, wit))
        return False

    def flag(self, name, ok, witness=()):
        if not ok:
            self.verdicts[self.key] = False
            self.failures[self.key].append(Failure(name, tuple(witness)))
        return ok

    def report(self):
        return ConditionReport(dict(self.verdicts), {k: list(v) for k, v in self.failures.items()})


def _alternativity_residuals(P):
    assoc = einsum("ijm,mkl->ijkl", P, P) - einsum("jkm,iml->ijkl", P, P)
    return assoc + assoc.transpose(1, 0, 2, 3), assoc + assoc.transpose(0, 2, 1, 3)


def check_conditions(d):
    """Verify conditions (0)-(6) of the characterization on all basis tuples."""
    d.validate()
    m = d.maps
    P = d.product_A
    br, circ = m["bracket_A"], m["circ_A"]
    DAA, DBC, T = m["D_AA"], m["D_BC"], m["T"]
    aB, aC = m["act_AB"], m["act_CA"]
    xB, xC = m["cross_B"], m["cross_C"]
    sb, sA, sB, sC = m["s_bracket"], m["s_on_A"], m["s_on_B"], m["s_on_C"]
    rho = {"A": sA, "B": sB, "C": sC, "s": sb}
    col = _Collector(d)

    col.section("(0)")
    jac = einsum("ijm,mkl->ijkl", sb, sb)
    col.check("s Jacobi", jac + jac.transpose(1, 2, 0, 3) + jac.transpose(2, 0, 1, 3),
              ("s", "s", "s", "s"))
    for X in ("A", "B", "C"):
        r = rho[X]
        res = einsum("pqm,mxz->pqxz", sb, r) - (einsum("qxy,pyz->pqxz", r, r)
                                                - einsum("pxy,qyz->pqxz", r, r))
        col.check(f"s-module {X}", res, ("s", "s", X, X))
    for name, (X, Y, Z) in MAP_SLOTS.items():
        if name.startswith("s_"):
            continue
        f = m[name]
        res = (einsum("xyw,dwz->dxyz", f, rho[Z]) - einsum("dxw,wyz->dxyz", rho[X], f)
               - einsum("dyw,xwz->dxyz", rho[Y], f))
        col.check(f"s-invariance of {name}", res, ("s", X, Y, Z))

    col.section("(1)")
    left, right = _alternativity_residuals(P)
    col.check("A left alternative", left, ("A", "A", "A", "A"))
    col.check("A right alternative", right, ("A", "A", "A", "A"))
    t = einsum("jkm,imd->ijkd", P, DAA)
    col.check("cyclic D_{a1,a2a3}", t + t.transpose(1, 2, 0, 3) + t.transpose(2, 0, 1, 3),
              ("A", "A", "A", "s"))
    lhs = einsum("ijd,dkz->ijkz", DAA, sA)
    rhs = einsum("ijm,mkz->ijkz", br, br) + 3 * (einsum("ikm,mjz->ijkz", P, P)
                                                  - einsum("kjm,imz->ijkz", P, P))
    col.check("D_{a1,a2}a3", lhs - rhs, ("A", "A", "A", "A"))

    col.section("(2)")
    col.check("a1(a2 b) = (a1 a2)b",
              einsum("jbm,imz->ijbz", aB, aB) - einsum("ijm,mbz->ijbz", P, aB),
              ("A", "A", "B", "B"))
    col.check("(c a1)a2 = c(a1 a2)",
              einsum("cim,mjz->cijz", aC, aC) - einsum("ijm,cmz->cijz", P, aC),
              ("C", "A", "A", "C"))
    col.check("D_{a1,a2}b = [a1,a2]b",
              einsum("ijd,dbz->ijbz", DAA, sB) - einsum("ijm,mbz->ijbz", br, aB),
              ("A", "A", "B", "B"))
    col.check("D_{a1,a2}c = c[a2,a1]",
              einsum("ijd,dcz->ijcz", DAA, sC) - einsum("jim,cmz->ijcz", br, aC),
              ("A", "A", "C", "C"))

    col.section("(3)")
    col.check("a T(b,c) = T(ab,c)",
              einsum("bcm,amz->abcz", T, P) - einsum("abm,mcz->abcz", aB, T),
              ("A", "B", "C", "A"))
    col.check("T(b,c)a = T(b,ca)",
              einsum("bcm,maz->bcaz", T, P) - einsum("cam,bmz->bcaz", aC, T),
              ("B", "C", "A", "A"))
    col.check("D_{a,T(b,c)} = D_{ab,c} - D_{b,ca}",
              einsum("bcm,amd->abcd", T, DAA) - einsum("abm,mcd->abcd", aB, DBC)
              + einsum("cam,bmd->abcd", aC, DBC),
              ("A", "B", "C", "s"))
    col.check("D_{b,c}a = [T(b,c),a]",
              einsum("bcd,daz->bcaz", DBC, sA) - einsum("bcm,maz->bcaz", T, br),
              ("B", "C", "A", "A"))

    col.section("(4)")
    col.check("(b1 x b2)a = (a b1) x b2",
              einsum("ijm,maz->ijaz", xB, aC) - einsum("aim,mjz->ijaz", aB, xB),
              ("B", "B", "A", "C"))
    col.check("(a b1) x b2 = b1 x (a b2)",
              einsum("aim,mjz->ijaz", aB, xB) - einsum("ajm,imz->ijaz", aB, xB),
              ("B", "B", "A", "C"))
    col.check("a(c1 x c2) = (c1 a) x c2",
              einsum("ijm,amz->ijaz", xC, aB) - einsum("iam,mjz->ijaz", aC, xC),
              ("C", "C", "A", "B"))
    col.check("(c1 a) x c2 = c1 x (c2 a)",
              einsum("iam,mjz->ijaz", aC, xC) - einsum("jam,imz->ijaz", aC, xC),
              ("C", "C", "A", "B"))

    col.section("(5)")
    t = einsum("jkm,imd->ijkd", xB, DBC)
    col.check("D_{b,b x b} = 0", t + t.transpose(1, 2, 0, 3) + t.transpose(2, 0, 1, 3),
              ("B", "B", "B", "s"))
    t = einsum("ijm,mkd->ijkd", xC, DBC)
    col.check("D_{c x c,c} = 0", t + t.transpose(1, 2, 0, 3) + t.transpose(2, 0, 1, 3),
              ("C", "C", "C", "s"))
    t = einsum("jkm,imz->ijkz", xB, T)
    col.check("T(b1, b2 x b3) symmetric", t - t.transpose(1, 0, 2, 3), ("B", "B", "B", "A"))
    t = einsum("ijm,mkz->ijkz", xC, T)
    col.check("T(c1 x c2, c3) symmetric", t - t.transpose(0, 2, 1, 3), ("C", "C", "C", "A"))

    col.section("(6)")
    res = (einsum("ijm,mcz->ijcz", xB, xC)
           + THIRD * einsum("icm,mjz->ijcz", T, aB)
           - THIRD * einsum("icd,djz->ijcz", DBC, sB)
           + einsum("jcm,miz->ijcz", T, aB))
    col.check("(b1 x b2) x c", res, ("B", "B", "C", "B"))
    res = (einsum("ijm,bmz->bijz", xC, xB)
           + einsum("bim,jmz->bijz", T, aC)
           + THIRD * einsum("bjm,imz->bijz", T, aC)
           + THIRD * einsum("bjd,diz->bijz", DBC, sC))
    col.check("b x (c1 x c2)", res, ("B", "C", "C", "C"))
    return col.report()


# -- corollary ------------------------------------------------------------------
def _span_rows(vectors, n):
    return Subspace.span(vectors.reshape(-1, n), n) if n else Subspace.zero(0)


def check_corollary(d, simple=None):
    """Consequences of the conditions for A, B, C; a ConditionReport keyed by claim.

    The final claim (what simplicity of L forces) is an implication reported
    clause by clause; L is only assembled and tested for simplicity when some
    clause fails. Pass ``simple`` to skip that when it is already known.
    """
    m = d.maps
    nA, nB, nC = d.dims["A"], d.dims["B"], d.dims["C"]
    A = d.A_algebra()
    T, xB, xC = m["T"], m["cross_B"], m["cross_C"]
    col = _Collector(d)

    col.section("unit")
    col.flag("1 is the unit of A", A.table[d.unit] == QArray.eye(nA)
             and A.table[:, d.unit, :] == QArray.eye(nA))
    if nB:
        col.flag("1 acts as identity on B", m["act_AB"][d.unit] == QArray.eye(nB))
    if nC:
        col.flag("1 acts as identity on C", m["act_CA"][:, d.unit, :] == QArray.eye(nC))

    col.section("E(A)B = 0 = C E(A)")
    E = associator_ideal(A)
    if E.dim:
        col.check("E(A)B", einsum("va,abz->vbz", E.echelon, m["act_AB"]), ("E", "B", "B"))
        col.check("C E(A)", einsum("va,caz->vcz", E.echelon, m["act_CA"]), ("E", "C", "C"))

    col.section("T ideals in nucleus / center")
    N, Z = nucleus(A), center(A)
    TBC = _span_rows(T, nA)
    TBBB = _span_rows(einsum("jkm,imz->ijkz", xB, T), nA)
    TCCC = _span_rows(einsum("ijm,mkz->ijkz", xC, T), nA)
    col.flag("T(B,C) is an ideal", is_ideal(A, TBC))
    col.flag("T(B,C) in N(A)", TBC <= N)
    col.flag("T(B,BxB) is an ideal", is_ideal(A, TBBB))
    col.flag("T(B,BxB) in Z(A)", TBBB <= Z)
    col.flag("T(CxC,C) is an ideal", is_ideal(A, TCCC))
    col.flag("T(CxC,C) in Z(A)", TCCC <= Z)

    col.section("D identities")
    col.check("D_{b1,c}b2 - D_{b2,c}b1 = 2(T(b2,c)b1 - T(b1,c)b2)", corollary_D_residual_B(d),
              ("B", "B", "C", "B"))
    col.check("D_{b,c2}c1 - D_{b,c1}c2 = 2(c1T(b,c2) - c2T(b,c1))", corollary_D_residual_C(d),
              ("B", "C", "C", "C"))

    # the last bullet is an implication from simplicity of L; it is split into
    # its separate conclusions so a failure names the clause that breaks
    assoc = is_associative(A)
    clauses = {
        "simple: A associative, or A = E(A) and B = C = 0": assoc or (E.dim == nA and nB == 0 and nC == 0),
    }
    if nB:
        BxB = _span_rows(xB, nC)
        clauses["simple, B != 0: A commutative and associative"] = is_commutative(A) and assoc
        clauses["simple, B != 0: C = B x B"] = BxB.dim == nC
        clauses["simple, B != 0: A = T(B, B x B)"] = TBBB.dim == nA
    if simple is None and not all(clauses.values()):
        from .liealg import assemble, is_simple_evidence
        simple = is_simple_evidence(assemble(d))
    for name, ok in clauses.items():
        col.section(name)
        col.flag(name, ok or not simple)
    return col.report()


def corollary_D_residual_B(d):
    m = d.maps
    D, sB, T, aB = m["D_BC"], m["s_on_B"], m["T"], m["act_AB"]
    lhs = einsum("icd,djz->ijcz", D, sB) - einsum("jcd,diz->ijcz", D, sB)
    rhs = 2 * (einsum("jcm,miz->ijcz", T, aB) - einsum("icm,mjz->ijcz", T, aB))
    return lhs - rhs


def corollary_D_residual_C(d):
    m = d.maps
    D, sC, T, aC = m["D_BC"], m["s_on_C"], m["T"], m["act_CA"]
    lhs = einsum("bjd,diz->bijz", D, sC) - einsum("bid,djz->bijz", D, sC)
    rhs = 2 * (einsum("bjm,imz->bijz", T, aC) - einsum("bim,jmz->bijz", T, aC))
    return lhs - rhs


# -- degree four --------------------------------------------------------------------
def _degree4_sides(d, b, c):
    m = d.maps
    xB, xC, T, aB, aC = m["cross_B"], m["cross_C"], m["T"], m["act_AB"], m["act_CA"]
    cr_b = lambda u, v: einsum("i,j,ijk->k", u, v, xB)   # B x B -> C
    cr_c = lambda u, v: einsum("i,j,ijk->k", u, v, xC)   # C x C -> B
    Tf = lambda u, v: einsum("i,j,ijk->k", u, v, T)
    left = lambda a, u: einsum("i,j,ijk->k", a, u, aB)   # a b
    right = lambda u, a: einsum("i,j,ijk->k", u, a, aC)  # c a
    bb, cc = cr_b(b, b), cr_c(c, c)
    out = {}
    out["(bxb)x(bxb)"] = (cr_c(bb, bb), Fraction(-4, 3) * left(Tf(b, bb), b))
    out["(cxc)x(cxc)"] = (cr_b(cc, cc), Fraction(-4, 3) * right(c, Tf(cc, c)))
    out["(cx(bxb))xb"] = (cr_b(cr_c(c, bb), b),
                          -right(bb, Tf(b, c)) - THIRD * right(c, Tf(b, bb)))
    out["(bx(cxc))xc"] = (cr_c(cr_b(b, cc), c),
                          -left(Tf(b, c), cc) - THIRD * left(Tf(cc, c), b))
    return out


def random_vector(rng, n, height=3):
    """Dense random rational vector with small numerators and denominators."""
    vals = [Fraction(rng.randint(-height, height), rng.randint(1, height)) for _ in range(n)]
    return QArray.from_fractions(vals) if n else QArray.zeros((0,))


def check_degree4(d, samples=100, seed=0):
    """Quartic identities on every basis pair (b, c) and on seeded random pairs."""
    nB, nC = d.dims["B"], d.dims["C"]
    col = _Collector(d)
    col.section("degree4")
    if nB == 0 and nC == 0:
        return col.report()
    eye_b, eye_c = QArray.eye(nB), QArray.eye(nC)
    zero_b, zero_c = QArray.zeros((nB,)), QArray.zeros((nC,))
    pairs = [(eye_b[i] if nB else zero_b, eye_c[j] if nC else zero_c, (i, j))
             for i in range(max(nB, 1)) for j in range(max(nC, 1))]
    rng = random.Random(seed)
    for k in range(samples):
        pairs.append((random_vector(rng, nB), random_vector(rng, nC), ("sample", k)))
    for b, c, tag in pairs:
        for name, (lhs, rhs) in _degree4_sides(d, b, c).items():
            col.flag(name, lhs == rhs, tag)
    return col.report()
