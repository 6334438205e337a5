# backend/algebra/services/complexes.py
"""
Tranches de degré des complexes I•, ⁺I• et Č• d'un anneau de semigroupe affine,
cohomologie exacte sur QQ ou GF(p), balayages de boîtes et sondes
(critère de seminormalité, dualité, Cohen-Macaulay, module canonique).

Chaque tranche est un complexe de cochaînes à une base par face ;
les différentielles portent les signes d'incidence du treillis des faces.
"""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from sympy import GF, Matrix, QQ, isprime
from sympy.polys.matrices import DomainMatrix

from ..errors import InvalidInput
from .boxes import Box
from .cones import Face
from .lattice import Vector
from .semigroup import (
    AffineSemigroup,
    contains,
    in_localization,
    interior_degrees,
    is_normal,
)

logger = logging.getLogger("algebra.complexes")


# === Corps ====================================================================

@dataclass(frozen=True)
class FieldSpec:
    characteristic: int = 0

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        t = (text or "").strip().upper().replace(" ", "")
        if t in ("QQ", "Q", "0"):
            return cls(0)
        for prefix in ("GF(", "F"):
            if t.startswith(prefix):
                t = t[len(prefix):].rstrip(")")
                break
        try:
            p = int(t)
        except ValueError:
            raise InvalidInput(f"Corps inconnu : {text!r} (QQ, GF(p), Fp ou p).", field=text)
        if p == 0:
            return cls(0)
        if not isprime(p):
            raise InvalidInput(f"Caractéristique {p} non première.", field=text)
        return cls(p)

    @property
    def label(self) -> str:
        return "QQ" if self.characteristic == 0 else f"GF({self.characteristic})"

    @property
    def domain(self):
        return QQ if self.characteristic == 0 else GF(self.characteristic)

    def rank(self, rows: Sequence[Sequence[int]]) -> int:
        if not rows or not rows[0]:
            return 0
        return DomainMatrix.from_Matrix(Matrix([list(r) for r in rows])).convert_to(self.domain).rank()

    def is_zero(self, x: int) -> bool:
        return x == 0 if self.characteristic == 0 else x % self.characteristic == 0


# === Complexes ================================================================

Matrix_ = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class VectorSpaceComplex:
    """
    Complexe de cochaînes C^lo → ... → C^hi.

    `boundaries[i]` est la matrice de C^i vers C^{i+1} : lignes = base de C^{i+1},
    colonnes = base de C^i. `unresolved` liste les cellules dont l'appartenance
    n'a pas pu être décidée (exclues de la base).
    """

    lo: int
    hi: int
    bases: Dict[int, Tuple[str, ...]]
    boundaries: Dict[int, Matrix_]
    field: FieldSpec = FieldSpec()
    unresolved: Tuple[str, ...] = ()

    def basis(self, i: int) -> Tuple[str, ...]:
        return self.bases.get(i, ())

    def dims(self) -> Dict[int, int]:
        return {i: len(self.basis(i)) for i in range(self.lo, self.hi + 1)}

    def boundary(self, i: int) -> Matrix_:
        return self.boundaries.get(i, tuple(() for _ in self.basis(i + 1)))

    def squares_to_zero(self) -> bool:
        for i in range(self.lo, self.hi - 1):
            A, B = self.boundary(i + 1), self.boundary(i)
            for r in range(len(A)):
                for c in range(len(self.basis(i))):
                    s = sum(A[r][k] * B[k][c] for k in range(len(self.basis(i + 1))))
                    if not self.field.is_zero(s):
                        return False
        return True


def assemble(
    cells: Sequence[Hashable],
    position: Callable[[Any], int],
    arrows: Iterable[Tuple[Any, Any, int]],
    qualifies: Callable[[Any], Optional[bool]],
    label: Callable[[Any], str],
    lo: int,
    hi: int,
    fld: FieldSpec,
) -> VectorSpaceComplex:
    """
    Monte une tranche : une base par cellule qualifiée, flèches (source, cible, signe)
    conservées quand les deux extrémités sont qualifiées.
    """
    status = {c: qualifies(c) for c in cells}
    kept = [c for c in cells if status[c]]
    unresolved = tuple(label(c) for c in cells if status[c] is None)
    by_pos: Dict[int, List[Any]] = {}
    for c in kept:
        by_pos.setdefault(position(c), []).append(c)
    index = {c: i for cs in by_pos.values() for i, c in enumerate(cs)}

    mats: Dict[int, List[List[int]]] = {}
    for i in range(lo, hi):
        mats[i] = [[0] * len(by_pos.get(i, ())) for _ in by_pos.get(i + 1, ())]
    for src, dst, sign in arrows:
        if not (status.get(src) and status.get(dst)):
            continue
        p = position(src)
        if position(dst) != p + 1:
            continue
        mats[p][index[dst]][index[src]] = sign

    return VectorSpaceComplex(
        lo=lo,
        hi=hi,
        bases={i: tuple(label(c) for c in cs) for i, cs in sorted(by_pos.items())},
        boundaries={i: tuple(tuple(r) for r in m) for i, m in mats.items()},
        field=fld,
        unresolved=unresolved,
    )


def cohomology(V: VectorSpaceComplex) -> Dict[int, int]:
    """dim H^i = dim C^i − rang ∂^i − rang ∂^{i−1} (sur le corps du complexe)."""
    ranks = {i: V.field.rank(V.boundary(i)) for i in range(V.lo, V.hi)}
    return {
        i: len(V.basis(i)) - ranks.get(i, 0) - ranks.get(i - 1, 0)
        for i in range(V.lo, V.hi + 1)
    }


# === Tranches affines =========================================================

class SliceKind(str, Enum):
    ISHIDA = "ishida"
    PLUS_ISHIDA = "plus"
    CECH = "cech"


def _ishida_like(M: AffineSemigroup, qualifies: Callable[[Face], Optional[bool]], fld: FieldSpec) -> VectorSpaceComplex:
    FL = M.face_lattice
    arrows = [(F, G, s) for (F, G), s in FL.incidence.items()]
    return assemble(
        FL.faces, lambda F: -F.dim, arrows, qualifies, lambda F: F.label, -M.dim, 0, fld
    )


def ishida_slice(M: AffineSemigroup, a: Sequence[int], fld: FieldSpec = FieldSpec()) -> VectorSpaceComplex:
    """Position −dim F : faces F avec a ∈ M_F."""
    a = tuple(a)
    return _ishida_like(M, lambda F: F.contains(a) and contains(M, a), fld)


def plus_ishida_slice(M: AffineSemigroup, a: Sequence[int], fld: FieldSpec = FieldSpec()) -> VectorSpaceComplex:
    """Position −dim F : faces F avec a ∈ F et a ∈ ZM_F."""
    a = tuple(a)
    return _ishida_like(M, lambda F: F.contains(a) and M.face_group(F).contains(a), fld)


def cech_slice(
    M: AffineSemigroup, b: Sequence[int], bound: Optional[int] = None, fld: FieldSpec = FieldSpec()
) -> VectorSpaceComplex:
    """Position dim F : faces F avec b ∈ M − M_F (None = non résolu)."""
    b = tuple(b)
    FL = M.face_lattice
    arrows = [(G, F, s) for (F, G), s in FL.incidence.items()]
    return assemble(
        FL.faces,
        lambda F: F.dim,
        arrows,
        lambda F: in_localization(M, F, b, bound),
        lambda F: F.label,
        0,
        M.dim,
        fld,
    )


def build_slice(
    M: AffineSemigroup, kind: SliceKind, a: Sequence[int], bound: Optional[int] = None, fld: FieldSpec = FieldSpec()
) -> VectorSpaceComplex:
    if kind == SliceKind.ISHIDA:
        return ishida_slice(M, a, fld)
    if kind == SliceKind.PLUS_ISHIDA:
        return plus_ishida_slice(M, a, fld)
    return cech_slice(M, a, bound, fld)


# === Tables et balayages ======================================================

@dataclass
class CohomologyTable:
    """degré -> (indice -> dimension non nulle) ; les entrées absentes valent 0."""

    entries: Dict[Any, Dict[int, int]] = field(default_factory=dict)
    unresolved: List[Any] = field(default_factory=list)

    def dimension(self, degree: Any, i: int) -> int:
        return self.entries.get(degree, {}).get(i, 0)

    def rows(self) -> List[Tuple[Any, int, int]]:
        return [(a, i, n) for a, dims in self.entries.items() for i, n in sorted(dims.items())]

    def support(self, i: Optional[int] = None) -> List[Any]:
        return [a for a, dims in self.entries.items() if (i is None and dims) or (i in dims)]

    def add(self, degree: Any, dims: Dict[int, int], unresolved: bool) -> None:
        nonzero = {i: n for i, n in dims.items() if n}
        if nonzero:
            self.entries[degree] = nonzero
        if unresolved:
            self.unresolved.append(degree)


def _scan_one(args: Tuple[AffineSemigroup, SliceKind, Vector, Optional[int], FieldSpec]) -> Tuple[Vector, Dict[int, int], bool]:
    M, kind, a, bound, fld = args
    V = build_slice(M, kind, a, bound, fld)
    return a, cohomology(V), bool(V.unresolved)


def run_parallel(fn: Callable, tasks: List[Any], jobs: int = 1) -> List[Any]:
    """map déterministe : série si jobs ≤ 1, sinon ProcessPoolExecutor (ordre conservé)."""
    if jobs <= 1 or len(tasks) < 2:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))


def scan(
    M: AffineSemigroup,
    kind: SliceKind,
    box: Box,
    fld: FieldSpec = FieldSpec(),
    *,
    bound: Optional[int] = None,
    jobs: int = 1,
) -> CohomologyTable:
    tasks = [(M, SliceKind(kind), tuple(a), bound, fld) for a in box.points()]
    table = CohomologyTable()
    for a, dims, unresolved in run_parallel(_scan_one, tasks, jobs):
        table.add(a, dims, unresolved)
    logger.debug("scan %s over %s: %d nonzero degrees", SliceKind(kind).value, box.to_text(), len(table.entries))
    return table


# === Sondes ===================================================================

@dataclass
class ProbeReport:
    """Résultat d'une sonde : témoins (valeurs), degrés non résolus, détails."""

    name: str
    witnesses: List[Dict[str, Any]] = field(default_factory=list)
    unresolved: List[Any] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.witnesses

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "witnesses": self.witnesses,
            "unresolved": [list(a) if isinstance(a, tuple) else a for a in self.unresolved],
            "details": self.details,
        }


def seminormality_criterion_probe(
    M: AffineSemigroup, box: Box, fld: FieldSpec = FieldSpec(), *, bound: Optional[int] = None, jobs: int = 1
) -> ProbeReport:
    """Témoins (i, a) : H_m^i(R)_a ≠ 0 avec −a ∉ C(M)."""
    table = scan(M, SliceKind.CECH, box, fld, bound=bound, jobs=jobs)
    report = ProbeReport("seminormality-criterion", unresolved=list(table.unresolved))
    for a, i, n in table.rows():
        if not M.cone.contains(tuple(-x for x in a)):
            report.witnesses.append({"index": i, "degree": list(a), "dimension": n})
    return report


def duality_check(
    M: AffineSemigroup, box: Box, fld: FieldSpec = FieldSpec(), *, bound: Optional[int] = None, jobs: int = 1
) -> ProbeReport:
    """Compare dim H^{−i}(⁺I• en a) et dim H_m^i(R)_{−a} pour tout a de la boîte."""
    plus = scan(M, SliceKind.PLUS_ISHIDA, box, fld, jobs=jobs)
    mirror = Box(tuple((-hi, -lo) for lo, hi in box.ranges))
    cech = scan(M, SliceKind.CECH, mirror, fld, bound=bound, jobs=jobs)
    report = ProbeReport("duality-check", unresolved=[tuple(-x for x in b) for b in cech.unresolved])
    for a in box.points():
        neg = tuple(-x for x in a)
        for i in range(0, M.dim + 1):
            lhs, rhs = plus.dimension(a, -i), cech.dimension(neg, i)
            if lhs != rhs:
                report.witnesses.append(
                    {"degree": list(a), "index": i, "plus_ishida": lhs, "local_cohomology": rhs}
                )
    report.details["note"] = "box-limited search"
    return report


def cm_probe(
    M: AffineSemigroup, box: Box, fld: FieldSpec = FieldSpec(), *, bound: Optional[int] = None, jobs: int = 1
) -> ProbeReport:
    """Témoins (i < d, a) avec H_m^i(R)_a ≠ 0."""
    table = scan(M, SliceKind.CECH, box, fld, bound=bound, jobs=jobs)
    report = ProbeReport("cm-probe", unresolved=list(table.unresolved))
    for a, i, n in table.rows():
        if i < M.dim:
            report.witnesses.append({"index": i, "degree": list(a), "dimension": n})
    return report


def canonical_compare(
    M: AffineSemigroup, box: Box, fld: FieldSpec = FieldSpec(), *, bound: Optional[int] = None, jobs: int = 1
) -> ProbeReport:
    """
    Trois ensembles de degrés sur la boîte : support de H^{−d}(I•), support de ω_R
    (dual des tranches de Čech) et W_R. Pour M normal, les trois coïncident.
    """
    d = M.dim
    ishida = scan(M, SliceKind.ISHIDA, box, fld, jobs=jobs)
    mirror = Box(tuple((-hi, -lo) for lo, hi in box.ranges))
    cech = scan(M, SliceKind.CECH, mirror, fld, bound=bound, jobs=jobs)
    top = sorted(ishida.support(-d))
    omega = sorted(tuple(-x for x in b) for b in cech.support(d))
    interior = sorted(interior_degrees(M, box))
    normal = is_normal(M)
    cm = cm_probe(M, mirror, fld, bound=bound, jobs=jobs)

    report = ProbeReport("compare", unresolved=[tuple(-x for x in b) for b in cech.unresolved])
    report.details = {
        "normal": normal,
        "cohen_macaulay_on_box": cm.passed,
        "ishida_top": [list(a) for a in top],
        "omega": [list(a) for a in omega],
        "interior": [list(a) for a in interior],
        "ishida_top_equals_interior": top == interior,
        "omega_equals_interior": omega == interior,
    }
    consistent = (normal == (omega == interior)) and (not normal or (top == interior and cm.passed))
    report.details["consistent"] = consistent
    if not consistent:
        report.witnesses.append({"reason": "normality flags inconsistent with degree sets"})
    return report
