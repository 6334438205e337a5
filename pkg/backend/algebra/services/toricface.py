# backend/algebra/services/toricface.py
"""
Complexes monoïdaux et anneaux de faces toriques.

- CWPoset : cellules (dont la cellule vide "empty", dim −1), recouvrements, incidence ;
- MonoidalComplex : un semigroupe affine M_σ ⊂ Z^{dim σ+1} par cellule et des plongements
  entiers ĩ_{σ,τ} (composés le long des recouvrements) ;
- degrés du colimite restreints à |M|, |M̄M| et à leurs opposés formels ;
- tranches ⁺I•, I•, Č•, seminormalisation et normalisation cellule par cellule,
  comparaisons de cohomologie locale.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from math import lcm
from typing import Any, Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from ..errors import AlgebraError, InconsistentIncidence, InvalidInput, NotInCone
from .boxes import Box, box_for_cell
from .complexes import (
    FieldSpec,
    ProbeReport,
    VectorSpaceComplex,
    assemble,
    cohomology,
    run_parallel,
)
from .cones import Face, carrier_face, check_two_step, hilbert_basis
from .lattice import (
    IntMatrix,
    Vector,
    determinant,
    is_primitive_embedding,
    lattice_from_vectors,
    primitive,
    solve_injective,
    vadd,
    vscale,
)
from .semigroup import (
    AffineSemigroup,
    contains,
    in_localization,
    is_seminormal,
    new_affine_semigroup,
    seminormalization,
)

logger = logging.getLogger("algebra.toricface")

EMPTY = "empty"


# === Poset =====================================================================

@dataclass(frozen=True, eq=False)
class CWPoset:
    cells: Tuple[str, ...]
    dims: Dict[str, int]
    covers: Tuple[Tuple[str, str], ...]
    incidence: Dict[Tuple[str, str], int]

    @cached_property
    def lower_covers(self) -> Dict[str, Tuple[str, ...]]:
        out: Dict[str, List[str]] = {c: [] for c in self.cells}
        for s, t in self.covers:
            out[s].append(t)
        return {c: tuple(sorted(v, key=self.sort_key)) for c, v in out.items()}

    @cached_property
    def below(self) -> Dict[str, FrozenSet[str]]:
        """Cellules ≤ σ (σ compris)."""
        out: Dict[str, FrozenSet[str]] = {}
        for c in sorted(self.cells, key=self.sort_key):
            acc = {c}
            for t in self.lower_covers[c]:
                acc |= out.get(t, {t})
            out[c] = frozenset(acc)
        return out

    def sort_key(self, c: str) -> Tuple[int, str]:
        return (self.dims[c], c)

    @property
    def dim(self) -> int:
        return max(self.dims.values(), default=-1)

    def leq(self, tau: str, sigma: str) -> bool:
        return tau in self.below[sigma]

    @cached_property
    def maximal_cells(self) -> Tuple[str, ...]:
        covered = {t for _, t in self.covers}
        return tuple(c for c in self.cells if c not in covered)

    def upper_bounds(self, *cells: str) -> List[str]:
        return [s for s in self.cells if all(self.leq(c, s) for c in cells)]

    def meet(self, sigma: str, tau: str) -> Optional[str]:
        """Unique borne inférieure maximale commune, ou None si elle n'est pas unique."""
        common = self.below[sigma] & self.below[tau]
        tops = [c for c in common if not any(c != o and self.leq(c, o) for o in common)]
        return tops[0] if len(tops) == 1 else None


# === Complexe monoïdal =========================================================

@dataclass(frozen=True, eq=False)
class MonoidalComplex:
    poset: CWPoset
    monoids: Dict[str, AffineSemigroup]
    embeddings: Dict[Tuple[str, str], IntMatrix]
    _cache: Dict[Any, Any] = field(default_factory=dict, repr=False)

    @property
    def cells(self) -> Tuple[str, ...]:
        return self.poset.cells

    @property
    def dim(self) -> int:
        """Dimension de Krull de l'anneau : dim X + 1."""
        return self.poset.dim + 1

    def rank(self, cell: str) -> int:
        return self.poset.dims[cell] + 1

    def monoid(self, cell: str) -> AffineSemigroup:
        return self.monoids[cell]

    def embedding(self, sigma: str, tau: str) -> IntMatrix:
        """ĩ_{σ,τ}, fourni ou composé le long des recouvrements."""
        key = ("emb", sigma, tau)
        if key in self._cache:
            return self._cache[key]
        if sigma == tau:
            A = IntMatrix.identity(self.rank(sigma))
        elif (sigma, tau) in self.embeddings:
            A = self.embeddings[(sigma, tau)]
        elif tau == EMPTY:
            A = IntMatrix(self.rank(sigma), 0, tuple(() for _ in range(self.rank(sigma))))
        elif tau in self.poset.lower_covers[sigma]:
            raise InvalidInput(f"Plongement manquant {sigma}|{tau}.", cells=[sigma, tau])
        else:
            rho = next(
                (r for r in self.poset.lower_covers[sigma] if r != tau and self.poset.leq(tau, r)), None
            )
            if rho is None:
                raise InvalidInput(f"Cellules non comparables : {sigma} et {tau}.", cells=[sigma, tau])
            A = self.embedding(sigma, rho) @ self.embedding(rho, tau)
        self._cache[key] = A
        return A

    def face_of(self, sigma: str, tau: str) -> Face:
        """Face ĩ_{σ,τ}(C_τ) de C_σ."""
        key = ("face", sigma, tau)
        if key not in self._cache:
            C = self.monoids[sigma].cone
            A = self.embedding(sigma, tau)
            s: Vector = tuple([0] * self.rank(sigma))
            if tau != EMPTY:
                for r in self.monoids[tau].cone.rays:
                    s = vadd(s, A.apply(r))
            self._cache[key] = carrier_face(C, s)
        return self._cache[key]

    def cell_of_face(self, sigma: str, face: Face) -> str:
        key = ("cells", sigma)
        if key not in self._cache:
            self._cache[key] = {
                self.face_of(sigma, t).support: t for t in self.poset.below[sigma]
            }
        try:
            return self._cache[key][face.support]
        except KeyError:
            raise InvalidInput(f"Aucune cellule sous {sigma} pour la face {face.label}.", cell=sigma)

    def degree(self, cell: str, vector: Sequence[int], kind: "DegreeKind") -> "ToricDegree":
        """Forme canonique : cellule porteuse minimale et vecteur ramené par ĩ."""
        kind = DegreeKind(kind)
        v = tuple(int(x) for x in vector)
        if cell == EMPTY:
            return ToricDegree(EMPTY, (), kind)
        C = self.monoids[cell].cone
        if not C.contains(v):
            raise NotInCone(f"{v} hors du cône de la cellule {cell}.", cell=cell, vector=list(v))
        tau = self.cell_of_face(cell, carrier_face(C, v))
        w = solve_injective(self.embedding(cell, tau), v)
        if w is None:
            raise InvalidInput(f"{v} n'est pas dans l'image de L_{tau}.", cell=cell)
        if kind == DegreeKind.M and tau != EMPTY and not contains(self.monoids[tau], w):
            raise InvalidInput(f"{v} n'est pas un degré de |M| (cellule {tau}).", cell=tau)
        return ToricDegree(tau, w, kind)

    def replace_monoids(self, monoids: Mapping[str, AffineSemigroup]) -> "MonoidalComplex":
        return MonoidalComplex(self.poset, dict(monoids), dict(self.embeddings))


class DegreeKind(str, Enum):
    M = "M"
    MBAR = "MBAR"
    NEG = "NEG"


@dataclass(frozen=True)
class ToricDegree:
    """Degré (cellule porteuse, vecteur de relint C_σ) ; NEG représente −a."""

    cell: str
    vector: Vector
    kind: DegreeKind = DegreeKind.MBAR

    @property
    def is_zero(self) -> bool:
        return self.cell == EMPTY

    def negated(self) -> "ToricDegree":
        kind = DegreeKind.MBAR if self.kind == DegreeKind.NEG else DegreeKind.NEG
        return ToricDegree(self.cell, self.vector, kind)

    @property
    def label(self) -> str:
        sign = "-" if self.kind == DegreeKind.NEG and not self.is_zero else ""
        return f"{sign}{self.cell}:{list(self.vector)}"


def zero_degree(kind: DegreeKind = DegreeKind.MBAR) -> ToricDegree:
    return ToricDegree(EMPTY, (), kind)


# === Incidence dérivée des plongements =========================================

def _cell_sign(MC: MonoidalComplex, sigma: str, tau: str) -> int:
    A = MC.embedding(sigma, tau)
    face = MC.face_of(sigma, tau)
    u = next(r for r in MC.monoids[sigma].cone.rays if r not in face.rays)
    rows = [list(A.entries[i]) + [u[i]] for i in range(A.nrows)]
    det = determinant(rows)
    if det == 0:
        raise InconsistentIncidence(f"Orientation dégénérée pour {sigma} > {tau}.", cells=[sigma, tau])
    return 1 if det > 0 else -1


def derive_incidence(MC: MonoidalComplex) -> Dict[Tuple[str, str], int]:
    """
    ε(σ,τ) = signe de det(colonnes de ĩ_{σ,τ}, u), u rayon de C_σ hors de ĩ(C_τ),
    chaque cellule orientée par la base standard de E_σ ; les sommets sont réorientés
    pour que ε(v, empty) = +1.
    """
    flip = {c: 1 for c in MC.cells}
    for c in MC.cells:
        if MC.poset.dims[c] == 0:
            flip[c] = _cell_sign(MC, c, EMPTY)
    out: Dict[Tuple[str, str], int] = {}
    for s, t in MC.poset.covers:
        out[(s, t)] = flip[s] * flip[t] * _cell_sign(MC, s, t)
    return out


def _missing_cover_embeddings(poset: CWPoset, embeddings: Mapping[Tuple[str, str], IntMatrix]) -> List[Tuple[str, str]]:
    return [(s, t) for s, t in poset.covers if t != EMPTY and (s, t) not in embeddings]


def build_complex(
    cells: Mapping[str, int],
    covers: Sequence[Tuple[str, str]],
    monoids: Mapping[str, AffineSemigroup],
    embeddings: Mapping[Tuple[str, str], IntMatrix],
    incidence: Optional[Mapping[Tuple[str, str], int]] = None,
) -> MonoidalComplex:
    """Assemble un complexe ; ajoute la cellule vide et dérive l'incidence si besoin."""
    dims = dict(cells)
    cover_list = [tuple(c) for c in covers]
    if EMPTY not in dims:
        dims[EMPTY] = -1
        cover_list += [(c, EMPTY) for c, k in dims.items() if k == 0]
    monoids = dict(monoids)
    monoids.setdefault(EMPTY, new_affine_semigroup([], 0))
    order = tuple(sorted(dims, key=lambda c: (dims[c], c)))
    poset = CWPoset(order, dims, tuple(sorted(set(cover_list))), dict(incidence or {}))  # type: ignore[arg-type]
    missing = _missing_cover_embeddings(poset, embeddings)
    if missing:
        raise InvalidInput(
            "Plongements manquants : " + ", ".join(f"{s}|{t}" for s, t in missing) + ".",
            covers=[f"{s}|{t}" for s, t in missing],
        )
    MC = MonoidalComplex(poset, monoids, dict(embeddings))
    if incidence is None:
        poset.incidence.update(derive_incidence(MC))
    else:
        for s, t in poset.covers:
            if (s, t) not in poset.incidence and t == EMPTY:
                poset.incidence[(s, t)] = 1
    return MC


# === Validation ================================================================

@dataclass(frozen=True)
class ValidationFailure:
    axiom: str
    cells: Tuple[str, ...]
    message: str

    def to_dict(self) -> Dict[str, Any]:
        return {"axiom": self.axiom, "cells": list(self.cells), "message": self.message}


@dataclass
class ValidationReport:
    failures: List[ValidationFailure] = field(default_factory=list)
    checked: Dict[str, int] = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return not self.failures

    def fail(self, axiom: str, cells: Sequence[str], message: str) -> None:
        self.failures.append(ValidationFailure(axiom, tuple(cells), message))

    def tick(self, axiom: str) -> None:
        self.checked[axiom] = self.checked.get(axiom, 0) + 1

    def to_dict(self) -> Dict[str, Any]:
        return {
            "valid": self.valid,
            "failures": [f.to_dict() for f in self.failures],
            "checked": dict(sorted(self.checked.items())),
        }


def validate(MC: MonoidalComplex) -> ValidationReport:
    report = ValidationReport()
    P = MC.poset

    # Poset : cellule vide unique, dimensions des recouvrements, propriété d'intersection
    for s, t in P.covers:
        report.tick("poset.cover_dims")
        if P.dims[s] != P.dims[t] + 1:
            report.fail("poset.cover_dims", (s, t), "Un recouvrement doit augmenter la dimension de 1.")
    for c in P.cells:
        report.tick("poset.empty_cell")
        if not P.leq(EMPTY, c):
            report.fail("poset.empty_cell", (c,), "La cellule vide doit être sous toute cellule.")
    for i, s in enumerate(P.cells):
        for t in P.cells[i + 1:]:
            report.tick("poset.intersection")
            if P.meet(s, t) is None:
                report.fail("poset.intersection", (s, t), "Pas de plus grande cellule commune unique.")

    # Incidence
    for s, t in P.covers:
        report.tick("incidence.values")
        if P.incidence.get((s, t)) not in (1, -1):
            report.fail("incidence.values", (s, t), "Incidence absente ou différente de ±1.")
        elif t == EMPTY and P.incidence[(s, t)] != 1:
            report.fail("incidence.values", (s, t), "ε(sommet, vide) doit valoir +1.")
    if not any(f.axiom == "incidence.values" for f in report.failures):
        report.tick("incidence.two_step")
        try:
            check_two_step(P.incidence, P.lower_covers)  # type: ignore[arg-type]
        except InconsistentIncidence as e:
            report.fail("incidence.two_step", (str(e.extra.get("upper", "")),), e.detail)

    # Monoïdes
    for c in P.cells:
        if c == EMPTY:
            continue
        report.tick("monoid.cone")
        M = MC.monoids.get(c)
        if M is None:
            report.fail("monoid.cone", (c,), "Aucun monoïde pour cette cellule.")
            continue
        if M.ambient_dim != MC.rank(c) or M.cone.dim != MC.rank(c):
            report.fail("monoid.cone", (c,), f"C_σ doit être de dimension pleine dans R^{MC.rank(c)}.")
    if any(f.axiom == "monoid.cone" for f in report.failures):
        return report

    # Plongements
    for s, t in _missing_cover_embeddings(P, MC.embeddings):
        report.fail("embedding.shape", (s, t), f"Plongement manquant {s}|{t}.")
    if any(f.axiom == "embedding.shape" for f in report.failures):
        return report
    for s in P.cells:
        for t in sorted(P.below[s], key=P.sort_key):
            if s == t or t == EMPTY:
                continue
            _validate_pair(MC, s, t, report)
        if s != EMPTY:
            report.tick("embedding.face_bijection")
            try:
                supports = [MC.face_of(s, t).support for t in P.below[s]]
                faces = set(MC.monoids[s].face_lattice.by_support)
                if len(set(supports)) != len(supports) or set(supports) != faces:
                    report.fail(
                        "embedding.face_bijection", (s,),
                        "Les faces de C_σ ne correspondent pas aux cellules τ ≤ σ.",
                    )
            except AlgebraError as e:
                report.fail("embedding.face_bijection", (s,), e.detail)
    logger.debug("validate: %d failures, %s", len(report.failures), report.checked)
    return report


def _validate_pair(MC: MonoidalComplex, s: str, t: str, report: ValidationReport) -> None:
    try:
        A = MC.embedding(s, t)
    except AlgebraError as e:
        report.fail("embedding.shape", (s, t), e.detail)
        return
    report.tick("embedding.shape")
    if A.shape != (MC.rank(s), MC.rank(t)):
        report.fail("embedding.shape", (s, t), f"Forme {A.shape}, attendu {(MC.rank(s), MC.rank(t))}.")
        return
    report.tick("embedding.primitive")
    if not is_primitive_embedding(A):
        report.fail("embedding.primitive", (s, t), "ĩ non injectif ou d'image non saturée dans L_σ.")
        return
    report.tick("embedding.functorial")
    for r in MC.poset.lower_covers[s]:
        if r != t and MC.poset.leq(t, r) and MC.embedding(s, r) @ MC.embedding(r, t) != A:
            report.fail("embedding.functorial", (s, r, t), "ĩ_{σ,ρ}·ĩ_{ρ,τ} ≠ ĩ_{σ,τ}.")
    report.tick("embedding.face")
    Ms, Mt = MC.monoids[s], MC.monoids[t]
    images = sorted(set(primitive(A.apply(r)) for r in Mt.cone.rays))
    try:
        face = MC.face_of(s, t)
    except AlgebraError as e:
        report.fail("embedding.face", (s, t), e.detail)
        return
    if sorted(face.rays) != images:
        report.fail("embedding.face", (s, t), "ĩ(C_τ) n'est pas une face de C_σ.")
        return
    report.tick("embedding.monoid_iso")
    for g in Mt.generators:
        if not contains(Ms, A.apply(g)):
            report.fail("embedding.monoid_iso", (s, t), f"ĩ({list(g)}) ∉ M_σ.")
            return
    for g in Ms.generators_on(face):
        w = solve_injective(A, g)
        if w is None or not contains(Mt, w):
            report.fail("embedding.monoid_iso", (s, t), f"{list(g)} ∈ M_σ ∩ face sans antécédent dans M_τ.")
            return


# === Anneau de faces torique ===================================================

def add(MC: MonoidalComplex, a: ToricDegree, b: ToricDegree) -> Optional[ToricDegree]:
    """Somme dans une cellule minimale portant a et b, ou None si aucune ne les porte."""
    if a.kind != b.kind or a.kind == DegreeKind.NEG:
        raise InvalidInput("Addition définie pour deux degrés de |M| ou deux degrés de |M̄M|.")
    if a.is_zero:
        return b
    if b.is_zero:
        return a
    P = MC.poset
    uppers = P.upper_bounds(a.cell, b.cell)
    if not uppers:
        return None
    minimal = sorted(
        (u for u in uppers if not any(o != u and P.leq(o, u) for o in uppers)), key=P.sort_key
    )
    rho = minimal[0]
    v = vadd(MC.embedding(rho, a.cell).apply(a.vector), MC.embedding(rho, b.cell).apply(b.vector))
    return MC.degree(rho, v, a.kind)


@dataclass(frozen=True)
class ToricFaceRing:
    """k[MM] : x^a·x^b = x^{a+b} si a+b existe, 0 sinon."""

    complex: MonoidalComplex

    @property
    def dim(self) -> int:
        return self.complex.dim

    def monomial(self, cell: str, vector: Sequence[int]) -> ToricDegree:
        return self.complex.degree(cell, vector, DegreeKind.M)

    def multiply(self, a: ToricDegree, b: ToricDegree) -> Optional[ToricDegree]:
        return add(self.complex, a, b)


# === Transformations cellule par cellule =======================================

def seminormalize_complex(MC: MonoidalComplex, bound: Optional[int] = None) -> MonoidalComplex:
    monoids = {
        c: (M if c == EMPTY else new_affine_semigroup(seminormalization(M, bound), M.ambient_dim))
        for c, M in MC.monoids.items()
    }
    return MC.replace_monoids(monoids)


def is_seminormal_complex(MC: MonoidalComplex, bound: Optional[int] = None) -> bool:
    return all(is_seminormal(M, bound) for c, M in MC.monoids.items() if c != EMPTY)


def conewise_normalize(MC: MonoidalComplex) -> MonoidalComplex:
    """M̃_σ = L_σ ∩ C_σ (réseau ambiant entier de la cellule)."""
    monoids: Dict[str, AffineSemigroup] = {}
    for c, M in MC.monoids.items():
        if c == EMPTY:
            monoids[c] = M
            continue
        L = lattice_from_vectors(IntMatrix.identity(M.ambient_dim).entries, M.ambient_dim)
        monoids[c] = new_affine_semigroup(hilbert_basis(M.cone, L), M.ambient_dim)
    return MC.replace_monoids(monoids)


def _least_multiple(M: AffineSemigroup, h: Sequence[int]) -> int:
    # h ∈ C_σ de dimension pleine : un multiple de h est dans M_σ
    k = 1
    while not contains(M, vscale(k, h)):
        k += 1
    return k


def normalization_exponents(MC: MonoidalComplex) -> Dict[str, int]:
    """
    Par cellule, le plus petit k ≥ 1 tel que k·h ∈ M_σ pour toute h de la base de Hilbert
    de M̃_σ = L_σ ∩ C_σ. C'est ce k qui rend ⁺I• et les modules ℓ de type fini sur R.
    """
    tilde = conewise_normalize(MC)
    out: Dict[str, int] = {}
    for c in MC.cells:
        if c == EMPTY:
            continue
        M, hb = MC.monoids[c], tilde.monoids[c].generators
        top = lcm(*(_least_multiple(M, h) for h in hb)) if hb else 1
        out[c] = next(k for k in range(1, top + 1) if all(contains(M, vscale(k, h)) for h in hb))
    logger.debug("normalization exponents: %s", out)
    return out


# === Tranches ==================================================================

def _embedded(MC: MonoidalComplex, sigma: str, a: ToricDegree) -> Vector:
    return MC.embedding(sigma, a.cell).apply(a.vector)


def _slice(MC: MonoidalComplex, qualifies, cech: bool, fld: FieldSpec) -> VectorSpaceComplex:
    P = MC.poset
    if cech:
        arrows = [(t, s, e) for (s, t), e in P.incidence.items()]
        sign, lo, hi = 1, 0, MC.dim
    else:
        arrows = [(s, t, e) for (s, t), e in P.incidence.items()]
        sign, lo, hi = -1, -MC.dim, 0

    def position(c: str) -> int:
        return sign * (P.dims[c] + 1)

    return assemble(P.cells, position, arrows, qualifies, lambda c: c, lo, hi, fld)


def plus_ishida_slice(MC: MonoidalComplex, a: ToricDegree, fld: FieldSpec = FieldSpec()) -> VectorSpaceComplex:
    """Position −(dim σ+1) : σ ≥ porteuse(a) et ĩ(a) ∈ ZM_σ."""
    P = MC.poset
    return _slice(
        MC,
        lambda s: P.leq(a.cell, s) and (s == EMPTY or MC.monoids[s].group.contains(_embedded(MC, s, a))),
        False,
        fld,
    )


def ishida_slice(MC: MonoidalComplex, a: ToricDegree, fld: FieldSpec = FieldSpec()) -> VectorSpaceComplex:
    """Position −(dim σ+1) : σ ≥ porteuse(a) et ĩ(a) ∈ M_σ."""
    P = MC.poset
    return _slice(
        MC,
        lambda s: P.leq(a.cell, s) and (s == EMPTY or contains(MC.monoids[s], _embedded(MC, s, a))),
        False,
        fld,
    )


def cech_slice(
    MC: MonoidalComplex, b: ToricDegree, bound: Optional[int] = None, fld: FieldSpec = FieldSpec()
) -> VectorSpaceComplex:
    """
    Position dim σ + 1 : σ entre si b est un degré de T_σ^{-1}R.

    Degré 0 : toutes les cellules. Opposé formel −a : porteuse(a) ≤ σ et ĩ(a) ∈ ZM_σ.
    Degré positif : il existe τ maximale au-dessus de σ et de porteuse(b) avec
    ĩ(b) ∈ M_τ − M_{τ,σ} (None si la recherche n'aboutit pas).
    """
    P = MC.poset
    if b.is_zero:
        return _slice(MC, lambda s: True, True, fld)
    if b.kind == DegreeKind.NEG:
        return _slice(
            MC,
            lambda s: P.leq(b.cell, s) and s != EMPTY and MC.monoids[s].group.contains(_embedded(MC, s, b)),
            True,
            fld,
        )

    def qualifies(s: str) -> Optional[bool]:
        unresolved = False
        for t in P.maximal_cells:
            if not (P.leq(s, t) and P.leq(b.cell, t)):
                continue
            ok = in_localization(MC.monoids[t], MC.face_of(t, s), _embedded(MC, t, b), bound)
            if ok:
                return True
            unresolved = unresolved or ok is None
        return None if unresolved else False

    return _slice(MC, qualifies, True, fld)


def degree_zero_cohomology(MC: MonoidalComplex, fld: FieldSpec = FieldSpec()) -> Dict[int, int]:
    """Cohomologie de la tranche de Čech en degré 0 : H̃^{i−1}(X; k)."""
    return cohomology(cech_slice(MC, zero_degree(), fld=fld))


# === Balayages et comparaisons ==================================================

def box_degrees(
    MC: MonoidalComplex, box: str, cell_boxes: Optional[Mapping[str, str]] = None
) -> List[ToricDegree]:
    """
    Points de |M̄M| : points de relint C_σ dans la boîte de chaque cellule,
    précédés du degré 0 quand la boîte contient l'origine.
    """
    out = [zero_degree()] if all(lo <= 0 <= hi for lo, hi in Box.parse(box).ranges) else []
    for c in sorted(MC.cells):
        if c == EMPTY:
            continue
        C = MC.monoids[c].cone
        for v in box_for_cell(box, cell_boxes or {}, c, MC.rank(c)).points():
            if C.in_relative_interior(v):
                out.append(ToricDegree(c, tuple(v), DegreeKind.MBAR))
    return out


def _slice_dims(args) -> Tuple[str, Dict[int, int], bool]:
    MC, kind, degree, bound, fld = args
    if kind == "cech":
        V = cech_slice(MC, degree, bound, fld)
    elif kind == "plus":
        V = plus_ishida_slice(MC, degree, fld)
    else:
        V = ishida_slice(MC, degree, fld)
    return degree.label, cohomology(V), bool(V.unresolved)


def slice_table(
    MC: MonoidalComplex,
    kind: str,
    degrees: Sequence[ToricDegree],
    fld: FieldSpec = FieldSpec(),
    *,
    bound: Optional[int] = None,
    jobs: int = 1,
) -> List[Tuple[str, Dict[int, int], bool]]:
    return run_parallel(_slice_dims, [(MC, kind, d, bound, fld) for d in degrees], jobs)


def duality_check(
    MC: MonoidalComplex,
    box: str,
    fld: FieldSpec = FieldSpec(),
    *,
    cell_boxes: Optional[Mapping[str, str]] = None,
    bound: Optional[int] = None,
    jobs: int = 1,
) -> ProbeReport:
    """H^{−i}(⁺I• en a) contre H_m^i(R)_{−a} sur |M̄M| ∩ boîte, et H_m(R) nul en degré positif."""
    degrees = box_degrees(MC, box, cell_boxes)
    plus = slice_table(MC, "plus", degrees, fld, jobs=jobs)
    neg = slice_table(MC, "cech", [d.negated() for d in degrees], fld, bound=bound, jobs=jobs)
    pos = slice_table(MC, "cech", [d for d in degrees if not d.is_zero], fld, bound=bound, jobs=jobs)
    report = ProbeReport("duality-check")
    for a, (_, lhs, _), (_, rhs, unres) in zip(degrees, plus, neg):
        if unres:
            report.unresolved.append(a.negated().label)
        for i in range(MC.dim + 1):
            if lhs.get(-i, 0) != rhs.get(i, 0):
                report.witnesses.append({
                    "degree": a.label, "index": i,
                    "plus_ishida": lhs.get(-i, 0), "local_cohomology": rhs.get(i, 0),
                })
    for label, dims, unres in pos:
        if unres:
            report.unresolved.append(label)
        for i, n in sorted(dims.items()):
            if n:
                report.witnesses.append({"degree": label, "index": i, "positive_support": n})
    report.details["degrees"] = len(degrees)
    report.details["note"] = "box-limited search"
    return report


def cm_probe(
    MC: MonoidalComplex,
    box: str,
    fld: FieldSpec = FieldSpec(),
    *,
    cell_boxes: Optional[Mapping[str, str]] = None,
    bound: Optional[int] = None,
    jobs: int = 1,
) -> ProbeReport:
    """Témoins (i < d) parmi le degré 0, les opposés formels et les degrés positifs de la boîte."""
    degrees = box_degrees(MC, box, cell_boxes)
    probe = list(degrees) + [d.negated() for d in degrees if not d.is_zero]
    report = ProbeReport("cm-probe")
    for label, dims, unres in slice_table(MC, "cech", probe, fld, bound=bound, jobs=jobs):
        if unres:
            report.unresolved.append(label)
        for i, n in sorted(dims.items()):
            if n and i < MC.dim:
                report.witnesses.append({"degree": label, "index": i, "dimension": n})
    return report


def local_cohomology_comparison(
    MC: MonoidalComplex,
    box: str,
    fld: FieldSpec = FieldSpec(),
    *,
    cell_boxes: Optional[Mapping[str, str]] = None,
    bound: Optional[int] = None,
    jobs: int = 1,
) -> ProbeReport:
    """
    (1) H_m^i(⁺R)_a = H_m^i(R)_a pour a ∈ −|M̄M| ∩ boîte ;
    (2) support de H_m^i(R) hors de −|M̄M| : vide si R est seminormal, listé sinon.
    """
    plus_mc = seminormalize_complex(MC, bound)
    degrees = box_degrees(MC, box, cell_boxes)
    negs = [d.negated() for d in degrees]
    lhs = slice_table(plus_mc, "cech", negs, fld, bound=bound, jobs=jobs)
    rhs = slice_table(MC, "cech", negs, fld, bound=bound, jobs=jobs)
    report = ProbeReport("local-cohomology-comparison")
    rows = []
    for (label, dp, u1), (_, dr, u2) in zip(lhs, rhs):
        if u1 or u2:
            report.unresolved.append(label)
        nonzero = {i: n for i, n in dr.items() if n}
        if nonzero or any(dp.values()):
            rows.append({"degree": label, "seminormalization": dp, "ring": dr})
        for i in range(MC.dim + 1):
            if dp.get(i, 0) != dr.get(i, 0):
                report.witnesses.append(
                    {"degree": label, "index": i, "seminormalization": dp.get(i, 0), "ring": dr.get(i, 0)}
                )
    extra = []
    for label, dims, unres in slice_table(MC, "cech", [d for d in degrees if not d.is_zero], fld, bound=bound, jobs=jobs):
        if unres:
            report.unresolved.append(label)
        extra.extend({"degree": label, "index": i, "dimension": n} for i, n in sorted(dims.items()) if n)
    seminormal = is_seminormal_complex(MC, bound)
    if seminormal:
        report.witnesses.extend(dict(e, reason="support outside -|MbarM|") for e in extra)
    report.details = {"seminormal": seminormal, "negative_degrees": rows, "extra_support": extra}
    return report


def cm_chain_report(
    MC: MonoidalComplex,
    box: str,
    fld: FieldSpec = FieldSpec(),
    *,
    cell_boxes: Optional[Mapping[str, str]] = None,
    bound: Optional[int] = None,
    jobs: int = 1,
) -> ProbeReport:
    """
    Sondes CM pour R, ⁺R et R̄ (normalisation cellule par cellule) ;
    violation si ⁺R a un témoin sans que R en ait, ou R̄ sans ⁺R.
    """
    rings = {
        "ring": MC,
        "seminormalization": seminormalize_complex(MC, bound),
        "conewise_normalization": conewise_normalize(MC),
    }
    probes = {
        name: cm_probe(mc, box, fld, cell_boxes=cell_boxes, bound=bound, jobs=jobs)
        for name, mc in rings.items()
    }
    report = ProbeReport("cm-chain")
    for p in probes.values():
        report.unresolved.extend(p.unresolved)
    chain = [("seminormalization", "ring"), ("conewise_normalization", "seminormalization")]
    for upper, lower in chain:
        if probes[upper].witnesses and not probes[lower].witnesses:
            report.witnesses.append({"violation": f"{upper} not CM while {lower} is CM on the box"})
    report.details = {name: p.witnesses for name, p in probes.items()}
    return report

