# backend/algebra/services/builders.py
"""
Constructions de complexes monoïdaux : éventail, complexe simplicial (Stanley-Reisner),
cône unique d'un semigroupe affine. L'incidence est dérivée des plongements.
"""
from __future__ import annotations

import logging
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

from ..errors import NotAFan, NotInCone, NotPointed
from .cones import Cone, cone_from_inequalities, cone_from_rays, face_lattice, hilbert_basis
from .lattice import IntMatrix, Lattice, Vector, lattice_from_vectors, primitive, saturation
from .semigroup import AffineSemigroup, new_affine_semigroup
from .toricface import EMPTY, DegreeKind, MonoidalComplex, ToricDegree, build_complex

logger = logging.getLogger("algebra.builders")


def _label_key(x: object) -> Tuple[int, object]:
    s = str(x)
    return (0, int(s)) if s.lstrip("-").isdigit() else (1, s)


def cell_id(labels: Iterable[object]) -> str:
    labels = sorted(labels, key=_label_key)
    return "-".join(str(x) for x in labels) if labels else EMPTY


def _change_of_basis(upper: Lattice, lower: Lattice) -> IntMatrix:
    """Colonnes = coordonnées de la base de `lower` dans celle de `upper`."""
    cols = [upper.coordinates(b) for b in lower.basis]
    return IntMatrix.from_columns(cols, upper.rank)  # type: ignore[arg-type]


# --- Complexe simplicial ----------------------------------------------------------

def build_stanley_reisner(facets: Sequence[Sequence[object]]) -> MonoidalComplex:
    """M_σ = N^{|σ|}, plongements = inclusions de coordonnées (sommets triés)."""
    faces: set = set()
    for f in facets:
        verts = tuple(sorted({str(v) for v in f}, key=_label_key))
        for k in range(1, len(verts) + 1):
            faces.update(combinations(verts, k))
    cells: Dict[str, int] = {cell_id(f): len(f) - 1 for f in faces}
    covers: List[Tuple[str, str]] = []
    monoids: Dict[str, AffineSemigroup] = {}
    embeddings: Dict[Tuple[str, str], IntMatrix] = {}
    for f in faces:
        n = len(f)
        monoids[cell_id(f)] = new_affine_semigroup(IntMatrix.identity(n).entries, n)
        if n == 1:
            continue
        for drop in range(n):
            g = f[:drop] + f[drop + 1:]
            covers.append((cell_id(f), cell_id(g)))
            embeddings[(cell_id(f), cell_id(g))] = IntMatrix.from_columns(
                [tuple(int(i == f.index(v)) for i in range(n)) for v in g], n
            )
    MC = build_complex(cells, covers, monoids, embeddings)
    logger.debug("stanley-reisner complex: %d cells", len(MC.cells))
    return MC


# --- Éventail ------------------------------------------------------------------------

def build_from_fan(rays: Sequence[Sequence[int]], cones: Sequence[Sequence[int]]) -> MonoidalComplex:
    """
    Complexe conique d'un éventail : une cellule par face de cône (ensemble d'indices
    de rayons), L_σ = Z^n ∩ span σ (base HNF), M_σ = L_σ ∩ C_σ.
    """
    if not rays:
        raise NotAFan("Éventail sans rayon.")
    n = len(rays[0])
    prim = [primitive(r) for r in rays]
    index = {r: i for i, r in enumerate(prim)}
    if len(index) != len(prim):
        raise NotAFan("Rayons répétés dans l'éventail.")

    cells: Dict[FrozenSet[int], Cone] = {}
    for idx in cones:
        idx = sorted(set(int(i) for i in idx))
        try:
            C = cone_from_rays([prim[i] for i in idx], n)
        except NotPointed:
            raise NotAFan(f"Cône {idx} non pointé.", cone=idx)
        if sorted(C.rays) != sorted(prim[i] for i in idx):
            raise NotAFan(f"Cône {idx} : rayons non extrêmes.", cone=idx)
        for F in face_lattice(C).faces:
            cells[frozenset(index[r] for r in F.rays)] = F.cone

    _check_fan(cones, prim, n)

    dims = {cell_id(s): C.dim - 1 for s, C in cells.items() if s}
    lattices = {s: saturation([prim[i] for i in s], n) for s in cells}
    monoids: Dict[str, AffineSemigroup] = {}
    for s, C in cells.items():
        if not s:
            continue
        L = lattices[s]
        hb = hilbert_basis(C, lattice_from_vectors(IntMatrix.identity(n).entries, n))
        monoids[cell_id(s)] = new_affine_semigroup([L.coordinates(h) for h in hb], L.rank)  # type: ignore[misc]
    covers: List[Tuple[str, str]] = []
    embeddings: Dict[Tuple[str, str], IntMatrix] = {}
    for s in cells:
        for t in cells:
            if s and t and t < s and dims[cell_id(t)] == dims[cell_id(s)] - 1:
                covers.append((cell_id(s), cell_id(t)))
                embeddings[(cell_id(s), cell_id(t))] = _change_of_basis(lattices[s], lattices[t])
    return build_complex(dims, covers, monoids, embeddings)


def _check_fan(cones: Sequence[Sequence[int]], prim: List[Vector], n: int) -> None:
    """Deux cônes se coupent selon le cône de leurs rayons communs, face de chacun."""
    built = [(sorted(set(int(i) for i in c)), cone_from_rays([prim[int(i)] for i in c], n)) for c in cones]
    for (i1, C1), (i2, C2) in combinations(built, 2):
        inter = cone_from_inequalities(
            C1.facet_normals + C2.facet_normals, C1.equations + C2.equations, n
        )
        common = sorted(prim[i] for i in set(i1) & set(i2))
        if sorted(inter.rays) != common:
            raise NotAFan(f"Les cônes {i1} et {i2} ne se coupent pas selon une face commune.", cones=[i1, i2])
        if common:
            for C in (C1, C2):
                face = C.face_from_support(C.support_of(common))
                if sorted(face.rays) != common:
                    raise NotAFan(f"Rayons communs {common} : pas une face.", cones=[i1, i2])


# --- Cône unique --------------------------------------------------------------------

def from_affine_semigroup(M: AffineSemigroup) -> MonoidalComplex:
    """
    Complexe à un cône : cellules = faces de C(M), L_σ = Z^d ∩ span F,
    M_σ = M_F en coordonnées de L_σ.
    """
    FL = M.face_lattice
    d = M.ambient_dim
    names = {F: (EMPTY if F.dim == 0 else f"face{i}") for i, F in enumerate(FL.faces)}
    lattices = {F: saturation(F.rays, d) for F in FL.faces}
    dims = {names[F]: F.dim - 1 for F in FL.faces}
    monoids: Dict[str, AffineSemigroup] = {}
    for F in FL.faces:
        if F.dim == 0:
            continue
        L = lattices[F]
        monoids[names[F]] = new_affine_semigroup([L.coordinates(g) for g in M.generators_on(F)], L.rank)  # type: ignore[misc]
    covers: List[Tuple[str, str]] = []
    embeddings: Dict[Tuple[str, str], IntMatrix] = {}
    for F, lower in FL.covers.items():
        for G in lower:
            covers.append((names[F], names[G]))
            if G.dim > 0:
                embeddings[(names[F], names[G])] = _change_of_basis(lattices[F], lattices[G])
    return build_complex(dims, covers, monoids, embeddings)


def affine_degree(M: AffineSemigroup, MC: MonoidalComplex, a: Sequence[int]) -> ToricDegree:
    """Degré torique de a ∈ C(M) ∪ −C(M) dans le complexe à un cône de M."""
    top = MC.poset.maximal_cells[0]
    L = saturation(M.face_lattice.full.rays, M.ambient_dim)
    a = tuple(int(x) for x in a)
    if M.cone.contains(a):
        return MC.degree(top, L.coordinates(a) or (), DegreeKind.MBAR)
    neg = tuple(-x for x in a)
    if M.cone.contains(neg):
        return MC.degree(top, L.coordinates(neg) or (), DegreeKind.NEG)
    raise NotInCone(f"{a} hors de C(M) ∪ −C(M).", vector=list(a))
