# backend/algebra/services/cones.py
"""
Cônes rationnels pointés.

- cone_from_rays : description duale (normales de facettes) par double description,
  adjacence testée par le rang ; rayons réduits aux rayons extrêmes primitifs ;
- face_lattice / carrier_face : faces = supports (ensembles de normales qui s'annulent) ;
- incidence_function : signes d'orientation sur les paires de recouvrement ;
- hilbert_basis : triangulation par placement + points des parallélépipèdes fondamentaux,
  puis réduction aux irréductibles.

Les cônes ne sont pas forcément de dimension pleine : `equations` engendre span(C)^⊥,
et les normales sont choisies DANS span(C), ce qui les rend canoniques.
"""
from __future__ import annotations

import logging
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import floor
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from sympy import Matrix

from ..errors import DimensionMismatch, InconsistentIncidence, NotInCone, NotPointed, ZeroGenerator
from .lattice import (
    IntMatrix,
    Lattice,
    Vector,
    determinant,
    dot,
    independent_subset,
    integer_kernel,
    lattice_from_vectors,
    orthogonal_equations,
    primitive,
    rational_rank,
    saturation,
    vscale,
    vsub,
)

logger = logging.getLogger("algebra.cones")


# === Cônes ====================================================================

@dataclass(frozen=True)
class Cone:
    ambient_dim: int
    rays: Tuple[Vector, ...]
    facet_normals: Tuple[Vector, ...]
    equations: Tuple[Vector, ...]
    dim: int

    def _check(self, v: Sequence[int]) -> None:
        if len(v) != self.ambient_dim:
            raise DimensionMismatch(
                f"Vecteur de dimension {len(v)} pour un cône de R^{self.ambient_dim}.",
                expected=self.ambient_dim, got=len(v),
            )

    def contains(self, v: Sequence[int]) -> bool:
        self._check(v)
        return all(dot(e, v) == 0 for e in self.equations) and all(
            dot(n, v) >= 0 for n in self.facet_normals
        )

    def in_relative_interior(self, v: Sequence[int]) -> bool:
        return self.contains(v) and all(dot(n, v) > 0 for n in self.facet_normals)

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_dim

    @cached_property
    def grading(self) -> Vector:
        """Forme linéaire entière strictement positive sur C \\ {0} (somme des normales)."""
        w = [0] * self.ambient_dim
        for n in self.facet_normals:
            w = [a + b for a, b in zip(w, n)]
        return tuple(w)

    def rays_on(self, support: FrozenSet[int]) -> Tuple[Vector, ...]:
        return tuple(
            r for r in self.rays if all(dot(self.facet_normals[i], r) == 0 for i in support)
        )

    def support_of(self, vectors: Sequence[Sequence[int]]) -> FrozenSet[int]:
        return frozenset(
            i for i, n in enumerate(self.facet_normals) if all(dot(n, v) == 0 for v in vectors)
        )

    def face_from_support(self, support: FrozenSet[int]) -> "Face":
        rays = self.rays_on(support)
        closed = self.support_of(rays)
        return Face(self, closed, rays, rational_rank(rays))


def _extreme_rays(constraints: Sequence[Vector], k: int) -> List[Vector]:
    """
    Rayons extrêmes (primitifs) de {c ∈ R^k : a·c ≥ 0 pour toute contrainte a}.

    Le cône doit être pointé (contraintes de rang k) ; sinon NotPointed.
    Initialisation simpliciale sur k contraintes libres, puis ajout une à une
    (règle de Motzkin) ; deux rayons sont adjacents ssi les contraintes déjà traitées
    qui s'annulent sur les deux sont de rang k − 2.
    """
    if k == 0:
        return []
    init = independent_subset(constraints)
    if len(init) < k:
        raise NotPointed("Système d'inégalités de rang insuffisant : le cône contient une droite.")

    A0 = Matrix([list(constraints[i]) for i in init])
    det = int(A0.det())
    adj = A0.adjugate()
    s = 1 if det > 0 else -1
    rays: List[Vector] = [
        primitive([s * int(adj[i, j]) for i in range(k)]) for j in range(k)
    ]
    processed: List[int] = list(init)

    for j, a in enumerate(constraints):
        if j in init:
            continue
        values = [dot(a, c) for c in rays]
        if all(x >= 0 for x in values):
            processed.append(j)
            continue
        pos = [(c, x) for c, x in zip(rays, values) if x > 0]
        neg = [(c, x) for c, x in zip(rays, values) if x < 0]
        kept: List[Vector] = [c for c, x in zip(rays, values) if x >= 0]
        for p, sp in pos:
            for q, sq in neg:
                common = [
                    constraints[i] for i in processed
                    if dot(constraints[i], p) == 0 and dot(constraints[i], q) == 0
                ]
                if rational_rank(common) != k - 2:
                    continue
                kept.append(primitive(vsub(vscale(sp, q), vscale(sq, p))))
        rays = list(dict.fromkeys(kept))
        processed.append(j)
    return sorted(rays)


def cone_from_rays(rays: Sequence[Sequence[int]], d: Optional[int] = None) -> Cone:
    vectors = [tuple(int(x) for x in r) for r in rays]
    if d is None:
        if not vectors:
            raise DimensionMismatch("Dimension ambiante inconnue pour un cône sans rayon.")
        d = len(vectors[0])
    for v in vectors:
        if len(v) != d:
            raise DimensionMismatch(f"Rayon {v} de longueur {len(v)} (attendu {d}).", expected=d)
        if not any(v):
            raise ZeroGenerator("Un rayon de cône ne peut pas être nul.")
    prims = sorted(set(primitive(v) for v in vectors))
    if not prims:
        return Cone(d, (), (), orthogonal_equations([], d), 0)

    span = lattice_from_vectors(prims, d)
    k = span.rank
    B = span.basis
    constraints = [tuple(dot(b, r) for b in B) for r in prims]
    duals = _extreme_rays(constraints, k)
    if rational_rank(duals) < k:
        raise NotPointed(f"Le cône engendré par {prims} contient une droite.", rays=prims)

    normals = sorted(set(primitive(span.combine(c)) for c in duals))
    extreme = tuple(
        r for r in prims
        if rational_rank([n for n in normals if dot(n, r) == 0]) == k - 1
    )
    cone = Cone(d, extreme, tuple(normals), orthogonal_equations(prims, d), k)
    logger.debug("cone rays=%s normals=%s dim=%d", extreme, normals, k)
    return cone


def cone_from_inequalities(
    normals: Sequence[Sequence[int]], equations: Sequence[Sequence[int]], d: int
) -> Cone:
    """Cône {x : n·x ≥ 0, e·x = 0} (supposé pointé), par la même double description."""
    W = saturation_of_equations(equations, d)
    k = W.rank
    if k == 0:
        return Cone(d, (), (), orthogonal_equations([], d), 0)
    constraints = [tuple(dot(n, w) for w in W.basis) for n in normals]
    coords = _extreme_rays(constraints, k)
    rays = [primitive(W.combine(c)) for c in coords]
    if not rays:
        return Cone(d, (), (), orthogonal_equations([], d), 0)
    return cone_from_rays(rays, d)


def saturation_of_equations(equations: Sequence[Sequence[int]], d: int) -> Lattice:
    """Z^d ∩ {x : e·x = 0}."""
    if not equations:
        return lattice_from_vectors(IntMatrix.identity(d).entries, d)
    return lattice_from_vectors(integer_kernel(IntMatrix.from_rows(equations, d)), d)


# === Faces ====================================================================

@dataclass(frozen=True)
class Face:
    parent: Cone = field(repr=False)
    support: FrozenSet[int]
    rays: Tuple[Vector, ...] = field(compare=False)
    dim: int = field(compare=False)

    @property
    def label(self) -> str:
        if not self.rays:
            return "0"
        return "+".join("(" + ",".join(str(x) for x in r) + ")" for r in self.rays)

    def contains(self, v: Sequence[int]) -> bool:
        return self.parent.contains(v) and all(
            dot(self.parent.facet_normals[i], v) == 0 for i in self.support
        )

    def in_relative_interior(self, v: Sequence[int]) -> bool:
        return self.contains(v) and all(
            dot(n, v) > 0 for i, n in enumerate(self.parent.facet_normals) if i not in self.support
        )

    @cached_property
    def span_lattice(self) -> Lattice:
        return saturation(self.rays, self.parent.ambient_dim)

    @cached_property
    def cone(self) -> Cone:
        return cone_from_rays(self.rays, self.parent.ambient_dim)

    def __le__(self, other: "Face") -> bool:
        return self.parent == other.parent and self.support >= other.support

    def __lt__(self, other: "Face") -> bool:
        return self <= other and self.support != other.support


def carrier_face(C: Cone, v: Sequence[int]) -> Face:
    """Unique face dont l'intérieur relatif contient v."""
    if not C.contains(v):
        raise NotInCone(f"{tuple(v)} n'appartient pas au cône.", vector=tuple(v))
    support = frozenset(i for i, n in enumerate(C.facet_normals) if dot(n, v) == 0)
    rays = C.rays_on(support)
    return Face(C, support, rays, rational_rank(rays))


def face_basis(face: Face) -> List[Vector]:
    """Base ordonnée (rationnelle) de span(F) : rayons libres pris dans l'ordre."""
    return [face.rays[i] for i in independent_subset(face.rays)]


def orientation_sign(upper: Sequence[Vector], lower: Sequence[Vector], inward: Vector) -> int:
    """Signe du déterminant de (lower, inward) exprimé dans la base `upper`."""
    columns = list(lower) + [inward]
    gram = [[dot(b, w) for w in columns] for b in upper]
    det = determinant(gram)
    if det == 0:
        raise InconsistentIncidence("Vecteur entrant dans le span de la face inférieure.")
    return 1 if det > 0 else -1


def check_two_step(
    incidence: Dict[Tuple[object, object], int],
    covers: Dict[object, Sequence[object]],
) -> None:
    """Σ_G ε(F,G)·ε(G,H) = 0 pour tout F > H avec un écart de dimension 2."""
    for F, lower in covers.items():
        sums: Dict[object, int] = {}
        for G in lower:
            for H in covers.get(G, ()):
                sums[H] = sums.get(H, 0) + incidence[(F, G)] * incidence[(G, H)]
        bad = [H for H, s in sums.items() if s != 0]
        if bad:
            raise InconsistentIncidence(
                "Somme à deux pas non nulle dans la fonction d'incidence.", upper=str(F)
            )


@dataclass(frozen=True, eq=False)
class FaceLattice:
    cone: Cone
    faces: Tuple[Face, ...]
    covers: Dict[Face, Tuple[Face, ...]]
    incidence: Dict[Tuple[Face, Face], int]

    @cached_property
    def by_support(self) -> Dict[FrozenSet[int], Face]:
        return {F.support: F for F in self.faces}

    @cached_property
    def cofaces(self) -> Dict[Face, Tuple[Face, ...]]:
        up: Dict[Face, List[Face]] = {F: [] for F in self.faces}
        for F, lower in self.covers.items():
            for G in lower:
                up[G].append(F)
        return {G: tuple(v) for G, v in up.items()}

    @property
    def zero(self) -> Face:
        return self.faces[0]

    @property
    def full(self) -> Face:
        return self.faces[-1]

    def faces_of_dim(self, i: int) -> Tuple[Face, ...]:
        return tuple(F for F in self.faces if F.dim == i)

    def leq(self, G: Face, F: Face) -> bool:
        return G.support >= F.support

    def face(self, support: FrozenSet[int]) -> Face:
        return self.by_support[self.cone.face_from_support(support).support]

    def __contains__(self, F: object) -> bool:
        return isinstance(F, Face) and F.parent == self.cone and F.support in self.by_support


def face_lattice(C: Cone) -> FaceLattice:
    """Toutes les faces (intersections de facettes), ordre, recouvrements et incidence."""
    n = len(C.facet_normals)
    top = C.face_from_support(frozenset())
    seen: Dict[FrozenSet[int], Face] = {top.support: top}
    todo = deque([top])
    while todo:
        F = todo.popleft()
        for i in range(n):
            if i in F.support:
                continue
            G = C.face_from_support(F.support | {i})
            if G.support not in seen:
                seen[G.support] = G
                todo.append(G)
    faces = tuple(sorted(seen.values(), key=lambda F: (F.dim, F.rays)))

    covers: Dict[Face, Tuple[Face, ...]] = {}
    for F in faces:
        covers[F] = tuple(
            G for G in faces if G.dim == F.dim - 1 and G.support >= F.support
        )
    incidence = _orientation_incidence(covers)
    check_two_step(incidence, covers)  # type: ignore[arg-type]
    logger.debug("face lattice: %d faces, %d covers", len(faces), len(incidence))
    return FaceLattice(C, faces, covers, incidence)


def _orientation_incidence(covers: Dict[Face, Tuple[Face, ...]]) -> Dict[Tuple[Face, Face], int]:
    bases = {F: face_basis(F) for F in covers}
    out: Dict[Tuple[Face, Face], int] = {}
    for F, lower in covers.items():
        for G in lower:
            inward = next(r for r in F.rays if r not in G.rays)
            out[(F, G)] = orientation_sign(bases[F], bases[G], inward)
    return out


def incidence_function(FL: FaceLattice) -> Dict[Tuple[Face, Face], int]:
    check_two_step(FL.incidence, FL.covers)  # type: ignore[arg-type]
    return dict(FL.incidence)


# === Base de Hilbert ==========================================================

def _lattice_generator_on_ray(L: Lattice, r: Vector) -> Vector:
    """Plus petit multiple positif de r appartenant à L (L contient une droite de r)."""
    line = L.intersect_subspace(orthogonal_equations([r], L.ambient_dim))
    g = line.basis[0]
    return g if dot(g, r) > 0 else tuple(-x for x in g)


def _side(basis: Sequence[Vector], facet: Sequence[Vector], x: Vector) -> int:
    det = determinant([[dot(b, w) for w in list(facet) + [x]] for b in basis])
    return (det > 0) - (det < 0)


def _boundary_facets(simplices: Sequence[Tuple[int, ...]]) -> List[Tuple[Tuple[int, ...], int]]:
    count: Counter = Counter()
    opposite: Dict[Tuple[int, ...], int] = {}
    for s in simplices:
        for j in s:
            f = tuple(x for x in s if x != j)
            count[f] += 1
            opposite[f] = j
    return [(f, opposite[f]) for f, c in count.items() if c == 1]


def placing_triangulation(rays: Sequence[Vector]) -> List[Tuple[int, ...]]:
    """Triangulation par placement des rayons dans l'ordre donné (indices triés par simplexe)."""
    simplices: List[Tuple[int, ...]] = []
    used: List[Vector] = []
    for i, r in enumerate(rays):
        if not simplices:
            simplices = [(i,)]
        elif rational_rank(used + [r]) > len(simplices[0]):
            simplices = [s + (i,) for s in simplices]
        else:
            basis = [rays[j] for j in simplices[0]]
            new: List[Tuple[int, ...]] = []
            for f, opp in _boundary_facets(simplices):
                fv = [rays[j] for j in f]
                s_new = _side(basis, fv, r)
                if s_new != 0 and s_new != _side(basis, fv, rays[opp]):
                    new.append(tuple(sorted(f + (i,))))
            simplices.extend(new)
        used.append(r)
    return simplices


def _parallelepiped_points(G: List[Vector]) -> Set[Vector]:
    """Points de Z^k dans {λ·G : 0 ≤ λ < 1} pour une matrice G (lignes) k×k inversible."""
    k = len(G)
    inv = Matrix([list(g) for g in G]).inv()
    Ginv = [[Fraction(int(inv[i, j].p), int(inv[i, j].q)) for j in range(k)] for i in range(k)]

    def reduce(x: Sequence[int]) -> Vector:
        lam = [sum(x[i] * Ginv[i][j] for i in range(k)) for j in range(k)]
        frac = [l - floor(l) for l in lam]
        return tuple(int(sum(frac[i] * G[i][j] for i in range(k))) for j in range(k))

    zero = tuple([0] * k)
    points = {zero}
    todo = deque([zero])
    while todo:
        p = todo.popleft()
        for j in range(k):
            q = reduce(tuple(p[t] + (t == j) for t in range(k)))
            if q not in points:
                points.add(q)
                todo.append(q)
    return points


def hilbert_basis(C: Cone, L: Lattice) -> Tuple[Vector, ...]:
    """Système générateur minimal du monoïde L ∩ C (pris dans span(C) ∩ L)."""
    if L.ambient_dim != C.ambient_dim:
        raise DimensionMismatch(
            "Réseau et cône de dimensions ambiantes différentes.",
            lattice=L.ambient_dim, cone=C.ambient_dim,
        )
    d = C.ambient_dim
    Lp = L.intersect_subspace(C.equations)
    if Lp.rank == 0:
        return ()
    work = C
    if Lp.rank < C.dim:
        work = cone_from_inequalities(
            C.facet_normals, orthogonal_equations(Lp.basis, d), d
        )
        if work.dim == 0:
            return ()

    gens = [_lattice_generator_on_ray(Lp, r) for r in work.rays]
    candidates: Set[Vector] = set(gens)
    for simplex in placing_triangulation(gens):
        coords = [Lp.coordinates(gens[j]) for j in simplex]
        for p in _parallelepiped_points(coords):  # type: ignore[arg-type]
            if any(p):
                candidates.add(Lp.combine(p))

    w = work.grading
    ordered = sorted(candidates, key=lambda v: (dot(w, v), v))
    basis: List[Vector] = []
    for x in ordered:
        wx = dot(w, x)
        reducible = any(
            dot(w, y) < wx and work.contains(vsub(x, y)) for y in ordered if y != x
        )
        if not reducible:
            basis.append(x)
    logger.debug("hilbert basis: %d candidates -> %d elements", len(candidates), len(basis))
    return tuple(sorted(basis))
