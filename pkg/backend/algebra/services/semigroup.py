# backend/algebra/services/semigroup.py
"""
Semigroupes affines M ⊂ Z^d.

Appartenance exacte à M (recherche en profondeur bornée par une forme positive),
groupe ZM, sous-monoïdes de faces M_F, normalisation M̄ = ZM ∩ C(M),
seminormalisation ⁺M = ∪_F (ZM_F ∩ relint F) et test b ∈ M − M_F.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Set, Tuple

from ..errors import BoundTooSmall, DimensionMismatch, InvalidInput, NotAFace, NotPointed, NotPositive, ZeroGenerator
from .boxes import Box
from .cones import Cone, Face, FaceLattice, carrier_face, cone_from_rays, face_lattice, hilbert_basis
from .config import algebra_cfg
from .lattice import Lattice, Vector, dot, lattice_from_vectors, vadd, vsub

logger = logging.getLogger("algebra.semigroup")


@dataclass(frozen=True)
class MembershipCertificate:
    """Multiplicités : indice de générateur -> entier > 0."""

    multiplicities: Dict[int, int]

    def evaluate(self, M: "AffineSemigroup") -> Vector:
        out: Vector = tuple([0] * M.ambient_dim)
        for i, k in self.multiplicities.items():
            out = vadd(out, tuple(k * x for x in M.generators[i]))
        return out


@dataclass(frozen=True)
class AffineSemigroup:
    ambient_dim: int
    generators: Tuple[Vector, ...]
    cone: Cone = field(compare=False, repr=False)
    _memo: Dict[Vector, Optional[Tuple[int, ...]]] = field(
        default_factory=dict, compare=False, repr=False
    )

    @cached_property
    def face_lattice(self) -> FaceLattice:
        return face_lattice(self.cone)

    @cached_property
    def group(self) -> Lattice:
        return lattice_from_vectors(self.generators, self.ambient_dim)

    @property
    def dim(self) -> int:
        return self.cone.dim

    @cached_property
    def _face_groups(self) -> Dict[Face, Lattice]:
        return {}

    def generators_on(self, F: Face) -> Tuple[Vector, ...]:
        return tuple(g for g in self.generators if F.contains(g))

    def face_group(self, F: Face) -> Lattice:
        """ZM_F (caché par face)."""
        cache = self._face_groups
        if F not in cache:
            cache[F] = lattice_from_vectors(self.generators_on(F), self.ambient_dim)
        return cache[F]

    def __str__(self) -> str:
        return "<" + ", ".join(str(list(g)) for g in self.generators) + ">"


def new_affine_semigroup(gens: Sequence[Sequence[int]], d: int) -> AffineSemigroup:
    vectors: List[Vector] = []
    for g in gens:
        v = tuple(int(x) for x in g)
        if len(v) != d:
            raise DimensionMismatch(f"Générateur {v} de longueur {len(v)} (attendu {d}).", expected=d)
        if not any(v):
            raise ZeroGenerator("Un générateur de semigroupe ne peut pas être nul.")
        vectors.append(v)
    vectors = sorted(set(vectors))
    try:
        cone = cone_from_rays(vectors, d)
    except NotPointed as e:
        raise NotPositive(f"Semigroupe non positif : {e.detail}", generators=[list(v) for v in vectors])
    return AffineSemigroup(d, tuple(vectors), cone)


# --- Appartenance ---------------------------------------------------------------

def _search(M: AffineSemigroup, a: Vector) -> Optional[Tuple[int, ...]]:
    """Indices (avec répétitions, croissants) d'une décomposition de a, ou None."""
    if a in M._memo:
        return M._memo[a]
    if not any(a):
        return ()
    if not M.cone.contains(a) or not M.group.contains(a):
        return None
    w = M.cone.grading
    weights = [dot(w, g) for g in M.generators]
    failed: Set[Tuple[Vector, int]] = set()

    def dfs(rest: Vector, start: int) -> Optional[List[int]]:
        if not any(rest):
            return []
        if (rest, start) in failed:
            return None
        wr = dot(w, rest)
        for i in range(start, len(M.generators)):
            if weights[i] > wr:
                continue
            nxt = vsub(rest, M.generators[i])
            if not M.cone.contains(nxt):
                continue
            found = dfs(nxt, i)
            if found is not None:
                return [i] + found
        failed.add((rest, start))
        return None

    found = dfs(a, 0)
    result = tuple(found) if found is not None else None
    M._memo[a] = result
    return result


def decompose(M: AffineSemigroup, a: Sequence[int]) -> Optional[MembershipCertificate]:
    v = tuple(int(x) for x in a)
    if len(v) != M.ambient_dim:
        raise DimensionMismatch(f"Degré {v} hors de Z^{M.ambient_dim}.", expected=M.ambient_dim)
    found = _search(M, v)
    if found is None:
        return None
    mult: Dict[int, int] = {}
    for i in found:
        mult[i] = mult.get(i, 0) + 1
    return MembershipCertificate(mult)


def contains(M: AffineSemigroup, a: Sequence[int]) -> bool:
    return decompose(M, a) is not None


def group(M: AffineSemigroup) -> Lattice:
    return M.group


def face_monoid(M: AffineSemigroup, F: Face) -> AffineSemigroup:
    """M_F = M ∩ F, engendré par les générateurs de M situés sur F."""
    if F.parent != M.cone or F.support not in M.face_lattice.by_support:
        raise NotAFace(f"{F.label} n'est pas une face de C(M).", face=F.label)
    return new_affine_semigroup(M.generators_on(F), M.ambient_dim)


def same_monoid(M: AffineSemigroup, N: AffineSemigroup) -> bool:
    """Égalité des monoïdes (inclusion mutuelle des générateurs), quel que soit le système générateur."""
    if M.ambient_dim != N.ambient_dim:
        return False
    return all(contains(N, g) for g in M.generators) and all(contains(M, g) for g in N.generators)


# --- Normalisation, seminormalisation ----------------------------------------------

def normalization(M: AffineSemigroup) -> Tuple[Vector, ...]:
    """Base de Hilbert de M̄ = ZM ∩ C(M)."""
    return hilbert_basis(M.cone, M.group)


def is_normal(M: AffineSemigroup) -> bool:
    return all(contains(M, h) for h in normalization(M))


def plus_membership(M: AffineSemigroup, a: Sequence[int]) -> bool:
    """a ∈ ⁺M  ⟺  a ∈ C(M) et a ∈ ZM_F pour F = face porteuse de a."""
    if not M.cone.contains(a):
        return False
    return M.face_group(carrier_face(M.cone, a)).contains(a)


def _irreducibles(candidates: Sequence[Vector], member, w: Vector) -> List[Vector]:
    ordered = sorted(set(candidates), key=lambda v: (dot(w, v), v))
    out: List[Vector] = []
    for x in ordered:
        wx = dot(w, x)
        if not any(
            0 < dot(w, y) < wx and member(vsub(x, y)) for y in ordered if y != x
        ):
            out.append(x)
    return out


def seminormalization(
    M: AffineSemigroup,
    bound: Optional[int] = None,
    *,
    verify_factor: Optional[int] = None,
    logger: Optional[logging.Logger] = None,
) -> Tuple[Vector, ...]:
    """
    Générateurs de ⁺M, certifiés sur une boîte de vérification.

    Candidats : points de ⁺M dans [−B, B]^d et générateurs de M ; on garde les
    irréductibles pour ⁺M. La boîte de vérification a pour demi-côté
    max(B, 2·max|S|, facteur·max|générateurs|) ; tout échec lève BoundTooSmall.
    """
    log = logger or logging.getLogger("algebra.semigroup")
    cfg = algebra_cfg()
    B = int(bound if bound is not None else cfg["SEARCH_BOUND"])
    factor = int(verify_factor if verify_factor is not None else cfg["VERIFY_BOX_FACTOR"])
    if B < 1:
        raise InvalidInput(f"Borne de recherche invalide : {B} (attendu ≥ 1).", bound=B)
    if is_normal(M):
        return normalization(M)

    d = M.ambient_dim
    def member(v: Vector) -> bool:
        return any(v) and plus_membership(M, v)

    candidates = [p for p in Box.cube(B, d).points() if member(p)]
    candidates.extend(M.generators)
    S = tuple(sorted(_irreducibles(candidates, member, M.cone.grading)))

    gmax = max((abs(x) for g in M.generators for x in g), default=0)
    smax = max((abs(x) for s in S for x in s), default=0)
    V = max(B, 2 * smax, factor * gmax)
    _verify_seminormalization(M, S, V, member)
    log.debug("seminormalization of %s: %s (search=%d, verify=%d)", M, S, B, V)
    return S


def _verify_seminormalization(M: AffineSemigroup, S: Tuple[Vector, ...], V: int, member) -> None:
    d = M.ambient_dim
    N = new_affine_semigroup(S, d)
    plus_points = [p for p in Box.cube(V, d).points() if member(p)]
    for p in plus_points:
        if not contains(N, p):
            raise BoundTooSmall(
                f"{p} ∈ ⁺M n'est pas engendré par les candidats ; augmenter la borne.",
                degree=list(p), verify_box=V,
            )
    for s in S:
        for y in plus_points:
            if y != s and member(vsub(s, y)):
                raise BoundTooSmall(
                    f"Générateur {s} décomposable dans ⁺M ; augmenter la borne.",
                    generator=list(s), verify_box=V,
                )
    for p in Box.cube(V, d).points():
        if plus_membership(N, p) and not contains(N, p):
            raise BoundTooSmall(
                f"⁺(⁺M) ≠ ⁺M en {p} ; augmenter la borne.", degree=list(p), verify_box=V
            )


def is_seminormal(M: AffineSemigroup, bound: Optional[int] = None) -> bool:
    return all(contains(M, s) for s in seminormalization(M, bound))


def interior_degrees(M: AffineSemigroup, box: Box) -> List[Vector]:
    """Degrés de W_R dans la boîte : a ∈ M ∩ relint C(M)."""
    return [a for a in box.points() if M.cone.in_relative_interior(a) and contains(M, a)]


# --- b ∈ M − M_F ---------------------------------------------------------------------

def in_localization(M: AffineSemigroup, F: Face, b: Sequence[int], bound: Optional[int] = None) -> Optional[bool]:
    """
    Décide b ∈ M − M_F (degré de la localisation T_F^{-1} k[M]).

    Renvoie None si la borne (nombre de générateurs hors de F) est atteinte sans conclure.
    """
    b = tuple(int(x) for x in b)
    if not M.group.contains(b):
        return False
    C = M.cone
    if F.dim == C.dim:
        return True
    if any(dot(C.facet_normals[i], b) < 0 for i in F.support):
        return False
    if is_normal(M):
        return True
    if F.dim == 0:
        return contains(M, b)

    B = int(bound if bound is not None else algebra_cfg()["SEARCH_BOUND"])
    ZF = M.face_group(F)
    wF = [0] * M.ambient_dim
    for i in F.support:
        wF = [x + y for x, y in zip(wF, C.facet_normals[i])]
    off = [g for g in M.generators if not F.contains(g)]
    start = ZF.reduce(b)
    if not any(start):
        return True
    frontier = {start}
    seen = {start}
    for _ in range(B):
        nxt: Set[Vector] = set()
        for rest in frontier:
            wr = dot(wF, rest)
            for g in off:
                if dot(wF, g) > wr:
                    continue
                r = ZF.reduce(vsub(rest, g))
                if not any(r):
                    return True
                if r not in seen:
                    seen.add(r)
                    nxt.add(r)
        if not nxt:
            return False
        frontier = nxt
    return None
