# backend/algebra/services/lattice.py
"""
Algèbre linéaire entière exacte.

- IntMatrix : matrice entière immuable (forme explicite, y compris 0 colonne) ;
- hermite_normal_form : HNF par lignes avec la matrice unimodulaire de passage ;
- Lattice : sous-réseau de Z^d donné par une base échelonnée (lignes HNF non nulles).

Aucun flottant : entiers Python, et sympy pour les rangs / déterminants / Smith.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Iterable, List, Optional, Sequence, Tuple

from sympy import Matrix, QQ, ZZ
from sympy.matrices.normalforms import smith_normal_form
from sympy.polys.matrices import DomainMatrix

from ..errors import DimensionMismatch

Vector = Tuple[int, ...]


# === Vecteurs =================================================================

def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def vadd(u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vscale(k: int, v: Sequence[int]) -> Vector:
    return tuple(k * a for a in v)


def primitive(v: Sequence[int]) -> Vector:
    """Divise par le contenu (pgcd des coordonnées) ; le vecteur nul est renvoyé tel quel."""
    g = gcd(*v) if len(v) else 0
    if g <= 1:
        return tuple(int(x) for x in v)
    return tuple(int(x) // g for x in v)


def sign_normalized(v: Sequence[int]) -> Vector:
    """Première coordonnée non nulle positive."""
    for x in v:
        if x:
            return tuple(v) if x > 0 else tuple(-a for a in v)
    return tuple(v)


def rational_rank(rows: Sequence[Sequence[int]]) -> int:
    if not rows or not len(rows[0]):
        return 0
    return int(DomainMatrix.from_Matrix(Matrix([list(r) for r in rows])).convert_to(QQ).rank())


def determinant(rows: Sequence[Sequence[int]]) -> int:
    if not rows:
        return 1
    return int(Matrix([list(r) for r in rows]).det())


def independent_subset(vectors: Sequence[Sequence[int]]) -> List[int]:
    """Indices d'une famille libre maximale, choisie gloutonnement dans l'ordre donné."""
    chosen: List[int] = []
    rows: List[Sequence[int]] = []
    for i, v in enumerate(vectors):
        if not any(v):
            continue
        if rational_rank(rows + [v]) > len(rows):
            rows.append(v)
            chosen.append(i)
    return chosen


# === Matrices entières ========================================================

@dataclass(frozen=True)
class IntMatrix:
    nrows: int
    ncols: int
    entries: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.nrows or any(len(r) != self.ncols for r in self.entries):
            raise DimensionMismatch(
                f"Matrice mal formée : forme annoncée {self.nrows}x{self.ncols}.",
                shape=(self.nrows, self.ncols),
            )

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], ncols: Optional[int] = None) -> "IntMatrix":
        entries = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(entries[0]) if entries else 0
        return cls(len(entries), ncols, entries)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int) -> "IntMatrix":
        return cls.from_rows(
            [[int(c[i]) for c in columns] for i in range(nrows)], len(columns)
        )

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], n)

    def __getitem__(self, ij: Tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(f"({i},{j}) hors de {self.nrows}x{self.ncols}")
        return self.entries[i][j]

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nrows, self.ncols)

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> List[Vector]:
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows(self.columns(), self.nrows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise DimensionMismatch(
                f"Produit impossible : {self.shape} @ {other.shape}.",
                left=self.shape, right=other.shape,
            )
        cols = other.columns()
        return IntMatrix.from_rows(
            [[dot(r, c) for c in cols] for r in self.entries], other.ncols
        )

    def apply(self, v: Sequence[int]) -> Vector:
        if len(v) != self.ncols:
            raise DimensionMismatch(
                f"Vecteur de longueur {len(v)} pour une matrice {self.shape}.",
                length=len(v),
            )
        return tuple(dot(r, v) for r in self.entries)

    def to_sympy(self) -> Matrix:
        return Matrix(self.nrows, self.ncols, [x for r in self.entries for x in r])

    def to_list(self) -> List[List[int]]:
        return [list(r) for r in self.entries]


def _exgcd(a: int, b: int) -> Tuple[int, int, int]:
    x, y, g = (int(t) for t in ZZ.gcdex(ZZ(a), ZZ(b)))
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def _comb(x: int, u: List[int], y: int, v: List[int]) -> List[int]:
    return [x * a + y * b for a, b in zip(u, v)]


def hermite_normal_form(A: IntMatrix) -> Tuple[IntMatrix, IntMatrix]:
    """
    Forme normale d'Hermite par lignes : renvoie (H, U) avec U unimodulaire et U·A = H.
    H est échelonnée, pivots > 0, coefficients au-dessus d'un pivot réduits dans [0, pivot).
    """
    m, n = A.nrows, A.ncols
    H = [list(r) for r in A.entries]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for c in range(n):
        if r == m:
            break
        for i in range(r + 1, m):
            if H[i][c] == 0:
                continue
            a, b = H[r][c], H[i][c]
            x, y, g = _exgcd(a, b)
            p, q = (-b) // g, a // g
            # [[x, y], [p, q]] est de déterminant 1
            H[r], H[i] = _comb(x, H[r], y, H[i]), _comb(p, H[r], q, H[i])
            U[r], U[i] = _comb(x, U[r], y, U[i]), _comb(p, U[r], q, U[i])
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-t for t in H[r]]
            U[r] = [-t for t in U[r]]
        piv = H[r][c]
        for i in range(r):
            f = H[i][c] // piv
            if f:
                H[i] = _comb(1, H[i], -f, H[r])
                U[i] = _comb(1, U[i], -f, U[r])
        r += 1
    return IntMatrix.from_rows(H, n), IntMatrix.from_rows(U, m)


def integer_kernel(A: IntMatrix) -> Tuple[Vector, ...]:
    """Base (HNF) du réseau {x ∈ Z^n : A·x = 0}."""
    n = A.ncols
    H, U = hermite_normal_form(A.transpose())
    rows = [U.entries[i] for i in range(n) if not any(H.entries[i])]
    return lattice_from_vectors(rows, n).basis


# === Réseaux ==================================================================

@dataclass(frozen=True)
class Lattice:
    ambient_dim: int
    basis: Tuple[Vector, ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    @cached_property
    def pivots(self) -> Tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(row) if x) for row in self.basis)

    def _check(self, v: Sequence[int]) -> None:
        if len(v) != self.ambient_dim:
            raise DimensionMismatch(
                f"Vecteur de dimension {len(v)} pour un réseau de Z^{self.ambient_dim}.",
                expected=self.ambient_dim, got=len(v),
            )

    def coordinates(self, v: Sequence[int]) -> Optional[Vector]:
        """Coordonnées entières de v dans la base, ou None si v n'est pas dans le réseau."""
        self._check(v)
        rest = list(v)
        coeffs: List[int] = []
        for row, p in zip(self.basis, self.pivots):
            q, rem = divmod(rest[p], row[p])
            if rem:
                return None
            coeffs.append(q)
            if q:
                rest = _comb(1, rest, -q, list(row))
        if any(rest):
            return None
        return tuple(coeffs)

    def contains(self, v: Sequence[int]) -> bool:
        return self.coordinates(v) is not None

    def reduce(self, v: Sequence[int]) -> Vector:
        """Représentant canonique de la classe v + L."""
        self._check(v)
        rest = list(v)
        for row, p in zip(self.basis, self.pivots):
            f = rest[p] // row[p]
            if f:
                rest = _comb(1, rest, -f, list(row))
        return tuple(rest)

    def combine(self, coeffs: Sequence[int]) -> Vector:
        out = [0] * self.ambient_dim
        for c, row in zip(coeffs, self.basis):
            if c:
                out = _comb(1, out, c, list(row))
        return tuple(out)

    def intersect_subspace(self, equations: Sequence[Sequence[int]]) -> "Lattice":
        """L ∩ {x : e·x = 0 pour toute équation e}."""
        if not equations or not self.basis:
            return self
        K = IntMatrix.from_rows(
            [[dot(e, b) for b in self.basis] for e in equations], len(self.basis)
        )
        return lattice_from_vectors(
            [self.combine(c) for c in integer_kernel(K)], self.ambient_dim
        )


def lattice_from_vectors(vs: Iterable[Sequence[int]], d: int) -> Lattice:
    rows = [tuple(int(x) for x in v) for v in vs]
    for v in rows:
        if len(v) != d:
            raise DimensionMismatch(
                f"Vecteur {v} de longueur {len(v)} (attendu {d}).", expected=d, got=len(v)
            )
    if not rows:
        return Lattice(d, ())
    H, _ = hermite_normal_form(IntMatrix.from_rows(rows, d))
    return Lattice(d, tuple(r for r in H.entries if any(r)))


def lattice_contains(L: Lattice, v: Sequence[int]) -> bool:
    return L.contains(v)


def orthogonal_equations(vectors: Sequence[Sequence[int]], d: int) -> Tuple[Vector, ...]:
    """Base entière de span(vectors)^⊥ ∩ Z^d."""
    if not vectors:
        return IntMatrix.identity(d).entries
    return integer_kernel(IntMatrix.from_rows(vectors, d))


def saturation(vectors: Sequence[Sequence[int]], d: int) -> Lattice:
    """Z^d ∩ span(vectors)."""
    if not vectors:
        return Lattice(d, ())
    eqs = orthogonal_equations(vectors, d)
    if not eqs:
        return lattice_from_vectors(IntMatrix.identity(d).entries, d)
    return lattice_from_vectors(integer_kernel(IntMatrix.from_rows(eqs, d)), d)


def is_primitive_embedding(A: IntMatrix) -> bool:
    """A injective et A(Z^n) saturé dans Z^m (facteurs invariants de Smith tous égaux à 1)."""
    if A.ncols == 0:
        return True
    if rational_rank(A.entries) != A.ncols:
        return False
    D = smith_normal_form(A.to_sympy(), domain=ZZ)
    return all(abs(int(D[i, i])) == 1 for i in range(A.ncols))


def solve_injective(A: IntMatrix, v: Sequence[int]) -> Optional[Vector]:
    """Solution entière x de A·x = v pour A injective, ou None."""
    if len(v) != A.nrows:
        raise DimensionMismatch(
            f"Second membre de longueur {len(v)} pour une matrice {A.shape}.", length=len(v)
        )
    if A.ncols == 0:
        return () if not any(v) else None
    try:
        sol, params = A.to_sympy().gauss_jordan_solve(Matrix(list(v)))
    except ValueError:
        return None
    if params.shape[0]:
        raise DimensionMismatch("Matrice non injective.", shape=A.shape)
    if not all(e.is_integer for e in sol):
        return None
    return tuple(int(e) for e in sol)
