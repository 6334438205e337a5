# backend/algebra/services/boxes.py
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Dict, Iterator, Mapping, Optional, Sequence, Tuple

from ..errors import DimensionMismatch, InvalidInput
from .lattice import Vector


@dataclass(frozen=True)
class Box:
    """Produit fini d'intervalles entiers [lo, hi] (bornes incluses ; lo > hi = axe vide)."""

    ranges: Tuple[Tuple[int, int], ...]

    @classmethod
    def parse(cls, text: str, dim: Optional[int] = None) -> "Box":
        """
        Syntaxe "lo..hi,lo..hi,...". Un seul intervalle est répliqué sur `dim` axes.
        """
        parts = [p.strip() for p in (text or "").split(",") if p.strip()]
        if not parts:
            raise InvalidInput(f"Boîte vide ou illisible : {text!r}.", text=text)
        ranges = []
        for p in parts:
            lo, sep, hi = p.partition("..")
            try:
                if not sep:
                    raise ValueError(p)
                ranges.append((int(lo), int(hi)))
            except ValueError:
                raise InvalidInput(f"Intervalle invalide {p!r} (attendu lo..hi).", text=text)
        if dim is not None:
            if len(ranges) == 1:
                ranges = ranges * dim
            elif len(ranges) != dim:
                raise DimensionMismatch(
                    f"Boîte à {len(ranges)} axes pour une dimension {dim}.", expected=dim
                )
        return cls(tuple(ranges))

    @classmethod
    def cube(cls, radius: int, dim: int) -> "Box":
        return cls(tuple((-radius, radius) for _ in range(dim)))

    @property
    def dim(self) -> int:
        return len(self.ranges)

    @property
    def size(self) -> int:
        n = 1
        for lo, hi in self.ranges:
            n *= max(0, hi - lo + 1)
        return n

    @property
    def is_empty(self) -> bool:
        return self.size == 0

    def contains(self, v: Sequence[int]) -> bool:
        return len(v) == self.dim and all(lo <= x <= hi for x, (lo, hi) in zip(v, self.ranges))

    def points(self) -> Iterator[Vector]:
        """Points entiers, ordre lexicographique."""
        return product(*(range(lo, hi + 1) for lo, hi in self.ranges))

    def to_text(self) -> str:
        return ",".join(f"{lo}..{hi}" for lo, hi in self.ranges)


def parse_cell_boxes(items: Sequence[str]) -> Dict[str, str]:
    """Surcharges par cellule "ID=lo..hi,..." (la dimension est fixée plus tard, par cellule)."""
    out: Dict[str, str] = {}
    for item in items or ():
        cell, sep, text = item.partition("=")
        if not sep or not cell.strip() or not text.strip():
            raise InvalidInput(f"Boîte de cellule invalide {item!r} (attendu ID=lo..hi,...).")
        out[cell.strip()] = text.strip()
    return out


def box_for_cell(default: str, overrides: Mapping[str, str], cell: str, dim: int) -> Box:
    return Box.parse(overrides.get(cell, default), dim)
