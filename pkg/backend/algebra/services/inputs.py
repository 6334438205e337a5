# backend/algebra/services/inputs.py
"""
Lecture des entrées JSON : chemin, "-" (stdin) ou nom de jeu de données embarqué.

Types acceptés : affine_semigroup, monoidal_complex, fan, simplicial_complex.
"""
from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, TextIO, Tuple

from ..errors import AlgebraError, InvalidInput
from .builders import build_from_fan, build_stanley_reisner
from .config import algebra_cfg
from .lattice import IntMatrix
from .semigroup import AffineSemigroup, new_affine_semigroup
from .toricface import MonoidalComplex, build_complex

AFFINE = "affine_semigroup"
COMPLEX = "monoidal_complex"


@dataclass(frozen=True)
class ParsedInput:
    source: str
    document: Dict[str, Any]
    digest: str
    semigroup: Optional[AffineSemigroup] = None
    complex: Optional[MonoidalComplex] = None

    @property
    def kind(self) -> str:
        return AFFINE if self.semigroup is not None else COMPLEX


def data_dir() -> Path:
    return Path(algebra_cfg()["DATA_DIR"])


def dataset_names() -> List[str]:
    d = data_dir()
    return sorted(p.stem for p in d.glob("*.json")) if d.is_dir() else []


def input_digest(doc: Dict[str, Any]) -> str:
    canonical = json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def load_document(source: str, stdin: Optional[TextIO] = None) -> Dict[str, Any]:
    if source == "-":
        text = (stdin or sys.stdin).read()
    else:
        path = Path(source)
        if not path.is_file():
            path = data_dir() / f"{source}.json"
        if not path.is_file():
            raise InvalidInput(
                f"Entrée introuvable : {source!r} (ni fichier, ni jeu embarqué).",
                source=source, datasets=dataset_names(),
            )
        text = path.read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidInput(f"JSON invalide : {e.msg} (ligne {e.lineno}).", source=source)
    if not isinstance(doc, dict) or "type" not in doc:
        raise InvalidInput("Le document doit être un objet JSON avec un champ 'type'.", source=source)
    return doc


def _vectors(value: Any, what: str) -> List[List[int]]:
    if not isinstance(value, list) or not all(
        isinstance(v, list) and all(isinstance(x, int) and not isinstance(x, bool) for x in v) for v in value
    ):
        raise InvalidInput(f"{what} : liste de vecteurs entiers attendue.")
    return value


def _pair(key: str) -> Tuple[str, str]:
    upper, sep, lower = key.partition("|")
    if not sep or not upper or not lower:
        raise InvalidInput(f"Clé de paire invalide {key!r} (attendu 'σ|τ').")
    return upper, lower


def parse_complex(doc: Dict[str, Any]) -> MonoidalComplex:
    cells_raw = doc.get("cells")
    if not isinstance(cells_raw, list) or not cells_raw:
        raise InvalidInput("monoidal_complex : 'cells' doit être une liste non vide.")
    dims: Dict[str, int] = {}
    for c in cells_raw:
        try:
            dims[str(c["id"])] = int(c["dim"])
        except (KeyError, TypeError, ValueError):
            raise InvalidInput(f"Cellule mal formée : {c!r}.")
    covers: List[Tuple[str, str]] = []
    for pair in doc.get("covers", []):
        if not isinstance(pair, list) or len(pair) != 2:
            raise InvalidInput(f"Recouvrement mal formé : {pair!r}.")
        s, t = str(pair[0]), str(pair[1])
        if s not in dims or t not in dims:
            raise InvalidInput(f"Recouvrement {s}|{t} : cellule inconnue.", cover=[s, t])
        covers.append((s, t))

    monoids: Dict[str, AffineSemigroup] = {}
    for cid, spec in (doc.get("monoids") or {}).items():
        if cid not in dims:
            raise InvalidInput(f"Monoïde pour une cellule inconnue : {cid}.", cell=cid)
        gens = _vectors((spec or {}).get("generators"), f"monoïde {cid}")
        monoids[cid] = new_affine_semigroup(gens, dims[cid] + 1)
    missing = [c for c, k in dims.items() if k >= 0 and c not in monoids]
    if missing:
        raise InvalidInput(f"Cellules sans monoïde : {missing}.", cells=missing)

    embeddings: Dict[Tuple[str, str], IntMatrix] = {}
    for key, rows in (doc.get("embeddings") or {}).items():
        s, t = _pair(key)
        if s not in dims or t not in dims:
            raise InvalidInput(f"Plongement {key} : cellule inconnue.", pair=key)
        rows = _vectors(rows, f"plongement {key}")
        embeddings[(s, t)] = IntMatrix.from_rows(rows, len(rows[0]) if rows else dims[t] + 1)

    incidence = None
    if doc.get("incidence") is not None:
        incidence = {}
        for key, value in doc["incidence"].items():
            incidence[_pair(key)] = int(value)
    return build_complex(dims, covers, monoids, embeddings, incidence)


def parse_document(doc: Dict[str, Any], source: str = "<document>") -> ParsedInput:
    kind = doc.get("type")
    digest = input_digest(doc)
    try:
        if kind == AFFINE:
            d = int(doc.get("ambient_dim", 0))
            gens = _vectors(doc.get("generators"), "generators")
            return ParsedInput(source, doc, digest, semigroup=new_affine_semigroup(gens, d))
        if kind == COMPLEX:
            return ParsedInput(source, doc, digest, complex=parse_complex(doc))
        if kind == "fan":
            rays = _vectors(doc.get("rays"), "rays")
            cones = _vectors(doc.get("cones"), "cones")
            return ParsedInput(source, doc, digest, complex=build_from_fan(rays, cones))
        if kind == "simplicial_complex":
            facets = doc.get("facets")
            if not isinstance(facets, list) or not all(isinstance(f, list) for f in facets):
                raise InvalidInput("simplicial_complex : 'facets' doit être une liste de listes.")
            return ParsedInput(source, doc, digest, complex=build_stanley_reisner(facets))
    except AlgebraError:
        raise
    except (TypeError, ValueError) as e:
        raise InvalidInput(f"Document {kind} mal formé : {e}.", source=source)
    raise InvalidInput(
        f"Type d'entrée inconnu : {kind!r}.",
        expected=[AFFINE, COMPLEX, "fan", "simplicial_complex"],
    )


def load_input(source: str, stdin: Optional[TextIO] = None) -> ParsedInput:
    return parse_document(load_document(source, stdin), source)
