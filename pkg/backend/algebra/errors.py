# backend/algebra/errors.py
"""
Erreurs du domaine algèbre.

Toutes dérivent de ValidationError (comme les erreurs d'entrée du reste du projet) ;
chaque sous-classe porte un `code` stable, repris dans les rapports et les logs.
Les résultats mathématiques (témoins, échecs de validation, degrés non résolus)
ne sont PAS des exceptions : ce sont des valeurs.
"""
from __future__ import annotations

from typing import Any

from django.core.exceptions import ValidationError


class AlgebraError(ValidationError):
    code = "algebra"

    def __init__(self, message: str, **params: Any) -> None:
        super().__init__(message, code=self.code, params=params or None)
        self.detail = message
        self.extra = params

    def __str__(self) -> str:
        return self.detail

    # Passage entre processus (scans parallèles)
    def __reduce__(self):
        return (_rebuild, (type(self), self.detail, self.extra))


def _rebuild(cls: type[AlgebraError], message: str, extra: dict[str, Any]) -> AlgebraError:
    return cls(message, **extra)


class InvalidInput(AlgebraError):
    code = "invalid_input"


class DimensionMismatch(AlgebraError):
    code = "dimension_mismatch"


class NotPointed(AlgebraError):
    code = "not_pointed"


class NotPositive(AlgebraError):
    code = "not_positive"


class ZeroGenerator(AlgebraError):
    code = "zero_generator"


class NotInCone(AlgebraError):
    code = "not_in_cone"


class NotAFace(AlgebraError):
    code = "not_a_face"


class NotAFan(AlgebraError):
    code = "not_a_fan"


class InconsistentIncidence(AlgebraError):
    code = "inconsistent_incidence"


class BoundTooSmall(AlgebraError):
    code = "bound_too_small"
