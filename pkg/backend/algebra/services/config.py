# backend/algebra/services/config.py
from __future__ import annotations

from pathlib import Path
from typing import Any, Dict

from django.conf import settings

# Valeurs par défaut si settings.ALGEBRA est absent ou incomplet
DEFAULTS: Dict[str, Any] = {
    "SEARCH_BOUND": 8,
    "VERIFY_BOX_FACTOR": 4,
    "DEFAULT_FIELD": "QQ",
    "DEFAULT_BOX": "-3..3",
    "JOBS": 1,
    "OUTPUT_FORMAT": "json",
    "DATA_DIR": Path(__file__).resolve().parent.parent / "data",
}


def algebra_cfg() -> Dict[str, Any]:
    cfg = dict(DEFAULTS)
    cfg.update(getattr(settings, "ALGEBRA", {}) or {})
    return cfg
