# backend/sitecfg/checks.py
from pathlib import Path
from django.conf import settings
from django.core.checks import register, Error, Warning
from django.apps import apps as django_apps

from algebra.errors import AlgebraError
from algebra.services.boxes import Box
from algebra.services.complexes import FieldSpec
from algebra.services.config import DEFAULTS

REQUIRED_APPS = {"sitecfg", "algebra", "ops"}
REQUIRED_VAR_SUBDIRS = ["logs", "logs/ops"]
REQUIRED_DATASETS = ["paper_example_x2_y_xy", "numerical_2_3", "moebius", "hollow_triangle", "bowtie", "bMM_cell"]

@register()
def project_conventions_check(app_configs, **kwargs):
    errors = []
    warnings = []

    # 1) Apps requises (via registry, pas via INSTALLED_APPS brut)
    present_apps = {cfg.name for cfg in django_apps.get_app_configs()}
    missing = REQUIRED_APPS - present_apps
    if missing:
        errors.append(Error(
            f"Apps manquantes: {', '.join(sorted(missing))}",
            id="CFG.E002",
        ))

    # 2) DEFAULT_AUTO_FIELD recommandé
    default_auto = getattr(settings, "DEFAULT_AUTO_FIELD", "")
    if default_auto != "django.db.models.BigAutoField":
        warnings.append(Warning(
            "DEFAULT_AUTO_FIELD devrait être 'django.db.models.BigAutoField'.",
            id="CFG.W003",
        ))

    # 3) USE_TZ
    if not getattr(settings, "USE_TZ", False):
        errors.append(Error("USE_TZ doit être True.", id="CFG.E005"))

    # 4) Arborescence var/*
    var_dir = Path(getattr(settings, "VAR_DIR", Path(settings.BASE_DIR) / "var"))
    if not var_dir.exists():
        warnings.append(Warning(f"Le répertoire {var_dir} n'existe pas.", id="CFG.W006"))
    else:
        missing_dirs = [d for d in REQUIRED_VAR_SUBDIRS if not (var_dir / d).exists()]
        if missing_dirs:
            warnings.append(Warning(
                f"Sous-dossiers manquants dans var/: {', '.join(missing_dirs)}",
                id="CFG.W007",
                hint="Crée-les ou ajoute une initialisation au démarrage.",
            ))

    return errors + warnings


@register()
def algebra_settings_check(app_configs, **kwargs):
    errors = []
    warnings = []
    cfg = getattr(settings, "ALGEBRA", None)
    if cfg is None:
        warnings.append(Warning(
            "Bloc ALGEBRA absent des settings ; valeurs par défaut intégrées utilisées.",
            id="CFG.W020",
        ))
        return warnings

    # 1) Entiers strictement positifs
    for key, err_id in (("SEARCH_BOUND", "CFG.E021"), ("VERIFY_BOX_FACTOR", "CFG.E022"), ("JOBS", "CFG.E023")):
        value = cfg.get(key, 1)
        if not isinstance(value, int) or value < 1:
            errors.append(Error(f"ALGEBRA['{key}'] doit être un entier ≥ 1 (reçu {value!r}).", id=err_id))

    # 2) Corps et boîte par défaut
    try:
        FieldSpec.parse(str(cfg.get("DEFAULT_FIELD", "QQ")))
    except AlgebraError as e:
        errors.append(Error(f"ALGEBRA['DEFAULT_FIELD'] invalide : {e.detail}", id="CFG.E024"))
    try:
        Box.parse(str(cfg.get("DEFAULT_BOX", "-3..3")))
    except AlgebraError as e:
        errors.append(Error(f"ALGEBRA['DEFAULT_BOX'] invalide : {e.detail}", id="CFG.E025"))

    if cfg.get("OUTPUT_FORMAT", "json") not in ("json", "table"):
        errors.append(Error("ALGEBRA['OUTPUT_FORMAT'] doit valoir 'json' ou 'table'.", id="CFG.E026"))

    # 3) Jeux de données embarqués
    data_dir = Path(cfg.get("DATA_DIR") or DEFAULTS["DATA_DIR"])
    if not data_dir.is_dir():
        warnings.append(Warning(f"ALGEBRA['DATA_DIR'] introuvable : {data_dir}", id="CFG.W027"))
    else:
        absent = [n for n in REQUIRED_DATASETS if not (data_dir / f"{n}.json").exists()]
        if absent:
            warnings.append(Warning(
                f"Jeux de données embarqués manquants : {', '.join(absent)}",
                id="CFG.W028",
            ))

    return errors + warnings
