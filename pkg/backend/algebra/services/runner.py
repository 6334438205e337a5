# backend/algebra/services/runner.py
"""
Pilotes des commandes analyze / cohomology / checks.

Chaque pilote reçoit une RunConfig et une entrée déjà analysée, et renvoie un Report
dont le code de sortie découle du contenu (voir reports.ExitCode).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from dataclasses import field as dc_field
from typing import Any, Dict, List, Optional, Sequence, TextIO, Tuple

from ..errors import AlgebraError, InvalidInput
from . import complexes, toricface
from .boxes import Box, parse_cell_boxes
from .builders import from_affine_semigroup
from .complexes import FieldSpec, ProbeReport, SliceKind, cohomology
from .config import algebra_cfg
from .inputs import ParsedInput, load_input
from .reports import Report
from .semigroup import (
    AffineSemigroup,
    contains,
    is_normal,
    normalization,
    same_monoid,
    seminormalization,
)
from .toricface import MonoidalComplex, validate

CHECKS = ("duality-check", "cm-probe", "cm-chain", "compare", "topology", "validate")
KINDS = tuple(k.value for k in SliceKind)
FORMATS = ("json", "table")


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str
    box: str
    field: FieldSpec
    bound: int
    jobs: int
    output_format: str
    cell_boxes: Dict[str, str] = dc_field(default_factory=dict)
    kind: str = "cech"
    check: str = ""
    degree_zero: bool = False
    verify_box_factor: int = 4

    @classmethod
    def build(
        cls,
        command: str,
        input: str,
        *,
        box: Optional[str] = None,
        cell_box: Optional[Sequence[str]] = None,
        field: Optional[str] = None,
        bound: Optional[int] = None,
        jobs: Optional[int] = None,
        output_format: Optional[str] = None,
        kind: str = "cech",
        check: str = "",
        degree_zero: bool = False,
    ) -> "RunConfig":
        """Options de la ligne de commande par-dessus le bloc settings.ALGEBRA."""
        cfg = algebra_cfg()
        cfg_ = cls(
            command=command,
            input=input,
            box=box or cfg["DEFAULT_BOX"],
            field=FieldSpec.parse(field or cfg["DEFAULT_FIELD"]),
            bound=int(bound if bound is not None else cfg["SEARCH_BOUND"]),
            jobs=int(jobs if jobs is not None else cfg["JOBS"]),
            output_format=output_format or cfg["OUTPUT_FORMAT"],
            cell_boxes=parse_cell_boxes(cell_box or ()),
            kind=kind,
            check=check,
            degree_zero=degree_zero,
            verify_box_factor=int(cfg["VERIFY_BOX_FACTOR"]),
        )
        if cfg_.bound < 1:
            raise InvalidInput(f"--bound doit être ≥ 1 (reçu {cfg_.bound}).")
        if cfg_.jobs < 1:
            raise InvalidInput(f"--jobs doit être ≥ 1 (reçu {cfg_.jobs}).")
        if cfg_.output_format not in FORMATS:
            raise InvalidInput(f"Format inconnu : {cfg_.output_format!r}.", expected=list(FORMATS))
        if kind not in KINDS:
            raise InvalidInput(f"Type de complexe inconnu : {kind!r}.", expected=list(KINDS))
        if command == "checks" and check not in CHECKS:
            raise InvalidInput(f"Vérification inconnue : {check!r}.", expected=list(CHECKS))
        Box.parse(cfg_.box)
        return cfg_

    def to_params(self) -> Dict[str, Any]:
        """Paramètres effectifs ; --jobs exclu (sans effet sur le contenu du rapport)."""
        out: Dict[str, Any] = {
            "input": self.input,
            "box": self.box,
            "field": self.field.label,
            "bound": self.bound,
            "verify_box_factor": self.verify_box_factor,
        }
        if self.cell_boxes:
            out["cell_boxes"] = dict(sorted(self.cell_boxes.items()))
        if self.command == "cohomology":
            out["kind"] = self.kind
            out["degree_zero"] = self.degree_zero
        if self.command == "checks":
            out["check"] = self.check
        return out


def _vecs(vs) -> List[List[int]]:
    return [list(v) for v in vs]


def _unresolved(labels, bound: int) -> List[Dict[str, Any]]:
    return [{"degree": list(a) if isinstance(a, tuple) else a, "bound": bound} for a in labels]


def _absorb(report: Report, probe: ProbeReport, bound: int) -> None:
    report.tables[probe.name] = probe.to_dict()
    report.witnesses.extend(dict(w, check=probe.name) for w in probe.witnesses)
    report.unresolved.extend(_unresolved(probe.unresolved, bound))


def _require_valid(report: Report, MC: MonoidalComplex) -> bool:
    v = validate(MC)
    if not v.valid:
        report.tables["validation"] = v.to_dict()
        report.error = {"code": "invalid_input", "message": "Complexe monoïdal invalide.", "failures": v.to_dict()["failures"]}
        return False
    return True


# --- analyze --------------------------------------------------------------------------

def cmd_analyze(config: RunConfig, parsed: ParsedInput, logger: Optional[logging.Logger] = None) -> Report:
    report = Report("analyze", parsed.digest, config.to_params())
    if parsed.semigroup is not None:
        M = parsed.semigroup
        plus = seminormalization(M, config.bound, verify_factor=config.verify_box_factor, logger=logger)
        report.flags["seminormal"] = all(contains(M, s) for s in plus)
        report.flags["normal"] = is_normal(M)
        report.tables["generators"] = _vecs(M.generators)
        report.tables["normalization"] = _vecs(normalization(M))
        report.tables["seminormalization"] = _vecs(plus)
        report.tables["dimension"] = M.dim
        probe = complexes.seminormality_criterion_probe(
            M, Box.parse(config.box, M.ambient_dim), config.field, bound=config.bound, jobs=config.jobs
        )
        report.tables["seminormality_criterion"] = probe.to_dict()
        report.unresolved.extend(_unresolved(probe.unresolved, config.bound))
        return report.settle()

    MC = parsed.complex
    assert MC is not None
    if not _require_valid(report, MC):
        return report.settle()
    plus_mc = toricface.seminormalize_complex(MC, config.bound)
    tilde = toricface.conewise_normalize(MC)
    exponents = toricface.normalization_exponents(MC)
    rows = []
    for c in MC.cells:
        if c == toricface.EMPTY:
            continue
        M = MC.monoids[c]
        rows.append({
            "cell": c,
            "generators": _vecs(M.generators),
            "seminormalization": _vecs(plus_mc.monoids[c].generators),
            "normalization": _vecs(normalization(M)),
            "conewise_normalization": _vecs(tilde.monoids[c].generators),
            "normalization_exponent": exponents[c],
            "seminormal": all(contains(M, s) for s in plus_mc.monoids[c].generators),
            "conewise_normal": same_monoid(tilde.monoids[c], M),
        })
    report.tables["cells"] = rows
    report.tables["dimension"] = MC.dim
    report.flags["seminormal"] = all(r["seminormal"] for r in rows)
    report.flags["normal"] = all(r["conewise_normal"] for r in rows)
    return report.settle()


# --- cohomology -----------------------------------------------------------------------

def _rows(entries: Sequence[Tuple[Any, Dict[int, int], bool]]) -> List[Dict[str, Any]]:
    out = []
    for degree, dims, unresolved in entries:
        for i, n in sorted(dims.items()):
            if n:
                row: Dict[str, Any] = {"degree": list(degree) if isinstance(degree, tuple) else degree, "index": i, "dimension": n}
                row["flags"] = ["unresolved"] if unresolved else []
                out.append(row)
    return out


def cmd_cohomology(config: RunConfig, parsed: ParsedInput, logger: Optional[logging.Logger] = None) -> Report:
    report = Report("cohomology", parsed.digest, config.to_params())
    kind = SliceKind(config.kind)
    if parsed.semigroup is not None:
        M = parsed.semigroup
        if config.degree_zero:
            V = complexes.build_slice(M, kind, tuple([0] * M.ambient_dim), config.bound, config.field)
            dims = cohomology(V)
            report.tables["degree_zero"] = [dims[i] for i in sorted(dims)]
            entries = [(tuple([0] * M.ambient_dim), dims, bool(V.unresolved))]
        else:
            table = complexes.scan(
                M, kind, Box.parse(config.box, M.ambient_dim), config.field, bound=config.bound, jobs=config.jobs
            )
            unresolved = set(table.unresolved)
            entries = [(a, dims, a in unresolved) for a, dims in table.entries.items()]
            entries += [(a, {}, True) for a in table.unresolved if a not in table.entries]
    else:
        MC = parsed.complex
        assert MC is not None
        if not _require_valid(report, MC):
            return report.settle()
        if config.degree_zero:
            dims = toricface.degree_zero_cohomology(MC, config.field)
            report.tables["degree_zero"] = [dims[i] for i in sorted(dims)]
            entries = [(toricface.zero_degree().label, dims, False)]
        else:
            degrees = toricface.box_degrees(MC, config.box, config.cell_boxes)
            if kind == SliceKind.CECH:
                degrees = degrees + [d.negated() for d in degrees if not d.is_zero]
            entries = toricface.slice_table(MC, kind.value, degrees, config.field, bound=config.bound, jobs=config.jobs)
    report.tables["cohomology"] = _rows(entries)
    report.unresolved.extend(_unresolved([d for d, _, u in entries if u], config.bound))
    if logger:
        logger.info("cohomology kind=%s rows=%d unresolved=%d", kind.value, len(report.tables["cohomology"]), len(report.unresolved))
    return report.settle()


# --- checks ---------------------------------------------------------------------------

def _affine_checks(config: RunConfig, M: AffineSemigroup, report: Report) -> None:
    box = Box.parse(config.box, M.ambient_dim)
    opts = dict(bound=config.bound, jobs=config.jobs)
    check = config.check
    if check == "duality-check":
        _absorb(report, complexes.duality_check(M, box, config.field, **opts), config.bound)
    elif check == "cm-probe":
        _absorb(report, complexes.cm_probe(M, box, config.field, **opts), config.bound)
    elif check == "compare":
        _absorb(report, complexes.canonical_compare(M, box, config.field, **opts), config.bound)
    else:
        _complex_checks(config, from_affine_semigroup(M), report)


def _complex_checks(config: RunConfig, MC: MonoidalComplex, report: Report) -> None:
    check = config.check
    if check == "validate":
        v = validate(MC)
        report.tables["validation"] = v.to_dict()
        report.flags["valid"] = v.valid
        if not v.valid:
            report.error = {"code": "invalid_input", "message": "Complexe monoïdal invalide.", "failures": v.to_dict()["failures"]}
        return
    if not _require_valid(report, MC):
        return
    if check == "topology":
        dims = toricface.degree_zero_cohomology(MC, config.field)
        report.tables["degree_zero"] = [dims[i] for i in sorted(dims)]
        report.tables["field"] = config.field.label
        return
    opts = dict(cell_boxes=config.cell_boxes, bound=config.bound, jobs=config.jobs)
    probes = {
        "duality-check": toricface.duality_check,
        "cm-probe": toricface.cm_probe,
        "cm-chain": toricface.cm_chain_report,
        "compare": toricface.local_cohomology_comparison,
    }
    _absorb(report, probes[check](MC, config.box, config.field, **opts), config.bound)


def cmd_checks(config: RunConfig, parsed: ParsedInput, logger: Optional[logging.Logger] = None) -> Report:
    report = Report("checks", parsed.digest, config.to_params())
    if parsed.semigroup is not None:
        _affine_checks(config, parsed.semigroup, report)
    else:
        assert parsed.complex is not None
        _complex_checks(config, parsed.complex, report)
    if logger:
        logger.info("check %s: witnesses=%d unresolved=%d", config.check, len(report.witnesses), len(report.unresolved))
    return report.settle()


COMMANDS = {"analyze": cmd_analyze, "cohomology": cmd_cohomology, "checks": cmd_checks}


def execute(config: RunConfig, *, stdin: Optional[TextIO] = None, logger: Optional[logging.Logger] = None) -> Report:
    """Charge l'entrée et lance la commande ; les erreurs du domaine deviennent des rapports."""
    digest = ""
    try:
        parsed = load_input(config.input, stdin)
        digest = parsed.digest
        return COMMANDS[config.command](config, parsed, logger)
    except AlgebraError as e:
        if logger:
            logger.warning("%s: %s", e.code, e.detail)
        report = Report(config.command, digest, config.to_params())
        report.error = {"code": e.code, "message": e.detail, "params": _jsonable(e.extra)}
        return report.settle()


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (int, str, bool, float)) or value is None:
        return value
    return str(value)


def report_metrics(report: Report) -> Dict[str, Any]:
    out: Dict[str, Any] = {
        "witnesses": len(report.witnesses),
        "unresolved": len(report.unresolved),
        "exit_code": int(report.exit_code),
    }
    for k, v in report.flags.items():
        out[f"flag_{k}"] = v
    rows = report.tables.get("cohomology")
    if isinstance(rows, list):
        out["rows"] = len(rows)
    return out


__all__ = ["RunConfig", "cmd_analyze", "cmd_cohomology", "cmd_checks", "execute", "report_metrics"]
