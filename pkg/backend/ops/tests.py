# backend/ops/tests.py
from __future__ import annotations

import io
import json
import tempfile
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import TestCase, override_settings

from ops.models import JobRun
from sitecfg.checks import algebra_settings_check, project_conventions_check

ALGEBRA_TEST = {
    "SEARCH_BOUND": 8,
    "VERIFY_BOX_FACTOR": 4,
    "DEFAULT_FIELD": "QQ",
    "DEFAULT_BOX": "-3..3",
    "JOBS": 1,
    "OUTPUT_FORMAT": "json",
}

BAD_BMM = {
    "type": "monoidal_complex",
    "cells": [{"id": "p", "dim": 0}, {"id": "q", "dim": 0}, {"id": "p-q", "dim": 1}],
    "covers": [["p-q", "p"], ["p-q", "q"]],
    "monoids": {
        "p": {"generators": [[2]]},
        "q": {"generators": [[1]]},
        "p-q": {"generators": [[2, 0], [0, 1]]},
    },
    "embeddings": {"p-q|p": [[2], [0]], "p-q|q": [[0], [1]]},
}

TIGHT = {"type": "affine_semigroup", "ambient_dim": 2, "generators": [[6, 0], [0, 1], [1, 1]]}


def invoke(*args, **options):
    """(code de sortie, stdout) ; CommandError porte le code non nul."""
    out = io.StringIO()
    try:
        call_command(*args, stdout=out, **options)
    except CommandError as e:
        return e.returncode, out.getvalue()
    return 0, out.getvalue()


@override_settings(ALGEBRA=ALGEBRA_TEST)
class AnalyzeCommandTests(TestCase):
    def test_x2_y_xy(self):
        code, out = invoke("analyze", "paper_example_x2_y_xy")
        self.assertEqual(code, 0)
        data = json.loads(out)
        self.assertEqual(data["flags"]["seminormal"], True)
        self.assertEqual(data["flags"]["normal"], False)
        self.assertEqual(data["exit_code"], 0)

        run = JobRun.objects.get()
        self.assertEqual(run.job_name, "analyze")
        self.assertEqual(run.status, JobRun.Status.SUCCESS)
        self.assertEqual(run.exit_code, 0)
        self.assertEqual(len(run.input_digest), 64)
        self.assertEqual(run.input_digest, data["input_digest"])
        self.assertEqual(run.params["bound"], 8)
        self.assertNotIn("jobs", run.params)
        self.assertEqual(run.metrics["flag_seminormal"], True)
        self.assertIsNotNone(run.finished_at)

    def test_table_format(self):
        code, out = invoke("analyze", "numerical_2_3", format="table")
        self.assertEqual(code, 0)
        self.assertTrue(out.startswith("command: analyze\n"))
        self.assertIn("flags.seminormal: False", out)

    def test_bound_too_small(self):
        code, out = invoke("analyze", "-", stdin=io.StringIO(json.dumps(TIGHT)), bound=1)
        self.assertEqual(code, 3)
        self.assertEqual(json.loads(out)["error"]["code"], "bound_too_small")
        run = JobRun.objects.get()
        self.assertEqual(run.status, JobRun.Status.FAILED)
        self.assertEqual(run.exit_code, 3)
        self.assertTrue(run.error_message)

    def test_unknown_dataset(self):
        code, out = invoke("analyze", "no_such_dataset")
        self.assertEqual(code, 2)
        self.assertEqual(json.loads(out)["error"]["code"], "invalid_input")
        self.assertEqual(JobRun.objects.get().status, JobRun.Status.FAILED)

    def test_invalid_options_fail_before_job(self):
        code, out = invoke("analyze", "quadrant", field="GF(4)")
        self.assertEqual(code, 2)
        self.assertEqual(out, "")
        self.assertFalse(JobRun.objects.exists())


@override_settings(ALGEBRA=ALGEBRA_TEST)
class ChecksCommandTests(TestCase):
    def test_duality_witness_exit_code(self):
        code, out = invoke("checks", "numerical_2_3", "duality-check")
        self.assertEqual(code, 1)
        witnesses = json.loads(out)["witnesses"]
        self.assertEqual(len(witnesses), 1)
        self.assertEqual(witnesses[0]["degree"], [-1])
        run = JobRun.objects.get()
        self.assertEqual(run.job_name, "checks.duality-check")
        self.assertEqual(run.status, JobRun.Status.SUCCESS)
        self.assertEqual(run.exit_code, 1)

    def test_duality_holds_for_quadrant(self):
        code, _ = invoke("checks", "quadrant", "duality-check", box="-2..2")
        self.assertEqual(code, 0)

    def test_topology(self):
        code, out = invoke("checks", "hollow_triangle", "topology", field="GF(2)")
        self.assertEqual(code, 0)
        data = json.loads(out)
        self.assertEqual(data["tables"]["degree_zero"], [0, 0, 1])
        self.assertEqual(data["tables"]["field"], "GF(2)")
        code, out = invoke("checks", "moebius", "topology")
        self.assertEqual(json.loads(out)["tables"]["degree_zero"], [0, 0, 1, 0])

    def test_validate_from_stdin(self):
        code, out = invoke("checks", "-", "validate", stdin=io.StringIO(json.dumps(BAD_BMM)))
        self.assertEqual(code, 2)
        data = json.loads(out)
        self.assertFalse(data["flags"]["valid"])
        axioms = [f["axiom"] for f in data["tables"]["validation"]["failures"]]
        self.assertIn("embedding.primitive", axioms)

    def test_missing_cover_embedding_from_stdin(self):
        doc = json.loads(json.dumps(BAD_BMM))
        del doc["embeddings"]["p-q|q"]
        code, out = invoke("checks", "-", "validate", stdin=io.StringIO(json.dumps(doc)))
        self.assertEqual(code, 2)
        self.assertEqual(json.loads(out)["error"]["code"], "invalid_input")
        self.assertEqual(JobRun.objects.get().status, JobRun.Status.FAILED)

    def test_validate_bundled(self):
        code, out = invoke("checks", "moebius", "validate")
        self.assertEqual(code, 0)
        self.assertTrue(json.loads(out)["flags"]["valid"])


@override_settings(ALGEBRA=ALGEBRA_TEST)
class CohomologyCommandTests(TestCase):
    def test_unresolved_exit_code(self):
        code, out = invoke(
            "cohomology", "-", stdin=io.StringIO(json.dumps(TIGHT)), box="1..1,2..2", bound=1
        )
        self.assertEqual(code, 4)
        self.assertEqual(json.loads(out)["unresolved"], [{"degree": [1, 2], "bound": 1}])
        run = JobRun.objects.get()
        self.assertEqual(run.job_name, "cohomology.cech")
        self.assertEqual(run.status, JobRun.Status.SUCCESS)
        self.assertEqual(run.exit_code, 4)

    def test_degree_zero(self):
        code, out = invoke("cohomology", "solid_simplex", degree_zero=True)
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)["tables"]["degree_zero"], [0, 0, 0, 0])

    def test_output_is_deterministic(self):
        _, first = invoke("cohomology", "numerical_2_3", kind="plus")
        _, second = invoke("cohomology", "numerical_2_3", kind="plus")
        _, parallel = invoke("cohomology", "numerical_2_3", kind="plus", jobs=2)
        self.assertEqual(first, second)
        self.assertEqual(first, parallel)
        rows = json.loads(first)["tables"]["cohomology"]
        self.assertIn({"degree": [1], "index": -1, "dimension": 1, "flags": []}, rows)


class SettingsCheckTests(TestCase):
    @override_settings(ALGEBRA=dict(ALGEBRA_TEST, SEARCH_BOUND=0, OUTPUT_FORMAT="xml"))
    def test_invalid_algebra_block(self):
        ids = {m.id for m in algebra_settings_check(None)}
        self.assertIn("CFG.E021", ids)
        self.assertIn("CFG.E026", ids)

    @override_settings(ALGEBRA=dict(ALGEBRA_TEST, DEFAULT_FIELD="GF(6)", DEFAULT_BOX="oops"))
    def test_invalid_defaults(self):
        ids = {m.id for m in algebra_settings_check(None)}
        self.assertIn("CFG.E024", ids)
        self.assertIn("CFG.E025", ids)

    def test_var_tree_needs_only_logs(self):
        with tempfile.TemporaryDirectory() as tmp:
            (Path(tmp) / "logs" / "ops").mkdir(parents=True)
            with override_settings(VAR_DIR=Path(tmp)):
                ids = {m.id for m in project_conventions_check(None)}
        self.assertNotIn("CFG.W006", ids)
        self.assertNotIn("CFG.W007", ids)
