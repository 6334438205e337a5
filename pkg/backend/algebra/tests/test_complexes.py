# backend/algebra/tests/test_complexes.py
from __future__ import annotations

from django.test import SimpleTestCase

from algebra.errors import InvalidInput
from algebra.services.boxes import Box
from algebra.services.complexes import (
    FieldSpec,
    SliceKind,
    canonical_compare,
    cech_slice,
    cm_probe,
    cohomology,
    duality_check,
    ishida_slice,
    plus_ishida_slice,
    scan,
    seminormality_criterion_probe,
)
from algebra.services.semigroup import new_affine_semigroup


def numerical_2_3():
    return new_affine_semigroup([(2,), (3,)], 1)


def x2_y_xy():
    return new_affine_semigroup([(2, 0), (0, 1), (1, 1)], 2)


class FieldSpecTests(SimpleTestCase):
    def test_parse(self):
        self.assertEqual(FieldSpec.parse("QQ").characteristic, 0)
        self.assertEqual(FieldSpec.parse("F3").characteristic, 3)
        self.assertEqual(FieldSpec.parse("GF(2)").characteristic, 2)
        self.assertEqual(FieldSpec.parse("5").characteristic, 5)
        self.assertEqual(FieldSpec.parse("gf(7)").label, "GF(7)")

    def test_parse_rejects(self):
        for text in ("4", "FOO", "GF(1)"):
            with self.subTest(text=text):
                with self.assertRaises(InvalidInput):
                    FieldSpec.parse(text)

    def test_rank_depends_on_characteristic(self):
        self.assertEqual(FieldSpec.parse("QQ").rank([[2]]), 1)
        self.assertEqual(FieldSpec.parse("GF(2)").rank([[2]]), 0)
        self.assertEqual(FieldSpec().rank([]), 0)


class SliceTests(SimpleTestCase):
    def test_cech_numerical(self):
        M = numerical_2_3()
        self.assertEqual(cohomology(cech_slice(M, (1,))), {0: 0, 1: 1})
        self.assertEqual(cohomology(cech_slice(M, (2,))), {0: 0, 1: 0})
        self.assertEqual(cohomology(cech_slice(M, (-1,))), {0: 0, 1: 1})

    def test_plus_ishida_sees_gap(self):
        M = numerical_2_3()
        self.assertEqual(cohomology(ishida_slice(M, (1,))), {-1: 0, 0: 0})
        self.assertEqual(cohomology(plus_ishida_slice(M, (1,))), {-1: 1, 0: 0})

    def test_ishida_at_zero_is_acyclic(self):
        M = x2_y_xy()
        V = ishida_slice(M, (0, 0))
        self.assertEqual(V.dims(), {-2: 1, -1: 2, 0: 1})
        self.assertTrue(V.squares_to_zero())
        self.assertEqual(cohomology(V), {-2: 0, -1: 0, 0: 0})

    def test_squares_to_zero(self):
        M = x2_y_xy()
        for a in Box.parse("-2..2", 2).points():
            for kind in SliceKind:
                with self.subTest(a=a, kind=kind.value):
                    if kind == SliceKind.CECH:
                        V = cech_slice(M, a)
                    elif kind == SliceKind.ISHIDA:
                        V = ishida_slice(M, a)
                    else:
                        V = plus_ishida_slice(M, a)
                    self.assertTrue(V.squares_to_zero())

    def test_unresolved_cells_reported(self):
        M = new_affine_semigroup([(6, 0), (0, 1), (1, 1)], 2)
        V = cech_slice(M, (1, 2), bound=1)
        self.assertTrue(V.unresolved)


class ScanTests(SimpleTestCase):
    def test_scan_table(self):
        table = scan(numerical_2_3(), SliceKind.CECH, Box.parse("-3..3"))
        self.assertEqual(table.dimension((1,), 1), 1)
        self.assertEqual(table.dimension((2,), 1), 0)
        self.assertEqual(sorted(table.support(1)), [(-3,), (-2,), (-1,), (1,)])
        self.assertEqual(table.unresolved, [])

    def test_scan_parallel_matches_serial(self):
        M = x2_y_xy()
        box = Box.parse("-2..2", 2)
        serial = scan(M, SliceKind.CECH, box, jobs=1)
        parallel = scan(M, SliceKind.CECH, box, jobs=2)
        self.assertEqual(serial.entries, parallel.entries)
        self.assertEqual(list(serial.entries), list(parallel.entries))


class ProbeTests(SimpleTestCase):
    def test_duality_mismatch_for_numerical(self):
        report = duality_check(numerical_2_3(), Box.parse("-3..3"))
        self.assertEqual(
            report.witnesses,
            [{"degree": [-1], "index": 1, "plus_ishida": 0, "local_cohomology": 1}],
        )
        self.assertFalse(report.passed)

    def test_duality_holds_for_quadrant(self):
        M = new_affine_semigroup([(1, 0), (0, 1)], 2)
        self.assertTrue(duality_check(M, Box.parse("-2..2", 2)).passed)

    def test_duality_holds_for_normal_and_seminormal(self):
        for gens in ([(1, 0), (1, 2)], [(2, 0), (0, 1), (1, 1)]):
            with self.subTest(gens=gens):
                report = duality_check(new_affine_semigroup(gens, 2), Box.parse("-3..3", 2))
                self.assertTrue(report.passed, report.witnesses)

    def test_seminormality_criterion(self):
        report = seminormality_criterion_probe(numerical_2_3(), Box.parse("-3..3"))
        self.assertEqual(report.witnesses, [{"index": 1, "degree": [1], "dimension": 1}])
        self.assertTrue(seminormality_criterion_probe(x2_y_xy(), Box.parse("-2..2", 2)).passed)

    def test_cm_probe_on_numerical(self):
        self.assertTrue(cm_probe(numerical_2_3(), Box.parse("-3..3")).passed)

    def test_canonical_compare_normal(self):
        for gens in ([(1, 0), (0, 1)], [(1, 0), (1, 2)]):
            with self.subTest(gens=gens):
                report = canonical_compare(new_affine_semigroup(gens, 2), Box.parse("0..4", 2))
                self.assertTrue(report.passed)
                self.assertTrue(report.details["normal"])
                self.assertTrue(report.details["omega_equals_interior"])
                self.assertTrue(report.details["ishida_top_equals_interior"])

    def test_canonical_compare_not_normal(self):
        report = canonical_compare(numerical_2_3(), Box.parse("-3..3"))
        self.assertTrue(report.passed)
        self.assertFalse(report.details["normal"])
        self.assertEqual(report.details["omega"], [[-1], [1], [2], [3]])
        self.assertEqual(report.details["interior"], [[2], [3]])
