# backend/algebra/tests/test_toricface.py
from __future__ import annotations

import copy

from django.test import SimpleTestCase
from sympy import Matrix

from algebra.errors import InvalidInput, NotInCone
from algebra.services.boxes import Box
from algebra.services.builders import affine_degree, build_from_fan, from_affine_semigroup
from algebra.services.complexes import (
    FieldSpec,
    cech_slice as affine_cech_slice,
    cohomology,
    ishida_slice as affine_ishida_slice,
    plus_ishida_slice as affine_plus_ishida_slice,
)
from algebra.services.inputs import load_document, load_input, parse_document
from algebra.services.semigroup import is_normal, new_affine_semigroup, normalization, same_monoid
from algebra.services.toricface import (
    EMPTY,
    DegreeKind,
    MonoidalComplex,
    ToricDegree,
    ToricFaceRing,
    box_degrees,
    cech_slice,
    cm_chain_report,
    cm_probe,
    conewise_normalize,
    degree_zero_cohomology,
    duality_check,
    ishida_slice,
    is_seminormal_complex,
    local_cohomology_comparison,
    normalization_exponents,
    plus_ishida_slice,
    seminormalize_complex,
    validate,
    zero_degree,
)

BUNDLED_COMPLEXES = ("hollow_triangle", "solid_simplex", "bowtie", "two_cones_fan", "bMM_cell", "moebius")
FIELDS = ("QQ", "GF(2)", "GF(3)")


def complex_of(name):
    return load_input(name).complex


def complete_fan():
    return build_from_fan([(1, 0), (0, 1), (-1, 0), (0, -1)], [(0, 1), (1, 2), (2, 3), (3, 0)])


def reduced_cochain_dims(MC):
    """H̃^{k}(X; Q) par rangs des matrices d'incidence, rangé à l'indice k + 1."""
    P = MC.poset
    by_dim = {k: [c for c in P.cells if P.dims[c] == k] for k in range(-1, P.dim + 1)}

    def rank(k):
        rows, cols = by_dim.get(k + 1, []), by_dim.get(k, [])
        if not rows or not cols:
            return 0
        return Matrix(len(rows), len(cols), lambda i, j: P.incidence.get((rows[i], cols[j]), 0)).rank()

    return {k + 1: len(by_dim[k]) - rank(k) - rank(k - 1) for k in range(-1, P.dim + 1)}


def drop_embedding(MC, key):
    embeddings = {k: v for k, v in MC.embeddings.items() if k != key}
    return MonoidalComplex(MC.poset, dict(MC.monoids), embeddings)


class ValidationTests(SimpleTestCase):
    def test_bundled_complexes_are_valid(self):
        for name in BUNDLED_COMPLEXES:
            with self.subTest(name=name):
                report = validate(complex_of(name))
                self.assertTrue(report.valid, report.to_dict()["failures"])
                self.assertIn("incidence.two_step", report.checked)

    def test_vertices_have_positive_incidence_to_empty(self):
        MC = complex_of("hollow_triangle")
        for v in ("1", "2", "3"):
            self.assertEqual(MC.poset.incidence[(v, EMPTY)], 1)

    def test_non_primitive_embedding_rejected(self):
        doc = copy.deepcopy(load_document("bMM_cell"))
        doc["embeddings"]["p-q|p"] = [[2], [0]]
        report = validate(parse_document(doc).complex)
        self.assertFalse(report.valid)
        self.assertIn("embedding.primitive", [f.axiom for f in report.failures])

    def test_missing_cover_embedding_rejected_at_parse(self):
        doc = copy.deepcopy(load_document("bMM_cell"))
        del doc["embeddings"]["p-q|q"]
        with self.assertRaises(InvalidInput) as ctx:
            parse_document(doc)
        self.assertEqual(ctx.exception.extra["covers"], ["p-q|q"])

    def test_missing_cover_embedding_reported_by_validate(self):
        MC = drop_embedding(complex_of("bMM_cell"), ("p-q", "q"))
        report = validate(MC)
        self.assertFalse(report.valid)
        self.assertEqual(
            [(f.axiom, f.cells) for f in report.failures], [("embedding.shape", ("p-q", "q"))]
        )
        with self.assertRaises(InvalidInput):
            MC.embedding("p-q", "q")

    def test_missing_embedding_below_a_square(self):
        full = complex_of("moebius")
        MC = drop_embedding(full, ("u-v-x-y", "x-y"))
        with self.assertRaises(InvalidInput):
            MC.embedding("u-v-x-y", "x-y")
        # x reste joignable par u-x
        self.assertEqual(MC.embedding("u-v-x-y", "x"), full.embedding("u-v-x-y", "x"))
        self.assertIn(("u-v-x-y", "x-y"), [f.cells for f in validate(MC).failures])


class TopologyTests(SimpleTestCase):
    def test_degree_zero_cohomology(self):
        expected = {
            "hollow_triangle": {0: 0, 1: 0, 2: 1},
            "solid_simplex": {0: 0, 1: 0, 2: 0, 3: 0},
            "moebius": {0: 0, 1: 0, 2: 1, 3: 0},
        }
        for name, dims in expected.items():
            MC = complex_of(name)
            for fld in FIELDS:
                with self.subTest(name=name, field=fld):
                    self.assertEqual(degree_zero_cohomology(MC, FieldSpec.parse(fld)), dims)

    def test_degree_zero_matches_cell_cochains(self):
        cases = {
            "hollow_triangle": complex_of("hollow_triangle"),
            "bowtie": complex_of("bowtie"),
            "complete_fan": complete_fan(),
        }
        for name, MC in cases.items():
            with self.subTest(name=name):
                self.assertEqual(degree_zero_cohomology(MC), reduced_cochain_dims(MC))
        self.assertEqual(reduced_cochain_dims(cases["complete_fan"]), {0: 0, 1: 0, 2: 1})
        self.assertFalse(any(reduced_cochain_dims(cases["bowtie"]).values()))

    def test_slices_square_to_zero(self):
        for name in BUNDLED_COMPLEXES:
            MC = complex_of(name)
            for a in box_degrees(MC, "0..2"):
                with self.subTest(name=name, degree=a.label):
                    self.assertTrue(cech_slice(MC, a).squares_to_zero())
                    self.assertTrue(cech_slice(MC, a.negated()).squares_to_zero())
                    self.assertTrue(ishida_slice(MC, a).squares_to_zero())
                    self.assertTrue(plus_ishida_slice(MC, a).squares_to_zero())


class DegreeTests(SimpleTestCase):
    def test_canonical_form(self):
        MC = complex_of("hollow_triangle")
        self.assertEqual(MC.degree("1-2", (3, 0), DegreeKind.M), ToricDegree("1", (3,), DegreeKind.M))
        self.assertEqual(MC.degree("1-2", (0, 0), DegreeKind.M), zero_degree(DegreeKind.M))
        with self.assertRaises(NotInCone):
            MC.degree("1-2", (-1, 0), DegreeKind.M)

    def test_labels(self):
        self.assertEqual(ToricDegree("3", (1,), DegreeKind.NEG).label, "-3:[1]")
        self.assertEqual(zero_degree().negated().label, "empty:[]")

    def test_face_ring_multiplication(self):
        R = ToricFaceRing(complex_of("hollow_triangle"))
        x1, x2, x3 = (R.monomial(v, (1,)) for v in ("1", "2", "3"))
        x12 = R.multiply(x1, x2)
        self.assertEqual(x12, ToricDegree("1-2", (1, 1), DegreeKind.M))
        self.assertIsNone(R.multiply(x12, x3))
        self.assertEqual(R.multiply(x1, x1), ToricDegree("1", (2,), DegreeKind.M))
        self.assertEqual(R.dim, 2)

    def test_moebius_presentation_relations(self):
        R = ToricFaceRing(complex_of("moebius"))
        x, y, z, u, v, w = (R.monomial(c, (1,)) for c in "xyzuvw")
        for (a, b), (c, d), cell in (
            ((x, v), (u, y), "u-v-x-y"),
            ((v, z), (y, w), "v-w-y-z"),
            ((x, z), (u, w), "u-w-x-z"),
        ):
            with self.subTest(cell=cell):
                lhs = R.multiply(a, b)
                self.assertEqual(lhs, R.multiply(c, d))
                self.assertEqual(lhs, ToricDegree(cell, (1, 1, 2), DegreeKind.M))
        uv = R.multiply(u, v)
        self.assertEqual(uv, ToricDegree("u-v", (1, 1), DegreeKind.M))
        self.assertIsNone(R.multiply(uv, w))
        self.assertIsNone(R.multiply(uv, z))

    def test_box_degrees(self):
        MC = complex_of("bMM_cell")
        labels = [d.label for d in box_degrees(MC, "0..1")]
        self.assertEqual(labels, ["empty:[]", "p:[1]", "p-q:[1, 1]", "q:[1]"])
        self.assertNotIn("empty:[]", [d.label for d in box_degrees(MC, "1..2")])


class CellwiseTests(SimpleTestCase):
    def test_bmm_conewise_normalization(self):
        MC = complex_of("bMM_cell")
        M_pq = MC.monoid("p-q")
        self.assertTrue(is_normal(M_pq))
        self.assertEqual(normalization(M_pq), ((0, 1), (2, 0)))
        self.assertEqual(conewise_normalize(MC).monoid("p-q").generators, ((0, 1), (1, 0)))
        self.assertTrue(is_seminormal_complex(MC))

    def test_normalization_exponents(self):
        self.assertEqual(normalization_exponents(complex_of("bMM_cell")), {"p": 2, "q": 1, "p-q": 2})
        self.assertEqual(set(normalization_exponents(complex_of("moebius")).values()), {1})

    def test_seminormalize_numerical_cell(self):
        MC = from_affine_semigroup(new_affine_semigroup([(2,), (3,)], 1))
        top = MC.poset.maximal_cells[0]
        plus = seminormalize_complex(MC)
        self.assertEqual(plus.monoid(top).generators, ((1,),))
        self.assertFalse(is_seminormal_complex(MC))
        self.assertTrue(is_seminormal_complex(plus))

    def test_seminormalize_idempotent_and_below_normalization(self):
        for MC in (
            from_affine_semigroup(new_affine_semigroup([(2,), (3,)], 1)),
            complex_of("bMM_cell"),
            complex_of("moebius"),
        ):
            plus = seminormalize_complex(MC)
            twice = seminormalize_complex(plus)
            tilde, tilde_of_plus = conewise_normalize(MC), conewise_normalize(plus)
            for c in MC.cells:
                if c == EMPTY:
                    continue
                with self.subTest(cell=c):
                    self.assertTrue(same_monoid(twice.monoid(c), plus.monoid(c)))
                    self.assertTrue(same_monoid(tilde_of_plus.monoid(c), tilde.monoid(c)))

    def test_moebius_is_conewise_normal(self):
        MC = complex_of("moebius")
        tilde = conewise_normalize(MC)
        self.assertTrue(is_seminormal_complex(MC))
        for c in MC.cells:
            if c != EMPTY:
                self.assertTrue(same_monoid(tilde.monoid(c), MC.monoid(c)), c)

    def test_bowtie_not_cohen_macaulay(self):
        MC = complex_of("bowtie")
        report = cm_probe(MC, "-3..3")
        self.assertEqual(
            sorted(w["degree"] for w in report.witnesses), ["-3:[1]", "-3:[2]", "-3:[3]"]
        )
        self.assertTrue(all(w["index"] == 2 for w in report.witnesses))

    def test_bowtie_cm_chain(self):
        report = cm_chain_report(complex_of("bowtie"), "-3..3")
        self.assertTrue(report.passed)
        for name in ("ring", "seminormalization", "conewise_normalization"):
            self.assertTrue(report.details[name])


class LocalCohomologyTests(SimpleTestCase):
    def test_moebius_duality(self):
        report = duality_check(complex_of("moebius"), "-2..2")
        self.assertTrue(report.passed, report.witnesses)
        self.assertGreater(report.details["degrees"], 1)

    def test_moebius_cm_chain(self):
        for fld in ("QQ", "GF(2)"):
            with self.subTest(field=fld):
                report = cm_chain_report(complex_of("moebius"), "-2..2", FieldSpec.parse(fld))
                self.assertTrue(report.passed)
                self.assertEqual(report.details["ring"], report.details["seminormalization"])
                self.assertEqual(report.details["ring"], report.details["conewise_normalization"])

    def test_numerical_comparison_with_seminormalization(self):
        M = new_affine_semigroup([(2,), (3,)], 1)
        MC = from_affine_semigroup(M)
        report = local_cohomology_comparison(MC, "-3..3")
        self.assertTrue(report.passed, report.witnesses)
        self.assertFalse(report.details["seminormal"])
        rows = {r["degree"]: r for r in report.details["negative_degrees"]}
        for a in (1, 2, 3):
            label = affine_degree(M, MC, (-a,)).label
            with self.subTest(a=-a):
                self.assertEqual(rows[label]["ring"].get(1), 1)
                self.assertEqual(rows[label]["seminormalization"].get(1), 1)
        self.assertEqual(
            report.details["extra_support"],
            [{"degree": affine_degree(M, MC, (1,)).label, "index": 1, "dimension": 1}],
        )


class SingleConeTests(SimpleTestCase):
    def test_matches_affine_ishida(self):
        for gens in ([(1, 0), (0, 1)], [(2, 0), (0, 1), (1, 1)]):
            M = new_affine_semigroup(gens, 2)
            MC = from_affine_semigroup(M)
            for a in Box.parse("0..2", 2).points():
                deg = affine_degree(M, MC, a)
                with self.subTest(gens=gens, a=a):
                    self.assertEqual(cohomology(ishida_slice(MC, deg)), cohomology(affine_ishida_slice(M, a)))
                    self.assertEqual(
                        cohomology(plus_ishida_slice(MC, deg)), cohomology(affine_plus_ishida_slice(M, a))
                    )

    def test_matches_affine_cech(self):
        M = new_affine_semigroup([(1, 0), (0, 1)], 2)
        MC = from_affine_semigroup(M)
        self.assertTrue(validate(MC).valid)
        for a in Box.parse("-2..2", 2).points():
            try:
                deg = affine_degree(M, MC, a)
            except NotInCone:
                continue
            with self.subTest(a=a):
                self.assertEqual(
                    cohomology(cech_slice(MC, deg)), cohomology(affine_cech_slice(M, a))
                )
