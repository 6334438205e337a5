# backend/algebra/tests/test_semigroup.py
from __future__ import annotations

from django.test import SimpleTestCase

from algebra.errors import BoundTooSmall, DimensionMismatch, NotAFace, NotPositive, ZeroGenerator
from algebra.services.boxes import Box
from algebra.services.cones import cone_from_rays, face_lattice
from algebra.services.semigroup import (
    contains,
    decompose,
    face_monoid,
    in_localization,
    interior_degrees,
    is_normal,
    is_seminormal,
    new_affine_semigroup,
    normalization,
    plus_membership,
    same_monoid,
    seminormalization,
)


def face_with_rays(M, rays):
    return next(F for F in M.face_lattice.faces if F.rays == tuple(rays))


class ConstructionTests(SimpleTestCase):
    def test_generators_sorted_and_deduplicated(self):
        M = new_affine_semigroup([(1, 1), (2, 0), (0, 1), (2, 0)], 2)
        self.assertEqual(M.generators, ((0, 1), (1, 1), (2, 0)))
        self.assertEqual(M.dim, 2)

    def test_rejections(self):
        with self.assertRaises(NotPositive):
            new_affine_semigroup([(1,), (-1,)], 1)
        with self.assertRaises(ZeroGenerator):
            new_affine_semigroup([(0, 0), (1, 0)], 2)
        with self.assertRaises(DimensionMismatch):
            new_affine_semigroup([(1, 0, 0)], 2)


class MembershipTests(SimpleTestCase):
    def test_same_monoid_ignores_presentation(self):
        quadrant = new_affine_semigroup([(1, 0), (0, 1)], 2)
        self.assertTrue(same_monoid(new_affine_semigroup([(1, 1), (0, 1), (1, 0)], 2), quadrant))
        self.assertFalse(same_monoid(new_affine_semigroup([(2, 0), (0, 1), (1, 1)], 2), quadrant))
        self.assertFalse(same_monoid(new_affine_semigroup([(1,)], 1), quadrant))

    def test_numerical_semigroup(self):
        M = new_affine_semigroup([(2,), (3,)], 1)
        self.assertFalse(contains(M, (1,)))
        self.assertTrue(contains(M, (0,)))
        self.assertTrue(contains(M, (5,)))
        self.assertFalse(contains(M, (-2,)))
        cert = decompose(M, (7,))
        self.assertIsNotNone(cert)
        self.assertEqual(cert.evaluate(M), (7,))

    def test_plane_semigroup(self):
        M = new_affine_semigroup([(2, 0), (0, 1), (1, 1)], 2)
        self.assertFalse(contains(M, (1, 0)))
        self.assertTrue(contains(M, (3, 1)))
        self.assertTrue(contains(M, (4, 0)))
        self.assertFalse(contains(M, (3, 0)))

    def test_face_monoid(self):
        M = new_affine_semigroup([(2, 0), (0, 1), (1, 1)], 2)
        Fx = face_with_rays(M, [(1, 0)])
        self.assertEqual(face_monoid(M, Fx).generators, ((2, 0),))
        other = cone_from_rays([(1, 0), (1, 1)])
        foreign = face_lattice(other).faces_of_dim(1)[0]
        with self.assertRaises(NotAFace):
            face_monoid(M, foreign)


class NormalizationTests(SimpleTestCase):
    def test_seminormal_not_normal(self):
        M = new_affine_semigroup([(2, 0), (0, 1), (1, 1)], 2)
        self.assertEqual(normalization(M), ((0, 1), (1, 0)))
        self.assertFalse(is_normal(M))
        self.assertEqual(seminormalization(M, 8), ((0, 1), (1, 1), (2, 0)))
        self.assertTrue(is_seminormal(M, 8))

    def test_numerical_2_3(self):
        M = new_affine_semigroup([(2,), (3,)], 1)
        self.assertEqual(seminormalization(M, 8), ((1,),))
        self.assertFalse(is_seminormal(M, 8))
        self.assertTrue(plus_membership(M, (1,)))
        self.assertFalse(plus_membership(M, (-1,)))

    def test_normal_short_circuit(self):
        M = new_affine_semigroup([(1, 0), (0, 1)], 2)
        self.assertTrue(is_normal(M))
        self.assertTrue(is_normal(new_affine_semigroup([(1, 0), (1, 2)], 2)))
        self.assertEqual(seminormalization(M, 1), normalization(M))

    def test_bound_too_small(self):
        M = new_affine_semigroup([(6, 0), (0, 1), (1, 1)], 2)
        with self.assertRaises(BoundTooSmall):
            seminormalization(M, 1, verify_factor=4)
        self.assertEqual(
            seminormalization(M, 6, verify_factor=4),
            ((0, 1), (1, 1), (2, 1), (3, 1), (4, 1), (5, 1), (6, 0)),
        )

    def test_interior_degrees(self):
        M = new_affine_semigroup([(1, 0), (0, 1)], 2)
        self.assertEqual(
            interior_degrees(M, Box.parse("0..2", 2)), [(1, 1), (1, 2), (2, 1), (2, 2)]
        )


class LocalizationTests(SimpleTestCase):
    def test_numerical(self):
        M = new_affine_semigroup([(2,), (3,)], 1)
        zero, full = M.face_lattice.zero, M.face_lattice.full
        self.assertFalse(in_localization(M, zero, (1,)))
        self.assertTrue(in_localization(M, zero, (5,)))
        self.assertTrue(in_localization(M, full, (-1,)))

    def test_face_cosets(self):
        M = new_affine_semigroup([(2, 0), (0, 1), (1, 1)], 2)
        Fx = face_with_rays(M, [(1, 0)])
        Fy = face_with_rays(M, [(0, 1)])
        self.assertTrue(in_localization(M, Fy, (1, -5)))
        self.assertFalse(in_localization(M, Fy, (-1, 0)))
        self.assertFalse(in_localization(M, Fx, (1, 0)))
        self.assertTrue(in_localization(M, Fx, (-3, 1)))

    def test_unresolved_when_bound_hit(self):
        M = new_affine_semigroup([(6, 0), (0, 1), (1, 1)], 2)
        Fx = face_with_rays(M, [(1, 0)])
        self.assertIsNone(in_localization(M, Fx, (1, 2), bound=1))
        self.assertTrue(in_localization(M, Fx, (1, 2), bound=3))
