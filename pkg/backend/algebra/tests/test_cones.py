# backend/algebra/tests/test_cones.py
from __future__ import annotations

from django.test import SimpleTestCase

from algebra.errors import NotInCone, NotPointed, ZeroGenerator
from algebra.services.cones import (
    carrier_face,
    cone_from_inequalities,
    cone_from_rays,
    face_lattice,
    hilbert_basis,
    incidence_function,
    placing_triangulation,
)
from algebra.services.lattice import IntMatrix, lattice_from_vectors

SQUARE = [(0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)]


def Z(d):
    return lattice_from_vectors(IntMatrix.identity(d).entries, d)


class ConeTests(SimpleTestCase):
    def test_redundant_ray_dropped(self):
        C = cone_from_rays([(1, 0), (0, 1), (1, 1)])
        self.assertEqual(C.rays, ((0, 1), (1, 0)))
        self.assertEqual(C.facet_normals, ((0, 1), (1, 0)))
        self.assertEqual(C.dim, 2)
        self.assertTrue(C.is_full_dimensional)

    def test_facet_normals_of_skew_cone(self):
        C = cone_from_rays([(2, 1), (1, 2)])
        self.assertEqual(set(C.facet_normals), {(-1, 2), (2, -1)})
        self.assertEqual(len(face_lattice(cone_from_rays([(1, 0, 0), (0, 1, 0), (0, 0, 1)])).faces), 8)

    def test_not_pointed(self):
        with self.assertRaises(NotPointed):
            cone_from_rays([(1, 0), (-1, 0), (0, 1)])

    def test_zero_ray(self):
        with self.assertRaises(ZeroGenerator):
            cone_from_rays([(0, 0)])

    def test_lower_dimensional_cone(self):
        C = cone_from_rays([(1, 0, 0), (1, 1, 0)])
        self.assertEqual(C.dim, 2)
        self.assertEqual(len(C.equations), 1)
        self.assertTrue(C.contains((2, 1, 0)))
        self.assertFalse(C.contains((2, 1, 1)))
        self.assertTrue(C.in_relative_interior((2, 1, 0)))
        self.assertFalse(C.in_relative_interior((1, 0, 0)))

    def test_from_inequalities(self):
        C = cone_from_inequalities([(1, 0), (0, 1)], [], 2)
        self.assertEqual(C.rays, ((0, 1), (1, 0)))
        ray = cone_from_inequalities([(1, 0), (0, 1)], [(1, -1)], 2)
        self.assertEqual(ray.rays, ((1, 1),))

    def test_grading_positive(self):
        C = cone_from_rays(SQUARE)
        for r in C.rays:
            self.assertGreater(sum(a * b for a, b in zip(C.grading, r)), 0)


class FaceLatticeTests(SimpleTestCase):
    def test_quadrant(self):
        FL = face_lattice(cone_from_rays([(1, 0), (0, 1)]))
        self.assertEqual([F.dim for F in FL.faces], [0, 1, 1, 2])
        self.assertEqual(FL.zero.rays, ())
        self.assertEqual(len(FL.covers[FL.full]), 2)
        self.assertEqual(len(incidence_function(FL)), 4)

    def test_square_cone(self):
        FL = face_lattice(cone_from_rays(SQUARE))
        self.assertEqual(len(FL.faces), 10)
        self.assertEqual(len(FL.faces_of_dim(1)), 4)
        self.assertEqual(len(FL.faces_of_dim(2)), 4)
        for F in FL.faces_of_dim(2):
            self.assertEqual(len(FL.covers[F]), 2)
            self.assertEqual(len(FL.cofaces[F]), 1)

    def test_two_step_sums_vanish(self):
        FL = face_lattice(cone_from_rays([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, -1)]))
        eps = incidence_function(FL)
        for F in FL.faces:
            for H in FL.faces:
                if H.dim != F.dim - 2 or not FL.leq(H, F):
                    continue
                total = sum(eps[(F, G)] * eps[(G, H)] for G in FL.covers[F] if FL.leq(H, G))
                self.assertEqual(total, 0)

    def test_carrier_face(self):
        C = cone_from_rays([(1, 0), (0, 1)])
        self.assertEqual(carrier_face(C, (3, 0)).rays, ((1, 0),))
        self.assertEqual(carrier_face(C, (0, 0)).dim, 0)
        self.assertEqual(carrier_face(C, (1, 2)).dim, 2)
        with self.assertRaises(NotInCone):
            carrier_face(C, (-1, 0))


class HilbertBasisTests(SimpleTestCase):
    def test_simplicial_cones(self):
        self.assertEqual(hilbert_basis(cone_from_rays([(1, 0), (1, 2)]), Z(2)), ((1, 0), (1, 1), (1, 2)))
        self.assertEqual(hilbert_basis(cone_from_rays([(1, 0), (2, 3)]), Z(2)), ((1, 0), (1, 1), (2, 3)))

    def test_sublattice(self):
        L = lattice_from_vectors([(2, 0), (0, 1)], 2)
        self.assertEqual(hilbert_basis(cone_from_rays([(1, 0), (0, 1)]), L), ((0, 1), (2, 0)))

    def test_square_cone_is_unimodular(self):
        self.assertEqual(hilbert_basis(cone_from_rays(SQUARE), Z(3)), tuple(sorted(SQUARE)))

    def test_lower_dimensional(self):
        C = cone_from_rays([(1, 0, 0), (1, 2, 0)])
        self.assertEqual(hilbert_basis(C, Z(3)), ((1, 0, 0), (1, 1, 0), (1, 2, 0)))

    def test_placing_triangulation_of_square(self):
        simplices = placing_triangulation([(0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 1)])
        self.assertEqual(len(simplices), 2)
        self.assertTrue(all(len(s) == 3 for s in simplices))
