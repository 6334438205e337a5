# backend/algebra/tests/test_properties.py
"""Propriétés vérifiées sur des cônes et semigroupes tirés au hasard (graine fixe)."""
from __future__ import annotations

import random

from django.test import SimpleTestCase

from algebra.services.boxes import Box
from algebra.services.cones import check_two_step, cone_from_rays, face_lattice, hilbert_basis
from algebra.services.complexes import SliceKind, build_slice
from algebra.services.lattice import IntMatrix, lattice_from_vectors, vsub
from algebra.services.semigroup import contains, new_affine_semigroup, plus_membership

SEED = 20240611


def random_rays(rng, d, count, spread=2):
    """Vecteurs de Z^d à dernière coordonnée ≥ 1 : le cône engendré est pointé."""
    return [
        tuple(rng.randint(-spread, spread) for _ in range(d - 1)) + (rng.randint(1, 3),)
        for _ in range(count)
    ]


def reachable(gens, top):
    """Points de [0, top]^2 atteints en sommant des générateurs positifs."""
    seen = {(0, 0)}
    todo = [(0, 0)]
    while todo:
        p = todo.pop()
        for g in gens:
            q = (p[0] + g[0], p[1] + g[1])
            if q[0] <= top and q[1] <= top and q not in seen:
                seen.add(q)
                todo.append(q)
    return seen


class FaceLatticePropertyTests(SimpleTestCase):
    def test_two_step_on_random_cones(self):
        rng = random.Random(SEED)
        for n in range(100):
            d = rng.choice((2, 3, 3, 4))
            rays = random_rays(rng, d, rng.randint(1, d + 2))
            with self.subTest(n=n, rays=rays):
                FL = face_lattice(cone_from_rays(rays, d))
                check_two_step(FL.incidence, FL.covers)
                self.assertEqual(FL.full.dim, FL.cone.dim)
                self.assertEqual(FL.zero.dim, 0)


class HilbertBasisPropertyTests(SimpleTestCase):
    def test_against_box_enumeration(self):
        rng = random.Random(SEED + 1)
        for n in range(30):
            d = rng.choice((2, 3))
            C = cone_from_rays(random_rays(rng, d, rng.randint(2, d + 1)), d)
            H = hilbert_basis(C, lattice_from_vectors(IntMatrix.identity(d).entries, d))
            with self.subTest(n=n, rays=C.rays):
                for h in H:
                    for k in H:
                        if h != k:
                            self.assertFalse(C.contains(vsub(h, k)))
                N = new_affine_semigroup(H, d)
                for p in Box.cube(3, d).points():
                    if C.contains(p):
                        self.assertTrue(contains(N, p), p)


class MembershipPropertyTests(SimpleTestCase):
    def test_contains_matches_reachability(self):
        rng = random.Random(SEED + 2)
        for n in range(20):
            gens = set()
            size = rng.randint(1, 3)
            while len(gens) < size:
                g = (rng.randint(0, 3), rng.randint(0, 3))
                if any(g):
                    gens.add(g)
            gens = sorted(gens)
            M = new_affine_semigroup(gens, 2)
            dp = reachable(gens, 6)
            with self.subTest(n=n, gens=gens):
                for p in Box.parse("0..6", 2).points():
                    self.assertEqual(contains(M, p), p in dp, p)

    def test_semigroup_inside_seminormalization_inside_normalization(self):
        rng = random.Random(SEED + 3)
        for n in range(20):
            gens = [(rng.randint(0, 4), rng.randint(0, 4)) for _ in range(3)]
            gens = [g for g in gens if any(g)] or [(1, 1)]
            M = new_affine_semigroup(gens, 2)
            with self.subTest(n=n, gens=M.generators):
                for p in Box.parse("-1..6", 2).points():
                    if contains(M, p):
                        self.assertTrue(plus_membership(M, p), p)
                    if plus_membership(M, p):
                        self.assertTrue(M.cone.contains(p) and M.group.contains(p), p)

    def test_random_slices_square_to_zero(self):
        rng = random.Random(SEED + 4)
        for n in range(10):
            gens = [(rng.randint(0, 3), rng.randint(1, 3)) for _ in range(3)]
            M = new_affine_semigroup(gens, 2)
            for a in Box.parse("-2..2", 2).points():
                for kind in SliceKind:
                    with self.subTest(n=n, a=a, kind=kind.value):
                        V = build_slice(M, kind, a, 8)
                        if not V.unresolved:
                            self.assertTrue(V.squares_to_zero())
