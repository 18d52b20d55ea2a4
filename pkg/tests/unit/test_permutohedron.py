"""
Unit tests for core.permutohedron module.
"""

import itertools
import math
import unittest

import numpy as np

from morseframe.core.exceptions import InputError, PreconditionError
from morseframe.core.permutohedron import (
    OrderedPartition,
    boundary_margin,
    count_faces,
    membership,
    open_face_of,
    ordered_partitions,
    partition_from_values,
    refines,
    vertex,
    vertices,
)


def one_based(*blocks):
    return OrderedPartition.from_one_based(blocks)


class TestOrderedPartition(unittest.TestCase):
    """Test cases for OrderedPartition."""

    def test_blocks_are_sorted(self):
        partition = OrderedPartition(((2, 0), (1,)), 3)

        self.assertEqual(partition.blocks, ((0, 2), (1,)))
        self.assertEqual(partition.ranks, (2, 3))
        self.assertEqual(partition.dimension, 1)
        self.assertEqual(partition.order, (0, 2, 1))

    def test_invalid_partitions(self):
        with self.assertRaises(InputError):
            OrderedPartition(((0,), ()), 1)
        with self.assertRaises(InputError):
            OrderedPartition(((0,), (0, 1)), 2)
        with self.assertRaises(InputError):
            OrderedPartition(((0, 2),), 2)

    def test_one_based_round_trip(self):
        partition = one_based([2], [1, 3])

        self.assertEqual(partition.blocks, ((1,), (0, 2)))
        self.assertEqual(partition.to_one_based(), [[2], [1, 3]])
        self.assertEqual(str(partition), "({2},{1,3})")

    def test_block_of(self):
        partition = one_based([2], [1, 3])

        self.assertEqual(partition.block_of(0), 1)
        self.assertEqual(partition.block_of(1), 0)
        with self.assertRaises(InputError):
            partition.block_of(5)

    def test_coarsen(self):
        partition = one_based([1], [2], [3], [4])

        self.assertEqual(partition.coarsen([2, 4]), one_based([1, 2], [3, 4]))
        self.assertEqual(partition.coarsen([4]), one_based([1, 2, 3, 4]))
        with self.assertRaises(InputError):
            partition.coarsen([3])


class TestVertices(unittest.TestCase):
    """Test cases for vertex() and vertices()."""

    def test_identity_q3(self):
        self.assertEqual(vertex([0, 1, 2]).coords, (-1.0, 0.0, 1.0))

    def test_single_point(self):
        self.assertEqual(vertex([0]).coords, (0.0,))

    def test_swap_q2(self):
        self.assertEqual(vertex([1, 0]).coords, (0.5, -0.5))

    def test_invalid_permutation(self):
        with self.assertRaises(InputError):
            vertex([0, 0, 1])
        with self.assertRaises(InputError):
            vertex([])

    def test_vertices_lie_on_hyperplane(self):
        for q in range(1, 6):
            verts = vertices(q, 0.7)
            self.assertEqual(len(verts), int(np.prod(range(1, q + 1))))
            for point in verts:
                self.assertAlmostEqual(sum(point.coords), 0.0, places=12)
                self.assertTrue(membership(point.coords, 0.7))

    def test_scaled_vertex_is_vertex_face(self):
        for rho in itertools.permutations(range(4)):
            point = vertex(rho).scaled(0.3)
            face = open_face_of(point.coords, 0.3)
            self.assertEqual(face.s, 4)
            self.assertEqual(
                [block[0] for block in face.blocks],
                list(np.argsort(point.coords)),
            )


class TestPartitionFromValues(unittest.TestCase):
    """Test cases for partition_from_values()."""

    def test_exact_ties(self):
        self.assertEqual(
            partition_from_values([0.3, -0.1, 0.3], 0.0), one_based([2], [1, 3])
        )

    def test_all_equal(self):
        self.assertEqual(partition_from_values([0.0] * 4), one_based([1, 2, 3, 4]))

    def test_two_values(self):
        self.assertEqual(partition_from_values([0.5, -0.5]), one_based([2], [1]))

    def test_tolerance_groups_near_ties(self):
        partition = partition_from_values([0.1, 0.1 + 1e-12, -0.2], tie_tol=1e-9)

        self.assertEqual(partition, one_based([3], [1, 2]))

    def test_empty_or_non_finite(self):
        with self.assertRaises(InputError):
            partition_from_values([])
        with self.assertRaises(InputError):
            partition_from_values([0.0, float("nan")])


class TestMembership(unittest.TestCase):
    """Test cases for membership(), boundary_margin() and open_face_of()."""

    def test_segment_vertex(self):
        self.assertTrue(membership([0.1, -0.1], 0.2))

    def test_outside_segment(self):
        self.assertFalse(membership([0.11, -0.11], 0.2))

    def test_hexagon_vertex(self):
        self.assertTrue(membership([-1.0, 0.0, 1.0], 1.0))

    def test_off_hyperplane(self):
        self.assertFalse(membership([0.1, 0.0], 1.0))

    def test_non_positive_kappa(self):
        with self.assertRaises(InputError):
            membership([0.0, 0.0], 0.0)
        with self.assertRaises(InputError):
            membership([0.0, 0.0], -1.0)

    def test_boundary_margin_sign(self):
        self.assertGreater(boundary_margin([0.0, 0.0, 0.0], 1.0), 0.0)
        self.assertAlmostEqual(boundary_margin([-1.0, 0.0, 1.0], 1.0), 0.0)
        self.assertLess(boundary_margin([-2.0, 0.0, 2.0], 1.0), 0.0)

    def test_open_face_interior(self):
        self.assertEqual(open_face_of([0.0, 0.0], 1.0), one_based([1, 2]))

    def test_open_face_vertex(self):
        self.assertEqual(open_face_of([0.5, -0.5], 1.0), one_based([2], [1]))
        self.assertEqual(
            open_face_of([-1.0, 0.0, 1.0], 1.0), one_based([1], [2], [3])
        )

    def test_open_face_edge(self):
        # midpoint of the edge between (-1, 0, 1) and (0, -1, 1)
        face = open_face_of([-0.5, -0.5, 1.0], 1.0)

        self.assertEqual(face, one_based([1, 2], [3]))
        self.assertEqual(face.dimension, 1)

    def test_open_face_outside(self):
        with self.assertRaises(PreconditionError):
            open_face_of([2.0, -2.0], 1.0)

    def test_face_sum_matches_vertex_face_sum(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            q = int(rng.integers(1, 6))
            rho = rng.permutation(q)
            weights = rng.dirichlet(np.ones(2))
            first = np.asarray(vertex(rho).coords)
            second = np.asarray(vertex(np.arange(q)).coords)
            point = weights[0] * first + weights[1] * second
            face = open_face_of(point, 1.0)
            members = []
            for block in face.blocks[:-1]:
                members.extend(block)
                m = len(members)
                self.assertLessEqual(
                    abs(point[members].sum() - m * (m - q) / 2.0), 1e-9
                )

    def test_membership_matches_all_subset_constraints(self):
        # every nonempty proper subset S needs sum(c[S]) >= kappa |S| (|S| - q) / 2
        rng = np.random.default_rng(11)
        tol = 1e-9
        for q in range(1, 6):
            kappa = float(rng.uniform(0.1, 2.0))
            corners = np.array([v.coords for v in vertices(q, kappa)])
            subsets = [
                list(s)
                for size in range(1, q)
                for s in itertools.combinations(range(q), size)
            ]
            verdicts = set()
            for _ in range(1000):
                mix = rng.dirichlet(np.full(len(corners), 0.1)) @ corners
                point = mix * rng.uniform(0.5, 1.5) + rng.normal(0.0, 0.05 * kappa, q)
                point -= point.mean()
                if rng.random() < 0.1:
                    point[0] += rng.normal(0.0, 1e-3)
                expected = abs(point.sum()) <= tol and all(
                    point[s].sum() >= kappa * len(s) * (len(s) - q) / 2.0 - tol
                    for s in subsets
                )
                self.assertEqual(membership(point, kappa, tol), expected, msg=point)
                verdicts.add(expected)
            if q > 1:
                self.assertEqual(verdicts, {True, False})

    def test_convex_combinations_of_all_vertices(self):
        rng = np.random.default_rng(13)
        for q in (3, 4, 5):
            corners = np.array([v.coords for v in vertices(q, 0.7)])
            for _ in range(100):
                point = rng.dirichlet(np.full(len(corners), 0.3)) @ corners

                self.assertTrue(membership(point, 0.7))
                self.assertGreaterEqual(boundary_margin(point, 0.7), -1e-9)


class TestRefines(unittest.TestCase):
    """Test cases for refines()."""

    def test_split_refines(self):
        self.assertTrue(refines(one_based([2], [1, 3]), one_based([1, 2, 3])))

    def test_merge_does_not_refine(self):
        self.assertFalse(refines(one_based([1, 2, 3]), one_based([2], [1, 3])))

    def test_reflexive(self):
        partition = one_based([2], [1, 3])

        self.assertTrue(refines(partition, partition))

    def test_order_matters(self):
        self.assertFalse(refines(one_based([1], [2], [3]), one_based([2, 3], [1])))

    def test_different_ground_sets(self):
        self.assertFalse(refines(one_based([1], [2]), one_based([1, 2, 3])))

    def test_vertices_refine_all_coarsenings(self):
        fine = one_based([3], [1], [4], [2])
        for cuts in ([4], [1, 4], [2, 4], [3, 4], [1, 2, 4], [1, 3, 4]):
            self.assertTrue(refines(fine, fine.coarsen(cuts)))

    def test_antisymmetric(self):
        for q in range(1, 5):
            faces = list(ordered_partitions(q))
            for a, b in itertools.product(faces, repeat=2):
                if refines(a, b) and refines(b, a):
                    self.assertEqual(a, b)

    def test_transitive(self):
        faces = list(ordered_partitions(3))
        for a, b, c in itertools.product(faces, repeat=3):
            if refines(a, b) and refines(b, c):
                self.assertTrue(refines(a, c), msg=(a, b, c))

    def test_vertices_below_a_face(self):
        # the vertices of the face J are the orderings inside each block
        faces = list(ordered_partitions(4))
        for face in faces:
            below = [f for f in faces if f.s == 4 and refines(f, face)]
            expected = math.prod(math.factorial(size) for size in face.sizes)
            self.assertEqual(len(below), expected, msg=face)


class TestEnumeration(unittest.TestCase):
    """Test cases for ordered_partitions() and count_faces()."""

    def test_ordered_bell_numbers(self):
        for q, expected in [(1, 1), (2, 3), (3, 13), (4, 75), (5, 541)]:
            self.assertEqual(count_faces(q), expected)
            self.assertEqual(sum(1 for _ in ordered_partitions(q)), expected)

    def test_partitions_are_distinct(self):
        faces = list(ordered_partitions(4))

        self.assertEqual(len(set(faces)), len(faces))

    def test_invalid_size(self):
        with self.assertRaises(InputError):
            list(ordered_partitions(0))


if __name__ == "__main__":
    unittest.main()
