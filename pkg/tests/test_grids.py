import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nonlocal_sharp import Domain, boundary_distance, graded_mesh


class TestBoundaryDistance:
    def test_center(self):
        assert boundary_distance(0.5) == 0.5

    def test_boundary_point(self):
        assert boundary_distance(0.0) == 0.0
        assert boundary_distance(1.0) == 0.0

    def test_min_of_two_sides(self):
        assert boundary_distance(0.7) == pytest.approx(0.3, abs=1e-15)

    def test_outside_raises(self):
        with pytest.raises(ValueError):
            boundary_distance(-0.1)
        with pytest.raises(ValueError):
            boundary_distance(1.1)

    def test_vectorized(self):
        x = np.array([0.1, 0.5, 0.9])
        np.testing.assert_allclose(boundary_distance(x), [0.1, 0.5, 0.1])


class TestDomain:
    def test_phi_is_delta_power(self):
        dom = Domain()
        assert dom.phi(0.3, 0.5) == pytest.approx(0.3 ** 0.5, rel=1e-15)
        assert dom.delta(0.25) == 0.25


class TestGradedMesh:
    def test_uniform_cells(self):
        g = graded_mesh(8, 1.0)
        np.testing.assert_allclose(g.weights, 1.0 / 8, rtol=1e-15)
        expected_nodes = (2 * np.arange(1, 9) - 1) / 16.0
        np.testing.assert_allclose(g.nodes, expected_nodes, rtol=1e-15)
        assert g.is_uniform

    def test_first_boundary_quadratic_grading(self):
        # t_1 = (1/2) (2/8)^2 = 1/32
        g = graded_mesh(8, 2.0)
        assert g.boundaries[1] == pytest.approx(1.0 / 32.0, rel=1e-15)

    def test_partition_of_unity_and_symmetry(self):
        for n, beta in ((8, 1.0), (64, 2.0), (200, 3.0)):
            g = graded_mesh(n, beta)
            assert abs(g.weights.sum() - 1.0) < 1e-14
            refl = g.reflected()
            np.testing.assert_allclose(refl.nodes, g.nodes, rtol=0, atol=1e-15)
            np.testing.assert_allclose(refl.weights, g.weights, rtol=0, atol=1e-15)

    def test_beta_one_is_arithmetic_uniform(self):
        g = graded_mesh(64, 1.0)
        np.testing.assert_array_equal(g.boundaries, np.arange(65) / 64.0)

    def test_smallest_cell_scaling(self):
        # smallest width ~ n^-beta up to a factor 4
        for n in (64, 256, 1024, 4096):
            for beta in (1.0, 2.0, 3.0):
                w_min = graded_mesh(n, beta).weights.min()
                ratio = w_min * n ** beta
                assert 0.25 <= ratio <= 4.0, (n, beta, ratio)

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            graded_mesh(7, 1.0)
        with pytest.raises(ValueError):
            graded_mesh(4, 1.0)
        with pytest.raises(ValueError):
            graded_mesh(16, 0.5)

    @settings(max_examples=40, deadline=None)
    @given(n_half=st.integers(min_value=4, max_value=400),
           beta=st.floats(min_value=1.0, max_value=5.0))
    def test_mesh_invariants_property(self, n_half, beta):
        g = graded_mesh(2 * n_half, beta)
        assert abs(g.weights.sum() - 1.0) < 1e-12
        assert np.all(g.weights > 0)
        assert np.all(np.diff(g.nodes) > 0)
        assert 0.0 < g.nodes[0] and g.nodes[-1] < 1.0
        # nodes are cell midpoints
        np.testing.assert_allclose(
            g.nodes, 0.5 * (g.boundaries[:-1] + g.boundaries[1:]), rtol=0, atol=1e-15)
