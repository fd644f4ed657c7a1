"""Catalog space evaluators, element operations, and the randomized checkers."""

import numpy as np
import pytest

from matnorm import (
    InvalidInputError,
    c_max,
    c_min,
    check_axioms,
    check_p_convexity,
    concrete_operator_space,
    contractive_functional,
    element_direct_sum,
    functional_amplification,
    l1_component,
    l1_embed,
    l1_sum,
    operator_norm,
    pad,
    planted_fault_space,
    random_element,
    random_unitary,
    scalar_action,
    space_from_id,
    basis_element,
)


def gauss(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


class TestScalarSpaces:
    def test_cmin_values(self):
        sp = c_min()
        assert sp.norm([[5.0]]) == pytest.approx(5.0)
        assert sp.norm(np.eye(2)) == pytest.approx(1.0)
        # all-ones matrix has singular values (2, 0)
        assert sp.norm(np.ones((2, 2))) == pytest.approx(2.0, abs=1e-12)

    def test_cmax_values(self):
        sp = c_max()
        assert sp.norm([[-2.0]]) == pytest.approx(2.0)
        assert sp.norm(np.eye(2)) == pytest.approx(2.0)
        assert sp.norm(np.ones((2, 2))) == pytest.approx(2.0, abs=1e-12)


class TestOperatorSpace:
    def test_basis_and_identity(self):
        sp = concrete_operator_space(2)
        assert sp.norm(basis_element(sp, 0)) == pytest.approx(1.0)
        eye_coords = np.zeros((2, 2, 4), dtype=complex)
        eye_coords[0, 0] = np.eye(2).reshape(-1)
        eye_coords[1, 1] = np.eye(2).reshape(-1)
        assert sp.norm(eye_coords) == pytest.approx(1.0, abs=1e-12)

    def test_level2_matches_direct_assembly(self):
        rng = np.random.default_rng(4)
        k = 3
        sp = concrete_operator_space(k)
        u = random_element(sp, 2, rng)
        blocks = u.coords.reshape(2, 2, k, k)
        assembled = np.block([[blocks[0, 0], blocks[0, 1]], [blocks[1, 0], blocks[1, 1]]])
        assert sp.norm(u) == pytest.approx(operator_norm(assembled), abs=1e-9)


class TestL1Sum:
    def test_singleton_matches_part(self):
        rng = np.random.default_rng(1)
        part = c_min()
        sp = l1_sum([part])
        for level in (1, 2, 3):
            u = random_element(sp, level, rng)
            assert sp.norm(u) == pytest.approx(part.norm(u.coords), abs=1e-12)

    def test_scalar_pair(self):
        sp = l1_sum([c_max(), c_max()])
        assert sp.norm(np.ones((1, 1, 2))) == pytest.approx(2.0)

    def test_mixed_identity_components(self):
        sp = l1_sum([c_min(), c_max()])
        coords = np.zeros((2, 2, 2), dtype=complex)
        coords[:, :, 0] = np.eye(2)
        coords[:, :, 1] = np.eye(2)
        assert sp.norm(coords) == pytest.approx(3.0, abs=1e-12)

    def test_component_embed_roundtrip(self):
        rng = np.random.default_rng(2)
        sp = l1_sum([c_min(), concrete_operator_space(2)])
        x = random_element(sp.parts[1], 2, rng)
        emb = l1_embed(sp, x, 1)
        np.testing.assert_array_equal(l1_component(sp, emb, 1).coords, x.coords)
        assert sp.norm(emb) == pytest.approx(sp.parts[1].norm(x), abs=1e-12)

    def test_empty_rejected(self):
        with pytest.raises(InvalidInputError):
            l1_sum([])


class TestSpaceIds:
    def test_roundtrip(self):
        for sid in ("cmin", "cmax", "op:3", "l1:[cmax,cmax]", "l1:[cmin,l1:[cmax,op:2]]"):
            assert space_from_id(sid).space_id == sid

    def test_unknown_rejected(self):
        for sid in ("bogus", "op:x", "l1:[]", "l1:[nope]"):
            with pytest.raises(InvalidInputError):
                space_from_id(sid)


class TestElementOps:
    def test_scalar_action_identity(self):
        rng = np.random.default_rng(3)
        sp = concrete_operator_space(2)
        u = random_element(sp, 3, rng)
        out = scalar_action(np.eye(3), u, np.eye(3))
        np.testing.assert_allclose(out.coords, u.coords, atol=1e-15)

    def test_unitary_invariance(self):
        rng = np.random.default_rng(4)
        for sp in (c_min(), c_max(), concrete_operator_space(2), l1_sum([c_min(), c_max()])):
            u = random_element(sp, 3, rng)
            s = random_unitary(3, rng)
            t = random_unitary(3, rng)
            assert sp.norm(scalar_action(s, u, t)) == pytest.approx(sp.norm(u), abs=1e-9)

    def test_homogeneity_via_scaled_identity(self):
        rng = np.random.default_rng(5)
        sp = c_max()
        u = random_element(sp, 2, rng)
        doubled = scalar_action(2.0 * np.eye(2), u, np.eye(2))
        assert sp.norm(doubled) == pytest.approx(2.0 * sp.norm(u), abs=1e-9)

    def test_pad(self):
        sp = c_max()
        one = sp.element([1.0])
        assert pad(one, 0) is one
        assert sp.norm(pad(one, 3)) == pytest.approx(1.0, abs=1e-12)
        rng = np.random.default_rng(6)
        op = concrete_operator_space(2)
        u = random_element(op, 2, rng)
        assert op.norm(pad(u, 2)) == pytest.approx(op.norm(u), abs=1e-9)

    def test_direct_sum_levels(self):
        sp = c_max()
        a = sp.element([1.0])
        b = sp.element(np.eye(2))
        combined = element_direct_sum([a, b])
        assert combined.level == 3
        assert sp.norm(combined) == pytest.approx(3.0, abs=1e-12)


class TestNormProperties:
    @pytest.mark.parametrize("sid", ["cmin", "cmax", "op:2", "l1:[cmin,cmax]"])
    def test_homogeneity_triangle_definiteness(self, sid):
        sp = space_from_id(sid)
        rng = np.random.default_rng(42)
        for level in (1, 2, 3):
            u = random_element(sp, level, rng)
            v = random_element(sp, level, rng)
            lam = complex(*rng.standard_normal(2))
            scaled = type(u)(u.space_id, lam * u.coords)
            assert sp.norm(scaled) == pytest.approx(abs(lam) * sp.norm(u), abs=1e-9)
            added = type(u)(u.space_id, u.coords + v.coords)
            assert sp.norm(added) <= sp.norm(u) + sp.norm(v) + 1e-9
        for idx in range(sp.dim):
            assert sp.norm(basis_element(sp, idx)) > 0.0


class TestAxiomChecker:
    @pytest.mark.parametrize("sid", ["cmin", "cmax", "op:2", "l1:[cmax,cmax]"])
    def test_catalog_passes(self, sid):
        rep = check_axioms(space_from_id(sid), trials=300, seed=8, max_level=3)
        assert rep.axiom1_max_violation <= 1e-9
        assert rep.axiom2_max_violation <= 1e-9

    def test_planted_fault_detected(self):
        rep = check_axioms(planted_fault_space(), trials=100, seed=8, max_level=2)
        assert rep.axiom1_max_violation >= 0.09
        assert rep.worst_case_inputs["axiom1"] is not None


class TestPConvexity:
    def test_operator_spaces_convex_for_all_p(self):
        for p in (1.0, 1.5, 2.0, 10.0):
            rep = check_p_convexity(c_min(), p, trials=300, seed=9)
            assert rep.max_violation <= 1e-9

    def test_trace_scalars_additive(self):
        rep = check_p_convexity(c_max(), 1.0, trials=300, seed=9)
        assert rep.max_violation <= 1e-9

    def test_trace_scalars_break_p2(self):
        # two copies of the unit scalar: combined norm 2 against sqrt(2)
        rep = check_p_convexity(c_max(), 2.0, trials=50, seed=9)
        assert rep.max_violation >= 2.0 - np.sqrt(2.0) - 1e-9
        assert rep.witness is not None


class TestContractiveFunctionals:
    @pytest.mark.parametrize("sid", ["cmax", "op:2", "op:3", "l1:[cmax,op:2]"])
    def test_amplifications_stay_contractive(self, sid):
        sp = space_from_id(sid)
        rng = np.random.default_rng(10)
        for trial in range(200):
            f = contractive_functional(sp, rng)
            v = random_element(sp, 1 + trial % 3, rng)
            assert operator_norm(functional_amplification(f, v)) <= sp.norm(v) + 1e-9

    def test_level1_contractivity(self):
        sp = concrete_operator_space(3)
        rng = np.random.default_rng(11)
        for _ in range(100):
            f = contractive_functional(sp, rng)
            x = random_element(sp, 1, rng)
            assert abs(functional_amplification(f, x)[0, 0]) <= sp.norm(x) + 1e-12


class TestValidation:
    def test_element_shape_errors(self):
        sp = concrete_operator_space(2)
        with pytest.raises(InvalidInputError):
            sp.element(np.zeros((2, 3, 4)))
        with pytest.raises(InvalidInputError):
            sp.element(np.zeros((2, 2, 3)))
        with pytest.raises(InvalidInputError):
            sp.element(np.full((1, 1, 4), np.nan))

    def test_cross_space_norm_rejected(self):
        u = c_min().element([1.0])
        with pytest.raises(InvalidInputError):
            c_max().norm(u)
