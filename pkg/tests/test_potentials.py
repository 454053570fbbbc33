import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from coulomb_crossover.errors import FamilyMismatch, RangeError, SingularPoint
from coulomb_crossover.potentials import PotentialSpec, eval_1d, eval_2d, radial_parameters

H = 1e-5


def _fd_2d(spec, z, h=H):
    """Wirtinger gradient and Laplacian of Q by central differences."""
    q = lambda w: eval_2d(spec, w).value
    dx = (q(z + h) - q(z - h)) / (2 * h)
    dy = (q(z + 1j * h) - q(z - 1j * h)) / (2 * h)
    dxx = (q(z + h) - 2 * q(z) + q(z - h)) / h**2
    dyy = (q(z + 1j * h) - 2 * q(z) + q(z - 1j * h)) / h**2
    return 0.5 * (dx - 1j * dy), 0.25 * (dxx + dyy)


FAMILIES_2D = [
    PotentialSpec.gaussian_2d(),
    PotentialSpec.radial_monomial(1.0),
    PotentialSpec.radial_monomial(2.0),
    PotentialSpec.radial_monomial(1.5, strength=2.0),
    PotentialSpec.elliptic_ginibre(0.5),
    PotentialSpec.elliptic_ginibre(0.95),
]


class TestExamples:
    def test_gaussian_2d(self):
        ev = eval_2d(PotentialSpec.gaussian_2d(), 1 + 1j)
        assert ev.value == 2.0
        assert ev.grad_z == 1 - 1j
        assert ev.grad_zbar == 1 + 1j
        assert ev.laplacian == 1.0

    def test_quartic_freud(self):
        spec = PotentialSpec.radial_monomial(2.0)
        ev = eval_2d(spec, 1.0)
        assert ev.value == pytest.approx(0.5)
        assert ev.laplacian == pytest.approx(2.0)
        h = 1e-4
        _, lap = _fd_2d(spec, np.complex128(1.0), h)
        assert lap == pytest.approx(2.0, rel=1e-6)

    def test_elliptic(self):
        ev = eval_2d(PotentialSpec.elliptic_ginibre(0.5), 1.0)
        assert ev.value == pytest.approx(2.0 / 3.0, rel=1e-15)

    @pytest.mark.parametrize("a,x,value,deriv", [(0.0, 2.0, 2.0, 2.0), (0.5, 1.0, 0.5, 0.5), (-0.5, -1.0, 0.5, -1.5)])
    def test_eval_1d(self, a, x, value, deriv):
        v, d = eval_1d(PotentialSpec.gaussian_log_1d(a), x)
        assert v == pytest.approx(value, abs=1e-15)
        assert d == pytest.approx(deriv, abs=1e-15)


class TestProperties:
    @pytest.mark.parametrize("spec", FAMILIES_2D, ids=lambda s: str(s.to_dict()))
    def test_gradient_consistency(self, spec):
        rng = np.random.default_rng(3)
        z = rng.uniform(0.2, 2.0, 50) * np.exp(1j * rng.uniform(-math.pi, math.pi, 50))
        ev = eval_2d(spec, z)
        grad, lap = _fd_2d(spec, z)
        np.testing.assert_allclose(ev.grad_z, grad, rtol=1e-6)
        np.testing.assert_array_equal(ev.grad_zbar, np.conj(ev.grad_z))
        # the second difference at h = 1e-5 carries ~1e-6 rounding
        np.testing.assert_allclose(ev.laplacian, lap, rtol=1e-4)

    def test_laplacian_second_order(self):
        spec = PotentialSpec.radial_monomial(1.5)
        z = np.complex128(0.7 + 0.4j)
        exact = eval_2d(spec, z).laplacian
        errs = [abs(_fd_2d(spec, z, h)[1] - exact) for h in (1e-2, 5e-3)]
        assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.05)

    @pytest.mark.parametrize("a", [0.0, 0.5, -0.5, 2.0])
    def test_gradient_consistency_1d(self, a):
        spec = PotentialSpec.gaussian_log_1d(a)
        x = np.linspace(0.3, 3.0, 25) * np.where(np.arange(25) % 2, 1, -1)
        _, d = eval_1d(spec, x)
        fd = (eval_1d(spec, x + H)[0] - eval_1d(spec, x - H)[0]) / (2 * H)
        np.testing.assert_allclose(d, fd, rtol=1e-6)

    @given(st.sampled_from(FAMILIES_2D[:4]), st.floats(0.0, 5.0), st.floats(-math.pi, math.pi))
    def test_radial_theta_independence(self, spec, r, theta):
        ref = eval_2d(spec, r)
        ev = eval_2d(spec, r * np.exp(1j * theta))
        assert abs(ev.value - ref.value) <= 1e-14 * max(1.0, abs(ref.value))
        assert abs(ev.laplacian - ref.laplacian) <= 1e-14 * max(1.0, abs(ref.laplacian))
        assert abs(abs(ev.grad_z) - abs(ref.grad_z)) <= 1e-14 * max(1.0, abs(ref.grad_z))

    def test_elliptic_tau_to_zero(self):
        z = np.array([0.0, 1 + 1j, -0.3 + 2j, 4 - 1j])
        base = eval_2d(PotentialSpec.gaussian_2d(), z)
        for tau in (1e-4, 1e-8, 1e-12):
            ev = eval_2d(PotentialSpec.elliptic_ginibre(tau), z)
            np.testing.assert_allclose(ev.value, base.value, rtol=0, atol=50 * tau)
            np.testing.assert_allclose(ev.laplacian, base.laplacian, rtol=0, atol=2 * tau)


class TestErrors:
    def test_family_mismatch(self):
        with pytest.raises(FamilyMismatch):
            eval_2d(PotentialSpec.gaussian_log_1d(0.0), 1.0)
        with pytest.raises(FamilyMismatch):
            eval_1d(PotentialSpec.gaussian_2d(), 1.0)
        with pytest.raises(FamilyMismatch):
            radial_parameters(PotentialSpec.elliptic_ginibre(0.3))

    def test_singular_point(self):
        with pytest.raises(SingularPoint):
            eval_1d(PotentialSpec.gaussian_log_1d(0.5), np.array([1.0, 0.0]))
        v, d = eval_1d(PotentialSpec.gaussian_log_1d(0.0), 0.0)
        assert v == 0.0 and d == 0.0

    @pytest.mark.parametrize("make", [
        lambda: PotentialSpec.radial_monomial(0.5),
        lambda: PotentialSpec.radial_monomial(1.0, strength=0.0),
        lambda: PotentialSpec.elliptic_ginibre(1.0),
        lambda: PotentialSpec.elliptic_ginibre(0.0),
        lambda: PotentialSpec.gaussian_log_1d(-1.0),
    ])
    def test_ranges(self, make):
        with pytest.raises(RangeError):
            make()

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            PotentialSpec("hard_wall")

    @pytest.mark.parametrize("spec", FAMILIES_2D + [PotentialSpec.gaussian_log_1d(0.3)])
    def test_dict_round_trip(self, spec):
        assert PotentialSpec.from_dict(spec.to_dict()) == spec
