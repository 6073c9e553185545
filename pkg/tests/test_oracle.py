"""Quadrature distances checked against closed-form Gaussian values."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import lecamjd as lj
from lecamjd.laws import Density


def atom_plus_gaussian(atom_loc: float, atom_mass: float) -> Density:
    base = lj.gaussian_density(0.0, 1.0)
    w = 1.0 - atom_mass
    return Density(pdf=lambda x: w * np.asarray(base.pdf(x)),
                   support=base.support,
                   atoms=((atom_loc, atom_mass),))


class TestL1:
    def test_identical_densities_give_zero(self):
        p = lj.gaussian_density(0.3, 0.5)
        assert lj.l1_quadrature(p, p) < 1e-12

    def test_disjoint_supports_give_two(self):
        p = lj.gaussian_density(0.0, 1.0)
        q = lj.gaussian_density(40.0, 1.0)
        assert abs(lj.l1_quadrature(p, q) - 2.0) < 1e-10

    def test_unit_gaussians_two_sd_apart(self):
        # 2 (1 - 2 Phi(-1)) for |mu1 - mu2| = 2 sd
        p = lj.gaussian_density(0.0, 1.0)
        q = lj.gaussian_density(2.0, 1.0)
        got = lj.l1_quadrature(p, q)
        assert abs(got - 1.3653789842741717) < 1e-10

    def test_symmetry(self):
        p = lj.gaussian_density(0.0, 1.0)
        q = lj.gaussian_density(0.7, 2.0)
        assert abs(lj.l1_quadrature(p, q) - lj.l1_quadrature(q, p)) < 1e-12

    def test_triangle_inequality(self):
        p = lj.gaussian_density(0.0, 1.0)
        q = lj.gaussian_density(1.0, 1.5)
        r = lj.gaussian_density(-0.5, 0.7)
        assert (lj.l1_quadrature(p, q)
                <= lj.l1_quadrature(p, r) + lj.l1_quadrature(r, q) + 1e-10)


class TestTV:
    def test_half_of_l1(self):
        p = lj.gaussian_density(0.0, 1.0)
        q = lj.gaussian_density(1.0, 1.0)
        assert lj.tv_quadrature(p, q) == 0.5 * lj.l1_quadrature(p, q)

    def test_unit_gaussians_one_apart(self):
        # 2 Phi(1/2) - 1
        p = lj.gaussian_density(0.0, 1.0)
        q = lj.gaussian_density(1.0, 1.0)
        assert abs(lj.tv_quadrature(p, q) - 0.38292492254802624) < 1e-10

    def test_mixture_against_its_dominant_part(self):
        # TV(N(0,s2), (1-a) N(0,s2) + a N(10,s2)) = a for separated bumps
        a = 0.07
        p = lj.gaussian_density(0.0, 0.01)
        q = lj.mixture_density([(0.0, 0.1, 1.0 - a), (10.0, 0.1, a)])
        assert abs(lj.tv_quadrature(p, q) - a) < 1e-10


class TestHellinger:
    def test_unit_gaussians_one_apart(self):
        # H^2 = 2 (1 - exp(-1/8))
        p = lj.gaussian_density(0.0, 1.0)
        q = lj.gaussian_density(1.0, 1.0)
        h = lj.hellinger_quadrature(p, q)
        assert abs(h - 0.4847743751796387) < 1e-9
        assert abs(h * h - 0.2350061948308091) < 1e-9

    @given(mu=st.floats(-2.0, 2.0), s2=st.floats(0.25, 4.0))
    @settings(max_examples=15, deadline=None)
    def test_sandwich_against_tv(self, mu, s2):
        p = lj.gaussian_density(0.0, 1.0)
        q = lj.gaussian_density(mu, s2)
        h = lj.hellinger_quadrature(p, q)
        tv = lj.tv_quadrature(p, q)
        assert h * h / 2.0 <= tv + 1e-9
        assert tv <= h * math.sqrt(max(1.0 - h * h / 4.0, 0.0)) + 1e-9


class TestAtoms:
    def test_atom_mass_enters_l1(self):
        p = atom_plus_gaussian(0.0, 0.3)
        q = lj.gaussian_density(0.0, 1.0)
        # continuous parts differ by 0.3 everywhere, atom adds 0.3
        assert abs(lj.l1_quadrature(p, q) - 0.6) < 1e-10

    def test_matching_atoms_cancel(self):
        p = atom_plus_gaussian(1.0, 0.25)
        q = atom_plus_gaussian(1.0, 0.25)
        assert lj.l1_quadrature(p, q) < 1e-12

    def test_atoms_count_toward_total_mass(self):
        p = atom_plus_gaussian(0.0, 0.3)
        assert abs(lj.total_mass(p) - 1.0) < 1e-10

    def test_hellinger_between_disjoint_atoms(self):
        # sqrt-mass differences add in square: H^2 = 0.25 + 0.25
        p = atom_plus_gaussian(-5.0, 0.25)
        q = atom_plus_gaussian(5.0, 0.25)
        h = lj.hellinger_quadrature(p, q)
        assert abs(h - math.sqrt(0.5)) < 1e-9


class TestTotalMass:
    def test_gaussian_is_normalized(self):
        assert abs(lj.total_mass(lj.gaussian_density(1.0, 2.0)) - 1.0) < 1e-10

    def test_exact_increment_density_mass(self):
        from lecamjd.model import IntervalSummary
        s = IntervalSummary(m=0.0, sigma2=0.04, lam=0.2,
                            alpha=0.2 * math.exp(-0.2))
        law = lj.LatticeJumps(np.array([-1.0, 2.0]), np.array([0.5, 0.5]))
        d = lj.increment_density_exact(s, law)
        assert abs(lj.total_mass(d) - 1.0) < 1e-10


class TestPanelSplitting:
    def test_narrow_bump_inside_wide_support(self):
        # a 1e-3-wide bump at 3 is found because component means are panel
        # breakpoints; a naive single quad over [-12, 15] would miss it
        p = lj.mixture_density([(0.0, 1.0, 0.5), (3.0, 0.001, 0.5)])
        q = lj.gaussian_density(0.0, 1.0)
        got = lj.tv_quadrature(p, q)
        # true value is 0.5 minus the ~2e-5 overlap mass under the bump;
        # losing a side of the bump would drop the result to 0.375
        assert abs(got - 0.5) < 1e-4
        assert got < 0.5

    def test_uniform_density_edges_are_respected(self):
        law = lj.uniform_jumps(-1.0, 1.0)
        from lecamjd.model import IntervalSummary
        s = IntervalSummary(m=0.0, sigma2=1e-6, lam=0.1,
                            alpha=0.1 * math.exp(-0.1))
        d = lj.increment_density_exact(s, law)
        assert abs(lj.total_mass(d) - 1.0) < 1e-8
