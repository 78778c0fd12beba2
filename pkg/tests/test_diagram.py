import math

import numpy as np
import pytest

from zenoline import diagram, specfun
from zenoline.errors import CausticError, DomainError, SolverError

import oracles

GAMMA0 = diagram.GAMMA0


@pytest.fixture(scope="module")
def eos():
    return diagram.solve_phi(GAMMA0, np.geomspace(1.02, 1000.0, 400))


class TestZenoLine:
    def test_linearity(self):
        line = diagram.ZenoLine(rho_B=2.0, T_B=4.0)
        for t in (0.0, 1.0, 2.0, 3.9):
            assert diagram.zeno_density(line, t) == \
                pytest.approx(2.0 * (1.0 - t / 4.0), rel=1e-14)

    def test_domain(self):
        line = diagram.ZenoLine()
        with pytest.raises(DomainError):
            diagram.zeno_density(line, 1.0)
        with pytest.raises(DomainError):
            diagram.zeno_density(line, -0.1)
        with pytest.raises(DomainError):
            diagram.ZenoLine(rho_B=0.0)


class TestBachinskii:
    def test_vieta(self):
        for b, c, P in ((1.0, 1.0, 0.3), (2.5, 0.7, 1.1), (0.4, 3.0, 0.39)):
            lo, hi = diagram.bachinskii_density(b, c, P)
            assert lo <= hi
            assert lo + hi == pytest.approx(4.0 * b / c, rel=1e-12)
            assert lo * hi == pytest.approx(4.0 * b * P / (c * c), rel=1e-12)

    def test_roots_satisfy_parabola(self):
        b, c = 1.3, 0.9
        for P in (0.1, 0.6, 1.2):
            for rho in diagram.bachinskii_density(b, c, P):
                assert c * rho * (1.0 - c * rho / (4.0 * b)) == \
                    pytest.approx(P, rel=1e-12)

    def test_quadratic_formula_oracle(self):
        b, c, P = 1.7, 1.2, 0.8
        # c^2 rho^2 / (4b) - c rho + P = 0 solved the schoolbook way
        aa, bb, cc = c * c / (4.0 * b), -c, P
        disc = math.sqrt(bb * bb - 4.0 * aa * cc)
        lo, hi = diagram.bachinskii_density(b, c, P)
        assert lo == pytest.approx((-bb - disc) / (2.0 * aa), rel=1e-12)
        assert hi == pytest.approx((-bb + disc) / (2.0 * aa), rel=1e-12)

    def test_caustic(self):
        lo, hi = diagram.bachinskii_density(1.0, 1.0, 1.0)
        assert lo == pytest.approx(hi, rel=1e-12)
        with pytest.raises(CausticError):
            diagram.bachinskii_density(1.0, 1.0, 1.0001)

    def test_domain(self):
        with pytest.raises(DomainError):
            diagram.bachinskii_density(-1.0, 1.0, 0.5)
        with pytest.raises(DomainError):
            diagram.bachinskii_density(1.0, 1.0, -0.5)


class TestSolvePhi:
    def test_shape_and_boundary(self, eos):
        assert eos.V_cr == pytest.approx(1.414, abs=5e-3)
        assert eos.V_cr == eos.V[0]
        assert np.all(np.diff(eos.phi_vals) > 0)
        assert np.all(eos.dphi_vals > 0)
        assert eos.phi_vals[-1] / eos.V[-1] == pytest.approx(1.0, abs=1e-3)
        # kappa is monotone along the trace and hits the boundary value
        assert np.all(np.diff(eos.kappa) < 0)
        T_max = 1.0 - 1.0 / eos.V[-1]
        expect = -math.log(eos.V[-1] * T_max ** (GAMMA0 + 1.0))
        assert eos.kappa[-1] == pytest.approx(expect, rel=1e-12)

    def test_unit_compressibility_at_nodes(self, eos):
        # the defining constraint: V phi' Li_{g+2} = phi Li_{g+1}
        for i in range(0, len(eos.V), 40):
            z = math.exp(eos.kappa[i])
            lhs = eos.V[i] * eos.dphi_vals[i] * specfun.polylog(GAMMA0 + 2.0, z)
            rhs = eos.phi_vals[i] * specfun.polylog(GAMMA0 + 1.0, z)
            assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_dphi_consistent_with_phi(self, eos):
        for V in (2.0, 5.0, 50.0):
            fd = oracles.central_difference(eos.phi, V, 1e-5)
            assert eos.dphi(V) == pytest.approx(fd, rel=1e-3)

    def test_inverse_round_trip(self, eos):
        for V in (eos.V_cr, 1.7, 3.0, 30.0, 2000.0):
            y = eos.phi(V)
            assert eos.inv_phi(y) == pytest.approx(V, rel=1e-12)

    def test_asymptotic_tail(self, eos):
        big = 5000.0
        assert eos.phi(big) / big == pytest.approx(1.0, abs=1e-3)
        assert eos.dphi(big) == 1.0

    def test_domain(self, eos):
        with pytest.raises(DomainError):
            eos.phi(0.5)
        with pytest.raises(DomainError):
            diagram.solve_phi(GAMMA0, [0.5, 2.0])


class TestCriticalGamma:
    def test_residual(self):
        cg = diagram.critical_gamma(0.29)
        z = specfun.riemann_zeta
        assert z(cg.d + 1.0) / z(cg.d) == pytest.approx(0.29, abs=1e-10)
        assert cg.gamma == cg.d - 1.0
        assert cg.d == pytest.approx(1.22228, abs=1e-4)

    def test_bracketing_oracle(self):
        z = oracles.zeta_euler_maclaurin
        assert z(2.1) / z(1.1) < 0.29 < z(2.3) / z(1.3)
        cg = diagram.critical_gamma(0.29)
        assert 1.1 < cg.d < 1.3

    def test_ratio_monotone_in_target(self):
        ds = [diagram.critical_gamma(t).d for t in (0.15, 0.29, 0.5, 0.8)]
        assert all(a < b for a, b in zip(ds, ds[1:]))

    def test_domain(self):
        with pytest.raises(DomainError):
            diagram.critical_gamma(1.2)
        with pytest.raises(DomainError):
            diagram.critical_gamma(0.9999)


class TestIdealIsotherm:
    def test_defining_equations(self):
        zp2 = specfun.riemann_zeta(GAMMA0 + 2.0)
        for pt in diagram.ideal_isotherm(np.linspace(0.05, 1.0, 20)):
            assert specfun.polylog(GAMMA0 + 2.0, pt.a) == \
                pytest.approx(pt.P_r * zp2, rel=1e-9)
            assert pt.Z == pytest.approx(
                pt.P_r * zp2 / specfun.polylog(GAMMA0 + 1.0, pt.a), rel=1e-12)

    def test_endpoints(self):
        low = diagram.ideal_isotherm([1e-6])[0]
        assert low.Z == pytest.approx(1.0, abs=1e-3)
        top = diagram.ideal_isotherm([1.0])[0]
        assert top.a == pytest.approx(1.0, abs=1e-12)
        expect = specfun.riemann_zeta(GAMMA0 + 2.0) / \
            specfun.riemann_zeta(GAMMA0 + 1.0)
        assert top.Z == pytest.approx(expect, rel=1e-12)

    def test_monotone(self):
        pts = diagram.ideal_isotherm(np.linspace(0.05, 1.0, 15))
        zs = [p.Z for p in pts]
        assert all(a > b for a, b in zip(zs, zs[1:]))

    def test_domain(self):
        with pytest.raises(DomainError):
            diagram.ideal_isotherm([0.0])
        with pytest.raises(DomainError):
            diagram.ideal_isotherm([1.5])


class TestImperfectIsotherm:
    def test_identity_reduces_to_ideal(self):
        grid = np.linspace(0.05, 1.0, 20)
        ideal = diagram.ideal_isotherm(grid)
        via_identity = diagram.imperfect_isotherm(
            grid, diagram.FractalEos.identity(GAMMA0))
        for a, b in zip(ideal, via_identity):
            assert a == b

    def test_defining_equations(self, eos):
        zp2 = specfun.riemann_zeta(GAMMA0 + 2.0)
        c_cr = eos.dphi(eos.V_cr)
        for pt in diagram.imperfect_isotherm(np.linspace(0.1, 0.9, 9), eos):
            V = pt.Z / pt.P_r
            assert eos.phi(V) * specfun.polylog(GAMMA0 + 1.0, pt.a) == \
                pytest.approx(c_cr * zp2, rel=1e-8)
            assert eos.dphi(V) * specfun.polylog(GAMMA0 + 2.0, pt.a) == \
                pytest.approx(pt.P_r * c_cr * zp2, rel=1e-8)

    def test_deformation_effect(self, eos):
        # the deformed and undeformed isotherms agree in the dilute
        # limit and separate strongly as the critical pressure nears
        grid = [0.05, 0.99]
        ideal = diagram.ideal_isotherm(grid)
        real = diagram.imperfect_isotherm(grid, eos)
        assert real[0].Z == pytest.approx(ideal[0].Z, abs=0.02)
        assert real[1].Z > ideal[1].Z + 0.5

    def test_domain(self, eos):
        with pytest.raises(DomainError):
            diagram.imperfect_isotherm([0.0], eos)


class TestJamming:
    def test_start_and_monotonicity(self):
        eos = diagram.FractalEos.identity(GAMMA0)
        curve = diagram.jamming_extension(
            [0.0] + list(np.arange(-0.01, -0.501, -0.01)), eos)
        gammas = curve.column("gamma")
        assert gammas[0] == GAMMA0
        assert all(a >= b - 1e-12 for a, b in zip(gammas, gammas[1:]))
        assert all(g >= 0.0 for g in gammas)
        # the integrated branch moves to lower pressure, the stitch back
        # up to the anchor
        mus = curve.column("mu")
        n_branch = sum(1 for i in range(1, len(mus)) if mus[i] < mus[i - 1]) + 1
        ps = curve.column("P")
        branch, stitch = ps[:n_branch], ps[n_branch - 1:]
        assert all(a > b for a, b in zip(branch, branch[1:]))
        assert all(a < b for a, b in zip(stitch, stitch[1:]))

    def test_linear_tail(self):
        eos = diagram.FractalEos.identity(GAMMA0)
        curve = diagram.jamming_extension(
            [0.0, -0.05, -0.1, -0.2, -0.3], eos, anchor_P=2.5)
        tail = [(p, z) for p, z, _, _ in curve.rows if p > 1.5]
        assert len(tail) >= 5
        p0, z0 = tail[0]
        p1, z1 = tail[-1]
        slope = (z1 - z0) / (p1 - p0)
        for p, z in tail:
            assert z == pytest.approx(z0 + slope * (p - p0), abs=1e-12)
        assert curve.rows[-1][0] == pytest.approx(2.5, rel=1e-14)
        assert curve.rows[-1][1] == pytest.approx(1.0, rel=1e-14)

    def test_linear_variant(self):
        eos = diagram.FractalEos.identity(GAMMA0)
        curve = diagram.jamming_extension(
            [0.0, -0.1, -0.2, -0.3], eos, variant="linear")
        gam = dict((m, g) for _, _, m, g in curve.rows)
        assert gam[-0.1] == pytest.approx(0.1, rel=1e-12)
        # gamma floors at 0 at mu = -gamma0 and the trace stops there
        assert gam[-0.2] == 0.0
        assert -0.3 not in gam
        assert curve.meta["jammed"] is True

    def test_slope_near_unity_at_origin(self):
        assert diagram._gamma_slope(GAMMA0, 0.0) == pytest.approx(1.0, abs=0.1)

    def test_domain(self):
        eos = diagram.FractalEos.identity(GAMMA0)
        with pytest.raises(DomainError):
            diagram.jamming_extension([-0.1, -0.2], eos)
        with pytest.raises(DomainError):
            diagram.jamming_extension([0.0, -0.1], eos, anchor_P=0.5)
        with pytest.raises(DomainError):
            diagram.jamming_extension([0.0, -0.1], eos, variant="spline")


class TestLiquidSummary:
    def test_hyperbola_constant(self, eos):
        summary = diagram.liquid_summary(eos, diagram.ZenoLine())
        c = summary["hyperbola_constant"]
        for rho, z in summary["hyperbola"]:
            assert rho * z == pytest.approx(c, rel=1e-12)
        assert summary["V_cr"] == eos.V_cr

    def test_rays_on_zeno_line(self, eos):
        line = diagram.ZenoLine()
        summary = diagram.liquid_summary(eos, line)
        for t, rho in summary["rays"]:
            assert rho == pytest.approx(1.0 - t, rel=1e-12)


class TestReferenceTables:
    def test_rotation_angles(self):
        assert diagram.rotation_angle(0.30) == 0.049
        assert diagram.rotation_angle(0.26) == 0.052
        assert diagram.rotation_angle(0.17) == 0.066
        with pytest.raises(LookupError):
            diagram.rotation_angle(0.1)

    def test_substances(self):
        ar = diagram.substance_data("Ar")
        assert ar["epsilon_K"] == 119.3
        assert set(diagram.reference_tables()["substances"]) == \
            {"Ne", "Ar", "Kr", "N2", "CH4", "C2H6"}
        with pytest.raises(LookupError):
            diagram.substance_data("He")

    def test_t_ratio_references(self):
        assert diagram.T_CR_OVER_T_B_REFERENCES == (0.39, 2.79)
