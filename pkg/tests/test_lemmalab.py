import json
import math

import pytest

from goodpants.complexes import build_xp
from goodpants.geom import (
    INFINITY,
    MoebiusMap,
    NotNormalError,
    OrientedGeodesic,
    Point,
    apply_to_point,
    mobius_apply,
)
from goodpants.holonomy import RepParams, build_rho
from goodpants.lemmalab import (
    AngleCoordinates,
    DegenerateFrameError,
    SweepReport,
    SweepRow,
    angle_change_check,
    angle_coordinates,
    hexagon_asymptotics_check,
    quasigeodesic_stability_check,
    two_planes_angle_check,
)

AXIS = OrientedGeodesic(0j, INFINITY)
NORMAL = OrientedGeodesic(-1.0 + 0j, 1.0 + 0j)


class TestSweepReport:
    def report(self):
        rows = (
            SweepRow(params=(("R", 2.0), ("check", "a")), measured=0.5, bound=1.0),
            SweepRow(params=(("R", 4.0), ("check", "b")), measured=2.0, bound=1.0),
        )
        return SweepReport(name="demo", rows=rows, samples=7, stats=(("k", 1.5),))

    def test_pass_recomputable(self):
        rep = self.report()
        assert rep.rows[0].passed and not rep.rows[1].passed
        assert not rep.passed

    def test_json_canonical(self):
        rep = self.report()
        obj = json.loads(rep.to_json())
        assert obj["name"] == "demo"
        assert obj["rows"][1]["pass"] is False
        assert rep.to_json() == rep.to_json()
        # canonical ordering: serialized keys are sorted
        assert rep.to_json() == json.dumps(
            obj, sort_keys=True, separators=(",", ":")
        )

    def test_csv(self):
        text = self.report().to_csv()
        lines = text.strip().split("\n")
        assert lines[0] == "R,check,measured,bound,pass"
        assert len(lines) == 3
        assert lines[2].endswith("false")


class TestAngleCoordinates:
    def test_along_gamma_theta_zero(self):
        x = Point(0j, 2.0)
        ac = angle_coordinates(AXIS, NORMAL, (x, Point(0j, 5.0)))
        assert abs(ac.theta) < 1e-12
        assert abs(ac.phi - math.pi / 2.0) < 1e-12

    def test_in_plane_phi_is_right_angle(self):
        x = Point(0j, 2.0)
        ac = angle_coordinates(AXIS, NORMAL, (x, Point(3.0 + 0j, 1.0)))
        assert abs(ac.phi - math.pi / 2.0) < 1e-12
        assert 0.0 < ac.theta < math.pi

    def test_out_of_plane(self):
        x = Point(0j, 1.0)
        # (0.6i, 0.8) lies on the unit semicircle over the imaginary
        # axis, so the segment leaves x straight along the binormal
        ac = angle_coordinates(AXIS, NORMAL, (x, Point(0.6j, 0.8)))
        assert abs(ac.phi) < 1e-12
        assert abs(ac.theta - math.pi / 2.0) < 1e-12

    def test_ranges(self):
        with pytest.raises(ValueError):
            AngleCoordinates(theta=-1.0, phi=0.0)
        with pytest.raises(ValueError):
            AngleCoordinates(theta=0.0, phi=4.0)

    def test_tangent_alpha_rejected(self):
        bad = OrientedGeodesic(0j, 1.0 + 0j)  # shares the endpoint 0
        with pytest.raises(DegenerateFrameError):
            angle_coordinates(AXIS, bad, (Point(0j, 1.0), Point(1.0 + 0j, 1.0)))

    def test_non_orthogonal_alpha_rejected(self):
        skew = OrientedGeodesic(-1.0 + 0j, 2.0 + 0j)
        with pytest.raises(NotNormalError):
            angle_coordinates(AXIS, skew, (Point(0j, 1.0), Point(1.0 + 0j, 1.0)))

    def test_off_gamma_start_rejected(self):
        with pytest.raises(ValueError):
            angle_coordinates(
                AXIS, NORMAL, (Point(5.0 + 0j, 1.0), Point(0j, 2.0))
            )

    def test_conjugation_invariance(self):
        import random

        rng = random.Random(4)
        x = Point(0j, 3.0)
        y = Point(2.0 + 1.5j, 0.7)
        want = angle_coordinates(AXIS, NORMAL, (x, y))
        for _ in range(10):
            m = MoebiusMap(
                *(complex(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(4))
            )
            gamma = OrientedGeodesic(
                mobius_apply(m, AXIS.source), mobius_apply(m, AXIS.target)
            )
            alpha = OrientedGeodesic(
                mobius_apply(m, NORMAL.source), mobius_apply(m, NORMAL.target)
            )
            got = angle_coordinates(
                gamma, alpha, (apply_to_point(m, x), apply_to_point(m, y))
            )
            assert abs(got.theta - want.theta) < 1e-9
            assert abs(got.phi - want.phi) < 1e-9


class TestQuasigeodesicStability:
    def test_small_delta_bound_value(self):
        rep = quasigeodesic_stability_check(1e-5, samples=500, seed=0)
        assert abs(dict(rep.stats)["eta"] - 0.5) < 1e-12
        assert rep.rows[0].bound == dict(rep.stats)["eta"]

    @pytest.mark.parametrize("delta", [1e-5, 1e-4, 1e-3, 1e-2])
    def test_no_violations(self, delta):
        rep = quasigeodesic_stability_check(delta, samples=2000, seed=1)
        assert rep.passed
        assert rep.samples >= 2000
        assert rep.rows[0].measured >= 0.0

    def test_deterministic(self):
        a = quasigeodesic_stability_check(1e-3, samples=500, seed=9)
        b = quasigeodesic_stability_check(1e-3, samples=500, seed=9)
        assert a.to_json() == b.to_json()

    def test_rejects_large_delta(self):
        with pytest.raises(ValueError):
            quasigeodesic_stability_check(0.5, samples=10, seed=0)


class TestHexagonAsymptotics:
    def test_identities_tight(self):
        rep = hexagon_asymptotics_check([2.0, 6.0, 10.0, 20.0, 40.0])
        assert rep.passed
        for row in rep.rows:
            d = dict(row.params)
            if d["check"].endswith("identity"):
                assert row.measured < 1e-9

    def test_d1_closed_form_small_R(self):
        rep = hexagon_asymptotics_check([2.0])
        # arccosh(cosh 1 / (cosh 1 - 1)) ~ 1.705
        want = math.acosh(math.cosh(1.0) / (math.cosh(1.0) - 1.0))
        assert abs(want - 1.705) < 1e-3
        row = [r for r in rep.rows if dict(r.params)["check"] == "d1-identity"][0]
        assert row.measured < 1e-12

    def test_residual_decreasing(self):
        rep = hexagon_asymptotics_check([10.0, 20.0, 30.0])
        chords = [
            r.measured
            for r in rep.rows
            if dict(r.params)["check"] == "chord-asymptotic"
        ]
        assert chords[0] <= 1.0
        assert chords[0] > chords[1] > chords[2]

    def test_regression_slope(self):
        rep = hexagon_asymptotics_check([10, 14, 18, 22, 26, 30, 34])
        slope = dict(rep.stats)["log_residual_slope"]
        assert -0.55 <= slope <= -0.45

    def test_rejects_tiny_R(self):
        with pytest.raises(ValueError):
            hexagon_asymptotics_check([1.0])


class TestTwoPlanesAngle:
    @pytest.mark.parametrize("eps", [0.005, 0.01])
    @pytest.mark.parametrize("R", [15.0, 20.0, 30.0])
    def test_sweep_passes(self, eps, R):
        rep = two_planes_angle_check(eps, R, samples=200, seed=2)
        assert rep.passed
        bound_row = [
            r for r in rep.rows if dict(r.params)["check"] == "dihedral-bound"
        ][0]
        assert bound_row.bound == 10.0 * eps / R

    def test_routes_agree(self):
        rep = two_planes_angle_check(0.01, 20.0, samples=200, seed=3)
        agree = [
            r for r in rep.rows if dict(r.params)["check"] == "route-agreement"
        ][0]
        assert agree.measured < 1e-9

    def test_deterministic(self):
        a = two_planes_angle_check(0.01, 20.0, samples=100, seed=5)
        b = two_planes_angle_check(0.01, 20.0, samples=100, seed=5)
        assert a.to_json() == b.to_json()

    def test_rejects_bad_parameters(self):
        with pytest.raises(ValueError):
            two_planes_angle_check(0.5, 20.0, samples=10, seed=0)
        with pytest.raises(ValueError):
            two_planes_angle_check(0.01, 5.0, samples=10, seed=0)


class TestAngleChange:
    def setup_method(self):
        self.x = build_xp(1, 3)
        self.rho0 = build_rho(self.x, RepParams.zero(self.x, R=20.0, tau=0.0))

    def test_identical_pair_is_exact_zero(self):
        rep = angle_change_check((self.rho0, self.rho0), p=3, samples=50, seed=1)
        assert all(r.measured == 0.0 for r in rep.rows)

    def test_zero_offsets_match_standard(self):
        rho1 = build_rho(self.x, RepParams.zero(self.x, R=20.0, tau=1.0))
        rep = angle_change_check((self.rho0, rho1), p=3, samples=50, seed=1)
        assert all(r.measured < 1e-9 for r in rep.rows)

    def test_deformed_within_bounds(self):
        rho1 = build_rho(
            self.x, RepParams.random(self.x, R=20.0, tau=1.0, seed=3)
        )
        rep = angle_change_check((self.rho0, rho1), p=3, samples=300, seed=5)
        assert rep.passed
        by_check = {dict(r.params)["check"]: r for r in rep.rows}
        assert by_check["theta-shift"].bound == pytest.approx(1.0 / 12.0)
        assert by_check["theta-shift"].measured > 0.0
        assert by_check["combined"].bound == pytest.approx(1.0 / 3.0)

    def test_mismatched_complexes_rejected(self):
        y = build_xp(2, 3)
        other = build_rho(y, RepParams.zero(y, R=20.0, tau=1.0))
        with pytest.raises(ValueError):
            angle_change_check((self.rho0, other), p=3, samples=10, seed=0)
