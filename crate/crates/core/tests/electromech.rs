use proptest::prelude::*;
use spiralmech::beam::{calibrate_stress, Profile};
use spiralmech::constants::EPSILON_0;
use spiralmech::electromech::*;
use spiralmech::geometry::{build_spiral, Boundary, Material, SpiralCurve, SpiralSpec};
use spiralmech::reference::{MEMBRANE_RADIUS, REFERENCE_ROWS};
use spiralmech::Error;

const L0: f64 = 70e-9;

fn row2() -> SpiralSpec<f64> {
    SpiralSpec::from_nm(2000.0, 100.0, 200.0, 100.0, 5.0)
}

fn uniform(curve: &SpiralCurve<f64>, v: f64) -> Profile<f64> {
    Profile {
        theta: curve.thetas().collect(),
        drho: vec![v; curve.len()],
    }
}

/// Linear taper from 1 at the inner end to 0 at the clamp.
fn taper(curve: &SpiralCurve<f64>) -> Profile<f64> {
    let end = curve.samples.last().unwrap().theta;
    Profile {
        theta: curve.thetas().collect(),
        drho: curve.thetas().map(|t| 1.0 - t / end).collect(),
    }
}

fn arc_length(spec: &SpiralSpec<f64>) -> f64 {
    let a = spec.pitch() / std::f64::consts::TAU;
    let s = |rho: f64| {
        let phi = rho / a;
        0.5 * a * (phi * (1.0 + phi * phi).sqrt() + phi.asinh())
    };
    s(spec.outer_radius()) - s(spec.inner_radius)
}

#[test]
fn flat_capacitance_is_parallel_plate() {
    let spec = row2();
    let curve = build_spiral(&spec, 32).unwrap();
    let c = capacitance(&curve, spec.strip_width, spec.plate_gap, None).unwrap();
    let oracle = EPSILON_0 * arc_length(&spec) * spec.strip_width / spec.plate_gap;
    assert!((c - oracle).abs() / oracle < 1e-6, "{c} {oracle}");
    assert!((c - 36e-15).abs() / 36e-15 < 0.02, "{c}");
}

#[test]
fn uniform_offsets_scale_capacitance_exactly() {
    let spec = row2();
    let curve = build_spiral(&spec, 32).unwrap();
    let one = uniform(&curve, 1.0);
    let c0 = capacitance(&curve, spec.strip_width, spec.plate_gap, None).unwrap();
    let closer = capacitance(&curve, spec.strip_width, spec.plate_gap, Some((&one, spec.plate_gap / 2.0))).unwrap();
    let farther = capacitance(&curve, spec.strip_width, spec.plate_gap, Some((&one, -spec.plate_gap))).unwrap();
    assert!((closer / c0 - 2.0).abs() < 1e-12);
    assert!((farther / c0 - 0.5).abs() < 1e-12);
    let contact = capacitance(&curve, spec.strip_width, spec.plate_gap, Some((&one, spec.plate_gap)));
    assert!(matches!(contact, Err(Error::Contact { .. })));
}

#[test]
fn cavity_frequency_examples() {
    let w = cavity_frequency(70e-9, 36e-15).unwrap();
    let f = w / std::f64::consts::TAU;
    assert!((f - 3.2e9).abs() / 3.2e9 < 0.02, "{f}");
    assert!((cavity_frequency(70e-9, 144e-15).unwrap() - w / 2.0).abs() / w < 1e-14);
    assert_eq!(cavity_frequency(1.0, 1.0).unwrap(), 1.0);
    assert!(cavity_frequency(0.0, 1.0).is_err());
}

#[test]
fn piston_and_clamped_derivatives() {
    let spec = row2();
    let curve = build_spiral(&spec, 32).unwrap();
    let c = capacitance(&curve, spec.strip_width, spec.plate_gap, None).unwrap();
    let piston = capacitance_derivative(&curve, spec.strip_width, spec.plate_gap, &uniform(&curve, 1.0)).unwrap();
    assert!((piston - c / spec.plate_gap).abs() / piston < 1e-12);

    let tapered = capacitance_derivative(&curve, spec.strip_width, spec.plate_gap, &taper(&curve)).unwrap();
    assert!(tapered > 0.0 && tapered < c / spec.plate_gap);
}

fn central_difference(curve: &SpiralCurve<f64>, spec: &SpiralSpec<f64>, profile: &Profile<f64>) -> f64 {
    let u = spec.plate_gap / 1000.0;
    let plus = capacitance(curve, spec.strip_width, spec.plate_gap, Some((profile, u))).unwrap();
    let minus = capacitance(curve, spec.strip_width, spec.plate_gap, Some((profile, -u))).unwrap();
    (plus - minus) / (2.0 * u)
}

#[test]
fn linearized_derivative_matches_finite_difference() {
    let spec = row2();
    let curve = build_spiral(&spec, 32).unwrap();
    let run = spiralmech::beam::analyze(&spec, 32, 1).unwrap();
    let mode = spiralmech::beam::deformation_profile(&run.solution, &run.mesh, 0).unwrap();
    for profile in [taper(&curve), mode] {
        let lin = capacitance_derivative(&curve, spec.strip_width, spec.plate_gap, &profile).unwrap();
        let fd = central_difference(&curve, &spec, &profile);
        assert!((lin - fd).abs() / fd.abs() < 1e-3, "{lin} {fd}");

        // pull as the finite difference of the cavity frequency itself
        let u = spec.plate_gap / 1000.0;
        let w = |a: f64| {
            let c = capacitance(&curve, spec.strip_width, spec.plate_gap, Some((&profile, a))).unwrap();
            1.0 / (L0 * c).sqrt()
        };
        let fd_pull = (w(u) - w(-u)) / (2.0 * u);
        let (_, pull) = frequency_pull(&curve, &spec, &profile, L0, 0.0).unwrap();
        assert!((pull - fd_pull).abs() / fd_pull.abs() < 1e-3, "{pull} {fd_pull}");
    }
}

#[test]
fn row2_result_invariants() {
    let r = compute_g0(&row2(), L0, &CouplingOptions::default()).unwrap();
    assert!(r.c0 > 0.0 && r.g0 > 0.0);
    assert_eq!(r.omega_cav, 1.0 / (L0 * r.c0).sqrt());
    assert_eq!(r.pull_g.signum(), -r.dc_dx.signum() * r.omega_cav.signum());
    assert!((r.g0 - r.x_zp * r.pull_g.abs()).abs() <= 1e-15 * r.g0);

    // rigid piston with the same mass and frequency bounds g0 from above
    let piston = r.x_zp * r.omega_cav / (2.0 * row2().plate_gap);
    assert!(r.g0 <= piston);

    let report = serde_json::to_value(r.report()).unwrap();
    for key in ["g0_over_2pi_hz", "c0_fF", "f_cav_ghz"] {
        assert!(report.get(key).is_some(), "{key}");
    }
}

#[test]
fn g0_falls_and_pull_grows_as_the_gap_opens() {
    let opts = CouplingOptions::default();
    let mut previous: Option<CouplingResult<f64>> = None;
    for d in [60.0, 80.0, 100.0, 150.0, 200.0] {
        let spec = SpiralSpec::from_nm(2000.0, 100.0, 200.0, d, 5.0);
        let r = compute_g0(&spec, L0, &opts).unwrap();
        if let Some(p) = previous {
            assert!(r.g0 < p.g0, "d = {d}");
            assert!(r.pull_g.abs() < p.pull_g.abs());
        }
        previous = Some(r);
    }
}

#[test]
fn ranking_survives_a_common_change_of_inductance() {
    let opts = CouplingOptions::default();
    let rank = |l: f64| {
        let g: Vec<f64> = REFERENCE_ROWS[1..]
            .iter()
            .map(|row| compute_g0(&row.spec::<f64>().unwrap(), l, &opts).unwrap().g0)
            .collect();
        let mut idx: Vec<usize> = (0..g.len()).collect();
        idx.sort_by(|&a, &b| g[a].total_cmp(&g[b]));
        idx
    };
    assert_eq!(rank(L0), rank(7e-9));
    assert_eq!(rank(L0), rank(700e-9));
}

#[test]
fn misuse_is_refused() {
    let both = row2().with_boundary(Boundary::BothClamped);
    assert!(matches!(compute_g0(&both, L0, &CouplingOptions::default()), Err(Error::InvalidSpec(_))));
}

#[test]
fn power_law_fits() {
    let n = [5.0, 10.0, 20.0];
    let g: Vec<f64> = n.iter().map(|x: &f64| 3.0 * x.sqrt()).collect();
    assert!((power_law_exponent(&n, &g).unwrap() - 0.5).abs() < 1e-12);
    assert!(power_law_exponent(&n, &[2.0, 2.0, 2.0]).unwrap().abs() < 1e-15);
    assert!(power_law_exponent(&n[..2], &g[..2]).is_err());
}

#[test]
fn cooperativity_ratios() {
    let base = compute_g0(&row2(), L0, &CouplingOptions::default()).unwrap();
    let scaled = |k: f64| CouplingResult { g0: base.g0 * k, ..base };
    assert!((cooperativity_ratio(&scaled(7.0), &base).unwrap() - 49.0).abs() < 1e-10);
    assert!((cooperativity_ratio(&scaled(12.0), &base).unwrap() - 144.0).abs() < 1e-10);
    assert_eq!(cooperativity_ratio(&base, &base).unwrap(), 1.0);
    assert!(cooperativity_ratio(&base, &scaled(0.0)).is_err());
}

#[test]
fn membrane_baseline() {
    let row = &REFERENCE_ROWS[0];
    let sigma = calibrate_stress(MEMBRANE_RADIUS, 2700.0, row.f_khz * 1e3).unwrap();
    let material = Material::aluminum().with_residual_stress(sigma);
    let r = membrane_g0(MEMBRANE_RADIUS, 100e-9, 100e-9, &material, L0, 0.0).unwrap();
    assert!((r.f_mech - 6.2e6).abs() / 6.2e6 < 1e-10);
    let g = r.g0_over_2pi();
    assert!(g > 30.0 && g < 120.0, "{g}");

    // drum closed forms: m_eff = J1(j01)²·m, mean displacement 2·J1(j01)/j01
    let j1 = 0.519_147_497_289_466_4;
    let j01 = 2.404_825_557_695_773;
    let area = std::f64::consts::PI * MEMBRANE_RADIUS * MEMBRANE_RADIUS;
    let m = 2700.0 * area * 100e-9;
    assert!((r.m_eff - j1 * j1 * m).abs() / r.m_eff < 1e-10);
    let dc = EPSILON_0 * area / 100e-9 * (2.0 * j1 / j01) / 100e-9;
    assert!((r.dc_dx - dc).abs() / dc < 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bounded_profiles_stay_within_the_piston_limit(
        weights in proptest::collection::vec(0.0..1.0f64, 161),
        turns in 1.0..5.0f64,
    ) {
        let spec = SpiralSpec::<f64>::from_nm(2000.0, 100.0, 200.0, 100.0, turns);
        let curve = build_spiral(&spec, 32).unwrap();
        let n = curve.len();
        let mut drho: Vec<f64> = weights.iter().cycle().take(n).copied().collect();
        drho[0] = 1.0;
        drho[n - 1] = 0.0;
        let profile = Profile { theta: curve.thetas().collect(), drho };
        let c = capacitance(&curve, spec.strip_width, spec.plate_gap, None).unwrap();
        let dc = capacitance_derivative(&curve, spec.strip_width, spec.plate_gap, &profile).unwrap();
        prop_assert!(dc > 0.0 && dc < c / spec.plate_gap);
        let fd = central_difference(&curve, &spec, &profile);
        prop_assert!((dc - fd).abs() / fd < 1e-3);
    }

    #[test]
    fn pull_sign_opposes_the_derivative(dc in -1e-6..1e-6f64, c in 1e-15..1e-12f64, w in 1e9..1e11f64) {
        let g = pull_from_derivative(w, c, dc);
        prop_assert_eq!(g.signum(), -dc.signum());
        prop_assert_eq!(pull_from_derivative(-w, c, dc).signum(), dc.signum());
    }

    #[test]
    fn power_law_recovers_any_exponent(alpha in -2.0..2.0f64, k in 0.1..10.0f64) {
        let n = [5.0, 7.0, 10.0, 20.0];
        let g: Vec<f64> = n.iter().map(|x: &f64| k * x.powf(alpha)).collect();
        prop_assert!((power_law_exponent(&n, &g).unwrap() - alpha).abs() < 1e-12);
    }
}
