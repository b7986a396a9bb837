//! Capacitive readout: spiral capacitance, LC cavity, frequency pull and g₀.

use serde::{Deserialize, Serialize};

use crate::beam::{
    analyze_with, deformation_profile, membrane_mode, modal_mass_and_xzp, Polarization, Profile, SolverOptions,
    DEFAULT_ELEMS_PER_TURN,
};
use crate::constants::EPSILON_0;
use crate::error::{Error, Result};
use crate::geometry::{Boundary, Material, SpiralCurve, SpiralSpec};
use crate::real::Real;

fn check_profile<T: Real>(curve: &SpiralCurve<T>, profile: &Profile<T>) -> Result<()> {
    if profile.len() != curve.len() {
        return Err(Error::InvalidInput(format!(
            "profile has {} samples, curve has {}",
            profile.len(),
            curve.len()
        )));
    }
    Ok(())
}

/// `C = ε₀·b·∫ ds/(d − u·Δρ(s))` along the centerline, trapezoidal per
/// sample interval. `deformation` is a profile and the amplitude `u` that
/// scales it; positive displacement closes the gap.
pub fn capacitance<T: Real>(
    curve: &SpiralCurve<T>,
    strip_width: T,
    plate_gap: T,
    deformation: Option<(&Profile<T>, T)>,
) -> Result<T> {
    if !(strip_width > T::zero() && plate_gap > T::zero()) {
        return Err(Error::InvalidSpec("strip width and plate gap must be positive".into()));
    }
    let gap_at = |k: usize| -> T {
        match deformation {
            Some((p, u)) => plate_gap - u * p.drho[k],
            None => plate_gap,
        }
    };
    if let Some((p, _)) = deformation {
        check_profile(curve, p)?;
    }
    let mut inv = Vec::with_capacity(curve.len());
    for k in 0..curve.len() {
        let g = gap_at(k);
        if !(g > T::zero()) {
            return Err(Error::Contact {
                theta: curve.samples[k].theta.to_f64_lossy(),
            });
        }
        inv.push(T::one() / g);
    }
    let half = T::lit(0.5);
    let mut total = T::zero();
    for (k, ds) in curve.segment_lengths().into_iter().enumerate() {
        total += ds * half * (inv[k] + inv[k + 1]);
    }
    Ok(T::lit(EPSILON_0) * strip_width * total)
}

/// `dC/dx = ε₀·b·∫ Δρ/d² ds` at zero amplitude.
pub fn capacitance_derivative<T: Real>(curve: &SpiralCurve<T>, strip_width: T, plate_gap: T, profile: &Profile<T>) -> Result<T> {
    check_profile(curve, profile)?;
    let half = T::lit(0.5);
    let mut total = T::zero();
    for (k, ds) in curve.segment_lengths().into_iter().enumerate() {
        total += ds * half * (profile.drho[k] + profile.drho[k + 1]);
    }
    Ok(T::lit(EPSILON_0) * strip_width * total / (plate_gap * plate_gap))
}

/// `ω = 1/√(LC)`.
pub fn cavity_frequency<T: Real>(inductance: T, capacitance: T) -> Result<T> {
    if !(inductance > T::zero() && capacitance > T::zero()) {
        return Err(Error::InvalidInput("L and C must be positive".into()));
    }
    Ok(T::one() / (inductance * capacitance).sqrt())
}

/// `∂ω/∂x = −(ω/2C)·dC/dx`.
pub fn pull_from_derivative<T: Real>(omega: T, capacitance: T, dc_dx: T) -> T {
    -(omega / (T::lit(2.0) * capacitance)) * dc_dx
}

/// Linearized `(dC/dx, ∂ω/∂x)` for a profile normalized to 1 at the reference point.
pub fn frequency_pull<T: Real>(
    curve: &SpiralCurve<T>,
    spec: &SpiralSpec<T>,
    profile: &Profile<T>,
    circuit_l: T,
    c_stray: T,
) -> Result<(T, T)> {
    let c0 = capacitance(curve, spec.strip_width, spec.plate_gap, None)?;
    let dc = capacitance_derivative(curve, spec.strip_width, spec.plate_gap, profile)?;
    let omega = cavity_frequency(circuit_l, c0 + c_stray)?;
    Ok((dc, pull_from_derivative(omega, c0 + c_stray, dc)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingOptions {
    pub elems_per_turn: usize,
    /// Added in parallel to the spiral capacitance, F.
    pub c_stray: f64,
    pub solver: SolverOptions,
}

impl Default for CouplingOptions {
    fn default() -> Self {
        Self {
            elems_per_turn: DEFAULT_ELEMS_PER_TURN,
            c_stray: 0.0,
            solver: SolverOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingResult<T> {
    /// Spiral (or membrane) capacitance, F.
    pub c0: T,
    pub c_stray: T,
    pub dc_dx: T,
    pub omega_cav: T,
    /// ∂ω/∂x, rad/s/m.
    pub pull_g: T,
    /// `x_zp·|∂ω/∂x|`, rad/s.
    pub g0: T,
    pub circuit_l: T,
    pub f_mech: T,
    pub m_eff: T,
    pub x_zp: T,
    pub total_mass: T,
}

impl<T: Real> CouplingResult<T> {
    pub fn g0_over_2pi(&self) -> T {
        self.g0 / T::TAU()
    }

    pub fn report(&self) -> CouplingReport {
        let f = |v: T| v.to_f64_lossy();
        CouplingReport {
            g0_over_2pi_hz: f(self.g0_over_2pi()),
            c0_fF: f(self.c0) * 1e15,
            c_stray_fF: f(self.c_stray) * 1e15,
            dc_dx_nF_per_m: f(self.dc_dx) * 1e9,
            f_cav_ghz: f(self.omega_cav) / std::f64::consts::TAU * 1e-9,
            pull_over_2pi_hz_per_nm: f(self.pull_g) / std::f64::consts::TAU * 1e-9,
            circuit_l_nH: f(self.circuit_l) * 1e9,
            f_mech_khz: f(self.f_mech) * 1e-3,
            m_eff_kg: f(self.m_eff),
            total_mass_kg: f(self.total_mass),
            x_zp_m: f(self.x_zp),
        }
    }
}

/// JSON form of [`CouplingResult`], units in the key names.
#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingReport {
    pub g0_over_2pi_hz: f64,
    pub c0_fF: f64,
    pub c_stray_fF: f64,
    pub dc_dx_nF_per_m: f64,
    pub f_cav_ghz: f64,
    pub pull_over_2pi_hz_per_nm: f64,
    pub circuit_l_nH: f64,
    pub f_mech_khz: f64,
    pub m_eff_kg: f64,
    pub total_mass_kg: f64,
    pub x_zp_m: f64,
}

/// Geometry → modes → m_eff, x_zp → C, pull → g₀ for an outer-clamped capacitor.
pub fn compute_g0<T: Real>(spec: &SpiralSpec<T>, circuit_l: T, opts: &CouplingOptions) -> Result<CouplingResult<T>> {
    if spec.boundary != Boundary::OuterClamped {
        return Err(Error::InvalidSpec("a spiral capacitor must be outer_clamped".into()));
    }
    let run = analyze_with(spec, opts.elems_per_turn, 1, &opts.solver)?;
    let mode = run.solution.fundamental();
    if mode.polarization != Polarization::OutOfPlane {
        return Err(Error::ModePolarization {
            expected: Polarization::OutOfPlane.as_str(),
            found: mode.polarization.as_str(),
        });
    }
    let mm = modal_mass_and_xzp(&run.solution, &run.mesh, 0)?;
    let profile = deformation_profile(&run.solution, &run.mesh, 0)?;
    let c_stray = T::lit(opts.c_stray);
    let c0 = capacitance(&run.curve, spec.strip_width, spec.plate_gap, None)?;
    let dc_dx = capacitance_derivative(&run.curve, spec.strip_width, spec.plate_gap, &profile)?;
    let omega_cav = cavity_frequency(circuit_l, c0 + c_stray)?;
    let pull_g = pull_from_derivative(omega_cav, c0 + c_stray, dc_dx);
    Ok(CouplingResult {
        c0,
        c_stray,
        dc_dx,
        omega_cav,
        pull_g,
        g0: mm.x_zp * pull_g.abs(),
        circuit_l,
        f_mech: mode.frequency,
        m_eff: mm.m_eff,
        x_zp: mm.x_zp,
        total_mass: run.solution.total_mass,
    })
}

/// g₀ of the unpatterned drum, referenced to its center displacement.
pub fn membrane_g0<T: Real>(
    radius: T,
    thickness: T,
    plate_gap: T,
    material: &Material<T>,
    circuit_l: T,
    c_stray: T,
) -> Result<CouplingResult<T>> {
    let m = membrane_mode(radius, thickness, plate_gap, material)?;
    let omega_cav = cavity_frequency(circuit_l, m.c0 + c_stray)?;
    let pull_g = pull_from_derivative(omega_cav, m.c0 + c_stray, m.dc_dx);
    Ok(CouplingResult {
        c0: m.c0,
        c_stray,
        dc_dx: m.dc_dx,
        omega_cav,
        pull_g,
        g0: m.x_zp * pull_g.abs(),
        circuit_l,
        f_mech: m.frequency,
        m_eff: m.m_eff,
        x_zp: m.x_zp,
        total_mass: m.total_mass,
    })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn power_law_exponent<T: Real>(x: &[T], y: &[T]) -> Result<T> {
    if x.len() != y.len() || x.len() < 3 {
        return Err(Error::InvalidInput("need at least 3 matching (x, y) points".into()));
    }
    if x.iter().chain(y).any(|v| !(*v > T::zero())) {
        return Err(Error::InvalidInput("power-law fit needs positive data".into()));
    }
    let lx: Vec<T> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<T> = y.iter().map(|v| v.ln()).collect();
    let n = T::from_count(x.len());
    let mx = lx.iter().fold(T::zero(), |a, &b| a + b) / n;
    let my = ly.iter().fold(T::zero(), |a, &b| a + b) / n;
    let mut sxy = T::zero();
    let mut sxx = T::zero();
    for (a, b) in lx.iter().zip(&ly) {
        sxy += (*a - mx) * (*b - my);
        sxx += (*a - mx) * (*a - mx);
    }
    if !(sxx > T::zero()) {
        return Err(Error::InvalidInput("all x values are equal".into()));
    }
    Ok(sxy / sxx)
}

/// Fitted exponent of g₀ ∝ N^α over the given turn counts with everything
/// else in `base` held fixed.
pub fn sqrt_n_exponent<T: Real>(base: &SpiralSpec<T>, turns: &[T], circuit_l: T, opts: &CouplingOptions) -> Result<T> {
    let g0s = turns
        .iter()
        .map(|&n| {
            let mut spec = *base;
            spec.turns = n;
            compute_g0(&spec, circuit_l, opts).map(|r| r.g0)
        })
        .collect::<Result<Vec<T>>>()?;
    power_law_exponent(turns, &g0s)
}

/// `(a.g0/b.g0)²`.
pub fn cooperativity_ratio<T: Real>(a: &CouplingResult<T>, b: &CouplingResult<T>) -> Result<T> {
    if b.g0 == T::zero() {
        return Err(Error::InvalidInput("reference design has g0 = 0".into()));
    }
    let r = a.g0 / b.g0;
    Ok(r * r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_spiral;

    fn row2() -> (SpiralSpec<f64>, SpiralCurve<f64>) {
        let spec = SpiralSpec::from_nm(2000.0, 100.0, 200.0, 100.0, 5.0);
        let curve = build_spiral(&spec, 32).unwrap();
        (spec, curve)
    }

    fn uniform(curve: &SpiralCurve<f64>, v: f64) -> Profile<f64> {
        Profile {
            theta: curve.thetas().collect(),
            drho: vec![v; curve.len()],
        }
    }

    #[test]
    fn flat_capacitance_is_parallel_plate() {
        let (spec, curve) = row2();
        let c = capacitance(&curve, spec.strip_width, spec.plate_gap, None).unwrap();
        let expected = EPSILON_0 * spec.strip_width * curve.total_length / spec.plate_gap;
        assert!((c / expected - 1.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_offsets() {
        let (spec, curve) = row2();
        let d = spec.plate_gap;
        let c0 = capacitance(&curve, spec.strip_width, d, None).unwrap();
        let p = uniform(&curve, 1.0);
        let closer = capacitance(&curve, spec.strip_width, d, Some((&p, d / 2.0))).unwrap();
        let away = capacitance(&curve, spec.strip_width, d, Some((&p, -d))).unwrap();
        assert!((closer / c0 - 2.0).abs() < 1e-12);
        assert!((away / c0 - 0.5).abs() < 1e-12);
        assert!(matches!(
            capacitance(&curve, spec.strip_width, d, Some((&p, d))),
            Err(Error::Contact { .. })
        ));
    }

    #[test]
    fn cavity_identity() {
        assert_eq!(cavity_frequency::<f64>(1.0, 1.0).unwrap(), 1.0);
        let w = cavity_frequency::<f64>(70e-9, 36e-15).unwrap();
        let w4 = cavity_frequency::<f64>(70e-9, 144e-15).unwrap();
        assert!((w / w4 - 2.0).abs() < 1e-12);
        assert!(cavity_frequency::<f64>(0.0, 1.0).is_err());
    }

    #[test]
    fn exponent_of_synthetic_data() {
        let n = [5.0, 10.0, 20.0];
        let g: Vec<f64> = n.iter().map(|v: &f64| 3.0 * v.sqrt()).collect();
        assert!((power_law_exponent(&n, &g).unwrap() - 0.5).abs() < 1e-12);
        assert!(power_law_exponent(&n, &[2.0, 2.0, 2.0]).unwrap().abs() < 1e-15);
    }
}
