//! Suspended spiral inductor: current-sheet self-inductance and the
//! in-plane pinching mode.

use serde::{Deserialize, Serialize};

use crate::beam::{analyze_with, modal_mass_and_xzp, radial_profile, Polarization, Profile};
use crate::constants::MU_0;
use crate::electromech::{cavity_frequency, CouplingOptions};
use crate::error::{Error, Result};
use crate::geometry::{Boundary, SpiralCurve, SpiralSpec};
use crate::real::Real;

/// Circular-spiral coefficients of the current-sheet expression.
const C1: f64 = 1.00;
const C2: f64 = 2.46;
const C3: f64 = 0.0;
const C4: f64 = 0.20;

/// `L = μ₀N²·d_avg·c₁/2·(ln(c₂/ρ) + c₃ρ + c₄ρ²)` from the inner and outer
/// conductor radii.
pub fn current_sheet_inductance<T: Real>(turns: T, r_inner: T, r_outer: T) -> Result<T> {
    let d_in = T::lit(2.0) * r_inner;
    let d_out = T::lit(2.0) * r_outer;
    let d_avg = (d_in + d_out) / T::lit(2.0);
    let fill = (d_out - d_in) / (d_out + d_in);
    if !(fill > T::zero() && fill < T::one()) {
        return Err(Error::InvalidSpec(format!("fill ratio {fill} outside (0, 1)")));
    }
    let bracket = (T::lit(C2) / fill).ln() + T::lit(C3) * fill + T::lit(C4) * fill * fill;
    Ok(T::lit(MU_0) * turns * turns * d_avg * T::lit(C1) / T::lit(2.0) * bracket)
}

/// Self-inductance of an undeformed spiral. The conductor extends `b/2`
/// beyond the centerline at both ends.
pub fn spiral_inductance<T: Real>(spec: &SpiralSpec<T>) -> Result<T> {
    if spec.turns < T::one() {
        return Err(Error::InvalidSpec("inductor needs at least one turn".into()));
    }
    let half = spec.strip_width / T::lit(2.0);
    current_sheet_inductance(spec.turns, spec.inner_radius - half, spec.outer_radius() + half)
}

/// Mean and standard deviation over θ of a piecewise-linear `ρ(θ)`.
fn radius_moments<T: Real>(theta: &[T], rho: &[T]) -> (T, T) {
    let mut s1 = T::zero();
    let mut s2 = T::zero();
    let mut span = T::zero();
    for k in 0..theta.len() - 1 {
        let h = theta[k + 1] - theta[k];
        let (a, b) = (rho[k], rho[k + 1]);
        s1 += h * (a + b) / T::lit(2.0);
        s2 += h * (a * a + a * b + b * b) / T::lit(3.0);
        span += h;
    }
    let mean = s1 / span;
    let var = (s2 / span - mean * mean).max(T::zero());
    (mean, var.sqrt())
}

/// Current-sheet inductance of a (possibly deformed) winding given by its
/// centerline radius at each sample. The equivalent uniform spiral has the
/// same mean and spread of ρ over θ, i.e. `mean ∓ √3·std`.
pub fn curve_inductance<T: Real>(theta: &[T], rho: &[T], turns: T, strip_width: T) -> Result<T> {
    if theta.len() != rho.len() || theta.len() < 2 {
        return Err(Error::InvalidInput("radius samples do not match the curve".into()));
    }
    let (mean, std) = radius_moments(theta, rho);
    let spread = T::lit(3.0).sqrt() * std;
    let half = strip_width / T::lit(2.0);
    current_sheet_inductance(turns, mean - spread - half, mean + spread + half)
}

/// `dL/dx` by central difference: the centerline is displaced radially by
/// `±step·Δρ(θ)`.
pub fn inductance_derivative<T: Real>(
    curve: &SpiralCurve<T>,
    strip_width: T,
    profile: &Profile<T>,
    step: T,
) -> Result<T> {
    if profile.len() != curve.len() {
        return Err(Error::InvalidInput("profile and curve lengths differ".into()));
    }
    let theta: Vec<T> = curve.thetas().collect();
    let base: Vec<T> = theta.iter().map(|&t| curve.radius_at(t)).collect();
    let shifted = |sign: T| -> Vec<T> {
        base.iter()
            .zip(&profile.drho)
            .map(|(&r, &d)| r + sign * step * d)
            .collect()
    };
    let plus = curve_inductance(&theta, &shifted(T::one()), curve.turns, strip_width)?;
    let minus = curve_inductance(&theta, &shifted(-T::one()), curve.turns, strip_width)?;
    Ok((plus - minus) / (T::lit(2.0) * step))
}

/// Default finite-difference step relative to the average diameter.
pub const STEP_FRACTION: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InductorResult<T> {
    pub l_self: T,
    pub dl_dx: T,
    pub c_readout: T,
    pub omega_cav: T,
    /// ∂ω/∂x, rad/s/m.
    pub pull: T,
    pub g0: T,
    pub mode_frequency: T,
    pub m_eff: T,
    pub x_zp: T,
}

impl<T: Real> InductorResult<T> {
    pub fn report(&self) -> InductorReport {
        let f = |v: T| v.to_f64_lossy();
        InductorReport {
            l_self_nH: f(self.l_self) * 1e9,
            dl_dx_nH_per_um: f(self.dl_dx) * 1e3,
            c_readout_fF: f(self.c_readout) * 1e15,
            f_cav_ghz: f(self.omega_cav) / std::f64::consts::TAU * 1e-9,
            g0_over_2pi_hz: f(self.g0) / std::f64::consts::TAU,
            f_mech_khz: f(self.mode_frequency) * 1e-3,
            m_eff_kg: f(self.m_eff),
            x_zp_m: f(self.x_zp),
        }
    }
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InductorReport {
    pub l_self_nH: f64,
    pub dl_dx_nH_per_um: f64,
    pub c_readout_fF: f64,
    pub f_cav_ghz: f64,
    pub g0_over_2pi_hz: f64,
    pub f_mech_khz: f64,
    pub m_eff_kg: f64,
    pub x_zp_m: f64,
}

/// Inductive g₀ of a both-clamped spiral through its in-plane fundamental.
pub fn inductor_g0<T: Real>(spec: &SpiralSpec<T>, c_readout: T, opts: &CouplingOptions) -> Result<InductorResult<T>> {
    if spec.boundary != Boundary::BothClamped {
        return Err(Error::InvalidSpec("a spiral inductor must be both_clamped".into()));
    }
    let l_self = spiral_inductance(spec)?;
    let run = analyze_with(spec, opts.elems_per_turn, 1, &opts.solver)?;
    let mode = run.solution.fundamental();
    if mode.polarization != Polarization::InPlane {
        return Err(Error::ModePolarization {
            expected: Polarization::InPlane.as_str(),
            found: mode.polarization.as_str(),
        });
    }
    let mm = modal_mass_and_xzp(&run.solution, &run.mesh, 0)?;
    let profile = radial_profile(&run.solution, &run.mesh, 0)?;
    let d_avg = spec.inner_radius + spec.outer_radius();
    let dl_dx = inductance_derivative(&run.curve, spec.strip_width, &profile, d_avg * T::lit(STEP_FRACTION))?;
    let omega_cav = cavity_frequency(l_self, c_readout)?;
    let pull = -(omega_cav / (T::lit(2.0) * l_self)) * dl_dx;
    Ok(InductorResult {
        l_self,
        dl_dx,
        c_readout,
        omega_cav,
        pull,
        g0: mm.x_zp * pull.abs(),
        mode_frequency: mode.frequency,
        m_eff: mm.m_eff,
        x_zp: mm.x_zp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_spiral;

    fn mm_spec() -> SpiralSpec<f64> {
        SpiralSpec::from_nm(1000.0, 2000.0, 24_000.0, 100.0, 10.0)
            .with_inner_radius(250e-6)
            .with_boundary(Boundary::BothClamped)
    }

    #[test]
    fn undeformed_curve_matches_closed_form() {
        let spec = mm_spec();
        let curve = build_spiral(&spec, 32).unwrap();
        let theta: Vec<f64> = curve.thetas().collect();
        let rho: Vec<f64> = theta.iter().map(|&t| curve.radius_at(t)).collect();
        let a = curve_inductance(&theta, &rho, spec.turns, spec.strip_width).unwrap();
        let b = spiral_inductance(&spec).unwrap();
        assert!((a / b - 1.0).abs() < 1e-10);
    }

    #[test]
    fn lateral_scaling_is_linear() {
        let l1 = current_sheet_inductance::<f64>(10.0, 1e-4, 5e-4).unwrap();
        let l3 = current_sheet_inductance::<f64>(10.0, 3e-4, 15e-4).unwrap();
        assert!((l3 / l1 - 3.0).abs() < 1e-12);
        let l2n = current_sheet_inductance::<f64>(20.0, 1e-4, 5e-4).unwrap();
        assert!((l2n / l1 - 4.0).abs() < 1e-12);
    }

    #[test]
    fn fill_ratio_bounds() {
        assert!(current_sheet_inductance::<f64>(10.0, 5e-4, 5e-4).is_err());
        assert!(current_sheet_inductance::<f64>(10.0, -1e-4, 5e-4).is_err());
    }

    #[test]
    fn zero_profile_has_no_pull() {
        let spec = mm_spec();
        let curve = build_spiral(&spec, 32).unwrap();
        let p = Profile {
            theta: curve.thetas().collect(),
            drho: vec![0.0; curve.len()],
        };
        assert_eq!(inductance_derivative(&curve, spec.strip_width, &p, 1e-7).unwrap(), 0.0);
    }
}
