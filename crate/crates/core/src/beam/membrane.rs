//! Clamped circular membrane under residual tension.

use crate::constants::{BESSEL_J0_ZERO, EPSILON_0};
use crate::error::{Error, Result};
use crate::geometry::Material;
use crate::real::Real;

use super::modal::zero_point_motion;

/// `J_n(x)` for n = 0, 1 by power series; accurate for |x| ≲ 10.
pub fn bessel_j<T: Real>(order: u32, x: T) -> T {
    let half = x / T::lit(2.0);
    let q = -half * half;
    let mut term = if order == 0 { T::one() } else { half };
    let mut total = term;
    for k in 1..60 {
        term *= q / (T::from_count(k) * T::from_count(k + order as usize));
        total += term;
        if term.abs() <= T::machine_epsilon() * total.abs() {
            break;
        }
    }
    total
}

/// `f = j₀₁/(2πR)·√(σ/ρ)`.
pub fn membrane_frequency<T: Real>(radius: T, material: &Material<T>) -> Result<T> {
    if !(radius > T::zero()) {
        return Err(Error::InvalidSpec("membrane radius must be positive".into()));
    }
    if !(material.residual_stress > T::zero()) {
        return Err(Error::InvalidSpec("membrane needs a positive residual stress".into()));
    }
    Ok(T::lit(BESSEL_J0_ZERO) / (T::TAU() * radius) * (material.residual_stress / material.density).sqrt())
}

/// Stress that puts the fundamental at `frequency`.
pub fn calibrate_stress<T: Real>(radius: T, density: T, frequency: T) -> Result<T> {
    if !(radius > T::zero() && density > T::zero() && frequency > T::zero()) {
        return Err(Error::InvalidSpec("radius, density and frequency must be positive".into()));
    }
    let v = frequency * T::TAU() * radius / T::lit(BESSEL_J0_ZERO);
    Ok(density * v * v)
}

/// Fundamental drum mode, `w(r) = J₀(j₀₁ r/R)`, unit displacement at the center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembraneMode<T> {
    pub frequency: T,
    pub omega: T,
    pub total_mass: T,
    /// `m·J₁(j₀₁)²`.
    pub m_eff: T,
    pub x_zp: T,
    /// Mean displacement over the area, `2J₁(j₀₁)/j₀₁`.
    pub participation: T,
    pub c0: T,
    /// `ε₀πR²·participation/d²`.
    pub dc_dx: T,
}

pub fn membrane_mode<T: Real>(radius: T, thickness: T, plate_gap: T, material: &Material<T>) -> Result<MembraneMode<T>> {
    if !(thickness > T::zero() && plate_gap > T::zero()) {
        return Err(Error::InvalidSpec("membrane thickness and gap must be positive".into()));
    }
    let frequency = membrane_frequency(radius, material)?;
    let omega = frequency * T::TAU();
    let j01 = T::lit(BESSEL_J0_ZERO);
    let j1 = bessel_j(1, j01);
    let area = T::PI() * radius * radius;
    let total_mass = material.density * area * thickness;
    let m_eff = total_mass * j1 * j1;
    let participation = T::lit(2.0) * j1 / j01;
    let c0 = T::lit(EPSILON_0) * area / plate_gap;
    Ok(MembraneMode {
        frequency,
        omega,
        total_mass,
        m_eff,
        x_zp: zero_point_motion(m_eff, omega),
        participation,
        c0,
        dc_dx: c0 * participation / plate_gap,
    })
}
