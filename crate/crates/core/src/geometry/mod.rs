//! Uniform Archimedean spiral: device parametrization, centerline sampling
//! with local frames, and the strip outline used for masks and footprints.
//!
//! The centerline follows `ρ(θ) = r_in + p·θ/2π` with pitch `p = b + t`, so the
//! radial spacing between adjacent windings is constant.

mod mask;

pub use mask::{footprint_area, mask_polygon, outline, ClosedPolygon};

use serde::{Deserialize, Serialize};

use crate::constants::NM;
use crate::error::{Error, Result};
use crate::real::Real;
use crate::vec3::Vec3;

/// Default inner radius of the winding, in nm.
pub const DEFAULT_INNER_RADIUS_NM: f64 = 1000.0;

/// Default centerline sampling density.
pub const DEFAULT_SAMPLES_PER_TURN: usize = 64;

/// Coarsest sampling accepted for the centerline (and the beam mesh).
pub const MIN_SAMPLES_PER_TURN: usize = 8;

/// How the released spiral is anchored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// Capacitor: only the outer tail is attached to the mount.
    OuterClamped,
    /// Inductor: both ends are anchored so current can flow.
    BothClamped,
}

/// Isotropic linear-elastic material.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material<T> {
    /// Young's modulus, Pa.
    pub youngs_modulus: T,
    pub poisson_ratio: T,
    /// Mass density, kg/m³.
    pub density: T,
    /// In-plane residual tension, Pa. Only the unpatterned membrane uses it.
    pub residual_stress: T,
}

impl<T: Real> Material<T> {
    /// Textbook aluminium, stress free.
    pub fn aluminum() -> Self {
        Self {
            youngs_modulus: T::lit(70e9),
            poisson_ratio: T::lit(0.33),
            density: T::lit(2700.0),
            residual_stress: T::zero(),
        }
    }

    pub fn with_residual_stress(mut self, sigma: T) -> Self {
        self.residual_stress = sigma;
        self
    }

    pub fn shear_modulus(&self) -> T {
        self.youngs_modulus / (T::lit(2.0) * (T::one() + self.poisson_ratio))
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.youngs_modulus > T::zero()
            && self.density > T::zero()
            && self.poisson_ratio >= T::zero()
            && self.poisson_ratio < T::lit(0.5)
            && self.residual_stress >= T::zero();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidSpec(format!(
                "material out of range: E={}, nu={}, rho={}, sigma={}",
                self.youngs_modulus, self.poisson_ratio, self.density, self.residual_stress
            )))
        }
    }
}

/// Full device parametrization, SI units internally.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpiralSpec<T> {
    /// Strip width `b`, m.
    pub strip_width: T,
    /// Film thickness `h`, m.
    pub thickness: T,
    /// Radial gap `t` between adjacent windings, m.
    pub gap: T,
    /// Vertical gap `d` to the bottom electrode, m.
    pub plate_gap: T,
    /// Number of turns `N` (fractional allowed).
    pub turns: T,
    pub inner_radius: T,
    pub material: Material<T>,
    pub boundary: Boundary,
}

impl<T: Real> SpiralSpec<T> {
    /// Builds a capacitor spec from nanometre dimensions with the default
    /// inner radius, aluminium and an outer clamp.
    pub fn from_nm(b_nm: f64, h_nm: f64, t_nm: f64, d_nm: f64, turns: f64) -> Self {
        Self {
            strip_width: T::lit(b_nm * NM),
            thickness: T::lit(h_nm * NM),
            gap: T::lit(t_nm * NM),
            plate_gap: T::lit(d_nm * NM),
            turns: T::lit(turns),
            inner_radius: T::lit(DEFAULT_INNER_RADIUS_NM * NM),
            material: Material::aluminum(),
            boundary: Boundary::OuterClamped,
        }
    }

    pub fn with_inner_radius(mut self, r: T) -> Self {
        self.inner_radius = r;
        self
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn with_material(mut self, material: Material<T>) -> Self {
        self.material = material;
        self
    }

    /// Pitch `p = b + t`.
    pub fn pitch(&self) -> T {
        self.strip_width + self.gap
    }

    /// `ρ(2πN) = r_in + N·p`.
    pub fn outer_radius(&self) -> T {
        self.inner_radius + self.turns * self.pitch()
    }

    /// Total film mass if the strip were a straight bar of length `length`.
    pub fn strip_mass(&self, length: T) -> T {
        self.material.density * self.strip_width * self.thickness * length
    }

    pub fn validate(&self) -> Result<()> {
        let named = [
            ("strip width b", self.strip_width),
            ("thickness h", self.thickness),
            ("plate gap d", self.plate_gap),
            ("turns N", self.turns),
            ("inner radius", self.inner_radius),
        ];
        for (name, v) in named {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::InvalidSpec(format!("{name} must be > 0, got {v}")));
            }
        }
        if !(self.gap > T::zero()) {
            return Err(Error::GeometryCollision(format!(
                "gap t = {} leaves no clearance between adjacent windings",
                self.gap
            )));
        }
        self.material.validate()
    }
}

/// One centerline sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample<T> {
    /// Winding angle, rad.
    pub theta: T,
    pub position: Vec3<T>,
    /// Unit tangent, direction of increasing θ.
    pub tangent: Vec3<T>,
    /// Unit in-plane normal `ẑ × tangent`, pointing toward the center of curvature.
    pub normal: Vec3<T>,
}

/// Sampled spiral centerline.
#[derive(Debug, Clone, PartialEq)]
pub struct SpiralCurve<T> {
    pub samples: Vec<CurveSample<T>>,
    /// Arc length from the inner end to each sample, m.
    pub cumulative_arc_length: Vec<T>,
    pub total_length: T,
    pub inner_radius: T,
    pub pitch: T,
    pub turns: T,
    pub samples_per_turn: usize,
}

impl<T: Real> SpiralCurve<T> {
    /// `ρ(θ)` of the underlying law.
    pub fn radius_at(&self, theta: T) -> T {
        self.inner_radius + self.pitch * theta / T::TAU()
    }

    pub fn outer_radius(&self) -> T {
        self.radius_at(T::TAU() * self.turns)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn thetas(&self) -> impl Iterator<Item = T> + '_ {
        self.samples.iter().map(|s| s.theta)
    }

    /// Arc length of each sample interval.
    pub fn segment_lengths(&self) -> Vec<T> {
        self.cumulative_arc_length
            .windows(2)
            .map(|w| w[1] - w[0])
            .collect()
    }
}

/// Number of sample intervals for `turns` at `samples_per_turn`, i.e.
/// `ceil(N·spt)` with a guard against round-off just above an integer.
pub fn interval_count<T: Real>(turns: T, samples_per_turn: usize) -> usize {
    let x = turns.to_f64_lossy() * samples_per_turn as f64;
    let n = (x - 1e-9 * x.max(1.0)).ceil();
    (n as usize).max(1)
}

/// Samples the centerline uniformly in θ from 0 to 2πN.
pub fn build_spiral<T: Real>(spec: &SpiralSpec<T>, samples_per_turn: usize) -> Result<SpiralCurve<T>> {
    spec.validate()?;
    if samples_per_turn < MIN_SAMPLES_PER_TURN {
        return Err(Error::UnderResolution {
            what: "samples_per_turn",
            got: samples_per_turn,
            min: MIN_SAMPLES_PER_TURN,
        });
    }
    let intervals = interval_count(spec.turns, samples_per_turn);
    let theta_end = T::TAU() * spec.turns;
    let step = theta_end / T::from_count(intervals);
    let a = spec.pitch() / T::TAU();
    let r_in = spec.inner_radius;
    let radius = |theta: T| r_in + a * theta;
    let speed = |theta: T| {
        let r = radius(theta);
        (r * r + a * a).sqrt()
    };

    let mut samples = Vec::with_capacity(intervals + 1);
    let mut cumulative = Vec::with_capacity(intervals + 1);
    let mut s = T::zero();
    for k in 0..=intervals {
        let theta = if k == intervals {
            theta_end
        } else {
            step * T::from_count(k)
        };
        if k > 0 {
            // Composite Simpson on the exact arc-length integrand.
            let t0 = samples.last().map(|p: &CurveSample<T>| p.theta).unwrap_or_else(T::zero);
            let mid = (t0 + theta) / T::lit(2.0);
            s += (theta - t0) / T::lit(6.0) * (speed(t0) + T::lit(4.0) * speed(mid) + speed(theta));
        }
        let (sin, cos) = theta.sin_cos();
        let r = radius(theta);
        let position = Vec3::new(r * cos, r * sin, T::zero());
        let v = speed(theta);
        let tangent = Vec3::new((a * cos - r * sin) / v, (a * sin + r * cos) / v, T::zero());
        let normal = Vec3::unit_z().cross(tangent);
        samples.push(CurveSample {
            theta,
            position,
            tangent,
            normal,
        });
        cumulative.push(s);
    }

    Ok(SpiralCurve {
        samples,
        cumulative_arc_length: cumulative,
        total_length: s,
        inner_radius: r_in,
        pitch: spec.pitch(),
        turns: spec.turns,
        samples_per_turn,
    })
}
