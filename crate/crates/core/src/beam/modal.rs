use serde::{Deserialize, Serialize};

use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::real::Real;
use crate::vec3::Vec3;

use super::eigen::{ModalSolution, Mode};
use super::mesh::BeamMesh;
use super::system::SystemMatrices;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Polarization {
    OutOfPlane,
    InPlane,
    Mixed,
}

impl Polarization {
    pub fn as_str(self) -> &'static str {
        match self {
            Polarization::OutOfPlane => "OutOfPlane",
            Polarization::InPlane => "InPlane",
            Polarization::Mixed => "Mixed",
        }
    }
}

impl std::fmt::Display for Polarization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn classify<T: Real>(energy_fraction_z: T) -> Polarization {
    if energy_fraction_z >= T::lit(0.8) {
        Polarization::OutOfPlane
    } else if energy_fraction_z <= T::lit(0.2) {
        Polarization::InPlane
    } else {
        Polarization::Mixed
    }
}

/// Kinetic-energy share of out-of-plane translation among all translational
/// DOFs. Rotational DOFs are dropped from both numerator and denominator.
pub fn energy_fraction_z<T: Real>(shape: &[T], mesh: &BeamMesh<T>, sys: &SystemMatrices<T>) -> T {
    let n = shape.len();
    let mut trans = vec![T::zero(); n];
    let mut z_only = vec![T::zero(); n];
    for (i, node) in mesh.nodes.iter().enumerate() {
        let u = Vec3::new(shape[6 * i], shape[6 * i + 1], shape[6 * i + 2]);
        let ez = node.out_of_plane();
        let uz = ez * u.dot(ez);
        for a in 0..3 {
            trans[6 * i + a] = shape[6 * i + a];
        }
        z_only[6 * i..6 * i + 3].copy_from_slice(&uz.to_array());
    }
    let total = sys.mass.bilinear(&trans, &trans);
    if total > T::zero() {
        (sys.mass.bilinear(&z_only, &z_only) / total).min(T::one())
    } else {
        T::zero()
    }
}

/// Radial unit vector in the spiral plane at a node.
fn radial<T: Real>(position: Vec3<T>, ez: Vec3<T>) -> Vec3<T> {
    let in_plane = position - ez * position.dot(ez);
    in_plane.normalized().unwrap_or(Vec3::zero())
}

/// Signed transverse displacement of `node`: the out-of-plane component for
/// out-of-plane and mixed modes, the in-plane magnitude (signed by its radial
/// part) for in-plane modes.
pub fn transverse_displacement<T: Real>(mode: &Mode<T>, mesh: &BeamMesh<T>, node: usize) -> T {
    let u = Vec3::from_array(mode.translation(node));
    let n = &mesh.nodes[node];
    let ez = n.out_of_plane();
    match mode.polarization {
        Polarization::InPlane => {
            let plane = u - ez * u.dot(ez);
            let r = plane.dot(radial(n.position, ez));
            let mag = plane.norm();
            if r < T::zero() {
                -mag
            } else {
                mag
            }
        }
        _ => u.dot(ez),
    }
}

/// Radial in-plane component of the displacement at `node`.
pub fn radial_displacement<T: Real>(mode: &Mode<T>, mesh: &BeamMesh<T>, node: usize) -> T {
    let u = Vec3::from_array(mode.translation(node));
    let n = &mesh.nodes[node];
    u.dot(radial(n.position, n.out_of_plane()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModalMass<T> {
    pub m_eff: T,
    pub x_zp: T,
    pub reference_node: usize,
    /// Factor applied to the M-normalized shape to put unit displacement at
    /// the reference node.
    pub scale: T,
}

/// `x_zp = √(ℏ/(2·m·Ω))`.
pub fn zero_point_motion<T: Real>(m_eff: T, omega: T) -> T {
    (T::lit(HBAR) / (T::lit(2.0) * m_eff * omega)).sqrt()
}

pub fn modal_mass_and_xzp<T: Real>(solution: &ModalSolution<T>, mesh: &BeamMesh<T>, mode_index: usize) -> Result<ModalMass<T>> {
    let mode = solution
        .modes
        .get(mode_index)
        .ok_or_else(|| Error::InvalidInput(format!("mode {mode_index} was not computed")))?;
    let mut best = (0, T::zero());
    for node in 0..mesh.node_count() {
        let w = transverse_displacement(mode, mesh, node);
        if w.abs() > best.1.abs() {
            best = (node, w);
        }
    }
    let (reference_node, w) = best;
    if !(w.abs() > T::zero()) || !(mode.omega > T::zero()) {
        return Err(Error::ZeroDisplacement { mode: mode_index });
    }
    let scale = T::one() / w;
    // φᵀMφ = 1 before scaling
    let m_eff = scale * scale;
    Ok(ModalMass {
        m_eff,
        x_zp: zero_point_motion(m_eff, mode.omega),
        reference_node,
        scale,
    })
}

/// Δρ(θ) sampled at the mesh nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile<T> {
    pub theta: Vec<T>,
    pub drho: Vec<T>,
}

impl<T: Real> Profile<T> {
    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn max_abs(&self) -> T {
        self.drho.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn argmax_abs(&self) -> usize {
        let mut best = 0;
        for (i, v) in self.drho.iter().enumerate() {
            if v.abs() > self.drho[best].abs() {
                best = i;
            }
        }
        best
    }

    pub fn negated(&self) -> Self {
        Self {
            theta: self.theta.clone(),
            drho: self.drho.iter().map(|&v| -v).collect(),
        }
    }

    pub fn scaled(&self, k: T) -> Self {
        Self {
            theta: self.theta.clone(),
            drho: self.drho.iter().map(|&v| v * k).collect(),
        }
    }

    /// Number of strict sign changes between consecutive nonzero samples.
    pub fn sign_changes(&self) -> usize {
        let mut last = T::zero();
        let mut count = 0;
        for &v in &self.drho {
            if v != T::zero() {
                if last != T::zero() && (v > T::zero()) != (last > T::zero()) {
                    count += 1;
                }
                last = v;
            }
        }
        count
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta_rad,drho_norm\n");
        for (t, d) in self.theta.iter().zip(&self.drho) {
            out.push_str(&format!("{:.9e},{:.9e}\n", t.to_f64_lossy(), d.to_f64_lossy()));
        }
        out
    }
}

/// Transverse profile of a mode normalized to 1 at the reference node.
pub fn deformation_profile<T: Real>(solution: &ModalSolution<T>, mesh: &BeamMesh<T>, mode_index: usize) -> Result<Profile<T>> {
    let mm = modal_mass_and_xzp(solution, mesh, mode_index)?;
    let mode = &solution.modes[mode_index];
    let drho = (0..mesh.node_count())
        .map(|i| transverse_displacement(mode, mesh, i) * mm.scale)
        .collect();
    Ok(Profile {
        theta: mesh.nodes.iter().map(|n| n.theta).collect(),
        drho,
    })
}

/// Radial in-plane profile, normalized like [`deformation_profile`].
pub fn radial_profile<T: Real>(solution: &ModalSolution<T>, mesh: &BeamMesh<T>, mode_index: usize) -> Result<Profile<T>> {
    let mm = modal_mass_and_xzp(solution, mesh, mode_index)?;
    let mode = &solution.modes[mode_index];
    let drho = (0..mesh.node_count())
        .map(|i| radial_displacement(mode, mesh, i) * mm.scale)
        .collect();
    Ok(Profile {
        theta: mesh.nodes.iter().map(|n| n.theta).collect(),
        drho,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds() {
        assert_eq!(classify(0.8), Polarization::OutOfPlane);
        assert_eq!(classify(0.2), Polarization::InPlane);
        assert_eq!(classify(0.5), Polarization::Mixed);
    }

    #[test]
    fn xzp_unit_scale() {
        let x = zero_point_motion(1.0_f64, 1.0);
        assert!((x - 7.2615e-18).abs() < 1e-21);
    }

    #[test]
    fn sign_changes_counts_crossings() {
        let p = Profile {
            theta: vec![0.0; 5],
            drho: vec![1.0, 0.5, 0.0, -0.2, 0.3],
        };
        assert_eq!(p.sign_changes(), 2);
        assert_eq!(p.argmax_abs(), 0);
    }
}
