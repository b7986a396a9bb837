use crate::error::Result;
use crate::geometry::{Boundary, Material};
use crate::linalg::SymBand;
use crate::real::Real;

use super::element::{element_axes, local_matrices, to_global};
use super::mesh::BeamMesh;

/// Assembled stiffness and consistent mass of a beam mesh.
///
/// Rotational DOFs are stored multiplied by `rotation_scale` (the mean
/// element length) so that every DOF carries units of length; this keeps the
/// entries of `K` and `M` within a few decades of each other. Translational
/// DOFs are physical.
#[derive(Debug, Clone)]
pub struct SystemMatrices<T> {
    pub stiffness: SymBand<T>,
    pub mass: SymBand<T>,
    /// Sorted global DOF indices removed by boundary conditions.
    pub constrained: Vec<usize>,
    pub rotation_scale: T,
}

/// Sums the rotated element matrices of every element. The released spiral
/// carries no prestress, so there is no geometric stiffness term.
pub fn assemble<T: Real>(mesh: &BeamMesh<T>, material: &Material<T>) -> Result<SystemMatrices<T>> {
    material.validate()?;
    mesh.validate_chain()?;
    let n = mesh.dof_count();
    let bw = mesh
        .elements
        .iter()
        .map(|e| 6 * e.nodes[0].abs_diff(e.nodes[1]) + 5)
        .max()
        .unwrap_or(5);
    let mut stiffness = SymBand::zeros(n, bw);
    let mut mass = SymBand::zeros(n, bw);
    let ell = mesh.characteristic_length();
    let inv = T::one() / ell;
    let scale = |local: usize| if local % 6 < 3 { T::one() } else { inv };

    for el in &mesh.elements {
        let axes = element_axes(mesh, el)?;
        let (kl, ml) = local_matrices(el, material);
        let kg = to_global(&kl, &axes);
        let mg = to_global(&ml, &axes);
        let global = |local: usize| 6 * el.nodes[local / 6] + local % 6;
        for i in 0..12 {
            for j in 0..=i {
                let s = scale(i) * scale(j);
                let (gi, gj) = (global(i), global(j));
                stiffness.add(gi, gj, kg[i][j] * s);
                mass.add(gi, gj, mg[i][j] * s);
            }
        }
    }
    Ok(SystemMatrices {
        stiffness,
        mass,
        constrained: Vec::new(),
        rotation_scale: ell,
    })
}

/// Clamps the outermost node (capacitor) or both end nodes (inductor).
/// The mesh is ordered from the inner end, so the outermost node is last.
pub fn apply_boundary<T: Real>(sys: &SystemMatrices<T>, mesh: &BeamMesh<T>, boundary: Boundary) -> SystemMatrices<T> {
    let last = mesh.node_count() - 1;
    let mut nodes = vec![last];
    if boundary == Boundary::BothClamped {
        nodes.push(0);
    }
    let mut out = sys.clone();
    for node in nodes {
        out.constrained.extend(6 * node..6 * node + 6);
    }
    out.constrained.sort_unstable();
    out.constrained.dedup();
    out
}

impl<T: Real> SystemMatrices<T> {
    pub fn dof_count(&self) -> usize {
        self.stiffness.dim()
    }

    pub fn free_dofs(&self) -> Vec<usize> {
        let mut c = self.constrained.iter().peekable();
        (0..self.dof_count())
            .filter(|i| {
                while c.peek().is_some_and(|&&x| x < *i) {
                    c.next();
                }
                c.peek() != Some(&i)
            })
            .collect()
    }

    pub fn free_dof_count(&self) -> usize {
        self.dof_count() - self.constrained.len()
    }

    /// Stiffness and mass restricted to the free DOFs, with the free index list.
    pub fn reduced(&self) -> (SymBand<T>, SymBand<T>, Vec<usize>) {
        let free = self.free_dofs();
        (
            self.stiffness.principal_submatrix(&free),
            self.mass.principal_submatrix(&free),
            free,
        )
    }

    /// `eᵀ M e` for a unit rigid translation along global `axis` (0, 1, 2).
    pub fn translational_mass(&self, axis: usize) -> T {
        let n = self.dof_count();
        let e: Vec<T> = (0..n)
            .map(|i| if i % 6 == axis { T::one() } else { T::zero() })
            .collect();
        self.mass.bilinear(&e, &e)
    }

    /// Converts a vector in system coordinates to physical rotations.
    pub fn to_physical(&self, v: &[T]) -> Vec<T> {
        v.iter()
            .enumerate()
            .map(|(i, &x)| if i % 6 < 3 { x } else { x / self.rotation_scale })
            .collect()
    }

    /// Converts a physical vector (rotations in rad) to system coordinates.
    pub fn from_physical(&self, v: &[T]) -> Vec<T> {
        v.iter()
            .enumerate()
            .map(|(i, &x)| if i % 6 < 3 { x } else { x * self.rotation_scale })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beam::mesh::{mesh_spiral, Section};
    use crate::geometry::SpiralSpec;

    #[test]
    fn band_is_at_most_eighteen() {
        let spec = SpiralSpec::<f64>::from_nm(2000.0, 100.0, 200.0, 100.0, 2.0);
        let (_, mesh) = mesh_spiral(&spec, 16).unwrap();
        let sys = assemble(&mesh, &spec.material).unwrap();
        assert!(sys.stiffness.half_bandwidth() <= 18);
        assert_eq!(sys.stiffness.half_bandwidth(), 11);
    }

    #[test]
    fn boundary_counts() {
        let spec = SpiralSpec::<f64>::from_nm(2000.0, 100.0, 200.0, 100.0, 2.0);
        let (_, mesh) = mesh_spiral(&spec, 16).unwrap();
        let sys = assemble(&mesh, &spec.material).unwrap();
        let outer = apply_boundary(&sys, &mesh, Boundary::OuterClamped);
        let both = apply_boundary(&sys, &mesh, Boundary::BothClamped);
        assert_eq!(sys.free_dof_count() - outer.free_dof_count(), 6);
        assert_eq!(sys.free_dof_count() - both.free_dof_count(), 12);
        assert_eq!(*outer.constrained.first().unwrap(), 6 * (mesh.node_count() - 1));
        assert_eq!(both.free_dofs().len(), both.free_dof_count());
        assert!(!both.free_dofs().contains(&0));
    }

    #[test]
    fn zero_length_element_is_rejected() {
        let mut mesh = BeamMesh::<f64>::straight(1.0, 2, Section::rectangular(0.01, 0.01)).unwrap();
        mesh.nodes[2].position = mesh.nodes[1].position;
        mesh.elements[1].length = 0.0;
        assert!(assemble(&mesh, &Material::aluminum()).is_err());
    }
}
