//! 12-DOF Euler–Bernoulli space-frame element: axial, two bending planes and
//! St. Venant torsion, with consistent mass including rotary inertia.
//!
//! Local DOF order per node: `ux, uy, uz, rx, ry, rz`.

use crate::error::{Error, Result};
use crate::geometry::Material;
use crate::real::Real;
use crate::vec3::Vec3;

use super::mesh::{BeamElement, BeamMesh};

pub type Block12<T> = [[T; 12]; 12];

fn zero12<T: Real>() -> Block12<T> {
    [[T::zero(); 12]; 12]
}

fn scatter4<T: Real>(target: &mut Block12<T>, dofs: [usize; 4], block: [[T; 4]; 4], sign: [T; 4]) {
    for a in 0..4 {
        for b in 0..4 {
            target[dofs[a]][dofs[b]] += sign[a] * sign[b] * block[a][b];
        }
    }
}

fn scatter2<T: Real>(target: &mut Block12<T>, dofs: [usize; 2], diag: T, off: T) {
    target[dofs[0]][dofs[0]] += diag;
    target[dofs[1]][dofs[1]] += diag;
    target[dofs[0]][dofs[1]] += off;
    target[dofs[1]][dofs[0]] += off;
}

/// Local stiffness and consistent mass of one element.
pub fn local_matrices<T: Real>(el: &BeamElement<T>, material: &Material<T>) -> (Block12<T>, Block12<T>) {
    let l = el.length;
    let s = &el.section;
    let e = material.youngs_modulus;
    let g = material.shear_modulus();
    let rho = material.density;
    let c = T::lit;

    let mut k = zero12();
    let mut m = zero12();

    let ea = e * s.area / l;
    scatter2(&mut k, [0, 6], ea, -ea);
    let gj = g * s.torsion / l;
    scatter2(&mut k, [3, 9], gj, -gj);

    let bending = |ei: T| {
        let l2 = l * l;
        let f = ei / (l2 * l);
        [
            [c(12.0) * f, c(6.0) * l * f, -c(12.0) * f, c(6.0) * l * f],
            [c(6.0) * l * f, c(4.0) * l2 * f, -c(6.0) * l * f, c(2.0) * l2 * f],
            [-c(12.0) * f, -c(6.0) * l * f, c(12.0) * f, -c(6.0) * l * f],
            [c(6.0) * l * f, c(2.0) * l2 * f, -c(6.0) * l * f, c(4.0) * l2 * f],
        ]
    };
    let translational = |mass: T| {
        let l2 = l * l;
        let f = mass / c(420.0);
        [
            [c(156.0) * f, c(22.0) * l * f, c(54.0) * f, -c(13.0) * l * f],
            [c(22.0) * l * f, c(4.0) * l2 * f, c(13.0) * l * f, -c(3.0) * l2 * f],
            [c(54.0) * f, c(13.0) * l * f, c(156.0) * f, -c(22.0) * l * f],
            [-c(13.0) * l * f, -c(3.0) * l2 * f, -c(22.0) * l * f, c(4.0) * l2 * f],
        ]
    };
    let rotary = |inertia: T| {
        let l2 = l * l;
        let f = rho * inertia / (c(30.0) * l);
        [
            [c(36.0) * f, c(3.0) * l * f, -c(36.0) * f, c(3.0) * l * f],
            [c(3.0) * l * f, c(4.0) * l2 * f, -c(3.0) * l * f, -l2 * f],
            [-c(36.0) * f, -c(3.0) * l * f, c(36.0) * f, -c(3.0) * l * f],
            [c(3.0) * l * f, -l2 * f, -c(3.0) * l * f, c(4.0) * l2 * f],
        ]
    };

    let one = T::one();
    // v (local y) with rz: in-plane bending.
    let xy = [1, 5, 7, 11];
    let xy_sign = [one, one, one, one];
    // w (local z) with ry: out-of-plane bending, ry = −dw/dx.
    let xz = [2, 4, 8, 10];
    let xz_sign = [one, -one, one, -one];

    scatter4(&mut k, xy, bending(e * s.i_in_plane), xy_sign);
    scatter4(&mut k, xz, bending(e * s.i_out_of_plane), xz_sign);

    let mass = rho * s.area * l;
    scatter2(&mut m, [0, 6], mass / c(3.0), mass / c(6.0));
    let torsional = rho * s.polar() * l;
    scatter2(&mut m, [3, 9], torsional / c(3.0), torsional / c(6.0));
    scatter4(&mut m, xy, translational(mass), xy_sign);
    scatter4(&mut m, xz, translational(mass), xz_sign);
    scatter4(&mut m, xy, rotary(s.i_in_plane), xy_sign);
    scatter4(&mut m, xz, rotary(s.i_out_of_plane), xz_sign);

    (k, m)
}

/// Local axes of an element as rows: chord direction, in-plane transverse,
/// out-of-plane. The out-of-plane reference is taken from the first node's
/// frame so the result follows rigid rotations of the mesh.
pub fn element_axes<T: Real>(mesh: &BeamMesh<T>, el: &BeamElement<T>) -> Result<[Vec3<T>; 3]> {
    let a = &mesh.nodes[el.nodes[0]];
    let b = &mesh.nodes[el.nodes[1]];
    let chord = b.position - a.position;
    let ex = chord
        .normalized()
        .filter(|_| el.length > T::zero())
        .ok_or_else(|| Error::InvalidSystem(format!("zero-length element between nodes {} and {}", el.nodes[0], el.nodes[1])))?;
    let reference = a.out_of_plane();
    let ez_raw = reference - ex * reference.dot(ex);
    let ez = ez_raw
        .normalized()
        .ok_or_else(|| Error::InvalidSystem(format!("element {:?} is parallel to its frame normal", el.nodes)))?;
    let ey = ez.cross(ex);
    Ok([ex, ey, ez])
}

/// `Tᵀ A T` with `T = diag(R, R, R, R)` and `R` holding the local axes as rows.
pub fn to_global<T: Real>(local: &Block12<T>, axes: &[Vec3<T>; 3]) -> Block12<T> {
    let r = [axes[0].to_array(), axes[1].to_array(), axes[2].to_array()];
    // tmp = A T
    let mut tmp = zero12();
    for i in 0..12 {
        for bj in 0..4 {
            for j in 0..3 {
                let mut acc = T::zero();
                for k in 0..3 {
                    acc += local[i][3 * bj + k] * r[k][j];
                }
                tmp[i][3 * bj + j] = acc;
            }
        }
    }
    let mut out = zero12();
    for bi in 0..4 {
        for i in 0..3 {
            for j in 0..12 {
                let mut acc = T::zero();
                for k in 0..3 {
                    acc += r[k][i] * tmp[3 * bi + k][j];
                }
                out[3 * bi + i][j] = acc;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beam::mesh::Section;

    #[test]
    fn local_matrices_are_symmetric() {
        let el = BeamElement {
            nodes: [0, 1],
            length: 1.3e-6,
            section: Section::rectangular(2e-6, 1e-7),
        };
        let (k, m) = local_matrices(&el, &Material::<f64>::aluminum());
        for i in 0..12 {
            for j in 0..12 {
                assert_eq!(k[i][j], k[j][i]);
                assert_eq!(m[i][j], m[j][i]);
            }
        }
    }

    #[test]
    fn rigid_translation_carries_element_mass() {
        let el = BeamElement {
            nodes: [0, 1],
            length: 0.5,
            section: Section::rectangular(0.02, 0.01),
        };
        let mat = Material::<f64>::aluminum();
        let (k, m) = local_matrices(&el, &mat);
        for axis in 0..3 {
            let mut u = [0.0; 12];
            u[axis] = 1.0;
            u[6 + axis] = 1.0;
            let mut mu = 0.0;
            for i in 0..12 {
                let ku: f64 = (0..12).map(|j| k[i][j] * u[j]).sum();
                assert!(ku.abs() < 1e-6, "rigid translation strains the element");
                mu += u[i] * (0..12).map(|j| m[i][j] * u[j]).sum::<f64>();
            }
            let want = mat.density * 0.02 * 0.01 * 0.5;
            assert!((mu / want - 1.0).abs() < 1e-12);
        }
    }
}
