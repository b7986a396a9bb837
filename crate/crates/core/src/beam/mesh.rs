use crate::error::{Error, Result};
use crate::geometry::{build_spiral, SpiralCurve, SpiralSpec, MIN_SAMPLES_PER_TURN};
use crate::real::Real;
use crate::vec3::{Rotation, Vec3};

/// Rectangular cross-section properties. The local y axis runs across the
/// width `b` (in the spiral plane), local z across the thickness `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Section<T> {
    /// `b·h`, m².
    pub area: T,
    /// `b·h³/12`, governs out-of-plane bending, m⁴.
    pub i_out_of_plane: T,
    /// `h·b³/12`, governs in-plane bending, m⁴.
    pub i_in_plane: T,
    /// St. Venant torsion constant, m⁴.
    pub torsion: T,
}

impl<T: Real> Section<T> {
    pub fn rectangular(width: T, thickness: T) -> Self {
        let twelve = T::lit(12.0);
        Self {
            area: width * thickness,
            i_out_of_plane: width * thickness.powi(3) / twelve,
            i_in_plane: thickness * width.powi(3) / twelve,
            torsion: rectangular_torsion_constant(width, thickness),
        }
    }

    /// Polar moment of area, used for torsional inertia.
    pub fn polar(&self) -> T {
        self.i_out_of_plane + self.i_in_plane
    }

    fn is_valid(&self) -> bool {
        [self.area, self.i_out_of_plane, self.i_in_plane, self.torsion]
            .iter()
            .all(|&v| v > T::zero() && v.is_finite())
    }
}

/// `J = a·c³·(1/3 − 0.21·(c/a)·(1 − c⁴/(12a⁴)))` with `a` the long side and
/// `c` the short side of the rectangle.
pub fn rectangular_torsion_constant<T: Real>(b: T, h: T) -> T {
    let a = b.max(h);
    let c = b.min(h);
    let ratio = c / a;
    a * c.powi(3) * (T::one() / T::lit(3.0) - T::lit(0.21) * ratio * (T::one() - ratio.powi(4) / T::lit(12.0)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshNode<T> {
    pub position: Vec3<T>,
    /// Tangent, in-plane normal and out-of-plane unit vectors.
    pub frame: [Vec3<T>; 3],
    /// Winding angle of the node, rad.
    pub theta: T,
}

impl<T: Real> MeshNode<T> {
    pub fn tangent(&self) -> Vec3<T> {
        self.frame[0]
    }

    pub fn in_plane_normal(&self) -> Vec3<T> {
        self.frame[1]
    }

    pub fn out_of_plane(&self) -> Vec3<T> {
        self.frame[2]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamElement<T> {
    pub nodes: [usize; 2],
    pub length: T,
    pub section: Section<T>,
}

/// Open chain of two-node beam elements, numbered consecutively.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamMesh<T> {
    pub nodes: Vec<MeshNode<T>>,
    pub elements: Vec<BeamElement<T>>,
}

/// Straight elements between consecutive centerline samples; the curve's
/// sampling density is the element density.
pub fn discretize<T: Real>(curve: &SpiralCurve<T>, spec: &SpiralSpec<T>) -> Result<BeamMesh<T>> {
    if curve.samples_per_turn < MIN_SAMPLES_PER_TURN {
        return Err(Error::UnderResolution {
            what: "elems_per_turn",
            got: curve.samples_per_turn,
            min: MIN_SAMPLES_PER_TURN,
        });
    }
    let section = Section::rectangular(spec.strip_width, spec.thickness);
    let nodes: Vec<MeshNode<T>> = curve
        .samples
        .iter()
        .map(|s| MeshNode {
            position: s.position,
            frame: [s.tangent, s.normal, Vec3::unit_z()],
            theta: s.theta,
        })
        .collect();
    BeamMesh::chain(nodes, section)
}

/// Samples the spiral at `elems_per_turn` and meshes it.
pub fn mesh_spiral<T: Real>(spec: &SpiralSpec<T>, elems_per_turn: usize) -> Result<(SpiralCurve<T>, BeamMesh<T>)> {
    if elems_per_turn < MIN_SAMPLES_PER_TURN {
        return Err(Error::UnderResolution {
            what: "elems_per_turn",
            got: elems_per_turn,
            min: MIN_SAMPLES_PER_TURN,
        });
    }
    let curve = build_spiral(spec, elems_per_turn)?;
    let mesh = discretize(&curve, spec)?;
    Ok((curve, mesh))
}

impl<T: Real> BeamMesh<T> {
    /// Connects consecutive nodes with elements of a common section.
    pub fn chain(nodes: Vec<MeshNode<T>>, section: Section<T>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidSpec("a beam mesh needs at least two nodes".into()));
        }
        if !section.is_valid() {
            return Err(Error::InvalidSpec(format!("section properties must be > 0: {section:?}")));
        }
        let elements = nodes
            .windows(2)
            .enumerate()
            .map(|(k, w)| BeamElement {
                nodes: [k, k + 1],
                length: (w[1].position - w[0].position).norm(),
                section,
            })
            .collect();
        Ok(Self { nodes, elements })
    }

    /// Straight beam along +x with `n_elements` equal elements.
    pub fn straight(length: T, n_elements: usize, section: Section<T>) -> Result<Self> {
        let frame = [
            Vec3::new(T::one(), T::zero(), T::zero()),
            Vec3::new(T::zero(), T::one(), T::zero()),
            Vec3::unit_z(),
        ];
        let nodes = (0..=n_elements)
            .map(|k| {
                let x = length * T::from_count(k) / T::from_count(n_elements.max(1));
                MeshNode {
                    position: Vec3::new(x, T::zero(), T::zero()),
                    frame,
                    theta: T::zero(),
                }
            })
            .collect();
        Self::chain(nodes, section)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn element_count(&self) -> usize {
        self.elements.len()
    }

    pub fn dof_count(&self) -> usize {
        6 * self.nodes.len()
    }

    pub fn total_length(&self) -> T {
        crate::real::sum(self.elements.iter().map(|e| e.length))
    }

    /// Mean element length, used to scale rotational DOFs.
    pub fn characteristic_length(&self) -> T {
        self.total_length() / T::from_count(self.elements.len())
    }

    /// Rigidly rotated copy (positions and frames).
    pub fn rotated(&self, rotation: &Rotation<T>) -> Self {
        let nodes = self
            .nodes
            .iter()
            .map(|n| MeshNode {
                position: rotation.apply(n.position),
                frame: n.frame.map(|v| rotation.apply(v)),
                theta: n.theta,
            })
            .collect();
        Self {
            nodes,
            elements: self.elements.clone(),
        }
    }

    /// Checks the single-open-chain topology: every node has degree ≤ 2 and
    /// there are exactly two endpoints.
    pub fn validate_chain(&self) -> Result<()> {
        let mut degree = vec![0usize; self.nodes.len()];
        for e in &self.elements {
            for &n in &e.nodes {
                if n >= self.nodes.len() {
                    return Err(Error::InvalidSystem(format!("element references missing node {n}")));
                }
                degree[n] += 1;
            }
        }
        let ends = degree.iter().filter(|&&d| d == 1).count();
        if degree.iter().any(|&d| d == 0 || d > 2) || ends != 2 {
            return Err(Error::InvalidSystem("mesh is not a single open chain".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row2_mesh_counts() {
        let spec = SpiralSpec::<f64>::from_nm(2000.0, 100.0, 200.0, 100.0, 5.0);
        let (_, mesh) = mesh_spiral(&spec, 32).unwrap();
        assert_eq!(mesh.element_count(), 160);
        assert_eq!(mesh.node_count(), 161);
        assert_eq!(mesh.dof_count(), 966);
        mesh.validate_chain().unwrap();
    }

    #[test]
    fn out_of_plane_inertia_of_row2_strip() {
        let s = Section::<f64>::rectangular(2e-6, 1e-7);
        assert!((s.i_out_of_plane / 1.6666666666666667e-28 - 1.0).abs() < 1e-12);
        assert!((s.i_in_plane / (1e-7 * 8e-18 / 12.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn torsion_constant_is_symmetric_and_thin_strip_limit() {
        let j1 = rectangular_torsion_constant::<f64>(2e-6, 1e-7);
        let j2 = rectangular_torsion_constant::<f64>(1e-7, 2e-6);
        assert_eq!(j1, j2);
        // thin strip → a c³ / 3 (1 − 0.63 c/a)
        let thin = 2e-6 * 1e-21 / 3.0 * (1.0 - 0.63 * 0.05);
        assert!((j1 / thin - 1.0).abs() < 1e-6);
        // square: 0.1406 a⁴ (tabulated)
        let sq = rectangular_torsion_constant::<f64>(1.0, 1.0);
        assert!((sq - 0.1406).abs() < 1e-3);
    }

    #[test]
    fn under_resolved_mesh_is_rejected() {
        let spec = SpiralSpec::<f64>::from_nm(2000.0, 100.0, 200.0, 100.0, 5.0);
        assert!(matches!(mesh_spiral(&spec, 4), Err(Error::UnderResolution { .. })));
    }
}
