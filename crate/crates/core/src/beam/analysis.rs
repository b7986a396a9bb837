use crate::error::Result;
use crate::geometry::{SpiralCurve, SpiralSpec};
use crate::real::Real;

use super::eigen::{solve_modes_with, ModalSolution, SolverOptions};
use super::mesh::{mesh_spiral, BeamMesh};
use super::system::{apply_boundary, assemble, SystemMatrices};

pub const DEFAULT_ELEMS_PER_TURN: usize = 32;

/// Everything produced on the way from a spec to its modes.
#[derive(Debug, Clone)]
pub struct SpiralModes<T> {
    pub curve: SpiralCurve<T>,
    pub mesh: BeamMesh<T>,
    pub system: SystemMatrices<T>,
    pub solution: ModalSolution<T>,
}

pub fn analyze<T: Real>(spec: &SpiralSpec<T>, elems_per_turn: usize, n_modes: usize) -> Result<SpiralModes<T>> {
    analyze_with(spec, elems_per_turn, n_modes, &SolverOptions::default())
}

pub fn analyze_with<T: Real>(
    spec: &SpiralSpec<T>,
    elems_per_turn: usize,
    n_modes: usize,
    opts: &SolverOptions,
) -> Result<SpiralModes<T>> {
    spec.validate()?;
    let (curve, mesh) = mesh_spiral(spec, elems_per_turn)?;
    let free = assemble(&mesh, &spec.material)?;
    let system = apply_boundary(&free, &mesh, spec.boundary);
    let solution = solve_modes_with(&system, &mesh, n_modes, opts)?;
    Ok(SpiralModes {
        curve,
        mesh,
        system,
        solution,
    })
}
