pub mod analysis;
pub mod eigen;
pub mod element;
pub mod membrane;
pub mod mesh;
pub mod modal;
pub mod system;

pub use analysis::{analyze, analyze_with, SpiralModes, DEFAULT_ELEMS_PER_TURN};
pub use eigen::{relative_residual, solve_modes, solve_modes_with, ModalSolution, Mode, SolveMethod, SolverOptions};
pub use element::{element_axes, local_matrices};
pub use membrane::{bessel_j, calibrate_stress, membrane_frequency, membrane_mode, MembraneMode};
pub use mesh::{discretize, mesh_spiral, rectangular_torsion_constant, BeamElement, BeamMesh, MeshNode, Section};
pub use modal::{
    classify, deformation_profile, energy_fraction_z, modal_mass_and_xzp, radial_profile, zero_point_motion, ModalMass,
    Polarization, Profile,
};
pub use system::{apply_boundary, assemble, SystemMatrices};
