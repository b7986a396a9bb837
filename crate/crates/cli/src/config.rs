use std::path::{Path, PathBuf};

use serde::Deserialize;
use spiralmech::geometry::{Boundary, Material, SpiralSpec, DEFAULT_INNER_RADIUS_NM};
use spiralmech::spectrum::SpectrumLabel;

use crate::failure::Failure;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub device: DeviceConfig,
    #[serde(default)]
    pub material: MaterialConfig,
    #[serde(default)]
    pub circuit: CircuitConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub outputs: OutputConfig,
    pub sweep: Option<SweepConfig>,
    pub fit: Option<FitConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceConfig {
    pub b_nm: Option<f64>,
    pub h_nm: f64,
    pub t_nm: Option<f64>,
    pub d_nm: f64,
    #[serde(default)]
    pub n_turns: f64,
    pub r_in_nm: Option<f64>,
    pub boundary: Option<Boundary>,
    /// Unpatterned drum instead of a spiral.
    #[serde(default)]
    pub membrane: bool,
    pub radius_um: Option<f64>,
    /// Calibrates the residual stress to this drum frequency.
    pub f_target_mhz: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialConfig {
    pub youngs_modulus_gpa: Option<f64>,
    pub poisson_ratio: Option<f64>,
    pub density_kg_m3: Option<f64>,
    pub residual_stress_mpa: Option<f64>,
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitConfig {
    pub l0_nH: Option<f64>,
    pub c_readout_fF: Option<f64>,
    #[serde(default)]
    pub c_stray_fF: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    pub elems_per_turn: usize,
    pub n_modes: usize,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            elems_per_turn: spiralmech::beam::DEFAULT_ELEMS_PER_TURN,
            n_modes: 6,
            tolerance: 1e-10,
            max_iterations: 500,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub directory: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum SweepParam {
    N,
    #[serde(alias = "b_nm")]
    #[serde(rename = "b")]
    B,
    #[serde(alias = "h_nm")]
    #[serde(rename = "h")]
    H,
    #[serde(alias = "t_nm")]
    #[serde(rename = "t")]
    T,
    #[serde(alias = "d_nm")]
    #[serde(rename = "d")]
    D,
}

impl SweepParam {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepParam::N => "N",
            SweepParam::B => "b_nm",
            SweepParam::H => "h_nm",
            SweepParam::T => "t_nm",
            SweepParam::D => "d_nm",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitConfig {
    pub spectrum: PathBuf,
    pub f_min_hz: Option<f64>,
    pub f_max_hz: Option<f64>,
    pub label: Option<SpectrumLabel>,
}

pub enum Circuit {
    Capacitor { l0: f64, c_stray: f64 },
    Inductor { c_readout: f64 },
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::config(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|e| Failure::config(format!("config {}: {e}", path.display())))?;
        // relative paths inside the config are relative to the config file
        if let Some(fit) = cfg.fit.as_mut() {
            if fit.spectrum.is_relative() {
                if let Some(dir) = path.parent() {
                    fit.spectrum = dir.join(&fit.spectrum);
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), Failure> {
        match (self.circuit.l0_nH, self.circuit.c_readout_fF) {
            (Some(_), Some(_)) => return Err(Failure::config("circuit: give exactly one of l0_nH and c_readout_fF")),
            (Some(l), None) if !(l > 0.0) => return Err(Failure::config("circuit.l0_nH must be > 0")),
            (None, Some(c)) if !(c > 0.0) => return Err(Failure::config("circuit.c_readout_fF must be > 0")),
            _ => {}
        }
        if !(self.circuit.c_stray_fF >= 0.0) {
            return Err(Failure::config("circuit.c_stray_fF must be >= 0"));
        }
        if self.solver.n_modes == 0 {
            return Err(Failure::config("solver.n_modes must be >= 1"));
        }
        if self.device.membrane {
            if self.device.radius_um.is_none() {
                return Err(Failure::config("membrane device needs radius_um"));
            }
            if self.device.f_target_mhz.is_none() && self.material.residual_stress_mpa.is_none() {
                return Err(Failure::config("membrane device needs f_target_mhz or material.residual_stress_mpa"));
            }
        } else {
            if self.device.b_nm.is_none() || self.device.t_nm.is_none() {
                return Err(Failure::config("spiral device needs b_nm and t_nm"));
            }
        }
        Ok(())
    }

    pub fn circuit(&self) -> Result<Circuit, Failure> {
        match (self.circuit.l0_nH, self.circuit.c_readout_fF) {
            (Some(l), None) => Ok(Circuit::Capacitor {
                l0: l * 1e-9,
                c_stray: self.circuit.c_stray_fF * 1e-15,
            }),
            (None, Some(c)) => Ok(Circuit::Inductor { c_readout: c * 1e-15 }),
            _ => Err(Failure::config("circuit needs l0_nH (capacitor) or c_readout_fF (inductor)")),
        }
    }

    pub fn is_inductor(&self) -> bool {
        self.circuit.c_readout_fF.is_some()
    }

    pub fn material(&self) -> Material<f64> {
        let mut m = Material::aluminum();
        let c = &self.material;
        if let Some(e) = c.youngs_modulus_gpa {
            m.youngs_modulus = e * 1e9;
        }
        if let Some(v) = c.poisson_ratio {
            m.poisson_ratio = v;
        }
        if let Some(rho) = c.density_kg_m3 {
            m.density = rho;
        }
        if let Some(s) = c.residual_stress_mpa {
            m.residual_stress = s * 1e6;
        }
        m
    }

    pub fn spec(&self) -> Result<SpiralSpec<f64>, Failure> {
        let d = &self.device;
        let (Some(b), Some(t)) = (d.b_nm, d.t_nm) else {
            return Err(Failure::config("spiral device needs b_nm and t_nm"));
        };
        let boundary = d.boundary.unwrap_or(if self.is_inductor() {
            Boundary::BothClamped
        } else {
            Boundary::OuterClamped
        });
        Ok(SpiralSpec::from_nm(b, d.h_nm, t, d.d_nm, d.n_turns)
            .with_inner_radius(d.r_in_nm.unwrap_or(DEFAULT_INNER_RADIUS_NM) * 1e-9)
            .with_boundary(boundary)
            .with_material(self.material()))
    }

    pub fn output_dir(&self, cli: Option<&Path>) -> PathBuf {
        cli.map(Path::to_path_buf)
            .or_else(|| self.outputs.directory.clone())
            .unwrap_or_else(|| PathBuf::from("."))
    }
}
