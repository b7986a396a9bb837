use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use spiralmech::beam::{
    analyze_with, calibrate_stress, deformation_profile, radial_profile, Polarization, SolverOptions,
};
use spiralmech::electromech::{compute_g0, membrane_g0, power_law_exponent, CouplingOptions, CouplingReport};
use spiralmech::geometry::{build_spiral, mask_polygon, DEFAULT_SAMPLES_PER_TURN};
use spiralmech::inductor::inductor_g0;
use spiralmech::plot::profile_svg;
use spiralmech::reference::{ReferenceRow, MEMBRANE_RADIUS, REFERENCE_ROWS};
use spiralmech::spectrum::{
    fit_lorentzian, load_spectrum, read_spectrum, synthetic_spectrum, LorentzianParams, NoiseModel, Spectrum,
    SpectrumLabel,
};
use spiralmech::SpiralSpecF64;

use crate::config::{Circuit, RunConfig, SweepParam};
use crate::failure::Failure;

pub struct Context {
    pub config: Option<RunConfig>,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub pool: rayon::ThreadPool,
}

impl Context {
    fn config(&self) -> Result<&RunConfig, Failure> {
        self.config
            .as_ref()
            .ok_or_else(|| Failure::config("this command needs --config PATH"))
    }

    fn out_dir(&self) -> PathBuf {
        match &self.config {
            Some(c) => c.output_dir(self.out.as_deref()),
            None => self.out.clone().unwrap_or_else(|| PathBuf::from(".")),
        }
    }

    fn write(&self, name: &str, contents: &str) -> Result<PathBuf, Failure> {
        let dir = self.out_dir();
        fs::create_dir_all(&dir).map_err(|e| Failure::io(&dir, e))?;
        let path = dir.join(name);
        fs::write(&path, contents).map_err(|e| Failure::io(&path, e))?;
        Ok(path)
    }
}

fn solver_options(cfg: &RunConfig) -> SolverOptions {
    SolverOptions {
        tolerance: cfg.solver.tolerance,
        max_iterations: cfg.solver.max_iterations,
        ..SolverOptions::default()
    }
}

fn coupling_options(cfg: &RunConfig, c_stray: f64) -> CouplingOptions {
    CouplingOptions {
        elems_per_turn: cfg.solver.elems_per_turn,
        c_stray,
        solver: solver_options(cfg),
    }
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

/// Residual stress and drum result of a membrane config.
fn membrane_coupling(cfg: &RunConfig, l0: f64, c_stray: f64) -> Result<CouplingReport, Failure> {
    let d = &cfg.device;
    let radius = d.radius_um.unwrap_or(MEMBRANE_RADIUS * 1e6) * 1e-6;
    let mut material = cfg.material();
    if let Some(f) = d.f_target_mhz {
        material.residual_stress = calibrate_stress(radius, material.density, f * 1e6)?;
    }
    let r = membrane_g0(radius, d.h_nm * 1e-9, d.d_nm * 1e-9, &material, l0, c_stray)?;
    Ok(r.report())
}

pub fn modes(ctx: &Context) -> Result<(), Failure> {
    let cfg = ctx.config()?;
    if cfg.device.membrane {
        let Circuit::Capacitor { l0, c_stray } = cfg.circuit()? else {
            return Err(Failure::config("membrane device needs l0_nH"));
        };
        let r = membrane_coupling(cfg, l0, c_stray)?;
        let csv = format!(
            "mode,f_hz,polarization,energy_fraction_z\n1,{:.6},{},{:.6}\n",
            r.f_mech_khz * 1e3,
            Polarization::OutOfPlane,
            1.0
        );
        let path = ctx.write("modes.csv", &csv)?;
        println!("{}", path.display());
        return Ok(());
    }
    let spec = cfg.spec()?;
    let run = analyze_with(&spec, cfg.solver.elems_per_turn, cfg.solver.n_modes, &solver_options(cfg))?;
    let mut csv = String::from("mode,f_hz,polarization,energy_fraction_z\n");
    for (i, m) in run.solution.modes.iter().enumerate() {
        csv.push_str(&format!(
            "{},{:.6},{},{:.6}\n",
            i + 1,
            m.frequency,
            m.polarization,
            m.energy_fraction_z
        ));
    }
    let fundamental = run.solution.fundamental();
    let profile = if fundamental.polarization == Polarization::InPlane {
        radial_profile(&run.solution, &run.mesh, 0)?
    } else {
        deformation_profile(&run.solution, &run.mesh, 0)?
    };
    let title = format!(
        "mode 1, {}, f = {:.2} Hz",
        fundamental.polarization, fundamental.frequency
    );
    for (name, body) in [
        ("modes.csv", csv),
        ("profile.csv", profile.to_csv()),
        ("profile.svg", profile_svg(&profile, &title)),
    ] {
        let path = ctx.write(name, &body)?;
        println!("{}", path.display());
    }
    Ok(())
}

pub fn g0(ctx: &Context) -> Result<(), Failure> {
    let cfg = ctx.config()?;
    let (name, body) = match cfg.circuit()? {
        Circuit::Capacitor { l0, c_stray } => {
            let report = if cfg.device.membrane {
                membrane_coupling(cfg, l0, c_stray)?
            } else {
                compute_g0(&cfg.spec()?, l0, &coupling_options(cfg, c_stray))?.report()
            };
            ("coupling.json", pretty(&report))
        }
        Circuit::Inductor { c_readout } => {
            if cfg.device.membrane {
                return Err(Failure::config("membrane device needs l0_nH"));
            }
            let r = inductor_g0(&cfg.spec()?, c_readout, &coupling_options(cfg, 0.0))?;
            ("inductor.json", pretty(&r.report()))
        }
    };
    ctx.write(name, &body)?;
    print!("{body}");
    Ok(())
}

fn apply_sweep(base: &SpiralSpecF64, param: SweepParam, value: f64) -> SpiralSpecF64 {
    let mut spec = *base;
    match param {
        SweepParam::N => spec.turns = value,
        SweepParam::B => spec.strip_width = value * 1e-9,
        SweepParam::H => spec.thickness = value * 1e-9,
        SweepParam::T => spec.gap = value * 1e-9,
        SweepParam::D => spec.plate_gap = value * 1e-9,
    }
    spec
}

const COUPLING_COLUMNS: [&str; 11] = [
    "g0_over_2pi_hz",
    "c0_fF",
    "c_stray_fF",
    "dc_dx_nF_per_m",
    "f_cav_ghz",
    "pull_over_2pi_hz_per_nm",
    "circuit_l_nH",
    "f_mech_khz",
    "m_eff_kg",
    "total_mass_kg",
    "x_zp_m",
];

const INDUCTOR_COLUMNS: [&str; 8] = [
    "g0_over_2pi_hz",
    "l_self_nH",
    "dl_dx_nH_per_um",
    "c_readout_fF",
    "f_cav_ghz",
    "f_mech_khz",
    "m_eff_kg",
    "x_zp_m",
];

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Plain notation for ordinary magnitudes, exponent notation otherwise.
fn number(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || !a.is_finite() || (1e-3..1e7).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn sweep(ctx: &Context) -> Result<(), Failure> {
    let cfg = ctx.config()?;
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| Failure::config("sweep needs a `sweep` section with param and values"))?;
    if sweep.values.is_empty() {
        return Err(Failure::config("sweep.values is empty"));
    }
    if cfg.device.membrane {
        return Err(Failure::config("sweeps need a spiral device"));
    }
    let base = cfg.spec()?;
    let circuit = cfg.circuit()?;
    let columns: &[&str] = match circuit {
        Circuit::Capacitor { .. } => &COUPLING_COLUMNS,
        Circuit::Inductor { .. } => &INDUCTOR_COLUMNS,
    };
    let results: Vec<Result<serde_json::Value, Failure>> = ctx.pool.install(|| {
        sweep
            .values
            .par_iter()
            .map(|&v| {
                let spec = apply_sweep(&base, sweep.param, v);
                let value = match circuit {
                    Circuit::Capacitor { l0, c_stray } => {
                        serde_json::to_value(compute_g0(&spec, l0, &coupling_options(cfg, c_stray))?.report())
                    }
                    Circuit::Inductor { c_readout } => {
                        serde_json::to_value(inductor_g0(&spec, c_readout, &coupling_options(cfg, 0.0))?.report())
                    }
                };
                Ok(value.expect("report serializes"))
            })
            .collect()
    });

    let ok: Vec<(f64, f64)> = sweep
        .values
        .iter()
        .zip(&results)
        .filter_map(|(&v, r)| r.as_ref().ok().map(|j| (v, j["g0_over_2pi_hz"].as_f64().unwrap_or(f64::NAN))))
        .collect();
    let exponent = if sweep.param == SweepParam::N && ok.len() >= 3 {
        let (n, g): (Vec<f64>, Vec<f64>) = ok.iter().copied().unzip();
        power_law_exponent(&n, &g).ok()
    } else {
        None
    };

    let mut csv = format!("{},{},error,exponent\n", sweep.param.as_str(), columns.join(","));
    for (&v, r) in sweep.values.iter().zip(&results) {
        csv.push_str(&format!("{v}"));
        match r {
            Ok(j) => {
                for c in columns {
                    csv.push_str(&format!(",{}", number(j[*c].as_f64().unwrap_or(f64::NAN))));
                }
                csv.push(',');
                csv.push(',');
                if let Some(a) = exponent {
                    csv.push_str(&format!("{a}"));
                }
            }
            Err(f) => {
                csv.push_str(&",".repeat(columns.len()));
                csv.push_str(&format!(",{},", csv_field(&f.message)));
            }
        }
        csv.push('\n');
    }
    let path = ctx.write("sweep.csv", &csv)?;
    println!("{}", path.display());
    if let Some(a) = exponent {
        println!("fitted exponent g0 ~ N^{a:.4}");
    }
    match results.into_iter().find_map(Result::err) {
        Some(first) if ok.is_empty() => Err(first),
        _ => Ok(()),
    }
}

pub fn mask(ctx: &Context) -> Result<(), Failure> {
    let cfg = ctx.config()?;
    if cfg.device.membrane {
        return Err(Failure::config("mask export needs a spiral device"));
    }
    let spec = cfg.spec()?;
    let curve = build_spiral(&spec, DEFAULT_SAMPLES_PER_TURN)?;
    let polygon = mask_polygon(&curve, spec.strip_width)?;
    for (name, body) in [("mask.svg", polygon.to_svg_nm()), ("mask_vertices.csv", polygon.to_csv_nm())] {
        let path = ctx.write(name, &body)?;
        println!("{}", path.display());
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Fixture {
    Natural,
    Driven,
}

const NATURAL_CSV: &str = include_str!("../fixtures/natural.csv");
const DRIVEN_CSV: &str = include_str!("../fixtures/driven.csv");

pub struct FitRequest {
    pub spectrum: Option<PathBuf>,
    pub fixture: Option<Fixture>,
    pub f_min: Option<f64>,
    pub f_max: Option<f64>,
}

fn load(path: &Path, label: SpectrumLabel) -> Result<Spectrum<f64>, Failure> {
    if !path.exists() {
        return Err(Failure::config(format!("spectrum {} does not exist", path.display())));
    }
    load_spectrum(path, label).map_err(Failure::spectrum)
}

pub fn fit(ctx: &Context, req: &FitRequest) -> Result<(), Failure> {
    let fit_cfg = ctx.config.as_ref().and_then(|c| c.fit.as_ref());
    let spectrum = match (req.fixture, &req.spectrum, fit_cfg) {
        (Some(Fixture::Natural), _, _) => read_spectrum(NATURAL_CSV.as_bytes(), SpectrumLabel::Natural),
        (Some(Fixture::Driven), _, _) => read_spectrum(DRIVEN_CSV.as_bytes(), SpectrumLabel::Driven),
        (None, Some(path), _) => return fit_spectrum(ctx, load(path, SpectrumLabel::Natural)?, req, fit_cfg),
        (None, None, Some(fc)) => {
            return fit_spectrum(ctx, load(&fc.spectrum, fc.label.unwrap_or(SpectrumLabel::Natural))?, req, fit_cfg)
        }
        (None, None, None) => return Err(Failure::config("fit needs --spectrum, --fixture or a config `fit` section")),
    }
    .map_err(Failure::spectrum)?;
    fit_spectrum(ctx, spectrum, req, fit_cfg)
}

fn fit_spectrum(
    ctx: &Context,
    spectrum: Spectrum<f64>,
    req: &FitRequest,
    fit_cfg: Option<&crate::config::FitConfig>,
) -> Result<(), Failure> {
    let f_min = req.f_min.or(fit_cfg.and_then(|c| c.f_min_hz));
    let f_max = req.f_max.or(fit_cfg.and_then(|c| c.f_max_hz));
    let windowed = match (f_min, f_max) {
        (None, None) => spectrum,
        (lo, hi) => {
            let (a, b) = spectrum.span();
            let (lo, hi) = (lo.unwrap_or(a), hi.unwrap_or(b));
            if !(lo < hi) {
                return Err(Failure::fit(format!("empty window [{lo}, {hi}] Hz")));
            }
            spectrum.window(lo, hi).map_err(Failure::spectrum)?
        }
    };
    let result = fit_lorentzian(&windowed, None).map_err(Failure::spectrum)?;
    let body = pretty(&result.report());
    ctx.write("fit.json", &body)?;
    print!("{body}");
    Ok(())
}

pub const NATURAL: (f64, f64, f64, f64) = (21_600.0, 3600.0, 21_000.0, 22_200.0);
pub const DRIVEN: (f64, f64, f64, f64) = (21_500.0, 148.0, 20_500.0, 22_500.0);
pub const FIXTURE_POINTS: usize = 4001;
pub const FIXTURE_NOISE: f64 = 0.01;

pub fn synthetic(which: Fixture, seed: u64) -> Result<Spectrum<f64>, Failure> {
    let ((f0, q, lo, hi), label) = match which {
        Fixture::Natural => (NATURAL, SpectrumLabel::Natural),
        Fixture::Driven => (DRIVEN, SpectrumLabel::Driven),
    };
    let params = LorentzianParams::from_peak_height(f0, q, 1.0, 0.0);
    Ok(synthetic_spectrum(
        &params,
        lo,
        hi,
        FIXTURE_POINTS,
        NoiseModel::Multiplicative {
            sigma: FIXTURE_NOISE,
            seed,
        },
        label,
    )?)
}

pub fn synth(ctx: &Context) -> Result<(), Failure> {
    for (which, name) in [(Fixture::Natural, "natural.csv"), (Fixture::Driven, "driven.csv")] {
        let path = ctx.write(name, &synthetic(which, ctx.seed)?.to_csv())?;
        println!("{}", path.display());
    }
    Ok(())
}

struct RowOutcome {
    row: &'static ReferenceRow,
    f_khz: f64,
    g0_hz: f64,
}

fn within_factor(x: f64, target: f64, k: f64) -> bool {
    x >= target / k && x <= target * k
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

/// Recomputes the four reference designs and compares with the published values.
pub fn table1(ctx: &Context, elems_per_turn: usize) -> Result<(), Failure> {
    let opts = CouplingOptions {
        elems_per_turn,
        ..CouplingOptions::default()
    };
    let outcomes: Vec<Result<RowOutcome, Failure>> = ctx.pool.install(|| {
        REFERENCE_ROWS
            .par_iter()
            .map(|row| {
                let r = if row.is_membrane() {
                    let radius = MEMBRANE_RADIUS;
                    let mut material = spiralmech::MaterialF64::aluminum();
                    material.residual_stress = calibrate_stress(radius, material.density, row.f_khz * 1e3)?;
                    membrane_g0(radius, row.h_nm * 1e-9, row.d_nm * 1e-9, &material, row.l0_nh * 1e-9, 0.0)?
                } else {
                    let spec: SpiralSpecF64 = row.spec().expect("spiral row");
                    compute_g0(&spec, row.l0_nh * 1e-9, &opts)?
                };
                Ok(RowOutcome {
                    row,
                    f_khz: r.f_mech * 1e-3,
                    g0_hz: r.g0_over_2pi(),
                })
            })
            .collect()
    });
    let outcomes = outcomes.into_iter().collect::<Result<Vec<_>, _>>()?;

    let mut csv = String::from("row,n_turns,f_khz,f_ref_khz,f_check,g0_over_2pi_hz,g0_ref_hz,g0_check\n");
    println!(
        "{:<11} {:>6} {:>12} {:>10} {:>5} {:>12} {:>8} {:>5}",
        "row", "N", "f_kHz", "ref", "", "g0/2pi_Hz", "ref", ""
    );
    for o in &outcomes {
        let f_ok = if o.row.is_membrane() {
            (o.f_khz / o.row.f_khz - 1.0).abs() < 1e-9
        } else {
            (o.f_khz / o.row.f_khz - 1.0).abs() <= 0.35
        };
        let g_ok = within_factor(o.g0_hz, o.row.g0_over_2pi_hz, 2.0);
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            o.row.name,
            o.row.n_turns,
            o.f_khz,
            o.row.f_khz,
            mark(f_ok),
            o.g0_hz,
            o.row.g0_over_2pi_hz,
            mark(g_ok)
        ));
        println!(
            "{:<11} {:>6} {:>12.4} {:>10} {:>5} {:>12.1} {:>8} {:>5}",
            o.row.name,
            o.row.n_turns,
            o.f_khz,
            o.row.f_khz,
            mark(f_ok),
            o.g0_hz,
            o.row.g0_over_2pi_hz,
            mark(g_ok)
        );
    }
    let spirals = &outcomes[1..];
    let f_order = spirals.windows(2).all(|w| w[1].f_khz < w[0].f_khz);
    let g_order = spirals.windows(2).all(|w| w[1].g0_hz > w[0].g0_hz);
    let n: Vec<f64> = spirals.iter().map(|o| o.row.n_turns).collect();
    let g: Vec<f64> = spirals.iter().map(|o| o.g0_hz).collect();
    let alpha = power_law_exponent(&n, &g)?;
    let gain2 = outcomes[1].g0_hz / outcomes[0].g0_hz;
    let gain3 = outcomes[2].g0_hz / outcomes[0].g0_hz;
    let checks = [
        ("frequency_order", format!("{f_order}"), f_order),
        ("g0_order", format!("{g_order}"), g_order),
        ("sqrt_n_exponent", format!("{alpha}"), (0.3..=0.8).contains(&alpha)),
        ("gain_row2_over_membrane", format!("{gain2}"), within_factor(gain2, 7.0, 2.0)),
        ("gain_row3_over_membrane", format!("{gain3}"), within_factor(gain3, 12.0, 2.0)),
    ];
    csv.push_str("\ncheck,value,result\n");
    for (name, value, ok) in &checks {
        csv.push_str(&format!("{name},{value},{}\n", mark(*ok)));
        println!("{name:<24} {value:>24} {}", mark(*ok));
    }
    let path = ctx.write("table1.csv", &csv)?;
    println!("{}", path.display());
    Ok(())
}
