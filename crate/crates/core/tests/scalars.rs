use spiralmech::electromech::{compute_g0, CouplingOptions};
use spiralmech::geometry::{build_spiral, footprint_area, SpiralSpec};
use spiralmech::spectrum::{fit_lorentzian, synthetic_spectrum, LorentzianParams, NoiseModel, SpectrumLabel};
use spiralmech::{Extended, Real};

#[test]
fn single_precision_geometry_tracks_double() {
    let s32 = SpiralSpec::<f32>::from_nm(2000.0, 100.0, 200.0, 100.0, 5.0);
    let s64 = SpiralSpec::<f64>::from_nm(2000.0, 100.0, 200.0, 100.0, 5.0);
    let c32 = build_spiral(&s32, 64).unwrap();
    let c64 = build_spiral(&s64, 64).unwrap();
    assert!((c32.total_length as f64 / c64.total_length - 1.0).abs() < 1e-5);
    let a32 = footprint_area(&c32, s32.strip_width) as f64;
    let a64 = footprint_area(&c64, s64.strip_width);
    assert!((a32 / a64 - 1.0).abs() < 1e-3);
}

#[test]
fn single_precision_fit() {
    let p = LorentzianParams::<f32>::from_peak_height(21.5e3, 148.0, 1.0, 1e-3);
    let sp = synthetic_spectrum(&p, 20.5e3, 22.5e3, 2001, NoiseModel::None, SpectrumLabel::Synthetic).unwrap();
    let r = fit_lorentzian(&sp, None).unwrap();
    assert!((r.f0 / 21.5e3 - 1.0).abs() < 1e-4 && (r.q / 148.0 - 1.0).abs() < 1e-3, "{r:?}");
}

#[test]
fn extended_coupling_agrees_with_double() {
    let l = 70e-9;
    let ext = compute_g0(&SpiralSpec::<Extended>::from_nm(2000.0, 100.0, 200.0, 100.0, 5.0), Extended::lit(l), &CouplingOptions::default()).unwrap();
    let dbl = compute_g0(&SpiralSpec::<f64>::from_nm(2000.0, 100.0, 200.0, 100.0, 5.0), l, &CouplingOptions::default()).unwrap();
    let g = ext.g0.to_f64_lossy();
    assert!((g / dbl.g0 - 1.0).abs() < 1e-6, "{g} {}", dbl.g0);
    assert!((ext.f_mech.to_f64_lossy() / dbl.f_mech - 1.0).abs() < 1e-6);
}
