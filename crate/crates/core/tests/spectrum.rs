use proptest::prelude::*;
use spiralmech::spectrum::*;
use spiralmech::Error;

fn natural(f0: f64, q: f64) -> LorentzianParams<f64> {
    LorentzianParams::from_peak_height(f0, q, 1.0, 1e-3)
}

fn natural_spectrum(noise: NoiseModel) -> Spectrum<f64> {
    synthetic_spectrum(&natural(21.6e3, 3600.0), 21.0e3, 22.2e3, 4001, noise, SpectrumLabel::Synthetic).unwrap()
}

fn driven_spectrum(noise: NoiseModel) -> Spectrum<f64> {
    synthetic_spectrum(&natural(21.5e3, 148.0), 20.5e3, 22.5e3, 4001, noise, SpectrumLabel::Synthetic).unwrap()
}

/// Test-side line shape, written out independently of the library.
fn model(f: f64, f0: f64, q: f64, a: f64, b: f64) -> f64 {
    a / ((f * f - f0 * f0).powi(2) + (f0 * f / q).powi(2)) + b
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

#[test]
fn generator_matches_the_model() {
    let p = natural(21.6e3, 3600.0);
    let sp = natural_spectrum(NoiseModel::None);
    for (&f, &y) in sp.freq.iter().zip(&sp.psd) {
        let m = model(f, p.f0, p.q, p.amplitude, p.background);
        assert!((y - m).abs() <= 1e-12 * m);
    }
    let peak = model(p.f0, p.f0, p.q, p.amplitude, 0.0);
    assert!((peak - 1.0).abs() < 1e-12);
}

#[test]
fn loads_a_thousand_rows() {
    let mut text = String::from("freq_hz,psd\n");
    for i in 0..1000 {
        text.push_str(&format!("{},{}\n", 1000.0 + i as f64, 1.0 + (i % 7) as f64));
    }
    let sp: Spectrum<f64> = read_spectrum(text.as_bytes(), SpectrumLabel::Natural).unwrap();
    assert_eq!(sp.len(), 1000);
    assert_eq!(sp.freq[999], 1999.0);
}

#[test]
fn load_errors() {
    let no_header = "1000,1.0\n1001,2.0\n";
    assert!(matches!(read_spectrum::<f64, _>(no_header.as_bytes(), SpectrumLabel::Natural), Err(Error::Parse { .. })));

    let mut rows = String::from("freq_hz,psd\n");
    for i in 0..20 {
        rows.push_str(&format!("{},{}\n", i, if i == 5 { -1.0 } else { 1.0 }));
    }
    assert!(matches!(read_spectrum::<f64, _>(rows.as_bytes(), SpectrumLabel::Natural), Err(Error::InvalidInput(_))));

    let mut unsorted = String::from("freq_hz,psd\n");
    for i in 0..20 {
        unsorted.push_str(&format!("{},1\n", if i == 10 { 3 } else { i }));
    }
    assert!(matches!(read_spectrum::<f64, _>(unsorted.as_bytes(), SpectrumLabel::Natural), Err(Error::Format(_))));

    let mut bad = String::from("freq_hz,psd\n");
    for i in 0..20 {
        bad.push_str(&format!("{},{}\n", i, if i == 3 { "x" } else { "1" }));
    }
    match read_spectrum::<f64, _>(bad.as_bytes(), SpectrumLabel::Natural) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
        other => panic!("{other:?}"),
    }
}

#[test]
fn guess_lands_on_the_peak() {
    let sp = natural_spectrum(NoiseModel::None);
    let g = initial_guess(&sp).unwrap();
    let bin = sp.freq[1] - sp.freq[0];
    assert!((g.f0 - 21.6e3).abs() <= bin);
    assert!((g.q - 3600.0).abs() / 3600.0 < 0.2, "{}", g.q);

    let d = driven_spectrum(NoiseModel::None);
    let g = initial_guess(&d).unwrap();
    assert!((g.q - 148.0).abs() / 148.0 < 0.2, "{}", g.q);
}

#[test]
fn guess_failures() {
    let freq: Vec<f64> = (0..64).map(|i| i as f64).collect();
    let flat = Spectrum::new(freq.clone(), vec![2.0; 64], SpectrumLabel::Synthetic).unwrap();
    assert!(matches!(initial_guess(&flat), Err(Error::GuessFailure(_))));

    let falling: Vec<f64> = freq.iter().map(|f| 100.0 - f).collect();
    let edge = Spectrum::new(freq, falling, SpectrumLabel::Synthetic).unwrap();
    assert!(matches!(initial_guess(&edge), Err(Error::GuessFailure(_))));
}

#[test]
fn noiseless_fits_are_exact() {
    for (sp, f0, q) in [
        (natural_spectrum(NoiseModel::None), 21.6e3, 3600.0),
        (driven_spectrum(NoiseModel::None), 21.5e3, 148.0),
    ] {
        let r = fit_lorentzian(&sp, None).unwrap();
        assert!((r.f0 - f0).abs() / f0 < 1e-6 && (r.q - q).abs() / q < 1e-6, "{r:?}");
        assert!(r.converged);
    }
}

#[test]
fn noisy_medians_over_a_hundred_seeds() {
    for (make, f0, q) in [
        (natural_spectrum as fn(NoiseModel) -> Spectrum<f64>, 21.6e3, 3600.0),
        (driven_spectrum, 21.5e3, 148.0),
    ] {
        let fits: Vec<FitResult<f64>> = (0..100)
            .map(|seed| fit_lorentzian(&make(NoiseModel::Multiplicative { sigma: 0.01, seed }), None).unwrap())
            .collect();
        let mf = median(fits.iter().map(|r| r.f0).collect());
        let mq = median(fits.iter().map(|r| r.q).collect());
        assert!((mf - f0).abs() / f0 < 1e-3, "{mf}");
        assert!((mq - q).abs() / q < 0.02, "{mq}");
    }
}

#[test]
fn refit_reproduces_and_never_worsens() {
    let sp = natural_spectrum(NoiseModel::Multiplicative { sigma: 0.01, seed: 7 });
    let first = fit_lorentzian(&sp, None).unwrap();
    assert!(first.residual_rms <= first.initial_residual_rms);
    let (lo, hi) = sp.span();
    assert!(first.f0 >= lo && first.f0 <= hi && first.q > 0.0);

    let again = fit_lorentzian(&sp, Some(first.params())).unwrap();
    for (a, b) in [(first.f0, again.f0), (first.q, again.q), (first.amplitude, again.amplitude), (first.background, again.background)] {
        assert!((a - b).abs() <= 1e-10 * a.abs(), "{a} {b}");
    }
}

#[test]
fn windowing() {
    let sp = driven_spectrum(NoiseModel::None);
    let w = sp.window(21.0e3, 22.0e3).unwrap();
    assert!(w.freq.iter().all(|&f| (21.0e3..=22.0e3).contains(&f)));
    assert!(matches!(sp.window(30e3, 31e3), Err(Error::GuessFailure(_))));
    let round: Spectrum<f64> = read_spectrum(w.to_csv().as_bytes(), SpectrumLabel::Driven).unwrap();
    assert_eq!(round.len(), w.len());
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn fit_is_scale_equivariant(k in 1e-6..1e6f64, seed in 0u64..1000) {
        let sp = natural_spectrum(NoiseModel::Multiplicative { sigma: 0.01, seed });
        let a = fit_lorentzian(&sp, None).unwrap();
        let b = fit_lorentzian(&sp.scaled(k), None).unwrap();
        prop_assert!(rel(b.f0, a.f0) < 1e-9 && rel(b.q, a.q) < 1e-9);
        prop_assert!(rel(b.amplitude, k * a.amplitude) < 1e-9);
        prop_assert!(rel(b.background, k * a.background) < 1e-9);
    }

    #[test]
    fn noiseless_recovery_over_parameter_space(
        f0 in 5e3..50e3f64, q in 50.0..5000.0f64, bg in 0.0..0.05f64,
    ) {
        let p = LorentzianParams::from_peak_height(f0, q, 1.0, bg);
        let half_width = 8.0 * f0 / q;
        let sp = synthetic_spectrum(&p, f0 - half_width, f0 + 1.1 * half_width, 2001, NoiseModel::None, SpectrumLabel::Synthetic).unwrap();
        let r = fit_lorentzian(&sp, None).unwrap();
        prop_assert!(rel(r.f0, f0) < 1e-6 && rel(r.q, q) < 1e-6, "{:?}", r);
        prop_assert!(r.residual_rms <= r.initial_residual_rms);
    }
}
