use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::Result;
use crate::real::Real;

use super::{LorentzianParams, Spectrum, SpectrumLabel};

/// `A/((f² − f0²)² + (f0·f/Q)²) + B`.
pub fn lorentzian<T: Real>(p: &LorentzianParams<T>, f: T) -> T {
    let df = (f - p.f0) * (f + p.f0);
    let damp = p.f0 * f / p.q;
    p.amplitude / (df * df + damp * damp) + p.background
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseModel {
    None,
    /// `S·(1 + σ·n)` with `n ~ N(0, 1)`, clamped at zero.
    Multiplicative { sigma: f64, seed: u64 },
}

/// `n` points evenly spaced over `[f_min, f_max]`.
pub fn synthetic_spectrum<T: Real>(
    p: &LorentzianParams<T>,
    f_min: T,
    f_max: T,
    n: usize,
    noise: NoiseModel,
    label: SpectrumLabel,
) -> Result<Spectrum<T>> {
    let step = (f_max - f_min) / T::from_count(n.max(2) - 1);
    let freq: Vec<T> = (0..n).map(|i| f_min + step * T::from_count(i)).collect();
    let mut psd: Vec<T> = freq.iter().map(|&f| lorentzian(p, f)).collect();
    if let NoiseModel::Multiplicative { sigma, seed } = noise {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(0.0, sigma).expect("finite sigma");
        for v in &mut psd {
            let k = 1.0 + normal.sample(&mut rng);
            *v = (*v * T::lit(k)).max(T::zero());
        }
    }
    Spectrum::new(freq, psd, label)
}
