use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::{dense_cholesky, DenseMatrix};
use crate::real::Real;

use super::guess::initial_guess;
use super::{LorentzianParams, Spectrum};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Stop once the largest relative parameter step falls below this.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            max_iterations: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult<T> {
    pub f0: T,
    pub q: T,
    pub amplitude: T,
    pub background: T,
    pub residual_rms: T,
    pub initial_residual_rms: T,
    pub converged: bool,
    pub iterations: usize,
}

impl<T: Real> FitResult<T> {
    pub fn params(&self) -> LorentzianParams<T> {
        LorentzianParams {
            f0: self.f0,
            q: self.q,
            amplitude: self.amplitude,
            background: self.background,
        }
    }

    pub fn report(&self) -> FitReport {
        FitReport {
            f0_hz: self.f0.to_f64_lossy(),
            q: self.q.to_f64_lossy(),
            amplitude: self.amplitude.to_f64_lossy(),
            background: self.background.to_f64_lossy(),
            residual_rms: self.residual_rms.to_f64_lossy(),
            converged: self.converged,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub f0_hz: f64,
    pub q: f64,
    pub amplitude: f64,
    pub background: f64,
    pub residual_rms: f64,
    pub converged: bool,
}

/// Internal parameters `(f0, ln Q, H, B)` with `H` the peak height above
/// background; the psd is divided by its maximum first.
#[derive(Debug, Clone, Copy)]
struct Internal<T> {
    p: [T; 4],
}

impl<T: Real> Internal<T> {
    fn from_params(p: &LorentzianParams<T>, scale: T) -> Self {
        Self {
            p: [p.f0, p.q.ln(), p.peak_height() / scale, p.background / scale],
        }
    }

    fn to_params(self, scale: T) -> LorentzianParams<T> {
        LorentzianParams::from_peak_height(self.p[0], self.p[1].exp(), self.p[2] * scale, self.p[3] * scale)
    }

    /// `H/D + B` with `D = Q²(x² − 1)² + x²`, `x = f/f0`, and its gradient.
    fn eval(&self, f: T) -> (T, [T; 4]) {
        let [f0, lnq, h, b] = self.p;
        let q2 = (lnq + lnq).exp();
        let x = f / f0;
        let u = (x - T::one()) * (x + T::one());
        let d = q2 * u * u + x * x;
        let s = h / d + b;
        let g = h / (d * d);
        let dd_dx = T::lit(4.0) * q2 * x * u + T::lit(2.0) * x;
        let grad = [g * dd_dx * x / f0, -g * T::lit(2.0) * q2 * u * u, T::one() / d, T::one()];
        (s, grad)
    }

    fn shifted(&self, step: &[T]) -> Self {
        let mut out = *self;
        for (p, s) in out.p.iter_mut().zip(step) {
            *p += *s;
        }
        out
    }

    fn cost(&self, sp: &Spectrum<T>, scale: T) -> T {
        sp.freq
            .iter()
            .zip(&sp.psd)
            .fold(T::zero(), |acc, (&f, &y)| {
                let r = y / scale - self.eval(f).0;
                acc + r * r
            })
    }
}

const POLISH_BELOW: f64 = 1e-7;

fn damped_step<T: Real>(jtj: &[[T; 4]; 4], jtr: &[T; 4], lambda: T) -> Option<Vec<T>> {
    let mut a = DenseMatrix::zeros(4);
    for i in 0..4 {
        for j in 0..4 {
            let damp = if i == j { lambda * jtj[i][i] } else { T::zero() };
            a.set(i, j, jtj[i][j] + damp);
        }
    }
    let l = dense_cholesky(&a).ok()?;
    let step = l.solve_lower_transpose(&l.solve_lower(jtr));
    step.iter().all(|v| v.is_finite()).then_some(step)
}

fn relative_step<T: Real>(x: &Internal<T>, step: &[T]) -> T {
    let amp = x.p[2].abs() + x.p[3].abs();
    [
        step[0].abs() / x.p[0].abs(),
        step[1].abs() / x.p[1].abs().max(T::one()),
        step[2].abs() / amp,
        step[3].abs() / amp,
    ]
    .iter()
    .fold(T::zero(), |m, &v| m.max(v))
}

pub fn fit_lorentzian<T: Real>(sp: &Spectrum<T>, guess: Option<LorentzianParams<T>>) -> Result<FitResult<T>> {
    fit_lorentzian_with(sp, guess, &FitOptions::default())
}

/// Levenberg–Marquardt least squares with diagonal (Marquardt) damping.
/// Steps that raise the residual or leave the data span are rejected and
/// the damping raised; accepted steps lower the damping.
pub fn fit_lorentzian_with<T: Real>(
    sp: &Spectrum<T>,
    guess: Option<LorentzianParams<T>>,
    opts: &FitOptions,
) -> Result<FitResult<T>> {
    let guess = match guess {
        Some(g) => g,
        None => initial_guess(sp)?,
    };
    let scale = sp.psd.iter().fold(T::zero(), |m, &v| m.max(v));
    let scale = if scale > T::zero() { scale } else { T::one() };
    let (lo, hi) = sp.span();
    let tol = T::tolerance(opts.tolerance);
    let n = T::from_count(sp.len());

    let mut x = Internal::from_params(&guess, scale);
    let mut cost = x.cost(sp, scale);
    let initial_cost = cost;
    let mut lambda = T::lit(1e-3);
    let mut converged = false;
    let mut iterations = 0;

    while iterations < opts.max_iterations {
        iterations += 1;
        let mut jtj = [[T::zero(); 4]; 4];
        let mut jtr = [T::zero(); 4];
        for (&f, &y) in sp.freq.iter().zip(&sp.psd) {
            let (s, g) = x.eval(f);
            let r = y / scale - s;
            for a in 0..4 {
                jtr[a] += g[a] * r;
                for b in 0..4 {
                    jtj[a][b] += g[a] * g[b];
                }
            }
        }
        // near the minimum the cost is flat to rounding, so polish on the
        // normal equations with undamped steps instead
        if let Some(gn) = damped_step(&jtj, &jtr, T::zero()) {
            let rel = relative_step(&x, &gn);
            if rel < T::lit(POLISH_BELOW) {
                let trial = x.shifted(&gn);
                if trial.p[0] >= lo && trial.p[0] <= hi {
                    x = trial;
                    cost = x.cost(sp, scale);
                }
                if rel < tol {
                    converged = true;
                    break;
                }
                continue;
            }
        }
        let mut accepted = false;
        while lambda < T::lit(1e16) {
            let Some(step) = damped_step(&jtj, &jtr, lambda) else {
                lambda *= T::lit(10.0);
                continue;
            };
            let trial = x.shifted(&step);
            let trial_cost = trial.cost(sp, scale);
            let inside = trial.p[0] >= lo && trial.p[0] <= hi;
            if inside && trial_cost.is_finite() && trial_cost <= cost {
                x = trial;
                cost = trial_cost;
                lambda = (lambda / T::lit(10.0)).max(T::lit(1e-12));
                accepted = true;
                break;
            }
            lambda *= T::lit(10.0);
        }
        if !accepted {
            // no descent direction left at working precision
            converged = true;
            break;
        }
    }
    let p = x.to_params(scale);
    Ok(FitResult {
        f0: p.f0,
        q: p.q,
        amplitude: p.amplitude,
        background: p.background,
        residual_rms: (cost / n).sqrt() * scale,
        initial_residual_rms: (initial_cost / n).sqrt() * scale,
        converged,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{synthetic_spectrum, NoiseModel, SpectrumLabel};

    #[test]
    fn noiseless_recovery() {
        let truth = LorentzianParams::<f64>::from_peak_height(21_600.0, 3600.0, 1.0, 0.0);
        let sp = synthetic_spectrum(&truth, 21_000.0, 22_200.0, 4001, NoiseModel::None, SpectrumLabel::Synthetic).unwrap();
        let fit = fit_lorentzian(&sp, None).unwrap();
        assert!(fit.converged);
        assert!((fit.f0 / 21_600.0 - 1.0).abs() < 1e-6);
        assert!((fit.q / 3600.0 - 1.0).abs() < 1e-6);
        assert!(fit.residual_rms <= fit.initial_residual_rms);
    }
}
