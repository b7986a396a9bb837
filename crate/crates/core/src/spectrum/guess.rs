use crate::error::{Error, Result};
use crate::real::Real;

use super::{LorentzianParams, Spectrum};

fn median<T: Real>(values: &[T]) -> T {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite psd"));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / T::lit(2.0)
    }
}

/// Linear interpolation of the frequency where the psd crosses `level`
/// walking from the peak at `peak` in direction `step`.
fn crossing<T: Real>(sp: &Spectrum<T>, peak: usize, level: T, forward: bool) -> Option<T> {
    let mut i = peak;
    loop {
        let j = if forward {
            if i + 1 >= sp.len() {
                return None;
            }
            i + 1
        } else {
            if i == 0 {
                return None;
            }
            i - 1
        };
        if sp.psd[j] < level {
            let t = (sp.psd[i] - level) / (sp.psd[i] - sp.psd[j]);
            return Some(sp.freq[i] + (sp.freq[j] - sp.freq[i]) * t);
        }
        i = j;
    }
}

/// Peak position, median background, half-power width and peak height.
pub fn initial_guess<T: Real>(sp: &Spectrum<T>) -> Result<LorentzianParams<T>> {
    let (lo, hi) = sp.span();
    let mut peak = 0;
    for i in 1..sp.len() {
        if sp.psd[i] > sp.psd[peak] {
            peak = i;
        }
    }
    let background = median(&sp.psd);
    let top = sp.psd[peak];
    if !(top > background) {
        return Err(Error::GuessFailure(format!("no peak above background in window [{lo}, {hi}] Hz")));
    }
    if peak == 0 || peak == sp.len() - 1 {
        return Err(Error::GuessFailure(format!(
            "maximum at the edge of window [{lo}, {hi}] Hz; widen or recenter it"
        )));
    }
    let height = top - background;
    let level = background + height / T::lit(2.0);
    let f0 = sp.freq[peak];
    let left = crossing(sp, peak, level, false);
    let right = crossing(sp, peak, level, true);
    let width = match (left, right) {
        (Some(l), Some(r)) => r - l,
        (Some(l), None) => T::lit(2.0) * (f0 - l),
        (None, Some(r)) => T::lit(2.0) * (r - f0),
        (None, None) => {
            return Err(Error::GuessFailure(format!(
                "peak wider than window [{lo}, {hi}] Hz"
            )))
        }
    };
    if !(width > T::zero()) {
        return Err(Error::GuessFailure("zero half-power width".into()));
    }
    Ok(LorentzianParams::from_peak_height(f0, f0 / width, height, background))
}
