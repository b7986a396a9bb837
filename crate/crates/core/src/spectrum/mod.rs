//! Resonance spectra: loading, windowing and Lorentzian fitting.

mod fit;
mod guess;
mod synth;

pub use fit::{fit_lorentzian, fit_lorentzian_with, FitOptions, FitReport, FitResult};
pub use guess::initial_guess;
pub use synth::{lorentzian, synthetic_spectrum, NoiseModel};

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;

pub const MIN_POINTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumLabel {
    Driven,
    Natural,
    Synthetic,
}

/// Line-shape parameters of `S(f) = A/((f² − f0²)² + (f0·f/Q)²) + B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzianParams<T> {
    pub f0: T,
    pub q: T,
    pub amplitude: T,
    pub background: T,
}

impl<T: Real> LorentzianParams<T> {
    /// Builds parameters from the height of the peak above background.
    pub fn from_peak_height(f0: T, q: T, height: T, background: T) -> Self {
        Self {
            f0,
            q,
            amplitude: height * f0.powi(4) / (q * q),
            background,
        }
    }

    pub fn peak_height(&self) -> T {
        self.amplitude * self.q * self.q / self.f0.powi(4)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    pub freq: Vec<T>,
    pub psd: Vec<T>,
    pub label: SpectrumLabel,
}

impl<T: Real> Spectrum<T> {
    pub fn new(freq: Vec<T>, psd: Vec<T>, label: SpectrumLabel) -> Result<Self> {
        if freq.len() != psd.len() {
            return Err(Error::InvalidInput("frequency and psd lengths differ".into()));
        }
        if freq.len() < MIN_POINTS {
            return Err(Error::InvalidInput(format!(
                "spectrum has {} points, need at least {MIN_POINTS}",
                freq.len()
            )));
        }
        if let Some(i) = (1..freq.len()).find(|&i| !(freq[i] > freq[i - 1])) {
            return Err(Error::Format(format!(
                "frequencies not strictly increasing at point {} ({} after {})",
                i + 1,
                freq[i],
                freq[i - 1]
            )));
        }
        if let Some(i) = psd.iter().position(|&p| !(p >= T::zero()) || !p.is_finite()) {
            return Err(Error::InvalidInput(format!("psd at point {} is {}, must be finite and >= 0", i + 1, psd[i])));
        }
        if freq.iter().any(|f| !f.is_finite()) {
            return Err(Error::InvalidInput("non-finite frequency".into()));
        }
        Ok(Self { freq, psd, label })
    }

    pub fn len(&self) -> usize {
        self.freq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freq.is_empty()
    }

    pub fn span(&self) -> (T, T) {
        (self.freq[0], self.freq[self.len() - 1])
    }

    /// Points with `f_min ≤ f ≤ f_max`.
    pub fn window(&self, f_min: T, f_max: T) -> Result<Self> {
        let (freq, psd): (Vec<T>, Vec<T>) = self
            .freq
            .iter()
            .zip(&self.psd)
            .filter(|(&f, _)| f >= f_min && f <= f_max)
            .map(|(&f, &p)| (f, p))
            .unzip();
        if freq.len() < MIN_POINTS {
            return Err(Error::GuessFailure(format!(
                "window [{f_min}, {f_max}] Hz holds {} points, need at least {MIN_POINTS}",
                freq.len()
            )));
        }
        Self::new(freq, psd, self.label)
    }

    pub fn scaled(&self, k: T) -> Self {
        Self {
            freq: self.freq.clone(),
            psd: self.psd.iter().map(|&p| p * k).collect(),
            label: self.label,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("freq_hz,psd\n");
        for (f, p) in self.freq.iter().zip(&self.psd) {
            out.push_str(&format!("{:.6},{:.9e}\n", f.to_f64_lossy(), p.to_f64_lossy()));
        }
        out
    }
}

/// Reads a `freq_hz,psd` CSV.
pub fn read_spectrum<T: Real, R: Read>(reader: R, label: SpectrumLabel) -> Result<Spectrum<T>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| Error::Parse {
        line: 1,
        message: e.to_string(),
    })?;
    if headers.len() != 2 || &headers[0] != "freq_hz" || &headers[1] != "psd" {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header `freq_hz,psd`, found `{}`", headers.iter().collect::<Vec<_>>().join(",")),
        });
    }
    let mut freq = Vec::new();
    let mut psd = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 2 {
            return Err(Error::Parse {
                line,
                message: format!("expected 2 fields, found {}", record.len()),
            });
        }
        let parse = |s: &str| -> Result<f64> {
            s.parse::<f64>().map_err(|e| Error::Parse {
                line,
                message: format!("`{s}`: {e}"),
            })
        };
        freq.push(T::lit(parse(&record[0])?));
        psd.push(T::lit(parse(&record[1])?));
    }
    Spectrum::new(freq, psd, label)
}

pub fn load_spectrum<T: Real>(path: &Path, label: SpectrumLabel) -> Result<Spectrum<T>> {
    let file = std::fs::File::open(path)?;
    read_spectrum(std::io::BufReader::new(file), label)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn csv_rows(n: usize) -> String {
        let mut s = String::from("freq_hz,psd\n");
        for i in 0..n {
            s.push_str(&format!("{},{}\n", 1000 + i, 1.0 + i as f64));
        }
        s
    }

    #[test]
    fn reads_rows() {
        let sp: Spectrum<f64> = read_spectrum(csv_rows(1000).as_bytes(), SpectrumLabel::Natural).unwrap();
        assert_eq!(sp.len(), 1000);
    }

    #[test]
    fn missing_header_is_parse_error() {
        let body = csv_rows(20).replace("freq_hz,psd\n", "");
        let err = read_spectrum::<f64, _>(body.as_bytes(), SpectrumLabel::Natural).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn bad_row_reports_line() {
        let body = csv_rows(20).replace("1004,5\n", "1004,abc\n");
        let err = read_spectrum::<f64, _>(body.as_bytes(), SpectrumLabel::Natural).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 6, .. }), "{err:?}");
    }

    #[test]
    fn negative_and_unsorted_rejected() {
        let neg = csv_rows(20).replace("1004,5\n", "1004,-5\n");
        assert!(matches!(
            read_spectrum::<f64, _>(neg.as_bytes(), SpectrumLabel::Natural),
            Err(Error::InvalidInput(_))
        ));
        let unsorted = csv_rows(20).replace("1004,5\n", "999,5\n");
        assert!(matches!(
            read_spectrum::<f64, _>(unsorted.as_bytes(), SpectrumLabel::Natural),
            Err(Error::Format(_))
        ));
    }
}
