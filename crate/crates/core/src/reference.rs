//! Published reference designs: the unpatterned drum and three spirals.

use crate::geometry::SpiralSpec;
use crate::real::Real;

/// Drum radius assumed for the unpatterned membrane, m.
pub const MEMBRANE_RADIUS: f64 = 12e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceRow {
    pub name: &'static str,
    pub b_nm: f64,
    pub h_nm: f64,
    /// `None` for the unpatterned membrane.
    pub t_nm: Option<f64>,
    pub d_nm: f64,
    pub l0_nh: f64,
    pub f_khz: f64,
    pub n_turns: f64,
    pub g0_over_2pi_hz: f64,
}

impl ReferenceRow {
    pub fn is_membrane(&self) -> bool {
        self.t_nm.is_none()
    }

    pub fn spec<T: Real>(&self) -> Option<SpiralSpec<T>> {
        self.t_nm
            .map(|t| SpiralSpec::from_nm(self.b_nm, self.h_nm, t, self.d_nm, self.n_turns))
    }
}

pub const REFERENCE_ROWS: [ReferenceRow; 4] = [
    ReferenceRow {
        name: "membrane",
        b_nm: f64::NAN,
        h_nm: 100.0,
        t_nm: None,
        d_nm: 100.0,
        l0_nh: 70.0,
        f_khz: 6.2e3,
        n_turns: 0.0,
        g0_over_2pi_hz: 60.0,
    },
    ReferenceRow {
        name: "spiral_n5",
        b_nm: 2000.0,
        h_nm: 100.0,
        t_nm: Some(200.0),
        d_nm: 100.0,
        l0_nh: 70.0,
        f_khz: 20.96,
        n_turns: 5.0,
        g0_over_2pi_hz: 418.0,
    },
    ReferenceRow {
        name: "spiral_n10",
        b_nm: 1000.0,
        h_nm: 100.0,
        t_nm: Some(200.0),
        d_nm: 100.0,
        l0_nh: 70.0,
        f_khz: 10.5,
        n_turns: 10.0,
        g0_over_2pi_hz: 701.0,
    },
    ReferenceRow {
        name: "spiral_n20",
        b_nm: 1000.0,
        h_nm: 100.0,
        t_nm: Some(100.0),
        d_nm: 100.0,
        l0_nh: 70.0,
        f_khz: 1.63,
        n_turns: 20.0,
        g0_over_2pi_hz: 941.0,
    },
];
