//! Definite integrals as limits of operator applications.
//!
//! * finite intervals: `f(∂)(e^{bε} − e^{aε})/ε` at `ε → 0`, or the
//!   termwise series sum `Σ c_n (b^{n+1} − a^{n+1})/(n+1)`;
//! * half-lines: `f(−∂)(1/ε)` at `ε → 0⁺`;
//! * the real line: `2π f(−i∂)δ(ε)` at `ε = 0`, exactly or through a
//!   regularized delta with extrapolation in the width;
//! * Fourier transforms: `√(2π) f(−i∂)δ(x)`.

mod extrapolate;
mod finite;
mod line;

pub use extrapolate::{richardson_prefixes, wynn_epsilon, Estimate};
pub use finite::{ftc_check, integrate_finite, integrate_finite_kernel, integrate_finite_split, FtcCheck, Piece};
pub use line::{
    delta_semigroup, fourier_kernel, fourier_transform, integrate_half_line, integrate_real_line,
    integrate_real_line_reg, integrate_two_sided, integrate_w_route, HalfLine, WRouteResult, DEFAULT_W_POINTS,
};

use crate::error::{Error, Result};
use crate::opcalc::Reg;
use crate::scalar::{Scalar, C64};
use std::fmt;

/// Which evaluation path produced a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Series,
    Kernel,
    Split,
    HalfLinePositive,
    HalfLineNegative,
    TwoSided,
    Delta,
    DeltaReg(RegShape),
    WRoute,
    Fourier,
    FourierReg(RegShape),
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Route::Series => write!(f, "series"),
            Route::Kernel => write!(f, "kernel"),
            Route::Split => write!(f, "split"),
            Route::HalfLinePositive => write!(f, "half-line+"),
            Route::HalfLineNegative => write!(f, "half-line-"),
            Route::TwoSided => write!(f, "two-sided"),
            Route::Delta => write!(f, "delta"),
            Route::DeltaReg(s) => write!(f, "delta-reg/{s}"),
            Route::WRoute => write!(f, "w-route"),
            Route::Fourier => write!(f, "fourier"),
            Route::FourierReg(s) => write!(f, "fourier-reg/{s}"),
        }
    }
}

/// One step of a truncation or regularization schedule.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub step: usize,
    /// Truncation order, Gaussian spread or sinc cutoff.
    pub parameter: f64,
    pub estimate: C64,
    pub delta_prev: Option<f64>,
    pub bound: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Diagnostics {
    pub truncation_order: Option<usize>,
    pub extrapolation_steps: usize,
    pub error_estimate: Option<f64>,
    pub rows: Vec<ConvergenceRow>,
    pub notes: Vec<String>,
    /// Closed-form kernel before the limit, when the route has one.
    pub symbolic: Option<String>,
}

impl Diagnostics {
    /// Longest run of consecutive steps whose `delta_prev` strictly
    /// decreases (or has already reached rounding level).
    pub fn decreasing_run(&self) -> usize {
        let deltas: Vec<f64> = self.rows.iter().filter_map(|r| r.delta_prev).collect();
        let scale = self.rows.last().map(|r| r.estimate.norm()).unwrap_or(0.0).max(1.0);
        let floor = 1e-14 * scale;
        let mut best = 0;
        let mut run = 0;
        for w in deltas.windows(2) {
            if w[1] < w[0] || (w[0] <= floor && w[1] <= floor) {
                run += 1;
                best = best.max(run);
            } else {
                run = 0;
            }
        }
        best
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegralResult {
    pub value: Scalar,
    pub route: Route,
    pub diagnostics: Diagnostics,
    /// `|value − oracle|`, filled in by [`IntegralResult::compare_oracle`].
    pub oracle_delta: Option<f64>,
    /// An error bound was available and met the requested tolerance.
    pub verified: bool,
}

impl IntegralResult {
    pub(crate) fn exact(value: Scalar, route: Route, symbolic: Option<String>) -> Self {
        IntegralResult {
            value,
            route,
            diagnostics: Diagnostics { error_estimate: Some(0.0), symbolic, ..Default::default() },
            oracle_delta: None,
            verified: true,
        }
    }

    pub fn compare_oracle(&mut self, oracle: C64) -> f64 {
        let d = (self.value.to_c64() - oracle).norm();
        self.oracle_delta = Some(d);
        d
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegShape {
    Gaussian,
    Sinc,
}

impl fmt::Display for RegShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegShape::Gaussian => write!(f, "gaussian"),
            RegShape::Sinc => write!(f, "sinc"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extrapolation {
    None,
    /// Neville table with at most this many columns.
    Richardson(usize),
}

/// Regularization schedule. The width `h` halves at every step: for the
/// Gaussian `h = √a` (spread `a` quarters), for the sinc `h = 1/L` (cutoff
/// doubles).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegScheme {
    pub shape: RegShape,
    /// Starting spread `a₀` or cutoff `L₀`; chosen from the integrand's
    /// frequencies when absent.
    pub width: Option<f64>,
    pub steps: usize,
    pub extrapolation: Extrapolation,
}

impl Default for RegScheme {
    fn default() -> Self {
        RegScheme { shape: RegShape::Gaussian, width: None, steps: 8, extrapolation: Extrapolation::Richardson(4) }
    }
}

impl RegScheme {
    pub fn gaussian() -> Self {
        Self::default()
    }

    pub fn sinc() -> Self {
        RegScheme { shape: RegShape::Sinc, ..Self::default() }
    }

    /// `(parameter, h, reg)` for each step.
    pub fn schedule(&self, frequencies: &[f64]) -> Result<Vec<(f64, f64, Reg)>> {
        if self.steps < 2 {
            return Err(Error::InvalidParameter("a schedule needs at least two steps".into()));
        }
        let start = match self.width {
            Some(w) if w > 0.0 && w.is_finite() => w,
            Some(w) => return Err(Error::InvalidParameter(format!("width {w} must be positive"))),
            None => self.auto_width(frequencies),
        };
        Ok((0..self.steps)
            .map(|k| match self.shape {
                RegShape::Gaussian => {
                    let a = start / 4f64.powi(k as i32);
                    (a, a.sqrt(), Reg::Gaussian { spread: a })
                }
                RegShape::Sinc => {
                    let l = start * 2f64.powi(k as i32);
                    (l, 1.0 / l, Reg::Sinc { cutoff: l, heat: 0.0 })
                }
            })
            .collect())
    }

    fn auto_width(&self, frequencies: &[f64]) -> f64 {
        match self.shape {
            // Shifted copies of the regularized delta overlap like
            // e^{−ω²/4a}; start where the smallest frequency is resolved.
            RegShape::Gaussian => match frequencies.first() {
                Some(w) => (w * w / 16.0).min(0.25),
                None => 0.25,
            },
            // A multiple of the fundamental period, so every shift lands
            // on a full oscillation of the sinc and the error is a clean
            // series in 1/L.
            RegShape::Sinc => {
                let period = 2.0 * std::f64::consts::PI / fundamental(frequencies);
                period * (20.0 / period).ceil().max(1.0)
            }
        }
    }
}

/// Largest `ω₀` with every frequency an integer multiple of it (when the
/// ratios are close to small rationals), else the smallest frequency.
fn fundamental(freqs: &[f64]) -> f64 {
    let Some(&w0) = freqs.first() else { return 1.0 };
    for q in 1..=64u32 {
        let cand = w0 / q as f64;
        if freqs.iter().all(|w| {
            let r = w / cand;
            (r - r.round()).abs() < 1e-9 * r.max(1.0)
        }) {
            return cand;
        }
    }
    w0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedules_halve_the_width() {
        let s = RegScheme::gaussian().schedule(&[1.0]).unwrap();
        assert_eq!(s.len(), 8);
        for w in s.windows(2) {
            assert!((w[0].1 / w[1].1 - 2.0).abs() < 1e-12);
        }
        let s = RegScheme::sinc().schedule(&[2.0, 3.0]).unwrap();
        // fundamental 1, so L₀ is a multiple of 2π above 20.
        let l0 = s[0].0;
        assert!(l0 >= 20.0 && ((l0 / (2.0 * std::f64::consts::PI)) - 4.0).abs() < 1e-12);
        assert!(RegScheme { width: Some(-1.0), ..RegScheme::sinc() }.schedule(&[]).is_err());
    }
}
