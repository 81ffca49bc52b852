//! Bounded-wave standard-deviation schedule.
//!
//! The crunching search modulates its mutation width with a periodic wave
//! that oscillates between a floor `lower` and a ceiling `upper`:
//!
//! ```text
//! wave(x, lo, hi) = t(s(x, lo, hi))
//! t(p)            = tan(pi*p - pi/2)^2          (squared-tangent map)
//! T(v)            = arccot(sqrt(v)) / pi        (its inverse transform)
//! s(x, lo, hi)    = (cos(2*pi*x - pi) + 1)/2 * (T(hi) - T(lo)) + T(lo)
//! ```
//!
//! `t` and `T` are inverse to each other on the nonnegative reals, so the
//! wave is exactly `lower` at the start of a cycle, exactly `upper` at the
//! midpoint, and sweeps smoothly through every scale in between. The upper
//! bound may be infinite; a finite `sd_cap` stands in wherever the analytic
//! value would be infinite or overflow, so no non-finite number ever leaves
//! this module.
//!
//! A [`WaveCache`] samples one cycle at `x = i/period` and is the only form
//! the search loop consumes: plain table lookups, one per crunch step.

use crate::error::{Error, Result};

/// Finite stand-in for the wave's pole when the upper bound is infinite.
pub const DEFAULT_SD_CAP: f64 = 1e30;

/// Default number of crunch steps per wave cycle.
pub const DEFAULT_PERIOD: usize = 5000;

/// Bounds and sampling parameters of the wave schedule.
///
/// Invariants are enforced at construction: `0 <= lower <= upper`
/// (`upper` may be infinite), `period >= 2`, and `sd_cap` finite positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveParams {
    lower: f64,
    upper: f64,
    period: usize,
    sd_cap: f64,
}

impl Default for WaveParams {
    /// The reference configuration: floor 0, unbounded ceiling, period 5000.
    fn default() -> Self {
        WaveParams {
            lower: 0.0,
            upper: f64::INFINITY,
            period: DEFAULT_PERIOD,
            sd_cap: DEFAULT_SD_CAP,
        }
    }
}

impl WaveParams {
    pub fn new(lower: f64, upper: f64, period: usize, sd_cap: f64) -> Result<Self> {
        if !lower.is_finite() || lower < 0.0 {
            return Err(Error::Config(format!(
                "wave lower bound must be finite and >= 0, got {lower}"
            )));
        }
        if upper.is_nan() || upper < lower {
            return Err(Error::Config(format!(
                "wave upper bound must be >= lower bound {lower}, got {upper}"
            )));
        }
        if period < 2 {
            return Err(Error::Config(format!(
                "wave period must be at least 2, got {period}"
            )));
        }
        if !sd_cap.is_finite() || sd_cap <= 0.0 {
            return Err(Error::Config(format!(
                "sd_cap must be finite and positive, got {sd_cap}"
            )));
        }
        Ok(WaveParams {
            lower,
            upper,
            period,
            sd_cap,
        })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn sd_cap(&self) -> f64 {
        self.sd_cap
    }

    /// The wave value at cycle position `x`. Total for validated parameters.
    pub fn wave_at(&self, x: f64) -> f64 {
        wave(x, self.lower, self.upper, self.sd_cap)
            .expect("parameters validated at construction")
    }
}

/// Squared-tangent map `t(p) = tan(pi*p - pi/2)^2` on the open unit interval.
///
/// Values that come out non-finite or above `cap` (the poles at 0 and 1 are
/// approached when the schedule's upper bound is infinite) are replaced by
/// `cap`. Exactly 0 or 1 is a domain error; callers reach the pole only
/// through an infinite upper bound, which [`wave`] routes through the cap.
pub fn phase_to_sd(phase: f64, cap: f64) -> Result<f64> {
    if !(phase > 0.0 && phase < 1.0) {
        return Err(Error::Domain {
            op: "phase_to_sd",
            value: phase,
            domain: "the open interval (0, 1)",
        });
    }
    Ok(phase_to_sd_unchecked(phase, cap))
}

fn phase_to_sd_unchecked(phase: f64, cap: f64) -> f64 {
    let tangent = (std::f64::consts::PI * phase - std::f64::consts::FRAC_PI_2).tan();
    let raw = tangent * tangent;
    if !raw.is_finite() || raw > cap {
        cap
    } else {
        raw
    }
}

/// Inverse transform `T(v) = arccot(sqrt(v)) / pi`, computed as
/// `(pi/2 - atan(sqrt(v))) / pi`.
///
/// Strictly decreasing from `T(0) = 1/2` to `T(inf) = 0`; the infinite case
/// is special-cased to return exactly zero.
pub fn sd_to_phase(value: f64) -> Result<f64> {
    if value.is_nan() || value < 0.0 {
        return Err(Error::Domain {
            op: "sd_to_phase",
            value,
            domain: "the nonnegative reals (or +inf)",
        });
    }
    if value == f64::INFINITY {
        return Ok(0.0);
    }
    Ok((std::f64::consts::FRAC_PI_2 - value.sqrt().atan()) / std::f64::consts::PI)
}

/// Cosine interpolation of the phase over one cycle:
/// `s(x, lo, hi) = (cos(2*pi*x - pi) + 1)/2 * (T(hi) - T(lo)) + T(lo)`.
///
/// At `x = 0` this is exactly `T(lo)`, at `x = 0.5` exactly `T(hi)`; the
/// cosine makes it total and 1-periodic in `x`.
pub fn cycle_phase(x: f64, lower: f64, upper: f64) -> Result<f64> {
    let phase_lo = sd_to_phase(lower)?;
    let phase_hi = sd_to_phase(upper)?;
    let mix = ((2.0 * std::f64::consts::PI * x - std::f64::consts::PI).cos() + 1.0) / 2.0;
    Ok(mix * (phase_hi - phase_lo) + phase_lo)
}

/// The full wave `w(x, lo, hi) = t(s(x, lo, hi))`, capped at `cap`.
///
/// For finite bounds and `x` in `[0, 1]` the result stays in `[lo, hi]` (up
/// to rounding); an infinite upper bound sends the cycle midpoint through
/// the tangent pole, which the cap absorbs.
pub fn wave(x: f64, lower: f64, upper: f64, cap: f64) -> Result<f64> {
    let phase = cycle_phase(x, lower, upper)?;
    // phase <= 0 happens only when T(upper) underflows to zero (upper
    // infinite or enormous); the analytic value there is the pole.
    if phase <= 0.0 {
        return Ok(cap);
    }
    Ok(phase_to_sd_unchecked(phase, cap))
}

/// One precomputed wave cycle, sampled at `x = i/period`.
///
/// Immutable after construction and safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveCache {
    params: WaveParams,
    values: Vec<f64>,
}

impl WaveCache {
    /// Samples `wave(i/period)` for `i = 0..period`.
    pub fn build(params: WaveParams) -> Self {
        let period = params.period();
        let values = (0..period)
            .map(|i| params.wave_at(i as f64 / period as f64))
            .collect();
        WaveCache { params, values }
    }

    pub fn params(&self) -> &WaveParams {
        &self.params
    }

    pub fn period(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Table lookup with wraparound: `values[step % period]`.
    pub fn sd_at(&self, step: usize) -> f64 {
        self.values[step % self.values.len()]
    }
}
