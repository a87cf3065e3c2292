//! Closed-form two-path interferometer intensities.
//!
//! All intensities are proportional quantities in units of `|amplitude|²`;
//! no charge, mass or ħ factors are carried.

use crate::{Complex, Error, Result, UNIT_BOUND_SLACK};

/// Amplitudes of the two arms and the Aharonov-Bohm phase between them.
///
/// The phase multiplies arm 2: the field at the screen is `a1 + e^{iθ}·a2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathPair {
    a1: Complex,
    a2: Complex,
    theta: f64,
}

impl PathPair {
    pub fn new(a1: Complex, a2: Complex, theta: f64) -> Result<Self> {
        if !(a1.is_finite() && a2.is_finite() && theta.is_finite()) {
            return Err(Error::OutOfRange {
                name: "path amplitude",
                value: f64::NAN,
                range: "finite",
            });
        }
        if a1.norm_sqr() + a2.norm_sqr() == 0.0 {
            return Err(Error::NoQuanton);
        }
        Ok(Self { a1, a2, theta })
    }

    /// Real amplitudes.
    pub fn real(a1: f64, a2: f64, theta: f64) -> Result<Self> {
        Self::new(Complex::new(a1, 0.0), Complex::new(a2, 0.0), theta)
    }

    pub fn a1(&self) -> Complex {
        self.a1
    }

    pub fn a2(&self) -> Complex {
        self.a2
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn with_theta(&self, theta: f64) -> Self {
        Self { theta, ..*self }
    }

    /// `|a1|² + |a2|²`.
    pub fn total_weight(&self) -> f64 {
        self.a1.norm_sqr() + self.a2.norm_sqr()
    }

    /// Arm-2 amplitude with the phase folded in, `e^{iθ}·a2`.
    pub fn phased_a2(&self) -> Complex {
        Complex::from_polar(1.0, self.theta) * self.a2
    }

    /// Ratio of the weaker to the stronger arm magnitude, in `[0, 1]`.
    pub fn alpha(&self) -> f64 {
        let (m1, m2) = (self.a1.norm(), self.a2.norm());
        if m2 >= m1 {
            m1 / m2
        } else {
            m2 / m1
        }
    }
}

/// Predictability and visibility of one configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualityPoint {
    pub predictability: f64,
    pub visibility: f64,
}

impl DualityPoint {
    /// `P² + V²`.
    pub fn sum_of_squares(&self) -> f64 {
        self.predictability * self.predictability + self.visibility * self.visibility
    }

    pub fn satisfies_bound(&self) -> bool {
        self.sum_of_squares() <= 1.0 + 1e-12
    }
}

/// `|a1 + e^{iθ}·a2|²`, expanded as `|a1|² + |a2|² + 2·Re(e^{iθ}·a1*·a2)`.
pub fn screen_intensity(p: &PathPair) -> f64 {
    let cross = Complex::from_polar(1.0, p.theta) * p.a1.conj() * p.a2;
    (p.total_weight() + 2.0 * cross.re).max(0.0)
}

/// `(I_max, I_min) = ((|a1|+|a2|)², (|a1|−|a2|)²)` over all phases.
pub fn fringe_extrema(p: &PathPair) -> (f64, f64) {
    let (m1, m2) = (p.a1.norm(), p.a2.norm());
    ((m1 + m2).powi(2), (m1 - m2).powi(2))
}

/// Relative modulation `(I_max − I_min)/I_max = 4α/(1+α)²`.
pub fn modulation(alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::OutOfRange {
            name: "alpha",
            value: alpha,
            range: "[0, 1]",
        });
    }
    Ok(4.0 * alpha / (1.0 + alpha).powi(2))
}

/// Fringe visibility `(I_max − I_min)/(I_max + I_min)`.
pub fn visibility(i_max: f64, i_min: f64) -> Result<f64> {
    if !(i_min >= 0.0) || !i_max.is_finite() {
        return Err(Error::OutOfRange {
            name: "I_min",
            value: i_min,
            range: "0 ≤ I_min ≤ I_max",
        });
    }
    if i_max == 0.0 {
        return Err(Error::UndefinedVisibility);
    }
    if i_min > i_max {
        return Err(Error::OutOfRange {
            name: "I_min",
            value: i_min,
            range: "0 ≤ I_min ≤ I_max",
        });
    }
    Ok((i_max - i_min) / (i_max + i_min))
}

/// Which-path predictability `||a1|² − |a2|²| / (|a1|² + |a2|²)`.
pub fn predictability(p: &PathPair) -> f64 {
    (p.a1.norm_sqr() - p.a2.norm_sqr()).abs() / p.total_weight()
}

/// Duality point for a pair observed through a detector of overlap `c`.
///
/// The visibility is the pure-state contrast `2|a1||a2|/(|a1|²+|a2|²)`
/// reduced by `|c|`.
pub fn duality_point(p: &PathPair, detector_overlap: Complex) -> Result<DualityPoint> {
    let c_abs = detector_overlap.norm();
    if !(c_abs <= 1.0 + UNIT_BOUND_SLACK) {
        return Err(Error::OutOfRange {
            name: "|detector_overlap|",
            value: c_abs,
            range: "[0, 1]",
        });
    }
    let c_abs = c_abs.min(1.0);
    let pure = 2.0 * p.a1.norm() * p.a2.norm() / p.total_weight();
    Ok(DualityPoint {
        predictability: predictability(p),
        visibility: c_abs * pure,
    })
}
