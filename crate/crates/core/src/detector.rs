//! Which-path detector entanglement, collapse and quantum erasure.
//!
//! The detector's Hilbert space is never built. Its pointer states `|1⟩` and
//! `|2⟩` are normalized, so the only free quantity is the overlap
//! `c = ⟨1|2⟩`: `|c| = 1` carries no path information, `c = 0` is a perfect
//! which-path record.

use crate::interferometer::PathPair;
use crate::{Complex, Error, Result, UNIT_BOUND_SLACK};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorCoupling {
    overlap: Complex,
}

impl DetectorCoupling {
    pub fn new(overlap: Complex) -> Result<Self> {
        let m = overlap.norm();
        if !(m <= 1.0 + UNIT_BOUND_SLACK) {
            return Err(Error::OutOfRange {
                name: "|detector_overlap|",
                value: m,
                range: "[0, 1]",
            });
        }
        Ok(Self { overlap })
    }

    /// Orthogonal pointer states, `c = 0`.
    pub fn orthogonal() -> Self {
        Self {
            overlap: Complex::new(0.0, 0.0),
        }
    }

    /// Pointer states identical, `c = 1`; equivalent to no detector.
    pub fn blind() -> Self {
        Self {
            overlap: Complex::new(1.0, 0.0),
        }
    }

    pub fn overlap(&self) -> Complex {
        self.overlap
    }

    /// `|c|` clamped into `[0, 1]`.
    pub fn magnitude(&self) -> f64 {
        self.overlap.norm().min(1.0)
    }

    /// `arg c`, zero for `c = 0`.
    pub fn phase(&self) -> f64 {
        if self.overlap == Complex::new(0.0, 0.0) {
            0.0
        } else {
            self.overlap.arg()
        }
    }
}

/// `Φ = branch1·|1⟩ + branch2·|2⟩`, with the A-B phase already folded into
/// `branch2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntangledState {
    branch1: Complex,
    branch2: Complex,
    coupling: DetectorCoupling,
}

impl EntangledState {
    pub fn new(branch1: Complex, branch2: Complex, coupling: DetectorCoupling) -> Result<Self> {
        if branch1.norm_sqr() + branch2.norm_sqr() == 0.0 {
            return Err(Error::NoQuanton);
        }
        Ok(Self {
            branch1,
            branch2,
            coupling,
        })
    }

    pub fn branch1(&self) -> Complex {
        self.branch1
    }

    pub fn branch2(&self) -> Complex {
        self.branch2
    }

    pub fn coupling(&self) -> DetectorCoupling {
        self.coupling
    }

    /// Multiply each branch by a barrier transmission amplitude.
    ///
    /// Returns `None` when both barriers are opaque.
    pub fn attenuated(&self, t1: Complex, t2: Complex) -> Option<Self> {
        Self::new(self.branch1 * t1, self.branch2 * t2, self.coupling).ok()
    }
}

pub fn entangle(p: &PathPair, d: DetectorCoupling) -> EntangledState {
    EntangledState {
        branch1: p.a1(),
        branch2: p.phased_a2(),
        coupling: d,
    }
}

/// `|b1|²⟨1|1⟩ + |b2|²⟨2|2⟩ + ⟨1|2⟩·b1*·b2 + ⟨2|1⟩·b2*·b1`.
pub fn intensity_entangled(s: &EntangledState) -> f64 {
    let c = s.coupling.overlap;
    let direct = s.branch1.norm_sqr() + s.branch2.norm_sqr();
    let cross = c * s.branch1.conj() * s.branch2 + c.conj() * s.branch2.conj() * s.branch1;
    (direct + cross.re).max(0.0)
}

/// `|a1|² + |a2|²`: the screen intensity once the interference terms are gone.
pub fn collapsed_intensity(p: &PathPair) -> f64 {
    p.total_weight()
}

/// `|(w1*·⟨1| + w2*·⟨2|)|Φ⟩|²`.
///
/// The projection uses the full pointer Gram matrix, `⟨1|Φ⟩ = b1 + c·b2` and
/// `⟨2|Φ⟩ = c*·b1 + b2`, so for `c = 0` it reduces to `|w1*·b1 + w2*·b2|²`.
/// The projector vector is not normalized.
pub fn erase(s: &EntangledState, w1: Complex, w2: Complex) -> Result<f64> {
    if w1 == Complex::new(0.0, 0.0) && w2 == Complex::new(0.0, 0.0) {
        return Err(Error::ZeroErasureBasis);
    }
    let c = s.coupling.overlap;
    let on1 = s.branch1 + c * s.branch2;
    let on2 = c.conj() * s.branch1 + s.branch2;
    Ok((w1.conj() * on1 + w2.conj() * on2).norm_sqr())
}

/// Fringe and anti-fringe halves of the collapsed intensity for an orthogonal
/// detector: `(erase(s,1,1)/2, erase(s,1,−1)/2)`.
pub fn erasure_decomposition(s: &EntangledState) -> Result<(f64, f64)> {
    if s.coupling.overlap != Complex::new(0.0, 0.0) {
        return Err(Error::NonOrthogonalDetector(s.coupling.overlap));
    }
    let one = Complex::new(1.0, 0.0);
    Ok((erase(s, one, one)? / 2.0, erase(s, one, -one)? / 2.0))
}

/// Symmetric / antisymmetric pointer outcomes for an arbitrary coupling.
///
/// The pointer is read in the orthonormal basis built from
/// `|1⟩ ± e^{-i·arg c}|2⟩`. The two intensities sum to
/// [`intensity_entangled`]; the symmetric one is
/// `(1+|c|)/2·|b1 + e^{i·arg c}·b2|²`, whose θ-visibility does not depend on
/// `|c|`. At `c = 0` they equal [`erasure_decomposition`].
pub fn eraser_outcomes(s: &EntangledState) -> (f64, f64) {
    let m = s.coupling.magnitude();
    let rot = Complex::from_polar(1.0, -s.coupling.phase());
    let one = Complex::new(1.0, 0.0);
    let outcome = |sign: f64| -> f64 {
        // ‖|1⟩ + σ·e^{-iφ}|2⟩‖² = 2 + 2σ|c|
        let norm_sqr = 2.0 + 2.0 * sign * m;
        if norm_sqr <= 1e-15 {
            return 0.0;
        }
        erase(s, one, rot * sign).expect("nonzero basis") / norm_sqr
    };
    (outcome(1.0), outcome(-1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{PI, TAU};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn pair(a1: f64, a2: f64, theta: f64) -> PathPair {
        PathPair::real(a1, a2, theta).unwrap()
    }

    /// Term-by-term expansion of the entangled intensity.
    fn expanded(b1: Complex, b2: Complex, ov: Complex) -> f64 {
        let t11 = b1.norm_sqr() * 1.0;
        let t22 = b2.norm_sqr() * 1.0;
        let t12 = ov * b1.conj() * b2;
        let t21 = ov.conj() * b2.conj() * b1;
        (t11 + t22 + t12 + t21).re
    }

    #[test]
    fn entangle_examples() {
        let s = entangle(&pair(1.0, 1.0, 0.0), DetectorCoupling::orthogonal());
        assert_eq!((s.branch1(), s.branch2()), (c(1.0, 0.0), c(1.0, 0.0)));
        let s = entangle(&pair(1.0, 1.0, PI), DetectorCoupling::blind());
        assert!((s.branch2() - c(-1.0, 0.0)).norm() < 1e-15);
        assert!(intensity_entangled(&s) < 1e-15);

        let half = DetectorCoupling::new(c(0.5, 0.0)).unwrap();
        for k in 0..20 {
            let theta = 0.4 * k as f64;
            let s = entangle(&pair(0.5, 1.0, theta), half);
            assert_eq!(s.branch1(), c(0.5, 0.0));
            assert!((s.branch2() - Complex::from_polar(1.0, theta)).norm() < 1e-15);
            let e = expanded(s.branch1(), s.branch2(), c(0.5, 0.0));
            assert!((intensity_entangled(&s) - e).abs() < 1e-14);
        }
    }

    #[test]
    fn intensity_entangled_examples() {
        let s = entangle(&pair(0.3, 0.9, 1.1), DetectorCoupling::orthogonal());
        assert!((intensity_entangled(&s) - (0.09 + 0.81)).abs() < 1e-15);
        let s = entangle(&pair(1.0, 1.0, 0.0), DetectorCoupling::blind());
        assert_eq!(intensity_entangled(&s), 4.0);
        let s = entangle(&pair(1.0, 1.0, 0.0), DetectorCoupling::new(c(0.5, 0.0)).unwrap());
        assert_eq!(intensity_entangled(&s), 3.0);
    }

    #[test]
    fn collapsed_intensity_examples() {
        assert_eq!(collapsed_intensity(&pair(1.0, 1.0, 2.0)), 2.0);
        assert_eq!(collapsed_intensity(&pair(1.0, 0.0, 2.0)), 1.0);
        let vals: Vec<f64> = (0..100)
            .map(|k| collapsed_intensity(&pair(0.5, 1.0, TAU * k as f64 / 100.0)))
            .collect();
        let spread = vals.iter().cloned().fold(f64::MIN, f64::max)
            - vals.iter().cloned().fold(f64::MAX, f64::min);
        assert_eq!(spread, 0.0);
    }

    #[test]
    fn erase_examples() {
        let one = c(1.0, 0.0);
        for k in 0..30 {
            let theta = 0.21 * k as f64;
            let s = entangle(&pair(1.0, 1.0, theta), DetectorCoupling::orthogonal());
            let sym = erase(&s, one, one).unwrap();
            assert!((sym - (2.0 + 2.0 * theta.cos())).abs() < 1e-14);
            let anti = erase(&s, one, -one).unwrap();
            assert!((anti - (2.0 - 2.0 * theta.cos())).abs() < 1e-14);
            assert!((sym + anti - 2.0 * collapsed_intensity(&pair(1.0, 1.0, theta))).abs() < 1e-14);
        }
        let s = entangle(&pair(0.6, 0.8, 0.7), DetectorCoupling::orthogonal());
        assert!((erase(&s, one, c(0.0, 0.0)).unwrap() - 0.36).abs() < 1e-15);
        assert!(matches!(
            erase(&s, c(0.0, 0.0), c(0.0, 0.0)),
            Err(Error::ZeroErasureBasis)
        ));
    }

    #[test]
    fn erasure_decomposition_examples() {
        let d = DetectorCoupling::orthogonal();
        let (f, a) = erasure_decomposition(&entangle(&pair(1.0, 1.0, 0.0), d)).unwrap();
        assert_eq!((f, a), (2.0, 0.0));
        let (f, a) = erasure_decomposition(&entangle(&pair(1.0, 1.0, PI), d)).unwrap();
        assert!(f.abs() < 1e-15 && (a - 2.0).abs() < 1e-15);
        let p = pair(0.5, 1.0, PI / 3.0);
        let (f, a) = erasure_decomposition(&entangle(&p, d)).unwrap();
        assert!((f + a - 1.25).abs() < 1e-15);
        assert!((f + a - collapsed_intensity(&p)).abs() < 1e-15);
        let half = DetectorCoupling::new(c(0.5, 0.0)).unwrap();
        assert!(matches!(
            erasure_decomposition(&entangle(&p, half)),
            Err(Error::NonOrthogonalDetector(_))
        ));
    }

    #[test]
    fn coupling_bound() {
        assert!(DetectorCoupling::new(c(1.5, 0.0)).is_err());
        assert!(DetectorCoupling::new(c(0.6, 0.8)).is_ok());
        assert!(DetectorCoupling::new(Complex::from_polar(1.0, 2.3)).is_ok());
    }

    fn arb_complex(max: f64) -> impl Strategy<Value = Complex> {
        (0.0..max, 0.0..TAU).prop_map(|(r, phi)| Complex::from_polar(r, phi))
    }

    fn arb_pair() -> impl Strategy<Value = PathPair> {
        (arb_complex(2.0), arb_complex(2.0), -TAU..TAU)
            .prop_filter_map("open path", |(a1, a2, t)| PathPair::new(a1, a2, t).ok())
    }

    fn theta_sweep(p: &PathPair, d: DetectorCoupling, points: usize) -> Vec<f64> {
        (0..points)
            .map(|k| intensity_entangled(&entangle(&p.with_theta(TAU * k as f64 / points as f64), d)))
            .collect()
    }

    proptest! {
        #[test]
        fn blind_detector_reduces_to_screen(p in arb_pair()) {
            let i = intensity_entangled(&entangle(&p, DetectorCoupling::blind()));
            prop_assert!((i - crate::interferometer::screen_intensity(&p)).abs() <= 1e-12);
        }

        #[test]
        fn orthogonal_detector_dephases(p in arb_pair()) {
            let sweep = theta_sweep(&p, DetectorCoupling::orthogonal(), 1000);
            let hi = sweep.iter().cloned().fold(f64::MIN, f64::max);
            let lo = sweep.iter().cloned().fold(f64::MAX, f64::min);
            prop_assert!(hi - lo <= 1e-12);
            prop_assert!((hi - collapsed_intensity(&p)).abs() <= 1e-12);
        }

        #[test]
        fn symmetric_erasure_regenerates_screen(p in arb_pair()) {
            let one = c(1.0, 0.0);
            let s = entangle(&p, DetectorCoupling::orthogonal());
            let e = erase(&s, one, one).unwrap();
            prop_assert!((e - crate::interferometer::screen_intensity(&p)).abs() <= 1e-12);
            let (f, a) = erasure_decomposition(&s).unwrap();
            prop_assert!((f + a - collapsed_intensity(&p)).abs() <= 1e-12);
        }

        #[test]
        fn visibility_scales_with_overlap(p in arb_pair(), ov in arb_complex(1.0)) {
            let d = DetectorCoupling::new(ov).unwrap();
            let sweep = theta_sweep(&p, d, 4096);
            let hi = sweep.iter().cloned().fold(f64::MIN, f64::max);
            let lo = sweep.iter().cloned().fold(f64::MAX, f64::min);
            let pure = 2.0 * p.a1().norm() * p.a2().norm() / p.total_weight();
            // The grid misses the exact extremum by at most (π/4096)²/2 relative.
            let grid_err = 2.0 * (PI / 4096.0).powi(2);
            prop_assert!(((hi - lo) / (hi + lo) - ov.norm() * pure).abs() <= 1e-10 + grid_err);
        }

        #[test]
        fn eraser_outcomes_sum_to_entangled(p in arb_pair(), ov in arb_complex(1.0)) {
            let s = entangle(&p, DetectorCoupling::new(ov).unwrap());
            let (plus, minus) = eraser_outcomes(&s);
            prop_assert!(plus >= 0.0 && minus >= 0.0);
            prop_assert!((plus + minus - intensity_entangled(&s)).abs() <= 1e-12);
            // closed form of the symmetric outcome
            let rot = Complex::from_polar(1.0, s.coupling().phase());
            let closed = (1.0 + ov.norm()) / 2.0 * (s.branch1() + rot * s.branch2()).norm_sqr();
            prop_assert!((plus - closed).abs() <= 1e-12);
        }
    }

    #[test]
    fn eraser_outcomes_match_decomposition_at_zero_overlap() {
        let s = entangle(&pair(0.5, 1.0, 0.9), DetectorCoupling::orthogonal());
        let (p, m) = eraser_outcomes(&s);
        let (f, a) = erasure_decomposition(&s).unwrap();
        assert!((p - f).abs() < 1e-15 && (m - a).abs() < 1e-15);
    }
}
