//! Sequences with explicit term formulas.

use crate::engine::Sequence;
use crate::hilbert::Vector;
use std::f64::consts::{LN_2, PI};

/// Unit vectors `e(αₙ)` with `αₙ = −π 2^{−(n+2)}`.
#[derive(Clone, Copy, Debug, Default)]
pub struct DyadicArc;

impl DyadicArc {
    pub fn angle(n: usize) -> f64 {
        -PI * (-((n + 2) as f64)).exp2()
    }

    /// Mid-angle `(αₙ + αₙ₊₁)/2` of the chord; `Cₙ = K([βₙ, βₙ + π])`.
    pub fn mid_angle(n: usize) -> f64 {
        (DyadicArc::angle(n) + DyadicArc::angle(n + 1)) / 2.0
    }
}

impl Sequence for DyadicArc {
    fn term(&self, n: usize) -> Vector {
        Vector::from_angle(DyadicArc::angle(n))
    }

    fn step(&self, n: usize) -> Vector {
        let (a, b) = (DyadicArc::angle(n), DyadicArc::angle(n + 1));
        let chord = 2.0 * ((b - a) / 2.0).sin();
        let mid = (a + b) / 2.0;
        Vector::plane(-chord * mid.sin(), chord * mid.cos())
    }
}

/// `(1/(k+1), 0)` at even indices and `(1/(k+2), h_k)` at odd ones.
#[derive(Clone, Copy, Debug, Default)]
pub struct LogBumps;

impl LogBumps {
    /// `ln(k+1)`, with `ln 2` standing in at `k = 0`.
    pub fn log_weight(k: usize) -> f64 {
        if k == 0 {
            LN_2
        } else {
            ((k + 1) as f64).ln()
        }
    }

    pub fn height(k: usize) -> f64 {
        let (a, b) = ((k + 1) as f64, (k + 2) as f64);
        (2.0 / (a * b * LogBumps::log_weight(k))).sqrt()
    }

    /// `1/ln(k+1) − (2k+3)/(2(k+1)(k+2))`; the sign of `‖x_{2k+1} − (x,0)‖² − ‖x_{2k} − (x,0)‖²` is that of this plus `x`.
    pub fn block_gap(k: usize) -> f64 {
        let (a, b) = ((k + 1) as f64, (k + 2) as f64);
        1.0 / LogBumps::log_weight(k) - (2.0 * k as f64 + 3.0) / (2.0 * a * b)
    }
}

impl Sequence for LogBumps {
    fn term(&self, n: usize) -> Vector {
        let k = n / 2;
        if n.is_multiple_of(2) {
            Vector::plane(1.0 / (k + 1) as f64, 0.0)
        } else {
            Vector::plane(1.0 / (k + 2) as f64, LogBumps::height(k))
        }
    }

    fn step(&self, n: usize) -> Vector {
        let k = n / 2;
        if n.is_multiple_of(2) {
            let (a, b) = ((k + 1) as f64, (k + 2) as f64);
            Vector::plane(-1.0 / (a * b), LogBumps::height(k))
        } else {
            Vector::plane(0.0, -LogBumps::height(k))
        }
    }
}

/// `e₁ + e_{n/2}` at even indices and `e₀ + e₁` at odd ones.
#[derive(Clone, Copy, Debug, Default)]
pub struct WanderingBasis;

impl Sequence for WanderingBasis {
    fn term(&self, n: usize) -> Vector {
        if n.is_multiple_of(2) {
            Vector::basis(1).add(&Vector::basis(n / 2))
        } else {
            Vector::basis(0).add(&Vector::basis(1))
        }
    }
}

/// `αₙ(e₀ + γ eₙ)` with `αₙ = 2^{−n}`.
#[derive(Clone, Copy, Debug)]
pub struct TiltedBasis {
    pub gamma: f64,
}

impl TiltedBasis {
    pub fn scale(n: usize) -> f64 {
        (-(n as f64)).exp2()
    }

    /// First `n` with `αₙ ≤ (γ − 2)/(1 + γ²)`; from there on `‖xₙ − (−2e₀ + eₙ)‖` strictly increases.
    pub fn witness_rise_from(gamma: f64) -> Option<usize> {
        if gamma <= 2.0 {
            return None;
        }
        let bound = (gamma - 2.0) / (1.0 + gamma * gamma);
        (0..1100).find(|&n| TiltedBasis::scale(n) <= bound)
    }

    /// `−2e₀ + eₙ`.
    pub fn witness(n: usize) -> Vector {
        Vector::basis(n).axpy(-2.0, &Vector::basis(0))
    }
}

impl Sequence for TiltedBasis {
    fn term(&self, n: usize) -> Vector {
        Vector::basis(0)
            .axpy(self.gamma, &Vector::basis(n))
            .scale(TiltedBasis::scale(n))
    }
}

/// `eₙ/(n+1)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct ShrinkingBasis;

impl Sequence for ShrinkingBasis {
    fn term(&self, n: usize) -> Vector {
        Vector::basis(n).scale(1.0 / (n + 1) as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arc_step_matches_difference() {
        for n in 0..10 {
            let d = DyadicArc.term(n + 1).sub(&DyadicArc.term(n));
            assert!(DyadicArc.step(n).approx_eq(&d, 1e-15));
        }
    }

    #[test]
    fn log_bumps_start() {
        assert_eq!(LogBumps.term(0), Vector::plane(1.0, 0.0));
        let x1 = LogBumps.term(1);
        assert_eq!(x1.get(0), 0.5);
        assert!((x1.get(1) - (1.0 / LN_2).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn block_gap_decreases() {
        let mut prev = LogBumps::block_gap(1);
        for k in 2..200_000 {
            let g = LogBumps::block_gap(k);
            assert!(g < prev, "block gap not decreasing at {k}");
            prev = g;
        }
    }

    #[test]
    fn wandering_basis_prefix() {
        let e = Vector::basis;
        assert_eq!(WanderingBasis.term(3), e(0).add(&e(1)));
        assert_eq!(WanderingBasis.term(4), e(1).add(&e(2)));
        assert_eq!(WanderingBasis.term(2), e(1).scale(2.0));
    }
}
