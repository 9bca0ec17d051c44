//! Memoized recurrences and the geometric step rules behind them.

use crate::engine::Sequence;
use crate::hilbert::Vector;
use std::f64::consts::PI;
use std::sync::Mutex;

/// One step of a recurrence: returns `(x_{n+1}, x_{n+1} − x_n)`.
pub trait StepRule: Send + Sync {
    fn advance(&self, n: usize, x: &Vector) -> (Vector, Vector);
}

#[derive(Default)]
struct Table {
    terms: Vec<Vector>,
    steps: Vec<Vector>,
}

/// A recurrence with an append-only cache, started at index `start`.
pub struct Recurrence<R> {
    rule: R,
    start: usize,
    table: Mutex<Table>,
}

impl<R: StepRule> Recurrence<R> {
    pub fn new(rule: R, x0: Vector) -> Self {
        Recurrence::from_checkpoint(rule, 0, x0)
    }

    /// Restarts the recurrence from a stored term `x_start`.
    pub fn from_checkpoint(rule: R, start: usize, x_start: Vector) -> Self {
        let table = Table {
            terms: vec![x_start],
            steps: Vec::new(),
        };
        Recurrence {
            rule,
            start,
            table: Mutex::new(table),
        }
    }

    pub fn rule(&self) -> &R {
        &self.rule
    }

    /// Number of terms currently cached.
    pub fn cached(&self) -> usize {
        self.table
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .terms
            .len()
    }

    fn fill(&self, n: usize) -> std::sync::MutexGuard<'_, Table> {
        assert!(
            n >= self.start,
            "index {n} precedes the checkpoint {}",
            self.start
        );
        let mut t = self.table.lock().unwrap_or_else(|e| e.into_inner());
        while t.steps.len() <= n - self.start {
            let k = t.steps.len();
            let (next, step) = self.rule.advance(self.start + k, &t.terms[k]);
            t.terms.push(next);
            t.steps.push(step);
        }
        t
    }
}

impl<R: StepRule> Sequence for Recurrence<R> {
    /// # Panics
    /// If `n` precedes the checkpoint index.
    fn term(&self, n: usize) -> Vector {
        let t = self.fill(n);
        t.terms[n - self.start].clone()
    }

    fn step(&self, n: usize) -> Vector {
        let t = self.fill(n);
        t.steps[n - self.start].clone()
    }
}

/// Midpoint of the minor arc from `x` towards the circle point at angle `target`,
/// on the circle about `center` through `x`. Returns the new point and the chord.
pub fn arc_midpoint(center: &Vector, x: &Vector, target: f64) -> (Vector, Vector) {
    let w = x.sub(center);
    let radius = w.norm();
    let phi = w.get(1).atan2(w.get(0));
    let theta = (phi + target) / 2.0;
    let chord = 2.0 * radius * ((theta - phi) / 2.0).sin();
    let mid = (theta + phi) / 2.0;
    let step = Vector::plane(-chord * mid.sin(), chord * mid.cos());
    (x.add(&step), step)
}

/// Circles about `(−n, 0)`, always bisecting towards the rightmost axis point.
#[derive(Clone, Copy, Debug, Default)]
pub struct DriftingArcs;

impl StepRule for DriftingArcs {
    fn advance(&self, n: usize, x: &Vector) -> (Vector, Vector) {
        arc_midpoint(&Vector::plane(-(n as f64), 0.0), x, 0.0)
    }
}

/// Circles about `(−aₙ, 0)` that pin the next abscissa to `aₙ 2^{−n}`.
#[derive(Clone, Copy, Debug, Default)]
pub struct WideningCircles;

impl WideningCircles {
    pub fn shift(n: usize) -> f64 {
        (-(n as f64)).exp2()
    }
}

impl StepRule for WideningCircles {
    fn advance(&self, n: usize, x: &Vector) -> (Vector, Vector) {
        let a = WideningCircles::shift(n);
        let pin = a * (-(n as f64)).exp2();
        let (px, py) = (x.get(0), x.get(1));
        let gain = (px + a) * (px + a) - pin * pin;
        let ny = (py * py + gain).sqrt();
        let dy = gain / (py + ny);
        let step = Vector::plane(pin - px, dy);
        (Vector::plane(pin, py + dy), step)
    }
}

/// Arcs about `(±1, 0)` every third step, reflections across the axis otherwise.
#[derive(Clone, Copy, Debug, Default)]
pub struct ArcsAndReflections;

impl ArcsAndReflections {
    /// `b_m`: the axis point of the circle used at step `3m`, nearest to the other center.
    pub fn axis_point(m: usize, x: &Vector) -> f64 {
        if m.is_multiple_of(2) {
            1.0 - x.dist(&Vector::plane(1.0, 0.0))
        } else {
            x.dist(&Vector::plane(-1.0, 0.0)) - 1.0
        }
    }
}

impl StepRule for ArcsAndReflections {
    fn advance(&self, n: usize, x: &Vector) -> (Vector, Vector) {
        if n.is_multiple_of(3) {
            let odd = n % 2 == 1;
            let center = Vector::plane(if odd { -1.0 } else { 1.0 }, 0.0);
            arc_midpoint(&center, x, if odd { 0.0 } else { PI })
        } else {
            let next = Vector::plane(x.get(0), -x.get(1));
            let step = Vector::plane(0.0, -2.0 * x.get(1));
            (next, step)
        }
    }
}

/// Horizontal moves of `2^{−ℓ}` alternating with arcs about `(1, 0)` back to the vertical axis.
#[derive(Clone, Copy, Debug, Default)]
pub struct ShiftAndSwing;

impl StepRule for ShiftAndSwing {
    fn advance(&self, n: usize, x: &Vector) -> (Vector, Vector) {
        let h = (-((n / 2) as f64)).exp2();
        let y = x.get(1);
        if n.is_multiple_of(2) {
            let step = Vector::plane(h, 0.0);
            (Vector::plane(x.get(0) + h, y), step)
        } else {
            let drop = h * h - 2.0 * h;
            let ny = (y * y + drop).sqrt();
            let dy = drop / (y + ny);
            let step = Vector::plane(-h, dy);
            (Vector::plane(0.0, y + dy), step)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arc_midpoint_bisects() {
        let c = Vector::plane(1.0, 0.0);
        let x = Vector::plane(0.0, 1.0);
        let (next, step) = arc_midpoint(&c, &x, PI);
        let want = c.add(&Vector::from_angle(7.0 * PI / 8.0).scale(2f64.sqrt()));
        assert!(next.approx_eq(&want, 1e-15));
        assert!(step.approx_eq(&next.sub(&x), 1e-15));
    }

    #[test]
    fn checkpoint_restart_agrees() {
        let full = Recurrence::new(ShiftAndSwing, Vector::plane(0.0, 2.0));
        let k = 7;
        let part = Recurrence::from_checkpoint(ShiftAndSwing, k, full.term(k));
        for n in k..40 {
            assert_eq!(full.term(n), part.term(n));
        }
        assert_eq!(full.cached(), 41);
    }
}
