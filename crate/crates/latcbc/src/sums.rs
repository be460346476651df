//! Compensated summation for the length-n kernel sums.
//!
//! The Bernoulli-kernel sums cancel heavily (a full residue ring sums to
//! 1/(6n) from terms of size ~1/6), so plain or pairwise accumulation loses
//! relative accuracy. Neumaier's variant of Kahan summation keeps the error
//! at a few ulps of the true sum and is deterministic.

/// Neumaier compensated accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct Accumulator {
    sum: f64,
    comp: f64,
}

impl Accumulator {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn sum(xs: &[f64]) -> f64 {
    let mut acc = Accumulator::default();
    for &x in xs {
        acc.add(x);
    }
    acc.value()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Accumulator::default();
    for (&x, &y) in a.iter().zip(b.iter()) {
        acc.add(x * y);
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensates_cancellation() {
        // 1 + 1e-16 added 10^5 times, then -1: plain f64 drops the 1e-16s.
        let mut acc = Accumulator::default();
        acc.add(1.0);
        for _ in 0..100_000 {
            acc.add(1e-16);
        }
        acc.add(-1.0);
        assert!((acc.value() - 1e-11).abs() < 1e-24);
    }

    #[test]
    fn dot_matches_sum() {
        let a = [0.5, -0.25, 2.0];
        let b = [4.0, 8.0, 0.5];
        assert_eq!(dot(&a, &b), 1.0);
        assert_eq!(sum(&[2.0, -2.0, 1.0]), 1.0);
    }
}
