//! Neumaier compensated summation.

use std::ops::AddAssign;

#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    s: f64,
    c: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.s + v;
        if self.s.abs() >= v.abs() {
            self.c += (self.s - t) + v;
        } else {
            self.c += (v - t) + self.s;
        }
        self.s = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.s + self.c
    }
}

impl AddAssign<f64> for NeumaierSum {
    fn add_assign(&mut self, rhs: f64) {
        self.add(rhs);
    }
}

/// Compensated sum of an iterator.
pub fn sum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut acc = NeumaierSum::new();
    for v in it {
        acc.add(v);
    }
    acc.value()
}

/// Compensated running (prefix) sums.
pub fn prefix_sums(values: &[f64]) -> Vec<f64> {
    let mut acc = NeumaierSum::new();
    values
        .iter()
        .map(|&v| {
            acc.add(v);
            acc.value()
        })
        .collect()
}

/// Compensated suffix sums, accumulated from the tail so that small trailing
/// terms are not swallowed by a large accumulator.
pub fn suffix_sums(values: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; values.len()];
    let mut acc = NeumaierSum::new();
    for (o, &v) in out.iter_mut().zip(values).rev() {
        acc.add(v);
        *o = acc.value();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_small_terms_lost_by_naive_sum() {
        let vals = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(sum(vals), 2.0);
    }

    #[test]
    fn prefix_and_suffix_agree_on_totals() {
        let vals: Vec<f64> = (1..=1000).map(|j| 1.0 / (j as f64).powi(2)).collect();
        let p = prefix_sums(&vals);
        let s = suffix_sums(&vals);
        assert!((p[999] - s[0]).abs() < 1e-15);
        assert_eq!(p[0], 1.0);
        assert_eq!(s[999], vals[999]);
    }
}
