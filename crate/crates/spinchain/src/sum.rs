//! Compensated floating-point accumulation.
//!
//! Parity gaps are exponentially small differences of O(N) energy sums, so
//! naive left-to-right accumulation leaves nothing but rounding noise deep
//! in the gapless phase. Every momentum sum in this crate goes through the
//! Kahan-Babuska-Neumaier scheme below.

/// Neumaier-compensated running sum.
///
/// Tracks the rounding error of each addition in a separate compensation
/// term. The final value is accurate to O(eps)·|sum| plus an O(n·eps²)·Σ|x|
/// remainder, independent of how much cancellation occurs between terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Sums `terms` in non-decreasing magnitude order with compensation.
///
/// Sorting is cheap next to the dispersion evaluations that produce the
/// terms, and the magnitude ordering keeps the compensation term small.
pub fn sum_by_magnitude(terms: &mut [f64]) -> f64 {
    terms.sort_unstable_by(|x, y| x.abs().total_cmp(&y.abs()));
    let mut acc = CompensatedSum::new();
    for &t in terms.iter() {
        acc.add(t);
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_small_term() {
        let mut acc = CompensatedSum::new();
        acc.add(1.0);
        acc.add(1e100);
        acc.add(1.0);
        acc.add(-1e100);
        assert_eq!(acc.value(), 2.0);
    }

    #[test]
    fn magnitude_sort_matches_exact_sum() {
        // Alternating series whose exact partial sum is known.
        let mut terms: Vec<f64> = (1..=1000)
            .flat_map(|i| [i as f64 * 0.1, -(i as f64) * 0.1])
            .collect();
        terms.push(0.5);
        assert!((sum_by_magnitude(&mut terms) - 0.5).abs() < 1e-13);
    }
}
