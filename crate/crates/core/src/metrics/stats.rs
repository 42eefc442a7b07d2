//! Order statistics and moments shared by the metric kernels.
//!
//! Sums go through [`FixedSum`], which rounds every term onto a 2^-72 grid
//! and adds in 128-bit integers. Integer addition is associative, so means
//! and standard deviations are bitwise independent of element order.

/// Linear-interpolation percentile (`p` in [0, 1]) on already sorted data.
///
/// Uses rank `h = p * (n - 1)` and interpolates between `floor(h)` and the
/// next order statistic. Returns 0 for empty input.
pub fn percentile_sorted(sorted: &[f64], p: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let (lo, frac) = rank(sorted.len(), p);
    if frac == 0.0 || lo + 1 >= sorted.len() {
        return sorted[lo];
    }
    interpolate(sorted[lo], sorted[lo + 1], frac)
}

/// Same definition as [`percentile_sorted`], computed by selection in
/// expected linear time. Reorders `values`.
pub fn percentile_select(values: &mut [f64], p: f64) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let (lo, frac) = rank(values.len(), p);
    let (_, &mut lo_val, upper) = values.select_nth_unstable_by(lo, f64::total_cmp);
    if frac == 0.0 || upper.is_empty() {
        return lo_val;
    }
    let hi_val = upper.iter().copied().fold(f64::INFINITY, f64::min);
    interpolate(lo_val, hi_val, frac)
}

fn rank(n: usize, p: f64) -> (usize, f64) {
    let h = p.clamp(0.0, 1.0) * (n - 1) as f64;
    let lo = h.floor();
    (lo as usize, h - lo)
}

fn interpolate(lo: f64, hi: f64, frac: f64) -> f64 {
    lo + frac * (hi - lo)
}

const FIXED_SCALE: f64 = (1u128 << 72) as f64;

/// Order-independent accumulator for terms with magnitude below 2^50.
///
/// Each term is rounded to a multiple of 2^-72 before being added, so the
/// absolute error per term is at most 2^-73.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FixedSum {
    acc: i128,
}

impl FixedSum {
    pub fn add(&mut self, v: f64) {
        self.acc += (v * FIXED_SCALE).round() as i128;
    }

    pub fn value(&self) -> f64 {
        self.acc as f64 / FIXED_SCALE
    }
}

impl FromIterator<f64> for FixedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = FixedSum::default();
        for v in iter {
            s.add(v);
        }
        s
    }
}

/// Arithmetic mean; 0 for empty input.
pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().copied().collect::<FixedSum>().value() / values.len() as f64
}

/// Two-pass population (divisor N) standard deviation.
pub fn population_std(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    let ss = values.iter().map(|v| (v - m) * (v - m)).collect::<FixedSum>();
    (ss.value() / values.len() as f64).sqrt()
}

/// Welford accumulator for single-pass mean and variance.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunningMoments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl RunningMoments {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn population_variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.m2 / self.count as f64).max(0.0)
        }
    }

    pub fn population_std(&self) -> f64 {
        self.population_variance().sqrt()
    }
}

impl Extend<f64> for RunningMoments {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.push(x);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn percentile_of_ramp() {
        let ramp: Vec<f64> = (0..=100).map(|i| i as f64).collect();
        assert_eq!(percentile_sorted(&ramp, 0.99), 99.0);
        assert_eq!(percentile_sorted(&ramp, 0.01), 1.0);
        let mut v = ramp.clone();
        assert_eq!(percentile_select(&mut v, 0.5), 50.0);
        assert_eq!(percentile_sorted(&[1.0, 2.0], 0.25), 1.25);
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(percentile_sorted(&[], 0.5), 0.0);
        assert_eq!(percentile_select(&mut [7.0], 0.99), 7.0);
        assert_eq!(population_std(&[3.0]), 0.0);
        assert_eq!(RunningMoments::new().population_std(), 0.0);
    }

    #[test]
    fn two_point_population_std() {
        let v = [20.0, 40.0, 20.0, 40.0];
        assert_eq!(population_std(&v), 10.0);
    }

    #[test]
    fn fixed_sum_is_order_independent() {
        let v = [0.1, 1e6, -0.3, 1e-9, 2.5e3, 0.7];
        let forward = mean(&v);
        let mut rev = v;
        rev.reverse();
        assert_eq!(forward, mean(&rev));
        assert!((forward - v.iter().sum::<f64>() / 6.0).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn permuted_moments_are_bitwise_equal(v in prop::collection::vec(-500f64..500.0, 2..200), seed in any::<u64>()) {
            let mut shuffled = v.clone();
            crate::dataset::seeded_shuffle(&mut shuffled, seed);
            prop_assert_eq!(mean(&v).to_bits(), mean(&shuffled).to_bits());
            prop_assert_eq!(population_std(&v).to_bits(), population_std(&shuffled).to_bits());
        }

        #[test]
        fn select_matches_sort(mut v in prop::collection::vec(-1e3f64..1e3, 1..300), p in 0.0f64..=1.0) {
            let mut sorted = v.clone();
            sorted.sort_by(f64::total_cmp);
            prop_assert_eq!(percentile_select(&mut v, p), percentile_sorted(&sorted, p));
        }

        #[test]
        fn welford_matches_two_pass(v in prop::collection::vec(-100f64..100.0, 0..500)) {
            let mut acc = RunningMoments::new();
            acc.extend(v.iter().copied());
            prop_assert!((acc.population_std() - population_std(&v)).abs() < 1e-9);
        }
    }
}
