//! Small numerical helpers shared across modules.

/// Compensated (Neumaier) accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = CompensatedSum::new();
    values.into_iter().for_each(|x| acc.add(x));
    acc.value()
}

/// Pairwise (tree) summation in a fixed order, so the result does not depend
/// on how the inputs were produced.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => {
            let (lo, hi) = values.split_at(n / 2);
            pairwise_sum(lo) + pairwise_sum(hi)
        }
    }
}

/// e_m(x_1..x_n) for m = 0..=n.
pub fn elementary_symmetric(values: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; values.len() + 1];
    e[0] = 1.0;
    for (k, &x) in values.iter().enumerate() {
        for m in (1..=k + 1).rev() {
            e[m] += x * e[m - 1];
        }
    }
    e
}

/// Best rational p/q with q ≤ `max_denominator` within `tol` of `x`.
pub fn recognize_rational(x: f64, max_denominator: u32, tol: f64) -> Option<(i64, u32)> {
    if !x.is_finite() {
        return None;
    }
    (1..=max_denominator).find_map(|q| {
        let p = (x * q as f64).round();
        ((x - p / q as f64).abs() <= tol).then_some((p as i64, q))
    })
}

pub fn format_rational(x: f64) -> Option<String> {
    recognize_rational(x, 1000, 1e-9).map(|(p, q)| {
        if q == 1 {
            format!("{p}")
        } else {
            format!("{p}/{q}")
        }
    })
}

#[inline]
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_beats_naive_on_cancellation() {
        let values = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(compensated_sum(values), 2.0);
    }

    #[test]
    fn pairwise_matches_exact_small_sums() {
        let v: Vec<f64> = (1..=100).map(|k| k as f64).collect();
        assert_eq!(pairwise_sum(&v), 5050.0);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }

    #[test]
    fn symmetric_polynomials() {
        let e = elementary_symmetric(&[1.0, 2.0, 3.0]);
        assert_eq!(e, vec![1.0, 6.0, 11.0, 6.0]);
    }

    #[test]
    fn rationals() {
        assert_eq!(recognize_rational(1.0 / 3.0, 1000, 1e-12), Some((1, 3)));
        assert_eq!(recognize_rational(-5.0 / 24.0, 1000, 1e-12), Some((-5, 24)));
        assert_eq!(format_rational(0.25).as_deref(), Some("1/4"));
        assert_eq!(recognize_rational(std::f64::consts::PI, 100, 1e-9), None);
    }

    #[test]
    fn erf_reference_values() {
        // Abramowitz & Stegun table values.
        assert!((erf(1.0) - 0.842_700_792_949_714_9).abs() < 1e-16);
        assert!((erf(0.5) - 0.520_499_877_813_046_5).abs() < 1e-16);
        assert_eq!(erf(0.0), 0.0);
    }
}
