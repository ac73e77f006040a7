//! Error-compensated summation.

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Running prefix sums `[0, x_1, x_1 + x_2, ...]`, each entry compensated.
pub fn prefix_sums(xs: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(xs.len() + 1);
    let mut acc = CompensatedSum::new();
    out.push(0.0);
    for &x in xs {
        acc.add(x);
        out.push(acc.value());
    }
    out
}

/// Compensated mean and standard error of the mean (sample variance, `n - 1`).
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().copied().collect::<CompensatedSum>().value() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let ss = xs
        .iter()
        .map(|&x| (x - mean) * (x - mean))
        .collect::<CompensatedSum>()
        .value();
    (mean, (ss / (n - 1) as f64 / n as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensation_recovers_small_terms() {
        let xs = [1e16, 1.0, -1e16, 1.0];
        let naive: f64 = xs.iter().sum();
        let s: CompensatedSum = xs.iter().copied().collect();
        assert_eq!(naive, 1.0);
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn prefix_sums_start_at_zero() {
        assert_eq!(prefix_sums(&[]), vec![0.0]);
        assert_eq!(prefix_sums(&[1.0, 2.0, 3.0]), vec![0.0, 1.0, 3.0, 6.0]);
    }

    #[test]
    fn constant_sample_has_zero_se() {
        let (m, se) = mean_and_se(&[2.5; 10]);
        assert_eq!(m, 2.5);
        assert_eq!(se, 0.0);
    }
}
