//! Compensated summation, used wherever a full-vector sum must stay
//! trustworthy at millions of terms (probability normalization checks,
//! residuals, dangling mass).

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub(crate) fn add(&mut self, x: f64) {
        let y = x - self.compensation;
        let t = self.sum + y;
        self.compensation = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub(crate) fn value(self) -> f64 {
        self.sum
    }
}

pub(crate) fn kahan_sum(values: &[f64]) -> f64 {
    let mut acc = KahanSum::new();
    for &v in values {
        acc.add(v);
    }
    acc.value()
}

/// L1 distance between two equal-length vectors.
pub(crate) fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = KahanSum::new();
    for (x, y) in a.iter().zip(b) {
        acc.add((x - y).abs());
    }
    acc.value()
}
