/// Compensated (Kahan) summation. Terms are added in the order given;
/// callers that need reproducible sums must fix that order themselves.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    c: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = x - self.c;
        let s = self.sum + t;
        self.c = (s - self.sum) - t;
        self.sum = s;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// log(1 + e^w) without overflow for any w.
#[inline]
pub fn softplus(w: f64) -> f64 {
    if w <= 30.0 {
        w.exp().ln_1p()
    } else {
        w + (-w).exp().ln_1p()
    }
}
