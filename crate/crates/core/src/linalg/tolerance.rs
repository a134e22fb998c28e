use num_complex::Complex64;

/// Mixed absolute/relative comparison: `|x - y| <= abs + rel * max(|x|, |y|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel }
    }

    pub const fn absolute(abs: f64) -> Self {
        Self { abs, rel: 0.0 }
    }

    pub fn close(&self, x: f64, y: f64) -> bool {
        (x - y).abs() <= self.abs + self.rel * x.abs().max(y.abs())
    }

    pub fn close_c(&self, x: Complex64, y: Complex64) -> bool {
        (x - y).norm() <= self.abs + self.rel * x.norm().max(y.norm())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::new(1e-10, 1e-10)
    }
}
