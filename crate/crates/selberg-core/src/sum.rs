//! Neumaier-compensated accumulation for real and complex sums.

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
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

#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: KahanSum,
    im: KahanSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

pub fn sum_complex<I: IntoIterator<Item = Complex64>>(terms: I) -> Complex64 {
    let mut acc = ComplexSum::new();
    for t in terms {
        acc.add(t);
    }
    acc.value()
}

pub fn sum_real<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut acc = KahanSum::new();
    for t in terms {
        acc.add(t);
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_small_terms_lost_by_naive_summation() {
        let terms = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(sum_real(terms), 2.0);
    }

    #[test]
    fn complex_sum_is_componentwise() {
        let z = sum_complex([
            Complex64::new(1.0, 1e-20),
            Complex64::new(1e16, 0.0),
            Complex64::new(-1e16, 0.0),
        ]);
        assert_eq!(z, Complex64::new(1.0, 1e-20));
    }
}
