//! Compensated and log-domain accumulators.

/// Neumaier compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    #[inline]
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

    fn scale(&mut self, factor: f64) {
        self.sum *= factor;
        self.compensation *= factor;
    }
}

/// Sums positive terms given by their logarithms, keeping a running maximum
/// as the shift so nothing overflows.
#[derive(Clone, Copy, Debug)]
pub struct LogSumExp {
    shift: f64,
    scaled: CompensatedSum,
}

impl Default for LogSumExp {
    fn default() -> Self {
        Self {
            shift: f64::NEG_INFINITY,
            scaled: CompensatedSum::default(),
        }
    }
}

impl LogSumExp {
    #[inline]
    pub fn add(&mut self, log_term: f64) {
        if log_term == f64::NEG_INFINITY {
            return;
        }
        if log_term > self.shift {
            if self.shift != f64::NEG_INFINITY {
                self.scaled.scale((self.shift - log_term).exp());
            }
            self.shift = log_term;
        }
        self.scaled.add((log_term - self.shift).exp());
    }

    /// Logarithm of the accumulated sum (`-inf` when empty).
    pub fn ln(&self) -> f64 {
        if self.shift == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        self.shift + self.scaled.value().ln()
    }
}
