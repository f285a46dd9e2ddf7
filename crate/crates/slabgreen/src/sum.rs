//! Compensated summation with magnitude tracking.

/// Neumaier-compensated accumulator.
///
/// Besides the compensated total it tracks the sum of absolute values of all
/// addends, which callers use to estimate how many digits cancellation has
/// destroyed: the rounding noise of the final value scales with
/// `magnitude()` rather than with `value()`.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    total: f64,
    compensation: f64,
    magnitude: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.total + x;
        if self.total.abs() >= x.abs() {
            self.compensation += (self.total - t) + x;
        } else {
            self.compensation += (x - t) + self.total;
        }
        self.total = t;
        self.magnitude += x.abs();
    }

    pub fn value(&self) -> f64 {
        self.total + self.compensation
    }

    /// Sum of `|x|` over every addend.
    pub fn magnitude(&self) -> f64 {
        self.magnitude
    }
}
