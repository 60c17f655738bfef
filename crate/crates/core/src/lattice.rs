/// Evenly spaced points on `[-1, 1]` with a given spacing.
///
/// When `2 / spacing` is within a relative 1e-5 of an integer `n` the points
/// are computed as `(2i - n) / n`, so spacings like 1/3 (or a truncated
/// `0.333333`) land on the nearest representable thirds instead of
/// accumulating `i * spacing` rounding error.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Lattice {
    spacing: f64,
    steps: usize,
    exact: bool,
}

impl Lattice {
    pub(crate) fn new(spacing: f64) -> Self {
        assert!(spacing > 0.0 && spacing <= 2.0, "spacing {spacing} outside (0, 2]");
        let ratio = 2.0 / spacing;
        let rounded = ratio.round();
        let exact = rounded >= 1.0 && (ratio - rounded).abs() <= 1e-5 * rounded;
        let steps = if exact { rounded } else { ratio.floor() } as usize;
        Self {
            spacing,
            steps,
            exact,
        }
    }

    /// Number of points including both ends (`-1` and the last point `<= 1`).
    pub(crate) fn len(&self) -> usize {
        self.steps + 1
    }

    pub(crate) fn point(&self, i: usize) -> f64 {
        debug_assert!(i <= self.steps);
        if self.exact {
            let n = self.steps as f64;
            (2.0 * i as f64 - n) / n
        } else {
            -1.0 + i as f64 * self.spacing
        }
    }

    pub(crate) fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|i| self.point(i))
    }
}
