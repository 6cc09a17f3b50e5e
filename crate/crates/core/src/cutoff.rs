//! Smooth radial cutoffs in frequency space.

/// Smooth monotone step: 0 for `t <= 0`, 1 for `t >= 1`, `C^infinity` in between.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / t).exp();
    let b = (-1.0 / (1.0 - t)).exp();
    a / (a + b)
}

/// Radial bump equal to 1 on `|xi| <= inner` and 0 on `|xi| >= outer`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialBump {
    pub inner: f64,
    pub outer: f64,
}

impl RadialBump {
    pub fn new(inner: f64, outer: f64) -> Self {
        assert!(0.0 < inner && inner < outer, "need 0 < inner < outer");
        Self { inner, outer }
    }

    pub fn eval(&self, r: f64) -> f64 {
        smooth_step((self.outer - r.abs()) / (self.outer - self.inner))
    }
}

/// Radial annulus: 0 below `rise_start`, 1 on `[rise_end, fall_start]`, 0 above `fall_end`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialAnnulus {
    pub rise_start: f64,
    pub rise_end: f64,
    pub fall_start: f64,
    pub fall_end: f64,
}

impl RadialAnnulus {
    pub fn new(rise_start: f64, rise_end: f64, fall_start: f64, fall_end: f64) -> Self {
        assert!(
            0.0 < rise_start && rise_start < rise_end && rise_end <= fall_start && fall_start < fall_end,
            "annulus break points must increase"
        );
        Self { rise_start, rise_end, fall_start, fall_end }
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self::new(self.rise_start * c, self.rise_end * c, self.fall_start * c, self.fall_end * c)
    }

    pub fn eval(&self, r: f64) -> f64 {
        let r = r.abs();
        smooth_step((r - self.rise_start) / (self.rise_end - self.rise_start))
            * smooth_step((self.fall_end - r) / (self.fall_end - self.fall_start))
    }
}

/// The low-pass cutoff and dyadic annulus generating the Littlewood-Paley blocks.
///
/// The low-pass profile is 1 on `|xi| <= 3/4` and vanishes for `|xi| >= 4/3`;
/// the annulus profile is `low(xi/2) - low(xi)`, supported in `3/4 <= |xi| <= 8/3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffProfile {
    low: RadialBump,
}

impl Default for CutoffProfile {
    fn default() -> Self {
        make_cutoff_pair()
    }
}

/// Builds the standard cutoff pair.
pub fn make_cutoff_pair() -> CutoffProfile {
    CutoffProfile { low: RadialBump::new(0.75, 4.0 / 3.0) }
}

impl CutoffProfile {
    pub fn low_pass(&self, r: f64) -> f64 {
        self.low.eval(r)
    }

    pub fn annulus(&self, r: f64) -> f64 {
        self.low.eval(0.5 * r) - self.low.eval(r)
    }

    /// Inner radius of the annulus support.
    pub fn annulus_inner(&self) -> f64 {
        self.low.inner
    }

    /// Outer radius of the annulus support.
    pub fn annulus_outer(&self) -> f64 {
        2.0 * self.low.outer
    }

    /// Multiplier of block `j >= -1` at radius `r`.
    pub fn block(&self, j: i32, r: f64) -> f64 {
        if j < 0 {
            self.low_pass(r)
        } else {
            self.annulus(r * 0.5f64.powi(j))
        }
    }

    /// Sum of blocks `-1..=j_max` at radius `r`.
    pub fn partial_sum(&self, j_max: i32, r: f64) -> f64 {
        (-1..=j_max).map(|j| self.block(j, r)).sum()
    }

    /// Tabulates the two profiles on `samples` equispaced radii in `[0, r_max]`.
    pub fn tabulate(&self, r_max: f64, samples: usize) -> Vec<(f64, f64, f64)> {
        let last = samples.saturating_sub(1).max(1) as f64;
        (0..samples)
            .map(|i| {
                let r = r_max * i as f64 / last;
                (r, self.low_pass(r), self.annulus(r))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_step_symmetry() {
        for i in 0..=100 {
            let t = i as f64 / 100.0;
            assert!((smooth_step(t) + smooth_step(1.0 - t) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn annulus_support() {
        let c = make_cutoff_pair();
        assert_eq!(c.annulus(0.74), 0.0);
        assert_eq!(c.annulus(2.7), 0.0);
        assert_eq!(c.annulus(1.4), 1.0);
        assert_eq!(c.low_pass(0.75), 1.0);
        assert_eq!(c.low_pass(4.0 / 3.0), 0.0);
    }

    #[test]
    fn partition_of_unity_at_100() {
        let c = make_cutoff_pair();
        assert!((c.partial_sum(20, 100.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bump_and_annulus_profiles() {
        let b = RadialBump::new(0.25, 0.5);
        assert_eq!(b.eval(0.2), 1.0);
        assert_eq!(b.eval(-0.5), 0.0);
        let a = RadialAnnulus::new(0.375, 0.5, 0.625, 0.75);
        assert_eq!(a.eval(0.55), 1.0);
        assert_eq!(a.eval(0.8), 0.0);
        assert_eq!(a.eval(0.3), 0.0);
        assert!((a.eval(0.4375) - 0.5).abs() < 1e-15);
    }
}
