//! Smooth radial cutoff used to split the beta integral into a singular
//! near part and a smooth far part.

/// Cutoff `χ(d)`: identically 1 for `d ≤ radius/2`, identically 0 for
/// `d ≥ radius`, C^∞ and monotone in between.
///
/// The argument is the ambient distance `‖v − u‖`. On the local graph this
/// equals `r·(1 + f²/r²)^{1/2}` for tangent-plane radius `r`, a smooth
/// function of the tangent-plane point, so `χ` composed with it is a
/// legitimate smooth bump on the tangent plane as well.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffSpec {
    pub radius: f64,
}

fn glue(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

impl CutoffSpec {
    pub fn new(radius: f64) -> Self {
        assert!(radius.is_finite() && radius > 0.0, "cutoff radius must be positive");
        Self { radius }
    }

    pub fn weight(&self, d: f64) -> f64 {
        let half = 0.5 * self.radius;
        let d = d.abs();
        if d <= half {
            return 1.0;
        }
        if d >= self.radius {
            return 0.0;
        }
        let t = (d - half) / half;
        let (a, b) = (glue(1.0 - t), glue(t));
        a / (a + b)
    }

    /// `1 − χ(d)`, computed without cancellation where `χ` is close to 1.
    pub fn complement(&self, d: f64) -> f64 {
        let half = 0.5 * self.radius;
        let d = d.abs();
        if d <= half {
            return 0.0;
        }
        if d >= self.radius {
            return 1.0;
        }
        let t = (d - half) / half;
        let (a, b) = (glue(1.0 - t), glue(t));
        b / (a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plateau_and_support() {
        let c = CutoffSpec::new(0.2);
        assert_eq!(c.weight(0.0), 1.0);
        assert_eq!(c.weight(0.1), 1.0);
        assert_eq!(c.weight(0.2), 0.0);
        assert_eq!(c.weight(5.0), 0.0);
        assert_eq!(c.weight(-0.05), 1.0);
    }

    #[test]
    fn monotone_and_complementary() {
        let c = CutoffSpec::new(1.0);
        let mut prev = 1.0;
        for i in 0..=1000 {
            let d = 0.5 + 0.5 * i as f64 / 1000.0;
            let w = c.weight(d);
            assert!(w <= prev);
            assert!((w + c.complement(d) - 1.0).abs() < 1e-15);
            prev = w;
        }
        assert!((c.weight(0.75) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn flat_at_both_ends() {
        // every derivative vanishes at the glue points, so the profile hugs
        // its plateau values extremely closely
        let c = CutoffSpec::new(1.0);
        assert!(1.0 - c.weight(0.5 + 1e-3) < 1e-100);
        assert!(c.weight(1.0 - 1e-3) < 1e-100);
    }
}
