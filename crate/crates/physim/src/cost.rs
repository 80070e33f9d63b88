//! Measurement and fabrication cost model.
//!
//! A physical quantity of magnitude `b` can be measured to accuracy `eps`
//! at time/energy cost `log2(max(1,b)) + log2(1/eps)`, the cost of a
//! binary search against reference quantities 1, 1/2, 1/4, ... Fabricating
//! a component of magnitude `b` to the same accuracy costs `b + log2(1/eps)`.
//!
//! Logs are base 2 throughout, hidden constants are fixed to 1, and the
//! `log2(1/eps)` term is clamped to 0 for `eps >= 1` so costs stay
//! nonnegative. Measurement time and energy are charged equally.

use crate::error::{Error, Result};

/// A single (time, energy) cost increment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostDelta {
    pub time: f64,
    pub energy: f64,
}

impl CostDelta {
    pub const ZERO: CostDelta = CostDelta {
        time: 0.0,
        energy: 0.0,
    };

    pub fn uniform(v: f64) -> Self {
        CostDelta { time: v, energy: v }
    }

    pub fn scaled(self, k: f64) -> Self {
        CostDelta {
            time: self.time * k,
            energy: self.energy * k,
        }
    }
}

fn accuracy_term(eps: f64) -> f64 {
    // log2(1/eps), clamped so eps >= 1 contributes nothing.
    (1.0 / eps).log2().max(0.0)
}

/// Cost of measuring a quantity of magnitude `b >= 0` to accuracy `eps > 0`.
pub fn measure_cost(b: f64, eps: f64) -> Result<CostDelta> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "measurement accuracy must be positive, got eps={eps}"
        )));
    }
    if !(b >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "measured magnitude must be nonnegative, got b={b}"
        )));
    }
    Ok(CostDelta::uniform(b.max(1.0).log2() + accuracy_term(eps)))
}

/// Cost of fabricating a component of magnitude `b >= 0` to accuracy `eps > 0`.
pub fn fabricate_cost(b: f64, eps: f64) -> Result<CostDelta> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "fabrication accuracy must be positive, got eps={eps}"
        )));
    }
    if !(b >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "fabricated magnitude must be nonnegative, got b={b}"
        )));
    }
    Ok(CostDelta::uniform(b + accuracy_term(eps)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn measure_unit_quantities() {
        // Both log terms vanish.
        assert_eq!(measure_cost(1.0, 1.0).unwrap(), CostDelta::uniform(0.0));
        // log2(1/2^-10) = 10.
        assert_eq!(
            measure_cost(1.0, 2f64.powi(-10)).unwrap(),
            CostDelta::uniform(10.0)
        );
        // log2(8) + log2(16) = 3 + 4.
        assert_eq!(
            measure_cost(8.0, 2f64.powi(-4)).unwrap(),
            CostDelta::uniform(7.0)
        );
    }

    #[test]
    fn fabricate_values() {
        assert_eq!(fabricate_cost(0.0, 1.0).unwrap(), CostDelta::uniform(0.0));
        // 1 + 6.
        assert_eq!(
            fabricate_cost(1.0, 2f64.powi(-6)).unwrap(),
            CostDelta::uniform(7.0)
        );
        // 5 + 3.
        assert_eq!(
            fabricate_cost(5.0, 2f64.powi(-3)).unwrap(),
            CostDelta::uniform(8.0)
        );
    }

    #[test]
    fn invalid_accuracy_rejected() {
        assert!(measure_cost(1.0, 0.0).is_err());
        assert!(measure_cost(1.0, -0.5).is_err());
        assert!(fabricate_cost(1.0, 0.0).is_err());
        assert!(measure_cost(-1.0, 0.5).is_err());
    }

    #[test]
    fn measure_exact_log_for_small_eps() {
        // measure_cost(1, eps) = log2(1/eps) exactly for eps <= 1.
        for k in 0..50 {
            let eps = 2f64.powi(-k);
            let c = measure_cost(1.0, eps).unwrap();
            assert_eq!(c.time, k as f64);
            assert_eq!(c.energy, k as f64);
        }
    }

    proptest! {
        // Monotone nondecreasing in b and in 1/eps.
        #[test]
        fn measure_monotone(b1 in 0.0f64..1e6, db in 0.0f64..1e6,
                            e1 in 1e-12f64..10.0, shrink in 0.01f64..1.0) {
            let lo = measure_cost(b1, e1).unwrap();
            let hi_b = measure_cost(b1 + db, e1).unwrap();
            prop_assert!(hi_b.time >= lo.time);
            let hi_e = measure_cost(b1, e1 * shrink).unwrap();
            prop_assert!(hi_e.time >= lo.time);
        }

        #[test]
        fn costs_nonnegative(b in 0.0f64..1e9, eps in 1e-12f64..1e3) {
            let m = measure_cost(b, eps).unwrap();
            prop_assert!(m.time >= 0.0 && m.energy >= 0.0);
            let f = fabricate_cost(b, eps).unwrap();
            prop_assert!(f.time >= 0.0 && f.energy >= 0.0);
        }
    }
}
