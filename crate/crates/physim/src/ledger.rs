//! Itemized accounting of model time and model energy.
//!
//! Every simulator in this crate charges its costs to a [`CostLedger`]:
//! an append-only list of labelled `(time, energy)` entries whose totals
//! are maintained incrementally. Quantities are dimensionless model units.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One labelled charge against a ledger.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub label: String,
    pub time: f64,
    pub energy: f64,
}

/// Ordered list of cost entries plus running totals.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CostLedger {
    entries: Vec<LedgerEntry>,
    total_time: f64,
    total_energy: f64,
}

impl CostLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Append an entry. Time and energy must be nonnegative.
    pub fn add(&mut self, label: impl Into<String>, time: f64, energy: f64) -> Result<()> {
        if !(time >= 0.0) || !(energy >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "ledger entries must be nonnegative, got time={time}, energy={energy}"
            )));
        }
        self.entries.push(LedgerEntry {
            label: label.into(),
            time,
            energy,
        });
        self.total_time += time;
        self.total_energy += energy;
        Ok(())
    }

    /// Append another ledger's entries; totals are the componentwise sums.
    pub fn merge(&mut self, other: CostLedger) {
        self.total_time += other.total_time;
        self.total_energy += other.total_energy;
        self.entries.extend(other.entries);
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    pub fn total_time(&self) -> f64 {
        self.total_time
    }

    pub fn total_energy(&self) -> f64 {
        self.total_energy
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of entries for labels starting with `prefix`. Handy for reports.
    pub fn subtotal(&self, prefix: &str) -> (f64, f64) {
        self.entries
            .iter()
            .filter(|e| e.label.starts_with(prefix))
            .fold((0.0, 0.0), |(t, en), e| (t + e.time, en + e.energy))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_add_zero_entry() {
        let mut l = CostLedger::new();
        l.add("x", 0.0, 0.0).unwrap();
        assert_eq!((l.total_time(), l.total_energy()), (0.0, 0.0));
    }

    #[test]
    fn single_entry_totals() {
        let mut l = CostLedger::new();
        l.add("lift", 2.0, 3.0).unwrap();
        assert_eq!((l.total_time(), l.total_energy()), (2.0, 3.0));
    }

    #[test]
    fn two_adds_accumulate() {
        let mut l = CostLedger::new();
        l.add("a", 1.0, 1.0).unwrap();
        l.add("b", 2.0, 4.0).unwrap();
        assert_eq!((l.total_time(), l.total_energy()), (3.0, 5.0));
    }

    #[test]
    fn negative_entry_rejected() {
        let mut l = CostLedger::new();
        assert!(l.add("bad", -1.0, 0.0).is_err());
        assert!(l.add("bad", 0.0, -1.0).is_err());
        assert!(l.add("bad", f64::NAN, 0.0).is_err());
    }

    #[test]
    fn merge_empty_is_identity() {
        let mut l = CostLedger::new();
        l.add("a", 1.5, 2.5).unwrap();
        let before = l.clone();
        l.merge(CostLedger::new());
        assert_eq!(l, before);

        let mut empty = CostLedger::new();
        empty.merge(CostLedger::new());
        assert!(empty.is_empty());
    }

    proptest! {
        // Ledger additivity: totals of a merge are the sums of the totals.
        #[test]
        fn merge_totals_additive(
            xs in proptest::collection::vec((0.0f64..1e6, 0.0f64..1e6), 0..20),
            ys in proptest::collection::vec((0.0f64..1e6, 0.0f64..1e6), 0..20),
        ) {
            let mut a = CostLedger::new();
            for (t, e) in &xs {
                a.add("x", *t, *e).unwrap();
            }
            let mut b = CostLedger::new();
            for (t, e) in &ys {
                b.add("y", *t, *e).unwrap();
            }
            let (ta, ea) = (a.total_time(), a.total_energy());
            let (tb, eb) = (b.total_time(), b.total_energy());
            a.merge(b);
            prop_assert_eq!(a.total_time(), ta + tb);
            prop_assert_eq!(a.total_energy(), ea + eb);
            prop_assert_eq!(a.entries().len(), xs.len() + ys.len());
        }

        // Totals always equal the recomputed sum over entries.
        #[test]
        fn totals_match_entry_sums(
            xs in proptest::collection::vec((0.0f64..1e3, 0.0f64..1e3), 0..50),
        ) {
            let mut l = CostLedger::new();
            for (t, e) in &xs {
                l.add("x", *t, *e).unwrap();
            }
            let t_sum: f64 = l.entries().iter().map(|e| e.time).sum();
            let e_sum: f64 = l.entries().iter().map(|e| e.energy).sum();
            prop_assert!((l.total_time() - t_sum).abs() <= 1e-9 * t_sum.max(1.0));
            prop_assert!((l.total_energy() - e_sum).abs() <= 1e-9 * e_sum.max(1.0));
        }
    }
}
