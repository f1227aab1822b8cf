//! Bounded archive of mutually non-dominated solutions.

use crate::objectives::{dominates, ObjectiveVector};

/// Default capacity of the solver archives.
pub const DEFAULT_ARCHIVE_CAP: usize = 100;

/// Keeps a mutually non-dominated set, thinned by nearest-neighbour crowding
/// once it grows past `cap`.
///
/// Entries with an objective vector identical to a member's are not added.
#[derive(Debug, Clone)]
pub struct ParetoArchive<T> {
    cap: usize,
    entries: Vec<(ObjectiveVector, T)>,
}

impl<T> ParetoArchive<T> {
    pub fn new(cap: usize) -> Self {
        assert!(cap > 0, "archive capacity must be positive");
        Self {
            cap,
            entries: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(ObjectiveVector, T)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(ObjectiveVector, T)> {
        self.entries
    }

    /// Offers a candidate; `make` is only called if the candidate is kept.
    /// Returns whether it entered the archive.
    pub fn offer(&mut self, obj: &ObjectiveVector, make: impl FnOnce() -> T) -> bool {
        if self.entries.iter().any(|(o, _)| o == obj || dominates(o, obj)) {
            return false;
        }
        self.entries.retain(|(o, _)| !dominates(obj, o));
        self.entries.push((*obj, make()));
        while self.entries.len() > self.cap {
            let victim = self.most_crowded();
            self.entries.remove(victim);
        }
        true
    }

    /// Index of the member with the smallest nearest-neighbour distance in
    /// range-normalized objective space. Ties go to the entry that is worse on
    /// load balance, then the later one.
    fn most_crowded(&self) -> usize {
        let coords: Vec<[f64; 3]> = self
            .entries
            .iter()
            .map(|(o, _)| [o.utilization, o.load_balance, o.active_fraction])
            .collect();
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for c in &coords {
            for k in 0..3 {
                lo[k] = lo[k].min(c[k]);
                hi[k] = hi[k].max(c[k]);
            }
        }
        let span: Vec<f64> = (0..3).map(|k| hi[k] - lo[k]).collect();
        let dist = |a: &[f64; 3], b: &[f64; 3]| -> f64 {
            (0..3)
                .filter(|&k| span[k] > 0.0)
                .map(|k| ((a[k] - b[k]) / span[k]).powi(2))
                .sum::<f64>()
        };
        let mut victim = 0;
        let mut victim_key = (f64::INFINITY, f64::NEG_INFINITY);
        for (i, a) in coords.iter().enumerate() {
            let nn = coords
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, b)| dist(a, b))
                .fold(f64::INFINITY, f64::min);
            let lb = a[1];
            if nn < victim_key.0 || (nn == victim_key.0 && lb >= victim_key.1) {
                victim = i;
                victim_key = (nn, lb);
            }
        }
        victim
    }
}
