use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Occupation-number basis of `mode_count` modes holding at most
/// `max_total_photons` photons in total.
///
/// States are ordered by total photon number, then lexicographically
/// (ascending) within each total. For three modes and a cap of one the order
/// is `|000>, |001>, |010>, |100>`.
#[derive(Clone)]
pub struct FockBasis {
    mode_count: usize,
    max_total_photons: usize,
    states: Vec<Vec<usize>>,
    lookup: HashMap<Vec<usize>, usize>,
}

impl FockBasis {
    pub fn new(mode_count: usize, max_total_photons: usize) -> Result<Self> {
        if mode_count == 0 {
            return Err(Error::WrongModeCount {
                expected: 1,
                got: 0,
            });
        }
        let mut states = Vec::new();
        for total in 0..=max_total_photons {
            let mut grade = Vec::new();
            compositions(mode_count, total, &mut Vec::with_capacity(mode_count), &mut grade);
            states.extend(grade);
        }
        let lookup = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Ok(Self {
            mode_count,
            max_total_photons,
            states,
            lookup,
        })
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn max_total_photons(&self) -> usize {
        self.max_total_photons
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn occupations(&self, index: usize) -> &[usize] {
        &self.states[index]
    }

    pub fn index_of(&self, occupations: &[usize]) -> Option<usize> {
        self.lookup.get(occupations).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[usize]> {
        self.states.iter().map(Vec::as_slice)
    }

    pub fn total_photons(&self, index: usize) -> usize {
        self.states[index].iter().sum()
    }

    pub(crate) fn check_mode(&self, mode: usize) -> Result<()> {
        if mode < self.mode_count {
            Ok(())
        } else {
            Err(Error::ModeOutOfRange {
                mode,
                mode_count: self.mode_count,
            })
        }
    }

    /// Index of `occupations`, validating length and truncation.
    pub fn checked_index(&self, occupations: &[usize]) -> Result<usize> {
        if occupations.len() != self.mode_count {
            return Err(Error::WrongModeCount {
                expected: self.mode_count,
                got: occupations.len(),
            });
        }
        let total: usize = occupations.iter().sum();
        if total > self.max_total_photons {
            return Err(Error::OccupationExceedsTruncation {
                total,
                cap: self.max_total_photons,
            });
        }
        Ok(self.lookup[occupations])
    }
}

impl PartialEq for FockBasis {
    fn eq(&self, other: &Self) -> bool {
        self.mode_count == other.mode_count && self.max_total_photons == other.max_total_photons
    }
}

impl Eq for FockBasis {}

impl fmt::Debug for FockBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FockBasis")
            .field("mode_count", &self.mode_count)
            .field("max_total_photons", &self.max_total_photons)
            .field("dim", &self.dim())
            .finish()
    }
}

/// All length-`modes` tuples summing to `total`, ascending lexicographic.
fn compositions(modes: usize, total: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if prefix.len() + 1 == modes {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in 0..=total {
        prefix.push(first);
        compositions(modes, total - first, prefix, out);
        prefix.pop();
    }
}

/// Formats an occupation tuple as a ket, e.g. `|100>`.
pub fn ket_label(occupations: &[usize]) -> String {
    let inner: Vec<String> = occupations.iter().map(|n| n.to_string()).collect();
    if occupations.iter().all(|&n| n < 10) {
        format!("|{}>", inner.concat())
    } else {
        format!("|{}>", inner.join(","))
    }
}
