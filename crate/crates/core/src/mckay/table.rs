use super::potential::Potential;
use crate::error::Result;
use crate::exact::rat::{fmt_rat, Rat};
use crate::group::Family;
use crate::par::{self, Exec};
use serde::Serialize;
use std::collections::BTreeMap;

/// Insertion counts over the non-unit classes, canonical class order.
pub type CorrelatorKey = Vec<u32>;

/// All count vectors of total `m` over `k` slots, lexicographically descending.
pub fn keys_of_length(k: usize, m: u32) -> Vec<CorrelatorKey> {
    fn go(k: usize, m: u32, cur: &mut Vec<u32>, out: &mut Vec<CorrelatorKey>) {
        if cur.len() + 1 == k {
            cur.push(m);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for first in (0..=m).rev() {
            cur.push(first);
            go(k, m - first, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k == 0 {
        if m == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(k, m, &mut Vec::new(), &mut out);
    out
}

/// Keys of length `3..=max_len`.
pub fn keys_up_to(k: usize, max_len: u32) -> Vec<CorrelatorKey> {
    (3..=max_len).flat_map(|m| keys_of_length(k, m)).collect()
}

/// λ-stripped genus-0 correlators keyed by insertion counts.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelatorTable {
    pub family: Family,
    pub n: u32,
    pub class_names: Vec<String>,
    #[serde(serialize_with = "ser_entries")]
    pub entries: BTreeMap<CorrelatorKey, Rat>,
}

fn ser_entries<S: serde::Serializer>(e: &BTreeMap<CorrelatorKey, Rat>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    #[derive(Serialize)]
    struct Row<'a> {
        key: &'a [u32],
        value: String,
    }
    let mut seq = s.serialize_seq(Some(e.len()))?;
    for (k, v) in e {
        seq.serialize_element(&Row { key: k, value: fmt_rat(v) })?;
    }
    seq.end()
}

impl CorrelatorTable {
    pub fn get(&self, key: &[u32]) -> Option<&Rat> {
        self.entries.get(key)
    }

    /// Evaluates `keys` from the potential.
    pub fn from_potential(p: &Potential, keys: &[CorrelatorKey], exec: Exec) -> Result<CorrelatorTable> {
        let vals = par::map(exec, keys, |k| p.correlator(k));
        let mut entries = BTreeMap::new();
        for (k, v) in keys.iter().zip(vals) {
            entries.insert(k.clone(), v?);
        }
        Ok(CorrelatorTable {
            family: p.group.family,
            n: p.group.n,
            class_names: p.group.classes[1..].iter().map(|c| c.name.clone()).collect(),
            entries,
        })
    }

    /// Every key of length `3..=max_len`.
    pub fn conjectural(p: &Potential, max_len: u32, exec: Exec) -> Result<CorrelatorTable> {
        let keys = keys_up_to(p.group.num_classes() - 1, max_len);
        Self::from_potential(p, &keys, exec)
    }
}
