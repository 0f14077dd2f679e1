use crate::error::{Error, Result};
use crate::exact::rat::Rat;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

type Row = BTreeMap<usize, Rat>;

/// Exact sparse system `Σ a_c x_c = r`, reduced incrementally to echelon form.
#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    pub unknowns: usize,
    /// Leading column → (row normalized to leading coefficient 1, right-hand side).
    pivots: BTreeMap<usize, (Row, Rat)>,
    /// Rows that reduced to `0 = r` with `r ≠ 0`.
    pub inconsistent: usize,
    pub rows_seen: usize,
}

impl LinearSystem {
    pub fn new(unknowns: usize) -> Self {
        LinearSystem { unknowns, ..Default::default() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.unknowns
    }

    pub fn add_row(&mut self, mut row: Row, mut rhs: Rat) {
        self.rows_seen += 1;
        row.retain(|_, v| !v.is_zero());
        let mut cursor = 0;
        loop {
            let next = row
                .range(cursor..)
                .find(|(c, _)| self.pivots.contains_key(c))
                .map(|(c, v)| (*c, v.clone()));
            let Some((c, f)) = next else { break };
            let (prow, prhs) = &self.pivots[&c];
            for (pc, pv) in prow {
                let e = row.entry(*pc).or_insert_with(Rat::zero);
                *e -= &f * pv;
                if e.is_zero() {
                    row.remove(pc);
                }
            }
            rhs -= &f * prhs;
            cursor = c + 1;
        }
        match row.iter().next().map(|(c, v)| (*c, v.clone())) {
            None => {
                if !rhs.is_zero() {
                    self.inconsistent += 1;
                }
            }
            Some((lead, lv)) => {
                let inv = Rat::one() / lv;
                for v in row.values_mut() {
                    *v *= &inv;
                }
                self.pivots.insert(lead, (row, rhs * inv));
            }
        }
    }

    /// Columns without a pivot.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.unknowns).filter(|c| !self.pivots.contains_key(c)).collect()
    }

    /// Unique solution, or `SingularSystem` naming the undetermined columns.
    pub fn solve(&self) -> Result<Vec<Rat>> {
        if !self.is_full_rank() {
            return Err(Error::SingularSystem(format!(
                "rank {} < {} unknowns; free columns {:?}",
                self.rank(),
                self.unknowns,
                self.free_columns()
            )));
        }
        let mut x = vec![Rat::zero(); self.unknowns];
        for (&lead, (row, rhs)) in self.pivots.iter().rev() {
            let mut v = rhs.clone();
            for (c, a) in row.range(lead + 1..) {
                v -= a * &x[*c];
            }
            x[lead] = v;
        }
        Ok(x)
    }
}
