//! Code-side computations by direct codeword enumeration.
//!
//! These routines never look at the geometry; they are the independent
//! check on the hyperplane route in [`crate::projsys`].

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::projsys::WeightSpectrum;

/// Default cap on `q^k` for message enumeration.
pub const DEFAULT_CODEWORD_BUDGET: u64 = 10_000_000;

/// Row rank over GF(q) by Gaussian elimination.
pub fn rank_of_rows(field: &FieldSpec, mut rows: Vec<Vec<FieldElement>>) -> usize {
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = field.inv(rows[rank][col]).expect("pivot is nonzero");
        for x in &mut rows[rank][col..] {
            *x = field.mul(*x, inv);
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col];
            for (x, &p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x = field.sub(*x, field.mul(factor, p));
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// A `k x n` matrix over GF(q), stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorMatrix {
    field: Arc<FieldSpec>,
    k: usize,
    n: usize,
    entries: Vec<FieldElement>,
}

impl GeneratorMatrix {
    /// Checks shape and element range only; rank and zero columns are
    /// checked by [`GeneratorMatrix::validate`] and the spectrum routines.
    pub fn new(field: Arc<FieldSpec>, rows: Vec<Vec<FieldElement>>) -> Result<Self> {
        let k = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if k == 0 || n == 0 {
            return Err(Error::InvalidParameters("generator matrix must be non-empty".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameters("ragged generator matrix".into()));
        }
        if rows.iter().flatten().any(|e| e.index() >= field.size()) {
            return Err(Error::InvalidParameters(format!("entry outside GF({})", field.order())));
        }
        Ok(GeneratorMatrix { field, k, n, entries: rows.concat() })
    }

    pub fn from_indices(field: Arc<FieldSpec>, rows: &[Vec<u64>]) -> Result<Self> {
        let converted = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.element(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(field, converted)
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> FieldElement {
        self.entries[row * self.n + col]
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<FieldElement>> {
        (0..self.k).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<FieldElement> {
        (0..self.k).map(|i| self.get(i, j)).collect()
    }

    pub fn rank(&self) -> usize {
        rank_of_rows(&self.field, self.rows())
    }

    pub fn zero_column(&self) -> Option<usize> {
        (0..self.n).find(|&j| (0..self.k).all(|i| self.get(i, j).is_zero()))
    }

    /// Non-degenerate and of full row rank.
    pub fn validate(&self) -> Result<()> {
        if let Some(j) = self.zero_column() {
            return Err(Error::ZeroColumn(j));
        }
        let rank = self.rank();
        if rank < self.k {
            return Err(Error::RankDeficient { rank, rows: self.k });
        }
        Ok(())
    }

    /// The codeword `vG`.
    pub fn encode(&self, message: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(message.len(), self.k);
        let f = &self.field;
        (0..self.n)
            .map(|j| {
                message.iter().enumerate().fold(FieldElement::ZERO, |acc, (i, &v)| f.add(acc, f.mul(v, self.get(i, j))))
            })
            .collect()
    }
}

pub fn rank(g: &GeneratorMatrix) -> usize {
    g.rank()
}

fn message_budget(g: &GeneratorMatrix, budget: u64) -> Result<u64> {
    let q = g.field.order();
    match q.checked_pow(g.k as u32) {
        Some(total) if total <= budget => Ok(total),
        _ => Err(Error::BudgetExceeded { required: (q as u128).saturating_pow(g.k as u32), budget: budget as u128 }),
    }
}

/// Weight distribution of the row space of `g`, whatever its rank.
///
/// All `q^k` messages are enumerated; each nonzero codeword of a rank-`r`
/// row space is hit by exactly `q^(k-r)` messages, so the raw tally is
/// divided by that factor.
pub fn row_space_spectrum(g: &GeneratorMatrix, budget: u64) -> Result<WeightSpectrum> {
    message_budget(g, budget)?;
    let f = &g.field;
    let q = f.size();
    let n = g.n;
    // scaled[i][s] = s * row_i
    let scaled: Vec<Vec<Vec<FieldElement>>> = (0..g.k)
        .map(|i| f.elements().map(|s| g.row(i).iter().map(|&x| f.mul(s, x)).collect()).collect())
        .collect();

    let mut tally: BTreeMap<u64, u64> = BTreeMap::new();
    let mut partial = vec![vec![FieldElement::ZERO; n]; g.k + 1];
    tally_messages(f, &scaled, &mut partial, 0, &mut tally);
    let divisor = (q as u64).pow((g.k - g.rank()) as u32);
    let counts = tally.into_iter().map(|(w, c)| (w, c / divisor)).collect();
    Ok(WeightSpectrum::from_counts(n as u64, counts))
}

// partial[d] holds the sum of the first d scaled rows; messages are
// visited in lexicographic order.
fn tally_messages(
    f: &FieldSpec,
    scaled: &[Vec<Vec<FieldElement>>],
    partial: &mut [Vec<FieldElement>],
    depth: usize,
    tally: &mut BTreeMap<u64, u64>,
) {
    if depth == scaled.len() {
        let w = partial[depth].iter().filter(|c| !c.is_zero()).count() as u64;
        if w > 0 {
            *tally.entry(w).or_insert(0) += 1;
        }
        return;
    }
    for row in &scaled[depth] {
        let (lo, hi) = partial.split_at_mut(depth + 1);
        for (out, (&a, &b)) in hi[0].iter_mut().zip(lo[depth].iter().zip(row)) {
            *out = f.add(a, b);
        }
        tally_messages(f, scaled, partial, depth + 1, tally);
    }
}

/// Weight spectrum by enumerating all `q^k - 1` nonzero messages.
pub fn spectrum_via_codewords(g: &GeneratorMatrix) -> Result<WeightSpectrum> {
    spectrum_via_codewords_with_budget(g, DEFAULT_CODEWORD_BUDGET)
}

pub fn spectrum_via_codewords_with_budget(g: &GeneratorMatrix, budget: u64) -> Result<WeightSpectrum> {
    let rank = g.rank();
    if rank < g.k {
        return Err(Error::RankDeficient { rank, rows: g.k });
    }
    row_space_spectrum(g, budget)
}
