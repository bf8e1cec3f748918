//! Projective systems: multisets of points of PG(k-1, q).
//!
//! A codeword `vG` has weight `n - Char(H)` where `H` is the hyperplane
//! with dual vector `v`, so the whole weight distribution can be read off
//! the hyperplane characters without touching codewords.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::geometry::{GeometrySpec, Hyperplane, Point};
use crate::lincode::{rank_of_rows, GeneratorMatrix};

/// Number of nonzero codewords of each weight.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct WeightSpectrum {
    n: u64,
    counts: BTreeMap<u64, u64>,
}

impl WeightSpectrum {
    /// Zero counts are dropped.
    pub fn from_counts(n: u64, mut counts: BTreeMap<u64, u64>) -> Self {
        counts.retain(|_, c| *c > 0);
        debug_assert!(counts.keys().all(|&w| w >= 1 && w <= n));
        WeightSpectrum { n, counts }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    /// Distinct nonzero weights, ascending.
    pub fn weight_set(&self) -> Vec<u64> {
        self.counts.keys().copied().collect()
    }

    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn contains(&self, w: u64) -> bool {
        self.counts.contains_key(&w)
    }

    /// Total number of nonzero codewords.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

/// A multiset of points given by its multiplicity vector over the
/// canonical point order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectiveSystem {
    geom: Arc<GeometrySpec>,
    mult: Vec<u64>,
    n: u64,
}

impl ProjectiveSystem {
    pub fn new(geom: Arc<GeometrySpec>, mult: Vec<u64>) -> Result<Self> {
        if mult.len() != geom.num_points() {
            return Err(Error::InvalidParameters(format!(
                "expected {} multiplicities, got {}",
                geom.num_points(),
                mult.len()
            )));
        }
        let n: u64 = mult.iter().sum();
        if n == 0 {
            return Err(Error::InvalidParameters("projective system is empty".into()));
        }
        Ok(ProjectiveSystem { geom, mult, n })
    }

    /// Builds a system from `(point, multiplicity)` pairs; repeated points accumulate.
    pub fn from_points(geom: Arc<GeometrySpec>, points: &[(Point, u64)]) -> Result<Self> {
        let mut mult = vec![0; geom.num_points()];
        for &(p, m) in points {
            *mult.get_mut(p.0).ok_or(Error::Mismatch)? += m;
        }
        Self::new(geom, mult)
    }

    pub fn geometry(&self) -> &Arc<GeometrySpec> {
        &self.geom
    }

    pub fn multiplicities(&self) -> &[u64] {
        &self.mult
    }

    pub fn multiplicity(&self, p: Point) -> u64 {
        self.mult[p.0]
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn k(&self) -> usize {
        self.geom.k()
    }

    pub fn q(&self) -> u64 {
        self.geom.q()
    }

    pub fn support(&self) -> impl Iterator<Item = Point> + '_ {
        self.mult.iter().enumerate().filter(|(_, &m)| m > 0).map(|(i, _)| Point(i))
    }

    /// Total multiplicity of a point set; repeated points count once.
    pub fn char_of(&self, points: &[Point]) -> u64 {
        let set: BTreeSet<Point> = points.iter().copied().collect();
        set.into_iter().map(|p| self.mult[p.0]).sum()
    }

    pub fn hyperplane_char(&self, h: Hyperplane) -> u64 {
        self.geom.hyperplane_points(h).iter().map(|&p| self.mult[p as usize]).sum()
    }

    /// `Char(H)` for every hyperplane in canonical order.
    pub fn hyperplane_characters(&self) -> Vec<u64> {
        self.geom.hyperplanes().map(|h| self.hyperplane_char(h)).collect()
    }

    /// Dimension of the span of the support.
    pub fn effective_dimension(&self) -> usize {
        let rows: Vec<Vec<FieldElement>> = self.support().map(|p| self.geom.coords(p).to_vec()).collect();
        rank_of_rows(self.geom.field(), rows)
    }

    /// No hyperplane holds the whole support.
    pub fn is_spanning(&self) -> bool {
        self.geom.hyperplanes().all(|h| self.hyperplane_char(h) < self.n)
    }

    fn require_spanning(&self) -> Result<()> {
        if self.is_spanning() {
            Ok(())
        } else {
            Err(Error::NotSpanning)
        }
    }

    /// `{n - Char(H) : Char(H) < n}`, defined for any system.
    pub fn nonzero_weight_set(&self) -> BTreeSet<u64> {
        self.hyperplane_characters().into_iter().filter(|&c| c < self.n).map(|c| self.n - c).collect()
    }

    /// Weight distribution of the code spanned by the columns, which has
    /// dimension [`Self::effective_dimension`]. Each hyperplane stands for
    /// `q - 1` messages and each nonzero codeword of a rank-`r` code is
    /// hit by `q^(k-r)` messages.
    pub fn effective_spectrum(&self) -> WeightSpectrum {
        let q = self.q();
        let divisor = q.pow((self.k() - self.effective_dimension()) as u32);
        let mut counts = BTreeMap::new();
        for c in self.hyperplane_characters() {
            if c < self.n {
                *counts.entry(self.n - c).or_insert(0) += q - 1;
            }
        }
        for v in counts.values_mut() {
            debug_assert_eq!(*v % divisor, 0);
            *v /= divisor;
        }
        WeightSpectrum::from_counts(self.n, counts)
    }

    /// Weight spectrum from hyperplane characters; the system must span.
    pub fn spectrum_via_hyperplanes(&self) -> Result<WeightSpectrum> {
        self.require_spanning()?;
        Ok(self.effective_spectrum())
    }

    /// `n - max_H Char(H)`.
    pub fn min_distance(&self) -> Result<u64> {
        self.require_spanning()?;
        let max = self.hyperplane_characters().into_iter().max().unwrap_or(0);
        Ok(self.n - max)
    }

    /// Columns are the support points repeated by multiplicity, in
    /// canonical order. No spanning check.
    pub fn column_matrix(&self) -> GeneratorMatrix {
        let k = self.k();
        let mut rows = vec![Vec::with_capacity(self.n as usize); k];
        for p in self.support() {
            let coords = self.geom.coords(p);
            for _ in 0..self.mult[p.0] {
                for (row, &c) in rows.iter_mut().zip(coords) {
                    row.push(c);
                }
            }
        }
        GeneratorMatrix::new(self.geom.field().clone(), rows).expect("columns are well formed")
    }

    pub fn to_generator_matrix(&self) -> Result<GeneratorMatrix> {
        self.require_spanning()?;
        Ok(self.column_matrix())
    }

    /// Normalizes each column to its point. `g` must have no zero column
    /// and full row rank.
    pub fn from_generator_matrix(g: &GeneratorMatrix) -> Result<Self> {
        let geom = GeometrySpec::build(g.field().clone(), g.k())?;
        Self::from_generator_matrix_in(geom, g)
    }

    pub fn from_generator_matrix_in(geom: Arc<GeometrySpec>, g: &GeneratorMatrix) -> Result<Self> {
        if geom.k() != g.k() || geom.field() != g.field() {
            return Err(Error::Mismatch);
        }
        g.validate()?;
        let mut mult = vec![0; geom.num_points()];
        for j in 0..g.n() {
            let p = geom.point_of(&g.column(j)).ok_or(Error::ZeroColumn(j))?;
            mult[p.0] += 1;
        }
        Self::new(geom, mult)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lincode::spectrum_via_codewords;

    fn sys(q: u64, k: usize, mult: &[u64]) -> ProjectiveSystem {
        ProjectiveSystem::new(GeometrySpec::with_order(q, k).unwrap(), mult.to_vec()).unwrap()
    }

    fn fe(v: &[u16]) -> Vec<FieldElement> {
        v.iter().map(|&x| FieldElement(x)).collect()
    }

    #[test]
    fn char_of_examples() {
        let s = sys(2, 2, &[0, 1, 2]);
        assert_eq!(s.char_of(&[]), 0);
        assert_eq!(s.char_of(&[Point(0), Point(1), Point(2)]), 3);
        assert_eq!(s.char_of(&[Point(1), Point(2)]), 3);
        assert_eq!(s.char_of(&[Point(1), Point(1)]), 1);
    }

    #[test]
    fn spectrum_pg12() {
        let s = sys(2, 2, &[0, 1, 2]);
        let spec = s.spectrum_via_hyperplanes().unwrap();
        assert_eq!(spec.weight_set(), vec![1, 2, 3]);
        assert_eq!(spec.counts(), &BTreeMap::from([(1, 1), (2, 1), (3, 1)]));
        assert_eq!(s.min_distance(), Ok(1));
    }

    #[test]
    fn simplex_system() {
        let s = sys(2, 3, &[1; 7]);
        let spec = s.spectrum_via_hyperplanes().unwrap();
        assert_eq!(spec.counts(), &BTreeMap::from([(4, 7)]));
        assert_eq!(s.min_distance(), Ok(4));
    }

    #[test]
    fn full_weight_iff_a_hyperplane_misses_support() {
        for mult in [[1, 1, 0, 0, 0, 0, 1], [1, 1, 1, 1, 1, 1, 1], [0, 2, 0, 1, 3, 0, 0]] {
            let s = sys(2, 3, &mult);
            let misses = s.hyperplane_characters().contains(&0);
            assert_eq!(s.spectrum_via_hyperplanes().unwrap().contains(s.n()), misses);
        }
    }

    #[test]
    fn two_point_line_distance() {
        // PG(1,5): mass a on point 0 and n - a on point 1
        for (a, n) in [(1u64, 5u64), (2, 4), (3, 7)] {
            let mut mult = vec![0; 6];
            mult[0] = a;
            mult[1] = n - a;
            assert_eq!(sys(5, 2, &mult).min_distance(), Ok(a));
        }
    }

    #[test]
    fn non_spanning_is_an_error() {
        let s = sys(2, 3, &[1, 1, 1, 0, 0, 0, 0]);
        assert!(!s.is_spanning());
        assert_eq!(s.spectrum_via_hyperplanes(), Err(Error::NotSpanning));
        assert_eq!(s.to_generator_matrix().unwrap_err(), Error::NotSpanning);
        assert_eq!(s.effective_dimension(), 2);
    }

    #[test]
    fn generator_matrix_examples() {
        let s = sys(2, 2, &[0, 1, 2]);
        let g = s.to_generator_matrix().unwrap();
        assert_eq!(g.rows(), vec![fe(&[1, 1, 1]), fe(&[0, 1, 1])]);
        assert_eq!(ProjectiveSystem::from_generator_matrix(&g).unwrap(), s);

        let geom = GeometrySpec::with_order(2, 3).unwrap();
        let frame = geom.frame_points(3).unwrap();
        let s = ProjectiveSystem::from_points(geom, &frame.iter().map(|&p| (p, 1)).collect::<Vec<_>>()).unwrap();
        // canonical order lists e3, e2, e1
        assert_eq!(s.to_generator_matrix().unwrap().rows(), vec![fe(&[0, 0, 1]), fe(&[0, 1, 0]), fe(&[1, 0, 0])]);
    }

    #[test]
    fn from_generator_matrix_errors_and_scaling() {
        let f = Arc::new(crate::field::FieldSpec::with_order(2).unwrap());
        let g = GeneratorMatrix::from_indices(f, &[vec![1, 0, 1], vec![0, 0, 1]]).unwrap();
        assert_eq!(ProjectiveSystem::from_generator_matrix(&g), Err(Error::ZeroColumn(1)));

        let f5 = Arc::new(crate::field::FieldSpec::with_order(5).unwrap());
        let g = GeneratorMatrix::from_indices(f5.clone(), &[vec![2, 1], vec![4, 0]]).unwrap();
        let s = ProjectiveSystem::from_generator_matrix(&g).unwrap();
        let p = s.geometry().point_of(&fe(&[1, 2])).unwrap();
        assert_eq!(s.multiplicity(p), 1);
        let rank1 = GeneratorMatrix::from_indices(f5, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert!(matches!(ProjectiveSystem::from_generator_matrix(&rank1), Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn both_routes_agree_on_examples() {
        for (q, k, mult) in [(2u64, 2usize, vec![0u64, 1, 2]), (2, 3, vec![1; 7]), (3, 2, vec![1, 0, 2, 3])] {
            let s = sys(q, k, &mult);
            let a = s.spectrum_via_hyperplanes().unwrap();
            let b = spectrum_via_codewords(&s.to_generator_matrix().unwrap()).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn effective_spectrum_of_degenerate_system() {
        // mass on e1, e2 only: the [3, 2] code 1 2
        let geom = GeometrySpec::with_order(3, 3).unwrap();
        let frame = geom.frame_points(2).unwrap();
        let s = ProjectiveSystem::from_points(geom, &[(frame[0], 1), (frame[1], 2)]).unwrap();
        let spec = s.effective_spectrum();
        let direct = crate::lincode::row_space_spectrum(&s.column_matrix(), 1000).unwrap();
        assert_eq!(spec, direct);
        assert_eq!(spec.total(), 8);
        assert_eq!(s.nonzero_weight_set(), BTreeSet::from([1, 2, 3]));
    }
}
