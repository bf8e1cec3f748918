//! Points and hyperplanes of PG(k-1, q).
//!
//! Points are normalized so the leftmost nonzero coordinate is 1 and are
//! listed in lexicographic order of their coordinate tuples. Hyperplanes
//! are dual vectors normalized the same way and share the point list, so
//! hyperplane `i` has the same coordinates as point `i`. Incidence is the
//! dual dot product, which makes it symmetric in the two indices.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::lincode::rank_of_rows;

/// Upper bound on `q^k`; the geometry keeps a class lookup per vector.
pub const MAX_VECTORS: u64 = 1 << 22;

/// Number of points of PG(j, q). `theta(q, -1)` is 0 (the empty flat).
pub fn theta(q: u64, j: i64) -> u64 {
    assert!(q >= 2 && j >= -1, "theta requires q >= 2 and j >= -1");
    (0..=j).map(|i| q.pow(i as u32)).sum()
}

/// Canonical index of a point of the geometry.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(pub usize);

/// Canonical index of a hyperplane; its dual vector equals the
/// coordinates of the point with the same index.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane(pub usize);

pub struct GeometrySpec {
    field: Arc<FieldSpec>,
    k: usize,
    coords: Vec<FieldElement>,
    // vector index -> point id for every nonzero vector; u32::MAX at zero.
    class_of: Vec<u32>,
    incidence: OnceLock<Vec<u32>>,
}

impl std::fmt::Debug for GeometrySpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PG({}, {})", self.k - 1, self.field.order())
    }
}

impl PartialEq for GeometrySpec {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k && self.field == other.field
    }
}

impl Eq for GeometrySpec {}

impl GeometrySpec {
    /// Builds PG(k-1, q) for `k >= 2`.
    pub fn build(field: Arc<FieldSpec>, k: usize) -> Result<Arc<Self>> {
        if k < 2 {
            return Err(Error::DimensionTooSmall(k));
        }
        let q = field.order();
        let total = q
            .checked_pow(k as u32)
            .filter(|&t| t <= MAX_VECTORS)
            .ok_or(Error::BudgetExceeded { required: (q as u128).saturating_pow(k as u32), budget: MAX_VECTORS as u128 })?;
        let qs = q as usize;
        let num_points = theta(q, k as i64 - 1) as usize;
        let mut coords = Vec::with_capacity(num_points * k);
        let mut class_of = vec![u32::MAX; total as usize];
        let mut buf = vec![FieldElement::ZERO; k];
        for index in 1..total as usize {
            let mut rest = index;
            for slot in buf.iter_mut().rev() {
                *slot = FieldElement((rest % qs) as u16);
                rest /= qs;
            }
            let lead = buf.iter().find(|c| !c.is_zero()).copied().unwrap();
            if lead != FieldElement::ONE {
                continue;
            }
            let id = (coords.len() / k) as u32;
            coords.extend_from_slice(&buf);
            for scalar in field.elements().skip(1) {
                let idx = buf.iter().fold(0usize, |acc, &c| acc * qs + field.mul(scalar, c).index());
                class_of[idx] = id;
            }
        }
        debug_assert_eq!(coords.len(), num_points * k);
        Ok(Arc::new(GeometrySpec { field, k, coords, class_of, incidence: OnceLock::new() }))
    }

    /// Convenience constructor from a field order.
    pub fn with_order(q: u64, k: usize) -> Result<Arc<Self>> {
        Self::build(Arc::new(FieldSpec::with_order(q)?), k)
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.order()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_points(&self) -> usize {
        self.coords.len() / self.k
    }

    pub fn num_hyperplanes(&self) -> usize {
        self.num_points()
    }

    pub fn points(&self) -> impl Iterator<Item = Point> {
        (0..self.num_points()).map(Point)
    }

    pub fn hyperplanes(&self) -> impl Iterator<Item = Hyperplane> {
        (0..self.num_points()).map(Hyperplane)
    }

    pub fn coords(&self, p: Point) -> &[FieldElement] {
        &self.coords[p.0 * self.k..(p.0 + 1) * self.k]
    }

    pub fn dual_coords(&self, h: Hyperplane) -> &[FieldElement] {
        self.coords(Point(h.0))
    }

    /// The point spanned by a nonzero vector; `None` for the zero vector
    /// or a vector of the wrong length.
    pub fn point_of(&self, v: &[FieldElement]) -> Option<Point> {
        if v.len() != self.k || v.iter().any(|c| c.index() >= self.field.size()) {
            return None;
        }
        let qs = self.field.size();
        let idx = v.iter().fold(0usize, |acc, c| acc * qs + c.index());
        match self.class_of[idx] {
            u32::MAX => None,
            id => Some(Point(id as usize)),
        }
    }

    fn dot(&self, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
        a.iter().zip(b).fold(FieldElement::ZERO, |acc, (&x, &y)| self.field.add(acc, self.field.mul(x, y)))
    }

    pub fn incident(&self, p: Point, h: Hyperplane) -> bool {
        self.dot(self.coords(p), self.dual_coords(h)).is_zero()
    }

    fn incidence(&self) -> &[u32] {
        self.incidence.get_or_init(|| {
            let n = self.num_points();
            let per = self.points_per_hyperplane();
            let mut flat = Vec::with_capacity(n * per);
            for h in 0..n {
                flat.extend((0..n).filter(|&p| self.incident(Point(p), Hyperplane(h))).map(|p| p as u32));
            }
            debug_assert_eq!(flat.len(), n * per);
            flat
        })
    }

    /// θ_q(k-2), the size of every hyperplane (and of every pencil of
    /// hyperplanes through a point).
    pub fn points_per_hyperplane(&self) -> usize {
        theta(self.q(), self.k as i64 - 2) as usize
    }

    /// Point ids on hyperplane `h`, ascending.
    pub fn hyperplane_points(&self, h: Hyperplane) -> &[u32] {
        let per = self.points_per_hyperplane();
        &self.incidence()[h.0 * per..(h.0 + 1) * per]
    }

    /// Hyperplane ids through point `p`, ascending. Incidence is
    /// symmetric in the shared index, so this is the same list as the
    /// points on hyperplane `p`.
    pub fn hyperplanes_through(&self, p: Point) -> &[u32] {
        self.hyperplane_points(Hyperplane(p.0))
    }

    /// True iff every `min(k, len)` of the points are linearly independent.
    pub fn general_position(&self, points: &[Point]) -> bool {
        let size = self.k.min(points.len());
        if size == 0 {
            return true;
        }
        let mut chosen: Vec<usize> = (0..size).collect();
        loop {
            let rows: Vec<Vec<FieldElement>> = chosen.iter().map(|&i| self.coords(points[i]).to_vec()).collect();
            if rank_of_rows(&self.field, rows) < size {
                return false;
            }
            // next combination
            let mut i = size;
            while i > 0 && chosen[i - 1] == points.len() - size + i - 1 {
                i -= 1;
            }
            if i == 0 {
                return true;
            }
            chosen[i - 1] += 1;
            for j in i..size {
                chosen[j] = chosen[j - 1] + 1;
            }
        }
    }

    fn point_from(&self, v: &[FieldElement]) -> Point {
        self.point_of(v).expect("nonzero vector")
    }

    /// The first `count` points of the frame `e_1, ..., e_k, (1, ..., 1)`.
    pub fn frame_points(&self, count: usize) -> Result<Vec<Point>> {
        if count > self.k + 1 {
            return Err(Error::InvalidParameters(format!(
                "a frame of PG({}, q) has at most {} points, {count} requested",
                self.k - 1,
                self.k + 1
            )));
        }
        let mut out = Vec::with_capacity(count);
        for i in 0..count.min(self.k) {
            let mut v = vec![FieldElement::ZERO; self.k];
            v[i] = FieldElement::ONE;
            out.push(self.point_from(&v));
        }
        if count == self.k + 1 {
            out.push(self.point_from(&vec![FieldElement::ONE; self.k]));
        }
        Ok(out)
    }

    /// Normal rational curve: `(1, t, ..., t^(k-1))` for `t` in element
    /// order, then `(0, ..., 0, 1)`. Needs `q + 1 >= k`.
    pub fn normal_rational_curve(&self) -> Result<Vec<Point>> {
        if self.q() + 1 < self.k as u64 {
            return Err(Error::InvalidParameters(format!(
                "normal rational curve needs q + 1 >= k (q = {}, k = {})",
                self.q(),
                self.k
            )));
        }
        let mut out: Vec<Point> = self
            .field
            .elements()
            .map(|t| {
                let v: Vec<FieldElement> = (0..self.k as u64).map(|i| self.field.pow(t, i)).collect();
                self.point_from(&v)
            })
            .collect();
        let mut inf = vec![FieldElement::ZERO; self.k];
        inf[self.k - 1] = FieldElement::ONE;
        out.push(self.point_from(&inf));
        Ok(out)
    }

    /// Regular hyperoval of PG(2, q), q even: the conic `(1, t, t^2)`
    /// followed by `(0, 1, 0)` and the nucleus `(0, 0, 1)`.
    pub fn hyperoval(&self) -> Result<Vec<Point>> {
        if self.k != 3 || self.field.characteristic() != 2 {
            return Err(Error::InvalidParameters(format!(
                "hyperovals need k = 3 and q even (q = {}, k = {})",
                self.q(),
                self.k
            )));
        }
        let f = &self.field;
        let mut out: Vec<Point> =
            f.elements().map(|t| self.point_from(&[FieldElement::ONE, t, f.mul(t, t)])).collect();
        out.push(self.point_from(&[FieldElement::ZERO, FieldElement::ONE, FieldElement::ZERO]));
        out.push(self.point_from(&[FieldElement::ZERO, FieldElement::ZERO, FieldElement::ONE]));
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(v: &[u16]) -> Vec<FieldElement> {
        v.iter().map(|&x| FieldElement(x)).collect()
    }

    /// Oracle: brute-force point count by normalized-vector enumeration.
    fn count_normalized(q: u64, k: u32) -> u64 {
        (1..q.pow(k))
            .filter(|&idx| {
                let mut digits = Vec::new();
                let mut r = idx;
                for _ in 0..k {
                    digits.push(r % q);
                    r /= q;
                }
                digits.iter().rev().find(|&&d| d != 0) == Some(&1)
            })
            .count() as u64
    }

    #[test]
    fn theta_values() {
        assert_eq!(theta(2, 2), 7);
        assert_eq!(theta(3, 1), 4);
        assert_eq!(theta(5, -1), 0);
        assert_eq!(theta(4, 0), 1);
        for q in [2, 3, 4, 5, 7] {
            for k in 1..5u32 {
                assert_eq!(theta(q, k as i64 - 1), count_normalized(q, k));
            }
        }
    }

    #[test]
    fn pg12_point_order() {
        let g = GeometrySpec::with_order(2, 2).unwrap();
        let pts: Vec<_> = g.points().map(|p| g.coords(p).to_vec()).collect();
        assert_eq!(pts, vec![fe(&[0, 1]), fe(&[1, 0]), fe(&[1, 1])]);
    }

    #[test]
    fn fano_plane_incidence() {
        let g = GeometrySpec::with_order(2, 3).unwrap();
        assert_eq!(g.num_points(), 7);
        for h in g.hyperplanes() {
            assert_eq!(g.points().filter(|&p| g.incident(p, h)).count(), 3);
        }
    }

    #[test]
    fn pg13_has_four_points() {
        assert_eq!(GeometrySpec::with_order(3, 2).unwrap().num_points(), 4);
        assert_eq!(GeometrySpec::with_order(3, 1).unwrap_err(), Error::DimensionTooSmall(1));
    }

    #[test]
    fn incident_examples() {
        let g = GeometrySpec::with_order(2, 3).unwrap();
        let p = g.point_of(&fe(&[1, 0, 0])).unwrap();
        let h1 = Hyperplane(g.point_of(&fe(&[0, 0, 1])).unwrap().0);
        let h2 = Hyperplane(p.0);
        assert!(g.incident(p, h1));
        assert!(!g.incident(p, h2));
    }

    #[test]
    fn pencil_sizes_match_theta() {
        for q in [2, 3, 4, 5] {
            for k in 2..=4 {
                let g = GeometrySpec::with_order(q, k).unwrap();
                let expect = theta(q, k as i64 - 2) as usize;
                for p in g.points() {
                    let through = g.hyperplanes().filter(|&h| g.incident(p, h)).count();
                    assert_eq!(through, expect);
                    assert_eq!(g.hyperplanes_through(p).len(), expect);
                }
                for h in g.hyperplanes() {
                    let listed: Vec<u32> =
                        g.points().filter(|&p| g.incident(p, h)).map(|p| p.0 as u32).collect();
                    assert_eq!(g.hyperplane_points(h), listed.as_slice());
                }
            }
        }
    }

    #[test]
    fn point_of_normalizes_scalar_multiples() {
        let g = GeometrySpec::with_order(5, 2).unwrap();
        let a = g.point_of(&fe(&[2, 4])).unwrap();
        assert_eq!(g.coords(a), fe(&[1, 2]).as_slice());
        assert_eq!(g.point_of(&fe(&[0, 0])), None);
    }

    #[test]
    fn general_position_cases() {
        let g = GeometrySpec::with_order(3, 3).unwrap();
        let units = g.frame_points(3).unwrap();
        assert!(g.general_position(&units));
        let collinear: Vec<Point> =
            [[1, 0, 0], [0, 1, 0], [1, 1, 0]].iter().map(|v| g.point_of(&fe(v)).unwrap()).collect();
        assert!(!g.general_position(&collinear));
    }

    #[test]
    fn frames() {
        let g = GeometrySpec::with_order(2, 3).unwrap();
        let f3 = g.frame_points(3).unwrap();
        let f4 = g.frame_points(4).unwrap();
        assert_eq!(f3.iter().map(|&p| g.coords(p).to_vec()).collect::<Vec<_>>(), vec![
            fe(&[1, 0, 0]),
            fe(&[0, 1, 0]),
            fe(&[0, 0, 1])
        ]);
        assert_eq!(g.coords(f4[3]), fe(&[1, 1, 1]).as_slice());
        assert!(g.general_position(&f4));
        let g3 = GeometrySpec::with_order(3, 3).unwrap();
        assert!(g3.frame_points(5).is_err());
    }

    /// Independent determinant over GF(q) by cofactor expansion.
    fn det(f: &FieldSpec, m: &[Vec<FieldElement>]) -> FieldElement {
        if m.len() == 1 {
            return m[0][0];
        }
        let mut acc = FieldElement::ZERO;
        for col in 0..m.len() {
            let minor: Vec<Vec<FieldElement>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(c, _)| c != col).map(|(_, &x)| x).collect())
                .collect();
            let term = f.mul(m[0][col], det(f, &minor));
            acc = if col % 2 == 0 { f.add(acc, term) } else { f.sub(acc, term) };
        }
        acc
    }

    #[test]
    fn nrc_examples() {
        let g = GeometrySpec::with_order(2, 2).unwrap();
        let mut pts = g.normal_rational_curve().unwrap();
        pts.sort();
        assert_eq!(pts, vec![Point(0), Point(1), Point(2)]);

        let g = GeometrySpec::with_order(3, 3).unwrap();
        let nrc = g.normal_rational_curve().unwrap();
        let coords: Vec<_> = nrc.iter().map(|&p| g.coords(p).to_vec()).collect();
        assert_eq!(coords, vec![fe(&[1, 0, 0]), fe(&[1, 1, 1]), fe(&[1, 2, 1]), fe(&[0, 0, 1])]);
        assert!(g.general_position(&nrc));

        let g = GeometrySpec::with_order(4, 3).unwrap();
        let nrc = g.normal_rational_curve().unwrap();
        assert_eq!(nrc.len(), 5);
        for a in 0..5 {
            for b in a + 1..5 {
                for c in b + 1..5 {
                    let m: Vec<_> = [a, b, c].iter().map(|&i| g.coords(nrc[i]).to_vec()).collect();
                    assert!(!det(g.field(), &m).is_zero());
                }
            }
        }
        assert!(GeometrySpec::with_order(2, 4).unwrap().normal_rational_curve().is_err());
    }

    #[test]
    fn nrc_general_position_sweep() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19] {
            for k in 2..=8usize {
                if q + 1 < k as u64 || theta(q, k as i64 - 1) > 10_000 {
                    continue;
                }
                let g = GeometrySpec::with_order(q, k).unwrap();
                let nrc = g.normal_rational_curve().unwrap();
                assert_eq!(nrc.len() as u64, q + 1);
                assert!(g.general_position(&nrc), "q={q} k={k}");
            }
        }
    }

    fn line_meets(g: &GeometrySpec, set: &[Point]) -> Vec<usize> {
        g.hyperplanes().map(|h| set.iter().filter(|&&p| g.incident(p, h)).count()).collect()
    }

    #[test]
    fn hyperovals_meet_lines_in_zero_or_two() {
        let g = GeometrySpec::with_order(2, 3).unwrap();
        let ho = g.hyperoval().unwrap();
        assert_eq!(ho.len(), 4);
        let meets = line_meets(&g, &ho);
        assert_eq!(meets.iter().filter(|&&m| m == 2).count(), 6);
        assert_eq!(meets.iter().filter(|&&m| m == 0).count(), 1);
        for q in [4, 8] {
            let g = GeometrySpec::with_order(q, 3).unwrap();
            let ho = g.hyperoval().unwrap();
            assert_eq!(ho.len() as u64, q + 2);
            assert!(line_meets(&g, &ho).iter().all(|&m| m == 0 || m == 2));
        }
        assert!(GeometrySpec::with_order(3, 3).unwrap().hyperoval().is_err());
        assert!(GeometrySpec::with_order(4, 4).unwrap().hyperoval().is_err());
    }
}
