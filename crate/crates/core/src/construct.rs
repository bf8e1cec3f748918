//! Explicit constructions of codes with many distinct weights.
//!
//! Every constructor returns a [`ConstructionReport`] that carries the
//! emitted system, the predicted number of distinct weights, and the
//! number actually achieved as computed from hyperplane characters.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{theta, GeometrySpec, Point};
use crate::projsys::{ProjectiveSystem, WeightSpectrum};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstructionKind {
    Fws,
    Mws,
    Dim2,
    Arc,
    Hyperoval,
}

impl ConstructionKind {
    pub fn name(self) -> &'static str {
        match self {
            ConstructionKind::Fws => "fws",
            ConstructionKind::Mws => "mws",
            ConstructionKind::Dim2 => "dim2",
            ConstructionKind::Arc => "arc",
            ConstructionKind::Hyperoval => "hyperoval",
        }
    }
}

/// Which point set carries the multiplicities of an arc construction.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ArcSource {
    Frame,
    NormalRationalCurve,
    Hyperoval,
}

/// Construction-specific quantities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Auxiliary {
    Fws {
        /// Largest `t` with `2^t <= n`.
        t: u32,
    },
    Dim2 {
        /// Distinct multiplicity values used by the construction.
        c: u64,
        /// Multiplicity of the heaviest point.
        alpha: u64,
        /// `⌊(√(1+8n)−1)/2⌋` below `n = q(q+1)/2`, else `q + 1`.
        closed_form: u64,
    },
    Mws {
        theta: u64,
        /// `q(q^k−1)(q^{k−1}−1)² / (2(q−1)³)`.
        formula_length: u128,
    },
    Arc {
        source: ArcSource,
        m: u32,
        r: u64,
        s_k: Vec<u64>,
        s: u64,
        bound: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionReport {
    pub kind: ConstructionKind,
    pub system: ProjectiveSystem,
    pub predicted_distinct: u64,
    pub achieved_distinct: u64,
    pub effective_dimension: usize,
    pub auxiliary: Auxiliary,
}

impl ConstructionReport {
    fn new(kind: ConstructionKind, system: ProjectiveSystem, predicted_distinct: u64, auxiliary: Auxiliary) -> Self {
        let achieved_distinct = system.nonzero_weight_set().len() as u64;
        let effective_dimension = system.effective_dimension();
        ConstructionReport { kind, system, predicted_distinct, achieved_distinct, effective_dimension, auxiliary }
    }

    /// Spectrum of the code actually spanned by the emitted columns.
    pub fn spectrum(&self) -> WeightSpectrum {
        self.system.effective_spectrum()
    }
}

fn floor_log2(n: u64) -> u32 {
    63 - n.leading_zeros()
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

fn geometry(q: u64, k: usize) -> Result<Arc<GeometrySpec>> {
    GeometrySpec::with_order(q, k)
}

/// Doubling multiplicities `1, 2, ..., 2^(t-1)` on the first `t` frame
/// points and `n - (2^t - 1)` on the next, `t` maximal with `2^t <= n`.
pub fn fws(n: u64, k: usize, q: u64) -> Result<ConstructionReport> {
    if k < 3 {
        return Err(Error::InvalidParameters(format!("fws needs k >= 3, got {k}")));
    }
    if n < 3 {
        return Err(Error::InvalidParameters(format!("fws needs n >= 3, got {n}")));
    }
    if k >= 64 || n >= 1u64 << k {
        return Err(Error::InvalidParameters("n ≥ 2^k".into()));
    }
    let geom = geometry(q, k)?;
    let t = floor_log2(n);
    let frame = geom.frame_points(t as usize + 1)?;
    let mut pairs: Vec<(Point, u64)> = (0..t as usize).map(|i| (frame[i], 1u64 << i)).collect();
    pairs.push((frame[t as usize], n - ((1u64 << t) - 1)));
    let system = ProjectiveSystem::from_points(geom, &pairs)?;
    Ok(ConstructionReport::new(ConstructionKind::Fws, system, n, Auxiliary::Fws { t }))
}

/// Largest `t` with `t(t+1)/2 <= n`, capped at `q + 1` from `n = q(q+1)/2`.
pub fn dim2_closed_form(n: u64, q: u64) -> u64 {
    if n < (q * q + q) / 2 {
        let mut t = 0;
        while (t + 1) * (t + 2) / 2 <= n {
            t += 1;
        }
        t
    } else {
        q + 1
    }
}

/// Two-dimensional codes: point multiplicities `0, 1, ..., c-2, α` on
/// distinct points of PG(1, q), with `c` maximal subject to `c <= q + 1`
/// and `α = n - (c-1)(c-2)/2 >= c - 1`.
pub fn dim2(n: u64, q: u64) -> Result<ConstructionReport> {
    if n == 0 {
        return Err(Error::InvalidParameters("dim2 needs n >= 1".into()));
    }
    let geom = geometry(q, 2)?;
    let mut c = 1;
    while c < q + 1 && (c + 1) * c / 2 <= n {
        c += 1;
    }
    let alpha = n - (c - 1) * (c - 2) / 2;
    let mut mult = vec![0u64; geom.num_points()];
    if n == 2 {
        // {0, 2} would put all mass on one point; {0, 1, 1} spans.
        mult[0] = 1;
        mult[1] = 1;
    } else {
        for (i, slot) in mult.iter_mut().enumerate().take(c as usize - 1) {
            *slot = i as u64;
        }
        mult[c as usize - 1] = alpha;
    }
    let system = ProjectiveSystem::new(geom, mult)?;
    let closed_form = dim2_closed_form(n, q);
    Ok(ConstructionReport::new(ConstructionKind::Dim2, system, closed_form, Auxiliary::Dim2 {
        c,
        alpha: if n == 2 { 1 } else { alpha },
        closed_form,
    }))
}

/// Length `q(q^k−1)(q^{k−1}−1)² / (2(q−1)³)` of the maximum-spectrum construction.
pub fn mws_length_formula(k: usize, q: u64) -> u128 {
    let q = q as u128;
    let a = q.pow(k as u32) - 1;
    let b = q.pow(k as u32 - 1) - 1;
    q * a * b * b / (2 * (q - 1).pow(3))
}

/// Labels hyperplanes `H_0, H_1, ...` canonically and gives each point
/// the sum of the labels of the hyperplanes through it.
pub fn mws(k: usize, q: u64) -> Result<ConstructionReport> {
    if k < 2 {
        return Err(Error::DimensionTooSmall(k));
    }
    let geom = geometry(q, k)?;
    let mult: Vec<u64> =
        geom.points().map(|p| geom.hyperplanes_through(p).iter().map(|&h| h as u64).sum()).collect();
    let th = geom.num_points() as u64;
    let system = ProjectiveSystem::new(geom, mult)?;
    debug_assert_eq!(system.n(), theta(q, k as i64 - 2) * th * (th - 1) / 2);
    Ok(ConstructionReport::new(ConstructionKind::Mws, system, th, Auxiliary::Mws {
        theta: th,
        formula_length: mws_length_formula(k, q),
    }))
}

/// `S_k = {r + α : 0 <= α < 2^m, popcount(α) <= k - 2}` and the number
/// of its members with popcount at least `k`.
pub fn popcount_tail(m: u32, r: u64, k: usize) -> (Vec<u64>, u64) {
    let s_k: Vec<u64> =
        (0..1u64 << m).filter(|a| a.count_ones() as usize <= k - 2).map(|a| r + a).collect();
    let s = s_k.iter().filter(|a| a.count_ones() as usize >= k).count() as u64;
    (s_k, s)
}

/// Multiplicities `2^i` on `P_0..P_{m-1}` and `r = n - 2^m + 1` on `P_m`
/// for an arc `P_0..P_m`, `m = ⌊log₂ n⌋`. The arc is a frame when
/// `m + 1 <= k + 1`, otherwise a prefix of the normal rational curve.
pub fn arc_bound(n: u64, k: usize, q: u64) -> Result<ConstructionReport> {
    if k < 3 {
        return Err(Error::InvalidParameters(format!("arc construction needs k >= 3, got {k}")));
    }
    if n == 0 {
        return Err(Error::InvalidParameters("arc construction needs n >= 1".into()));
    }
    if q + 1 < 64 && n >= 1u64 << (q + 1) {
        return Err(Error::InvalidParameters("n ≥ 2^(q+1)".into()));
    }
    let geom = geometry(q, k)?;
    let m = floor_log2(n);
    let size = m as usize + 1;
    let (source, points) = if size <= k + 1 {
        (ArcSource::Frame, geom.frame_points(size)?)
    } else {
        let nrc = geom.normal_rational_curve()?;
        if size > nrc.len() {
            return Err(Error::InvalidParameters(format!("no {size}-arc available in PG({}, {q})", k - 1)));
        }
        (ArcSource::NormalRationalCurve, nrc[..size].to_vec())
    };
    let r = n - (1u64 << m) + 1;
    let mut mults: Vec<u64> = (0..m).map(|i| 1u64 << i).collect();
    mults.push(r);
    let system = arc_multiset(geom, &points, &mults)?;
    let (s_k, s) = popcount_tail(m, r, k);
    let bound = (0..k as u64).map(|i| binomial(m as u64, i)).sum::<u64>() + s;
    Ok(ConstructionReport::new(ConstructionKind::Arc, system, bound, Auxiliary::Arc { source, m, r, s_k, s, bound }))
}

/// Multiplicities `2^i` (`i = 0..q`) on the first `q + 1` points of the
/// regular hyperoval of PG(2, q) and `n - (2^(q+1) - 1)` on the last.
pub fn hyperoval_bound(n: u64, q: u64) -> Result<ConstructionReport> {
    let geom = geometry(q, 3)?;
    let points = geom.hyperoval()?;
    let lo = 1u64.checked_shl(q as u32 + 1).filter(|_| q + 1 < 64);
    let in_range = match lo {
        Some(lo) => n >= lo && (q + 2 >= 64 || n < 1u64 << (q + 2)),
        None => false,
    };
    if !in_range {
        return Err(Error::InvalidParameters(format!("n must satisfy 2^(q+1) <= n < 2^(q+2), got n = {n}")));
    }
    let lo = lo.unwrap();
    let mut mults: Vec<u64> = (0..=q).map(|i| 1u64 << i).collect();
    mults.push(n - (lo - 1));
    let system = arc_multiset(geom, &points, &mults)?;
    let m = floor_log2(n);
    let r = n - (1u64 << m) + 1;
    let (s_k, s) = popcount_tail(m, r, 3);
    let bound = binomial(q + 1, 2) + 1 + s;
    Ok(ConstructionReport::new(ConstructionKind::Hyperoval, system, bound, Auxiliary::Arc {
        source: ArcSource::Hyperoval,
        m,
        r,
        s_k,
        s,
        bound,
    }))
}

/// Places `mults[i]` on `arc[i]`; the arc must be in general position.
pub fn arc_multiset(geom: Arc<GeometrySpec>, arc: &[Point], mults: &[u64]) -> Result<ProjectiveSystem> {
    if arc.len() != mults.len() {
        return Err(Error::InvalidParameters(format!("{} points but {} multiplicities", arc.len(), mults.len())));
    }
    if !geom.general_position(arc) {
        return Err(Error::NotGeneralPosition);
    }
    let pairs: Vec<(Point, u64)> = arc.iter().copied().zip(mults.iter().copied()).collect();
    ProjectiveSystem::from_points(geom, &pairs)
}
