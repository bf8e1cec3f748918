//! Exhaustive search for the maximum number of distinct nonzero weights
//! of a non-degenerate `[n, k]_q` code.
//!
//! The search space is the set of multiplicity vectors over the points of
//! PG(k-1, q) with total `n`, i.e. codes up to column permutation and
//! column scaling. It is split by the multiplicity of point 0; each part
//! is walked depth first in lexicographic order while hyperplane
//! characters are updated incrementally. Parts are merged in order, so
//! results do not depend on the number of workers.

use std::ops::{ControlFlow, RangeInclusive};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::construct::{dim2, dim2_closed_form};
use crate::error::{Error, Result};
use crate::geometry::{theta, GeometrySpec};
use crate::lincode::{spectrum_via_codewords_with_budget, DEFAULT_CODEWORD_BUDGET};
use crate::projsys::ProjectiveSystem;

/// Default cap on the number of multisets a search may visit.
pub const DEFAULT_STATE_BUDGET: u128 = 100_000_000;

/// Environment variable overriding [`DEFAULT_STATE_BUDGET`].
pub const BUDGET_ENV: &str = "WSL_BUDGET";

/// [`DEFAULT_STATE_BUDGET`] unless `WSL_BUDGET` holds a valid integer.
pub fn budget_from_env() -> u128 {
    std::env::var(BUDGET_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_STATE_BUDGET)
}

/// Number of multisets of size `n` over `points` elements, saturating.
pub fn multichoose(points: u64, n: u64) -> u128 {
    if points == 0 {
        return u128::from(n == 0);
    }
    // C(points + n - 1, n)
    let top = (points + n - 1) as u128;
    let k = n.min(points - 1) as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul(top - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub budget: u128,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
    /// Random spanning candidates scored by both spectrum routes.
    pub route_checks: usize,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: DEFAULT_STATE_BUDGET, workers: None, route_checks: 100, seed: 0x5eed }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub n: u64,
    pub k: usize,
    pub q: u64,
    /// Exact maximum; 0 when no non-degenerate code exists (`n < k`).
    pub max_distinct: u64,
    /// Lexicographically smallest maximizing multiplicity vector.
    pub witness: Option<ProjectiveSystem>,
    pub fws_exists: bool,
    pub states_visited: u128,
    pub budget: u128,
    /// Random candidates on which both spectrum routes were compared.
    pub route_checks: usize,
}

// Walks every multiset of size `n` whose point-0 multiplicity is `first`.
struct Walker<'a> {
    through: Vec<&'a [u32]>,
    n: u64,
    mult: Vec<u64>,
    chars: Vec<u64>,
    seen: Vec<u32>,
    stamp: u32,
    visited: u128,
}

impl<'a> Walker<'a> {
    fn new(geom: &'a GeometrySpec, n: u64) -> Self {
        let np = geom.num_points();
        Walker {
            through: geom.points().map(|p| geom.hyperplanes_through(p)).collect(),
            n,
            mult: vec![0; np],
            chars: vec![0; np],
            seen: vec![0; n as usize + 1],
            stamp: 0,
            visited: 0,
        }
    }

    fn place(&mut self, point: usize, m: u64) {
        self.mult[point] = m;
        for &h in self.through[point] {
            self.chars[h as usize] += m;
        }
    }

    fn lift(&mut self, point: usize) {
        let m = std::mem::take(&mut self.mult[point]);
        for &h in self.through[point] {
            self.chars[h as usize] -= m;
        }
    }

    /// Distinct characters of a spanning system, `None` if some
    /// hyperplane holds everything.
    fn score(&mut self) -> Option<u64> {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.seen.fill(0);
            self.stamp = 1;
        }
        let mut distinct = 0;
        for &c in &self.chars {
            if c == self.n {
                return None;
            }
            let slot = &mut self.seen[c as usize];
            if *slot != self.stamp {
                *slot = self.stamp;
                distinct += 1;
            }
        }
        Some(distinct)
    }

    fn run<F>(&mut self, first: u64, stop: &AtomicBool, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[u64], &[u64], Option<u64>) -> ControlFlow<()>,
    {
        self.place(0, first);
        let flow = self.descend(1, self.n - first, stop, visit);
        self.lift(0);
        flow
    }

    fn descend<F>(&mut self, point: usize, remaining: u64, stop: &AtomicBool, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[u64], &[u64], Option<u64>) -> ControlFlow<()>,
    {
        let last = self.mult.len() - 1;
        if point == last {
            self.place(point, remaining);
            self.visited += 1;
            let score = self.score();
            let flow = if stop.load(Ordering::Relaxed) {
                ControlFlow::Break(())
            } else {
                visit(&self.mult, &self.chars, score)
            };
            self.lift(point);
            return flow;
        }
        for m in 0..=remaining {
            self.place(point, m);
            let flow = self.descend(point + 1, remaining - m, stop, visit);
            self.lift(point);
            flow?;
        }
        ControlFlow::Continue(())
    }
}

fn check_budget(geom: &GeometrySpec, n: u64, budget: u128) -> Result<u128> {
    let required = multichoose(geom.num_points() as u64, n);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    Ok(required)
}

fn in_pool<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(job()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| Error::InvalidParameters(format!("thread pool: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

/// Visits every multiset of size `n` in lexicographic order, passing the
/// multiplicity vector, the hyperplane characters, and the distinct
/// character count (`None` for non-spanning multisets). Sequential.
pub fn visit_systems<F>(geom: &GeometrySpec, n: u64, budget: u128, mut visit: F) -> Result<u128>
where
    F: FnMut(&[u64], &[u64], Option<u64>) -> ControlFlow<()>,
{
    check_budget(geom, n, budget)?;
    if n == 0 {
        return Err(Error::InvalidParameters("search needs n >= 1".into()));
    }
    let stop = AtomicBool::new(false);
    let mut walker = Walker::new(geom, n);
    for first in 0..=n {
        if walker.run(first, &stop, &mut visit).is_break() {
            break;
        }
    }
    Ok(walker.visited)
}

#[derive(Default)]
struct PartBest {
    distinct: u64,
    witness: Option<Vec<u64>>,
    visited: u128,
}

fn search(geom: &Arc<GeometrySpec>, n: u64, opts: &SearchOptions, stop_at_full: bool) -> Result<(PartBest, u128)> {
    if n == 0 {
        return Err(Error::InvalidParameters("search needs n >= 1".into()));
    }
    check_budget(geom, n, opts.budget)?;
    let stop = AtomicBool::new(false);
    let parts: Vec<PartBest> = in_pool(opts.workers, || {
        (0..=n)
            .into_par_iter()
            .map(|first| {
                let mut walker = Walker::new(geom, n);
                let mut best = PartBest::default();
                let _ = walker.run(first, &stop, &mut |mult, _, score| {
                    if let Some(d) = score {
                        if d > best.distinct {
                            best.distinct = d;
                            best.witness = Some(mult.to_vec());
                            if stop_at_full && d == n {
                                stop.store(true, Ordering::Relaxed);
                                return ControlFlow::Break(());
                            }
                        }
                    }
                    ControlFlow::Continue(())
                });
                best.visited = walker.visited;
                best
            })
            .collect()
    })?;
    let visited = parts.iter().map(|p| p.visited).sum();
    // parts are in ascending point-0 multiplicity, hence lexicographic
    let best = parts.into_iter().fold(PartBest::default(), |acc, p| if p.distinct > acc.distinct { p } else { acc });
    Ok((best, visited))
}

/// Random multiset of size `n`, each unit on a uniform point.
fn random_multiset(rng: &mut ChaCha8Rng, points: usize, n: u64) -> Vec<u64> {
    let mut mult = vec![0; points];
    for _ in 0..n {
        mult[rng.gen_range(0..points)] += 1;
    }
    mult
}

/// Scores `samples` random spanning systems by both spectrum routes and
/// fails on the first disagreement. Returns how many were compared.
pub fn cross_check_routes(geom: &Arc<GeometrySpec>, n: u64, samples: usize, seed: u64) -> Result<usize> {
    let q = geom.q();
    if q.checked_pow(geom.k() as u32).is_none_or(|t| t > DEFAULT_CODEWORD_BUDGET) || n < geom.k() as u64 {
        return Ok(0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    let mut attempts = 0;
    while checked < samples && attempts < samples * 20 {
        attempts += 1;
        let sys = ProjectiveSystem::new(geom.clone(), random_multiset(&mut rng, geom.num_points(), n))?;
        if !sys.is_spanning() {
            continue;
        }
        let by_hyperplanes = sys.spectrum_via_hyperplanes()?;
        let by_codewords = spectrum_via_codewords_with_budget(&sys.to_generator_matrix()?, DEFAULT_CODEWORD_BUDGET)?;
        if by_hyperplanes != by_codewords {
            return Err(Error::RouteMismatch(format!("multiplicities {:?}", sys.multiplicities())));
        }
        checked += 1;
    }
    Ok(checked)
}

/// Exact `L(n, k, q)` with the default options.
pub fn max_distinct_weights(n: u64, k: usize, q: u64) -> Result<SearchResult> {
    max_distinct_weights_with(&GeometrySpec::with_order(q, k)?, n, &SearchOptions::default())
}

pub fn max_distinct_weights_with(geom: &Arc<GeometrySpec>, n: u64, opts: &SearchOptions) -> Result<SearchResult> {
    let (best, visited) = search(geom, n, opts, false)?;
    let route_checks = cross_check_routes(geom, n, opts.route_checks, opts.seed ^ n)?;
    let witness = best.witness.map(|m| ProjectiveSystem::new(geom.clone(), m)).transpose()?;
    Ok(SearchResult {
        n,
        k: geom.k(),
        q: geom.q(),
        max_distinct: best.distinct,
        fws_exists: best.distinct == n,
        witness,
        states_visited: visited,
        budget: opts.budget,
        route_checks,
    })
}

/// Whether an `[n, k]_q` code with `n` distinct nonzero weights exists.
pub fn fws_exists(n: u64, k: usize, q: u64) -> Result<bool> {
    fws_exists_with(&GeometrySpec::with_order(q, k)?, n, &SearchOptions::default())
}

/// Stops at the first full-spectrum system found.
pub fn fws_exists_with(geom: &Arc<GeometrySpec>, n: u64, opts: &SearchOptions) -> Result<bool> {
    let (best, _) = search(geom, n, opts, true)?;
    Ok(best.distinct == n)
}

/// Every full-spectrum multiplicity vector of size `n`, in lexicographic order.
pub fn all_fws_systems(geom: &Arc<GeometrySpec>, n: u64, budget: u128) -> Result<Vec<ProjectiveSystem>> {
    let mut found = Vec::new();
    visit_systems(geom, n, budget, |mult, _, score| {
        if score == Some(n) {
            found.push(mult.to_vec());
        }
        ControlFlow::Continue(())
    })?;
    found.into_iter().map(|m| ProjectiveSystem::new(geom.clone(), m)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LRow {
    pub n: u64,
    /// `None` marks a row skipped for budget.
    pub max_distinct: Option<u64>,
    pub witness: Option<Vec<u64>>,
    pub states_visited: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LTable {
    pub q: u64,
    pub k: usize,
    /// `θ_q(k-1)`, the largest possible number of distinct weights.
    pub limit: u64,
    pub rows: Vec<LRow>,
    /// First `n` in the table whose row reaches `limit`.
    pub plateau_start: Option<u64>,
    /// `⌈q θ_q(k-1) / 2⌉`, a lower bound on any length reaching `limit`.
    pub plateau_length_bound: u64,
}

impl LTable {
    pub fn is_complete(&self) -> bool {
        self.rows.iter().all(|r| r.max_distinct.is_some())
    }

    pub fn value(&self, n: u64) -> Option<u64> {
        self.rows.iter().find(|r| r.n == n).and_then(|r| r.max_distinct)
    }
}

/// `L(n, k, q)` for every `n` in range; rows over budget become gaps.
pub fn build_l_table(q: u64, k: usize, range: RangeInclusive<u64>, opts: &SearchOptions) -> Result<LTable> {
    let geom = GeometrySpec::with_order(q, k)?;
    let limit = theta(q, k as i64 - 1);
    let mut rows = Vec::new();
    for n in range {
        let row = match max_distinct_weights_with(&geom, n, &SearchOptions { route_checks: 0, ..opts.clone() }) {
            Ok(r) => LRow {
                n,
                max_distinct: Some(r.max_distinct),
                witness: r.witness.map(|w| w.multiplicities().to_vec()),
                states_visited: r.states_visited,
            },
            Err(Error::BudgetExceeded { .. }) => LRow { n, max_distinct: None, witness: None, states_visited: 0 },
            Err(e) => return Err(e),
        };
        rows.push(row);
    }
    let plateau_start = rows.iter().find(|r| r.max_distinct == Some(limit)).map(|r| r.n);
    Ok(LTable { q, k, limit, rows, plateau_start, plateau_length_bound: (q * limit).div_ceil(2) })
}

/// One row of the two-dimensional comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Dim2Row {
    pub q: u64,
    pub n: u64,
    pub oracle: u64,
    pub construction: u64,
    pub closed_form: u64,
    pub construction_matches_oracle: bool,
    pub closed_form_matches_oracle: bool,
}

/// Exact `L(n, 2, q)` against the dimension-two construction and the
/// closed form, for each `n` in range.
pub fn dim2_adjudication(q: u64, range: RangeInclusive<u64>, opts: &SearchOptions) -> Result<Vec<Dim2Row>> {
    let geom = GeometrySpec::with_order(q, 2)?;
    range
        .map(|n| {
            let oracle = max_distinct_weights_with(&geom, n, opts)?.max_distinct;
            let report = dim2(n, q)?;
            // a degenerate construction realizes no [n, 2] code
            let construction = if report.system.is_spanning() { report.achieved_distinct } else { 0 };
            let closed_form = dim2_closed_form(n, q);
            Ok(Dim2Row {
                q,
                n,
                oracle,
                construction,
                closed_form,
                construction_matches_oracle: construction == oracle,
                closed_form_matches_oracle: closed_form == oracle,
            })
        })
        .collect()
}
