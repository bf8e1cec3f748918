//! Executable predicates over spectra, systems and tables.
//!
//! Each check returns a [`VerificationReport`] naming the property, the
//! verdict, and the point, hyperplane, weight or row that decides it.

use serde::Serialize;

use crate::construct::{ConstructionKind, ConstructionReport};
use crate::error::{Error, Result};
use crate::geometry::theta;
use crate::oracle::LTable;
use crate::projsys::{ProjectiveSystem, WeightSpectrum};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    None,
    /// Number of distinct weights found.
    Distinct { distinct: u64, required: u64 },
    /// Smallest weight in `1..=n` that no codeword has.
    MissingWeight { weight: u64 },
    Point { id: usize, multiplicity: u64, threshold: u64 },
    Hyperplane { id: usize, character: u64, expected: u64 },
    Row { n: u64, value: u64, expected: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub property: String,
    pub holds: bool,
    pub evidence: Evidence,
    /// Reported for inspection rather than asserted as a theorem.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub informational: bool,
}

impl VerificationReport {
    fn new(property: &str, holds: bool, evidence: Evidence) -> Self {
        VerificationReport { property: property.to_string(), holds, evidence, informational: false }
    }

    fn informational(mut self) -> Self {
        self.informational = true;
        self
    }
}

/// Every weight `1..=n` occurs.
pub fn is_fws(spec: &WeightSpectrum) -> VerificationReport {
    let distinct = spec.distinct() as u64;
    match (1..=spec.n()).find(|&w| !spec.contains(w)) {
        Some(weight) => VerificationReport::new("fws", false, Evidence::MissingWeight { weight }),
        None => VerificationReport::new("fws", true, Evidence::Distinct { distinct, required: spec.n() }),
    }
}

/// `θ_q(k-1)` distinct weights.
pub fn is_mws(spec: &WeightSpectrum, k: usize, q: u64) -> VerificationReport {
    let required = theta(q, k as i64 - 1);
    let distinct = spec.distinct() as u64;
    VerificationReport::new("mws", distinct == required, Evidence::Distinct { distinct, required })
}

fn heaviest(sys: &ProjectiveSystem) -> (usize, u64) {
    sys.multiplicities()
        .iter()
        .enumerate()
        .fold((0, 0), |best, (i, &m)| if m > best.1 { (i, m) } else { best })
}

fn require_k3(sys: &ProjectiveSystem) -> Result<()> {
    if sys.k() < 3 {
        return Err(Error::InvalidParameters(format!("lemma needs k >= 3, got {}", sys.k())));
    }
    Ok(())
}

/// No point is heavier than `⌈(n+1)/2⌉`.
pub fn fat_point_check(sys: &ProjectiveSystem) -> Result<VerificationReport> {
    require_k3(sys)?;
    let threshold = (sys.n() + 2) / 2;
    let (id, multiplicity) = heaviest(sys);
    Ok(VerificationReport::new("fat_point", multiplicity <= threshold, Evidence::Point { id, multiplicity, threshold }))
}

/// Some point has multiplicity at least `n - 2^(k-1) + 1`. Only defined
/// for full-spectrum systems.
pub fn plump_point_check(sys: &ProjectiveSystem) -> Result<VerificationReport> {
    require_k3(sys)?;
    if sys.nonzero_weight_set().len() as u64 != sys.n() {
        return Err(Error::InvalidParameters("plump point check needs a full weight spectrum system".into()));
    }
    let need = (sys.n() as i128) - (1i128 << (sys.k() - 1)) + 1;
    let (id, multiplicity) = heaviest(sys);
    Ok(VerificationReport::new("plump_point", multiplicity as i128 >= need, Evidence::Point {
        id,
        multiplicity,
        threshold: need.max(0) as u64,
    }))
}

/// `Char(H_t) = θ_q(k-3) C(θ_q(k-1), 2) + (θ_q(k-2) - θ_q(k-3)) t` for
/// every canonical hyperplane label `t`.
pub fn mws_character_formula_check(report: &ConstructionReport) -> Result<VerificationReport> {
    if report.kind != ConstructionKind::Mws {
        return Err(Error::InvalidParameters(format!(
            "character formula applies to mws reports, not {}",
            report.kind.name()
        )));
    }
    let sys = &report.system;
    let (q, k) = (sys.q(), sys.k() as i64);
    let th = theta(q, k - 1);
    let base = theta(q, k - 3) * th * (th - 1) / 2;
    let slope = theta(q, k - 2) - theta(q, k - 3);
    for (t, character) in sys.hyperplane_characters().into_iter().enumerate() {
        let expected = base + slope * t as u64;
        if character != expected {
            return Ok(VerificationReport::new("mws_character_formula", false, Evidence::Hyperplane {
                id: t,
                character,
                expected,
            }));
        }
    }
    Ok(VerificationReport::new("mws_character_formula", true, Evidence::None))
}

/// Audits a complete table against the known facts about `L(n, k, q)`:
/// monotonicity in `n`, the `min(n, θ_q(k-1))` ceiling, the full-spectrum
/// cut at `n = 2^k`, and (as informational reports) the two-dimensional
/// plateau and the length bound for reaching `θ_q(k-1)`.
pub fn bound_audit(table: &LTable) -> Result<Vec<VerificationReport>> {
    if !table.is_complete() {
        return Err(Error::InvalidParameters("bound audit needs a complete table".into()));
    }
    let rows: Vec<(u64, u64)> = table.rows.iter().map(|r| (r.n, r.max_distinct.unwrap())).collect();
    let k = table.k as u64;
    let mut out = Vec::new();

    let drop = rows.windows(2).find(|w| w[1].0 == w[0].0 + 1 && w[1].1 < w[0].1);
    out.push(match drop {
        Some(w) => VerificationReport::new("monotone", false, Evidence::Row { n: w[1].0, value: w[1].1, expected: w[0].1 }),
        None => VerificationReport::new("monotone", true, Evidence::None),
    });

    let over = rows.iter().find(|&&(n, v)| v > n.min(table.limit));
    out.push(match over {
        Some(&(n, v)) => VerificationReport::new("ceiling", false, Evidence::Row { n, value: v, expected: n.min(table.limit) }),
        None => VerificationReport::new("ceiling", true, Evidence::None),
    });

    // rows with n < k have no non-degenerate code and are skipped
    let cut = 1u64.checked_shl(table.k as u32).unwrap_or(u64::MAX);
    let wrong = rows.iter().filter(|&&(n, _)| n >= k).find(|&&(n, v)| (v == n) != (n < cut));
    out.push(match wrong {
        Some(&(n, v)) => VerificationReport::new("fws_cut", false, Evidence::Row {
            n,
            value: v,
            expected: if n < cut { n } else { n - 1 },
        }),
        None => VerificationReport::new("fws_cut", true, Evidence::None),
    });

    if table.k == 2 {
        let threshold = table.q * (table.q + 1) / 2;
        let miss = rows.iter().find(|&&(n, v)| n >= threshold && v != table.q + 1);
        out.push(
            match miss {
                Some(&(n, v)) => {
                    VerificationReport::new("dim2_plateau", false, Evidence::Row { n, value: v, expected: table.q + 1 })
                }
                None => VerificationReport::new("dim2_plateau", true, Evidence::None),
            }
            .informational(),
        );
    }

    if let Some(start) = table.plateau_start {
        out.push(
            VerificationReport::new("plateau_length_bound", start >= table.plateau_length_bound, Evidence::Row {
                n: start,
                value: table.limit,
                expected: table.plateau_length_bound,
            })
            .informational(),
        );
    }
    Ok(out)
}
