//! Breadth-first enumeration of freely reduced words in the generators,
//! deduplicated up to sign, and the discreteness scan driven by a fixed
//! test map: Jørgensen evaluation against every elliptic element,
//! near-identity elliptic detection, trace-type statistics, and the
//! order-2 inventory.
//!
//! A scan never certifies discreteness. The two witness kinds it can
//! produce — a Jørgensen violation on a certified non-elementary pair,
//! and an elliptic element close to the identity — are evidence of
//! non-discreteness; their absence up to depth L is only that.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classify::{classify, non_elementary_certificate, Kind};
use crate::embed::{sl2c_trace_type, TraceType};
use crate::jorgensen::{
    eigenvalue_from_trace, jorgensen_diag, jorgensen_testmap_form, jorgensen_value,
    JorgensenReport, TestMap,
};
use crate::matrix2::{complex_pair, Mat2C};
use crate::{tol, Error, Result};

/// A finitely generated subgroup of SL(2,ℂ), given by its generators.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupSpec {
    pub generators: Vec<Mat2C>,
    #[serde(default)]
    pub labels: Vec<String>,
}

impl GroupSpec {
    pub fn new(generators: Vec<Mat2C>, labels: Vec<String>) -> Result<Self> {
        let spec = Self { generators, labels };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.generators.is_empty() {
            return Err(Error::BadGroupSpec("no generators".into()));
        }
        if !self.labels.is_empty() && self.labels.len() != self.generators.len() {
            return Err(Error::BadGroupSpec(format!(
                "{} labels for {} generators",
                self.labels.len(),
                self.generators.len()
            )));
        }
        Ok(())
    }

    /// Labels, defaulting to g1, g2, … when none were given.
    pub fn effective_labels(&self) -> Vec<String> {
        if self.labels.is_empty() {
            (1..=self.generators.len())
                .map(|i| format!("g{i}"))
                .collect()
        } else {
            self.labels.clone()
        }
    }
}

/// One enumerated group element: the first freely reduced word (in BFS
/// order) that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct WordEntry {
    pub word: String,
    pub length: usize,
    pub matrix: Mat2C,
}

/// Sign representative: flips g to −g so the entry of largest modulus has
/// positive real part (positive imaginary part when purely imaginary).
pub fn sign_normalized(m: &Mat2C) -> Mat2C {
    let entries = m.entries();
    let mut lead = entries[0];
    let mut lead_norm = lead.norm();
    for e in &entries[1..] {
        let n = e.norm();
        if n > lead_norm {
            lead = *e;
            lead_norm = n;
        }
    }
    if lead.re < 0.0 || (lead.re == 0.0 && lead.im < 0.0) {
        m.neg()
    } else {
        *m
    }
}

fn fingerprint(m: &Mat2C) -> [i64; 8] {
    let n = sign_normalized(m);
    let grid = tol::DEDUP_GRID;
    let mut key = [0i64; 8];
    for (i, e) in n.entries().iter().enumerate() {
        key[2 * i] = (e.re / grid).round() as i64;
        key[2 * i + 1] = (e.im / grid).round() as i64;
    }
    key
}

struct Letter {
    matrix: Mat2C,
    label: String,
    inverse_of: usize,
}

fn alphabet(spec: &GroupSpec) -> Vec<Letter> {
    let labels = spec.effective_labels();
    let k = spec.generators.len();
    let mut letters = Vec::with_capacity(2 * k);
    for (i, g) in spec.generators.iter().enumerate() {
        letters.push(Letter {
            matrix: *g,
            label: labels[i].clone(),
            inverse_of: i + k,
        });
    }
    for (i, g) in spec.generators.iter().enumerate() {
        letters.push(Letter {
            matrix: g.inverse(),
            label: format!("{}^-1", labels[i]),
            inverse_of: i,
        });
    }
    letters
}

/// All freely reduced words of length 1..=depth, breadth-first, generator
/// order as given with inverses after generators. Matrices are
/// deduplicated up to sign by a rounded-entry fingerprint; the retained
/// word for an element is the first one seen. Returns the retained
/// entries together with the number of reduced words examined.
pub fn enumerate_words_counted(
    spec: &GroupSpec,
    depth: usize,
    cap: usize,
) -> Result<(Vec<WordEntry>, usize)> {
    spec.validate()?;
    let letters = alphabet(spec);
    let mut seen: HashMap<[i64; 8], ()> = HashMap::new();
    let mut out: Vec<WordEntry> = Vec::new();
    let mut words_examined = 0usize;
    // frontier carries (last letter index, word, matrix) for retained items
    let mut frontier: Vec<(usize, String, Mat2C)> = Vec::new();

    for length in 1..=depth {
        let mut next = Vec::new();
        let parents: Vec<(Option<usize>, String, Mat2C)> = if length == 1 {
            vec![(None, String::new(), Mat2C::identity())]
        } else {
            frontier
                .iter()
                .map(|(last, w, m)| (Some(*last), w.clone(), *m))
                .collect()
        };
        for (last, word, m) in parents {
            for (li, letter) in letters.iter().enumerate() {
                if last == Some(letter.inverse_of) {
                    continue; // keep the word freely reduced
                }
                words_examined += 1;
                let m2 = m * letter.matrix;
                let key = fingerprint(&m2);
                if seen.contains_key(&key) {
                    continue;
                }
                seen.insert(key, ());
                let w2 = if word.is_empty() {
                    letter.label.clone()
                } else {
                    format!("{word} {}", letter.label)
                };
                if out.len() + 1 > cap {
                    return Err(Error::DepthTooLarge {
                        count: out.len() + 1,
                        cap,
                    });
                }
                out.push(WordEntry {
                    word: w2.clone(),
                    length,
                    matrix: m2,
                });
                next.push((li, w2, m2));
            }
        }
        frontier = next;
    }
    Ok((out, words_examined))
}

pub fn enumerate_words(spec: &GroupSpec, depth: usize, cap: usize) -> Result<Vec<WordEntry>> {
    enumerate_words_counted(spec, depth, cap).map(|(entries, _)| entries)
}

/// Reduces a loxodromic or elliptic f to diag(r, 1/r): returns (q, r) with
/// q f q⁻¹ = diag(r, 1/r), |r| ≥ 1 and ties broken by Im r ≥ 0.
pub fn diagonalize_testmap(f: &Mat2C) -> Result<(Mat2C, Complex64)> {
    let kind = classify(f, tol::CLASSIFY_EPS).kind;
    if !matches!(kind, Kind::Elliptic | Kind::Loxodromic) {
        return Err(Error::NotDiagonalizable(kind.to_string()));
    }
    let r = eigenvalue_from_trace(f.trace());
    let v1 = eigenvector(f, r);
    let v2 = eigenvector(f, r.inv());
    let det = v1.0 * v2.1 - v1.1 * v2.0;
    if det.norm() < 1e-12 {
        return Err(Error::NotDiagonalizable(
            "eigenvectors numerically dependent".into(),
        ));
    }
    let s = det.sqrt().inv();
    let q_inv = Mat2C::new_unchecked(v1.0 * s, v2.0 * s, v1.1 * s, v2.1 * s);
    let q = q_inv.inverse();
    let diag = q * *f * q_inv;
    let target = Mat2C::diagonal(r)?;
    let residual = diag.dist(&target);
    if residual > 1e-9 * (1.0 + f.frobenius_norm()) {
        return Err(Error::ToleranceFailure(format!(
            "diagonalization residual {residual:.3e}"
        )));
    }
    Ok((q, r))
}

/// Eigenvector of f for eigenvalue λ, from the better-conditioned of the
/// two null-space formulas, normalized so its largest entry is exactly 1.
fn eigenvector(f: &Mat2C, lambda: Complex64) -> (Complex64, Complex64) {
    let cand1 = (f.b, lambda - f.a);
    let cand2 = (lambda - f.d, f.c);
    let n1 = cand1.0.norm_sqr() + cand1.1.norm_sqr();
    let n2 = cand2.0.norm_sqr() + cand2.1.norm_sqr();
    let v = if n1 >= n2 { cand1 } else { cand2 };
    let lead = if v.0.norm() >= v.1.norm() { v.0 } else { v.1 };
    (v.0 / lead, v.1 / lead)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    NondiscreteWitness,
    NoWitnessUpToDepth,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ScanConfig {
    /// Maximum word length L.
    pub depth: usize,
    /// Near-identity cutoff for elliptic elements.
    pub delta: f64,
    /// Classification and elementarity tolerance.
    pub eps: f64,
    /// Enumeration cap.
    pub cap: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            depth: 8,
            delta: tol::NEAR_IDENTITY_DELTA,
            eps: tol::CLASSIFY_EPS,
            cap: tol::WORD_CAP,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EllipticEntry {
    pub word: String,
    #[serde(with = "complex_pair")]
    pub trace_sq: Complex64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ViolationEntry {
    pub word: String,
    /// The sharper of the two evaluation orders (elliptic-first and
    /// test-map-first).
    pub report: JorgensenReport,
    /// Closed diagonal-form value |tr(g)²−4| + |bc||r−1/r|², recorded as a
    /// cross-check of the general evaluation.
    pub diag_form_value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct NearIdentityEntry {
    pub word: String,
    pub distance: f64,
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct TraceTypeCounts {
    pub type_i: usize,
    pub type_ii: usize,
    pub neither: usize,
}

/// Heuristic evidence for the discrete / dense-in-SL(2,ℂ) /
/// conjugate-dense-in-SL(2,ℝ) trichotomy; never part of the verdict.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct TraceSpread {
    pub real_traces: usize,
    pub nonreal_traces: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct TestMapEcho {
    pub matrix: Mat2C,
    #[serde(with = "complex_pair")]
    pub r: Complex64,
    pub was_diagonal: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    /// Configuration echo so every number in the report is reproducible.
    pub config: ScanConfig,
    pub test_map: TestMapEcho,
    pub depth: usize,
    pub elements_seen: usize,
    pub words_examined: usize,
    pub elliptic_inventory: Vec<EllipticEntry>,
    pub violations: Vec<ViolationEntry>,
    pub near_identity_elliptics: Vec<NearIdentityEntry>,
    pub trace_types: TraceTypeCounts,
    pub trace_spread: TraceSpread,
    pub all_elliptic_order2: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order2_note: Option<String>,
    pub verdict: Verdict,
}

impl ScanReport {
    pub fn has_witness(&self) -> bool {
        matches!(self.verdict, Verdict::NondiscreteWitness)
    }
}

/// Scans the group generated by `spec` against the test map: classifies
/// every enumerated element, evaluates Jørgensen's inequality (in the
/// coordinates where the test map is diagonal) against every elliptic,
/// and collects near-identity elliptics. The verdict is
/// `nondiscrete_witness` iff a violation or a near-identity elliptic was
/// found.
pub fn scan(spec: &GroupSpec, test_map: &TestMap, config: &ScanConfig) -> Result<ScanReport> {
    let kind = classify(&test_map.matrix, config.eps).kind;
    if !matches!(kind, Kind::Elliptic | Kind::Loxodromic) {
        return Err(Error::BadTestMap(kind.to_string()));
    }
    let (q, r) = if test_map.is_diagonal {
        (Mat2C::identity(), test_map.r)
    } else {
        diagonalize_testmap(&test_map.matrix)?
    };
    let f_diag = Mat2C::diagonal(r)?;
    let q_inv = q.inverse();

    let (entries, words_examined) = enumerate_words_counted(spec, config.depth, config.cap)?;

    let mut report = ScanReport {
        config: *config,
        test_map: TestMapEcho {
            matrix: test_map.matrix,
            r,
            was_diagonal: test_map.is_diagonal,
        },
        depth: config.depth,
        elements_seen: entries.len(),
        words_examined,
        elliptic_inventory: Vec::new(),
        violations: Vec::new(),
        near_identity_elliptics: Vec::new(),
        trace_types: TraceTypeCounts::default(),
        trace_spread: TraceSpread::default(),
        all_elliptic_order2: true,
        order2_note: None,
        verdict: Verdict::NoWitnessUpToDepth,
    };

    for entry in &entries {
        let m = &entry.matrix;
        match sl2c_trace_type(m, tol::FORM) {
            TraceType::TypeI => report.trace_types.type_i += 1,
            TraceType::TypeII => report.trace_types.type_ii += 1,
            TraceType::Neither => report.trace_types.neither += 1,
        }
        let t = m.trace();
        if t.im.abs() <= tol::REAL_TRACE * (1.0 + t.norm()) {
            report.trace_spread.real_traces += 1;
        } else {
            report.trace_spread.nonreal_traces += 1;
        }
        let class = classify(m, config.eps);
        if class.kind != Kind::Elliptic {
            continue;
        }
        report.elliptic_inventory.push(EllipticEntry {
            word: entry.word.clone(),
            trace_sq: class.trace_sq,
        });
        if m.trace().norm() > 1e-9 {
            report.all_elliptic_order2 = false;
        }
        let dist = m.dist_to_identity();
        if dist < config.delta {
            report.near_identity_elliptics.push(NearIdentityEntry {
                word: entry.word.clone(),
                distance: dist,
            });
        }
        // move g into the coordinates where the test map is diag(r, 1/r)
        let g = q * *m * q_inv;
        let report_gf = jorgensen_value(&g, &f_diag);
        let report_fg = jorgensen_value(&f_diag, &g);
        let diag_value = jorgensen_diag(&g, r);
        if (report_gf.value - diag_value).abs() > 1e-9 * (1.0 + diag_value) {
            return Err(Error::ToleranceFailure(format!(
                "diagonal-form value {diag_value:.6e} disagrees with general value {:.6e}",
                report_gf.value
            )));
        }
        let tm_value = jorgensen_testmap_form(&g, r);
        if (report_fg.value - tm_value).abs() > 1e-9 * (1.0 + tm_value) {
            return Err(Error::ToleranceFailure(format!(
                "test-map-form value {tm_value:.6e} disagrees with general value {:.6e}",
                report_fg.value
            )));
        }
        let chosen = if report_gf.value <= report_fg.value {
            report_gf
        } else {
            report_fg
        };
        if chosen.violated && non_elementary_certificate(&f_diag, &g, config.eps) {
            report.violations.push(ViolationEntry {
                word: entry.word.clone(),
                report: chosen,
                diag_form_value: diag_value,
            });
        }
    }

    if report.elliptic_inventory.is_empty() {
        report.all_elliptic_order2 = false;
    }
    if report.all_elliptic_order2 {
        report.order2_note = Some(
            "every enumerated elliptic element has order 2 (trace 0); \
             a non-elementary group whose elliptic elements all have order 2 \
             cannot be non-discrete"
                .into(),
        );
    }
    report
        .near_identity_elliptics
        .sort_by(|p, q| p.distance.partial_cmp(&q.distance).unwrap());
    if !report.violations.is_empty() || !report.near_identity_elliptics.is_empty() {
        report.verdict = Verdict::NondiscreteWitness;
    }
    Ok(report)
}
