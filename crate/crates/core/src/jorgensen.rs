//! Jørgensen's inequality: for a non-elementary discrete group ⟨f, g⟩,
//! |tr²(f) − 4| + |tr[f,g] − 2| ≥ 1. A value below 1 on a certified
//! non-elementary pair is a witness that the pair generates a
//! non-discrete group. For a diagonal test map f = diag(r, 1/r) the
//! commutator term collapses to |bc|·|r − 1/r|².

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classify::{classify, commutator, is_elementary_pair, Kind};
use crate::matrix2::{complex_pair, Mat2C};
use crate::{tol, Error, Result};

/// The fixed transformation paired against every elliptic element of the
/// scanned group. Loxodromic or elliptic by construction.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TestMap {
    pub matrix: Mat2C,
    /// Eigenvalue with |r| ≥ 1 (ties broken by Im r ≥ 0).
    #[serde(with = "complex_pair")]
    pub r: Complex64,
    pub is_diagonal: bool,
}

impl TestMap {
    /// diag(r, 1/r). Rejects r = 0 and r = ±1 (the matrix must be
    /// loxodromic or elliptic, never parabolic or ±I).
    pub fn diagonal(r: Complex64) -> Result<Self> {
        let matrix = Mat2C::diagonal(r)?;
        let kind = classify(&matrix, tol::CLASSIFY_EPS).kind;
        if !matches!(kind, Kind::Elliptic | Kind::Loxodromic) {
            return Err(Error::BadTestMap(kind.to_string()));
        }
        Ok(Self {
            matrix,
            r: canonical_eigenvalue(r),
            is_diagonal: true,
        })
    }

    /// Wraps a general loxodromic or elliptic matrix; the eigenvalue comes
    /// from the trace (t = r + 1/r).
    pub fn from_matrix(matrix: Mat2C) -> Result<Self> {
        let kind = classify(&matrix, tol::CLASSIFY_EPS).kind;
        if !matches!(kind, Kind::Elliptic | Kind::Loxodromic) {
            return Err(Error::BadTestMap(kind.to_string()));
        }
        let r = eigenvalue_from_trace(matrix.trace());
        let is_diagonal = matrix.b.norm() <= tol::DET
            && matrix.c.norm() <= tol::DET
            && (matrix.a - r).norm() <= tol::DET * (1.0 + r.norm());
        Ok(Self {
            matrix,
            r,
            is_diagonal,
        })
    }
}

/// Solves r + 1/r = t for the representative with |r| ≥ 1, ties broken by
/// Im r ≥ 0.
pub fn eigenvalue_from_trace(t: Complex64) -> Complex64 {
    let disc = (t * t - Complex64::new(4.0, 0.0)).sqrt();
    let r1 = (t + disc) * 0.5;
    let r2 = (t - disc) * 0.5;
    let (n1, n2) = (r1.norm(), r2.norm());
    if (n1 - n2).abs() <= 1e-12 * (1.0 + n1) {
        if r1.im >= 0.0 {
            r1
        } else {
            r2
        }
    } else if n1 > n2 {
        r1
    } else {
        r2
    }
}

/// The {r, 1/r} representative with |r| ≥ 1; on the unit circle (where
/// the moduli tie) the one with Im r ≥ 0.
pub fn canonical_eigenvalue(r: Complex64) -> Complex64 {
    let n = r.norm();
    if (n - 1.0).abs() <= 1e-12 * (1.0 + n) {
        if r.im >= 0.0 {
            r
        } else {
            r.inv()
        }
    } else if n >= 1.0 {
        r
    } else {
        r.inv()
    }
}

/// One evaluation of the inequality for an ordered pair.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct JorgensenReport {
    /// |tr²(f) − 4| + |tr[f,g] − 2|.
    pub value: f64,
    pub term_trace: f64,
    pub term_comm: f64,
    /// value < 1 on a non-elementary pair: a non-discreteness certificate.
    pub violated: bool,
    pub pair_elementary: bool,
    /// value within [1, 1 + 1e−6]: satisfied, but by float-level margin.
    pub tight: bool,
}

/// Evaluates |tr²(f) − 4| + |tr[f,g] − 2|. The first argument contributes
/// the trace term. `violated` requires the pair to be non-elementary; a
/// bare value < 1 on an elementary pair is reported as not violated
/// (the inequality's hypothesis fails there).
pub fn jorgensen_value(f: &Mat2C, g: &Mat2C) -> JorgensenReport {
    let two = Complex64::new(2.0, 0.0);
    let four = Complex64::new(4.0, 0.0);
    let tr_f = f.trace();
    let term_trace = (tr_f * tr_f - four).norm();
    let term_comm = (commutator(f, g).trace() - two).norm();
    let value = term_trace + term_comm;
    let pair_elementary = is_elementary_pair(f, g, tol::CLASSIFY_EPS).elementary;
    JorgensenReport {
        value,
        term_trace,
        term_comm,
        violated: value < 1.0 && !pair_elementary,
        pair_elementary,
        tight: (1.0..=1.0 + tol::TIGHT_BAND).contains(&value),
    }
}

/// The diagonal-test-map form: |tr(g)² − 4| + |bc|·|r − 1/r|², equal to
/// `jorgensen_value(g, diag(r, 1/r)).value`.
pub fn jorgensen_diag(g: &Mat2C, r: Complex64) -> f64 {
    let four = Complex64::new(4.0, 0.0);
    let t = g.trace();
    let rdiff = r - r.inv();
    (t * t - four).norm() + (g.b * g.c).norm() * rdiff.norm_sqr()
}

/// The test-map-first form (1 + |bc|)·|r − 1/r|², equal to
/// `jorgensen_value(diag(r, 1/r), g).value`.
pub fn jorgensen_testmap_form(g: &Mat2C, r: Complex64) -> f64 {
    let rdiff = r - r.inv();
    (1.0 + (g.b * g.c).norm()) * rdiff.norm_sqr()
}

/// Residual of the identity tr[g, diag(r,1/r)] − 2 = −bc(r − 1/r)², with
/// the commutator trace computed by brute-force matrix products.
/// Contract: ≤ 1e−9·(1 + |bc||r − 1/r|²).
pub fn commutator_trace_identity_check(g: &Mat2C, r: Complex64) -> Result<f64> {
    let f = Mat2C::diagonal(r)?;
    let two = Complex64::new(2.0, 0.0);
    let rdiff = r - r.inv();
    let lhs = commutator(g, &f).trace() - two;
    let rhs = -(g.b * g.c) * rdiff * rdiff;
    Ok((lhs - rhs).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::random_sl2c;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rotation90() -> Mat2C {
        Mat2C::from_real(0.0, 1.0, -1.0, 0.0).unwrap()
    }

    fn diag2() -> Mat2C {
        Mat2C::from_real(2.0, 0.0, 0.0, 0.5).unwrap()
    }

    #[test]
    fn identity_pair_is_elementary_with_value_zero() {
        let id = Mat2C::identity();
        let report = jorgensen_value(&id, &id);
        assert_eq!(report.value, 0.0);
        assert!(report.pair_elementary);
        assert!(!report.violated);
    }

    #[test]
    fn diag_and_rotation_pair() {
        // f = diag(2, 1/2), g = rotation90: |6.25−4| + 2.25 = 4.5
        let report = jorgensen_value(&diag2(), &rotation90());
        assert!((report.term_trace - 2.25).abs() < 1e-12);
        assert!((report.term_comm - 2.25).abs() < 1e-12);
        assert!((report.value - 4.5).abs() < 1e-12);
        assert!(!report.violated);
        assert!(!report.pair_elementary);

        // the g-first diagonal form: |0−4| + |−1|·2.25 = 6.25
        let v = jorgensen_diag(&rotation90(), c(2.0, 0.0));
        assert!((v - 6.25).abs() < 1e-12);
        let general = jorgensen_value(&rotation90(), &diag2());
        assert!((v - general.value).abs() < 1e-12);
        // and the f-first closed form (1+|bc|)|r−1/r|² = 4.5
        let w = jorgensen_testmap_form(&rotation90(), c(2.0, 0.0));
        assert!((w - 4.5).abs() < 1e-12);
        assert!((w - report.value).abs() < 1e-12);
    }

    #[test]
    fn constructed_violation() {
        // elliptic g with tr² = 3.9 and bc = 0.01, paired with the
        // loxodromic diag(e^0.01, e^-0.01): value ≈ 0.1 + 0.01·|r−1/r|² < 1
        let t = (3.9f64).sqrt();
        let disc = c(t * t - 4.04, 0.0).sqrt(); // a,d = (t ± √(t²−4.04))/2
        let a = (c(t, 0.0) + disc) * 0.5;
        let d = (c(t, 0.0) - disc) * 0.5;
        let g = Mat2C::new(a, c(0.1, 0.0), c(0.1, 0.0), d).unwrap();
        assert_eq!(classify(&g, tol::CLASSIFY_EPS).kind, Kind::Elliptic);

        let r = c(0.01f64.exp(), 0.0);
        let f = Mat2C::diagonal(r).unwrap();
        let report = jorgensen_value(&g, &f);
        let expected_comm = 0.01 * (r - r.inv()).norm_sqr();
        assert!((report.term_trace - 0.1).abs() < 1e-9);
        assert!((report.term_comm - expected_comm).abs() < 1e-9);
        assert!(report.value < 1.0);
        assert!(!report.pair_elementary);
        assert!(report.violated);
    }

    #[test]
    fn diag_form_examples() {
        // vanishing second term when b = 0
        let g = Mat2C::from_real(2.0, 0.0, 3.0, 0.5).unwrap();
        let t = g.trace();
        let expect = (t * t - c(4.0, 0.0)).norm();
        assert!((jorgensen_diag(&g, c(1.7, 0.3)) - expect).abs() < 1e-12);

        // elliptic with tr² = 3.5 and |bc| → 0 approaches 0.5
        let t = (3.5f64).sqrt();
        let bc = 1e-12;
        let disc = c(t * t - 4.0 * (1.0 + bc), 0.0).sqrt();
        let a = (c(t, 0.0) + disc) * 0.5;
        let d = (c(t, 0.0) - disc) * 0.5;
        let g = Mat2C::new(a, c(bc, 0.0), c(1.0, 0.0), d).unwrap();
        let v = jorgensen_diag(&g, c(2.0, 0.0));
        assert!((v - 0.5).abs() < 1e-10);
        assert!(v < 1.0);
        // for elliptic real trace the trace term is exactly 4 − t²
        let report = jorgensen_value(&g, &diag2());
        assert!((report.term_trace - (4.0 - t * t)).abs() < 1e-9);
    }

    #[test]
    fn diag_form_matches_general_form() {
        let mut rng = StdRng::seed_from_u64(51);
        for _ in 0..500 {
            let g = random_sl2c(&mut rng);
            let r = sample_r(&mut rng);
            let f = Mat2C::diagonal(r).unwrap();
            let diag = jorgensen_diag(&g, r);
            let general = jorgensen_value(&g, &f).value;
            assert!(
                (diag - general).abs() <= 1e-9 * (1.0 + diag),
                "diag {diag} general {general}"
            );
            let tm = jorgensen_testmap_form(&g, r);
            let general_fg = jorgensen_value(&f, &g).value;
            assert!((tm - general_fg).abs() <= 1e-9 * (1.0 + tm));
        }
    }

    #[test]
    fn commutator_identity_examples() {
        assert!(commutator_trace_identity_check(&Mat2C::identity(), c(2.0, 0.0)).unwrap() < 1e-15);
        // rotation90 with r = 2: tr[g,f] = 4.25, −bc(r−1/r)² = 2.25
        let res = commutator_trace_identity_check(&rotation90(), c(2.0, 0.0)).unwrap();
        assert!(res < 1e-12);
    }

    #[test]
    fn commutator_identity_random() {
        let mut rng = StdRng::seed_from_u64(52);
        for _ in 0..1000 {
            let g = random_sl2c(&mut rng);
            let r = sample_r(&mut rng);
            let rdiff = r - r.inv();
            let bound = 1e-9 * (1.0 + (g.b * g.c).norm() * rdiff.norm_sqr());
            let res = commutator_trace_identity_check(&g, r).unwrap();
            assert!(res <= bound, "residual {res} exceeds {bound}");
        }
    }

    #[test]
    fn value_is_conjugation_invariant() {
        let mut rng = StdRng::seed_from_u64(53);
        for _ in 0..200 {
            let f = random_sl2c(&mut rng);
            let g = random_sl2c(&mut rng);
            let h = random_sl2c(&mut rng);
            let v1 = jorgensen_value(&f, &g).value;
            let v2 = jorgensen_value(&(h * f * h.inverse()), &(h * g * h.inverse())).value;
            assert!((v1 - v2).abs() <= 1e-9 * (1.0 + v1));
        }
    }

    #[test]
    fn tight_band() {
        // trace term 1 + 1e−7 with commutator term 0 (g = I): take a
        // matrix of trace τ with τ² = 5 + 1e−7
        let tau = (5.0f64 + 1e-7).sqrt();
        let f = Mat2C::from_real(tau, -1.0, 1.0, 0.0).unwrap();
        let report = jorgensen_value(&f, &Mat2C::identity());
        assert!(report.tight, "value {} not in the tight band", report.value);
        assert!(!report.violated);
    }

    #[test]
    fn testmap_constructors() {
        let tm = TestMap::diagonal(c(2.0, 0.0)).unwrap();
        assert!(tm.is_diagonal);
        assert_eq!(tm.r, c(2.0, 0.0));
        // |r| < 1 is stored as the representative with |r| ≥ 1
        let tm = TestMap::diagonal(c(0.5, 0.0)).unwrap();
        assert_eq!(tm.r, c(2.0, 0.0));
        assert!(TestMap::diagonal(c(1.0, 0.0)).is_err());
        assert!(TestMap::diagonal(c(-1.0, 0.0)).is_err());

        let tm = TestMap::from_matrix(rotation90()).unwrap();
        assert!(!tm.is_diagonal);
        assert!((tm.r - c(0.0, 1.0)).norm() < 1e-12);
        let parabolic = Mat2C::from_real(1.0, 1.0, 0.0, 1.0).unwrap();
        assert!(matches!(
            TestMap::from_matrix(parabolic),
            Err(Error::BadTestMap(_))
        ));
    }

    fn sample_r(rng: &mut StdRng) -> Complex64 {
        // |r| log-uniform in [0.1, 10], bounded away from the unit circle
        // or given a genuine angle so diag(r,1/r) stays non-parabolic
        loop {
            let mag = (rng.gen_range(-1.0f64..1.0) * std::f64::consts::LN_10).exp();
            let r = Complex64::from_polar(mag, rng.gen_range(0.0..std::f64::consts::TAU));
            let m = Mat2C::diagonal(r).unwrap();
            if !m.is_pm_identity(1e-3)
                && !matches!(classify(&m, tol::CLASSIFY_EPS).kind, Kind::Parabolic)
            {
                return r;
            }
        }
    }

    #[test]
    fn report_serializes_with_all_fields() {
        let report = jorgensen_value(&diag2(), &rotation90());
        let json = serde_json::to_value(report).unwrap();
        for key in [
            "value",
            "term_trace",
            "term_comm",
            "violated",
            "pair_elementary",
            "tight",
        ] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
    }
}
