//! Classification of SL(2,ℂ) elements by squared trace, Möbius fixed
//! points on the Riemann sphere, commutators, and the elementary-pair
//! detector that gates every Jørgensen violation.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::matrix2::{complex_pair, Mat2C};
use crate::{tol, Error, Result};

/// Conjugacy type of a Möbius transformation. ±I are collapsed to
/// `Identity`; every criterion downstream depends only on tr².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Identity,
    Elliptic,
    Parabolic,
    Loxodromic,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Kind::Identity => "identity",
            Kind::Elliptic => "elliptic",
            Kind::Parabolic => "parabolic",
            Kind::Loxodromic => "loxodromic",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ElementClass {
    pub kind: Kind,
    /// Set when the squared trace sits within `eps` of a class boundary.
    pub borderline: bool,
    #[serde(with = "complex_pair")]
    pub trace_sq: Complex64,
}

/// Classify by trace: elliptic for real trace in (−2,2), parabolic for
/// tr² = 4 (non-identity), loxodromic otherwise. `eps` is the boundary
/// band; ±I detection uses it as a Frobenius cutoff directly.
pub fn classify(g: &Mat2C, eps: f64) -> ElementClass {
    let t = g.trace();
    let trace_sq = t * t;
    if g.is_pm_identity(eps) {
        return ElementClass {
            kind: Kind::Identity,
            borderline: false,
            trace_sq,
        };
    }
    let t_norm = t.norm();
    let is_real = t.im.abs() <= tol::REAL_TRACE * (1.0 + t_norm);
    let near_real = t.im.abs() <= eps * (1.0 + t_norm);
    let mut borderline = (trace_sq - Complex64::new(4.0, 0.0)).norm() <= eps;
    let kind = if is_real {
        let tsq = t.re * t.re;
        if (tsq - 4.0).abs() <= eps {
            borderline = true;
            Kind::Parabolic
        } else if tsq < 4.0 {
            Kind::Elliptic
        } else {
            Kind::Loxodromic
        }
    } else {
        // non-real trace, but flag traces that a wider band would call real
        if near_real && t.re.abs() < 2.0 {
            borderline = true;
        }
        Kind::Loxodromic
    };
    ElementClass {
        kind,
        borderline,
        trace_sq,
    }
}

/// A point of the Riemann sphere Ĉ = ℂ ∪ {∞}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SpherePoint {
    Finite {
        #[serde(with = "complex_pair")]
        value: Complex64,
    },
    Infinity,
}

impl SpherePoint {
    pub fn finite(z: Complex64) -> Self {
        SpherePoint::Finite { value: z }
    }

    /// Chordal metric on the sphere; bounded by 2.
    pub fn chordal_dist(&self, other: &SpherePoint) -> f64 {
        match (self, other) {
            (SpherePoint::Infinity, SpherePoint::Infinity) => 0.0,
            (SpherePoint::Finite { value: z }, SpherePoint::Infinity)
            | (SpherePoint::Infinity, SpherePoint::Finite { value: z }) => {
                2.0 / (1.0 + z.norm_sqr()).sqrt()
            }
            (SpherePoint::Finite { value: z }, SpherePoint::Finite { value: w }) => {
                2.0 * (z - w).norm() / ((1.0 + z.norm_sqr()) * (1.0 + w.norm_sqr())).sqrt()
            }
        }
    }

    /// Möbius image under g.
    pub fn apply(&self, g: &Mat2C) -> SpherePoint {
        match self {
            SpherePoint::Infinity => {
                if g.c.norm() == 0.0 {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::finite(g.a / g.c)
                }
            }
            SpherePoint::Finite { value: z } => {
                let den = g.c * z + g.d;
                if den.norm() < 1e-14 * (1.0 + (g.c * z).norm()) {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::finite((g.a * z + g.b) / den)
                }
            }
        }
    }
}

/// Fixed points of a non-identity Möbius transformation: one for a
/// parabolic, two otherwise.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixedPoints {
    pub points: Vec<SpherePoint>,
}

/// Solves cz² + (d−a)z − b = 0 for the fixed points of z ↦ (az+b)/(cz+d).
/// ∞ is fixed exactly when c = 0. Errors on ±I.
pub fn fixed_points(g: &Mat2C) -> Result<FixedPoints> {
    if g.is_pm_identity(tol::CLASSIFY_EPS) {
        return Err(Error::IdentityFixedPoints);
    }
    let parabolic = matches!(classify(g, tol::CLASSIFY_EPS).kind, Kind::Parabolic);
    let points = if g.c.norm() == 0.0 {
        let mut pts = vec![SpherePoint::Infinity];
        if !parabolic {
            // second root of the linear equation (d−a)z = b
            pts.push(SpherePoint::finite(g.b / (g.d - g.a)));
        }
        pts
    } else {
        let (z1, z2) = quadratic_roots(g.c, g.d - g.a, -g.b);
        if parabolic {
            // double root; average for symmetry
            vec![SpherePoint::finite((z1 + z2) * 0.5)]
        } else {
            vec![SpherePoint::finite(z1), SpherePoint::finite(z2)]
        }
    };
    Ok(FixedPoints { points })
}

/// Numerically stable roots of az² + bz + c = 0 with a ≠ 0: the larger
/// root from the quadratic formula with anti-cancellation sign, the other
/// from the product of roots.
pub(crate) fn quadratic_roots(a: Complex64, b: Complex64, c: Complex64) -> (Complex64, Complex64) {
    let disc = b * b - 4.0 * a * c;
    let mut sq = disc.sqrt();
    // pick the sign that avoids cancellation in b + sq
    if (b.conj() * sq).re < 0.0 {
        sq = -sq;
    }
    let q = -(b + sq) * 0.5;
    if q.norm() == 0.0 {
        // b = 0 and disc = 0: double root at 0... or both roots ±sqrt(-c/a)
        let r = (-c / a).sqrt();
        return (r, -r);
    }
    (q / a, c / q)
}

/// [f,g] = f g f⁻¹ g⁻¹.
pub fn commutator(f: &Mat2C, g: &Mat2C) -> Mat2C {
    *f * *g * f.inverse() * g.inverse()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ElementaryReason {
    CommonFixedPoint,
    CommutatorTrace2,
    BothEllipticCommonAxis,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ElementaryCheck {
    pub elementary: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<ElementaryReason>,
}

/// Detects the elementary two-generator configurations that Jørgensen's
/// inequality does not constrain: a shared fixed point, commutator trace 2
/// (a reducible pair), or two elliptics with a common axis. Sound for the
/// witnesses we report, but may miss exotic finite groups; callers that
/// certify violations must re-check with `non_elementary_certificate`.
pub fn is_elementary_pair(f: &Mat2C, g: &Mat2C, eps: f64) -> ElementaryCheck {
    if f.is_pm_identity(eps) || g.is_pm_identity(eps) {
        // a pair containing ±I generates a cyclic group
        return ElementaryCheck {
            elementary: true,
            reason: Some(ElementaryReason::CommonFixedPoint),
        };
    }
    let fp_f = fixed_points(f).ok();
    let fp_g = fixed_points(g).ok();
    if let (Some(pf), Some(pg)) = (&fp_f, &fp_g) {
        let fp_eps = eps.max(1e-8);
        let shared = pf
            .points
            .iter()
            .any(|p| pg.points.iter().any(|q| p.chordal_dist(q) <= fp_eps));
        if shared {
            let both_elliptic =
                classify(f, eps).kind == Kind::Elliptic && classify(g, eps).kind == Kind::Elliptic;
            let same_axis = both_elliptic
                && pf.points.len() == 2
                && pg.points.len() == 2
                && pf
                    .points
                    .iter()
                    .all(|p| pg.points.iter().any(|q| p.chordal_dist(q) <= fp_eps));
            return ElementaryCheck {
                elementary: true,
                reason: Some(if same_axis {
                    ElementaryReason::BothEllipticCommonAxis
                } else {
                    ElementaryReason::CommonFixedPoint
                }),
            };
        }
    }
    let comm_trace = commutator(f, g).trace();
    if (comm_trace - Complex64::new(2.0, 0.0)).norm() <= eps {
        return ElementaryCheck {
            elementary: true,
            reason: Some(ElementaryReason::CommutatorTrace2),
        };
    }
    ElementaryCheck {
        elementary: false,
        reason: None,
    }
}

/// The strict double criterion used before certifying a violation:
/// disjoint fixed-point sets AND commutator trace bounded away from 2.
pub fn non_elementary_certificate(f: &Mat2C, g: &Mat2C, eps: f64) -> bool {
    let (Ok(pf), Ok(pg)) = (fixed_points(f), fixed_points(g)) else {
        return false;
    };
    let fp_eps = eps.max(1e-8);
    let disjoint = pf
        .points
        .iter()
        .all(|p| pg.points.iter().all(|q| p.chordal_dist(q) > fp_eps));
    let comm = commutator(f, g).trace();
    disjoint && (comm - Complex64::new(2.0, 0.0)).norm() > fp_eps
}
