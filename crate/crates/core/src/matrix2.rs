//! 2×2 matrices over ℂ and ℍ, the indefinite Hermitian form
//! ⟨z,w⟩ = w*Jz with J = diag(1,−1), and membership checks for
//! SL(2,ℂ) and U(1,1;ℍ).
//!
//! Quaternionic matrices act on column vectors by left multiplication;
//! scalars multiply vector entries on the right, so the projection
//! z ↦ z₁z₂⁻¹ is equivariant.

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::quaternion::Quaternion;
use crate::{tol, Error, Result};

/// Serde adapter: a complex number on the wire is the pair `[re, im]`.
pub mod complex_pair {
    use super::*;

    pub fn serialize<S: Serializer>(c: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
        [c.re, c.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

/// An element of SL(2,ℂ): row-major entries with det = ad − bc = 1,
/// checked at construction within `tol::DET`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2C {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Mat2C {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let m = Self { a, b, c, d };
        let residual = (m.det() - Complex64::new(1.0, 0.0)).norm();
        if residual > tol::DET {
            return Err(Error::NotSl2C {
                residual,
                tol: tol::DET,
            });
        }
        Ok(m)
    }

    /// Real-entry convenience constructor.
    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Self::new(
            Complex64::new(a, 0.0),
            Complex64::new(b, 0.0),
            Complex64::new(c, 0.0),
            Complex64::new(d, 0.0),
        )
    }

    /// Skips the determinant check. For products of validated matrices,
    /// where the group operation preserves det 1 up to rounding.
    pub(crate) fn new_unchecked(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::new_unchecked(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        )
    }

    /// diag(r, 1/r).
    pub fn diagonal(r: Complex64) -> Result<Self> {
        if r.norm() == 0.0 {
            return Err(Error::NotSl2C {
                residual: 1.0,
                tol: tol::DET,
            });
        }
        Ok(Self::new_unchecked(
            r,
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            r.inv(),
        ))
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// tr(g) = a + d.
    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    /// Adjugate inverse; exact for det = 1.
    pub fn inverse(&self) -> Self {
        Self::new_unchecked(self.d, -self.b, -self.c, self.a)
    }

    pub fn neg(&self) -> Self {
        Self::new_unchecked(-self.a, -self.b, -self.c, -self.d)
    }

    pub fn frobenius_norm(&self) -> f64 {
        (self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr() + self.d.norm_sqr()).sqrt()
    }

    pub fn dist(&self, other: &Self) -> f64 {
        ((self.a - other.a).norm_sqr()
            + (self.b - other.b).norm_sqr()
            + (self.c - other.c).norm_sqr()
            + (self.d - other.d).norm_sqr())
        .sqrt()
    }

    /// Distance to ±I, whichever sign is closer (g and −g are the same
    /// Möbius transformation).
    pub fn dist_to_identity(&self) -> f64 {
        let id = Self::identity();
        self.dist(&id).min(self.neg().dist(&id))
    }

    /// True when the matrix is ±I within `eps` in Frobenius norm.
    pub fn is_pm_identity(&self, eps: f64) -> bool {
        self.dist_to_identity() <= eps
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Möbius action z ↦ (az+b)/(cz+d) on a finite point.
    pub fn moebius(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }
}

impl Mul for Mat2C {
    type Output = Mat2C;
    fn mul(self, rhs: Mat2C) -> Mat2C {
        Mat2C::new_unchecked(
            self.a * rhs.a + self.b * rhs.c,
            self.a * rhs.b + self.b * rhs.d,
            self.c * rhs.a + self.d * rhs.c,
            self.c * rhs.b + self.d * rhs.d,
        )
    }
}

impl Mul for &Mat2C {
    type Output = Mat2C;
    fn mul(self, rhs: &Mat2C) -> Mat2C {
        *self * *rhs
    }
}

impl fmt::Display for Mat2C {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}{:+}i, {}{:+}i], [{}{:+}i, {}{:+}i]]",
            self.a.re, self.a.im, self.b.re, self.b.im, self.c.re, self.c.im, self.d.re, self.d.im
        )
    }
}

/// Wire form: `[[[re,im],[re,im]],[[re,im],[re,im]]]`, row-major.
impl Serialize for Mat2C {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [
            [[self.a.re, self.a.im], [self.b.re, self.b.im]],
            [[self.c.re, self.c.im], [self.d.re, self.d.im]],
        ]
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mat2C {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = <[[[f64; 2]; 2]; 2]>::deserialize(d)?;
        let e = |p: [f64; 2]| Complex64::new(p[0], p[1]);
        Mat2C::new(e(rows[0][0]), e(rows[0][1]), e(rows[1][0]), e(rows[1][1]))
            .map_err(|err| D::Error::custom(err.to_string()))
    }
}

/// Residuals of the unitarity conditions for a quaternionic matrix:
/// the Gram residual ‖g*Jg − J‖_F and the five entry relations
/// |a|=|d|, |b|=|c|, |a|²−|c|²=1, āb=c̄d, ac̄=bd̄.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct UnitarityReport {
    pub gram_residual: f64,
    pub relation_residuals: [f64; 5],
}

impl UnitarityReport {
    pub fn max_relation_residual(&self) -> f64 {
        self.relation_residuals.iter().cloned().fold(0.0, f64::max)
    }
}

/// An element of U(1,1;ℍ): quaternionic entries with g*Jg = J, checked at
/// construction within `tol::UNITARY` (Frobenius norm of the residual).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2H {
    pub a: Quaternion,
    pub b: Quaternion,
    pub c: Quaternion,
    pub d: Quaternion,
}

impl Mat2H {
    pub fn new(a: Quaternion, b: Quaternion, c: Quaternion, d: Quaternion) -> Result<Self> {
        let m = Self { a, b, c, d };
        let residual = m.unitarity_report().gram_residual;
        if residual > tol::UNITARY {
            return Err(Error::NotUnitary {
                residual,
                tol: tol::UNITARY,
            });
        }
        Ok(m)
    }

    /// Skips the form check; for raw arithmetic (products of validated
    /// elements, or candidates that are about to be tested).
    pub fn new_unchecked(a: Quaternion, b: Quaternion, c: Quaternion, d: Quaternion) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::new_unchecked(
            Quaternion::one(),
            Quaternion::zero(),
            Quaternion::zero(),
            Quaternion::one(),
        )
    }

    /// tr(g) = a + d. A quaternion; only its real part is a conjugation
    /// invariant.
    pub fn trace(&self) -> Quaternion {
        self.a + self.d
    }

    /// Closed-form inverse J⁻¹g*J = [[ā, −c̄], [−b̄, d̄]], valid for
    /// elements of U(1,1;ℍ).
    pub fn uinv(&self) -> Result<Self> {
        let report = self.unitarity_report();
        if report.gram_residual > tol::UNITARY {
            return Err(Error::NotUnitary {
                residual: report.gram_residual,
                tol: tol::UNITARY,
            });
        }
        Ok(Self::new_unchecked(
            self.a.conj(),
            -self.c.conj(),
            -self.b.conj(),
            self.d.conj(),
        ))
    }

    /// g*Jg − J residual together with the five relation residuals.
    pub fn unitarity_report(&self) -> UnitarityReport {
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        // (g*Jg)_{ij} = conj(g_{1i})·g_{1j} − conj(g_{2i})·g_{2j}
        let r11 = a.conj() * a - c.conj() * c - Quaternion::one();
        let r12 = a.conj() * b - c.conj() * d;
        let r21 = b.conj() * a - d.conj() * c;
        let r22 = b.conj() * b - d.conj() * d + Quaternion::one();
        let gram = (r11.norm_sqr() + r12.norm_sqr() + r21.norm_sqr() + r22.norm_sqr()).sqrt();
        let relations = [
            (a.norm() - d.norm()).abs(),
            (b.norm() - c.norm()).abs(),
            (a.norm_sqr() - c.norm_sqr() - 1.0).abs(),
            (a.conj() * b - c.conj() * d).norm(),
            (a * c.conj() - b * d.conj()).norm(),
        ];
        UnitarityReport {
            gram_residual: gram,
            relation_residuals: relations,
        }
    }

    /// True iff ‖g*Jg − J‖_F ≤ tol.
    pub fn is_unitary11(&self, tolerance: f64) -> bool {
        self.unitarity_report().gram_residual <= tolerance
    }

    /// Left action on a column vector.
    pub fn apply(&self, z: &HermPair) -> HermPair {
        HermPair {
            z1: self.a * z.z1 + self.b * z.z2,
            z2: self.c * z.z1 + self.d * z.z2,
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        (self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr() + self.d.norm_sqr()).sqrt()
    }

    pub fn dist(&self, other: &Self) -> f64 {
        ((self.a - other.a).norm_sqr()
            + (self.b - other.b).norm_sqr()
            + (self.c - other.c).norm_sqr()
            + (self.d - other.d).norm_sqr())
        .sqrt()
    }

    pub fn entries(&self) -> [Quaternion; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Entrywise scalar multiplication on the right.
    pub fn scale_right(&self, s: Quaternion) -> Self {
        Self::new_unchecked(self.a * s, self.b * s, self.c * s, self.d * s)
    }
}

impl Mul for Mat2H {
    type Output = Mat2H;
    /// Quaternion entries multiply in left-to-right order as written.
    fn mul(self, rhs: Mat2H) -> Mat2H {
        Mat2H::new_unchecked(
            self.a * rhs.a + self.b * rhs.c,
            self.a * rhs.b + self.b * rhs.d,
            self.c * rhs.a + self.d * rhs.c,
            self.c * rhs.b + self.d * rhs.d,
        )
    }
}

impl Mul for &Mat2H {
    type Output = Mat2H;
    fn mul(self, rhs: &Mat2H) -> Mat2H {
        *self * *rhs
    }
}

/// Wire form: row-major with quaternion entries as `[w,x,y,z]`.
impl Serialize for Mat2H {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [[self.a, self.b], [self.c, self.d]].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mat2H {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = <[[Quaternion; 2]; 2]>::deserialize(d)?;
        Ok(Mat2H::new_unchecked(
            rows[0][0], rows[0][1], rows[1][0], rows[1][1],
        ))
    }
}

/// A column vector in ℍ^{1,1}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HermPair {
    pub z1: Quaternion,
    pub z2: Quaternion,
}

impl HermPair {
    pub fn new(z1: Quaternion, z2: Quaternion) -> Self {
        Self { z1, z2 }
    }
}

/// ⟨z,w⟩ = w*Jz = w̄₁z₁ − w̄₂z₂.
pub fn herm(z: &HermPair, w: &HermPair) -> Quaternion {
    w.z1.conj() * z.z1 - w.z2.conj() * z.z2
}

/// ⟨z,z⟩, which is always real: |z₁|² − |z₂|². Negative inside V₋, zero on
/// the null cone V₀.
pub fn herm_self(z: &HermPair) -> f64 {
    z.z1.norm_sqr() - z.z2.norm_sqr()
}
