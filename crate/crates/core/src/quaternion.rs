//! Double-precision arithmetic in the division ring ℍ of real quaternions.
//!
//! `q = w + x𝐢 + y𝐣 + z𝐤` with `𝐢² = 𝐣² = 𝐤² = 𝐢𝐣𝐤 = −1`. Complex numbers
//! are the subring `y = z = 0`; the key anti-commutation rule `𝐣c = c̄𝐣`
//! for complex `c` falls out of the defining relations.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::de::{SeqAccess, Visitor};
use serde::ser::SerializeTuple;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    pub const fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0, 0.0)
    }

    pub const fn one() -> Self {
        Self::new(1.0, 0.0, 0.0, 0.0)
    }

    pub const fn i() -> Self {
        Self::new(0.0, 1.0, 0.0, 0.0)
    }

    pub const fn j() -> Self {
        Self::new(0.0, 0.0, 1.0, 0.0)
    }

    pub const fn k() -> Self {
        Self::new(0.0, 0.0, 0.0, 1.0)
    }

    pub const fn from_real(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    /// Embeds a complex number as `re + im·𝐢`.
    pub const fn from_complex(c: Complex64) -> Self {
        Self::new(c.re, c.im, 0.0, 0.0)
    }

    /// The complex part `w + x𝐢`, discarding the 𝐣 and 𝐤 components.
    pub const fn complex_part(self) -> Complex64 {
        Complex64::new(self.w, self.x)
    }

    /// True when the 𝐣 and 𝐤 components vanish within `tol·(1+|q|)`.
    pub fn is_complex(self, tol: f64) -> bool {
        (self.y * self.y + self.z * self.z).sqrt() <= tol * (1.0 + self.norm())
    }

    /// True when all imaginary components vanish within `tol·(1+|q|)`.
    pub fn is_real(self, tol: f64) -> bool {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt() <= tol * (1.0 + self.norm())
    }

    /// Conjugate q̄: negates the 𝐢, 𝐣, 𝐤 components.
    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    /// Modulus |q| = √(q̄q).
    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    /// Inverse q⁻¹ = q̄·|q|⁻². Errors on the zero quaternion.
    pub fn inv(self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return Err(Error::ZeroDivisor);
        }
        Ok(self.conj() * (1.0 / n2))
    }

    /// Real part ℜ(q) = (q + q̄)/2.
    pub fn re(self) -> f64 {
        self.w
    }

    /// Imaginary part ℑ(q) = (q − q̄)/2, so that `q.re() + q.im() == q`.
    pub fn im(self) -> Self {
        Self::new(0.0, self.x, self.y, self.z)
    }

    /// Componentwise comparison with absolute tolerance.
    pub fn approx_eq(self, other: Self, tol: f64) -> bool {
        (self.w - other.w).abs() <= tol
            && (self.x - other.x).abs() <= tol
            && (self.y - other.y).abs() <= tol
            && (self.z - other.z).abs() <= tol
    }

    /// Unit quaternion q/|q|. Errors on zero.
    pub fn normalized(self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroDivisor);
        }
        Ok(self * (1.0 / n))
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(
            self.w + rhs.w,
            self.x + rhs.x,
            self.y + rhs.y,
            self.z + rhs.z,
        )
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(
            self.w - rhs.w,
            self.x - rhs.x,
            self.y - rhs.y,
            self.z - rhs.z,
        )
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Mul for Quaternion {
    type Output = Self;
    /// Bilinear product under the defining relations; not commutative.
    fn mul(self, rhs: Self) -> Self {
        let (w1, x1, y1, z1) = (self.w, self.x, self.y, self.z);
        let (w2, x2, y2, z2) = (rhs.w, rhs.x, rhs.y, rhs.z);
        Self::new(
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl From<Complex64> for Quaternion {
    fn from(c: Complex64) -> Self {
        Self::from_complex(c)
    }
}

impl From<f64> for Quaternion {
    fn from(w: f64) -> Self {
        Self::from_real(w)
    }
}

/// Text form `w+x i+y j+z k`, e.g. `1-2 i+0.5 j-1 k`.
impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.w)?;
        for (v, unit) in [(self.x, "i"), (self.y, "j"), (self.z, "k")] {
            if v >= 0.0 {
                write!(f, "+{} {}", v, unit)?;
            } else {
                write!(f, "-{} {}", -v, unit)?;
            }
        }
        Ok(())
    }
}

/// JSON wire form is the 4-array `[w, x, y, z]`.
impl Serialize for Quaternion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(4)?;
        t.serialize_element(&self.w)?;
        t.serialize_element(&self.x)?;
        t.serialize_element(&self.y)?;
        t.serialize_element(&self.z)?;
        t.end()
    }
}

impl<'de> Deserialize<'de> for Quaternion {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Quaternion;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a quaternion as [w, x, y, z]")
            }
            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<Quaternion, A::Error> {
                let mut c = [0.0f64; 4];
                for (idx, slot) in c.iter_mut().enumerate() {
                    *slot = seq
                        .next_element()?
                        .ok_or_else(|| serde::de::Error::invalid_length(idx, &self))?;
                }
                if seq.next_element::<f64>()?.is_some() {
                    return Err(serde::de::Error::invalid_length(5, &self));
                }
                Ok(Quaternion::new(c[0], c[1], c[2], c[3]))
            }
        }
        d.deserialize_tuple(4, V)
    }
}
