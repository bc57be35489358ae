//! The conjugation construction that kills the (1,2) entry: solve
//! −cz² + (d−a)z + b = 0 for β, conjugate by h = [[1, β], [0, 1]], and
//! perturb β to produce a sequence g_n with b_n c_n → 0. Includes the
//! corrected closed form of h g h⁻¹ at the midpoint β = (d−a)/(2c),
//! whose (1,2) entry is ((a+d)² − 4)/(4c) rather than zero.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classify::quadratic_roots;
use crate::matrix2::{complex_pair, Mat2C};
use crate::{Error, Result};

/// Both roots of −cz² + (d−a)z + b = 0. Requires c ≠ 0; the caller (or
/// `conj_kill`, which pre-swaps) must handle the degenerate cases.
pub fn solve_beta(g: &Mat2C) -> Result<(Complex64, Complex64)> {
    if g.c.norm() == 0.0 {
        if (g.d - g.a).norm() == 0.0 && g.b.norm() > 0.0 {
            return Err(Error::DegenerateConjugation);
        }
        return Err(Error::QuadraticNeedsC);
    }
    Ok(quadratic_roots(-g.c, g.d - g.a, g.b))
}

/// The canonical root: smaller modulus, ties broken by larger real part,
/// then larger imaginary part.
pub fn canonical_beta(roots: (Complex64, Complex64)) -> Complex64 {
    let (r1, r2) = roots;
    let (n1, n2) = (r1.norm(), r2.norm());
    if (n1 - n2).abs() > 1e-12 * (1.0 + n1.max(n2)) {
        return if n1 < n2 { r1 } else { r2 };
    }
    if (r1.re - r2.re).abs() > 1e-12 * (1.0 + r1.re.abs().max(r2.re.abs())) {
        return if r1.re > r2.re { r1 } else { r2 };
    }
    if r1.im >= r2.im {
        r1
    } else {
        r2
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConjugationResult {
    /// The chosen root of the quadratic (for the effective matrix).
    #[serde(with = "complex_pair")]
    pub beta: Complex64,
    /// The full conjugating element: [[1, β], [0, 1]], composed with the
    /// swap [[0,1],[-1,0]] first when `pre_swapped`.
    pub h: Mat2C,
    /// h g h⁻¹, lower triangular within tolerance.
    pub g_conj: Mat2C,
    /// |(g_conj)₁₂|.
    pub residual_12: f64,
    /// Set when c = 0 forced a pre-conjugation swapping the roles of b
    /// and c.
    pub pre_swapped: bool,
}

fn upper_triangular(beta: Complex64) -> Mat2C {
    Mat2C::new_unchecked(
        Complex64::new(1.0, 0.0),
        beta,
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
    )
}

fn swap_matrix() -> Mat2C {
    Mat2C::from_real(0.0, 1.0, -1.0, 0.0).expect("det 1")
}

/// Conjugates g to lower-triangular form. When c = 0 and b ≠ 0 the matrix
/// is first conjugated by s = [[0,1],[-1,0]], which swaps the roles of b
/// and c (up to sign); when b = c = 0 the matrix is already diagonal and
/// h = I is returned.
pub fn conj_kill(g: &Mat2C) -> Result<ConjugationResult> {
    if g.is_pm_identity(crate::tol::CLASSIFY_EPS) {
        return Err(Error::IdentityFixedPoints);
    }
    if g.c.norm() == 0.0 && g.b.norm() == 0.0 {
        return Ok(ConjugationResult {
            beta: Complex64::new(0.0, 0.0),
            h: Mat2C::identity(),
            g_conj: *g,
            residual_12: 0.0,
            pre_swapped: false,
        });
    }
    let (effective, pre_swapped) = if g.c.norm() == 0.0 {
        let s = swap_matrix();
        (s * *g * s.inverse(), true)
    } else {
        (*g, false)
    };
    let beta = canonical_beta(solve_beta(&effective)?);
    let tri = upper_triangular(beta);
    let h = if pre_swapped {
        tri * swap_matrix()
    } else {
        tri
    };
    let g_conj = h * *g * h.inverse();
    Ok(ConjugationResult {
        beta,
        h,
        g_conj,
        residual_12: g_conj.b.norm(),
        pre_swapped,
    })
}

/// Conjugates by h with β = (d−a)/(2c) and returns the Frobenius distance
/// between the brute-force product h g h⁻¹ and the closed form
/// [[(a+d)/2, ((a+d)²−4)/(4c)], [c, (a+d)/2]].
pub fn midpoint_conjugation_check(g: &Mat2C) -> Result<f64> {
    if g.c.norm() == 0.0 {
        return Err(Error::QuadraticNeedsC);
    }
    let beta = (g.d - g.a) / (g.c * 2.0);
    let h = upper_triangular(beta);
    let brute = h * *g * h.inverse();
    let t = g.a + g.d;
    let closed = Mat2C::new_unchecked(
        t * 0.5,
        (t * t - Complex64::new(4.0, 0.0)) / (g.c * 4.0),
        g.c,
        t * 0.5,
    );
    Ok(brute.dist(&closed))
}

#[derive(Debug, Clone, Serialize)]
pub struct PerturbedSequence {
    pub elements: Vec<Mat2C>,
    /// The constant C = (1 + |2cβ| + |d−a|)·|c| with |b_n c_n| ≤ C·|ε_n|
    /// for small ε (when β is an exact root).
    pub bound_coefficient: f64,
}

/// g_n = h_n g h_n⁻¹ with h_n = [[1, β+ε_n], [0, 1]]. With β a root of the
/// quadratic, b_n = ε_n(d − a − 2cβ) − cε_n², so b_n c_n → 0 linearly in
/// ε_n (quadratically when β is a double root).
pub fn perturbed_sequence(g: &Mat2C, beta: Complex64, eps_schedule: &[f64]) -> PerturbedSequence {
    let elements = eps_schedule
        .iter()
        .map(|&eps| {
            let h = upper_triangular(beta + Complex64::new(eps, 0.0));
            h * *g * h.inverse()
        })
        .collect();
    let bound_coefficient = (1.0 + (g.c * beta * 2.0).norm() + (g.d - g.a).norm()) * g.c.norm();
    PerturbedSequence {
        elements,
        bound_coefficient,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayRegime {
    /// d − a − 2cβ ≠ 0: |b_n c_n| decays like ε.
    FirstOrder,
    /// β is a double root: |b_n c_n| decays like ε².
    SecondOrder,
}

/// Which decay regime the perturbation analysis of `perturbed_sequence`
/// is in: second order exactly when the linear coefficient d − a − 2cβ
/// vanishes (β at the vertex of the quadratic).
pub fn decay_regime(g: &Mat2C, beta: Complex64) -> DecayRegime {
    let linear = g.d - g.a - g.c * beta * 2.0;
    let scale = 1.0 + (g.d - g.a).norm() + (g.c * beta * 2.0).norm();
    if linear.norm() <= 1e-9 * scale {
        DecayRegime::SecondOrder
    } else {
        DecayRegime::FirstOrder
    }
}
