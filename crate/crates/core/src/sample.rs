//! Seeded random sampling of group elements, shared by the property checks
//! of the `check-identities` command and by the test suites.

use num_complex::Complex64;
use rand::Rng;

use crate::embed::embed;
use crate::matrix2::{Mat2C, Mat2H};
use crate::quaternion::Quaternion;

/// A random complex number in the square [-1,1]².
pub fn random_complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// A random element of SL(2,ℂ): a, b, c sampled from the unit square with
/// |a| bounded away from zero, d = (1+bc)/a. Entry magnitudes stay below
/// ~7 so products of a few factors keep full double precision.
pub fn random_sl2c<R: Rng>(rng: &mut R) -> Mat2C {
    let a = loop {
        let a = random_complex(rng);
        if a.norm() > 0.3 {
            break a;
        }
    };
    let b = random_complex(rng);
    let c = random_complex(rng);
    let d = (Complex64::new(1.0, 0.0) + b * c) / a;
    Mat2C::new(a, b, c, d).expect("det is 1 by construction")
}

/// A random unit quaternion (uniform on S³ by normalized Gaussian-free
/// rejection sampling from the 4-cube).
pub fn random_unit_quaternion<R: Rng>(rng: &mut R) -> Quaternion {
    loop {
        let q = Quaternion::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let n = q.norm();
        if n > 1e-3 && n <= 1.0 {
            return q * (1.0 / n);
        }
    }
}

/// A random element of U(1,1;ℍ) that is not confined to the embedded copy
/// of SL(2,ℂ): embed(g)·diag(λ,μ)·embed(h) with unit quaternions λ, μ.
pub fn random_unitary<R: Rng>(rng: &mut R) -> Mat2H {
    let g = embed(&random_sl2c(rng));
    let h = embed(&random_sl2c(rng));
    let lambda = random_unit_quaternion(rng);
    let mu = random_unit_quaternion(rng);
    let middle = Mat2H::new_unchecked(lambda, Quaternion::zero(), Quaternion::zero(), mu);
    g * middle * h
}

/// A random elliptic element with the given rotation angle, conjugated by a
/// random SL(2,ℂ) element so its axis is in general position.
pub fn random_elliptic<R: Rng>(rng: &mut R, theta: f64) -> Mat2C {
    let rot = Mat2C::diagonal(Complex64::from_polar(1.0, theta)).expect("unit r");
    let h = random_sl2c(rng);
    h * rot * h.inverse()
}

/// A random eigenvalue for a diagonal test map: modulus log-uniform in
/// [0.1, 10], uniform angle.
pub fn random_eigenvalue<R: Rng>(rng: &mut R) -> Complex64 {
    let mag = (rng.gen_range(-1.0f64..1.0) * std::f64::consts::LN_10).exp();
    Complex64::from_polar(mag, rng.gen_range(0.0..std::f64::consts::TAU))
}
