//! The isometric embedding SL(2,ℂ) → U(1,1;ℍ) by conjugation with
//! T = (1/√2)[[1, −𝐣], [−𝐣, 1]], the ball-model projection z ↦ z₁z₂⁻¹,
//! and detectors for the stabilizer forms of the proper totally geodesic
//! submanifolds of the quaternionic line.

use serde::{Deserialize, Serialize};

use crate::matrix2::{herm_self, HermPair, Mat2C, Mat2H};
use crate::quaternion::Quaternion;
use crate::{tol, Error, Result};

/// T = (1/√2)[[1, −𝐣], [−𝐣, 1]].
pub fn transfer() -> Mat2H {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Mat2H::new_unchecked(
        Quaternion::from_real(s),
        Quaternion::j() * -s,
        Quaternion::j() * -s,
        Quaternion::from_real(s),
    )
}

/// T⁻¹ = (1/√2)[[1, 𝐣], [𝐣, 1]].
pub fn transfer_inv() -> Mat2H {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Mat2H::new_unchecked(
        Quaternion::from_real(s),
        Quaternion::j() * s,
        Quaternion::j() * s,
        Quaternion::from_real(s),
    )
}

/// f ↦ T f T⁻¹, a homomorphism landing in U(1,1;ℍ). Computed as the
/// product of quaternionic matrices, with the two 1/√2 factors combined
/// into a single exact 1/2 so entries like ½ and 1 come out clean.
pub fn embed(f: &Mat2C) -> Mat2H {
    let fq = Mat2H::new_unchecked(
        Quaternion::from_complex(f.a),
        Quaternion::from_complex(f.b),
        Quaternion::from_complex(f.c),
        Quaternion::from_complex(f.d),
    );
    let one = Quaternion::one;
    let j = Quaternion::j;
    let t = Mat2H::new_unchecked(one(), -j(), -j(), one());
    let t_inv = Mat2H::new_unchecked(one(), j(), j(), one());
    (t * fq * t_inv).scale_right(Quaternion::from_real(0.5))
}

/// P(z₁; z₂) = z₁z₂⁻¹, the chart onto the closed quaternionic unit ball.
/// Defined on V₋ ∪ V₀ away from z₂ = 0.
pub fn project_ball(z: &HermPair) -> Result<Quaternion> {
    if z.z2.norm() == 0.0 {
        return Err(Error::PointAtInfinity);
    }
    let v = herm_self(z);
    if v > tol::UNITARY * (1.0 + z.z1.norm_sqr() + z.z2.norm_sqr()) {
        return Err(Error::OutsideBall(v));
    }
    Ok(z.z1 * z.z2.inv()?)
}

/// Tags for the invariant-submanifold stabilizer forms, ordered by
/// strength: H_R1 is strictly strongest; H_C1 and H_I1 are incomparable;
/// H_H1_full means unitary but matching no smaller form in the given
/// coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FormTag {
    #[serde(rename = "H_R1")]
    HR1,
    #[serde(rename = "H_C1")]
    HC1,
    #[serde(rename = "H_I1")]
    HI1,
    #[serde(rename = "H_H1_full")]
    HH1Full,
    #[serde(rename = "none_detected")]
    NoneDetected,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubmanifoldType {
    pub tag: FormTag,
    /// Present iff tag = H_I1: sign of the form [[a, b], [−εb, εa]].
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<i8>,
    /// Present iff tag = H_R1: the unit-quaternion factor of the first
    /// element's g = Aλ factorization.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Quaternion>,
    /// Weaker tags that also fit every element (e.g. H_I1 when the primary
    /// tag is H_C1).
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub also_fits: Vec<FormTag>,
}

fn entry_scale(q: Quaternion) -> f64 {
    1.0 + q.norm()
}

/// g = Aλ with A real: recover λ as the polar part of the first entry with
/// non-negligible modulus, then demand all entries of gλ⁻¹ real.
fn real_factor(g: &Mat2H, tolerance: f64) -> Option<Quaternion> {
    let lead = g
        .entries()
        .into_iter()
        .find(|q| q.norm() > tolerance.max(1e-12))?;
    let mut lambda = lead.normalized().ok()?;
    // sign-normalize so the factor is deterministic
    for comp in [lambda.w, lambda.x, lambda.y, lambda.z] {
        if comp > 1e-12 {
            break;
        }
        if comp < -1e-12 {
            lambda = -lambda;
            break;
        }
    }
    let inv = lambda.conj(); // |λ| = 1
    let all_real = g
        .entries()
        .into_iter()
        .all(|q| (q * inv).is_real(tolerance));
    all_real.then_some(lambda)
}

fn fits_complex(g: &Mat2H, tolerance: f64) -> bool {
    g.entries().into_iter().all(|q| q.is_complex(tolerance))
}

/// The imaginary-type stabilizer shape [[a, b], [−εb, εa]]: d = εa, c = −εb.
fn fits_imaginary_type(g: &Mat2H, epsilon: f64, tolerance: f64) -> bool {
    let d_res = (g.d - g.a * epsilon).norm() <= tolerance * entry_scale(g.a);
    let c_res = (g.c + g.b * epsilon).norm() <= tolerance * entry_scale(g.b);
    d_res && c_res
}

/// Reports the strongest stabilizer form that every input matrix matches
/// in the given coordinates; no conjugation search is performed. Inputs
/// that fail the unitarity check yield `none_detected`.
pub fn detect_form(gs: &[Mat2H], tolerance: f64) -> SubmanifoldType {
    let none = SubmanifoldType {
        tag: FormTag::NoneDetected,
        epsilon: None,
        lambda: None,
        also_fits: Vec::new(),
    };
    if gs.is_empty()
        || gs
            .iter()
            .any(|g| !g.is_unitary11(tolerance.max(tol::UNITARY)))
    {
        return none;
    }

    let lambdas: Option<Vec<Quaternion>> = gs.iter().map(|g| real_factor(g, tolerance)).collect();
    let complex_fit = gs.iter().all(|g| fits_complex(g, tolerance));
    let eps_fit: Vec<(bool, bool)> = gs
        .iter()
        .map(|g| {
            (
                fits_imaginary_type(g, 1.0, tolerance),
                fits_imaginary_type(g, -1.0, tolerance),
            )
        })
        .collect();
    let imaginary_fit = eps_fit.iter().all(|&(p, m)| p || m);
    let epsilon = if imaginary_fit {
        // ε of the first element that pins the sign down; +1 if every
        // element is compatible with both signs
        Some(
            eps_fit
                .iter()
                .find(|&&(p, m)| p != m)
                .map(|&(p, _)| if p { 1i8 } else { -1i8 })
                .unwrap_or(1),
        )
    } else {
        None
    };

    if let Some(ls) = lambdas {
        let mut also = Vec::new();
        if complex_fit {
            also.push(FormTag::HC1);
        }
        if imaginary_fit {
            also.push(FormTag::HI1);
        }
        return SubmanifoldType {
            tag: FormTag::HR1,
            epsilon: None,
            lambda: Some(ls[0]),
            also_fits: also,
        };
    }
    if complex_fit {
        let also = if imaginary_fit {
            vec![FormTag::HI1]
        } else {
            Vec::new()
        };
        return SubmanifoldType {
            tag: FormTag::HC1,
            epsilon: None,
            lambda: None,
            also_fits: also,
        };
    }
    if imaginary_fit {
        return SubmanifoldType {
            tag: FormTag::HI1,
            epsilon,
            lambda: None,
            also_fits: Vec::new(),
        };
    }
    SubmanifoldType {
        tag: FormTag::HH1Full,
        epsilon: None,
        lambda: None,
        also_fits: Vec::new(),
    }
}

/// Trace-restriction classes of SL(2,ℂ) elements whose embeddings land in
/// the imaginary-type stabilizer: type_i has a,d real and b,c purely
/// imaginary (ε = +1); type_ii has a,d purely imaginary and b,c real
/// (ε = −1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TraceType {
    #[serde(rename = "type_i")]
    TypeI,
    #[serde(rename = "type_ii")]
    TypeII,
    #[serde(rename = "neither")]
    Neither,
}

impl std::fmt::Display for TraceType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            TraceType::TypeI => "type_i",
            TraceType::TypeII => "type_ii",
            TraceType::Neither => "neither",
        };
        f.write_str(s)
    }
}

pub fn sl2c_trace_type(g: &Mat2C, tolerance: f64) -> TraceType {
    let real = |z: num_complex::Complex64| z.im.abs() <= tolerance * (1.0 + z.norm());
    let imag = |z: num_complex::Complex64| z.re.abs() <= tolerance * (1.0 + z.norm());
    if real(g.a) && real(g.d) && imag(g.b) && imag(g.c) {
        TraceType::TypeI
    } else if imag(g.a) && imag(g.d) && real(g.b) && real(g.c) {
        TraceType::TypeII
    } else {
        TraceType::Neither
    }
}

/// |ℜ tr(g) − ℜ tr(f g f⁻¹)|, which vanishes for unitary f.
pub fn re_trace_invariance_check(g: &Mat2H, f: &Mat2H) -> Result<f64> {
    let finv = f.uinv()?;
    let conj = *f * *g * finv;
    Ok((g.trace().re() - conj.trace().re()).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix2::herm;
    use crate::sample::{random_sl2c, random_unitary};
    use num_complex::Complex64;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Independent expansion of T f T⁻¹ using 𝐣c = c̄𝐣:
    /// ½[[a+d̄+(b−c̄)𝐣, b+c̄+(a−d̄)𝐣], [b̄+c+(d−ā)𝐣, ā+d+(c−b̄)𝐣]].
    fn embed_closed_form(f: &Mat2C) -> Mat2H {
        let half = 0.5;
        let ent = |s: Complex64, t: Complex64| {
            (Quaternion::from_complex(s) + Quaternion::from_complex(t) * Quaternion::j()) * half
        };
        Mat2H::new_unchecked(
            ent(f.a + f.d.conj(), f.b - f.c.conj()),
            ent(f.b + f.c.conj(), f.a - f.d.conj()),
            ent(f.b.conj() + f.c, f.d - f.a.conj()),
            ent(f.a.conj() + f.d, f.c - f.b.conj()),
        )
    }

    #[test]
    fn transfer_inverts() {
        let prod = transfer() * transfer_inv();
        assert!(prod.dist(&Mat2H::identity()) < 1e-12);
        // T itself is not in U(1,1;H): it carries the form it preserves
        // onto J. What must hold is T*JT = [[0,−j],[j,0]], the form that
        // every complex SL(2,C) matrix preserves, so that TfT⁻¹ preserves
        // J. Check that pullback directly.
        let t = transfer();
        let j = Quaternion::j();
        let g11 = t.a.conj() * t.a - t.c.conj() * t.c;
        let g12 = t.a.conj() * t.b - t.c.conj() * t.d;
        let g21 = t.b.conj() * t.a - t.d.conj() * t.c;
        let g22 = t.b.conj() * t.b - t.d.conj() * t.d;
        assert!(g11.approx_eq(Quaternion::zero(), 1e-15));
        assert!(g12.approx_eq(-j, 1e-15));
        assert!(g21.approx_eq(j, 1e-15));
        assert!(g22.approx_eq(Quaternion::zero(), 1e-15));
    }

    #[test]
    fn embed_examples() {
        assert!(embed(&Mat2C::identity()).dist(&Mat2H::identity()) < 1e-15);

        // diag(r, 1/r) with r real embeds to
        // [[(r+1/r)/2, ((r−1/r)/2)j], [−((r−1/r)/2)j, (r+1/r)/2]]
        let r = 2.0;
        let g = Mat2C::from_real(r, 0.0, 0.0, 1.0 / r).unwrap();
        let e = embed(&g);
        let p = (r + 1.0 / r) / 2.0;
        let m = (r - 1.0 / r) / 2.0;
        let expect = Mat2H::new_unchecked(
            Quaternion::from_real(p),
            Quaternion::j() * m,
            Quaternion::j() * -m,
            Quaternion::from_real(p),
        );
        assert!(e.dist(&expect) < 1e-15);
        assert!(e.is_unitary11(1e-12));
        // its quaternionic trace is the real number r + 1/r = 2.5
        assert!(e.trace().approx_eq(Quaternion::from_real(2.5), 1e-12));

        // the parabolic [[1,1],[0,1]]: value fixed by the independent
        // expansion, ½[[2+j, 1],[1, 2−j]], and verified unitary
        let par = Mat2C::from_real(1.0, 1.0, 0.0, 1.0).unwrap();
        let e = embed(&par);
        let expect = Mat2H::new_unchecked(
            Quaternion::new(1.0, 0.0, 0.5, 0.0),
            Quaternion::from_real(0.5),
            Quaternion::from_real(0.5),
            Quaternion::new(1.0, 0.0, -0.5, 0.0),
        );
        assert!(e.dist(&expect) < 1e-15);
        assert!(e.dist(&embed_closed_form(&par)) < 1e-15);
        assert!(e.is_unitary11(1e-12));
    }

    #[test]
    fn embed_matches_closed_form_on_random_input() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..200 {
            let g = random_sl2c(&mut rng);
            let e = embed(&g);
            assert!(e.dist(&embed_closed_form(&g)) < 1e-12 * (1.0 + e.frobenius_norm()));
            assert!(e.is_unitary11(1e-9));
        }
    }

    #[test]
    fn embed_is_homomorphism() {
        let mut rng = StdRng::seed_from_u64(6);
        for _ in 0..200 {
            let g = random_sl2c(&mut rng);
            let h = random_sl2c(&mut rng);
            let lhs = embed(&(g * h));
            let rhs = embed(&g) * embed(&h);
            assert!(lhs.dist(&rhs) < 1e-10 * (1.0 + lhs.frobenius_norm()));
            let inv_embed = embed(&g.inverse());
            assert!(inv_embed.dist(&embed(&g).uinv().unwrap()) < 1e-10);
        }
    }

    #[test]
    fn project_ball_examples() {
        let center = HermPair::new(Quaternion::zero(), Quaternion::one());
        assert_eq!(project_ball(&center).unwrap(), Quaternion::zero());

        let inside = HermPair::new(Quaternion::j() * 0.5, Quaternion::one());
        let p = project_ball(&inside).unwrap();
        assert!(p.approx_eq(Quaternion::j() * 0.5, 1e-15));
        assert!(p.norm() < 1.0);

        // a null vector lands on the unit sphere
        let t = Quaternion::from_real(0.7);
        let dir = Quaternion::new(1.0, 1.0, 0.0, 0.0) * std::f64::consts::FRAC_1_SQRT_2;
        let null = HermPair::new(dir * t, t);
        let p = project_ball(&null).unwrap();
        assert!((p.norm() - 1.0).abs() < 1e-12);

        let infinity = HermPair::new(Quaternion::one(), Quaternion::zero());
        assert!(matches!(
            project_ball(&infinity),
            Err(Error::PointAtInfinity)
        ));
        let outside = HermPair::new(Quaternion::from_real(2.0), Quaternion::one());
        assert!(matches!(project_ball(&outside), Err(Error::OutsideBall(_))));
    }

    #[test]
    fn project_ball_is_equivariant() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..100 {
            let u = random_unitary(&mut rng);
            let z = HermPair::new(
                Quaternion::new(
                    rng.gen_range(-0.4..0.4),
                    rng.gen_range(-0.4..0.4),
                    rng.gen_range(-0.4..0.4),
                    rng.gen_range(-0.4..0.4),
                ),
                Quaternion::one(),
            );
            let p = project_ball(&z).unwrap();
            let moved = project_ball(&u.apply(&z)).unwrap();
            let formula = (u.a * p + u.b) * (u.c * p + u.d).inv().expect("denominator nonzero");
            assert!((moved - formula).norm() < 1e-8 * (1.0 + moved.norm()));
        }
    }

    #[test]
    fn form_invariance_under_embedding() {
        let mut rng = StdRng::seed_from_u64(8);
        for _ in 0..100 {
            let g = embed(&random_sl2c(&mut rng));
            let z = HermPair::new(Quaternion::new(0.1, -0.2, 0.3, 0.0), Quaternion::one());
            let w = HermPair::new(Quaternion::new(0.4, 0.1, 0.0, -0.3), Quaternion::one());
            let before = herm(&z, &w);
            let after = herm(&g.apply(&z), &g.apply(&w));
            assert!((before - after).norm() < 1e-9 * (1.0 + before.norm()));
        }
    }

    #[test]
    fn detect_form_examples() {
        let tolerance = tol::FORM;
        // {I} is the real form with λ = 1
        let res = detect_form(&[Mat2H::identity()], tolerance);
        assert_eq!(res.tag, FormTag::HR1);
        assert_eq!(res.lambda.unwrap(), Quaternion::one());

        // {embed(diag(2,1/2))} has real diagonal and pure-j off-diagonal:
        // the imaginary-type shape with ε = +1, and nothing stronger
        let g = embed(&Mat2C::from_real(2.0, 0.0, 0.0, 0.5).unwrap());
        let res = detect_form(&[g], tolerance);
        assert_eq!(res.tag, FormTag::HI1);
        assert_eq!(res.epsilon, Some(1));

        // a sample of embedded SL(2,ℝ) matrices: entries pick up 𝐣
        // components, no smaller form fits in these coordinates
        let sample = [
            Mat2C::from_real(1.0, 1.0, 0.0, 1.0).unwrap(),
            Mat2C::from_real(2.0, 1.0, 1.0, 1.0).unwrap(),
            Mat2C::from_real(1.0, 0.0, 1.0, 1.0).unwrap(),
        ];
        for m in &sample {
            let e = embed(m);
            // brute-force form matching: some entry is neither complex nor
            // fitting the imaginary-type shape for either sign
            assert!(e.entries().iter().any(|q| !q.is_complex(tolerance)));
            assert!(!fits_imaginary_type(&e, 1.0, tolerance));
            assert!(!fits_imaginary_type(&e, -1.0, tolerance));
            assert!(real_factor(&e, tolerance).is_none());
        }
        let embedded: Vec<Mat2H> = sample.iter().map(embed).collect();
        let res = detect_form(&embedded, tolerance);
        assert_eq!(res.tag, FormTag::HH1Full);

        // SU(1,1) elements embed to themselves; a = cosh t, b = i sinh t is
        // simultaneously complex and of imaginary-type shape, so the
        // primary tag is H_C1 with H_I1 recorded as also fitting
        let t = 0.8f64;
        let su = Mat2C::new(
            c(t.cosh(), 0.0),
            c(0.0, t.sinh()),
            c(0.0, -t.sinh()),
            c(t.cosh(), 0.0),
        )
        .unwrap();
        let res = detect_form(&[embed(&su)], tolerance);
        assert_eq!(res.tag, FormTag::HC1);
        assert_eq!(res.also_fits, vec![FormTag::HI1]);

        // non-unitary input is refused, and so is an empty list
        let res = detect_form(
            &[Mat2H::new_unchecked(
                Quaternion::from_real(2.0),
                Quaternion::zero(),
                Quaternion::zero(),
                Quaternion::from_real(2.0),
            )],
            tolerance,
        );
        assert_eq!(res.tag, FormTag::NoneDetected);
        assert_eq!(detect_form(&[], tolerance).tag, FormTag::NoneDetected);
    }

    #[test]
    fn trace_type_examples() {
        let tolerance = tol::FORM;
        let g = Mat2C::from_real(2.0, 0.0, 0.0, 0.5).unwrap();
        assert_eq!(sl2c_trace_type(&g, tolerance), TraceType::TypeI);
        let s = Mat2C::from_real(0.0, 1.0, -1.0, 0.0).unwrap();
        assert_eq!(sl2c_trace_type(&s, tolerance), TraceType::TypeII);
        let rot = Mat2C::diagonal(Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)).unwrap();
        assert_eq!(sl2c_trace_type(&rot, tolerance), TraceType::Neither);
    }

    #[test]
    fn trace_type_roundtrip_through_embedding() {
        let mut rng = StdRng::seed_from_u64(9);
        let tolerance = 1e-10;
        for _ in 0..100 {
            // type_i: a,d real, b,c imaginary, det 1
            let g = random_type_i(&mut rng);
            assert_eq!(sl2c_trace_type(&g, tolerance), TraceType::TypeI);
            let e = embed(&g);
            assert!(fits_imaginary_type(&e, 1.0, tolerance));
            assert!(e.is_unitary11(1e-9));

            // type_ii: a,d imaginary, b,c real
            let g = random_type_ii(&mut rng);
            assert_eq!(sl2c_trace_type(&g, tolerance), TraceType::TypeII);
            let e = embed(&g);
            assert!(fits_imaginary_type(&e, -1.0, tolerance));

            // generic matrices fail the imaginary-type shape for both signs
            let g = random_generic(&mut rng);
            assert_eq!(sl2c_trace_type(&g, 1e-8), TraceType::Neither);
            let e = embed(&g);
            assert!(!fits_imaginary_type(&e, 1.0, 1e-8));
            assert!(!fits_imaginary_type(&e, -1.0, 1e-8));
        }
    }

    fn random_type_i(rng: &mut StdRng) -> Mat2C {
        // a real, b = iβ, c = iγ; d = (1+bc)/a = (1−βγ)/a stays real
        loop {
            let a = rng.gen_range(0.3..1.5) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let beta = rng.gen_range(-1.0..1.0);
            let gamma = rng.gen_range(-1.0..1.0);
            let d = (1.0 - beta * gamma) / a;
            if let Ok(m) = Mat2C::new(c(a, 0.0), c(0.0, beta), c(0.0, gamma), c(d, 0.0)) {
                return m;
            }
        }
    }

    fn random_type_ii(rng: &mut StdRng) -> Mat2C {
        // a = iα, d = iδ, b, c real: det = −αδ − bc = 1
        loop {
            let alpha = rng.gen_range(0.3..1.5) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let b = rng.gen_range(-1.0..1.0);
            let cc = rng.gen_range(-1.0..1.0);
            let delta = -(1.0 + b * cc) / alpha;
            if let Ok(m) = Mat2C::new(c(0.0, alpha), c(b, 0.0), c(cc, 0.0), c(0.0, delta)) {
                return m;
            }
        }
    }

    fn random_generic(rng: &mut StdRng) -> Mat2C {
        // entries with both parts bounded away from zero
        loop {
            let part = |rng: &mut StdRng| {
                let v = rng.gen_range(0.3..1.2);
                if rng.gen_bool(0.5) {
                    v
                } else {
                    -v
                }
            };
            let a = c(part(rng), part(rng));
            let b = c(part(rng), part(rng));
            let cc = c(part(rng), part(rng));
            let d = (Complex64::new(1.0, 0.0) + b * cc) / a;
            if d.re.abs() > 0.2 && d.im.abs() > 0.2 {
                if let Ok(m) = Mat2C::new(a, b, cc, d) {
                    return m;
                }
            }
        }
    }

    #[test]
    fn re_trace_is_invariant() {
        let mut rng = StdRng::seed_from_u64(10);
        let id_res =
            re_trace_invariance_check(&Mat2H::identity(), &random_unitary(&mut rng)).unwrap();
        assert!(id_res < 1e-12);
        for _ in 0..200 {
            let g = random_unitary(&mut rng);
            let f = random_unitary(&mut rng);
            let res = re_trace_invariance_check(&g, &f).unwrap();
            assert!(res <= 1e-9 * (1.0 + g.trace().norm()));
        }
        // consistency with the complex trace of the unembedded element
        for _ in 0..50 {
            let h = random_sl2c(&mut rng);
            let k = random_sl2c(&mut rng);
            let g = embed(&h);
            let f = embed(&k);
            assert!((g.trace().re() - h.trace().re).abs() < 1e-12 * (1.0 + h.trace().norm()));
            let res = re_trace_invariance_check(&g, &f).unwrap();
            assert!(res <= 1e-9 * (1.0 + g.trace().norm()));
        }
        // the invariance does not need g unitary: only f
        let arbitrary = |rng: &mut StdRng| {
            let mut q = || {
                Quaternion::new(
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                )
            };
            Mat2H::new_unchecked(q(), q(), q(), q())
        };
        let mut max_im_drift = 0.0f64;
        for _ in 0..100 {
            let g = arbitrary(&mut rng);
            let f = random_unitary(&mut rng);
            let res = re_trace_invariance_check(&g, &f).unwrap();
            assert!(res <= 1e-9 * (1.0 + g.trace().norm()));
            // while the real part is pinned, the full quaternion trace
            // moves under conjugation
            let conj = f * g * f.uinv().unwrap();
            max_im_drift = max_im_drift.max((g.trace().im() - conj.trace().im()).norm());
        }
        assert!(max_im_drift > 1e-3, "imaginary drift {max_im_drift}");
    }
}
