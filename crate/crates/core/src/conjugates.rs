//! Certified comparison of all complex roots of a polynomial against a
//! designated real root.
//!
//! The fast path runs simultaneous (Durand–Kerner) iteration in `f64` and
//! certifies each approximation with a Newton-residual inclusion disk; the
//! disks decide strictly-inside/strictly-outside questions. Boundary ties
//! (conjugates exactly on the modulus circle, as in `x^3 - 8`) are decided
//! exactly through the pairwise root-product resultant.

use num_traits::{Signed, ToPrimitive};

use crate::algebraic::{
    isolate_real_roots, largest_real_root, multiplicity_of_root, RealAlgebraicNumber,
};
use crate::error::DdError;
use crate::unipoly::{root_product_poly, IntPoly};

/// Outcome of a modulus-domination test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModulusVerdict {
    Yes,
    No,
    /// Could not be decided within the precision/degree caps. Carries the
    /// precision (bits) attained.
    Inconclusive(u32),
}

/// Decides whether every root `μ ≠ λ` of `p` satisfies `|μ| < λ` (`strict`)
/// or `|μ| ≤ λ` (non-strict). `λ` must be a root of `p`.
pub fn conjugates_within_modulus(
    p: &IntPoly,
    lambda: &RealAlgebraicNumber,
    strict: bool,
    precision_bits: u32,
) -> Result<ModulusVerdict, DdError> {
    let sf = p.squarefree_part();
    let n = sf
        .degree()
        .ok_or_else(|| DdError::domain("zero polynomial has no roots"))?;
    if !lambda.is_root_of(&sf) {
        return Err(DdError::domain("lambda is not a root of the polynomial"));
    }
    if n == 1 {
        return Ok(ModulusVerdict::Yes);
    }
    if lambda.sign() <= 0 {
        // every other root has non-negative modulus; λ ≤ 0 can only dominate
        // when there are no other roots, handled above
        return Ok(ModulusVerdict::No);
    }

    // exact treatment of the real roots
    let real_roots = isolate_real_roots(&sf);
    let mut seen_lambda = false;
    let mut real_tie = false;
    for r in &real_roots {
        if r == lambda {
            seen_lambda = true;
            continue;
        }
        let a = r.abs();
        match a.compare(lambda) {
            std::cmp::Ordering::Greater => return Ok(ModulusVerdict::No),
            std::cmp::Ordering::Equal => real_tie = true,
            std::cmp::Ordering::Less => {}
        }
    }
    debug_assert!(seen_lambda);
    if strict && real_tie {
        return Ok(ModulusVerdict::No);
    }
    let complex_pairs = (n - real_roots.len()) / 2;
    if complex_pairs == 0 {
        return Ok(ModulusVerdict::Yes);
    }

    // fast path: certified inclusion disks
    if let Some(verdict) = try_disks(&sf, lambda, &real_roots) {
        return Ok(verdict);
    }

    // exact path via the pairwise root-product polynomial
    if n > 24 {
        return Ok(ModulusVerdict::Inconclusive(precision_bits));
    }
    let q = root_product_poly(&sf);
    let lambda_sq = lambda.square();
    let biggest = largest_real_root(&q)
        .ok_or_else(|| DdError::internal("root-product polynomial lost its real roots"))?;
    match biggest.compare(&lambda_sq) {
        std::cmp::Ordering::Greater => Ok(ModulusVerdict::No),
        std::cmp::Ordering::Less => Err(DdError::internal(
            "lambda^2 exceeds the largest root of the product polynomial",
        )),
        std::cmp::Ordering::Equal => {
            if !strict {
                return Ok(ModulusVerdict::Yes);
            }
            // multiplicity 1 means no other root pair multiplies to λ²,
            // i.e. no conjugate sits exactly on the circle |z| = λ
            if multiplicity_of_root(&q, &lambda_sq) == 1 {
                Ok(ModulusVerdict::Yes)
            } else {
                Ok(ModulusVerdict::No)
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Cplx {
    re: f64,
    im: f64,
}

impl Cplx {
    fn new(re: f64, im: f64) -> Self {
        Cplx { re, im }
    }
    fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }
    fn add(self, o: Cplx) -> Cplx {
        Cplx::new(self.re + o.re, self.im + o.im)
    }
    fn sub(self, o: Cplx) -> Cplx {
        Cplx::new(self.re - o.re, self.im - o.im)
    }
    fn mul(self, o: Cplx) -> Cplx {
        Cplx::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
    fn div(self, o: Cplx) -> Cplx {
        let d = o.re * o.re + o.im * o.im;
        Cplx::new(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )
    }
}

/// Horner evaluation with a running error bound: returns `(p(z), bound)`
/// such that the true value differs from the computed one by at most
/// `bound` (up to second-order rounding terms, absorbed in the slop factor).
fn eval_with_error(coeffs: &[f64], z: Cplx) -> (Cplx, f64) {
    let mut acc = Cplx::new(0.0, 0.0);
    let mut mag = 0.0f64;
    let za = z.abs();
    for &c in coeffs.iter().rev() {
        acc = acc.mul(z).add(Cplx::new(c, 0.0));
        mag = mag * za + c.abs();
    }
    let u = f64::EPSILON;
    let n = coeffs.len() as f64;
    (acc, (2.0 * n + 2.0) * u * mag * 1.0001)
}

/// Attempt a decision with inclusion disks. Returns `None` whenever anything
/// is too close to call; the exact path then takes over.
fn try_disks(
    sf: &IntPoly,
    lambda: &RealAlgebraicNumber,
    real_roots: &[RealAlgebraicNumber],
) -> Option<ModulusVerdict> {
    let n = sf.degree()?;
    let coeffs: Vec<f64> = sf
        .coeffs
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::INFINITY))
        .collect();
    if coeffs.iter().any(|c| !c.is_finite() || c.abs() > 9e15) {
        return None;
    }
    let deriv: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * i as f64)
        .collect();

    // Durand-Kerner iteration
    let bound = sf.cauchy_bound().to_f64()?;
    let mut zs: Vec<Cplx> = (0..n)
        .map(|k| {
            let angle = 0.7 + 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            Cplx::new(
                0.7 * bound * angle.cos(),
                0.7 * bound * angle.sin() + 0.1,
            )
        })
        .collect();
    let lead = *coeffs.last()?;
    for _ in 0..400 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let (pv, _) = eval_with_error(&coeffs, zs[i]);
            let mut denom = Cplx::new(lead, 0.0);
            for j in 0..n {
                if j != i {
                    denom = denom.mul(zs[i].sub(zs[j]));
                }
            }
            if denom.abs() < 1e-300 {
                return None;
            }
            let step = pv.div(denom);
            zs[i] = zs[i].sub(step);
            delta = delta.max(step.abs());
        }
        if delta < 1e-14 * (1.0 + bound) {
            break;
        }
    }

    // Newton-residual inclusion disks
    let mut radii = Vec::with_capacity(n);
    for &z in &zs {
        let (pv, pe) = eval_with_error(&coeffs, z);
        let (dv, de) = eval_with_error(&deriv, z);
        let dmag = dv.abs() - de;
        if dmag <= 0.0 {
            return None;
        }
        let r = (n as f64) * (pv.abs() + pe) / dmag * (1.0 + 1e-9);
        if !r.is_finite() {
            return None;
        }
        radii.push(r);
    }
    // pairwise disjoint => exactly one root per disk
    for i in 0..n {
        for j in i + 1..n {
            if zs[i].sub(zs[j]).abs() <= (radii[i] + radii[j]) * (1.0 + 1e-9) {
                return None;
            }
        }
    }

    // assign disks to the exactly-known real roots (λ included)
    let mut assigned = vec![false; n];
    for r in real_roots {
        let rv = r.to_f64();
        let mut hit = None;
        for i in 0..n {
            if zs[i].sub(Cplx::new(rv, 0.0)).abs() <= radii[i] * (1.0 + 1e-9) {
                if hit.is_some() {
                    return None;
                }
                hit = Some(i);
            }
        }
        match hit {
            Some(i) if !assigned[i] => assigned[i] = true,
            _ => return None,
        }
    }

    // rational bracket for λ with an f64 safety margin
    let eps = num_rational::BigRational::new(1.into(), 1_000_000_000_000i64.into());
    let refined = lambda.refined(&eps);
    let (llo, lhi) = refined.interval();
    let lam_lo = llo.to_f64()? * (1.0 - 1e-12) - 1e-300;
    let lam_hi = lhi.to_f64()? * (1.0 + 1e-12) + 1e-300;

    let mut saw_outside = false;
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        let m = zs[i].abs();
        if m + radii[i] < lam_lo {
            continue; // strictly inside
        }
        if m - radii[i] > lam_hi {
            saw_outside = true;
            continue; // strictly outside
        }
        return None; // straddles the circle: leave to the exact path
    }
    if saw_outside {
        Some(ModulusVerdict::No)
    } else {
        Some(ModulusVerdict::Yes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unipoly::IntPoly;

    fn ip(v: &[i64]) -> IntPoly {
        IntPoly::from_i64(v)
    }

    fn top(p: &IntPoly) -> RealAlgebraicNumber {
        largest_real_root(p).unwrap()
    }

    #[test]
    fn golden_ratio_is_strictly_dominant() {
        // oracle: conjugate is (1-sqrt5)/2 ~ -0.618
        let p = ip(&[-1, -1, 1]);
        let l = top(&p);
        assert_eq!(
            conjugates_within_modulus(&p, &l, true, 256).unwrap(),
            ModulusVerdict::Yes
        );
    }

    #[test]
    fn positive_conjugate_still_dominated() {
        // x^2-3x+1: conjugate (3-sqrt5)/2 ~ 0.382, strictly smaller
        let p = ip(&[1, -3, 1]);
        let l = top(&p);
        assert_eq!(
            conjugates_within_modulus(&p, &l, true, 256).unwrap(),
            ModulusVerdict::Yes
        );
        assert_eq!(
            conjugates_within_modulus(&p, &l, false, 256).unwrap(),
            ModulusVerdict::Yes
        );
    }

    #[test]
    fn plastic_number_complex_pair_inside() {
        // x^3-x-1: complex pair has modulus 1/sqrt(lambda) ~ 0.8688
        let p = ip(&[-1, -1, 0, 1]);
        let l = top(&p);
        assert_eq!(
            conjugates_within_modulus(&p, &l, true, 256).unwrap(),
            ModulusVerdict::Yes
        );
    }

    #[test]
    fn sqrt2_weak_but_not_strict() {
        // conjugate -sqrt2 has modulus exactly sqrt2
        let p = ip(&[-2, 0, 1]);
        let l = top(&p);
        assert_eq!(
            conjugates_within_modulus(&p, &l, false, 256).unwrap(),
            ModulusVerdict::Yes
        );
        assert_eq!(
            conjugates_within_modulus(&p, &l, true, 256).unwrap(),
            ModulusVerdict::No
        );
    }

    #[test]
    fn cube_root_tie_on_circle() {
        // x^3 - 8: complex cube roots of 8 sit exactly on |z| = 2
        let p = ip(&[-8, 0, 0, 1]);
        let l = top(&p);
        assert_eq!(l, RealAlgebraicNumber::from_int(2));
        assert_eq!(
            conjugates_within_modulus(&p, &l, false, 256).unwrap(),
            ModulusVerdict::Yes
        );
        assert_eq!(
            conjugates_within_modulus(&p, &l, true, 256).unwrap(),
            ModulusVerdict::No
        );
    }

    #[test]
    fn reducible_tie_with_smaller_factor() {
        // (x^3-5)(x^3+1): λ = 5^(1/3); complex pair of x^3-5 on the circle,
        // roots of x^3+1 strictly inside
        let p = ip(&[-5, 0, 0, 1]).mul(&ip(&[1, 0, 0, 1]));
        let l = top(&p);
        assert_eq!(
            conjugates_within_modulus(&p, &l, false, 256).unwrap(),
            ModulusVerdict::Yes
        );
        assert_eq!(
            conjugates_within_modulus(&p, &l, true, 256).unwrap(),
            ModulusVerdict::No
        );
    }

    #[test]
    fn dominated_from_outside_detected() {
        // λ = golden ratio but polynomial also contains root 3
        let p = ip(&[-1, -1, 1]).mul(&ip(&[-3, 1]));
        let phi = top(&ip(&[-1, -1, 1]));
        assert_eq!(
            conjugates_within_modulus(&p, &phi, false, 256).unwrap(),
            ModulusVerdict::No
        );
    }

    #[test]
    fn complex_root_outside_detected() {
        // (x-1)(x^2+4): complex pair with modulus 2 > 1 = λ
        let p = ip(&[-1, 1]).mul(&ip(&[4, 0, 1]));
        let one = RealAlgebraicNumber::from_int(1);
        assert_eq!(
            conjugates_within_modulus(&p, &one, false, 256).unwrap(),
            ModulusVerdict::No
        );
    }
}
