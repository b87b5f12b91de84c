//! Arithmetic in the real field generated by one algebraic number.
//!
//! Elements are polynomials in the generator `θ`, reduced modulo a
//! square-free defining polynomial. The defining polynomial need not be
//! irreducible: zero tests use a gcd-has-root-in-interval check, and
//! division shrinks the modulus to the factor vanishing at `θ` when the
//! extended Euclidean algorithm meets a zero divisor (dynamic evaluation).

use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebraic::RealAlgebraicNumber;
use crate::unipoly::{IntPoly, RatPoly, SturmChain};

type Int = BigInt;
type Rat = BigRational;

/// The real field `Q(θ)` for a designated real root `θ` of a square-free
/// integer polynomial. The isolating interval only ever shrinks; refinement
/// is cached behind a mutex and is semantically invisible.
pub struct RealField {
    modulus: IntPoly,
    interval: Mutex<(Rat, Rat)>,
}

impl fmt::Debug for RealField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.interval();
        f.debug_struct("RealField")
            .field("modulus", &self.modulus.coeffs)
            .field("interval", &(lo.to_string(), hi.to_string()))
            .finish()
    }
}

impl RealField {
    /// Field generated by the unique root of `modulus` in `(lo, hi)`.
    /// `modulus` is replaced by its square-free part.
    pub fn new(modulus: &IntPoly, lo: Rat, hi: Rat) -> Option<Arc<RealField>> {
        let m = modulus.squarefree_part();
        if m.degree().unwrap_or(0) == 0 {
            return None;
        }
        if m.eval_rat(&lo).is_zero() || m.eval_rat(&hi).is_zero() {
            return None;
        }
        if SturmChain::new(&m).count_roots(&lo, &hi) != 1 {
            return None;
        }
        Some(Arc::new(RealField {
            modulus: m,
            interval: Mutex::new((lo, hi)),
        }))
    }

    /// Field generated by an irrational algebraic number. Returns `None`
    /// when the number is rational (no field needed).
    pub fn of(theta: &RealAlgebraicNumber) -> Option<Arc<RealField>> {
        if theta.is_rational() {
            return None;
        }
        let (lo, hi) = theta.interval();
        RealField::new(&theta.defining(), lo, hi)
    }

    pub fn modulus(&self) -> &IntPoly {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap_or(0)
    }

    pub fn interval(&self) -> (Rat, Rat) {
        self.interval.lock().unwrap().clone()
    }

    /// The generator `θ` as a certified algebraic number.
    pub fn theta(self: &Arc<Self>) -> RealAlgebraicNumber {
        let (lo, hi) = self.interval();
        RealAlgebraicNumber::from_root(&self.modulus, lo, hi)
            .expect("field interval must isolate the generator")
    }

    /// Number of distinct roots of `p` inside the current interval.
    pub(crate) fn count_roots_in_interval(&self, chain: &SturmChain) -> usize {
        let (lo, hi) = self.interval();
        chain.count_roots(&lo, &hi)
    }

    /// Shrink the cached isolating interval by one bisection step and
    /// return the refined interval.
    fn refine_once(&self) -> (Rat, Rat) {
        let mut guard = self.interval.lock().unwrap();
        let (lo, hi) = guard.clone();
        let mid = (&lo + &hi) / Rat::from_integer(Int::from(2));
        let vm = self.modulus.eval_rat(&mid);
        if vm.is_zero() {
            // keep the invariant "endpoints are not roots": nudge the split
            let mid2 = (&lo + &mid) / Rat::from_integer(Int::from(2));
            let vm2 = self.modulus.eval_rat(&mid2);
            debug_assert!(!vm2.is_zero());
            let vl = self.modulus.eval_rat(&lo);
            if same_sign(&vl, &vm2) {
                *guard = (mid2, hi);
            } else {
                *guard = (lo, mid2);
            }
            return guard.clone();
        }
        let vl = self.modulus.eval_rat(&lo);
        if same_sign(&vl, &vm) {
            *guard = (mid, hi);
        } else {
            *guard = (lo, mid);
        }
        guard.clone()
    }
}

fn same_sign(a: &Rat, b: &Rat) -> bool {
    (a.is_negative() && b.is_negative()) || (a.is_positive() && b.is_positive())
}

/// An element of `Q(θ)`, or a plain rational when `field` is `None`.
#[derive(Clone)]
pub struct KElem {
    field: Option<Arc<RealField>>,
    rep: RatPoly,
}

impl fmt::Debug for KElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "KElem({:?})",
            self.rep.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>()
        )
    }
}

fn reduce(rep: RatPoly, modulus: &IntPoly) -> RatPoly {
    if rep.degree().unwrap_or(0) >= modulus.degree().unwrap_or(0) {
        rep.div_rem(&modulus.to_rat()).1
    } else {
        rep
    }
}

impl KElem {
    pub fn from_rat(r: Rat) -> Self {
        KElem {
            field: None,
            rep: RatPoly::new(vec![r]),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(Rat::from_integer(Int::from(n)))
    }

    pub fn zero() -> Self {
        Self::from_rat(Rat::zero())
    }

    pub fn one() -> Self {
        Self::from_rat(Rat::one())
    }

    /// The generator of the field.
    pub fn generator(field: &Arc<RealField>) -> Self {
        KElem {
            field: Some(field.clone()),
            rep: reduce(
                RatPoly::new(vec![Rat::zero(), Rat::one()]),
                field.modulus(),
            ),
        }
    }

    /// An element with the given representative polynomial in `θ`.
    pub fn in_field(field: &Arc<RealField>, rep: RatPoly) -> Self {
        KElem {
            field: Some(field.clone()),
            rep: reduce(rep, field.modulus()),
        }
    }

    pub fn field(&self) -> Option<&Arc<RealField>> {
        self.field.as_ref()
    }

    pub fn rep(&self) -> &RatPoly {
        &self.rep
    }

    pub fn to_rational(&self) -> Option<Rat> {
        match self.rep.degree() {
            None => Some(Rat::zero()),
            Some(0) => Some(self.rep.coeffs[0].clone()),
            _ => None,
        }
    }

    /// Unify two elements into a common field (or none, when both are
    /// rational). Panics if the fields describe different numbers; the
    /// pipeline only ever mixes a field with its own shrunk divisors.
    fn unify(a: &KElem, b: &KElem) -> (Option<Arc<RealField>>, RatPoly, RatPoly) {
        match (&a.field, &b.field) {
            (None, None) => (None, a.rep.clone(), b.rep.clone()),
            (Some(f), None) => (Some(f.clone()), a.rep.clone(), b.rep.clone()),
            (None, Some(f)) => (Some(f.clone()), a.rep.clone(), b.rep.clone()),
            (Some(fa), Some(fb)) => {
                if Arc::ptr_eq(fa, fb) || fa.modulus() == fb.modulus() {
                    return (Some(fa.clone()), a.rep.clone(), b.rep.clone());
                }
                let g = fa.modulus().to_rat().gcd(&fb.modulus().to_rat());
                assert!(
                    g.degree().unwrap_or(0) >= 1,
                    "cannot unify unrelated number fields"
                );
                let g = g.clear_denominators().primitive();
                let (la, ha) = fa.interval();
                let (lb, hb) = fb.interval();
                let lo = if la > lb { la } else { lb };
                let hi = if ha < hb { ha } else { hb };
                let f = RealField::new(&g, lo, hi)
                    .expect("unified modulus must isolate the common generator");
                let ra = reduce(a.rep.clone(), f.modulus());
                let rb = reduce(b.rep.clone(), f.modulus());
                (Some(f), ra, rb)
            }
        }
    }

    pub fn add(&self, other: &KElem) -> KElem {
        let (field, ra, rb) = KElem::unify(self, other);
        KElem {
            field,
            rep: ra.add(&rb),
        }
    }

    pub fn sub(&self, other: &KElem) -> KElem {
        let (field, ra, rb) = KElem::unify(self, other);
        KElem {
            field,
            rep: ra.sub(&rb),
        }
    }

    pub fn neg(&self) -> KElem {
        KElem {
            field: self.field.clone(),
            rep: self.rep.neg(),
        }
    }

    pub fn mul(&self, other: &KElem) -> KElem {
        let (field, ra, rb) = KElem::unify(self, other);
        let prod = ra.mul(&rb);
        let rep = match &field {
            Some(f) => reduce(prod, f.modulus()),
            None => prod,
        };
        KElem { field, rep }
    }

    pub fn scale(&self, s: &Rat) -> KElem {
        KElem {
            field: self.field.clone(),
            rep: self.rep.scale(s),
        }
    }

    pub fn pow(&self, mut e: u32) -> KElem {
        let mut base = self.clone();
        let mut acc = KElem::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact zero test.
    pub fn is_zero(&self) -> bool {
        if self.rep.is_zero() {
            return true;
        }
        match &self.field {
            None => false,
            Some(f) => {
                if self.rep.degree() == Some(0) {
                    return false;
                }
                let cleared = self.rep.clear_denominators();
                let g = cleared.to_rat().gcd(&f.modulus().to_rat());
                if g.degree().unwrap_or(0) == 0 {
                    return false;
                }
                let g = g.clear_denominators().primitive();
                let chain = SturmChain::new(&g);
                // endpoints are not roots of the modulus, hence not of g
                f.count_roots_in_interval(&chain) >= 1
            }
        }
    }

    /// Exact sign of the value.
    pub fn sign(&self) -> i8 {
        if self.is_zero() {
            return 0;
        }
        match &self.field {
            None => {
                if self.rep.coeffs[0].is_positive() {
                    1
                } else {
                    -1
                }
            }
            Some(f) => {
                // nonzero: refine θ's interval until the interval evaluation
                // of the representative is sign-definite
                let (mut lo, mut hi) = f.interval();
                loop {
                    let (a, b) = eval_interval(&self.rep, &lo, &hi);
                    if a.is_positive() {
                        return 1;
                    }
                    if b.is_negative() {
                        return -1;
                    }
                    let refined = f.refine_once();
                    lo = refined.0;
                    hi = refined.1;
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    /// Exact comparison of values.
    pub fn compare(&self, other: &KElem) -> std::cmp::Ordering {
        match self.sub(other).sign() {
            1 => std::cmp::Ordering::Greater,
            -1 => std::cmp::Ordering::Less,
            _ => std::cmp::Ordering::Equal,
        }
    }

    pub fn eq_exact(&self, other: &KElem) -> bool {
        self.sub(other).is_zero()
    }

    /// Exact inverse. When the representative shares a factor with a
    /// reducible modulus, the modulus is shrunk to the factor that still
    /// vanishes at `θ` and the inversion is retried there.
    pub fn inv(&self) -> KElem {
        assert!(!self.is_zero(), "inverse of zero");
        match &self.field {
            None => KElem::from_rat(Rat::one() / self.rep.coeffs[0].clone()),
            Some(f) => {
                if self.rep.degree() == Some(0) {
                    return KElem {
                        field: self.field.clone(),
                        rep: RatPoly::new(vec![Rat::one() / self.rep.coeffs[0].clone()]),
                    };
                }
                let (g, s) = egcd_first(&self.rep, &f.modulus().to_rat());
                if g.degree() == Some(0) {
                    let inv_g = Rat::one() / g.coeffs[0].clone();
                    return KElem {
                        field: self.field.clone(),
                        rep: reduce(s.scale(&inv_g), f.modulus()),
                    };
                }
                // zero divisor: θ is a root of modulus / g; shrink and retry
                let gi = g.clear_denominators().primitive();
                let shrunk = f
                    .modulus()
                    .to_rat()
                    .div_rem(&gi.to_rat())
                    .0
                    .clear_denominators()
                    .primitive();
                let (lo, hi) = f.interval();
                let nf = RealField::new(&shrunk, lo, hi)
                    .expect("shrunk modulus must still isolate the generator");
                let elem = KElem::in_field(&nf, self.rep.clone());
                elem.inv()
            }
        }
    }

    pub fn div(&self, other: &KElem) -> KElem {
        self.mul(&other.inv())
    }

    /// Decimal expansion of the value, exact truncation toward zero.
    pub fn decimal(&self, digits: u32) -> String {
        if let Some(r) = self.to_rational() {
            return crate::algebraic::decimal_of_rat_pub(&r, digits);
        }
        let f = self.field.as_ref().unwrap();
        let (mut lo, mut hi) = f.interval();
        loop {
            let (a, b) = eval_interval(&self.rep, &lo, &hi);
            let da = crate::algebraic::decimal_of_rat_pub(&a, digits);
            let db = crate::algebraic::decimal_of_rat_pub(&b, digits);
            if da == db {
                return da;
            }
            // the value may sit exactly on the decimal grid
            if let Some(g) = grid_point_between(&a, &b, digits) {
                if self.sub(&KElem::from_rat(g.clone())).is_zero() {
                    return crate::algebraic::decimal_of_rat_pub(&g, digits);
                }
            }
            let refined = f.refine_once();
            lo = refined.0;
            hi = refined.1;
        }
    }

    /// Exact equality with a certified algebraic number: the value must be
    /// a root of the number's defining polynomial and lie inside its
    /// isolating interval.
    pub fn equals_algebraic(&self, w: &RealAlgebraicNumber) -> bool {
        if let Some(r) = self.to_rational() {
            return w
                .to_rational()
                .map_or_else(|| {
                    let (lo, hi) = w.interval();
                    r > lo && r < hi && w.is_root_of(&crate::unipoly::IntPoly::new(vec![
                        -r.numer() * &num_bigint::BigInt::from(1),
                        r.denom().clone(),
                    ]))
                }, |wr| wr == r);
        }
        // exact root test
        let wdef = w.defining();
        let mut acc = KElem::zero();
        for c in wdef.coeffs.iter().rev() {
            acc = acc.mul(self).add(&KElem::from_rat(Rat::from_integer(c.clone())));
        }
        if !acc.is_zero() {
            return false;
        }
        // interval separation: shrink until inside or disjoint
        let (wlo, whi) = w.interval();
        let f = self.field.as_ref().unwrap();
        let (mut lo, mut hi) = f.interval();
        loop {
            let (a, b) = eval_interval(&self.rep, &lo, &hi);
            if a > wlo && b < whi {
                return true;
            }
            if b <= wlo || a >= whi {
                return false;
            }
            let refined = f.refine_once();
            lo = refined.0;
            hi = refined.1;
        }
    }

    /// f64 approximation (diagnostics only).
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        if let Some(r) = self.to_rational() {
            return r.to_f64().unwrap_or(f64::NAN);
        }
        let f = self.field.as_ref().unwrap();
        let (mut lo, mut hi) = f.interval();
        for _ in 0..80 {
            let (a, b) = eval_interval(&self.rep, &lo, &hi);
            let (fa, fb) = (
                a.to_f64().unwrap_or(f64::NAN),
                b.to_f64().unwrap_or(f64::NAN),
            );
            if (fb - fa).abs() < 1e-13 * (1.0 + fa.abs()) {
                return (fa + fb) / 2.0;
            }
            let refined = f.refine_once();
            lo = refined.0;
            hi = refined.1;
        }
        let (a, b) = eval_interval(&self.rep, &lo, &hi);
        (a.to_f64().unwrap_or(f64::NAN) + b.to_f64().unwrap_or(f64::NAN)) / 2.0
    }
}

/// Interval Horner evaluation of `p` over `[lo, hi]`.
fn eval_interval(p: &RatPoly, lo: &Rat, hi: &Rat) -> (Rat, Rat) {
    let mut a = Rat::zero();
    let mut b = Rat::zero();
    for c in p.coeffs.iter().rev() {
        let p1 = &a * lo;
        let p2 = &a * hi;
        let p3 = &b * lo;
        let p4 = &b * hi;
        let mut mn = p1.clone();
        let mut mx = p1;
        for p in [p2, p3, p4] {
            if p < mn {
                mn = p.clone();
            }
            if p > mx {
                mx = p;
            }
        }
        a = mn + c;
        b = mx + c;
    }
    (a, b)
}

/// First Bezout coefficient of the extended Euclidean algorithm:
/// returns `(g, s)` with `s·a + t·m = g` for some `t`.
fn egcd_first(a: &RatPoly, m: &RatPoly) -> (RatPoly, RatPoly) {
    let mut r0 = a.clone();
    let mut r1 = m.clone();
    let mut s0 = RatPoly::one();
    let mut s1 = RatPoly::zero();
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1);
        let s = s0.sub(&q.mul(&s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    (r0, s0)
}

/// A decimal grid point with `digits` fractional digits strictly between
/// `a` and `b`, if any.
fn grid_point_between(a: &Rat, b: &Rat, digits: u32) -> Option<Rat> {
    let scale = Rat::from_integer(Int::from(10u32).pow(digits));
    let k = (a * &scale).floor() + Rat::one();
    let g = k / &scale;
    if &g > a && &g < b {
        Some(g)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unipoly::IntPoly;

    fn field_sqrt2() -> Arc<RealField> {
        RealField::new(
            &IntPoly::from_i64(&[-2, 0, 1]),
            Rat::from_integer(Int::from(1)),
            Rat::from_integer(Int::from(2)),
        )
        .unwrap()
    }

    fn field_phi() -> Arc<RealField> {
        RealField::new(
            &IntPoly::from_i64(&[-1, -1, 1]),
            Rat::from_integer(Int::from(1)),
            Rat::from_integer(Int::from(2)),
        )
        .unwrap()
    }

    #[test]
    fn defining_relation_is_zero() {
        let f = field_sqrt2();
        let t = KElem::generator(&f);
        let val = t.mul(&t).sub(&KElem::from_int(2));
        assert!(val.is_zero());
        assert_eq!(val.sign(), 0);
    }

    #[test]
    fn sign_of_generator_minus_one() {
        let f = field_phi();
        let t = KElem::generator(&f);
        assert_eq!(t.sub(&KElem::from_int(1)).sign(), 1);
        assert_eq!(t.sub(&KElem::from_int(2)).sign(), -1);
    }

    #[test]
    fn sign_is_multiplicative() {
        let f = field_phi();
        let t = KElem::generator(&f);
        let a = t.sub(&KElem::from_int(1)); // positive
        let b = t.sub(&KElem::from_int(2)); // negative
        assert_eq!(a.mul(&b).sign(), -1);
        assert_eq!(b.mul(&b).sign(), 1);
    }

    #[test]
    fn inverse_of_generator() {
        let f = field_phi();
        let t = KElem::generator(&f);
        let inv = t.inv();
        assert!(t.mul(&inv).sub(&KElem::one()).is_zero());
        // phi - 1 = 1/phi for the golden ratio
        assert!(inv.eq_exact(&t.sub(&KElem::one())));
    }

    #[test]
    fn inversion_shrinks_reducible_modulus() {
        // modulus (x^2-2)(x^2-3), generator = sqrt(2) in (1.2, 1.5)
        let m = IntPoly::from_i64(&[-2, 0, 1]).mul(&IntPoly::from_i64(&[-3, 0, 1]));
        let f = RealField::new(
            &m,
            Rat::new(Int::from(12), Int::from(10)),
            Rat::new(Int::from(15), Int::from(10)),
        )
        .unwrap();
        let t = KElem::generator(&f);
        // x^2 - 3 vanishes on the other factor: its value is 2 - 3 = -1 here
        let u = t.mul(&t).sub(&KElem::from_int(3));
        assert_eq!(u.sign(), -1);
        let inv = u.inv();
        assert!(u.mul(&inv).sub(&KElem::one()).is_zero());
        // and the shrunk field is x^2 - 2
        assert_eq!(
            inv.field().unwrap().modulus(),
            &IntPoly::from_i64(&[-2, 0, 1])
        );
    }

    #[test]
    fn decimal_of_sqrt2_power() {
        let f = field_sqrt2();
        let t = KElem::generator(&f);
        // sqrt(2)^3 = 2 sqrt(2) = 2.8284271247...
        assert_eq!(&t.pow(3).decimal(10), "2.8284271247");
    }

    #[test]
    fn mixed_rational_field_arithmetic() {
        let f = field_sqrt2();
        let t = KElem::generator(&f);
        let half = KElem::from_rat(Rat::new(Int::from(1), Int::from(2)));
        let v = t.mul(&half).add(&half); // (sqrt2+1)/2 ~ 1.207
        assert_eq!(v.sign(), 1);
        assert!(v.sub(&KElem::from_int(2)).is_negative());
    }
}
