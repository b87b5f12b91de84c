//! Certified real algebraic numbers.
//!
//! A number is either an exact rational or the unique root of a square-free
//! integer polynomial inside an open rational interval whose endpoints are
//! not roots. All comparisons are exact: equality is decided by a
//! gcd-has-root-in-interval test, strict order by interval refinement.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::unipoly::{IntPoly, SturmChain};

type Int = BigInt;
type Rat = BigRational;

#[derive(Debug, Clone)]
struct RootData {
    poly: IntPoly,
}

#[derive(Debug, Clone)]
enum Repr {
    Rational(Rat),
    Root {
        data: Arc<RootData>,
        lo: Rat,
        hi: Rat,
    },
}

/// An exact real algebraic number.
#[derive(Debug, Clone)]
pub struct RealAlgebraicNumber {
    repr: Repr,
}

fn sign_of(r: &Rat) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl RealAlgebraicNumber {
    pub fn from_rational(r: Rat) -> Self {
        RealAlgebraicNumber {
            repr: Repr::Rational(r),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rat::from_integer(Int::from(n)))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The unique real root of `poly` in the open interval `(lo, hi)`.
    /// `poly` is replaced by its square-free part; the interval must isolate
    /// exactly one root and its endpoints must not be roots.
    pub fn from_root(poly: &IntPoly, lo: Rat, hi: Rat) -> Option<Self> {
        let sf = poly.squarefree_part();
        if sf.degree().unwrap_or(0) == 0 {
            return None;
        }
        let chain = SturmChain::new(&sf);
        if sf.eval_rat(&lo).is_zero() || sf.eval_rat(&hi).is_zero() {
            return None;
        }
        if chain.count_roots(&lo, &hi) != 1 {
            return None;
        }
        Some(Self::from_isolated(sf, lo, hi))
    }

    /// Internal: interval already known to isolate one root of square-free
    /// `poly`, endpoints not roots. Normalizes exact rational roots.
    fn from_isolated(poly: IntPoly, lo: Rat, hi: Rat) -> Self {
        if let Some(r) = rational_root_in(&poly, &lo, &hi) {
            return Self::from_rational(r);
        }
        if poly.degree() == Some(1) {
            let r = Rat::new(-poly.coeffs[0].clone(), poly.coeffs[1].clone());
            return Self::from_rational(r);
        }
        RealAlgebraicNumber {
            repr: Repr::Root {
                data: Arc::new(RootData { poly }),
                lo,
                hi,
            },
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self.repr, Repr::Rational(_))
    }

    pub fn to_rational(&self) -> Option<Rat> {
        match &self.repr {
            Repr::Rational(r) => Some(r.clone()),
            Repr::Root { .. } => None,
        }
    }

    /// Exact integer value, if the number is an integer.
    pub fn to_integer(&self) -> Option<Int> {
        match &self.repr {
            Repr::Rational(r) => {
                if r.denom().is_one() {
                    Some(r.numer().clone())
                } else {
                    None
                }
            }
            // Root representations never hold rationals (normalized away).
            Repr::Root { .. } => None,
        }
    }

    /// Defining polynomial (square-free, primitive). For rationals this is
    /// the linear polynomial `d x - n`.
    pub fn defining(&self) -> IntPoly {
        match &self.repr {
            Repr::Rational(r) => {
                IntPoly::new(vec![-r.numer().clone(), r.denom().clone()]).primitive()
            }
            Repr::Root { data, .. } => data.poly.clone(),
        }
    }

    /// Current isolating interval (a point interval for rationals).
    pub fn interval(&self) -> (Rat, Rat) {
        match &self.repr {
            Repr::Rational(r) => (r.clone(), r.clone()),
            Repr::Root { lo, hi, .. } => (lo.clone(), hi.clone()),
        }
    }

    /// A refined copy with interval width at most `eps`.
    pub fn refined(&self, eps: &Rat) -> Self {
        match &self.repr {
            Repr::Rational(_) => self.clone(),
            Repr::Root { data, lo, hi } => {
                let (mut lo, mut hi) = (lo.clone(), hi.clone());
                while &(&hi - &lo) > eps {
                    match bisect_step(data, &lo, &hi) {
                        BisectOutcome::Lower(m) => hi = m,
                        BisectOutcome::Upper(m) => lo = m,
                        BisectOutcome::Exact(r) => return Self::from_rational(r),
                    }
                }
                RealAlgebraicNumber {
                    repr: Repr::Root {
                        data: data.clone(),
                        lo,
                        hi,
                    },
                }
            }
        }
    }

    pub fn sign(&self) -> i8 {
        match &self.repr {
            Repr::Rational(r) => sign_of(r),
            Repr::Root { .. } => {
                let zero = Self::zero();
                match self.compare(&zero) {
                    Ordering::Less => -1,
                    Ordering::Equal => 0,
                    Ordering::Greater => 1,
                }
            }
        }
    }

    pub fn neg(&self) -> Self {
        match &self.repr {
            Repr::Rational(r) => Self::from_rational(-r.clone()),
            Repr::Root { data, lo, hi } => {
                let poly = IntPoly::new(
                    data.poly
                        .coeffs
                        .iter()
                        .enumerate()
                        .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                        .collect(),
                )
                .primitive();
                Self::from_isolated(poly, -hi.clone(), -lo.clone())
            }
        }
    }

    /// Exact square of the number.
    pub fn square(&self) -> Self {
        match &self.repr {
            Repr::Rational(r) => Self::from_rational(r * r),
            Repr::Root { data, lo, hi } => {
                let g = data.poly.graeffe_step().squarefree_part();
                let chain = SturmChain::new(&g);  // used to certify the squared interval
                let (mut lo, mut hi) = (lo.clone(), hi.clone());
                loop {
                    // need a sign-definite interval to square it monotonically
                    if !(lo.is_negative() && hi.is_positive()) {
                        let (a, b) = if lo.is_negative() {
                            (&hi * &hi, &lo * &lo)
                        } else {
                            (&lo * &lo, &hi * &hi)
                        };
                        if !g.eval_rat(&a).is_zero()
                            && !g.eval_rat(&b).is_zero()
                            && chain.count_roots(&a, &b) == 1
                        {
                            return Self::from_isolated(g, a, b);
                        }
                    }
                    match bisect_step(data, &lo, &hi) {
                        BisectOutcome::Lower(m) => hi = m,
                        BisectOutcome::Upper(m) => lo = m,
                        BisectOutcome::Exact(r) => return Self::from_rational(&r * &r),
                    }
                }
            }
        }
    }

    /// Absolute value.
    pub fn abs(&self) -> Self {
        if self.sign() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// f64 approximation (display/diagnostics only).
    pub fn to_f64(&self) -> f64 {
        let eps = Rat::new(Int::one(), Int::from(1_000_000_000_000u64));
        let r = self.refined(&eps);
        let (lo, hi) = r.interval();
        let mid = (&lo + &hi) / Rat::from_integer(Int::from(2));
        rat_to_f64(&mid)
    }

    /// Decimal expansion with `digits` fractional digits, exact truncation
    /// toward zero. Deterministic: the interval is refined until the
    /// truncated expansions of both endpoints agree, detecting exact decimal
    /// grid points along the way.
    pub fn decimal(&self, digits: u32) -> String {
        match &self.repr {
            Repr::Rational(r) => decimal_of_rat(r, digits),
            Repr::Root { data, lo, hi } => {
                let (mut lo, mut hi) = (lo.clone(), hi.clone());
                loop {
                    let dlo = decimal_of_rat(&lo, digits);
                    let dhi = decimal_of_rat(&hi, digits);
                    if dlo == dhi {
                        return dlo;
                    }
                    match bisect_step(data, &lo, &hi) {
                        BisectOutcome::Lower(m) => hi = m,
                        BisectOutcome::Upper(m) => lo = m,
                        BisectOutcome::Exact(r) => return decimal_of_rat(&r, digits),
                    }
                }
            }
        }
    }

    /// Exact comparison.
    pub fn compare(&self, other: &Self) -> Ordering {
        match (&self.repr, &other.repr) {
            (Repr::Rational(a), Repr::Rational(b)) => a.cmp(b),
            (Repr::Rational(r), Repr::Root { data, lo, hi }) => {
                cmp_rat_root(r, data, lo, hi)
            }
            (Repr::Root { data, lo, hi }, Repr::Rational(r)) => {
                cmp_rat_root(r, data, lo, hi).reverse()
            }
            (
                Repr::Root {
                    data: da,
                    lo: la,
                    hi: ha,
                },
                Repr::Root {
                    data: db,
                    lo: lb,
                    hi: hb,
                },
            ) => cmp_root_root(da, la, ha, db, lb, hb),
        }
    }

    pub fn eq_exact(&self, other: &Self) -> bool {
        self.compare(other) == Ordering::Equal
    }

    /// True when `poly` vanishes at this number.
    pub fn is_root_of(&self, poly: &IntPoly) -> bool {
        if poly.is_zero() {
            return true;
        }
        match &self.repr {
            Repr::Rational(r) => poly.eval_rat(r).is_zero(),
            Repr::Root { data, lo, hi } => {
                let g = data.poly.to_rat().gcd(&poly.to_rat());
                if g.degree().unwrap_or(0) == 0 {
                    return false;
                }
                let g = g.clear_denominators().primitive();
                let chain = SturmChain::new(&g);
                !g.eval_rat(lo).is_zero()
                    && !g.eval_rat(hi).is_zero()
                    && chain.count_roots(lo, hi) >= 1
            }
        }
    }
}

impl PartialEq for RealAlgebraicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.eq_exact(other)
    }
}
impl Eq for RealAlgebraicNumber {}
impl PartialOrd for RealAlgebraicNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for RealAlgebraicNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

impl fmt::Display for RealAlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Rational(r) => write!(f, "{r}"),
            Repr::Root { .. } => write!(f, "{}…", self.decimal(10)),
        }
    }
}

enum BisectOutcome {
    Lower(Rat),
    Upper(Rat),
    Exact(Rat),
}

/// One bisection step on an isolating interval. The root is simple, so the
/// polynomial changes sign across it.
fn bisect_step(data: &RootData, lo: &Rat, hi: &Rat) -> BisectOutcome {
    let mid = (lo + hi) / Rat::from_integer(Int::from(2));
    let vm = data.poly.eval_rat(&mid);
    if vm.is_zero() {
        return BisectOutcome::Exact(mid);
    }
    let vl = data.poly.eval_rat(lo);
    if sign_of(&vl) != sign_of(&vm) {
        BisectOutcome::Lower(mid)
    } else {
        BisectOutcome::Upper(mid)
    }
}

fn cmp_rat_root(r: &Rat, data: &RootData, lo: &Rat, hi: &Rat) -> Ordering {
    if r <= lo {
        return Ordering::Less;
    }
    if r >= hi {
        return Ordering::Greater;
    }
    let vr = data.poly.eval_rat(r);
    if vr.is_zero() {
        return Ordering::Equal;
    }
    let vl = data.poly.eval_rat(lo);
    if sign_of(&vl) == sign_of(&vr) {
        // no sign change left of r: root lies right of r
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

fn cmp_root_root(
    da: &Arc<RootData>,
    la: &Rat,
    ha: &Rat,
    db: &Arc<RootData>,
    lb: &Rat,
    hb: &Rat,
) -> Ordering {
    // equality test once, via the gcd
    let g = da.poly.to_rat().gcd(&db.poly.to_rat());
    if g.degree().unwrap_or(0) >= 1 {
        let g = g.clear_denominators().primitive();
        let ilo = if la > lb { la.clone() } else { lb.clone() };
        let ihi = if ha < hb { ha.clone() } else { hb.clone() };
        if ilo < ihi {
            let chain = SturmChain::new(&g);
            if chain.count_roots(&ilo, &ihi) >= 1 {
                return Ordering::Equal;
            }
        }
    }
    // distinct: refine until intervals disjoint
    let (mut la, mut ha) = (la.clone(), ha.clone());
    let (mut lb, mut hb) = (lb.clone(), hb.clone());
    loop {
        if ha <= lb {
            return Ordering::Less;
        }
        if hb <= la {
            return Ordering::Greater;
        }
        match bisect_step(da, &la, &ha) {
            BisectOutcome::Lower(m) => ha = m,
            BisectOutcome::Upper(m) => la = m,
            BisectOutcome::Exact(r) => {
                return cmp_rat_root(&r, db, &lb, &hb);
            }
        }
        match bisect_step(db, &lb, &hb) {
            BisectOutcome::Lower(m) => hb = m,
            BisectOutcome::Upper(m) => lb = m,
            BisectOutcome::Exact(r) => {
                return cmp_rat_root(&r, da, &la, &ha).reverse();
            }
        }
    }
}

/// Rational root of square-free `poly` inside `(lo, hi)`, when the leading
/// coefficient is small enough to enumerate denominators. The interval is
/// shrunk until at most one candidate per denominator remains.
fn rational_root_in(poly: &IntPoly, lo: &Rat, hi: &Rat) -> Option<Rat> {
    let lead = poly.leading()?.abs();
    let denoms: Vec<Int> = if lead <= Int::from(1_000_000u64) {
        let mut ds = divisors_of(&lead);
        ds.sort();
        ds
    } else {
        vec![Int::one()]
    };
    let data = RootData { poly: poly.clone() };
    let (mut lo, mut hi) = (lo.clone(), hi.clone());
    for q in &denoms {
        // shrink until width * q < 1, leaving at most one multiple of 1/q
        let qr = Rat::from_integer(q.clone());
        while &(&hi - &lo) * &qr >= Rat::one() {
            match bisect_step(&data, &lo, &hi) {
                BisectOutcome::Lower(m) => hi = m,
                BisectOutcome::Upper(m) => lo = m,
                BisectOutcome::Exact(r) => return Some(r),
            }
        }
        let k = (&lo * &qr).ceil().to_integer();
        let cand = Rat::new(k, q.clone());
        if cand > lo && cand < hi && poly.eval_rat(&cand).is_zero() {
            return Some(cand);
        }
    }
    None
}

fn divisors_of(n: &Int) -> Vec<Int> {
    let mut out = Vec::new();
    let mut d = Int::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            let q = n / &d;
            if q != d {
                out.push(q);
            }
        }
        d += Int::one();
    }
    out
}

fn rat_to_f64(r: &Rat) -> f64 {
    // num-rational's own conversion handles big values via rounding
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact truncated decimal expansion of a rational (crate-wide helper).
pub fn decimal_of_rat_pub(r: &Rat, digits: u32) -> String {
    decimal_of_rat(r, digits)
}

fn decimal_of_rat(r: &Rat, digits: u32) -> String {
    let neg = r.is_negative();
    let a = r.abs();
    let scale = Int::from(10u32).pow(digits);
    let scaled = (&a * Rat::from_integer(scale.clone())).floor().to_integer();
    let int_part = &scaled / &scale;
    let frac_part = &scaled % &scale;
    let frac_str = format!("{:0>width$}", frac_part.to_string(), width = digits as usize);
    let body = if digits == 0 {
        format!("{int_part}")
    } else {
        format!("{int_part}.{frac_str}")
    };
    if neg && !(scaled.is_zero()) {
        format!("-{body}")
    } else {
        body
    }
}

/// Isolate all distinct real roots of `p`, sorted increasingly.
pub fn isolate_real_roots(p: &IntPoly) -> Vec<RealAlgebraicNumber> {
    assert!(!p.is_zero(), "cannot isolate roots of the zero polynomial");
    let mut poly = p.squarefree_part();
    if poly.degree().unwrap_or(0) == 0 {
        return vec![];
    }
    let mut exact: Vec<Rat> = Vec::new();
    // peel off exact rational roots hit during bisection by deflation
    let mut intervals: Vec<(Rat, Rat)> = Vec::new();
    'restart: loop {
        intervals.clear();
        let chain = SturmChain::new(&poly);
        let bound = poly.cauchy_bound();
        let lo = -bound.clone();
        let hi = bound;
        if poly.eval_rat(&lo).is_zero() || poly.eval_rat(&hi).is_zero() {
            // cannot happen: Cauchy bound is strict; defensive
            unreachable!("cauchy bound endpoint is a root");
        }
        let total = chain.count_roots(&lo, &hi);
        let mut stack = vec![(lo, hi, total)];
        while let Some((lo, hi, count)) = stack.pop() {
            match count {
                0 => {}
                1 => intervals.push((lo, hi)),
                _ => {
                    let mid = (&lo + &hi) / Rat::from_integer(Int::from(2));
                    if poly.eval_rat(&mid).is_zero() {
                        exact.push(mid.clone());
                        let lin = IntPoly::new(vec![-mid.numer().clone(), mid.denom().clone()]);
                        let quot = poly.to_rat().div_rem(&lin.to_rat()).0;
                        poly = quot.clear_denominators().primitive();
                        continue 'restart;
                    }
                    let cl = chain.count_roots(&lo, &mid);
                    stack.push((lo, mid.clone(), cl));
                    stack.push((mid, hi, count - cl));
                }
            }
        }
        break;
    }
    let mut roots: Vec<RealAlgebraicNumber> = intervals
        .into_iter()
        .map(|(lo, hi)| RealAlgebraicNumber::from_isolated(poly.clone(), lo, hi))
        .collect();
    roots.extend(exact.into_iter().map(RealAlgebraicNumber::from_rational));
    roots.sort();
    roots
}

/// Maximum real root of `p`, or `None` when `p` has no real roots.
pub fn largest_real_root(p: &IntPoly) -> Option<RealAlgebraicNumber> {
    isolate_real_roots(p).into_iter().next_back()
}

/// Multiplicity of the algebraic number `x` as a root of `q` (0 when not a
/// root). `q` need not be square-free.
pub fn multiplicity_of_root(q: &IntPoly, x: &RealAlgebraicNumber) -> usize {
    if q.is_zero() || !x.is_root_of(q) {
        return 0;
    }
    let g = q.to_rat().gcd(&q.derivative().to_rat());
    if g.degree().unwrap_or(0) == 0 {
        return 1;
    }
    1 + multiplicity_of_root(&g.clear_denominators().primitive(), x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(v: &[i64]) -> IntPoly {
        IntPoly::from_i64(v)
    }

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(Int::from(n), Int::from(d))
    }

    #[test]
    fn isolates_sqrt2() {
        let roots = isolate_real_roots(&ip(&[-2, 0, 1]));
        assert_eq!(roots.len(), 2);
        // oracle: 1 < sqrt(2) < 2 and the two roots are negatives
        let two = RealAlgebraicNumber::from_int(2);
        let one = RealAlgebraicNumber::from_int(1);
        assert!(roots[1] > one && roots[1] < two);
        assert_eq!(roots[0], roots[1].neg());
    }

    #[test]
    fn golden_ratio_interval() {
        // oracle: quadratic formula, (1+sqrt(5))/2 = 1.6180339887...
        let phi = largest_real_root(&ip(&[-1, -1, 1])).unwrap();
        assert_eq!(&phi.decimal(10), "1.6180339887");
    }

    #[test]
    fn cubic_one_real_root() {
        // oracle: sign changes of x^3-x-1 at 1 and 2; value 1.3247...
        let roots = isolate_real_roots(&ip(&[-1, -1, 0, 1]));
        assert_eq!(roots.len(), 1);
        assert_eq!(&roots[0].decimal(4), "1.3247");
    }

    #[test]
    fn rational_roots_are_normalized() {
        // x(x^2 - x - 2) = x(x-2)(x+1): all roots rational
        let roots = isolate_real_roots(&ip(&[0, -2, -1, 1]));
        assert_eq!(roots.len(), 3);
        assert!(roots.iter().all(|r| r.is_rational()));
        assert_eq!(
            largest_real_root(&ip(&[0, -2, -1, 1])).unwrap(),
            RealAlgebraicNumber::from_int(2)
        );
    }

    #[test]
    fn compare_sqrt2_and_golden() {
        // oracle: 1.4142 < 1.6180
        let sqrt2 = largest_real_root(&ip(&[-2, 0, 1])).unwrap();
        let phi = largest_real_root(&ip(&[-1, -1, 1])).unwrap();
        assert!(sqrt2 < phi);
    }

    #[test]
    fn equality_across_defining_polynomials() {
        // same golden ratio from x^2-x-1 and from (x^2-x-1)(x^2+1)
        let phi1 = largest_real_root(&ip(&[-1, -1, 1])).unwrap();
        let prod = ip(&[-1, -1, 1]).mul(&ip(&[1, 0, 1]));
        let phi2 = largest_real_root(&prod).unwrap();
        assert_eq!(phi1, phi2);
    }

    #[test]
    fn two_as_algebraic_equals_two() {
        let r = largest_real_root(&ip(&[-2, -1, 1])).unwrap(); // x^2-x-2=(x-2)(x+1)
        assert_eq!(r, RealAlgebraicNumber::from_int(2));
        assert_eq!(r.to_integer(), Some(Int::from(2)));
    }

    #[test]
    fn square_of_sqrt2_is_two() {
        let sqrt2 = largest_real_root(&ip(&[-2, 0, 1])).unwrap();
        assert_eq!(sqrt2.square(), RealAlgebraicNumber::from_int(2));
    }

    #[test]
    fn multiplicity_counting() {
        // (x-1)^3 (x^2-2)
        let p = ip(&[-1, 1]);
        let cube = p.mul(&p).mul(&p).mul(&ip(&[-2, 0, 1]));
        let one = RealAlgebraicNumber::from_int(1);
        let sqrt2 = largest_real_root(&ip(&[-2, 0, 1])).unwrap();
        assert_eq!(multiplicity_of_root(&cube, &one), 3);
        assert_eq!(multiplicity_of_root(&cube, &sqrt2), 1);
        assert_eq!(multiplicity_of_root(&cube, &RealAlgebraicNumber::from_int(5)), 0);
    }

    #[test]
    fn decimal_truncation_is_stable() {
        let sqrt2 = largest_real_root(&ip(&[-2, 0, 1])).unwrap();
        assert_eq!(&sqrt2.decimal(12), "1.414213562373");
        let neg = sqrt2.neg();
        assert_eq!(&neg.decimal(5), "-1.41421");
    }

    #[test]
    fn refinement_keeps_isolating() {
        // spec invariant: intervals remain isolating after bisection
        let phi = largest_real_root(&ip(&[-1, -1, 1])).unwrap();
        let (lo0, hi0) = phi.interval();
        let fine = phi.refined(&rat(1, 1 << 20));
        let (lo1, hi1) = fine.interval();
        assert!(lo0 <= lo1 && hi1 <= hi0);
        assert_eq!(fine, phi);
    }
}
