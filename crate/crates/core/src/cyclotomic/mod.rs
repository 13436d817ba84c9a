//! Exact arithmetic in `Q(ζ_n)`.
//!
//! A [`CycNum`] is a polynomial in `ζ_n` reduced modulo the cyclotomic polynomial `Φ_n`, so
//! its coefficient vector in the basis `1, ζ_n, …, ζ_n^{φ(n)−1}` is unique. Zero tests are
//! therefore exact coefficient comparisons. Integer-valued numbers (the common case for
//! character sums) are held as `i64` coefficients; rational or large values fall back to a
//! `BigInt` numerator vector over a common positive denominator.

mod exact_div;
mod inverse;
mod matrix;
mod poly;

use alloc::borrow::Cow;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};
use core::sync::atomic::{AtomicU32, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ntheory::{gcd, lcm};

pub use matrix::{det_exact, kernel_vector, CycMatrix};
pub use poly::cyclotomic_polynomial;

/// Largest cyclotomic order an implicit embedding may create unless reconfigured.
pub const DEFAULT_MAX_ORDER: u32 = 20_000;

static MAX_ORDER: AtomicU32 = AtomicU32::new(DEFAULT_MAX_ORDER);

/// Sets the cap on orders produced by mixing operands of different orders.
pub fn set_max_order(cap: u32) {
    MAX_ORDER.store(cap.max(1), Ordering::Relaxed);
}

pub fn max_order() -> u32 {
    MAX_ORDER.load(Ordering::Relaxed)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CycError {
    #[error("common cyclotomic order {order} exceeds the configured cap {cap}")]
    OrderOverflow { order: u64, cap: u32 },
    #[error("order {from} does not divide order {to}")]
    NotEmbeddable { from: u32, to: u32 },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(&'static str),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse coefficient {0:?}")]
    BadCoefficient(String),
}

#[derive(Clone, PartialEq, Eq)]
enum Repr {
    Int(Vec<i64>),
    /// `num / den` with `den > 0` and the content of `num` coprime to `den`.
    Rat { num: Vec<BigInt>, den: BigInt },
}

/// An element of the cyclotomic field `Q(ζ_n)`.
#[derive(Clone)]
pub struct CycNum {
    order: u32,
    repr: Repr,
}

/// `ζ_order^exponent`, kept symbolic until a sum or product needs the full vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootOfUnity {
    pub order: u32,
    pub exponent: u32,
}

impl RootOfUnity {
    pub fn new(order: u32, exponent: i64) -> Self {
        assert!(order >= 1, "root of unity needs order >= 1");
        RootOfUnity {
            order,
            exponent: exponent.rem_euclid(i64::from(order)) as u32,
        }
    }

    pub fn one() -> Self {
        RootOfUnity {
            order: 1,
            exponent: 0,
        }
    }

    pub fn to_cyc(self) -> CycNum {
        CycNum::root_of_unity(self.order, i64::from(self.exponent))
    }

    /// Exponent of the same root written over `ζ_n`; `order` must divide `n`.
    pub fn exponent_in(self, n: u32) -> u32 {
        debug_assert_eq!(n % self.order, 0);
        self.exponent * (n / self.order)
    }

}

impl Mul for RootOfUnity {
    type Output = RootOfUnity;

    // exponents add under multiplication
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, other: RootOfUnity) -> RootOfUnity {
        let n = lcm(u64::from(self.order), u64::from(other.order)) as u32;
        RootOfUnity::new(
            n,
            i64::from(self.exponent_in(n)) + i64::from(other.exponent_in(n)),
        )
    }
}

/// Accumulates `Σ c_e ζ_n^e` as integer exponent counts before one final reduction.
#[derive(Debug, Clone)]
pub struct PowerSum {
    order: u32,
    counts: Vec<i64>,
}

impl PowerSum {
    pub fn new(order: u32) -> Self {
        assert!(order >= 1);
        PowerSum {
            order,
            counts: vec![0; order as usize],
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Adds `c · ζ_order^exponent`.
    pub fn add_exponent(&mut self, exponent: u64, c: i64) {
        let e = (exponent % u64::from(self.order)) as usize;
        self.counts[e] += c;
    }

    /// Adds `c · root`; the root's order must divide this sum's order.
    pub fn add_root(&mut self, root: RootOfUnity, c: i64) {
        assert_eq!(
            self.order % root.order,
            0,
            "root of order {} does not live in order {}",
            root.order,
            self.order
        );
        self.add_exponent(u64::from(root.exponent_in(self.order)), c);
    }

    pub fn finish(self) -> CycNum {
        CycNum::from_power_sum(self.order, &self.counts)
    }
}

fn fits_i64(v: &[i128]) -> bool {
    v.iter().all(|&c| c >= i128::from(i64::MIN) && c <= i128::from(i64::MAX))
}

impl CycNum {
    pub fn zero(order: u32) -> Self {
        let m = poly::modulus(order);
        CycNum {
            order,
            repr: Repr::Int(vec![0; m.degree]),
        }
    }

    pub fn one(order: u32) -> Self {
        Self::from_i64(order, 1)
    }

    pub fn from_i64(order: u32, c: i64) -> Self {
        let mut z = Self::zero(order);
        if let Repr::Int(v) = &mut z.repr {
            v[0] = c;
        }
        z
    }

    pub fn from_rational(order: u32, c: &BigRational) -> Self {
        let m = poly::modulus(order);
        let mut num = vec![BigInt::zero(); m.degree];
        num[0] = c.numer().clone();
        Self::from_big_reduced(order, num, c.denom().clone())
    }

    /// `ζ_n^k` in canonical form.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        assert!(n >= 1, "root of unity needs n >= 1");
        let e = k.rem_euclid(i64::from(n)) as usize;
        let mut v = vec![0i128; e + 1];
        v[e] = 1;
        Self::from_wide(n, v)
    }

    /// `Σ counts[e] · ζ_n^e`; exponents beyond `n` wrap around.
    pub fn from_power_sum(order: u32, counts: &[i64]) -> Self {
        Self::from_wide(order, counts.iter().map(|&c| i128::from(c)).collect())
    }

    /// `Σ coeffs[e] · ζ_n^e` with rational coefficients; any length is accepted.
    pub fn from_coefficients(order: u32, coeffs: &[BigRational]) -> Self {
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Self::from_big(order, num, den)
    }

    fn from_wide(order: u32, mut v: Vec<i128>) -> Self {
        let m = poly::modulus(order);
        let backup = v.clone();
        match poly::reduce_wide(&m, &mut v) {
            Some(()) => Self::from_reduced_wide(order, v),
            None => Self::from_big(
                order,
                backup.into_iter().map(BigInt::from).collect(),
                BigInt::one(),
            ),
        }
    }

    fn from_reduced_wide(order: u32, v: Vec<i128>) -> Self {
        if fits_i64(&v) {
            CycNum {
                order,
                repr: Repr::Int(v.into_iter().map(|c| c as i64).collect()),
            }
        } else {
            CycNum {
                order,
                repr: Repr::Rat {
                    num: v.into_iter().map(BigInt::from).collect(),
                    den: BigInt::one(),
                },
            }
        }
    }

    fn from_big(order: u32, mut num: Vec<BigInt>, den: BigInt) -> Self {
        let m = poly::modulus(order);
        poly::reduce_big(&m, &mut num);
        Self::from_big_reduced(order, num, den)
    }

    fn from_big_reduced(order: u32, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -core::mem::take(c);
            }
        }
        let content = num.iter().fold(den.clone(), |acc, c| acc.gcd(c));
        if !content.is_one() {
            for c in num.iter_mut() {
                *c /= &content;
            }
            den /= &content;
        }
        if den.is_one() {
            let small: Option<Vec<i64>> = num.iter().map(|c| c.to_i64()).collect();
            if let Some(v) = small {
                return CycNum {
                    order,
                    repr: Repr::Int(v),
                };
            }
        }
        CycNum {
            order,
            repr: Repr::Rat { num, den },
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// `φ(n)`, the length of the canonical coefficient vector.
    pub fn dimension(&self) -> usize {
        match &self.repr {
            Repr::Int(v) => v.len(),
            Repr::Rat { num, .. } => num.len(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Int(v) => v.iter().all(|&c| c == 0),
            Repr::Rat { num, .. } => num.iter().all(Zero::is_zero),
        }
    }

    /// True when every coefficient is an integer, i.e. the number lies in `Z[ζ_n]`.
    pub fn is_integral(&self) -> bool {
        match &self.repr {
            Repr::Int(_) => true,
            Repr::Rat { den, .. } => den.is_one(),
        }
    }

    /// Canonical coefficients in the basis `1, ζ, ζ², …`.
    pub fn coefficients(&self) -> Vec<BigRational> {
        match &self.repr {
            Repr::Int(v) => v
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
            Repr::Rat { num, den } => num
                .iter()
                .map(|c| BigRational::new(c.clone(), den.clone()))
                .collect(),
        }
    }

    /// Coefficients rendered as `"num"` or `"num/den"`.
    pub fn coefficient_strings(&self) -> Vec<String> {
        self.coefficients()
            .iter()
            .map(|c| {
                if c.is_integer() {
                    format!("{}", c.numer())
                } else {
                    format!("{}/{}", c.numer(), c.denom())
                }
            })
            .collect()
    }

    /// Inverse of [`CycNum::coefficient_strings`]: `"a"` or `"a/b"` per coefficient.
    pub fn from_coefficient_strings<S: AsRef<str>>(order: u32, coeffs: &[S]) -> Result<CycNum, CycError> {
        if order == 0 {
            return Err(CycError::BadCoefficient(String::from("order 0")));
        }
        let parsed = coeffs
            .iter()
            .map(|c| {
                let c = c.as_ref();
                c.trim()
                    .parse::<BigRational>()
                    .ok()
                    .filter(|r| !r.denom().is_zero())
                    .ok_or_else(|| CycError::BadCoefficient(String::from(c)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_coefficients(order, &parsed))
    }

    /// Returns the value as a rational when it lies in `Q`.
    pub fn to_rational(&self) -> Option<BigRational> {
        let c = self.coefficients();
        if c.iter().skip(1).all(Zero::is_zero) {
            Some(c.into_iter().next().unwrap_or_else(BigRational::zero))
        } else {
            None
        }
    }

    fn big_parts(&self) -> (Vec<BigInt>, BigInt) {
        match &self.repr {
            Repr::Int(v) => (v.iter().map(|&c| BigInt::from(c)).collect(), BigInt::one()),
            Repr::Rat { num, den } => (num.clone(), den.clone()),
        }
    }

    /// Re-expresses this number over `ζ_n` for a multiple `n` of its order.
    pub fn embed(&self, n: u32) -> Result<CycNum, CycError> {
        if n == self.order {
            return Ok(self.clone());
        }
        if n == 0 || !n.is_multiple_of(self.order) {
            return Err(CycError::NotEmbeddable {
                from: self.order,
                to: n,
            });
        }
        let step = (n / self.order) as usize;
        Ok(self.remap(n, |i| i * step))
    }

    /// Moves the coefficient of `ζ^i` to `ζ_target^{index(i)}` and reduces.
    fn remap(&self, target: u32, index: impl Fn(usize) -> usize) -> CycNum {
        let n = target as usize;
        match &self.repr {
            Repr::Int(v) => {
                let mut w = vec![0i128; n];
                for (i, &c) in v.iter().enumerate() {
                    w[index(i) % n] += i128::from(c);
                }
                Self::from_wide(target, w)
            }
            Repr::Rat { num, den } => {
                let mut w = vec![BigInt::zero(); n];
                for (i, c) in num.iter().enumerate() {
                    w[index(i) % n] += c;
                }
                Self::from_big(target, w, den.clone())
            }
        }
    }

    fn common_order(a: u32, b: u32) -> Result<u32, CycError> {
        if a == b {
            return Ok(a);
        }
        let n = lcm(u64::from(a), u64::from(b));
        let cap = max_order();
        if n > u64::from(cap) {
            return Err(CycError::OrderOverflow { order: n, cap });
        }
        Ok(n as u32)
    }

    fn aligned<'a>(
        a: &'a CycNum,
        b: &'a CycNum,
    ) -> Result<(Cow<'a, CycNum>, Cow<'a, CycNum>), CycError> {
        if a.order == b.order {
            return Ok((Cow::Borrowed(a), Cow::Borrowed(b)));
        }
        let n = Self::common_order(a.order, b.order)?;
        let lift = |x: &'a CycNum| -> Result<Cow<'a, CycNum>, CycError> {
            if x.order == n {
                Ok(Cow::Borrowed(x))
            } else {
                x.embed(n).map(Cow::Owned)
            }
        };
        Ok((lift(a)?, lift(b)?))
    }

    pub fn checked_add(&self, other: &CycNum) -> Result<CycNum, CycError> {
        let (a, b) = Self::aligned(self, other)?;
        Ok(a.add_same_order(&b))
    }

    pub fn checked_sub(&self, other: &CycNum) -> Result<CycNum, CycError> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &CycNum) -> Result<CycNum, CycError> {
        let (a, b) = Self::aligned(self, other)?;
        Ok(a.mul_same_order(&b))
    }

    pub fn checked_div(&self, other: &CycNum) -> Result<CycNum, CycError> {
        let inv = other.inverse()?;
        self.checked_mul(&inv)
    }

    fn add_same_order(&self, other: &CycNum) -> CycNum {
        debug_assert_eq!(self.order, other.order);
        if let (Repr::Int(a), Repr::Int(b)) = (&self.repr, &other.repr) {
            let v = a
                .iter()
                .zip(b)
                .map(|(&x, &y)| i128::from(x) + i128::from(y))
                .collect();
            return Self::from_reduced_wide(self.order, v);
        }
        let (an, ad) = self.big_parts();
        let (bn, bd) = other.big_parts();
        let num = an
            .iter()
            .zip(&bn)
            .map(|(x, y)| x * &bd + y * &ad)
            .collect();
        Self::from_big_reduced(self.order, num, ad * bd)
    }

    fn mul_same_order(&self, other: &CycNum) -> CycNum {
        debug_assert_eq!(self.order, other.order);
        if let (Repr::Int(a), Repr::Int(b)) = (&self.repr, &other.repr) {
            if let Some(v) = convolve_wide(a, b) {
                let m = poly::modulus(self.order);
                let mut v = v;
                if poly::reduce_wide(&m, &mut v).is_some() {
                    return Self::from_reduced_wide(self.order, v);
                }
            }
        }
        let (an, ad) = self.big_parts();
        let (bn, bd) = other.big_parts();
        let mut prod = vec![BigInt::zero(); an.len() + bn.len() - 1];
        for (i, x) in an.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in bn.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        Self::from_big(self.order, prod, ad * bd)
    }

    fn neg_ref(&self) -> CycNum {
        let repr = match &self.repr {
            Repr::Int(v) if v.iter().all(|&c| c != i64::MIN) => {
                Repr::Int(v.iter().map(|&c| -c).collect())
            }
            _ => {
                let (num, den) = self.big_parts();
                return Self::from_big_reduced(self.order, num.into_iter().map(|c| -c).collect(), den);
            }
        };
        CycNum {
            order: self.order,
            repr,
        }
    }

    pub fn scalar_mul(&self, c: &BigRational) -> CycNum {
        let (num, den) = self.big_parts();
        let num = num.into_iter().map(|x| x * c.numer()).collect();
        Self::from_big_reduced(self.order, num, den * c.denom())
    }

    pub fn mul_i64(&self, c: i64) -> CycNum {
        self.scalar_mul(&BigRational::from_integer(BigInt::from(c)))
    }

    /// `ζ_n^k · self`, without leaving the current order.
    pub fn mul_root(&self, k: i64) -> CycNum {
        let n = self.order as usize;
        let shift = k.rem_euclid(n as i64) as usize;
        self.remap(self.order, |i| i + shift)
    }

    /// The automorphism `ζ_n ↦ ζ_n^a`; `a` must be coprime to `n`.
    pub fn galois(&self, a: u32) -> CycNum {
        let n = self.order;
        assert!(
            n == 1 || gcd(u64::from(a % n), u64::from(n)) == 1,
            "galois exponent must be a unit mod n"
        );
        let a = (a % n) as usize;
        self.remap(n, |i| i * a)
    }

    /// Complex conjugation, `ζ_n ↦ ζ_n^{n−1}`.
    pub fn conjugate(&self) -> CycNum {
        if self.order <= 2 {
            return self.clone();
        }
        self.galois(self.order - 1)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against `Φ_n` over `Q[x]`.
    pub fn inverse(&self) -> Result<CycNum, CycError> {
        if self.is_zero() {
            return Err(CycError::DivisionByZero);
        }
        if let Some(r) = self.to_rational() {
            return Ok(Self::from_rational(self.order, &r.recip()));
        }
        let modulus: Vec<BigRational> = cyclotomic_polynomial(self.order)
            .into_iter()
            .map(|c| BigRational::from_integer(BigInt::from(c)))
            .collect();
        let inv = inverse::invert_mod(&self.coefficients(), &modulus)
            .expect("nonzero element of a field is invertible");
        Ok(Self::from_coefficients(self.order, &inv))
    }

    /// Floating point value under `ζ_n = e^{2πi/n}`, rounded to `digits` decimals.
    ///
    /// For display only; no decision in this crate looks at it.
    pub fn complex_approx(&self, digits: u32) -> (f64, f64) {
        let n = f64::from(self.order);
        let (mut re, mut im) = (0.0, 0.0);
        for (i, c) in self.coefficients().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let x = c.to_f64().unwrap_or(f64::NAN);
            let angle = 2.0 * core::f64::consts::PI * (i as f64) / n;
            re += x * libm::cos(angle);
            im += x * libm::sin(angle);
        }
        let scale = libm::pow(10.0, f64::from(digits.min(15)));
        let round = |v: f64| {
            let r = libm::round(v * scale) / scale;
            if r == 0.0 {
                0.0
            } else {
                r
            }
        };
        (round(re), round(im))
    }
}

fn convolve_wide(a: &[i64], b: &[i64]) -> Option<Vec<i128>> {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        let x = i128::from(x);
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                out[i + j] = out[i + j].checked_add(x * i128::from(y))?;
            }
        }
    }
    Some(out)
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.repr == other.repr;
        }
        let n = lcm(u64::from(self.order), u64::from(other.order)) as u32;
        let a = self.embed(n).expect("lcm is a common multiple");
        let b = other.embed(n).expect("lcm is a common multiple");
        a.repr == b.repr
    }
}

impl Eq for CycNum {}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, c) in self.coefficients().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            if wrote {
                f.write_str(if negative { " - " } else { " + " })?;
            } else if negative {
                f.write_str("-")?;
            }
            let mag_str = if mag.is_integer() {
                format!("{}", mag.numer())
            } else {
                format!("{}/{}", mag.numer(), mag.denom())
            };
            match i {
                0 => f.write_str(&mag_str)?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag_str}*")?;
                    }
                    write!(f, "z{}", self.order)?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNum[{}]({})", self.order, self)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&CycNum> for &CycNum {
            type Output = CycNum;
            fn $method(self, rhs: &CycNum) -> CycNum {
                self.$checked(rhs)
                    .unwrap_or_else(|e| panic!("cyclotomic arithmetic failed: {e}"))
            }
        }
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $method(self, rhs: CycNum) -> CycNum {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&CycNum> for CycNum {
            type Output = CycNum;
            fn $method(self, rhs: &CycNum) -> CycNum {
                (&self).$method(rhs)
            }
        }
        impl $tr<CycNum> for &CycNum {
            type Output = CycNum;
            fn $method(self, rhs: CycNum) -> CycNum {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        self.neg_ref()
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        self.neg_ref()
    }
}

impl AddAssign<&CycNum> for CycNum {
    fn add_assign(&mut self, rhs: &CycNum) {
        if self.order == rhs.order {
            if let (Repr::Int(a), Repr::Int(b)) = (&mut self.repr, &rhs.repr) {
                let sum: Option<Vec<i64>> = a.iter().zip(b).map(|(x, &y)| x.checked_add(y)).collect();
                if let Some(v) = sum {
                    *a = v;
                    return;
                }
            }
        }
        *self = &*self + rhs;
    }
}
