//! Deterministic `GF(p^m)` with exp/log tables, absolute trace and discrete logarithms.
//!
//! Elements are stored by their index `c_0 + c_1 p + … + c_{m−1} p^{m−1}` in the polynomial
//! basis `1, α, …, α^{m−1}`. That index fixes the element order used everywhere: zero first,
//! then increasing index.

use alloc::vec;
use alloc::vec::Vec;

use crate::ntheory::{is_prime, prime_factors, prime_power};

/// Default largest field size accepted by [`FieldSpec::new`].
pub const DEFAULT_FIELD_CAP: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field size {size} exceeds the cap {cap}")]
    TooLarge { size: u64, cap: u64 },
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("zero has no discrete logarithm")]
    ZeroLog,
    #[error("element belongs to GF({found}), expected GF({expected})")]
    MixedFields { expected: u32, found: u32 },
    #[error("coefficient vector does not describe an element of GF({0})")]
    BadCoefficients(u32),
}

/// An element of some `GF(q)`; carries `q` so mixed-field use is detected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    q: u32,
    index: u32,
}

impl FieldElement {
    pub fn index(self) -> u32 {
        self.index
    }

    pub fn field_size(self) -> u32 {
        self.q
    }

    pub fn is_zero(self) -> bool {
        self.index == 0
    }
}

/// A fully tabulated finite field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: FieldElement,
    exp: Vec<u32>,
    log: Vec<u32>,
    trace: Vec<u32>,
}

// Polynomial helpers over GF(p), coefficient vectors constant term first.

fn trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(b: u32, mut e: u32, p: u32) -> u32 {
    let p64 = u64::from(p);
    let mut acc = 1u64 % p64;
    let mut b64 = u64::from(b) % p64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b64 % p64;
        }
        b64 = b64 * b64 % p64;
        e >>= 1;
    }
    acc as u32
}

fn poly_rem(a: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let df = f.len() - 1;
    let lead_inv = inv_mod(f[df], p);
    while r.len() > df {
        let k = r.len() - 1;
        let c = r[k] * lead_inv % p;
        let shift = k - df;
        for (i, &fi) in f.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * fi % p) % p;
        }
        trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + u64::from(x) * u64::from(y)) % u64::from(p);
        }
    }
    let out: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
    poly_rem(&out, f, p)
}

fn poly_powmod(base: &[u32], mut e: u64, f: &[u32], p: u32) -> Vec<u32> {
    let mut acc = vec![1u32];
    let mut b = poly_rem(base, f, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &b, f, p);
        }
        b = poly_mulmod(&b, &b, f, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Irreducibility of a monic `f` of degree `m ≥ 2`: no root in `GF(p)` and
/// `gcd(f, x^{p^i} − x) = 1` for `1 ≤ i ≤ m/2`.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let m = f.len() - 1;
    let has_root = (0..p).any(|x| {
        let mut acc = 0u64;
        for &c in f.iter().rev() {
            acc = (acc * u64::from(x) + u64::from(c)) % u64::from(p);
        }
        acc == 0
    });
    if has_root {
        return false;
    }
    let x = vec![0u32, 1];
    let mut frob = x.clone();
    for _ in 1..=m / 2 {
        frob = poly_powmod(&frob, u64::from(p), f, p);
        let mut diff = frob.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        trim(&mut diff);
        let g = poly_gcd(f, &diff, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

impl FieldSpec {
    /// `GF(p^m)` with the default size cap.
    pub fn new(p: u64, m: u32) -> Result<Self, FieldError> {
        Self::with_cap(p, m, DEFAULT_FIELD_CAP)
    }

    /// `GF(q)` for a prime power `q`.
    pub fn of_order(q: u64) -> Result<Self, FieldError> {
        let (p, m) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Self::new(p, m)
    }

    pub fn with_cap(p: u64, m: u32, cap: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let size = p.checked_pow(m).unwrap_or(u64::MAX);
        if size > cap || size > u64::from(u32::MAX) {
            return Err(FieldError::TooLarge { size, cap });
        }
        let p = p as u32;
        let q = size as u32;
        let modulus = Self::smallest_irreducible(p, m);
        let generator_index = Self::smallest_generator(p, q, &modulus);

        let mut spec = FieldSpec {
            p,
            m,
            q,
            modulus,
            generator: FieldElement {
                q,
                index: generator_index,
            },
            exp: Vec::with_capacity(q as usize - 1),
            log: vec![u32::MAX; q as usize],
            trace: vec![0; q as usize],
        };
        let g = spec.to_coeffs_raw(generator_index);
        let mut cur = vec![1u32];
        for t in 0..q - 1 {
            let idx = spec.index_of_coeffs(&cur);
            spec.exp.push(idx);
            spec.log[idx as usize] = t;
            cur = poly_mulmod(&cur, &g, &spec.modulus, p);
        }
        debug_assert_eq!(spec.index_of_coeffs(&cur), 1);
        for idx in 1..q {
            let x = FieldElement { q, index: idx };
            let mut acc = spec.zero();
            let mut power = x;
            for _ in 0..m {
                acc = spec.add(acc, power);
                power = spec.pow(power, u64::from(p));
            }
            assert!(acc.index < p, "trace left the prime subfield");
            spec.trace[idx as usize] = acc.index;
        }
        Ok(spec)
    }

    /// Monic degree-`m` irreducible with `(c_0, …, c_{m−1})` lexicographically smallest.
    fn smallest_irreducible(p: u32, m: u32) -> Vec<u32> {
        if m == 1 {
            return vec![0, 1];
        }
        let count = u64::from(p).pow(m);
        for code in 0..count {
            // c_0 is the most significant digit of `code`
            let mut f = vec![0u32; m as usize + 1];
            let mut rest = code;
            for i in (0..m as usize).rev() {
                f[i] = (rest % u64::from(p)) as u32;
                rest /= u64::from(p);
            }
            f[m as usize] = 1;
            if f[0] != 0 && is_irreducible(&f, p) {
                return f;
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    fn smallest_generator(p: u32, q: u32, modulus: &[u32]) -> u32 {
        let n = u64::from(q - 1);
        let factors = prime_factors(n);
        (1..q)
            .find(|&idx| {
                let mut g = Vec::new();
                let mut rest = idx;
                while rest > 0 {
                    g.push(rest % p);
                    rest /= p;
                }
                factors
                    .iter()
                    .all(|&l| poly_powmod(&g, n / l, modulus, p) != [1])
            })
            .expect("the multiplicative group is cyclic")
    }

    fn to_coeffs_raw(&self, mut idx: u32) -> Vec<u32> {
        let mut c = Vec::with_capacity(self.m as usize);
        for _ in 0..self.m {
            c.push(idx % self.p);
            idx /= self.p;
        }
        c
    }

    fn index_of_coeffs(&self, c: &[u32]) -> u32 {
        c.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Coefficients of the defining polynomial, constant term first, ending in 1.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { q: self.q, index: 0 }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement { q: self.q, index: 1 }
    }

    /// Element with the given index; panics when out of range.
    pub fn element(&self, index: u32) -> FieldElement {
        assert!(index < self.q, "index {index} outside GF({})", self.q);
        FieldElement { q: self.q, index }
    }

    /// The prime-subfield element `c mod p`.
    pub fn from_prime(&self, c: u64) -> FieldElement {
        self.element((c % u64::from(self.p)) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement, FieldError> {
        if coeffs.len() != self.m as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(FieldError::BadCoefficients(self.q));
        }
        Ok(self.element(self.index_of_coeffs(coeffs)))
    }

    pub fn coeffs(&self, x: FieldElement) -> Vec<u32> {
        self.to_coeffs_raw(x.index)
    }

    /// All `q` elements, zero first, in increasing index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(move |index| FieldElement { q: self.q, index })
    }

    pub fn check(&self, x: FieldElement) -> Result<FieldElement, FieldError> {
        if x.q == self.q {
            Ok(x)
        } else {
            Err(FieldError::MixedFields {
                expected: self.q,
                found: x.q,
            })
        }
    }

    pub fn checked_add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        self.check(b)?;
        if self.p == 2 {
            return Ok(self.element(a.index ^ b.index));
        }
        let (mut x, mut y) = (a.index, b.index);
        let mut out = 0;
        let mut place = 1;
        while x > 0 || y > 0 {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        Ok(self.element(out))
    }

    pub fn checked_mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        self.check(b)?;
        if a.is_zero() || b.is_zero() {
            return Ok(self.zero());
        }
        let n = self.q - 1;
        let t = (self.log[a.index as usize] + self.log[b.index as usize]) % n;
        Ok(self.exp_of(t))
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.checked_add(a, b).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.checked_mul(a, b).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.mul(self.from_prime(u64::from(self.p) - 1), a)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        if a.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        let n = self.q - 1;
        Ok(self.exp_of((n - self.log[a.index as usize]) % n))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        self.check(a).unwrap_or_else(|e| panic!("{e}"));
        if a.is_zero() {
            return if e == 0 { self.one() } else { self.zero() };
        }
        let n = u64::from(self.q - 1);
        let t = u64::from(self.log[a.index as usize]) * (e % n) % n;
        self.exp_of(t as u32)
    }

    /// `generator^t`.
    pub fn exp_of(&self, t: u32) -> FieldElement {
        self.element(self.exp[(t % (self.q - 1)) as usize])
    }

    /// The `t ∈ [0, q−1)` with `generator^t = x`.
    pub fn discrete_log(&self, x: FieldElement) -> Result<u32, FieldError> {
        self.check(x)?;
        if x.is_zero() {
            return Err(FieldError::ZeroLog);
        }
        Ok(self.log[x.index as usize])
    }

    /// Absolute trace `x + x^p + … + x^{p^{m−1}}`, as a residue mod `p`.
    pub fn trace(&self, x: FieldElement) -> u32 {
        self.check(x).unwrap_or_else(|e| panic!("{e}"));
        self.trace[x.index as usize]
    }

    /// Multiplicative order of a nonzero element.
    pub fn order_of(&self, x: FieldElement) -> Result<u32, FieldError> {
        let t = self.discrete_log(x)?;
        let n = self.q - 1;
        Ok(n / crate::ntheory::gcd(u64::from(t), u64::from(n)) as u32)
    }
}
