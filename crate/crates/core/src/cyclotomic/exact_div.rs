//! Exact division in `Z[ζ_n]` when the quotient is known to be integral.
//!
//! The quotient is computed modulo word-sized primes, lifted by the Chinese remainder
//! theorem to symmetric residues, and accepted only once `quotient · divisor` reproduces
//! the dividend exactly.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{cyclotomic_polynomial, CycNum};

/// Primes are chosen below this bound so residue products fit in `u64`.
const PRIME_CEILING: u64 = 1 << 31;
const MAX_PRIMES: usize = 48;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(p)) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for 64-bit integers.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for b in BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'bases: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn residue(c: &BigInt, p: u64) -> u64 {
    c.mod_floor(&BigInt::from(p)).to_u64().expect("residue below p")
}

fn trim(a: &mut Vec<u64>) {
    while a.len() > 1 && a.last() == Some(&0) {
        a.pop();
    }
}

/// `a mod b` over `F_p`; `b` has a nonzero leading coefficient.
fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = pow_mod(b[db], p - 2, p);
    while r.len() > db && !(r.len() == 1 && r[0] == 0) {
        let k = r.len() - 1 - db;
        let c = mul_mod(r[r.len() - 1], lead_inv, p);
        for (i, &bi) in b.iter().enumerate() {
            r[k + i] = (r[k + i] + p - mul_mod(c, bi, p)) % p;
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn poly_divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    if r.len() <= db {
        return (vec![0], r);
    }
    let lead_inv = pow_mod(b[db], p - 2, p);
    let mut q = vec![0u64; r.len() - db];
    for k in (0..q.len()).rev() {
        let c = mul_mod(r[k + db], lead_inv, p);
        q[k] = c;
        if c == 0 {
            continue;
        }
        for (i, &bi) in b.iter().enumerate() {
            r[k + i] = (r[k + i] + p - mul_mod(c, bi, p)) % p;
        }
    }
    r.truncate(db.max(1));
    trim(&mut r);
    (q, r)
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            acc[i + j] += u128::from(x * y);
        }
    }
    acc.into_iter().map(|c| (c % u128::from(p)) as u64).collect()
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = (x + p - y) % p;
    }
    trim(&mut out);
    out
}

/// `a^{-1} mod (m, p)`, or `None` when `a` is not a unit there.
fn poly_inverse(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
    let mut r0 = m.to_vec();
    let mut r1 = poly_rem(a, m, p);
    let mut s0 = vec![0u64];
    let mut s1 = vec![1u64];
    while !(r1.len() == 1 && r1[0] == 0) {
        if r1.len() == 1 {
            let c = pow_mod(r1[0], p - 2, p);
            return Some(s1.iter().map(|&x| mul_mod(x, c, p)).collect());
        }
        let (q, r) = poly_divrem(&r0, &r1, p);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1, p), p);
        r0 = core::mem::replace(&mut r1, r);
        s0 = core::mem::replace(&mut s1, s2);
    }
    None
}

struct PrimeContext {
    p: u64,
    phi: Vec<u64>,
    divisor_inv: Vec<u64>,
}

/// A fixed integral divisor, reused across many exact divisions.
pub(crate) struct ExactDivisor {
    order: u32,
    divisor: CycNum,
    phi: Vec<i64>,
    primes: Vec<PrimeContext>,
    next_candidate: u64,
}

impl ExactDivisor {
    /// `None` unless `divisor` is nonzero and integral.
    pub(crate) fn new(divisor: &CycNum) -> Option<Self> {
        if divisor.is_zero() || !divisor.is_integral() {
            return None;
        }
        Some(ExactDivisor {
            order: divisor.order,
            divisor: divisor.clone(),
            phi: cyclotomic_polynomial(divisor.order),
            primes: Vec::new(),
            next_candidate: PRIME_CEILING - 1,
        })
    }

    fn integer_coeffs(x: &CycNum) -> Vec<BigInt> {
        x.big_parts().0
    }

    fn add_prime(&mut self) -> bool {
        let coeffs = Self::integer_coeffs(&self.divisor);
        while self.next_candidate > 3 {
            let p = self.next_candidate;
            self.next_candidate -= 2;
            if !is_prime_u64(p) {
                continue;
            }
            let phi: Vec<u64> = self.phi.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect();
            let a: Vec<u64> = coeffs.iter().map(|c| residue(c, p)).collect();
            if let Some(divisor_inv) = poly_inverse(&a, &phi, p) {
                self.primes.push(PrimeContext { p, phi, divisor_inv });
                return true;
            }
        }
        false
    }

    /// The integral `c` with `c · divisor = num`, if it exists.
    pub(crate) fn divide(&mut self, num: &CycNum) -> Option<CycNum> {
        if num.order != self.order || !num.is_integral() {
            return None;
        }
        if num.is_zero() {
            return Some(CycNum::zero(self.order));
        }
        let coeffs = Self::integer_coeffs(num);
        let dim = coeffs.len();
        // running CRT state: value ≡ residues mod modulus
        let mut lifted: Vec<BigInt> = vec![BigInt::zero(); dim];
        let mut modulus = BigInt::one();
        let mut previous: Option<Vec<BigInt>> = None;
        for k in 0..MAX_PRIMES {
            if k == self.primes.len() && !self.add_prime() {
                return None;
            }
            let ctx = &self.primes[k];
            let p = ctx.p;
            let a: Vec<u64> = coeffs.iter().map(|c| residue(c, p)).collect();
            let mut c = poly_rem(&poly_mul(&a, &ctx.divisor_inv, p), &ctx.phi, p);
            c.resize(dim, 0);
            let pb = BigInt::from(p);
            let m_inv = BigInt::from(pow_mod(residue(&modulus, p), p - 2, p));
            for (x, &r) in lifted.iter_mut().zip(&c) {
                // x' = x + modulus * ((r - x) * modulus^{-1} mod p)
                let t = ((BigInt::from(r) - &*x) * &m_inv).mod_floor(&pb);
                *x += &modulus * t;
            }
            modulus *= &pb;
            let half = &modulus >> 1;
            let symmetric: Vec<BigInt> = lifted
                .iter()
                .map(|x| if *x > half { x - &modulus } else { x.clone() })
                .collect();
            let stable = previous.as_ref() == Some(&symmetric);
            if stable || k == 0 {
                let candidate = CycNum::from_big_reduced(self.order, symmetric.clone(), BigInt::one());
                if candidate.checked_mul(&self.divisor).ok().as_ref() == Some(num) {
                    return Some(candidate);
                }
                if stable {
                    // a stable lift that fails verification: no integral quotient
                    return None;
                }
            }
            previous = Some(symmetric);
        }
        None
    }
}
