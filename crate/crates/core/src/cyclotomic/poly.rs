//! Cyclotomic polynomials and reduction kernels modulo `Φ_n`.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;
use spin::Mutex;

use crate::ntheory::{divisors, mobius};

/// `Φ_n` split into its degree and the nonzero coefficients below the leading 1.
#[derive(Debug)]
pub(crate) struct Modulus {
    pub(crate) n: usize,
    pub(crate) degree: usize,
    pub(crate) tail: Vec<(usize, i64)>,
}

static MODULI: Mutex<BTreeMap<u32, Arc<Modulus>>> = Mutex::new(BTreeMap::new());

/// Coefficients of `Φ_n`, constant term first.
///
/// Built as `∏_{d | n} (x^d − 1)^{μ(n/d)}`: every factor with `μ = 1` is multiplied in first,
/// then each `μ = −1` factor is removed by exact division.
///
/// # Panics
/// Panics when `n == 0`.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    assert!(n >= 1, "cyclotomic polynomial needs n >= 1");
    let n = u64::from(n);
    let mut up = Vec::new();
    let mut down = Vec::new();
    for d in divisors(n) {
        match mobius(n / d) {
            1 => up.push(d as usize),
            -1 => down.push(d as usize),
            _ => {}
        }
    }
    let mut poly: Vec<i128> = vec![1];
    for d in up {
        let mut next = vec![0i128; poly.len() + d];
        for (i, &c) in poly.iter().enumerate() {
            next[i + d] += c;
            next[i] -= c;
        }
        poly = next;
    }
    for d in down {
        // poly = quot * (x^d - 1)  =>  quot[k - d] = poly[k] + quot[k]
        let deg = poly.len() - 1;
        let mut quot = vec![0i128; deg - d + 1];
        for k in (d..=deg).rev() {
            let above = if k <= deg - d { quot[k] } else { 0 };
            quot[k - d] = poly[k] + above;
        }
        debug_assert!((0..d).all(|k| poly[k] == -quot.get(k).copied().unwrap_or(0)));
        poly = quot;
    }
    poly.into_iter()
        .map(|c| i64::try_from(c).expect("cyclotomic coefficient exceeds i64"))
        .collect()
}

pub(crate) fn modulus(n: u32) -> Arc<Modulus> {
    if let Some(m) = MODULI.lock().get(&n) {
        return Arc::clone(m);
    }
    let coeffs = cyclotomic_polynomial(n);
    let degree = coeffs.len() - 1;
    let tail = coeffs[..degree]
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0)
        .map(|(i, c)| (i, *c))
        .collect();
    let built = Arc::new(Modulus {
        n: n as usize,
        degree,
        tail,
    });
    MODULI.lock().entry(n).or_insert(built).clone()
}

/// Reduces `v` modulo `x^n − 1` and then `Φ_n`, leaving exactly `degree` coefficients.
/// Returns `None` on `i128` overflow.
pub(crate) fn reduce_wide(m: &Modulus, v: &mut Vec<i128>) -> Option<()> {
    if v.len() > m.n {
        for i in m.n..v.len() {
            let c = v[i];
            v[i % m.n] = v[i % m.n].checked_add(c)?;
        }
        v.truncate(m.n);
    }
    for k in (m.degree..v.len()).rev() {
        let c = v[k];
        if c == 0 {
            continue;
        }
        let base = k - m.degree;
        for &(i, a) in &m.tail {
            let t = c.checked_mul(i128::from(a))?;
            v[base + i] = v[base + i].checked_sub(t)?;
        }
        v[k] = 0;
    }
    v.resize(m.degree, 0);
    Some(())
}

pub(crate) fn reduce_big(m: &Modulus, v: &mut Vec<BigInt>) {
    if v.len() > m.n {
        let extra: Vec<BigInt> = v.drain(m.n..).collect();
        for (i, c) in extra.into_iter().enumerate() {
            v[(m.n + i) % m.n] += c;
        }
    }
    for k in (m.degree..v.len()).rev() {
        if v[k].is_zero() {
            continue;
        }
        let c = core::mem::take(&mut v[k]);
        let base = k - m.degree;
        for &(i, a) in &m.tail {
            v[base + i] -= &c * a;
        }
    }
    v.resize(m.degree, BigInt::zero());
}
