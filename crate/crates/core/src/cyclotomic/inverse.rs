//! Inversion modulo a polynomial over `Q` by the extended Euclidean algorithm.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::Zero;

type Poly = Vec<BigRational>;

fn trim(p: &mut Poly) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    if p.is_empty() {
        p.push(BigRational::zero());
    }
}

fn is_zero(p: &Poly) -> bool {
    p.iter().all(Zero::is_zero)
}

fn divrem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let mut rem = a.clone();
    trim(&mut rem);
    let db = b.len() - 1;
    if rem.len() <= db {
        return (vec![BigRational::zero()], rem);
    }
    let lead = &b[db];
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + db] / lead;
        if c.is_zero() {
            continue;
        }
        for (i, bi) in b.iter().enumerate() {
            rem[k + i] -= &c * bi;
        }
        quot[k] = c;
    }
    rem.truncate(db.max(1));
    trim(&mut rem);
    (quot, rem)
}

fn sub_mul(a: &Poly, q: &Poly, b: &Poly) -> Poly {
    let len = a.len().max(q.len() + b.len() - 1);
    let mut out = vec![BigRational::zero(); len];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, x) in q.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] -= x * y;
        }
    }
    trim(&mut out);
    out
}

/// Returns `u` with `a·u ≡ 1 (mod modulus)`, or `None` when `gcd(a, modulus) ≠ 1`.
pub(crate) fn invert_mod(a: &[BigRational], modulus: &[BigRational]) -> Option<Poly> {
    let mut r0: Poly = modulus.to_vec();
    let mut r1: Poly = a.to_vec();
    trim(&mut r0);
    trim(&mut r1);
    let (_, reduced) = divrem(&r1, &r0);
    r1 = reduced;
    let mut s0: Poly = vec![BigRational::zero()];
    let mut s1: Poly = vec![BigRational::from_integer(1.into())];
    while !is_zero(&r1) {
        if r1.len() == 1 {
            let c = r1[0].clone();
            return Some(s1.into_iter().map(|x| x / &c).collect());
        }
        let (q, r) = divrem(&r0, &r1);
        let s2 = sub_mul(&s0, &q, &s1);
        r0 = core::mem::replace(&mut r1, r);
        s0 = core::mem::replace(&mut s1, s2);
    }
    None
}
