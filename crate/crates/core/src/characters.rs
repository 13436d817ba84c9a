//! Additive and multiplicative characters of `GF(q)`, subgroups of `GF(q)^×` and their
//! characters, extensions and annihilators.
//!
//! Characters are stored as integer exponents and evaluated through the field's trace and
//! discrete-log tables, never through per-character value tables. With `g` the field
//! generator:
//!
//! * `ε_a(x) = ζ_p^{Tr(a x)}`,
//! * `χ_k(g^t) = ζ_{q−1}^{k t}` and `χ_k(0) = 0`,
//! * on `H = ⟨g^s⟩` of order `d = (q−1)/s`, the character with exponent `j` sends
//!   `ω^t = g^{s t}` to `ζ_d^{j t}`.

use alloc::vec::Vec;

use crate::cyclotomic::{CycNum, RootOfUnity};
use crate::finite_field::{FieldElement, FieldError, FieldSpec};
use crate::ntheory::gcd;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CharError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("character belongs to GF({found}), expected GF({expected})")]
    MixedFields { expected: u32, found: u32 },
    #[error("index {index} does not divide q - 1 = {group_order}")]
    IndexDoesNotDivide { index: u32, group_order: u32 },
    #[error("element is not in the subgroup of index {index}")]
    NotInSubgroup { index: u32 },
}

fn same_field(field: &FieldSpec, q: u32) -> Result<(), CharError> {
    if field.q() == q {
        Ok(())
    } else {
        Err(CharError::MixedFields {
            expected: field.q(),
            found: q,
        })
    }
}

/// `ε_a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AddCharacter {
    a: FieldElement,
}

impl AddCharacter {
    pub fn new(a: FieldElement) -> Self {
        AddCharacter { a }
    }

    /// The canonical character `ε = ε_1`.
    pub fn canonical(field: &FieldSpec) -> Self {
        AddCharacter { a: field.one() }
    }

    pub fn trivial(field: &FieldSpec) -> Self {
        AddCharacter { a: field.zero() }
    }

    pub fn parameter(&self) -> FieldElement {
        self.a
    }

    pub fn is_trivial(&self) -> bool {
        self.a.is_zero()
    }

    pub fn eval_root(&self, field: &FieldSpec, x: FieldElement) -> Result<RootOfUnity, CharError> {
        let ax = field.checked_mul(self.a, x)?;
        Ok(RootOfUnity::new(field.p(), i64::from(field.trace(ax))))
    }

    /// `ε_a(x)` as an element of order `p`.
    pub fn eval(&self, field: &FieldSpec, x: FieldElement) -> Result<CycNum, CharError> {
        let r = self.eval_root(field, x)?;
        Ok(CycNum::root_of_unity(field.p(), i64::from(r.exponent)))
    }
}

/// `χ_k` on `GF(q)^×`, extended by `χ_k(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultCharacter {
    q: u32,
    k: u32,
}

impl MultCharacter {
    pub fn new(field: &FieldSpec, k: i64) -> Self {
        let n = i64::from(field.q() - 1);
        MultCharacter {
            q: field.q(),
            k: k.rem_euclid(n) as u32,
        }
    }

    pub fn trivial(field: &FieldSpec) -> Self {
        Self::new(field, 0)
    }

    pub fn exponent(&self) -> u32 {
        self.k
    }

    pub fn field_size(&self) -> u32 {
        self.q
    }

    pub fn is_trivial(&self) -> bool {
        self.k == 0
    }

    /// Order of the character in the dual group.
    pub fn order(&self) -> u32 {
        let n = self.q - 1;
        n / gcd(u64::from(self.k), u64::from(n)) as u32
    }

    pub fn mul(&self, other: &MultCharacter) -> MultCharacter {
        assert_eq!(self.q, other.q, "characters of different fields");
        let n = self.q - 1;
        MultCharacter {
            q: self.q,
            k: ((u64::from(self.k) + u64::from(other.k)) % u64::from(n)) as u32,
        }
    }

    /// The complex-conjugate character `χ̄ = χ^{-1}`.
    pub fn conj(&self) -> MultCharacter {
        let n = self.q - 1;
        MultCharacter {
            q: self.q,
            k: (n - self.k) % n,
        }
    }

    /// `None` at zero, otherwise `ζ_{q−1}^{k·log x}`.
    pub fn eval_root(
        &self,
        field: &FieldSpec,
        x: FieldElement,
    ) -> Result<Option<RootOfUnity>, CharError> {
        same_field(field, self.q)?;
        field.check(x)?;
        if x.is_zero() {
            return Ok(None);
        }
        let t = field.discrete_log(x)?;
        let n = self.q - 1;
        let e = u64::from(self.k) * u64::from(t) % u64::from(n);
        Ok(Some(RootOfUnity::new(n, e as i64)))
    }

    pub fn eval(&self, field: &FieldSpec, x: FieldElement) -> Result<CycNum, CharError> {
        let n = self.q - 1;
        Ok(match self.eval_root(field, x)? {
            Some(r) => CycNum::root_of_unity(n, i64::from(r.exponent)),
            None => CycNum::zero(n),
        })
    }
}

/// The unique subgroup `H = ⟨g^s⟩` of index `s` in `GF(q)^×`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    q: u32,
    index: u32,
    order: u32,
}

impl Subgroup {
    pub fn of_index(field: &FieldSpec, index: u32) -> Result<Self, CharError> {
        let n = field.q() - 1;
        if index == 0 || !n.is_multiple_of(index) {
            return Err(CharError::IndexDoesNotDivide {
                index,
                group_order: n,
            });
        }
        Ok(Subgroup {
            q: field.q(),
            index,
            order: n / index,
        })
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    /// `|H|`.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn field_size(&self) -> u32 {
        self.q
    }

    /// `ω = g^s`, the chosen generator of `H`.
    pub fn generator(&self, field: &FieldSpec) -> FieldElement {
        field.exp_of(self.index)
    }

    pub fn contains(&self, field: &FieldSpec, x: FieldElement) -> bool {
        match field.discrete_log(x) {
            Ok(t) => t % self.index == 0,
            Err(_) => false,
        }
    }

    /// `ω^0, ω^1, …, ω^{d−1}`.
    pub fn elements(&self, field: &FieldSpec) -> Vec<FieldElement> {
        (0..self.order).map(|t| field.exp_of(t * self.index)).collect()
    }
}

pub fn subgroup_of_index(field: &FieldSpec, index: u32) -> Result<Subgroup, CharError> {
    Subgroup::of_index(field, index)
}

/// A character of a subgroup `H`, `ω^t ↦ ζ_d^{j t}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubgroupChar {
    subgroup: Subgroup,
    j: u32,
}

impl SubgroupChar {
    pub fn new(subgroup: Subgroup, j: i64) -> Self {
        SubgroupChar {
            subgroup,
            j: j.rem_euclid(i64::from(subgroup.order)) as u32,
        }
    }

    pub fn trivial(subgroup: Subgroup) -> Self {
        Self::new(subgroup, 0)
    }

    pub fn subgroup(&self) -> Subgroup {
        self.subgroup
    }

    pub fn exponent(&self) -> u32 {
        self.j
    }

    pub fn is_trivial(&self) -> bool {
        self.j == 0
    }

    pub fn eval_root(&self, field: &FieldSpec, h: FieldElement) -> Result<RootOfUnity, CharError> {
        same_field(field, self.subgroup.q)?;
        let t = field.discrete_log(h).map_err(|_| CharError::NotInSubgroup {
            index: self.subgroup.index,
        })?;
        if t % self.subgroup.index != 0 {
            return Err(CharError::NotInSubgroup {
                index: self.subgroup.index,
            });
        }
        let d = self.subgroup.order;
        let e = u64::from(self.j) * u64::from(t / self.subgroup.index) % u64::from(d);
        Ok(RootOfUnity::new(d, e as i64))
    }

    /// `χ(h)` as an element of order `d = |H|`.
    pub fn eval(&self, field: &FieldSpec, h: FieldElement) -> Result<CycNum, CharError> {
        let r = self.eval_root(field, h)?;
        Ok(r.to_cyc().embed(self.subgroup.order).expect("order divides d"))
    }
}

/// Characters of `GF(q)^×` trivial on `H`: exactly the `χ_k` with `d | k`, sorted by `k`.
pub fn annihilator(field: &FieldSpec, subgroup: &Subgroup) -> Vec<MultCharacter> {
    (0..subgroup.index)
        .map(|i| MultCharacter::new(field, i64::from(i) * i64::from(subgroup.order)))
        .collect()
}

/// Every extension of `χ` to `GF(q)^×`, sorted by exponent.
///
/// The first is `φ_0`; since the extensions are `φ_0 ϑ_i` with `ϑ_i = χ_{d i}` the sorted
/// list is `φ_i = φ_0 ϑ_i`. For index 3 that is `φ_1 = φ_0 κ` and `φ_2 = φ_0 κ̄` where `κ`
/// has exponent `(q−1)/3`, so `κ(g) = ζ_3`.
pub fn extensions(field: &FieldSpec, chi: &SubgroupChar) -> Vec<MultCharacter> {
    let d = chi.subgroup.order;
    (0..chi.subgroup.index)
        .map(|i| MultCharacter::new(field, i64::from(chi.j) + i64::from(i) * i64::from(d)))
        .collect()
}

/// The restriction of `φ` to `H`: `φ(ω) = ζ_{q−1}^{k s} = ζ_d^k`, so `j = k mod d`.
pub fn restrict(
    field: &FieldSpec,
    phi: &MultCharacter,
    subgroup: &Subgroup,
) -> Result<SubgroupChar, CharError> {
    same_field(field, phi.q)?;
    same_field(field, subgroup.q)?;
    Ok(SubgroupChar::new(*subgroup, i64::from(phi.k)))
}
