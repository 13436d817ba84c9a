//! The group algebra `C[GF(q)]`: Fourier transform and inversion, the `χ`-symmetry action,
//! Gauss sums, the sums `T_j`, and compressed Fourier matrices.
//!
//! Group-algebra elements are dense vectors indexed by the field's element index. Spectra
//! are indexed the same way, position `a` holding the value at `ε_a`.

use alloc::vec;
use alloc::vec::Vec;

use crate::characters::{
    extensions, AddCharacter, CharError, MultCharacter, Subgroup, SubgroupChar,
};
use crate::cyclotomic::{CycError, CycMatrix, CycNum, PowerSum};
use crate::finite_field::{FieldElement, FieldError, FieldSpec};
use crate::ntheory::lcm;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransformError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Char(#[from] CharError),
    #[error(transparent)]
    Cyc(#[from] CycError),
    #[error("expected {expected} values, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("object belongs to GF({found}), expected GF({expected})")]
    MixedFields { expected: u32, found: u32 },
    #[error("invalid orbit representatives: {0}")]
    InvalidRepresentatives(&'static str),
    #[error("expected {expected} Gauss sums, found {found}")]
    WrongArity { expected: usize, found: usize },
}

fn same_field(field: &FieldSpec, q: u32) -> Result<(), TransformError> {
    if field.q() == q {
        Ok(())
    } else {
        Err(TransformError::MixedFields {
            expected: field.q(),
            found: q,
        })
    }
}

/// Brings every value to the least common order with `extra`.
fn common_order(values: &[CycNum], extra: u32) -> Result<(u32, Vec<CycNum>), CycError> {
    let mut n = u64::from(extra);
    for v in values {
        n = lcm(n, u64::from(v.order()));
    }
    let cap = crate::cyclotomic::max_order();
    if n > u64::from(cap) {
        return Err(CycError::OrderOverflow { order: n, cap });
    }
    let n = n as u32;
    let lifted = values.iter().map(|v| v.embed(n)).collect::<Result<_, _>>()?;
    Ok((n, lifted))
}

/// `f = Σ f_a a`, stored as `f_a` at position `a.index()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAlgebraElement {
    q: u32,
    coeffs: Vec<CycNum>,
}

impl GroupAlgebraElement {
    pub fn new(field: &FieldSpec, coeffs: Vec<CycNum>) -> Result<Self, TransformError> {
        if coeffs.len() != field.q() as usize {
            return Err(TransformError::WrongLength {
                expected: field.q() as usize,
                found: coeffs.len(),
            });
        }
        Ok(GroupAlgebraElement {
            q: field.q(),
            coeffs,
        })
    }

    pub fn from_fn(field: &FieldSpec, mut f: impl FnMut(FieldElement) -> CycNum) -> Self {
        GroupAlgebraElement {
            q: field.q(),
            coeffs: field.elements().map(&mut f).collect(),
        }
    }

    pub fn zero(field: &FieldSpec) -> Self {
        Self::from_fn(field, |_| CycNum::zero(1))
    }

    pub fn constant(field: &FieldSpec, c: &CycNum) -> Self {
        Self::from_fn(field, |_| c.clone())
    }

    /// `δ_x`.
    pub fn delta(field: &FieldSpec, x: FieldElement) -> Self {
        Self::from_fn(field, |y| CycNum::from_i64(1, i64::from(y == x)))
    }

    /// `Σ_a χ(a) a`, with `χ(0) = 0`.
    pub fn from_mult_character(field: &FieldSpec, chi: &MultCharacter) -> Result<Self, TransformError> {
        let coeffs = field
            .elements()
            .map(|x| chi.eval(field, x))
            .collect::<Result<_, _>>()?;
        Ok(GroupAlgebraElement {
            q: field.q(),
            coeffs,
        })
    }

    pub fn field_size(&self) -> u32 {
        self.q
    }

    pub fn get(&self, x: FieldElement) -> &CycNum {
        &self.coeffs[x.index() as usize]
    }

    pub fn coeffs(&self) -> &[CycNum] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<CycNum> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(CycNum::is_zero)
    }
}

/// `F(ε_a)` for every `a`, stored at position `a.index()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    q: u32,
    values: Vec<CycNum>,
}

impl Spectrum {
    pub fn new(field: &FieldSpec, values: Vec<CycNum>) -> Result<Self, TransformError> {
        if values.len() != field.q() as usize {
            return Err(TransformError::WrongLength {
                expected: field.q() as usize,
                found: values.len(),
            });
        }
        Ok(Spectrum {
            q: field.q(),
            values,
        })
    }

    pub fn field_size(&self) -> u32 {
        self.q
    }

    pub fn at(&self, psi: AddCharacter) -> &CycNum {
        &self.values[psi.parameter().index() as usize]
    }

    pub fn values(&self) -> &[CycNum] {
        &self.values
    }

    pub fn into_values(self) -> Vec<CycNum> {
        self.values
    }
}

/// `Σ_x values[x] ζ_p^{sign·Tr(a x)}` for every `a`, grouping terms by trace first.
fn trace_transform(field: &FieldSpec, values: &[CycNum], sign: i64) -> Result<Vec<CycNum>, CycError> {
    let p = field.p();
    let (n, lifted) = common_order(values, p)?;
    let step = i64::from(n / p);
    let mut out = Vec::with_capacity(values.len());
    for a in field.elements() {
        let mut buckets: Vec<Option<CycNum>> = vec![None; p as usize];
        for (x, v) in field.elements().zip(&lifted) {
            if v.is_zero() {
                continue;
            }
            let t = field.trace(field.mul(a, x)) as usize;
            match &mut buckets[t] {
                Some(b) => *b += v,
                slot => *slot = Some(v.clone()),
            }
        }
        let mut acc = CycNum::zero(n);
        for (t, b) in buckets.iter().enumerate() {
            if let Some(b) = b {
                acc += &b.mul_root(sign * step * t as i64);
            }
        }
        out.push(acc);
    }
    Ok(out)
}

/// `f̂(ε_a) = Σ_x f_x ε_a(x)`.
pub fn fourier_transform(field: &FieldSpec, f: &GroupAlgebraElement) -> Result<Spectrum, TransformError> {
    same_field(field, f.q)?;
    Ok(Spectrum {
        q: f.q,
        values: trace_transform(field, &f.coeffs, 1)?,
    })
}

/// `f_x = (1/q) Σ_a \overline{ε_a(x)} F(ε_a)`.
pub fn inverse_fourier(field: &FieldSpec, spectrum: &Spectrum) -> Result<GroupAlgebraElement, TransformError> {
    same_field(field, spectrum.q)?;
    let inv_q = num_rational::BigRational::new(1.into(), field.q().into());
    let coeffs = trace_transform(field, &spectrum.values, -1)?
        .into_iter()
        .map(|v| v.scalar_mul(&inv_q))
        .collect();
    Ok(GroupAlgebraElement {
        q: spectrum.q,
        coeffs,
    })
}

/// `L(χ)_h f`: the coefficient at `h a` becomes `χ(h) f_a`.
pub fn apply_symmetry_action(
    field: &FieldSpec,
    h: FieldElement,
    chi: &SubgroupChar,
    f: &GroupAlgebraElement,
) -> Result<GroupAlgebraElement, TransformError> {
    same_field(field, f.q)?;
    let c = chi.eval(field, h)?;
    let mut coeffs = vec![CycNum::zero(1); f.coeffs.len()];
    for (a, v) in field.elements().zip(&f.coeffs) {
        coeffs[field.mul(h, a).index() as usize] = v.checked_mul(&c)?;
    }
    Ok(GroupAlgebraElement { q: f.q, coeffs })
}

/// `f_{h a} = χ(h) f_a` for every `h ∈ H` and `a`.
pub fn is_chi_symmetric(
    field: &FieldSpec,
    f: &GroupAlgebraElement,
    chi: &SubgroupChar,
) -> Result<bool, TransformError> {
    same_field(field, f.q)?;
    for h in chi.subgroup().elements(field) {
        let c = chi.eval(field, h)?;
        for (a, v) in field.elements().zip(&f.coeffs) {
            if *f.get(field.mul(h, a)) != v.checked_mul(&c)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `g^0, …, g^{s−1}`, preceded by 0 when `χ` is trivial.
pub fn orbit_representatives(field: &FieldSpec, chi: &SubgroupChar) -> Vec<FieldElement> {
    let s = chi.subgroup().index();
    let mut reps = Vec::with_capacity(s as usize + 1);
    if chi.is_trivial() {
        reps.push(field.zero());
    }
    reps.extend((0..s).map(|t| field.exp_of(t)));
    reps
}

/// Checks that `reps` meets every orbit exactly once: `F_q` for trivial `χ`, `F_q^×`
/// otherwise.
pub fn validate_representatives(
    field: &FieldSpec,
    chi: &SubgroupChar,
    reps: &[FieldElement],
) -> Result<(), TransformError> {
    let s = chi.subgroup().index();
    let mut seen = vec![false; s as usize];
    let mut zero_seen = false;
    for &r in reps {
        field.check(r)?;
        if r.is_zero() {
            if !chi.is_trivial() {
                return Err(TransformError::InvalidRepresentatives(
                    "0 is not allowed for a nontrivial character",
                ));
            }
            if zero_seen {
                return Err(TransformError::InvalidRepresentatives("orbit {0} hit twice"));
            }
            zero_seen = true;
            continue;
        }
        let coset = (field.discrete_log(r)? % s) as usize;
        if seen[coset] {
            return Err(TransformError::InvalidRepresentatives("an orbit is hit twice"));
        }
        seen[coset] = true;
    }
    if !seen.iter().all(|&b| b) || (chi.is_trivial() && !zero_seen) {
        return Err(TransformError::InvalidRepresentatives("an orbit is missed"));
    }
    Ok(())
}

/// The `χ`-symmetric `f` with `f_{h r} = χ(h) values[r]` for each representative `r`.
///
/// `reps` may be any complete representative system; `values[i]` belongs to `reps[i]`.
pub fn extend_from_representatives(
    field: &FieldSpec,
    chi: &SubgroupChar,
    reps: &[FieldElement],
    values: &[CycNum],
) -> Result<GroupAlgebraElement, TransformError> {
    if values.len() != reps.len() {
        return Err(TransformError::WrongLength {
            expected: reps.len(),
            found: values.len(),
        });
    }
    validate_representatives(field, chi, reps)?;
    let h = chi.subgroup().elements(field);
    let chi_h: Vec<CycNum> = h.iter().map(|&x| chi.eval(field, x)).collect::<Result<_, _>>()?;
    let mut coeffs = vec![CycNum::zero(1); field.q() as usize];
    for (&r, v) in reps.iter().zip(values) {
        if r.is_zero() {
            coeffs[0] = v.clone();
            continue;
        }
        for (&x, c) in h.iter().zip(&chi_h) {
            coeffs[field.mul(x, r).index() as usize] = v.checked_mul(c)?;
        }
    }
    Ok(GroupAlgebraElement {
        q: field.q(),
        coeffs,
    })
}

/// `u_r = Σ_{h∈H} χ(h) (h r)`, the basis vector whose transform is column `r` of the
/// compressed Fourier matrix. For `r ≠ 0` this is the extension of `δ_r`; for `r = 0` it is
/// `|H| δ_0`.
pub fn cft_basis_element(
    field: &FieldSpec,
    chi: &SubgroupChar,
    r: FieldElement,
) -> Result<GroupAlgebraElement, TransformError> {
    field.check(r)?;
    let mut coeffs = vec![CycNum::zero(1); field.q() as usize];
    for x in chi.subgroup().elements(field) {
        let c = chi.eval(field, x)?;
        let slot = &mut coeffs[field.mul(x, r).index() as usize];
        *slot = slot.checked_add(&c)?;
    }
    Ok(GroupAlgebraElement {
        q: field.q(),
        coeffs,
    })
}

/// `G(χ, ψ) = Σ_{c≠0} χ(c) ψ(c)`, as a power sum of order `p (q−1)`.
pub fn gauss_sum(
    field: &FieldSpec,
    chi: &MultCharacter,
    psi: &AddCharacter,
) -> Result<CycNum, TransformError> {
    same_field(field, chi.field_size())?;
    same_field(field, psi.parameter().field_size())?;
    let p = u64::from(field.p());
    let n = u64::from(field.q() - 1);
    let mut sum = PowerSum::new((p * n) as u32);
    for t in 0..field.q() - 1 {
        let c = field.exp_of(t);
        let tr = u64::from(field.trace(field.mul(psi.parameter(), c)));
        let e = u64::from(chi.exponent()) * u64::from(t) % n;
        sum.add_exponent(e * p + tr * n, 1);
    }
    Ok(sum.finish())
}

/// `G_i = G(φ_i, ε)` over the extensions `φ_0, …, φ_{s−1}` of a subgroup character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussSumSet {
    chi: SubgroupChar,
    sums: Vec<CycNum>,
}

impl GaussSumSet {
    pub fn chi(&self) -> SubgroupChar {
        self.chi
    }

    pub fn sums(&self) -> &[CycNum] {
        &self.sums
    }

    pub fn get(&self, i: usize) -> &CycNum {
        &self.sums[i]
    }

    pub fn len(&self) -> usize {
        self.sums.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sums.is_empty()
    }

    /// True when every `G_i` coincides.
    pub fn all_equal(&self) -> bool {
        self.sums.windows(2).all(|w| w[0] == w[1])
    }
}

pub fn gauss_set(field: &FieldSpec, chi: &SubgroupChar) -> Result<GaussSumSet, TransformError> {
    let eps = AddCharacter::canonical(field);
    let sums = extensions(field, chi)
        .iter()
        .map(|phi| gauss_sum(field, phi, &eps))
        .collect::<Result<_, _>>()?;
    Ok(GaussSumSet { chi: *chi, sums })
}

/// `T_j = Σ_i ζ_3^{j i} G_i`, for the three Gauss sums of an index-3 subgroup character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TSums {
    t: [CycNum; 3],
}

impl TSums {
    /// `T_j` with `j` read mod 3.
    pub fn get(&self, j: i64) -> &CycNum {
        &self.t[j.rem_euclid(3) as usize]
    }

    pub fn as_array(&self) -> &[CycNum; 3] {
        &self.t
    }
}

pub fn t_sums(g: &GaussSumSet) -> Result<TSums, TransformError> {
    if g.len() != 3 {
        return Err(TransformError::WrongArity {
            expected: 3,
            found: g.len(),
        });
    }
    let t = [0i64, 1, 2].map(|j| {
        let mut acc = CycNum::zero(3);
        for (i, gi) in g.sums.iter().enumerate() {
            acc = acc + gi * CycNum::root_of_unity(3, j * i as i64);
        }
        acc
    });
    Ok(TSums { t })
}

/// A `(χ, R, S)`-compressed Fourier matrix: rows indexed by `S`, columns by `R`.
#[derive(Debug, Clone, PartialEq)]
pub struct CftMatrix {
    chi: SubgroupChar,
    r: Vec<FieldElement>,
    s: Vec<FieldElement>,
    matrix: CycMatrix,
}

impl CftMatrix {
    pub fn chi(&self) -> SubgroupChar {
        self.chi
    }

    pub fn r(&self) -> &[FieldElement] {
        &self.r
    }

    pub fn s(&self) -> &[FieldElement] {
        &self.s
    }

    pub fn matrix(&self) -> &CycMatrix {
        &self.matrix
    }

    pub fn size(&self) -> usize {
        self.r.len()
    }

    /// Entry at row `S[i]`, column `R[j]`.
    pub fn entry(&self, i: usize, j: usize) -> &CycNum {
        self.matrix.get(i, j)
    }
}

/// `Σ_{h∈H} χ(h) ε(h x)`.
pub fn partial_character_sum(
    field: &FieldSpec,
    chi: &SubgroupChar,
    x: FieldElement,
) -> Result<CycNum, TransformError> {
    let sub = chi.subgroup();
    let p = u64::from(field.p());
    let d = u64::from(sub.order());
    let order = if chi.is_trivial() { p } else { p * d };
    let mut sum = PowerSum::new(order as u32);
    for t in 0..sub.order() {
        let h = field.exp_of(t * sub.index());
        let tr = u64::from(field.trace(field.mul(h, x)));
        if chi.is_trivial() {
            sum.add_exponent(tr, 1);
        } else {
            let e = u64::from(chi.exponent()) * u64::from(t) % d;
            sum.add_exponent(e * p + tr * d, 1);
        }
    }
    Ok(sum.finish())
}

pub fn cft_matrix(
    field: &FieldSpec,
    chi: &SubgroupChar,
    r: &[FieldElement],
    s: &[FieldElement],
) -> Result<CftMatrix, TransformError> {
    same_field(field, chi.subgroup().field_size())?;
    validate_representatives(field, chi, r)?;
    validate_representatives(field, chi, s)?;
    let mut entries = Vec::with_capacity(r.len() * s.len());
    for &si in s {
        for &rj in r {
            entries.push(partial_character_sum(field, chi, field.mul(rj, si))?);
        }
    }
    let labels = |v: &[FieldElement]| v.iter().map(|x| u64::from(x.index())).collect();
    let matrix = CycMatrix::new(s.len(), r.len(), entries)?.with_labels(labels(s), labels(r))?;
    Ok(CftMatrix {
        chi: *chi,
        r: r.to_vec(),
        s: s.to_vec(),
        matrix,
    })
}

/// The matrix on the canonical representatives, `R = S`.
pub fn cft_matrix_canonical(field: &FieldSpec, chi: &SubgroupChar) -> Result<CftMatrix, TransformError> {
    let reps = orbit_representatives(field, chi);
    cft_matrix(field, chi, &reps, &reps)
}

/// `m` times an entry, from Gauss sums: `Σ_i \overline{φ_i}(x) G_i` for `x ≠ 0` and `m |H|`
/// for `x = 0`, where `x = r s` and `m` is the index.
pub fn gauss_entry_scaled(
    field: &FieldSpec,
    gauss: &GaussSumSet,
    x: FieldElement,
) -> Result<CycNum, TransformError> {
    let sub: Subgroup = gauss.chi.subgroup();
    if x.is_zero() {
        return Ok(CycNum::from_i64(1, i64::from(sub.index()) * i64::from(sub.order())));
    }
    let mut acc = CycNum::zero(1);
    for (phi, g) in extensions(field, &gauss.chi).iter().zip(&gauss.sums) {
        acc = acc.checked_add(&phi.conj().eval(field, x)?.checked_mul(g)?)?;
    }
    Ok(acc)
}

/// `supp(f)` in element order.
pub fn support(f: &GroupAlgebraElement, field: &FieldSpec) -> Vec<FieldElement> {
    field
        .elements()
        .zip(&f.coeffs)
        .filter(|(_, v)| !v.is_zero())
        .map(|(x, _)| x)
        .collect()
}

/// `supp(f̂)` as additive characters, in parameter order.
pub fn support_hat(f: &GroupAlgebraElement, field: &FieldSpec) -> Result<Vec<AddCharacter>, TransformError> {
    let spec = fourier_transform(field, f)?;
    Ok(field
        .elements()
        .zip(&spec.values)
        .filter(|(_, v)| !v.is_zero())
        .map(|(a, _)| AddCharacter::new(a))
        .collect())
}
