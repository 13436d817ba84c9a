//! Nonvanishing-minors decisions: exhaustive exact minor scans, the index-3 closed-form
//! criterion, the published criteria for other cases, Chebotarev's matrix, uncertainty
//! bounds for `χ`-symmetric elements and violation witnesses.
//!
//! Minors are visited by size (starting from the empty minor, which counts), then by row
//! set and column set in lexicographic order. A scan stops at the first vanishing minor,
//! so the recorded witness is the canonical one and `minors_checked` includes it.

use alloc::vec;
use alloc::vec::Vec;

use crate::characters::{subgroup_of_index, CharError, SubgroupChar};
use crate::cyclotomic::{CycError, CycMatrix, CycNum};
use crate::finite_field::{FieldElement, FieldError, FieldSpec};
use crate::ntheory::{divisors, is_prime, prime_power};
use crate::transform::{
    cft_matrix_canonical, extend_from_representatives, fourier_transform, gauss_set,
    is_chi_symmetric, support, t_sums, CftMatrix, GaussSumSet, GroupAlgebraElement,
    TransformError, TSums,
};

/// Largest matrix side accepted by the minor scans.
pub const DEFAULT_MINOR_CAP: usize = 12;
/// Largest prime accepted by [`chebotarev_check`].
pub const CHEBOTAREV_CAP: u64 = 13;
/// Largest field size accepted by [`scan_range`].
pub const SCAN_CAP: u64 = 256;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NvmError {
    #[error(transparent)]
    Cyc(#[from] CycError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Char(#[from] CharError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error("matrix side {size} exceeds the minor-scan cap {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("value {value} exceeds the cap {cap}")]
    CapExceeded { value: u64, cap: u64 },
    #[error("no closed-form criterion applies: {0}")]
    NoCriterion(&'static str),
    #[error("the selected minor is nonsingular")]
    NonsingularMinor,
    #[error("element is zero")]
    ZeroElement,
    #[error("element is not chi-symmetric")]
    NotSymmetric,
    #[error("witness verification failed: {0}")]
    WitnessVerification(&'static str),
}

/// A square submatrix given by sorted row and column positions, with its determinant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorWitness {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub determinant: CycNum,
}

/// Outcome of a minor scan of one matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorScan {
    pub holds: bool,
    pub witness: Option<MinorWitness>,
    pub minors_checked: u64,
}

fn check_scan_shape(m: &CycMatrix, cap: usize) -> Result<usize, NvmError> {
    if !m.is_square() {
        return Err(NvmError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if m.rows() > cap {
        return Err(NvmError::TooLarge { size: m.rows(), cap });
    }
    Ok(m.rows())
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] != i + n - k) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Scans every minor with an independent exact determinant.
pub fn nvm_brute(m: &CycMatrix) -> Result<MinorScan, NvmError> {
    nvm_brute_with_cap(m, DEFAULT_MINOR_CAP)
}

pub fn nvm_brute_with_cap(m: &CycMatrix, cap: usize) -> Result<MinorScan, NvmError> {
    let n = check_scan_shape(m, cap)?;
    let mut checked = 0u64;
    for k in 0..=n {
        let combos = combinations(n, k);
        for rows in &combos {
            for cols in &combos {
                checked += 1;
                let det = m.submatrix(rows, cols).determinant()?;
                if det.is_zero() {
                    return Ok(MinorScan {
                        holds: false,
                        witness: Some(MinorWitness {
                            rows: rows.clone(),
                            cols: cols.clone(),
                            determinant: det,
                        }),
                        minors_checked: checked,
                    });
                }
            }
        }
    }
    Ok(MinorScan {
        holds: true,
        witness: None,
        minors_checked: checked,
    })
}

/// Same visiting order and result as [`nvm_brute`], but each `k`-minor is built from the
/// stored `(k−1)`-minors by expansion along its last row.
pub fn nvm_brute_shared(m: &CycMatrix) -> Result<MinorScan, NvmError> {
    nvm_brute_shared_with_cap(m, DEFAULT_MINOR_CAP)
}

pub fn nvm_brute_shared_with_cap(m: &CycMatrix, cap: usize) -> Result<MinorScan, NvmError> {
    let n = check_scan_shape(m, cap)?;
    let mask = |s: &[usize]| s.iter().fold(0usize, |acc, &i| acc | (1 << i));
    let levels: Vec<Vec<Vec<usize>>> = (0..=n).map(|k| combinations(n, k)).collect();
    let mut rank = vec![0usize; 1 << n];
    for level in &levels {
        for (i, c) in level.iter().enumerate() {
            rank[mask(c)] = i;
        }
    }
    let mut prev = vec![CycNum::one(m.order())];
    let mut checked = 1u64;
    for k in 1..=n {
        let level = &levels[k];
        let width_prev = levels[k - 1].len();
        let mut cur = Vec::with_capacity(level.len() * level.len());
        for rows in level {
            let last = rows[k - 1];
            let base = rank[mask(&rows[..k - 1])] * width_prev;
            for cols in level {
                let full = mask(cols);
                let mut acc = CycNum::zero(m.order());
                for (pos, &c) in cols.iter().enumerate() {
                    let a = m.get(last, c);
                    if a.is_zero() {
                        continue;
                    }
                    let term = a.checked_mul(&prev[base + rank[full & !(1 << c)]])?;
                    acc = if (pos + k - 1) % 2 == 0 {
                        acc.checked_add(&term)?
                    } else {
                        acc.checked_sub(&term)?
                    };
                }
                checked += 1;
                if acc.is_zero() {
                    return Ok(MinorScan {
                        holds: false,
                        witness: Some(MinorWitness {
                            rows: rows.clone(),
                            cols: cols.clone(),
                            determinant: acc,
                        }),
                        minors_checked: checked,
                    });
                }
                cur.push(acc);
            }
        }
        prev = cur;
    }
    Ok(MinorScan {
        holds: true,
        witness: None,
        minors_checked: checked,
    })
}

/// `(ζ_p^{ij})` for `i, j ∈ 0..p`.
pub fn dft_matrix(p: u32) -> CycMatrix {
    CycMatrix::from_fn(p as usize, p as usize, |i, j| {
        CycNum::root_of_unity(p, (i * j) as i64)
    })
    .expect("uniform order")
}

/// Chebotarev's theorem for the prime `p`, by a shared-subminor scan of the DFT matrix.
pub fn chebotarev_check(p: u64) -> Result<MinorScan, NvmError> {
    if p > CHEBOTAREV_CAP {
        return Err(NvmError::CapExceeded {
            value: p,
            cap: CHEBOTAREV_CAP,
        });
    }
    if !is_prime(p) {
        return Err(NvmError::NotPrime(p));
    }
    nvm_brute_shared_with_cap(&dft_matrix(p as u32), CHEBOTAREV_CAP as usize)
}

/// The index-3 criterion for a nontrivial character: the three Gauss sums are not all
/// equal and `T_0 ≠ 0`.
pub fn nvm_theorem_index3_nontrivial(g: &GaussSumSet) -> Result<bool, NvmError> {
    if g.chi().is_trivial() {
        return Err(NvmError::NoCriterion("the character is trivial"));
    }
    let t = t_sums(g)?;
    Ok(!g.all_equal() && !t.get(0).is_zero())
}

/// The prediction of the published criteria, when one applies.
pub fn known_criterion(field: &FieldSpec, chi: &SubgroupChar) -> Result<Option<bool>, NvmError> {
    let sub = chi.subgroup();
    if sub.order() == 1 {
        return Ok(Some(field.m() == 1));
    }
    if !chi.is_trivial() {
        if sub.index() == 3 {
            return nvm_theorem_index3_nontrivial(&gauss_set(field, chi)?).map(Some);
        }
        return Ok(None);
    }
    Ok(match sub.index() {
        1 => Some(true),
        2 if field.p() != 2 => Some(true),
        3 => Some(field.p() % 3 == 1),
        _ => None,
    })
}

/// `M[i][j] = T_{i+j}`, the circulant obtained from the index-3 matrix by scaling rows and
/// columns.
pub fn proof_matrix(t: &TSums) -> CycMatrix {
    CycMatrix::from_fn(3, 3, |i, j| t.get((i + j) as i64).clone()).expect("3x3")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Brute,
    Theorem,
    Both,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Brute => "brute",
            Method::Theorem => "theorem",
            Method::Both => "both",
        }
    }
}

impl core::str::FromStr for Method {
    type Err = &'static str;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "brute" => Ok(Method::Brute),
            "theorem" => Ok(Method::Theorem),
            "both" => Ok(Method::Both),
            _ => Err("method must be brute, theorem or both"),
        }
    }
}

/// The NVM decision for one `(GF(q), χ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NvmReport {
    pub q: u32,
    pub p: u32,
    pub m: u32,
    pub index: u32,
    pub chi_j: u32,
    pub method: Method,
    pub holds: bool,
    pub theorem_prediction: Option<bool>,
    pub agreement: Option<bool>,
    pub witness: Option<MinorWitness>,
    pub minors_checked: u64,
}

fn subgroup_char(field: &FieldSpec, index: u32, j: u32) -> Result<SubgroupChar, NvmError> {
    let sub = subgroup_of_index(field, index)?;
    Ok(SubgroupChar::new(sub, i64::from(j)))
}

/// Decides NVM for `(GF(q), χ)` where `χ` has exponent `j` on the index-`index` subgroup.
pub fn nvm_instance(field: &FieldSpec, index: u32, j: u32, method: Method) -> Result<NvmReport, NvmError> {
    let chi = subgroup_char(field, index, j)?;
    let prediction = match method {
        Method::Brute => None,
        Method::Theorem | Method::Both => Some(
            known_criterion(field, &chi)?
                .ok_or(NvmError::NoCriterion("no published criterion for this subgroup and character"))?,
        ),
    };
    let scan = match method {
        Method::Theorem => None,
        Method::Brute | Method::Both => Some(nvm_brute(cft_matrix_canonical(field, &chi)?.matrix())?),
    };
    let (holds, agreement, witness, minors_checked) = match (&scan, prediction) {
        (Some(s), Some(pred)) => (s.holds, Some(s.holds == pred), s.witness.clone(), s.minors_checked),
        (Some(s), None) => (s.holds, None, s.witness.clone(), s.minors_checked),
        (None, Some(pred)) => (pred, None, None, 0),
        (None, None) => unreachable!("every method computes something"),
    };
    Ok(NvmReport {
        q: field.q(),
        p: field.p(),
        m: field.m(),
        index,
        chi_j: chi.exponent(),
        method,
        holds,
        theorem_prediction: prediction,
        agreement,
        witness,
        minors_checked,
    })
}

/// Which subgroup characters a scan visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CharSelector {
    Trivial,
    Nontrivial,
    All,
}

impl CharSelector {
    pub fn as_str(self) -> &'static str {
        match self {
            CharSelector::Trivial => "trivial",
            CharSelector::Nontrivial => "nontrivial",
            CharSelector::All => "all",
        }
    }

    fn admits(self, j: u32) -> bool {
        match self {
            CharSelector::Trivial => j == 0,
            CharSelector::Nontrivial => j != 0,
            CharSelector::All => true,
        }
    }
}

impl core::str::FromStr for CharSelector {
    type Err = &'static str;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "trivial" => Ok(CharSelector::Trivial),
            "nontrivial" => Ok(CharSelector::Nontrivial),
            "all" => Ok(CharSelector::All),
            _ => Err("character selector must be trivial, nontrivial or all"),
        }
    }
}

/// The `(q, j)` pairs a scan visits, in report order.
pub fn scan_plan(q_max: u64, index: u32, chars: CharSelector) -> Result<Vec<(u32, u32)>, NvmError> {
    if q_max > SCAN_CAP {
        return Err(NvmError::CapExceeded {
            value: q_max,
            cap: SCAN_CAP,
        });
    }
    let mut plan = Vec::new();
    for q in 2..=q_max {
        if prime_power(q).is_none() || index == 0 || (q - 1) % u64::from(index) != 0 {
            continue;
        }
        let d = ((q - 1) / u64::from(index)) as u32;
        plan.extend((0..d).filter(|&j| chars.admits(j)).map(|j| (q as u32, j)));
    }
    Ok(plan)
}

/// One instance of a scan: both methods when a criterion applies, brute force otherwise.
pub fn scan_instance(field: &FieldSpec, index: u32, j: u32) -> Result<NvmReport, NvmError> {
    let chi = subgroup_char(field, index, j)?;
    let method = if known_criterion(field, &chi)?.is_some() {
        Method::Both
    } else {
        Method::Brute
    };
    nvm_instance(field, index, j, method)
}

pub fn scan_range(q_max: u64, index: u32, chars: CharSelector) -> Result<Vec<NvmReport>, NvmError> {
    let mut out = Vec::new();
    let mut field: Option<FieldSpec> = None;
    for (q, j) in scan_plan(q_max, index, chars)? {
        if field.as_ref().map(FieldSpec::q) != Some(q) {
            field = Some(FieldSpec::of_order(u64::from(q))?);
        }
        out.push(scan_instance(field.as_ref().expect("set above"), index, j)?);
    }
    Ok(out)
}

/// Which branch of the uncertainty bound applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundCase {
    /// `q + |H| − 1`.
    Nontrivial,
    /// `q + 2|H| − 1`: `f_0 = 0` and `f̂(ε_0) = 0`.
    BothZero,
    /// `q + |H|`: exactly one of `f_0`, `f̂(ε_0)` vanishes.
    OneZero,
    /// `q + 1`.
    Otherwise,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UncertaintyReport {
    pub support: usize,
    pub support_hat: usize,
    pub bound: usize,
    pub case: BoundCase,
    pub holds: bool,
}

/// `|supp f| + |supp f̂|` against the bound for a nonzero `χ`-symmetric `f`.
pub fn uncertainty_report(
    field: &FieldSpec,
    f: &GroupAlgebraElement,
    chi: &SubgroupChar,
) -> Result<UncertaintyReport, NvmError> {
    if f.is_zero() {
        return Err(NvmError::ZeroElement);
    }
    if !is_chi_symmetric(field, f, chi)? {
        return Err(NvmError::NotSymmetric);
    }
    let spec = fourier_transform(field, f)?;
    let supp = support(f, field).len();
    let supp_hat = spec.values().iter().filter(|v| !v.is_zero()).count();
    let q = field.q() as usize;
    let h = chi.subgroup().order() as usize;
    let (bound, case) = if !chi.is_trivial() {
        (q + h - 1, BoundCase::Nontrivial)
    } else {
        let f0 = f.get(field.zero()).is_zero();
        let hat0 = spec.values()[0].is_zero();
        match (f0, hat0) {
            (true, true) => (q + 2 * h - 1, BoundCase::BothZero),
            (true, false) | (false, true) => (q + h, BoundCase::OneZero),
            (false, false) => (q + 1, BoundCase::Otherwise),
        }
    };
    Ok(UncertaintyReport {
        support: supp,
        support_hat: supp_hat,
        bound,
        case,
        holds: supp + supp_hat >= bound,
    })
}

pub fn uncertainty_bound_holds(
    field: &FieldSpec,
    f: &GroupAlgebraElement,
    chi: &SubgroupChar,
) -> Result<bool, NvmError> {
    Ok(uncertainty_report(field, f, chi)?.holds)
}

/// A `χ`-symmetric element built from a vanishing minor, with its verified properties.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViolationWitness {
    pub f: GroupAlgebraElement,
    /// The `s ∈ S` on the minor's rows; `f̂(ε_s) = 0` for each.
    pub zeros: Vec<FieldElement>,
    pub uncertainty: UncertaintyReport,
}

/// Turns a vanishing minor of `M` into an element violating the uncertainty bound.
///
/// With `c` in the kernel of the minor, `f = Σ_t c_t u_{r_t}` over the minor's columns,
/// where `u_r` is the basis vector behind column `r`; then `f̂` vanishes on the orbits of
/// the minor's rows. Every claimed property is re-checked before returning.
pub fn violation_witness(
    field: &FieldSpec,
    m: &CftMatrix,
    w: &MinorWitness,
) -> Result<ViolationWitness, NvmError> {
    let chi = m.chi();
    let sub = m.matrix().submatrix(&w.rows, &w.cols);
    if !sub.determinant()?.is_zero() {
        return Err(NvmError::NonsingularMinor);
    }
    let c = sub.kernel_vector()?.ok_or(NvmError::NonsingularMinor)?;
    let h = i64::from(chi.subgroup().order());
    let mut values = vec![CycNum::zero(1); m.r().len()];
    for (&col, ct) in w.cols.iter().zip(&c) {
        values[col] = if m.r()[col].is_zero() { ct.mul_i64(h) } else { ct.clone() };
    }
    let f = extend_from_representatives(field, &chi, m.r(), &values)?;
    if f.is_zero() {
        return Err(NvmError::WitnessVerification("element is zero"));
    }
    if !is_chi_symmetric(field, &f, &chi)? {
        return Err(NvmError::WitnessVerification("element is not chi-symmetric"));
    }
    let spec = fourier_transform(field, &f)?;
    let zeros: Vec<FieldElement> = w.rows.iter().map(|&i| m.s()[i]).collect();
    if zeros.iter().any(|s| !spec.values()[s.index() as usize].is_zero()) {
        return Err(NvmError::WitnessVerification("transform does not vanish on the minor rows"));
    }
    let uncertainty = uncertainty_report(field, &f, &chi)?;
    if uncertainty.holds {
        return Err(NvmError::WitnessVerification("element satisfies the uncertainty bound"));
    }
    Ok(ViolationWitness { f, zeros, uncertainty })
}

/// Every index dividing `q − 1`, ascending; convenient for exhaustive sweeps.
pub fn indices(q: u64) -> Vec<u32> {
    divisors(q - 1).into_iter().map(|d| d as u32).collect()
}

#[cfg(test)]
mod tests;
