//! Parallel batch scans with order-preserving output.

use cft_nvm_core::characters::{subgroup_of_index, SubgroupChar};
use cft_nvm_core::cyclotomic::max_order;
use cft_nvm_core::finite_field::FieldSpec;
use cft_nvm_core::ntheory::prime_power;
use cft_nvm_core::nvm::{scan_instance, scan_plan, CharSelector, NvmError, NvmReport};
use cft_nvm_core::transform::{gauss_set, t_sums};
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ScanSummary {
    pub instances: usize,
    pub holds: usize,
    pub fails: usize,
    pub disagreements: usize,
    /// `(q, j)` of index-3 nontrivial instances with `T_0 = 0`.
    pub t0_zero: Vec<(u32, u32)>,
}

impl ScanSummary {
    pub fn line(&self) -> String {
        let t0: Vec<String> = self.t0_zero.iter().map(|(q, j)| format!("q={q},j={j}")).collect();
        format!(
            "instances={} holds={} fails={} disagreements={} t0_zero=[{}]",
            self.instances,
            self.holds,
            self.fails,
            self.disagreements,
            t0.join(" ")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanOutput {
    pub reports: Vec<NvmReport>,
    pub summary: ScanSummary,
}

/// The largest cyclotomic order an instance computes with: `p·|H|` for the matrix
/// (`p` when `χ` is trivial), and `p(q−1)` when Gauss sums are needed.
pub fn required_order(p: u32, q: u32, index: u32, j: u32, gauss: bool) -> u64 {
    let (p, q) = (u64::from(p), u64::from(q));
    if gauss {
        p * (q - 1)
    } else if j == 0 {
        p
    } else {
        p * ((q - 1) / u64::from(index))
    }
}

fn check_order(q: u32, index: u32, j: u32) -> Result<(), NvmError> {
    let p = prime_power(u64::from(q)).map_or(u32::MAX, |(p, _)| p as u32);
    let needed = required_order(p, q, index, j, index == 3 && j != 0);
    let cap = u64::from(max_order());
    if needed > cap {
        return Err(NvmError::CapExceeded { value: needed, cap });
    }
    Ok(())
}

struct Instance {
    report: NvmReport,
    t0_zero: bool,
}

fn run_field(q: u32, index: u32, js: &[u32]) -> Result<Vec<Instance>, NvmError> {
    let field = FieldSpec::of_order(u64::from(q))?;
    let sub = subgroup_of_index(&field, index)?;
    js.iter()
        .map(|&j| {
            let report = scan_instance(&field, index, j)?;
            let t0_zero = if index == 3 && j != 0 {
                let chi = SubgroupChar::new(sub, i64::from(j));
                t_sums(&gauss_set(&field, &chi)?)?.get(0).is_zero()
            } else {
                false
            };
            Ok(Instance { report, t0_zero })
        })
        .collect()
}

/// Scans every `(q, χ)` of [`scan_plan`] on `threads` workers (0 picks rayon's default).
///
/// Work is split per field; results are concatenated in plan order, so the output does
/// not depend on the thread count.
pub fn run_scan(q_max: u64, index: u32, chars: CharSelector, threads: usize) -> Result<ScanOutput, NvmError> {
    let plan = scan_plan(q_max, index, chars)?;
    for &(q, j) in &plan {
        check_order(q, index, j)?;
    }
    let mut groups: Vec<(u32, Vec<u32>)> = Vec::new();
    for (q, j) in plan {
        match groups.last_mut() {
            Some((gq, js)) if *gq == q => js.push(j),
            _ => groups.push((q, vec![j])),
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    let per_field: Vec<Vec<Instance>> = pool.install(|| {
        groups
            .par_iter()
            .map(|(q, js)| run_field(*q, index, js))
            .collect::<Result<_, _>>()
    })?;
    let mut summary = ScanSummary::default();
    let mut reports = Vec::new();
    for inst in per_field.into_iter().flatten() {
        let r = &inst.report;
        summary.instances += 1;
        if r.holds {
            summary.holds += 1;
        } else {
            summary.fails += 1;
        }
        if r.agreement == Some(false) {
            summary.disagreements += 1;
        }
        if inst.t0_zero {
            summary.t0_zero.push((r.q, r.chi_j));
        }
        reports.push(inst.report);
    }
    Ok(ScanOutput { reports, summary })
}
