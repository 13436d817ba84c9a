use super::*;
use crate::characters::Subgroup;
use crate::ntheory::binomial;
use crate::transform::orbit_representatives;
use proptest::prelude::*;

fn gf(q: u64) -> FieldSpec {
    FieldSpec::of_order(q).unwrap()
}

fn int(c: i64) -> CycNum {
    CycNum::from_i64(1, c)
}

fn index3_fields(max: u64) -> Vec<u64> {
    (4..=max)
        .filter(|&q| prime_power(q).is_some() && (q - 1) % 3 == 0)
        .collect()
}

/// Side of the compressed matrix; exhaustive loops skip the large DFT-like cases.
fn cft_side(chi: &SubgroupChar) -> u32 {
    chi.subgroup().index() + u32::from(chi.is_trivial())
}

#[test]
fn combinations_are_lexicographic() {
    assert_eq!(combinations(4, 2), vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
    assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
    assert_eq!(combinations(2, 3), Vec::<Vec<usize>>::new());
    for n in 0..8 {
        for k in 0..=n {
            assert_eq!(combinations(n, k).len() as u64, binomial(n as u64, k as u64));
        }
    }
}

#[test]
fn zero_entry_gives_a_one_by_one_witness() {
    let m = CycMatrix::new(2, 2, vec![int(1), int(2), int(0), int(3)]).unwrap();
    let scan = nvm_brute(&m).unwrap();
    assert!(!scan.holds);
    let w = scan.witness.unwrap();
    assert_eq!((w.rows, w.cols), (vec![1], vec![0]));
    assert!(w.determinant.is_zero());
    // empty minor, then entries (0,0), (0,1), (1,0)
    assert_eq!(scan.minors_checked, 4);
    assert_eq!(nvm_brute_shared(&m).unwrap(), nvm_brute(&m).unwrap());
}

#[test]
fn singular_two_by_two() {
    let m = CycMatrix::new(2, 2, vec![int(1), int(2), int(2), int(4)]).unwrap();
    let scan = nvm_brute(&m).unwrap();
    assert_eq!(scan.witness.as_ref().unwrap().rows, vec![0, 1]);
    assert_eq!(scan.minors_checked, 6);
    assert_eq!(nvm_brute_shared(&m).unwrap(), scan);
}

#[test]
fn brute_rejects_bad_shapes() {
    let rect = CycMatrix::new(1, 2, vec![int(1), int(1)]).unwrap();
    assert_eq!(nvm_brute(&rect), Err(NvmError::NotSquare { rows: 1, cols: 2 }));
    let big = CycMatrix::identity(13, 1);
    assert_eq!(nvm_brute(&big), Err(NvmError::TooLarge { size: 13, cap: 12 }));
    assert_eq!(nvm_brute_shared(&big), Err(NvmError::TooLarge { size: 13, cap: 12 }));
}

#[test]
fn dft_of_five_has_nonvanishing_minors() {
    let m = dft_matrix(5);
    let scan = nvm_brute(&m).unwrap();
    assert!(scan.holds);
    assert_eq!(scan.minors_checked, binomial(10, 5));
    assert_eq!(nvm_brute_shared(&m).unwrap(), scan);
}

#[test]
fn chebotarev_small_primes() {
    for p in [2u64, 3, 5, 7] {
        let scan = chebotarev_check(p).unwrap();
        assert!(scan.holds, "p={p}");
        assert_eq!(scan.minors_checked, binomial(2 * p, p));
    }
    assert_eq!(chebotarev_check(7).unwrap().minors_checked, 3432);
    assert_eq!(chebotarev_check(9), Err(NvmError::NotPrime(9)));
    assert_eq!(chebotarev_check(17), Err(NvmError::CapExceeded { value: 17, cap: 13 }));
}

#[test]
fn dft_over_a_composite_order_fails() {
    // ζ_4: the 2x2 minor on rows/cols {0, 2} is [[1, 1], [1, 1]]
    let scan = nvm_brute(&dft_matrix(4)).unwrap();
    assert!(!scan.holds);
    assert_eq!(nvm_brute_shared(&dft_matrix(4)).unwrap(), scan);
    let w = scan.witness.unwrap();
    assert_eq!(w.rows.len(), 2);
}

#[test]
fn trivial_subgroup_of_gf4_fails() {
    let f = gf(4);
    let h = subgroup_of_index(&f, 3).unwrap();
    assert_eq!(h.order(), 1);
    let chi = SubgroupChar::trivial(h);
    let cft = cft_matrix_canonical(&f, &chi).unwrap();
    assert!(!nvm_brute(cft.matrix()).unwrap().holds);
    assert_eq!(known_criterion(&f, &chi).unwrap(), Some(false));
}

#[test]
fn theorem_examples() {
    let f = gf(7);
    let h = subgroup_of_index(&f, 3).unwrap();
    let chi = SubgroupChar::new(h, 1);
    let gs = gauss_set(&f, &chi).unwrap();
    let brute = nvm_brute(cft_matrix_canonical(&f, &chi).unwrap().matrix()).unwrap();
    assert_eq!(nvm_theorem_index3_nontrivial(&gs).unwrap(), brute.holds);
    assert!(matches!(
        nvm_theorem_index3_nontrivial(&gauss_set(&f, &SubgroupChar::trivial(h)).unwrap()),
        Err(NvmError::NoCriterion(_))
    ));
    let h2 = subgroup_of_index(&f, 2).unwrap();
    assert!(matches!(
        nvm_theorem_index3_nontrivial(&gauss_set(&f, &SubgroupChar::new(h2, 1)).unwrap()),
        Err(NvmError::Transform(TransformError::WrongArity { .. }))
    ));
}

#[test]
fn known_criterion_examples() {
    let triv = |q: u64, s: u32| {
        let f = gf(q);
        let h = subgroup_of_index(&f, s).unwrap();
        known_criterion(&f, &SubgroupChar::trivial(h)).unwrap()
    };
    assert_eq!(triv(4, 3), Some(false));
    assert_eq!(triv(7, 6), Some(true));
    assert_eq!(triv(13, 3), Some(true));
    assert_eq!(triv(25, 3), Some(false));
    assert_eq!(triv(16, 3), Some(false));
    assert_eq!(triv(11, 1), Some(true));
    assert_eq!(triv(11, 2), Some(true));
    assert_eq!(triv(13, 4), None);
    let f = gf(13);
    let h2 = subgroup_of_index(&f, 2).unwrap();
    assert_eq!(known_criterion(&f, &SubgroupChar::new(h2, 1)).unwrap(), None);
}

#[test]
fn known_criteria_agree_with_brute_force() {
    for q in (2..=32u64).filter(|&q| prime_power(q).is_some()) {
        let f = gf(q);
        for s in indices(q) {
            let h = subgroup_of_index(&f, s).unwrap();
            for j in 0..h.order() {
                let chi = SubgroupChar::new(h, i64::from(j));
                if cft_side(&chi) > 7 {
                    continue;
                }
                if let Some(pred) = known_criterion(&f, &chi).unwrap() {
                    let brute = nvm_brute(cft_matrix_canonical(&f, &chi).unwrap().matrix()).unwrap();
                    assert_eq!(brute.holds, pred, "q={q} s={s} j={j}");
                }
            }
        }
    }
}

#[test]
fn proof_identities() {
    for q in index3_fields(61) {
        let f = gf(q);
        let h = subgroup_of_index(&f, 3).unwrap();
        let qn = int(q as i64);
        for j in 1..h.order() {
            let chi = SubgroupChar::new(h, i64::from(j));
            let gs = gauss_set(&f, &chi).unwrap();
            let t = t_sums(&gs).unwrap();
            let g012 = gs.get(0) * gs.get(1) * gs.get(2);
            let m = proof_matrix(&t);
            for i in 0..3i64 {
                let minor = t.get(i + 1) * t.get(i + 2) - t.get(i) * t.get(i);
                assert_eq!(&qn * &minor, g012.mul_i64(-3) * t.get(i).conjugate());
                assert_eq!(minor.is_zero(), t.get(i).is_zero());
            }
            let det = m.determinant().unwrap();
            assert_eq!(det, g012.mul_i64(-27));
            assert!(!det.is_zero());
        }
    }
}

#[test]
fn theorem_matches_brute_force_for_small_fields() {
    for q in index3_fields(49) {
        let f = gf(q);
        let h = subgroup_of_index(&f, 3).unwrap();
        for j in 1..h.order() {
            let r = nvm_instance(&f, 3, j, Method::Both).unwrap();
            assert_eq!(r.agreement, Some(true), "q={q} j={j}");
            assert!(r.witness.is_some() != r.holds);
        }
    }
}

#[test]
fn instance_methods() {
    let f = gf(7);
    let theorem = nvm_instance(&f, 3, 1, Method::Theorem).unwrap();
    assert_eq!(theorem.minors_checked, 0);
    assert!(theorem.witness.is_none() && theorem.agreement.is_none());
    let brute = nvm_instance(&f, 3, 1, Method::Brute).unwrap();
    assert_eq!(brute.theorem_prediction, None);
    assert_eq!(brute.holds, theorem.holds);
    let f4 = gf(4);
    let r = nvm_instance(&f4, 3, 0, Method::Brute).unwrap();
    assert!(!r.holds && r.witness.is_some());
    let f13 = gf(13);
    assert!(matches!(nvm_instance(&f13, 4, 1, Method::Theorem), Err(NvmError::NoCriterion(_))));
    assert!(matches!(
        nvm_instance(&gf(8), 3, 0, Method::Brute),
        Err(NvmError::Char(CharError::IndexDoesNotDivide { index: 3, group_order: 7 }))
    ));
}

#[test]
fn scan_examples() {
    let full = scan_range(49, 1, CharSelector::Trivial).unwrap();
    assert_eq!(full.len(), (2..=49).filter(|&q| prime_power(q).is_some()).count());
    assert!(full.iter().all(|r| r.holds && r.agreement == Some(true)));

    let trivial = scan_range(100, 3, CharSelector::Trivial).unwrap();
    let qs: Vec<u32> = trivial.iter().map(|r| r.q).collect();
    assert_eq!(qs, [4, 7, 13, 16, 19, 25, 31, 37, 43, 49, 61, 64, 67, 73, 79, 97]);
    for r in &trivial {
        assert_eq!(r.holds, r.p % 3 == 1, "q={}", r.q);
        assert_eq!(r.agreement, Some(true));
    }

    let index2 = scan_range(20, 2, CharSelector::Nontrivial).unwrap();
    assert!(!index2.is_empty());
    assert!(index2.iter().all(|r| r.method == Method::Brute && r.theorem_prediction.is_none()));
    assert!(scan_range(257, 3, CharSelector::All).is_err());

    let plan = scan_plan(16, 3, CharSelector::All).unwrap();
    assert_eq!(plan, vec![(4, 0), (7, 0), (7, 1), (13, 0), (13, 1), (13, 2), (13, 3), (16, 0), (16, 1), (16, 2), (16, 3), (16, 4)]);
}

#[test]
fn uncertainty_examples() {
    let f = gf(7);
    let h = subgroup_of_index(&f, 3).unwrap();
    let chi = SubgroupChar::new(h, 1);
    let reps = orbit_representatives(&f, &chi);
    let g = extend_from_representatives(&f, &chi, &reps, &[int(1), int(0), int(0)]).unwrap();
    let rep = uncertainty_report(&f, &g, &chi).unwrap();
    assert_eq!((rep.bound, rep.case), (8, BoundCase::Nontrivial));
    assert_eq!(rep.support, 2);

    for q in [5u64, 7, 9] {
        let f = gf(q);
        let full = SubgroupChar::trivial(subgroup_of_index(&f, 1).unwrap());
        let ones = GroupAlgebraElement::constant(&f, &int(1));
        let rep = uncertainty_report(&f, &ones, &full).unwrap();
        assert_eq!((rep.support, rep.support_hat, rep.bound), (q as usize, 1, q as usize + 1));
        assert_eq!(rep.case, BoundCase::Otherwise);
        assert!(rep.holds);
    }

    assert_eq!(
        uncertainty_report(&f, &GroupAlgebraElement::zero(&f), &chi),
        Err(NvmError::ZeroElement)
    );
    let delta = GroupAlgebraElement::delta(&f, f.one());
    assert_eq!(uncertainty_report(&f, &delta, &chi), Err(NvmError::NotSymmetric));
}

#[test]
fn uncertainty_holds_on_random_symmetric_elements_when_nvm_holds() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
    for q in [5u64, 7, 11, 13] {
        let f = gf(q);
        for s in indices(q) {
            let h: Subgroup = subgroup_of_index(&f, s).unwrap();
            for j in 0..h.order() {
                let chi = SubgroupChar::new(h, i64::from(j));
                if cft_side(&chi) > 7 {
                    continue;
                }
                let cft = cft_matrix_canonical(&f, &chi).unwrap();
                let holds = nvm_brute(cft.matrix()).unwrap().holds;
                for _ in 0..6 {
                    let vals: Vec<CycNum> = cft
                        .r()
                        .iter()
                        .map(|_| if rng.gen_bool(0.4) { int(0) } else { int(rng.gen_range(1..4)) })
                        .collect();
                    if vals.iter().all(CycNum::is_zero) {
                        continue;
                    }
                    let g = extend_from_representatives(&f, &chi, cft.r(), &vals).unwrap();
                    if holds {
                        assert!(uncertainty_bound_holds(&f, &g, &chi).unwrap(), "q={q} s={s} j={j}");
                    }
                }
            }
        }
    }
}

#[test]
fn witnesses_violate_the_bound() {
    let mut found = 0;
    for q in (2..=32u64).filter(|&q| prime_power(q).is_some()) {
        let f = gf(q);
        for s in indices(q) {
            let h = subgroup_of_index(&f, s).unwrap();
            for j in 0..h.order() {
                let chi = SubgroupChar::new(h, i64::from(j));
                if cft_side(&chi) > 7 {
                    continue;
                }
                let cft = cft_matrix_canonical(&f, &chi).unwrap();
                let scan = nvm_brute(cft.matrix()).unwrap();
                if let Some(w) = &scan.witness {
                    let v = violation_witness(&f, &cft, w).unwrap();
                    assert!(!v.uncertainty.holds);
                    assert!(!v.f.is_zero());
                    found += 1;
                }
            }
        }
    }
    assert!(found > 0);
}

#[test]
fn witness_for_gf4() {
    let f = gf(4);
    let chi = SubgroupChar::trivial(subgroup_of_index(&f, 3).unwrap());
    let cft = cft_matrix_canonical(&f, &chi).unwrap();
    let w = nvm_brute(cft.matrix()).unwrap().witness.unwrap();
    let v = violation_witness(&f, &cft, &w).unwrap();
    let spec = fourier_transform(&f, &v.f).unwrap();
    for s in &v.zeros {
        assert!(spec.values()[s.index() as usize].is_zero());
    }
    assert!(v.uncertainty.support + v.uncertainty.support_hat < v.uncertainty.bound);

    let nonsingular = MinorWitness {
        rows: vec![0],
        cols: vec![0],
        determinant: int(0),
    };
    assert_eq!(violation_witness(&f, &cft, &nonsingular), Err(NvmError::NonsingularMinor));
}

fn arb_matrix() -> impl Strategy<Value = CycMatrix> {
    (1usize..=4, prop::sample::select(vec![1u32, 3, 4, 5])).prop_flat_map(|(n, order)| {
        let dim = crate::ntheory::euler_phi(u64::from(order)) as usize;
        prop::collection::vec(prop::collection::vec(-1i64..=1, dim), n * n).prop_map(move |cs| {
            let entries = cs.iter().map(|c| CycNum::from_power_sum(order, c)).collect();
            CycMatrix::new(n, n, entries).unwrap()
        })
    })
}

fn arb_scale() -> impl Strategy<Value = CycNum> {
    (prop::sample::select(vec![1u32, 3, 4, 5]), prop::collection::vec(-2i64..=2, 4))
        .prop_map(|(n, c)| CycNum::from_power_sum(n, &c))
        .prop_filter("nonzero", |x| !x.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn shared_scan_matches_direct_scan(m in arb_matrix()) {
        prop_assert_eq!(nvm_brute_shared(&m).unwrap(), nvm_brute(&m).unwrap());
    }

    #[test]
    fn scaling_preserves_nvm(m in arb_matrix(), c in arb_scale(), row in 0usize..4, col in 0usize..4) {
        let n = m.rows();
        let scaled = CycMatrix::from_fn(n, n, |i, j| {
            let mut x = m.get(i, j).clone();
            if i == row % n {
                x = x * &c;
            }
            if j == col % n {
                x = x * &c;
            }
            x
        })
        .unwrap();
        prop_assert_eq!(nvm_brute(&scaled).unwrap().holds, nvm_brute(&m).unwrap().holds);
    }
}
