use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::sample::Index;

use divfact::bundles::{deg4, degree_vector, factorization_mismatch, fcurve_degree, BundleFamily};
use divfact::covers::{degenerate, genus, CoverSpec};
use divfact::invariants::poly::{bareiss_determinant, cofactor_determinant, determinant};
use divfact::invariants::{
    evaluate_on, evaluate_tableau, generic_matrix, verify_restriction_theorem, BlockShape, Poly, PolyMatrix, Tableau,
};
use divfact::strata::{
    enumerate_boundary_cuts, enumerate_fcurves, induce_four_weights, locate_fcurve, CutSide, SetPartition4,
};
use divfact::weights::{phi_rule, psi_rule, split_linearization, Linearization, WeightVector};

/// Admissible weights: free entries below `r`, the last one fixing the sum.
fn admissible(r_max: u32, n_min: usize, n_max: usize) -> impl Strategy<Value = WeightVector> {
    (2..=r_max, n_min..=n_max)
        .prop_flat_map(|(r, n)| (Just(r), prop::collection::vec(0..r, n - 1)))
        .prop_map(|(r, mut entries)| {
            let sum: u32 = entries.iter().sum();
            entries.push((r - sum % r) % r);
            WeightVector::new(r, entries).unwrap()
        })
}

fn pick_cut(n: usize, index: &Index) -> Vec<usize> {
    let cuts = enumerate_boundary_cuts(n);
    cuts[index.index(cuts.len())].subset().to_vec()
}

fn pick_fcurve(n: usize, index: &Index) -> SetPartition4 {
    let curves = enumerate_fcurves(n);
    curves[index.index(curves.len())].clone()
}

fn sorted_mod(w: &WeightVector) -> Vec<u32> {
    let mut v: Vec<u32> = w.entries().iter().map(|&x| x % w.r()).collect();
    v.sort_unstable();
    v
}

/// `new[σ(i)] = old[i]` for a permutation given as a shuffled label list.
fn permute_weights(c: &WeightVector, perm: &[usize]) -> WeightVector {
    let mut entries = vec![0; c.len()];
    for (i, &x) in c.entries().iter().enumerate() {
        entries[perm[i] - 1] = x;
    }
    WeightVector::new(c.r(), entries).unwrap()
}

fn permute_partition(p: &SetPartition4, perm: &[usize]) -> SetPartition4 {
    let blocks = p.blocks().clone().map(|b| b.iter().map(|&i| perm[i - 1]).collect());
    SetPartition4::new(p.n(), blocks).unwrap()
}

fn shuffled(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((1..=n).collect::<Vec<usize>>()).prop_shuffle()
}

/// Reduces along compatible cuts down to four points, taking the first or the
/// last compatible cut each time.
fn chain_reduce(c: &WeightVector, p: &SetPartition4, take_last: bool) -> WeightVector {
    if c.len() == 4 {
        return c.clone();
    }
    let cuts = enumerate_boundary_cuts(c.len());
    let mut compatible = cuts
        .iter()
        .filter_map(|cut| locate_fcurve(p, cut.subset()).unwrap().map(|found| (cut.subset().to_vec(), found)));
    let (subset, (side, q)) = if take_last {
        compatible.last().unwrap()
    } else {
        compatible.next().unwrap()
    };
    let w = match side {
        CutSide::Phi => phi_rule(c, &subset).unwrap(),
        CutSide::Psi => psi_rule(c, &subset).unwrap(),
    };
    chain_reduce(&w, &q, take_last)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rule_outputs_stay_admissible(c in admissible(6, 4, 8), idx in any::<Index>()) {
        let subset = pick_cut(c.len(), &idx);
        let phi = phi_rule(&c, &subset).unwrap();
        let psi = psi_rule(&c, &subset).unwrap();
        prop_assert!(phi.is_admissible());
        prop_assert!(psi.is_admissible());
        let r = c.r() as u64;
        let inside = c.sum_over(&subset);
        let outside = c.sum() - inside;
        prop_assert_eq!(*phi.entries().last().unwrap() as u64 % r, outside % r);
        prop_assert_eq!(*psi.entries().last().unwrap() as u64 % r, inside % r);
        prop_assert_eq!(&phi.entries()[..subset.len()], &subset.iter().map(|&i| c.weight(i)).collect::<Vec<_>>()[..]);
    }

    #[test]
    fn split_sums_and_rescaling(
        a in prop::collection::vec(1i64..=6, 5..=8),
        n1_pick in any::<Index>(),
        k in 1u64..=4,
    ) {
        // a_i / 6 with the total forced to an integer by the last entry
        let n = a.len();
        let mut a = a;
        let partial: i64 = a[..n - 1].iter().sum();
        a[n - 1] = 6 - partial.rem_euclid(6);
        let total: i64 = a.iter().sum();
        let d = (total / 6 - 1) as u32;
        prop_assume!(d >= 2);
        let c = Linearization::new(a.iter().map(|&x| BigRational::new(x.into(), 6.into())).collect(), d).unwrap();
        let n1 = 2 + n1_pick.index(n - 3);
        for d1 in 1..d {
            let Ok((first, second)) = split_linearization(&c, n1, d1) else { continue };
            let sum = |l: &Linearization| l.entries().iter().sum::<BigRational>();
            prop_assert_eq!(sum(&first), BigRational::from_integer((d1 + 1).into()));
            prop_assert_eq!(sum(&second), BigRational::from_integer((d - d1 + 1).into()));
            let scale = 6 * k;
            let content = c.scaled_content(scale).unwrap();
            let head: usize = content[..n1].iter().sum();
            let tail: usize = content[n1..].iter().sum();
            let mut expected_first = content[..n1].to_vec();
            expected_first.push(tail - scale as usize * (d - d1) as usize);
            let mut expected_second = content[n1..].to_vec();
            expected_second.push(head - scale as usize * d1 as usize);
            prop_assert_eq!(first.scaled_content(scale).unwrap(), expected_first);
            prop_assert_eq!(second.scaled_content(scale).unwrap(), expected_second);
        }
    }

    #[test]
    fn induced_weights_are_block_sums(c in admissible(6, 4, 8), idx in any::<Index>()) {
        let p = pick_fcurve(c.len(), &idx);
        let four = induce_four_weights(&c, &p).unwrap();
        let r = c.r() as u64;
        let mut direct: Vec<u32> = p.blocks().iter().map(|b| (c.sum_over(b) % r) as u32).collect();
        direct.sort_unstable();
        prop_assert_eq!(sorted_mod(&four), direct);
    }

    #[test]
    fn induced_weights_follow_relabelling(
        (c, perm) in admissible(5, 4, 7).prop_flat_map(|c| { let n = c.len(); (Just(c), shuffled(n)) }),
        idx in any::<Index>(),
    ) {
        let p = pick_fcurve(c.len(), &idx);
        let moved = induce_four_weights(&permute_weights(&c, &perm), &permute_partition(&p, &perm)).unwrap();
        prop_assert_eq!(sorted_mod(&moved), sorted_mod(&induce_four_weights(&c, &p).unwrap()));
    }

    #[test]
    fn restriction_chains_agree(c in admissible(5, 5, 7), idx in any::<Index>()) {
        let p = pick_fcurve(c.len(), &idx);
        let direct = sorted_mod(&induce_four_weights(&c, &p).unwrap());
        prop_assert_eq!(sorted_mod(&chain_reduce(&c, &p, false)), direct.clone());
        prop_assert_eq!(sorted_mod(&chain_reduce(&c, &p, true)), direct);
    }

    #[test]
    fn base_degrees_in_range_and_symmetric(r in 1u32..=10, raw in prop::collection::vec(0u32..=10, 4), perm in shuffled(4)) {
        let c = [raw[0] % (r + 1), raw[1] % (r + 1), raw[2] % (r + 1), raw[3] % (r + 1)];
        let moved = [c[perm[0] - 1], c[perm[1] - 1], c[perm[2] - 1], c[perm[3] - 1]];
        for fam in BundleFamily::ALL {
            let d = deg4(fam, r, c);
            prop_assert!(d <= r / 2);
            prop_assert_eq!(deg4(fam, r, moved), d);
        }
    }

    #[test]
    fn degree_vectors_follow_relabelling(
        (c, perm) in admissible(5, 4, 6).prop_flat_map(|c| { let n = c.len(); (Just(c), shuffled(n)) }),
    ) {
        let moved = permute_weights(&c, &perm);
        for fam in BundleFamily::ALL {
            let before = degree_vector(fam, &c).unwrap();
            let after = degree_vector(fam, &moved).unwrap();
            for (p, d) in before.iter() {
                prop_assert_eq!(after.get(&permute_partition(p, &perm)), Some(d));
            }
        }
    }

    #[test]
    fn factor_degrees_reassemble(c in admissible(4, 5, 7), idx in any::<Index>()) {
        let subset = pick_cut(c.len(), &idx);
        for fam in BundleFamily::ALL {
            prop_assert_eq!(factorization_mismatch(fam, &c, &subset).unwrap(), None);
        }
    }

    #[test]
    fn families_agree_on_random_curves(c in admissible(7, 4, 9), idx in any::<Index>()) {
        let p = pick_fcurve(c.len(), &idx);
        let values: Vec<u32> = BundleFamily::ALL.iter().map(|&f| fcurve_degree(f, &c, &p).unwrap()).collect();
        prop_assert!(values.iter().all(|&v| v == values[0]), "{:?}", values);
    }

    #[test]
    fn node_fibre_sizes_agree(c in admissible(8, 4, 8), n1_pick in any::<Index>()) {
        let n = c.len();
        let n1 = 2 + n1_pick.index(n - 3);
        let r = c.r() as u64;
        let head: u64 = c.entries()[..n1].iter().map(|&x| x as u64).sum();
        let tail: u64 = c.entries()[n1..].iter().map(|&x| x as u64).sum();
        prop_assert_eq!(head.gcd(&r), tail.gcd(&r));
        let data = degenerate(&CoverSpec::new(c).unwrap(), n1).unwrap();
        prop_assert_eq!(data.s as u64, head.gcd(&r));
        prop_assert_eq!(data.g, data.g1 + data.g2 + data.s as i64 - 1);
    }

    #[test]
    fn genus_ignores_order(
        (c, perm) in admissible(8, 3, 9).prop_flat_map(|c| { let n = c.len(); (Just(c), shuffled(n)) }),
    ) {
        let a = genus(&CoverSpec::new(c.clone()).unwrap());
        let b = genus(&CoverSpec::new(permute_weights(&c, &perm)).unwrap());
        prop_assert_eq!(a, b);
    }
}

fn columns(height: usize, n: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::sample::subsequence((1..=n).collect::<Vec<_>>(), height)
}

fn small_tableau(height: usize, n: usize, k: usize) -> impl Strategy<Value = Tableau> {
    prop::collection::vec(columns(height, n), 1..=k).prop_map(move |cols| Tableau::new(height, cols).unwrap())
}

fn constant_matrix(entries: &[i64], size: usize) -> PolyMatrix {
    entries.chunks(size).map(|row| row.iter().map(|&x| Poly::constant(x)).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tableau_functions_multiply_over_concatenation(
        (t1, t2) in (1usize..=3).prop_flat_map(|h| (small_tableau(h, 4, 2), small_tableau(h, 4, 2))),
    ) {
        let joined = t1.concat(&t2).unwrap();
        let product = &evaluate_tableau(&t1, 4).unwrap() * &evaluate_tableau(&t2, 4).unwrap();
        prop_assert_eq!(evaluate_tableau(&joined, 4).unwrap(), product);
    }

    #[test]
    fn minors_alternate(col in columns(3, 5), i in 0usize..3, j in 0usize..3) {
        prop_assume!(i != j);
        let m = generic_matrix(0, 3, 5);
        let select = |order: &[usize]| -> PolyMatrix {
            m.iter().map(|row| order.iter().map(|&c| row[c - 1].clone()).collect()).collect()
        };
        let mut swapped = col.clone();
        swapped.swap(i, j);
        prop_assert_eq!(determinant(&select(&swapped)), -determinant(&select(&col)));
        let mut repeated = col.clone();
        repeated[i] = repeated[j];
        prop_assert!(determinant(&select(&repeated)).is_zero());
    }

    #[test]
    fn elimination_matches_expansion(entries in prop::collection::vec(-4i64..=4, 25), var_slot in 0usize..25) {
        let mut m = constant_matrix(&entries, 5);
        m[var_slot / 5][var_slot % 5] = generic_matrix(0, 1, 1)[0][0].clone();
        prop_assert_eq!(bareiss_determinant(&m), cofactor_determinant(&m));
    }

    #[test]
    fn evaluation_commutes_with_substitution(t in small_tableau(2, 4, 3), values in prop::collection::vec(-3i64..=3, 8)) {
        let m = constant_matrix(&values, 4);
        let generic = evaluate_tableau(&t, 4).unwrap();
        let substituted = generic.substitute(&|v| Some(m[v.row as usize][v.col as usize - 1].clone()));
        prop_assert_eq!(substituted, evaluate_on(&t, &m).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Random linearizations with denominator 2 on small shapes.
    #[test]
    fn restriction_theorem_on_random_linearizations(
        shape in prop::sample::select(vec![(1usize, 1usize, 2usize, 2usize), (1, 1, 2, 3), (1, 1, 3, 2), (1, 1, 3, 3)]),
        halves in prop::collection::vec(0i64..=2, 6),
    ) {
        let (d1, d2, n1, n2) = shape;
        let shape = BlockShape::new(d1, d2, n1, n2).unwrap();
        let n = shape.n();
        let d = shape.d();
        let twice: Vec<i64> = halves[..n].to_vec();
        prop_assume!(twice.iter().sum::<i64>() == 2 * (d as i64 + 1));
        let c = Linearization::new(
            twice.iter().map(|&x| BigRational::new(BigInt::from(x), BigInt::from(2))).collect(),
            d as u32,
        ).unwrap();
        prop_assume!(split_linearization(&c, n1, d1 as u32).is_ok());
        let report = verify_restriction_theorem(shape, &c, 2).unwrap();
        prop_assert!(report.is_ok(), "{:?}", report);
    }
}

#[test]
fn degree_vector_keys_are_canonical() {
    let c = WeightVector::new(3, vec![1, 2, 0, 1, 2]).unwrap();
    let v = degree_vector(BundleFamily::Git, &c).unwrap();
    let keys: Vec<String> = v.iter().map(|(p, _)| p.to_string()).collect();
    let expected: Vec<String> = enumerate_fcurves(5).iter().map(|p| p.to_string()).collect();
    assert_eq!(keys, expected);
}
