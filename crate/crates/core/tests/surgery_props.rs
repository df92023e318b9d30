use census_qa::surgery::{SurgeryComponent, SurgeryPresentation};
use census_qa::tangle::ExtendedRational;
use num_bigint::BigInt;
use proptest::prelude::*;

fn coefficient() -> impl Strategy<Value = ExtendedRational> {
    (-9i64..=9, 1i64..=9).prop_map(|(p, q)| ExtendedRational::new(p, q).unwrap())
}

fn presentation(max_components: usize, max_lk: i64) -> impl Strategy<Value = SurgeryPresentation> {
    (1..=max_components).prop_flat_map(move |n| {
        let coeffs = prop::collection::vec(coefficient(), n);
        let upper = prop::collection::vec(-max_lk..=max_lk, n * (n - 1) / 2);
        (coeffs, upper).prop_map(move |(coeffs, upper)| {
            let mut lk = vec![vec![0; n]; n];
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    lk[i][j] = upper[k];
                    lk[j][i] = upper[k];
                    k += 1;
                }
            }
            let comps = coeffs.into_iter().enumerate().map(|(i, c)| SurgeryComponent::new(format!("C{i}"), c)).collect();
            SurgeryPresentation::new(comps, lk).unwrap()
        })
    })
}

/// Leibniz expansion of the presentation matrix, independent of the
/// elimination used by the library.
fn h1_by_permutations(p: &SurgeryPresentation) -> BigInt {
    let n = p.len();
    let a: Vec<Vec<i128>> = (0..n)
        .map(|i| {
            let c = p.components()[i].coefficient;
            (0..n)
                .map(|j| if i == j { c.numerator() as i128 } else { c.denominator() as i128 * p.linking()[i][j] as i128 })
                .collect()
        })
        .collect();
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for k in 0..n {
                let mut q = p.clone();
                q.insert(k, n - 1);
                out.push(q);
            }
        }
        out
    }
    let mut det: i128 = 0;
    for s in perms(n) {
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| s[i] > s[j]).count();
        let term: i128 = (0..n).map(|i| a[i][s[i]]).product();
        det += if inversions % 2 == 0 { term } else { -term };
    }
    BigInt::from(det.abs())
}

fn assert_shape(p: &SurgeryPresentation) {
    let lk = p.linking();
    assert_eq!(lk.len(), p.len());
    for i in 0..lk.len() {
        assert_eq!(lk[i][i], 0);
        for j in 0..lk.len() {
            assert_eq!(lk[i][j], lk[j][i]);
        }
    }
}

#[test]
fn h1_of_small_presentations() {
    let two = SurgeryPresentation::new(
        vec![SurgeryComponent::new("C0", 2.into()), SurgeryComponent::new("C1", 3.into())],
        vec![vec![0, 1], vec![1, 0]],
    )
    .unwrap();
    assert_eq!(two.h1_order(), BigInt::from(5));
    assert_eq!(SurgeryPresentation::new(vec![], vec![]).unwrap().h1_order(), BigInt::from(1));
    let one = SurgeryPresentation::new(vec![SurgeryComponent::new("K", (-37).into())], vec![vec![0]]).unwrap();
    assert_eq!(one.h1_order(), BigInt::from(37));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn h1_matches_the_permutation_expansion(p in presentation(4, 5)) {
        prop_assert_eq!(p.h1_order(), h1_by_permutations(&p));
    }

    #[test]
    fn h1_is_invariant_under_twisting(p in presentation(4, 5), u in 0usize..4, t in -5i64..=5) {
        let id = format!("C{}", u % p.len());
        let q = p.rolfsen_twist(&id, t).unwrap();
        prop_assert_eq!(q.h1_order(), p.h1_order());
        assert_shape(&q);
    }

    #[test]
    fn twist_then_untwist_is_the_identity(p in presentation(4, 5), u in 0usize..4, t in -5i64..=5) {
        let id = format!("C{}", u % p.len());
        let q = p.rolfsen_twist(&id, t).unwrap();
        prop_assume!(!q.coefficient(&id).unwrap().is_infinite());
        prop_assert_eq!(q.rolfsen_twist(&id, -t).unwrap(), p);
    }

    #[test]
    fn deleting_an_infinite_component_keeps_h1(p in presentation(4, 5), u in 0usize..4, k in 1i64..=6, neg in any::<bool>()) {
        // Force 1/k (or -1/k) on the twisted component so that twisting by -k (or k) sends it to infinity.
        let u = u % p.len();
        let id = format!("C{u}");
        let c = if neg { ExtendedRational::new(-1, k).unwrap() } else { ExtendedRational::new(1, k).unwrap() };
        let mut comps = p.components().to_vec();
        comps[u] = SurgeryComponent::new(id.clone(), c);
        let p = SurgeryPresentation::new(comps, p.linking().to_vec()).unwrap();
        let q = p.rolfsen_twist(&id, if neg { k } else { -k }).unwrap();
        prop_assert!(q.coefficient(&id).unwrap().is_infinite());
        let r = q.delete_infinity(&id).unwrap();
        prop_assert_eq!(r.len(), p.len() - 1);
        prop_assert_eq!(r.h1_order(), p.h1_order());
        assert_shape(&r);
        for c in r.components() {
            prop_assert_eq!(c.coefficient, q.coefficient(&c.id).unwrap());
        }
    }
}
