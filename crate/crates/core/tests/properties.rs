use k3bhcr::groups::{
    aut_group, element_set, intermediate_subgroups, j_group, sl_group, sl_order_closed_form, sl_order_theta,
};
use k3bhcr::lattice::IntegralLattice;
use k3bhcr::linalg::{int, invert, smith_normal_form, IntMatrix};
use k3bhcr::potential::AtomKind;
use k3bhcr::{Potential, Shape};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn matrix(n: usize, range: std::ops::RangeInclusive<i64>) -> impl Strategy<Value = IntMatrix> {
    proptest::collection::vec(range, n * n)
        .prop_map(move |v| IntMatrix::from_vec(n, n, v.into_iter().map(BigInt::from).collect()))
}

/// Product of elementary matrices `I + c E_ij`, indices reduced mod `n`.
fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    for &(i, j, c) in ops {
        let (i, j) = (i % n, j % n);
        if i != j {
            let mut e = IntMatrix::identity(n);
            e[(i, j)] = int(c);
            u = u.mul(&e);
        }
    }
    u
}

fn shape() -> impl Strategy<Value = Shape> {
    prop::sample::select(Shape::ALL.to_vec())
}

fn k3_like() -> impl Strategy<Value = Potential> {
    (shape(), [2i64..=7, 2i64..=7, 2i64..=7]).prop_map(|(s, a)| s.potential(a))
}

/// `x^2` plus one atom of `kind` in `a.len()` further variables.
fn x2_plus_atom(kind: AtomKind, a: &[i64]) -> Potential {
    let n = a.len();
    let mut rows = vec![{
        let mut r = vec![0; n + 1];
        r[0] = 2;
        r
    }];
    for (i, &e) in a.iter().enumerate() {
        let mut r = vec![0; n + 1];
        r[1 + i] = e;
        match kind {
            AtomKind::Chain if i + 1 < n => r[2 + i] += 1,
            AtomKind::Loop => r[1 + (i + 1) % n] += 1,
            _ => {}
        }
        rows.push(r);
    }
    Potential::from_rows(&rows).unwrap()
}

fn brute_sl_order(p: &Potential) -> usize {
    let aut = element_set(&aut_group(p).unwrap()).unwrap();
    aut.iter()
        .filter(|s| s.entries().iter().fold(BigRational::zero(), |a, b| a + b).is_integer())
        .count()
}

fn block(k: u8) -> IntegralLattice {
    match k {
        0 => IntegralLattice::diagonal(&[2]),
        1 => IntegralLattice::diagonal(&[-2]),
        2 => IntegralLattice::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap(),
        3 => IntegralLattice::from_rows(&[vec![0, 2], vec![2, 0]]).unwrap(),
        _ => IntegralLattice::from_rows(&[
            vec![-2, 1, 0, 0],
            vec![1, -2, 1, 1],
            vec![0, 1, -2, 0],
            vec![0, 1, 0, -2],
        ])
        .unwrap(),
    }
}

fn two_elementary() -> impl Strategy<Value = IntegralLattice> {
    proptest::collection::vec(0u8..5, 1..5).prop_map(|ks| {
        ks.iter().skip(1).fold(block(ks[0]), |l, &k| l.direct_sum(&block(k)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn snf_is_a_unimodular_diagonalisation(m in matrix(4, -6..=6)) {
        let s = smith_normal_form(&m);
        prop_assert!(s.u.is_unimodular() && s.v.is_unimodular());
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
        let f = s.invariant_factors();
        for w in f.windows(2) {
            prop_assert!(w[1].is_zero() || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero()));
            prop_assert!(!w[0].is_negative());
        }
        let prod = f.iter().fold(BigInt::one(), |a, b| a * b);
        prop_assert_eq!(prod, m.det().abs());
        prop_assert_eq!(smith_normal_form(&m.transpose()).invariant_factors(), f);
    }

    #[test]
    fn rational_inverse(m in matrix(4, -5..=5)) {
        prop_assume!(!m.det().is_zero());
        let inv = invert(&m).unwrap();
        prop_assert_eq!(m.to_rational().mul(&inv), IntMatrix::identity(4).to_rational());
    }

    #[test]
    fn transpose_is_an_involution_preserving_total_charge(p in k3_like()) {
        prop_assert_eq!(p.transpose().transpose(), p.clone());
        let sum = |p: &Potential| p.charges().unwrap().q.iter().fold(BigRational::zero(), |a, b| a + b);
        prop_assert_eq!(sum(&p), sum(&p.transpose()));
    }

    #[test]
    fn group_dualities(p in k3_like()) {
        let det = p.det().abs();
        let pt = p.transpose();
        prop_assert_eq!(j_group(&p).unwrap().transpose(), sl_group(&pt).unwrap());
        prop_assert_eq!(sl_group(&p).unwrap().transpose(), j_group(&pt).unwrap());
        prop_assert_eq!(aut_group(&p).unwrap().order(), det.clone());
        for g in intermediate_subgroups(&p).unwrap() {
            let gt = g.transpose();
            prop_assert_eq!(gt.transpose(), g.clone());
            prop_assert_eq!(g.order() * gt.order(), det.clone());
        }
    }

    #[test]
    fn sl_order_by_counting(p in k3_like()) {
        prop_assert_eq!(sl_group(&p).unwrap().order_u64() as usize, brute_sl_order(&p));
    }

    #[test]
    fn discriminant_data_is_a_congruence_invariant(l in two_elementary(),
                                                   ops in proptest::collection::vec((0usize..16, 0usize..16, -2i64..=2), 0..16)) {
        let u = unimodular(l.rank(), &ops);
        prop_assert!(u.is_unimodular());
        let m = IntegralLattice::new(u.transpose().mul(l.gram()).mul(&u)).unwrap();
        prop_assert_eq!(m.det(), l.det());
        prop_assert_eq!(m.is_even(), l.is_even());
        prop_assert_eq!(m.two_elementary_a().unwrap(), l.two_elementary_a().unwrap());
        prop_assert_eq!(m.delta().unwrap(), l.delta().unwrap());
        prop_assert_eq!(m.discriminant_group().unwrap(), l.discriminant_group().unwrap());
    }
}

fn exponent_vectors(n: usize, max: i64) -> Vec<Vec<i64>> {
    (0..n).fold(vec![vec![]], |acc, _| {
        acc.into_iter().flat_map(|v| (2..=max).map(move |e| [v.clone(), vec![e]].concat())).collect()
    })
}

#[test]
fn closed_forms_without_fermat_factor_on_calabi_yau_exponents() {
    let mut seen = 0;
    for s in [Shape::Fermat, Shape::Loop, Shape::Chain] {
        for a in exponent_vectors(3, 24) {
            let a = [a[0], a[1], a[2]];
            let p = s.potential(a);
            if !p.charges().unwrap().is_calabi_yau() {
                continue;
            }
            seen += 1;
            assert_eq!(sl_order_closed_form(s, a) as usize, brute_sl_order(&p), "{s} {a:?}");
        }
    }
    assert!(seen > 50);
}

#[test]
fn theta_formula_on_calabi_yau_exponents() {
    let mut seen = 0;
    for (n, max) in [(2, 40), (3, 24), (4, 9)] {
        for kind in [AtomKind::Chain, AtomKind::Loop, AtomKind::Fermat] {
            for a in exponent_vectors(n, max) {
                let p = x2_plus_atom(kind, &a);
                if !p.is_invertible() || !p.charges().unwrap().is_calabi_yau() {
                    continue;
                }
                seen += 1;
                assert_eq!(sl_order_theta(kind, &a) as usize, brute_sl_order(&p), "{kind:?} {a:?}");
            }
        }
    }
    assert!(seen > 50);
}
