mod common;

use std::collections::HashSet;

use homkit::complexes::{cone_sequence, homology, is_exact, null_homotopy, splits};
use homkit::exactalg::{howell_form, smith_big, solve_linear, BigMatrix, IntMatrix, Ring};
use homkit::lifting::brute_homology_order;
use homkit::modules::{cokernel, hom_module, image, kernel, FpModule};
use homkit::xclass::Caps;
use num_bigint::BigInt;
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize, range: i64) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-range..=range, rows * cols).prop_map(move |d| IntMatrix::new(rows, cols, d))
}

fn any_matrix(range: i64) -> impl Strategy<Value = IntMatrix> {
    (1usize..=4, 1usize..=4).prop_flat_map(move |(r, c)| matrix(r, c, range))
}

fn ring() -> impl Strategy<Value = Ring> {
    prop::sample::select(vec![2i64, 3, 4, 6, 8, 9, 12]).prop_map(Ring::IntegersMod)
}

fn span(m: &IntMatrix, n: i64) -> HashSet<Vec<i64>> {
    let mut out = HashSet::from([vec![0; m.cols()]]);
    let mut todo: Vec<Vec<i64>> = out.iter().cloned().collect();
    while let Some(v) = todo.pop() {
        for i in 0..m.rows() {
            let w: Vec<i64> = v.iter().zip(m.row(i)).map(|(a, b)| (a + b).rem_euclid(n)).collect();
            if out.insert(w.clone()) {
                todo.push(w);
            }
        }
    }
    out
}

fn elements(m: &FpModule) -> Vec<Vec<i64>> {
    m.elements().unwrap().collect()
}

fn killed_by(m: &FpModule, a: i64) -> usize {
    elements(m)
        .iter()
        .filter(|x| {
            let mut y: Vec<i64> = x.iter().map(|v| v * a).collect();
            m.reduce(&mut y);
            y == m.zero_element()
        })
        .count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_decomposition(a in any_matrix(12)) {
        let s = smith_big(&BigMatrix::from_int(&a));
        prop_assert_eq!(s.u.mul(&BigMatrix::from_int(&a)).mul(&s.v), s.d.clone());
        prop_assert_eq!(s.u.mul(&s.u_inv), BigMatrix::identity(a.rows()));
        let d = s.diagonal();
        for w in d.windows(2) {
            prop_assert!(w[0] >= BigInt::from(0));
            if w[0] == BigInt::from(0) {
                prop_assert_eq!(&w[1], &BigInt::from(0));
            } else {
                prop_assert_eq!(&w[1] % &w[0], BigInt::from(0));
            }
        }
        prop_assert_eq!(d.iter().filter(|x| **x != BigInt::from(0)).count(), s.rank);
    }

    #[test]
    fn howell_span_and_idempotence(a in (1usize..=4, 1usize..=3).prop_flat_map(|(r, c)| matrix(r, c, 30)), r in ring()) {
        let n = r.modulus().unwrap();
        let a = a.reduce_mod(n);
        let h = howell_form(&a, r).unwrap();
        prop_assert_eq!(span(&a, n), span(&h, n));
        prop_assert_eq!(howell_form(&h, r).unwrap(), h.clone());
        let mut rows = a.to_rows();
        rows.reverse();
        prop_assert_eq!(howell_form(&IntMatrix::from_rows(&rows, a.cols()).unwrap(), r).unwrap(), h);
    }

    #[test]
    fn solve_matches_enumeration(a in (1usize..=3, 1usize..=3).prop_flat_map(|(r, c)| matrix(r, c, 30)), b in prop::collection::vec(0i64..30, 3), r in ring()) {
        let n = r.modulus().unwrap();
        let a = a.reduce_mod(n);
        let b = IntMatrix::new(a.rows(), 1, b[..a.rows()].to_vec()).reduce_mod(n);
        let cols = a.cols();
        let mut sols = Vec::new();
        for idx in 0..(n as u64).pow(cols as u32) {
            let mut x = vec![0; cols];
            let mut k = idx;
            for v in x.iter_mut().rev() {
                *v = (k % n as u64) as i64;
                k /= n as u64;
            }
            if a.mul(&IntMatrix::new(cols, 1, x.clone())).unwrap().reduce_mod(n) == b {
                sols.push(x);
            }
        }
        match solve_linear(&a, &b, r).unwrap() {
            None => prop_assert!(sols.is_empty()),
            Some(s) => {
                prop_assert_eq!(sols.iter().min(), Some(&s.particular.column(0)));
                prop_assert!(a.mul(&s.kernel).unwrap().reduce_mod(n).is_zero());
                prop_assert_eq!(span(&s.kernel.transpose(), n).len(), sols.len());
            }
        }
    }

    #[test]
    fn integer_solutions_verify(a in any_matrix(6), x in prop::collection::vec(-5i64..=5, 4)) {
        let x = IntMatrix::new(a.cols(), 1, x[..a.cols()].to_vec());
        let b = a.mul(&x).unwrap();
        let s = solve_linear(&a, &b, Ring::Integers).unwrap().expect("b is in the image");
        prop_assert_eq!(a.mul(&s.particular).unwrap(), b);
        prop_assert!(a.mul(&s.kernel).unwrap().is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn kernel_image_cokernel_orders(seed in any::<u64>(), n in prop::sample::select(vec![4i64, 6, 9])) {
        let mut rng = common::rng(seed);
        let pool = common::modules_upto(Ring::IntegersMod(n), 36);
        let (a, b) = (common::pick(&mut rng, &pool).clone(), common::pick(&mut rng, &pool).clone());
        let f = common::random_map(&mut rng, &a, &b);
        let (k, i, q) = (kernel(&f).unwrap(), image(&f).unwrap(), cokernel(&f).unwrap());
        let ord = |m: &FpModule| m.order().unwrap();
        prop_assert_eq!(ord(k.sub()) * ord(i.sub()), ord(&a));
        prop_assert_eq!(ord(i.sub()) * ord(&q.quotient), ord(&b));
        prop_assert!(f.compose(&k.inclusion).unwrap().is_zero());
        prop_assert!(q.projection.compose(&f).unwrap().is_zero());
        let brute_kernel = elements(&a).iter().filter(|x| f.apply(x).unwrap() == b.zero_element()).count();
        prop_assert_eq!(brute_kernel as u64, ord(k.sub()));
        let brute_image: HashSet<Vec<i64>> = elements(&a).iter().map(|x| f.apply(x).unwrap()).collect();
        prop_assert_eq!(brute_image.len() as u64, ord(i.sub()));
    }

    #[test]
    fn hom_order_matches_generator_images(seed in any::<u64>(), n in prop::sample::select(vec![4i64, 6, 8, 9])) {
        let mut rng = common::rng(seed);
        let pool = common::modules_upto(Ring::IntegersMod(n), 16);
        let (a, b) = (common::pick(&mut rng, &pool).clone(), common::pick(&mut rng, &pool).clone());
        let h = hom_module(&a, &b).unwrap();
        let brute: usize = a.factors().iter().map(|&d| killed_by(&b, d)).product();
        prop_assert_eq!(h.count(), Some(brute as u64));
        let all: HashSet<_> = h.maps().unwrap().collect();
        prop_assert_eq!(all.len(), brute);
    }

    #[test]
    fn homology_matches_enumeration(seed in any::<u64>(), width in 1usize..=3) {
        let mut rng = common::rng(seed);
        let pool = common::modules_upto(Ring::IntegersMod(4), 16);
        let c = common::random_complex_in(&mut rng, 0, width, &pool);
        let caps = Caps::default();
        let rep = is_exact(&c).unwrap();
        for k in c.degrees() {
            let (h, _, _) = homology(&c, k).unwrap();
            prop_assert_eq!(brute_homology_order(&c, k, &caps).unwrap(), h.order());
            let listed = rep.homology.iter().find(|(d, _)| *d == k).map(|(_, h)| h.order());
            prop_assert!(listed.is_none() || listed == Some(h.order()));
        }
    }

    #[test]
    fn cone_splits_iff_null_homotopic(seed in any::<u64>(), n in prop::sample::select(vec![2i64, 3, 4])) {
        let mut rng = common::rng(seed);
        let pool = common::modules_upto(Ring::IntegersMod(n), 16);
        let x = common::random_complex_in(&mut rng, 0, 2, &pool);
        let y = common::random_complex_in(&mut rng, 0, 2, &pool);
        let f = common::random_chain_map(&mut rng, &x, &y);
        let h = null_homotopy(&f).unwrap();
        prop_assert_eq!(splits(&cone_sequence(&f).unwrap()).unwrap().is_some(), h.is_some());
        if let Some(h) = h {
            prop_assert!(h.verify().unwrap());
        }
    }
}
