use std::sync::OnceLock;

use hallforge::quiver::class_add;
use hallforge::{
    ComplexCategory, DHAlgebra, DHElement, DHTerm, FieldMatrix, Fq, HallAlgebra, HallElement, HallSym, IsoLabel, Morphism,
    Quiver, RepCategory, RepObject, TwoComplex,
};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

const FIXTURES: [(&str, u32); 5] = [("a2", 2), ("a2", 3), ("a2", 4), ("kronecker", 2), ("a1", 3)];

fn categories() -> &'static Vec<RepCategory> {
    static CATS: OnceLock<Vec<RepCategory>> = OnceLock::new();
    CATS.get_or_init(|| FIXTURES.iter().map(|&(name, q)| RepCategory::new(Quiver::fixture(name).unwrap(), q).unwrap()).collect())
}

fn labels(cat: &RepCategory, bound: usize) -> Vec<IsoLabel> {
    cat.labels_up_to(bound).unwrap()
}

fn nth<T: Clone>(v: &[T], i: usize) -> T {
    v[i % v.len()].clone()
}

fn random_matrix(q: u32, rows: usize, cols: usize, rng: &mut StdRng) -> FieldMatrix {
    let data = (0..rows * cols).map(|_| Fq(rng.random_range(0..q) as u8)).collect();
    FieldMatrix::new(rows, cols, data).unwrap()
}

/// `g_t A g_s^-1` on every arrow, for invertible `g` built from `seed`.
fn conjugate(cat: &RepCategory, m: &RepObject, seed: u64) -> RepObject {
    let f = cat.field();
    let mut rng = StdRng::seed_from_u64(seed);
    let g: Vec<FieldMatrix> = m
        .dimvec()
        .iter()
        .map(|&d| loop {
            let x = random_matrix(cat.q(), d, d, &mut rng);
            if x.is_invertible(f) {
                break x;
            }
        })
        .collect();
    let maps = cat
        .quiver()
        .arrows()
        .iter()
        .zip(m.maps())
        .map(|(&(s, t), a)| g[t].mul(f, a).mul(f, &g[s].inverse(f).unwrap()))
        .collect();
    RepObject::new(cat.quiver(), m.dimvec().to_vec(), maps).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn euler_form_is_hom_minus_ext(c in 0usize..5, i in 0usize..64, j in 0usize..64) {
        let cat = &categories()[c];
        let ls = labels(cat, 3);
        let (a, b) = (nth(&ls, i), nth(&ls, j));
        let lhs = cat.euler_form(&a.class(), &b.class());
        let rhs = cat.hom_dim(&a, &b).unwrap() as i64 - cat.ext_dim(&a, &b).unwrap() as i64;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn middle_terms_account_for_all_extensions(c in 0usize..5, i in 0usize..64, j in 0usize..64) {
        let cat = &categories()[c];
        let ls = labels(cat, 2);
        let (a, b) = (nth(&ls, i), nth(&ls, j));
        let dims: Vec<usize> = a.dimvec.iter().zip(&b.dimvec).map(|(x, y)| x + y).collect();
        let total: u64 = cat.labels_with_dimvec(&dims).unwrap().iter().map(|l| cat.ext_count_with_middle(&a, &b, l).unwrap()).sum();
        prop_assert_eq!(total, (cat.q() as u64).pow(cat.ext_dim(&a, &b).unwrap() as u32));
    }

    #[test]
    fn labels_and_aut_are_orbit_invariant(c in 0usize..5, i in 0usize..64, seed in any::<u64>()) {
        let cat = &categories()[c];
        let a = nth(&labels(cat, 3), i);
        let m = cat.representative(&a).unwrap();
        let n = conjugate(cat, &m, seed);
        prop_assert_eq!(cat.identify(&n).unwrap(), a.clone());
        prop_assert!(cat.is_isomorphic(&m, &n).unwrap());
        let aut = cat.aut_order(&a).unwrap() as u128;
        prop_assert_eq!(aut * cat.orbit_size(&a).unwrap() as u128, cat.group_order(&a.dimvec));
    }

    #[test]
    fn resolutions_are_exact(c in 0usize..5, i in 0usize..64) {
        let cat = &categories()[c];
        let f = cat.field();
        let a = nth(&labels(cat, 3), i);
        let res = cat.resolution(&a).unwrap();
        prop_assert!(res.cover.compose(f, &res.f).is_zero());
        prop_assert_eq!(res.f.rank_vector(f), res.p.dimvec().to_vec());
        prop_assert_eq!(res.cover.rank_vector(f), a.dimvec.clone());
        let q_dims = res.q.dimvec();
        let expected: Vec<usize> = res.p.dimvec().iter().zip(&a.dimvec).map(|(p, x)| p + x).collect();
        prop_assert_eq!(q_dims.to_vec(), expected);
    }

    #[test]
    fn star_product_is_graded(c in 0usize..5, i in 0usize..64, j in 0usize..64, ka in -2i64..=2, kb in -2i64..=2) {
        let cat = &categories()[c];
        let h = HallAlgebra::new(cat);
        let ls = labels(cat, 2);
        let n = cat.num_vertices();
        let x = HallSym { label: nth(&ls, i), k: vec![ka; n] };
        let y = HallSym { label: nth(&ls, j), k: vec![kb; n] };
        let want = class_add(&x.label.class(), &y.label.class());
        let p = h.star(&HallElement::basis(x), &HallElement::basis(y)).unwrap();
        prop_assert!(!p.is_zero());
        for (s, _) in p.iter() {
            prop_assert_eq!(s.label.class(), want.clone());
            prop_assert_eq!(s.k.clone(), vec![ka + kb; n]);
        }
    }
}

fn random_automorphism(cc: &ComplexCategory, m: &[usize], rng: &mut StdRng) -> Morphism {
    let f = cc.category().field();
    let basis = cc.projective_hom(m, m);
    let q = cc.category().q();
    let dims = cc.category().quiver().projective_sum_dimvec(m);
    loop {
        let mut g = Morphism::zero(&dims, &dims);
        for b in basis.iter() {
            g = g.add(f, &b.scale(f, Fq(rng.random_range(0..q) as u8)));
        }
        if g.is_invertible(f) {
            return g;
        }
    }
}

fn invert(cc: &ComplexCategory, g: &Morphism) -> Morphism {
    let f = cc.category().field();
    Morphism::new(g.parts().iter().map(|p| p.inverse(f).unwrap()).collect())
}

fn conjugate_complex(cc: &ComplexCategory, x: &TwoComplex, seed: u64) -> TwoComplex {
    let f = cc.category().field();
    let mut rng = StdRng::seed_from_u64(seed);
    let g1 = random_automorphism(cc, x.m1(), &mut rng);
    let g0 = random_automorphism(cc, x.m0(), &mut rng);
    let d1 = g0.compose(f, x.d1()).compose(f, &invert(cc, &g1));
    let d0 = g1.compose(f, x.d0()).compose(f, &invert(cc, &g0));
    cc.make(x.m1().to_vec(), x.m0().to_vec(), d1, d0).unwrap()
}

fn small_k(n: usize, code: usize) -> Vec<usize> {
    (0..n).map(|v| (code >> v) & 1).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn decomposition_is_an_isomorphism_invariant(
        c in 0usize..5,
        i in 0usize..64,
        j in 0usize..64,
        kp in 0usize..4,
        kq in 0usize..4,
        seed in any::<u64>(),
    ) {
        let cat = &categories()[c];
        let cc = ComplexCategory::new(cat);
        let ls = labels(cat, 2);
        let n = cat.num_vertices();
        let parts = [
            cc.c_of(&nth(&ls, i)).unwrap(),
            cc.shift(&cc.c_of(&nth(&ls, j)).unwrap()),
            cc.k_of(&small_k(n, kp)),
            cc.kstar_of(&small_k(n, kq)),
        ];
        let forward = parts.iter().fold(cc.zero(), |acc, p| cc.sum(&acc, p));
        let backward = parts.iter().rev().fold(cc.zero(), |acc, p| cc.sum(&acc, p));
        let moved = conjugate_complex(&cc, &forward, seed);
        let d = cc.decompose(&forward).unwrap();
        prop_assert_eq!(&cc.decompose(&backward).unwrap(), &d);
        prop_assert_eq!(&cc.decompose(&moved).unwrap(), &d);
        prop_assert!(cc.is_isomorphic(&forward, &moved).unwrap());

        let f = cat.field();
        let (r1, _) = moved.rank_vectors(f);
        let (h0, _) = cc.homology_labels(&moved).unwrap();
        let ph0 = cat.resolution(&h0).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let p_dims = cat.quiver().projective_sum_dimvec(&d.class.p);
        let want: Vec<usize> = ph0.p.dimvec().iter().zip(&p_dims).map(|(a, b)| a + b).collect();
        prop_assert_eq!(r1, want);
    }
}

fn dh_fixtures() -> &'static Vec<RepCategory> {
    static CATS: OnceLock<Vec<RepCategory>> = OnceLock::new();
    CATS.get_or_init(|| [("a2", 2), ("a2", 3), ("kronecker", 2)].iter().map(|&(n, q)| RepCategory::new(Quiver::fixture(n).unwrap(), q).unwrap()).collect())
}

fn random_term(cat: &RepCategory, code: &[i64]) -> DHTerm {
    let n = cat.num_vertices();
    let ls = labels(cat, 1);
    DHTerm {
        alpha: code[..n].to_vec(),
        beta: code[n..2 * n].to_vec(),
        a: nth(&ls, code[2 * n].unsigned_abs() as usize),
        b: nth(&ls, code[2 * n + 1].unsigned_abs() as usize),
    }
}

fn star_of(x: &DHElement) -> DHElement {
    x.iter().map(|(t, c)| (t.star(), c.clone())).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dh_product_is_associative_and_star_is_multiplicative(
        c in 0usize..3,
        codes in prop::collection::vec(prop::collection::vec(-2i64..=2, 6), 3),
    ) {
        let cat = &dh_fixtures()[c];
        let dh = DHAlgebra::new(cat);
        let [x, y, z] = [0, 1, 2].map(|k| random_term(cat, &codes[k]));
        prop_assert!(dh.check_associative(&x, &y, &z).unwrap());
        let (ex, ey) = (DHElement::basis(x.clone()), DHElement::basis(y.clone()));
        let xy = dh.mul(&ex, &ey).unwrap();
        prop_assert_eq!(star_of(&xy), dh.mul(&star_of(&ex), &star_of(&ey)).unwrap());
    }
}
