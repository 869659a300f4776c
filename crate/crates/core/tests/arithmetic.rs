//! Collection against independent models: exhaustive associativity on small
//! groups, seeded random triples on larger ones, and faithful matrix
//! representations of several bundled presentations.

use pgroup::pc::Word;
use pgroup::{corpus, GroupElement, PcGroup};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_element(g: &PcGroup, rng: &mut impl Rng) -> GroupElement {
    GroupElement::from_exps((0..g.ngens()).map(|_| rng.gen_range(0..g.prime())).collect())
}

#[test]
fn every_bundled_presentation_passes_the_overlap_tests() {
    for name in corpus::names() {
        let g = corpus::load(name).unwrap();
        g.presentation().check_consistency().unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(g.order(), (g.prime() as u64).pow(g.ngens() as u32), "{name}");
    }
}

#[test]
fn inconsistent_presentation_is_rejected() {
    // g1^3 = g2 has to commute with g1, but [g2, g1] = g3.
    let err = PcGroup::from_text("p 3\nn 3\npow 1 = 2:1\ncomm 2 1 = 3:1\n").unwrap_err();
    assert!(err.to_string().contains("consisten"), "{err}");
}

#[test]
fn associativity_is_exhaustive_up_to_order_81() {
    for name in corpus::names() {
        let g = corpus::load(name).unwrap();
        if g.order() > 81 {
            continue;
        }
        let all: Vec<GroupElement> = g.elements().unwrap().collect();
        let products: Vec<Vec<GroupElement>> =
            all.iter().map(|a| all.iter().map(|b| g.multiply(a, b)).collect()).collect();
        let index = |x: &GroupElement| {
            let p = g.prime();
            x.exps().iter().fold(0usize, |acc, &e| acc * p as usize + e as usize)
        };
        for (ia, row) in products.iter().enumerate() {
            for (ib, ab) in row.iter().enumerate() {
                let iab = index(ab);
                for ic in 0..all.len() {
                    let left = &products[iab][ic];
                    let right = &products[ia][index(&products[ib][ic])];
                    assert_eq!(left, right, "{name}: ({:?} {:?}) {:?}", all[ia], all[ib], all[ic]);
                }
            }
        }
    }
}

#[test]
fn associativity_on_random_triples_of_large_groups() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut checked = 0;
    for name in corpus::names() {
        let g = corpus::load(name).unwrap();
        if g.order() <= 81 {
            continue;
        }
        for _ in 0..2_000 {
            let (a, b, c) = (random_element(&g, &mut rng), random_element(&g, &mut rng), random_element(&g, &mut rng));
            assert_eq!(g.multiply(&g.multiply(&a, &b), &c), g.multiply(&a, &g.multiply(&b, &c)), "{name}");
            checked += 1;
        }
    }
    assert!(checked >= 10_000, "only {checked} triples");
}

#[test]
fn normal_forms_are_fixed_by_collection() {
    for name in corpus::names() {
        let g = corpus::load(name).unwrap();
        if g.order() > 729 {
            continue;
        }
        for a in g.elements().unwrap() {
            assert_eq!(g.collect(&a.to_word()), a, "{name}");
        }
    }
}

#[test]
fn cayley_table_rows_are_permutations() {
    for name in ["heisenberg27", "maxclass3_4", "sylow_sl2_z9", "c9xc3"] {
        let g = corpus::load(name).unwrap();
        let all: Vec<GroupElement> = g.elements().unwrap().collect();
        for a in &all {
            let mut row: Vec<GroupElement> = all.iter().map(|b| g.multiply(a, b)).collect();
            row.sort();
            row.dedup();
            assert_eq!(row.len(), all.len(), "{name}: left multiplication by {a:?}");
            assert!(g.multiply(a, &g.inverse(a)).is_identity());
        }
    }
}

// ---- matrix models ---------------------------------------------------------

type Mat = Vec<u64>;

fn mat_mul(a: &Mat, b: &Mat, dim: usize, m: u64) -> Mat {
    let mut out = vec![0; dim * dim];
    for i in 0..dim {
        for k in 0..dim {
            for j in 0..dim {
                out[i * dim + j] = (out[i * dim + j] + a[i * dim + k] * b[k * dim + j]) % m;
            }
        }
    }
    out
}

fn mat_id(dim: usize) -> Mat {
    (0..dim * dim).map(|k| u64::from(k % (dim + 1) == 0)).collect()
}

fn mat_pow(x: &Mat, e: i64, dim: usize, m: u64) -> Mat {
    let id = mat_id(dim);
    let mut order = 1;
    let mut y = x.clone();
    while y != id {
        y = mat_mul(&y, x, dim, m);
        order += 1;
    }
    (0..e.rem_euclid(order)).fold(id, |acc, _| mat_mul(&acc, x, dim, m))
}

fn mat_of(gens: &[Mat], a: &GroupElement, dim: usize, m: u64) -> Mat {
    a.exps().iter().enumerate().fold(mat_id(dim), |acc, (i, &e)| mat_mul(&acc, &mat_pow(&gens[i], e as i64, dim, m), dim, m))
}

fn mat_of_word(gens: &[Mat], w: &Word, dim: usize, m: u64) -> Mat {
    w.letters.iter().fold(mat_id(dim), |acc, &(i, e)| mat_mul(&acc, &mat_pow(&gens[i], e, dim, m), dim, m))
}

/// Checks that `gi -> gens[i]` satisfies every relator, is injective on the
/// whole group and multiplicative on every pair of a random sample, and that
/// the matrices generate a group of order `|G|`.
fn assert_faithful(g: &PcGroup, gens: &[Mat], dim: usize, m: u64) {
    let id = mat_id(dim);
    for (name, w) in g.presentation().relators() {
        assert_eq!(mat_of_word(gens, &w, dim, m), id, "relator {name}");
    }
    let all: Vec<GroupElement> = g.elements().unwrap().collect();
    let mats: Vec<Mat> = all.iter().map(|a| mat_of(gens, a, dim, m)).collect();
    let mut distinct = mats.clone();
    distinct.sort();
    distinct.dedup();
    assert_eq!(distinct.len(), all.len(), "not injective");

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..3_000 {
        let (i, j) = (rng.gen_range(0..all.len()), rng.gen_range(0..all.len()));
        let prod = g.multiply(&all[i], &all[j]);
        assert_eq!(mat_of(gens, &prod, dim, m), mat_mul(&mats[i], &mats[j], dim, m));
    }

    // Closure of the matrix generators, independent of the PC machinery.
    let mut seen = std::collections::BTreeSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for s in gens {
            let y = mat_mul(&x, s, dim, m);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    assert_eq!(seen.len() as u64, g.order());
}

#[test]
fn heisenberg_matches_unitriangular_matrices() {
    let g = corpus::load("heisenberg27").unwrap();
    let a: Mat = vec![1, 1, 0, 0, 1, 0, 0, 0, 1];
    let b: Mat = vec![1, 0, 0, 0, 1, 1, 0, 0, 1];
    let inv = |x: &Mat| mat_mul(x, x, 3, 3);
    // g3 = [g2, g1] = g2^-1 g1^-1 g2 g1
    let c = [inv(&b), inv(&a), b.clone(), a.clone()].iter().fold(mat_id(3), |acc, x| mat_mul(&acc, x, 3, 3));
    assert_faithful(&g, &[a, b, c], 3, 3);
}

#[test]
fn sylow_sl2_presentations_match_matrices() {
    let gens9: Vec<Mat> = vec![vec![1, 0, 3, 1], vec![1, 1, 0, 1], vec![4, 0, 0, 7], vec![1, 3, 0, 1]];
    assert_faithful(&corpus::load("sylow_sl2_z9").unwrap(), &gens9, 2, 9);
    let gens27: Vec<Mat> = vec![
        vec![1, 0, 3, 1],
        vec![1, 1, 0, 1],
        vec![4, 0, 0, 7],
        vec![1, 3, 0, 1],
        vec![1, 0, 9, 1],
        vec![10, 0, 0, 19],
        vec![1, 9, 0, 1],
    ];
    assert_faithful(&corpus::load("sylow_sl2_z27").unwrap(), &gens27, 2, 27);
}

#[test]
fn maximal_class_presentation_matches_matrices() {
    let gens: Vec<Mat> = vec![
        vec![1, 0, 1, 0, 1, 0, 0, 0, 1],
        vec![0, 26, 0, 1, 26, 0, 0, 0, 1],
        vec![1, 0, 1, 0, 1, 2, 0, 0, 1],
        vec![1, 0, 0, 0, 1, 3, 0, 0, 1],
        vec![1, 0, 3, 0, 1, 6, 0, 0, 1],
        vec![1, 0, 0, 0, 1, 9, 0, 0, 1],
        vec![1, 0, 9, 0, 1, 18, 0, 0, 1],
    ];
    assert_faithful(&corpus::load("maxclass3_7").unwrap(), &gens, 3, 27);
}

// ---- properties ------------------------------------------------------------

fn group_strategy() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["heisenberg27", "maxclass3_6", "sylow_sl2_z27", "thin_sl2_f3t3_q5", "c9xc3"])
}

fn word_strategy() -> impl Strategy<Value = Vec<(usize, i64)>> {
    prop::collection::vec((0usize..16, -4i64..5), 0..24)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn collecting_a_word_multiplies_its_letters(name in group_strategy(), raw in word_strategy()) {
        let g = corpus::load(name).unwrap();
        let letters: Vec<(usize, i64)> = raw.into_iter().map(|(i, e)| (i % g.ngens(), e)).collect();
        let folded = letters.iter().fold(g.identity(), |acc, &(i, e)| g.multiply(&acc, &g.power(&g.generator(i), e)));
        prop_assert_eq!(g.collect(&Word::new(letters)), folded);
    }

    #[test]
    fn inverses_powers_and_commutators(name in group_strategy(), seed in any::<u64>()) {
        let g = corpus::load(name).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_element(&g, &mut rng);
        let b = random_element(&g, &mut rng);
        prop_assert!(g.multiply(&g.inverse(&a), &a).is_identity());
        prop_assert_eq!(g.inverse(&g.multiply(&a, &b)), g.multiply(&g.inverse(&b), &g.inverse(&a)));
        prop_assert_eq!(g.power(&a, 5), g.multiply(&g.power(&a, 2), &g.power(&a, 3)));
        prop_assert_eq!(g.power(&a, -1), g.inverse(&a));
        let comm = [g.inverse(&a), g.inverse(&b), a.clone(), b.clone()]
            .iter()
            .fold(g.identity(), |acc, x| g.multiply(&acc, x));
        prop_assert_eq!(g.commutator(&a, &b), comm);
        prop_assert_eq!(g.conjugate(&a, &b), g.multiply(&g.inverse(&b), &g.multiply(&a, &b)));
        let k = g.element_order(&a);
        prop_assert!(g.power(&a, k as i64).is_identity());
        prop_assert!(k == 1 || !g.power(&a, (k / g.prime() as u64) as i64).is_identity());
    }
}
