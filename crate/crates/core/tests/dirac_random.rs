use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ptk_core::dirac::random::{
    random_antisymmetric, random_lagrangian, random_matrix, random_subspace,
};
use ptk_core::dirac::{
    backward_pullback, cospinor_line, spinor_cospinor_iso, spinor_line, transversal_conditions,
    Ext, LinearDirac,
};
use ptk_core::linalg;

#[test]
fn lemma2_conditions_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut counts = [0usize; 2];
    for _ in 0..200 {
        let n = rng.gen_range(1..=5);
        let l = random_lagrangian(&mut rng, n);
        let k = rng.gen_range(0..=n);
        let x = random_subspace(&mut rng, n, k);
        let flags = transversal_conditions(&l, &x).unwrap();
        assert!(flags.agree(), "n={n} k={k} {flags:?}\nL=\n{}", l.display());
        counts[usize::from(flags.b)] += 1;
    }
    assert!(
        counts[0] > 0 && counts[1] > 0,
        "both outcomes exercised: {counts:?}"
    );
}

#[test]
fn spinor_iso_spans_cospinor() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..100 {
        let n = rng.gen_range(1..=5);
        let l = random_lagrangian(&mut rng, n);
        let phi = spinor_line(&l).unwrap();
        let w = spinor_cospinor_iso(&phi, &Ext::top(n));
        assert!(w.same_line(&cospinor_line(&l).unwrap()));
    }
}

#[test]
fn pullback_of_form_graph_is_graph_of_pullback() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let (m, n) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let omega = random_antisymmetric(&mut rng, m);
        let f = random_matrix(&mut rng, m, n);
        let p = backward_pullback(&LinearDirac::graph_form(&omega).unwrap(), &f).unwrap();
        let pulled = linalg::mat_mul(&linalg::mat_mul(&linalg::transpose(&f, n), &omega), &f);
        assert!(p
            .result
            .same_subspace(&LinearDirac::graph_form(&pulled).unwrap()));
        assert!(p.transverse);
    }
}

#[test]
fn pullback_is_functorial() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut checked = 0;
    for _ in 0..80 {
        let (a, b, c) = (
            rng.gen_range(1..=4),
            rng.gen_range(1..=4),
            rng.gen_range(1..=4),
        );
        let l = random_lagrangian(&mut rng, c);
        let g = random_matrix(&mut rng, c, b);
        let f = random_matrix(&mut rng, b, a);
        let gf = linalg::mat_mul(&g, &f);
        let pg = backward_pullback(&l, &g).unwrap();
        let pf = backward_pullback(&pg.result, &f).unwrap();
        let pgf = backward_pullback(&l, &gf).unwrap();
        if pg.transverse && pf.transverse && pgf.transverse {
            assert!(pf.result.same_subspace(&pgf.result));
            checked += 1;
        }
    }
    assert!(checked > 10);
}
