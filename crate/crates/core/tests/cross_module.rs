//! Cross-module consistency: the covering-quiver classification of fixed
//! components must agree with the thin combinatorics in the toric case,
//! and the two descriptions of the localization image must match on
//! projective spaces.

use std::collections::BTreeMap;

use quiver_chow::covering::{
    enumerate_covering_vectors, fixed_components, stable_locus_nonempty, window_of,
};
use quiver_chow::poly::{Poly, Var};
use quiver_chow::quiver::{DimVector, Quiver, Stability};
use quiver_chow::toric::{image_basis, stable_spanning_trees, thin_stable, ThinMode};

fn k23() -> Quiver {
    let mut arrows = Vec::new();
    for j in 1..=3 {
        for i in 1..=2 {
            arrows.push((format!("{j}{i}"), format!("i{i}"), format!("j{j}")));
        }
    }
    Quiver::new(
        vec![
            "i1".into(),
            "i2".into(),
            "j1".into(),
            "j2".into(),
            "j3".into(),
        ],
        arrows,
    )
    .unwrap()
}

fn kron(n: usize) -> Quiver {
    let names = ["a", "b", "c", "d", "e"];
    Quiver::new(
        vec!["i".into(), "j".into()],
        (0..n)
            .map(|k| (names[k].to_string(), "i".into(), "j".into()))
            .collect(),
    )
    .unwrap()
}

#[test]
fn thin_fixed_components_match_stable_spanning_trees() {
    for (q, theta) in [
        (k23(), Stability(vec![3, 3, -2, -2, -2])),
        (kron(3), Stability(vec![1, -1])),
        (kron(4), Stability(vec![1, -1])),
    ] {
        let d = DimVector::ones(q.num_vertices());
        let comps = fixed_components(&q, &d, &theta).unwrap();
        let trees = stable_spanning_trees(&q, &theta).unwrap();
        assert_eq!(comps.len(), trees.len());
        assert!(comps.iter().all(|c| c.isolated));
    }
}

#[test]
fn k23_has_six_isolated_components() {
    let q = k23();
    let comps =
        fixed_components(&q, &DimVector::ones(5), &Stability(vec![3, 3, -2, -2, -2])).unwrap();
    assert_eq!(comps.len(), 6);
    assert!(comps.iter().all(|c| c.isolated && c.dimension == 0));
}

#[test]
fn kronecker_image_basis_satisfies_pairwise_congruences() {
    // On projective space the image of the restriction map has a second
    // description: after rewriting the entry at the nu-th fixed point by
    // x_k -> x_k - x_nu, the entries at any two fixed points must agree
    // modulo the difference of their characters. This translates the tree
    // tuples into the single-character normalization and checks that both
    // descriptions cut out the same tuples.
    for n in [2usize, 3] {
        let q = kron(n);
        let theta = Stability(vec![1, -1]);
        let trees = stable_spanning_trees(&q, &theta).unwrap();
        // tree nu is the single arrow a_nu, in order
        let tree_arrow: Vec<usize> = trees
            .iter()
            .map(|t| {
                assert_eq!(t.len(), 1);
                t[0]
            })
            .collect();
        for (_, tuple) in image_basis(&q, &theta, ThinMode::Stable, 3).unwrap() {
            let translated: Vec<Poly> = tuple
                .entries
                .iter()
                .zip(&tree_arrow)
                .map(|(entry, &nu)| {
                    let shift: BTreeMap<Var, Poly> = (0..q.num_arrows())
                        .map(|k| {
                            (
                                Var::Arrow(k),
                                Poly::var(Var::Arrow(k)).sub(&Poly::var(Var::Arrow(nu))),
                            )
                        })
                        .collect();
                    entry.substitute(&shift)
                })
                .collect();
            for mu in 0..trees.len() {
                for nu in (mu + 1)..trees.len() {
                    // congruence modulo x_nu - x_mu: substitute and compare
                    let mut glue = BTreeMap::new();
                    glue.insert(
                        Var::Arrow(tree_arrow[nu]),
                        Poly::var(Var::Arrow(tree_arrow[mu])),
                    );
                    assert_eq!(
                        translated[mu].substitute(&glue),
                        translated[nu].substitute(&glue),
                        "entries {mu} and {nu} disagree modulo their character"
                    );
                }
            }
        }
    }
}

#[test]
fn thin_stability_oracles_agree() {
    // For a thin covering vector the generic-subdimension criterion on the
    // window must coincide with the combinatorial cut criterion applied to
    // the full window support.
    for (q, theta) in [
        (k23(), Stability(vec![3, 3, -2, -2, -2])),
        (kron(3), Stability(vec![1, -1])),
        (kron(2), Stability(vec![1, -1])),
    ] {
        let d = DimVector::ones(q.num_vertices());
        for beta in enumerate_covering_vectors(&q, &d).unwrap() {
            let (window, dims, theta_hat) = window_of(&q, &theta, &beta);
            let via_generic = stable_locus_nonempty(&window, &dims, &theta_hat).unwrap();
            let all_arrows: Vec<usize> = (0..window.num_arrows()).collect();
            let via_cuts = thin_stable(&window, &all_arrows, &theta_hat).unwrap();
            assert_eq!(via_generic, via_cuts, "support {:?}", beta);
        }
    }
}
