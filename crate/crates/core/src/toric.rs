//! Thin quiver moduli: the monomial presentation, stable spanning trees
//! and almost trees, restriction to the fixed points, and the edge
//! conditions cutting out the localization image.
//!
//! All operations require a normalized stability condition,
//! `theta(1) = 0`. Thin stability of a 0/1 representation is the cut
//! condition: every proper nonempty vertex subset closed under the support
//! arrows has negative theta-sum.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use thiserror::Error;

use crate::linalg;
use crate::poly::{Monomial, Poly, Var};
use crate::quiver::{Quiver, Stability};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ToricError {
    #[error("stability is not normalized: theta(1) = {0}; shift theta so that theta(1) = 0")]
    NotNormalized(i64),
    #[error("quiver must be connected and acyclic for tree enumeration")]
    NotTreeReady,
    #[error("spanning almost tree {omega:?} has {count} stable-tree removals instead of two")]
    RemovalAnomaly { omega: Vec<usize>, count: usize },
    #[error("tuple has {got} entries, expected {want}")]
    TupleLength { got: usize, want: usize },
    #[error("tuple entry {entry} uses a variable of its own tree")]
    TupleVariables { entry: usize },
    #[error("image basis rank drop in degree {degree}")]
    RankDrop { degree: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThinMode {
    Semistable,
    Stable,
}

fn check_normalized(theta: &Stability) -> Result<(), ToricError> {
    let total: i64 = theta.0.iter().sum();
    if total != 0 {
        return Err(ToricError::NotNormalized(total));
    }
    Ok(())
}

/// Arrows leaving a vertex subset: sources inside, targets outside.
pub fn boundary_arrows(q: &Quiver, subset: &[usize]) -> Vec<usize> {
    let inside: BTreeSet<usize> = subset.iter().copied().collect();
    q.arrows()
        .iter()
        .enumerate()
        .filter(|(_, a)| inside.contains(&a.src) && !inside.contains(&a.tgt))
        .map(|(idx, _)| idx)
        .collect()
}

/// The boundary monomial `x_I`: product of the arrow variables leaving
/// `I`; the empty product is 1.
pub fn x_i(q: &Quiver, subset: &[usize]) -> Poly {
    let mut p = Poly::one();
    for a in boundary_arrows(q, subset) {
        p = p.mul(&Poly::var(Var::Arrow(a)));
    }
    p
}

fn qualifying_subsets(q: &Quiver, theta: &Stability, mode: ThinMode) -> Vec<Vec<usize>> {
    let n = q.num_vertices();
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << n) - 1 {
        let subset: Vec<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
        let value = theta.subset_sum(&subset);
        let keep = match mode {
            ThinMode::Semistable => value > 0,
            ThinMode::Stable => value >= 0,
        };
        if keep {
            out.push(subset);
        }
    }
    out
}

/// The monomials `x_I` over all proper nonempty vertex subsets passing the
/// mode's inequality, deduplicated, in canonical monomial order. They
/// generate the kernel of restriction to the (semi)stable locus.
pub fn thin_kernel_generators(
    q: &Quiver,
    theta: &Stability,
    mode: ThinMode,
) -> Result<Vec<Poly>, ToricError> {
    check_normalized(theta)?;
    let mut monomials = BTreeSet::new();
    for subset in qualifying_subsets(q, theta, mode) {
        let p = x_i(q, &subset);
        let m = p
            .terms()
            .next()
            .expect("boundary monomial is nonzero")
            .0
            .clone();
        monomials.insert(m);
    }
    Ok(monomials
        .into_iter()
        .map(|m| Poly::monomial(m, num_rational::BigRational::from_integer(1.into())))
        .collect())
}

/// The qualifying boundary sets `J(I)` as arrow bitmasks.
fn forbidden_supports(q: &Quiver, theta: &Stability, mode: ThinMode) -> Vec<u64> {
    let mut cuts = BTreeSet::new();
    for subset in qualifying_subsets(q, theta, mode) {
        let mut mask = 0u64;
        for a in boundary_arrows(q, &subset) {
            mask |= 1 << a;
        }
        cuts.insert(mask);
    }
    cuts.into_iter().collect()
}

/// The monomial basis of the quotient up to the degree bound: all
/// monomials whose support contains no qualifying boundary set.
pub fn monomial_basis(
    q: &Quiver,
    theta: &Stability,
    mode: ThinMode,
    max_degree: u32,
) -> Result<Vec<Monomial>, ToricError> {
    check_normalized(theta)?;
    let cuts = forbidden_supports(q, theta, mode);
    let n_arrows = q.num_arrows();
    let mut out = Vec::new();
    let mut exps = vec![0u32; n_arrows];
    fn recurse(
        pos: usize,
        left: u32,
        exps: &mut Vec<u32>,
        n_arrows: usize,
        cuts: &[u64],
        out: &mut Vec<Monomial>,
    ) {
        if pos == n_arrows {
            if left != 0 {
                return;
            }
            let support: u64 = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .fold(0u64, |m, (a, _)| m | (1 << a));
            if cuts.iter().all(|&cut| cut & support != cut) {
                let mono = Monomial(
                    exps.iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(a, &e)| (Var::Arrow(a), e))
                        .collect(),
                );
                out.push(mono);
            }
            return;
        }
        for e in 0..=left {
            exps[pos] = e;
            recurse(pos + 1, left - e, exps, n_arrows, cuts, out);
            exps[pos] = 0;
        }
    }
    for degree in 0..=max_degree {
        if n_arrows == 0 {
            if degree == 0 {
                out.push(Monomial::one());
            }
            continue;
        }
        recurse(0, degree, &mut exps, n_arrows, &cuts, &mut out);
    }
    Ok(out)
}

/// Classification of an arrow subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubsetKind {
    SpanningTree,
    SpanningAlmostTree,
    Other,
}

/// An arrow subset with its cached classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrowSubset {
    pub arrows: Vec<usize>,
    pub kind: SubsetKind,
}

pub fn classify_subset(q: &Quiver, arrows: &[usize]) -> ArrowSubset {
    let kind = if is_spanning_tree(q, arrows) {
        SubsetKind::SpanningTree
    } else if arrows.iter().any(|&a| {
        let reduced: Vec<usize> = arrows.iter().copied().filter(|&b| b != a).collect();
        is_spanning_tree(q, &reduced)
    }) {
        SubsetKind::SpanningAlmostTree
    } else {
        SubsetKind::Other
    };
    ArrowSubset {
        arrows: arrows.to_vec(),
        kind,
    }
}

fn is_spanning_tree(q: &Quiver, arrows: &[usize]) -> bool {
    let n = q.num_vertices();
    arrows.len() + 1 == n && q.is_connected_support(arrows, &(0..n).collect::<Vec<_>>())
}

/// Thin stability of the 0/1 representation with the given support: every
/// proper nonempty vertex subset closed under the support arrows must have
/// negative theta-sum. Disconnected or non-spanning supports are never
/// stable.
pub fn thin_stable(q: &Quiver, support: &[usize], theta: &Stability) -> Result<bool, ToricError> {
    check_normalized(theta)?;
    let n = q.num_vertices();
    let support_set: BTreeSet<usize> = support.iter().copied().collect();
    for mask in 1u64..(1u64 << n) - 1 {
        let closed = q
            .arrows()
            .iter()
            .enumerate()
            .filter(|(idx, _)| support_set.contains(idx))
            .all(|(_, a)| mask & (1 << a.src) == 0 || mask & (1 << a.tgt) != 0);
        if !closed {
            continue;
        }
        let subset: Vec<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
        if theta.subset_sum(&subset) >= 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All stable spanning trees, by exhaustive enumeration of arrow subsets
/// of size `|Q_0| - 1`, in canonical subset order.
pub fn stable_spanning_trees(q: &Quiver, theta: &Stability) -> Result<Vec<Vec<usize>>, ToricError> {
    check_normalized(theta)?;
    if !q.is_connected() || !q.is_acyclic() {
        return Err(ToricError::NotTreeReady);
    }
    let n = q.num_vertices();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for arrows in (0..q.num_arrows()).combinations(n - 1) {
        if is_spanning_tree(q, &arrows) && thin_stable(q, &arrows, theta)? {
            out.push(arrows);
        }
    }
    Ok(out)
}

/// A one-dimensional-orbit datum: a stable spanning almost tree with its
/// two distinguished arrow removals and the stable trees they produce.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GkmEdge {
    pub omega: Vec<usize>,
    pub alpha_0: usize,
    pub alpha_inf: usize,
    pub omega_0: Vec<usize>,
    pub omega_inf: Vec<usize>,
}

/// All stable spanning almost trees with their two stable-tree removals.
/// Exactly two removals must yield stable spanning trees; any other count
/// is surfaced as an error rather than silently repaired.
pub fn stable_almost_trees(q: &Quiver, theta: &Stability) -> Result<Vec<GkmEdge>, ToricError> {
    check_normalized(theta)?;
    if !q.is_connected() || !q.is_acyclic() {
        return Err(ToricError::NotTreeReady);
    }
    let n = q.num_vertices();
    let mut out = Vec::new();
    for omega in (0..q.num_arrows()).combinations(n) {
        let subset = classify_subset(q, &omega);
        if subset.kind != SubsetKind::SpanningAlmostTree {
            continue;
        }
        if !thin_stable(q, &omega, theta)? {
            continue;
        }
        let mut removals = Vec::new();
        for &a in &omega {
            let reduced: Vec<usize> = omega.iter().copied().filter(|&b| b != a).collect();
            if is_spanning_tree(q, &reduced) && thin_stable(q, &reduced, theta)? {
                removals.push((a, reduced));
            }
        }
        if removals.len() != 2 {
            return Err(ToricError::RemovalAnomaly {
                omega,
                count: removals.len(),
            });
        }
        let (alpha_0, omega_0) = removals[0].clone();
        let (alpha_inf, omega_inf) = removals[1].clone();
        out.push(GkmEdge {
            omega,
            alpha_0,
            alpha_inf,
            omega_0,
            omega_inf,
        });
    }
    Ok(out)
}

/// A tuple of restrictions, one polynomial per stable spanning tree in
/// canonical tree order; entry `t` uses only complement variables of
/// tree `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricTuple {
    pub entries: Vec<Poly>,
}

/// Kills every monomial containing one of the given arrow variables.
fn restrict_away_from(p: &Poly, killed: &BTreeSet<usize>) -> Poly {
    let mut out = Poly::zero();
    for (m, c) in p.terms() {
        let touches = m.0.keys().any(|v| match v {
            Var::Arrow(a) => killed.contains(a),
            _ => false,
        });
        if !touches {
            out.add_term(m.clone(), c.clone());
        }
    }
    out
}

/// The restriction map to the fixed points: entry at a tree `H` sets
/// `x_a = 0` for every arrow of `H`.
pub fn i_star_toric(
    q: &Quiver,
    theta: &Stability,
    f: &Poly,
) -> Result<(Vec<Vec<usize>>, ToricTuple), ToricError> {
    let trees = stable_spanning_trees(q, theta)?;
    let entries = trees
        .iter()
        .map(|h| restrict_away_from(f, &h.iter().copied().collect()))
        .collect();
    Ok((trees, ToricTuple { entries }))
}

/// A failed edge condition: the edge and the nonzero difference of the two
/// restrictions.
#[derive(Debug, Clone)]
pub struct GkmViolation {
    pub edge: GkmEdge,
    pub difference: Poly,
}

/// The edge conditions of the localization image: for every stable almost
/// tree, the entries at its two trees agree after the distinguished
/// variables are set to zero. Returns all violations.
pub fn gkm_membership(
    trees: &[Vec<usize>],
    tuple: &ToricTuple,
    edges: &[GkmEdge],
) -> Result<(bool, Vec<GkmViolation>), ToricError> {
    if tuple.entries.len() != trees.len() {
        return Err(ToricError::TupleLength {
            got: tuple.entries.len(),
            want: trees.len(),
        });
    }
    for (idx, (h, p)) in trees.iter().zip(&tuple.entries).enumerate() {
        let tree_set: BTreeSet<usize> = h.iter().copied().collect();
        let uses_own_tree = p.vars().iter().any(|v| match v {
            Var::Arrow(a) => tree_set.contains(a),
            _ => true,
        });
        if uses_own_tree {
            return Err(ToricError::TupleVariables { entry: idx });
        }
    }
    let index_of = |tree: &Vec<usize>| trees.iter().position(|t| t == tree);
    let mut violations = Vec::new();
    for edge in edges {
        let i0 = index_of(&edge.omega_0).expect("edge tree is a stable tree");
        let ii = index_of(&edge.omega_inf).expect("edge tree is a stable tree");
        let f0 = restrict_away_from(&tuple.entries[i0], &[edge.alpha_0].into_iter().collect());
        let fi = restrict_away_from(&tuple.entries[ii], &[edge.alpha_inf].into_iter().collect());
        let difference = f0.sub(&fi);
        if !difference.is_zero() {
            violations.push(GkmViolation {
                edge: edge.clone(),
                difference,
            });
        }
    }
    Ok((violations.is_empty(), violations))
}

/// Restrictions of the monomial basis up to the degree bound. Linear
/// independence of the images is asserted degree by degree with an exact
/// rank computation.
pub fn image_basis(
    q: &Quiver,
    theta: &Stability,
    mode: ThinMode,
    max_degree: u32,
) -> Result<Vec<(Monomial, ToricTuple)>, ToricError> {
    let basis = monomial_basis(q, theta, mode, max_degree)?;
    let trees = stable_spanning_trees(q, theta)?;
    let mut out = Vec::new();
    for m in basis {
        let p = Poly::monomial(m.clone(), num_rational::BigRational::from_integer(1.into()));
        let entries: Vec<Poly> = trees
            .iter()
            .map(|h| restrict_away_from(&p, &h.iter().copied().collect()))
            .collect();
        out.push((m, ToricTuple { entries }));
    }
    // rank check per degree: tag tree coordinates apart and row-reduce
    for degree in 0..=max_degree {
        let in_degree: Vec<&(Monomial, ToricTuple)> =
            out.iter().filter(|(m, _)| m.degree() == degree).collect();
        if in_degree.is_empty() {
            continue;
        }
        let mut columns: BTreeMap<(usize, Monomial), usize> = BTreeMap::new();
        for (_, tuple) in &in_degree {
            for (t, p) in tuple.entries.iter().enumerate() {
                for (m, _) in p.terms() {
                    let next = columns.len();
                    columns.entry((t, m.clone())).or_insert(next);
                }
            }
        }
        let rows: Vec<Vec<num_rational::BigRational>> = in_degree
            .iter()
            .map(|(_, tuple)| {
                let mut row =
                    vec![num_rational::BigRational::from_integer(0.into()); columns.len()];
                for (t, p) in tuple.entries.iter().enumerate() {
                    for (m, c) in p.terms() {
                        row[columns[&(t, m.clone())]] = c.clone();
                    }
                }
                row
            })
            .collect();
        if linalg::rank(rows) != in_degree.len() {
            return Err(ToricError::RankDrop { degree });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Symbols;

    /// Full bipartite quiver with 2 sources and 3 sinks; arrows named by
    /// (sink, source) as in a 3x2 matrix, declared row by row.
    pub(crate) fn k23() -> Quiver {
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

    pub(crate) fn k23_theta() -> Stability {
        Stability(vec![3, 3, -2, -2, -2])
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
    fn x_i_examples() {
        let q = k23();
        let sym = Symbols::from_quiver(&q);
        // all three arrows out of source i1
        let p = x_i(&q, &[0]);
        assert_eq!(sym.poly_string(&p), "x_11*x_21*x_31");
        // the whole vertex set has no boundary
        assert_eq!(x_i(&q, &[0, 1, 2, 3, 4]), Poly::one());
        // both sources and sink j1: four arrows into j2, j3 remain
        let p = x_i(&q, &[0, 1, 2]);
        assert_eq!(sym.poly_string(&p), "x_21*x_22*x_31*x_32");
    }

    #[test]
    fn k23_kernel_ideal_matches_known_presentation() {
        let q = k23();
        let gens = thin_kernel_generators(&q, &k23_theta(), ThinMode::Stable).unwrap();
        let sym = Symbols::from_quiver(&q);
        let strings: Vec<String> = gens.iter().map(|p| sym.poly_string(p)).collect();
        // the nine minimal generators: pairs of arrows out of one source,
        // and the two arrows into one sink
        for expect in [
            "x_11*x_21",
            "x_11*x_31",
            "x_21*x_31",
            "x_12*x_22",
            "x_12*x_32",
            "x_22*x_32",
            "x_11*x_12",
            "x_21*x_22",
            "x_31*x_32",
        ] {
            assert!(strings.contains(&expect.to_string()), "missing {expect}");
        }
        // ideal equality: every listed generator is divisible by a minimal one
        let minimal: Vec<Monomial> = [
            [0usize, 2],
            [0, 4],
            [2, 4],
            [1, 3],
            [1, 5],
            [3, 5],
            [0, 1],
            [2, 3],
            [4, 5],
        ]
        .iter()
        .map(|pair| Monomial(pair.iter().map(|&a| (Var::Arrow(a), 1u32)).collect()))
        .collect();
        for p in &gens {
            let (m, _) = p.terms().next().unwrap();
            let divisible = minimal.iter().any(|g| {
                g.0.iter()
                    .all(|(v, &e)| m.0.get(v).copied().unwrap_or(0) >= e)
            });
            assert!(
                divisible,
                "{} not in the monomial ideal",
                sym.poly_string(p)
            );
        }
    }

    #[test]
    fn kronecker_kernel_single_monomial() {
        // only I = {i} qualifies for the stable inequality
        for n in 2..=4usize {
            let q = kron(n);
            let gens =
                thin_kernel_generators(&q, &Stability(vec![1, -1]), ThinMode::Stable).unwrap();
            assert_eq!(gens.len(), 1);
            assert_eq!(gens[0].degree(), Some(n as u32));
        }
    }

    #[test]
    fn normalization_enforced() {
        let q = kron(2);
        assert!(matches!(
            thin_kernel_generators(&q, &Stability(vec![1, 0]), ThinMode::Stable),
            Err(ToricError::NotNormalized(1))
        ));
    }

    #[test]
    fn k23_basis_supports_are_partial_matchings() {
        let q = k23();
        let basis = monomial_basis(&q, &k23_theta(), ThinMode::Stable, 3).unwrap();
        let mut supports = BTreeSet::new();
        for m in &basis {
            let support: BTreeSet<usize> =
                m.0.keys()
                    .map(|v| match v {
                        Var::Arrow(a) => *a,
                        _ => unreachable!(),
                    })
                    .collect();
            supports.insert(support);
        }
        assert_eq!(supports.len(), 13);
        // arrows are (sink j, source i): index = (j-1)*2 + (i-1);
        // a partial matching has at most one arrow per sink and per source
        for support in &supports {
            let sinks: Vec<usize> = support.iter().map(|a| a / 2).collect();
            let sources: Vec<usize> = support.iter().map(|a| a % 2).collect();
            assert_eq!(
                sinks.iter().collect::<BTreeSet<_>>().len(),
                sinks.len(),
                "one arrow per sink"
            );
            assert_eq!(
                sources.iter().collect::<BTreeSet<_>>().len(),
                sources.len(),
                "one arrow per source"
            );
        }
    }

    #[test]
    fn degree_zero_basis() {
        let q = kron(2);
        let basis = monomial_basis(&q, &Stability(vec![1, -1]), ThinMode::Stable, 0).unwrap();
        assert_eq!(basis, vec![Monomial::one()]);
    }

    #[test]
    fn zero_stability_empties_the_stable_locus() {
        // theta = 0: every proper nonempty subset qualifies; the sink
        // subset has empty boundary, so 1 lies in the ideal and no
        // monomial survives
        let q = kron(2);
        let theta = Stability(vec![0, 0]);
        let gens = thin_kernel_generators(&q, &theta, ThinMode::Stable).unwrap();
        assert!(gens.contains(&Poly::one()));
        let basis = monomial_basis(&q, &theta, ThinMode::Stable, 3).unwrap();
        assert!(basis.is_empty());
    }

    #[test]
    fn kronecker_image_basis_passes_edge_conditions() {
        let q = kron(3);
        let theta = Stability(vec![1, -1]);
        let trees = stable_spanning_trees(&q, &theta).unwrap();
        let edges = stable_almost_trees(&q, &theta).unwrap();
        for (_, tuple) in image_basis(&q, &theta, ThinMode::Stable, 2).unwrap() {
            let (ok, _) = gkm_membership(&trees, &tuple, &edges).unwrap();
            assert!(ok);
        }
    }

    #[test]
    fn thin_stability_examples() {
        // single-arrow supports on the Kronecker quiver are stable
        let q = kron(3);
        let theta = Stability(vec![1, -1]);
        for a in 0..3 {
            assert!(thin_stable(&q, &[a], &theta).unwrap());
        }
        // disconnected support is unstable
        assert!(!thin_stable(&q, &[], &theta).unwrap());

        // a stable tree of the bipartite instance
        let q = k23();
        // matrix rows (1 1 / 1 0 / 0 1): arrows 11, 12, 21, 32
        assert!(thin_stable(&q, &[0, 1, 2, 5], &k23_theta()).unwrap());
        // star at source i1 plus one arrow from i2 is unstable
        assert!(!thin_stable(&q, &[0, 2, 4, 1], &k23_theta()).unwrap());
    }

    #[test]
    fn k23_has_six_stable_trees() {
        let q = k23();
        let trees = stable_spanning_trees(&q, &k23_theta()).unwrap();
        assert_eq!(trees.len(), 6);
    }

    #[test]
    fn kronecker_trees_are_single_arrows() {
        for n in 2..=4usize {
            let q = kron(n);
            let trees = stable_spanning_trees(&q, &Stability(vec![1, -1])).unwrap();
            assert_eq!(trees.len(), n);
            assert!(trees.iter().all(|t| t.len() == 1));
        }
    }

    #[test]
    fn path_quiver_tree_and_edges() {
        let q = Quiver::new(
            vec!["1".into(), "2".into(), "3".into()],
            vec![
                ("a".into(), "1".into(), "2".into()),
                ("b".into(), "2".into(), "3".into()),
            ],
        )
        .unwrap();
        let theta = Stability(vec![1, 0, -1]);
        let trees = stable_spanning_trees(&q, &theta).unwrap();
        assert_eq!(trees, vec![vec![0, 1]]);
        let edges = stable_almost_trees(&q, &theta).unwrap();
        assert!(edges.is_empty());
    }

    #[test]
    fn k23_has_six_gkm_edges() {
        let q = k23();
        let edges = stable_almost_trees(&q, &k23_theta()).unwrap();
        assert_eq!(edges.len(), 6);
        for e in &edges {
            assert_eq!(e.omega.len(), 5);
            assert_ne!(e.alpha_0, e.alpha_inf);
        }
    }

    #[test]
    fn kronecker_edges_connect_all_pairs() {
        for n in 2..=4usize {
            let q = kron(n);
            let edges = stable_almost_trees(&q, &Stability(vec![1, -1])).unwrap();
            assert_eq!(edges.len(), n * (n - 1) / 2);
        }
    }

    #[test]
    fn restriction_examples() {
        let q = k23();
        let theta = k23_theta();
        let (trees, tuple) = i_star_toric(&q, &theta, &Poly::one()).unwrap();
        assert_eq!(tuple.entries, vec![Poly::one(); trees.len()]);

        // x_22^m x_31^n survives exactly at the tree whose complement is
        // {22, 31}, i.e. the tree with arrows {11, 12, 21, 32}
        let f = Poly::var(Var::Arrow(3))
            .pow(2)
            .mul(&Poly::var(Var::Arrow(4)));
        let (trees, tuple) = i_star_toric(&q, &theta, &f).unwrap();
        let expect_tree = vec![0usize, 1, 2, 5];
        let idx = trees.iter().position(|t| *t == expect_tree).unwrap();
        for (t, entry) in tuple.entries.iter().enumerate() {
            if t == idx {
                assert_eq!(entry, &f);
            } else {
                assert!(entry.is_zero());
            }
        }
    }

    #[test]
    fn restriction_kills_the_kernel_ideal() {
        // every tree misses at least one boundary arrow of each qualifying
        // subset, so all kernel generators restrict to the zero tuple
        for (q, theta) in [(k23(), k23_theta()), (kron(3), Stability(vec![1, -1]))] {
            for p in thin_kernel_generators(&q, &theta, ThinMode::Stable).unwrap() {
                let (_, tuple) = i_star_toric(&q, &theta, &p).unwrap();
                assert!(tuple.entries.iter().all(|e| e.is_zero()));
            }
        }
    }

    #[test]
    fn gkm_membership_for_restrictions() {
        let q = k23();
        let theta = k23_theta();
        let edges = stable_almost_trees(&q, &theta).unwrap();
        for f in [
            Poly::one(),
            Poly::var(Var::Arrow(3)),
            Poly::var(Var::Arrow(0)).pow(3),
            Poly::var(Var::Arrow(2)).mul(&Poly::var(Var::Arrow(5))),
        ] {
            let (trees, tuple) = i_star_toric(&q, &theta, &f).unwrap();
            let (ok, violations) = gkm_membership(&trees, &tuple, &edges).unwrap();
            assert!(ok, "violations: {}", violations.len());
        }
    }

    #[test]
    fn deliberate_mismatch_is_flagged() {
        let q = k23();
        let theta = k23_theta();
        let trees = stable_spanning_trees(&q, &theta).unwrap();
        let edges = stable_almost_trees(&q, &theta).unwrap();
        // put x_22 at the tree {11,12,21,32} (complement {22,31}), zero elsewhere
        let idx = trees.iter().position(|t| *t == vec![0, 1, 2, 5]).unwrap();
        let mut entries = vec![Poly::zero(); trees.len()];
        entries[idx] = Poly::var(Var::Arrow(3));
        let tuple = ToricTuple { entries };
        let (ok, violations) = gkm_membership(&trees, &tuple, &edges).unwrap();
        assert!(!ok);
        assert!(!violations.is_empty());
    }

    #[test]
    fn image_basis_ranks_hold() {
        let q = k23();
        let basis = image_basis(&q, &k23_theta(), ThinMode::Stable, 3).unwrap();
        assert!(!basis.is_empty());
        // degree 0 entry is the all-ones tuple
        let (m, tuple) = &basis[0];
        assert!(m.is_one());
        assert!(tuple.entries.iter().all(|p| *p == Poly::one()));
    }
}
