//! The universal abelian covering quiver: covering dimension vectors up to
//! translation, local covering windows, stability of the generic
//! representation, and the classification of torus-fixed components.
//!
//! The covering quiver has vertex set `Q_0 x Z^{Q_1}`; the arrow `(a, chi)`
//! runs from `(s(a), chi)` to `(t(a), chi + x_a)`. Only finite local
//! windows are ever materialized.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::poly::Character;
use crate::quiver::{slope, DimVector, Quiver, Stability};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoveringError {
    #[error("covering vector is empty")]
    Empty,
    #[error("covering vector does not cover the dimension vector")]
    CoversMismatch,
    #[error("quiver has loops")]
    HasLoops,
    #[error("zero dimension vector")]
    ZeroDimension,
}

/// A vertex `(base, chi)` of the covering quiver.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoveringVertex {
    pub vertex: usize,
    pub chi: Character,
}

/// A finitely supported dimension vector on the covering quiver; stored
/// multiplicities are positive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CoveringDimVector {
    pub entries: BTreeMap<CoveringVertex, u32>,
}

impl CoveringDimVector {
    pub fn new(entries: BTreeMap<CoveringVertex, u32>) -> Self {
        let entries = entries.into_iter().filter(|&(_, m)| m > 0).collect();
        CoveringDimVector { entries }
    }

    pub fn support(&self) -> impl Iterator<Item = &CoveringVertex> {
        self.entries.keys()
    }

    /// Does the fiber sum over every base vertex reproduce `d`?
    pub fn covers(&self, d: &DimVector) -> bool {
        let mut sums = vec![0u32; d.0.len()];
        for (cv, &m) in &self.entries {
            if cv.vertex >= d.0.len() {
                return false;
            }
            sums[cv.vertex] += m;
        }
        sums == d.0
    }

    /// The translate by `xi`: entry at `(i, chi)` becomes the old entry at
    /// `(i, chi + xi)`, so every support character drops by `xi`.
    pub fn translate(&self, xi: &Character) -> CoveringDimVector {
        CoveringDimVector {
            entries: self
                .entries
                .iter()
                .map(|(cv, &m)| {
                    (
                        CoveringVertex {
                            vertex: cv.vertex,
                            chi: cv.chi.sub(xi),
                        },
                        m,
                    )
                })
                .collect(),
        }
    }

    /// The canonical representative of the translation class: among the
    /// translates that place some support character of the first populated
    /// fiber at zero, the one with the lexicographically smallest entry
    /// list. Idempotent, and constant on translation classes.
    pub fn canonical_translate(&self) -> Result<CoveringDimVector, CoveringError> {
        let root_vertex = self
            .entries
            .keys()
            .map(|cv| cv.vertex)
            .min()
            .ok_or(CoveringError::Empty)?;
        let candidates: Vec<&Character> = self
            .entries
            .keys()
            .filter(|cv| cv.vertex == root_vertex)
            .map(|cv| &cv.chi)
            .collect();
        candidates
            .into_iter()
            .map(|chi| self.translate(chi))
            .min()
            .ok_or(CoveringError::Empty)
    }
}

/// Neighbors of a covering vertex along lifted arrows, in canonical arrow
/// order (outgoing first, then incoming).
fn covering_neighbors(q: &Quiver, cv: &CoveringVertex) -> Vec<CoveringVertex> {
    let n_arrows = q.num_arrows();
    let mut out = Vec::new();
    for (idx, arrow) in q.arrows().iter().enumerate() {
        if arrow.src == cv.vertex {
            out.push(CoveringVertex {
                vertex: arrow.tgt,
                chi: cv.chi.add(&Character::unit(idx, n_arrows)),
            });
        }
    }
    for (idx, arrow) in q.arrows().iter().enumerate() {
        if arrow.tgt == cv.vertex {
            out.push(CoveringVertex {
                vertex: arrow.src,
                chi: cv.chi.sub(&Character::unit(idx, n_arrows)),
            });
        }
    }
    out
}

/// The finite full subquiver of the covering quiver on the given support:
/// one arrow `(a, chi)` whenever both endpoints lie in the support. The
/// vertex order is the sorted support order.
pub fn local_covering_quiver(q: &Quiver, support: &BTreeSet<CoveringVertex>) -> Quiver {
    let name_of = |cv: &CoveringVertex| {
        format!(
            "{}@{}",
            q.vertex_name(cv.vertex),
            cv.chi
                .0
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    };
    let vertices: Vec<String> = support.iter().map(&name_of).collect();
    let mut arrows = Vec::new();
    for cv in support {
        for (idx, arrow) in q.arrows().iter().enumerate() {
            if arrow.src != cv.vertex {
                continue;
            }
            let head = CoveringVertex {
                vertex: arrow.tgt,
                chi: cv.chi.add(&Character::unit(idx, q.num_arrows())),
            };
            if support.contains(&head) {
                arrows.push((
                    format!("{}@{}", q.arrow(idx).id, name_of(cv)),
                    name_of(cv),
                    name_of(&head),
                ));
            }
        }
    }
    Quiver::new(vertices, arrows).expect("synthesized covering window is well formed")
}

/// All covering dimension vectors of `d` with connected support, one
/// canonical representative per translation class, in canonical order.
///
/// Supports are grown as connected subsets of the covering quiver from the
/// root `(i_0, 0)`, where `i_0` is the first vertex with `d_{i_0} > 0`;
/// fiber sizes are bounded by the entries of `d` and the total size by
/// `sum d_i`, which exhausts all classes because every support point
/// carries multiplicity at least one.
pub fn enumerate_covering_vectors(
    q: &Quiver,
    d: &DimVector,
) -> Result<Vec<CoveringDimVector>, CoveringError> {
    if d.is_zero() {
        return Err(CoveringError::ZeroDimension);
    }
    let root_vertex = d.0.iter().position(|&x| x > 0).expect("nonzero");
    let root = CoveringVertex {
        vertex: root_vertex,
        chi: Character::zero(q.num_arrows()),
    };
    let cap = d.total() as usize;

    let mut supports: Vec<Vec<CoveringVertex>> = Vec::new();
    let mut fiber_counts = vec![0u32; d.0.len()];
    fiber_counts[root_vertex] = 1;
    let mut current = vec![root.clone()];
    let init_ext: Vec<CoveringVertex> = {
        let mut e: Vec<CoveringVertex> = Vec::new();
        for nb in covering_neighbors(q, &root) {
            if nb != root && !e.contains(&nb) {
                e.push(nb);
            }
        }
        e
    };
    grow_supports(
        q,
        d,
        cap,
        &mut current,
        &mut fiber_counts,
        init_ext,
        &BTreeSet::new(),
        &mut supports,
    );

    let mut seen = BTreeSet::new();
    for support in supports {
        // every populated base fiber must meet the support
        let mut counts = vec![0u32; d.0.len()];
        for cv in &support {
            counts[cv.vertex] += 1;
        }
        if counts
            .iter()
            .zip(&d.0)
            .any(|(&c, &dv)| (dv > 0 && c == 0) || c > dv)
        {
            continue;
        }
        // all splittings of each d_v into counts[v] positive parts
        let per_vertex_orders: Vec<Vec<&CoveringVertex>> = (0..d.0.len())
            .map(|v| support.iter().filter(|cv| cv.vertex == v).collect())
            .collect();
        let composition_sets: Vec<Vec<Vec<u32>>> = (0..d.0.len())
            .map(|v| compositions(d.0[v], counts[v]))
            .collect();
        let mut stack = vec![(0usize, BTreeMap::new())];
        while let Some((v, acc)) = stack.pop() {
            if v == d.0.len() {
                let beta = CoveringDimVector::new(acc);
                debug_assert!(beta.covers(d));
                seen.insert(beta.canonical_translate()?);
                continue;
            }
            for comp in &composition_sets[v] {
                let mut next = acc.clone();
                for (cv, &m) in per_vertex_orders[v].iter().zip(comp.iter()) {
                    next.insert((*cv).clone(), m);
                }
                stack.push((v + 1, next));
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Connected-subset enumeration: each subset containing the root is
/// reached exactly once; branches that can no longer satisfy the fiber
/// bounds are pruned, which is safe because violations are monotone under
/// growth.
#[allow(clippy::too_many_arguments)]
fn grow_supports(
    q: &Quiver,
    d: &DimVector,
    cap: usize,
    current: &mut Vec<CoveringVertex>,
    fiber_counts: &mut Vec<u32>,
    extension: Vec<CoveringVertex>,
    forbidden: &BTreeSet<CoveringVertex>,
    out: &mut Vec<Vec<CoveringVertex>>,
) {
    out.push(current.clone());
    if current.len() == cap {
        return;
    }
    let mut forbidden = forbidden.clone();
    let mut ext = extension;
    while let Some(v) = ext.pop() {
        if fiber_counts[v.vertex] < d.0[v.vertex] {
            let mut new_ext = ext.clone();
            for nb in covering_neighbors(q, &v) {
                if current.contains(&nb)
                    || forbidden.contains(&nb)
                    || ext.contains(&nb)
                    || new_ext.contains(&nb)
                    || nb == v
                {
                    continue;
                }
                new_ext.push(nb);
            }
            current.push(v.clone());
            fiber_counts[v.vertex] += 1;
            grow_supports(q, d, cap, current, fiber_counts, new_ext, &forbidden, out);
            fiber_counts[v.vertex] -= 1;
            current.pop();
        }
        forbidden.insert(v);
    }
}

/// Compositions of `total` into exactly `parts` positive integers.
fn compositions(total: u32, parts: u32) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    if parts == 1 {
        return if total >= 1 {
            vec![vec![total]]
        } else {
            vec![]
        };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(parts - 1) {
        for rest in compositions(total - first, parts - 1) {
            let mut c = vec![first];
            c.extend(rest);
            out.push(c);
        }
    }
    out
}

/// The set of generic subdimension vectors of `beta` on a finite loop-free
/// quiver: all `e <= beta` such that every representation of dimension
/// `beta` admits a subrepresentation of dimension `e`. Computed by the
/// recursion `e` generic iff `<e', beta - e> >= 0` for every generic
/// subdimension vector `e'` of `e`, memoized bottom-up.
pub fn generic_subdimension_vectors(
    qf: &Quiver,
    beta: &DimVector,
) -> Result<BTreeSet<DimVector>, CoveringError> {
    if qf.has_loop() {
        return Err(CoveringError::HasLoops);
    }
    let mut all: Vec<DimVector> = box_below(beta);
    all.sort_by_key(|e| e.total());
    let mut memo: BTreeMap<DimVector, BTreeSet<DimVector>> = BTreeMap::new();
    for e in all {
        let mut gsubs = BTreeSet::new();
        for e_sub in box_below(&e) {
            if e_sub == e {
                gsubs.insert(e_sub);
                continue;
            }
            let inner = &memo[&e_sub];
            let rest = e.sub(&e_sub);
            if inner.iter().all(|e2| qf.euler_form(e2, &rest) >= 0) {
                gsubs.insert(e_sub);
            }
        }
        memo.insert(e, gsubs);
    }
    Ok(memo.remove(beta).expect("beta enumerated last"))
}

fn box_below(beta: &DimVector) -> Vec<DimVector> {
    let n = beta.0.len();
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    loop {
        out.push(DimVector(cur.clone()));
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if cur[k] < beta.0[k] {
                cur[k] += 1;
                for c in cur.iter_mut().skip(k + 1) {
                    *c = 0;
                }
                break;
            }
        }
    }
}

/// Is there a stable representation of dimension `beta` on the finite
/// quiver? Nonempty iff every proper nonzero generic subdimension vector
/// has slope strictly below `mu(beta)`.
pub fn stable_locus_nonempty(
    qf: &Quiver,
    beta: &DimVector,
    theta_hat: &Stability,
) -> Result<bool, CoveringError> {
    if beta.is_zero() {
        return Err(CoveringError::ZeroDimension);
    }
    let mu_beta = slope(theta_hat, beta).expect("nonzero");
    let gsubs = generic_subdimension_vectors(qf, beta)?;
    for e in &gsubs {
        if e.is_zero() || e == beta {
            continue;
        }
        if slope(theta_hat, e).expect("nonzero") >= mu_beta {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A torus-fixed component: a covering vector with nonempty stable locus,
/// its dimension `1 - <beta, beta>`, and whether it is a single point.
#[derive(Debug, Clone)]
pub struct FixedComponent {
    pub beta: CoveringDimVector,
    pub dimension: u32,
    pub isolated: bool,
}

/// The window quiver of a covering vector together with `beta` read as a
/// dimension vector in window order and the lifted stability condition.
pub fn window_of(
    q: &Quiver,
    theta: &Stability,
    beta: &CoveringDimVector,
) -> (Quiver, DimVector, Stability) {
    let support: BTreeSet<CoveringVertex> = beta.support().cloned().collect();
    let window = local_covering_quiver(q, &support);
    let dims = DimVector(beta.entries.values().copied().collect());
    let theta_hat = Stability(beta.support().map(|cv| theta.0[cv.vertex]).collect());
    (window, dims, theta_hat)
}

/// All torus-fixed components for `(Q, d, theta)`, in canonical order.
pub fn fixed_components(
    q: &Quiver,
    d: &DimVector,
    theta: &Stability,
) -> Result<Vec<FixedComponent>, CoveringError> {
    let mut out = Vec::new();
    for beta in enumerate_covering_vectors(q, d)? {
        let (window, dims, theta_hat) = window_of(q, theta, &beta);
        if !stable_locus_nonempty(&window, &dims, &theta_hat)? {
            continue;
        }
        let dim = 1 - window.euler_form(&dims, &dims);
        assert!(dim >= 0, "nonempty stable moduli has nonnegative dimension");
        out.push(FixedComponent {
            beta,
            dimension: dim as u32,
            isolated: dim == 0,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

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

    fn cv(vertex: usize, chi: Character) -> CoveringVertex {
        CoveringVertex { vertex, chi }
    }

    #[test]
    fn single_point_goes_to_origin() {
        let beta =
            CoveringDimVector::new([(cv(0, Character::unit(0, 3)), 1)].into_iter().collect());
        let canon = beta.canonical_translate().unwrap();
        let expect = CoveringDimVector::new([(cv(0, Character::zero(3)), 1)].into_iter().collect());
        assert_eq!(canon, expect);
    }

    #[test]
    fn canonical_translate_is_idempotent_and_class_constant() {
        // a 5-point zigzag support for the 3-Kronecker quiver
        let q = kron(3);
        let n = q.num_arrows();
        let e = |k: usize| Character::unit(k, n);
        let zig = |w: [usize; 4]| {
            let c1 = e(w[0]).neg();
            let c2 = c1.add(&e(w[1]));
            let c3 = c2.sub(&e(w[2]));
            let c4 = c3.add(&e(w[3]));
            CoveringDimVector::new(
                [
                    (cv(1, Character::zero(n)), 1),
                    (cv(0, c1), 1),
                    (cv(1, c2), 1),
                    (cv(0, c3), 1),
                    (cv(1, c4), 1),
                ]
                .into_iter()
                .collect(),
            )
        };
        let beta = zig([0, 1, 0, 1]);
        let canon = beta.canonical_translate().unwrap();
        assert_eq!(canon.canonical_translate().unwrap(), canon);
        for shift in [e(0), e(1), e(2), e(0).add(&e(1)), e(2).neg()] {
            assert_eq!(beta.translate(&shift).canonical_translate().unwrap(), canon);
        }
    }

    #[test]
    fn local_covering_quiver_star() {
        let q = kron(3);
        let n = q.num_arrows();
        let support: BTreeSet<CoveringVertex> = [
            cv(0, Character::zero(n)),
            cv(1, Character::unit(0, n)),
            cv(1, Character::unit(1, n)),
            cv(1, Character::unit(2, n)),
        ]
        .into_iter()
        .collect();
        let window = local_covering_quiver(&q, &support);
        assert_eq!(window.num_vertices(), 4);
        assert_eq!(window.num_arrows(), 3);
        assert!(window.is_connected());
        assert!(window.is_acyclic());

        let empty = local_covering_quiver(&q, &BTreeSet::new());
        assert_eq!(empty.num_vertices(), 0);
        assert_eq!(empty.num_arrows(), 0);
    }

    #[test]
    fn local_covering_quiver_partial_support() {
        // only arrows with both endpoints present are lifted
        let q = kron(3);
        let n = q.num_arrows();
        let support: BTreeSet<CoveringVertex> = [
            cv(0, Character::zero(n)),
            cv(1, Character::unit(0, n)),
            cv(0, Character::unit(0, n).sub(&Character::unit(1, n))),
        ]
        .into_iter()
        .collect();
        let window = local_covering_quiver(&q, &support);
        assert_eq!(window.num_vertices(), 3);
        // (i,0) -a-> (j,a) and (i,a-b) -b-> (j,a)
        assert_eq!(window.num_arrows(), 2);
    }

    #[test]
    fn projective_space_covering_vectors() {
        for n in 1..=4usize {
            let q = kron(n + 1);
            let d = DimVector(vec![1, 1]);
            let vectors = enumerate_covering_vectors(&q, &d).unwrap();
            assert_eq!(vectors.len(), n + 1);
            for (nu, beta) in vectors.iter().enumerate() {
                let expect = CoveringDimVector::new(
                    [
                        (cv(0, Character::zero(n + 1)), 1),
                        (cv(1, Character::unit(nu, n + 1)), 1),
                    ]
                    .into_iter()
                    .collect(),
                );
                assert_eq!(*beta, expect);
            }
        }
    }

    #[test]
    fn single_vertex_covering_vector() {
        let q = Quiver::new(vec!["i".into()], vec![]).unwrap();
        let vectors = enumerate_covering_vectors(&q, &DimVector(vec![1])).unwrap();
        assert_eq!(vectors.len(), 1);
        assert_eq!(
            vectors[0],
            CoveringDimVector::new([(cv(0, Character::zero(0)), 1)].into_iter().collect())
        );
    }

    #[test]
    fn generic_subdimension_single_vertex() {
        let q = Quiver::new(vec!["i".into()], vec![]).unwrap();
        let gsubs = generic_subdimension_vectors(&q, &DimVector(vec![3])).unwrap();
        let expect: BTreeSet<DimVector> = (0..=3).map(|k| DimVector(vec![k])).collect();
        assert_eq!(gsubs, expect);
    }

    #[test]
    fn generic_subdimension_one_arrow() {
        let q = Quiver::new(
            vec!["i".into(), "j".into()],
            vec![("a".into(), "i".into(), "j".into())],
        )
        .unwrap();
        let gsubs = generic_subdimension_vectors(&q, &DimVector(vec![1, 1])).unwrap();
        let expect: BTreeSet<DimVector> = [
            DimVector(vec![0, 0]),
            DimVector(vec![0, 1]),
            DimVector(vec![1, 1]),
        ]
        .into_iter()
        .collect();
        assert_eq!(gsubs, expect);
    }

    #[test]
    fn generic_subdimension_star() {
        // center -> three sinks, beta = (2,1,1,1): a generic representation
        // has no subrepresentation concentrated on the center plus a single
        // sink with a 1-dimensional center part (the kernels of two generic
        // functionals on k^2 already intersect trivially).
        let q = Quiver::new(
            vec!["z".into(), "s1".into(), "s2".into(), "s3".into()],
            vec![
                ("a".into(), "z".into(), "s1".into()),
                ("b".into(), "z".into(), "s2".into()),
                ("c".into(), "z".into(), "s3".into()),
            ],
        )
        .unwrap();
        let gsubs = generic_subdimension_vectors(&q, &DimVector(vec![2, 1, 1, 1])).unwrap();
        assert!(!gsubs.contains(&DimVector(vec![1, 0, 0, 1])));
        assert!(!gsubs.contains(&DimVector(vec![1, 0, 0, 0])));
        assert!(gsubs.contains(&DimVector(vec![0, 1, 0, 1])));
        assert!(gsubs.contains(&DimVector(vec![2, 1, 1, 1])));
        assert!(gsubs.contains(&DimVector(vec![0, 0, 0, 0])));
    }

    #[test]
    fn stable_locus_examples() {
        // covering star of the 3-Kronecker flagship instance
        let q = Quiver::new(
            vec!["z".into(), "s1".into(), "s2".into(), "s3".into()],
            vec![
                ("a".into(), "z".into(), "s1".into()),
                ("b".into(), "z".into(), "s2".into()),
                ("c".into(), "z".into(), "s3".into()),
            ],
        )
        .unwrap();
        let beta = DimVector(vec![2, 1, 1, 1]);
        let theta_hat = Stability(vec![3, -2, -2, -2]);
        assert!(stable_locus_nonempty(&q, &beta, &theta_hat).unwrap());

        let q1 = Quiver::new(
            vec!["i".into(), "j".into()],
            vec![("a".into(), "i".into(), "j".into())],
        )
        .unwrap();
        assert!(
            !stable_locus_nonempty(&q1, &DimVector(vec![1, 1]), &Stability(vec![-1, 1])).unwrap()
        );

        // a single point is stable
        let point = Quiver::new(vec!["i".into()], vec![]).unwrap();
        assert!(stable_locus_nonempty(&point, &DimVector(vec![1]), &Stability(vec![5])).unwrap());
    }

    #[test]
    fn projective_space_fixed_components() {
        for n in 1..=3usize {
            let q = kron(n + 1);
            let comps =
                fixed_components(&q, &DimVector(vec![1, 1]), &Stability(vec![1, -1])).unwrap();
            assert_eq!(comps.len(), n + 1);
            assert!(comps.iter().all(|c| c.isolated && c.dimension == 0));
        }
    }

    #[test]
    fn flagship_has_thirteen_fixed_points() {
        let q = kron(3);
        let comps = fixed_components(&q, &DimVector(vec![2, 3]), &Stability(vec![3, -2])).unwrap();
        assert_eq!(comps.len(), 13);
        assert!(comps.iter().all(|c| c.isolated));
    }

    #[test]
    fn every_enumerated_vector_covers() {
        let q = kron(3);
        let d = DimVector(vec![2, 3]);
        for beta in enumerate_covering_vectors(&q, &d).unwrap() {
            assert!(beta.covers(&d));
        }
    }

    #[test]
    fn four_subspace_star_has_a_one_dimensional_component() {
        // four sources mapping into a two-dimensional sink: the moduli
        // space of four points on a projective line; the scaling torus
        // fixes line configurations, so the unique component is the whole
        // one-dimensional space
        let q = Quiver::new(
            vec![
                "s1".into(),
                "s2".into(),
                "s3".into(),
                "s4".into(),
                "z".into(),
            ],
            (1..=4)
                .map(|k| (format!("a{k}"), format!("s{k}"), "z".to_string()))
                .collect(),
        )
        .unwrap();
        let d = DimVector(vec![1, 1, 1, 1, 2]);
        let theta = Stability(vec![1, 1, 1, 1, -2]);
        let comps = fixed_components(&q, &d, &theta).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].dimension, 1);
        assert!(!comps[0].isolated);
    }
}
