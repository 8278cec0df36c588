//! The localization map at torus-fixed components: canonical character
//! assignments, the pull-back on symmetric generators, and the image
//! generators indexed by pairs of vertices.
//!
//! The pull-back sends the r-th symmetric generator at a vertex to the
//! r-th elementary symmetric function of the shifted fiber roots
//! `xi_{i,chi,s} - chi`, and fixes the arrow classes. On an isolated
//! component every fiber root restricts to zero and the values become
//! polynomials in the arrow classes alone.

use std::collections::BTreeMap;

use itertools::Itertools;
use thiserror::Error;

use crate::covering::{fixed_components, CoveringDimVector, CoveringError, FixedComponent};
use crate::poly::{Character, Poly, Var};
use crate::quiver::{DimVector, Quiver, Stability};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LocalizationError {
    #[error("covering vector does not cover the dimension vector")]
    CoversMismatch,
    #[error("generator index out of bounds: i={i}, j={j}, k={k}, l={l}")]
    IndexBounds {
        i: usize,
        j: usize,
        k: usize,
        l: usize,
    },
    #[error("polynomial is not symmetric in the slot blocks")]
    NotSymmetric,
    #[error("polynomial uses a variable outside the ambient ring")]
    InvalidVariable,
    #[error(transparent)]
    Covering(#[from] CoveringError),
}

/// For each vertex, the `d_i` fiber characters with slot indices, listed
/// with characters in canonical order and slots increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterAssignment {
    pub per_vertex: Vec<Vec<(Character, usize)>>,
}

impl CharacterAssignment {
    /// The canonical assignment of a covering vector of `d`.
    pub fn canonical(beta: &CoveringDimVector, d: &DimVector) -> Result<Self, LocalizationError> {
        if !beta.covers(d) {
            return Err(LocalizationError::CoversMismatch);
        }
        let mut per_vertex: Vec<Vec<(Character, usize)>> = vec![Vec::new(); d.0.len()];
        for (cv, &mult) in &beta.entries {
            for s in 1..=mult as usize {
                per_vertex[cv.vertex].push((cv.chi.clone(), s));
            }
        }
        Ok(CharacterAssignment { per_vertex })
    }

    pub fn character(&self, vertex: usize, r: usize) -> &Character {
        &self.per_vertex[vertex][r - 1].0
    }

    pub fn slot(&self, vertex: usize, r: usize) -> usize {
        self.per_vertex[vertex][r - 1].1
    }
}

fn check_ambient(q: &Quiver, d: &DimVector, p: &Poly) -> Result<(), LocalizationError> {
    for v in p.vars() {
        match v {
            Var::Arrow(_) => {}
            Var::Flat { vertex, slot } => {
                if vertex >= q.num_vertices() || slot == 0 || slot > d.0[vertex] as usize {
                    return Err(LocalizationError::InvalidVariable);
                }
            }
            Var::Chern { .. } => return Err(LocalizationError::InvalidVariable),
        }
    }
    let blocks: Vec<Vec<Var>> = (0..q.num_vertices())
        .map(|i| {
            (1..=d.0[i] as usize)
                .map(|slot| Var::Flat { vertex: i, slot })
                .collect()
        })
        .collect();
    if !p.is_symmetric_under_blocks(&blocks) {
        return Err(LocalizationError::NotSymmetric);
    }
    Ok(())
}

fn flat_substitution(
    d: &DimVector,
    assignment: &CharacterAssignment,
    isolated: bool,
) -> BTreeMap<Var, Poly> {
    let mut sub = BTreeMap::new();
    for vertex in 0..d.0.len() {
        for r in 1..=d.0[vertex] as usize {
            let chi = assignment.character(vertex, r);
            let image = if isolated {
                chi.as_poly().neg()
            } else {
                Poly::var(Var::Chern {
                    vertex,
                    chi: chi.clone(),
                    slot: assignment.slot(vertex, r),
                })
                .sub(&chi.as_poly())
            };
            sub.insert(Var::Flat { vertex, slot: r }, image);
        }
    }
    sub
}

/// The pull-back to a fixed component: each flat root becomes the matching
/// fiber root shifted by its character, arrow classes are fixed. Requires
/// `p` symmetric in the full slot blocks.
pub fn i_beta_star(
    q: &Quiver,
    d: &DimVector,
    beta: &CoveringDimVector,
    p: &Poly,
) -> Result<Poly, LocalizationError> {
    check_ambient(q, d, p)?;
    let assignment = CharacterAssignment::canonical(beta, d)?;
    Ok(p.substitute(&flat_substitution(d, &assignment, false)))
}

/// The pull-back followed by the restriction that kills every fiber root;
/// this is the value on an isolated component.
pub fn i_beta_star_isolated(
    q: &Quiver,
    d: &DimVector,
    beta: &CoveringDimVector,
    p: &Poly,
) -> Result<Poly, LocalizationError> {
    check_ambient(q, d, p)?;
    let assignment = CharacterAssignment::canonical(beta, d)?;
    Ok(p.substitute(&flat_substitution(d, &assignment, true)))
}

/// The image generator `f_beta(z_{k,l}^{i,j})` for a given assignment: the
/// sum over all `k`-subsets of the `i`-slots and `l`-subsets of the
/// `j`-slots of the product of the differences of shifted roots.
pub fn f_beta_with_assignment(
    d: &DimVector,
    assignment: &CharacterAssignment,
    i: usize,
    j: usize,
    k: usize,
    l: usize,
    isolated: bool,
) -> Result<Poly, LocalizationError> {
    let bounds_ok = i != j
        && i < d.0.len()
        && j < d.0.len()
        && k >= 1
        && l >= 1
        && k <= d.0[i] as usize
        && l <= d.0[j] as usize;
    if !bounds_ok {
        return Err(LocalizationError::IndexBounds { i, j, k, l });
    }
    let root = |vertex: usize, r: usize| -> Poly {
        let chi = assignment.character(vertex, r);
        if isolated {
            chi.as_poly().neg()
        } else {
            Poly::var(Var::Chern {
                vertex,
                chi: chi.clone(),
                slot: assignment.slot(vertex, r),
            })
            .sub(&chi.as_poly())
        }
    };
    let mut sum = Poly::zero();
    for rs in (1..=d.0[i] as usize).combinations(k) {
        for ts in (1..=d.0[j] as usize).combinations(l) {
            let mut prod = Poly::one();
            for &r in &rs {
                for &t in &ts {
                    prod = prod.mul(&root(i, r).sub(&root(j, t)));
                }
            }
            sum = sum.add(&prod);
        }
    }
    Ok(sum)
}

/// `f_beta(z_{k,l}^{i,j})` with the canonical character assignment.
pub fn f_beta(
    beta: &CoveringDimVector,
    d: &DimVector,
    i: usize,
    j: usize,
    k: usize,
    l: usize,
    isolated: bool,
) -> Result<Poly, LocalizationError> {
    let assignment = CharacterAssignment::canonical(beta, d)?;
    f_beta_with_assignment(d, &assignment, i, j, k, l, isolated)
}

/// A label for a generator of the localization image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorLabel {
    /// The constant tuple of an arrow class.
    ArrowClass(usize),
    /// `z_{k,l}^{i,j}` for an ordered pair of distinct vertices.
    Z {
        i: usize,
        j: usize,
        k: usize,
        l: usize,
    },
}

/// One generator of the image: its label and one polynomial per fixed
/// component, in component order.
#[derive(Debug, Clone)]
pub struct ImageGenerator {
    pub label: GeneratorLabel,
    pub tuple: Vec<Poly>,
}

/// The canonical generator labels for an instance: arrow classes in arrow
/// order, then `z_{k,l}^{i,j}` over ordered vertex pairs.
pub fn generator_labels(q: &Quiver, d: &DimVector) -> Vec<GeneratorLabel> {
    let mut labels = Vec::new();
    for arrow in 0..q.num_arrows() {
        labels.push(GeneratorLabel::ArrowClass(arrow));
    }
    for i in 0..q.num_vertices() {
        for j in 0..q.num_vertices() {
            if i == j || d.0[i] == 0 || d.0[j] == 0 {
                continue;
            }
            for k in 1..=d.0[i] as usize {
                for l in 1..=d.0[j] as usize {
                    labels.push(GeneratorLabel::Z { i, j, k, l });
                }
            }
        }
    }
    labels
}

/// The tuple of a single generator over the given components.
pub fn generator_tuple(
    d: &DimVector,
    components: &[FixedComponent],
    label: &GeneratorLabel,
) -> Result<Vec<Poly>, LocalizationError> {
    match label {
        GeneratorLabel::ArrowClass(arrow) => {
            Ok(vec![Poly::var(Var::Arrow(*arrow)); components.len()])
        }
        GeneratorLabel::Z { i, j, k, l } => components
            .iter()
            .map(|c| f_beta(&c.beta, d, *i, *j, *k, *l, c.isolated))
            .collect(),
    }
}

/// The generators of the localization image over the fixed components:
/// constant arrow-class tuples, then the `f_beta(z_{k,l}^{i,j})` tuples
/// for every ordered pair `i != j`. Entries on non-isolated components
/// keep their formal fiber-root variables.
pub fn localization_image_generators(
    q: &Quiver,
    d: &DimVector,
    theta: &Stability,
) -> Result<(Vec<FixedComponent>, Vec<ImageGenerator>), LocalizationError> {
    let components = fixed_components(q, d, theta)?;
    let generators = generator_labels(q, d)
        .into_iter()
        .map(|label| {
            let tuple = generator_tuple(d, &components, &label)?;
            #[cfg(debug_assertions)]
            if let GeneratorLabel::Z { i, j, k, l } = label {
                if q.num_arrows() > 0 {
                    let shift = Character::unit(0, q.num_arrows());
                    for c in &components {
                        debug_assert!(
                            translation_invariance_check(&c.beta, d, &shift, i, j, k, l)?,
                            "generator values must not depend on the translate"
                        );
                    }
                }
            }
            Ok(ImageGenerator { label, tuple })
        })
        .collect::<Result<Vec<_>, LocalizationError>>()?;
    Ok((components, generators))
}

/// Renames every fiber-root character by the given shift.
fn shift_chern_characters(p: &Poly, shift: &Character) -> Poly {
    let mut sub = BTreeMap::new();
    for v in p.vars() {
        if let Var::Chern { vertex, chi, slot } = &v {
            sub.insert(
                v.clone(),
                Poly::var(Var::Chern {
                    vertex: *vertex,
                    chi: chi.add(shift),
                    slot: *slot,
                }),
            );
        }
    }
    p.substitute(&sub)
}

/// Verifies that `f_beta` is unchanged by passing to a translate: values
/// on the translated vector, with fiber-root characters renamed back by
/// the shift, must agree with the original values.
pub fn translation_invariance_check(
    beta: &CoveringDimVector,
    d: &DimVector,
    shift: &Character,
    i: usize,
    j: usize,
    k: usize,
    l: usize,
) -> Result<bool, LocalizationError> {
    let original = f_beta(beta, d, i, j, k, l, false)?;
    let translated = f_beta(&beta.translate(shift), d, i, j, k, l, false)?;
    Ok(shift_chern_characters(&translated, shift) == original)
}
