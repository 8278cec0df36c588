//! The tautological presentation: shuffle products and degree-truncated
//! kernel generators of the restriction maps to the semistable and stable
//! loci.
//!
//! The shuffle product `f * g` is a sum over per-vertex shuffle
//! permutations of `f · g · Delta_1 / Delta_0`. Rational-function
//! arithmetic is avoided: each shuffle's `1/Delta_0` is rewritten as
//! `sign · V_A · V_B / V` against the full per-vertex Vandermonde `V`, the
//! signed numerators are summed, and the result is divided by `V` factor by
//! factor with a hard divisibility assertion.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::linalg;
use crate::poly::{elementary_symmetric, Poly, Symbols, Var};
use crate::quiver::{slope, DimVector, Quiver, Stability};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilityMode {
    /// Kernel of restriction to the semistable locus: slope strictly drops.
    Semistable,
    /// Kernel of restriction to the stable locus: slope weakly drops.
    Stable,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ShuffleError {
    #[error("dimension vectors do not match the quiver")]
    DimensionMismatch,
    #[error("factor `{side}` is not symmetric in its slot blocks")]
    NotSymmetric { side: &'static str },
    #[error("factor `{side}` uses a variable outside its ambient ring")]
    InvalidVariable { side: &'static str },
    #[error("shuffle denominator failed to clear; this is a bug")]
    DivisionFailed,
}

/// A decomposition `d = d' + d''` with the mode's slope inequality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeDecomposition {
    pub d_prime: DimVector,
    pub d_double_prime: DimVector,
    pub mode: StabilityMode,
}

/// All decompositions `d' + d'' = d` with both parts nonzero and
/// `mu(d') > mu(d'')` (semistable) resp. `>=` (stable), `d'` in lex order.
pub fn slope_decompositions(
    d: &DimVector,
    theta: &Stability,
    mode: StabilityMode,
) -> Vec<SlopeDecomposition> {
    let mut out = Vec::new();
    if d.is_zero() {
        return out;
    }
    let n = d.0.len();
    let mut cur = vec![0u32; n];
    loop {
        let d_prime = DimVector(cur.clone());
        if !d_prime.is_zero() && d_prime != *d {
            let d_double_prime = d.sub(&d_prime);
            let mu1 = slope(theta, &d_prime).expect("nonzero");
            let mu2 = slope(theta, &d_double_prime).expect("nonzero");
            let keep = match mode {
                StabilityMode::Semistable => mu1 > mu2,
                StabilityMode::Stable => mu1 >= mu2,
            };
            if keep {
                out.push(SlopeDecomposition {
                    d_prime,
                    d_double_prime,
                    mode,
                });
            }
        }
        // advance odometer over the box [0, d]
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if cur[k] < d.0[k] {
                cur[k] += 1;
                for c in cur.iter_mut().skip(k + 1) {
                    *c = 0;
                }
                break;
            }
        }
    }
}

fn flat(vertex: usize, slot: usize) -> Var {
    Var::Flat { vertex, slot }
}

fn flat_poly(vertex: usize, slot: usize) -> Poly {
    Poly::var(flat(vertex, slot))
}

fn check_factor(
    q: &Quiver,
    dims: &DimVector,
    p: &Poly,
    side: &'static str,
) -> Result<(), ShuffleError> {
    for v in p.vars() {
        match v {
            Var::Arrow(_) => {}
            Var::Flat { vertex, slot } => {
                if vertex >= q.num_vertices() || slot == 0 || slot > dims.0[vertex] as usize {
                    return Err(ShuffleError::InvalidVariable { side });
                }
            }
            Var::Chern { .. } => return Err(ShuffleError::InvalidVariable { side }),
        }
    }
    let blocks: Vec<Vec<Var>> = (0..q.num_vertices())
        .map(|i| (1..=dims.0[i] as usize).map(|r| flat(i, r)).collect())
        .collect();
    if !p.is_symmetric_under_blocks(&blocks) {
        return Err(ShuffleError::NotSymmetric { side });
    }
    Ok(())
}

/// The shuffle product of `f` (symmetric in the `d'` slot blocks) and `g`
/// (symmetric in the `d''` blocks). The output is an exact polynomial,
/// symmetric in the full `d' + d''` blocks.
pub fn shuffle_product(
    q: &Quiver,
    d_prime: &DimVector,
    d_double_prime: &DimVector,
    f: &Poly,
    g: &Poly,
) -> Result<Poly, ShuffleError> {
    let n = q.num_vertices();
    if d_prime.0.len() != n || d_double_prime.0.len() != n {
        return Err(ShuffleError::DimensionMismatch);
    }
    check_factor(q, d_prime, f, "f")?;
    check_factor(q, d_double_prime, g, "g")?;
    let d = d_prime.add(d_double_prime);

    // Per vertex, all splittings of {1..d_i} into an ordered pair
    // (A_i of size d'_i, complement B_i).
    let splittings_per_vertex: Vec<Vec<(Vec<usize>, Vec<usize>)>> = (0..n)
        .map(|i| {
            let total = d.0[i] as usize;
            let take = d_prime.0[i] as usize;
            (1..=total)
                .combinations(take)
                .map(|a| {
                    let b: Vec<usize> = (1..=total).filter(|s| !a.contains(s)).collect();
                    (a, b)
                })
                .collect()
        })
        .collect();

    let mut numerator = Poly::zero();
    for choice in splittings_per_vertex
        .iter()
        .map(|s| s.iter())
        .multi_cartesian_product()
    {
        // choice[i] = (A_i, B_i), both sorted ascending. f's slot r at
        // vertex i goes to position A_i[r], g's to B_i[r].
        let mut f_assign = BTreeMap::new();
        let mut g_assign = BTreeMap::new();
        for (i, (a, b)) in choice.iter().enumerate() {
            for (r, &slot) in a.iter().enumerate() {
                f_assign.insert(flat(i, r + 1), flat_poly(i, slot));
            }
            for (r, &slot) in b.iter().enumerate() {
                g_assign.insert(flat(i, r + 1), flat_poly(i, slot));
            }
        }
        let f_term = f.substitute(&f_assign);
        let g_term = g.substitute(&g_assign);

        let mut term = f_term.mul(&g_term);
        // Delta_1 over arrows: one factor per (a in A_{src}, b in B_{tgt}).
        for (arrow_idx, arrow) in q.arrows().iter().enumerate() {
            let (src_a, _) = choice[arrow.src];
            let (_, tgt_b) = choice[arrow.tgt];
            for &a_slot in src_a {
                for &b_slot in tgt_b {
                    let factor = flat_poly(arrow.tgt, b_slot)
                        .sub(&flat_poly(arrow.src, a_slot))
                        .add(&Poly::var(Var::Arrow(arrow_idx)));
                    term = term.mul(&factor);
                }
            }
        }
        // Vandermonde factors of the two halves, and the shuffle sign.
        let mut sign_exponent = 0usize;
        for (i, (a, b)) in choice.iter().enumerate() {
            for pair in a.iter().combinations(2) {
                term = term.mul(&flat_poly(i, *pair[1]).sub(&flat_poly(i, *pair[0])));
            }
            for pair in b.iter().combinations(2) {
                term = term.mul(&flat_poly(i, *pair[1]).sub(&flat_poly(i, *pair[0])));
            }
            sign_exponent += a
                .iter()
                .map(|&x| b.iter().filter(|&&y| y < x).count())
                .sum::<usize>();
        }
        if sign_exponent % 2 == 1 {
            term = term.neg();
        }
        numerator = numerator.add(&term);
    }

    // Divide by the full Vandermonde, factor by factor.
    let mut result = numerator;
    for i in 0..n {
        let total = d.0[i] as usize;
        for r in 1..=total {
            for s in (r + 1)..=total {
                result = result
                    .div_exact_linear_diff(&flat(i, s), &flat(i, r))
                    .ok_or(ShuffleError::DivisionFailed)?;
            }
        }
    }
    Ok(result)
}

/// A monomial in the symmetric generators `x_{i,r} = e_r(xi_{i,1..d_i})`,
/// recorded as exponents per (vertex, r).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct SymMonomial(pub BTreeMap<(usize, usize), u32>);

impl SymMonomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(&(_, r), &e)| r as u32 * e).sum()
    }

    /// Expansion into Chern-root variables over the given slot blocks.
    pub fn expand(&self, dims: &DimVector) -> Poly {
        let mut out = Poly::one();
        for (&(vertex, r), &e) in &self.0 {
            let vars: Vec<Var> = (1..=dims.0[vertex] as usize)
                .map(|s| flat(vertex, s))
                .collect();
            let e_r = elementary_symmetric(r, &vars).expect("r <= d_v by construction");
            out = out.mul(&e_r.pow(e));
        }
        out
    }

    pub fn label(&self, symbols: &Symbols) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        self.0
            .iter()
            .map(|(&(v, r), &e)| {
                let base = format!("x_{{{},{}}}", symbols.vertices[v], r);
                if e == 1 {
                    base
                } else {
                    format!("{base}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// All symmetric-generator monomials for `dims` of degree at most
/// `max_degree`, in (degree, exponent) order.
pub fn sym_monomials(dims: &DimVector, max_degree: u32) -> Vec<SymMonomial> {
    let gens: Vec<(usize, usize)> = (0..dims.0.len())
        .flat_map(|v| (1..=dims.0[v] as usize).map(move |r| (v, r)))
        .collect();
    let mut out = Vec::new();
    let mut current = SymMonomial::default();
    fn recurse(
        gens: &[(usize, usize)],
        budget: u32,
        current: &mut SymMonomial,
        out: &mut Vec<SymMonomial>,
    ) {
        match gens.split_first() {
            None => out.push(current.clone()),
            Some((&(v, r), rest)) => {
                let mut e = 0u32;
                loop {
                    if e > 0 {
                        current.0.insert((v, r), e);
                    }
                    recurse(rest, budget - e * r as u32, current, out);
                    current.0.remove(&(v, r));
                    e += 1;
                    if e * r as u32 > budget {
                        break;
                    }
                }
            }
        }
    }
    recurse(&gens, max_degree, &mut current, &mut out);
    out.sort_by_key(|m| (m.degree(), m.0.clone().into_iter().collect::<Vec<_>>()));
    out
}

/// One emitted kernel generator: the shuffle product of a pair of
/// symmetric-generator monomials across a slope decomposition.
#[derive(Debug, Clone)]
pub struct KernelGenerator {
    pub decomposition: SlopeDecomposition,
    pub f_monomial: SymMonomial,
    pub g_monomial: SymMonomial,
    pub product: Poly,
    pub is_zero: bool,
}

/// Degree-truncated kernel generators. Together with their multiples by
/// arrow-variable monomials, the nonzero products span the kernel of the
/// mode's restriction map in every degree up to the bound.
#[derive(Debug, Clone)]
pub struct KernelGeneratorSet {
    pub degree_bound: u32,
    pub generators: Vec<KernelGenerator>,
}

impl KernelGeneratorSet {
    pub fn nonzero_products(&self) -> impl Iterator<Item = &Poly> {
        self.generators
            .iter()
            .filter(|g| !g.is_zero)
            .map(|g| &g.product)
    }
}

/// Enumerates `f * g` over all slope decompositions and all pairs of
/// symmetric-generator monomials whose product degree
/// `deg f + deg g + deg Delta_1 - deg Delta_0` is at most `n`.
pub fn kernel_generators(
    q: &Quiver,
    d: &DimVector,
    theta: &Stability,
    mode: StabilityMode,
    n: u32,
) -> Result<KernelGeneratorSet, ShuffleError> {
    let mut generators = Vec::new();
    for dec in slope_decompositions(d, theta, mode) {
        let dp = &dec.d_prime;
        let dpp = &dec.d_double_prime;
        let deg_delta1: i64 = q
            .arrows()
            .iter()
            .map(|a| dp.0[a.src] as i64 * dpp.0[a.tgt] as i64)
            .sum();
        let deg_delta0: i64 = (0..q.num_vertices())
            .map(|v| dp.0[v] as i64 * dpp.0[v] as i64)
            .sum();
        let budget = n as i64 - (deg_delta1 - deg_delta0);
        if budget < 0 {
            continue;
        }
        for f_mono in sym_monomials(dp, budget as u32) {
            let g_budget = budget as u32 - f_mono.degree();
            let f_poly = f_mono.expand(dp);
            for g_mono in sym_monomials(dpp, g_budget) {
                let g_poly = g_mono.expand(dpp);
                let product = shuffle_product(q, dp, dpp, &f_poly, &g_poly)?;
                let is_zero = product.is_zero();
                generators.push(KernelGenerator {
                    decomposition: dec.clone(),
                    f_monomial: f_mono.clone(),
                    g_monomial: g_mono,
                    product,
                    is_zero,
                });
            }
        }
    }
    Ok(KernelGeneratorSet {
        degree_bound: n,
        generators,
    })
}

/// All arrow-variable monomials of the given total degree.
pub fn arrow_monomials(n_arrows: usize, degree: u32) -> Vec<Poly> {
    fn recurse(arrow: usize, n_arrows: usize, left: u32, acc: &Poly, out: &mut Vec<Poly>) {
        if arrow == n_arrows {
            if left == 0 {
                out.push(acc.clone());
            }
            return;
        }
        if arrow + 1 == n_arrows {
            let p = acc.mul(&Poly::var(Var::Arrow(arrow)).pow(left));
            out.push(p);
            return;
        }
        for e in 0..=left {
            let p = acc.mul(&Poly::var(Var::Arrow(arrow)).pow(e));
            recurse(arrow + 1, n_arrows, left - e, &p, out);
        }
    }
    let mut out = Vec::new();
    if n_arrows == 0 {
        if degree == 0 {
            out.push(Poly::one());
        }
        return out;
    }
    recurse(0, n_arrows, degree, &Poly::one(), &mut out);
    out
}

/// The degree-`deg` slice of the kernel span: all `x^gamma * (f*g)` with
/// matching total degree.
pub fn kernel_span_slice(q: &Quiver, set: &KernelGeneratorSet, deg: u32) -> Vec<Poly> {
    let mut out = Vec::new();
    for p in set.nonzero_products() {
        let pd = p.degree().expect("nonzero");
        if pd > deg {
            continue;
        }
        for xm in arrow_monomials(q.num_arrows(), deg - pd) {
            out.push(p.mul(&xm));
        }
    }
    out
}

/// Graded dimensions of the ambient ring
/// `(tensor_i Q[xi_{i,1..d_i}]^{S_{d_i}}) (x) Q[x_a]` up to degree `n`,
/// from the product of the generating functions `1/(1-t^r)` and `1/(1-t)`.
pub fn ambient_dims(q: &Quiver, d: &DimVector, n: u32) -> Vec<u64> {
    let n = n as usize;
    let mut series = vec![0u64; n + 1];
    series[0] = 1;
    let mul_inv_one_minus_tk = |series: &mut Vec<u64>, k: usize| {
        // multiply by 1/(1-t^k): prefix sums with stride k
        for i in k..=n {
            series[i] += series[i - k];
        }
    };
    for v in 0..q.num_vertices() {
        for r in 1..=d.0[v] as usize {
            mul_inv_one_minus_tk(&mut series, r);
        }
    }
    for _ in 0..q.num_arrows() {
        mul_inv_one_minus_tk(&mut series, 1);
    }
    series
}

/// Graded dimensions of the quotient of the ambient ring by the kernel
/// span, degrees `0..=n`.
pub fn quotient_dims(
    q: &Quiver,
    d: &DimVector,
    theta: &Stability,
    mode: StabilityMode,
    n: u32,
) -> Result<Vec<u64>, ShuffleError> {
    let set = kernel_generators(q, d, theta, mode, n)?;
    let ambient = ambient_dims(q, d, n);
    let mut out = Vec::with_capacity(n as usize + 1);
    for deg in 0..=n {
        let slice = kernel_span_slice(q, &set, deg);
        let rank = linalg::span_dim(&slice) as u64;
        out.push(ambient[deg as usize] - rank);
    }
    Ok(out)
}

/// For thin dimension vectors: graded dimensions of the quotient of the
/// difference subring (generated by `xi_v - xi_{v_0}` and the arrow
/// variables) by its intersection with the kernel span. For a thin moduli
/// space this is the graded dimension sequence of the equivariant Chow ring
/// of the moduli space itself.
pub fn pg_quotient_dims_thin(
    q: &Quiver,
    theta: &Stability,
    mode: StabilityMode,
    n: u32,
) -> Result<Vec<u64>, ShuffleError> {
    let m = q.num_vertices();
    let d = DimVector::ones(m);
    let set = kernel_generators(q, &d, theta, mode, n)?;
    // Generators of the difference subring, expanded in the ambient ring.
    let etas: Vec<Poly> = (1..m)
        .map(|v| flat_poly(v, 1).sub(&flat_poly(0, 1)))
        .collect();
    let n_sub_vars = etas.len() + q.num_arrows();
    let mut out = Vec::with_capacity(n as usize + 1);
    for deg in 0..=n {
        let k_slice = kernel_span_slice(q, &set, deg);
        let r_basis = subring_monomials(&etas, q.num_arrows(), deg);
        let r_count = r_basis.len() as u64;
        debug_assert_eq!(r_count, count_monomials(n_sub_vars, deg));
        let meet = linalg::span_intersection_dim(&k_slice, &r_basis) as u64;
        out.push(r_count - meet);
    }
    Ok(out)
}

fn count_monomials(n_vars: usize, deg: u32) -> u64 {
    // C(deg + n_vars - 1, n_vars - 1)
    if n_vars == 0 {
        return if deg == 0 { 1 } else { 0 };
    }
    let mut acc: u64 = 1;
    for k in 0..(n_vars - 1) as u64 {
        acc = acc * (deg as u64 + k + 1) / (k + 1);
    }
    acc
}

fn subring_monomials(etas: &[Poly], n_arrows: usize, deg: u32) -> Vec<Poly> {
    // Exponent vectors over (etas..., arrows...) of total degree `deg`,
    // expanded into ambient coordinates.
    let n_vars = etas.len() + n_arrows;
    let mut out = Vec::new();
    let mut exps = vec![0u32; n_vars];
    fn recurse(
        pos: usize,
        left: u32,
        exps: &mut Vec<u32>,
        etas: &[Poly],
        n_vars: usize,
        out: &mut Vec<Poly>,
    ) {
        if pos == n_vars {
            if left == 0 {
                let mut p = Poly::one();
                for (k, &e) in exps.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    let base = if k < etas.len() {
                        etas[k].clone()
                    } else {
                        Poly::var(Var::Arrow(k - etas.len()))
                    };
                    p = p.mul(&base.pow(e));
                }
                out.push(p);
            }
            return;
        }
        for e in 0..=left {
            exps[pos] = e;
            recurse(pos + 1, left - e, exps, etas, n_vars, out);
            exps[pos] = 0;
        }
    }
    if n_vars == 0 {
        if deg == 0 {
            out.push(Poly::one());
        }
        return out;
    }
    recurse(0, deg, &mut exps, etas, n_vars, &mut out);
    out
}

/// Checks symmetry of a polynomial in the full slot blocks of `d`.
pub fn symmetric_in_full_blocks(q: &Quiver, d: &DimVector, p: &Poly) -> bool {
    let blocks: Vec<Vec<Var>> = (0..q.num_vertices())
        .map(|i| (1..=d.0[i] as usize).map(|r| flat(i, r)).collect())
        .collect();
    p.is_symmetric_under_blocks(&blocks)
}

/// Convenience: `1` as a polynomial, for unit shuffle factors.
pub fn unit() -> Poly {
    Poly::constant(BigRational::one())
}
