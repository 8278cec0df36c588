//! Quivers, dimension vectors, stability conditions and the Euler form.
//!
//! Vertex and arrow declaration order is canonical and immutable: every
//! lexicographic order used elsewhere (variable indexing, covering-vertex
//! keys, subset enumeration) derives from it.

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuiverError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate arrow id `{0}`")]
    DuplicateArrow(String),
    #[error("arrow `{arrow}` references undeclared vertex `{vertex}`")]
    DanglingEndpoint { arrow: String, vertex: String },
    #[error("zero dimension vector")]
    ZeroDimensionVector,
    #[error("dimension vector has {got} entries, quiver has {want} vertices")]
    DimensionMismatch { got: usize, want: usize },
}

/// An arrow of a quiver, with endpoints stored as vertex indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub id: String,
    pub src: usize,
    pub tgt: usize,
}

/// A finite directed multigraph. Multi-arrows, opposite arrows and loops are
/// representable; operations that need acyclic or loop-free input check the
/// cached flags and reject explicitly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    connected: bool,
    acyclic: bool,
}

impl Quiver {
    /// Validates and canonicalizes a raw quiver description. Connectedness
    /// and acyclicity are computed once and cached.
    pub fn new(
        vertices: Vec<String>,
        arrows: Vec<(String, String, String)>,
    ) -> Result<Self, QuiverError> {
        let mut seen = std::collections::BTreeSet::new();
        for v in &vertices {
            if !seen.insert(v.clone()) {
                return Err(QuiverError::DuplicateVertex(v.clone()));
            }
        }
        let index = |name: &str| vertices.iter().position(|v| v == name);
        let mut built = Vec::with_capacity(arrows.len());
        let mut seen_arrows = std::collections::BTreeSet::new();
        for (id, src, tgt) in arrows {
            if !seen_arrows.insert(id.clone()) {
                return Err(QuiverError::DuplicateArrow(id));
            }
            let s = index(&src).ok_or_else(|| QuiverError::DanglingEndpoint {
                arrow: id.clone(),
                vertex: src.clone(),
            })?;
            let t = index(&tgt).ok_or_else(|| QuiverError::DanglingEndpoint {
                arrow: id.clone(),
                vertex: tgt.clone(),
            })?;
            built.push(Arrow { id, src: s, tgt: t });
        }
        let connected = connected_on(
            vertices.len(),
            built.iter().map(|a| (a.src, a.tgt)),
            &(0..vertices.len()).collect::<Vec<_>>(),
        );
        let acyclic = acyclic_on(vertices.len(), &built);
        Ok(Quiver {
            vertices,
            arrows: built,
            connected,
            acyclic,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, idx: usize) -> &Arrow {
        &self.arrows[idx]
    }

    pub fn vertex_name(&self, idx: usize) -> &str {
        &self.vertices[idx]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrow_index(&self, id: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.id == id)
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    pub fn is_acyclic(&self) -> bool {
        self.acyclic
    }

    pub fn has_loop(&self) -> bool {
        self.arrows.iter().any(|a| a.src == a.tgt)
    }

    /// True iff the underlying unoriented graph restricted to the given
    /// arrow and vertex subsets is connected.
    pub fn is_connected_support(&self, arrow_subset: &[usize], vertex_subset: &[usize]) -> bool {
        let edges = arrow_subset
            .iter()
            .map(|&a| (self.arrows[a].src, self.arrows[a].tgt));
        connected_on(self.vertices.len(), edges, vertex_subset)
    }

    /// The Euler form `<d,e> = sum_i d_i e_i - sum_{a: i->j} d_i e_j`.
    pub fn euler_form(&self, d: &DimVector, e: &DimVector) -> i64 {
        let mut acc: i64 = 0;
        for i in 0..self.vertices.len() {
            acc += d.0[i] as i64 * e.0[i] as i64;
        }
        for a in &self.arrows {
            acc -= d.0[a.src] as i64 * e.0[a.tgt] as i64;
        }
        acc
    }
}

fn connected_on(
    n: usize,
    edges: impl Iterator<Item = (usize, usize)>,
    vertex_subset: &[usize],
) -> bool {
    if vertex_subset.is_empty() {
        return true;
    }
    let in_subset = {
        let mut m = vec![false; n];
        for &v in vertex_subset {
            m[v] = true;
        }
        m
    };
    let mut adj = vec![Vec::new(); n];
    for (s, t) in edges {
        if in_subset[s] && in_subset[t] {
            adj[s].push(t);
            adj[t].push(s);
        }
    }
    let mut seen = vec![false; n];
    let mut stack = vec![vertex_subset[0]];
    seen[vertex_subset[0]] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    vertex_subset.iter().all(|&v| seen[v])
}

fn acyclic_on(n: usize, arrows: &[Arrow]) -> bool {
    // Kahn's algorithm; leftover vertices mean a directed cycle.
    let mut indeg = vec![0usize; n];
    for a in arrows {
        indeg[a.tgt] += 1;
    }
    let mut queue: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut removed = 0;
    while let Some(v) = queue.pop() {
        removed += 1;
        for a in arrows {
            if a.src == v {
                indeg[a.tgt] -= 1;
                if indeg[a.tgt] == 0 {
                    queue.push(a.tgt);
                }
            }
        }
    }
    removed == n
}

/// A dimension vector, indexed by the quiver's canonical vertex order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DimVector(pub Vec<u32>);

impl DimVector {
    pub fn zero(n: usize) -> Self {
        DimVector(vec![0; n])
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&x| x as u64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn le(&self, other: &DimVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &DimVector) -> DimVector {
        DimVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference; caller guarantees `other <= self`.
    pub fn sub(&self, other: &DimVector) -> DimVector {
        DimVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn ones(n: usize) -> Self {
        DimVector(vec![1; n])
    }

    pub fn is_thin(&self) -> bool {
        self.0.iter().all(|&x| x <= 1)
    }
}

/// A stability condition, indexed by the quiver's canonical vertex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stability(pub Vec<i64>);

impl Stability {
    pub fn pairing(&self, d: &DimVector) -> i64 {
        self.0.iter().zip(&d.0).map(|(t, &x)| t * x as i64).sum()
    }

    /// `theta(1_S)` for a vertex subset.
    pub fn subset_sum(&self, subset: &[usize]) -> i64 {
        subset.iter().map(|&v| self.0[v]).sum()
    }
}

/// The slope `mu(d) = theta(d) / sum_i d_i`, exact.
pub fn slope(theta: &Stability, d: &DimVector) -> Result<BigRational, QuiverError> {
    if d.is_zero() {
        return Err(QuiverError::ZeroDimensionVector);
    }
    Ok(BigRational::new(
        BigInt::from(theta.pairing(d)),
        BigInt::from(d.total()),
    ))
}
