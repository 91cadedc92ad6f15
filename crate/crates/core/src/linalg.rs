//! Exact dense linear algebra over the rationals.
//!
//! Matrices and vectors carry vertex labels on their axes so results can be
//! compared coordinate-by-coordinate with the combinatorial side. Nothing
//! here uses floating point.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexSet};

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("order is not a permutation of the vertex set")]
    NotPermutation,
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("label {0} missing from vector")]
    MissingLabel(Vertex),
    #[error("matrix is not the adjacency matrix of a simple graph")]
    NotAdjacency,
    #[error("matrix is not the adjacency matrix of a bipartite graph")]
    NotBipartite,
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// A vector in `ℝ^V` for a finite label set `V`, stored over its whole
/// domain (zeros included).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RationalVector {
    entries: BTreeMap<Vertex, Rational>,
}

impl RationalVector {
    pub fn zeros<I: IntoIterator<Item = Vertex>>(labels: I) -> Self {
        RationalVector {
            entries: labels.into_iter().map(|v| (v, Rational::zero())).collect(),
        }
    }

    pub fn from_pairs<I: IntoIterator<Item = (Vertex, Rational)>>(pairs: I) -> Self {
        RationalVector {
            entries: pairs.into_iter().collect(),
        }
    }

    /// Labels paired with small integer values.
    pub fn from_ints<I: IntoIterator<Item = (Vertex, i64)>>(pairs: I) -> Self {
        Self::from_pairs(pairs.into_iter().map(|(v, x)| (v, int(x))))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.entries.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vertex, &Rational)> + '_ {
        self.entries.iter().map(|(&v, x)| (v, x))
    }

    pub fn get(&self, v: Vertex) -> Option<&Rational> {
        self.entries.get(&v)
    }

    pub fn set(&mut self, v: Vertex, value: Rational) {
        self.entries.insert(v, value);
    }

    /// Labels with a nonzero entry.
    pub fn support(&self) -> VertexSet {
        self.entries
            .iter()
            .filter(|(_, x)| !x.is_zero())
            .map(|(&v, _)| v)
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(Zero::is_zero)
    }

    /// Values in the order of `labels`; missing labels are an error.
    pub fn values_in(&self, labels: &[Vertex]) -> Result<Vec<Rational>, LinalgError> {
        labels
            .iter()
            .map(|v| {
                self.entries
                    .get(v)
                    .cloned()
                    .ok_or(LinalgError::MissingLabel(*v))
            })
            .collect()
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, (v, x)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}: {x}")?;
        }
        write!(f, ")")
    }
}

/// Nonzero coordinates only, as `{"label": "p/q"}` in ascending label order.
impl Serialize for RationalVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let nonzero: Vec<_> = self.entries.iter().filter(|(_, x)| !x.is_zero()).collect();
        let mut map = serializer.serialize_map(Some(nonzero.len()))?;
        for (v, x) in nonzero {
            map.serialize_entry(&v.to_string(), &x.to_string())?;
        }
        map.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    row_labels: Vec<Vertex>,
    col_labels: Vec<Vertex>,
    entries: Vec<Vec<Rational>>,
}

impl RationalMatrix {
    pub fn new(
        row_labels: Vec<Vertex>,
        col_labels: Vec<Vertex>,
        entries: Vec<Vec<Rational>>,
    ) -> Result<Self, LinalgError> {
        if entries.len() != row_labels.len() {
            return Err(LinalgError::DimensionMismatch {
                expected: row_labels.len(),
                found: entries.len(),
            });
        }
        if let Some(row) = entries.iter().find(|r| r.len() != col_labels.len()) {
            return Err(LinalgError::DimensionMismatch {
                expected: col_labels.len(),
                found: row.len(),
            });
        }
        Ok(RationalMatrix {
            row_labels,
            col_labels,
            entries,
        })
    }

    /// Square matrix with the same labels on both axes.
    pub fn square_from_ints(labels: &[Vertex], rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        let entries = rows
            .iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect();
        Self::new(labels.to_vec(), labels.to_vec(), entries)
    }

    pub fn rows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn cols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn row_labels(&self) -> &[Vertex] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[Vertex] {
        &self.col_labels
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i][j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i]
    }

    /// Column `j` as a vector over the row labels.
    pub fn column(&self, j: usize) -> RationalVector {
        RationalVector::from_pairs(
            self.row_labels
                .iter()
                .zip(&self.entries)
                .map(|(&v, row)| (v, row[j].clone())),
        )
    }

    /// `A·x`, with `x` indexed by the column labels and the result by the
    /// row labels.
    pub fn mul_vec(&self, x: &RationalVector) -> Result<RationalVector, LinalgError> {
        let xs = x.values_in(&self.col_labels)?;
        Ok(RationalVector::from_pairs(
            self.row_labels.iter().zip(&self.entries).map(|(&v, row)| {
                let dot = row
                    .iter()
                    .zip(&xs)
                    .filter(|(a, _)| !a.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b);
                (v, dot)
            }),
        ))
    }

    fn require_square(&self) -> Result<usize, LinalgError> {
        if self.rows() == self.cols() {
            Ok(self.rows())
        } else {
            Err(LinalgError::NotSquare {
                rows: self.rows(),
                cols: self.cols(),
            })
        }
    }

    /// Reads the matrix back as a simple graph when it is symmetric 0/1
    /// with zero diagonal and identical row/column labels.
    pub fn to_graph(&self) -> Result<Graph, LinalgError> {
        let n = self.require_square()?;
        if self.row_labels != self.col_labels {
            return Err(LinalgError::NotAdjacency);
        }
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let x = &self.entries[i][j];
                let ok = if i == j {
                    x.is_zero()
                } else {
                    (x.is_zero() || x.is_one()) && *x == self.entries[j][i]
                };
                if !ok {
                    return Err(LinalgError::NotAdjacency);
                }
                if i < j && x.is_one() {
                    edges.push((self.row_labels[i], self.row_labels[j]));
                }
            }
        }
        Graph::new(self.row_labels.iter().copied(), edges).map_err(|_| LinalgError::NotAdjacency)
    }
}

/// `A(G)` with rows and columns in the given order.
pub fn adjacency_matrix(g: &Graph, order: &[Vertex]) -> Result<RationalMatrix, LinalgError> {
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != order.len() || sorted != g.labels() {
        return Err(LinalgError::NotPermutation);
    }
    let entries = order
        .iter()
        .map(|&u| {
            order
                .iter()
                .map(|&v| {
                    if g.has_edge(u, v) {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    RationalMatrix::new(order.to_vec(), order.to_vec(), entries)
}

/// `A(G)` in ascending label order.
pub fn adjacency(g: &Graph) -> RationalMatrix {
    adjacency_matrix(g, g.labels()).expect("sorted labels are a permutation")
}

/// Row-reduces in place to reduced row echelon form over the first
/// `pivot_cols` columns; returns the pivot columns.
fn rref(m: &mut [Vec<Rational>], pivot_cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r][c..].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                if !p.is_zero() {
                    *x -= p * &factor;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(a: &RationalMatrix) -> usize {
    let mut m = a.entries.clone();
    rref(&mut m, a.cols()).len()
}

/// Exact solution of `A·x = b` for square nonsingular `A`. `b` is indexed
/// by the row labels, the solution by the column labels.
pub fn solve(a: &RationalMatrix, b: &RationalVector) -> Result<RationalVector, LinalgError> {
    let n = a.require_square()?;
    let rhs = b.values_in(&a.row_labels)?;
    let mut m: Vec<Vec<Rational>> = a
        .entries
        .iter()
        .zip(rhs)
        .map(|(row, y)| {
            let mut r = row.clone();
            r.push(y);
            r
        })
        .collect();
    if rref(&mut m, n).len() < n {
        return Err(LinalgError::Singular);
    }
    Ok(RationalVector::from_pairs(
        a.col_labels
            .iter()
            .zip(m)
            .map(|(&v, mut row)| (v, row.pop().unwrap())),
    ))
}

/// Scales to integer entries with gcd 1 and a positive first nonzero entry.
fn make_primitive(values: &mut [Rational]) {
    let Some(first) = values.iter().find(|x| !x.is_zero()).cloned() else {
        return;
    };
    let lcm = values
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = values
        .iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let sign = if first.is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    for (x, n) in values.iter_mut().zip(ints) {
        *x = Rational::from_integer(n / &gcd * &sign);
    }
}

/// Basis of `{x : A·x = 0}`, one vector per free column of the RREF, each
/// scaled to a primitive integer vector with positive leading entry.
pub fn nullspace_basis(a: &RationalMatrix) -> Vec<RationalVector> {
    let n = a.cols();
    let mut m = a.entries.clone();
    let pivots = rref(&mut m, n);
    let mut is_pivot = vec![false; n];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut x = vec![Rational::zero(); n];
            x[f] = Rational::one();
            for (r, &c) in pivots.iter().enumerate() {
                x[c] = -m[r][f].clone();
            }
            make_primitive(&mut x);
            RationalVector::from_pairs(a.col_labels.iter().copied().zip(x))
        })
        .collect()
}

/// The pivot columns of `A`, as vectors over the row labels.
pub fn column_space_basis(a: &RationalMatrix) -> Vec<RationalVector> {
    let mut m = a.entries.clone();
    rref(&mut m, a.cols())
        .into_iter()
        .map(|c| a.column(c))
        .collect()
}

/// Dimension of the span of `vectors`, all over the same label set.
pub fn rank_of_vectors(vectors: &[RationalVector]) -> Result<usize, LinalgError> {
    let Some(first) = vectors.first() else {
        return Ok(0);
    };
    let labels: Vec<Vertex> = first.labels().collect();
    let mut rows = vectors
        .iter()
        .map(|v| {
            if v.len() != labels.len() {
                return Err(LinalgError::DimensionMismatch {
                    expected: labels.len(),
                    found: v.len(),
                });
            }
            v.values_in(&labels)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(rref(&mut rows, labels.len()).len())
}

/// True when the two families span the same subspace.
pub fn same_span(a: &[RationalVector], b: &[RationalVector]) -> Result<bool, LinalgError> {
    let ra = rank_of_vectors(a)?;
    let rb = rank_of_vectors(b)?;
    let joint: Vec<RationalVector> = a.iter().chain(b).cloned().collect();
    Ok(ra == rb && rank_of_vectors(&joint)? == ra)
}

/// `(negative, zero, positive)` eigenvalue counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Inertia {
    pub negative: usize,
    pub zero: usize,
    pub positive: usize,
}

impl Inertia {
    pub fn new(negative: usize, zero: usize, positive: usize) -> Self {
        Inertia {
            negative,
            zero,
            positive,
        }
    }
}

impl Add for Inertia {
    type Output = Inertia;

    fn add(self, rhs: Inertia) -> Inertia {
        Inertia::new(
            self.negative + rhs.negative,
            self.zero + rhs.zero,
            self.positive + rhs.positive,
        )
    }
}

impl Serialize for Inertia {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [self.negative, self.zero, self.positive].serialize(serializer)
    }
}

/// Inertia of a bipartite adjacency matrix from its rank alone: the
/// spectrum is symmetric about zero, so `r` nonzero eigenvalues split
/// evenly between the two signs.
pub fn inertia_algebraic(a: &RationalMatrix) -> Result<Inertia, LinalgError> {
    let g = a.to_graph()?;
    if g.bipartition().is_err() {
        return Err(LinalgError::NotBipartite);
    }
    let r = rank(a);
    Ok(Inertia::new(r / 2, a.rows() - r, r / 2))
}
