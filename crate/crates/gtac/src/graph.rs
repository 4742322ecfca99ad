//! Line graphs over audio samples and their Laplacian operators.
//!
//! A frame of `n` samples becomes a graph with one vertex per sample.
//! Two structures are supported:
//!
//! * structure I — edges to the first neighbor (weight 1.0) and the second
//!   neighbor (weight `w_second`, typically 0.1 for speech or 0.3 for music);
//! * structure II — a plain path graph, first-neighbor edges only.
//!
//! From the adjacency matrix `W` we derive the degree matrix `D` (row sums on
//! the diagonal) and the Laplacian `K = D − W`, a symmetric positive
//! semidefinite operator whose eigenvectors form the transform basis.

use thiserror::Error;

use crate::mat::SquareMatrix;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("frame length {n} is too small (minimum {min})")]
    InvalidSize { n: usize, min: usize },
    #[error("second-neighbor weight {0} outside (0, 1]")]
    InvalidWeight(f64),
    #[error("weights not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("nonzero diagonal entry at {0}")]
    NonzeroDiagonal(usize),
    #[error("negative weight at ({0}, {1})")]
    NegativeWeight(usize, usize),
}

/// Symmetric, nonnegative edge weights with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyMatrix {
    weights: SquareMatrix,
}

impl AdjacencyMatrix {
    /// Validate an arbitrary weight matrix: exactly symmetric, zero diagonal,
    /// nonnegative entries.
    pub fn from_weights(weights: SquareMatrix) -> Result<Self, GraphError> {
        let n = weights.n();
        for i in 0..n {
            if weights.get(i, i) != 0.0 {
                return Err(GraphError::NonzeroDiagonal(i));
            }
            for j in (i + 1)..n {
                let w = weights.get(i, j);
                if w != weights.get(j, i) {
                    return Err(GraphError::NotSymmetric(i, j));
                }
                if w < 0.0 {
                    return Err(GraphError::NegativeWeight(i, j));
                }
            }
        }
        Ok(Self { weights })
    }

    pub fn n(&self) -> usize {
        self.weights.n()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.weights.get(i, j)
    }

    pub fn weights(&self) -> &SquareMatrix {
        &self.weights
    }
}

/// Diagonal of row sums of an adjacency matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeMatrix {
    diagonal: Vec<f64>,
}

impl DegreeMatrix {
    pub fn n(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }
}

/// The Laplacian `K = D − W`: symmetric, rows sum to zero, positive
/// semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianMatrix {
    entries: SquareMatrix,
}

impl LaplacianMatrix {
    pub fn n(&self) -> usize {
        self.entries.n()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries.get(i, j)
    }

    pub fn entries(&self) -> &SquareMatrix {
        &self.entries
    }
}

/// Structure I: first neighbors at weight 1.0, second neighbors at `w_second`.
pub fn build_adjacency_gt1(n: usize, w_second: f64) -> Result<AdjacencyMatrix, GraphError> {
    if n < 3 {
        return Err(GraphError::InvalidSize { n, min: 3 });
    }
    if !(w_second > 0.0 && w_second <= 1.0) {
        return Err(GraphError::InvalidWeight(w_second));
    }
    let mut w = SquareMatrix::zeros(n);
    for i in 0..n {
        if i + 1 < n {
            w.set(i, i + 1, 1.0);
            w.set(i + 1, i, 1.0);
        }
        if i + 2 < n {
            w.set(i, i + 2, w_second);
            w.set(i + 2, i, w_second);
        }
    }
    Ok(AdjacencyMatrix { weights: w })
}

/// Structure II: the path graph, first-neighbor edges at weight 1.0.
pub fn build_adjacency_gt2(n: usize) -> Result<AdjacencyMatrix, GraphError> {
    if n < 2 {
        return Err(GraphError::InvalidSize { n, min: 2 });
    }
    let mut w = SquareMatrix::zeros(n);
    for i in 0..n - 1 {
        w.set(i, i + 1, 1.0);
        w.set(i + 1, i, 1.0);
    }
    Ok(AdjacencyMatrix { weights: w })
}

/// Row sums of `W`, accumulated left to right so the result is
/// bit-reproducible.
pub fn degree_of(w: &AdjacencyMatrix) -> DegreeMatrix {
    let n = w.n();
    let diagonal = (0..n)
        .map(|i| w.weights.row(i).iter().fold(0.0, |acc, v| acc + v))
        .collect();
    DegreeMatrix { diagonal }
}

/// `K = D − W`.
pub fn laplacian_of(w: &AdjacencyMatrix) -> LaplacianMatrix {
    let d = degree_of(w);
    let n = w.n();
    let entries = SquareMatrix::from_fn(n, |i, j| {
        if i == j {
            d.diagonal[i]
        } else {
            -w.get(i, j)
        }
    });
    LaplacianMatrix { entries }
}
