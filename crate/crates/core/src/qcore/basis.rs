use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qcore::{CONSTRUCTION_TOL, ONE, ZERO};

/// An orthonormal family of vectors with an outcome label and an eigenvalue per vector.
///
/// A basis with fewer vectors than its dimension is *partial*; Born
/// probabilities over a partial basis report the remainder as an `outside`
/// outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    dim: usize,
    vectors: Vec<Vec<C64>>,
    labels: Vec<String>,
    eigenvalues: Vec<f64>,
}

/// One labeled outcome of a basis measurement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub label: String,
    pub value: f64,
}

impl Basis {
    /// Eigenvalues default to `(−1)^l` for the `l`-th vector.
    pub fn new(vectors: Vec<Vec<C64>>, labels: Vec<String>) -> Result<Self> {
        let eig = (0..vectors.len()).map(sign_of_index).collect();
        Self::with_eigenvalues(vectors, labels, eig)
    }

    pub fn with_eigenvalues(
        vectors: Vec<Vec<C64>>,
        labels: Vec<String>,
        eigenvalues: Vec<f64>,
    ) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::EmptySelection);
        }
        if labels.len() != vectors.len() || eigenvalues.len() != vectors.len() {
            return Err(Error::LabelCount { vectors: vectors.len(), labels: labels.len() });
        }
        let dim = vectors[0].len();
        if let Some(v) = vectors.iter().find(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, actual: v.len() });
        }
        if vectors.len() > dim {
            return Err(Error::NotOrthonormal(1.0));
        }
        let dev = gram_deviation(&vectors);
        if dev > CONSTRUCTION_TOL {
            return Err(Error::NotOrthonormal(dev));
        }
        Ok(Self { dim, vectors, labels, eigenvalues })
    }

    /// The computational basis, labels `"0", "1", …`.
    pub fn computational(dim: usize) -> Self {
        let vectors = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { ONE } else { ZERO }).collect())
            .collect();
        Self {
            dim,
            vectors,
            labels: (0..dim).map(|i| i.to_string()).collect(),
            eigenvalues: (0..dim).map(sign_of_index).collect(),
        }
    }

    /// Replaces labels, keeping vectors and eigenvalues.
    pub fn relabeled<S: Into<String>>(mut self, labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != self.vectors.len() {
            return Err(Error::LabelCount { vectors: self.vectors.len(), labels: labels.len() });
        }
        self.labels = labels;
        Ok(self)
    }

    /// Product basis; labels join with `,` and eigenvalues multiply.
    pub fn tensor(&self, other: &Basis) -> Basis {
        let mut vectors = Vec::with_capacity(self.len() * other.len());
        let mut labels = Vec::with_capacity(vectors.capacity());
        let mut eigenvalues = Vec::with_capacity(vectors.capacity());
        for (i, a) in self.vectors.iter().enumerate() {
            for (j, b) in other.vectors.iter().enumerate() {
                vectors.push(a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect());
                labels.push(format!("{},{}", self.labels[i], other.labels[j]));
                eigenvalues.push(self.eigenvalues[i] * other.eigenvalues[j]);
            }
        }
        Basis { dim: self.dim * other.dim, vectors, labels, eigenvalues }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn is_partial(&self) -> bool {
        self.vectors.len() < self.dim
    }

    pub fn vectors(&self) -> &[Vec<C64>] {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> &[C64] {
        &self.vectors[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn outcome(&self, i: usize) -> Outcome {
        Outcome { label: self.labels[i].clone(), value: self.eigenvalues[i] }
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// `⟨bᵢ|v⟩`
    pub fn overlap(&self, i: usize, v: &[C64]) -> C64 {
        self.vectors[i].iter().zip(v).map(|(b, x)| b.conj() * x).sum()
    }
}

fn sign_of_index(l: usize) -> f64 {
    if l.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// max |⟨vᵢ|vⱼ⟩ − δᵢⱼ|
pub fn gram_deviation(vectors: &[Vec<C64>]) -> f64 {
    let mut worst = 0.0f64;
    for (i, a) in vectors.iter().enumerate() {
        for (j, b) in vectors.iter().enumerate().skip(i) {
            let mut s: C64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
            if i == j {
                s -= ONE;
            }
            worst = worst.max(s.norm());
        }
    }
    worst
}
