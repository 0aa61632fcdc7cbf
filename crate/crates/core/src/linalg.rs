//! Dense exact linear algebra over the rationals.

use crate::rational::Q;
use num_traits::{One, Zero};
use serde::Serialize;

/// Row-major rational matrix.
pub type QMatrix = Vec<Vec<Q>>;

/// Reduced row echelon form. Returns the reduced matrix and its pivot columns.
pub fn rref(mat: &[Vec<Q>], ncols: usize) -> (QMatrix, Vec<usize>) {
    let mut a: QMatrix = mat.to_vec();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row >= a.len() {
            break;
        }
        let Some(p) = (row..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = Q::one() / &a[row][col];
        for x in a[row].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[row].clone();
        for (i, r) in a.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for (x, y) in r.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    a.truncate(row);
    (a, pivots)
}

pub fn rank(mat: &[Vec<Q>], ncols: usize) -> usize {
    rref(mat, ncols).1.len()
}

/// Basis of `{x : A x = 0}` in reduced form: one vector per free column, with
/// that column set to one. Each vector is a fundamental circuit of the column matroid.
pub fn nullspace(mat: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let (r, pivots) = rref(mat, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Q::zero(); ncols];
        v[free] = Q::one();
        for (row, &pc) in r.iter().zip(&pivots) {
            v[pc] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

pub fn transpose(mat: &[Vec<Q>], ncols: usize) -> QMatrix {
    (0..ncols).map(|j| mat.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn mat_vec(mat: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    mat.iter().map(|row| dot(row, v)).collect()
}

/// Linearly independent spanning set of a subspace of `Q^dim`, kept in reduced
/// row echelon form so that equal subspaces have identical bases.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubspaceBasis {
    pub dim: usize,
    #[serde(serialize_with = "serialize_vectors")]
    pub vectors: Vec<Vec<Q>>,
}

fn serialize_vectors<S: serde::Serializer>(v: &[Vec<Q>], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for row in v {
        let strs: Vec<String> = row.iter().map(crate::rational::format_rational).collect();
        seq.serialize_element(&strs)?;
    }
    seq.end()
}

impl SubspaceBasis {
    pub fn span(dim: usize, generators: &[Vec<Q>]) -> Self {
        let (vectors, _) = rref(generators, dim);
        SubspaceBasis { dim, vectors }
    }

    pub fn dimension(&self) -> usize {
        self.vectors.len()
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        let mut rows = self.vectors.clone();
        rows.push(v.to_vec());
        rank(&rows, self.dim) == self.dimension()
    }

    pub fn contains_subspace(&self, other: &SubspaceBasis) -> bool {
        other.vectors.iter().all(|v| self.contains(v))
    }

    pub fn orthogonal_complement(&self) -> SubspaceBasis {
        let basis = nullspace(&self.vectors, self.dim);
        SubspaceBasis::span(self.dim, &basis)
    }

    pub fn is_trivial(&self) -> bool {
        self.vectors.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn m(rows: &[&[i64]]) -> QMatrix {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn rank_and_nullspace() {
        let a = m(&[&[1, -1, 0], &[-1, 1, 0], &[0, 1, -1]]);
        assert_eq!(rank(&a, 3), 2);
        let ns = nullspace(&a, 3);
        assert_eq!(ns, vec![vec![q(1), q(1), q(1)]]);
        for v in &ns {
            assert!(mat_vec(&a, v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn subspace_equality_is_structural() {
        let s1 = SubspaceBasis::span(3, &m(&[&[1, -1, 0], &[0, 1, -1]]));
        let s2 = SubspaceBasis::span(3, &m(&[&[1, 0, -1], &[2, -1, -1], &[0, 2, -2]]));
        assert_eq!(s1, s2);
        assert!(s1.contains(&[q(3), q(-1), q(-2)]));
        assert!(!s1.contains(&[q(1), q(1), q(1)]));
        assert_eq!(s1.orthogonal_complement().vectors, vec![vec![q(1), q(1), q(1)]]);
    }

    #[test]
    fn empty_generators() {
        let s = SubspaceBasis::span(2, &[]);
        assert!(s.is_trivial());
        assert_eq!(s.orthogonal_complement().dimension(), 2);
    }
}
