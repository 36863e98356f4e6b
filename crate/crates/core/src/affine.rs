//! Affine maps `x ↦ Mx + t` and affine manifolds (flats).

use num::Zero;

use crate::error::{ensure_dim, Error, Result};
use crate::linalg::{kernel, rank, solve};
use crate::rat::{add, dot, identity, mat_vec, transpose, zeros, RMat, RVec, Rat};

/// `T(x) = matrix · x + offset`, mapping ℝⁿ → ℝᵐ.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    pub matrix: RMat,
    pub offset: RVec,
    pub domain_dim: usize,
}

impl AffineMap {
    pub fn new(matrix: RMat, offset: RVec, domain_dim: usize) -> Result<Self> {
        ensure_dim("affine map offset length", offset.len(), matrix.len())?;
        for row in &matrix {
            ensure_dim("affine map row length", row.len(), domain_dim)?;
        }
        Ok(AffineMap {
            matrix,
            offset,
            domain_dim,
        })
    }

    pub fn identity(n: usize) -> Self {
        AffineMap {
            matrix: identity(n),
            offset: zeros(n),
            domain_dim: n,
        }
    }

    pub fn linear(matrix: RMat, domain_dim: usize) -> Result<Self> {
        let m = matrix.len();
        Self::new(matrix, zeros(m), domain_dim)
    }

    pub fn codomain_dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply(&self, x: &[Rat]) -> RVec {
        add(&mat_vec(&self.matrix, x), &self.offset)
    }

    pub fn apply_linear(&self, x: &[Rat]) -> RVec {
        mat_vec(&self.matrix, x)
    }

    /// Basis of `ker(M)`.
    pub fn kernel(&self) -> RMat {
        kernel(&self.matrix, self.domain_dim)
    }

    /// Basis of the range of `M` (column space), as vectors in ℝᵐ.
    pub fn range_basis(&self) -> RMat {
        let cols = transpose(&self.matrix, self.domain_dim);
        crate::linalg::span_basis(&cols, self.codomain_dim())
    }
}

/// An affine manifold kept in both forms: `{x : eqs·x = rhs}` and `point + span(directions)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineManifold {
    pub dim: usize,
    pub eqs: RMat,
    pub rhs: RVec,
    pub point: RVec,
    pub directions: RMat,
}

impl AffineManifold {
    pub fn from_point(point: RVec, directions: RMat) -> Result<Self> {
        let n = point.len();
        for d in &directions {
            ensure_dim("manifold direction length", d.len(), n)?;
        }
        if rank(&directions, n) != directions.len() {
            return Err(Error::RankDeficient(
                "manifold directions must be linearly independent".into(),
            ));
        }
        let eqs = kernel(&directions, n);
        let rhs = mat_vec(&eqs, &point);
        Ok(AffineManifold {
            dim: n,
            eqs,
            rhs,
            point,
            directions,
        })
    }

    pub fn from_equations(dim: usize, eqs: RMat, rhs: RVec) -> Result<Self> {
        ensure_dim("manifold right-hand side length", rhs.len(), eqs.len())?;
        for e in &eqs {
            ensure_dim("manifold equation length", e.len(), dim)?;
        }
        let point = solve(&eqs, &rhs, dim)
            .ok_or_else(|| Error::Malformed("inconsistent manifold equations".into()))?;
        let directions = kernel(&eqs, dim);
        Ok(AffineManifold {
            dim,
            eqs,
            rhs,
            point,
            directions,
        })
    }

    /// Linear subspace spanned by `basis`.
    pub fn subspace(dim: usize, basis: RMat) -> Result<Self> {
        Self::from_point(zeros(dim), crate::linalg::span_basis(&basis, dim))
    }

    pub fn flat_dim(&self) -> usize {
        self.directions.len()
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.eqs
            .iter()
            .zip(&self.rhs)
            .all(|(e, r)| dot(e, x) == *r)
    }

    /// `point + directions · u`.
    pub fn at(&self, u: &[Rat]) -> RVec {
        let mut x = self.point.clone();
        for (d, ui) in self.directions.iter().zip(u) {
            if !ui.is_zero() {
                x = crate::rat::axpy(&x, ui, d);
            }
        }
        x
    }

    /// The parameterization `u ↦ point + B u` as an affine map.
    pub fn parameterization(&self) -> AffineMap {
        let k = self.directions.len();
        let matrix = transpose(&self.directions, self.dim);
        AffineMap {
            matrix,
            offset: self.point.clone(),
            domain_dim: k,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rmat, rvec};

    #[test]
    fn manifold_forms_agree() {
        let m = AffineManifold::from_point(rvec(&[0, 1]), rmat(&[&[1, 0]])).unwrap();
        assert_eq!(m.eqs.len(), 1);
        assert!(m.contains(&rvec(&[5, 1])));
        assert!(!m.contains(&rvec(&[5, 2])));
        let e = AffineManifold::from_equations(2, rmat(&[&[0, 1]]), rvec(&[1])).unwrap();
        assert!(e.contains(&m.point));
        assert_eq!(e.flat_dim(), 1);
    }

    #[test]
    fn map_range_and_kernel() {
        let t = AffineMap::linear(rmat(&[&[1, 1]]), 2).unwrap();
        assert_eq!(t.kernel(), vec![rvec(&[-1, 1])]);
        assert_eq!(t.range_basis().len(), 1);
        assert!(AffineManifold::from_point(rvec(&[0, 0]), rmat(&[&[1, 1], &[2, 2]])).is_err());
    }
}
