//! Quadratic functions `q(x) = ½ xᵀA x + bᵀx + c` with exact rational data.

use num::{One, Zero};

use crate::affine::{AffineManifold, AffineMap};
use crate::error::{ensure_dim, Error, Result};
use crate::linalg::{is_psd, kernel, rank};
use crate::rat::{add, dot, mat_t_vec, mat_vec, rat, transpose, zeros, RMat, RVec, Rat};

#[derive(Debug, Clone, PartialEq)]
pub struct Quadratic {
    a: RMat,
    b: RVec,
    c: Rat,
}

impl Quadratic {
    /// Builds a quadratic, replacing `A` by its symmetric part `(A + Aᵀ)/2`.
    pub fn new(a: RMat, b: RVec, c: Rat) -> Result<Self> {
        let n = b.len();
        ensure_dim("quadratic matrix rows", a.len(), n)?;
        for row in &a {
            ensure_dim("quadratic matrix columns", row.len(), n)?;
        }
        if n == 0 {
            return Err(Error::Malformed("quadratic needs at least one variable".into()));
        }
        let half = Rat::new(1.into(), 2.into());
        let sym = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            a[i][i].clone()
                        } else {
                            (&a[i][j] + &a[j][i]) * &half
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(Quadratic { a: sym, b, c })
    }

    pub fn zero(n: usize) -> Self {
        Quadratic {
            a: vec![zeros(n); n],
            b: zeros(n),
            c: Rat::zero(),
        }
    }

    pub fn linear(b: RVec, c: Rat) -> Self {
        let n = b.len();
        Quadratic {
            a: vec![zeros(n); n],
            b,
            c,
        }
    }

    /// Builds from monomials: each `(i, j, k)` contributes `k·xᵢxⱼ` (so `(i, i, k)` is `k·xᵢ²`).
    pub fn from_terms(n: usize, terms: &[(usize, usize, Rat)], linear: RVec, c: Rat) -> Self {
        let mut a = vec![zeros(n); n];
        for (i, j, k) in terms {
            if i == j {
                a[*i][*i] += k * rat(2);
            } else {
                a[*i][*j] += k.clone();
                a[*j][*i] += k.clone();
            }
        }
        Quadratic { a, b: linear, c }
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    /// The symmetric Hessian `A`.
    pub fn hessian(&self) -> &[RVec] {
        &self.a
    }

    pub fn linear_term(&self) -> &[Rat] {
        &self.b
    }

    pub fn constant(&self) -> &Rat {
        &self.c
    }

    pub fn eval(&self, x: &[Rat]) -> Result<Rat> {
        ensure_dim("evaluation point", x.len(), self.dim())?;
        Ok(self.value(x))
    }

    /// Unchecked evaluation; callers guarantee the dimension.
    pub fn value(&self, x: &[Rat]) -> Rat {
        let ax = mat_vec(&self.a, x);
        dot(x, &ax) / rat(2) + dot(&self.b, x) + &self.c
    }

    pub fn value_f64(&self, x: &[f64]) -> f64 {
        let n = self.dim();
        let mut s = crate::rat::to_f64(&self.c);
        for i in 0..n {
            let mut row = 0.0;
            for j in 0..n {
                row += crate::rat::to_f64(&self.a[i][j]) * x[j];
            }
            s += 0.5 * x[i] * row + crate::rat::to_f64(&self.b[i]) * x[i];
        }
        s
    }

    /// `A x + b`
    pub fn gradient(&self, x: &[Rat]) -> RVec {
        add(&mat_vec(&self.a, x), &self.b)
    }

    /// Whether `A ⪰ 0`, decided by exact pivoted LDLᵀ.
    pub fn is_convex(&self) -> bool {
        is_psd(&self.a)
    }

    /// Basis of `{d : A d = 0, bᵀd = 0}`: directions along which `q` is constant.
    pub fn invariant_directions(&self) -> RMat {
        let mut m = self.a.clone();
        m.push(self.b.clone());
        kernel(&m, self.dim())
    }

    /// The pullback `q ∘ T`.
    pub fn compose_affine(&self, t: &AffineMap) -> Result<Quadratic> {
        ensure_dim("affine map codomain", t.codomain_dim(), self.dim())?;
        let n = t.domain_dim;
        let m_cols = transpose(&t.matrix, n); // columns of M
        let am: Vec<RVec> = m_cols.iter().map(|c| mat_vec(&self.a, c)).collect();
        let a: RMat = (0..n)
            .map(|i| (0..n).map(|j| dot(&m_cols[i], &am[j])).collect())
            .collect();
        let g = self.gradient(&t.offset);
        let b = mat_t_vec(&t.matrix, &g, n);
        let c = self.value(&t.offset);
        Ok(Quadratic { a, b, c })
    }

    /// Restriction to `x₀ + B u`, in the parameter `u`.
    pub fn restrict_to_affine(&self, m: &AffineManifold) -> Result<Quadratic> {
        ensure_dim("manifold ambient dimension", m.dim, self.dim())?;
        if rank(&m.directions, m.dim) != m.directions.len() {
            return Err(Error::RankDeficient("manifold parameterization".into()));
        }
        if m.directions.is_empty() {
            return Err(Error::RankDeficient(
                "a point manifold has no parameters".into(),
            ));
        }
        self.compose_affine(&m.parameterization())
    }

    /// `q(x) + s·r(x)`.
    pub fn add_scaled(&self, s: &Rat, other: &Quadratic) -> Quadratic {
        let a = self
            .a
            .iter()
            .zip(&other.a)
            .map(|(r1, r2)| r1.iter().zip(r2).map(|(x, y)| x + s * y).collect())
            .collect();
        let b = self.b.iter().zip(&other.b).map(|(x, y)| x + s * y).collect();
        Quadratic {
            a,
            b,
            c: &self.c + s * &other.c,
        }
    }

    pub fn is_identically(&self, other: &Quadratic) -> bool {
        self == other
    }

    /// `½ xᵀA x` only.
    pub fn form(&self, x: &[Rat]) -> Rat {
        dot(x, &mat_vec(&self.a, x)) / rat(2)
    }

    pub fn one_var_square(n: usize, i: usize) -> Quadratic {
        Quadratic::from_terms(n, &[(i, i, Rat::one())], zeros(n), Rat::zero())
    }
}
