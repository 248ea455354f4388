//! Structure-constant algebras.
//!
//! A `StructureTensor` stores the coefficients `C[m][n][l]` of
//! `e_m * e_n = sum_l C[m][n][l] e_l` as exact rational functions. Products,
//! associators, the quadratic associativity equations and the Jacobi identity
//! are all decided by exact cancellation.

use crate::expr::{CoeffExpr, Params};
use crate::gauss::GaussRat;
use crate::matrix::{solve_columns, GaussMat};
use std::collections::BTreeMap;
use thiserror::Error;

/// Exact routines are quartic-to-quintic in the dimension; the cap keeps
/// worst-case runs tractable.
pub const MAX_DIM: usize = 16;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("dimension {0} exceeds the exact-routine cap {MAX_DIM}")]
    DimTooLarge(usize),
    #[error("tensor is not antisymmetric at entry ({0}, {1}, {2})")]
    NotAntisymmetric(usize, usize, usize),
    #[error("matrix span is not multiplicatively closed: product {m}*{n} leaves the span")]
    NotClosed { m: usize, n: usize },
    #[error("input matrices are linearly dependent")]
    LinearlyDependentInput,
    #[error("basis list length {got} does not match dimension {expected}")]
    BasisMismatch { expected: usize, got: usize },
}

/// Report from the quadratic associativity check: every failing index tuple
/// `(m, n, l, k)` of `sum_j C[m][n][j] C[j][l][k] = sum_j C[n][l][j] C[m][j][k]`,
/// the coefficient of `e_k` in `(e_m e_n) e_l - e_m (e_n e_l)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssociativityReport {
    pub holds: bool,
    pub violations: Vec<[usize; 4]>,
}

/// Report from the Jacobi check, listing failing `(m, n, l, k)` tuples of the
/// cyclic double-bracket contraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiReport {
    pub holds: bool,
    pub violations: Vec<[usize; 4]>,
}

#[derive(Clone, PartialEq, Debug)]
pub struct StructureTensor {
    dim: usize,
    basis: Vec<String>,
    params: Params,
    c: Vec<CoeffExpr>, // dim^3 entries, index (m, n, l)
}

impl StructureTensor {
    pub fn zero(dim: usize, basis: Vec<String>, params: Params) -> Result<Self, AlgebraError> {
        if dim > MAX_DIM {
            return Err(AlgebraError::DimTooLarge(dim));
        }
        if basis.len() != dim {
            return Err(AlgebraError::BasisMismatch { expected: dim, got: basis.len() });
        }
        Ok(StructureTensor {
            dim,
            basis,
            params: params.clone(),
            c: vec![CoeffExpr::zero(params); dim * dim * dim],
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    fn idx(&self, m: usize, n: usize, l: usize) -> usize {
        debug_assert!(m < self.dim && n < self.dim && l < self.dim);
        (m * self.dim + n) * self.dim + l
    }

    pub fn get(&self, m: usize, n: usize, l: usize) -> &CoeffExpr {
        &self.c[self.idx(m, n, l)]
    }

    pub fn set(&mut self, m: usize, n: usize, l: usize, v: CoeffExpr) {
        assert!(v.params() == &self.params, "entry declares a different parameter list");
        let i = self.idx(m, n, l);
        self.c[i] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, &CoeffExpr)> {
        let d = self.dim;
        self.c.iter().enumerate().map(move |(i, e)| {
            let l = i % d;
            let n = (i / d) % d;
            let m = i / (d * d);
            (m, n, l, e)
        })
    }

    /// Substitutes a subset of parameters, keeping the rest formal.
    pub fn substitute(
        &self,
        assignment: &BTreeMap<String, GaussRat>,
    ) -> Result<Self, crate::expr::CoeffError> {
        let mut out = self.clone();
        for e in out.c.iter_mut() {
            *e = e.substitute(assignment)?;
        }
        Ok(out)
    }

    /// Re-embeds every entry into a larger parameter list.
    pub fn promote(&self, new_params: &Params) -> Result<Self, crate::expr::CoeffError> {
        let mut out = StructureTensor {
            dim: self.dim,
            basis: self.basis.clone(),
            params: new_params.clone(),
            c: Vec::with_capacity(self.c.len()),
        };
        for e in &self.c {
            out.c.push(e.promote(new_params)?);
        }
        Ok(out)
    }

    /// Drops parameters no entry uses (errors if one is still free).
    pub fn restrict(&self, new_params: &Params) -> Result<Self, crate::expr::CoeffError> {
        let mut out = StructureTensor {
            dim: self.dim,
            basis: self.basis.clone(),
            params: new_params.clone(),
            c: Vec::with_capacity(self.c.len()),
        };
        for e in &self.c {
            out.c.push(e.restrict(new_params)?);
        }
        Ok(out)
    }

    /// Names of parameters actually used by some entry.
    pub fn free_params(&self) -> Vec<String> {
        let mut names: Vec<String> = Vec::new();
        for e in &self.c {
            for n in e.free_params() {
                if !names.contains(&n) {
                    names.push(n);
                }
            }
        }
        names
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct AlgebraElement {
    params: Params,
    coords: Vec<CoeffExpr>,
}

impl AlgebraElement {
    pub fn new(params: Params, coords: Vec<CoeffExpr>) -> Self {
        assert!(coords.iter().all(|c| c.params() == &params));
        AlgebraElement { params, coords }
    }

    pub fn zero(params: Params, dim: usize) -> Self {
        AlgebraElement { coords: vec![CoeffExpr::zero(params.clone()); dim], params }
    }

    /// Basis vector `e_k`.
    pub fn basis(params: Params, dim: usize, k: usize) -> Self {
        let mut el = AlgebraElement::zero(params.clone(), dim);
        el.coords[k] = CoeffExpr::one(params);
        el
    }

    pub fn from_ints(params: Params, ints: &[i64]) -> Self {
        let coords = ints
            .iter()
            .map(|&n| CoeffExpr::int(params.clone(), n))
            .collect();
        AlgebraElement { params, coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn coords(&self) -> &[CoeffExpr] {
        &self.coords
    }

    pub fn get(&self, k: usize) -> &CoeffExpr {
        &self.coords[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn promote(&self, new_params: &Params) -> Result<Self, crate::expr::CoeffError> {
        let mut coords = Vec::with_capacity(self.coords.len());
        for c in &self.coords {
            coords.push(c.promote(new_params)?);
        }
        Ok(AlgebraElement { params: new_params.clone(), coords })
    }
}

fn check_conforms(c: &StructureTensor, u: &AlgebraElement) -> Result<(), AlgebraError> {
    if u.dim() != c.dim() {
        return Err(AlgebraError::DimensionMismatch { expected: c.dim(), got: u.dim() });
    }
    Ok(())
}

/// `(u * v)_l = sum_{m,n} u_m v_n C[m][n][l]`.
pub fn multiply(
    c: &StructureTensor,
    u: &AlgebraElement,
    v: &AlgebraElement,
) -> Result<AlgebraElement, AlgebraError> {
    check_conforms(c, u)?;
    check_conforms(c, v)?;
    let d = c.dim();
    let mut out = AlgebraElement::zero(c.params.clone(), d);
    for m in 0..d {
        if u.get(m).is_zero() {
            continue;
        }
        for n in 0..d {
            if v.get(n).is_zero() {
                continue;
            }
            let uv = u.get(m) * v.get(n);
            for l in 0..d {
                let cl = c.get(m, n, l);
                if !cl.is_zero() {
                    out.coords[l] = &out.coords[l] + &(&uv * cl);
                }
            }
        }
    }
    Ok(out)
}

/// `(u*v)*w - u*(v*w)`.
pub fn associator(
    c: &StructureTensor,
    u: &AlgebraElement,
    v: &AlgebraElement,
    w: &AlgebraElement,
) -> Result<AlgebraElement, AlgebraError> {
    let left = multiply(c, &multiply(c, u, v)?, w)?;
    let right = multiply(c, u, &multiply(c, v, w)?)?;
    let coords = left
        .coords
        .iter()
        .zip(&right.coords)
        .map(|(a, b)| a - b)
        .collect();
    Ok(AlgebraElement { params: c.params.clone(), coords })
}

/// Exhaustive check of the quadratic associativity equations.
pub fn check_associativity(c: &StructureTensor) -> AssociativityReport {
    let d = c.dim();
    let mut violations = Vec::new();
    for m in 0..d {
        for n in 0..d {
            for l in 0..d {
                for k in 0..d {
                    let mut diff = CoeffExpr::zero(c.params.clone());
                    for j in 0..d {
                        let a = c.get(m, n, j);
                        let b = c.get(j, l, k);
                        if !a.is_zero() && !b.is_zero() {
                            diff = &diff + &(a * b);
                        }
                        let a = c.get(n, l, j);
                        let b = c.get(m, j, k);
                        if !a.is_zero() && !b.is_zero() {
                            diff = &diff - &(a * b);
                        }
                    }
                    if !diff.is_zero() {
                        violations.push([m, n, l, k]);
                    }
                }
            }
        }
    }
    AssociativityReport { holds: violations.is_empty(), violations }
}

/// Lie constants `L[m][n][l] = C[m][n][l] - C[n][m][l]`.
pub fn antisymmetrize(c: &StructureTensor) -> StructureTensor {
    let d = c.dim();
    let mut out = c.clone();
    for m in 0..d {
        for n in 0..d {
            for l in 0..d {
                let v = c.get(m, n, l) - c.get(n, m, l);
                let i = out.idx(m, n, l);
                out.c[i] = v;
            }
        }
    }
    out
}

/// Jordan constants `J[m][n][l] = C[m][n][l] + C[n][m][l]`, stored without
/// the conventional 1/2.
pub fn symmetrize(c: &StructureTensor) -> StructureTensor {
    let d = c.dim();
    let mut out = c.clone();
    for m in 0..d {
        for n in 0..d {
            for l in 0..d {
                let v = c.get(m, n, l) + c.get(n, m, l);
                let i = out.idx(m, n, l);
                out.c[i] = v;
            }
        }
    }
    out
}

/// Verifies the Jacobi identity for an antisymmetric tensor.
pub fn check_jacobi(l: &StructureTensor) -> Result<JacobiReport, AlgebraError> {
    let d = l.dim();
    for m in 0..d {
        for n in m..d {
            for k in 0..d {
                let neg = -l.get(n, m, k);
                if *l.get(m, n, k) != neg {
                    return Err(AlgebraError::NotAntisymmetric(m, n, k));
                }
            }
        }
    }
    let mut violations = Vec::new();
    for m in 0..d {
        for n in 0..d {
            for p in 0..d {
                for k in 0..d {
                    let mut acc = CoeffExpr::zero(l.params.clone());
                    // [[e_m, e_n], e_p] + [[e_n, e_p], e_m] + [[e_p, e_m], e_n]
                    for (a, b, c) in [(m, n, p), (n, p, m), (p, m, n)] {
                        for j in 0..d {
                            let x = l.get(a, b, j);
                            let y = l.get(j, c, k);
                            if !x.is_zero() && !y.is_zero() {
                                acc = &acc + &(x * y);
                            }
                        }
                    }
                    if !acc.is_zero() {
                        violations.push([m, n, p, k]);
                    }
                }
            }
        }
    }
    Ok(JacobiReport { holds: violations.is_empty(), violations })
}

/// Solves `mat_m * mat_n = sum_l C[m][n][l] mat_l` exactly.
pub fn constants_from_matrices(mats: &[GaussMat]) -> Result<StructureTensor, AlgebraError> {
    let dim = mats.len();
    if dim == 0 || dim > MAX_DIM {
        return Err(AlgebraError::DimTooLarge(dim));
    }
    let n = mats[0].rows();
    for m in mats {
        if m.rows() != n || m.cols() != n {
            return Err(AlgebraError::DimensionMismatch { expected: n, got: m.rows() });
        }
    }
    // Columns of `a` are the flattened basis matrices.
    let a = GaussMat::from_fn(n * n, dim, |r, c| mats[c].flatten()[r].clone());
    let mut rhs = GaussMat::zeros(n * n, dim * dim);
    for m in 0..dim {
        for nn in 0..dim {
            let prod = &mats[m] * &mats[nn];
            for (r, v) in prod.flatten().iter().enumerate() {
                rhs.set(r, m * dim + nn, v.clone());
            }
        }
    }
    let out = solve_columns(&a, &rhs);
    if out.rank < dim {
        return Err(AlgebraError::LinearlyDependentInput);
    }
    let basis = (0..dim).map(|k| format!("e{k}")).collect();
    let mut tensor = StructureTensor::zero(dim, basis, Params::empty())?;
    for m in 0..dim {
        for nn in 0..dim {
            match &out.solutions[m * dim + nn] {
                None => return Err(AlgebraError::NotClosed { m, n: nn }),
                Some(x) => {
                    for (l, v) in x.iter().enumerate() {
                        if !v.is_zero() {
                            tensor.set(m, nn, l, CoeffExpr::constant(Params::empty(), v.clone()));
                        }
                    }
                }
            }
        }
    }
    Ok(tensor)
}
