//! Polynomial phase-space symbols and the Moyal star product.
//!
//! A `PolySymbol` is a polynomial in `q_k, p_k` for each degree of freedom
//! and in one formal deformation parameter `h_k` per degree of freedom, with
//! exact complex-rational coefficients. The star product is the terminating
//! bidifferential series
//!
//! ```text
//! f * g = sum over (n_1..n_d) of  prod_k (i h_k / 2)^{n_k} / n_k! D_k^{n_k} (f, g)
//! D_k = d/dq_k (x) d/dp_k  -  d/dp_k (x) d/dq_k
//! ```
//!
//! applied per degree of freedom; on polynomials every series is finite and
//! every coefficient exact, so `h_k -> 0` limits are plain substitutions.

use starcon_core::poly::Poly;
use starcon_core::{parse_expr, CoeffError, GaussRat, Params};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum SymbolError {
    #[error("degree-of-freedom mismatch: {0} vs {1}")]
    DofMismatch(usize, usize),
    #[error("dof index {0} out of range 1..={1}")]
    DofOutOfRange(usize, usize),
    #[error("expression is not polynomial (division left a denominator)")]
    NotPolynomial,
    #[error(transparent)]
    Parse(#[from] CoeffError),
}

/// Variable names `q1, p1, .., qd, pd, h1, .., hd`.
fn symbol_params(dofs: usize) -> Params {
    let mut names = Vec::with_capacity(3 * dofs);
    for k in 1..=dofs {
        names.push(format!("q{k}"));
        names.push(format!("p{k}"));
    }
    for k in 1..=dofs {
        names.push(format!("h{k}"));
    }
    Params::new(names)
}

#[derive(Clone, PartialEq, Debug)]
pub struct PolySymbol {
    dofs: usize,
    poly: Poly, // nvars = 3 * dofs
}

impl PolySymbol {
    fn nvars(dofs: usize) -> usize {
        3 * dofs
    }

    fn q_index(&self, k: usize) -> usize {
        2 * (k - 1)
    }

    fn p_index(&self, k: usize) -> usize {
        2 * (k - 1) + 1
    }

    fn h_index(&self, k: usize) -> usize {
        2 * self.dofs + (k - 1)
    }

    fn check_dof(&self, k: usize) -> Result<(), SymbolError> {
        if k == 0 || k > self.dofs {
            return Err(SymbolError::DofOutOfRange(k, self.dofs));
        }
        Ok(())
    }

    pub fn zero(dofs: usize) -> Self {
        PolySymbol { dofs, poly: Poly::zero(Self::nvars(dofs)) }
    }

    pub fn one(dofs: usize) -> Self {
        PolySymbol { dofs, poly: Poly::one(Self::nvars(dofs)) }
    }

    pub fn constant(dofs: usize, c: GaussRat) -> Self {
        PolySymbol { dofs, poly: Poly::constant(Self::nvars(dofs), c) }
    }

    /// The coordinate symbol `q_k` (1-indexed).
    pub fn q(dofs: usize, k: usize) -> Self {
        assert!(k >= 1 && k <= dofs);
        PolySymbol { dofs, poly: Poly::var(Self::nvars(dofs), 2 * (k - 1)) }
    }

    /// The coordinate symbol `p_k` (1-indexed).
    pub fn p(dofs: usize, k: usize) -> Self {
        assert!(k >= 1 && k <= dofs);
        PolySymbol { dofs, poly: Poly::var(Self::nvars(dofs), 2 * (k - 1) + 1) }
    }

    /// The formal deformation parameter `h_k` (1-indexed).
    pub fn hbar(dofs: usize, k: usize) -> Self {
        assert!(k >= 1 && k <= dofs);
        PolySymbol { dofs, poly: Poly::var(Self::nvars(dofs), 2 * dofs + (k - 1)) }
    }

    pub fn dofs(&self) -> usize {
        self.dofs
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        PolySymbol { dofs: self.dofs, poly: self.poly.scale(c) }
    }

    pub fn pow(&self, e: u32) -> Self {
        PolySymbol { dofs: self.dofs, poly: self.poly.pow(e) }
    }

    /// Parses the text format `c * q1^a * p1^b * h1^c + ...`.
    pub fn parse(text: &str, dofs: usize) -> Result<Self, SymbolError> {
        let params = symbol_params(dofs);
        let e = parse_expr(text, &params)?;
        if !e.denominator().is_constant() {
            return Err(SymbolError::NotPolynomial);
        }
        debug_assert!(e.denominator().constant_term().is_one());
        Ok(PolySymbol { dofs, poly: e.numerator().clone() })
    }

    pub fn derivative_q(&self, k: usize) -> Result<Self, SymbolError> {
        self.check_dof(k)?;
        Ok(PolySymbol { dofs: self.dofs, poly: self.poly.derivative(self.q_index(k)) })
    }

    pub fn derivative_p(&self, k: usize) -> Result<Self, SymbolError> {
        self.check_dof(k)?;
        Ok(PolySymbol { dofs: self.dofs, poly: self.poly.derivative(self.p_index(k)) })
    }

    /// Substitutes values for the listed `h_k`; the rest stay formal.
    pub fn set_hbar(&self, assignment: &[(usize, GaussRat)]) -> Result<Self, SymbolError> {
        let mut poly = self.poly.clone();
        for (k, v) in assignment {
            self.check_dof(*k)?;
            poly = poly.substitute(self.h_index(*k), v);
        }
        Ok(PolySymbol { dofs: self.dofs, poly })
    }

    /// Coefficient of `h_k^order` (the `h_k` factor stripped).
    pub fn hbar_coefficient(&self, k: usize, order: u32) -> Result<Self, SymbolError> {
        self.check_dof(k)?;
        let hk = self.h_index(k);
        let mut out = Poly::zero(self.poly.nvars());
        for (mono, c) in self.poly.terms() {
            if mono[hk] == order {
                let mut m = mono.clone();
                m[hk] = 0;
                out = &out + &Poly::monomial(self.poly.nvars(), m, c.clone());
            }
        }
        Ok(PolySymbol { dofs: self.dofs, poly: out })
    }

    /// Total degree in the `(q_k, p_k)` pair.
    fn pair_degree(&self, k: usize) -> u32 {
        self.poly.degree_in(self.q_index(k)) + self.poly.degree_in(self.p_index(k))
    }

    /// Evaluates at real phase-space points with all `h_k` already set.
    pub fn eval_f64(&self, coords: &[(f64, f64)]) -> num_complex::Complex64 {
        assert_eq!(coords.len(), self.dofs);
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for (mono, c) in self.poly.terms() {
            let mut t = c.to_complex_f64();
            for (k, (q, p)) in coords.iter().enumerate() {
                t *= q.powi(mono[2 * k] as i32) * p.powi(mono[2 * k + 1] as i32);
            }
            for k in 1..=self.dofs {
                assert_eq!(mono[2 * self.dofs + (k - 1)], 0, "formal h_{k} left in numeric eval");
            }
            acc += num_complex::Complex64::new(t.re, t.im);
        }
        acc
    }
}

impl Add for &PolySymbol {
    type Output = PolySymbol;
    fn add(self, rhs: &PolySymbol) -> PolySymbol {
        assert_eq!(self.dofs, rhs.dofs);
        PolySymbol { dofs: self.dofs, poly: &self.poly + &rhs.poly }
    }
}

impl Sub for &PolySymbol {
    type Output = PolySymbol;
    fn sub(self, rhs: &PolySymbol) -> PolySymbol {
        assert_eq!(self.dofs, rhs.dofs);
        PolySymbol { dofs: self.dofs, poly: &self.poly - &rhs.poly }
    }
}

impl Mul for &PolySymbol {
    type Output = PolySymbol;
    fn mul(self, rhs: &PolySymbol) -> PolySymbol {
        assert_eq!(self.dofs, rhs.dofs);
        PolySymbol { dofs: self.dofs, poly: &self.poly * &rhs.poly }
    }
}

impl Neg for &PolySymbol {
    type Output = PolySymbol;
    fn neg(self) -> PolySymbol {
        PolySymbol { dofs: self.dofs, poly: -&self.poly }
    }
}

impl fmt::Display for PolySymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params = symbol_params(self.dofs);
        write!(f, "{}", starcon_core::parse::print_poly_public(&self.poly, params.names()))
    }
}

fn factorial(n: u32) -> GaussRat {
    let mut acc = GaussRat::one();
    for k in 2..=n as i64 {
        acc = &acc * &GaussRat::from_int(k);
    }
    acc
}

fn binomial(n: u32, k: u32) -> GaussRat {
    let mut acc = GaussRat::one();
    for j in 0..k {
        acc = &acc * &GaussRat::from_int((n - j) as i64);
        acc = &acc / &GaussRat::from_int((j + 1) as i64);
    }
    acc
}

/// The Moyal star product, exact, with one formal `h_k` per degree of
/// freedom. Terminates because each bidifferential order differentiates both
/// factors.
pub fn moyal_product(f: &PolySymbol, g: &PolySymbol) -> Result<PolySymbol, SymbolError> {
    moyal_product_restricted(f, g, None)
}

/// Star product with the bidifferential series applied only to the listed
/// degrees of freedom (1-indexed); the others multiply pointwise. `None`
/// means all of them. The restricted form is the building block for hybrid
/// quantum-classical products.
pub fn moyal_product_restricted(
    f: &PolySymbol,
    g: &PolySymbol,
    active: Option<&[usize]>,
) -> Result<PolySymbol, SymbolError> {
    if f.dofs != g.dofs {
        return Err(SymbolError::DofMismatch(f.dofs, g.dofs));
    }
    let d = f.dofs;
    let active: Vec<usize> = match active {
        None => (1..=d).collect(),
        Some(list) => {
            for &k in list {
                f.check_dof(k)?;
            }
            list.to_vec()
        }
    };
    let half_i = &GaussRat::i() * &GaussRat::from_ratio(1, 2);
    // Pairs of partially differentiated factors with scalar prefactors,
    // processed one active dof at a time.
    let mut terms: Vec<(PolySymbol, PolySymbol, GaussRat)> =
        vec![(f.clone(), g.clone(), GaussRat::one())];
    for &k in &active {
        let mut next = Vec::new();
        for (lf, rg, coeff) in &terms {
            let bound = lf.pair_degree(k).min(rg.pair_degree(k));
            for n in 0..=bound {
                // (i h_k / 2)^n / n! times the binomial expansion of D_k^n.
                let scale = &half_i.pow(n) / &factorial(n);
                let hpow = PolySymbol::hbar(d, k).pow(n);
                for j in 0..=n {
                    let sign = if j % 2 == 0 { GaussRat::one() } else { GaussRat::from_int(-1) };
                    let c = &(coeff * &scale) * &(&binomial(n, j) * &sign);
                    let mut lf2 = lf.clone();
                    let mut rg2 = rg.clone();
                    for _ in 0..(n - j) {
                        lf2 = lf2.derivative_q(k)?;
                        rg2 = rg2.derivative_p(k)?;
                    }
                    for _ in 0..j {
                        lf2 = lf2.derivative_p(k)?;
                        rg2 = rg2.derivative_q(k)?;
                    }
                    if lf2.is_zero() || rg2.is_zero() {
                        continue;
                    }
                    next.push((&lf2 * &hpow, rg2, c));
                }
            }
        }
        terms = next;
    }
    let mut out = PolySymbol::zero(d);
    for (lf, rg, c) in terms {
        out = &out + &(&lf * &rg).scale(&c);
    }
    Ok(out)
}

/// Full Poisson bracket `sum_k (df/dq_k dg/dp_k - df/dp_k dg/dq_k)`.
pub fn poisson_bracket(f: &PolySymbol, g: &PolySymbol) -> Result<PolySymbol, SymbolError> {
    if f.dofs != g.dofs {
        return Err(SymbolError::DofMismatch(f.dofs, g.dofs));
    }
    let mut out = PolySymbol::zero(f.dofs);
    for k in 1..=f.dofs {
        out = &out + &poisson_bracket_dof(f, g, k)?;
    }
    Ok(out)
}

/// The dof-`k` contribution to the Poisson bracket.
pub fn poisson_bracket_dof(
    f: &PolySymbol,
    g: &PolySymbol,
    k: usize,
) -> Result<PolySymbol, SymbolError> {
    if f.dofs != g.dofs {
        return Err(SymbolError::DofMismatch(f.dofs, g.dofs));
    }
    let a = &f.derivative_q(k)? * &g.derivative_p(k)?;
    let b = &f.derivative_p(k)? * &g.derivative_q(k)?;
    Ok(&a - &b)
}
