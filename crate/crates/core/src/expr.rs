//! Canonical rational functions in named formal parameters.
//!
//! A `CoeffExpr` is a reduced fraction `num/den` of multivariate polynomials
//! over the Gaussian rationals: gcd(num, den) = 1 and den is monic under lex
//! order (den = 1 whenever the value is polynomial). Equality is therefore
//! plain structural equality, and a limit exists at a point exactly when the
//! reduced denominator does not vanish there.

use crate::gauss::GaussRat;
use crate::poly::{gcd, Poly};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;
use thiserror::Error;

/// Ordered list of declared parameter names, shared by every expression of
/// one algebra.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Params(Arc<Vec<String>>);

impl Params {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut seen = std::collections::BTreeSet::new();
        for n in &names {
            assert!(seen.insert(n.clone()), "duplicate parameter name {n}");
        }
        Params(Arc::new(names))
    }

    pub fn empty() -> Self {
        Params(Arc::new(Vec::new()))
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    /// This list extended by any names in `other` not already present.
    pub fn union(&self, other: &Params) -> Params {
        let mut names = self.0.as_ref().clone();
        for n in other.names() {
            if !names.iter().any(|m| m == n) {
                names.push(n.clone());
            }
        }
        Params(Arc::new(names))
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CoeffError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("undeclared parameter `{name}` at position {pos}")]
    UndeclaredParameter { name: String, pos: usize },
    #[error("denominator is identically zero")]
    DivisionByZeroPolynomial,
    #[error("denominator vanishes at the evaluation point")]
    PoleAtPoint,
    #[error("assignment does not cover parameter `{name}`")]
    MissingParameter { name: String },
    #[error("expression still depends on parameters {names:?}")]
    ResidualParameters { names: Vec<String> },
    #[error("parameter `{name}` is not declared")]
    UnknownParameter { name: String },
}

/// Outcome of a limit: either a finite value or a genuine pole.
#[derive(Clone, PartialEq, Debug)]
pub enum Limit<T> {
    Exists(T),
    DoesNotExist,
}

impl<T> Limit<T> {
    pub fn exists(self) -> Option<T> {
        match self {
            Limit::Exists(v) => Some(v),
            Limit::DoesNotExist => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoeffExpr {
    params: Params,
    num: Poly,
    den: Poly,
}

impl CoeffExpr {
    /// Builds the canonical reduced form of `num/den`.
    pub fn new(params: Params, num: Poly, den: Poly) -> Result<Self, CoeffError> {
        assert_eq!(num.nvars(), params.len());
        assert_eq!(den.nvars(), params.len());
        if den.is_zero() {
            return Err(CoeffError::DivisionByZeroPolynomial);
        }
        if num.is_zero() {
            return Ok(CoeffExpr { num, den: Poly::one(params.len()), params });
        }
        if den.is_constant() {
            let inv = den.constant_term().inv().expect("nonzero");
            return Ok(CoeffExpr {
                num: num.scale(&inv),
                den: Poly::one(params.len()),
                params,
            });
        }
        if num.is_constant() {
            // gcd(constant, den) = 1: only monic normalization is needed.
            return Ok(Self::from_reduced(params, num, den));
        }
        let g = gcd(&num, &den);
        let num = num.div_exact(&g).expect("gcd divides");
        let den = den.div_exact(&g).expect("gcd divides");
        Ok(Self::from_reduced(params, num, den))
    }

    /// Monic-normalizes an already coprime pair.
    fn from_reduced(params: Params, mut num: Poly, mut den: Poly) -> Self {
        debug_assert!(!den.is_zero());
        let lc = den.leading_coeff();
        if !lc.is_one() {
            let inv = lc.inv().expect("nonzero");
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        CoeffExpr { params, num, den }
    }

    pub fn constant(params: Params, c: GaussRat) -> Self {
        let n = params.len();
        CoeffExpr { num: Poly::constant(n, c), den: Poly::one(n), params }
    }

    pub fn zero(params: Params) -> Self {
        CoeffExpr::constant(params, GaussRat::zero())
    }

    pub fn one(params: Params) -> Self {
        CoeffExpr::constant(params, GaussRat::one())
    }

    pub fn int(params: Params, n: i64) -> Self {
        CoeffExpr::constant(params, GaussRat::from_int(n))
    }

    pub fn parameter(params: Params, name: &str) -> Result<Self, CoeffError> {
        let idx = params
            .index_of(name)
            .ok_or_else(|| CoeffError::UnknownParameter { name: name.to_string() })?;
        let n = params.len();
        Ok(CoeffExpr { num: Poly::var(n, idx), den: Poly::one(n), params })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// The value as a Gaussian rational if parameter-free.
    pub fn as_constant(&self) -> Option<GaussRat> {
        if self.is_constant() {
            // den is monic and constant, hence exactly 1.
            Some(self.num.constant_term())
        } else {
            None
        }
    }

    /// Names of parameters actually occurring.
    pub fn free_params(&self) -> Vec<String> {
        let mut vars = self.num.vars_used();
        for v in self.den.vars_used() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        vars.sort_unstable();
        vars.into_iter().map(|v| self.params.names()[v].clone()).collect()
    }

    fn assert_same_params(&self, other: &Self) {
        assert!(
            self.params == other.params,
            "operands declare different parameter lists"
        );
    }

    pub fn inv(&self) -> Result<Self, CoeffError> {
        if self.num.is_zero() {
            return Err(CoeffError::DivisionByZeroPolynomial);
        }
        // num and den are already coprime; swapping keeps them so.
        Ok(CoeffExpr::from_reduced(self.params.clone(), self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self, CoeffError> {
        self.assert_same_params(rhs);
        Ok(self * &rhs.inv()?)
    }

    /// Integer power; negative exponents invert (error on zero base).
    pub fn pow(&self, exp: i64) -> Result<Self, CoeffError> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let e = exp.unsigned_abs() as u32;
        Ok(CoeffExpr::new(self.params.clone(), base.num.pow(e), base.den.pow(e))
            .expect("denominator power of nonzero"))
    }

    /// Exact evaluation; the assignment must cover every free parameter.
    pub fn eval(&self, assignment: &BTreeMap<String, GaussRat>) -> Result<GaussRat, CoeffError> {
        let mut point = vec![GaussRat::zero(); self.params.len()];
        for (v, name) in self.params.names().iter().enumerate() {
            match assignment.get(name) {
                Some(val) => point[v] = val.clone(),
                None => {
                    if self.num.uses_var(v) || self.den.uses_var(v) {
                        return Err(CoeffError::MissingParameter { name: name.clone() });
                    }
                }
            }
        }
        let den = self.den.eval(&point);
        if den.is_zero() {
            return Err(CoeffError::PoleAtPoint);
        }
        Ok(&self.num.eval(&point) / &den)
    }

    /// Substitutes a subset of parameters, keeping the rest formal.
    pub fn substitute(
        &self,
        assignment: &BTreeMap<String, GaussRat>,
    ) -> Result<Self, CoeffError> {
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        for (name, val) in assignment {
            let idx = self
                .params
                .index_of(name)
                .ok_or_else(|| CoeffError::UnknownParameter { name: name.clone() })?;
            num = num.substitute(idx, val);
            den = den.substitute(idx, val);
        }
        if den.is_zero() {
            return Err(CoeffError::PoleAtPoint);
        }
        CoeffExpr::new(self.params.clone(), num, den)
    }

    /// Limit as `param -> value` with the other parameters left formal.
    ///
    /// On the reduced form the limit exists iff the denominator does not
    /// vanish identically after the substitution; reducedness guarantees the
    /// numerator cannot vanish with it.
    pub fn limit(&self, param: &str, value: &GaussRat) -> Result<Limit<CoeffExpr>, CoeffError> {
        let idx = self
            .params
            .index_of(param)
            .ok_or_else(|| CoeffError::UnknownParameter { name: param.to_string() })?;
        let den = self.den.substitute(idx, value);
        if den.is_zero() {
            return Ok(Limit::DoesNotExist);
        }
        let num = self.num.substitute(idx, value);
        Ok(Limit::Exists(
            CoeffExpr::new(self.params.clone(), num, den).expect("nonzero denominator"),
        ))
    }

    /// Scalar limit: requires `param` to be the only free parameter.
    pub fn limit_at(
        &self,
        param: &str,
        value: &GaussRat,
    ) -> Result<Limit<GaussRat>, CoeffError> {
        let residual: Vec<String> = self
            .free_params()
            .into_iter()
            .filter(|n| n != param)
            .collect();
        if !residual.is_empty() {
            return Err(CoeffError::ResidualParameters { names: residual });
        }
        Ok(match self.limit(param, value)? {
            Limit::DoesNotExist => Limit::DoesNotExist,
            Limit::Exists(e) => Limit::Exists(e.as_constant().expect("no free parameters left")),
        })
    }

    /// Re-embeds into a parameter list that contains every current name.
    pub fn promote(&self, new_params: &Params) -> Result<Self, CoeffError> {
        if self.params == *new_params {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.params.len());
        for name in self.params.names() {
            match new_params.index_of(name) {
                Some(idx) => map.push(idx),
                None => return Err(CoeffError::UnknownParameter { name: name.clone() }),
            }
        }
        let n = new_params.len();
        Ok(CoeffExpr {
            params: new_params.clone(),
            num: self.num.promote(&map, n),
            den: self.den.promote(&map, n),
        })
    }

    /// Restricts to a smaller parameter list; errors if a dropped parameter
    /// is still in use.
    pub fn restrict(&self, new_params: &Params) -> Result<Self, CoeffError> {
        for name in self.free_params() {
            if new_params.index_of(&name).is_none() {
                return Err(CoeffError::ResidualParameters { names: vec![name] });
            }
        }
        let mut map = vec![0usize; self.params.len()];
        let mut keep = vec![false; self.params.len()];
        for (v, name) in self.params.names().iter().enumerate() {
            if let Some(idx) = new_params.index_of(name) {
                map[v] = idx;
                keep[v] = true;
            }
        }
        let n = new_params.len();
        let strip = |p: &Poly| -> Poly {
            // Unused variables have zero exponent everywhere; remap the rest.
            let mut out = Poly::zero(n);
            for (m, c) in p.terms() {
                let mut m2 = vec![0u32; n];
                for (v, &e) in m.iter().enumerate() {
                    if e > 0 {
                        debug_assert!(keep[v]);
                        m2[map[v]] = e;
                    }
                }
                out = &out + &Poly::monomial(n, m2, c.clone());
            }
            out
        };
        Ok(CoeffExpr { params: new_params.clone(), num: strip(&self.num), den: strip(&self.den) })
    }
}

impl Add for &CoeffExpr {
    type Output = CoeffExpr;
    fn add(self, rhs: &CoeffExpr) -> CoeffExpr {
        self.assert_same_params(rhs);
        if self.den.is_constant() && rhs.den.is_constant() {
            // Both polynomial (den = 1 canonically).
            return CoeffExpr {
                params: self.params.clone(),
                num: &self.num + &rhs.num,
                den: Poly::one(self.params.len()),
            };
        }
        // With a/b, c/d reduced and g = gcd(b, d): write b = g b', d = g d'.
        // The sum (a d' + c b') / (g b' d') is coprime to b' and d', so only
        // a gcd against the small g remains.
        let g = gcd(&self.den, &rhs.den);
        if g.is_constant() {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            let den = &self.den * &rhs.den;
            return CoeffExpr::from_reduced(self.params.clone(), num, den);
        }
        let b1 = self.den.div_exact(&g).expect("gcd divides");
        let d1 = rhs.den.div_exact(&g).expect("gcd divides");
        let t = &(&self.num * &d1) + &(&rhs.num * &b1);
        if t.is_zero() {
            return CoeffExpr::zero(self.params.clone());
        }
        let g1 = gcd(&t, &g);
        let num = t.div_exact(&g1).expect("gcd divides");
        let b_over_g1 = self.den.div_exact(&g1).expect("gcd divides");
        let den = &b_over_g1 * &d1;
        CoeffExpr::from_reduced(self.params.clone(), num, den)
    }
}

impl Sub for &CoeffExpr {
    type Output = CoeffExpr;
    fn sub(self, rhs: &CoeffExpr) -> CoeffExpr {
        self + &(-rhs)
    }
}

impl Mul for &CoeffExpr {
    type Output = CoeffExpr;
    fn mul(self, rhs: &CoeffExpr) -> CoeffExpr {
        self.assert_same_params(rhs);
        if self.num.is_zero() || rhs.num.is_zero() {
            return CoeffExpr::zero(self.params.clone());
        }
        if self.den.is_constant() && rhs.den.is_constant() {
            return CoeffExpr {
                params: self.params.clone(),
                num: &self.num * &rhs.num,
                den: Poly::one(self.params.len()),
            };
        }
        // Cross-cancel: with a/b and c/d reduced, (a/g1)(c/g2) over
        // (b/g2)(d/g1) is already in lowest terms for g1 = gcd(a, d),
        // g2 = gcd(c, b).
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let num = &self.num.div_exact(&g1).expect("gcd divides")
            * &rhs.num.div_exact(&g2).expect("gcd divides");
        let den = &self.den.div_exact(&g2).expect("gcd divides")
            * &rhs.den.div_exact(&g1).expect("gcd divides");
        CoeffExpr::from_reduced(self.params.clone(), num, den)
    }
}

impl Neg for &CoeffExpr {
    type Output = CoeffExpr;
    fn neg(self) -> CoeffExpr {
        CoeffExpr { params: self.params.clone(), num: -&self.num, den: self.den.clone() }
    }
}

impl fmt::Display for CoeffExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::parse::print_expr(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> Params {
        Params::new(["lambda", "mu"])
    }

    fn lam() -> CoeffExpr {
        CoeffExpr::parameter(params(), "lambda").unwrap()
    }

    fn mu() -> CoeffExpr {
        CoeffExpr::parameter(params(), "mu").unwrap()
    }

    #[test]
    fn reduction_is_canonical() {
        // (lambda^2 - 1)/(lambda - 1) reduces to lambda + 1.
        let one = CoeffExpr::one(params());
        let num = &(&lam() * &lam()) - &one;
        let red = num.div(&(&lam() - &one)).unwrap();
        assert_eq!(red, &lam() + &one);
    }

    #[test]
    fn eval_and_pole() {
        let one = CoeffExpr::one(params());
        let e = one.div(&lam()).unwrap();
        let mut at = BTreeMap::new();
        at.insert("lambda".to_string(), GaussRat::zero());
        assert_eq!(e.eval(&at), Err(CoeffError::PoleAtPoint));
        at.insert("lambda".to_string(), GaussRat::from_int(4));
        assert_eq!(e.eval(&at).unwrap(), GaussRat::from_ratio(1, 4));
    }

    #[test]
    fn cancellation_precedes_evaluation() {
        // (lambda^2 - 1)/(lambda - 1) at lambda = 1 evaluates to 2.
        let one = CoeffExpr::one(params());
        let e = (&(&lam() * &lam()) - &one).div(&(&lam() - &one)).unwrap();
        let mut at = BTreeMap::new();
        at.insert("lambda".to_string(), GaussRat::one());
        assert_eq!(e.eval(&at).unwrap(), GaussRat::from_int(2));
    }

    #[test]
    fn limits() {
        let zero = GaussRat::zero();
        // lambda^2/lambda -> 0
        let e = (&lam() * &lam()).div(&lam()).unwrap();
        assert_eq!(e.limit_at("lambda", &zero).unwrap(), Limit::Exists(GaussRat::zero()));
        // 1/lambda -> pole
        let e = CoeffExpr::one(params()).div(&lam()).unwrap();
        assert_eq!(e.limit_at("lambda", &zero).unwrap(), Limit::DoesNotExist);
        // (lambda^2 + lambda)/lambda -> 1
        let e = (&(&lam() * &lam()) + &lam()).div(&lam()).unwrap();
        assert_eq!(e.limit_at("lambda", &zero).unwrap(), Limit::Exists(GaussRat::one()));
    }

    #[test]
    fn residual_parameters_rejected() {
        let e = &lam() * &mu();
        let err = e.limit_at("lambda", &GaussRat::zero()).unwrap_err();
        assert!(matches!(err, CoeffError::ResidualParameters { .. }));
        // The general limit keeps mu formal.
        let l = e.limit("lambda", &GaussRat::zero()).unwrap();
        assert_eq!(l, Limit::Exists(CoeffExpr::zero(params())));
    }

    #[test]
    fn partial_limit_requires_reduction_after_substitution() {
        // lambda*mu / (mu + lambda - 1) at lambda -> 1 gives mu/mu = 1.
        let one = CoeffExpr::one(params());
        let den = &(&mu() + &lam()) - &one;
        let e = (&lam() * &mu()).div(&den).unwrap();
        match e.limit("lambda", &GaussRat::one()).unwrap() {
            Limit::Exists(v) => assert_eq!(v, one),
            Limit::DoesNotExist => panic!("limit exists"),
        }
    }

    #[test]
    fn cross_multiplication_agrees_with_equality() {
        let one = CoeffExpr::one(params());
        let a = (&(&lam() * &lam()) - &one).div(&(&lam() - &one)).unwrap();
        let b = &lam() + &one;
        assert_eq!(a, b);
        assert_eq!(&a.num * &b.den, &b.num * &a.den);
    }
}
