//! Multivariate polynomials over the Gaussian rationals.
//!
//! Monomials are exponent vectors ordered lexicographically over the declared
//! variable list, terms live in a `BTreeMap`, and zero coefficients are never
//! stored. GCDs use the primitive pseudo-remainder sequence recursing on the
//! lowest-index variable present; everything downstream (canonical rational
//! functions, limits) rests on that being exact.

use crate::gauss::GaussRat;
use num::{BigInt, BigRational, Integer, One, Zero};
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

pub type Monomial = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, GaussRat>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: GaussRat) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, GaussRat::one())
    }

    /// The monomial `x_idx`.
    pub fn var(nvars: usize, idx: usize) -> Self {
        assert!(idx < nvars);
        let mut m = vec![0; nvars];
        m[idx] = 1;
        let mut p = Poly::zero(nvars);
        p.terms.insert(m, GaussRat::one());
        p
    }

    pub fn monomial(nvars: usize, exps: Monomial, coeff: GaussRat) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = Poly::zero(nvars);
        if !coeff.is_zero() {
            p.terms.insert(exps, coeff);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|&e| e == 0))
    }

    /// The constant term (zero if absent).
    pub fn constant_term(&self) -> GaussRat {
        self.terms
            .get(&vec![0; self.nvars])
            .cloned()
            .unwrap_or_else(GaussRat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussRat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Largest exponent of `var` appearing in any term.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m[var]).max().unwrap_or(0)
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m[var] > 0)
    }

    pub fn vars_used(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&v| self.uses_var(v)).collect()
    }

    /// Lex-leading term.
    pub fn leading(&self) -> Option<(&Monomial, &GaussRat)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> GaussRat {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(GaussRat::zero)
    }

    fn insert_term(&mut self, m: Monomial, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &GaussRat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Exact evaluation at a full assignment.
    pub fn eval(&self, point: &[GaussRat]) -> GaussRat {
        assert_eq!(point.len(), self.nvars);
        let mut acc = GaussRat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.iter().enumerate() {
                if e > 0 {
                    t = &t * &point[v].pow(e);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Substitutes `var := value`, keeping the variable slot (its exponent
    /// simply no longer occurs).
    pub fn substitute(&self, var: usize, value: &GaussRat) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m[var];
            let mut m2 = m.clone();
            m2[var] = 0;
            let c2 = if e > 0 { c * &value.pow(e) } else { c.clone() };
            out.insert_term(m2, c2);
        }
        out
    }

    pub fn derivative(&self, var: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[var] = e - 1;
            out.insert_term(m2, c * &GaussRat::from_int(e as i64));
        }
        out
    }

    /// Re-embeds into a larger variable list; `map[v]` is the new index of old
    /// variable `v`.
    pub fn promote(&self, map: &[usize], new_nvars: usize) -> Poly {
        assert_eq!(map.len(), self.nvars);
        let mut out = Poly::zero(new_nvars);
        for (m, c) in &self.terms {
            let mut m2 = vec![0u32; new_nvars];
            for (v, &e) in m.iter().enumerate() {
                m2[map[v]] = e;
            }
            out.insert_term(m2, c.clone());
        }
        out
    }

    /// Divides so the lex-leading coefficient is 1. No-op on zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some((_, lc)) => {
                let inv = lc.inv().expect("leading coefficient nonzero");
                self.scale(&inv)
            }
        }
    }

    /// Rescales by a positive rational so every coefficient is a Gaussian
    /// integer and the plain integer gcd of all coordinates is 1. This keeps
    /// pseudo-remainder sequences from drowning in rational bookkeeping.
    fn scalar_primitive(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut denom_lcm = BigInt::one();
        for (_, c) in &self.terms {
            denom_lcm = denom_lcm.lcm(c.re().denom());
            denom_lcm = denom_lcm.lcm(c.im().denom());
        }
        let mut numer_gcd = BigInt::zero();
        for (_, c) in &self.terms {
            for part in [c.re(), c.im()] {
                if !part.is_zero() {
                    let scaled = part.numer() * (&denom_lcm / part.denom());
                    numer_gcd = numer_gcd.gcd(&scaled);
                }
            }
        }
        let factor = GaussRat::new(BigRational::new(denom_lcm, numer_gcd), BigRational::zero());
        self.scale(&factor)
    }

    // ---- univariate view on one variable, coefficients polynomial in the rest ----

    /// Coefficient of `var^k` as a polynomial in the remaining variables
    /// (same variable list, `var` unused in the result).
    fn coeff_of(&self, var: usize, k: u32) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if m[var] == k {
                let mut m2 = m.clone();
                m2[var] = 0;
                out.insert_term(m2, c.clone());
            }
        }
        out
    }

    fn mul_var_pow(&self, var: usize, k: u32) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            m2[var] += k;
            out.insert_term(m2, c.clone());
        }
        out
    }

    /// Content with respect to `var`: gcd of the `var`-coefficients, kept
    /// scalar-primitive.
    fn content_in(&self, var: usize) -> Poly {
        let mut g = Poly::zero(self.nvars);
        for k in 0..=self.degree_in(var) {
            let c = self.coeff_of(var, k);
            if !c.is_zero() {
                g = gcd_primitive(&g, &c);
                if g.is_constant() {
                    break;
                }
            }
        }
        g
    }

    /// Exact division; `None` if `self` is not a multiple of `divisor`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        assert_eq!(self.nvars, divisor.nvars);
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let (dm, dc) = divisor.leading().expect("nonzero");
        let dc_inv = dc.inv().expect("nonzero leading coefficient");
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.nvars);
        while let Some((rm, rc)) = rem.leading() {
            let mut qm = Vec::with_capacity(self.nvars);
            for (a, b) in rm.iter().zip(dm.iter()) {
                if a < b {
                    return None;
                }
                qm.push(a - b);
            }
            let qc = rc * &dc_inv;
            let t = Poly::monomial(self.nvars, qm, qc);
            rem = &rem - &(&t * divisor);
            quot = &quot + &t;
        }
        Some(quot)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m: Monomial = ma.iter().zip(mb.iter()).map(|(a, b)| a + b).collect();
                out.insert_term(m, ca * cb);
            }
        }
        out
    }
}

/// Pseudo-remainder of `a` by `b` in the variable `var`, up to a scalar:
/// coefficients are renormalized each step to keep digit counts flat, which
/// is harmless inside a primitive remainder sequence.
fn pseudo_rem(a: &Poly, b: &Poly, var: usize) -> Poly {
    let db = b.degree_in(var);
    let lb = b.coeff_of(var, db);
    let mut r = a.clone();
    while !r.is_zero() {
        let dr = r.degree_in(var);
        if dr < db {
            break;
        }
        let lr = r.coeff_of(var, dr);
        // lb * r - lr * x^(dr-db) * b  kills the leading var-term of r.
        r = (&(&lb * &r) - &(&lr.mul_var_pow(var, dr - db) * b)).scalar_primitive();
    }
    r
}

/// GCD up to a scalar, kept scalar-primitive throughout the remainder
/// sequence so intermediate coefficients stay (near-)integer.
fn gcd_primitive(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.scalar_primitive();
    }
    if b.is_zero() {
        return a.scalar_primitive();
    }
    let var = match a.vars_used().into_iter().chain(b.vars_used()).min() {
        None => return Poly::one(a.nvars()), // both nonzero constants
        Some(v) => v,
    };
    // Treat both as univariate in `var` over the remaining variables.
    if !a.uses_var(var) {
        // `a` is a "constant" in var; gcd divides a and the content of b.
        return gcd_primitive(a, &b.content_in(var));
    }
    if !b.uses_var(var) {
        return gcd_primitive(&a.content_in(var), b);
    }
    let ca = a.content_in(var);
    let cb = b.content_in(var);
    let cont_gcd = gcd_primitive(&ca, &cb);
    let mut f = a.div_exact(&ca).expect("content divides").scalar_primitive();
    let mut g = b.div_exact(&cb).expect("content divides").scalar_primitive();
    if f.degree_in(var) < g.degree_in(var) {
        std::mem::swap(&mut f, &mut g);
    }
    while !g.is_zero() {
        let r = pseudo_rem(&f, &g, var);
        f = g;
        g = if r.is_zero() {
            r
        } else {
            let c = r.content_in(var);
            r.div_exact(&c).expect("content divides").scalar_primitive()
        };
    }
    (&cont_gcd * &f).scalar_primitive()
}

/// GCD in `Q(i)[x_1..x_n]`, normalized so the lex-leading coefficient is 1.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    assert_eq!(a.nvars(), b.nvars());
    gcd_primitive(a, b).monic()
}
