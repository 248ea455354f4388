//! Parameterized families of products: conjugation by an invertible family
//! T_lambda, contraction limits at critical parameter values, K-deformed
//! products and their iterates.

use crate::expr::{CoeffError, CoeffExpr, Limit, Params};
use crate::gauss::GaussRat;
use crate::tensor::{check_associativity, AlgebraElement, AssociativityReport, StructureTensor};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum ContractionError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("transform family is singular: determinant is identically zero")]
    SingularFamily,
    #[error("limit does not exist; divergent entries at {entries:?}")]
    LimitDoesNotExist { entries: Vec<[usize; 3]> },
    #[error("parameter lists differ; promote the operands to a common list first")]
    ParamMismatch,
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Algebra(#[from] crate::tensor::AlgebraError),
}

/// A one-parameter family of linear transformations, stored as a matrix of
/// rational functions that must be invertible over the function field.
#[derive(Clone, PartialEq, Debug)]
pub struct TransformFamily {
    dim: usize,
    param: String,
    params: Params,
    entries: Vec<CoeffExpr>, // row major, dim x dim
}

impl TransformFamily {
    /// `entries` is row major; `param` is the contraction parameter and must
    /// be one of the declared names. Fails fast on a singular family.
    pub fn new(
        dim: usize,
        param: &str,
        params: Params,
        entries: Vec<CoeffExpr>,
    ) -> Result<Self, ContractionError> {
        assert_eq!(entries.len(), dim * dim);
        assert!(entries.iter().all(|e| e.params() == &params));
        if params.index_of(param).is_none() {
            return Err(CoeffError::UnknownParameter { name: param.to_string() }.into());
        }
        let t = TransformFamily { dim, param: param.to_string(), params, entries };
        // Invertibility over the rational-function field.
        t.inverse()?;
        Ok(t)
    }

    /// Diagonal family from expression entries.
    pub fn diagonal(
        param: &str,
        params: Params,
        diag: Vec<CoeffExpr>,
    ) -> Result<Self, ContractionError> {
        let dim = diag.len();
        let mut entries = vec![CoeffExpr::zero(params.clone()); dim * dim];
        for (k, d) in diag.into_iter().enumerate() {
            entries[k * dim + k] = d;
        }
        TransformFamily::new(dim, param, params, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn param(&self) -> &str {
        &self.param
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn get(&self, r: usize, c: usize) -> &CoeffExpr {
        &self.entries[r * self.dim + c]
    }

    /// Exact inverse over the rational-function field by Gauss-Jordan
    /// elimination; `SingularFamily` when the determinant vanishes
    /// identically.
    pub fn inverse(&self) -> Result<Vec<CoeffExpr>, ContractionError> {
        let d = self.dim;
        let mut w = self.entries.clone();
        let mut inv: Vec<CoeffExpr> = (0..d * d)
            .map(|k| {
                if k / d == k % d {
                    CoeffExpr::one(self.params.clone())
                } else {
                    CoeffExpr::zero(self.params.clone())
                }
            })
            .collect();
        for col in 0..d {
            let pivot = (col..d).find(|&r| !w[r * d + col].is_zero());
            let Some(pr) = pivot else {
                return Err(ContractionError::SingularFamily);
            };
            if pr != col {
                for c in 0..d {
                    w.swap(pr * d + c, col * d + c);
                    inv.swap(pr * d + c, col * d + c);
                }
            }
            let pinv = w[col * d + col].inv().map_err(|_| ContractionError::SingularFamily)?;
            for c in 0..d {
                w[col * d + c] = &w[col * d + c] * &pinv;
                inv[col * d + c] = &inv[col * d + c] * &pinv;
            }
            for r in 0..d {
                if r != col && !w[r * d + col].is_zero() {
                    let f = w[r * d + col].clone();
                    for c in 0..d {
                        w[r * d + c] = &w[r * d + c] - &(&f * &w[col * d + c]);
                        inv[r * d + c] = &inv[r * d + c] - &(&f * &inv[col * d + c]);
                    }
                }
            }
        }
        Ok(inv)
    }
}

/// Structure constants of the conjugated product
/// `u ._lambda v = T^{-1}(T u . T v)`, exact in the family parameter.
pub fn conjugate_family(
    c: &StructureTensor,
    t: &TransformFamily,
) -> Result<StructureTensor, ContractionError> {
    if t.dim() != c.dim() {
        return Err(ContractionError::DimensionMismatch { expected: c.dim(), got: t.dim() });
    }
    if c.params() != t.params() {
        return Err(ContractionError::ParamMismatch);
    }
    let d = c.dim();
    let tinv = t.inverse()?;
    // mid[j][k][cc] = sum_{a,b} T[a][j] T[b][k] C[a][b][cc]
    let zero = CoeffExpr::zero(c.params().clone());
    let mut mid = vec![zero.clone(); d * d * d];
    for j in 0..d {
        for a in 0..d {
            let taj = t.get(a, j);
            if taj.is_zero() {
                continue;
            }
            for k in 0..d {
                for b in 0..d {
                    let tbk = t.get(b, k);
                    if tbk.is_zero() {
                        continue;
                    }
                    let f = taj * tbk;
                    for cc in 0..d {
                        let cab = c.get(a, b, cc);
                        if !cab.is_zero() {
                            let i = (j * d + k) * d + cc;
                            mid[i] = &mid[i] + &(&f * cab);
                        }
                    }
                }
            }
        }
    }
    let mut out = StructureTensor::zero(d, c.basis().to_vec(), c.params().clone())?;
    for j in 0..d {
        for k in 0..d {
            for l in 0..d {
                let mut acc = zero.clone();
                for cc in 0..d {
                    let m = &mid[(j * d + k) * d + cc];
                    if !m.is_zero() {
                        acc = &acc + &(&tinv[l * d + cc] * m);
                    }
                }
                out.set(j, k, l, acc);
            }
        }
    }
    Ok(out)
}

/// A contracted tensor together with its freshly verified associativity
/// report; associativity of a contraction is never assumed.
#[derive(Clone, Debug)]
pub struct ContractionOutcome {
    pub tensor: StructureTensor,
    pub associativity: AssociativityReport,
}

/// Conjugates by the family and takes the entrywise limit at the critical
/// parameter value. The contraction parameter is removed from the result's
/// parameter list; all other parameters stay formal.
pub fn contract_limit(
    c: &StructureTensor,
    t: &TransformFamily,
    critical: &GaussRat,
) -> Result<ContractionOutcome, ContractionError> {
    let family = conjugate_family(c, t)?;
    let d = family.dim();
    let mut limited = StructureTensor::zero(d, family.basis().to_vec(), family.params().clone())?;
    let mut divergent = Vec::new();
    for (m, n, l, e) in family.entries() {
        match e.limit(t.param(), critical)? {
            Limit::Exists(v) => limited.set(m, n, l, v),
            Limit::DoesNotExist => divergent.push([m, n, l]),
        }
    }
    if !divergent.is_empty() {
        return Err(ContractionError::LimitDoesNotExist { entries: divergent });
    }
    let reduced_params = Params::new(
        family
            .params()
            .names()
            .iter()
            .filter(|n| n.as_str() != t.param())
            .cloned(),
    );
    let tensor = limited.restrict(&reduced_params)?;
    let associativity = check_associativity(&tensor);
    Ok(ContractionOutcome { tensor, associativity })
}

/// Structure constants of the K-deformed product `u ._K v = u . K . v`:
/// `C_K[m][n][j] = sum_{s,p} C[m][p][s] K_p C[s][n][j]`.
pub fn k_deform(
    c: &StructureTensor,
    k: &AlgebraElement,
) -> Result<StructureTensor, ContractionError> {
    if k.dim() != c.dim() {
        return Err(ContractionError::DimensionMismatch { expected: c.dim(), got: k.dim() });
    }
    if k.params() != c.params() {
        return Err(ContractionError::ParamMismatch);
    }
    let d = c.dim();
    let zero = CoeffExpr::zero(c.params().clone());
    // mk[m][s] = sum_p C[m][p][s] K_p  (coordinates of e_m . K)
    let mut mk = vec![zero.clone(); d * d];
    for m in 0..d {
        for p in 0..d {
            let kp = k.get(p);
            if kp.is_zero() {
                continue;
            }
            for s in 0..d {
                let cmps = c.get(m, p, s);
                if !cmps.is_zero() {
                    mk[m * d + s] = &mk[m * d + s] + &(cmps * kp);
                }
            }
        }
    }
    let mut out = StructureTensor::zero(d, c.basis().to_vec(), c.params().clone())?;
    for m in 0..d {
        for n in 0..d {
            for j in 0..d {
                let mut acc = zero.clone();
                for s in 0..d {
                    let f = &mk[m * d + s];
                    if !f.is_zero() {
                        let csnj = c.get(s, n, j);
                        if !csnj.is_zero() {
                            acc = &acc + &(f * csnj);
                        }
                    }
                }
                out.set(m, n, j, acc);
            }
        }
    }
    Ok(out)
}

/// Ordered deformation vectors K^(1), K^(2), ...
#[derive(Clone, Debug)]
pub struct DeformationSequence(pub Vec<AlgebraElement>);

/// Iterated deformation: S^(0) = C,
/// `S^(r)[m][n][j] = sum_{s,p} S^(r-1)[m][p][s] K^(r)_p S^(r-1)[s][n][j]`.
pub fn iterate_deform(
    c: &StructureTensor,
    seq: &DeformationSequence,
) -> Result<StructureTensor, ContractionError> {
    let mut acc = c.clone();
    for k in &seq.0 {
        acc = k_deform(&acc, k)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Params;
    use crate::gauss::GaussRat;
    use crate::matrix::GaussMat;
    use crate::tensor::{antisymmetrize, check_jacobi, constants_from_matrices, multiply};
    use std::collections::BTreeMap;

    fn pauli_matrices() -> Vec<GaussMat> {
        let i = GaussRat::i();
        let s0 = GaussMat::identity(2);
        let s1 = GaussMat::from_ints(2, 2, &[0, 1, 1, 0]);
        let mut s2 = GaussMat::zeros(2, 2);
        s2.set(0, 1, -&i);
        s2.set(1, 0, i.clone());
        let s3 = GaussMat::from_ints(2, 2, &[1, 0, 0, -1]);
        vec![s0, s1, s2, s3]
    }

    fn lambda_params() -> Params {
        Params::new(["lambda"])
    }

    /// u(2) tensor (Pauli convention) over the `lambda` parameter ring.
    fn u2_tensor() -> StructureTensor {
        let t = constants_from_matrices(&pauli_matrices()).unwrap();
        t.promote(&lambda_params()).unwrap()
    }

    fn t_u2() -> TransformFamily {
        let p = lambda_params();
        let one = CoeffExpr::one(p.clone());
        let lam = CoeffExpr::parameter(p.clone(), "lambda").unwrap();
        TransformFamily::diagonal("lambda", p, vec![one, lam.clone(), lam.clone(), lam]).unwrap()
    }

    #[test]
    fn conjugation_by_identity_is_identity() {
        let c = u2_tensor();
        let p = lambda_params();
        let one = CoeffExpr::one(p.clone());
        let t = TransformFamily::diagonal("lambda", p, vec![one.clone(); 4]).unwrap();
        assert_eq!(conjugate_family(&c, &t).unwrap(), c);
    }

    #[test]
    fn conjugation_by_scalar_family_scales() {
        // T = lambda * I gives C(lambda) = lambda * C: bilinearity vs linearity.
        let c = u2_tensor();
        let p = lambda_params();
        let lam = CoeffExpr::parameter(p.clone(), "lambda").unwrap();
        let t = TransformFamily::diagonal("lambda", p, vec![lam.clone(); 4]).unwrap();
        let got = conjugate_family(&c, &t).unwrap();
        for (m, n, l, e) in got.entries() {
            assert_eq!(*e, &lam * c.get(m, n, l));
        }
    }

    #[test]
    fn u2_family_matches_hand_conjugation() {
        // e_j ._lambda e_k = lambda^2 delta_jk e0 + lambda i eps_jkl e_l,
        // e0 row and column unchanged.
        let c = u2_tensor();
        let fam = conjugate_family(&c, &t_u2()).unwrap();
        let p = lambda_params();
        let lam = CoeffExpr::parameter(p.clone(), "lambda").unwrap();
        for j in 1..4 {
            for k in 1..4 {
                let want0 = if j == k { &lam * &lam } else { CoeffExpr::zero(p.clone()) };
                assert_eq!(*fam.get(j, k, 0), want0);
                for l in 1..4 {
                    assert_eq!(*fam.get(j, k, l), &lam * c.get(j, k, l));
                }
            }
            assert_eq!(*fam.get(0, j, j), CoeffExpr::one(p.clone()));
            assert_eq!(*fam.get(j, 0, j), CoeffExpr::one(p.clone()));
        }
        // Cross-check by exact evaluation at lambda = 2 against a direct
        // matrix computation in the scaled basis {sigma0, 2 sigma_j}.
        let mats = pauli_matrices();
        let scaled: Vec<GaussMat> = mats
            .iter()
            .enumerate()
            .map(|(k, m)| if k == 0 { m.clone() } else { m.scale(&GaussRat::from_int(2)) })
            .collect();
        let direct = constants_from_matrices(&scaled).unwrap();
        let mut at = BTreeMap::new();
        at.insert("lambda".to_string(), GaussRat::from_int(2));
        for (m, n, l, e) in fam.entries() {
            assert_eq!(e.eval(&at).unwrap(), direct.get(m, n, l).as_constant().unwrap());
        }
    }

    #[test]
    fn u2_contracts_to_commutative_algebra() {
        let c = u2_tensor();
        let out = contract_limit(&c, &t_u2(), &GaussRat::zero()).unwrap();
        assert!(out.associativity.holds);
        let t = &out.tensor;
        assert!(t.params().is_empty());
        for j in 1..4 {
            for k in 1..4 {
                for l in 0..4 {
                    assert!(t.get(j, k, l).is_zero(), "e{j} . e{k} must vanish");
                }
            }
            assert_eq!(t.get(0, j, j).as_constant().unwrap(), GaussRat::one());
            assert_eq!(t.get(j, 0, j).as_constant().unwrap(), GaussRat::one());
        }
        assert_eq!(t.get(0, 0, 0).as_constant().unwrap(), GaussRat::one());
    }

    #[test]
    fn divergent_contraction_reports_entry() {
        // 2-dim algebra with e1 . e1 = e2 under T = diag(1, lambda): the
        // (0,0,1) entry scales as 1/lambda.
        let p = lambda_params();
        let mut c = StructureTensor::zero(2, vec!["e1".into(), "e2".into()], p.clone()).unwrap();
        c.set(0, 0, 1, CoeffExpr::one(p.clone()));
        let one = CoeffExpr::one(p.clone());
        let lam = CoeffExpr::parameter(p.clone(), "lambda").unwrap();
        let t = TransformFamily::diagonal("lambda", p, vec![one, lam]).unwrap();
        match contract_limit(&c, &t, &GaussRat::zero()) {
            Err(ContractionError::LimitDoesNotExist { entries }) => {
                assert_eq!(entries, vec![[0, 0, 1]]);
            }
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn contraction_at_regular_value_agrees_with_eval() {
        // With T invertible at the critical value there is no actual
        // contraction: the limit equals pointwise evaluation.
        let c = u2_tensor();
        let t = t_u2();
        let out = contract_limit(&c, &t, &GaussRat::from_int(3)).unwrap();
        let fam = conjugate_family(&c, &t).unwrap();
        let mut at = BTreeMap::new();
        at.insert("lambda".to_string(), GaussRat::from_int(3));
        for (m, n, l, e) in fam.entries() {
            assert_eq!(out.tensor.get(m, n, l).as_constant().unwrap(), e.eval(&at).unwrap());
        }
    }

    #[test]
    fn singular_family_rejected() {
        let p = lambda_params();
        let lam = CoeffExpr::parameter(p.clone(), "lambda").unwrap();
        // Rank-1 matrix [[lambda, lambda], [lambda, lambda]].
        let err = TransformFamily::new(
            2,
            "lambda",
            p,
            vec![lam.clone(), lam.clone(), lam.clone(), lam],
        )
        .unwrap_err();
        assert_eq!(err, ContractionError::SingularFamily);
    }

    #[test]
    fn k_unit_is_neutral() {
        // K = e0 (the unit of u(2)) leaves the product unchanged.
        let c = u2_tensor();
        let k = AlgebraElement::basis(lambda_params(), 4, 0);
        assert_eq!(k_deform(&c, &k).unwrap(), c);
    }

    #[test]
    fn k_deform_matches_matrix_route() {
        // e_m ._K e_n must equal the coordinates of sigma_m K sigma_n.
        let c = u2_tensor().restrict(&Params::empty()).unwrap();
        let p = Params::empty();
        let k = AlgebraElement::from_ints(p.clone(), &[3, -1, 2, 5]);
        let ck = k_deform(&c, &k).unwrap();
        assert!(check_associativity(&ck).holds);
        let mats = pauli_matrices();
        let mut kmat = GaussMat::zeros(2, 2);
        for (p_, coef) in [(0usize, 3i64), (1, -1), (2, 2), (3, 5)] {
            kmat = &kmat + &mats[p_].scale(&GaussRat::from_int(coef));
        }
        for m in 0..4 {
            for n in 0..4 {
                let want = &(&mats[m] * &kmat) * &mats[n];
                let coords = multiply(
                    &ck,
                    &AlgebraElement::basis(p.clone(), 4, m),
                    &AlgebraElement::basis(p.clone(), 4, n),
                )
                .unwrap();
                let mut recon = GaussMat::zeros(2, 2);
                for l in 0..4 {
                    recon = &recon + &mats[l].scale(&coords.get(l).as_constant().unwrap());
                }
                assert_eq!(recon, want);
            }
        }
    }

    #[test]
    fn iterate_matches_nested_deform() {
        let c = u2_tensor().restrict(&Params::empty()).unwrap();
        let p = Params::empty();
        let k1 = AlgebraElement::from_ints(p.clone(), &[1, 2, 0, -1]);
        let k2 = AlgebraElement::from_ints(p.clone(), &[0, 1, 1, 3]);
        let seq = DeformationSequence(vec![k1.clone(), k2.clone()]);
        let s2 = iterate_deform(&c, &seq).unwrap();
        let nested = k_deform(&k_deform(&c, &k1).unwrap(), &k2).unwrap();
        assert_eq!(s2, nested);
        assert!(check_associativity(&s2).holds);
        assert!(check_jacobi(&antisymmetrize(&s2)).unwrap().holds);
        // Empty sequence is the identity.
        assert_eq!(iterate_deform(&c, &DeformationSequence(vec![])).unwrap(), c);
        // Singleton equals a single k_deform.
        assert_eq!(
            iterate_deform(&c, &DeformationSequence(vec![k1.clone()])).unwrap(),
            k_deform(&c, &k1).unwrap()
        );
    }

    #[test]
    fn parameterized_k_limit_after_deform() {
        // Deform with K = e0 + mu e1, then send mu -> 0: recovers C.
        let p = Params::new(["mu"]);
        let c = u2_tensor().restrict(&Params::empty()).unwrap().promote(&p).unwrap();
        let mu = CoeffExpr::parameter(p.clone(), "mu").unwrap();
        let mut coords = vec![CoeffExpr::zero(p.clone()); 4];
        coords[0] = CoeffExpr::one(p.clone());
        coords[1] = mu;
        let k = AlgebraElement::new(p.clone(), coords);
        let ck = k_deform(&c, &k).unwrap();
        for (m, n, l, e) in ck.entries() {
            match e.limit("mu", &GaussRat::zero()).unwrap() {
                Limit::Exists(v) => assert_eq!(v, *c.get(m, n, l)),
                Limit::DoesNotExist => panic!("polynomial entries cannot diverge"),
            }
        }
    }

    #[test]
    fn gauge_redundancy_of_contraction() {
        // S = cyclic permutation e1 -> e2 -> e3 -> e1 is a u(2) automorphism;
        // T_lambda and T_lambda . S give the same contraction.
        let c = u2_tensor();
        let p = lambda_params();
        let t = t_u2();
        let mut s_entries = vec![CoeffExpr::zero(p.clone()); 16];
        s_entries[0] = CoeffExpr::one(p.clone()); // e0 -> e0
        // Columns are images: S(e1) = e2, S(e2) = e3, S(e3) = e1.
        s_entries[2 * 4 + 1] = CoeffExpr::one(p.clone());
        s_entries[3 * 4 + 2] = CoeffExpr::one(p.clone());
        s_entries[4 + 3] = CoeffExpr::one(p.clone());
        let mut ts = vec![CoeffExpr::zero(p.clone()); 16];
        for r in 0..4 {
            for cc in 0..4 {
                let mut acc = CoeffExpr::zero(p.clone());
                for k in 0..4 {
                    acc = &acc + &(t.get(r, k) * &s_entries[k * 4 + cc]);
                }
                ts[r * 4 + cc] = acc;
            }
        }
        let tprime = TransformFamily::new(4, "lambda", p, ts).unwrap();
        let a = contract_limit(&c, &t, &GaussRat::zero()).unwrap();
        let b = contract_limit(&c, &tprime, &GaussRat::zero()).unwrap();
        assert_eq!(a.tensor, b.tensor);
    }
}
