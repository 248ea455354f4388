//! Closed-form phase-space kernels: the Groenewold kernel of the star
//! product, its weak hbar -> 0 limit against Gaussian test functions
//! (Fresnel-Gaussian factors in closed form), and the twisted-convolution
//! kernel obtained from the delta-type deformation.

use crate::grid::{PhasePoint, QuadGrid};
use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum KernelError {
    #[error("hbar must be positive, got {0}")]
    NonpositiveHbar(f64),
    #[error("width must be positive, got {0}")]
    NonpositiveWidth(f64),
    #[error("grid too coarse: refinement estimate {estimate:e} above tolerance {tolerance:e}")]
    GridTooCoarse { estimate: f64, tolerance: f64 },
}

/// Twice the signed area of the phase-space triangle `(x1, x2, x3)`:
/// `q1 p2 - q2 p1 + q2 p3 - q3 p2 + q3 p1 - q1 p3`.
pub fn triangle_area_form(x1: PhasePoint, x2: PhasePoint, x3: PhasePoint) -> f64 {
    x1.q * x2.p - x2.q * x1.p + x2.q * x3.p - x3.q * x2.p + x3.q * x1.p - x1.q * x3.p
}

/// The Groenewold kernel
/// `(1 / pi^2 hbar^2) exp((2i/hbar)[q1 p2 - q2 p1 + q2 p3 - q3 p2 + q3 p1 - q1 p3])`.
pub fn groenewold_eval(
    x1: PhasePoint,
    x2: PhasePoint,
    x3: PhasePoint,
    hbar: f64,
) -> Result<Complex64, KernelError> {
    if !(hbar > 0.0) {
        return Err(KernelError::NonpositiveHbar(hbar));
    }
    let phase = 2.0 / hbar * triangle_area_form(x1, x2, x3);
    let prefactor = 1.0 / (PI * PI * hbar * hbar);
    Ok(Complex64::from_polar(prefactor, phase))
}

/// One Fresnel-Gaussian factor: the closed form of
/// `(1/sqrt(sign * i pi hbar)) * integral exp(sign * i x^2 / hbar) exp(-x^2 / width^2) dx`,
/// which is `(1 + sign * i hbar / width^2)^(-1/2)`.
pub fn fresnel_factor(sign: f64, hbar: f64, width: f64) -> Result<Complex64, KernelError> {
    if !(hbar > 0.0) {
        return Err(KernelError::NonpositiveHbar(hbar));
    }
    if !(width > 0.0) {
        return Err(KernelError::NonpositiveWidth(width));
    }
    let z = Complex64::new(1.0, sign * hbar / (width * width));
    Ok(1.0 / z.sqrt())
}

/// The rotated Groenewold kernel integrated against the product Gaussian
/// test function `prod_j exp(-x_j^2 / width^2)`: the product of the four
/// closed-form factor integrals with signs (+, -, -, +).
pub fn fresnel_weak_limit(hbar: f64, width: f64) -> Result<Complex64, KernelError> {
    let signs = [1.0, -1.0, -1.0, 1.0];
    let mut acc = Complex64::new(1.0, 0.0);
    for s in signs {
        acc *= fresnel_factor(s, hbar, width)?;
    }
    Ok(acc)
}

/// The twisted convolution carried by the delta-deformed kernel
/// `S1 = (1/pi^2) delta(q1 + q2 - q3) delta(p1 + p2 - p3) e^{2i(q3 p1 - p3 q1)}`:
/// with the deltas resolved analytically,
/// `(f x g)(x3) = (1/pi^2) integral f(q1, p1) g(q3 - q1, p3 - p1) e^{2i(q3 p1 - p3 q1)} dq1 dp1`.
///
/// `f` and `g` are symbol evaluators of rapidly decaying (Gaussian-class)
/// symbols whose support the grid box must cover; the error is estimated by
/// the nested-coarse-grid comparison.
pub fn twisted_convolution_s1(
    f: impl Fn(f64, f64) -> Complex64,
    g: impl Fn(f64, f64) -> Complex64,
    x3: PhasePoint,
    grid: &QuadGrid,
    tolerance: f64,
) -> Result<Complex64, KernelError> {
    let (value, estimate) = grid.integrate_with_estimate(|q1, p1| {
        let phase = 2.0 * (x3.q * p1 - x3.p * q1);
        f(q1, p1) * g(x3.q - q1, x3.p - p1) * Complex64::from_polar(1.0, phase)
    });
    if estimate > tolerance {
        return Err(KernelError::GridTooCoarse { estimate, tolerance });
    }
    Ok(value / (PI * PI))
}

/// The Gaussian-deformed kernel (unit hbar):
/// `S2 = (1/pi) exp[-(q1+q2-q3)^2 - (p1+p2-p3)^2] G(x1, x2, x3)`,
/// the closed form produced by deforming the star product with
/// `kappa_2 = exp(-q^2 - p^2)/pi`.
pub fn s2_kernel(x1: PhasePoint, x2: PhasePoint, x3: PhasePoint) -> Complex64 {
    let g = groenewold_eval(x1, x2, x3, 1.0).expect("hbar = 1");
    let dq = x1.q + x2.q - x3.q;
    let dp = x1.p + x2.p - x3.p;
    g * (-dq * dq - dp * dp).exp() / PI
}
