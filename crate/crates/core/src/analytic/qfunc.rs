use std::f64::consts::SQRT_2;

use super::grid::SnrPdfGrid;

/// Upper tail of the standard Gaussian, `Q(x) = P(N(0,1) > x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

/// How the fading average of the conditional error probability is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PepMethod {
    /// Product integration: the density is taken as piecewise linear between
    /// grid points and each piece is integrated against `Q(sqrt(2 g))` by
    /// Gauss-Legendre in `s = sqrt(g)`, where the integrand is smooth. A plain
    /// trapezoidal rule loses accuracy to the square-root cusp at `g = 0`.
    #[default]
    Quadrature,
}

/// Five-point Gauss-Legendre nodes and weights on `[-1, 1]`.
const GL_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

/// `int_a^b (fa (b - g) + fb (g - a)) / (b - a) * Q(sqrt(2 g)) dg` for `0 <= a < b`.
fn linear_piece(a: f64, b: f64, fa: f64, fb: f64) -> f64 {
    let (sa, sb) = (a.sqrt(), b.sqrt());
    let (mid, half) = (0.5 * (sa + sb), 0.5 * (sb - sa));
    let h = b - a;
    GL_NODES
        .iter()
        .zip(GL_WEIGHTS)
        .map(|(&x, w)| {
            let s = mid + half * x;
            let g = s * s;
            let f = (fa * (b - g) + fb * (g - a)) / h;
            w * f * q_function(SQRT_2 * s) * 2.0 * s
        })
        .sum::<f64>()
        * half
}

/// Error probability `int f(g) Q(sqrt(2 g)) dg` averaged over the SNR density,
/// clamped to `[0, 1/2]`.
pub fn pairwise_error_prob(pdf: &SnrPdfGrid, method: PepMethod) -> f64 {
    match method {
        PepMethod::Quadrature => {
            let v = pdf.values();
            (1..v.len())
                .filter(|&i| v[i - 1] != 0.0 || v[i] != 0.0)
                .map(|i| {
                    let (a, b) = (pdf.gamma(i - 1).max(0.0), pdf.gamma(i).max(0.0));
                    if b > a {
                        linear_piece(a, b, v[i - 1], v[i])
                    } else {
                        0.0
                    }
                })
                .sum::<f64>()
                .clamp(0.0, 0.5)
        }
    }
}
