use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use super::grid::{check_same_lattice, GridSpec, SnrPdfGrid};
use super::pdf::{downlink_bit_pdf, MAX_CONSTRUCTION_DRIFT};
use super::scenario::LinkScenario;
use crate::error::{Error, Result};

/// Below this many multiply-adds the convolution is summed directly.
const DIRECT_LIMIT: usize = 1 << 22;

/// Density of the sum of two independent SNRs.
///
/// Both grids must start at zero with the same step `h`. Each output sample is
/// the trapezoidal rule applied to `int_0^g a(t) b(g - t) dt`, i.e. the
/// discrete linear convolution times `h` with half weight on the two end
/// terms. Without the end correction densities that jump at the origin (the
/// exponential) pick up an O(h) error per convolution. The result covers
/// `[0, a.max + b.max]` and is renormalized to unit mass.
pub fn convolve_pdfs(a: &SnrPdfGrid, b: &SnrPdfGrid) -> Result<SnrPdfGrid> {
    check_same_lattice(a, b)?;
    if a.gamma_min() != 0.0 || b.gamma_min() != 0.0 {
        return Err(Error::InvalidGrid("convolution needs grids starting at 0".into()));
    }
    let h = a.step();
    let (av, bv) = (a.values(), b.values());
    let n = av.len() + bv.len() - 1;

    let mut out = if av.len() * bv.len() <= DIRECT_LIMIT {
        direct(av, bv)
    } else {
        fft(av, bv)
    };
    for (k, c) in out.iter_mut().enumerate() {
        let end = av[0] * bv.get(k).copied().unwrap_or(0.0) + bv[0] * av.get(k).copied().unwrap_or(0.0);
        *c = (h * (*c - 0.5 * end)).max(0.0);
    }
    SnrPdfGrid::from_values(GridSpec::from_step(0.0, h, n)?, out)?.normalized(MAX_CONSTRUCTION_DRIFT)
}

fn direct(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for (o, &y) in out[i..].iter_mut().zip(b) {
            *o += x * y;
        }
    }
    out
}

fn fft(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len() + b.len() - 1;
    let size = n.next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(size);
    let inverse = planner.plan_fft_inverse(size);

    let pad = |v: &[f64]| {
        let mut buf = vec![Complex::new(0.0, 0.0); size];
        for (z, &x) in buf.iter_mut().zip(v) {
            z.re = x;
        }
        buf
    };
    let mut fa = pad(a);
    let mut fb = pad(b);
    forward.process(&mut fa);
    forward.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= *y;
    }
    inverse.process(&mut fa);

    let scale = 1.0 / size as f64;
    let peak_a = a.iter().copied().fold(0.0, f64::max);
    let peak_b = b.iter().copied().fold(0.0, f64::max);
    // Round-off floor of the transform; anything smaller is noise.
    let floor = 1e-13 * peak_a * peak_b * a.len().min(b.len()) as f64;
    fa[..n]
        .iter()
        .map(|z| {
            let v = z.re * scale;
            if v.abs() < floor {
                0.0
            } else {
                v
            }
        })
        .collect()
}

/// `d`-fold self-convolution by repeated squaring.
pub fn self_convolve(pdf: &SnrPdfGrid, d: u32) -> Result<SnrPdfGrid> {
    if d == 0 {
        return Err(Error::Domain("number of combined bits must be at least 1".into()));
    }
    let mut result: Option<SnrPdfGrid> = None;
    let mut power = pdf.clone();
    let mut rest = d;
    loop {
        if rest & 1 == 1 {
            result = Some(match result {
                None => power.clone(),
                Some(r) => convolve_pdfs(&r, &power)?,
            });
        }
        rest >>= 1;
        if rest == 0 {
            break;
        }
        power = convolve_pdfs(&power, &power)?;
    }
    Ok(result.expect("d >= 1"))
}

/// Density of the SNR of `d` combined downlink coded bits: the per-bit
/// density sampled on `per_bit_grid` (which must start at 0) convolved with
/// itself `d` times. The support ends at `d * per_bit_grid.max()`.
pub fn downlink_combined_pdf(
    scenario: &LinkScenario,
    d: u32,
    per_bit_grid: GridSpec,
) -> Result<SnrPdfGrid> {
    let per_bit = downlink_bit_pdf(scenario, per_bit_grid)?;
    self_convolve(&per_bit, d)
}
