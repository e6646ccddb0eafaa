use crate::error::{Error, Result};

/// Uniform grid `min, min + step, ..., max` with inclusive endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    min: f64,
    max: f64,
    points: usize,
}

impl GridSpec {
    pub fn new(min: f64, max: f64, points: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) || min < 0.0 {
            return Err(Error::InvalidGrid(format!(
                "bounds must be finite with min >= 0, got [{min}, {max}]"
            )));
        }
        if min >= max {
            return Err(Error::InvalidGrid(format!("min {min} is not below max {max}")));
        }
        if points < 2 {
            return Err(Error::InvalidGrid("a grid needs at least 2 points".into()));
        }
        Ok(Self { min, max, points })
    }

    /// Grid starting at `min` with `points` samples spaced `step` apart.
    pub fn from_step(min: f64, step: f64, points: usize) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidGrid(format!("step must be positive, got {step}")));
        }
        Self::new(min, min + step * (points.max(2) - 1) as f64, points)
    }

    /// Default grid for an uplink density of `d` combined bits with average
    /// per-bit SNR `avg`: step `avg/200`, covering the Erlang mean plus 15
    /// standard deviations (never more than `30 d avg`).
    pub fn uplink_default(avg: f64, d: u32) -> Result<Self> {
        let d = f64::from(d);
        let span = (30.0 * d).min(d + 15.0 * d.sqrt() + 30.0);
        let intervals = (span * 200.0).round() as usize;
        Self::from_step(0.0, avg / 200.0, intervals + 1)
    }

    /// Default per-bit downlink grid: `[0, gamma_max]` in 400 intervals.
    pub fn downlink_default(gamma_max: f64) -> Result<Self> {
        Self::new(0.0, gamma_max, 401)
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.points - 1) as f64
    }

    pub fn gamma(&self, i: usize) -> f64 {
        if i + 1 == self.points {
            self.max
        } else {
            self.min + i as f64 * self.step()
        }
    }

    pub fn gammas(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.points).map(move |i| self.gamma(i))
    }
}

/// A probability density sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SnrPdfGrid {
    grid: GridSpec,
    values: Vec<f64>,
}

impl SnrPdfGrid {
    /// Wraps raw samples. Values must be finite and nonnegative; no
    /// normalization is applied.
    pub fn from_values(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.points() {
            return Err(Error::InvalidGrid(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.points()
            )));
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::InvalidGrid(format!("value {v} at index {i}")));
        }
        Ok(Self { grid, values })
    }

    /// Samples `density` on the grid and corrects its trapezoidal mass to 1.
    /// Fails if the mass drifts by more than `tolerance` before correction.
    pub fn sample<F: Fn(f64) -> f64>(grid: GridSpec, tolerance: f64, density: F) -> Result<Self> {
        let values = grid.gammas().map(density).collect();
        Self::from_values(grid, values)?.normalized(tolerance)
    }

    /// Discrete point mass at `gamma0`, which must be a grid point.
    pub fn point_mass(grid: GridSpec, gamma0: f64) -> Result<Self> {
        let h = grid.step();
        let pos = (gamma0 - grid.min()) / h;
        let idx = pos.round();
        if idx < 0.0 || idx as usize >= grid.points() || (pos - idx).abs() > 1e-6 {
            return Err(Error::InvalidGrid(format!(
                "point mass at {gamma0} is not on the grid"
            )));
        }
        let idx = idx as usize;
        let mut values = vec![0.0; grid.points()];
        values[idx] = if idx == 0 || idx + 1 == grid.points() {
            2.0 / h
        } else {
            1.0 / h
        };
        Self::from_values(grid, values)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn gamma_min(&self) -> f64 {
        self.grid.min()
    }

    pub fn gamma_max(&self) -> f64 {
        self.grid.max()
    }

    pub fn step(&self) -> f64 {
        self.grid.step()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn gamma(&self, i: usize) -> f64 {
        self.grid.gamma(i)
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn peak(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Grid abscissa of the largest sample.
    pub fn mode(&self) -> f64 {
        let (idx, _) = self
            .values
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        self.gamma(idx)
    }

    /// Trapezoidal integral of `g(gamma) * f(gamma)` over the grid.
    pub fn integrate_with<G: Fn(f64) -> f64>(&self, g: G) -> f64 {
        trapezoid(self.step(), self.values.iter().enumerate().map(|(i, &v)| {
            if v == 0.0 {
                0.0
            } else {
                v * g(self.gamma(i))
            }
        }))
    }

    pub fn integral(&self) -> f64 {
        trapezoid(self.step(), self.values.iter().copied())
    }

    pub fn mean(&self) -> f64 {
        self.integrate_with(|g| g) / self.integral()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.integrate_with(|g| (g - m) * (g - m)) / self.integral()
    }

    /// Rescales to unit trapezoidal mass, failing if the mass was off by
    /// `tolerance` or more.
    pub fn normalized(mut self, tolerance: f64) -> Result<Self> {
        let integral = self.integral();
        if !((integral - 1.0).abs() < tolerance) {
            return Err(Error::NormalizationDrift {
                integral,
                tolerance,
            });
        }
        self.values.iter_mut().for_each(|v| *v /= integral);
        Ok(self)
    }

    /// Piecewise-linear interpolation; zero outside the grid.
    pub fn interpolate(&self, gamma: f64) -> f64 {
        let pos = (gamma - self.gamma_min()) / self.step();
        if !(pos >= 0.0) || pos > (self.len() - 1) as f64 {
            return 0.0;
        }
        let i = (pos.floor() as usize).min(self.len() - 2);
        let t = pos - i as f64;
        self.values[i] * (1.0 - t) + self.values[i + 1] * t
    }

    /// Distribution function of the piecewise-linear density.
    pub fn cdf(&self) -> GridCdf<'_> {
        let h = self.step();
        let mut cumulative = Vec::with_capacity(self.len());
        let mut acc = 0.0;
        cumulative.push(0.0);
        for w in self.values.windows(2) {
            acc += 0.5 * h * (w[0] + w[1]);
            cumulative.push(acc);
        }
        let total = acc;
        GridCdf {
            pdf: self,
            cumulative,
            total,
        }
    }

    /// Largest pointwise difference to a density on the same lattice (same
    /// origin and step). Samples beyond the shorter grid count as zero.
    pub fn sup_distance(&self, other: &SnrPdfGrid) -> Result<f64> {
        check_same_lattice(self, other)?;
        let n = self.len().max(other.len());
        Ok((0..n)
            .map(|i| {
                let a = self.values.get(i).copied().unwrap_or(0.0);
                let b = other.values.get(i).copied().unwrap_or(0.0);
                (a - b).abs()
            })
            .fold(0.0, f64::max))
    }
}

pub struct GridCdf<'a> {
    pdf: &'a SnrPdfGrid,
    cumulative: Vec<f64>,
    total: f64,
}

impl GridCdf<'_> {
    pub fn eval(&self, gamma: f64) -> f64 {
        let pdf = self.pdf;
        let h = pdf.step();
        let pos = (gamma - pdf.gamma_min()) / h;
        if !(pos > 0.0) {
            return 0.0;
        }
        if pos >= (pdf.len() - 1) as f64 {
            return 1.0;
        }
        let i = pos.floor() as usize;
        let dx = gamma - pdf.gamma(i);
        let partial = dx * (pdf.values[i] + 0.5 * (pdf.interpolate(gamma) - pdf.values[i]));
        ((self.cumulative[i] + partial) / self.total).clamp(0.0, 1.0)
    }
}

pub(crate) fn check_same_lattice(a: &SnrPdfGrid, b: &SnrPdfGrid) -> Result<()> {
    let (ha, hb) = (a.step(), b.step());
    if (ha - hb).abs() > 1e-9 * ha.max(hb) {
        return Err(Error::StepMismatch(ha, hb));
    }
    if (a.gamma_min() - b.gamma_min()).abs() > 1e-9 * ha {
        return Err(Error::InvalidGrid(format!(
            "grids start at {} and {}",
            a.gamma_min(),
            b.gamma_min()
        )));
    }
    Ok(())
}

pub(crate) fn trapezoid<I: Iterator<Item = f64>>(step: f64, values: I) -> f64 {
    let mut sum = 0.0;
    let mut first = None;
    let mut last = 0.0;
    for v in values {
        if first.is_none() {
            first = Some(v);
        }
        sum += v;
        last = v;
    }
    match first {
        Some(f) => step * (sum - 0.5 * (f + last)),
        None => 0.0,
    }
}
