use std::fmt;

use cdmalab_core::analytic::{avg_coded_snr, DownlinkBitModel};
use cdmalab_core::montecarlo::{
    estimate_ber, estimate_snr_pdf, measure_interference_variance, support_edge, BerEstimate,
};
use cdmalab_core::{
    downlink_bit_pdf, uplink_bit_pdf, CodeSpec, ExperimentConfig, FadingModel, GridSpec,
    LinkDirection, LinkScenario, SnrPdfGrid,
};

use crate::scenario::{Channel, ScenarioFile};

/// KS distance accepted between simulated and analytic per-bit SNR.
pub const KS_LIMIT: f64 = 0.01;
/// Relative tolerance on the simulated interference density.
pub const INTERFERENCE_TOLERANCE: f64 = 0.05;
/// Relative tolerance on the simulated mean SNR.
pub const MEAN_TOLERANCE: f64 = 0.02;
/// Symbols used for the interference measurement.
pub const INTERFERENCE_SYMBOLS: usize = 200_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {}: {}", self.name, self.detail)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: String, passed: bool, detail: String) {
        self.checks.push(Check { name, passed, detail });
    }

    fn push_result(&mut self, name: String, result: Result<(bool, String), String>) {
        match result {
            Ok((passed, detail)) => self.push(name, passed, detail),
            Err(e) => self.push(name, false, e),
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        write!(f, "{} checks, {failed} failed", self.checks.len())
    }
}

/// Histogram grid for one link: the configured `grid_max` if set, else 10%
/// beyond the analytic support edge.
fn histogram_grid(file: &ScenarioFile, scenario: &LinkScenario) -> Result<GridSpec, String> {
    let max = match file.experiment.grid_max {
        Some(g) => g,
        None => 1.1 * support_edge(scenario).map_err(|e| e.to_string())?,
    };
    GridSpec::new(0.0, max, file.experiment.grid_points).map_err(|e| e.to_string())
}

fn bit_pdf(scenario: &LinkScenario, grid: GridSpec) -> Result<SnrPdfGrid, String> {
    let r = if scenario.direction() == LinkDirection::Downlink && scenario.num_users() >= 2 {
        downlink_bit_pdf(scenario, grid)
    } else {
        uplink_bit_pdf(&scenario.with_direction(LinkDirection::Uplink), grid)
    };
    r.map_err(|e| e.to_string())
}

fn analytic_cdf(scenario: &LinkScenario) -> Result<Box<dyn Fn(f64) -> f64>, String> {
    if scenario.direction() == LinkDirection::Downlink && scenario.num_users() >= 2 {
        let model = DownlinkBitModel::from_scenario(scenario).map_err(|e| e.to_string())?;
        return Ok(Box::new(move |g| model.cdf(g)));
    }
    let avg = avg_coded_snr(scenario).map_err(|e| e.to_string())?;
    Ok(Box::new(move |g: f64| if g <= 0.0 { 0.0 } else { 1.0 - (-g / avg).exp() }))
}

fn link_checks(report: &mut Report, file: &ScenarioFile, direction: LinkDirection) {
    let link = direction.name();
    let scenario = match file.scenario_for(direction) {
        Ok(s) => s,
        Err(e) => return report.push(format!("scenario/{link}"), false, e.to_string()),
    };
    if scenario.noise_density() == 0.0 && scenario.num_users() == 1 {
        report.push(
            format!("snr/{link}"),
            true,
            "noiseless single-user link has no SNR density; skipped".into(),
        );
        return;
    }

    let grid = histogram_grid(file, &scenario);
    report.push_result(format!("grid-coverage/{link}"), {
        grid.clone().and_then(|g| {
            let edge = support_edge(&scenario).map_err(|e| e.to_string())?;
            Ok((
                g.max() >= 1.1 * edge * (1.0 - 1e-12),
                format!("grid max {:.6} vs required {:.6}", g.max(), 1.1 * edge),
            ))
        })
    });

    report.push_result(format!("pdf-normalization/{link}"), {
        grid.clone().and_then(|g| bit_pdf(&scenario, g)).map(|pdf| {
            let err = (pdf.integral() - 1.0).abs();
            (err <= 1e-6, format!("|integral - 1| = {err:.2e}"))
        })
    });

    let e = &file.experiment;
    let sampled = grid.and_then(|g| {
        let fading = if file.scenario.channel == Channel::Awgn {
            FadingModel::awgn()
        } else {
            // Analytic densities assume ideal interleaving.
            FadingModel::Rayleigh
        };
        let config = ExperimentConfig::new(scenario, e.trials, e.seed)
            .map_err(|e| e.to_string())?
            .with_grid(g)
            .with_fading(fading);
        estimate_snr_pdf(&config).map_err(|e| e.to_string())
    });
    let sampled = match sampled {
        Ok(s) => s,
        Err(err) => return report.push(format!("snr-samples/{link}"), false, err),
    };

    if file.scenario.channel == Channel::Awgn {
        report.push_result(format!("snr-constant/{link}"), {
            avg_coded_snr(&scenario).map_err(|e| e.to_string()).map(|avg| {
                let spread = sampled.samples().iter().map(|g| (g - avg).abs()).fold(0.0, f64::max);
                (spread <= 1e-9 * avg, format!("max |gamma - mean| = {spread:.2e}"))
            })
        });
    } else {
        report.push_result(format!("ks/{link}"), {
            analytic_cdf(&scenario).map(|cdf| {
                let ks = sampled.ks_distance(cdf);
                (ks < KS_LIMIT, format!("KS = {ks:.5} over {} samples (limit {KS_LIMIT})", e.trials))
            })
        });
        report.push_result(format!("mean-snr/{link}"), {
            let reference = support_edge(&scenario)
                .and_then(|edge| GridSpec::new(0.0, 1.5 * edge, 20_001))
                .map_err(|e| e.to_string())
                .and_then(|g| bit_pdf(&scenario, g));
            reference.map(|pdf| {
                let rel = (sampled.mean() / pdf.mean() - 1.0).abs();
                (
                    rel <= MEAN_TOLERANCE,
                    format!("simulated {:.6} vs analytic {:.6}", sampled.mean(), pdf.mean()),
                )
            })
        });
    }

    if scenario.num_users() >= 2 {
        report.push_result(format!("interference/{link}"), {
            measure_interference_variance(&scenario, INTERFERENCE_SYMBOLS, e.seed)
                .map_err(|e| e.to_string())
                .map(|v| {
                    let expected = scenario.interference_density();
                    let rel = (v / expected - 1.0).abs();
                    (
                        rel <= INTERFERENCE_TOLERANCE,
                        format!("measured {v:.5} vs 2(K-1)xi = {expected:.5}"),
                    )
                })
        });
    }
}

/// Single-user fading link without noise; must decode without errors.
fn noiseless_run(code: &CodeSpec, file: &ScenarioFile) -> cdmalab_core::Result<BerEstimate> {
    let e = &file.experiment;
    let scenario = LinkScenario::new(1, 1.0, 0.0, LinkDirection::Uplink)?;
    let blocks = (20_000usize.div_ceil(e.block_length)).max(10) as u64;
    let config = ExperimentConfig::new(scenario, blocks, e.seed)?
        .with_code(code.clone())
        .with_block_length(e.block_length)
        .with_interleaver_depth(e.interleaver_depth);
    estimate_ber(&config)
}

fn code_checks(report: &mut Report, file: &ScenarioFile) {
    let code = match file.code_spec() {
        Ok(Some(c)) => c,
        Ok(None) => return,
        Err(e) => return report.push("code".into(), false, e.to_string()),
    };
    report.push_result("decoder-identity".into(), {
        noiseless_run(&code, file)
            .map_err(|e| e.to_string())
            .map(|est| {
                (
                    est.bit_errors == 0,
                    format!("{} errors in {} noiseless bits", est.bit_errors, est.bits_tested),
                )
            })
    });
    if let Some(expected) = file.code.free_distance {
        report.push_result("free-distance".into(), {
            cdmalab_core::distance_spectrum(&code, expected.max(1) + 1)
                .map_err(|e| e.to_string())
                .map(|s| {
                    (
                        s.free_distance() == expected,
                        format!("computed {} vs declared {expected}", s.free_distance()),
                    )
                })
        });
    }
}

/// Runs every certification check that applies to the scenario.
pub fn validate(file: &ScenarioFile) -> Report {
    let mut report = Report::default();
    for direction in file.scenario.link.directions() {
        link_checks(&mut report, file, direction);
    }
    code_checks(&mut report, file);
    report
}
