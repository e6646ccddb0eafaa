use std::collections::BTreeMap;
use std::str::FromStr;

use cdmalab_core::analytic::DownlinkBitModel;
use cdmalab_core::montecarlo::estimate_ber;
use cdmalab_core::{
    downlink_combined_pdf, pairwise_error_prob, q_function, union_bound_ber, uplink_combined_pdf,
    BerEstimate, DistanceSpectrum, ExperimentConfig, GridSpec, LinkDirection, LinkScenario,
    PepMethod,
};

use crate::error::CliError;
use crate::scenario::{Channel, Link, ScenarioFile};
use crate::table::CsvTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum BerMode {
    Bound,
    Simulate,
    Both,
}

impl BerMode {
    fn bound(self) -> bool {
        self != BerMode::Simulate
    }

    fn simulate(self) -> bool {
        self != BerMode::Bound
    }

    pub fn name(self) -> &'static str {
        match self {
            BerMode::Bound => "bound",
            BerMode::Simulate => "simulate",
            BerMode::Both => "both",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    EbN0Db,
    Users,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::EbN0Db => "ebn0_db",
            SweepParam::Users => "users",
        }
    }
}

/// `param=lo:hi:step`, inclusive of `hi`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

impl FromStr for Sweep {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (name, range) = s
            .split_once('=')
            .ok_or_else(|| format!("sweep `{s}` is not of the form param=lo:hi:step"))?;
        let param = match name.trim() {
            "ebn0_db" => SweepParam::EbN0Db,
            "users" => SweepParam::Users,
            other => return Err(format!("unknown sweep parameter `{other}` (ebn0_db, users)")),
        };
        let parts = range
            .split(':')
            .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        let [lo, hi, step] = parts[..] else {
            return Err(format!("sweep range `{range}` needs lo:hi:step"));
        };
        if !(lo.is_finite() && hi.is_finite() && step.is_finite() && step > 0.0 && hi >= lo) {
            return Err(format!("sweep range `{range}` needs finite lo <= hi and step > 0"));
        }
        let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
        let values: Vec<f64> = (0..count).map(|i| lo + i as f64 * step).collect();
        if param == SweepParam::Users && values.iter().any(|v| v.fract() != 0.0 || *v < 1.0) {
            return Err("users sweep values must be positive integers".into());
        }
        Ok(Sweep { param, values })
    }
}

/// One sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct BerRow {
    pub value: f64,
    pub bound: Option<f64>,
    pub simulated: Option<BerEstimate>,
}

impl BerRow {
    pub fn violates_bound(&self) -> bool {
        matches!((self.bound, self.simulated), (Some(b), Some(s)) if s.point_estimate > b)
    }
}

fn direction(file: &ScenarioFile) -> Result<LinkDirection, CliError> {
    match (file.scenario.link, file.scenario.channel) {
        (Link::Uplink, _) => Ok(LinkDirection::Uplink),
        (Link::Downlink, _) => Ok(LinkDirection::Downlink),
        // Without fading the links are identical.
        (Link::Both, Channel::Awgn) => Ok(LinkDirection::Uplink),
        (Link::Both, _) => Err(CliError::Usage(
            "the ber command needs link = \"uplink\" or \"downlink\" on a fading channel".into(),
        )),
    }
}

/// Pairwise error probability of a weight-`d` error event.
fn pairwise(scenario: &LinkScenario, channel: Channel, d: u32) -> Result<f64, CliError> {
    if scenario.noise_density() == 0.0 && scenario.num_users() == 1 {
        return Ok(0.0);
    }
    let avg = scenario.avg_coded_snr()?;
    if channel == Channel::Awgn {
        return Ok(q_function((2.0 * f64::from(d) * avg).sqrt()));
    }
    // Fading channels are bounded under ideal interleaving.
    let pdf = if scenario.direction() == LinkDirection::Downlink && scenario.num_users() >= 2 {
        let model = DownlinkBitModel::from_scenario(scenario)?;
        downlink_combined_pdf(scenario, d, GridSpec::downlink_default(model.gamma_max())?)?
    } else {
        let up = scenario.with_direction(LinkDirection::Uplink);
        uplink_combined_pdf(&up, d, GridSpec::uplink_default(avg, d)?)?
    };
    Ok(pairwise_error_prob(&pdf, PepMethod::Quadrature))
}

pub fn bound_at(file: &ScenarioFile, spectrum: &DistanceSpectrum) -> Result<f64, CliError> {
    let scenario = file.scenario_for(direction(file)?)?;
    let p2 = spectrum
        .distances()
        .map(|d| pairwise(&scenario, file.scenario.channel, d).map(|p| (d, p)))
        .collect::<Result<BTreeMap<_, _>, _>>()?;
    Ok(union_bound_ber(spectrum, &p2)?)
}

pub fn simulate_at(file: &ScenarioFile) -> Result<BerEstimate, CliError> {
    let code = file.code_spec()?.ok_or_else(|| {
        CliError::Usage("simulation needs code.generators and code.constraint_length".into())
    })?;
    let e = &file.experiment;
    let config = ExperimentConfig::new(file.scenario_for(direction(file)?)?, e.trials, e.seed)?
        .with_code(code)
        .with_fading(file.fading())
        .with_block_length(e.block_length)
        .with_interleaver_depth(e.interleaver_depth)
        .with_max_bit_errors(Some(e.max_bit_errors));
    Ok(estimate_ber(&config)?)
}

fn at_value(file: &ScenarioFile, param: SweepParam, value: f64) -> ScenarioFile {
    let mut f = file.clone();
    match param {
        SweepParam::EbN0Db => f.scenario.ebn0_db = value,
        SweepParam::Users => f.scenario.users = value as u32,
    }
    f
}

pub fn ber_rows(file: &ScenarioFile, mode: BerMode, sweep: Option<&Sweep>) -> Result<Vec<BerRow>, CliError> {
    direction(file)?;
    let spectrum = if mode.bound() { Some(file.spectrum()?) } else { None };
    let (param, values) = match sweep {
        Some(s) => (s.param, s.values.clone()),
        None => (SweepParam::EbN0Db, vec![file.scenario.ebn0_db]),
    };
    values
        .into_iter()
        .map(|value| {
            let f = at_value(file, param, value);
            let bound = spectrum.as_ref().map(|s| bound_at(&f, s)).transpose()?;
            let simulated = if mode.simulate() { Some(simulate_at(&f)?) } else { None };
            Ok(BerRow {
                value,
                bound,
                simulated,
            })
        })
        .collect()
}

/// Runs the sweep and renders `sweep_value,bound_ber,simulated_ber,ci_lo,ci_hi`.
/// Rows where the simulated estimate exceeds the bound are listed in the
/// preamble; the caller decides how to report them.
pub fn ber_table(
    file: &ScenarioFile,
    mode: BerMode,
    sweep: Option<&Sweep>,
) -> Result<(CsvTable, Vec<BerRow>), CliError> {
    let rows = ber_rows(file, mode, sweep)?;
    let mut table = CsvTable::new(["sweep_value", "bound_ber", "simulated_ber", "ci_lo", "ci_hi"]);
    table
        .meta("command", "ber")
        .meta("mode", mode.name())
        .meta("sweep_param", sweep.map_or(SweepParam::EbN0Db, |s| s.param).name())
        .meta("link", direction(file)?.name())
        .meta("channel", file.scenario.channel)
        .meta("users", file.scenario.users)
        .meta_number("ebn0_info_db", file.scenario.ebn0_db)
        .meta_number("ebn0_coded_db", file.coded_ebn0_db())
        .meta_number("xi_over_n0_info", file.xi_over_n0_info())
        .meta_number("xi_over_n0_coded", file.xi_over_n0_coded());
    if let Ok(s) = file.scenario_for(direction(file)?) {
        if let Ok(avg) = s.avg_coded_snr() {
            table.meta_number("avg_coded_snr", avg);
        }
    }
    if mode.bound() {
        let spectrum = file.spectrum()?;
        table
            .meta("free_distance", spectrum.free_distance())
            .meta("truncation_distance", spectrum.truncation_distance());
    }
    let violations: Vec<String> = rows
        .iter()
        .filter(|r| r.violates_bound())
        .map(|r| crate::table::format_number(r.value))
        .collect();
    if mode == BerMode::Both {
        table.meta("bound_violations", violations.len());
        if !violations.is_empty() {
            table.meta("bound_violated_at", violations.join(" "));
        }
    }
    table.config(file);
    for r in &rows {
        let sim = r.simulated;
        table.push(&[
            Some(r.value),
            r.bound,
            sim.map(|s| s.point_estimate),
            sim.map(|s| s.wilson_interval_95.0),
            sim.map(|s| s.wilson_interval_95.1),
        ]);
    }
    Ok((table, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code57(extra: &str) -> ScenarioFile {
        let text = format!(
            "[scenario]\nusers = 1\nebn0_db = 5.0\nchannel = \"awgn\"\n{extra}\n[code]\nrate_inverse = 2\nconstraint_length = 3\ngenerators = [\"5\", \"7\"]\nmax_distance = 10\n[experiment]\ntrials = 20\n"
        );
        ScenarioFile::parse(&text, "t").unwrap()
    }

    #[test]
    fn sweep_parsing() {
        let s: Sweep = "ebn0_db=2:8:1".parse().unwrap();
        assert_eq!(s.param, SweepParam::EbN0Db);
        assert_eq!(s.values, vec![2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0]);
        let s: Sweep = "ebn0_db=0:1:0.1".parse().unwrap();
        assert_eq!(s.values.len(), 11);
        let u: Sweep = "users=2:10:4".parse().unwrap();
        assert_eq!(u.values, vec![2.0, 6.0, 10.0]);
        for bad in ["ebn0_db", "x=1:2:1", "ebn0_db=1:2", "ebn0_db=2:1:1", "ebn0_db=1:2:0", "users=1:2:0.5"] {
            assert!(bad.parse::<Sweep>().is_err(), "{bad}");
        }
    }

    #[test]
    fn single_term_bound() {
        let text = "[scenario]\nusers = 1\nebn0_db = 5.0\nchannel = \"awgn\"\n[code]\nrate_inverse = 2\nspectrum = [[5, 1.0]]\n";
        let f = ScenarioFile::parse(text, "t").unwrap();
        let rows = ber_rows(&f, BerMode::Bound, None).unwrap();
        let gamma = 10f64.powf(0.5) / 2.0;
        let expect = q_function((2.0 * 5.0 * gamma).sqrt());
        let got = rows[0].bound.unwrap();
        assert!((got - expect).abs() <= 1e-12 * expect, "{got} {expect}");
    }

    #[test]
    fn simulate_without_noise_is_zero() {
        let mut f = code57("");
        f.scenario.ebn0_db = f64::INFINITY;
        let rows = ber_rows(&f, BerMode::Simulate, None).unwrap();
        assert_eq!(rows[0].simulated.unwrap().point_estimate, 0.0);
        assert_eq!(rows[0].bound, None);
    }

    #[test]
    fn both_link_needs_awgn() {
        let mut f = code57("");
        f.scenario.channel = Channel::Rayleigh;
        assert!(ber_rows(&f, BerMode::Bound, None).is_err());
        f.scenario.link = Link::Uplink;
        assert!(ber_rows(&f, BerMode::Bound, None).is_ok());
    }

    #[test]
    fn simulate_needs_generators() {
        let text = "[scenario]\nusers = 1\nebn0_db = 5.0\nchannel = \"awgn\"\n[code]\nrate_inverse = 2\nspectrum = [[5, 1.0]]\n";
        let f = ScenarioFile::parse(text, "t").unwrap();
        assert!(matches!(ber_rows(&f, BerMode::Simulate, None), Err(CliError::Usage(_))));
    }

    #[test]
    fn fading_bound_is_finite_and_ordered() {
        let mut f = code57("link = \"uplink\"");
        f.scenario.channel = Channel::Rayleigh;
        f.scenario.users = 3;
        let up = bound_at(&f, &f.spectrum().unwrap()).unwrap();
        f.scenario.link = Link::Downlink;
        let down = bound_at(&f, &f.spectrum().unwrap()).unwrap();
        assert!(up > 0.0 && down > 0.0 && up.is_finite() && down.is_finite());
    }
}
