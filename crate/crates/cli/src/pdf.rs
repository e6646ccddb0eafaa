use cdmalab_core::analytic::{
    erlang_density, self_convolve, uplink_bit_density, DownlinkBitModel,
};
use cdmalab_core::{
    downlink_combined_pdf, gaussian_approx_pdf, uplink_bit_pdf, GridSpec, LinkDirection,
    LinkScenario,
};

use crate::error::CliError;
use crate::scenario::{Link, ScenarioFile};
use crate::table::CsvTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum PdfMethod {
    /// Closed forms where they exist, numerical convolution otherwise.
    Exact,
    /// Numerical convolution of the per-bit densities for both links.
    Convolution,
    /// Truncated Gaussian approximation (downlink only).
    Gaussian,
}

impl PdfMethod {
    pub fn name(self) -> &'static str {
        match self {
            PdfMethod::Exact => "exact",
            PdfMethod::Convolution => "convolution",
            PdfMethod::Gaussian => "gaussian",
        }
    }
}

/// Per-bit uplink grid used for numerical convolution: step `avg/200` out to
/// `40 avg`, where the exponential tail is below `1e-17`.
fn uplink_convolution_grid(avg: f64) -> Result<GridSpec, CliError> {
    Ok(GridSpec::from_step(0.0, avg / 200.0, 8001)?)
}

/// With a single user both links see the same exponential SNR.
fn is_bounded(scenario: &LinkScenario) -> bool {
    scenario.direction() == LinkDirection::Downlink && scenario.num_users() >= 2
}

/// Upper edge of the output grid for one link.
fn auto_grid_max(scenario: &LinkScenario, d: u32) -> Result<f64, CliError> {
    if is_bounded(scenario) {
        let model = DownlinkBitModel::from_scenario(scenario)?;
        return Ok(f64::from(d) * model.gamma_max());
    }
    let avg = scenario.avg_coded_snr()?;
    let n = f64::from(d);
    Ok(avg * (30.0 * n).min(n + 15.0 * n.sqrt() + 30.0))
}

fn column(
    scenario: &LinkScenario,
    d: u32,
    method: PdfMethod,
    grid: &GridSpec,
) -> Result<Vec<f64>, CliError> {
    let gammas = grid.gammas();
    if is_bounded(scenario) {
        let model = DownlinkBitModel::from_scenario(scenario)?;
        let per_bit_grid = GridSpec::downlink_default(model.gamma_max())?;
        return Ok(match method {
            PdfMethod::Exact if d == 1 => gammas.map(|g| model.density(g)).collect(),
            PdfMethod::Exact | PdfMethod::Convolution => {
                let pdf = downlink_combined_pdf(scenario, d, per_bit_grid)?;
                gammas.map(|g| pdf.interpolate(g)).collect()
            }
            PdfMethod::Gaussian => gaussian_approx_pdf(scenario, d, *grid)?.into_values(),
        });
    }
    if method == PdfMethod::Gaussian {
        return Err(CliError::Usage(
            "the gaussian method is defined for the downlink of a multi-user scenario only".into(),
        ));
    }
    let avg = scenario.avg_coded_snr()?;
    Ok(match method {
        PdfMethod::Exact if d == 1 => gammas.map(|g| uplink_bit_density(avg, g)).collect(),
        PdfMethod::Exact => gammas.map(|g| erlang_density(avg, d, g)).collect(),
        _ => {
            let per_bit = uplink_bit_pdf(
                &scenario.with_direction(LinkDirection::Uplink),
                uplink_convolution_grid(avg)?,
            )?;
            let pdf = self_convolve(&per_bit, d)?;
            gammas.map(|g| pdf.interpolate(g)).collect()
        }
    })
}

/// Builds the `gamma,uplink_pdf,downlink_pdf` table for `d` combined coded
/// bits (default: the scenario's free distance, or 1).
pub fn pdf_table(file: &ScenarioFile, d: Option<u32>, method: PdfMethod) -> Result<CsvTable, CliError> {
    let d = d.unwrap_or_else(|| file.default_depth());
    if d == 0 {
        return Err(CliError::Usage("--d must be at least 1".into()));
    }
    if method == PdfMethod::Gaussian && file.scenario.link != Link::Downlink {
        return Err(CliError::Usage(
            "the gaussian method is downlink-only; set link = \"downlink\" in [scenario]".into(),
        ));
    }
    let scenarios = file
        .scenario
        .link
        .directions()
        .into_iter()
        .map(|dir| file.scenario_for(dir))
        .collect::<Result<Vec<_>, _>>()?;

    let grid_max = match file.experiment.grid_max {
        Some(g) => g,
        None => scenarios
            .iter()
            .map(|s| auto_grid_max(s, d))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .fold(0.0, f64::max),
    };
    let grid = GridSpec::new(0.0, grid_max, file.experiment.grid_points)?;
    let columns = scenarios
        .iter()
        .map(|s| column(s, d, method, &grid))
        .collect::<Result<Vec<_>, _>>()?;

    let mut header = vec!["gamma".to_string()];
    header.extend(scenarios.iter().map(|s| format!("{}_pdf", s.direction().name())));
    let mut table = CsvTable::new(header);
    let first = &scenarios[0];
    table
        .meta("command", "pdf")
        .meta("method", method.name())
        .meta("link", scenarios.iter().map(|s| s.direction().name()).collect::<Vec<_>>().join("+"))
        .meta("users", first.num_users())
        .meta("d", d)
        .meta_number("avg_coded_snr", first.avg_coded_snr().unwrap_or(f64::INFINITY))
        .meta_number("ebn0_info_db", file.scenario.ebn0_db)
        .meta_number("ebn0_coded_db", file.coded_ebn0_db())
        .meta_number("xi_over_n0_info", file.xi_over_n0_info())
        .meta_number("xi_over_n0_coded", file.xi_over_n0_coded());
    if first.num_users() >= 2 {
        table.meta_number("downlink_bit_gamma_max", 1.0 / (2.0 * f64::from(first.num_users() - 1)));
    }
    table.meta("grid", format!("0:{}:{}", crate::table::format_number(grid_max), grid.points()));
    table.config(file);
    for (i, g) in grid.gammas().enumerate() {
        let mut row = vec![Some(g)];
        row.extend(columns.iter().map(|c| Some(c[i])));
        table.push(&row);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn file(text: &str) -> ScenarioFile {
        ScenarioFile::parse(text, "t").unwrap()
    }

    const FIG2: &str = "[scenario]\nusers = 10\nebn0_db = 6.0\n[code]\nrate_inverse = 4\n[experiment]\ngrid_points = 201\n";

    #[test]
    fn per_bit_columns() {
        let t = pdf_table(&file(FIG2), None, PdfMethod::Exact).unwrap();
        assert_eq!(t.header(), ["gamma", "uplink_pdf", "downlink_pdf"]);
        assert_eq!(t.rows().len(), 201);
        let text = t.render();
        assert!(text.contains("# d = 1\n"));
        assert!(text.contains("# users = 10\n"));
    }

    #[test]
    fn gaussian_needs_downlink() {
        assert!(matches!(
            pdf_table(&file(FIG2), Some(164), PdfMethod::Gaussian),
            Err(CliError::Usage(_))
        ));
        let down = FIG2.replace("ebn0_db = 6.0\n", "ebn0_db = 6.0\nlink = \"downlink\"\n");
        let t = pdf_table(&file(&down), Some(20), PdfMethod::Gaussian).unwrap();
        assert_eq!(t.header(), ["gamma", "downlink_pdf"]);
    }

    #[test]
    fn methods_agree_on_uplink() {
        let up = FIG2.replace("ebn0_db = 6.0\n", "ebn0_db = 6.0\nlink = \"uplink\"\n");
        let a = pdf_table(&file(&up), Some(4), PdfMethod::Exact).unwrap();
        let b = pdf_table(&file(&up), Some(4), PdfMethod::Convolution).unwrap();
        let col = |t: &CsvTable| -> Vec<f64> { t.rows().iter().map(|r| r[1].parse().unwrap()).collect() };
        let (x, y) = (col(&a), col(&b));
        let peak = x.iter().copied().fold(0.0, f64::max);
        let err = x.iter().zip(&y).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        assert!(err < 1e-3 * peak, "{err} {peak}");
    }

    #[test]
    fn zero_depth_rejected() {
        assert!(pdf_table(&file(FIG2), Some(0), PdfMethod::Exact).is_err());
    }
}
