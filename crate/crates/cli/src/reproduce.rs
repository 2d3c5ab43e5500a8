//! Data behind each figure, from the frozen presets.

use clap::{Args, ValueEnum};
use osgt_dp::account::{gaussian_delta_via_renyi, gaussian_rho, osgt_delta_via_renyi, osgt_renyi_k_dim, osgt_zcdp};
use osgt_dp::calibrate::compare_mechanisms;
use osgt_dp::dist::{laplace_pdf, laplace_survival, normal_pdf, normal_survival};
use osgt_dp::mech::Sensitivity;
use osgt_dp::presets::{self, Preset};
use osgt_dp::OsgtParams64;

use crate::output::{Cell, Table};
use crate::{Body, Failure, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    /// Densities and survival functions at matched variance
    Fig2,
    /// Variance against sigma^2 for two offsets
    Fig3,
    /// Exact delta(eps), m = 3, sigma^2 = 40
    Fig4a,
    /// Exact delta(eps), m = 2, sigma^2 = 20
    Fig4b,
    /// Renyi divergence against the zCDP bound
    Fig5,
    /// Renyi-to-(eps, delta) conversion, k = 8
    Fig6,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(value_enum)]
    pub figure: Figure,
    /// Override the preset offset
    #[arg(long, allow_negative_numbers = true)]
    pub m: Option<f64>,
    /// Override the preset sigma^2
    #[arg(long, allow_negative_numbers = true)]
    pub sigma2: Option<f64>,
    /// Override the preset per-coordinate sensitivity
    #[arg(long = "Delta", allow_negative_numbers = true)]
    pub delta: Option<f64>,
    /// Override the preset dimension
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub k: Option<u64>,
}

impl ReproduceArgs {
    fn preset(&self, base: Preset) -> Preset {
        Preset {
            m: self.m.unwrap_or(base.m),
            sigma2: self.sigma2.unwrap_or(base.sigma2),
            delta: self.delta.unwrap_or(base.delta),
            k: self.k.map_or(base.k, |k| k as usize),
        }
    }

    fn overridden(&self) -> bool {
        self.m.is_some() || self.sigma2.is_some() || self.delta.is_some() || self.k.is_some()
    }
}

pub fn reproduce(a: &ReproduceArgs) -> Result<Report, Failure> {
    let t = match a.figure {
        Figure::Fig2 => densities(a.preset(presets::TAILS))?,
        Figure::Fig3 => {
            if a.overridden() {
                return Err(Failure::Input("fig3 sweeps sigma^2 over fixed offsets and takes no overrides".into()));
            }
            variances()?
        }
        Figure::Fig4a => delta_table(a.preset(presets::DELTA_M3))?,
        Figure::Fig4b => delta_table(a.preset(presets::DELTA_M2))?,
        Figure::Fig5 => zcdp_table(a.preset(presets::ZCDP))?,
        Figure::Fig6 => conversion_table(a.preset(presets::CONVERSION))?,
    };
    Ok(Report::ok(Body::Table(t)))
}

fn params(p: Preset) -> Result<OsgtParams64, Failure> {
    Ok(OsgtParams64::new(p.m, p.sigma2)?)
}

fn densities(pre: Preset) -> Result<Table, Failure> {
    let p = params(pre)?;
    let refs = p.matched_references();
    let mut t = Table::new(vec![
        "y",
        "pdf_osgt",
        "pdf_gaussian",
        "pdf_laplace",
        "survival_osgt",
        "survival_gaussian",
        "survival_laplace",
    ]);
    for y in presets::density_grid() {
        t.push(vec![
            Cell::Num(y),
            Cell::Num(p.pdf(y)),
            Cell::Num(normal_pdf(refs.sigma_g2, y)),
            Cell::Num(laplace_pdf(refs.lambda, y)),
            Cell::Sci(p.survival(y)),
            Cell::Sci(normal_survival(refs.sigma_g2, y)),
            Cell::Sci(laplace_survival(refs.lambda, y)),
        ]);
    }
    Ok(t)
}

fn variances() -> Result<Table, Failure> {
    let [m_lo, m_hi] = presets::VARIANCE_OFFSETS;
    let mut t = Table::new(vec!["sigma2", "variance_m2", "variance_m3"]);
    for s2 in presets::variance_grid() {
        t.push(vec![
            Cell::Num(s2),
            Cell::Num(OsgtParams64::new(m_lo, s2)?.variance()),
            Cell::Num(OsgtParams64::new(m_hi, s2)?.variance()),
        ]);
    }
    Ok(t)
}

fn delta_table(pre: Preset) -> Result<Table, Failure> {
    let p = params(pre)?;
    let s = Sensitivity::identical(pre.delta, pre.k)?;
    let mut t = Table::new(vec!["eps", "delta_osgt", "delta_gaussian", "ratio"]);
    for r in compare_mechanisms(&p, &s, &presets::delta_eps_grid())? {
        t.push(vec![Cell::Num(r.eps), Cell::Sci(r.delta_osgt), Cell::Sci(r.delta_gaussian), Cell::Num(r.ratio)]);
    }
    Ok(t)
}

fn zcdp_table(pre: Preset) -> Result<Table, Failure> {
    let p = params(pre)?;
    let s = Sensitivity::identical(pre.delta, pre.k)?;
    let rho_g = gaussian_rho(p.variance(), s.delta2())?;
    let mut t = Table::new(vec!["alpha", "renyi_osgt", "zcdp_bound", "renyi_gaussian"]);
    for alpha in presets::alpha_grid() {
        let tau = osgt_renyi_k_dim(&p, &s, alpha)?.tau;
        let bound = osgt_zcdp(&p, s.delta2(), s.k(), alpha)?.bound();
        t.push(vec![Cell::Num(alpha), Cell::Num(tau), Cell::Num(bound), Cell::Num(rho_g * alpha)]);
    }
    Ok(t)
}

fn conversion_table(pre: Preset) -> Result<Table, Failure> {
    let p = params(pre)?;
    let s = Sensitivity::identical(pre.delta, pre.k)?;
    let sigma_g2 = p.variance();
    let mut t = Table::new(vec!["eps", "delta_osgt", "alpha_osgt", "delta_gaussian", "alpha_gaussian", "ratio"]);
    for eps in presets::conversion_eps_grid() {
        let o = osgt_delta_via_renyi(&p, &s, eps)?;
        let g = gaussian_delta_via_renyi(sigma_g2, s.delta2(), eps)?;
        t.push(vec![
            Cell::Num(eps),
            Cell::Sci(o.point.delta),
            Cell::Num(o.alpha),
            Cell::Sci(g.point.delta),
            Cell::Num(g.alpha),
            Cell::Num(g.point.delta / o.point.delta),
        ]);
    }
    Ok(t)
}
