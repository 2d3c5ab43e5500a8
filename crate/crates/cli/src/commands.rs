//! Sampling, accounting and calibration commands.

use clap::{Args, ValueEnum};
use osgt_dp::account::{
    delta_quadrature, gaussian_delta, gaussian_delta_via_renyi, gaussian_rho, osgt_delta, osgt_delta_via_renyi,
    osgt_renyi_closed_form, osgt_renyi_k_dim, osgt_renyi_worst_case, osgt_zcdp, renyi_quadrature, CaseBoundary,
    ORACLE_FLOOR,
};
use osgt_dp::calibrate::{
    epsilon_for_delta, gaussian_epsilon_for_delta, gaussian_sigma2_for_target, sigma2_for_target, CalibrationTarget,
};
use osgt_dp::mech::{MechanismKind, Sensitivity};
use osgt_dp::OsgtParams64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::output::{Cell, Table};
use crate::{Body, Failure, Report};

/// Largest |exact - oracle| / max(exact, floor) accepted for δ.
pub const DELTA_ORACLE_TOL: f64 = 1e-6;
/// Largest relative deviation accepted for the Rényi divergence.
pub const RENYI_ORACLE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Args)]
pub struct OsgtArgs {
    /// Offset m >= 0
    #[arg(long, allow_negative_numbers = true)]
    pub m: f64,
    /// Scale parameter sigma^2 > 0 (not the variance)
    #[arg(long, allow_negative_numbers = true)]
    pub sigma2: f64,
}

impl OsgtArgs {
    pub fn params(&self) -> Result<OsgtParams64, Failure> {
        Ok(OsgtParams64::new(self.m, self.sigma2)?)
    }
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub osgt: OsgtArgs,
    /// Number of variates
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
}

pub fn sample(a: &SampleArgs, seed: u64) -> Result<Report, Failure> {
    let p = a.osgt.params()?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let values = (0..a.n).map(|_| p.sample(&mut rng)).collect::<Result<Vec<_>, _>>()?;
    Ok(Report::ok(Body::Values(values)))
}

#[derive(Debug, Args)]
pub struct DeltaArgs {
    #[command(flatten)]
    pub osgt: OsgtArgs,
    /// Query sensitivity
    #[arg(long = "Delta", allow_negative_numbers = true, default_value_t = 1.0)]
    pub delta: f64,
    /// One or more eps values (comma separated or repeated)
    #[arg(long, allow_negative_numbers = true, required = true, num_args = 1.., value_delimiter = ',')]
    pub eps: Vec<f64>,
    /// Also integrate the privacy loss numerically and report the deviation
    #[arg(long)]
    pub oracle: bool,
}

pub fn delta(a: &DeltaArgs) -> Result<Report, Failure> {
    let p = a.osgt.params()?;
    let boundary = CaseBoundary::new(&p, a.delta)?;
    let sigma_g2 = p.variance();
    let mut cols = vec!["eps", "eps_star", "branch", "delta", "delta_gaussian"];
    if a.oracle {
        cols.extend(["delta_oracle", "oracle_error", "deviation", "below_floor"]);
    }
    let mut t = Table::new(cols);
    let mut bad = Vec::new();
    for &eps in &a.eps {
        let o = osgt_delta(&p, a.delta, eps)?;
        let g = gaussian_delta(sigma_g2, a.delta, eps)?;
        let branch = if boundary.first_case(eps) { "first" } else { "second" };
        let mut row = vec![
            Cell::Num(eps),
            Cell::Num(boundary.eps_star),
            Cell::Text(branch.into()),
            Cell::Sci(o.delta),
            Cell::Sci(g.delta),
        ];
        if a.oracle {
            let q = delta_quadrature(&p, a.delta, eps)?;
            let dev = (o.delta - q.value).abs() / o.delta.max(ORACLE_FLOOR);
            if !(dev <= DELTA_ORACLE_TOL) {
                bad.push(format!("eps {eps}: oracle deviation {dev:e} exceeds {DELTA_ORACLE_TOL:e}"));
            }
            row.extend([Cell::Sci(q.value), Cell::Sci(q.error_estimate), Cell::Sci(dev), Cell::Bool(q.below_floor)]);
        }
        t.push(row);
    }
    Ok(Report::checked(Body::Table(t), bad))
}

#[derive(Debug, Args)]
pub struct ZcdpArgs {
    #[command(flatten)]
    pub osgt: OsgtArgs,
    /// l2 sensitivity of the query
    #[arg(long = "Delta2", allow_negative_numbers = true, default_value_t = 1.0)]
    pub delta2: f64,
    /// Query dimension
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub k: u64,
    /// One or more Renyi orders alpha > 1
    #[arg(long, allow_negative_numbers = true, required = true, num_args = 1.., value_delimiter = ',')]
    pub alpha: Vec<f64>,
}

pub fn zcdp(a: &ZcdpArgs) -> Result<Report, Failure> {
    let p = a.osgt.params()?;
    let rho_g = gaussian_rho(p.variance(), a.delta2)?;
    let mut t = Table::new(vec!["alpha", "zeta", "rho", "bound", "rho_gaussian", "bound_gaussian"]);
    for &alpha in &a.alpha {
        let z = osgt_zcdp(&p, a.delta2, a.k as usize, alpha)?;
        t.push(vec![
            Cell::Num(alpha),
            Cell::Num(z.zeta),
            Cell::Num(z.rho),
            Cell::Num(z.bound()),
            Cell::Num(rho_g),
            Cell::Num(rho_g * alpha),
        ]);
    }
    Ok(Report::ok(Body::Table(t)))
}

#[derive(Debug, Args)]
pub struct RenyiArgs {
    #[command(flatten)]
    pub osgt: OsgtArgs,
    /// Per-coordinate sensitivity
    #[arg(long = "Delta", allow_negative_numbers = true, default_value_t = 1.0)]
    pub delta: f64,
    /// Query dimension; every coordinate moves by Delta
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub k: u64,
    /// One or more Renyi orders alpha > 1
    #[arg(long, allow_negative_numbers = true, required = true, num_args = 1.., value_delimiter = ',')]
    pub alpha: Vec<f64>,
    /// Also integrate the divergence numerically (k = 1 only)
    #[arg(long)]
    pub oracle: bool,
    /// Scan this many neighbour distances in [0, Delta] and report the worst (k = 1 only)
    #[arg(long)]
    pub scan: Option<usize>,
}

pub fn renyi(a: &RenyiArgs) -> Result<Report, Failure> {
    let p = a.osgt.params()?;
    if a.k > 1 && (a.oracle || a.scan.is_some()) {
        return Err(Failure::Input("--oracle and --scan need k = 1".into()));
    }
    let s = Sensitivity::identical(a.delta, a.k as usize)?;
    let mut cols = vec!["alpha", "tau", "log_b_bar", "b1", "b2", "b3", "b4"];
    if a.scan.is_some() {
        cols.extend(["worst_tau", "worst_distance", "at_endpoint"]);
    }
    if a.oracle {
        cols.extend(["tau_oracle", "deviation"]);
    }
    let mut t = Table::new(cols);
    let mut bad = Vec::new();
    for &alpha in &a.alpha {
        let ev = if a.k == 1 {
            osgt_renyi_closed_form(&p, a.delta, alpha)?
        } else {
            osgt_renyi_k_dim(&p, &s, alpha)?
        };
        let mut row = vec![
            Cell::Num(alpha),
            Cell::Num(ev.tau),
            Cell::Num(ev.log_b_bar),
            Cell::Num(ev.b1),
            Cell::Num(ev.b2),
            Cell::Num(ev.b3),
            Cell::Num(ev.b4),
        ];
        if let Some(n) = a.scan {
            let w = osgt_renyi_worst_case(&p, a.delta, alpha, n)?;
            row.extend([Cell::Num(w.worst.tau), Cell::Num(w.worst.delta_q), Cell::Bool(w.at_endpoint)]);
        }
        if a.oracle {
            let q = renyi_quadrature(&p, a.delta, alpha)?;
            let dev = (ev.tau - q).abs() / q.abs();
            if !(dev <= RENYI_ORACLE_TOL) {
                bad.push(format!("alpha {alpha}: oracle deviation {dev:e} exceeds {RENYI_ORACLE_TOL:e}"));
            }
            row.extend([Cell::Num(q), Cell::Sci(dev)]);
        }
        t.push(row);
    }
    Ok(Report::checked(Body::Table(t), bad))
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[command(flatten)]
    pub osgt: OsgtArgs,
    /// Per-coordinate sensitivity
    #[arg(long = "Delta", allow_negative_numbers = true, default_value_t = 1.0)]
    pub delta: f64,
    /// Query dimension; every coordinate moves by Delta
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub k: u64,
    /// One or more eps values
    #[arg(long, allow_negative_numbers = true, required = true, num_args = 1.., value_delimiter = ',')]
    pub eps: Vec<f64>,
}

pub fn convert(a: &ConvertArgs) -> Result<Report, Failure> {
    let p = a.osgt.params()?;
    let s = Sensitivity::identical(a.delta, a.k as usize)?;
    let sigma_g2 = p.variance();
    let mut t = Table::new(vec!["eps", "delta_osgt", "alpha_osgt", "delta_gaussian", "alpha_gaussian", "ratio"]);
    for &eps in &a.eps {
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
    Ok(Report::ok(Body::Table(t)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Osgt,
    Gaussian,
    Both,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("given").required(true).args(["sigma2", "eps"])))]
pub struct CalibrateArgs {
    /// Offset m >= 0
    #[arg(long, allow_negative_numbers = true)]
    pub m: f64,
    /// Query sensitivity
    #[arg(long = "Delta", allow_negative_numbers = true, default_value_t = 1.0)]
    pub delta: f64,
    /// delta to meet, in (0, 1)
    #[arg(long, allow_negative_numbers = true)]
    pub target_delta: f64,
    /// Fix sigma^2 and solve for eps
    #[arg(long, allow_negative_numbers = true)]
    pub sigma2: Option<f64>,
    /// Fix eps and solve for sigma^2
    #[arg(long, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    #[arg(long, value_enum, default_value_t = Which::Both)]
    pub mechanism: Which,
}

pub fn calibrate(a: &CalibrateArgs) -> Result<Report, Failure> {
    let s = Sensitivity::scalar(a.delta)?;
    let mut t = Table::new(vec!["mechanism", "m", "sigma2", "variance", "eps", "delta"]);
    let kinds: &[MechanismKind] = match a.mechanism {
        Which::Osgt => &[MechanismKind::Osgt],
        Which::Gaussian => &[MechanismKind::Gaussian],
        Which::Both => &[MechanismKind::Osgt, MechanismKind::Gaussian],
    };
    for &kind in kinds {
        let target = CalibrationTarget::new(a.target_delta, a.eps, s, kind)?;
        let (m, sigma2, eps) = match (target.target_eps, kind) {
            (None, MechanismKind::Osgt) => {
                let p = OsgtParams64::new(a.m, a.sigma2.expect("group requires one"))?;
                (a.m, p.sigma2(), epsilon_for_delta(&p, a.delta, a.target_delta)?)
            }
            (None, _) => {
                let sigma_g2 = OsgtParams64::new(a.m, a.sigma2.expect("group requires one"))?.variance();
                (0.0, sigma_g2, gaussian_epsilon_for_delta(sigma_g2, a.delta, a.target_delta)?)
            }
            (Some(eps), MechanismKind::Osgt) => (a.m, sigma2_for_target(a.m, a.delta, eps, a.target_delta)?, eps),
            (Some(eps), _) => (0.0, gaussian_sigma2_for_target(a.delta, eps, a.target_delta)?, eps),
        };
        let p = OsgtParams64::new(m, sigma2)?;
        let achieved = match kind {
            MechanismKind::Osgt => osgt_delta(&p, a.delta, eps)?.delta,
            _ => gaussian_delta(sigma2, a.delta, eps)?.delta,
        };
        t.push(vec![
            Cell::Text(kind.name().into()),
            Cell::Num(m),
            Cell::Num(sigma2),
            Cell::Num(p.variance()),
            Cell::Num(eps),
            Cell::Sci(achieved),
        ]);
    }
    Ok(Report::ok(Body::Table(t)))
}
