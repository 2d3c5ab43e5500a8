//! Oracle-equivalence and invariant checks, each timed.

use std::time::Instant;

use clap::{Args, ValueEnum};
use osgt_dp::account::{
    delta_quadrature, gaussian_rho, osgt_delta, osgt_delta_branches_with, osgt_renyi_closed_form,
    osgt_renyi_worst_case, osgt_zcdp, renyi_quadrature, CaseBoundary, ORACLE_FLOOR,
};
use osgt_dp::dist::{gaussian_log_survival, laplace_log_survival};
use osgt_dp::presets;
use osgt_dp::quad::{integrate, QuadOptions};
use osgt_dp::special::{inverse_q, log_q_function, q_function};
use osgt_dp::OsgtParams64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::commands::{DELTA_ORACLE_TOL, RENYI_ORACLE_TOL};
use crate::output::{Cell, Table};
use crate::{Body, Failure, Report};

/// Asymptotic 1% critical value of sqrt(n)·D for the one-sample KS test.
const KS_CRIT_1PCT: f64 = 1.627_58;

const GRID: [(f64, f64); 4] = [(3.0, 40.0), (2.0, 20.0), (15.0, 630.0), (0.01, 1.0)];
const DELTAS: [f64; 3] = [0.5, 1.0, 2.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fault {
    /// Distort ln Q inside the exact delta branches
    QFunction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    SpecialFunctions,
    Normalization,
    Variance,
    DeltaOracle,
    RenyiOracle,
    BranchContinuity,
    ZcdpDominance,
    SubGaussian,
    TailOrdering,
    Sampler,
}

const ALL: [Check; 10] = [
    Check::SpecialFunctions,
    Check::Normalization,
    Check::Variance,
    Check::DeltaOracle,
    Check::RenyiOracle,
    Check::BranchContinuity,
    Check::ZcdpDominance,
    Check::SubGaussian,
    Check::TailOrdering,
    Check::Sampler,
];

impl Check {
    fn name(self) -> &'static str {
        match self {
            Check::SpecialFunctions => "special-functions",
            Check::Normalization => "normalization",
            Check::Variance => "variance",
            Check::DeltaOracle => "delta-oracle",
            Check::RenyiOracle => "renyi-oracle",
            Check::BranchContinuity => "branch-continuity",
            Check::ZcdpDominance => "zcdp-dominance",
            Check::SubGaussian => "sub-gaussian",
            Check::TailOrdering => "tail-ordering",
            Check::Sampler => "sampler",
        }
    }
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Run only these checks (repeatable)
    #[arg(long = "check", value_enum)]
    pub checks: Vec<Check>,
    /// Test hook: corrupt a building block so its check must fail
    #[arg(long, value_enum)]
    pub inject_fault: Option<Fault>,
    /// Sampler draws per seed
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(100..))]
    pub draws: u64,
    /// Sampler seeds; at least 4 in 5 must pass
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    pub seeds: u64,
}

type Outcome = osgt_dp::Result<(bool, String)>;

pub fn selftest(a: &SelftestArgs, seed: u64) -> Result<Report, Failure> {
    let checks: Vec<Check> = if a.checks.is_empty() { ALL.to_vec() } else { a.checks.clone() };
    let mut t = Table::new(vec!["check", "pass", "seconds", "detail"]);
    let mut failed = Vec::new();
    for c in checks {
        let start = Instant::now();
        let out = match c {
            Check::SpecialFunctions => special_functions(),
            Check::Normalization => normalization(),
            Check::Variance => variance(),
            Check::DeltaOracle => delta_oracle(),
            Check::RenyiOracle => renyi_oracle(),
            Check::BranchContinuity => branch_continuity(a.inject_fault),
            Check::ZcdpDominance => zcdp_dominance(),
            Check::SubGaussian => sub_gaussian(),
            Check::TailOrdering => tail_ordering(),
            Check::Sampler => sampler(a.draws as usize, a.seeds, seed),
        };
        let secs = start.elapsed().as_secs_f64();
        let (pass, detail) = out.unwrap_or_else(|e| (false, format!("error: {e}")));
        if !pass {
            failed.push(format!("{}: {detail}", c.name()));
        }
        t.push(vec![Cell::Text(c.name().into()), Cell::Bool(pass), Cell::Num(secs), Cell::Text(detail)]);
    }
    Ok(Report::checked(Body::Table(t), failed))
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn quad_opts() -> QuadOptions<f64> {
    QuadOptions { rel_tol: 1e-13, abs_tol: 0.0, max_intervals: 4000 }
}

fn special_functions() -> Outcome {
    let mut worst_log = 0.0f64;
    let mut worst_inv = 0.0f64;
    for i in -40..=300 {
        let x = i as f64 * 0.125;
        let q = q_function(x);
        if q > 1e-300 {
            worst_log = worst_log.max((log_q_function(x) - q.ln()).abs() / q.ln().abs().max(1.0));
        }
        if (-5.0..=30.0).contains(&x) {
            worst_inv = worst_inv.max((inverse_q(q)? - x).abs() / x.abs().max(1.0));
        }
    }
    let sym = (q_function(1.3f64) + q_function(-1.3) - 1.0).abs();
    Ok((
        worst_log <= 1e-13 && worst_inv <= 1e-10 && sym <= 1e-15,
        format!("ln Q vs Q rel {worst_log:.1e}, inverse round trip {worst_inv:.1e}, Q(x)+Q(-x)-1 {sym:.1e}"),
    ))
}

fn normalization() -> Outcome {
    let mut worst = 0.0f64;
    for s2 in [1.0, 40.0, 630.0] {
        for r in [0.01, 0.1, 0.4743, 0.6745, 1.0, 3.0] {
            let p = OsgtParams64::new(r * f64::sqrt(s2), s2)?;
            let w = 50.0 * p.sigma() + p.m();
            let total = integrate(|y| p.pdf(y), &[-w, 0.0, w], &quad_opts())?.value;
            worst = worst.max((total - 1.0).abs());
        }
    }
    Ok((worst <= 1e-10, format!("max |integral of pdf - 1| = {worst:.1e} over 18 laws")))
}

fn variance() -> Outcome {
    let mut worst = 0.0f64;
    for (m, s2) in GRID {
        let p = OsgtParams64::new(m, s2)?;
        let w = 50.0 * p.sigma() + p.m();
        let second = integrate(|y| y * y * p.pdf(y), &[-w, 0.0, w], &quad_opts())?.value;
        worst = worst.max(rel(p.variance(), second));
    }
    Ok((worst <= 1e-8, format!("closed form vs quadrature second moment, worst rel {worst:.1e}")))
}

fn delta_oracle() -> Outcome {
    let mut worst = 0.0f64;
    let mut n = 0;
    for (m, s2) in GRID {
        let p = OsgtParams64::new(m, s2)?;
        for d in DELTAS {
            let star = CaseBoundary::new(&p, d)?.eps_star;
            for eps in [0.1, 0.5, 1.0, star, 2.0, 5.0] {
                let exact = osgt_delta(&p, d, eps)?.delta;
                let oracle = delta_quadrature(&p, d, eps)?.value;
                worst = worst.max((exact - oracle).abs() / exact.max(ORACLE_FLOOR));
                n += 1;
            }
        }
    }
    Ok((worst <= DELTA_ORACLE_TOL, format!("{n} points, worst deviation {worst:.2e}")))
}

fn renyi_oracle() -> Outcome {
    let mut worst = 0.0f64;
    let mut n = 0;
    for (m, s2) in GRID {
        let p = OsgtParams64::new(m, s2)?;
        for d in DELTAS {
            for alpha in [1.5, 2.0, 5.0, 10.0, 50.0] {
                let cf = osgt_renyi_closed_form(&p, d, alpha)?.tau;
                worst = worst.max(rel(cf, renyi_quadrature(&p, d, alpha)?));
                n += 1;
            }
        }
    }
    Ok((worst <= RENYI_ORACLE_TOL, format!("{n} points, worst deviation {worst:.2e}")))
}

fn branch_continuity(fault: Option<Fault>) -> Outcome {
    let log_q = |x: f64| match fault {
        None => log_q_function(x),
        Some(Fault::QFunction) => log_q_function(x) + 1e-3 * x * x,
    };
    let mut worst = 0.0f64;
    for (m, s2) in GRID {
        let p = OsgtParams64::new(m, s2)?;
        for d in DELTAS {
            let star = CaseBoundary::new(&p, d)?.eps_star;
            let br = osgt_delta_branches_with(&p, d, star, log_q)?;
            worst = worst.max((br.first - br.second).abs());
        }
    }
    let note = if fault.is_some() { " (fault injected)" } else { "" };
    Ok((worst <= 1e-12, format!("max branch gap at eps* {worst:.2e}{note}")))
}

fn zcdp_dominance() -> Outcome {
    let mut min_gap = f64::INFINITY;
    let mut rho_ok = true;
    for (m, s2) in GRID {
        let p = OsgtParams64::new(m, s2)?;
        for i in 1..=20 {
            let alpha = 1.0 + 99.0 * i as f64 / 20.0;
            let bound = osgt_zcdp(&p, 1.0, 1, alpha)?.bound();
            let tau = osgt_renyi_worst_case(&p, 1.0, alpha, 21)?.worst.tau;
            min_gap = min_gap.min(bound - tau);
        }
        rho_ok &= osgt_zcdp(&p, 1.0, 1, 2.0)?.rho < gaussian_rho(p.variance(), 1.0)?;
    }
    Ok((min_gap >= 0.0 && rho_ok, format!("min bound - divergence {min_gap:.3e}, rho below Gaussian: {rho_ok}")))
}

fn sub_gaussian() -> Outcome {
    let limit = inverse_q(0.25)?;
    let mut worst = f64::NEG_INFINITY;
    for s2 in [1.0, 20.0, 40.0, 630.0] {
        for r in [0.0, 0.2, 0.4743, 0.6, limit] {
            let p = OsgtParams64::new(r * f64::sqrt(s2), s2)?;
            for k in 1..=8 {
                let y = k as f64 * p.sigma();
                worst = worst.max(p.survival(y) / (-y * y / (2.0 * s2)).exp());
            }
        }
    }
    Ok((worst <= 1.0, format!("max survival / exp(-y^2/2sigma^2) = {worst:.4}")))
}

fn tail_ordering() -> Outcome {
    let pre = presets::TAILS;
    let p = OsgtParams64::new(pre.m, pre.sigma2)?;
    let refs = p.matched_references();
    let grid = presets::tail_grid();
    let ordered: Vec<bool> = grid
        .iter()
        .map(|&y| {
            let o = p.log_survival(y);
            laplace_log_survival(refs.lambda, y) > o && o > gaussian_log_survival(refs.sigma_g2, y)
        })
        .collect();
    let from = ordered.iter().rposition(|&ok| !ok).map_or(0, |i| i + 1);
    match grid.get(from) {
        Some(&y) => Ok((y <= 20.0, format!("Laplace > OSGT > Gaussian for all grid y >= {y}"))),
        None => Ok((false, "ordering fails at the end of the grid".into())),
    }
}

fn sampler(n: usize, seeds: u64, base: u64) -> Outcome {
    let p = OsgtParams64::new(3.0, 40.0)?;
    let mut passed = 0;
    let mut stats = Vec::new();
    for s in 0..seeds {
        let mut rng = ChaCha20Rng::seed_from_u64(base.wrapping_add(s));
        let mut xs = (0..n).map(|_| p.sample(&mut rng)).collect::<osgt_dp::Result<Vec<f64>>>()?;
        xs.sort_by(f64::total_cmp);
        let nf = n as f64;
        let d = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = p.cdf(x);
                (f - i as f64 / nf).max((i + 1) as f64 / nf - f)
            })
            .fold(0.0, f64::max);
        let ks = d * nf.sqrt();
        if ks < KS_CRIT_1PCT {
            passed += 1;
        }
        stats.push(format!("{ks:.3}"));
    }
    let needed = seeds - seeds / 5;
    Ok((
        passed >= needed,
        format!("KS at 1%: {passed}/{seeds} seeds pass (need {needed}), sqrt(n)D = [{}]", stats.join(" ")),
    ))
}
