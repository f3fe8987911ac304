use bosonic_lsi::channels::{ChannelClass, ChannelFamily};
use bosonic_lsi::cmoe::cmoe_verify;
use bosonic_lsi::fock::TruncatedSpace;
use bosonic_lsi::lsi_ou::{alpha_p_closed, multimode_alpha2_bound, ou_meta_constant, phi, thermal_ratio};
use bosonic_lsi::meta_lsi::{eta_th, UpsilonParams};
use bosonic_lsi::par::Execution;
use bosonic_lsi::sampling::Sampler;

use crate::args::{AlphaArgs, SweepArgs, SweepKind};
use crate::config::Resolver;
use crate::report::{Check, Table};
use crate::CliError;

type Result<T> = std::result::Result<T, CliError>;

pub struct Output {
    pub checks: Vec<Check>,
    pub table: Table,
    pub seed: Option<u64>,
}

fn non_finite(table: &Table) -> Check {
    let bad = table.rows.iter().flatten().filter(|v| !v.is_finite()).count();
    Check::at_most("non_finite_cells", bad as f64, 0.0, 0.0)
}

pub fn alpha(args: AlphaArgs, r: &mut Resolver) -> Result<Output> {
    let ps = r.list("p", args.p, &[1.0, 1.25, 1.5, 2.0])?;
    let betas = r.list("beta", args.beta, &[0.5, 1.0, 2.0])?;
    let modes = r.list("modes", args.modes, &[1usize, 2, 3])?;
    let mut table = Table::new(&["p", "beta", "alpha_p", "m", "alpha2_multimode_bound"]);
    for &p in &ps {
        for &beta in &betas {
            let a = alpha_p_closed(p, beta)?;
            for &m in &modes {
                table.push(vec![p, beta, a, m as f64, multimode_alpha2_bound(m, beta)?]);
            }
        }
    }
    Ok(Output {
        checks: vec![non_finite(&table)],
        table,
        seed: None,
    })
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| {
        if n == 1 {
            lo
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    })
}

pub fn sweep(args: SweepArgs, r: &mut Resolver, exec: Execution) -> Result<Output> {
    use SweepKind::*;
    let kind = args.kind;
    let mut accepts = |key: &'static str, given: bool, ok: &[SweepKind]| r.reject(key, given && !ok.contains(&kind));
    accepts("p", args.p.is_some(), &[Eta, Ratio, Phi]);
    accepts("beta", args.beta.is_some(), &[Eta, Ratio, Trajectory]);
    accepts("points", args.points.is_some(), &[Ratio, Phi]);
    for (key, given) in [
        ("dim", args.dim.is_some()),
        ("seed", args.seed.is_some()),
        ("class", args.class.is_some()),
        ("t-max", args.t_max.is_some()),
        ("steps", args.steps.is_some()),
        ("support", args.support.is_some()),
        ("rank", args.rank.is_some()),
        ("sample", args.sample.is_some()),
    ] {
        accepts(key, given, &[Trajectory]);
    }
    match kind {
        Eta => eta(args, r),
        Ratio => ratio(args, r),
        Phi => phi_grid(args, r, exec),
        Trajectory => trajectory(args, r),
    }
}

fn eta(args: SweepArgs, r: &mut Resolver) -> Result<Output> {
    let ps = r.list("p", args.p, &[1.0, 1.25, 1.5, 1.75, 2.0])?;
    let betas = r.list("beta", args.beta, &[0.5, 1.0, 2.0])?;
    let mut table = Table::new(&["p", "beta", "eta_th", "argmin_x", "boundary"]);
    let mut dev: f64 = 0.0;
    for &p in &ps {
        for &beta in &betas {
            let e = eta_th(&UpsilonParams::ornstein_uhlenbeck(p, beta)?);
            table.push(vec![
                p,
                beta,
                e.value,
                e.argmin_x,
                f64::from(u8::from(e.attained_at_boundary)),
            ]);
            if p > 1.0 {
                // the thermal infimum sits at the reference state
                let expected = -(-(-beta).exp()).ln_1p() - ou_meta_constant(p, beta)? / alpha_p_closed(p, beta)?;
                dev = dev.max((e.value - expected).abs());
            }
        }
    }
    Ok(Output {
        checks: vec![
            non_finite(&table),
            Check::at_most("eta.reference_value", dev, 0.0, 1e-9)
                .note("|eta_th + ln(1 - e^-beta) + C/alpha_p| for p > 1"),
        ],
        table,
        seed: None,
    })
}

fn ratio(args: SweepArgs, r: &mut Resolver) -> Result<Output> {
    let ps = r.list("p", args.p, &[1.0, 1.5, 2.0])?;
    let betas = r.list("beta", args.beta, &[0.5, 1.0, 2.0])?;
    let points = r.value("points", args.points, 200)?;
    if points < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    let mut table = Table::new(&["p", "beta", "y", "ratio", "alpha_p"]);
    let mut excess = f64::INFINITY;
    let mut rises = 0usize;
    for &p in &ps {
        for &beta in &betas {
            let a = alpha_p_closed(p, beta)?;
            let mut prev = f64::INFINITY;
            for y in linspace(0.01, 0.999, points) {
                let v = thermal_ratio(y, p, beta)?;
                excess = excess.min(v - a);
                rises += usize::from(v > prev + 1e-12 * prev.abs());
                prev = v;
                table.push(vec![p, beta, y, v, a]);
            }
        }
    }
    Ok(Output {
        checks: vec![
            non_finite(&table),
            Check::at_least("ratio.min_excess", excess, 0.0, 1e-12),
            Check::at_most("ratio.increases_along_y", rises as f64, 0.0, 0.0)
                .note("ratio decreases towards alpha_p as y -> 1"),
        ],
        table,
        seed: None,
    })
}

fn phi_grid(args: SweepArgs, r: &mut Resolver, exec: Execution) -> Result<Output> {
    let ps = r.list("p", args.p, &[1.0, 1.25, 1.5, 2.0])?;
    let points = r.value("points", args.points, 200)?;
    if points == 0 {
        return Err(CliError::Usage("--points must be positive".into()));
    }
    let mut table = Table::new(&["p", "x", "y", "phi"]);
    for &p in &ps {
        let rows = exec.map(points, |i| {
            let x = (i as f64 + 0.5) / points as f64;
            (0..points)
                .map(|j| {
                    let y = (j as f64 + 0.5) / points as f64;
                    vec![p, x, y, phi(x, y, p)]
                })
                .collect::<Vec<_>>()
        });
        table.rows.extend(rows.into_iter().flatten());
    }
    let min = table.rows.iter().map(|row| row[3]).fold(f64::INFINITY, f64::min);
    Ok(Output {
        checks: vec![non_finite(&table), Check::at_least("phi.min", min, 0.0, 1e-12)],
        table,
        seed: None,
    })
}

fn trajectory(args: SweepArgs, r: &mut Resolver) -> Result<Output> {
    let betas = r.list("beta", args.beta, &[1.0])?;
    let [beta] = betas[..] else {
        return Err(CliError::Usage("trajectory takes a single --beta".into()));
    };
    let class: ChannelClass = r.value(
        "class",
        args.class.map(|c| c.parse()).transpose().map_err(CliError::Usage)?,
        ChannelClass::Attenuator,
    )?;
    let amp = class == ChannelClass::Amplifier;
    let dim = r.value("dim", args.dim, 40)?;
    let support = r.value("support", args.support, 5.min(dim))?;
    let rank = r.value("rank", args.rank, 3.min(support))?;
    let seed = r.value("seed", args.seed, 7)?;
    let sample = r.value("sample", args.sample, 0)?;
    let t_max = r.value("t-max", args.t_max, if amp { 0.5 } else { 2.0 })?;
    let steps = r.value("steps", args.steps, if amp { 10 } else { 20 })?;
    if !(t_max > 0.0 && t_max.is_finite()) || steps == 0 {
        return Err(CliError::Usage("--t-max and --steps must be positive".into()));
    }
    let p = ChannelFamily::with_default_rate(class, beta).semigroup()?;
    let sampler = Sampler::with_support(TruncatedSpace::new(dim)?, support, rank, rank, seed)?;
    let tr = cmoe_verify(&sampler.state(sample)?, &p, t_max, steps)?;
    let mut table = Table::new(&["t", "s_rho", "s_tau", "margin", "photons", "tail"]);
    for i in 0..tr.len() {
        table.push(vec![
            tr.times[i],
            tr.s_rho[i],
            tr.s_tau[i],
            tr.margins[i],
            tr.photons[i],
            tr.tail[i],
        ]);
    }
    let check = Check::at_least("trajectory.min_margin", tr.min_margin(), 0.0, 1e-6).inconclusive_if(
        !tr.conclusive(),
        format!(
            "tail guard stopped the flow at t = {} of {t_max}; use a shorter --t-max or a larger --dim",
            tr.times.last().copied().unwrap_or(0.0)
        ),
    );
    Ok(Output {
        checks: vec![non_finite(&table), check],
        table,
        seed: Some(seed),
    })
}
