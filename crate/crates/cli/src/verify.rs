use bosonic_lsi::channels::{generator_fd_check, ChannelClass, ChannelFamily, SemigroupParams};
use bosonic_lsi::cmoe::{g, theorem52_check, thermal_flow_deviation};
use bosonic_lsi::fock::{thermal_state, State, ThermalParam, TruncatedSpace};
use bosonic_lsi::lsi_ou::{
    alpha_p_closed, diagonal_decomposition, eigen_check, lemma45_check, lsi_ratio, multimode_alpha2_bound,
    multimode_lsi_check, phi, reference_state, spectral_block_check, spectral_gap, thermal_ratio, OUParams, Weights,
};
use bosonic_lsi::meta_lsi::{eta_th, lemma31_check, passive_unitary, upsilon_m, GaussianUnitaryKind, UpsilonParams};
use bosonic_lsi::par::Execution;
use bosonic_lsi::sampling::{cmoe_sweep, meta_lsi_sweep, run, Sampler};
use bosonic_lsi::C64;

use crate::args::{Suite, VerifyArgs};
use crate::config::Resolver;
use crate::report::Check;
use crate::CliError;

type Result<T> = std::result::Result<T, CliError>;

const BLOCK_LEVELS: usize = 20;
const ENTROPY_LEVELS: usize = 12;
const SATURATOR_LEVELS: usize = 20;
const SATURATOR_X: f64 = 0.4;

#[derive(Debug, Clone)]
pub struct Common {
    pub beta: f64,
    pub seed: u64,
    pub exec: Execution,
}

#[derive(Debug, Clone)]
pub enum Plan {
    Meta {
        params: UpsilonParams,
        dim: usize,
        samples: usize,
        max_rank: usize,
    },
    Lsi {
        p: f64,
        dim: usize,
        samples: usize,
        max_rank: usize,
    },
    Spectrum {
        dims: Vec<usize>,
        samples: usize,
    },
    Cmoe {
        classes: Vec<ChannelClass>,
        dims: Vec<usize>,
        samples: usize,
        support: usize,
        max_rank: usize,
        t_max: Option<f64>,
        steps: Option<usize>,
    },
    Generators {
        dim: usize,
        support: usize,
        max_rank: usize,
    },
    Multimode {
        p: f64,
        dims: Vec<usize>,
        samples: usize,
    },
}

impl Plan {
    fn name(&self) -> &'static str {
        match self {
            Plan::Meta { .. } => "meta",
            Plan::Lsi { .. } => "lsi",
            Plan::Spectrum { .. } => "spectrum",
            Plan::Cmoe { .. } => "cmoe",
            Plan::Generators { .. } => "generators",
            Plan::Multimode { .. } => "multimode",
        }
    }
}

fn dims(r: &mut Resolver, cli: Option<String>, default: &[usize]) -> Result<Vec<usize>> {
    let d = r.list("dim", cli, default)?;
    if d.len() > 2 || d.iter().any(|&n| n < 2) {
        return Err(CliError::Usage(
            "--dim takes one or two cutoffs, each at least 2".into(),
        ));
    }
    Ok(d)
}

/// Resolve the options of `args.suite` (every suite for `all`).
pub fn resolve(args: VerifyArgs, r: &mut Resolver, exec: Execution) -> Result<(Common, Vec<Plan>)> {
    let suite = args.suite;
    let common = Common {
        beta: r.value("beta", args.beta, 1.0)?,
        seed: r.value("seed", args.seed, 7)?,
        exec,
    };
    OUParams::new(common.beta)?;
    let mut accepts = |key: &'static str, given: bool, ok: &[Suite]| r.reject(key, given && !ok.contains(&suite));
    use Suite::*;
    accepts("p", args.p.is_some(), &[Meta, Lsi, Multimode]);
    accepts(
        "dim",
        args.dim.is_some(),
        &[Meta, Lsi, Spectrum, Cmoe, Generators, Multimode],
    );
    accepts(
        "samples",
        args.samples.is_some(),
        &[Meta, Lsi, Spectrum, Cmoe, Multimode],
    );
    accepts("class", args.class.is_some(), &[Cmoe]);
    accepts("t-max", args.t_max.is_some(), &[Cmoe]);
    accepts("steps", args.steps.is_some(), &[Cmoe]);
    accepts("support", args.support.is_some(), &[Cmoe, Generators]);
    accepts("max-rank", args.max_rank.is_some(), &[Meta, Lsi, Cmoe, Generators]);
    for (k, v) in [("nu0", args.nu0), ("nu1", args.nu1), ("omega", args.omega)] {
        accepts(k, v.is_some(), &[Meta]);
    }

    let plan = match suite {
        All => {
            let plans = [Meta, Lsi, Spectrum, Cmoe, Generators, Multimode]
                .into_iter()
                .map(|s| default_plan(s, common.beta))
                .collect::<Result<_>>()?;
            return Ok((common, plans));
        }
        Meta => {
            let p = r.value("p", args.p, 2.0)?;
            let dim = dims(r, args.dim, &[20])?[0];
            let nu0 = r.optional("nu0", args.nu0)?;
            let nu1 = r.optional("nu1", args.nu1)?;
            let params = match (nu0, nu1) {
                (None, None) => {
                    r.reject("omega", args.omega.is_some());
                    UpsilonParams::ornstein_uhlenbeck(p, common.beta)?
                }
                (Some(a), Some(b)) => UpsilonParams::new(a, b, r.value("omega", args.omega, 0.0)?, p)?,
                _ => return Err(CliError::Usage("--nu0 and --nu1 go together".into())),
            };
            Plan::Meta {
                params,
                dim,
                samples: r.value("samples", args.samples, 200)?,
                max_rank: r.value("max-rank", args.max_rank, 5.min(dim))?,
            }
        }
        Lsi => {
            let p = r.value("p", args.p, 2.0)?;
            alpha_p_closed(p, common.beta)?;
            let dim = dims(r, args.dim, &[20])?[0];
            Plan::Lsi {
                p,
                dim,
                samples: r.value("samples", args.samples, 100)?,
                max_rank: r.value("max-rank", args.max_rank, 20.min(dim))?,
            }
        }
        Spectrum => Plan::Spectrum {
            dims: dims(r, args.dim, &[60, 40])?,
            samples: r.value("samples", args.samples, 50)?,
        },
        Cmoe => {
            let classes = r.list(
                "class",
                args.class,
                &[
                    ChannelClass::Attenuator,
                    ChannelClass::Additive,
                    ChannelClass::Amplifier,
                ],
            )?;
            let dims = dims(r, args.dim, &[40])?;
            let support = r.value("support", args.support, 5.min(dims[0]))?;
            Plan::Cmoe {
                classes,
                support,
                max_rank: r.value("max-rank", args.max_rank, 4.min(support))?,
                samples: r.value("samples", args.samples, 50)?,
                t_max: r.optional("t-max", args.t_max)?,
                steps: r.optional("steps", args.steps)?,
                dims,
            }
        }
        Generators => {
            let dim = dims(r, args.dim, &[20])?[0];
            let support = r.value("support", args.support, 5.min(dim))?;
            Plan::Generators {
                dim,
                support,
                max_rank: r.value("max-rank", args.max_rank, 3.min(support))?,
            }
        }
        Multimode => Plan::Multimode {
            p: r.value("p", args.p, 1.5)?,
            dims: dims(r, args.dim, &[12, 10])?,
            samples: r.value("samples", args.samples, 10)?,
        },
    };
    if let Plan::Cmoe { t_max: Some(t), .. } = plan {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::Usage(format!("--t-max must be positive, got {t}")));
        }
    }
    if let Plan::Cmoe { steps: Some(0), .. } = plan {
        return Err(CliError::Usage("--steps must be positive".into()));
    }
    Ok((common, vec![plan]))
}

fn default_plan(suite: Suite, beta: f64) -> Result<Plan> {
    let args = VerifyArgs {
        suite,
        beta: Some(beta),
        p: None,
        dim: None,
        samples: None,
        seed: None,
        class: None,
        t_max: None,
        steps: None,
        support: None,
        max_rank: None,
        nu0: None,
        nu1: None,
        omega: None,
    };
    let mut r = Resolver::default();
    let (_, mut plans) = resolve(args, &mut r, Execution::Sequential)?;
    Ok(plans.remove(0))
}

pub fn run_plans(common: &Common, plans: &[Plan]) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for plan in plans {
        let start = std::time::Instant::now();
        let mut c = run_plan(common, plan)?;
        eprintln!(
            "verify {}: {} checks in {:.2}s",
            plan.name(),
            c.len(),
            start.elapsed().as_secs_f64()
        );
        checks.append(&mut c);
    }
    Ok(checks)
}

fn run_plan(c: &Common, plan: &Plan) -> Result<Vec<Check>> {
    Ok(match plan {
        Plan::Meta {
            params,
            dim,
            samples,
            max_rank,
        } => meta(c, params, *dim, *samples, *max_rank)?,
        Plan::Lsi {
            p,
            dim,
            samples,
            max_rank,
        } => lsi(c, *p, *dim, *samples, *max_rank)?,
        Plan::Spectrum { dims, samples } => spectrum(c, dims, *samples)?,
        Plan::Cmoe {
            classes,
            dims,
            samples,
            support,
            max_rank,
            t_max,
            steps,
        } => {
            let mut out = Vec::new();
            for &class in classes {
                out.extend(cmoe(c, class, dims, *samples, *support, *max_rank, *t_max, *steps)?);
            }
            out
        }
        Plan::Generators { dim, support, max_rank } => generators(c, *dim, *support, *max_rank)?,
        Plan::Multimode { p, dims, samples } => multimode(c, *p, dims, *samples)?,
    })
}

fn min_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(f64::INFINITY, f64::min)
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

fn meta(c: &Common, params: &UpsilonParams, dim: usize, samples: usize, max_rank: usize) -> Result<Vec<Check>> {
    let sampler = Sampler::new(TruncatedSpace::new(dim)?, 1, max_rank, c.seed)?;
    let reports = meta_lsi_sweep(&sampler, params, samples, c.exec)?;
    let eta = eta_th(params);
    let failed = reports.iter().filter(|r| !r.pass).count();
    let note = format!(
        "eta_th {:.9} at x {:.6}; min Y(rho^) - eta_th {:.3e}; {failed} of {samples} samples fail",
        eta.value,
        eta.argmin_x,
        min_of(reports.iter().map(|r| r.eta_margin))
    );
    Ok(vec![
        Check::at_least(
            "meta.rearrangement_slack",
            min_of(
                reports
                    .iter()
                    .map(|r| r.rearrangement_margin + r.rearrangement_tolerance),
            ),
            0.0,
            0.0,
        )
        .note(format!(
            "min over samples of Y(rho) - Y(rho^) + tolerance; min Y(rho) - Y(rho^) {:.3e}",
            min_of(reports.iter().map(|r| r.rearrangement_margin))
        )),
        Check::at_least(
            "meta.eta_slack",
            min_of(reports.iter().map(|r| r.eta_margin + r.eta_tolerance)),
            0.0,
            0.0,
        )
        .note(note),
    ])
}

fn lsi(c: &Common, p: f64, dim: usize, samples: usize, max_rank: usize) -> Result<Vec<Check>> {
    let ou = OUParams::new(c.beta)?;
    let alpha = alpha_p_closed(p, c.beta)?;
    let sampler = Sampler::new(TruncatedSpace::new(dim)?, 1, max_rank, c.seed)?;
    let ratios = run(samples, c.exec, |i| lsi_ratio(&sampler.state(i)?, p, &ou))?;
    let mut thermal = f64::INFINITY;
    for i in 0..500 {
        thermal = thermal.min(thermal_ratio((i as f64 + 0.5) / 500.0, p, c.beta)? - alpha);
    }
    let tight = (thermal_ratio(1.0 - 1e-4, p, c.beta)? - alpha).abs() / alpha;
    let mut phi_min = f64::INFINITY;
    for i in 0..200 {
        for j in 0..200 {
            phi_min = phi_min.min(phi((i as f64 + 0.5) / 200.0, (j as f64 + 0.5) / 200.0, p));
        }
    }
    Ok(vec![
        Check::at_least(
            "lsi.sample_ratio_excess",
            min_of(ratios.iter().map(|r| r.value - alpha)),
            0.0,
            1e-6,
        )
        .note(format!(
            "min E_p/D - alpha_p over {samples} samples, alpha_p {alpha:.9}"
        )),
        Check::at_least("lsi.thermal_ratio_excess", thermal, 0.0, 1e-12),
        Check::at_most("lsi.thermal_ratio_gap_near_reference", tight, 0.0, 0.01)
            .note("relative gap to alpha_p at y = 1 - 1e-4"),
        Check::at_least("lsi.phi_min", phi_min, 0.0, 1e-12),
    ])
}

fn spectrum(c: &Common, dims: &[usize], samples: usize) -> Result<Vec<Check>> {
    let ou = OUParams::new(c.beta)?;
    let dirs = [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::from_polar(1.0, 0.7)];
    let mut interior: f64 = 0.0;
    let mut decreasing = 0usize;
    let mut compared = 0usize;
    for k in 0..=5 {
        for &z in &dirs {
            let a = eigen_check(k, z, &ou, dims[0])?;
            interior = interior.max(a.interior);
            if let Some(&n2) = dims.get(1) {
                let b = eigen_check(k, z, &ou, n2)?;
                let (hi, lo) = if dims[0] > n2 { (a, b) } else { (b, a) };
                compared += 1;
                decreasing += usize::from(hi.weighted < lo.weighted || lo.weighted < 1e-14);
            }
        }
    }
    let gap = spectral_gap(&ou, dims[0])?;
    let space = TruncatedSpace::new(BLOCK_LEVELS)?;
    let sampler = Sampler::new(space, 1, 1, c.seed)?;
    let blocks = run(samples, c.exec, |i| {
        diagonal_decomposition(&sampler.hermitian(i))
            .blocks()
            .values()
            .map(|b| spectral_block_check(b, &ou).map(|r| r.margin + r.tolerance))
            .collect::<bosonic_lsi::Result<Vec<f64>>>()
    })?;
    let lspace = TruncatedSpace::new(ENTROPY_LEVELS)?;
    let sigma = reference_state(&ou, lspace)?;
    let psd = Sampler::new(lspace, 1, ENTROPY_LEVELS, c.seed)?;
    let entropy_margins = run(samples, c.exec, |i| {
        let x = psd.psd(i)?;
        let u = lemma45_check(&x, &sigma, Weights::Uniform)?.margin;
        let e = lemma45_check(&x, &sigma, Weights::Exponential { c: 3f64.ln() })?.margin;
        Ok(u.min(e))
    })?;
    let mut out = vec![Check::at_most("spectrum.eigen_interior_residual", interior, 0.0, 1e-8)
        .note(format!("k = 0..5, three directions, {} levels", dims[0]))];
    if compared > 0 {
        out.push(
            Check::at_least(
                "spectrum.eigen_residual_decreasing",
                decreasing as f64,
                compared as f64,
                0.0,
            )
            .note(format!(
                "weighted residual smaller at the larger of {} and {} levels",
                dims[0], dims[1]
            )),
        );
    }
    out.push(Check::within("spectrum.gap", gap.value, ou.gap(), 1e-6).note(format!(
        "{} retained, {} discarded eigenvalues",
        gap.retained, gap.discarded
    )));
    out.push(
        Check::at_least(
            "spectrum.block_bound_slack",
            min_of(blocks.into_iter().flatten()),
            0.0,
            0.0,
        )
        .note(format!("{samples} Hermitian samples on {BLOCK_LEVELS} levels")),
    );
    out.push(
        Check::at_least("spectrum.block_entropy_margin", min_of(entropy_margins), 0.0, 1e-8).note(format!(
            "{samples} positive samples on {ENTROPY_LEVELS} levels, uniform and exponential weights"
        )),
    );
    Ok(out)
}

fn family(class: ChannelClass, beta: f64) -> Result<SemigroupParams> {
    Ok(ChannelFamily::with_default_rate(class, beta).semigroup()?)
}

#[allow(clippy::too_many_arguments)]
fn cmoe(
    c: &Common,
    class: ChannelClass,
    dims: &[usize],
    samples: usize,
    support: usize,
    max_rank: usize,
    t_max: Option<f64>,
    steps: Option<usize>,
) -> Result<Vec<Check>> {
    let amp = class == ChannelClass::Amplifier;
    let p = family(class, c.beta)?;
    let t_max = t_max.unwrap_or(if amp { 0.5 } else { 2.0 });
    let steps = steps.unwrap_or(if amp { 10 } else { 20 });
    let sampler = Sampler::with_support(TruncatedSpace::new(dims[0])?, support, 1, max_rank, c.seed)?;
    let trajectories = cmoe_sweep(&sampler, &p, t_max, steps, samples, c.exec)?;
    let flagged = trajectories.iter().filter(|t| !t.conclusive()).count();
    let shortest = trajectories
        .iter()
        .filter_map(|t| t.times.last().copied())
        .fold(t_max, f64::min);
    let mut out = vec![Check::at_least(
        format!("cmoe.{class}.min_margin"),
        min_of(trajectories.iter().map(|t| t.min_margin())),
        0.0,
        1e-6,
    )
    .note(format!(
        "S(Phi_t rho) - S(Phi_t tau) over {samples} samples, t <= {t_max}"
    ))
    .inconclusive_if(
        flagged > 0,
        format!(
            "{flagged} of {samples} trajectories hit the tail guard at {} levels (earliest stop t = {shortest}); \
             use a shorter --t-max or a larger --dim",
            dims[0]
        ),
    )];

    let flow_levels = dims.get(1).copied().unwrap_or(if amp { 80 } else { 60 });
    let xs: &[f64] = if amp { &[0.1, 0.3] } else { &[0.1, 0.3, 0.5] };
    let mut dev: f64 = 0.0;
    for &x in xs {
        for t in [0.25, 0.5, 0.75, 1.0] {
            dev = dev.max(thermal_flow_deviation(ThermalParam::new(x)?, &p, flow_levels, t)?);
        }
    }
    out.push(
        Check::at_most(format!("cmoe.{class}.thermal_flow"), dev, 0.0, 1e-7).note(format!(
            "Fock-evolved vs analytic thermal entropy, {flow_levels} levels, x in {xs:?}, t <= 1"
        )),
    );

    // thermal infimum of dS/dt + alpha S, saturated at tau_0.4
    let alpha = g(SATURATOR_X, &p)?;
    let space = TruncatedSpace::new(SATURATOR_LEVELS)?;
    let ginibre = Sampler::new(space, 1, 5, c.seed)?;
    let tau = thermal_state(ThermalParam::new(SATURATOR_X)?, space)?;
    let mut states = ginibre.states(samples, c.exec)?;
    for i in 0..samples {
        let lambda = 10f64.powf(-3.0 + 2.0 * i as f64 / (samples.max(2) - 1) as f64);
        let r = ginibre.state(samples + i)?;
        let mix = &tau.op().scale_real(1.0 - lambda) + &r.op().scale_real(lambda);
        states.push(State::new(mix, (1.0 - lambda) * tau.tail_mass())?);
    }
    if !states.is_empty() {
        let rep = theorem52_check(&p, alpha, &states, c.exec)?;
        out.push(
            Check::at_least(format!("cmoe.{class}.entropy_flow_margin"), rep.margin, 0.0, 1e-6).note(format!(
                "min dS/dt + alpha S - eta_th over {} states, alpha {alpha:.6}, eta_th {:.9}",
                rep.samples, rep.eta_th
            )),
        );
        out.push(Check::within(
            format!("cmoe.{class}.entropy_flow_argmin"),
            rep.argmin_x,
            SATURATOR_X,
            1e-6,
        ));
    }
    Ok(out)
}

fn generators(c: &Common, dim: usize, support: usize, max_rank: usize) -> Result<Vec<Check>> {
    let sampler = Sampler::with_support(TruncatedSpace::new(dim)?, support, max_rank, max_rank, c.seed)?;
    let rho = sampler.state(0)?;
    let mut out = Vec::new();
    for class in [
        ChannelClass::Attenuator,
        ChannelClass::Additive,
        ChannelClass::Amplifier,
    ] {
        let p = family(class, c.beta)?;
        let r1 = generator_fd_check(&p, &rho, 1e-3)?;
        let r2 = generator_fd_check(&p, &rho, 5e-4)?;
        out.push(
            Check::within(format!("generators.{class}.halving_ratio"), r1 / r2, 2.0, 0.3)
                .note(format!("residual {r1:.3e} at dt 1e-3, {r2:.3e} at dt 5e-4")),
        );
    }
    let att = family(ChannelClass::Attenuator, c.beta)?;
    let ampl = family(ChannelClass::Amplifier, c.beta)?;
    let b = c.beta;
    let dev = max_of([
        (att.nu0() - (-b / 2.0).exp()).abs(),
        (att.nu1() - (b / 2.0).exp()).abs(),
        (ampl.nu0() - att.nu1()).abs(),
        (ampl.nu1() - att.nu0()).abs(),
    ]);
    out.push(Check::at_most("generators.rate_map", dev, 0.0, 1e-12));
    Ok(out)
}

fn multimode(c: &Common, p: f64, dims: &[usize], samples: usize) -> Result<Vec<Check>> {
    let levels = dims[0];
    let lsi_levels = dims.get(1).copied().unwrap_or(levels);
    let space = TruncatedSpace::multimode(levels, 2)?;
    let ou = UpsilonParams::ornstein_uhlenbeck(p, c.beta)?;
    let general = UpsilonParams::new(0.3, 0.9, 0.4, p)?;
    // n1 + n2 <= levels - 2, where the truncated beam splitter is exact
    let headroom = Sampler::with_support(space, levels / 2, 1, 4.min((levels / 2).pow(2)), c.seed)?;
    let passive = run(samples, c.exec, |i| {
        let kind = GaussianUnitaryKind::Passive {
            theta: 0.3 + 0.1 * i as f64,
            phase: 0.5 * i as f64,
        };
        Ok(lemma31_check(&headroom.state(i)?, &ou, &kind, 1e-7)?.margin.abs())
    })?;
    let squeeze_support = Sampler::with_support(space, 4.min(levels / 2), 1, 1, c.seed + 1)?;
    let unitary = run(samples, c.exec, |i| {
        let st = squeeze_support.diagonal_state(i)?;
        let s = 0.02 + 0.01 * i as f64;
        let sq = lemma31_check(&st, &ou, &GaussianUnitaryKind::Squeezer([s, -0.5 * s]), 1e-7)?;
        let disp = lemma31_check(
            &st,
            &general,
            &GaussianUnitaryKind::Displacement([(s, 0.5 * s), (-s, 0.0)]),
            1e-7,
        )?;
        Ok((sq, disp))
    })?;
    let unmet = unitary
        .iter()
        .filter(|(a, b)| !(a.precondition_ok && b.precondition_ok))
        .count();
    let mono = min_of(
        unitary
            .iter()
            .filter(|(a, b)| a.precondition_ok && b.precondition_ok)
            .map(|(sq, d)| sq.margin.min(d.margin - d.expected_shift)),
    );
    let eta = eta_th(&ou).value;
    let diag_support = Sampler::with_support(space, 5.min(levels / 2), 1, 1, c.seed + 2)?;
    let diag = run(samples, c.exec, |i| {
        let st = diag_support.diagonal_state(i)?;
        let u = passive_unitary(0.2 + 0.13 * i as f64, 0.7 * i as f64, space)?;
        Ok(upsilon_m(&st.conjugate_by(&u), &ou)? - eta)
    })?;
    let oup = OUParams::new(c.beta)?;
    let bound = multimode_alpha2_bound(2, c.beta)?;
    let a2 = 4.0 * (c.beta / 4.0).sinh().powi(2) / c.beta;
    let independent = 1.0 / ((2.0 + 5f64.ln()) / (c.beta / 2.0).sinh() + 1.0 / a2);
    let lsi_space = TruncatedSpace::multimode(lsi_levels, 2)?;
    let psd = Sampler::new(lsi_space, 1, 4, c.seed + 3)?;
    let lsi = run(samples, c.exec, |i| Ok(multimode_lsi_check(&psd.psd(i)?, &oup)?.margin))?;
    Ok(vec![
        Check::at_most("multimode.passive_invariance", max_of(passive), 0.0, 1e-7).note(format!(
            "|Y_m(U rho U*) - Y_m(rho)| on {samples} samples, {levels} levels per mode"
        )),
        Check::at_least("multimode.squeezer_displacement_margin", mono, 0.0, 1e-7)
            .note(format!("{unmet} samples skipped for unmet preconditions")),
        Check::at_least("multimode.diagonal_passive_vs_eta", min_of(diag), 0.0, 1e-5),
        Check::within("multimode.lsi_bound_formula", bound, independent, 1e-14),
        Check::at_least("multimode.lsi_margin", min_of(lsi), 0.0, 1e-10).note(format!(
            "bound {bound:.6}, {samples} samples on {lsi_levels} levels per mode"
        )),
    ])
}
