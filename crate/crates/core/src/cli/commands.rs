use std::path::Path;

use serde::Serialize;

use super::config::RunConfig;
use super::svg::line_plot;
use super::{Command, Outcome};
use crate::error::{Error, Result};
use crate::geometry::{path_profile, t_grid, Path as LatentPath, PathKind};
use crate::numerics::{NeumaierSum, RngStream};
use crate::priors::{LatentPrior, LatentVector};
use crate::toygan::{discriminator_profile, train_toy_gan, GanConfig, ToyGan};
use crate::verify::{
    fmt_sig6, ks_critical_value_1pct, latent_algebra_score, mc_endpoint_check, mc_kl_estimate,
    mc_midpoint_check, synthetic_attribute_groups, AttributeGroups, LasNormalization, McReport,
    Verdict, CSV_HEADER,
};

pub fn dispatch(command: Command, cfg: &RunConfig) -> Result<Outcome> {
    match command {
        Command::Sample => cmd_sample(cfg),
        Command::Kl => cmd_kl(cfg),
        Command::McVerify => cmd_mc_verify(cfg),
        Command::Traverse => cmd_traverse(cfg),
        Command::TrainToy => cmd_train_toy(cfg),
        Command::Las => cmd_las(cfg),
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| Error::io(&path, e))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn reports_csv(reports: &[&McReport]) -> String {
    let mut s = format!("{CSV_HEADER}\n");
    for r in reports {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    s
}

fn outcome_of<'a>(reports: impl IntoIterator<Item = &'a McReport>) -> Outcome {
    if reports.into_iter().any(|r| r.verdict == Verdict::Inconsistent) {
        Outcome::Inconsistent
    } else {
        Outcome::Success
    }
}

#[derive(Serialize)]
struct SampleSummary {
    prior: LatentPrior,
    seed: u64,
    n: usize,
    mean_sqnorm: f64,
    var_sqnorm: f64,
    claimed_mean: f64,
    claimed_var: f64,
}

pub fn cmd_sample(cfg: &RunConfig) -> Result<Outcome> {
    if cfg.n == 0 {
        return Err(Error::InvalidConfig("sample needs --n ≥ 1".into()));
    }
    let mut rng = RngStream::new(cfg.seed, 0);
    let zs: Vec<LatentVector> = (0..cfg.n).map(|_| cfg.prior.sample(&mut rng)).collect();
    let sq: Vec<f64> = zs.iter().map(LatentVector::norm_sq).collect();
    let n = sq.len() as f64;
    let mean = sq.iter().copied().collect::<NeumaierSum>().value() / n;
    let var = if sq.len() > 1 {
        sq.iter().map(|x| (x - mean) * (x - mean)).collect::<NeumaierSum>().value() / (n - 1.0)
    } else {
        0.0
    };
    let law = cfg.prior.squared_norm_distribution();
    let summary = SampleSummary {
        prior: cfg.prior,
        seed: cfg.seed,
        n: cfg.n,
        mean_sqnorm: mean,
        var_sqnorm: var,
        claimed_mean: law.mean(),
        claimed_var: law.variance(),
    };

    if cfg.formats.csv {
        let d = cfg.prior.dim();
        let mut s: String = (0..d).map(|i| format!("z{i}")).collect::<Vec<_>>().join(",");
        s.push('\n');
        for z in &zs {
            let row: Vec<String> = z.as_slice().iter().map(|&x| fmt_sig6(x)).collect();
            s.push_str(&row.join(","));
            s.push('\n');
        }
        write_file(&cfg.out, "samples.csv", &s)?;
        let summary_csv = format!(
            "n,mean_sqnorm,var_sqnorm,claimed_mean,claimed_var\n{},{},{},{},{}\n",
            cfg.n,
            fmt_sig6(mean),
            fmt_sig6(var),
            fmt_sig6(law.mean()),
            fmt_sig6(law.variance())
        );
        write_file(&cfg.out, "summary.csv", &summary_csv)?;
    }
    if cfg.formats.json {
        #[derive(Serialize)]
        struct SampleDoc<'a> {
            summary: &'a SampleSummary,
            vectors: &'a [LatentVector],
        }
        write_file(
            &cfg.out,
            "samples.json",
            &to_json(&SampleDoc {
                summary: &summary,
                vectors: &zs,
            }),
        )?;
    }
    println!(
        "{} d={} n={}: mean ‖z‖² = {} (law {}), var ‖z‖² = {} (law {})",
        cfg.prior.family().name(),
        cfg.prior.dim(),
        cfg.n,
        fmt_sig6(mean),
        fmt_sig6(law.mean()),
        fmt_sig6(var),
        fmt_sig6(law.variance())
    );
    Ok(Outcome::Success)
}

pub fn cmd_kl(cfg: &RunConfig) -> Result<Outcome> {
    let mut reports = Vec::new();
    println!("dim  closed_form_nats  mc_estimate  std_error  verdict");
    for &d in &cfg.dims {
        let prior = cfg.prior.with_dim(d)?;
        let closed = prior.midpoint_kl();
        let end = prior.squared_norm_distribution();
        let mid = prior.midpoint_squared_norm_distribution().params;
        let r = mc_kl_estimate(end, mid, cfg.n, &RngStream::new(cfg.seed, d as u64))?;
        println!(
            "{d}  {}  {}  {}  {}",
            fmt_sig6(closed),
            fmt_sig6(r.estimate),
            fmt_sig6(r.std_error),
            r.verdict.name()
        );
        reports.push(r);
    }
    let refs: Vec<&McReport> = reports.iter().collect();
    if cfg.formats.csv {
        write_file(&cfg.out, "kl.csv", &reports_csv(&refs))?;
    }
    if cfg.formats.json {
        write_file(&cfg.out, "kl.json", &to_json(&reports))?;
    }
    Ok(outcome_of(reports.iter()))
}

pub fn cmd_mc_verify(cfg: &RunConfig) -> Result<Outcome> {
    let prior = &cfg.prior;
    let endpoint = mc_endpoint_check(prior, cfg.n, &RngStream::new(cfg.seed, 0))?;
    let midpoint = mc_midpoint_check(prior, cfg.pairs, &RngStream::new(cfg.seed, 1))?;
    let kl = mc_kl_estimate(
        prior.squared_norm_distribution(),
        prior.midpoint_squared_norm_distribution().params,
        cfg.n.max(10_000),
        &RngStream::new(cfg.seed, 2),
    )?;
    let reports = vec![
        endpoint.mean.clone(),
        endpoint.scaled_variance.clone(),
        midpoint,
        kl,
    ];
    for r in &reports {
        let crit = r
            .ks_statistic
            .map(|ks| {
                format!(
                    " ks={} (1% critical {})",
                    fmt_sig6(ks),
                    fmt_sig6(ks_critical_value_1pct(r.n_samples as usize))
                )
            })
            .unwrap_or_default();
        println!(
            "{}: {} ± {} claimed {}{} → {}",
            r.quantity,
            fmt_sig6(r.estimate),
            fmt_sig6(r.std_error),
            r.claimed_value.map(fmt_sig6).unwrap_or_else(|| "-".into()),
            crit,
            r.verdict.name()
        );
    }
    let refs: Vec<&McReport> = reports.iter().collect();
    if cfg.formats.csv {
        write_file(&cfg.out, "mc_reports.csv", &reports_csv(&refs))?;
    }
    if cfg.formats.json {
        write_file(&cfg.out, "mc_reports.json", &to_json(&reports))?;
    }
    Ok(outcome_of(reports.iter()))
}

#[derive(Serialize)]
struct NormProfile {
    prior: LatentPrior,
    scheme: PathKind,
    pairs: usize,
    seed: u64,
    equal_norm: bool,
    ts: Vec<f64>,
    mean_norm: Vec<f64>,
    std_norm: Vec<f64>,
    mean_midpoint_ratio: f64,
}

fn draw_path(cfg: &RunConfig, rng: &mut RngStream) -> LatentPath {
    loop {
        let z0 = cfg.prior.sample(rng);
        let mut z1 = cfg.prior.sample(rng);
        if cfg.equal_norm {
            let (n0, n1) = (z0.norm(), z1.norm());
            if n1 == 0.0 {
                continue;
            }
            let coords = z1.as_slice().iter().map(|x| x * n0 / n1).collect();
            z1 = LatentVector::new(coords).expect("finite rescale");
        }
        match LatentPath::new(cfg.scheme, z0, z1) {
            Ok(p) => return p,
            Err(Error::DegenerateAngle { .. }) => continue,
            Err(e) => unreachable!("same-prior draws share a dimension: {e}"),
        }
    }
}

pub fn cmd_traverse(cfg: &RunConfig) -> Result<Outcome> {
    if cfg.pairs == 0 {
        return Err(Error::InvalidConfig("traverse needs --pairs ≥ 1".into()));
    }
    match &cfg.checkpoint {
        Some(path) => traverse_discriminator(cfg, path),
        None => traverse_norms(cfg),
    }
}

fn traverse_norms(cfg: &RunConfig) -> Result<Outcome> {
    let mut rng = RngStream::new(cfg.seed, 0);
    let ts = t_grid(cfg.grid.max(2));
    let mut rows = Vec::with_capacity(cfg.pairs);
    let mut ratios = NeumaierSum::new();
    for _ in 0..cfg.pairs {
        let p = path_profile(&draw_path(cfg, &mut rng), cfg.grid)?;
        ratios.add(p.midpoint_norm_ratio);
        rows.push(p.norms);
    }
    let n = cfg.pairs as f64;
    let mean_norm: Vec<f64> = (0..ts.len())
        .map(|j| rows.iter().map(|r| r[j]).collect::<NeumaierSum>().value() / n)
        .collect();
    let std_norm: Vec<f64> = (0..ts.len())
        .map(|j| {
            let m = mean_norm[j];
            let ss = rows.iter().map(|r| (r[j] - m).powi(2)).collect::<NeumaierSum>().value();
            if cfg.pairs > 1 {
                (ss / (n - 1.0)).sqrt()
            } else {
                0.0
            }
        })
        .collect();
    let doc = NormProfile {
        prior: cfg.prior,
        scheme: cfg.scheme,
        pairs: cfg.pairs,
        seed: cfg.seed,
        equal_norm: cfg.equal_norm,
        ts,
        mean_norm,
        std_norm,
        mean_midpoint_ratio: ratios.value() / n,
    };
    if cfg.formats.csv {
        let mut s = String::from("t,mean_norm,std_norm\n");
        for j in 0..doc.ts.len() {
            s.push_str(&format!(
                "{},{},{}\n",
                fmt_sig6(doc.ts[j]),
                fmt_sig6(doc.mean_norm[j]),
                fmt_sig6(doc.std_norm[j])
            ));
        }
        write_file(&cfg.out, "norms.csv", &s)?;
    }
    if cfg.formats.json {
        write_file(&cfg.out, "norms.json", &to_json(&doc))?;
    }
    if cfg.formats.svg {
        let title = format!(
            "{} path norms, {} prior d={}",
            cfg.scheme.name(),
            cfg.prior.family().name(),
            cfg.prior.dim()
        );
        write_file(
            &cfg.out,
            "norms.svg",
            &line_plot(&title, "‖h(t)‖", &doc.ts, &doc.mean_norm, Some(&doc.std_norm)),
        )?;
    }
    println!(
        "{} {} d={}: mean midpoint/endpoint norm ratio over {} pairs = {}",
        cfg.scheme.name(),
        cfg.prior.family().name(),
        cfg.prior.dim(),
        cfg.pairs,
        fmt_sig6(doc.mean_midpoint_ratio)
    );
    Ok(Outcome::Success)
}

fn traverse_discriminator(cfg: &RunConfig, path: &Path) -> Result<Outcome> {
    let gan = ToyGan::load(path)?;
    let prior = if cfg.prior_explicit {
        cfg.prior
    } else {
        *gan.prior()
    };
    let profile = discriminator_profile(
        &gan,
        &prior,
        cfg.scheme,
        cfg.pairs,
        cfg.grid,
        &RngStream::new(cfg.seed, 0),
    )?;
    if cfg.formats.csv {
        write_file(&cfg.out, "profile.csv", &profile.to_csv())?;
    }
    if cfg.formats.json {
        write_file(&cfg.out, "profile.json", &to_json(&profile))?;
    }
    if cfg.formats.svg {
        let title = format!(
            "{} traversal, {} prior d={}, {} trajectories",
            cfg.scheme.name(),
            prior.family().name(),
            prior.dim(),
            cfg.pairs
        );
        write_file(
            &cfg.out,
            "profile.svg",
            &line_plot(&title, "D(G(h(t)))", &profile.ts, &profile.mean, Some(&profile.std)),
        )?;
    }
    println!(
        "{} {} d={}: endpoint {} midpoint {} dip {} max deviation {} mean std {}",
        cfg.scheme.name(),
        prior.family().name(),
        prior.dim(),
        fmt_sig6(profile.endpoint_mean()),
        fmt_sig6(profile.midpoint_mean()),
        fmt_sig6(profile.dip_depth()),
        fmt_sig6(profile.max_deviation()),
        fmt_sig6(profile.mean_std())
    );
    Ok(Outcome::Success)
}

pub fn cmd_train_toy(cfg: &RunConfig) -> Result<Outcome> {
    let gan_cfg = GanConfig {
        prior: cfg.prior,
        train_steps: cfg.steps,
        seed: cfg.seed,
        ..GanConfig::default()
    };
    let (gan, report) = train_toy_gan(&gan_cfg)?;
    let ckpt = cfg
        .checkpoint
        .clone()
        .unwrap_or_else(|| cfg.out.join("checkpoint.json"));
    if let Some(parent) = ckpt.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    gan.save(&ckpt)?;
    if cfg.formats.csv {
        let mut s = String::from("step,d_loss,g_loss\n");
        for (i, (d, g)) in report.d_loss.iter().zip(&report.g_loss).enumerate() {
            s.push_str(&format!("{i},{},{}\n", fmt_sig6(*d), fmt_sig6(*g)));
        }
        write_file(&cfg.out, "losses.csv", &s)?;
    }
    if cfg.formats.json {
        write_file(&cfg.out, "losses.json", &to_json(&report))?;
    }
    let acc = gan.discriminator_accuracy(2000, &mut RngStream::new(cfg.seed, 100))?;
    println!(
        "trained {} prior d={} for {} steps; final d_loss {} g_loss {}; held-out D accuracy {}; checkpoint {}",
        cfg.prior.family().name(),
        cfg.prior.dim(),
        cfg.steps,
        report.d_loss.last().map(|x| fmt_sig6(*x)).unwrap_or_else(|| "-".into()),
        report.g_loss.last().map(|x| fmt_sig6(*x)).unwrap_or_else(|| "-".into()),
        fmt_sig6(acc),
        ckpt.display()
    );
    Ok(Outcome::Success)
}

/// Reads grouped vectors: header `pair,group,z0,…`, `group` one of
/// `AB`, `aB`, `ab`, `Ab`.
pub fn read_grouped_vectors(text: &str, n_pairs: usize) -> Result<Vec<AttributeGroups>> {
    let mut groups = vec![AttributeGroups::default(); n_pairs];
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or(Error::EmptyInput("vectors CSV"))?;
    if !header.starts_with("pair,group") {
        return Err(Error::InvalidConfig(
            "vectors CSV must start with a pair,group,z0,... header".into(),
        ));
    }
    for (i, line) in lines.enumerate() {
        let mut cols = line.split(',').map(str::trim);
        let bad = || Error::InvalidConfig(format!("vectors CSV row {}: malformed", i + 2));
        let pair: usize = cols.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        let group = cols.next().ok_or_else(bad)?.to_string();
        let coords = cols
            .map(|s| s.parse::<f64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        let g = groups.get_mut(pair).ok_or_else(|| {
            Error::MissingGroup(format!("row {} names pair {pair} of {n_pairs}", i + 2))
        })?;
        let z = LatentVector::new(coords)?;
        match group.as_str() {
            "AB" => g.both.push(z),
            "aB" => g.only_b.push(z),
            "ab" => g.neither.push(z),
            "Ab" => g.only_a.push(z),
            other => {
                return Err(Error::InvalidConfig(format!(
                    "vectors CSV row {}: unknown group {other:?}",
                    i + 2
                )))
            }
        }
    }
    Ok(groups)
}

pub fn cmd_las(cfg: &RunConfig) -> Result<Outcome> {
    let n_attr = cfg.attributes;
    if n_attr < 2 {
        return Err(Error::InvalidConfig("las needs --attributes ≥ 2".into()));
    }
    let n_pairs = n_attr * (n_attr - 1) / 2;
    let groups = match &cfg.vectors {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
            read_grouped_vectors(&text, n_pairs)?
        }
        None => synthetic_attribute_groups(
            n_attr,
            cfg.prior.dim(),
            cfg.per_group,
            cfg.noise,
            &mut RngStream::new(cfg.seed, 0),
        )?,
    };
    let global = latent_algebra_score(&groups, n_attr, LasNormalization::Global)?;
    let per_pair = latent_algebra_score(&groups, n_attr, LasNormalization::PerPair)?;
    let primary = if cfg.per_pair { per_pair } else { global };

    #[derive(Serialize)]
    struct LasDoc {
        n_attributes: usize,
        n_pairs: usize,
        source: String,
        global: f64,
        per_pair: f64,
    }
    let doc = LasDoc {
        n_attributes: n_attr,
        n_pairs,
        source: cfg
            .vectors
            .as_ref()
            .map(|p| p.display().to_string())
            .unwrap_or_else(|| "synthetic".into()),
        global,
        per_pair,
    };
    if cfg.formats.csv {
        let s = format!(
            "normalization,n_attributes,n_pairs,score\nglobal,{n_attr},{n_pairs},{}\nper_pair,{n_attr},{n_pairs},{}\n",
            fmt_sig6(global),
            fmt_sig6(per_pair)
        );
        write_file(&cfg.out, "las.csv", &s)?;
    }
    if cfg.formats.json {
        write_file(&cfg.out, "las.json", &to_json(&doc))?;
    }
    println!("LAS = {}", fmt_sig6(primary));
    Ok(Outcome::Success)
}
