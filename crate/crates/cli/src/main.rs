//! Command line front end: every evaluator behind a subcommand, plus a
//! one-shot `verify` running the full cross-check suite.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error.
//! All output is deterministic given (flags, seed); reports carry no
//! timing or thread information, so fixed seeds give identical bytes for
//! any worker count.

mod tensor;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use jetlab_core::checks::{all_passed, render_text, run_all, CheckConfig};
use jetlab_core::curvature::{
    expected_curvature, horizontal_curvature, mc_expected_curvature, q_index_partition,
    sample_jet_point, CurvatureTensor,
};
use jetlab_core::gg::{asymptotic_fiber_dimension, fiber_dimension_table, JetSpec};
use jetlab_core::hermitian::HermitianForm;
use jetlab_core::morse::{
    eta_top_intersection, general_type_threshold, leading_constant, order_sparsity_check,
    CompleteIntersectionCut, HypersurfaceSpec,
};
use jetlab_core::rational::{parse_rational, rat_int, to_f64, Rational};
use jetlab_core::semple::{
    derived_orbifold_weights, det_vk_closed, det_vk_step, dim_gg_locus, dim_semple,
    euler_rank_check, induced_weights, pullback_class, tautological_twist,
    validate_rank_sequence, PicardClass, Ramification, RankSequence, TowerSpec,
};
use jetlab_core::sphere::{dirichlet_moment, mc_moments, partition_identity, sphere_quadratic_average, BlockConfig};
use jetlab_core::RandomStream;
use num_traits::ToPrimitive;

/// Write a line to stdout; when the reading end has gone away (e.g. the
/// output is piped into `head`), die quietly with the usual pipe status
/// instead of panicking.
macro_rules! outln {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if writeln!(std::io::stdout(), $($arg)*).is_err() {
            std::process::exit(141);
        }
    }};
}

/// [`outln!`] without the trailing newline.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let mut stdout = std::io::stdout();
        if write!(stdout, $($arg)*).and_then(|()| stdout.flush()).is_err() {
            std::process::exit(141);
        }
    }};
}

// Stream ids for CLI-side randomness, disjoint from the check suite's.
const STREAM_SPHERE_FORM: u64 = 101;
const STREAM_SPHERE_MC: u64 = 102;
const STREAM_MOMENTS: u64 = 103;
const STREAM_TENSOR: u64 = 104;
const STREAM_CURVATURE_MC: u64 = 105;
const STREAM_HISTOGRAM: u64 = 106;

#[derive(Parser)]
#[command(name = "jetlab", version, about = "Exact and Monte Carlo evaluators for weighted jet bundles")]
struct Cli {
    /// Seed for every sampled quantity.
    #[arg(long, global = true, env = "JETLAB_SEED", default_value_t = 0)]
    seed: u64,
    /// Sample count for Monte Carlo estimates.
    #[arg(long, global = true)]
    samples: Option<u64>,
    /// Worker threads for sampling (the output does not depend on it).
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Statistical acceptance band, in standard errors.
    #[arg(long, global = true, default_value_t = 4.0)]
    tol_sigma: f64,
    /// Emit machine-readable JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV (tabular commands only).
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Weighted jet fiber dimensions: exact, asymptotic, and their ratio.
    Ggdim {
        /// Jet order.
        #[arg(short)]
        k: usize,
        /// Coordinate width of each level.
        #[arg(short)]
        r: usize,
        /// Largest weighted degree to tabulate.
        #[arg(short)]
        m: usize,
    },
    /// Grouped-sphere moments: closed form vs Monte Carlo.
    Moments {
        /// Equal layout "k,r": k blocks of size r.
        #[arg(long)]
        equal: Option<String>,
        /// Cut layout "k,r,ell": k blocks of size r with ell shrunk to r-1.
        #[arg(long)]
        one_cut: Option<String>,
        /// Explicit block sizes, e.g. "3,3,2".
        #[arg(long)]
        sizes: Option<String>,
        /// Moment index per block, e.g. "1,0,2"; repeatable. Defaults to
        /// every index of total degree <= 2.
        #[arg(long)]
        alpha: Vec<String>,
        /// Also print the exact first-moment identity of the cut layout.
        #[arg(long, requires = "one_cut")]
        partition: bool,
    },
    /// Sphere average of a Hermitian form vs trace/dim.
    SphereAvg {
        /// Dimension of a seeded random Hermitian form.
        #[arg(long)]
        dim: Option<usize>,
        /// Diagonal entries of an explicit form, e.g. "1,-1,2".
        #[arg(long)]
        diag: Option<String>,
    },
    /// Expected horizontal curvature: exact vs Monte Carlo.
    Curvature {
        /// Tensor from a .json or .toml file.
        #[arg(long)]
        tensor_file: Option<PathBuf>,
        /// Zero tensor "n,r".
        #[arg(long)]
        zero: Option<String>,
        /// Kronecker tensor "n,r".
        #[arg(long)]
        kronecker: Option<String>,
        /// Seeded random tensor "n,r".
        #[arg(long)]
        random: Option<String>,
        /// Jet order.
        #[arg(short, default_value_t = 2)]
        k: usize,
        /// Also bucket sampled curvature spectra by negative-eigenvalue
        /// count, over this many points.
        #[arg(long)]
        histogram: Option<u64>,
    },
    /// Symbolic tower bookkeeping.
    Semple {
        #[command(subcommand)]
        command: SempleCommand,
    },
    /// Hypersurface intersections, sparsity test, leading constant.
    Morse {
        /// Dimension of the hypersurface.
        #[arg(long)]
        n: usize,
        /// Degree of the hypersurface.
        #[arg(long)]
        d: u64,
        /// Twist subtracted from the canonical class, as a rational.
        #[arg(long, default_value = "0")]
        eps: String,
        /// Jet order of the cut locus; enables the sparsity and
        /// leading-constant sections.
        #[arg(short)]
        k: Option<usize>,
        /// Cut orders "s1,s2,...", strictly increasing.
        #[arg(long, default_value = "")]
        orders: String,
        /// Cut degrees "d1,d2,...".
        #[arg(long, default_value = "")]
        degrees: String,
        /// Sparsity budget parameter.
        #[arg(long, default_value = "1/10")]
        delta: String,
        /// Bundle rank.
        #[arg(short, default_value_t = 2)]
        r: usize,
        /// Curvature-side factor of the leading constant; defaults to the
        /// computed intersection number.
        #[arg(long)]
        morse_value: Option<String>,
    },
    /// Run the full verification suite.
    Verify,
}

#[derive(Subcommand)]
enum SempleCommand {
    /// Dimension of the level-k stage.
    Dim {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(short)]
        k: usize,
    },
    /// Dimension of the weighted jet locus cut by ell conditions.
    GgDim {
        #[arg(long)]
        n: usize,
        #[arg(short)]
        k: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        ell: usize,
    },
    /// Determinant class: closed form, checked against the recursion.
    Det {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(short)]
        k: usize,
    },
    /// Tautological twist weights of index p.
    Twist {
        #[arg(long)]
        p: usize,
        #[arg(short)]
        k: usize,
        #[arg(long)]
        r: usize,
    },
    /// Twist weights induced by a rank sequence "r0,r1,...".
    Weights {
        #[arg(long)]
        ranks: String,
    },
    /// Admissibility report for a candidate rank sequence.
    Validate {
        #[arg(long)]
        ranks: String,
        /// Require the final rank to sit strictly below this ambient rank.
        #[arg(long)]
        ambient: Option<i64>,
    },
    /// Rank identities of the structural exact sequences.
    Euler {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(short)]
        k: usize,
    },
    /// Orbifold boundary weights (1 - s/rho)+ for orders "2,3,inf".
    Orbifold {
        #[arg(long)]
        rho: String,
        #[arg(long)]
        s: u64,
    },
    /// Parse a class, pull it back to a level, and print it.
    Pullback {
        /// Class in the additive grammar, e.g. "detV + O(1,0) - 2A".
        #[arg(long)]
        class: String,
        #[arg(long)]
        level: usize,
    },
}

type AppError = Box<dyn std::error::Error>;
type AppResult<T> = Result<T, AppError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = if cli.json {
        Format::Json
    } else if cli.csv {
        Format::Csv
    } else {
        Format::Text
    };
    match run(cli, format) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli, format: Format) -> AppResult<ExitCode> {
    let cfg = CheckConfig {
        seed: cli.seed,
        samples: cli.samples,
        tol_sigma: cli.tol_sigma,
        workers: cli.workers,
    };
    if let Some(n) = cfg.samples {
        if n < 2 {
            return Err("need at least two samples".into());
        }
    }
    if cfg.workers == 0 {
        return Err("need at least one worker".into());
    }
    match cli.command {
        Command::Ggdim { k, r, m } => cmd_ggdim(k, r, m, format),
        Command::Moments {
            equal,
            one_cut,
            sizes,
            alpha,
            partition,
        } => cmd_moments(&cfg, equal, one_cut, sizes, alpha, partition, format),
        Command::SphereAvg { dim, diag } => cmd_sphere_avg(&cfg, dim, diag, format),
        Command::Curvature {
            tensor_file,
            zero,
            kronecker,
            random,
            k,
            histogram,
        } => cmd_curvature(&cfg, tensor_file, zero, kronecker, random, k, histogram, format),
        Command::Semple { command } => cmd_semple(command, format),
        Command::Morse {
            n,
            d,
            eps,
            k,
            orders,
            degrees,
            delta,
            r,
            morse_value,
        } => cmd_morse(n, d, &eps, k, &orders, &degrees, &delta, r, morse_value, format),
        Command::Verify => cmd_verify(&cfg, format),
    }
}

fn no_csv(format: Format) -> AppResult<()> {
    if format == Format::Csv {
        return Err("csv output is not supported for this command".into());
    }
    Ok(())
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> AppResult<Vec<T>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<T>()
                .map_err(|_| format!("bad {what} entry {part:?}").into())
        })
        .collect()
}

fn parse_pair(text: &str, what: &str) -> AppResult<(usize, usize)> {
    let items: Vec<usize> = parse_list(text, what)?;
    match items[..] {
        [a, b] => Ok((a, b)),
        _ => Err(format!("{what} wants two comma-separated integers, got {text:?}").into()),
    }
}

fn parse_rat(text: &str, what: &str) -> AppResult<Rational> {
    parse_rational(text).ok_or_else(|| format!("bad {what} rational {text:?}").into())
}

fn emit_json(value: &serde_json::Value) {
    outln!("{}", serde_json::to_string_pretty(value).expect("valid JSON"));
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn cmd_ggdim(k: usize, r: usize, m_max: usize, format: Format) -> AppResult<ExitCode> {
    let table = fiber_dimension_table(JetSpec::new(k, r)?, m_max);
    let mut rows = Vec::new();
    for (m, dim) in table.iter().enumerate() {
        let asymptotic = if m == 0 {
            None
        } else {
            Some(to_f64(&asymptotic_fiber_dimension(
                JetSpec::new(k, r)?,
                m as u64,
            )?))
        };
        let ratio = asymptotic.map(|a| dim.to_f64().unwrap_or(f64::INFINITY) / a);
        rows.push((m, dim.to_string(), asymptotic, ratio));
    }
    match format {
        Format::Json => emit_json(&json!({
            "k": k,
            "r": r,
            "rows": rows.iter().map(|(m, dim, asym, ratio)| json!({
                "m": m,
                "dim": dim,
                "asymptotic": asym,
                "ratio": ratio,
            })).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            outln!("m,dim,asymptotic,ratio");
            for (m, dim, asym, ratio) in &rows {
                outln!(
                    "{m},{},{},{}",
                    csv_field(dim),
                    asym.map_or(String::new(), |a| format!("{a}")),
                    ratio.map_or(String::new(), |q| format!("{q}")),
                );
            }
        }
        Format::Text => {
            outln!("weighted fiber dimensions for k={k}, r={r}");
            outln!("{:>6}  {:>14}  {:>14}  {:>8}", "m", "dim", "asymptotic", "ratio");
            for (m, dim, asym, ratio) in &rows {
                outln!(
                    "{m:>6}  {dim:>14}  {:>14}  {:>8}",
                    asym.map_or("-".to_string(), |a| format!("{a:.4}")),
                    ratio.map_or("-".to_string(), |q| format!("{q:.4}")),
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn moment_indices(blocks: usize) -> Vec<Vec<u64>> {
    let mut alphas = vec![vec![0u64; blocks]];
    for i in 0..blocks {
        let mut a = vec![0u64; blocks];
        a[i] = 1;
        alphas.push(a);
    }
    for i in 0..blocks {
        for j in i..blocks {
            let mut a = vec![0u64; blocks];
            a[i] += 1;
            a[j] += 1;
            alphas.push(a);
        }
    }
    alphas
}

#[allow(clippy::too_many_arguments)]
fn cmd_moments(
    cfg: &CheckConfig,
    equal: Option<String>,
    one_cut: Option<String>,
    sizes: Option<String>,
    alpha: Vec<String>,
    partition: bool,
    format: Format,
) -> AppResult<ExitCode> {
    let sources = [equal.is_some(), one_cut.is_some(), sizes.is_some()];
    if sources.iter().filter(|&&s| s).count() != 1 {
        return Err("pick exactly one of --equal, --one-cut, --sizes".into());
    }
    let (layout, cut_dims) = if let Some(text) = &equal {
        let (k, r) = parse_pair(text, "--equal")?;
        (BlockConfig::equal(k, r)?, None)
    } else if let Some(text) = &one_cut {
        let items: Vec<usize> = parse_list(text, "--one-cut")?;
        let [k, r, ell] = items[..] else {
            return Err("--one-cut wants \"k,r,ell\"".into());
        };
        (BlockConfig::one_cut(k, r, ell)?, Some((k, r, ell)))
    } else {
        let sizes: Vec<usize> = parse_list(sizes.as_deref().unwrap_or(""), "--sizes")?;
        (BlockConfig::new(sizes)?, None)
    };
    let alphas: Vec<Vec<u64>> = if alpha.is_empty() {
        moment_indices(layout.block_count())
    } else {
        alpha
            .iter()
            .map(|text| parse_list::<u64>(text, "--alpha"))
            .collect::<AppResult<_>>()?
    };
    let samples = cfg.samples.unwrap_or(100_000);
    let rng = RandomStream::with_stream(cfg.seed, STREAM_MOMENTS);
    let estimates = mc_moments(&layout, &alphas, samples, cfg.workers, &rng)?;
    let mut rows = Vec::new();
    for (a, est) in alphas.iter().zip(&estimates) {
        let exact = dirichlet_moment(&layout, a)?;
        let exact_f = to_f64(&exact);
        let sigma = if est.stderr > 0.0 {
            (est.mean - exact_f).abs() / est.stderr
        } else {
            0.0
        };
        rows.push((a.clone(), exact.to_string(), exact_f, est.mean, est.stderr, sigma));
    }
    let identity = cut_dims
        .filter(|_| partition)
        .map(|(k, r, ell)| -> AppResult<_> {
            let pid = partition_identity(k, r, ell)?;
            Ok(json!({
                "cut_moment": pid.cut_moment.to_string(),
                "free_moment": pid.free_moment.to_string(),
                "combination": pid.combination.to_string(),
            }))
        })
        .transpose()?;
    match format {
        Format::Json => emit_json(&json!({
            "sizes": layout.sizes(),
            "samples": samples,
            "moments": rows.iter().map(|(a, exact, exact_f, mean, stderr, sigma)| json!({
                "alpha": a,
                "exact": exact,
                "exact_f64": exact_f,
                "mean": mean,
                "stderr": stderr,
                "sigma_deviation": sigma,
            })).collect::<Vec<_>>(),
            "partition": identity,
        })),
        Format::Csv => {
            outln!("alpha,exact,mean,stderr,sigma_deviation");
            for (a, exact, _, mean, stderr, sigma) in &rows {
                let alpha_text = a.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
                outln!("{},{},{mean},{stderr},{sigma}", csv_field(&alpha_text), csv_field(exact));
            }
        }
        Format::Text => {
            outln!(
                "moments over blocks {:?} at {samples} samples",
                layout.sizes()
            );
            for (a, exact, exact_f, mean, stderr, sigma) in &rows {
                outln!(
                    "alpha {a:?}: exact {exact} = {exact_f:.6}; mc {mean:.6} +- {stderr:.2e} ({sigma:.2} sigma)"
                );
            }
            if let Some(identity) = &identity {
                outln!(
                    "first moments: cut {}, free {}, combination {}",
                    identity["cut_moment"].as_str().unwrap_or("?"),
                    identity["free_moment"].as_str().unwrap_or("?"),
                    identity["combination"].as_str().unwrap_or("?"),
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_sphere_avg(
    cfg: &CheckConfig,
    dim: Option<usize>,
    diag: Option<String>,
    format: Format,
) -> AppResult<ExitCode> {
    no_csv(format)?;
    let form = match (&dim, &diag) {
        (Some(dim), None) => {
            let mut rng = RandomStream::with_stream(cfg.seed, STREAM_SPHERE_FORM);
            HermitianForm::random(*dim, &mut rng)?
        }
        (None, Some(text)) => {
            let entries: Vec<f64> = parse_list(text, "--diag")?;
            HermitianForm::diagonal(&entries)?
        }
        _ => return Err("pick exactly one of --dim, --diag".into()),
    };
    let samples = cfg.samples.unwrap_or(100_000);
    let rng = RandomStream::with_stream(cfg.seed, STREAM_SPHERE_MC);
    let avg = sphere_quadratic_average(&form, samples, cfg.workers, &rng)?;
    let sigma = if avg.estimate.stderr > 0.0 {
        (avg.estimate.mean - avg.exact).abs() / avg.estimate.stderr
    } else {
        0.0
    };
    match format {
        Format::Json => emit_json(&json!({
            "dim": form.dim(),
            "samples": samples,
            "exact": avg.exact,
            "mean": avg.estimate.mean,
            "stderr": avg.estimate.stderr,
            "sigma_deviation": sigma,
        })),
        _ => {
            outln!(
                "sphere average over C^{}: exact {:.6}; mc {:.6} +- {:.2e} ({sigma:.2} sigma, {samples} samples)",
                form.dim(),
                avg.exact,
                avg.estimate.mean,
                avg.estimate.stderr,
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_curvature(
    cfg: &CheckConfig,
    tensor_file: Option<PathBuf>,
    zero: Option<String>,
    kronecker: Option<String>,
    random: Option<String>,
    k: usize,
    histogram: Option<u64>,
    format: Format,
) -> AppResult<ExitCode> {
    no_csv(format)?;
    let sources = [
        tensor_file.is_some(),
        zero.is_some(),
        kronecker.is_some(),
        random.is_some(),
    ];
    if sources.iter().filter(|&&s| s).count() != 1 {
        return Err("pick exactly one of --tensor-file, --zero, --kronecker, --random".into());
    }
    let tensor = if let Some(path) = &tensor_file {
        tensor::load_tensor(path)?
    } else if let Some(text) = &zero {
        let (n, r) = parse_pair(text, "--zero")?;
        CurvatureTensor::zero(n, r)?
    } else if let Some(text) = &kronecker {
        let (n, r) = parse_pair(text, "--kronecker")?;
        CurvatureTensor::kronecker(n, r)?
    } else {
        let (n, r) = parse_pair(random.as_deref().unwrap_or(""), "--random")?;
        let mut rng = RandomStream::with_stream(cfg.seed, STREAM_TENSOR);
        CurvatureTensor::random(n, r, &mut rng)?
    };
    let samples = cfg.samples.unwrap_or(100_000);
    let exact = expected_curvature(&tensor, k)?;
    let rng = RandomStream::with_stream(cfg.seed, STREAM_CURVATURE_MC);
    let mc = mc_expected_curvature(&tensor, k, samples, cfg.workers, &rng)?;
    let n = tensor.base_dim();
    let mut entries = Vec::new();
    let mut max_sigma = 0.0f64;
    for i in 0..n {
        for j in i..n {
            let e = exact.entry(i, j);
            let m = mc.mean.entry(i, j);
            let se = mc.stderr_entry(i, j);
            let sigma = if se > 0.0 { (m - e).norm() / se } else { 0.0 };
            max_sigma = max_sigma.max(sigma);
            entries.push((i, j, e, m, se, sigma));
        }
    }
    let hist = histogram
        .map(|points| -> AppResult<_> {
            if points == 0 {
                return Err("histogram wants at least one point".into());
            }
            let mut rng = RandomStream::with_stream(cfg.seed, STREAM_HISTOGRAM);
            let spectra: Vec<Vec<f64>> = (0..points)
                .map(|_| -> AppResult<Vec<f64>> {
                    let point = sample_jet_point(k, tensor.fiber_dim(), &mut rng)?;
                    Ok(horizontal_curvature(&tensor, &point)?.eigenvalues())
                })
                .collect::<AppResult<_>>()?;
            let hist = q_index_partition(&spectra, 1e-12)?;
            Ok(json!({
                "points": points,
                "buckets": hist.buckets,
                "degenerate": hist.degenerate,
            }))
        })
        .transpose()?;
    match format {
        Format::Json => emit_json(&json!({
            "base_dim": n,
            "fiber_dim": tensor.fiber_dim(),
            "jet_order": k,
            "samples": samples,
            "entries": entries.iter().map(|(i, j, e, m, se, sigma)| json!({
                "i": i,
                "j": j,
                "exact_re": e.re,
                "exact_im": e.im,
                "mean_re": m.re,
                "mean_im": m.im,
                "stderr": se,
                "sigma_deviation": sigma,
            })).collect::<Vec<_>>(),
            "max_sigma_deviation": max_sigma,
            "histogram": hist,
        })),
        _ => {
            outln!(
                "expected horizontal curvature: base {n}, fiber {}, jet order {k}, {samples} samples",
                tensor.fiber_dim(),
            );
            for (i, j, e, m, se, sigma) in &entries {
                outln!(
                    "({i},{j}): exact {:+.6}{:+.6}i; mc {:+.6}{:+.6}i +- {se:.2e} ({sigma:.2} sigma)",
                    e.re, e.im, m.re, m.im,
                );
            }
            outln!("max deviation {max_sigma:.2} sigma");
            if let Some(hist) = &hist {
                outln!(
                    "index histogram over {} points: buckets {}, degenerate {}",
                    hist["points"], hist["buckets"], hist["degenerate"],
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_semple(command: SempleCommand, format: Format) -> AppResult<ExitCode> {
    no_csv(format)?;
    let record = match command {
        SempleCommand::Dim { n, r, k } => {
            let dim = dim_semple(&TowerSpec::new(n, r, k)?);
            json!({"command": "dim", "n": n, "r": r, "k": k, "dim": dim})
        }
        SempleCommand::GgDim { n, k, r, ell } => {
            let dim = dim_gg_locus(n, k, r, ell)?;
            json!({"command": "gg-dim", "n": n, "k": k, "r": r, "ell": ell, "dim": dim})
        }
        SempleCommand::Det { n, r, k } => {
            let closed = det_vk_closed(&TowerSpec::new(n, r, k)?)?;
            let mut stepped = PicardClass::generator("detV")?;
            for _ in 0..k {
                stepped = det_vk_step(&stepped, r)?;
            }
            json!({
                "command": "det",
                "n": n, "r": r, "k": k,
                "class": closed.to_string(),
                "matches_recursion": stepped == closed,
            })
        }
        SempleCommand::Twist { p, k, r } => {
            let twist = tautological_twist(p, k, r)?;
            json!({
                "command": "twist",
                "p": p, "k": k, "r": r,
                "weights": twist.components(),
                "display": twist.to_string(),
            })
        }
        SempleCommand::Weights { ranks } => {
            let ranks: Vec<i64> = parse_list(&ranks, "--ranks")?;
            let seq = RankSequence::new(ranks.clone())?;
            let weights = induced_weights(&seq);
            json!({
                "command": "weights",
                "ranks": ranks,
                "weights": weights.components(),
                "display": weights.to_string(),
            })
        }
        SempleCommand::Validate { ranks, ambient } => {
            let ranks: Vec<i64> = parse_list(&ranks, "--ranks")?;
            let violations = validate_rank_sequence(&ranks, ambient);
            json!({
                "command": "validate",
                "ranks": ranks,
                "admissible": violations.is_empty(),
                "violations": violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            })
        }
        SempleCommand::Euler { n, r, k } => {
            let report = euler_rank_check(&TowerSpec::new(n, r, k)?)?;
            json!({
                "command": "euler",
                "identities": report.identities.iter().map(|i| json!({
                    "label": i.label,
                    "lhs": i.lhs,
                    "rhs": i.rhs,
                    "holds": i.holds(),
                })).collect::<Vec<_>>(),
                "all_hold": report.all_hold(),
            })
        }
        SempleCommand::Orbifold { rho, s } => {
            let orders: Vec<Ramification> = rho
                .split(',')
                .map(|part| part.trim().parse::<Ramification>())
                .collect::<Result<_, _>>()?;
            let weights = derived_orbifold_weights(&orders, s)?;
            json!({
                "command": "orbifold",
                "rho": rho,
                "s": s,
                "weights": weights.iter().map(Rational::to_string).collect::<Vec<_>>(),
            })
        }
        SempleCommand::Pullback { class, level } => {
            let parsed: PicardClass = class.parse()?;
            let lifted = pullback_class(&parsed, level)?;
            json!({
                "command": "pullback",
                "class": parsed.to_string(),
                "level": level,
                "lifted": lifted.to_string(),
            })
        }
    };
    match format {
        Format::Json => emit_json(&record),
        _ => {
            let mut fields: Vec<(&String, &serde_json::Value)> = record
                .as_object()
                .expect("record is an object")
                .iter()
                .filter(|(key, _)| *key != "command")
                .collect();
            fields.sort_by_key(|(key, _)| key.to_string());
            let line = fields
                .iter()
                .map(|(key, value)| format!("{key}: {value}"))
                .collect::<Vec<_>>()
                .join("; ");
            outln!("{line}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_morse(
    n: usize,
    d: u64,
    eps: &str,
    k: Option<usize>,
    orders: &str,
    degrees: &str,
    delta: &str,
    r: usize,
    morse_value: Option<String>,
    format: Format,
) -> AppResult<ExitCode> {
    no_csv(format)?;
    let spec = HypersurfaceSpec::new(n, d)?;
    let eps = parse_rat(eps, "--eps")?;
    let eta = eta_top_intersection(&spec, &eps)?;
    let threshold = general_type_threshold(n)?;
    let cut_section = k
        .map(|k| -> AppResult<_> {
            let orders: Vec<u64> = parse_list(orders, "--orders")?;
            let degrees: Vec<u64> = parse_list(degrees, "--degrees")?;
            let delta = parse_rat(delta, "--delta")?;
            let cut = CompleteIntersectionCut::new(k, degrees, orders, delta)?;
            let sparsity = order_sparsity_check(&cut, n, r)?;
            let morse_value = match &morse_value {
                Some(text) => parse_rat(text, "--morse-value")?,
                None => eta.clone(),
            };
            let lead = leading_constant(n, r, &cut, &morse_value)?;
            Ok(json!({
                "k": k,
                "r": r,
                "orders": cut.orders(),
                "degrees": cut.degrees(),
                "delta": cut.delta().to_string(),
                "locus_dim": sparsity.locus_dim,
                "reciprocal_sum": sparsity.reciprocal_sum.to_string(),
                "budget": sparsity.budget,
                "passes": sparsity.passes,
                "morse_value": morse_value.to_string(),
                "main_factor": lead.main_factor.to_string(),
                "main_factor_f64": to_f64(&lead.main_factor),
                "log_power": lead.log_power,
                "error_slots": lead.error_slots,
            }))
        })
        .transpose()?;
    let record = json!({
        "n": n,
        "d": d,
        "eps": eps.to_string(),
        "eta": eta.to_string(),
        "eta_f64": to_f64(&eta),
        "general_type_threshold": threshold,
        "positive": eta > rat_int(0),
        "cut": cut_section,
    });
    match format {
        Format::Json => emit_json(&record),
        _ => {
            outln!(
                "degree-{d} hypersurface of dimension {n}: eta({}) = {} (threshold degree {threshold})",
                record["eps"].as_str().unwrap_or("?"),
                record["eta"].as_str().unwrap_or("?"),
            );
            if let Some(cut) = record.get("cut").filter(|c| !c.is_null()) {
                outln!(
                    "cut locus dim {}; reciprocal sum {} vs budget {}; sparsity {}",
                    cut["locus_dim"],
                    cut["reciprocal_sum"].as_str().unwrap_or("?"),
                    cut["budget"],
                    if cut["passes"].as_bool().unwrap_or(false) { "passes" } else { "fails" },
                );
                outln!(
                    "leading constant: {} x (log k)^{} with corrections {}",
                    cut["main_factor"].as_str().unwrap_or("?"),
                    cut["log_power"],
                    cut["error_slots"],
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(cfg: &CheckConfig, format: Format) -> AppResult<ExitCode> {
    let results = run_all(cfg)?;
    let passed = all_passed(&results);
    match format {
        Format::Json => emit_json(&json!({
            "results": results,
            "passed": passed,
        })),
        Format::Csv => {
            outln!("name,passed,expected,observed,tolerance");
            for r in &results {
                outln!(
                    "{},{},{},{},{}",
                    csv_field(&r.name),
                    r.passed,
                    csv_field(&r.expected),
                    csv_field(&r.observed),
                    csv_field(&r.tolerance),
                );
            }
        }
        Format::Text => out!("{}", render_text(&results)),
    }
    Ok(if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
