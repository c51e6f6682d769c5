//! Command line front end: analyze instances, certify single theorems,
//! run seeded verification campaigns, and cross-check the pencil solvers
//! against the sampling oracle.

use opframe_cli::{error, instance, report};

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use num_complex::Complex64;

use opframe::harness::{run_campaign, sampling_oracle_inf, sampling_oracle_sup, CampaignConfig};
use opframe::perturbation::{
    certify_bessel_sum, certify_combination, certify_extension, certify_k_perturbation,
    certify_min_condition, certify_weighted, Sign, TheoremId,
};
use opframe::{
    classify, frame_gram, k_frame_bounds, pencil_inf, pencil_sup, remark_bound, AlgebraElement,
    Certificate, FrameBounds, KOperator, PencilValue, Tolerance,
};

use error::{CliError, CliResult};
use instance::{parse_instance, Instance};
use report::{Analysis, Format, OracleCheck};

#[derive(Parser)]
#[command(name = "opframe", version)]
#[command(about = "Operator frame bounds, K-frame bounds, and certified perturbation theorems")]
struct Cli {
    /// Relative tolerance for positivity and classification checks
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol_rel: f64,

    /// Absolute tolerance floor
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol_abs: f64,

    /// Output format: json, csv, or text
    #[arg(long, global = true, default_value = "text")]
    format: String,

    /// Seed for sampling paths and campaigns
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal bounds and classification (plus K bounds when the file has a K operator)
    Analyze { file: PathBuf },

    /// Run one theorem certifier against an instance file
    Certify {
        /// Theorem id, e.g. bessel-sum, min-condition, combination,
        /// extension, weighted, k-perturbation
        theorem: String,
        file: PathBuf,

        /// Perturbation budget against the frame Gram (k-perturbation)
        #[arg(long)]
        alpha: Option<f64>,

        /// Perturbation budget against the K Gram (k-perturbation)
        #[arg(long)]
        beta: Option<f64>,

        /// Ratio condition constant (extension) or norm mixing weight (weighted)
        #[arg(long)]
        lambda: Option<f64>,

        /// Second norm mixing weight (weighted)
        #[arg(long)]
        mu: Option<f64>,

        /// Distinguished family index, 1-based (combination, extension)
        #[arg(long)]
        p: Option<usize>,

        /// Perturbation sign for bessel-sum: plus or minus
        #[arg(long)]
        sign: Option<String>,

        /// Override the frame bounds fed to the certified formulas: "A,B"
        #[arg(long)]
        bounds: Option<String>,

        /// Combination coefficients, comma-separated "re" or "re:im"
        #[arg(long)]
        alphas: Option<String>,

        /// Per-point weights for the base family (weighted), comma list or one value
        #[arg(long)]
        alpha_w: Option<String>,

        /// Per-point weights for the perturbed family (weighted)
        #[arg(long)]
        beta_w: Option<String>,

        /// Sample count for sampled hypothesis checks
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },

    /// Seeded verification campaign across certifiers
    Campaign {
        #[arg(long, default_value_t = 200)]
        trials: usize,

        /// Dim triples "dxnxm", comma-separated; defaults to the full grid
        /// d in 1..=3, n in 1..=4, m in 1..=16
        #[arg(long)]
        dims: Option<String>,

        /// Comma-separated theorem ids; defaults to all
        #[arg(long)]
        theorems: Option<String>,
    },

    /// Cross-check pencil extrema against the sampling oracle on an instance
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = u8::from(e.use_stderr());
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> CliResult<u8> {
    let tol = Tolerance::new(cli.tol_rel, cli.tol_abs)?;
    let format = Format::from_str(&cli.format).map_err(CliError::Usage)?;
    match cli.command {
        Command::Analyze { file } => analyze(&file, &tol, format),
        Command::Certify {
            theorem,
            file,
            alpha,
            beta,
            lambda,
            mu,
            p,
            sign,
            bounds,
            alphas,
            alpha_w,
            beta_w,
            samples,
        } => {
            let args = CertifyArgs {
                theorem,
                alpha,
                beta,
                lambda,
                mu,
                p,
                sign,
                bounds,
                alphas,
                alpha_w,
                beta_w,
                samples,
                seed: cli.seed,
            };
            certify(&file, &args, &tol, format)
        }
        Command::Campaign {
            trials,
            dims,
            theorems,
        } => campaign(
            cli.seed,
            trials,
            dims.as_deref(),
            theorems.as_deref(),
            &tol,
            format,
        ),
        Command::Oracle { file, samples } => oracle(&file, samples, cli.seed, &tol, format),
    }
}

fn load(file: &Path) -> CliResult<Instance> {
    let text = std::fs::read_to_string(file)?;
    parse_instance(&text)
}

fn analyze(file: &Path, tol: &Tolerance, format: Format) -> CliResult<u8> {
    let inst = load(file)?;
    let classification = classify(&inst.frame, tol);
    let (k_bounds, remark_lower) = match &inst.k {
        Some(k) => {
            let kb = k_frame_bounds(&inst.frame, k, tol)?;
            let remark = remark_bound(&inst.frame, k, tol).ok();
            (Some(kb), remark)
        }
        None => (None, None),
    };
    let a = Analysis {
        classification,
        k_bounds,
        remark_lower,
    };
    println!("{}", report::analysis_report(&a, format));
    Ok(0)
}

struct CertifyArgs {
    theorem: String,
    alpha: Option<f64>,
    beta: Option<f64>,
    lambda: Option<f64>,
    mu: Option<f64>,
    p: Option<usize>,
    sign: Option<String>,
    bounds: Option<String>,
    alphas: Option<String>,
    alpha_w: Option<String>,
    beta_w: Option<String>,
    samples: usize,
    seed: u64,
}

fn parse_bounds(arg: &str) -> CliResult<FrameBounds> {
    let parts: Vec<&str> = arg.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::Usage(format!(
            "--bounds expects \"A,B\", got `{arg}`"
        )));
    }
    let lower: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("bad lower bound `{}`", parts[0])))?;
    let upper: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("bad upper bound `{}`", parts[1])))?;
    FrameBounds::new(lower, upper).map_err(CliError::Core)
}

fn parse_complex_list(arg: &str) -> CliResult<Vec<Complex64>> {
    arg.split(',')
        .map(|item| {
            let item = item.trim();
            let (re, im) = match item.split_once(':') {
                Some((re, im)) => (re, im),
                None => (item, "0"),
            };
            let re: f64 = re
                .parse()
                .map_err(|_| CliError::Usage(format!("bad coefficient `{item}`")))?;
            let im: f64 = im
                .parse()
                .map_err(|_| CliError::Usage(format!("bad coefficient `{item}`")))?;
            Ok(Complex64::new(re, im))
        })
        .collect()
}

/// Comma list of positive reals, or a single value broadcast to `count`.
fn parse_weight_list(arg: Option<&str>, count: usize) -> CliResult<Vec<f64>> {
    match arg {
        None => Ok(vec![1.0; count]),
        Some(s) => {
            let vals: Vec<f64> = s
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<f64>()
                        .map_err(|_| CliError::Usage(format!("bad weight `{x}`")))
                })
                .collect::<CliResult<_>>()?;
            if vals.len() == 1 {
                Ok(vec![vals[0]; count])
            } else if vals.len() == count {
                Ok(vals)
            } else {
                Err(CliError::Usage(format!(
                    "expected 1 or {count} weights, got {}",
                    vals.len()
                )))
            }
        }
    }
}

fn one_based(p: Option<usize>, count: usize) -> CliResult<usize> {
    let p = p.unwrap_or(1);
    if p == 0 || p > count {
        return Err(CliError::Usage(format!(
            "--p must lie in 1..={count}, got {p}"
        )));
    }
    Ok(p - 1)
}

fn certificate_exit(cert: &Certificate) -> u8 {
    if !cert.hypothesis_ok {
        2
    } else if !cert.encloses() {
        3
    } else {
        0
    }
}

fn certify(file: &Path, args: &CertifyArgs, tol: &Tolerance, format: Format) -> CliResult<u8> {
    let inst = load(file)?;
    let bounds_override = args.bounds.as_deref().map(parse_bounds).transpose()?;
    let d = inst.algebra_dim();
    let n = inst.module_rank();

    let cert = match args.theorem.as_str() {
        "bessel-sum" | "bessel-sum-plus" | "bessel-sum-minus" => {
            let sign = match (args.theorem.as_str(), args.sign.as_deref()) {
                ("bessel-sum-minus", _) | (_, Some("minus")) | (_, Some("-1")) => Sign::Minus,
                (_, None) | (_, Some("plus")) | (_, Some("+1")) => Sign::Plus,
                (_, Some(other)) => {
                    return Err(CliError::Usage(format!("--sign expects plus or minus, got `{other}`")))
                }
            };
            certify_bessel_sum(&inst.frame, inst.family("r")?, sign, bounds_override, tol)?
        }
        "min-condition" | "min-condition-k" => certify_min_condition(
            &inst.frame,
            inst.family("r")?,
            inst.k.as_ref(),
            bounds_override,
            tol,
        )?,
        "combination" | "combination-k" => {
            let mut families = vec![inst.frame.clone()];
            families.extend(inst.families.values().cloned());
            let alphas = match args.alphas.as_deref() {
                Some(arg) => parse_complex_list(arg)?,
                None => vec![Complex64::new(1.0, 0.0); families.len()],
            };
            let p = one_based(args.p, families.len())?;
            certify_combination(&families, &alphas, p, inst.k.as_ref(), bounds_override, tol)?
        }
        "extension" | "extension-k" => {
            let mut bases = vec![inst.frame.clone()];
            let mut perturbed = Vec::new();
            for (name, fam) in &inst.families {
                if name.starts_with('t') {
                    bases.push(fam.clone());
                } else if name.starts_with('r') {
                    perturbed.push(fam.clone());
                } else {
                    return Err(CliError::Usage(format!(
                        "extension families must be named t* (bases) or r* (perturbed), got `{name}`"
                    )));
                }
            }
            let lambda = args.lambda.ok_or_else(|| {
                CliError::Usage("extension needs --lambda (the ratio condition constant)".into())
            })?;
            let p = one_based(args.p, bases.len())?;
            certify_extension(&bases, &perturbed, p, lambda, inst.k.as_ref(), bounds_override, tol)?
        }
        "weighted" => {
            let other = inst.family("r")?;
            let m = inst.frame.point_count();
            let alpha_w = parse_weight_list(args.alpha_w.as_deref(), m)?;
            let beta_w = parse_weight_list(args.beta_w.as_deref(), m)?;
            let k = inst.k.clone().unwrap_or_else(|| KOperator::identity(d, n));
            certify_weighted(
                &inst.frame,
                other,
                &alpha_w,
                &beta_w,
                args.lambda.unwrap_or(0.0),
                args.mu.unwrap_or(0.0),
                &k,
                args.samples,
                args.seed,
                bounds_override,
                tol,
            )?
        }
        "k-perturbation" | "k-perturbation-corollary" => {
            let other = inst.family("r")?;
            let k = inst.k.clone().unwrap_or_else(|| KOperator::identity(d, n));
            certify_k_perturbation(
                &inst.frame,
                other,
                &k,
                args.alpha.unwrap_or(0.0),
                args.beta.unwrap_or(0.0),
                bounds_override,
                tol,
            )?
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown theorem `{other}`; expected one of bessel-sum[-plus|-minus], min-condition, combination, extension, weighted, k-perturbation"
            )))
        }
    };

    println!("{}", report::certificate_report(&cert, format));
    Ok(certificate_exit(&cert))
}

fn parse_dims(arg: &str) -> CliResult<Vec<(usize, usize, usize)>> {
    arg.split(',')
        .map(|triple| {
            let parts: Vec<&str> = triple.trim().split('x').collect();
            if parts.len() != 3 {
                return Err(CliError::Usage(format!(
                    "bad dims triple `{triple}`, expected dxnxm"
                )));
            }
            let nums: Vec<usize> = parts
                .iter()
                .map(|x| {
                    x.parse::<usize>()
                        .map_err(|_| CliError::Usage(format!("bad dims component `{x}`")))
                })
                .collect::<CliResult<_>>()?;
            Ok((nums[0], nums[1], nums[2]))
        })
        .collect()
}

fn campaign(
    seed: u64,
    trials: usize,
    dims: Option<&str>,
    theorems: Option<&str>,
    tol: &Tolerance,
    format: Format,
) -> CliResult<u8> {
    let dims = match dims {
        Some(arg) => parse_dims(arg)?,
        None => CampaignConfig::default_dims(),
    };
    let theorems = match theorems {
        Some(arg) => arg
            .split(',')
            .map(|name| TheoremId::from_str(name.trim()).map_err(CliError::Core))
            .collect::<CliResult<Vec<_>>>()?,
        None => TheoremId::ALL.to_vec(),
    };
    let cfg = CampaignConfig {
        seed,
        trials,
        dims,
        theorems,
        tolerance: *tol,
    };
    let report_data = run_campaign(&cfg)?;
    let out = match format {
        Format::Json => report::campaign_json(&cfg, &report_data),
        Format::Csv => report::campaign_csv(&report_data),
        Format::Text => report::campaign_text(&cfg, &report_data),
    };
    println!("{out}");
    if report_data.total_enclosure_failures() > 0 {
        Ok(3)
    } else if report_data.total_hypothesis_failures() > 0 {
        Ok(2)
    } else {
        Ok(0)
    }
}

fn oracle(
    file: &Path,
    samples: usize,
    seed: u64,
    tol: &Tolerance,
    format: Format,
) -> CliResult<u8> {
    let inst = load(file)?;
    let gram = frame_gram(&inst.frame);
    let q = match &inst.k {
        Some(k) => k.gram(),
        None => AlgebraElement::identity(gram.dim()),
    };

    let sup = pencil_sup(&gram, &q, tol)?;
    let inf = pencil_inf(&gram, &q, tol)?;
    let sup_candidates: Vec<_> = sup.witness.iter().cloned().collect();
    let inf_candidates: Vec<_> = inf.witness.iter().cloned().collect();
    let oracle_sup = sampling_oracle_sup(&gram, &q, samples, seed, &sup_candidates, tol);
    let oracle_inf = sampling_oracle_inf(&gram, &q, samples, seed, &inf_candidates, tol);

    let (pencil_sup_val, sup_agrees) = match sup.value {
        PencilValue::Finite(v) => {
            let ok = oracle_sup
                .map(|o| {
                    o <= v + 1e-9 * f64::max(1.0, v) && (v - o).abs() <= 1e-6 * f64::max(1.0, v)
                })
                .unwrap_or(false);
            (Some(v), ok)
        }
        PencilValue::Unbounded => {
            // Independent confirmation: the witness carries numerator mass
            // while the denominator vanishes on it.
            let ok = sup
                .witness
                .as_ref()
                .map(|w| {
                    let num = (w.adjoint() * gram.entries() * w)[(0, 0)].re;
                    let den = (w.adjoint() * q.entries() * w)[(0, 0)].re;
                    num > tol.abs_floor && den <= tol.rel * f64::max(1.0, q.op_norm())
                })
                .unwrap_or(false);
            (None, ok)
        }
    };
    let inf_val = inf.expect_finite()?;
    let inf_agrees = oracle_inf
        .map(|o| {
            o >= inf_val - 1e-9 * f64::max(1.0, inf_val)
                && (o - inf_val).abs() <= 1e-6 * f64::max(1.0, inf_val)
        })
        .unwrap_or(false);

    let check = OracleCheck {
        pencil_sup: pencil_sup_val,
        oracle_sup,
        sup_agrees,
        pencil_inf: inf_val,
        oracle_inf,
        inf_agrees,
        effective_rank: inf.effective_rank,
        samples,
    };
    println!("{}", report::oracle_report(&check, format));
    Ok(if sup_agrees && inf_agrees { 0 } else { 3 })
}
