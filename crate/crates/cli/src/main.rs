//! Batch front end for the weight-distribution laboratory.
//!
//! Rationals are always printed as "num/den" in machine output so results
//! pipe losslessly between subcommands; human tables add 6-digit decimal
//! hints. Exit codes: 0 success, 1 infeasible construction or failed
//! check, 2 usage error.

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use hwlab_core::distinguish::{run_separation, Scenario};
use hwlab_core::gaussmix::{
    best_mixture_fit, fit_exponential_sum, gapmiddle_lower, inverse_entry_bound_check,
    mk_exponential_sum, qbinomial, series_lower_check, sup_distance, vandermonde_power_count_check,
    GaussMixture,
};
use hwlab_core::krawtchouk::bias_profile;
use hwlab_core::lp::{
    construct_k_uniform, extremal_tail, sparsify, LpStatus, SupportFilter, TailObjective,
};
use hwlab_core::noise::{replace_noise, smooth};
use hwlab_core::params::ParamSet;
use hwlab_core::pmf::WeightPMF;
use hwlab_core::rat::{format_q, parse_q, q_to_f64, Q};
use hwlab_core::transform::{bu_to_sb, certify_bias, interval_property_check};
use hwlab_core::verify;

#[derive(Parser)]
#[command(name = "hwlab", version, about = "Exact experiments on Hamming-weight distributions")]
struct Cli {
    /// Worker threads for internal parallelism (0 = default).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Write primary output to a file instead of stdout.
    #[arg(long, global = true)]
    output: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Args)]
struct FilterArgs {
    /// Residue modulus for a mod-class support filter.
    #[arg(long = "mod")]
    modulus: Option<i64>,
    /// Residue of the mod-class filter.
    #[arg(long)]
    residue: Option<i64>,
    /// Slab half-width filter |w| <= W.
    #[arg(long)]
    slab: Option<i64>,
}

impl FilterArgs {
    fn filter(&self) -> Result<SupportFilter> {
        match (self.modulus, self.residue, self.slab) {
            (None, None, None) => Ok(SupportFilter::All),
            (Some(m), r, None) => {
                if m < 1 {
                    bail!("--mod must be positive");
                }
                Ok(SupportFilter::ModClass {
                    modulus: m,
                    residue: r.unwrap_or(0),
                })
            }
            (None, None, Some(w)) => Ok(SupportFilter::Slab { half_width: w }),
            _ => bail!("--mod/--residue and --slab are mutually exclusive"),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build a k-uniform weight PMF inside a support filter.
    Construct {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        k: i64,
        #[command(flatten)]
        filter: FilterArgs,
    },
    /// Sparsify a k-uniform PMF to at most k+1 weights.
    Sparsify {
        #[arg(long)]
        input: String,
        #[arg(long)]
        k: i64,
    },
    /// Apply correlation smoothing (--rho) or rerandomization rounds
    /// (--rounds) to a PMF.
    Smooth {
        #[arg(long)]
        n: Option<i64>,
        /// Start from the uniform slice of this weight.
        #[arg(long)]
        slice: Option<i64>,
        #[arg(long)]
        input: Option<String>,
        /// Retention parameter as a rational "p/q".
        #[arg(long)]
        rho: Option<String>,
        /// Rerandomization rounds.
        #[arg(long)]
        rounds: Option<u32>,
    },
    /// Exact parity-bias profile of a PMF.
    Bias {
        #[arg(long)]
        n: Option<i64>,
        #[arg(long)]
        slice: Option<i64>,
        #[arg(long)]
        input: Option<String>,
        /// Also report the max |bias| over parity sizes 1..=k.
        #[arg(long)]
        k: Option<i64>,
    },
    /// Tail mass Pr[W >= t] (binomial by default).
    Tail {
        #[arg(long)]
        n: Option<i64>,
        #[arg(long)]
        t: i64,
        #[arg(long)]
        input: Option<String>,
    },
    /// Exact extremal tail/point values over k-uniform PMFs.
    Extremal {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        t: i64,
        #[arg(long, default_value = "max_tail")]
        objective: String,
        #[command(flatten)]
        filter: FilterArgs,
    },
    /// Sparsify-then-noise pipeline with bias certification.
    Pipeline {
        #[arg(long)]
        n: Option<i64>,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        input: Option<String>,
        #[command(flatten)]
        filter: FilterArgs,
    },
    /// Threshold/interval separation experiments.
    Separate {
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        n: i64,
        #[arg(long)]
        k: Option<i64>,
        #[arg(long)]
        kprime: Option<i64>,
        #[arg(long)]
        rho: String,
        /// Caller-supplied constant for the analytic template.
        #[arg(long)]
        c: Option<f64>,
        /// Explicit weights for the few-weights scenario.
        #[arg(long)]
        a: Option<i64>,
        #[arg(long)]
        b: Option<i64>,
    },
    /// Gaussian-mixture distances and exact algebra certificates.
    Gaussmix {
        #[arg(long)]
        op: String,
        #[arg(long)]
        k: Option<i64>,
        #[arg(long)]
        sigma2: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        budget: Option<u64>,
        /// Rational base "p/q" for exact Hankel/Vandermonde checks.
        #[arg(long)]
        q: Option<String>,
        #[arg(long)]
        i: Option<i64>,
        #[arg(long)]
        x: Option<f64>,
        #[arg(long)]
        d: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        /// Comma-separated component means.
        #[arg(long)]
        means: Option<String>,
        /// Comma-separated component weights.
        #[arg(long)]
        weights: Option<String>,
    },
    /// Run acceptance criteria; nonzero exit iff any check fails.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
        {
            eprintln!("warning: could not size thread pool: {e}");
        }
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.output {
        Some(path) => fs::write(path, format!("{text}\n"))
            .with_context(|| format!("writing {path}"))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn read_pmf(path: &str) -> Result<WeightPMF> {
    let raw = if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        buf
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {path}"))?
    };
    let value: serde_json::Value = serde_json::from_str(&raw).context("parsing PMF JSON")?;
    Ok(WeightPMF::from_json(&value)?)
}

fn pmf_text(cli: &Cli, p: &WeightPMF) -> String {
    match cli.format {
        Format::Json => p.to_json().to_string(),
        Format::Csv => {
            let mut out = String::from("w,p\n");
            for (w, mass) in p.iter() {
                out.push_str(&format!("{w},{}\n", format_q(mass)));
            }
            out.trim_end().to_string()
        }
        Format::Table => {
            let mut out = format!("n = {}\n", p.n());
            out.push_str("weight  mass            approx\n");
            for (w, mass) in p.iter() {
                out.push_str(&format!(
                    "{w:>6}  {:<14}  {:.6}\n",
                    format_q(mass),
                    q_to_f64(mass)
                ));
            }
            out.trim_end().to_string()
        }
    }
}

fn source_pmf(n: Option<i64>, slice: Option<i64>, input: &Option<String>) -> Result<WeightPMF> {
    match (input, n) {
        (Some(path), _) => read_pmf(path),
        (None, Some(n)) => match slice {
            Some(t) => Ok(WeightPMF::slice(n, t)?),
            None => Ok(WeightPMF::binomial(n)?),
        },
        (None, None) => bail!("need --input or --n"),
    }
}

fn parse_objective(s: &str) -> Result<TailObjective> {
    Ok(match s {
        "max_tail" => TailObjective::MaxTail,
        "max_point" => TailObjective::MaxPoint,
        "signed_gap" => TailObjective::SignedGap,
        "two_sided" => TailObjective::TwoSided,
        _ => bail!("unknown objective `{s}` (max_tail|max_point|signed_gap|two_sided)"),
    })
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Construct { n, k, filter } => {
            let f = filter.filter()?;
            let sol = construct_k_uniform(*n, *k, |w| f.admits(w), None)?;
            if sol.status != LpStatus::Optimal {
                emit(cli, "infeasible")?;
                return Ok(ExitCode::from(1));
            }
            let p = sol.primal.ok_or_else(|| anyhow!("no vertex returned"))?;
            emit(cli, &pmf_text(cli, &p))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sparsify { input, k } => {
            let p = read_pmf(input)?;
            let out = sparsify(&p, *k)?;
            emit(cli, &pmf_text(cli, &out))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Smooth {
            n,
            slice,
            input,
            rho,
            rounds,
        } => {
            let p = source_pmf(*n, *slice, input)?;
            let out = match (rho, rounds) {
                (Some(r), None) => smooth(&p, &parse_q(r)?)?,
                (None, Some(rounds)) => replace_noise(&p, *rounds),
                (Some(r), Some(rounds)) => replace_noise(&smooth(&p, &parse_q(r)?)?, *rounds),
                (None, None) => bail!("need --rho and/or --rounds"),
            };
            emit(cli, &pmf_text(cli, &out))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bias { n, slice, input, k } => {
            let p = source_pmf(*n, *slice, input)?;
            let profile = bias_profile(&p);
            let text = match cli.format {
                Format::Json => {
                    let mut v = profile.to_json();
                    if let Some(k) = k {
                        v["max_abs_bias"] =
                            serde_json::Value::String(format_q(&profile.max_abs_bias(*k)));
                    }
                    v.to_string()
                }
                Format::Csv => {
                    let mut out = String::from("l,bias\n");
                    for (ell, b) in profile.biases.iter().enumerate() {
                        out.push_str(&format!("{ell},{}\n", format_q(b)));
                    }
                    out.trim_end().to_string()
                }
                Format::Table => {
                    let mut out = String::from("l   bias            approx\n");
                    for (ell, b) in profile.biases.iter().enumerate() {
                        out.push_str(&format!(
                            "{ell:>3} {:<15} {:.6}\n",
                            format_q(b),
                            q_to_f64(b)
                        ));
                    }
                    if let Some(k) = k {
                        out.push_str(&format!(
                            "max |bias| over 1..={k}: {}\n",
                            format_q(&profile.max_abs_bias(*k))
                        ));
                    }
                    out.trim_end().to_string()
                }
            };
            emit(cli, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Tail { n, t, input } => {
            let p = source_pmf(*n, None, input)?;
            let v = p.tail_mass(*t);
            let text = match cli.format {
                Format::Json => serde_json::json!({"value": format_q(&v)}).to_string(),
                _ => format_q(&v),
            };
            emit(cli, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Extremal {
            n,
            k,
            t,
            objective,
            filter,
        } => {
            let sol = extremal_tail(*n, *k, *t, parse_objective(objective)?, filter.filter()?)?;
            if sol.status != LpStatus::Optimal {
                emit(cli, "infeasible")?;
                return Ok(ExitCode::from(1));
            }
            let text = match cli.format {
                Format::Json => sol.to_json().to_string(),
                _ => format_q(sol.value.as_ref().expect("optimal value")),
            };
            emit(cli, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Pipeline { n, k, input, filter } => {
            let p = match (input, n) {
                (Some(path), _) => read_pmf(path)?,
                (None, Some(n)) => {
                    let f = filter.filter()?;
                    let sol = construct_k_uniform(*n, *k, |w| f.admits(w), None)?;
                    if sol.status != LpStatus::Optimal {
                        emit(cli, "infeasible")?;
                        return Ok(ExitCode::from(1));
                    }
                    sol.primal.ok_or_else(|| anyhow!("no vertex returned"))?
                }
                (None, None) => bail!("need --input or --n"),
            };
            let out = bu_to_sb(&p, *k)?;
            let cert = certify_bias(&out, *k);
            let intervals_ok = interval_property_check(&p, &out, *k);
            let text = match cli.format {
                Format::Json => serde_json::json!({
                    "input": p.to_json(),
                    "output": out.to_json(),
                    "certification": cert.to_json(),
                    "interval_property": intervals_ok,
                })
                .to_string(),
                Format::Csv => cert.to_csv().trim_end().to_string(),
                Format::Table => format!(
                    "{}\nbias certification: {}\ninterval property: {}",
                    pmf_text(cli, &out),
                    if cert.all_pass() { "pass" } else { "FAIL" },
                    if intervals_ok { "pass" } else { "FAIL" }
                ),
            };
            emit(cli, &text)?;
            if cert.all_pass() && intervals_ok {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        Command::Separate {
            scenario,
            n,
            k,
            kprime,
            rho,
            c,
            a,
            b,
        } => {
            let params = ParamSet {
                n: Some(*n),
                k: *k,
                kprime: *kprime,
                rho: Some(parse_q(rho)?),
                c: *c,
                a: *a,
                b: *b,
                ..ParamSet::new()
            };
            let report = run_separation(Scenario::parse(scenario)?, &params)?;
            let text = match cli.format {
                Format::Json => report.to_json().to_string(),
                Format::Csv => format!(
                    "{}\n{}",
                    hwlab_core::SeparationReport::csv_header(),
                    report.csv_row()
                ),
                Format::Table => format!(
                    "scenario {}: advantage {} (~{:.6e}) at {}; template {:.6e}",
                    report.scenario,
                    format_q(&report.advantage),
                    q_to_f64(&report.advantage),
                    match (report.t, report.interval) {
                        (Some(t), _) => format!("t = {t}"),
                        (None, Some((a, b))) => format!("interval [{a}, {b}]"),
                        _ => "-".into(),
                    },
                    report.template
                ),
            };
            emit(cli, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Gaussmix {
            op,
            k,
            sigma2,
            seed,
            budget,
            q,
            i,
            x,
            d,
            alpha,
            means,
            weights,
        } => {
            let text = match op.as_str() {
                "fit" => {
                    let k = k.ok_or_else(|| anyhow!("--k required"))?;
                    let s2 = sigma2.ok_or_else(|| anyhow!("--sigma2 required"))?;
                    let fit = best_mixture_fit(k, s2, budget.unwrap_or(30_000), seed.unwrap_or(0))?;
                    serde_json::json!({
                        "distance": fit.distance,
                        "budget_exhausted": fit.budget_exhausted,
                        "means": fit.best.means,
                        "weights": fit.best.weights,
                        "variance": fit.best.variance,
                    })
                    .to_string()
                }
                "supdist" => {
                    let s2 = sigma2.ok_or_else(|| anyhow!("--sigma2 required"))?;
                    let means: Vec<f64> = parse_f64_list(
                        means.as_deref().ok_or_else(|| anyhow!("--means required"))?,
                    )?;
                    let w = match weights {
                        Some(w) => parse_f64_list(w)?,
                        None => vec![1.0 / means.len() as f64; means.len()],
                    };
                    let m = GaussMixture::new(means, w, s2)?;
                    format!("{}", sup_distance(&m, 10.0, 1e-3))
                }
                "gapmiddle" => {
                    let k = k.ok_or_else(|| anyhow!("--k required"))?;
                    format!(
                        "{}",
                        gapmiddle_lower(k, d.unwrap_or(1.0), alpha.unwrap_or(1.0))
                    )
                }
                "expfit" => {
                    let k = k.ok_or_else(|| anyhow!("--k required"))?;
                    let qb = (d.unwrap_or(1.0).powi(2) * alpha.unwrap_or(1.0) / k as f64).exp();
                    let fit =
                        fit_exponential_sum(k, qb, budget.unwrap_or(40_000), seed.unwrap_or(0))?;
                    serde_json::json!({
                        "sample_error": fit.distance,
                        "lower_bound": gapmiddle_lower(k, d.unwrap_or(1.0), alpha.unwrap_or(1.0)),
                        "terms": fit.best,
                    })
                    .to_string()
                }
                "inverse-check" => {
                    let k = k.ok_or_else(|| anyhow!("--k required"))?;
                    let qq = parse_q(q.as_deref().ok_or_else(|| anyhow!("--q required"))?)?;
                    let rep = inverse_entry_bound_check(k, &qq)?;
                    serde_json::json!({
                        "k": rep.k,
                        "pass": rep.pass,
                        "max_abs_entry": format_q(&rep.max_abs_entry),
                        "denominator": format_q(&rep.denominator),
                    })
                    .to_string()
                }
                "qbinom" => {
                    let k = k.ok_or_else(|| anyhow!("--k required"))?;
                    let idx = i.ok_or_else(|| anyhow!("--i required"))?;
                    let p = qbinomial(k, idx)?;
                    serde_json::json!({
                        "coeffs": p.coeffs().iter().map(format_q).collect::<Vec<_>>(),
                        "terms_with_multiplicity": format_q(&p.coeff_sum()),
                    })
                    .to_string()
                }
                "power-count" => {
                    let k = k.ok_or_else(|| anyhow!("--k required"))?;
                    let reports = vandermonde_power_count_check(k)?;
                    let all = reports.iter().all(|r| r.pass);
                    serde_json::json!({
                        "k": k,
                        "all_pass": all,
                        "entries": reports.iter().map(|r| serde_json::json!({
                            "i": r.i, "j": r.j,
                            "expected": r.expected_terms.to_string(),
                            "count": format_q(&r.coeff_sum),
                            "all_coeffs_one": r.all_coeffs_one,
                            "min_exponent": r.min_exponent,
                        })).collect::<Vec<_>>(),
                    })
                    .to_string()
                }
                "detmk" => {
                    let k = k.ok_or_else(|| anyhow!("--k required"))?;
                    // k-term sum with deterministic rational data
                    let terms: Vec<(Q, Q)> = (0..k)
                        .map(|j| {
                            (
                                parse_q(&format!("{}/3", j + 2)).unwrap(),
                                parse_q(&format!("{}/{}", 3 + 2 * j, 2 + j)).unwrap(),
                            )
                        })
                        .collect();
                    let m = mk_exponential_sum(k, &terms)?;
                    format_q(&m.det())
                }
                "series" => {
                    let xv = x.ok_or_else(|| anyhow!("--x required"))?;
                    let rep = series_lower_check(xv)?;
                    serde_json::json!({
                        "x": rep.x,
                        "product_lower": rep.product_lower,
                        "bound": rep.bound,
                        "pass": rep.pass,
                    })
                    .to_string()
                }
                _ => bail!(
                    "unknown gaussmix op `{op}` \
                     (fit|supdist|gapmiddle|expfit|inverse-check|qbinom|power-count|detmk|series)"
                ),
            };
            emit(cli, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite } => {
            let reports = verify::run_suite(suite)
                .ok_or_else(|| anyhow!("unknown suite `{suite}`"))?;
            let mut all = true;
            let mut lines = Vec::new();
            for r in &reports {
                all &= r.passed;
                lines.push(r.line());
            }
            emit(cli, &lines.join("\n"))?;
            Ok(if all {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| anyhow!("bad float `{v}`: {e}")))
        .collect()
}
