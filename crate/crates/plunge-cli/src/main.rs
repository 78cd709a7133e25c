//! Batch front-end: parameter sweeps, bound-verification suites, and
//! plot-ready report emission.  Outputs are deterministic: the same
//! invocation produces byte-identical files.

use clap::{Args, Parser, Subcommand, ValueEnum};
use plunge::counting::{karnik_bound, plunge_counts, schatten_count_check};
use plunge::geometry::{
    box_union_sdf, minkowski_profile, whitney_decompose, AxisBox, BoxUnion, Region,
};
use plunge::spectral1d::{
    jr_rank2_tail_bound, jr_singular_values_auto, localization_spectrum, required_nodes,
};
use plunge::traces::{trace_function, two_term_prediction, SpectralFunction};
use plunge::trs2::{trs2_asymptotic, trs2_box_union, trs2_interval_explicit};
use std::io::Write;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "plunge",
    about = "Spectra, counting functions and trace functionals of time-frequency localization operators",
    after_help = "Optional config file: plain `key=value` lines (long flag names without `--`),\n\
                  spliced in ahead of the command line with `--config FILE`."
)]
struct Cli {
    /// Key=value file whose entries are inserted as flags of the subcommand.
    #[arg(long, global = true)]
    config: Option<std::path::PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues of the 1-D localization operator as CSV
    /// (`index,value,trusted` under a JSON descriptor header).
    Spectrum(SpectrumArgs),
    /// Counting-function sweep: one CSV row per (c, d, eps) with all counts,
    /// the explicit bound and prediction, and a pass flag.
    Counting(CountingArgs),
    /// Bound-verification suites (plunge-count bound, separated-operator
    /// bound, Schatten count inequality).
    BoundsCheck(BoundsArgs),
    /// Trace functional report: measured trace, two-term prediction,
    /// residual and admissibility integrals as JSON.
    Trace(TraceArgs),
    /// Tr S^2 by one or all methods as JSON.
    Trs2(Trs2Args),
    /// Whitney decomposition of a named or file-given region as CSV.
    Whitney(WhitneyArgs),
    /// Minkowski-content profile over a radius sweep as CSV.
    Minkowski(MinkowskiArgs),
    /// Run the full acceptance suite and print one pass/fail line per
    /// criterion.
    VerifyAll,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Side-length product c = |A||B|.
    #[arg(long)]
    c: f64,
    /// Quadrature size; defaults to the resolution rule for c.
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct CountingArgs {
    /// Comma-separated list of c values.
    #[arg(long, value_delimiter = ',', required = true)]
    c: Vec<f64>,
    /// Comma-separated list of thresholds.
    #[arg(long, value_delimiter = ',', required = true)]
    eps: Vec<f64>,
    /// Dimension (products are enumerated for d > 1).
    #[arg(long, default_value_t = 1)]
    d: usize,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Copy, Clone, ValueEnum)]
enum BoundKind {
    Karnik,
    Jr,
    Schatten,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, value_enum)]
    kind: BoundKind,
    #[arg(long, value_delimiter = ',', default_values_t = vec![5.0, 10.0, 20.0, 40.0])]
    c: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = vec![1e-2, 1e-4, 1e-6])]
    eps: Vec<f64>,
    /// Radii for the separated-operator bound.
    #[arg(long, value_delimiter = ',', default_values_t = vec![1.0, 2.0, 5.0])]
    r: Vec<f64>,
    /// Largest expansion index N for the separated-operator bound.
    #[arg(long, default_value_t = 12)]
    n_max: u32,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct TraceArgs {
    #[arg(long)]
    c: f64,
    /// Spectral function: linear | square | entropy | invlogpow |
    /// indicator:A.
    #[arg(long, default_value = "entropy")]
    f: String,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Copy, Clone, PartialEq, ValueEnum)]
enum Trs2Method {
    All,
    Explicit,
    WIntegral,
    Nystrom,
    Asymptotic,
}

#[derive(Args)]
struct Trs2Args {
    #[arg(long)]
    c: f64,
    #[arg(long, value_enum, default_value_t = Trs2Method::All)]
    method: Trs2Method,
    /// Number of terms for the asymptotic method.
    #[arg(long, default_value_t = 3)]
    terms: usize,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct WhitneyArgs {
    /// Named region: interval | square | lshape | disk.
    #[arg(long, conflicts_with = "region_file")]
    region: Option<String>,
    /// Box-union file, one box per line `lo1,hi1;lo2,hi2;...`.
    #[arg(long)]
    region_file: Option<std::path::PathBuf>,
    /// Cutoff level: boundary cells have side 2^-cutoff.
    #[arg(long, default_value_t = 8)]
    cutoff: i32,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct MinkowskiArgs {
    #[arg(long, conflicts_with = "region_file")]
    region: Option<String>,
    #[arg(long)]
    region_file: Option<std::path::PathBuf>,
    /// Radii, either `2^-4..2^-10` or a comma list of floats.
    #[arg(long, default_value = "2^-4..2^-8")]
    radii: String,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

fn main() -> ExitCode {
    let args = expand_config(std::env::args().collect());
    let cli = Cli::parse_from(args);
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

/// Splices `key=value` lines of the `--config` file in as `--key value`
/// flags, right after the subcommand token.
fn expand_config(mut args: Vec<String>) -> Vec<String> {
    let Some(pos) = args.iter().position(|a| a == "--config") else {
        return args;
    };
    if pos + 1 >= args.len() {
        return args;
    }
    let path = args[pos + 1].clone();
    let Ok(text) = std::fs::read_to_string(&path) else {
        eprintln!("error: cannot read config file {path}");
        std::process::exit(2);
    };
    args.drain(pos..=pos + 1);
    let insert_at = args.len().min(2);
    let mut extra = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some((k, v)) = line.split_once('=') {
            extra.push(format!("--{}", k.trim()));
            extra.push(v.trim().to_string());
        }
    }
    args.splice(insert_at..insert_at, extra);
    args
}

fn emit(out: &Option<std::path::PathBuf>, content: &str) -> plunge::Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| plunge::Error::Evaluation(format!("cannot write {path:?}: {e}"))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .map_err(|e| plunge::Error::Evaluation(format!("stdout: {e}")))
        }
    }
}

fn named_region(name: &str) -> plunge::Result<Region> {
    match name {
        "interval" => Ok(box_union_sdf(&BoxUnion::new(vec![AxisBox::from_bounds(
            &[(0.0, 1.0)],
        )?])?)),
        "square" => Ok(box_union_sdf(&BoxUnion::new(vec![AxisBox::from_bounds(
            &[(0.0, 1.0), (0.0, 1.0)],
        )?])?)),
        "lshape" => {
            let union = BoxUnion::new(vec![
                AxisBox::from_bounds(&[(0.0, 2.0), (0.0, 1.0)])?,
                AxisBox::from_bounds(&[(0.0, 1.0), (1.0, 2.0)])?,
            ])?;
            plunge::oracle::exact_region(&union)
        }
        "disk" => Ok(Region::from_fn(
            AxisBox::from_bounds(&[(-1.0, 1.0), (-1.0, 1.0)])?,
            |p: &[f64]| 1.0 - p.iter().map(|x| x * x).sum::<f64>().sqrt(),
        )),
        other => Err(plunge::Error::Parse(format!(
            "unknown region {other:?}; expected interval|square|lshape|disk"
        ))),
    }
}

fn load_region(
    name: &Option<String>,
    file: &Option<std::path::PathBuf>,
) -> plunge::Result<Region> {
    match (name, file) {
        (Some(n), _) => named_region(n),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| plunge::Error::Parse(format!("cannot read {path:?}: {e}")))?;
            Ok(box_union_sdf(&BoxUnion::from_text(&text)?))
        }
        (None, None) => Err(plunge::Error::Parse(
            "one of --region or --region-file is required".into(),
        )),
    }
}

fn parse_radii(spec: &str) -> plunge::Result<Vec<f64>> {
    if let Some((lo, hi)) = spec.split_once("..") {
        let exp = |s: &str| -> plunge::Result<i32> {
            s.trim()
                .strip_prefix("2^")
                .and_then(|e| e.parse::<i32>().ok())
                .ok_or_else(|| plunge::Error::Parse(format!("expected 2^-K, got {s:?}")))
        };
        let (a, b) = (exp(lo)?, exp(hi)?);
        let (a, b) = (a.max(b), a.min(b));
        return Ok((b..=a).rev().map(|k| 2f64.powi(k)).collect());
    }
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| plunge::Error::Parse(format!("bad radius {s:?}: {e}")))
        })
        .collect()
}

fn spectral_function(spec: &str) -> plunge::Result<SpectralFunction> {
    match spec {
        "linear" => Ok(SpectralFunction::linear()),
        "square" => Ok(SpectralFunction::square()),
        "entropy" => Ok(SpectralFunction::entropy()),
        "invlogpow" => Ok(SpectralFunction::inverse_log_power()),
        other => match other.strip_prefix("indicator:") {
            Some(a) => {
                let a: f64 = a
                    .parse()
                    .map_err(|e| plunge::Error::Parse(format!("bad indicator level: {e}")))?;
                SpectralFunction::indicator(a)
            }
            None => Err(plunge::Error::Parse(format!(
                "unknown spectral function {other:?}"
            ))),
        },
    }
}

fn run(command: Command) -> plunge::Result<ExitCode> {
    match command {
        Command::Spectrum(a) => {
            let nodes = a.nodes.unwrap_or_else(|| required_nodes(a.c));
            let s = localization_spectrum(a.c, nodes)?;
            emit(&a.out, &s.to_csv())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Counting(a) => {
            let mut rows = vec![plunge::counting::CountingReport::csv_header().to_string()];
            for &c in &a.c {
                let base = localization_spectrum(c, required_nodes(c))?;
                let spectrum = if a.d == 1 {
                    base
                } else {
                    plunge::counting::product_spectrum(&base, a.d, 1e-13f64.sqrt().max(1e-12))?
                };
                for &eps in &a.eps {
                    rows.push(plunge_counts(&spectrum, eps)?.to_csv_row());
                }
            }
            rows.push(String::new());
            emit(&a.out, &rows.join("\n"))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::BoundsCheck(a) => {
            let mut rows = Vec::new();
            let mut all_ok = true;
            match a.kind {
                BoundKind::Karnik => {
                    rows.push("c,eps,lambda,bound,ok".into());
                    for &c in &a.c {
                        let s = localization_spectrum(c, required_nodes(c))?;
                        for &eps in &a.eps {
                            let r = plunge_counts(&s, eps)?;
                            let bound = karnik_bound(c, eps);
                            let ok = (r.lambda as f64) <= bound;
                            all_ok &= ok;
                            rows.push(format!("{c},{eps:e},{},{bound:.6},{ok}", r.lambda));
                        }
                    }
                }
                BoundKind::Jr => {
                    rows.push("r,N,sigma,tail,bound,ok".into());
                    for &r in &a.r {
                        let nodes = ((8.0 * r).ceil() as usize + 60).max(64);
                        let (s, tail) = jr_singular_values_auto(r, 1e-6, nodes)?;
                        for n in 0..=a.n_max {
                            let bound = jr_rank2_tail_bound(n);
                            let sigma = s.nth(2 * n as usize + 3);
                            let ok = sigma + tail <= 1.1 * bound;
                            all_ok &= ok;
                            rows.push(format!("{r},{n},{sigma:.6e},{tail:.3e},{bound:.6e},{ok}"));
                        }
                    }
                }
                BoundKind::Schatten => {
                    rows.push("c,delta,ok".into());
                    for &c in &a.c {
                        let s = localization_spectrum(c, required_nodes(c))?;
                        for delta in [0.3, 0.1, 0.01] {
                            let ok = schatten_count_check(&s, delta);
                            all_ok &= ok;
                            rows.push(format!("{c},{delta},{ok}"));
                        }
                    }
                }
            }
            rows.push(String::new());
            emit(&a.out, &rows.join("\n"))?;
            Ok(if all_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Trace(a) => {
            let f = spectral_function(&a.f)?;
            let s = localization_spectrum(a.c, required_nodes(a.c))?;
            let measured = trace_function(&s, &f)?;
            let unit = BoxUnion::new(vec![AxisBox::from_bounds(&[(0.0, 1.0)])?])?;
            let report = two_term_prediction(&f, &unit, &unit, a.c, Some(measured.value))?;
            emit(&a.out, &format!("{}\n", report.to_json()))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Trs2(a) => {
            let methods: Vec<Trs2Method> = match a.method {
                Trs2Method::All => vec![
                    Trs2Method::Explicit,
                    Trs2Method::WIntegral,
                    Trs2Method::Nystrom,
                    Trs2Method::Asymptotic,
                ],
                m => vec![m],
            };
            let mut values = serde_json::Map::new();
            for m in &methods {
                let (name, value) = match m {
                    Trs2Method::Explicit => ("explicit", trs2_interval_explicit(a.c)?),
                    Trs2Method::WIntegral => {
                        let au = BoxUnion::new(vec![AxisBox::from_bounds(&[(0.0, a.c)])?])?;
                        let bu = BoxUnion::new(vec![AxisBox::from_bounds(&[(0.0, 1.0)])?])?;
                        ("w_integral", trs2_box_union(&au, &bu)?)
                    }
                    Trs2Method::Nystrom => (
                        "nystrom",
                        localization_spectrum(a.c, required_nodes(a.c))?.sum_sq(),
                    ),
                    Trs2Method::Asymptotic => ("asymptotic", trs2_asymptotic(a.c, a.terms)?),
                    Trs2Method::All => unreachable!(),
                };
                values.insert(name.into(), serde_json::json!(value));
            }
            let nums: Vec<f64> = values.values().filter_map(|v| v.as_f64()).collect();
            let mut gap = 0.0f64;
            for i in 0..nums.len() {
                for j in i + 1..nums.len() {
                    gap = gap.max((nums[i] - nums[j]).abs());
                }
            }
            let doc = serde_json::json!({
                "c": a.c,
                "terms": a.terms,
                "values": values,
                "max_pairwise_gap": gap,
            });
            emit(
                &a.out,
                &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Whitney(a) => {
            let region = load_region(&a.region, &a.region_file)?;
            let w = whitney_decompose(&region, a.cutoff)?;
            emit(&a.out, &w.to_csv())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Minkowski(a) => {
            let region = load_region(&a.region, &a.region_file)?;
            let radii = parse_radii(&a.radii)?;
            let mut rows = vec!["r,content_estimate".to_string()];
            for (r, est) in minkowski_profile(&region, &radii) {
                rows.push(format!("{r:.10e},{est:.10e}"));
            }
            rows.push(String::new());
            emit(&a.out, &rows.join("\n"))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyAll => {
            let results = plunge::verify::run_all();
            let mut all_ok = true;
            for r in &results {
                println!("{}", r.line());
                all_ok &= r.passed;
            }
            println!(
                "{} of {} criteria passed",
                results.iter().filter(|r| r.passed).count(),
                results.len()
            );
            Ok(if all_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}
