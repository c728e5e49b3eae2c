use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use np2::field::{parse_field_spec, FieldCtx};
use np2::hasse::classify;
use np2::modsolve::{default_max_length, density, minimal_irreducible_solutions, EnumOptions, ExponentSet};
use np2::rational::{format_ratio, parse_ratio};
use np2::selftest;
use np2::sweep::{
    parse_predictors, run_sweep, threads_from_env, write_report, Domain, Format, FrontierReport, SweepSpec,
};
use np2::vss::{effective_set, EntryRule, MinimalSupportMatrix, StructureCache};
use np2::zeta::{l_polynomial, l_polynomial_verified, parse_terms, CurvePoly, LPolynomial};
use serde_json::{json, Value};

/// Exit status for malformed input or a sweep that exceeds its bounds.
const SPEC_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "np2", version, about = "First vertices of Newton polygons of y^2 + y = f(x) over F_2^a")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// L-polynomial and Newton polygon by point counting
    Zeta(ZetaArgs),
    /// Newton polygon vertices and slopes only
    Np(CurveArgs),
    /// 2-density of an exponent set
    Density(DensityArgs),
    /// Minimal irreducible solutions at a given density
    Minimal(MinimalArgs),
    /// First vertex from the stable image of the support matrix
    Vss(VssArgs),
    /// Closed-form case and Hasse polynomial
    Classify(CurveArgs),
    /// Compare predictors over a family of curves
    Sweep(SweepArgs),
    /// Run the invariant suite
    Selftest,
}

#[derive(Args)]
struct CurveArgs {
    /// Base field as 2^a or q
    #[arg(long, default_value = "2^1")]
    q: String,
    /// Coefficients as exponent:bits pairs, e.g. 7:1,3:1
    #[arg(long)]
    coeffs: String,
    /// Genus; read off the leading exponent when omitted
    #[arg(long)]
    g: Option<u32>,
}

impl CurveArgs {
    fn curve(&self) -> Result<CurvePoly, String> {
        let ctx = FieldCtx::new(parse_field_spec(&self.q).map_err(err)?).map_err(err)?;
        let terms = parse_terms(&self.coeffs).map_err(err)?;
        match self.g {
            Some(g) => CurvePoly::with_genus(ctx, g, terms),
            None => CurvePoly::new(ctx, terms),
        }
        .map_err(err)
    }
}

#[derive(Args)]
struct ZetaArgs {
    #[command(flatten)]
    curve: CurveArgs,
    /// Compute all 2g sums and check the functional equation and Weil bound
    #[arg(long)]
    verify: bool,
}

#[derive(Args)]
struct SetArgs {
    /// Members and ranges, e.g. odd<=29 or 1,3,5
    #[arg(long)]
    set: String,
    /// Members to remove, e.g. 15,23
    #[arg(long)]
    exclude: Option<String>,
}

impl SetArgs {
    fn set(&self) -> Result<ExponentSet, String> {
        let set: ExponentSet = self.set.parse().map_err(err)?;
        match &self.exclude {
            Some(text) => {
                let removed: Vec<u32> = text
                    .split(',')
                    .map(|t| t.trim().parse().map_err(|_| format!("bad member {t:?}")))
                    .collect::<Result<_, _>>()?;
                set.exclude(&removed).map_err(err)
            }
            None => Ok(set),
        }
    }
}

#[derive(Args)]
struct DensityArgs {
    #[command(flatten)]
    set: SetArgs,
    /// Largest length searched
    #[arg(long)]
    max_len: Option<u32>,
}

#[derive(Args)]
struct MinimalArgs {
    #[command(flatten)]
    set: SetArgs,
    /// Target density as num/den; the certified density when omitted
    #[arg(long)]
    density: Option<String>,
    /// Allow jumps that are sums of several members
    #[arg(long)]
    strict: bool,
    #[arg(long, default_value_t = 5)]
    max_weight: u32,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    SupportTransitions,
    DigitMatch,
}

#[derive(Args)]
struct VssArgs {
    #[command(flatten)]
    curve: CurveArgs,
    #[arg(long, value_enum, default_value_t = Rule::SupportTransitions)]
    rule: Rule,
    /// Include the matrix in the output
    #[arg(long)]
    matrix: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value = "2^1")]
    q: String,
    /// Genus or range LO-HI
    #[arg(long)]
    g: String,
    /// Every curve of the family (the default)
    #[arg(long, conflicts_with = "random")]
    exhaustive: bool,
    /// A seeded sample of --count curves
    #[arg(long, requires = "count")]
    random: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    count: Option<u64>,
    /// Coefficients held fixed, e.g. 15:0,23:0
    #[arg(long)]
    fix: Option<String>,
    #[arg(long, default_value = "oracle,vss,hasse")]
    predictors: String,
    /// Report file; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "jsonl")]
    format: Format,
    /// Where to write the frontier report
    #[arg(long)]
    frontier: Option<PathBuf>,
    /// Treat disagreements as expected data, not failure
    #[arg(long)]
    expect_frontier: bool,
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn big(x: &num_bigint::BigInt) -> Value {
    i64::try_from(x).map_or_else(|_| Value::String(x.to_string()), Value::from)
}

fn polygon_json(l: &LPolynomial) -> Value {
    let np = l.newton_polygon();
    json!({
        "vertices": np.vertices(),
        "slopes": np.slopes().iter().map(format_ratio).collect::<Vec<_>>(),
        "first_vertex": np.first_vertex().ok(),
    })
}

fn print_json(v: &Value) -> Result<(), String> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v).map_err(err)?;
    writeln!(out).map_err(err)
}

fn zeta(args: &ZetaArgs) -> Result<(), String> {
    let f = args.curve.curve()?;
    let l = if args.verify { l_polynomial_verified(&f) } else { l_polynomial(&f) }.map_err(err)?;
    print_json(&json!({
        "q": format!("2^{}", f.ctx().degree()),
        "genus": f.genus(),
        "coeffs": f.encoding(),
        "l_polynomial": l.coeffs().iter().map(big).collect::<Vec<_>>(),
        "newton_polygon": polygon_json(&l),
    }))
}

fn np(args: &CurveArgs) -> Result<(), String> {
    let l = l_polynomial(&args.curve()?).map_err(err)?;
    print_json(&polygon_json(&l))
}

fn density_cmd(args: &DensityArgs) -> Result<(), String> {
    let set = args.set.set()?;
    let d = density(&set, args.max_len.unwrap_or_else(|| default_max_length(&set))).map_err(err)?;
    print_json(&json!({ "set": set, "result": d }))
}

fn minimal(args: &MinimalArgs) -> Result<(), String> {
    let set = args.set.set()?;
    let delta = match &args.density {
        Some(text) => parse_ratio(text).ok_or_else(|| format!("bad density {text:?}"))?,
        None => {
            let d = density(&set, default_max_length(&set)).map_err(err)?;
            if !d.certified {
                eprintln!("warning: density {} is not certified", format_ratio(&d.density.0));
            }
            d.density.0
        }
    };
    let opts = EnumOptions { strict: args.strict, max_weight: args.max_weight };
    let sols = minimal_irreducible_solutions(&set, delta, opts).map_err(err)?;
    let supports: Vec<Value> = sols.iter().map(|s| json!(s.support().values())).collect();
    print_json(&json!({
        "set": set,
        "density": format_ratio(&delta),
        "solutions": sols,
        "supports": supports,
    }))
}

fn vss(args: &VssArgs) -> Result<(), String> {
    let f = args.curve.curve()?;
    let rule = match args.rule {
        Rule::SupportTransitions => EntryRule::SupportTransitions,
        Rule::DigitMatch => EntryRule::DigitMatch,
    };
    let cache = StructureCache::default();
    let p = np2::vss::predict_with(&f, &cache, rule).map_err(err)?;
    let mut out = serde_json::to_value(&p).map_err(err)?;
    if args.matrix {
        let s = cache.get(&effective_set(&f).map_err(err)?).map_err(err)?;
        let m = MinimalSupportMatrix::build(&s.solutions, &f, rule).map_err(err)?;
        out["solutions"] = serde_json::to_value(&s.solutions).map_err(err)?;
        out["matrix"] = json!(m.entries);
        out["image_chain"] = json!(m.semilinear_map(*f.ctx()).image_chain());
    }
    print_json(&out)
}

fn classify_cmd(args: &CurveArgs) -> Result<(), String> {
    let c = classify(&args.curve()?);
    print_json(&serde_json::to_value(&c).map_err(err)?)
}

fn sweep(args: &SweepArgs) -> Result<ExitCode, String> {
    let (genus_min, genus_max) = SweepSpec::parse_genus(&args.g).map_err(err)?;
    let domain = if args.random {
        Domain::Random { seed: args.seed, count: args.count.unwrap_or(0) }
    } else {
        Domain::Exhaustive
    };
    let spec = SweepSpec {
        q_degree: parse_field_spec(&args.q).map_err(err)?,
        genus_min,
        genus_max,
        domain,
        fixed: args.fix.as_deref().map(SweepSpec::parse_fixed).transpose().map_err(err)?.unwrap_or_default(),
        predictors: parse_predictors(&args.predictors).map_err(err)?,
    };
    let out = run_sweep(&spec, threads_from_env()).map_err(err)?;
    match &args.out {
        Some(path) => write_report(&out.records, args.format, BufWriter::new(File::create(path).map_err(err)?)),
        None => write_report(&out.records, args.format, io::stdout().lock()),
    }
    .map_err(err)?;
    let report = FrontierReport::from_records(&out.records);
    if let Some(path) = &args.frontier {
        report.write_json(BufWriter::new(File::create(path).map_err(err)?)).map_err(err)?;
    }
    eprintln!("{} in {} ms", out.summary, out.elapsed_ms);
    if !report.cases.is_empty() {
        eprint!("{}", report.table());
    }
    Ok(ExitCode::from(out.summary.exit_code(args.expect_frontier) as u8))
}

fn selftest_cmd() -> ExitCode {
    let mut ok = true;
    for c in selftest::run_all() {
        let status = if c.passed() { "ok" } else { "FAILED" };
        println!("{:<45} {:>7} cases  {status}", c.name, c.cases);
        for e in &c.examples {
            println!("    {e}");
        }
        ok &= c.passed();
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let done = |r: Result<(), String>| r.map(|()| ExitCode::SUCCESS);
    match &cli.command {
        Command::Zeta(a) => done(zeta(a)),
        Command::Np(a) => done(np(a)),
        Command::Density(a) => done(density_cmd(a)),
        Command::Minimal(a) => done(minimal(a)),
        Command::Vss(a) => done(vss(a)),
        Command::Classify(a) => done(classify_cmd(a)),
        Command::Sweep(a) => sweep(a),
        Command::Selftest => Ok(selftest_cmd()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(SPEC_ERROR);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(SPEC_ERROR)
        }
    }
}
