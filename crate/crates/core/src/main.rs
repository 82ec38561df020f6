use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use leakregion::gaussian::{sweep_region, GaussianParams, SweepGrid};
use leakregion::gaussverify::{verify_batch, verify_gaussian_point, SampleRanges};
use leakregion::io;
use leakregion::prob::{assemble_joint, AuxCards, AuxiliaryJoint, ChannelSpec, Unit, INPUT_TOL};
use leakregion::region::{
    binning_budget, binning_region, check_point, inner_bounds, outer_bounds, search_inner_region,
    zero_rate_region, RateQuintuple, SearchConfig, Verdict,
};
use leakregion::Result;

/// Exit code when a Gaussian verification residual exceeds its bound.
const EXIT_VERIFY_FAIL: u8 = 1;

#[derive(Parser, Debug)]
#[command(name = "leakregion", version, about = "Rate-leakage regions of state-dependent broadcast channels")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, env = "LEAKREGION_SEED", default_value_t = 0)]
    seed: u64,
    /// Unit of reported information values: bits or nats.
    #[arg(long, global = true, env = "LEAKREGION_UNIT", default_value = "bits")]
    unit: Unit,
    /// Normalization tolerance for input pmfs.
    #[arg(long, global = true, default_value_t = INPUT_TOL)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Inner-bound right-hand sides and leakage guarantees for one conditional.
    Inner(JointArgs),
    /// Outer-bound right-hand sides and leakage lower bounds for one conditional.
    Outer(JointArgs),
    /// Binning polytope (support values, vertices) and minimal binning rates.
    Binning(JointArgs),
    /// Random-restart frontier search over auxiliary conditionals.
    Search(SearchArgs),
    /// Zero-rate leakage region on a grid of input laws.
    ZeroRate(ZeroRateArgs),
    /// Tests a quintuple against a frontier CSV.
    Check(CheckArgs),
    /// Sweeps the scalar Gaussian region.
    Gaussian(GaussianArgs),
    /// Checks the Gaussian closed forms against log-det mutual information.
    VerifyGaussian(VerifyArgs),
}

#[derive(Args, Debug)]
struct JointArgs {
    /// Channel file (TOML), `-` for stdin.
    #[arg(long)]
    channel: PathBuf,
    /// Auxiliary conditional file (TOML).
    #[arg(long)]
    cond: PathBuf,
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    channel: PathBuf,
    /// Auxiliary cardinalities `w,u,v`; defaults to |X|·|S| each.
    #[arg(long, value_parser = parse_cards)]
    cards: Option<AuxCards>,
    /// Number of random restarts.
    #[arg(long, default_value_t = 16)]
    samples: usize,
    /// Local-search sweep cap per restart.
    #[arg(long, default_value_t = 20)]
    local_iters: usize,
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct ZeroRateArgs {
    #[arg(long)]
    channel: PathBuf,
    /// Grid denominator: p(x|s) takes values in multiples of 1/steps.
    #[arg(long, default_value_t = 32)]
    steps: usize,
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Frontier CSV produced by `search` or `zero-rate`.
    #[arg(long)]
    frontier: PathBuf,
    /// `r0,r1,r2,e1,e2` in the frontier's unit.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    point: RateQuintuple,
}

#[derive(Args, Debug, Clone, Copy)]
struct GaussianFlags {
    #[arg(long = "p")]
    p: f64,
    #[arg(long)]
    n1: f64,
    #[arg(long)]
    n2: f64,
    #[arg(long, default_value_t = 0.0)]
    q1: f64,
    #[arg(long, default_value_t = 0.0)]
    q2: f64,
    #[arg(long, default_value_t = 0.5)]
    gamma: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    rho1: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    rho2: f64,
}

impl GaussianFlags {
    fn params(&self) -> Result<GaussianParams> {
        GaussianParams::new(self.p, self.n1, self.n2, self.q1, self.q2, self.gamma, self.rho1, self.rho2)
    }
}

#[derive(Args, Debug)]
struct GaussianArgs {
    #[command(flatten)]
    params: GaussianFlags,
    /// Points on the γ grid over [0, 1]; 1 keeps --gamma.
    #[arg(long, default_value_t = 33)]
    gamma_steps: usize,
    /// Points per ρ axis over [−1, 1]; 1 keeps --rho1/--rho2.
    #[arg(long, default_value_t = 33)]
    rho_steps: usize,
    #[arg(long, default_value = "-")]
    out: PathBuf,
    /// Also write a gnuplot data file.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Verify a single parameter set instead of a seeded sample.
    #[arg(long = "p", requires_all = ["n1", "n2"])]
    p: Option<f64>,
    #[arg(long)]
    n1: Option<f64>,
    #[arg(long)]
    n2: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    q1: f64,
    #[arg(long, default_value_t = 0.0)]
    q2: f64,
    #[arg(long, default_value_t = 0.5)]
    gamma: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    rho1: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    rho2: f64,
    /// Number of seeded parameter sets.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

fn parse_cards(s: &str) -> std::result::Result<AuxCards, String> {
    let v: Vec<usize> = s.split(',').map(|t| t.trim().parse::<usize>().map_err(|e| e.to_string())).collect::<std::result::Result<_, _>>()?;
    match v.as_slice() {
        [w, u, v] => {
            let cards = AuxCards::new(*w, *u, *v);
            cards.validate().map_err(|e| e.to_string())?;
            Ok(cards)
        }
        _ => Err("expected three comma-separated cardinalities w,u,v".into()),
    }
}

fn parse_point(s: &str) -> std::result::Result<RateQuintuple, String> {
    let v: Vec<f64> = s.split(',').map(|t| t.trim().parse::<f64>().map_err(|e| e.to_string())).collect::<std::result::Result<_, _>>()?;
    match v.as_slice() {
        [r0, r1, r2, e1, e2] => RateQuintuple::new(*r0, *r1, *r2, *e1, *e2).map_err(|e| e.to_string()),
        _ => Err("expected five comma-separated values r0,r1,r2,e1,e2".into()),
    }
}

fn load_channel(path: &Path, tol: f64) -> Result<ChannelSpec> {
    io::parse_channel_with_tolerance(&io::read_input(path)?, tol)
}

fn load_joint(a: &JointArgs, tol: f64) -> Result<AuxiliaryJoint> {
    let ch = load_channel(&a.channel, tol)?;
    let cond = io::parse_conditional_with_tolerance(&io::read_input(&a.cond)?, &ch, tol)?;
    assemble_joint(&ch, &cond)
}

fn table(rows: &[(&str, f64)], unit: Unit) -> String {
    let mut out = String::from("quantity,value\n");
    for (name, v) in rows {
        out.push_str(&format!("{name},{}\n", io::format_sig(unit.from_bits(*v))));
    }
    out
}

fn run(cli: Cli) -> Result<u8> {
    let unit = cli.unit;
    match cli.command {
        Command::Inner(a) => {
            let joint = load_joint(&a, cli.tol)?;
            let v = inner_bounds(&joint)?;
            let [e0, e01, e02, esum] = v.effective();
            let rows = [
                ("b_r0", v.b_r0),
                ("b_r01", v.b_r01),
                ("b_r02", v.b_r02),
                ("b_rsum", v.b_rsum),
                ("binning_sum", v.appendix_sum),
                ("sum_discrepancy", v.sum_discrepancy()),
                ("effective_r0", e0),
                ("effective_r01", e01),
                ("effective_r02", e02),
                ("effective_rsum", esum),
                ("l1", v.l1),
                ("l2", v.l2),
            ];
            io::write_output(&a.out, &table(&rows, unit))?;
        }
        Command::Outer(a) => {
            let joint = load_joint(&a, cli.tol)?;
            let v = outer_bounds(&joint)?;
            let rows = [
                ("c_r0", v.c_r0),
                ("c_r01", v.c_r01),
                ("c_r02", v.c_r02),
                ("c_sum1", v.c_sum1),
                ("c_sum2", v.c_sum2),
                ("m1", v.m1),
                ("m2", v.m2),
            ];
            io::write_output(&a.out, &table(&rows, unit))?;
        }
        Command::Binning(a) => {
            let joint = load_joint(&a, cli.tol)?;
            let region = binning_region(&joint)?;
            let budget = binning_budget(&joint)?;
            let v = region.values;
            let rows = [
                ("b_r0", v.b_r0),
                ("b_r01", v.b_r01),
                ("b_r02", v.b_r02),
                ("b_rsum", v.b_rsum),
                ("l1", v.l1),
                ("l2", v.l2),
                ("rt0", budget.rt0),
                ("rt2", budget.rt2),
                ("rt1s", budget.rt1s),
                ("rt12", budget.rt12),
            ];
            let mut text = table(&rows, unit);
            text.push_str("\nr0,r1,r2\n");
            for vert in region.polytope.vertices() {
                let cols: Vec<String> = vert.iter().map(|x| io::format_sig(unit.from_bits(*x))).collect();
                text.push_str(&cols.join(","));
                text.push('\n');
            }
            io::write_output(&a.out, &text)?;
        }
        Command::Search(a) => {
            let ch = load_channel(&a.channel, cli.tol)?;
            let cards = a.cards.unwrap_or_else(|| AuxCards::default_for(&ch));
            let cfg = SearchConfig { seed: cli.seed, samples: a.samples, local_iters: a.local_iters, ..SearchConfig::default() };
            let frontier = search_inner_region(&ch, cards, &cfg)?;
            io::emit_frontier_csv(&frontier, unit, &a.out)?;
        }
        Command::ZeroRate(a) => {
            let ch = load_channel(&a.channel, cli.tol)?;
            let frontier = zero_rate_region(&ch, a.steps)?;
            io::emit_frontier_csv(&frontier, unit, &a.out)?;
        }
        Command::Check(a) => {
            let frontier = io::frontier_from_rows(io::parse_frontier_csv(&io::read_input(&a.frontier)?)?);
            let verdict = check_point(&frontier, &a.point)?;
            let mut text = format!("{}\n", verdict.label());
            if let Verdict::Inside { weights } = &verdict {
                for (i, w) in weights {
                    text.push_str(&format!("{},{}\n", frontier.provenance[*i].id, io::format_sig(*w)));
                }
            }
            io::write_output(Path::new("-"), &text)?;
        }
        Command::Gaussian(a) => {
            let base = a.params.params()?;
            let points = sweep_region(&base, SweepGrid { gamma_steps: a.gamma_steps, rho_steps: a.rho_steps })?;
            io::write_output(&a.out, &io::gaussian_csv(&points, unit))?;
            if let Some(plot) = &a.plot {
                io::write_output(plot, &io::gaussian_plot_data(&points, unit))?;
            }
        }
        Command::VerifyGaussian(a) => {
            let reports = match (a.p, a.n1, a.n2) {
                (Some(p), Some(n1), Some(n2)) => {
                    let gp = GaussianParams::new(p, n1, n2, a.q1, a.q2, a.gamma, a.rho1, a.rho2)?;
                    vec![verify_gaussian_point(&gp)?]
                }
                _ => verify_batch(cli.seed, a.samples, &SampleRanges::default())?,
            };
            io::write_output(&a.out, &io::verification_csv(&reports))?;
            if reports.iter().any(|r| !r.passed()) {
                return Ok(EXIT_VERIFY_FAIL);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("leakregion: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
