//! Command-line front end. Every run writes a manifest (arguments, seed,
//! version, file digests, wall time) to stderr and, with `--out`, next to
//! the output file.

use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::analysis::{
    beta_from_nu, certify_dimensions, critical_p, lemma4_bounds_check, nash_curve,
    volume_lower_bound_check, DimensionThresholds,
};
use crate::generators::{
    plates, random_glued, random_provenance, vicsek, PlateChoice, PlateSpec, Provenance,
};
use crate::graph::VertexId;
use crate::io::{self, GlueInput, GraphDocument};
use crate::spinal::{glue, validate_bruteforce, validate_structural, CanonicalForm, SpinalGraph};
use crate::volume::{ball_intersection_min_ratio, IntersectionScan};
use crate::walk::{decay_fit, return_probabilities_exact, return_probabilities_mc};

#[derive(Parser, Serialize)]
#[command(
    name = "spinal-lab",
    version,
    about = "Spinal graphs: construction, validation, volume growth, Nash-type ratios and random walks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Serialize)]
enum Command {
    /// Build a graph (Vicsek, plate, glued or random glued spinal graph)
    #[command(subcommand)]
    Generate(Generate),
    /// Check the spinal-graph conditions (π fixes the spine, cross-fiber
    /// edges join spine vertices, fibers connected); exit 1 with a JSON
    /// violation report if they fail
    Validate(InputArgs),
    /// Measure volumes, dimension constants, Nash ratios or lower volume bounds
    #[command(subcommand)]
    Analyze(Analyze),
    /// Run one of the structural or quantitative lemmas on a graph
    #[command(subcommand)]
    Check(Check),
    /// Critical Riesz exponent p_c(δ_Σ, δ_G, ν) = 2(δ_G-δ_Σ)/(δ_G/ν' - 2δ_Σ + 2)
    Pc(PcArgs),
    /// Return probabilities p_t(x,x) of the simple random walk, exact or Monte Carlo
    Walk(WalkArgs),
    /// Write a graph as Graphviz DOT or as an edge-list CSV
    #[command(subcommand)]
    Export(Export),
}

#[derive(Subcommand, Serialize)]
enum Generate {
    /// Vicsek graph 𝒱ⁿₘ with its diagonal spine and center o = vertex 0
    Vicsek {
        #[arg(long, default_value_t = 2)]
        dim: u32,
        #[arg(long)]
        level: u32,
        #[arg(long)]
        out: Option<String>,
    },
    /// Plate graph over the ray: fiber n is a ball of radius floor(n^α),
    /// α = (D-1)/δ, in a δ-dimensional plate
    Plates {
        #[arg(long = "D")]
        big_d: f64,
        #[arg(long)]
        delta: u32,
        #[arg(long)]
        length: usize,
        #[arg(long, value_enum, default_value_t = Family::Lattice)]
        family: Family,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Glue fibers G_x to a skeleton Γ by identifying z_x with x; input is
    /// {"skeleton": <graph document>, "fibers": [{"vertex_count","edges","root"}]}
    Glue {
        input: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Seeded random glued spinal graph (random tree plus extra edges for
    /// the skeleton and for each fiber)
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of skeleton vertices
        #[arg(long)]
        length: usize,
        #[arg(long, default_value_t = 4)]
        fiber_max: usize,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
enum Family {
    Lattice,
    King,
    Mixed,
}

#[derive(Args, Serialize)]
struct InputArgs {
    input: String,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Subcommand, Serialize)]
enum Analyze {
    /// Volume table |B(x,r)| (or spinal volumes |D(x,r)| with --spinal), CSV "r,volume"
    Volumes {
        input: String,
        #[arg(long, default_value_t = 0)]
        center: VertexId,
        #[arg(long)]
        rmax: usize,
        #[arg(long)]
        spinal: bool,
        #[arg(long)]
        out: Option<String>,
    },
    /// Dimension certificate for (δ_Σ, δ_G) along n_k: spinal doubling,
    /// spine growth and the |D(x0,n_k)|/n_k^δ_G window
    Dims {
        input: String,
        #[arg(long, default_value_t = 0)]
        center: VertexId,
        #[arg(long)]
        seq: String,
        #[arg(long)]
        delta_sigma: f64,
        #[arg(long)]
        delta_g: f64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Nash ratio ‖g‖_p^{1+p'/β} / (‖g‖_1^{p'/β} ‖∇g‖_p) on the test
    /// functions g_2n, CSV "n,norm1,normp,gradp,ratio"
    Nash {
        input: String,
        #[arg(long, default_value_t = 0)]
        center: VertexId,
        #[arg(long)]
        p: f64,
        /// Nash exponent β; defaults to 2ν/(ν+1) when --nu is given
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        nu: Option<f64>,
        #[arg(long)]
        seq: String,
        #[arg(long)]
        delta_sigma: Option<f64>,
        #[arg(long)]
        delta_g: Option<f64>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Lower volume bound: min |B(x,r)|/r^D over seeded samples of (x, r)
    Vlb {
        input: String,
        #[arg(long = "D")]
        big_d: f64,
        #[arg(long)]
        rmax: usize,
        /// Number of sampled (x, r) pairs
        #[arg(long, default_value_t = 200)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Subcommand, Serialize)]
enum Check {
    /// Minimal paths between two vertices of one fiber stay in the fiber
    Lemma2 {
        input: String,
        /// Maximum number of vertex pairs checked
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Gluing the decomposition (skeleton Γ, fibers G_x) gives back the
    /// graph up to canonical renumbering
    Roundtrip(InputArgs),
    /// min |B(x,r) ∩ B(y,R)| / |B(x,r)| over y on the spine, x ∈ B(y,R),
    /// r ≤ 2R, split into the cases r > 2d(x,y) and r ≤ 2d(x,y)
    BallIntersection {
        input: String,
        /// Largest R; R runs over powers of two up to it
        #[arg(long)]
        rmax: usize,
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of spine centers y (sampled with the seed)
        #[arg(long, default_value_t = 4)]
        centers: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Norm and gradient bounds for the test functions g_2n
    Lemma4 {
        input: String,
        #[arg(long, default_value_t = 0)]
        center: VertexId,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        seq: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Edge-level spinal validation against path enumeration (small graphs)
    Equivalence {
        input: String,
        /// Node budget of the path enumeration
        #[arg(long, default_value_t = 10_000_000)]
        budget: usize,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Args, Serialize)]
struct PcArgs {
    #[arg(long)]
    delta_sigma: f64,
    #[arg(long)]
    delta_g: f64,
    #[arg(long)]
    nu: f64,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
enum Mode {
    Exact,
    Mc,
}

#[derive(Args, Serialize)]
struct WalkArgs {
    input: String,
    #[arg(long, default_value_t = 0)]
    center: VertexId,
    #[arg(long)]
    tmax: usize,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100_000)]
    walkers: usize,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Subcommand, Serialize)]
enum Export {
    /// Graphviz DOT; spine vertices boxed, spine edges bold
    Dot(InputArgs),
    /// Edge list, CSV "u,v"
    Csv(InputArgs),
}

#[derive(Serialize)]
struct FileDigest {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct RunManifest<'a> {
    command_line: Vec<String>,
    params: &'a Cli,
    seed: Option<u64>,
    version: &'static str,
    inputs: Vec<FileDigest>,
    outputs: Vec<FileDigest>,
    wall_time_seconds: f64,
    exit_code: i32,
}

/// Result of one subcommand: exit code 0 or 1, files touched, seed used.
struct Outcome {
    code: i32,
    inputs: Vec<String>,
    outputs: Vec<String>,
    seed: Option<u64>,
}

struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult = Result<Outcome, UsageError>;

fn digest(path: &str) -> FileDigest {
    let sha256 = match std::fs::read(path) {
        Ok(bytes) => Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect(),
        Err(_) => String::new(),
    };
    FileDigest { path: path.to_string(), sha256 }
}

/// Writes to `out` if given, otherwise to stdout.
fn emit(out: &Option<String>, text: &str, outcome: &mut Outcome) -> Result<(), UsageError> {
    match out {
        Some(path) => {
            io::write_file(path, text)?;
            outcome.outputs.push(path.clone());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("reports serialize");
    s.push('\n');
    s
}

fn outcome(inputs: &[&str]) -> Outcome {
    Outcome { code: 0, inputs: inputs.iter().map(|s| s.to_string()).collect(), outputs: Vec::new(), seed: None }
}

fn load_doc(path: &str) -> Result<GraphDocument, UsageError> {
    Ok(GraphDocument::from_json(&io::read_file(path)?)?)
}

fn load_spinal(path: &str) -> Result<SpinalGraph, UsageError> {
    Ok(load_doc(path)?.spinal()?)
}

/// Parses `geometric:base=B,count=K[,start=S]` (`S·B^k`, `k < K`) or
/// `list:a,b,c`.
pub fn parse_seq(spec: &str) -> Result<Vec<usize>, String> {
    if let Some(rest) = spec.strip_prefix("list:") {
        return rest
            .split(',')
            .map(|s| s.trim().parse::<usize>().map_err(|e| format!("bad list entry {s:?}: {e}")))
            .collect();
    }
    let rest = spec
        .strip_prefix("geometric:")
        .ok_or_else(|| format!("sequence {spec:?} must start with geometric: or list:"))?;
    let (mut base, mut count, mut start) = (None, None, 1usize);
    for part in rest.split(',') {
        let (key, value) = part.split_once('=').ok_or_else(|| format!("expected key=value, got {part:?}"))?;
        let value: usize = value.trim().parse().map_err(|e| format!("bad value for {key}: {e}"))?;
        match key.trim() {
            "base" => base = Some(value),
            "count" => count = Some(value),
            "start" => start = value,
            other => return Err(format!("unknown sequence key {other:?}")),
        }
    }
    let base = base.ok_or("geometric sequence needs base=")?;
    let count = count.ok_or("geometric sequence needs count=")?;
    if base < 2 || start == 0 {
        return Err("geometric sequence needs base >= 2 and start >= 1".into());
    }
    let mut out = Vec::with_capacity(count);
    let mut v = start;
    for _ in 0..count {
        out.push(v);
        v = v.checked_mul(base).ok_or("sequence overflows")?;
    }
    Ok(out)
}

fn configure_threads() {
    if let Some(n) = std::env::var("SPINAL_LAB_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        // Only the first configuration in a process takes effect.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Runs the command line and returns the process exit code: 0 on success,
/// 1 when a validation or check fails, 2 on usage or input errors.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    let start = Instant::now();
    let result = dispatch(&cli.command);
    let elapsed = start.elapsed().as_secs_f64();
    let out = match result {
        Ok(out) => out,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            return 2;
        }
    };
    let manifest = RunManifest {
        command_line: argv,
        params: &cli,
        seed: out.seed,
        version: env!("CARGO_PKG_VERSION"),
        inputs: out.inputs.iter().map(|p| digest(p)).collect(),
        outputs: out.outputs.iter().map(|p| digest(p)).collect(),
        wall_time_seconds: elapsed,
        exit_code: out.code,
    };
    let text = serde_json::to_string(&manifest).expect("manifest serializes");
    eprintln!("{text}");
    if let Some(first) = out.outputs.first() {
        if let Err(e) = io::write_file(&format!("{first}.manifest.json"), &format!("{text}\n")) {
            eprintln!("error: {e}");
            return 2;
        }
    }
    out.code
}

fn dispatch(cmd: &Command) -> CmdResult {
    match cmd {
        Command::Generate(g) => generate(g),
        Command::Validate(a) => validate(a),
        Command::Analyze(a) => analyze(a),
        Command::Check(c) => check(c),
        Command::Pc(a) => pc(a),
        Command::Walk(a) => walk(a),
        Command::Export(e) => export(e),
    }
}

fn generate(cmd: &Generate) -> CmdResult {
    let mut o = outcome(&[]);
    let (doc, out) = match cmd {
        Generate::Vicsek { dim, level, out } => {
            let v = vicsek(*dim, *level)?;
            (GraphDocument::from_spinal(&v.spinal).with_provenance(v.provenance()), out)
        }
        Generate::Plates { big_d, delta, length, family, seed, out } => {
            let spec = PlateSpec {
                target_dim: *big_d,
                plate_dim: *delta,
                length: *length,
                choice: match family {
                    Family::Lattice => PlateChoice::Lattice,
                    Family::King => PlateChoice::King,
                    Family::Mixed => PlateChoice::Mixed,
                },
                seed: *seed,
            };
            o.seed = Some(*seed);
            let pg = plates(&spec)?;
            (GraphDocument::from_spinal(&pg.spinal).with_provenance(spec.provenance()), out)
        }
        Generate::Glue { input, out } => {
            o.inputs.push(input.clone());
            let parsed: GlueInput = serde_json::from_str(&io::read_file(input)?)?;
            let skeleton = parsed.skeleton.graph()?;
            let sg = glue(&skeleton, &parsed.fibers()?)?;
            let prov = Provenance::new("glue").param("input", input.as_str());
            (GraphDocument::from_spinal(&sg).with_provenance(prov), out)
        }
        Generate::Random { seed, length, fiber_max, out } => {
            if *length == 0 || *fiber_max == 0 {
                return Err(UsageError("--length and --fiber-max must be positive".into()));
            }
            o.seed = Some(*seed);
            let sg = random_glued(*seed, *length, *fiber_max);
            (
                GraphDocument::from_spinal(&sg).with_provenance(random_provenance(*seed, *length, *fiber_max)),
                out,
            )
        }
    };
    emit(out, &doc.to_json(), &mut o)?;
    Ok(o)
}

#[derive(Serialize)]
struct ValidateReport {
    valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    graph_error: Option<String>,
    violations: Vec<crate::spinal::Violation>,
}

fn validate(a: &InputArgs) -> CmdResult {
    let mut o = outcome(&[&a.input]);
    let doc = load_doc(&a.input)?;
    let report = match doc.graph() {
        Err(e) => ValidateReport { valid: false, graph_error: Some(e.to_string()), violations: Vec::new() },
        Ok(g) => {
            let (Some(spine), Some(pi)) = (&doc.spine, &doc.pi) else {
                return Err(UsageError("document has no spine and pi fields".into()));
            };
            let r = validate_structural(&g, spine, pi);
            ValidateReport { valid: r.is_valid(), graph_error: None, violations: r.violations }
        }
    };
    o.code = if report.valid { 0 } else { 1 };
    emit(&a.out, &json_line(&report), &mut o)?;
    Ok(o)
}

fn analyze(cmd: &Analyze) -> CmdResult {
    match cmd {
        Analyze::Volumes { input, center, rmax, spinal, out } => {
            let mut o = outcome(&[input]);
            let sg = load_spinal(input)?;
            let volumes = if *spinal {
                let safe = sg.safe_spinal_radius(*center);
                if *rmax > safe {
                    return Err(UsageError(format!("radius {rmax} exceeds the safe spinal radius {safe}")));
                }
                sg.spinal_volumes(*center, *rmax)
            } else {
                let safe = sg.safe_ball_radius(*center);
                if *rmax > safe {
                    return Err(UsageError(format!("radius {rmax} exceeds the safe ball radius {safe}")));
                }
                sg.graph().volume_table(*center, *rmax).volumes
            };
            emit(out, &io::volumes_csv(&volumes), &mut o)?;
            Ok(o)
        }
        Analyze::Dims { input, center, seq, delta_sigma, delta_g, out } => {
            let mut o = outcome(&[input]);
            let sg = load_spinal(input)?;
            let ns = parse_seq(seq)?;
            let cert =
                certify_dimensions(&sg, *center, &ns, *delta_sigma, *delta_g, DimensionThresholds::default())?;
            o.code = if cert.passes { 0 } else { 1 };
            emit(out, &json_line(&cert), &mut o)?;
            Ok(o)
        }
        Analyze::Nash { input, center, p, beta, nu, seq, delta_sigma, delta_g, out } => {
            let mut o = outcome(&[input]);
            let sg = load_spinal(input)?;
            let beta = match (beta, nu) {
                (Some(b), _) => *b,
                (None, Some(nu)) => beta_from_nu(*nu),
                (None, None) => return Err(UsageError("give --beta or --nu".into())),
            };
            let curve = nash_curve(&sg, *center, *p, beta, &parse_seq(seq)?)?;
            #[derive(Serialize)]
            struct Summary {
                p: f64,
                beta: f64,
                fit: Option<crate::analysis::ExponentFit>,
                slope_law: Option<crate::analysis::SlopeCheck>,
            }
            let slope_law = match (delta_sigma, delta_g) {
                (Some(ds), Some(dg)) => curve.slope_check(*ds, *dg, 0.15, 0.1),
                _ => None,
            };
            let summary = Summary { p: *p, beta, fit: curve.fit.clone(), slope_law };
            eprint!("{}", json_line(&summary));
            emit(out, &io::nash_csv(&curve), &mut o)?;
            Ok(o)
        }
        Analyze::Vlb { input, big_d, rmax, budget, seed, out } => {
            let mut o = outcome(&[input]);
            o.seed = Some(*seed);
            let sg = load_spinal(input)?;
            let g = sg.graph();
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut best: Option<crate::analysis::VolumeLowerBound> = None;
            let mut drawn = 0;
            let mut attempts = 0;
            while drawn < *budget {
                attempts += 1;
                if attempts > 100 * budget.max(&1) {
                    return Err(UsageError("could not find centers with a positive safe radius".into()));
                }
                let x = rng.random_range(0..g.vertex_count());
                let safe = sg.safe_ball_radius(x).min(*rmax);
                if safe == 0 {
                    continue;
                }
                let r = rng.random_range(1..=safe);
                let v = volume_lower_bound_check(g, sg.truncation(), *big_d, &[x], &[r])?;
                if best.as_ref().is_none_or(|b| v.min_constant < b.min_constant) {
                    best = Some(v);
                }
                drawn += 1;
            }
            let mut best = best.ok_or_else(|| UsageError("--budget must be positive".into()))?;
            best.samples = drawn;
            o.code = if best.min_constant > 0.0 { 0 } else { 1 };
            emit(out, &json_line(&best), &mut o)?;
            Ok(o)
        }
    }
}

fn check(cmd: &Check) -> CmdResult {
    match cmd {
        Check::Lemma2 { input, budget, out } => {
            let mut o = outcome(&[input]);
            let sg = load_spinal(input)?;
            let report = sg.check_fiber_geodesics(&sg.fiber_pairs(*budget));
            o.code = if report.violations.is_empty() { 0 } else { 1 };
            emit(out, &json_line(&report), &mut o)?;
            Ok(o)
        }
        Check::Roundtrip(a) => {
            let mut o = outcome(&[&a.input]);
            let sg = load_spinal(&a.input)?;
            let parts = sg.decompose();
            let reglued = glue(&parts.skeleton, &parts.fibers)?;
            let equal = CanonicalForm::of(&reglued) == sg.canonical_form();
            o.code = if equal { 0 } else { 1 };
            emit(&a.out, &json_line(&serde_json::json!({ "canonical_forms_equal": equal })), &mut o)?;
            Ok(o)
        }
        Check::BallIntersection { input, rmax, budget, seed, centers, out } => {
            let mut o = outcome(&[input]);
            o.seed = Some(*seed);
            let sg = load_spinal(input)?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut ys: Vec<VertexId> = sg.spine().to_vec();
            rand::seq::SliceRandom::shuffle(ys.as_mut_slice(), &mut rng);
            ys.truncate((*centers).max(1));
            ys.sort_unstable();
            let radii: Vec<usize> = std::iter::successors(Some(1usize), |r| r.checked_mul(2))
                .take_while(|r| r <= rmax)
                .collect();
            let scan = IntersectionScan { centers: ys, radii, r_cap: 2 * rmax, budget: *budget, seed: *seed };
            let report = ball_intersection_min_ratio(sg.graph(), &scan)?;
            o.code = if report.min_ratio > 0.0 { 0 } else { 1 };
            emit(out, &json_line(&report), &mut o)?;
            Ok(o)
        }
        Check::Lemma4 { input, center, p, seq, out } => {
            let mut o = outcome(&[input]);
            let sg = load_spinal(input)?;
            let reports = parse_seq(seq)?
                .into_iter()
                .map(|n| lemma4_bounds_check(&sg, *center, n, *p))
                .collect::<Result<Vec<_>, _>>()?;
            o.code = if reports.iter().all(|r| r.passes()) { 0 } else { 1 };
            emit(out, &json_line(&reports), &mut o)?;
            Ok(o)
        }
        Check::Equivalence { input, budget, out } => {
            let mut o = outcome(&[input]);
            let doc = load_doc(input)?;
            let g = doc.graph()?;
            let (Some(spine), Some(pi)) = (&doc.spine, &doc.pi) else {
                return Err(UsageError("document has no spine and pi fields".into()));
            };
            let structural = validate_structural(&g, spine, pi).is_valid();
            let bruteforce = validate_bruteforce(&g, spine, pi, g.vertex_count(), *budget)?;
            o.code = if structural == bruteforce { 0 } else { 1 };
            let report = serde_json::json!({
                "structural": structural,
                "bruteforce": bruteforce,
                "agree": structural == bruteforce,
            });
            emit(out, &json_line(&report), &mut o)?;
            Ok(o)
        }
    }
}

fn pc(a: &PcArgs) -> CmdResult {
    let mut o = outcome(&[]);
    let value = critical_p(a.delta_sigma, a.delta_g, a.nu)?;
    println!("{value:?}");
    if let Some(path) = &a.out {
        let text = json_line(&serde_json::json!({
            "delta_sigma": a.delta_sigma,
            "delta_g": a.delta_g,
            "nu": a.nu,
            "p_c": value,
        }));
        io::write_file(path, &text)?;
        o.outputs.push(path.clone());
    }
    Ok(o)
}

fn walk(a: &WalkArgs) -> CmdResult {
    let mut o = outcome(&[&a.input]);
    let doc = load_doc(&a.input)?;
    let g = doc.graph()?;
    let series = match a.mode {
        Mode::Exact => return_probabilities_exact(&g, &doc.truncation, a.center, a.tmax)?,
        Mode::Mc => {
            o.seed = Some(a.seed);
            return_probabilities_mc(&g, &doc.truncation, a.center, a.tmax, a.walkers, a.seed)?
        }
    };
    if let Ok(fit) = decay_fit(&series, (100.min(a.tmax / 2), a.tmax)) {
        eprint!("{}", json_line(&serde_json::json!({ "decay_fit": fit, "max_mass_error": series.max_mass_error })));
    }
    emit(&a.out, &io::walk_csv(&series), &mut o)?;
    Ok(o)
}

fn export(cmd: &Export) -> CmdResult {
    let (a, dot) = match cmd {
        Export::Dot(a) => (a, true),
        Export::Csv(a) => (a, false),
    };
    let mut o = outcome(&[&a.input]);
    let doc = load_doc(&a.input)?;
    let g = doc.graph()?;
    let sg = doc.spinal().ok();
    let text = if dot { io::to_dot(&g, sg.as_ref()) } else { io::edges_csv(&g) };
    emit(&a.out, &text, &mut o)?;
    Ok(o)
}
