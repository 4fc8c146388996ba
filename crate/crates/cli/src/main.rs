use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use planar_flow::engines::{ApexEngine, HassinEngine, MaxFlowEngine, OracleEngine};
use planar_flow::flow_base::FlowNetwork;
use planar_flow::generate::{gen_grid, gen_random_planar, CapacityDist, GridSpec, Layout, PlanarSpec};
use planar_flow::io::{emit_flow, emit_instance, emit_separator, parse_flow, parse_instance, parse_separator, Instance};
use planar_flow::segment::{parse_pgm, segment, write_pgm, SegmentParams};
use planar_flow::separator::{find_cycle_separator, separator_for_terminals, Side};
use planar_flow::side_to_side::SideToSideInstance;
use planar_flow::solver::{extract_cut, SolveStats};
use planar_flow::{verify, Flow, Network, Solver, SolverConfig};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "planar-flow", version, about = "Maximum flow in planar graphs with many sources and sinks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a k x k grid instance.
    GenGrid(GenGridArgs),
    /// Generate a random planar instance from a stacked triangulation.
    GenPlanar(GenPlanarArgs),
    /// Compute a maximum flow.
    Solve(SolveArgs),
    /// Check a flow file against an instance. Exits 1 if it is not a maximum flow.
    Verify { instance: PathBuf, flow: PathBuf },
    /// Find a cycle separator of the (triangulated) instance graph.
    Separate(SeparateArgs),
    /// Foreground/background segmentation of a PGM image.
    Segment(SegmentArgs),
    /// Time the solver on generated grids and print CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum LayoutArg {
    Opposite,
    Interior,
    Face,
}

#[derive(Args)]
struct GenGridArgs {
    #[arg(short)]
    k: usize,
    #[arg(long, value_enum, default_value = "opposite")]
    layout: LayoutArg,
    #[arg(long, default_value_t = 2)]
    sources: usize,
    #[arg(long, default_value_t = 2)]
    sinks: usize,
    /// Largest capacity; 0 gives unit capacities.
    #[arg(long, default_value_t = 0)]
    max_cap: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenPlanarArgs {
    #[arg(short)]
    n: usize,
    #[arg(long, default_value_t = 20)]
    max_cap: u32,
    #[arg(long, default_value_t = 3)]
    sources: usize,
    #[arg(long, default_value_t = 3)]
    sinks: usize,
    /// Fraction of edges removed while keeping the graph connected.
    #[arg(long, default_value_t = 0.0)]
    sparsity: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Auto,
    Oracle,
    Hassin,
    Apex,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Full,
    SideToSide,
}

#[derive(Args)]
struct Thresholds {
    /// Solve directly when one side has at most this many terminals.
    #[arg(long, default_value_t = 2)]
    k_single: usize,
    /// Iterate over pairs when |S||T| <= k_pair * sqrt(n).
    #[arg(long, default_value_t = 1.0)]
    k_pair: f64,
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    engine: EngineArg,
    #[arg(long, value_enum, default_value = "full")]
    mode: ModeArg,
    /// Separator file for side-to-side mode, in vertex ids of the
    /// triangulated graph. Computed when absent.
    #[arg(long)]
    separator: Option<PathBuf>,
    /// Print the recursion or balancing trace to stderr and check the
    /// balancing invariant.
    #[arg(long)]
    trace: bool,
    #[command(flatten)]
    thresholds: Thresholds,
    /// Shuffles the terminal order before solving; the value does not change.
    #[arg(long)]
    seed: Option<u64>,
    /// Flow file to write.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SeparateArgs {
    instance: PathBuf,
    /// Weight the terminals instead of all vertices.
    #[arg(long)]
    terminals: bool,
    /// Separator file to write.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SegmentArgs {
    input: PathBuf,
    output: PathBuf,
    /// Pixels at least this bright seed the foreground.
    #[arg(long, default_value_t = 230)]
    foreground: u16,
    /// Pixels at most this bright seed the background.
    #[arg(long, default_value_t = 25)]
    background: u16,
    #[arg(long, default_value_t = 8)]
    smoothness: u32,
    #[command(flatten)]
    thresholds: Thresholds,
}

#[derive(Args)]
struct BenchArgs {
    /// Grid sides to run.
    #[arg(long, value_delimiter = ',', default_value = "8,16,32")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    reps: usize,
    #[arg(long, default_value_t = 4)]
    sources: usize,
    #[arg(long, default_value_t = 4)]
    sinks: usize,
    #[arg(long, value_enum, default_value = "interior")]
    layout: LayoutArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[command(flatten)]
    thresholds: Thresholds,
}

impl Thresholds {
    fn config(&self, debug: bool) -> SolverConfig {
        SolverConfig {
            k_single: self.k_single,
            k_pair: self.k_pair,
            debug,
        }
    }
}

impl From<LayoutArg> for Layout {
    fn from(l: LayoutArg) -> Layout {
        match l {
            LayoutArg::Opposite => Layout::OppositeSides,
            LayoutArg::Interior => Layout::RandomInterior,
            LayoutArg::Face => Layout::OneFace,
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load(path: &Path) -> Result<Instance<i64>> {
    parse_instance(&read(path)?).with_context(|| format!("{}", path.display()))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn gen_grid_cmd(a: GenGridArgs) -> Result<()> {
    let net: Network = gen_grid(&GridSpec {
        k: a.k,
        capacity: if a.max_cap == 0 {
            CapacityDist::Unit
        } else {
            CapacityDist::Uniform { lo: 0, hi: a.max_cap }
        },
        layout: a.layout.into(),
        sources: a.sources,
        sinks: a.sinks,
        seed: a.seed,
    });
    write_out(a.output.as_deref(), &emit_instance(&Instance::new(net)))
}

fn gen_planar_cmd(a: GenPlanarArgs) -> Result<()> {
    if !(0.0..1.0).contains(&a.sparsity) {
        bail!("sparsity must lie in [0, 1)");
    }
    let net: Network = gen_random_planar(&PlanarSpec {
        n: a.n,
        max_capacity: a.max_cap,
        sources: a.sources,
        sinks: a.sinks,
        sparsity: a.sparsity,
        seed: a.seed,
    });
    write_out(a.output.as_deref(), &emit_instance(&Instance::new(net)))
}

fn print_stats(stats: &SolveStats) {
    for c in &stats.calls {
        eprintln!(
            "{:indent$}depth {} {:?}: n={} |S|={} |T|={} separator={:?} components={:?}",
            "",
            c.depth,
            c.kind,
            c.vertices,
            c.sources,
            c.sinks,
            c.separator_len,
            c.components,
            indent = 2 * c.depth
        );
    }
    eprintln!(
        "side-to-side runs {}, same-face fallbacks {}, stage fallbacks {}",
        stats.side_to_side_runs, stats.same_face_fallbacks, stats.stage_fallbacks
    );
}

fn side_to_side(net: &Network, a: &SolveArgs) -> Result<(Flow, i64)> {
    let tri = net.graph.triangulate();
    let mut caps = net.capacity.clone();
    caps.extend_zero(tri.graph.edge_count() - net.graph.edge_count());
    let (cycle, side) = match &a.separator {
        Some(p) => parse_separator(&read(p)?, tri.graph.vertex_count()).with_context(|| format!("{}", p.display()))?,
        None => {
            let sep = separator_for_terminals(&tri.graph, &net.sources, &net.sinks)?;
            (sep.cycle, sep.side)
        }
    };
    let tri_net = FlowNetwork::new(tri.graph, caps, net.sources.clone(), net.sinks.clone())?;
    let inst = SideToSideInstance::new(tri_net, cycle, side)?;
    let res = inst.run(a.trace)?;
    if a.trace {
        for s in &res.trace.steps {
            eprintln!(
                "p_{} = {}: excess {} forwarded {} returned {}{}",
                s.index,
                s.vertex,
                s.initial_excess,
                s.forwarded,
                s.returned,
                if s.fallback { " (general engine)" } else { "" }
            );
        }
        verify::invariant_probe(&res.trace)?;
        eprintln!("invariant held after all {} steps", res.trace.steps.len());
    }
    Ok((res.flow.truncated(net.graph.edge_count()), res.value))
}

fn solve_cmd(a: SolveArgs) -> Result<()> {
    let mut net = load(&a.instance)?.network;
    if let Some(seed) = a.seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        net.sources.shuffle(&mut rng);
        net.sinks.shuffle(&mut rng);
    }
    let start = Instant::now();
    let (flow, value) = match (a.mode, a.engine) {
        (ModeArg::SideToSide, EngineArg::Auto) => side_to_side(&net, &a)?,
        (ModeArg::SideToSide, _) => bail!("side-to-side mode uses its own engines; drop --engine"),
        (ModeArg::Full, EngineArg::Auto) => {
            let sol = Solver::new(a.thresholds.config(a.trace)).solve(&net)?;
            if a.trace {
                print_stats(&sol.stats);
            }
            (sol.flow, sol.value)
        }
        (ModeArg::Full, engine) => {
            let engine: &dyn MaxFlowEngine<i64> = match engine {
                EngineArg::Oracle => &OracleEngine,
                EngineArg::Hassin => &HassinEngine,
                _ => &ApexEngine,
            };
            let r = engine.max_flow(&net.graph, &net.capacity, &net.sources, &net.sinks)?;
            (r.flow, r.value)
        }
    };
    let elapsed = start.elapsed();
    verify::check_flow(&net, &flow)?;
    verify::check_max(&net, &flow)?;
    let cut = extract_cut(&net.graph, &net.capacity, &flow, &net.sources, &net.sinks)?;
    verify::check_cut(&net, &flow, &cut.darts)?;
    println!("value {value}");
    println!(
        "certificate: feasible, maximum, cut of {} darts with capacity {}",
        cut.darts.len(),
        cut.capacity(&net.capacity)
    );
    println!("time {:.3}s", elapsed.as_secs_f64());
    if let Some(p) = &a.output {
        fs::write(p, emit_flow(&flow, value)).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

/// Returns whether the flow is a maximum flow.
fn verify_cmd(instance: &Path, flow: &Path) -> Result<bool> {
    let net = load(instance)?.network;
    let f: Flow = parse_flow(&read(flow)?, net.graph.edge_count()).with_context(|| format!("{}", flow.display()))?;
    let result = verify::check_flow(&net, &f).and_then(|_| verify::check_max(&net, &f));
    match result {
        Ok(()) => {
            println!("ok: maximum flow of value {}", verify::flow_value(&net, &f));
            Ok(true)
        }
        Err(v) => {
            println!("rejected: {v}");
            Ok(false)
        }
    }
}

fn separate_cmd(a: SeparateArgs) -> Result<()> {
    let net = load(&a.instance)?.network;
    let g = net.graph.triangulate().graph;
    let n = g.vertex_count();
    let sep = if a.terminals {
        separator_for_terminals(&g, &net.sources, &net.sinks)?
    } else {
        find_cycle_separator(&g, &vec![1.0 / n as f64; n])?
    };
    let count = |s: Side| sep.side.iter().filter(|&&x| x == s).count();
    println!("P {}", sep.cycle.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "));
    println!(
        "weights inside {:.4} outside {:.4} (vertices inside {} outside {} on cycle {})",
        sep.inside_weight,
        sep.outside_weight,
        count(Side::Inside),
        count(Side::Outside),
        count(Side::Cycle)
    );
    println!("|P|/sqrt(n) {:.3} (|P| = {}, n = {})", sep.len() as f64 / (n as f64).sqrt(), sep.len(), n);
    if let Some(p) = &a.output {
        fs::write(p, emit_separator(&sep.cycle, &sep.side)).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn segment_cmd(a: SegmentArgs) -> Result<()> {
    let bytes = fs::read(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let img = parse_pgm(&bytes).with_context(|| format!("{}", a.input.display()))?;
    let params = SegmentParams {
        foreground: a.foreground,
        background: a.background,
        smoothness: a.smoothness,
    };
    let seg = segment(&img, &params, &Solver::new(a.thresholds.config(false)))?;
    fs::write(&a.output, write_pgm(&seg.mask)).with_context(|| format!("writing {}", a.output.display()))?;
    let fg = seg.mask.pixels.iter().filter(|&&p| p > 0).count();
    println!(
        "cut {} seeds {}/{} foreground pixels {fg} of {}",
        seg.cut_value,
        seg.foreground_seeds,
        seg.background_seeds,
        seg.mask.pixels.len()
    );
    Ok(())
}

fn bench_cmd(a: BenchArgs) -> Result<()> {
    let jobs: Vec<(usize, usize)> = a
        .sizes
        .iter()
        .flat_map(|&k| (0..a.reps).map(move |r| (k, r)))
        .collect();
    let rows = Mutex::new(vec![None; jobs.len()]);
    let next = AtomicUsize::new(0);
    let config = a.thresholds.config(false);
    std::thread::scope(|scope| {
        for _ in 0..a.threads.max(1) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(k, rep)) = jobs.get(i) else { break };
                let net: Network = gen_grid(&GridSpec {
                    k,
                    capacity: CapacityDist::Uniform { lo: 1, hi: 20 },
                    layout: a.layout.into(),
                    sources: a.sources,
                    sinks: a.sinks,
                    seed: a.seed.wrapping_add(rep as u64),
                });
                let start = Instant::now();
                let row = Solver::new(config.clone()).solve(&net).map(|sol| {
                    let sizes: Vec<String> = sol.stats.separator_sizes().iter().map(|s| s.to_string()).collect();
                    format!(
                        "{},{},{},{:.6},{},{}",
                        net.graph.vertex_count(),
                        net.sources.len(),
                        net.sinks.len(),
                        start.elapsed().as_secs_f64(),
                        sol.stats.max_depth(),
                        sizes.join(";")
                    )
                });
                rows.lock().unwrap()[i] = Some(row);
            });
        }
    });
    println!("n,sources,sinks,seconds,depth,separator_sizes");
    for row in rows.into_inner().unwrap() {
        println!("{}", row.ok_or_else(|| anyhow!("job did not run"))??);
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::GenGrid(a) => gen_grid_cmd(a)?,
        Command::GenPlanar(a) => gen_planar_cmd(a)?,
        Command::Solve(a) => solve_cmd(a)?,
        Command::Verify { instance, flow } => {
            if !verify_cmd(&instance, &flow)? {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Separate(a) => separate_cmd(a)?,
        Command::Segment(a) => segment_cmd(a)?,
        Command::Bench(a) => bench_cmd(a)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
