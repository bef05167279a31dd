//! Subcommand implementations.
//!
//! Every command resolves its settings in the same order: explicit flag,
//! then manifest entry, then built-in default. Each returns the process
//! exit code on success and a library error otherwise; `main` maps the
//! error onto an exit code.

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use covertime::budget::{probe, StratumReport};
use covertime::csv::{budget_csv, curve_csv, stats_csv, stopping_csv};
use covertime::estimator::{
    estimate_curve, estimate_multi_start, resolve_starts, tau_grid, StartPolicy,
};
use covertime::generate::GraphKind;
use covertime::graph::load_edge_list;
use covertime::oracle::oracle_pct;
use covertime::stats::{degree_histogram, summary};
use covertime::stopping::{expected_reward, optimal_cutoff, RewardModel, Weight};
use covertime::svg::{line_chart, Series};
use covertime::{Error, Graph, Result, StrategySpec};

use crate::config::ConfigMap;
use crate::{BudgetArgs, CompareArgs, OracleArgs, SourceArgs, StatsArgs, StoppingArgs, WeightKind};

/// Seed used when neither a flag, a manifest, nor COVERTIME_SEED sets one.
const DEFAULT_SEED: u64 = 42;

/// Start sample size when the graph is too large to enumerate every start.
const DEFAULT_START_SAMPLE: usize = 32;

/// Largest graph whose starts are enumerated exhaustively by default.
const EXHAUSTIVE_START_LIMIT: usize = 256;

/// Step cap for oracle cross-checks. Oracle-sized graphs cover in tens of
/// steps; a trial is only truncated here if something is deeply wrong, and
/// a truncated mean would bias the comparison itself.
const ORACLE_STEP_CAP: u64 = 10_000_000;

/// Header of the max-over-starts companion file written by `compare`.
const PCT_MAX_HEADER: &str = "strategy,tau,start,rho,c_tau";

// ---------------------------------------------------------------------------
// Shared resolution helpers
// ---------------------------------------------------------------------------

fn load_config(path: Option<&Path>) -> Result<ConfigMap> {
    match path {
        Some(p) => ConfigMap::load(p),
        None => Ok(ConfigMap::empty()),
    }
}

fn resolve_seed(flag: Option<u64>, cfg: &ConfigMap) -> Result<u64> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    if let Some(seed) = cfg.get_parsed::<u64>("seed")? {
        return Ok(seed);
    }
    match std::env::var("COVERTIME_SEED") {
        Ok(text) => text.trim().parse().map_err(|_| Error::InvalidParameter {
            name: "COVERTIME_SEED",
            value: text,
            expected: "an unsigned 64-bit integer",
        }),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn resolve_out(flag: Option<PathBuf>, cfg: &ConfigMap) -> PathBuf {
    flag.or_else(|| cfg.get("out").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

/// A loaded graph plus the label used in CSV rows and chart titles.
struct Source {
    graph: Graph,
    label: String,
}

fn resolve_source(args: &SourceArgs, cfg: &ConfigMap) -> Result<Source> {
    // Flags override the manifest as a pair: a --graph flag also suppresses
    // a gen= manifest entry, and vice versa. Mixing one of each would
    // silently prefer whichever this code checked first.
    let (file, gen) = if args.graph.is_some() || args.gen.is_some() {
        (args.graph.clone(), args.gen.clone())
    } else {
        (cfg.get("graph").map(PathBuf::from), cfg.get("gen").map(String::from))
    };
    match (file, gen) {
        (Some(_), Some(_)) => Err(Error::InvalidParameter {
            name: "graph source",
            value: "both graph and gen".to_owned(),
            expected: "exactly one of the two",
        }),
        (None, None) => Err(Error::InvalidParameter {
            name: "graph source",
            value: "missing".to_owned(),
            expected: "--graph FILE or --gen SPEC",
        }),
        (Some(path), None) => {
            let file = File::open(&path)?;
            let (graph, report) = load_edge_list(BufReader::new(file))?;
            if !report.clean() {
                eprintln!(
                    "warning: cleaned {}: dropped {} self-loops, {} duplicate edges, \
                     {} nodes and {} edges outside the largest component",
                    path.display(),
                    report.self_loops,
                    report.duplicate_edges,
                    report.dropped_nodes,
                    report.dropped_edges,
                );
            }
            let label = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string());
            Ok(Source { graph, label })
        }
        (None, Some(spec)) => {
            let kind = GraphKind::parse(&spec)?;
            let (graph, note) = kind.build()?;
            if let Some(note) = note {
                eprintln!("note: {note}");
            }
            Ok(Source { graph, label: kind.to_string() })
        }
    }
}

fn parse_start_policy(text: &str) -> Result<StartPolicy> {
    let invalid = |value: &str| Error::InvalidParameter {
        name: "starts",
        value: value.to_owned(),
        expected: "all | sample:K | comma-separated node ids",
    };
    let text = text.trim();
    if text == "all" {
        return Ok(StartPolicy::All);
    }
    if let Some(k) = text.strip_prefix("sample:") {
        return Ok(StartPolicy::Sample(k.trim().parse().map_err(|_| invalid(text))?));
    }
    let nodes = text
        .split(',')
        .map(|s| s.trim().parse::<u32>().map_err(|_| invalid(text)))
        .collect::<Result<Vec<_>>>()?;
    if nodes.is_empty() {
        return Err(invalid(text));
    }
    Ok(StartPolicy::Fixed(nodes))
}

/// Policy when no --starts is given: enumerate every start on small
/// graphs, sample a fixed number of them on large ones.
fn default_start_policy(n: usize) -> StartPolicy {
    if n <= EXHAUSTIVE_START_LIMIT {
        StartPolicy::All
    } else {
        StartPolicy::Sample(DEFAULT_START_SAMPLE)
    }
}

fn resolve_start_policy(
    flag: Option<String>,
    cfg: &ConfigMap,
    n: usize,
) -> Result<StartPolicy> {
    match flag.or_else(|| cfg.get("starts").map(String::from)) {
        Some(text) => parse_start_policy(&text),
        None => Ok(default_start_policy(n)),
    }
}

/// Parses a comma-separated strategy list; the bare names `rwc` and `md`
/// pick up the configured draw count and budget.
fn parse_strategies(list: &str, budget: u32, rwc_d: u32) -> Result<Vec<StrategySpec>> {
    let specs = list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| match item {
            "md" => StrategySpec::md(budget),
            "rwc" => StrategySpec::rwc(rwc_d),
            other => StrategySpec::parse(other),
        })
        .collect::<Result<Vec<_>>>()?;
    if specs.is_empty() {
        return Err(Error::InvalidParameter {
            name: "strategies",
            value: list.to_owned(),
            expected: "at least one strategy",
        });
    }
    Ok(specs)
}

/// Runs `f` on a dedicated pool of `threads` workers, or on the default
/// global pool when no count is given. One worker makes every reduction
/// order, and therefore every output byte, reproducible.
fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(count) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(count)
                .build()
                .map_err(|e| Error::InvalidParameter {
                    name: "threads",
                    value: format!("{count} ({e})"),
                    expected: "a creatable worker pool",
                })?;
            Ok(pool.install(f))
        }
    }
}

fn write_output(dir: &Path, name: &str, content: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, content)?;
    Ok(path)
}

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

pub fn compare(args: CompareArgs) -> Result<ExitCode> {
    let cfg = load_config(args.source.config.as_deref())?;
    let seed = resolve_seed(args.seed, &cfg)?;
    let trials = args.trials.or(cfg.get_parsed("trials")?).unwrap_or(10);
    let tau_min = args.tau_min.or(cfg.get_parsed("tau-min")?).unwrap_or(0.01);
    let tau_max = args.tau_max.or(cfg.get_parsed("tau-max")?).unwrap_or(0.30);
    let tau_step = args.tau_step.or(cfg.get_parsed("tau-step")?).unwrap_or(0.01);
    let budget = args.budget.or(cfg.get_parsed("budget")?).unwrap_or(5);
    let rwc_d = args.rwc_d.or(cfg.get_parsed("rwc-d")?).unwrap_or(3);
    let strategy_list = args
        .strategies
        .or_else(|| cfg.get("strategies").map(String::from))
        .unwrap_or_else(|| "srw,ep,ad,rwc,md".to_owned());
    let threads = args.threads.or(cfg.get_parsed("threads")?);
    let out = resolve_out(args.out, &cfg);

    let taus = tau_grid(tau_min, tau_max, tau_step)?;
    let strategies = parse_strategies(&strategy_list, budget, rwc_d)?;
    let source = resolve_source(&args.source, &cfg)?;
    let g = &source.graph;
    let policy = resolve_start_policy(args.starts, &cfg, g.n())?;
    let starts = resolve_starts(g, &policy, seed)?;

    eprintln!(
        "{}: n={} m={}, {} starts x {} trials, {} coverage fractions, seed {}",
        source.label,
        g.n(),
        g.m(),
        starts.len(),
        trials,
        taus.len(),
        seed,
    );

    let mut curves = Vec::with_capacity(strategies.len());
    let mut max_rows = String::from(PCT_MAX_HEADER);
    max_rows.push('\n');
    for spec in &strategies {
        if spec.is_extension() {
            eprintln!(
                "note: {spec} is an exploration extension; it pays degree \
                 inspections the baseline comparison does not count"
            );
        }
        let begun = Instant::now();
        let est = with_threads(threads, || {
            estimate_multi_start(g, spec, &starts, &taus, trials, None, seed)
        })??;
        let truncated: u64 = est.pooled.iter().map(|p| p.truncated).sum();
        let attempted: u64 = est.pooled.iter().map(|p| p.trials).sum();
        eprintln!("{spec}: done in {:.1}s", begun.elapsed().as_secs_f64());
        if truncated > 0 {
            eprintln!(
                "warning: {spec}: {truncated} of {attempted} trials hit the \
                 step cap; their coverage points exclude them"
            );
        }
        for (ti, tau) in taus.iter().enumerate() {
            let (start, point) = est.worst_start(ti);
            max_rows.push_str(&format!(
                "{spec},{tau},{start},{},{}\n",
                point.rho, point.c_tau
            ));
        }
        curves.push((spec.clone(), est.pooled));
    }

    let series: Vec<Series> = curves
        .iter()
        .map(|(spec, points)| Series {
            label: spec.to_string(),
            points: points.iter().map(|p| (p.tau, p.c_tau)).collect(),
        })
        .collect();
    let title = format!("partial cover time on {}", source.label);
    let chart = line_chart(&title, "tau", "C(tau)", &series);

    let curve_path = write_output(&out, "curve.csv", &curve_csv(g, &curves))?;
    let max_path = write_output(&out, "pct_max.csv", &max_rows)?;
    let svg_path = write_output(&out, "curve.svg", &chart)?;
    println!(
        "wrote {}, {}, {}",
        curve_path.display(),
        max_path.display(),
        svg_path.display()
    );
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// budget
// ---------------------------------------------------------------------------

pub fn budget(args: BudgetArgs) -> Result<ExitCode> {
    let cfg = load_config(args.source.config.as_deref())?;
    let seed = resolve_seed(args.seed, &cfg)?;
    let trials = args.trials.or(cfg.get_parsed("trials")?).unwrap_or(10);
    let grid_text = args
        .budgets
        .or_else(|| cfg.get("budgets").map(String::from))
        .unwrap_or_else(|| "1,2,3,4,5,6,7,8,9,10".to_owned());
    let out = resolve_out(args.out, &cfg);

    let budgets = grid_text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<u32>().map_err(|_| Error::InvalidParameter {
                name: "budgets",
                value: grid_text.clone(),
                expected: "comma-separated positive integers",
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if budgets.is_empty() {
        return Err(Error::InvalidParameter {
            name: "budgets",
            value: grid_text,
            expected: "at least one budget",
        });
    }

    let source = resolve_source(&args.source, &cfg)?;
    let g = &source.graph;
    let policy = resolve_start_policy(args.starts, &cfg, g.n())?;
    let starts = resolve_starts(g, &policy, seed)?;
    eprintln!(
        "{}: n={} m={}, {} starts x {} full-cover walks per budget, seed {}",
        source.label,
        g.n(),
        g.m(),
        starts.len(),
        trials,
        seed,
    );

    let mut grid = Vec::with_capacity(budgets.len());
    for &b in &budgets {
        let reports = probe(g, b, &starts, trials, seed)?;
        let samples: u64 = reports.iter().map(|r| r.samples).sum();
        let hits: u64 = reports.iter().map(|r| r.hits).sum();
        let p = if samples == 0 { 0.0 } else { hits as f64 / samples as f64 };
        println!("B={b}: p={p:.4} over {samples} decision points");
        print_strata(&reports);
        grid.push((b, reports));
    }

    let series = [Series {
        label: "sampled minimum hits true minimum".to_owned(),
        points: grid
            .iter()
            .map(|(b, reports)| {
                let samples: u64 = reports.iter().map(|r| r.samples).sum();
                let hits: u64 = reports.iter().map(|r| r.hits).sum();
                let p = if samples == 0 { 0.0 } else { hits as f64 / samples as f64 };
                (f64::from(*b), p)
            })
            .collect(),
    }];
    let title = format!("budget success probability on {}", source.label);
    let chart = line_chart(&title, "B", "p", &series);

    let csv_path = write_output(&out, "budget.csv", &budget_csv(&source.label, &grid))?;
    let svg_path = write_output(&out, "budget.svg", &chart)?;
    println!("wrote {}, {}", csv_path.display(), svg_path.display());
    Ok(ExitCode::SUCCESS)
}

/// Prints per-stratum detail, elided to the ten best-sampled strata when
/// a graph produces more than a screenful.
fn print_strata(reports: &[StratumReport]) {
    let mut shown: Vec<&StratumReport> = reports.iter().collect();
    let elided = reports.len().saturating_sub(10);
    if reports.len() > 12 {
        shown.sort_by_key(|r| std::cmp::Reverse(r.samples));
        shown.truncate(10);
        shown.sort_by_key(|r| (r.l_size, r.multiplicity));
    }
    for r in shown {
        println!(
            "  l={} mult={}: closed form {:.4}, observed {:.4} over {} samples",
            r.l_size,
            r.multiplicity,
            r.closed_form,
            r.empirical(),
            r.samples,
        );
    }
    if reports.len() > 12 {
        println!("  ({elided} thinner strata not shown)");
    }
}

// ---------------------------------------------------------------------------
// stats
// ---------------------------------------------------------------------------

pub fn stats(args: StatsArgs) -> Result<ExitCode> {
    let cfg = load_config(args.source.config.as_deref())?;
    let out = resolve_out(args.out, &cfg);
    let source = resolve_source(&args.source, &cfg)?;
    let g = &source.graph;

    let s = summary(g);
    println!(
        "{}: n={} m={} degree[min/mean/max]={}/{:.2}/{} clustering={:.4} diameter={}{}",
        source.label,
        s.n,
        s.m,
        s.min_degree,
        s.mean_degree,
        s.max_degree,
        s.clustering,
        s.diameter.value,
        if s.diameter.exact { "" } else { " (lower bound)" },
    );

    let mut histogram = String::from("degree,count\n");
    for (degree, count) in degree_histogram(g) {
        histogram.push_str(&format!("{degree},{count}\n"));
    }

    let stats_path = write_output(&out, "stats.csv", &stats_csv(&s))?;
    let hist_path = write_output(&out, "histogram.csv", &histogram)?;
    println!("wrote {}, {}", stats_path.display(), hist_path.display());
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// oracle
// ---------------------------------------------------------------------------

pub fn oracle(args: OracleArgs) -> Result<ExitCode> {
    let cfg = load_config(args.source.config.as_deref())?;
    let seed = resolve_seed(args.seed, &cfg)?;
    let spec_text = args
        .strategy
        .or_else(|| cfg.get("strategy").map(String::from))
        .unwrap_or_else(|| "srw".to_owned());
    let tau = args.tau.or(cfg.get_parsed("tau")?).unwrap_or(1.0);
    let start = args.start.or(cfg.get_parsed("start")?).unwrap_or(0);
    let trials = args.trials.or(cfg.get_parsed("trials")?).unwrap_or(10_000);
    let threads = args.threads.or(cfg.get_parsed("threads")?);

    let spec = StrategySpec::parse(&spec_text)?;
    let source = resolve_source(&args.source, &cfg)?;
    let g = &source.graph;

    let exact = oracle_pct(g, &spec, tau, start)?;
    let points = with_threads(threads, || {
        estimate_curve(g, &spec, start, &[tau], trials, Some(ORACLE_STEP_CAP), seed)
    })??;
    let p = &points[0];

    println!("{spec} on {}, tau={tau}, start={start}", source.label);
    println!("exact expectation: {exact}");
    println!(
        "monte-carlo mean:  {} ({} trials, stddev {})",
        p.rho,
        p.completed(),
        p.stddev
    );
    if p.truncated > 0 {
        eprintln!(
            "warning: {} trials hit the {ORACLE_STEP_CAP}-step cap; the \
             comparison is biased",
            p.truncated
        );
    }

    let se = p.standard_error();
    let consistent = if se == 0.0 {
        // deterministic estimate: demand an exact match
        println!("absolute gap:      {:e}", (p.rho - exact).abs());
        (p.rho - exact).abs() <= 1e-9
    } else if se.is_finite() {
        let z = (p.rho - exact).abs() / se;
        println!("z-score:           {z:.3} (threshold 3)");
        z <= 3.0
    } else {
        false
    };

    if consistent && p.truncated == 0 {
        println!("verdict: consistent");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("verdict: mismatch");
        Ok(ExitCode::from(3))
    }
}

// ---------------------------------------------------------------------------
// stopping
// ---------------------------------------------------------------------------

pub fn stopping(args: StoppingArgs) -> Result<ExitCode> {
    let cfg = load_config(args.config.as_deref())?;
    let weight_kind = match args.weight {
        Some(kind) => kind,
        None => match cfg.get("weight") {
            None => WeightKind::Constant,
            Some("constant") => WeightKind::Constant,
            Some("exp") => WeightKind::Exp,
            Some(other) => {
                return Err(Error::InvalidParameter {
                    name: "weight",
                    value: other.to_owned(),
                    expected: "constant | exp",
                })
            }
        },
    };
    let theta = args.theta.or(cfg.get_parsed("theta")?);
    let n = args.n.or(cfg.get_parsed("n")?).unwrap_or(1000);
    let out = resolve_out(args.out, &cfg);

    let weight = match weight_kind {
        WeightKind::Constant => {
            if let Some(theta) = theta {
                return Err(Error::InvalidParameter {
                    name: "theta",
                    value: theta.to_string(),
                    expected: "no value with the constant weight",
                });
            }
            Weight::constant(1.0)?
        }
        WeightKind::Exp => {
            let theta = theta.ok_or(Error::InvalidParameter {
                name: "theta",
                value: "missing".to_owned(),
                expected: "a positive decay scale (required with --weight exp)",
            })?;
            Weight::exponential(theta)?
        }
    };
    let model = RewardModel::new(weight, n)?;

    let rows = (2..=n)
        .map(|r| Ok((r, expected_reward(&model, r)?)))
        .collect::<Result<Vec<_>>>()?;
    let cutoff = optimal_cutoff(&model);

    match weight_kind {
        WeightKind::Constant => {
            println!("cutoff rule over N={n} candidates, constant weight");
            println!("r* = {}, expected reward {}", cutoff.r_star, cutoff.reward);
            println!(
                "r*/N = {:.4}; 1/e = {:.4}",
                f64::from(cutoff.r_star) / f64::from(n),
                (-1.0f64).exp(),
            );
        }
        WeightKind::Exp => {
            println!(
                "cutoff rule over N={n} candidates, exponential weight \
                 (theta = {})",
                theta.expect("checked above"),
            );
            println!("r* = {}, expected reward {}", cutoff.r_star, cutoff.reward);
            match cutoff.newton {
                Some(newton) if newton.converged => println!(
                    "newton refinement: root {:.3} in {} iterations",
                    newton.root, newton.iterations,
                ),
                _ => println!("newton did not converge; the discrete scan stands"),
            }
        }
    }

    let path = write_output(&out, "stopping.csv", &stopping_csv(&rows))?;
    println!("wrote {}", path.display());
    Ok(ExitCode::SUCCESS)
}
