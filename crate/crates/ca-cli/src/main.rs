//! `ca`: covering array toolkit. Verify strength, canonicalize, generate
//! complete libraries of distinct arrays, enumerate block-size multisets,
//! run the juxtaposition existence search, and query row-count bounds.
//!
//! Exit codes are a stable contract: 0 success (including a completed
//! search, whatever its verdict), 1 verification failure, 2 parse or read
//! failure, 3 budget exhausted, 4 missing input libraries.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use ca_core::{
    can_bound, canonical_minimum, construct, find_uncovered, generate_distinct, valid_multisets,
    Budget, CaError, CaLibrary, GenOptions, Params, RunControl, RunManifest, SearchOptions,
    SearchStats, Verdict,
};

#[derive(Parser)]
#[command(
    name = "ca",
    version,
    about = "covering array construction and existence search"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct ParamArgs {
    /// Row count N
    #[arg(long)]
    n: usize,
    /// Strength t
    #[arg(long)]
    t: usize,
    /// Column count k
    #[arg(long)]
    k: usize,
    /// Order (alphabet size) v
    #[arg(long)]
    v: usize,
}

#[derive(Args, Clone, Copy)]
struct RunArgs {
    /// Worker thread count
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
    /// Wall-clock budget in seconds
    #[arg(long, value_name = "SECS", value_parser = clap::value_parser!(u64).range(1..))]
    time_budget: Option<u64>,
    /// Search node budget
    #[arg(long, value_name = "COUNT", value_parser = clap::value_parser!(u64).range(1..))]
    node_budget: Option<u64>,
    /// Progress line interval on the diagnostic stream, in seconds
    #[arg(long, value_name = "SECS")]
    progress: Option<u64>,
}

impl RunArgs {
    fn budget(&self) -> Budget {
        Budget {
            max_nodes: self.node_budget,
            max_wall: self.time_budget.map(Duration::from_secs),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check coverage of an array file at a given strength
    Verify {
        file: PathBuf,
        /// Strength to check; defaults to the strength claimed in the file
        #[arg(long)]
        strength: Option<usize>,
    },
    /// Rewrite an array as the minimum of its isomorphism class
    Canon {
        file: PathBuf,
        /// Output path; the canonical array goes to standard output when absent
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the covering array number, or the best lower bound, for (t, k, v)
    Bounds {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        v: usize,
    },
    /// List valid block-size multisets: v nondecreasing parts summing to N,
    /// each at least the bound for (t, k, v)
    Multisets {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Generate the complete library of distinct CA(N; t, k, v)
    Generate {
        #[command(flatten)]
        params: ParamArgs,
        /// Library archive path; defaults to ca_N_t_k_v.calib
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Decide existence of CA(N; t, k, v) by juxtaposing strength-(t-1)
    /// libraries from --libs
    Search {
        #[command(flatten)]
        params: ParamArgs,
        /// Directory holding `ca_<rows>_<t-1>_<k-1>_<v>.calib` archives
        #[arg(long)]
        libs: PathBuf,
        /// Output directory for result arrays and the manifest
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run even when some libraries are missing; nonexistence then
        /// degrades to not-found-partial
        #[arg(long)]
        allow_partial: bool,
        /// Re-check that library members are minima of their classes
        #[arg(long)]
        validate: bool,
        #[command(flatten)]
        run: RunArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(match err {
                CaError::BudgetExhausted { .. } => 3u8,
                CaError::MissingLibraries { .. } => 4u8,
                _ => 2u8,
            })
        }
    }
}

fn tool_version() -> String {
    format!("ca {}", env!("CARGO_PKG_VERSION"))
}

fn library_file_name(n: usize, t: usize, k: usize, v: usize) -> String {
    format!("ca_{n}_{t}_{k}_{v}.calib")
}

fn spawn_progress(control: &Arc<RunControl>, every: Option<u64>) {
    let Some(secs) = every else { return };
    let secs = secs.max(1);
    let weak = Arc::downgrade(control);
    std::thread::spawn(move || loop {
        std::thread::sleep(Duration::from_secs(secs));
        let Some(c) = weak.upgrade() else { return };
        eprintln!(
            "progress: {} nodes, {} results, {} s",
            c.nodes(),
            c.results(),
            c.elapsed().as_secs()
        );
    });
}

fn dispatch(command: Command) -> Result<u8, CaError> {
    match command {
        Command::Verify { file, strength } => cmd_verify(&file, strength),
        Command::Canon { file, out } => cmd_canon(&file, out.as_deref()),
        Command::Bounds { t, k, v } => {
            let b = can_bound(t, k, v);
            let kind = if b.is_exact() { "exact" } else { "lower" };
            println!("{kind} {}", b.value);
            Ok(0)
        }
        Command::Multisets { params } => {
            for ms in valid_multisets(params.n, params.t, params.k, params.v) {
                println!("{ms}");
            }
            Ok(0)
        }
        Command::Generate { params, out, run } => cmd_generate(params, out, run),
        Command::Search {
            params,
            libs,
            out,
            allow_partial,
            validate,
            run,
        } => cmd_search(params, &libs, out, allow_partial, validate, run),
    }
}

fn cmd_verify(file: &Path, strength: Option<usize>) -> Result<u8, CaError> {
    let array = ca_core::read_ca(file)?;
    let s = strength.unwrap_or_else(|| array.strength());
    match find_uncovered(&array, s)? {
        None => {
            println!("strength {s}: PASS");
            Ok(0)
        }
        Some(witness) => {
            let columns: Vec<String> = witness.columns.iter().map(|c| c.to_string()).collect();
            let tuple: Vec<String> = witness.tuple.iter().map(|x| x.to_string()).collect();
            println!(
                "strength {s}: FAIL columns {} tuple {}",
                columns.join(" "),
                tuple.join(" ")
            );
            Ok(1)
        }
    }
}

fn cmd_canon(file: &Path, out: Option<&Path>) -> Result<u8, CaError> {
    let array = ca_core::read_ca(file)?;
    let minimum = canonical_minimum(&array);
    let already = minimum.array() == &array;
    let status = if already {
        "already canonical"
    } else {
        "canonicalized"
    };
    let text = ca_core::ca_to_string(minimum.array());
    match out {
        Some(path) => {
            std::fs::write(path, text)?;
            println!("{status}");
        }
        None => {
            print!("{text}");
            eprintln!("{status}");
        }
    }
    Ok(0)
}

fn cmd_generate(params: ParamArgs, out: Option<PathBuf>, run: RunArgs) -> Result<u8, CaError> {
    let p = Params::new(params.n, params.t, params.k, params.v)?;
    let out = out.unwrap_or_else(|| {
        PathBuf::from(library_file_name(params.n, params.t, params.k, params.v))
    });
    let manifest_path = manifest_sibling(&out);
    let control = RunControl::new(run.budget());
    spawn_progress(&control, run.progress);
    let options = GenOptions {
        workers: run.workers as usize,
        budget: run.budget(),
        control: Some(control.clone()),
        ..GenOptions::default()
    };

    let mut manifest = RunManifest {
        tool_version: tool_version(),
        command: "generate".into(),
        rows: params.n,
        strength: params.t,
        columns: params.k,
        order: params.v,
        libraries: Vec::new(),
        multisets: Vec::new(),
        results: Vec::new(),
        stats: SearchStats::default(),
        verdict: Verdict::BudgetExhausted,
    };

    match generate_distinct(p, &options) {
        Ok(outcome) => {
            let text = ca_core::library_to_string(&outcome.library);
            std::fs::write(&out, &text)?;
            manifest.stats.nodes = outcome.stats.nodes;
            manifest.stats.wall = outcome.stats.elapsed;
            manifest.libraries.push((
                params.n,
                out.display().to_string(),
                ca_core::fingerprint(text.as_bytes()),
            ));
            manifest.verdict = if outcome.library.is_empty() {
                Verdict::Nonexistent
            } else {
                Verdict::Exists
            };
            ca_core::write_manifest(&manifest, &manifest_path)?;
            println!("{}", outcome.library.len());
            Ok(0)
        }
        Err(CaError::BudgetExhausted {
            nodes,
            results,
            elapsed_ms,
        }) => {
            // no archive is written: a truncated library must never be
            // mistaken for a complete one
            manifest.stats.nodes = nodes;
            manifest.stats.wall = Duration::from_millis(elapsed_ms);
            manifest.verdict = Verdict::BudgetExhausted;
            ca_core::write_manifest(&manifest, &manifest_path)?;
            Err(CaError::BudgetExhausted {
                nodes,
                results,
                elapsed_ms,
            })
        }
        Err(other) => Err(other),
    }
}

fn manifest_sibling(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest");
    out.with_file_name(name)
}

fn cmd_search(
    params: ParamArgs,
    libs: &Path,
    out: Option<PathBuf>,
    allow_partial: bool,
    validate: bool,
    run: RunArgs,
) -> Result<u8, CaError> {
    let (n, t, k, v) = (params.n, params.t, params.k, params.v);
    if t < 2 || k < 2 {
        return Err(CaError::InvalidArgument(
            "search target needs t >= 2 and k >= 2".into(),
        ));
    }
    let block_t = t - 1;
    let block_k = k - 1;
    let multisets = valid_multisets(n, block_t, block_k, v);

    let mut required: Vec<usize> = multisets
        .iter()
        .flat_map(|ms| ms.sizes().iter().copied())
        .collect();
    required.sort_unstable();
    required.dedup();

    let mut libraries = BTreeMap::new();
    let mut library_records = Vec::new();
    let mut missing = Vec::new();
    for &size in &required {
        let path = libs.join(library_file_name(size, block_t, block_k, v));
        if path.is_file() {
            let text = std::fs::read_to_string(&path)?;
            let lib = ca_core::parse_library(&text, validate)?;
            library_records.push((
                size,
                path.display().to_string(),
                ca_core::fingerprint(text.as_bytes()),
            ));
            libraries.insert(size, lib);
        } else {
            missing.push(size);
        }
    }
    let partial = !missing.is_empty();
    if partial && !allow_partial {
        return Err(CaError::MissingLibraries { missing });
    }
    // an absent archive stands in as an empty library; the verdict is
    // downgraded below so this can never masquerade as a nonexistence proof
    for &size in &missing {
        libraries.insert(
            size,
            CaLibrary::new(Params::new(size, block_t, block_k, v)?, Vec::new())?,
        );
    }

    let out_dir = out.unwrap_or_else(|| PathBuf::from(format!("ca_{n}_{t}_{k}_{v}_run")));
    std::fs::create_dir_all(&out_dir)?;
    let control = RunControl::new(run.budget());
    spawn_progress(&control, run.progress);
    let options = SearchOptions {
        workers: run.workers as usize,
        budget: run.budget(),
        control: Some(control.clone()),
        ..SearchOptions::default()
    };

    let mut manifest = RunManifest {
        tool_version: tool_version(),
        command: "search".into(),
        rows: n,
        strength: t,
        columns: k,
        order: v,
        libraries: library_records,
        multisets: multisets.clone(),
        results: Vec::new(),
        stats: SearchStats::default(),
        verdict: Verdict::BudgetExhausted,
    };
    let manifest_path = out_dir.join("manifest.txt");

    match construct(n, t, k, v, &libraries, &options) {
        Ok(result) => {
            for (i, member) in result.members.iter().enumerate() {
                let name = format!("result_{i:03}.ca");
                let text = ca_core::ca_to_string(member.array());
                std::fs::write(out_dir.join(&name), &text)?;
                manifest
                    .results
                    .push((name, ca_core::fingerprint(text.as_bytes())));
            }
            manifest.stats = result.stats.clone();
            manifest.verdict = if !result.members.is_empty() {
                Verdict::Exists
            } else if partial {
                Verdict::NotFoundPartial
            } else {
                Verdict::Nonexistent
            };
            ca_core::write_manifest(&manifest, &manifest_path)?;
            println!("multisets = {}", result.stats.multisets);
            println!("tuples = {}", result.stats.tuples);
            println!("results = {}", result.members.len());
            println!("verdict = {}", manifest.verdict.as_str());
            Ok(0)
        }
        Err(CaError::BudgetExhausted {
            nodes,
            results,
            elapsed_ms,
        }) => {
            manifest.stats.nodes = nodes;
            manifest.stats.wall = Duration::from_millis(elapsed_ms);
            manifest.verdict = Verdict::BudgetExhausted;
            ca_core::write_manifest(&manifest, &manifest_path)?;
            Err(CaError::BudgetExhausted {
                nodes,
                results,
                elapsed_ms,
            })
        }
        Err(other) => Err(other),
    }
}
