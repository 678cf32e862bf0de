//! `spinent` command line.
//!
//! Exit codes: 0 on success, 1 when a verification or an asserting sweep
//! finds a failure, 2 on bad arguments or unreadable input.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analytic::{
    concurrence_pairwise_mixed, concurrence_symmetric, figure1_csv, figure1_data, figure2_csv,
    figure2_data, symmetric_rdm_entries, zone, zone_mixture_concurrence,
};
use crate::error::{Error, Result};
use crate::graph::{
    cube_graph, grid_graph, random_graph, star_graph, xmg_graph, SpinGraph, XmgParams,
};
use crate::rdm::{all_pairs, rdm_csv, MixedDensity};
use crate::spectra::{full_spectrum, DEFAULT_DEGENERACY_TOL};
use crate::sweep::{run_sweep, thermal_mixture, SweepConfig};
use crate::verify::{builtin_graphs, run_suite, Suite};

#[derive(Debug, Parser)]
#[command(
    name = "spinent",
    version,
    about = "Exact diagonalization and pairwise entanglement of Heisenberg spin graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print all 2^N eigenvalues as CSV rows (n_up, index, eigenvalue).
    Spectrum {
        #[command(flatten)]
        graph: GraphArgs,
        /// Uniform field B along +z.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        field: f64,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two-spin reduced density matrices of the thermal state, as CSV.
    Rdm {
        #[command(flatten)]
        graph: GraphArgs,
        /// Uniform field B along +z.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        field: f64,
        /// Temperature (k_B = 1); 0 selects the ground multiplet.
        #[arg(long, default_value_t = 0.0)]
        temperature: f64,
        /// Site pair `i,j`; repeatable. Defaults to all pairs.
        #[arg(long = "pair", value_parser = parse_pair)]
        pairs: Vec<(usize, usize)>,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form pair RDM entries and concurrences of the symmetric states.
    Analytic {
        /// Number of spins.
        #[arg(long)]
        n: usize,
        /// Only this number of up spins.
        #[arg(long)]
        n_up: Option<usize>,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit concurrence curves: 1 = per-index curves at fixed N, 2 = zone
    /// mixture against N.
    Figures {
        /// Which curve set: 1 or 2.
        #[arg(value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
        /// N for curve 1.
        #[arg(long, default_value_t = 100)]
        n: usize,
        /// Smallest N for curve 2.
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        /// Largest N for curve 2.
        #[arg(long, default_value_t = 400)]
        n_max: usize,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a parameter sweep described by a TOML config.
    Sweep {
        /// Sweep config (TOML).
        #[arg(long)]
        config: PathBuf,
        /// Keep complete records already in the output file and continue.
        #[arg(long)]
        resume: bool,
        /// Override the config's worker count (0 = all cores).
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Check ground-multiplet universality, degeneracy and zero
    /// entanglement on the built-in graph set or the given graph.
    Verify {
        /// Checks to run.
        #[arg(value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[command(flatten)]
        graph: GraphArgs,
        /// Also write the JSON report to this file.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Format of the report on stdout.
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print a graph in the JSON exchange format.
    Graph {
        #[command(flatten)]
        graph: GraphArgs,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Universal,
    Degeneracy,
    SweepZero,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Universal => Suite::Universal,
            SuiteArg::Degeneracy => Suite::Degeneracy,
            SuiteArg::SweepZero => Suite::SweepZero,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Graph source: one JSON file or one generator.
#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Graph file `{"n": N, "edges": [[i, j, J], ...]}`.
    #[arg(long, value_name = "FILE")]
    pub graph: Option<PathBuf>,
    /// Periodic chain of N spins with couplings g1, g2, g3.
    #[arg(long, value_name = "N")]
    pub ring: Option<usize>,
    /// Open chain of N spins with couplings g1, g2, g3.
    #[arg(long, value_name = "N")]
    pub open: Option<usize>,
    /// Nearest-neighbour lattice, e.g. `3x3`.
    #[arg(long, value_name = "RxC", value_parser = parse_grid)]
    pub grid: Option<(usize, usize)>,
    /// Eight spins on a cube.
    #[arg(long)]
    pub cube: bool,
    /// Site 0 coupled to N-1 leaves.
    #[arg(long, value_name = "N")]
    pub star: Option<usize>,
    /// Seeded random connected graph on N spins.
    #[arg(long, value_name = "N")]
    pub random: Option<usize>,
    /// Nearest-neighbour chain coupling.
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    pub g1: f64,
    /// Next-nearest-neighbour chain coupling.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub g2: f64,
    /// Third-neighbour chain coupling.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub g3: f64,
    /// Coupling for grid, cube and star.
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    pub coupling: f64,
    /// Wrap the grid into a torus.
    #[arg(long)]
    pub periodic: bool,
    /// Probability of each pair in a random graph.
    #[arg(long, default_value_t = 0.5)]
    pub edge_probability: f64,
    /// Lower end of the random coupling range.
    #[arg(long, default_value_t = -2.0, allow_negative_numbers = true)]
    pub j_lo: f64,
    /// Upper end of the random coupling range.
    #[arg(long, default_value_t = -0.1, allow_negative_numbers = true)]
    pub j_hi: f64,
    /// Random graph seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl GraphArgs {
    /// The selected graph with a display id, or `None` if no source flag
    /// was given.
    pub fn build(&self) -> Result<Option<(String, SpinGraph)>> {
        let chosen = [
            self.graph.is_some(),
            self.ring.is_some(),
            self.open.is_some(),
            self.grid.is_some(),
            self.cube,
            self.star.is_some(),
            self.random.is_some(),
        ]
        .iter()
        .filter(|&&b| b)
        .count();
        if chosen > 1 {
            return Err(Error::Config("give exactly one graph source".into()));
        }
        let g = if let Some(path) = &self.graph {
            (path.display().to_string(), SpinGraph::read_json(path)?)
        } else if let Some(n) = self.ring {
            let p = XmgParams::new(n, self.g1, self.g2, self.g3, true);
            (format!("ring{n}"), xmg_graph(&p)?)
        } else if let Some(n) = self.open {
            let p = XmgParams::new(n, self.g1, self.g2, self.g3, false);
            (format!("open{n}"), xmg_graph(&p)?)
        } else if let Some((r, c)) = self.grid {
            let id = format!(
                "grid{r}x{c}{}",
                if self.periodic { "-periodic" } else { "" }
            );
            (id, grid_graph(r, c, self.periodic, self.coupling)?)
        } else if self.cube {
            ("cube".into(), cube_graph(self.coupling))
        } else if let Some(n) = self.star {
            (format!("star{n}"), star_graph(n, self.coupling)?)
        } else if let Some(n) = self.random {
            let g = random_graph(n, self.edge_probability, (self.j_lo, self.j_hi), self.seed)?;
            (format!("random{n}-seed{}", self.seed), g)
        } else {
            return Ok(None);
        };
        Ok(Some(g))
    }

    fn require(&self) -> Result<(String, SpinGraph)> {
        self.build()?.ok_or(Error::Config(
            "no graph given (use --graph, --ring, --open, --grid, --cube, --star or --random)"
                .into(),
        ))
    }
}

fn parse_pair(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected i,j")?;
    let a = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b = b.trim().parse().map_err(|e| format!("{e}"))?;
    Ok((a, b))
}

fn parse_grid(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s.split_once(['x', 'X']).ok_or("expected RxC")?;
    let a = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b = b.trim().parse().map_err(|e| format!("{e}"))?;
    Ok((a, b))
}

fn emit(out: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => write_file(path, text),
        None => Ok(stdout.write_all(text.as_bytes())?),
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::File {
        path: path.to_owned(),
        source,
    })
}

fn analytic_table(n: usize, only: Option<usize>) -> Result<String> {
    let z = zone(n)?;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# N={n} zone=({}, {}) members={:?} zone_mixture_concurrence={}",
        z.lower,
        z.upper,
        z.members,
        zone_mixture_concurrence(n)?
    );
    out.push_str("n_up,alpha,beta,gamma,delta,epsilon,c_symmetric,c_pairwise_mixed,in_zone\n");
    let rows: Vec<usize> = match only {
        Some(k) => vec![k],
        None => (0..=n).collect(),
    };
    for k in rows {
        let e = symmetric_rdm_entries(n, k)?;
        let _ = writeln!(
            out,
            "{k},{},{},{},{},{},{},{},{}",
            e.alpha,
            e.beta,
            e.gamma,
            e.delta,
            e.epsilon,
            concurrence_symmetric(n, k)?,
            concurrence_pairwise_mixed(n, k)?,
            z.members.contains(&k)
        );
    }
    Ok(out)
}

/// Exit status of a command that ran to completion.
enum Status {
    Ok,
    ChecksFailed,
}

fn execute(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<Status> {
    match cli.command {
        Command::Spectrum { graph, field, out } => {
            let (_, g) = graph.require()?;
            emit(&out, &full_spectrum(&g, field)?.to_csv(), stdout)?;
        }
        Command::Rdm {
            graph,
            field,
            temperature,
            pairs,
            out,
        } => {
            let (_, g) = graph.require()?;
            let spectrum = full_spectrum(&g, field)?;
            let mixture = thermal_mixture(&spectrum, temperature, DEFAULT_DEGENERACY_TOL)?;
            let density = MixedDensity::new(&mixture, &spectrum)?;
            let pairs = if pairs.is_empty() {
                all_pairs(g.n_spins())
            } else {
                pairs
            };
            let rdms = pairs
                .into_iter()
                .map(|p| density.pair(p))
                .collect::<Result<Vec<_>>>()?;
            let header = format!("# temperature={temperature} b_field={field}\n");
            emit(&out, &(header + &rdm_csv(&rdms)), stdout)?;
        }
        Command::Analytic { n, n_up, out } => {
            emit(&out, &analytic_table(n, n_up)?, stdout)?;
        }
        Command::Figures {
            which,
            n,
            n_min,
            n_max,
            out,
        } => {
            let text = if which == 1 {
                figure1_csv(n, &figure1_data(n)?)
            } else {
                figure2_csv(&figure2_data(n_min, n_max)?)
            };
            emit(&out, &text, stdout)?;
        }
        Command::Sweep {
            config,
            resume,
            workers,
        } => {
            let mut cfg = SweepConfig::read(&config)?;
            if let Some(w) = workers {
                cfg.workers = w;
            }
            let outcome = run_sweep(&cfg, resume)?;
            writeln!(
                stdout,
                "points: {} (resumed from {}), computed: {}, max raw concurrence: {:e}, above threshold {:e}: {}",
                outcome.total_points,
                outcome.resumed_from,
                outcome.records.len(),
                outcome.max_concurrence_raw,
                cfg.threshold,
                outcome.violations
            )?;
            if cfg.assert_zero && outcome.violations > 0 {
                writeln!(stderr, "sweep found concurrence above threshold")?;
                return Ok(Status::ChecksFailed);
            }
        }
        Command::Verify {
            suite,
            graph,
            json,
            format,
        } => {
            let graphs = match graph.build()? {
                Some(g) => vec![g],
                None => builtin_graphs(),
            };
            let report = run_suite(suite.into(), &graphs)?;
            if let Some(path) = &json {
                write_file(path, &report.to_json())?;
            }
            match format {
                Format::Text => stdout.write_all(report.to_text().as_bytes())?,
                Format::Json => writeln!(stdout, "{}", report.to_json())?,
            }
            if !report.passed {
                return Ok(Status::ChecksFailed);
            }
        }
        Command::Graph { graph, out } => {
            let (_, g) = graph.require()?;
            emit(&out, &(g.to_json() + "\n"), stdout)?;
        }
    }
    Ok(Status::Ok)
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
            } else {
                let _ = stdout.write_all(text.as_bytes());
            }
            return code;
        }
    };
    match execute(cli, stdout, stderr) {
        Ok(Status::Ok) => 0,
        Ok(Status::ChecksFailed) => 1,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}
