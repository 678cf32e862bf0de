//! Parameter sweeps over geometries, couplings, temperature and field.
//!
//! Every grid point yields one [`SweepRecord`] holding the raw (unclamped)
//! concurrence of each selected pair. Records carry a global grid index and
//! are written in index order, one JSON object per line, so identical
//! configurations give byte-identical files and an interrupted run can be
//! resumed from the last complete line.

use std::fmt::Write as _;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    cube_graph, grid_graph, random_graph, star_graph, xmg_graph, SpinGraph, XmgParams,
};
use crate::rdm::{all_pairs, concurrence_x_raw, MixedDensity};
use crate::spectra::{
    full_spectrum_capped, gibbs_weights, ground_subspace, MixedStateSpec, Spectrum,
    DEFAULT_DEGENERACY_TOL, DEFAULT_SPIN_CAP,
};

/// Raw concurrence above this counts as entanglement.
pub const DEFAULT_THRESHOLD: f64 = 1e-12;

/// Geometry of one sweep family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Geometry {
    /// Periodic extended Majumdar-Ghosh chain over the `n`, `g2`, `g3` grids.
    Ring,
    /// Open-boundary version of `Ring`.
    Open,
    Grid {
        rows: usize,
        cols: usize,
        #[serde(default)]
        periodic: bool,
        #[serde(default = "default_coupling")]
        coupling: f64,
    },
    Cube {
        #[serde(default = "default_coupling")]
        coupling: f64,
    },
    Star {
        n: usize,
        #[serde(default = "default_coupling")]
        coupling: f64,
    },
    Random {
        n: usize,
        edge_probability: f64,
        j_lo: f64,
        j_hi: f64,
        seed: u64,
    },
    File {
        path: PathBuf,
    },
}

fn default_coupling() -> f64 {
    -1.0
}

impl Geometry {
    fn is_chain(&self) -> bool {
        matches!(self, Geometry::Ring | Geometry::Open)
    }

    /// Graph of a fixed (non-chain) geometry.
    pub fn fixed_graph(&self) -> Result<SpinGraph> {
        match self {
            Geometry::Ring | Geometry::Open => Err(Error::Config(
                "chain geometries are built from the n/g2/g3 grids".into(),
            )),
            Geometry::Grid {
                rows,
                cols,
                periodic,
                coupling,
            } => grid_graph(*rows, *cols, *periodic, *coupling),
            Geometry::Cube { coupling } => Ok(cube_graph(*coupling)),
            Geometry::Star { n, coupling } => star_graph(*n, *coupling),
            Geometry::Random {
                n,
                edge_probability,
                j_lo,
                j_hi,
                seed,
            } => random_graph(*n, *edge_probability, (*j_lo, *j_hi), *seed),
            Geometry::File { path } => SpinGraph::read_json(path),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Geometry::Ring => "ring".into(),
            Geometry::Open => "open".into(),
            Geometry::Grid {
                rows,
                cols,
                periodic,
                ..
            } => format!(
                "grid{rows}x{cols}{}",
                if *periodic { "-periodic" } else { "" }
            ),
            Geometry::Cube { .. } => "cube".into(),
            Geometry::Star { n, .. } => format!("star{n}"),
            Geometry::Random { n, seed, .. } => format!("random{n}-seed{seed}"),
            Geometry::File { path } => format!("file:{}", path.display()),
        }
    }
}

/// One axis of the `T` or `B` grid: either explicit `values` or `points`
/// evenly spaced in `[lo, hi]`. With `per_n` the values are multiplied by
/// the number of spins of each graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default)]
    pub lo: f64,
    #[serde(default = "one")]
    pub hi: f64,
    #[serde(default)]
    pub per_n: bool,
}

fn one() -> f64 {
    1.0
}

impl AxisSpec {
    pub fn values(values: Vec<f64>) -> Self {
        AxisSpec {
            values: Some(values),
            points: None,
            lo: 0.0,
            hi: 1.0,
            per_n: false,
        }
    }

    /// `points` values evenly spaced over `[0, N]`.
    pub fn span_n(points: usize) -> Self {
        AxisSpec {
            values: None,
            points: Some(points),
            lo: 0.0,
            hi: 1.0,
            per_n: true,
        }
    }

    fn len(&self) -> usize {
        match (&self.values, self.points) {
            (Some(v), _) => v.len(),
            (None, Some(p)) => p,
            (None, None) => 0,
        }
    }

    fn validate(&self, name: &str) -> Result<()> {
        match (&self.values, self.points) {
            (Some(_), Some(_)) => Err(Error::Config(format!(
                "{name}: give either `values` or `points`, not both"
            ))),
            _ if self.len() == 0 => Err(Error::Config(format!("{name} grid is empty"))),
            _ => Ok(()),
        }
    }

    /// Concrete grid for a graph with `n_spins` spins.
    pub fn resolve(&self, n_spins: usize) -> Vec<f64> {
        let scale = if self.per_n { n_spins as f64 } else { 1.0 };
        let raw: Vec<f64> = match (&self.values, self.points) {
            (Some(v), _) => v.clone(),
            (None, Some(1)) => vec![self.lo],
            (None, Some(p)) => (0..p)
                .map(|k| self.lo + (self.hi - self.lo) * k as f64 / (p - 1) as f64)
                .collect(),
            (None, None) => Vec::new(),
        };
        raw.into_iter().map(|x| x * scale).collect()
    }
}

/// Sweep configuration, read from TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub geometries: Vec<Geometry>,
    /// Chain lengths for `ring` and `open`.
    #[serde(default)]
    pub n: Vec<usize>,
    #[serde(default = "default_coupling")]
    pub g1: f64,
    #[serde(default = "zero_grid")]
    pub g2: Vec<f64>,
    #[serde(default = "zero_grid")]
    pub g3: Vec<f64>,
    pub temperature: AxisSpec,
    pub field: AxisSpec,
    /// Pairs to evaluate; all pairs when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<[usize; 2]>>,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    #[serde(default = "default_tol")]
    pub degeneracy_tol: f64,
    /// Fail the run (nonzero exit from the CLI) when any record exceeds
    /// `threshold`.
    #[serde(default)]
    pub assert_zero: bool,
    /// Worker threads; 0 uses all cores.
    #[serde(default)]
    pub workers: usize,
    #[serde(default = "default_cap")]
    pub spin_cap: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_jsonl: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_csv: Option<PathBuf>,
}

fn zero_grid() -> Vec<f64> {
    vec![0.0]
}

fn default_threshold() -> f64 {
    DEFAULT_THRESHOLD
}

fn default_tol() -> f64 {
    DEFAULT_DEGENERACY_TOL
}

fn default_cap() -> usize {
    DEFAULT_SPIN_CAP
}

impl SweepConfig {
    /// Chains N = 4..=8 with `g1 = -1`, `g2, g3` on five points of `[-4, 0]`
    /// and `T, B` on `points` values of `[0, N]`.
    pub fn desk_scale(points: usize) -> SweepConfig {
        let g = vec![-4.0, -3.0, -2.0, -1.0, 0.0];
        SweepConfig {
            geometries: vec![Geometry::Ring, Geometry::Open],
            n: (4..=8).collect(),
            g1: -1.0,
            g2: g.clone(),
            g3: g,
            temperature: AxisSpec::span_n(points),
            field: AxisSpec::span_n(points),
            pairs: None,
            threshold: DEFAULT_THRESHOLD,
            degeneracy_tol: DEFAULT_DEGENERACY_TOL,
            assert_zero: true,
            workers: 0,
            spin_cap: DEFAULT_SPIN_CAP,
            output_jsonl: None,
            output_csv: None,
        }
    }

    pub fn from_toml(s: &str) -> Result<SweepConfig> {
        let c: SweepConfig = toml::from_str(s)?;
        c.validate()?;
        Ok(c)
    }

    pub fn read(path: &Path) -> Result<SweepConfig> {
        let s = fs::read_to_string(path).map_err(|source| Error::File {
            path: path.to_owned(),
            source,
        })?;
        Self::from_toml(&s)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialization is infallible")
    }

    pub fn validate(&self) -> Result<()> {
        if self.geometries.is_empty() {
            return Err(Error::Config("no geometries".into()));
        }
        if self.geometries.iter().any(Geometry::is_chain) {
            if self.n.is_empty() || self.g2.is_empty() || self.g3.is_empty() {
                return Err(Error::Config(
                    "chain geometries need nonempty n, g2 and g3 grids".into(),
                ));
            }
            if let Some(&n) = self.n.iter().find(|&&n| n > self.spin_cap) {
                return Err(Error::SizeCap {
                    n_spins: n,
                    cap: self.spin_cap,
                });
            }
            if let Some(&n) = self.n.iter().find(|&&n| n < 2) {
                return Err(Error::Config(format!("chain length {n} < 2")));
            }
        }
        self.temperature.validate("temperature")?;
        self.field.validate("field")?;
        if self.threshold.is_nan()
            || self.threshold < 0.0
            || self.degeneracy_tol.is_nan()
            || self.degeneracy_tol < 0.0
        {
            return Err(Error::Config(
                "threshold and degeneracy_tol must be >= 0".into(),
            ));
        }
        Ok(())
    }

    /// Graph families in grid order.
    pub fn cases(&self) -> Result<Vec<SweepCase>> {
        self.validate()?;
        let mut cases = Vec::new();
        for geometry in &self.geometries {
            if geometry.is_chain() {
                let periodic = matches!(geometry, Geometry::Ring);
                for &n in &self.n {
                    for &g2 in &self.g2 {
                        for &g3 in &self.g3 {
                            let p = XmgParams::new(n, self.g1, g2, g3, periodic);
                            cases.push(SweepCase {
                                geometry: geometry.label(),
                                graph: xmg_graph(&p)?,
                                couplings: Some((self.g1, g2, g3)),
                            });
                        }
                    }
                }
            } else {
                let graph = geometry.fixed_graph()?;
                if graph.n_spins() > self.spin_cap {
                    return Err(Error::SizeCap {
                        n_spins: graph.n_spins(),
                        cap: self.spin_cap,
                    });
                }
                cases.push(SweepCase {
                    geometry: geometry.label(),
                    graph,
                    couplings: None,
                });
            }
        }
        Ok(cases)
    }

    fn pair_list(&self, n_spins: usize) -> Result<Vec<(usize, usize)>> {
        match &self.pairs {
            None => Ok(all_pairs(n_spins)),
            Some(list) => list
                .iter()
                .map(|&[i, j]| {
                    if i >= n_spins || j >= n_spins {
                        Err(Error::SiteOutOfRange {
                            index: i.max(j),
                            n_spins,
                        })
                    } else if i == j {
                        Err(Error::InvalidPair(i, j))
                    } else {
                        Ok((i, j))
                    }
                })
                .collect(),
        }
    }

    /// Total number of grid points.
    pub fn record_count(&self) -> Result<usize> {
        Ok(self.cases()?.len() * self.temperature.len() * self.field.len())
    }
}

/// One graph of the sweep, before the `T x B` grid is applied.
#[derive(Debug, Clone)]
pub struct SweepCase {
    pub geometry: String,
    pub graph: SpinGraph,
    /// `(g1, g2, g3)` for chain geometries.
    pub couplings: Option<(f64, f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairConcurrence {
    pub i: usize,
    pub j: usize,
    pub raw: f64,
}

/// Result at one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub index: usize,
    pub geometry: String,
    pub n_spins: usize,
    pub g1: Option<f64>,
    pub g2: Option<f64>,
    pub g3: Option<f64>,
    pub temperature: f64,
    pub b_field: f64,
    pub ground_energy: f64,
    pub ground_degeneracy: usize,
    pub max_concurrence_raw: f64,
    pub pairs: Vec<PairConcurrence>,
}

/// Thermal mixture at `temperature`, using `tol` for the `T = 0` multiplet.
pub fn thermal_mixture(spectrum: &Spectrum, temperature: f64, tol: f64) -> Result<MixedStateSpec> {
    if temperature == 0.0 {
        Ok(ground_subspace(spectrum, tol))
    } else {
        gibbs_weights(spectrum, temperature)
    }
}

/// Raw concurrence of every listed pair in the thermal state.
pub fn pair_concurrences(
    spectrum: &Spectrum,
    temperature: f64,
    tol: f64,
    pairs: &[(usize, usize)],
) -> Result<Vec<PairConcurrence>> {
    let mixture = thermal_mixture(spectrum, temperature, tol)?;
    let density = MixedDensity::new(&mixture, spectrum)?;
    pairs
        .iter()
        .map(|&(i, j)| {
            let x = density.pair((i, j))?.x_state()?;
            Ok(PairConcurrence {
                i,
                j,
                raw: concurrence_x_raw(&x),
            })
        })
        .collect()
}

fn evaluate_case(
    config: &SweepConfig,
    case: &SweepCase,
    first_index: usize,
    skip_below: usize,
) -> Result<Vec<SweepRecord>> {
    let n = case.graph.n_spins();
    let temps = config.temperature.resolve(n);
    let fields = config.field.resolve(n);
    let pairs = config.pair_list(n)?;
    let base = full_spectrum_capped(&case.graph, 0.0, config.spin_cap)?;
    let mut records = Vec::new();
    let mut index = first_index;
    for &t in &temps {
        for &b in &fields {
            if index >= skip_below {
                let spectrum = base.with_field(b);
                let pair_results = pair_concurrences(&spectrum, t, config.degeneracy_tol, &pairs)?;
                let max = pair_results
                    .iter()
                    .map(|p| p.raw)
                    .fold(f64::NEG_INFINITY, f64::max);
                records.push(SweepRecord {
                    index,
                    geometry: case.geometry.clone(),
                    n_spins: n,
                    g1: case.couplings.map(|c| c.0),
                    g2: case.couplings.map(|c| c.1),
                    g3: case.couplings.map(|c| c.2),
                    temperature: t,
                    b_field: b,
                    ground_energy: spectrum.min_energy(),
                    ground_degeneracy: ground_subspace(&spectrum, config.degeneracy_tol)
                        .components
                        .len(),
                    max_concurrence_raw: max,
                    pairs: pair_results,
                });
            }
            index += 1;
        }
    }
    Ok(records)
}

/// Outcome of [`run_sweep`].
#[derive(Debug, Clone)]
pub struct SweepOutcome {
    /// Records computed in this run, in grid order. Records skipped on
    /// resume are not included.
    pub records: Vec<SweepRecord>,
    pub total_points: usize,
    pub resumed_from: usize,
    /// Over every record in the output, kept ones included.
    pub max_concurrence_raw: f64,
    pub violations: usize,
}

impl SweepOutcome {
    pub fn passed(&self, threshold: f64) -> bool {
        self.violations == 0 && self.max_concurrence_raw <= threshold
    }
}

/// Runs the whole grid. When `output_jsonl` is set, records are appended
/// there in index order as each batch completes; with `resume`, complete
/// lines already present are kept and their grid points skipped.
pub fn run_sweep(config: &SweepConfig, resume: bool) -> Result<SweepOutcome> {
    let cases = config.cases()?;
    let points_per_case = config.temperature.len() * config.field.len();
    let total_points = cases.len() * points_per_case;

    let mut resumed_from = 0;
    let mut sink = match &config.output_jsonl {
        Some(path) => {
            if resume && path.exists() {
                resumed_from = truncate_to_complete(path)?;
            }
            let file = OpenOptions::new()
                .create(true)
                .append(resume)
                .write(true)
                .truncate(!resume)
                .open(path)
                .map_err(|source| Error::File {
                    path: path.clone(),
                    source,
                })?;
            Some(BufWriter::new(file))
        }
        None => None,
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    let batch = pool.current_num_threads().max(1) * 4;

    let mut records = Vec::new();
    let pending: Vec<(usize, &SweepCase)> = cases
        .iter()
        .enumerate()
        .map(|(k, c)| (k * points_per_case, c))
        .filter(|(first, _)| first + points_per_case > resumed_from)
        .collect();
    for chunk in pending.chunks(batch) {
        let results: Vec<Vec<SweepRecord>> = pool.install(|| {
            chunk
                .par_iter()
                .map(|&(first, case)| evaluate_case(config, case, first, resumed_from))
                .collect::<Result<_>>()
        })?;
        for r in results.into_iter().flatten() {
            if let Some(w) = sink.as_mut() {
                serde_json::to_writer(&mut *w, &r)?;
                w.write_all(b"\n")?;
            }
            records.push(r);
        }
        if let Some(w) = sink.as_mut() {
            w.flush()?;
        }
    }

    let all = match &config.output_jsonl {
        Some(jsonl) if resumed_from > 0 => read_records(jsonl)?,
        _ => records.clone(),
    };
    let max = all
        .iter()
        .map(|r| r.max_concurrence_raw)
        .fold(f64::NEG_INFINITY, f64::max);
    let violations = all
        .iter()
        .filter(|r| r.max_concurrence_raw > config.threshold)
        .count();
    if let Some(path) = &config.output_csv {
        fs::write(path, summary_csv(&all)).map_err(|source| Error::File {
            path: path.clone(),
            source,
        })?;
    }
    Ok(SweepOutcome {
        records,
        total_points,
        resumed_from,
        max_concurrence_raw: max,
        violations,
    })
}

/// Keeps the longest prefix of well-formed records with indices
/// `0, 1, 2, ...` and returns its length.
fn truncate_to_complete(path: &Path) -> Result<usize> {
    let bytes = fs::read(path).map_err(|source| Error::File {
        path: path.to_owned(),
        source,
    })?;
    let mut keep_bytes = 0usize;
    let mut count = 0usize;
    while let Some(len) = bytes[keep_bytes..].iter().position(|&c| c == b'\n') {
        let line = &bytes[keep_bytes..keep_bytes + len];
        match serde_json::from_slice::<SweepRecord>(line) {
            Ok(r) if r.index == count => {
                count += 1;
                keep_bytes += len + 1;
            }
            _ => break,
        }
    }
    let file = OpenOptions::new().write(true).open(path)?;
    file.set_len(keep_bytes as u64)?;
    Ok(count)
}

/// Reads a JSON-lines result file, sorted by grid index.
pub fn read_records(path: &Path) -> Result<Vec<SweepRecord>> {
    let file = File::open(path).map_err(|source| Error::File {
        path: path.to_owned(),
        source,
    })?;
    let mut records = Vec::new();
    for line in BufReader::new(file).lines() {
        let line = line?;
        if !line.trim().is_empty() {
            records.push(serde_json::from_str::<SweepRecord>(&line)?);
        }
    }
    records.sort_by_key(|r| r.index);
    Ok(records)
}

fn opt(x: Option<f64>) -> String {
    x.map_or(String::new(), |v| v.to_string())
}

/// Grid coordinates and max raw concurrence, one row per record.
pub fn summary_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from(
        "index,geometry,n_spins,g1,g2,g3,temperature,b_field,ground_energy,ground_degeneracy,max_concurrence_raw\n",
    );
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.index,
            r.geometry,
            r.n_spins,
            opt(r.g1),
            opt(r.g2),
            opt(r.g3),
            r.temperature,
            r.b_field,
            r.ground_energy,
            r.ground_degeneracy,
            r.max_concurrence_raw
        );
    }
    out
}
