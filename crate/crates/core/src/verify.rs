//! Checks of the ferromagnetic ground multiplet and of the absence of
//! pairwise entanglement, over single graphs or the built-in graph set.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::analytic::universal_rdm;
use crate::error::{Error, Result};
use crate::graph::{
    cube_graph, grid_graph, open_chain_xmg, random_graph, ring_xmg, star_graph, SpinGraph,
    XmgParams,
};
use crate::rdm::{all_pairs, concurrence_x_raw, MixedDensity};
use crate::spectra::{full_spectrum, ground_subspace, Spectrum, DEFAULT_DEGENERACY_TOL};
use crate::sweep::{pair_concurrences, PairConcurrence, DEFAULT_THRESHOLD};

/// Entry-wise tolerance against the universal pair RDM.
pub const DEFAULT_RDM_TOL: f64 = 1e-10;

/// Relative tolerance on the ground energy `sum(J)/4`.
pub const ENERGY_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: String) -> Check {
        Check {
            name: name.into(),
            passed,
            detail,
        }
    }
}

/// Outcome of [`verify_universal`] or [`verify_degeneracy`] on one graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub graph_id: String,
    pub n_spins: usize,
    pub ferromagnetic: bool,
    pub connected: bool,
    pub ground_degeneracy: Option<usize>,
    pub expected_degeneracy: usize,
    pub ground_energy: Option<f64>,
    pub expected_ground_energy: f64,
    pub max_rdm_deviation: Option<f64>,
    pub max_concurrence_raw: Option<f64>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl VerifyReport {
    fn new(graph_id: &str, g: &SpinGraph) -> VerifyReport {
        VerifyReport {
            graph_id: graph_id.into(),
            n_spins: g.n_spins(),
            ferromagnetic: g.is_ferromagnetic(),
            connected: g.is_connected(),
            ground_degeneracy: None,
            expected_degeneracy: g.n_spins() + 1,
            ground_energy: None,
            expected_ground_energy: g.total_coupling() / 4.0,
            max_rdm_deviation: None,
            max_concurrence_raw: None,
            checks: Vec::new(),
            passed: false,
        }
    }

    fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    fn finish(mut self) -> VerifyReport {
        self.passed = !self.checks.is_empty() && self.checks.iter().all(|c| c.passed);
        self
    }

    fn preconditions(&mut self, need_connected: bool) -> bool {
        let ferro = self.ferromagnetic;
        self.push(Check::new(
            "precondition: ferromagnetic",
            ferro,
            if ferro {
                "all couplings <= 0".into()
            } else {
                "graph has a positive coupling".into()
            },
        ));
        let mut ok = ferro;
        if need_connected {
            let conn = self.connected;
            self.push(Check::new(
                "precondition: connected",
                conn,
                if conn {
                    "nonzero couplings connect all sites".into()
                } else {
                    "graph is disconnected; the N+1 multiplet is not guaranteed".into()
                },
            ));
            ok &= conn;
        }
        ok
    }

    fn energy_check(&mut self, spectrum: &Spectrum) {
        let e0 = spectrum.min_energy();
        let want = self.expected_ground_energy;
        self.ground_energy = Some(e0);
        let err = (e0 - want).abs();
        self.push(Check::new(
            "ground energy = sum(J)/4",
            err <= ENERGY_REL_TOL * want.abs().max(1.0),
            format!("E0 = {e0}, expected {want}, |diff| = {err:e}"),
        ));
    }
}

/// Ground multiplet at `B = 0` compared with the universal pair RDM on
/// every pair.
pub fn verify_universal(graph_id: &str, g: &SpinGraph, tol: f64) -> Result<VerifyReport> {
    let mut report = VerifyReport::new(graph_id, g);
    if !report.preconditions(true) {
        return Ok(report.finish());
    }
    let spectrum = full_spectrum(g, 0.0)?;
    let ground = ground_subspace(&spectrum, DEFAULT_DEGENERACY_TOL);
    let d = ground.components.len();
    report.ground_degeneracy = Some(d);
    report.push(Check::new(
        "ground degeneracy = N+1",
        d == report.expected_degeneracy,
        format!("d = {d}, expected {}", report.expected_degeneracy),
    ));
    report.energy_check(&spectrum);

    let density = MixedDensity::new(&ground, &spectrum)?;
    let mut deviation = 0.0f64;
    let mut max_raw = f64::NEG_INFINITY;
    for pair in all_pairs(g.n_spins()) {
        let rdm = density.pair(pair)?;
        deviation = deviation.max(rdm.max_abs_diff(&universal_rdm().to_rdm(pair)));
        max_raw = max_raw.max(concurrence_x_raw(&rdm.x_state()?));
    }
    report.max_rdm_deviation = Some(deviation);
    report.max_concurrence_raw = Some(max_raw);
    report.push(Check::new(
        "pair RDM = universal form",
        deviation <= tol,
        format!("max entry deviation {deviation:e} (tol {tol:e})"),
    ));
    report.push(Check::new(
        "raw concurrence <= threshold",
        max_raw <= DEFAULT_THRESHOLD,
        format!("max raw concurrence {max_raw:e}"),
    ));
    Ok(report.finish())
}

/// Ground degeneracy and energy at `B = 0`. The `N + 1` count is only
/// asserted for connected graphs; a disconnected graph is reported as
/// violating the hypothesis.
pub fn verify_degeneracy(graph_id: &str, g: &SpinGraph) -> Result<VerifyReport> {
    let mut report = VerifyReport::new(graph_id, g);
    if !report.preconditions(false) {
        return Ok(report.finish());
    }
    let spectrum = full_spectrum(g, 0.0)?;
    let d = ground_subspace(&spectrum, DEFAULT_DEGENERACY_TOL)
        .components
        .len();
    report.ground_degeneracy = Some(d);
    report.energy_check(&spectrum);
    if report.connected {
        report.push(Check::new(
            "ground degeneracy = N+1",
            d == report.expected_degeneracy,
            format!("d = {d}, expected {}", report.expected_degeneracy),
        ));
    } else {
        report.push(Check::new(
            "precondition: connected",
            false,
            format!(
                "disconnected graph: d = {d} vs N+1 = {}; hypothesis violated",
                report.expected_degeneracy
            ),
        ));
    }
    Ok(report.finish())
}

/// First temperature at which some pair exceeds the threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanViolation {
    pub temperature: f64,
    pub pair: (usize, usize),
    pub raw: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub graph_id: String,
    pub b_field: f64,
    /// Largest grid temperature reached with every pair at or below the
    /// threshold; `None` if the scan fails at `T = 0`.
    pub last_clean: Option<f64>,
    pub first_violation: Option<ScanViolation>,
    pub max_concurrence_raw: f64,
}

impl ScanResult {
    pub fn passed(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Scans ascending temperatures from `T = 0`, stopping at the first grid
/// point where some pair's raw concurrence exceeds `1e-12`.
pub fn zero_temperature_scan(
    graph_id: &str,
    g: &SpinGraph,
    t_grid: &[f64],
    b_field: f64,
) -> Result<ScanResult> {
    if t_grid.first() != Some(&0.0) {
        return Err(Error::Config("temperature grid must start at 0".into()));
    }
    if t_grid.windows(2).any(|w| w[1].is_nan() || w[1] <= w[0]) {
        return Err(Error::Config(
            "temperature grid must be strictly ascending".into(),
        ));
    }
    let spectrum = full_spectrum(g, b_field)?;
    let pairs = all_pairs(g.n_spins());
    let mut result = ScanResult {
        graph_id: graph_id.into(),
        b_field,
        last_clean: None,
        first_violation: None,
        max_concurrence_raw: f64::NEG_INFINITY,
    };
    for &t in t_grid {
        let values = pair_concurrences(&spectrum, t, DEFAULT_DEGENERACY_TOL, &pairs)?;
        let worst = values
            .iter()
            .max_by(|a, b| a.raw.total_cmp(&b.raw))
            .cloned()
            .unwrap_or(PairConcurrence {
                i: 0,
                j: 0,
                raw: f64::NEG_INFINITY,
            });
        result.max_concurrence_raw = result.max_concurrence_raw.max(worst.raw);
        if worst.raw > DEFAULT_THRESHOLD {
            result.first_violation = Some(ScanViolation {
                temperature: t,
                pair: (worst.i, worst.j),
                raw: worst.raw,
            });
            break;
        }
        result.last_clean = Some(t);
    }
    Ok(result)
}

/// `0, N/20, ..., N`.
pub fn default_scan_grid(n_spins: usize) -> Vec<f64> {
    (0..=20).map(|k| n_spins as f64 * k as f64 / 20.0).collect()
}

/// Named graphs used by `verify all`: rings N = 3..8, open chains N = 2..8,
/// a frustrated-range ring, the 3x3 grid with and without wrap, the cube, a
/// 6-spin star, and three seeded random graphs with inhomogeneous
/// couplings.
pub fn builtin_graphs() -> Vec<(String, SpinGraph)> {
    let mut out = Vec::new();
    for n in 3..=8 {
        out.push((
            format!("ring{n}"),
            ring_xmg(&XmgParams::new(n, -1.0, 0.0, 0.0, true)).expect("valid ring"),
        ));
    }
    for n in 2..=8 {
        out.push((
            format!("open{n}"),
            open_chain_xmg(&XmgParams::new(n, -1.0, 0.0, 0.0, false)).expect("valid chain"),
        ));
    }
    out.push((
        "ring8-g2-0.7-g3-2.5".into(),
        ring_xmg(&XmgParams::new(8, -1.0, -0.7, -2.5, true)).expect("valid ring"),
    ));
    out.push((
        "grid3x3".into(),
        grid_graph(3, 3, false, -1.0).expect("valid grid"),
    ));
    out.push((
        "grid3x3-periodic".into(),
        grid_graph(3, 3, true, -1.0).expect("valid grid"),
    ));
    out.push(("cube".into(), cube_graph(-1.0)));
    out.push(("star6".into(), star_graph(6, -1.0).expect("valid star")));
    for (n, seed) in [(6, 1u64), (7, 42), (8, 7)] {
        out.push((
            format!("random{n}-seed{seed}"),
            random_graph(n, 0.5, (-2.0, -0.1), seed).expect("connected random graph"),
        ));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Universal,
    Degeneracy,
    SweepZero,
    All,
}

/// Everything a `verify` run produced.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub universal: Vec<VerifyReport>,
    pub degeneracy: Vec<VerifyReport>,
    pub scans: Vec<ScanResult>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mark = |ok: bool| if ok { "PASS" } else { "FAIL" };
        for (title, reports) in [
            ("universal", &self.universal),
            ("degeneracy", &self.degeneracy),
        ] {
            for r in reports {
                let _ = writeln!(out, "[{}] {title} {}", mark(r.passed), r.graph_id);
                for c in &r.checks {
                    let _ = writeln!(out, "    [{}] {}: {}", mark(c.passed), c.name, c.detail);
                }
            }
        }
        for s in &self.scans {
            let _ = writeln!(
                out,
                "[{}] sweep-zero {} B={}: last clean T = {}, max raw concurrence {:e}",
                mark(s.passed()),
                s.graph_id,
                s.b_field,
                s.last_clean.map_or("none".into(), |t| t.to_string()),
                s.max_concurrence_raw
            );
        }
        let _ = writeln!(out, "overall: {}", mark(self.passed));
        out
    }
}

/// Runs `suite` on each graph. Zero-temperature scans use
/// `T = 0, N/20, ..., N` at `B = 0` and `B = N/2`.
pub fn run_suite(suite: Suite, graphs: &[(String, SpinGraph)]) -> Result<SuiteReport> {
    use rayon::prelude::*;
    let want = |s: Suite| suite == s || suite == Suite::All;
    let mut report = SuiteReport::default();
    if want(Suite::Universal) {
        report.universal = graphs
            .par_iter()
            .map(|(id, g)| verify_universal(id, g, DEFAULT_RDM_TOL))
            .collect::<Result<_>>()?;
    }
    if want(Suite::Degeneracy) {
        report.degeneracy = graphs
            .par_iter()
            .map(|(id, g)| verify_degeneracy(id, g))
            .collect::<Result<_>>()?;
    }
    if want(Suite::SweepZero) {
        let scans: Vec<Vec<ScanResult>> = graphs
            .par_iter()
            .map(|(id, g)| {
                let n = g.n_spins();
                let grid = default_scan_grid(n);
                [0.0, n as f64 / 2.0]
                    .iter()
                    .map(|&b| zero_temperature_scan(id, g, &grid, b))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        report.scans = scans.into_iter().flatten().collect();
    }
    report.passed = report.universal.iter().all(|r| r.passed)
        && report.degeneracy.iter().all(|r| r.passed)
        && report.scans.iter().all(ScanResult::passed);
    Ok(report)
}
