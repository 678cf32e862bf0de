//! Sector eigendecompositions, full spectra, ground multiplets and Gibbs
//! weights (`k_B = 1`, temperature in units of the couplings).

use std::fmt::Write as _;

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::SpinGraph;
use crate::hilbert::{build_sector_hamiltonian, SectorBasis, SectorMatrix};

/// Default largest `N` accepted by [`full_spectrum`].
pub const DEFAULT_SPIN_CAP: usize = 14;

/// Default relative tolerance for grouping levels into the ground multiplet.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-9;

/// Eigenpairs of one `S^z` block, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct SectorSpectrum {
    pub basis: SectorBasis,
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in eigenvalue order.
    pub eigenvectors: DMatrix<f64>,
}

impl SectorSpectrum {
    pub fn n_up(&self) -> usize {
        self.basis.n_up()
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }
}

fn iteration_budget(dim: usize) -> usize {
    1000 + 100 * dim
}

/// Dense symmetric eigensolver (Householder tridiagonalization followed by
/// implicit QR), with eigenpairs sorted ascending.
pub fn eig_sym(m: &SectorMatrix) -> Result<SectorSpectrum> {
    let dim = m.entries.nrows();
    if m.entries.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidGraph("non-finite Hamiltonian entry".into()));
    }
    let max_iterations = iteration_budget(dim);
    let eig = SymmetricEigen::try_new(m.entries.clone(), f64::EPSILON, max_iterations).ok_or(
        Error::NoConvergence {
            dim,
            max_iterations,
        },
    )?;
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = DMatrix::from_fn(dim, dim, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(SectorSpectrum {
        basis: m.basis.clone(),
        eigenvalues,
        eigenvectors,
    })
}

/// All `2^N` eigenpairs, one [`SectorSpectrum`] per `n_up = 0..=N`.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub n_spins: usize,
    pub b_field: f64,
    pub sectors: Vec<SectorSpectrum>,
}

/// One eigenstate addressed by sector and position within it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level {
    pub n_up: usize,
    pub index: usize,
    pub energy: f64,
}

impl Spectrum {
    pub fn sector(&self, n_up: usize) -> &SectorSpectrum {
        &self.sectors[n_up]
    }

    /// Levels in sector order, ascending within each sector.
    pub fn levels(&self) -> impl Iterator<Item = Level> + '_ {
        self.sectors.iter().flat_map(|s| {
            s.eigenvalues
                .iter()
                .enumerate()
                .map(move |(index, &energy)| Level {
                    n_up: s.n_up(),
                    index,
                    energy,
                })
        })
    }

    pub fn len(&self) -> usize {
        self.sectors.iter().map(SectorSpectrum::dim).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn min_energy(&self) -> f64 {
        self.levels()
            .map(|l| l.energy)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_energy(&self) -> f64 {
        self.levels()
            .map(|l| l.energy)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Absolute window `tol * max(1, spectral range)` above the minimum.
    pub fn degeneracy_window(&self, tol: f64) -> f64 {
        tol * (self.max_energy() - self.min_energy()).max(1.0)
    }

    /// Gap from the ground multiplet to the next distinct level, if any.
    pub fn gap(&self, tol: f64) -> Option<f64> {
        let e0 = self.min_energy();
        let window = self.degeneracy_window(tol);
        self.levels()
            .map(|l| l.energy - e0)
            .filter(|&d| d > window)
            .fold(None, |acc: Option<f64>, d| {
                Some(acc.map_or(d, |a| a.min(d)))
            })
    }

    /// Same Hamiltonian with a different uniform field. The Zeeman term is
    /// `B m` on a whole sector, so eigenvectors are unchanged.
    pub fn with_field(&self, b_field: f64) -> Spectrum {
        let shift = b_field - self.b_field;
        let sectors = self
            .sectors
            .iter()
            .map(|s| {
                let dm = shift * s.basis.magnetization();
                SectorSpectrum {
                    basis: s.basis.clone(),
                    eigenvalues: s.eigenvalues.iter().map(|e| e + dm).collect(),
                    eigenvectors: s.eigenvectors.clone(),
                }
            })
            .collect();
        Spectrum {
            n_spins: self.n_spins,
            b_field,
            sectors,
        }
    }

    /// CSV with columns `n_up,index,eigenvalue`. Comment lines report the
    /// ground energy, its multiplicity, and the gap above it.
    pub fn to_csv(&self) -> String {
        let tol = DEFAULT_DEGENERACY_TOL;
        let mut out = String::new();
        let degeneracy = ground_subspace(self, tol).components.len();
        let _ = writeln!(out, "# n_spins={} b_field={}", self.n_spins, self.b_field);
        let _ = writeln!(
            out,
            "# ground_energy={} ground_degeneracy={} gap={}",
            self.min_energy(),
            degeneracy,
            self.gap(tol).map_or("none".to_string(), |g| g.to_string())
        );
        out.push_str("n_up,index,eigenvalue\n");
        for l in self.levels() {
            let _ = writeln!(out, "{},{},{}", l.n_up, l.index, l.energy);
        }
        out
    }
}

/// Diagonalizes every sector of `g` in the field `b_field`.
pub fn full_spectrum(g: &SpinGraph, b_field: f64) -> Result<Spectrum> {
    full_spectrum_capped(g, b_field, DEFAULT_SPIN_CAP)
}

pub fn full_spectrum_capped(g: &SpinGraph, b_field: f64, cap: usize) -> Result<Spectrum> {
    let n = g.n_spins();
    if n > cap {
        return Err(Error::SizeCap { n_spins: n, cap });
    }
    let sectors = (0..=n)
        .into_par_iter()
        .map(|k| build_sector_hamiltonian(g, k, b_field).and_then(|m| eig_sym(&m)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Spectrum {
        n_spins: n,
        b_field,
        sectors,
    })
}

/// One eigenstate's share in an incoherent mixture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixtureComponent {
    pub n_up: usize,
    pub index: usize,
    pub weight: f64,
}

/// Incoherent mixture of eigenstates of a [`Spectrum`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedStateSpec {
    pub temperature: f64,
    pub components: Vec<MixtureComponent>,
}

impl MixedStateSpec {
    pub fn total_weight(&self) -> f64 {
        self.components.iter().map(|c| c.weight).sum()
    }

    /// Weights nonnegative and summing to one within `1e-12`.
    pub fn validate(&self) -> Result<()> {
        if let Some(c) = self
            .components
            .iter()
            .find(|c| c.weight.is_nan() || c.weight < 0.0)
        {
            return Err(Error::InvalidMixture(format!(
                "negative weight {} on ({}, {})",
                c.weight, c.n_up, c.index
            )));
        }
        let total = self.total_weight();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidMixture(format!("weights sum to {total}")));
        }
        Ok(())
    }
}

/// Equal-weight mixture over every level within
/// `tol * max(1, spectral range)` of the minimum.
pub fn ground_subspace(spectrum: &Spectrum, tol: f64) -> MixedStateSpec {
    let e0 = spectrum.min_energy();
    let window = spectrum.degeneracy_window(tol);
    let members: Vec<Level> = spectrum
        .levels()
        .filter(|l| l.energy - e0 <= window)
        .collect();
    let weight = 1.0 / members.len() as f64;
    MixedStateSpec {
        temperature: 0.0,
        components: members
            .into_iter()
            .map(|l| MixtureComponent {
                n_up: l.n_up,
                index: l.index,
                weight,
            })
            .collect(),
    }
}

/// Boltzmann weights `exp(-(E - E_min) / T)` over all levels, normalized.
/// `T = 0` is the uniform ground multiplet.
pub fn gibbs_weights(spectrum: &Spectrum, temperature: f64) -> Result<MixedStateSpec> {
    if !temperature.is_finite() || temperature < 0.0 {
        return Err(Error::InvalidMixture(format!(
            "temperature must be finite and nonnegative, got {temperature}"
        )));
    }
    if temperature == 0.0 {
        return Ok(ground_subspace(spectrum, DEFAULT_DEGENERACY_TOL));
    }
    let e0 = spectrum.min_energy();
    let mut components: Vec<MixtureComponent> = spectrum
        .levels()
        .map(|l| MixtureComponent {
            n_up: l.n_up,
            index: l.index,
            weight: (-(l.energy - e0) / temperature).exp(),
        })
        .collect();
    let z: f64 = components.iter().map(|c| c.weight).sum();
    for c in &mut components {
        c.weight /= z;
    }
    Ok(MixedStateSpec {
        temperature,
        components,
    })
}
