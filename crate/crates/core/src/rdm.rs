//! Two-spin reduced density matrices and concurrence.
//!
//! A [`TwoQubitRDM`] for the ordered pair `(i, j)` is written in the product
//! basis `(up up, up down, down up, down down)`, first label for site `i`.
//! States of an `S^z`-conserving Hamiltonian give the X form
//!
//! ```text
//! | alpha   0      0      0     |
//! | 0       beta   gamma  0     |
//! | 0       gamma* delta  0     |
//! | 0       0      0      epsilon |
//! ```
//!
//! with `alpha = P(both up)` and `epsilon = P(both down)`.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector, Matrix4, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{BasisState, SectorBasis};
use crate::spectra::{MixedStateSpec, Spectrum};

/// Tolerance on `<v|v> = 1` for pure-state inputs.
pub const NORM_TOL: f64 = 1e-10;

/// Off-X-form entries larger than this are rejected by [`TwoQubitRDM::x_state`].
pub const X_FORM_TOL: f64 = 1e-12;

const BASIS_LABELS: [&str; 4] = ["uu", "ud", "du", "dd"];

/// Position of the pair's configuration in `(uu, ud, du, dd)`.
#[inline]
fn local_index(s: BasisState, i: usize, j: usize) -> usize {
    2 * usize::from(!s.is_up(i)) + usize::from(!s.is_up(j))
}

/// 4x4 density matrix of the ordered pair `(i, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitRDM {
    pub pair: (usize, usize),
    pub matrix: Matrix4<Complex64>,
}

impl TwoQubitRDM {
    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Hermitian within `1e-12`, unit trace within `1e-10`, eigenvalues at
    /// least `-1e-10`.
    pub fn validate(&self) -> Result<()> {
        let herm = max_abs(&(self.matrix - self.matrix.adjoint()));
        if herm > 1e-12 {
            return Err(Error::InvalidMixture(format!(
                "RDM not Hermitian ({herm:e})"
            )));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidMixture(format!("RDM trace {tr}")));
        }
        let min = SymmetricEigen::new(self.matrix)
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min < -1e-10 {
            return Err(Error::InvalidMixture(format!("RDM eigenvalue {min:e}")));
        }
        Ok(())
    }

    /// Largest entry-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &TwoQubitRDM) -> f64 {
        max_abs(&(self.matrix - other.matrix))
    }

    /// Largest modulus among the entries that vanish in the X form.
    pub fn off_x_magnitude(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..4 {
            for c in 0..4 {
                let on_x = r == c || (r, c) == (1, 2) || (r, c) == (2, 1);
                if !on_x {
                    worst = worst.max(self.matrix[(r, c)].norm());
                }
            }
        }
        worst
    }

    /// Restricted-form entries; fails if an off-X entry exceeds
    /// [`X_FORM_TOL`].
    pub fn x_state(&self) -> Result<XStateRDM> {
        for r in 0..4 {
            for c in 0..4 {
                let on_x = r == c || (r, c) == (1, 2) || (r, c) == (2, 1);
                let value = self.matrix[(r, c)].norm();
                if !on_x && value > X_FORM_TOL {
                    return Err(Error::NotXForm {
                        row: r,
                        col: c,
                        value,
                    });
                }
            }
        }
        let m = &self.matrix;
        Ok(XStateRDM {
            alpha: m[(0, 0)].re,
            beta: m[(1, 1)].re,
            gamma: m[(1, 2)],
            delta: m[(2, 2)].re,
            epsilon: m[(3, 3)].re,
        })
    }

    /// The same state described with the sites in the opposite order.
    pub fn swapped(&self) -> TwoQubitRDM {
        let perm = [0, 2, 1, 3];
        TwoQubitRDM {
            pair: (self.pair.1, self.pair.0),
            matrix: Matrix4::from_fn(|r, c| self.matrix[(perm[r], perm[c])]),
        }
    }
}

fn max_abs(m: &Matrix4<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Entries of an X-form two-qubit state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XStateRDM {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: Complex64,
    pub delta: f64,
    pub epsilon: f64,
}

impl XStateRDM {
    pub fn new(alpha: f64, beta: f64, gamma: Complex64, delta: f64, epsilon: f64) -> Self {
        XStateRDM {
            alpha,
            beta,
            gamma,
            delta,
            epsilon,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let sum = self.alpha + self.beta + self.delta + self.epsilon;
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidMixture(format!("X-state trace {sum}")));
        }
        if [self.alpha, self.beta, self.delta, self.epsilon]
            .iter()
            .any(|&p| p.is_nan() || p < 0.0)
        {
            return Err(Error::InvalidMixture("negative X-state population".into()));
        }
        if self.gamma.norm() > (self.beta * self.delta).sqrt() + 1e-10 {
            return Err(Error::InvalidMixture(format!(
                "|gamma| = {} exceeds sqrt(beta delta)",
                self.gamma.norm()
            )));
        }
        Ok(())
    }

    pub fn to_rdm(&self, pair: (usize, usize)) -> TwoQubitRDM {
        let z = Complex64::new(0.0, 0.0);
        let r = |x: f64| Complex64::new(x, 0.0);
        #[rustfmt::skip]
        let matrix = Matrix4::new(
            r(self.alpha), z, z, z,
            z, r(self.beta), self.gamma, z,
            z, self.gamma.conj(), r(self.delta), z,
            z, z, z, r(self.epsilon),
        );
        TwoQubitRDM { pair, matrix }
    }
}

fn check_pair(n_spins: usize, (i, j): (usize, usize)) -> Result<()> {
    for index in [i, j] {
        if index >= n_spins {
            return Err(Error::SiteOutOfRange { index, n_spins });
        }
    }
    if i == j {
        return Err(Error::InvalidPair(i, j));
    }
    Ok(())
}

/// Partial trace of a normalized pure state living in one sector.
pub fn pair_rdm_pure(
    basis: &SectorBasis,
    v: &DVector<f64>,
    pair: (usize, usize),
) -> Result<TwoQubitRDM> {
    check_pair(basis.n_spins(), pair)?;
    if v.len() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            got: v.len(),
        });
    }
    let norm2 = v.norm_squared();
    if (norm2 - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(norm2));
    }
    let (i, j) = pair;
    let mut diag = [0.0f64; 4];
    let mut gamma = 0.0;
    for (row, &s) in basis.states().iter().enumerate() {
        let a = v[row];
        let idx = local_index(s, i, j);
        diag[idx] += a * a;
        if idx == 1 {
            let partner = basis
                .index_of(s.swapped(i, j))
                .expect("exchange preserves the sector");
            gamma += a * v[partner];
        }
    }
    Ok(XStateRDM::new(
        diag[0],
        diag[1],
        Complex64::new(gamma, 0.0),
        diag[2],
        diag[3],
    )
    .to_rdm(pair))
}

/// Per-sector populations and weighted eigenvector rows of a mixture,
/// ready for repeated pair extraction.
#[derive(Debug, Clone)]
pub struct MixedDensity {
    n_spins: usize,
    sectors: Vec<SectorDensity>,
}

#[derive(Debug, Clone)]
struct SectorDensity {
    basis: SectorBasis,
    /// Diagonal of the sector density matrix.
    populations: Vec<f64>,
    /// `V diag(sqrt w)` restricted to weighted columns; row products give
    /// density-matrix coherences.
    rows: DMatrix<f64>,
}

impl SectorDensity {
    fn coherence(&self, a: usize, b: usize) -> f64 {
        self.rows.row(a).dot(&self.rows.row(b))
    }
}

impl MixedDensity {
    pub fn new(spec: &MixedStateSpec, spectrum: &Spectrum) -> Result<MixedDensity> {
        spec.validate()?;
        let mut weights: Vec<Vec<(usize, f64)>> = vec![Vec::new(); spectrum.sectors.len()];
        for c in &spec.components {
            let sector = spectrum
                .sectors
                .get(c.n_up)
                .ok_or(Error::InvalidMixture(format!(
                    "no sector with n_up = {}",
                    c.n_up
                )))?;
            if c.index >= sector.dim() {
                return Err(Error::InvalidMixture(format!(
                    "eigen-index {} out of range in sector {}",
                    c.index, c.n_up
                )));
            }
            if c.weight > 0.0 {
                weights[c.n_up].push((c.index, c.weight));
            }
        }
        let sectors = spectrum
            .sectors
            .iter()
            .zip(weights)
            .filter(|(_, w)| !w.is_empty())
            .map(|(s, w)| {
                let dim = s.dim();
                let rows = DMatrix::from_fn(dim, w.len(), |r, c| {
                    let (k, weight) = w[c];
                    s.eigenvectors[(r, k)] * weight.sqrt()
                });
                let populations = (0..dim).map(|r| rows.row(r).norm_squared()).collect();
                SectorDensity {
                    basis: s.basis.clone(),
                    populations,
                    rows,
                }
            })
            .collect();
        Ok(MixedDensity {
            n_spins: spectrum.n_spins,
            sectors,
        })
    }

    pub fn pair(&self, pair: (usize, usize)) -> Result<TwoQubitRDM> {
        check_pair(self.n_spins, pair)?;
        let (i, j) = pair;
        let mut diag = [0.0f64; 4];
        let mut gamma = 0.0;
        for sd in &self.sectors {
            for (row, &s) in sd.basis.states().iter().enumerate() {
                let idx = local_index(s, i, j);
                diag[idx] += sd.populations[row];
                if idx == 1 {
                    let partner = sd
                        .basis
                        .index_of(s.swapped(i, j))
                        .expect("exchange preserves the sector");
                    gamma += sd.coherence(row, partner);
                }
            }
        }
        Ok(XStateRDM::new(
            diag[0],
            diag[1],
            Complex64::new(gamma, 0.0),
            diag[2],
            diag[3],
        )
        .to_rdm(pair))
    }
}

/// Weighted sum of pure-state RDMs over the mixture's eigenstates.
pub fn pair_rdm_mixed(
    spec: &MixedStateSpec,
    spectrum: &Spectrum,
    pair: (usize, usize),
) -> Result<TwoQubitRDM> {
    MixedDensity::new(spec, spectrum)?.pair(pair)
}

/// All unordered pairs `(i, j)`, `i < j`.
pub fn all_pairs(n_spins: usize) -> Vec<(usize, usize)> {
    (0..n_spins)
        .flat_map(|i| (i + 1..n_spins).map(move |j| (i, j)))
        .collect()
}

/// `2 (|gamma| - sqrt(alpha epsilon))` without clamping. Values at or below
/// zero mean the pair is separable.
pub fn concurrence_x_raw(r: &XStateRDM) -> f64 {
    2.0 * (r.gamma.norm() - (r.alpha * r.epsilon).max(0.0).sqrt())
}

/// X-state concurrence clamped to `[0, 1]`.
pub fn concurrence_x(r: &XStateRDM) -> f64 {
    concurrence_x_raw(r).clamp(0.0, 1.0)
}

/// `sigma_y (x) sigma_y`.
fn spin_flip() -> Matrix4<Complex64> {
    let z = Complex64::new(0.0, 0.0);
    let p = Complex64::new(1.0, 0.0);
    #[rustfmt::skip]
    let m = Matrix4::new(
        z, z, z, -p,
        z, z, p, z,
        z, p, z, z,
        -p, z, z, z,
    );
    m
}

fn hermitian_sqrt(m: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    let eig = SymmetricEigen::new(*m);
    let roots = eig
        .eigenvalues
        .map(|x| Complex64::new(x.max(0.0).sqrt(), 0.0));
    let u = eig.eigenvectors;
    u * Matrix4::from_diagonal(&roots) * u.adjoint()
}

/// `sqrt(mu_1) - sqrt(mu_2) - sqrt(mu_3) - sqrt(mu_4)` for the eigenvalues
/// of `rho rho~` in descending order, without clamping.
///
/// `rho rho~` has the spectrum of the Hermitian `R = sqrt(rho) rho~ sqrt(rho)`,
/// and `R = A A^dagger` with `A = sqrt(rho) Y sqrt(rho)^*`, `Y` the double
/// spin flip. The `sqrt(mu_k)` are therefore the singular values of `A`.
pub fn concurrence_wootters_raw(r: &TwoQubitRDM) -> f64 {
    let root = hermitian_sqrt(&r.matrix);
    let a = root * spin_flip() * root.map(|z| z.conj());
    let mut s: Vec<f64> = a.singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s[0] - s[1] - s[2] - s[3]
}

/// General two-qubit concurrence clamped to `[0, 1]`.
pub fn concurrence_wootters(r: &TwoQubitRDM) -> f64 {
    concurrence_wootters_raw(r).clamp(0.0, 1.0)
}

/// `tr(rho S^x (x) S^x)`.
pub fn sxsx_correlator(r: &TwoQubitRDM) -> f64 {
    let m = &r.matrix;
    (m[(0, 3)] + m[(1, 2)] + m[(2, 1)] + m[(3, 0)]).re / 4.0
}

/// CSV of the 16 complex entries per pair, row-major, with raw concurrence.
pub fn rdm_csv(rdms: &[TwoQubitRDM]) -> String {
    let mut out = String::new();
    out.push_str("# basis order for sites (i, j): (up,up), (up,down), (down,up), (down,down); first label is site i\n");
    out.push_str("i,j");
    for r in BASIS_LABELS {
        for c in BASIS_LABELS {
            let _ = write!(out, ",re_{r}_{c},im_{r}_{c}");
        }
    }
    out.push_str(",concurrence_raw\n");
    for rdm in rdms {
        let _ = write!(out, "{},{}", rdm.pair.0, rdm.pair.1);
        for r in 0..4 {
            for c in 0..4 {
                let z = rdm.matrix[(r, c)];
                let _ = write!(out, ",{},{}", z.re, z.im);
            }
        }
        let raw = match rdm.x_state() {
            Ok(x) => concurrence_x_raw(&x),
            Err(_) => concurrence_wootters_raw(rdm),
        };
        let _ = writeln!(out, ",{raw}");
    }
    out
}
