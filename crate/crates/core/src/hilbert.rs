//! Computational basis, total-S^z sectors, and sector-blocked Hamiltonians.
//!
//! A basis state is an `N`-bit mask with bit `i` set when spin `i` points
//! along `+z`; mask 0 is the all-down state. The Hamiltonian
//! `sum J_ij S_i.S_j + B sum S_i^z` conserves the number of up spins, so it
//! is assembled one sector at a time. Within a sector, states are ordered
//! by ascending mask value.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::SpinGraph;

/// Largest system the bitmask basis supports.
pub const MAX_BASIS_SPINS: usize = 30;

/// A product state in the z basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisState(pub u32);

impl BasisState {
    #[inline]
    pub fn is_up(self, site: usize) -> bool {
        self.0 >> site & 1 == 1
    }

    #[inline]
    pub fn n_up(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Exchanges the orientations of two sites.
    #[inline]
    pub fn swapped(self, a: usize, b: usize) -> BasisState {
        if self.is_up(a) == self.is_up(b) {
            self
        } else {
            BasisState(self.0 ^ (1 << a | 1 << b))
        }
    }
}

/// All basis states with a fixed number of up spins, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorBasis {
    n_spins: usize,
    n_up: usize,
    states: Vec<BasisState>,
}

impl SectorBasis {
    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn n_up(&self) -> usize {
        self.n_up
    }

    /// `S^z` eigenvalue `n_up - N/2`.
    pub fn magnetization(&self) -> f64 {
        self.n_up as f64 - self.n_spins as f64 / 2.0
    }

    pub fn states(&self) -> &[BasisState] {
        &self.states
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    /// Position of `s` in this sector.
    pub fn index_of(&self, s: BasisState) -> Option<usize> {
        self.states.binary_search(&s).ok()
    }
}

/// Enumerates the sector in ascending order (Gosper's hack).
pub fn sector_basis(n_spins: usize, n_up: usize) -> Result<SectorBasis> {
    if n_up > n_spins || n_spins > MAX_BASIS_SPINS {
        return Err(Error::InvalidSector { n_spins, n_up });
    }
    let mut states = Vec::new();
    if n_up == 0 {
        states.push(BasisState(0));
    } else {
        let limit = 1u64 << n_spins;
        let mut v: u64 = (1u64 << n_up) - 1;
        while v < limit {
            states.push(BasisState(v as u32));
            let t = v | (v - 1);
            v = (t + 1) | (((!t & (t + 1)) - 1) >> (v.trailing_zeros() + 1));
        }
    }
    Ok(SectorBasis {
        n_spins,
        n_up,
        states,
    })
}

/// Dense Hamiltonian block on one sector.
#[derive(Debug, Clone)]
pub struct SectorMatrix {
    pub basis: SectorBasis,
    pub entries: DMatrix<f64>,
}

fn check_graph_sector(g: &SpinGraph, n_up: usize) -> Result<SectorBasis> {
    sector_basis(g.n_spins(), n_up)
}

/// Matrix of `sum J_ij S_i.S_j + B sum S_i^z` on the `n_up` sector.
///
/// Per edge and basis state: `+J/4` on the diagonal when the two spins are
/// parallel, otherwise `-J/4` on the diagonal and `+J/2` coupling to the
/// state with the two spins exchanged.
pub fn build_sector_hamiltonian(g: &SpinGraph, n_up: usize, b_field: f64) -> Result<SectorMatrix> {
    let basis = check_graph_sector(g, n_up)?;
    let dim = basis.dim();
    let zeeman = b_field * basis.magnetization();
    let mut m = DMatrix::zeros(dim, dim);
    for (row, &s) in basis.states.iter().enumerate() {
        let mut diag = zeeman;
        for e in g.edges() {
            if s.is_up(e.i) == s.is_up(e.j) {
                diag += e.coupling / 4.0;
            } else {
                diag -= e.coupling / 4.0;
                let col = basis
                    .index_of(s.swapped(e.i, e.j))
                    .expect("exchange preserves the sector");
                m[(col, row)] += e.coupling / 2.0;
            }
        }
        m[(row, row)] = diag;
    }
    Ok(SectorMatrix { basis, entries: m })
}

/// Matrix-free `H v` on the `n_up` sector.
pub fn apply_hamiltonian(
    g: &SpinGraph,
    n_up: usize,
    b_field: f64,
    v: &DVector<f64>,
) -> Result<DVector<f64>> {
    let basis = check_graph_sector(g, n_up)?;
    if v.len() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            got: v.len(),
        });
    }
    let zeeman = b_field * basis.magnetization();
    let mut out = DVector::zeros(basis.dim());
    for (row, &s) in basis.states.iter().enumerate() {
        let mut acc = zeeman * v[row];
        for e in g.edges() {
            if s.is_up(e.i) == s.is_up(e.j) {
                acc += e.coupling / 4.0 * v[row];
            } else {
                acc -= e.coupling / 4.0 * v[row];
                let col = basis
                    .index_of(s.swapped(e.i, e.j))
                    .expect("exchange preserves the sector");
                acc += e.coupling / 2.0 * v[col];
            }
        }
        out[row] = acc;
    }
    Ok(out)
}

/// Equal-amplitude superposition of every state in the sector.
pub fn dicke_vector(n_spins: usize, n_up: usize) -> Result<DVector<f64>> {
    let basis = sector_basis(n_spins, n_up)?;
    let dim = basis.dim();
    Ok(DVector::from_element(dim, 1.0 / (dim as f64).sqrt()))
}
