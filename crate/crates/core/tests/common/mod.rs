//! Brute-force references over the full 2^N space. Nothing here goes
//! through the sector code.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector, SymmetricEigen};

pub type Rdm = [[f64; 4]; 4];

fn bit(x: usize, site: usize) -> usize {
    (x >> site) & 1
}

fn swap_bits(x: usize, i: usize, j: usize) -> usize {
    if bit(x, i) == bit(x, j) {
        x
    } else {
        x ^ (1 << i) ^ (1 << j)
    }
}

/// `H` on all 2^N states from `S_i . S_j = (P_ij - 1/2) / 2`, with `P_ij`
/// the transposition of sites `i` and `j`.
pub fn hamiltonian(n: usize, terms: &[(usize, usize, f64)], b: f64) -> DMatrix<f64> {
    let dim = 1usize << n;
    let mut h = DMatrix::zeros(dim, dim);
    for x in 0..dim {
        for &(i, j, coupling) in terms {
            h[(swap_bits(x, i, j), x)] += coupling / 2.0;
            h[(x, x)] -= coupling / 4.0;
        }
        h[(x, x)] += b * (x.count_ones() as f64 - n as f64 / 2.0);
    }
    h
}

/// Eigenvalues of the full Hamiltonian, ascending.
pub fn full_eigenvalues(h: &DMatrix<f64>) -> Vec<f64> {
    let mut e: Vec<f64> = SymmetricEigen::new(h.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    e.sort_by(f64::total_cmp);
    e
}

/// Position of the pair's local state in `(uu, ud, du, dd)`.
fn local(x: usize, i: usize, j: usize) -> usize {
    2 * (1 - bit(x, i)) + (1 - bit(x, j))
}

fn with_local(x: usize, i: usize, j: usize, a: usize) -> usize {
    let up_i = 1 - a / 2;
    let up_j = 1 - a % 2;
    let cleared = x & !(1 << i) & !(1 << j);
    cleared | (up_i << i) | (up_j << j)
}

/// `Tr_rest |psi><psi|` by summing over every configuration of the other
/// spins.
pub fn partial_trace_pure(n: usize, psi: &[f64], i: usize, j: usize) -> Rdm {
    let mut rho = [[0.0; 4]; 4];
    for x in 0..(1usize << n) {
        let a = local(x, i, j);
        for b in 0..4 {
            let y = with_local(x, i, j, b);
            rho[a][b] += psi[x] * psi[y];
        }
    }
    rho
}

/// `Tr_rest` of a full density matrix.
pub fn partial_trace(n: usize, rho_full: &DMatrix<f64>, i: usize, j: usize) -> Rdm {
    let mut rho = [[0.0; 4]; 4];
    for x in 0..(1usize << n) {
        let a = local(x, i, j);
        for b in 0..4 {
            let y = with_local(x, i, j, b);
            rho[a][b] += rho_full[(x, y)];
        }
    }
    rho
}

/// Gibbs state `exp(-H/T) / Z` from a full diagonalization; `T = 0` gives
/// the uniform mixture over levels within `tol` of the minimum.
pub fn thermal_state(h: &DMatrix<f64>, t: f64, tol: f64) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(h.clone());
    let e0 = eig.eigenvalues.min();
    let w: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&e| {
            if t == 0.0 {
                if e - e0 <= tol {
                    1.0
                } else {
                    0.0
                }
            } else {
                (-(e - e0) / t).exp()
            }
        })
        .collect();
    let z: f64 = w.iter().sum();
    let d = DMatrix::from_diagonal(&DVector::from_iterator(w.len(), w.iter().map(|x| x / z)));
    &eig.eigenvectors * d * eig.eigenvectors.transpose()
}

/// Equal superposition of every configuration with `k` spins up.
pub fn dicke_full(n: usize, k: usize) -> Vec<f64> {
    let dim = 1usize << n;
    let count = (0..dim).filter(|x| x.count_ones() as usize == k).count();
    let amp = 1.0 / (count as f64).sqrt();
    (0..dim)
        .map(|x| {
            if x.count_ones() as usize == k {
                amp
            } else {
                0.0
            }
        })
        .collect()
}

/// Sector vector written into the full space.
pub fn embed(n: usize, states: &[u32], v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; 1usize << n];
    for (s, a) in states.iter().zip(v) {
        out[*s as usize] = *a;
    }
    out
}

pub fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Concurrence from the eigenvalues of `R = rho (Y rho Y)`, for real
/// density matrices, where the eigenvalues of `R` equal those of the
/// symmetric `sqrt(rho) Y rho Y sqrt(rho)`.
pub fn concurrence_real(rho: &Rdm) -> f64 {
    let r = DMatrix::from_fn(4, 4, |a, b| rho[a][b]);
    let eig = SymmetricEigen::new(r);
    let sqrt = &eig.eigenvectors
        * DMatrix::from_diagonal(&eig.eigenvalues.map(|x| x.max(0.0).sqrt()))
        * eig.eigenvectors.transpose();
    let mut y = DMatrix::zeros(4, 4);
    y[(0, 3)] = -1.0;
    y[(3, 0)] = -1.0;
    y[(1, 2)] = 1.0;
    y[(2, 1)] = 1.0;
    let m = &sqrt * &y * DMatrix::from_fn(4, 4, |a, b| rho[a][b]) * &y * &sqrt;
    let m = (&m + m.transpose()) * 0.5;
    let mut l: Vec<f64> = SymmetricEigen::new(m)
        .eigenvalues
        .iter()
        .map(|x| x.max(0.0).sqrt())
        .collect();
    l.sort_by(|a, b| b.total_cmp(a));
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}
