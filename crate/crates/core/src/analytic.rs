//! Closed forms for the fully symmetric (Dicke) states.
//!
//! Pair RDM entries of the `n`-up symmetric state on `N` spins are exact
//! rationals with denominator `N(N-1)`, kept in [`Rational`] so sums such
//! as the ground-multiplet average hold exactly. Concurrences involve
//! square roots and are `f64`.

use std::fmt::Write as _;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rdm::{concurrence_x, XStateRDM};

pub type Rational = Ratio<i128>;

fn check(n_total: usize, n_up: usize) -> Result<()> {
    if n_total < 2 || n_up > n_total {
        return Err(Error::InvalidSector {
            n_spins: n_total,
            n_up,
        });
    }
    Ok(())
}

/// Exact X-form entries of a pair RDM.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricRdmEntries {
    pub n_total: usize,
    pub n_up: usize,
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
    pub delta: Rational,
    pub epsilon: Rational,
}

impl SymmetricRdmEntries {
    pub fn to_x_state(&self) -> XStateRDM {
        let f = |r: &Rational| r.to_f64().expect("finite rational");
        XStateRDM::new(
            f(&self.alpha),
            f(&self.beta),
            Complex64::new(f(&self.gamma), 0.0),
            f(&self.delta),
            f(&self.epsilon),
        )
    }

    fn zero(n_total: usize) -> Self {
        SymmetricRdmEntries {
            n_total,
            n_up: 0,
            alpha: Rational::zero(),
            beta: Rational::zero(),
            gamma: Rational::zero(),
            delta: Rational::zero(),
            epsilon: Rational::zero(),
        }
    }

    /// Entry-wise weighted sum. `n_up` of the result is meaningless.
    fn accumulate(&mut self, other: &Self, weight: Rational) {
        self.alpha += other.alpha * weight;
        self.beta += other.beta * weight;
        self.gamma += other.gamma * weight;
        self.delta += other.delta * weight;
        self.epsilon += other.epsilon * weight;
    }
}

/// `alpha = n(n-1)/(N(N-1))`, `beta = gamma = delta = n(N-n)/(N(N-1))`,
/// `epsilon = (N-n)(N-n-1)/(N(N-1))`.
pub fn symmetric_rdm_entries(n_total: usize, n_up: usize) -> Result<SymmetricRdmEntries> {
    check(n_total, n_up)?;
    let (big, n) = (n_total as i128, n_up as i128);
    let denom = big * (big - 1);
    let r = |num: i128| Rational::new(num, denom);
    let mid = r(n * (big - n));
    Ok(SymmetricRdmEntries {
        n_total,
        n_up,
        alpha: r(n * (n - 1)),
        beta: mid,
        gamma: mid,
        delta: mid,
        epsilon: r((big - n) * (big - n - 1)),
    })
}

/// Pair RDM of the equal mixture of all symmetric states: populations
/// `1/3, 1/6, 1/6, 1/3` and coherence `1/6`.
pub fn universal_rdm() -> XStateRDM {
    XStateRDM::new(
        1.0 / 3.0,
        1.0 / 6.0,
        Complex64::new(1.0 / 6.0, 0.0),
        1.0 / 6.0,
        1.0 / 3.0,
    )
}

/// Exact entries of [`universal_rdm`].
pub fn universal_rdm_exact(n_total: usize) -> SymmetricRdmEntries {
    SymmetricRdmEntries {
        n_total,
        n_up: 0,
        alpha: Rational::new(1, 3),
        beta: Rational::new(1, 6),
        gamma: Rational::new(1, 6),
        delta: Rational::new(1, 6),
        epsilon: Rational::new(1, 3),
    }
}

/// Equal-weight average of the symmetric-state entries over `members`.
pub fn mixture_entries(n_total: usize, members: &[usize]) -> Result<SymmetricRdmEntries> {
    if members.is_empty() {
        return Err(Error::InvalidMixture("empty mixture".into()));
    }
    let weight = Rational::new(1, members.len() as i128);
    let mut acc = SymmetricRdmEntries::zero(n_total);
    for &n in members {
        acc.accumulate(&symmetric_rdm_entries(n_total, n)?, weight);
    }
    Ok(acc)
}

/// Exact average over all `N + 1` symmetric states.
pub fn ground_mixture_entries(n_total: usize) -> Result<SymmetricRdmEntries> {
    let all: Vec<usize> = (0..=n_total).collect();
    mixture_entries(n_total, &all)
}

/// `2/(N(N-1)) * (n(N-n) - sqrt(n(n-1)(N-n)(N-n-1)))`.
pub fn concurrence_symmetric(n_total: usize, n_up: usize) -> Result<f64> {
    check(n_total, n_up)?;
    let (big, n) = (n_total as f64, n_up as f64);
    let root = (n * (n - 1.0) * (big - n) * (big - n - 1.0))
        .max(0.0)
        .sqrt();
    Ok(2.0 / (big * (big - 1.0)) * (n * (big - n) - root))
}

/// `max(0, 4n(N-n)/(N(N-1)) - 1)`, concurrence of the equal mixture of the
/// `n`-up and `(N-n)`-up symmetric states.
///
/// The numerator `4n(N-n) - N(N-1)` equals `N - (2n - N)^2`, so the value
/// is exactly zero whenever `(2n - N)^2 >= N`.
pub fn concurrence_pairwise_mixed(n_total: usize, n_up: usize) -> Result<f64> {
    check(n_total, n_up)?;
    let (big, n) = (n_total as i128, n_up as i128);
    let num = 4 * n * (big - n) - big * (big - 1);
    if num <= 0 {
        return Ok(0.0);
    }
    Ok(num as f64 / (big * (big - 1)) as f64)
}

/// Indices strictly inside `((N - sqrt N)/2, (N + sqrt N)/2)`, where
/// two-state mixing leaves the pair entangled.
#[derive(Debug, Clone, PartialEq)]
pub struct ZoneSpec {
    pub n_total: usize,
    pub lower: f64,
    pub upper: f64,
    pub members: Vec<usize>,
}

/// Membership is decided exactly as `(2n - N)^2 < N`.
pub fn zone(n_total: usize) -> Result<ZoneSpec> {
    check(n_total, 0)?;
    let big = n_total as i128;
    let root = (n_total as f64).sqrt();
    let members = (0..=n_total)
        .filter(|&n| {
            let d = 2 * n as i128 - big;
            d * d < big
        })
        .collect();
    Ok(ZoneSpec {
        n_total,
        lower: (n_total as f64 - root) / 2.0,
        upper: (n_total as f64 + root) / 2.0,
        members,
    })
}

/// Concurrence of the equal mixture of the zone members.
pub fn zone_mixture_concurrence(n_total: usize) -> Result<f64> {
    let z = zone(n_total)?;
    Ok(concurrence_x(
        &mixture_entries(n_total, &z.members)?.to_x_state(),
    ))
}

/// One row of the per-index concurrence curves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Figure1Row {
    pub n_up: usize,
    pub symmetric: f64,
    pub pairwise_mixed: f64,
}

pub fn figure1_data(n_total: usize) -> Result<Vec<Figure1Row>> {
    (0..=n_total)
        .map(|n| {
            Ok(Figure1Row {
                n_up: n,
                symmetric: concurrence_symmetric(n_total, n)?,
                pairwise_mixed: concurrence_pairwise_mixed(n_total, n)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Figure2Row {
    pub n_total: usize,
    pub zone_size: usize,
    pub concurrence: f64,
}

pub fn figure2_data(n_min: usize, n_max: usize) -> Result<Vec<Figure2Row>> {
    if n_min < 2 || n_min > n_max {
        return Err(Error::Config(format!(
            "need 2 <= n_min <= n_max, got {n_min}..{n_max}"
        )));
    }
    (n_min..=n_max)
        .map(|n| {
            Ok(Figure2Row {
                n_total: n,
                zone_size: zone(n)?.members.len(),
                concurrence: zone_mixture_concurrence(n)?,
            })
        })
        .collect()
}

pub fn figure1_csv(n_total: usize, rows: &[Figure1Row]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# N={n_total}");
    out.push_str("# c_symmetric = 2/(N(N-1)) * (n(N-n) - sqrt(n(n-1)(N-n)(N-n-1)))  [n-up symmetric state]\n");
    out.push_str("# c_pairwise_mixed = max(0, 4n(N-n)/(N(N-1)) - 1)  [equal mixture of n-up and (N-n)-up states]\n");
    out.push_str("n,c_symmetric,c_pairwise_mixed\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{}", r.n_up, r.symmetric, r.pairwise_mixed);
    }
    out
}

pub fn figure2_csv(rows: &[Figure2Row]) -> String {
    let mut out = String::new();
    out.push_str("# c_zone = concurrence of the equal mixture of symmetric states with (N - sqrt N)/2 < n < (N + sqrt N)/2\n");
    out.push_str("# inv_n = 1/N for comparison\n");
    out.push_str("n_total,zone_size,c_zone,inv_n\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.n_total,
            r.zone_size,
            r.concurrence,
            1.0 / r.n_total as f64
        );
    }
    out
}
