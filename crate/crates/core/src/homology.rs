//! Filtered homology of the fully blocked complex and the T function.
//!
//! The fully blocked complex of a size-`N` diagram of an `n`-component link is
//! filtered quasi-isomorphic to the simply blocked one tensored with
//! `W^{⊗(N-n)}`, where `W` has generators at `(d, s) = (0, 0)` and `(-1, -1)`.
//! The link-level `T` is therefore recovered from the raw one by peeling off
//! `N - n` factors of `W`.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error as ThisError;

use crate::complex::{boundary_matrices, enumerate_states, FilteredBoundary, GradedBasis};
use crate::exec::{map_slice, Execution};
use crate::gf2::{intersect_dim, LowReduction, Subspace};
use crate::grid::GridDiagram;
use crate::tfunction::TFunction;
use crate::{Error, Options};

#[derive(Debug, Clone, PartialEq, Eq, ThisError)]
pub enum HomologyError {
    #[error("filtered homology decreases from s={s} to s={} in grading {d}", s + 1)]
    NegativeDifference { d: i64, s: i64 },
    #[error("W-deconvolution failed: {0}")]
    DeconvolutionFailure(String),
    #[error("malformed link T function: {0}")]
    MalformedT(String),
}

/// `dim F^s H_d` for every grading `d` and every `s` in `[s_min, s_max]`;
/// below the range the dimension is 0 and above it the value at `s_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredHomology {
    s_min: i64,
    s_max: i64,
    dims: BTreeMap<i64, Vec<usize>>,
}

impl FilteredHomology {
    pub fn s_range(&self) -> (i64, i64) {
        (self.s_min, self.s_max)
    }

    pub fn dim(&self, d: i64, s: i64) -> usize {
        let Some(row) = self.dims.get(&d) else {
            return 0;
        };
        if s < self.s_min {
            0
        } else {
            row[((s - self.s_min) as usize).min(row.len() - 1)]
        }
    }

    /// `dim H_d`.
    pub fn total_dim(&self, d: i64) -> usize {
        self.dim(d, self.s_max)
    }

    pub fn gradings(&self) -> impl Iterator<Item = i64> + '_ {
        self.dims.keys().copied()
    }
}

fn s_bounds(basis: &GradedBasis) -> (i64, i64) {
    basis.alexander_range().unwrap_or((0, 0))
}

/// Filtered homology straight from its definition: for every level,
/// `Z_{d,s} = ker ∂_d ∩ F^s C_d`, `B_d = im ∂_{d+1}`, and
/// `dim F^s H_d = dim Z_{d,s} - dim(Z_{d,s} ∩ B_d)`.
pub fn filtered_homology_dims(
    boundary: &FilteredBoundary,
    basis: &GradedBasis,
) -> FilteredHomology {
    let (s_min, s_max) = s_bounds(basis);
    let mut dims = BTreeMap::new();
    for (d, states) in basis.gradings() {
        let n_d = states.len();
        let image = if basis.dim(d + 1) == 0 {
            Subspace::zero(n_d)
        } else {
            boundary.map(d + 1).image_basis()
        };
        let del = boundary.map(d);
        let row = (s_min..=s_max)
            .map(|s| {
                let p = basis.prefix(d, s);
                let cycles = del.column_prefix(p).kernel_basis().widen(n_d);
                cycles.dim() - intersect_dim(&cycles, &image).expect("same ambient")
            })
            .collect();
        dims.insert(d, row);
    }
    FilteredHomology { s_min, s_max, dims }
}

/// The same dimensions through a single left-to-right column reduction per
/// grading (the persistence algorithm). Columns of `∂_d` that reduce to zero
/// index a filtration-adapted basis of the cycles, and the pivots of the
/// reduced `∂_{d+1}` count `dim(B_d ∩ F^s C_d)`, which equals
/// `dim(Z_{d,s} ∩ B_d)` because boundaries are cycles.
pub fn filtered_homology_dims_reduced(
    boundary: &FilteredBoundary,
    basis: &GradedBasis,
    exec: Execution,
) -> FilteredHomology {
    let (s_min, s_max) = s_bounds(basis);
    let degrees: Vec<i64> = basis.gradings().map(|(d, _)| d).collect();
    let reductions: BTreeMap<i64, LowReduction> = map_slice(exec, &degrees, |&d| {
        (d, LowReduction::new(boundary.map(d).transpose()))
    })
    .into_iter()
    .collect();

    let mut dims = BTreeMap::new();
    for &d in &degrees {
        let cycles: Vec<usize> = reductions[&d]
            .lows
            .iter()
            .enumerate()
            .filter_map(|(j, low)| low.is_none().then_some(j))
            .collect();
        let mut boundaries: Vec<usize> = reductions
            .get(&(d + 1))
            .map(|r| r.lows.iter().flatten().copied().collect())
            .unwrap_or_default();
        boundaries.sort_unstable();
        let row = (s_min..=s_max)
            .map(|s| {
                let p = basis.prefix(d, s);
                cycles.partition_point(|&j| j < p) - boundaries.partition_point(|&j| j < p)
            })
            .collect();
        dims.insert(d, row);
    }
    FilteredHomology { s_min, s_max, dims }
}

/// Associated graded dimensions `dim F^s H_d - dim F^{s-1} H_d`.
pub fn t_tilde(dims: &FilteredHomology) -> Result<TFunction, HomologyError> {
    let (s_min, s_max) = dims.s_range();
    let mut t = TFunction::new();
    for d in dims.gradings() {
        for s in s_min..=s_max {
            let (hi, lo) = (dims.dim(d, s), dims.dim(d, s - 1));
            if hi < lo {
                return Err(HomologyError::NegativeDifference { d, s: s - 1 });
            }
            t.add(d, s, (hi - lo) as u64);
        }
    }
    Ok(t)
}

/// Removes one tensor factor of `W`: solves `g(d, s) = t(d, s) + t(d+1, s+1)`
/// for `t`, from the top Maslov grading down.
fn remove_w_factor(g: &TFunction) -> Result<TFunction, HomologyError> {
    let Some((lo, hi)) = g.maslov_range() else {
        return Ok(TFunction::new());
    };
    let mut t = TFunction::new();
    for d in (lo..=hi).rev() {
        let mut levels: BTreeSet<i64> = g.row(d).into_iter().map(|(s, _)| s).collect();
        levels.extend(t.row(d + 1).into_iter().map(|(s, _)| s - 1));
        for s in levels {
            let value = g.get(d, s) as i128 - t.get(d + 1, s + 1) as i128;
            if value < 0 {
                return Err(HomologyError::DeconvolutionFailure(format!(
                    "negative multiplicity {value} at (d, s) = ({d}, {s})"
                )));
            }
            t.set(d, s, value as u64);
        }
    }
    Ok(t)
}

/// Inverts `g = t ⊗ W^{⊗m}`.
pub fn deconvolve_w(g: &TFunction, m: usize) -> Result<TFunction, HomologyError> {
    let mut t = g.clone();
    for _ in 0..m {
        t = remove_w_factor(&t)?;
    }
    let scale = 1u128 << m;
    if t.mass() as u128 * scale != g.mass() as u128 {
        return Err(HomologyError::DeconvolutionFailure(format!(
            "mass {} is not {} / 2^{m}",
            t.mass(),
            g.mass()
        )));
    }
    Ok(t)
}

/// Checks the shape every link-level T satisfies: mass `2^{n-1}`, Maslov
/// support in `1-n..=0`, and singleton rows of value 1 at `d = 0` and
/// `d = 1-n`.
pub fn check_link_t(t: &TFunction, n: usize) -> Result<(), HomologyError> {
    let malformed = |msg: String| Err(HomologyError::MalformedT(msg));
    if n == 0 {
        return malformed("link must have at least one component".into());
    }
    let expected = 1u64 << (n - 1);
    if t.mass() != expected {
        return malformed(format!("total mass {} instead of {expected}", t.mass()));
    }
    let bottom = 1 - n as i64;
    if let Some(((d, s), _)) = t.iter().find(|((d, _), _)| *d > 0 || *d < bottom) {
        return malformed(format!("entry at (d, s) = ({d}, {s}) outside 1-n..=0"));
    }
    for d in [0, bottom] {
        let row = t.row(d);
        if row.len() != 1 || row[0].1 != 1 {
            return malformed(format!("row d={d} is {row:?}, expected a single 1"));
        }
    }
    Ok(())
}

/// Everything the pipeline produces for one diagram.
#[derive(Debug, Clone)]
pub struct Computation {
    pub basis: GradedBasis,
    pub boundary: FilteredBoundary,
    pub homology: FilteredHomology,
    pub tilde: TFunction,
    pub t: TFunction,
}

impl Computation {
    pub fn run(d: &GridDiagram, opts: &Options) -> Result<Self, Error> {
        let basis = enumerate_states(d, opts.max_grid, opts.execution)?;
        let boundary = boundary_matrices(d, &basis, opts.execution);
        let homology = filtered_homology_dims_reduced(&boundary, &basis, opts.execution);
        let tilde = t_tilde(&homology)?;
        let n = d.component_count();
        let t = deconvolve_w(&tilde, d.size() - n)?.with_components(n);
        check_link_t(&t, n)?;
        Ok(Self {
            basis,
            boundary,
            homology,
            tilde,
            t,
        })
    }
}

/// `T_L` for the link presented by `d`.
pub fn compute_t(d: &GridDiagram, opts: &Options) -> Result<TFunction, Error> {
    Computation::run(d, opts).map(|c| c.t)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauReport {
    pub tau: i64,
    pub tau_star: i64,
    /// Alexander levels of the support, with multiplicity, ascending.
    pub tau_set: Vec<i64>,
}

pub fn tau_report(t: &TFunction) -> Result<TauReport, HomologyError> {
    let n = t
        .components()
        .ok_or_else(|| HomologyError::MalformedT("component count missing".into()))?;
    check_link_t(t, n)?;
    let tau = t.row(0)[0].0;
    let tau_star = t.row(1 - n as i64)[0].0;
    let mut tau_set: Vec<i64> = t
        .iter()
        .flat_map(|((_, s), v)| std::iter::repeat_n(s, v as usize))
        .collect();
    tau_set.sort_unstable();
    Ok(TauReport {
        tau,
        tau_star,
        tau_set,
    })
}
