//! The fully blocked filtered grid complex.
//!
//! Generators are all `N!` grid states, split by Maslov grading and ordered
//! inside each grading by Alexander grading then lexicographically, so that
//! every filtration level is a prefix of the basis. The differential counts
//! empty rectangles containing no O-marking at all.

use std::collections::BTreeMap;

use serde_json::{json, Value};
use thiserror::Error;

use crate::exec::{map_range, map_slice, Execution};
use crate::gf2::BitMatrix;
use crate::grading::{Grader, GradingError, GridState};
use crate::grid::GridDiagram;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("grid size {size} exceeds the configured cap of {cap}")]
    GridTooLarge { size: usize, cap: usize },
    #[error(transparent)]
    Grading(#[from] GradingError),
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Lexicographic rank of a permutation of `0..n`.
pub fn permutation_rank(perm: &[u8]) -> usize {
    let n = perm.len();
    let mut rank = 0;
    for i in 0..n {
        let smaller = perm[i + 1..].iter().filter(|&&v| v < perm[i]).count();
        rank = rank * (n - i) + smaller;
    }
    rank
}

/// Inverse of [`permutation_rank`].
pub fn permutation_unrank(n: usize, mut rank: usize) -> Vec<u8> {
    let mut digits = vec![0; n];
    for i in (0..n).rev() {
        let base = n - i;
        digits[i] = rank % base;
        rank /= base;
    }
    let mut pool: Vec<u8> = (0..n as u8).collect();
    digits.into_iter().map(|k| pool.remove(k)).collect()
}

/// Grid states split by Maslov grading.
#[derive(Debug, Clone)]
pub struct GradedBasis {
    size: usize,
    gradings: BTreeMap<i64, Vec<GridState>>,
    /// Permutation rank -> (Maslov grading, index inside that grading).
    locate: Vec<(i32, u32)>,
}

impl GradedBasis {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn gradings(&self) -> impl Iterator<Item = (i64, &[GridState])> {
        self.gradings.iter().map(|(&d, v)| (d, v.as_slice()))
    }

    pub fn maslov_range(&self) -> Option<(i64, i64)> {
        Some((
            *self.gradings.keys().next()?,
            *self.gradings.keys().next_back()?,
        ))
    }

    pub fn states(&self, d: i64) -> &[GridState] {
        self.gradings.get(&d).map_or(&[], Vec::as_slice)
    }

    pub fn dim(&self, d: i64) -> usize {
        self.states(d).len()
    }

    pub fn total(&self) -> usize {
        self.gradings.values().map(Vec::len).sum()
    }

    /// Number of states in grading `d` with Alexander grading at most `s`.
    pub fn prefix(&self, d: i64, s: i64) -> usize {
        self.states(d).partition_point(|x| x.alexander() <= s)
    }

    pub fn alexander_range(&self) -> Option<(i64, i64)> {
        let mut it = self.gradings.values().flatten().map(GridState::alexander);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), a| (lo.min(a), hi.max(a))))
    }

    /// Where a permutation lives: its Maslov grading and basis index.
    pub fn locate(&self, perm: &[u8]) -> (i64, usize) {
        let (d, i) = self.locate[permutation_rank(perm)];
        (d as i64, i as usize)
    }
}

/// Enumerates and grades all `N!` states of `d`.
pub fn enumerate_states(
    d: &GridDiagram,
    max_grid: usize,
    exec: Execution,
) -> Result<GradedBasis, ComplexError> {
    let n = d.size();
    if n > max_grid {
        return Err(ComplexError::GridTooLarge {
            size: n,
            cap: max_grid,
        });
    }
    let grader = Grader::new(d);
    let total = factorial(n);
    let states = map_range(exec, total, |rank| {
        GridState::new(&grader, permutation_unrank(n, rank))
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;

    let mut gradings: BTreeMap<i64, Vec<GridState>> = BTreeMap::new();
    for s in states {
        gradings.entry(s.maslov()).or_default().push(s);
    }
    let mut locate = vec![(0i32, 0u32); total];
    for (&m, list) in gradings.iter_mut() {
        // Stable: ties in A keep the lexicographic enumeration order.
        list.sort_by_key(GridState::alexander);
        for (i, s) in list.iter().enumerate() {
            locate[permutation_rank(s.perm())] = (m as i32, i as u32);
        }
    }
    Ok(GradedBasis {
        size: n,
        gradings,
        locate,
    })
}

/// A rectangle on the grid torus from a state `x` to a state `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rectangle {
    pub target: Vec<u8>,
    /// Lower-left lattice corner and extent, all taken mod `N`.
    pub left: usize,
    pub bottom: usize,
    pub width: usize,
    pub height: usize,
    pub o_count: usize,
    pub x_count: usize,
    /// Points of `x` strictly inside the rectangle.
    pub interior_points: usize,
}

/// Rectangle with empty interior, as counted by the differential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RectangleDatum {
    pub target: Vec<u8>,
    pub o_count: usize,
    pub x_count: usize,
}

struct Span {
    n: usize,
    start: usize,
    len: usize,
}

impl Span {
    fn offset(&self, v: usize) -> usize {
        (v + self.n - self.start) % self.n
    }

    fn covers_cell(&self, v: usize) -> bool {
        self.offset(v) < self.len
    }

    fn covers_interior(&self, v: usize) -> bool {
        let k = self.offset(v);
        k > 0 && k < self.len
    }
}

fn measure(d: &GridDiagram, perm: &[u8], cols: &Span, rows: &Span) -> (usize, usize, usize) {
    let mut o_count = 0;
    let mut x_count = 0;
    let mut interior = 0;
    for k in 0..cols.len {
        let c = (cols.start + k) % cols.n;
        o_count += rows.covers_cell(d.o()[c]) as usize;
        x_count += rows.covers_cell(d.x()[c]) as usize;
        if k > 0 {
            interior += rows.covers_interior(perm[c] as usize) as usize;
        }
    }
    (o_count, x_count, interior)
}

/// Calls `f(i, j, rectangle geometry and counts)` for both rectangles of
/// every pair of columns `i < j`.
fn for_each_rectangle(
    d: &GridDiagram,
    perm: &[u8],
    mut f: impl FnMut(usize, usize, &Span, &Span, (usize, usize, usize)),
) {
    let n = d.size();
    for i in 0..n {
        for j in i + 1..n {
            let (ri, rj) = (perm[i] as usize, perm[j] as usize);
            let h = (rj + n - ri) % n;
            let sides = [
                (
                    Span {
                        n,
                        start: i,
                        len: j - i,
                    },
                    Span {
                        n,
                        start: ri,
                        len: h,
                    },
                ),
                (
                    Span {
                        n,
                        start: j,
                        len: n - (j - i),
                    },
                    Span {
                        n,
                        start: rj,
                        len: n - h,
                    },
                ),
            ];
            for (cols, rows) in &sides {
                let counts = measure(d, perm, cols, rows);
                f(i, j, cols, rows, counts);
            }
        }
    }
}

/// All rectangles out of `x`, empty or not.
pub fn rectangles(d: &GridDiagram, x: &GridState) -> Vec<Rectangle> {
    let mut out = Vec::new();
    for_each_rectangle(d, x.perm(), |i, j, cols, rows, (o, xc, interior)| {
        let mut target = x.perm().to_vec();
        target.swap(i, j);
        out.push(Rectangle {
            target,
            left: cols.start,
            bottom: rows.start,
            width: cols.len,
            height: rows.len,
            o_count: o,
            x_count: xc,
            interior_points: interior,
        });
    });
    out
}

pub fn empty_rectangles(d: &GridDiagram, x: &GridState) -> Vec<RectangleDatum> {
    rectangles(d, x)
        .into_iter()
        .filter(|r| r.interior_points == 0)
        .map(|r| RectangleDatum {
            target: r.target,
            o_count: r.o_count,
            x_count: r.x_count,
        })
        .collect()
}

/// The differential `∂_d : C_d → C_{d-1}` for every grading `d`, as a
/// `dim C_{d-1} × dim C_d` matrix (column `j` is the boundary of state `j`).
#[derive(Debug, Clone)]
pub struct FilteredBoundary {
    maps: BTreeMap<i64, BitMatrix>,
}

impl FilteredBoundary {
    /// `∂_d`; an empty matrix of the right shape when `d` carries no states.
    pub fn map(&self, d: i64) -> &BitMatrix {
        static EMPTY: std::sync::OnceLock<BitMatrix> = std::sync::OnceLock::new();
        self.maps
            .get(&d)
            .unwrap_or_else(|| EMPTY.get_or_init(|| BitMatrix::zeros(0, 0)))
    }

    pub fn gradings(&self) -> impl Iterator<Item = (i64, &BitMatrix)> {
        self.maps.iter().map(|(&d, m)| (d, m))
    }
}

/// Assembles the fully blocked differential, one grading per task.
pub fn boundary_matrices(
    d: &GridDiagram,
    basis: &GradedBasis,
    exec: Execution,
) -> FilteredBoundary {
    let degrees: Vec<i64> = basis.gradings.keys().copied().collect();
    let maps = map_slice(exec, &degrees, |&m| {
        let sources = basis.states(m);
        let mut mat = BitMatrix::zeros(basis.dim(m - 1), sources.len());
        let mut target = Vec::with_capacity(d.size());
        for (col, x) in sources.iter().enumerate() {
            for_each_rectangle(d, x.perm(), |i, j, _, _, (o, _, interior)| {
                if o == 0 && interior == 0 {
                    target.clear();
                    target.extend_from_slice(x.perm());
                    target.swap(i, j);
                    let (tm, row) = basis.locate(&target);
                    debug_assert_eq!(tm, m - 1, "differential must drop M by one");
                    mat.flip(row, col);
                }
            });
        }
        (m, mat)
    });
    FilteredBoundary {
        maps: maps.into_iter().collect(),
    }
}

/// Debug view of a complex: states with gradings and the nonzero boundary
/// entries of every grading.
pub fn complex_dump(basis: &GradedBasis, boundary: &FilteredBoundary) -> Value {
    let gradings: Vec<Value> = basis
        .gradings()
        .map(|(m, states)| {
            let mat = boundary.map(m);
            let mut entries = Vec::new();
            for row in 0..mat.rows() {
                for col in 0..mat.cols() {
                    if mat.get(row, col) {
                        entries.push(json!([col, row]));
                    }
                }
            }
            json!({
                "maslov": m,
                "states": states
                    .iter()
                    .map(|s| json!({"perm": s.perm(), "M": s.maslov(), "A": s.alexander()}))
                    .collect::<Vec<_>>(),
                "boundary": entries,
            })
        })
        .collect();
    json!({ "size": basis.size(), "gradings": gradings })
}
