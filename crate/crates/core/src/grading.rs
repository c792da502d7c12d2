//! Maslov and Alexander gradings of grid states.
//!
//! All planar points use doubled coordinates: a state point on the lattice
//! corner `(c, r)` is `(2c, 2r)` and the marking in cell `(c, r)` sits at its
//! centre `(2c + 1, 2r + 1)`. Dominance counts are then plain integer
//! comparisons.

use std::fmt;
use std::ops::Add;

use thiserror::Error;

use crate::grid::GridDiagram;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradingError {
    #[error("Alexander grading of state {perm:?} is not an integer (2A = {twice})")]
    NonIntegerAlexander { perm: Vec<u8>, twice: i64 },
    #[error("diagram O-markings are not on the anti-diagonal")]
    NotDiagonalDiagram,
    #[error("state has {found} points but the grid has size {expected}")]
    SizeMismatch { expected: usize, found: usize },
}

/// A point in doubled coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlanarPoint {
    pub x: i64,
    pub y: i64,
}

impl PlanarPoint {
    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    /// Lattice corner `(c, r)` of the grid.
    pub fn corner(c: usize, r: usize) -> Self {
        Self::new(2 * c as i64, 2 * r as i64)
    }

    /// Centre of the cell `(c, r)`.
    pub fn centre(c: usize, r: usize) -> Self {
        Self::new(2 * c as i64 + 1, 2 * r as i64 + 1)
    }

    fn dominated_by(self, other: Self) -> bool {
        other.x > self.x && other.y > self.y
    }
}

/// Signed count of pairs `(a, b)` with `b` strictly north-east of `a`,
/// extended bilinearly over formal differences of points.
pub fn dominance_count(p: &[(PlanarPoint, i64)], q: &[(PlanarPoint, i64)]) -> i64 {
    p.iter()
        .map(|&(a, sa)| {
            q.iter()
                .filter(|&&(b, _)| a.dominated_by(b))
                .map(|&(_, sb)| sa * sb)
                .sum::<i64>()
        })
        .sum()
}

fn count(p: &[PlanarPoint], q: &[PlanarPoint]) -> i64 {
    let mut total = 0;
    for &a in p {
        for &b in q {
            if a.dominated_by(b) {
                total += 1;
            }
        }
    }
    total
}

/// An exact value in `½ℤ`, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInteger {
    twice: i64,
}

impl HalfInteger {
    pub const fn from_twice(twice: i64) -> Self {
        Self { twice }
    }

    pub const fn from_int(v: i64) -> Self {
        Self { twice: 2 * v }
    }

    pub const fn twice(self) -> i64 {
        self.twice
    }

    pub fn to_integer(self) -> Option<i64> {
        (self.twice % 2 == 0).then_some(self.twice / 2)
    }
}

impl Add for HalfInteger {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_twice(self.twice + rhs.twice)
    }
}

impl std::iter::Sum for HalfInteger {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::default(), Add::add)
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_integer() {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "{}/2", self.twice),
        }
    }
}

/// Marking geometry of a diagram, precomputed once for grading many states.
#[derive(Debug, Clone)]
pub struct Grader {
    size: usize,
    components: usize,
    o: Vec<PlanarPoint>,
    x: Vec<PlanarPoint>,
    oo: i64,
    xx: i64,
}

impl Grader {
    pub fn new(d: &GridDiagram) -> Self {
        let n = d.size();
        let o: Vec<_> = (0..n).map(|c| PlanarPoint::centre(c, d.o()[c])).collect();
        let x: Vec<_> = (0..n).map(|c| PlanarPoint::centre(c, d.x()[c])).collect();
        Self {
            size: n,
            components: d.component_count(),
            oo: count(&o, &o),
            xx: count(&x, &x),
            o,
            x,
        }
    }

    fn points(&self, perm: &[u8]) -> Vec<PlanarPoint> {
        perm.iter()
            .enumerate()
            .map(|(c, &r)| PlanarPoint::corner(c, r as usize))
            .collect()
    }

    fn maslov_against(&self, pts: &[PlanarPoint], marks: &[PlanarPoint], mm: i64) -> i64 {
        count(pts, pts) - count(pts, marks) - count(marks, pts) + mm + 1
    }

    /// `M_O(x) = J(x - O, x - O) + 1`.
    pub fn maslov(&self, perm: &[u8]) -> i64 {
        let pts = self.points(perm);
        self.maslov_against(&pts, &self.o, self.oo)
    }

    /// The same grading with the X-markings in place of the O's.
    pub fn maslov_x(&self, perm: &[u8]) -> i64 {
        let pts = self.points(perm);
        self.maslov_against(&pts, &self.x, self.xx)
    }

    /// Maslov and Alexander gradings together.
    pub fn gradings(&self, perm: &[u8]) -> Result<(i64, i64), GradingError> {
        if perm.len() != self.size {
            return Err(GradingError::SizeMismatch {
                expected: self.size,
                found: perm.len(),
            });
        }
        let pts = self.points(perm);
        let m_o = self.maslov_against(&pts, &self.o, self.oo);
        let m_x = self.maslov_against(&pts, &self.x, self.xx);
        let twice = m_o - m_x - (self.size as i64 - self.components as i64);
        if twice % 2 != 0 {
            return Err(GradingError::NonIntegerAlexander {
                perm: perm.to_vec(),
                twice,
            });
        }
        Ok((m_o, twice / 2))
    }
}

/// A grid state: column `c` carries the point on row `perm[c]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GridState {
    perm: Box<[u8]>,
    maslov: i64,
    alexander: i64,
}

impl fmt::Debug for GridState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GridState({:?}, M={}, A={})",
            self.perm, self.maslov, self.alexander
        )
    }
}

impl GridState {
    pub fn new(grader: &Grader, perm: impl Into<Box<[u8]>>) -> Result<Self, GradingError> {
        let perm = perm.into();
        let (maslov, alexander) = grader.gradings(&perm)?;
        Ok(Self {
            perm,
            maslov,
            alexander,
        })
    }

    pub fn from_rows(d: &GridDiagram, rows: &[usize]) -> Result<Self, GradingError> {
        let perm: Vec<u8> = rows.iter().map(|&r| r as u8).collect();
        Self::new(&Grader::new(d), perm)
    }

    pub fn perm(&self) -> &[u8] {
        &self.perm
    }

    pub fn maslov(&self) -> i64 {
        self.maslov
    }

    pub fn alexander(&self) -> i64 {
        self.alexander
    }
}

pub fn maslov(d: &GridDiagram, x: &GridState) -> i64 {
    Grader::new(d).maslov(x.perm())
}

pub fn alexander(d: &GridDiagram, x: &GridState) -> Result<i64, GradingError> {
    Grader::new(d).gradings(x.perm()).map(|(_, a)| a)
}

/// Alexander grading of component `i`:
/// `A_i(x) = J(x - (X + O)/2, X_i - O_i) - (grd_i - 1)/2`, where `J` is the
/// symmetrized dominance pairing `(I(P,Q) + I(Q,P)) / 2`.
pub fn alexander_component(d: &GridDiagram, x: &GridState, i: usize) -> HalfInteger {
    let n = d.size();
    let parts = d.components();
    let cols = &parts.cycles[i];
    let pts: Vec<(PlanarPoint, i64)> = x
        .perm()
        .iter()
        .enumerate()
        .map(|(c, &r)| (PlanarPoint::corner(c, r as usize), 1))
        .collect();
    let marks: Vec<(PlanarPoint, i64)> = (0..n)
        .flat_map(|c| {
            [
                (PlanarPoint::centre(c, d.x()[c]), 1),
                (PlanarPoint::centre(c, d.o()[c]), 1),
            ]
        })
        .collect();
    let comp: Vec<(PlanarPoint, i64)> = cols
        .iter()
        .flat_map(|&c| {
            [
                (PlanarPoint::centre(c, d.x()[c]), 1),
                (PlanarPoint::centre(c, d.o()[c]), -1),
            ]
        })
        .collect();
    let sym = |p: &[(PlanarPoint, i64)], q: &[(PlanarPoint, i64)]| {
        dominance_count(p, q) + dominance_count(q, p)
    };
    // 4 * A_i = 2 * sym(x, comp) - sym(X + O, comp) - 2 * (grd_i - 1)
    let quad = 2 * sym(&pts, &comp) - sym(&marks, &comp) - 2 * (cols.len() as i64 - 1);
    debug_assert!(quad % 2 == 0, "A_{i} must lie in ½ℤ");
    HalfInteger::from_twice(quad / 2)
}

/// Sign selecting the north-east (`Plus`) or south-west (`Minus`) corners of
/// the X-marked cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CornerSign {
    Plus,
    Minus,
}

/// The state through the NE (resp. SW) corner of every X-marked cell.
pub fn x_pm(d: &GridDiagram, sign: CornerSign) -> GridState {
    let n = d.size();
    let mut rows = vec![0; n];
    for c in 0..n {
        match sign {
            CornerSign::Plus => rows[(c + 1) % n] = (d.x()[c] + 1) % n,
            CornerSign::Minus => rows[c] = d.x()[c],
        }
    }
    GridState::from_rows(d, &rows).expect("corner state of a valid diagram")
}

/// For diagrams with anti-diagonal O's: the state through the lower-left
/// corner of every O-marked cell, i.e. `perm(0) = 0`, `perm(c) = N - c`.
pub fn diagonal_state(d: &GridDiagram) -> Result<GridState, GradingError> {
    if !d.has_antidiagonal_o() {
        return Err(GradingError::NotDiagonalDiagram);
    }
    let n = d.size();
    let rows: Vec<usize> = (0..n).map(|c| (n - c) % n).collect();
    GridState::from_rows(d, &rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(i64, i64)]) -> Vec<(PlanarPoint, i64)> {
        v.iter()
            .map(|&(x, y)| (PlanarPoint::new(x, y), 1))
            .collect()
    }

    #[test]
    fn dominance_examples() {
        assert_eq!(dominance_count(&pts(&[(0, 0)]), &pts(&[(1, 1)])), 1);
        let chain = pts(&[(0, 0), (1, 1), (2, 2)]);
        assert_eq!(dominance_count(&chain, &chain), 3);

        // x - O for the non-diagonal state of the 2x2 unknot D(1,1).
        let diff = vec![
            (PlanarPoint::corner(0, 1), 1),
            (PlanarPoint::corner(1, 0), 1),
            (PlanarPoint::centre(0, 1), -1),
            (PlanarPoint::centre(1, 0), -1),
        ];
        assert_eq!(dominance_count(&diff, &diff), -2);
    }

    #[test]
    fn unknot_gradings() {
        let u = GridDiagram::unknot();
        let s = GridState::from_rows(&u, &[0]).unwrap();
        assert_eq!((s.maslov(), s.alexander()), (0, 0));
        assert_eq!(alexander_component(&u, &s, 0), HalfInteger::from_int(0));

        let u2 = GridDiagram::torus(1, 1).unwrap();
        let y = GridState::from_rows(&u2, &[1, 0]).unwrap();
        assert_eq!(y.maslov(), -1);
        let x = GridState::from_rows(&u2, &[0, 1]).unwrap();
        assert_eq!(x.maslov(), 0);
    }

    #[test]
    fn diagonal_state_alexander_matches_torus_formula() {
        for (q, p, a) in [(2, 3, 1), (3, 4, 3), (2, 2, 1)] {
            let d = GridDiagram::torus(q, p).unwrap();
            let x = diagonal_state(&d).unwrap();
            assert_eq!(x.maslov(), 0, "T({q},{p})");
            assert_eq!(x.alexander(), a, "T({q},{p})");
        }
        let u2 = GridDiagram::torus(1, 1).unwrap();
        assert_eq!(diagonal_state(&u2).unwrap().perm(), &[0, 1]);
        assert_eq!(
            diagonal_state(&GridDiagram::unlink(2).unwrap()),
            Err(GradingError::NotDiagonalDiagram)
        );
    }

    #[test]
    fn knot_component_grading_equals_alexander() {
        let d = GridDiagram::torus(2, 3).unwrap();
        let x = diagonal_state(&d).unwrap();
        assert_eq!(alexander_component(&d, &x, 0), HalfInteger::from_int(1));
    }

    #[test]
    fn hopf_component_gradings_sum_to_alexander() {
        let d = GridDiagram::torus(2, 2).unwrap();
        let xp = x_pm(&d, CornerSign::Plus);
        let total: HalfInteger = (0..2).map(|i| alexander_component(&d, &xp, i)).sum();
        assert_eq!(total, HalfInteger::from_int(xp.alexander()));
    }

    #[test]
    fn corner_states() {
        let u = GridDiagram::unknot();
        assert_eq!(x_pm(&u, CornerSign::Plus).perm(), &[0]);
        assert_eq!(x_pm(&u, CornerSign::Minus).perm(), &[0]);
        let u2 = GridDiagram::torus(1, 1).unwrap();
        for sign in [CornerSign::Plus, CornerSign::Minus] {
            let s = x_pm(&u2, sign);
            assert_eq!(s.perm(), &[0, 1]);
            assert_eq!(s.maslov(), 0);
        }
    }

    #[test]
    fn half_integer_display() {
        assert_eq!(HalfInteger::from_twice(3).to_string(), "3/2");
        assert_eq!(HalfInteger::from_twice(-4).to_string(), "-2");
        assert_eq!(HalfInteger::from_twice(-3).to_integer(), None);
    }
}
