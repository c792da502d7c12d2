//! Toroidal grid diagrams and the moves and combinators acting on them.
//!
//! A diagram of size `N` is stored column-wise: `o[c]` and `x[c]` are the
//! rows of the O- and X-marking in column `c`, with row 0 at the bottom.
//! Each column and each row carries exactly one marking of each kind; a cell
//! may hold both an O and an X.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("grid diagram must have at least one column")]
    EmptyGrid,
    #[error("{which} array has length {found}, expected {expected}")]
    LengthMismatch {
        which: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{which} markings are not a permutation of 0..{size}")]
    NotAPermutation { which: &'static str, size: usize },
    #[error("special O-markings must pick exactly one column per component: {0}")]
    SpecialNotOnePerComponent(String),
    #[error("connected sum produced {found} components, expected {expected}")]
    ComponentCountMismatch { expected: usize, found: usize },
    #[error("illegal move {kind}: {reason}")]
    IllegalMove { kind: &'static str, reason: String },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}

/// The JSON shape of a diagram file. Arrays are column-indexed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawDiagram {
    pub size: usize,
    #[serde(rename = "O")]
    pub o: Vec<usize>,
    #[serde(rename = "X")]
    pub x: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub special: Option<Vec<usize>>,
}

/// Cycle decomposition of the columns into link components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentPartition {
    /// Columns on each component, each list sorted ascending; components are
    /// ordered by their smallest column.
    pub cycles: Vec<Vec<usize>>,
}

impl ComponentPartition {
    pub fn count(&self) -> usize {
        self.cycles.len()
    }

    /// Number of markings of each kind on component `i`.
    pub fn grid_number(&self, i: usize) -> usize {
        self.cycles[i].len()
    }

    /// Component index of every column.
    pub fn labels(&self, size: usize) -> Vec<usize> {
        let mut labels = vec![0; size];
        for (i, cycle) in self.cycles.iter().enumerate() {
            for &c in cycle {
                labels[c] = i;
            }
        }
        labels
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GridDiagram {
    o: Vec<usize>,
    x: Vec<usize>,
    special: Vec<usize>,
    components: usize,
}

impl fmt::Debug for GridDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GridDiagram(O={:?}, X={:?})", self.o, self.x)
    }
}

fn check_permutation(values: &[usize], which: &'static str) -> Result<(), GridError> {
    let size = values.len();
    let mut seen = vec![false; size];
    for &v in values {
        if v >= size || seen[v] {
            return Err(GridError::NotAPermutation { which, size });
        }
        seen[v] = true;
    }
    Ok(())
}

fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

fn cycles_of(o: &[usize], x: &[usize]) -> Vec<Vec<usize>> {
    // Column c carries a vertical strand ending at the O in row o[c]; that
    // row's X sits in column x^{-1}(o[c]), where the strand continues.
    let x_inv = invert(x);
    let size = o.len();
    let mut visited = vec![false; size];
    let mut cycles = Vec::new();
    for start in 0..size {
        if visited[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut c = start;
        while !visited[c] {
            visited[c] = true;
            cycle.push(c);
            c = x_inv[o[c]];
        }
        cycle.sort_unstable();
        cycles.push(cycle);
    }
    cycles
}

impl GridDiagram {
    /// Builds a diagram from its O and X permutations, choosing the smallest
    /// column of each component as its special O-marking.
    pub fn new(o: Vec<usize>, x: Vec<usize>) -> Result<Self, GridError> {
        Self::with_special(o, x, None)
    }

    pub fn with_special(
        o: Vec<usize>,
        x: Vec<usize>,
        special: Option<Vec<usize>>,
    ) -> Result<Self, GridError> {
        if o.is_empty() {
            return Err(GridError::EmptyGrid);
        }
        if x.len() != o.len() {
            return Err(GridError::LengthMismatch {
                which: "X",
                expected: o.len(),
                found: x.len(),
            });
        }
        check_permutation(&o, "O")?;
        check_permutation(&x, "X")?;
        let cycles = cycles_of(&o, &x);
        let special = match special {
            None => cycles.iter().map(|c| c[0]).collect(),
            Some(mut cols) => {
                cols.sort_unstable();
                let mut hits = vec![0usize; cycles.len()];
                for &col in &cols {
                    let Some(i) = cycles.iter().position(|cy| cy.contains(&col)) else {
                        return Err(GridError::SpecialNotOnePerComponent(format!(
                            "column {col} is outside the grid"
                        )));
                    };
                    hits[i] += 1;
                }
                if let Some(i) = hits.iter().position(|&h| h != 1) {
                    return Err(GridError::SpecialNotOnePerComponent(format!(
                        "component {i} (columns {:?}) has {} special markings",
                        cycles[i], hits[i]
                    )));
                }
                cols
            }
        };
        Ok(Self {
            components: cycles.len(),
            o,
            x,
            special,
        })
    }

    /// Validates a raw (usually deserialized) diagram.
    pub fn validate(raw: RawDiagram) -> Result<Self, GridError> {
        if raw.size == 0 {
            return Err(GridError::EmptyGrid);
        }
        for (which, arr) in [("O", &raw.o), ("X", &raw.x)] {
            if arr.len() != raw.size {
                return Err(GridError::LengthMismatch {
                    which,
                    expected: raw.size,
                    found: arr.len(),
                });
            }
        }
        Self::with_special(raw.o, raw.x, raw.special)
    }

    pub fn to_raw(&self) -> RawDiagram {
        RawDiagram {
            size: self.size(),
            o: self.o.clone(),
            x: self.x.clone(),
            special: Some(self.special.clone()),
        }
    }

    pub fn size(&self) -> usize {
        self.o.len()
    }

    /// Row of the O-marking in each column.
    pub fn o(&self) -> &[usize] {
        &self.o
    }

    /// Row of the X-marking in each column.
    pub fn x(&self) -> &[usize] {
        &self.x
    }

    pub fn special(&self) -> &[usize] {
        &self.special
    }

    pub fn component_count(&self) -> usize {
        self.components
    }

    pub fn components(&self) -> ComponentPartition {
        ComponentPartition {
            cycles: cycles_of(&self.o, &self.x),
        }
    }

    /// True when every O sits on the anti-diagonal, `o[c] = N - 1 - c`.
    pub fn has_antidiagonal_o(&self) -> bool {
        let n = self.size();
        self.o.iter().enumerate().all(|(c, &r)| r == n - 1 - c)
    }

    /// Reflection through a horizontal axis; presents the mirror link.
    pub fn mirror(&self) -> Self {
        let n = self.size();
        let flip = |v: &[usize]| v.iter().map(|&r| n - 1 - r).collect::<Vec<_>>();
        Self::new(flip(&self.o), flip(&self.x)).expect("mirror of a valid diagram")
    }

    /// Reflection across the top-left to bottom-right diagonal; presents the
    /// link with all orientations reversed.
    pub fn reverse(&self) -> Self {
        let n = self.size();
        let anti = |v: &[usize]| {
            let inv = invert(v);
            (0..n).map(|c| n - 1 - inv[n - 1 - c]).collect::<Vec<_>>()
        };
        Self::new(anti(&self.o), anti(&self.x)).expect("reverse of a valid diagram")
    }

    /// Block-diagonal placement: `self` in the lower-left block, `other`
    /// in the upper-right one.
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let shift = self.size();
        let glue = |a: &[usize], b: &[usize]| {
            a.iter()
                .copied()
                .chain(b.iter().map(|&r| r + shift))
                .collect::<Vec<_>>()
        };
        Self::new(glue(&self.o, &other.o), glue(&self.x, &other.x))
            .expect("union of valid diagrams")
    }

    /// Toroidal translation by `dc` columns to the right and `dr` rows up.
    pub fn translate(&self, dc: usize, dr: usize) -> Self {
        let n = self.size();
        let mut o = vec![0; n];
        let mut x = vec![0; n];
        for c in 0..n {
            o[(c + dc) % n] = (self.o[c] + dr) % n;
            x[(c + dc) % n] = (self.x[c] + dr) % n;
        }
        Self::new(o, x).expect("translate of a valid diagram")
    }

    /// Connected sum joining the component through column 0 of `self` with
    /// the component through column 0 of `other`.
    ///
    /// Both diagrams are translated so that the chosen X-markings land in the
    /// top-right cell of `self` and the bottom-left cell of `other`; after the
    /// block-diagonal union the two X's are exchanged inside the 2x2 square at
    /// the block corner, which is a band move between the two components.
    pub fn connect_sum(&self, other: &Self) -> Result<Self, GridError> {
        let n1 = self.size();
        let n2 = other.size();
        let left = self.translate(n1 - 1, n1 - 1 - self.x[0]);
        let right = other.translate(0, (n2 - other.x[0]) % n2);
        debug_assert_eq!(left.x[n1 - 1], n1 - 1);
        debug_assert_eq!(right.x[0], 0);
        let union = left.disjoint_union(&right);
        let mut x = union.x.clone();
        x.swap(n1 - 1, n1);
        let joined = Self::new(union.o.clone(), x)?;
        let expected = self.component_count() + other.component_count() - 1;
        if joined.component_count() != expected {
            return Err(GridError::ComponentCountMismatch {
                expected,
                found: joined.component_count(),
            });
        }
        Ok(joined)
    }

    /// The diagram of the torus link `T(q, p)` with anti-diagonal O's.
    pub fn torus(q: usize, p: usize) -> Result<Self, GridError> {
        if q == 0 || p < q {
            return Err(GridError::InvalidParameters(format!(
                "torus link needs 1 <= q <= p, got q={q}, p={p}"
            )));
        }
        let n = p + q;
        let o = (0..n).map(|c| n - 1 - c).collect();
        let x = (0..n).map(|c| (q + n - 1 - c) % n).collect();
        Self::new(o, x)
    }

    /// The `n`-component unlink as `n` doubly-marked cells on the diagonal.
    pub fn unlink(n: usize) -> Result<Self, GridError> {
        let id: Vec<usize> = (0..n).collect();
        Self::new(id.clone(), id)
    }

    pub fn unknot() -> Self {
        Self::new(vec![0], vec![0]).expect("1x1 diagram")
    }

    pub fn apply_move(&self, m: &GridMove) -> Result<Self, GridError> {
        match *m {
            GridMove::Translate { dc, dr } => {
                Ok(self.translate(dc % self.size(), dr % self.size()))
            }
            GridMove::CommuteColumns { column } => self.commute_columns(column),
            GridMove::CommuteRows { row } => self.commute_rows(row),
            GridMove::Stabilize { column, row } => self.stabilize(column, row),
            GridMove::Destabilize { column, row } => self.destabilize(column, row),
        }
    }

    fn commute_columns(&self, c: usize) -> Result<Self, GridError> {
        let n = self.size();
        if n < 2 || c >= n {
            return Err(GridError::IllegalMove {
                kind: "column commutation",
                reason: format!("column {c} out of range for size {n}"),
            });
        }
        let d = (c + 1) % n;
        check_unlinked([self.o[c], self.x[c]], [self.o[d], self.x[d]]).map_err(|reason| {
            GridError::IllegalMove {
                kind: "column commutation",
                reason: format!("columns {c} and {d}: {reason}"),
            }
        })?;
        let mut o = self.o.clone();
        let mut x = self.x.clone();
        o.swap(c, d);
        x.swap(c, d);
        Self::new(o, x)
    }

    fn commute_rows(&self, r: usize) -> Result<Self, GridError> {
        let n = self.size();
        if n < 2 || r >= n {
            return Err(GridError::IllegalMove {
                kind: "row commutation",
                reason: format!("row {r} out of range for size {n}"),
            });
        }
        let s = (r + 1) % n;
        let o_inv = invert(&self.o);
        let x_inv = invert(&self.x);
        check_unlinked([o_inv[r], x_inv[r]], [o_inv[s], x_inv[s]]).map_err(|reason| {
            GridError::IllegalMove {
                kind: "row commutation",
                reason: format!("rows {r} and {s}: {reason}"),
            }
        })?;
        let swap = |v: usize| {
            if v == r {
                s
            } else if v == s {
                r
            } else {
                v
            }
        };
        Self::new(
            self.o.iter().map(|&v| swap(v)).collect(),
            self.x.iter().map(|&v| swap(v)).collect(),
        )
    }

    /// Replaces the X at cell `(c, r)` by the 2x2 block
    ///
    /// ```text
    ///   row r+1 | X  .
    ///   row r   | O  X
    ///           +------
    ///            c  c+1
    /// ```
    ///
    /// after inserting a new column after `c` and a new row after `r`. The old
    /// O of column `c` moves to column `c+1` and the old O of row `r` moves to
    /// row `r+1`.
    fn stabilize(&self, c: usize, r: usize) -> Result<Self, GridError> {
        let n = self.size();
        if c >= n || self.x[c] != r {
            return Err(GridError::IllegalMove {
                kind: "stabilization",
                reason: format!("no X-marking at cell ({c}, {r})"),
            });
        }
        let row = |j: usize| if j < r { j } else { j + 1 };
        let mut o = Vec::with_capacity(n + 1);
        let mut x = Vec::with_capacity(n + 1);
        for k in 0..n {
            if k == c {
                o.push(r);
                x.push(r + 1);
                o.push(row(self.o[c]));
                x.push(r);
            } else {
                o.push(row(self.o[k]));
                x.push(row(self.x[k]));
            }
        }
        Self::new(o, x)
    }

    /// Inverse of [`stabilize`](Self::stabilize) for the block whose lower-left
    /// cell is `(c, r)`.
    fn destabilize(&self, c: usize, r: usize) -> Result<Self, GridError> {
        let n = self.size();
        let matches = n >= 2
            && c + 1 < n
            && r + 1 < n
            && self.o[c] == r
            && self.x[c] == r + 1
            && self.x[c + 1] == r;
        if !matches {
            return Err(GridError::IllegalMove {
                kind: "destabilization",
                reason: format!("no stabilized block with lower-left cell ({c}, {r})"),
            });
        }
        let row = |j: usize| if j < r { j } else { j - 1 };
        let mut o = Vec::with_capacity(n - 1);
        let mut x = Vec::with_capacity(n - 1);
        for k in 0..n {
            if k == c + 1 {
                continue;
            }
            if k == c {
                o.push(row(self.o[c + 1]));
                x.push(r);
            } else {
                o.push(row(self.o[k]));
                x.push(row(self.x[k]));
            }
        }
        Self::new(o, x)
    }

    /// Every move that is legal on this diagram, with stabilizations only
    /// offered when the result stays within `max_size`.
    pub fn legal_moves(&self, max_size: usize) -> Vec<GridMove> {
        let n = self.size();
        let mut moves = Vec::new();
        for dc in 0..n {
            for dr in 0..n {
                if dc != 0 || dr != 0 {
                    moves.push(GridMove::Translate { dc, dr });
                }
            }
        }
        for i in 0..n {
            let m = GridMove::CommuteColumns { column: i };
            if self.apply_move(&m).is_ok() {
                moves.push(m);
            }
            let m = GridMove::CommuteRows { row: i };
            if self.apply_move(&m).is_ok() {
                moves.push(m);
            }
        }
        if n < max_size {
            for c in 0..n {
                moves.push(GridMove::Stabilize {
                    column: c,
                    row: self.x[c],
                });
            }
        }
        for c in 0..n.saturating_sub(1) {
            let m = GridMove::Destabilize {
                column: c,
                row: self.o[c],
            };
            if self.apply_move(&m).is_ok() {
                moves.push(m);
            }
        }
        moves
    }
}

/// Two marking pairs on adjacent circles may be commuted when their rows (or
/// columns) are pairwise distinct and the two chords do not interleave on the
/// circle.
fn check_unlinked(a: [usize; 2], b: [usize; 2]) -> Result<(), String> {
    let (a0, a1) = (a[0].min(a[1]), a[0].max(a[1]));
    let (b0, b1) = (b[0].min(b[1]), b[0].max(b[1]));
    if a0 == b0 || a0 == b1 || a1 == b0 || a1 == b1 {
        return Err("marking intervals share an endpoint".into());
    }
    if a0 == a1 || b0 == b1 {
        // A doubly-marked cell spans a single point: it never interleaves.
        return Ok(());
    }
    let inside = |v: usize| a0 < v && v < a1;
    if inside(b0) != inside(b1) {
        return Err("marking intervals interleave".into());
    }
    Ok(())
}

/// A single grid move. Stabilization always uses the block pattern documented
/// on [`GridDiagram::apply_move`]'s stabilization case (corner type SE).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridMove {
    Translate { dc: usize, dr: usize },
    CommuteColumns { column: usize },
    CommuteRows { row: usize },
    Stabilize { column: usize, row: usize },
    Destabilize { column: usize, row: usize },
}

impl GridMove {
    /// Parses the textual move syntax used on the command line:
    /// `translate DC DR`, `comm col C`, `comm row R`, `stab SE C R`,
    /// `destab SE C R`.
    pub fn parse(text: &str) -> Result<Self, String> {
        let words: Vec<&str> = text.split_whitespace().collect();
        let num = |s: &str| s.parse::<usize>().map_err(|_| format!("bad index {s:?}"));
        match words.as_slice() {
            ["translate", dc, dr] => Ok(Self::Translate {
                dc: num(dc)?,
                dr: num(dr)?,
            }),
            ["comm", "col", c] => Ok(Self::CommuteColumns { column: num(c)? }),
            ["comm", "row", r] => Ok(Self::CommuteRows { row: num(r)? }),
            ["stab", corner, c, r] | ["destab", corner, c, r] => {
                if !corner.eq_ignore_ascii_case("SE") {
                    return Err(format!("unsupported stabilization corner {corner:?}"));
                }
                let (column, row) = (num(c)?, num(r)?);
                if words[0] == "stab" {
                    Ok(Self::Stabilize { column, row })
                } else {
                    Ok(Self::Destabilize { column, row })
                }
            }
            _ => Err(format!("unrecognized move {text:?}")),
        }
    }
}

impl fmt::Display for GridMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Translate { dc, dr } => write!(f, "translate {dc} {dr}"),
            Self::CommuteColumns { column } => write!(f, "comm col {column}"),
            Self::CommuteRows { row } => write!(f, "comm row {row}"),
            Self::Stabilize { column, row } => write!(f, "stab SE {column} {row}"),
            Self::Destabilize { column, row } => write!(f, "destab SE {column} {row}"),
        }
    }
}
