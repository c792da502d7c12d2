//! Identity checks that every diagram must satisfy, used by `gridtau verify`
//! and by the test suites.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::grid::{GridDiagram, GridMove};
use crate::homology::compute_t;
use crate::tfunction::TFunction;
use crate::{Error, Options};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn compare(name: &str, got: &TFunction, want: &TFunction) -> Self {
        let passed = got.values_eq(want);
        let detail = if passed {
            String::new()
        } else {
            format!(
                "got {}, expected {}",
                got.to_json_string(),
                want.to_json_string()
            )
        };
        Self {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

/// `T(L1 ⊔ L2)(d, s) = Σ T1(d1, s1) (T2(d2, s2) + T2(d2 + 1, s2))`.
pub fn union_formula(t1: &TFunction, t2: &TFunction) -> TFunction {
    let mut t = t1.convolve(&t2.with_split_unknot());
    if let (Some(a), Some(b)) = (t1.components(), t2.components()) {
        t = t.with_components(a + b);
    }
    t
}

/// A uniformly random diagram of the given size.
pub fn random_diagram(size: usize, rng: &mut impl Rng) -> GridDiagram {
    let mut o: Vec<usize> = (0..size).collect();
    let mut x = o.clone();
    o.shuffle(rng);
    x.shuffle(rng);
    GridDiagram::new(o, x).expect("shuffled permutations")
}

/// Applies `count` random legal moves, keeping the size at most `max_size`,
/// and returns every intermediate diagram with the move that produced it.
pub fn random_move_walk(
    start: &GridDiagram,
    count: usize,
    max_size: usize,
    seed: u64,
) -> Vec<(GridMove, GridDiagram)> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut current = start.clone();
    let mut walk = Vec::with_capacity(count);
    for _ in 0..count {
        let moves = current.legal_moves(max_size);
        let m = *moves
            .choose(&mut rng)
            .expect("translations are always legal");
        current = current.apply_move(&m).expect("move was listed as legal");
        walk.push((m, current.clone()));
    }
    walk
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub options: Options,
    pub seed: u64,
    pub moves: usize,
    /// Golden T to compare against, if any.
    pub expected: Option<TFunction>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            options: Options::default(),
            seed: 0,
            moves: 50,
            expected: None,
        }
    }
}

/// Runs the symmetry, stabilization, union, connected-sum and move-invariance
/// identities on `d`.
pub fn identity_suite(d: &GridDiagram, config: &VerifyConfig) -> Result<Vec<CheckOutcome>, Error> {
    let opts = &config.options;
    let n = d.component_count();
    let t = compute_t(d, opts)?;
    let mut out = Vec::new();

    out.push(CheckOutcome {
        name: "structure".into(),
        passed: true,
        detail: format!("mass {} over {n} components", t.mass()),
    });
    if let Some(want) = &config.expected {
        out.push(CheckOutcome::compare("expected", &t, want));
    }

    let reversed = compute_t(&d.reverse(), opts)?;
    out.push(CheckOutcome::compare("reverse", &reversed, &t));

    let mirrored = compute_t(&d.mirror(), opts)?;
    out.push(CheckOutcome::compare("mirror", &mirrored, &t.mirrored(n)));

    let unknot = GridDiagram::unknot();
    let split = compute_t(&d.disjoint_union(&unknot), opts)?;
    out.push(CheckOutcome::compare(
        "split-unknot",
        &split,
        &t.with_split_unknot(),
    ));

    let big_unknot = GridDiagram::torus(1, 1)?;
    let t_big = compute_t(&big_unknot, opts)?;
    let union = compute_t(&d.disjoint_union(&big_unknot), opts)?;
    out.push(CheckOutcome::compare(
        "union",
        &union,
        &union_formula(&t, &t_big),
    ));

    let sum = compute_t(&d.connect_sum(&big_unknot)?, opts)?;
    out.push(CheckOutcome::compare(
        "connected-sum",
        &sum,
        &t.convolve(&t_big),
    ));

    let mut failed = None;
    for (step, (m, next)) in random_move_walk(d, config.moves, d.size() + 1, config.seed)
        .into_iter()
        .enumerate()
    {
        let moved = compute_t(&next, opts)?;
        if !moved.values_eq(&t) {
            failed = Some(format!(
                "after move {} ({m}): {}",
                step + 1,
                moved.to_json_string()
            ));
            break;
        }
    }
    out.push(CheckOutcome {
        name: format!("moves({})", config.moves),
        passed: failed.is_none(),
        detail: failed.unwrap_or_default(),
    });
    Ok(out)
}
