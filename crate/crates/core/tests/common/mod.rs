#![allow(dead_code)]

use gridtau_core::verify::random_diagram;
use gridtau_core::GridDiagram;
use rand::rngs::StdRng;
use rand::SeedableRng;

pub const TORUS_PAIRS: [(usize, usize); 6] = [(2, 2), (2, 3), (2, 4), (3, 3), (2, 5), (3, 4)];

pub fn torus(q: usize, p: usize) -> GridDiagram {
    GridDiagram::torus(q, p).unwrap()
}

pub fn trefoil() -> GridDiagram {
    GridDiagram::new(vec![4, 3, 2, 1, 0], vec![1, 0, 4, 3, 2]).unwrap()
}

pub fn hopf() -> GridDiagram {
    torus(2, 2)
}

/// The 2×2 unknot `D_{1,1}`.
pub fn small_unknot() -> GridDiagram {
    torus(1, 1)
}

/// Named diagrams used across the suites.
pub fn corpus() -> Vec<(String, GridDiagram)> {
    let mut out = vec![
        ("unknot 1x1".to_string(), GridDiagram::unknot()),
        ("unknot 2x2".to_string(), small_unknot()),
        ("left trefoil".to_string(), trefoil().mirror()),
        (
            "trefoil + unknot".to_string(),
            trefoil().disjoint_union(&GridDiagram::unknot()),
        ),
        (
            "hopf + unknot".to_string(),
            hopf().disjoint_union(&GridDiagram::unknot()),
        ),
        ("mirror hopf".to_string(), hopf().mirror()),
        ("reverse T(2,4)".to_string(), torus(2, 4).reverse()),
    ];
    for n in 2..=5 {
        out.push((format!("unlink {n}"), GridDiagram::unlink(n).unwrap()));
    }
    for (q, p) in TORUS_PAIRS {
        out.push((format!("T({q},{p})"), torus(q, p)));
    }
    out
}

pub fn random_diagrams(count: usize, max_size: usize, seed: u64) -> Vec<GridDiagram> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|i| random_diagram(1 + i % max_size, &mut rng))
        .collect()
}
