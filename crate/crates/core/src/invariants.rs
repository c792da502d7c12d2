//! Bounds derived from τ: slice genus, cobordisms, and Legendrian numbers.
//!
//! A grid diagram of a link `L` also describes a Legendrian representative
//! of the mirror `L*`. Its Thurston-Bennequin and rotation numbers are read
//! off the corner states `x⁺` and `x⁻`:
//!
//! ```text
//! tb - rot + 1 = M(x⁺)        (tb_i - rot_i + 1) / 2 = A_i(x⁺)
//! tb + rot + 1 = M(x⁻)        (tb_i + rot_i + 1) / 2 = A_i(x⁻)
//! ```

use serde::Serialize;
use thiserror::Error;

use crate::grading::{alexander_component, x_pm, CornerSign};
use crate::grid::GridDiagram;
use crate::homology::TauReport;
use crate::tfunction::TFunction;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("Legendrian data is inconsistent: {0}")]
    InconsistentLegendrianData(String),
    #[error("tau = {tau} does not equal (n - 1 - sigma) / 2 for n = {n}, sigma = {sigma}")]
    QuasiAltInconsistent { tau: i64, n: usize, sigma: i64 },
}

/// `max(|τ|, |τ*|) + 1 - n`, a lower bound for the slice genus.
pub fn slice_genus_lower_bound(t: &TauReport, n: usize) -> i64 {
    t.tau.abs().max(t.tau_star.abs()) + 1 - n as i64
}

/// Largest `|τ(L1) - τ(L2)|` allowed by a cobordism of genus `g` whose
/// surface has `l1` and `l2` extra boundary components on the two ends.
pub fn cobordism_tau_gap(g: u64, l1: u64, l2: u64) -> u64 {
    g + l1.max(l2)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LegendrianNumbers {
    pub tb: i64,
    pub rot: i64,
    pub tb_components: Vec<i64>,
    pub rot_components: Vec<i64>,
}

/// Solves the corner-state equations for the Legendrian representative of
/// the mirror of the link `d` presents.
pub fn legendrian_numbers(d: &GridDiagram) -> Result<LegendrianNumbers, InvariantError> {
    let plus = x_pm(d, CornerSign::Plus);
    let minus = x_pm(d, CornerSign::Minus);
    let n = d.component_count();
    let mut tb_components = Vec::with_capacity(n);
    let mut rot_components = Vec::with_capacity(n);
    for i in 0..n {
        // tb_i - rot_i + 1 = 2 A_i(x⁺), tb_i + rot_i + 1 = 2 A_i(x⁻)
        let lo = alexander_component(d, &plus, i).twice();
        let hi = alexander_component(d, &minus, i).twice();
        if (lo + hi) % 2 != 0 {
            return Err(InvariantError::InconsistentLegendrianData(format!(
                "component {i}: 2A_i(x+) = {lo} and 2A_i(x-) = {hi} differ in parity"
            )));
        }
        tb_components.push((lo + hi) / 2 - 1);
        rot_components.push((hi - lo) / 2);
    }
    let tb: i64 = tb_components.iter().sum();
    let rot: i64 = rot_components.iter().sum();
    let checks = [
        ("tb - rot + 1 = M(x+)", tb - rot + 1, plus.maslov()),
        ("tb + rot + 1 = M(x-)", tb + rot + 1, minus.maslov()),
        (
            "tb - rot + n = 2A(x+)",
            tb - rot + n as i64,
            2 * plus.alexander(),
        ),
        (
            "tb + rot + n = 2A(x-)",
            tb + rot + n as i64,
            2 * minus.alexander(),
        ),
    ];
    for (name, lhs, rhs) in checks {
        if lhs != rhs {
            return Err(InvariantError::InconsistentLegendrianData(format!(
                "{name} fails: {lhs} != {rhs}"
            )));
        }
    }
    Ok(LegendrianNumbers {
        tb,
        rot,
        tb_components,
        rot_components,
    })
}

/// `tb + |rot| ≤ 2τ(L) - n`, where `mirror_tau` is τ of the Legendrian's link
/// type, the mirror of the grid's link.
pub fn tb_bound_check(ln: &LegendrianNumbers, mirror_tau: &TauReport, n: usize) -> bool {
    ln.tb + ln.rot.abs() <= 2 * mirror_tau.tau - n as i64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TbUpperBounds {
    /// `2τ - n`.
    pub from_tau: i64,
    /// `-1 - σ`, when a signature was supplied for a quasi-alternating link.
    pub quasi_alternating: Option<i64>,
}

/// Upper bounds for the maximal Thurston-Bennequin number. With `sigma`
/// given, also checks `τ = (n - 1 - σ) / 2`.
pub fn tb_upper_bounds(
    t: &TauReport,
    n: usize,
    sigma: Option<i64>,
) -> Result<TbUpperBounds, InvariantError> {
    let from_tau = 2 * t.tau - n as i64;
    let quasi_alternating = match sigma {
        None => None,
        Some(sigma) => {
            let num = n as i64 - 1 - sigma;
            if num % 2 != 0 || num / 2 != t.tau {
                return Err(InvariantError::QuasiAltInconsistent {
                    tau: t.tau,
                    n,
                    sigma,
                });
            }
            Some(-1 - sigma)
        }
    };
    Ok(TbUpperBounds {
        from_tau,
        quasi_alternating,
    })
}

/// True iff `T` is supported exactly on `s = d + (n - 1 - σ)/2` for
/// `1 - n ≤ d ≤ 0`, with every grading in that range occupied.
pub fn quasi_alt_line_check(t: &TFunction, n: usize, sigma: i64) -> bool {
    let num = n as i64 - 1 - sigma;
    if num % 2 != 0 {
        return false;
    }
    let shift = num / 2;
    let bottom = 1 - n as i64;
    let on_line = t
        .iter()
        .all(|((d, s), _)| (bottom..=0).contains(&d) && s == d + shift);
    on_line && (bottom..=0).all(|d| t.get(d, d + shift) > 0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub genus_lower: i64,
    pub tb_bound_ok: bool,
    #[serde(rename = "TB_upper")]
    pub tb_upper: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quasi_alt_upper: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quasi_alt_line_ok: Option<bool>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(tau: i64, tau_star: i64) -> TauReport {
        TauReport {
            tau,
            tau_star,
            tau_set: vec![],
        }
    }

    #[test]
    fn genus_bounds() {
        assert_eq!(slice_genus_lower_bound(&report(0, 0), 1), 0);
        assert_eq!(slice_genus_lower_bound(&report(1, 1), 1), 1);
        assert_eq!(slice_genus_lower_bound(&report(2, 2), 1), 2);
        assert_eq!(slice_genus_lower_bound(&report(-3, 1), 2), 2);
    }

    #[test]
    fn cobordism_gaps() {
        assert_eq!(cobordism_tau_gap(0, 0, 0), 0);
        assert_eq!(cobordism_tau_gap(5, 0, 0), 5);
        assert_eq!(cobordism_tau_gap(2, 3, 4), 6);
    }

    #[test]
    fn unknot_legendrian() {
        let d = GridDiagram::torus(1, 1).unwrap();
        let ln = legendrian_numbers(&d).unwrap();
        assert_eq!((ln.tb, ln.rot), (-1, 0));
        assert!(tb_bound_check(&ln, &report(0, 0), 1));
        assert_eq!(ln.tb + ln.rot.abs(), -1);
    }

    #[test]
    fn tb_upper_bound_examples() {
        assert_eq!(
            tb_upper_bounds(&report(0, 0), 1, None).unwrap().from_tau,
            -1
        );
        let hopf = tb_upper_bounds(&report(1, 0), 2, Some(-1)).unwrap();
        assert_eq!(hopf.from_tau, 0);
        assert_eq!(hopf.quasi_alternating, Some(0));
        assert_eq!(
            tb_upper_bounds(&report(1, 1), 1, Some(0)),
            Err(InvariantError::QuasiAltInconsistent {
                tau: 1,
                n: 1,
                sigma: 0
            })
        );
        // Two-component family with σ = 3 + 2k: TB ≤ -4 - 2k.
        for k in 0..5 {
            let sigma = 3 + 2 * k;
            let tau = (2 - 1 - sigma) / 2;
            let b = tb_upper_bounds(&report(tau, tau), 2, Some(sigma)).unwrap();
            assert_eq!(b.quasi_alternating, Some(-4 - 2 * k));
        }
    }

    #[test]
    fn line_checks() {
        assert!(quasi_alt_line_check(&TFunction::delta(0, 0), 1, 0));
        let hopf = TFunction::from_entries([((0, 1), 1), ((-1, 0), 1)]);
        assert!(quasi_alt_line_check(&hopf, 2, -1));
        assert!(!quasi_alt_line_check(&TFunction::delta(0, 1), 1, 0));
        assert!(!quasi_alt_line_check(&hopf, 2, 0));
    }
}
