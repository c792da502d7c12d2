//! The combined per-diagram report printed by the command-line tool.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::grid::GridDiagram;
use crate::homology::{tau_report, Computation, TauReport};
use crate::invariants::{
    legendrian_numbers, quasi_alt_line_check, slice_genus_lower_bound, tb_bound_check,
    tb_upper_bounds, BoundReport, LegendrianNumbers,
};
use crate::tfunction::TFunction;
use crate::{Error, Options};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantReport {
    pub size: usize,
    pub components: usize,
    pub t: TFunction,
    pub tau: TauReport,
    /// τ of the mirror link, obtained as `-τ*`.
    pub mirror_tau: i64,
    pub legendrian: LegendrianNumbers,
    pub bounds: BoundReport,
}

impl InvariantReport {
    /// Runs the full pipeline. `sigma` is a signature supplied by the caller
    /// for a link known to be quasi-alternating.
    pub fn compute(d: &GridDiagram, opts: &Options, sigma: Option<i64>) -> Result<Self, Error> {
        let c = Computation::run(d, opts)?;
        Self::from_t(d, c.t, sigma)
    }

    pub fn from_t(d: &GridDiagram, t: TFunction, sigma: Option<i64>) -> Result<Self, Error> {
        let n = d.component_count();
        let tau = tau_report(&t)?;
        // The grid's Legendrian lives on the mirror; by mirror duality the
        // mirror's τ is -τ*.
        let mirror = TauReport {
            tau: -tau.tau_star,
            tau_star: -tau.tau,
            tau_set: tau.tau_set.iter().rev().map(|s| -s).collect(),
        };
        let legendrian = legendrian_numbers(d)?;
        let upper = tb_upper_bounds(&tau, n, sigma)?;
        let bounds = BoundReport {
            genus_lower: slice_genus_lower_bound(&tau, n),
            tb_bound_ok: tb_bound_check(&legendrian, &mirror, n),
            tb_upper: upper.from_tau,
            quasi_alt_upper: upper.quasi_alternating,
            quasi_alt_line_ok: sigma.map(|s| quasi_alt_line_check(&t, n, s)),
        };
        Ok(Self {
            size: d.size(),
            components: n,
            mirror_tau: mirror.tau,
            t,
            tau,
            legendrian,
            bounds,
        })
    }

    /// JSON with keys in sorted order.
    pub fn to_json(&self) -> Value {
        let mut out: BTreeMap<&str, Value> = BTreeMap::new();
        out.insert("size", json!(self.size));
        out.insert("components", json!(self.components));
        out.insert("T", self.t.to_json());
        out.insert("tau", json!(self.tau.tau));
        out.insert("tau_star", json!(self.tau.tau_star));
        out.insert("tau_set", json!(self.tau.tau_set));
        out.insert("mirror_tau", json!(self.mirror_tau));
        out.insert("genus_lower", json!(self.bounds.genus_lower));
        out.insert("legendrian", sorted(json!(self.legendrian)));
        out.insert("bounds", sorted(json!(self.bounds)));
        sorted(json!(out))
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!(
            "grid size {}  components {}\n",
            self.size, self.components
        ));
        s.push_str("T:\n");
        for line in self.t.to_string().lines() {
            s.push_str(&format!("  {line}\n"));
        }
        s.push_str(&format!(
            "tau {}  tau* {}  tau-set {:?}\n",
            self.tau.tau, self.tau.tau_star, self.tau.tau_set
        ));
        s.push_str(&format!("slice genus >= {}\n", self.bounds.genus_lower));
        s.push_str(&format!(
            "Legendrian (mirror): tb {}  rot {}  bound tb+|rot| <= 2tau-n holds: {}\n",
            self.legendrian.tb, self.legendrian.rot, self.bounds.tb_bound_ok
        ));
        s.push_str(&format!("TB <= {}", self.bounds.tb_upper));
        if let Some(q) = self.bounds.quasi_alt_upper {
            s.push_str(&format!("  (quasi-alternating: TB <= {q})"));
        }
        s.push('\n');
        if let Some(ok) = self.bounds.quasi_alt_line_ok {
            s.push_str(&format!("support on signature line: {ok}\n"));
        }
        s
    }
}

/// Rebuilds objects so their keys are ordered, independent of how the
/// serializer stores maps.
fn sorted(v: Value) -> Value {
    match v {
        Value::Object(map) => {
            let ordered: BTreeMap<String, Value> =
                map.into_iter().map(|(k, v)| (k, sorted(v))).collect();
            Value::Object(ordered.into_iter().collect())
        }
        Value::Array(items) => Value::Array(items.into_iter().map(sorted).collect()),
        other => other,
    }
}
