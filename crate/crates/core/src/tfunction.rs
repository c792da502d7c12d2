//! Finitely supported functions `ℤ² → ℤ≥0`, indexed by (Maslov, Alexander).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A finitely supported multiplicity function. Zero values are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct TFunction {
    values: BTreeMap<(i64, i64), u64>,
    components: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct Entry {
    d: i64,
    s: i64,
    t: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct Wire {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    entries: Vec<Entry>,
}

impl TFunction {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = ((i64, i64), u64)>) -> Self {
        let mut t = Self::new();
        for (k, v) in entries {
            t.add(k.0, k.1, v);
        }
        t
    }

    /// The point mass `δ_(d,s)`.
    pub fn delta(d: i64, s: i64) -> Self {
        Self::from_entries([((d, s), 1)])
    }

    pub fn with_components(mut self, n: usize) -> Self {
        self.components = Some(n);
        self
    }

    pub fn components(&self) -> Option<usize> {
        self.components
    }

    pub fn get(&self, d: i64, s: i64) -> u64 {
        self.values.get(&(d, s)).copied().unwrap_or(0)
    }

    pub fn add(&mut self, d: i64, s: i64, v: u64) {
        if v > 0 {
            *self.values.entry((d, s)).or_default() += v;
        }
    }

    pub fn set(&mut self, d: i64, s: i64, v: u64) {
        if v == 0 {
            self.values.remove(&(d, s));
        } else {
            self.values.insert((d, s), v);
        }
    }

    /// Nonzero entries in (d ascending, s ascending) order.
    pub fn iter(&self) -> impl Iterator<Item = ((i64, i64), u64)> + '_ {
        self.values.iter().map(|(&k, &v)| (k, v))
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mass(&self) -> u64 {
        self.values.values().sum()
    }

    pub fn maslov_range(&self) -> Option<(i64, i64)> {
        let lo = self.values.keys().map(|k| k.0).min()?;
        let hi = self.values.keys().map(|k| k.0).max()?;
        Some((lo, hi))
    }

    /// Entries of Maslov grading `d`, by ascending `s`.
    pub fn row(&self, d: i64) -> Vec<(i64, u64)> {
        self.values
            .range((d, i64::MIN)..=(d, i64::MAX))
            .map(|(&(_, s), &v)| (s, v))
            .collect()
    }

    /// Same values with the component count dropped (for comparisons between
    /// link-level and raw functions).
    pub fn values_eq(&self, other: &Self) -> bool {
        self.values == other.values
    }

    /// `(f * g)(d, s) = Σ f(d1, s1) g(d2, s2)` over `d1 + d2 = d`, `s1 + s2 = s`.
    pub fn convolve(&self, other: &Self) -> Self {
        let mut out = Self::new();
        for ((d1, s1), a) in self.iter() {
            for ((d2, s2), b) in other.iter() {
                out.add(d1 + d2, s1 + s2, a * b);
            }
        }
        out
    }

    /// `g(d, s) = f(d + dd, s + ds)`: moves every entry by `(-dd, -ds)`.
    pub fn shifted(&self, dd: i64, ds: i64) -> Self {
        Self::from_entries(self.iter().map(|((d, s), v)| ((d - dd, s - ds), v)))
    }

    /// `g(d, s) = f(d, s) + f(d + 1, s)`: the effect of adding a split unknot.
    pub fn with_split_unknot(&self) -> Self {
        let mut out = self.clone();
        for ((d, s), v) in self.iter() {
            out.add(d - 1, s, v);
        }
        out.components = self.components.map(|n| n + 1);
        out
    }

    /// `g(d, s) = f(-d + 1 - n, -s)` for an `n`-component link.
    pub fn mirrored(&self, n: usize) -> Self {
        let n = n as i64;
        let mut out = Self::from_entries(self.iter().map(|((d, s), v)| ((1 - n - d, -s), v)));
        out.components = self.components;
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.wire()).expect("serializable")
    }

    fn wire(&self) -> Wire {
        let mut entries: Vec<Entry> = self.iter().map(|((d, s), t)| Entry { d, s, t }).collect();
        entries.sort_by(|a, b| b.d.cmp(&a.d).then(a.s.cmp(&b.s)));
        Wire {
            n: self.components,
            entries,
        }
    }

    /// Canonical text form: compact JSON with entries sorted by
    /// (d descending, s ascending).
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.wire()).expect("serializable")
    }

    pub fn from_json_str(text: &str) -> Result<Self, serde_json::Error> {
        let wire: Wire = serde_json::from_str(text)?;
        let mut t = Self::from_entries(wire.entries.into_iter().map(|e| ((e.d, e.s), e.t)));
        t.components = wire.n;
        Ok(t)
    }
}

impl fmt::Display for TFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some((lo, hi)) = self.maslov_range() else {
            return write!(f, "(empty)");
        };
        for d in (lo..=hi).rev() {
            let row: Vec<String> = self
                .row(d)
                .into_iter()
                .map(|(s, v)| format!("s={s}:{v}"))
                .collect();
            writeln!(f, "d={d:>3}  {}", row.join("  "))?;
        }
        Ok(())
    }
}

/// Binomial coefficient for small arguments.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
