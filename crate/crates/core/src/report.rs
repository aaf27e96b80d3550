//! Structured pass/fail records for inequality and identity checks.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `lhs < rhs`.
    Less,
    /// `lhs <= rhs + tolerance`.
    LessEq,
    /// `|lhs - rhs| <= tolerance`.
    Equal,
}

/// One checked statement. For inequalities the stored sides are those at the
/// worst point found (`at`), with `margin = rhs - lhs`; for identities
/// `margin = -|lhs - rhs|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub name: String,
    pub description: String,
    pub relation: Relation,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tolerance: f64,
    /// Radius of the worst point, when the statement was checked on a grid.
    pub at: Option<f64>,
    /// Whether a failure counts against the report.
    pub blocking: bool,
    pub pass: bool,
}

impl BoundEntry {
    fn evaluate(&mut self) {
        self.margin = match self.relation {
            Relation::Less | Relation::LessEq => self.rhs - self.lhs,
            Relation::Equal => -(self.lhs - self.rhs).abs(),
        };
        self.pass = match self.relation {
            Relation::Less => self.margin > 0.0,
            Relation::LessEq | Relation::Equal => self.margin >= -self.tolerance,
        };
    }
}

/// Parameters of the profile a report refers to.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ReportMeta {
    pub kappa: f64,
    pub u0: f64,
    pub radius: Option<f64>,
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BoundsReport {
    pub meta: ReportMeta,
    pub entries: Vec<BoundEntry>,
}

impl BoundsReport {
    pub fn new(meta: ReportMeta) -> Self {
        Self {
            meta,
            entries: Vec::new(),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        name: &str,
        description: &str,
        relation: Relation,
        lhs: f64,
        rhs: f64,
        tolerance: f64,
        at: Option<f64>,
    ) -> &mut BoundEntry {
        let mut entry = BoundEntry {
            name: name.into(),
            description: description.into(),
            relation,
            lhs,
            rhs,
            margin: 0.0,
            tolerance,
            at,
            blocking: true,
            pass: false,
        };
        entry.evaluate();
        self.entries.push(entry);
        self.entries.last_mut().expect("just pushed")
    }

    /// Records `lhs < rhs`.
    pub fn less(&mut self, name: &str, description: &str, lhs: f64, rhs: f64) -> &mut BoundEntry {
        self.push(name, description, Relation::Less, lhs, rhs, 0.0, None)
    }

    /// Records `lhs <= rhs` up to `tolerance`.
    pub fn less_eq(
        &mut self,
        name: &str,
        description: &str,
        lhs: f64,
        rhs: f64,
        tolerance: f64,
    ) -> &mut BoundEntry {
        self.push(
            name,
            description,
            Relation::LessEq,
            lhs,
            rhs,
            tolerance,
            None,
        )
    }

    pub fn equal(
        &mut self,
        name: &str,
        description: &str,
        lhs: f64,
        rhs: f64,
        tolerance: f64,
    ) -> &mut BoundEntry {
        self.push(
            name,
            description,
            Relation::Equal,
            lhs,
            rhs,
            tolerance,
            None,
        )
    }

    /// Records `lhs(r) < rhs(r)` (or `<=` when `strict` is false) for every
    /// `(r, lhs, rhs)` in `points`, keeping the point of smallest margin.
    /// An empty grid records nothing.
    pub fn less_on_grid<I>(&mut self, name: &str, description: &str, strict: bool, points: I)
    where
        I: IntoIterator<Item = (f64, f64, f64)>,
    {
        let worst = points
            .into_iter()
            .fold(None::<(f64, f64, f64)>, |acc, p| match acc {
                Some(w) if !(p.2 - p.1 < w.2 - w.1) && !(p.2 - p.1).is_nan() => Some(w),
                _ => Some(p),
            });
        if let Some((r, lhs, rhs)) = worst {
            let relation = if strict {
                Relation::Less
            } else {
                Relation::LessEq
            };
            self.push(name, description, relation, lhs, rhs, 0.0, Some(r));
        }
    }

    /// Marks the most recent entry as informational.
    pub fn non_blocking(&mut self) {
        if let Some(e) = self.entries.last_mut() {
            e.blocking = false;
        }
    }

    pub fn extend(&mut self, other: BoundsReport) {
        self.entries.extend(other.entries);
    }

    /// True when every blocking entry passes.
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass || !e.blocking)
    }

    pub fn failures(&self) -> impl Iterator<Item = &BoundEntry> {
        self.entries.iter().filter(|e| !e.pass && e.blocking)
    }

    pub fn entry(&self, name: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

impl fmt::Display for BoundEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.relation {
            Relation::Less => "<",
            Relation::LessEq => "<=",
            Relation::Equal => "==",
        };
        let status = match (self.pass, self.blocking) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "INFO",
        };
        write!(
            f,
            "{status} {:<34} {:>+.9e} {op} {:>+.9e}  margin {:+.3e}",
            self.name, self.lhs, self.rhs, self.margin
        )?;
        if let Some(r) = self.at {
            write!(f, "  at r = {r:.6}")?;
        }
        write!(f, "  # {}", self.description)
    }
}

impl fmt::Display for BoundsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "# kappa = {} u0 = {}", self.meta.kappa, self.meta.u0)?;
        if let Some(r) = self.meta.radius {
            write!(f, " R = {r}")?;
        }
        if let Some(b) = self.meta.beta {
            write!(f, " beta = {b}")?;
        }
        writeln!(f)?;
        for e in &self.entries {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn margins_and_passes() {
        let mut rep = BoundsReport::default();
        rep.less("a", "", 1.0, 2.0);
        rep.less("b", "", 2.0, 2.0);
        rep.less_eq("c", "", 2.0, 2.0, 0.0);
        rep.equal("d", "", 1.0, 1.0 + 1e-12, 1e-10);
        assert_eq!(rep.entry("a").unwrap().margin, 1.0);
        assert!(!rep.entry("b").unwrap().pass);
        assert!(rep.entry("c").unwrap().pass);
        assert!(rep.entry("d").unwrap().pass);
        assert!(!rep.all_pass());
        assert_eq!(rep.failures().count(), 1);
    }

    #[test]
    fn grid_keeps_worst_point_and_nan_fails() {
        let mut rep = BoundsReport::default();
        rep.less_on_grid(
            "g",
            "",
            true,
            vec![(0.1, 0.0, 3.0), (0.2, 1.0, 1.5), (0.3, 0.0, 2.0)],
        );
        let e = rep.entry("g").unwrap();
        assert_eq!((e.at, e.margin), (Some(0.2), 0.5));
        rep.less_on_grid("n", "", true, vec![(0.1, 0.0, 3.0), (0.2, f64::NAN, 1.0)]);
        assert!(!rep.entry("n").unwrap().pass);
        rep.less_on_grid("empty", "", true, Vec::new());
        assert!(rep.entry("empty").is_none());
    }

    #[test]
    fn non_blocking_failures_do_not_count() {
        let mut rep = BoundsReport::default();
        rep.less("x", "", 3.0, 1.0);
        rep.non_blocking();
        assert!(rep.all_pass());
        assert!(rep.to_string().contains("INFO x"));
    }
}
