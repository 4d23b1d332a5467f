use std::fmt::Write as _;
use std::time::Duration;

use flowloc::exactnum::to_decimal;
use flowloc::{Error, Rat, Result};
use num_traits::Zero;

/// Per-component residues of one characteristic number and their total.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub psi_label: String,
    pub m: usize,
    pub residues: Vec<(String, Rat)>,
    pub total: Rat,
    pub halved: bool,
    pub approx: Option<usize>,
    pub timing: Option<Duration>,
}

impl RunReport {
    pub fn sum(&self) -> Rat {
        self.residues.iter().fold(Rat::zero(), |acc, (_, r)| acc + r)
    }

    /// Renders the report, first re-checking that the total is the
    /// (possibly halved) sum of the listed residues.
    pub fn render(&self) -> Result<String> {
        let sum = self.sum();
        let expected = if self.halved { &sum / Rat::from_integer(2.into()) } else { sum.clone() };
        if expected != self.total {
            return Err(Error::Internal(format!(
                "report total {} does not match its residues (expected {expected})",
                self.total
            )));
        }
        let width = self.residues.iter().map(|(n, _)| n.len()).max().unwrap_or(0).max("component".len());
        let mut out = String::new();
        writeln!(out, "psi = {} (m = {})", self.psi_label, self.m).unwrap();
        writeln!(out, "{:<width$}  residue", "component").unwrap();
        for (name, r) in &self.residues {
            writeln!(out, "{name:<width$}  {r}").unwrap();
        }
        if self.halved {
            writeln!(out, "sum = {sum}").unwrap();
            writeln!(out, "total = 1/2 * sum = {}", self.total).unwrap();
        } else {
            writeln!(out, "total = {}", self.total).unwrap();
        }
        if let Some(digits) = self.approx {
            writeln!(out, "total ~ {}", to_decimal(&self.total, digits)).unwrap();
        }
        if let Some(t) = self.timing {
            writeln!(out, "time = {:.3} ms", t.as_secs_f64() * 1e3).unwrap();
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use flowloc::exactnum::{int, rat};

    fn report(halved: bool, total: Rat) -> RunReport {
        RunReport {
            psi_label: "L".into(),
            m: 2,
            residues: vec![("p0".into(), rat(5, 6)), ("p1".into(), rat(-2, 3)), ("p2".into(), rat(5, 6))],
            total,
            halved,
            approx: Some(3),
            timing: None,
        }
    }

    #[test]
    fn renders_table() {
        let text = report(false, int(1)).render().unwrap();
        assert_eq!(
            text,
            "psi = L (m = 2)\ncomponent  residue\np0         5/6\np1         -2/3\np2         5/6\ntotal = 1\ntotal ~ 1.000\n"
        );
        let text = report(true, rat(1, 2)).render().unwrap();
        assert!(text.contains("sum = 1\ntotal = 1/2 * sum = 1/2\ntotal ~ 0.500\n"));
    }

    #[test]
    fn rejects_inconsistent_total() {
        assert!(matches!(report(false, int(2)).render(), Err(Error::Internal(_))));
        assert!(matches!(report(true, int(1)).render(), Err(Error::Internal(_))));
    }
}
