//! Report tables. Floats are written with 15 significant digits, so equal
//! inputs give byte-identical output.

use crate::error::Result;
use crate::graph::MetricGraph;
use crate::nodal::{self, NodalOutcome};
use crate::scattering::{OpenGraph, SweepRow, SwcfEvent};
use crate::spectral::{self, Spectrum};

/// Shortest decimal form of `x` rounded to 15 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.14e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" {
        "0".into()
    } else {
        t.to_string()
    }
}

/// A header plus string rows.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// One row per eigenvalue index: `n,k,lambda,multiplicity`.
pub fn spectrum_table(spec: &Spectrum) -> Table {
    let mut t = Table::new(["n", "k", "lambda", "multiplicity"]);
    for p in &spec.pairs {
        for n in p.index..p.index + p.multiplicity {
            t.push(vec![n.to_string(), fmt_f64(p.k), fmt_f64(p.lambda()), p.multiplicity.to_string()]);
        }
    }
    t
}

/// Samples of each simple eigenfunction up to index `n_max`:
/// `n,k,edge,x,value`, `samples` interior-inclusive points per edge.
/// Degenerate indices are listed in the returned notes.
pub fn eigenfunction_table(g: &MetricGraph, spec: &Spectrum, n_max: usize, samples: usize) -> Result<(Table, Vec<String>)> {
    let mut t = Table::new(["n", "k", "edge", "x", "value"]);
    let mut notes = Vec::new();
    for p in &spec.pairs {
        if p.index > n_max {
            break;
        }
        if !p.is_simple() {
            notes.push(format!("n = {}: multiplicity {}, no eigenfunction sampled", p.index, p.multiplicity));
            continue;
        }
        let f = spectral::eigenfunction(g, p)?;
        for (i, e) in g.edges().iter().enumerate() {
            for s in 0..=samples {
                let x = e.length * s as f64 / samples as f64;
                let v = spectral::evaluate_at(g, &f, i, x);
                t.push(vec![p.index.to_string(), fmt_f64(p.k), e.id.clone(), fmt_f64(x), fmt_f64(v)]);
            }
        }
    }
    Ok((t, notes))
}

/// `n,k,mu_interior,mu_with_boundary,nu,beta,lower_bound,upper_bound,formula_mu,match`.
/// Skipped indices leave the count columns empty and `match = skipped`.
pub fn nodal_table(g: &MetricGraph, outcomes: &[NodalOutcome]) -> Result<Table> {
    let mut t = Table::new([
        "n",
        "k",
        "mu_interior",
        "mu_with_boundary",
        "nu",
        "beta",
        "lower_bound",
        "upper_bound",
        "formula_mu",
        "match",
    ]);
    let beta = g.cyclomatic_number();
    for o in outcomes {
        match o {
            NodalOutcome::Record(r) => {
                let formula = match nodal::formula_mu(g, r.n, r.k) {
                    Ok(f) => f,
                    Err(crate::Error::AmbiguousCount(_)) => None,
                    Err(e) => return Err(e),
                };
                let matched = match formula {
                    Some(f) => (f == r.mu).to_string(),
                    None => "n/a".into(),
                };
                t.push(vec![
                    r.n.to_string(),
                    fmt_f64(r.k),
                    r.mu.to_string(),
                    r.mu_with_boundary.to_string(),
                    r.nu.to_string(),
                    beta.to_string(),
                    (r.n - 1).to_string(),
                    (r.n - 1 + beta).to_string(),
                    formula.map_or(String::new(), |f| f.to_string()),
                    matched,
                ]);
            }
            NodalOutcome::Skipped { n, k, .. } => {
                let mut row = vec![n.to_string(), fmt_f64(*k)];
                row.extend(["", "", "", &beta.to_string(), "", "", "", "skipped"].map(String::from));
                t.push(row);
            }
        }
    }
    Ok(t)
}

/// `k`, real and imaginary parts of `S` row by row, eigenphases, `in_delta`.
/// Entries are named by lead vertex: `Re(S[p;q])`.
pub fn sweep_table(og: &OpenGraph, rows: &[SweepRow]) -> Table {
    let mut header = vec!["k".to_string()];
    for a in &og.marked {
        for b in &og.marked {
            header.push(format!("Re(S[{a};{b}])"));
            header.push(format!("Im(S[{a};{b}])"));
        }
    }
    header.extend((1..=og.num_leads()).map(|j| format!("phase_{j}")));
    header.push("in_delta".into());
    let mut t = Table { header, rows: Vec::new() };
    for r in rows {
        let mut row = vec![fmt_f64(r.k)];
        let m = og.num_leads();
        for i in 0..m {
            for j in 0..m {
                row.push(fmt_f64(r.s[(i, j)].re));
                row.push(fmt_f64(r.s[(i, j)].im));
            }
        }
        row.extend(r.phases.iter().map(|&p| fmt_f64(p)));
        row.push(r.in_delta.to_string());
        t.push(row);
    }
    t
}

/// One row per eigenvalue: `n,k,sign,swcf,count,differing`, the last three
/// being `N_x1x2`, `N` and `(N - N_x1x2)/2` at `k_n`.
pub fn swcf_table(events: &[SwcfEvent], zero_modes: usize) -> Table {
    let mut t = Table::new(["n", "k", "sign", "swcf", "count", "differing"]);
    let mut swcf = zero_modes as i64;
    for (i, e) in events.iter().enumerate() {
        swcf += e.sign;
        let count = (zero_modes + i + 1) as i64;
        t.push(vec![
            (zero_modes + i + 1).to_string(),
            fmt_f64(e.k),
            e.sign.to_string(),
            swcf.to_string(),
            count.to_string(),
            ((count - swcf) / 2).to_string(),
        ]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn float_format() {
        assert_eq!(fmt_f64(PI), "3.14159265358979");
        assert_eq!(fmt_f64(2.0), "2");
        assert_eq!(fmt_f64(-0.125), "-0.125");
        assert_eq!(fmt_f64(1e-7), "1e-7");
        assert_eq!(fmt_f64(1.5e20), "1.5e20");
        assert_eq!(fmt_f64(0.1 + 0.2), "0.3");
        assert_eq!(fmt_f64(999_999_999_999_999.9), "1e15");
    }
}
