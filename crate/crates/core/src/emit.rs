//! CSV and JSON writers. CSV is RFC 4180 with `\n` line endings and floats in `{:.16e}`
//! (17 significant digits); JSON uses serde_json's shortest round-trip float form.

use std::io::Write;

use serde::Serialize;

use crate::entropy::{EntropyReport, FisherCurve};
use crate::error::Result;
use crate::tracepoly::LawTable;

pub fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out)
}

/// Columns `necklace, re, im, stderr, n`; exact entries leave `stderr` and `n` empty.
pub fn write_law_csv(table: &LawTable, out: impl Write) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["necklace", "re", "im", "stderr", "n"])?;
    for (neck, e) in table.iter() {
        w.write_record([
            neck.to_string(),
            fmt_float(e.value.re),
            fmt_float(e.value.im),
            e.stderr.map(fmt_float).unwrap_or_default(),
            e.n_samples.map(|n| n.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Columns `t, fisher, stderr, lower_bound, upper_bound`.
pub fn write_fisher_csv(curve: &FisherCurve, out: impl Write) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["t", "fisher", "stderr", "lower_bound", "upper_bound"])?;
    for p in &curve.points {
        w.write_record([
            fmt_float(p.t),
            fmt_float(p.value),
            fmt_float(p.stderr),
            fmt_float(curve.lower_bound(p.t)),
            fmt_float(curve.upper_bound(p.t)),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_entropy_json(reports: &[EntropyReport], mut out: impl Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, reports)?;
    out.write_all(b"\n")?;
    Ok(())
}

/// One evaluation of `R_{t,ℓ}V` or `T_{t,ℓ}u` at a point.
#[derive(Clone, Debug, Serialize)]
pub struct FlowRow {
    pub mode: String,
    pub target: String,
    pub n: usize,
    pub t: f64,
    pub ell: u32,
    pub x: f64,
    pub value: f64,
    pub gradient: f64,
    pub stderr: f64,
}

pub fn write_flow_csv(rows: &[FlowRow], out: impl Write) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["mode", "target", "n", "t", "ell", "x", "value", "gradient", "stderr"])?;
    for r in rows {
        w.write_record([
            r.mode.clone(),
            r.target.clone(),
            r.n.to_string(),
            fmt_float(r.t),
            r.ell.to_string(),
            fmt_float(r.x),
            fmt_float(r.value),
            fmt_float(r.gradient),
            fmt_float(r.stderr),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Outcome of one verification item.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub threshold: f64,
    pub detail: String,
}

pub fn write_checks_csv(checks: &[CheckResult], out: impl Write) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["name", "passed", "measured", "threshold", "detail"])?;
    for c in checks {
        w.write_record([
            c.name.clone(),
            c.passed.to_string(),
            fmt_float(c.measured),
            fmt_float(c.threshold),
            c.detail.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::{Coeff, GenWord};
    use crate::tracepoly::Necklace;

    #[test]
    fn empty_table_is_header_only() {
        let mut buf = Vec::new();
        write_law_csv(&LawTable::new(1), &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "necklace,re,im,stderr,n\n");
    }

    #[test]
    fn rows_use_seventeen_digits() {
        let mut t = LawTable::new(2);
        t.insert(Necklace::new(&GenWord::new(vec![1, 0, 0])), Coeff::new(1.0 / 3.0, 0.0));
        let mut buf = Vec::new();
        write_law_csv(&t, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let row = text.lines().nth(1).unwrap();
        assert_eq!(row, "X1^2*X2,3.3333333333333331e-1,0.0000000000000000e0,,");
        let re: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(re, 1.0 / 3.0);
    }

    #[test]
    fn detail_with_commas_is_quoted() {
        let c = CheckResult { name: "a".into(), passed: true, measured: 1.0, threshold: 2.0, detail: "x, y".into() };
        let mut buf = Vec::new();
        write_checks_csv(&[c], &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().ends_with(",\"x, y\"\n"));
    }
}
