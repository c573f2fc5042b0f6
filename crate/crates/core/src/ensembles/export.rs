//! JSON-lines batch export: one header record, then one record per sample whose matrices are
//! base64 strings of little-endian `f64` pairs `(re, im)` in row-major order.

use std::io::{BufRead, Write};

use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{CMat, HermTuple};

use super::{BatchSource, SampleBatch};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchHeader {
    pub n: usize,
    pub m: usize,
    pub count: usize,
    pub seed: u64,
    pub potential: String,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "lowercase")]
enum Record {
    Header(BatchHeader),
    Sample { index: usize, mats: Vec<String> },
}

fn encode(a: &CMat) -> String {
    let n = a.nrows();
    let mut bytes = Vec::with_capacity(16 * n * n);
    for i in 0..n {
        for k in 0..n {
            bytes.extend_from_slice(&a[(i, k)].re.to_le_bytes());
            bytes.extend_from_slice(&a[(i, k)].im.to_le_bytes());
        }
    }
    STANDARD.encode(bytes)
}

fn decode(s: &str, n: usize) -> Result<CMat> {
    let bytes = STANDARD
        .decode(s)
        .map_err(|e| Error::Parse { pos: 0, msg: format!("base64: {e}") })?;
    if bytes.len() != 16 * n * n {
        return Err(Error::Shape(format!("payload of {} bytes for N = {n}", bytes.len())));
    }
    let f = |k: usize| f64::from_le_bytes(bytes[8 * k..8 * k + 8].try_into().expect("8 bytes"));
    Ok(CMat::from_fn(n, n, |i, k| {
        let idx = 2 * (i * n + k);
        Complex64::new(f(idx), f(idx + 1))
    }))
}

pub fn write_batch_jsonl(batch: &SampleBatch, potential: &str, mut out: impl Write) -> Result<()> {
    let header = BatchHeader {
        n: batch.n,
        m: batch.m,
        count: batch.len(),
        seed: batch.seed,
        potential: potential.to_string(),
    };
    serde_json::to_writer(&mut out, &Record::Header(header))?;
    out.write_all(b"\n")?;
    for (index, x) in batch.samples.iter().enumerate() {
        let mats = x.mats().iter().map(encode).collect();
        serde_json::to_writer(&mut out, &Record::Sample { index, mats })?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_batch_jsonl(input: impl BufRead) -> Result<(BatchHeader, SampleBatch)> {
    let mut header: Option<BatchHeader> = None;
    let mut samples = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<Record>(&line)? {
            Record::Header(h) => header = Some(h),
            Record::Sample { mats, .. } => {
                let h = header.as_ref().ok_or_else(|| Error::Parse {
                    pos: lineno,
                    msg: "sample record before header".into(),
                })?;
                let mats = mats.iter().map(|s| decode(s, h.n)).collect::<Result<Vec<_>>>()?;
                samples.push(HermTuple::new(mats)?);
            }
        }
    }
    let h = header.ok_or_else(|| Error::Parse { pos: 0, msg: "missing header record".into() })?;
    let batch = SampleBatch { n: h.n, m: h.m, seed: h.seed, source: BatchSource::Imported, samples };
    Ok((h, batch))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::sample_gue;

    #[test]
    fn round_trip_is_bit_exact() {
        let b = sample_gue(3, 2, 1.0, 4, 9).unwrap();
        let mut buf = Vec::new();
        write_batch_jsonl(&b, "0.5*tr(X1^2)", &mut buf).unwrap();
        let (h, back) = read_batch_jsonl(buf.as_slice()).unwrap();
        assert_eq!(h.potential, "0.5*tr(X1^2)");
        assert_eq!(h.count, 4);
        assert_eq!(back.samples, b.samples);
    }
}
