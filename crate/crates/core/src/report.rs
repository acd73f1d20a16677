//! BER curve CSV.
//!
//! ```text
//! # config: scheme=scck2 ntx=2 nrx=2 ...
//! # seed: 7
//! ebn0_db,bits_simulated,bit_errors,ber
//! 10,204800,3,0.000014648437500000001
//! ```
//!
//! Floats use Rust's shortest round-trip formatting, so parsing the file
//! reproduces the curve exactly.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::sim::{BerCurve, BerPoint};

pub const CSV_HEADER: &str = "ebn0_db,bits_simulated,bit_errors,ber";

pub fn emit_csv<W: Write>(curve: &BerCurve, mut out: W) -> Result<()> {
    writeln!(out, "# config: {}", curve.fingerprint)?;
    writeln!(out, "# seed: {}", curve.seed)?;
    writeln!(out, "{CSV_HEADER}")?;
    for p in &curve.points {
        writeln!(out, "{},{},{},{}", p.ebn0_db, p.bits_simulated, p.bit_errors, p.ber)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_csv_file(curve: &BerCurve, path: &Path) -> Result<()> {
    let file = File::create(path)?;
    emit_csv(curve, BufWriter::new(file))
}

pub fn parse_csv(text: &str) -> Result<BerCurve> {
    let mut fingerprint = None;
    let mut seed = None;
    let mut header = false;
    let mut points = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let bad = |what: &str| Error::Parse(format!("line {}: {what}", n + 1));
        if let Some(rest) = line.strip_prefix("# config: ") {
            fingerprint = Some(rest.to_string());
        } else if let Some(rest) = line.strip_prefix("# seed: ") {
            seed = Some(rest.trim().parse::<u64>().map_err(|_| bad("bad seed"))?);
        } else if line.starts_with('#') || line.trim().is_empty() {
            continue;
        } else if !header {
            if line != CSV_HEADER {
                return Err(bad("unexpected header"));
            }
            header = true;
        } else {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 4 {
                return Err(bad("expected 4 fields"));
            }
            points.push(BerPoint {
                ebn0_db: f[0].parse().map_err(|_| bad("bad ebn0_db"))?,
                bits_simulated: f[1].parse().map_err(|_| bad("bad bits_simulated"))?,
                bit_errors: f[2].parse().map_err(|_| bad("bad bit_errors"))?,
                ber: f[3].parse().map_err(|_| bad("bad ber"))?,
            });
        }
    }
    if !header {
        return Err(Error::Parse("missing header".into()));
    }
    Ok(BerCurve {
        fingerprint: fingerprint.ok_or_else(|| Error::Parse("missing config comment".into()))?,
        seed: seed.ok_or_else(|| Error::Parse("missing seed comment".into()))?,
        points,
    })
}
