//! Run settings from a `key=value` file and command-line flags.
//!
//! Keys match the long flag names: `scheme`, `ntx`, `nrx`, `ebn0`,
//! `frames`, `symbols`, `seed`, `out`, `taps`, `nsub`, `cp`,
//! `max-bit-errors`, `sm-receiver`, `threads`. Blank lines and `#` comments are skipped.
//! Flags override the file.

use std::path::PathBuf;

use crate::error::{invalid, Error, Result};
use crate::modem::SmReceiver;
use crate::ofdm::OfdmParams;
use crate::sim::{Scheme, SimConfig};

/// Parses `start:step:stop` (inclusive) or a comma-separated list.
pub fn parse_ebn0_list(spec: &str) -> Result<Vec<f64>> {
    let num = |s: &str| -> Result<f64> {
        let s = s.trim();
        match s {
            "inf" | "+inf" => Ok(f64::INFINITY),
            _ => s
                .parse::<f64>()
                .ok()
                .filter(|v| !v.is_nan())
                .ok_or_else(|| Error::InvalidArgument(format!("bad EbN0 value {s:?}"))),
        }
    };
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [start, step, stop] => {
            let (start, step, stop) = (num(start)?, num(step)?, num(stop)?);
            if !(step > 0.0) || !step.is_finite() || !start.is_finite() || !stop.is_finite() || stop < start {
                return invalid(format!("bad EbN0 range {spec:?}"));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            Ok((0..count).map(|i| start + step * i as f64).collect())
        }
        [list] => {
            let v = list.split(',').map(num).collect::<Result<Vec<_>>>()?;
            if v.is_empty() {
                return invalid("empty EbN0 list");
            }
            Ok(v)
        }
        _ => invalid(format!("bad EbN0 spec {spec:?}")),
    }
}

/// Partially specified settings; unset fields fall back to lower layers.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub scheme: Option<Scheme>,
    pub ntx: Option<usize>,
    pub nrx: Option<usize>,
    pub ebn0: Option<Vec<f64>>,
    pub frames: Option<usize>,
    pub symbols: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub taps: Option<usize>,
    pub nsub: Option<usize>,
    pub cp: Option<usize>,
    pub max_bit_errors: Option<u64>,
    pub sm_receiver: Option<SmReceiver>,
    pub threads: Option<usize>,
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("bad value {v:?} for {key}")))
}

impl Settings {
    pub fn from_kv(text: &str) -> Result<Self> {
        let mut s = Settings::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key=value", n + 1)))?;
            s.set(key.trim(), value.trim())?;
        }
        Ok(s)
    }

    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "scheme" => self.scheme = Some(v.parse()?),
            "ntx" => self.ntx = Some(parse_num(key, v)?),
            "nrx" => self.nrx = Some(parse_num(key, v)?),
            "ebn0" => self.ebn0 = Some(parse_ebn0_list(v)?),
            "frames" => self.frames = Some(parse_num(key, v)?),
            "symbols" => self.symbols = Some(parse_num(key, v)?),
            "seed" => self.seed = Some(parse_num(key, v)?),
            "out" => self.out = Some(PathBuf::from(v)),
            "taps" => self.taps = Some(parse_num(key, v)?),
            "nsub" => self.nsub = Some(parse_num(key, v)?),
            "cp" => self.cp = Some(parse_num(key, v)?),
            "max-bit-errors" | "max_bit_errors" => self.max_bit_errors = Some(parse_num(key, v)?),
            "sm-receiver" | "sm_receiver" => self.sm_receiver = Some(v.parse()?),
            "threads" => self.threads = Some(parse_num(key, v)?),
            _ => return invalid(format!("unknown config key {key:?}")),
        }
        Ok(())
    }

    /// Fields set in `over` win.
    pub fn overlay(self, over: Settings) -> Settings {
        Settings {
            scheme: over.scheme.or(self.scheme),
            ntx: over.ntx.or(self.ntx),
            nrx: over.nrx.or(self.nrx),
            ebn0: over.ebn0.or(self.ebn0),
            frames: over.frames.or(self.frames),
            symbols: over.symbols.or(self.symbols),
            seed: over.seed.or(self.seed),
            out: over.out.or(self.out),
            taps: over.taps.or(self.taps),
            nsub: over.nsub.or(self.nsub),
            cp: over.cp.or(self.cp),
            max_bit_errors: over.max_bit_errors.or(self.max_bit_errors),
            sm_receiver: over.sm_receiver.or(self.sm_receiver),
            threads: over.threads.or(self.threads),
        }
    }

    /// Builds and validates a [`SimConfig`]. `ntx` defaults to the
    /// codeword length for SCCKM schemes and `nrx` to `ntx`.
    pub fn to_config(&self) -> Result<SimConfig> {
        let scheme = self
            .scheme
            .ok_or_else(|| Error::InvalidArgument("--scheme is required".into()))?;
        let n_tx = match (self.ntx, scheme.required_n_tx()) {
            (Some(n), _) | (None, Some(n)) => n,
            (None, None) => return invalid(format!("--ntx is required for {scheme}")),
        };
        let ebn0 = self
            .ebn0
            .clone()
            .ok_or_else(|| Error::InvalidArgument("--ebn0 is required".into()))?;
        let mut cfg = SimConfig::new(scheme, n_tx, self.nrx.unwrap_or(n_tx), ebn0);
        cfg.frames = self.frames.unwrap_or(cfg.frames);
        cfg.symbols_per_frame = self.symbols.unwrap_or(cfg.symbols_per_frame);
        cfg.seed = self.seed.unwrap_or(cfg.seed);
        cfg.taps = self.taps.unwrap_or(cfg.taps);
        cfg.max_bit_errors = self.max_bit_errors;
        cfg.sm_receiver = self.sm_receiver.unwrap_or_default();
        cfg.ofdm = OfdmParams::new(
            self.nsub.unwrap_or(OfdmParams::DEFAULT.n_sub()),
            self.cp.unwrap_or(OfdmParams::DEFAULT.cp_len()),
            OfdmParams::DEFAULT.sample_period(),
        )?;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ebn0_ranges_and_lists() {
        assert_eq!(parse_ebn0_list("0:2:6").unwrap(), vec![0.0, 2.0, 4.0, 6.0]);
        assert_eq!(parse_ebn0_list("0:0.1:0.3").unwrap().len(), 4);
        assert_eq!(parse_ebn0_list("10").unwrap(), vec![10.0]);
        assert_eq!(parse_ebn0_list("1, 5,3").unwrap(), vec![1.0, 5.0, 3.0]);
        assert_eq!(parse_ebn0_list("inf").unwrap(), vec![f64::INFINITY]);
        for bad in ["", "a", "0:0:5", "5:1:0", "1:2", "0:1:2:3", "nan"] {
            assert!(parse_ebn0_list(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn kv_file_and_overrides() {
        let file = Settings::from_kv("# sweep\nscheme = scck4\nebn0=0:5:10\nframes=3\nseed=9\n\n").unwrap();
        let flags = Settings {
            frames: Some(7),
            nrx: Some(8),
            ..Default::default()
        };
        let cfg = file.overlay(flags).to_config().unwrap();
        assert_eq!(cfg.scheme, Scheme::Scck4);
        assert_eq!((cfg.n_tx, cfg.n_rx), (4, 8));
        assert_eq!(cfg.frames, 7);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.ebn0_db, vec![0.0, 5.0, 10.0]);
        assert_eq!(cfg.ofdm, OfdmParams::DEFAULT);
    }

    #[test]
    fn kv_errors() {
        assert!(Settings::from_kv("scheme").is_err());
        assert!(Settings::from_kv("colour=red").is_err());
        assert!(Settings::from_kv("frames=many").is_err());
        assert!(Settings::default().to_config().is_err());
        let s = Settings::from_kv("scheme=sm-bpsk\nebn0=1").unwrap();
        assert!(s.to_config().is_err(), "SM needs an explicit ntx");
    }
}
