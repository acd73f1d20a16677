//! Monte Carlo BER engine.
//!
//! Every OFDM symbol draws its channel, bits and noise from its own ChaCha
//! stream: the master seed selects the key and `frame * symbols_per_frame +
//! symbol` selects the stream. Results therefore do not depend on how
//! frames are scheduled across threads. Frames are reduced in index order
//! and early stopping is checked at frame boundaries.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{apply_channel, freq_response, generate_channel, NoiseSpec};
use crate::codebook::{cck2_codebook, cck4_reference_codebook, cck8_codebook, Codebook};
use crate::error::{invalid, Result};
use crate::modem::{
    receive_scck, receive_sm, scck_map, sm_bits_per_subcarrier, sm_map, BitMatrix, Constellation,
    ScckDetector, SmReceiver,
};
use crate::ofdm::{OfdmModem, OfdmParams};

/// Frames evaluated per parallel batch before the early-stop check.
const FRAME_BATCH: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Scck2,
    Scck4,
    Scck8,
    SmBpsk,
    Sm4Qam,
}

impl Scheme {
    pub const ALL: [Scheme; 5] = [
        Scheme::Scck2,
        Scheme::Scck4,
        Scheme::Scck8,
        Scheme::SmBpsk,
        Scheme::Sm4Qam,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Scck2 => "scck2",
            Scheme::Scck4 => "scck4",
            Scheme::Scck8 => "scck8",
            Scheme::SmBpsk => "sm-bpsk",
            Scheme::Sm4Qam => "sm-4qam",
        }
    }

    /// Transmit antennas an SCCKM scheme requires (its codeword length).
    pub fn required_n_tx(self) -> Option<usize> {
        match self {
            Scheme::Scck2 => Some(2),
            Scheme::Scck4 => Some(4),
            Scheme::Scck8 => Some(8),
            Scheme::SmBpsk | Scheme::Sm4Qam => None,
        }
    }

    pub fn constellation(self) -> Option<Constellation> {
        match self {
            Scheme::SmBpsk => Some(Constellation::Bpsk),
            Scheme::Sm4Qam => Some(Constellation::Qpsk),
            _ => None,
        }
    }

    /// Codebook used on the air for SCCKM schemes.
    pub fn codebook(self) -> Option<Codebook> {
        match self {
            Scheme::Scck2 => Some(cck2_codebook()),
            Scheme::Scck4 => Some(cck4_reference_codebook()),
            Scheme::Scck8 => Some(cck8_codebook()),
            _ => None,
        }
    }

    pub fn bits_per_subcarrier(self, n_tx: usize) -> Result<u32> {
        match self {
            Scheme::Scck2 => Ok(2),
            Scheme::Scck4 => Ok(4),
            Scheme::Scck8 => Ok(8),
            Scheme::SmBpsk => sm_bits_per_subcarrier(n_tx, Constellation::Bpsk),
            Scheme::Sm4Qam => sm_bits_per_subcarrier(n_tx, Constellation::Qpsk),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|sc| sc.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                crate::Error::InvalidArgument(format!(
                    "unknown scheme {s:?} (expected scck2, scck4, scck8, sm-bpsk or sm-4qam)"
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub scheme: Scheme,
    pub n_tx: usize,
    pub n_rx: usize,
    pub ebn0_db: Vec<f64>,
    pub frames: usize,
    pub symbols_per_frame: usize,
    pub ofdm: OfdmParams,
    pub taps: usize,
    pub seed: u64,
    pub max_bit_errors: Option<u64>,
    pub sm_receiver: SmReceiver,
}

impl SimConfig {
    /// Defaults: 1000 frames of 20 symbols, 256 subcarriers, 16-sample
    /// prefix, 2 taps, seed 0, no early stop.
    pub fn new(scheme: Scheme, n_tx: usize, n_rx: usize, ebn0_db: Vec<f64>) -> Self {
        Self {
            scheme,
            n_tx,
            n_rx,
            ebn0_db,
            frames: 1000,
            symbols_per_frame: 20,
            ofdm: OfdmParams::DEFAULT,
            taps: 2,
            seed: 0,
            max_bit_errors: None,
            sm_receiver: SmReceiver::JointMl,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(n) = self.scheme.required_n_tx() {
            if self.n_tx != n {
                return invalid(format!("{} needs {n} transmit antennas, got {}", self.scheme, self.n_tx));
            }
            if self.n_rx < self.n_tx {
                return invalid(format!(
                    "zero forcing needs n_rx >= n_tx, got {}x{}",
                    self.n_tx, self.n_rx
                ));
            }
        } else {
            if self.n_tx < 2 {
                return invalid("spatial modulation needs at least 2 transmit antennas");
            }
            self.scheme.bits_per_subcarrier(self.n_tx)?;
            if self.sm_receiver == SmReceiver::ZeroForcing && self.n_rx < self.n_tx {
                return invalid(format!(
                    "zero forcing needs n_rx >= n_tx, got {}x{}",
                    self.n_tx, self.n_rx
                ));
            }
        }
        if self.n_rx == 0 {
            return invalid("n_rx must be >= 1");
        }
        if self.frames == 0 || self.symbols_per_frame == 0 {
            return invalid("frames and symbols per frame must be >= 1");
        }
        if self.ebn0_db.is_empty() {
            return invalid("EbN0 list is empty");
        }
        if self.ebn0_db.iter().any(|x| x.is_nan()) {
            return invalid("EbN0 list contains NaN");
        }
        if self.taps == 0 || self.taps > self.ofdm.cp_len() + 1 {
            return invalid(format!(
                "tap count {} must be in 1..={}",
                self.taps,
                self.ofdm.cp_len() + 1
            ));
        }
        Ok(())
    }

    pub fn bits_per_subcarrier(&self) -> Result<u32> {
        self.scheme.bits_per_subcarrier(self.n_tx)
    }

    pub fn bits_per_symbol(&self) -> Result<u64> {
        Ok(u64::from(self.bits_per_subcarrier()?) * self.ofdm.n_sub() as u64)
    }

    /// Single-line canonical description; equal configs give equal strings.
    pub fn canonical_string(&self) -> String {
        let ebn0 = self
            .ebn0_db
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",");
        let max = self
            .max_bit_errors
            .map_or_else(|| "none".to_string(), |m| m.to_string());
        let mut line = format!(
            "scheme={} ntx={} nrx={} ebn0={} frames={} symbols={} nsub={} cp={} taps={} max_bit_errors={}",
            self.scheme,
            self.n_tx,
            self.n_rx,
            ebn0,
            self.frames,
            self.symbols_per_frame,
            self.ofdm.n_sub(),
            self.ofdm.cp_len(),
            self.taps,
            max
        );
        if self.scheme.constellation().is_some() {
            line.push_str(" sm_receiver=");
            line.push_str(self.sm_receiver.name());
        }
        line
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerPoint {
    pub ebn0_db: f64,
    pub bits_simulated: u64,
    pub bit_errors: u64,
    pub ber: f64,
}

impl BerPoint {
    pub fn new(ebn0_db: f64, bits_simulated: u64, bit_errors: u64) -> Self {
        let ber = if bits_simulated == 0 {
            0.0
        } else {
            bit_errors as f64 / bits_simulated as f64
        };
        Self {
            ebn0_db,
            bits_simulated,
            bit_errors,
            ber,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BerCurve {
    pub fingerprint: String,
    pub seed: u64,
    pub points: Vec<BerPoint>,
}

enum Receiver {
    Scck(ScckDetector),
    Sm(Constellation, SmReceiver),
}

/// Immutable per-run state shared by all worker threads.
struct Link<'a> {
    config: &'a SimConfig,
    modem: OfdmModem,
    receiver: Receiver,
    codebook: Option<Codebook>,
    bits_per_subcarrier: usize,
}

impl<'a> Link<'a> {
    fn new(config: &'a SimConfig) -> Result<Self> {
        config.validate()?;
        let codebook = config.scheme.codebook();
        let receiver = match (&codebook, config.scheme.constellation()) {
            (Some(cb), _) => Receiver::Scck(ScckDetector::new(cb.clone())),
            (None, Some(c)) => Receiver::Sm(c, config.sm_receiver),
            (None, None) => unreachable!("every scheme is SCCKM or SM"),
        };
        Ok(Self {
            config,
            modem: OfdmModem::new(config.ofdm),
            receiver,
            codebook,
            bits_per_subcarrier: config.bits_per_subcarrier()? as usize,
        })
    }

    fn symbol_rng(&self, frame: usize, symbol: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
        rng.set_stream((frame * self.config.symbols_per_frame + symbol) as u64);
        rng
    }

    /// Bit errors in one OFDM symbol.
    fn run_symbol(&self, frame: usize, symbol: usize, noise: NoiseSpec) -> Result<u64> {
        let cfg = self.config;
        let mut rng = self.symbol_rng(frame, symbol);
        let channel = generate_channel(cfg.n_tx, cfg.n_rx, cfg.taps, &mut rng)?;
        let bits = BitMatrix::random(self.bits_per_subcarrier, cfg.ofdm.n_sub(), &mut rng);
        let grid = match (&self.codebook, &self.receiver) {
            (Some(cb), _) => scck_map(&bits, cb)?,
            (None, Receiver::Sm(c, _)) => sm_map(&bits, cfg.n_tx, *c)?,
            (None, Receiver::Scck(_)) => unreachable!(),
        };
        let tx = self.modem.modulate_grid(&grid)?;
        let rx = apply_channel(&tx, &channel, noise, &mut rng)?;
        let received = self.modem.demodulate_streams(&rx)?;
        let response = freq_response(&channel, &cfg.ofdm)?;
        let detected = match &self.receiver {
            Receiver::Scck(det) => receive_scck(&received, &response, det)?,
            Receiver::Sm(c, rx) => receive_sm(&received, &response, cfg.n_tx, *c, *rx)?,
        };
        Ok(bits.hamming_distance(&detected.bits))
    }

    fn run_frame(&self, frame: usize, noise: NoiseSpec) -> Result<u64> {
        (0..self.config.symbols_per_frame)
            .map(|s| self.run_symbol(frame, s, noise))
            .sum()
    }
}

/// Simulates one EbN0 point. `f64::INFINITY` runs noiselessly.
pub fn run_point(config: &SimConfig, ebn0_db: f64) -> Result<BerPoint> {
    let link = Link::new(config)?;
    // unit total transmit power per subcarrier for every scheme
    let noise = NoiseSpec::from_ebn0_db(ebn0_db, link.bits_per_subcarrier as u32, 1.0)?;
    let bits_per_frame = config.bits_per_symbol()? * config.symbols_per_frame as u64;

    let mut errors = 0u64;
    let mut frames_run = 0usize;
    'outer: for start in (0..config.frames).step_by(FRAME_BATCH) {
        let end = (start + FRAME_BATCH).min(config.frames);
        let batch = (start..end)
            .into_par_iter()
            .map(|f| link.run_frame(f, noise))
            .collect::<Result<Vec<u64>>>()?;
        for e in batch {
            errors += e;
            frames_run += 1;
            if config.max_bit_errors.is_some_and(|m| errors >= m) {
                break 'outer;
            }
        }
    }
    Ok(BerPoint::new(ebn0_db, frames_run as u64 * bits_per_frame, errors))
}

/// Runs every EbN0 point of the config; points come back sorted by EbN0.
pub fn run_sweep(config: &SimConfig) -> Result<BerCurve> {
    config.validate()?;
    let mut points = config
        .ebn0_db
        .par_iter()
        .map(|&e| run_point(config, e))
        .collect::<Result<Vec<_>>>()?;
    points.sort_by(|a, b| a.ebn0_db.total_cmp(&b.ebn0_db));
    Ok(BerCurve {
        fingerprint: config.canonical_string(),
        seed: config.seed,
        points,
    })
}
