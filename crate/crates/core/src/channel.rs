//! Frequency-selective Rayleigh MIMO channel with AWGN.
//!
//! Taps are i.i.d. CN(0, 1/p) per transmit-receive pair, so every
//! per-subcarrier gain is CN(0, 1). One realization covers one OFDM symbol.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Error, Result};
use crate::ofdm::OfdmParams;

/// Draws a circularly-symmetric complex Gaussian with `E|z|^2 = variance`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * s, im * s)
}

/// Tap count for a delay spread at a given sample period: one tap per
/// sample-spaced path.
pub fn taps_for_delay_spread(delay_spread: f64, sample_period: f64) -> usize {
    1 + (delay_spread / sample_period).round() as usize
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    n_rx: usize,
    n_tx: usize,
    p: usize,
    /// Indexed `[(rx * n_tx + tx) * p + tap]`.
    taps: Vec<Complex64>,
}

impl ChannelRealization {
    /// Builds a realization from explicit taps laid out as `[rx][tx][tap]`.
    pub fn from_taps(n_rx: usize, n_tx: usize, p: usize, taps: Vec<Complex64>) -> Result<Self> {
        if n_rx == 0 || n_tx == 0 || p == 0 {
            return invalid("channel dimensions must be positive");
        }
        if taps.len() != n_rx * n_tx * p {
            return invalid(format!(
                "expected {} taps, got {}",
                n_rx * n_tx * p,
                taps.len()
            ));
        }
        Ok(Self { n_rx, n_tx, p, taps })
    }

    pub fn n_rx(&self) -> usize {
        self.n_rx
    }

    pub fn n_tx(&self) -> usize {
        self.n_tx
    }

    pub fn tap_count(&self) -> usize {
        self.p
    }

    /// Tap vector between receive antenna `rx` and transmit antenna `tx`.
    pub fn pair(&self, rx: usize, tx: usize) -> &[Complex64] {
        let start = (rx * self.n_tx + tx) * self.p;
        &self.taps[start..start + self.p]
    }
}

/// Independent block-fading draw.
pub fn generate_channel<R: Rng + ?Sized>(
    n_tx: usize,
    n_rx: usize,
    p: usize,
    rng: &mut R,
) -> Result<ChannelRealization> {
    if n_tx == 0 || n_rx == 0 || p == 0 {
        return invalid("n_tx, n_rx and tap count must all be >= 1");
    }
    let var = 1.0 / p as f64;
    let taps = (0..n_rx * n_tx * p)
        .map(|_| complex_gaussian(rng, var))
        .collect();
    Ok(ChannelRealization { n_rx, n_tx, p, taps })
}

/// Complex AWGN with `E|n|^2 = n0` per sample (n0/2 per real dimension).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    n0: f64,
}

impl NoiseSpec {
    pub const NONE: NoiseSpec = NoiseSpec { n0: 0.0 };

    pub fn new(n0: f64) -> Result<Self> {
        if !(n0 >= 0.0) || !n0.is_finite() {
            return invalid(format!("noise density {n0} must be finite and >= 0"));
        }
        Ok(Self { n0 })
    }

    /// `N0 = Es / (bits · 10^(EbN0/10))`, with `Es` the total transmit energy
    /// per subcarrier. `+∞` dB yields a noiseless spec.
    pub fn from_ebn0_db(ebn0_db: f64, bits_per_subcarrier: u32, es_total: f64) -> Result<Self> {
        if ebn0_db.is_nan() {
            return invalid("EbN0 is NaN");
        }
        if bits_per_subcarrier == 0 {
            return invalid("bits per subcarrier must be >= 1");
        }
        if ebn0_db == f64::INFINITY {
            return Ok(Self::NONE);
        }
        Self::new(es_total / (f64::from(bits_per_subcarrier) * 10f64.powf(ebn0_db / 10.0)))
    }

    pub fn n0(&self) -> f64 {
        self.n0
    }

    pub fn variance_per_real_dim(&self) -> f64 {
        self.n0 / 2.0
    }
}

/// Convolves each transmit stream with its tap vector, sums per receive
/// antenna and adds noise. `tx` holds `n_tx` streams of equal length `T`;
/// the result holds `n_rx` streams of length `T + p - 1`.
pub fn apply_channel<R: Rng + ?Sized>(
    tx: &[Vec<Complex64>],
    channel: &ChannelRealization,
    noise: NoiseSpec,
    rng: &mut R,
) -> Result<Vec<Vec<Complex64>>> {
    if tx.len() != channel.n_tx {
        return invalid(format!(
            "channel has {} transmit antennas, got {} streams",
            channel.n_tx,
            tx.len()
        ));
    }
    let t = tx.first().map_or(0, Vec::len);
    if tx.iter().any(|s| s.len() != t) {
        return invalid("transmit streams differ in length");
    }
    let p = channel.p;
    let out_len = t + p - 1;
    let mut out = vec![vec![Complex64::new(0.0, 0.0); out_len]; channel.n_rx];
    for (rx, stream) in out.iter_mut().enumerate() {
        for (tx_idx, input) in tx.iter().enumerate() {
            for (i, &h) in channel.pair(rx, tx_idx).iter().enumerate() {
                for (o, &x) in stream[i..i + t].iter_mut().zip(input) {
                    *o += h * x;
                }
            }
        }
        if noise.n0 > 0.0 {
            for o in stream.iter_mut() {
                *o += complex_gaussian(rng, noise.n0);
            }
        }
    }
    Ok(out)
}

/// Per-subcarrier `n_rx × n_tx` channel matrices.
#[derive(Debug, Clone)]
pub struct FrequencyResponse {
    per_subcarrier: Vec<DMatrix<Complex64>>,
}

impl FrequencyResponse {
    pub fn n_sub(&self) -> usize {
        self.per_subcarrier.len()
    }

    pub fn at(&self, k: usize) -> &DMatrix<Complex64> {
        &self.per_subcarrier[k]
    }

    pub fn iter(&self) -> impl Iterator<Item = &DMatrix<Complex64>> {
        self.per_subcarrier.iter()
    }
}

/// `H(k)[m,n] = Σ_i taps[m,n,i]·e^{-j2πk·i/n_sub}`.
pub fn freq_response(channel: &ChannelRealization, params: &OfdmParams) -> Result<FrequencyResponse> {
    if channel.p > params.cp_len() + 1 {
        return Err(Error::Precondition(format!(
            "{} taps exceed what a {}-sample prefix absorbs",
            channel.p,
            params.cp_len()
        )));
    }
    let n = params.n_sub();
    let twiddle: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(1.0, -2.0 * PI * j as f64 / n as f64))
        .collect();
    let per_subcarrier = (0..n)
        .map(|k| {
            DMatrix::from_fn(channel.n_rx, channel.n_tx, |m, t| {
                channel
                    .pair(m, t)
                    .iter()
                    .enumerate()
                    .map(|(i, &h)| h * twiddle[(k * i) % n])
                    .sum()
            })
        })
        .collect();
    Ok(FrequencyResponse { per_subcarrier })
}
