//! Per-antenna OFDM with a cyclic prefix and unitary transforms.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OfdmParams {
    n_sub: usize,
    cp_len: usize,
    sample_period: f64,
}

impl OfdmParams {
    /// 256 subcarriers, 16-sample prefix, 50 ns samples.
    pub const DEFAULT: OfdmParams = OfdmParams {
        n_sub: 256,
        cp_len: 16,
        sample_period: 50e-9,
    };

    pub fn new(n_sub: usize, cp_len: usize, sample_period: f64) -> Result<Self> {
        if n_sub == 0 || !n_sub.is_power_of_two() {
            return invalid(format!("subcarrier count {n_sub} must be a power of two"));
        }
        if cp_len >= n_sub {
            return invalid(format!("cyclic prefix {cp_len} must be shorter than {n_sub}"));
        }
        if !(sample_period > 0.0) {
            return invalid("sample period must be positive");
        }
        Ok(Self {
            n_sub,
            cp_len,
            sample_period,
        })
    }

    pub fn n_sub(&self) -> usize {
        self.n_sub
    }

    pub fn cp_len(&self) -> usize {
        self.cp_len
    }

    pub fn sample_period(&self) -> f64 {
        self.sample_period
    }

    /// Samples per CP-extended symbol.
    pub fn symbol_len(&self) -> usize {
        self.n_sub + self.cp_len
    }
}

impl Default for OfdmParams {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Complex matrix of one OFDM symbol in frequency domain, one row per
/// antenna and one column per subcarrier. Stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolGrid {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl SymbolGrid {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return invalid("grid rows differ in length");
        }
        let n = rows.len();
        Ok(Self {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [Complex64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// OFDM modulator/demodulator with cached FFT plans.
#[derive(Clone)]
pub struct OfdmModem {
    params: OfdmParams,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scale: f64,
}

impl std::fmt::Debug for OfdmModem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OfdmModem").field("params", &self.params).finish()
    }
}

impl OfdmModem {
    pub fn new(params: OfdmParams) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            params,
            forward: planner.plan_fft_forward(params.n_sub),
            inverse: planner.plan_fft_inverse(params.n_sub),
            scale: 1.0 / (params.n_sub as f64).sqrt(),
        }
    }

    pub fn params(&self) -> &OfdmParams {
        &self.params
    }

    /// Unitary IDFT of one grid row, prefixed with its last `cp_len` samples.
    pub fn modulate(&self, row: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.params.n_sub;
        if row.len() != n {
            return invalid(format!("expected {n} subcarriers, got {}", row.len()));
        }
        let cp = self.params.cp_len;
        let mut out = vec![Complex64::new(0.0, 0.0); n + cp];
        let body = &mut out[cp..];
        body.copy_from_slice(row);
        self.inverse.process(body);
        for x in body.iter_mut() {
            *x *= self.scale;
        }
        let (prefix, body) = out.split_at_mut(cp);
        prefix.copy_from_slice(&body[n - cp..]);
        Ok(out)
    }

    /// Drops the cyclic prefix and applies the unitary DFT.
    pub fn demodulate(&self, samples: &[Complex64]) -> Result<Vec<Complex64>> {
        let len = self.params.symbol_len();
        if samples.len() != len {
            return invalid(format!("expected {len} samples, got {}", samples.len()));
        }
        let mut out = samples[self.params.cp_len..].to_vec();
        self.forward.process(&mut out);
        for x in out.iter_mut() {
            *x *= self.scale;
        }
        Ok(out)
    }

    /// Modulates every row of a grid.
    pub fn modulate_grid(&self, grid: &SymbolGrid) -> Result<Vec<Vec<Complex64>>> {
        (0..grid.rows()).map(|r| self.modulate(grid.row(r))).collect()
    }

    /// Demodulates the first `n_sub + cp_len` samples of every stream.
    /// Trailing samples (channel tail) are ignored.
    pub fn demodulate_streams(&self, streams: &[Vec<Complex64>]) -> Result<SymbolGrid> {
        let len = self.params.symbol_len();
        let rows = streams
            .iter()
            .map(|s| {
                if s.len() < len {
                    invalid(format!("stream of {} samples is shorter than a symbol", s.len()))
                } else {
                    self.demodulate(&s[..len])
                }
            })
            .collect::<Result<Vec<_>>>()?;
        SymbolGrid::from_rows(rows)
    }
}

/// One-shot modulation; prefer [`OfdmModem`] in loops.
pub fn ofdm_modulate(row: &[Complex64], params: &OfdmParams) -> Result<Vec<Complex64>> {
    OfdmModem::new(*params).modulate(row)
}

/// One-shot demodulation; prefer [`OfdmModem`] in loops.
pub fn ofdm_demodulate(samples: &[Complex64], params: &OfdmParams) -> Result<Vec<Complex64>> {
    OfdmModem::new(*params).demodulate(samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn params_validation() {
        assert!(OfdmParams::new(256, 16, 50e-9).is_ok());
        assert!(OfdmParams::new(100, 16, 50e-9).is_err());
        assert!(OfdmParams::new(16, 16, 50e-9).is_err());
        assert!(OfdmParams::new(16, 0, 50e-9).is_ok());
        assert!(OfdmParams::new(16, 2, 0.0).is_err());
    }

    #[test]
    fn all_ones_four_point() {
        let p = OfdmParams::new(4, 1, 1.0).unwrap();
        let out = ofdm_modulate(&[c(1., 0.); 4], &p).unwrap();
        let expect = [c(0., 0.), c(2., 0.), c(0., 0.), c(0., 0.), c(0., 0.)];
        for (a, b) in out.iter().zip(&expect) {
            assert!((a - b).norm() < 1e-14, "{out:?}");
        }
    }

    #[test]
    fn zeros_stay_zero() {
        let p = OfdmParams::new(8, 2, 1.0).unwrap();
        let out = ofdm_modulate(&[c(0., 0.); 8], &p).unwrap();
        assert!(out.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn length_mismatch() {
        let p = OfdmParams::new(8, 2, 1.0).unwrap();
        assert!(ofdm_modulate(&[c(0., 0.); 7], &p).is_err());
        assert!(ofdm_demodulate(&[c(0., 0.); 8], &p).is_err());
    }

    #[test]
    fn circular_shift_gives_phase_ramp() {
        let n = 16;
        let p = OfdmParams::new(n, 4, 1.0).unwrap();
        let modem = OfdmModem::new(p);
        let row: Vec<_> = (0..n).map(|k| c(k as f64 + 1.0, -(k as f64))).collect();
        let sym = modem.modulate(&row).unwrap();
        // delay by one sample: the prefix still covers the body, so the body
        // is circularly shifted by one
        let mut delayed = vec![sym[p.cp_len() - 1]];
        delayed.extend_from_slice(&sym[..sym.len() - 1]);
        let out = modem.demodulate(&delayed).unwrap();
        for k in 0..n {
            let ramp = Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * k as f64 / n as f64);
            assert!((out[k] - row[k] * ramp).norm() < 1e-12);
        }
    }

    #[test]
    fn grid_accessors() {
        let g = SymbolGrid::from_rows(vec![vec![c(1., 0.), c(2., 0.)], vec![c(3., 0.), c(4., 0.)]]).unwrap();
        assert_eq!(g.column(1), vec![c(2., 0.), c(4., 0.)]);
        assert!(SymbolGrid::from_rows(vec![vec![c(1., 0.)], vec![]]).is_err());
    }
}
