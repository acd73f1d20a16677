//! Transmit mapping and per-subcarrier detection for SCCKM and SM.
//!
//! SCCKM spreads one CCK codeword per subcarrier across the transmit array,
//! scaled by `1/sqrt(N_t)` so the total power per subcarrier is 1. The
//! receiver zero-forces each subcarrier and picks the nearest normalized
//! codeword. SM activates one antenna per subcarrier and is detected by
//! joint ML over (antenna, symbol).

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::channel::FrequencyResponse;
use crate::codebook::Codebook;
use crate::error::{invalid, Result};
use crate::ofdm::SymbolGrid;

/// Relative singular-value threshold below which a channel is degenerate.
pub const RANK_TOL: f64 = 1e-10;

/// Binary matrix with one column of `rows` bits per subcarrier. Row 0 is
/// the first written bit, i.e. the most significant bit of the column
/// pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    bits: Vec<u8>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            bits: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return invalid("bit rows differ in length");
        }
        if rows.iter().flatten().any(|&b| b > 1) {
            return invalid("bits must be 0 or 1");
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            bits: rows.concat(),
        })
    }

    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        let bits = (0..rows * cols).map(|_| u8::from(rng.random::<bool>())).collect();
        Self { rows, cols, bits }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.bits[r * self.cols + c]
    }

    pub fn column_pattern(&self, c: usize) -> u32 {
        (0..self.rows).fold(0, |acc, r| (acc << 1) | u32::from(self.get(r, c)))
    }

    pub fn set_column_pattern(&mut self, c: usize, pattern: u32) {
        for r in 0..self.rows {
            let shift = self.rows - 1 - r;
            self.bits[r * self.cols + c] = ((pattern >> shift) & 1) as u8;
        }
    }

    /// Number of positions where the two matrices differ.
    pub fn hamming_distance(&self, other: &BitMatrix) -> u64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count() as u64
    }
}

/// Maps each bit column to its codeword, scaled by `1/sqrt(N)`.
pub fn scck_map(bits: &BitMatrix, codebook: &Codebook) -> Result<SymbolGrid> {
    if bits.rows() != codebook.bits_per_codeword() as usize {
        return invalid(format!(
            "codebook takes {} bits per subcarrier, got {} rows",
            codebook.bits_per_codeword(),
            bits.rows()
        ));
    }
    let n = codebook.length_n();
    let scale = 1.0 / (n as f64).sqrt();
    let mut grid = SymbolGrid::zeros(n, bits.cols());
    for c in 0..bits.cols() {
        let word = codebook.encode(bits.column_pattern(c));
        for (a, chip) in word.chips().iter().enumerate() {
            grid.set(a, c, chip * scale);
        }
    }
    Ok(grid)
}

/// SM symbol alphabet. Labels are Gray coded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constellation {
    /// 0 → +1, 1 → −1.
    Bpsk,
    /// 4QAM: first bit picks the sign of the real part, second bit the
    /// imaginary part (0 → +), amplitude 1/sqrt(2) on each.
    Qpsk,
}

impl Constellation {
    pub fn size(self) -> usize {
        match self {
            Constellation::Bpsk => 2,
            Constellation::Qpsk => 4,
        }
    }

    pub fn bits(self) -> u32 {
        self.size().trailing_zeros()
    }

    pub fn point(self, label: u32) -> Complex64 {
        match self {
            Constellation::Bpsk => Complex64::new(if label & 1 == 0 { 1.0 } else { -1.0 }, 0.0),
            Constellation::Qpsk => {
                let a = std::f64::consts::FRAC_1_SQRT_2;
                let re = if label & 0b10 == 0 { a } else { -a };
                let im = if label & 0b01 == 0 { a } else { -a };
                Complex64::new(re, im)
            }
        }
    }

    pub fn points(self) -> Vec<Complex64> {
        (0..self.size() as u32).map(|l| self.point(l)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmSymbol {
    pub antenna_index: usize,
    pub label: u32,
    pub constellation_point: Complex64,
}

/// Bits carried per subcarrier by SM on `n_tx` antennas.
pub fn sm_bits_per_subcarrier(n_tx: usize, constellation: Constellation) -> Result<u32> {
    if n_tx == 0 || !n_tx.is_power_of_two() {
        return invalid(format!("SM needs a power-of-two antenna count, got {n_tx}"));
    }
    Ok(n_tx.trailing_zeros() + constellation.bits())
}

/// Splits a pattern into antenna index (leading bits) and symbol label.
pub fn sm_symbol(pattern: u32, n_tx: usize, constellation: Constellation) -> SmSymbol {
    let sym_bits = constellation.bits();
    let label = pattern & ((1 << sym_bits) - 1);
    let antenna_index = (pattern >> sym_bits) as usize;
    debug_assert!(antenna_index < n_tx);
    SmSymbol {
        antenna_index,
        label,
        constellation_point: constellation.point(label),
    }
}

pub fn sm_map(bits: &BitMatrix, n_tx: usize, constellation: Constellation) -> Result<SymbolGrid> {
    let m = sm_bits_per_subcarrier(n_tx, constellation)? as usize;
    if bits.rows() != m {
        return invalid(format!("SM with {n_tx} antennas takes {m} bits, got {}", bits.rows()));
    }
    let mut grid = SymbolGrid::zeros(n_tx, bits.cols());
    for c in 0..bits.cols() {
        let s = sm_symbol(bits.column_pattern(c), n_tx, constellation);
        grid.set(s.antenna_index, c, s.constellation_point);
    }
    Ok(grid)
}

/// Zero-forcing filter `H⁺` for one subcarrier, from the SVD of `H`.
/// Singular values below `RANK_TOL·σ_max` are dropped, which gives the
/// minimum-norm least-squares solution on degenerate channels.
#[derive(Debug, Clone)]
pub struct ZfEqualizer {
    pinv: DMatrix<Complex64>,
    degenerate: bool,
}

impl ZfEqualizer {
    pub fn new(h: &DMatrix<Complex64>) -> Result<Self> {
        let (n_rx, n_tx) = h.shape();
        if n_tx == 0 || n_rx < n_tx {
            return invalid(format!("ZF needs n_rx >= n_tx >= 1, got {n_rx}x{n_tx}"));
        }
        let svd = h.clone().svd(true, true);
        let u = svd.u.as_ref().expect("U requested");
        let v_t = svd.v_t.as_ref().expect("V^H requested");
        let s_max = svd.singular_values.max();
        let cutoff = RANK_TOL * s_max;
        let mut degenerate = !(s_max > 0.0);
        // H⁺ = V Σ⁺ U^H
        let mut pinv = DMatrix::<Complex64>::zeros(n_tx, n_rx);
        for (i, &s) in svd.singular_values.iter().enumerate() {
            if !(s > cutoff) {
                degenerate = true;
                continue;
            }
            let inv = 1.0 / s;
            for r in 0..n_tx {
                let v = v_t[(i, r)].conj() * inv;
                for c in 0..n_rx {
                    pinv[(r, c)] += v * u[(c, i)].conj();
                }
            }
        }
        Ok(Self { pinv, degenerate })
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn pinv(&self) -> &DMatrix<Complex64> {
        &self.pinv
    }

    pub fn apply(&self, r: &[Complex64]) -> Vec<Complex64> {
        let (n_tx, n_rx) = self.pinv.shape();
        assert_eq!(r.len(), n_rx, "received vector length");
        (0..n_tx)
            .map(|i| (0..n_rx).map(|j| self.pinv[(i, j)] * r[j]).sum())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZfOutput {
    pub equalized: Vec<Complex64>,
    pub degenerate: bool,
}

/// `H⁺·r` for a single subcarrier.
pub fn zf_equalize(received: &[Complex64], h: &DMatrix<Complex64>) -> Result<ZfOutput> {
    if received.len() != h.nrows() {
        return invalid(format!(
            "received vector has {} entries, channel has {} rows",
            received.len(),
            h.nrows()
        ));
    }
    let eq = ZfEqualizer::new(h)?;
    Ok(ZfOutput {
        equalized: eq.apply(received),
        degenerate: eq.is_degenerate(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScckDecision {
    pub index: usize,
    pub pattern: u32,
    pub distance_sq: f64,
}

/// Nearest-codeword detector over the power-normalized codebook.
#[derive(Debug, Clone)]
pub struct ScckDetector {
    codebook: Codebook,
    n: usize,
    /// Normalized chips, entry-major.
    chips: Vec<Complex64>,
}

impl ScckDetector {
    pub fn new(codebook: Codebook) -> Self {
        let n = codebook.length_n();
        let scale = 1.0 / (n as f64).sqrt();
        let chips = codebook
            .entries()
            .iter()
            .flat_map(|e| e.chips().iter().map(move |c| c * scale))
            .collect();
        Self { codebook, n, chips }
    }

    pub fn codebook(&self) -> &Codebook {
        &self.codebook
    }

    /// Lowest-index entry minimizing `Σ|z_j − c_j/sqrt(N)|²`.
    pub fn detect(&self, z: &[Complex64]) -> ScckDecision {
        assert_eq!(z.len(), self.n, "equalized vector length");
        let mut index = 0;
        let mut distance_sq = f64::INFINITY;
        for (i, word) in self.chips.chunks_exact(self.n).enumerate() {
            let d: f64 = word.iter().zip(z).map(|(c, x)| (x - c).norm_sqr()).sum();
            if d < distance_sq {
                distance_sq = d;
                index = i;
            }
        }
        ScckDecision {
            index,
            pattern: self.codebook.pattern_of(index),
            distance_sq,
        }
    }
}

/// One-shot SCCKM detection; build a [`ScckDetector`] for repeated use.
pub fn ml_detect_scck(equalized: &[Complex64], codebook: &Codebook) -> Result<ScckDecision> {
    if equalized.len() != codebook.length_n() {
        return invalid(format!(
            "equalized vector has {} entries, codewords have {}",
            equalized.len(),
            codebook.length_n()
        ));
    }
    Ok(ScckDetector::new(codebook.clone()).detect(equalized))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmDecision {
    pub symbol: SmSymbol,
    pub pattern: u32,
    pub distance_sq: f64,
}

/// Joint ML over antenna index and symbol: `argmin ‖r − h_a·s‖²`, ties
/// to the lower antenna, then the lower label.
pub fn ml_detect_sm(
    received: &[Complex64],
    h: &DMatrix<Complex64>,
    n_tx: usize,
    constellation: Constellation,
) -> Result<SmDecision> {
    sm_bits_per_subcarrier(n_tx, constellation)?;
    if h.ncols() != n_tx || h.nrows() != received.len() {
        return invalid(format!(
            "channel is {}x{}, expected {}x{n_tx}",
            h.nrows(),
            h.ncols(),
            received.len()
        ));
    }
    let points = constellation.points();
    Ok(sm_detect_unchecked(received, h, &points, constellation))
}

fn sm_detect_unchecked(
    received: &[Complex64],
    h: &DMatrix<Complex64>,
    points: &[Complex64],
    constellation: Constellation,
) -> SmDecision {
    let sym_bits = constellation.bits();
    let mut best = (0usize, 0u32, f64::INFINITY);
    for a in 0..h.ncols() {
        let col = h.column(a);
        for (label, &s) in points.iter().enumerate() {
            let d: f64 = received
                .iter()
                .zip(col.iter())
                .map(|(r, hc)| (r - hc * s).norm_sqr())
                .sum();
            if d < best.2 {
                best = (a, label as u32, d);
            }
        }
    }
    let (antenna_index, label, distance_sq) = best;
    SmDecision {
        symbol: SmSymbol {
            antenna_index,
            label,
            constellation_point: points[label as usize],
        },
        pattern: ((antenna_index as u32) << sym_bits) | label,
        distance_sq,
    }
}

/// How SM subcarriers are detected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SmReceiver {
    /// Joint ML on the raw received vector.
    #[default]
    JointMl,
    /// Zero-forcing first, then ML on the equalized vector against the
    /// SM alphabet `{s·e_a}`, the same front end SCCKM uses.
    ZeroForcing,
}

impl SmReceiver {
    pub fn name(self) -> &'static str {
        match self {
            SmReceiver::JointMl => "joint-ml",
            SmReceiver::ZeroForcing => "zf",
        }
    }
}

impl std::str::FromStr for SmReceiver {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "joint-ml" => Ok(SmReceiver::JointMl),
            "zf" => Ok(SmReceiver::ZeroForcing),
            _ => invalid(format!("unknown SM receiver {s:?} (expected joint-ml or zf)")),
        }
    }
}

/// ML over (antenna, symbol) on a zero-forced vector:
/// `argmin ‖z − s·e_a‖² = argmin |z_a − s|² − |z_a|²`.
pub fn ml_detect_sm_equalized(equalized: &[Complex64], constellation: Constellation) -> Result<SmDecision> {
    sm_bits_per_subcarrier(equalized.len(), constellation)?;
    let points = constellation.points();
    Ok(sm_detect_equalized_unchecked(equalized, &points, constellation))
}

fn sm_detect_equalized_unchecked(
    z: &[Complex64],
    points: &[Complex64],
    constellation: Constellation,
) -> SmDecision {
    let total: f64 = z.iter().map(|v| v.norm_sqr()).sum();
    let mut best = (0usize, 0u32, f64::INFINITY);
    for (a, za) in z.iter().enumerate() {
        for (label, s) in points.iter().enumerate() {
            let d = (za - s).norm_sqr() - za.norm_sqr();
            if d < best.2 {
                best = (a, label as u32, d);
            }
        }
    }
    let (antenna_index, label, d) = best;
    SmDecision {
        symbol: SmSymbol {
            antenna_index,
            label,
            constellation_point: points[label as usize],
        },
        pattern: ((antenna_index as u32) << constellation.bits()) | label,
        distance_sq: (total + d).max(0.0),
    }
}

/// Per-subcarrier detection output for one OFDM symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionResult {
    /// Codebook entry (SCCKM) or combined pattern (SM) per subcarrier.
    pub indices: Vec<usize>,
    pub bits: BitMatrix,
    pub min_distance_sq: Vec<f64>,
    /// Subcarriers whose channel was rank-deficient.
    pub degenerate: usize,
}

/// ZF + ML over every subcarrier of a received grid (`n_rx × n_sub`).
pub fn receive_scck(
    received: &SymbolGrid,
    response: &FrequencyResponse,
    detector: &ScckDetector,
) -> Result<DetectionResult> {
    check_dims(received, response)?;
    let n_sub = received.cols();
    let m = detector.codebook().bits_per_codeword() as usize;
    let mut out = DetectionResult {
        indices: Vec::with_capacity(n_sub),
        bits: BitMatrix::zeros(m, n_sub),
        min_distance_sq: Vec::with_capacity(n_sub),
        degenerate: 0,
    };
    for k in 0..n_sub {
        let eq = ZfEqualizer::new(response.at(k))?;
        if eq.is_degenerate() {
            out.degenerate += 1;
        }
        let z = eq.apply(&received.column(k));
        let d = detector.detect(&z);
        out.indices.push(d.index);
        out.bits.set_column_pattern(k, d.pattern);
        out.min_distance_sq.push(d.distance_sq);
    }
    Ok(out)
}

/// SM detection over every subcarrier.
pub fn receive_sm(
    received: &SymbolGrid,
    response: &FrequencyResponse,
    n_tx: usize,
    constellation: Constellation,
    receiver: SmReceiver,
) -> Result<DetectionResult> {
    check_dims(received, response)?;
    let m = sm_bits_per_subcarrier(n_tx, constellation)? as usize;
    if response.n_sub() > 0 && response.at(0).ncols() != n_tx {
        return invalid("channel transmit dimension does not match n_tx");
    }
    let points = constellation.points();
    let n_sub = received.cols();
    let mut out = DetectionResult {
        indices: Vec::with_capacity(n_sub),
        bits: BitMatrix::zeros(m, n_sub),
        min_distance_sq: Vec::with_capacity(n_sub),
        degenerate: 0,
    };
    for k in 0..n_sub {
        let r = received.column(k);
        let d = match receiver {
            SmReceiver::JointMl => sm_detect_unchecked(&r, response.at(k), &points, constellation),
            SmReceiver::ZeroForcing => {
                let eq = ZfEqualizer::new(response.at(k))?;
                if eq.is_degenerate() {
                    out.degenerate += 1;
                }
                sm_detect_equalized_unchecked(&eq.apply(&r), &points, constellation)
            }
        };
        out.indices.push(d.pattern as usize);
        out.bits.set_column_pattern(k, d.pattern);
        out.min_distance_sq.push(d.distance_sq);
    }
    Ok(out)
}

fn check_dims(received: &SymbolGrid, response: &FrequencyResponse) -> Result<()> {
    if received.cols() != response.n_sub() {
        return invalid(format!(
            "grid has {} subcarriers, channel response {}",
            received.cols(),
            response.n_sub()
        ));
    }
    if response.n_sub() > 0 && response.at(0).nrows() != received.rows() {
        return invalid("grid rows do not match receive antennas");
    }
    Ok(())
}
