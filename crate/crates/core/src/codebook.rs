//! Complementary sequences and CCK codebooks.
//!
//! Codewords are built from a phase vector `(φ1, …, φk)` with `N = 2^(k-1)`
//! chips. Chip `c` carries `φ1` plus every `φi` (i ≥ 2) whose bit `i-2` of
//! `c` is clear, and is negated when `c` has an odd number of adjacent set
//! bit pairs. For N = 2, 4, 8 this reproduces the familiar CCK layouts
//! `[e^{j(φ1+φ2)}, e^{jφ1}]`, the 4-chip form with a negated last chip and
//! the 802.11b 8-chip form with chips 3 and 6 negated.
//!
//! Phases are held as integer steps of `2π/M` so that chips for
//! M ∈ {2, 3, 4} are exact.

use std::collections::HashSet;
use std::f64::consts::PI;
use std::fmt;
use std::io::Write;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{invalid, Result};

/// Chip-wise tolerance used to decide that two codewords coincide.
pub const CHIP_EPS: f64 = 1e-9;

/// Distances closer than this are treated as equal by the subset search.
const DISTANCE_EPS: f64 = 1e-9;

const SQRT3_2: f64 = 0.866_025_403_784_438_6;

/// A ±1 sequence whose length is a power of two.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinarySequence(Vec<i8>);

impl BinarySequence {
    pub fn new(elements: Vec<i8>) -> Result<Self> {
        if elements.is_empty() || !elements.len().is_power_of_two() {
            return invalid(format!(
                "binary sequence length {} is not a power of two",
                elements.len()
            ));
        }
        if elements.iter().any(|&e| e != 1 && e != -1) {
            return invalid("binary sequence elements must be +1 or -1");
        }
        Ok(Self(elements))
    }

    pub fn elements(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Aperiodic autocorrelation at shifts `0..len`.
    pub fn autocorrelation(&self) -> Vec<i64> {
        let s = &self.0;
        (0..s.len())
            .map(|u| {
                s[u..]
                    .iter()
                    .zip(s)
                    .map(|(&a, &b)| i64::from(a) * i64::from(b))
                    .sum()
            })
            .collect()
    }

    fn concat(&self, other: &Self, negate_other: bool) -> Self {
        let sign = if negate_other { -1 } else { 1 };
        let mut v = self.0.clone();
        v.extend(other.0.iter().map(|&e| e * sign));
        Self(v)
    }
}

/// Golay complementary pair of length `2^(k-1)`.
///
/// Built as `A_k = A_{k-1} B_{k-1}`, `B_k = A_{k-1} (-B_{k-1})` from
/// `A_1 = B_1 = (+1)`.
pub fn golay_pair(k: u32) -> Result<(BinarySequence, BinarySequence)> {
    if k < 1 {
        return invalid("golay_pair requires k >= 1");
    }
    if k > 31 {
        return invalid(format!("golay_pair depth {k} is too large"));
    }
    let mut a = BinarySequence(vec![1]);
    let mut b = BinarySequence(vec![1]);
    for _ in 1..k {
        let next_a = a.concat(&b, false);
        let next_b = a.concat(&b, true);
        a = next_a;
        b = next_b;
    }
    Ok((a, b))
}

/// Aperiodic cross-correlation `R(u) = Σ_j a[j+u]·conj(b[j])` for
/// `u = 0..len`. Sequences must have equal length.
pub fn aperiodic_correlation(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(a.len(), b.len(), "correlated sequences must have equal length");
    (0..a.len())
        .map(|u| a[u..].iter().zip(b).map(|(x, y)| x * y.conj()).sum())
        .collect()
}

/// Allowed phase set of a CCK scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhaseAlphabet {
    /// `{0, π}`, used by 2-chip CCK.
    Binary,
    /// `{0, 2π/3, 4π/3}`, used by 4-chip CCK.
    Ternary,
    /// `{0, π/2, π, 3π/2}`, used by 8-chip CCK.
    Quaternary,
}

impl PhaseAlphabet {
    pub fn size(self) -> u32 {
        match self {
            PhaseAlphabet::Binary => 2,
            PhaseAlphabet::Ternary => 3,
            PhaseAlphabet::Quaternary => 4,
        }
    }

    /// Step of `2π/M` for a phase label. Quaternary labels follow the
    /// 8-bit CCK dibit table: 00→0, 01→π, 10→π/2, 11→−π/2.
    pub fn step_of_label(self, label: u32) -> Result<u32> {
        if label >= self.size() {
            return invalid(format!("phase label {label} out of range for {self:?}"));
        }
        Ok(match self {
            PhaseAlphabet::Quaternary => [0, 2, 1, 3][label as usize],
            _ => label,
        })
    }

    fn radians(self, step: u32) -> f64 {
        let a = 2.0 * PI * f64::from(step) / f64::from(self.size());
        // keep angles in (-π, π]
        if a > PI {
            a - 2.0 * PI
        } else {
            a
        }
    }
}

/// `e^{j2π·step/m}`, exact for m ∈ {1, 2, 3, 4}.
fn root_of_unity(step: u32, m: u32) -> Complex64 {
    let s = step % m;
    match (m, s) {
        (_, 0) => Complex64::new(1.0, 0.0),
        (2, 1) | (4, 2) => Complex64::new(-1.0, 0.0),
        (4, 1) => Complex64::new(0.0, 1.0),
        (4, 3) => Complex64::new(0.0, -1.0),
        (3, 1) => Complex64::new(-0.5, SQRT3_2),
        (3, 2) => Complex64::new(-0.5, -SQRT3_2),
        _ => Complex64::from_polar(1.0, 2.0 * PI * f64::from(s) / f64::from(m)),
    }
}

/// Phase vector `(φ1, …, φk)` drawn from one alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PhaseVector {
    alphabet: PhaseAlphabet,
    steps: Vec<u32>,
}

impl PhaseVector {
    /// Builds a phase vector from integer steps of `2π/M`.
    pub fn from_steps(alphabet: PhaseAlphabet, steps: Vec<u32>) -> Result<Self> {
        if steps.len() < 2 {
            return invalid("a phase vector needs at least two phases");
        }
        if let Some(s) = steps.iter().find(|&&s| s >= alphabet.size()) {
            return invalid(format!("phase step {s} outside {alphabet:?}"));
        }
        Ok(Self { alphabet, steps })
    }

    /// Builds a phase vector from angles, each of which must lie in the
    /// alphabet (modulo 2π, within 1e-9 rad).
    pub fn from_radians(alphabet: PhaseAlphabet, phases: &[f64]) -> Result<Self> {
        let m = f64::from(alphabet.size());
        let steps = phases
            .iter()
            .map(|&p| {
                let x = p.rem_euclid(2.0 * PI) * m / (2.0 * PI);
                let r = x.round();
                if (x - r).abs() * 2.0 * PI / m > 1e-9 {
                    invalid(format!("phase {p} is not in {alphabet:?}"))
                } else {
                    Ok((r as u32) % alphabet.size())
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_steps(alphabet, steps)
    }

    pub fn alphabet(&self) -> PhaseAlphabet {
        self.alphabet
    }

    pub fn steps(&self) -> &[u32] {
        &self.steps
    }

    pub fn phases(&self) -> Vec<f64> {
        self.steps.iter().map(|&s| self.alphabet.radians(s)).collect()
    }

    /// Number of chips of the codeword this vector generates.
    pub fn codeword_len(&self) -> usize {
        1 << (self.steps.len() - 1)
    }
}

/// One CCK codeword: a vector of unit-modulus chips.
#[derive(Debug, Clone, PartialEq)]
pub struct Codeword {
    chips: Vec<Complex64>,
}

impl Codeword {
    pub fn new(chips: Vec<Complex64>) -> Result<Self> {
        if chips.is_empty() {
            return invalid("codeword has no chips");
        }
        if let Some(c) = chips.iter().find(|c| (c.norm() - 1.0).abs() > 1e-12) {
            return invalid(format!("chip {c} is not unit modulus"));
        }
        Ok(Self { chips })
    }

    /// Generates the CCK codeword for a phase vector.
    pub fn from_phases(phases: &PhaseVector) -> Self {
        let m = phases.alphabet.size();
        let (first, rest) = phases.steps.split_first().expect("at least two phases");
        let n = phases.codeword_len();
        let chips = (0..n)
            .map(|c| {
                let step = rest
                    .iter()
                    .enumerate()
                    .filter(|(bit, _)| c & (1 << bit) == 0)
                    .fold(*first, |acc, (_, &s)| acc + s);
                let chip = root_of_unity(step, m);
                if (c & (c >> 1)).count_ones() % 2 == 1 {
                    -chip
                } else {
                    chip
                }
            })
            .collect();
        Self { chips }
    }

    pub fn chips(&self) -> &[Complex64] {
        &self.chips
    }

    pub fn len(&self) -> usize {
        self.chips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chips.is_empty()
    }

    /// Euclidean norm of the chip-wise difference.
    pub fn distance(&self, other: &Codeword) -> f64 {
        self.chips
            .iter()
            .zip(&other.chips)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `Σ conj(self_j)·other_j`.
    pub fn inner(&self, other: &Codeword) -> Complex64 {
        self.chips
            .iter()
            .zip(&other.chips)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// True when every chip matches within `tol`.
    pub fn approx_eq(&self, other: &Codeword, tol: f64) -> bool {
        self.len() == other.len()
            && self
                .chips
                .iter()
                .zip(&other.chips)
                .all(|(a, b)| (a - b).norm() <= tol)
    }
}

impl fmt::Display for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.chips.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:.4}{:+.4}i", c.re, c.im)?;
        }
        write!(f, ")")
    }
}

/// A set of equal-length codewords together with a bijection from
/// `m`-bit patterns to entries.
///
/// Bit patterns are integers whose most significant of the `m` bits is
/// the first written bit.
#[derive(Debug, Clone)]
pub struct Codebook {
    length_n: usize,
    bits_per_codeword: u32,
    entries: Vec<Codeword>,
    pattern_to_entry: Vec<usize>,
    entry_to_pattern: Vec<u32>,
}

impl Codebook {
    /// Codebook whose entry `i` is the codeword for pattern `i`.
    pub fn from_ordered(entries: Vec<Codeword>) -> Result<Self> {
        let mapping = (0..entries.len()).collect();
        Self::new(entries, mapping)
    }

    /// Codebook with an explicit pattern → entry mapping.
    pub fn new(entries: Vec<Codeword>, pattern_to_entry: Vec<usize>) -> Result<Self> {
        let size = entries.len();
        if size < 2 || !size.is_power_of_two() {
            return invalid(format!("codebook size {size} is not a power of two >= 2"));
        }
        if pattern_to_entry.len() != size {
            return invalid("mapping must cover every bit pattern");
        }
        let length_n = entries[0].len();
        if entries.iter().any(|e| e.len() != length_n) {
            return invalid("codewords differ in length");
        }
        let mut entry_to_pattern = vec![u32::MAX; size];
        for (pattern, &entry) in pattern_to_entry.iter().enumerate() {
            if entry >= size || entry_to_pattern[entry] != u32::MAX {
                return invalid("pattern mapping is not a bijection");
            }
            entry_to_pattern[entry] = pattern as u32;
        }
        for i in 0..size {
            for j in i + 1..size {
                if entries[i].approx_eq(&entries[j], CHIP_EPS) {
                    return invalid(format!("entries {i} and {j} coincide"));
                }
            }
        }
        Ok(Self {
            length_n,
            bits_per_codeword: size.trailing_zeros(),
            entries,
            pattern_to_entry,
            entry_to_pattern,
        })
    }

    pub fn length_n(&self) -> usize {
        self.length_n
    }

    pub fn bits_per_codeword(&self) -> u32 {
        self.bits_per_codeword
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Codeword] {
        &self.entries
    }

    pub fn entry_index(&self, pattern: u32) -> usize {
        self.pattern_to_entry[pattern as usize]
    }

    pub fn pattern_of(&self, entry: usize) -> u32 {
        self.entry_to_pattern[entry]
    }

    pub fn encode(&self, pattern: u32) -> &Codeword {
        &self.entries[self.entry_index(pattern)]
    }

    /// Pattern of the entry matching `word` chip for chip, if any.
    pub fn decode_exact(&self, word: &Codeword) -> Option<u32> {
        self.entries
            .iter()
            .position(|e| e.approx_eq(word, CHIP_EPS))
            .map(|i| self.pattern_of(i))
    }

    pub fn min_distance(&self) -> f64 {
        min_distance(&self.entries).expect("codebooks hold at least two entries")
    }

    /// Writes `index,bit_pattern,chip_0_re,chip_0_im,…` rows in entry order.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        write!(out, "index,bit_pattern")?;
        for c in 0..self.length_n {
            write!(out, ",chip_{c}_re,chip_{c}_im")?;
        }
        writeln!(out)?;
        let width = self.bits_per_codeword as usize;
        for (i, e) in self.entries.iter().enumerate() {
            write!(out, "{i},{:0width$b}", self.pattern_of(i))?;
            for c in e.chips() {
                write!(out, ",{},{}", c.re, c.im)?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// 2-chip CCK: first written bit → φ1, second → φ2, 0 → 0 and 1 → π.
pub fn cck2_codebook() -> Codebook {
    let entries = (0..4u32)
        .map(|p| {
            let pv = PhaseVector::from_steps(PhaseAlphabet::Binary, vec![p >> 1, p & 1])
                .expect("binary steps");
            Codeword::from_phases(&pv)
        })
        .collect();
    Codebook::from_ordered(entries).expect("2-bit CCK codebook is valid")
}

/// All 27 4-chip CCK codewords, ordered by `(φ1, φ2, φ3)` with φ3 varying
/// fastest, phases `0, 2π/3, 4π/3`.
pub fn cck4_enumerate() -> Vec<Codeword> {
    let mut out = Vec::with_capacity(27);
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                let pv = PhaseVector::from_steps(PhaseAlphabet::Ternary, vec![a, b, c])
                    .expect("ternary steps");
                out.push(Codeword::from_phases(&pv));
            }
        }
    }
    out
}

/// Reference 16-entry 4-chip codebook, rows in natural binary order.
pub fn cck4_reference_codebook() -> Codebook {
    let one = Complex64::new(1.0, 0.0);
    let neg = Complex64::new(-1.0, 0.0);
    // w = e^{j2π/3}, w2 = e^{j4π/3}
    let w = Complex64::new(-0.5, SQRT3_2);
    let w2 = Complex64::new(-0.5, -SQRT3_2);
    let rows: [[Complex64; 4]; 16] = [
        [one, one, one, neg],
        [one, w, w2, neg],
        [w, w, one, neg],
        [w2, w2, one, neg],
        [w2, one, w2, neg],
        [w2, w, w, neg],
        [w, w2, w2, neg],
        [one, w2, w2, -w],
        [one, one, w, -w],
        [w, one, w2, -w],
        [w2, w, w2, -w],
        [w, w, w, -w],
        [one, w2, one, -w2],
        [w, w2, w, -w2],
        [w2, one, w, -w2],
        [w, one, one, -w2],
    ];
    let entries = rows
        .iter()
        .map(|r| Codeword::new(r.to_vec()).expect("unit chips"))
        .collect();
    Codebook::from_ordered(entries).expect("reference 4-bit codebook is valid")
}

/// 8-chip CCK codeword for one byte. The byte is read as four dibits from
/// the most significant end, giving `φ1, φ2, φ3, φ4` in that order.
pub fn cck8_codeword(byte: u8) -> Codeword {
    let steps = (0..4)
        .map(|g| {
            let label = u32::from(byte >> (6 - 2 * g)) & 0b11;
            PhaseAlphabet::Quaternary
                .step_of_label(label)
                .expect("dibit label")
        })
        .collect();
    let pv = PhaseVector::from_steps(PhaseAlphabet::Quaternary, steps).expect("quaternary steps");
    Codeword::from_phases(&pv)
}

/// All 256 8-chip codewords indexed by byte value.
pub fn cck8_codebook() -> Codebook {
    let entries = (0..=255u8).map(cck8_codeword).collect();
    Codebook::from_ordered(entries).expect("8-bit CCK codebook is valid")
}

/// Minimum pairwise Euclidean distance over a list of codewords.
pub fn min_distance(words: &[Codeword]) -> Result<f64> {
    if words.len() < 2 {
        return invalid("min_distance needs at least two codewords");
    }
    let mut best = f64::INFINITY;
    for (i, a) in words.iter().enumerate() {
        for b in &words[i + 1..] {
            best = best.min(a.distance(b));
        }
    }
    Ok(best)
}

/// `sqrt(N/2)·|1 − e^{j2π/M}|`, the distance of a codeword pair whose
/// `N/2` differing chips are rotated by the smallest phase step.
pub fn dmin_closed_form(n: usize, m: u32) -> Result<f64> {
    if n < 2 || !n.is_power_of_two() {
        return invalid(format!("codeword length {n} must be a power of two >= 2"));
    }
    if m < 2 {
        return invalid(format!("phase alphabet size {m} must be >= 2"));
    }
    let rotation = (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, 2.0 * PI / f64::from(m))).norm();
    Ok((n as f64 / 2.0).sqrt() * rotation)
}

/// How the subset search draws candidate subsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubsetSearch {
    /// Sample this many distinct subsets uniformly at random.
    Random { subsets: usize },
    /// Visit every subset.
    Exhaustive,
}

/// Outcome of [`select_subset`].
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetSelection {
    /// Candidate indices, ascending.
    pub indices: Vec<usize>,
    pub min_distance: f64,
    /// Pairs of the subset at exactly `min_distance`.
    pub min_pairs: usize,
    pub evaluated: usize,
}

#[derive(Debug, Clone)]
struct Score {
    min_distance: f64,
    min_pairs: usize,
}

fn score(indices: &[usize], dist: &[Vec<f64>]) -> Score {
    let mut min_distance = f64::INFINITY;
    let mut min_pairs = 0;
    for (k, &i) in indices.iter().enumerate() {
        for &j in &indices[k + 1..] {
            let d = dist[i][j];
            if d < min_distance - DISTANCE_EPS {
                min_distance = d;
                min_pairs = 1;
            } else if (d - min_distance).abs() <= DISTANCE_EPS {
                min_pairs += 1;
            }
        }
    }
    Score {
        min_distance,
        min_pairs,
    }
}

/// Larger minimum distance first, then fewer minimum-distance pairs, then
/// the lexicographically smaller index set.
fn better(a: &(Score, Vec<usize>), b: &(Score, Vec<usize>)) -> bool {
    let (sa, ia) = a;
    let (sb, ib) = b;
    if sa.min_distance > sb.min_distance + DISTANCE_EPS {
        return true;
    }
    if sa.min_distance < sb.min_distance - DISTANCE_EPS {
        return false;
    }
    if sa.min_pairs != sb.min_pairs {
        return sa.min_pairs < sb.min_pairs;
    }
    ia < ib
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| {
        acc.saturating_mul((n - i) as u128) / (i as u128 + 1)
    })
}

/// Advances `idx` to the next k-combination of `0..n` in lexicographic
/// order. Returns false after the last one.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Picks a `size`-subset of `candidates` maximizing the minimum pairwise
/// distance and, among those, minimizing the number of pairs at that
/// distance. Ties go to the lexicographically smallest index set, so the
/// result depends only on the set of subsets visited.
pub fn select_subset<R: Rng + ?Sized>(
    candidates: &[Codeword],
    size: usize,
    search: SubsetSearch,
    rng: &mut R,
) -> Result<SubsetSelection> {
    let n = candidates.len();
    if size < 2 || size > n {
        return invalid(format!("cannot choose {size} of {n} candidates"));
    }
    if let SubsetSearch::Random { subsets: 0 } = search {
        return invalid("num_random_subsets must be >= 1");
    }
    let dist: Vec<Vec<f64>> = candidates
        .iter()
        .map(|a| candidates.iter().map(|b| a.distance(b)).collect())
        .collect();

    let total = binomial(n, size);
    let search = match search {
        SubsetSearch::Random { subsets } if subsets as u128 >= total => SubsetSearch::Exhaustive,
        s => s,
    };

    let mut best: Option<(Score, Vec<usize>)> = None;
    let mut evaluated = 0;
    let mut consider = |indices: Vec<usize>| {
        evaluated += 1;
        let cand = (score(&indices, &dist), indices);
        if best.as_ref().is_none_or(|b| better(&cand, b)) {
            best = Some(cand);
        }
    };

    match search {
        SubsetSearch::Exhaustive => {
            let mut idx: Vec<usize> = (0..size).collect();
            loop {
                consider(idx.clone());
                if !next_combination(&mut idx, n) {
                    break;
                }
            }
        }
        SubsetSearch::Random { subsets } => {
            let mut seen = HashSet::with_capacity(subsets);
            while seen.len() < subsets {
                let mut idx = rand::seq::index::sample(rng, n, size).into_vec();
                idx.sort_unstable();
                if seen.insert(idx.clone()) {
                    consider(idx);
                }
            }
        }
    }

    let (s, indices) = best.expect("at least one subset visited");
    Ok(SubsetSelection {
        indices,
        min_distance: s.min_distance,
        min_pairs: s.min_pairs,
        evaluated,
    })
}

/// Three-stage random search for a 16-entry 4-chip codebook. Entries are
/// the selected candidates in ascending candidate order, mapped to
/// patterns 0000…1111.
pub fn select_cck4_subset<R: Rng + ?Sized>(
    candidates: &[Codeword],
    num_random_subsets: usize,
    rng: &mut R,
) -> Result<Codebook> {
    if candidates.iter().any(|c| c.len() != 4) {
        return invalid("4-bit CCK candidates must have 4 chips");
    }
    let sel = select_subset(
        candidates,
        16,
        SubsetSearch::Random {
            subsets: num_random_subsets,
        },
        rng,
    )?;
    let entries = sel.indices.iter().map(|&i| candidates[i].clone()).collect();
    Codebook::from_ordered(entries)
}

/// Largest set of mutually orthogonal codewords (|inner| ≤ `tol`), by
/// exact maximum-clique search. Returns indices into `words`, ascending.
pub fn largest_orthogonal_set(words: &[Codeword], tol: f64) -> Vec<usize> {
    let n = words.len();
    let adj: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| i != j && words[i].inner(&words[j]).norm() <= tol)
                .collect()
        })
        .collect();
    let mut best = Vec::new();
    let mut current = Vec::new();
    max_clique(&adj, &mut current, (0..n).collect(), &mut best);
    best.sort_unstable();
    best
}

fn max_clique(adj: &[Vec<bool>], current: &mut Vec<usize>, candidates: Vec<usize>, best: &mut Vec<usize>) {
    if candidates.is_empty() {
        if current.len() > best.len() {
            *best = current.clone();
        }
        return;
    }
    let mut candidates = candidates;
    while let Some(v) = candidates.pop() {
        if current.len() + candidates.len() < best.len() {
            return;
        }
        current.push(v);
        let next: Vec<usize> = candidates.iter().copied().filter(|&u| adj[v][u]).collect();
        max_clique(adj, current, next, best);
        current.pop();
    }
    if current.len() > best.len() {
        *best = current.clone();
    }
}

/// Searches each fixed-φ1 coset of the 8-bit codebook (the 64 bytes
/// sharing their leading dibit) for its largest mutually orthogonal
/// subset and returns the biggest one found, as byte values.
pub fn cck8_orthogonal_subset(codebook: &Codebook, tol: f64) -> Vec<u32> {
    let mut best: Vec<u32> = Vec::new();
    for lead in 0..4u32 {
        let patterns: Vec<u32> = (0..64).map(|low| (lead << 6) | low).collect();
        let words: Vec<Codeword> = patterns.iter().map(|&p| codebook.encode(p).clone()).collect();
        let found = largest_orthogonal_set(&words, tol);
        if found.len() > best.len() {
            best = found.iter().map(|&i| patterns[i]).collect();
        }
    }
    best
}
