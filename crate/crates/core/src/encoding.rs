//! Time-series-to-image encodings: Gramian angular fields (summation and
//! difference) and Markov transition fields.
//!
//! The pipeline for one channel is: piecewise aggregate approximation to the
//! configured image side, min-max rescaling, then the field construction.
//! MTF instead bins the full-resolution series, builds the full transition
//! field, and reduces it by patch averaging.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// One channel of real-valued samples on a uniform time index.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
}

impl TimeSeries {
    /// Validates that the series is non-empty and every sample is finite.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Length("time series must have at least one sample".into()));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Argument(format!(
                "non-finite sample at index {pos} in time series"
            )));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // constructor rejects empty input
    }
}

/// Target range of the min-max rescale step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RangeTag {
    /// `[-1, 1]`, the range the field constructions are defined on.
    Symmetric,
    /// `[0, 1]`; restricts polar angles to `[0, pi/2]` so the GASF diagonal
    /// is exactly invertible.
    Unit,
}

impl fmt::Display for RangeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RangeTag::Symmetric => write!(f, "symmetric"),
            RangeTag::Unit => write!(f, "unit"),
        }
    }
}

impl FromStr for RangeTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symmetric" => Ok(RangeTag::Symmetric),
            "unit" => Ok(RangeTag::Unit),
            other => Err(Error::Argument(format!("unknown range tag `{other}`"))),
        }
    }
}

/// A series mapped into a declared range; input to the field constructions.
#[derive(Debug, Clone, PartialEq)]
pub struct RescaledSeries {
    values: Vec<f64>,
    range: RangeTag,
}

impl RescaledSeries {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn range(&self) -> RangeTag {
        self.range
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }
}

/// Field construction selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldMethod {
    Gasf,
    Gadf,
    Mtf,
}

impl fmt::Display for FieldMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldMethod::Gasf => write!(f, "gasf"),
            FieldMethod::Gadf => write!(f, "gadf"),
            FieldMethod::Mtf => write!(f, "mtf"),
        }
    }
}

impl FromStr for FieldMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gasf" => Ok(FieldMethod::Gasf),
            "gadf" => Ok(FieldMethod::Gadf),
            "mtf" => Ok(FieldMethod::Mtf),
            other => Err(Error::Argument(format!("unknown field method `{other}`"))),
        }
    }
}

/// Square field image produced by one of the encodings.
///
/// Row-major `side x side` data. GASF images are symmetric with entries in
/// `[-1, 1]`, GADF antisymmetric with a zero diagonal, MTF entries are
/// transition probabilities in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldImage {
    side: usize,
    data: Vec<f64>,
    method: FieldMethod,
    source_channel: usize,
}

impl FieldImage {
    fn new(side: usize, data: Vec<f64>, method: FieldMethod, source_channel: usize) -> Self {
        debug_assert_eq!(data.len(), side * side);
        Self { side, data, method, source_channel }
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn method(&self) -> FieldMethod {
        self.method
    }

    pub fn source_channel(&self) -> usize {
        self.source_channel
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.side + col]
    }
}

/// Knobs shared by all encodings.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodingConfig {
    /// Output image side `S`.
    pub image_size: usize,
    /// Number of quantile bins `Q` for MTF.
    pub mtf_bins: usize,
    /// Rescale range for the GAF constructions.
    pub range: RangeTag,
}

impl Default for EncodingConfig {
    fn default() -> Self {
        Self { image_size: 64, mtf_bins: 8, range: RangeTag::Symmetric }
    }
}

impl EncodingConfig {
    fn validate(&self) -> Result<()> {
        if self.image_size < 2 {
            return Err(Error::Argument(format!(
                "image size must be at least 2, got {}",
                self.image_size
            )));
        }
        if self.mtf_bins < 2 {
            return Err(Error::Argument(format!(
                "mtf bin count must be at least 2, got {}",
                self.mtf_bins
            )));
        }
        Ok(())
    }
}

/// Piecewise aggregate approximation: reduces `series` to `target_len` means
/// over contiguous segments with boundaries `floor(k * n / target_len)`.
///
/// Segment sizes differ by at most one and cover the input exactly once.
pub fn paa(series: &TimeSeries, target_len: usize) -> Result<TimeSeries> {
    let n = series.len();
    if target_len == 0 {
        return Err(Error::Argument("paa target length must be positive".into()));
    }
    if target_len > n {
        return Err(Error::Length(format!(
            "paa target length {target_len} exceeds series length {n}"
        )));
    }
    let values = series.values();
    let mut out = Vec::with_capacity(target_len);
    for k in 0..target_len {
        let start = k * n / target_len;
        let end = (k + 1) * n / target_len;
        let seg = &values[start..end];
        out.push(seg.iter().sum::<f64>() / seg.len() as f64);
    }
    TimeSeries::new(out)
}

/// Min-max rescale into the declared range. A constant series maps to
/// all-zeros in either mode.
pub fn rescale(series: &TimeSeries, range: RangeTag) -> RescaledSeries {
    let values = series.values();
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let rescaled = if max == min {
        vec![0.0; values.len()]
    } else {
        match range {
            RangeTag::Symmetric => values
                .iter()
                .map(|&x| (2.0 * x - max - min) / (max - min))
                .collect(),
            RangeTag::Unit => values.iter().map(|&x| (x - min) / (max - min)).collect(),
        }
    };
    RescaledSeries { values: rescaled, range }
}

/// Polar form of a rescaled series: angles `phi_i = arccos(x_i)` and radii
/// `r_i = i / n` for `i = 1..n`.
///
/// The radii are not used by the closed-form fields; they exist for the
/// polar illustration path.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarSeries {
    pub angles: Vec<f64>,
    pub radii: Vec<f64>,
}

pub fn to_polar(series: &RescaledSeries) -> PolarSeries {
    let n = series.len();
    let angles = series
        .values()
        .iter()
        .map(|&x| x.clamp(-1.0, 1.0).acos())
        .collect();
    let radii = (1..=n).map(|i| i as f64 / n as f64).collect();
    PolarSeries { angles, radii }
}

// sqrt(1 - x^2) with the radicand clamped at zero; rescale can overshoot the
// range by a few ulps.
fn unit_complement(x: f64) -> f64 {
    (1.0 - x * x).max(0.0).sqrt()
}

/// Gramian angular summation field: `data[i][j] = cos(phi_i + phi_j)`,
/// computed in closed form as `x_i x_j - sqrt(1-x_i^2) sqrt(1-x_j^2)`.
pub fn gasf(series: &RescaledSeries) -> FieldImage {
    let x = series.values();
    let n = x.len();
    let s: Vec<f64> = x.iter().map(|&v| unit_complement(v)).collect();
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            data[i * n + j] = x[i] * x[j] - s[i] * s[j];
        }
    }
    FieldImage::new(n, data, FieldMethod::Gasf, 0)
}

/// Gramian angular difference field: `data[i][j] = sin(phi_i - phi_j)`,
/// computed in closed form as `sqrt(1-x_i^2) x_j - x_i sqrt(1-x_j^2)`.
pub fn gadf(series: &RescaledSeries) -> FieldImage {
    let x = series.values();
    let n = x.len();
    let s: Vec<f64> = x.iter().map(|&v| unit_complement(v)).collect();
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            data[i * n + j] = s[i] * x[j] - x[i] * s[j];
        }
    }
    FieldImage::new(n, data, FieldMethod::Gadf, 0)
}

/// Assigns each sample a quantile bin in `0..q`.
///
/// Bins come from the stable rank of each sample: rank `r` falls in bin
/// `r * q / n`, and every member of a run of equal values takes the bin of
/// the run's first member, so populations of distinct values differ by at
/// most one and tied values never straddle a bin edge.
pub fn quantile_bins(series: &TimeSeries, q: usize) -> Result<Vec<usize>> {
    let n = series.len();
    if q == 0 {
        return Err(Error::Argument("bin count must be positive".into()));
    }
    if q > n {
        return Err(Error::Argument(format!(
            "bin count {q} exceeds series length {n}"
        )));
    }
    let values = series.values();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap().then(a.cmp(&b)));

    let mut bins = vec![0usize; n];
    let mut run_start = 0;
    for rank in 0..n {
        if rank > 0 && values[order[rank]] != values[order[run_start]] {
            run_start = rank;
        }
        bins[order[rank]] = run_start * q / n;
    }
    Ok(bins)
}

/// First-order Markov transition matrix over bin ids in `0..q`.
///
/// `w[a][b]` is the fraction of transitions leaving `a` that land in `b`.
/// Rows with no outgoing transitions fall back to the uniform distribution.
pub fn markov_matrix(bins: &[usize], q: usize) -> Result<Vec<Vec<f64>>> {
    if bins.is_empty() {
        return Err(Error::Argument("bin sequence must be non-empty".into()));
    }
    if q == 0 {
        return Err(Error::Argument("bin count must be positive".into()));
    }
    if let Some(&bad) = bins.iter().find(|&&b| b >= q) {
        return Err(Error::Argument(format!("bin id {bad} out of range 0..{q}")));
    }
    let mut counts = vec![vec![0u64; q]; q];
    for pair in bins.windows(2) {
        counts[pair[0]][pair[1]] += 1;
    }
    let w = counts
        .into_iter()
        .map(|row| {
            let total: u64 = row.iter().sum();
            if total == 0 {
                vec![1.0 / q as f64; q]
            } else {
                row.into_iter().map(|c| c as f64 / total as f64).collect()
            }
        })
        .collect();
    Ok(w)
}

/// Averages non-overlapping `m x m` patches of a `side x side` row-major
/// matrix, truncating any trailing remainder rows/columns first.
pub fn blur(field: &[f64], side: usize, m: usize) -> Result<(Vec<f64>, usize)> {
    if m == 0 {
        return Err(Error::Length("blur patch size must be positive".into()));
    }
    if field.len() != side * side {
        return Err(Error::Shape(format!(
            "field length {} does not match side {side}",
            field.len()
        )));
    }
    let out_side = side / m;
    if out_side == 0 {
        return Err(Error::Length(format!(
            "blur patch {m} larger than field side {side}"
        )));
    }
    let inv = 1.0 / (m * m) as f64;
    let mut out = vec![0.0; out_side * out_side];
    for a in 0..out_side {
        for b in 0..out_side {
            let mut acc = 0.0;
            for dy in 0..m {
                let row = (a * m + dy) * side;
                for dx in 0..m {
                    acc += field[row + b * m + dx];
                }
            }
            out[a * out_side + b] = acc * inv;
        }
    }
    Ok((out, out_side))
}

// Length-S view of a shorter series: index k reads sample floor(k*n/S).
// Generalizes the PAA boundary rule to the upsampling direction.
fn stretch_to(series: &TimeSeries, target_len: usize) -> TimeSeries {
    let n = series.len();
    let values = series.values();
    let out = (0..target_len).map(|k| values[k * n / target_len]).collect();
    TimeSeries::new(out).expect("stretch of finite series is finite")
}

/// Markov transition field reduced to the configured image size.
///
/// The full-resolution series is binned, the `n x n` field
/// `f[i][j] = w[bin_i][bin_j]` is built, then patch-averaged down to
/// `S x S` with `m = floor(n / S)`.
pub fn mtf(series: &TimeSeries, config: &EncodingConfig) -> Result<FieldImage> {
    config.validate()?;
    let n = series.len();
    let s = config.image_size;
    let q = config.mtf_bins;
    if n < s {
        return Err(Error::Length(format!(
            "mtf needs series length >= image size ({n} < {s})"
        )));
    }
    let bins = quantile_bins(series, q)?;
    let w = markov_matrix(&bins, q)?;
    let mut field = vec![0.0; n * n];
    for i in 0..n {
        let row = &w[bins[i]];
        for j in 0..n {
            field[i * n + j] = row[bins[j]];
        }
    }
    let m = n / s;
    let (data, out_side) = blur(&field, n, m)?;
    debug_assert_eq!(out_side, s);
    Ok(FieldImage::new(out_side, data, FieldMethod::Mtf, 0))
}

/// Encodes one channel into a field image of side `config.image_size`.
///
/// GASF/GADF reduce the series with PAA and rescale it first. MTF bins the
/// full-resolution series and patch-averages the field; series shorter than
/// the image side are stretched by index repetition so the blur factor
/// becomes one.
pub fn encode_channel(
    series: &TimeSeries,
    method: FieldMethod,
    config: &EncodingConfig,
    channel: usize,
) -> Result<FieldImage> {
    config.validate()?;
    let s = config.image_size;
    let mut image = match method {
        FieldMethod::Gasf => gasf(&rescale(&paa(series, s)?, config.range)),
        FieldMethod::Gadf => gadf(&rescale(&paa(series, s)?, config.range)),
        FieldMethod::Mtf => {
            if series.len() < s {
                mtf(&stretch_to(series, s), config)?
            } else {
                mtf(series, config)?
            }
        }
    };
    image.source_channel = channel;
    Ok(image)
}

/// Writes the image as a plain-text PGM (P2), mapping `[min, max]`
/// affinely onto `0..=255`. A constant image maps to all zeros.
pub fn write_pgm(image: &FieldImage, path: &Path) -> Result<()> {
    let data = image.data();
    let min = data.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = data.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let scale = if max > min { 255.0 / (max - min) } else { 0.0 };
    let side = image.side();

    let mut text = format!("P2\n{side} {side}\n255\n");
    for row in 0..side {
        let mut line = String::with_capacity(side * 4);
        for col in 0..side {
            if col > 0 {
                line.push(' ');
            }
            let level = ((image.get(row, col) - min) * scale).round() as u32;
            line.push_str(&level.min(255).to_string());
        }
        text.push_str(&line);
        text.push('\n');
    }
    let mut file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))?;
    Ok(())
}
