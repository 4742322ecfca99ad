//! Frame-based lossy coding: project each frame, retain the `k` largest
//! coefficients by magnitude, and serialize the result.
//!
//! The retention rule keeps the `k = frame_size / cr` largest-magnitude
//! coefficients per frame and zeroes the rest — the ℓ₂-optimal k-term
//! approximation in an orthonormal basis. Ties break toward the lower
//! index so encoding is deterministic. No quantization or entropy coding
//! happens anywhere: retained values are stored as full 64-bit floats, and
//! the nominal compression ratio counts coefficients only, ignoring the
//! index side information.
//!
//! Container layout (all multi-byte fields little-endian):
//!
//! ```text
//! magic "GTAC" | version u8 = 1 | transform id u8 | frame_size u16
//!   | keep_k u16 | sample_rate u32 | original_length u64 | w_second f32
//!   | ceil(original_length / frame_size) frames,
//!     each exactly keep_k records of (index u16, value f64), ascending index
//! ```
//!
//! Transform ids: 0 = GT1, 1 = GT2, 2 = DCT1, 3 = DCT2, 4 = DCT3,
//! 5 = DCT4, 6 = FWHT. `w_second` is 0.0 for every kind except GT1.

use thiserror::Error;

use crate::audio_io::Signal;
use crate::transforms::{self, Coefficients, OrthonormalBasis, TransformError, TransformKind};

pub const MAGIC: [u8; 4] = *b"GTAC";
pub const VERSION: u8 = 1;

const HEADER_LEN: usize = 26;
const RECORD_LEN: usize = 10;

/// Frame sizes used by the benchmark tables; anything else logs a warning.
const STANDARD_FRAME_SIZES: [usize; 4] = [16, 64, 256, 512];

#[derive(Debug, Error, PartialEq)]
pub enum CodecError {
    #[error("signal is empty")]
    EmptySignal,
    #[error("frame size {0} too small (minimum 3)")]
    FrameTooSmall(usize),
    #[error("frame size {0} exceeds the container limit of 65535")]
    FrameTooLarge(usize),
    #[error("compression ratio {cr} does not divide frame size {frame_size}")]
    CrNotDivisor { frame_size: usize, cr: usize },
    #[error("cannot keep k = {k} of {n} coefficients")]
    InvalidK { k: usize, n: usize },
    #[error("basis dimension {basis_n} disagrees with frame size {frame_size}")]
    HeaderMismatch { basis_n: usize, frame_size: usize },
    #[error("malformed stream: {0}")]
    MalformedStream(&'static str),
    #[error("bad magic bytes")]
    BadMagic,
    #[error("unsupported container version {0}")]
    UnsupportedVersion(u8),
    #[error("stream truncated")]
    TruncatedStream,
    #[error("corrupt frame: {0}")]
    CorruptFrame(String),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

/// The surviving coefficients of one frame, sorted by ascending index.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseCoefficients {
    n: usize,
    kept: Vec<(u16, f64)>,
}

impl SparseCoefficients {
    /// Validate index ordering and range. An empty `kept` list is legal (it
    /// densifies to all zeros) even though the codec always keeps at least
    /// one coefficient.
    pub fn try_new(n: usize, kept: Vec<(u16, f64)>) -> Result<Self, CodecError> {
        if n > u16::MAX as usize {
            return Err(CodecError::FrameTooLarge(n));
        }
        let mut prev: Option<u16> = None;
        for &(idx, _) in &kept {
            if (idx as usize) >= n {
                return Err(CodecError::CorruptFrame(format!("index {idx} >= n {n}")));
            }
            if let Some(p) = prev {
                if idx <= p {
                    return Err(CodecError::CorruptFrame(format!(
                        "indices not strictly increasing at {idx}"
                    )));
                }
            }
            prev = Some(idx);
        }
        Ok(Self { n, kept })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kept(&self) -> &[(u16, f64)] {
        &self.kept
    }

    /// Sum of squared retained values.
    pub fn energy(&self) -> f64 {
        self.kept.iter().map(|(_, v)| v * v).sum()
    }
}

/// A validated (kind, frame size, compression ratio) triple.
///
/// For GT-I the second-neighbor weight is rounded through `f32` here, since
/// the container stores it as `f32`: compressing and then decompressing from
/// the header must rebuild the bit-identical basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodecConfig {
    kind: TransformKind,
    frame_size: usize,
    cr: usize,
}

impl CodecConfig {
    pub fn new(kind: TransformKind, frame_size: usize, cr: usize) -> Result<Self, CodecError> {
        if frame_size < 3 {
            return Err(CodecError::FrameTooSmall(frame_size));
        }
        if frame_size > u16::MAX as usize {
            return Err(CodecError::FrameTooLarge(frame_size));
        }
        if cr == 0 || !frame_size.is_multiple_of(cr) {
            return Err(CodecError::CrNotDivisor { frame_size, cr });
        }
        if !STANDARD_FRAME_SIZES.contains(&frame_size) {
            log::warn!("nonstandard frame size {frame_size}");
        }
        let kind = match kind {
            TransformKind::Gt1 { w_second } => TransformKind::Gt1 {
                w_second: (w_second as f32) as f64,
            },
            other => other,
        };
        Ok(Self { kind, frame_size, cr })
    }

    pub fn kind(&self) -> TransformKind {
        self.kind
    }

    pub fn frame_size(&self) -> usize {
        self.frame_size
    }

    pub fn cr(&self) -> usize {
        self.cr
    }

    /// Coefficients kept per frame.
    pub fn k(&self) -> usize {
        self.frame_size / self.cr
    }
}

/// Container header, stored with the exact wire-level field types.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StreamHeader {
    pub transform_id: u8,
    pub frame_size: u16,
    pub keep_k: u16,
    pub sample_rate: u32,
    pub original_length: u64,
    pub w_second: f32,
}

impl StreamHeader {
    pub fn kind(&self) -> Option<TransformKind> {
        TransformKind::from_wire(self.transform_id, self.w_second as f64)
    }

    pub fn frame_count(&self) -> usize {
        (self.original_length as usize).div_ceil(self.frame_size as usize)
    }
}

/// Header plus one [`SparseCoefficients`] per frame.
#[derive(Debug, Clone, PartialEq)]
pub struct CompressedStream {
    pub header: StreamHeader,
    pub frames: Vec<SparseCoefficients>,
}

/// Split a signal into non-overlapping frames, zero-padding the tail.
/// Returns the frames and the pad length.
pub fn frame_signal(samples: &[f64], frame_size: usize) -> Result<(Vec<Vec<f64>>, usize), CodecError> {
    if samples.is_empty() {
        return Err(CodecError::EmptySignal);
    }
    if frame_size < 3 {
        return Err(CodecError::FrameTooSmall(frame_size));
    }
    let mut frames: Vec<Vec<f64>> = samples.chunks(frame_size).map(|c| c.to_vec()).collect();
    if let Some(last) = frames.last_mut() {
        last.resize(frame_size, 0.0);
    }
    let pad = frames.len() * frame_size - samples.len();
    Ok((frames, pad))
}

/// Keep the `k` largest-magnitude coefficients; ties break toward the lower
/// index. Retained values are bit-identical to the input.
pub fn keep_top_k(coeffs: &Coefficients, k: usize) -> Result<SparseCoefficients, CodecError> {
    let n = coeffs.len();
    if k == 0 || k > n {
        return Err(CodecError::InvalidK { k, n });
    }
    let v = coeffs.values();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| v[b].abs().total_cmp(&v[a].abs()).then(a.cmp(&b)));
    let mut picked = order[..k].to_vec();
    picked.sort_unstable();
    let kept = picked.into_iter().map(|i| (i as u16, v[i])).collect();
    SparseCoefficients::try_new(n, kept)
}

/// Expand back to a dense vector, zeros everywhere not kept.
pub fn densify(sparse: &SparseCoefficients) -> Coefficients {
    let mut values = vec![0.0; sparse.n()];
    for &(idx, v) in sparse.kept() {
        values[idx as usize] = v;
    }
    Coefficients::from_values(values)
}

/// Forward-project every frame and keep the top `frame_size / cr`
/// coefficients of each.
pub fn compress_signal(
    signal: &Signal,
    config: &CodecConfig,
    basis: &OrthonormalBasis,
) -> Result<CompressedStream, CodecError> {
    if basis.n() != config.frame_size() {
        return Err(CodecError::HeaderMismatch {
            basis_n: basis.n(),
            frame_size: config.frame_size(),
        });
    }
    let (frames, _pad) = frame_signal(signal.samples(), config.frame_size())?;
    let k = config.k();
    let mut sparse = Vec::with_capacity(frames.len());
    for frame in &frames {
        let coeffs = transforms::forward(basis, frame)?;
        sparse.push(keep_top_k(&coeffs, k)?);
    }
    Ok(CompressedStream {
        header: StreamHeader {
            transform_id: config.kind().wire_id(),
            frame_size: config.frame_size() as u16,
            keep_k: k as u16,
            sample_rate: signal.sample_rate(),
            original_length: signal.len() as u64,
            w_second: config.kind().w_second() as f32,
        },
        frames: sparse,
    })
}

/// Densify and invert every frame, concatenate, and drop the tail padding.
pub fn decompress_signal(
    stream: &CompressedStream,
    basis: &OrthonormalBasis,
) -> Result<Vec<f64>, CodecError> {
    let header = &stream.header;
    if stream.frames.is_empty() {
        return Err(CodecError::MalformedStream("stream has no frames"));
    }
    if stream.frames.len() != header.frame_count() {
        return Err(CodecError::MalformedStream("frame count disagrees with header"));
    }
    if basis.n() != header.frame_size as usize {
        return Err(CodecError::HeaderMismatch {
            basis_n: basis.n(),
            frame_size: header.frame_size as usize,
        });
    }
    let mut samples = Vec::with_capacity(stream.frames.len() * header.frame_size as usize);
    for frame in &stream.frames {
        if frame.n() != header.frame_size as usize {
            return Err(CodecError::MalformedStream("frame length disagrees with header"));
        }
        samples.extend(transforms::inverse(basis, &densify(frame))?);
    }
    samples.truncate(header.original_length as usize);
    Ok(samples)
}

/// Serialize to the container format. Byte-exact: the same stream always
/// produces the same bytes.
pub fn encode_stream(stream: &CompressedStream) -> Vec<u8> {
    let h = &stream.header;
    let records: usize = stream.frames.iter().map(|f| f.kept().len()).sum();
    let mut out = Vec::with_capacity(HEADER_LEN + records * RECORD_LEN);
    out.extend_from_slice(&MAGIC);
    out.push(VERSION);
    out.push(h.transform_id);
    out.extend_from_slice(&h.frame_size.to_le_bytes());
    out.extend_from_slice(&h.keep_k.to_le_bytes());
    out.extend_from_slice(&h.sample_rate.to_le_bytes());
    out.extend_from_slice(&h.original_length.to_le_bytes());
    out.extend_from_slice(&h.w_second.to_le_bytes());
    for frame in &stream.frames {
        for &(idx, value) in frame.kept() {
            out.extend_from_slice(&idx.to_le_bytes());
            out.extend_from_slice(&value.to_le_bytes());
        }
    }
    out
}

/// Parse and validate a container.
pub fn decode_stream(bytes: &[u8]) -> Result<CompressedStream, CodecError> {
    if bytes.len() < 4 {
        return Err(CodecError::TruncatedStream);
    }
    if bytes[0..4] != MAGIC {
        return Err(CodecError::BadMagic);
    }
    if bytes.len() < 6 {
        return Err(CodecError::TruncatedStream);
    }
    let version = bytes[4];
    if version != VERSION {
        return Err(CodecError::UnsupportedVersion(version));
    }
    if bytes.len() < HEADER_LEN {
        return Err(CodecError::TruncatedStream);
    }
    let transform_id = bytes[5];
    let frame_size = u16::from_le_bytes([bytes[6], bytes[7]]);
    let keep_k = u16::from_le_bytes([bytes[8], bytes[9]]);
    let sample_rate = u32::from_le_bytes(bytes[10..14].try_into().unwrap());
    let original_length = u64::from_le_bytes(bytes[14..22].try_into().unwrap());
    let w_second = f32::from_le_bytes(bytes[22..26].try_into().unwrap());

    if transform_id > 6 {
        return Err(CodecError::MalformedStream("unknown transform id"));
    }
    if frame_size == 0 {
        return Err(CodecError::MalformedStream("zero frame size"));
    }
    if keep_k == 0 || keep_k > frame_size {
        return Err(CodecError::MalformedStream("keep_k outside 1..=frame_size"));
    }
    if transform_id == 0 {
        if !(w_second > 0.0 && w_second <= 1.0) {
            return Err(CodecError::MalformedStream("w_second outside (0, 1]"));
        }
    } else if w_second != 0.0 {
        return Err(CodecError::MalformedStream("w_second must be 0 unless GT1"));
    }

    let header = StreamHeader {
        transform_id,
        frame_size,
        keep_k,
        sample_rate,
        original_length,
        w_second,
    };

    let frame_count = header.frame_count();
    let expected = HEADER_LEN + frame_count * keep_k as usize * RECORD_LEN;
    if bytes.len() < expected {
        return Err(CodecError::TruncatedStream);
    }
    if bytes.len() > expected {
        return Err(CodecError::MalformedStream("trailing bytes after final frame"));
    }

    let mut frames = Vec::with_capacity(frame_count);
    let mut at = HEADER_LEN;
    for _ in 0..frame_count {
        let mut kept = Vec::with_capacity(keep_k as usize);
        for _ in 0..keep_k {
            let idx = u16::from_le_bytes([bytes[at], bytes[at + 1]]);
            let value = f64::from_le_bytes(bytes[at + 2..at + 10].try_into().unwrap());
            if !value.is_finite() {
                return Err(CodecError::CorruptFrame("non-finite coefficient".into()));
            }
            kept.push((idx, value));
            at += RECORD_LEN;
        }
        frames.push(SparseCoefficients::try_new(frame_size as usize, kept)?);
    }

    Ok(CompressedStream { header, frames })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::audio_io::Signal;
    use crate::metrics;
    use crate::transforms::basis_for;

    fn test_signal(n: usize) -> Signal {
        // Deterministic mix of two tones plus a weak LCG dither.
        let mut state = 0x9e3779b97f4a7c15u64;
        let samples = (0..n)
            .map(|i| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let dither = ((state >> 11) as f64 / (1u64 << 53) as f64 - 0.5) * 0.01;
                let t = i as f64;
                0.4 * (0.05 * t).sin() + 0.2 * (0.31 * t).sin() + dither
            })
            .collect();
        Signal::new(samples, 8000).unwrap()
    }

    #[test]
    fn framing_arithmetic() {
        let samples = vec![0.5; 1000];
        let (frames, pad) = frame_signal(&samples, 512).unwrap();
        assert_eq!(frames.len(), 2);
        assert_eq!(pad, 24);
        assert_eq!(frames[1][487], 0.5);
        assert_eq!(frames[1][488], 0.0);

        let (frames, pad) = frame_signal(&vec![0.1; 512], 512).unwrap();
        assert_eq!((frames.len(), pad), (1, 0));

        let (frames, pad) = frame_signal(&[0.7], 16).unwrap();
        assert_eq!((frames.len(), pad), (1, 15));
        assert_eq!(frames[0][0], 0.7);
        assert!(frames[0][1..].iter().all(|&v| v == 0.0));

        assert_eq!(frame_signal(&[], 16).unwrap_err(), CodecError::EmptySignal);
        assert_eq!(frame_signal(&[0.0], 2).unwrap_err(), CodecError::FrameTooSmall(2));
    }

    #[test]
    fn top_k_selection_and_ties() {
        let c = Coefficients::from_values(vec![3.0, -5.0, 2.0, 1.0]);
        let kept = keep_top_k(&c, 2).unwrap();
        assert_eq!(kept.kept(), &[(0, 3.0), (1, -5.0)]);

        // Tie at |2| resolves to the lower index.
        let c = Coefficients::from_values(vec![2.0, -2.0, 1.0]);
        let kept = keep_top_k(&c, 1).unwrap();
        assert_eq!(kept.kept(), &[(0, 2.0)]);

        assert_eq!(keep_top_k(&c, 0).unwrap_err(), CodecError::InvalidK { k: 0, n: 3 });
        assert_eq!(keep_top_k(&c, 4).unwrap_err(), CodecError::InvalidK { k: 4, n: 3 });
    }

    #[test]
    fn keep_all_then_densify_is_identity() {
        let values = vec![0.25, -1.5, 0.0, 3.25, -0.125];
        let c = Coefficients::from_values(values.clone());
        let dense = densify(&keep_top_k(&c, 5).unwrap());
        assert_eq!(dense.values(), &values[..]);
    }

    #[test]
    fn densify_examples() {
        let sparse = SparseCoefficients::try_new(4, vec![(0, 3.0), (1, -5.0)]).unwrap();
        assert_eq!(densify(&sparse).values(), &[3.0, -5.0, 0.0, 0.0]);

        let empty = SparseCoefficients::try_new(4, vec![]).unwrap();
        assert_eq!(densify(&empty).values(), &[0.0; 4]);
    }

    #[test]
    fn sparse_validation() {
        assert!(matches!(
            SparseCoefficients::try_new(4, vec![(1, 1.0), (1, 2.0)]),
            Err(CodecError::CorruptFrame(_))
        ));
        assert!(matches!(
            SparseCoefficients::try_new(4, vec![(2, 1.0), (1, 2.0)]),
            Err(CodecError::CorruptFrame(_))
        ));
        assert!(matches!(
            SparseCoefficients::try_new(4, vec![(4, 1.0)]),
            Err(CodecError::CorruptFrame(_))
        ));
    }

    #[test]
    fn config_validation() {
        assert!(CodecConfig::new(TransformKind::Gt2, 512, 16).is_ok());
        assert_eq!(
            CodecConfig::new(TransformKind::Gt2, 2, 1).unwrap_err(),
            CodecError::FrameTooSmall(2)
        );
        assert_eq!(
            CodecConfig::new(TransformKind::Gt2, 16, 3).unwrap_err(),
            CodecError::CrNotDivisor { frame_size: 16, cr: 3 }
        );
        assert_eq!(
            CodecConfig::new(TransformKind::Gt2, 16, 0).unwrap_err(),
            CodecError::CrNotDivisor { frame_size: 16, cr: 0 }
        );
        let cfg = CodecConfig::new(TransformKind::Gt2, 16, 16).unwrap();
        assert_eq!(cfg.k(), 1);
    }

    #[test]
    fn config_rounds_w_second_to_f32() {
        let cfg = CodecConfig::new(TransformKind::Gt1 { w_second: 0.1 }, 16, 4).unwrap();
        assert_eq!(cfg.kind().w_second(), (0.1f32) as f64);
    }

    #[test]
    fn lossless_at_cr_one() {
        let signal = test_signal(100);
        let config = CodecConfig::new(TransformKind::Gt2, 16, 1).unwrap();
        let basis = basis_for(config.kind(), 16).unwrap();
        let stream = compress_signal(&signal, &config, &basis).unwrap();
        let back = decompress_signal(&stream, &basis).unwrap();
        assert_eq!(back.len(), signal.len());
        for (a, b) in signal.samples().iter().zip(&back) {
            assert!((a - b).abs() <= 1e-9);
        }
    }

    #[test]
    fn constant_signal_retains_all_energy() {
        let signal = Signal::new(vec![0.5; 64], 8000).unwrap();
        let config = CodecConfig::new(TransformKind::Gt2, 16, 8).unwrap();
        let basis = basis_for(config.kind(), 16).unwrap();
        let (frames, _) = frame_signal(signal.samples(), 16).unwrap();
        for frame in &frames {
            let full = transforms::forward(&basis, frame).unwrap();
            let kept = keep_top_k(&full, config.k()).unwrap();
            let erp = metrics::energy_retained(&full, &kept).unwrap();
            assert!((erp - 100.0).abs() < 1e-9);
        }
    }

    #[test]
    fn white_noise_erp_matches_sort_and_sum_oracle() {
        let signal = test_signal(512);
        let basis = basis_for(TransformKind::Dct2, 512).unwrap();
        let full = transforms::forward(&basis, signal.samples()).unwrap();
        let kept = keep_top_k(&full, 128).unwrap();
        let erp = metrics::energy_retained(&full, &kept).unwrap();

        // Oracle: sort |c| descending, sum the top 128 squares.
        let mut mags: Vec<f64> = full.values().iter().map(|v| v * v).collect();
        mags.sort_by(|a, b| b.total_cmp(a));
        let top: f64 = mags[..128].iter().sum();
        let total: f64 = mags.iter().sum();
        let expected = 100.0 * top / total;
        assert!((erp - expected).abs() < 1e-9, "{erp} vs {expected}");
    }

    #[test]
    fn reconstruction_from_single_dc_coefficient() {
        let basis = basis_for(TransformKind::Gt2, 4).unwrap();
        let stream = CompressedStream {
            header: StreamHeader {
                transform_id: TransformKind::Gt2.wire_id(),
                frame_size: 4,
                keep_k: 1,
                sample_rate: 8000,
                original_length: 4,
                w_second: 0.0,
            },
            frames: vec![SparseCoefficients::try_new(4, vec![(0, 2.0)]).unwrap()],
        };
        let samples = decompress_signal(&stream, &basis).unwrap();
        for v in samples {
            assert!((v - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_frame_stream_is_rejected() {
        let basis = basis_for(TransformKind::Gt2, 4).unwrap();
        let stream = CompressedStream {
            header: StreamHeader {
                transform_id: 1,
                frame_size: 4,
                keep_k: 1,
                sample_rate: 8000,
                original_length: 0,
                w_second: 0.0,
            },
            frames: vec![],
        };
        assert_eq!(
            decompress_signal(&stream, &basis).unwrap_err(),
            CodecError::MalformedStream("stream has no frames")
        );
    }

    #[test]
    fn container_round_trip_is_exact() {
        let signal = test_signal(100);
        let config = CodecConfig::new(TransformKind::Gt1 { w_second: 0.1 }, 16, 4).unwrap();
        let basis = basis_for(config.kind(), 16).unwrap();
        let stream = compress_signal(&signal, &config, &basis).unwrap();

        let bytes = encode_stream(&stream);
        let decoded = decode_stream(&bytes).unwrap();
        assert_eq!(decoded, stream);
        assert_eq!(encode_stream(&decoded), bytes);
    }

    #[test]
    fn container_is_deterministic() {
        let signal = test_signal(333);
        let config = CodecConfig::new(TransformKind::Dct4, 64, 8).unwrap();
        let basis = basis_for(config.kind(), 64).unwrap();
        let a = encode_stream(&compress_signal(&signal, &config, &basis).unwrap());
        let b = encode_stream(&compress_signal(&signal, &config, &basis).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn decode_rejects_damage() {
        let signal = test_signal(40);
        let config = CodecConfig::new(TransformKind::Gt2, 16, 4).unwrap();
        let basis = basis_for(config.kind(), 16).unwrap();
        let bytes = encode_stream(&compress_signal(&signal, &config, &basis).unwrap());

        let mut bad_magic = bytes.clone();
        bad_magic[0] = b'X';
        assert_eq!(decode_stream(&bad_magic).unwrap_err(), CodecError::BadMagic);

        let mut bad_version = bytes.clone();
        bad_version[4] = 9;
        assert_eq!(decode_stream(&bad_version).unwrap_err(), CodecError::UnsupportedVersion(9));

        assert_eq!(decode_stream(&bytes[..20]).unwrap_err(), CodecError::TruncatedStream);
        assert_eq!(
            decode_stream(&bytes[..bytes.len() - 1]).unwrap_err(),
            CodecError::TruncatedStream
        );

        let mut trailing = bytes.clone();
        trailing.push(0);
        assert_eq!(
            decode_stream(&trailing).unwrap_err(),
            CodecError::MalformedStream("trailing bytes after final frame")
        );

        // Out-of-range index in the first record.
        let mut bad_index = bytes.clone();
        bad_index[HEADER_LEN] = 0xff;
        bad_index[HEADER_LEN + 1] = 0xff;
        assert!(matches!(decode_stream(&bad_index).unwrap_err(), CodecError::CorruptFrame(_)));

        assert_eq!(decode_stream(b"GT").unwrap_err(), CodecError::TruncatedStream);
    }

    #[test]
    fn shuffled_basis_leaves_pipeline_metrics_unchanged() {
        // Permuting basis vectors and flipping signs must not change the
        // reconstruction after top-k, nor PSNR, nor ERP.
        let n = 8;
        let canonical = basis_for(TransformKind::Gt2, n).unwrap();
        let m = canonical.matrix();
        let perm = [5usize, 2, 7, 0, 3, 6, 1, 4];
        let signs = [-1.0, 1.0, -1.0, -1.0, 1.0, -1.0, 1.0, -1.0];
        let shuffled = OrthonormalBasis::try_from_columns(crate::mat::SquareMatrix::from_fn(
            n,
            |i, j| signs[j] * m.get(i, perm[j]),
        ))
        .unwrap();

        let signal = test_signal(n);
        let frame = signal.samples();
        let k = 3;

        let run = |basis: &OrthonormalBasis| {
            let full = transforms::forward(basis, frame).unwrap();
            let kept = keep_top_k(&full, k).unwrap();
            let recon = transforms::inverse(basis, &densify(&kept)).unwrap();
            let psnr = metrics::psnr(frame, &recon).unwrap();
            let erp = metrics::energy_retained(&full, &kept).unwrap();
            (recon, psnr, erp)
        };

        let (recon_a, psnr_a, erp_a) = run(&canonical);
        let (recon_b, psnr_b, erp_b) = run(&shuffled);
        for (a, b) in recon_a.iter().zip(&recon_b) {
            assert!((a - b).abs() < 1e-9);
        }
        assert!((psnr_a - psnr_b).abs() < 1e-9);
        assert!((erp_a - erp_b).abs() < 1e-9);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        prop_compose! {
            fn arb_stream()(frame_size in 3u16..24, n_frames in 1usize..4)(
                header_bits in (0u8..7, 1u16..=frame_size, any::<u32>(), 0.005f32..1.0),
                value_bits in proptest::collection::vec(
                    proptest::collection::vec(-1e6f64..1e6, frame_size as usize),
                    n_frames,
                ),
                frame_size in Just(frame_size),
                n_frames in Just(n_frames),
            ) -> CompressedStream {
                let (transform_id, keep_k, sample_rate, raw_w) = header_bits;
                let w_second = if transform_id == 0 { raw_w } else { 0.0 };
                let original_length =
                    (n_frames as u64 - 1) * frame_size as u64 + 1.max(frame_size as u64 / 2);
                let frames = value_bits
                    .into_iter()
                    .map(|vals| {
                        let kept = vals
                            .into_iter()
                            .take(keep_k as usize)
                            .enumerate()
                            .map(|(i, v)| (i as u16, v))
                            .collect();
                        SparseCoefficients::try_new(frame_size as usize, kept).unwrap()
                    })
                    .collect();
                CompressedStream {
                    header: StreamHeader {
                        transform_id,
                        frame_size,
                        keep_k,
                        sample_rate,
                        original_length,
                        w_second,
                    },
                    frames,
                }
            }
        }

        proptest! {
            #[test]
            fn container_round_trips(stream in arb_stream()) {
                let bytes = encode_stream(&stream);
                let decoded = decode_stream(&bytes).unwrap();
                prop_assert_eq!(&decoded, &stream);
                prop_assert_eq!(encode_stream(&decoded), bytes);
            }
        }
    }
}
