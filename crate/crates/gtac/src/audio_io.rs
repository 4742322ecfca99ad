//! WAV reading and writing.
//!
//! Input may be 16-bit integer PCM or 32-bit IEEE float, mono or stereo,
//! with arbitrary extra chunks (skipped). Integer samples map to float by
//! `value / 32768` so the full range lands in `[-1, 1)` exactly; stereo is
//! downmixed by per-sample channel average. Output is always a canonical
//! 44-byte-header PCM16 mono file, quantized by round-to-nearest-even of
//! `value · 32768` and clamped to the integer rails.

use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

const PCM16_SCALE: f64 = 32768.0;

#[derive(Debug, Error)]
pub enum AudioError {
    #[error("i/o failure: {0}")]
    Io(#[from] io::Error),
    #[error("not a RIFF/WAVE file")]
    NotRiff,
    #[error("unsupported codec: format {format}, {bits} bits, {channels} channel(s)")]
    UnsupportedCodec { format: u16, bits: u16, channels: u16 },
    #[error("corrupt header: {0}")]
    CorruptHeader(&'static str),
    #[error("file contains no audio samples")]
    EmptyAudio,
    #[error("invalid signal: {0}")]
    InvalidSignal(&'static str),
}

/// Normalized mono audio: finite samples in `[-1, 1]` at a positive rate.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<f64>,
    sample_rate: u32,
}

impl Signal {
    pub fn new(samples: Vec<f64>, sample_rate: u32) -> Result<Self, AudioError> {
        if sample_rate == 0 {
            return Err(AudioError::InvalidSignal("sample rate must be positive"));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(AudioError::InvalidSignal("non-finite sample"));
        }
        if samples.iter().any(|v| *v < -1.0 || *v > 1.0) {
            return Err(AudioError::InvalidSignal("sample outside [-1, 1]"));
        }
        Ok(Self { samples, sample_rate })
    }

    /// Like [`new`](Self::new) but clamps into range first. Reconstructed
    /// audio can overshoot slightly; quantization would clip it anyway.
    pub fn clamped(samples: Vec<f64>, sample_rate: u32) -> Result<Self, AudioError> {
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(AudioError::InvalidSignal("non-finite sample"));
        }
        let samples = samples.into_iter().map(|v| v.clamp(-1.0, 1.0)).collect();
        Self::new(samples, sample_rate)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

struct FmtChunk {
    format: u16,
    channels: u16,
    sample_rate: u32,
    bits: u16,
}

/// Read a WAV file into a normalized signal.
pub fn read_wav(path: impl AsRef<Path>) -> Result<Signal, AudioError> {
    let bytes = fs::read(path)?;
    parse_wav(&bytes)
}

fn parse_wav(bytes: &[u8]) -> Result<Signal, AudioError> {
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(AudioError::NotRiff);
    }

    let mut fmt: Option<FmtChunk> = None;
    let mut data: Option<&[u8]> = None;
    let mut at = 12;
    while at + 8 <= bytes.len() {
        let id = &bytes[at..at + 4];
        let size = u32::from_le_bytes(bytes[at + 4..at + 8].try_into().unwrap()) as usize;
        let body_start = at + 8;
        let body_end = body_start.checked_add(size).ok_or(AudioError::CorruptHeader(
            "chunk size overflows",
        ))?;
        if body_end > bytes.len() {
            return Err(AudioError::CorruptHeader("chunk extends past end of file"));
        }
        let body = &bytes[body_start..body_end];
        match id {
            b"fmt " => {
                if size < 16 {
                    return Err(AudioError::CorruptHeader("fmt chunk too short"));
                }
                fmt = Some(FmtChunk {
                    format: u16::from_le_bytes(body[0..2].try_into().unwrap()),
                    channels: u16::from_le_bytes(body[2..4].try_into().unwrap()),
                    sample_rate: u32::from_le_bytes(body[4..8].try_into().unwrap()),
                    bits: u16::from_le_bytes(body[14..16].try_into().unwrap()),
                });
            }
            b"data" => {
                data = Some(body);
            }
            _ => {} // skip unknown chunks (LIST, fact, cue, ...)
        }
        // Chunks are word-aligned; odd sizes carry a pad byte.
        at = body_end + (size & 1);
        if data.is_some() && fmt.is_some() {
            break;
        }
    }

    let fmt = fmt.ok_or(AudioError::CorruptHeader("missing fmt chunk"))?;
    let data = data.ok_or(AudioError::CorruptHeader("missing data chunk"))?;

    if fmt.sample_rate == 0 {
        return Err(AudioError::CorruptHeader("zero sample rate"));
    }
    let bytes_per_sample = match (fmt.format, fmt.bits) {
        (1, 16) => 2,
        (3, 32) => 4,
        _ => {
            return Err(AudioError::UnsupportedCodec {
                format: fmt.format,
                bits: fmt.bits,
                channels: fmt.channels,
            })
        }
    };
    if fmt.channels != 1 && fmt.channels != 2 {
        return Err(AudioError::UnsupportedCodec {
            format: fmt.format,
            bits: fmt.bits,
            channels: fmt.channels,
        });
    }

    let block = bytes_per_sample * fmt.channels as usize;
    if data.len() % block != 0 {
        return Err(AudioError::CorruptHeader("data size not a multiple of block align"));
    }
    let n_frames = data.len() / block;
    if n_frames == 0 {
        return Err(AudioError::EmptyAudio);
    }

    let decode_one = |offset: usize| -> Result<f64, AudioError> {
        match bytes_per_sample {
            2 => {
                let v = i16::from_le_bytes(data[offset..offset + 2].try_into().unwrap());
                Ok(v as f64 / PCM16_SCALE)
            }
            _ => {
                let v = f32::from_le_bytes(data[offset..offset + 4].try_into().unwrap());
                if !v.is_finite() {
                    return Err(AudioError::CorruptHeader("non-finite float sample"));
                }
                Ok((v as f64).clamp(-1.0, 1.0))
            }
        }
    };

    let mut samples = Vec::with_capacity(n_frames);
    for frame in 0..n_frames {
        let base = frame * block;
        let value = if fmt.channels == 1 {
            decode_one(base)?
        } else {
            (decode_one(base)? + decode_one(base + bytes_per_sample)?) / 2.0
        };
        samples.push(value);
    }

    Signal::new(samples, fmt.sample_rate)
}

/// Write a canonical PCM16 mono WAV file.
pub fn write_wav(path: impl AsRef<Path>, signal: &Signal) -> Result<(), AudioError> {
    fs::write(path, wav_bytes(signal))?;
    Ok(())
}

fn wav_bytes(signal: &Signal) -> Vec<u8> {
    let data_size = (signal.len() * 2) as u32;
    let mut out = Vec::with_capacity(44 + data_size as usize);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_size).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes()); // PCM
    out.extend_from_slice(&1u16.to_le_bytes()); // mono
    out.extend_from_slice(&signal.sample_rate().to_le_bytes());
    out.extend_from_slice(&(signal.sample_rate() * 2).to_le_bytes()); // byte rate
    out.extend_from_slice(&2u16.to_le_bytes()); // block align
    out.extend_from_slice(&16u16.to_le_bytes()); // bits per sample
    out.extend_from_slice(b"data");
    out.extend_from_slice(&data_size.to_le_bytes());
    for &v in signal.samples() {
        out.extend_from_slice(&quantize(v).to_le_bytes());
    }
    out
}

/// Round-to-nearest-even of `value · 32768`, clamped to the i16 range.
fn quantize(value: f64) -> i16 {
    (value * PCM16_SCALE).round_ties_even().clamp(-32768.0, 32767.0) as i16
}
