//! The benchmark grid: every (file, transform, frame size, compression
//! ratio) cell over a WAV corpus, reported as CSV.
//!
//! Each cell frames the file, projects every frame, keeps the top
//! `frame_size / cr` coefficients, and measures PSNR over the full
//! reconstructed signal plus the energy retained percentage pooled across
//! all frames of the file. Per-cell means across files are appended as
//! rows with the file name `MEAN`; PSNR is averaged in the dB domain.
//!
//! Row order is deterministic — file name, transform id, frame size,
//! compression ratio, all ascending — so two runs over the same corpus
//! produce byte-identical CSV.

use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

use crate::audio_io::{self, Signal};
use crate::codec;
use crate::metrics;
use crate::transforms::{self, TransformKind};

pub const DEFAULT_FRAME_SIZES: [usize; 4] = [16, 64, 256, 512];
pub const DEFAULT_CRS: [usize; 4] = [2, 4, 8, 16];
/// Default GT-I second-neighbor weight for speech corpora.
pub const SPEECH_W_SECOND: f64 = 0.1;
/// GT-I second-neighbor weight used for music corpora.
pub const MUSIC_W_SECOND: f64 = 0.3;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("corpus contains no usable WAV files")]
    EmptyCorpus,
    #[error("no rows to write")]
    NoRows,
    #[error("compression ratio {cr} does not divide frame size {frame_size}")]
    InvalidGrid { frame_size: usize, cr: usize },
    #[error("i/o failure: {0}")]
    Io(#[from] io::Error),
}

/// One cell of the result tables.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub file: String,
    pub kind: TransformKind,
    pub frame_size: usize,
    pub cr: usize,
    pub psnr_db: f64,
    pub erp_pct: f64,
}

/// Which transforms, frame sizes, and compression ratios to sweep.
#[derive(Debug, Clone)]
pub struct GridConfig {
    pub kinds: Vec<TransformKind>,
    pub frame_sizes: Vec<usize>,
    pub crs: Vec<usize>,
}

impl GridConfig {
    /// All seven transforms with the speech weight (0.1) for GT-I.
    pub fn speech() -> Self {
        Self::with_gt1_weight(SPEECH_W_SECOND)
    }

    /// All seven transforms with the music weight (0.3) for GT-I.
    pub fn music() -> Self {
        Self::with_gt1_weight(MUSIC_W_SECOND)
    }

    pub fn with_gt1_weight(w_second: f64) -> Self {
        Self {
            kinds: vec![
                TransformKind::Gt1 { w_second },
                TransformKind::Gt2,
                TransformKind::Dct1,
                TransformKind::Dct2,
                TransformKind::Dct3,
                TransformKind::Dct4,
                TransformKind::Fwht,
            ],
            frame_sizes: DEFAULT_FRAME_SIZES.to_vec(),
            crs: DEFAULT_CRS.to_vec(),
        }
    }

    fn validate(&self) -> Result<(), BenchError> {
        for &frame_size in &self.frame_sizes {
            for &cr in &self.crs {
                if cr == 0 || frame_size % cr != 0 {
                    return Err(BenchError::InvalidGrid { frame_size, cr });
                }
            }
        }
        Ok(())
    }
}

impl Default for GridConfig {
    fn default() -> Self {
        Self::speech()
    }
}

/// Run the full grid over every WAV file in `corpus_dir`.
///
/// Unreadable or silent files are skipped with a warning; failing cells
/// (say, FWHT over a non-power-of-two frame size) are logged and omitted.
/// Per-file rows come first, then one `MEAN` row per grid cell.
pub fn run_grid(corpus_dir: &Path, config: &GridConfig) -> Result<Vec<BenchRow>, BenchError> {
    config.validate()?;

    let mut kinds = config.kinds.clone();
    kinds.sort_by_key(|k| k.wire_id());
    kinds.dedup_by_key(|k| k.wire_id());
    let mut frame_sizes = config.frame_sizes.clone();
    frame_sizes.sort_unstable();
    frame_sizes.dedup();
    let mut crs = config.crs.clone();
    crs.sort_unstable();
    crs.dedup();

    let files = load_corpus(corpus_dir)?;
    if files.is_empty() {
        return Err(BenchError::EmptyCorpus);
    }

    let mut rows = Vec::new();
    for (name, signal) in &files {
        for &kind in &kinds {
            for &frame_size in &frame_sizes {
                match run_cell_group(signal, kind, frame_size, &crs) {
                    Ok(cells) => {
                        for (cr, psnr_db, erp_pct) in cells {
                            rows.push(BenchRow {
                                file: name.clone(),
                                kind,
                                frame_size,
                                cr,
                                psnr_db,
                                erp_pct,
                            });
                        }
                    }
                    Err(err) => {
                        log::warn!("skipping {name} / {kind} / frame {frame_size}: {err}");
                    }
                }
            }
        }
    }

    // Aggregate means in the same deterministic cell order.
    let mut means = Vec::new();
    for &kind in &kinds {
        for &frame_size in &frame_sizes {
            for &cr in &crs {
                let cells: Vec<&BenchRow> = rows
                    .iter()
                    .filter(|r| {
                        r.kind.wire_id() == kind.wire_id()
                            && r.frame_size == frame_size
                            && r.cr == cr
                    })
                    .collect();
                if cells.is_empty() {
                    continue;
                }
                let count = cells.len() as f64;
                means.push(BenchRow {
                    file: "MEAN".to_string(),
                    kind,
                    frame_size,
                    cr,
                    psnr_db: cells.iter().map(|r| r.psnr_db).sum::<f64>() / count,
                    erp_pct: cells.iter().map(|r| r.erp_pct).sum::<f64>() / count,
                });
            }
        }
    }
    rows.extend(means);
    Ok(rows)
}

/// Sorted (name, signal) pairs for every usable WAV file in the directory.
fn load_corpus(dir: &Path) -> Result<Vec<(String, Signal)>, BenchError> {
    let mut names: Vec<String> = fs::read_dir(dir)?
        .filter_map(|entry| entry.ok())
        .filter_map(|entry| entry.file_name().into_string().ok())
        .filter(|name| {
            Path::new(name)
                .extension()
                .is_some_and(|ext| ext.eq_ignore_ascii_case("wav"))
        })
        .collect();
    names.sort();

    let mut files = Vec::with_capacity(names.len());
    for name in names {
        match audio_io::read_wav(dir.join(&name)) {
            Ok(signal) if signal.samples().iter().all(|&v| v == 0.0) => {
                log::warn!("skipping {name}: signal is identically zero");
            }
            Ok(signal) => files.push((name, signal)),
            Err(err) => log::warn!("skipping {name}: {err}"),
        }
    }
    Ok(files)
}

/// All CR cells for one (file, kind, frame size): the forward projections
/// are shared, only the retention and reconstruction differ per CR.
fn run_cell_group(
    signal: &Signal,
    kind: TransformKind,
    frame_size: usize,
    crs: &[usize],
) -> Result<Vec<(usize, f64, f64)>, String> {
    let basis = transforms::basis_for(kind, frame_size).map_err(|e| e.to_string())?;
    let (frames, _pad) = codec::frame_signal(signal.samples(), frame_size).map_err(|e| e.to_string())?;

    let coeffs: Vec<_> = frames
        .iter()
        .map(|frame| transforms::forward(&basis, frame))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let full_energy: f64 = coeffs.iter().map(|c| c.energy()).sum();

    let mut cells = Vec::with_capacity(crs.len());
    for &cr in crs {
        let k = frame_size / cr;
        let mut kept_energy = 0.0;
        let mut recon = Vec::with_capacity(frames.len() * frame_size);
        for c in &coeffs {
            let kept = codec::keep_top_k(c, k).map_err(|e| e.to_string())?;
            kept_energy += kept.energy();
            // Sparse synthesis without densifying: sum the kept vectors.
            let mut frame = vec![0.0; frame_size];
            for &(idx, value) in kept.kept() {
                let row = basis.vector(idx as usize);
                for (o, &b) in frame.iter_mut().zip(row) {
                    *o += value * b;
                }
            }
            recon.extend(frame);
        }
        recon.truncate(signal.len());
        let psnr_db = metrics::psnr(signal.samples(), &recon).map_err(|e| e.to_string())?;
        let erp_pct = 100.0 * kept_energy / full_energy;
        cells.push((cr, psnr_db, erp_pct));
    }
    Ok(cells)
}

/// Write rows as CSV: four decimal places, `inf` for infinite PSNR, mean
/// rows carry the file name `MEAN`.
pub fn emit_csv(rows: &[BenchRow], out_path: &Path) -> Result<(), BenchError> {
    fs::write(out_path, csv_string(rows)?)?;
    Ok(())
}

/// The CSV text itself; exposed so callers can hash or diff output without
/// touching the filesystem.
pub fn csv_string(rows: &[BenchRow]) -> Result<String, BenchError> {
    if rows.is_empty() {
        return Err(BenchError::NoRows);
    }
    let mut out = String::from("file,transform,frame_size,cr,psnr_db,erp_pct\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{:.4},{:.4}\n",
            row.file, row.kind, row.frame_size, row.cr, row.psnr_db, row.erp_pct
        ));
    }
    Ok(out)
}
