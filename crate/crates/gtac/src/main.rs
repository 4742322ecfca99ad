use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use gtac::audio_io::{self, AudioError, Signal};
use gtac::bench::{self, BenchError, GridConfig};
use gtac::codec::{self, CodecConfig};
use gtac::metrics;
use gtac::transforms::{basis_for, TransformKind};

#[derive(Parser)]
#[command(
    name = "gtac",
    version,
    about = "Graph-based transform audio compression toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a transform basis matrix as CSV (one matrix row per line)
    Basis {
        /// Transform kind: gt1, gt2, dct1, dct2, dct3, dct4, fwht
        #[arg(long)]
        kind: String,
        /// Basis dimension (frame length)
        #[arg(long)]
        n: usize,
        /// Second-neighbor weight for gt1
        #[arg(long, default_value_t = bench::SPEECH_W_SECOND)]
        w2: f64,
        /// Output path; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compress a WAV file into a .gtac container
    Compress {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Transform kind: gt1, gt2, dct1, dct2, dct3, dct4, fwht
        #[arg(long)]
        kind: String,
        /// Frame size in samples
        #[arg(long)]
        frame: usize,
        /// Compression ratio (must divide the frame size)
        #[arg(long)]
        cr: usize,
        /// Second-neighbor weight for gt1
        #[arg(long, default_value_t = bench::SPEECH_W_SECOND)]
        w2: f64,
    },
    /// Decompress a .gtac container back to WAV
    Decompress {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print PSNR and MSE between a reference and a test WAV
    Metrics {
        #[arg(long = "ref")]
        reference: PathBuf,
        #[arg(long)]
        test: PathBuf,
    },
    /// Run the full experiment grid over a corpus directory, emitting CSV
    Bench {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Use the music weight (0.3) for GT-I instead of 0.1
        #[arg(long)]
        music: bool,
        /// Comma-separated transform kinds (default: all seven)
        #[arg(long, value_delimiter = ',')]
        kinds: Option<Vec<String>>,
        /// Comma-separated frame sizes (default: 16,64,256,512)
        #[arg(long, value_delimiter = ',')]
        frames: Option<Vec<usize>>,
        /// Comma-separated compression ratios (default: 2,4,8,16)
        #[arg(long, value_delimiter = ',')]
        crs: Option<Vec<usize>>,
    },
}

/// Exit codes: 1 usage, 2 I/O, 3 data/format.
enum CliError {
    Usage(String),
    Io(String),
    Data(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            Self::Usage(_) => 1,
            Self::Io(_) => 2,
            Self::Data(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Self::Usage(m) | Self::Io(m) | Self::Data(m) => m,
        }
    }
}

fn audio_error(err: AudioError) -> CliError {
    match err {
        AudioError::Io(e) => CliError::Io(e.to_string()),
        other => CliError::Data(other.to_string()),
    }
}

fn bench_error(err: BenchError) -> CliError {
    match err {
        BenchError::Io(e) => CliError::Io(e.to_string()),
        BenchError::InvalidGrid { .. } => CliError::Usage(err.to_string()),
        other => CliError::Data(other.to_string()),
    }
}

fn parse_kind(name: &str, w2: f64) -> Result<TransformKind, CliError> {
    TransformKind::parse(name, w2)
        .ok_or_else(|| CliError::Usage(format!("unknown transform kind '{name}'")))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{err}");
                return ExitCode::SUCCESS;
            }
            eprint!("{err}");
            return ExitCode::from(1);
        }
    };

    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Basis { kind, n, w2, out } => {
            let kind = parse_kind(&kind, w2)?;
            let basis = basis_for(kind, n).map_err(|e| CliError::Usage(e.to_string()))?;
            let matrix = basis.matrix();
            let mut text = String::new();
            for i in 0..matrix.n() {
                let line: Vec<String> = matrix.row(i).iter().map(|v| v.to_string()).collect();
                text.push_str(&line.join(","));
                text.push('\n');
            }
            match out {
                Some(path) => fs::write(path, text).map_err(|e| CliError::Io(e.to_string()))?,
                None => print!("{text}"),
            }
            Ok(())
        }
        Command::Compress { input, out, kind, frame, cr, w2 } => {
            let kind = parse_kind(&kind, w2)?;
            let config =
                CodecConfig::new(kind, frame, cr).map_err(|e| CliError::Usage(e.to_string()))?;
            let basis = basis_for(config.kind(), config.frame_size())
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let signal = audio_io::read_wav(&input).map_err(audio_error)?;
            let stream = codec::compress_signal(&signal, &config, &basis)
                .map_err(|e| CliError::Data(e.to_string()))?;
            fs::write(&out, codec::encode_stream(&stream))
                .map_err(|e| CliError::Io(e.to_string()))?;
            Ok(())
        }
        Command::Decompress { input, out } => {
            let bytes = fs::read(&input).map_err(|e| CliError::Io(e.to_string()))?;
            let stream =
                codec::decode_stream(&bytes).map_err(|e| CliError::Data(e.to_string()))?;
            let kind = stream
                .header
                .kind()
                .ok_or_else(|| CliError::Data("unknown transform id".to_string()))?;
            let basis = basis_for(kind, stream.header.frame_size as usize)
                .map_err(|e| CliError::Data(e.to_string()))?;
            let samples = codec::decompress_signal(&stream, &basis)
                .map_err(|e| CliError::Data(e.to_string()))?;
            let signal = Signal::clamped(samples, stream.header.sample_rate)
                .map_err(|e| CliError::Data(e.to_string()))?;
            audio_io::write_wav(&out, &signal).map_err(audio_error)?;
            Ok(())
        }
        Command::Metrics { reference, test } => {
            let reference = audio_io::read_wav(&reference).map_err(audio_error)?;
            let test = audio_io::read_wav(&test).map_err(audio_error)?;
            let mse = metrics::mse(reference.samples(), test.samples())
                .map_err(|e| CliError::Data(e.to_string()))?;
            let psnr = metrics::psnr(reference.samples(), test.samples())
                .map_err(|e| CliError::Data(e.to_string()))?;
            println!("PSNR: {psnr:.4} dB");
            println!("MSE: {mse:.6e}");
            Ok(())
        }
        Command::Bench { corpus, out, music, kinds, frames, crs } => {
            let w2 = if music { bench::MUSIC_W_SECOND } else { bench::SPEECH_W_SECOND };
            let mut config = GridConfig::with_gt1_weight(w2);
            if let Some(kinds) = kinds {
                config.kinds = kinds
                    .iter()
                    .map(|name| parse_kind(name, w2))
                    .collect::<Result<_, _>>()?;
            }
            if let Some(frames) = frames {
                config.frame_sizes = frames;
            }
            if let Some(crs) = crs {
                config.crs = crs;
            }
            let rows = bench::run_grid(&corpus, &config).map_err(bench_error)?;
            bench::emit_csv(&rows, &out).map_err(bench_error)?;
            println!("wrote {} rows to {}", rows.len(), out.display());
            Ok(())
        }
    }
}
