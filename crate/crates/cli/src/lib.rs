//! Command-line front end. [`run`] parses arguments, computes on a worker
//! thread with a large stack (deep lazy graphs recurse) and writes the
//! whole result at once, so a failed command prints nothing to stdout.
//!
//! Exit codes: 0 success, 1 usage error, 2 computation error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use corec::catalog::{self, CATALOG};
use corec::dsp;
use corec::{qft, wkb, Error, Stream};

const STACK_BYTES: usize = 512 << 20;

#[derive(Debug, Parser)]
#[command(name = "corec", version, about = "Lazy co-recursive series, towers and audio streams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the first N values of a catalog sequence
    Series {
        #[arg(value_parser = catalog_names())]
        name: String,
        #[arg(long)]
        n: usize,
        /// Emit `index,value` CSV instead of one value per line
        #[arg(long)]
        csv: bool,
    },
    /// Print the first N derivatives of the Lambert W function at 0
    Lambertw {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        csv: bool,
    },
    /// Print coefficients 0..=K of the N-point function as CSV
    Qft {
        #[arg(long = "g")]
        g: usize,
        #[arg(long)]
        order: usize,
    },
    /// Print the WKB coefficients for Q(x) = x at x0 as CSV
    Wkb {
        #[arg(long, allow_negative_numbers = true)]
        x0: f64,
        #[arg(long)]
        orders: usize,
    },
    /// Render a generator to a 16-bit mono WAV file
    Audio {
        kind: AudioKind,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        rate: u32,
        /// Duration in seconds
        #[arg(long)]
        dur: f64,
        #[arg(long, default_value_t = 440.0)]
        freq: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Karplus-Strong delay length; derived from --freq when absent
        #[arg(long)]
        len: Option<usize>,
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        b: f64,
        #[arg(long, default_value_t = 1)]
        m: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AudioKind {
    Sine,
    Euler,
    Vibrato,
    Ks,
    AllpassDemo,
}

fn catalog_names() -> clap::builder::PossibleValuesParser {
    clap::builder::PossibleValuesParser::new(CATALOG.iter().map(|e| e.name))
}

/// Runs one invocation. `argv` includes the program name.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let worker = std::thread::Builder::new()
        .name("corec-compute".into())
        .stack_size(STACK_BYTES)
        .spawn(move || execute(cli.command));
    let result = match worker {
        Ok(handle) => handle.join().unwrap_or_else(|_| Err(Error::Io("computation panicked".into()))),
        Err(e) => Err(Error::from(e)),
    };
    match result {
        Ok(text) => {
            if out.write_all(text.as_bytes()).is_err() {
                return 2;
            }
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Parameter(_) => 1,
                _ => 2,
            }
        }
    }
}

fn execute(cmd: Command) -> corec::Result<String> {
    match cmd {
        Command::Series { name, n, csv } => {
            let values = (catalog::lookup(&name)?.producer)().render(n)?;
            Ok(render(&values, csv))
        }
        Command::Lambertw { n, csv } => {
            let values = corec::dif::lambert_w::<f64>().elements(n)?;
            let values: Vec<String> = values.iter().map(f64::to_string).collect();
            Ok(render(&values, csv))
        }
        Command::Qft { g, order } => {
            let values: Vec<String> = qft::greens_coeffs(g, order)?.iter().map(ToString::to_string).collect();
            Ok(render(&values, true))
        }
        Command::Wkb { x0, orders } => {
            let s0 = wkb::airy_s0_prime(x0)?;
            let table = wkb::wkb_expand(&s0, orders)?.table()?;
            let mut text = String::from("index,u,vprime\n");
            for (k, (u, v)) in table.iter().enumerate() {
                let _ = writeln!(text, "{k},{},{}", u + 0.0, v + 0.0);
            }
            Ok(text)
        }
        Command::Audio {
            kind,
            out,
            rate,
            dur,
            freq,
            seed,
            len,
            b,
            m,
        } => {
            let stream = audio_stream(kind, f64::from(rate), freq, seed, len, b, m)?;
            dsp::write_wav(&out, rate, &stream, dur)?;
            let frames = (f64::from(rate) * dur).floor() as u64;
            Ok(format!("wrote {frames} frames to {}\n", out.display()))
        }
    }
}

fn audio_stream(
    kind: AudioKind,
    rate: f64,
    freq: f64,
    seed: u64,
    len: Option<usize>,
    b: f64,
    m: usize,
) -> corec::Result<Stream<f64>> {
    if freq.is_nan() || freq <= 0.0 || rate <= 0.0 {
        return Err(Error::Parameter(format!("need --freq > 0 and --rate > 0, got {freq} and {rate}")));
    }
    let h = 2.0 * std::f64::consts::PI * freq / rate;
    Ok(match kind {
        AudioKind::Sine => dsp::sine_gen(h),
        AudioKind::Euler => dsp::euler_osc(h).0,
        AudioKind::Vibrato => {
            let lfo = dsp::sine_gen(2.0 * std::f64::consts::PI * 5.0 / rate).map(|s| 1.0 + 0.02 * s);
            dsp::vibrato(h, &lfo).0
        }
        AudioKind::Ks => {
            let len = len.unwrap_or_else(|| (rate / freq - 0.5).round().max(0.0) as usize);
            dsp::karplus_strong(dsp::noise(seed).take(len)?, 0.5)?
        }
        AudioKind::AllpassDemo => dsp::allpass(m, b, &dsp::noise(seed).scale(0.5))?,
    })
}

fn render(values: &[String], csv: bool) -> String {
    let mut text = String::new();
    if csv {
        text.push_str("index,value\n");
        for (k, v) in values.iter().enumerate() {
            let _ = writeln!(text, "{k},{v}");
        }
    } else {
        for v in values {
            let _ = writeln!(text, "{v}");
        }
    }
    text
}
