//! Audio as sample streams: oscillators, a plucked string, an all-pass
//! filter, seeded noise, WAV output and a small DFT toolkit for checking
//! them.

use std::io::{BufWriter, Write};
use std::path::Path;

use rand_core::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::parallel::{map_indexed, Exec};
use crate::stream::Stream;

pub type SampleStream = Stream<f64>;

/// `y = sin h : (2cos h·y − (0:y))`, so element `n` is `sin((n+1)h)`.
pub fn sine_gen(h: f64) -> SampleStream {
    let c = 2.0 * h.cos();
    Stream::fix(|y| {
        let y = y.clone();
        Stream::cons(h.sin(), move || {
            let delayed = Stream::cons(0.0, {
                let y = y.clone();
                move || y
            });
            &y.scale(c) - &delayed
        })
    })
}

/// The semi-implicit Euler pair `y = 0:w`, `w = y + h·u`, `u = 1:(u − h·w)`.
/// Returns `(y, u)`.
pub fn euler_osc(h: f64) -> (SampleStream, SampleStream) {
    vibrato(h, &Stream::repeat(1.0))
}

/// [`euler_osc`] with the step scaled sample by sample by `modulation`.
pub fn vibrato(h: f64, modulation: &SampleStream) -> (SampleStream, SampleStream) {
    let (u, u_knot) = Stream::forward();
    let (w, w_knot) = Stream::forward();
    let hm = modulation.scale(h);
    let y = {
        let w = w.clone();
        Stream::cons(0.0, move || w)
    };
    w_knot.bind(&y + &(&hm * &u));
    let (uu, ww) = (u.clone(), w.clone());
    u_knot.bind(Stream::cons(1.0, move || &uu - &(&hm * &ww)));
    (y, u)
}

/// Karplus-Strong string `y = excitation ++ blend·(y + (0:y))` with delay
/// length `L = excitation.len()`.
pub fn karplus_strong(excitation: Vec<f64>, blend: f64) -> Result<SampleStream> {
    if excitation.len() < 2 {
        return Err(Error::Parameter(format!(
            "delay length must be at least 2, got {}",
            excitation.len()
        )));
    }
    Ok(Stream::fix(|y| {
        let y = y.clone();
        let y1 = y.clone();
        let body = Stream::deferred(move || {
            let delayed = Stream::cons(0.0, move || y1);
            Ok((&y + &delayed).scale(blend))
        });
        body.prepend(excitation)
    }))
}

/// First-order all-pass section around an `m`-sample delay:
/// `v = x − b·d`, `d = delay m v`, `y = b·v + d`.
pub fn allpass(m: usize, b: f64, x: &SampleStream) -> Result<SampleStream> {
    if m == 0 {
        return Err(Error::Parameter("all-pass delay must be at least 1".into()));
    }
    if b.is_nan() || b.abs() >= 1.0 {
        return Err(Error::Parameter(format!("all-pass coefficient |{b}| must be below 1")));
    }
    let (v, knot) = Stream::forward();
    let d = v.delay(m, 0.0);
    knot.bind(x - &d.scale(b));
    Ok(&v.scale(b) + &d)
}

/// Uniform samples in `[−1, 1)` from splitmix64: the top 53 bits of each
/// output scaled by `2⁻⁵³`, doubled, minus one.
pub fn noise(seed: u64) -> SampleStream {
    let mut rng = SplitMix64::seed_from_u64(seed);
    Stream::generate(move |_| Ok((rng.next_u64() >> 11) as f64 * (-53f64).exp2() * 2.0 - 1.0))
}

/// Quantizes a sample: clamp to `[−1, 1]`, scale by 32767, round.
pub fn to_pcm16(x: f64) -> i16 {
    (x.clamp(-1.0, 1.0) * 32767.0).round() as i16
}

/// Writes `⌊rate·seconds⌋` frames of mono 16-bit PCM. The file is staged
/// next to `path` and renamed into place, so a failure leaves no partial
/// output.
pub fn write_wav(path: &Path, rate: u32, s: &SampleStream, seconds: f64) -> Result<()> {
    if rate == 0 || seconds.is_nan() || seconds <= 0.0 {
        return Err(Error::Parameter(format!(
            "need rate > 0 and duration > 0, got {rate} and {seconds}"
        )));
    }
    let frames = (f64::from(rate) * seconds).floor() as usize;
    let samples = s.take(frames)?;
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let tmp = tempfile::NamedTempFile::new_in(dir)?;
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: rate,
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    };
    {
        let mut w = hound::WavWriter::new(BufWriter::new(tmp.as_file()), spec).map_err(wav_error)?;
        let mut pcm = w.get_i16_writer(frames as u32);
        for x in samples {
            pcm.write_sample(to_pcm16(x));
        }
        pcm.flush().map_err(wav_error)?;
        w.finalize().map_err(wav_error)?;
    }
    tmp.as_file().flush()?;
    tmp.persist(path).map_err(|e| Error::from(e.error))?;
    Ok(())
}

fn wav_error(e: hound::Error) -> Error {
    Error::Io(e.to_string())
}

/// DFT magnitudes `|X_k|` for bins `0..=n/2`, computed directly with a
/// shared twiddle table and split over bins according to `exec`.
pub fn dft_magnitudes(samples: &[f64], exec: Exec) -> Vec<f64> {
    let n = samples.len();
    if n == 0 {
        return Vec::new();
    }
    let twiddle: Vec<(f64, f64)> = (0..n)
        .map(|j| {
            let a = -2.0 * std::f64::consts::PI * j as f64 / n as f64;
            (a.cos(), a.sin())
        })
        .collect();
    map_indexed(exec, n / 2 + 1, |k| {
        let (mut re, mut im) = (0.0, 0.0);
        let mut idx = 0usize;
        for &x in samples {
            let (c, s) = twiddle[idx];
            re += x * c;
            im += x * s;
            idx += k;
            if idx >= n {
                idx -= n;
            }
        }
        re.hypot(im)
    })
}

/// Index of the largest magnitude, ignoring the DC bin.
pub fn dominant_bin(magnitudes: &[f64]) -> Option<usize> {
    magnitudes
        .iter()
        .enumerate()
        .skip(1)
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, _)| k)
}

/// Amplitude of the component at angular frequency `omega` (radians per
/// sample): `2|Σ xₙ e^{−iωn}|/N`. Exact for a pure tone when the window
/// holds a whole number of periods.
pub fn tone_amplitude(samples: &[f64], omega: f64) -> f64 {
    let (re, im) = samples.iter().enumerate().fold((0.0, 0.0), |(re, im), (n, &x)| {
        let a = omega * n as f64;
        (re + x * a.cos(), im - x * a.sin())
    });
    2.0 * re.hypot(im) / samples.len() as f64
}
