//! The `xcs2d` command-line interface.
//!
//! Exit status: 0 success, 1 usage error, 2 parse or validation failure,
//! 3 computation or I/O failure.

use std::ffi::OsString;
use std::io::Read as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::factory::{
    build_coupled_manifold, build_product_manifold, CouplingSpec, EdgeLabel, EdgeSpec,
};
use crate::io::{
    format_manifold, format_pathways, format_plotdata, format_spectrum_1d, format_spectrum_2d,
    parse_manifold, parse_spectrum, write_atomic,
};
use crate::manifold::ElectronicManifold;
use crate::pulse::{Envelope, Pulse, PulseSequence};
use crate::response::DecayConvention;
use crate::spectra::{
    cross_peak_direct, fft_2d_spectrum, xanes, Component, FftConfig, FrequencyGrid,
};
use crate::yield_estimate::estimate_yield;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_FAILURE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "xcs2d",
    version,
    about = "XANES and two-dimensional x-ray cross-peak spectra"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a manifold file and list every violation.
    Validate {
        /// Manifold file, or `-` for stdin.
        manifold: PathBuf,
    },
    /// One-dimensional absorption spectrum for one pulse.
    Xanes(XanesArgs),
    /// Closed-form 2D cross peak (total, GSB and ESA).
    Xcs2d(CrossPeakArgs),
    /// 2D spectrum by Fourier transform of the sampled time-domain signal.
    #[command(name = "xcs2d-fft")]
    Xcs2dFft(FftArgs),
    /// Emit a two-edge toy manifold.
    #[command(subcommand)]
    Toy(ToyCommand),
    /// Order-of-magnitude signal yield estimate.
    Yield(YieldArgs),
    /// Re-emit a spectrum file as gnuplot blocks.
    Plotdata {
        file: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EnvelopeArg {
    Rect,
    Gauss,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DecayArg {
    Coherence,
    Absolute,
}

#[derive(Debug, Args)]
pub struct EnvelopeArgs {
    #[arg(long, value_enum, default_value = "rect")]
    pub envelope: EnvelopeArg,
    /// Half-width (rect) or FWHM (gauss) in eV.
    #[arg(long, default_value_t = 5.0)]
    pub width: f64,
}

impl EnvelopeArgs {
    fn envelope(&self) -> Envelope {
        match self.envelope {
            EnvelopeArg::Rect => Envelope::rectangular(self.width),
            EnvelopeArg::Gauss => Envelope::gaussian(self.width),
        }
    }
}

#[derive(Debug, Args)]
pub struct XanesArgs {
    pub manifold: PathBuf,
    #[arg(long)]
    pub carrier: f64,
    /// Rectangular envelope half-width in eV.
    #[arg(long, default_value_t = 5.0, conflicts_with = "fwhm")]
    pub halfwidth: f64,
    /// Use a Gaussian envelope with this FWHM in eV instead.
    #[arg(long)]
    pub fwhm: Option<f64>,
    /// `start,step,count` of the detuning axis in eV.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true, default_value = "-10,0.01,2001")]
    pub grid: FrequencyGrid,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct CrossPeakArgs {
    pub manifold: PathBuf,
    #[arg(long)]
    pub carrier1: f64,
    #[arg(long)]
    pub carrier3: f64,
    #[command(flatten)]
    pub envelope: EnvelopeArgs,
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true, default_value = "-5,0.02,501")]
    pub grid1: FrequencyGrid,
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true, default_value = "-5,0.02,501")]
    pub grid3: FrequencyGrid,
    /// Comma-separated subset of total, gsb, esa.
    #[arg(long, value_delimiter = ',', value_parser = parse_component, default_value = "total,gsb,esa")]
    pub components: Vec<Component>,
    /// Output prefix; files are `<prefix>.<component>.tsv` and `<prefix>.pathways.tsv`.
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct FftArgs {
    pub manifold: PathBuf,
    #[arg(long)]
    pub carrier1: f64,
    #[arg(long)]
    pub carrier3: f64,
    #[command(flatten)]
    pub envelope: EnvelopeArgs,
    /// Frequency step in eV; sets both windows unless given explicitly.
    #[arg(long, default_value_t = 0.02)]
    pub step: f64,
    /// t1 window in fs.
    #[arg(long)]
    pub tmax1: Option<f64>,
    /// t3 window in fs.
    #[arg(long)]
    pub tmax3: Option<f64>,
    #[arg(long, default_value_t = 1024)]
    pub n1: usize,
    #[arg(long, default_value_t = 1024)]
    pub n3: usize,
    /// Waiting time in fs.
    #[arg(long, default_value_t = 0.0)]
    pub t2: f64,
    #[arg(long, value_enum, default_value = "coherence")]
    pub decay: DecayArg,
    /// Output prefix; files are `<prefix>.fft.re.tsv` and `<prefix>.fft.im.tsv`.
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum ToyCommand {
    /// Decoupled product model.
    Product(EdgeArgs),
    /// Product model with shifted doubly excited energies and scaled dipoles.
    Coupled {
        #[command(flatten)]
        edges: EdgeArgs,
        /// Energy shift of every doubly excited state in eV.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        shift: f64,
        /// Scale of every singly to doubly excited dipole.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        /// `a,b,delta` override for one pair (0-based edge indices); repeatable.
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        pair_shift: Vec<(usize, usize, f64)>,
        /// `a,b,s` override for one pair; repeatable.
        #[arg(long, value_parser = parse_pair)]
        pair_scale: Vec<(usize, usize, f64)>,
    },
}

#[derive(Debug, Args)]
pub struct EdgeArgs {
    /// `energy:dipole:gamma` list for edge A.
    #[arg(long, value_delimiter = ',', value_parser = parse_triple, required = true)]
    pub edge_a: Vec<(f64, f64, f64)>,
    /// `energy:dipole:gamma` list for edge B.
    #[arg(long, value_delimiter = ',', value_parser = parse_triple, required = true)]
    pub edge_b: Vec<(f64, f64, f64)>,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct YieldArgs {
    /// Transition dipole in a.u.
    #[arg(long, default_value_t = 0.1)]
    pub dipole: f64,
    /// cm^2
    #[arg(long, default_value_t = 1e-10)]
    pub focal_area: f64,
    /// Molecules per cm^2.
    #[arg(long, default_value_t = 1e14)]
    pub density: f64,
    #[arg(long, default_value_t = 1e13)]
    pub photons: f64,
    /// Absorption linewidth in eV.
    #[arg(long, default_value_t = 10.0)]
    pub linewidth: f64,
    /// Transition energy in eV.
    #[arg(long, default_value_t = 401.0)]
    pub transition: f64,
}

fn parse_grid(s: &str) -> std::result::Result<FrequencyGrid, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected start,step,count, got '{s}'"));
    }
    let start: f64 = parts[0]
        .parse()
        .map_err(|_| format!("bad start '{}'", parts[0]))?;
    let step: f64 = parts[1]
        .parse()
        .map_err(|_| format!("bad step '{}'", parts[1]))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| format!("bad count '{}'", parts[2]))?;
    FrequencyGrid::new(start, step, count).map_err(|e| e.to_string())
}

fn parse_component(s: &str) -> std::result::Result<Component, String> {
    Component::parse(s).ok_or_else(|| format!("unknown component '{s}' (total, gsb, esa)"))
}

fn parse_triple(s: &str) -> std::result::Result<(f64, f64, f64), String> {
    let v: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| format!("expected energy:dipole:gamma, got '{s}'"))?;
    match v[..] {
        [e, mu, g] => Ok((e, mu, g)),
        _ => Err(format!("expected energy:dipole:gamma, got '{s}'")),
    }
}

fn parse_pair(s: &str) -> std::result::Result<(usize, usize, f64), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || format!("expected a,b,value, got '{s}'");
    if parts.len() != 3 {
        return Err(bad());
    }
    Ok((
        parts[0].parse().map_err(|_| bad())?,
        parts[1].parse().map_err(|_| bad())?,
        parts[2].parse().map_err(|_| bad())?,
    ))
}

fn exit_code(error: &Error) -> i32 {
    match error {
        Error::Parse { .. } | Error::InvalidManifold(_) | Error::UnknownState(_) => EXIT_INVALID,
        Error::InvalidParameter(_) | Error::NegativeTime { .. } => EXIT_USAGE,
        Error::Unsupported(_) | Error::NonFinite(_) | Error::Io(_) => EXIT_FAILURE,
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text)?;
        Ok(text)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn load_manifold(path: &Path) -> Result<ElectronicManifold> {
    parse_manifold(&read_input(path)?)
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) if p.as_os_str() != "-" => write_atomic(p, text),
        _ => {
            use std::io::Write as _;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn run_validate(path: &Path) -> Result<i32> {
    match load_manifold(path) {
        Ok(m) => {
            println!(
                "valid: {} states, {} transitions",
                m.states().len(),
                m.transitions().len()
            );
            Ok(EXIT_OK)
        }
        Err(Error::InvalidManifold(violations)) => {
            for v in &violations {
                println!("{v}");
            }
            Ok(EXIT_INVALID)
        }
        Err(e) => Err(e),
    }
}

fn run_xanes(args: &XanesArgs) -> Result<()> {
    let manifold = load_manifold(&args.manifold)?;
    let envelope = match args.fwhm {
        Some(w) => Envelope::gaussian(w),
        None => Envelope::rectangular(args.halfwidth),
    };
    let pulse = Pulse::new(args.carrier, envelope)?;
    let spectrum = xanes(&manifold, &pulse, &args.grid)?;
    write_atomic(&args.output, &format_spectrum_1d(&spectrum))
}

fn run_cross_peak(args: &CrossPeakArgs) -> Result<()> {
    let manifold = load_manifold(&args.manifold)?;
    let seq = PulseSequence::two_color(args.carrier1, args.carrier3, args.envelope.envelope())?;
    let peak = cross_peak_direct(&manifold, &seq, &args.grid1, &args.grid3)?;
    let mut files = Vec::new();
    for &c in &args.components {
        let s = peak.component(c);
        eprintln!("max|{}| = {:e}", c.name(), s.max_abs());
        files.push((
            with_suffix(&args.output, &format!(".{}.tsv", c.name())),
            format_spectrum_2d(&s),
        ));
    }
    files.push((
        with_suffix(&args.output, ".pathways.tsv"),
        format_pathways(&peak.terms),
    ));
    for (path, text) in files {
        write_atomic(&path, &text)?;
    }
    Ok(())
}

fn run_fft(args: &FftArgs) -> Result<()> {
    let manifold = load_manifold(&args.manifold)?;
    let seq = PulseSequence::two_color(args.carrier1, args.carrier3, args.envelope.envelope())?;
    if !(args.step > 0.0 && args.step.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "step must be positive, got {}",
            args.step
        )));
    }
    let mut config = FftConfig::with_step(args.step, args.n1);
    config.n3 = args.n3;
    config.t_max1 = args.tmax1.unwrap_or(config.t_max1);
    config.t_max3 = args.tmax3.unwrap_or(config.t_max3);
    config.t2 = args.t2;
    config.convention = match args.decay {
        DecayArg::Coherence => DecayConvention::Coherence,
        DecayArg::Absolute => DecayConvention::AbsoluteTime,
    };
    let spectrum = fft_2d_spectrum(&manifold, &seq, &config)?;
    if let Some(w) = spectrum.metadata.get("warnings") {
        eprintln!("warning: {w}");
    }
    let mut files = Vec::new();
    for (part, f) in [
        ("re", (|z: &num_complex::Complex64| z.re) as fn(&_) -> f64),
        ("im", |z| z.im),
    ] {
        let mut s = spectrum.map(f);
        s.metadata.insert("part".into(), part.into());
        files.push((
            with_suffix(&args.output, &format!(".fft.{part}.tsv")),
            format_spectrum_2d(&s),
        ));
    }
    for (path, text) in files {
        write_atomic(&path, &text)?;
    }
    Ok(())
}

fn run_toy(cmd: &ToyCommand) -> Result<()> {
    let (edges, manifold, note) = match cmd {
        ToyCommand::Product(edges) => {
            let a = EdgeSpec::from_triples(EdgeLabel::A, &edges.edge_a);
            let b = EdgeSpec::from_triples(EdgeLabel::B, &edges.edge_b);
            (
                edges,
                build_product_manifold(&a, &b)?,
                "product model".to_string(),
            )
        }
        ToyCommand::Coupled {
            edges,
            shift,
            scale,
            pair_shift,
            pair_scale,
        } => {
            let a = EdgeSpec::from_triples(EdgeLabel::A, &edges.edge_a);
            let b = EdgeSpec::from_triples(EdgeLabel::B, &edges.edge_b);
            let mut coupling = CouplingSpec::uniform(a.len(), b.len(), *shift, *scale);
            for &(i, j, d) in pair_shift {
                coupling.set_shift(i, j, d)?;
            }
            for &(i, j, s) in pair_scale {
                coupling.set_scale(i, j, s)?;
            }
            let m = build_coupled_manifold(&a, &b, &coupling)?;
            (
                edges,
                m,
                format!("coupled model, shift {shift} eV, scale {scale}"),
            )
        }
    };
    let text = format_manifold(&manifold, Some(&format!("xcs2d toy: {note}")));
    emit(edges.output.as_deref(), &text)
}

fn run_plotdata(file: &Path, output: Option<&Path>) -> Result<()> {
    let spectrum = parse_spectrum(&read_input(file)?)?;
    emit(output, &format_plotdata(&spectrum))
}

fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Validate { manifold } => return run_validate(manifold),
        Command::Xanes(a) => run_xanes(a)?,
        Command::Xcs2d(a) => run_cross_peak(a)?,
        Command::Xcs2dFft(a) => run_fft(a)?,
        Command::Toy(t) => run_toy(t)?,
        Command::Yield(a) => {
            let y = estimate_yield(
                a.dipole,
                a.focal_area,
                a.density,
                a.photons,
                a.linewidth,
                a.transition,
            )?;
            println!("{y}");
        }
        Command::Plotdata { file, output } => run_plotdata(file, output.as_deref())?,
    }
    Ok(EXIT_OK)
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argument_parsers() {
        assert_eq!(parse_triple("401:0.1:0.05").unwrap(), (401.0, 0.1, 0.05));
        assert!(parse_triple("401:0.1").is_err());
        assert_eq!(parse_pair("0,1,0.5").unwrap(), (0, 1, 0.5));
        let g = parse_grid("-1,0.5,5").unwrap();
        assert_eq!((g.start, g.step, g.count), (-1.0, 0.5, 5));
        assert!(parse_grid("-1,0,5").is_err());
        assert_eq!(parse_component("esa").unwrap(), Component::Esa);
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["xcs2d", "frobnicate"]), EXIT_USAGE);
        assert_eq!(run(["xcs2d", "xanes", "m.txt"]), EXIT_USAGE);
        assert_eq!(run(["xcs2d", "--help"]), EXIT_OK);
    }

    #[test]
    fn yield_defaults_run() {
        assert_eq!(run(["xcs2d", "yield"]), EXIT_OK);
        assert_eq!(run(["xcs2d", "yield", "--dipole", "0"]), EXIT_USAGE);
    }

    #[test]
    fn missing_input_is_failure() {
        assert_eq!(
            run(["xcs2d", "validate", "/nonexistent/manifold.txt"]),
            EXIT_FAILURE
        );
    }
}
