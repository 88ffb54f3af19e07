//! Command-line surface: `classify`, `census`, `embed`, `figure`.
//!
//! Exit codes: 0 on success (and classifier/census agreement), 1 on invalid
//! input or failed computation, 2 when classifier and census disagree.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::embedding::{Embedding, ExtendedCoord, Sheet};
use crate::error::{Error, Result};
use crate::figures::figure;
use crate::map_family::{parse_preset, CaseLabel, PeriodCensus, UnimodalMap};

#[derive(Debug, Parser)]
#[command(name = "invlimit", version, about = "Inverse limits of two-hyperbola unimodal maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct MapArgs {
    /// Turning point, in (0, 1).
    #[arg(long, allow_negative_numbers = true)]
    rho: Option<f64>,
    /// Denominator constant of the left branch.
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<f64>,
    /// Denominator slope of the left branch.
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    /// Numerator scale of the left branch, negative.
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// key=value file with rho, delta, gamma, alpha; replaces the inline tuple.
    #[arg(long, conflicts_with_all = ["rho", "delta", "gamma", "alpha"])]
    preset: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CensusArgs {
    /// Number of starting points.
    #[arg(long, default_value_t = 2048)]
    grid: usize,
    /// Largest period tested (a power of two).
    #[arg(long, default_value_t = 8)]
    p_max: u32,
    /// Return distance that counts as periodic.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Svg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SheetArg {
    Line,
    ArcInf,
    ArcMinusInf,
    ArcPlusInf,
}

impl From<SheetArg> for Sheet {
    fn from(s: SheetArg) -> Sheet {
        match s {
            SheetArg::Line => Sheet::Line,
            SheetArg::ArcInf => Sheet::ArcInf,
            SheetArg::ArcMinusInf => Sheet::ArcMinusInf,
            SheetArg::ArcPlusInf => Sheet::ArcPlusInf,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Case label, landmarks and a census cross-check.
    Classify {
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        census: CensusArgs,
    },
    /// Brute-force periods on a uniform grid.
    Census {
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        census: CensusArgs,
    },
    /// Evenly spaced points of one sheet with their model coordinates, as CSV.
    Embed {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, value_enum, default_value = "line")]
        sheet: SheetArg,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Backward-orbit length kept when decoding each point.
        #[arg(long, default_value_t = 64)]
        depth: usize,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Figure series as CSV or SVG.
    Figure {
        #[command(flatten)]
        map: MapArgs,
        /// Figure number, 1 to 9.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=9))]
        figure: u8,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Points per curve.
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load_map(args: &MapArgs) -> Result<UnimodalMap> {
    let (rho, delta, gamma, alpha) = match &args.preset {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
            parse_preset(&text)?
        }
        None => {
            let missing: Vec<&str> =
                [("--rho", args.rho), ("--delta", args.delta), ("--gamma", args.gamma), ("--alpha", args.alpha)]
                    .iter()
                    .filter(|(_, v)| v.is_none())
                    .map(|(n, _)| *n)
                    .collect();
            if !missing.is_empty() {
                return Err(Error::Parse(format!("missing {} (or pass --preset FILE)", missing.join(", "))));
            }
            (args.rho.unwrap(), args.delta.unwrap(), args.gamma.unwrap(), args.alpha.unwrap())
        }
    };
    UnimodalMap::new(rho, delta, gamma, alpha)
}

/// Up to six decimals with trailing zeros dropped.
fn short(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn stability(multiplier: f64) -> &'static str {
    match multiplier.abs() {
        m if m < 1.0 => "attracting",
        m if m > 1.0 => "repelling",
        _ => "neutral",
    }
}

/// The one-line case summary printed first by `classify`.
pub fn headline(map: &UnimodalMap) -> String {
    let l = map.landmarks();
    let case = map.case();
    let w0 = short(l.omega0);
    match case {
        CaseLabel::Case1 => {
            format!("{case}: ω0={w0} {}, |f'(ω0)|≈{:.3}", stability(l.omega0_multiplier), l.omega0_multiplier.abs())
        }
        CaseLabel::Case2 => format!("{case}: interval of period-2 points"),
        CaseLabel::Case3a => format!(
            "{case}: ω0={w0} {}, cycle (w1,w2) {}, |λ|≈{:.3}",
            stability(l.omega0_multiplier),
            stability(l.cycle_multiplier.unwrap_or(f64::NAN)),
            l.cycle_multiplier.unwrap_or(f64::NAN).abs()
        ),
        CaseLabel::Case3b => format!("{case}: ω0={w0} {}, interval of period-4 points", stability(l.omega0_multiplier)),
        CaseLabel::OutsideF2n(_) => format!("{case}"),
    }
}

fn census_summary(c: &PeriodCensus) -> String {
    let periods: Vec<String> = c.detected_periods.iter().map(u32::to_string).collect();
    let mut out = format!("census: periods {{{}}}", periods.join(", "));
    match c.stabilization_n {
        Some(n) => write!(out, ", stabilized at n={n}").unwrap(),
        None => out.push_str(", not stabilized"),
    }
    write!(out, ", {} unresolved", c.unresolved).unwrap();
    for iv in &c.periodic_intervals {
        write!(out, "\n  period-{} points on [{}, {}]", iv.period, short(iv.lo), short(iv.hi)).unwrap();
    }
    out
}

fn landmark_line(map: &UnimodalMap) -> String {
    let l = map.landmarks();
    let mut out = format!(
        "landmarks: ρ1={} ω0={} f'(ω0)={} f(ρ1)={}",
        short(l.rho1),
        short(l.omega0),
        short(l.omega0_multiplier),
        short(l.f_rho1)
    );
    if let (Some(w1), Some(w2)) = (l.w1, l.w2) {
        write!(out, " w1={} w2={}", short(w1), short(w2)).unwrap();
    }
    if let Some(lam) = l.cycle_multiplier {
        write!(out, " λ={}", short(lam)).unwrap();
    }
    out
}

fn emit(out: &mut dyn Write, path: &Option<PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Parse(format!("cannot write {}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(|e| Error::Parse(format!("cannot write output: {e}"))),
    }
}

/// The sampled range of `sheet`.
fn sheet_range(e: &Embedding, sheet: Sheet) -> Result<(f64, f64)> {
    let map = e.map();
    let case = map.case();
    Ok(match (sheet, case) {
        (Sheet::Line, _) => e.covered_line(),
        (Sheet::ArcInf, CaseLabel::Case2) => (0.0, map.rho),
        (Sheet::ArcInf, CaseLabel::Case3a) => e.arc_ends().expect("case 3a has arc ends"),
        (Sheet::ArcInf, CaseLabel::Case3b) => {
            let ims = e.arc_table().iter().map(|b| b.image());
            ims.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), im| (lo.min(im.lo), hi.max(im.hi)))
        }
        (Sheet::ArcMinusInf, CaseLabel::Case3b) => (0.0, map.landmarks().f_rho1),
        (Sheet::ArcPlusInf, CaseLabel::Case3b) => (map.rho, map.rho1),
        _ => return Err(Error::WrongCase { required: "a map whose model has this sheet", found: case }),
    })
}

/// CSV of `samples` evenly spaced points of `sheet`; returns the text and the number of skipped rows.
pub fn embed_csv(map: &UnimodalMap, sheet: Sheet, samples: usize, depth: usize) -> Result<(String, usize)> {
    if samples < 2 {
        return Err(Error::Parse("samples must be at least 2".into()));
    }
    let e = Embedding::new(map)?;
    let (lo, hi) = sheet_range(&e, sheet)?;
    let mut out = String::from("sheet,line_value,model_x,model_y,model_z\n");
    let mut skipped = 0;
    for j in 0..samples {
        let v = lo + (hi - lo) * j as f64 / (samples - 1) as f64;
        let c = ExtendedCoord::on(sheet, v);
        let coords = match e.decode(c, depth).and_then(|_| e.model_coordinates(c)) {
            Ok(coords) => coords,
            Err(_) => {
                skipped += 1;
                continue;
            }
        };
        write!(out, "{sheet},{v:.16e}").unwrap();
        for k in 0..3 {
            match coords.get(k) {
                Some(x) => write!(out, ",{x:.16e}").unwrap(),
                None => out.push(','),
            }
        }
        out.push('\n');
    }
    Ok((out, skipped))
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let mut say = |text: String| -> Result<()> {
        writeln!(out, "{text}").map_err(|e| Error::Parse(format!("cannot write output: {e}")))
    };
    match cli.command {
        Command::Classify { map, census } => {
            let map = load_map(&map)?;
            let c = map.period_census(census.grid, census.p_max, census.tol);
            say(headline(&map))?;
            say(format!("parameters: ρ={} δ={} γ={} α={}", map.rho, map.delta, map.gamma, map.alpha))?;
            say(landmark_line(&map))?;
            say(census_summary(&c))?;
            if c.agrees_with(map.case()) {
                say("classifier and census agree".into())?;
                Ok(0)
            } else {
                say("classifier and census disagree".into())?;
                Ok(2)
            }
        }
        Command::Census { map, census } => {
            let map = load_map(&map)?;
            let c = map.period_census(census.grid, census.p_max, census.tol);
            say(census_summary(&c))?;
            Ok(0)
        }
        Command::Embed { map, sheet, samples, depth, out: path } => {
            let map = load_map(&map)?;
            let (text, skipped) = embed_csv(&map, sheet.into(), samples, depth)?;
            if skipped > 0 {
                let _ = writeln!(err, "warning: skipped {skipped} samples outside the covered range");
            }
            emit(out, &path, &text)?;
            Ok(0)
        }
        Command::Figure { map, figure: id, format, samples, out: path } => {
            let map = load_map(&map)?;
            let series = figure(&map, id, samples)?;
            let text = match format {
                Format::Csv => series.to_csv(),
                Format::Svg => series.to_svg(),
            };
            emit(out, &path, &text)?;
            Ok(0)
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("invlimit").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn classify_reports() {
        let (code, out, _) = call(&["classify", "--rho", "0.3", "--delta", "1", "--gamma", "-2", "--alpha", "-1.2"]);
        assert_eq!(code, 0, "{out}");
        assert_eq!(out.lines().next().unwrap(), "Case 3a (n=1): ω0=0.2 repelling, cycle (w1,w2) attracting, |λ|≈0.842");
        let (code, out, _) = call(&["classify", "--rho", "0.5", "--delta", "1", "--gamma", "0", "--alpha", "-1"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().next().unwrap(), "Case 2 (n=1): interval of period-2 points");
    }

    #[test]
    fn constraint_errors_exit_one() {
        let (code, _, err) = call(&["classify", "--rho", "0.5", "--delta", "1", "--gamma", "0", "--alpha", "0"]);
        assert_eq!(code, 1);
        assert!(err.contains("α<0 violated"), "{err}");
        let (code, _, err) = call(&["classify", "--rho", "0.5"]);
        assert_eq!(code, 1);
        assert!(err.contains("--delta"));
    }

    #[test]
    fn embed_rows() {
        let (code, out, _) =
            call(&["embed", "--rho", "0.5", "--delta", "1", "--gamma", "0", "--alpha", "-1", "--samples", "10"]);
        assert_eq!(code, 0);
        let rows: Vec<&str> = out.lines().skip(1).collect();
        assert_eq!(rows.len(), 10);
        for r in rows {
            let v: f64 = r.split(',').nth(1).unwrap().parse().unwrap();
            assert!(v <= 1.0);
            assert!(r.ends_with(','), "z column must be empty: {r}");
        }
    }

    #[test]
    fn figure_case_mismatch() {
        let (code, _, err) =
            call(&["figure", "--rho", "0.5", "--delta", "2", "--gamma", "0", "--alpha", "-1", "--figure", "3"]);
        assert_eq!(code, 1);
        assert!(err.contains("case 2"), "{err}");
    }
}
