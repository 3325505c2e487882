//! Text formats: manifold files, spectrum TSV files, pathway listings and
//! gnuplot blocks.
//!
//! Manifold file:
//!
//! ```text
//! # comment
//! STATES
//! 0 G  0.0
//! 1 EA 401.0
//! TRANSITIONS
//! 0 1 0.1 0.05      # id_i id_j dipole_au gamma_eV
//! ```
//!
//! Spectrum files start with `# key: value` metadata lines. A 2D spectrum
//! then holds one tab-separated row per `Omega3` value with one column per
//! `Omega1` value; a 1D spectrum holds `x<TAB>value` rows. Numbers are
//! written in shortest round-trip exponent form, so reading a file back
//! reproduces every value exactly.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::manifold::{ElectronicManifold, ElectronicState, StateBlock, TransitionTable};
use crate::spectra::{Component, FrequencyGrid, Metadata, PathwayTerm, Spectrum1D, Spectrum2D};

#[derive(Debug, Clone, Copy, PartialEq)]
enum Section {
    States,
    Transitions,
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (k, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Token {
                    text: &line[s..k],
                    column: line[..s].chars().count() + 1,
                });
                start = None;
            }
            (false, None) => start = Some(k),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &line[s..],
            column: line[..s].chars().count() + 1,
        });
    }
    out
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn parse_number(tok: &Token<'_>, line: usize, what: &str) -> Result<f64> {
    let plain = tok
        .text
        .chars()
        .all(|c| c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '+' | '-'));
    match tok.text.parse::<f64>() {
        Ok(v) if plain && v.is_finite() => Ok(v),
        _ => Err(parse_error(
            line,
            tok.column,
            format!("expected a decimal number for {what}, found '{}'", tok.text),
        )),
    }
}

fn parse_id(tok: &Token<'_>, line: usize) -> Result<usize> {
    tok.text.parse::<usize>().map_err(|_| {
        parse_error(
            line,
            tok.column,
            format!(
                "expected a nonnegative integer state id, found '{}'",
                tok.text
            ),
        )
    })
}

/// Parses and validates a manifold file.
pub fn parse_manifold(text: &str) -> Result<ElectronicManifold> {
    let mut section = None;
    let mut states = Vec::new();
    let mut seen_ids = HashSet::new();
    let mut table = TransitionTable::new();

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let toks = tokens(raw);
        if toks.len() == 1
            && toks[0]
                .text
                .chars()
                .all(|c| c.is_ascii_alphabetic() || c == '_')
        {
            section = match toks[0].text {
                "STATES" => Some(Section::States),
                "TRANSITIONS" => Some(Section::Transitions),
                other => {
                    return Err(parse_error(
                        line,
                        toks[0].column,
                        format!("unknown section '{other}'"),
                    ))
                }
            };
            continue;
        }
        match section {
            None => {
                return Err(parse_error(
                    line,
                    toks[0].column,
                    "data row before any STATES or TRANSITIONS header",
                ))
            }
            Some(Section::States) => {
                if toks.len() != 3 {
                    return Err(parse_error(
                        line,
                        toks[0].column,
                        format!(
                            "STATES rows need 3 fields (id block energy), found {}",
                            toks.len()
                        ),
                    ));
                }
                let id = parse_id(&toks[0], line)?;
                let block: StateBlock = toks[1]
                    .text
                    .parse()
                    .map_err(|m: String| parse_error(line, toks[1].column, m))?;
                let energy = parse_number(&toks[2], line, "energy")?;
                if !seen_ids.insert(id) {
                    return Err(parse_error(
                        line,
                        toks[0].column,
                        format!("state id {id} defined twice"),
                    ));
                }
                states.push(ElectronicState::new(id, block, energy));
            }
            Some(Section::Transitions) => {
                if toks.len() != 4 {
                    return Err(parse_error(
                        line,
                        toks[0].column,
                        format!(
                            "TRANSITIONS rows need 4 fields (id_i id_j dipole gamma), found {}",
                            toks.len()
                        ),
                    ));
                }
                let i = parse_id(&toks[0], line)?;
                let j = parse_id(&toks[1], line)?;
                let dipole = parse_number(&toks[2], line, "dipole")?;
                let gamma = parse_number(&toks[3], line, "dephasing")?;
                if table.contains(i, j) {
                    return Err(parse_error(
                        line,
                        toks[0].column,
                        format!("duplicate transition ({i}, {j})"),
                    ));
                }
                table.insert(i, j, dipole, gamma);
            }
        }
    }
    ElectronicManifold::new(states, table).validated()
}

/// Writes a manifold in the format read by [`parse_manifold`].
pub fn format_manifold(manifold: &ElectronicManifold, comment: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(c) = comment {
        for l in c.lines() {
            let _ = writeln!(out, "# {l}");
        }
    }
    out.push_str("STATES\n");
    for s in manifold.states() {
        let _ = writeln!(out, "{} {} {}", s.id, s.block, s.energy);
    }
    out.push_str("TRANSITIONS\n");
    for (i, j, t) in manifold.transitions().iter() {
        let _ = writeln!(out, "{i} {j} {} {}", t.dipole, t.dephasing);
    }
    out
}

fn write_metadata(out: &mut String, metadata: &Metadata) {
    for (k, v) in metadata {
        let _ = writeln!(out, "# {k}: {}", v.replace('\n', " "));
    }
}

/// TSV text of a real 2D spectrum.
pub fn format_spectrum_2d(spectrum: &Spectrum2D) -> String {
    let mut metadata = spectrum.metadata.clone();
    metadata.insert("kind".into(), "spectrum2d".into());
    metadata.insert("component".into(), spectrum.component.name().into());
    metadata.insert("grid1".into(), spectrum.grid1.to_string());
    metadata.insert("grid3".into(), spectrum.grid3.to_string());
    metadata
        .entry("layout".into())
        .or_insert_with(|| "row = fixed Omega3 (grid3), column = fixed Omega1 (grid1)".into());
    let mut out = String::new();
    write_metadata(&mut out, &metadata);
    for row in spectrum.values.rows() {
        let line: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
        out.push_str(&line.join("\t"));
        out.push('\n');
    }
    out
}

/// Two-column TSV text of a 1D spectrum.
pub fn format_spectrum_1d(spectrum: &Spectrum1D) -> String {
    let mut metadata = spectrum.metadata.clone();
    metadata.insert("kind".into(), "spectrum1d".into());
    metadata.insert("grid".into(), spectrum.grid.to_string());
    metadata.insert("axis".into(), spectrum.axis.clone());
    let mut out = String::new();
    write_metadata(&mut out, &metadata);
    for (k, v) in spectrum.values.iter().enumerate() {
        let _ = writeln!(out, "{:e}\t{v:e}", spectrum.grid.value(k));
    }
    out
}

/// Tab-separated listing of closed-form pathway terms.
pub fn format_pathways(terms: &[PathwayTerm]) -> String {
    let mut out = String::from(
        "# component\tstates\tamplitude\tomega1_resonance_eV\tomega3_resonance_eV\tgamma1_eV\tgamma3_eV\n",
    );
    for t in terms {
        let _ = writeln!(
            out,
            "{}\t{},{},{}\t{:e}\t{:e}\t{:e}\t{:e}\t{:e}",
            t.component,
            t.states[0],
            t.states[1],
            t.states[2],
            t.amplitude,
            t.omega1_resonance,
            t.omega3_resonance,
            t.gamma1,
            t.gamma3
        );
    }
    out
}

/// A spectrum read back from a file.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectrumFile {
    OneD(Spectrum1D),
    TwoD(Spectrum2D),
}

fn parse_grid(metadata: &Metadata, key: &str) -> Result<FrequencyGrid> {
    let raw = metadata
        .get(key)
        .ok_or_else(|| parse_error(0, 0, format!("missing '{key}' metadata")))?;
    let parts: Vec<&str> = raw.split(',').map(str::trim).collect();
    let bad = || parse_error(0, 0, format!("malformed grid '{raw}' for '{key}'"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let start = parts[0].parse().map_err(|_| bad())?;
    let step = parts[1].parse().map_err(|_| bad())?;
    let count = parts[2].parse().map_err(|_| bad())?;
    FrequencyGrid::new(start, step, count)
}

/// Reads a spectrum file written by [`format_spectrum_1d`] or
/// [`format_spectrum_2d`].
pub fn parse_spectrum(text: &str) -> Result<SpectrumFile> {
    let mut metadata = Metadata::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        if let Some(rest) = raw.strip_prefix('#') {
            if let Some((key, value)) = rest.trim().split_once(':') {
                metadata.insert(key.trim().to_string(), value.trim().to_string());
            }
            continue;
        }
        if raw.trim().is_empty() {
            continue;
        }
        let row = tokens(raw)
            .iter()
            .map(|t| {
                t.text.parse::<f64>().map_err(|_| {
                    parse_error(
                        line,
                        t.column,
                        format!("expected a number, found '{}'", t.text),
                    )
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }

    match metadata.get("kind").map(String::as_str) {
        Some("spectrum1d") => {
            let grid = parse_grid(&metadata, "grid")?;
            if rows.len() != grid.count || rows.iter().any(|r| r.len() != 2) {
                return Err(parse_error(0, 0, "1D spectrum rows do not match its grid"));
            }
            let axis = metadata.get("axis").cloned().unwrap_or_default();
            Ok(SpectrumFile::OneD(Spectrum1D {
                grid,
                values: rows.iter().map(|r| r[1]).collect(),
                axis,
                metadata,
            }))
        }
        Some("spectrum2d") => {
            let grid1 = parse_grid(&metadata, "grid1")?;
            let grid3 = parse_grid(&metadata, "grid3")?;
            if rows.len() != grid3.count || rows.iter().any(|r| r.len() != grid1.count) {
                return Err(parse_error(
                    0,
                    0,
                    "2D spectrum shape does not match its grids",
                ));
            }
            let component = metadata
                .get("component")
                .and_then(|c| Component::parse(c))
                .unwrap_or(Component::Total);
            let flat: Vec<f64> = rows.into_iter().flatten().collect();
            let values = Array2::from_shape_vec((grid3.count, grid1.count), flat)
                .expect("shape checked above");
            Ok(SpectrumFile::TwoD(Spectrum2D {
                grid1,
                grid3,
                values,
                component,
                metadata,
            }))
        }
        other => Err(parse_error(
            0,
            0,
            format!("unknown spectrum kind {other:?} (expected spectrum1d or spectrum2d)"),
        )),
    }
}

/// Gnuplot-ready text: `x y value` triples with a blank line after every
/// `Omega3` row for 2D data, `x value` pairs for 1D data.
pub fn format_plotdata(spectrum: &SpectrumFile) -> String {
    let mut out = String::new();
    match spectrum {
        SpectrumFile::OneD(s) => {
            let _ = writeln!(out, "# {}\tvalue", s.axis);
            for (k, v) in s.values.iter().enumerate() {
                let _ = writeln!(out, "{:e}\t{v:e}", s.grid.value(k));
            }
        }
        SpectrumFile::TwoD(s) => {
            let _ = writeln!(out, "# Omega1_eV\tOmega3_eV\t{}", s.component);
            for (r, row) in s.values.rows().into_iter().enumerate() {
                let w3 = s.grid3.value(r);
                for (c, v) in row.iter().enumerate() {
                    let _ = writeln!(out, "{:e}\t{w3:e}\t{v:e}", s.grid1.value(c));
                }
                out.push('\n');
            }
        }
    }
    out
}

/// Writes `contents` to a temporary file next to `path` and renames it into
/// place, so `path` never holds partial output.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}
