//! Text ray files.
//!
//! ```text
//! # comment
//! dim: 3
//! format: sqmag
//! sqmag: 1 -1 4
//! rad: 1, 1, -1 r2
//! 0 0 1
//! ```
//!
//! `dim` (default 3) and `format` (`sqmag` or `rad`, default `sqmag`) must
//! precede the first ray. Lines may carry an explicit `sqmag:` or `rad:`
//! prefix; unprefixed lines use the header format.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::radical::RadScalar;
use crate::ray::{Ray, RaySet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RayFormat {
    Sqmag,
    Rad,
}

#[derive(Clone, Debug)]
pub struct ParsedRays {
    pub rays: RaySet,
    /// Lines whose ray was proportional to an earlier one.
    pub duplicates: usize,
}

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Byte offset of `part` inside `whole`, plus one.
fn column_of(whole: &str, part: &str) -> usize {
    part.as_ptr() as usize - whole.as_ptr() as usize + 1
}

pub fn parse_rayfile(text: &str) -> Result<ParsedRays> {
    let mut dim = 3usize;
    let mut format = RayFormat::Sqmag;
    let mut rays: Option<RaySet> = None;
    let mut duplicates = 0;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (tag, body) = match content.split_once(':') {
            Some((tag, body)) => (Some(tag.trim()), body),
            None => (None, content),
        };

        match tag {
            Some("dim") | Some("format") if rays.is_some() => {
                return Err(parse_error(
                    lineno,
                    column_of(raw, content),
                    "headers must precede the first ray",
                ));
            }
            Some("dim") => {
                let value = body.trim();
                dim = value
                    .parse()
                    .ok()
                    .filter(|&d| d >= Ray::MIN_DIM)
                    .ok_or_else(|| {
                        parse_error(lineno, column_of(raw, value), "dimension must be an integer ≥ 3")
                    })?;
                continue;
            }
            Some("format") => {
                let value = body.trim();
                format = match value {
                    "sqmag" => RayFormat::Sqmag,
                    "rad" => RayFormat::Rad,
                    _ => {
                        return Err(parse_error(
                            lineno,
                            column_of(raw, value),
                            format!("unknown format `{value}`"),
                        ))
                    }
                };
                continue;
            }
            _ => {}
        }

        let (line_format, body) = match tag {
            Some("sqmag") => (RayFormat::Sqmag, body),
            Some("rad") => (RayFormat::Rad, body),
            Some(other) => {
                return Err(parse_error(
                    lineno,
                    column_of(raw, content),
                    format!("unknown directive `{other}`"),
                ))
            }
            None => (format, body),
        };

        let ray = match line_format {
            RayFormat::Sqmag => parse_sqmag_line(raw, body, lineno)?,
            RayFormat::Rad => parse_rad_line(raw, body, lineno)?,
        };
        if ray.len() != dim {
            return Err(Error::DimError {
                expected: dim,
                found: ray.len(),
            });
        }
        let ray = Ray::new(ray)?;
        let set = rays.get_or_insert_with(|| RaySet::new(dim));
        if !set.insert(ray)? {
            duplicates += 1;
        }
    }
    Ok(ParsedRays {
        rays: rays.unwrap_or_else(|| RaySet::new(dim)),
        duplicates,
    })
}

fn parse_sqmag_line(raw: &str, body: &str, lineno: usize) -> Result<Vec<RadScalar>> {
    body.split_whitespace()
        .map(|tok| {
            let value: i64 = tok.parse().map_err(|_| {
                parse_error(lineno, column_of(raw, tok), format!("expected an integer, found `{tok}`"))
            })?;
            let root = RadScalar::sqrt(value.unsigned_abs())
                .map_err(|e| parse_error(lineno, column_of(raw, tok), e.to_string()))?;
            Ok(if value < 0 { -root } else { root })
        })
        .collect()
}

fn parse_rad_line(raw: &str, body: &str, lineno: usize) -> Result<Vec<RadScalar>> {
    body.split(',')
        .map(|part| {
            part.parse::<RadScalar>()
                .map_err(|e| parse_error(lineno, column_of(raw, part) + e.column - 1, e.message))
        })
        .collect()
}

pub fn read_rayfile(path: impl AsRef<Path>) -> Result<ParsedRays> {
    let text = std::fs::read_to_string(path)?;
    parse_rayfile(&text)
}

/// Renders a ray file. Rays with single-term integer components are written
/// as `sqmag:` lines, all others as `rad:` lines.
pub fn export_rayfile(rays: &RaySet) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "dim: {}", rays.dim());
    for ray in rays {
        match ray.to_sqmag() {
            Some(v) => {
                let parts: Vec<String> = v.iter().map(i64::to_string).collect();
                let _ = writeln!(out, "sqmag: {}", parts.join(" "));
            }
            None => {
                let _ = writeln!(out, "rad: {}", ray.key());
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_lines() {
        let p = parse_rayfile("sqmag: 0 0 1").unwrap();
        assert_eq!(p.rays.get(0).key(), "0, 0, 1");
        let p = parse_rayfile("sqmag: 4 1 -1").unwrap();
        assert_eq!(p.rays.get(0).key(), "2, 1, -1");
        let p = parse_rayfile("rad: 1, 1, -1 r2").unwrap();
        assert_eq!(p.rays.get(0).key(), "1, 1, -1 r2");
    }

    #[test]
    fn headers_comments_and_duplicates() {
        let text = "# two rays\nformat: rad\n\n1, 0, 0  # x\n-2, 0, 0\nsqmag: 0 1 0\n";
        let p = parse_rayfile(text).unwrap();
        assert_eq!(p.rays.len(), 2);
        assert_eq!(p.duplicates, 1);
    }

    #[test]
    fn four_dimensional_file() {
        let p = parse_rayfile("dim: 4\n1 0 0 0\n0 1 1 0\n").unwrap();
        assert_eq!(p.rays.dim(), 4);
        assert_eq!(p.rays.len(), 2);
    }

    #[test]
    fn diagnostics() {
        match parse_rayfile("sqmag: 1 x 0").unwrap_err() {
            Error::Parse { line, column, .. } => assert_eq!((line, column), (1, 10)),
            e => panic!("{e:?}"),
        }
        match parse_rayfile("0 0 1\nrad: 1, 1 r, 0").unwrap_err() {
            Error::Parse { line, column, .. } => assert_eq!((line, column), (2, 12)),
            e => panic!("{e:?}"),
        }
        assert!(matches!(
            parse_rayfile("1 0 0\ndim: 3").unwrap_err(),
            Error::Parse { line: 2, .. }
        ));
        assert!(matches!(parse_rayfile("foo: 1 2 3"), Err(Error::Parse { .. })));
        assert!(matches!(parse_rayfile("format: polar"), Err(Error::Parse { .. })));
        assert!(matches!(parse_rayfile("dim: 2"), Err(Error::Parse { .. })));
        assert_eq!(parse_rayfile("0 0 0").unwrap_err(), Error::InvalidRay);
        assert_eq!(
            parse_rayfile("1 0").unwrap_err(),
            Error::DimError { expected: 3, found: 2 }
        );
    }

    #[test]
    fn export_mixes_formats() {
        let p = parse_rayfile("rad: 1, 1 + r2, 0\nsqmag: 2 1 0\n").unwrap();
        let text = export_rayfile(&p.rays);
        assert_eq!(text, "dim: 3\nrad: 1, 1 + 1 r2, 0\nsqmag: 4 2 0\n");
        assert_eq!(export_rayfile(&parse_rayfile(&text).unwrap().rays), text);
    }
}
