//! Built-in ray sets with their known closure sizes and colourability.

use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::rayfile::read_rayfile;
use crate::ray::{Ray, RaySet};

/// Directory searched for `<name>.rays` files overriding the built-ins.
pub const CORPUS_DIR_ENV: &str = "KSCTX_CORPUS_DIR";

pub const NAMES: [&str; 6] = ["yu-oh-13", "yu-oh-25", "peres-33", "peres-57", "triad", "two-triads"];

/// Known facts about a corpus set. Counts refer to the set itself unless
/// prefixed `closure_`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Expected {
    pub rays: Option<usize>,
    pub edges: Option<usize>,
    pub triads: Option<usize>,
    pub closure_rays: Option<usize>,
    pub closure_triads: Option<usize>,
    pub ks: Option<bool>,
    pub three_c: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub rays: RaySet,
    pub expected: Expected,
    /// Whether the rays came from a file in [`CORPUS_DIR_ENV`].
    pub external: bool,
}

/// Yu-Oh rays in squared-magnitude notation: the axes, the face diagonals
/// and the body diagonals.
const YU_OH_13: [[i64; 3]; 13] = [
    [0, 0, 1],
    [0, 1, 0],
    [1, 0, 0],
    [0, 1, 1],
    [0, -1, 1],
    [1, 0, 1],
    [-1, 0, 1],
    [1, 1, 0],
    [-1, 1, 0],
    [1, 1, 1],
    [-1, 1, 1],
    [1, -1, 1],
    [1, 1, -1],
];

/// Squared-cosine patterns of the Peres rays, scaled to integers:
/// 0+0+1, 0+1/2+1/2, 0+1/3+2/3 and 1/4+1/4+1/2.
const PERES_PATTERNS: [[i64; 3]; 4] = [[0, 0, 1], [0, 1, 1], [0, 1, 2], [1, 1, 2]];

fn expected(name: &str) -> Expected {
    match name {
        "yu-oh-13" => Expected {
            rays: Some(13),
            // exhaustive pair and triple scan
            edges: Some(24),
            triads: Some(4),
            closure_rays: Some(25),
            closure_triads: Some(16),
            ks: Some(true),
            // exhaustive 3ⁿ enumeration
            three_c: Some(false),
        },
        "yu-oh-25" => Expected {
            rays: Some(25),
            edges: Some(48),
            triads: Some(16),
            closure_rays: Some(25),
            closure_triads: Some(16),
            ks: Some(true),
            three_c: Some(false),
        },
        "peres-33" => Expected {
            rays: Some(33),
            edges: Some(72),
            triads: Some(16),
            closure_rays: Some(57),
            closure_triads: Some(40),
            ks: Some(false),
            three_c: Some(false),
        },
        "peres-57" => Expected {
            rays: Some(57),
            edges: Some(120),
            triads: Some(40),
            closure_rays: Some(57),
            closure_triads: Some(40),
            ks: Some(false),
            three_c: Some(false),
        },
        "triad" => Expected {
            rays: Some(3),
            edges: Some(3),
            triads: Some(1),
            closure_rays: Some(3),
            closure_triads: Some(1),
            ks: Some(true),
            three_c: Some(true),
        },
        "two-triads" => Expected {
            rays: Some(5),
            edges: Some(6),
            triads: Some(2),
            closure_rays: Some(5),
            closure_triads: Some(2),
            ks: Some(true),
            three_c: Some(true),
        },
        _ => Expected::default(),
    }
}

fn from_sqmag_list(rows: &[[i64; 3]]) -> Result<RaySet> {
    let rays = rows.iter().map(|r| Ray::from_sqmag(r)).collect::<Result<Vec<_>>>()?;
    Ok(RaySet::from_rays(3, rays)?.0)
}

fn from_integer_list(rows: &[[i64; 3]]) -> Result<RaySet> {
    let rays = rows.iter().map(|r| Ray::from_integers(r)).collect::<Result<Vec<_>>>()?;
    Ok(RaySet::from_rays(3, rays)?.0)
}

/// All signed coordinate permutations of each pattern, deduplicated projectively.
pub fn sqmag_orbits(patterns: &[[i64; 3]]) -> Result<RaySet> {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut set = RaySet::new(3);
    for pattern in patterns {
        for perm in PERMS {
            for signs in 0..8 {
                let v: [i64; 3] = [0, 1, 2].map(|i| {
                    let x = pattern[perm[i]];
                    if signs >> i & 1 == 1 {
                        -x
                    } else {
                        x
                    }
                });
                set.insert(Ray::from_sqmag(&v)?)?;
            }
        }
    }
    Ok(set)
}

fn check_count(name: &str, what: &str, found: usize, want: usize) -> Result<()> {
    if found != want {
        return Err(Error::CorpusMismatch {
            name: name.into(),
            message: format!("expected {want} {what}, found {found}"),
        });
    }
    Ok(())
}

/// The built-in ray set for `name`, ignoring any override directory.
pub fn builtin(name: &str) -> Result<RaySet> {
    match name {
        "yu-oh-13" => from_sqmag_list(&YU_OH_13),
        "yu-oh-25" => {
            let closed = builtin("yu-oh-13")?.triad_closure()?;
            check_count(name, "rays", closed.len(), 25)?;
            Ok(closed)
        }
        "peres-33" => {
            let set = sqmag_orbits(&PERES_PATTERNS)?;
            check_count(name, "rays", set.len(), 33)?;
            Ok(set)
        }
        "peres-57" => {
            let closed = builtin("peres-33")?.triad_closure()?;
            check_count(name, "rays", closed.len(), 57)?;
            Ok(closed)
        }
        "triad" => from_integer_list(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]),
        "two-triads" => from_integer_list(&[[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0], [1, -1, 0]]),
        _ => Err(Error::UnknownCorpus(name.into())),
    }
}

fn canonical_name(name: &str) -> Result<&'static str> {
    NAMES
        .iter()
        .copied()
        .find(|&n| n == name)
        .ok_or_else(|| Error::UnknownCorpus(name.into()))
}

/// Loads a corpus entry, preferring `$KSCTX_CORPUS_DIR/<name>.rays` when present.
///
/// Closed entries loaded from files are checked against the closure of
/// their generating set.
pub fn corpus_get(name: &str) -> Result<CorpusEntry> {
    let name = canonical_name(name)?;
    let external_path = std::env::var_os(CORPUS_DIR_ENV)
        .map(|dir| PathBuf::from(dir).join(format!("{name}.rays")))
        .filter(|p| p.is_file());
    let (rays, external) = match external_path {
        Some(path) => {
            let rays = read_rayfile(&path)?.rays;
            let generator = match name {
                "yu-oh-25" => Some("yu-oh-13"),
                "peres-57" => Some("peres-33"),
                _ => None,
            };
            if let Some(gen) = generator {
                let closed = corpus_get(gen)?.rays.triad_closure()?;
                if !closed.same_rays(&rays) {
                    return Err(Error::CorpusMismatch {
                        name: name.into(),
                        message: format!("file differs from the triad closure of {gen}"),
                    });
                }
            }
            (rays, true)
        }
        None => (builtin(name)?, false),
    };
    Ok(CorpusEntry {
        name,
        rays,
        expected: expected(name),
        external,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(builtin("yu-oh-13").unwrap().len(), 13);
        assert_eq!(builtin("peres-33").unwrap().len(), 33);
        assert_eq!(builtin("triad").unwrap().len(), 3);
        assert!(matches!(builtin("cabello-18"), Err(Error::UnknownCorpus(_))));
        assert!(matches!(corpus_get("nope"), Err(Error::UnknownCorpus(_))));
    }

    #[test]
    fn yu_oh_completions_are_the_one_one_four_rays() {
        let closed = builtin("yu-oh-25").unwrap();
        let orbit = sqmag_orbits(&[[1, 1, 4]]).unwrap();
        assert_eq!(orbit.len(), 12);
        for ray in closed.rays().iter().skip(13) {
            assert!(orbit.contains(ray), "{ray}");
        }
    }
}
