//! Projective rays with exact components, ray sets and triad closure.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::radical::{RadScalar, Rational};

/// A one-dimensional subspace, stored through a canonical spanning vector.
///
/// Canonicalization divides by the first nonzero component when that
/// component is a single radical term, clears all coefficients to coprime
/// integers and makes the first nonzero component positive. When the first
/// nonzero component is a single term the result is a unique normal form for
/// the ray; otherwise only the integer clearing and sign fix apply, and the
/// key is not guaranteed unique. Equality always uses exact proportionality.
#[derive(Clone)]
pub struct Ray {
    components: Vec<RadScalar>,
    key: String,
    unique_key: bool,
}

impl Ray {
    pub const MIN_DIM: usize = 3;

    pub fn new(components: Vec<RadScalar>) -> Result<Self> {
        if components.len() < Self::MIN_DIM {
            return Err(Error::DimError {
                expected: Self::MIN_DIM,
                found: components.len(),
            });
        }
        let lead = components
            .iter()
            .position(|c| !c.is_zero())
            .ok_or(Error::InvalidRay)?;
        let unique_key = components[lead].num_terms() == 1;
        let mut comps = if unique_key {
            let pivot = components[lead].clone();
            components
                .iter()
                .map(|c| c.div_single(&pivot))
                .collect::<Result<Vec<_>>>()?
        } else {
            components
        };

        let lcm = comps
            .iter()
            .fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denominator_lcm()));
        let scaled: Vec<RadScalar> = comps
            .iter()
            .map(|c| c.scale(&Rational::from_integer(lcm.clone())))
            .collect();
        let gcd = scaled
            .iter()
            .fold(BigInt::zero(), |acc, c| num_integer::gcd(acc, c.numerator_gcd()));
        let mut factor = Rational::new(BigInt::one(), gcd);
        if scaled[lead].signum() < 0 {
            factor = -factor;
        }
        comps = scaled.iter().map(|c| c.scale(&factor)).collect();

        let key = comps
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(", ");
        Ok(Self {
            components: comps,
            key,
            unique_key,
        })
    }

    /// Decodes the signed squared-magnitude notation: entry `a` becomes the
    /// component `sign(a)·√|a|`, so the squared cosines are `|aᵢ|/Σ|aⱼ|`.
    pub fn from_sqmag(entries: &[i64]) -> Result<Self> {
        let comps = entries
            .iter()
            .map(|&a| {
                let root = RadScalar::sqrt(a.unsigned_abs())?;
                Ok(if a < 0 { -root } else { root })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(comps)
    }

    pub fn from_integers(entries: &[i64]) -> Result<Self> {
        Self::new(entries.iter().map(|&a| RadScalar::from_integer(a)).collect())
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[RadScalar] {
        &self.components
    }

    /// Rendered canonical components, e.g. `1, 1, -1 r2`.
    pub fn key(&self) -> &str {
        &self.key
    }

    /// Whether the key identifies the ray uniquely among all proportional vectors.
    pub fn has_unique_key(&self) -> bool {
        self.unique_key
    }

    /// Signed squared magnitudes of the canonical components, when every
    /// component is a single radical term with integer coefficient.
    pub fn to_sqmag(&self) -> Option<Vec<i64>> {
        self.components
            .iter()
            .map(|c| {
                if c.is_zero() {
                    return Some(0);
                }
                let (d, q) = c.single_term()?;
                if !q.is_integer() {
                    return None;
                }
                let n = q.numer();
                let mag = (n * n * BigInt::from(d)).to_i64()?;
                Some(if n.is_negative() { -mag } else { mag })
            })
            .collect()
    }

    fn check_dim(&self, other: &Ray) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimError {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    pub fn dot(&self, other: &Ray) -> Result<RadScalar> {
        self.check_dim(other)?;
        let mut acc = RadScalar::zero();
        for (a, b) in self.components.iter().zip(&other.components) {
            acc = acc.plus(&a.try_mul(b)?);
        }
        Ok(acc)
    }

    pub fn is_orthogonal(&self, other: &Ray) -> Result<bool> {
        Ok(self.dot(other)?.is_zero())
    }

    /// True iff every 2×2 minor `aᵢbⱼ − aⱼbᵢ` vanishes.
    pub fn proportional(&self, other: &Ray) -> Result<bool> {
        self.check_dim(other)?;
        if self.unique_key && other.unique_key {
            return Ok(self.key == other.key);
        }
        let (a, b) = (&self.components, &other.components);
        for i in 0..a.len() {
            for j in i + 1..a.len() {
                let minor = a[i].try_mul(&b[j])? - a[j].try_mul(&b[i])?;
                if !minor.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The ray orthogonal to both members of an orthogonal pair in three dimensions.
    pub fn complete(&self, other: &Ray) -> Result<Ray> {
        self.check_dim(other)?;
        if self.dim() != 3 {
            return Err(Error::NotSupported(format!(
                "orthogonal completion in dimension {}",
                self.dim()
            )));
        }
        if !self.is_orthogonal(other)? {
            return Err(Error::NotAPair);
        }
        let (a, b) = (&self.components, &other.components);
        let cross = |i: usize, j: usize| -> Result<RadScalar> {
            Ok(a[i].try_mul(&b[j])? - a[j].try_mul(&b[i])?)
        };
        // Orthogonal nonzero real vectors are never proportional, so the cross product is nonzero.
        Ray::new(vec![cross(1, 2)?, cross(2, 0)?, cross(0, 1)?])
    }
}

impl PartialEq for Ray {
    fn eq(&self, other: &Self) -> bool {
        self.proportional(other).unwrap_or(false)
    }
}

impl fmt::Debug for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ray({})", self.key)
    }
}

impl fmt::Display for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.key)
    }
}

/// An ordered, duplicate-free collection of rays of one dimension.
#[derive(Clone, Debug)]
pub struct RaySet {
    dim: usize,
    rays: Vec<Ray>,
    by_key: HashMap<String, usize>,
    // Rays whose key is not a normal form; membership falls back to a linear scan.
    loose: Vec<usize>,
}

impl RaySet {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            rays: Vec::new(),
            by_key: HashMap::new(),
            loose: Vec::new(),
        }
    }

    /// Builds a set from rays, dropping projective duplicates. Returns the set
    /// and the number of duplicates dropped.
    pub fn from_rays(dim: usize, rays: impl IntoIterator<Item = Ray>) -> Result<(Self, usize)> {
        let mut set = Self::new(dim);
        let mut dropped = 0;
        for ray in rays {
            if !set.insert(ray)? {
                dropped += 1;
            }
        }
        Ok((set, dropped))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Ray> {
        self.rays.iter()
    }

    pub fn get(&self, index: usize) -> &Ray {
        &self.rays[index]
    }

    pub fn position(&self, ray: &Ray) -> Option<usize> {
        if ray.has_unique_key() {
            if let Some(&i) = self.by_key.get(ray.key()) {
                return Some(i);
            }
            return self.loose.iter().copied().find(|&i| self.rays[i] == *ray);
        }
        (0..self.rays.len()).find(|&i| self.rays[i] == *ray)
    }

    pub fn contains(&self, ray: &Ray) -> bool {
        self.position(ray).is_some()
    }

    /// Appends `ray` unless a proportional ray is already present; returns whether it was added.
    pub fn insert(&mut self, ray: Ray) -> Result<bool> {
        if ray.dim() != self.dim {
            return Err(Error::DimError {
                expected: self.dim,
                found: ray.dim(),
            });
        }
        if self.contains(&ray) {
            return Ok(false);
        }
        let index = self.rays.len();
        if ray.has_unique_key() {
            self.by_key.insert(ray.key().to_owned(), index);
        } else {
            self.loose.push(index);
        }
        self.rays.push(ray);
        Ok(true)
    }

    /// Whether both sets contain the same rays, ignoring order.
    pub fn same_rays(&self, other: &RaySet) -> bool {
        self.len() == other.len() && self.iter().all(|r| other.contains(r))
    }

    pub fn is_subset_of(&self, other: &RaySet) -> bool {
        self.iter().all(|r| other.contains(r))
    }

    /// Smallest superset closed under orthogonal completion.
    ///
    /// Rays are visited in order, each paired with every earlier ray; new
    /// completions are appended and visited in turn, so the output order is
    /// the input order followed by insertion order.
    pub fn triad_closure(&self) -> Result<RaySet> {
        if self.dim != 3 {
            return Err(Error::NotSupported(format!(
                "triad closure in dimension {}",
                self.dim
            )));
        }
        let mut out = self.clone();
        let mut j = 0;
        while j < out.len() {
            for i in 0..j {
                let (a, b) = (&out.rays[i], &out.rays[j]);
                if a.is_orthogonal(b)? {
                    let c = a.complete(b)?;
                    out.insert(c)?;
                }
            }
            j += 1;
        }
        Ok(out)
    }
}

impl<'a> IntoIterator for &'a RaySet {
    type Item = &'a Ray;
    type IntoIter = std::slice::Iter<'a, Ray>;
    fn into_iter(self) -> Self::IntoIter {
        self.rays.iter()
    }
}
