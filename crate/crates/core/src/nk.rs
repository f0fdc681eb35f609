//! NK fitness landscapes.
//!
//! `N` binary traits, each contributing a value looked up from its own table
//! of `2^(K+1)` uniform draws, indexed by the trait itself (most significant
//! bit) followed by its `K` linked traits in stored order. Fitness is the mean
//! contribution.

use std::fmt::Write as _;
use std::ops::Deref;

use rand::seq::index;
use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::rng::rng_from_seed;

/// Largest trait count accepted by [`exhaustive_analysis`].
pub const MAX_EXHAUSTIVE_TRAITS: usize = 20;

const FORMAT_HEADER: &str = "nk-landscape v1";

/// A vector of `N` binary traits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TraitVector(Vec<bool>);

impl TraitVector {
    pub fn new(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    /// Decodes `index` with trait 0 as the most significant of `len` bits.
    pub fn from_index(index: usize, len: usize) -> Self {
        Self(
            (0..len)
                .map(|i| (index >> (len - 1 - i)) & 1 == 1)
                .collect(),
        )
    }

    pub fn to_index(&self) -> usize {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }
}

impl Deref for TraitVector {
    type Target = [bool];

    fn deref(&self) -> &[bool] {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NkLandscape {
    traits: usize,
    epistasis: usize,
    links: Vec<Vec<usize>>,
    tables: Vec<Vec<f64>>,
}

impl NkLandscape {
    /// Links drawn without replacement from the other traits; table entries uniform on `[0, 1)`.
    pub fn random<R: Rng + ?Sized>(traits: usize, epistasis: usize, rng: &mut R) -> Result<Self> {
        check_shape(traits, epistasis)?;
        let links = (0..traits)
            .map(|i| {
                index::sample(rng, traits - 1, epistasis)
                    .into_iter()
                    .map(|j| if j >= i { j + 1 } else { j })
                    .collect()
            })
            .collect();
        let tables = (0..traits)
            .map(|_| {
                (0..1usize << (epistasis + 1))
                    .map(|_| rng.random::<f64>())
                    .collect()
            })
            .collect();
        Ok(Self {
            traits,
            epistasis,
            links,
            tables,
        })
    }

    pub fn from_parts(
        traits: usize,
        epistasis: usize,
        links: Vec<Vec<usize>>,
        tables: Vec<Vec<f64>>,
    ) -> Result<Self> {
        check_shape(traits, epistasis)?;
        if links.len() != traits || tables.len() != traits {
            return Err(invalid(format!(
                "expected links and tables for {traits} traits"
            )));
        }
        for (i, (own, table)) in links.iter().zip(&tables).enumerate() {
            if own.len() != epistasis {
                return Err(invalid(format!("trait {i}: expected {epistasis} links")));
            }
            let mut seen = vec![false; traits];
            seen[i] = true;
            for &j in own {
                if j >= traits || seen[j] {
                    return Err(invalid(format!(
                        "trait {i}: link {j} is self, repeated or out of range"
                    )));
                }
                seen[j] = true;
            }
            if table.len() != 1 << (epistasis + 1) {
                return Err(invalid(format!(
                    "trait {i}: table must have {} entries",
                    1 << (epistasis + 1)
                )));
            }
            if table.iter().any(|v| !(0.0..=1.0).contains(v)) {
                return Err(invalid(format!(
                    "trait {i}: table values must lie in [0, 1]"
                )));
            }
        }
        Ok(Self {
            traits,
            epistasis,
            links,
            tables,
        })
    }

    /// Every table entry equal to `value`; links are `i+1, i+2, ...` modulo `N`.
    pub fn constant(traits: usize, epistasis: usize, value: f64) -> Result<Self> {
        check_shape(traits, epistasis)?;
        let links = (0..traits)
            .map(|i| (1..=epistasis).map(|d| (i + d) % traits).collect())
            .collect();
        let tables = vec![vec![value; 1 << (epistasis + 1)]; traits];
        Self::from_parts(traits, epistasis, links, tables)
    }

    pub fn traits(&self) -> usize {
        self.traits
    }

    pub fn epistasis(&self) -> usize {
        self.epistasis
    }

    pub fn links(&self) -> &[Vec<usize>] {
        &self.links
    }

    pub fn tables(&self) -> &[Vec<f64>] {
        &self.tables
    }

    /// Mean per-trait contribution; the length of `traits` must be `N`.
    pub fn fitness(&self, traits: &[bool]) -> Result<f64> {
        if traits.len() != self.traits {
            return Err(Error::LengthMismatch {
                expected: self.traits,
                actual: traits.len(),
            });
        }
        Ok(self.fitness_unchecked(traits))
    }

    #[inline]
    pub(crate) fn fitness_unchecked(&self, traits: &[bool]) -> f64 {
        let total: f64 = self
            .links
            .iter()
            .zip(&self.tables)
            .enumerate()
            .map(|(i, (links, table))| {
                let row = links.iter().fold(traits[i] as usize, |row, &j| {
                    (row << 1) | traits[j] as usize
                });
                table[row]
            })
            .sum();
        total / self.traits as f64
    }

    /// Serializes to the versioned flat text format:
    ///
    /// ```text
    /// nk-landscape v1
    /// n <N>
    /// k <K>
    /// trait <i> links <j ...> table <v ...>
    /// ```
    ///
    /// Values use Rust's shortest round-trip float formatting, so parsing the
    /// text yields a bit-identical landscape.
    pub fn to_text(&self) -> String {
        let mut out = format!("{FORMAT_HEADER}\nn {}\nk {}\n", self.traits, self.epistasis);
        for (i, (links, table)) in self.links.iter().zip(&self.tables).enumerate() {
            let _ = write!(out, "trait {i} links");
            for j in links {
                let _ = write!(out, " {j}");
            }
            out.push_str(" table");
            for v in table {
                let _ = write!(out, " {v:?}");
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let parse_err = |line: usize, message: &str| Error::Parse {
            line,
            message: message.to_string(),
        };
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let mut next = |what: &str| {
            lines
                .next()
                .ok_or_else(|| parse_err(0, &format!("missing {what}")))
        };

        let (n, header) = next("header")?;
        if header.trim() != FORMAT_HEADER {
            return Err(parse_err(n + 1, "unsupported landscape format"));
        }
        let mut scalar = |key: &str| -> Result<usize> {
            let (n, line) = next(key)?;
            let mut parts = line.split_whitespace();
            match (parts.next(), parts.next().map(str::parse), parts.next()) {
                (Some(k), Some(Ok(v)), None) if k == key => Ok(v),
                _ => Err(parse_err(n + 1, &format!("expected `{key} <value>`"))),
            }
        };
        let traits = scalar("n")?;
        let epistasis = scalar("k")?;

        let mut links = Vec::with_capacity(traits);
        let mut tables = Vec::with_capacity(traits);
        for i in 0..traits {
            let (n, line) = next("trait line")?;
            let tokens: Vec<&str> = line.split_whitespace().collect();
            let links_at = tokens.iter().position(|&t| t == "links");
            let table_at = tokens.iter().position(|&t| t == "table");
            let (Some(la), Some(ta)) = (links_at, table_at) else {
                return Err(parse_err(n + 1, "expected `trait <i> links ... table ...`"));
            };
            if tokens.first() != Some(&"trait") || la != 2 || ta < la || tokens[1].parse() != Ok(i)
            {
                return Err(parse_err(
                    n + 1,
                    &format!("expected the line for trait {i}"),
                ));
            }
            let own: Vec<usize> = tokens[la + 1..ta]
                .iter()
                .map(|t| t.parse())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| parse_err(n + 1, "bad link id"))?;
            let table: Vec<f64> = tokens[ta + 1..]
                .iter()
                .map(|t| t.parse())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| parse_err(n + 1, "bad table value"))?;
            links.push(own);
            tables.push(table);
        }
        Self::from_parts(traits, epistasis, links, tables)
    }
}

fn check_shape(traits: usize, epistasis: usize) -> Result<()> {
    if traits == 0 {
        return Err(invalid("landscape needs at least one trait"));
    }
    if epistasis >= traits {
        return Err(invalid(format!(
            "K = {epistasis} must be below N = {traits}"
        )));
    }
    if epistasis + 1 >= usize::BITS as usize {
        return Err(invalid(format!("K = {epistasis} is too large")));
    }
    Ok(())
}

/// Generates a landscape deterministically from `seed`.
pub fn generate_landscape(traits: usize, epistasis: usize, seed: u64) -> Result<NkLandscape> {
    NkLandscape::random(traits, epistasis, &mut rng_from_seed(seed))
}

/// Global optimum and local optima of a landscape, found by enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct LandscapeAnalysis {
    pub global_optimum: f64,
    /// Trait vectors with no strictly fitter one-bit neighbour, in index order.
    pub local_optima: Vec<TraitVector>,
}

/// Enumerates all `2^N` trait vectors.
pub fn exhaustive_analysis(land: &NkLandscape) -> Result<LandscapeAnalysis> {
    let n = land.traits();
    if n > MAX_EXHAUSTIVE_TRAITS {
        return Err(Error::TooLarge {
            traits: n,
            limit: MAX_EXHAUSTIVE_TRAITS,
        });
    }
    let values: Vec<f64> = (0..1usize << n)
        .map(|index| land.fitness_unchecked(&TraitVector::from_index(index, n)))
        .collect();
    let global_optimum = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let local_optima = (0..values.len())
        .filter(|&index| (0..n).all(|bit| values[index ^ (1 << bit)] <= values[index]))
        .map(|index| TraitVector::from_index(index, n))
        .collect();
    Ok(LandscapeAnalysis {
        global_optimum,
        local_optima,
    })
}
