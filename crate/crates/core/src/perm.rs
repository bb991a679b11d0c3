//! Vertex permutations, embeddings, and permutation-generator files.

use crate::error::{Error, Result};

pub const GENS_HEADER: &str = "%gdecomp-gens v1";

/// A permutation of `{0..n-1}`, stored as its image vector.
///
/// An [`Embedding`] of a template into a same-sized host is a permutation:
/// template vertex `i` maps to `image(i)`, with isolated vertices carried
/// along.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<usize>);

/// Alias used where a permutation plays the role of a placed copy.
pub type Embedding = Perm;

impl std::fmt::Debug for Perm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Perm{:?}", self.0)
    }
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n).collect())
    }

    /// Validates that `image` is a bijection on `{0..n-1}`.
    pub fn from_images(image: Vec<usize>) -> Result<Perm> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &x in &image {
            if x >= n {
                return Err(Error::InvalidArgument(format!(
                    "permutation image {x} out of range for degree {n}"
                )));
            }
            if seen[x] {
                return Err(Error::InvalidArgument(format!(
                    "permutation repeats image {x}"
                )));
            }
            seen[x] = true;
        }
        Ok(Perm(image))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Composition `self ∘ other`: applies `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree());
        Perm(other.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Perm(inv)
    }

    /// Image of an unordered pair, normalized to `u < v`.
    #[inline]
    pub fn pair_image(&self, (u, v): (usize, usize)) -> (usize, usize) {
        let (a, b) = (self.0[u], self.0[v]);
        (a.min(b), a.max(b))
    }

    pub fn to_line(&self) -> String {
        self.0
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// A generating set for a permutation group of fixed degree.
#[derive(Clone, Debug)]
pub struct PermutationGens {
    pub degree: usize,
    pub generators: Vec<Perm>,
}

impl PermutationGens {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::InvalidArgument(format!(
                    "generator degree {} does not match declared degree {degree}",
                    g.degree()
                )));
            }
        }
        Ok(PermutationGens { degree, generators })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(GENS_HEADER);
        out.push('\n');
        out.push_str(&format!("{} {}\n", self.degree, self.generators.len()));
        for g in &self.generators {
            out.push_str(&g.to_line());
            out.push('\n');
        }
        out
    }
}

/// Parses the permutation-generators file format.
pub fn parse_gens(text: &str) -> Result<PermutationGens> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or(Error::Parse { line: 1, msg: "empty file".into() })?;
    if header.trim() != GENS_HEADER {
        return Err(Error::Parse {
            line: 1,
            msg: format!("expected `{GENS_HEADER}`, got `{}`", header.trim()),
        });
    }
    let (_, counts) = lines
        .next()
        .ok_or(Error::Parse { line: 2, msg: "missing `<n> <g>` line".into() })?;
    let mut it = counts.split_whitespace();
    let n: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or(Error::Parse { line: 2, msg: "bad degree".into() })?;
    let g: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or(Error::Parse { line: 2, msg: "bad generator count".into() })?;
    let mut gens = Vec::with_capacity(g);
    for k in 0..g {
        let (idx, line) = lines.next().ok_or(Error::Parse {
            line: 2 + k + 1,
            msg: format!("expected {g} generator lines, found {k}"),
        })?;
        let lineno = idx + 1;
        let images: Vec<usize> = line
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("bad image `{t}`"),
                })
            })
            .collect::<Result<_>>()?;
        if images.len() != n {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected {n} images, got {}", images.len()),
            });
        }
        gens.push(Perm::from_images(images).map_err(|e| Error::Parse {
            line: lineno,
            msg: e.to_string(),
        })?);
    }
    PermutationGens::new(n, gens)
}
