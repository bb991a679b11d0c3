//! Decomposition certificates: structure, independent verification, the
//! certificate file format, superposition, and certificate complementation.

use crate::canon::{canonical_labeling, is_isomorphic};
use crate::error::{Error, Result};
use crate::graph::{SimpleGraph, GRAPH_HEADER};
use crate::perm::Perm;

pub const CERT_HEADER: &str = "%gdecomp-cert v1";

/// Largest multiplicity a certificate may carry.
pub const MAX_MULTIPLICITY: u32 = 1 << 15;

/// A partition certificate: `copies` are vertex permutations whose edge
/// images cover every unordered pair exactly `m` times.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    template: SimpleGraph,
    m: u32,
    copies: Vec<Perm>,
}

/// Expected copy count `m n(n-1) / (2e)`, when integral.
pub fn expected_copies(g: &SimpleGraph, m: u32) -> Option<u64> {
    let total = m as u64 * g.pair_count() as u64;
    let e = g.edge_count() as u64;
    (e > 0 && total % e == 0).then(|| total / e)
}

impl Decomposition {
    /// Structural construction; coverage is checked separately by
    /// [`Decomposition::verify`].
    pub fn new(template: SimpleGraph, m: u32, copies: Vec<Perm>) -> Result<Self> {
        if m == 0 || m > MAX_MULTIPLICITY {
            return Err(Error::InvalidArgument(format!(
                "multiplicity must be in 1..={MAX_MULTIPLICITY}"
            )));
        }
        if template.edge_count() == 0 {
            return Err(Error::InvalidArgument("template needs at least one edge".into()));
        }
        let expected = expected_copies(&template, m).ok_or_else(|| {
            Error::InvalidArgument("edge count does not divide m n(n-1)/2".into())
        })?;
        if copies.len() as u64 != expected {
            return Err(Error::CertificateInvalid(format!(
                "expected {expected} copies, got {}",
                copies.len()
            )));
        }
        for c in &copies {
            if c.degree() != template.n() {
                return Err(Error::CertificateInvalid(
                    "copy permutation degree mismatch".into(),
                ));
            }
        }
        Ok(Decomposition { template, m, copies })
    }

    pub fn template(&self) -> &SimpleGraph {
        &self.template
    }

    pub fn multiplicity(&self) -> u32 {
        self.m
    }

    pub fn copies(&self) -> &[Perm] {
        &self.copies
    }

    /// Recomputes the pair-coverage multiset from scratch and checks exact
    /// `m`-fold coverage. Independent of any search bookkeeping.
    pub fn verify(&self) -> VerifyOutcome {
        let n = self.template.n();
        let expected = match expected_copies(&self.template, self.m) {
            Some(l) => l,
            None => {
                return VerifyOutcome::Invalid(VerifyFailure::CopyCount {
                    expected: 0,
                    got: self.copies.len() as u64,
                })
            }
        };
        if self.copies.len() as u64 != expected {
            return VerifyOutcome::Invalid(VerifyFailure::CopyCount {
                expected,
                got: self.copies.len() as u64,
            });
        }
        let mut count = vec![0u32; n * n];
        for copy in &self.copies {
            for &e in self.template.edges() {
                let (u, v) = copy.pair_image(e);
                count[u * n + v] += 1;
            }
        }
        for u in 0..n {
            for v in (u + 1)..n {
                let c = count[u * n + v];
                if c != self.m {
                    return VerifyOutcome::Invalid(VerifyFailure::Coverage {
                        pair: (u, v),
                        got: c,
                        expected: self.m,
                    });
                }
            }
        }
        VerifyOutcome::Valid
    }

    pub fn is_valid(&self) -> bool {
        matches!(self.verify(), VerifyOutcome::Valid)
    }

    /// Byte-deterministic certificate text.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(CERT_HEADER);
        out.push('\n');
        out.push_str(&format!(
            "graph {} {}\n",
            self.template.n(),
            self.template.edge_count()
        ));
        for &(u, v) in self.template.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out.push_str(&format!("multiplicity {}\n", self.m));
        out.push_str(&format!("copies {}\n", self.copies.len()));
        for c in &self.copies {
            out.push_str(&c.to_line());
            out.push('\n');
        }
        out.push_str("end\n");
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyOutcome {
    Valid,
    Invalid(VerifyFailure),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyFailure {
    CopyCount { expected: u64, got: u64 },
    Coverage { pair: (usize, usize), got: u32, expected: u32 },
}

impl std::fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VerifyFailure::CopyCount { expected, got } => {
                write!(f, "copy count {got} does not match required {expected}")
            }
            VerifyFailure::Coverage { pair, got, expected } => {
                write!(
                    f,
                    "pair ({},{}) covered {got} times, expected {expected}",
                    pair.0, pair.1
                )
            }
        }
    }
}

/// Superimposes two certificates over isomorphic templates into one at the
/// summed multiplicity. The second certificate is relabeled onto the first's
/// template through canonical forms.
pub fn superimpose(a: &Decomposition, b: &Decomposition) -> Result<Decomposition> {
    if a.template.n() != b.template.n() || !is_isomorphic(&a.template, &b.template) {
        return Err(Error::InvalidArgument(
            "templates are not isomorphic; cannot superimpose".into(),
        ));
    }
    let m = a
        .m
        .checked_add(b.m)
        .filter(|&m| m <= MAX_MULTIPLICITY)
        .ok_or_else(|| Error::InvalidArgument("summed multiplicity too large".into()))?;
    // phi maps b's template onto a's: phi = c_a^{-1} . c_b
    let ca = canonical_labeling(&a.template);
    let cb = canonical_labeling(&b.template);
    let phi = ca.inverse().compose(&cb);
    let phi_inv = phi.inverse();
    let mut copies = a.copies.clone();
    copies.extend(b.copies.iter().map(|p| p.compose(&phi_inv)));
    let out = Decomposition::new(a.template.clone(), m, copies)?;
    debug_assert!(out.is_valid());
    Ok(out)
}

/// Complements a certificate: the same permutations read against the
/// complement template cover every pair `l - m` times, where `l` is the copy
/// count.
pub fn complement_certificate(cert: &Decomposition) -> Result<Decomposition> {
    let comp = cert.template.complement();
    if comp.edge_count() == 0 {
        return Err(Error::InvalidArgument(
            "complement template has no edges".into(),
        ));
    }
    let l = cert.copies.len() as u64;
    let m = l - cert.m as u64;
    if m == 0 || m > MAX_MULTIPLICITY as u64 {
        return Err(Error::InvalidArgument(format!(
            "complement multiplicity {m} out of range"
        )));
    }
    let out = Decomposition::new(comp, m as u32, cert.copies.clone())?;
    debug_assert!(out.is_valid());
    Ok(out)
}

/// Parses the certificate file format, reporting line numbers on violations.
pub fn parse_certificate(text: &str) -> Result<Decomposition> {
    let mut lines = text.lines().enumerate().peekable();
    let expect_line = |lines: &mut std::iter::Peekable<
        std::iter::Enumerate<std::str::Lines<'_>>,
    >,
                       what: &str|
     -> Result<(usize, String)> {
        match lines.next() {
            Some((idx, l)) => Ok((idx + 1, l.to_string())),
            None => Err(Error::Parse { line: 0, msg: format!("missing {what}") }),
        }
    };

    let (lineno, header) = expect_line(&mut lines, "header")?;
    if header.trim() != CERT_HEADER {
        return Err(Error::Parse {
            line: lineno,
            msg: format!("expected `{CERT_HEADER}`"),
        });
    }
    let (lineno, gline) = expect_line(&mut lines, "`graph <n> <e>`")?;
    let toks: Vec<&str> = gline.split_whitespace().collect();
    if toks.len() != 3 || toks[0] != "graph" {
        return Err(Error::Parse { line: lineno, msg: "expected `graph <n> <e>`".into() });
    }
    let n: usize = toks[1]
        .parse()
        .map_err(|_| Error::Parse { line: lineno, msg: "bad vertex count".into() })?;
    let e: usize = toks[2]
        .parse()
        .map_err(|_| Error::Parse { line: lineno, msg: "bad edge count".into() })?;
    let mut graph_text = format!("{GRAPH_HEADER}\n{n} {e}\n");
    for _ in 0..e {
        let (lineno, l) = expect_line(&mut lines, "edge line")?;
        let _ = lineno;
        graph_text.push_str(&l);
        graph_text.push('\n');
    }
    let template = crate::graph::parse_graph(&graph_text).map_err(|err| match err {
        // graph body starts at line 3 of the certificate, line 2 of the embedded text
        Error::Parse { line, msg } => Error::Parse { line: line + 1, msg },
        other => other,
    })?;

    let (lineno, mline) = expect_line(&mut lines, "`multiplicity <m>`")?;
    let m: u32 = mline
        .strip_prefix("multiplicity ")
        .and_then(|t| t.trim().parse().ok())
        .ok_or(Error::Parse { line: lineno, msg: "expected `multiplicity <m>`".into() })?;
    let (lineno, cline) = expect_line(&mut lines, "`copies <l>`")?;
    let l: usize = cline
        .strip_prefix("copies ")
        .and_then(|t| t.trim().parse().ok())
        .ok_or(Error::Parse { line: lineno, msg: "expected `copies <l>`".into() })?;
    let mut copies = Vec::with_capacity(l);
    for _ in 0..l {
        let (lineno, pline) = expect_line(&mut lines, "copy line")?;
        let images: Vec<usize> = pline
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
        copies.push(Perm::from_images(images).map_err(|e| Error::Parse {
            line: lineno,
            msg: e.to_string(),
        })?);
    }
    let (lineno, endline) = expect_line(&mut lines, "`end`")?;
    if endline.trim() != "end" {
        return Err(Error::Parse { line: lineno, msg: "expected `end`".into() });
    }
    Decomposition::new(template, m, copies)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::builtin;

    fn two_c5() -> Decomposition {
        // K5 as two 5-cycles: 0-1-2-3-4 and 0-2-4-1-3
        let c5 = builtin("cycle", &[5]).unwrap();
        let copies = vec![
            Perm::identity(5),
            Perm::from_images(vec![0, 2, 4, 1, 3]).unwrap(),
        ];
        Decomposition::new(c5, 1, copies).unwrap()
    }

    #[test]
    fn verify_two_cycles() {
        assert!(two_c5().is_valid());
    }

    #[test]
    fn verify_catches_wrong_copy_count() {
        let c5 = builtin("cycle", &[5]).unwrap();
        let err = Decomposition::new(c5, 1, vec![Perm::identity(5)]).unwrap_err();
        assert!(matches!(err, Error::CertificateInvalid(_)));
    }

    #[test]
    fn verify_catches_bad_coverage() {
        let c5 = builtin("cycle", &[5]).unwrap();
        let cert =
            Decomposition::new(c5, 1, vec![Perm::identity(5), Perm::identity(5)]).unwrap();
        match cert.verify() {
            VerifyOutcome::Invalid(VerifyFailure::Coverage { pair, got, expected }) => {
                assert_eq!(pair, (0, 1));
                assert_eq!(got, 2);
                assert_eq!(expected, 1);
            }
            other => panic!("expected coverage failure, got {other:?}"),
        }
    }

    #[test]
    fn cert_text_round_trip() {
        let cert = two_c5();
        let text = cert.to_text();
        let back = parse_certificate(&text).unwrap();
        assert_eq!(back, cert);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn superimpose_doubles_multiplicity() {
        let a = two_c5();
        let b = two_c5();
        let s = superimpose(&a, &b).unwrap();
        assert_eq!(s.multiplicity(), 2);
        assert_eq!(s.copies().len(), 4);
        assert!(s.is_valid());
    }

    #[test]
    fn superimpose_rejects_different_templates() {
        let a = two_c5();
        let s4 = builtin("star", &[4]).unwrap();
        let copies = vec![
            Perm::identity(4),
            Perm::from_images(vec![1, 0, 2, 3]).unwrap(),
            Perm::from_images(vec![2, 0, 1, 3]).unwrap(),
            Perm::from_images(vec![3, 0, 1, 2]).unwrap(),
        ];
        let b = Decomposition::new(s4, 2, copies).unwrap();
        assert!(b.is_valid());
        assert!(superimpose(&a, &b).is_err());
    }

    #[test]
    fn complement_of_c5_certificate() {
        // C5 is self-complementary; l - m = 2 - 1 = 1
        let cert = two_c5();
        let comp = complement_certificate(&cert).unwrap();
        assert_eq!(comp.multiplicity(), 1);
        assert!(comp.is_valid());
        let back = complement_certificate(&comp).unwrap();
        assert_eq!(back.multiplicity(), cert.multiplicity());
        assert_eq!(back.copies(), cert.copies());
    }

    #[test]
    fn complement_rejects_complete_template() {
        let k4 = builtin("complete", &[4]).unwrap();
        let cert = Decomposition::new(k4, 1, vec![Perm::identity(4)]).unwrap();
        assert!(cert.is_valid());
        assert!(complement_certificate(&cert).is_err());
    }
}
