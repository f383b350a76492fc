//! Permutations of {0, …, d−1} stored as image arrays.
//!
//! Conventions, fixed once for the whole crate:
//! - composition is (a ∘ b)(x) = a(b(x)), i.e. `a.compose(&b)` applies `b` first;
//! - conjugation is g^h = h g h⁻¹, i.e. `g.conjugated_by(&h)`;
//! - all internal points are 0-based, all textual I/O is 1-based cycle notation.

use crate::error::{Error, Result};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    img: Vec<u8>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            img: (0..degree as u8).collect(),
        }
    }

    /// Builds from an image array; rejects non-bijections.
    pub fn from_images(img: Vec<u8>) -> Result<Self> {
        if img.len() > 255 {
            return Err(Error::InvalidInput(format!(
                "permutation degree {} exceeds 255",
                img.len()
            )));
        }
        let mut seen = vec![false; img.len()];
        for &v in &img {
            if (v as usize) >= img.len() || seen[v as usize] {
                return Err(Error::InvalidInput(format!(
                    "image array {:?} is not a permutation",
                    img
                )));
            }
            seen[v as usize] = true;
        }
        Ok(Permutation { img })
    }

    pub fn degree(&self) -> usize {
        self.img.len()
    }

    pub fn apply(&self, x: u8) -> u8 {
        self.img[x as usize]
    }

    pub fn images(&self) -> &[u8] {
        &self.img
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(i, &v)| i as u8 == v)
    }

    /// (self ∘ rhs)(x) = self(rhs(x)).
    pub fn compose(&self, rhs: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), rhs.degree());
        Permutation {
            img: rhs.img.iter().map(|&x| self.img[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut img = vec![0u8; self.img.len()];
        for (i, &v) in self.img.iter().enumerate() {
            img[v as usize] = i as u8;
        }
        Permutation { img }
    }

    /// g^h = h g h⁻¹.
    pub fn conjugated_by(&self, h: &Permutation) -> Permutation {
        h.compose(self).compose(&h.inverse())
    }

    pub fn order(&self) -> u64 {
        self.cycle_lengths()
            .into_iter()
            .fold(1u64, |acc, l| num_integer::lcm(acc, l as u64))
    }

    /// Lengths of all cycles including fixed points, sorted descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t = self.cycle_lengths();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    fn cycle_lengths(&self) -> Vec<usize> {
        let mut seen = vec![false; self.img.len()];
        let mut out = Vec::new();
        for start in 0..self.img.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                len += 1;
                x = self.img[x] as usize;
            }
            out.push(len);
        }
        out
    }

    pub fn is_transposition(&self) -> bool {
        self.img.iter().enumerate().filter(|&(i, &v)| i as u8 != v).count() == 2
    }

    /// Nontrivial cycles, each rotated to start at its minimum, sorted by that
    /// minimum. This is the canonical cycle decomposition used for display.
    pub fn cycles(&self) -> Vec<Vec<u8>> {
        let mut seen = vec![false; self.img.len()];
        let mut out = Vec::new();
        for start in 0..self.img.len() {
            if seen[start] || self.img[start] as usize == start {
                seen[start] = true;
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x as u8);
                x = self.img[x] as usize;
            }
            out.push(cyc);
        }
        out
    }

    /// Builds from 0-based cycles; cycles must be disjoint and in range.
    pub fn from_cycles(cycles: &[Vec<u8>], degree: usize) -> Result<Self> {
        let mut img: Vec<u8> = (0..degree as u8).collect();
        let mut used = vec![false; degree];
        for cyc in cycles {
            for (k, &x) in cyc.iter().enumerate() {
                if x as usize >= degree {
                    return Err(Error::InvalidInput(format!(
                        "cycle point {} out of range for degree {}",
                        x + 1,
                        degree
                    )));
                }
                if used[x as usize] {
                    return Err(Error::InvalidInput(format!(
                        "point {} repeated across cycles",
                        x + 1
                    )));
                }
                used[x as usize] = true;
                img[x as usize] = cyc[(k + 1) % cyc.len()];
            }
        }
        Permutation::from_images(img)
    }

    /// Parses 1-based cycle notation, e.g. "(1 2)(3 4 5)" or "(1,2)". "()"
    /// denotes the identity.
    pub fn parse(s: &str, degree: usize) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "()" {
            return Ok(Permutation::identity(degree));
        }
        let mut cycles: Vec<Vec<u8>> = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let open = rest.find('(').ok_or_else(|| {
                Error::InvalidInput(format!("expected '(' in cycle notation: {s:?}"))
            })?;
            if !rest[..open].trim().is_empty() {
                return Err(Error::InvalidInput(format!(
                    "unexpected text {:?} in cycle notation",
                    &rest[..open]
                )));
            }
            let close = rest[open..].find(')').ok_or_else(|| {
                Error::InvalidInput(format!("unbalanced '(' in cycle notation: {s:?}"))
            })? + open;
            let body = &rest[open + 1..close];
            let mut cyc = Vec::new();
            for tok in body.split(|c: char| c.is_whitespace() || c == ',') {
                if tok.is_empty() {
                    continue;
                }
                let v: usize = tok.parse().map_err(|_| {
                    Error::InvalidInput(format!("bad cycle entry {tok:?} in {s:?}"))
                })?;
                if v == 0 || v > degree {
                    return Err(Error::InvalidInput(format!(
                        "cycle entry {v} out of range 1..={degree}"
                    )));
                }
                cyc.push((v - 1) as u8);
            }
            if !cyc.is_empty() {
                cycles.push(cyc);
            }
            rest = &rest[close + 1..];
        }
        Permutation::from_cycles(&cycles, degree)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cyc in cycles {
            write!(f, "(")?;
            for (k, &x) in cyc.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", x + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, d: usize) -> Permutation {
        Permutation::parse(s, d).unwrap()
    }

    #[test]
    fn compose_applies_right_factor_first() {
        // (1 2) ∘ (2 3): b first sends 3 to 2, then a sends 2 to 1.
        let a = p("(1 2)", 3);
        let b = p("(2 3)", 3);
        let c = a.compose(&b);
        assert_eq!(c, p("(1 2 3)", 3));
        assert_eq!(c.apply(2), 0);
    }

    #[test]
    fn conjugation_relabels_cycles() {
        // (1 2)^(2 3) = (2 3)(1 2)(2 3) = (1 3).
        let g = p("(1 2)", 3);
        let h = p("(2 3)", 3);
        assert_eq!(g.conjugated_by(&h), p("(1 3)", 3));
    }

    #[test]
    fn conjugation_composes_contravariantly_in_the_exponent() {
        // (g^a)^b = g^(b a): both sides conjugate by b∘a.
        let g = p("(1 2 3)", 4);
        let a = p("(3 4)", 4);
        let b = p("(1 4)", 4);
        assert_eq!(
            g.conjugated_by(&a).conjugated_by(&b),
            g.conjugated_by(&b.compose(&a))
        );
    }

    #[test]
    fn inverse_and_order() {
        let g = p("(1 2 3)(4 5)", 5);
        assert!(g.compose(&g.inverse()).is_identity());
        assert_eq!(g.order(), 6);
        assert_eq!(g.cycle_type(), vec![3, 2]);
    }

    #[test]
    fn parse_display_round_trip() {
        for s in ["()", "(1 2)", "(1 2)(3 4)", "(2 4 3)", "(1 3 5)(2 4)"] {
            let g = p(s, 5);
            assert_eq!(p(&g.to_string(), 5), g);
        }
        assert_eq!(p("(1, 2) (3,4)", 4), p("(1 2)(3 4)", 4));
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(Permutation::parse("(0 1)", 3).is_err());
        assert!(Permutation::parse("(1 4)", 3).is_err());
        assert!(Permutation::parse("(1 2)(2 3)", 3).is_err());
        assert!(Permutation::parse("(1 2", 3).is_err());
    }

    #[test]
    fn identity_is_lexicographically_minimal() {
        // Element ids sort by image array; the identity must come first.
        let id = Permutation::identity(4);
        for img in [[1u8, 0, 2, 3], [0, 2, 1, 3], [3, 2, 1, 0]] {
            assert!(id < Permutation::from_images(img.to_vec()).unwrap());
        }
    }

    #[test]
    fn transposition_recognition() {
        assert!(p("(2 3)", 4).is_transposition());
        assert!(!p("(1 2)(3 4)", 4).is_transposition());
        assert!(!p("(1 2 3)", 4).is_transposition());
        assert!(!Permutation::identity(4).is_transposition());
    }
}
