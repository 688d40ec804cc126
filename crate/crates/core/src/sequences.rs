//! Degree sequences: parsing, graphicality, and the reduction transforms.
//!
//! A [`DegreeSequence`] is always kept sorted non-increasing. The transforms
//! (`laying_sequence`, `lifting_sequence`, `minus2_sequence`,
//! `complement_sequence`) re-normalize their output, so callers can chain
//! them freely.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SequenceError {
    #[error("malformed token `{0}` (expected INT or INT^INT)")]
    MalformedToken(String),
    #[error("exponent must be positive in `{0}`")]
    BadExponent(String),
    #[error("empty sequence")]
    Empty,
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
    #[error("sequence is not graphic")]
    NotGraphic,
}

/// A non-increasing sequence of vertex degrees.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DegreeSequence {
    degrees: Vec<u32>,
}

impl DegreeSequence {
    /// Builds a sequence from arbitrary-order entries; sorts non-increasing.
    pub fn new(mut degrees: Vec<u32>) -> Result<Self, SequenceError> {
        if degrees.is_empty() {
            return Err(SequenceError::Empty);
        }
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        Ok(DegreeSequence { degrees })
    }

    /// Parses exponent notation, e.g. `6^3,5^4` for (6,6,6,5,5,5,5).
    /// Plain integers are single terms; whitespace is ignored.
    pub fn parse(text: &str) -> Result<Self, SequenceError> {
        let mut degrees = Vec::new();
        for raw in text.split(',') {
            let tok: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
            if tok.is_empty() {
                return Err(SequenceError::MalformedToken(raw.to_string()));
            }
            let (base, count) = match tok.split_once('^') {
                None => (tok.as_str(), 1i64),
                Some((b, e)) => {
                    let e: i64 = e
                        .parse()
                        .map_err(|_| SequenceError::MalformedToken(tok.clone()))?;
                    if e <= 0 {
                        return Err(SequenceError::BadExponent(tok.clone()));
                    }
                    (b, e)
                }
            };
            let d: u32 = base
                .parse()
                .map_err(|_| SequenceError::MalformedToken(tok.clone()))?;
            for _ in 0..count {
                degrees.push(d);
            }
        }
        DegreeSequence::new(degrees)
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the constructor rejects empty sequences
    }

    pub fn sum(&self) -> u64 {
        self.degrees.iter().map(|&d| d as u64).sum()
    }

    pub fn max_degree(&self) -> u32 {
        self.degrees[0]
    }

    pub fn min_degree(&self) -> u32 {
        *self.degrees.last().unwrap()
    }

    /// Largest index i (1-based) with d_i >= i, or 0 when every entry is 0.
    pub fn durfee_index(&self) -> usize {
        let mut f = 0;
        for (i, &d) in self.degrees.iter().enumerate() {
            if d as usize >= i + 1 {
                f = i + 1;
            }
        }
        f
    }

    /// Erdos-Gallai test. Returns false outright when the sum is odd or the
    /// largest entry exceeds n-1.
    pub fn is_graphic(&self) -> bool {
        let n = self.len() as u64;
        if self.sum() % 2 != 0 || self.max_degree() as u64 > n - 1 {
            return false;
        }
        let d = &self.degrees;
        let mut prefix: u64 = 0;
        // suffix[k] = sum_{i>k} min(k, d_i) computed incrementally per k
        for k in 1..=self.durfee_index() {
            prefix += d[k - 1] as u64;
            let mut tail: u64 = 0;
            for &di in &d[k..] {
                tail += (di as u64).min(k as u64);
            }
            if prefix > (k as u64) * (k as u64 - 1) + tail {
                return false;
            }
        }
        true
    }

    /// Removes the minimum degree d_n and decrements the d_n largest
    /// remaining entries (the Hakimi layoff), re-sorted.
    pub fn laying_sequence(&self) -> Result<DegreeSequence, SequenceError> {
        let n = self.len();
        let dn = self.min_degree() as usize;
        if n < 2 {
            return Err(SequenceError::Precondition("laying requires n >= 2"));
        }
        if dn < 1 {
            return Err(SequenceError::Precondition("laying requires d_n >= 1"));
        }
        if dn > n - 1 {
            return Err(SequenceError::Precondition("laying requires d_n <= n-1"));
        }
        let mut out: Vec<u32> = self.degrees[..n - 1].to_vec();
        for x in out.iter_mut().take(dn) {
            *x -= 1;
        }
        DegreeSequence::new(out)
    }

    /// Removes d_n and decrements the d_n - 2 largest remaining entries.
    pub fn lifting_sequence(&self) -> Result<DegreeSequence, SequenceError> {
        let n = self.len();
        let dn = self.min_degree() as usize;
        if n < 2 {
            return Err(SequenceError::Precondition("lifting requires n >= 2"));
        }
        if dn < 2 {
            return Err(SequenceError::Precondition("lifting requires d_n >= 2"));
        }
        if dn - 2 > n - 1 {
            return Err(SequenceError::Precondition("lifting requires d_n - 2 <= n - 1"));
        }
        let mut out: Vec<u32> = self.degrees[..n - 1].to_vec();
        for x in out.iter_mut().take(dn - 2) {
            *x -= 1;
        }
        DegreeSequence::new(out)
    }

    /// Every entry decreased by 2.
    pub fn minus2_sequence(&self) -> Result<DegreeSequence, SequenceError> {
        if self.min_degree() < 2 {
            return Err(SequenceError::Precondition("minus2 requires d_n >= 2"));
        }
        DegreeSequence::new(self.degrees.iter().map(|&d| d - 2).collect())
    }

    /// The sequence (n-1-d_i), re-sorted.
    pub fn complement_sequence(&self) -> Result<DegreeSequence, SequenceError> {
        let n = self.len() as u32;
        if self.max_degree() > n - 1 {
            return Err(SequenceError::Precondition("complement requires d_1 <= n-1"));
        }
        DegreeSequence::new(self.degrees.iter().map(|&d| n - 1 - d).collect())
    }

    /// Small max-min gap sufficiency test: when n*d_n is at least
    /// floor((d_1+d_n+1)^2/4) the sequence is graphic. Returns `None` when
    /// the inequality does not hold (the caller falls back to `is_graphic`);
    /// a too-large d_1 always lands on the `None` side.
    pub fn is_graphic_small_gap(&self) -> Result<Option<bool>, SequenceError> {
        let n = self.len() as u64;
        let (d1, dn) = (self.max_degree() as u64, self.min_degree() as u64);
        if dn == 0 {
            return Err(SequenceError::Precondition("small-gap test requires d_n > 0"));
        }
        if self.sum() % 2 != 0 {
            return Err(SequenceError::Precondition("small-gap test requires even sum"));
        }
        let bound = (d1 + dn + 1) * (d1 + dn + 1) / 4;
        if n * dn >= bound {
            Ok(Some(true))
        } else {
            Ok(None)
        }
    }

    /// Membership in S1(n): ((n-1)^2, 3^{n-k-2}, 2^k) with 0 <= k <= n-4 and
    /// k congruent to n mod 2.
    fn in_s1(&self) -> bool {
        let n = self.len();
        let d = &self.degrees;
        if n < 4 || d[0] as usize != n - 1 || d[1] as usize != n - 1 {
            return false;
        }
        let rest = &d[2..];
        if !rest.iter().all(|&x| x == 2 || x == 3) {
            return false;
        }
        let k = rest.iter().filter(|&&x| x == 2).count();
        k <= n - 4 && k % 2 == n % 2
    }

    /// Membership in S2(n): (d1,d2,d3,d4, 2^{n-4}) with n-1 >= d1 >= d2 >=
    /// d3 >= d4 >= 3 and d1+d2+d3+d4 = 2n+4.
    fn in_s2(&self) -> bool {
        let n = self.len();
        let d = &self.degrees;
        if n < 5 {
            return false;
        }
        let head: u64 = d[..4].iter().map(|&x| x as u64).sum();
        d[0] as usize <= n - 1
            && d[3] >= 3
            && head == 2 * n as u64 + 4
            && d[4..].iter().all(|&x| x == 2)
    }

    /// Realizability by a Z3-connected simple graph: the degree sum is at
    /// least 4n-4 and the sequence avoids the excluded families S1(n),
    /// S2(n), and (for even n) (n-1, 3^{n-1}).
    pub fn is_z3_realizable(&self) -> Result<bool, SequenceError> {
        let n = self.len();
        if !self.is_graphic() {
            return Err(SequenceError::NotGraphic);
        }
        if n < 5 {
            return Err(SequenceError::Precondition("z3 realizability requires n >= 5"));
        }
        if self.min_degree() < 2 {
            return Err(SequenceError::Precondition("z3 realizability requires d_n >= 2"));
        }
        if self.sum() < 4 * n as u64 - 4 {
            return Ok(false);
        }
        if self.in_s1() || self.in_s2() {
            return Ok(false);
        }
        if n % 2 == 0 {
            let d = &self.degrees;
            if d[0] as usize == n - 1 && d[1..].iter().all(|&x| x == 3) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Realizability by an S3-connected simple graph: degree sum at least
    /// 6n-4 and minimum degree at least 4.
    pub fn is_s3_realizable(&self) -> Result<bool, SequenceError> {
        if self.min_degree() == 0 {
            return Err(SequenceError::Precondition("s3 realizability requires d_n > 0"));
        }
        if !self.is_graphic() {
            return Err(SequenceError::NotGraphic);
        }
        Ok(self.sum() >= 6 * self.len() as u64 - 4 && self.min_degree() >= 4)
    }

    /// Removes trailing zero entries (used before graph construction).
    pub fn strip_zeros(&self) -> Option<DegreeSequence> {
        let nz: Vec<u32> = self.degrees.iter().copied().filter(|&d| d > 0).collect();
        if nz.is_empty() {
            None
        } else {
            Some(DegreeSequence { degrees: nz })
        }
    }
}

impl fmt::Display for DegreeSequence {
    /// Exponent notation, e.g. `(6^3,5^4)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        let mut i = 0;
        let mut first = true;
        while i < self.degrees.len() {
            let d = self.degrees[i];
            let mut j = i;
            while j < self.degrees.len() && self.degrees[j] == d {
                j += 1;
            }
            if !first {
                write!(f, ",")?;
            }
            first = false;
            if j - i > 1 {
                write!(f, "{}^{}", d, j - i)?;
            } else {
                write!(f, "{}", d)?;
            }
            i = j;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seq(v: &[u32]) -> DegreeSequence {
        DegreeSequence::new(v.to_vec()).unwrap()
    }

    #[test]
    fn parse_exponent_notation() {
        assert_eq!(
            DegreeSequence::parse("6^3,5^4").unwrap().degrees(),
            &[6, 6, 6, 5, 5, 5, 5]
        );
        assert_eq!(DegreeSequence::parse("4").unwrap().degrees(), &[4]);
        assert_eq!(DegreeSequence::parse("5,6,5").unwrap().degrees(), &[6, 5, 5]);
        assert_eq!(DegreeSequence::parse(" 6 ^ 2 , 5 ").unwrap().degrees(), &[6, 6, 5]);
    }

    #[test]
    fn parse_rejects_bad_tokens() {
        assert!(matches!(
            DegreeSequence::parse("6^0"),
            Err(SequenceError::BadExponent(_))
        ));
        assert!(matches!(
            DegreeSequence::parse("6^-1"),
            Err(SequenceError::BadExponent(_))
        ));
        assert!(DegreeSequence::parse("x").is_err());
        assert!(DegreeSequence::parse("").is_err());
        assert!(DegreeSequence::parse("3,,4").is_err());
    }

    #[test]
    fn graphic_basics() {
        assert!(seq(&[3, 3, 3, 3]).is_graphic());
        assert!(!seq(&[3, 3, 1, 1]).is_graphic());
        assert!(seq(&[6, 6, 6, 5, 5, 5, 5]).is_graphic());
        assert!(!seq(&[3, 3, 3]).is_graphic()); // d_1 > n-1
        assert!(!seq(&[2, 1]).is_graphic()); // odd sum
        assert!(seq(&[0, 0]).is_graphic());
    }

    #[test]
    fn laying_examples() {
        assert_eq!(seq(&[6; 7]).laying_sequence().unwrap().degrees(), &[5; 6]);
        assert_eq!(
            seq(&[6, 6, 6, 6, 5, 5, 4]).laying_sequence().unwrap().degrees(),
            &[5, 5, 5, 5, 5, 5]
        );
        assert_eq!(seq(&[4, 3, 2, 1]).laying_sequence().unwrap().degrees(), &[3, 3, 2]);
        assert!(seq(&[1, 0]).laying_sequence().is_err());
        assert!(seq(&[4]).laying_sequence().is_err());
    }

    #[test]
    fn lifting_examples() {
        assert_eq!(seq(&[6; 7]).lifting_sequence().unwrap().degrees(), &[6, 6, 5, 5, 5, 5]);
        assert_eq!(
            seq(&[6; 8]).lifting_sequence().unwrap().degrees(),
            &[6, 6, 6, 5, 5, 5, 5]
        );
        assert_eq!(seq(&[4; 5]).lifting_sequence().unwrap().degrees(), &[4, 4, 3, 3]);
        assert!(seq(&[2, 1]).lifting_sequence().is_err());
    }

    #[test]
    fn minus2_examples() {
        assert_eq!(
            seq(&[7, 6, 6, 5, 5, 5, 5, 5]).minus2_sequence().unwrap().degrees(),
            &[5, 4, 4, 3, 3, 3, 3, 3]
        );
        let s = seq(&[6, 6, 6, 6, 6, 6, 5, 5, 5, 5]); // (6^{n-4},5^4), n=10
        assert_eq!(
            s.minus2_sequence().unwrap().degrees(),
            &[4, 4, 4, 4, 4, 4, 3, 3, 3, 3]
        );
        assert_eq!(seq(&[2, 2, 2]).minus2_sequence().unwrap().degrees(), &[0, 0, 0]);
        assert!(seq(&[2, 1]).minus2_sequence().is_err());
    }

    #[test]
    fn complement_examples() {
        assert_eq!(seq(&[3, 3, 3, 3]).complement_sequence().unwrap().degrees(), &[0, 0, 0, 0]);
        assert_eq!(seq(&[0]).complement_sequence().unwrap().degrees(), &[0]);
        // (d1-2, d2-2, 3^{n-2}) complements to ((n-4)^{n-2} with heads replaced)
        let n = 10u32;
        let s = seq(&[7, 5, 3, 3, 3, 3, 3, 3, 3, 3]);
        let c = s.complement_sequence().unwrap();
        assert_eq!(c.degrees(), &[6, 6, 6, 6, 6, 6, 6, 6, 4, 2]);
        assert_eq!(c.degrees()[0], n - 4);
        assert!(seq(&[4, 1, 1]).complement_sequence().is_err());
    }

    #[test]
    fn small_gap_examples() {
        // n*d_n = 30 >= floor(8^2/4) = 16
        let s = seq(&[4, 4, 4, 4, 4, 4, 3, 3, 3, 3]);
        assert_eq!(s.is_graphic_small_gap().unwrap(), Some(true));
        // n=12, d_1=7, d_n=3: 36 >= floor(121/4) = 30
        let s = seq(&[7, 5, 5, 3, 3, 3, 3, 3, 3, 3, 3, 3]);
        assert_eq!(s.is_graphic_small_gap().unwrap(), Some(true));
        // gap too large: 4*5=20 < floor(15^2/4) = 56
        let s = seq(&[9, 5, 5, 5]);
        assert_eq!(s.is_graphic_small_gap().unwrap(), None);
        let s = seq(&[3, 3, 1, 1, 1, 1, 1, 1, 1, 1]).is_graphic_small_gap().unwrap();
        assert_eq!(s, None);
        assert!(seq(&[2, 1, 1]).is_graphic_small_gap().is_err()); // odd sum
    }

    #[test]
    fn small_gap_never_contradicts_erdos_gallai() {
        // exhaustive over short sequences
        for n in 2..=7usize {
            let mut stack = vec![Vec::<u32>::new()];
            while let Some(cur) = stack.pop() {
                if cur.len() == n {
                    let s = DegreeSequence::new(cur.clone()).unwrap();
                    if s.min_degree() > 0 && (s.max_degree() as usize) <= n - 1 && s.sum() % 2 == 0 {
                        if s.is_graphic_small_gap().unwrap() == Some(true) {
                            assert!(s.is_graphic(), "small-gap true but not graphic: {s}");
                        }
                    }
                    continue;
                }
                let hi = cur.last().copied().unwrap_or((n - 1) as u32);
                for d in 1..=hi {
                    let mut next = cur.clone();
                    next.push(d);
                    stack.push(next);
                }
            }
        }
    }

    #[test]
    fn z3_realizability_examples() {
        // (n-1, 3^{n-1}) with n even is excluded
        assert!(!seq(&[5, 3, 3, 3, 3, 3]).is_z3_realizable().unwrap());
        assert!(seq(&[4, 4, 4, 4, 4, 3, 3, 3, 3]).is_z3_realizable().unwrap());
        assert!(!seq(&[3, 3, 3, 3, 3, 3]).is_z3_realizable().unwrap()); // sum 18 < 20
        // S1(7): (6,6,3,3,2,2,2) has k=3, n=7, k odd matches n odd
        assert!(!seq(&[6, 6, 3, 3, 2, 2, 2]).is_z3_realizable().unwrap());
        // S2(8): (5,5,5,5,2,2,2,2): head sum 20 = 2*8+4
        assert!(!seq(&[5, 5, 5, 5, 2, 2, 2, 2]).is_z3_realizable().unwrap());
        // same head sum but a 3 in the tail escapes S2
        assert!(seq(&[5, 5, 5, 5, 3, 3, 2, 2]).is_graphic());
        assert!(seq(&[5, 5, 5, 5, 3, 3, 2, 2]).is_z3_realizable().unwrap());
    }

    #[test]
    fn s3_realizability_examples() {
        assert!(seq(&[6; 7]).is_s3_realizable().unwrap());
        assert!(!seq(&[5; 8]).is_s3_realizable().unwrap()); // 40 < 44
        assert!(!seq(&[4, 4, 4, 3, 3]).is_s3_realizable().unwrap()); // d_n = 3
        // (6^5, 3^2) forces both low-degree vertices adjacent to every
        // high one, so it is not graphic at all
        assert_eq!(seq(&[6, 6, 6, 6, 6, 3, 3]).is_s3_realizable(), Err(SequenceError::NotGraphic));
        assert!(seq(&[1, 1, 1]).is_s3_realizable().is_err()); // not graphic
    }

    #[test]
    fn s3_realizable_implies_graphic_and_n7() {
        for n in 1..=10usize {
            let mut stack = vec![Vec::<u32>::new()];
            while let Some(cur) = stack.pop() {
                if cur.len() == n {
                    let s = DegreeSequence::new(cur.clone()).unwrap();
                    if s.min_degree() > 0 {
                        if let Ok(true) = s.is_s3_realizable() {
                            assert!(s.is_graphic());
                            assert!(n >= 7, "s3-realizable at n={n}: {s}");
                        }
                    }
                    continue;
                }
                let hi = cur.last().copied().unwrap_or(n.saturating_sub(1) as u32);
                for d in (1..=hi).rev() {
                    let mut next = cur.clone();
                    next.push(d);
                    stack.push(next);
                }
            }
        }
    }

    #[test]
    fn display_roundtrip() {
        for text in ["(6^3,5^4)", "(4)", "(10^3,4^8)", "(7,6^2,5^5)"] {
            let s = DegreeSequence::parse(&text[1..text.len() - 1]).unwrap();
            assert_eq!(s.to_string(), text);
        }
    }

    proptest! {
        #[test]
        fn hakimi_equivalence(v in proptest::collection::vec(1u32..8, 2..12)) {
            let s = DegreeSequence::new(v).unwrap();
            if s.min_degree() >= 1 && (s.max_degree() as usize) <= s.len() - 1 {
                let laid = s.laying_sequence().unwrap();
                prop_assert_eq!(s.is_graphic(), laid.is_graphic());
            }
        }

        #[test]
        fn complement_is_involution(v in proptest::collection::vec(0u32..9, 1..12)) {
            let s = DegreeSequence::new(v).unwrap();
            if (s.max_degree() as usize) <= s.len() - 1 {
                let c = s.complement_sequence().unwrap();
                prop_assert_eq!(c.complement_sequence().unwrap(), s);
            }
        }

        #[test]
        fn transforms_shrink_by_one(v in proptest::collection::vec(2u32..9, 3..12)) {
            let s = DegreeSequence::new(v).unwrap();
            let dn = s.min_degree() as u64;
            if (s.max_degree() as usize) <= s.len() - 1 {
                let laid = s.laying_sequence().unwrap();
                prop_assert_eq!(laid.len(), s.len() - 1);
                prop_assert_eq!(laid.sum(), s.sum() - 2 * dn);
            }
            if (dn as usize) <= s.len() + 1 {
                let lifted = s.lifting_sequence().unwrap();
                prop_assert_eq!(lifted.len(), s.len() - 1);
                prop_assert_eq!(lifted.sum(), s.sum() - 2 * (dn - 1));
            }
        }
    }
}
