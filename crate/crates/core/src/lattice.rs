//! Weight lattices and root data.
//!
//! Weights are stored in the fundamental-weight basis of the semisimple
//! part, prefixed by `central_rank` free central coordinates that every
//! Weyl element fixes.  The cocharacter lattice `N` carries the dual basis
//! (simple coroots), so pairing a weight against a cocharacter is a plain
//! dot product of the semisimple coordinates.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

/// Element of the weight lattice Λ (or of a cocharacter / exponent lattice
/// of the stated rank — the coordinates carry the meaning).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(pub Vec<i64>);

impl LatticeVector {
    pub fn zero(rank: usize) -> Self {
        LatticeVector(vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn dot(&self, other: &LatticeVector) -> i64 {
        assert_eq!(self.rank(), other.rank(), "rank mismatch in dot product");
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn scaled(&self, k: i64) -> Self {
        LatticeVector(self.0.iter().map(|c| c * k).collect())
    }

    /// Concatenate two vectors; used to form exponents of the doubled
    /// lattice Λ⊕Λ.
    pub fn pair(first: &LatticeVector, second: &LatticeVector) -> Self {
        let mut v = first.0.clone();
        v.extend_from_slice(&second.0);
        LatticeVector(v)
    }

    /// gcd of the coordinates (0 for the zero vector).
    pub fn content(&self) -> i64 {
        self.0.iter().fold(0i64, |g, &c| num_integer::gcd(g, c.abs()))
    }

    /// Divide out the content, making the vector primitive.
    pub fn primitive_part(&self) -> Result<LatticeVector> {
        let g = self.content();
        if g == 0 {
            return Err(Error::input("zero vector has no primitive part"));
        }
        Ok(LatticeVector(self.0.iter().map(|c| c / g).collect()))
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: &LatticeVector) -> LatticeVector {
        assert_eq!(self.rank(), rhs.rank(), "rank mismatch in addition");
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: &LatticeVector) -> LatticeVector {
        assert_eq!(self.rank(), rhs.rank(), "rank mismatch in subtraction");
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Subset of the simple roots, as a bitmask over `0..r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Subset(pub u32);

impl Subset {
    pub fn empty() -> Self {
        Subset(0)
    }

    pub fn full(r: usize) -> Self {
        Subset(((1u64 << r) - 1) as u32)
    }

    pub fn from_indices(indices: &[usize]) -> Self {
        let mut m = 0u32;
        for &i in indices {
            m |= 1 << i;
        }
        Subset(m)
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn union(&self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(&self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn difference(&self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn is_subset_of(&self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn complement(&self, r: usize) -> Subset {
        Subset::full(r).difference(*self)
    }

    pub fn indices(&self) -> Vec<usize> {
        (0..32).filter(|&i| self.contains(i)).collect()
    }

    /// All subsets of `self`, in increasing mask order (deterministic).
    pub fn subsets(&self) -> Vec<Subset> {
        let mask = self.0;
        let mut out = Vec::new();
        // Enumerate submasks of `mask` in increasing numeric order.
        let mut s = 0u32;
        loop {
            out.push(Subset(s));
            if s == mask {
                break;
            }
            s = (s.wrapping_sub(mask)) & mask;
        }
        out.sort_by_key(|x| x.0);
        out
    }

    /// Parse a comma-separated list of 1-based simple-root indices; the empty
    /// string is the empty set.
    pub fn parse(text: &str, r: usize) -> Result<Subset> {
        let mut out = Subset::empty();
        for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let i: usize = tok
                .parse()
                .map_err(|_| Error::input(format!("bad simple-root index `{tok}`")))?;
            if i == 0 || i > r {
                return Err(Error::input(format!(
                    "simple-root index {i} out of range 1..={r}"
                )));
            }
            out.insert(i - 1);
        }
        Ok(out)
    }

    /// 1-based indices, for serialization.
    pub fn external_indices(&self) -> Vec<usize> {
        self.indices().iter().map(|i| i + 1).collect()
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.indices().iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}

/// The built-in table of supported root-system types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RootSystemType {
    A1,
    A1xA1,
    A2,
    B2,
    A3,
}

impl RootSystemType {
    pub fn semisimple_rank(&self) -> usize {
        match self {
            RootSystemType::A1 => 1,
            RootSystemType::A1xA1 | RootSystemType::A2 | RootSystemType::B2 => 2,
            RootSystemType::A3 => 3,
        }
    }

    /// Cartan matrix; column `j` holds the coordinates of the simple root
    /// `α_j` in the fundamental-weight basis.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        match self {
            RootSystemType::A1 => vec![vec![2]],
            RootSystemType::A1xA1 => vec![vec![2, 0], vec![0, 2]],
            RootSystemType::A2 => vec![vec![2, -1], vec![-1, 2]],
            // α1 long, α2 short: ⟨α2, α1^∨⟩ = -1, ⟨α1, α2^∨⟩ = -2.
            RootSystemType::B2 => vec![vec![2, -1], vec![-2, 2]],
            RootSystemType::A3 => vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]],
        }
    }

    /// Known Weyl group order, used as an acceptance cross-check.
    pub fn weyl_order(&self) -> usize {
        match self {
            RootSystemType::A1 => 2,
            RootSystemType::A1xA1 => 4,
            RootSystemType::A2 => 6,
            RootSystemType::B2 => 8,
            RootSystemType::A3 => 24,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            RootSystemType::A1 => "A1",
            RootSystemType::A1xA1 => "A1xA1",
            RootSystemType::A2 => "A2",
            RootSystemType::B2 => "B2",
            RootSystemType::A3 => "A3",
        }
    }
}

impl FromStr for RootSystemType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A1" => Ok(RootSystemType::A1),
            "A1xA1" | "A1A1" | "A1×A1" => Ok(RootSystemType::A1xA1),
            "A2" => Ok(RootSystemType::A2),
            "B2" => Ok(RootSystemType::B2),
            "A3" => Ok(RootSystemType::A3),
            other => Err(Error::input(format!(
                "unsupported root-system type `{other}` (expected A1, A1xA1, A2, B2 or A3)"
            ))),
        }
    }
}

impl fmt::Display for RootSystemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Root datum: a built-in semisimple type plus a free central torus of the
/// given rank.  The Weyl action fixes the first `central_rank` coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootDatum {
    pub label: RootSystemType,
    pub central_rank: usize,
    pub semisimple_rank: usize,
    pub cartan: Vec<Vec<i64>>,
}

impl RootDatum {
    pub fn new(label: RootSystemType, central_rank: usize) -> Self {
        let cartan = label.cartan_matrix();
        let r = label.semisimple_rank();
        debug_assert!(cartan.iter().enumerate().all(|(i, row)| row[i] == 2));
        debug_assert!(cartan
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, &c)| i == j || c <= 0)));
        RootDatum {
            label,
            central_rank,
            semisimple_rank: r,
            cartan,
        }
    }

    /// Total lattice rank `c + r`.
    pub fn rank(&self) -> usize {
        self.central_rank + self.semisimple_rank
    }

    /// Simple root `α_i` as a full lattice vector (central coordinates 0,
    /// semisimple coordinates the `i`-th Cartan column).
    pub fn simple_root(&self, i: usize) -> LatticeVector {
        assert!(i < self.semisimple_rank);
        let mut v = vec![0; self.rank()];
        for k in 0..self.semisimple_rank {
            v[self.central_rank + k] = self.cartan[k][i];
        }
        LatticeVector(v)
    }

    pub fn simple_roots(&self) -> Vec<LatticeVector> {
        (0..self.semisimple_rank).map(|i| self.simple_root(i)).collect()
    }

    /// Fundamental weight `ω_i` as a full lattice vector.
    pub fn fundamental_weight(&self, i: usize) -> LatticeVector {
        assert!(i < self.semisimple_rank);
        let mut v = vec![0; self.rank()];
        v[self.central_rank + i] = 1;
        LatticeVector(v)
    }

    /// Central basis character `z_i` (fixed by every Weyl element).
    pub fn central_character(&self, i: usize) -> LatticeVector {
        assert!(i < self.central_rank);
        let mut v = vec![0; self.rank()];
        v[i] = 1;
        LatticeVector(v)
    }

    pub fn delta(&self) -> Subset {
        Subset::full(self.semisimple_rank)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_enumeration_is_sorted_and_complete() {
        let s = Subset::from_indices(&[0, 2]);
        let subs = s.subsets();
        assert_eq!(subs.len(), 4);
        assert_eq!(subs, vec![Subset(0), Subset(1), Subset(4), Subset(5)]);
    }

    #[test]
    fn subset_parse_roundtrip() {
        let s = Subset::parse("1,3", 3).unwrap();
        assert_eq!(s.external_indices(), vec![1, 3]);
        assert!(Subset::parse("", 3).unwrap().is_empty());
        assert!(Subset::parse("4", 3).is_err());
        assert!(Subset::parse("x", 3).is_err());
    }

    #[test]
    fn b2_simple_roots_in_weight_coordinates() {
        let d = RootDatum::new(RootSystemType::B2, 0);
        assert_eq!(d.simple_root(0).0, vec![2, -2]);
        assert_eq!(d.simple_root(1).0, vec![-1, 2]);
    }

    #[test]
    fn central_coordinates_prefix_the_semisimple_block() {
        let d = RootDatum::new(RootSystemType::A1, 2);
        assert_eq!(d.rank(), 3);
        assert_eq!(d.simple_root(0).0, vec![0, 0, 2]);
        assert_eq!(d.fundamental_weight(0).0, vec![0, 0, 1]);
        assert_eq!(d.central_character(1).0, vec![0, 1, 0]);
    }

    #[test]
    fn primitive_part_divides_content() {
        let v = LatticeVector(vec![4, -6, 2]);
        assert_eq!(v.content(), 2);
        assert_eq!(v.primitive_part().unwrap().0, vec![2, -3, 1]);
        assert!(LatticeVector::zero(3).primitive_part().is_err());
    }
}
