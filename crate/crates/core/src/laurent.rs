//! The group algebra `Z[Λ]`: exact Laurent polynomials with big-integer
//! coefficients, the Weyl action, orbit sums, the augmentation, and exact
//! divisibility by elements `1 - e^{-χ}`.

use crate::error::{Error, Result};
use crate::lattice::LatticeVector;
use crate::linalg;
use crate::weyl::{WeylElement, WeylGroup};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Exact element of `Z[Λ]`: a map from exponent vectors to nonzero
/// big-integer coefficients.  The map never stores zeros, so equal ring
/// elements have identical term maps.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<LatticeVector, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        Self::monomial(LatticeVector::zero(rank))
    }

    pub fn constant(rank: usize, c: i64) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(LatticeVector::zero(rank), BigInt::from(c));
        p
    }

    /// The monomial `e^λ`.
    pub fn monomial(lambda: LatticeVector) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(lambda, BigInt::one());
        p
    }

    pub fn monomial_scaled(lambda: LatticeVector, c: BigInt) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(lambda, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LatticeVector, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, lambda: &LatticeVector) -> BigInt {
        self.terms.get(lambda).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = &LatticeVector> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, lambda: LatticeVector, c: BigInt) {
        if c.is_zero() {
            return;
        }
        debug_assert!(
            self.terms.keys().next().is_none_or(|k| k.rank() == lambda.rank()),
            "rank mismatch between terms"
        );
        match self.terms.entry(lambda) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (l, c) in &other.terms {
            out.add_term(l.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(l, c)| (l.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (l, c) in &other.terms {
            out.add_term(l.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (l1, c1) in &self.terms {
            for (l2, c2) in &other.terms {
                out.add_term(l1 + l2, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(l, k)| (l.clone(), k * c)).collect(),
        }
    }

    /// Shift every exponent by `λ` (multiplication by `e^λ`).
    pub fn shift(&self, lambda: &LatticeVector) -> LaurentPoly {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(l, c)| (l + lambda, c.clone()))
                .collect(),
        }
    }

    /// Apply an exponent-lattice map to every term.
    pub fn map_exponents(&self, f: impl Fn(&LatticeVector) -> LatticeVector) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (l, c) in &self.terms {
            out.add_term(f(l), c.clone());
        }
        out
    }

    /// The Weyl action `w(e^λ) = e^{w λ}`, a ring automorphism.
    pub fn weyl_act(&self, w: &WeylElement) -> LaurentPoly {
        self.map_exponents(|l| w.act(l))
    }

    /// True iff `g(f) = f` for every listed group element.
    pub fn is_invariant<'a>(&self, gens: impl IntoIterator<Item = &'a WeylElement>) -> bool {
        gens.into_iter().all(|g| self.weyl_act(g) == *self)
    }

    /// Sum of coefficients; the ring map `Z[Λ] → Z` sending every `e^λ` to 1.
    pub fn augmentation(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Exact division by `1 - e^{-χ}` (χ ≠ 0): returns `q` with
    /// `q · (1 - e^{-χ}) = self`, or `None` when no such `q` exists.
    ///
    /// Write `χ = d·χ'` with `χ'` primitive.  Multiplication by `e^{-χ}`
    /// translates exponents by `-d·χ'`, so the equation decouples over the
    /// cosets of `Z·χ'`: along each line `x₀ + k·χ'` it reads
    /// `q(k) - q(k+d) = f(k)`, whose unique finitely supported solution is
    /// the upper partial sum `q(k) = Σ_{j ≥ k, j ≡ k (d)} f(j)` — provided
    /// each residue class sums to zero, which is exactly divisibility.
    pub fn divide_exact(&self, chi: &LatticeVector) -> Result<Option<LaurentPoly>> {
        if chi.is_zero() {
            return Err(Error::input("divisor character χ must be nonzero"));
        }
        if self.is_zero() {
            return Ok(Some(LaurentPoly::zero()));
        }
        let d = chi.content();
        let chi_prim = chi.primitive_part().expect("nonzero vector");
        let phi = linalg::dual_functional(&chi_prim.0);

        // Group terms by coset of Z·χ' and residue class mod d of the
        // position along χ'.
        type Key = (LatticeVector, i64);
        let mut classes: BTreeMap<Key, Vec<(i64, BigInt)>> = BTreeMap::new();
        for (x, c) in &self.terms {
            let k: i64 = phi.iter().zip(&x.0).map(|(a, b)| a * b).sum();
            let base = x - &chi_prim.scaled(k);
            classes
                .entry((base, k.rem_euclid(d)))
                .or_default()
                .push((k, c.clone()));
        }

        let mut quotient = LaurentPoly::zero();
        for ((base, _), mut entries) in classes {
            entries.sort_by_key(|(k, _)| std::cmp::Reverse(*k));
            // Partial sums from the top; q(k) collects f(j) for j ≥ k in the
            // class, stepping down by d.
            let mut acc = BigInt::zero();
            let mut prev_k: Option<i64> = None;
            for (k, c) in entries {
                if let Some(pk) = prev_k {
                    // Positions strictly between k and pk in steps of d all
                    // carry the running sum.
                    let mut j = pk - d;
                    while j > k {
                        quotient.add_term(&base + &chi_prim.scaled(j), acc.clone());
                        j -= d;
                    }
                }
                acc += c;
                if !acc.is_zero() {
                    quotient.add_term(&base + &chi_prim.scaled(k), acc.clone());
                }
                prev_k = Some(k);
            }
            if !acc.is_zero() {
                // Class sum nonzero: telescoping leaves a remainder, so the
                // division is not exact.
                return Ok(None);
            }
        }
        debug_assert_eq!(
            quotient.mul(&one_minus_exp_neg(chi)),
            *self,
            "divide_exact round-trip"
        );
        Ok(Some(quotient))
    }
}

/// The element `1 - e^{-χ}`.
pub fn one_minus_exp_neg(chi: &LatticeVector) -> LaurentPoly {
    let rank = chi.rank();
    LaurentPoly::one(rank).sub(&LaurentPoly::monomial(-chi))
}

/// Sum of `e^{wλ}` over the orbit of `λ` under the listed subgroup elements
/// (each orbit point once).
pub fn orbit_sum(group: &WeylGroup, subgroup: &[usize], lambda: &LatticeVector) -> LaurentPoly {
    let orbit: std::collections::BTreeSet<LatticeVector> = subgroup
        .iter()
        .map(|&w| group.element(w).act(lambda))
        .collect();
    let mut out = LaurentPoly::zero();
    for l in orbit {
        out.add_term(l, BigInt::one());
    }
    out
}

/// Sum of `e^{wλ}` over the full Weyl orbit.
pub fn full_orbit_sum(group: &WeylGroup, lambda: &LatticeVector) -> LaurentPoly {
    let all: Vec<usize> = (0..group.order()).collect();
    orbit_sum(group, &all, lambda)
}

/// Dominant representative of the Weyl orbit of `λ` (the maximum in the
/// term order, which is enough for canonical bookkeeping).
pub fn orbit_representative(group: &WeylGroup, lambda: &LatticeVector) -> LatticeVector {
    (0..group.order())
        .map(|w| group.element(w).act(lambda))
        .max()
        .expect("nonempty group")
}

// ---------------------------------------------------------------------------
// Serialization: a sorted list of {exponent, coeff} records, coefficients as
// decimal strings so arbitrarily large values survive JSON round-trips.

#[derive(Serialize, Deserialize)]
struct TermRecord {
    exponent: Vec<i64>,
    coeff: String,
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let records: Vec<TermRecord> = self
            .terms
            .iter()
            .map(|(l, c)| TermRecord {
                exponent: l.0.clone(),
                coeff: c.to_string(),
            })
            .collect();
        records.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let records = Vec::<TermRecord>::deserialize(d)?;
        let mut p = LaurentPoly::zero();
        for r in records {
            let c: BigInt = r
                .coeff
                .parse()
                .map_err(|_| serde::de::Error::custom("bad big-integer coefficient"))?;
            if let Some(first) = p.terms.keys().next() {
                if first.rank() != r.exponent.len() {
                    return Err(serde::de::Error::custom("mixed exponent ranks"));
                }
            }
            p.add_term(LatticeVector(r.exponent), c);
        }
        Ok(p)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (l, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if l.is_zero() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "e{l}")?;
            } else {
                write!(f, "{c}*e{l}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{RootDatum, RootSystemType};

    fn a1() -> WeylGroup {
        WeylGroup::new(RootDatum::new(RootSystemType::A1, 0))
    }

    fn a2() -> WeylGroup {
        WeylGroup::new(RootDatum::new(RootSystemType::A2, 0))
    }

    fn e(coords: &[i64]) -> LaurentPoly {
        LaurentPoly::monomial(LatticeVector(coords.to_vec()))
    }

    #[test]
    fn monomial_of_zero_is_one() {
        assert_eq!(e(&[0, 0]), LaurentPoly::one(2));
    }

    #[test]
    fn group_algebra_law() {
        let p = e(&[1, -2]).mul(&e(&[3, 5]));
        assert_eq!(p, e(&[4, 3]));
    }

    #[test]
    fn difference_of_squares() {
        // (1 - e^{-α})(1 + e^{-α}) = 1 - e^{-2α}.
        let alpha = LatticeVector(vec![2]);
        let lhs = one_minus_exp_neg(&alpha)
            .mul(&LaurentPoly::one(1).add(&LaurentPoly::monomial(-&alpha)));
        let rhs = LaurentPoly::one(1).sub(&e(&[-4]));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn a1_weyl_action_on_monomials() {
        let w = a1();
        let s = w.element(w.simple_reflection(0)).clone();
        assert_eq!(e(&[1]).weyl_act(&s), e(&[-1]));
        let sym = e(&[1]).add(&e(&[-1]));
        assert_eq!(sym.weyl_act(&s), sym);
        assert!(sym.is_invariant([&s]));
        assert!(!e(&[1]).is_invariant([&s]));
    }

    #[test]
    fn orbit_sums() {
        let w = a1();
        let all: Vec<usize> = (0..w.order()).collect();
        assert_eq!(
            orbit_sum(&w, &all, &LatticeVector(vec![0])),
            LaurentPoly::one(1)
        );
        assert_eq!(
            orbit_sum(&w, &all, &LatticeVector(vec![1])),
            e(&[1]).add(&e(&[-1]))
        );
        let w2 = a2();
        let all2: Vec<usize> = (0..w2.order()).collect();
        let o = full_orbit_sum(&w2, &LatticeVector(vec![1, 0]));
        assert_eq!(o.num_terms(), 3);
        assert!(o.is_invariant(w2.elements.iter()));
        let _ = all2;
    }

    #[test]
    fn augmentation_examples() {
        assert_eq!(LaurentPoly::one(1).augmentation(), BigInt::from(1));
        assert_eq!(e(&[1]).add(&e(&[-1])).augmentation(), BigInt::from(2));
        let alpha = LatticeVector(vec![2]);
        assert_eq!(one_minus_exp_neg(&alpha).augmentation(), BigInt::from(0));
    }

    #[test]
    fn divide_exact_trivial_and_factored() {
        let chi = LatticeVector(vec![1, 1]);
        let f = one_minus_exp_neg(&chi);
        let q = f.divide_exact(&chi).unwrap().unwrap();
        assert_eq!(q, LaurentPoly::one(2));

        // 1 - e^{-2χ} = (1 + e^{-χ})(1 - e^{-χ}).
        let f2 = LaurentPoly::one(2).sub(&LaurentPoly::monomial(chi.scaled(-2)));
        let q2 = f2.divide_exact(&chi).unwrap().unwrap();
        assert_eq!(q2, LaurentPoly::one(2).add(&LaurentPoly::monomial(-&chi)));
    }

    #[test]
    fn divide_exact_non_primitive_divisor() {
        // α = 2ω in A1: 1 - e^{-α} is divisible by 1 - e^{-α} but 1 - e^{-ω}
        // is not divisible by 1 - e^{-α}.
        let alpha = LatticeVector(vec![2]);
        let omega = LatticeVector(vec![1]);
        assert!(one_minus_exp_neg(&alpha)
            .divide_exact(&alpha)
            .unwrap()
            .is_some());
        assert!(one_minus_exp_neg(&omega)
            .divide_exact(&alpha)
            .unwrap()
            .is_none());
    }

    #[test]
    fn divide_exact_independent_direction_fails() {
        let chi = LatticeVector(vec![1, 0]);
        let f = LaurentPoly::one(2).sub(&e(&[0, 1]));
        assert!(f.divide_exact(&chi).unwrap().is_none());
    }

    #[test]
    fn divide_exact_rejects_zero_divisor() {
        let f = LaurentPoly::one(2);
        assert!(f.divide_exact(&LatticeVector::zero(2)).is_err());
    }

    #[test]
    fn json_roundtrip_with_big_coefficients() {
        let mut p = LaurentPoly::zero();
        let huge: BigInt = "123456789012345678901234567890".parse().unwrap();
        p.add_term(LatticeVector(vec![1, -2]), huge.clone());
        p.add_term(LatticeVector(vec![0, 0]), BigInt::from(-7));
        let text = serde_json::to_string(&p).unwrap();
        let back: LaurentPoly = serde_json::from_str(&text).unwrap();
        assert_eq!(p, back);
        assert!(text.contains("123456789012345678901234567890"));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_poly(rank: usize) -> impl Strategy<Value = LaurentPoly> {
            proptest::collection::vec(
                (
                    proptest::collection::vec(-3i64..=3, rank),
                    -9i64..=9,
                ),
                0..6,
            )
            .prop_map(move |terms| {
                let mut p = LaurentPoly::zero();
                for (exp, c) in terms {
                    p.add_term(LatticeVector(exp), BigInt::from(c));
                }
                p
            })
        }

        proptest! {
            #[test]
            fn add_commutes(a in arb_poly(2), b in arb_poly(2)) {
                prop_assert_eq!(a.add(&b), b.add(&a));
            }

            #[test]
            fn mul_commutes(a in arb_poly(2), b in arb_poly(2)) {
                prop_assert_eq!(a.mul(&b), b.mul(&a));
            }

            #[test]
            fn mul_associates(a in arb_poly(2), b in arb_poly(2), c in arb_poly(2)) {
                prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            }

            #[test]
            fn mul_distributes(a in arb_poly(2), b in arb_poly(2), c in arb_poly(2)) {
                prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            }

            #[test]
            fn augmentation_is_multiplicative(a in arb_poly(2), b in arb_poly(2)) {
                prop_assert_eq!(a.mul(&b).augmentation(), a.augmentation() * b.augmentation());
            }

            #[test]
            fn divide_exact_roundtrip(a in arb_poly(2), cx in -2i64..=2, cy in -2i64..=2) {
                prop_assume!(cx != 0 || cy != 0);
                let chi = LatticeVector(vec![cx, cy]);
                let f = a.mul(&one_minus_exp_neg(&chi));
                let q = f.divide_exact(&chi).unwrap().expect("constructed divisible");
                prop_assert_eq!(q.mul(&one_minus_exp_neg(&chi)), f);
            }

            #[test]
            fn weyl_action_respects_composition(a in arb_poly(2), i in 0usize..6, j in 0usize..6) {
                let w = WeylGroup::new(RootDatum::new(RootSystemType::A2, 0));
                let x = i % w.order();
                let y = j % w.order();
                let xy = w.compose(x, y);
                let lhs = a.weyl_act(w.element(xy));
                let rhs = a.weyl_act(w.element(y)).weyl_act(w.element(x));
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn weyl_action_is_ring_automorphism(a in arb_poly(2), b in arb_poly(2)) {
                let w = WeylGroup::new(RootDatum::new(RootSystemType::A2, 0));
                let s = w.element(w.simple_reflection(0));
                prop_assert_eq!(a.mul(&b).weyl_act(s), a.weyl_act(s).mul(&b.weyl_act(s)));
            }
        }
    }
}
