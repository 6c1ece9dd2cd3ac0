//! Steinberg bases of invariant subrings and their structure constants.
//!
//! For `v ∈ W^I` the basis element is built from the monomial
//! `p_v = ∏_{v⁻¹α_i < 0} e^{ω_i}` as the `W_I`-orbit sum of `v⁻¹(p_v)`;
//! summing over the orbit set visits each stabilizer coset exactly once.
//! In the modified indexing, `v ∈ C^J` contributes `f_v := f_v^{Δ∖J}`, and
//! `{f_v : v ∈ ⊔_{J⊆I} C^J}` is a basis of `R(T)^{W_{Δ∖I}}` over `R(T)^W`.

use crate::error::{Error, Result};
use crate::lattice::{LatticeVector, Subset};
use crate::laurent::{full_orbit_sum, orbit_representative, orbit_sum, LaurentPoly};
use crate::linalg;
use crate::weyl::WeylGroup;
use num_bigint::BigInt;
use num_rational::BigRational;
use std::collections::{BTreeMap, BTreeSet};

/// Highest window-growth step tried by the basis expansion before giving up.
/// Desk-scale inputs solve at step 0 or 1.
const MAX_WINDOW_GROWTH: i64 = 3;

/// The weight of the monomial `p_v = ∏_{v⁻¹α_i < 0} e^{ω_i}`.
pub fn p_v_weight(group: &WeylGroup, v: usize) -> LatticeVector {
    let datum = &group.datum;
    let v_inv = group.inverse(v);
    let mut sum = LatticeVector::zero(datum.rank());
    for i in 0..datum.semisimple_rank {
        let image = group.element(v_inv).act(&datum.simple_root(i));
        if group.is_negative_root(&image) {
            sum = &sum + &datum.fundamental_weight(i);
        }
    }
    sum
}

/// The monomial `p_v`.
pub fn p_v(group: &WeylGroup, v: usize) -> LaurentPoly {
    LaurentPoly::monomial(p_v_weight(group, v))
}

/// The raw Steinberg element `f_v^I` for `v ∈ W^I`: the `W_I`-orbit sum of
/// `v⁻¹(p_v)`.  Errors when `v ∉ W^I`.
pub fn f_v(group: &WeylGroup, i_set: Subset, v: usize) -> Result<LaurentPoly> {
    if !group.minimal_coset_reps(i_set).contains(&v) {
        return Err(Error::input(format!(
            "element with word {:?} is not a minimal coset representative for I={}",
            group.element(v).word,
            i_set
        )));
    }
    let base = group.element(group.inverse(v)).act(&p_v_weight(group, v));
    let subgroup = group.parabolic_subgroup(i_set);
    Ok(orbit_sum(group, &subgroup, &base))
}

/// One basis entry of a modified Steinberg basis.
#[derive(Debug, Clone)]
pub struct BasisEntry {
    /// The cell `C^J` containing `v`.
    pub cell: Subset,
    /// Element index of `v` in its group.
    pub v: usize,
    /// The basis element `f_v = f_v^{Δ∖J}`.
    pub poly: LaurentPoly,
}

/// Modified Steinberg basis of `R(T)^{W_{Δ∖I}}` over `R(T)^W`, indexed by
/// `⊔_{J⊆I} C^J` with `f_v := f_v^{Δ∖J}` for `v ∈ C^J`.
#[derive(Debug, Clone)]
pub struct SteinbergBasis {
    pub i_set: Subset,
    pub entries: Vec<BasisEntry>,
}

impl SteinbergBasis {
    pub fn modified(group: &WeylGroup, i_set: Subset) -> Self {
        let r = group.datum.semisimple_rank;
        let mut entries = Vec::new();
        for j in i_set.subsets() {
            for v in group.c_cell(j) {
                let poly = f_v(group, j.complement(r), v)
                    .expect("C^J is contained in the minimal representatives of Δ∖J");
                entries.push(BasisEntry { cell: j, v, poly });
            }
        }
        // Deterministic order: by cell mask, then element index.
        entries.sort_by_key(|e| (e.cell.0, e.v));
        SteinbergBasis { i_set, entries }
    }

    /// The full basis of `R(T)` over `R(T)^W`, indexed by all of `W`.
    pub fn full(group: &WeylGroup) -> Self {
        Self::modified(group, group.datum.delta())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn position_of(&self, v: usize) -> Option<usize> {
        self.entries.iter().position(|e| e.v == v)
    }
}

/// Exact expansion of `g` in the modified basis: returns coefficients
/// `c_v ∈ R(T)^W` with `Σ c_v f_v = g`.
///
/// The coefficients are sought as integer combinations of Weyl orbit sums
/// `O_λ`, with `λ` ranging over a finite window derived from the supports of
/// `g` and the basis elements.  Because products of distinct basis elements
/// can cancel, the window is grown (a few steps, each certified by an exact
/// re-multiplication) until the unique solution is captured.
pub fn expand_in_basis(
    g: &LaurentPoly,
    group: &WeylGroup,
    i_set: Subset,
) -> Result<BTreeMap<usize, LaurentPoly>> {
    let r = group.datum.semisimple_rank;
    let stabilizing = i_set.complement(r);
    for i in stabilizing.indices() {
        let s = group.simple_reflection(i);
        if g.weyl_act(group.element(s)) != *g {
            return Err(Error::input(format!(
                "element is not W_{{Δ∖I}}-invariant for I={i_set}: moved by s{}",
                i + 1
            )));
        }
    }
    let basis = SteinbergBasis::modified(group, i_set);
    expand_in_given_basis(g, group, &basis)
}

fn expand_in_given_basis(
    g: &LaurentPoly,
    group: &WeylGroup,
    basis: &SteinbergBasis,
) -> Result<BTreeMap<usize, LaurentPoly>> {
    let rank = group.datum.rank();
    for growth in 0..=MAX_WINDOW_GROWTH {
        let windows: Vec<Vec<LatticeVector>> = basis
            .entries
            .iter()
            .map(|entry| window_for(g, &entry.poly, group, growth, rank))
            .collect();

        // Columns: the products O_λ · f_v, one unknown per (entry, λ).
        let mut columns: Vec<LaurentPoly> = Vec::new();
        let mut labels: Vec<(usize, LatticeVector)> = Vec::new();
        for (pos, entry) in basis.entries.iter().enumerate() {
            for lambda in &windows[pos] {
                let orbit = full_orbit_sum(group, lambda);
                columns.push(orbit.mul(&entry.poly));
                labels.push((pos, lambda.clone()));
            }
        }

        let mut monomials: BTreeSet<LatticeVector> = g.support().cloned().collect();
        for col in &columns {
            monomials.extend(col.support().cloned());
        }
        let monomials: Vec<LatticeVector> = monomials.into_iter().collect();
        let row_index: BTreeMap<&LatticeVector, usize> =
            monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();

        // One equation per monomial: Σ t_col · coeff(col, m) = coeff(g, m).
        let mut a = vec![vec![BigRational::from_integer(BigInt::from(0)); columns.len()]; monomials.len()];
        for (ci, col) in columns.iter().enumerate() {
            for (m, c) in col.terms() {
                a[row_index[m]][ci] = BigRational::from_integer(c.clone());
            }
        }
        let b: Vec<BigRational> = monomials
            .iter()
            .map(|m| BigRational::from_integer(g.coeff(m)))
            .collect();

        let Some(solution) = linalg::solve_linear_system(&a, &b) else {
            continue;
        };
        if !linalg::rational_is_integer_vec(&solution) {
            return Err(Error::internal(
                "basis expansion produced non-integral coefficients",
            ));
        }

        let mut coeffs: BTreeMap<usize, LaurentPoly> = BTreeMap::new();
        for ((pos, lambda), t) in labels.iter().zip(&solution) {
            if t.is_integer() && t.numer().bits() == 0 {
                continue;
            }
            let orbit = full_orbit_sum(group, lambda).scale(t.numer());
            let v = basis.entries[*pos].v;
            let entry = coeffs.entry(v).or_insert_with(LaurentPoly::zero);
            *entry = entry.add(&orbit);
        }

        // Exact certification; the window solve is only trusted through this.
        let mut recombined = LaurentPoly::zero();
        for entry in &basis.entries {
            if let Some(c) = coeffs.get(&entry.v) {
                recombined = recombined.add(&c.mul(&entry.poly));
            }
        }
        if recombined != *g {
            return Err(Error::internal("basis expansion failed re-multiplication"));
        }
        return Ok(coeffs);
    }
    Err(Error::internal(
        "basis expansion window did not stabilize; the input is outside the supported scale",
    ))
}

/// Candidate orbit representatives for the coefficient of one basis element:
/// orbit representatives of all differences of supports (with 0 adjoined on
/// both sides), dilated by a small box when `growth > 0`.
fn window_for(
    g: &LaurentPoly,
    f: &LaurentPoly,
    group: &WeylGroup,
    growth: i64,
    rank: usize,
) -> Vec<LatticeVector> {
    let mut g_support: Vec<LatticeVector> = g.support().cloned().collect();
    g_support.push(LatticeVector::zero(rank));
    let mut f_support: Vec<LatticeVector> = f.support().cloned().collect();
    f_support.push(LatticeVector::zero(rank));

    let mut diffs: BTreeSet<LatticeVector> = BTreeSet::new();
    for a in &g_support {
        for b in &f_support {
            diffs.insert(a - b);
        }
    }
    let dilated: BTreeSet<LatticeVector> = if growth == 0 {
        diffs
    } else {
        let mut out = BTreeSet::new();
        let box_points = box_lattice(rank, growth);
        for d in &diffs {
            for delta in &box_points {
                out.insert(d + delta);
            }
        }
        out
    };
    let reps: BTreeSet<LatticeVector> = dilated
        .iter()
        .map(|d| orbit_representative(group, d))
        .collect();
    reps.into_iter().collect()
}

fn box_lattice(rank: usize, radius: i64) -> Vec<LatticeVector> {
    let mut points = vec![Vec::new()];
    for _ in 0..rank {
        let mut next = Vec::new();
        for p in &points {
            for c in -radius..=radius {
                let mut q = p.clone();
                q.push(c);
                next.push(q);
            }
        }
        points = next;
    }
    points.into_iter().map(LatticeVector).collect()
}

/// Structure constants of one product `f_v · f_{v'}` in the full modified
/// basis: the map `w ↦ a^w_{v,v'}` over nonzero coefficients.
#[derive(Debug, Clone)]
pub struct ProductExpansion {
    pub v: usize,
    pub v_prime: usize,
    pub coefficients: BTreeMap<usize, LaurentPoly>,
}

impl ProductExpansion {
    /// Exact re-multiplication check against the given group.
    pub fn certify(&self, group: &WeylGroup) -> Result<()> {
        let basis = SteinbergBasis::full(group);
        let product = basis.entries[basis.position_of(self.v).unwrap()]
            .poly
            .mul(&basis.entries[basis.position_of(self.v_prime).unwrap()].poly);
        let mut recombined = LaurentPoly::zero();
        for (w, a) in &self.coefficients {
            let fw = &basis.entries[basis.position_of(*w).unwrap()].poly;
            recombined = recombined.add(&a.mul(fw));
        }
        if recombined == product {
            Ok(())
        } else {
            Err(Error::internal("structure constants fail re-multiplication"))
        }
    }
}

/// Expand `f_v · f_{v'}` in the full modified basis.
pub fn structure_constants(
    group: &WeylGroup,
    v: usize,
    v_prime: usize,
) -> Result<ProductExpansion> {
    let basis = SteinbergBasis::full(group);
    let pv = basis
        .position_of(v)
        .ok_or_else(|| Error::input("v outside the generated group"))?;
    let pv2 = basis
        .position_of(v_prime)
        .ok_or_else(|| Error::input("v' outside the generated group"))?;
    let product = basis.entries[pv].poly.mul(&basis.entries[pv2].poly);
    let coefficients = expand_in_given_basis(&product, group, &basis)?;
    Ok(ProductExpansion { v, v_prime, coefficients })
}

/// The full multiplication table `(v, v') ↦ {w ↦ a^w_{v,v'}}`.
#[derive(Debug, Clone)]
pub struct StructureTable {
    pub entries: BTreeMap<(usize, usize), BTreeMap<usize, LaurentPoly>>,
}

impl StructureTable {
    pub fn build(group: &WeylGroup) -> Result<Self> {
        let n = group.order();
        let mut entries = BTreeMap::new();
        for v in 0..n {
            for v_prime in v..n {
                let exp = structure_constants(group, v, v_prime)?;
                entries.insert((v, v_prime), exp.coefficients.clone());
                if v != v_prime {
                    // The ambient ring is commutative.
                    entries.insert((v_prime, v), exp.coefficients);
                }
            }
        }
        Ok(StructureTable { entries })
    }

    pub fn constants(&self, v: usize, v_prime: usize) -> &BTreeMap<usize, LaurentPoly> {
        &self.entries[&(v, v_prime)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{RootDatum, RootSystemType};
    use crate::rng::SplitMix64;

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
    fn p_v_of_identity_is_one() {
        let w = a2();
        assert_eq!(p_v(&w, w.identity()), LaurentPoly::one(2));
    }

    #[test]
    fn p_v_examples() {
        let w1 = a1();
        let s = w1.simple_reflection(0);
        assert_eq!(p_v(&w1, s), e(&[1]));

        let w2 = a2();
        let s1 = w2.simple_reflection(0);
        assert_eq!(p_v(&w2, s1), e(&[1, 0]));
    }

    #[test]
    fn f_v_of_identity_is_one() {
        let w = a2();
        for i_set in w.datum.delta().subsets() {
            assert_eq!(f_v(&w, i_set, w.identity()).unwrap(), LaurentPoly::one(2));
        }
    }

    #[test]
    fn f_v_a1_reflection() {
        let w = a1();
        let s = w.simple_reflection(0);
        assert_eq!(f_v(&w, Subset::empty(), s).unwrap(), e(&[-1]));
    }

    #[test]
    fn f_v_a2_simple_reflection() {
        let w = a2();
        let s1 = w.simple_reflection(0);
        // s1(ω1) = -ω1 + ω2.
        assert_eq!(f_v(&w, Subset::empty(), s1).unwrap(), e(&[-1, 1]));
    }

    #[test]
    fn f_v_rejects_non_representatives() {
        let w = a2();
        let s1 = w.simple_reflection(0);
        // s1 is not minimal for I = {α1}.
        assert!(f_v(&w, Subset::from_indices(&[0]), s1).is_err());
    }

    #[test]
    fn f_v_is_parabolic_invariant() {
        let w = a2();
        for i_set in w.datum.delta().subsets() {
            for v in w.minimal_coset_reps(i_set) {
                let f = f_v(&w, i_set, v).unwrap();
                for g in w.parabolic_subgroup(i_set) {
                    assert_eq!(f.weyl_act(w.element(g)), f);
                }
            }
        }
    }

    #[test]
    fn central_factor_leaves_basis_elements_untouched() {
        // With a central torus the basis elements are the same polynomials
        // with zero central exponents.
        let w = WeylGroup::new(RootDatum::new(RootSystemType::A1, 1));
        let s = w.simple_reflection(0);
        assert_eq!(
            f_v(&w, Subset::empty(), s).unwrap(),
            LaurentPoly::monomial(LatticeVector(vec![0, -1]))
        );
        let coeffs = expand_in_basis(
            &LaurentPoly::monomial(LatticeVector(vec![1, 1])),
            &w,
            w.datum.delta(),
        )
        .unwrap();
        // e^{z+ω} = e^z(e^ω + e^{-ω})·f_1 - e^z·f_s.
        assert_eq!(
            coeffs[&s],
            LaurentPoly::monomial(LatticeVector(vec![1, 0])).neg()
        );
    }

    #[test]
    fn a1_modified_basis_is_one_and_exp_negative_omega() {
        let w = a1();
        let basis = SteinbergBasis::full(&w);
        assert_eq!(basis.len(), 2);
        assert_eq!(basis.entries[0].poly, LaurentPoly::one(1));
        assert_eq!(basis.entries[1].poly, e(&[-1]));
    }

    #[test]
    fn expansion_recovers_basis_elements() {
        let w = a2();
        let basis = SteinbergBasis::full(&w);
        for entry in &basis.entries {
            let coeffs = expand_in_basis(&entry.poly, &w, w.datum.delta()).unwrap();
            assert_eq!(coeffs.len(), 1);
            assert_eq!(coeffs[&entry.v], LaurentPoly::one(2));
        }
    }

    #[test]
    fn a1_expansion_of_character() {
        let w = a1();
        let coeffs = expand_in_basis(&e(&[1]), &w, w.datum.delta()).unwrap();
        let s = w.simple_reflection(0);
        assert_eq!(coeffs[&w.identity()], e(&[1]).add(&e(&[-1])));
        assert_eq!(coeffs[&s], LaurentPoly::constant(1, -1));
    }

    #[test]
    fn a1_expansion_over_invariants_is_identity() {
        // Over R(T)^W the basis of itself is {f_1 = 1}.
        let w = a1();
        let g = e(&[1]).add(&e(&[-1]));
        let coeffs = expand_in_basis(&g, &w, Subset::empty()).unwrap();
        assert_eq!(coeffs.len(), 1);
        assert_eq!(coeffs[&w.identity()], g);
    }

    #[test]
    fn invariant_element_expands_over_the_identity_alone() {
        // A W-invariant element expands with c_1 = g in the full basis.
        let w = a1();
        let g = e(&[1]).add(&e(&[-1]));
        let coeffs = expand_in_basis(&g, &w, w.datum.delta()).unwrap();
        assert_eq!(coeffs.len(), 1);
        assert_eq!(coeffs[&w.identity()], g);
    }

    #[test]
    fn expansion_rejects_non_invariant_input() {
        let w = a2();
        // I = ∅ requires full W-invariance; a bare character is not.
        assert!(expand_in_basis(&e(&[1, 0]), &w, Subset::empty()).is_err());
    }

    #[test]
    fn a1_structure_constants() {
        let w = a1();
        let s = w.simple_reflection(0);
        let exp = structure_constants(&w, s, s).unwrap();
        exp.certify(&w).unwrap();
        assert_eq!(exp.coefficients[&w.identity()], LaurentPoly::constant(1, -1));
        assert_eq!(exp.coefficients[&s], e(&[1]).add(&e(&[-1])));
    }

    #[test]
    fn identity_row_of_structure_table_is_trivial() {
        let w = a2();
        for v_prime in 0..w.order() {
            let exp = structure_constants(&w, w.identity(), v_prime).unwrap();
            assert_eq!(exp.coefficients.len(), 1);
            assert_eq!(exp.coefficients[&v_prime], LaurentPoly::one(2));
        }
    }

    #[test]
    fn constants_are_symmetric_and_supported_in_the_union_cells() {
        let w = a2();
        let s1 = w.simple_reflection(0);
        let s2 = w.simple_reflection(1);
        let exp12 = structure_constants(&w, s1, s2).unwrap();
        let exp21 = structure_constants(&w, s2, s1).unwrap();
        assert_eq!(exp12.coefficients, exp21.coefficients);
        let allowed = w.cell_of(s1).union(w.cell_of(s2));
        for (wd, a) in &exp12.coefficients {
            assert!(w.cell_of(*wd).is_subset_of(allowed));
            assert!(a.is_invariant(w.elements.iter()));
        }
    }

    #[test]
    fn freeness_roundtrip_on_random_combinations() {
        let w = a2();
        let basis = SteinbergBasis::full(&w);
        let mut rng = SplitMix64::new(11);
        for _ in 0..5 {
            // Random W-invariant coefficients from small orbit sums.
            let mut expected: BTreeMap<usize, LaurentPoly> = BTreeMap::new();
            let mut g = LaurentPoly::zero();
            for entry in &basis.entries {
                if rng.below(3) == 0 {
                    continue;
                }
                let lam = LatticeVector(vec![rng.range_i64(-1, 1), rng.range_i64(-1, 1)]);
                let c = full_orbit_sum(&w, &lam).scale(&BigInt::from(rng.range_i64(-2, 2)));
                if c.is_zero() {
                    continue;
                }
                g = g.add(&c.mul(&entry.poly));
                expected.insert(entry.v, c);
            }
            let coeffs = expand_in_basis(&g, &w, w.datum.delta()).unwrap();
            assert_eq!(coeffs, expected);
        }
    }
}
