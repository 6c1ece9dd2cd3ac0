//! Weyl groups: generation by simple reflections, lengths, minimal coset
//! representatives and the `C^I` partition.

use crate::error::{Error, Result};
use crate::lattice::{LatticeVector, RootDatum, Subset};
use crate::linalg::{self, IntMat};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// A Weyl group element: its action on the weight lattice plus the canonical
/// reduced word (lexicographically least among the shortest).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    pub matrix: IntMat,
    pub word: Vec<usize>,
    pub length: usize,
}

impl WeylElement {
    pub fn act(&self, v: &LatticeVector) -> LatticeVector {
        assert_eq!(v.rank(), self.matrix.len(), "rank mismatch in Weyl action");
        LatticeVector(linalg::mat_vec(&self.matrix, &v.0))
    }

    pub fn is_identity(&self) -> bool {
        self.length == 0
    }
}

/// A generated Weyl group.  Elements are stored sorted by (length, word),
/// so indices are stable and all listings are deterministic.
#[derive(Debug, Clone)]
pub struct WeylGroup {
    pub datum: RootDatum,
    pub elements: Vec<WeylElement>,
    index: BTreeMap<IntMat, usize>,
    /// All roots (the W-orbit of the simple roots), split by sign.
    pub positive_roots: Vec<LatticeVector>,
    negative_roots: BTreeSet<LatticeVector>,
}

impl WeylGroup {
    /// Generate the full group by breadth-first closure of the simple
    /// reflections.
    pub fn new(datum: RootDatum) -> Self {
        let rank = datum.rank();
        let r = datum.semisimple_rank;
        let gens: Vec<IntMat> = (0..r).map(|i| reflection_matrix(&datum, i)).collect();

        let id = linalg::identity(rank);
        let mut index: BTreeMap<IntMat, usize> = BTreeMap::new();
        let mut elements = vec![WeylElement {
            matrix: id.clone(),
            word: Vec::new(),
            length: 0,
        }];
        index.insert(id, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(cur) = queue.pop_front() {
            for (g, gen) in gens.iter().enumerate() {
                // Right multiplication keeps BFS words reduced and, with
                // generators visited in order, lexicographically least.
                let m = linalg::mat_mul(&elements[cur].matrix, gen);
                if !index.contains_key(&m) {
                    let mut word = elements[cur].word.clone();
                    word.push(g);
                    let length = word.len();
                    index.insert(m.clone(), elements.len());
                    elements.push(WeylElement { matrix: m, word, length });
                    queue.push_back(elements.len() - 1);
                }
            }
        }

        elements.sort_by(|a, b| (a.length, &a.word).cmp(&(b.length, &b.word)));
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.matrix.clone(), i))
            .collect();

        let mut group = WeylGroup {
            datum,
            elements,
            index,
            positive_roots: Vec::new(),
            negative_roots: BTreeSet::new(),
        };
        group.compute_roots();
        debug_assert!(group.lengths_match_inversions());
        group
    }

    fn compute_roots(&mut self) {
        let mut all: BTreeSet<LatticeVector> = BTreeSet::new();
        for w in &self.elements {
            for i in 0..self.datum.semisimple_rank {
                all.insert(w.act(&self.datum.simple_root(i)));
            }
        }
        let mut positive = Vec::new();
        let mut negative = BTreeSet::new();
        for root in all {
            match root_sign(&self.datum, &root) {
                Some(true) => positive.push(root),
                Some(false) => {
                    negative.insert(root);
                }
                None => panic!("W-orbit produced a non-root vector"),
            }
        }
        self.positive_roots = positive;
        self.negative_roots = negative;
    }

    fn lengths_match_inversions(&self) -> bool {
        self.elements.iter().all(|w| {
            let inversions = self
                .positive_roots
                .iter()
                .filter(|root| self.is_negative_root(&w.act(root)))
                .count();
            inversions == w.length
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn element(&self, i: usize) -> &WeylElement {
        &self.elements[i]
    }

    pub fn index_of(&self, m: &IntMat) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Index of the element with the given reduced word (any word over the
    /// simple reflections; it is multiplied out).
    pub fn element_from_word(&self, word: &[usize]) -> Result<usize> {
        let r = self.datum.semisimple_rank;
        let mut m = linalg::identity(self.datum.rank());
        for &i in word {
            if i >= r {
                return Err(Error::input(format!(
                    "simple-reflection index {} out of range 1..={r}",
                    i + 1
                )));
            }
            m = linalg::mat_mul(&m, &reflection_matrix(&self.datum, i));
        }
        self.index_of(&m)
            .ok_or_else(|| Error::internal("word product not found in generated group"))
    }

    pub fn compose(&self, a: usize, b: usize) -> usize {
        let m = linalg::mat_mul(&self.elements[a].matrix, &self.elements[b].matrix);
        self.index[&m]
    }

    pub fn inverse(&self, a: usize) -> usize {
        let mut m = linalg::identity(self.datum.rank());
        for &i in self.elements[a].word.iter().rev() {
            m = linalg::mat_mul(&m, &reflection_matrix(&self.datum, i));
        }
        self.index[&m]
    }

    pub fn simple_reflection(&self, i: usize) -> usize {
        let m = reflection_matrix(&self.datum, i);
        self.index[&m]
    }

    pub fn is_negative_root(&self, v: &LatticeVector) -> bool {
        self.negative_roots.contains(v)
    }

    pub fn is_root(&self, v: &LatticeVector) -> bool {
        self.negative_roots.contains(v) || self.positive_roots.contains(v)
    }

    /// The parabolic subgroup `W_I`, as sorted element indices.
    pub fn parabolic_subgroup(&self, i_set: Subset) -> Vec<usize> {
        let gens: Vec<usize> = i_set.indices().iter().map(|&i| self.simple_reflection(i)).collect();
        let mut seen = BTreeSet::from([self.identity()]);
        let mut queue = VecDeque::from([self.identity()]);
        while let Some(cur) = queue.pop_front() {
            for &g in &gens {
                let next = self.compose(cur, g);
                if seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Minimal coset representatives `W^I = {w | l(w s) > l(w) for all s in I}`,
    /// sorted by (length, word).
    pub fn minimal_coset_reps(&self, i_set: Subset) -> Vec<usize> {
        (0..self.order())
            .filter(|&w| {
                i_set.indices().iter().all(|&i| {
                    let ws = self.compose(w, self.simple_reflection(i));
                    self.elements[ws].length > self.elements[w].length
                })
            })
            .collect()
    }

    /// The cell `C^I = W^{Δ∖I} ∖ ⋃_{J⊊I} W^{Δ∖J}`.
    pub fn c_cell(&self, i_set: Subset) -> Vec<usize> {
        let r = self.datum.semisimple_rank;
        let base: BTreeSet<usize> = self
            .minimal_coset_reps(i_set.complement(r))
            .into_iter()
            .collect();
        let mut removed: BTreeSet<usize> = BTreeSet::new();
        for j in i_set.subsets() {
            if j == i_set {
                continue;
            }
            removed.extend(self.minimal_coset_reps(j.complement(r)));
        }
        base.difference(&removed).copied().collect()
    }

    /// The full partition `{C^I : I ⊆ Δ}` as (subset, cell) pairs in subset
    /// mask order.
    pub fn c_partition(&self) -> Vec<(Subset, Vec<usize>)> {
        self.datum
            .delta()
            .subsets()
            .into_iter()
            .map(|i_set| (i_set, self.c_cell(i_set)))
            .collect()
    }

    /// The cell containing `w`.
    pub fn cell_of(&self, w: usize) -> Subset {
        for (i_set, cell) in self.c_partition() {
            if cell.contains(&w) {
                return i_set;
            }
        }
        unreachable!("C^I cells partition W");
    }

    /// Action of `w` on the cocharacter lattice `N` (contragredient to the
    /// weight action), restricted to the semisimple block.
    pub fn cocharacter_matrix(&self, w: usize) -> IntMat {
        let c = self.datum.central_rank;
        let r = self.datum.semisimple_rank;
        let inv = &self.elements[self.inverse(w)].matrix;
        let mut out = vec![vec![0i64; r]; r];
        for i in 0..r {
            for j in 0..r {
                out[i][j] = inv[c + j][c + i];
            }
        }
        out
    }
}

/// Reduced word with 1-based simple-reflection indices, the convention of
/// every external (JSON/CLI) surface.
pub fn external_word(word: &[usize]) -> Vec<usize> {
    word.iter().map(|i| i + 1).collect()
}

/// Parse an external 1-based word back to internal indices.
pub fn internal_word(word: &[usize]) -> Result<Vec<usize>> {
    word.iter()
        .map(|&i| {
            if i == 0 {
                Err(Error::input("reduced-word indices are 1-based"))
            } else {
                Ok(i - 1)
            }
        })
        .collect()
}

/// Matrix of the simple reflection `s_i` in the (central ++ fundamental
/// weight) coordinates: `s_i(λ) = λ - λ_{c+i} α_i`.
fn reflection_matrix(datum: &RootDatum, i: usize) -> IntMat {
    let n = datum.rank();
    let c = datum.central_rank;
    let alpha = datum.simple_root(i);
    let mut m = linalg::identity(n);
    for (k, row) in m.iter_mut().enumerate() {
        row[c + i] -= alpha.0[k];
    }
    m
}

/// `Some(true)` for a positive root, `Some(false)` for a negative root,
/// `None` if the vector is not a root of the datum.
fn root_sign(datum: &RootDatum, v: &LatticeVector) -> Option<bool> {
    let c = datum.central_rank;
    if v.0[..c].iter().any(|&x| x != 0) {
        return None;
    }
    // Solve C x = v_ss; roots have integer coordinates of a single sign in
    // the simple-root basis.
    let coords = linalg::solve_square(&datum.cartan, &v.0[c..])?;
    if !linalg::rational_is_integer_vec(&coords) {
        return None;
    }
    let signs: Vec<i32> = coords
        .iter()
        .map(|x| {
            let n = x.numer();
            if n > &num_bigint::BigInt::from(0) {
                1
            } else if n < &num_bigint::BigInt::from(0) {
                -1
            } else {
                0
            }
        })
        .collect();
    if signs.iter().all(|&s| s >= 0) && signs.iter().any(|&s| s > 0) {
        Some(true)
    } else if signs.iter().all(|&s| s <= 0) && signs.iter().any(|&s| s < 0) {
        Some(false)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::RootSystemType;

    fn group(t: RootSystemType) -> WeylGroup {
        WeylGroup::new(RootDatum::new(t, 0))
    }

    #[test]
    fn orders_match_known_values() {
        for t in [
            RootSystemType::A1,
            RootSystemType::A1xA1,
            RootSystemType::A2,
            RootSystemType::B2,
            RootSystemType::A3,
        ] {
            assert_eq!(group(t).order(), t.weyl_order(), "order of W({})", t);
        }
    }

    #[test]
    fn a2_has_six_elements_with_longest_word_three() {
        let w = group(RootSystemType::A2);
        assert_eq!(w.order(), 6);
        assert_eq!(w.elements.last().unwrap().length, 3);
    }

    #[test]
    fn identity_acts_trivially() {
        let w = group(RootSystemType::B2);
        let v = LatticeVector(vec![3, -1]);
        assert_eq!(w.element(0).act(&v), v);
    }

    #[test]
    fn a1_reflection_negates_fundamental_weight() {
        let w = group(RootSystemType::A1);
        let s = w.simple_reflection(0);
        let omega = w.datum.fundamental_weight(0);
        assert_eq!(w.element(s).act(&omega).0, vec![-1]);
    }

    #[test]
    fn a2_reflection_on_fundamental_weight() {
        let w = group(RootSystemType::A2);
        let s1 = w.simple_reflection(0);
        let omega1 = w.datum.fundamental_weight(0);
        // s1(ω1) = ω1 - α1 = (-1, 1).
        assert_eq!(w.element(s1).act(&omega1).0, vec![-1, 1]);
    }

    #[test]
    fn central_block_is_fixed() {
        let datum = RootDatum::new(RootSystemType::A2, 1);
        let w = WeylGroup::new(datum);
        let z = w.datum.central_character(0);
        for i in 0..w.order() {
            assert_eq!(w.element(i).act(&z), z);
        }
    }

    #[test]
    fn coset_reps_sizes() {
        let w = group(RootSystemType::A2);
        // I = {α1}: |W^I| = 6 / 2 = 3.
        let reps = w.minimal_coset_reps(Subset::from_indices(&[0]));
        assert_eq!(reps.len(), 3);
        // I = ∅: everything.
        assert_eq!(w.minimal_coset_reps(Subset::empty()).len(), 6);
        // I = Δ: identity only.
        let full = w.minimal_coset_reps(w.datum.delta());
        assert_eq!(full, vec![0]);
    }

    #[test]
    fn coset_identity_for_all_subsets() {
        for t in [
            RootSystemType::A1,
            RootSystemType::A1xA1,
            RootSystemType::A2,
            RootSystemType::B2,
            RootSystemType::A3,
        ] {
            let w = group(t);
            for i_set in w.datum.delta().subsets() {
                let reps = w.minimal_coset_reps(i_set).len();
                let sub = w.parabolic_subgroup(i_set).len();
                assert_eq!(reps * sub, w.order(), "{t} I={i_set}");
            }
        }
    }

    #[test]
    fn c_partition_is_disjoint_and_exhaustive() {
        for t in [
            RootSystemType::A1,
            RootSystemType::A1xA1,
            RootSystemType::A2,
            RootSystemType::B2,
        ] {
            let w = group(t);
            let mut seen = BTreeSet::new();
            let mut total = 0;
            for (_, cell) in w.c_partition() {
                for e in cell {
                    assert!(seen.insert(e), "cells overlap in {t}");
                    total += 1;
                }
            }
            assert_eq!(total, w.order(), "cells miss elements in {t}");
        }
    }

    #[test]
    fn c_cell_empty_subset_is_identity() {
        let w = group(RootSystemType::B2);
        assert_eq!(w.c_cell(Subset::empty()), vec![0]);
    }

    #[test]
    fn a1_cell_of_full_subset_is_reflection() {
        let w = group(RootSystemType::A1);
        let cell = w.c_cell(Subset::from_indices(&[0]));
        assert_eq!(cell.len(), 1);
        assert_eq!(w.element(cell[0]).word, vec![0]);
    }

    #[test]
    fn a2_cells_sum_to_group_order() {
        let w = group(RootSystemType::A2);
        let sizes: Vec<usize> = w.c_partition().iter().map(|(_, c)| c.len()).collect();
        assert_eq!(sizes.iter().sum::<usize>(), 6);
        assert_eq!(sizes, vec![1, 2, 2, 1]);
    }

    #[test]
    fn matrices_permute_the_root_set() {
        for t in [RootSystemType::A2, RootSystemType::B2] {
            let w = group(t);
            for e in &w.elements {
                for root in &w.positive_roots {
                    assert!(w.is_root(&e.act(root)));
                }
            }
        }
    }

    #[test]
    fn inverse_and_compose_are_consistent() {
        let w = group(RootSystemType::B2);
        for i in 0..w.order() {
            let inv = w.inverse(i);
            assert_eq!(w.compose(i, inv), w.identity());
            assert_eq!(w.compose(inv, i), w.identity());
        }
    }

    #[test]
    fn cocharacter_action_preserves_pairing() {
        let w = group(RootSystemType::B2);
        let lambda = LatticeVector(vec![2, -1]);
        let v = vec![1, 3];
        for i in 0..w.order() {
            let wl = w.element(i).act(&lambda);
            let wn = linalg::mat_vec(&w.cocharacter_matrix(i), &v);
            let lhs: i64 = wl.0.iter().zip(&wn).map(|(a, b)| a * b).sum();
            let rhs: i64 = lambda.0.iter().zip(&v).map(|(a, b)| a * b).sum();
            assert_eq!(lhs, rhs);
        }
    }
}
