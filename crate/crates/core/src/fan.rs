//! Rational polyhedral fans in the cocharacter lattice: smoothness and
//! facet queries, dual-basis characters, and the Weyl-chamber fans `W𝓕₊`.
//!
//! Cones are simplicial with primitive rays.  The cocharacter lattice `N`
//! carries the basis dual to the fundamental-weight coordinates on `Λ`
//! (the simple coroots), so `⟨λ, v⟩` is a plain dot product of the
//! semisimple coordinates.

use crate::error::{Error, Result};
use crate::lattice::LatticeVector;
use crate::linalg::{self, IntMat};
use crate::rng::SplitMix64;
use crate::weyl::WeylGroup;
use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// Number of sample points used by the Monte-Carlo coverage checks.
const COVERAGE_SAMPLES: usize = 1000;

/// A simplicial cone given by its primitive ray generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    pub rays: Vec<LatticeVector>,
}

impl Cone {
    pub fn new(rays: Vec<LatticeVector>) -> Result<Self> {
        let cone = Cone { rays };
        cone.validate()?;
        Ok(cone)
    }

    fn validate(&self) -> Result<()> {
        for ray in &self.rays {
            if ray.is_zero() {
                return Err(Error::input("cone ray is zero"));
            }
            if ray.content() != 1 {
                return Err(Error::input(format!("cone ray {ray} is not primitive")));
            }
        }
        if !self.rays.is_empty() {
            let rank = self.rays[0].rank();
            if self.rays.iter().any(|r| r.rank() != rank) {
                return Err(Error::input("cone rays have mixed ranks"));
            }
            if self.ray_rank() != self.rays.len() {
                return Err(Error::input("cone rays are linearly dependent"));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.rays.len()
    }

    fn ray_matrix(&self) -> IntMat {
        self.rays.iter().map(|r| r.0.clone()).collect()
    }

    fn ray_rank(&self) -> usize {
        let m: Vec<Vec<num_rational::BigRational>> = self
            .rays
            .iter()
            .map(|r| {
                r.0.iter()
                    .map(|&x| num_rational::BigRational::from_integer(BigInt::from(x)))
                    .collect()
            })
            .collect();
        let cols = m.first().map_or(0, |r| r.len());
        let q = linalg::QMatrix { rows: m, cols };
        q.rank()
    }

    /// Smoothness: the rays extend to a basis of the lattice, i.e. all
    /// elementary divisors of the ray matrix are 1 (equivalently the gcd of
    /// its maximal minors is 1).
    pub fn is_smooth(&self) -> bool {
        if self.rays.is_empty() {
            return true;
        }
        let k = self.rays.len();
        let n = self.rays[0].rank();
        if k > n {
            return false;
        }
        let m = self.ray_matrix();
        let mut gcd = 0i64;
        for cols in combinations(n, k) {
            let sub: IntMat = m
                .iter()
                .map(|row| cols.iter().map(|&c| row[c]).collect())
                .collect();
            gcd = num_integer::gcd(gcd, linalg::det(&sub).abs());
            if gcd == 1 {
                return true;
            }
        }
        gcd == 1
    }

    /// For a maximal smooth cone: the character `m ∈ Λ` with
    /// `⟨m, v_j⟩ = δ_{ij}` against the rays of the cone.
    pub fn dual_basis_character(&self, ray_pos: usize) -> Result<LatticeVector> {
        let n = self.rays.first().map_or(0, |r| r.rank());
        if self.rays.len() != n {
            return Err(Error::input("dual basis characters need a maximal cone"));
        }
        if ray_pos >= n {
            return Err(Error::input("ray index outside the cone"));
        }
        if !self.is_smooth() {
            return Err(Error::input("dual basis characters need a smooth cone"));
        }
        // Solve ⟨m, v_j⟩ = δ_{ij}: the ray matrix applied to m.
        let mut rhs = vec![0i64; n];
        rhs[ray_pos] = 1;
        let sol = linalg::solve_square(&self.ray_matrix(), &rhs)
            .ok_or_else(|| Error::internal("maximal cone with singular ray matrix"))?;
        if !linalg::rational_is_integer_vec(&sol) {
            return Err(Error::internal("smooth cone produced a non-integral dual vector"));
        }
        Ok(LatticeVector(
            sol.iter()
                .map(|x| i64::try_from(x.numer().clone()).expect("small entry"))
                .collect(),
        ))
    }

    /// Exact membership of an integer point (maximal cones only).
    pub fn contains(&self, point: &LatticeVector) -> bool {
        self.coordinates(point)
            .is_some_and(|cs| cs.iter().all(|c| !c.is_negative()))
    }

    /// Coordinates of a point over the rays of a maximal cone.
    fn coordinates(&self, point: &LatticeVector) -> Option<Vec<num_rational::BigRational>> {
        let n = point.rank();
        if self.rays.len() != n {
            return None;
        }
        // point = Σ c_i ray_i  ⇔  R^T c = point.
        linalg::solve_square(&linalg::transpose(&self.ray_matrix()), &point.0)
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// A fan stored by its global ray list and maximal cones (faces are derived
/// on demand).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fan {
    pub rank: usize,
    pub rays: Vec<LatticeVector>,
    pub max_cones: Vec<Vec<usize>>,
}

impl Fan {
    pub fn new(rank: usize, rays: Vec<LatticeVector>, max_cones: Vec<Vec<usize>>) -> Result<Self> {
        let mut fan = Fan { rank, rays, max_cones };
        for cone in &mut fan.max_cones {
            cone.sort_unstable();
            cone.dedup();
        }
        fan.validate()?;
        Ok(fan)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let fan: Fan =
            serde_json::from_str(text).map_err(|e| Error::input(format!("bad fan JSON: {e}")))?;
        Fan::new(fan.rank, fan.rays, fan.max_cones)
    }

    fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for ray in &self.rays {
            if ray.rank() != self.rank {
                return Err(Error::input("fan ray rank differs from fan rank"));
            }
            if ray.is_zero() || ray.content() != 1 {
                return Err(Error::input(format!("fan ray {ray} is not primitive")));
            }
            if !seen.insert(ray.clone()) {
                return Err(Error::input(format!("duplicate fan ray {ray}")));
            }
        }
        if self.max_cones.is_empty() {
            return Err(Error::input("fan has no maximal cones"));
        }
        for cone in &self.max_cones {
            if cone.iter().any(|&i| i >= self.rays.len()) {
                return Err(Error::input("cone ray index out of range"));
            }
            self.cone(cone).validate()?;
        }
        // Pairwise structural check: a ray of one maximal cone may lie in
        // another only if it is a shared ray.
        for (a, ca) in self.max_cones.iter().enumerate() {
            for cb in self.max_cones.iter().skip(a + 1) {
                for (first, second) in [(ca, cb), (cb, ca)] {
                    if second.len() != self.rank {
                        continue;
                    }
                    for &i in first {
                        if !second.contains(&i) && self.cone(second).contains(&self.rays[i]) {
                            return Err(Error::input(
                                "maximal cones overlap beyond a common face",
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn cone(&self, ray_indices: &[usize]) -> Cone {
        Cone {
            rays: ray_indices.iter().map(|&i| self.rays[i].clone()).collect(),
        }
    }

    pub fn max_cone(&self, idx: usize) -> Cone {
        self.cone(&self.max_cones[idx])
    }

    /// Smooth iff every maximal cone is.
    pub fn is_smooth(&self) -> bool {
        self.max_cones.iter().all(|c| self.cone(c).is_smooth())
    }

    /// Whether a set of ray indices spans a face of the fan (a subset of
    /// some maximal cone).
    pub fn is_face(&self, rays: &[usize]) -> bool {
        self.max_cones
            .iter()
            .any(|c| rays.iter().all(|i| c.contains(i)))
    }

    /// Inclusion-minimal non-faces among subsets of size ≤ rank + 1.
    pub fn minimal_non_faces(&self) -> Vec<Vec<usize>> {
        let mut non_faces: Vec<Vec<usize>> = Vec::new();
        for size in 1..=(self.rank + 1).min(self.rays.len()) {
            for subset in combinations(self.rays.len(), size) {
                if self.is_face(&subset) {
                    continue;
                }
                if non_faces
                    .iter()
                    .any(|nf| nf.iter().all(|i| subset.contains(i)))
                {
                    continue;
                }
                non_faces.push(subset);
            }
        }
        non_faces
    }

    /// Common facet of two maximal cones, with its primitive normal
    /// character, oriented to be nonnegative on the first cone.  `None`
    /// when the cones do not share a codimension-one face.
    pub fn common_facet(&self, a: usize, b: usize) -> Result<Option<(Vec<usize>, LatticeVector)>> {
        if a >= self.max_cones.len() || b >= self.max_cones.len() {
            return Err(Error::input("maximal cone index out of range"));
        }
        if a == b {
            return Ok(None);
        }
        let ca = &self.max_cones[a];
        let cb = &self.max_cones[b];
        if ca.len() != self.rank || cb.len() != self.rank {
            return Err(Error::input("common_facet requires maximal cones"));
        }
        let shared: Vec<usize> = ca.iter().copied().filter(|i| cb.contains(i)).collect();
        if shared.len() + 1 != self.rank {
            return Ok(None);
        }
        let cone_a = self.max_cone(a);
        let omitted_pos = ca
            .iter()
            .position(|i| !shared.contains(i))
            .expect("one ray of a is not shared");
        let chi = cone_a.dual_basis_character(omitted_pos)?;
        // χ vanishes on the facet and is positive on the rest of `a`; the
        // second cone must lie on the opposite side, otherwise the two
        // cones overlap and the input is not a fan.
        let omitted_b = cb.iter().find(|i| !shared.contains(i)).expect("one ray");
        if chi.dot(&self.rays[*omitted_b]) >= 0 {
            return Err(Error::input(
                "cones share a wall but lie on the same side; not a fan",
            ));
        }
        Ok(Some((shared, chi)))
    }

    /// All unordered adjacent pairs of maximal cones with their facet
    /// normals, in index order.
    pub fn adjacent_pairs(&self) -> Vec<(usize, usize, LatticeVector)> {
        let mut out = Vec::new();
        for a in 0..self.max_cones.len() {
            for b in a + 1..self.max_cones.len() {
                if let Ok(Some((_, chi))) = self.common_facet(a, b) {
                    out.push((a, b, chi));
                }
            }
        }
        out
    }

    /// Whether some facet of the given maximal cone lies in the hyperplane
    /// `⟨functional, ·⟩ = 0`.
    pub fn facet_orthogonal_to(&self, cone_idx: usize, functional: &LatticeVector) -> bool {
        let cone = &self.max_cones[cone_idx];
        (0..cone.len()).any(|omit| {
            cone.iter()
                .enumerate()
                .filter(|(p, _)| *p != omit)
                .all(|(_, &i)| functional.dot(&self.rays[i]) == 0)
        })
    }

    /// Monte-Carlo completeness: seeded sample points must all lie in some
    /// maximal cone.  Exact per point; probabilistic only in coverage.
    pub fn covers_space(&self, seed: u64) -> bool {
        let mut rng = SplitMix64::new(seed);
        for _ in 0..COVERAGE_SAMPLES {
            let p = LatticeVector(
                (0..self.rank)
                    .map(|_| rng.range_i64(-50, 50))
                    .collect(),
            );
            if !self.max_cones.iter().any(|c| self.cone(c).contains(&p)) {
                return false;
            }
        }
        true
    }
}

/// The positive Weyl chamber of a root datum as a cone in the semisimple
/// cocharacter coordinates: `{v : ⟨α_i, v⟩ ≥ 0}`, with primitive ray
/// generators along the fundamental coweight directions.
pub fn positive_chamber_cone(group: &WeylGroup) -> Cone {
    let datum = &group.datum;
    let c = datum.central_rank;
    let r = datum.semisimple_rank;
    let mut rays = Vec::new();
    for j in 0..r {
        // Solve ⟨α_i, x⟩ = δ_{ij}; the ray generator is the primitive
        // integer multiple of the rational solution.
        let a: IntMat = (0..r)
            .map(|i| datum.simple_root(i).0[c..].to_vec())
            .collect();
        let mut rhs = vec![0i64; r];
        rhs[j] = 1;
        let sol = linalg::solve_square(&a, &rhs).expect("Cartan matrix is nonsingular");
        let denom_lcm = sol
            .iter()
            .fold(BigInt::from(1), |l, x| num_integer::lcm(l, x.denom().clone()));
        let ints: Vec<i64> = sol
            .iter()
            .map(|x| {
                let v = x.numer() * (&denom_lcm / x.denom());
                i64::try_from(v).expect("small chamber ray")
            })
            .collect();
        rays.push(
            LatticeVector(ints)
                .primitive_part()
                .expect("chamber ray is nonzero"),
        );
    }
    Cone { rays }
}

/// Restriction of a full weight to the semisimple coordinates, for pairing
/// against chamber-fan cocharacters.
pub fn semisimple_part(group: &WeylGroup, weight: &LatticeVector) -> LatticeVector {
    LatticeVector(weight.0[group.datum.central_rank..].to_vec())
}

/// True iff the maximal cone has a facet orthogonal to the given root.
pub fn facet_orthogonal_to_root(
    fan: &Fan,
    cone_idx: usize,
    group: &WeylGroup,
    root: &LatticeVector,
) -> bool {
    fan.facet_orthogonal_to(cone_idx, &semisimple_part(group, root))
}

/// Build the chamber fan pair `(𝓕₊, 𝓕 = W𝓕₊)`.
///
/// With no subdivision the chamber itself must be a smooth cone (true for
/// A1 and A1×A1 in these coordinates; A2, B2 and A3 need a user-supplied
/// smooth subdivision, which is validated, not constructed).
pub fn weyl_chamber_fan(group: &WeylGroup, subdivision: Option<Fan>) -> Result<(Fan, Fan)> {
    let r = group.datum.semisimple_rank;
    let chamber = positive_chamber_cone(group);
    let fan_plus = match subdivision {
        None => {
            if !chamber.is_smooth() {
                return Err(Error::input(format!(
                    "the positive chamber of {} is not a smooth cone; supply a smooth subdivision",
                    group.datum.label
                )));
            }
            Fan::new(r, chamber.rays.clone(), vec![(0..r).collect()])?
        }
        Some(sub) => {
            validate_chamber_subdivision(group, &chamber, &sub)?;
            sub
        }
    };

    // Translate the maximal cones around by the contragredient Weyl action.
    let mut ray_set: BTreeSet<LatticeVector> = BTreeSet::new();
    let mut cone_set: BTreeSet<Vec<LatticeVector>> = BTreeSet::new();
    for w in 0..group.order() {
        let m = group.cocharacter_matrix(w);
        for cone in &fan_plus.max_cones {
            let mut rays: Vec<LatticeVector> = cone
                .iter()
                .map(|&i| LatticeVector(linalg::mat_vec(&m, &fan_plus.rays[i].0)))
                .collect();
            rays.sort();
            ray_set.extend(rays.iter().cloned());
            cone_set.insert(rays);
        }
    }
    let rays: Vec<LatticeVector> = ray_set.into_iter().collect();
    let ray_index: BTreeMap<&LatticeVector, usize> =
        rays.iter().enumerate().map(|(i, r)| (r, i)).collect();
    let max_cones: Vec<Vec<usize>> = cone_set
        .iter()
        .map(|c| c.iter().map(|r| ray_index[r]).collect())
        .collect();
    let fan = Fan::new(r, rays, max_cones)?;
    if !fan.is_smooth() {
        return Err(Error::input("translated chamber fan is not smooth"));
    }
    if !fan.covers_space(0) {
        return Err(Error::verification(
            "translated chamber fan fails the completeness spot-check",
        ));
    }
    Ok((fan_plus, fan))
}

fn validate_chamber_subdivision(group: &WeylGroup, chamber: &Cone, sub: &Fan) -> Result<()> {
    let r = group.datum.semisimple_rank;
    if sub.rank != r {
        return Err(Error::input("subdivision rank differs from semisimple rank"));
    }
    if !sub.is_smooth() {
        return Err(Error::input("subdivision is not smooth"));
    }
    for ray in &sub.rays {
        let inside =
            (0..r).all(|i| semisimple_part(group, &group.datum.simple_root(i)).dot(ray) >= 0);
        if !inside {
            return Err(Error::input(format!(
                "subdivision ray {ray} leaves the positive chamber"
            )));
        }
    }
    // Coverage of the chamber: sampled nonnegative combinations of the
    // chamber rays must land in some cone of the subdivision.
    let mut rng = SplitMix64::new(1);
    for _ in 0..COVERAGE_SAMPLES {
        let mut p = LatticeVector::zero(r);
        for ray in &chamber.rays {
            p = &p + &ray.scaled(rng.range_i64(0, 20));
        }
        if !sub.max_cones.iter().any(|c| sub.cone(c).contains(&p)) {
            return Err(Error::input(
                "subdivision does not cover the positive chamber",
            ));
        }
    }
    Ok(())
}

/// The fan of the projective line: rays ±1 in rank 1.
pub fn p1_fan() -> Fan {
    Fan::new(
        1,
        vec![LatticeVector(vec![1]), LatticeVector(vec![-1])],
        vec![vec![0], vec![1]],
    )
    .expect("static fan")
}

/// The fan of the projective plane.
pub fn p2_fan() -> Fan {
    Fan::new(
        2,
        vec![
            LatticeVector(vec![1, 0]),
            LatticeVector(vec![0, 1]),
            LatticeVector(vec![-1, -1]),
        ],
        vec![vec![0, 1], vec![1, 2], vec![0, 2]],
    )
    .expect("static fan")
}

/// The fan of P¹×P¹.
pub fn p1xp1_fan() -> Fan {
    Fan::new(
        2,
        vec![
            LatticeVector(vec![1, 0]),
            LatticeVector(vec![0, 1]),
            LatticeVector(vec![-1, 0]),
            LatticeVector(vec![0, -1]),
        ],
        vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
    )
    .expect("static fan")
}
