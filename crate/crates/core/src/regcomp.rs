//! The regular-compactification bundle model: a free module of rank `|W|`
//! over the cone-wise coefficient ring, the closed-form product on the
//! Steinberg generators, and the embedding into the congruence ring used
//! as the verification oracle.
//!
//! Values live in the doubled exponent lattice `Λ⊕Λ`.  The first factor
//! carries the toric (`T̃×1`) variables: the Euler factors `λ_I` and the
//! facet congruences of the coefficient ring.  The second factor carries
//! the diagonal variables: the Steinberg elements `f_v` and the invariant
//! structure constants.  This assignment is the one (of the finitely many
//! lattice-factor conventions) under which the embedding is a ring
//! homomorphism landing inside the congruence ring; the product rule and
//! the embedding validate each other through `verify_model`.

use crate::error::{Error, Result};
use crate::fan::{weyl_chamber_fan, Fan};
use crate::gkm::{Label, PiecewiseElement, ZModel};
use crate::lattice::{LatticeVector, Subset};
use crate::laurent::{full_orbit_sum, LaurentPoly};

use crate::rng::SplitMix64;
use crate::steinberg::{SteinbergBasis, StructureTable};
use crate::weyl::WeylGroup;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// One basis element `f̄_v` of the model, tagged by its cell.
#[derive(Debug, Clone)]
pub struct ModelBasisElement {
    pub cell: Subset,
    pub v: usize,
    /// The Steinberg element `f_v` over `Λ` (not doubled).
    pub steinberg: LaurentPoly,
}

/// The rank-`|W|` model over the chamber fan.
#[derive(Debug, Clone)]
pub struct RegCompModel {
    pub group: WeylGroup,
    pub fan_plus: Fan,
    pub basis: Vec<ModelBasisElement>,
    /// The table of Euler factors `λ_I` (doubled lattice, first factor)
    /// driving the closed-form product.
    lambda: BTreeMap<u32, LaurentPoly>,
    /// Structure constants `a^w_{v,v'}` over `Λ`.
    constants: BTreeMap<(usize, usize), BTreeMap<usize, LaurentPoly>>,
}

/// Place a polynomial over `Λ` into the first (toric) factor of `Λ⊕Λ`.
pub fn to_first_factor(p: &LaurentPoly, rank: usize) -> LaurentPoly {
    p.map_exponents(|x| LatticeVector::pair(x, &LatticeVector::zero(rank)))
}

/// Place a polynomial over `Λ` into the second (diagonal) factor of `Λ⊕Λ`.
pub fn to_second_factor(p: &LaurentPoly, rank: usize) -> LaurentPoly {
    p.map_exponents(|x| LatticeVector::pair(&LatticeVector::zero(rank), x))
}

/// The Euler factor `λ_I = ∏_{α∈I} (1 - e^{-α})` placed in the first
/// factor of the doubled lattice.
pub fn lambda_factor(group: &WeylGroup, i_set: Subset) -> LaurentPoly {
    let rank = group.datum.rank();
    let mut out = LaurentPoly::one(2 * rank);
    for i in i_set.indices() {
        let alpha = group.datum.simple_root(i);
        let doubled = LatticeVector::pair(&alpha, &LatticeVector::zero(rank));
        out = out.mul(&crate::laurent::one_minus_exp_neg(&doubled));
    }
    out
}

/// An element of the model: one coefficient-ring value per basis element,
/// each a cone-indexed family over the doubled lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KModuleElement {
    pub coefficients: Vec<PiecewiseElement>,
}

impl RegCompModel {
    /// Build the model for a root datum, using the default chamber cone or
    /// a supplied smooth subdivision.
    pub fn build(group: &WeylGroup, subdivision: Option<Fan>) -> Result<Self> {
        let (fan_plus, _) = weyl_chamber_fan(group, subdivision)?;
        let steinberg = SteinbergBasis::full(group);
        let basis: Vec<ModelBasisElement> = steinberg
            .entries
            .iter()
            .map(|e| ModelBasisElement {
                cell: e.cell,
                v: e.v,
                steinberg: e.poly.clone(),
            })
            .collect();
        let lambda = group
            .datum
            .delta()
            .subsets()
            .into_iter()
            .map(|i_set| (i_set.0, lambda_factor(group, i_set)))
            .collect();
        let constants = StructureTable::build(group)?.entries;
        Ok(RegCompModel {
            group: group.clone(),
            fan_plus,
            basis,
            lambda,
            constants,
        })
    }

    pub fn doubled_rank(&self) -> usize {
        2 * self.group.datum.rank()
    }

    pub fn cone_labels(&self) -> Vec<Label> {
        (0..self.fan_plus.max_cones.len())
            .map(|sigma| Label::Cone { sigma })
            .collect()
    }

    pub fn basis_position(&self, v: usize) -> Option<usize> {
        self.basis.iter().position(|b| b.v == v)
    }

    fn zero_family(&self) -> PiecewiseElement {
        PiecewiseElement::diagonal(&self.cone_labels(), &LaurentPoly::zero())
    }

    fn one_family(&self) -> PiecewiseElement {
        PiecewiseElement::diagonal(&self.cone_labels(), &LaurentPoly::one(self.doubled_rank()))
    }

    pub fn zero(&self) -> KModuleElement {
        KModuleElement {
            coefficients: vec![self.zero_family(); self.basis.len()],
        }
    }

    /// The multiplicative identity `f̄_1`.
    pub fn identity(&self) -> KModuleElement {
        let mut out = self.zero();
        let pos = self
            .basis_position(self.group.identity())
            .expect("identity is in the basis");
        out.coefficients[pos] = self.one_family();
        out
    }

    /// The basis element `f̄_v` as a module element.
    pub fn basis_element(&self, position: usize) -> KModuleElement {
        let mut out = self.zero();
        out.coefficients[position] = self.one_family();
        out
    }

    pub fn validate_element(&self, x: &KModuleElement) -> Result<()> {
        if x.coefficients.len() != self.basis.len() {
            return Err(Error::input(
                "module element does not match the model basis",
            ));
        }
        let labels = self.cone_labels();
        for c in &x.coefficients {
            if c.values.len() != labels.len() || !labels.iter().all(|l| c.values.contains_key(l)) {
                return Err(Error::input("coefficient labels do not match the chamber fan"));
            }
        }
        Ok(())
    }

    pub fn add(&self, a: &KModuleElement, b: &KModuleElement) -> Result<KModuleElement> {
        self.validate_element(a)?;
        self.validate_element(b)?;
        Ok(KModuleElement {
            coefficients: a
                .coefficients
                .iter()
                .zip(&b.coefficients)
                .map(|(x, y)| x.pointwise_add(y))
                .collect::<Result<_>>()?,
        })
    }

    /// The closed-form product: bilinear over the coefficient ring, with
    /// the basis products
    /// `f̄_v f̄_{v'} = Σ_{J⊆I∪I'} Σ_{w∈C^J} λ_{I∩I'} λ_{(I∪I')∖J} c^w_{v,v'} f̄_w`.
    pub fn multiply(&self, a: &KModuleElement, b: &KModuleElement) -> Result<KModuleElement> {
        self.validate_element(a)?;
        self.validate_element(b)?;
        let rank = self.group.datum.rank();
        let mut out = self.zero();
        for (i, bi) in self.basis.iter().enumerate() {
            if a.coefficients[i].values.values().all(|p| p.is_zero()) {
                continue;
            }
            for (j, bj) in self.basis.iter().enumerate() {
                if b.coefficients[j].values.values().all(|p| p.is_zero()) {
                    continue;
                }
                let kappa = a.coefficients[i].pointwise_mul(&b.coefficients[j])?;
                let union = bi.cell.union(bj.cell);
                let inter = bi.cell.intersection(bj.cell);
                let lambda_inter = &self.lambda[&inter.0];
                for (w, a_w) in &self.constants[&(bi.v, bj.v)] {
                    let pos = self
                        .basis_position(*w)
                        .ok_or_else(|| Error::internal("structure constant outside the basis"))?;
                    let cell_w = self.basis[pos].cell;
                    let lambda_rest = &self.lambda[&union.difference(cell_w).0];
                    let factor = lambda_inter
                        .mul(lambda_rest)
                        .mul(&to_second_factor(a_w, rank));
                    let term = kappa.scale_global(&factor);
                    out.coefficients[pos] = out.coefficients[pos].pointwise_add(&term)?;
                }
            }
        }
        Ok(out)
    }

    /// Embed into the congruence ring: at each cone the coefficient value
    /// is multiplied by the Euler factor of the cell (recomputed from the
    /// root datum, independently of the product table) and the Steinberg
    /// element placed in the diagonal factor.
    pub fn embed_to_z(&self, x: &KModuleElement) -> Result<PiecewiseElement> {
        self.validate_element(x)?;
        let rank = self.group.datum.rank();
        let labels = self.cone_labels();
        let mut acc = PiecewiseElement::diagonal(&labels, &LaurentPoly::zero());
        for (i, b) in self.basis.iter().enumerate() {
            let image_factor =
                lambda_factor(&self.group, b.cell).mul(&to_second_factor(&b.steinberg, rank));
            let contribution = x.coefficients[i].scale_global(&image_factor);
            acc = acc.pointwise_add(&contribution)?;
        }
        Ok(acc)
    }

    pub fn z_model(&self) -> ZModel {
        ZModel::new(self.group.clone(), self.fan_plus.clone())
    }

    /// A seeded random element whose coefficients are valid members of the
    /// coefficient ring: arbitrary first-factor content (constant across
    /// cones, plus facet-damped per-cone terms) times `W`-invariant
    /// second-factor content.
    pub fn random_element(&self, rng: &mut SplitMix64) -> KModuleElement {
        let rank = self.group.datum.rank();
        let labels = self.cone_labels();
        let mut out = self.zero();
        for coeff in out.coefficients.iter_mut() {
            // Leave some coefficients zero so sampled products stay sparse.
            if rng.below(3) == 0 {
                continue;
            }
            let global = self.random_kappa_term(rng, rank);
            let mut family = PiecewiseElement::diagonal(&labels, &global);
            // Per-cone part, damped by every facet factor of the cone so
            // the coefficient congruences stay valid.
            for (sigma, label) in labels.iter().enumerate() {
                if rng.below(2) == 0 {
                    continue;
                }
                let mut damp = LaurentPoly::one(2 * rank);
                for (a, b, chi) in self.fan_plus.adjacent_pairs() {
                    if a != sigma && b != sigma {
                        continue;
                    }
                    let full = crate::gkm::embed_cocharacter_normal(&self.group, &chi);
                    let doubled = LatticeVector::pair(&full, &LatticeVector::zero(rank));
                    damp = damp.mul(&crate::laurent::one_minus_exp_neg(&doubled));
                }
                let term = self.random_kappa_term(rng, rank).mul(&damp);
                let updated = family.values[label].add(&term);
                family.values.insert(label.clone(), updated);
            }
            *coeff = family;
        }
        out
    }

    /// A random element with a single nonzero coefficient; keeps sampled
    /// triple products tractable for the larger groups.
    pub fn random_sparse_element(&self, rng: &mut SplitMix64) -> KModuleElement {
        let rank = self.group.datum.rank();
        let labels = self.cone_labels();
        let mut out = self.zero();
        let pos = rng.below(self.basis.len() as u64) as usize;
        let value = self.random_kappa_term(rng, rank);
        out.coefficients[pos] = PiecewiseElement::diagonal(&labels, &value);
        out
    }

    fn random_kappa_term(&self, rng: &mut SplitMix64, rank: usize) -> LaurentPoly {
        // Arbitrary first factor.
        let first = LatticeVector(
            (0..rank)
                .map(|_| rng.range_i64(-2, 2))
                .collect(),
        );
        // W-invariant second factor: a scaled orbit sum.
        let seed_weight = LatticeVector(
            (0..rank)
                .map(|_| rng.range_i64(-1, 1))
                .collect(),
        );
        let invariant = full_orbit_sum(&self.group, &seed_weight);
        let scale = BigInt::from(rng.range_i64(-3, 3));
        to_first_factor(&LaurentPoly::monomial(first), rank)
            .mul(&to_second_factor(&invariant, rank))
            .scale(&scale)
    }

    /// Test hook: perturb one structure constant (the product table only;
    /// the embedding recomputes its own data, so the homomorphism oracle
    /// becomes sensitive to the corruption).
    pub fn corrupt_structure_constant(
        &mut self,
        v: usize,
        v_prime: usize,
        w: usize,
        delta: &LaurentPoly,
    ) {
        let entry = self
            .constants
            .get_mut(&(v, v_prime))
            .expect("pair in the table");
        let updated = entry
            .get(&w)
            .map(|a| a.add(delta))
            .unwrap_or_else(|| delta.clone());
        entry.insert(w, updated);
    }

    /// Test hook: perturb one Euler factor of the product table.
    pub fn corrupt_lambda(&mut self, i_set: Subset, delta: &LaurentPoly) {
        let entry = self.lambda.get_mut(&i_set.0).expect("subset in the table");
        *entry = entry.add(delta);
    }

    pub fn structure_constant_keys(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for ((v, v_prime), row) in &self.constants {
            for w in row.keys() {
                out.push((*v, *v_prime, *w));
            }
        }
        out
    }

    /// Serializable description of the model: basis, Euler factors and the
    /// structure-constant table, with external word indexing.
    pub fn summary(&self) -> ModelSummary {
        let word = |v: usize| crate::weyl::external_word(&self.group.element(v).word);
        ModelSummary {
            root_system: self.group.datum.label.label().to_string(),
            chamber_fan: self.fan_plus.clone(),
            basis: self
                .basis
                .iter()
                .map(|b| BasisSummary {
                    cell: b.cell.external_indices(),
                    v: word(b.v),
                    steinberg: b.steinberg.clone(),
                })
                .collect(),
            euler_factors: self
                .lambda
                .iter()
                .map(|(mask, poly)| EulerSummary {
                    subset: Subset(*mask).external_indices(),
                    poly: poly.clone(),
                })
                .collect(),
            structure_constants: self
                .constants
                .iter()
                .map(|((v, v_prime), row)| ConstantsSummary {
                    v: word(*v),
                    v_prime: word(*v_prime),
                    terms: row
                        .iter()
                        .map(|(w, a)| ConstantTerm { w: word(*w), coeff: a.clone() })
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelSummary {
    pub root_system: String,
    pub chamber_fan: Fan,
    pub basis: Vec<BasisSummary>,
    pub euler_factors: Vec<EulerSummary>,
    pub structure_constants: Vec<ConstantsSummary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BasisSummary {
    pub cell: Vec<usize>,
    pub v: Vec<usize>,
    pub steinberg: LaurentPoly,
}

#[derive(Debug, Clone, Serialize)]
pub struct EulerSummary {
    pub subset: Vec<usize>,
    pub poly: LaurentPoly,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstantsSummary {
    pub v: Vec<usize>,
    pub v_prime: Vec<usize>,
    pub terms: Vec<ConstantTerm>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstantTerm {
    pub w: Vec<usize>,
    pub coeff: LaurentPoly,
}

// ---------------------------------------------------------------------------
// Serialization of module elements.

#[derive(Serialize, Deserialize)]
struct CoefficientRecord {
    cell: Vec<usize>,
    v: Vec<usize>,
    value: PiecewiseElement,
}

#[derive(Serialize, Deserialize)]
struct KModuleWire {
    coefficients: Vec<CoefficientRecord>,
}

impl RegCompModel {
    pub fn element_to_json(&self, x: &KModuleElement) -> Result<String> {
        self.validate_element(x)?;
        let wire = KModuleWire {
            coefficients: self
                .basis
                .iter()
                .zip(&x.coefficients)
                .map(|(b, value)| CoefficientRecord {
                    cell: b.cell.external_indices(),
                    v: crate::weyl::external_word(&self.group.element(b.v).word),
                    value: value.clone(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&wire).map_err(|e| Error::internal(e.to_string()))
    }

    pub fn element_from_json(&self, text: &str) -> Result<KModuleElement> {
        let wire: KModuleWire = serde_json::from_str(text)
            .map_err(|e| Error::input(format!("bad module element JSON: {e}")))?;
        let mut out = self.zero();
        let mut seen = vec![false; self.basis.len()];
        for rec in wire.coefficients {
            let internal = crate::weyl::internal_word(&rec.v)?;
            let v = self.group.element_from_word(&internal)?;
            let pos = self
                .basis_position(v)
                .ok_or_else(|| Error::input("coefficient word outside the basis"))?;
            if std::mem::replace(&mut seen[pos], true) {
                return Err(Error::input("duplicate basis coefficient"));
            }
            out.coefficients[pos] = rec.value;
        }
        self.validate_element(&out)?;
        Ok(out)
    }
}
