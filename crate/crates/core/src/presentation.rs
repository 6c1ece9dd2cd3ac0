//! Generator/relation presentations of toric-bundle and flag-bundle K-rings
//! over a finitely presented base, with rank computation and a localization
//! cross-check through the fixed-point model.

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::gkm::{CurveModel, Label, PiecewiseElement};
use crate::lattice::{LatticeVector, Subset};
use crate::laurent::{full_orbit_sum, LaurentPoly};
use crate::linalg::{self, QMatrix};
use crate::rng::SplitMix64;
use crate::steinberg::{structure_constants, SteinbergBasis};
use crate::weyl::WeylGroup;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// Degree cap for the quotient-rank monomial closure.
const MAX_MONOMIAL_DEGREE: u32 = 12;

/// How coefficients of `R(T)^W` are pushed into the base ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum EulerMap {
    /// Send a virtual representation to its dimension.
    #[default]
    Augmentation,
}

/// Base-ring data: a Laurent coefficient ring of rank `char_rank`, the
/// multiplicative character map `u ↦ ξ_u = e^{L(u)}`, and the map applied
/// to `W`-invariant coefficients in the flag case.
///
/// The default (trivial) spec is the integers with `ξ_u = 1` and the
/// augmentation for invariants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseRingSpec {
    pub char_rank: usize,
    /// `char_rank × n` integer matrix applied to characters `u ∈ M`.
    pub char_map: Vec<Vec<i64>>,
    #[serde(default)]
    pub euler: EulerMap,
}

impl BaseRingSpec {
    pub fn trivial() -> Self {
        BaseRingSpec {
            char_rank: 0,
            char_map: Vec::new(),
            euler: EulerMap::Augmentation,
        }
    }

    /// The base whose characters are the torus characters themselves:
    /// `ξ_u = e^u`.  This is the equivariant model the evaluation map
    /// validates against.
    pub fn tautological(n: usize) -> Self {
        BaseRingSpec {
            char_rank: n,
            char_map: linalg::identity(n),
            euler: EulerMap::Augmentation,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: BaseRingSpec = serde_json::from_str(text)
            .map_err(|e| Error::input(format!("bad base-ring JSON: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.char_map.len() != self.char_rank {
            return Err(Error::input("char_map row count differs from char_rank"));
        }
        Ok(())
    }

    pub fn is_trivial(&self) -> bool {
        self.char_rank == 0
    }

    /// The line-bundle class `ξ_u`, a monomial of the base coefficient ring.
    pub fn xi(&self, u: &LatticeVector) -> LaurentPoly {
        let exp: Vec<i64> = self
            .char_map
            .iter()
            .map(|row| {
                assert_eq!(row.len(), u.rank(), "char_map width differs from lattice rank");
                row.iter().zip(&u.0).map(|(a, b)| a * b).sum()
            })
            .collect();
        LaurentPoly::monomial(LatticeVector(exp))
    }

    /// Push a `W`-invariant coefficient into the base ring.
    pub fn euler_class(&self, invariant: &LaurentPoly) -> LaurentPoly {
        match self.euler {
            EulerMap::Augmentation => {
                LaurentPoly::monomial_scaled(LatticeVector::zero(self.char_rank), invariant.augmentation())
            }
        }
    }
}

/// Polynomial in the presentation generators with base-ring coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PresPoly {
    /// multidegree over the generators → coefficient.
    pub terms: BTreeMap<Vec<u32>, LaurentPoly>,
}

impl PresPoly {
    pub fn zero() -> Self {
        PresPoly::default()
    }

    pub fn constant(num_gens: usize, coeff: LaurentPoly) -> Self {
        let mut p = PresPoly::zero();
        p.add_term(vec![0; num_gens], coeff);
        p
    }

    pub fn one(num_gens: usize, base_rank: usize) -> Self {
        Self::constant(num_gens, LaurentPoly::one(base_rank))
    }

    /// The generator `x_i`.
    pub fn generator(num_gens: usize, i: usize, base_rank: usize) -> Self {
        let mut deg = vec![0u32; num_gens];
        deg[i] = 1;
        let mut p = PresPoly::zero();
        p.add_term(deg, LaurentPoly::one(base_rank));
        p
    }

    pub fn add_term(&mut self, degrees: Vec<u32>, coeff: LaurentPoly) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(degrees) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&coeff);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &PresPoly) -> PresPoly {
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.add_term(d.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &PresPoly) -> PresPoly {
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.add_term(d.clone(), c.neg());
        }
        out
    }

    pub fn mul(&self, other: &PresPoly) -> PresPoly {
        let mut out = PresPoly::zero();
        for (d1, c1) in &self.terms {
            for (d2, c2) in &other.terms {
                let deg: Vec<u32> = d1.iter().zip(d2).map(|(a, b)| a + b).collect();
                out.add_term(deg, c1.mul(c2));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> PresPoly {
        let num_gens = self.terms.keys().next().map_or(0, |d| d.len());
        let mut out = PresPoly::one(num_gens, self.base_rank());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    fn base_rank(&self) -> usize {
        self.terms
            .values()
            .next()
            .and_then(|c| c.support().next().map(|l| l.rank()))
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|d| d.iter().sum())
            .max()
            .unwrap_or(0)
    }
}

// Serialize PresPoly as records for the CLI output.
#[derive(Serialize, Deserialize)]
struct PresTermRecord {
    degrees: Vec<u32>,
    coeff: LaurentPoly,
}

impl Serialize for PresPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let recs: Vec<PresTermRecord> = self
            .terms
            .iter()
            .map(|(d, c)| PresTermRecord { degrees: d.clone(), coeff: c.clone() })
            .collect();
        recs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PresPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let recs = Vec::<PresTermRecord>::deserialize(d)?;
        let mut p = PresPoly::zero();
        for r in recs {
            p.add_term(r.degrees, r.coeff);
        }
        Ok(p)
    }
}

/// Presentation of a toric-bundle K-ring: one generator per ray, monomial
/// relations for the minimal non-faces, and one character relation per
/// basis vector of `M`.
#[derive(Debug, Clone, Serialize)]
pub struct ToricPresentation {
    pub base: BaseRingSpec,
    pub generators: Vec<String>,
    pub non_face_relations: Vec<PresPoly>,
    pub character_relations: Vec<PresPoly>,
    #[serde(skip)]
    pub fan: Fan,
}

impl ToricPresentation {
    pub fn relations(&self) -> impl Iterator<Item = &PresPoly> {
        self.non_face_relations
            .iter()
            .chain(self.character_relations.iter())
    }
}

/// Build the toric presentation for a smooth complete fan.
///
/// Character relations are emitted for the standard basis of `M` only;
/// the relation family is multiplicative in `u`, so the basis relations
/// generate the rest (spot-checked for random `u` in the verification).
pub fn toric_presentation(fan: &Fan, base: &BaseRingSpec) -> Result<ToricPresentation> {
    base.validate()?;
    if !base.is_trivial() && base.char_map.iter().any(|row| row.len() != fan.rank) {
        return Err(Error::input("base char_map width differs from fan rank"));
    }
    if !fan.is_smooth() {
        return Err(Error::input("toric presentations need a smooth fan"));
    }
    if !fan.covers_space(0) {
        return Err(Error::input("toric presentations need a complete fan"));
    }
    let d = fan.rays.len();
    let non_face_relations = fan
        .minimal_non_faces()
        .into_iter()
        .map(|nf| {
            let mut deg = vec![0u32; d];
            for i in nf {
                deg[i] = 1;
            }
            let mut p = PresPoly::zero();
            p.add_term(deg, LaurentPoly::one(base.char_rank));
            p
        })
        .collect();
    let character_relations = (0..fan.rank)
        .map(|k| {
            let mut u = LatticeVector::zero(fan.rank);
            u.0[k] = 1;
            character_relation(fan, base, &u)
        })
        .collect();
    Ok(ToricPresentation {
        base: base.clone(),
        generators: (1..=d).map(|i| format!("x{i}")).collect(),
        non_face_relations,
        character_relations,
        fan: fan.clone(),
    })
}

/// The relation of one character `u`:
/// `∏_{⟨u,v_i⟩≥0} (1-x_i)^{⟨u,v_i⟩} - ξ_u ∏_{⟨u,v_i⟩≤0} (1-x_i)^{-⟨u,v_i⟩}`.
pub fn character_relation(fan: &Fan, base: &BaseRingSpec, u: &LatticeVector) -> PresPoly {
    let d = fan.rays.len();
    let one = PresPoly::one(d, base.char_rank);
    let mut positive = one.clone();
    let mut negative = one.clone();
    for (i, ray) in fan.rays.iter().enumerate() {
        let pairing = u.dot(ray);
        let one_minus_xi = one.sub(&PresPoly::generator(d, i, base.char_rank));
        if pairing > 0 {
            positive = positive.mul(&one_minus_xi.pow(pairing as u32));
        } else if pairing < 0 {
            negative = negative.mul(&one_minus_xi.pow((-pairing) as u32));
        }
    }
    let xi = PresPoly::constant(d, base.xi(u));
    positive.sub(&xi.mul(&negative))
}

/// Fixed-point images of the generators: `x_i ↦ 0` off its cones and
/// `1 - e^{s·m_{σ,i}}` on them, with the global sign `s` calibrated once by
/// requiring every relation image to vanish on the projective-line fan.
#[derive(Debug, Clone)]
pub struct ToricEvalMap {
    pub images: Vec<PiecewiseElement>,
    pub sign: i64,
}

pub fn toric_evaluation_map(fan: &Fan) -> Result<ToricEvalMap> {
    let sign = calibrated_sign()?;
    evaluation_map_with_sign(fan, sign)
}

fn evaluation_map_with_sign(fan: &Fan, sign: i64) -> Result<ToricEvalMap> {
    let labels: Vec<Label> = (0..fan.max_cones.len())
        .map(|sigma| Label::Cone { sigma })
        .collect();
    let mut images = Vec::new();
    for i in 0..fan.rays.len() {
        let mut values = BTreeMap::new();
        for (sigma, cone) in fan.max_cones.iter().enumerate() {
            let value = match cone.iter().position(|&r| r == i) {
                None => LaurentPoly::zero(),
                Some(pos) => {
                    let m = fan.max_cone(sigma).dual_basis_character(pos)?;
                    LaurentPoly::one(fan.rank)
                        .sub(&LaurentPoly::monomial(m.scaled(sign)))
                }
            };
            values.insert(labels[sigma].clone(), value);
        }
        images.push(PiecewiseElement::new(values));
    }
    Ok(ToricEvalMap { images, sign })
}

/// Evaluate a presentation polynomial with tautological base coefficients
/// (`ξ_u = e^u`) into the fixed-point model.
pub fn evaluate_presentation_poly(
    fan: &Fan,
    eval: &ToricEvalMap,
    p: &PresPoly,
) -> Result<PiecewiseElement> {
    let labels: Vec<Label> = (0..fan.max_cones.len())
        .map(|sigma| Label::Cone { sigma })
        .collect();
    let mut acc = PiecewiseElement::diagonal(&labels, &LaurentPoly::zero());
    for (degrees, coeff) in &p.terms {
        if coeff
            .support()
            .next()
            .is_some_and(|l| l.rank() != 0 && l.rank() != fan.rank)
        {
            return Err(Error::input(
                "evaluation needs trivial or tautological base coefficients",
            ));
        }
        // Rank-0 coefficients are constants; tautological ones are already
        // characters of the fan lattice.
        let coeff_poly = if coeff.support().next().is_none_or(|l| l.rank() == 0) {
            let mut c = LaurentPoly::zero();
            for (_, k) in coeff.terms() {
                c.add_term(LatticeVector::zero(fan.rank), k.clone());
            }
            c
        } else {
            coeff.clone()
        };
        let mut term = PiecewiseElement::diagonal(&labels, &coeff_poly);
        for (i, &e) in degrees.iter().enumerate() {
            for _ in 0..e {
                term = term.pointwise_mul(&eval.images[i])?;
            }
        }
        acc = acc.pointwise_add(&term)?;
    }
    Ok(acc)
}

/// The divisor-class sign is an implementation constant, fixed by requiring
/// the projective-line relations to vanish and then asserted for every fan.
fn calibrated_sign() -> Result<i64> {
    let fan = crate::fan::p1_fan();
    let base = BaseRingSpec::tautological(1);
    let pres = toric_presentation(&fan, &base)?;
    'sign: for sign in [1i64, -1] {
        let eval = evaluation_map_with_sign(&fan, sign)?;
        for rel in pres.relations() {
            let image = evaluate_presentation_poly(&fan, &eval, rel)?;
            if image.values.values().any(|p| !p.is_zero()) {
                continue 'sign;
            }
        }
        return Ok(sign);
    }
    Err(Error::internal(
        "no divisor sign validates the projective-line relations",
    ))
}

/// Quotient rank over the point base: dimension of the monomial span modulo
/// the relation rows, grown degree by degree until it stabilizes and the
/// standard monomials close under multiplication.
pub fn toric_quotient_rank(pres: &ToricPresentation) -> Result<usize> {
    if !pres.base.is_trivial() {
        return Err(Error::input("quotient rank is computed over the point base"));
    }
    let fan = &pres.fan;
    let mut degree = (fan.rank as u32) + 2;
    let mut previous: Option<(usize, u32)> = None;
    while degree <= MAX_MONOMIAL_DEGREE {
        let (dim, max_standard_degree) = quotient_dimension(pres, fan, degree)?;
        if let Some((prev_dim, prev_std)) = previous {
            let closed = prev_std + 1 < degree;
            if prev_dim == dim && closed {
                return Ok(dim);
            }
            let _ = max_standard_degree;
        }
        previous = Some((dim, max_standard_degree));
        degree += 1;
    }
    Err(Error::input(
        "monomial closure did not stabilize below the degree cap (is the fan complete?)",
    ))
}

fn quotient_dimension(
    pres: &ToricPresentation,
    fan: &Fan,
    degree: u32,
) -> Result<(usize, u32)> {
    let monomials = face_supported_monomials(fan, degree);
    let index: BTreeMap<&Vec<u32>, usize> =
        monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut matrix = QMatrix::new(monomials.len());
    for rel in pres.character_relations.iter() {
        let rel_degree = rel.total_degree();
        for m in &monomials {
            let m_degree: u32 = m.iter().sum();
            if m_degree + rel_degree > degree {
                continue;
            }
            let mut mono = PresPoly::zero();
            mono.add_term(m.clone(), LaurentPoly::one(0));
            let product = mono.mul(rel);
            let mut row = vec![BigRational::zero(); monomials.len()];
            let mut in_window = true;
            for (d, c) in &product.terms {
                if !is_face_supported(fan, d) {
                    continue;
                }
                match index.get(d) {
                    Some(&col) => row[col] = BigRational::from_integer(c.augmentation()),
                    None => {
                        in_window = false;
                        break;
                    }
                }
            }
            if in_window && row.iter().any(|x| !x.is_zero()) {
                matrix.push_row(row);
            }
        }
    }
    let (rank, pivots) = matrix.rank_with_pivots();
    let pivot_set: BTreeSet<usize> = pivots.into_iter().collect();
    let max_standard_degree = monomials
        .iter()
        .enumerate()
        .filter(|(i, _)| !pivot_set.contains(i))
        .map(|(_, m)| m.iter().sum())
        .max()
        .unwrap_or(0);
    Ok((monomials.len() - rank, max_standard_degree))
}

/// The standard monomials of the quotient at the stabilized degree: used to
/// cross-check the rank against the localization image.
pub fn toric_standard_monomials(pres: &ToricPresentation) -> Result<Vec<Vec<u32>>> {
    let rank = toric_quotient_rank(pres)?;
    let fan = &pres.fan;
    for degree in (fan.rank as u32 + 2)..=MAX_MONOMIAL_DEGREE {
        let monomials = face_supported_monomials(fan, degree);
        let index: BTreeMap<&Vec<u32>, usize> =
            monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut matrix = QMatrix::new(monomials.len());
        for rel in pres.character_relations.iter() {
            let rel_degree = rel.total_degree();
            for m in &monomials {
                let m_degree: u32 = m.iter().sum();
                if m_degree + rel_degree > degree {
                    continue;
                }
                let mut mono = PresPoly::zero();
                mono.add_term(m.clone(), LaurentPoly::one(0));
                let product = mono.mul(rel);
                let mut row = vec![BigRational::zero(); monomials.len()];
                let mut in_window = true;
                for (d, c) in &product.terms {
                    if !is_face_supported(fan, d) {
                        continue;
                    }
                    match index.get(d) {
                        Some(&col) => row[col] = BigRational::from_integer(c.augmentation()),
                        None => {
                            in_window = false;
                            break;
                        }
                    }
                }
                if in_window && row.iter().any(|x| !x.is_zero()) {
                    matrix.push_row(row);
                }
            }
        }
        let (_, pivots) = matrix.rank_with_pivots();
        let pivot_set: BTreeSet<usize> = pivots.into_iter().collect();
        let standard: Vec<Vec<u32>> = monomials
            .iter()
            .enumerate()
            .filter(|(i, _)| !pivot_set.contains(i))
            .map(|(_, m)| m.clone())
            .collect();
        if standard.len() == rank {
            return Ok(standard);
        }
    }
    Err(Error::internal("standard monomials did not stabilize"))
}

fn is_face_supported(fan: &Fan, degrees: &[u32]) -> bool {
    let support: Vec<usize> = degrees
        .iter()
        .enumerate()
        .filter(|(_, &d)| d > 0)
        .map(|(i, _)| i)
        .collect();
    fan.is_face(&support)
}

/// All face-supported monomials of total degree ≤ `degree`, in degree-then-
/// lex order.
fn face_supported_monomials(fan: &Fan, degree: u32) -> Vec<Vec<u32>> {
    let d = fan.rays.len();
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut queue = VecDeque::from([vec![0u32; d]]);
    seen.insert(vec![0u32; d]);
    while let Some(m) = queue.pop_front() {
        let total: u32 = m.iter().sum();
        if total == degree {
            continue;
        }
        for i in 0..d {
            let mut next = m.clone();
            next[i] += 1;
            if is_face_supported(fan, &next) && seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    let mut out: Vec<Vec<u32>> = seen.into_iter().collect();
    out.sort_by_key(|m| (m.iter().sum::<u32>(), m.clone()));
    out
}

/// Cross-model verification of a toric presentation.
#[derive(Debug, Clone, Serialize)]
pub struct ToricVerification {
    pub quotient_rank: usize,
    pub eval_image_rank: usize,
    pub max_cones: usize,
    pub relations_vanish: bool,
    pub random_character_relations_vanish: bool,
    pub images_satisfy_curve_congruences: bool,
}

impl ToricVerification {
    pub fn pass(&self) -> bool {
        self.relations_vanish
            && self.random_character_relations_vanish
            && self.images_satisfy_curve_congruences
            && self.quotient_rank == self.max_cones
            && self.eval_image_rank == self.max_cones
    }
}

/// Run the full toric cross-check: the point-base quotient rank, the
/// vanishing of all relation images, the rank of the evaluated standard
/// monomials, and curve-ring membership of every image.
pub fn verify_toric(fan: &Fan, seed: u64) -> Result<ToricVerification> {
    let point = toric_presentation(fan, &BaseRingSpec::trivial())?;
    let quotient_rank = toric_quotient_rank(&point)?;
    let standard = toric_standard_monomials(&point)?;

    let tautological = toric_presentation(fan, &BaseRingSpec::tautological(fan.rank))?;
    let eval = toric_evaluation_map(fan)?;
    let mut relations_vanish = true;
    for rel in tautological.relations() {
        let image = evaluate_presentation_poly(fan, &eval, rel)?;
        if image.values.values().any(|p| !p.is_zero()) {
            relations_vanish = false;
        }
    }

    // Random non-basis characters: the basis-only relation family must
    // already force these to vanish.
    let mut rng = SplitMix64::new(seed);
    let mut random_ok = true;
    for _ in 0..5 {
        let u = LatticeVector(
            (0..fan.rank)
                .map(|_| rng.range_i64(-3, 3))
                .collect(),
        );
        let rel = character_relation(fan, &BaseRingSpec::tautological(fan.rank), &u);
        let image = evaluate_presentation_poly(fan, &eval, &rel)?;
        if image.values.values().any(|p| !p.is_zero()) {
            random_ok = false;
        }
    }

    // Rank of the evaluated standard monomials over Q.
    let mut evaluated = Vec::new();
    for m in &standard {
        let mut mono = PresPoly::zero();
        mono.add_term(m.clone(), LaurentPoly::one(0));
        evaluated.push(evaluate_presentation_poly(fan, &eval, &mono)?);
    }
    let eval_image_rank = piecewise_rank(&evaluated);

    // Localization congruences: generator images and standard-monomial
    // images lie in the curve ring of the fan.
    let curve_model = CurveModel::from_fan(fan)?;
    let mut images_ok = true;
    for img in eval.images.iter().chain(evaluated.iter()) {
        let relabeled = PiecewiseElement::new(
            img.values
                .iter()
                .map(|(l, p)| {
                    let Label::Cone { sigma } = l else { unreachable!() };
                    (Label::Point(sigma + 1), p.clone())
                })
                .collect(),
        );
        if !curve_model.member(&relabeled)? {
            images_ok = false;
        }
    }

    Ok(ToricVerification {
        quotient_rank,
        eval_image_rank,
        max_cones: fan.max_cones.len(),
        relations_vanish,
        random_character_relations_vanish: random_ok,
        images_satisfy_curve_congruences: images_ok,
    })
}

/// Rank over Q of a family of piecewise elements, flattening the values
/// over (label, exponent) coordinates.
pub fn piecewise_rank(elements: &[PiecewiseElement]) -> usize {
    let mut coords: BTreeSet<(Label, LatticeVector)> = BTreeSet::new();
    for e in elements {
        for (l, p) in &e.values {
            for (x, _) in p.terms() {
                coords.insert((l.clone(), x.clone()));
            }
        }
    }
    let coords: Vec<(Label, LatticeVector)> = coords.into_iter().collect();
    let index: BTreeMap<&(Label, LatticeVector), usize> =
        coords.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut matrix = QMatrix::new(coords.len());
    for e in elements {
        let mut row = vec![BigRational::zero(); coords.len()];
        for (l, p) in &e.values {
            for (x, c) in p.terms() {
                row[index[&(l.clone(), x.clone())]] = BigRational::from_integer(c.clone());
            }
        }
        matrix.push_row(row);
    }
    matrix.rank()
}

/// Flag-bundle presentation: a free base module on the Steinberg basis of
/// `R(T)^{W_I}`, multiplication reduced through the structure constants
/// with invariant coefficients pushed into the base.
#[derive(Debug, Clone, Serialize)]
pub struct FlagPresentation {
    pub base: BaseRingSpec,
    /// 1-based indices of the parabolic subset `I`.
    pub parabolic: Vec<usize>,
    /// Basis labels: (cell subset as 1-based indices, reduced word).
    pub basis: Vec<(Vec<usize>, Vec<usize>)>,
    /// Multiplication table: for each basis pair, the reduced coefficients.
    pub multiplication: Vec<FlagProduct>,
    /// The defining relations: one per fundamental invariant, recording the
    /// invariant and its base image.
    pub relations: Vec<FlagRelation>,
    #[serde(skip)]
    group: WeylGroup,
    #[serde(skip)]
    expansion_subset: Subset,
    #[serde(skip)]
    basis_elements: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FlagProduct {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub terms: Vec<FlagProductTerm>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FlagProductTerm {
    pub basis_word: Vec<usize>,
    pub coeff: LaurentPoly,
}

#[derive(Debug, Clone, Serialize)]
pub struct FlagRelation {
    pub invariant: LaurentPoly,
    pub base_image: LaurentPoly,
}

/// Build the flag presentation for the parabolic subset `I ⊆ Δ`.
pub fn flag_presentation(
    group: &WeylGroup,
    parabolic: Subset,
    base: &BaseRingSpec,
) -> Result<FlagPresentation> {
    base.validate()?;
    let r = group.datum.semisimple_rank;
    let expansion_subset = parabolic.complement(r);
    let basis = SteinbergBasis::modified(group, expansion_subset);

    let mut multiplication = Vec::new();
    for a in &basis.entries {
        for b in &basis.entries {
            let expansion = structure_constants(group, a.v, b.v)?;
            let mut terms = Vec::new();
            for (w, coeff) in &expansion.coefficients {
                // The product of two W_I-minimal basis elements expands over
                // the full group basis; coefficients at elements outside
                // W^I are forced into the base through the quotient
                // relations, but for v, v' ∈ W^I the expansion stays inside
                // (the cells C^J with J ⊆ I_v ∪ I_{v'} all lie in W^I).
                terms.push(FlagProductTerm {
                    basis_word: crate::weyl::external_word(&group.element(*w).word),
                    coeff: base.euler_class(coeff),
                });
                if basis.position_of(*w).is_none() {
                    return Err(Error::internal(
                        "structure constants escaped the parabolic basis",
                    ));
                }
            }
            multiplication.push(FlagProduct {
                left: crate::weyl::external_word(&group.element(a.v).word),
                right: crate::weyl::external_word(&group.element(b.v).word),
                terms,
            });
        }
    }

    let relations = (0..r)
        .map(|i| {
            let invariant = full_orbit_sum(group, &group.datum.fundamental_weight(i));
            let base_image = base.euler_class(&invariant);
            FlagRelation { invariant, base_image }
        })
        .collect();

    Ok(FlagPresentation {
        base: base.clone(),
        parabolic: parabolic.external_indices(),
        basis: basis
            .entries
            .iter()
            .map(|e| {
                (
                    e.cell.external_indices(),
                    crate::weyl::external_word(&group.element(e.v).word),
                )
            })
            .collect(),
        multiplication,
        relations,
        group: group.clone(),
        expansion_subset,
        basis_elements: basis.entries.iter().map(|e| e.v).collect(),
    })
}

impl FlagPresentation {
    /// Rank of the quotient over the base: the Steinberg basis is free.
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Reduce a `W_I`-invariant ring element to base coefficients over the
    /// basis: expand in the Steinberg basis and push the `R(T)^W`
    /// coefficients through the base map.
    pub fn reduce(&self, g: &LaurentPoly) -> Result<Vec<LaurentPoly>> {
        let coeffs = crate::steinberg::expand_in_basis(g, &self.group, self.expansion_subset)?;
        Ok(self
            .basis_elements
            .iter()
            .map(|v| {
                coeffs
                    .get(v)
                    .map(|c| self.base.euler_class(c))
                    .unwrap_or_else(LaurentPoly::zero)
            })
            .collect())
    }
}

/// A presentation of either kind, as produced by the CLI.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Presentation {
    Toric(ToricPresentation),
    Flag(FlagPresentation),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{p1_fan, p1xp1_fan, p2_fan};
    use crate::lattice::{RootDatum, RootSystemType};

    fn v(coords: &[i64]) -> LatticeVector {
        LatticeVector(coords.to_vec())
    }

    #[test]
    fn p1_presentation_over_the_point_base() {
        let pres = toric_presentation(&p1_fan(), &BaseRingSpec::trivial()).unwrap();
        assert_eq!(pres.generators, vec!["x1", "x2"]);
        assert_eq!(pres.non_face_relations.len(), 1);
        assert_eq!(pres.character_relations.len(), 1);
        // x1 x2
        let nf = &pres.non_face_relations[0];
        assert_eq!(nf.terms.len(), 1);
        assert!(nf.terms.contains_key(&vec![1, 1]));
        // (1 - x1) - (1 - x2) = x2 - x1.
        let rel = &pres.character_relations[0];
        let d = 2;
        let expected = PresPoly::generator(d, 1, 0).sub(&PresPoly::generator(d, 0, 0));
        assert_eq!(rel, &expected);
    }

    #[test]
    fn p1_presentation_with_nontrivial_character() {
        // ξ_u = t: char rank 1, identity map on the rank-1 lattice.
        let base = BaseRingSpec {
            char_rank: 1,
            char_map: vec![vec![1]],
            euler: EulerMap::Augmentation,
        };
        let pres = toric_presentation(&p1_fan(), &base).unwrap();
        let rel = &pres.character_relations[0];
        // (1 - x1) - t(1 - x2): constant term 1 - t.
        let constant = rel.terms.get(&vec![0, 0]).unwrap();
        let expected = LaurentPoly::one(1).sub(&LaurentPoly::monomial(v(&[1])));
        assert_eq!(constant, &expected);
        let x2_coeff = rel.terms.get(&vec![0, 1]).unwrap();
        assert_eq!(x2_coeff, &LaurentPoly::monomial(v(&[1])));
    }

    #[test]
    fn p2_presentation_shape() {
        let pres = toric_presentation(&p2_fan(), &BaseRingSpec::trivial()).unwrap();
        assert_eq!(pres.non_face_relations.len(), 1);
        assert!(pres.non_face_relations[0].terms.contains_key(&vec![1, 1, 1]));
        assert_eq!(pres.character_relations.len(), 2);
    }

    #[test]
    fn non_complete_fan_is_rejected() {
        let half = Fan::new(1, vec![v(&[1])], vec![vec![0]]).unwrap();
        assert!(toric_presentation(&half, &BaseRingSpec::trivial()).is_err());
    }

    #[test]
    fn sign_calibration_picks_plus_one() {
        let eval = toric_evaluation_map(&p1_fan()).unwrap();
        assert_eq!(eval.sign, 1);
        // x1 at σ0 = 1 - e^{m} with m = 1; zero at σ1.
        let at0 = eval.images[0].get(&Label::Cone { sigma: 0 }).unwrap();
        assert_eq!(
            at0,
            &LaurentPoly::one(1).sub(&LaurentPoly::monomial(v(&[1])))
        );
        assert!(eval.images[0]
            .get(&Label::Cone { sigma: 1 })
            .unwrap()
            .is_zero());
    }

    #[test]
    fn relation_images_vanish_for_p2() {
        let fan = p2_fan();
        let pres = toric_presentation(&fan, &BaseRingSpec::tautological(2)).unwrap();
        let eval = toric_evaluation_map(&fan).unwrap();
        for rel in pres.relations() {
            let image = evaluate_presentation_poly(&fan, &eval, rel).unwrap();
            assert!(image.values.values().all(|p| p.is_zero()));
        }
    }

    #[test]
    fn quotient_ranks_match_fixed_point_counts() {
        for (fan, expected) in [(p1_fan(), 2), (p2_fan(), 3), (p1xp1_fan(), 4)] {
            let pres = toric_presentation(&fan, &BaseRingSpec::trivial()).unwrap();
            assert_eq!(toric_quotient_rank(&pres).unwrap(), expected);
        }
    }

    #[test]
    fn quotient_rank_requires_point_base() {
        let pres = toric_presentation(&p1_fan(), &BaseRingSpec::tautological(1)).unwrap();
        assert!(toric_quotient_rank(&pres).is_err());
    }

    #[test]
    fn verify_toric_cross_checks() {
        for fan in [p1_fan(), p2_fan(), p1xp1_fan()] {
            let report = verify_toric(&fan, 0).unwrap();
            assert!(report.pass(), "{report:?}");
        }
    }

    fn flag_group(t: RootSystemType) -> WeylGroup {
        WeylGroup::new(RootDatum::new(t, 0))
    }

    #[test]
    fn sl2_full_flag_reduction() {
        let group = flag_group(RootSystemType::A1);
        let pres =
            flag_presentation(&group, Subset::empty(), &BaseRingSpec::trivial()).unwrap();
        assert_eq!(pres.rank(), 2);
        // e^ω reduces to 2·f_1 - f_s.
        let reduced = pres.reduce(&LaurentPoly::monomial(v(&[1]))).unwrap();
        assert_eq!(reduced[0], LaurentPoly::constant(0, 2));
        assert_eq!(reduced[1], LaurentPoly::constant(0, -1));
    }

    #[test]
    fn flag_ranks() {
        let a1 = flag_group(RootSystemType::A1);
        assert_eq!(
            flag_presentation(&a1, Subset::empty(), &BaseRingSpec::trivial())
                .unwrap()
                .rank(),
            2
        );
        let a2 = flag_group(RootSystemType::A2);
        assert_eq!(
            flag_presentation(&a2, Subset::empty(), &BaseRingSpec::trivial())
                .unwrap()
                .rank(),
            6
        );
        assert_eq!(
            flag_presentation(&a2, Subset::from_indices(&[0]), &BaseRingSpec::trivial())
                .unwrap()
                .rank(),
            3
        );
        // I = Δ: K(ℰ(G/G)) = K(ℬ).
        assert_eq!(
            flag_presentation(&a2, a2.datum.delta(), &BaseRingSpec::trivial())
                .unwrap()
                .rank(),
            1
        );
    }

    #[test]
    fn flag_multiplication_table_is_euler_reduced() {
        let group = flag_group(RootSystemType::A1);
        let pres =
            flag_presentation(&group, Subset::empty(), &BaseRingSpec::trivial()).unwrap();
        // f_s · f_s = ε(e^ω + e^{-ω})·f_s + ε(-1)·f_1 = 2 f_s - f_1.
        let prod = pres
            .multiplication
            .iter()
            .find(|p| p.left == vec![1] && p.right == vec![1])
            .unwrap();
        let coeffs: BTreeMap<Vec<usize>, &LaurentPoly> = prod
            .terms
            .iter()
            .map(|t| (t.basis_word.clone(), &t.coeff))
            .collect();
        assert_eq!(coeffs[&vec![]], &LaurentPoly::constant(0, -1));
        assert_eq!(coeffs[&vec![1]], &LaurentPoly::constant(0, 2));
    }
}
