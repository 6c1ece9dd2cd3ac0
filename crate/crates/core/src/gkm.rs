//! Fixed-point-indexed rings cut out by divisibility congruences.
//!
//! Three models share one piecewise-element type:
//!
//! * the curve model — one value per fixed point, with
//!   `(1 - e^{-χ}) | y_i - y_j` along each invariant curve;
//! * the wonderful model — values over `𝓕₊(l) × W × W` in the doubled
//!   lattice `Λ⊕Λ`, with reflection congruences inside each cone and facet
//!   congruences between adjacent cones;
//! * the Z model — one doubled-lattice value per cone of `𝓕₊(l)`, first
//!   factor the `T̃×1` variables, second factor the diagonal variables.

use crate::error::{Error, Result};
use crate::fan::{facet_orthogonal_to_root, Fan};
use crate::lattice::LatticeVector;
use crate::laurent::LaurentPoly;
use crate::weyl::WeylGroup;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Label of one fixed point in whichever model is in play.
///
/// Untagged serde representation; the wonderful variant is listed first so
/// that its records are not swallowed by the plain cone variant.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    /// Wonderful model: cone index plus a pair of Weyl-element words.
    Wonderful {
        sigma: usize,
        u: Vec<usize>,
        v: Vec<usize>,
    },
    /// Z model: maximal cone index of `𝓕₊(l)`.
    Cone { sigma: usize },
    /// Curve model: fixed point `k ∈ 1..=m`.
    Point(usize),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Point(k) => write!(f, "x{k}"),
            Label::Cone { sigma } => write!(f, "σ{sigma}"),
            Label::Wonderful { sigma, u, v } => {
                write!(f, "(σ{sigma},u={u:?},v={v:?})")
            }
        }
    }
}

/// A family of ring values indexed by fixed-point labels.
///
/// Serialized as a sorted list of `{label, poly}` records (JSON object keys
/// must be strings, and the label structure matters).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseElement {
    pub values: BTreeMap<Label, LaurentPoly>,
}

#[derive(Serialize, Deserialize)]
struct ValueRecord {
    label: Label,
    poly: LaurentPoly,
}

impl Serialize for PiecewiseElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            values: Vec<WireRecord<'a>>,
        }
        #[derive(Serialize)]
        struct WireRecord<'a> {
            label: &'a Label,
            poly: &'a LaurentPoly,
        }
        Wire {
            values: self
                .values
                .iter()
                .map(|(label, poly)| WireRecord { label, poly })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PiecewiseElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            values: Vec<ValueRecord>,
        }
        let wire = Wire::deserialize(d)?;
        let mut values = BTreeMap::new();
        for rec in wire.values {
            if values.insert(rec.label, rec.poly).is_some() {
                return Err(serde::de::Error::custom("duplicate label"));
            }
        }
        Ok(PiecewiseElement { values })
    }
}

impl PiecewiseElement {
    pub fn new(values: BTreeMap<Label, LaurentPoly>) -> Self {
        PiecewiseElement { values }
    }

    /// The constant (diagonally embedded) family over the given labels.
    pub fn diagonal(labels: &[Label], value: &LaurentPoly) -> Self {
        PiecewiseElement {
            values: labels.iter().map(|l| (l.clone(), value.clone())).collect(),
        }
    }

    pub fn get(&self, label: &Label) -> Result<&LaurentPoly> {
        self.values
            .get(label)
            .ok_or_else(|| Error::input(format!("element is missing the label {label}")))
    }

    fn zip_with(
        &self,
        other: &PiecewiseElement,
        op: impl Fn(&LaurentPoly, &LaurentPoly) -> LaurentPoly,
    ) -> Result<PiecewiseElement> {
        if self.values.len() != other.values.len()
            || self.values.keys().zip(other.values.keys()).any(|(a, b)| a != b)
        {
            return Err(Error::input("piecewise elements have different label sets"));
        }
        Ok(PiecewiseElement {
            values: self
                .values
                .iter()
                .map(|(l, p)| (l.clone(), op(p, &other.values[l])))
                .collect(),
        })
    }

    pub fn pointwise_add(&self, other: &PiecewiseElement) -> Result<PiecewiseElement> {
        self.zip_with(other, LaurentPoly::add)
    }

    pub fn pointwise_mul(&self, other: &PiecewiseElement) -> Result<PiecewiseElement> {
        self.zip_with(other, LaurentPoly::mul)
    }

    pub fn pointwise_sub(&self, other: &PiecewiseElement) -> Result<PiecewiseElement> {
        self.zip_with(other, LaurentPoly::sub)
    }

    /// Multiply every value by a global scalar from the coefficient ring.
    pub fn scale_global(&self, scalar: &LaurentPoly) -> PiecewiseElement {
        PiecewiseElement {
            values: self
                .values
                .iter()
                .map(|(l, p)| (l.clone(), p.mul(scalar)))
                .collect(),
        }
    }
}

/// A congruence that failed, for diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub description: String,
}

/// One `T`-invariant curve: its endpoints and the character of the action.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveDatum {
    /// 1-based endpoint labels.
    pub i: usize,
    pub j: usize,
    pub chi: LatticeVector,
}

/// The curve model: `m` fixed points and a finite curve list.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveModel {
    pub points: usize,
    pub rank: usize,
    pub curves: Vec<CurveDatum>,
}

impl CurveModel {
    pub fn new(points: usize, rank: usize, curves: Vec<CurveDatum>) -> Result<Self> {
        for c in &curves {
            if c.i == c.j {
                return Err(Error::input("curve endpoints must differ"));
            }
            if c.i == 0 || c.i > points || c.j == 0 || c.j > points {
                return Err(Error::input("curve endpoint outside 1..=points"));
            }
            if c.chi.is_zero() {
                return Err(Error::input("curve character must be nonzero"));
            }
            if c.chi.rank() != rank {
                return Err(Error::input("curve character rank mismatch"));
            }
        }
        Ok(CurveModel { points, rank, curves })
    }

    /// The curve model of a complete smooth fan: fixed points are maximal
    /// cones, curves the adjacent pairs with their facet normals.
    pub fn from_fan(fan: &Fan) -> Result<Self> {
        let curves = fan
            .adjacent_pairs()
            .into_iter()
            .map(|(a, b, chi)| CurveDatum { i: a + 1, j: b + 1, chi })
            .collect();
        CurveModel::new(fan.max_cones.len(), fan.rank, curves)
    }

    pub fn labels(&self) -> Vec<Label> {
        (1..=self.points).map(Label::Point).collect()
    }

    pub fn validate_element(&self, e: &PiecewiseElement) -> Result<()> {
        let expected = self.labels();
        if e.values.len() != expected.len()
            || !expected.iter().all(|l| e.values.contains_key(l))
        {
            return Err(Error::input("element labels do not match the curve model"));
        }
        Ok(())
    }

    /// Membership in the single-curve ring `𝒴_ij`.
    pub fn member_of_curve(&self, e: &PiecewiseElement, curve: &CurveDatum) -> Result<bool> {
        self.validate_element(e)?;
        let yi = e.get(&Label::Point(curve.i))?;
        let yj = e.get(&Label::Point(curve.j))?;
        Ok(yi.sub(yj).divide_exact(&curve.chi)?.is_some())
    }

    /// Membership in `𝒴`: every curve congruence holds.
    pub fn member(&self, e: &PiecewiseElement) -> Result<bool> {
        for c in &self.curves {
            if !self.member_of_curve(e, c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn violations(&self, e: &PiecewiseElement) -> Result<Vec<Violation>> {
        let mut out = Vec::new();
        for c in &self.curves {
            if !self.member_of_curve(e, c)? {
                out.push(Violation {
                    description: format!(
                        "(1 - e^-χ) with χ={} does not divide y{} - y{}",
                        c.chi, c.i, c.j
                    ),
                });
            }
        }
        Ok(out)
    }
}

/// The wonderful model over `𝓕₊(l) × W × W` with doubled-lattice values.
#[derive(Debug, Clone)]
pub struct WonderfulModel {
    pub group: WeylGroup,
    pub fan_plus: Fan,
}

impl WonderfulModel {
    pub fn new(group: WeylGroup, fan_plus: Fan) -> Self {
        WonderfulModel { group, fan_plus }
    }

    pub fn doubled_rank(&self) -> usize {
        2 * self.group.datum.rank()
    }

    pub fn labels(&self) -> Vec<Label> {
        let mut out = Vec::new();
        for sigma in 0..self.fan_plus.max_cones.len() {
            for u in 0..self.group.order() {
                for v in 0..self.group.order() {
                    out.push(self.label_for(sigma, u, v));
                }
            }
        }
        out.sort();
        out
    }

    fn label_for(&self, sigma: usize, u: usize, v: usize) -> Label {
        Label::Wonderful {
            sigma,
            u: crate::weyl::external_word(&self.group.element(u).word),
            v: crate::weyl::external_word(&self.group.element(v).word),
        }
    }

    pub fn validate_element(&self, e: &PiecewiseElement) -> Result<()> {
        let expected = self.labels();
        if e.values.len() != expected.len()
            || !expected.iter().all(|l| e.values.contains_key(l))
        {
            return Err(Error::input(
                "element labels do not match the wonderful model",
            ));
        }
        Ok(())
    }

    pub fn member(&self, e: &PiecewiseElement) -> Result<bool> {
        Ok(self.violations(e)?.is_empty())
    }

    /// Congruences: (i) for every simple root `α` with a facet of `σ`
    /// orthogonal to it, `f_{σ,us_α,vs_α} ≡ f_{σ,u,v}` mod
    /// `1 - e^{-(u(α),v(α))}`; (ii) for adjacent cones with facet normal
    /// `χ`, `f_{σ,u,v} ≡ f_{σ',u,v}` mod `1 - e^{-(χ,-χ)}`.
    pub fn violations(&self, e: &PiecewiseElement) -> Result<Vec<Violation>> {
        self.validate_element(e)?;
        let mut out = Vec::new();
        let group = &self.group;
        let datum = &group.datum;

        for sigma in 0..self.fan_plus.max_cones.len() {
            for i in 0..datum.semisimple_rank {
                let alpha = datum.simple_root(i);
                if !facet_orthogonal_to_root(&self.fan_plus, sigma, group, &alpha) {
                    continue;
                }
                let s = group.simple_reflection(i);
                for u in 0..group.order() {
                    for v in 0..group.order() {
                        let us = group.compose(u, s);
                        let vs = group.compose(v, s);
                        let lhs = e.get(&self.label_for(sigma, us, vs))?;
                        let rhs = e.get(&self.label_for(sigma, u, v))?;
                        let chi = LatticeVector::pair(
                            &group.element(u).act(&alpha),
                            &group.element(v).act(&alpha),
                        );
                        if lhs.sub(rhs).divide_exact(&chi)?.is_none() {
                            out.push(Violation {
                                description: format!(
                                    "congruence (i) fails at σ{sigma}, u={:?}, v={:?}, α{}",
                                    crate::weyl::external_word(&group.element(u).word),
                                    crate::weyl::external_word(&group.element(v).word),
                                    i + 1
                                ),
                            });
                        }
                    }
                }
            }
        }

        for (a, b, chi) in self.fan_plus.adjacent_pairs() {
            // χ lifts to the doubled lattice antidiagonally: trivial on the
            // diagonal torus.
            let full_chi = embed_cocharacter_normal(group, &chi);
            let doubled = LatticeVector::pair(&full_chi, &(-&full_chi));
            for u in 0..group.order() {
                for v in 0..group.order() {
                    let lhs = e.get(&self.label_for(a, u, v))?;
                    let rhs = e.get(&self.label_for(b, u, v))?;
                    if lhs.sub(rhs).divide_exact(&doubled)?.is_none() {
                        out.push(Violation {
                            description: format!(
                                "congruence (ii) fails between σ{a} and σ{b} at u={:?}, v={:?}",
                                crate::weyl::external_word(&group.element(u).word),
                                crate::weyl::external_word(&group.element(v).word)
                            ),
                        });
                    }
                }
            }
        }
        Ok(out)
    }
}

/// A facet normal lives in the semisimple coordinates of `Λ`; extend it by
/// zero central coordinates.
pub fn embed_cocharacter_normal(group: &WeylGroup, chi: &LatticeVector) -> LatticeVector {
    let mut full = vec![0i64; group.datum.rank()];
    full[group.datum.central_rank..].copy_from_slice(&chi.0);
    LatticeVector(full)
}

/// The Z model over `𝓕₊(l)` with doubled-lattice values: first factor the
/// `T̃×1` variables, second factor the diagonal variables.
#[derive(Debug, Clone)]
pub struct ZModel {
    pub group: WeylGroup,
    pub fan_plus: Fan,
}

impl ZModel {
    pub fn new(group: WeylGroup, fan_plus: Fan) -> Self {
        ZModel { group, fan_plus }
    }

    pub fn labels(&self) -> Vec<Label> {
        (0..self.fan_plus.max_cones.len())
            .map(|sigma| Label::Cone { sigma })
            .collect()
    }

    pub fn validate_element(&self, e: &PiecewiseElement) -> Result<()> {
        let expected = self.labels();
        if e.values.len() != expected.len()
            || !expected.iter().all(|l| e.values.contains_key(l))
        {
            return Err(Error::input("element labels do not match the Z model"));
        }
        Ok(())
    }

    /// The operator `(1, s_α)`: acts on the second (diagonal) factor only.
    pub fn second_factor_reflection(&self, i: usize, p: &LaurentPoly) -> LaurentPoly {
        let rank = self.group.datum.rank();
        let s = self.group.element(self.group.simple_reflection(i)).clone();
        p.map_exponents(|x| {
            let first = LatticeVector(x.0[..rank].to_vec());
            let second = LatticeVector(x.0[rank..].to_vec());
            LatticeVector::pair(&first, &s.act(&second))
        })
    }

    pub fn member(&self, e: &PiecewiseElement) -> Result<bool> {
        Ok(self.violations(e)?.is_empty())
    }

    /// Congruences: (i) for every simple root `α` with a facet of `σ`
    /// orthogonal to it, `(1,s_α) f_σ ≡ f_σ` mod `1 - e^{-(α,0)}`;
    /// (ii) for adjacent cones with facet normal `χ`,
    /// `f_σ ≡ f_σ'` mod `1 - e^{-(χ,0)}` (after the change of variables the
    /// facet character lives purely in the first factor).
    pub fn violations(&self, e: &PiecewiseElement) -> Result<Vec<Violation>> {
        self.validate_element(e)?;
        let mut out = Vec::new();
        let group = &self.group;
        let datum = &group.datum;
        let zero = LatticeVector::zero(datum.rank());

        for sigma in 0..self.fan_plus.max_cones.len() {
            let value = e.get(&Label::Cone { sigma })?;
            for i in 0..datum.semisimple_rank {
                let alpha = datum.simple_root(i);
                if !facet_orthogonal_to_root(&self.fan_plus, sigma, group, &alpha) {
                    continue;
                }
                let modulus = LatticeVector::pair(&alpha, &zero);
                let moved = self.second_factor_reflection(i, value);
                if moved.sub(value).divide_exact(&modulus)?.is_none() {
                    out.push(Violation {
                        description: format!("congruence (i) fails at σ{sigma} for α{}", i + 1),
                    });
                }
            }
        }

        for (a, b, chi) in self.fan_plus.adjacent_pairs() {
            let full_chi = embed_cocharacter_normal(group, &chi);
            let modulus = LatticeVector::pair(&full_chi, &zero);
            let lhs = e.get(&Label::Cone { sigma: a })?;
            let rhs = e.get(&Label::Cone { sigma: b })?;
            if lhs.sub(rhs).divide_exact(&modulus)?.is_none() {
                out.push(Violation {
                    description: format!("congruence (ii) fails between σ{a} and σ{b}"),
                });
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{p1_fan, p2_fan, weyl_chamber_fan};
    use crate::lattice::{RootDatum, RootSystemType};
    use crate::laurent::one_minus_exp_neg;

    fn v(coords: &[i64]) -> LatticeVector {
        LatticeVector(coords.to_vec())
    }

    fn e(coords: &[i64]) -> LaurentPoly {
        LaurentPoly::monomial(v(coords))
    }

    fn p1_curve_model() -> CurveModel {
        CurveModel::from_fan(&p1_fan()).unwrap()
    }

    #[test]
    fn constant_families_are_members() {
        let model = p1_curve_model();
        let one = PiecewiseElement::diagonal(&model.labels(), &LaurentPoly::one(1));
        assert!(model.member(&one).unwrap());

        let model2 = CurveModel::from_fan(&p2_fan()).unwrap();
        let any = PiecewiseElement::diagonal(&model2.labels(), &e(&[3, -2]));
        assert!(model2.member(&any).unwrap());
    }

    #[test]
    fn p1_membership_examples() {
        // Use χ = α with α = (2) to exercise a non-primitive divisor.
        let model = CurveModel::new(
            2,
            1,
            vec![CurveDatum { i: 1, j: 2, chi: v(&[2]) }],
        )
        .unwrap();
        let mut ok = BTreeMap::new();
        ok.insert(Label::Point(1), LaurentPoly::one(1));
        ok.insert(Label::Point(2), e(&[-2]));
        assert!(model.member(&PiecewiseElement::new(ok)).unwrap());

        let mut bad = BTreeMap::new();
        bad.insert(Label::Point(1), LaurentPoly::one(1));
        bad.insert(Label::Point(2), e(&[1]));
        assert!(!model.member(&PiecewiseElement::new(bad)).unwrap());
    }

    #[test]
    fn single_curve_ring_ignores_other_labels() {
        // Three points, curves (1,2) and (2,3).
        let model = CurveModel::new(
            3,
            1,
            vec![
                CurveDatum { i: 1, j: 2, chi: v(&[1]) },
                CurveDatum { i: 2, j: 3, chi: v(&[1]) },
            ],
        )
        .unwrap();
        let mut values = BTreeMap::new();
        values.insert(Label::Point(1), e(&[1]));
        values.insert(Label::Point(2), LaurentPoly::zero());
        values.insert(Label::Point(3), one_minus_exp_neg(&v(&[1])).neg());
        let elem = PiecewiseElement::new(values);
        assert!(!model.member_of_curve(&elem, &model.curves[0]).unwrap());
        assert!(model.member_of_curve(&elem, &model.curves[1]).unwrap());
        assert!(!model.member(&elem).unwrap());
    }

    #[test]
    fn label_mismatch_is_an_input_error() {
        let model = p1_curve_model();
        let short = PiecewiseElement::new(BTreeMap::from([(
            Label::Point(1),
            LaurentPoly::one(1),
        )]));
        assert!(model.member(&short).is_err());
    }

    fn a1_wonderful() -> WonderfulModel {
        let group = WeylGroup::new(RootDatum::new(RootSystemType::A1, 0));
        let (plus, _) = weyl_chamber_fan(&group, None).unwrap();
        WonderfulModel::new(group, plus)
    }

    #[test]
    fn wonderful_constant_family_is_member() {
        let model = a1_wonderful();
        assert_eq!(model.labels().len(), 4);
        let one = PiecewiseElement::diagonal(&model.labels(), &LaurentPoly::one(2));
        assert!(model.member(&one).unwrap());
    }

    #[test]
    fn wonderful_congruence_i_detects_divisibility() {
        let model = a1_wonderful();
        let group = model.group.clone();
        let s = group.simple_reflection(0);
        // Family: zero everywhere except the (σ, s, s) slot, which carries
        // 1 - e^{-(α,α)}: the difference against (σ,1,1) is divisible.
        let alpha = group.datum.simple_root(0);
        let chi = LatticeVector::pair(&alpha, &alpha);
        let mut values: BTreeMap<Label, LaurentPoly> = model
            .labels()
            .iter()
            .map(|l| (l.clone(), LaurentPoly::zero()))
            .collect();
        values.insert(
            Label::Wonderful {
                sigma: 0,
                u: crate::weyl::external_word(&group.element(s).word),
                v: crate::weyl::external_word(&group.element(s).word),
            },
            one_minus_exp_neg(&chi),
        );
        let elem = PiecewiseElement::new(values.clone());
        assert!(model.member(&elem).unwrap());

        // A nonzero constant in that slot is not divisible.
        values.insert(
            Label::Wonderful {
                sigma: 0,
                u: crate::weyl::external_word(&group.element(s).word),
                v: crate::weyl::external_word(&group.element(s).word),
            },
            LaurentPoly::one(2),
        );
        assert!(!model.member(&PiecewiseElement::new(values)).unwrap());
    }

    fn a1_z_model() -> ZModel {
        let group = WeylGroup::new(RootDatum::new(RootSystemType::A1, 0));
        let (plus, _) = weyl_chamber_fan(&group, None).unwrap();
        ZModel::new(group, plus)
    }

    #[test]
    fn z_constant_family_is_member() {
        let model = a1_z_model();
        let one = PiecewiseElement::diagonal(&model.labels(), &LaurentPoly::one(2));
        assert!(model.member(&one).unwrap());
    }

    #[test]
    fn z_congruence_example() {
        let model = a1_z_model();
        // f = e^{(0,ω)} + e^{(-α,-ω)}: the (1,s_α)-difference is divisible
        // by 1 - e^{-(α,0)}.
        let f = e(&[0, 1]).add(&e(&[-2, -1]));
        let elem = PiecewiseElement::diagonal(&model.labels(), &f);
        assert!(model.member(&elem).unwrap());

        // A bare second-factor character is not congruent.
        let bad = PiecewiseElement::diagonal(&model.labels(), &e(&[0, 1]));
        assert!(!model.member(&bad).unwrap());
    }

    #[test]
    fn z_ring_is_closed_under_pointwise_ops() {
        let model = a1_z_model();
        let members = [
            PiecewiseElement::diagonal(&model.labels(), &e(&[0, 1]).add(&e(&[-2, -1]))),
            PiecewiseElement::diagonal(&model.labels(), &LaurentPoly::constant(2, 5)),
            PiecewiseElement::diagonal(&model.labels(), &e(&[1, 0])),
        ];
        for a in &members {
            assert!(model.member(a).unwrap());
            for b in &members {
                assert!(model.member(&a.pointwise_add(b).unwrap()).unwrap());
                assert!(model.member(&a.pointwise_mul(b).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn piecewise_ops_respect_ring_identities() {
        let model = p1_curve_model();
        let labels = model.labels();
        let zero = PiecewiseElement::diagonal(&labels, &LaurentPoly::zero());
        let one = PiecewiseElement::diagonal(&labels, &LaurentPoly::one(1));
        let x = PiecewiseElement::new(BTreeMap::from([
            (Label::Point(1), e(&[2])),
            (Label::Point(2), e(&[-1])),
        ]));
        assert_eq!(x.pointwise_add(&zero).unwrap(), x);
        assert_eq!(x.pointwise_mul(&one).unwrap(), x);
        let y = PiecewiseElement::new(BTreeMap::from([
            (Label::Point(1), one_minus_exp_neg(&v(&[1]))),
            (Label::Point(2), LaurentPoly::constant(1, 3)),
        ]));
        assert_eq!(
            x.pointwise_mul(&y).unwrap(),
            y.pointwise_mul(&x).unwrap()
        );
    }

    #[test]
    fn piecewise_element_json_roundtrip() {
        let model = a1_wonderful();
        let elem = PiecewiseElement::diagonal(&model.labels(), &e(&[1, -1]));
        let text = serde_json::to_string(&elem).unwrap();
        let back: PiecewiseElement = serde_json::from_str(&text).unwrap();
        assert_eq!(elem, back);
    }
}
