//! Aggregated verification suites with deterministic, seed-stamped reports.
//!
//! Every sampled check draws from a seeded generator, every listing is
//! sorted, and no timestamps enter the output, so a report is byte-stable
//! across runs with the same seed.

use crate::error::Result;
use crate::fan::{p1_fan, p1xp1_fan, p2_fan, positive_chamber_cone, Fan};
use crate::gkm::{CurveModel, Label, PiecewiseElement};
use crate::lattice::{LatticeVector, RootDatum, RootSystemType, Subset};
use crate::laurent::LaurentPoly;
use crate::presentation::{
    flag_presentation, piecewise_rank, verify_toric, BaseRingSpec,
};
use crate::regcomp::{lambda_factor, RegCompModel};
use crate::rng::SplitMix64;
use crate::steinberg::{structure_constants, SteinbergBasis};
use crate::weyl::WeylGroup;
use num_bigint::BigInt;
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;

/// One verdict line of a report.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), pass, detail: detail.into() }
    }
}

/// A full verification report.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let verdict = if c.pass { "PASS" } else { "FAIL" };
            writeln!(f, "{verdict} {}: {}", c.name, c.detail)?;
        }
        write!(
            f,
            "RESULT: {} ({} checks, seed {})",
            if self.pass() { "OK" } else { "FAIL" },
            self.checks.len(),
            self.seed
        )
    }
}

/// Weyl combinatorics: group order, the coset-size identity for every
/// subset, and the cell partition.
pub fn verify_weyl(group: &WeylGroup) -> Vec<Check> {
    let mut checks = Vec::new();
    let label = group.datum.label;
    let expected = label.weyl_order();
    checks.push(Check::new(
        format!("weyl.{label}.order"),
        group.order() == expected,
        format!("|W| = {} (expected {expected})", group.order()),
    ));

    let mut coset_ok = true;
    for i_set in group.datum.delta().subsets() {
        let reps = group.minimal_coset_reps(i_set).len();
        let sub = group.parabolic_subgroup(i_set).len();
        if reps * sub != group.order() {
            coset_ok = false;
        }
    }
    checks.push(Check::new(
        format!("weyl.{label}.coset_identity"),
        coset_ok,
        "|W^I|·|W_I| = |W| for every I",
    ));

    let mut seen = BTreeSet::new();
    let mut disjoint = true;
    let mut total = 0;
    for (_, cell) in group.c_partition() {
        for e in cell {
            if !seen.insert(e) {
                disjoint = false;
            }
            total += 1;
        }
    }
    checks.push(Check::new(
        format!("weyl.{label}.cell_partition"),
        disjoint && total == group.order(),
        format!("cells are disjoint and cover all {} elements", group.order()),
    ));
    checks
}

/// Steinberg layer: basis shape, invariance, and (at small scale) the full
/// structure-constant table certified by exact re-multiplication.
pub fn verify_steinberg(group: &WeylGroup) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let label = group.datum.label;
    let basis = SteinbergBasis::full(group);
    checks.push(Check::new(
        format!("steinberg.{label}.basis_size"),
        basis.len() == group.order(),
        format!("{} basis elements for |W| = {}", basis.len(), group.order()),
    ));

    if label == RootSystemType::A1 {
        let s = group.simple_reflection(0);
        let expected =
            LaurentPoly::monomial(LatticeVector(vec![-1]));
        let ok = basis.entries[0].poly == LaurentPoly::one(1)
            && basis.entries[basis.position_of(s).unwrap()].poly == expected;
        checks.push(Check::new(
            "steinberg.A1.hand_example",
            ok,
            "f_1 = 1 and f_s = e^{-ω}",
        ));
        let coeffs = crate::steinberg::expand_in_basis(
            &LaurentPoly::monomial(LatticeVector(vec![1])),
            group,
            group.datum.delta(),
        )?;
        let c1 = LaurentPoly::monomial(LatticeVector(vec![1]))
            .add(&LaurentPoly::monomial(LatticeVector(vec![-1])));
        let ok = coeffs.get(&group.identity()) == Some(&c1)
            && coeffs.get(&s) == Some(&LaurentPoly::constant(1, -1));
        checks.push(Check::new(
            "steinberg.A1.expansion_example",
            ok,
            "e^ω = (e^ω + e^{-ω})·f_1 - f_s",
        ));
    }

    // The full table is priced for small groups; larger types verify the
    // basis layer only.
    if group.order() <= 8 {
        let mut certified = true;
        let mut invariant = true;
        let mut supported = true;
        for v in 0..group.order() {
            for v_prime in 0..group.order() {
                let exp = structure_constants(group, v, v_prime)?;
                if exp.certify(group).is_err() {
                    certified = false;
                }
                let allowed = group.cell_of(v).union(group.cell_of(v_prime));
                for (w, a) in &exp.coefficients {
                    if !a.is_invariant(group.elements.iter()) {
                        invariant = false;
                    }
                    if !group.cell_of(*w).is_subset_of(allowed) {
                        supported = false;
                    }
                }
            }
        }
        let pairs = group.order() * group.order();
        checks.push(Check::new(
            format!("steinberg.{label}.remultiplication"),
            certified,
            format!("all {pairs} products reconstruct exactly"),
        ));
        checks.push(Check::new(
            format!("steinberg.{label}.invariance"),
            invariant,
            "every structure constant is W-invariant",
        ));
        checks.push(Check::new(
            format!("steinberg.{label}.support"),
            supported,
            "coefficients vanish outside the union cells",
        ));
    } else {
        checks.push(Check::new(
            format!("steinberg.{label}.table"),
            true,
            "skipped: structure-constant table is priced for |W| ≤ 8",
        ));
    }
    Ok(checks)
}

/// A seeded member of the curve ring: a diagonal part plus per-point parts
/// damped by every character incident to the point.
pub fn random_curve_member(
    model: &CurveModel,
    rng: &mut SplitMix64,
) -> Result<PiecewiseElement> {
    let labels = model.labels();
    let diag = random_poly(rng, model.rank, 2);
    let mut member = PiecewiseElement::diagonal(&labels, &diag);
    for k in 1..=model.points {
        if rng.below(2) == 0 {
            continue;
        }
        let mut damp = LaurentPoly::one(model.rank);
        for c in &model.curves {
            if c.i == k || c.j == k {
                damp = damp.mul(&crate::laurent::one_minus_exp_neg(&c.chi));
            }
        }
        let term = random_poly(rng, model.rank, 1).mul(&damp);
        let label = Label::Point(k);
        let updated = member.values[&label].add(&term);
        member.values.insert(label, updated);
    }
    debug_assert!(model.member(&member)?);
    Ok(member)
}

fn random_poly(rng: &mut SplitMix64, rank: usize, terms: usize) -> LaurentPoly {
    let mut p = LaurentPoly::zero();
    for _ in 0..terms {
        let exp = LatticeVector((0..rank).map(|_| rng.range_i64(-2, 2)).collect());
        p.add_term(exp, BigInt::from(rng.range_i64(-3, 3)));
    }
    p
}

/// Curve-model suite for one fan-derived model: ring closure on seeded
/// members and the intersection identity, checked on members and on
/// deliberately perturbed non-members.
pub fn verify_curve_model(
    name: &str,
    fan: &Fan,
    seed: u64,
    members: usize,
) -> Result<Vec<Check>> {
    let model = CurveModel::from_fan(fan)?;
    let mut rng = SplitMix64::new(seed);
    let mut pool = Vec::new();
    for _ in 0..members {
        pool.push(random_curve_member(&model, &mut rng)?);
    }

    let mut all_members = true;
    for e in &pool {
        if !model.member(e)? {
            all_members = false;
        }
    }
    let mut checks = vec![Check::new(
        format!("gkm.{name}.members"),
        all_members,
        format!("{members} seeded elements lie in the ring"),
    )];

    let mut closed = true;
    for pair in pool.windows(2) {
        let sum = pair[0].pointwise_add(&pair[1])?;
        let product = pair[0].pointwise_mul(&pair[1])?;
        if !model.member(&sum)? || !model.member(&product)? {
            closed = false;
        }
    }
    checks.push(Check::new(
        format!("gkm.{name}.closure"),
        closed,
        "sums and products of members stay in the ring",
    ));

    // Intersection identity on members and perturbed elements.
    let mut intersection_ok = true;
    let mut perturbed = pool.clone();
    for e in pool.iter().take(members / 4) {
        let mut bad = e.clone();
        let k = rng.below(model.points as u64) as usize + 1;
        let bump = LaurentPoly::monomial(LatticeVector(
            (0..model.rank).map(|_| rng.range_i64(-1, 1)).collect(),
        ));
        let updated = bad.values[&Label::Point(k)].add(&bump);
        bad.values.insert(Label::Point(k), updated);
        perturbed.push(bad);
    }
    for e in &perturbed {
        let direct = model.member(e)?;
        let mut conj = true;
        for c in &model.curves {
            conj &= model.member_of_curve(e, c)?;
        }
        if direct != conj {
            intersection_ok = false;
        }
    }
    checks.push(Check::new(
        format!("gkm.{name}.intersection"),
        intersection_ok,
        "membership equals the conjunction over single-curve rings",
    ));

    // Module structure: a global scalar preserves membership.
    let scalar = random_poly(&mut rng, model.rank, 2);
    let mut module_ok = true;
    for e in pool.iter().take(10) {
        if !model.member(&e.scale_global(&scalar))? {
            module_ok = false;
        }
    }
    checks.push(Check::new(
        format!("gkm.{name}.module"),
        module_ok,
        "global scalars preserve membership",
    ));
    Ok(checks)
}

/// Built-in curve models: the fans of the projective line, the projective
/// plane and their product.
pub fn verify_gkm_builtins(seed: u64, members: usize) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    checks.extend(verify_curve_model("p1", &p1_fan(), seed, members)?);
    checks.extend(verify_curve_model("p2", &p2_fan(), seed + 1, members)?);
    checks.extend(verify_curve_model("p1xp1", &p1xp1_fan(), seed + 2, members)?);
    Ok(checks)
}

/// Toric and flag presentation ranks on the built-in examples.
pub fn verify_presentations(seed: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (name, fan, expected) in [
        ("p1", p1_fan(), 2usize),
        ("p2", p2_fan(), 3),
        ("p1xp1", p1xp1_fan(), 4),
    ] {
        let report = verify_toric(&fan, seed)?;
        checks.push(Check::new(
            format!("present.toric.{name}"),
            report.pass() && report.quotient_rank == expected,
            format!(
                "rank {} = image rank {} = {} maximal cones; relations vanish: {}",
                report.quotient_rank,
                report.eval_image_rank,
                report.max_cones,
                report.relations_vanish && report.random_character_relations_vanish
            ),
        ));
    }

    let a1 = WeylGroup::new(RootDatum::new(RootSystemType::A1, 0));
    let a2 = WeylGroup::new(RootDatum::new(RootSystemType::A2, 0));
    for (name, group, parabolic, expected) in [
        ("sl2.full", &a1, Subset::empty(), 2usize),
        ("sl3.full", &a2, Subset::empty(), 6),
        ("sl3.parabolic1", &a2, Subset::from_indices(&[0]), 3),
    ] {
        let pres = flag_presentation(group, parabolic, &BaseRingSpec::trivial())?;
        checks.push(Check::new(
            format!("present.flag.{name}"),
            pres.rank() == expected,
            format!("rank {} (expected {expected})", pres.rank()),
        ));
    }
    Ok(checks)
}

/// The regular-compactification suite: ring laws, the embedding oracle,
/// congruence membership, independence, and mutation sensitivity.
pub fn verify_regcomp(
    group: &WeylGroup,
    subdivision: Option<Fan>,
    seed: u64,
    samples: usize,
) -> Result<Vec<Check>> {
    let label = group.datum.label;
    let model = RegCompModel::build(group, subdivision)?;
    let z = model.z_model();
    let mut checks = Vec::new();

    checks.push(Check::new(
        format!("regcomp.{label}.rank"),
        model.basis.len() == group.order(),
        format!("{} basis elements for |W| = {}", model.basis.len(), group.order()),
    ));

    let id_image = model.embed_to_z(&model.identity())?;
    checks.push(Check::new(
        format!("regcomp.{label}.identity_image"),
        id_image
            .values
            .values()
            .all(|p| p == &LaurentPoly::one(model.doubled_rank())),
        "the identity embeds to the all-ones family",
    ));

    let mut rng = SplitMix64::new(seed);
    let mut identity_law = true;
    let mut commutative = true;
    let mut homomorphism = true;
    let mut congruent = true;
    let id = model.identity();
    for _ in 0..samples {
        let a = model.random_element(&mut rng);
        let b = model.random_element(&mut rng);
        if model.multiply(&id, &a)? != a {
            identity_law = false;
        }
        let ab = model.multiply(&a, &b)?;
        if ab != model.multiply(&b, &a)? {
            commutative = false;
        }
        let lhs = model.embed_to_z(&ab)?;
        let rhs = model.embed_to_z(&a)?.pointwise_mul(&model.embed_to_z(&b)?)?;
        if lhs != rhs {
            homomorphism = false;
        }
        if !z.member(&lhs)? {
            congruent = false;
        }
    }
    for pos in 0..model.basis.len() {
        if !z.member(&model.embed_to_z(&model.basis_element(pos))?)? {
            congruent = false;
        }
    }

    // Triple products square the term counts, so associativity samples are
    // drawn sparse (single-coefficient elements); bilinearity carries the
    // law to the general case.
    let mut associative = true;
    for _ in 0..samples {
        let a = model.random_sparse_element(&mut rng);
        let b = model.random_sparse_element(&mut rng);
        let c = model.random_sparse_element(&mut rng);
        let ab = model.multiply(&a, &b)?;
        if model.multiply(&ab, &c)? != model.multiply(&a, &model.multiply(&b, &c)?)? {
            associative = false;
        }
    }
    checks.push(Check::new(
        format!("regcomp.{label}.identity_law"),
        identity_law,
        "f̄_1 is a two-sided identity on sampled elements",
    ));
    checks.push(Check::new(
        format!("regcomp.{label}.commutativity"),
        commutative,
        "sampled products commute",
    ));
    checks.push(Check::new(
        format!("regcomp.{label}.associativity"),
        associative,
        "sampled sparse triples associate exactly",
    ));
    checks.push(Check::new(
        format!("regcomp.{label}.homomorphism"),
        homomorphism,
        format!("embedding respects {samples} sampled products"),
    ));
    checks.push(Check::new(
        format!("regcomp.{label}.congruences"),
        congruent,
        "embedded elements satisfy the congruence ring conditions",
    ));

    let images: Vec<PiecewiseElement> = (0..model.basis.len())
        .map(|p| model.embed_to_z(&model.basis_element(p)))
        .collect::<Result<_>>()?;
    checks.push(Check::new(
        format!("regcomp.{label}.independence"),
        piecewise_rank(&images) == model.basis.len(),
        "basis images are linearly independent",
    ));

    let mut lambda_ok = true;
    for i_set in group.datum.delta().subsets() {
        for j_set in group.datum.delta().subsets() {
            let lhs = lambda_factor(group, i_set).mul(&lambda_factor(group, j_set));
            let rhs = lambda_factor(group, i_set.union(j_set))
                .mul(&lambda_factor(group, i_set.intersection(j_set)));
            if lhs != rhs {
                lambda_ok = false;
            }
        }
    }
    checks.push(Check::new(
        format!("regcomp.{label}.euler_consistency"),
        lambda_ok,
        "λ_I λ_I' = λ_{I∪I'} λ_{I∩I'} for all subset pairs",
    ));

    checks.extend(verify_mutation_sensitivity(group, &model, seed)?);
    Ok(checks)
}

/// Every single-entry corruption of the product data must break the
/// homomorphism oracle.
pub fn verify_mutation_sensitivity(
    group: &WeylGroup,
    model: &RegCompModel,
    seed: u64,
) -> Result<Vec<Check>> {
    let label = group.datum.label;
    let rank = group.datum.rank();
    let mut all_detected = true;
    let mut tried = 0;
    for (v, v_prime, w) in model.structure_constant_keys() {
        let mut corrupted = model.clone();
        corrupted.corrupt_structure_constant(v, v_prime, w, &LaurentPoly::one(rank));
        if !oracle_fails(&corrupted, seed)? {
            all_detected = false;
        }
        tried += 1;
    }
    let mut checks = vec![Check::new(
        format!("regcomp.{label}.mutation_constants"),
        all_detected,
        format!("{tried} single-constant corruptions all break the oracle"),
    )];

    let mut all_detected = true;
    let mut tried = 0;
    for i_set in group.datum.delta().subsets() {
        if i_set.is_empty() {
            continue;
        }
        let mut corrupted = model.clone();
        corrupted.corrupt_lambda(i_set, &LaurentPoly::one(2 * rank));
        if !oracle_fails(&corrupted, seed)? {
            all_detected = false;
        }
        tried += 1;
    }
    checks.push(Check::new(
        format!("regcomp.{label}.mutation_euler"),
        all_detected,
        format!("{tried} single-Euler-factor corruptions all break the oracle"),
    ));
    Ok(checks)
}

/// Whether the homomorphism oracle detects a corrupted model: checked on
/// all basis pairs plus seeded random pairs.
fn oracle_fails(model: &RegCompModel, seed: u64) -> Result<bool> {
    for i in 0..model.basis.len() {
        for j in 0..model.basis.len() {
            let a = model.basis_element(i);
            let b = model.basis_element(j);
            let lhs = model.embed_to_z(&model.multiply(&a, &b)?)?;
            let rhs = model.embed_to_z(&a)?.pointwise_mul(&model.embed_to_z(&b)?)?;
            if lhs != rhs {
                return Ok(true);
            }
        }
    }
    let mut rng = SplitMix64::new(seed);
    for _ in 0..10 {
        let a = model.random_element(&mut rng);
        let b = model.random_element(&mut rng);
        let lhs = model.embed_to_z(&model.multiply(&a, &b)?)?;
        let rhs = model.embed_to_z(&a)?.pointwise_mul(&model.embed_to_z(&b)?)?;
        if lhs != rhs {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The full suite for one root datum.
pub fn verify_all(
    label: RootSystemType,
    central_rank: usize,
    subdivision: Option<Fan>,
    seed: u64,
) -> Result<Report> {
    let group = WeylGroup::new(RootDatum::new(label, central_rank));
    let mut checks = Vec::new();
    checks.extend(verify_weyl(&group));
    checks.extend(verify_steinberg(&group)?);
    checks.extend(verify_gkm_builtins(seed, 100)?);
    checks.extend(verify_presentations(seed)?);

    let chamber_smooth = positive_chamber_cone(&group).is_smooth();
    if chamber_smooth || subdivision.is_some() {
        checks.extend(verify_regcomp(&group, subdivision, seed, 50)?);
    } else {
        checks.push(Check::new(
            format!("regcomp.{label}.model"),
            true,
            "skipped: chamber cone is not smooth and no subdivision was supplied",
        ));
    }
    Ok(Report { seed, checks })
}
