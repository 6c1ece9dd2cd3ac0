//! Command-line front end: root-system data, Steinberg bases, congruence
//! membership, presentations, the regular-compactification model and the
//! verification suites, all with JSON input/output.
//!
//! Exit codes: 0 success, 1 input error, 2 verification failure,
//! 3 internal-consistency failure.

use clap::{Args, Parser, Subcommand};
use kring::error::{Error, Result};
use kring::fan::Fan;
use kring::gkm::{CurveDatum, CurveModel, PiecewiseElement, WonderfulModel, ZModel};
use kring::laurent::LaurentPoly;
use kring::presentation::{
    flag_presentation, toric_presentation, toric_quotient_rank, verify_toric, BaseRingSpec,
};
use kring::regcomp::RegCompModel;
use kring::steinberg::{structure_constants, SteinbergBasis};
use kring::verify;
use kring::weyl::external_word;
use kring::{RootDatum, RootSystemType, Subset, WeylGroup};
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "kring",
    version,
    about = "Exact equivariant K-ring computations for toric, flag and group-compactification bundles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Root systems, Weyl groups, cosets and cells
    Rootsys {
        #[command(subcommand)]
        cmd: RootsysCmd,
    },
    /// Steinberg bases, expansions and structure constants
    Steinberg {
        #[command(subcommand)]
        cmd: SteinbergCmd,
    },
    /// Membership in the fixed-point congruence rings
    Gkm {
        #[command(subcommand)]
        cmd: GkmCmd,
    },
    /// Toric and flag bundle presentations
    Present {
        #[command(subcommand)]
        cmd: PresentCmd,
    },
    /// The regular-compactification module model
    Regcomp {
        #[command(subcommand)]
        cmd: RegcompCmd,
    },
    /// Verification suites
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
}

#[derive(Args)]
struct DatumArgs {
    /// Root-system type: A1, A1xA1, A2, B2 or A3
    #[arg(long = "type")]
    type_label: String,
    /// Rank of the central torus (Weyl-fixed coordinates)
    #[arg(long, default_value_t = 0)]
    central_rank: usize,
}

impl DatumArgs {
    fn group(&self) -> Result<WeylGroup> {
        let label: RootSystemType = self.type_label.parse()?;
        Ok(WeylGroup::new(RootDatum::new(label, self.central_rank)))
    }
}

#[derive(Subcommand)]
enum RootsysCmd {
    /// List all Weyl elements with lengths, words and matrices
    Elements {
        #[command(flatten)]
        datum: DatumArgs,
    },
    /// Minimal coset representatives for a parabolic subset
    Cosets {
        #[command(flatten)]
        datum: DatumArgs,
        /// Comma-separated 1-based simple-root indices (empty for ∅)
        #[arg(long, default_value = "")]
        parabolic: String,
    },
    /// The cell partition of the Weyl group
    Cells {
        #[command(flatten)]
        datum: DatumArgs,
    },
}

#[derive(Subcommand)]
enum SteinbergCmd {
    /// The Steinberg basis of R(T)^{W_I} over R(T)^W
    Basis {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long, default_value = "")]
        parabolic: String,
    },
    /// Expand an invariant element in the Steinberg basis
    Expand {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long, default_value = "")]
        parabolic: String,
        /// Path to a Laurent-polynomial JSON file
        #[arg(long)]
        input: String,
    },
    /// The full structure-constant table
    Constants {
        #[command(flatten)]
        datum: DatumArgs,
    },
}

#[derive(Subcommand)]
enum GkmCmd {
    /// Decide membership of a piecewise element in a model ring
    Member {
        /// Path to a model JSON file
        #[arg(long)]
        model: String,
        /// Path to a piecewise-element JSON file
        #[arg(long)]
        element: String,
    },
}

#[derive(Subcommand)]
enum PresentCmd {
    /// Presentation of a toric-bundle K-ring from a fan
    Toric {
        /// Path to a fan JSON file
        #[arg(long)]
        fan: String,
        /// Optional base-ring JSON file (default: the point base)
        #[arg(long)]
        base: Option<String>,
        /// Run the evaluation-map and rank cross-checks
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Presentation of a flag-bundle K-ring
    Flag {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long, default_value = "")]
        parabolic: String,
        /// Cross-check the module rank
        #[arg(long)]
        verify: bool,
    },
}

#[derive(Subcommand)]
enum RegcompCmd {
    /// Build the model and print its data
    Build {
        #[command(flatten)]
        datum: DatumArgs,
        /// Smooth chamber subdivision (fan JSON), when the chamber needs one
        #[arg(long)]
        subdivision: Option<String>,
    },
    /// Multiply two module elements
    Mul {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long)]
        subdivision: Option<String>,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Run the model verification suite
    Verify {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long)]
        subdivision: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Run every suite for one root datum
    All {
        #[command(flatten)]
        datum: DatumArgs,
        #[arg(long)]
        subdivision: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Emit the report as JSON instead of text
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    // Usage errors are input errors (exit 1); clap's default exit code
    // would collide with the verification-failure code.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
        Err(e) => {
            // --help / --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Rootsys { cmd } => rootsys(cmd),
        Command::Steinberg { cmd } => steinberg(cmd),
        Command::Gkm { cmd } => gkm(cmd),
        Command::Present { cmd } => present(cmd),
        Command::Regcomp { cmd } => regcomp(cmd),
        Command::Verify { cmd } => verify_cmd(cmd),
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::internal(format!("serialization failed: {e}")))?;
    println!("{text}");
    Ok(())
}

fn read_file(path: &str) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::input(format!("cannot read {path}: {e}")))
}

fn parse_parabolic(text: &str, group: &WeylGroup) -> Result<Subset> {
    Subset::parse(text, group.datum.semisimple_rank)
}

fn load_subdivision(path: &Option<String>) -> Result<Option<Fan>> {
    match path {
        None => Ok(None),
        Some(p) => Ok(Some(Fan::from_json(&read_file(p)?)?)),
    }
}

fn rootsys(cmd: RootsysCmd) -> Result<ExitCode> {
    match cmd {
        RootsysCmd::Elements { datum } => {
            let group = datum.group()?;
            let elements: Vec<_> = group
                .elements
                .iter()
                .map(|e| {
                    json!({
                        "word": external_word(&e.word),
                        "length": e.length,
                        "matrix": e.matrix,
                    })
                })
                .collect();
            print_json(&json!({
                "type": group.datum.label.label(),
                "central_rank": group.datum.central_rank,
                "order": group.order(),
                "simple_roots": group.datum.simple_roots(),
                "cartan_matrix": group.datum.cartan,
                "elements": elements,
            }))?;
        }
        RootsysCmd::Cosets { datum, parabolic } => {
            let group = datum.group()?;
            let i_set = parse_parabolic(&parabolic, &group)?;
            let reps: Vec<_> = group
                .minimal_coset_reps(i_set)
                .into_iter()
                .map(|w| external_word(&group.element(w).word))
                .collect();
            let subgroup = group.parabolic_subgroup(i_set).len();
            print_json(&json!({
                "type": group.datum.label.label(),
                "parabolic": i_set.external_indices(),
                "subgroup_order": subgroup,
                "representatives": reps,
            }))?;
        }
        RootsysCmd::Cells { datum } => {
            let group = datum.group()?;
            let cells: Vec<_> = group
                .c_partition()
                .into_iter()
                .map(|(i_set, cell)| {
                    json!({
                        "subset": i_set.external_indices(),
                        "elements": cell
                            .iter()
                            .map(|&w| external_word(&group.element(w).word))
                            .collect::<Vec<_>>(),
                    })
                })
                .collect();
            print_json(&json!({
                "type": group.datum.label.label(),
                "cells": cells,
            }))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn steinberg(cmd: SteinbergCmd) -> Result<ExitCode> {
    match cmd {
        SteinbergCmd::Basis { datum, parabolic } => {
            let group = datum.group()?;
            let i_p = parse_parabolic(&parabolic, &group)?;
            let modified = i_p.complement(group.datum.semisimple_rank);
            let basis = SteinbergBasis::modified(&group, modified);
            let entries: Vec<_> = basis
                .entries
                .iter()
                .map(|e| {
                    json!({
                        "cell": e.cell.external_indices(),
                        "v": external_word(&group.element(e.v).word),
                        "poly": e.poly,
                    })
                })
                .collect();
            print_json(&json!({
                "type": group.datum.label.label(),
                "parabolic": i_p.external_indices(),
                "rank": basis.len(),
                "basis": entries,
            }))?;
        }
        SteinbergCmd::Expand { datum, parabolic, input } => {
            let group = datum.group()?;
            let i_p = parse_parabolic(&parabolic, &group)?;
            let modified = i_p.complement(group.datum.semisimple_rank);
            let g: LaurentPoly = serde_json::from_str(&read_file(&input)?)
                .map_err(|e| Error::input(format!("bad polynomial JSON: {e}")))?;
            let coeffs = kring::steinberg::expand_in_basis(&g, &group, modified)?;
            let records: Vec<_> = coeffs
                .iter()
                .map(|(v, c)| {
                    json!({
                        "v": external_word(&group.element(*v).word),
                        "coeff": c,
                    })
                })
                .collect();
            print_json(&json!({
                "type": group.datum.label.label(),
                "parabolic": i_p.external_indices(),
                "coefficients": records,
            }))?;
        }
        SteinbergCmd::Constants { datum } => {
            let group = datum.group()?;
            let mut entries = Vec::new();
            for v in 0..group.order() {
                for v_prime in 0..group.order() {
                    let exp = structure_constants(&group, v, v_prime)?;
                    exp.certify(&group)?;
                    let terms: Vec<_> = exp
                        .coefficients
                        .iter()
                        .map(|(w, a)| {
                            json!({
                                "w": external_word(&group.element(*w).word),
                                "cell": group.cell_of(*w).external_indices(),
                                "coeff": a,
                            })
                        })
                        .collect();
                    entries.push(json!({
                        "v": external_word(&group.element(v).word),
                        "v_prime": external_word(&group.element(v_prime).word),
                        "terms": terms,
                    }));
                }
            }
            print_json(&json!({
                "type": group.datum.label.label(),
                "entries": entries,
            }))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// A model file: tagged by `model`, the rest of the fields per kind.
#[derive(Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
enum ModelSpec {
    Curves {
        points: usize,
        rank: usize,
        curves: Vec<CurveDatum>,
    },
    Wonderful {
        #[serde(rename = "type")]
        type_label: String,
        #[serde(default)]
        central_rank: usize,
        #[serde(default)]
        subdivision: Option<Fan>,
    },
    Z {
        #[serde(rename = "type")]
        type_label: String,
        #[serde(default)]
        central_rank: usize,
        #[serde(default)]
        subdivision: Option<Fan>,
    },
}

fn gkm(cmd: GkmCmd) -> Result<ExitCode> {
    let GkmCmd::Member { model, element } = cmd;
    let spec: ModelSpec = serde_json::from_str(&read_file(&model)?)
        .map_err(|e| Error::input(format!("bad model JSON: {e}")))?;
    let elem: PiecewiseElement = serde_json::from_str(&read_file(&element)?)
        .map_err(|e| Error::input(format!("bad element JSON: {e}")))?;
    let (member, violations) = match spec {
        ModelSpec::Curves { points, rank, curves } => {
            let m = CurveModel::new(points, rank, curves)?;
            (m.member(&elem)?, m.violations(&elem)?)
        }
        ModelSpec::Wonderful { type_label, central_rank, subdivision } => {
            let label: RootSystemType = type_label.parse()?;
            let group = WeylGroup::new(RootDatum::new(label, central_rank));
            let (plus, _) = kring::fan::weyl_chamber_fan(&group, subdivision)?;
            let m = WonderfulModel::new(group, plus);
            (m.member(&elem)?, m.violations(&elem)?)
        }
        ModelSpec::Z { type_label, central_rank, subdivision } => {
            let label: RootSystemType = type_label.parse()?;
            let group = WeylGroup::new(RootDatum::new(label, central_rank));
            let (plus, _) = kring::fan::weyl_chamber_fan(&group, subdivision)?;
            let m = ZModel::new(group, plus);
            (m.member(&elem)?, m.violations(&elem)?)
        }
    };
    print_json(&json!({
        "member": member,
        "violations": violations,
    }))?;
    Ok(ExitCode::SUCCESS)
}

fn present(cmd: PresentCmd) -> Result<ExitCode> {
    match cmd {
        PresentCmd::Toric { fan, base, verify: check, seed } => {
            let fan = Fan::from_json(&read_file(&fan)?)?;
            let base_spec = match base {
                None => BaseRingSpec::trivial(),
                Some(p) => BaseRingSpec::from_json(&read_file(&p)?)?,
            };
            let pres = toric_presentation(&fan, &base_spec)?;
            let rank = if base_spec.is_trivial() {
                Some(toric_quotient_rank(&pres)?)
            } else {
                None
            };
            if check {
                let report = verify_toric(&fan, seed)?;
                print_json(&json!({
                    "presentation": pres,
                    "rank": rank,
                    "verification": report,
                }))?;
                if !report.pass() {
                    return Err(Error::verification("toric cross-checks failed"));
                }
            } else {
                print_json(&json!({ "presentation": pres, "rank": rank }))?;
            }
        }
        PresentCmd::Flag { datum, parabolic, verify: check } => {
            let group = datum.group()?;
            let i_p = parse_parabolic(&parabolic, &group)?;
            let pres = flag_presentation(&group, i_p, &BaseRingSpec::trivial())?;
            let rank = pres.rank();
            print_json(&json!({ "presentation": pres, "rank": rank }))?;
            if check {
                let reps = group.minimal_coset_reps(i_p).len();
                if rank != reps {
                    return Err(Error::verification(format!(
                        "flag rank {rank} differs from |W^I| = {reps}"
                    )));
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn regcomp(cmd: RegcompCmd) -> Result<ExitCode> {
    match cmd {
        RegcompCmd::Build { datum, subdivision } => {
            let group = datum.group()?;
            let model = RegCompModel::build(&group, load_subdivision(&subdivision)?)?;
            print_json(&model.summary())?;
        }
        RegcompCmd::Mul { datum, subdivision, a, b } => {
            let group = datum.group()?;
            let model = RegCompModel::build(&group, load_subdivision(&subdivision)?)?;
            let x = model.element_from_json(&read_file(&a)?)?;
            let y = model.element_from_json(&read_file(&b)?)?;
            let product = model.multiply(&x, &y)?;
            println!("{}", model.element_to_json(&product)?);
        }
        RegcompCmd::Verify { datum, subdivision, seed, samples } => {
            let group = datum.group()?;
            let checks =
                verify::verify_regcomp(&group, load_subdivision(&subdivision)?, seed, samples)?;
            let report = verify::Report { seed, checks };
            println!("{report}");
            if !report.pass() {
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn verify_cmd(cmd: VerifyCmd) -> Result<ExitCode> {
    let VerifyCmd::All { datum, subdivision, seed, json } = cmd;
    let label: RootSystemType = datum.type_label.parse()?;
    let report = verify::verify_all(
        label,
        datum.central_rank,
        load_subdivision(&subdivision)?,
        seed,
    )?;
    if json {
        print_json(&report)?;
    } else {
        println!("{report}");
    }
    if report.pass() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(2))
    }
}
