//! Command-line front end: argument surface, sample assembly, and report
//! emission. All mathematics is delegated to the library modules; nothing
//! here computes a bracket by hand.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::algebra::{
    check_hom_nambu_identity, check_multiplicative, check_skew_symmetry, Algebra, LinearMap,
};
use crate::deformation::{
    build_cross_deformation, build_jacobian_deformation, build_qvw_deformation,
    verify_deformation, DeformationReport,
};
use crate::element::{BasisKey, Element};
use crate::error::{Error, Result};
use crate::models::jacobian3::{gamma_endo, GammaMap, K4Poly};
use crate::models::{all_triples, all_tuples5, cross4, jacobian3, vw, ModelId};
use crate::parse::{parse_gamma, parse_q, parse_range, parse_theta, QSpec, ThetaSpec};
use crate::poly::Poly;
use crate::report::CheckReport;
use crate::ring::Ring;
use crate::scalar::Scalar;
use crate::series::TruncSeries;

const EXIT_PASS: i32 = 0;
const EXIT_VIOLATIONS: i32 = 1;
const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "nambu",
    version,
    about = "Exact verification of ternary bracket algebras, their twists, and formal deformations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check skew-symmetry, twist multiplicativity, and the compatibility identity
    Verify(VerifyArgs),
    /// Reproduce a built-in computation whose two sides disagree
    Counterexample(CounterexampleArgs),
    /// Build a deformation family and check it degree by degree
    Deform(DeformArgs),
    /// List the built-in models and deformation families
    ListModels,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Human-readable report
    Text,
    /// Versioned JSON report
    JsonLike,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Model to check: cross4, jacobian3, or vw
    pub model: String,

    /// Central parameter of the vw bracket (default 2i)
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,

    /// Rotation twist, exact:c1,s1,c2,s2 or series:N (cross4 only)
    #[arg(long)]
    pub theta: Option<String>,

    /// Substitution twist, k1,k2,k3,k4[,p1=POLY][,p2=POLY] (jacobian3 only)
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,

    /// Scaling twist, a scalar or series:N (vw only)
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<String>,

    /// Generator index range a..b for vw samples (default -2..2); the
    /// identity sweep grows as (2*(b-a+1))^5
    #[arg(long, allow_hyphen_values = true)]
    pub range: Option<String>,

    /// Total-degree bound for jacobian3 monomial samples (default 3)
    #[arg(long)]
    pub degree: Option<u32>,

    /// Check the untwisted compatibility identity on the twisted bracket
    #[arg(long)]
    pub plain_nambu: bool,

    /// Report format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Cap on violations listed per check
    #[arg(long, default_value_t = 20)]
    pub max_violations: usize,
}

#[derive(Debug, Args)]
pub struct CounterexampleArgs {
    /// Which computation: cross4-theta or jacobian-k4
    pub name: String,

    /// Bind the shift constant to a value instead of leaving it symbolic
    /// (jacobian-k4 only)
    #[arg(long, allow_hyphen_values = true)]
    pub k4: Option<String>,

    /// Report format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct DeformArgs {
    /// Family to build: qvw, cross4, or jacobian3
    pub family: String,

    /// Truncation order: the identity is checked modulo parameter degree
    /// order + 1
    #[arg(long)]
    pub order: u32,

    /// Central parameter of the base vw bracket (qvw only; default 2i)
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,

    /// Generator index range a..b for the qvw sample (default -2..2); the
    /// identity sweep grows as (2*(b-a+1))^5
    #[arg(long, allow_hyphen_values = true)]
    pub range: Option<String>,

    /// Total-degree bound for jacobian3 triple samples (default 3)
    #[arg(long)]
    pub degree: Option<u32>,

    /// Build the qvw family even when the base bracket is not Nambu-Lie
    #[arg(long)]
    pub allow_non_nambu_lie: bool,

    /// Report format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Cap on violations listed per check
    #[arg(long, default_value_t = 20)]
    pub max_violations: usize,
}

/// Execute a parsed invocation and return the process exit code: 0 when all
/// checks pass, 1 when a violation was found, 2 for unusable configurations.
pub fn run(cli: Cli) -> i32 {
    let result = match &cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Counterexample(args) => cmd_counterexample(args),
        Command::Deform(args) => cmd_deform(args),
        Command::ListModels => cmd_list_models(),
    };
    result.unwrap_or_else(|err| {
        eprintln!("error: {}", err);
        EXIT_USAGE
    })
}

fn ensure_absent(present: bool, flag: &str, target: &str) -> Result<()> {
    if present {
        return Err(Error::InvalidParameter(format!(
            "{} does not apply to {}",
            flag, target
        )));
    }
    Ok(())
}

fn verdict_word(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

fn parse_z(arg: Option<&str>) -> Result<Scalar> {
    match arg {
        Some(text) => text.parse(),
        None => Ok(Scalar::gaussian_int(0, 2)),
    }
}

fn parse_range_or_default(arg: Option<&str>) -> Result<(i64, i64)> {
    match arg {
        Some(text) => parse_range(text),
        None => Ok((-2, 2)),
    }
}

fn warn_sweep_cost(lo: i64, hi: i64) {
    let generators = 2 * (hi - lo + 1) as u128;
    let tuples = generators.pow(5);
    if tuples > 100_000 {
        eprintln!(
            "warning: range {}..{} spans {} generators; the identity sweep visits {} 5-tuples",
            lo, hi, generators, tuples
        );
    }
}

/// A 5-tuple whose last slot is a sum of basis vectors. Pure basis tuples
/// can satisfy identities that fail on sums, so twisted runs include it.
fn mixed_tuple<R: Ring>(one: &R) -> [Element<R>; 5] {
    let e = |i: usize| Element::basis(BasisKey::e(i), one.clone());
    let e5 = &(&e(1) + &e(2)) + &e(4);
    [e(1), e(2), e(3), e(4), e5]
}

fn cmd_verify(args: &VerifyArgs) -> Result<i32> {
    let model: ModelId = args.model.parse()?;
    match model {
        ModelId::Cross4 => {
            for (present, flag) in [
                (args.z.is_some(), "--z"),
                (args.gamma.is_some(), "--gamma"),
                (args.q.is_some(), "--q"),
                (args.range.is_some(), "--range"),
                (args.degree.is_some(), "--degree"),
            ] {
                ensure_absent(present, flag, "model cross4")?;
            }
            verify_cross4(args)
        }
        ModelId::Jacobian3 => {
            for (present, flag) in [
                (args.z.is_some(), "--z"),
                (args.theta.is_some(), "--theta"),
                (args.q.is_some(), "--q"),
                (args.range.is_some(), "--range"),
            ] {
                ensure_absent(present, flag, "model jacobian3")?;
            }
            verify_jacobian3(args)
        }
        ModelId::Vw => {
            for (present, flag) in [
                (args.theta.is_some(), "--theta"),
                (args.gamma.is_some(), "--gamma"),
                (args.degree.is_some(), "--degree"),
            ] {
                ensure_absent(present, flag, "model vw")?;
            }
            verify_vw(args)
        }
    }
}

fn verify_cross4(args: &VerifyArgs) -> Result<i32> {
    match args.theta.as_deref().map(parse_theta).transpose()? {
        None => {
            let one = Scalar::one();
            let alg = cross4::algebra(one.clone());
            let basis = cross4::basis_elements(&one);
            run_verify(args, alg, all_triples(&basis).collect(), all_tuples5(&basis))
        }
        Some(ThetaSpec::Exact { c1, s1, c2, s2 }) => {
            let one = Scalar::one();
            let alg = cross4::algebra(one.clone());
            let basis = cross4::basis_elements(&one);
            let rho = LinearMap::Matrix(cross4::rho_theta_exact(&c1, &s1, &c2, &s2)?);
            let sample: Vec<_> = all_triples(&basis).collect();
            let alg = alg.twist_by_endomorphism(rho, sample.iter())?;
            let tuples = std::iter::once(mixed_tuple(&one)).chain(all_tuples5(&basis));
            run_verify(args, alg, sample.clone(), tuples)
        }
        Some(ThetaSpec::Series { order }) => {
            let one = TruncSeries::one(2, order);
            let alg = cross4::algebra(one.clone());
            let basis = cross4::basis_elements(&one);
            let rho = LinearMap::Matrix(cross4::rho_theta_series(order));
            let sample: Vec<_> = all_triples(&basis).collect();
            let alg = alg.twist_by_endomorphism(rho, sample.iter())?;
            let tuples = std::iter::once(mixed_tuple(&one)).chain(all_tuples5(&basis));
            run_verify(args, alg, sample.clone(), tuples)
        }
    }
}

fn verify_vw(args: &VerifyArgs) -> Result<i32> {
    let z = parse_z(args.z.as_deref())?;
    let (lo, hi) = parse_range_or_default(args.range.as_deref())?;
    warn_sweep_cost(lo, hi);
    match args.q.as_deref().map(parse_q).transpose()? {
        None => {
            let one = Scalar::one();
            let alg = vw::algebra(one.clone(), z);
            let basis = vw::generator_elements(&one, lo, hi);
            run_verify(args, alg, all_triples(&basis).collect(), all_tuples5(&basis))
        }
        Some(QSpec::Value(q)) => {
            let one = Scalar::one();
            let alg = vw::algebra(one.clone(), z);
            let basis = vw::generator_elements(&one, lo, hi);
            let rho = vw::rho_q_scalar(&q)?;
            let sample: Vec<_> = all_triples(&vw::generator_elements(&one, -1, 1)).collect();
            let alg = alg.twist_by_endomorphism(rho, sample.iter())?;
            run_verify(args, alg, all_triples(&basis).collect(), all_tuples5(&basis))
        }
        Some(QSpec::Series { order }) => {
            let one = TruncSeries::one(1, order);
            let alg = vw::algebra(one.clone(), z);
            let basis = vw::generator_elements(&one, lo, hi);
            let rho = vw::rho_q_series(order);
            let sample: Vec<_> = all_triples(&vw::generator_elements(&one, -1, 1)).collect();
            let alg = alg.twist_by_endomorphism(rho, sample.iter())?;
            run_verify(args, alg, all_triples(&basis).collect(), all_tuples5(&basis))
        }
    }
}

fn verify_jacobian3(args: &VerifyArgs) -> Result<i32> {
    let degree = args.degree.unwrap_or(3);
    let one = Scalar::one();
    let basis = jacobian3::monomial_elements(&one, degree);
    let tuples = jacobian3::curated_tuples5(&one);
    let alg = jacobian3::algebra(one.clone());
    let alg = match args.gamma.as_deref().map(parse_gamma).transpose()? {
        None => alg,
        Some(spec) => {
            let gamma = GammaMap::upper(spec.k, spec.p1, spec.p2, spec.k4)?;
            let rho = gamma_endo(&gamma);
            let sample: Vec<_> = all_triples(&jacobian3::monomial_elements(&one, 1)).collect();
            alg.twist_by_endomorphism(rho, sample.iter())?
        }
    };
    run_verify(args, alg, all_triples(&basis).collect(), tuples)
}

fn run_verify<R: Ring>(
    args: &VerifyArgs,
    mut alg: Algebra<R>,
    triples: Vec<[Element<R>; 3]>,
    tuples: impl IntoIterator<Item = [Element<R>; 5]>,
) -> Result<i32> {
    if args.plain_nambu {
        alg.alpha = LinearMap::Identity;
        alg.beta = LinearMap::Identity;
    }
    let skew = check_skew_symmetry(&alg, triples.iter().cloned())?;
    let mult = check_multiplicative(&alg, triples.iter().cloned())?;
    let identity = check_hom_nambu_identity(&alg, tuples)?;
    emit_verify(args, &[skew, mult, identity])
}

fn emit_verify(args: &VerifyArgs, reports: &[CheckReport]) -> Result<i32> {
    let ok = reports.iter().all(CheckReport::passed);
    match args.format {
        Format::Text => {
            for report in reports {
                print!("{}", report.render_text(Some(args.max_violations)));
                println!();
            }
            println!("overall: {}", verdict_word(ok));
        }
        Format::JsonLike => {
            let doc = json!({
                "schema": "nambu-verify-v1",
                "checks": reports,
                "overall": verdict_word(ok),
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&doc).expect("report serialization cannot fail")
            );
        }
    }
    Ok(if ok { EXIT_PASS } else { EXIT_VIOLATIONS })
}

/// Both sides of the untwisted three-term compatibility identity: the
/// bracket acting as a derivation of itself, no twisting maps applied.
fn plain_identity_sides<R: Ring>(
    alg: &Algebra<R>,
    xs: &[Element<R>; 5],
) -> Result<(Element<R>, Element<R>)> {
    let [x1, x2, x3, x4, x5] = xs;
    let lhs = alg.bracket_eval(x1, x2, &alg.bracket_eval(x3, x4, x5)?)?;
    let t1 = alg.bracket_eval(&alg.bracket_eval(x1, x2, x3)?, x4, x5)?;
    let t2 = alg.bracket_eval(x3, &alg.bracket_eval(x1, x2, x4)?, x5)?;
    let t3 = alg.bracket_eval(x3, x4, &alg.bracket_eval(x1, x2, x5)?)?;
    Ok((lhs, &(&t1 + &t2) + &t3))
}

const LHS_LABEL: &str = "[x1, x2, [x3, x4, x5]]";
const RHS_LABEL: &str = "[[x1, x2, x3], x4, x5] + [x3, [x1, x2, x4], x5] + [x3, x4, [x1, x2, x5]]";

fn cmd_counterexample(args: &CounterexampleArgs) -> Result<i32> {
    match args.name.as_str() {
        "cross4-theta" => {
            ensure_absent(args.k4.is_some(), "--k4", "counterexample cross4-theta")?;
            counterexample_cross4_theta(args)
        }
        "jacobian-k4" => counterexample_jacobian_k4(args),
        other => Err(Error::InvalidParameter(format!(
            "unknown counterexample '{}'; available: cross4-theta, jacobian-k4",
            other
        ))),
    }
}

fn counterexample_cross4_theta(args: &CounterexampleArgs) -> Result<i32> {
    let one = Scalar::one();
    let alg = cross4::algebra(one.clone());
    let basis = cross4::basis_elements(&one);
    let rho = cross4::rho_theta_exact(
        &Scalar::zero(),
        &Scalar::one(),
        &Scalar::zero(),
        &Scalar::one(),
    )?;
    let sample: Vec<_> = all_triples(&basis).collect();
    let alg = alg.twist_by_endomorphism(LinearMap::Matrix(rho), sample.iter())?;
    let tuple = mixed_tuple(&one);
    let (lhs, rhs) = plain_identity_sides(&alg, &tuple)?;
    let diff = &lhs - &rhs;
    let equal = diff.is_zero();
    let verdict = if equal {
        "sides agree at this tuple".to_string()
    } else {
        "the untwisted compatibility identity fails for the twisted bracket".to_string()
    };
    let tuple_strings: Vec<String> = tuple.iter().map(|e| e.to_string()).collect();

    match args.format {
        Format::Text => {
            println!("counterexample: cross4-theta");
            println!("algebra: {}", alg.id);
            println!("twist: quarter-turn rotation in both planes (c1 = 0, s1 = 1, c2 = 0, s2 = 1)");
            println!("tuple: ({})", tuple_strings.join(", "));
            println!("lhs  {}: {}", LHS_LABEL, lhs);
            println!("rhs  {}: {}", RHS_LABEL, rhs);
            println!("difference: {}", diff);
            println!("verdict: {}", verdict);
        }
        Format::JsonLike => {
            let doc = json!({
                "schema": "nambu-counterexample-v1",
                "name": "cross4-theta",
                "algebra": alg.id,
                "tuple": tuple_strings,
                "lhs": lhs.to_string(),
                "rhs": rhs.to_string(),
                "difference": diff.to_string(),
                "equal": equal,
                "verdict": verdict,
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&doc).expect("report serialization cannot fail")
            );
        }
    }
    Ok(if equal { EXIT_PASS } else { EXIT_VIOLATIONS })
}

struct JacobianSides<R: Ring> {
    twist_line: String,
    tuple: [Element<R>; 5],
    lhs: Element<R>,
    rhs: Element<R>,
    diff: Element<R>,
}

/// Evaluate the shifted-cube tuple on the substitution-twisted Jacobian
/// bracket. The shift constant is whatever the ring supplies: a symbolic
/// variable for the generic computation, a plain scalar when bound.
fn jacobian_k4_sides<R: Ring>(one: &R, k4: R) -> Result<JacobianSides<R>> {
    let alg = jacobian3::algebra(one.clone());
    let zero3: Poly<R> = Poly::zero(3);
    let gamma = GammaMap::upper(
        [one.clone(), one.clone(), one.clone()],
        zero3.clone(),
        zero3,
        k4,
    )?;
    let images = gamma.images();
    let twist_line = format!(
        "twist: gamma = ({}, {}, {}) with k1 = k2 = k3 = 1, p1 = p2 = 0",
        images[0], images[1], images[2]
    );
    let rho = gamma_endo(&gamma);
    let sample: Vec<_> = all_triples(&jacobian3::monomial_elements(one, 1)).collect();
    let alg = alg.twist_by_endomorphism(rho, sample.iter())?;
    let mono = |exps: [u32; 3]| Element::basis(BasisKey::monomial(exps), one.clone());
    let tuple = [
        mono([1, 0, 0]),
        mono([0, 1, 0]),
        mono([0, 0, 3]),
        mono([2, 0, 0]),
        mono([0, 1, 1]),
    ];
    let (lhs, rhs) = plain_identity_sides(&alg, &tuple)?;
    let diff = &lhs - &rhs;
    Ok(JacobianSides {
        twist_line,
        tuple,
        lhs,
        rhs,
        diff,
    })
}

/// The factored forms the two sides collapse to, built by ring arithmetic
/// so the printed annotations are certified rather than quoted.
fn k4_expected_sides(one: &K4Poly) -> Result<(Element<K4Poly>, Element<K4Poly>)> {
    let x1 = Poly::variable(3, 0, one);
    let x3 = Poly::variable(3, 2, one);
    let k4 = Poly::constant(3, K4Poly::k4());
    let int = |n: i64| K4Poly::constant(Scalar::from_int(n));
    let shifted_twice = &x3 + &k4.scale(&int(2));
    let lhs = (&(&shifted_twice * &shifted_twice) * &x1).scale(&int(18));
    let a = &x3 + &k4;
    let b = &x3.scale(&int(3)) + &k4.scale(&int(5));
    let rhs = (&(&a * &b) * &x1).scale(&int(6));
    Ok((Element::from_poly3(&lhs)?, Element::from_poly3(&rhs)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum K4Verdict {
    Identical,
    EqualIffZero,
    Undetermined,
}

/// Decide the equality locus of the two sides from their difference, an
/// element whose coefficients are polynomials in the shift constant. The
/// sides agree exactly at the common roots of those coefficients: if every
/// coefficient vanishes at zero, zero is in the locus; if some coefficient
/// is a single monomial, zero is its only root, so the locus is exactly
/// {0}. Anything else is reported as undetermined rather than guessed.
fn classify_k4_difference(diff: &Element<K4Poly>) -> K4Verdict {
    if diff.is_zero() {
        return K4Verdict::Identical;
    }
    let vanishes_at_zero = diff.terms().all(|(_, c)| c.0.coeff(&[0]).is_none());
    let forces_zero = diff.terms().any(|(_, c)| c.0.num_terms() == 1);
    if vanishes_at_zero && forces_zero {
        K4Verdict::EqualIffZero
    } else {
        K4Verdict::Undetermined
    }
}

fn counterexample_jacobian_k4(args: &CounterexampleArgs) -> Result<i32> {
    match &args.k4 {
        None => {
            let one = K4Poly::constant(Scalar::one());
            let sides = jacobian_k4_sides(&one, K4Poly::k4())?;
            let (expected_lhs, expected_rhs) = k4_expected_sides(&one)?;
            let lhs_factored =
                (sides.lhs == expected_lhs).then_some("18*x1*(x3 + 2*k4)^2");
            let rhs_factored =
                (sides.rhs == expected_rhs).then_some("6*x1*(x3 + k4)*(3*x3 + 5*k4)");
            let verdict = match classify_k4_difference(&sides.diff) {
                K4Verdict::Identical => "sides are identical for every k4",
                K4Verdict::EqualIffZero => "sides are equal if and only if k4 = 0",
                K4Verdict::Undetermined => {
                    "sides differ as polynomials in k4; equality locus not characterized"
                }
            };
            let equal = sides.diff.is_zero();
            emit_jacobian_k4(args, &sides, lhs_factored, rhs_factored, verdict, equal);
            Ok(if equal { EXIT_PASS } else { EXIT_VIOLATIONS })
        }
        Some(text) => {
            let value: Scalar = text.parse()?;
            let sides = jacobian_k4_sides(&Scalar::one(), value.clone())?;
            let equal = sides.diff.is_zero();
            let verdict = if equal {
                format!("sides are identical at k4 = {}", value)
            } else {
                format!("sides differ at k4 = {}", value)
            };
            emit_jacobian_k4(args, &sides, None, None, &verdict, equal);
            Ok(if equal { EXIT_PASS } else { EXIT_VIOLATIONS })
        }
    }
}

fn emit_jacobian_k4<R: Ring>(
    args: &CounterexampleArgs,
    sides: &JacobianSides<R>,
    lhs_factored: Option<&str>,
    rhs_factored: Option<&str>,
    verdict: &str,
    equal: bool,
) {
    let tuple_strings: Vec<String> = sides.tuple.iter().map(|e| e.to_string()).collect();
    match args.format {
        Format::Text => {
            println!("counterexample: jacobian-k4");
            println!("algebra: jacobian3-twisted");
            println!("{}", sides.twist_line);
            println!("tuple: ({})", tuple_strings.join(", "));
            println!("lhs  {}: {}", LHS_LABEL, sides.lhs);
            if let Some(factored) = lhs_factored {
                println!("     = {}", factored);
            }
            println!("rhs  {}: {}", RHS_LABEL, sides.rhs);
            if let Some(factored) = rhs_factored {
                println!("     = {}", factored);
            }
            println!("difference: {}", sides.diff);
            println!("verdict: {}", verdict);
        }
        Format::JsonLike => {
            let doc = json!({
                "schema": "nambu-counterexample-v1",
                "name": "jacobian-k4",
                "algebra": "jacobian3-twisted",
                "tuple": tuple_strings,
                "lhs": sides.lhs.to_string(),
                "lhs-factored": lhs_factored,
                "rhs": sides.rhs.to_string(),
                "rhs-factored": rhs_factored,
                "difference": sides.diff.to_string(),
                "equal": equal,
                "verdict": verdict,
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&doc).expect("report serialization cannot fail")
            );
        }
    }
}

fn cmd_deform(args: &DeformArgs) -> Result<i32> {
    match args.family.as_str() {
        "qvw" => {
            ensure_absent(args.degree.is_some(), "--degree", "family qvw")?;
            let z = parse_z(args.z.as_deref())?;
            let (lo, hi) = parse_range_or_default(args.range.as_deref())?;
            warn_sweep_cost(lo, hi);
            let family = build_qvw_deformation(args.order, &z, args.allow_non_nambu_lie)?;
            let basis = vw::generator_elements(&Scalar::one(), lo, hi);
            let triples: Vec<_> = all_triples(&basis).collect();
            let report = verify_deformation(&family, triples, all_tuples5(&basis))?;
            emit_deform(args, &report)
        }
        "cross4" => {
            for (present, flag) in [
                (args.z.is_some(), "--z"),
                (args.range.is_some(), "--range"),
                (args.degree.is_some(), "--degree"),
                (args.allow_non_nambu_lie, "--allow-non-nambu-lie"),
            ] {
                ensure_absent(present, flag, "family cross4")?;
            }
            let family = build_cross_deformation(args.order)?;
            let basis = cross4::basis_elements(&Scalar::one());
            let triples: Vec<_> = all_triples(&basis).collect();
            let report = verify_deformation(&family, triples, all_tuples5(&basis))?;
            emit_deform(args, &report)
        }
        "jacobian3" => {
            for (present, flag) in [
                (args.z.is_some(), "--z"),
                (args.range.is_some(), "--range"),
                (args.allow_non_nambu_lie, "--allow-non-nambu-lie"),
            ] {
                ensure_absent(present, flag, "family jacobian3")?;
            }
            let degree = args.degree.unwrap_or(3);
            let one = Scalar::one();
            let family = build_jacobian_deformation(
                (1, 1),
                &[Scalar::one(), Scalar::one(), Scalar::one()],
                args.order,
            )?;
            let basis = jacobian3::monomial_elements(&one, degree);
            let triples: Vec<_> = all_triples(&basis).collect();
            let report =
                verify_deformation(&family, triples, jacobian3::curated_tuples5(&one))?;
            emit_deform(args, &report)
        }
        other => Err(Error::InvalidParameter(format!(
            "unknown deformation family '{}'; available: qvw, cross4, jacobian3",
            other
        ))),
    }
}

fn emit_deform(args: &DeformArgs, report: &DeformationReport) -> Result<i32> {
    match args.format {
        Format::Text => {
            print!("{}", report.render_text(Some(args.max_violations)));
        }
        Format::JsonLike => {
            let doc = json!({
                "schema": "nambu-deform-v1",
                "report": report,
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&doc).expect("report serialization cannot fail")
            );
        }
    }
    Ok(if report.passed() {
        EXIT_PASS
    } else {
        EXIT_VIOLATIONS
    })
}

fn cmd_list_models() -> Result<i32> {
    println!("models (verify <model>):");
    for model in [ModelId::Cross4, ModelId::Jacobian3, ModelId::Vw] {
        println!("  {:<10} {}", model.as_str(), model.describe());
    }
    println!();
    println!("deformation families (deform <family> --order N):");
    println!(
        "  {:<10} one-parameter scaling family over the Virasoro-Witt bracket; --z, --range",
        "qvw"
    );
    println!(
        "  {:<10} two-parameter rotation family over the ternary cross product",
        "cross4"
    );
    println!(
        "  {:<10} four-parameter substitution family over the Jacobian bracket; --degree",
        "jacobian3"
    );
    Ok(EXIT_PASS)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize) -> Element<Scalar> {
        Element::basis(BasisKey::e(i), Scalar::one())
    }

    #[test]
    fn cross4_theta_sides_are_the_known_pair() {
        let one = Scalar::one();
        let alg = cross4::algebra(one.clone());
        let basis = cross4::basis_elements(&one);
        let rho = cross4::rho_theta_exact(
            &Scalar::zero(),
            &Scalar::one(),
            &Scalar::zero(),
            &Scalar::one(),
        )
        .unwrap();
        let sample: Vec<_> = all_triples(&basis).collect();
        let alg = alg
            .twist_by_endomorphism(LinearMap::Matrix(rho), sample.iter())
            .unwrap();
        let (lhs, rhs) = plain_identity_sides(&alg, &mixed_tuple(&one)).unwrap();
        assert_eq!(lhs, &e(1) + &e(2));
        assert_eq!(rhs, (&e(1) + &e(2)).scale_int(-1));
    }

    #[test]
    fn jacobian_k4_sides_match_the_factored_forms() {
        let one = K4Poly::constant(Scalar::one());
        let sides = jacobian_k4_sides(&one, K4Poly::k4()).unwrap();
        let (lhs, rhs) = k4_expected_sides(&one).unwrap();
        assert_eq!(sides.lhs, lhs);
        assert_eq!(sides.rhs, rhs);
        assert_eq!(
            classify_k4_difference(&sides.diff),
            K4Verdict::EqualIffZero
        );
    }

    #[test]
    fn jacobian_k4_bound_to_zero_gives_identical_sides() {
        let sides = jacobian_k4_sides(&Scalar::one(), Scalar::zero()).unwrap();
        assert!(sides.diff.is_zero());
        let sides = jacobian_k4_sides(&Scalar::one(), Scalar::from_int(2)).unwrap();
        assert!(!sides.diff.is_zero());
    }

    #[test]
    fn k4_classifier_is_conservative() {
        let mono = |exps: [u32; 3], p: Poly<Scalar>| {
            Element::basis(BasisKey::monomial(exps), K4Poly(p))
        };
        let k4 = Poly::variable(1, 0, &Scalar::one());
        let squared = &k4 * &k4;

        let pinned = &mono([1, 0, 1], k4.scale(&Scalar::from_int(24)))
            + &mono([1, 0, 0], squared.scale(&Scalar::from_int(42)));
        assert_eq!(classify_k4_difference(&pinned), K4Verdict::EqualIffZero);

        let shifted = &k4 + &Poly::constant(1, Scalar::one());
        let offset = mono([1, 0, 0], shifted);
        assert_eq!(classify_k4_difference(&offset), K4Verdict::Undetermined);

        let two_roots = &squared - &k4;
        assert_eq!(
            classify_k4_difference(&mono([1, 0, 0], two_roots)),
            K4Verdict::Undetermined
        );

        assert_eq!(
            classify_k4_difference(&Element::zero()),
            K4Verdict::Identical
        );
    }

    #[test]
    fn misapplied_flags_are_usage_errors() {
        let cli = Cli::try_parse_from(["nambu", "verify", "cross4", "--q", "2"]).unwrap();
        assert_eq!(run(cli), EXIT_USAGE);
        let cli = Cli::try_parse_from(["nambu", "verify", "vw", "--theta", "series:2"]).unwrap();
        assert_eq!(run(cli), EXIT_USAGE);
        let cli = Cli::try_parse_from(["nambu", "verify", "nosuch"]).unwrap();
        assert_eq!(run(cli), EXIT_USAGE);
        let cli = Cli::try_parse_from(["nambu", "counterexample", "nosuch"]).unwrap();
        assert_eq!(run(cli), EXIT_USAGE);
        let cli = Cli::try_parse_from(["nambu", "deform", "qvw", "--order", "1", "--z", "1"])
            .unwrap();
        assert_eq!(run(cli), EXIT_USAGE);
    }

    #[test]
    fn exit_codes_separate_pass_from_violation() {
        let cli = Cli::try_parse_from(["nambu", "verify", "cross4"]).unwrap();
        assert_eq!(run(cli), EXIT_PASS);
        let cli = Cli::try_parse_from([
            "nambu",
            "verify",
            "cross4",
            "--theta",
            "exact:0,1,0,1",
            "--plain-nambu",
        ])
        .unwrap();
        assert_eq!(run(cli), EXIT_VIOLATIONS);
        let cli = Cli::try_parse_from(["nambu", "counterexample", "jacobian-k4", "--k4", "0"])
            .unwrap();
        assert_eq!(run(cli), EXIT_PASS);
        let cli = Cli::try_parse_from(["nambu", "list-models"]).unwrap();
        assert_eq!(run(cli), EXIT_PASS);
    }
}
