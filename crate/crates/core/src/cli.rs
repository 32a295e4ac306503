//! `witness-loophole` command-line front end.
//!
//! Exit codes: 0 success, 2 input or format error, 3 semantic or dimension
//! error, 4 nothing to certify.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::adversary::{verify_for_state, VerificationReport};
use crate::decomposition::{
    decompose, decompose_per_party, gellmann_basis, pauli_basis, validate_witness,
    WitnessDecomposition,
};
use crate::error::Error;
use crate::loophole::{
    analyze, contour_grid, eta_minus_threshold, uniform_axis, wm_bound, wm_bound_qubits,
    EfficiencyPair, EtaThreshold, LoopholeReport,
};
use crate::operator::{hermitian_eigenvalues, hs_inner, HermitianOperator};
use crate::optimizer::{optimize_two_qubit, OptimalDecomposition};
use crate::random;
use crate::report::{canonical_json, contour_csv, format12, WitnessFile};
use crate::witnesses;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SEMANTIC: i32 = 3;
pub const EXIT_NOTHING_TO_CERTIFY: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "witness-loophole",
    version,
    about = "Detector-efficiency thresholds for entanglement witnesses"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisChoice {
    Pauli,
    Gellmann,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyDecomposition {
    /// Optimal rotated-Pauli settings for two qubits, Pauli otherwise.
    Auto,
    Pauli,
    Gellmann,
    Optimal,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Expand a witness in a local basis and write the analysis report.
    Decompose {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "pauli")]
        basis: BasisChoice,
        /// Report destination; `-` for standard output.
        #[arg(long, default_value = "-")]
        output: String,
        /// Measured <W>_m, enables the threshold section.
        #[arg(long, allow_hyphen_values = true)]
        wm: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        eta_plus: f64,
        /// Enables the certification verdict.
        #[arg(long)]
        eta_minus: Option<f64>,
    },
    /// Minimal lost-events efficiency, or the bound on <W>_m for given efficiencies.
    Threshold {
        #[arg(long, allow_hyphen_values = true)]
        wm: f64,
        #[arg(long, allow_hyphen_values = true, requires = "abs_sum", conflicts_with = "input")]
        c0: Option<f64>,
        #[arg(long, requires = "c0")]
        abs_sum: Option<f64>,
        /// Witness file; two-qubit witnesses use the optimal decomposition.
        #[arg(long, required_unless_present = "c0")]
        input: Option<PathBuf>,
        #[arg(long)]
        eta_plus: Option<f64>,
        #[arg(long)]
        eta_minus: Option<f64>,
        #[arg(long)]
        output: Option<String>,
    },
    /// Grid of the <W>_m bound over (eta_plus, eta_minus) as CSV.
    Contour {
        #[arg(long, default_value_t = 0.25, allow_hyphen_values = true)]
        c0: f64,
        #[arg(long, default_value_t = 0.75)]
        abs_sum: f64,
        /// Points per axis, at k/N for k = 1..N.
        #[arg(long, default_value_t = 101)]
        grid: usize,
        #[arg(long, default_value = "-")]
        output: String,
    },
    /// Closed-form worst case against the count-level adversary for a state.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        eta_minus: f64,
        #[arg(long, default_value_t = 1.0)]
        eta_plus: f64,
        /// Ideal events per setting.
        #[arg(long)]
        shots: u64,
        #[arg(long, value_enum, default_value = "auto")]
        decomposition: VerifyDecomposition,
        #[arg(long)]
        output: Option<String>,
    },
    /// Search random two-qubit witnesses for the lowest efficiency threshold.
    ConjectureScan {
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<String>,
    },
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn nothing_to_certify(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_NOTHING_TO_CERTIFY,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidEfficiency(_) => EXIT_INPUT,
            _ => EXIT_SEMANTIC,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = write!(err, "{e}");
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    match cmd {
        Command::Decompose {
            input,
            basis,
            output,
            wm,
            eta_plus,
            eta_minus,
        } => cmd_decompose(&input, basis, &output, wm, eta_plus, eta_minus, out, err),
        Command::Threshold {
            wm,
            c0,
            abs_sum,
            input,
            eta_plus,
            eta_minus,
            output,
        } => cmd_threshold(wm, c0.zip(abs_sum), input.as_deref(), eta_plus, eta_minus, output.as_deref(), out),
        Command::Contour {
            c0,
            abs_sum,
            grid,
            output,
        } => cmd_contour(c0, abs_sum, grid, &output, out, err),
        Command::Verify {
            input,
            state,
            eta_minus,
            eta_plus,
            shots,
            decomposition,
            output,
        } => cmd_verify(&input, &state, eta_minus, eta_plus, shots, decomposition, output.as_deref(), out),
        Command::ConjectureScan {
            samples,
            seed,
            output,
        } => cmd_conjecture_scan(samples, seed, output.as_deref(), out),
    }
}

fn io_line(out: &mut dyn Write, line: std::fmt::Arguments) -> CliResult<()> {
    writeln!(out, "{line}").map_err(|e| CliError::input(format!("cannot write output: {e}")))
}

macro_rules! say {
    ($out:expr, $($arg:tt)*) => {
        io_line($out, format_args!($($arg)*))
    };
}

fn read_operator(path: &Path) -> CliResult<(HermitianOperator, Option<String>)> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let file = WitnessFile::parse(&text)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let op = file.to_operator().map_err(|e| CliError {
        code: EXIT_SEMANTIC,
        message: format!("{}: {e}", path.display()),
    })?;
    Ok((op, file.label))
}

fn write_text(dest: &str, text: &str, out: &mut dyn Write) -> CliResult<()> {
    if dest == "-" {
        out.write_all(text.as_bytes())
            .map_err(|e| CliError::input(format!("cannot write output: {e}")))
    } else {
        fs::write(dest, text).map_err(|e| CliError::input(format!("cannot write {dest}: {e}")))
    }
}

fn efficiencies(eta_plus: f64, eta_minus: f64) -> CliResult<EfficiencyPair> {
    Ok(EfficiencyPair::new(eta_plus, eta_minus)?)
}

fn expand(w: &HermitianOperator, basis: BasisChoice) -> CliResult<WitnessDecomposition> {
    Ok(match basis {
        BasisChoice::Pauli => decompose(w, &pauli_basis())?,
        BasisChoice::Gellmann => {
            let bases = w
                .dims()
                .iter()
                .map(|&d| gellmann_basis(d))
                .collect::<crate::Result<Vec<_>>>()?;
            decompose_per_party(w, &bases)?
        }
    })
}

#[derive(Debug, Serialize)]
struct SettingSummary {
    label: String,
    coefficient: f64,
    lambda_min: f64,
    lambda_max: f64,
}

#[derive(Debug, Serialize)]
struct DecompositionSummary {
    c0: f64,
    settings: Vec<SettingSummary>,
    abs_sum: f64,
}

impl DecompositionSummary {
    fn of(dec: &WitnessDecomposition) -> Self {
        Self {
            c0: dec.c0(),
            settings: dec
                .settings()
                .iter()
                .map(|s| SettingSummary {
                    label: s.label().to_string(),
                    coefficient: s.coefficient(),
                    lambda_min: s.spectrum().lambda_min(),
                    lambda_max: s.spectrum().lambda_max(),
                })
                .collect(),
            abs_sum: dec.abs_sum(),
        }
    }
}

#[derive(Debug, Serialize)]
struct ThresholdSection {
    wm: f64,
    /// From the expansion in the requested basis.
    basis: EtaThreshold,
    /// From the optimal decomposition (two qubits only).
    #[serde(skip_serializing_if = "Option::is_none")]
    optimal: Option<EtaThreshold>,
}

#[derive(Debug, Serialize)]
struct Certification {
    wm: f64,
    efficiencies: EfficiencyPair,
    analysis: LoopholeReport,
}

#[derive(Debug, Serialize)]
struct AnalysisReport {
    label: Option<String>,
    dims: Vec<usize>,
    basis: String,
    decomposition: DecompositionSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    optimal_decomposition: Option<OptimalDecomposition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    thresholds: Option<ThresholdSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certification: Option<Certification>,
}

fn sum_omega_minus(dec: &WitnessDecomposition) -> f64 {
    dec.settings()
        .iter()
        .map(|s| crate::loophole::omega(s.coefficient(), s.spectrum()).1)
        .sum()
}

#[allow(clippy::too_many_arguments)]
fn cmd_decompose(
    input: &Path,
    basis: BasisChoice,
    output: &str,
    wm: Option<f64>,
    eta_plus: f64,
    eta_minus: Option<f64>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult<()> {
    let (w, label) = read_operator(input)?;
    let dec = expand(&w, basis)?;
    let optimal = if w.dims() == [2, 2] {
        Some(optimize_two_qubit(&w)?)
    } else {
        None
    };
    let optimal_dec = optimal.as_ref().map(|o| o.to_decomposition()).transpose()?;

    let thresholds = wm
        .map(|wm| -> CliResult<ThresholdSection> {
            Ok(ThresholdSection {
                wm,
                basis: eta_minus_threshold(wm, dec.c0(), sum_omega_minus(&dec))?,
                optimal: optimal
                    .as_ref()
                    .map(|o| eta_minus_threshold(wm, o.c0, o.abs_sum))
                    .transpose()?,
            })
        })
        .transpose()?;
    let certification = match (wm, eta_minus) {
        (Some(wm), Some(em)) => {
            let eff = efficiencies(eta_plus, em)?;
            let best = optimal_dec.as_ref().unwrap_or(&dec);
            Some(Certification {
                wm,
                efficiencies: eff,
                analysis: analyze(best, eff, wm)?,
            })
        }
        (None, Some(_)) => return Err(CliError::input("--eta-minus requires --wm")),
        _ => None,
    };

    let report = AnalysisReport {
        label,
        dims: w.dims().to_vec(),
        basis: format!("{basis:?}").to_lowercase(),
        decomposition: DecompositionSummary::of(&dec),
        optimal_decomposition: optimal,
        thresholds,
        certification,
    };
    write_text(output, &canonical_json(&report), out)?;
    // keep stdout pure JSON when the report goes there
    let summary: &mut dyn Write = if output == "-" { err } else { out };
    say!(summary, "c0 = {}", format12(dec.c0()))?;
    say!(summary, "sum|c_a| = {}", format12(dec.abs_sum()))?;
    say!(summary, "settings = {}", dec.settings().len())?;
    if let Some(o) = &report.optimal_decomposition {
        say!(summary, "optimal sum|c_a| = {}", format12(o.abs_sum))?;
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct ThresholdReport {
    wm: f64,
    c0: f64,
    /// `sum omega_-`, equal to `sum |c_a|` for +-1 spectra.
    abs_sum: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    eta_minus_threshold: Option<EtaThreshold>,
    #[serde(skip_serializing_if = "Option::is_none")]
    efficiencies: Option<EfficiencyPair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wm_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certified: Option<bool>,
}

fn cmd_threshold(
    wm: f64,
    direct: Option<(f64, f64)>,
    input: Option<&Path>,
    eta_plus: Option<f64>,
    eta_minus: Option<f64>,
    output: Option<&str>,
    out: &mut dyn Write,
) -> CliResult<()> {
    if !wm.is_finite() {
        return Err(CliError::input("--wm must be finite"));
    }
    if wm >= 0.0 {
        return Err(CliError::nothing_to_certify(format!(
            "<W>_m = {wm} is not negative: not certifiable"
        )));
    }
    // Either the qubit formulas on (c0, abs_sum) or the general ones on a file.
    let dec = match (direct, input) {
        (Some(_), _) => None,
        (None, Some(path)) => {
            let (w, _) = read_operator(path)?;
            Some(if w.dims() == [2, 2] {
                optimize_two_qubit(&w)?.to_decomposition()?
            } else if w.dims().iter().all(|&d| d == 2) {
                decompose(&w, &pauli_basis())?
            } else {
                expand(&w, BasisChoice::Gellmann)?
            })
        }
        (None, None) => return Err(CliError::input("give --c0 and --abs-sum, or --input")),
    };
    let (c0, abs_sum) = match (&dec, direct) {
        (Some(d), _) => (d.c0(), sum_omega_minus(d)),
        (None, Some(pair)) => pair,
        (None, None) => unreachable!("checked above"),
    };

    let mut report = ThresholdReport {
        wm,
        c0,
        abs_sum,
        eta_minus_threshold: None,
        efficiencies: None,
        wm_bound: None,
        certified: None,
    };
    match eta_minus {
        Some(em) => {
            let eff = efficiencies(eta_plus.unwrap_or(1.0), em)?;
            let bound = match &dec {
                Some(d) => wm_bound(d, eff),
                None => wm_bound_qubits(c0, abs_sum, eff),
            };
            let certified = wm < bound;
            say!(out, "wm_bound = {}", format12(bound))?;
            if certified {
                say!(out, "certified: <W>_m = {} < {}", format12(wm), format12(bound))?;
            } else {
                say!(out, "not certifiable at eta_plus = {}, eta_minus = {}", format12(eff.eta_plus()), format12(em))?;
            }
            report.efficiencies = Some(eff);
            report.wm_bound = Some(bound);
            report.certified = Some(certified);
        }
        None => {
            if eta_plus.is_some_and(|p| p != 1.0) {
                return Err(CliError::input(
                    "the eta_minus threshold assumes eta_plus = 1; pass --eta-minus to evaluate the bound instead",
                ));
            }
            let t = eta_minus_threshold(wm, c0, abs_sum)?;
            if let EtaThreshold::Threshold(v) = t {
                say!(out, "eta_minus_threshold = {}", format12(v))?;
                say!(out, "eta_minus > {v:.4}")?;
                if v >= 1.0 {
                    say!(out, "not certifiable: threshold reaches 1")?;
                }
            }
            report.eta_minus_threshold = Some(t);
        }
    }
    if let Some(dest) = output {
        write_text(dest, &canonical_json(&report), out)?;
    }
    Ok(())
}

fn cmd_contour(
    c0: f64,
    abs_sum: f64,
    n: usize,
    output: &str,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult<()> {
    if n < 2 {
        return Err(CliError::input(format!("--grid must be at least 2, got {n}")));
    }
    if !(c0.is_finite() && abs_sum.is_finite() && abs_sum >= 0.0) {
        return Err(CliError::input("--c0 must be finite and --abs-sum nonnegative"));
    }
    let axis = uniform_axis(n);
    let grid = contour_grid(c0, abs_sum, &axis, &axis)?;
    write_text(output, &contour_csv(&grid), out)?;
    if output != "-" {
        say!(err, "wrote {n}x{n} grid to {output}")?;
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    decomposition: String,
    efficiencies: EfficiencyPair,
    shots: u64,
    wt: f64,
    wm_bound: f64,
    entangled_by_witness: bool,
    verification: VerificationReport,
}

const STATE_TOL: f64 = 1e-8;

fn check_state(rho: &HermitianOperator) -> CliResult<()> {
    let semantic = |m: String| CliError {
        code: EXIT_SEMANTIC,
        message: m,
    };
    if (rho.trace() - 1.0).abs() > STATE_TOL {
        return Err(semantic(format!("state has trace {}, expected 1", rho.trace())));
    }
    let lmin = hermitian_eigenvalues(rho).lambda_min();
    if lmin < -STATE_TOL {
        return Err(semantic(format!("state is not positive semidefinite: eigenvalue {lmin:e}")));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    input: &Path,
    state: &Path,
    eta_minus: f64,
    eta_plus: f64,
    shots: u64,
    choice: VerifyDecomposition,
    output: Option<&str>,
    out: &mut dyn Write,
) -> CliResult<()> {
    if shots == 0 {
        return Err(CliError::input("--shots must be positive"));
    }
    let eff = efficiencies(eta_plus, eta_minus)?;
    let (w, _) = read_operator(input)?;
    let (rho, _) = read_operator(state)?;
    if rho.dims() != w.dims() {
        return Err(CliError {
            code: EXIT_SEMANTIC,
            message: format!("state dims {:?} do not match witness dims {:?}", rho.dims(), w.dims()),
        });
    }
    check_state(&rho)?;

    let two_qubit = w.dims() == [2, 2];
    let (dec, name) = match choice {
        VerifyDecomposition::Auto if two_qubit => (optimize_two_qubit(&w)?.to_decomposition()?, "optimal"),
        VerifyDecomposition::Optimal => (optimize_two_qubit(&w)?.to_decomposition()?, "optimal"),
        VerifyDecomposition::Gellmann => (expand(&w, BasisChoice::Gellmann)?, "gellmann"),
        VerifyDecomposition::Auto | VerifyDecomposition::Pauli => (expand(&w, BasisChoice::Pauli)?, "pauli"),
    };
    let wt = hs_inner(&w, &rho)?;
    let bound = wm_bound(&dec, eff);
    let verification = verify_for_state(&dec, &rho, eff, shots)?;

    say!(out, "<W>_t = {}", format12(wt))?;
    say!(out, "wm_bound (certify if <W>_m below) = {}", format12(bound))?;
    say!(out, "formula worst-case <W>_m = {}", format12(verification.formula_value))?;
    say!(out, "oracle worst-case <W>_m = {}", format12(verification.oracle_value))?;
    say!(out, "gap = {}", format12(verification.gap))?;
    say!(out, "attainability deficit = {}", format12(verification.attainability_deficit))?;
    say!(out, "discretization = {}", format12(verification.discretization))?;
    if wt >= 0.0 {
        say!(out, "note: <W>_t >= 0, the witness detects no entanglement to certify")?;
    }
    if let Some(dest) = output {
        let report = VerifyReport {
            decomposition: name.to_string(),
            efficiencies: eff,
            shots,
            wt,
            wm_bound: bound,
            entangled_by_witness: wt < 0.0,
            verification,
        };
        write_text(dest, &canonical_json(&report), out)?;
    }
    Ok(())
}

/// Random two-qubit witness from one of two families that are witnesses by
/// construction, dressed with local unitaries and a positive admixture:
/// `s1^2 Id - |psi><psi|` (s1 the largest Schmidt coefficient) and the
/// partial transpose of `|psi><psi|`.
pub fn sample_two_qubit_witness<R: rand::Rng + ?Sized>(rng: &mut R) -> HermitianOperator {
    let psi = random::haar_state(4, rng);
    let base = if rng.random_bool(0.5) {
        let m = nalgebra::DMatrix::from_fn(2, 2, |r, c| psi[2 * r + c]);
        let s1 = m.singular_values()[0];
        let p = HermitianOperator::projector(vec![2, 2], &psi).expect("projector");
        HermitianOperator::identity(vec![2, 2])
            .scale(s1 * s1)
            .add_scaled(&p, -1.0)
            .expect("same dims")
    } else {
        let p = psi.clone() * psi.adjoint();
        let pt = nalgebra::DMatrix::from_fn(4, 4, |r, c| {
            let (a, b) = (r / 2, r % 2);
            let (a2, b2) = (c / 2, c % 2);
            p[(2 * a + b2, 2 * a2 + b)]
        });
        HermitianOperator::new(vec![2, 2], pt).expect("partial transpose is Hermitian")
    };
    let u = random::unitary(2, rng).kronecker(&random::unitary(2, rng));
    let mut w = base.conjugate_by(&u).expect("4x4 unitary");
    let admix: f64 = rng.random_range(0.0..0.3);
    if admix > 0.0 {
        let rho = random::density_matrix(&[2, 2], rng);
        w = w.add_scaled(&rho, admix).expect("same dims");
    }
    let tr = w.trace();
    w.scale(1.0 / tr)
}

#[derive(Debug, Serialize)]
pub struct ScanReport {
    pub note: String,
    pub samples_requested: usize,
    pub witnesses_accepted: usize,
    pub reference_phi_plus_threshold: f64,
    pub min_threshold: Option<f64>,
    pub min_witness_lambda_min: Option<f64>,
    pub min_witness_abs_sum: Option<f64>,
    pub below_two_thirds: usize,
}

/// Best-case threshold of a two-qubit witness: measured value at its most
/// negative eigenvalue, optimal decomposition.
pub fn best_case_threshold(w: &HermitianOperator) -> crate::Result<Option<(f64, f64, f64)>> {
    let lmin = hermitian_eigenvalues(w).lambda_min();
    let opt = optimize_two_qubit(w)?;
    Ok(eta_minus_threshold(lmin, opt.c0, opt.abs_sum)?
        .value()
        .map(|t| (t, lmin, opt.abs_sum)))
}

pub fn conjecture_scan(samples: usize, seed: u64) -> crate::Result<ScanReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let reference = best_case_threshold(&witnesses::w_phi_plus())?
        .expect("phi+ witness has a negative eigenvalue")
        .0;
    let mut best: Option<(f64, f64, f64)> = None;
    let mut accepted = 0;
    let mut below = 0;
    for k in 0..samples {
        let w = sample_two_qubit_witness(&mut rng);
        let screen = validate_witness(&w, 2000, seed.wrapping_add(k as u64));
        if screen.min_product_value < -1e-9 || !screen.has_negative_eigenvalue {
            continue;
        }
        let Some(found) = best_case_threshold(&w)? else {
            continue;
        };
        accepted += 1;
        if found.0 < 2.0 / 3.0 - 1e-9 {
            below += 1;
        }
        if best.is_none_or(|b| found.0 < b.0) {
            best = Some(found);
        }
    }
    Ok(ScanReport {
        note: "conjecture exploration, not a proof".into(),
        samples_requested: samples,
        witnesses_accepted: accepted,
        reference_phi_plus_threshold: reference,
        min_threshold: best.map(|b| b.0),
        min_witness_lambda_min: best.map(|b| b.1),
        min_witness_abs_sum: best.map(|b| b.2),
        below_two_thirds: below,
    })
}

fn cmd_conjecture_scan(samples: usize, seed: u64, output: Option<&str>, out: &mut dyn Write) -> CliResult<()> {
    if samples == 0 {
        return Err(CliError::input("--samples must be at least 1"));
    }
    let report = conjecture_scan(samples, seed)?;
    say!(out, "conjecture exploration, not a proof")?;
    say!(out, "accepted witnesses: {} of {}", report.witnesses_accepted, report.samples_requested)?;
    say!(out, "reference W_phi+ threshold: {}", format12(report.reference_phi_plus_threshold))?;
    match report.min_threshold {
        Some(t) => say!(out, "minimum threshold observed: {} ({t:.4})", format12(t))?,
        None => say!(out, "minimum threshold observed: none")?,
    }
    if report.below_two_thirds > 0 {
        say!(
            out,
            "COUNTEREXAMPLE CANDIDATES: {} witnesses need eta_minus below 2/3",
            report.below_two_thirds
        )?;
    }
    if let Some(dest) = output {
        write_text(dest, &canonical_json(&report), out)?;
    }
    Ok(())
}
