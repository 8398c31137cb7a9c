use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Deserialize;
use ueb_core::hadamard::{build_umeb_from_hadamard, builtin_h3x5, ExtensionSearch, PartialHadamard};
use ueb_core::lift::{cyclic_decomposition, lift_suebk, lift_umeb, LiftOptions, PermutationDecomposition};
use ueb_core::special_basis::default_sv1bk;
use ueb_core::verify::{certify_unextendible, verify, Overall, VerifyOptions};
use ueb_core::zero_pattern::{construct_sec3, enumerate_constructions, Sec3Plan};
use ueb_core::{BasisKind, BasisSet, Complex64, ComplexMatrix};

use crate::document::{to_json_string, BasisSetDocument};
use crate::{
    CliError, Command, Construct, HadamardArgs, LiftArgs, ListArgs, Output, Sec3Args, VerifyArgs, EXIT_CERTIFIED,
    EXIT_FAILED, EXIT_INCONCLUSIVE,
};

/// Runs one command, writing reports and tables to `out`. Returns the exit code.
pub fn run(command: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Construct(Construct::Sec3(args)) => construct_sec3_cmd(&args, out),
        Command::Construct(Construct::Lift(args)) => construct_lift_cmd(&args, out),
        Command::Construct(Construct::Hadamard(args)) => construct_hadamard_cmd(&args, out),
        Command::Verify(args) => verify_cmd(&args, out),
        Command::List(args) => list_cmd(&args, out),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn stdout_err(e: std::io::Error) -> CliError {
    CliError::Io {
        path: "<stdout>".into(),
        source: e,
    }
}

pub fn load_document(path: &Path) -> Result<BasisSetDocument, CliError> {
    BasisSetDocument::from_json(&read(path)?)
}

fn emit(set: &BasisSet, output: &Output, out: &mut dyn Write) -> Result<i32, CliError> {
    let doc = BasisSetDocument::from_basis(set);
    let json = doc.to_json();
    match &output.out {
        Some(path) => write(path, &json)?,
        None => out.write_all(json.as_bytes()).map_err(stdout_err)?,
    }
    if let Some(path) = &output.csv {
        write(path, &doc.to_csv())?;
    }
    Ok(0)
}

fn construct_sec3_cmd(args: &Sec3Args, out: &mut dyn Write) -> Result<i32, CliError> {
    let plan = Sec3Plan::new(args.k, args.d, args.dprime, args.case, args.param)?;
    let phases = args.phases.system(args.k)?;
    let set = construct_sec3(&plan, &phases)?;
    emit(&set, &args.output, out)
}

#[derive(Deserialize)]
struct DecompositionFile {
    p: usize,
    q: usize,
    perms: Vec<Vec<Vec<u8>>>,
}

fn load_decomposition(source: &str, p: usize, q: usize) -> Result<PermutationDecomposition, CliError> {
    if source == "cyclic" {
        return Ok(cyclic_decomposition(p, q)?);
    }
    let file: DecompositionFile = serde_json::from_str(&read(Path::new(source))?)
        .map_err(|e| CliError::invalid(format!("malformed decomposition file: {e}")))?;
    if (file.p, file.q) != (p, q) {
        return Err(CliError::invalid(format!(
            "decomposition is {}x{}, but --p {p} --q {q} was given",
            file.p, file.q
        )));
    }
    Ok(PermutationDecomposition::from_matrices(p, q, &file.perms)?)
}

fn construct_lift_cmd(args: &LiftArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let mut inner = load_document(&args.inner)?.to_basis()?;
    let filler = if args.filler == "auto" {
        default_sv1bk(inner.d(), inner.dprime(), inner.k())?
    } else {
        load_document(Path::new(&args.filler))?.to_basis()?
    };
    let decomposition = load_decomposition(&args.decomposition, args.p, args.q)?;
    let options = LiftOptions {
        seed: args.seed,
        ..LiftOptions::default()
    };
    if inner.certificate().is_none() {
        let certificate = certify_unextendible(&inner, &VerifyOptions::new(options.tol, args.seed))?;
        inner.set_certificate(Some(certificate));
    }
    let bounded = inner
        .certificate()
        .and_then(|c| c.rank_bound())
        .is_some_and(|bound| bound < inner.k());
    let set = if bounded {
        lift_suebk(&inner, &filler, &decomposition, &options)?
    } else if inner.kind() == BasisKind::Umeb {
        lift_umeb(&inner, &filler, &decomposition, &options)?
    } else {
        return Err(CliError::invalid(
            "inner set is neither a UMEB nor certified with a complement rank bound below k",
        ));
    };
    emit(&set, &args.output, out)
}

#[derive(Deserialize)]
struct HadamardFile {
    m: usize,
    d: usize,
    rows: Vec<Vec<[f64; 2]>>,
}

fn load_hadamard(source: &str) -> Result<PartialHadamard, CliError> {
    if source == "builtin:h3x5" {
        return Ok(builtin_h3x5());
    }
    let file: HadamardFile = serde_json::from_str(&read(Path::new(source))?)
        .map_err(|e| CliError::invalid(format!("malformed Hadamard file: {e}")))?;
    if file.rows.len() != file.m || file.rows.iter().any(|r| r.len() != file.d) {
        return Err(CliError::invalid(format!("Hadamard rows do not form an {}x{} array", file.m, file.d)));
    }
    let entries = file.rows.iter().flatten().map(|&[re, im]| Complex64::new(re, im)).collect();
    Ok(PartialHadamard::new(ComplexMatrix::new(file.m, file.d, entries)?)?)
}

fn construct_hadamard_cmd(args: &HadamardArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let h = load_hadamard(&args.h)?;
    let search = ExtensionSearch {
        attempts: args.attempts,
        iters: args.iters,
        seed: args.seed,
        ..ExtensionSearch::default()
    };
    let set = build_umeb_from_hadamard(&h, args.dprime, &search)?;
    emit(&set, &args.output, out)
}

fn verify_cmd(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    if args.tol.is_nan() || args.tol <= 0.0 {
        return Err(CliError::invalid("--tol must be positive"));
    }
    let set = load_document(&args.file)?.to_basis()?;
    let report = verify(&set, args.tol, args.seed)?;
    out.write_all(to_json_string(&report).as_bytes()).map_err(stdout_err)?;
    Ok(match report.overall {
        Overall::Certified => EXIT_CERTIFIED,
        Overall::Failed => EXIT_FAILED,
        Overall::Inconclusive => EXIT_INCONCLUSIVE,
    })
}

fn list_cmd(args: &ListArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let (k, d, dprime) = (args.k, args.d, args.dprime);
    if !(2 <= k && k <= d && d <= dprime) {
        return Err(CliError::invalid(format!("need 2 <= k <= d <= d', got k={k}, d={d}, d'={dprime}")));
    }
    let plans = enumerate_constructions(k, d, dprime)?;
    let mut text = String::new();
    if plans.is_empty() {
        text.push_str(&format!("no zero-pattern construction applies to k={k}, d={d}, d'={dprime}\n"));
    } else {
        text.push_str("case  param  count  kind\n");
        for plan in &plans {
            text.push_str(&format!(
                "{:<4}  {:>5}  {:>5}  {}\n",
                plan.case.to_string(),
                plan.param,
                plan.expected_count,
                plan.kind()
            ));
        }
    }
    out.write_all(text.as_bytes()).map_err(stdout_err)?;
    Ok(0)
}
