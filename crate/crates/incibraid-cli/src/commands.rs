use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::ValueEnum;
use incibraid::braidcheck::{braid_residual, small_interval_diagnostics};
use incibraid::braiding::{
    check_configuration_independence, extract_restriction, verify_structure, LambdaTensor, StructureReport, Verdict,
};
use incibraid::families::{generate, random_params, FamilyError, FamilyId, FamilyInstance};
use incibraid::scalars::Field;
use incibraid::search::{exhaustive_search, RestrictionMode, SearchError, SearchSpec, DEFAULT_LIMIT};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::format::{self, CensusBlock};
use crate::report::{InputDigest, RunReport, EXIT_CAPACITY, EXIT_INPUT};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Capacity(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Capacity(_) => EXIT_CAPACITY,
        }
    }
}

impl From<FamilyError> for CliError {
    fn from(e: FamilyError) -> CliError {
        CliError::Input(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    All,
    Counit,
    Comult,
    Support,
    Factor,
    Nondeg,
    Braid,
    Diag,
}

fn read(path: &Path, report: &mut RunReport) -> Result<String, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    report.inputs.push(InputDigest::of(path, &bytes));
    String::from_utf8(bytes).map_err(|_| CliError::Input(format!("{}: not UTF-8", path.display())))
}

fn write(path: &Path, text: &str, report: &mut RunReport) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    report.outputs.push(path.display().to_string());
    Ok(())
}

fn parse_failure(path: &Path, e: format::ParseError) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}

fn pick<'a>(s: &'a StructureReport, names: &[&str]) -> Vec<&'a Verdict> {
    s.verdicts.iter().filter(|v| names.contains(&v.check.as_str())).collect()
}

/// The requested verdicts for one tensor, in a fixed order.
pub fn checks_for(t: &LambdaTensor, kinds: &[CheckKind]) -> Vec<Verdict> {
    let want = |k: CheckKind| kinds.contains(&CheckKind::All) || kinds.contains(&k);
    let structure = verify_structure(t);
    let restriction = extract_restriction(t).ok();
    let mut out: Vec<Verdict> = Vec::new();
    if want(CheckKind::Support) {
        out.extend(pick(&structure, &["restriction", "support"]).into_iter().cloned());
    }
    if want(CheckKind::Counit) {
        out.extend(pick(&structure, &["counit"]).into_iter().cloned());
    }
    if want(CheckKind::Comult) {
        out.extend(pick(&structure, &["comultiplicativity"]).into_iter().cloned());
    }
    if want(CheckKind::Factor) {
        out.extend(pick(&structure, &["factorization"]).into_iter().cloned());
        out.push(match &restriction {
            Some(s) => check_configuration_independence(t, s),
            None => Verdict::fail("configuration-independence", "no valid restriction".into()),
        });
    }
    if want(CheckKind::Nondeg) {
        out.extend(pick(&structure, &["nondegeneracy"]).into_iter().cloned());
    }
    if want(CheckKind::Braid) {
        let b = braid_residual(t);
        out.push(match &b.witness {
            None => Verdict::pass("braid-residual"),
            Some(w) => Verdict::fail(
                "braid-residual",
                format!("coefficient {} at {:?} -> {:?}", w.coefficient, w.input, w.output),
            ),
        });
        if let Some(f) = &b.per_sextuple_failures {
            let agree = f.is_empty() == b.residual_is_zero;
            out.push(if agree {
                Verdict::pass("sextuple-agreement")
            } else {
                Verdict::fail("sextuple-agreement", format!("{} failing sextuples", f.len()))
            });
        }
    }
    if want(CheckKind::Diag) {
        out.extend(pick(&structure, &["graded-units", "cover-shapes", "vanishing-sums"]).into_iter().cloned());
        match &restriction {
            Some(s) => {
                for item in small_interval_diagnostics(t, s) {
                    let mut v = item.verdict.clone();
                    v.check = format!("item-{}{}", item.item, if item.implied { " (implied)" } else { "" });
                    out.push(v);
                }
            }
            None => out.push(Verdict::fail("small-intervals", "no valid restriction".into())),
        }
    }
    out
}

pub fn run_check(
    command: Vec<String>,
    poset_path: &Path,
    lambda_path: &Path,
    kinds: &[CheckKind],
    transpose: bool,
) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let mut report = RunReport::new(command);
    let p = format::parse_poset(&read(poset_path, &mut report)?).map_err(|e| parse_failure(poset_path, e))?;
    let t = format::parse_lambda(&p, &read(lambda_path, &mut report)?, transpose)
        .map_err(|e| parse_failure(lambda_path, e))?;
    let kinds = if kinds.is_empty() { &[CheckKind::All][..] } else { kinds };
    for v in checks_for(&t, kinds) {
        report.push(&v);
    }
    report.settle();
    report.elapsed_ms = start.elapsed().as_millis();
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct FamilyArgs {
    pub family: String,
    /// `name=value` pairs.
    pub params: Vec<String>,
    pub random: Option<usize>,
    pub field: Field,
    pub seed: u64,
    /// A file for one instance, a directory for `random`.
    pub out: Option<PathBuf>,
    pub poset_out: Option<PathBuf>,
}

pub fn parse_instance(id: FamilyId, field: Field, params: &[String]) -> Result<FamilyInstance, CliError> {
    let mut inst = FamilyInstance::new(id, field);
    for kv in params {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| CliError::Input(format!("parameter `{kv}` is not name=value")))?;
        let x = field
            .parse(v)
            .map_err(|_| CliError::Input(format!("malformed scalar `{v}` for {field}")))?;
        inst = inst.with(k.trim(), x);
    }
    Ok(inst)
}

/// Generates one or more instances, writes them, verifies each.
pub fn run_family(command: Vec<String>, args: &FamilyArgs) -> Result<(RunReport, Vec<LambdaTensor>), CliError> {
    let start = Instant::now();
    let mut report = RunReport::new(command);
    let id: FamilyId = args.family.parse()?;
    let insts = match args.random {
        None => vec![parse_instance(id, args.field, &args.params)?],
        Some(n) => {
            if !args.params.is_empty() {
                return Err(CliError::Input("--random takes no explicit parameters".into()));
            }
            report.seed = Some(args.seed);
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            (0..n).map(|_| random_params(id, args.field, &mut rng)).collect::<Result<_, _>>()?
        }
    };
    if let (Some(dir), Some(_)) = (&args.out, args.random) {
        fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
    }
    let mut tensors = Vec::new();
    let mut failures = Vec::new();
    for (k, inst) in insts.iter().enumerate() {
        let t = generate(inst)?;
        let failed: Vec<String> = checks_for(&t, &[CheckKind::All])
            .into_iter()
            .filter(|v| !v.passed)
            .map(|v| v.check)
            .collect();
        if failed.is_empty() {
            report.notes.push(format!("{inst}: pass"));
        } else {
            report.notes.push(format!("{inst}: FAIL {}", failed.join(", ")));
            failures.push(format!("{inst}: {}", failed.join(", ")));
        }
        match (&args.out, args.random) {
            (Some(dir), Some(_)) => {
                let path = dir.join(format!("{}-{:03}.lambda", id, k + 1));
                write(&path, &format::write_lambda(&t), &mut report)?
            }
            (Some(path), None) => write(path, &format::write_lambda(&t), &mut report)?,
            (None, _) => {}
        }
        if k == 0 {
            if let Some(pp) = &args.poset_out {
                write(pp, &format::write_poset(t.poset()), &mut report)?;
            }
        }
        tensors.push(t);
    }
    report.notes.push(format!("{}/{} instances pass", insts.len() - failures.len(), insts.len()));
    report.push(&Verdict::from_witnesses("instances", failures));
    report.settle();
    report.elapsed_ms = start.elapsed().as_millis();
    Ok((report, tensors))
}

#[derive(Debug, Clone)]
pub struct SearchArgs {
    pub poset: PathBuf,
    pub field: Field,
    pub prune: bool,
    pub all_restrictions: bool,
    pub limit: u64,
    pub out: Option<PathBuf>,
}

impl SearchArgs {
    pub fn new(poset: PathBuf, field: Field) -> SearchArgs {
        SearchArgs {
            poset,
            field,
            prune: true,
            all_restrictions: false,
            limit: DEFAULT_LIMIT,
            out: None,
        }
    }
}

pub fn run_search(command: Vec<String>, args: &SearchArgs) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let mut report = RunReport::new(command);
    let p = format::parse_poset(&read(&args.poset, &mut report)?).map_err(|e| parse_failure(&args.poset, e))?;
    let mut spec = SearchSpec::flip(p.clone(), args.field);
    spec.pruning = args.prune;
    spec.limit = args.limit;
    if args.all_restrictions {
        spec.restriction = RestrictionMode::EnumerateAll;
    }
    let census = exhaustive_search(&spec).map_err(|e| match e {
        SearchError::CapExceeded { .. } => CliError::Capacity(e.to_string()),
        _ => CliError::Input(e.to_string()),
    })?;
    report.notes.push(census.to_string());
    report.notes.push(format!(
        "{} restriction(s), free coordinates {:?}",
        census.restrictions, census.free_coordinates
    ));
    let blocks: Vec<CensusBlock> = census
        .solutions
        .iter()
        .map(|e| CensusBlock {
            tensor: e.tensor.clone(),
            matches: e.matches.iter().map(|m| m.to_string()).collect(),
        })
        .collect();
    if let Some(out) = &args.out {
        write(out, &format::write_census(&p, args.field, &blocks), &mut report)?;
    }
    let unmatched = census.solutions.len() - census.covered();
    report.push(&if unmatched == 0 {
        Verdict::pass("family-coverage")
    } else {
        Verdict::fail("family-coverage", format!("{unmatched} solutions match no family"))
    });
    report.settle();
    report.elapsed_ms = start.elapsed().as_millis();
    Ok(report)
}
