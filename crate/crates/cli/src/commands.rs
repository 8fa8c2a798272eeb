use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use mathrepro::env::{
    active_manifest, collect_versioninfo, registry_from_env, tree_hash, verify_manifest,
    write_manifest, EnvError, ManifestFile, ProjectFile, Registry, Verbosity,
};
use mathrepro::kernel::{snf_euclidean, snf_integer, IntMatrix, Integer};
use mathrepro::mrdi::{
    canonical_bytes, read_value, validate, MrdiError, Session, TypeRegistry, UpgradeRegistry,
    CURRENT_FORMAT_VERSION,
};
use mathrepro::runner::{check_document, fix_document, DoctestError, Environment, RunOptions, Totals, Value};
use serde_json::{json, Value as Json};
use thiserror::Error;

use crate::{Command, DoctestArgs, DoctestCommand, EnvCommand, RegistryArg};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
    #[error("{0}")]
    Format(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Format(_) => 3,
        }
    }
}

impl From<MrdiError> for CliError {
    fn from(e: MrdiError) -> Self {
        CliError::Format(e.to_string())
    }
}

impl From<EnvError> for CliError {
    fn from(e: EnvError) -> Self {
        match e {
            EnvError::NoRegistry => CliError::Usage(e.to_string()),
            EnvError::UnresolvableDependency { .. } | EnvError::InvalidBound { .. } => {
                CliError::Failed(e.to_string())
            }
            EnvError::Io { .. } | EnvError::Parse { .. } => CliError::Format(e.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

const OK: u8 = 0;
const FAILED: u8 = 1;

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::Format(format!("{}: {e}", path.display())))
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| CliError::Format(format!("{}: {e}", path.display())))
}

fn print_json(value: &Json) {
    println!("{}", serde_json::to_string_pretty(value).expect("JSON values serialize"));
}

pub fn dispatch(command: Command) -> Result<u8> {
    match command {
        Command::Eval { script } => eval(&script),
        Command::Save { out, expr } => save(&out, &expr),
        Command::Show { file, json } => show(&file, json),
        Command::Validate { file, json } => validate_file(&file, json),
        Command::Upgrade { file, to, output } => upgrade(&file, to, output.as_deref()),
        Command::Snf { matrix, generic, json } => snf(&matrix, generic, json),
        Command::Versioninfo { full, manifest, json } => versioninfo(full, manifest.as_deref(), json),
        Command::HashTree { dir, json } => hash_tree(&dir, json),
        Command::Env(EnvCommand::WriteManifest { project, registry, output }) => {
            env_write_manifest(&project, registry, &output)
        }
        Command::Env(EnvCommand::Verify { manifest, registry, json }) => env_verify(&manifest, registry, json),
        Command::Doctest(DoctestCommand::Check(args)) => doctest(args, false),
        Command::Doctest(DoctestCommand::Fix(args)) => doctest(args, true),
    }
}

fn environment() -> Environment {
    let mut env = Environment::new(".");
    env.set_manifest(active_manifest(Path::new(".")));
    env
}

fn eval(script: &Path) -> Result<u8> {
    let src = if script == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Format(format!("standard input: {e}")))?;
        s
    } else {
        read_text(script)?
    };
    let out = environment().run(&src);
    for line in &out.lines {
        println!("{line}");
    }
    match out.error {
        Some(e) => Err(CliError::Failed(e.to_string())),
        None => Ok(OK),
    }
}

fn save(out: &Path, expr: &str) -> Result<u8> {
    let mut env = environment();
    let value = env.value_of(expr).map_err(|e| CliError::Failed(e.to_string()))?;
    let obj = value
        .to_object()
        .ok_or_else(|| CliError::Failed(format!("cannot save a value of type {}", value.type_name())))?;
    Session::new().save_file(out, &obj)?;
    Ok(OK)
}

fn show(file: &Path, json: bool) -> Result<u8> {
    let mut session = Session::new();
    let obj = session.load_file(file)?;
    let type_name = obj.type_name();
    let value = Value::from(obj);
    for w in session.warnings() {
        eprintln!("warning: {w}");
    }
    if json {
        print_json(&json!({
            "file": file.display().to_string(),
            "type": type_name,
            "value": value.to_string(),
            "warnings": session.warnings(),
        }));
    } else {
        for line in value.lines() {
            println!("{line}");
        }
    }
    Ok(OK)
}

fn validate_file(file: &Path, json: bool) -> Result<u8> {
    let doc = read_value(file)?;
    let violations = validate(&doc, &TypeRegistry::standard());
    if json {
        print_json(&json!({
            "file": file.display().to_string(),
            "valid": violations.is_empty(),
            "violations": violations,
        }));
    } else if violations.is_empty() {
        println!("{}: valid", file.display());
    } else {
        for v in &violations {
            println!("{}: {v}", file.display());
        }
    }
    Ok(if violations.is_empty() { OK } else { FAILED })
}

fn upgrade(file: &Path, to: Option<u64>, output: Option<&Path>) -> Result<u8> {
    let doc = read_value(file)?;
    let target = to.unwrap_or(CURRENT_FORMAT_VERSION);
    let upgraded = UpgradeRegistry::standard().upgrade(&doc, target)?;
    let mut bytes = canonical_bytes(&upgraded);
    bytes.push(b'\n');
    match output {
        Some(path) => write_bytes(path, &bytes)?,
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|e| CliError::Format(format!("standard output: {e}")))?,
    }
    Ok(OK)
}

/// One row per line, whitespace-separated decimal integers; blank lines and
/// lines starting with `#` are skipped.
pub fn parse_matrix(text: &str, path: &Path) -> Result<IntMatrix> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<Integer>().map_err(|_| {
                    CliError::Format(format!("{}:{}: '{tok}' is not an integer", path.display(), i + 1))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    IntMatrix::from_rows(rows).map_err(|e| CliError::Format(format!("{}: {e}", path.display())))
}

fn snf(matrix: &Path, generic: bool, json: bool) -> Result<u8> {
    let m = parse_matrix(&read_text(matrix)?, matrix)?;
    let s = if generic { snf_euclidean(&m) } else { snf_integer(&m) };
    if json {
        let rows: Vec<Vec<String>> = s
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(|v| v.to_string()).collect())
            .collect();
        let diagonal: Vec<String> = s.diag().iter().map(|v| v.to_string()).collect();
        print_json(&json!({
            "implementation": if generic { "euclidean" } else { "integer" },
            "rows": rows,
            "diagonal": diagonal,
        }));
    } else {
        for line in s.lines() {
            println!("{line}");
        }
    }
    Ok(OK)
}

fn versioninfo(full: bool, manifest: Option<&Path>, json: bool) -> Result<u8> {
    let manifest = match manifest {
        Some(path) => Some(ManifestFile::read(path)?),
        None => active_manifest(Path::new(".")),
    };
    let verbosity = if full { Verbosity::Full } else { Verbosity::Brief };
    let report = collect_versioninfo(verbosity, manifest.as_ref());
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{report}");
    }
    Ok(OK)
}

fn hash_tree(dir: &Path, json: bool) -> Result<u8> {
    if !dir.is_dir() {
        return Err(CliError::Format(format!("{}: not a directory", dir.display())));
    }
    let digest = tree_hash(dir)?;
    if json {
        print_json(&json!({ "path": dir.display().to_string(), "tree_hash": digest }));
    } else {
        println!("{digest}");
    }
    Ok(OK)
}

fn registry(arg: RegistryArg) -> Result<Registry> {
    let root = arg.registry.or_else(registry_from_env).ok_or(EnvError::NoRegistry)?;
    if !root.is_dir() {
        return Err(CliError::Format(format!("{}: registry is not a directory", root.display())));
    }
    Ok(Registry::new(root))
}

fn env_write_manifest(project: &Path, reg: RegistryArg, output: &Path) -> Result<u8> {
    let registry = registry(reg)?;
    let project = ProjectFile::read(project)?;
    let manifest = write_manifest(&project, &registry)?;
    manifest.write(output)?;
    println!("wrote {} ({} packages)", output.display(), manifest.deps.len());
    Ok(OK)
}

fn env_verify(manifest_path: &Path, reg: RegistryArg, json: bool) -> Result<u8> {
    let registry = registry(reg)?;
    let manifest = ManifestFile::read(manifest_path)?;
    let found = verify_manifest(&manifest, &registry);
    if json {
        print_json(&json!({
            "manifest": manifest_path.display().to_string(),
            "clean": found.is_empty(),
            "discrepancies": found,
        }));
    } else if found.is_empty() {
        println!("{}: {} packages verified", manifest_path.display(), manifest.deps.len());
    } else {
        for d in &found {
            println!("{d}");
        }
    }
    Ok(if found.is_empty() { OK } else { FAILED })
}

fn doctest_error(path: &Path, e: DoctestError) -> CliError {
    CliError::Format(format!("{}: {e}", path.display()))
}

fn doctest(args: DoctestArgs, fix: bool) -> Result<u8> {
    let prelude = args.prelude.as_deref().map(read_text).transpose()?;
    let mut totals = Totals::default();
    let mut reports = Vec::new();
    let mut text_out = Vec::new();
    let mut fixed: Vec<String> = Vec::new();
    for path in &args.docs {
        let name = path.display().to_string();
        let base: PathBuf = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => PathBuf::from("."),
        };
        let options = RunOptions {
            prelude: prelude.clone(),
            manifest: active_manifest(&base),
            base_dir: base,
        };
        let doc = read_text(path)?;
        let mut report = check_document(&doc, &options).map_err(|e| doctest_error(path, e))?;
        if fix {
            let new_doc = fix_document(&doc, &report).map_err(|e| doctest_error(path, e))?;
            if new_doc != doc {
                write_bytes(path, new_doc.as_bytes())?;
                fixed.push(name.clone());
                text_out.push(format!("fixed {name}"));
                report = check_document(&new_doc, &options).map_err(|e| doctest_error(path, e))?;
            }
        }
        totals.add(report.totals());
        text_out.extend(report.render_text(&name));
        reports.push(report.to_json(&name));
    }
    if args.json {
        let mut out = json!({ "documents": reports, "totals": totals });
        if fix {
            out["fixed"] = json!(fixed);
        }
        print_json(&out);
    } else {
        for line in text_out {
            println!("{line}");
        }
        println!("{totals}");
    }
    Ok(if totals.all_passed() { OK } else { FAILED })
}
