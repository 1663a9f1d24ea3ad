//! Subcommand implementations.

use std::fs;
use std::path::{Path, PathBuf};

use interlink_core::{
    emit_html, emit_layout_json, parse_notebook, parse_relationships, render, stats, validate, BundleManifest,
    BundleOptions, Diagnostic, LayoutConfig, LayoutConfigPatch, NotebookDoc, RelationshipSet, Severity, TaxonomyStats,
    ViewerAssets,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{EmitKind, Format, Inputs, LayoutFlags, LintArgs, RenderArgs, StatsArgs};
use crate::failure::{Failure, EXIT_INVALID};

const NOTEBOOK_EXT: &str = "ipynb";
const REL_SUFFIX: &str = ".rel.json";

/// What a command prints on success, plus its exit code.
pub struct Report {
    pub code: u8,
    pub text: String,
    pub json: Value,
}

/// One notebook and its relationship file.
#[derive(Debug, Clone)]
struct Job {
    name: String,
    notebook: PathBuf,
    relationships: PathBuf,
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn sibling_relationships(notebook: &Path, dir: Option<&Path>) -> PathBuf {
    let dir = dir.or_else(|| notebook.parent()).unwrap_or(Path::new(""));
    dir.join(format!("{}{REL_SUFFIX}", stem(notebook)))
}

/// Expands a notebook path into jobs; directories give one job per notebook, sorted by name.
fn jobs(inputs: &Inputs) -> Result<(Vec<Job>, bool), Failure> {
    let nb = &inputs.notebook;
    if !nb.is_dir() {
        let relationships = inputs.relationships.clone().unwrap_or_else(|| sibling_relationships(nb, None));
        return Ok((vec![Job { name: stem(nb), notebook: nb.clone(), relationships }], false));
    }
    let rel_dir = match &inputs.relationships {
        Some(r) if !r.is_dir() => {
            return Err(Failure::usage("--relationships must be a directory when --notebook is one"))
        }
        other => other.as_deref(),
    };
    let mut notebooks: Vec<PathBuf> = fs::read_dir(nb)
        .map_err(|e| Failure::io(nb, &e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == NOTEBOOK_EXT))
        .collect();
    notebooks.sort();
    if notebooks.is_empty() {
        return Err(Failure::usage(format!("no .{NOTEBOOK_EXT} files in {}", nb.display())));
    }
    let jobs = notebooks
        .into_iter()
        .map(|p| Job { name: stem(&p), relationships: sibling_relationships(&p, rel_dir.or(Some(nb))), notebook: p })
        .collect();
    Ok((jobs, true))
}

fn load(job: &Job) -> Result<(NotebookDoc, RelationshipSet), Failure> {
    let nb = parse_notebook(&job.notebook).map_err(|e| Failure::notebook(&job.notebook, e))?;
    let rels = parse_relationships(&job.relationships).map_err(|e| Failure::relationships(&job.relationships, e))?;
    Ok((nb, rels))
}

/// Defaults, then the config file, then flags.
pub fn resolve_config(file: Option<&Path>, flags: &LayoutFlags) -> Result<LayoutConfig, Failure> {
    let mut cfg = LayoutConfig::default();
    if let Some(path) = file {
        let text = fs::read_to_string(path).map_err(|e| Failure::io(path, &e))?;
        let patch: LayoutConfigPatch = serde_json::from_str(&text).map_err(|e| Failure::config_syntax(path, &e))?;
        cfg = cfg.with_patch(&patch);
    }
    cfg = cfg.with_patch(&LayoutConfigPatch::from(flags));
    cfg.validate()?;
    Ok(cfg)
}

fn diagnostic_lines(path: &Path, diags: &[Diagnostic]) -> String {
    diags.iter().map(|d| format!("{}: {d}\n", path.display())).collect()
}

fn count(diags: &[Diagnostic], severity: Severity) -> usize {
    diags.iter().filter(|d| d.severity == severity).count()
}

/// Runs each job, in parallel when there are several, keeping input order.
fn fan_out<T: Send>(jobs: &[Job], f: impl Fn(&Job) -> T + Sync) -> Vec<T> {
    if jobs.len() == 1 {
        vec![f(&jobs[0])]
    } else {
        jobs.par_iter().map(&f).collect()
    }
}

/// Merges per-job outcomes: the worst exit code wins, failures are listed with their job.
fn combine(format: Format, results: Vec<(String, Result<Report, Failure>)>, many: bool) -> Result<Report, Failure> {
    if !many {
        return results.into_iter().next().expect("one job").1;
    }
    let mut code = 0;
    let mut text = String::new();
    let mut items = Vec::new();
    for (name, r) in results {
        match r {
            Ok(rep) => {
                code = code.max(rep.code);
                text.push_str(&rep.text);
                items.push(json!({ "name": name, "result": rep.json }));
            }
            Err(f) => {
                code = code.max(f.code);
                if format == Format::Text {
                    text.push_str(&format!("{f}\n"));
                }
                items.push(json!({ "name": name, "result": f.to_json() }));
            }
        }
    }
    Ok(Report { code, text, json: json!({ "notebooks": items }) })
}

pub fn render_cmd(args: &RenderArgs) -> Result<Report, Failure> {
    let cfg = resolve_config(args.config.as_deref(), &args.layout)?;
    let assets = if args.emit.contains(&EmitKind::Html) {
        let dir = args.viewer_dir.as_deref();
        Some(dir.map(ViewerAssets::from_dir).transpose().map_err(Failure::emit)?)
    } else {
        None
    };
    // Missing assets are known before anything is parsed or written.
    if let Some(None) = assets {
        return Err(Failure::emit(interlink_core::EmitError::MissingViewerAssets { searched: None }));
    }
    let assets = assets.flatten();
    let (jobs, many) = jobs(&args.inputs)?;
    let opts = BundleOptions { default_mode: args.default_mode.into() };
    let results = fan_out(&jobs, |job| {
        let out = if many { args.out.join(&job.name) } else { args.out.clone() };
        (job.name.clone(), render_one(job, &cfg, &args.emit, assets.as_ref(), &opts, &out))
    });
    combine(args.format, results, many)
}

fn render_one(
    job: &Job,
    cfg: &LayoutConfig,
    emit: &[EmitKind],
    assets: Option<&ViewerAssets>,
    opts: &BundleOptions,
    out: &Path,
) -> Result<Report, Failure> {
    let (nb, rels) = load(job)?;
    let rendering = render(&nb, &rels, cfg).map_err(|e| Failure::pipeline(&job.relationships, e))?;
    let mut text = diagnostic_lines(&job.relationships, &rendering.diagnostics);
    let mut written = Vec::new();
    let mut manifest: Option<BundleManifest> = None;
    if emit.contains(&EmitKind::LayoutJson) {
        let path = out.join("layout.json");
        emit_layout_json(&rendering.layout, &path).map_err(Failure::emit)?;
        written.push(path.display().to_string());
    }
    if emit.contains(&EmitKind::Html) {
        let m = emit_html(&rendering.layout, &nb, &rels, assets, opts, out).map_err(Failure::emit)?;
        written.extend(m.files.iter().map(|f| out.join(&f.path).display().to_string()));
        manifest = Some(m);
    }
    for w in &written {
        text.push_str(&format!("wrote {w}\n"));
    }
    let json = json!({
        "notebook": job.notebook.display().to_string(),
        "relationships": job.relationships.display().to_string(),
        "links": rendering.layout.links.len(),
        "totalHeight": rendering.layout.total_height,
        "written": written,
        "manifest": manifest,
        "diagnostics": rendering.diagnostics,
    });
    Ok(Report { code: 0, text, json })
}

pub fn lint_cmd(args: &LintArgs) -> Result<Report, Failure> {
    let (jobs, many) = jobs(&args.inputs)?;
    let results = fan_out(&jobs, |job| (job.name.clone(), lint_one(job)));
    combine(args.format, results, many)
}

fn lint_one(job: &Job) -> Result<Report, Failure> {
    let (nb, rels) = load(job)?;
    let diags = validate(&rels, &nb);
    let (errors, warnings) = (count(&diags, Severity::Error), count(&diags, Severity::Warning));
    let mut text = diagnostic_lines(&job.relationships, &diags);
    text.push_str(&format!("{}: {errors} error(s), {warnings} warning(s)\n", job.relationships.display()));
    let json = json!({
        "relationships": job.relationships.display().to_string(),
        "errors": errors,
        "warnings": warnings,
        "diagnostics": diags,
    });
    Ok(Report { code: if errors > 0 { EXIT_INVALID } else { 0 }, text, json })
}

fn relationship_files(path: &Path) -> Result<Vec<PathBuf>, Failure> {
    if !path.is_dir() {
        return Ok(vec![path.to_owned()]);
    }
    let mut files: Vec<PathBuf> = fs::read_dir(path)
        .map_err(|e| Failure::io(path, &e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.to_string_lossy().ends_with(REL_SUFFIX))
        .collect();
    files.sort();
    Ok(files)
}

pub fn stats_cmd(args: &StatsArgs) -> Result<Report, Failure> {
    let path = match (&args.relationships, &args.notebook) {
        (Some(r), _) => r.clone(),
        (None, Some(nb)) => sibling_relationships(nb, None),
        (None, None) => return Err(Failure::usage("stats needs --relationships or --notebook")),
    };
    let files = relationship_files(&path)?;
    let sets = files
        .iter()
        .map(|f| parse_relationships(f).map_err(|e| Failure::relationships(f, e)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut total = TaxonomyStats { distribution: Default::default(), relationships: 0, aggregated: 0, in_scope: 0 };
    // Cell pairs are only meaningful within one notebook, so |R′| adds up per file.
    for set in &sets {
        let s = stats(set);
        for (class, n) in s.distribution {
            *total.distribution.entry(class).or_insert(0) += n;
        }
        total.relationships += s.relationships;
        total.aggregated += s.aggregated;
        total.in_scope += s.in_scope;
    }
    let mut text = String::new();
    for (class, n) in &total.distribution {
        let scope = if class.in_scope { "" } else { "  (out of scope)" };
        text.push_str(&format!("{class:<40} {n:>6}{scope}\n"));
    }
    text.push_str(&format!(
        "|R| = {}  |R'| = {}  in scope = {}\n",
        total.relationships, total.aggregated, total.in_scope
    ));
    let json = serde_json::to_value(&total).expect("stats serialize");
    Ok(Report { code: 0, text, json })
}
