//! The state-machine extraction case: a mini-Java source schema, program
//! graphs, the reference transformation and golden targets.

mod compare;

use std::path::Path;
use std::time::{Duration, Instant};

use serde::Deserialize;
use thiserror::Error;

use crate::graph::Graph;
use crate::io::{graph_from_str, graph_to_string, IoError};
use crate::query::SyntaxError;
use crate::transform::{execute, parse_transformation, ExecError};

pub use compare::{compare_graphs, isomorphic};

const REFERENCE: &str = include_str!("../../fixtures/ExtractStateMachines.gretl");

/// Source text of `ExtractStateMachines.gretl`.
pub fn reference_transformation() -> &'static str {
    REFERENCE
}

/// A program graph whose source declares two classes named `State`.
pub const DUPLICATE_STATE_GRAPH: &str = include_str!("../../fixtures/duplicate_state.graph.json");

const BUNDLED: &[(&str, &str, &str)] = &[
    (
        include_str!("../../fixtures/A.manifest.json"),
        include_str!("../../fixtures/A.graph.json"),
        include_str!("../../fixtures/A.golden.json"),
    ),
    (
        include_str!("../../fixtures/B.manifest.json"),
        include_str!("../../fixtures/B.graph.json"),
        include_str!("../../fixtures/B.golden.json"),
    ),
    (
        include_str!("../../fixtures/C.manifest.json"),
        include_str!("../../fixtures/C.graph.json"),
        include_str!("../../fixtures/C.golden.json"),
    ),
];

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct ExpectedTransition {
    pub src: String,
    pub dst: String,
    /// Name of the method holding the activation.
    pub method: String,
    pub trigger: String,
    pub action: String,
    /// Which trigger rule applies: `method`, `switch`, `catch` or `default`.
    pub case: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct Manifest {
    pub id: String,
    pub source: String,
    pub golden: String,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub states: Vec<String>,
    pub transitions: Vec<ExpectedTransition>,
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub manifest: Manifest,
    pub source: String,
    pub golden: String,
}

fn manifest_from_str(text: &str) -> Result<Manifest, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Fixtures A, B and C as compiled into the binary.
pub fn bundled_fixtures() -> Vec<Fixture> {
    BUNDLED
        .iter()
        .map(|(m, s, g)| Fixture {
            manifest: manifest_from_str(m).expect("bundled manifest"),
            source: s.to_string(),
            golden: g.to_string(),
        })
        .collect()
}

/// Reads every `*.manifest.json` in `dir` with the files it names, sorted by file name.
pub fn load_fixtures(dir: &Path) -> Result<Vec<Fixture>, IoError> {
    let read = |p: &Path| {
        std::fs::read_to_string(p).map_err(|e| IoError::Io {
            path: p.display().to_string(),
            message: e.to_string(),
        })
    };
    let entries = std::fs::read_dir(dir).map_err(|e| IoError::Io {
        path: dir.display().to_string(),
        message: e.to_string(),
    })?;
    let mut manifests: Vec<_> = entries
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.to_string_lossy().ends_with(".manifest.json"))
        .collect();
    manifests.sort();
    manifests
        .iter()
        .map(|p| {
            let manifest = manifest_from_str(&read(p)?)?;
            Ok(Fixture {
                source: read(&dir.join(&manifest.source))?,
                golden: read(&dir.join(&manifest.golden))?,
                manifest,
            })
        })
        .collect()
}

#[derive(Debug, Error)]
pub enum CaseError {
    #[error("{0}")]
    Io(#[from] IoError),
    #[error("{}:{}: {}", .0.line, .0.column, .0.message)]
    Syntax(SyntaxError),
    #[error(transparent)]
    Exec(#[from] ExecError),
}

impl CaseError {
    pub fn kind(&self) -> &'static str {
        match self {
            CaseError::Io(e) => e.kind(),
            CaseError::Syntax(_) => "SyntaxError",
            CaseError::Exec(e) => e.kind(),
        }
    }
}

pub struct CaseRun {
    pub target: Graph,
    /// Empty when the target matches the golden graph.
    pub diffs: Vec<String>,
    /// Load, execute and save, excluding the comparison.
    pub elapsed: Duration,
}

impl CaseRun {
    pub fn passed(&self) -> bool {
        self.diffs.is_empty()
    }
}

/// Runs the reference transformation on a fixture and compares the result
/// with its golden target.
pub fn run_case(fixture: &Fixture) -> Result<CaseRun, CaseError> {
    run_case_with(fixture, reference_transformation())
}

pub fn run_case_with(fixture: &Fixture, rules: &str) -> Result<CaseRun, CaseError> {
    let transformation = parse_transformation(rules).map_err(CaseError::Syntax)?;
    let golden = graph_from_str(&fixture.golden)?;
    let start = Instant::now();
    let source = graph_from_str(&fixture.source)?;
    let ctx = execute(&transformation, &source)?;
    let saved = graph_to_string(&ctx.target);
    let elapsed = start.elapsed();
    let target = graph_from_str(&saved)?;
    Ok(CaseRun {
        diffs: compare_graphs(&golden, &target),
        target,
        elapsed,
    })
}
