//! Command-line front end: definition-file parsing and serialization, suite
//! dispatch, and deterministic text/JSON reports with CI exit codes.
//!
//! Exit codes: 0 when every non-N/A check passes, 1 on any FAIL, 2 on
//! input, parse or construction errors (one diagnostic line on stderr).

use crate::connection::{metric_compat_residual, torsion_residual};
use crate::curvature::riemann_coefficient_route;
use crate::fixtures;
use crate::lcs::{
    check_axioms, check_derived_identities, check_yamabe_soliton, theorem_suite, Geometry,
    LcsError, LcsStructure, Mode, SolitonCandidate,
};
use crate::manifold::{Chart, EndoField, FrameField, ManifoldError, MetricSpec, VectorFieldExpr};
use crate::report::VerificationReport;
use crate::symexpr::{parse, Expr, ExprError, Symbols, SymbolsRef};
use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("{0}")]
    Manifold(#[from] ManifoldError),
    #[error("{0}")]
    Lcs(#[from] LcsError),
    #[error("in `{what}`: {source}")]
    Flag { what: String, source: ExprError },
    #[error("exactly one of --input or --fixture is required")]
    NoInput,
}

/// Parsed soliton candidate section.
#[derive(Clone, Debug)]
pub struct CandidateDef {
    pub v: Vec<Expr>,
    pub lambda: Expr,
    pub b: Option<Expr>,
}

/// In-memory image of a definition file; serializes back byte-identically
/// via `to_text`.
#[derive(Clone, Debug)]
pub struct DefinitionFile {
    pub syms: SymbolsRef,
    pub coords: Vec<String>,
    pub params: Vec<String>,
    /// frame[i] holds the n coordinate components of e_{i+1}.
    pub frame: Vec<Vec<Expr>>,
    /// Upper-triangle metric entries, row-major, n(n+1)/2 of them.
    pub metric_upper: Vec<Expr>,
    /// Frame components of xi.
    pub xi: Vec<Expr>,
    pub alpha: Expr,
    pub rho: Expr,
    /// phi_cols[j] holds the frame components of phi(e_{j+1}).
    pub phi_cols: Vec<Vec<Expr>>,
    pub candidate: Option<CandidateDef>,
}

fn err_at(line: usize, msg: impl Into<String>) -> CliError {
    CliError::Parse {
        line,
        msg: msg.into(),
    }
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Raw `key = value` entries grouped by section, with line numbers.
struct RawFile {
    entries: Vec<(String, String, String, usize)>,
}

impl RawFile {
    fn scan(text: &str) -> Result<RawFile, CliError> {
        let mut entries = Vec::new();
        let mut section: Option<String> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(name) = content.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| err_at(line, "unterminated section header"))?;
                if !matches!(
                    name,
                    "chart" | "params" | "frame" | "metric" | "structure" | "candidate"
                ) {
                    return Err(err_at(line, format!("unknown section `[{name}]`")));
                }
                section = Some(name.to_string());
                continue;
            }
            let sec = section
                .clone()
                .ok_or_else(|| err_at(line, "entry before any section header"))?;
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| err_at(line, "expected `key = value`"))?;
            entries.push((
                sec,
                key.trim().to_string(),
                value.trim().to_string(),
                line,
            ));
        }
        Ok(RawFile { entries })
    }

    /// Removes and returns the unique entry for (section, key).
    fn take(&mut self, section: &str, key: &str) -> Result<Option<(String, usize)>, CliError> {
        let hits: Vec<usize> = self
            .entries
            .iter()
            .enumerate()
            .filter(|(_, (s, k, _, _))| s == section && k == key)
            .map(|(i, _)| i)
            .collect();
        match hits.len() {
            0 => Ok(None),
            1 => {
                let (_, _, value, line) = self.entries.remove(hits[0]);
                Ok(Some((value, line)))
            }
            _ => Err(err_at(
                self.entries[hits[1]].3,
                format!("duplicate `{key}` in [{section}]"),
            )),
        }
    }

    fn require(&mut self, section: &str, key: &str) -> Result<(String, usize), CliError> {
        self.take(section, key)?
            .ok_or_else(|| err_at(0, format!("missing `{key}` in [{section}]")))
    }
}

fn parse_expr_at(text: &str, syms: &SymbolsRef, line: usize) -> Result<Expr, CliError> {
    parse(text, syms).map_err(|e| err_at(line, e.to_string()))
}

fn parse_list(
    text: &str,
    syms: &SymbolsRef,
    line: usize,
    expect: usize,
    what: &str,
) -> Result<Vec<Expr>, CliError> {
    let items: Vec<&str> = text.split_whitespace().collect();
    if items.len() != expect {
        return Err(err_at(
            line,
            format!("`{what}` needs {expect} expressions, got {}", items.len()),
        ));
    }
    items
        .into_iter()
        .map(|t| parse_expr_at(t, syms, line))
        .collect()
}

/// Parse the line-oriented definition format.
pub fn parse_definition(text: &str) -> Result<DefinitionFile, CliError> {
    let mut raw = RawFile::scan(text)?;

    let (dim_s, dim_line) = raw.require("chart", "dim")?;
    let dim: usize = dim_s
        .parse()
        .map_err(|_| err_at(dim_line, "`dim` must be a positive integer"))?;
    let (coords_s, coords_line) = raw.require("chart", "coords")?;
    let coords: Vec<String> = coords_s.split_whitespace().map(str::to_string).collect();
    if coords.len() != dim {
        return Err(err_at(
            coords_line,
            format!("`coords` lists {} names but dim = {dim}", coords.len()),
        ));
    }
    let params: Vec<String> = match raw.take("params", "names")? {
        Some((s, _)) => s.split_whitespace().map(str::to_string).collect(),
        None => Vec::new(),
    };
    for name in coords.iter().chain(&params) {
        if !valid_name(name) {
            return Err(err_at(coords_line, format!("invalid name `{name}`")));
        }
    }
    let coord_refs: Vec<&str> = coords.iter().map(String::as_str).collect();
    let param_refs: Vec<&str> = params.iter().map(String::as_str).collect();
    let syms = Symbols::new(&coord_refs, &param_refs);

    let mut frame = Vec::with_capacity(dim);
    for i in 1..=dim {
        let key = format!("e{i}");
        let (value, line) = raw.require("frame", &key)?;
        frame.push(parse_list(&value, &syms, line, dim, &key)?);
    }

    let (g_s, g_line) = raw.require("metric", "g")?;
    let metric_upper = parse_list(&g_s, &syms, g_line, dim * (dim + 1) / 2, "g")?;

    let (xi_s, xi_line) = raw.require("structure", "xi")?;
    let xi = parse_list(&xi_s, &syms, xi_line, dim, "xi")?;
    let (alpha_s, alpha_line) = raw.require("structure", "alpha")?;
    let alpha = parse_expr_at(&alpha_s, &syms, alpha_line)?;
    let (rho_s, rho_line) = raw.require("structure", "rho")?;
    let rho = parse_expr_at(&rho_s, &syms, rho_line)?;
    let (phi_s, phi_line) = raw.require("structure", "phi")?;
    let phi_flat = parse_list(&phi_s, &syms, phi_line, dim * dim, "phi")?;
    let phi_cols: Vec<Vec<Expr>> = phi_flat.chunks(dim).map(<[Expr]>::to_vec).collect();

    let candidate = match raw.take("candidate", "v")? {
        None => None,
        Some((v_s, v_line)) => {
            let v = parse_list(&v_s, &syms, v_line, dim, "v")?;
            let (l_s, l_line) = raw.require("candidate", "lambda")?;
            let lambda = parse_expr_at(&l_s, &syms, l_line)?;
            let b = match raw.take("candidate", "b")? {
                Some((b_s, b_line)) => Some(parse_expr_at(&b_s, &syms, b_line)?),
                None => None,
            };
            Some(CandidateDef { v, lambda, b })
        }
    };

    if let Some((_, key, _, line)) = raw.entries.first() {
        return Err(err_at(line.to_owned(), format!("unknown entry `{key}`")));
    }

    Ok(DefinitionFile {
        syms,
        coords,
        params,
        frame,
        metric_upper,
        xi,
        alpha,
        rho,
        phi_cols,
        candidate,
    })
}

fn compact(e: &Expr) -> String {
    e.to_string().replace(' ', "")
}

fn join_compact(list: &[Expr]) -> String {
    list.iter().map(compact).collect::<Vec<_>>().join(" ")
}

impl DefinitionFile {
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Canonical serialization; `parse_definition(to_text())` reproduces the
    /// definition and re-serializes to the same bytes.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("[chart]\n");
        out.push_str(&format!("dim = {}\n", self.dim()));
        out.push_str(&format!("coords = {}\n", self.coords.join(" ")));
        if !self.params.is_empty() {
            out.push_str("\n[params]\n");
            out.push_str(&format!("names = {}\n", self.params.join(" ")));
        }
        out.push_str("\n[frame]\n");
        for (i, row) in self.frame.iter().enumerate() {
            out.push_str(&format!("e{} = {}\n", i + 1, join_compact(row)));
        }
        out.push_str("\n[metric]\n");
        out.push_str(&format!("g = {}\n", join_compact(&self.metric_upper)));
        out.push_str("\n[structure]\n");
        out.push_str(&format!("xi = {}\n", join_compact(&self.xi)));
        out.push_str(&format!("alpha = {}\n", compact(&self.alpha)));
        out.push_str(&format!("rho = {}\n", compact(&self.rho)));
        let phi_flat: Vec<Expr> = self.phi_cols.iter().flatten().cloned().collect();
        out.push_str(&format!("phi = {}\n", join_compact(&phi_flat)));
        if let Some(c) = &self.candidate {
            out.push_str("\n[candidate]\n");
            out.push_str(&format!("v = {}\n", join_compact(&c.v)));
            out.push_str(&format!("lambda = {}\n", compact(&c.lambda)));
            if let Some(b) = &c.b {
                out.push_str(&format!("b = {}\n", compact(b)));
            }
        }
        out
    }

    /// Construct the geometric model: frame, metric, connection, curvature
    /// and the structure fields.
    pub fn build(&self) -> Result<BuiltModel, CliError> {
        let n = self.dim();
        let chart = Chart::new(self.syms.clone())?;
        let frame = FrameField::new(chart.clone(), self.frame.clone())?;
        let mut g = vec![vec![Expr::zero(&self.syms); n]; n];
        let mut it = self.metric_upper.iter();
        for i in 0..n {
            for j in i..n {
                let e = it.next().expect("length checked at parse").clone();
                g[i][j] = e.clone();
                g[j][i] = e;
            }
        }
        let g = MetricSpec::new(g, &self.syms)?;
        let geometry = Geometry::build(frame, g)?;
        let xi = VectorFieldExpr {
            components: self.xi.clone(),
        };
        let mut phi = EndoField::zero(geometry.chart());
        for j in 0..n {
            for i in 0..n {
                phi.matrix[i][j] = self.phi_cols[j][i].clone();
            }
        }
        let structure = LcsStructure::new(
            geometry.chart(),
            &geometry.g,
            xi,
            phi,
            self.alpha.clone(),
            self.rho.clone(),
            None,
        )?;
        Ok(BuiltModel {
            definition: self.clone(),
            geometry,
            structure,
        })
    }
}

/// Fully constructed model ready for the verification suites.
pub struct BuiltModel {
    pub definition: DefinitionFile,
    pub geometry: Geometry,
    pub structure: LcsStructure,
}

/// Which lambda to fall back to when neither the file nor the flags pin one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LambdaDefault {
    /// A declared parameter named `lambda`, if any; otherwise r.
    Symbolic,
    /// The computed scalar curvature r.
    ScalarCurvature,
}

impl BuiltModel {
    /// Resolve the soliton candidate from the file section and the
    /// `--lambda` / `--b` overrides. The potential defaults to xi.
    pub fn resolve_candidate(
        &self,
        lambda_flag: Option<&Expr>,
        b_flag: Option<&Expr>,
        default: LambdaDefault,
    ) -> Result<SolitonCandidate, LcsError> {
        let def = self.definition.candidate.as_ref();
        let lambda = match (lambda_flag, def) {
            (Some(l), _) => l.clone(),
            (None, Some(c)) => c.lambda.clone(),
            (None, None) => {
                let declared = match default {
                    LambdaDefault::Symbolic => self
                        .definition
                        .syms
                        .lookup("lambda")
                        .map(|i| Expr::var(&self.definition.syms, i)),
                    LambdaDefault::ScalarCurvature => None,
                };
                declared.unwrap_or_else(|| self.geometry.bundle.scalar.clone())
            }
        };
        let (v, b) = match (b_flag, def) {
            (Some(b), _) => (self.structure.xi.scale(b), Some(b.clone())),
            (None, Some(c)) => (
                VectorFieldExpr {
                    components: c.v.clone(),
                },
                c.b.clone(),
            ),
            (None, None) => (self.structure.xi.clone(), None),
        };
        SolitonCandidate::new(v, lambda, b, &self.structure.xi)
    }
}

/// Connection/curvature self-consistency suite for the `curvature`
/// subcommand.
pub fn check_curvature(geo: &Geometry) -> VerificationReport {
    let n = geo.dim();
    let mut rep = VerificationReport::new();

    let alt = riemann_coefficient_route(&geo.conn, &geo.frame);
    let mut res = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                res.extend(geo.bundle.riemann[i][j][k].sub(&alt[i][j][k]).components);
            }
        }
    }
    rep.push_residuals(
        "curv-01-two-route-riemann",
        "operator expansion of R(X,Y)Z agrees with the coefficient formula",
        &res,
    );

    rep.push_residuals(
        "curv-02-torsion-free",
        "nabla_X Y - nabla_Y X - [X,Y] = 0",
        &torsion_residual(&geo.conn, &geo.frame),
    );

    rep.push_residuals(
        "curv-03-metric-compatibility",
        "X(g(Y,Z)) = g(nabla_X Y, Z) + g(Y, nabla_X Z)",
        &metric_compat_residual(&geo.conn, &geo.frame, &geo.g),
    );

    let mut res = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let cyc = geo.bundle.riemann[i][j][k]
                    .add(&geo.bundle.riemann[j][k][i])
                    .add(&geo.bundle.riemann[k][i][j]);
                res.extend(cyc.components);
            }
        }
    }
    rep.push_residuals(
        "curv-04-first-bianchi",
        "R(X,Y)Z + R(Y,Z)X + R(Z,X)Y = 0",
        &res,
    );

    let mut res = Vec::new();
    for i in 0..n {
        for j in 0..n {
            res.push(geo.bundle.ricci.matrix[i][j].sub(&geo.bundle.ricci.matrix[j][i]));
        }
    }
    rep.push_residuals("curv-05-ricci-symmetric", "S(X,Y) = S(Y,X)", &res);

    rep.sorted()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Raw,
    Hypothesis,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Debug, clap::Args)]
struct CommonArgs {
    /// Definition file to verify.
    #[arg(long, conflicts_with = "fixture")]
    input: Option<PathBuf>,
    /// Built-in fixture id.
    #[arg(long)]
    fixture: Option<String>,
    /// Override the soliton constant (an expression over the declared
    /// symbols).
    #[arg(long)]
    lambda: Option<String>,
    /// Collinearity function b; sets the potential to V = b*xi.
    #[arg(long)]
    b: Option<String>,
    /// Ricci source for the theorem suite.
    #[arg(long, value_enum, default_value_t = ModeArg::Both)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Verify the structure axioms.
    Axioms(CommonArgs),
    /// Verify the derived curvature identities.
    Identities(CommonArgs),
    /// Verify connection/curvature self-consistency.
    Curvature(CommonArgs),
    /// Evaluate the Yamabe-soliton residual, solver and classification.
    Soliton(CommonArgs),
    /// Run the named theorem checks.
    Theorems(CommonArgs),
    /// Run every suite.
    All(CommonArgs),
}

#[derive(Debug, Parser)]
#[command(
    name = "lcscheck",
    about = "Exact verification of Lorentzian concircular structures and Yamabe solitons"
)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

fn load_definition(common: &CommonArgs) -> Result<DefinitionFile, CliError> {
    match (&common.input, &common.fixture) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            parse_definition(&text)
        }
        (None, Some(id)) => Ok(fixtures::load_builtin(id)
            .map_err(|_| CliError::UnknownFixture(id.clone()))?
            .def),
        _ => Err(CliError::NoInput),
    }
}

fn parse_flag_expr(
    flag: &Option<String>,
    what: &str,
    syms: &SymbolsRef,
) -> Result<Option<Expr>, CliError> {
    match flag {
        None => Ok(None),
        Some(text) => parse(text, syms)
            .map(Some)
            .map_err(|source| CliError::Flag {
                what: format!("--{what} {text}"),
                source,
            }),
    }
}

fn theorem_reports(
    model: &BuiltModel,
    cand: &SolitonCandidate,
    mode: ModeArg,
) -> VerificationReport {
    let mut rep = VerificationReport::new();
    if mode != ModeArg::Hypothesis {
        rep.merge(theorem_suite(
            &model.geometry,
            &model.structure,
            Some(cand),
            Mode::Raw,
        ));
    }
    if mode != ModeArg::Raw {
        rep.merge(theorem_suite(
            &model.geometry,
            &model.structure,
            Some(cand),
            Mode::Hypothesis,
        ));
    }
    rep.sorted()
}

fn execute(cmd: &Command) -> Result<(VerificationReport, FormatArg), CliError> {
    let common = match cmd {
        Command::Axioms(c)
        | Command::Identities(c)
        | Command::Curvature(c)
        | Command::Soliton(c)
        | Command::Theorems(c)
        | Command::All(c) => c,
    };
    let def = load_definition(common)?;
    let model = def.build()?;
    let lambda = parse_flag_expr(&common.lambda, "lambda", &def.syms)?;
    let b = parse_flag_expr(&common.b, "b", &def.syms)?;

    let report = match cmd {
        Command::Axioms(_) => check_axioms(&model.geometry, &model.structure),
        Command::Identities(_) => check_derived_identities(&model.geometry, &model.structure),
        Command::Curvature(_) => check_curvature(&model.geometry),
        Command::Soliton(_) => {
            let cand =
                model.resolve_candidate(lambda.as_ref(), b.as_ref(), LambdaDefault::Symbolic)?;
            check_yamabe_soliton(&model.geometry, &cand)
        }
        Command::Theorems(_) => {
            let cand = model.resolve_candidate(
                lambda.as_ref(),
                b.as_ref(),
                LambdaDefault::ScalarCurvature,
            )?;
            theorem_reports(&model, &cand, common.mode)
        }
        Command::All(_) => {
            let mut rep = check_axioms(&model.geometry, &model.structure);
            rep.merge(check_derived_identities(&model.geometry, &model.structure));
            rep.merge(check_curvature(&model.geometry));
            let sol_cand =
                model.resolve_candidate(lambda.as_ref(), b.as_ref(), LambdaDefault::Symbolic)?;
            rep.merge(check_yamabe_soliton(&model.geometry, &sol_cand));
            let thm_cand = model.resolve_candidate(
                lambda.as_ref(),
                b.as_ref(),
                LambdaDefault::ScalarCurvature,
            )?;
            rep.merge(theorem_reports(&model, &thm_cand, common.mode));
            rep.sorted()
        }
    };
    Ok((report, common.format))
}

/// Run the CLI against an explicit argument list; returns the process exit
/// code and writes the report to stdout.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let parsed = match Args::try_parse_from(args) {
        Ok(p) => p,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&parsed.command) {
        Ok((report, format)) => {
            match format {
                FormatArg::Text => print!("{}", report.to_text()),
                FormatArg::Json => println!("{}", report.to_json()),
            }
            if report.all_pass() {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
