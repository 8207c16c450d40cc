//! `spectral-layers` command line.
//!
//! Exit codes: 0 when every check passes, 1 when a verification fails
//! (the report says which and why), 2 on usage or input errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::automorphism::{check_family_preserving, check_spherically_symmetric, FamilyPreservingReport, SymmetryReport};
use crate::decomposition::{antitree_closed_form, reconcile, tree_cs_closed_form, tridiagonalize, Decomposition, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::fixtures::{Fixture, DEFAULT_RAY_LENGTH};
use crate::graph::{build_antitree, build_tree_complete_spheres, LayeredGraph, VertexId};
use crate::jacobi::{
    bands_periodic, detect_eventually_periodic, detect_eventually_periodic_by, max_sorted_deviation, spectrum_union,
    BandStructure, PeriodicJacobi,
};
use crate::lgf::{parse_lgf, serialize_lgf};
use crate::operator::{compress_operator, dense_eigenvalues, OperatorKind};
use crate::paths::{check_commuting_family, check_path_commuting, check_strongly_path_commuting, PathCommutingReport, Verdict};
use crate::sequence::{sparse_gamma_sequence, sparse_gamma_spec, SequenceSpec};

/// Tolerance for comparing a direct-sum spectrum with the dense one.
pub const SPECTRAL_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "spectral-layers", version, about = "Symmetry checks and Jacobi decompositions of rooted layered graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Emit the graph as LGF.
    Build {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        output: Output,
    },
    /// Run symmetry checks.
    Verify {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = CheckArg::All)]
        check: CheckArg,
        /// Largest sphere tested; defaults to the depth.
        #[arg(long)]
        n_max: Option<usize>,
        /// Largest radius tested; defaults to the depth.
        #[arg(long)]
        k_max: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Jacobi decomposition by the generic algorithm, the closed form, or
    /// both with reconciliation.
    Decompose {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = KindArg::Laplacian)]
        kind: KindArg,
        #[arg(long, value_enum, default_value_t = MethodArg::Generic)]
        method: MethodArg,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Compare the direct-sum spectrum with the dense spectrum of the
    /// compressed operator.
    Spectrum {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = KindArg::Laplacian)]
        kind: KindArg,
        /// Defaults to the closed form when the source has one.
        #[arg(long, value_enum)]
        method: Option<SpectrumMethod>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Bands of a periodic Jacobi matrix, given directly or read off the
    /// tail of a generator's symmetric block.
    Bands {
        /// Off-diagonal period, comma separated.
        #[arg(long, requires = "b", value_delimiter = ',', allow_negative_numbers = true)]
        a: Option<Vec<f64>>,
        /// Diagonal period, comma separated.
        #[arg(long, requires = "a", value_delimiter = ',', allow_negative_numbers = true)]
        b: Option<Vec<f64>>,
        #[command(flatten)]
        source: OptionalSource,
        #[arg(long, value_enum, default_value_t = KindArg::Laplacian)]
        kind: KindArg,
        #[arg(long, default_value_t = 16)]
        max_period: usize,
        #[arg(long, default_value_t = 3)]
        min_repeats: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Eventual periodicity of a finite sequence.
    DetectPeriod {
        /// Explicit values, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, conflicts_with_all = ["sequence", "sparse_gamma"])]
        values: Option<Vec<f64>>,
        /// Sequence spec `prefix;tail`, sampled to `--length`.
        #[arg(long, requires = "length", conflicts_with = "sparse_gamma")]
        sequence: Option<SequenceSpec>,
        /// Sparse gamma bits for this kappa, sampled to `--length`.
        #[arg(long, requires = "length")]
        sparse_gamma: Option<u64>,
        #[arg(long)]
        length: Option<usize>,
        #[arg(long, default_value_t = 8)]
        max_period: usize,
        #[arg(long, default_value_t = 3)]
        min_repeats: usize,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckArg {
    PathCommuting,
    Strong,
    FamilyPreserving,
    CommutingFamily,
    SphericalSymmetry,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Adjacency,
    Laplacian,
    Normalized,
}

impl From<KindArg> for OperatorKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Adjacency => OperatorKind::Adjacency,
            KindArg::Laplacian => OperatorKind::Laplacian,
            KindArg::Normalized => OperatorKind::Normalized,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Generic,
    ClosedForm,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SpectrumMethod {
    Generic,
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Debug, Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Also write the report into this directory.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

/// `k-spec|gamma-spec`; the gamma part may be `sparse:KAPPA`.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeSpec {
    pub k: SequenceSpec,
    pub gamma: GammaSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GammaSpec {
    Sequence(SequenceSpec),
    Sparse(u64),
}

impl GammaSpec {
    fn resolve(&self, depth: usize) -> Result<SequenceSpec> {
        match self {
            Self::Sequence(s) => Ok(s.clone()),
            Self::Sparse(kappa) => sparse_gamma_spec(*kappa, depth + 1),
        }
    }
}

impl FromStr for TreeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (k, gamma) = s
            .split_once('|')
            .ok_or_else(|| Error::InvalidArgument(format!("tree spec {s:?} needs the form k-spec|gamma-spec")))?;
        let gamma = match gamma.trim().strip_prefix("sparse:") {
            Some(kappa) => GammaSpec::Sparse(
                kappa
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad kappa {kappa:?}")))?,
            ),
            None => GammaSpec::Sequence(gamma.parse()?),
        };
        Ok(Self { k: k.parse()?, gamma })
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "graph")]
struct SourceChoice {
    /// Builtin graph: fig3a, fig3b, fig4a, fig4b, fig5.
    #[arg(long)]
    fixture: Option<Fixture>,
    /// LGF file.
    #[arg(long)]
    lgf: Option<PathBuf>,
    /// Antitree with sphere sizes `prefix;tail`.
    #[arg(long)]
    antitree: Option<SequenceSpec>,
    /// Tree with complete spheres, `k-spec|gamma-spec`.
    #[arg(long)]
    tree_cs: Option<TreeSpec>,
}

#[derive(Debug, Args)]
struct Source {
    #[command(flatten)]
    choice: SourceChoice,
    /// Radius of the ball for generated graphs.
    #[arg(long)]
    depth: Option<usize>,
    /// Spheres appended to open-ended fixtures.
    #[arg(long, default_value_t = DEFAULT_RAY_LENGTH)]
    ray_length: usize,
}

#[derive(Debug, Args)]
struct OptionalSource {
    #[arg(long, conflicts_with_all = ["a", "tree_cs"])]
    antitree: Option<SequenceSpec>,
    #[arg(long, conflicts_with = "a")]
    tree_cs: Option<TreeSpec>,
    #[arg(long)]
    depth: Option<usize>,
}

enum Generator {
    Antitree(SequenceSpec),
    TreeCs { k: SequenceSpec, gamma: SequenceSpec },
}

struct Loaded {
    graph: LayeredGraph,
    fixture: Option<Fixture>,
    generator: Option<Generator>,
}

fn need_depth(depth: Option<usize>) -> Result<usize> {
    depth.ok_or_else(|| Error::InvalidArgument("--depth is required for generated graphs".into()))
}

impl Source {
    fn load(&self) -> Result<Loaded> {
        let c = &self.choice;
        if let Some(f) = c.fixture {
            return Ok(Loaded {
                graph: f.graph(self.ray_length)?,
                fixture: Some(f),
                generator: None,
            });
        }
        if let Some(path) = &c.lgf {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
            return Ok(Loaded {
                graph: parse_lgf(&text)?,
                fixture: None,
                generator: None,
            });
        }
        let depth = need_depth(self.depth)?;
        if let Some(s) = &c.antitree {
            return Ok(Loaded {
                graph: build_antitree(s, depth)?,
                fixture: None,
                generator: Some(Generator::Antitree(s.clone())),
            });
        }
        let t = c.tree_cs.as_ref().expect("clap requires one source");
        let gamma = t.gamma.resolve(depth)?;
        Ok(Loaded {
            graph: build_tree_complete_spheres(&t.k, &gamma, depth)?,
            fixture: None,
            generator: Some(Generator::TreeCs { k: t.k.clone(), gamma }),
        })
    }
}

impl Loaded {
    fn name(&self, v: VertexId) -> String {
        match self.fixture {
            Some(_) if v == VertexId::ROOT => "o".into(),
            Some(_) => format!("v{}", self.graph.global_index(v)),
            None => v.to_string(),
        }
    }

    fn closed_form(&self, kind: OperatorKind) -> Result<Decomposition> {
        let depth = self.graph.depth();
        match &self.generator {
            Some(Generator::Antitree(s)) => antitree_closed_form(s, depth, kind),
            Some(Generator::TreeCs { k, gamma }) if kind == OperatorKind::Laplacian => tree_cs_closed_form(k, gamma, depth),
            Some(Generator::TreeCs { .. }) => Err(Error::InvalidArgument(
                "the tree closed form covers the laplacian only".into(),
            )),
            None => Err(Error::InvalidArgument(
                "closed forms need an --antitree or --tree-cs source".into(),
            )),
        }
    }
}

/// What a subcommand produced: the text for stdout, files for `--out-dir`,
/// and whether every check passed.
struct Outcome {
    stdout: String,
    files: Vec<(&'static str, String)>,
    passed: bool,
}

impl Outcome {
    fn new(stdout: String, passed: bool) -> Self {
        Self {
            stdout,
            files: Vec::new(),
            passed,
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn path_report(out: &mut String, loaded: &Loaded, name: &str, r: &PathCommutingReport, csv: bool) {
    if csv {
        for v in &r.violations {
            let witness = format!(
                "n={} {} k={} l={} x={} y={} {} vs {}",
                v.n,
                v.kind.as_str(),
                v.k,
                v.l,
                loaded.name(v.x),
                loaded.name(v.y),
                v.count_lhs,
                v.count_rhs
            );
            writeln!(out, "{name},fail,{}", csv_field(&witness)).unwrap();
        }
        for d in &r.degree_violations {
            let witness = format!(
                "sphere {} deg({})={} deg({})={}",
                d.sphere,
                loaded.name(d.x),
                d.degree_x,
                loaded.name(d.y),
                d.degree_y
            );
            writeln!(out, "{name},fail,{}", csv_field(&witness)).unwrap();
        }
        if r.verdict.passed() {
            writeln!(out, "{name},pass,").unwrap();
        }
        return;
    }
    writeln!(
        out,
        "{name}: {} (certificate at depth {}, n_max {}, k_max {})",
        r.verdict, r.depth, r.tested_n_max, r.tested_k_max
    )
    .unwrap();
    for w in &r.warnings {
        writeln!(out, "  warning: {w}").unwrap();
    }
    for v in &r.violations {
        let (lhs, rhs) = v.kind.species(v.k, v.l);
        writeln!(
            out,
            "  violation: n={} {} (k,l)=({},{}) x={} y={} {lhs}={} {rhs}={}",
            v.n,
            v.kind.as_str(),
            v.k,
            v.l,
            loaded.name(v.x),
            loaded.name(v.y),
            v.count_lhs,
            v.count_rhs
        )
        .unwrap();
    }
    for d in &r.degree_violations {
        writeln!(
            out,
            "  degree: sphere {} deg({})={} deg({})={}",
            d.sphere,
            loaded.name(d.x),
            d.degree_x,
            loaded.name(d.y),
            d.degree_y
        )
        .unwrap();
    }
}

fn symmetry_report(out: &mut String, loaded: &Loaded, r: &SymmetryReport, csv: bool) {
    let witness = r
        .first_split
        .map(|(x, y)| format!("no automorphism takes {} to {}", loaded.name(x), loaded.name(y)));
    if csv {
        writeln!(out, "spherical-symmetry,{},{}", r.verdict, csv_field(witness.as_deref().unwrap_or(""))).unwrap();
        return;
    }
    writeln!(out, "spherical-symmetry: {} (certificate at depth {})", r.verdict, r.depth).unwrap();
    if let Some(w) = witness {
        writeln!(out, "  split: {w}").unwrap();
    }
}

fn family_report(out: &mut String, loaded: &Loaded, r: &FamilyPreservingReport, csv: bool) {
    let pairs: Vec<String> = r
        .counterexamples
        .iter()
        .map(|(c, x, y)| format!("condition ({}) x={} y={}", c.as_str(), loaded.name(*x), loaded.name(*y)))
        .collect();
    if csv {
        for p in &pairs {
            writeln!(out, "family-preserving,fail,{}", csv_field(p)).unwrap();
        }
        if pairs.is_empty() {
            writeln!(out, "family-preserving,pass,").unwrap();
        }
        return;
    }
    writeln!(
        out,
        "family-preserving: {} (certificate at depth {}, n_max {}; (i) {}, (ii) {}, (iii) {})",
        r.verdict(),
        r.depth,
        r.tested_n_max,
        r.conditions[0],
        r.conditions[1],
        r.conditions[2]
    )
    .unwrap();
    for w in &r.warnings {
        writeln!(out, "  warning: {w}").unwrap();
    }
    for p in &pairs {
        writeln!(out, "  no automorphism: {p}").unwrap();
    }
}

fn verify(loaded: &Loaded, check: CheckArg, n_max: Option<usize>, k_max: Option<usize>, csv: bool) -> Result<Outcome> {
    let g = &loaded.graph;
    let n_max = n_max.unwrap_or(g.depth());
    let k_max = k_max.unwrap_or(g.depth());
    let mut out = String::new();
    if csv {
        out.push_str("check,verdict,witness\n");
    }
    let mut passed = true;
    let all = check == CheckArg::All;
    if all || check == CheckArg::PathCommuting {
        let r = check_path_commuting(g, n_max, k_max)?;
        passed &= r.verdict.passed();
        path_report(&mut out, loaded, "path-commuting", &r, csv);
    }
    if all || check == CheckArg::Strong {
        let r = check_strongly_path_commuting(g, n_max, k_max)?;
        passed &= r.verdict.passed();
        path_report(&mut out, loaded, "strong", &r, csv);
    }
    if all || check == CheckArg::CommutingFamily {
        for n in 0..=n_max.min(g.depth()) {
            let r = check_commuting_family(g, n, k_max)?;
            passed &= r.verdict.passed();
            let bad: Vec<String> = r
                .family
                .iter()
                .chain(&r.potentials)
                .filter(|c| c.max_abs != 0)
                .map(|c| format!("[{},{}]={}", c.left, c.right, c.max_abs))
                .collect();
            if csv {
                writeln!(out, "commuting-family n={n},{},{}", r.verdict, csv_field(&bad.join(" "))).unwrap();
            } else {
                writeln!(
                    out,
                    "commuting-family n={n}: {} (potential commutators {})",
                    r.verdict, r.potentials_verdict
                )
                .unwrap();
                for b in &bad {
                    writeln!(out, "  nonzero commutator {b}").unwrap();
                }
            }
        }
    }
    if all || check == CheckArg::SphericalSymmetry {
        let r = check_spherically_symmetric(g);
        passed &= r.verdict.passed();
        symmetry_report(&mut out, loaded, &r, csv);
    }
    if all || check == CheckArg::FamilyPreserving {
        let r = check_family_preserving(g, n_max);
        passed &= r.verdict().passed();
        family_report(&mut out, loaded, &r, csv);
    }
    let mut outcome = Outcome::new(out.clone(), passed);
    outcome.files.push((if csv { "verify.csv" } else { "verify.txt" }, out));
    Ok(outcome)
}

fn decomposition_text(d: &Decomposition) -> String {
    let mut out = format!("{} decomposition, depth {}, {} blocks\n", d.kind, d.depth, d.blocks.len());
    let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    for (id, b) in d.blocks.iter().enumerate() {
        writeln!(
            out,
            "block {id}: start {} multiplicity {} length {}\n  a: {}\n  b: {}",
            b.start_sphere,
            b.multiplicity,
            b.len(),
            join(&b.a),
            join(&b.b)
        )
        .unwrap();
    }
    out
}

fn render_decomposition(d: &Decomposition, csv: bool) -> String {
    if csv {
        d.to_csv()
    } else {
        decomposition_text(d)
    }
}

fn decompose(loaded: &Loaded, kind: OperatorKind, method: MethodArg, tol: f64, csv: bool) -> Result<Outcome> {
    match method {
        MethodArg::Generic => {
            let d = tridiagonalize(&loaded.graph, kind, tol)?;
            let mut o = Outcome::new(render_decomposition(&d, csv), true);
            o.files.push(("generic.csv", d.to_csv()));
            Ok(o)
        }
        MethodArg::ClosedForm => {
            let d = loaded.closed_form(kind)?;
            let mut o = Outcome::new(render_decomposition(&d, csv), true);
            o.files.push(("closed_form.csv", d.to_csv()));
            Ok(o)
        }
        MethodArg::Both => {
            let generic = tridiagonalize(&loaded.graph, kind, tol)?;
            let closed = loaded.closed_form(kind)?;
            let r = reconcile(&generic, &closed, tol);
            let mut summary = format!("reconcile: {} (max deviation {:e}, {} copies matched)\n", r.verdict, r.max_deviation, r.matched);
            if let Some(dev) = &r.first_deviation {
                writeln!(summary, "  first deviation: {dev}").unwrap();
            }
            let stdout = if csv {
                eprint!("{summary}");
                generic.to_csv()
            } else {
                format!("{summary}{}", decomposition_text(&generic))
            };
            let mut o = Outcome::new(stdout, r.verdict.passed());
            o.files.push(("generic.csv", generic.to_csv()));
            o.files.push(("closed_form.csv", closed.to_csv()));
            o.files.push(("reconcile.txt", summary));
            Ok(o)
        }
    }
}

/// Bands of the eventually periodic tail of `(a, b)`, if one is visible.
fn tail_bands(a: &[f64], b: &[f64], max_period: usize, min_repeats: usize) -> Result<Option<(usize, usize, BandStructure)>> {
    let len = a.len();
    let found = detect_eventually_periodic_by(len, max_period, min_repeats, |i, j| {
        (a[i] - a[j]).abs() <= 1e-12 * a[i].abs().max(1.0) && (b[i] - b[j]).abs() <= 1e-12 * b[i].abs().max(1.0)
    });
    let Some((n, q)) = found else {
        return Ok(None);
    };
    let pj = PeriodicJacobi::new(a[n..n + q].to_vec(), b[n..n + q].to_vec())?;
    Ok(Some((n, q, bands_periodic(&pj))))
}

fn bands_text(out: &mut String, bands: &BandStructure) {
    for (lo, hi) in &bands.bands {
        writeln!(out, "  [{lo}, {hi}]").unwrap();
    }
}

fn spectrum(loaded: &Loaded, kind: OperatorKind, method: Option<SpectrumMethod>, tol: f64, csv: bool) -> Result<Outcome> {
    let method = method.unwrap_or(match (&loaded.generator, kind) {
        (Some(Generator::Antitree(_)), _) | (Some(Generator::TreeCs { .. }), OperatorKind::Laplacian) => {
            SpectrumMethod::ClosedForm
        }
        _ => SpectrumMethod::Generic,
    });
    let d = match method {
        SpectrumMethod::Generic => tridiagonalize(&loaded.graph, kind, tol)?,
        SpectrumMethod::ClosedForm => loaded.closed_form(kind)?,
    };
    let union = spectrum_union(&d, tol * 1e-2)?.values();
    let dense = dense_eigenvalues(&compress_operator(&loaded.graph, kind)?);
    let deviation = max_sorted_deviation(&union, &dense);
    let passed = deviation.is_some_and(|x| x < SPECTRAL_TOL);
    let mut table = String::from("index,direct_sum,dense,deviation\n");
    for (i, (u, v)) in union.iter().zip(&dense).enumerate() {
        writeln!(table, "{i},{u},{v},{}", (u - v).abs()).unwrap();
    }
    let mut summary = match deviation {
        Some(x) => format!("spectrum: {} (max deviation {x:e}, {} eigenvalues)\n", Verdict::from_pass(passed), dense.len()),
        None => format!(
            "spectrum: fail (direct sum has {} eigenvalues, dense operator {})\n",
            union.len(),
            dense.len()
        ),
    };
    if !csv {
        if let Some(main) = d.blocks.iter().find(|b| b.start_sphere == 0) {
            if let Some((n, q, bands)) = tail_bands(&main.a, &main.b[..main.a.len()], 16, 3)? {
                writeln!(summary, "symmetric block periodic from index {n} with period {q}; bands:").unwrap();
                bands_text(&mut summary, &bands);
            }
        }
    }
    let stdout = if csv {
        eprint!("{summary}");
        table.clone()
    } else {
        let mut s = summary.clone();
        for (u, v) in union.iter().zip(&dense) {
            writeln!(s, "  {u} {v}").unwrap();
        }
        s
    };
    let mut o = Outcome::new(stdout, passed);
    o.files.push(("spectrum.csv", table));
    o.files.push(("spectrum.txt", summary));
    Ok(o)
}

#[allow(clippy::too_many_arguments)]
fn bands(
    a: Option<Vec<f64>>,
    b: Option<Vec<f64>>,
    source: &OptionalSource,
    kind: OperatorKind,
    max_period: usize,
    min_repeats: usize,
    csv: bool,
) -> Result<Outcome> {
    let structure = match (a, b) {
        (Some(a), Some(b)) => bands_periodic(&PeriodicJacobi::new(a, b)?),
        _ => {
            let depth = need_depth(source.depth)?;
            let d = match (&source.antitree, &source.tree_cs) {
                (Some(s), _) => antitree_closed_form(s, depth, kind)?,
                (None, Some(t)) => tree_cs_closed_form(&t.k, &t.gamma.resolve(depth)?, depth)?,
                (None, None) => {
                    return Err(Error::InvalidArgument(
                        "bands needs --a/--b or an --antitree/--tree-cs source".into(),
                    ))
                }
            };
            let main = &d.blocks[0];
            match tail_bands(&main.a, &main.b[..main.a.len()], max_period, min_repeats)? {
                Some((_, _, s)) => s,
                None => return Err(Error::InvalidArgument("no periodic tail detected in the symmetric block".into())),
            }
        }
    };
    let text = if csv {
        structure.to_csv()
    } else {
        let mut s = format!("{} bands\n", structure.bands.len());
        bands_text(&mut s, &structure);
        s
    };
    let mut o = Outcome::new(text, true);
    o.files.push(("bands.csv", structure.to_csv()));
    Ok(o)
}

fn detect_period(
    values: Option<Vec<f64>>,
    sequence: Option<SequenceSpec>,
    sparse_gamma: Option<u64>,
    length: Option<usize>,
    max_period: usize,
    min_repeats: usize,
    csv: bool,
) -> Result<Outcome> {
    let seq: Vec<f64> = match (values, sequence, sparse_gamma) {
        (Some(v), _, _) => v,
        (None, Some(s), _) => s.take(length.unwrap_or(0))?.into_iter().map(|x| x as f64).collect(),
        (None, None, Some(kappa)) => sparse_gamma_sequence(kappa, length.unwrap_or(0))?
            .into_iter()
            .map(f64::from)
            .collect(),
        _ => return Err(Error::InvalidArgument("give --values, --sequence or --sparse-gamma".into())),
    };
    let found = detect_eventually_periodic(&seq, max_period, min_repeats);
    let text = match (found, csv) {
        (Some((n, q)), true) => format!("start,period\n{n},{q}\n"),
        (None, true) => "start,period\n".to_string(),
        (Some((n, q)), false) => format!("eventually periodic on observed data: start {n}, period {q}\n"),
        (None, false) => format!("no period <= {max_period} observed over {} values\n", seq.len()),
    };
    Ok(Outcome::new(text, true))
}

fn write_files(dir: &Path, files: &[(&str, String)]) -> Result<()> {
    let io = |e: std::io::Error| Error::InvalidArgument(format!("cannot write to {}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    for (name, content) in files {
        std::fs::write(dir.join(name), content).map_err(io)?;
    }
    Ok(())
}

fn execute(cmd: Command) -> Result<(Outcome, Option<PathBuf>)> {
    let csv = |o: &Output| o.format == Format::Csv;
    Ok(match cmd {
        Command::Build { source, output } => {
            let loaded = source.load()?;
            let text = serialize_lgf(&loaded.graph);
            let mut o = Outcome::new(text.clone(), true);
            o.files.push(("graph.lgf", text));
            (o, output.out_dir)
        }
        Command::Verify {
            source,
            check,
            n_max,
            k_max,
            output,
        } => (verify(&source.load()?, check, n_max, k_max, csv(&output))?, output.out_dir),
        Command::Decompose {
            source,
            kind,
            method,
            tol,
            output,
        } => (decompose(&source.load()?, kind.into(), method, tol, csv(&output))?, output.out_dir),
        Command::Spectrum {
            source,
            kind,
            method,
            tol,
            output,
        } => (spectrum(&source.load()?, kind.into(), method, tol, csv(&output))?, output.out_dir),
        Command::Bands {
            a,
            b,
            source,
            kind,
            max_period,
            min_repeats,
            output,
        } => (
            bands(a, b, &source, kind.into(), max_period, min_repeats, csv(&output))?,
            output.out_dir,
        ),
        Command::DetectPeriod {
            values,
            sequence,
            sparse_gamma,
            length,
            max_period,
            min_repeats,
            output,
        } => (
            detect_period(values, sequence, sparse_gamma, length, max_period, min_repeats, csv(&output))?,
            output.out_dir,
        ),
    })
}

/// Parses `argv` (program name first), runs the command, and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok((outcome, dir)) => {
            print!("{}", outcome.stdout);
            if let Some(dir) = dir {
                if let Err(e) = write_files(&dir, &outcome.files) {
                    eprintln!("error: {e}");
                    return 2;
                }
            }
            if outcome.passed {
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
