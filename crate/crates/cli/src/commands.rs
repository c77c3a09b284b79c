use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, ensure, Context as _, Result};
use resumkit::graph::{Multigraph, SpanningTree};
use resumkit::mc::stream_rng;
use resumkit::phi4::{self, AmplitudeSeries};
use resumkit::positivity::{self, WeakeningVector};
use resumkit::scalar::{factorial, parse_rational};
use resumkit::symanzik::{self, ModelParams};
use resumkit::weights::{self, Method, WeightCaps, WeightValue};
use resumkit::BigRational;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::config::Caps;
use crate::output::{format_float, CliScalar, Exact, Float, Number, Rendered, Table};

pub fn load_graph(path: &Path) -> Result<Multigraph> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read graph file {}", path.display()))?;
    Multigraph::from_json_str(&text).with_context(|| format!("invalid graph file {}", path.display()))
}

/// Comma-separated list; empty items are dropped.
pub fn split_list(s: &str) -> Vec<String> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(String::from).collect()
}

/// Integer count that also accepts forms like `1e6`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(n) = s.parse::<u64>() {
        return Ok(n);
    }
    let x: f64 = s.parse().map_err(|_| format!("not a count: {s:?}"))?;
    if x >= 0.0 && x.fract() == 0.0 && x < 1.8e19 {
        Ok(x as u64)
    } else {
        Err(format!("not a nonnegative integer: {s:?}"))
    }
}

/// Arbitrary-size integer written as a bare JSON number.
pub struct BigCount(pub String);

impl Serialize for BigCount {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawValue::from_string(self.0.clone()).map_err(serde::ser::Error::custom)?.serialize(s)
    }
}

fn series_map(s: &AmplitudeSeries) -> BTreeMap<usize, Exact> {
    s.0.iter().map(|(&n, c)| (n, Exact(c.clone()))).collect()
}

fn weight_caps(caps: Caps) -> WeightCaps {
    WeightCaps { brute_force_max_edges: caps.brute_force_max_edges, symbolic_max_tree_edges: caps.symbolic_max_tree_edges }
}

#[derive(Serialize)]
pub struct GraphSummary {
    vertices: usize,
    edges: usize,
}

impl GraphSummary {
    fn of(g: &Multigraph) -> Self {
        GraphSummary { vertices: g.vertex_count(), edges: g.edge_count() }
    }
}

// ---------------------------------------------------------------- weights

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MethodArg {
    Brute,
    Dc,
    Symbolic,
    Mc,
}

#[derive(Serialize)]
#[serde(untagged)]
enum WeightEntry {
    Exact {
        tree: Vec<String>,
        w: Exact,
        #[serde(rename = "N")]
        n: BigCount,
    },
    Estimated {
        tree: Vec<String>,
        w: Float,
        std_error: Float,
        samples: u64,
    },
}

#[derive(Serialize)]
pub struct WeightsPayload {
    graph: GraphSummary,
    total_sectors: BigCount,
    trees: Vec<WeightEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sum: Option<Exact>,
}

pub fn weights(
    g: &Multigraph,
    method: MethodArg,
    samples: Option<u64>,
    seed: Option<u64>,
    caps: Caps,
) -> Result<Rendered<WeightsPayload>> {
    let method = match method {
        MethodArg::Brute => Method::Brute,
        MethodArg::Dc => Method::DeletionContraction,
        MethodArg::Symbolic => Method::Symbolic,
        MethodArg::Mc => {
            let seed = seed.context("--seed is required for the mc method")?;
            let samples = samples.context("--samples is required for the mc method")?;
            Method::MonteCarlo { samples, seed }
        }
    };
    let table = weights::weight_table(g, method, weight_caps(caps))?;
    let exact = table.exact_sum();
    let mut csv = match exact {
        Some(_) => Table::new(["tree", "w", "N"]),
        None => Table::new(["tree", "w", "std_error", "samples"]),
    };
    let trees = table
        .rows
        .iter()
        .map(|row| {
            let tree: Vec<String> = row.tree.labels().map(String::from).collect();
            match &row.value {
                WeightValue::Exact(w) => {
                    csv.push([tree.join(" "), Number::Exact(Exact(w.value.clone())).to_string(), w.sector_count.to_string()]);
                    WeightEntry::Exact { tree, w: Exact(w.value.clone()), n: BigCount(w.sector_count.to_string()) }
                }
                WeightValue::Estimated(e) => {
                    csv.push([tree.join(" "), format_float(e.estimate), format_float(e.std_error), e.samples.to_string()]);
                    WeightEntry::Estimated { tree, w: Float(e.estimate), std_error: Float(e.std_error), samples: e.samples }
                }
            }
        })
        .collect();
    Ok(Rendered {
        payload: WeightsPayload {
            graph: GraphSummary::of(g),
            total_sectors: BigCount(factorial(g.edge_count()).to_string()),
            trees,
            sum: exact.map(Exact),
        },
        table: csv,
    })
}

// ---------------------------------------------------------------- sectors

#[derive(Serialize)]
pub struct SectorsPayload {
    tree: Vec<String>,
    #[serde(rename = "N")]
    n: usize,
    total_sectors: BigCount,
    w: Exact,
    sectors: Vec<Vec<String>>,
}

pub fn sectors(g: &Multigraph, tree: &SpanningTree, caps: Caps) -> Result<Rendered<SectorsPayload>> {
    let list = weights::sectors_for_tree(g, tree, caps.brute_force_max_edges)?;
    let total = factorial(g.edge_count());
    let w = BigRational::new(list.len().into(), total.clone().into());
    let mut csv = Table::new(["sector"]);
    for s in &list {
        csv.push([s.0.join(" ")]);
    }
    Ok(Rendered {
        payload: SectorsPayload {
            tree: tree.labels().map(String::from).collect(),
            n: list.len(),
            total_sectors: BigCount(total.to_string()),
            w: Exact(w),
            sectors: list.into_iter().map(|s| s.0).collect(),
        },
        table: csv,
    })
}

// ---------------------------------------------------------------- psd-check

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ScalarArg {
    Rational,
    F64,
    F32,
}

#[derive(Serialize)]
pub struct Instance {
    w: BTreeMap<String, Number>,
    min_eigenvalue: Float,
    psd: bool,
    reconstruction_residual: Float,
}

#[derive(Serialize)]
pub struct Blocks {
    order: Vec<String>,
    coefficients: Vec<Number>,
    partitions: Vec<Vec<Vec<String>>>,
}

#[derive(Serialize)]
pub struct PsdPayload {
    scalar: &'static str,
    tolerance: Float,
    tree: Vec<String>,
    vertices: Vec<String>,
    psd: bool,
    min_eigenvalue: Float,
    max_reconstruction_residual: Float,
    /// Present for a single `--w` instance.
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<Vec<Number>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    blocks: Option<Blocks>,
    instances: Vec<Instance>,
}

/// Source of weakening parameters for `psd-check`.
pub enum WSource {
    Given(Vec<(String, String)>),
    Random { samples: u64, seed: u64 },
}

pub fn parse_assignments(s: &str) -> Result<Vec<(String, String)>> {
    split_list(s)
        .into_iter()
        .map(|item| {
            let (k, v) = item.split_once('=').with_context(|| format!("expected label=value, got {item:?}"))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

pub fn psd_check<T: CliScalar>(g: &Multigraph, tree: &SpanningTree, source: &WSource, tol: f64) -> Result<Rendered<PsdPayload>> {
    tree.checked_mask(g)?;
    let vectors: Vec<WeakeningVector<T>> = match source {
        WSource::Given(pairs) => vec![WeakeningVector::new(
            pairs.iter().map(|(k, v)| Ok((k.clone(), T::parse_arg(v)?))).collect::<Result<Vec<_>>>()?,
        )],
        WSource::Random { samples, seed } => {
            use rand::Rng;
            let mut rng = stream_rng(*seed, 0);
            (0..*samples)
                .map(|_| {
                    // Grid values k/1000 keep the rational mode exact.
                    WeakeningVector::new(tree.labels().map(|l| {
                        let k: u32 = rng.random_range(0..=1000);
                        (l.to_string(), T::parse_arg(&format!("{k}/1000")).expect("grid value"))
                    }))
                })
                .collect()
        }
    };

    let mut instances = Vec::new();
    let mut csv = Table::new(["instance", "min_eigenvalue", "psd", "reconstruction_residual"]);
    let mut first = None;
    for (k, w) in vectors.iter().enumerate() {
        let m = positivity::build_weakening_matrix(g, tree, w)?;
        let report = positivity::check_psd(&m, tol)?;
        let blocks = positivity::block_decomposition(g, tree, w)?;
        let residual = positivity::residual(&blocks.reconstruct(), &m.entries);
        csv.push([k.to_string(), format_float(report.min_eigenvalue), report.psd.to_string(), format_float(residual)]);
        instances.push(Instance {
            w: w.0.iter().map(|(l, x)| (l.clone(), x.emit())).collect(),
            min_eigenvalue: Float(report.min_eigenvalue),
            psd: report.psd,
            reconstruction_residual: Float(residual),
        });
        if first.is_none() {
            first = Some((m, blocks));
        }
    }
    let (matrix, blocks) = match (source, first) {
        (WSource::Given(_), Some((m, b))) => (
            Some(m.entries.iter().map(|row| row.iter().map(CliScalar::emit).collect()).collect()),
            Some(Blocks {
                order: b.order.clone(),
                coefficients: b.coefficients.iter().map(CliScalar::emit).collect(),
                partitions: (0..b.partitions.len()).map(|k| b.labeled_partition(k)).collect(),
            }),
        ),
        _ => (None, None),
    };
    let min_eigenvalue = instances.iter().map(|i| i.min_eigenvalue.0).fold(f64::INFINITY, f64::min);
    let max_residual = instances.iter().map(|i| i.reconstruction_residual.0).fold(0.0, f64::max);
    Ok(Rendered {
        payload: PsdPayload {
            scalar: T::NAME,
            tolerance: Float(tol),
            tree: tree.labels().map(String::from).collect(),
            vertices: g.vertices().to_vec(),
            psd: instances.iter().all(|i| i.psd),
            min_eigenvalue: Float(min_eigenvalue),
            max_reconstruction_residual: Float(max_residual),
            matrix,
            blocks,
            instances,
        },
        table: csv,
    })
}

// ---------------------------------------------------------------- symanzik

#[derive(Serialize)]
pub struct PointEvaluation {
    alpha: BTreeMap<String, Exact>,
    expansion: Exact,
    matrix_tree: Exact,
    agree: bool,
}

#[derive(Serialize)]
pub struct SymanzikPayload {
    variables: Vec<String>,
    degree: Option<u32>,
    monomial_count: usize,
    monomials: Vec<Vec<String>>,
    value_at_ones: Exact,
    #[serde(skip_serializing_if = "Option::is_none")]
    evaluation: Option<PointEvaluation>,
}

pub fn symanzik(g: &Multigraph, at: Option<&[(String, String)]>) -> Result<Rendered<SymanzikPayload>> {
    let poly = symanzik::symanzik_polynomial(g)?;
    let ones = vec![BigRational::from_integer(1.into()); g.edge_count()];
    let evaluation = match at {
        None => None,
        Some(pairs) => {
            let mut alpha = vec![None; g.edge_count()];
            for (label, value) in pairs {
                let i = g.edge_index(label).with_context(|| format!("unknown edge {label:?} in --at"))?;
                let q = parse_rational(value)?;
                ensure!(q > BigRational::from_integer(0.into()), "--at values must be positive, got {value} for {label}");
                alpha[i] = Some(q);
            }
            let alpha: Vec<BigRational> = alpha
                .into_iter()
                .enumerate()
                .map(|(i, a)| a.with_context(|| format!("--at is missing edge {}", g.edges()[i].label)))
                .collect::<Result<_>>()?;
            let expansion = poly.evaluate(&alpha);
            let matrix_tree = symanzik::symanzik_via_matrix_tree(g, &alpha);
            Some(PointEvaluation {
                alpha: g.edges().iter().zip(&alpha).map(|(e, a)| (e.label.clone(), Exact(a.clone()))).collect(),
                agree: expansion == matrix_tree,
                expansion: Exact(expansion),
                matrix_tree: Exact(matrix_tree),
            })
        }
    };
    let monomials = poly.monomial_labels();
    let mut csv = Table::new(["monomial"]);
    for m in &monomials {
        csv.push([m.join("*")]);
    }
    Ok(Rendered {
        payload: SymanzikPayload {
            variables: poly.variables.clone(),
            degree: poly.degree(),
            monomial_count: monomials.len(),
            monomials,
            value_at_ones: Exact(poly.evaluate(&ones)),
            evaluation,
        },
        table: csv,
    })
}

// ---------------------------------------------------------------- amplitude

#[derive(Serialize)]
pub struct SectorInfo {
    sectors: u64,
    samples_per_sector: u64,
    leading_monomial_mismatches: u64,
}

#[derive(Serialize)]
pub struct AmplitudePayload {
    dimension: Float,
    mass: Float,
    edges: usize,
    estimator: &'static str,
    estimate: Float,
    std_error: Float,
    samples: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    sector_decomposition: Option<SectorInfo>,
}

pub fn amplitude(
    g: &Multigraph,
    params: ModelParams,
    samples: u64,
    seed: u64,
    sector_decomposed: bool,
    sector_cap: usize,
) -> Result<Rendered<AmplitudePayload>> {
    let (estimator, estimate, sector_decomposition) = if sector_decomposed {
        let s = symanzik::amplitude_sector_decomposed(g, params, samples, seed, sector_cap)?;
        let info = SectorInfo {
            sectors: s.sectors,
            samples_per_sector: s.samples_per_sector,
            leading_monomial_mismatches: s.leading_monomial_mismatches,
        };
        ("sector-decomposed", s.estimate, Some(info))
    } else {
        ("plain", symanzik::amplitude_parametric(g, params, samples, seed)?, None)
    };
    let mut csv = Table::new(["estimator", "estimate", "std_error", "samples"]);
    csv.push([estimator.to_string(), format_float(estimate.estimate), format_float(estimate.std_error), estimate.samples.to_string()]);
    Ok(Rendered {
        payload: AmplitudePayload {
            dimension: Float(params.dimension),
            mass: Float(params.mass),
            edges: g.edge_count(),
            estimator,
            estimate: Float(estimate.estimate),
            std_error: Float(estimate.std_error),
            samples: estimate.samples,
            sector_decomposition,
        },
        table: csv,
    })
}

// ---------------------------------------------------------------- phi4-lve

#[derive(Serialize)]
pub struct ShapeOut {
    shape: String,
    edges: usize,
    series: BTreeMap<usize, Exact>,
}

#[derive(Serialize)]
pub struct TreeOut {
    tree: Vec<String>,
    w: Exact,
    shape: String,
}

#[derive(Serialize)]
pub struct ClassOut {
    order: usize,
    graph: String,
    connected: bool,
    multiplicity: u64,
    amplitude: Exact,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    trees: Vec<TreeOut>,
}

#[derive(Serialize)]
pub struct VacuumCounts {
    connected: u64,
    disconnected: u64,
}

#[derive(Serialize)]
pub struct LambdaEvaluation {
    lambda: Float,
    repacked: Float,
    oracle_truncated: Float,
    quadrature: Float,
}

#[derive(Serialize)]
pub struct LvePayload {
    order: usize,
    shapes: Vec<ShapeOut>,
    totals: BTreeMap<usize, Exact>,
    oracle: BTreeMap<usize, Exact>,
    matches_oracle: bool,
    z: BTreeMap<usize, Exact>,
    disconnected: BTreeMap<usize, Exact>,
    vacuum_graphs: BTreeMap<usize, VacuumCounts>,
    classes: Vec<ClassOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    evaluation: Option<LambdaEvaluation>,
}

pub fn phi4_lve(order: usize, lambda: Option<f64>, caps: Caps) -> Result<Rendered<LvePayload>> {
    let r = phi4::lve_repack(order, caps.vacuum_order_cap)?;
    let oracle = phi4::logz_oracle(order);
    let matches_oracle = (1..=order).all(|n| r.totals.coefficient(n) == oracle.coefficient(n));

    let mut csv = Table::new(["shape", "edges", "order", "coefficient"]);
    for s in &r.shapes {
        for (n, c) in &s.series.0 {
            csv.push([s.shape.clone(), s.edges.to_string(), n.to_string(), Exact(c.clone()).to_csv()]);
        }
    }
    for (n, c) in &r.totals.0 {
        csv.push(["total".to_string(), String::new(), n.to_string(), Exact(c.clone()).to_csv()]);
    }

    let evaluation = lambda.map(|l| LambdaEvaluation {
        lambda: Float(l),
        repacked: Float(r.totals.evaluate(l)),
        oracle_truncated: Float(oracle.evaluate(l)),
        quadrature: Float(phi4::logz_quadrature(l)),
    });
    Ok(Rendered {
        payload: LvePayload {
            order,
            shapes: r
                .shapes
                .iter()
                .map(|s| ShapeOut { shape: s.shape.clone(), edges: s.edges, series: series_map(&s.series) })
                .collect(),
            totals: series_map(&r.totals),
            oracle: series_map(&oracle),
            matches_oracle,
            z: series_map(&r.z_side),
            disconnected: series_map(&r.disconnected),
            vacuum_graphs: r
                .vacuum_counts
                .iter()
                .map(|(&n, &(connected, disconnected))| (n, VacuumCounts { connected, disconnected }))
                .collect(),
            classes: r
                .classes
                .iter()
                .map(|c| ClassOut {
                    order: c.order,
                    graph: c.key.clone(),
                    connected: c.connected,
                    multiplicity: c.multiplicity,
                    amplitude: Exact(c.amplitude.clone()),
                    trees: c
                        .trees
                        .iter()
                        .map(|(t, w, shape)| TreeOut {
                            tree: t.labels().map(String::from).collect(),
                            w: Exact(w.clone()),
                            shape: shape.clone(),
                        })
                        .collect(),
                })
                .collect(),
            evaluation,
        },
        table: csv,
    })
}

impl Exact {
    fn to_csv(&self) -> String {
        resumkit::scalar::format_rational(&self.0)
    }
}

// ---------------------------------------------------------------- selftest

#[derive(Serialize)]
pub struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

#[derive(Serialize)]
pub struct SelftestPayload {
    passed: bool,
    checks: Vec<Check>,
}

impl SelftestPayload {
    pub fn passed(&self) -> bool {
        self.passed
    }
}

fn check(name: &'static str, run: impl FnOnce() -> Result<(bool, String)>) -> Check {
    match run() {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check { name, passed: false, detail: format!("error: {e:#}") },
    }
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Quick end-to-end checks against known closed-form values.
pub fn selftest(caps: Caps) -> Result<Rendered<SelftestPayload>> {
    use resumkit::fixtures;

    let g_eye = fixtures::g_eye();
    let mut checks = Vec::new();
    for (name, method) in [
        ("g_eye weights (brute force)", MethodArg::Brute),
        ("g_eye weights (deletion-contraction)", MethodArg::Dc),
        ("g_eye weights (symbolic)", MethodArg::Symbolic),
    ] {
        checks.push(check(name, || {
            let r = weights(&g_eye, method, None, None, caps)?;
            let values: Vec<String> = r.table.rows.iter().map(|row| row[1].clone()).collect();
            let fifteenths = values.iter().filter(|v| *v == "1/15").count();
            let others = values.iter().filter(|v| *v == "11/120").count();
            let sum = r.payload.sum.map(|s| s.0);
            Ok((fifteenths == 4 && others == 8 && sum == Some(q(1, 1)), format!("1/15 x{fifteenths}, 11/120 x{others}")))
        }));
    }
    checks.push(check("simplex integrals", || {
        let got: Vec<BigRational> =
            [[3, 0, 0], [1, 1, 1], [1, 2, 0]].iter().map(|e| weights::simplex_monomial_integral(e)).collect();
        Ok((got == [q(1, 120), q(1, 48), q(1, 60)], got.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
    }));
    checks.push(check("g_eye symanzik polynomial", || {
        let p = symanzik::symanzik_polynomial(&g_eye)?;
        let ones = vec![q(1, 1); g_eye.edge_count()];
        let value = p.evaluate(&ones);
        Ok((p.monomials.len() == 12 && p.degree() == Some(3) && value == q(12, 1), format!("{} monomials, U(1) = {value}", p.monomials.len())))
    }));
    checks.push(check("path-tree positivity", || {
        let path = fixtures::path(4);
        let tree = SpanningTree::new(path.edges().iter().map(|e| e.label.clone()));
        let w = WeakeningVector::new(path.edges().iter().zip(["1/2", "3/10", "4/5"]).map(|(e, v)| (e.label.clone(), parse_rational(v).unwrap())));
        let m = positivity::build_weakening_matrix(&path, &tree, &w)?;
        let report = positivity::check_psd(&m, positivity::DEFAULT_PSD_TOLERANCE)?;
        let blocks = positivity::block_decomposition(&path, &tree, &w)?;
        let exact = blocks.reconstruct() == m.entries;
        Ok((report.psd && report.min_eigenvalue > 0.0 && exact, format!("min eigenvalue {}", format_float(report.min_eigenvalue))))
    }));
    checks.push(check("zero-dimensional amplitude", || {
        let e = symanzik::amplitude_parametric(&fixtures::bubble(), ModelParams::new(0.0, 2.0), 10, 1)?;
        Ok((e.estimate == 1.0 / 16.0 && e.std_error == 0.0, format!("{} +- {}", format_float(e.estimate), format_float(e.std_error))))
    }));
    checks.push(check("bubble closed form at D = 1", || {
        let params = ModelParams::new(1.0, 1.0);
        let e = symanzik::amplitude_parametric(&fixtures::bubble(), params, 200_000, 7)?;
        let exact = symanzik::bubble_amplitude(params);
        let z = (e.estimate - exact).abs() / e.std_error;
        Ok((z < 3.0, format!("{} vs {} ({z:.2} standard errors)", format_float(e.estimate), format_float(exact))))
    }));
    checks.push(check("log Z repacking through order 2", || {
        let r = phi4::lve_repack(2, caps.vacuum_order_cap)?;
        let (a, b) = (r.totals.coefficient(1), r.totals.coefficient(2));
        Ok((a == q(-3, 2) && b == q(12, 1), format!("{a}, {b}")))
    }));
    let passed = checks.iter().all(|c| c.passed);
    let mut csv = Table::new(["check", "passed", "detail"]);
    for c in &checks {
        csv.push([c.name.to_string(), c.passed.to_string(), c.detail.clone()]);
    }
    if checks.is_empty() {
        bail!("no checks ran");
    }
    Ok(Rendered { payload: SelftestPayload { passed, checks }, table: csv })
}
