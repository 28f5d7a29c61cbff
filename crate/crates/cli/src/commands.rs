use std::fs;
use std::path::Path;
use std::time::Duration;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use graphseq::graph::{write_edge_list, GraphError};
use graphseq::hyperfinite::{
    box_partition, min_small_set_expansion_with, partition_from_covering, tree_partition, validate_partition, CoveringFamily,
    ExpansionOptions, HyperError, Partition, RootMode,
};
use graphseq::invariants::{
    beta_from_graphs, certify_equivalence, cost_upper_bound, edge_number_from_graphs, equivalence_rank_inequalities, parse_window,
    sandwich_report, CellOptions, CostStrategy, CellStatus, Certificate, GraphSequence, InvariantError, RankCell,
};
use graphseq::towers::{known_rank_gradient_term, schreier_homology_dim, QuotientFamily, TowerError};
use graphseq::{Exact, Girth, Lipschitz};

use crate::args::{Command, PartitionMethod, RunConfig, Roots};
use crate::{resolve, Report, RunError};

/// Flat CSV table.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

/// What a command produced.
pub(crate) struct Output {
    pub result: Value,
    pub table: Table,
    /// Some cells timed out; the result only uses completed cells.
    pub partial: bool,
}

/// Compute-time mapping of library errors.
fn compute_error(e: impl Into<InvariantError>) -> RunError {
    match e.into() {
        InvariantError::Graph(GraphError::Io(msg)) => RunError::Io(msg),
        other => RunError::Compute(other.to_string()),
    }
}

fn hyper_error(e: HyperError) -> RunError {
    compute_error(InvariantError::Hyper(e))
}

fn tower_error(e: TowerError) -> RunError {
    compute_error(InvariantError::Tower(e))
}

fn exact_str(e: &Exact) -> String {
    e.to_string()
}

fn opt_exact(e: &Option<Exact>) -> String {
    e.as_ref().map(exact_str).unwrap_or_default()
}

fn lipschitz_str(l: &Lipschitz) -> String {
    match l {
        Lipschitz::Finite(c) => c.to_string(),
        Lipschitz::Unbounded => "unbounded".into(),
    }
}

fn girth_str(g: Girth) -> String {
    match g {
        Girth::Finite(c) => c.to_string(),
        Girth::Infinite => "infinite".into(),
    }
}

fn sequence_info(seq: &GraphSequence) -> Value {
    json!({ "name": seq.name, "family": seq.family, "window": seq.window })
}

fn cell_options(config: &RunConfig) -> Result<CellOptions, RunError> {
    let timeout = match config.timeout {
        Some(t) if !(t.is_finite() && t > 0.0) => return Err(RunError::Config(format!("timeout must be positive, got {t}"))),
        t => t.map(Duration::from_secs_f64),
    };
    Ok(CellOptions { jobs: config.jobs, timeout })
}

const CELL_HEADERS: [&str; 9] = ["n", "q", "field", "status", "vertices", "edges", "rank", "s", "s_approx"];

fn cell_row(c: &RankCell) -> Vec<String> {
    vec![
        c.n.to_string(),
        c.q.to_string(),
        c.field.to_string(),
        match c.status {
            CellStatus::Ok => "ok".into(),
            CellStatus::Timeout => "timeout".into(),
        },
        c.vertices.to_string(),
        c.edges.to_string(),
        c.rank.map(|r| r.to_string()).unwrap_or_default(),
        opt_exact(&c.s),
        c.s.as_ref().map(|s| s.to_f64().to_string()).unwrap_or_default(),
    ]
}

pub(crate) fn execute(config: &RunConfig) -> Result<Output, RunError> {
    if config.jobs == 0 {
        return Err(RunError::Config("--jobs must be at least 1".into()));
    }
    let options = cell_options(config)?;
    match &config.command {
        Command::Gen { source, out_dir } => gen(&resolve::sequence(source)?, out_dir),
        Command::Beta { source, qmax, q_cap, fields } => {
            let seq = resolve::sequence(source)?;
            let q_max = resolve::qmax(*qmax, *q_cap)?;
            let fields = resolve::fields(fields)?;
            beta(&seq, q_max, &fields, options)
        }
        Command::Cost { source, strategies } => {
            let seq = resolve::sequence(source)?;
            let strategies = strategies.iter().map(|s| resolve::strategy(s)).collect::<Result<Vec<_>, _>>()?;
            cost(&seq, &strategies)
        }
        Command::Equiv { source, other, inequalities, qs, fields } => {
            let a = resolve::sequence(source)?;
            let b = resolve::other_sequence(other, source)?;
            let qs = if *inequalities { Some(parse_window(qs).map_err(resolve::invariant_config_error)?) } else { None };
            let fields = resolve::fields(fields)?;
            equiv(&a, &b, qs.as_deref(), &fields, options)
        }
        Command::Hyperfinite { source, method, q, s, covering, omega, epsilon, block_limit } => {
            let seq = resolve::sequence(source)?;
            let epsilon = epsilon.as_deref().map(resolve::exact).transpose()?;
            let omega = omega.as_deref().map(resolve::exact).transpose()?;
            let method = match method {
                PartitionMethod::Tree => Method::Tree(q.filter(|&q| q >= 2).ok_or_else(|| RunError::Config("tree partitions need --q >= 2".into()))?),
                PartitionMethod::Boxes => Method::Boxes(s.filter(|&s| s >= 1).ok_or_else(|| RunError::Config("box partitions need --s >= 1".into()))?),
                PartitionMethod::Covering => {
                    let path = covering.as_ref().ok_or_else(|| RunError::Config("covering partitions need --covering".into()))?;
                    let sets: Vec<Vec<usize>> = serde_json::from_str(&resolve::read_text(path)?)
                        .map_err(|e| RunError::Config(format!("{}: {e}", path.display())))?;
                    if seq.window.len() != 1 {
                        return Err(RunError::Config("a covering file describes one graph; use a single-index window".into()));
                    }
                    Method::Covering(sets, omega)
                }
            };
            hyperfinite(&seq, method, epsilon, *block_limit)
        }
        Command::Expansion { source, m, cap, roots } => {
            let seq = resolve::sequence(source)?;
            if *m == 0 || m > cap {
                return Err(RunError::Config(format!("m must be in 1..={cap}, got {m}")));
            }
            let roots = match roots {
                Roots::All => RootMode::All,
                Roots::VertexTransitive => RootMode::VertexTransitive,
            };
            expansion(&seq, *m, ExpansionOptions { cap: *cap, roots, jobs: config.jobs })
        }
        Command::Tower { source, primes } => {
            let seq = resolve::sequence(source)?;
            if seq.tower_spec().is_none() {
                return Err(RunError::Config("tower needs a tower-backed family or --tower".into()));
            }
            tower(&seq, &resolve::primes(primes)?)
        }
        Command::Sandwich { source, primes, qmax, q_cap, strategies } => {
            let seq = resolve::sequence(source)?;
            let q_max = resolve::qmax(*qmax, *q_cap)?;
            let primes = resolve::primes(primes)?;
            let strategies = strategies.iter().map(|s| resolve::strategy(s)).collect::<Result<Vec<_>, _>>()?;
            sandwich(&seq, &primes, q_max, &strategies, options)
        }
        Command::ReportMerge { inputs } => merge(inputs),
    }
}

fn gen(seq: &GraphSequence, out_dir: &Path) -> Result<Output, RunError> {
    let graphs = seq.graphs().map_err(compute_error)?;
    fs::create_dir_all(out_dir).map_err(|e| RunError::Io(format!("{}: {e}", out_dir.display())))?;
    let mut files = Vec::new();
    let mut table = Table { headers: vec!["n", "file", "vertices", "edges", "max_degree", "girth", "sha256"], rows: vec![] };
    for (n, g) in &graphs {
        let name = format!("{}-{n}.edges", seq.name);
        let text = write_edge_list(g);
        let path = out_dir.join(&name);
        fs::write(&path, &text).map_err(|e| RunError::Io(format!("{}: {e}", path.display())))?;
        let digest = hex::encode(Sha256::digest(text.as_bytes()));
        let girth = g.girth();
        table.rows.push(vec![
            n.to_string(),
            name.clone(),
            g.vertex_count().to_string(),
            g.edge_count().to_string(),
            g.max_degree().to_string(),
            girth_str(girth),
            digest.clone(),
        ]);
        files.push(json!({
            "n": n, "file": name, "vertices": g.vertex_count(), "edges": g.edge_count(),
            "max_degree": g.max_degree(), "girth": girth, "sha256": digest,
        }));
    }
    let manifest = json!({ "sequence": sequence_info(seq), "files": files });
    let manifest_path = out_dir.join("manifest.json");
    fs::write(&manifest_path, serde_json::to_string_pretty(&manifest).expect("json"))
        .map_err(|e| RunError::Io(format!("{}: {e}", manifest_path.display())))?;
    Ok(Output { result: manifest, table, partial: false })
}

fn beta(seq: &GraphSequence, q_max: usize, fields: &[graphseq::FieldSpec], options: CellOptions) -> Result<Output, RunError> {
    let graphs = seq.graphs().map_err(compute_error)?;
    let edge_number = edge_number_from_graphs(&graphs).map_err(compute_error)?;
    let reports = fields.iter().map(|&f| beta_from_graphs(&graphs, f, q_max, options)).collect::<Result<Vec<_>, _>>().map_err(compute_error)?;
    let table = Table { headers: CELL_HEADERS.to_vec(), rows: reports.iter().flat_map(|r| r.cells.iter().map(cell_row)).collect() };
    let partial = reports.iter().any(|r| r.partial);
    let result = json!({ "sequence": sequence_info(seq), "edge_number": edge_number, "betas": reports });
    Ok(Output { result, table, partial })
}

fn cost(seq: &GraphSequence, strategies: &[CostStrategy]) -> Result<Output, RunError> {
    let reports = strategies.iter().map(|s| cost_upper_bound(seq, s)).collect::<Result<Vec<_>, _>>().map_err(compute_error)?;
    let best = reports.iter().filter_map(|r| r.bound.clone()).min();
    let mut table = Table {
        headers: vec!["strategy", "n", "vertices", "edges", "ratio", "ratio_approx", "forward", "backward", "lipschitz_check"],
        rows: vec![],
    };
    for (text, r) in strategies.iter().zip(&reports) {
        let label = strategy_label(text);
        for row in &r.rows {
            table.rows.push(vec![
                label.clone(),
                row.n.to_string(),
                row.vertices.to_string(),
                row.edges.to_string(),
                exact_str(&row.ratio),
                row.ratio.to_f64().to_string(),
                lipschitz_str(&row.witness.forward),
                lipschitz_str(&row.witness.backward),
                row.lipschitz_check.as_ref().map(|c| c.holds.to_string()).unwrap_or_default(),
            ]);
        }
    }
    let result = json!({ "sequence": sequence_info(seq), "reports": reports, "best_bound": best });
    Ok(Output { result, table, partial: false })
}

/// The `--strategy` spelling of a strategy.
fn strategy_label(s: &CostStrategy) -> String {
    match s {
        CostStrategy::Identity => "identity".into(),
        CostStrategy::Boxes { s } => format!("boxes:{s}"),
        CostStrategy::TreeNet { q } => format!("tree-net:{q}"),
        CostStrategy::Coset { k, words } => format!("coset:{k}:{}", words.join(",")),
    }
}

fn equiv(a: &GraphSequence, b: &GraphSequence, qs: Option<&[u64]>, fields: &[graphseq::FieldSpec], options: CellOptions) -> Result<Output, RunError> {
    let certificate = certify_equivalence(a, b).map_err(compute_error)?;
    let inequalities = match qs {
        Some(qs) => {
            let qs: Vec<usize> = qs.iter().map(|&q| q as usize).collect();
            Some(equivalence_rank_inequalities(a, b, &qs, fields, options).map_err(compute_error)?)
        }
        None => None,
    };
    let table = match &inequalities {
        Some(r) => Table {
            headers: vec!["n", "q", "field", "s_q_h", "s_q_g", "s_ql_h", "lower_holds", "upper_holds"],
            rows: r
                .rows
                .iter()
                .map(|row| {
                    vec![
                        row.n.to_string(),
                        row.q.to_string(),
                        row.field.to_string(),
                        exact_str(&row.s_q_h),
                        exact_str(&row.s_q_g),
                        exact_str(&row.s_ql_h),
                        row.lower_holds.to_string(),
                        row.upper_holds.to_string(),
                    ]
                })
                .collect(),
        },
        None => {
            let row = match &certificate {
                Certificate::Witness(w) => {
                    vec!["witness".into(), lipschitz_str(&w.forward), lipschitz_str(&w.backward), String::new(), String::new()]
                }
                Certificate::CounterExample { n, edge, .. } => {
                    vec!["counterexample".into(), String::new(), String::new(), n.to_string(), format!("{}-{}", edge.0, edge.1)]
                }
            };
            Table { headers: vec!["certificate", "forward", "backward", "n", "edge"], rows: vec![row] }
        }
    };
    let result = json!({
        "first": sequence_info(a),
        "second": sequence_info(b),
        "certificate": certificate,
        "inequalities": inequalities,
        "inequalities_hold": inequalities.as_ref().map(|r| r.all_hold()),
    });
    Ok(Output { result, table, partial: false })
}

enum Method {
    Tree(usize),
    Boxes(usize),
    Covering(Vec<Vec<usize>>, Option<Exact>),
}

fn hyperfinite(seq: &GraphSequence, method: Method, epsilon: Option<Exact>, block_limit: Option<usize>) -> Result<Output, RunError> {
    let graphs = seq.graphs().map_err(compute_error)?;
    let mut rows = Vec::new();
    let mut table = Table {
        headers: vec!["n", "vertices", "blocks", "max_block_size", "cut_edges", "cut_ratio", "blocks_connected", "validation"],
        rows: vec![],
    };
    for (n, g) in &graphs {
        let (partition, extra, default_limit): (Partition, Value, usize) = match &method {
            Method::Tree(q) => {
                let t = tree_partition(g, *q).map_err(hyper_error)?;
                let cut_bound_holds = t.partition.cut_edges.len() * q <= g.vertex_count();
                let extra = json!({ "q": q, "net": t.net, "merges": t.merges, "cut_bound_holds": cut_bound_holds });
                (t.partition, extra, g.vertex_count())
            }
            Method::Boxes(s) => {
                let spec = seq.tower_spec().filter(|t| t.quotients == QuotientFamily::Residues { dim: 2 });
                if spec.is_none() {
                    return Err(RunError::Config("box partitions need a (Z/n)^2 tower".into()));
                }
                let c = seq.cayley(*n).map_err(compute_error)?;
                let coords: Vec<Vec<usize>> = c.elements.iter().map(|e| e.iter().map(|&x| x as usize).collect()).collect();
                let p = box_partition(g, &coords, *n as usize, *s).map_err(|e| RunError::Config(e.to_string()))?;
                (p, json!({ "s": s }), s * s)
            }
            Method::Covering(sets, omega) => {
                let family = CoveringFamily::ingest(g, sets.clone(), omega.clone(), None).map_err(|e| RunError::Config(e.to_string()))?;
                let cp = partition_from_covering(g, &family).map_err(hyper_error)?;
                let extra = json!({
                    "omega": family.omega, "measured_omega": family.measured_omega, "coverage": family.coverage,
                    "size_cap": family.size_cap, "private_blocks": cp.private_blocks, "leftover_chunks": cp.leftover_chunks,
                    "cut_bound": cp.cut_bound, "within_bound": cp.within_bound,
                });
                (cp.partition, extra, family.size_cap)
            }
        };
        let connected = partition.blocks_connected(g);
        let validation = epsilon.as_ref().map(|eps| validate_partition(g, &partition, eps, block_limit.unwrap_or(default_limit)));
        table.rows.push(vec![
            n.to_string(),
            g.vertex_count().to_string(),
            partition.block_count.to_string(),
            partition.max_block_size.to_string(),
            partition.cut_edges.len().to_string(),
            exact_str(&partition.cut_ratio),
            connected.to_string(),
            validation.as_ref().map(|v| v.passed.to_string()).unwrap_or_default(),
        ]);
        rows.push(json!({
            "n": n, "vertices": g.vertex_count(), "partition": partition, "blocks_connected": connected,
            "method": extra, "validation": validation,
        }));
    }
    let all_valid = rows.iter().all(|r| r["validation"].is_null() || r["validation"]["passed"] == Value::Bool(true));
    let result = json!({ "sequence": sequence_info(seq), "rows": rows, "all_valid": all_valid });
    Ok(Output { result, table, partial: false })
}

fn expansion(seq: &GraphSequence, m: usize, options: ExpansionOptions) -> Result<Output, RunError> {
    let graphs = seq.graphs().map_err(compute_error)?;
    let mut rows = Vec::new();
    let mut table = Table { headers: vec!["n", "vertices", "m", "delta", "delta_approx", "boundary", "argmin", "sets_searched"], rows: vec![] };
    for (n, g) in &graphs {
        let r = min_small_set_expansion_with(g, m, options).map_err(hyper_error)?;
        table.rows.push(vec![
            n.to_string(),
            g.vertex_count().to_string(),
            m.to_string(),
            exact_str(&r.delta),
            r.delta.to_f64().to_string(),
            r.boundary.to_string(),
            r.argmin.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "),
            r.sets_searched.to_string(),
        ]);
        rows.push(json!({ "n": n, "vertices": g.vertex_count(), "report": r }));
    }
    Ok(Output { result: json!({ "sequence": sequence_info(seq), "rows": rows }), table, partial: false })
}

fn tower(seq: &GraphSequence, primes: &[u64]) -> Result<Output, RunError> {
    let spec = seq.tower_spec().expect("checked by the caller");
    let mut rows = Vec::new();
    let mut table = Table {
        headers: vec!["n", "index", "edges", "girth", "degenerate", "prime", "dim_p", "homology_term", "rank_gradient_term"],
        rows: vec![],
    };
    let mut previous: Option<usize> = None;
    for &n in &seq.window {
        let c = seq.cayley(n).map_err(compute_error)?;
        if previous.is_some_and(|p| c.index() <= p) {
            return Err(compute_error(InvariantError::NotIncreasing { n }));
        }
        previous = Some(c.index());
        let girth = c.graph.girth();
        let homology = primes.iter().map(|&p| schreier_homology_dim(spec, n, p)).collect::<Result<Vec<_>, _>>().map_err(tower_error)?;
        let gradient = known_rank_gradient_term(spec, n).map_err(tower_error)?;
        let gradient_text = match &gradient {
            graphseq::towers::RankGradientTerm::Known { term, .. } => exact_str(term),
            graphseq::towers::RankGradientTerm::Unavailable => "unavailable".into(),
        };
        for h in &homology {
            table.rows.push(vec![
                n.to_string(),
                c.index().to_string(),
                c.graph.edge_count().to_string(),
                girth_str(girth),
                c.degenerate.to_string(),
                h.prime.to_string(),
                h.dim_p.to_string(),
                exact_str(&h.gradient_term),
                gradient_text.clone(),
            ]);
        }
        rows.push(json!({
            "n": n, "index": c.index(), "edges": c.graph.edge_count(), "girth": girth, "degenerate": c.degenerate,
            "homology": homology, "rank_gradient": gradient,
        }));
    }
    Ok(Output { result: json!({ "sequence": sequence_info(seq), "rows": rows }), table, partial: false })
}

fn sandwich(
    seq: &GraphSequence,
    primes: &[u64],
    q_max: usize,
    strategies: &[CostStrategy],
    options: CellOptions,
) -> Result<Output, RunError> {
    let r = sandwich_report(seq, primes, q_max, strategies, options).map_err(compute_error)?;
    let table = Table {
        headers: vec!["n", "field", "min_s", "cost_minus_one", "gap"],
        rows: r
            .per_n
            .iter()
            .map(|row| vec![row.n.to_string(), row.field.to_string(), opt_exact(&row.min_s), exact_str(&row.cost_minus_one), opt_exact(&row.gap)])
            .collect(),
    };
    let partial = r.betas.iter().any(|b| b.partial);
    Ok(Output { result: json!({ "sequence": sequence_info(seq), "sandwich": r }), table, partial })
}

fn merge(inputs: &[std::path::PathBuf]) -> Result<Output, RunError> {
    let mut reports = Vec::new();
    let mut table = Table { headers: vec!["file", "command", "status", "determinism_hash"], rows: vec![] };
    for path in inputs {
        let text = resolve::read_text(path)?;
        let report: Report = serde_json::from_str(&text).map_err(|e| RunError::Config(format!("{}: {e}", path.display())))?;
        table.rows.push(vec![
            path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default(),
            report.config.command.name().into(),
            serde_json::to_value(report.status).expect("json").as_str().unwrap_or_default().into(),
            report.determinism_hash.clone(),
        ]);
        reports.push(report);
    }
    let partial = reports.iter().any(|r| r.status != crate::Status::Ok);
    let result = json!({ "reports": reports });
    Ok(Output { result, table, partial })
}
