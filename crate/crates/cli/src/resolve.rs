//! Turns raw arguments into validated inputs before any computation runs.

use std::fs;
use std::path::Path;

use graphseq::graph::{parse_edge_list, GraphError};
use graphseq::invariants::{parse_window, CostStrategy, Family, GraphSequence, InvariantError};
use graphseq::towers::{TowerError, TowerSpec};
use graphseq::{Exact, FieldSpec, Graph};

use crate::args::{OtherSourceArgs, SourceArgs};
use crate::RunError;

pub(crate) fn config_error(e: impl std::fmt::Display) -> RunError {
    RunError::Config(e.to_string())
}

/// Validation-time mapping: unreadable files are I/O errors, everything
/// else is a configuration error.
pub(crate) fn invariant_config_error(e: InvariantError) -> RunError {
    match e {
        InvariantError::Graph(GraphError::Io(msg)) => RunError::Io(msg),
        other => RunError::Config(other.to_string()),
    }
}

pub(crate) fn read_text(path: &Path) -> Result<String, RunError> {
    fs::read_to_string(path).map_err(|e| RunError::Io(format!("{}: {e}", path.display())))
}

pub(crate) fn read_graph(path: &Path) -> Result<Graph, RunError> {
    parse_edge_list(&read_text(path)?).map_err(|e| RunError::Config(format!("{}: {e}", path.display())))
}

fn read_tower(path: &Path) -> Result<TowerSpec, RunError> {
    TowerSpec::from_json(&read_text(path)?).map_err(|e: TowerError| RunError::Config(format!("{}: {e}", path.display())))
}

fn window(text: Option<&str>) -> Result<Option<Vec<u64>>, RunError> {
    text.map(parse_window).transpose().map_err(invariant_config_error)
}

/// Exactly one of family / tower / graph files.
fn build_sequence(
    family: Option<&str>,
    tower: Option<&Path>,
    graphs: &[std::path::PathBuf],
    window_text: Option<&str>,
    seed: u64,
    girth_floor: Option<usize>,
) -> Result<GraphSequence, RunError> {
    let given = family.is_some() as usize + tower.is_some() as usize + (!graphs.is_empty()) as usize;
    if given != 1 {
        return Err(RunError::Config("give exactly one of --family, --tower or --graph".into()));
    }
    let window = window(window_text)?;
    if let Some(name) = family {
        let window = window.ok_or_else(|| RunError::Config("--window is required with --family".into()))?;
        let mut seq = GraphSequence::named(name, window, seed).map_err(invariant_config_error)?;
        if let (Family::RandomCubic { girth_floor: g, .. }, Some(floor)) = (&mut seq.family, girth_floor) {
            *g = floor;
        }
        return Ok(seq);
    }
    if let Some(path) = tower {
        let spec = read_tower(path)?;
        spec.validate().map_err(config_error)?;
        let window = match window {
            Some(w) => w,
            None if !spec.levels.is_empty() => spec.levels.clone(),
            None => return Err(RunError::Config("--window is required unless the descriptor lists levels".into())),
        };
        return GraphSequence::tower(spec, window).map_err(invariant_config_error);
    }
    let loaded: Vec<Graph> = graphs.iter().map(|p| read_graph(p)).collect::<Result<_, _>>()?;
    let label = graphs.iter().map(|p| p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()).collect::<Vec<_>>().join("+");
    match window {
        Some(w) => GraphSequence::explicit_indexed(label, w, loaded),
        None => GraphSequence::explicit(label, loaded),
    }
    .map_err(invariant_config_error)
}

pub(crate) fn sequence(args: &SourceArgs) -> Result<GraphSequence, RunError> {
    build_sequence(args.family.as_deref(), args.tower.as_deref(), &args.graphs, args.window.as_deref(), args.seed, args.girth_floor)
}

/// The second sequence shares the first one's window.
pub(crate) fn other_sequence(args: &OtherSourceArgs, first: &SourceArgs) -> Result<GraphSequence, RunError> {
    build_sequence(args.family.as_deref(), args.tower.as_deref(), &args.graphs, first.window.as_deref(), args.seed, first.girth_floor)
}

pub(crate) fn fields(text: &str) -> Result<Vec<FieldSpec>, RunError> {
    let mut out: Vec<FieldSpec> = text.split(',').map(|f| f.parse().map_err(config_error)).collect::<Result<_, _>>()?;
    if out.is_empty() {
        return Err(RunError::Config("no fields".into()));
    }
    let len = out.len();
    out.dedup();
    if out.len() != len {
        return Err(RunError::Config(format!("repeated field in {text:?}")));
    }
    Ok(out)
}

pub(crate) fn primes(text: &str) -> Result<Vec<u64>, RunError> {
    text.split(',')
        .map(|p| {
            let t = p.trim();
            let digits = t.strip_prefix('F').unwrap_or(t);
            let value: u64 = digits.parse().map_err(|_| RunError::Config(format!("bad prime {t:?}")))?;
            FieldSpec::prime(value).map(|_| value).map_err(config_error)
        })
        .collect()
}

pub(crate) fn exact(text: &str) -> Result<Exact, RunError> {
    text.parse().map_err(RunError::Config)
}

pub(crate) fn qmax(qmax: usize, cap: usize) -> Result<usize, RunError> {
    if qmax < 3 {
        return Err(RunError::Config(format!("qmax must be at least 3, got {qmax}")));
    }
    if qmax > cap {
        return Err(RunError::Config(format!("qmax {qmax} is above the cap {cap}; raise --q-cap to allow it")));
    }
    Ok(qmax)
}

/// `identity`, `boxes:S`, `tree-net:Q`, `coset:K:WORD[,WORD...]`.
pub(crate) fn strategy(text: &str) -> Result<CostStrategy, RunError> {
    let bad = || RunError::Config(format!("bad strategy {text:?}; use identity, boxes:S, tree-net:Q or coset:K:WORDS"));
    let mut parts = text.splitn(3, ':');
    let kind = parts.next().unwrap_or_default().trim();
    let number = |p: Option<&str>| p.and_then(|s| s.trim().parse::<u64>().ok()).filter(|&v| v > 0).ok_or_else(bad);
    let parsed = match kind {
        "identity" => CostStrategy::Identity,
        "boxes" => CostStrategy::Boxes { s: number(parts.next())? },
        "tree-net" => CostStrategy::TreeNet { q: number(parts.next())? as usize },
        "coset" => {
            let k = number(parts.next())?;
            let words: Vec<String> = parts.next().ok_or_else(bad)?.split(',').map(|w| w.trim().to_string()).filter(|w| !w.is_empty()).collect();
            if words.is_empty() {
                return Err(bad());
            }
            CostStrategy::Coset { k, words }
        }
        _ => return Err(bad()),
    };
    if parts.next().is_some() && !matches!(parsed, CostStrategy::Coset { .. }) {
        return Err(bad());
    }
    Ok(parsed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies() {
        assert_eq!(strategy("identity").unwrap(), CostStrategy::Identity);
        assert_eq!(strategy("boxes:8").unwrap(), CostStrategy::Boxes { s: 8 });
        assert_eq!(strategy("tree-net:4").unwrap(), CostStrategy::TreeNet { q: 4 });
        assert_eq!(strategy("coset:2:a^2,b^2").unwrap(), CostStrategy::Coset { k: 2, words: vec!["a^2".into(), "b^2".into()] });
        for bad in ["boxes", "boxes:0", "boxes:8:1", "coset:2", "coset:2:", "nope"] {
            assert!(strategy(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn field_and_prime_lists() {
        assert_eq!(fields("Q,F2").unwrap(), vec![FieldSpec::Rationals, FieldSpec::Prime(2)]);
        assert!(fields("Q,Q").is_err());
        assert!(fields("F4").is_err());
        assert_eq!(primes("3,5,F7").unwrap(), vec![3, 5, 7]);
        assert!(primes("4").is_err());
    }

    #[test]
    fn one_source_only() {
        let args = SourceArgs { family: Some("torus2".into()), window: Some("3:5".into()), ..Default::default() };
        assert_eq!(sequence(&args).unwrap().window, vec![3, 4, 5]);
        let none = SourceArgs::default();
        assert!(matches!(sequence(&none), Err(RunError::Config(_))));
        let missing = SourceArgs { graphs: vec!["/nonexistent/x.edges".into()], ..Default::default() };
        assert!(matches!(sequence(&missing), Err(RunError::Io(_))));
    }
}
