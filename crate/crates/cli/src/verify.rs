//! Seeded self-check suite: regenerates random instances and confronts the
//! production algorithms with the brute-force oracles. The report is pure
//! JSON built in a fixed order, so a fixed seed yields byte-identical
//! output on every run.

use serde_json::{json, Value};

use sepgraph_core::{
    brute_min_sr, brute_modulus, connected_component, disc_width, enumerate_simple_paths, fibrate,
    is_separating, is_slim, min_vertex_cut, modulus_p, pencil_from_flow, slimify, ExtendedCount,
    MeasureGraph, ModulusError, SlimOracle, TerminalPair, VertexSet,
    oracle::MODULUS_CAP,
};

use crate::gen;
use crate::io::{set_json, GraphDoc};
use crate::CliError;

pub struct VerifyConfig {
    pub seed: u64,
    pub max_vertices: usize,
    pub samples: usize,
}

struct Check {
    name: &'static str,
    instances: usize,
    failures: usize,
}

struct Reporter {
    checks: Vec<Check>,
    counterexample: Option<Value>,
}

impl Reporter {
    fn new(names: &[&'static str]) -> Reporter {
        Reporter {
            checks: names
                .iter()
                .map(|&name| Check {
                    name,
                    instances: 0,
                    failures: 0,
                })
                .collect(),
            counterexample: None,
        }
    }

    fn record(
        &mut self,
        check: usize,
        graph: &MeasureGraph,
        t: TerminalPair,
        set: Option<&VertexSet>,
        outcome: Result<(), String>,
    ) {
        self.checks[check].instances += 1;
        if let Err(detail) = outcome {
            self.checks[check].failures += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(json!({
                    "check": self.checks[check].name,
                    "graph": serde_json::to_value(GraphDoc::from_graph(graph))
                        .expect("graph docs serialize"),
                    "v": graph.label(t.v),
                    "w": graph.label(t.w),
                    "set": set.map(|a| set_json(graph, a)),
                    "detail": detail,
                }));
            }
        }
    }
}

fn check_cut_against_scan(graph: &MeasureGraph, t: TerminalPair) -> Result<(), String> {
    let cut = min_vertex_cut(graph, t);
    let (best, _) = brute_min_sr(graph, t).map_err(|e| e.to_string())?;
    if (cut.value - best).abs() <= 1e-9 * best.max(1.0) {
        Ok(())
    } else {
        Err(format!("cut value {} but subset scan found {}", cut.value, best))
    }
}

fn check_fibration(graph: &MeasureGraph, t: TerminalPair, set: &VertexSet) -> Result<(), String> {
    let fib = fibrate(graph, t, set).map_err(|e| e.to_string())?;
    let width = fib.width;
    for (i, level) in fib.levels.iter().enumerate() {
        if !level.is_subset(set) || level.is_empty() {
            return Err(format!("level {i} is not a nonempty subset"));
        }
        if disc_width(graph, t, level) != ExtendedCount::Finite(1) {
            return Err(format!("level {i} does not have width 1"));
        }
        for (j, other) in fib.levels.iter().enumerate().skip(i + 1) {
            if !level.is_disjoint(other) {
                return Err(format!("levels {i} and {j} overlap"));
            }
        }
    }
    let chosen = graph.mass_of(&fib.levels[fib.chosen]);
    let bound = graph.mass_of(set) / width as f64;
    if chosen <= bound + 1e-9 * bound.max(1.0) {
        Ok(())
    } else {
        Err(format!("chosen level mass {chosen} exceeds {bound}"))
    }
}

fn check_slim_equivalences(
    graph: &MeasureGraph,
    t: TerminalPair,
    raw: &VertexSet,
) -> Result<Option<VertexSet>, String> {
    let oracle = SlimOracle::new(graph, t).map_err(|e| e.to_string())?;
    if !oracle.has_path() {
        return Ok(None);
    }
    let set = raw.intersection(&oracle.component_of_v());
    if !is_separating(graph, t, &set) {
        return Ok(None);
    }
    let [c1, c2, c3, c4] = oracle.conditions(&set);
    let slim = is_slim(graph, t, &set).map_err(|e| e.to_string())?.slim;
    if c1 == c2 && c2 == c3 && c3 == c4 && slim == c1 {
        Ok(Some(set))
    } else {
        Err(format!(
            "characterizations disagree: {:?} with direct test {slim}",
            [c1, c2, c3, c4]
        ))
    }
}

fn check_slimified_optimum(graph: &MeasureGraph, t: TerminalPair) -> Result<(), String> {
    let cut = min_vertex_cut(graph, t);
    if cut.cut.is_empty() {
        return Ok(());
    }
    let trimmed = slimify(graph, t, &cut.cut).map_err(|e| e.to_string())?;
    let mass = graph.mass_of(&trimmed);
    let check = is_slim(graph, t, &trimmed).map_err(|e| e.to_string())?;
    if !check.slim {
        return Err("slimified optimum is not slim".to_string());
    }
    if (mass - cut.value).abs() <= 1e-9 * cut.value.max(1.0) {
        Ok(())
    } else {
        Err(format!("slimified mass {mass} differs from cut value {}", cut.value))
    }
}

fn check_modulus_certificate(graph: &MeasureGraph, t: TerminalPair) -> Result<(), String> {
    let result = match modulus_p(graph, t, 2.0, 1e-8) {
        Ok(r) => r,
        Err(ModulusError::NoPath) => return Ok(()),
        Err(e) => return Err(e.to_string()),
    };
    let catalog = enumerate_simple_paths(graph, t).map_err(|e| e.to_string())?;
    for path in &catalog.paths {
        let len = result.rho.path_length(path);
        if len < 1.0 - 1e-8 {
            return Err(format!("density underfills a path: length {len}"));
        }
    }
    let energy: f64 = (0..graph.vertex_count())
        .map(|z| graph.mu(z) * result.rho.value(z).powi(2))
        .sum();
    if (energy - result.value).abs() > 1e-9 * result.value.max(1.0) {
        return Err(format!(
            "reported energy {} does not match density energy {energy}",
            result.value
        ));
    }
    if graph.vertex_count() <= MODULUS_CAP {
        let brute = brute_modulus(graph, t, 2.0).map_err(|e| e.to_string())?;
        if (result.value - brute).abs() > 1e-5 * brute.max(1.0) {
            return Err(format!(
                "modulus {} differs from barrier solve {brute}",
                result.value
            ));
        }
    }
    Ok(())
}

fn check_pencil_capacity(graph: &MeasureGraph, t: TerminalPair) -> Result<(), String> {
    let pencil = match pencil_from_flow(graph, t) {
        Ok(p) => p,
        Err(_) => return Ok(()),
    };
    let n = graph.vertex_count();
    let mut load = vec![0.0f64; n];
    for (path, alpha) in &pencil.paths {
        let mut seen = vec![false; n];
        for &z in &path.vertices {
            if !seen[z] {
                seen[z] = true;
                load[z] += alpha;
            }
        }
    }
    for (z, &weight) in load.iter().enumerate() {
        let cap = pencil.capacity_bound * graph.mu(z);
        if weight > cap + 1e-9 * cap.max(1.0) {
            return Err(format!("vertex {z} carries weight {weight} over {cap}"));
        }
    }
    Ok(())
}

/// Runs the suite and returns the JSON report plus a pass/fail flag.
pub fn run_verify(cfg: &VerifyConfig) -> Result<(Value, bool), CliError> {
    if cfg.max_vertices < 2 || cfg.max_vertices > 12 {
        return Err(CliError::Validation(
            "max-vertices must lie between 2 and 12 for the oracle scans".into(),
        ));
    }
    if cfg.samples == 0 {
        return Err(CliError::Validation("samples must be positive".into()));
    }
    let mut rng = gen::rng_for(cfg.seed);
    let names = [
        "cut_equals_min_ratio_scan",
        "fibration_levels",
        "slim_equivalences",
        "slimified_cut_optimum",
        "modulus_certificate",
        "pencil_capacity",
    ];
    let mut report = Reporter::new(&names);
    for _ in 0..cfg.samples {
        use rand::Rng;
        let n = rng.random_range(2..=cfg.max_vertices);
        let graph = if rng.random_bool(0.7) {
            let extra = rng.random_range(0..=n);
            gen::random_connected_graph(&mut rng, n, extra)
        } else {
            let p = rng.random_range(0.2..0.9);
            gen::random_graph(&mut rng, n, p)
        };
        let t = gen::random_terminals(&mut rng, n);
        report.record(0, &graph, t, None, check_cut_against_scan(&graph, t));

        let has_path = connected_component(&graph, t.v).contains(t.w);
        if has_path {
            let set = gen::random_separating_set(&mut rng, &graph, t);
            report.record(1, &graph, t, Some(&set), check_fibration(&graph, t, &set));
            match check_slim_equivalences(&graph, t, &set) {
                Ok(_) => report.record(2, &graph, t, Some(&set), Ok(())),
                Err(e) => report.record(2, &graph, t, Some(&set), Err(e)),
            }
            report.record(3, &graph, t, None, check_slimified_optimum(&graph, t));
        }
        report.record(4, &graph, t, None, check_modulus_certificate(&graph, t));
        report.record(5, &graph, t, None, check_pencil_capacity(&graph, t));
    }
    let failures: usize = report.checks.iter().map(|c| c.failures).sum();
    let value = json!({
        "seed": cfg.seed,
        "max_vertices": cfg.max_vertices,
        "samples": cfg.samples,
        "checks": report
            .checks
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "instances": c.instances,
                    "failures": c.failures,
                })
            })
            .collect::<Vec<_>>(),
        "failures": failures,
        "counterexample": report.counterexample,
    });
    Ok((value, failures == 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_and_reproduces() {
        let cfg = VerifyConfig {
            seed: 42,
            max_vertices: 7,
            samples: 40,
        };
        let (first, ok) = run_verify(&cfg).unwrap();
        assert!(ok, "{first}");
        let (second, _) = run_verify(&cfg).unwrap();
        assert_eq!(
            serde_json::to_string(&first).unwrap(),
            serde_json::to_string(&second).unwrap()
        );
        assert_eq!(first["failures"], 0);
        assert_eq!(first["checks"][0]["instances"], 40);
    }

    #[test]
    fn config_bounds_are_validated() {
        assert!(run_verify(&VerifyConfig { seed: 1, max_vertices: 1, samples: 5 }).is_err());
        assert!(run_verify(&VerifyConfig { seed: 1, max_vertices: 20, samples: 5 }).is_err());
        assert!(run_verify(&VerifyConfig { seed: 1, max_vertices: 6, samples: 0 }).is_err());
    }
}
