//! File formats: graph JSON documents, point-cloud CSV, distance-matrix
//! CSV with a masses sidecar, and the JSON value helpers shared by every
//! subcommand's report.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use sepgraph_core::{ExtendedCount, MeasureGraph, PointCloud, VertexSet};

use crate::CliError;

/// Vertex label as it appears in documents. Accepts JSON strings and
/// numbers on input; always serializes as a string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ident(pub String);

impl<'de> Deserialize<'de> for Ident {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct IdentVisitor;
        impl Visitor<'_> for IdentVisitor {
            type Value = Ident;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a string or integer vertex id")
            }
            fn visit_str<E: de::Error>(self, s: &str) -> Result<Ident, E> {
                Ok(Ident(s.to_owned()))
            }
            fn visit_u64<E: de::Error>(self, n: u64) -> Result<Ident, E> {
                Ok(Ident(n.to_string()))
            }
            fn visit_i64<E: de::Error>(self, n: i64) -> Result<Ident, E> {
                Ok(Ident(n.to_string()))
            }
        }
        deserializer.deserialize_any(IdentVisitor)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VertexDoc {
    pub id: Ident,
    pub mu: f64,
}

/// One `[id, id]` edge entry.
#[derive(Debug, Clone, Serialize)]
pub struct EdgeDoc(pub Ident, pub Ident);

impl<'de> Deserialize<'de> for EdgeDoc {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct PairVisitor;
        impl<'de> Visitor<'de> for PairVisitor {
            type Value = EdgeDoc;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a two-element [id, id] array")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
                let a: Ident = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let b: Ident = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(1, &self))?;
                if seq.next_element::<Ident>()?.is_some() {
                    return Err(de::Error::invalid_length(3, &self));
                }
                Ok(EdgeDoc(a, b))
            }
        }
        deserializer.deserialize_seq(PairVisitor)
    }
}

/// On-disk graph document:
/// `{"vertices":[{"id":..,"mu":..},..],"edges":[[id,id],..]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: Vec<VertexDoc>,
    pub edges: Vec<EdgeDoc>,
}

impl GraphDoc {
    pub fn to_graph(&self) -> Result<MeasureGraph, CliError> {
        let vertices: Vec<(String, f64)> = self
            .vertices
            .iter()
            .map(|v| (v.id.0.clone(), v.mu))
            .collect();
        let edges: Vec<(String, String)> = self
            .edges
            .iter()
            .map(|e| (e.0 .0.clone(), e.1 .0.clone()))
            .collect();
        MeasureGraph::from_labeled_edges(vertices, &edges)
            .map_err(|e| CliError::Validation(e.to_string()))
    }

    pub fn from_graph(graph: &MeasureGraph) -> GraphDoc {
        GraphDoc {
            vertices: (0..graph.vertex_count())
                .map(|z| VertexDoc {
                    id: Ident(graph.label(z).to_owned()),
                    mu: graph.mu(z),
                })
                .collect(),
            edges: graph
                .edges()
                .iter()
                .map(|&(a, b)| {
                    EdgeDoc(
                        Ident(graph.label(a).to_owned()),
                        Ident(graph.label(b).to_owned()),
                    )
                })
                .collect(),
        }
    }
}

pub fn load_graph(path: &Path) -> Result<MeasureGraph, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    let doc: GraphDoc = serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    doc.to_graph()
}

/// Resolves a document label to a vertex index.
pub fn resolve_vertex(graph: &MeasureGraph, id: &str) -> Result<usize, CliError> {
    graph
        .index_of(id)
        .ok_or_else(|| CliError::Validation(format!("unknown vertex id {id:?}")))
}

/// Parses a graph vertex set given as comma-separated ids.
pub fn parse_vertex_set(graph: &MeasureGraph, spec: &str) -> Result<VertexSet, CliError> {
    let mut set = VertexSet::empty(graph.vertex_count());
    if spec.trim().is_empty() {
        return Ok(set);
    }
    for id in spec.split(',') {
        set.insert(resolve_vertex(graph, id.trim())?);
    }
    Ok(set)
}

/// Geometric set predicates over a coordinate cloud. A spec is a
/// ';'-separated union of:
/// - `box:lo1,hi1,lo2,hi2,...` (one lo,hi pair per dimension)
/// - `half:a1,...,ad,c` (points with a·x <= c)
/// - `ids:i,j,...` (explicit point indices)
pub fn parse_cloud_set(cloud: &PointCloud, spec: &str) -> Result<Vec<bool>, CliError> {
    let n = cloud.len();
    let mut indicator = vec![false; n];
    for part in spec.split(';') {
        let part = part.trim();
        let (kind, body) = part
            .split_once(':')
            .ok_or_else(|| CliError::Validation(format!("set spec {part:?} lacks a kind prefix")))?;
        let nums: Vec<f64> = if body.trim().is_empty() {
            Vec::new()
        } else {
            body.split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|e| CliError::Validation(format!("set spec number {s:?}: {e}")))
                })
                .collect::<Result<_, _>>()?
        };
        match kind {
            "ids" => {
                for v in &nums {
                    let i = *v as usize;
                    if i >= n || *v != i as f64 {
                        return Err(CliError::Validation(format!(
                            "point index {v} out of range for a {n}-point cloud"
                        )));
                    }
                    indicator[i] = true;
                }
            }
            "box" | "half" => {
                let coords = cloud.coords().ok_or_else(|| {
                    CliError::Validation(
                        "geometric set specs need coordinates, not a distance matrix".into(),
                    )
                })?;
                let d = coords[0].len();
                match kind {
                    "box" => {
                        if nums.len() != 2 * d {
                            return Err(CliError::Validation(format!(
                                "box spec needs {} numbers for dimension {d}, got {}",
                                2 * d,
                                nums.len()
                            )));
                        }
                        for (i, p) in coords.iter().enumerate() {
                            if (0..d).all(|k| nums[2 * k] <= p[k] && p[k] <= nums[2 * k + 1]) {
                                indicator[i] = true;
                            }
                        }
                    }
                    _ => {
                        if nums.len() != d + 1 {
                            return Err(CliError::Validation(format!(
                                "half spec needs {} numbers for dimension {d}, got {}",
                                d + 1,
                                nums.len()
                            )));
                        }
                        for (i, p) in coords.iter().enumerate() {
                            let dot: f64 = (0..d).map(|k| nums[k] * p[k]).sum();
                            if dot <= nums[d] {
                                indicator[i] = true;
                            }
                        }
                    }
                }
            }
            other => {
                return Err(CliError::Validation(format!(
                    "unknown set spec kind {other:?} (expected ids, box, or half)"
                )));
            }
        }
    }
    Ok(indicator)
}

/// Loads a coordinate cloud CSV with columns `x1..xd,mass`. A non-numeric
/// first row is treated as a header.
pub fn load_cloud_csv(path: &Path) -> Result<PointCloud, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut coords: Vec<Vec<f64>> = Vec::new();
    let mut masses: Vec<f64> = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record
            .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        let parsed: Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(values) => {
                if values.len() < 2 {
                    return Err(CliError::Validation(format!(
                        "{}: row {} needs at least one coordinate and a mass",
                        path.display(),
                        row + 1
                    )));
                }
                let (mass, point) = values.split_last().expect("length checked");
                coords.push(point.to_vec());
                masses.push(*mass);
            }
            Err(_) if row == 0 => {}
            Err(e) => {
                return Err(CliError::Validation(format!(
                    "{}: row {}: {e}",
                    path.display(),
                    row + 1
                )));
            }
        }
    }
    PointCloud::from_coords(coords, masses).map_err(|e| CliError::Validation(e.to_string()))
}

/// Loads a distance-matrix cloud: a square CSV of distances plus a sidecar
/// CSV with one mass per row.
pub fn load_matrix_cloud(matrix: &Path, masses: &Path) -> Result<PointCloud, CliError> {
    let read = |path: &Path| -> Result<Vec<Vec<f64>>, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(text.as_bytes());
        let mut rows = Vec::new();
        for (row, record) in reader.records().enumerate() {
            let record = record
                .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
            let values: Vec<f64> = record
                .iter()
                .filter(|s| !s.is_empty())
                .map(str::parse::<f64>)
                .collect::<Result<_, _>>()
                .map_err(|e| {
                    CliError::Validation(format!("{}: row {}: {e}", path.display(), row + 1))
                })?;
            rows.push(values);
        }
        Ok(rows)
    };
    let dist = read(matrix)?;
    let mass_rows = read(masses)?;
    let mass: Vec<f64> = mass_rows.into_iter().flatten().collect();
    PointCloud::from_distance_matrix(dist, mass).map_err(|e| CliError::Validation(e.to_string()))
}

/// Width or position as JSON: a number, or `"inf"`.
pub fn count_json(count: ExtendedCount) -> Value {
    match count {
        ExtendedCount::Finite(k) => json!(k),
        ExtendedCount::Infinite => json!("inf"),
    }
}

/// Ratio-like value as JSON: a float, or `"inf"`.
pub fn ratio_json(value: f64) -> Value {
    if value.is_infinite() {
        json!("inf")
    } else {
        json!(value)
    }
}

/// Vertex set as a JSON array of document ids, ascending by index.
pub fn set_json(graph: &MeasureGraph, set: &VertexSet) -> Value {
    Value::Array(set.iter().map(|z| json!(graph.label(z))).collect())
}

/// Path as a JSON array of document ids in traversal order.
pub fn path_json(graph: &MeasureGraph, vertices: &[usize]) -> Value {
    Value::Array(vertices.iter().map(|&z| json!(graph.label(z))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn temp_file(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn graph_documents_round_trip() {
        let text = r#"{"vertices":[{"id":"v","mu":1.0},{"id":"a","mu":2.5},{"id":"w","mu":1.0}],
                       "edges":[["v","a"],["a","w"]]}"#;
        let doc: GraphDoc = serde_json::from_str(text).unwrap();
        let graph = doc.to_graph().unwrap();
        assert_eq!(graph.vertex_count(), 3);
        assert_eq!(graph.neighbors(1), &[0, 2]);
        let back = GraphDoc::from_graph(&graph);
        assert_eq!(serde_json::to_value(&back).unwrap(), serde_json::from_str::<Value>(text).unwrap());
    }

    #[test]
    fn numeric_ids_are_accepted_and_normalized() {
        let text = r#"{"vertices":[{"id":0,"mu":1},{"id":1,"mu":1}],"edges":[[0,1]]}"#;
        let doc: GraphDoc = serde_json::from_str(text).unwrap();
        let graph = doc.to_graph().unwrap();
        assert_eq!(graph.label(0), "0");
        assert!(graph.adjacent(0, 1));
    }

    #[test]
    fn graph_validation_errors_carry_the_offending_id() {
        let text = r#"{"vertices":[{"id":"a","mu":0.0}],"edges":[]}"#;
        let doc: GraphDoc = serde_json::from_str(text).unwrap();
        let err = doc.to_graph().unwrap_err();
        assert!(format!("{err}").contains('a'), "{err}");
    }

    #[test]
    fn cloud_csv_with_and_without_header() {
        let with = temp_file("x1,x2,mass\n0.0,0.0,1.0\n1.0,0.5,2.0\n");
        let cloud = load_cloud_csv(with.path()).unwrap();
        assert_eq!(cloud.len(), 2);
        assert_eq!(cloud.mass(1), 2.0);
        let without = temp_file("0.0,0.0,1.0\n1.0,0.5,2.0\n");
        let plain = load_cloud_csv(without.path()).unwrap();
        assert_eq!(plain.len(), 2);
        assert_eq!(plain.distance(0, 1), (1.0f64 + 0.25).sqrt());
    }

    #[test]
    fn matrix_cloud_with_sidecar() {
        let matrix = temp_file("0,1,2\n1,0,1\n2,1,0\n");
        let masses = temp_file("1.0\n2.0\n3.0\n");
        let cloud = load_matrix_cloud(matrix.path(), masses.path()).unwrap();
        assert_eq!(cloud.len(), 3);
        assert_eq!(cloud.distance(0, 2), 2.0);
        assert_eq!(cloud.total_mass(), 6.0);
    }

    #[test]
    fn set_specs_cover_boxes_halves_ids_and_unions() {
        let cloud = PointCloud::from_coords(
            vec![vec![0.1, 0.1], vec![0.5, 0.5], vec![0.9, 0.9]],
            vec![1.0; 3],
        )
        .unwrap();
        assert_eq!(
            parse_cloud_set(&cloud, "box:0.4,0.6,0.4,0.6").unwrap(),
            vec![false, true, false]
        );
        assert_eq!(
            parse_cloud_set(&cloud, "half:1,0,0.2").unwrap(),
            vec![true, false, false]
        );
        assert_eq!(
            parse_cloud_set(&cloud, "ids:2;box:0,0.2,0,0.2").unwrap(),
            vec![true, false, true]
        );
        assert!(parse_cloud_set(&cloud, "blob:1").is_err());
        assert!(parse_cloud_set(&cloud, "box:0,1").is_err());
    }

    #[test]
    fn json_value_helpers() {
        assert_eq!(count_json(ExtendedCount::Finite(3)), json!(3));
        assert_eq!(count_json(ExtendedCount::Infinite), json!("inf"));
        assert_eq!(ratio_json(f64::INFINITY), json!("inf"));
        assert_eq!(ratio_json(2.5), json!(2.5));
    }
}
