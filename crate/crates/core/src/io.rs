//! File formats shared with the CLI: JSON point sets, JSON trees with named
//! nodes, and the CSV tables. All emitters are deterministic functions of
//! their inputs.

use crate::construct::RatioSequence;
use crate::embed::{ReductionInstance, ScanReport};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::solver::SteinerTree;
use crate::topology::{Node, Topology};
use serde::{Deserialize, Serialize};

/// On-disk point set: `{"dim": d, "points": [[..], ..]}`. Extra fields
/// (e.g. a metadata block) are ignored on load.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointSetFile {
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metadata: Option<serde_json::Value>,
}

pub fn parse_point_set(json: &str) -> Result<Vec<Point>> {
    let file: PointSetFile = serde_json::from_str(json)?;
    if file.dim == 0 {
        return Err(Error::Parse("dim must be at least 1".into()));
    }
    file.points
        .into_iter()
        .map(|coords| {
            if coords.len() != file.dim {
                return Err(Error::Parse(format!(
                    "point of dimension {} in a dim-{} set",
                    coords.len(),
                    file.dim
                )));
            }
            if coords.iter().any(|c| !c.is_finite()) {
                return Err(Error::Parse("non-finite coordinate".into()));
            }
            Ok(Point::new(coords))
        })
        .collect()
}

pub fn point_set_to_json(points: &[Point], metadata: Option<serde_json::Value>) -> String {
    let file = PointSetFile {
        dim: points.first().map_or(0, Point::dim),
        points: points.iter().map(|p| p.coords().to_vec()).collect(),
        metadata,
    };
    serde_json::to_string_pretty(&file).expect("point set serializes")
}

/// Reduction instances carry their source graph in the metadata block.
pub fn instance_to_json(instance: &ReductionInstance) -> String {
    let metadata = serde_json::json!({
        "source_n_vertices": instance.config.source.n_vertices(),
        "source_edges": instance.config.source.edges(),
        "scale": "unit",
        "triangle_free": true,
    });
    point_set_to_json(&instance.config.points, Some(metadata))
}

/// On-disk Steiner tree: named nodes with positions, edges by name, cost.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TreeFile {
    pub dim: usize,
    pub n_terminals: usize,
    pub n_steiner: usize,
    pub nodes: Vec<TreeNodeEntry>,
    pub edges: Vec<[String; 2]>,
    pub cost: f64,
    pub converged: bool,
    pub residual: f64,
    pub collapsed_edges: Vec<[String; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TreeNodeEntry {
    pub name: String,
    pub pos: Vec<f64>,
}

pub fn tree_to_file(tree: &SteinerTree) -> TreeFile {
    let t = &tree.topology;
    TreeFile {
        dim: tree.dim(),
        n_terminals: t.n_terminals(),
        n_steiner: t.n_steiner(),
        nodes: (0..t.n_nodes())
            .map(|i| TreeNodeEntry {
                name: t.node_at(i).to_string(),
                pos: tree.positions[i].coords().to_vec(),
            })
            .collect(),
        edges: t
            .edges()
            .iter()
            .map(|&(u, v)| [u.to_string(), v.to_string()])
            .collect(),
        cost: tree.cost,
        converged: tree.converged,
        residual: tree.residual,
        collapsed_edges: tree
            .collapsed_edges
            .iter()
            .map(|&(u, v)| [u.to_string(), v.to_string()])
            .collect(),
    }
}

pub fn tree_to_json(tree: &SteinerTree) -> String {
    serde_json::to_string_pretty(&tree_to_file(tree)).expect("tree serializes")
}

pub fn tree_from_file(file: &TreeFile) -> Result<SteinerTree> {
    let parse_edge = |pair: &[String; 2]| -> Result<(Node, Node)> {
        Ok((Node::parse(&pair[0])?, Node::parse(&pair[1])?))
    };
    let edges = file.edges.iter().map(parse_edge).collect::<Result<_>>()?;
    let topology = Topology::new(file.n_terminals, file.n_steiner, edges)?;
    let mut positions = vec![None; topology.n_nodes()];
    for entry in &file.nodes {
        let node = Node::parse(&entry.name)?;
        if entry.pos.len() != file.dim || entry.pos.iter().any(|c| !c.is_finite()) {
            return Err(Error::Parse(format!(
                "bad position for node {}",
                entry.name
            )));
        }
        positions[topology.index(node)] = Some(Point::new(entry.pos.clone()));
    }
    let positions: Vec<Point> = positions
        .into_iter()
        .enumerate()
        .map(|(i, p)| {
            p.ok_or_else(|| Error::Parse(format!("missing position for {}", topology.node_at(i))))
        })
        .collect::<Result<_>>()?;
    let collapsed_edges = file
        .collapsed_edges
        .iter()
        .map(parse_edge)
        .collect::<Result<_>>()?;
    let tree = SteinerTree {
        topology,
        positions,
        cost: file.cost,
        converged: file.converged,
        residual: file.residual,
        collapsed_edges,
    };
    let recomputed = tree.recompute_cost();
    if (recomputed - tree.cost).abs() > 1e-9 * (1.0 + recomputed.abs()) {
        return Err(Error::Parse(format!(
            "stored cost {} does not match edge lengths {}",
            tree.cost, recomputed
        )));
    }
    Ok(tree)
}

pub fn tree_from_json(json: &str) -> Result<SteinerTree> {
    let file: TreeFile = serde_json::from_str(json)?;
    tree_from_file(&file)
}

/// Ratio-sequence table: one row per step with the gap to the limit.
pub fn ratio_csv(seq: &RatioSequence) -> String {
    let mut out = String::from("k,terminals,ratio,gap_to_limit\n");
    for (k, &l) in seq.values.iter().enumerate() {
        out.push_str(&format!(
            "{k},{},{l},{}\n",
            seq.d0 * (1usize << k),
            l - seq.limit
        ));
    }
    out
}

/// Scan table: one row per enumerated graph.
pub fn scan_csv(report: &ScanReport) -> String {
    let mut out = String::from("graph,n_vertices,edges,diameter_le_2,pruned_by,cost,ties_star\n");
    for (i, e) in report.entries.iter().enumerate() {
        let edges = e
            .graph
            .edges()
            .iter()
            .map(|(u, v)| format!("{u}-{v}"))
            .collect::<Vec<_>>()
            .join(" ");
        let pruned = e
            .pruned_by
            .map(|(a, b)| format!("{a}|{b}"))
            .unwrap_or_default();
        let cost = e.cost.map(|c| c.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{i},{},{edges},{},{pruned},{cost},{}\n",
            e.graph.n_vertices(),
            e.diameter_le_2,
            e.ties_star
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::ratio_sequence;
    use crate::solver::{relatively_minimal, simplex_terminals};
    use crate::topology::conjectured_topology;

    #[test]
    fn point_set_round_trip() {
        let pts = simplex_terminals(4);
        let json = point_set_to_json(&pts, None);
        let back = parse_point_set(&json).unwrap();
        assert_eq!(pts, back);
    }

    #[test]
    fn point_set_rejects_inconsistent_dims() {
        assert!(parse_point_set(r#"{"dim": 2, "points": [[1.0, 0.0], [1.0]]}"#).is_err());
        assert!(parse_point_set(r#"{"dim": 0, "points": []}"#).is_err());
    }

    #[test]
    fn tree_round_trip() {
        let tree = relatively_minimal(
            &simplex_terminals(4),
            &conjectured_topology(4).unwrap(),
            1e-12,
        )
        .unwrap();
        let json = tree_to_json(&tree);
        let back = tree_from_json(&json).unwrap();
        assert_eq!(back.topology, tree.topology);
        assert_eq!(back.positions, tree.positions);
        assert_eq!(back.cost, tree.cost);
        // Deterministic emission.
        assert_eq!(json, tree_to_json(&back));
    }

    #[test]
    fn tree_cost_is_validated() {
        let tree = relatively_minimal(
            &simplex_terminals(3),
            &conjectured_topology(3).unwrap(),
            1e-12,
        )
        .unwrap();
        let mut file = tree_to_file(&tree);
        file.cost += 0.5;
        assert!(tree_from_file(&file).is_err());
    }

    #[test]
    fn ratio_csv_shape() {
        let seq = ratio_sequence(3.0_f64.sqrt() / 2.0, 3, 2).unwrap();
        let csv = ratio_csv(&seq);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "k,terminals,ratio,gap_to_limit");
        assert!(lines[1].starts_with("0,3,"));
        assert!(lines[2].starts_with("1,6,"));
        assert!(lines[3].starts_with("2,12,"));
    }
}
