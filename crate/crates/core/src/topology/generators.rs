// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Built-in device families and the textual graph-spec syntax used by the CLI.

use super::CouplingGraph;
use crate::error::{Result, SabreError};

pub fn line(n: usize) -> CouplingGraph {
    CouplingGraph::new(n, (1..n as u32).map(|i| (i - 1, i))).expect("valid line")
}

pub fn ring(n: usize) -> CouplingGraph {
    let mut edges: Vec<(u32, u32)> = (1..n as u32).map(|i| (i - 1, i)).collect();
    if n > 2 {
        edges.push((n as u32 - 1, 0));
    }
    CouplingGraph::new(n, edges).expect("valid ring")
}

/// Row-major `rows × cols` grid; qubit `r * cols + c`.
pub fn grid(rows: usize, cols: usize) -> CouplingGraph {
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let q = (r * cols + c) as u32;
            if c + 1 < cols {
                edges.push((q, q + 1));
            }
            if r + 1 < rows {
                edges.push((q, q + cols as u32));
            }
        }
    }
    CouplingGraph::new(rows * cols, edges).expect("valid grid")
}

/// The 27-qubit heavy-hex device layout.
pub fn falcon_27() -> CouplingGraph {
    const EDGES: [(u32, u32); 28] = [
        (0, 1),
        (1, 2),
        (1, 4),
        (2, 3),
        (3, 5),
        (4, 7),
        (5, 8),
        (6, 7),
        (7, 10),
        (8, 9),
        (8, 11),
        (10, 12),
        (11, 14),
        (12, 13),
        (12, 15),
        (13, 14),
        (14, 16),
        (15, 18),
        (16, 19),
        (17, 18),
        (18, 21),
        (19, 20),
        (19, 22),
        (21, 23),
        (22, 25),
        (23, 24),
        (24, 25),
        (25, 26),
    ];
    CouplingGraph::new(27, EDGES).expect("valid heavy-hex 27")
}

/// The 127-qubit heavy-hex device layout: seven rows joined by alternating bridge qubits.
pub fn eagle_127() -> CouplingGraph {
    let mut edges = Vec::new();
    let mut next = 0u32;
    let mut prev_row: Vec<(usize, u32)> = Vec::new();
    for r in 0..7 {
        let cols: Vec<usize> = match r {
            0 => (0..14).collect(),
            6 => (1..15).collect(),
            _ => (0..15).collect(),
        };
        let row: Vec<(usize, u32)> = cols
            .iter()
            .map(|&c| {
                next += 1;
                (c, next - 1)
            })
            .collect();
        for w in row.windows(2) {
            edges.push((w[0].1, w[1].1));
        }
        if r > 0 {
            let bridge_cols: [usize; 4] = if (r - 1) % 2 == 0 {
                [0, 4, 8, 12]
            } else {
                [2, 6, 10, 14]
            };
            // Bridge qubits were numbered right after the previous row.
            let first_bridge = row[0].1 - 4;
            for (i, c) in bridge_cols.iter().enumerate() {
                let bridge = first_bridge + i as u32;
                let above = prev_row
                    .iter()
                    .find(|(pc, _)| pc == c)
                    .expect("bridge column")
                    .1;
                let below = row.iter().find(|(rc, _)| rc == c).expect("bridge column").1;
                edges.push((above, bridge));
                edges.push((bridge, below));
            }
        }
        if r < 6 {
            // Four bridge qubits are numbered between this row and the next.
            next += 4;
        }
        prev_row = row;
    }
    CouplingGraph::new(127, edges).expect("valid heavy-hex 127")
}

/// Number of qubits in the distance-`d` heavy-hex code lattice.
pub fn heavy_hex_code_size(d: usize) -> usize {
    (5 * d * d - 2 * d - 1) / 2
}

/// Distance-`d` heavy-hex code lattice for odd `d ≥ 3`.
///
/// `d` rows of `2d - 1` qubits; between consecutive rows, bridge qubits sit at every fourth
/// column plus one boundary column, alternating sides. Rows and bridges are numbered in
/// reading order.
pub fn heavy_hex_code(d: usize) -> Result<CouplingGraph> {
    if d < 3 || d.is_multiple_of(2) {
        return Err(SabreError::InvalidGraph(format!(
            "heavy-hex code distance must be odd and at least 3, got {d}"
        )));
    }
    let width = 2 * d - 1;
    let mut edges = Vec::new();
    let mut next = 0u32;
    let mut prev_start = 0u32;
    let mut pending: Vec<(u32, usize)> = Vec::new();
    for r in 0..d {
        let start = next;
        next += width as u32;
        for c in 1..width {
            edges.push((start + c as u32 - 1, start + c as u32));
        }
        for &(bridge, c) in &pending {
            edges.push((prev_start + c as u32, bridge));
            edges.push((bridge, start + c as u32));
        }
        pending.clear();
        if r + 1 < d {
            let mut cols: Vec<usize> = if r % 2 == 0 {
                (1..width).step_by(4).collect()
            } else {
                (3..width).step_by(4).collect()
            };
            if r % 2 == 0 {
                cols.push(width - 1);
            } else {
                cols.insert(0, 0);
            }
            for c in cols {
                pending.push((next, c));
                next += 1;
            }
        }
        prev_start = start;
    }
    CouplingGraph::new(next as usize, edges)
}

/// Heavy-hex device by qubit count: 27 and 127 select the device layouts, any other count
/// must be a code-lattice size.
pub fn heavy_hex(num_qubits: usize) -> Result<CouplingGraph> {
    match num_qubits {
        27 => Ok(falcon_27()),
        127 => Ok(eagle_127()),
        n => {
            let d = (3..=999).step_by(2).find(|&d| heavy_hex_code_size(d) >= n);
            match d {
                Some(d) if heavy_hex_code_size(d) == n => heavy_hex_code(d),
                _ => Err(SabreError::InvalidGraph(format!(
                    "no heavy-hex layout with {n} qubits (try 27, 127 or a code size such as 19, 57, 115)"
                ))),
            }
        }
    }
}

fn parse_count(value: &str, spec: &str) -> Result<usize> {
    value
        .trim()
        .parse()
        .map_err(|_| SabreError::InvalidGraph(format!("bad size in graph spec '{spec}'")))
}

/// Parse `line:N`, `ring:N`, `grid:RxC`, `heavy_hex:N` or `heavy_hex_d:D`. Several specs joined
/// with `+` give their disjoint union.
pub fn parse_graph_spec(spec: &str) -> Result<CouplingGraph> {
    if spec.contains('+') {
        let parts = spec
            .split('+')
            .map(parse_graph_spec)
            .collect::<Result<Vec<_>>>()?;
        return Ok(CouplingGraph::disjoint_union(&parts));
    }
    let (family, arg) = spec.trim().split_once(':').ok_or_else(|| {
        SabreError::InvalidGraph(format!("graph spec '{spec}' needs FAMILY:SIZE"))
    })?;
    let graph = match family {
        "line" => line(parse_count(arg, spec)?),
        "ring" => ring(parse_count(arg, spec)?),
        "grid" => {
            let (r, c) = arg.split_once(['x', 'X']).ok_or_else(|| {
                SabreError::InvalidGraph(format!("grid spec '{spec}' needs ROWSxCOLS"))
            })?;
            grid(parse_count(r, spec)?, parse_count(c, spec)?)
        }
        "heavy_hex" => heavy_hex(parse_count(arg, spec)?)?,
        "heavy_hex_d" => heavy_hex_code(parse_count(arg, spec)?)?,
        other => {
            return Err(SabreError::InvalidGraph(format!(
                "unknown graph family '{other}'"
            )));
        }
    };
    if graph.num_qubits() == 0 {
        return Err(SabreError::InvalidGraph(format!(
            "graph spec '{spec}' has no qubits"
        )));
    }
    Ok(graph)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{connected_components, PhysicalQubit};

    fn max_degree(g: &CouplingGraph) -> usize {
        (0..g.num_qubits())
            .map(|q| g.degree(PhysicalQubit(q as u32)))
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn simple_families() {
        assert_eq!(line(5).num_edges(), 4);
        assert_eq!(ring(5).num_edges(), 5);
        assert_eq!(ring(2).num_edges(), 1);
        assert_eq!(grid(3, 4).num_edges(), 3 * 3 + 2 * 4);
    }

    #[test]
    fn heavy_hex_devices() {
        for (g, n, e) in [(falcon_27(), 27, 28), (eagle_127(), 127, 144)] {
            assert_eq!(g.num_qubits(), n);
            assert_eq!(g.num_edges(), e);
            assert_eq!(max_degree(&g), 3);
            assert_eq!(connected_components(&g).len(), 1);
        }
        let eagle = eagle_127();
        assert!(eagle.contains_edge(PhysicalQubit(0), PhysicalQubit(14)));
        assert!(eagle.contains_edge(PhysicalQubit(14), PhysicalQubit(18)));
        assert!(eagle.contains_edge(PhysicalQubit(96), PhysicalQubit(109)));
        assert!(eagle.contains_edge(PhysicalQubit(109), PhysicalQubit(114)));
    }

    #[test]
    fn code_lattice_counts() {
        for d in [3usize, 5, 7, 9] {
            let g = heavy_hex_code(d).unwrap();
            assert_eq!(g.num_qubits(), heavy_hex_code_size(d));
            assert_eq!(g.num_edges(), 3 * d * d - 2 * d - 1);
            assert_eq!(max_degree(&g), 3);
            assert_eq!(connected_components(&g).len(), 1);
        }
        assert!(heavy_hex_code(4).is_err());
        assert_eq!(heavy_hex(57).unwrap().num_edges(), 64);
        assert!(heavy_hex(50).is_err());
    }

    #[test]
    fn specs() {
        assert_eq!(parse_graph_spec("grid:2x3").unwrap().num_qubits(), 6);
        assert_eq!(parse_graph_spec("heavy_hex:127").unwrap().num_edges(), 144);
        let two = parse_graph_spec("grid:2x2+line:3").unwrap();
        assert_eq!(two.num_qubits(), 7);
        assert_eq!(connected_components(&two).len(), 2);
        assert!(parse_graph_spec("torus:3").is_err());
        assert!(parse_graph_spec("line").is_err());
        assert!(parse_graph_spec("line:x").is_err());
    }
}
