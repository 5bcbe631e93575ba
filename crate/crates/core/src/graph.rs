//! Graph ingestion and Laplacian construction.
//!
//! Graphs are directed and weighted. The Laplacian convention is
//! `L = D_out - A`: diagonal entries hold weighted out-degrees, entry
//! `(i, j)` holds `-w_ij`, so every row sums to zero and the maximum
//! weighted out-degree is both the center and radius of the largest
//! Gershgorin disk.

use std::collections::HashSet;
use std::io::BufRead;

use ndarray::Array2;

use crate::error::{Error, Result};

/// Tolerance scale for the zero-row-sum check: `1e-12 * max(1, d_max)`.
const ROW_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub weight: f64,
}

/// A validated directed weighted graph.
///
/// Invariants enforced at construction: node indices in range, weights
/// finite and nonnegative, no self-loops, at most one edge per ordered
/// pair. A weight of zero is accepted and is equivalent to the edge
/// being absent.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedDigraph {
    node_count: usize,
    edges: Vec<Edge>,
}

impl WeightedDigraph {
    pub fn new(node_count: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::InvalidGraph("node count must be positive".into()));
        }
        let mut seen = HashSet::with_capacity(edges.len());
        let mut validated = Vec::with_capacity(edges.len());
        for &(source, target, weight) in &edges {
            validate_edge(node_count, source, target, weight)?;
            if !seen.insert((source, target)) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge {source} -> {target}"
                )));
            }
            validated.push(Edge {
                source,
                target,
                weight,
            });
        }
        Ok(Self {
            node_count,
            edges: validated,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
}

fn validate_edge(node_count: usize, source: usize, target: usize, weight: f64) -> Result<()> {
    if source >= node_count || target >= node_count {
        return Err(Error::InvalidGraph(format!(
            "edge {source} -> {target} out of range for {node_count} nodes"
        )));
    }
    if source == target {
        return Err(Error::InvalidGraph(format!("self-loop at node {source}")));
    }
    if !weight.is_finite() || weight < 0.0 {
        return Err(Error::InvalidGraph(format!(
            "edge {source} -> {target} has invalid weight {weight}"
        )));
    }
    Ok(())
}

/// Options for [`load_edge_list`].
#[derive(Debug, Clone, Copy, Default)]
pub struct EdgeListOptions {
    /// Skip the first line.
    pub has_header: bool,
    /// Fix the node count instead of inferring `1 + max index`.
    pub node_count: Option<usize>,
}

/// Parses a `source,target,weight` CSV edge list into a validated graph.
///
/// Node indices are 0-based. Blank lines are skipped. Errors report the
/// 1-based line number of the offending line. Without a `node_count`
/// override the graph gets `1 + max index` nodes, which makes an empty
/// edge list an error (there is no way to infer a node count).
pub fn load_edge_list<R: BufRead>(reader: R, opts: &EdgeListOptions) -> Result<WeightedDigraph> {
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut seen: HashSet<(usize, usize)> = HashSet::new();
    let mut max_index = None::<usize>;

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        if opts.has_header && idx == 0 {
            continue;
        }
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::EdgeList {
                line: line_no,
                msg: format!("expected `source,target,weight`, got {} fields", fields.len()),
            });
        }
        let source: usize = fields[0].parse().map_err(|_| Error::EdgeList {
            line: line_no,
            msg: format!("invalid source index `{}`", fields[0]),
        })?;
        let target: usize = fields[1].parse().map_err(|_| Error::EdgeList {
            line: line_no,
            msg: format!("invalid target index `{}`", fields[1]),
        })?;
        let weight: f64 = fields[2].parse().map_err(|_| Error::EdgeList {
            line: line_no,
            msg: format!("invalid weight `{}`", fields[2]),
        })?;
        if source == target {
            return Err(Error::EdgeList {
                line: line_no,
                msg: format!("self-loop at node {source}"),
            });
        }
        if !weight.is_finite() || weight < 0.0 {
            return Err(Error::EdgeList {
                line: line_no,
                msg: format!("negative or non-finite weight {weight}"),
            });
        }
        if !seen.insert((source, target)) {
            return Err(Error::EdgeList {
                line: line_no,
                msg: format!("duplicate edge {source} -> {target}"),
            });
        }
        max_index = Some(max_index.map_or(source.max(target), |m| m.max(source).max(target)));
        edges.push((source, target, weight));
    }

    let inferred = max_index.map(|m| m + 1);
    let node_count = match (opts.node_count, inferred) {
        (Some(n), Some(m)) if n < m => {
            return Err(Error::InvalidGraph(format!(
                "node count override {n} is smaller than required {m}"
            )));
        }
        (Some(n), _) => n,
        (None, Some(m)) => m,
        (None, None) => {
            return Err(Error::InvalidGraph(
                "empty edge list and no node count override".into(),
            ));
        }
    };

    WeightedDigraph::new(node_count, edges)
}

/// A dense Laplacian with validated invariants: zero row sums (within
/// `1e-12 * max(1, d_max)`), nonnegative diagonal, nonpositive
/// off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianMatrix {
    matrix: Array2<f64>,
    d_max: f64,
}

impl LaplacianMatrix {
    /// Wraps an explicit matrix, checking the Laplacian invariants.
    pub fn try_from_matrix(matrix: Array2<f64>) -> Result<Self> {
        let (rows, cols) = matrix.dim();
        if rows != cols {
            return Err(Error::InvalidLaplacian(format!(
                "matrix is {rows}x{cols}, not square"
            )));
        }
        if rows == 0 {
            return Err(Error::InvalidLaplacian("matrix is empty".into()));
        }
        let mut d_max = 0.0_f64;
        for i in 0..rows {
            let d = matrix[(i, i)];
            if !d.is_finite() || d < 0.0 {
                return Err(Error::InvalidLaplacian(format!(
                    "diagonal entry ({i},{i}) = {d} is negative or non-finite"
                )));
            }
            d_max = d_max.max(d);
        }
        for i in 0..rows {
            for j in 0..cols {
                let v = matrix[(i, j)];
                if i != j && !(v <= 0.0) {
                    return Err(Error::InvalidLaplacian(format!(
                        "off-diagonal entry ({i},{j}) = {v} is positive or NaN"
                    )));
                }
            }
            let row_sum: f64 = matrix.row(i).sum();
            let tol = ROW_SUM_TOL * d_max.max(1.0);
            if row_sum.abs() > tol {
                return Err(Error::InvalidLaplacian(format!(
                    "row {i} sums to {row_sum:.3e}, exceeds tolerance {tol:.3e}"
                )));
            }
        }
        Ok(Self { matrix, d_max })
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Maximum weighted out-degree, i.e. the largest diagonal entry.
    pub fn d_max(&self) -> f64 {
        self.d_max
    }
}

/// Builds `L = D_out - A`.
///
/// The diagonal accumulates edge weights in edge order, which keeps it
/// bit-identical to [`max_out_degree`].
pub fn build_laplacian(g: &WeightedDigraph) -> LaplacianMatrix {
    let n = g.node_count();
    let mut m = Array2::<f64>::zeros((n, n));
    for e in g.edges() {
        m[(e.source, e.target)] -= e.weight;
        m[(e.source, e.source)] += e.weight;
    }
    let d_max = (0..n).fold(0.0_f64, |acc, i| acc.max(m[(i, i)]));
    LaplacianMatrix { matrix: m, d_max }
}

/// Maximum weighted out-degree of the graph; 0 for an edgeless graph.
pub fn max_out_degree(g: &WeightedDigraph) -> f64 {
    let mut degrees = vec![0.0_f64; g.node_count()];
    for e in g.edges() {
        degrees[e.source] += e.weight;
    }
    degrees.into_iter().fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn graph(n: usize, edges: &[(usize, usize, f64)]) -> WeightedDigraph {
        WeightedDigraph::new(n, edges.to_vec()).unwrap()
    }

    #[test]
    fn parses_two_edge_csv() {
        let g = load_edge_list("0,1,3.0\n1,0,1.0".as_bytes(), &EdgeListOptions::default())
            .unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edges().len(), 2);
        assert_eq!(g.edges()[0].weight, 3.0);
    }

    #[test]
    fn rejects_negative_weight() {
        let err = load_edge_list("0,1,-2.0".as_bytes(), &EdgeListOptions::default()).unwrap_err();
        assert!(matches!(err, Error::EdgeList { line: 1, .. }), "{err}");
    }

    #[test]
    fn rejects_self_loop() {
        let err = load_edge_list("0,0,1.0".as_bytes(), &EdgeListOptions::default()).unwrap_err();
        assert!(matches!(err, Error::EdgeList { line: 1, .. }), "{err}");
    }

    #[test]
    fn rejects_duplicate_edge_with_line_number() {
        let err = load_edge_list(
            "0,1,1.0\n1,2,1.0\n0,1,2.0".as_bytes(),
            &EdgeListOptions::default(),
        )
        .unwrap_err();
        match err {
            Error::EdgeList { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn header_and_node_override() {
        let opts = EdgeListOptions {
            has_header: true,
            node_count: Some(5),
        };
        let g = load_edge_list("source,target,weight\n0,1,2.5".as_bytes(), &opts).unwrap();
        assert_eq!(g.node_count(), 5);

        let too_small = EdgeListOptions {
            has_header: false,
            node_count: Some(1),
        };
        assert!(load_edge_list("0,1,2.5".as_bytes(), &too_small).is_err());
    }

    #[test]
    fn malformed_line_reports_position() {
        let err = load_edge_list("0,1,1.0\nnot-a-line".as_bytes(), &EdgeListOptions::default())
            .unwrap_err();
        match err {
            Error::EdgeList { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn laplacian_of_two_node_graph() {
        let g = graph(2, &[(0, 1, 3.0), (1, 0, 1.0)]);
        let l = build_laplacian(&g);
        assert_eq!(l.matrix(), &array![[3.0, -3.0], [-1.0, 1.0]]);
        assert_eq!(l.d_max(), 3.0);
    }

    #[test]
    fn laplacian_of_edgeless_graph_is_zero() {
        let g = graph(3, &[]);
        let l = build_laplacian(&g);
        assert_eq!(l.matrix(), &Array2::<f64>::zeros((3, 3)));
        assert_eq!(l.d_max(), 0.0);
    }

    #[test]
    fn laplacian_three_node_example() {
        let g = graph(3, &[(0, 1, 2.0), (0, 2, 2.0), (1, 2, 1.0)]);
        let l = build_laplacian(&g);
        assert_eq!(
            l.matrix(),
            &array![[4.0, -2.0, -2.0], [0.0, 1.0, -1.0], [0.0, 0.0, 0.0]]
        );
    }

    #[test]
    fn max_out_degree_matches_diagonal_exactly() {
        let g = graph(2, &[(0, 1, 3.0), (1, 0, 1.0)]);
        assert_eq!(max_out_degree(&g), 3.0);
        assert_eq!(max_out_degree(&graph(4, &[])), 0.0);

        // ring with two out-links of weight 50 per node: row sum exactly 100
        let mut edges = Vec::new();
        let n = 10;
        for i in 0..n {
            edges.push((i, (i + 1) % n, 50.0));
            edges.push((i, (i + 2) % n, 50.0));
        }
        let g = graph(n, &edges);
        let l = build_laplacian(&g);
        assert_eq!(max_out_degree(&g), 100.0);
        assert_eq!(max_out_degree(&g), l.d_max());
    }

    #[test]
    fn row_sums_vanish_on_irregular_weights() {
        let g = graph(
            5,
            &[
                (0, 1, 0.1),
                (0, 2, 9.7),
                (1, 3, 2.30000001),
                (2, 4, 8.25),
                (3, 0, 1e-7),
                (4, 2, 123.456),
            ],
        );
        let l = build_laplacian(&g);
        for i in 0..5 {
            let row_sum: f64 = l.matrix().row(i).sum();
            assert!(row_sum.abs() <= 1e-12 * l.d_max().max(1.0));
        }
    }

    #[test]
    fn try_from_matrix_validates() {
        assert!(LaplacianMatrix::try_from_matrix(array![[3.0, -3.0], [-1.0, 1.0]]).is_ok());
        // positive off-diagonal
        assert!(LaplacianMatrix::try_from_matrix(array![[1.0, 1.0], [-1.0, 1.0]]).is_err());
        // row sum off
        assert!(LaplacianMatrix::try_from_matrix(array![[3.0, -2.0], [-1.0, 1.0]]).is_err());
        // negative diagonal
        assert!(LaplacianMatrix::try_from_matrix(array![[-1.0, 1.0], [1.0, -1.0]]).is_err());
        // not square
        assert!(
            LaplacianMatrix::try_from_matrix(Array2::<f64>::zeros((2, 3))).is_err()
        );
    }

    #[test]
    fn zero_weight_edge_is_equivalent_to_no_link() {
        let with_zero = graph(3, &[(0, 1, 2.0), (1, 2, 0.0)]);
        let without = graph(3, &[(0, 1, 2.0)]);
        assert_eq!(
            build_laplacian(&with_zero).matrix(),
            build_laplacian(&without).matrix()
        );
    }
}
