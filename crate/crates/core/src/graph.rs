//! Simple undirected graphs and their combinatorial Laplacians.
//!
//! Vertices are indexed `0..n` in memory. The edge-list text format (see
//! [`read_edge_list`] / [`write_edge_list`]) uses 1-based ids.

use std::collections::VecDeque;
use std::io::{BufRead, Write};

use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// A simple undirected graph: no loops, no multi-edges, symmetric adjacency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    /// Sorted neighbour lists.
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        let mut edge_count = 0;
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::invalid(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at vertex {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
            edge_count += 1;
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::invalid(format!("duplicate edge at vertex {u}")));
            }
        }
        Ok(Graph { adj, edge_count })
    }

    /// Like [`Graph::from_edges`] but silently drops loops and duplicate edges.
    pub fn from_edges_simplified<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::invalid(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        let mut twice = 0;
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
            twice += list.len();
        }
        Ok(Graph {
            adj,
            edge_count: twice / 2,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Connected-component id per vertex; ids are assigned in order of each
    /// component's smallest vertex.
    pub fn component_ids(&self) -> (Vec<usize>, usize) {
        let n = self.n();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = count;
                        queue.push_back(v);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    pub fn is_connected(&self) -> bool {
        self.n() > 0 && self.component_ids().1 == 1
    }
}

/// Induced subgraph on one component together with the vertex relabeling.
#[derive(Debug, Clone)]
pub struct Component {
    pub graph: Graph,
    /// `old_to_new[v]` is the new id of original vertex `v`, if kept.
    pub old_to_new: Vec<Option<usize>>,
    /// `new_to_old[i]` is the original id of new vertex `i`.
    pub new_to_old: Vec<usize>,
}

/// Largest connected component, relabeled contiguously in original order.
/// Ties go to the component containing the smallest original vertex.
pub fn largest_connected_component(g: &Graph) -> Component {
    let (comp, count) = g.component_ids();
    let mut sizes = vec![0usize; count];
    for &c in &comp {
        sizes[c] += 1;
    }
    // Component ids are ordered by smallest member, so the first maximum wins ties.
    let best = sizes
        .iter()
        .enumerate()
        .fold(None::<(usize, usize)>, |acc, (c, &s)| match acc {
            Some((_, bs)) if bs >= s => acc,
            _ => Some((c, s)),
        })
        .map_or(0, |(c, _)| c);

    let mut old_to_new = vec![None; g.n()];
    let mut new_to_old = Vec::new();
    for v in 0..g.n() {
        if comp[v] == best {
            old_to_new[v] = Some(new_to_old.len());
            new_to_old.push(v);
        }
    }
    let edges = g
        .edges()
        .filter_map(|(u, v)| Some((old_to_new[u]?, old_to_new[v]?)));
    let graph = Graph::from_edges(new_to_old.len(), edges)
        .expect("induced subgraph of a simple graph is simple");
    Component {
        graph,
        old_to_new,
        new_to_old,
    }
}

pub fn build_path(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::invalid(format!("path graph needs n >= 2, got {n}")));
    }
    Graph::from_edges(n, (0..n - 1).map(|i| (i, i + 1)))
}

/// Vertex id of pixel `(t, r, c)` (frame, row, column; all 0-based) in an
/// `nx` x `ny` x `nt` grid: `t*nx*ny + r*nx + c`.
#[inline]
pub fn grid_index(nx: usize, ny: usize, t: usize, r: usize, c: usize) -> usize {
    t * nx * ny + r * nx + c
}

/// Three-dimensional grid: 4-neighbourhood inside each `nx` x `ny` frame plus
/// links between the same pixel in consecutive frames.
pub fn build_grid3d(nx: usize, ny: usize, nt: usize) -> Result<Graph> {
    if nx == 0 || ny == 0 || nt == 0 {
        return Err(Error::invalid(format!(
            "grid dimensions must be positive, got {nx}x{ny}x{nt}"
        )));
    }
    let mut edges = Vec::with_capacity(3 * nx * ny * nt);
    for t in 0..nt {
        for r in 0..ny {
            for c in 0..nx {
                let v = grid_index(nx, ny, t, r, c);
                if c + 1 < nx {
                    edges.push((v, grid_index(nx, ny, t, r, c + 1)));
                }
                if r + 1 < ny {
                    edges.push((v, grid_index(nx, ny, t, r + 1, c)));
                }
                if t + 1 < nt {
                    edges.push((v, grid_index(nx, ny, t + 1, r, c)));
                }
            }
        }
    }
    Graph::from_edges(nx * ny * nt, edges)
}

/// Watts–Strogatz style small-world graph.
///
/// Starts from the `n`-cycle and visits its edges `(u, v)`, `u < v`, in sorted order;
/// with probability `rewire_prob` the second endpoint is replaced by a
/// uniformly drawn vertex (a draw equal to the first endpoint is discarded
/// and the edge kept). Multi-edges are removed afterwards and the largest
/// connected component is returned.
pub fn build_watts_strogatz<R: Rng + ?Sized>(
    n: usize,
    rewire_prob: f64,
    rng: &mut R,
) -> Result<Component> {
    if n < 3 {
        return Err(Error::invalid(format!("ring graph needs n >= 3, got {n}")));
    }
    if !(0.0..=1.0).contains(&rewire_prob) {
        return Err(Error::invalid(format!(
            "rewiring probability {rewire_prob} not in [0, 1]"
        )));
    }
    let mut ring: Vec<(usize, usize)> = (0..n)
        .map(|i| {
            let j = (i + 1) % n;
            (i.min(j), i.max(j))
        })
        .collect();
    ring.sort_unstable();
    let edges: Vec<_> = ring
        .into_iter()
        .map(|(u, v)| {
            if rng.random::<f64>() < rewire_prob {
                let w = rng.random_range(0..n);
                if w != u {
                    return (u, w);
                }
            }
            (u, v)
        })
        .collect();
    let g = Graph::from_edges_simplified(n, edges)?;
    Ok(largest_connected_component(&g))
}

/// Symmetrized k-nearest-neighbour graph under Euclidean distance.
///
/// Each row selects its `k` nearest other rows (ties broken by lower index);
/// an edge exists when either endpoint selected the other.
pub fn build_knn_graph(features: &Matrix, k: usize) -> Result<Graph> {
    let n = features.rows();
    if k == 0 || k >= n {
        return Err(Error::invalid(format!(
            "k-NN needs 1 <= k < n, got k = {k}, n = {n}"
        )));
    }
    if let Some(pos) = features.as_slice().iter().position(|x| !x.is_finite()) {
        return Err(Error::invalid(format!(
            "non-finite feature at row {}, column {}",
            pos / features.cols().max(1),
            pos % features.cols().max(1)
        )));
    }
    let mut edges = Vec::with_capacity(n * k);
    let mut cand: Vec<(f64, usize)> = Vec::with_capacity(n);
    for i in 0..n {
        let xi = features.row(i);
        cand.clear();
        cand.extend((0..n).filter(|&j| j != i).map(|j| {
            let d2: f64 = xi
                .iter()
                .zip(features.row(j))
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            (d2, j)
        }));
        let by_dist = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        if k < cand.len() {
            cand.select_nth_unstable_by(k - 1, by_dist);
        }
        edges.extend(cand[..k].iter().map(|&(_, j)| (i, j)));
    }
    let g = Graph::from_edges_simplified(n, edges)?;
    if !g.is_connected() {
        log::warn!(
            "k-NN graph with k = {k} on {n} points has {} components",
            g.component_ids().1
        );
    }
    Ok(g)
}

/// Symmetric sparse matrix storing the diagonal and each off-diagonal entry
/// once (upper triangle, `i < j`).
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymMatrix {
    diag: Vec<f64>,
    /// Upper-triangle entries `(i, j, value)`, sorted, `i < j`.
    upper: Vec<(usize, usize, f64)>,
}

impl SparseSymMatrix {
    pub fn new(diag: Vec<f64>, mut upper: Vec<(usize, usize, f64)>) -> Result<Self> {
        let n = diag.len();
        for e in upper.iter_mut() {
            if e.0 > e.1 {
                std::mem::swap(&mut e.0, &mut e.1);
            }
            if e.0 == e.1 || e.1 >= n {
                return Err(Error::invalid(format!(
                    "bad off-diagonal entry ({}, {})",
                    e.0, e.1
                )));
            }
        }
        upper.sort_unstable_by_key(|e| (e.0, e.1));
        if upper
            .windows(2)
            .any(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1))
        {
            return Err(Error::invalid("duplicate off-diagonal entry"));
        }
        Ok(SparseSymMatrix { diag, upper })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    pub fn off_diagonal(&self) -> &[(usize, usize, f64)] {
        &self.upper
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return self.diag[i];
        }
        let key = (i.min(j), i.max(j));
        self.upper
            .binary_search_by_key(&key, |e| (e.0, e.1))
            .map_or(0.0, |p| self.upper[p].2)
    }

    /// `y = A x`
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.dim());
        assert_eq!(y.len(), self.dim());
        for ((yi, d), xi) in y.iter_mut().zip(&self.diag).zip(x) {
            *yi = d * xi;
        }
        for &(i, j, a) in &self.upper {
            y[i] += a * x[j];
            y[j] += a * x[i];
        }
    }

    pub fn row_sums(&self) -> Vec<f64> {
        let mut s = self.diag.clone();
        for &(i, j, a) in &self.upper {
            s[i] += a;
            s[j] += a;
        }
        s
    }

    /// Upper bound on the spectral radius (Gershgorin).
    pub fn gershgorin_bound(&self) -> f64 {
        let mut r: Vec<f64> = self.diag.iter().map(|d| d.abs()).collect();
        for &(i, j, a) in &self.upper {
            r[i] += a.abs();
            r[j] += a.abs();
        }
        r.into_iter().fold(0.0, f64::max)
    }

    /// Dense row-major copy, for small problems and tests.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut m = vec![vec![0.0; n]; n];
        for (i, d) in self.diag.iter().enumerate() {
            m[i][i] = *d;
        }
        for &(i, j, a) in &self.upper {
            m[i][j] = a;
            m[j][i] = a;
        }
        m
    }
}

/// Positive semi-definite combinatorial Laplacian `D - A`.
pub fn laplacian(g: &Graph) -> SparseSymMatrix {
    SparseSymMatrix {
        diag: g.degrees().into_iter().map(|d| d as f64).collect(),
        upper: g.edges().map(|(u, v)| (u, v, -1.0)).collect(),
    }
}

/// Writes one `u v` line per edge, 1-based, preceded by a `# n = ...` comment
/// so isolated trailing vertices survive a round trip.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    writeln!(out, "# n = {}", g.n())?;
    for (u, v) in g.edges() {
        writeln!(out, "{} {}", u + 1, v + 1)?;
    }
    Ok(())
}

/// Reads the edge-list format written by [`write_edge_list`]. Blank lines and
/// `#` comments are ignored; without an `# n = ...` header the vertex count is
/// the largest id seen.
pub fn read_edge_list<R: BufRead>(input: R) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut declared_n = None;
    let mut max_id = 0;
    let mut offset = 0u64;
    for line in input.lines() {
        let line = line?;
        let line_offset = offset;
        offset += line.len() as u64 + 1;
        let trimmed = line.trim();
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(rest) = comment.trim().strip_prefix("n =") {
                declared_n =
                    Some(rest.trim().parse::<usize>().map_err(|e| {
                        Error::format(line_offset, format!("bad vertex count: {e}"))
                    })?);
            }
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        let mut parts = trimmed.split_whitespace();
        let mut next_id = || -> Result<usize> {
            let tok = parts
                .next()
                .ok_or_else(|| Error::format(line_offset, "expected two vertex ids"))?;
            let id: usize = tok
                .parse()
                .map_err(|e| Error::format(line_offset, format!("bad vertex id {tok:?}: {e}")))?;
            if id == 0 {
                return Err(Error::format(line_offset, "vertex ids are 1-based"));
            }
            Ok(id)
        };
        let (u, v) = (next_id()?, next_id()?);
        if parts.next().is_some() {
            return Err(Error::format(line_offset, "trailing tokens after edge"));
        }
        max_id = max_id.max(u).max(v);
        edges.push((u - 1, v - 1));
    }
    let n = declared_n.unwrap_or(max_id);
    if max_id > n {
        return Err(Error::invalid(format!(
            "vertex id {max_id} exceeds declared count {n}"
        )));
    }
    Graph::from_edges(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn assert_simple(g: &Graph) {
        for u in 0..g.n() {
            let nb = g.neighbors(u);
            assert!(!nb.contains(&u), "loop at {u}");
            assert!(nb.windows(2).all(|w| w[0] < w[1]), "duplicate at {u}");
            for &v in nb {
                assert!(g.neighbors(v).contains(&u), "asymmetric {u}-{v}");
            }
        }
        assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.edge_count());
    }

    #[test]
    fn path_shapes() {
        let g = build_path(500).unwrap();
        assert_eq!((g.n(), g.edge_count()), (500, 499));
        let g = build_path(2).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1)]);
        let g = build_path(10).unwrap();
        assert_eq!(g.degrees(), vec![1, 2, 2, 2, 2, 2, 2, 2, 2, 1]);
        assert!(g.is_connected());
        assert!(build_path(1).is_err());
    }

    #[test]
    fn grid_counts() {
        assert_eq!(build_grid3d(100, 100, 9).unwrap().n(), 90_000);
        let g = build_grid3d(1, 1, 1).unwrap();
        assert_eq!((g.n(), g.edge_count()), (1, 0));
        let g = build_grid3d(2, 2, 2).unwrap();
        assert_eq!((g.n(), g.edge_count()), (8, 12));
        assert!(build_grid3d(0, 3, 3).is_err());
    }

    #[test]
    fn grid_edge_count_formula_matches_enumeration() {
        for a in 1..=4 {
            for b in 1..=4 {
                for c in 1..=4 {
                    let g = build_grid3d(a, b, c).unwrap();
                    assert_simple(&g);
                    // Brute force: count unordered pairs at L1 distance 1.
                    let coords: Vec<_> = (0..c)
                        .flat_map(|t| (0..b).flat_map(move |r| (0..a).map(move |x| (t, r, x))))
                        .collect();
                    let mut brute = 0;
                    for (i, p) in coords.iter().enumerate() {
                        for q in &coords[i + 1..] {
                            let d = p.0.abs_diff(q.0) + p.1.abs_diff(q.1) + p.2.abs_diff(q.2);
                            if d == 1 {
                                brute += 1;
                            }
                        }
                    }
                    assert_eq!(g.edge_count(), brute);
                    assert_eq!(g.edge_count(), a * b * c * 3 - a * b - b * c - a * c);
                }
            }
        }
    }

    #[test]
    fn grid_index_round_trip() {
        let (nx, ny, nt) = (3, 4, 2);
        let mut seen = vec![false; nx * ny * nt];
        for t in 0..nt {
            for r in 0..ny {
                for c in 0..nx {
                    let v = grid_index(nx, ny, t, r, c);
                    assert!(!seen[v]);
                    seen[v] = true;
                }
            }
        }
        let g = build_grid3d(nx, ny, nt).unwrap();
        assert!(g.has_edge(grid_index(nx, ny, 0, 1, 1), grid_index(nx, ny, 1, 1, 1)));
        assert!(g.has_edge(grid_index(nx, ny, 1, 2, 0), grid_index(nx, ny, 1, 3, 0)));
    }

    #[test]
    fn watts_strogatz_no_rewiring_is_cycle() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = build_watts_strogatz(12, 0.0, &mut rng).unwrap();
        assert_eq!((c.graph.n(), c.graph.edge_count()), (12, 12));
        assert!(c.graph.degrees().iter().all(|&d| d == 2));
        assert!(c.graph.is_connected());
    }

    #[test]
    fn watts_strogatz_thousand_ring() {
        // The component size varies a lot between realizations, so the range
        // is checked on the median of several.
        let mut sizes = Vec::new();
        for seed in 0..11 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = build_watts_strogatz(1000, 0.25, &mut rng).unwrap();
            assert_simple(&c.graph);
            assert!(c.graph.is_connected());
            sizes.push(c.graph.n());
        }
        sizes.sort_unstable();
        assert!((700..=1000).contains(&sizes[5]), "sizes = {sizes:?}");
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let c = build_watts_strogatz(10, 1.0, &mut rng).unwrap();
        assert_simple(&c.graph);
        assert!(c.graph.is_connected() && c.graph.n() <= 10);
        assert!(build_watts_strogatz(2, 0.5, &mut rng).is_err());
    }

    #[test]
    fn knn_collinear_points_give_path() {
        let x = Matrix::from_rows(&[vec![0.0], vec![1.0], vec![2.0]]).unwrap();
        let g = build_knn_graph(&x, 1).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn knn_full_neighbourhood_is_complete() {
        let x = Matrix::from_rows(&[
            vec![0.0, 1.0],
            vec![3.0, -1.0],
            vec![0.5, 0.5],
            vec![7.0, 2.0],
        ])
        .unwrap();
        let g = build_knn_graph(&x, 3).unwrap();
        assert_eq!(g.edge_count(), 6);
        assert!(build_knn_graph(&x, 4).is_err());
        let bad = Matrix::from_rows(&[vec![0.0], vec![f64::NAN], vec![1.0]]).unwrap();
        assert!(build_knn_graph(&bad, 1).is_err());
    }

    #[test]
    fn knn_ties_prefer_lower_index() {
        // Vertex 1 is equidistant from 0 and 2.
        let x = Matrix::from_rows(&[vec![-1.0], vec![0.0], vec![1.0], vec![10.0]]).unwrap();
        let g = build_knn_graph(&x, 1).unwrap();
        assert!(g.has_edge(1, 0));
        assert!(g.has_edge(2, 1));
        assert!(g.has_edge(3, 2));
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn laplacian_path3() {
        let l = laplacian(&build_path(3).unwrap());
        let dense = l.to_dense();
        assert_eq!(
            dense,
            vec![
                vec![1.0, -1.0, 0.0],
                vec![-1.0, 2.0, -1.0],
                vec![0.0, -1.0, 1.0]
            ]
        );
        assert!(l.row_sums().iter().all(|&s| s == 0.0));
        let single = laplacian(&build_grid3d(1, 1, 1).unwrap());
        assert_eq!(single.to_dense(), vec![vec![0.0]]);
    }

    #[test]
    fn lcc_picks_largest_then_smallest_vertex() {
        let g = Graph::from_edges(8, vec![(0, 1), (1, 2), (3, 4), (4, 5), (5, 6), (6, 7)]).unwrap();
        let c = largest_connected_component(&g);
        assert_eq!(c.new_to_old, vec![3, 4, 5, 6, 7]);
        assert_eq!(c.graph.edge_count(), 4);
        assert_eq!(c.old_to_new[0], None);
        assert_eq!(c.old_to_new[5], Some(2));

        let tie = Graph::from_edges(6, vec![(3, 4), (4, 5), (0, 1), (1, 2)]).unwrap();
        assert_eq!(largest_connected_component(&tie).new_to_old, vec![0, 1, 2]);

        let path = build_path(5).unwrap();
        let same = largest_connected_component(&path);
        assert_eq!(same.graph, path);
        assert_eq!(same.new_to_old, (0..5).collect::<Vec<_>>());
    }

    #[test]
    fn from_edges_rejects_non_simple() {
        assert!(Graph::from_edges(3, vec![(0, 0)]).is_err());
        assert!(Graph::from_edges(3, vec![(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(3, vec![(0, 3)]).is_err());
        let g = Graph::from_edges_simplified(3, vec![(0, 0), (0, 1), (1, 0), (1, 2)]).unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn edge_list_round_trip() {
        let g = build_grid3d(3, 2, 2).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        let back = read_edge_list(&buf[..]).unwrap();
        assert_eq!(back, g);

        let text = "1 2\n# comment\n\n2 3\n";
        let g = read_edge_list(text.as_bytes()).unwrap();
        assert_eq!((g.n(), g.edge_count()), (3, 2));
        assert!(read_edge_list("0 1\n".as_bytes()).is_err());
        assert!(read_edge_list("1 x\n".as_bytes()).is_err());
        assert!(read_edge_list("1 1\n".as_bytes()).is_err());
    }
}
