//! Metric graphs and their arborescence combinatorics.
//!
//! A metric graph glues a finite set of intervals (the metric edges) to a
//! finite vertex set. Each edge carries an intrinsic coordinate running from
//! its tail (coordinate `0`) to its head (coordinate `length`); loops and
//! parallel edges are allowed, and a loop contributes two distinct germs at
//! its vertex. Cutting one interior point per complement edge of a spanning
//! tree turns the graph into a metric tree, which oriented toward a root
//! point becomes a metric arborescence.

use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("edge `{edge}` has nonpositive or non-finite length {length}")]
    BadLength { edge: String, length: f64 },
    #[error("edge `{edge}` references vertex index {index} out of range")]
    DanglingEndpoint { edge: String, index: usize },
    #[error("duplicate vertex name `{0}`")]
    DuplicateVertexName(String),
    #[error("duplicate edge name `{0}`")]
    DuplicateEdgeName(String),
    #[error("graph has no vertices")]
    NoVertices,
    #[error("graph is not connected")]
    Disconnected,
    #[error("cut on edge `{edge}` at {coordinate} is not strictly inside (0, {length})")]
    CutNotInterior {
        edge: String,
        coordinate: f64,
        length: f64,
    },
    #[error("two cuts on edge `{edge}`")]
    DuplicateCut { edge: String },
    #[error("cut edges do not match the spanning-tree complement")]
    CutEdgesMismatch,
    #[error("root coordinate {coordinate} on edge `{edge}` does not lie strictly inside the edge")]
    RootAtVertex { edge: String, coordinate: f64 },
    #[error("root coincides with the cut point at {coordinate} on edge `{edge}`")]
    RootAtCutPoint { edge: String, coordinate: f64 },
    #[error("edge set does not span the graph")]
    NotSpanning,
    #[error("edge index {0} out of range")]
    UnknownEdge(usize),
}

/// Index of a vertex in a [`MetricGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

/// Index of a metric edge in a [`MetricGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

/// Which endpoint of an edge a germ sits at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum End {
    /// Coordinate `0`.
    Tail,
    /// Coordinate `length`.
    Head,
}

impl End {
    pub fn opposite(self) -> End {
        match self {
            End::Tail => End::Head,
            End::Head => End::Tail,
        }
    }
}

/// An edge germ: one endpoint side of one edge. The vertex it is attached to
/// is recovered through the graph, so loops get two distinguishable germs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Germ {
    pub edge: EdgeId,
    pub end: End,
}

/// Local orientation of a germ in an arborescence: exiting or entering the
/// vertex it is attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, Clone)]
pub struct MetricEdge {
    pub name: String,
    pub tail: VertexId,
    pub head: VertexId,
    pub length: f64,
}

/// A point in the interior of an edge, addressed by edge and coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointOnEdge {
    pub edge: EdgeId,
    pub coordinate: f64,
}

#[derive(Debug, Clone)]
pub struct MetricGraph {
    vertex_names: Vec<String>,
    edges: Vec<MetricEdge>,
    germs: Vec<Vec<Germ>>,
}

impl MetricGraph {
    /// Builds and validates a metric graph.
    pub fn new(vertex_names: Vec<String>, edges: Vec<MetricEdge>) -> Result<Self, GraphError> {
        if vertex_names.is_empty() {
            return Err(GraphError::NoVertices);
        }
        for (i, name) in vertex_names.iter().enumerate() {
            if vertex_names[..i].contains(name) {
                return Err(GraphError::DuplicateVertexName(name.clone()));
            }
        }
        for (i, e) in edges.iter().enumerate() {
            if !(e.length.is_finite() && e.length > 0.0) {
                return Err(GraphError::BadLength {
                    edge: e.name.clone(),
                    length: e.length,
                });
            }
            for v in [e.tail, e.head] {
                if v.0 >= vertex_names.len() {
                    return Err(GraphError::DanglingEndpoint {
                        edge: e.name.clone(),
                        index: v.0,
                    });
                }
            }
            if edges[..i].iter().any(|other| other.name == e.name) {
                return Err(GraphError::DuplicateEdgeName(e.name.clone()));
            }
        }

        let mut germs = vec![Vec::new(); vertex_names.len()];
        for (i, e) in edges.iter().enumerate() {
            germs[e.tail.0].push(Germ {
                edge: EdgeId(i),
                end: End::Tail,
            });
            germs[e.head.0].push(Germ {
                edge: EdgeId(i),
                end: End::Head,
            });
        }
        for list in &mut germs {
            list.sort();
        }

        let g = Self {
            vertex_names,
            edges,
            germs,
        };
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_count()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edge_count()).map(EdgeId)
    }

    pub fn edge(&self, e: EdgeId) -> &MetricEdge {
        &self.edges[e.0]
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.0]
    }

    pub fn is_loop(&self, e: EdgeId) -> bool {
        self.edges[e.0].tail == self.edges[e.0].head
    }

    /// All germs attached to `v`; a loop at `v` contributes both of its ends.
    pub fn germs_at(&self, v: VertexId) -> &[Germ] {
        &self.germs[v.0]
    }

    /// Vertex a germ is attached to.
    pub fn germ_vertex(&self, germ: Germ) -> VertexId {
        match germ.end {
            End::Tail => self.edges[germ.edge.0].tail,
            End::Head => self.edges[germ.edge.0].head,
        }
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertex_count()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for germ in &self.germs[v] {
                let w = self.germ_vertex(Germ {
                    edge: germ.edge,
                    end: germ.end.opposite(),
                });
                if !seen[w.0] {
                    seen[w.0] = true;
                    count += 1;
                    queue.push_back(w.0);
                }
            }
        }
        count == self.vertex_count()
    }

    /// Number of cuts needed to open the graph into a metric tree:
    /// `|E| - |V| + 1`.
    pub fn cut_space_dimension(&self) -> usize {
        self.edge_count() + 1 - self.vertex_count()
    }

    /// Every spanning tree of the underlying multigraph, in a canonical
    /// order. Parallel edges give distinct trees; loops never appear.
    pub fn spanning_trees(&self) -> Vec<SpanningTree> {
        let edge_list: Vec<(usize, usize, usize)> = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| (e.tail.0, e.head.0, i))
            .collect();
        let mut trees = multigraph_spanning_trees(self.vertex_count(), &edge_list);
        for t in &mut trees {
            t.sort_unstable();
        }
        trees.sort();
        trees
            .into_iter()
            .map(|t| {
                let complement = (0..self.edge_count()).filter(|i| !t.contains(i)).collect();
                SpanningTree {
                    tree: t.into_iter().map(EdgeId).collect(),
                    complement: complement_ids(complement),
                }
            })
            .collect()
    }

    /// Validates a set of cut points: strictly interior, at most one per edge.
    pub fn cut_set(&self, cuts: Vec<(EdgeId, f64)>) -> Result<CutSet, GraphError> {
        let mut sorted = cuts;
        sorted.sort_by_key(|&(e, _)| e);
        for (i, &(e, y)) in sorted.iter().enumerate() {
            if e.0 >= self.edge_count() {
                return Err(GraphError::UnknownEdge(e.0));
            }
            let edge = self.edge(e);
            if !(y > 0.0 && y < edge.length) {
                return Err(GraphError::CutNotInterior {
                    edge: edge.name.clone(),
                    coordinate: y,
                    length: edge.length,
                });
            }
            if i > 0 && sorted[i - 1].0 == e {
                return Err(GraphError::DuplicateCut {
                    edge: edge.name.clone(),
                });
            }
        }
        Ok(CutSet { cuts: sorted })
    }

    /// Cuts the graph at the given points: each cut edge is replaced by two
    /// half-edges ending in fresh leaf vertices.
    pub fn cut(&self, cuts: &CutSet) -> Result<MetricGraph, GraphError> {
        let mut names = self.vertex_names.clone();
        let mut edges: Vec<MetricEdge> = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            match cuts.position_on(EdgeId(i)) {
                None => edges.push(e.clone()),
                Some(y) => {
                    let v1 = VertexId(names.len());
                    names.push(format!("{}:cut-", e.name));
                    let v2 = VertexId(names.len());
                    names.push(format!("{}:cut+", e.name));
                    edges.push(MetricEdge {
                        name: format!("{}:0", e.name),
                        tail: e.tail,
                        head: v1,
                        length: y,
                    });
                    edges.push(MetricEdge {
                        name: format!("{}:1", e.name),
                        tail: v2,
                        head: e.head,
                        length: e.length - y,
                    });
                }
            }
        }
        MetricGraph::new(names, edges)
    }

    /// True when the underlying multigraph is a tree.
    pub fn is_metric_tree(&self) -> bool {
        self.edge_count() + 1 == self.vertex_count() && self.is_connected()
    }

    /// For every vertex, the exit germ of the unique path through `forest`
    /// toward the nearest of the `sinks` (sinks get `None`). Fails when some
    /// vertex cannot reach a sink through the forest.
    pub(crate) fn orient_toward(
        &self,
        forest: &[EdgeId],
        sinks: &[VertexId],
    ) -> Result<Vec<Option<Germ>>, GraphError> {
        let mut in_forest = vec![false; self.edge_count()];
        for e in forest {
            in_forest[e.0] = true;
        }
        let mut exit: Vec<Option<Germ>> = vec![None; self.vertex_count()];
        let mut reached = vec![false; self.vertex_count()];
        let mut queue = VecDeque::new();
        for s in sinks {
            reached[s.0] = true;
            queue.push_back(*s);
        }
        while let Some(v) = queue.pop_front() {
            for germ in self.germs_at(v) {
                if !in_forest[germ.edge.0] {
                    continue;
                }
                let far = Germ {
                    edge: germ.edge,
                    end: germ.end.opposite(),
                };
                let w = self.germ_vertex(far);
                if !reached[w.0] {
                    reached[w.0] = true;
                    exit[w.0] = Some(far);
                    queue.push_back(w);
                }
            }
        }
        if reached.iter().all(|&r| r) {
            Ok(exit)
        } else {
            Err(GraphError::NotSpanning)
        }
    }

    /// Builds the metric arborescence for spanning tree `tree`, cut points
    /// `cuts` (one per complement edge), and root point `root`.
    pub fn arborescence(
        &self,
        tree: &SpanningTree,
        cuts: &CutSet,
        root: PointOnEdge,
    ) -> Result<Arborescence, GraphError> {
        let root_edge = self.edge(root.edge);
        if !(root.coordinate > 0.0 && root.coordinate < root_edge.length) {
            return Err(GraphError::RootAtVertex {
                edge: root_edge.name.clone(),
                coordinate: root.coordinate,
            });
        }
        let cut_edges: Vec<EdgeId> = cuts.cuts.iter().map(|c| c.0).collect();
        if cut_edges != tree.complement {
            return Err(GraphError::CutEdgesMismatch);
        }

        let mut segments = Vec::new();
        let mut exit = vec![None; self.vertex_count()];

        let root_cut = cuts.position_on(root.edge);
        if let Some(y) = root_cut {
            if y == root.coordinate {
                return Err(GraphError::RootAtCutPoint {
                    edge: root_edge.name.clone(),
                    coordinate: y,
                });
            }
            // Root edge is a cut edge: the side of the cut containing the
            // root determines through which endpoint the flow enters.
            let anchor = if y < root.coordinate {
                root_edge.head
            } else {
                root_edge.tail
            };
            exit = self.orient_toward(&tree.tree, &[anchor])?;
            if y < root.coordinate {
                exit[anchor.0] = Some(Germ {
                    edge: root.edge,
                    end: End::Head,
                });
                segments.push(OrientedSegment {
                    edge: root.edge,
                    from: y,
                    to: 0.0,
                });
                segments.push(OrientedSegment {
                    edge: root.edge,
                    from: y,
                    to: root.coordinate,
                });
                segments.push(OrientedSegment {
                    edge: root.edge,
                    from: root_edge.length,
                    to: root.coordinate,
                });
            } else {
                exit[anchor.0] = Some(Germ {
                    edge: root.edge,
                    end: End::Tail,
                });
                segments.push(OrientedSegment {
                    edge: root.edge,
                    from: y,
                    to: root_edge.length,
                });
                segments.push(OrientedSegment {
                    edge: root.edge,
                    from: 0.0,
                    to: root.coordinate,
                });
                segments.push(OrientedSegment {
                    edge: root.edge,
                    from: y,
                    to: root.coordinate,
                });
            }
        } else {
            // Root edge belongs to the tree: both components drain into it.
            let rest: Vec<EdgeId> = tree
                .tree
                .iter()
                .copied()
                .filter(|e| *e != root.edge)
                .collect();
            exit = self.orient_toward(&rest, &[root_edge.tail, root_edge.head])?;
            exit[root_edge.tail.0] = Some(Germ {
                edge: root.edge,
                end: End::Tail,
            });
            exit[root_edge.head.0] = Some(Germ {
                edge: root.edge,
                end: End::Head,
            });
            segments.push(OrientedSegment {
                edge: root.edge,
                from: 0.0,
                to: root.coordinate,
            });
            segments.push(OrientedSegment {
                edge: root.edge,
                from: root_edge.length,
                to: root.coordinate,
            });
        }

        // Tree edges other than the root edge follow their exit germs.
        for &e in &tree.tree {
            if e == root.edge {
                continue;
            }
            let edge = self.edge(e);
            let oriented_from_tail = exit[edge.tail.0]
                == Some(Germ {
                    edge: e,
                    end: End::Tail,
                });
            if oriented_from_tail {
                segments.push(OrientedSegment {
                    edge: e,
                    from: 0.0,
                    to: edge.length,
                });
            } else {
                debug_assert_eq!(
                    exit[edge.head.0],
                    Some(Germ {
                        edge: e,
                        end: End::Head
                    })
                );
                segments.push(OrientedSegment {
                    edge: e,
                    from: edge.length,
                    to: 0.0,
                });
            }
        }
        // Cut edges (other than the root edge) point away from their cut.
        for &(e, y) in &cuts.cuts {
            if e == root.edge {
                continue;
            }
            let edge = self.edge(e);
            segments.push(OrientedSegment {
                edge: e,
                from: y,
                to: 0.0,
            });
            segments.push(OrientedSegment {
                edge: e,
                from: y,
                to: edge.length,
            });
        }

        let exit_germ = exit
            .into_iter()
            .map(|g| g.expect("every vertex has an exit germ"))
            .collect::<Vec<_>>();
        Ok(Arborescence {
            root,
            tree: tree.clone(),
            cuts: cuts.clone(),
            exit_germ,
            segments,
        })
    }

    /// All unicyclic oriented spanning subgraphs whose cycle passes through
    /// `e`, in (θ = +, θ = −) pairs. Empty when `e` lies on no cycle.
    pub fn unicyclic_subgraphs(&self, e: EdgeId) -> Vec<UnicyclicSubgraph> {
        let mut out = Vec::new();
        for cycle in self.cycles_through(e) {
            let mut on_cycle = vec![false; self.vertex_count()];
            let mut cycle_edge = vec![false; self.edge_count()];
            for &(f, _) in &cycle {
                cycle_edge[f.0] = true;
                on_cycle[self.edges[f.0].tail.0] = true;
                on_cycle[self.edges[f.0].head.0] = true;
            }
            let cycle_vertices: Vec<VertexId> = self.vertices().filter(|v| on_cycle[v.0]).collect();

            // Forests hanging off the cycle = spanning trees of the graph
            // with the cycle contracted to a single vertex.
            let mut label = vec![0usize; self.vertex_count()];
            let mut next = 1;
            for v in 0..self.vertex_count() {
                if !on_cycle[v] {
                    label[v] = next;
                    next += 1;
                }
            }
            let contracted: Vec<(usize, usize, usize)> = self
                .edges
                .iter()
                .enumerate()
                .filter(|(i, _)| !cycle_edge[*i])
                .map(|(i, edge)| (label[edge.tail.0], label[edge.head.0], i))
                .collect();
            let mut forests = multigraph_spanning_trees(next, &contracted);
            for f in &mut forests {
                f.sort_unstable();
            }
            forests.sort();

            for forest in forests {
                let forest_ids: Vec<EdgeId> = forest.iter().copied().map(EdgeId).collect();
                let exit_off = self
                    .orient_toward(&forest_ids, &cycle_vertices)
                    .expect("forest spans the off-cycle vertices");
                let in_subgraph: Vec<bool> = (0..self.edge_count())
                    .map(|i| cycle_edge[i] || forest.contains(&i))
                    .collect();
                let cut_edges: Vec<EdgeId> = (0..self.edge_count())
                    .filter(|i| !in_subgraph[*i])
                    .map(EdgeId)
                    .collect();
                for theta in [Sign::Plus, Sign::Minus] {
                    let mut exit_germ = exit_off.clone();
                    for (pos, &(f, forward)) in cycle.iter().enumerate() {
                        let edge = &self.edges[f.0];
                        // θ = + walks the cycle as listed, θ = − in reverse.
                        let (vertex, end) = match (theta, forward) {
                            (Sign::Plus, true) => (edge.tail, End::Tail),
                            (Sign::Plus, false) => (edge.head, End::Head),
                            (Sign::Minus, true) => (edge.head, End::Head),
                            (Sign::Minus, false) => (edge.tail, End::Tail),
                        };
                        let _ = pos;
                        exit_germ[vertex.0] = Some(Germ { edge: f, end });
                    }
                    out.push(UnicyclicSubgraph {
                        through: e,
                        cycle: cycle.clone(),
                        forest: forest_ids.clone(),
                        cut_edges: cut_edges.clone(),
                        theta,
                        exit_germ: exit_germ
                            .iter()
                            .map(|g| g.expect("every vertex drains into the cycle"))
                            .collect(),
                    });
                }
            }
        }
        out
    }

    /// Simple cycles through `e`, each as an ordered traversal starting with
    /// `e` in its canonical direction.
    fn cycles_through(&self, e: EdgeId) -> Vec<Vec<(EdgeId, bool)>> {
        let edge = &self.edges[e.0];
        if self.is_loop(e) {
            return vec![vec![(e, true)]];
        }
        let mut cycles = Vec::new();
        let mut visited = vec![false; self.vertex_count()];
        visited[edge.head.0] = true;
        let mut path: Vec<(EdgeId, bool)> = Vec::new();
        self.path_dfs(
            edge.head,
            edge.tail,
            e,
            &mut visited,
            &mut path,
            &mut cycles,
        );
        let mut out: Vec<Vec<(EdgeId, bool)>> = cycles
            .into_iter()
            .map(|p| {
                let mut c = vec![(e, true)];
                c.extend(p);
                c
            })
            .collect();
        out.sort();
        out
    }

    fn path_dfs(
        &self,
        at: VertexId,
        target: VertexId,
        banned: EdgeId,
        visited: &mut Vec<bool>,
        path: &mut Vec<(EdgeId, bool)>,
        cycles: &mut Vec<Vec<(EdgeId, bool)>>,
    ) {
        for germ in self.germs_at(at) {
            if germ.edge == banned || self.is_loop(germ.edge) {
                continue;
            }
            let next = self.germ_vertex(Germ {
                edge: germ.edge,
                end: germ.end.opposite(),
            });
            let forward = germ.end == End::Tail;
            if next == target {
                let mut full = path.clone();
                full.push((germ.edge, forward));
                cycles.push(full);
                continue;
            }
            if !visited[next.0] {
                visited[next.0] = true;
                path.push((germ.edge, forward));
                self.path_dfs(next, target, banned, visited, path, cycles);
                path.pop();
                visited[next.0] = false;
            }
        }
    }
}

fn complement_ids(ids: Vec<usize>) -> Vec<EdgeId> {
    ids.into_iter().map(EdgeId).collect()
}

/// Spanning trees of a multigraph by contraction/deletion. Edges carry an
/// opaque payload (the original index) returned in the tree lists.
fn multigraph_spanning_trees(
    n_vertices: usize,
    edges: &[(usize, usize, usize)],
) -> Vec<Vec<usize>> {
    if n_vertices == 0 {
        return Vec::new();
    }
    if n_vertices == 1 {
        return vec![Vec::new()];
    }
    if !connected(n_vertices, edges) {
        return Vec::new();
    }
    let Some(pos) = edges.iter().position(|(u, v, _)| u != v) else {
        return Vec::new();
    };
    let (u, v, orig) = edges[pos];

    // contract: relabel v as u, shifting labels above v down by one
    let relabel = |w: usize| {
        let w = if w == v { u } else { w };
        if w > v {
            w - 1
        } else {
            w
        }
    };
    let contracted: Vec<(usize, usize, usize)> = edges
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != pos)
        .map(|(_, &(a, b, id))| (relabel(a), relabel(b), id))
        .collect();
    let mut trees: Vec<Vec<usize>> = multigraph_spanning_trees(n_vertices - 1, &contracted)
        .into_iter()
        .map(|mut t| {
            t.push(orig);
            t
        })
        .collect();

    // delete
    let deleted: Vec<(usize, usize, usize)> = edges
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != pos)
        .map(|(_, &e)| e)
        .collect();
    trees.extend(multigraph_spanning_trees(n_vertices, &deleted));
    trees
}

fn connected(n_vertices: usize, edges: &[(usize, usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..n_vertices).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = n_vertices;
    for &(u, v, _) in edges {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru] = rv;
            components -= 1;
        }
    }
    components == 1
}

/// A spanning tree together with its complement, the edges to cut.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTree {
    pub tree: Vec<EdgeId>,
    pub complement: Vec<EdgeId>,
}

/// One interior cut point per edge of a tree complement.
#[derive(Debug, Clone, PartialEq)]
pub struct CutSet {
    cuts: Vec<(EdgeId, f64)>,
}

impl CutSet {
    pub fn entries(&self) -> &[(EdgeId, f64)] {
        &self.cuts
    }

    pub fn position_on(&self, e: EdgeId) -> Option<f64> {
        self.cuts.iter().find(|(f, _)| *f == e).map(|(_, y)| *y)
    }
}

/// An oriented piece of an edge; the flow runs from `from` to `to` in edge
/// coordinates, so signed integrals along it are `F(to) - F(from)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientedSegment {
    pub edge: EdgeId,
    pub from: f64,
    pub to: f64,
}

/// A metric arborescence: the cut graph oriented toward the root point.
#[derive(Debug, Clone)]
pub struct Arborescence {
    pub root: PointOnEdge,
    pub tree: SpanningTree,
    pub cuts: CutSet,
    /// The unique exiting germ per vertex.
    pub exit_germ: Vec<Germ>,
    /// Oriented pieces covering every edge of the graph.
    pub segments: Vec<OrientedSegment>,
}

impl Arborescence {
    /// Local orientation of `germ` around the vertex it is attached to.
    pub fn germ_sign(&self, vertex: VertexId, germ: Germ) -> Sign {
        if self.exit_germ[vertex.0] == germ {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// A connected spanning subgraph with exactly one cycle (through `through`),
/// the cycle oriented by `theta`, off-cycle edges oriented toward the cycle,
/// and the remaining edges left to be cut at symbolic positions.
#[derive(Debug, Clone)]
pub struct UnicyclicSubgraph {
    pub through: EdgeId,
    /// Cycle traversal in the θ = + direction; `true` means the edge is
    /// walked tail → head.
    pub cycle: Vec<(EdgeId, bool)>,
    pub forest: Vec<EdgeId>,
    pub cut_edges: Vec<EdgeId>,
    pub theta: Sign,
    /// The unique exiting germ per vertex under this cycle orientation.
    pub exit_germ: Vec<Germ>,
}

impl UnicyclicSubgraph {
    /// True when the cycle traverses `e` along its canonical orientation.
    pub fn traverses_canonically(&self, e: EdgeId) -> bool {
        let listed = self
            .cycle
            .iter()
            .find(|(f, _)| *f == e)
            .map(|(_, forward)| *forward)
            .expect("edge lies on the cycle");
        match self.theta {
            Sign::Plus => listed,
            Sign::Minus => !listed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn ring() -> MetricGraph {
        MetricGraph::new(
            vec!["v".into()],
            vec![MetricEdge {
                name: "e".into(),
                tail: VertexId(0),
                head: VertexId(0),
                length: 1.0,
            }],
        )
        .unwrap()
    }

    fn theta_graph() -> MetricGraph {
        let edge = |name: &str| MetricEdge {
            name: name.into(),
            tail: VertexId(0),
            head: VertexId(1),
            length: 1.0,
        };
        MetricGraph::new(
            vec!["u".into(), "v".into()],
            vec![edge("e1"), edge("e2"), edge("e3")],
        )
        .unwrap()
    }

    fn triangle() -> MetricGraph {
        let edge = |name: &str, t: usize, h: usize| MetricEdge {
            name: name.into(),
            tail: VertexId(t),
            head: VertexId(h),
            length: 1.0,
        };
        MetricGraph::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![edge("ab", 0, 1), edge("bc", 1, 2), edge("ca", 2, 0)],
        )
        .unwrap()
    }

    #[test]
    fn ring_incidence_counts_loop_twice() {
        let g = ring();
        assert_eq!(g.germs_at(VertexId(0)).len(), 2);
        assert_eq!(g.cut_space_dimension(), 1);
    }

    #[test]
    fn theta_graph_cut_space() {
        let g = theta_graph();
        assert_eq!(g.cut_space_dimension(), 2);
    }

    #[test]
    fn disconnected_graph_is_rejected() {
        let err = MetricGraph::new(
            vec!["a".into(), "b".into(), "lonely".into()],
            vec![MetricEdge {
                name: "e".into(),
                tail: VertexId(0),
                head: VertexId(1),
                length: 1.0,
            }],
        )
        .unwrap_err();
        assert_eq!(err, GraphError::Disconnected);
    }

    #[test]
    fn nonpositive_length_is_rejected() {
        let err = MetricGraph::new(
            vec!["a".into()],
            vec![MetricEdge {
                name: "e".into(),
                tail: VertexId(0),
                head: VertexId(0),
                length: 0.0,
            }],
        )
        .unwrap_err();
        assert!(matches!(err, GraphError::BadLength { .. }));
    }

    #[test]
    fn ring_has_one_empty_tree() {
        let trees = ring().spanning_trees();
        assert_eq!(trees.len(), 1);
        assert!(trees[0].tree.is_empty());
        assert_eq!(trees[0].complement, vec![EdgeId(0)]);
    }

    #[test]
    fn theta_has_three_trees() {
        let trees = theta_graph().spanning_trees();
        assert_eq!(trees.len(), 3);
        for (i, t) in trees.iter().enumerate() {
            assert_eq!(t.tree, vec![EdgeId(i)]);
            assert_eq!(t.complement.len(), 2);
        }
    }

    #[test]
    fn triangle_has_three_trees() {
        assert_eq!(triangle().spanning_trees().len(), 3);
    }

    #[test]
    fn interval_tree_is_trivial() {
        let g = MetricGraph::new(
            vec!["a".into(), "b".into()],
            vec![MetricEdge {
                name: "e".into(),
                tail: VertexId(0),
                head: VertexId(1),
                length: 1.0,
            }],
        )
        .unwrap();
        assert_eq!(g.cut_space_dimension(), 0);
        let trees = g.spanning_trees();
        assert_eq!(trees.len(), 1);
        assert!(trees[0].complement.is_empty());
    }

    #[test]
    fn cutting_the_ring_gives_a_segment() {
        let g = ring();
        let cuts = g.cut_set(vec![(EdgeId(0), 0.4)]).unwrap();
        let cut = g.cut(&cuts).unwrap();
        assert!(cut.is_metric_tree());
        assert_eq!(cut.vertex_count(), 3);
        assert_eq!(cut.edge_count(), 2);
        let total: f64 = cut.edge_ids().map(|e| cut.edge(e).length).sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cutting_theta_on_two_edges_gives_a_tree() {
        let g = theta_graph();
        let cuts = g
            .cut_set(vec![(EdgeId(1), 0.5), (EdgeId(2), 0.25)])
            .unwrap();
        let cut = g.cut(&cuts).unwrap();
        assert!(cut.is_metric_tree());
        assert_eq!(cut.edge_count(), 5);
    }

    #[test]
    fn dangling_endpoint_is_rejected() {
        let err = MetricGraph::new(
            vec!["a".into()],
            vec![MetricEdge {
                name: "e".into(),
                tail: VertexId(0),
                head: VertexId(3),
                length: 1.0,
            }],
        )
        .unwrap_err();
        assert!(matches!(err, GraphError::DanglingEndpoint { index: 3, .. }));
    }

    #[test]
    fn two_cuts_on_one_edge_are_rejected() {
        let g = ring();
        assert!(matches!(
            g.cut_set(vec![(EdgeId(0), 0.3), (EdgeId(0), 0.6)]),
            Err(GraphError::DuplicateCut { .. })
        ));
    }

    #[test]
    fn boundary_cut_is_rejected() {
        let g = ring();
        assert!(matches!(
            g.cut_set(vec![(EdgeId(0), 0.0)]),
            Err(GraphError::CutNotInterior { .. })
        ));
        assert!(matches!(
            g.cut_set(vec![(EdgeId(0), 1.0)]),
            Err(GraphError::CutNotInterior { .. })
        ));
    }

    #[test]
    fn ring_arborescence_orients_both_sides_toward_root() {
        let g = ring();
        let tree = &g.spanning_trees()[0];
        let cuts = g.cut_set(vec![(EdgeId(0), 0.3)]).unwrap();
        let arb = g
            .arborescence(
                tree,
                &cuts,
                PointOnEdge {
                    edge: EdgeId(0),
                    coordinate: 0.7,
                },
            )
            .unwrap();
        // cut below the root: flow enters through the head germ
        assert_eq!(
            arb.exit_germ[0],
            Germ {
                edge: EdgeId(0),
                end: End::Head
            }
        );
        assert_eq!(arb.segments.len(), 3);
    }

    #[test]
    fn interval_arborescence_has_no_cuts() {
        let g = MetricGraph::new(
            vec!["a".into(), "b".into()],
            vec![MetricEdge {
                name: "e".into(),
                tail: VertexId(0),
                head: VertexId(1),
                length: 1.0,
            }],
        )
        .unwrap();
        let tree = &g.spanning_trees()[0];
        let cuts = g.cut_set(vec![]).unwrap();
        let arb = g
            .arborescence(
                tree,
                &cuts,
                PointOnEdge {
                    edge: EdgeId(0),
                    coordinate: 0.5,
                },
            )
            .unwrap();
        assert_eq!(
            arb.exit_germ[0],
            Germ {
                edge: EdgeId(0),
                end: End::Tail
            }
        );
        assert_eq!(
            arb.exit_germ[1],
            Germ {
                edge: EdgeId(0),
                end: End::Head
            }
        );
        assert_eq!(arb.segments.len(), 2);
    }

    #[test]
    fn theta_arborescence_cut_halves_enter_their_vertices() {
        let g = theta_graph();
        let tree = SpanningTree {
            tree: vec![EdgeId(0)],
            complement: vec![EdgeId(1), EdgeId(2)],
        };
        let cuts = g.cut_set(vec![(EdgeId(1), 0.4), (EdgeId(2), 0.6)]).unwrap();
        let arb = g
            .arborescence(
                &tree,
                &cuts,
                PointOnEdge {
                    edge: EdgeId(0),
                    coordinate: 0.5,
                },
            )
            .unwrap();
        // the root edge's germs exit both vertices; every cut-edge germ
        // enters its endpoint vertex
        for v in [VertexId(0), VertexId(1)] {
            assert_eq!(arb.exit_germ[v.0].edge, EdgeId(0));
            for germ in g.germs_at(v) {
                let expected = if germ.edge == EdgeId(0) {
                    Sign::Plus
                } else {
                    Sign::Minus
                };
                assert_eq!(arb.germ_sign(v, *germ), expected, "{germ:?}");
            }
        }
    }

    #[test]
    fn root_at_cut_point_is_rejected() {
        let g = ring();
        let tree = &g.spanning_trees()[0];
        let cuts = g.cut_set(vec![(EdgeId(0), 0.5)]).unwrap();
        let err = g
            .arborescence(
                tree,
                &cuts,
                PointOnEdge {
                    edge: EdgeId(0),
                    coordinate: 0.5,
                },
            )
            .unwrap_err();
        assert!(matches!(err, GraphError::RootAtCutPoint { .. }));
    }

    #[test]
    fn ring_unicyclic_is_the_ring_itself() {
        let g = ring();
        let subs = g.unicyclic_subgraphs(EdgeId(0));
        assert_eq!(subs.len(), 2);
        assert!(subs[0].cut_edges.is_empty());
        assert_eq!(subs[0].theta, Sign::Plus);
        assert_eq!(subs[1].theta, Sign::Minus);
        assert!(subs[0].traverses_canonically(EdgeId(0)));
        assert!(!subs[1].traverses_canonically(EdgeId(0)));
    }

    #[test]
    fn theta_unicyclic_through_first_edge() {
        let g = theta_graph();
        let subs = g.unicyclic_subgraphs(EdgeId(0));
        // two cycles (with e2, with e3), two orientations each
        assert_eq!(subs.len(), 4);
        for s in &subs {
            assert_eq!(s.cut_edges.len(), 1);
            assert!(s.forest.is_empty());
        }
    }

    #[test]
    fn bridge_has_no_unicyclic_subgraphs() {
        let g = MetricGraph::new(
            vec!["a".into(), "b".into()],
            vec![MetricEdge {
                name: "e".into(),
                tail: VertexId(0),
                head: VertexId(1),
                length: 1.0,
            }],
        )
        .unwrap();
        assert!(g.unicyclic_subgraphs(EdgeId(0)).is_empty());
    }
}
