//! Oriented simplicial 2-complexes: parsing, incidence queries, manifold
//! validation, and the graph views (Hasse graph, semigraph, component
//! hypergraph) that the vector-field algorithms traverse.
//!
//! Cells carry dense integer ids. Vertices occupy `0..nv`, edges
//! `nv..nv+ne`, triangles `nv+ne..nv+ne+nt`, with edges and triangles
//! sorted lexicographically by vertex tuple so that parsing the same bytes
//! always yields the same ids.

use std::collections::BTreeMap;
use std::fmt;

/// Dense handle for a cell of any dimension.
///
/// The id space is global: whether a given id is a vertex, edge or triangle
/// is determined by the complex that issued it.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CellId(pub usize);

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

/// Mesh input formats accepted by the parsers.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MeshFormat {
    /// ASCII OFF, triangles only.
    Off,
    /// One triangle per line, three 0-based vertex indices.
    Tri,
}

impl std::str::FromStr for MeshFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "off" => Ok(MeshFormat::Off),
            "tri" => Ok(MeshFormat::Tri),
            other => Err(format!("unknown mesh format `{other}` (expected off|tri)")),
        }
    }
}

/// Errors from parsing or validating a mesh.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MeshError {
    /// Syntactically broken input.
    Malformed { line: usize, reason: String },
    /// The same triangle (up to vertex order) appeared twice.
    DuplicateTriangle { vertices: [usize; 3] },
    /// A face referenced a vertex index outside the declared range.
    DanglingVertexIndex { index: usize, vertex_count: usize },
    /// An edge with three or more incident triangles.
    NonManifoldEdge {
        vertices: [usize; 2],
        cofaces: usize,
    },
}

impl fmt::Display for MeshError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeshError::Malformed { line, reason } => {
                write!(f, "malformed input at line {line}: {reason}")
            }
            MeshError::DuplicateTriangle { vertices } => {
                write!(f, "duplicate triangle {vertices:?}")
            }
            MeshError::DanglingVertexIndex {
                index,
                vertex_count,
            } => {
                write!(
                    f,
                    "vertex index {index} out of range (vertex count {vertex_count})"
                )
            }
            MeshError::NonManifoldEdge { vertices, cofaces } => {
                write!(
                    f,
                    "non-manifold edge {vertices:?} with {cofaces} incident triangles"
                )
            }
        }
    }
}

impl std::error::Error for MeshError {}

/// Whether a validated 2-manifold has boundary.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ManifoldKind {
    Closed,
    WithBoundary,
}

/// Result of [`OrientedComplex2::validate_manifold`].
///
/// `pinch_vertices` lists vertices whose link splits into several fans
/// (2-cells meeting only at that vertex). Each fan is still a path or
/// cycle, so the complex decomposes into manifold pieces glued at points;
/// all downstream algorithms handle this through the component hypergraph.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ManifoldReport {
    pub kind: ManifoldKind,
    pub pinch_vertices: Vec<usize>,
}

/// A finite oriented simplicial 2-complex closed under faces.
///
/// Orientation is fixed by sorted vertex tuples: the incidence sign of the
/// face omitting the i-th vertex is (-1)^i, so `bd [v0,v1] = [v1] - [v0]`.
#[derive(Clone, Debug)]
pub struct OrientedComplex2 {
    vertex_count: usize,
    edges: Vec<[usize; 2]>,
    triangles: Vec<[usize; 3]>,
    /// Per triangle, the edge index of the face omitting vertex i (sign (-1)^i).
    tri_edges: Vec<[usize; 3]>,
    /// Triangles incident on each edge (1 or 2 on a manifold).
    edge_tris: Vec<Vec<usize>>,
    /// Edges incident on each vertex.
    vertex_edges: Vec<Vec<usize>>,
}

impl OrientedComplex2 {
    /// Builds the face closure of a triangle list.
    ///
    /// Triangles are sorted lexicographically by (sorted) vertex tuple
    /// before ids are assigned, so the result is independent of input
    /// order aside from duplicate detection.
    pub fn from_triangles(
        vertex_count: usize,
        input: &[[usize; 3]],
    ) -> Result<OrientedComplex2, MeshError> {
        let mut triangles = Vec::with_capacity(input.len());
        for tri in input {
            let mut t = *tri;
            t.sort_unstable();
            if t[0] == t[1] || t[1] == t[2] {
                return Err(MeshError::Malformed {
                    line: 0,
                    reason: format!("degenerate triangle {tri:?}"),
                });
            }
            for &v in &t {
                if v >= vertex_count {
                    return Err(MeshError::DanglingVertexIndex {
                        index: v,
                        vertex_count,
                    });
                }
            }
            triangles.push(t);
        }
        triangles.sort_unstable();
        for w in triangles.windows(2) {
            if w[0] == w[1] {
                return Err(MeshError::DuplicateTriangle { vertices: w[0] });
            }
        }

        // Edge ids follow lexicographic order of the vertex pairs.
        let mut edge_index: BTreeMap<[usize; 2], usize> = BTreeMap::new();
        for t in &triangles {
            for pair in [[t[1], t[2]], [t[0], t[2]], [t[0], t[1]]] {
                edge_index.entry(pair).or_insert(0);
            }
        }
        let edges: Vec<[usize; 2]> = edge_index.keys().copied().collect();
        for (i, e) in edges.iter().enumerate() {
            *edge_index.get_mut(e).unwrap() = i;
        }

        let mut tri_edges = Vec::with_capacity(triangles.len());
        let mut edge_tris = vec![Vec::new(); edges.len()];
        for (ti, t) in triangles.iter().enumerate() {
            let faces = [
                edge_index[&[t[1], t[2]]],
                edge_index[&[t[0], t[2]]],
                edge_index[&[t[0], t[1]]],
            ];
            tri_edges.push(faces);
            for &e in &faces {
                edge_tris[e].push(ti);
            }
        }
        let mut vertex_edges = vec![Vec::new(); vertex_count];
        for (ei, e) in edges.iter().enumerate() {
            vertex_edges[e[0]].push(ei);
            vertex_edges[e[1]].push(ei);
        }

        Ok(OrientedComplex2 {
            vertex_count,
            edges,
            triangles,
            tri_edges,
            edge_tris,
            vertex_edges,
        })
    }

    /// Parses a TRI stream: one triangle per line, `#` starts a comment.
    ///
    /// The vertex count is the largest index observed plus one.
    pub fn parse_tri(text: &str) -> Result<OrientedComplex2, MeshError> {
        let mut tris = Vec::new();
        let mut max_vertex = None::<usize>;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(MeshError::Malformed {
                    line: lineno + 1,
                    reason: format!("expected 3 vertex indices, got {}", fields.len()),
                });
            }
            let mut tri = [0usize; 3];
            for (k, f) in fields.iter().enumerate() {
                tri[k] = f.parse().map_err(|_| MeshError::Malformed {
                    line: lineno + 1,
                    reason: format!("bad vertex index `{f}`"),
                })?;
                max_vertex = Some(max_vertex.map_or(tri[k], |m: usize| m.max(tri[k])));
            }
            tris.push(tri);
        }
        let vertex_count = max_vertex.map_or(0, |m| m + 1);
        OrientedComplex2::from_triangles(vertex_count, &tris)
    }

    /// Parses an ASCII OFF stream (triangles only, coordinates ignored).
    pub fn parse_off(text: &str) -> Result<OrientedComplex2, MeshError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(n, raw)| (n + 1, raw.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        let (lineno, header) = lines.next().ok_or(MeshError::Malformed {
            line: 1,
            reason: "empty file".into(),
        })?;
        let mut header_fields: Vec<&str> = header.split_whitespace().collect();
        if header_fields.is_empty() || header_fields[0] != "OFF" {
            return Err(MeshError::Malformed {
                line: lineno,
                reason: "expected OFF header".into(),
            });
        }
        header_fields.remove(0);
        // Counts either follow OFF on the same line or sit on the next one.
        let counts: Vec<&str> = if header_fields.is_empty() {
            let (n, l) = lines.next().ok_or(MeshError::Malformed {
                line: lineno,
                reason: "missing counts line".into(),
            })?;
            let f: Vec<&str> = l.split_whitespace().collect();
            if f.len() < 2 {
                return Err(MeshError::Malformed {
                    line: n,
                    reason: "counts line needs at least vertex and face counts".into(),
                });
            }
            f
        } else {
            header_fields
        };
        let parse_count = |s: &str| {
            s.parse::<usize>().map_err(|_| MeshError::Malformed {
                line: lineno,
                reason: format!("bad count `{s}`"),
            })
        };
        let nv = parse_count(counts[0])?;
        let nf = parse_count(counts[1])?;

        for _ in 0..nv {
            lines.next().ok_or(MeshError::Malformed {
                line: 0,
                reason: "fewer vertex lines than declared".into(),
            })?;
        }
        let mut tris = Vec::with_capacity(nf);
        for _ in 0..nf {
            let (n, l) = lines.next().ok_or(MeshError::Malformed {
                line: 0,
                reason: "fewer face lines than declared".into(),
            })?;
            let f: Vec<&str> = l.split_whitespace().collect();
            if f.len() != 4 || f[0] != "3" {
                return Err(MeshError::Malformed {
                    line: n,
                    reason: "expected face line `3 i j k`".into(),
                });
            }
            let mut tri = [0usize; 3];
            for k in 0..3 {
                tri[k] = f[k + 1].parse().map_err(|_| MeshError::Malformed {
                    line: n,
                    reason: format!("bad vertex index `{}`", f[k + 1]),
                })?;
            }
            tris.push(tri);
        }
        OrientedComplex2::from_triangles(nv, &tris)
    }

    /// Parses `text` in the given format.
    pub fn parse(text: &str, format: MeshFormat) -> Result<OrientedComplex2, MeshError> {
        match format {
            MeshFormat::Off => OrientedComplex2::parse_off(text),
            MeshFormat::Tri => OrientedComplex2::parse_tri(text),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    /// Total number of cells across all dimensions.
    pub fn cell_count(&self) -> usize {
        self.vertex_count + self.edges.len() + self.triangles.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count as i64 - self.edges.len() as i64 + self.triangles.len() as i64
    }

    pub fn vertex_id(&self, v: usize) -> CellId {
        debug_assert!(v < self.vertex_count);
        CellId(v)
    }

    pub fn edge_id(&self, e: usize) -> CellId {
        debug_assert!(e < self.edges.len());
        CellId(self.vertex_count + e)
    }

    pub fn triangle_id(&self, t: usize) -> CellId {
        debug_assert!(t < self.triangles.len());
        CellId(self.vertex_count + self.edges.len() + t)
    }

    pub fn dim(&self, c: CellId) -> usize {
        if c.0 < self.vertex_count {
            0
        } else if c.0 < self.vertex_count + self.edges.len() {
            1
        } else {
            2
        }
    }

    /// The index of `c` within its dimension's cell list.
    pub fn local_index(&self, c: CellId) -> usize {
        match self.dim(c) {
            0 => c.0,
            1 => c.0 - self.vertex_count,
            _ => c.0 - self.vertex_count - self.edges.len(),
        }
    }

    pub fn edge_vertices(&self, e: usize) -> [usize; 2] {
        self.edges[e]
    }

    pub fn triangle_vertices(&self, t: usize) -> [usize; 3] {
        self.triangles[t]
    }

    /// Edge indices of a triangle's faces; entry i omits vertex i.
    pub fn triangle_edges(&self, t: usize) -> [usize; 3] {
        self.tri_edges[t]
    }

    /// Triangles incident on edge `e`.
    pub fn edge_triangles(&self, e: usize) -> &[usize] {
        &self.edge_tris[e]
    }

    /// Edges incident on vertex `v`.
    pub fn vertex_edge_list(&self, v: usize) -> &[usize] {
        &self.vertex_edges[v]
    }

    /// Sorted vertex tuple of any cell.
    pub fn cell_vertices(&self, c: CellId) -> Vec<usize> {
        match self.dim(c) {
            0 => vec![c.0],
            1 => self.edges[self.local_index(c)].to_vec(),
            _ => self.triangles[self.local_index(c)].to_vec(),
        }
    }

    /// Faces of a cell with their incidence signs.
    pub fn faces(&self, c: CellId) -> Vec<(CellId, i64)> {
        match self.dim(c) {
            0 => Vec::new(),
            1 => {
                let [a, b] = self.edges[self.local_index(c)];
                vec![(self.vertex_id(b), 1), (self.vertex_id(a), -1)]
            }
            _ => {
                let t = self.local_index(c);
                self.tri_edges[t]
                    .iter()
                    .enumerate()
                    .map(|(i, &e)| (self.edge_id(e), if i % 2 == 0 { 1 } else { -1 }))
                    .collect()
            }
        }
    }

    /// Cofaces of a cell (cells having `c` as a face).
    pub fn cofaces(&self, c: CellId) -> Vec<CellId> {
        match self.dim(c) {
            0 => self.vertex_edges[c.0]
                .iter()
                .map(|&e| self.edge_id(e))
                .collect(),
            1 => self.edge_tris[self.local_index(c)]
                .iter()
                .map(|&t| self.triangle_id(t))
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Incidence sign `<bd sigma, tau>` for a codimension-1 face `tau` of `sigma`.
    pub fn incidence(&self, sigma: CellId, tau: CellId) -> Result<i64, MeshError> {
        if self.dim(sigma) != self.dim(tau) + 1 {
            return Err(MeshError::Malformed {
                line: 0,
                reason: format!("{tau} is not a codimension-1 face of {sigma}"),
            });
        }
        self.faces(sigma)
            .into_iter()
            .find(|&(f, _)| f == tau)
            .map(|(_, s)| s)
            .ok_or(MeshError::Malformed {
                line: 0,
                reason: format!("{tau} is not a face of {sigma}"),
            })
    }

    /// All d-cells with exactly one coface, in id order.
    pub fn boundary_faces(&self, d: usize) -> Vec<CellId> {
        match d {
            0 => (0..self.vertex_count)
                .filter(|&v| self.vertex_edges[v].len() == 1)
                .map(|v| self.vertex_id(v))
                .collect(),
            1 => (0..self.edges.len())
                .filter(|&e| self.edge_tris[e].len() == 1)
                .map(|e| self.edge_id(e))
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Checks the 2-manifold property (allowing vertex pinches, see
    /// [`ManifoldReport`]) and classifies the complex as closed or with
    /// boundary.
    pub fn validate_manifold(&self) -> Result<ManifoldReport, MeshError> {
        let mut has_boundary = false;
        for (e, tris) in self.edge_tris.iter().enumerate() {
            match tris.len() {
                1 => has_boundary = true,
                2 => {}
                n => {
                    return Err(MeshError::NonManifoldEdge {
                        vertices: self.edges[e],
                        cofaces: n,
                    })
                }
            }
        }
        // Under the edge condition each vertex link is a disjoint union of
        // paths and cycles; count the fans to spot pinch vertices.
        let mut pinch_vertices = Vec::new();
        for v in 0..self.vertex_count {
            if self.link_components(v) > 1 {
                pinch_vertices.push(v);
            }
        }
        let kind = if has_boundary {
            ManifoldKind::WithBoundary
        } else {
            ManifoldKind::Closed
        };
        Ok(ManifoldReport {
            kind,
            pinch_vertices,
        })
    }

    /// Number of connected components of the link of `v`.
    fn link_components(&self, v: usize) -> usize {
        let incident = &self.vertex_edges[v];
        if incident.is_empty() {
            return 0;
        }
        let pos: BTreeMap<usize, usize> =
            incident.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut dsu: Vec<usize> = (0..incident.len()).collect();
        fn find(dsu: &mut Vec<usize>, x: usize) -> usize {
            if dsu[x] != x {
                let r = find(dsu, dsu[x]);
                dsu[x] = r;
            }
            dsu[x]
        }
        for &e in incident {
            for &t in &self.edge_tris[e] {
                // The two edges of t at v become link-adjacent through t.
                let at_v: Vec<usize> = self.tri_edges[t]
                    .iter()
                    .copied()
                    .filter(|&f| self.edges[f].contains(&v))
                    .collect();
                if at_v.len() == 2 {
                    let (a, b) = (pos[&at_v[0]], pos[&at_v[1]]);
                    let (ra, rb) = (find(&mut dsu, a), find(&mut dsu, b));
                    dsu[ra] = rb;
                }
            }
        }
        let mut roots: Vec<usize> = (0..incident.len()).map(|i| find(&mut dsu, i)).collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    }

    /// Connected components over the 1-skeleton; isolated vertices form
    /// their own components. Returns (component of each vertex, count).
    pub fn connected_components(&self) -> (Vec<usize>, usize) {
        let mut comp = vec![usize::MAX; self.vertex_count];
        let mut count = 0;
        for start in 0..self.vertex_count {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp[start] = count;
            while let Some(v) = stack.pop() {
                for &e in &self.vertex_edges[v] {
                    let [a, b] = self.edges[e];
                    let w = if a == v { b } else { a };
                    if comp[w] == usize::MAX {
                        comp[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    /// The Hasse graph view (one node per cell, one edge per face incidence).
    pub fn hasse_graph(&self) -> HasseGraph {
        let mut edges = Vec::with_capacity(3 * self.triangles.len() + 2 * self.edges.len());
        for e in 0..self.edges.len() {
            let id = self.edge_id(e);
            for (v, _) in self.faces(id) {
                edges.push(HasseEdge {
                    upper: id,
                    lower: v,
                    level: 1,
                });
            }
        }
        for t in 0..self.triangles.len() {
            let id = self.triangle_id(t);
            for (e, _) in self.faces(id) {
                edges.push(HasseEdge {
                    upper: id,
                    lower: e,
                    level: 2,
                });
            }
        }
        HasseGraph {
            node_count: self.cell_count(),
            edges,
        }
    }

    /// The semigraph view: triangles as nodes, edges of the complex as
    /// (semi)edges joining one or two of them.
    pub fn semigraph(&self) -> Semigraph {
        let mut comp = vec![usize::MAX; self.triangles.len()];
        let mut count = 0;
        for start in 0..self.triangles.len() {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp[start] = count;
            while let Some(t) = stack.pop() {
                for &e in &self.tri_edges[t] {
                    for &u in &self.edge_tris[e] {
                        if comp[u] == usize::MAX {
                            comp[u] = count;
                            stack.push(u);
                        }
                    }
                }
            }
            count += 1;
        }
        Semigraph {
            component_of_triangle: comp,
            component_count: count,
        }
    }
}

/// One face-incidence edge of the Hasse graph, tagged with its level
/// (2 for triangle-edge, 1 for edge-vertex).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct HasseEdge {
    pub upper: CellId,
    pub lower: CellId,
    pub level: usize,
}

/// Undirected multipartite Hasse graph of a complex.
#[derive(Clone, Debug)]
pub struct HasseGraph {
    pub node_count: usize,
    pub edges: Vec<HasseEdge>,
}

/// Semigraph of a 2-complex: nodes are triangles, connectivity runs only
/// through shared edges.
#[derive(Clone, Debug)]
pub struct Semigraph {
    pub component_of_triangle: Vec<usize>,
    pub component_count: usize,
}

/// Hypergraph whose vertices are semigraph components and whose hyperedges
/// are 0-cells shared across several components.
#[derive(Clone, Debug)]
pub struct ComponentHypergraph {
    pub component_count: usize,
    /// (vertex of the complex, components met at it), for vertices meeting >= 2.
    pub hyperedges: Vec<(usize, Vec<usize>)>,
}

impl ComponentHypergraph {
    pub fn build(complex: &OrientedComplex2, semigraph: &Semigraph) -> ComponentHypergraph {
        let mut at_vertex: Vec<Vec<usize>> = vec![Vec::new(); complex.vertex_count()];
        for t in 0..complex.triangle_count() {
            let c = semigraph.component_of_triangle[t];
            for &v in &complex.triangle_vertices(t) {
                if !at_vertex[v].contains(&c) {
                    at_vertex[v].push(c);
                }
            }
        }
        let hyperedges = at_vertex
            .into_iter()
            .enumerate()
            .filter(|(_, cs)| cs.len() >= 2)
            .map(|(v, mut cs)| {
                cs.sort_unstable();
                (v, cs)
            })
            .collect();
        ComponentHypergraph {
            component_count: semigraph.component_count,
            hyperedges,
        }
    }

    /// True when every semigraph component is reachable from every other
    /// through shared 0-cells.
    pub fn is_connected(&self) -> bool {
        if self.component_count <= 1 {
            return true;
        }
        let mut dsu: Vec<usize> = (0..self.component_count).collect();
        fn find(dsu: &mut Vec<usize>, x: usize) -> usize {
            if dsu[x] != x {
                let r = find(dsu, dsu[x]);
                dsu[x] = r;
            }
            dsu[x]
        }
        for (_, comps) in &self.hyperedges {
            for w in comps.windows(2) {
                let (a, b) = (find(&mut dsu, w[0]), find(&mut dsu, w[1]));
                dsu[a] = b;
            }
        }
        let root = find(&mut dsu, 0);
        (1..self.component_count).all(|c| find(&mut dsu, c) == root)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetra() -> OrientedComplex2 {
        OrientedComplex2::from_triangles(4, &[[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]).unwrap()
    }

    #[test]
    fn single_triangle_closure() {
        let c = OrientedComplex2::parse_tri("0 1 2\n").unwrap();
        assert_eq!(c.vertex_count(), 3);
        assert_eq!(c.edge_count(), 3);
        assert_eq!(c.triangle_count(), 1);
    }

    #[test]
    fn edge_boundary_signs() {
        let c = OrientedComplex2::parse_tri("0 1 2\n").unwrap();
        // bd [v0,v1] = [v1] - [v0]
        let e01 = c.edge_id(c.edges.iter().position(|e| *e == [0, 1]).unwrap());
        let faces = c.faces(e01);
        assert!(faces.contains(&(c.vertex_id(1), 1)));
        assert!(faces.contains(&(c.vertex_id(0), -1)));
        assert_eq!(c.incidence(e01, c.vertex_id(0)).unwrap(), -1);
    }

    #[test]
    fn tetra_off_counts() {
        let off = "OFF\n4 4 6\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 1 2\n3 0 1 3\n3 0 2 3\n3 1 2 3\n";
        let c = OrientedComplex2::parse_off(off).unwrap();
        assert_eq!(
            (c.vertex_count(), c.edge_count(), c.triangle_count()),
            (4, 6, 4)
        );
    }

    #[test]
    fn off_header_variants() {
        // Counts on the OFF line itself, and comments anywhere.
        let compact = "OFF 3 1 3\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n";
        let c = OrientedComplex2::parse_off(compact).unwrap();
        assert_eq!(c.triangle_count(), 1);
        let commented = "# a mesh\nOFF\n3 1 3\n0 0 0 # origin\n1 0 0\n0 1 0\n3 0 1 2\n";
        let c = OrientedComplex2::parse_off(commented).unwrap();
        assert_eq!(c.triangle_count(), 1);
        assert!(OrientedComplex2::parse_off("OFF\n3 1 3\n0 0 0\n").is_err());
    }

    #[test]
    fn triangle_incidence_signs() {
        let c = OrientedComplex2::parse_tri("0 1 2\n").unwrap();
        let t = c.triangle_id(0);
        let find_edge =
            |pair: [usize; 2]| c.edge_id(c.edges.iter().position(|e| *e == pair).unwrap());
        assert_eq!(c.incidence(t, find_edge([0, 2])).unwrap(), -1);
        assert_eq!(c.incidence(t, find_edge([1, 2])).unwrap(), 1);
        assert_eq!(c.incidence(t, find_edge([0, 1])).unwrap(), 1);
        assert!(c.incidence(t, c.vertex_id(0)).is_err());
    }

    #[test]
    fn boundary_composes_to_zero() {
        let c = tetra();
        // d1 * d2 entry by entry over all (vertex, triangle) pairs.
        for t in 0..c.triangle_count() {
            let tid = c.triangle_id(t);
            for v in 0..c.vertex_count() {
                let vid = c.vertex_id(v);
                let mut sum = 0i64;
                for (e, se) in c.faces(tid) {
                    for (w, sw) in c.faces(e) {
                        if w == vid {
                            sum += se * sw;
                        }
                    }
                }
                assert_eq!(sum, 0);
            }
        }
    }

    #[test]
    fn hasse_edge_count() {
        let c = tetra();
        let h = c.hasse_graph();
        assert_eq!(h.node_count, c.cell_count());
        assert_eq!(h.edges.len(), 3 * c.triangle_count() + 2 * c.edge_count());
        let level2 = h.edges.iter().filter(|e| e.level == 2).count();
        assert_eq!(level2, 3 * c.triangle_count());
    }

    #[test]
    fn manifold_classification() {
        assert_eq!(
            tetra().validate_manifold().unwrap().kind,
            ManifoldKind::Closed
        );
        let single = OrientedComplex2::parse_tri("0 1 2\n").unwrap();
        assert_eq!(
            single.validate_manifold().unwrap().kind,
            ManifoldKind::WithBoundary
        );
        // Three triangles sharing the edge [0,1].
        let bad = OrientedComplex2::from_triangles(5, &[[0, 1, 2], [0, 1, 3], [0, 1, 4]]).unwrap();
        assert!(matches!(
            bad.validate_manifold(),
            Err(MeshError::NonManifoldEdge {
                vertices: [0, 1],
                cofaces: 3
            })
        ));
    }

    #[test]
    fn boundary_faces_of_single_triangle() {
        let c = OrientedComplex2::parse_tri("0 1 2\n").unwrap();
        assert_eq!(c.boundary_faces(1).len(), 3);
        // Each vertex has two edge cofaces, so no 0-dimensional boundary faces.
        assert!(c.boundary_faces(0).is_empty());
        assert_eq!(tetra().boundary_faces(1), Vec::<CellId>::new());
    }

    #[test]
    fn closed_iff_no_boundary_edges() {
        for c in [
            OrientedComplex2::from_triangles(4, &[[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]])
                .unwrap(),
            OrientedComplex2::parse_tri("0 1 2\n").unwrap(),
        ] {
            let closed = c.validate_manifold().unwrap().kind == ManifoldKind::Closed;
            assert_eq!(closed, c.boundary_faces(1).is_empty());
        }
    }

    #[test]
    fn semigraph_and_hypergraph() {
        let (sg, hg) = {
            let c = tetra();
            let sg = c.semigraph();
            let hg = ComponentHypergraph::build(&c, &sg);
            (sg, hg)
        };
        assert_eq!(sg.component_count, 1);
        assert!(hg.hyperedges.is_empty());
        assert!(hg.is_connected());

        // Two triangles sharing only vertex 2: two components, one hyperedge.
        let pinched = OrientedComplex2::from_triangles(5, &[[0, 1, 2], [2, 3, 4]]).unwrap();
        let report = pinched.validate_manifold().unwrap();
        assert_eq!(report.pinch_vertices, vec![2]);
        let sg = pinched.semigraph();
        assert_eq!(sg.component_count, 2);
        let hg = ComponentHypergraph::build(&pinched, &sg);
        assert_eq!(hg.hyperedges.len(), 1);
        assert_eq!(hg.hyperedges[0].0, 2);
        assert!(hg.is_connected());
    }

    #[test]
    fn complex_is_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<OrientedComplex2>();
    }

    #[test]
    fn parse_is_deterministic() {
        let text = "2 1 0\n3 1 2\n# comment\n0 3 1\n";
        let a = OrientedComplex2::parse_tri(text).unwrap();
        let b = OrientedComplex2::parse_tri(text).unwrap();
        assert_eq!(a.triangles, b.triangles);
        assert_eq!(a.edges, b.edges);
        // Frozen id assignment for this input.
        assert_eq!(a.triangles, vec![[0, 1, 2], [0, 1, 3], [1, 2, 3]]);
        assert_eq!(
            a.edges,
            vec![[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]
        );
    }

    #[test]
    fn dangling_and_duplicate_errors() {
        assert!(matches!(
            OrientedComplex2::from_triangles(3, &[[0, 1, 5]]),
            Err(MeshError::DanglingVertexIndex {
                index: 5,
                vertex_count: 3
            })
        ));
        assert!(matches!(
            OrientedComplex2::from_triangles(3, &[[0, 1, 2], [2, 1, 0]]),
            Err(MeshError::DuplicateTriangle { .. })
        ));
    }
}
