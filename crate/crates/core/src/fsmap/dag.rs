//! Matching a curve against a directed acyclic graph: per-vertex reachable
//! sets on one-dimensional diagrams, propagated edge-by-edge in topological
//! order.

use super::RowSet;
use crate::classic::{decide_frechet, reach_table, search_criticals, ReachSeeds};
use crate::error::{Error, Result};
use crate::geometry::{
    bisector_edge_value, build_cell_intervals, point_segment_dist, Interval, Point, Polyline,
};

/// A straight-line embedded DAG.
#[derive(Debug, Clone)]
pub struct GeometricDag {
    vertices: Vec<Point>,
    edges: Vec<(usize, usize)>,
    topo: Vec<usize>,
}

impl GeometricDag {
    pub fn new(vertices: Vec<Point>, edges: Vec<(usize, usize)>) -> Result<GeometricDag> {
        let nv = vertices.len();
        if nv == 0 {
            return Err(Error::invalid_input("graph needs at least one vertex"));
        }
        for &(a, b) in &edges {
            if a >= nv || b >= nv {
                return Err(Error::invalid_input("edge endpoint out of range"));
            }
        }
        // Kahn's algorithm; rejects cycles.
        let mut indeg = vec![0usize; nv];
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nv];
        for &(a, b) in &edges {
            indeg[b] += 1;
            adj[a].push(b);
        }
        let mut queue: Vec<usize> = (0..nv).filter(|&v| indeg[v] == 0).collect();
        let mut topo = Vec::with_capacity(nv);
        while let Some(v) = queue.pop() {
            topo.push(v);
            for &w in &adj[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push(w);
                }
            }
        }
        if topo.len() != nv {
            return Err(Error::contract("graph contains a cycle"));
        }
        Ok(GeometricDag { vertices, edges, topo })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Complete DAG over a point set, ordered by index, with self-free edges
    /// in both index directions collapsed to a topological orientation plus
    /// two anti-parallel passes emulated by vertex duplication.
    pub fn complete_over(points: &[Point], layers: usize) -> Result<GeometricDag> {
        // Layered tournament: `layers` copies of the point set; every vertex
        // connects to every vertex in later layers. A curve through points
        // with repeats of length <= layers embeds as a path here.
        let mut vertices = Vec::with_capacity(points.len() * layers);
        let mut edges = Vec::new();
        for _ in 0..layers {
            vertices.extend_from_slice(points);
        }
        let k = points.len();
        for la in 0..layers {
            for lb in (la + 1)..layers {
                for a in 0..k {
                    for b in 0..k {
                        edges.push((la * k + a, lb * k + b));
                    }
                }
            }
        }
        GeometricDag::new(vertices, edges)
    }
}

/// Witness of a successful match: vertex indices of the path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DagPath(pub Vec<usize>);

#[derive(Debug, Clone, Copy)]
enum Prov {
    SelfSeed,
    From { vertex: usize },
}

fn vertex_row(p: &Polyline, v: &Point, eps: f64) -> RowSet {
    let n = p.num_segments().max(1);
    let cells = (1..=n)
        .map(|k| {
            let seg = if p.num_segments() == 0 {
                crate::geometry::Segment::new(p.vertex(0).clone(), p.vertex(0).clone())
            } else {
                p.segment(k)
            };
            crate::geometry::segment_ball_interval(&seg, v, eps)
                .map(|iv| ((k - 1) as f64 + iv.a, (k - 1) as f64 + iv.b))
        })
        .collect();
    RowSet { cells }
}

/// Propagates `prev` (on FD_i) through the strip of (P, segment v_i v_j),
/// optionally also seeding the strip's left boundary (paths starting inside
/// the edge). Returns the contribution to FD_j and, when requested, whether
/// the strip's right boundary is reachable (paths ending inside the edge).
fn propagate_edge(
    p: &Polyline,
    vi: &Point,
    vj: &Point,
    eps: f64,
    prev: &RowSet,
    seed_left: bool,
) -> (RowSet, bool) {
    let edge_curve = Polyline::new(vec![vi.clone(), vj.clone()]).unwrap();
    let grid = build_cell_intervals(p, &edge_curve, eps);
    let n = grid.n;
    let mut seeds = ReachSeeds::default();
    for (kc, cell) in prev.cells.iter().enumerate() {
        if let Some((lo, hi)) = cell {
            let a = lo - kc as f64;
            let b = hi - kc as f64;
            seeds.bottom.push((kc + 1, Interval { a: a.max(0.0), b: b.min(1.0) }));
        }
    }
    if seed_left {
        seeds.left.push((1, Interval { a: 0.0, b: 1.0 }));
    }
    let table = reach_table(&grid, &seeds);
    let cells = (1..=n)
        .map(|k| table.br(k, 2).map(|iv| ((k - 1) as f64 + iv.a, (k - 1) as f64 + iv.b)))
        .collect();
    let right_boundary = table.lr(n + 1, 1).is_some();
    (RowSet { cells }, right_boundary)
}

/// Decides whether some path π in G satisfies distF(P, π) <= eps. With
/// `inside_edges`, the match may start and end anywhere inside edges (no
/// witness path is reported in that mode).
pub fn dag_match_decide(
    p: &Polyline,
    g: &GeometricDag,
    eps: f64,
    inside_edges: bool,
) -> Result<(bool, Option<DagPath>)> {
    let n = p.num_segments().max(1) as f64;
    let nv = g.vertices.len();
    let mut reach: Vec<RowSet> = (0..nv).map(|_| RowSet::empty(n as usize)).collect();
    let mut prov: Vec<Vec<Option<Prov>>> = vec![vec![None; n as usize]; nv];
    let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for &(a, b) in &g.edges {
        incoming[b].push(a);
    }
    let mut inside_hit = false;
    for &j in &g.topo {
        let row = vertex_row(p, &g.vertices[j], eps);
        // Self seed: the feasible interval containing the row's left endpoint.
        if let Some((lo, hi)) = row.cells[0] {
            if lo <= 1e-12 {
                reach[j].cells[0] = Some((lo, hi));
                prov[j][0] = Some(Prov::SelfSeed);
            }
        }
        for &i in &incoming[j] {
            let (contrib, right) = propagate_edge(
                p,
                &g.vertices[i],
                &g.vertices[j],
                eps,
                &reach[i],
                inside_edges,
            );
            if inside_edges && right {
                inside_hit = true;
            }
            for k in 0..contrib.cells.len() {
                if let Some((lo, hi)) = contrib.cells[k] {
                    let updated = match reach[j].cells[k] {
                        Some((clo, chi)) => {
                            let merged = (clo.min(lo), chi.max(hi));
                            let changed = merged != (clo, chi);
                            reach[j].cells[k] = Some(merged);
                            changed
                        }
                        None => {
                            reach[j].cells[k] = Some((lo, hi));
                            true
                        }
                    };
                    if updated && prov[j][k].is_none() {
                        prov[j][k] = Some(Prov::From { vertex: i });
                    }
                }
            }
        }
    }
    if inside_edges && inside_hit {
        return Ok((true, None));
    }
    // Accept at a vertex whose row's right endpoint is reachable.
    let last_cell = n as usize - 1;
    for j in 0..nv {
        if let Some((_lo, hi)) = reach[j].cells[last_cell] {
            if hi >= n - 1e-12 {
                let path = reconstruct(g, &reach, &prov, j, last_cell);
                return Ok((true, Some(path)));
            }
        }
    }
    Ok((false, None))
}

fn reconstruct(
    g: &GeometricDag,
    reach: &[RowSet],
    prov: &[Vec<Option<Prov>>],
    mut j: usize,
    mut cell: usize,
) -> DagPath {
    let mut rev = vec![j];
    loop {
        match prov[j][cell] {
            Some(Prov::SelfSeed) | None => break,
            Some(Prov::From { vertex }) => {
                // Find a source cell in reach[vertex] at or left of `cell`.
                let mut src = None;
                for k in (0..=cell).rev() {
                    if reach[vertex].cells[k].is_some() {
                        src = Some(k);
                        break;
                    }
                }
                rev.push(vertex);
                j = vertex;
                cell = src.unwrap_or(0);
            }
        }
    }
    rev.reverse();
    DagPath(rev)
}

/// Embeds a vertex path as a polyline.
pub fn path_polyline(g: &GeometricDag, path: &DagPath) -> Polyline {
    let verts: Vec<Point> = path.0.iter().map(|&v| g.vertices[v].clone()).collect();
    Polyline::new(if verts.len() == 1 {
        vec![verts[0].clone(), verts[0].clone()]
    } else {
        verts
    })
    .unwrap()
}

/// Smallest eps for which some path of G matches P, by binary search over the
/// vertex/edge/bisector critical values of P against G.
pub fn dag_match_optimize(p: &Polyline, g: &GeometricDag, inside_edges: bool) -> Result<f64> {
    let mut cands: Vec<f64> = Vec::new();
    for v in &g.vertices {
        cands.push(p.vertex(0).dist(v));
        cands.push(p.vertex(p.num_segments()).dist(v));
        for k in 1..=p.num_segments() {
            let s = p.segment(k);
            cands.push(point_segment_dist(v, &s.start, &s.end));
        }
    }
    for &(a, b) in &g.edges {
        let (ea, eb) = (&g.vertices[a], &g.vertices[b]);
        for v in p.vertices() {
            cands.push(point_segment_dist(v, ea, eb));
        }
        let pv = p.vertices();
        for x in 0..pv.len() {
            for y in (x + 1)..pv.len() {
                if let Some(d) = bisector_edge_value(&pv[x], &pv[y], ea, eb) {
                    cands.push(d);
                }
            }
        }
    }
    // Bisector of graph-vertex pairs against P's edges.
    for a in 0..g.vertices.len() {
        for b in (a + 1)..g.vertices.len() {
            for k in 1..=p.num_segments() {
                let s = p.segment(k);
                if let Some(d) = bisector_edge_value(&g.vertices[a], &g.vertices[b], &s.start, &s.end) {
                    cands.push(d);
                }
            }
        }
    }
    cands.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cands.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * x.abs().max(1.0));
    match search_criticals(&cands, |eps| {
        dag_match_decide(p, g, eps, inside_edges).map(|(hit, _)| hit).unwrap_or(false)
    }) {
        Some((_, v)) => Ok(v),
        None => Ok(f64::INFINITY),
    }
}
