//! Conforming triangulations of rectangles and of the L-shaped domain.
//!
//! Every edge is stored once with its vertex pair ordered `(low, high)`. The
//! global normal of an edge is the low→high direction rotated by −90°, and each
//! triangle records, per local edge, whether its outward normal agrees with that
//! global normal. Local edge `k` of a triangle is the edge opposite local
//! vertex `k`.

use std::collections::HashMap;

use crate::error::{Error, Result};

pub type Point = [f64; 2];

const COORD_TOL: f64 = 1e-12;

/// Boundary classification of a vertex or an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundaryTag {
    Interior,
    Left,
    Right,
    Bottom,
    Top,
    /// The two walls meeting at the re-entrant corner of the L-shape.
    Reentrant,
}

impl BoundaryTag {
    pub fn is_boundary(self) -> bool {
        self != BoundaryTag::Interior
    }
}

/// Geometric description used to attach wall tags to boundary entities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Domain {
    Rect {
        x0: f64,
        x1: f64,
        y0: f64,
        y1: f64,
    },
    /// `(-0.5, 0.5)^2` without the quadrant `[0, 0.5) x (-0.5, 0]`.
    LShape,
}

impl Domain {
    pub fn area(&self) -> f64 {
        match *self {
            Domain::Rect { x0, x1, y0, y1 } => (x1 - x0) * (y1 - y0),
            Domain::LShape => 0.75,
        }
    }

    /// Wall containing the segment `a`–`b`, if any.
    fn wall_of(&self, a: Point, b: Point) -> Option<BoundaryTag> {
        let on = |v: f64, c: f64| (v - c).abs() <= COORD_TOL;
        let both = |f: &dyn Fn(Point) -> bool| f(a) && f(b);
        match *self {
            Domain::Rect { x0, x1, y0, y1 } => {
                if both(&|p| on(p[0], x0)) {
                    Some(BoundaryTag::Left)
                } else if both(&|p| on(p[0], x1)) {
                    Some(BoundaryTag::Right)
                } else if both(&|p| on(p[1], y0)) {
                    Some(BoundaryTag::Bottom)
                } else if both(&|p| on(p[1], y1)) {
                    Some(BoundaryTag::Top)
                } else {
                    None
                }
            }
            Domain::LShape => {
                if both(&|p| on(p[0], 0.0) && p[1] <= COORD_TOL) || both(&|p| on(p[1], 0.0) && p[0] >= -COORD_TOL) {
                    Some(BoundaryTag::Reentrant)
                } else if both(&|p| on(p[0], -0.5)) {
                    Some(BoundaryTag::Left)
                } else if both(&|p| on(p[0], 0.5)) {
                    Some(BoundaryTag::Right)
                } else if both(&|p| on(p[1], -0.5)) {
                    Some(BoundaryTag::Bottom)
                } else if both(&|p| on(p[1], 0.5)) {
                    Some(BoundaryTag::Top)
                } else {
                    None
                }
            }
        }
    }
}

/// Reference to one edge of a triangle together with its orientation sign.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeRef {
    pub edge: usize,
    /// `+1` when the triangle's outward normal agrees with the global edge normal.
    pub sign: f64,
}

#[derive(Clone, Debug)]
pub struct Mesh {
    pub vertices: Vec<Point>,
    pub triangles: Vec<[usize; 3]>,
    pub edges: Vec<[usize; 2]>,
    pub tri_edges: Vec<[EdgeRef; 3]>,
    /// Triangles adjacent to each edge; the second slot is `None` on the boundary.
    pub edge_triangles: Vec<[Option<usize>; 2]>,
    pub vertex_tags: Vec<BoundaryTag>,
    pub edge_tags: Vec<BoundaryTag>,
    pub h: f64,
    pub domain: Domain,
}

impl Mesh {
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn tri_coords(&self, t: usize) -> [Point; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    /// Signed area; positive for counter-clockwise triangles.
    pub fn area(&self, t: usize) -> f64 {
        signed_area(self.tri_coords(t))
    }

    pub fn edge_length(&self, e: usize) -> f64 {
        let [a, b] = self.edges[e];
        dist(self.vertices[a], self.vertices[b])
    }

    /// Unit global normal of edge `e`.
    pub fn edge_normal(&self, e: usize) -> Point {
        let [a, b] = self.edges[e];
        let (pa, pb) = (self.vertices[a], self.vertices[b]);
        let (dx, dy) = (pb[0] - pa[0], pb[1] - pa[1]);
        let len = (dx * dx + dy * dy).sqrt();
        [dy / len, -dx / len]
    }

    pub fn is_boundary_edge(&self, e: usize) -> bool {
        self.edge_triangles[e][1].is_none()
    }

    pub fn boundary_edges(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_edges()).filter(|&e| self.is_boundary_edge(e))
    }

    pub fn centroid(&self, t: usize) -> Point {
        let [a, b, c] = self.tri_coords(t);
        [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0]
    }

    /// Locate a triangle containing `p` (closed), returning it with the
    /// barycentric coordinates of `p`. Barycentrics within `1e-12` of zero are
    /// snapped so that points on edges and vertices evaluate exactly.
    pub fn locate(&self, p: Point) -> Option<(usize, [f64; 3])> {
        const SNAP: f64 = 1e-12;
        for t in 0..self.num_triangles() {
            let mut lam = barycentric(self.tri_coords(t), p);
            if lam.iter().all(|&l| l >= -SNAP) {
                for l in lam.iter_mut() {
                    if l.abs() < SNAP {
                        *l = 0.0;
                    }
                }
                let s: f64 = lam.iter().sum();
                for l in lam.iter_mut() {
                    *l /= s;
                }
                return Some((t, lam));
            }
        }
        None
    }
}

pub(crate) fn signed_area(p: [Point; 3]) -> f64 {
    0.5 * ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]))
}

pub(crate) fn dist(a: Point, b: Point) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

pub(crate) fn barycentric(tri: [Point; 3], p: Point) -> [f64; 3] {
    let area = signed_area(tri);
    let l0 = signed_area([p, tri[1], tri[2]]) / area;
    let l1 = signed_area([tri[0], p, tri[2]]) / area;
    [l0, l1, 1.0 - l0 - l1]
}

/// Uniform `nx x ny` grid of the rectangle, each cell split along its
/// lower-left to upper-right diagonal.
pub fn build_structured_rect(nx: usize, ny: usize, rect: [[f64; 2]; 2]) -> Result<Mesh> {
    let [[x0, x1], [y0, y1]] = rect;
    if nx == 0 || ny == 0 {
        return Err(Error::InvalidMesh(format!("cell counts must be positive, got {nx}x{ny}")));
    }
    if !(x0 < x1 && y0 < y1) || ![x0, x1, y0, y1].iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidExtent { x0, x1, y0, y1 });
    }
    let (vertices, triangles) = grid_block(nx, ny, [x0, x1], [y0, y1]);
    finish(vertices, triangles, Domain::Rect { x0, x1, y0, y1 })
}

/// L-shaped domain from three `n x n` blocks of side 0.5; the re-entrant
/// corner sits at the origin.
pub fn build_lshape(n: usize) -> Result<Mesh> {
    if n == 0 {
        return Err(Error::InvalidMesh("cells per half-side must be positive".into()));
    }
    let blocks = [([-0.5, 0.0], [-0.5, 0.0]), ([-0.5, 0.0], [0.0, 0.5]), ([0.0, 0.5], [0.0, 0.5])];
    let mut vertices: Vec<Point> = Vec::new();
    let mut triangles = Vec::new();
    let mut index: HashMap<(i64, i64), usize> = HashMap::new();
    for (xr, yr) in blocks {
        let (bv, bt) = grid_block(n, n, xr, yr);
        let map: Vec<usize> = bv
            .iter()
            .map(|&p| {
                let key = ((p[0] / COORD_TOL).round() as i64, (p[1] / COORD_TOL).round() as i64);
                *index.entry(key).or_insert_with(|| {
                    vertices.push(p);
                    vertices.len() - 1
                })
            })
            .collect();
        triangles.extend(bt.iter().map(|t| [map[t[0]], map[t[1]], map[t[2]]]));
    }
    finish(vertices, triangles, Domain::LShape)
}

fn grid_block(nx: usize, ny: usize, xr: [f64; 2], yr: [f64; 2]) -> (Vec<Point>, Vec<[usize; 3]>) {
    let dx = (xr[1] - xr[0]) / nx as f64;
    let dy = (yr[1] - yr[0]) / ny as f64;
    let coord = |i: usize, n: usize, r: [f64; 2], d: f64| if i == n { r[1] } else { r[0] + i as f64 * d };
    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            vertices.push([coord(i, nx, xr, dx), coord(j, ny, yr, dy)]);
        }
    }
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut triangles = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            triangles.push([a, b, c]);
            triangles.push([a, c, d]);
        }
    }
    (vertices, triangles)
}

fn finish(vertices: Vec<Point>, triangles: Vec<[usize; 3]>, domain: Domain) -> Result<Mesh> {
    let mut edge_index: HashMap<[usize; 2], usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut edge_triangles: Vec<[Option<usize>; 2]> = Vec::new();
    let mut tri_edges = Vec::with_capacity(triangles.len());
    let mut h: f64 = 0.0;
    for (t, tri) in triangles.iter().enumerate() {
        let coords = [vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]];
        let area = signed_area(coords);
        if area <= 0.0 {
            return Err(Error::DegenerateTriangle(t));
        }
        let lens = [dist(coords[1], coords[2]), dist(coords[2], coords[0]), dist(coords[0], coords[1])];
        h = h.max(lens[0] * lens[1] * lens[2] / (2.0 * area));
        let mut refs = [EdgeRef { edge: 0, sign: 0.0 }; 3];
        for (k, r) in refs.iter_mut().enumerate() {
            let (a, b) = (tri[(k + 1) % 3], tri[(k + 2) % 3]);
            let key = [a.min(b), a.max(b)];
            let e = *edge_index.entry(key).or_insert_with(|| {
                edges.push(key);
                edge_triangles.push([None, None]);
                edges.len() - 1
            });
            let slot = &mut edge_triangles[e];
            if slot[0].is_none() {
                slot[0] = Some(t);
            } else if slot[1].is_none() {
                slot[1] = Some(t);
            } else {
                return Err(Error::InvalidMesh(format!("edge {key:?} shared by more than two triangles")));
            }
            *r = EdgeRef { edge: e, sign: if a < b { 1.0 } else { -1.0 } };
        }
        tri_edges.push(refs);
    }
    let nv = vertices.len();
    let ne = edges.len();
    let mut mesh = Mesh {
        vertices,
        triangles,
        edges,
        tri_edges,
        edge_triangles,
        vertex_tags: vec![BoundaryTag::Interior; nv],
        edge_tags: vec![BoundaryTag::Interior; ne],
        h,
        domain,
    };
    classify_boundary(&mut mesh)?;
    Ok(mesh)
}

/// Tag every boundary edge with the wall it lies on and every boundary vertex
/// with the first wall (in tag order) among its boundary edges.
pub fn classify_boundary(mesh: &mut Mesh) -> Result<()> {
    mesh.vertex_tags.iter_mut().for_each(|t| *t = BoundaryTag::Interior);
    mesh.edge_tags.iter_mut().for_each(|t| *t = BoundaryTag::Interior);
    for e in 0..mesh.num_edges() {
        if !mesh.is_boundary_edge(e) {
            continue;
        }
        let [a, b] = mesh.edges[e];
        let (pa, pb) = (mesh.vertices[a], mesh.vertices[b]);
        let tag = mesh.domain.wall_of(pa, pb).ok_or(Error::UnclassifiedBoundary { a: pa, b: pb })?;
        mesh.edge_tags[e] = tag;
        for v in [a, b] {
            let vt = &mut mesh.vertex_tags[v];
            if *vt == BoundaryTag::Interior || tag < *vt {
                *vt = tag;
            }
        }
    }
    Ok(())
}
