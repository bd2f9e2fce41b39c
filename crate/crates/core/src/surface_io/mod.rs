//! Macro-triangulation documents, test data and mesh export.
//!
//! Document layout (JSON, `"format": 1`):
//!
//! ```json
//! {
//!   "format": 1,
//!   "arithmetic": "exact",
//!   "vertices": [["0", "0"], ["1", "0"], ["0", "1"]],
//!   "triangles": [[0, 1, 2]],
//!   "corner_jets": [[f, fx, fy, fxx, fxy, fyy, fxxx, fxxy, fxyy, fyyy], ...],
//!   "edge_data": {
//!     "0-1": { "mode": "normal", "d1_mid": 0, "d2_quarter_near_i": 0, "d2_quarter_near_j": 0 }
//!   }
//! }
//! ```
//!
//! Numbers are JSON numbers (read exactly from their decimal text) or
//! `"p/q"` strings. Edge keys are `"i-j"` with `i < j`. In `"normal"` mode
//! the derivatives are taken along `rot90(v_j − v_i)` (counterclockwise
//! rotation, not normalized), which is the same vector for both adjacent
//! triangles. `"medial"` mode gives the medial derivatives of each adjacent
//! triangle directly; on an interior edge both sides must then imply the
//! same normal data.

pub mod edge;
pub mod export;
pub mod poly;

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::bb_core::{Point2, Triangle};
use crate::error::{Error, Result};
use crate::hermite::jet::{CornerJet, Jet3};
use crate::hermite::refine::{MacroInput, RefinementLevel};
use crate::macro_solver::{EdgeData, MacroElementData};
use crate::scalar::{format_rational, rational_from_f64, Rational, Scalar};

pub use edge::{medial_to_normal, normal_to_medial, NormalEdgeData};
pub use export::{export_derivative_field, export_mesh, surface_mesh, MeshFormat, SurfaceMesh};
pub use poly::Poly2;

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arithmetic {
    Exact,
    F64,
}

impl Arithmetic {
    pub fn name(self) -> &'static str {
        match self {
            Arithmetic::Exact => "exact",
            Arithmetic::F64 => "f64",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeMode {
    Normal,
    Medial,
}

/// Edge data as stored in a document, keyed by the canonical orientation
/// `i < j`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeInput<S> {
    pub mode: EdgeMode,
    pub d1_mid: S,
    pub d2_quarter_near_i: S,
    pub d2_quarter_near_j: S,
}

impl<S: Scalar> EdgeInput<S> {
    pub fn zero() -> Self {
        Self {
            mode: EdgeMode::Normal,
            d1_mid: S::zero(),
            d2_quarter_near_i: S::zero(),
            d2_quarter_near_j: S::zero(),
        }
    }

    fn map<T: Scalar>(&self, f: &impl Fn(&S) -> T) -> EdgeInput<T> {
        EdgeInput {
            mode: self.mode,
            d1_mid: f(&self.d1_mid),
            d2_quarter_near_i: f(&self.d2_quarter_near_i),
            d2_quarter_near_j: f(&self.d2_quarter_near_j),
        }
    }
}

/// Undirected mesh edge `a < b` with its adjacent triangles as
/// `(triangle, local corner opposite the edge)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeshEdge {
    pub a: usize,
    pub b: usize,
    pub triangles: Vec<(usize, usize)>,
}

impl MeshEdge {
    pub fn is_boundary(&self) -> bool {
        self.triangles.len() == 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MacroTriangulation<S> {
    pub vertices: Vec<Point2<S>>,
    pub triangles: Vec<[usize; 3]>,
    /// Derived, sorted by `(a, b)`.
    pub edges: Vec<MeshEdge>,
    pub corner_jets: Vec<CornerJet<S>>,
    /// Parallel to `edges`.
    pub edge_data: Vec<EdgeInput<S>>,
}

impl<S: Scalar> MacroTriangulation<S> {
    /// Validated mesh with all-zero data.
    pub fn new(vertices: Vec<Point2<S>>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let nv = vertices.len();
        for (ti, t) in triangles.iter().enumerate() {
            if let Some(&v) = t.iter().find(|&&v| v >= nv) {
                return Err(Error::BadIndex(format!("triangle {ti} uses vertex {v} of {nv}")));
            }
        }
        for (ti, t) in triangles.iter().enumerate() {
            let tri = Triangle::new(vertices[t[0]].clone(), vertices[t[1]].clone(), vertices[t[2]].clone());
            tri.check_nondegenerate()?;
            if !tri.is_counterclockwise() {
                return Err(Error::Orientation(ti));
            }
        }
        let mut map: BTreeMap<(usize, usize), MeshEdge> = BTreeMap::new();
        let mut directed = std::collections::HashSet::new();
        for (ti, t) in triangles.iter().enumerate() {
            for x in 0..3 {
                let (p, q) = (t[(x + 1) % 3], t[(x + 2) % 3]);
                if !directed.insert((p, q)) {
                    return Err(Error::NonConforming(format!("edge {p}-{q} used twice in the same direction")));
                }
                let (a, b) = (p.min(q), p.max(q));
                let e = map.entry((a, b)).or_insert(MeshEdge {
                    a,
                    b,
                    triangles: Vec::new(),
                });
                e.triangles.push((ti, x));
                if e.triangles.len() > 2 {
                    return Err(Error::NonConforming(format!("edge {a}-{b} has more than two triangles")));
                }
            }
        }
        let edges: Vec<MeshEdge> = map.into_values().collect();
        for e in &edges {
            let (pa, pb) = (&vertices[e.a], &vertices[e.b]);
            for (vi, v) in vertices.iter().enumerate() {
                if vi == e.a || vi == e.b {
                    continue;
                }
                let (d, w) = (pb - pa, v - pa);
                let along = w.dot(&d);
                if d.cross(&w).is_zero() && along > S::zero() && along < d.norm_squared() {
                    return Err(Error::NonConforming(format!("vertex {vi} lies inside edge {}-{}", e.a, e.b)));
                }
            }
        }
        let n_edges = edges.len();
        Ok(Self {
            corner_jets: vec![Jet3::zero(); nv],
            edge_data: vec![EdgeInput::zero(); n_edges],
            vertices,
            triangles,
            edges,
        })
    }

    pub fn edge_index(&self, i: usize, j: usize) -> Option<usize> {
        let key = (i.min(j), i.max(j));
        self.edges.binary_search_by(|e| (e.a, e.b).cmp(&key)).ok()
    }

    pub fn triangle(&self, ti: usize) -> Triangle<S> {
        let t = self.triangles[ti];
        Triangle::new(self.vertices[t[0]].clone(), self.vertices[t[1]].clone(), self.vertices[t[2]].clone())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> MacroTriangulation<T> {
        MacroTriangulation {
            vertices: self.vertices.iter().map(|p| Point2::new(f(&p.x), f(&p.y))).collect(),
            triangles: self.triangles.clone(),
            edges: self.edges.clone(),
            corner_jets: self.corner_jets.iter().map(|j| j.map(&f)).collect(),
            edge_data: self.edge_data.iter().map(|e| e.map(&f)).collect(),
        }
    }

    /// Per-triangle Λ₁₂ data with edge data in each triangle's medial frame.
    pub fn macro_inputs(&self) -> Result<Vec<MacroInput<S>>> {
        let mut out = Vec::with_capacity(self.triangles.len());
        for t in self.triangles.iter() {
            let edges = (0..3)
                .map(|x| {
                    let (iy, iz) = (t[(x + 1) % 3], t[(x + 2) % 3]);
                    let ei = self.edge_index(iy, iz).expect("edge derived from triangles");
                    let (mesh_edge, input) = (&self.edges[ei], &self.edge_data[ei]);
                    match input.mode {
                        EdgeMode::Normal => normal_to_medial(
                            &self.vertices[mesh_edge.a],
                            &self.vertices[mesh_edge.b],
                            &self.vertices[t[x]],
                            &self.corner_jets[mesh_edge.a],
                            &self.corner_jets[mesh_edge.b],
                            &NormalEdgeData {
                                d1_mid: input.d1_mid.clone(),
                                d2_quarter_near_i: input.d2_quarter_near_i.clone(),
                                d2_quarter_near_j: input.d2_quarter_near_j.clone(),
                            },
                            iy < iz,
                        ),
                        EdgeMode::Medial => {
                            self.check_medial_consistency(ei)?;
                            let (ny, nz) = if iy < iz {
                                (&input.d2_quarter_near_i, &input.d2_quarter_near_j)
                            } else {
                                (&input.d2_quarter_near_j, &input.d2_quarter_near_i)
                            };
                            Ok(EdgeData {
                                d1_mid: input.d1_mid.clone(),
                                d2_quarter_near_y: ny.clone(),
                                d2_quarter_near_z: nz.clone(),
                            })
                        }
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            let [e0, e1, e2]: [EdgeData<S>; 3] = edges.try_into().expect("three edges");
            out.push(MacroInput {
                corners: t.map(|v| self.vertices[v].clone()),
                vertex_ids: *t,
                data: MacroElementData {
                    corner_jets: t.map(|v| self.corner_jets[v].clone()),
                    edges: [e0, e1, e2],
                },
            });
        }
        Ok(out)
    }

    /// Medial data on an interior edge must imply the same normal data from
    /// both sides.
    fn check_medial_consistency(&self, ei: usize) -> Result<()> {
        let (e, input) = (&self.edges[ei], &self.edge_data[ei]);
        if e.is_boundary() {
            return Ok(());
        }
        let given = NormalEdgeData {
            d1_mid: input.d1_mid.clone(),
            d2_quarter_near_i: input.d2_quarter_near_i.clone(),
            d2_quarter_near_j: input.d2_quarter_near_j.clone(),
        };
        let sides = e
            .triangles
            .iter()
            .map(|&(ti, x)| {
                medial_to_normal(
                    &self.vertices[e.a],
                    &self.vertices[e.b],
                    &self.vertices[self.triangles[ti][x]],
                    &self.corner_jets[e.a],
                    &self.corner_jets[e.b],
                    &given,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let (l, r) = (&sides[0], &sides[1]);
        let pairs = [(&l.d1_mid, &r.d1_mid), (&l.d2_quarter_near_i, &r.d2_quarter_near_i), (&l.d2_quarter_near_j, &r.d2_quarter_near_j)];
        let scale = pairs.iter().fold(1.0f64, |m, (a, b)| m.max(a.to_f64().abs()).max(b.to_f64().abs()));
        if pairs.iter().all(|(a, b)| a.near(b, scale)) {
            Ok(())
        } else {
            Err(Error::NonConforming(format!("medial data on edge {}-{} disagrees across the edge", e.a, e.b)))
        }
    }

    /// Level 0 of the refinement.
    pub fn initial_level(&self) -> Result<RefinementLevel<S>> {
        RefinementLevel::initial(&self.macro_inputs()?)
    }
}

/// Samples every Λ₁₂ functional from `poly` (normal-mode edge data).
pub fn sample_polynomial<S: Scalar>(poly: &Poly2<S>, tri: &MacroTriangulation<S>) -> Result<MacroTriangulation<S>> {
    if poly.degree() > 5 {
        return Err(Error::DegreeTooHigh(poly.degree()));
    }
    let mut out = tri.clone();
    out.corner_jets = tri.vertices.iter().map(|p| poly.cartesian_jet(p)).collect();
    out.edge_data = tri
        .edges
        .iter()
        .map(|e| {
            let (pa, pb) = (&tri.vertices[e.a], &tri.vertices[e.b]);
            let t = pb - pa;
            let n = t.perp();
            let at = |wa: i64| Point2::affine_combination(&[pa, pb], &[S::from_ratio(wa, 4), S::from_ratio(4 - wa, 4)]);
            EdgeInput {
                mode: EdgeMode::Normal,
                d1_mid: poly.jet(&at(2), &n, &t).v[1].clone(),
                d2_quarter_near_i: poly.jet(&at(3), &n, &t).v[3].clone(),
                d2_quarter_near_j: poly.jet(&at(1), &n, &t).v[3].clone(),
            }
        })
        .collect();
    Ok(out)
}

/// Zero data except the value 1 at `vertex`. Edge data are zero medial
/// derivatives where that is consistent across the edge, else zero normal
/// derivatives.
pub fn delta_data<S: Scalar>(tri: &MacroTriangulation<S>, vertex: usize) -> Result<MacroTriangulation<S>> {
    if vertex >= tri.vertices.len() {
        return Err(Error::BadIndex(format!("vertex {vertex} of {}", tri.vertices.len())));
    }
    let mut out = tri.clone();
    out.corner_jets = vec![Jet3::zero(); tri.vertices.len()];
    out.edge_data = vec![EdgeInput::zero(); tri.edges.len()];
    out.corner_jets[vertex].v[0] = S::one();
    for ei in 0..out.edges.len() {
        out.edge_data[ei].mode = EdgeMode::Medial;
        if out.check_medial_consistency(ei).is_err() {
            out.edge_data[ei].mode = EdgeMode::Normal;
        }
    }
    Ok(out)
}

/// Regular hexagon of circumradius 1 around the origin, fanned from the
/// center (vertex 0). Coordinates are the `f64` values taken exactly.
pub fn hexagon<S: Scalar>() -> MacroTriangulation<S> {
    let c = |v: f64| S::from_rational(&rational_from_f64(v).expect("finite"));
    let mut vertices = vec![Point2::origin()];
    for k in 0..6 {
        let a = std::f64::consts::PI * k as f64 / 3.0;
        vertices.push(Point2::new(c(a.cos()), c(a.sin())));
    }
    let triangles = (0..6).map(|k| [0, 1 + k, 1 + (k + 1) % 6]).collect();
    MacroTriangulation::new(vertices, triangles).expect("valid fixture")
}

/// `(0,0), (1,0), (0,1), (1,1)` split along the antidiagonal.
pub fn two_triangles<S: Scalar>() -> MacroTriangulation<S> {
    let p = |x: i64, y: i64| Point2::new(S::from_i64(x), S::from_i64(y));
    MacroTriangulation::new(vec![p(0, 0), p(1, 0), p(0, 1), p(1, 1)], vec![[0, 1, 2], [3, 2, 1]]).expect("valid fixture")
}

/// A parsed document.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub arithmetic: Arithmetic,
    pub triangulation: MacroTriangulation<Rational>,
}

fn number(v: &Value, what: &str) -> Result<Rational> {
    poly::parse_number(v).ok_or_else(|| Error::Format(format!("{what}: not a number: {v}")))
}

fn parse(text: &str, require_data: bool) -> Result<Document> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    if let Some(f) = doc.get("format") {
        if f.as_u64() != Some(FORMAT_VERSION) {
            return Err(Error::Format(format!("unsupported format {f}")));
        }
    }
    let arithmetic = match doc.get("arithmetic").and_then(Value::as_str).unwrap_or("exact") {
        "exact" => Arithmetic::Exact,
        "f64" => Arithmetic::F64,
        other => return Err(Error::Format(format!("unknown arithmetic `{other}`"))),
    };
    let array = |key: &str| {
        doc.get(key)
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Format(format!("missing `{key}` array")))
    };
    let vertices = array("vertices")?
        .iter()
        .enumerate()
        .map(|(i, v)| match v.as_array().map(Vec::as_slice) {
            Some([x, y]) => Ok(Point2::new(number(x, "vertex")?, number(y, "vertex")?)),
            _ => Err(Error::Format(format!("vertex {i} is not a pair"))),
        })
        .collect::<Result<Vec<_>>>()?;
    let triangles = array("triangles")?
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let idx: Option<Vec<usize>> =
                t.as_array().map(|a| a.iter().filter_map(|v| v.as_u64().map(|v| v as usize)).collect());
            match idx {
                Some(v) if v.len() == 3 => Ok([v[0], v[1], v[2]]),
                _ => Err(Error::Format(format!("triangle {i} is not an index triple"))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let mut tri = MacroTriangulation::new(vertices, triangles)?;

    match doc.get("corner_jets") {
        Some(Value::Array(jets)) => {
            if jets.len() != tri.vertices.len() {
                return Err(Error::MissingData(format!(
                    "{} corner jets for {} vertices",
                    jets.len(),
                    tri.vertices.len()
                )));
            }
            for (i, j) in jets.iter().enumerate() {
                let vals = j
                    .as_array()
                    .filter(|a| a.len() == 10)
                    .ok_or_else(|| Error::Format(format!("corner jet {i} needs 10 entries")))?;
                let vals = vals.iter().map(|v| number(v, "corner jet")).collect::<Result<Vec<_>>>()?;
                tri.corner_jets[i] = Jet3::from_fn(|k| vals[k].clone());
            }
        }
        None if !require_data => {}
        _ => return Err(Error::MissingData("corner_jets".into())),
    }

    match doc.get("edge_data") {
        Some(Value::Object(map)) => {
            for (key, e) in map {
                let (i, j) = key
                    .split_once('-')
                    .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<usize>().ok()?)))
                    .filter(|(a, b)| a < b)
                    .ok_or_else(|| Error::Format(format!("edge key `{key}` is not `i-j` with i < j")))?;
                let ei = tri.edge_index(i, j).ok_or_else(|| Error::BadIndex(format!("no edge {key}")))?;
                let mode = match e.get("mode").and_then(Value::as_str).unwrap_or("normal") {
                    "normal" => EdgeMode::Normal,
                    "medial" => EdgeMode::Medial,
                    other => return Err(Error::Format(format!("edge {key}: unknown mode `{other}`"))),
                };
                let field = |f: &str| {
                    e.get(f)
                        .ok_or_else(|| Error::MissingData(format!("edge {key}: `{f}`")))
                        .and_then(|v| number(v, f))
                };
                tri.edge_data[ei] = EdgeInput {
                    mode,
                    d1_mid: field("d1_mid")?,
                    d2_quarter_near_i: field("d2_quarter_near_i")?,
                    d2_quarter_near_j: field("d2_quarter_near_j")?,
                };
            }
            if require_data && map.len() < tri.edges.len() {
                let missing = tri.edges.iter().find(|e| !map.contains_key(&format!("{}-{}", e.a, e.b))).expect("missing edge");
                return Err(Error::MissingData(format!("edge {}-{}", missing.a, missing.b)));
            }
        }
        None if !require_data => {}
        _ => return Err(Error::MissingData("edge_data".into())),
    }
    if require_data {
        tri.macro_inputs()?;
    }
    Ok(Document { arithmetic, triangulation: tri })
}

/// Parses and validates a complete document; normal-mode edge data is
/// checked by converting it to medial data.
pub fn load_triangulation(text: &str) -> Result<Document> {
    parse(text, true)
}

/// Parses a document whose data may be absent (absent data reads as zero).
pub fn load_mesh(text: &str) -> Result<Document> {
    parse(text, false)
}

/// Serializes `tri`; exact mode writes `"p/q"` strings, `f64` mode numbers.
pub fn save_triangulation(tri: &MacroTriangulation<Rational>, arithmetic: Arithmetic) -> String {
    let num = |r: &Rational| match arithmetic {
        Arithmetic::Exact => Value::String(format_rational(r)),
        Arithmetic::F64 => json!(r.to_f64()),
    };
    let mut edges = Map::new();
    for (e, d) in tri.edges.iter().zip(&tri.edge_data) {
        edges.insert(
            format!("{}-{}", e.a, e.b),
            json!({
                "mode": match d.mode { EdgeMode::Normal => "normal", EdgeMode::Medial => "medial" },
                "d1_mid": num(&d.d1_mid),
                "d2_quarter_near_i": num(&d.d2_quarter_near_i),
                "d2_quarter_near_j": num(&d.d2_quarter_near_j),
            }),
        );
    }
    let doc = json!({
        "format": FORMAT_VERSION,
        "arithmetic": arithmetic.name(),
        "vertices": tri.vertices.iter().map(|p| json!([num(&p.x), num(&p.y)])).collect::<Vec<_>>(),
        "triangles": tri.triangles,
        "corner_jets": tri.corner_jets.iter().map(|j| j.v.iter().map(num).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "edge_data": edges,
    });
    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
}
