//! Level-by-level refinement over a macro-triangulation.
//!
//! Each macro triangle ⟨P0, P1, P2⟩ keeps a triangular grid of jets at the
//! points `P0 + (i·e1 + j·e2)/n`, `e1 = P1 − P0`, `e2 = P2 − P0`, `n = 2^k`,
//! stored in the scaled basis `(e1/n, e2/n)`. In that basis every small
//! triangle has the same edge frames, so one 10×30 kernel per edge type
//! performs the subdivision step, and halving the basis between levels is
//! a per-order rescale by 1/2.
//!
//! The "up" triangle with lower-left corner `(i, j)` is
//! `P = (i,j), Q = (i+1,j), R = (i,j+1)`; its three edges carry all grid
//! edges, so every midpoint is computed exactly once. In grid units:
//!
//! | edge | A, B, C | t       | m          | new point      |
//! |------|---------|---------|------------|----------------|
//! | PQ   | P, Q, R | (1, 0)  | (1/2, −1)  | (2i+1, 2j)     |
//! | QR   | Q, R, P | (−1, 1) | (1/2, 1/2) | (2i+1, 2j+1)   |
//! | RP   | R, P, Q | (0, −1) | (−1, 1/2)  | (2i, 2j+1)     |
//!
//! Jets on a macro edge are kept by both adjacent macro triangles: the
//! entries along the edge agree, but the third cross derivative is two-sided.

use std::sync::OnceLock;

use rayon::prelude::*;

use crate::bb_core::{Point2, Triangle, Vector2};
use crate::error::{Error, Result};
use crate::hermite::jet::{cartesian_to_frame, frame_to_cartesian, rescale_jet, CornerJet, Jet3};
use crate::hermite::rules::{init_midpoint_from_inputs, subdivide_midpoint_from_inputs};
use crate::macro_solver::{EdgeData, MacroElementData};
use crate::scalar::{Rational, Scalar};

/// Edge types of an up triangle, as `(corner order A,B,C into P,Q,R, t, m)`
/// in grid units.
const EDGE_TYPES: [([usize; 3], (i64, i64, i64, i64), (i64, i64, i64, i64)); 3] = [
    ([0, 1, 2], (1, 1, 0, 1), (1, 2, -1, 1)),
    ([1, 2, 0], (-1, 1, 1, 1), (1, 2, 1, 2)),
    ([2, 0, 1], (0, 1, -1, 1), (-1, 1, 1, 2)),
];

fn edge_vectors<S: Scalar>(e: usize) -> (Vector2<S>, Vector2<S>) {
    let (_, t, m) = EDGE_TYPES[e];
    (
        Vector2::new(S::from_ratio(t.0, t.1), S::from_ratio(t.2, t.3)),
        Vector2::new(S::from_ratio(m.0, m.1), S::from_ratio(m.2, m.3)),
    )
}

/// Dense `rows × cols` kernel, row-major.
#[derive(Debug, Clone)]
struct Kernel<S> {
    cols: usize,
    w: Vec<S>,
}

impl<S: Scalar> Kernel<S> {
    fn build(cols: usize, f: impl Fn(&[Rational]) -> Jet3<Rational>) -> Kernel<Rational> {
        let mut w = vec![Rational::from_i64(0); 10 * cols];
        for c in 0..cols {
            let mut unit = vec![Rational::from_i64(0); cols];
            unit[c] = Rational::from_i64(1);
            let out = f(&unit);
            for r in 0..10 {
                w[r * cols + c] = out.v[r].clone();
            }
        }
        Kernel { cols, w }
    }

    fn convert<T: Scalar>(k: &Kernel<Rational>) -> Kernel<T> {
        Kernel {
            cols: k.cols,
            w: k.w.iter().map(T::from_rational).collect(),
        }
    }

    fn apply(&self, input: &[&S]) -> Jet3<S> {
        Jet3::from_fn(|r| {
            let row = &self.w[r * self.cols..(r + 1) * self.cols];
            let mut acc = S::zero();
            for (w, x) in row.iter().zip(input) {
                if !w.is_zero() {
                    acc.add_mul_assign(w, x);
                }
            }
            acc
        })
    }
}

/// Grid-frame midpoint jet on the next level from the three corner jets
/// `[P, Q, R]` (current grid basis).
fn subdiv_edge_exact(corners: [&Jet3<Rational>; 3], e: usize) -> Jet3<Rational> {
    let (order, _, _) = EDGE_TYPES[e];
    let (t, m) = edge_vectors::<Rational>(e);
    let mut input = Vec::with_capacity(30);
    for &c in &order {
        input.extend(cartesian_to_frame(corners[c], &t, &m).v);
    }
    let mid = subdivide_midpoint_from_inputs(&input);
    to_next_level(&mid, &t, &m)
}

fn to_next_level(mid: &Jet3<Rational>, t: &Vector2<Rational>, m: &Vector2<Rational>) -> Jet3<Rational> {
    let grid = frame_to_cartesian(mid, t, m).expect("edge frames are nonsingular");
    let half = Rational::from_ratio(1, 2);
    rescale_jet(&grid, &half, &half)
}

/// Level-0 edge `x` (opposite corner `x`) from the 39 macro inputs laid out
/// as three corner jets in the `(e1, e2)` basis, then the edge data for the
/// edges opposite corners 0, 1, 2.
fn init_edge_exact(input39: &[Rational], x: usize) -> Jet3<Rational> {
    // edge opposite 2 is PQ, opposite 0 is QR, opposite 1 is RP
    let e = [1, 2, 0][x];
    let (order, _, _) = EDGE_TYPES[e];
    let (t, m) = edge_vectors::<Rational>(e);
    let jet = |c: usize| Jet3::from_fn(|i| input39[10 * c + i].clone());
    let mut input = Vec::with_capacity(39);
    for &c in &order {
        input.extend(cartesian_to_frame(&jet(c), &t, &m).v);
    }
    let (y, z) = ((x + 1) % 3, (x + 2) % 3);
    let edge = |k: usize| &input39[30 + 3 * k..33 + 3 * k];
    input.extend_from_slice(edge(y));
    input.extend_from_slice(edge(z));
    input.extend_from_slice(edge(x));
    let mid = init_midpoint_from_inputs(&input);
    to_next_level(&mid, &t, &m)
}

struct Kernels<S> {
    init: [Kernel<S>; 3],
    sub: [Kernel<S>; 3],
}

fn exact_kernels() -> &'static Kernels<Rational> {
    static K: OnceLock<Kernels<Rational>> = OnceLock::new();
    K.get_or_init(|| {
        let sub = std::array::from_fn(|e| {
            Kernel::<Rational>::build(30, |u| {
                let j: Vec<Jet3<Rational>> = (0..3).map(|c| Jet3::from_fn(|i| u[10 * c + i].clone())).collect();
                subdiv_edge_exact([&j[0], &j[1], &j[2]], e)
            })
        });
        let init = std::array::from_fn(|x| Kernel::<Rational>::build(39, |u| init_edge_exact(u, x)));
        Kernels { init, sub }
    })
}

fn kernels<S: Scalar>() -> Kernels<S> {
    let k = exact_kernels();
    Kernels {
        init: std::array::from_fn(|x| Kernel::<S>::convert(&k.init[x])),
        sub: std::array::from_fn(|e| Kernel::<S>::convert(&k.sub[e])),
    }
}

/// Worker pool; `PS12_THREADS` caps the thread count.
fn pool() -> &'static rayon::ThreadPool {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = std::env::var("PS12_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
            if n > 0 {
                b = b.num_threads(n);
            }
        }
        b.build().expect("thread pool")
    })
}

pub fn grid_len(n: usize) -> usize {
    (n + 1) * (n + 2) / 2
}

pub fn grid_index(i: usize, j: usize, n: usize) -> usize {
    j * (n + 1) - j * j.saturating_sub(1) / 2 + i
}

fn grid_coords(n: usize) -> Vec<(usize, usize)> {
    (0..=n).flat_map(|j| (0..=n - j).map(move |i| (i, j))).collect()
}

/// One macro triangle at some level.
#[derive(Debug, Clone, PartialEq)]
pub struct MacroPatch<S> {
    pub corners: [Point2<S>; 3],
    /// Mesh indices of the corners.
    pub vertex_ids: [usize; 3],
    /// Grid subdivisions per macro edge (`2^level`).
    pub n: usize,
    /// Jets in the basis `(e1/n, e2/n)`, indexed by [`grid_index`].
    pub jets: Vec<Jet3<S>>,
    /// Medial edge data; present only before the first refinement.
    pub edge_data: Option<[EdgeData<S>; 3]>,
}

impl<S: Scalar> MacroPatch<S> {
    pub fn triangle(&self) -> Triangle<S> {
        Triangle::new(self.corners[0].clone(), self.corners[1].clone(), self.corners[2].clone())
    }

    /// Grid basis `(e1/n, e2/n)`.
    pub fn basis(&self) -> (Vector2<S>, Vector2<S>) {
        let inv = S::from_ratio(1, self.n as i64);
        (
            (&self.corners[1] - &self.corners[0]).scale(&inv),
            (&self.corners[2] - &self.corners[0]).scale(&inv),
        )
    }

    pub fn point(&self, i: usize, j: usize) -> Point2<S> {
        let (a, b) = self.basis();
        let offset = &a.scale(&S::from_i64(i as i64)) + &b.scale(&S::from_i64(j as i64));
        &self.corners[0] + &offset
    }

    pub fn jet(&self, i: usize, j: usize) -> &Jet3<S> {
        &self.jets[grid_index(i, j, self.n)]
    }

    pub fn cartesian_jet(&self, i: usize, j: usize) -> Result<CornerJet<S>> {
        let (a, b) = self.basis();
        frame_to_cartesian(self.jet(i, j), &a, &b)
    }

    /// Jet along arbitrary directions `(u, w)`.
    pub fn directional_jet(&self, i: usize, j: usize, u: &Vector2<S>, w: &Vector2<S>) -> Result<Jet3<S>> {
        Ok(cartesian_to_frame(&self.cartesian_jet(i, j)?, u, w))
    }

    /// Small triangles of the grid as index triples (counterclockwise).
    pub fn faces(&self) -> Vec<[(usize, usize); 3]> {
        let n = self.n;
        let mut out = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n - j {
                out.push([(i, j), (i + 1, j), (i, j + 1)]);
                if i + j + 1 < n {
                    out.push([(i + 1, j), (i + 1, j + 1), (i, j + 1)]);
                }
            }
        }
        out
    }
}

/// Macro triangle with its Λ₁₂ data (corner jets Cartesian, medial edge
/// data in this triangle's own frames).
#[derive(Debug, Clone, PartialEq)]
pub struct MacroInput<S> {
    pub corners: [Point2<S>; 3],
    pub vertex_ids: [usize; 3],
    pub data: MacroElementData<S>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefinementLevel<S> {
    pub level: usize,
    pub patches: Vec<MacroPatch<S>>,
}

impl<S: Scalar> RefinementLevel<S> {
    /// Level 0 from macro data. Rejects degenerate or clockwise triangles and
    /// corner jets that disagree at shared vertices.
    pub fn initial(inputs: &[MacroInput<S>]) -> Result<Self> {
        let mut patches = Vec::with_capacity(inputs.len());
        for (ti, inp) in inputs.iter().enumerate() {
            let tri = Triangle::new(inp.corners[0].clone(), inp.corners[1].clone(), inp.corners[2].clone());
            tri.check_nondegenerate()?;
            if !tri.is_counterclockwise() {
                return Err(Error::Orientation(ti));
            }
            let e1 = &inp.corners[1] - &inp.corners[0];
            let e2 = &inp.corners[2] - &inp.corners[0];
            let jets = inp.data.corner_jets.iter().map(|j| cartesian_to_frame(j, &e1, &e2)).collect();
            patches.push(MacroPatch {
                corners: inp.corners.clone(),
                vertex_ids: inp.vertex_ids,
                n: 1,
                jets,
                edge_data: Some(inp.data.edges.clone()),
            });
        }
        check_shared_corners(inputs)?;
        Ok(Self { level: 0, patches })
    }

    pub fn triangle_count(&self) -> usize {
        self.patches.iter().map(|p| p.n * p.n).sum()
    }
}

fn check_shared_corners<S: Scalar>(inputs: &[MacroInput<S>]) -> Result<()> {
    let mut seen: std::collections::HashMap<usize, &CornerJet<S>> = std::collections::HashMap::new();
    for inp in inputs {
        for (c, &id) in inp.vertex_ids.iter().enumerate() {
            let jet = &inp.data.corner_jets[c];
            match seen.get(&id) {
                None => {
                    seen.insert(id, jet);
                }
                Some(prev) => {
                    let scale = prev.v.iter().chain(jet.v.iter()).fold(1.0f64, |m, v| m.max(v.to_f64().abs()));
                    if !prev.v.iter().zip(&jet.v).all(|(x, y)| x.near(y, scale)) {
                        return Err(Error::NonConforming(format!("corner jets differ at vertex {id}")));
                    }
                }
            }
        }
    }
    Ok(())
}

fn refine_patch<S: Scalar>(p: &MacroPatch<S>, k: &Kernels<S>) -> MacroPatch<S> {
    let n = p.n;
    let n2 = 2 * n;
    let half = S::from_ratio(1, 2);
    let init_input: Option<Vec<S>> = p.edge_data.as_ref().map(|edges| {
        let mut v: Vec<S> = p.jets.iter().flat_map(|j| j.v.iter().cloned()).collect();
        for e in edges {
            v.extend([e.d1_mid.clone(), e.d2_quarter_near_y.clone(), e.d2_quarter_near_z.clone()]);
        }
        v
    });
    let jets: Vec<Jet3<S>> = grid_coords(n2)
        .into_par_iter()
        .map(|(ii, jj)| {
            if ii % 2 == 0 && jj % 2 == 0 {
                return rescale_jet(p.jet(ii / 2, jj / 2), &half, &half);
            }
            // up triangle and edge type owning this midpoint
            let (i, j, e) = match (ii % 2, jj % 2) {
                (1, 0) => ((ii - 1) / 2, jj / 2, 0),
                (1, 1) => ((ii - 1) / 2, (jj - 1) / 2, 1),
                _ => (ii / 2, (jj - 1) / 2, 2),
            };
            if let Some(input) = &init_input {
                // level 0: the single up triangle is the macro triangle
                let x = [2, 0, 1][e];
                let refs: Vec<&S> = input.iter().collect();
                return k.init[x].apply(&refs);
            }
            // kernels take the corners as P, Q, R
            let corners = [p.jet(i, j), p.jet(i + 1, j), p.jet(i, j + 1)];
            let refs: Vec<&S> = corners.iter().flat_map(|c| c.v.iter()).collect();
            k.sub[e].apply(&refs)
        })
        .collect();
    MacroPatch {
        corners: p.corners.clone(),
        vertex_ids: p.vertex_ids,
        n: n2,
        jets,
        edge_data: None,
    }
}

/// One subdivision step (the initialization step when `level.level == 0`).
pub fn refine<S: Scalar>(level: &RefinementLevel<S>) -> RefinementLevel<S> {
    let k = kernels::<S>();
    let patches = pool().install(|| level.patches.par_iter().map(|p| refine_patch(p, &k)).collect());
    RefinementLevel {
        level: level.level + 1,
        patches,
    }
}

/// `levels` refinement steps.
pub fn refine_levels<S: Scalar>(level0: &RefinementLevel<S>, levels: usize) -> RefinementLevel<S> {
    let mut cur = level0.clone();
    for _ in 0..levels {
        cur = refine(&cur);
    }
    cur
}

/// Unit normal of the graph `(x, y, f(x, y))` from a jet in basis `(a, b)`.
pub fn surface_normal<S: Scalar>(j: &Jet3<S>, a: &Vector2<S>, b: &Vector2<S>) -> Result<[f64; 3]> {
    let c = frame_to_cartesian(j, a, b)?;
    let (fx, fy) = (c.v[1].to_f64(), c.v[2].to_f64());
    let len = (fx * fx + fy * fy + 1.0).sqrt();
    Ok([-fx / len, -fy / len, 1.0 / len])
}
