//! Powell–Sabin 6- and 12-splits, edge frames and 1-to-4 subdivision.
//!
//! Vertex labels (0-based index in brackets):
//!
//! | label | index | point                    |
//! |-------|-------|--------------------------|
//! | v1..v3| 0..2  | corners                  |
//! | v4    | 3     | (v1+v2)/2                |
//! | v5    | 4     | (v2+v3)/2                |
//! | v6    | 5     | (v3+v1)/2                |
//! | v7    | 6     | (2v1+v2+v3)/4            |
//! | v8    | 7     | (v1+2v2+v3)/4            |
//! | v9    | 8     | (v1+v2+2v3)/4            |
//! | v10   | 9     | (v1+v2+v3)/3             |
//!
//! v7..v9 are the midpoints of the inner triangle ⟨v4,v5,v6⟩ edges, each
//! lying on a corner-to-barycenter spoke. The 6-split uses v1..v6 as above
//! and v7 = barycenter.
//!
//! 12-split faces (counterclockwise when the parent is):
//!
//! | face | vertices      | face | vertices       |
//! |------|---------------|------|----------------|
//! | 0    | v1, v4, v7    | 6    | v4, v8, v10    |
//! | 1    | v1, v7, v6    | 7    | v8, v5, v10    |
//! | 2    | v2, v5, v8    | 8    | v5, v9, v10    |
//! | 3    | v2, v8, v4    | 9    | v9, v6, v10    |
//! | 4    | v3, v6, v9    | 10   | v6, v7, v10    |
//! | 5    | v3, v9, v5    | 11   | v7, v4, v10    |
//!
//! 6-split faces: (v1,v4,v7), (v4,v2,v7), (v2,v5,v7), (v5,v3,v7),
//! (v3,v6,v7), (v6,v1,v7).
//!
//! Edge frames: for the edge opposite corner X with the remaining corners
//! (Y, Z) in counterclockwise order, t = Z − Y and m = (Y+Z)/2 − X.
//!
//! `subdivide_four` children and how their frames relate to the parent's:
//!
//! | child            | child corner ↔ parent corner | scale |
//! |------------------|------------------------------|-------|
//! | (v1, v4, v6)     | 0↔0, 1↔1, 2↔2                | +1/2  |
//! | (v2, v5, v4)     | 0↔1, 1↔2, 2↔0                | +1/2  |
//! | (v3, v6, v5)     | 0↔2, 1↔0, 2↔1                | +1/2  |
//! | (v4, v5, v6)     | 0↔2, 1↔0, 2↔1                | −1/2  |
//!
//! The inner child is the parent reflected through its barycenter and
//! halved, so both t and m flip sign on every edge.

use crate::bb_core::{Point2, Triangle, Vector2};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const PS12_FACES: [[usize; 3]; 12] = [
    [0, 3, 6],
    [0, 6, 5],
    [1, 4, 7],
    [1, 7, 3],
    [2, 5, 8],
    [2, 8, 4],
    [3, 7, 9],
    [7, 4, 9],
    [4, 8, 9],
    [8, 5, 9],
    [5, 6, 9],
    [6, 3, 9],
];

pub const PS6_FACES: [[usize; 3]; 6] = [[0, 3, 6], [3, 1, 6], [1, 4, 6], [4, 2, 6], [2, 5, 6], [5, 0, 6]];

/// Interior edge with its two adjacent faces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InteriorEdge {
    pub a: usize,
    pub b: usize,
    pub faces: [usize; 2],
}

/// Common view over both splits.
pub trait Split<S: Scalar> {
    fn parent(&self) -> &Triangle<S>;
    fn vertices(&self) -> &[Point2<S>];
    fn faces(&self) -> &[[usize; 3]];
    fn interior_edges(&self) -> &[InteriorEdge];

    fn face_triangle(&self, f: usize) -> Triangle<S> {
        let [a, b, c] = self.faces()[f];
        let v = self.vertices();
        Triangle::new(v[a].clone(), v[b].clone(), v[c].clone())
    }

    /// First face (in label order) whose closed triangle contains `p`.
    fn locate(&self, p: &Point2<S>) -> Result<usize> {
        for f in 0..self.faces().len() {
            if self.face_triangle(f).contains(p)? {
                return Ok(f);
            }
        }
        Err(Error::CarrierOutsideSplit)
    }

    /// Face edges lying on the parent boundary.
    fn boundary_edges(&self) -> Vec<(usize, usize)> {
        let interior = self.interior_edges();
        let mut out = Vec::new();
        for face in self.faces() {
            for e in 0..3 {
                let (a, b) = (face[e], face[(e + 1) % 3]);
                if !interior.iter().any(|ie| (ie.a, ie.b) == (a.min(b), a.max(b))) {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

fn derive_interior_edges(faces: &[[usize; 3]]) -> Vec<InteriorEdge> {
    let mut edges: Vec<InteriorEdge> = Vec::new();
    let mut seen: Vec<((usize, usize), usize)> = Vec::new();
    for (f, face) in faces.iter().enumerate() {
        for e in 0..3 {
            let (a, b) = (face[e], face[(e + 1) % 3]);
            let key = (a.min(b), a.max(b));
            if let Some(&(_, other)) = seen.iter().find(|s| s.0 == key) {
                edges.push(InteriorEdge {
                    a: key.0,
                    b: key.1,
                    faces: [other, f],
                });
            } else {
                seen.push((key, f));
            }
        }
    }
    edges.sort_by_key(|e| (e.a, e.b));
    edges
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ps12Split<S> {
    pub parent: Triangle<S>,
    pub vertices: [Point2<S>; 10],
    pub interior: Vec<InteriorEdge>,
}

pub fn ps12_split<S: Scalar>(t: &Triangle<S>) -> Result<Ps12Split<S>> {
    t.check_nondegenerate()?;
    let [v1, v2, v3] = &t.v;
    let w = |a: i64, b: i64, c: i64, den: i64| {
        Point2::affine_combination(
            &[v1, v2, v3],
            &[S::from_ratio(a, den), S::from_ratio(b, den), S::from_ratio(c, den)],
        )
    };
    let vertices = [
        v1.clone(),
        v2.clone(),
        v3.clone(),
        v1.midpoint(v2),
        v2.midpoint(v3),
        v3.midpoint(v1),
        w(2, 1, 1, 4),
        w(1, 2, 1, 4),
        w(1, 1, 2, 4),
        t.barycenter(),
    ];
    Ok(Ps12Split {
        parent: t.clone(),
        vertices,
        interior: derive_interior_edges(&PS12_FACES),
    })
}

impl<S: Scalar> Split<S> for Ps12Split<S> {
    fn parent(&self) -> &Triangle<S> {
        &self.parent
    }
    fn vertices(&self) -> &[Point2<S>] {
        &self.vertices
    }
    fn faces(&self) -> &[[usize; 3]] {
        &PS12_FACES
    }
    fn interior_edges(&self) -> &[InteriorEdge] {
        &self.interior
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ps6Split<S> {
    pub parent: Triangle<S>,
    pub vertices: [Point2<S>; 7],
    pub interior: Vec<InteriorEdge>,
}

pub fn ps6_split<S: Scalar>(t: &Triangle<S>) -> Result<Ps6Split<S>> {
    t.check_nondegenerate()?;
    let [v1, v2, v3] = &t.v;
    let vertices = [
        v1.clone(),
        v2.clone(),
        v3.clone(),
        v1.midpoint(v2),
        v2.midpoint(v3),
        v3.midpoint(v1),
        t.barycenter(),
    ];
    Ok(Ps6Split {
        parent: t.clone(),
        vertices,
        interior: derive_interior_edges(&PS6_FACES),
    })
}

impl<S: Scalar> Split<S> for Ps6Split<S> {
    fn parent(&self) -> &Triangle<S> {
        &self.parent
    }
    fn vertices(&self) -> &[Point2<S>] {
        &self.vertices
    }
    fn faces(&self) -> &[[usize; 3]] {
        &PS6_FACES
    }
    fn interior_edges(&self) -> &[InteriorEdge] {
        &self.interior
    }
}

/// Corners `(Y, Z)` following `X` counterclockwise.
pub fn edge_corners(opposite: usize) -> (usize, usize) {
    ((opposite + 1) % 3, (opposite + 2) % 3)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeFrame<S> {
    pub vy: Point2<S>,
    pub vz: Point2<S>,
    pub vx: Point2<S>,
    pub t: Vector2<S>,
    pub m: Vector2<S>,
    /// Inward normal; unit length only in float mode.
    pub n: Vector2<S>,
    pub alpha: S,
    pub beta: S,
}

pub fn edge_frame<S: Scalar>(t: &Triangle<S>, opposite: usize) -> Result<EdgeFrame<S>> {
    t.check_nondegenerate()?;
    let sign = if t.is_counterclockwise() { S::one() } else { -S::one() };
    let (y, z) = edge_corners(opposite);
    let (vx, vy, vz) = (t.v[opposite].clone(), t.v[y].clone(), t.v[z].clone());
    let tv = &vz - &vy;
    let m = &vy.midpoint(&vz) - &vx;
    let mut n = tv.perp().scale(&sign);
    if let Some(len) = n.norm_squared().try_sqrt() {
        n = n.scale(&(S::one() / len));
    }
    let alpha = m.dot(&n) / n.norm_squared();
    let beta = m.dot(&tv) / tv.norm_squared();
    Ok(EdgeFrame {
        vy,
        vz,
        vx,
        t: tv,
        m,
        n,
        alpha,
        beta,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgePoints<S> {
    pub midpoint: Point2<S>,
    pub quarter_near_y: Point2<S>,
    pub quarter_near_z: Point2<S>,
}

pub fn edge_points<S: Scalar>(vy: &Point2<S>, vz: &Point2<S>) -> EdgePoints<S> {
    let q = |a: i64, b: i64| Point2::affine_combination(&[vy, vz], &[S::from_ratio(a, 4), S::from_ratio(b, 4)]);
    EdgePoints {
        midpoint: vy.midpoint(vz),
        quarter_near_y: q(3, 1),
        quarter_near_z: q(1, 3),
    }
}

/// Child of a 1-to-4 split together with its frame relation to the parent.
#[derive(Debug, Clone, PartialEq)]
pub struct ChildTriangle<S> {
    pub triangle: Triangle<S>,
    /// `corner_map[c]` is the parent corner whose opposite edge is parallel
    /// to the child's edge opposite corner `c`.
    pub corner_map: [usize; 3],
    /// `t_child = scale · t_parent` and `m_child = scale · m_parent`.
    pub scale: S,
}

pub fn subdivide_four<S: Scalar>(t: &Triangle<S>) -> Result<[ChildTriangle<S>; 4]> {
    t.check_nondegenerate()?;
    let [v1, v2, v3] = t.v.clone();
    let (v4, v5, v6) = (v1.midpoint(&v2), v2.midpoint(&v3), v3.midpoint(&v1));
    let half = S::from_ratio(1, 2);
    let child = |a: &Point2<S>, b: &Point2<S>, c: &Point2<S>, map: [usize; 3], scale: S| ChildTriangle {
        triangle: Triangle::new(a.clone(), b.clone(), c.clone()),
        corner_map: map,
        scale,
    };
    Ok([
        child(&v1, &v4, &v6, [0, 1, 2], half.clone()),
        child(&v2, &v5, &v4, [1, 2, 0], half.clone()),
        child(&v3, &v6, &v5, [2, 0, 1], half.clone()),
        child(&v4, &v5, &v6, [2, 0, 1], -half),
    ])
}
