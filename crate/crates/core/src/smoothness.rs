//! Smoothness conditions between B-coefficients of adjacent patches.
//!
//! Rows are normalized so the coefficient on the second triangle has
//! weight −1; a row is satisfied when `Σ w · c = 0`.

use serde::{Deserialize, Serialize};

use crate::bb_core::{
    eval_derivative, to_barycentric, BezierPatch, MultiIndex, Point2, Triangle, Vector2,
};
use crate::error::{Error, Result};
use crate::scalar::{binomial, factorial, format_rational, powi, Rational, Scalar};
use crate::splits::{ps12_split, Split};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoeffSlot {
    pub face: usize,
    pub idx: MultiIndex,
}

impl CoeffSlot {
    pub fn new(face: usize, idx: MultiIndex) -> Self {
        Self { face, idx }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmoothnessRow<S> {
    pub order: usize,
    pub terms: Vec<(CoeffSlot, S)>,
}

impl<S: Scalar> SmoothnessRow<S> {
    fn from_terms(order: usize, mut terms: Vec<(CoeffSlot, S)>) -> Self {
        terms.retain(|t| !t.1.is_zero());
        terms.sort_by_key(|t| t.0);
        Self { order, terms }
    }

    pub fn weight(&self, slot: CoeffSlot) -> Option<&S> {
        self.terms.iter().find(|t| t.0 == slot).map(|t| &t.1)
    }

    /// `Σ w · c` with coefficients looked up per face.
    pub fn residual(&self, patches: &[&BezierPatch<S>]) -> S {
        let mut acc = S::zero();
        for (slot, w) in &self.terms {
            acc.add_mul_assign(w, patches[slot.face].coeff(slot.idx));
        }
        acc
    }

    pub fn map_faces(&self, f: impl Fn(usize) -> usize) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(s, w)| (CoeffSlot::new(f(s.face), s.idx), w.clone()))
            .collect();
        Self::from_terms(self.order, terms)
    }
}

fn coincident<S: Scalar>(a: &Point2<S>, b: &Point2<S>, scale: f64) -> bool {
    a.coincides(b, scale)
}

/// Position of the vertex of `t` matching `p`.
fn match_vertex<S: Scalar>(t: &Triangle<S>, p: &Point2<S>, scale: f64) -> Option<usize> {
    (0..3).find(|&i| coincident(&t.v[i], p, scale))
}

/// Shared-edge bookkeeping: `own` is the vertex of `t` off the edge, and
/// `(a, b)` the edge vertices of `t` in cyclic order after `own`;
/// `other_pos[i]` is the position of `t.v[i]` in `tt` (the off-edge vertex
/// maps to the off-edge vertex of `tt`).
struct Adjacency {
    own: usize,
    a: usize,
    b: usize,
    other_pos: [usize; 3],
}

fn adjacency<S: Scalar>(t: &Triangle<S>, tt: &Triangle<S>) -> Result<Adjacency> {
    let scale = t.scale().max(tt.scale());
    let matches: Vec<Option<usize>> = (0..3).map(|i| match_vertex(tt, &t.v[i], scale)).collect();
    if matches.iter().filter(|m| m.is_some()).count() != 2 {
        return Err(Error::NotEdgeAdjacent);
    }
    let own = matches.iter().position(|m| m.is_none()).unwrap();
    let a = (own + 1) % 3;
    let b = (own + 2) % 3;
    let (pa, pb) = (matches[a].unwrap(), matches[b].unwrap());
    let other_off = 3 - pa - pb;
    let mut other_pos = [0; 3];
    other_pos[own] = other_off;
    other_pos[a] = pa;
    other_pos[b] = pb;
    Ok(Adjacency { own, a, b, other_pos })
}

fn index_from(exps: [usize; 3]) -> MultiIndex {
    MultiIndex::from_array(exps)
}

/// `C^r` conditions across the edge shared by `t` (face 0) and `tt`
/// (face 1). One row per `n = 0..=r` and `j = 0..=d-n`, where `j` is the
/// exponent of the first edge vertex of `t` after its off-edge vertex.
pub fn cr_rows<S: Scalar>(t: &Triangle<S>, tt: &Triangle<S>, r: usize, d: usize) -> Result<Vec<SmoothnessRow<S>>> {
    if r > d {
        return Err(Error::OrderExceedsDegree { order: r, degree: d });
    }
    t.check_nondegenerate()?;
    tt.check_nondegenerate()?;
    let adj = adjacency(t, tt)?;
    let off = &tt.v[adj.other_pos[adj.own]];
    let bary = to_barycentric(off, t)?.0;
    let b = [bary[adj.own].clone(), bary[adj.a].clone(), bary[adj.b].clone()];
    let mut rows = Vec::new();
    for n in 0..=r {
        for j in 0..=d - n {
            let k = d - n - j;
            let mut terms = Vec::new();
            // c̃ slot: off-edge exponent n, edge exponents (j, k)
            let mut tilde = [0; 3];
            tilde[adj.other_pos[adj.own]] = n;
            tilde[adj.other_pos[adj.a]] = j;
            tilde[adj.other_pos[adj.b]] = k;
            terms.push((CoeffSlot::new(1, index_from(tilde)), -S::one()));
            for nu in 0..=n {
                for mu in 0..=n - nu {
                    let kappa = n - nu - mu;
                    let multinomial = factorial(n) / (factorial(nu) * factorial(mu) * factorial(kappa));
                    let w = S::from_i64(multinomial) * powi(&b[0], nu) * powi(&b[1], mu) * powi(&b[2], kappa);
                    let mut e = [0; 3];
                    e[adj.own] = nu;
                    e[adj.a] = j + mu;
                    e[adj.b] = k + kappa;
                    terms.push((CoeffSlot::new(0, index_from(e)), w));
                }
            }
            rows.push(SmoothnessRow::from_terms(n, terms));
        }
    }
    Ok(rows)
}

/// Univariate form of the conditions when the off-edge vertices are
/// collinear with the third index direction: `c̃_njk = Σ_ν C(n,ν) b1^ν
/// (1−b1)^(n−ν) c_{ν,j,k+n−ν}` with `k = d − n − j`.
pub fn collinear_rows<S: Scalar>(b1: &S, n: usize, d: usize, j: usize) -> Result<SmoothnessRow<S>> {
    if n > d {
        return Err(Error::OrderExceedsDegree { order: n, degree: d });
    }
    if j > d - n {
        return Err(Error::IndexDegreeMismatch {
            i: n,
            j,
            k: 0,
            degree: d,
        });
    }
    let k = d - n - j;
    let one_minus = S::one() - b1.clone();
    let mut terms = vec![(CoeffSlot::new(1, MultiIndex::new(n, j, k)), -S::one())];
    for nu in 0..=n {
        let w = S::from_i64(binomial(n, nu)) * powi(b1, nu) * powi(&one_minus, n - nu);
        terms.push((CoeffSlot::new(0, MultiIndex::new(nu, j, k + n - nu)), w));
    }
    Ok(SmoothnessRow::from_terms(n, terms))
}

fn forward_difference<S: Scalar>(x: &[S], n: usize) -> S {
    let mut acc = S::zero();
    for j in 0..=n {
        let w = S::from_i64(binomial(n, j) * if (n - j) % 2 == 0 { 1 } else { -1 });
        acc.add_mul_assign(&w, &x[j]);
    }
    acc
}

/// `Δⁿe₀ / len1ⁿ = Δⁿẽ₀ / len2ⁿ`, exact or within float tolerance.
pub fn forward_difference_check<S: Scalar>(e: &[S], et: &[S], len1: &S, len2: &S, n: usize) -> Result<bool> {
    for v in [e, et] {
        if v.len() != n + 1 {
            return Err(Error::LengthMismatch {
                expected: n + 1,
                got: v.len(),
            });
        }
    }
    let lhs = forward_difference(e, n) * powi(len2, n);
    let rhs = forward_difference(et, n) * powi(len1, n);
    let scale = e.iter().chain(et).map(|v| v.to_f64().abs()).fold(1.0, f64::max)
        * len1.to_f64().abs().max(len2.to_f64().abs()).powi(n as i32)
        * 2f64.powi(n as i32);
    Ok(lhs.near(&rhs, scale))
}

pub fn rows_vanish<S: Scalar>(rows: &[SmoothnessRow<S>], patches: &[&BezierPatch<S>]) -> bool {
    let scale = patches
        .iter()
        .flat_map(|p| p.coeffs().iter().map(|c| c.to_f64().abs()))
        .fold(1.0, f64::max);
    rows.iter().all(|row| row.residual(patches).is_negligible(scale * 1e2))
}

/// Points `Y + (i/(count+1))·(Z − Y)` strictly inside the edge.
fn edge_samples<S: Scalar>(y: &Point2<S>, z: &Point2<S>, count: usize) -> Vec<Point2<S>> {
    (1..=count)
        .map(|i| {
            let s = S::from_ratio(i as i64, count as i64 + 1);
            Point2::affine_combination(&[y, z], &[S::one() - s.clone(), s])
        })
        .collect()
}

/// Cross-edge derivatives of order `0..=r` agree at 7 points on the edge.
pub fn cross_derivatives_match<S: Scalar>(pa: &BezierPatch<S>, pb: &BezierPatch<S>, r: usize) -> Result<bool> {
    let adj = adjacency(pa.triangle(), pb.triangle())?;
    let t = pa.triangle();
    let (y, z) = (&t.v[adj.a], &t.v[adj.b]);
    let u = (z - y).perp();
    let scale = pa
        .coeffs()
        .iter()
        .chain(pb.coeffs())
        .map(|c| c.to_f64().abs())
        .fold(1.0, f64::max)
        * (u.norm_squared().to_f64().sqrt() / t.scale().max(1e-300)).max(1.0).powi(r as i32)
        * 1e4;
    for pt in edge_samples(y, z, 7) {
        for n in 0..=r {
            let dirs: Vec<Vector2<S>> = vec![u.clone(); n];
            let va = eval_derivative(pa, &pt, &dirs)?;
            let vb = eval_derivative(pb, &pt, &dirs)?;
            let ok = if S::EXACT {
                va == vb
            } else {
                (va.to_f64() - vb.to_f64()).abs() <= 1e-10 * scale.max(va.to_f64().abs())
            };
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether "all rows vanish" and "cross derivatives up to order `r` agree"
/// have the same truth value for this pair of patches.
pub fn rows_equivalent_to_derivative_match<S: Scalar>(
    rows: &[SmoothnessRow<S>],
    pa: &BezierPatch<S>,
    pb: &BezierPatch<S>,
    r: usize,
) -> Result<bool> {
    Ok(rows_vanish(rows, &[pa, pb]) == cross_derivatives_match(pa, pb, r)?)
}

/// Makes `pb` satisfy the rows by overwriting each c̃ slot (layer by layer)
/// with the value the row prescribes.
pub fn enforce_rows<S: Scalar>(rows: &[SmoothnessRow<S>], pa: &BezierPatch<S>, pb: &mut BezierPatch<S>) {
    for row in rows {
        let mut value = S::zero();
        let mut target = None;
        for (slot, w) in &row.terms {
            if slot.face == 1 {
                target = Some(slot.idx);
            } else {
                value.add_mul_assign(w, pa.coeff(slot.idx));
            }
        }
        if let Some(idx) = target {
            pb.set_coeff(idx, value);
        }
    }
}

/// `C^r` rows across every interior edge of a split, ordered by
/// (edge, n, j), with faces numbered as in the split.
pub fn split_rows<S: Scalar, Sp: Split<S>>(split: &Sp, r: usize, d: usize) -> Result<Vec<SmoothnessRow<S>>> {
    let mut rows = Vec::new();
    for edge in split.interior_edges() {
        let [f0, f1] = edge.faces;
        let local = cr_rows(&split.face_triangle(f0), &split.face_triangle(f1), r, d)?;
        rows.extend(local.iter().map(|row| row.map_faces(|f| if f == 0 { f0 } else { f1 })));
    }
    Ok(rows)
}

/// Serializable stencil: `(face, i, j, k, weight)` entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stencil {
    pub name: String,
    pub order: usize,
    pub terms: Vec<(usize, usize, usize, usize, String)>,
}

impl Stencil {
    pub fn from_row(name: &str, row: &SmoothnessRow<Rational>) -> Self {
        Self {
            name: name.to_string(),
            order: row.order,
            terms: row
                .terms
                .iter()
                .map(|(s, w)| (s.face, s.idx.i, s.idx.j, s.idx.k, format_rational(w)))
                .collect(),
        }
    }
}

/// The illustrative stencils on the unit-triangle 12-split:
///
/// * `bivariate_c{1,2,3}`: across ⟨v10,v6⟩ from ⟨v7,v10,v6⟩ to ⟨v9,v6,v10⟩, `j = 0`;
/// * `univariate_v1v7_c{1,2}`: equal-length collinear case (b1 = −1);
/// * `univariate_v6v7_c{1,2,3}`: spoke through v7 (b1 = −1/3);
/// * `univariate_v4v9_c3`: line v4–v10–v9 through the barycenter, where
///   ‖v9 − v10‖ = ‖v4 − v10‖/2 (b1 = −1/2).
pub fn example_stencils() -> Result<Vec<Stencil>> {
    let q = Rational::from_ratio;
    let unit = Triangle::new(
        Point2::from_ratios((0, 1), (0, 1)),
        Point2::from_ratios((1, 1), (0, 1)),
        Point2::from_ratios((0, 1), (1, 1)),
    );
    let s = ps12_split(&unit)?;
    let v = &s.vertices;
    let t = Triangle::new(v[6].clone(), v[9].clone(), v[5].clone());
    let tt = Triangle::new(v[8].clone(), v[5].clone(), v[9].clone());
    let rows = cr_rows(&t, &tt, 3, 5)?;
    let mut out = Vec::new();
    for n in 1..=3 {
        let row = rows.iter().find(|r| r.order == n && r.weight(CoeffSlot::new(1, MultiIndex::new(n, 5 - n, 0))).is_some());
        // j = 0 means v10 (first edge vertex after v7) carries exponent 0
        let row = row.ok_or(Error::MissingData(format!("bivariate row n={n}")))?;
        out.push(Stencil::from_row(&format!("bivariate_c{n}"), row));
    }
    for n in 1..=2 {
        out.push(Stencil::from_row(&format!("univariate_v1v7_c{n}"), &collinear_rows(&q(-1, 1), n, 5, 0)?));
    }
    for n in 1..=3 {
        out.push(Stencil::from_row(&format!("univariate_v6v7_c{n}"), &collinear_rows(&q(-1, 3), n, 5, 0)?));
    }
    out.push(Stencil::from_row("univariate_v4v9_c3", &collinear_rows(&q(-1, 2), 3, 5, 0)?));
    Ok(out)
}
