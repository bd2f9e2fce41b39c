use serde::{Deserialize, Serialize};

use crate::bb_core::{eval_derivative, BezierPatch, Point2, Vector2};
use crate::error::{Error, Result};
use crate::scalar::{powi, Scalar};

/// Derivatives through order three at a point along a basis `(a, b)`:
/// `[f, f^a, f^b, f^aa, f^ab, f^bb, f^aaa, f^aab, f^abb, f^bbb]`.
///
/// With `(a, b) = (t, m)` this is the frame jet used by the rules; with the
/// Cartesian unit vectors it is a [`CornerJet`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Jet3<S> {
    pub v: [S; 10],
}

/// Jet in the Cartesian basis: `f, fx, fy, fxx, fxy, fyy, fxxx, fxxy, fxyy, fyyy`.
pub type CornerJet<S> = Jet3<S>;

pub const JET_LEN: usize = 10;

/// `(a-count, b-count)` for each slot.
pub const JET_ORDERS: [(usize, usize); 10] = [
    (0, 0),
    (1, 0),
    (0, 1),
    (2, 0),
    (1, 1),
    (0, 2),
    (3, 0),
    (2, 1),
    (1, 2),
    (0, 3),
];

pub fn jet_slot(a: usize, b: usize) -> usize {
    let o = a + b;
    assert!(o <= 3, "jet order {o} > 3");
    o * (o + 1) / 2 + b
}

impl<S: Scalar> Jet3<S> {
    pub fn new(v: [S; 10]) -> Self {
        Self { v }
    }

    pub fn zero() -> Self {
        Self {
            v: std::array::from_fn(|_| S::zero()),
        }
    }

    pub fn from_fn(f: impl FnMut(usize) -> S) -> Self {
        Self {
            v: std::array::from_fn(f),
        }
    }

    pub fn get(&self, a: usize, b: usize) -> &S {
        &self.v[jet_slot(a, b)]
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Jet3<T> {
        Jet3::from_fn(|i| f(&self.v[i]))
    }

    /// Re-expresses the jet in a new basis `(w1, w2)` given by its
    /// coordinates in the current basis (`w = c0·a + c1·b`).
    pub fn change_basis(&self, w1: &[S; 2], w2: &[S; 2]) -> Self {
        Self::from_fn(|slot| {
            let (na, nb) = JET_ORDERS[slot];
            let dirs: Vec<&[S; 2]> = std::iter::repeat(w1).take(na).chain(std::iter::repeat(w2).take(nb)).collect();
            let order = dirs.len();
            let mut acc = S::zero();
            // each of the order directions picks the a- or b-component
            for mask in 0..(1usize << order) {
                let mut w = S::one();
                let mut picked_b = 0;
                for (bit, d) in dirs.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        w *= d[1].clone();
                        picked_b += 1;
                    } else {
                        w *= d[0].clone();
                    }
                }
                if !w.is_zero() {
                    acc.add_mul_assign(&w, self.get(order - picked_b, picked_b));
                }
            }
            acc
        })
    }

    pub fn rescale(&self, s_a: &S, s_b: &S) -> Self {
        rescale_jet(self, s_a, s_b)
    }
}

/// Frame jet from Cartesian partials: `f^{t^a m^b}` is the derivative tensor
/// contracted `a` times with `t` and `b` times with `m`.
pub fn cartesian_to_frame<S: Scalar>(j: &CornerJet<S>, t: &Vector2<S>, m: &Vector2<S>) -> Jet3<S> {
    j.change_basis(&[t.x.clone(), t.y.clone()], &[m.x.clone(), m.y.clone()])
}

/// Inverse of [`cartesian_to_frame`].
pub fn frame_to_cartesian<S: Scalar>(j: &Jet3<S>, t: &Vector2<S>, m: &Vector2<S>) -> Result<CornerJet<S>> {
    let det = t.cross(m);
    if det.is_negligible(t.norm_squared().to_f64().max(m.norm_squared().to_f64())) {
        return Err(Error::SingularFrame);
    }
    // x̂ = ( m.y t − t.y m)/det, ŷ = (−m.x t + t.x m)/det
    let ex = [m.y.clone() / det.clone(), -t.y.clone() / det.clone()];
    let ey = [-m.x.clone() / det.clone(), t.x.clone() / det];
    Ok(j.change_basis(&ex, &ey))
}

/// Multiplies `f^{a^p b^q}` by `s_a^p s_b^q`.
pub fn rescale_jet<S: Scalar>(j: &Jet3<S>, s_a: &S, s_b: &S) -> Jet3<S> {
    Jet3::from_fn(|slot| {
        let (p, q) = JET_ORDERS[slot];
        j.v[slot].clone() * powi(s_a, p) * powi(s_b, q)
    })
}

/// Jet of a patch at `pt` along `(a, b)`.
pub fn patch_jet<S: Scalar>(p: &BezierPatch<S>, pt: &Point2<S>, a: &Vector2<S>, b: &Vector2<S>) -> Result<Jet3<S>> {
    let mut v: [S; 10] = std::array::from_fn(|_| S::zero());
    for (slot, &(na, nb)) in JET_ORDERS.iter().enumerate() {
        let dirs: Vec<Vector2<S>> = std::iter::repeat(a.clone())
            .take(na)
            .chain(std::iter::repeat(b.clone()).take(nb))
            .collect();
        v[slot] = eval_derivative(p, pt, &dirs)?;
    }
    Ok(Jet3::new(v))
}
