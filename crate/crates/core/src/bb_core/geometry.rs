use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point2<S> {
    pub x: S,
    pub y: S,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vector2<S> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> Point2<S> {
    pub fn new(x: S, y: S) -> Self {
        Self { x, y }
    }

    pub fn from_ratios(x: (i64, i64), y: (i64, i64)) -> Self {
        Self::new(S::from_ratio(x.0, x.1), S::from_ratio(y.0, y.1))
    }

    pub fn origin() -> Self {
        Self::new(S::zero(), S::zero())
    }

    /// `Σ w_i p_i` for weights summing to one.
    pub fn affine_combination(points: &[&Point2<S>], weights: &[S]) -> Self {
        let mut x = S::zero();
        let mut y = S::zero();
        for (p, w) in points.iter().zip(weights) {
            x.add_mul_assign(w, &p.x);
            y.add_mul_assign(w, &p.y);
        }
        Self::new(x, y)
    }

    pub fn midpoint(&self, other: &Self) -> Self {
        let half = S::from_ratio(1, 2);
        Self::new(
            (self.x.clone() + other.x.clone()) * half.clone(),
            (self.y.clone() + other.y.clone()) * half,
        )
    }

    pub fn to_vector(&self) -> Vector2<S> {
        Vector2::new(self.x.clone(), self.y.clone())
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [self.x.to_f64(), self.y.to_f64()]
    }

    /// Coordinate equality (exact, or relative to `scale` in float mode).
    pub fn coincides(&self, other: &Self, scale: f64) -> bool {
        self.x.near(&other.x, scale) && self.y.near(&other.y, scale)
    }
}

impl<S: Scalar> Vector2<S> {
    pub fn new(x: S, y: S) -> Self {
        Self { x, y }
    }

    pub fn zero() -> Self {
        Self::new(S::zero(), S::zero())
    }

    pub fn dot(&self, other: &Self) -> S {
        self.x.clone() * other.x.clone() + self.y.clone() * other.y.clone()
    }

    pub fn cross(&self, other: &Self) -> S {
        self.x.clone() * other.y.clone() - self.y.clone() * other.x.clone()
    }

    /// Rotation by +90 degrees.
    pub fn perp(&self) -> Self {
        Self::new(-self.y.clone(), self.x.clone())
    }

    pub fn scale(&self, s: &S) -> Self {
        Self::new(self.x.clone() * s.clone(), self.y.clone() * s.clone())
    }

    pub fn norm_squared(&self) -> S {
        self.dot(self)
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.x.clone(), -self.y.clone())
    }
}

impl<S: Scalar> Sub for &Point2<S> {
    type Output = Vector2<S>;
    fn sub(self, rhs: Self) -> Vector2<S> {
        Vector2::new(self.x.clone() - rhs.x.clone(), self.y.clone() - rhs.y.clone())
    }
}

impl<S: Scalar> Add<&Vector2<S>> for &Point2<S> {
    type Output = Point2<S>;
    fn add(self, rhs: &Vector2<S>) -> Point2<S> {
        Point2::new(self.x.clone() + rhs.x.clone(), self.y.clone() + rhs.y.clone())
    }
}

impl<S: Scalar> Add for &Vector2<S> {
    type Output = Vector2<S>;
    fn add(self, rhs: Self) -> Vector2<S> {
        Vector2::new(self.x.clone() + rhs.x.clone(), self.y.clone() + rhs.y.clone())
    }
}

impl<S: Scalar> Sub for &Vector2<S> {
    type Output = Vector2<S>;
    fn sub(self, rhs: Self) -> Vector2<S> {
        Vector2::new(self.x.clone() - rhs.x.clone(), self.y.clone() - rhs.y.clone())
    }
}

impl<S: Scalar> Mul<&S> for &Vector2<S> {
    type Output = Vector2<S>;
    fn mul(self, rhs: &S) -> Vector2<S> {
        self.scale(rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Triangle<S> {
    pub v: [Point2<S>; 3],
}

impl<S: Scalar> Triangle<S> {
    pub fn new(v1: Point2<S>, v2: Point2<S>, v3: Point2<S>) -> Self {
        Self { v: [v1, v2, v3] }
    }

    /// Twice the signed area (positive for counterclockwise corners).
    pub fn signed_area2(&self) -> S {
        (&self.v[1] - &self.v[0]).cross(&(&self.v[2] - &self.v[0]))
    }

    pub fn signed_area(&self) -> S {
        self.signed_area2() * S::from_ratio(1, 2)
    }

    /// Largest bounding-box side length, used as a scale for float tolerances.
    pub fn scale(&self) -> f64 {
        let p: Vec<[f64; 2]> = self.v.iter().map(|p| p.to_f64()).collect();
        let span = |k: usize| {
            let lo = p.iter().map(|q| q[k]).fold(f64::INFINITY, f64::min);
            let hi = p.iter().map(|q| q[k]).fold(f64::NEG_INFINITY, f64::max);
            hi - lo
        };
        span(0).max(span(1))
    }

    pub fn check_nondegenerate(&self) -> Result<()> {
        let area = self.signed_area();
        let degenerate = if S::EXACT {
            area.is_zero()
        } else {
            let s = self.scale();
            !(area.to_f64().abs() >= 1e-12 * s * s) || !area.to_f64().is_finite()
        };
        if degenerate {
            Err(Error::DegenerateTriangle {
                area: area.to_f64(),
            })
        } else {
            Ok(())
        }
    }

    pub fn is_counterclockwise(&self) -> bool {
        self.signed_area2() > S::zero()
    }

    pub fn barycenter(&self) -> Point2<S> {
        let third = S::from_ratio(1, 3);
        Point2::affine_combination(
            &[&self.v[0], &self.v[1], &self.v[2]],
            &[third.clone(), third.clone(), third],
        )
    }

    /// Point with the given barycentric coordinates.
    pub fn point_at(&self, b: &BaryPoint<S>) -> Point2<S> {
        Point2::affine_combination(&[&self.v[0], &self.v[1], &self.v[2]], &b.0)
    }

    /// Closed-triangle membership.
    pub fn contains(&self, p: &Point2<S>) -> Result<bool> {
        let b = to_barycentric(p, self)?;
        Ok(b.0.iter().all(|c| *c >= S::zero() || c.is_negligible(1.0)))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Triangle<T> {
        let m = |p: &Point2<S>| Point2::new(f(&p.x), f(&p.y));
        Triangle::new(m(&self.v[0]), m(&self.v[1]), m(&self.v[2]))
    }
}

/// Barycentric coordinates of a point; they sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct BaryPoint<S>(pub [S; 3]);

/// Directional coordinates of a vector; they sum to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct BaryVector<S>(pub [S; 3]);

impl<S: Scalar> BaryPoint<S> {
    pub fn new(b1: S, b2: S, b3: S) -> Self {
        Self([b1, b2, b3])
    }

    pub fn vertex(i: usize) -> Self {
        let mut b = [S::zero(), S::zero(), S::zero()];
        b[i] = S::one();
        Self(b)
    }
}

impl<S: Scalar> BaryVector<S> {
    pub fn new(a1: S, a2: S, a3: S) -> Self {
        Self([a1, a2, a3])
    }
}

/// Solves `p = b1 v1 + b2 v2 + b3 v3`, `b1 + b2 + b3 = 1`.
pub fn to_barycentric<S: Scalar>(p: &Point2<S>, t: &Triangle<S>) -> Result<BaryPoint<S>> {
    t.check_nondegenerate()?;
    let det = t.signed_area2();
    let e1 = &t.v[1] - &t.v[0];
    let e2 = &t.v[2] - &t.v[0];
    let r = p - &t.v[0];
    let b2 = r.cross(&e2) / det.clone();
    let b3 = e1.cross(&r) / det;
    let b1 = S::one() - b2.clone() - b3.clone();
    Ok(BaryPoint::new(b1, b2, b3))
}

/// Directional coordinates `(a1, a2, a3)` with `u = a1 v1 + a2 v2 + a3 v3`.
pub fn direction_coords<S: Scalar>(u: &Vector2<S>, t: &Triangle<S>) -> Result<BaryVector<S>> {
    t.check_nondegenerate()?;
    let det = t.signed_area2();
    let e1 = &t.v[1] - &t.v[0];
    let e2 = &t.v[2] - &t.v[0];
    let a2 = u.cross(&e2) / det.clone();
    let a3 = e1.cross(u) / det;
    let a1 = -(a2.clone() + a3.clone());
    Ok(BaryVector::new(a1, a2, a3))
}
