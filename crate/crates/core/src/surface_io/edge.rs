//! Conversion of normal-direction edge data to the medial data of each
//! adjacent triangle.
//!
//! Along an edge the spline restricts to a C³ piecewise quintic with a break
//! at the midpoint, so the corner jets fix its tangential derivatives. Its
//! first cross derivative restricts to a C² piecewise quartic, fixed by the
//! corner jets and the midpoint value. The medial derivatives then follow
//! from `m = α n + β t`.

use crate::bb_core::{Point2, Vector2};
use crate::error::Result;
use crate::hermite::jet::{cartesian_to_frame, CornerJet};
use crate::linalg::{solve, SparseMatrix};
use crate::macro_solver::EdgeData;
use crate::scalar::{powi, Scalar};

/// Two polynomial pieces on `[0, 1/2]` and `[1/2, 1]`, monomial coefficients
/// in the global parameter `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPiece<S> {
    pub left: Vec<S>,
    pub right: Vec<S>,
}

fn falling(k: usize, l: usize) -> i64 {
    (0..l).fold(1i64, |f, i| f * (k - i) as i64)
}

/// Row of `D^l [u^k](u)` for `k = 0..=d`.
fn deriv_row<S: Scalar>(d: usize, l: usize, u: &S) -> Vec<S> {
    (0..=d)
        .map(|k| if k < l { S::zero() } else { S::from_i64(falling(k, l)) * powi(u, k - l) })
        .collect()
}

impl<S: Scalar> TwoPiece<S> {
    /// `l`-th derivative at `u`; the left piece is used at the break.
    pub fn deriv(&self, l: usize, u: &S) -> S {
        let half = S::from_ratio(1, 2);
        let c = if *u <= half { &self.left } else { &self.right };
        deriv_row::<S>(c.len() - 1, l, u).iter().zip(c).fold(S::zero(), |acc, (r, c)| acc + r.clone() * c.clone())
    }
}

/// Degree-`d`, `C^r` two-piece interpolant of `(u, order, value)` conditions.
pub fn two_piece_spline<S: Scalar>(d: usize, r: usize, conds: &[(S, usize, S)]) -> Result<TwoPiece<S>> {
    let n = d + 1;
    let half = S::from_ratio(1, 2);
    let mut a = SparseMatrix::new(2 * n);
    let mut b = Vec::new();
    for l in 0..=r {
        let row = deriv_row::<S>(d, l, &half);
        let mut entries: Vec<(usize, S)> = row.iter().cloned().enumerate().collect();
        entries.extend(row.into_iter().enumerate().map(|(k, v)| (n + k, -v)));
        a.push_row(entries);
        b.push(S::zero());
    }
    for (u, l, v) in conds {
        let off = if *u <= half { 0 } else { n };
        a.push_row(deriv_row::<S>(d, *l, u).into_iter().enumerate().map(|(k, w)| (off + k, w)).collect());
        b.push(v.clone());
    }
    let x = solve(&a, &b)?;
    Ok(TwoPiece {
        left: x[..n].to_vec(),
        right: x[n..].to_vec(),
    })
}

/// Edge data along the unnormalized normal `N = rot90(T)`, `T = P_j − P_i`,
/// `i < j`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalEdgeData<S> {
    pub d1_mid: S,
    pub d2_quarter_near_i: S,
    pub d2_quarter_near_j: S,
}

/// Second derivatives along `T` and mixed `N T` at the two quarterpoints, and
/// the first derivative along `T` at the midpoint, implied by the corner jets
/// and the normal data.
struct EdgeDerivatives<S> {
    t_mid: S,
    tt: [S; 2],
    nt: [S; 2],
}

fn edge_derivatives<S: Scalar>(
    ji: &CornerJet<S>,
    jj: &CornerJet<S>,
    t: &Vector2<S>,
    n: &Vector2<S>,
    normal: &NormalEdgeData<S>,
) -> Result<EdgeDerivatives<S>> {
    let (fi, fj) = (cartesian_to_frame(ji, t, n), cartesian_to_frame(jj, t, n));
    let (zero, one) = (S::zero(), S::one());
    let mut conds = Vec::new();
    for k in 0..4 {
        conds.push((zero.clone(), k, fi.get(k, 0).clone()));
        conds.push((one.clone(), k, fj.get(k, 0).clone()));
    }
    let tang = two_piece_spline(5, 3, &conds)?;
    let mut conds = vec![(S::from_ratio(1, 2), 0, normal.d1_mid.clone())];
    for k in 0..3 {
        conds.push((zero.clone(), k, fi.get(k, 1).clone()));
        conds.push((one.clone(), k, fj.get(k, 1).clone()));
    }
    let cross = two_piece_spline(4, 2, &conds)?;
    let quarters = [S::from_ratio(1, 4), S::from_ratio(3, 4)];
    Ok(EdgeDerivatives {
        t_mid: tang.deriv(1, &S::from_ratio(1, 2)),
        tt: quarters.clone().map(|u| tang.deriv(2, &u)),
        nt: quarters.map(|u| cross.deriv(1, &u)),
    })
}

/// `(α, β)` with `m = α N + β T` for the edge `pi → pj` seen from `vx`.
fn medial_coords<S: Scalar>(pi: &Point2<S>, pj: &Point2<S>, vx: &Point2<S>) -> (Vector2<S>, Vector2<S>, S, S) {
    let t = pj - pi;
    let n = t.perp();
    let m = &pi.midpoint(pj) - vx;
    let len2 = t.norm_squared();
    let alpha = m.dot(&n) / len2.clone();
    let beta = m.dot(&t) / len2;
    (t, n, alpha, beta)
}

/// Medial data for the triangle whose edge opposite `vx` runs between
/// `pi` and `pj` (`i < j` in mesh order). `y_is_i` tells whether the
/// triangle's first edge corner `Y` is `pi`.
#[allow(clippy::too_many_arguments)]
pub fn normal_to_medial<S: Scalar>(
    pi: &Point2<S>,
    pj: &Point2<S>,
    vx: &Point2<S>,
    ji: &CornerJet<S>,
    jj: &CornerJet<S>,
    normal: &NormalEdgeData<S>,
    y_is_i: bool,
) -> Result<EdgeData<S>> {
    let (t, n, alpha, beta) = medial_coords(pi, pj, vx);
    let d = edge_derivatives(ji, jj, &t, &n, normal)?;
    let two = S::from_i64(2);
    let second = |k: usize, nn: &S| {
        alpha.clone() * alpha.clone() * nn.clone()
            + two.clone() * alpha.clone() * beta.clone() * d.nt[k].clone()
            + beta.clone() * beta.clone() * d.tt[k].clone()
    };
    let near_i = second(0, &normal.d2_quarter_near_i);
    let near_j = second(1, &normal.d2_quarter_near_j);
    let d1_mid = alpha.clone() * normal.d1_mid.clone() + beta.clone() * d.t_mid;
    let (near_y, near_z) = if y_is_i { (near_i, near_j) } else { (near_j, near_i) };
    Ok(EdgeData {
        d1_mid,
        d2_quarter_near_y: near_y,
        d2_quarter_near_z: near_z,
    })
}

/// Inverse of [`normal_to_medial`]; `medial` is given near `i` / near `j`.
pub fn medial_to_normal<S: Scalar>(
    pi: &Point2<S>,
    pj: &Point2<S>,
    vx: &Point2<S>,
    ji: &CornerJet<S>,
    jj: &CornerJet<S>,
    medial: &NormalEdgeData<S>,
) -> Result<NormalEdgeData<S>> {
    let (t, n, alpha, beta) = medial_coords(pi, pj, vx);
    // the tangential part does not depend on the normal data
    let probe = NormalEdgeData {
        d1_mid: S::zero(),
        d2_quarter_near_i: S::zero(),
        d2_quarter_near_j: S::zero(),
    };
    let t_mid = edge_derivatives(ji, jj, &t, &n, &probe)?.t_mid;
    let d1_mid = (medial.d1_mid.clone() - beta.clone() * t_mid) / alpha.clone();
    let with_mid = NormalEdgeData { d1_mid: d1_mid.clone(), ..probe };
    let d = edge_derivatives(ji, jj, &t, &n, &with_mid)?;
    let two = S::from_i64(2);
    let second = |k: usize, mm: &S| {
        (mm.clone()
            - two.clone() * alpha.clone() * beta.clone() * d.nt[k].clone()
            - beta.clone() * beta.clone() * d.tt[k].clone())
            / (alpha.clone() * alpha.clone())
    };
    Ok(NormalEdgeData {
        d1_mid,
        d2_quarter_near_i: second(0, &medial.d2_quarter_near_i),
        d2_quarter_near_j: second(1, &medial.d2_quarter_near_j),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::surface_io::poly::Poly2;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn two_piece_reproduces_a_quintic() {
        // u⁵ − u² has matching jets, so the interpolant is the polynomial itself
        let f = |l: usize, u: &Rational| -> Rational {
            let a = if l <= 5 { Rational::from_i64(falling(5, l)) * powi(u, 5 - l) } else { q(0, 1) };
            let b = if l <= 2 { Rational::from_i64(falling(2, l)) * powi(u, 2 - l) } else { q(0, 1) };
            a - b
        };
        let mut conds = Vec::new();
        for k in 0..4 {
            conds.push((q(0, 1), k, f(k, &q(0, 1))));
            conds.push((q(1, 1), k, f(k, &q(1, 1))));
        }
        let s = two_piece_spline(5, 3, &conds).unwrap();
        for u in [q(1, 4), q(1, 2), q(2, 3)] {
            for l in 0..4 {
                assert_eq!(s.deriv(l, &u), f(l, &u));
            }
        }
    }

    #[test]
    fn polynomial_normal_data_converts_to_medial_derivatives() {
        let p = Poly2::from_terms([
            ((5, 0), q(1, 3)),
            ((2, 3), q(-2, 1)),
            ((1, 4), q(3, 5)),
            ((0, 2), q(1, 1)),
            ((1, 1), q(-7, 2)),
        ]);
        let (pi, pj, vx) = (
            Point2::from_ratios((1, 2), (-1, 3)),
            Point2::from_ratios((2, 1), (1, 5)),
            Point2::from_ratios((0, 1), (1, 1)),
        );
        let t = &pj - &pi;
        let n = t.perp();
        let mid = pi.midpoint(&pj);
        let qi = crate::bb_core::Point2::affine_combination(&[&pi, &pj], &[q(3, 4), q(1, 4)]);
        let qj = crate::bb_core::Point2::affine_combination(&[&pi, &pj], &[q(1, 4), q(3, 4)]);
        let normal = NormalEdgeData {
            d1_mid: p.jet(&mid, &n, &t).v[1].clone(),
            d2_quarter_near_i: p.jet(&qi, &n, &t).v[3].clone(),
            d2_quarter_near_j: p.jet(&qj, &n, &t).v[3].clone(),
        };
        let (ji, jj) = (p.cartesian_jet(&pi), p.cartesian_jet(&pj));
        let m = &mid - &vx;
        for y_is_i in [true, false] {
            let e = normal_to_medial(&pi, &pj, &vx, &ji, &jj, &normal, y_is_i).unwrap();
            assert_eq!(e.d1_mid, p.jet(&mid, &m, &t).v[1]);
            let (ny, nz) = if y_is_i { (&qi, &qj) } else { (&qj, &qi) };
            assert_eq!(e.d2_quarter_near_y, p.jet(ny, &m, &t).v[3]);
            assert_eq!(e.d2_quarter_near_z, p.jet(nz, &m, &t).v[3]);
        }
        let (ni, nj) = (p.jet(&qi, &m, &t).v[3].clone(), p.jet(&qj, &m, &t).v[3].clone());
        let medial = NormalEdgeData {
            d1_mid: p.jet(&mid, &m, &t).v[1].clone(),
            d2_quarter_near_i: ni,
            d2_quarter_near_j: nj,
        };
        assert_eq!(medial_to_normal(&pi, &pj, &vx, &ji, &jj, &medial).unwrap(), normal);
    }
}
