use crate::bb_core::geometry::{direction_coords, to_barycentric, BaryPoint, BaryVector, Point2, Triangle, Vector2};
use crate::error::{Error, Result};
use crate::scalar::{factorial, powi, Scalar};

/// Multi-index `(i, j, k)` of a B-coefficient; `i + j + k` is the degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl MultiIndex {
    pub const fn new(i: usize, j: usize, k: usize) -> Self {
        Self { i, j, k }
    }

    pub fn degree(&self) -> usize {
        self.i + self.j + self.k
    }

    pub fn as_array(&self) -> [usize; 3] {
        [self.i, self.j, self.k]
    }

    pub fn from_array(a: [usize; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    /// Position in the dense lexicographic layout for degree `d`.
    pub fn position(&self, d: usize) -> usize {
        let i = self.i;
        i * (d + 1) - i * i.saturating_sub(1) / 2 + self.j
    }

    /// All indices of degree `d`, in lexicographic order.
    pub fn all(d: usize) -> impl Iterator<Item = MultiIndex> {
        (0..=d).flat_map(move |i| (0..=d - i).map(move |j| MultiIndex::new(i, j, d - i - j)))
    }
}

pub fn coefficient_count(d: usize) -> usize {
    (d + 1) * (d + 2) / 2
}

/// `B^d_ijk(b) = d!/(i!j!k!) b1^i b2^j b3^k`.
pub fn bernstein_eval<S: Scalar>(d: usize, idx: MultiIndex, b: &BaryPoint<S>) -> Result<S> {
    if idx.degree() != d {
        return Err(Error::IndexDegreeMismatch {
            i: idx.i,
            j: idx.j,
            k: idx.k,
            degree: d,
        });
    }
    let multinomial = factorial(d) / (factorial(idx.i) * factorial(idx.j) * factorial(idx.k));
    Ok(S::from_i64(multinomial) * powi(&b.0[0], idx.i) * powi(&b.0[1], idx.j) * powi(&b.0[2], idx.k))
}

/// Polynomial of degree `d` on a triangle in Bernstein–Bézier form.
#[derive(Debug, Clone, PartialEq)]
pub struct BezierPatch<S> {
    degree: usize,
    triangle: Triangle<S>,
    coeffs: Vec<S>,
}

impl<S: Scalar> BezierPatch<S> {
    pub fn new(degree: usize, triangle: Triangle<S>, coeffs: Vec<S>) -> Result<Self> {
        let expected = coefficient_count(degree);
        if coeffs.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: coeffs.len(),
            });
        }
        Ok(Self {
            degree,
            triangle,
            coeffs,
        })
    }

    pub fn zero(degree: usize, triangle: Triangle<S>) -> Self {
        Self {
            degree,
            triangle,
            coeffs: vec![S::zero(); coefficient_count(degree)],
        }
    }

    pub fn constant(degree: usize, triangle: Triangle<S>, value: S) -> Self {
        Self {
            degree,
            triangle,
            coeffs: vec![value; coefficient_count(degree)],
        }
    }

    /// Builds a patch from a closure over multi-indices.
    pub fn from_fn(degree: usize, triangle: Triangle<S>, f: impl Fn(MultiIndex) -> S) -> Self {
        let coeffs = MultiIndex::all(degree).map(f).collect();
        Self {
            degree,
            triangle,
            coeffs,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn triangle(&self) -> &Triangle<S> {
        &self.triangle
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, idx: MultiIndex) -> &S {
        &self.coeffs[idx.position(self.degree)]
    }

    pub fn set_coeff(&mut self, idx: MultiIndex, value: S) {
        let pos = idx.position(self.degree);
        self.coeffs[pos] = value;
    }

    pub fn iter(&self) -> impl Iterator<Item = (MultiIndex, &S)> {
        MultiIndex::all(self.degree).zip(self.coeffs.iter())
    }

    /// de Casteljau evaluation at barycentric coordinates.
    pub fn eval_bary(&self, b: &BaryPoint<S>) -> S {
        let mut work = self.coeffs.clone();
        let mut r = self.degree;
        while r > 0 {
            work = blossom_step(&work, r, &b.0);
            r -= 1;
        }
        work.pop().unwrap_or_else(S::zero)
    }

    pub fn eval(&self, p: &Point2<S>) -> Result<S> {
        let b = to_barycentric(p, &self.triangle)?;
        Ok(self.eval_bary(&b))
    }

    /// Direct sum `Σ c_ijk B_ijk(b)`; the independent check of de Casteljau.
    pub fn eval_basis_sum(&self, b: &BaryPoint<S>) -> S {
        let mut acc = S::zero();
        for (idx, c) in self.iter() {
            let basis = bernstein_eval(self.degree, idx, b).expect("index matches degree");
            acc.add_mul_assign(c, &basis);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

/// One step of the recursion `c'_ijk = a1 c_{i+1,j,k} + a2 c_{i,j+1,k} + a3 c_{i,j,k+1}`,
/// taking degree-`r` coefficients to degree `r - 1`.
fn blossom_step<S: Scalar>(coeffs: &[S], r: usize, a: &[S; 3]) -> Vec<S> {
    let mut out = Vec::with_capacity(coefficient_count(r - 1));
    for idx in MultiIndex::all(r - 1) {
        let c1 = &coeffs[MultiIndex::new(idx.i + 1, idx.j, idx.k).position(r)];
        let c2 = &coeffs[MultiIndex::new(idx.i, idx.j + 1, idx.k).position(r)];
        let c3 = &coeffs[MultiIndex::new(idx.i, idx.j, idx.k + 1).position(r)];
        let mut v = S::zero();
        if !a[0].is_zero() {
            v.add_mul_assign(&a[0], c1);
        }
        if !a[1].is_zero() {
            v.add_mul_assign(&a[1], c2);
        }
        if !a[2].is_zero() {
            v.add_mul_assign(&a[2], c3);
        }
        out.push(v);
    }
    out
}

/// Degree `d - m` patch evaluating to `∇_{u_m} ··· ∇_{u_1} p`; the factor
/// `d!/(d-m)!` is folded into the coefficients.
pub fn derivative_patch<S: Scalar>(p: &BezierPatch<S>, dirs: &[BaryVector<S>]) -> Result<BezierPatch<S>> {
    let d = p.degree;
    let m = dirs.len();
    if m > d {
        return Err(Error::OrderExceedsDegree { order: m, degree: d });
    }
    let mut work = p.coeffs.clone();
    for (step, a) in dirs.iter().enumerate() {
        work = blossom_step(&work, d - step, &a.0);
    }
    let factor = S::from_i64(factorial(d) / factorial(d - m));
    for c in &mut work {
        *c *= factor.clone();
    }
    Ok(BezierPatch {
        degree: d - m,
        triangle: p.triangle.clone(),
        coeffs: work,
    })
}

/// `∇_{u_1} ··· ∇_{u_m} p` evaluated at `pt`.
pub fn eval_derivative<S: Scalar>(p: &BezierPatch<S>, pt: &Point2<S>, dirs: &[Vector2<S>]) -> Result<S> {
    if dirs.len() > p.degree {
        return Err(Error::OrderExceedsDegree {
            order: dirs.len(),
            degree: p.degree,
        });
    }
    let coords = dirs
        .iter()
        .map(|u| direction_coords(u, &p.triangle))
        .collect::<Result<Vec<_>>>()?;
    let dp = derivative_patch(p, &coords)?;
    dp.eval(pt)
}

/// Weights `w` with `∇_{dirs} p(pt) = Σ w_l c_l` over the dense coefficient layout.
pub fn derivative_weights<S: Scalar>(
    degree: usize,
    triangle: &Triangle<S>,
    pt: &Point2<S>,
    dirs: &[Vector2<S>],
) -> Result<Vec<S>> {
    let n = coefficient_count(degree);
    let mut weights = Vec::with_capacity(n);
    for l in 0..n {
        let mut coeffs = vec![S::zero(); n];
        coeffs[l] = S::one();
        let unit = BezierPatch::new(degree, triangle.clone(), coeffs)?;
        weights.push(eval_derivative(&unit, pt, dirs)?);
    }
    Ok(weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn unit() -> Triangle<Rational> {
        Triangle::new(
            Point2::from_ratios((0, 1), (0, 1)),
            Point2::from_ratios((1, 1), (0, 1)),
            Point2::from_ratios((0, 1), (1, 1)),
        )
    }

    /// B-form of x^5 on the unit triangle: x = b2, so x^5 = b2^5 and only
    /// c_{0,5,0} = 1.
    fn x5() -> BezierPatch<Rational> {
        BezierPatch::from_fn(5, unit(), |idx| if idx.j == 5 { q(1, 1) } else { q(0, 1) })
    }

    #[test]
    fn positions_are_dense_and_lexicographic() {
        for d in 0..7 {
            let all: Vec<_> = MultiIndex::all(d).collect();
            assert_eq!(all.len(), coefficient_count(d));
            for (n, idx) in all.iter().enumerate() {
                assert_eq!(idx.position(d), n);
            }
            assert!(all.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn bernstein_values() {
        let v = bernstein_eval(5, MultiIndex::new(5, 0, 0), &BaryPoint::<Rational>::vertex(0)).unwrap();
        assert_eq!(v, q(1, 1));
        let b = BaryPoint::new(q(1, 3), q(1, 3), q(1, 3));
        assert_eq!(bernstein_eval(2, MultiIndex::new(1, 1, 0), &b).unwrap(), q(2, 9));
        assert!(matches!(
            bernstein_eval(4, MultiIndex::new(1, 1, 0), &b),
            Err(Error::IndexDegreeMismatch { .. })
        ));
    }

    #[test]
    fn x5_value_and_derivative() {
        let p = x5();
        let pt = Point2::from_ratios((1, 2), (0, 1));
        assert_eq!(p.eval(&pt).unwrap(), q(1, 32));
        let t = Vector2::new(q(1, 1), q(0, 1));
        assert_eq!(eval_derivative(&p, &pt, &[t]).unwrap(), q(5, 16));
        assert_eq!(eval_derivative(&p, &pt, &[]).unwrap(), q(1, 32));
    }

    #[test]
    fn constant_patch_derivative_vanishes() {
        let p = BezierPatch::constant(5, unit(), q(7, 3));
        let dir = BaryVector::new(q(-1, 1), q(1, 2), q(1, 2));
        let dp = derivative_patch(&p, &[dir.clone(), dir]).unwrap();
        assert_eq!(dp.degree(), 3);
        assert!(dp.is_zero());
    }

    #[test]
    fn linear_patch_derivative_is_direction_coordinate() {
        // p = b1
        let p = BezierPatch::from_fn(1, unit(), |idx| if idx.i == 1 { q(1, 1) } else { q(0, 1) });
        let a = BaryVector::new(q(3, 7), q(-1, 7), q(-2, 7));
        let dp = derivative_patch(&p, &[a]).unwrap();
        assert_eq!(dp.coeffs(), &[q(3, 7)]);
    }

    #[test]
    fn first_derivative_carries_degree_factor() {
        // c_{5,0,0} = 1, direction (1,0,0): c^(1)_{4,0,0} = 1, scaled by 5!/4! = 5.
        let p = BezierPatch::from_fn(5, unit(), |idx| if idx.i == 5 { q(1, 1) } else { q(0, 1) });
        let dp = derivative_patch(&p, &[BaryVector::new(q(1, 1), q(0, 1), q(0, 1))]).unwrap();
        assert_eq!(dp.coeff(MultiIndex::new(4, 0, 0)), &q(5, 1));
    }

    #[test]
    fn order_exceeding_degree_is_error() {
        let p = BezierPatch::constant(1, unit(), q(1, 1));
        let a = BaryVector::new(q(-1, 1), q(1, 1), q(0, 1));
        assert!(matches!(
            derivative_patch(&p, &[a.clone(), a]),
            Err(Error::OrderExceedsDegree { order: 2, degree: 1 })
        ));
    }

    #[test]
    fn derivative_weights_match_patch_derivative() {
        let t = unit();
        let p = BezierPatch::from_fn(3, t.clone(), |idx| {
            q((idx.i * 3 + idx.j * 5) as i64 - 4, (idx.k + 1) as i64)
        });
        let pt = Point2::from_ratios((1, 5), (2, 7));
        let dirs = vec![Vector2::new(q(1, 2), q(-1, 3)), Vector2::new(q(0, 1), q(2, 1))];
        let w = derivative_weights(3, &t, &pt, &dirs).unwrap();
        let mut dot = q(0, 1);
        for (wi, c) in w.iter().zip(p.coeffs()) {
            dot += wi * c;
        }
        assert_eq!(dot, eval_derivative(&p, &pt, &dirs).unwrap());
    }
}
