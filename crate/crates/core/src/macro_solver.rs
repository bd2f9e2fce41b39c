//! Nodal functionals, the macro-element linear systems and rule derivation.
//!
//! Unknowns are the B-coefficients of the split's faces, face-major, each
//! face in the dense lexicographic layout (21 per quintic face). Rows are
//! the nodal conditions (in functional order) followed by the smoothness
//! rows ordered by (interior edge, n, j).

use serde::{Deserialize, Serialize};

use crate::bb_core::{coefficient_count, MultiIndex, derivative_weights, eval_derivative, BezierPatch, Point2, Triangle, Vector2};
use crate::error::{Error, Result};
use crate::hermite::jet::{CornerJet, JET_ORDERS};
use crate::linalg::{reduce, SparseMatrix};
use crate::scalar::{format_rational, Rational, Scalar};
use crate::smoothness::{split_rows, CoeffSlot};
use crate::splits::{edge_corners, edge_frame, edge_points, Ps12Split, Ps6Split, Split};

pub const DEGREE: usize = 5;
pub const SMOOTHNESS: usize = 3;

const CORNER_NAMES: [&str; 3] = ["A", "B", "C"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionalKind {
    /// `a` derivatives along the first basis direction, `b` along the second.
    Corner { corner: usize, a: usize, b: usize },
    /// First medial derivative at the midpoint of the edge opposite `edge`.
    Midpoint { edge: usize },
    /// Second medial derivative at a quarterpoint; `near_z` picks the one
    /// next to the second edge corner.
    Quarter { edge: usize, near_z: bool },
}

/// Directions used for corner derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CornerBasis {
    Cartesian,
    /// `(t, m)` of the edge opposite the given corner.
    EdgeFrame(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodalFunctional<S> {
    pub kind: FunctionalKind,
    pub label: String,
    pub carrier: Point2<S>,
    pub dirs: Vec<Vector2<S>>,
}

fn derivative_label(a: usize, b: usize, da: &str, db: &str) -> String {
    if a + b == 0 {
        "f".to_string()
    } else {
        format!("f^{}{}", da.repeat(a), db.repeat(b))
    }
}

fn medial_name(x: usize) -> String {
    if x == 2 {
        "m".to_string()
    } else {
        format!("m{}", CORNER_NAMES[x])
    }
}

fn corner_functionals<S: Scalar>(parent: &Triangle<S>, basis: CornerBasis) -> Result<Vec<NodalFunctional<S>>> {
    let (d1, d2, n1, n2) = match basis {
        CornerBasis::Cartesian => (
            Vector2::new(S::one(), S::zero()),
            Vector2::new(S::zero(), S::one()),
            "x",
            "y",
        ),
        CornerBasis::EdgeFrame(x) => {
            let f = edge_frame(parent, x)?;
            (f.t, f.m, "t", "m")
        }
    };
    let mut out = Vec::new();
    for corner in 0..3 {
        for &(a, b) in JET_ORDERS.iter() {
            let dirs = std::iter::repeat(d1.clone()).take(a).chain(std::iter::repeat(d2.clone()).take(b)).collect();
            out.push(NodalFunctional {
                kind: FunctionalKind::Corner { corner, a, b },
                label: format!("{}_{}", derivative_label(a, b, n1, n2), CORNER_NAMES[corner]),
                carrier: parent.v[corner].clone(),
                dirs,
            });
        }
    }
    Ok(out)
}

fn edge_functionals<S: Scalar>(parent: &Triangle<S>) -> Result<Vec<NodalFunctional<S>>> {
    let mut out = Vec::new();
    for x in 0..3 {
        let frame = edge_frame(parent, x)?;
        let (y, z) = edge_corners(x);
        let pts = edge_points(&parent.v[y], &parent.v[z]);
        let (ny, nz) = (CORNER_NAMES[y], CORNER_NAMES[z]);
        let m = medial_name(x);
        out.push(NodalFunctional {
            kind: FunctionalKind::Midpoint { edge: x },
            label: format!("f^{m}_{ny}{nz}"),
            carrier: pts.midpoint,
            dirs: vec![frame.m.clone()],
        });
        out.push(NodalFunctional {
            kind: FunctionalKind::Quarter { edge: x, near_z: false },
            label: format!("f^{m}{m}_{ny}{ny}{nz}"),
            carrier: pts.quarter_near_y,
            dirs: vec![frame.m.clone(), frame.m.clone()],
        });
        out.push(NodalFunctional {
            kind: FunctionalKind::Quarter { edge: x, near_z: true },
            label: format!("f^{m}{m}_{ny}{nz}{nz}"),
            carrier: pts.quarter_near_z,
            dirs: vec![frame.m.clone(), frame.m],
        });
    }
    Ok(out)
}

/// The 39 functionals: 10 corner derivatives per corner, then per edge
/// (opposite corner 0, 1, 2) the midpoint and the two quarterpoint data.
pub fn lambda12<S: Scalar>(split: &Ps12Split<S>, basis: CornerBasis) -> Result<Vec<NodalFunctional<S>>> {
    let mut out = corner_functionals(&split.parent, basis)?;
    out.extend(edge_functionals(&split.parent)?);
    Ok(out)
}

/// The 30 corner functionals.
pub fn lambda6<S: Scalar>(split: &Ps6Split<S>, basis: CornerBasis) -> Result<Vec<NodalFunctional<S>>> {
    corner_functionals(&split.parent, basis)
}

/// Medial cross-boundary data on one macro edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeData<S> {
    pub d1_mid: S,
    pub d2_quarter_near_y: S,
    pub d2_quarter_near_z: S,
}

impl<S: Scalar> EdgeData<S> {
    pub fn zero() -> Self {
        Self {
            d1_mid: S::zero(),
            d2_quarter_near_y: S::zero(),
            d2_quarter_near_z: S::zero(),
        }
    }
}

/// The 39 scalars of one macro-element: Cartesian corner jets and medial
/// edge data for the edges opposite corners 0, 1, 2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MacroElementData<S> {
    pub corner_jets: [CornerJet<S>; 3],
    pub edges: [EdgeData<S>; 3],
}

impl<S: Scalar> MacroElementData<S> {
    /// Data in the order of `lambda12(_, CornerBasis::Cartesian)`.
    pub fn to_vec(&self) -> Vec<S> {
        let mut out: Vec<S> = self.corner_jets.iter().flat_map(|j| j.v.iter().cloned()).collect();
        for e in &self.edges {
            out.extend([e.d1_mid.clone(), e.d2_quarter_near_y.clone(), e.d2_quarter_near_z.clone()]);
        }
        out
    }

    pub fn from_slice(v: &[S]) -> Result<Self> {
        if v.len() != 39 {
            return Err(Error::LengthMismatch { expected: 39, got: v.len() });
        }
        let jet = |c: usize| CornerJet::from_fn(|i| v[10 * c + i].clone());
        let edge = |x: usize| EdgeData {
            d1_mid: v[30 + 3 * x].clone(),
            d2_quarter_near_y: v[31 + 3 * x].clone(),
            d2_quarter_near_z: v[32 + 3 * x].clone(),
        };
        Ok(Self {
            corner_jets: [jet(0), jet(1), jet(2)],
            edges: [edge(0), edge(1), edge(2)],
        })
    }
}

/// Piecewise quintic on the faces of a split.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitSpline<S> {
    pub patches: Vec<BezierPatch<S>>,
}

pub type SplineOn12Split<S> = SplitSpline<S>;
pub type SplineOn6Split<S> = SplitSpline<S>;

impl<S: Scalar> SplitSpline<S> {
    pub fn locate(&self, p: &Point2<S>) -> Result<usize> {
        for (f, patch) in self.patches.iter().enumerate() {
            if patch.triangle().contains(p)? {
                return Ok(f);
            }
        }
        Err(Error::CarrierOutsideSplit)
    }

    pub fn coefficients(&self) -> Vec<S> {
        self.patches.iter().flat_map(|p| p.coeffs().iter().cloned()).collect()
    }
}

pub fn apply_functional<S: Scalar>(l: &NodalFunctional<S>, s: &SplitSpline<S>) -> Result<S> {
    apply_functional_on_face(l, s, s.locate(&l.carrier)?)
}

pub fn apply_functional_on_face<S: Scalar>(l: &NodalFunctional<S>, s: &SplitSpline<S>, face: usize) -> Result<S> {
    eval_derivative(&s.patches[face], &l.carrier, &l.dirs)
}

/// Assembled and factored macro-element system.
#[derive(Debug, Clone)]
pub struct MacroSystem<S> {
    pub functionals: Vec<NodalFunctional<S>>,
    pub triangles: Vec<Triangle<S>>,
    pub matrix: SparseMatrix<S>,
    /// `operator[u][i]`: coefficient `u` of the spline with unit datum `i`.
    operator: Vec<Vec<S>>,
}

impl<S: Scalar> MacroSystem<S> {
    pub fn new<Sp: Split<S>>(split: &Sp, functionals: Vec<NodalFunctional<S>>) -> Result<Self> {
        split.parent().check_nondegenerate()?;
        let matrix = assemble_system(split, &functionals)?;
        let mut rhs = SparseMatrix::new(functionals.len());
        for i in 0..matrix.nrows() {
            if i < functionals.len() {
                rhs.push_row(vec![(i, S::one())]);
            } else {
                rhs.push_row(Vec::new());
            }
        }
        let operator = reduce(&matrix, Some(&rhs)).solution()?;
        let triangles = (0..split.faces().len()).map(|f| split.face_triangle(f)).collect();
        Ok(Self {
            functionals,
            triangles,
            matrix,
            operator,
        })
    }

    pub fn nrows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn nunknowns(&self) -> usize {
        self.matrix.ncols()
    }

    /// Column `i` of the solution operator: the coefficients of the nodal
    /// basis function dual to functional `i`.
    pub fn basis_coefficients(&self, i: usize) -> Vec<S> {
        self.operator.iter().map(|row| row[i].clone()).collect()
    }

    pub fn solve_coefficients(&self, data: &[S]) -> Result<Vec<S>> {
        if data.len() != self.functionals.len() {
            return Err(Error::LengthMismatch {
                expected: self.functionals.len(),
                got: data.len(),
            });
        }
        Ok(self
            .operator
            .iter()
            .map(|row| {
                let mut acc = S::zero();
                for (w, d) in row.iter().zip(data) {
                    if !w.is_zero() {
                        acc.add_mul_assign(w, d);
                    }
                }
                acc
            })
            .collect())
    }

    pub fn spline_from_coefficients(&self, coeffs: &[S]) -> Result<SplitSpline<S>> {
        let n = coefficient_count(DEGREE);
        let patches = self
            .triangles
            .iter()
            .enumerate()
            .map(|(f, t)| BezierPatch::new(DEGREE, t.clone(), coeffs[f * n..(f + 1) * n].to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Ok(SplitSpline { patches })
    }

    pub fn solve(&self, data: &[S]) -> Result<SplitSpline<S>> {
        self.spline_from_coefficients(&self.solve_coefficients(data)?)
    }

    /// `A x − b` for the full system.
    pub fn residual(&self, data: &[S], coeffs: &[S]) -> Vec<S> {
        let mut r = self.matrix.mul_vec(coeffs);
        for (ri, d) in r.iter_mut().zip(data) {
            *ri -= d.clone();
        }
        r
    }

    /// Weights `w` with `λ(s) = Σ w_u c_u` for a functional at `carrier`.
    pub fn functional_weights(&self, carrier: &Point2<S>, dirs: &[Vector2<S>]) -> Result<Vec<(usize, S)>> {
        let n = coefficient_count(DEGREE);
        let face = locate_in(&self.triangles, carrier)?;
        let w = derivative_weights(DEGREE, &self.triangles[face], carrier, dirs)?;
        Ok(w.into_iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(l, v)| (face * n + l, v))
            .collect())
    }

    /// Coefficients of a functional as a combination of the data functionals.
    pub fn functional_in_data(&self, carrier: &Point2<S>, dirs: &[Vector2<S>]) -> Result<Vec<S>> {
        let w = self.functional_weights(carrier, dirs)?;
        let mut out = vec![S::zero(); self.functionals.len()];
        for (u, wu) in &w {
            for (i, m) in self.operator[*u].iter().enumerate() {
                if !m.is_zero() {
                    out[i].add_mul_assign(wu, m);
                }
            }
        }
        Ok(out)
    }
}

fn locate_in<S: Scalar>(triangles: &[Triangle<S>], p: &Point2<S>) -> Result<usize> {
    for (f, t) in triangles.iter().enumerate() {
        if t.contains(p)? {
            return Ok(f);
        }
    }
    Err(Error::CarrierOutsideSplit)
}

/// Nodal rows, then smoothness rows.
/// Nodal rows only.
pub fn assemble_nodal<S: Scalar, Sp: Split<S>>(split: &Sp, functionals: &[NodalFunctional<S>]) -> Result<SparseMatrix<S>> {
    let n = coefficient_count(DEGREE);
    let nfaces = split.faces().len();
    let mut a = SparseMatrix::new(nfaces * n);
    for l in functionals {
        let face = split.locate(&l.carrier)?;
        let w = derivative_weights(DEGREE, &split.face_triangle(face), &l.carrier, &l.dirs)?;
        a.push_row(w.into_iter().enumerate().map(|(i, v)| (face * n + i, v)).collect());
    }
    Ok(a)
}

pub fn assemble_system<S: Scalar, Sp: Split<S>>(split: &Sp, functionals: &[NodalFunctional<S>]) -> Result<SparseMatrix<S>> {
    let n = coefficient_count(DEGREE);
    let mut a = assemble_nodal(split, functionals)?;
    for row in split_rows(split, SMOOTHNESS, DEGREE)? {
        a.push_row(row.terms.into_iter().map(|(s, w)| (s.face * n + s.idx.position(DEGREE), w)).collect());
    }
    Ok(a)
}

pub fn solve12<S: Scalar>(split: &Ps12Split<S>, data: &MacroElementData<S>) -> Result<SplitSpline<S>> {
    MacroSystem::new(split, lambda12(split, CornerBasis::Cartesian)?)?.solve(&data.to_vec())
}

pub fn solve6<S: Scalar>(split: &Ps6Split<S>, corner_jets: &[CornerJet<S>; 3]) -> Result<SplitSpline<S>> {
    let data: Vec<S> = corner_jets.iter().flat_map(|j| j.v.iter().cloned()).collect();
    MacroSystem::new(split, lambda6(split, CornerBasis::Cartesian)?)?.solve(&data)
}

/// Dimension of the space of `C^r` degree-`d` splines on the split.
pub fn smoothness_nullity<S: Scalar, Sp: Split<S>>(split: &Sp, d: usize, r: usize) -> Result<usize> {
    split.parent().check_nondegenerate()?;
    let n = coefficient_count(d);
    let mut a = SparseMatrix::new(split.faces().len() * n);
    for row in split_rows(split, r, d)? {
        a.push_row(row.terms.into_iter().map(|(s, w)| (s.face * n + s.idx.position(d), w)).collect());
    }
    Ok(crate::linalg::nullity(&a))
}

/// One rule: an output functional as a combination of labelled inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub output: String,
    pub terms: Vec<(String, Rational)>,
}

impl Rule {
    pub fn weight(&self, label: &str) -> Rational {
        self.terms
            .iter()
            .find(|t| t.0 == label)
            .map(|t| t.1.clone())
            .unwrap_or_else(|| Rational::from_i64(0))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuleTable {
    pub element: String,
    pub inputs: Vec<String>,
    pub rules: Vec<Rule>,
}

#[derive(Serialize, Deserialize)]
struct RuleJson {
    output: String,
    terms: Vec<(String, String, String)>,
}

#[derive(Serialize, Deserialize)]
struct RuleTableJson {
    element: String,
    inputs: Vec<String>,
    rules: Vec<RuleJson>,
}

impl RuleTable {
    pub fn rule(&self, output: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.output == output)
    }

    /// `{element, inputs, rules: [{output, terms: [[label, num, den]]}]}`;
    /// numerators and denominators are decimal strings.
    pub fn to_json(&self) -> String {
        let doc = RuleTableJson {
            element: self.element.clone(),
            inputs: self.inputs.clone(),
            rules: self
                .rules
                .iter()
                .map(|r| RuleJson {
                    output: r.output.clone(),
                    terms: r
                        .terms
                        .iter()
                        .map(|(l, w)| (l.clone(), w.numer().to_string(), w.denom().to_string()))
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("rule table serializes")
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, String> {
        let doc: RuleTableJson = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let mut rules = Vec::new();
        for r in doc.rules {
            let mut terms = Vec::new();
            for (l, n, d) in r.terms {
                let w = crate::scalar::parse_rational(&format!("{n}/{d}")).ok_or(format!("bad weight {n}/{d}"))?;
                terms.push((l, w));
            }
            rules.push(Rule { output: r.output, terms });
        }
        Ok(Self {
            element: doc.element,
            inputs: doc.inputs,
            rules,
        })
    }

    /// Human-readable listing, one rule per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.rules {
            out.push_str(&r.output);
            out.push_str(" =");
            for (l, w) in &r.terms {
                out.push_str(&format!(" + ({}) {}", format_rational(w), l));
            }
            out.push('\n');
        }
        out
    }
}

/// Midpoint outputs: label and `(t, m)` counts, jet order.
fn midpoint_outputs(include_m: bool) -> Vec<(String, usize, usize)> {
    JET_ORDERS
        .iter()
        .filter(|&&(a, b)| include_m || (a, b) != (0, 1))
        .map(|&(a, b)| (format!("{}_AB", derivative_label(a, b, "t", "m")), a, b))
        .collect()
}

fn derive_rules<Sp: Split<Rational>>(
    split: &Sp,
    functionals: Vec<NodalFunctional<Rational>>,
    element: &str,
    include_m: bool,
) -> Result<RuleTable> {
    let system = MacroSystem::new(split, functionals)?;
    let parent = split.parent();
    let frame = edge_frame(parent, 2)?;
    let mid = parent.v[0].midpoint(&parent.v[1]);
    let inputs: Vec<String> = system.functionals.iter().map(|l| l.label.clone()).collect();
    let mut rules = Vec::new();
    for (label, a, b) in midpoint_outputs(include_m) {
        let dirs: Vec<Vector2<Rational>> = std::iter::repeat(frame.t.clone())
            .take(a)
            .chain(std::iter::repeat(frame.m.clone()).take(b))
            .collect();
        let coeffs = system.functional_in_data(&mid, &dirs)?;
        let terms = inputs
            .iter()
            .zip(coeffs)
            .filter(|(_, w)| !num_traits::Zero::is_zero(w))
            .map(|(l, w)| (l.clone(), w))
            .collect();
        rules.push(Rule { output: label, terms });
    }
    Ok(RuleTable {
        element: element.to_string(),
        inputs,
        rules,
    })
}

/// Initialization rules at the midpoint of ⟨v1, v2⟩ (A = v1, B = v2,
/// C = v3) in the frame of that edge, from the 39 data functionals.
pub fn derive_init_rules(split: &Ps12Split<Rational>) -> Result<RuleTable> {
    derive_rules(split, lambda12(split, CornerBasis::EdgeFrame(2))?, "ps12", false)
}

/// Subdivision rules at the midpoint of ⟨v1, v2⟩ from the 30 corner data.
pub fn derive_subdiv_rules(split: &Ps6Split<Rational>) -> Result<RuleTable> {
    derive_rules(split, lambda6(split, CornerBasis::EdgeFrame(2))?, "ps6", true)
}

/// Outcome of replaying the coefficient chase that shows Λ₁₂ determines
/// the 12-split element.
///
/// All nodal data are zero and every second-order condition is imposed. On
/// the spokes from `v4, v5, v6` to the barycenter, only the third-order rows
/// at the midpoint end are kept; the other two per spoke are the ones the
/// chase eliminates last. The surviving splines are described through
/// `c1, c2, c3`, the coefficients three steps in from `v6, v4, v5` along
/// their spokes.
#[derive(Debug, Clone, PartialEq)]
pub struct ChaseReport {
    pub free_dimension: usize,
    /// `(c1, c2, c3)` on the surviving member scaled to `c1 = 1`.
    pub c: [Rational; 3],
    /// `c58 - c1 - c2/3 - c3/3` and its two rotations, summed in absolute
    /// value over a basis of the family.
    pub c58_residual: Rational,
    /// `c64 - 5/9 (c1 + c2 + c3)` likewise.
    pub c64_residual: Rational,
    /// Bivariate third-order row across `⟨v6, v10⟩` whose far coefficient
    /// is `v9³v10²`, summed over its near terms outside `D₂(v6)` on the
    /// member with `c1 = 1`.
    pub pivot: Rational,
    /// That far coefficient on the same member. It equals `pivot`, so the
    /// row itself is satisfied.
    pub pivot_far: Rational,
    /// The neighbouring row (far coefficient `v9³v6v10`) on the member.
    /// Nonzero means it fixes `c1`.
    pub determining: Rational,
}

impl ChaseReport {
    pub fn holds(&self) -> bool {
        let q = Rational::from_ratio;
        self.free_dimension == 1
            && self.c.iter().all(|c| *c == q(1, 1))
            && self.c58_residual == q(0, 1)
            && self.c64_residual == q(0, 1)
            && self.pivot == q(18, 16)
            && self.determining != q(0, 1)
    }
}

/// Unknown index of the B-coefficient at a domain point (first face that
/// has it).
fn domain_slot(split: &Ps12Split<Rational>, pt: &Point2<Rational>) -> Result<usize> {
    let n = coefficient_count(DEGREE);
    for (f, face) in split.faces().iter().enumerate() {
        let v: Vec<&Point2<Rational>> = face.iter().map(|&i| &split.vertices()[i]).collect();
        for idx in MultiIndex::all(DEGREE) {
            if domain_point(&v, &idx) == *pt {
                return Ok(f * n + idx.position(DEGREE));
            }
        }
    }
    Err(Error::CarrierOutsideSplit)
}

fn domain_point(v: &[&Point2<Rational>], idx: &MultiIndex) -> Point2<Rational> {
    let w = idx.as_array().map(|e| Rational::from_ratio(e as i64, DEGREE as i64));
    Point2::affine_combination(v, &w)
}

/// Point `s/5` of the way from `a` to `b`.
fn along(a: &Point2<Rational>, b: &Point2<Rational>, s: i64) -> Point2<Rational> {
    Point2::affine_combination(&[a, b], &[Rational::from_ratio(5 - s, 5), Rational::from_ratio(s, 5)])
}

pub fn coefficient_chase(split: &Ps12Split<Rational>) -> Result<ChaseReport> {
    const CENTER: usize = 9;
    let q = Rational::from_ratio;
    let zero = || Rational::from_i64(0);
    let n = coefficient_count(DEGREE);
    let v = split.vertices();

    let mut base = assemble_nodal(split, &lambda12(split, CornerBasis::Cartesian)?)?;
    let rows = split_rows(split, SMOOTHNESS, DEGREE)?;
    let per_edge = rows.len() / split.interior_edges().len();
    for (r, row) in rows.iter().enumerate() {
        let e = &split.interior_edges()[r / per_edge];
        if row.order == 3 && e.b == CENTER && [3, 4, 5].contains(&e.a) {
            // keep only the row whose far-side coefficient has no v10 factor
            let (far, _) = row.terms.iter().find(|(s, _)| s.face == e.faces[1]).expect("far-side term");
            let pos = split.faces()[far.face].iter().position(|&x| x == CENTER).expect("spoke face");
            if far.idx.as_array()[pos] != 0 {
                continue;
            }
        }
        base.push_row(row.terms.iter().map(|(s, w)| (s.face * n + s.idx.position(DEGREE), w.clone())).collect());
    }
    let basis = crate::linalg::nullspace(&base);
    let mut report = ChaseReport {
        free_dimension: basis.len(),
        c: std::array::from_fn(|_| zero()),
        c58_residual: zero(),
        c64_residual: zero(),
        pivot: zero(),
        pivot_far: zero(),
        determining: zero(),
    };

    // (midpoint, next midpoint, previous midpoint) around the barycenter
    let spokes = [(5, 3, 4), (3, 4, 5), (4, 5, 3)];
    let c_at = |mid: usize| domain_slot(split, &along(&v[mid], &v[CENTER], 3));
    let c64 = domain_slot(split, &v[CENTER])?;
    for b in &basis {
        let sum = c_at(5)
            .and_then(|i| Ok(b[i].clone() + b[c_at(3)?].clone() + b[c_at(4)?].clone()))?;
        report.c64_residual += (b[c64].clone() - sum * q(5, 9)).abs_val();
        for (mid, next, prev) in spokes {
            let near = domain_slot(split, &along(&v[CENTER], &v[mid], 1))?;
            let r = b[near].clone() - b[c_at(mid)?].clone() - (b[c_at(next)?].clone() + b[c_at(prev)?].clone()) * q(1, 3);
            report.c58_residual += r.abs_val();
        }
    }
    if basis.len() != 1 || basis[0][c_at(5)?] == zero() {
        return Ok(report);
    }
    let scale = basis[0][c_at(5)?].clone();
    let member: Vec<Rational> = basis[0].iter().map(|x| x.clone() / scale.clone()).collect();
    report.c = [member[c_at(5)?].clone(), member[c_at(3)?].clone(), member[c_at(4)?].clone()];

    // T = <v7, v10, v6>, T~ = <v9, v6, v10>, n = 3
    let t = [&v[6], &v[CENTER], &v[5]];
    let tt = [&v[8], &v[5], &v[CENTER]];
    let tri = |p: [&Point2<Rational>; 3]| Triangle::new(p[0].clone(), p[1].clone(), p[2].clone());
    let local = crate::smoothness::cr_rows(&tri(t), &tri(tt), 3, DEGREE)?;
    let value_at = |s: &CoeffSlot| -> Result<Rational> {
        let p = domain_point(if s.face == 0 { &t } else { &tt }, &s.idx);
        Ok(member[domain_slot(split, &p)?].clone())
    };
    let row_with_far = |far: MultiIndex| {
        local
            .iter()
            .find(|r| r.order == 3 && r.weight(CoeffSlot::new(1, far)).is_some())
            .ok_or_else(|| Error::MissingData("bivariate third-order row".into()))
    };
    for (s, w) in &row_with_far(MultiIndex::new(3, 0, 2))?.terms {
        if s.face == 1 {
            report.pivot_far = value_at(s)?;
        } else if s.idx.as_array()[2] < 3 {
            report.pivot += w.clone() * value_at(s)?;
        }
    }
    for (s, w) in &row_with_far(MultiIndex::new(3, 1, 1))?.terms {
        report.determining += w.clone() * value_at(s)?;
    }
    Ok(report)
}

pub fn coefficient_chase_check(split: &Ps12Split<Rational>) -> Result<bool> {
    Ok(coefficient_chase(split)?.holds())
}
