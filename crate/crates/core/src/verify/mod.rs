//! Self-checks behind `ps12 verify`.
//!
//! Each suite returns named checks; none of them panics on a failed
//! expectation.

pub mod golden;

use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::bb_core::{Point2, Triangle, Vector2};
use crate::error::{Error, Result};
use crate::hermite::jet::{cartesian_to_frame, CornerJet};
use crate::hermite::refine::{refine_levels, RefinementLevel};
use crate::hermite::rules::{init_rule_table, subdiv_rule_table};
use crate::macro_solver::{
    coefficient_chase, derive_init_rules, derive_subdiv_rules, lambda12, lambda6, smoothness_nullity, CornerBasis,
    MacroSystem, DEGREE, SMOOTHNESS,
};
use crate::scalar::{Rational, Scalar};
use crate::splits::{ps12_split, ps6_split};
use crate::surface_io::{delta_data, hexagon, sample_polynomial, two_triangles, EdgeInput, EdgeMode, MacroTriangulation, Poly2};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Rules,
    Reproduction,
    Nullity,
    Smoothness,
    Examples,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Rules, Suite::Reproduction, Suite::Nullity, Suite::Smoothness, Suite::Examples];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Rules => "rules",
            Suite::Reproduction => "reproduction",
            Suite::Nullity => "nullity",
            Suite::Smoothness => "smoothness",
            Suite::Examples => "examples",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::UnknownSelector(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        }
    }
}

pub fn run(suite: Suite) -> Result<Vec<Check>> {
    match suite {
        Suite::Rules => rules(),
        Suite::Reproduction => reproduction(),
        Suite::Nullity => nullity(),
        Suite::Smoothness => smoothness(),
        Suite::Examples => examples(),
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn random_rational(r: &mut ChaCha8Rng) -> Rational {
    Rational::from_ratio(r.gen_range(-20..=20), r.gen_range(1..=9))
}

/// Every coefficient of degree ≤ 5 set at random.
pub fn random_quintic(r: &mut ChaCha8Rng) -> Poly2<Rational> {
    let mut terms = Vec::new();
    for a in 0..=5 {
        for b in 0..=5 - a {
            terms.push(((a, b), random_rational(r)));
        }
    }
    Poly2::from_terms(terms)
}

/// Random corner jets and normal-mode edge data on the mesh of `tri`.
pub fn random_data(tri: &MacroTriangulation<Rational>, r: &mut ChaCha8Rng) -> MacroTriangulation<Rational> {
    let mut out = tri.clone();
    out.corner_jets = tri.vertices.iter().map(|_| CornerJet::from_fn(|_| random_rational(r))).collect();
    out.edge_data = tri
        .edges
        .iter()
        .map(|_| EdgeInput {
            mode: EdgeMode::Normal,
            d1_mid: random_rational(r),
            d2_quarter_near_i: random_rational(r),
            d2_quarter_near_j: random_rational(r),
        })
        .collect();
    out
}

fn unit_triangle() -> Triangle<Rational> {
    Triangle::new(
        Point2::from_ratios((0, 1), (0, 1)),
        Point2::from_ratios((1, 1), (0, 1)),
        Point2::from_ratios((0, 1), (1, 1)),
    )
}

fn rules() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let start = Instant::now();
    let init = derive_init_rules(&ps12_split(&unit_triangle())?)?;
    let subdiv = derive_subdiv_rules(&ps6_split(&unit_triangle())?)?;
    let secs = start.elapsed().as_secs_f64();
    for (name, table, printed) in [("initialization rules", &init, golden::INIT), ("subdivision rules", &subdiv, golden::SUBDIV)] {
        let diff = golden::differences(table, printed);
        let detail = if diff.is_empty() {
            format!("{} formulas match", table.rules.len())
        } else {
            diff.join("; ")
        };
        out.push(Check::new(name, diff.is_empty(), detail));
    }
    out.push(Check::new("derivation time", secs < 30.0, format!("{secs:.2} s")));
    out.push(Check::new(
        "baked tables",
        init == init_rule_table() && subdiv == subdiv_rule_table(),
        "refinement kernels equal the derivation",
    ));
    let chase = coefficient_chase(&ps12_split(&unit_triangle())?)?;
    let f = crate::scalar::format_rational;
    out.push(Check::new(
        "coefficient chase",
        chase.holds(),
        format!(
            "free dimension {}, c1:c2:c3 = {}:{}:{}, pivot {} (far coefficient {}), determining row {}",
            chase.free_dimension,
            f(&chase.c[0]),
            f(&chase.c[1]),
            f(&chase.c[2]),
            f(&chase.pivot),
            f(&chase.pivot_far),
            f(&chase.determining)
        ),
    ));
    Ok(out)
}

fn nullity() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let s12 = ps12_split(&unit_triangle())?;
    let s6 = ps6_split(&unit_triangle())?;
    let n12 = smoothness_nullity(&s12, DEGREE, SMOOTHNESS)?;
    let n6 = smoothness_nullity(&s6, DEGREE, SMOOTHNESS)?;
    out.push(Check::new("12-split nullity", n12 == 39, n12.to_string()));
    out.push(Check::new("6-split nullity", n6 == 30, n6.to_string()));
    let sys12 = MacroSystem::new(&s12, lambda12(&s12, CornerBasis::Cartesian)?)?;
    let sys6 = MacroSystem::new(&s6, lambda6(&s6, CornerBasis::Cartesian)?)?;
    for (name, sys, dims) in [("12-split system", &sys12, (309, 252)), ("6-split system", &sys6, (138, 126))] {
        let got = (sys.nrows(), sys.nunknowns());
        out.push(Check::new(name, got == dims, format!("{} x {}", got.0, got.1)));
        let mut r = rng(7);
        let mut ok = true;
        for _ in 0..50 {
            let data: Vec<Rational> = (0..sys.functionals.len()).map(|_| random_rational(&mut r)).collect();
            let c = sys.solve_coefficients(&data)?;
            ok &= sys.residual(&data, &c).iter().all(num_traits::Zero::is_zero);
        }
        out.push(Check::new(&format!("{name} residuals"), ok, "50 random data vectors"));
    }
    Ok(out)
}

/// Largest deviation of the level's jets from the polynomial, relative to
/// the jet's magnitude.
pub fn reproduction_error<S: Scalar>(level: &RefinementLevel<S>, poly: &Poly2<S>) -> f64 {
    let mut worst = 0.0f64;
    for p in &level.patches {
        let (a, b) = p.basis();
        for j in 0..=p.n {
            for i in 0..=p.n - j {
                let want = poly.jet(&p.point(i, j), &a, &b);
                let got = p.jet(i, j);
                let scale = want.v.iter().fold(1.0f64, |m, v| m.max(v.to_f64().abs()));
                for (g, w) in got.v.iter().zip(&want.v) {
                    if !(g.clone() - w.clone()).is_zero() {
                        worst = worst.max((g.to_f64() - w.to_f64()).abs() / scale).max(f64::MIN_POSITIVE);
                    }
                }
            }
        }
    }
    worst
}

fn reproduction() -> Result<Vec<Check>> {
    let mut r = rng(4);
    let (mut exact, mut float) = (true, 0.0f64);
    for _ in 0..10 {
        let poly = random_quintic(&mut r);
        let tri = sample_polynomial(&poly, &two_triangles())?;
        exact &= reproduction_error(&refine_levels(&tri.initial_level()?, 3), &poly) == 0.0;
        let tf = tri.map(Rational::to_f64);
        float = float.max(reproduction_error(&refine_levels(&tf.initial_level()?, 3), &poly.map(Rational::to_f64)));
    }
    Ok(vec![
        Check::new("exact", exact, "10 quintics, 3 levels"),
        Check::new("f64", float <= 1e-12, format!("max relative error {float:.2e}")),
    ])
}

/// Jets at the grid points of every interior macro edge, as seen from each
/// side, in the frame `(t, rot90 t)` of the edge. Returns
/// `(slots 0..6 agree, slots 6..9 agree, slot 9 differs somewhere)`.
pub fn macro_edge_agreement<S: Scalar>(tri: &MacroTriangulation<S>, level: &RefinementLevel<S>) -> Result<(bool, bool, bool)> {
    let (mut c2, mut c3_tangential, mut jump) = (true, true, false);
    for e in tri.edges.iter().filter(|e| !e.is_boundary()) {
        let t = &tri.vertices[e.b] - &tri.vertices[e.a];
        let nrm = t.perp();
        let sides = e
            .triangles
            .iter()
            .map(|&(ti, _)| edge_jets(level, ti, e.a, e.b))
            .collect::<Result<Vec<_>>>()?;
        for (ja, jb) in sides[0].iter().zip(&sides[1]) {
            let (fa, fb) = (cartesian_to_frame(ja, &t, &nrm), cartesian_to_frame(jb, &t, &nrm));
            let scale = fa.v.iter().chain(&fb.v).fold(1.0f64, |m, v| m.max(v.to_f64().abs()));
            let same = |s: usize| fa.v[s].near(&fb.v[s], scale);
            c2 &= (0..6).all(same);
            c3_tangential &= (6..9).all(same);
            jump |= !same(9);
        }
    }
    Ok((c2, c3_tangential, jump))
}

/// Cartesian jets along macro edge `a → b` of triangle `ti`.
fn edge_jets<S: Scalar>(level: &RefinementLevel<S>, ti: usize, a: usize, b: usize) -> Result<Vec<CornerJet<S>>> {
    let p = &level.patches[ti];
    let n = p.n;
    let corner = |v: usize| -> Result<(usize, usize)> {
        match p.vertex_ids.iter().position(|&x| x == v) {
            Some(0) => Ok((0, 0)),
            Some(1) => Ok((n, 0)),
            Some(2) => Ok((0, n)),
            _ => Err(Error::BadIndex(format!("vertex {v} not in triangle {ti}"))),
        }
    };
    let (ca, cb) = (corner(a)?, corner(b)?);
    (0..=n)
        .map(|s| {
            let i = (ca.0 * (n - s) + cb.0 * s) / n;
            let j = (ca.1 * (n - s) + cb.1 * s) / n;
            p.cartesian_jet(i, j)
        })
        .collect()
}

/// Midpoint jets of every interior grid edge of every patch, predicted from
/// the triangle on either side, agree.
pub fn interior_edges_agree<S: Scalar>(level: &RefinementLevel<S>) -> bool {
    use crate::hermite::subdivide_midpoint;
    let mut ok = true;
    for p in &level.patches {
        let n = p.n;
        let v = |x: (usize, usize)| Vector2::new(S::from_i64(x.0 as i64), S::from_i64(x.1 as i64));
        let predict = |a: (usize, usize), b: (usize, usize), c: (usize, usize)| {
            let (va, vb, vc) = (v(a), v(b), v(c));
            let t = &vb - &va;
            let m = &(&(&va + &vb) * &S::from_ratio(1, 2)) - &vc;
            let jf = |x: (usize, usize)| cartesian_to_frame(p.jet(x.0, x.1), &t, &m);
            crate::hermite::jet::frame_to_cartesian(&subdivide_midpoint(&jf(a), &jf(b), &jf(c)), &t, &m)
        };
        for j in 0..n {
            for i in 0..n - j {
                // every up triangle edge that is shared with a down triangle
                let up = [(i, j), (i + 1, j), (i, j + 1)];
                let shared: [((usize, usize), (usize, usize), (usize, usize), Option<(usize, usize)>); 3] = [
                    (up[1], up[2], up[0], (i + j + 1 < n).then(|| (i + 1, j + 1))),
                    (up[0], up[1], up[2], j.checked_sub(1).map(|jm| (i + 1, jm))),
                    (up[2], up[0], up[1], i.checked_sub(1).map(|im| (im, j + 1))),
                ];
                for (a, b, c, other) in shared {
                    if let Some(d) = other {
                        let (x, y) = (predict(a, b, c), predict(a, b, d));
                        ok &= match (x, y) {
                            (Ok(x), Ok(y)) => {
                                let scale = x.v.iter().chain(&y.v).fold(1.0f64, |m, s| m.max(s.to_f64().abs()));
                                x.v.iter().zip(&y.v).all(|(u, w)| u.near(w, scale))
                            }
                            _ => false,
                        };
                    }
                }
            }
        }
    }
    ok
}

fn smoothness() -> Result<Vec<Check>> {
    let mut r = rng(6);
    let tri = random_data(&two_triangles(), &mut r);
    let l3 = refine_levels(&tri.initial_level()?, 3);
    let (c2, tangential, jump) = macro_edge_agreement(&tri, &l3)?;
    let delta = delta_data(&two_triangles::<Rational>(), 2)?;
    let (_, _, delta_jump) = macro_edge_agreement(&delta, &refine_levels(&delta.initial_level()?, 3))?;
    Ok(vec![
        Check::new("C2 across macro edges", c2, "random data, level 3"),
        Check::new("tangential third derivatives across macro edges", tangential, "random data, level 3"),
        Check::new("cross third derivative jump, random data", jump, "f^nnn differs somewhere on the shared edge"),
        Check::new("C3 inside macro triangles", interior_edges_agree(&l3), "random data, level 3"),
        Check::new("cross third derivative jump, delta at v3", delta_jump, "two-triangle mesh, level 3"),
    ])
}

/// The hexagon with delta data at the center refined `levels` times in f64.
pub fn hexagon_run(levels: usize) -> Result<(RefinementLevel<f64>, f64)> {
    let tri = delta_data(&hexagon::<f64>(), 0)?;
    let start = Instant::now();
    let l = refine_levels(&tri.initial_level()?, levels);
    Ok((l, start.elapsed().as_secs_f64()))
}

fn examples() -> Result<Vec<Check>> {
    let (l5, secs) = hexagon_run(5)?;
    let center = l5.patches.iter().all(|p| p.jet(0, 0).v[0] == 1.0);
    // each patch stores its jets in its own corner basis, so the rotation
    // taking patch k to patch k + 1 maps stored data onto stored data
    let rotation = l5.patches.windows(2).all(|w| w[0].jets == w[1].jets);
    let two = two_triangles::<Rational>();
    Ok(vec![
        Check::new("hexagon center value", center, "level 5"),
        Check::new("hexagon rotation symmetry", rotation, "all six patches identical"),
        Check::new("hexagon faces", l5.triangle_count() == 6144, l5.triangle_count().to_string()),
        Check::new("hexagon time", secs < 5.0, format!("{secs:.2} s")),
        Check::new(
            "fixture sizes",
            hexagon::<Rational>().vertices.len() == 7
                && hexagon::<Rational>().edges.len() == 12
                && two.vertices.len() == 4
                && two.edges.len() == 5,
            "hexagon 7/12, two triangles 4/5",
        ),
    ])
}
