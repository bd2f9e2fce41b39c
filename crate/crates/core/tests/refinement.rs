mod common;

use common::*;
use ps12::bb_core::Vector2;
use ps12::hermite::jet::{cartesian_to_frame, frame_to_cartesian, patch_jet};
use ps12::hermite::refine::{refine, refine_levels, MacroPatch, RefinementLevel};
use ps12::hermite::{subdivide_midpoint, Jet3};
use ps12::macro_solver::{lambda12, CornerBasis, MacroSystem};
use ps12::splits::ps12_split;
use ps12::surface_io::{delta_data, hexagon, sample_polynomial, two_triangles, Poly2};
use ps12::{Rational, Scalar};

fn check_reproduction<S: Scalar>(level: &RefinementLevel<S>, poly: &Poly2<S>, tol: f64) {
    for p in &level.patches {
        let (a, b) = p.basis();
        for j in 0..=p.n {
            for i in 0..=p.n - j {
                let want = poly.jet(&p.point(i, j), &a, &b);
                let got = p.jet(i, j);
                let scale = want.v.iter().fold(1.0f64, |m, v| m.max(v.to_f64().abs()));
                for s in 0..10 {
                    assert!(
                        got.v[s].near(&want.v[s], scale) || (got.v[s].to_f64() - want.v[s].to_f64()).abs() <= tol * scale,
                        "slot {s} at ({i},{j}): {} vs {}",
                        got.v[s],
                        want.v[s]
                    );
                }
            }
        }
    }
}

#[test]
fn quintics_are_reproduced_exactly() {
    let mut r = rng(11);
    for _ in 0..3 {
        let poly = random_quintic(&mut r);
        let tri = sample_polynomial(&poly, &two_triangles()).unwrap();
        let l3 = refine_levels(&tri.initial_level().unwrap(), 3);
        check_reproduction(&l3, &poly, 0.0);
    }
}

#[test]
fn quintics_are_reproduced_in_f64() {
    let mut r = rng(12);
    for _ in 0..5 {
        let poly = random_quintic(&mut r);
        let tri = sample_polynomial(&poly, &two_triangles()).unwrap().map(Rational::to_f64);
        let l3 = refine_levels(&tri.initial_level().unwrap(), 3);
        check_reproduction(&l3, &poly.map(Rational::to_f64), 1e-12);
    }
}

#[test]
fn quintic_on_generic_triangle() {
    let mut r = rng(13);
    let poly = random_quintic(&mut r);
    let tri = sample_polynomial(&poly, &generic_single()).unwrap();
    check_reproduction(&refine_levels(&tri.initial_level().unwrap(), 2), &poly, 0.0);
}

#[test]
fn refinement_matches_macro_element_spline() {
    let mut r = rng(14);
    let tri = generic_single();
    let split = ps12_split(&tri.triangle(0)).unwrap();
    let system = MacroSystem::new(&split, lambda12(&split, CornerBasis::Cartesian).unwrap()).unwrap();
    for _ in 0..3 {
        let data = random_data(&tri, &mut r);
        let input = &data.macro_inputs().unwrap()[0];
        let spline = system.solve(&input.data.to_vec()).unwrap();
        let l2 = refine_levels(&data.initial_level().unwrap(), 2);
        let p = &l2.patches[0];
        let (a, b) = p.basis();
        for j in 0..=p.n {
            for i in 0..=p.n - j {
                let pt = p.point(i, j);
                let face = spline.locate(&pt).unwrap();
                assert_eq!(p.jet(i, j), &patch_jet(&spline.patches[face], &pt, &a, &b).unwrap(), "({i},{j})");
            }
        }
    }
}

#[test]
fn refine_is_linear() {
    let mut r = rng(15);
    let base = two_triangles();
    let (d1, d2) = (random_data(&base, &mut r), random_data(&base, &mut r));
    let (a, b) = (q(3, 7), q(-2, 1));
    let mut comb = d1.clone();
    for (c, (x, y)) in comb.corner_jets.iter_mut().zip(d1.corner_jets.iter().zip(&d2.corner_jets)) {
        *c = Jet3::from_fn(|s| a.clone() * x.v[s].clone() + b.clone() * y.v[s].clone());
    }
    for (c, (x, y)) in comb.edge_data.iter_mut().zip(d1.edge_data.iter().zip(&d2.edge_data)) {
        c.d1_mid = a.clone() * x.d1_mid.clone() + b.clone() * y.d1_mid.clone();
        c.d2_quarter_near_i = a.clone() * x.d2_quarter_near_i.clone() + b.clone() * y.d2_quarter_near_i.clone();
        c.d2_quarter_near_j = a.clone() * x.d2_quarter_near_j.clone() + b.clone() * y.d2_quarter_near_j.clone();
    }
    let run = |d: &ps12::surface_io::MacroTriangulation<Rational>| refine_levels(&d.initial_level().unwrap(), 2);
    let (l1, l2, lc) = (run(&d1), run(&d2), run(&comb));
    for ((p1, p2), pc) in l1.patches.iter().zip(&l2.patches).zip(&lc.patches) {
        for ((x, y), z) in p1.jets.iter().zip(&p2.jets).zip(&pc.jets) {
            for s in 0..10 {
                assert_eq!(z.v[s], a.clone() * x.v[s].clone() + b.clone() * y.v[s].clone());
            }
        }
    }
}

/// Cartesian jets of the two triangles at a shared point of the diagonal
/// `(1,0)–(0,1)` of the two-triangle mesh, at grid step `1/n` from vertex 1.
fn diagonal_jets(l: &RefinementLevel<Rational>, s: usize) -> (Jet3<Rational>, Jet3<Rational>) {
    let n = l.patches[0].n;
    // patch 0 = [0,1,2]: edge 1→2 has i + j = n; patch 1 = [3,2,1]: edge 2→1 has i + j = n
    let a = l.patches[0].cartesian_jet(n - s, s).unwrap();
    let b = l.patches[1].cartesian_jet(s, n - s).unwrap();
    (a, b)
}

#[test]
fn c2_across_macro_edge_with_one_sided_cross_third_derivative() {
    let mut r = rng(16);
    let tri = random_data(&two_triangles(), &mut r);
    let l3 = refine_levels(&tri.initial_level().unwrap(), 3);
    let t = Vector2::new(q(-1, 1), q(1, 1));
    let nrm = t.perp();
    let mut jump = false;
    for s in 0..=8 {
        let (a, b) = diagonal_jets(&l3, s);
        let (fa, fb) = (cartesian_to_frame(&a, &t, &nrm), cartesian_to_frame(&b, &t, &nrm));
        assert_eq!(fa.v[..9], fb.v[..9], "point {s}");
        jump |= fa.v[9] != fb.v[9];
    }
    assert!(jump, "random data should give a cross-boundary third derivative jump");
}

/// Midpoint jet of grid edge `a–b` from the rule applied on triangle
/// `(a, b, c)`, in the patch's current grid basis.
fn midpoint_from(p: &MacroPatch<Rational>, a: (usize, usize), b: (usize, usize), c: (usize, usize)) -> Jet3<Rational> {
    let v = |x: (usize, usize)| Vector2::new(q(x.0 as i64, 1), q(x.1 as i64, 1));
    let (va, vb, vc) = (v(a), v(b), v(c));
    let t = &vb - &va;
    let m = &(&(&va + &vb) * &q(1, 2)) - &vc;
    let jf = |x: (usize, usize)| cartesian_to_frame(p.jet(x.0, x.1), &t, &m);
    let mid = subdivide_midpoint(&jf(a), &jf(b), &jf(c));
    frame_to_cartesian(&mid, &t, &m).unwrap()
}

#[test]
fn c3_inside_macro_triangles() {
    let mut r = rng(17);
    let tri = random_data(&two_triangles(), &mut r);
    let l2 = refine_levels(&tri.initial_level().unwrap(), 2);
    for p in &l2.patches {
        let n = p.n;
        for j in 0..n {
            for i in 0..n - j {
                if i + j + 1 >= n {
                    continue;
                }
                // up triangle (i,j),(i+1,j),(i,j+1) and down triangle (i+1,j),(i+1,j+1),(i,j+1)
                let (qv, rv) = ((i + 1, j), (i, j + 1));
                let up = midpoint_from(p, qv, rv, (i, j));
                let down = midpoint_from(p, qv, rv, (i + 1, j + 1));
                assert_eq!(up, down, "edge at ({i},{j})");
            }
        }
    }
}

#[test]
fn corner_jets_survive_refinement() {
    let mut r = rng(18);
    let tri = random_data(&two_triangles(), &mut r);
    let l0 = tri.initial_level().unwrap();
    let l3 = refine_levels(&l0, 3);
    for (p0, p3) in l0.patches.iter().zip(&l3.patches) {
        for (c0, c3) in [((0, 0), (0, 0)), ((1, 0), (8, 0)), ((0, 1), (0, 8))] {
            assert_eq!(p0.cartesian_jet(c0.0, c0.1).unwrap(), p3.cartesian_jet(c3.0, c3.1).unwrap());
        }
    }
}

#[test]
fn hexagon_growth_and_center_value() {
    let tri = delta_data(&hexagon::<f64>(), 0).unwrap();
    let mut l = tri.initial_level().unwrap();
    let mut counts = vec![l.triangle_count()];
    for _ in 0..3 {
        l = refine(&l);
        counts.push(l.triangle_count());
    }
    assert_eq!(counts, [6, 24, 96, 384]);
    assert!(l.patches.iter().all(|p| p.jet(0, 0).v[0] == 1.0));
    assert!(l.patches.windows(2).all(|w| w[0].jets == w[1].jets));
}
