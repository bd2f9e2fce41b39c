#![allow(dead_code)]

use num_traits::Zero;
use ps12::bb_core::Point2;
use ps12::hermite::Jet3;
use ps12::surface_io::{EdgeInput, EdgeMode, MacroTriangulation, Poly2};
use ps12::{Rational, Scalar};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

pub fn rand_q(r: &mut ChaCha8Rng) -> Rational {
    q(r.gen_range(-20..=20), r.gen_range(1..=9))
}

/// Random polynomial of total degree ≤ 5 with every coefficient set.
pub fn random_quintic(r: &mut ChaCha8Rng) -> Poly2<Rational> {
    let mut terms = Vec::new();
    for a in 0..=5 {
        for b in 0..=5 - a {
            terms.push(((a, b), rand_q(r)));
        }
    }
    Poly2::from_terms(terms)
}

/// Random corner jets and normal-mode edge data.
pub fn random_data(tri: &MacroTriangulation<Rational>, r: &mut ChaCha8Rng) -> MacroTriangulation<Rational> {
    let mut out = tri.clone();
    out.corner_jets = tri.vertices.iter().map(|_| Jet3::from_fn(|_| rand_q(r))).collect();
    out.edge_data = tri
        .edges
        .iter()
        .map(|_| EdgeInput {
            mode: EdgeMode::Normal,
            d1_mid: rand_q(r),
            d2_quarter_near_i: rand_q(r),
            d2_quarter_near_j: rand_q(r),
        })
        .collect();
    out
}

/// A non-symmetric triangle so that no frame is accidentally special.
pub fn generic_single() -> MacroTriangulation<Rational> {
    MacroTriangulation::new(
        vec![
            Point2::from_ratios((-1, 3), (1, 5)),
            Point2::from_ratios((7, 4), (-1, 2)),
            Point2::from_ratios((1, 2), (3, 2)),
        ],
        vec![[0, 1, 2]],
    )
    .unwrap()
}

pub fn is_zero_jet(j: &Jet3<Rational>) -> bool {
    j.v.iter().all(Zero::is_zero)
}
