//! Midpoint rules for the edge ⟨A, B⟩ opposite C, in the `(t, m)` frame of
//! that edge. The tables are the output of
//! [`derive_init_rules`](crate::macro_solver::derive_init_rules) and
//! [`derive_subdiv_rules`](crate::macro_solver::derive_subdiv_rules), baked
//! in so refinement never solves a linear system; a test re-derives them.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::hermite::jet::{Jet3, JET_ORDERS};
use crate::macro_solver::{Rule, RuleTable};
use crate::scalar::{Rational, Scalar};

/// `(output, [(input, numerator, denominator)])`
pub type BakedRule = (&'static str, &'static [(&'static str, i64, i64)]);

pub const INIT_INPUTS: [&str; 39] = [
    "f_A",
    "f^t_A",
    "f^m_A",
    "f^tt_A",
    "f^tm_A",
    "f^mm_A",
    "f^ttt_A",
    "f^ttm_A",
    "f^tmm_A",
    "f^mmm_A",
    "f_B",
    "f^t_B",
    "f^m_B",
    "f^tt_B",
    "f^tm_B",
    "f^mm_B",
    "f^ttt_B",
    "f^ttm_B",
    "f^tmm_B",
    "f^mmm_B",
    "f_C",
    "f^t_C",
    "f^m_C",
    "f^tt_C",
    "f^tm_C",
    "f^mm_C",
    "f^ttt_C",
    "f^ttm_C",
    "f^tmm_C",
    "f^mmm_C",
    "f^mA_BC",
    "f^mAmA_BBC",
    "f^mAmA_BCC",
    "f^mB_CA",
    "f^mBmB_CCA",
    "f^mBmB_CAA",
    "f^m_AB",
    "f^mm_AAB",
    "f^mm_ABB",
];

pub const INIT_RULES: &[BakedRule] = &[
    (
        "f_AB",
        &[
            ("f_A", 1, 2),
            ("f^t_A", 7, 40),
            ("f^tt_A", 1, 40),
            ("f^ttt_A", 1, 640),
            ("f_B", 1, 2),
            ("f^t_B", -7, 40),
            ("f^tt_B", 1, 40),
            ("f^ttt_B", -1, 640),
        ],
    ),
    (
        "f^t_AB",
        &[
            ("f_A", -5, 2),
            ("f^t_A", -3, 4),
            ("f^tt_A", -3, 32),
            ("f^ttt_A", -1, 192),
            ("f_B", 5, 2),
            ("f^t_B", -3, 4),
            ("f^tt_B", 3, 32),
            ("f^ttt_B", -1, 192),
        ],
    ),
    (
        "f^tt_AB",
        &[
            ("f^t_A", -2, 1),
            ("f^tt_A", -1, 2),
            ("f^ttt_A", -1, 24),
            ("f^t_B", 2, 1),
            ("f^tt_B", -1, 2),
            ("f^ttt_B", 1, 24),
        ],
    ),
    (
        "f^tm_AB",
        &[
            ("f^m_A", -2, 1),
            ("f^tm_A", -1, 2),
            ("f^ttm_A", -1, 24),
            ("f^m_B", 2, 1),
            ("f^tm_B", -1, 2),
            ("f^ttm_B", 1, 24),
        ],
    ),
    (
        "f^mm_AB",
        &[
            ("f^mm_A", -1, 2),
            ("f^tmm_A", -1, 16),
            ("f^mm_B", -1, 2),
            ("f^tmm_B", 1, 16),
            ("f^mm_AAB", 1, 1),
            ("f^mm_ABB", 1, 1),
        ],
    ),
    (
        "f^ttt_AB",
        &[
            ("f_A", 120, 1),
            ("f^t_A", 60, 1),
            ("f^tt_A", 21, 2),
            ("f^ttt_A", 3, 4),
            ("f_B", -120, 1),
            ("f^t_B", 60, 1),
            ("f^tt_B", -21, 2),
            ("f^ttt_B", 3, 4),
        ],
    ),
    (
        "f^ttm_AB",
        &[
            ("f^m_A", 24, 1),
            ("f^tm_A", 6, 1),
            ("f^ttm_A", 1, 2),
            ("f^m_B", 24, 1),
            ("f^tm_B", -6, 1),
            ("f^ttm_B", 1, 2),
            ("f^m_AB", -48, 1),
        ],
    ),
    (
        "f^tmm_AB",
        &[
            ("f^mm_A", 4, 1),
            ("f^tmm_A", 1, 2),
            ("f^mm_B", -4, 1),
            ("f^tmm_B", 1, 2),
            ("f^mm_AAB", -8, 1),
            ("f^mm_ABB", 8, 1),
        ],
    ),
    (
        "f^mmm_AB",
        &[
            ("f_A", 45, 1),
            ("f^t_A", 36, 1),
            ("f^m_A", 45, 1),
            ("f^tt_A", 567, 64),
            ("f^tm_A", 153, 16),
            ("f^mm_A", -217, 16),
            ("f^ttt_A", 303, 512),
            ("f^ttm_A", 43, 256),
            ("f^tmm_A", -251, 128),
            ("f^mmm_A", 25, 64),
            ("f_B", 45, 1),
            ("f^t_B", -36, 1),
            ("f^m_B", 45, 1),
            ("f^tt_B", 567, 64),
            ("f^tm_B", -153, 16),
            ("f^mm_B", -217, 16),
            ("f^ttt_B", -303, 512),
            ("f^ttm_B", 43, 256),
            ("f^tmm_B", 251, 128),
            ("f^mmm_B", 25, 64),
            ("f_C", -90, 1),
            ("f^m_C", -24, 1),
            ("f^tt_C", -135, 32),
            ("f^mm_C", -23, 8),
            ("f^ttm_C", -79, 128),
            ("f^mmm_C", -5, 32),
            ("f^mA_BC", 48, 1),
            ("f^mAmA_BBC", -7, 1),
            ("f^mAmA_BCC", 1, 1),
            ("f^mB_CA", 48, 1),
            ("f^mBmB_CCA", 1, 1),
            ("f^mBmB_CAA", -7, 1),
            ("f^m_AB", -108, 1),
            ("f^mm_AAB", 15, 1),
            ("f^mm_ABB", 15, 1),
        ],
    ),
];

pub const SUBDIV_INPUTS: [&str; 30] = [
    "f_A",
    "f^t_A",
    "f^m_A",
    "f^tt_A",
    "f^tm_A",
    "f^mm_A",
    "f^ttt_A",
    "f^ttm_A",
    "f^tmm_A",
    "f^mmm_A",
    "f_B",
    "f^t_B",
    "f^m_B",
    "f^tt_B",
    "f^tm_B",
    "f^mm_B",
    "f^ttt_B",
    "f^ttm_B",
    "f^tmm_B",
    "f^mmm_B",
    "f_C",
    "f^t_C",
    "f^m_C",
    "f^tt_C",
    "f^tm_C",
    "f^mm_C",
    "f^ttt_C",
    "f^ttm_C",
    "f^tmm_C",
    "f^mmm_C",
];

pub const SUBDIV_RULES: &[BakedRule] = &[
    (
        "f_AB",
        &[
            ("f_A", 1, 2),
            ("f^t_A", 7, 40),
            ("f^tt_A", 1, 40),
            ("f^ttt_A", 1, 640),
            ("f_B", 1, 2),
            ("f^t_B", -7, 40),
            ("f^tt_B", 1, 40),
            ("f^ttt_B", -1, 640),
        ],
    ),
    (
        "f^t_AB",
        &[
            ("f_A", -5, 2),
            ("f^t_A", -3, 4),
            ("f^tt_A", -3, 32),
            ("f^ttt_A", -1, 192),
            ("f_B", 5, 2),
            ("f^t_B", -3, 4),
            ("f^tt_B", 3, 32),
            ("f^ttt_B", -1, 192),
        ],
    ),
    (
        "f^m_AB",
        &[
            ("f^m_A", 1, 2),
            ("f^tm_A", 5, 32),
            ("f^ttm_A", 1, 64),
            ("f^m_B", 1, 2),
            ("f^tm_B", -5, 32),
            ("f^ttm_B", 1, 64),
        ],
    ),
    (
        "f^tt_AB",
        &[
            ("f^t_A", -2, 1),
            ("f^tt_A", -1, 2),
            ("f^ttt_A", -1, 24),
            ("f^t_B", 2, 1),
            ("f^tt_B", -1, 2),
            ("f^ttt_B", 1, 24),
        ],
    ),
    (
        "f^tm_AB",
        &[
            ("f^m_A", -2, 1),
            ("f^tm_A", -1, 2),
            ("f^ttm_A", -1, 24),
            ("f^m_B", 2, 1),
            ("f^tm_B", -1, 2),
            ("f^ttm_B", 1, 24),
        ],
    ),
    (
        "f^mm_AB",
        &[
            ("f^mm_A", 1, 2),
            ("f^tmm_A", 1, 8),
            ("f^mm_B", 1, 2),
            ("f^tmm_B", -1, 8),
        ],
    ),
    (
        "f^ttt_AB",
        &[
            ("f_A", 120, 1),
            ("f^t_A", 60, 1),
            ("f^tt_A", 21, 2),
            ("f^ttt_A", 3, 4),
            ("f_B", -120, 1),
            ("f^t_B", 60, 1),
            ("f^tt_B", -21, 2),
            ("f^ttt_B", 3, 4),
        ],
    ),
    (
        "f^ttm_AB",
        &[
            ("f^tm_A", -3, 2),
            ("f^ttm_A", -1, 4),
            ("f^tm_B", 3, 2),
            ("f^ttm_B", -1, 4),
        ],
    ),
    (
        "f^tmm_AB",
        &[
            ("f^mm_A", -3, 2),
            ("f^tmm_A", -1, 4),
            ("f^mm_B", 3, 2),
            ("f^tmm_B", -1, 4),
        ],
    ),
    (
        "f^mmm_AB",
        &[
            ("f_A", 45, 1),
            ("f^t_A", 18, 1),
            ("f^m_A", -21, 1),
            ("f^tt_A", 45, 16),
            ("f^tm_A", -63, 8),
            ("f^mm_A", 15, 4),
            ("f^ttt_A", 3, 16),
            ("f^ttm_A", -7, 8),
            ("f^tmm_A", 5, 4),
            ("f^mmm_A", 1, 4),
            ("f_B", 45, 1),
            ("f^t_B", -18, 1),
            ("f^m_B", -21, 1),
            ("f^tt_B", 45, 16),
            ("f^tm_B", 63, 8),
            ("f^mm_B", 15, 4),
            ("f^ttt_B", -3, 16),
            ("f^ttm_B", -7, 8),
            ("f^tmm_B", -5, 4),
            ("f^mmm_B", 1, 4),
            ("f_C", -90, 1),
            ("f^m_C", -48, 1),
            ("f^tt_C", 9, 8),
            ("f^mm_C", -21, 2),
            ("f^ttm_C", 1, 4),
            ("f^mmm_C", -1, 1),
        ],
    ),
];

fn to_table(element: &str, inputs: &[&str], rules: &[BakedRule]) -> RuleTable {
    RuleTable {
        element: element.to_string(),
        inputs: inputs.iter().map(|s| s.to_string()).collect(),
        rules: rules
            .iter()
            .map(|(out, terms)| Rule {
                output: out.to_string(),
                terms: terms
                    .iter()
                    .map(|(l, n, d)| (l.to_string(), Rational::from_ratio(*n, *d)))
                    .collect(),
            })
            .collect(),
    }
}

pub fn init_rule_table() -> RuleTable {
    to_table("ps12", &INIT_INPUTS, INIT_RULES)
}

pub fn subdiv_rule_table() -> RuleTable {
    to_table("ps6", &SUBDIV_INPUTS, SUBDIV_RULES)
}

/// Rule rows indexed by input position: `rows[slot]` produces jet entry
/// `slot` of the midpoint jet (`None` for a pass-through entry).
pub struct CompiledRules {
    pub rows: [Option<Vec<(usize, Rational)>>; 10],
}

fn compile(inputs: &[&str], rules: &[BakedRule]) -> CompiledRules {
    let mut rows: [Option<Vec<(usize, Rational)>>; 10] = Default::default();
    for (out, terms) in rules {
        let slot = JET_ORDERS
            .iter()
            .position(|&(a, b)| output_label(a, b) == *out)
            .expect("rule output names a jet entry");
        let row = terms
            .iter()
            .map(|(l, n, d)| {
                let i = inputs.iter().position(|x| x == l).expect("rule input is listed");
                (i, Rational::from_ratio(*n, *d))
            })
            .collect();
        rows[slot] = Some(row);
    }
    CompiledRules { rows }
}

fn output_label(a: usize, b: usize) -> String {
    if a + b == 0 {
        "f_AB".to_string()
    } else {
        format!("f^{}{}_AB", "t".repeat(a), "m".repeat(b))
    }
}

pub fn init_rules() -> &'static CompiledRules {
    static RULES: OnceLock<CompiledRules> = OnceLock::new();
    RULES.get_or_init(|| compile(&INIT_INPUTS, INIT_RULES))
}

pub fn subdiv_rules() -> &'static CompiledRules {
    static RULES: OnceLock<CompiledRules> = OnceLock::new();
    RULES.get_or_init(|| compile(&SUBDIV_INPUTS, SUBDIV_RULES))
}

fn apply<S: Scalar>(row: &[(usize, Rational)], input: &[S]) -> S {
    let mut acc = S::zero();
    for (i, w) in row {
        acc.add_mul_assign(&S::from_rational(w), &input[*i]);
    }
    acc
}

/// Medial data on the edge ⟨A, B⟩ itself.
#[derive(Debug, Clone, PartialEq)]
pub struct OnEdgeData<S> {
    pub f_m_ab: S,
    pub f_mm_aab: S,
    pub f_mm_abb: S,
}

/// Medial data on the other two edges, each in its own medial direction:
/// ⟨B, C⟩ (along m_A) and ⟨C, A⟩ (along m_B).
#[derive(Debug, Clone, PartialEq)]
pub struct OffEdgeData<S> {
    pub f_ma_bc: S,
    pub f_mama_bbc: S,
    pub f_mama_bcc: S,
    pub f_mb_ca: S,
    pub f_mbmb_cca: S,
    pub f_mbmb_caa: S,
}

/// Midpoint jet from the macro-element data; all corner jets in the
/// `(t, m)` frame of ⟨A, B⟩. The third cross derivative needs the data off
/// the edge.
pub fn init_midpoint<S: Scalar>(
    ja: &Jet3<S>,
    jb: &Jet3<S>,
    jc: &Jet3<S>,
    edge: &OnEdgeData<S>,
    off: Option<&OffEdgeData<S>>,
) -> Result<Jet3<S>> {
    let off = off.ok_or_else(|| Error::MissingData("data on the edges ⟨B,C⟩ and ⟨C,A⟩".into()))?;
    let mut input: Vec<S> = Vec::with_capacity(39);
    for j in [ja, jb, jc] {
        input.extend(j.v.iter().cloned());
    }
    input.extend([
        off.f_ma_bc.clone(),
        off.f_mama_bbc.clone(),
        off.f_mama_bcc.clone(),
        off.f_mb_ca.clone(),
        off.f_mbmb_cca.clone(),
        off.f_mbmb_caa.clone(),
        edge.f_m_ab.clone(),
        edge.f_mm_aab.clone(),
        edge.f_mm_abb.clone(),
    ]);
    Ok(init_midpoint_from_inputs(&input))
}

/// Midpoint jet from the 39 inputs in [`INIT_INPUTS`] order.
pub fn init_midpoint_from_inputs<S: Scalar>(input: &[S]) -> Jet3<S> {
    let rules = init_rules();
    Jet3::from_fn(|slot| match &rules.rows[slot] {
        Some(row) => apply(row, input),
        // f^m at the midpoint is an input datum
        None => input[36].clone(),
    })
}

/// Midpoint jet from the corner jets of a subtriangle.
pub fn subdivide_midpoint<S: Scalar>(ja: &Jet3<S>, jb: &Jet3<S>, jc: &Jet3<S>) -> Jet3<S> {
    let mut input: Vec<S> = Vec::with_capacity(30);
    for j in [ja, jb, jc] {
        input.extend(j.v.iter().cloned());
    }
    subdivide_midpoint_from_inputs(&input)
}

pub fn subdivide_midpoint_from_inputs<S: Scalar>(input: &[S]) -> Jet3<S> {
    let rules = subdiv_rules();
    Jet3::from_fn(|slot| apply(rules.rows[slot].as_ref().expect("complete subdivision rules"), input))
}
