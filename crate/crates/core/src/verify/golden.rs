//! The printed midpoint rules, transcribed term by term in their own
//! shorthand and expanded into per-functional weights.
//!
//! A term is `(weight, derivative, site)`. Sites `A+B` and `A-B` stand for
//! the sum and difference of the corner values, `AAB+ABB` and `AAB-ABB` for
//! the two quarterpoints of ⟨A, B⟩, `AB` for its midpoint, and the
//! remaining sites (`C`, `BC`, `CA`, `BBC`, ...) name a single carrier.
//! Derivative strings may list `t` and `m` in any order.

use std::collections::BTreeMap;

use crate::macro_solver::RuleTable;
use crate::scalar::{parse_rational, Rational};

pub type Term = (&'static str, &'static str, &'static str);
pub type GoldenRule = (&'static str, &'static [Term]);

pub const INIT: &[GoldenRule] = &[
    ("", &[("1/2", "", "A+B"), ("7/40", "t", "A-B"), ("1/40", "tt", "A+B"), ("1/640", "ttt", "A-B")]),
    ("t", &[("-5/2", "", "A-B"), ("-3/4", "t", "A+B"), ("-3/32", "tt", "A-B"), ("-1/192", "ttt", "A+B")]),
    ("tt", &[("-2", "t", "A-B"), ("-1/2", "tt", "A+B"), ("-1/24", "ttt", "A-B")]),
    ("tm", &[("-2", "m", "A-B"), ("-1/2", "tm", "A+B"), ("-1/24", "ttm", "A-B")]),
    ("mm", &[("1", "mm", "AAB+ABB"), ("-1/2", "mm", "A+B"), ("-1/16", "tmm", "A-B")]),
    ("ttt", &[("120", "", "A-B"), ("60", "t", "A+B"), ("21/2", "tt", "A-B"), ("3/4", "ttt", "A+B")]),
    ("ttm", &[("-48", "m", "AB"), ("24", "m", "A+B"), ("6", "tm", "A-B"), ("1/2", "ttm", "A+B")]),
    ("tmm", &[("-8", "mm", "AAB-ABB"), ("4", "mm", "A-B"), ("1/2", "tmm", "A+B")]),
    (
        "mmm",
        &[
            ("45", "", "A+B"),
            ("45", "m", "A+B"),
            ("36", "t", "A-B"),
            ("-217/16", "mm", "A+B"),
            ("153/16", "mt", "A-B"),
            ("567/64", "tt", "A+B"),
            ("25/64", "mmm", "A+B"),
            ("-251/128", "mmt", "A-B"),
            ("43/256", "mtt", "A+B"),
            ("303/512", "ttt", "A-B"),
            ("-90", "", "C"),
            ("-24", "m", "C"),
            ("-23/8", "mm", "C"),
            ("-135/32", "tt", "C"),
            ("-5/32", "mmm", "C"),
            ("-79/128", "mtt", "C"),
            ("-108", "m", "AB"),
            ("48", "mA", "BC"),
            ("48", "mB", "CA"),
            ("15", "mm", "AAB+ABB"),
            ("-7", "mAmA", "BBC"),
            ("1", "mAmA", "BCC"),
            ("-7", "mBmB", "CAA"),
            ("1", "mBmB", "CCA"),
        ],
    ),
];

pub const SUBDIV: &[GoldenRule] = &[
    ("", &[("1/2", "", "A+B"), ("7/40", "t", "A-B"), ("1/40", "tt", "A+B"), ("1/640", "ttt", "A-B")]),
    ("t", &[("-5/2", "", "A-B"), ("-3/4", "t", "A+B"), ("-3/32", "tt", "A-B"), ("-1/192", "ttt", "A+B")]),
    ("m", &[("1/2", "m", "A+B"), ("5/32", "mt", "A-B"), ("1/64", "mtt", "A+B")]),
    ("tt", &[("-2", "t", "A-B"), ("-1/2", "tt", "A+B"), ("-1/24", "ttt", "A-B")]),
    ("mt", &[("-2", "m", "A-B"), ("-1/2", "mt", "A+B"), ("-1/24", "mtt", "A-B")]),
    ("mm", &[("1/2", "mm", "A+B"), ("1/8", "tmm", "A-B")]),
    ("ttt", &[("120", "", "A-B"), ("60", "t", "A+B"), ("21/2", "tt", "A-B"), ("3/4", "ttt", "A+B")]),
    ("mtt", &[("-1/4", "mtt", "A+B"), ("-3/2", "mt", "A-B")]),
    ("mmt", &[("-1/4", "mmt", "A+B"), ("-3/2", "mm", "A-B")]),
    (
        "mmm",
        &[
            ("45", "", "A+B"),
            ("18", "t", "A-B"),
            ("-21", "m", "A+B"),
            ("45/16", "tt", "A+B"),
            ("-63/8", "tm", "A-B"),
            ("15/4", "mm", "A+B"),
            ("3/16", "ttt", "A-B"),
            ("-7/8", "ttm", "A+B"),
            ("5/4", "tmm", "A-B"),
            ("1/4", "mmm", "A+B"),
            ("-90", "", "C"),
            ("-48", "m", "C"),
            ("9/8", "tt", "C"),
            ("-21/2", "mm", "C"),
            ("1/4", "ttm", "C"),
            ("-1", "mmm", "C"),
        ],
    ),
];

/// `t`s before `m`s, as in the derived labels; `mA`-style symbols as is.
fn canonical(d: &str) -> String {
    if d.contains('A') || d.contains('B') {
        return d.to_string();
    }
    let t = d.chars().filter(|&c| c == 't').count();
    let m = d.chars().filter(|&c| c == 'm').count();
    "t".repeat(t) + &"m".repeat(m)
}

fn label(d: &str, site: &str) -> String {
    let d = canonical(d);
    if d.is_empty() {
        format!("f_{site}")
    } else {
        format!("f^{d}_{site}")
    }
}

/// Rule output label → input label → weight.
pub type Expanded = BTreeMap<String, BTreeMap<String, Rational>>;

pub fn expand(rules: &[GoldenRule]) -> Expanded {
    let mut out = Expanded::new();
    for (output, terms) in rules {
        let mut row: BTreeMap<String, Rational> = BTreeMap::new();
        for &(w, d, site) in terms.iter() {
            let w = parse_rational(w).expect("golden weight");
            let parts: Vec<(String, Rational)> = match site {
                "A+B" => vec![(label(d, "A"), w.clone()), (label(d, "B"), w)],
                "A-B" => vec![(label(d, "A"), w.clone()), (label(d, "B"), -w)],
                "AAB+ABB" => vec![(label(d, "AAB"), w.clone()), (label(d, "ABB"), w)],
                "AAB-ABB" => vec![(label(d, "AAB"), w.clone()), (label(d, "ABB"), -w)],
                s => vec![(label(d, s), w)],
            };
            for (l, w) in parts {
                *row.entry(l).or_insert_with(|| Rational::from_integer(0.into())) += w;
            }
        }
        row.retain(|_, w| *w != Rational::from_integer(0.into()));
        out.insert(label(output, "AB"), row);
    }
    out
}

pub fn table_as_map(table: &RuleTable) -> Expanded {
    table
        .rules
        .iter()
        .map(|r| (r.output.clone(), r.terms.iter().cloned().collect()))
        .collect()
}

/// Human-readable differences between a derived table and a transcription;
/// empty when they agree coefficient for coefficient.
pub fn differences(table: &RuleTable, golden: &[GoldenRule]) -> Vec<String> {
    let got = table_as_map(table);
    let want = expand(golden);
    let mut out = Vec::new();
    for out_label in got.keys().chain(want.keys()).collect::<std::collections::BTreeSet<_>>() {
        let (g, w) = (got.get(out_label), want.get(out_label));
        match (g, w) {
            (Some(g), Some(w)) => {
                for l in g.keys().chain(w.keys()).collect::<std::collections::BTreeSet<_>>() {
                    if g.get(l) != w.get(l) {
                        out.push(format!(
                            "{out_label}: {l} derived {} printed {}",
                            g.get(l).map_or("0".into(), |x| x.to_string()),
                            w.get(l).map_or("0".into(), |x| x.to_string())
                        ));
                    }
                }
            }
            (None, _) => out.push(format!("{out_label}: not derived")),
            (_, None) => out.push(format!("{out_label}: not in the printed list")),
        }
    }
    out
}
