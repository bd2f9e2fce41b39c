//! Bivariate polynomials in monomial form, used to manufacture test data.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::bb_core::{Point2, Vector2};
use crate::error::{Error, Result};
use crate::hermite::jet::{cartesian_to_frame, CornerJet, Jet3, JET_ORDERS};
use crate::scalar::{format_rational, parse_rational, powi, Rational, Scalar};

/// `Σ c_ab x^a y^b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly2<S> {
    pub terms: BTreeMap<(usize, usize), S>,
}

impl<S: Scalar> Poly2<S> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((usize, usize), S)>) -> Self {
        let mut p = Self::zero();
        for (k, c) in terms {
            let e = p.terms.entry(k).or_insert_with(S::zero);
            *e += c;
        }
        p.terms.retain(|_, c| !c.is_zero());
        p
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|(a, b)| a + b).max().unwrap_or(0)
    }

    pub fn eval(&self, p: &Point2<S>) -> S {
        let mut acc = S::zero();
        for (&(a, b), c) in &self.terms {
            acc += c.clone() * powi(&p.x, a) * powi(&p.y, b);
        }
        acc
    }

    /// `∂^{dx+dy} / ∂x^dx ∂y^dy`.
    pub fn partial(&self, dx: usize, dy: usize) -> Self {
        let falling = |n: usize, k: usize| (0..k).fold(1i64, |f, i| f * (n - i) as i64);
        Self::from_terms(self.terms.iter().filter(|((a, b), _)| *a >= dx && *b >= dy).map(|(&(a, b), c)| {
            ((a - dx, b - dy), c.clone() * S::from_i64(falling(a, dx) * falling(b, dy)))
        }))
    }

    pub fn cartesian_jet(&self, p: &Point2<S>) -> CornerJet<S> {
        Jet3::from_fn(|s| {
            let (a, b) = JET_ORDERS[s];
            self.partial(a, b).eval(p)
        })
    }

    /// Jet along `(u, w)` at `p`.
    pub fn jet(&self, p: &Point2<S>, u: &Vector2<S>, w: &Vector2<S>) -> Jet3<S> {
        cartesian_to_frame(&self.cartesian_jet(p), u, w)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Poly2<T> {
        Poly2::from_terms(self.terms.iter().map(|(&k, c)| (k, f(c))))
    }
}

impl Poly2<Rational> {
    /// `{"terms": [[a, b, "p/q"], ...]}` for `Σ c x^a y^b`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Format("polynomial needs a `terms` array".into()))?;
        let mut out = Vec::new();
        for t in terms {
            let bad = || Error::Format(format!("bad term {t}"));
            let arr = t.as_array().filter(|a| a.len() == 3).ok_or_else(bad)?;
            let a = arr[0].as_u64().ok_or_else(bad)? as usize;
            let b = arr[1].as_u64().ok_or_else(bad)? as usize;
            let c = parse_number(&arr[2]).ok_or_else(bad)?;
            out.push(((a, b), c));
        }
        Ok(Self::from_terms(out))
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self.terms.iter().map(|(&(a, b), c)| json!([a, b, format_rational(c)])).collect();
        json!({ "terms": terms })
    }
}

/// Exact value of a JSON number or `"p/q"` string.
pub fn parse_number(v: &Value) -> Option<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        _ => None,
    }
}
