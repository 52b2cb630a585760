//! Sparse Laurent polynomials with integer coefficients in the cyclically
//! indexed variables `x1..xr`.
//!
//! Variable subscripts are read modulo the rank, so `x_{i+r}` and `x_i`
//! denote the same variable; [`var_position`] is the only place that
//! reduction happens.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{check_rank, Error, Result};

/// Zero-based storage slot of the variable `x_i` for any integer subscript.
pub fn var_position(rank: usize, i: i64) -> usize {
    assert!(rank >= 1, "rank must be positive");
    (i - 1).rem_euclid(rank as i64) as usize
}

/// Exponents of `x1..xr`; slot `k` holds the exponent of `x_{k+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector(Vec<i32>);

impl ExponentVector {
    pub fn zero(rank: usize) -> Self {
        ExponentVector(vec![0; rank])
    }

    pub fn new(exps: Vec<i32>) -> Result<Self> {
        if exps.is_empty() {
            return Err(Error::invalid("exponent vector must have positive length"));
        }
        Ok(ExponentVector(exps))
    }

    /// `prod x_n / prod x_d` with subscripts taken modulo the rank.
    pub fn from_subscripts(rank: usize, numer: &[i64], denom: &[i64]) -> Self {
        let mut e = vec![0; rank];
        for &i in numer {
            e[var_position(rank, i)] += 1;
        }
        for &i in denom {
            e[var_position(rank, i)] -= 1;
        }
        ExponentVector(e)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[i32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| {
                a.checked_add(*b)
                    .ok_or(Error::Overflow("exponent addition"))
            })
            .collect::<Result<Vec<_>>>()
            .map(ExponentVector)
    }

    /// Dot product with an integer weight vector.
    pub fn weight(&self, w: &[i64]) -> i128 {
        self.0
            .iter()
            .zip(w)
            .map(|(&e, &x)| e as i128 * x as i128)
            .sum()
    }
}

/// An element of `Z[x1^±1, ..., xr^±1]` in canonical form: no stored
/// coefficient is zero, so structural equality is polynomial equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    rank: usize,
    terms: HashMap<ExponentVector, BigInt>,
}

impl LaurentPoly {
    pub fn zero(rank: usize) -> Self {
        assert!(rank >= 1, "rank must be positive");
        LaurentPoly {
            rank,
            terms: HashMap::new(),
        }
    }

    pub fn one(rank: usize) -> Self {
        Self::constant(rank, BigInt::one())
    }

    pub fn constant(rank: usize, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(rank);
        p.add_term(ExponentVector::zero(rank), c.into());
        p
    }

    /// The single term `coeff * x^exps`, or zero when `coeff` is zero.
    pub fn monomial(rank: usize, coeff: impl Into<BigInt>, exps: ExponentVector) -> Result<Self> {
        check_rank(rank, exps.rank())?;
        let mut p = Self::zero(rank);
        p.add_term(exps, coeff.into());
        Ok(p)
    }

    /// The variable `x_i`, subscript read modulo the rank.
    pub fn var(rank: usize, i: i64) -> Self {
        let mut p = Self::zero(rank);
        p.add_term(
            ExponentVector::from_subscripts(rank, &[i], &[]),
            BigInt::one(),
        );
        p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &ExponentVector) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &BigInt)> {
        self.terms.iter()
    }

    /// Terms in descending lexicographic order of exponent vectors.
    pub fn sorted_terms(&self) -> Vec<(&ExponentVector, &BigInt)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.cmp(a.0));
        v
    }

    pub(crate) fn add_term(&mut self, e: ExponentVector, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::hash_map::Entry;
        match self.terms.entry(e) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_rank(self.rank, other.rank)?;
        let (big, small) = if self.len() >= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = big.clone();
        for (e, c) in &small.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_rank(self.rank, other.rank)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_rank(self.rank, other.rank)?;
        let mut out = Self::zero(self.rank);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.checked_add(eb)?, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(self.rank);
        }
        LaurentPoly {
            rank: self.rank,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut acc = Self::one(self.rank);
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Value at `x1 = ... = xr = 1`, the sum of all coefficients.
    pub fn eval_all_ones(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Relabels variables `x_j -> x_{j+shift}`.
    pub fn shift_variables(&self, shift: i64) -> Self {
        let r = self.rank;
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut out = vec![0; r];
                for (k, &x) in e.as_slice().iter().enumerate() {
                    out[var_position(r, k as i64 + 1 + shift)] = x;
                }
                (ExponentVector(out), c.clone())
            })
            .collect();
        LaurentPoly { rank: r, terms }
    }

    /// Componentwise largest power of each variable in any denominator.
    pub fn denominator_vector(&self) -> Vec<u32> {
        let mut d = vec![0u32; self.rank];
        for e in self.terms.keys() {
            for (slot, &x) in d.iter_mut().zip(e.as_slice()) {
                if x < 0 {
                    *slot = (*slot).max(x.unsigned_abs());
                }
            }
        }
        d
    }

    /// Canonical text form, e.g. `2*x1^-1*x3 + 1`.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let abs = c.abs();
            let mono = monomial_text(e);
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{abs}*{mono}"));
            }
        }
        out
    }

    pub fn to_json_value(&self) -> Value {
        let terms: Vec<Value> = self
            .sorted_terms()
            .into_iter()
            .map(|(e, c)| json!({ "coeff": bigint_to_json(c), "exp": e.as_slice() }))
            .collect();
        json!({ "rank": self.rank, "terms": terms })
    }

    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
            pos: e.column(),
            msg: e.to_string(),
        })?;
        Self::from_json_value(&v)
    }

    pub fn from_json_value(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::invalid(format!("polynomial JSON: {m}"));
        let rank = v["rank"]
            .as_u64()
            .filter(|&r| r >= 1)
            .ok_or_else(|| bad("missing positive integer \"rank\""))? as usize;
        let terms = v["terms"]
            .as_array()
            .ok_or_else(|| bad("missing \"terms\" array"))?;
        let mut p = Self::zero(rank);
        for t in terms {
            let c =
                json_to_bigint(&t["coeff"]).ok_or_else(|| bad("coefficient must be an integer"))?;
            let exp = t["exp"]
                .as_array()
                .ok_or_else(|| bad("missing \"exp\" array"))?
                .iter()
                .map(|x| x.as_i64().and_then(|x| i32::try_from(x).ok()))
                .collect::<Option<Vec<i32>>>()
                .ok_or_else(|| bad("exponents must be 32-bit integers"))?;
            check_rank(rank, exp.len())?;
            p.add_term(ExponentVector(exp), c);
        }
        Ok(p)
    }
}

fn monomial_text(e: &ExponentVector) -> String {
    e.as_slice()
        .iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .map(|(k, &x)| {
            if x == 1 {
                format!("x{}", k + 1)
            } else {
                format!("x{}^{}", k + 1, x)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

pub(crate) fn bigint_to_json(c: &BigInt) -> Value {
    // arbitrary_precision keeps integers of any size exact
    serde_json::from_str::<serde_json::Number>(&c.to_string())
        .map(Value::Number)
        .expect("decimal integer is valid JSON")
}

pub(crate) fn json_to_bigint(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.to_string().parse().ok(),
        _ => None,
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

// Operator forms panic on rank mismatch; use the named methods for a `Result`.
impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: Self) -> LaurentPoly {
        LaurentPoly::add(self, rhs).expect("Laurent addition")
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: Self) -> LaurentPoly {
        LaurentPoly::sub(self, rhs).expect("Laurent subtraction")
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: Self) -> LaurentPoly {
        LaurentPoly::mul(self, rhs).expect("Laurent multiplication")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&BigInt::from(-1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(v: &[i32]) -> ExponentVector {
        ExponentVector::new(v.to_vec()).unwrap()
    }

    fn mono(rank: usize, c: i64, e: &[i32]) -> LaurentPoly {
        LaurentPoly::monomial(rank, c, ev(e)).unwrap()
    }

    #[test]
    fn monomial_construction() {
        assert_eq!(mono(2, 1, &[0, 0]), LaurentPoly::one(2));
        let z = mono(2, 0, &[1, 0]);
        assert!(z.is_zero());
        assert_eq!(z.len(), 0);
        let p = mono(3, 2, &[-1, 0, 1]);
        assert_eq!(p.to_text(), "2*x1^-1*x3");
        assert!(matches!(
            LaurentPoly::monomial(2, 1, ev(&[1, 0, 0])),
            Err(Error::RankMismatch { .. })
        ));
    }

    #[test]
    fn addition_cases() {
        let x1 = LaurentPoly::var(2, 1);
        let p = &x1 + &LaurentPoly::one(2);
        assert_eq!(&p + &LaurentPoly::zero(2), p);
        assert!((&x1 + &(-&x1)).is_zero());
        assert_eq!(&p + &x1, &mono(2, 2, &[1, 0]) + &LaurentPoly::one(2));
        assert!(x1.add(&LaurentPoly::one(3)).is_err());
    }

    #[test]
    fn multiplication_cases() {
        let x1 = LaurentPoly::var(2, 1);
        let a = &x1 + &mono(2, 1, &[0, -1]);
        assert_eq!(&a * &LaurentPoly::one(2), a);
        assert_eq!(&a * &x1, &mono(2, 1, &[2, 0]) + &mono(2, 1, &[1, -1]));
        // 2x2/x1 * 2x1/x2 = 4
        let e1 = mono(2, 2, &[-1, 1]);
        let e2 = mono(2, 2, &[1, -1]);
        assert_eq!(&e1 * &e2, LaurentPoly::constant(2, 4));
        assert!(a.mul(&LaurentPoly::one(1)).is_err());
    }

    #[test]
    fn evaluation_at_ones() {
        assert_eq!(LaurentPoly::zero(1).eval_all_ones(), BigInt::zero());
        let p = &(&LaurentPoly::var(2, 1) + &mono(2, 1, &[-1, 0])) + &LaurentPoly::constant(2, 3);
        assert_eq!(p.eval_all_ones(), BigInt::from(5));
    }

    #[test]
    fn rendering() {
        assert_eq!(LaurentPoly::one(3).to_text(), "1");
        assert_eq!(LaurentPoly::zero(3).to_text(), "0");
        assert_eq!(LaurentPoly::zero(3).to_json(), r#"{"rank":3,"terms":[]}"#);
        let p = &(&mono(2, -1, &[1, 0]) + &mono(2, 3, &[0, 2])) + &LaurentPoly::constant(2, -7);
        assert_eq!(p.to_text(), "-x1 + 3*x2^2 - 7");
        assert_eq!(
            p.to_json(),
            r#"{"rank":2,"terms":[{"coeff":-1,"exp":[1,0]},{"coeff":3,"exp":[0,2]},{"coeff":-7,"exp":[0,0]}]}"#
        );
    }

    #[test]
    fn subscripts_wrap_modulo_rank() {
        assert_eq!(LaurentPoly::var(3, 4), LaurentPoly::var(3, 1));
        assert_eq!(LaurentPoly::var(3, 0), LaurentPoly::var(3, 3));
        assert_eq!(var_position(1, 17), 0);
    }

    #[test]
    fn huge_coefficients_survive_json() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let p = LaurentPoly::monomial(2, big, ev(&[1, -1])).unwrap();
        assert_eq!(LaurentPoly::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn malformed_json_is_rejected() {
        assert!(LaurentPoly::from_json("{").is_err());
        assert!(LaurentPoly::from_json(r#"{"rank":0,"terms":[]}"#).is_err());
        assert!(LaurentPoly::from_json(r#"{"rank":2,"terms":[{"coeff":1,"exp":[1]}]}"#).is_err());
        assert!(
            LaurentPoly::from_json(r#"{"rank":2,"terms":[{"coeff":1.5,"exp":[1,0]}]}"#).is_err()
        );
    }

    #[test]
    fn shift_relabels_variables() {
        let p = mono(3, 1, &[1, -2, 0]);
        assert_eq!(p.shift_variables(1), mono(3, 1, &[0, 1, -2]));
        assert_eq!(p.shift_variables(3), p);
    }
}
