//! Products of characters written as sums of characters.
//!
//! Every constructor here checks its own output: the product of the two
//! characters on the left is expanded and compared with the sum on the
//! right, and a mismatch is an error.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::character::{char_combination, char_module};
use crate::error::{check_rank, Error, Result};
use crate::laurent::bigint_to_json;
use crate::linalg::IntMatrix;
use crate::tube::{ext1_dim, hom_dim, hom_space, Indec, TubeModule};

/// An integer combination of module characters keyed by canonical module.
pub type Combination = BTreeMap<TubeModule, BigInt>;

pub(crate) fn add_to(c: &mut Combination, m: TubeModule, k: BigInt) {
    use std::collections::btree_map::Entry;
    if k.is_zero() {
        return;
    }
    match c.entry(m) {
        Entry::Occupied(mut o) => {
            *o.get_mut() += k;
            if o.get().is_zero() {
                o.remove();
            }
        }
        Entry::Vacant(v) => {
            v.insert(k);
        }
    }
}

/// `X_M * X_N = sum c * X_T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductExpansion {
    pub lhs: (TubeModule, TubeModule),
    /// Merged, in canonical module order, no zero coefficients.
    pub terms: Vec<(BigInt, TubeModule)>,
    pub verified: bool,
}

impl ProductExpansion {
    /// Merges the terms and checks the identity by expansion.
    pub fn certify(m: TubeModule, n: TubeModule, terms: Vec<(BigInt, TubeModule)>) -> Result<Self> {
        check_rank(m.rank(), n.rank())?;
        let mut merged = Combination::new();
        for (c, t) in terms {
            check_rank(m.rank(), t.rank())?;
            add_to(&mut merged, t, c);
        }
        let out = ProductExpansion {
            lhs: (m, n),
            terms: merged.into_iter().map(|(t, c)| (c, t)).collect(),
            verified: false,
        };
        if !out.check()? {
            return Err(Error::Verification(format!(
                "product identity fails: {out}"
            )));
        }
        Ok(ProductExpansion {
            verified: true,
            ..out
        })
    }

    fn check(&self) -> Result<bool> {
        let (m, n) = &self.lhs;
        let lhs = char_module(m).mul(&char_module(n))?;
        let rhs = char_combination(m.rank(), self.terms.iter().map(|(c, t)| (c, t)))?;
        Ok(lhs == rhs)
    }

    /// Re-expands both sides.
    pub fn verify(&self) -> bool {
        self.check().unwrap_or(false)
    }

    pub fn modules(&self) -> Vec<&TubeModule> {
        self.terms.iter().map(|(_, t)| t).collect()
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "rank": self.lhs.0.rank(),
            "lhs": [self.lhs.0.to_expr(), self.lhs.1.to_expr()],
            "terms": self.terms.iter().map(|(c, t)| json!({
                "coeff": bigint_to_json(c),
                "module": t.to_expr(),
            })).collect::<Vec<_>>(),
            "verified": self.verified,
        })
    }
}

impl fmt::Display for ProductExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X[{}] * X[{}] = ", self.lhs.0, self.lhs.1)?;
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (c, t)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if c.is_one() {
                write!(f, "X[{t}]")?;
            } else {
                write!(f, "{c}*X[{t}]")?;
            }
        }
        Ok(())
    }
}

fn one() -> BigInt {
    BigInt::one()
}

fn single(m: &TubeModule) -> Result<Indec> {
    m.as_indec()
        .ok_or_else(|| Error::invalid(format!("{m} is not indecomposable")))
}

/// `X_M * X_{tau M} = X_B + 1` with `B = E_{i-1}[n+1] + E_i[n-1]`.
pub fn ar_product(m: &TubeModule) -> Result<ProductExpansion> {
    let e = single(m)?;
    let r = m.rank();
    let (i, n) = (e.socle() as i64, e.length() as i64);
    let b = TubeModule::from_parts(r, &[(i - 1, n + 1), (i, n - 1)])?;
    ProductExpansion::certify(
        m.clone(),
        m.tau(),
        vec![(one(), b), (one(), TubeModule::zero(r))],
    )
}

/// `X_M * X_N = X_E + X_{E'}` for indecomposables with one-dimensional
/// `Ext^1(M, N)`.
pub fn cluster_mult(m: &TubeModule, n: &TubeModule) -> Result<ProductExpansion> {
    check_rank(m.rank(), n.rank())?;
    let (em, en) = (single(m)?, single(n)?);
    let r = m.rank() as i64;
    let ext = ext1_dim(m, n)?;
    let hom = hom_dim(n, &m.tau())?;
    if ext != 1 || hom != 1 {
        return Err(Error::Precondition(format!(
            "need dim Ext^1(M,N) = dim Hom(N, tau M) = 1, found Ext^1 = {ext}, Hom = {hom} for M = {m}, N = {n}"
        )));
    }
    let (i, j) = (em.socle() as i64, em.length() as i64);
    let (k, l) = (en.socle() as i64, en.length() as i64);
    // rank of the nonzero map g: N -> tau M
    let a = (1..=l.min(j))
        .rev()
        .find(|a| (i - 1 + a - k - l).rem_euclid(r) == 0)
        .ok_or_else(|| Error::Verification(format!("no image length for {m}, {n}")))?;
    let g = hom_space(n, &m.tau())?;
    let image_rank: usize = g.basis[0].iter().map(IntMatrix::rank).sum();
    if image_rank as i64 != a {
        return Err(Error::Verification(format!(
            "image length {a} disagrees with the rank {image_rank} of the Hom basis map"
        )));
    }
    // E = E_k[i+j-k] + E_i[k+l-i] with k lifted so that k + l = i - 1 + a
    let e = TubeModule::from_parts(m.rank(), &[(k, l + j - a + 1), (i, a - 1)])?;
    let e2 = TubeModule::from_parts(m.rank(), &[(k, l - a), (i + a, j - a)])?;
    ProductExpansion::certify(m.clone(), n.clone(), vec![(one(), e), (one(), e2)])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dm1Kind {
    /// `X_{E_{i+n}} X_{E_i[n]} = X_{E_i[n+1]} + X_{E_i[n-1]}`
    ExtendTop,
    /// `X_{E_i} X_{E_{i+1}[n]} = X_{E_i[n+1]} + X_{E_{i+2}[n-1]}`
    ExtendSocle,
}

pub fn dm1_step(rank: usize, kind: Dm1Kind, i: i64, n: u32) -> Result<ProductExpansion> {
    if n == 0 {
        return Err(Error::invalid("length must be at least 1"));
    }
    let nn = n as i64;
    let (m, x, rest) = match kind {
        Dm1Kind::ExtendTop => (
            TubeModule::indec(rank, i + nn, 1)?,
            TubeModule::indec(rank, i, n)?,
            TubeModule::from_parts(rank, &[(i, nn - 1)])?,
        ),
        Dm1Kind::ExtendSocle => (
            TubeModule::indec(rank, i, 1)?,
            TubeModule::indec(rank, i + 1, n)?,
            TubeModule::from_parts(rank, &[(i + 2, nn - 1)])?,
        ),
    };
    let top = TubeModule::indec(rank, i, n + 1)?;
    ProductExpansion::certify(m, x, vec![(one(), top), (one(), rest)])
}

/// Which branch of the two-indecomposable product formula applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProductCase {
    C11,
    C12,
    C13,
    C21,
    C22,
    C23,
}

impl ProductCase {
    pub const ALL: [ProductCase; 6] = [
        ProductCase::C11,
        ProductCase::C12,
        ProductCase::C13,
        ProductCase::C21,
        ProductCase::C22,
        ProductCase::C23,
    ];

    /// No extension between the factors, so the product is a direct sum.
    pub fn is_split(self) -> bool {
        matches!(self, ProductCase::C13 | ProductCase::C23)
    }
}

impl fmt::Display for ProductCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ProductCase::C11 => "1.1",
            ProductCase::C12 => "1.2",
            ProductCase::C13 => "1.3",
            ProductCase::C21 => "2.1",
            ProductCase::C22 => "2.2",
            ProductCase::C23 => "2.3",
        };
        f.write_str(s)
    }
}

/// `X_{E_i[k]} * X_{E_j[mr+l]}` for `1 <= k <= mr+l`, `0 <= l < r`, with
/// socles `i, j` in `1..=r`.
pub fn inductive_mult(
    rank: usize,
    i: i64,
    k: i64,
    j: i64,
    m: i64,
    l: i64,
) -> Result<(ProductExpansion, ProductCase)> {
    let r = rank as i64;
    if rank < 1 || !(1..=r).contains(&i) || !(1..=r).contains(&j) {
        return Err(Error::invalid(format!("socles must lie in 1..={r}")));
    }
    if m < 0 || !(0..r).contains(&l) {
        return Err(Error::invalid(format!("need m >= 0 and 0 <= l < {r}")));
    }
    let len = m * r + l;
    if k < 1 || k > len {
        return Err(Error::invalid(format!(
            "need 1 <= k <= mr+l, found k = {k}, mr+l = {len}"
        )));
    }
    let parts = |p: &[(i64, i64)]| TubeModule::from_parts(rank, p);
    let (case, terms) = if j <= i {
        if k + i >= r + j {
            (
                ProductCase::C11,
                vec![
                    parts(&[(i, (m + 1) * r + l + j - i), (j, k + i - r - j)])?,
                    parts(&[
                        (i, r + j - i - 1),
                        (k + i + 1, (m + 1) * r + l + j - k - i - 1),
                    ])?,
                ],
            )
        } else if i <= l + j && l + j < k + i {
            (
                ProductCase::C12,
                vec![
                    parts(&[(j, m * r + k + i - j), (i, l + j - i)])?,
                    parts(&[(j, m * r + i - j - 1), (l + j + 1, k + i - l - j - 1)])?,
                ],
            )
        } else {
            (ProductCase::C13, vec![parts(&[(i, k), (j, len)])?])
        }
    } else if k >= j - i {
        (
            ProductCase::C21,
            vec![
                parts(&[(i, j - i - 1), (k + i + 1, m * r + l + j - k - i - 1)])?,
                parts(&[(i, m * r + l + j - i), (j, k + i - j)])?,
            ],
        )
    } else if i <= l + j - r && l + j - r < k + i {
        (
            ProductCase::C22,
            vec![
                parts(&[(j, (m + 1) * r + k + i - j), (i, l + j - r - i)])?,
                parts(&[
                    (j, (m + 1) * r + i - j - 1),
                    (l + j + 1, k + r + i - l - j - 1),
                ])?,
            ],
        )
    } else {
        (ProductCase::C23, vec![parts(&[(i, k), (j, len)])?])
    };
    let exp = ProductExpansion::certify(
        parts(&[(i, k)])?,
        parts(&[(j, len)])?,
        terms.into_iter().map(|t| (one(), t)).collect(),
    )?;
    Ok((exp, case))
}

/// Product of two indecomposables, shorter factor first.
pub fn multiply_indecs(rank: usize, a: Indec, b: Indec) -> Result<(ProductExpansion, ProductCase)> {
    let (a, b) = if a.length() <= b.length() {
        (a, b)
    } else {
        (b, a)
    };
    let r = rank as i64;
    let len = b.length() as i64;
    inductive_mult(
        rank,
        a.socle() as i64,
        a.length() as i64,
        b.socle() as i64,
        len / r,
        len % r,
    )
}
