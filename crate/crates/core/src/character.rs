//! The character `X_M` of a module as a Laurent polynomial.

use std::collections::HashMap;
use std::sync::{LazyLock, RwLock};

use num_bigint::BigInt;

use crate::error::{check_rank, Error, Result};
use crate::grassmannian::gr_support;
use crate::laurent::{ExponentVector, LaurentPoly};
use crate::tube::{euler_form, DimVector, Indec, TubeModule};

/// `X_M` from the sum over submodule dimension vectors `e` of
/// `chi(Gr_e(M)) * prod_i x_i^(-<e, s_i> - <s_i, dim M - e>)`.
pub fn char_definitional(m: &TubeModule) -> Result<LaurentPoly> {
    let r = m.rank();
    let d = m.dim_vector();
    let simples: Vec<DimVector> = (1..=r as i64).map(|i| DimVector::simple(r, i)).collect();
    let mut out = LaurentPoly::zero(r);
    for (e, chi) in gr_support(m)? {
        let rest = d
            .checked_sub(&e)
            .expect("submodule dimension is bounded by the module");
        let mut exps = Vec::with_capacity(r);
        for s in &simples {
            let x = -euler_form(&e, s)? - euler_form(s, &rest)?;
            exps.push(i32::try_from(x).map_err(|_| Error::Overflow("character exponent"))?);
        }
        out.add_term(ExponentVector::new(exps)?, BigInt::from(chi));
    }
    Ok(out)
}

/// Closed form for an indecomposable `E_l[n]`:
/// `x_{l+n}/x_l + sum_{k=1}^{n-1} x_{l+n} x_{l+r-1} / (x_{l+k-1} x_{l+k}) + x_{l+r-1}/x_{l+n-1}`.
pub fn char_indec_closed(rank: usize, e: Indec) -> LaurentPoly {
    let r = rank as i64;
    let l = e.socle() as i64;
    let n = e.length() as i64;
    let one = BigInt::from(1);
    let mut out = LaurentPoly::zero(rank);
    out.add_term(
        ExponentVector::from_subscripts(rank, &[l + n], &[l]),
        one.clone(),
    );
    for k in 1..n {
        out.add_term(
            ExponentVector::from_subscripts(rank, &[l + n, l + r - 1], &[l + k - 1, l + k]),
            one.clone(),
        );
    }
    out.add_term(
        ExponentVector::from_subscripts(rank, &[l + r - 1], &[l + n - 1]),
        one,
    );
    out
}

static CHAR_CACHE: LazyLock<RwLock<HashMap<TubeModule, LaurentPoly>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

/// `X_M` as the product of the closed forms of its summands. Memoized.
pub fn char_module(m: &TubeModule) -> LaurentPoly {
    if let Some(p) = CHAR_CACHE.read().expect("character cache poisoned").get(m) {
        return p.clone();
    }
    let r = m.rank();
    let p = m.summands().iter().fold(LaurentPoly::one(r), |acc, &s| {
        &acc * &char_indec_closed(r, s)
    });
    CHAR_CACHE
        .write()
        .expect("character cache poisoned")
        .insert(m.clone(), p.clone());
    p
}

/// `sum c * X_M` over `(c, M)`.
pub fn char_combination<'a>(
    rank: usize,
    terms: impl IntoIterator<Item = (&'a BigInt, &'a TubeModule)>,
) -> Result<LaurentPoly> {
    let mut out = LaurentPoly::zero(rank);
    for (c, m) in terms {
        check_rank(rank, m.rank())?;
        out = out.add(&char_module(m).scale(c))?;
    }
    Ok(out)
}

/// `E_i^{a_1} + E_{i+1}^{a_2} + ... + E_{i+r-2}^{a_{r-1}}`.
pub fn e_family(rank: usize, row: &[u32], i: i64) -> Result<TubeModule> {
    if rank < 2 {
        return Err(Error::invalid("the simple family needs rank at least 2"));
    }
    check_rank(rank - 1, row.len())?;
    let parts: Vec<(i64, i64)> = row
        .iter()
        .enumerate()
        .flat_map(|(s, &a)| std::iter::repeat_n((i + s as i64, 1), a as usize))
        .collect();
    TubeModule::from_parts(rank, &parts)
}
