//! Euler characteristics of submodule Grassmannians.
//!
//! A uniserial `E_i[n]` has exactly the chain of submodules `E_i[0..=n]`,
//! and over a direct sum the Euler characteristic is the convolution of the
//! summands' chain indicators.

use std::collections::BTreeMap;

use crate::error::{check_rank, Error, Result};
use crate::tube::{sub_dim_vector, DimVector, Indec, TubeModule};

/// Nonzero values of `e -> chi(Gr_e(M))`.
pub type GrSupport = BTreeMap<DimVector, u64>;

/// `dim E_i[k]` for `k = 0..=n`.
pub fn submodule_dim_chain(rank: usize, e: Indec) -> Vec<DimVector> {
    (0..=e.length())
        .map(|k| sub_dim_vector(rank, e, k))
        .collect()
}

pub fn gr_support(m: &TubeModule) -> Result<GrSupport> {
    let r = m.rank();
    let mut acc = GrSupport::new();
    acc.insert(DimVector::zero(r), 1);
    for &s in m.summands() {
        let chain = submodule_dim_chain(r, s);
        let mut next = GrSupport::new();
        for (f, c) in &acc {
            for g in &chain {
                let slot = next.entry(f.add(g)?).or_insert(0);
                *slot = slot
                    .checked_add(*c)
                    .ok_or(Error::Overflow("Grassmannian Euler characteristic"))?;
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// `chi(Gr_e(M))`.
pub fn gr_euler_char(m: &TubeModule, e: &DimVector) -> Result<u64> {
    check_rank(m.rank(), e.rank())?;
    if !e.leq(&m.dim_vector()) {
        return Ok(0);
    }
    Ok(gr_support(m)?.get(e).copied().unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tm(rank: usize, s: &str) -> TubeModule {
        TubeModule::parse(rank, s).unwrap()
    }

    fn dv(v: &[u32]) -> DimVector {
        DimVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn chains() {
        let e = Indec::new(3, 1, 2).unwrap();
        assert_eq!(
            submodule_dim_chain(3, e),
            vec![dv(&[0, 0, 0]), dv(&[1, 0, 0]), dv(&[1, 1, 0])]
        );
        let s = Indec::new(4, 3, 1).unwrap();
        assert_eq!(
            submodule_dim_chain(4, s),
            vec![DimVector::zero(4), DimVector::simple(4, 3)]
        );
        let j = Indec::new(1, 1, 3).unwrap();
        assert_eq!(
            submodule_dim_chain(1, j),
            vec![dv(&[0]), dv(&[1]), dv(&[2]), dv(&[3])]
        );
    }

    #[test]
    fn euler_characteristics() {
        let m = tm(3, "E(1,2)");
        assert_eq!(gr_euler_char(&m, &DimVector::zero(3)).unwrap(), 1);
        assert_eq!(gr_euler_char(&m, &dv(&[1, 0, 0])).unwrap(), 1);
        assert_eq!(gr_euler_char(&m, &dv(&[0, 1, 0])).unwrap(), 0);
        for r in 1..5 {
            let p1 = tm(r, "E(1,1)+E(1,1)");
            assert_eq!(gr_euler_char(&p1, &DimVector::simple(r, 1)).unwrap(), 2);
        }
        assert!(gr_euler_char(&m, &dv(&[1, 0])).is_err());
    }

    #[test]
    fn total_counts_and_endpoints() {
        let m = tm(4, "E(1,3)+E(2,5)+E(4,1)");
        let sup = gr_support(&m).unwrap();
        assert_eq!(sup.values().sum::<u64>(), 4 * 6 * 2);
        assert_eq!(sup[&DimVector::zero(4)], 1);
        assert_eq!(sup[&m.dim_vector()], 1);
        assert!(sup.keys().all(|e| e.leq(&m.dim_vector())));
    }

    #[test]
    fn zero_module_has_one_point() {
        let sup = gr_support(&tm(2, "0")).unwrap();
        assert_eq!(sup.len(), 1);
        assert_eq!(sup[&DimVector::zero(2)], 1);
    }
}
