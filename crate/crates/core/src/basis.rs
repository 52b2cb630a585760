//! Rigid modules and the expansion of characters in the basis they span.
//!
//! Decomposition runs in two stages. The rewriting stage turns a module
//! into a combination of rigid modules using exact product identities.
//! The elimination stage works from the Laurent polynomial alone: under a
//! generic weight each rigid character has a distinct leading monomial, so
//! leading terms can be peeled off one at a time. Both stages must agree.

use std::cmp::Reverse;
use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, LazyLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::character::{char_combination, char_indec_closed, char_module};
use crate::error::{check_rank, Error, Result};
use crate::laurent::{bigint_to_json, ExponentVector, LaurentPoly};
use crate::linalg::{rank_i64, IntMatrix, Solution};
use crate::multiplication::{add_to, multiply_indecs, Combination};
use crate::tube::{ext1_cluster_dim, is_rigid, norm_vertex, DimVector, Indec, TubeModule};

pub const DEFAULT_FUEL: usize = 10_000;

const WEIGHT_ATTEMPTS: u64 = 8;

fn indec_module(rank: usize, e: Indec) -> TubeModule {
    TubeModule::from_indecs(rank, vec![e])
}

fn compatible(rank: usize, a: Indec, b: Indec) -> Result<bool> {
    Ok(ext1_cluster_dim(&indec_module(rank, a), &indec_module(rank, b))? == 0)
}

type RigidKey = (usize, DimVector);

static RIGID_CACHE: LazyLock<RwLock<HashMap<RigidKey, Arc<Vec<TubeModule>>>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

/// All rigid modules with `dim R <= bound`, the zero module first, ordered
/// by total dimension and then canonically.
pub fn enumerate_rigid(rank: usize, bound: &DimVector) -> Result<Vec<TubeModule>> {
    Ok(rigid_shared(rank, bound)?.as_ref().clone())
}

fn rigid_shared(rank: usize, bound: &DimVector) -> Result<Arc<Vec<TubeModule>>> {
    check_rank(rank, bound.rank())?;
    let key = (rank, bound.clone());
    if let Some(v) = RIGID_CACHE.read().expect("rigid cache poisoned").get(&key) {
        return Ok(v.clone());
    }
    let mut pieces = Vec::new();
    for i in 1..=rank as i64 {
        for n in 1..rank as u32 {
            let e = Indec::new(rank, i, n)?;
            if indec_module(rank, e).dim_vector().leq(bound) && compatible(rank, e, e)? {
                pieces.push(e);
            }
        }
    }
    let mut compat = vec![vec![false; pieces.len()]; pieces.len()];
    for a in 0..pieces.len() {
        for b in a..pieces.len() {
            let ok = compatible(rank, pieces[a], pieces[b])?;
            compat[a][b] = ok;
            compat[b][a] = ok;
        }
    }
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    let mut dims = vec![0u32; rank];
    rigid_search(
        rank,
        &pieces,
        &compat,
        bound,
        0,
        &mut chosen,
        &mut dims,
        &mut out,
    );
    for m in &out {
        if !is_rigid(m)? {
            return Err(Error::Verification(format!(
                "enumerated module {m} is not rigid"
            )));
        }
    }
    out.sort_by(|a, b| (a.total_dim(), a).cmp(&(b.total_dim(), b)));
    let out = Arc::new(out);
    RIGID_CACHE
        .write()
        .expect("rigid cache poisoned")
        .insert(key, out.clone());
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn rigid_search(
    rank: usize,
    pieces: &[Indec],
    compat: &[Vec<bool>],
    bound: &DimVector,
    at: usize,
    chosen: &mut Vec<usize>,
    dims: &mut [u32],
    out: &mut Vec<TubeModule>,
) {
    if at == pieces.len() {
        let summands = chosen.iter().map(|&k| pieces[k]).collect();
        out.push(TubeModule::from_indecs(rank, summands));
        return;
    }
    rigid_search(rank, pieces, compat, bound, at + 1, chosen, dims, out);
    if !chosen.iter().all(|&k| compat[k][at]) {
        return;
    }
    let e = pieces[at];
    let slots: Vec<usize> = (0..e.length() as usize)
        .map(|t| (e.socle() as usize - 1 + t) % rank)
        .collect();
    let mut added = 0;
    loop {
        if slots.iter().any(|&s| dims[s] + 1 > bound.entries()[s]) {
            break;
        }
        slots.iter().for_each(|&s| dims[s] += 1);
        chosen.push(at);
        added += 1;
        rigid_search(rank, pieces, compat, bound, at + 1, chosen, dims, out);
    }
    for _ in 0..added {
        chosen.pop();
        slots.iter().for_each(|&s| dims[s] -= 1);
    }
}

/// Integer combination of rigid characters equal to a target polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub rank: usize,
    pub coeffs: Combination,
    pub target: LaurentPoly,
}

impl Decomposition {
    /// Checks rigidity of every key and the identity `sum c X_R = target`.
    pub fn verify(&self) -> Result<()> {
        for m in self.coeffs.keys() {
            if !is_rigid(m)? {
                return Err(Error::Verification(format!("{m} is not rigid")));
            }
        }
        let sum = char_combination(self.rank, self.coeffs.iter().map(|(m, c)| (c, m)))?;
        if sum != self.target {
            return Err(Error::Verification(format!(
                "residual {} is not zero",
                self.target.sub(&sum)?
            )));
        }
        Ok(())
    }

    pub fn coeff(&self, m: &TubeModule) -> BigInt {
        self.coeffs.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "rank": self.rank,
            "terms": self.coeffs.iter().map(|(m, c)| json!({
                "coeff": bigint_to_json(c),
                "module": m.to_expr(),
            })).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(m, c)| format!("{m}: {c}"))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// What to decompose.
#[derive(Debug, Clone)]
pub enum Target {
    Poly(LaurentPoly),
    Module(TubeModule),
    /// `X_{M_1} X_{M_2} ...`, the character of the direct sum.
    Product(Vec<TubeModule>),
}

#[derive(Debug, Clone, Copy)]
pub struct DecomposeOptions {
    /// Rewrite steps before the rewriting stage gives up.
    pub fuel: usize,
    /// Seeds the weights used by the elimination stage.
    pub seed: u64,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions {
            fuel: DEFAULT_FUEL,
            seed: 0,
        }
    }
}

/// Writes the target in the rigid basis. Module targets go through both
/// stages and the results must coincide.
pub fn decompose(target: &Target, opts: &DecomposeOptions) -> Result<Decomposition> {
    let module = match target {
        Target::Poly(_) => None,
        Target::Module(m) => Some(m.clone()),
        Target::Product(ms) => {
            let first = ms
                .first()
                .ok_or_else(|| Error::invalid("empty product has no rank"))?;
            let mut acc = TubeModule::zero(first.rank());
            for m in ms {
                acc = acc.direct_sum(m)?;
            }
            Some(acc)
        }
    };
    let poly = match (&module, target) {
        (Some(m), _) => char_module(m),
        (None, Target::Poly(p)) => p.clone(),
        (None, _) => unreachable!("module targets always carry a module"),
    };
    let rank = poly.rank();
    let rewritten = match &module {
        Some(m) => rewrite_to_rigid(m, opts.fuel)?,
        None => None,
    };
    let mut bound = match &module {
        Some(m) => m.dim_vector(),
        None => DimVector::new(poly.denominator_vector())?,
    };
    if let Some(c) = &rewritten {
        for k in c.keys() {
            bound = bound.join(&k.dim_vector())?;
        }
    }
    let eliminated = eliminate_to_rigid(&poly, &bound, opts.seed)?;
    if let Some(c) = &rewritten {
        if *c != eliminated {
            return Err(Error::Decomposition(format!(
                "rewriting gave {} but elimination gave {}",
                show(c),
                show(&eliminated)
            )));
        }
    }
    let d = Decomposition {
        rank,
        coeffs: eliminated,
        target: poly,
    };
    d.verify()?;
    Ok(d)
}

fn show(c: &Combination) -> String {
    let parts: Vec<String> = c.iter().map(|(m, k)| format!("{m}: {k}")).collect();
    format!("{{{}}}", parts.join(", "))
}

fn without(m: &TubeModule, drop: &[usize]) -> Vec<Indec> {
    m.summands()
        .iter()
        .enumerate()
        .filter(|(k, _)| !drop.contains(k))
        .map(|(_, s)| *s)
        .collect()
}

fn with_rest(rank: usize, parts: &[(i64, i64)], rest: &[Indec]) -> Result<TubeModule> {
    let mut v = TubeModule::from_parts(rank, parts)?.summands().to_vec();
    v.extend_from_slice(rest);
    Ok(TubeModule::from_indecs(rank, v))
}

/// One rewriting step for a non-rigid module, or `None` if it is rigid.
fn rewrite_step(m: &TubeModule) -> Result<Option<Vec<(BigInt, TubeModule)>>> {
    let r = m.rank();
    let ri = r as i64;
    if m.is_zero() {
        return Ok(None);
    }
    if r == 1 {
        let c: BigInt = m
            .summands()
            .iter()
            .map(|s| BigInt::from(s.length() + 1))
            .product();
        return Ok(Some(vec![(c, TubeModule::zero(1))]));
    }
    let long = m
        .summands()
        .iter()
        .enumerate()
        .filter(|(_, s)| s.length() as usize >= r)
        .max_by_key(|(_, s)| (s.length(), Reverse(s.socle())));
    if let Some((at, s)) = long {
        let rest = without(m, &[at]);
        let (i, n) = (s.socle() as i64, s.length() as i64);
        let out = if n == ri {
            // X_{E_i[r]} = X_{E_{i+1}[r-2]} + 2
            vec![
                (BigInt::one(), with_rest(r, &[(i + 1, ri - 2)], &rest)?),
                (BigInt::from(2), with_rest(r, &[], &rest)?),
            ]
        } else {
            // X_{E_i[n]} = X_{E_i[n-r]} (X_{E_{i+1}[r-2]} + 2) - X_{E_i[r-1] + E_{i+1}[n-r-1]}
            vec![
                (
                    BigInt::one(),
                    with_rest(r, &[(i, n - ri), (i + 1, ri - 2)], &rest)?,
                ),
                (BigInt::from(2), with_rest(r, &[(i, n - ri)], &rest)?),
                (
                    BigInt::from(-1),
                    with_rest(r, &[(i, ri - 1), (i + 1, n - ri - 1)], &rest)?,
                ),
            ]
        };
        return Ok(Some(out));
    }
    let s = m.summands();
    for p in 0..s.len() {
        for q in p + 1..s.len() {
            if compatible(r, s[p], s[q])? {
                continue;
            }
            let (exp, _) = multiply_indecs(r, s[p], s[q])?;
            let rest = without(m, &[p, q]);
            let out = exp
                .terms
                .into_iter()
                .map(|(c, t)| {
                    let mut v = t.summands().to_vec();
                    v.extend_from_slice(&rest);
                    (c, TubeModule::from_indecs(r, v))
                })
                .collect();
            return Ok(Some(out));
        }
    }
    Ok(None)
}

fn measure(m: &TubeModule) -> (u64, Reverse<u64>) {
    let sq = m
        .summands()
        .iter()
        .map(|s| (s.length() as u64).pow(2))
        .sum();
    (m.total_dim(), Reverse(sq))
}

/// Rewriting stage: repeatedly replaces the largest non-rigid term using
/// the long-summand identity or the two-indecomposable product formula.
/// `None` when the fuel runs out.
pub fn rewrite_to_rigid(m: &TubeModule, fuel: usize) -> Result<Option<Combination>> {
    let mut comb = Combination::new();
    add_to(&mut comb, m.clone(), BigInt::one());
    let mut rigid: std::collections::BTreeSet<TubeModule> = Default::default();
    for _ in 0..fuel {
        let mut keys: Vec<&TubeModule> = comb.keys().filter(|k| !rigid.contains(*k)).collect();
        keys.sort_by(|a, b| (measure(b), *b).cmp(&(measure(a), *a)));
        let mut step = None;
        for k in keys {
            match rewrite_step(k)? {
                Some(terms) => {
                    step = Some((k.clone(), terms));
                    break;
                }
                None => {
                    rigid.insert(k.clone());
                }
            }
        }
        let Some((k, terms)) = step else {
            return Ok(Some(comb));
        };
        let c = comb.remove(&k).expect("key present");
        for (t, mm) in terms {
            add_to(&mut comb, mm, &c * t);
        }
    }
    Ok(None)
}

enum Peel {
    Found(Combination),
    NotInSpan,
    Inconclusive,
}

fn random_weights(rank: usize, seed: u64) -> Vec<i64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..rank)
        .map(|_| rng.gen_range(-1_000_000..=1_000_000))
        .collect()
}

/// Unique heaviest monomial of a polynomial under `w`, with its coefficient.
fn leading(p: &LaurentPoly, w: &[i64]) -> Option<(ExponentVector, BigInt)> {
    let mut best: Option<(i128, &ExponentVector, &BigInt)> = None;
    let mut tie = false;
    for (e, c) in p.terms() {
        let x = e.weight(w);
        match best {
            Some((b, _, _)) if x < b => {}
            Some((b, _, _)) if x == b => tie = true,
            _ => {
                best = Some((x, e, c));
                tie = false;
            }
        }
    }
    if tie {
        return None;
    }
    best.map(|(_, e, c)| (e.clone(), c.clone()))
}

fn peel(target: &LaurentPoly, cands: &[TubeModule], w: &[i64]) -> Result<Peel> {
    let r = target.rank();
    let mut heads: HashMap<Indec, (Vec<i64>, BigInt)> = HashMap::new();
    let mut table: HashMap<ExponentVector, (usize, BigInt)> = HashMap::with_capacity(cands.len());
    for (idx, m) in cands.iter().enumerate() {
        let mut exps = vec![0i64; r];
        let mut coeff = BigInt::one();
        for &s in m.summands() {
            let (e, c) = &*match heads.entry(s) {
                Entry::Occupied(o) => o.into_mut(),
                Entry::Vacant(v) => {
                    let Some((e, c)) = leading(&char_indec_closed(r, s), w) else {
                        return Ok(Peel::Inconclusive);
                    };
                    v.insert((e.as_slice().iter().map(|&x| x as i64).collect(), c))
                }
            };
            exps.iter_mut().zip(e).for_each(|(a, b)| *a += b);
            coeff *= c;
        }
        let exps = exps
            .into_iter()
            .map(|x| i32::try_from(x).map_err(|_| Error::Overflow("leading exponent")))
            .collect::<Result<Vec<_>>>()?;
        if table
            .insert(ExponentVector::new(exps)?, (idx, coeff))
            .is_some()
        {
            return Ok(Peel::Inconclusive);
        }
    }
    let mut residual = target.clone();
    let mut out = Combination::new();
    while !residual.is_zero() {
        let Some((e, c)) = leading(&residual, w) else {
            return Ok(Peel::Inconclusive);
        };
        let Some((idx, lead)) = table.get(&e) else {
            return Ok(Peel::NotInSpan);
        };
        let (q, rem) = c.div_rem(lead);
        if !rem.is_zero() {
            return Ok(Peel::NotInSpan);
        }
        let m = &cands[*idx];
        residual = residual.sub(&char_module(m).scale(&q))?;
        add_to(&mut out, m.clone(), q);
    }
    Ok(Peel::Found(out))
}

fn dense_solve(target: &LaurentPoly, cands: &[TubeModule]) -> Result<Option<Combination>> {
    let chars: Vec<LaurentPoly> = cands.iter().map(char_module).collect();
    let mut index: BTreeMap<ExponentVector, usize> = BTreeMap::new();
    for p in chars.iter().chain(std::iter::once(target)) {
        for (e, _) in p.terms() {
            let n = index.len();
            index.entry(e.clone()).or_insert(n);
        }
    }
    let mut a = IntMatrix::zeros(index.len(), cands.len());
    for (col, p) in chars.iter().enumerate() {
        for (e, c) in p.terms() {
            a.set(index[e], col, c.clone());
        }
    }
    let mut rhs = vec![BigInt::zero(); index.len()];
    for (e, c) in target.terms() {
        rhs[index[e]] = c.clone();
    }
    match a.solve(&rhs) {
        Solution::Unique(x) => {
            let mut out = Combination::new();
            for (m, c) in cands.iter().zip(x) {
                add_to(&mut out, m.clone(), c);
            }
            Ok(Some(out))
        }
        Solution::Inconsistent | Solution::NonIntegral => Ok(None),
        Solution::Underdetermined => Err(Error::Decomposition(
            "rigid characters are linearly dependent".into(),
        )),
    }
}

/// Elimination stage: expresses a polynomial over rigid modules with
/// `dim R <= bound`, enlarging the bound once before giving up.
pub fn eliminate_to_rigid(
    target: &LaurentPoly,
    bound: &DimVector,
    seed: u64,
) -> Result<Combination> {
    let r = target.rank();
    check_rank(r, bound.rank())?;
    let mut bound = bound.clone();
    for round in 0..2 {
        let cands = rigid_shared(r, &bound)?;
        let mut settled = false;
        for attempt in 0..WEIGHT_ATTEMPTS {
            let w = random_weights(r, seed.wrapping_add(attempt));
            match peel(target, &cands, &w)? {
                Peel::Found(c) => return Ok(c),
                Peel::NotInSpan => {
                    settled = true;
                    break;
                }
                Peel::Inconclusive => {}
            }
        }
        if !settled {
            if let Some(c) = dense_solve(target, &cands)? {
                return Ok(c);
            }
        }
        if round == 0 {
            bound = DimVector::new(bound.entries().iter().map(|&d| 2 * d + 1).collect())?;
        }
    }
    Err(Error::Decomposition(format!(
        "{target} is not an integer combination of rigid characters with dimension at most {bound}"
    )))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Independence {
    pub independent: bool,
    /// Integer relation `sum rel_k X_{M_k} = 0` when dependent, first
    /// nonzero entry positive.
    pub relation: Option<Vec<BigInt>>,
}

/// Exact rank test of the characters of `modules`.
pub fn independence_check(modules: &[TubeModule]) -> Result<Independence> {
    let Some(first) = modules.first() else {
        return Ok(Independence {
            independent: true,
            relation: None,
        });
    };
    let r = first.rank();
    let chars: Vec<LaurentPoly> = modules
        .iter()
        .map(|m| check_rank(r, m.rank()).map(|_| char_module(m)))
        .collect::<Result<_>>()?;
    let mut index: BTreeMap<&ExponentVector, usize> = BTreeMap::new();
    for p in &chars {
        for (e, _) in p.terms() {
            let n = index.len();
            index.entry(e).or_insert(n);
        }
    }
    let small: Option<Vec<Vec<i64>>> = (|| {
        let mut rows = vec![vec![0i64; chars.len()]; index.len()];
        for (col, p) in chars.iter().enumerate() {
            for (e, c) in p.terms() {
                rows[index[e]][col] = i64::try_from(c).ok()?;
            }
        }
        Some(rows)
    })();
    if let Some(rank) = small.and_then(rank_i64) {
        if rank == modules.len() {
            return Ok(Independence {
                independent: true,
                relation: None,
            });
        }
    }
    let mut a = IntMatrix::zeros(index.len(), chars.len());
    for (col, p) in chars.iter().enumerate() {
        for (e, c) in p.terms() {
            a.set(index[e], col, c.clone());
        }
    }
    let Some(mut rel) = a.nullspace().into_iter().next() else {
        return Ok(Independence {
            independent: true,
            relation: None,
        });
    };
    if rel
        .iter()
        .find(|x| !x.is_zero())
        .is_some_and(|x| x.is_negative())
    {
        rel.iter_mut().for_each(|x| *x = -&*x);
    }
    let check = char_combination(r, rel.iter().zip(modules))?;
    if !check.is_zero() {
        return Err(Error::Verification(
            "relation vector does not vanish".into(),
        ));
    }
    Ok(Independence {
        independent: false,
        relation: Some(rel),
    })
}

/// Certifies `X_{E_i[r]} = X_{E_{i+1}[r-2]} + 2` and returns both sides.
pub fn lemma_rank_reduction(rank: usize, i: i64) -> Result<(TubeModule, Combination)> {
    if rank < 2 {
        return Err(Error::invalid(
            "the rank reduction identity needs rank at least 2",
        ));
    }
    let r = rank as i64;
    let lhs = TubeModule::indec(rank, i, rank as u32)?;
    let mut rhs = Combination::new();
    add_to(
        &mut rhs,
        TubeModule::from_parts(rank, &[(i + 1, r - 2)])?,
        BigInt::one(),
    );
    add_to(&mut rhs, TubeModule::zero(rank), BigInt::from(2));
    let sum = char_combination(rank, rhs.iter().map(|(m, c)| (c, m)))?;
    if char_module(&lhs) != sum {
        return Err(Error::Verification(format!(
            "rank reduction fails for {lhs}"
        )));
    }
    Ok((lhs, rhs))
}

/// Splits a word into maximal runs in which each letter follows the
/// previous one cyclically.
pub fn split_rays(rank: usize, word: &[i64]) -> Vec<Vec<i64>> {
    let mut rays: Vec<Vec<i64>> = Vec::new();
    for &x in word {
        let x = norm_vertex(rank, x) as i64;
        match rays.last_mut() {
            Some(ray) if norm_vertex(rank, ray[ray.len() - 1] + 1) as i64 == x => ray.push(x),
            _ => rays.push(vec![x]),
        }
    }
    rays
}

/// One state of a ray fold: the chain `E_a[k]` (dead once `k = 0`) and the
/// letters that could not be attached.
#[derive(Clone)]
struct RayState {
    socle: i64,
    len: i64,
    leftovers: Vec<i64>,
}

fn fold_ray(rank: usize, ray: &[i64]) -> Vec<RayState> {
    let mut states = vec![RayState {
        socle: ray[0],
        len: 1,
        leftovers: Vec::new(),
    }];
    for &x in &ray[1..] {
        let mut next = Vec::with_capacity(states.len() * 2);
        for s in states {
            let top = norm_vertex(rank, s.socle + s.len) as i64;
            if s.len > 0 && top == x {
                next.push(RayState {
                    len: s.len + 1,
                    ..s.clone()
                });
                next.push(RayState {
                    len: s.len - 1,
                    ..s
                });
            } else {
                let mut s = s;
                s.leftovers.push(x);
                next.push(s);
            }
        }
        states = next;
    }
    states
}

/// Per-term data after folding: chains of length at least two, the simple
/// letters, and whether any simple letter is loose.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Folded {
    chains: Vec<(i64, i64)>,
    simples: Vec<i64>,
    loose: bool,
}

/// Expands `X_{E_{w_1}} X_{E_{w_2}} ...` for a word already split into rays
/// of cyclically consecutive letters.
pub fn expand_rays(rank: usize, rays: &[Vec<i64>]) -> Result<Combination> {
    let mut word = Vec::new();
    for ray in rays {
        if ray.is_empty() {
            return Err(Error::invalid("rays must be nonempty"));
        }
        for w in ray.windows(2) {
            if norm_vertex(rank, w[0] + 1) != norm_vertex(rank, w[1]) {
                return Err(Error::invalid(format!("ray {ray:?} is not consecutive")));
            }
        }
        word.extend(ray.iter().map(|&x| norm_vertex(rank, x) as i64));
    }
    let out = expand_rays_unchecked(rank, rays)?;
    let lhs = word.iter().try_fold(LaurentPoly::one(rank), |acc, &x| {
        acc.mul(&char_module(&TubeModule::indec(rank, x, 1)?))
    })?;
    if char_combination(rank, out.iter().map(|(m, c)| (c, m)))? != lhs {
        return Err(Error::Verification(format!("expansion of {word:?} fails")));
    }
    Ok(out)
}

fn expand_rays_unchecked(rank: usize, rays: &[Vec<i64>]) -> Result<Combination> {
    let mut terms: BTreeMap<Folded, BigInt> = BTreeMap::new();
    terms.insert(
        Folded {
            chains: Vec::new(),
            simples: Vec::new(),
            loose: false,
        },
        BigInt::one(),
    );
    for ray in rays {
        let ray: Vec<i64> = ray.iter().map(|&x| norm_vertex(rank, x) as i64).collect();
        let states = fold_ray(rank, &ray);
        let mut next: BTreeMap<Folded, BigInt> = BTreeMap::new();
        for (t, c) in &terms {
            for s in &states {
                let mut f = t.clone();
                match s.len {
                    0 => {}
                    1 if ray.len() > 1 => {
                        f.simples.push(s.socle);
                        f.loose = true;
                    }
                    1 => f.simples.push(s.socle),
                    n => f.chains.push((s.socle, n)),
                }
                if !s.leftovers.is_empty() {
                    f.simples.extend_from_slice(&s.leftovers);
                    f.loose = true;
                }
                f.chains.sort_unstable();
                f.simples.sort_unstable();
                *next.entry(f).or_insert_with(BigInt::zero) += c;
            }
        }
        terms = next;
    }
    let mut out = Combination::new();
    for (f, c) in terms {
        let chains = TubeModule::from_parts(rank, &f.chains)?;
        if f.loose {
            let sub = expand_rays_unchecked(rank, &split_rays(rank, &f.simples))?;
            for (m, k) in sub {
                add_to(&mut out, m.direct_sum(&chains)?, &k * &c);
            }
        } else {
            let parts: Vec<(i64, i64)> = f.simples.iter().map(|&x| (x, 1)).collect();
            add_to(
                &mut out,
                TubeModule::from_parts(rank, &parts)?.direct_sum(&chains)?,
                c,
            );
        }
    }
    Ok(out)
}

/// Expands a product of simple characters by folding each ray of
/// consecutive letters into uniserial chains. Verified by expansion.
pub fn expand_simple_product(rank: usize, word: &[i64]) -> Result<Combination> {
    if rank == 0 {
        return Err(Error::invalid("rank must be at least 1"));
    }
    expand_rays(rank, &split_rays(rank, word))
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

    fn comb(rank: usize, items: &[(&str, i64)]) -> Combination {
        let mut c = Combination::new();
        for (m, k) in items {
            add_to(&mut c, tm(rank, m), BigInt::from(*k));
        }
        c
    }

    #[test]
    fn rigid_enumeration_examples() {
        assert_eq!(enumerate_rigid(1, &dv(&[5])).unwrap(), vec![tm(1, "0")]);
        assert_eq!(
            enumerate_rigid(2, &dv(&[1, 1])).unwrap(),
            vec![tm(2, "0"), tm(2, "E(1,1)"), tm(2, "E(2,1)")]
        );
        let got = enumerate_rigid(2, &dv(&[3, 0])).unwrap();
        let want: Vec<TubeModule> = (0..=3u32).map(|m| e_power(2, 1, m)).collect();
        assert_eq!(got, want);
    }

    fn e_power(rank: usize, i: i64, m: u32) -> TubeModule {
        TubeModule::from_parts(rank, &vec![(i, 1); m as usize]).unwrap()
    }

    #[test]
    fn rigid_enumeration_is_tau_closed() {
        let bound = dv(&[2, 2, 2]);
        let all = enumerate_rigid(3, &bound).unwrap();
        for m in &all {
            assert!(all.contains(&m.tau()));
        }
    }

    #[test]
    fn worked_example_word() {
        let got = expand_simple_product(4, &[1, 2, 3, 4, 2]).unwrap();
        let want = comb(
            4,
            &[
                ("E(1,4)+E(2,1)", 1),
                ("E(1,2)+E(2,1)", 1),
                ("E(1,2)+E(4,1)", 1),
                ("E(2,3)", 1),
                ("E(2,1)", 1),
                ("E(4,1)", 2),
            ],
        );
        assert_eq!(got, want);
    }

    #[test]
    fn rotated_word_gives_the_long_chain() {
        let got = expand_simple_product(4, &[2, 3, 4, 1, 2]).unwrap();
        let want = comb(
            4,
            &[
                ("E(2,5)", 1),
                ("E(2,3)", 1),
                ("E(2,2)+E(2,1)", 1),
                ("E(1,2)+E(2,1)", 1),
                ("E(2,1)", 1),
                ("E(1,2)+E(4,1)", 1),
                ("E(4,1)", 1),
            ],
        );
        assert_eq!(got, want);
    }

    #[test]
    fn small_words() {
        assert_eq!(
            expand_simple_product(3, &[1]).unwrap(),
            comb(3, &[("E(1,1)", 1)])
        );
        assert_eq!(
            expand_simple_product(2, &[1, 2]).unwrap(),
            comb(2, &[("E(1,2)", 1), ("0", 1)])
        );
        assert_eq!(expand_simple_product(3, &[]).unwrap(), comb(3, &[("0", 1)]));
        assert!(expand_rays(3, &[vec![1, 3]]).is_err());
    }

    #[test]
    fn decompose_examples() {
        let opts = DecomposeOptions::default();
        let d = decompose(&Target::Poly(LaurentPoly::constant(3, 7)), &opts).unwrap();
        assert_eq!(d.coeffs, comb(3, &[("0", 7)]));

        let d = decompose(&Target::Module(tm(4, "E(2,5)")), &opts).unwrap();
        assert_eq!(d.coeffs, comb(4, &[("E(2,1)", 2), ("E(4,1)", 1)]));
        assert_eq!(d.to_string(), "{E(2,1): 2, E(4,1): 1}");

        let d = decompose(&Target::Module(tm(4, "E(1,4)+E(2,1)")), &opts).unwrap();
        assert_eq!(d.coeffs, comb(4, &[("E(2,2)+E(2,1)", 1), ("E(2,1)", 2)]));
    }

    #[test]
    fn worked_example_relation() {
        let opts = DecomposeOptions::default();
        let dec = |s: &str| decompose(&Target::Module(tm(4, s)), &opts).unwrap().coeffs;
        let mut total = Combination::new();
        for (s, sign) in [
            ("E(1,4)+E(2,1)", 1),
            ("E(2,5)", -1),
            ("E(2,2)+E(2,1)", -1),
            ("E(4,1)", 1),
        ] {
            for (m, c) in dec(s) {
                add_to(&mut total, m, c * sign);
            }
        }
        assert!(total.is_empty());
    }

    #[test]
    fn rank_one_decomposes_to_constants() {
        let d = decompose(
            &Target::Module(tm(1, "E(1,3)+E(1,1)")),
            &DecomposeOptions::default(),
        )
        .unwrap();
        assert_eq!(d.coeffs, comb(1, &[("0", 8)]));
    }

    #[test]
    fn products_and_polynomials_agree() {
        let opts = DecomposeOptions::default();
        let a = decompose(
            &Target::Product(vec![tm(3, "E(1,4)"), tm(3, "E(2,2)")]),
            &opts,
        )
        .unwrap();
        let p = char_module(&tm(3, "E(1,4)+E(2,2)"));
        let b = decompose(&Target::Poly(p), &opts).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn non_members_are_rejected() {
        let p = LaurentPoly::var(3, 1);
        assert!(matches!(
            decompose(&Target::Poly(p), &DecomposeOptions::default()),
            Err(Error::Decomposition(_))
        ));
    }

    #[test]
    fn independence_examples() {
        let r = independence_check(&[tm(2, "0"), tm(2, "E(1,1)")]).unwrap();
        assert!(r.independent);
        let r = independence_check(&[tm(2, "E(1,1)+E(2,1)"), tm(2, "0")]).unwrap();
        assert!(!r.independent);
        assert_eq!(r.relation, Some(vec![BigInt::from(1), BigInt::from(-4)]));
    }

    #[test]
    fn simple_families_are_independent() {
        let mut mods = Vec::new();
        for i in 1..=3 {
            for a in 0..2 {
                for b in 0..2 {
                    mods.push(crate::character::e_family(3, &[a, b], i).unwrap());
                }
            }
        }
        mods.sort();
        mods.dedup();
        assert!(independence_check(&mods).unwrap().independent);
    }

    #[test]
    fn rank_reduction_lemma() {
        let (lhs, rhs) = lemma_rank_reduction(2, 1).unwrap();
        assert_eq!(lhs, tm(2, "E(1,2)"));
        assert_eq!(rhs, comb(2, &[("0", 2 + 1)]));
        let (_, rhs) = lemma_rank_reduction(3, 1).unwrap();
        assert_eq!(rhs, comb(3, &[("E(2,1)", 1), ("0", 2)]));
        let (_, rhs) = lemma_rank_reduction(4, 2).unwrap();
        assert_eq!(rhs, comb(4, &[("E(3,2)", 1), ("0", 2)]));
        assert!(lemma_rank_reduction(1, 1).is_err());
    }

    #[test]
    fn long_summand_identity() {
        for r in 2..6usize {
            let ri = r as i64;
            for i in 1..=ri {
                for n in ri..=3 * ri {
                    let m = TubeModule::indec(r, i, n as u32).unwrap();
                    let terms = rewrite_step(&m).unwrap().unwrap();
                    let rhs = char_combination(r, terms.iter().map(|(c, t)| (c, t))).unwrap();
                    assert_eq!(rhs, char_module(&m), "r={r} i={i} n={n}");
                    assert!(terms.iter().all(|(_, t)| t.total_dim() < m.total_dim()));
                }
            }
        }
    }

    #[test]
    fn json_rendering() {
        let d = decompose(
            &Target::Module(tm(4, "E(2,5)")),
            &DecomposeOptions::default(),
        )
        .unwrap();
        assert_eq!(
            d.to_json_value().to_string(),
            r#"{"rank":4,"terms":[{"coeff":2,"module":"E(2,1)"},{"coeff":1,"module":"E(4,1)"}]}"#
        );
    }
}
