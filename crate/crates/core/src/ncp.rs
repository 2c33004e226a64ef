//! m-divisible non-crossing partitions and the q-Fuß–Catalan numbers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::abslen::{coxeter_element, length_table, power_is_central, LengthTable};
use crate::catalog::CatalogEntry;
use crate::cyclo::{QFactored, RootValue};
use crate::error::NcpError;
use crate::groups::{verify_group_invariants, CheckResult, Elem, ReflectionGroup};

pub const DEFAULT_NCM_BUDGET: u64 = 10_000_000;

/// ∏ (mh + d_i)/d_i.
pub fn fuss_catalan(entry: &CatalogEntry, m: u64) -> Result<BigInt, NcpError> {
    let h = entry.coxeter_number();
    let mut q = BigRational::one();
    for &d in &entry.degrees {
        q *= BigRational::new(BigInt::from(m * h + d), BigInt::from(d));
    }
    if !q.is_integer() {
        return Err(NcpError::NonInteger);
    }
    Ok(q.to_integer())
}

/// Cat^m(W; q) = ∏ [mh + d_i]_q / [d_i]_q.
pub fn qcatalan(entry: &CatalogEntry, m: u64) -> Result<QFactored, NcpError> {
    let h = entry.coxeter_number();
    let mut f = QFactored::one();
    for &d in &entry.degrees {
        f = f.mul(&QFactored::q_integer(m * h + d)).div(&QFactored::q_integer(d));
    }
    if let Some((&d, &e)) = f.factors().iter().find(|(_, &e)| e < 0) {
        return Err(NcpError::Cyclo(crate::error::CycloError::NotPolynomial { d, e }));
    }
    Ok(f)
}

/// Value of Cat^m(W; q) at a root of unity, with the index sets
/// S₁ = {i : M | mh + d_i} and S₂ = {i : M | d_i} for the order M > 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootEval {
    pub order: u64,
    pub s1: Vec<usize>,
    pub s2: Vec<usize>,
    pub value: BigInt,
}

/// Evaluate at q = ζ_denom^p, where denom is mh (φ) or (m+1)h (ψ).
pub fn cat_at_root(entry: &CatalogEntry, m: u64, denom: u64, p: u64) -> Result<RootEval, NcpError> {
    let h = entry.coxeter_number();
    if denom != m * h && denom != (m + 1) * h {
        return Err(NcpError::BadDenominator { denom });
    }
    if p >= denom {
        return Err(NcpError::BadExponent { denom, p });
    }
    let order = denom / denom.gcd(&p);
    let (s1, s2) = if order > 1 {
        let s1 = (0..entry.rank).filter(|&i| (m * h + entry.degrees[i]) % order == 0).collect();
        let s2 = (0..entry.rank).filter(|&i| entry.degrees[i] % order == 0).collect();
        (s1, s2)
    } else {
        (Vec::new(), Vec::new())
    };
    let f = qcatalan(entry, m)?;
    let value = match f.eval_at_root(denom, p as i64)? {
        RootValue::Zero => BigInt::zero(),
        RootValue::Value(v) => {
            let r = v.as_rational().ok_or_else(|| NcpError::NotInteger { denom, p, value: v.to_string() })?;
            if !r.is_integer() {
                return Err(NcpError::NotInteger { denom, p, value: r.to_string() });
            }
            r.to_integer()
        }
    };
    Ok(RootEval { order, s1, s2, value })
}

/// The interval [ε, c] under ≤_T with its order relation and quotients.
pub struct Interval {
    elems: Vec<Elem>,
    pos: rustc_hash::FxHashMap<Elem, usize>,
    /// below[x]: indices u with u ≤_T x, increasing.
    below: Vec<Vec<usize>>,
    /// quotient[x][k] = index of u⁻¹x for u = below[x][k].
    quotient: Vec<Vec<usize>>,
    lengths: Vec<usize>,
    top: usize,
}

impl Interval {
    pub fn new(g: &ReflectionGroup, l: &LengthTable, c: Elem) -> Self {
        let n = l.get(c);
        let elems: Vec<Elem> = (0..g.order() as Elem)
            .into_par_iter()
            .filter(|&w| l.get(w) + l.get(g.mul(g.inv(w), c)) == n)
            .collect();
        let pos: rustc_hash::FxHashMap<Elem, usize> = elems.iter().enumerate().map(|(i, &w)| (w, i)).collect();
        let lengths: Vec<usize> = elems.iter().map(|&w| l.get(w)).collect();
        let rows: Vec<(Vec<usize>, Vec<usize>)> = elems
            .par_iter()
            .map(|&x| {
                let lx = l.get(x);
                let mut b = Vec::new();
                let mut q = Vec::new();
                for (i, &u) in elems.iter().enumerate() {
                    if lengths[i] > lx {
                        continue;
                    }
                    let r = g.mul(g.inv(u), x);
                    if lengths[i] + l.get(r) == lx {
                        b.push(i);
                        q.push(pos[&r]);
                    }
                }
                (b, q)
            })
            .collect();
        let (below, quotient) = rows.into_iter().unzip();
        let top = pos[&c];
        Interval { elems, pos, below, quotient, lengths, top }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elems
    }

    pub fn contains(&self, w: Elem) -> bool {
        self.pos.contains_key(&w)
    }

    pub fn index_of(&self, w: Elem) -> Option<usize> {
        self.pos.get(&w).copied()
    }

    pub fn length(&self, i: usize) -> usize {
        self.lengths[i]
    }

    /// u ≤_T x for interval indices.
    pub fn leq(&self, u: usize, x: usize) -> bool {
        self.below[x].binary_search(&u).is_ok()
    }

    pub fn below(&self, x: usize) -> &[usize] {
        &self.below[x]
    }

    /// Index of u⁻¹x, when u ≤_T x.
    pub fn quotient(&self, u: usize, x: usize) -> Option<usize> {
        self.below[x].binary_search(&u).ok().map(|k| self.quotient[x][k])
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Number of minimal factorisations of interval element `x` into `k` factors.
    pub fn count_factorisations(&self, x: usize, k: usize) -> u128 {
        let mut cur: Vec<u128> = vec![1; self.len()];
        for _ in 1..k {
            cur = (0..self.len())
                .map(|y| self.below[y].iter().zip(&self.quotient[y]).map(|(_, &q)| cur[q]).sum())
                .collect();
        }
        cur[x]
    }

    /// Reflexivity, antisymmetry and transitivity of ≤_T on the interval.
    pub fn is_partial_order(&self) -> bool {
        (0..self.len()).into_par_iter().all(|x| {
            self.leq(x, x)
                && self.below[x].iter().all(|&u| u == x || !self.leq(x, u))
                && self.below[x].iter().all(|&u| self.below[u].iter().all(|&v| self.leq(v, x)))
        })
    }
}

/// Structural checks beyond [`verify_group_invariants`]: the Coxeter
/// element, the two length/codimension relations, ≤_T on [ε, c] and
/// centrality of c^{h/d} for every d > 1 dividing all degrees.
pub fn verify_structure(g: &ReflectionGroup) -> Vec<CheckResult> {
    let mut out = verify_group_invariants(g);
    let l = length_table(g);
    let n = g.rank();
    let c = match coxeter_element(g, &l) {
        Ok(c) => c,
        Err(e) => {
            out.push(CheckResult { name: "Coxeter element".into(), pass: false, detail: e.to_string() });
            return out;
        }
    };
    let h = g.entry().coxeter_number();
    out.push(CheckResult {
        name: "Coxeter element".into(),
        pass: g.element_order(c) as u64 == h && l.get(c) == n,
        detail: format!("order {} (h = {h}), length {} (n = {n})", g.element_order(c), l.get(c)),
    });
    let below = (0..g.order() as Elem).into_par_iter().filter(|&w| l.get(w) + g.fix_dim(w) < n).count();
    out.push(CheckResult {
        name: "length >= codimension of Fix".into(),
        pass: below == 0,
        detail: format!("{below} violations"),
    });
    if g.entry().real {
        let off = (0..g.order() as Elem).into_par_iter().filter(|&w| l.get(w) + g.fix_dim(w) != n).count();
        out.push(CheckResult {
            name: "length = codimension of Fix (real group)".into(),
            pass: off == 0,
            detail: format!("{off} violations"),
        });
    }
    let iv = Interval::new(g, &l, c);
    out.push(CheckResult {
        name: "absolute order on [1, c]".into(),
        pass: iv.is_partial_order(),
        detail: format!("{} elements", iv.len()),
    });
    let gcd = g.entry().degrees.iter().fold(0u64, |a, &d| a.gcd(&d));
    for d in crate::cyclo::divisors(gcd).into_iter().filter(|&d| d > 1) {
        out.push(CheckResult {
            name: format!("c^(h/{d}) central"),
            pass: power_is_central(g, c, d),
            detail: format!("c^{} commutes with the generators", h / d),
        });
    }
    out
}

/// An element (w₀; w₁, …, w_m) of NC^m(W).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NcpTuple(pub Vec<Elem>);

impl NcpTuple {
    pub fn m(&self) -> usize {
        self.0.len() - 1
    }

    pub fn parts(&self) -> &[Elem] {
        &self.0
    }

    /// (c; ε, …, ε).
    pub fn top(c: Elem, m: usize) -> Self {
        let mut v = vec![0; m + 1];
        v[0] = c;
        NcpTuple(v)
    }

    pub fn product(&self, g: &ReflectionGroup) -> Elem {
        self.0.iter().fold(g.identity(), |acc, &w| g.mul(acc, w))
    }
}

/// All of NC^m(W), depth-first by increasing element index in each slot.
pub fn enumerate_ncm(
    g: &ReflectionGroup,
    iv: &Interval,
    m: usize,
    budget: u64,
) -> Result<Vec<NcpTuple>, NcpError> {
    let count = iv.count_factorisations(iv.top(), m + 1);
    if count > budget as u128 {
        return Err(NcpError::BudgetExceeded { m, count: count.min(u64::MAX as u128) as u64, budget });
    }
    let _ = g;
    let top = iv.top();
    let branches: Vec<Vec<NcpTuple>> = iv
        .below(top)
        .par_iter()
        .zip(iv.quotient[top].par_iter())
        .map(|(&w0, &rest)| {
            let mut out = Vec::new();
            let mut prefix = vec![iv.elems[w0]];
            extend(iv, rest, m, &mut prefix, &mut out);
            out
        })
        .collect();
    Ok(branches.into_iter().flatten().collect())
}

fn extend(iv: &Interval, rest: usize, remaining: usize, prefix: &mut Vec<Elem>, out: &mut Vec<NcpTuple>) {
    if remaining == 1 {
        prefix.push(iv.elems[rest]);
        out.push(NcpTuple(prefix.clone()));
        prefix.pop();
        return;
    }
    for (&u, &q) in iv.below[rest].iter().zip(&iv.quotient[rest]) {
        prefix.push(iv.elems[u]);
        extend(iv, q, remaining - 1, prefix, out);
        prefix.pop();
    }
}

/// |NC^m(W)| from the interval, without listing tuples.
pub fn count_ncm(iv: &Interval, m: usize) -> u128 {
    iv.count_factorisations(iv.top(), m + 1)
}

pub fn to_u64(x: &BigInt) -> Option<u64> {
    x.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abslen::{coxeter_element, length_table, leq_t};
    use crate::catalog::load_catalog;
    use crate::groups::{build_group, BuildConfig};

    fn setup(name: &str) -> (ReflectionGroup, LengthTable, Elem, Interval) {
        let g = build_group(&load_catalog(name).unwrap(), &BuildConfig::default()).unwrap();
        let l = length_table(&g);
        let c = coxeter_element(&g, &l).unwrap();
        let iv = Interval::new(&g, &l, c);
        (g, l, c, iv)
    }

    #[test]
    fn fuss_catalan_values() {
        let e = |n| load_catalog(n).unwrap();
        assert_eq!(fuss_catalan(&e("A2"), 1).unwrap(), BigInt::from(5));
        assert_eq!(fuss_catalan(&e("H3"), 1).unwrap(), BigInt::from(32));
        assert_eq!(fuss_catalan(&e("H3"), 2).unwrap(), BigInt::from(143));
        assert_eq!(fuss_catalan(&e("G4"), 2).unwrap(), BigInt::from(12));
    }

    #[test]
    fn qcatalan_shape() {
        let h3 = load_catalog("H3").unwrap();
        assert_eq!(qcatalan(&h3, 3).unwrap().degree(), 90);
        let a2 = load_catalog("A2").unwrap();
        assert_eq!(qcatalan(&a2, 1).unwrap().at_one().unwrap(), BigRational::from_integer(5.into()));
    }

    #[test]
    fn root_values() {
        let h3 = load_catalog("H3").unwrap();
        assert_eq!(cat_at_root(&h3, 3, 30, 5).unwrap().value, BigInt::from(6));
        assert_eq!(cat_at_root(&h3, 2, 20, 2).unwrap().value, BigInt::from(3));
        assert_eq!(cat_at_root(&h3, 2, 30, 5).unwrap().value, BigInt::from(5));
        let r = cat_at_root(&h3, 2, 20, 0).unwrap();
        assert_eq!(r.value, BigInt::from(143));
        assert!(cat_at_root(&h3, 2, 21, 0).is_err());
        assert!(cat_at_root(&h3, 2, 20, 20).is_err());
    }

    #[test]
    fn s_sets_decide_zero() {
        let h3 = load_catalog("H3").unwrap();
        for p in 0..30 {
            let r = cat_at_root(&h3, 2, 30, p).unwrap();
            if r.s1.len() > r.s2.len() {
                assert!(r.value.is_zero());
            } else {
                assert_eq!(r.s1.len(), r.s2.len());
                assert!(!r.value.is_zero());
            }
        }
    }

    #[test]
    fn small_enumerations() {
        let (g, l, c, iv) = setup("A2");
        let nc = enumerate_ncm(&g, &iv, 1, DEFAULT_NCM_BUDGET).unwrap();
        assert_eq!(nc.len(), 5);
        assert!(nc.contains(&NcpTuple::top(c, 1)));
        for t in &nc {
            assert_eq!(t.product(&g), c);
            assert_eq!(t.parts().iter().map(|&w| l.get(w)).sum::<usize>(), 2);
        }
        let (g, _, c, iv) = setup("H3");
        for m in 1..=3 {
            let nc = enumerate_ncm(&g, &iv, m, DEFAULT_NCM_BUDGET).unwrap();
            assert_eq!(BigInt::from(nc.len()), fuss_catalan(g.entry(), m as u64).unwrap());
            assert!(nc.contains(&NcpTuple::top(c, m)));
        }
    }

    #[test]
    fn interval_matches_leq() {
        let (g, l, c, iv) = setup("B3");
        for w in 0..g.order() as Elem {
            assert_eq!(iv.contains(w), leq_t(&g, &l, w, c));
        }
        assert_eq!(iv.len(), 20);
    }

    #[test]
    fn budget_refusal() {
        let (g, _, _, iv) = setup("A3");
        assert!(matches!(enumerate_ncm(&g, &iv, 2, 10), Err(NcpError::BudgetExceeded { .. })));
    }

    #[test]
    fn structure_checks_pass() {
        for name in ["A3", "H3", "G4", "G25"] {
            let g = build_group(&load_catalog(name).unwrap(), &BuildConfig::default()).unwrap();
            let checks = verify_structure(&g);
            assert!(checks.iter().all(|c| c.pass), "{name}: {checks:?}");
        }
        let g = build_group(&load_catalog("G25").unwrap(), &BuildConfig::default()).unwrap();
        assert!(verify_structure(&g).iter().any(|c| c.name == "c^(h/3) central"));
    }
}
