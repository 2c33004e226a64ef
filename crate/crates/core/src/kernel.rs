//! Conjugation-twisted equations over a Coxeter element, type-resolved
//! counting, decomposition numbers and fixed-point polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::abslen::{parabolic_type, LengthTable, ParabolicType};
use crate::error::KernelError;
use crate::groups::{Elem, ReflectionGroup};
use crate::ncp::Interval;
use crate::sieve::{CoxeterPowers, Mode};

pub const DEFAULT_SOLVE_BUDGET: u128 = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// product = c
    Eq,
    /// product ≤_T c
    Leq,
}

impl FromStr for Relation {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "eq" | "=" | "equals_c" => Ok(Relation::Eq),
            "leq" | "<=" | "leq_c" => Ok(Relation::Leq),
            _ => Err(format!("unknown relation `{s}` (expected eq or leq)")),
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Eq => "eq",
            Relation::Leq => "leq",
        })
    }
}

/// One factor c^e·w_slot·c^{−e} of the product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub slot: usize,
    pub exp: i64,
}

/// An unknown with an allowed range of absolute lengths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slot {
    pub min_len: usize,
    pub max_len: usize,
}

/// Product of conjugates of the unknowns, compared against c.
///
/// Every solution is a minimal factorisation: the absolute length of the
/// product equals the sum of the factor lengths. With `centralizer = Some(k)`
/// each unknown must also commute with c^k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistedSystem {
    pub slots: Vec<Slot>,
    pub factors: Vec<Factor>,
    pub relation: Relation,
    pub centralizer: Option<i64>,
}

impl TwistedSystem {
    /// One unknown w and the product ∏_j c^{e_j} w c^{−e_j}.
    pub fn single(exps: &[i64], relation: Relation, len: usize) -> Self {
        TwistedSystem {
            slots: vec![Slot { min_len: len, max_len: len }],
            factors: exps.iter().map(|&exp| Factor { slot: 0, exp }).collect(),
            relation,
            centralizer: None,
        }
    }

    /// Slots in sequence, each with its own exponent list: ∏_slots ∏_j.
    pub fn sequential(slots: &[(Vec<i64>, usize)], relation: Relation) -> Self {
        let mut factors = Vec::new();
        for (s, (exps, _)) in slots.iter().enumerate() {
            factors.extend(exps.iter().map(|&exp| Factor { slot: s, exp }));
        }
        TwistedSystem {
            slots: slots.iter().map(|&(_, l)| Slot { min_len: l, max_len: l }).collect(),
            factors,
            relation,
            centralizer: None,
        }
    }

    pub fn with_centralizer(mut self, k: i64) -> Self {
        self.centralizer = Some(k);
        self
    }

    pub fn with_lengths(mut self, slot: usize, min_len: usize, max_len: usize) -> Self {
        self.slots[slot] = Slot { min_len, max_len };
        self
    }

    pub fn validate(&self) -> Result<(), KernelError> {
        if self.slots.is_empty() {
            return Err(KernelError::InvalidSystem("no unknowns".into()));
        }
        for (i, s) in self.slots.iter().enumerate() {
            if s.min_len == 0 || s.min_len > s.max_len {
                return Err(KernelError::InvalidSystem(format!("slot {i}: bad length range {}..{}", s.min_len, s.max_len)));
            }
            if !self.factors.iter().any(|f| f.slot == i) {
                return Err(KernelError::InvalidSystem(format!("slot {i} appears in no factor")));
            }
        }
        if let Some(f) = self.factors.iter().find(|f| f.slot >= self.slots.len()) {
            return Err(KernelError::InvalidSystem(format!("factor refers to missing slot {}", f.slot)));
        }
        Ok(())
    }

    /// Exponent list of each slot in factor order.
    pub fn exponents(&self, slot: usize) -> Vec<i64> {
        self.factors.iter().filter(|f| f.slot == slot).map(|f| f.exp).collect()
    }
}

impl fmt::Display for TwistedSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |s: usize| if self.slots.len() == 1 { "w".to_string() } else { format!("w{}", s + 1) };
        for fac in &self.factors {
            if fac.exp == 0 {
                write!(f, "({})", name(fac.slot))?;
            } else {
                write!(f, "(c^{} {} c^{})", fac.exp, name(fac.slot), -fac.exp)?;
            }
        }
        match self.relation {
            Relation::Eq => f.write_str(" = c")?,
            Relation::Leq => f.write_str(" <=_T c")?,
        }
        for (i, s) in self.slots.iter().enumerate() {
            if s.min_len == s.max_len {
                write!(f, ", l({}) = {}", name(i), s.min_len)?;
            } else {
                write!(f, ", {} <= l({}) <= {}", s.min_len, name(i), s.max_len)?;
            }
        }
        if let Some(k) = self.centralizer {
            write!(f, ", c^{k} w = w c^{k}")?;
        }
        Ok(())
    }
}

/// All ordered solution tuples, sorted by element index.
pub fn solve_twisted(
    g: &ReflectionGroup,
    c: Elem,
    l: &LengthTable,
    iv: &Interval,
    sys: &TwistedSystem,
    budget: u128,
) -> Result<Vec<Vec<Elem>>, KernelError> {
    sys.validate()?;
    let n = l.get(c);
    let cp = CoxeterPowers::new(g, c);
    // every factor of a minimal factorisation below c lies in [ε, c], and
    // the interval is stable under conjugation by c
    let pools: Vec<Vec<Elem>> = sys
        .slots
        .iter()
        .map(|s| {
            iv.elements()
                .iter()
                .copied()
                .filter(|&w| (s.min_len..=s.max_len).contains(&l.get(w)))
                .filter(|&w| sys.centralizer.is_none_or(|k| cp.conj(k, w) == w))
                .collect()
        })
        .collect();
    let size = pools.iter().fold(1u128, |acc, p| acc.saturating_mul(p.len() as u128));
    if size > budget {
        return Err(KernelError::BudgetExceeded { size, budget });
    }
    // checkpoints[s]: number of leading factors whose slots are all < s + 1
    let mut checkpoints = Vec::with_capacity(sys.slots.len());
    for s in 0..sys.slots.len() {
        checkpoints.push(sys.factors.iter().take_while(|f| f.slot <= s).count());
    }
    let search = Search { g, l, iv, cp: &cp, sys, pools: &pools, checkpoints, n };
    let mut out: Vec<Vec<Elem>> = pools[0]
        .par_iter()
        .flat_map_iter(|&w| {
            let mut found = Vec::new();
            let mut assign = vec![w];
            search.extend(&mut assign, &mut found);
            found
        })
        .collect();
    out.sort_unstable();
    Ok(out)
}

struct Search<'a> {
    g: &'a ReflectionGroup,
    l: &'a LengthTable,
    iv: &'a Interval,
    cp: &'a CoxeterPowers<'a>,
    sys: &'a TwistedSystem,
    pools: &'a [Vec<Elem>],
    checkpoints: Vec<usize>,
    n: usize,
}

impl Search<'_> {
    /// Product and total length of the first `k` factors, or None once the
    /// prefix stops being a minimal factorisation inside [ε, c].
    fn prefix(&self, assign: &[Elem], k: usize) -> Option<(Elem, usize)> {
        let mut x = self.g.identity();
        let mut total = 0;
        for f in &self.sys.factors[..k] {
            let w = assign[f.slot];
            x = self.g.mul(x, self.cp.conj(f.exp, w));
            total += self.l.get(w);
        }
        (total <= self.n && self.l.get(x) == total && self.iv.contains(x)).then_some((x, total))
    }

    fn extend(&self, assign: &mut Vec<Elem>, found: &mut Vec<Vec<Elem>>) {
        let s = assign.len() - 1;
        let Some((x, total)) = self.prefix(assign, self.checkpoints[s]) else {
            return;
        };
        if s + 1 == self.sys.slots.len() {
            let ok = match self.sys.relation {
                Relation::Eq => x == self.cp.c() && total == self.n,
                Relation::Leq => true,
            };
            if ok {
                found.push(assign.clone());
            }
            return;
        }
        for &w in &self.pools[s + 1] {
            assign.push(w);
            self.extend(assign, found);
            assign.pop();
        }
    }
}

/// Tally of solutions by the parabolic type of the product of their slots.
pub fn count_by_type(g: &ReflectionGroup, solutions: &[Vec<Elem>]) -> BTreeMap<String, u64> {
    let mut cache: FxHashMap<Elem, String> = FxHashMap::default();
    let mut out = BTreeMap::new();
    for sol in solutions {
        let x = sol.iter().fold(g.identity(), |acc, &w| g.mul(acc, w));
        let name = cache.entry(x).or_insert_with(|| display_type(&parabolic_type(g, x))).clone();
        *out.entry(name).or_insert(0) += 1;
    }
    out
}

fn display_type(t: &ParabolicType) -> String {
    if t.name.is_empty() {
        "1".to_string()
    } else {
        t.name.clone()
    }
}

/// Interval [ε, w] with the parabolic type of every element.
pub struct TypedInterval {
    iv: Interval,
    types: Vec<String>,
}

impl TypedInterval {
    pub fn new(g: &ReflectionGroup, l: &LengthTable, w: Elem) -> Self {
        let iv = Interval::new(g, l, w);
        let types = iv.elements().par_iter().map(|&x| parabolic_type(g, x).name).collect();
        TypedInterval { iv, types }
    }

    pub fn interval(&self) -> &Interval {
        &self.iv
    }

    pub fn type_of(&self, i: usize) -> &str {
        &self.types[i]
    }

    pub fn rank(&self) -> usize {
        self.iv.length(self.iv.top())
    }

    /// Factorisations top = c₁⋯c_d with Σℓ_T(cᵢ) = rank and cᵢ of type Tᵢ.
    pub fn decomposition_number(&self, types: &[&str]) -> Result<u128, KernelError> {
        let mut names = Vec::with_capacity(types.len());
        let mut total = 0;
        for t in types {
            let name = ParabolicType::normalize_name(t).ok_or_else(|| KernelError::UnknownType(t.to_string()))?;
            total += ParabolicType::rank_of_name(&name).ok_or_else(|| KernelError::UnknownType(t.to_string()))?;
            names.push(name);
        }
        if total != self.rank() {
            return Err(KernelError::RankMismatch { got: total, rank: self.rank() });
        }
        let mut memo = FxHashMap::default();
        Ok(self.count(&names, 0, self.iv.top(), &mut memo))
    }

    fn count(&self, names: &[String], k: usize, x: usize, memo: &mut FxHashMap<(usize, usize), u128>) -> u128 {
        if k + 1 == names.len() {
            return u128::from(self.types[x] == names[k]);
        }
        if let Some(&v) = memo.get(&(k, x)) {
            return v;
        }
        let mut total = 0;
        for &u in self.iv.below(x) {
            if self.types[u] == names[k] {
                let rest = self.iv.quotient(u, x).expect("u below x");
                total += self.count(names, k + 1, rest, memo);
            }
        }
        memo.insert((k, x), total);
        total
    }

    /// Minimal factorisations of the top element with prescribed factor lengths.
    pub fn length_factorisations(&self, lengths: &[usize]) -> u128 {
        fn go(t: &TypedInterval, lengths: &[usize], x: usize) -> u128 {
            match lengths {
                [] => u128::from(t.iv.length(x) == 0),
                [last] => u128::from(t.iv.length(x) == *last),
                [first, rest @ ..] => t
                    .iv
                    .below(x)
                    .iter()
                    .filter(|&&u| t.iv.length(u) == *first)
                    .map(|&u| go(t, rest, t.iv.quotient(u, x).expect("u below x")))
                    .sum(),
            }
        }
        go(self, lengths, self.iv.top())
    }
}

/// N_W(T₁, …, T_d) for the Coxeter element c of W.
pub fn decomposition_number(g: &ReflectionGroup, c: Elem, l: &LengthTable, types: &[&str]) -> Result<u128, KernelError> {
    TypedInterval::new(g, l, c).decomposition_number(types)
}

/// count · C(x, j) where x = m/divisor (φ) or (m+1)/divisor (ψ).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixTerm {
    #[serde(with = "big_string")]
    pub count: BigInt,
    pub divisor: u64,
    pub j: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixPolynomial {
    pub mode: Mode,
    #[serde(with = "big_string")]
    pub constant: BigInt,
    pub terms: Vec<FixTerm>,
}

impl FixPolynomial {
    fn base(&self, m: u64) -> u64 {
        match self.mode {
            Mode::Phi => m,
            Mode::Psi => m + 1,
        }
    }

    /// Value at m, or None when m is not admissible for some term.
    pub fn eval(&self, m: u64) -> Option<BigInt> {
        let b = self.base(m);
        let mut v = self.constant.clone();
        for t in &self.terms {
            if t.divisor == 0 || b % t.divisor != 0 {
                return None;
            }
            v += &t.count * binomial(b / t.divisor, t.j);
        }
        Some(v)
    }

    /// Coefficients in m, lowest degree first.
    pub fn coefficients(&self) -> Vec<BigRational> {
        let mut out = vec![BigRational::from_integer(self.constant.clone())];
        let shift = match self.mode {
            Mode::Phi => BigRational::zero(),
            Mode::Psi => BigRational::one(),
        };
        for t in &self.terms {
            // C(x, j) = ∏_{i<j} (x − i)/(i + 1), x = (m + shift)/d
            let d = BigRational::from_integer(BigInt::from(t.divisor));
            let mut poly = vec![BigRational::from_integer(t.count.clone())];
            for i in 0..t.j {
                let c0 = (&shift / &d - BigRational::from_integer(BigInt::from(i))) / BigRational::from_integer(BigInt::from(i + 1));
                let c1 = BigRational::one() / (&d * BigRational::from_integer(BigInt::from(i + 1)));
                let mut next = vec![BigRational::zero(); poly.len() + 1];
                for (k, a) in poly.iter().enumerate() {
                    next[k] += a * &c0;
                    next[k + 1] += a * &c1;
                }
                poly = next;
            }
            if out.len() < poly.len() {
                out.resize(poly.len(), BigRational::zero());
            }
            for (k, a) in poly.into_iter().enumerate() {
                out[k] += a;
            }
        }
        while out.len() > 1 && out.last().is_some_and(|a| a.is_zero()) {
            out.pop();
        }
        out
    }
}

impl fmt::Display for FixPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = match self.mode {
            Mode::Phi => "m",
            Mode::Psi => "(m+1)",
        };
        write!(f, "{}", self.constant)?;
        for t in &self.terms {
            if t.j == 1 {
                write!(f, " + {}*{var}/{}", t.count, t.divisor)?;
            } else {
                write!(f, " + {}*C({var}/{}, {})", t.count, t.divisor, t.j)?;
            }
        }
        Ok(())
    }
}

/// Integers as decimal strings in serialized output.
mod big_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

fn binomial(n: u64, k: u32) -> BigInt {
    let k = k as u64;
    if k > n {
        return BigInt::zero();
    }
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Counts feeding a fixed-point polynomial: solutions occupying one index
/// class (`singles`) and solutions spread over j distinct classes (`tuples[j]`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixParts {
    pub mode: Mode,
    pub divisor: u64,
    pub constant: u64,
    pub singles: Vec<u64>,
    pub tuples: BTreeMap<u32, u64>,
}

impl FixParts {
    pub fn new(mode: Mode, divisor: u64) -> Self {
        FixParts { mode, divisor, constant: 1, singles: Vec::new(), tuples: BTreeMap::new() }
    }
}

pub fn fix_polynomial(parts: &FixParts) -> FixPolynomial {
    let mut terms = Vec::new();
    let singles: u64 = parts.singles.iter().sum();
    if singles > 0 {
        terms.push(FixTerm { count: singles.into(), divisor: parts.divisor, j: 1 });
    }
    for (&j, &count) in &parts.tuples {
        if count > 0 {
            terms.push(FixTerm { count: count.into(), divisor: parts.divisor, j });
        }
    }
    FixPolynomial { mode: parts.mode, constant: parts.constant.into(), terms }
}

/// The solution counts n_{ℓ₁,…} of the E8 assembly.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NValues {
    #[serde(with = "big_string")]
    pub n11: BigInt,
    #[serde(with = "big_string")]
    pub n21: BigInt,
    #[serde(with = "big_string")]
    pub n31: BigInt,
    #[serde(with = "big_string")]
    pub n22: BigInt,
    #[serde(with = "big_string")]
    pub n111: BigInt,
    #[serde(with = "big_string")]
    pub n211: BigInt,
    #[serde(with = "big_string")]
    pub n1111: BigInt,
}

impl NValues {
    pub fn as_pairs(&self) -> [(&'static str, &BigInt); 7] {
        [
            ("n_{1,1}", &self.n11),
            ("n_{2,1}", &self.n21),
            ("n_{3,1}", &self.n31),
            ("n_{2,2}", &self.n22),
            ("n_{1,1,1}", &self.n111),
            ("n_{2,1,1}", &self.n211),
            ("n_{1,1,1,1}", &self.n1111),
        ]
    }
}

/// Key "W(T1,T2,…)" for a decomposition number, with canonical type names.
pub fn decomposition_key(ambient: &str, types: &[&str]) -> String {
    let norm = |t: &str| ParabolicType::normalize_name(t).unwrap_or_else(|| t.to_string());
    let parts: Vec<String> = types.iter().map(|t| norm(t)).collect();
    format!("{}({})", norm(ambient), parts.join(","))
}

/// Decomposition numbers read by [`derive_n_values`], as (ambient, types).
pub const E8_DECOMPOSITIONS: &[(&str, &[&str])] = &[
    ("A2", &["A1", "A1"]),
    ("A3", &["A2", "A1"]),
    ("A3", &["A1^2", "A1"]),
    ("A3", &["A1", "A1", "A1"]),
    ("A4", &["A3", "A1"]),
    ("A4", &["A1*A2", "A1"]),
    ("A4", &["A2", "A2"]),
    ("A4", &["A1^2", "A1^2"]),
    ("A4", &["A2", "A1^2"]),
    ("A4", &["A2", "A1", "A1"]),
    ("A4", &["A1^2", "A1", "A1"]),
    ("A4", &["A1", "A1", "A1", "A1"]),
    ("D4", &["A3", "A1"]),
    ("D4", &["A1^3", "A1"]),
    ("D4", &["A2", "A2"]),
    ("D4", &["A2", "A1^2"]),
    ("D4", &["A2", "A1", "A1"]),
    ("D4", &["A1^2", "A1", "A1"]),
    ("D4", &["A1", "A1", "A1", "A1"]),
];

/// Parabolic types whose solution counts enter [`derive_n_values`].
pub const E8_TYPES: &[&str] = &["A1^2", "A2", "A1^3", "A1*A2", "A3", "A1^2*A2", "A1*A3", "A2^2", "A4", "D4"];

/// Evaluates the seven counting formulas that split solutions of a given
/// parabolic type into ordered factorisations with prescribed lengths.
///
/// The A3 factor with lengths (2, 1) is taken over both length-2 types,
/// N(A2, A1) + N(A1^2, A1); every other decomposition number is used as is.
pub fn derive_n_values(
    type_counts: &BTreeMap<String, u64>,
    decomposition_numbers: &BTreeMap<String, u128>,
) -> Result<NValues, KernelError> {
    let k = |t: &str| -> Result<BigInt, KernelError> {
        let name = ParabolicType::normalize_name(t).ok_or_else(|| KernelError::UnknownType(t.to_string()))?;
        Ok(type_counts.get(&name).copied().map(BigInt::from).unwrap_or_default())
    };
    let nd = |w: &str, ts: &[&str]| -> Result<BigInt, KernelError> {
        let key = decomposition_key(w, ts);
        decomposition_numbers.get(&key).map(|&v| BigInt::from(v)).ok_or(KernelError::MissingInput(key))
    };
    let big = |v: u64| BigInt::from(v);

    let a2 = nd("A2", &["A1", "A1"])?;
    let a3_21 = nd("A3", &["A2", "A1"])? + nd("A3", &["A1^2", "A1"])?;
    let a3_111 = nd("A3", &["A1", "A1", "A1"])?;

    let n11 = k("A1^2")? * big(2) + k("A2")? * &a2;
    let n21 = k("A1^3")? * big(3) + k("A1*A2")? * (big(1) + &a2) + k("A3")? * &a3_21;
    let n31 = k("A1^2*A2")? * (big(2) + &a2)
        + k("A1*A3")? * (big(1) + &a3_21)
        + k("A2^2")? * (big(2) * &a2)
        + k("A4")? * (nd("A4", &["A3", "A1"])? + nd("A4", &["A1*A2", "A1"])?)
        + k("D4")? * (nd("D4", &["A3", "A1"])? + nd("D4", &["A1^3", "A1"])?);
    let n22 = k("A1^2*A2")? * (big(2) + big(2) * &a2)
        + k("A1*A3")? * (big(2) * &a3_21)
        + k("A2^2")? * (big(2) + &a2 * &a2)
        + k("A4")? * (nd("A4", &["A2", "A2"])? + nd("A4", &["A1^2", "A1^2"])? + big(2) * nd("A4", &["A2", "A1^2"])?)
        + k("D4")? * (nd("D4", &["A2", "A2"])? + big(2) * nd("D4", &["A2", "A1^2"])?);
    let n111 = k("A1^3")? * big(6) + k("A1*A2")? * (big(3) * &a2) + k("A3")? * &a3_111;
    let n211 = k("A1^2*A2")? * (big(2) + &a2 + big(4) * &a2)
        + k("A1*A3")? * (big(2) * &a3_21 + &a3_111)
        + k("A2^2")? * (big(2) * &a2 + big(2) * &a2 * &a2)
        + k("A4")? * (nd("A4", &["A2", "A1", "A1"])? + nd("A4", &["A1^2", "A1", "A1"])?)
        + k("D4")? * (nd("D4", &["A2", "A1", "A1"])? + nd("D4", &["A1^2", "A1", "A1"])?);
    let n1111 = k("A1^2*A2")? * (big(12) * &a2)
        + k("A1*A3")? * (big(4) * &a3_111)
        + k("A2^2")? * (big(6) * &a2 * &a2)
        + k("A4")? * nd("A4", &["A1", "A1", "A1", "A1"])?
        + k("D4")? * nd("D4", &["A1", "A1", "A1", "A1"])?;
    Ok(NValues { n11, n21, n31, n22, n111, n211, n1111 })
}

/// Reported E8 solution counts of the p = 15m/2 case, by type of w_i.
pub fn e8_type_counts() -> BTreeMap<String, u64> {
    [
        ("A1", 45),
        ("A1^2", 150),
        ("A2", 100),
        ("A1^3", 75),
        ("A1*A2", 165),
        ("A3", 90),
        ("A1^2*A2", 15),
        ("A1*A3", 45),
        ("A2^2", 5),
        ("A4", 18),
        ("D4", 5),
    ]
    .into_iter()
    .map(|(t, k)| (t.to_string(), k))
    .collect()
}

/// The E8 p = 15m/2 fixed-point polynomial assembled from type counts and n-values.
pub fn e8_fix_polynomial(type_counts: &BTreeMap<String, u64>, n: &NValues) -> Option<FixPolynomial> {
    use num_traits::ToPrimitive;
    let mut parts = FixParts::new(Mode::Phi, 2);
    parts.singles = type_counts.values().copied().collect();
    let pairs = &n.n11 + BigInt::from(2) * &n.n21 + BigInt::from(2) * &n.n31 + &n.n22;
    let triples = &n.n111 + BigInt::from(3) * &n.n211;
    parts.tuples.insert(2, pairs.to_u64()?);
    parts.tuples.insert(3, triples.to_u64()?);
    parts.tuples.insert(4, n.n1111.to_u64()?);
    Some(fix_polynomial(&parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abslen::{coxeter_element, length_table};
    use crate::catalog::load_catalog;
    use crate::groups::{build_group, BuildConfig};

    fn setup(name: &str) -> (ReflectionGroup, LengthTable, Elem, Interval) {
        let g = build_group(&load_catalog(name).unwrap(), &BuildConfig::default()).unwrap();
        let l = length_table(&g);
        let c = coxeter_element(&g, &l).unwrap();
        let iv = Interval::new(&g, &l, c);
        (g, l, c, iv)
    }

    fn count(g: &ReflectionGroup, l: &LengthTable, c: Elem, iv: &Interval, sys: &TwistedSystem) -> usize {
        solve_twisted(g, c, l, iv, sys, DEFAULT_SOLVE_BUDGET).unwrap().len()
    }

    #[test]
    fn h3_archetype() {
        let (g, l, c, iv) = setup("H3");
        assert_eq!(count(&g, &l, c, &iv, &TwistedSystem::single(&[0, -2, 1], Relation::Eq, 1)), 5);
        assert_eq!(count(&g, &l, c, &iv, &TwistedSystem::single(&[0, 3, -4], Relation::Eq, 1)), 5);
    }

    #[test]
    fn identity_pattern_gives_c() {
        let (g, l, c, iv) = setup("B3");
        let sols = solve_twisted(&g, c, &l, &iv, &TwistedSystem::single(&[0], Relation::Eq, 3), 1000).unwrap();
        assert_eq!(sols, vec![vec![c]]);
    }

    #[test]
    fn leq_contains_eq() {
        let (g, l, c, iv) = setup("A3");
        let eq = solve_twisted(&g, c, &l, &iv, &TwistedSystem::single(&[0, 1], Relation::Eq, 1), 1000).unwrap();
        let leq = solve_twisted(&g, c, &l, &iv, &TwistedSystem::single(&[0, 1], Relation::Leq, 1), 1000).unwrap();
        assert!(eq.iter().all(|s| leq.contains(s)));
    }

    #[test]
    fn f4_cases() {
        let (g, l, c, iv) = setup("F4");
        let d = TwistedSystem::single(&[0, 1], Relation::Eq, 2).with_centralizer(3);
        assert_eq!(count(&g, &l, c, &iv, &d), 3);
        let d2 = TwistedSystem::single(&[0, 1], Relation::Leq, 1).with_centralizer(3);
        assert_eq!(count(&g, &l, c, &iv, &d2), 0);
    }

    #[test]
    fn budget_is_enforced() {
        let (g, l, c, iv) = setup("A3");
        let sys = TwistedSystem::single(&[0, 1], Relation::Leq, 1);
        assert!(matches!(solve_twisted(&g, c, &l, &iv, &sys, 2), Err(KernelError::BudgetExceeded { .. })));
    }

    #[test]
    fn invalid_systems() {
        let sys = TwistedSystem::single(&[0], Relation::Eq, 0);
        assert!(sys.validate().is_err());
        let mut sys = TwistedSystem::single(&[0], Relation::Eq, 1);
        sys.slots.push(Slot { min_len: 1, max_len: 1 });
        assert!(sys.validate().is_err());
    }

    #[test]
    fn types_of_length_two_in_a3() {
        let (g, l, c, iv) = setup("A3");
        let sols: Vec<Vec<Elem>> = iv.elements().iter().filter(|&&w| l.get(w) == 2).map(|&w| vec![w]).collect();
        let by_type = count_by_type(&g, &sols);
        assert_eq!(by_type.values().sum::<u64>(), sols.len() as u64);
        assert_eq!(by_type.get("A2"), Some(&4));
        assert_eq!(by_type.get("A1^2"), Some(&2));
        let _ = c;
    }

    #[test]
    fn small_decomposition_numbers() {
        let (g, l, c, _) = setup("A2");
        assert_eq!(decomposition_number(&g, c, &l, &["A1", "A1"]).unwrap(), 3);
        let (g, l, c, _) = setup("A1");
        assert_eq!(decomposition_number(&g, c, &l, &["A1"]).unwrap(), 1);
        let (g, l, c, _) = setup("A3");
        let t = TypedInterval::new(&g, &l, c);
        assert_eq!(t.decomposition_number(&["A2", "A1"]).unwrap(), 4);
        assert_eq!(t.decomposition_number(&["A1^2", "A1"]).unwrap(), 2);
        assert_eq!(t.length_factorisations(&[2, 1]), 6);
        assert_eq!(t.decomposition_number(&["A1", "A1", "A1"]).unwrap(), 16);
        assert!(matches!(t.decomposition_number(&["A2"]), Err(KernelError::RankMismatch { got: 2, rank: 3 })));
        assert!(matches!(t.decomposition_number(&["Q7", "A1"]), Err(KernelError::UnknownType(_))));
    }

    #[test]
    fn ordered_sums_match_length_counts() {
        let (g, l, c, _) = setup("A3");
        let t = TypedInterval::new(&g, &l, c);
        let twos = ["A2", "A1^2"];
        let sum: u128 = twos.iter().map(|a| t.decomposition_number(&["A1", a]).unwrap()).sum();
        assert_eq!(sum, t.length_factorisations(&[1, 2]));
    }

    #[test]
    fn h4_polynomial() {
        let mut parts = FixParts::new(Mode::Phi, 2);
        parts.singles = vec![15, 8];
        parts.tuples.insert(2, 30);
        let p = fix_polynomial(&parts);
        for m in (2..=20).step_by(2) {
            let expect = BigInt::from((3 * m + 2) * (5 * m + 2) / 4);
            assert_eq!(p.eval(m).unwrap(), expect);
        }
        assert_eq!(p.eval(3), None);
        let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        assert_eq!(p.coefficients(), vec![r(1, 1), r(4, 1), r(15, 4)]);
    }

    #[test]
    fn empty_polynomial_is_one() {
        let p = fix_polynomial(&FixParts::new(Mode::Psi, 3));
        assert_eq!(p.eval(2).unwrap(), BigInt::one());
        assert_eq!(p.coefficients(), vec![BigRational::one()]);
    }

    #[test]
    fn psi_shift() {
        let mut parts = FixParts::new(Mode::Psi, 3);
        parts.constant = 0;
        parts.singles = vec![5];
        let p = fix_polynomial(&parts);
        assert_eq!(p.eval(2).unwrap(), BigInt::from(5));
        assert_eq!(p.eval(3), None);
    }

    #[test]
    fn n_values_need_inputs() {
        let err = derive_n_values(&e8_type_counts(), &BTreeMap::new()).unwrap_err();
        assert!(matches!(err, KernelError::MissingInput(_)));
        let zeros: BTreeMap<String, u128> =
            E8_DECOMPOSITIONS.iter().map(|(w, ts)| (decomposition_key(w, ts), 0)).collect();
        let n = derive_n_values(&BTreeMap::new(), &zeros).unwrap();
        assert_eq!(n, NValues::default());
    }

    #[test]
    fn keys_are_canonical() {
        assert_eq!(decomposition_key("A4", &["A2*A1", "A1"]), "A4(A1*A2,A1)");
        assert_eq!(decomposition_key("D4", &["A1*A1*A1", "A1"]), "D4(A1^3,A1)");
    }
}
