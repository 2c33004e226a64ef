//! The cyclic actions φ and ψ on NC^m(W), fixed points, cyclic sieving
//! checks and the divisor reduction planner.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::CatalogEntry;
use crate::cyclo::divisors;
use crate::error::{NcpError, SieveError};
use crate::groups::{Elem, ReflectionGroup};
use crate::ncp::{cat_at_root, NcpTuple};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Phi,
    Psi,
}

impl Mode {
    /// mh for φ, (m+1)h for ψ.
    pub fn period(self, m: u64, h: u64) -> u64 {
        match self {
            Mode::Phi => m * h,
            Mode::Psi => (m + 1) * h,
        }
    }

    /// The modulus playing the role of m in the planner: m or m+1.
    fn split_modulus(self, m: u64) -> u64 {
        match self {
            Mode::Phi => m,
            Mode::Psi => m + 1,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Phi => "phi",
            Mode::Psi => "psi",
        })
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "phi" => Ok(Mode::Phi),
            "psi" => Ok(Mode::Psi),
            other => Err(format!("unknown mode `{other}` (expected phi or psi)")),
        }
    }
}

/// Powers of a fixed Coxeter element, for repeated conjugation.
pub struct CoxeterPowers<'a> {
    g: &'a ReflectionGroup,
    c: Elem,
    pow: Vec<Elem>,
    inv_pow: Vec<Elem>,
}

impl<'a> CoxeterPowers<'a> {
    pub fn new(g: &'a ReflectionGroup, c: Elem) -> Self {
        let h = g.element_order(c) as usize;
        let mut pow = Vec::with_capacity(h);
        let mut x = g.identity();
        for _ in 0..h {
            pow.push(x);
            x = g.mul(x, c);
        }
        let inv_pow = pow.iter().map(|&p| g.inv(p)).collect();
        CoxeterPowers { g, c, pow, inv_pow }
    }

    pub fn group(&self) -> &ReflectionGroup {
        self.g
    }

    pub fn c(&self) -> Elem {
        self.c
    }

    pub fn power(&self, k: i64) -> Elem {
        self.pow[k.rem_euclid(self.pow.len() as i64) as usize]
    }

    /// c^k w c^{−k}.
    pub fn conj(&self, k: i64, w: Elem) -> Elem {
        let i = k.rem_euclid(self.pow.len() as i64) as usize;
        if i == 0 {
            return w;
        }
        self.g.mul(self.g.mul(self.pow[i], w), self.inv_pow[i])
    }
}

/// φ^p in one step: with p = am + b the tail becomes
/// (c^{a+1}w_{m−b+1}c^{−a−1}, …, c^{a+1}w_m c^{−a−1}, c^a w_1 c^{−a}, …, c^a w_{m−b} c^{−a})
/// and the head is c times the inverse of the tail product.
pub fn phi_apply(cp: &CoxeterPowers, t: &NcpTuple, p: u64) -> NcpTuple {
    let g = cp.group();
    let m = t.m();
    let w = t.parts();
    let (a, b) = ((p / m as u64) as i64, (p % m as u64) as usize);
    let mut out = Vec::with_capacity(m + 1);
    out.push(0);
    for i in m - b + 1..=m {
        out.push(cp.conj(a + 1, w[i]));
    }
    for i in 1..=m - b {
        out.push(cp.conj(a, w[i]));
    }
    let tail = out[1..].iter().fold(g.identity(), |acc, &x| g.mul(acc, x));
    out[0] = g.mul(cp.c(), g.inv(tail));
    NcpTuple(out)
}

/// ψ^p in one step: with p = a(m+1) + b the whole tuple rotates by b, the
/// wrapped entries conjugated by c^{a+1} and the others by c^a.
pub fn psi_apply(cp: &CoxeterPowers, t: &NcpTuple, p: u64) -> NcpTuple {
    let m = t.m();
    let w = t.parts();
    let (a, b) = ((p / (m as u64 + 1)) as i64, (p % (m as u64 + 1)) as usize);
    let mut out = Vec::with_capacity(m + 1);
    for i in m + 1 - b..=m {
        out.push(cp.conj(a + 1, w[i]));
    }
    for i in 0..=m - b {
        out.push(cp.conj(a, w[i]));
    }
    NcpTuple(out)
}

/// One application of φ, straight from its definition.
pub fn phi_step(cp: &CoxeterPowers, t: &NcpTuple) -> NcpTuple {
    let g = cp.group();
    let w = t.parts();
    let m = t.m();
    let x = cp.conj(1, w[m]);
    let mut out = vec![g.mul(g.mul(x, w[0]), g.inv(x)), x];
    out.extend_from_slice(&w[1..m]);
    NcpTuple(out)
}

/// One application of ψ, straight from its definition.
pub fn psi_step(cp: &CoxeterPowers, t: &NcpTuple) -> NcpTuple {
    let w = t.parts();
    let m = t.m();
    let mut out = vec![cp.conj(1, w[m])];
    out.extend_from_slice(&w[..m]);
    NcpTuple(out)
}

pub fn apply(cp: &CoxeterPowers, mode: Mode, t: &NcpTuple, p: u64) -> NcpTuple {
    match mode {
        Mode::Phi => phi_apply(cp, t, p),
        Mode::Psi => psi_apply(cp, t, p),
    }
}

/// |{t : action^p(t) = t}|.
pub fn fix_count(cp: &CoxeterPowers, tuples: &[NcpTuple], mode: Mode, p: u64) -> u64 {
    tuples.par_iter().filter(|t| apply(cp, mode, t, p) == **t).count() as u64
}

/// Orbit sizes of the action (generator p = 1), sorted.
pub fn orbit_sizes(cp: &CoxeterPowers, tuples: &[NcpTuple], mode: Mode) -> Vec<usize> {
    let mut sorted = tuples.to_vec();
    sorted.sort();
    let mut seen = vec![false; sorted.len()];
    let mut sizes = Vec::new();
    for i in 0..sorted.len() {
        if seen[i] {
            continue;
        }
        let mut size = 0;
        let mut x = sorted[i].clone();
        loop {
            let k = sorted.binary_search(&x).expect("action preserves NC^m");
            if seen[k] {
                break;
            }
            seen[k] = true;
            size += 1;
            x = apply(cp, mode, &x, 1);
        }
        sizes.push(size);
    }
    sizes.sort_unstable();
    sizes
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PSelection {
    All,
    Divisors,
    List(Vec<u64>),
}

impl PSelection {
    pub fn values(&self, period: u64) -> Vec<u64> {
        match self {
            PSelection::All => (0..period).collect(),
            // p = period acts like p = 0
            PSelection::Divisors => {
                let mut d: Vec<u64> = divisors(period).into_iter().map(|d| d % period).collect();
                d.sort_unstable();
                d
            }
            PSelection::List(v) => v.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CspEntry {
    pub p: u64,
    pub fix: u64,
    /// Exact value of Cat^m(W; q) at the matching root of unity.
    pub cat: String,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CspReport {
    pub group: String,
    pub m: u64,
    pub mode: Mode,
    pub size: u64,
    pub action_order: u64,
    pub entries: Vec<CspEntry>,
    pub pass: bool,
}

/// Compare fixed-point counts with the q-Fuß–Catalan evaluation for every selected p.
pub fn csp_verify(
    cp: &CoxeterPowers,
    tuples: &[NcpTuple],
    m: u64,
    mode: Mode,
    selection: &PSelection,
) -> Result<CspReport, NcpError> {
    let entry = cp.group().entry();
    let h = entry.coxeter_number();
    let period = mode.period(m, h);
    let mut entries = Vec::new();
    for p in selection.values(period) {
        if p >= period {
            return Err(NcpError::BadExponent { denom: period, p });
        }
        let fix = fix_count(cp, tuples, mode, p);
        let cat = cat_at_root(entry, m, period, p)?.value;
        entries.push(CspEntry { p, fix, ok: BigInt::from(fix) == cat, cat: cat.to_string() });
    }
    let action_order = orbit_sizes(cp, tuples, mode).into_iter().fold(1u64, |a, s| a.lcm(&(s as u64)));
    let pass = entries.iter().all(|e| e.ok);
    Ok(CspReport { group: entry.name.clone(), m, mode, size: tuples.len() as u64, action_order, entries, pass })
}

/// Why a divisor p does not need (or needs) a case analysis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum PlanStatus {
    /// Not a divisor: same fixed points as gcd(p, period).
    SameGcd { divisor: u64 },
    /// m | p (φ) resp. (m+1) | p (ψ).
    MultipleOfModulus,
    /// p | m (φ) resp. p | (m+1) (ψ).
    DividesModulus,
    /// h₂ fails to divide some degree.
    DegreeObstruction,
    /// m₂ exceeds the rank.
    TooManyFactors,
    BruteForce,
}

impl PlanStatus {
    pub fn label(&self) -> &'static str {
        match self {
            PlanStatus::SameGcd { .. } => "same-gcd",
            PlanStatus::MultipleOfModulus => "multiple-of-modulus",
            PlanStatus::DividesModulus => "divides-modulus",
            PlanStatus::DegreeObstruction => "degree-obstruction",
            PlanStatus::TooManyFactors => "too-many-factors",
            PlanStatus::BruteForce => "brute-force",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanEntry {
    pub p: u64,
    pub m1: u64,
    pub m2: u64,
    pub h1: u64,
    pub h2: u64,
    pub status: PlanStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionPlan {
    pub group: String,
    pub m: u64,
    pub mode: Mode,
    pub entries: Vec<PlanEntry>,
}

impl ReductionPlan {
    pub fn brute_force(&self) -> Vec<u64> {
        self.entries.iter().filter(|e| e.status == PlanStatus::BruteForce).map(|e| e.p).collect()
    }
}

/// Classify every p in 1..=period. For p | period, write m₁ = gcd(p, M)
/// with M = m (φ) or m+1 (ψ), h₁ = p/m₁, m₂ = M/m₁, h₂ = h/h₁.
pub fn reduction_plan(entry: &CatalogEntry, m: u64, mode: Mode) -> ReductionPlan {
    let h = entry.coxeter_number();
    let period = mode.period(m, h);
    let modulus = mode.split_modulus(m);
    let n = entry.rank as u64;
    let entries = (1..=period)
        .map(|p| {
            let m1 = p.gcd(&modulus);
            let h1 = p / m1;
            let m2 = modulus / m1;
            let h2 = if h % h1 == 0 { h / h1 } else { 0 };
            let status = if period % p != 0 {
                PlanStatus::SameGcd { divisor: p.gcd(&period) }
            } else if modulus % p == 0 {
                PlanStatus::DividesModulus
            } else if p % modulus == 0 {
                PlanStatus::MultipleOfModulus
            } else if entry.degrees.iter().any(|d| d % h2 != 0) {
                PlanStatus::DegreeObstruction
            } else if m2 > n {
                PlanStatus::TooManyFactors
            } else {
                PlanStatus::BruteForce
            };
            PlanEntry { p, m1, m2, h1, h2, status }
        })
        .collect();
    ReductionPlan { group: entry.name.clone(), m, mode, entries }
}

/// |Fix(action^p)| = |Fix(action^{kp})| whenever gcd(k, period/p) = 1.
pub fn lemma_equivalence_check(
    cp: &CoxeterPowers,
    tuples: &[NcpTuple],
    m: u64,
    p: u64,
    k: u64,
    mode: Mode,
) -> Result<bool, SieveError> {
    let period = mode.period(m, cp.group().entry().coxeter_number());
    let q = period / p.gcd(&period);
    if k.gcd(&q) != 1 {
        return Err(SieveError::NotCoprime { k, modulus: q });
    }
    Ok(fix_count(cp, tuples, mode, p % period) == fix_count(cp, tuples, mode, (k * p) % period))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abslen::{coxeter_element, length_table};
    use crate::catalog::load_catalog;
    use crate::groups::{build_group, BuildConfig};
    use crate::ncp::{enumerate_ncm, Interval, DEFAULT_NCM_BUDGET};

    struct Fixture {
        g: ReflectionGroup,
        c: Elem,
    }

    fn fixture(name: &str) -> Fixture {
        let g = build_group(&load_catalog(name).unwrap(), &BuildConfig::default()).unwrap();
        let l = length_table(&g);
        let c = coxeter_element(&g, &l).unwrap();
        Fixture { g, c }
    }

    fn tuples(f: &Fixture, m: usize) -> Vec<NcpTuple> {
        let l = length_table(&f.g);
        let iv = Interval::new(&f.g, &l, f.c);
        enumerate_ncm(&f.g, &iv, m, DEFAULT_NCM_BUDGET).unwrap()
    }

    #[test]
    fn closed_forms_match_iteration() {
        let f = fixture("B3");
        let cp = CoxeterPowers::new(&f.g, f.c);
        for m in 1..=3 {
            let nc = tuples(&f, m);
            for t in nc.iter().step_by(7) {
                let mut x = t.clone();
                let mut y = t.clone();
                for p in 0..=(2 * (m as u64 + 1) * 6) {
                    assert_eq!(phi_apply(&cp, t, p), x, "phi m={m} p={p}");
                    assert_eq!(psi_apply(&cp, t, p), y, "psi m={m} p={p}");
                    x = phi_step(&cp, &x);
                    y = psi_step(&cp, &y);
                }
            }
        }
    }

    #[test]
    fn periods() {
        let f = fixture("H3");
        let cp = CoxeterPowers::new(&f.g, f.c);
        let nc = tuples(&f, 2);
        for t in &nc {
            assert_eq!(phi_apply(&cp, t, 20), *t);
            assert_eq!(psi_apply(&cp, t, 30), *t);
        }
        let top = NcpTuple::top(f.c, 2);
        assert_eq!(psi_apply(&cp, &top, 1), NcpTuple(vec![0, f.c, 0]));
    }

    #[test]
    fn paper_fixed_points() {
        let f = fixture("H3");
        let cp = CoxeterPowers::new(&f.g, f.c);
        assert_eq!(fix_count(&cp, &tuples(&f, 3), Mode::Phi, 5), 6);
        assert_eq!(fix_count(&cp, &tuples(&f, 2), Mode::Psi, 5), 5);
    }

    #[test]
    fn csp_small() {
        let f = fixture("A2");
        let cp = CoxeterPowers::new(&f.g, f.c);
        let r = csp_verify(&cp, &tuples(&f, 2), 2, Mode::Phi, &PSelection::All).unwrap();
        assert_eq!(r.entries.len(), 6);
        assert!(r.pass);
        let f = fixture("B2");
        let cp = CoxeterPowers::new(&f.g, f.c);
        let r = csp_verify(&cp, &tuples(&f, 1), 1, Mode::Psi, &PSelection::All).unwrap();
        assert_eq!(r.entries.len(), 8);
        assert!(r.pass);
    }

    #[test]
    fn plans() {
        let h3 = load_catalog("H3").unwrap();
        assert_eq!(reduction_plan(&h3, 6, Mode::Phi).brute_force(), vec![10, 15, 20]);
        let g25 = load_catalog("G25").unwrap();
        assert_eq!(reduction_plan(&g25, 3, Mode::Phi).brute_force(), vec![4]);
        let plan = reduction_plan(&h3, 1, Mode::Phi);
        for e in &plan.entries {
            match e.p {
                1 => assert_eq!(e.status, PlanStatus::DividesModulus),
                p if 10 % p == 0 => assert_eq!(e.status, PlanStatus::MultipleOfModulus),
                _ => assert!(matches!(e.status, PlanStatus::SameGcd { .. })),
            }
        }
    }

    #[test]
    fn equivalences() {
        let f = fixture("A2");
        let cp = CoxeterPowers::new(&f.g, f.c);
        let nc = tuples(&f, 2);
        assert!(lemma_equivalence_check(&cp, &nc, 2, 3, 5, Mode::Phi).unwrap());
        assert!(lemma_equivalence_check(&cp, &nc, 2, 3, 1, Mode::Phi).unwrap());
        assert!(lemma_equivalence_check(&cp, &nc, 2, 3, 2, Mode::Phi).is_err());
        let f = fixture("H3");
        let cp = CoxeterPowers::new(&f.g, f.c);
        assert!(lemma_equivalence_check(&cp, &tuples(&f, 2), 2, 4, 3, Mode::Phi).unwrap());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("phi".parse::<Mode>().unwrap(), Mode::Phi);
        assert_eq!("PSI".parse::<Mode>().unwrap(), Mode::Psi);
        assert!("chi".parse::<Mode>().is_err());
    }
}
