//! Reflection length, absolute order, Coxeter elements and parabolic types.

use std::collections::BTreeMap;
use std::fmt;

use once_cell::sync::Lazy;
use rayon::prelude::*;
use rustc_hash::FxHashSet;

use crate::catalog::{load_catalog, shipped_names};
use crate::cyclo::Cyclotomic;
use crate::error::GroupError;
use crate::groups::{Elem, ReflectionGroup};

/// ℓ_T(w) for every element, indexed by element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthTable {
    len: Vec<u8>,
}

impl LengthTable {
    pub fn get(&self, w: Elem) -> usize {
        self.len[w as usize] as usize
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.len
    }

    pub fn max_length(&self) -> usize {
        self.len.iter().copied().max().unwrap_or(0) as usize
    }

    /// All elements of the given length, in increasing index order.
    pub fn elements_of_length(&self, l: usize) -> Vec<Elem> {
        (0..self.len.len() as Elem).filter(|&w| self.get(w) == l).collect()
    }
}

/// Breadth-first search in the Cayley graph of (W, T).
pub fn length_table(g: &ReflectionGroup) -> LengthTable {
    const UNSEEN: u8 = u8::MAX;
    let mut len = vec![UNSEEN; g.order()];
    len[0] = 0;
    let mut frontier = vec![g.identity()];
    let mut d = 0u8;
    while !frontier.is_empty() {
        d += 1;
        let found: Vec<Elem> = frontier
            .par_iter()
            .flat_map_iter(|&w| g.reflections().iter().map(move |&t| g.mul(t, w)))
            .filter(|&u| len[u as usize] == UNSEEN)
            .collect();
        let mut next = Vec::new();
        for u in found {
            if len[u as usize] == UNSEEN {
                len[u as usize] = d;
                next.push(u);
            }
        }
        next.sort_unstable();
        frontier = next;
    }
    LengthTable { len }
}

/// u ≤_T w  ⇔  ℓ_T(w) = ℓ_T(u) + ℓ_T(u⁻¹w).
pub fn leq_t(g: &ReflectionGroup, l: &LengthTable, u: Elem, w: Elem) -> bool {
    l.get(w) == l.get(u) + l.get(g.mul(g.inv(u), w))
}

fn is_regular_of_order(g: &ReflectionGroup, w: Elem, h: u64) -> bool {
    if g.element_order(w) as u64 != h {
        return false;
    }
    (1..=h)
        .filter(|s| num_integer::gcd(*s, h) == 1)
        .any(|s| g.eigenspace_dim(w, &Cyclotomic::root_of_unity(h as u32, s as i64)) == 1)
}

/// The product of the generators in catalog order, or the first element
/// (by index) of order h, length n and a one-dimensional primitive eigenspace.
pub fn coxeter_element(g: &ReflectionGroup, l: &LengthTable) -> Result<Elem, GroupError> {
    let h = g.entry().coxeter_number();
    let n = g.rank();
    let gens = g.generators();
    let c = gens.iter().skip(1).fold(gens[0], |acc, &s| g.mul(acc, s));
    if l.get(c) == n && is_regular_of_order(g, c, h) {
        return Ok(c);
    }
    (0..g.order() as Elem)
        .find(|&w| l.get(w) == n && is_regular_of_order(g, w, h))
        .ok_or_else(|| GroupError::NoCoxeterElement { name: g.name().to_string() })
}

/// Isomorphism type of a parabolic subgroup, named from its degrees.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParabolicType {
    pub name: String,
    pub degrees: Vec<u64>,
}

impl ParabolicType {
    pub fn trivial() -> Self {
        ParabolicType { name: String::new(), degrees: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    /// Canonical spelling of a user-supplied type name ("A2*A1" → "A1*A2", "A1*A1" → "A1^2").
    pub fn normalize_name(s: &str) -> Option<String> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Some(String::new());
        }
        let mut parts = Vec::new();
        for comp in s.split('*') {
            let comp = comp.trim();
            let (base, k) = match comp.rsplit_once('^') {
                Some((b, k)) => (b, k.parse::<usize>().ok()?),
                None => (comp, 1),
            };
            if base.is_empty() || k == 0 {
                return None;
            }
            parts.extend(std::iter::repeat(base.to_string()).take(k));
        }
        Some(join_names(parts))
    }

    /// Rank implied by a canonical name, when every component is recognised.
    pub fn rank_of_name(name: &str) -> Option<usize> {
        if name.is_empty() {
            return Some(0);
        }
        let mut total = 0;
        for comp in name.split('*') {
            let (base, k) = match comp.rsplit_once('^') {
                Some((b, k)) => (b, k.parse::<usize>().ok()?),
                None => (comp, 1),
            };
            total += k * component_rank(base)?;
        }
        Some(total)
    }
}

impl fmt::Display for ParabolicType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.name.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&self.name)
        }
    }
}

fn component_rank(base: &str) -> Option<usize> {
    if base.starts_with("rank1(") {
        return Some(1);
    }
    if base.starts_with("I2(") || base == "G2" {
        return Some(2);
    }
    if let Some(rest) = base.strip_prefix('W').and_then(|r| r.strip_prefix('{')) {
        return Some(rest.trim_end_matches('}').split(',').count());
    }
    let mut chars = base.chars();
    let head = chars.next()?;
    if matches!(head, 'A' | 'B' | 'D' | 'E' | 'F' | 'H') {
        if let Ok(k) = chars.as_str().parse::<usize>() {
            return Some(k);
        }
    }
    load_catalog(base).ok().map(|e| e.rank)
}

fn join_names(mut parts: Vec<String>) -> String {
    parts.sort();
    let mut out: Vec<String> = Vec::new();
    let mut i = 0;
    while i < parts.len() {
        let j = (i..parts.len()).find(|&j| parts[j] != parts[i]).unwrap_or(parts.len());
        let k = j - i;
        out.push(if k == 1 { parts[i].clone() } else { format!("{}^{k}", parts[i]) });
        i = j;
    }
    out.join("*")
}

static CATALOG_DEGREES: Lazy<BTreeMap<Vec<u64>, String>> = Lazy::new(|| {
    let mut m = BTreeMap::new();
    for name in shipped_names() {
        if let Ok(e) = load_catalog(name) {
            m.entry(e.degrees.clone()).or_insert_with(|| e.name.clone());
        }
    }
    m
});

/// Name of an irreducible group with the given (sorted) degrees.
pub fn irreducible_name(degrees: &[u64]) -> String {
    let k = degrees.len();
    if k == 1 {
        return if degrees[0] == 2 { "A1".into() } else { format!("rank1({})", degrees[0]) };
    }
    if degrees.iter().enumerate().all(|(i, &d)| d == i as u64 + 2) {
        return format!("A{k}");
    }
    if k == 2 && degrees[0] == 2 {
        return match degrees[1] {
            4 => "B2".into(),
            6 => "G2".into(),
            e => format!("I2({e})"),
        };
    }
    if degrees.iter().enumerate().all(|(i, &d)| d == 2 * (i as u64 + 1)) {
        return format!("B{k}");
    }
    if k >= 4 {
        let mut dn: Vec<u64> = (1..k as u64).map(|i| 2 * i).collect();
        dn.push(k as u64);
        dn.sort_unstable();
        if dn == degrees {
            return format!("D{k}");
        }
    }
    if let Some(name) = CATALOG_DEGREES.get(degrees) {
        return name.clone();
    }
    let list: Vec<String> = degrees.iter().map(|d| d.to_string()).collect();
    format!("W{{{}}}", list.join(","))
}

/// Subgroup generated by `gens`.
fn generate(g: &ReflectionGroup, gens: &[Elem]) -> Vec<Elem> {
    let mut seen = FxHashSet::default();
    seen.insert(g.identity());
    let mut out = vec![g.identity()];
    let mut i = 0;
    while i < out.len() {
        let w = out[i];
        for &s in gens {
            let u = g.mul(s, w);
            if seen.insert(u) {
                out.push(u);
            }
        }
        i += 1;
    }
    out
}

/// Recover e_i = d_i − 1 from ∏(1 + e_i t), given its coefficients.
fn split_linear_factors(mut poly: Vec<u64>) -> Option<Vec<u64>> {
    while poly.len() > 1 && *poly.last().unwrap() == 0 {
        poly.pop();
    }
    let mut es = Vec::new();
    while poly.len() > 1 {
        let top = *poly.last().unwrap();
        let e = (1..=poly[1]).find(|&e| top % e == 0 && divide_linear(&poly, e).is_some())?;
        poly = divide_linear(&poly, e)?;
        es.push(e);
    }
    if poly != [1] {
        return None;
    }
    es.sort_unstable();
    Some(es)
}

fn divide_linear(poly: &[u64], e: u64) -> Option<Vec<u64>> {
    // poly = (1 + e t) q
    let mut q = Vec::with_capacity(poly.len() - 1);
    let mut prev: i128 = 0;
    for &a in &poly[..poly.len() - 1] {
        let c = a as i128 - e as i128 * prev;
        if c < 0 {
            return None;
        }
        q.push(c as u64);
        prev = c;
    }
    (e as i128 * prev == *poly.last().unwrap() as i128).then_some(q)
}

/// Degrees of the reflection subgroup generated by `gens`, from its
/// codimension polynomial.
fn subgroup_degrees(g: &ReflectionGroup, gens: &[Elem]) -> Option<Vec<u64>> {
    let n = g.rank();
    let elems = generate(g, gens);
    let mut poly = vec![0u64; n + 1];
    for w in elems {
        poly[n - g.fix_dim(w)] += 1;
    }
    split_linear_factors(poly).map(|es| es.into_iter().map(|e| e + 1).collect())
}

/// Reflections fixing Fix(w) pointwise.
pub fn parabolic_reflections(g: &ReflectionGroup, w: Elem) -> Vec<Elem> {
    if w == g.identity() {
        return Vec::new();
    }
    let space = g.fixed_space(w);
    g.reflections().iter().copied().filter(|&t| g.fixes_all(t, &space)).collect()
}

/// Type of the pointwise stabiliser of Fix(w).
pub fn parabolic_type(g: &ReflectionGroup, w: Elem) -> ParabolicType {
    let refl = parabolic_reflections(g, w);
    if refl.is_empty() {
        return ParabolicType::trivial();
    }
    // irreducible components: reflections are joined when they fail to
    // commute or share a hyperplane (t and t^2 in a rank-1 factor)
    let k = refl.len();
    let hyperplanes: Vec<_> = refl.iter().map(|&t| g.fixed_space(t)).collect();
    let mut comp = vec![usize::MAX; k];
    let mut ncomp = 0;
    for start in 0..k {
        if comp[start] != usize::MAX {
            continue;
        }
        comp[start] = ncomp;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for j in 0..k {
                if comp[j] == usize::MAX
                    && (g.mul(refl[i], refl[j]) != g.mul(refl[j], refl[i]) || g.fixes_all(refl[j], &hyperplanes[i]))
                {
                    comp[j] = ncomp;
                    stack.push(j);
                }
            }
        }
        ncomp += 1;
    }
    let mut names = Vec::new();
    let mut degrees = Vec::new();
    for c in 0..ncomp {
        let gens: Vec<Elem> = (0..k).filter(|&i| comp[i] == c).map(|i| refl[i]).collect();
        let d = subgroup_degrees(g, &gens)
            .unwrap_or_else(|| panic!("codimension polynomial of a reflection subgroup of {} does not split", g.name()));
        names.push(irreducible_name(&d));
        degrees.extend(d);
    }
    degrees.sort_unstable();
    ParabolicType { name: join_names(names), degrees }
}

/// Whether c^{h/d} commutes with every generator.
pub fn power_is_central(g: &ReflectionGroup, c: Elem, d: u64) -> bool {
    let h = g.entry().coxeter_number();
    if d == 0 || h % d != 0 {
        return false;
    }
    let z = g.pow(c, (h / d) as i64);
    g.generators().iter().all(|&s| g.mul(z, s) == g.mul(s, z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::load_catalog;
    use crate::groups::{build_group, BuildConfig};

    fn setup(name: &str) -> (ReflectionGroup, LengthTable, Elem) {
        let g = build_group(&load_catalog(name).unwrap(), &BuildConfig::default()).unwrap();
        let l = length_table(&g);
        let c = coxeter_element(&g, &l).unwrap();
        (g, l, c)
    }

    #[test]
    fn a2_lengths() {
        let (g, l, c) = setup("A2");
        assert_eq!(l.get(0), 0);
        assert_eq!(l.get(c), 2);
        assert_eq!(g.element_order(c), 3);
        let rotations: Vec<Elem> = (0..6).filter(|&w| g.element_order(w) == 3).collect();
        assert_eq!(rotations.len(), 2);
        assert!(rotations.iter().all(|&w| l.get(w) == 2));
        for &t in g.reflections() {
            assert!(leq_t(&g, &l, t, c));
        }
    }

    #[test]
    fn coxeter_elements() {
        let (g, l, c) = setup("H3");
        assert_eq!((g.element_order(c), l.get(c), g.fix_dim(c)), (10, 3, 0));
        let (g, l, c) = setup("G4");
        assert_eq!((g.element_order(c), l.get(c)), (6, 2));
    }

    #[test]
    fn types_in_a3() {
        let (g, l, c) = setup("A3");
        assert_eq!(parabolic_type(&g, 0), ParabolicType::trivial());
        let t = g.reflections()[0];
        assert_eq!(parabolic_type(&g, t).name, "A1");
        let mut seen = BTreeMap::new();
        for w in 0..g.order() as Elem {
            if l.get(w) == 2 && leq_t(&g, &l, w, c) {
                *seen.entry(parabolic_type(&g, w).name).or_insert(0) += 1;
            }
        }
        assert_eq!(seen.keys().cloned().collect::<Vec<_>>(), vec!["A1^2".to_string(), "A2".to_string()]);
        assert_eq!(parabolic_type(&g, c).name, "A3");
    }

    #[test]
    fn complex_rank_one_types() {
        let (g, _, c) = setup("G4");
        let t = g.reflections()[0];
        assert_eq!(parabolic_type(&g, t).name, "rank1(3)");
        assert_eq!(parabolic_type(&g, c).name, "G4");
    }

    #[test]
    fn name_normalization() {
        assert_eq!(ParabolicType::normalize_name("A2*A1").unwrap(), "A1*A2");
        assert_eq!(ParabolicType::normalize_name("A1*A1").unwrap(), "A1^2");
        assert_eq!(ParabolicType::normalize_name("A1^2*A1").unwrap(), "A1^3");
        assert_eq!(ParabolicType::rank_of_name("A1^2*A2"), Some(4));
        assert_eq!(ParabolicType::rank_of_name("rank1(3)"), Some(1));
        assert_eq!(irreducible_name(&[2, 4, 4, 6]), "D4");
        assert_eq!(irreducible_name(&[2, 5]), "I2(5)");
        assert_eq!(irreducible_name(&[3]), "rank1(3)");
    }

    #[test]
    fn splitting() {
        assert_eq!(split_linear_factors(vec![1, 3, 2]), Some(vec![1, 2]));
        assert_eq!(split_linear_factors(vec![1, 1, 1]), None);
    }

    #[test]
    fn central_power() {
        let (g, _, c) = setup("H3");
        assert!(power_is_central(&g, c, 2));
        assert!(!power_is_central(&g, c, 5));
    }
}
