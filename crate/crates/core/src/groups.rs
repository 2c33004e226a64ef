//! Enumeration of finite reflection groups from generator matrices.
//!
//! The group acts faithfully on the orbit of the generator roots, so every
//! element is stored as a permutation of that orbit. An element is identified
//! exactly by the images of `n` linearly independent roots, which makes
//! products and lookups integer-only. Matrices are recovered on demand for
//! fixed-space computations.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicU8, Ordering};

use num_integer::Integer;
use num_rational::BigRational;
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::catalog::CatalogEntry;
use crate::cyclo::Cyclotomic;
use crate::error::GroupError;
use crate::linalg::{self, Matrix};

pub const DEFAULT_ORDER_BUDGET: u64 = 2_000_000;
const MAX_ROOTS: usize = u16::MAX as usize;
const UNKNOWN: u8 = u8::MAX;

/// Element index; 0 is the identity.
pub type Elem = u32;

#[derive(Clone, Copy, Debug)]
pub struct BuildConfig {
    pub order_budget: u64,
    pub allow_large: bool,
}

impl Default for BuildConfig {
    fn default() -> Self {
        BuildConfig { order_budget: DEFAULT_ORDER_BUDGET, allow_large: false }
    }
}

pub struct ReflectionGroup {
    entry: CatalogEntry,
    roots: Vec<Vec<Cyclotomic>>,
    basis: Vec<usize>,
    nroots: usize,
    perms: Vec<u16>,
    index: FxHashMap<u128, Elem>,
    generators: Vec<Elem>,
    gen_left: Vec<Vec<Elem>>,
    inverse: Vec<Elem>,
    orders: Vec<u32>,
    reflections: Vec<Elem>,
    is_reflection: Vec<bool>,
    fix_cache: Vec<AtomicU8>,
}

type RootKey = Vec<BigRational>;

fn root_key(v: &[Cyclotomic]) -> RootKey {
    v.iter().flat_map(|x| x.coeffs().iter().cloned()).collect()
}

fn sub_identity(m: &Matrix, conductor: u32) -> Matrix {
    m.iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(|(j, x)| if i == j { x - &Cyclotomic::one(conductor) } else { x.clone() })
                .collect()
        })
        .collect()
}

/// Enumerate the group described by `entry`.
pub fn build_group(entry: &CatalogEntry, cfg: &BuildConfig) -> Result<ReflectionGroup, GroupError> {
    let name = entry.name.clone();
    if !entry.buildable() {
        return Err(GroupError::Refused { name, order: entry.order });
    }
    if entry.large && !cfg.allow_large {
        return Err(GroupError::NeedsLarge { name, order: entry.order });
    }
    if entry.order > cfg.order_budget {
        return Err(GroupError::BudgetExceeded { name, order: entry.order, budget: cfg.order_budget });
    }
    build_group_unchecked(entry, entry.order)
}

/// Enumerate with an explicit element limit, skipping the budget checks.
pub fn build_group_unchecked(entry: &CatalogEntry, limit: u64) -> Result<ReflectionGroup, GroupError> {
    let mut g = enumerate(entry, limit)?;
    if g.order() as u64 != entry.order {
        return Err(GroupError::OrderMismatch { name: entry.name.clone(), expected: entry.order, found: g.order() as u64 });
    }
    g.find_reflections()?;
    Ok(g)
}

/// Number of elements generated, failing once `limit` is exceeded.
pub fn closure_size(entry: &CatalogEntry, limit: u64) -> Result<usize, GroupError> {
    enumerate(entry, limit).map(|g| g.order())
}

fn enumerate(entry: &CatalogEntry, limit: u64) -> Result<ReflectionGroup, GroupError> {
    let name = entry.name.clone();
    let n = entry.rank;
    let cond = entry.conductor;

    // one root per generating reflection: a nonzero column of g - I
    let mut seeds = Vec::with_capacity(n);
    for (i, g) in entry.generators.iter().enumerate() {
        let d = sub_identity(g, cond);
        if linalg::rank(&d) != 1 {
            return Err(GroupError::NotReflection { name, index: i });
        }
        let col = (0..n).find(|&j| (0..n).any(|r| !d[r][j].is_zero())).expect("rank one");
        seeds.push((0..n).map(|r| d[r][col].embed(cond)).collect::<Vec<_>>());
    }

    // orbit of the roots under the generators
    let mut roots: Vec<Vec<Cyclotomic>> = Vec::new();
    let mut root_index: FxHashMap<RootKey, usize> = FxHashMap::default();
    let mut queue = VecDeque::new();
    for s in seeds {
        let k = root_key(&s);
        if !root_index.contains_key(&k) {
            root_index.insert(k, roots.len());
            queue.push_back(roots.len());
            roots.push(s);
        }
    }
    let mut gen_images: Vec<Vec<usize>> = vec![Vec::new(); entry.generators.len()];
    while let Some(r) = queue.pop_front() {
        for (gi, g) in entry.generators.iter().enumerate() {
            let img = linalg::mat_vec(g, &roots[r]);
            let k = root_key(&img);
            let idx = match root_index.get(&k) {
                Some(&i) => i,
                None => {
                    let i = roots.len();
                    if i >= MAX_ROOTS {
                        return Err(GroupError::TooManyRoots { name, count: i });
                    }
                    root_index.insert(k, i);
                    roots.push(img);
                    queue.push_back(i);
                    i
                }
            };
            if gen_images[gi].len() <= r {
                gen_images[gi].resize(r + 1, usize::MAX);
            }
            gen_images[gi][r] = idx;
        }
    }
    let nroots = roots.len();

    // greedy basis of independent roots
    let mut basis = Vec::new();
    let mut cols: Matrix = Vec::new();
    for (i, r) in roots.iter().enumerate() {
        let mut trial = cols.clone();
        trial.push(r.clone());
        if linalg::rank(&trial) == trial.len() {
            cols = trial;
            basis.push(i);
            if basis.len() == n {
                break;
            }
        }
    }
    if basis.len() < n {
        return Err(GroupError::Degenerate { name });
    }

    let gen_perm: Vec<Vec<u16>> =
        gen_images.iter().map(|img| img.iter().map(|&x| x as u16).collect()).collect();

    let key_of = |images: &dyn Fn(usize) -> u16| -> u128 {
        let mut k = 0u128;
        for (j, &b) in basis.iter().enumerate() {
            k |= (images(b) as u128) << (16 * j);
        }
        k
    };

    // breadth-first closure by left multiplication
    let mut perms: Vec<u16> = (0..nroots as u16).collect();
    let mut index: FxHashMap<u128, Elem> = FxHashMap::default();
    index.insert(key_of(&|b| b as u16), 0);
    let mut gen_left: Vec<Vec<Elem>> = vec![Vec::new(); entry.generators.len()];
    let mut count: usize = 1;
    let mut head = 0usize;
    while head < count {
        for (gi, gp) in gen_perm.iter().enumerate() {
            let w = &perms[head * nroots..(head + 1) * nroots];
            let k = key_of(&|b| gp[w[b] as usize]);
            let idx = match index.get(&k) {
                Some(&i) => i,
                None => {
                    if count as u64 >= limit {
                        return Err(GroupError::OrderMismatch {
                            name,
                            expected: entry.order,
                            found: count as u64 + 1,
                        });
                    }
                    let new: Vec<u16> = w.iter().map(|&x| gp[x as usize]).collect();
                    perms.extend_from_slice(&new);
                    index.insert(k, count as Elem);
                    count += 1;
                    (count - 1) as Elem
                }
            };
            gen_left[gi].push(idx);
        }
        head += 1;
    }
    let generators: Vec<Elem> = gen_left.iter().map(|row| row[0]).collect();

    let mut g = ReflectionGroup {
        entry: entry.clone(),
        roots,
        basis,
        nroots,
        perms,
        index,
        generators,
        gen_left,
        inverse: Vec::new(),
        orders: Vec::new(),
        reflections: Vec::new(),
        is_reflection: Vec::new(),
        fix_cache: (0..count).map(|_| AtomicU8::new(UNKNOWN)).collect(),
    };
    g.inverse = (0..count as Elem).into_par_iter().map(|w| g.compute_inverse(w)).collect();
    g.orders = (0..count as Elem).into_par_iter().map(|w| g.compute_order(w)).collect();
    Ok(g)
}

impl ReflectionGroup {
    pub fn entry(&self) -> &CatalogEntry {
        &self.entry
    }

    pub fn name(&self) -> &str {
        &self.entry.name
    }

    pub fn rank(&self) -> usize {
        self.entry.rank
    }

    pub fn order(&self) -> usize {
        self.inverse.len()
    }

    pub fn identity(&self) -> Elem {
        0
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    /// Left multiplication table of generator `i`: `table[w] = s_i · w`.
    pub fn generator_table(&self, i: usize) -> &[Elem] {
        &self.gen_left[i]
    }

    pub fn num_roots(&self) -> usize {
        self.nroots
    }

    /// Permutation of the root orbit induced by `w`.
    pub fn perm(&self, w: Elem) -> &[u16] {
        let w = w as usize;
        &self.perms[w * self.nroots..(w + 1) * self.nroots]
    }

    fn key(&self, f: impl Fn(usize) -> u16) -> u128 {
        let mut k = 0u128;
        for (j, &b) in self.basis.iter().enumerate() {
            k |= (f(b) as u128) << (16 * j);
        }
        k
    }

    fn lookup(&self, k: u128) -> Elem {
        *self.index.get(&k).expect("closed under multiplication")
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        let pa = self.perm(a);
        let pb = self.perm(b);
        self.lookup(self.key(|r| pa[pb[r] as usize]))
    }

    pub fn inv(&self, a: Elem) -> Elem {
        self.inverse[a as usize]
    }

    /// `g w g⁻¹`.
    pub fn conj(&self, g: Elem, w: Elem) -> Elem {
        self.mul(self.mul(g, w), self.inv(g))
    }

    pub fn pow(&self, a: Elem, k: i64) -> Elem {
        let o = self.orders[a as usize] as i64;
        let e = k.rem_euclid(o);
        let mut acc = 0;
        for _ in 0..e {
            acc = self.mul(acc, a);
        }
        acc
    }

    pub fn element_order(&self, w: Elem) -> u32 {
        self.orders[w as usize]
    }

    pub fn reflections(&self) -> &[Elem] {
        &self.reflections
    }

    pub fn is_reflection(&self, w: Elem) -> bool {
        self.is_reflection[w as usize]
    }

    /// Element sending each root `r` to `images[r]`, if it exists.
    pub fn find(&self, images: &[u16]) -> Option<Elem> {
        self.index.get(&self.key(|b| images[b])).copied()
    }

    fn compute_inverse(&self, w: Elem) -> Elem {
        let p = self.perm(w);
        let mut inv = vec![0u16; self.nroots];
        for (r, &x) in p.iter().enumerate() {
            inv[x as usize] = r as u16;
        }
        self.lookup(self.key(|b| inv[b]))
    }

    fn compute_order(&self, w: Elem) -> u32 {
        let p = self.perm(w);
        let mut seen = vec![false; self.nroots];
        let mut ord: u64 = 1;
        for s in 0..self.nroots {
            if seen[s] {
                continue;
            }
            let mut len = 0u64;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = p[x] as usize;
                len += 1;
            }
            ord = ord.lcm(&len);
        }
        ord as u32
    }

    /// Columns: images of the basis roots under `w`, minus `lambda` times the basis roots.
    fn shifted_matrix(&self, w: Elem, lambda: &Cyclotomic) -> Matrix {
        let n = self.rank();
        let p = self.perm(w);
        let mut m = vec![Vec::with_capacity(n); n];
        for &b in &self.basis {
            let img = &self.roots[p[b] as usize];
            let base = &self.roots[b];
            for (i, row) in m.iter_mut().enumerate() {
                row.push(&img[i] - &(lambda * &base[i]));
            }
        }
        m
    }

    /// Dimension of the λ-eigenspace of `w`.
    pub fn eigenspace_dim(&self, w: Elem, lambda: &Cyclotomic) -> usize {
        self.rank() - linalg::rank(&self.shifted_matrix(w, lambda))
    }

    /// dim ker(M_w − I), computed exactly and cached.
    pub fn fix_dim(&self, w: Elem) -> usize {
        let c = self.fix_cache[w as usize].load(Ordering::Relaxed);
        if c != UNKNOWN {
            return c as usize;
        }
        let d = if w == 0 {
            self.rank()
        } else if self.is_reflection.get(w as usize).copied().unwrap_or(false) {
            self.rank() - 1
        } else {
            self.eigenspace_dim(w, &Cyclotomic::one(self.entry.conductor))
        };
        self.fix_cache[w as usize].store(d as u8, Ordering::Relaxed);
        d
    }

    /// Basis of Fix(w), in coordinates relative to the basis roots.
    pub fn fixed_space(&self, w: Elem) -> Vec<Vec<Cyclotomic>> {
        linalg::nullspace(&self.shifted_matrix(w, &Cyclotomic::one(self.entry.conductor)))
    }

    /// Whether `t` fixes every vector of the given subspace (basis-root coordinates).
    pub fn fixes_all(&self, t: Elem, space: &[Vec<Cyclotomic>]) -> bool {
        if space.is_empty() {
            return true;
        }
        let m = self.shifted_matrix(t, &Cyclotomic::one(self.entry.conductor));
        space.iter().all(|v| linalg::mat_vec(&m, v).iter().all(|x| x.is_zero()))
    }

    /// Matrix of `w` in the catalog coordinates.
    pub fn matrix(&self, w: Elem) -> Matrix {
        let n = self.rank();
        let cond = self.entry.conductor;
        let zero = Cyclotomic::zero(cond);
        let b: Matrix = (0..n).map(|i| self.basis.iter().map(|&r| self.roots[r][i].clone()).collect()).collect();
        let img = self.shifted_matrix(w, &zero);
        let binv = linalg::inverse(&b).expect("basis is invertible");
        linalg::mat_mul(&img, &binv)
    }

    fn find_reflections(&mut self) -> Result<(), GroupError> {
        let n = self.rank();
        let expected = self.entry.reflections;
        // conjugation closure of the nontrivial powers of the generators
        let mut set: Vec<bool> = vec![false; self.order()];
        let mut stack = Vec::new();
        for &s in &self.generators.clone() {
            let mut x = s;
            while x != 0 {
                if !set[x as usize] {
                    set[x as usize] = true;
                    stack.push(x);
                }
                x = self.mul(x, s);
            }
        }
        while let Some(t) = stack.pop() {
            for &s in &self.generators {
                let u = self.conj(s, t);
                if !set[u as usize] {
                    set[u as usize] = true;
                    stack.push(u);
                }
            }
        }
        let mut refl: Vec<Elem> = (0..self.order() as Elem).filter(|&w| set[w as usize]).collect();
        let all_refl = refl.par_iter().all(|&t| self.eigenspace_dim(t, &Cyclotomic::one(self.entry.conductor)) == n - 1);
        if refl.len() as u64 != expected || !all_refl {
            // exhaustive fallback
            refl = (1..self.order() as Elem)
                .into_par_iter()
                .filter(|&w| self.eigenspace_dim(w, &Cyclotomic::one(self.entry.conductor)) == n - 1)
                .collect();
        }
        if refl.len() as u64 != expected {
            return Err(GroupError::ReflectionMismatch {
                name: self.entry.name.clone(),
                expected,
                found: refl.len() as u64,
            });
        }
        self.is_reflection = vec![false; self.order()];
        for &t in &refl {
            self.is_reflection[t as usize] = true;
            self.fix_cache[t as usize].store((n - 1) as u8, Ordering::Relaxed);
        }
        self.fix_cache[0].store(n as u8, Ordering::Relaxed);
        self.reflections = refl;
        Ok(())
    }
}

/// Coefficients (by power of t) of Σ_{w∈W} t^{dim Fix(w)}.
pub fn fixed_space_polynomial(g: &ReflectionGroup) -> Vec<u64> {
    let n = g.rank();
    let dims: Vec<usize> = (0..g.order() as Elem).into_par_iter().map(|w| g.fix_dim(w)).collect();
    let mut c = vec![0u64; n + 1];
    for d in dims {
        c[d] += 1;
    }
    c
}

/// Coefficients of ∏ (t + d_i − 1).
pub fn degree_polynomial(degrees: &[u64]) -> Vec<u64> {
    let mut c = vec![1u64];
    for &d in degrees {
        let mut next = vec![0u64; c.len() + 1];
        for (i, &x) in c.iter().enumerate() {
            next[i] += x * (d - 1);
            next[i + 1] += x;
        }
        c = next;
    }
    c
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Order, reflection count and fixed-space polynomial checks.
pub fn verify_group_invariants(g: &ReflectionGroup) -> Vec<CheckResult> {
    let e = g.entry();
    let mut out = Vec::new();
    let prod: u64 = e.degrees.iter().product();
    out.push(CheckResult {
        name: "order = product of degrees".into(),
        pass: g.order() as u64 == prod,
        detail: format!("|W| = {}, ∏d_i = {prod}", g.order()),
    });
    let refl: u64 = e.degrees.iter().map(|d| d - 1).sum();
    out.push(CheckResult {
        name: "reflections = sum of (d_i - 1)".into(),
        pass: g.reflections().len() as u64 == refl,
        detail: format!("|T| = {}, Σ(d_i-1) = {refl}", g.reflections().len()),
    });
    let lhs = fixed_space_polynomial(g);
    let rhs = degree_polynomial(&e.degrees);
    out.push(CheckResult {
        name: "fixed-space polynomial".into(),
        pass: lhs == rhs,
        detail: format!("Σ t^dimFix = {lhs:?}, ∏(t+d_i-1) = {rhs:?}"),
    });
    out
}
