//! Regenerates the shipped catalog files from Cartan-type diagram data.
//!
//! Each group is described by the orders of its generating reflections and the
//! braid lengths between them. For every edge the product `C_ij C_ji` is chosen
//! so that the two generators close up to a finite rank-2 group of the right
//! order; for a diagram with one cycle the remaining cycle parameter is solved
//! from the trace of the Coxeter element. Every candidate is accepted only if
//! exact enumeration reproduces the catalog order, reflection count,
//! fixed-space polynomial and a regular element of order h.
//!
//! ```text
//! cargo run --release -p ncsieve-core --example gen_catalog -- [NAME ...]
//! cargo run --release -p ncsieve-core --example gen_catalog -- --search G29
//! ```

use std::path::PathBuf;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use ncsieve_core::catalog::{file_slug, CatalogEntry};
use ncsieve_core::cyclo::{divisors, euler_phi, Cyclotomic};
use ncsieve_core::groups::{build_group_unchecked, Elem, closure_size, degree_polynomial, fixed_space_polynomial};
use ncsieve_core::linalg::{self, Matrix};

#[derive(Clone, Debug)]
struct Diagram {
    orders: Vec<u32>,
    edges: Vec<(usize, usize, u32)>,
}

struct Spec {
    name: &'static str,
    degrees: Vec<u64>,
    real: bool,
    large: bool,
    diagram: Option<Diagram>,
}

fn path(n: usize, first: u32) -> Diagram {
    let mut edges = Vec::new();
    for i in 0..n.saturating_sub(1) {
        edges.push((i, i + 1, if i == 0 { first } else { 3 }));
    }
    Diagram { orders: vec![2; n], edges }
}

fn diag(orders: &[u32], edges: &[(usize, usize, u32)]) -> Diagram {
    Diagram { orders: orders.to_vec(), edges: edges.to_vec() }
}

fn specs() -> Vec<Spec> {
    let real = |name, degrees: &[u64], d: Diagram| Spec {
        name,
        degrees: degrees.to_vec(),
        real: true,
        large: false,
        diagram: Some(d),
    };
    let cplx = |name, degrees: &[u64], d: Diagram| Spec {
        name,
        degrees: degrees.to_vec(),
        real: false,
        large: false,
        diagram: Some(d),
    };
    let e6 = [(0, 2, 3), (2, 3, 3), (3, 4, 3), (4, 5, 3), (1, 3, 3)];
    let mut e7 = e6.to_vec();
    e7.push((5, 6, 3));
    let mut v = vec![
        real("A1", &[2], path(1, 3)),
        real("A2", &[2, 3], path(2, 3)),
        real("A3", &[2, 3, 4], path(3, 3)),
        real("A4", &[2, 3, 4, 5], path(4, 3)),
        real("A5", &[2, 3, 4, 5, 6], path(5, 3)),
        real("B2", &[2, 4], path(2, 4)),
        real("B3", &[2, 4, 6], path(3, 4)),
        real("B4", &[2, 4, 6, 8], path(4, 4)),
        real("D4", &[2, 4, 4, 6], diag(&[2, 2, 2, 2], &[(0, 1, 3), (1, 2, 3), (1, 3, 3)])),
    ];
    for e in 5..=12u32 {
        let name: &'static str = Box::leak(format!("I2({e})").into_boxed_str());
        v.push(real(name, &[2, e as u64], path(2, e)));
    }
    v.extend([
        real("H3", &[2, 6, 10], path(3, 5)),
        real("H4", &[2, 12, 20, 30], path(4, 5)),
        real("F4", &[2, 6, 8, 12], diag(&[2, 2, 2, 2], &[(0, 1, 3), (1, 2, 4), (2, 3, 3)])),
        real("E6", &[2, 5, 6, 8, 9, 12], diag(&[2; 6], &e6)),
        Spec {
            name: "E7",
            degrees: vec![2, 6, 8, 10, 12, 14, 18],
            real: true,
            large: true,
            diagram: Some(diag(&[2; 7], &e7)),
        },
        Spec { name: "E8", degrees: vec![2, 8, 12, 14, 18, 20, 24, 30], real: true, large: true, diagram: None },
    ]);
    let rank2: [(&str, [u64; 2], u32, u32, u32); 12] = [
        ("G4", [4, 6], 3, 3, 3),
        ("G5", [6, 12], 3, 3, 4),
        ("G6", [4, 12], 2, 3, 6),
        ("G8", [8, 12], 4, 4, 3),
        ("G9", [8, 24], 2, 4, 6),
        ("G10", [12, 24], 3, 4, 4),
        ("G14", [6, 24], 2, 3, 8),
        ("G16", [20, 30], 5, 5, 3),
        ("G17", [20, 60], 2, 5, 6),
        ("G18", [30, 60], 3, 5, 4),
        ("G20", [12, 30], 3, 3, 5),
        ("G21", [12, 60], 2, 3, 10),
    ];
    for (name, deg, p, q, r) in rank2 {
        v.push(cplx(name, &deg, diag(&[p, q], &[(0, 1, r)])));
    }
    v.extend([
        cplx("G24", &[4, 6, 14], diag(&[2, 2, 2], &[(0, 1, 3), (1, 2, 3), (0, 2, 3)])),
        cplx("G25", &[6, 9, 12], diag(&[3, 3, 3], &[(0, 1, 3), (1, 2, 3)])),
        cplx("G26", &[6, 12, 18], diag(&[2, 3, 3], &[(0, 1, 4), (1, 2, 3)])),
        cplx("G27", &[6, 12, 30], diag(&[2, 2, 2], &[(0, 1, 5), (1, 2, 3), (0, 2, 4)])),
        cplx("G29", &[4, 8, 12, 20], diag(&[2, 2, 2, 2], &[(0, 1, 4), (1, 2, 3), (2, 3, 3), (1, 3, 3)])),
        cplx("G32", &[12, 18, 24, 30], diag(&[3, 3, 3, 3], &[(0, 1, 3), (1, 2, 3), (2, 3, 3)])),
        Spec {
            name: "G33",
            degrees: vec![4, 6, 10, 12, 18],
            real: false,
            large: true,
            diagram: Some(diag(&[2; 5], &[(0, 1, 3), (1, 2, 3), (2, 3, 3), (1, 3, 3), (3, 4, 3)])),
        },
        Spec { name: "G34", degrees: vec![6, 12, 18, 24, 30, 42], real: false, large: true, diagram: None },
    ]);
    v
}

fn units(n: u32) -> Vec<u32> {
    (1..=n.max(1)).filter(|k| k.gcd(&n) == 1).collect()
}

fn base_entry(name: &str, degrees: &[u64], real: bool, large: bool) -> CatalogEntry {
    let h = *degrees.last().unwrap();
    CatalogEntry {
        name: name.to_string(),
        rank: degrees.len(),
        conductor: 1,
        real,
        large,
        generators: Vec::new(),
        degrees: degrees.to_vec(),
        codegrees: degrees.iter().map(|d| h - d).collect(),
        order: degrees.iter().product(),
        reflections: degrees.iter().map(|d| d - 1).sum(),
    }
}

/// Generator matrices in the root basis for the Cartan matrix `c`.
fn generators_from_cartan(c: &[Vec<Cyclotomic>], eig: &[Cyclotomic], cond: u32) -> Vec<Matrix> {
    let n = c.len();
    (0..n)
        .map(|i| {
            let mut m = linalg::identity(n, cond);
            for j in 0..n {
                m[i][j] = if i == j { eig[i].clone() } else { -&c[i][j] };
            }
            m
        })
        .collect()
}

fn cartan(
    n: usize,
    eig: &[Cyclotomic],
    products: &[(usize, usize, Cyclotomic)],
    closing: Option<(usize, Cyclotomic)>,
    cond: u32,
) -> Vec<Vec<Cyclotomic>> {
    let one = Cyclotomic::one(cond);
    let mut c = vec![vec![Cyclotomic::zero(cond); n]; n];
    for i in 0..n {
        c[i][i] = &one - &eig[i];
    }
    for (k, (i, j, p)) in products.iter().enumerate() {
        match &closing {
            Some((idx, u)) if *idx == k => {
                c[*j][*i] = u.clone();
                c[*i][*j] = p.checked_div(u).expect("nonzero cycle parameter");
            }
            _ => {
                c[*i][*j] = -&one;
                c[*j][*i] = -p;
            }
        }
    }
    c
}

/// Express `x ∈ Q(ζ_L)` in Q(ζ_d) if possible.
fn descend(x: &Cyclotomic, d: u32) -> Option<Cyclotomic> {
    let l = x.conductor();
    if l == d {
        return Some(x.clone());
    }
    let phid = euler_phi(d as u64) as usize;
    let basis: Vec<Cyclotomic> = (0..phid).map(|k| Cyclotomic::root_of_unity(d, k as i64).embed(l)).collect();
    let rows = x.coeffs().len();
    let mut aug: Matrix = (0..rows)
        .map(|r| {
            let mut row: Vec<Cyclotomic> =
                basis.iter().map(|b| Cyclotomic::from_rational(1, b.coeffs()[r].clone())).collect();
            row.push(Cyclotomic::from_rational(1, x.coeffs()[r].clone()));
            row
        })
        .collect();
    let piv = linalg::rref(&mut aug);
    if piv.contains(&phid) {
        return None;
    }
    let mut y = vec![BigRational::zero(); phid];
    for (r, &p) in piv.iter().enumerate() {
        y[p] = aug[r][phid].as_rational().unwrap();
    }
    Some(Cyclotomic::from_coeffs(d, y).unwrap())
}

fn minimal_conductor(gens: &[Matrix], cond: u32) -> (u32, Vec<Matrix>) {
    for d in divisors(cond as u64) {
        let d = d as u32;
        let mut out = Vec::new();
        let ok = gens.iter().all(|g| {
            let mut m = Vec::new();
            for row in g {
                let mut r = Vec::new();
                for x in row {
                    match descend(x, d) {
                        Some(y) => r.push(y),
                        None => return false,
                    }
                }
                m.push(r);
            }
            out.push(m);
            true
        });
        if ok {
            return (d, out);
        }
    }
    unreachable!("the full conductor always works")
}

fn rank2_order(p: u32, q: u32, r: u32) -> Option<u64> {
    let (p, q, r) = (p as i64, q as i64, r as i64);
    let num = q * r + 2 * p * q + p * r - p * q * r;
    if num <= 0 {
        return None;
    }
    let top = 8 * p * p * q * q * r;
    if top % (num * num) != 0 {
        return None;
    }
    Some((top / (num * num)) as u64)
}

/// Values of C_ij C_ji making the two generators close up to p[r]q.
fn edge_options(ei: &Cyclotomic, ej: &Cyclotomic, p: u32, q: u32, r: u32, cond: u32) -> Vec<Cyclotomic> {
    let Some(order) = rank2_order(p, q, r) else { return vec![] };
    let d = ei * ej;
    // D = ζ_cond^a; find a
    let a = (0..cond as i64).find(|&a| Cyclotomic::root_of_unity(cond, a) == d).expect("root of unity");
    let mut out: Vec<Cyclotomic> = Vec::new();
    for k in units(r) {
        for sign in [1i64, -1] {
            // λ1² = D ρ with ρ = ζ_r^{2k}; work in Q(ζ_{2·cond})
            let two = 2 * cond;
            let e = a + 2 * (cond / r) as i64 * k as i64;
            let mut l1 = Cyclotomic::root_of_unity(two, e);
            if sign < 0 {
                l1 = -&l1;
            }
            let l1 = descend(&l1, cond).expect("conductor covers the square root");
            let l2 = d.checked_div(&l1).unwrap();
            let prod = &(&l1 + &l2) - &(ei + ej);
            if prod.is_zero() || out.contains(&prod) {
                continue;
            }
            let eig = [ei.clone(), ej.clone()];
            let c = cartan(2, &eig, &[(0, 1, prod.clone())], None, cond);
            let mut e = base_entry("edge", &[2, 2], false, false);
            e.conductor = cond;
            e.generators = generators_from_cartan(&c, &eig, cond);
            if closure_size(&e, order).ok() == Some(order as usize) {
                out.push(prod);
            }
        }
    }
    out
}

fn trace(m: &Matrix) -> Cyclotomic {
    let mut t = Cyclotomic::zero(m[0][0].conductor());
    for (i, row) in m.iter().enumerate() {
        t = &t + &row[i];
    }
    t
}

fn product(gens: &[Matrix]) -> Matrix {
    gens.iter().skip(1).fold(gens[0].clone(), |acc, g| linalg::mat_mul(&acc, g))
}

/// Index of an edge lying on the unique cycle, if the diagram has one.
fn closing_edge(d: &Diagram) -> Option<usize> {
    let n = d.orders.len();
    if d.edges.len() < n {
        return None;
    }
    assert_eq!(d.edges.len(), n, "at most one cycle supported");
    let connected_without = |skip: usize| {
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for (k, &(i, j, _)) in d.edges.iter().enumerate() {
                if k == skip {
                    continue;
                }
                let y = if i == x { j } else if j == x { i } else { continue };
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.iter().all(|&s| s)
    };
    (0..d.edges.len()).rev().find(|&k| connected_without(k))
}

fn validate(entry: &CatalogEntry, quick: bool) -> Result<(), String> {
    let size = closure_size(entry, entry.order).map_err(|e| e.to_string())?;
    if size as u64 != entry.order {
        return Err(format!("closure has {size} elements"));
    }
    let g = build_group_unchecked(entry, entry.order).map_err(|e| e.to_string())?;
    let h = entry.coxeter_number();
    let c = g.generators().iter().skip(1).fold(g.generators()[0], |acc, &s| g.mul(acc, s));
    if g.element_order(c) as u64 != h {
        return Err(format!("generator product has order {}", g.element_order(c)));
    }
    let regular = units(h as u32)
        .into_iter()
        .any(|s| g.eigenspace_dim(c, &Cyclotomic::root_of_unity(h as u32, s as i64)) == 1);
    if !regular {
        return Err("generator product has no one-dimensional primitive eigenspace".into());
    }
    if !quick && fixed_space_polynomial(&g) != degree_polynomial(&entry.degrees) {
        return Err("fixed-space polynomial mismatch".into());
    }
    Ok(())
}

fn construct(spec: &Spec, d: &Diagram, quick: bool) -> Option<CatalogEntry> {
    let n = d.orders.len();
    let h = *spec.degrees.last().unwrap() as u32;
    let mut cond = d.orders.iter().fold(2u32, |a, &o| a.lcm(&o));
    for &(_, _, r) in &d.edges {
        cond = cond.lcm(&r);
    }
    let closing = closing_edge(d);
    if closing.is_some() {
        cond = cond.lcm(&h);
    }
    cond *= 2;
    // node eigenvalue choices
    let mut node_choices: Vec<Vec<u32>> = vec![vec![]];
    for &o in &d.orders {
        let mut next = Vec::new();
        for prefix in &node_choices {
            for u in units(o) {
                let mut v = prefix.clone();
                v.push(u);
                next.push(v);
            }
        }
        node_choices = next;
    }
    for choice in node_choices {
        let eig: Vec<Cyclotomic> = (0..n)
            .map(|i| Cyclotomic::root_of_unity(d.orders[i], choice[i] as i64).embed(cond))
            .collect();
        let opts: Vec<Vec<Cyclotomic>> = d
            .edges
            .iter()
            .map(|&(i, j, r)| edge_options(&eig[i], &eig[j], d.orders[i], d.orders[j], r, cond))
            .collect();
        if opts.iter().any(|o| o.is_empty()) {
            continue;
        }
        let mut idx = vec![0usize; opts.len()];
        loop {
            let products: Vec<(usize, usize, Cyclotomic)> =
                d.edges.iter().zip(&idx).enumerate().map(|(k, (&(i, j, _), &o))| (i, j, opts[k][o].clone())).collect();
            let mut candidates: Vec<Vec<Matrix>> = Vec::new();
            match closing {
                None => candidates.push(generators_from_cartan(&cartan(n, &eig, &products, None, cond), &eig, cond)),
                Some(k) => {
                    let t = |u: i64| {
                        let u = Cyclotomic::from_int(cond, u);
                        trace(&product(&generators_from_cartan(
                            &cartan(n, &eig, &products, Some((k, u)), cond),
                            &eig,
                            cond,
                        )))
                    };
                    let (t1, t2) = (t(1), t(2));
                    let slope = &t2 - &t1;
                    if !slope.is_zero() {
                        let intercept = &t1 - &slope;
                        for s in units(h) {
                            let mut target = Cyclotomic::zero(cond);
                            for &dg in &spec.degrees {
                                target = &target + &Cyclotomic::root_of_unity(h, s as i64 * (dg as i64 - 1));
                            }
                            let u = (&target - &intercept).checked_div(&slope).unwrap();
                            if u.is_zero() {
                                continue;
                            }
                            candidates.push(generators_from_cartan(
                                &cartan(n, &eig, &products, Some((k, u)), cond),
                                &eig,
                                cond,
                            ));
                        }
                    }
                }
            }
            for gens in candidates {
                let (c2, gens) = minimal_conductor(&gens, cond);
                let mut e = base_entry(spec.name, &spec.degrees, spec.real, spec.large);
                e.conductor = c2;
                e.generators = gens;
                match validate(&e, quick) {
                    Ok(()) => return Some(e),
                    Err(msg) => eprintln!("  {} candidate rejected: {msg}", spec.name),
                }
            }
            // next combination
            let mut k = 0;
            loop {
                if k == idx.len() {
                    break;
                }
                idx[k] += 1;
                if idx[k] < opts[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    None
}

/// Connected diagrams on `n` nodes with exactly one cycle, braid labels from `labels`.
fn unicyclic_diagrams(n: usize, labels: &[u32]) -> Vec<Diagram> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        if mask.count_ones() as usize != n {
            continue;
        }
        let chosen: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &p)| p).collect();
        let mut lab = vec![0usize; n];
        loop {
            let edges: Vec<(usize, usize, u32)> =
                chosen.iter().zip(&lab).map(|(&(i, j), &l)| (i, j, labels[l])).collect();
            let d = Diagram { orders: vec![2; n], edges };
            // connectivity
            let mut seen = vec![false; n];
            let mut st = vec![0];
            seen[0] = true;
            while let Some(x) = st.pop() {
                for &(i, j, _) in &d.edges {
                    let y = if i == x { j } else if j == x { i } else { continue };
                    if !seen[y] {
                        seen[y] = true;
                        st.push(y);
                    }
                }
            }
            if seen.iter().all(|&s| s) {
                out.push(d);
            }
            let mut k = 0;
            while k < n {
                lab[k] += 1;
                if lab[k] < labels.len() {
                    break;
                }
                lab[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
    }
    out
}

fn scale(m: &Matrix, k: &Cyclotomic) -> Matrix {
    m.iter().map(|r| r.iter().map(|x| x * k).collect()).collect()
}

/// ±PSL(2,7) in Klein's three-dimensional representation: reflections −T^g.
fn klein_reflections() -> (u32, Vec<Matrix>) {
    let z = |k: i64| Cyclotomic::root_of_unity(7, k);
    let gauss = &(&(&z(1) + &z(2)) + &z(4)) - &(&(&z(3) + &z(5)) + &z(6));
    let d = |a: i64, b: i64| &z(a) - &z(b);
    let m: Matrix = vec![
        vec![d(1, 6), d(2, 5), d(4, 3)],
        vec![d(2, 5), d(4, 3), d(1, 6)],
        vec![d(4, 3), d(1, 6), d(2, 5)],
    ];
    let minus_inv = Cyclotomic::from_int(7, -1).checked_div(&gauss).unwrap();
    let t = scale(&m, &minus_inv);
    assert_eq!(linalg::mat_mul(&t, &t), linalg::identity(3, 7), "T is an involution");
    let zero = Cyclotomic::zero(7);
    let s: Matrix = vec![vec![z(4), zero.clone(), zero.clone()], vec![zero.clone(), z(2), zero.clone()], vec![zero.clone(), zero.clone(), z(1)]];
    let one = Cyclotomic::one(7);
    let p: Matrix = vec![vec![zero.clone(), one.clone(), zero.clone()], vec![zero.clone(), zero.clone(), one.clone()], vec![one, zero.clone(), zero]];
    let refl = scale(&t, &Cyclotomic::from_int(7, -1));
    let mut out = vec![refl.clone()];
    for g in [&s, &p] {
        let gi = linalg::inverse(g).unwrap();
        out.push(linalg::mat_mul(&linalg::mat_mul(g, &refl), &gi));
    }
    (7, out)
}

/// G(4,4,4) together with one reflection in a root (1, i^a, i^b, i^c).
fn g29_reflections(a: i64, b: i64, c: i64) -> (u32, Vec<Matrix>) {
    let i = |k: i64| Cyclotomic::root_of_unity(4, k);
    let mut out = Vec::new();
    let swap = |x: usize, y: usize, k: i64| {
        let mut m = linalg::identity(4, 4);
        m[x][x] = Cyclotomic::zero(4);
        m[y][y] = Cyclotomic::zero(4);
        m[x][y] = i(k);
        m[y][x] = i(-k);
        m
    };
    out.push(swap(0, 1, 0));
    out.push(swap(1, 2, 0));
    out.push(swap(2, 3, 0));
    out.push(swap(2, 3, 1));
    let v = [i(0), i(a), i(b), i(c)];
    let half = Cyclotomic::from_rational(4, BigRational::new(1.into(), 2.into()));
    let mut r = linalg::identity(4, 4);
    for x in 0..4 {
        for y in 0..4 {
            r[x][y] = &r[x][y] - &(&(&v[x] * &v[y].conjugate()) * &half);
        }
    }
    out.push(r);
    (4, out)
}

/// Picks n reflections of the group generated by `gens` whose product is
/// regular of order h and which generate the whole group.
fn from_overgroup(spec: &Spec, cond: u32, gens: Vec<Matrix>) -> Result<CatalogEntry, String> {
    let n = spec.degrees.len();
    let mut over = base_entry(spec.name, &spec.degrees, spec.real, spec.large);
    over.conductor = cond;
    over.generators = gens;
    let g = build_group_unchecked(&over, over.order).map_err(|e| e.to_string())?;
    let h = over.coxeter_number() as u32;
    let refl: Vec<Elem> = g.reflections().to_vec();
    let mut tuple = vec![0usize; n];
    loop {
        let ws: Vec<Elem> = tuple.iter().map(|&k| refl[k]).collect();
        let c = ws.iter().skip(1).fold(ws[0], |acc, &w| g.mul(acc, w));
        if g.element_order(c) == h
            && units(h).into_iter().any(|s| g.eigenspace_dim(c, &Cyclotomic::root_of_unity(h, s as i64)) == 1)
            && generated(&g, &ws) == g.order()
        {
            let mats: Vec<Matrix> = ws.iter().map(|&w| g.matrix(w)).collect();
            let (c2, mats) = minimal_conductor(&mats, cond);
            let mut e = base_entry(spec.name, &spec.degrees, spec.real, spec.large);
            e.conductor = c2;
            e.generators = mats;
            validate(&e, false)?;
            return Ok(e);
        }
        let mut k = 0;
        while k < n {
            tuple[k] += 1;
            if tuple[k] < refl.len() {
                break;
            }
            tuple[k] = 0;
            k += 1;
        }
        if k == n {
            return Err("no generating tuple".into());
        }
    }
}

fn generated(g: &ncsieve_core::ReflectionGroup, ws: &[Elem]) -> usize {
    let mut seen = vec![false; g.order()];
    seen[0] = true;
    let mut stack = vec![g.identity()];
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for &w in ws {
            let y = g.mul(w, x);
            if !seen[y as usize] {
                seen[y as usize] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count
}

fn explicit(spec: &Spec) -> Option<Result<CatalogEntry, String>> {
    match spec.name {
        "G24" => {
            let (cond, gens) = klein_reflections();
            Some(from_overgroup(spec, cond, gens))
        }
        "G29" => {
            for a in 0..4 {
                for b in 0..4 {
                    for c in 0..4 {
                        let (cond, gens) = g29_reflections(a, b, c);
                        match from_overgroup(spec, cond, gens) {
                            Ok(e) => return Some(Ok(e)),
                            Err(msg) => eprintln!("  G29 root (1, i^{a}, i^{b}, i^{c}) rejected: {msg}"),
                        }
                    }
                }
            }
            Some(Err("no extra root works".into()))
        }
        _ => None,
    }
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let out_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("catalog");
    let all = specs();
    if args.first().map(String::as_str) == Some("--search") {
        let name = &args[1];
        let spec = all.iter().find(|s| s.name == name).expect("known name");
        let labels: Vec<u32> = vec![3, 4, 5];
        for d in unicyclic_diagrams(spec.degrees.len(), &labels) {
            if let Some(e) = construct(spec, &d, true) {
                println!("{name}: found diagram {:?}", d.edges);
                let _ = e;
                return;
            }
        }
        println!("{name}: nothing found");
        return;
    }
    let quick = args.iter().any(|a| a == "--quick");
    let names: Vec<&String> = args.iter().filter(|a| !a.starts_with("--")).collect();
    for spec in &all {
        if !names.is_empty() && !names.iter().any(|n| n.as_str() == spec.name) {
            continue;
        }
        let entry = match (explicit(spec), &spec.diagram) {
            (Some(Ok(e)), _) => e,
            (Some(Err(msg)), _) => {
                eprintln!("{}: {msg}", spec.name);
                continue;
            }
            (None, None) => base_entry(spec.name, &spec.degrees, spec.real, spec.large),
            (None, Some(d)) => match construct(spec, d, quick) {
                Some(e) => e,
                None => {
                    eprintln!("{}: no valid generators found", spec.name);
                    continue;
                }
            },
        };
        entry.validate().expect("invariants");
        std::fs::write(out_dir.join(file_slug(spec.name)), entry.to_document()).unwrap();
        println!("{}: conductor {}, order {}", spec.name, entry.conductor, entry.order);
    }
    let _ = BigRational::one();
}
