use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;

use ncsieve_core::cyclo::divisors;
use ncsieve_core::groups::fixed_space_polynomial;
use ncsieve_core::sieve::{orbit_sizes, phi_step, psi_step};
use ncsieve_core::*;

struct Fixture {
    g: ReflectionGroup,
    l: LengthTable,
    c: Elem,
    real: bool,
    tuples: Vec<Vec<NcpTuple>>,
}

const NAMES: &[&str] = &["A3", "B3", "H3", "I2(5)", "G4", "G5", "G6", "G25"];

fn fixtures() -> &'static [Fixture] {
    static CELL: OnceLock<Vec<Fixture>> = OnceLock::new();
    CELL.get_or_init(|| {
        NAMES
            .iter()
            .map(|name| {
                let entry = load_catalog(name).unwrap();
                let real = entry.real;
                let g = build_group(&entry, &BuildConfig::default()).unwrap();
                let l = length_table(&g);
                let c = coxeter_element(&g, &l).unwrap();
                let iv = Interval::new(&g, &l, c);
                let tuples = (0..=3).map(|m| if m == 0 { Vec::new() } else { enumerate_ncm(&g, &iv, m, u64::MAX).unwrap() }).collect();
                Fixture { g, l, c, real, tuples }
            })
            .collect()
    })
}

fn cyclo(conductor: u32, coeffs: &[(i32, i32)]) -> Cyclotomic {
    let poly = coeffs.iter().map(|&(n, d)| BigRational::new(n.into(), d.max(1).into())).collect();
    Cyclotomic::from_poly(conductor, poly)
}

fn conductor() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![1u32, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 15, 20, 24, 30])
}

fn element() -> impl Strategy<Value = (u32, Vec<(i32, i32)>)> {
    conductor().prop_flat_map(|n| (Just(n), prop::collection::vec((-9i32..=9, 1i32..=4), 1..=(n as usize + 2))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn field_axioms((n, a) in element(), b in prop::collection::vec((-9i32..=9, 1i32..=4), 1..8), c in prop::collection::vec((-9i32..=9, 1i32..=4), 1..8)) {
        let (x, y, z) = (cyclo(n, &a), cyclo(n, &b), cyclo(n, &c));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert!((&x - &x).is_zero());
        if !x.is_zero() {
            let inv = x.inverse().unwrap();
            prop_assert!((&x * &inv).is_one());
        }
    }

    #[test]
    fn canonical_form_is_idempotent((n, a) in element()) {
        let x = cyclo(n, &a);
        prop_assert_eq!(x.coeffs().len() as u64, ncsieve_core::cyclo::euler_phi(n as u64));
        let again = Cyclotomic::from_poly(n, x.coeffs().to_vec());
        prop_assert_eq!(again.coeffs(), x.coeffs());
    }

    #[test]
    fn conjugation_is_an_involutive_automorphism((n, a) in element(), b in prop::collection::vec((-9i32..=9, 1i32..=4), 1..8)) {
        let (x, y) = (cyclo(n, &a), cyclo(n, &b));
        prop_assert_eq!(x.conjugate().conjugate(), x.clone());
        prop_assert_eq!((&x * &y).conjugate(), &x.conjugate() * &y.conjugate());
        prop_assert_eq!((&x + &y).conjugate(), &x.conjugate() + &y.conjugate());
    }

    #[test]
    fn embedding_preserves_values((n, a) in element(), k in 1u32..4) {
        let x = cyclo(n, &a);
        let big = x.embed(n * k);
        prop_assert_eq!(&big, &x);
        let (re, im) = x.to_complex();
        let (re2, im2) = big.to_complex();
        prop_assert!((re - re2).abs() < 1e-9 && (im - im2).abs() < 1e-9);
    }

    #[test]
    fn products_agree_with_floats((n, a) in element(), b in prop::collection::vec((-5i32..=5, 1i32..=3), 1..6)) {
        let (x, y) = (cyclo(n, &a), cyclo(n, &b));
        let (xr, xi) = x.to_complex();
        let (yr, yi) = y.to_complex();
        let (pr, pi) = (&x * &y).to_complex();
        prop_assert!((pr - (xr * yr - xi * yi)).abs() < 1e-6);
        prop_assert!((pi - (xr * yi + xi * yr)).abs() < 1e-6);
    }

    #[test]
    fn q_integers_multiply_at_one(a in 1u64..200, b in 1u64..200) {
        let f = QFactored::q_integer(a).mul(&QFactored::q_integer(b));
        prop_assert_eq!(f.at_one().unwrap(), BigRational::from_integer(BigInt::from(a * b)));
        let back = f.div(&QFactored::q_integer(b));
        let qa = QFactored::q_integer(a);
        prop_assert_eq!(back.factors(), qa.factors());
    }

    #[test]
    fn q_integer_roots_match_geometric_sums(a in 1u64..60, n in 1u64..40, k in 0i64..40) {
        let v = QFactored::q_integer(a).eval_at_root(n, k).unwrap();
        let (mut re, mut im) = (0.0f64, 0.0f64);
        for j in 0..a {
            let ang = 2.0 * std::f64::consts::PI * (k as f64) * (j as f64) / n as f64;
            re += ang.cos();
            im += ang.sin();
        }
        let (vr, vi) = match v {
            RootValue::Zero => (0.0, 0.0),
            RootValue::Value(x) => x.to_complex(),
        };
        prop_assert!((vr - re).abs() < 1e-6 && (vi - im).abs() < 1e-6, "[{}] at {}/{}: {} {} vs {} {}", a, k, n, vr, vi, re, im);
    }

    #[test]
    fn group_table_laws(i in 0..NAMES.len(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = &fixtures()[i];
        let ord = f.g.order() as u32;
        let (a, b, c) = (a % ord, b % ord, c % ord);
        let g = &f.g;
        prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
        prop_assert_eq!(g.mul(a, g.inv(a)), g.identity());
        prop_assert_eq!(g.mul(g.inv(a), a), g.identity());
    }

    #[test]
    fn reflections_closed_under_conjugation(i in 0..NAMES.len(), w in any::<u32>()) {
        let f = &fixtures()[i];
        let w = w % f.g.order() as u32;
        for &t in f.g.reflections() {
            prop_assert!(f.g.is_reflection(f.g.conj(w, t)));
        }
    }

    #[test]
    fn conjugation_invariants(i in 0..NAMES.len(), w in any::<u32>(), x in any::<u32>()) {
        let f = &fixtures()[i];
        let ord = f.g.order() as u32;
        let (w, x) = (w % ord, x % ord);
        let y = f.g.conj(x, w);
        prop_assert_eq!(f.g.fix_dim(w), f.g.fix_dim(y));
        prop_assert_eq!(f.l.get(w), f.l.get(y));
        prop_assert_eq!(f.l.get(w), f.l.get(f.g.inv(w)));
    }

    #[test]
    fn length_is_subadditive(i in 0..NAMES.len(), u in any::<u32>(), v in any::<u32>()) {
        let f = &fixtures()[i];
        let ord = f.g.order() as u32;
        let (u, v) = (u % ord, v % ord);
        prop_assert!(f.l.get(f.g.mul(u, v)) <= f.l.get(u) + f.l.get(v));
        let n = f.g.rank();
        prop_assert!(f.l.get(u) >= n - f.g.fix_dim(u));
        for &t in f.g.reflections() {
            let diff = f.l.get(f.g.mul(t, u)) as i64 - f.l.get(u) as i64;
            if f.real {
                prop_assert_eq!(diff.abs(), 1);
            } else {
                prop_assert!(diff.abs() <= 1);
            }
        }
    }

    #[test]
    fn closed_forms_match_iteration(i in 0..NAMES.len(), m in 1usize..=3, pick in any::<prop::sample::Index>(), p in 0u64..80) {
        let f = &fixtures()[i];
        let cp = CoxeterPowers::new(&f.g, f.c);
        let t = pick.get(&f.tuples[m]);
        let (mut x, mut y) = (t.clone(), t.clone());
        for _ in 0..p {
            x = phi_step(&cp, &x);
            y = psi_step(&cp, &y);
        }
        prop_assert_eq!(phi_apply(&cp, t, p), x);
        prop_assert_eq!(psi_apply(&cp, t, p), y);
    }

    #[test]
    fn fixed_points_depend_on_gcd(i in 0..NAMES.len(), m in 1u64..=3, p in 0u64..200, phi in any::<bool>()) {
        let f = &fixtures()[i];
        let cp = CoxeterPowers::new(&f.g, f.c);
        let mode = if phi { Mode::Phi } else { Mode::Psi };
        let period = mode.period(m, f.g.entry().coxeter_number());
        let tuples = &f.tuples[m as usize];
        let p = p % period;
        prop_assert_eq!(fix_count(&cp, tuples, mode, p), fix_count(&cp, tuples, mode, p.gcd(&period) % period));
    }

    #[test]
    fn root_values_are_galois_invariant(i in 0..NAMES.len(), m in 1u64..=4, p in 0u64..400, k in 1u64..50) {
        let entry = fixtures()[i].g.entry();
        let denom = m * entry.coxeter_number();
        let p = p % denom;
        let q = denom / p.gcd(&denom);
        prop_assume!(k.gcd(&q) == 1);
        let a = cat_at_root(entry, m, denom, p).unwrap().value;
        let b = cat_at_root(entry, m, denom, (k * p) % denom).unwrap().value;
        prop_assert_eq!(a, b);
    }
}

#[test]
fn actions_are_bijections_with_orbits_partitioning() {
    for (f, name) in fixtures().iter().zip(NAMES) {
        let cp = CoxeterPowers::new(&f.g, f.c);
        let h = f.g.entry().coxeter_number();
        for m in 1..=3u64 {
            let tuples = &f.tuples[m as usize];
            let mut sorted = tuples.clone();
            sorted.sort();
            for mode in [Mode::Phi, Mode::Psi] {
                let mut image: Vec<NcpTuple> = tuples.iter().map(|t| sieve::apply(&cp, mode, t, 1)).collect();
                image.sort();
                assert_eq!(image, sorted, "{name} m={m} {mode}");
                let sizes = orbit_sizes(&cp, tuples, mode);
                assert_eq!(sizes.iter().sum::<usize>(), tuples.len());
                let period = mode.period(m, h);
                assert!(sizes.iter().all(|&s| period % s as u64 == 0), "{name} m={m} {mode}");
            }
        }
    }
}

#[test]
fn tuples_are_minimal_factorisations() {
    for f in fixtures() {
        let n = f.g.rank();
        for m in 1..=3 {
            for t in &f.tuples[m] {
                assert_eq!(t.product(&f.g), f.c);
                assert_eq!(t.parts().iter().map(|&w| f.l.get(w)).sum::<usize>(), n);
            }
        }
    }
}

#[test]
fn nc1_is_the_interval() {
    for f in fixtures() {
        let mut firsts: Vec<Elem> = f.tuples[1].iter().map(|t| t.parts()[1]).collect();
        firsts.sort_unstable();
        let mut interval: Vec<Elem> = (0..f.g.order() as Elem).filter(|&w| leq_t(&f.g, &f.l, w, f.c)).collect();
        interval.sort_unstable();
        assert_eq!(firsts, interval);
    }
}

#[test]
fn fixed_points_at_multiples_lie_in_centralisers() {
    for f in fixtures() {
        let cp = CoxeterPowers::new(&f.g, f.c);
        let h = f.g.entry().coxeter_number();
        for m in 1..=3u64 {
            for p in (m..m * h).step_by(m as usize) {
                let z = cp.power((p / m) as i64);
                for t in &f.tuples[m as usize] {
                    if phi_apply(&cp, t, p) == *t {
                        for &w in t.parts() {
                            assert_eq!(f.g.mul(z, w), f.g.mul(w, z));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn fixed_points_at_divisors_of_the_modulus() {
    for f in fixtures() {
        let cp = CoxeterPowers::new(&f.g, f.c);
        for m in 1..=3u64 {
            let tuples = &f.tuples[m as usize];
            for p in divisors(m) {
                let fixed: Vec<&NcpTuple> = tuples.iter().filter(|t| phi_apply(&cp, t, p) == **t).collect();
                if p == m {
                    let mut rotations: Vec<NcpTuple> = (0..=m as usize)
                        .map(|i| {
                            let mut v = vec![0; m as usize + 1];
                            v[i] = f.c;
                            NcpTuple(v)
                        })
                        .collect();
                    rotations.sort();
                    let mut got: Vec<NcpTuple> = fixed.into_iter().cloned().collect();
                    got.sort();
                    assert_eq!(got, rotations);
                } else {
                    assert_eq!(fixed, vec![&NcpTuple::top(f.c, m as usize)]);
                }
            }
            for p in divisors(m + 1) {
                let fixed = fix_count(&cp, tuples, Mode::Psi, p);
                assert_eq!(fixed, if p == m + 1 { m + 1 } else { 0 }, "psi m={m} p={p}");
            }
        }
    }
}

#[test]
fn root_values_match_floating_point_expansion() {
    for f in fixtures() {
        let entry = f.g.entry();
        let h = entry.coxeter_number();
        for m in 1..=3u64 {
            let coeffs: Vec<f64> = qcatalan(entry, m).unwrap().expand().unwrap().iter().map(|c| c.to_f64().unwrap()).collect();
            for denom in [m * h, (m + 1) * h] {
                for p in 0..denom {
                    let exact = cat_at_root(entry, m, denom, p).unwrap().value.to_f64().unwrap();
                    let (mut re, mut im) = (0.0f64, 0.0f64);
                    for (j, c) in coeffs.iter().enumerate() {
                        let ang = 2.0 * std::f64::consts::PI * ((p as u128 * j as u128) % denom as u128) as f64 / denom as f64;
                        re += c * ang.cos();
                        im += c * ang.sin();
                    }
                    assert!((re - exact).abs() < 1e-6 * exact.abs().max(1.0), "{} m={m} {p}/{denom}: {re} vs {exact}", entry.name);
                    assert!(im.abs() < 1e-6 * exact.abs().max(1.0));
                }
            }
        }
    }
}

#[test]
fn qcatalan_is_a_polynomial_for_every_catalog_group() {
    for name in ncsieve_core::catalog::shipped_names() {
        let entry = load_catalog(name).unwrap();
        for m in 1..=4 {
            let q = qcatalan(&entry, m).unwrap();
            assert!(q.is_polynomial(), "{name} m={m}");
            assert_eq!(cat_at_root(&entry, m, m * entry.coxeter_number(), 0).unwrap().value, fuss_catalan(&entry, m).unwrap());
        }
    }
}

#[test]
fn fixed_space_polynomials() {
    for f in fixtures() {
        let e = f.g.entry();
        let mut want = vec![1u64];
        for &d in &e.degrees {
            let mut next = vec![0u64; want.len() + 1];
            for (k, &a) in want.iter().enumerate() {
                next[k] += a * (d - 1);
                next[k + 1] += a;
            }
            want = next;
        }
        assert_eq!(fixed_space_polynomial(&f.g), want, "{}", e.name);
    }
}
