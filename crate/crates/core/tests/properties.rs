use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use gpgraph_core::applications::{
    family_formula, ihara_zeta, is_ramanujan, ramanujan_by_inequality, ramanujan_closed_rule, waring_number,
};
use gpgraph_core::arith::gcd_power;
use gpgraph_core::finite_field::{build_field, FieldElement, FieldParams, FieldTable};
use gpgraph_core::oracles::{count_srg_params, waring_witnesses_hold};
use gpgraph_core::paley_graphs::{
    build_graph, connection_set, enumerate_family, expected_connection_size, is_subgraph, GraphSpec,
};
use gpgraph_core::quadratic_forms::{count_kernel, FormFamily};
use gpgraph_core::spectra_srg::{
    closed_walks, complement_tuple, eigenvalues, spanning_trees, spectrum, spectrum_from_srg, srg_params,
};
use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use proptest::prelude::*;

type FieldCache = Mutex<HashMap<(u64, u32, u32), Arc<FieldTable>>>;

fn fields() -> &'static FieldCache {
    static CACHE: OnceLock<FieldCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn field(p: u64, s: u32, m: u32) -> Arc<FieldTable> {
    let mut cache = fields().lock().unwrap();
    cache.entry((p, s, m)).or_insert_with(|| Arc::new(build_field(FieldParams::new(p, s, m).unwrap()).unwrap())).clone()
}

/// `(p, s, m)` with `p^{sm} <= limit`.
fn small_field(limit: u64) -> impl Strategy<Value = (u64, u32, u32)> {
    let mut out = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13] {
        for s in 1..=12u32 {
            for m in 1..=12u32 {
                if (p as f64).powi((s * m) as i32) <= limit as f64 {
                    out.push((p, s, m));
                }
            }
        }
    }
    proptest::sample::select(out)
}

/// Proper specs, primal or complemented, with `q^m <= limit`.
fn proper_spec(limit: f64, with_complements: bool) -> impl Strategy<Value = GraphSpec> {
    let mut out = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13] {
        for s in 1..=8u32 {
            for m in (2..=24u32).step_by(2) {
                if (p as f64).powi((s * m) as i32) > limit {
                    continue;
                }
                for g in enumerate_family(p, s, m).unwrap() {
                    out.push(g);
                    if with_complements {
                        out.push(g.complement());
                    }
                }
            }
        }
    }
    proptest::sample::select(out)
}

fn big(x: u64) -> BigInt {
    BigInt::from(x)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn frobenius_is_additive_and_multiplicative((p, s, m) in small_field(1 << 12), a in any::<u32>(), b in any::<u32>(), i in 0u32..12) {
        let f = field(p, s, m);
        let n = f.order() as u32;
        let (x, y) = (FieldElement(a % n), FieldElement(b % n));
        let i = i % f.n();
        prop_assert_eq!(f.frobenius(f.add(x, y), i), f.add(f.frobenius(x, i), f.frobenius(y, i)));
        prop_assert_eq!(f.frobenius(f.mul(x, y), i), f.mul(f.frobenius(x, i), f.frobenius(y, i)));
        prop_assert_eq!(f.frobenius(x, f.n()), x);
    }

    #[test]
    fn trace_is_linear_and_onto((p, s, m) in small_field(1 << 12), a in any::<u32>(), b in any::<u32>(), c in any::<u64>()) {
        let f = field(p, s, m);
        let n = f.order() as u32;
        let (x, y) = (FieldElement(a % n), FieldElement(b % n));
        let lambda = f.prime_element(c % p);
        let tr = |z| f.trace(z, f.n(), 1).unwrap();
        prop_assert_eq!(tr(f.add(f.mul(lambda, x), y)), f.add(f.mul(lambda, tr(x)), tr(y)));
        let table = f.trace_table(1).unwrap();
        let mut hit = vec![0u64; p as usize];
        for t in &table {
            hit[t.index()] += 1;
        }
        prop_assert!(hit.iter().all(|&h| h == f.order() as u64 / p));
    }

    #[test]
    fn zech_logarithm_round_trips((p, s, m) in small_field(1 << 14), i in any::<u64>()) {
        let f = field(p, s, m);
        let x = f.exp(i);
        let one_plus = f.add(FieldElement::ONE, x);
        match f.zech(i) {
            Some(z) => prop_assert_eq!(f.exp(z), one_plus),
            None => prop_assert!(one_plus.is_zero()),
        }
        prop_assert_eq!(f.exp(f.log(x).unwrap()), x);
    }

    #[test]
    fn gcd_power_agrees_with_euclid(q in 2u64..40, m in 1u32..40, ell in 1u32..40) {
        let q = big(q);
        let g = gcd_power(&q, m, ell).unwrap();
        let euclid = num_integer::Integer::gcd(&(Pow::pow(&q, m) - 1u32), &(Pow::pow(&q, ell) + 1u32));
        prop_assert_eq!(g, euclid);
    }

    #[test]
    fn connection_set_size_matches_the_three_regimes(g in proper_spec(65536.0, false)) {
        let f = field(g.p, g.s, g.m);
        let conn = connection_set(&g, &f).unwrap();
        prop_assert_eq!(big(conn.members.count() as u64), expected_connection_size(&g));
        prop_assert_eq!(&conn.cardinality, &expected_connection_size(&g));
        prop_assert!(conn.is_symmetric(&f).unwrap());
    }

    #[test]
    fn kernel_counts_sum_to_field_order(g in proper_spec(4096.0, false), gamma in any::<u32>()) {
        let f = field(g.p, g.s, g.m);
        let fam = FormFamily::new(&f, g.ell).unwrap();
        let gamma = FieldElement(1 + gamma % (f.order() as u32 - 1));
        let form = fam.form(gamma).unwrap();
        let total: BigInt = fam.q_elements().iter().map(|&xi| count_kernel(&form, xi).unwrap()).sum();
        prop_assert_eq!(total, g.order());
    }

    #[test]
    fn spectrum_moments_and_main_relation(g in proper_spec(1e40, true)) {
        prop_assume!(!(g.is_degenerate() && !g.complemented));
        let sp = spectrum::<BigInt>(&g).unwrap();
        let r = srg_params::<BigInt>(&g).unwrap();
        prop_assert!(sp.check_moments(&r.v, &r.k).is_ok());
        prop_assert!(r.satisfies_main_relation().unwrap());
        let total: BigInt = sp.pairs().iter().map(|(_, mult)| mult.clone()).sum();
        prop_assert_eq!(total, r.v.clone());
        prop_assert_eq!(sp.moment(1).unwrap(), BigInt::zero());
        prop_assert_eq!(sp.moment(2).unwrap(), &r.v * &r.k);
    }

    #[test]
    fn spectrum_and_srg_determine_each_other(g in proper_spec(1e40, true)) {
        prop_assume!(!g.is_degenerate());
        let r = srg_params::<BigInt>(&g).unwrap();
        let from_srg = spectrum_from_srg(&r.v, &r.k, &r.e, &r.d).unwrap();
        prop_assert_eq!(from_srg, spectrum::<BigInt>(&g).unwrap());
    }

    #[test]
    fn complement_is_an_involution(g in proper_spec(1e40, false)) {
        prop_assume!(!g.is_degenerate());
        let r = srg_params::<BigInt>(&g).unwrap();
        let c = srg_params::<BigInt>(&g.complement()).unwrap();
        let (v, k, e, d) = r.tuple();
        prop_assert_eq!(complement_tuple(&v, &k, &e, &d).unwrap(), c.tuple());
        let (cv, ck, ce, cd) = c.tuple();
        prop_assert_eq!(complement_tuple(&cv, &ck, &ce, &cd).unwrap(), r.tuple());
        prop_assert_eq!(g.complement().complement(), g);
        let w2 = closed_walks::<BigInt>(&g, 2).unwrap() + closed_walks::<BigInt>(&g.complement(), 2).unwrap();
        prop_assert_eq!(w2, &v * (&v - 1u32));
    }

    #[test]
    fn graph_and_complement_are_disjoint(g in proper_spec(4096.0, false)) {
        let primal = build_graph(&g).unwrap();
        let co = build_graph(&g.complement()).unwrap();
        let (a, b) = (primal.adjacency(), co.adjacency());
        for i in [0, 1, a.n() - 1] {
            prop_assert!(!a.get(i, i) && !b.get(i, i));
            for j in (0..a.n()).filter(|&j| j != i) {
                prop_assert!(a.get(i, j) != b.get(i, j));
            }
        }
    }

    #[test]
    fn subgraph_degrees_and_eigenvalues_divide(p in prop::sample::select(vec![2u64, 3, 5]), m in (1u32..=8).prop_map(|h| 2 * h)) {
        let family = enumerate_family(p, 1, m).unwrap();
        for a in &family {
            for b in &family {
                if a == b || !is_subgraph(a, b).unwrap() {
                    continue;
                }
                let (sa, sb) = (spectrum::<BigInt>(a).unwrap(), spectrum::<BigInt>(b).unwrap());
                prop_assert!((sb.largest() % sa.largest()).is_zero());
                if let (Ok(ea), Ok(eb)) = (eigenvalues::<BigInt>(a), eigenvalues::<BigInt>(b)) {
                    prop_assert!(!ea.upsilon.is_zero() && (&eb.upsilon % &ea.upsilon).is_zero());
                }
                let (wa, wb) = (closed_walks::<BigInt>(a, 2).unwrap(), closed_walks::<BigInt>(b, 2).unwrap());
                prop_assert!((wb / 2u32 % (wa / 2u32)).is_zero());
            }
        }
    }

    #[test]
    fn srg_matches_counting(g in proper_spec(1024.0, true)) {
        prop_assume!(!g.is_degenerate());
        let graph = build_graph(&g).unwrap();
        let (v, k, e, d) = count_srg_params(graph.adjacency(), 4096).unwrap();
        let r = srg_params::<BigInt>(&g).unwrap();
        prop_assert_eq!((big(v), big(k), big(e), big(d)), r.tuple());
    }

    #[test]
    fn waring_witnesses_are_sound(g in proper_spec(4096.0, false)) {
        prop_assume!(!g.is_half());
        let cert = waring_number(&g).unwrap();
        let f = field(g.p, g.s, g.m);
        prop_assert!(cert.verify(&f).unwrap());
        prop_assert!(waring_witnesses_hold(&f, &cert));
        prop_assert!(cert.g <= 2);
    }

    #[test]
    fn ramanujan_routes_agree(g in proper_spec(1e40, true)) {
        prop_assume!(!g.is_half());
        prop_assert_eq!(ramanujan_closed_rule(&g).unwrap(), ramanujan_by_inequality(&g).unwrap());
        prop_assert_eq!(is_ramanujan(&g).unwrap(), ramanujan_by_inequality(&g).unwrap());
    }

    #[test]
    fn zeta_degree_and_value_at_zero(g in proper_spec(1e12, true)) {
        prop_assume!(!g.is_degenerate() && !g.is_half());
        let z = ihara_zeta(&g).unwrap();
        let r = srg_params::<BigInt>(&g).unwrap();
        let edges = &r.v * &r.k / 2u32;
        prop_assert_eq!(z.total_degree(), &edges * 2u32);
        prop_assert_eq!(z.reciprocal_at(&BigInt::zero()).unwrap(), BigInt::one());
        prop_assert_eq!(&z.square_factor_exponent, &(&edges - &r.v));
        let mult: BigInt = z.factors.iter().map(|f| f.exponent.clone()).sum();
        prop_assert_eq!(mult, r.v.clone());
    }

    #[test]
    fn family_formulas_match_general_parameters(q in prop::sample::select(vec![2u64, 3, 4]), t in 2u32..=8) {
        let (p, s) = if q == 4 { (2, 2) } else { (q, 1) };
        let g = GraphSpec::new(p, s, 2 * t, 1).unwrap();
        let (primal, complement) = family_formula(q, t).unwrap();
        prop_assert_eq!(primal, srg_params::<BigInt>(&g).unwrap().tuple());
        prop_assert_eq!(complement, srg_params::<BigInt>(&g.complement()).unwrap().tuple());
    }

    #[test]
    fn fixed_width_results_agree_with_big_integers(g in proper_spec(1e9, true)) {
        prop_assume!(!g.is_degenerate());
        let big_r = srg_params::<BigInt>(&g).unwrap();
        let r64 = srg_params::<i64>(&g).unwrap();
        let r128 = srg_params::<i128>(&g).unwrap();
        prop_assert_eq!(BigInt::from(r64.k), big_r.k.clone());
        prop_assert_eq!(BigInt::from(r128.d), big_r.d.clone());
        prop_assume!(g.order() <= big(4096));
        match (spanning_trees::<i128>(&g), spanning_trees::<BigInt>(&g)) {
            (Ok(t), Ok(b)) => prop_assert_eq!(BigInt::from(t), b),
            (Err(gpgraph_core::Error::Overflow), Ok(_)) => {}
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a.map(|_| ()), b.map(|_| ())),
        }
    }
}
