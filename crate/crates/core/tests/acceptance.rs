//! Acceptance criteria. Each criterion prints one PASS/FAIL line followed by
//! its evidence. Reference values are transcribed exactly; where they are
//! known to be wrong the mismatch is pinned in `KNOWN_MISMATCHES` so that a
//! FAIL line never hides a regression.

use std::io::Write;
use std::time::{Duration, Instant};

use gpgraph_core::applications::{
    family_table, ihara_zeta, ramanujan_by_inequality, ramanujan_closed_rule, waring_number,
};
use gpgraph_core::finite_field::build_field;
use gpgraph_core::oracles::{
    closed_walk_counts, count_trees_bruteforce, girth, pair_profile, run_suite_with, waring_witnesses_hold,
    zeta_determinant_at, SuiteOptions,
};
use gpgraph_core::paley_graphs::{build_graph, enumerate_family, is_subgraph, GraphSpec};
use gpgraph_core::spectra_srg::{
    closed_walks, eigenvalue_relations_check, eigenvalues, intersection_array, invariant_bounds, spanning_trees,
    spectrum, srg_params,
};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

const BASES: [(u64, u32); 7] = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)];

fn spec(p: u64, s: u32, m: u32, ell: u32) -> GraphSpec {
    GraphSpec::new(p, s, m, ell).unwrap()
}

struct Outcome {
    id: u32,
    title: &'static str,
    tolerance: &'static str,
    mismatches: Vec<String>,
    evidence: Vec<String>,
    elapsed: Duration,
    time_limit: Option<Duration>,
}

impl Outcome {
    fn new(id: u32, title: &'static str, tolerance: &'static str, time_limit: Option<Duration>) -> Self {
        Outcome {
            id,
            title,
            tolerance,
            mismatches: Vec::new(),
            evidence: Vec::new(),
            elapsed: Duration::ZERO,
            time_limit,
        }
    }

    fn expect<T: PartialEq + std::fmt::Display>(&mut self, key: impl Into<String>, reference: T, computed: T) {
        let key = key.into();
        if reference != computed {
            self.mismatches.push(key.clone());
            self.evidence.push(format!("{key}: reference {reference}, computed {computed}"));
        }
    }

    fn over_time(&self) -> bool {
        self.time_limit.is_some_and(|t| self.elapsed > t)
    }

    fn pass(&self) -> bool {
        self.mismatches.is_empty() && !self.over_time()
    }

    /// Written straight to stdout so the report survives test output capture.
    fn print(&self) {
        let limit = self.time_limit.map_or(String::new(), |t| format!(", limit {:.0} s", t.as_secs_f64()));
        let mut out = std::io::stdout().lock();
        writeln!(
            out,
            "criterion {}: {} [{}] ({}; {:.2} s{limit})",
            self.id,
            if self.pass() { "PASS" } else { "FAIL" },
            self.title,
            self.tolerance,
            self.elapsed.as_secs_f64()
        )
        .unwrap();
        for e in &self.evidence {
            writeln!(out, "    {e}").unwrap();
        }
    }
}

fn timed(mut o: Outcome, f: impl FnOnce(&mut Outcome)) -> Outcome {
    let start = Instant::now();
    f(&mut o);
    o.elapsed = start.elapsed();
    o
}

/// Reference values that disagree with exact computation and with the
/// brute-force oracles; see the README section on reference errata.
const KNOWN_MISMATCHES: &[(u32, &[&str])] = &[
    (1, &["co-Gamma_{3,8}(1) srg", "co-Gamma_{3,8}(1) spectrum"]),
    (
        2,
        &[
            "Gamma_{2,12}(3) srg",
            "Gamma_{2,12}(3) array",
            "co-Gamma_{2,12}(1) srg",
            "co-Gamma_{2,12}(1) array",
            "co-Gamma_{2,12}(1) eigenvalues",
            "co-Gamma_{2,12}(3) srg",
            "co-Gamma_{2,12}(3) array",
        ],
    ),
    (4, &["co-Gamma_{2,4}(1) trees (closed form)", "co-Gamma_{2,4}(1) trees (Bareiss)"]),
    (5, &["co-Gamma_{2,4}(1) w3 (closed form)", "co-Gamma_{2,4}(1) w3 (walk count)"]),
    (
        8,
        &[
            "Gamma_{2,4}(1) factor 1",
            "Gamma_{2,4}(1) factor 2",
            "Gamma_{2,4}(1) factor 3",
            "co-Gamma_{2,4}(1) factor 1",
            "co-Gamma_{2,4}(1) factor 2",
            "co-Gamma_{2,4}(1) factor 3",
            "Gamma_{3,4}(1) factor 1",
            "Gamma_{3,4}(1) factor 2",
            "Gamma_{3,4}(1) factor 3",
            "co-Gamma_{3,4}(1) factor 1",
            "co-Gamma_{3,4}(1) factor 2",
            "co-Gamma_{3,4}(1) factor 3",
        ],
    ),
];

/// `(t, label, srg, spectrum)`.
type TableRow = (&'static str, &'static str, &'static str, &'static str);

/// Rows of the three family tables.
const FAMILY_TABLES: [(u64, [TableRow; 6]); 3] = [
    (
        2,
        [
            ("2", "Gamma_{2,4}(1)", "(16,5,0,2)", "{[5]^1, [1]^10, [-3]^5}"),
            ("2", "co-Gamma_{2,4}(1)", "(16,10,6,6)", "{[10]^1, [2]^5, [-2]^10}"),
            ("3", "Gamma_{2,6}(1)", "(64,21,8,6)", "{[21]^1, [5]^21, [-3]^42}"),
            ("3", "co-Gamma_{2,6}(1)", "(64,42,26,30)", "{[42]^1, [2]^42, [-6]^21}"),
            ("4", "Gamma_{2,8}(1)", "(256,85,24,30)", "{[85]^1, [5]^170, [-11]^85}"),
            ("4", "co-Gamma_{2,8}(1)", "(256,170,114,110)", "{[170]^1, [10]^85, [-6]^170}"),
        ],
    ),
    (
        3,
        [
            ("2", "Gamma_{3,4}(1)", "(81,20,1,6)", "{[20]^1, [2]^60, [-7]^20}"),
            ("2", "co-Gamma_{3,4}(1)", "(81,60,45,42)", "{[60]^1, [6]^20, [-3]^60}"),
            ("3", "Gamma_{3,6}(1)", "(729,182,55,42)", "{[182]^1, [20]^182, [-7]^546}"),
            ("3", "co-Gamma_{3,6}(1)", "(729,546,405,420)", "{[546]^1, [6]^546, [-21]^182}"),
            ("4", "Gamma_{3,8}(1)", "(6561,1640,379,420)", "{[1640]^1, [20]^4920, [-61]^1640}"),
            ("4", "co-Gamma_{3,8}(1)", "(6561,4921,3699,3660)", "{[4921]^1, [60]^1640, [-21]^4920}"),
        ],
    ),
    (
        4,
        [
            ("2", "Gamma_{4,4}(1)", "(256,51,2,12)", "{[51]^1, [3]^204, [-13]^51}"),
            ("2", "co-Gamma_{4,4}(1)", "(256,204,164,156)", "{[204]^1, [12]^51, [-4]^204}"),
            ("3", "Gamma_{4,6}(1)", "(4096,819,194,156)", "{[819]^1, [51]^819, [-13]^3276}"),
            ("3", "co-Gamma_{4,6}(1)", "(4096,3276,2612,2652)", "{[3276]^1, [12]^3276, [-52]^819}"),
            ("4", "Gamma_{4,8}(1)", "(65536,13107,2498,2652)", "{[13107]^1, [51]^52428, [-205]^13107}"),
            ("4", "co-Gamma_{4,8}(1)", "(65536,52428,41972,41820)", "{[52428]^1, [204]^13107, [-52]^52428}"),
        ],
    ),
];

fn criterion_1() -> Outcome {
    let o = Outcome::new(1, "family tables over F_2, F_3, F_4", "exact integers", Some(Duration::from_secs(1)));
    timed(o, |o| {
        let mut rows = 0;
        for (q, reference) in FAMILY_TABLES {
            let table = family_table(q, 4).unwrap();
            assert_eq!(table.len(), reference.len());
            for (row, (t, label, srg, spec_str)) in table.iter().zip(reference) {
                let [ct, clabel, csrg, cspec] = row.columns();
                o.expect(format!("{label} t"), t, &ct);
                o.expect(format!("{label} label"), label, &clabel);
                o.expect(format!("{label} srg"), srg, &csrg);
                o.expect(format!("{label} spectrum"), spec_str, &cspec);
                rows += 1;
            }
        }
        o.evidence.push(format!("{rows} rows compared (srg tuples and spectra)"));
    })
}

fn criterion_2() -> Outcome {
    let o = Outcome::new(2, "worked example over F_4096", "exact integers", Some(Duration::from_secs(1)));
    // (spec, srg, array, (k, upsilon, mu)) as tabulated
    let rows = [
        (spec(2, 1, 12, 1), "(4096,1365,440,462)", "[1365, 924, 1, 462]", "(1365,21,-43)"),
        (spec(2, 1, 12, 3), "(4096,455,54,50)", "[455, 400, 1, 50]", "(455,7,-57)"),
        (spec(2, 1, 12, 1).complement(), "(4096,2730,1826,1086)", "[2730, 903, 1, 1804]", "(2730,42,-22)"),
        (spec(2, 1, 12, 3).complement(), "(4096,3640,3234,3240)", "[3640, 405, 1, 832]", "(3640,-8,56)"),
    ];
    timed(o, |o| {
        for (g, srg, array, eig) in rows {
            let r = srg_params::<BigInt>(&g).unwrap();
            let (v, k, e, d) = r.tuple();
            o.expect(format!("{g} srg"), srg.to_string(), format!("({v},{k},{e},{d})"));
            let a = intersection_array::<BigInt>(&g).unwrap().as_vec();
            o.expect(format!("{g} array"), array.to_string(), format!("{a:?}"));
            let ev = eigenvalues::<BigInt>(&g).unwrap();
            o.expect(format!("{g} eigenvalues"), eig.to_string(), format!("({},{},{})", ev.k, ev.upsilon, ev.mu));
        }
        let ((n1, e1, d1), (n3, e3, d3)) = oracle_counts();
        o.evidence.push(format!("common-neighbour counting: Gamma_{{2,12}}(1) has {n1}, e={e1}, d={d1}"));
        o.evidence.push(format!("common-neighbour counting: Gamma_{{2,12}}(3) has {n3}, e={e3}, d={d3}"));
    })
}

/// Counted `(v, e, d)` for the two 4096-vertex graphs, from vertex 0 only
/// (the full exhaustive count runs in criterion 3).
fn oracle_counts() -> ((usize, usize, usize), (usize, usize, usize)) {
    let count = |ell| {
        let g = build_graph(&spec(2, 1, 12, ell)).unwrap();
        let a = g.adjacency();
        let n = a.n();
        let e = a.neighbors(0).next().map(|j| a.common(0, j)).unwrap();
        let d = (1..n).find(|&j| !a.get(0, j)).map(|j| a.common(0, j)).unwrap();
        (n, e, d)
    };
    (count(1), count(3))
}

fn sweep_specs() -> Vec<GraphSpec> {
    let mut out = Vec::new();
    for (p, s) in BASES {
        let q = p.pow(s);
        let mut m = 2;
        while q.pow(m) <= 4096 {
            for g in enumerate_family(p, s, m).unwrap() {
                out.push(g);
                out.push(g.complement());
            }
            m += 1;
        }
    }
    out
}

fn criterion_3() -> Outcome {
    let o = Outcome::new(3, "oracle equivalence sweep, q^m <= 4096", "exact integers", Some(Duration::from_secs(600)));
    timed(o, |o| {
        let opts = SuiteOptions { controls: false, ..SuiteOptions::default() };
        let mut checks = 0;
        let specs = sweep_specs();
        for g in &specs {
            let report = run_suite_with(g, &opts).unwrap();
            checks += report.checks.len();
            for c in report.failures() {
                o.expect(format!("{g} {}", c.name), c.expected.clone(), c.observed.clone());
            }
            for name in ["walks_2", "walks_6", "klapper", "girth"] {
                if report.check(name).is_none() {
                    o.expect(format!("{g} {name}"), "present", "missing");
                }
            }
            let shape = if g.is_half() && !g.complemented { "components" } else { "diameter" };
            if report.check(shape).is_none() {
                o.expect(format!("{g} {shape}"), "present", "missing");
            }
        }
        o.evidence.push(format!("{} specs, {checks} checks", specs.len()));
    })
}

fn criterion_4() -> Outcome {
    let o = Outcome::new(
        4,
        "spanning trees of the Clebsch graph and its complement",
        "exact integers",
        Some(Duration::from_secs(1)),
    );
    timed(o, |o| {
        for (g, reference) in [(spec(2, 1, 4, 1), 2147483648u64), (spec(2, 1, 4, 1).complement(), 472392)] {
            let closed = spanning_trees::<BigInt>(&g).unwrap();
            let graph = build_graph(&g).unwrap();
            let bareiss = count_trees_bruteforce(graph.adjacency(), 512).unwrap();
            o.expect(format!("{g} trees (closed form)"), BigInt::from(reference), closed.clone());
            o.expect(format!("{g} trees (Bareiss)"), BigInt::from(reference), bareiss.clone());
            o.expect(format!("{g} closed form vs Bareiss"), closed, bareiss);
        }
    })
}

fn criterion_5() -> Outcome {
    let o = Outcome::new(5, "triangles and girth of the Clebsch graph and its complement", "exact integers", None);
    timed(o, |o| {
        for (g, w3) in [(spec(2, 1, 4, 1), 0u64), (spec(2, 1, 4, 1).complement(), 600)] {
            let graph = build_graph(&g).unwrap();
            let closed = closed_walks::<BigInt>(&g, 3).unwrap();
            let counted = closed_walk_counts(graph.adjacency(), 4096).unwrap().traces[3].clone();
            o.expect(format!("{g} w3 (closed form)"), BigInt::from(w3), closed.clone());
            o.expect(format!("{g} w3 (walk count)"), BigInt::from(w3), counted.clone());
            o.expect(format!("{g} w3 closed form vs walk count"), closed, counted);
            let bound = invariant_bounds::<BigInt>(&g).unwrap().girth;
            let profile = pair_profile(graph.adjacency(), 4096).unwrap();
            let observed = girth(graph.adjacency(), &profile);
            o.expect(format!("{g} girth"), format!("{bound:?}"), format!("{observed:?}"));
        }
        o.expect(
            "Gamma_{2,4}(1) girth value",
            "Some(4)",
            &format!("{:?}", invariant_bounds::<BigInt>(&spec(2, 1, 4, 1)).unwrap().girth),
        );
    })
}

fn criterion_6() -> Outcome {
    let o = Outcome::new(6, "Waring numbers with full witness tables", "exact", None);
    timed(o, |o| {
        let cases =
            [(2, 1, 4, 1, 2u8), (2, 1, 6, 1, 2), (3, 1, 4, 1, 2), (2, 2, 4, 1, 2), (2, 1, 12, 3, 2), (2, 1, 3, 1, 1)];
        for (p, s, m, ell, g_ref) in cases {
            let g = spec(p, s, m, ell);
            let cert = waring_number(&g).unwrap();
            let field = build_field(g.field_params()).unwrap();
            o.expect(format!("{g} g"), g_ref, cert.g);
            o.expect(format!("{g} witnesses"), true, waring_witnesses_hold(&field, &cert));
            o.evidence.push(format!(
                "g({}, {}) = {}, {} witnesses re-evaluated",
                cert.k_exp,
                cert.field_size,
                cert.g,
                cert.witnesses.as_ref().map_or(0, Vec::len)
            ));
        }
    })
}

fn criterion_7() -> Outcome {
    let o = Outcome::new(7, "Ramanujan classification, q <= 9, m <= 12", "exact (squared integer comparison)", None);
    timed(o, |o| {
        let (mut total, mut positive, mut complements) = (0, 0, 0);
        for (p, s) in BASES {
            for m in 2..=12 {
                for g in enumerate_family(p, s, m).unwrap().into_iter().filter(|g| !g.is_half()) {
                    let closed = ramanujan_closed_rule(&g).unwrap();
                    let ineq = ramanujan_by_inequality(&g).unwrap();
                    o.expect(format!("{g} closed vs inequality"), closed, ineq);
                    let co = g.complement();
                    o.expect(format!("{co} closed rule"), true, ramanujan_closed_rule(&co).unwrap());
                    o.expect(format!("{co} inequality"), true, ramanujan_by_inequality(&co).unwrap());
                    total += 1;
                    complements += 1;
                    positive += ineq as usize;
                }
            }
        }
        o.evidence.push(format!("{total} primal specs ({positive} Ramanujan), {complements} complements"));
    })
}

/// `(linear, quadratic, exponent)` of one factor.
type ZetaFactorRef = (i64, i64, i64);

/// `(spec, square exponent, factors)` reference values.
fn zeta_reference() -> Vec<(GraphSpec, i64, [ZetaFactorRef; 3])> {
    vec![
        (spec(2, 1, 4, 1), 24, [(-5, -4, 1), (-1, -4, 10), (3, -4, 5)]),
        (spec(2, 1, 4, 1).complement(), 64, [(-10, -9, 1), (-2, -9, 5), (2, -9, 10)]),
        (spec(3, 1, 4, 1), 729, [(-20, -19, 1), (-2, -19, 60), (7, -19, 20)]),
        (spec(3, 1, 4, 1).complement(), 2349, [(-60, -19, 1), (-6, -19, 20), (3, -19, 60)]),
    ]
}

fn criterion_8() -> Outcome {
    let o = Outcome::new(8, "Ihara zeta factorizations", "exact coefficients", None);
    timed(o, |o| {
        for (g, square, factors) in zeta_reference() {
            let z = ihara_zeta(&g).unwrap();
            o.expect(format!("{g} square exponent"), BigInt::from(square), z.square_factor_exponent.clone());
            let triples = z.coefficient_triples();
            for (i, ((l, q, e), (cl, cq, ce))) in factors.iter().zip(&triples).enumerate() {
                o.expect(
                    format!("{g} factor {}", i + 1),
                    format!("(1{:+}u{:+}u^2)^{e}", l, q),
                    format!("(1{:+}u{:+}u^2)^{ce}", cl.to_i64().unwrap(), cq.to_i64().unwrap()),
                );
            }
            let graph = build_graph(&g).unwrap();
            let k = z.degree.to_i64().unwrap();
            let det = zeta_determinant_at(graph.adjacency(), k, 2, 512).unwrap();
            let product: BigInt = triples
                .iter()
                .map(|(l, q, e)| num_traits::Pow::pow(BigInt::from(1) + l * 2 + q * 4, e.to_u32().unwrap()))
                .product();
            o.expect(format!("{g} factorization vs determinant at u=2"), det.clone(), product.clone());
            let reference: BigInt = factors
                .iter()
                .map(|(l, q, e)| num_traits::Pow::pow(BigInt::from(1 + 2 * l + 4 * q), *e as u32))
                .product();
            let verdict = |same: bool| if same { "matches" } else { "differs from" };
            o.evidence.push(format!(
                "{g}: det((1+(k-1)u^2)I - uA) at u=2 = {det}; {} the computed factors, {} the reference factors",
                verdict(det == product),
                verdict(det == reference)
            ));
        }
    })
}

fn criterion_9() -> Outcome {
    let o = Outcome::new(9, "property suites and falsification controls", "exact", None);
    timed(o, |o| {
        let mut specs_checked = 0;
        let mut subgraph_pairs = 0;
        for (p, s) in BASES {
            for m in 2..=16 {
                let family = enumerate_family(p, s, m).unwrap();
                for g in family.iter().flat_map(|g| [*g, g.complement()]) {
                    if g.is_degenerate() && !g.complemented {
                        continue;
                    }
                    let sp = spectrum::<BigInt>(&g).unwrap();
                    let r = srg_params::<BigInt>(&g).unwrap();
                    o.expect(format!("{g} moments"), true, sp.check_moments(&r.v, &r.k).is_ok());
                    o.expect(format!("{g} (v-k-1)d = k(k-e-1)"), true, r.satisfies_main_relation().unwrap());
                    if !g.is_half() {
                        let rel = eigenvalue_relations_check::<BigInt>(&g).unwrap();
                        o.expect(format!("{g} eigenvalue relations"), String::new(), rel.join("; "));
                    }
                    specs_checked += 1;
                }
                for a in &family {
                    for b in &family {
                        if a != b && is_subgraph(a, b).unwrap() {
                            subgraph_pairs += 1;
                            let (ea, eb) = (eigenvalues::<BigInt>(a), eigenvalues::<BigInt>(b));
                            let divides =
                                |x: &BigInt, y: &BigInt| if x.is_zero() { y.is_zero() } else { (y % x).is_zero() };
                            let (ka, kb) = (
                                spectrum::<BigInt>(a).unwrap().largest().clone(),
                                spectrum::<BigInt>(b).unwrap().largest().clone(),
                            );
                            o.expect(format!("{a} <= {b} degree divides"), true, divides(&ka, &kb));
                            if let (Ok(ea), Ok(eb)) = (ea, eb) {
                                o.expect(
                                    format!("{a} <= {b} upsilon divides"),
                                    true,
                                    divides(&ea.upsilon, &eb.upsilon),
                                );
                            }
                            let (wa, wb) =
                                (closed_walks::<BigInt>(a, 2).unwrap(), closed_walks::<BigInt>(b, 2).unwrap());
                            o.expect(format!("{a} <= {b} edge count divides"), true, divides(&(wa / 2), &(wb / 2)));
                        }
                    }
                }
            }
        }
        let mut controls = 0;
        for g in sweep_specs().into_iter().filter(|g| g.order() <= BigInt::from(256)) {
            let report = run_suite_with(&g, &SuiteOptions { tree_budget: 64, ..SuiteOptions::default() }).unwrap();
            for c in report.checks.iter().filter(|c| c.name.starts_with("control:")) {
                controls += 1;
                o.expect(format!("{g} {}", c.name), c.expected.clone(), c.observed.clone());
            }
        }
        o.evidence.push(format!(
            "{specs_checked} records, {subgraph_pairs} subgraph pairs, {controls} falsification controls"
        ));
    })
}

#[test]
fn acceptance() {
    let outcomes = [
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
    ];
    for o in &outcomes {
        o.print();
    }
    for o in &outcomes {
        let known: Vec<String> = KNOWN_MISMATCHES
            .iter()
            .find(|(id, _)| *id == o.id)
            .map(|(_, keys)| keys.iter().map(|k| k.to_string()).collect())
            .unwrap_or_default();
        assert_eq!(o.mismatches, known, "criterion {} differs from its pinned outcome", o.id);
        assert!(!o.over_time(), "criterion {} exceeded its time limit", o.id);
    }
}
