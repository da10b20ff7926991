//! Independent brute-force verification of the closed forms on materialized
//! graphs.
//!
//! Nothing here evaluates a closed form; the closed values only enter as the
//! `expected` side of a [`Check`].

mod algebraic;
mod counting;
mod linalg;

use std::fmt::Display;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

pub use algebraic::{
    arc_transitivity_witness, character_eigenvalues, coset_decomposition, eigenvalue_multiset, klapper_sweep,
    ramanujan_from_eigenvalues, waring_witnesses_hold, CosetDecomposition, KlapperSweep,
};
pub use counting::{
    bfs_diameter, bfs_distances, closed_walk_counts, component_sizes, count_srg_params, count_trees_bruteforce,
    count_walks_bruteforce, girth, pair_profile, srg_from_profile, verify_a2_identity, zeta_determinant_at,
    PairProfile, WalkCounts, DEFAULT_ORACLE_BUDGET, FULL_TRACE_LIMIT, MAX_WALK_LENGTH, SAMPLED_SOURCES, TREE_BUDGET,
};
pub use linalg::bareiss_determinant;

use crate::applications::{ihara_zeta, is_ramanujan, waring_number_with_budget};
use crate::error::{Error, Result};
use crate::finite_field::{FieldElement, FieldTable};
use crate::paley_graphs::{build_graph_with_budget, BitMatrix, GraphSpec};
use crate::quadratic_forms::{class_from_counts, classify_form, value_counts, FormFamily};
use crate::spectra_srg::{
    closed_walks, intersection_array, invariant_bounds, spanning_trees, spectrum, srg_params, Spectrum,
};

/// Size limits for the more expensive checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SuiteOptions {
    pub budget: usize,
    pub tree_budget: usize,
    pub zeta_budget: usize,
    pub coset_budget: usize,
    pub arc_budget: usize,
    pub controls: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            budget: DEFAULT_ORACLE_BUDGET,
            tree_budget: 256,
            zeta_budget: 128,
            coset_budget: 1024,
            arc_budget: 256,
            controls: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub spec: GraphSpec,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn show<T: Display>(r: &Result<T>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

struct Recorder {
    checks: Vec<Check>,
}

impl Recorder {
    /// Runs `f`, which yields `(expected, observed)`; passes on equality.
    fn compare<E: Display, O: Display>(&mut self, name: &str, f: impl FnOnce() -> (Result<E>, Result<O>)) {
        let start = Instant::now();
        let (e, o) = f();
        let pass = e.is_ok() && o.is_ok() && show(&e) == show(&o);
        self.push(name, show(&e), show(&o), pass, start);
    }

    /// Runs a corrupted-input control; passes when the oracle rejects it.
    fn control(&mut self, name: &str, f: impl FnOnce() -> Result<bool>) {
        let start = Instant::now();
        let observed = match f() {
            Ok(true) => "rejected".to_string(),
            Ok(false) => "accepted".to_string(),
            Err(e) => format!("error: {e}"),
        };
        let pass = observed == "rejected";
        self.push(&format!("control:{name}"), "rejected".into(), observed, pass, start);
    }

    fn push(&mut self, name: &str, expected: String, observed: String, pass: bool, start: Instant) {
        let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
        self.checks.push(Check { name: name.into(), expected, observed, pass, elapsed_ms });
    }
}

fn tuple_string(t: (u64, u64, u64, u64)) -> String {
    format!("({},{},{},{})", t.0, t.1, t.2, t.3)
}

fn pairs_string(pairs: &[(BigInt, BigInt)]) -> String {
    Spectrum::new(pairs.to_vec()).to_string()
}

fn opt_string<T: Display>(x: Option<T>) -> String {
    x.map_or_else(|| "none".into(), |v| v.to_string())
}

/// Runs every applicable cross-check on one spec.
pub fn run_suite(spec: &GraphSpec) -> Result<VerificationReport> {
    run_suite_with(spec, &SuiteOptions::default())
}

pub fn run_suite_with(spec: &GraphSpec, opts: &SuiteOptions) -> Result<VerificationReport> {
    spec.require_proper()?;
    let n = spec
        .order()
        .to_usize()
        .filter(|&n| n <= opts.budget)
        .ok_or_else(|| Error::BudgetExceeded { order: spec.order().to_string(), budget: opts.budget as u64 })?;
    let g = build_graph_with_budget(spec, opts.budget as u64)?;
    let field = g.field();
    let adj = g.adjacency();
    let half = spec.is_half();
    let connected = !(half && !spec.complemented);
    let degenerate = spec.is_degenerate() && !spec.complemented;
    let mut rec = Recorder { checks: Vec::new() };

    let profile = pair_profile(adj, opts.budget);
    rec.compare("regularity", || {
        let k = closed_k(spec);
        let counted = profile.as_ref().map_err(Clone::clone).and_then(|p| {
            if p.degree.0 == p.degree.1 {
                Ok(BigInt::from(p.degree.0))
            } else {
                Err(Error::NotStronglyRegular("irregular".into()))
            }
        });
        (k, counted)
    });
    if !degenerate {
        rec.compare("srg_params", || {
            let closed = srg_params::<BigInt>(spec).map(|r| {
                let (v, k, e, d) = r.tuple();
                format!("({v},{k},{e},{d})")
            });
            let counted = profile.clone().and_then(|p| srg_from_profile(&p)).map(tuple_string);
            (closed, counted)
        });
        rec.compare("a2_identity", || {
            let ok =
                srg_params::<BigInt>(spec).and_then(|r| verify_a2_identity(adj, &r.v, &r.k, &r.e, &r.d, opts.budget));
            (Ok(true), ok)
        });
    }
    if connected && !degenerate {
        rec.compare("intersection_array", || {
            let closed = intersection_array::<BigInt>(spec).map(|a| format!("{:?}", a.as_vec()));
            let counted = profile.clone().and_then(|p| srg_from_profile(&p)).map(|(_, k, e, d)| {
                format!("{:?}", [BigInt::from(k), BigInt::from(k - e - 1), BigInt::from(1), BigInt::from(d)])
            });
            (closed, counted)
        });
    }

    let walks = closed_walk_counts(adj, opts.budget);
    for r in 2..=MAX_WALK_LENGTH {
        let name = format!("walks_{r}");
        rec.compare(&name, || {
            let observed = walks.as_ref().map(|w| w.traces[r as usize].clone()).map_err(Clone::clone);
            (closed_walks::<BigInt>(spec, r), observed)
        });
    }
    let closed_spectrum = spectrum::<BigInt>(spec);
    rec.compare("spectrum_moments", || {
        let closed = closed_spectrum.clone().and_then(|s| {
            s.check_moments(&BigInt::from(n), s.largest())?;
            (0..=MAX_WALK_LENGTH).map(|j| s.moment(j)).collect::<Result<Vec<_>>>().map(|v| format!("{v:?}"))
        });
        let observed = walks.as_ref().map(|w| format!("{:?}", w.traces)).map_err(Clone::clone);
        (closed, observed)
    });
    let eigen = character_eigenvalues(field, adj);
    rec.compare("character_spectrum", || {
        let observed = eigen.as_ref().map(|v| pairs_string(&eigenvalue_multiset(v))).map_err(Clone::clone);
        (closed_spectrum.as_ref().map(|s| s.to_string()).map_err(Clone::clone), observed)
    });
    if n <= opts.tree_budget {
        rec.compare("spanning_trees", || {
            (spanning_trees::<BigInt>(spec), count_trees_bruteforce(adj, opts.tree_budget))
        });
    }

    let bounds = invariant_bounds::<BigInt>(spec);
    if connected {
        rec.compare("diameter", || {
            let closed = bounds.as_ref().map(|b| opt_string(b.diameter)).map_err(Clone::clone);
            (closed, bfs_diameter(adj, 0, opts.budget).map(|d| d.to_string()))
        });
    } else {
        rec.compare("components", || {
            let a = spec.q().pow(spec.m / 2);
            let sizes = component_sizes(adj);
            let observed = match bfs_diameter(adj, 0, opts.budget) {
                Err(Error::DisconnectedComponentsFound { components }) if sizes.iter().all(|&s| s == sizes[0]) => {
                    Ok(format!("{components} x {}", sizes[0]))
                }
                other => Err(Error::Internal(format!("expected a disconnected graph, got {other:?}"))),
            };
            (Ok(format!("{a} x {a}")), observed)
        });
    }
    rec.compare("girth", || {
        let closed = bounds.as_ref().map(|b| opt_string(b.girth)).map_err(Clone::clone);
        (closed, profile.as_ref().map(|p| opt_string(girth(adj, p))).map_err(Clone::clone))
    });

    rec.compare("klapper", || {
        let observed = klapper_sweep(field, spec.ell).and_then(|s| {
            if s.mismatches.is_empty() {
                Ok(format!("{} degenerate forms", s.degenerate))
            } else {
                Err(Error::Internal(s.mismatches.join("; ")))
            }
        });
        (closed_k(&spec.primal()).map(|k| format!("{k} degenerate forms")), observed)
    });

    if !spec.complemented && !half {
        rec.compare("waring", || {
            let observed = waring_number_with_budget(spec, opts.budget as u64).map(|c| {
                let held = waring_witnesses_hold(field, &c);
                format!("g = {}, witnesses {}", c.g, if held { "verified" } else { "invalid" })
            });
            (Ok("g = 2, witnesses verified".to_string()), observed)
        });
    }
    if connected {
        rec.compare("ramanujan", || {
            let observed = eigen.as_ref().map(|v| ramanujan_from_eigenvalues(v, &v[0])).map_err(Clone::clone);
            (is_ramanujan(spec), observed)
        });
    }
    if spec.complemented && n <= opts.coset_budget {
        rec.compare("coset_decomposition", || {
            let primal = build_graph_with_budget(&spec.primal(), opts.budget as u64);
            let observed = primal.and_then(|p| coset_decomposition(field, p.adjacency(), adj)).map(|c| {
                format!(
                    "{} cosets of size {}, partition {}, symmetric {}, complement {}",
                    c.cosets, c.coset_size, c.partition, c.symmetric, c.complement_covered
                )
            });
            let expected = closed_k(&spec.primal()).map(|k| {
                format!(
                    "{} cosets of size {k}, partition true, symmetric true, complement true",
                    spec.q().pow(spec.ell) + 1
                )
            });
            (expected, observed)
        });
    }
    if !spec.complemented && n <= opts.arc_budget {
        rec.compare("arc_transitivity", || (Ok(true), Ok(arc_transitivity_witness(field, adj))));
    }
    if connected && !spec.is_degenerate() && n <= opts.zeta_budget {
        rec.compare("zeta_determinant", || zeta_check(spec, adj, opts));
    }
    if opts.controls {
        falsification_controls(&mut rec, spec, field, adj, opts);
    }
    Ok(VerificationReport { spec: *spec, checks: rec.checks })
}

fn closed_k(spec: &GraphSpec) -> Result<BigInt> {
    spectrum::<BigInt>(spec).map(|s| s.largest().clone())
}

/// Compares the factorized `Π D(s,u)^{mult}` with the determinant at `u = 2`.
fn zeta_check(spec: &GraphSpec, adj: &BitMatrix, opts: &SuiteOptions) -> (Result<BigInt>, Result<BigInt>) {
    let u = BigInt::from(2);
    let expected = ihara_zeta(spec).and_then(|z| {
        let mut acc = BigInt::from(1);
        for (lin, quad, e) in z.coefficient_triples() {
            let base = BigInt::from(1) + lin * &u + quad * &u * &u;
            acc *= num_traits::Pow::pow(base, e.to_u32().ok_or(Error::Overflow)?);
        }
        Ok(acc)
    });
    let k = adj.row_weight(0) as i64;
    (expected, zeta_determinant_at(adj, k, 2, opts.zeta_budget))
}

/// A copy of `adj` with the pair `(0, x)` toggled for the first `x ≠ 0`
/// outside the neighbourhood of `0`, or inside it if there is none.
pub fn mutate_edge(adj: &BitMatrix) -> BitMatrix {
    let mut out = adj.clone();
    let n = adj.n();
    let x = (1..n).find(|&x| !adj.get(0, x)).unwrap_or(1.min(n - 1));
    let now = out.get(0, x);
    out.set_sym(0, x, !now);
    out
}

fn falsification_controls(
    rec: &mut Recorder,
    spec: &GraphSpec,
    field: &FieldTable,
    adj: &BitMatrix,
    opts: &SuiteOptions,
) {
    let n = adj.n();
    let mutated = mutate_edge(adj);
    rec.control("srg_mutated_edge", || Ok(count_srg_params(&mutated, opts.budget).is_err()));
    if let Ok(r) = srg_params::<BigInt>(spec) {
        rec.control("a2_perturbed_d", || {
            verify_a2_identity(adj, &r.v, &r.k, &r.e, &(&r.d + 1), opts.budget).map(|ok| !ok)
        });
    }
    rec.control("walks_mutated_edge", || match closed_walk_counts(&mutated, opts.budget) {
        Ok(w) => {
            Ok((2..=MAX_WALK_LENGTH)
                .any(|r| closed_walks::<BigInt>(spec, r).ok() != Some(w.traces[r as usize].clone())))
        }
        Err(_) => Ok(true),
    });
    let connected = !(spec.is_half() && !spec.complemented);
    if connected && n <= opts.tree_budget.min(64) {
        rec.control("trees_mutated_edge", || {
            Ok(count_trees_bruteforce(&mutated, opts.tree_budget)? != spanning_trees::<BigInt>(spec)?)
        });
    }
    rec.control("character_sum_truncated_set", || {
        let mut truncated = adj.clone();
        if let Some(s) = adj.neighbors(0).next() {
            truncated.set(0, s, false);
        }
        match character_eigenvalues(field, &truncated) {
            Err(_) => Ok(true),
            Ok(v) => Ok(pairs_string(&eigenvalue_multiset(&v)) != spectrum::<BigInt>(spec)?.to_string()),
        }
    });
    rec.control("klapper_corrupted_histogram", || {
        let fam = FormFamily::new(field, spec.ell)?;
        let f = fam.form(FieldElement::ONE)?;
        let closed = classify_form(&f)?;
        let mut counts = value_counts(&f);
        counts[0] -= 1;
        counts[1] += 1;
        Ok(class_from_counts(fam.q(), fam.m(), &counts) != Ok(closed))
    });
    rec.control("diameter_isolated_vertex", || {
        let mut cut = adj.clone();
        for v in adj.neighbors(0).collect::<Vec<_>>() {
            cut.set_sym(0, v, false);
        }
        Ok(matches!(bfs_diameter(&cut, 0, opts.budget), Err(Error::DisconnectedComponentsFound { .. })))
    });
    if let Ok(sp) = spectrum::<BigInt>(spec) {
        rec.control("ramanujan_inflated_eigenvalue", || {
            let k = sp.largest().clone();
            let mut values: Vec<BigInt> = vec![k.clone()];
            let big = num_integer::Roots::sqrt(&((&k - 1) * 4)) + 1;
            values.push(big);
            Ok(!ramanujan_from_eigenvalues(&values, &k))
        });
    }
    if !spec.complemented && !spec.is_half() {
        if let Ok(mut cert) = waring_number_with_budget(spec, opts.budget as u64) {
            rec.control("waring_corrupted_witness", || {
                let w = cert.witnesses.as_mut().ok_or(Error::Internal("no witnesses".into()))?;
                let target = w.len() - 1;
                w[target] = (w[target].1, w[target].1);
                if w[target].0.is_zero() {
                    w[target].0 = FieldElement::ONE;
                }
                Ok(!waring_witnesses_hold(field, &cert))
            });
        }
        if n <= opts.arc_budget {
            rec.control("arc_transitivity_mutated_edge", || Ok(!arc_transitivity_witness(field, &mutated)));
        }
    }
}
