//! Acceptance gate: one test per criterion, each printing a pass line
//! with its runtime. Run with `--nocapture` to see the lines directly;
//! the harness result per test carries the same pass/fail signal.

use ewsat::bits::BitSet;
use ewsat::boolfun::{find_restriction, BoolFun, ConstraintFamily, RegimeTag, Slot};
use ewsat::clique::{self, Graph};
use ewsat::clique_reduce::{self, ColorConfig};
use ewsat::formula::Formula;
use ewsat::gen;
use ewsat::impl_reduce::{self, TrialConfig};
use ewsat::solver::{self, Verdict};
use ewsat::wdi;
use std::time::Instant;

fn pass(no: u32, name: &str, t: Instant, budget_s: f64) {
    let secs = t.elapsed().as_secs_f64();
    println!("criterion {no:02} {name}: PASS ({secs:.1}s)");
    assert!(secs < budget_s, "{name} took {secs:.1}s, budget {budget_s}s");
}

fn fam(funs: Vec<BoolFun>) -> ConstraintFamily {
    ConstraintFamily::new(funs).unwrap()
}

#[test]
fn criterion_01_regime_table() {
    let t = Instant::now();
    // All eight ternary functions with exactly one falsifying
    // assignment, the clause family of 3-SAT.
    let clauses: Vec<BoolFun> = (0..8u32)
        .map(|m| {
            let bits: Vec<bool> = (0..8).map(|i| i != m).collect();
            BoolFun::new(format!("C{m}"), 3, &bits).unwrap()
        })
        .collect();
    let fprime = BoolFun::from_table_str("FP", 3, "10010100").unwrap();
    let dhorn = BoolFun::from_table_str("DHORN", 3, "10111111").unwrap();
    let cases: Vec<(&str, ConstraintFamily, RegimeTag)> = vec![
        ("impl", fam(vec![BoolFun::impl2()]), RegimeTag::Subexponential),
        ("nand2", fam(vec![BoolFun::nand(2)]), RegimeTag::Clique),
        ("nand3", fam(vec![BoolFun::nand(3)]), RegimeTag::BruteForce),
        ("threesat", fam(clauses), RegimeTag::BruteForce),
        ("or2", fam(vec![BoolFun::or2()]), RegimeTag::Fpt),
        ("eq2", fam(vec![BoolFun::eq2()]), RegimeTag::Fpt),
        ("dhorn", fam(vec![dhorn]), RegimeTag::Subexponential),
        (
            "impl-fprime",
            fam(vec![BoolFun::impl2(), fprime]),
            RegimeTag::Subexponential,
        ),
    ];
    for (name, family, want) in cases {
        let got = family.classify().unwrap();
        assert_eq!(got.tag, want, "family {name}");
        assert!(got.replays(&family), "stale witness for {name}");
    }
    pass(1, "regime-table", t, 1.0);
}

#[test]
fn criterion_02_gcd_criterion() {
    let t = Instant::now();
    // Inside this parameter box the side conditions pin the layer gcd
    // to a divisor of k (weights are 1, or 2 only at k = 8), so the
    // infeasible side of the equivalence is vacuous here; the equality
    // check still runs both ways on every instance.
    let mut checked = 0;
    for seed in 0..60 {
        let (inst, layers) = gen::seeded_frobenius(seed);
        let view = wdi::FrobeniusView::new(&inst, layers).expect("side conditions");
        let by_gcd = view.feasible();
        let brute = wdi::solve_bruteforce(&inst).unwrap();
        assert_eq!(brute.is_some(), by_gcd, "seed {seed}");
        if by_gcd {
            let w = wdi::frobenius_witness(&view).unwrap();
            assert!(wdi::verify_witness(&inst, &w), "seed {seed}");
        }
        checked += 1;
    }
    assert!(checked >= 50);
    pass(2, "gcd-criterion", t, 60.0);
}

#[test]
fn criterion_03_three_way_agreement() {
    let t = Instant::now();
    for seed in 0..300u64 {
        let n = 2 + (seed % 17) as usize;
        let pct = (10 + (seed % 7) * 12) as u32;
        let wmax = 1 + seed % 3;
        let k = 1 + seed % 12;
        let inst = gen::seeded_dag(n, pct, wmax, k, seed);
        let a = wdi::solve_frobenius(&inst).unwrap();
        let b = wdi::solve_sources(&inst).unwrap();
        let c = wdi::solve_bruteforce(&inst).unwrap();
        assert_eq!(a.is_some(), c.is_some(), "frobenius vs brute force, seed {seed}");
        assert_eq!(b.is_some(), c.is_some(), "sources vs brute force, seed {seed}");
        for w in [a, b, c].into_iter().flatten() {
            assert!(wdi::verify_witness(&inst, &w), "seed {seed}");
        }
    }
    pass(3, "three-way-agreement", t, 120.0);
}

#[test]
fn criterion_04_search_tree_pipeline() {
    let t = Instant::now();
    // The per-vertex consideration counter is an always-on assertion
    // inside the trial construction, so any trip fails this test.
    let sat = gen::corpus_nand2_avoiding_sat(0);
    let mut missed = Vec::new();
    for e in &sat {
        let cfg = TrialConfig::default_for(&e.formula, e.k, 1);
        let (hit, _) = impl_reduce::solve_nand2_avoiding(&e.formula, e.k, &cfg).unwrap();
        match hit {
            Some(w) => {
                assert_eq!(w.count(), e.k);
                assert!(e.formula.satisfied_by(&w), "{}", e.name);
            }
            None => missed.push(e),
        }
    }
    let found = sat.len() - missed.len();
    assert!(
        found * 100 >= sat.len() * 95,
        "only {found}/{} found at the default budget",
        sat.len()
    );
    for e in missed {
        let budget = impl_reduce::default_budget(e.k, e.formula.family().arity())
            .saturating_mul(100);
        let cfg = TrialConfig::new(budget, 1).unwrap();
        let (hit, _) = impl_reduce::solve_nand2_avoiding(&e.formula, e.k, &cfg).unwrap();
        let w = hit.unwrap_or_else(|| panic!("{} unsolved at hundredfold budget", e.name));
        assert!(e.formula.satisfied_by(&w));
    }
    for e in gen::corpus_nand2_avoiding_unsat(0) {
        let cfg = TrialConfig::default_for(&e.formula, e.k, 1);
        let (hit, _) = impl_reduce::solve_nand2_avoiding(&e.formula, e.k, &cfg).unwrap();
        assert!(hit.is_none(), "YES on infeasible {}", e.name);
    }
    pass(4, "search-tree-pipeline", t, 600.0);
}

#[test]
fn criterion_05_color_coding_pipeline() {
    let t = Instant::now();
    let pool = gen::corpus_nand3_avoiding(0);
    let cfg = ColorConfig {
        seed: 1,
        delta: 0.01,
        exhaustive: false,
    };
    let mut feasible = 0usize;
    let mut misses = 0usize;
    for e in &pool {
        let truth = e.witness.is_some();
        feasible += truth as usize;
        let (got, _) = clique_reduce::solve_nand_d_avoiding(&e.formula, e.k, 2, &cfg).unwrap();
        match got {
            Some(w) => {
                assert_eq!(w.count(), e.k, "{}", e.name);
                assert!(e.formula.satisfied_by(&w), "{}", e.name);
                assert!(truth, "YES on infeasible {}", e.name);
            }
            None => {
                if truth {
                    misses += 1;
                }
            }
        }
    }
    // Each feasible instance fails with probability at most delta, so
    // the expected miss count is 0.01 * feasible; allow generous slack
    // above that before declaring the randomization broken.
    let bound = (0.01 * feasible as f64).ceil() as usize + 4;
    assert!(
        misses <= bound,
        "{misses} completeness misses among {feasible} feasible instances, bound {bound}"
    );

    // Closure bracketing on the same corpus, exhaustively: solutions
    // of the closure solve the formula, and 2-robust solutions of the
    // formula survive into the closure.
    for e in &pool {
        let p2 = clique_reduce::build_phi_d(&e.formula, 2);
        let n = e.formula.n();
        for mask in 0u32..1 << n {
            let a = BitSet::from_indices(n, (0..n).filter(|i| mask >> i & 1 == 1));
            if p2.satisfied_by(&a) {
                assert!(e.formula.satisfied_by(&a), "{} mask {mask:b}", e.name);
            }
            if e.formula.satisfied_by(&a) && clique_reduce::is_d_robust(&e.formula, &a, 2) {
                assert!(p2.satisfied_by(&a), "{} mask {mask:b}", e.name);
            }
        }
    }
    pass(5, "color-coding-pipeline", t, 600.0);
}

#[test]
fn criterion_06_restriction_sweep() {
    let t = Instant::now();
    let impl2 = BoolFun::impl2();
    let nands: Vec<BoolFun> = (2..=4).map(BoolFun::nand).collect();
    for r in 1..=4usize {
        let entries = 1u32 << r;
        for table in 0u64..1 << entries {
            let bits: Vec<bool> = (0..entries).map(|i| table >> i & 1 == 1).collect();
            let f = BoolFun::new("F", r, &bits).unwrap();
            if !f.is_zero_valid() {
                continue;
            }
            let impl_zero = r >= 2 && find_restriction(&f, &impl2, false).unwrap().is_some();
            if r >= 2 && find_restriction(&f, &impl2, true).unwrap().is_some() {
                // A 0-valid function that contains IMPL contains it
                // without the constant 1.
                assert!(impl_zero, "arity {r} table {table:b}");
            }
            if !impl_zero {
                // Difference closure: with no IMPL available, nested
                // satisfying supports subtract.
                for tmask in 0..entries as u64 {
                    if table >> tmask & 1 == 0 {
                        continue;
                    }
                    let mut s = tmask;
                    loop {
                        // Enumerate submasks of tmask.
                        if table >> s & 1 == 1 {
                            let diff = tmask ^ s;
                            assert!(
                                table >> diff & 1 == 1,
                                "arity {r} table {table:b}: supports {tmask:b} and {s:b}"
                            );
                        }
                        if s == 0 {
                            break;
                        }
                        s = (s - 1) & tmask;
                    }
                }
                // NAND_d survives as a 0-restriction.
                for g in nands.iter().filter(|g| g.arity() <= r) {
                    if find_restriction(&f, g, true).unwrap().is_some() {
                        assert!(
                            find_restriction(&f, g, false).unwrap().is_some(),
                            "arity {r} table {table:b} target {}",
                            g.name()
                        );
                    }
                }
            }
        }
    }
    // Snapshot of the adjudicated pair: identifying two NAND3
    // arguments yields NAND2 directly, with no constants at all.
    let map = find_restriction(&BoolFun::nand(3), &BoolFun::nand(2), false)
        .unwrap()
        .expect("NAND3 contains NAND2 as a 0-restriction");
    assert_eq!(map.slots(), &[Slot::GArg(0), Slot::GArg(0), Slot::GArg(1)]);
    pass(6, "restriction-sweep", t, 300.0);
}

/// Closed sets of the unit-split image, enumerated by vertex pattern.
/// The formula's implications force each cycle in or out as a block
/// and pull both endpoint cycles in with any chosen edge node, while
/// edge nodes have no arcs pointing at them; so every solution is,
/// up to interchanging same-count edge nodes, all cycles of a vertex
/// set plus the first few edge nodes inside it. Each candidate is
/// checked against the formula itself.
fn unit_image_feasible(
    g: &Graph,
    unit: &wdi::WdiInstance,
    heads: &[usize],
    psi: &Formula,
    kp: u64,
) -> bool {
    let n = g.n();
    let edges = g.edges();
    for mask in 0u32..1 << n {
        let a = mask.count_ones() as u64;
        let inner: Vec<usize> = (0..edges.len())
            .filter(|&i| {
                let (u, v) = edges[i];
                mask >> u & 1 == 1 && mask >> v & 1 == 1
            })
            .collect();
        if 4 * a > kp || kp > 4 * a + inner.len() as u64 {
            continue;
        }
        let need = (kp - 4 * a) as usize;
        let mut bits = BitSet::new(unit.n());
        for v in 0..n {
            if mask >> v & 1 == 1 {
                for j in 0..4 {
                    bits.insert(heads[v] + j);
                }
            }
        }
        for &ei in inner.iter().take(need) {
            bits.insert(heads[n + ei]);
        }
        assert_eq!(bits.count() as u64, kp);
        assert!(
            psi.satisfied_by(&bits),
            "canonical closed set fails the formula"
        );
        return true;
    }
    false
}

#[test]
fn criterion_07_end_to_end_chain() {
    let t = Instant::now();
    for seed in 0..100u64 {
        let n = 4 + (seed % 7) as usize;
        let pct = (30 + (seed % 5) * 15) as u32;
        let g = gen::seeded_graph(n, pct, seed);
        let edges = g.edges();
        let clique_yes = clique::find_clique_bruteforce(&g, 3).is_some();

        let inst = gen::clique_to_wdi(&g, 3);
        assert_eq!(inst.k(), 15);
        // Closed sets of the weighted image are a vertex subset plus
        // any edge nodes inside it, so feasibility at 15 = 3*4 + 3 is
        // a direct scan over vertex subsets.
        let wdi_yes = (0u32..1 << n).any(|mask| {
            let a = mask.count_ones() as u64;
            let inner = edges
                .iter()
                .filter(|&&(u, v)| mask >> u & 1 == 1 && mask >> v & 1 == 1)
                .count() as u64;
            4 * a <= 15 && 15 <= 4 * a + inner
        });
        let solved = wdi::solve_frobenius(&inst).unwrap();
        if let Some(w) = &solved {
            assert!(wdi::verify_witness(&inst, w), "seed {seed}");
        }

        let (unit, heads) = gen::wdi_to_unit(&inst);
        let psi = gen::digraph_to_sat_impl(&unit);
        let sat_yes = unit_image_feasible(&g, &unit, &heads, &psi, 15);

        assert_eq!(clique_yes, wdi_yes, "seed {seed}");
        assert_eq!(wdi_yes, solved.is_some(), "seed {seed}");
        assert_eq!(wdi_yes, sat_yes, "seed {seed}");
    }
    pass(7, "end-to-end-chain", t, 60.0);
}

#[test]
fn criterion_08_mm_clique_parity() {
    let t = Instant::now();
    for seed in 0..100u64 {
        let n = 8 + (seed % 33) as usize;
        let pct = (20 + (seed % 6) * 12) as u32;
        let g = gen::seeded_graph(n, pct, seed ^ 0xC11);
        let k = (seed % 6 + 1) as usize;
        let (mm, _path) = clique::find_clique_mm_capped(&g, k, clique::DEFAULT_AUX_CAP);
        let bf = clique::find_clique_bruteforce(&g, k);
        assert_eq!(mm.is_some(), bf.is_some(), "seed {seed} n {n} k {k}");
        if let Some(s) = mm {
            assert_eq!(s.len(), k);
            assert!(clique::is_clique(&g, &s), "seed {seed}");
        }
    }
    pass(8, "mm-clique-parity", t, 60.0);
}

#[test]
fn criterion_09_gadget_uniqueness() {
    let t = Instant::now();
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xACCE9);
    let mut seen01 = 0;
    let mut seen0 = 0;
    while seen01 < 20 || seen0 < 20 {
        let r = rng.gen_range(2..=4usize);
        let bits: Vec<bool> = (0..1 << r).map(|_| rng.gen_bool(0.5)).collect();
        let f = BoolFun::new("F", r, &bits).unwrap();
        let kp = rng.gen_range(1..=4usize);
        if seen01 < 20 {
            if let Ok(gadget) = gen::gadget_const01(&f, kp) {
                let n = gadget.n();
                let small: Vec<u32> = (0u32..1 << n)
                    .filter(|m| {
                        m.count_ones() as usize <= kp && {
                            let a = BitSet::from_indices(n, (0..n).filter(|i| m >> i & 1 == 1));
                            gadget.satisfied_by(&a)
                        }
                    })
                    .collect();
                // The only light solution sets y alone.
                assert_eq!(small, vec![1], "table {bits:?} kp {kp}");
                seen01 += 1;
            }
        }
        if seen0 < 20 {
            if let Ok(gadget) = gen::gadget_const0(&f, kp) {
                let n = gadget.n();
                let small: Vec<u32> = (0u32..1 << n)
                    .filter(|m| {
                        m.count_ones() as usize <= kp && {
                            let a = BitSet::from_indices(n, (0..n).filter(|i| m >> i & 1 == 1));
                            gadget.satisfied_by(&a)
                        }
                    })
                    .collect();
                // The only light solution is all-zero.
                assert_eq!(small, vec![0], "table {bits:?} k {kp}");
                seen0 += 1;
            }
        }
    }
    pass(9, "gadget-uniqueness", t, 60.0);
}

#[test]
fn criterion_10_performance_smoke() {
    let t = Instant::now();
    for seed in 0..3 {
        let (inst, _) = gen::seeded_layered(1000, 100, seed);
        assert_eq!(inst.n(), 2000);
        let w = wdi::solve_frobenius(&inst)
            .unwrap()
            .expect("unit layer gcd divides the target");
        assert!(wdi::verify_witness(&inst, &w), "seed {seed}");
    }
    pass(10, "performance-smoke", t, 60.0);
}

#[test]
fn solver_front_door_agrees_on_pools() {
    // Not a numbered criterion: the top-level dispatcher should tell
    // the same story as the pipelines it wraps on a sample of every
    // pool.
    let cfg = solver::SolveConfig::default();
    for e in gen::corpus_nand2_avoiding_sat(0).iter().step_by(20) {
        let ans = solver::solve(&e.formula, e.k, &cfg).unwrap();
        if let Verdict::Yes(w) = &ans.verdict {
            assert!(e.formula.satisfied_by(w));
        }
    }
    for e in gen::corpus_nand3_avoiding(0).iter().step_by(20) {
        let ans = solver::solve(&e.formula, e.k, &cfg).unwrap();
        if let (Verdict::No, Some(_)) = (&ans.verdict, &e.witness) {
            assert!(
                matches!(ans.certainty, solver::Certainty::MonteCarlo),
                "{}: certified NO on a feasible instance",
                e.name
            );
        }
    }
}
