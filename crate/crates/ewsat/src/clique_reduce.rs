//! Exact-weight satisfiability for families avoiding NAND_{d+1}, by
//! reduction to d-uniform hyperclique. Solutions that dominate a small
//! violating assignment are found by recursion (force the violator's
//! support plus one repair variable); the remaining d-robust solutions
//! survive into the NAND-closure formula and are found by color coding:
//! random colorings split variables into k parts, candidate part-\
//! transversal r-sets become hyperedges unless a clause inside the
//! touched parts rejects them, and a k-hyperclique maps back to a
//! weight-k assignment that is re-verified before being returned.

use crate::bits::BitSet;
use crate::boolfun::{BoolFun, ConstraintFamily, RegimeTag};
use crate::clique::{find_hyperclique, for_each_combination, Hypergraph};
use crate::error::{capacity, usage, Result};
use crate::formula::{Constraint, Formula, Term};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{HashMap, HashSet};

/// Weight-(<= d) assignments that violate some clause, keyed by support
/// and mapped to the first clause they violate. Only supports inside a
/// single clause's variables are stored: any violator restricts to one
/// within the violated clause's variables, so these suffice for
/// dominance checks.
#[derive(Debug, Clone)]
pub struct ViolationIndex {
    entries: Vec<(BitSet, usize)>,
}

impl ViolationIndex {
    pub fn build(phi: &Formula, d: usize) -> ViolationIndex {
        let n = phi.n();
        let mut seen: HashSet<BitSet> = HashSet::new();
        let mut supports: Vec<BitSet> = Vec::new();
        for c in phi.constraints() {
            let vars = c.vars();
            for size in 0..=d.min(vars.len()) {
                for_each_combination(&vars, size, &mut |s| {
                    let b = BitSet::from_indices(n, s.iter().copied());
                    if seen.insert(b.clone()) {
                        supports.push(b);
                    }
                });
            }
        }
        let mut entries: Vec<(BitSet, usize)> = supports
            .into_iter()
            .filter_map(|s| phi.find_violated(&s).map(|cid| (s, cid)))
            .collect();
        entries.sort_by_key(|(s, _)| (s.count(), s.ones_vec()));
        ViolationIndex { entries }
    }

    pub fn entries(&self) -> &[(BitSet, usize)] {
        &self.entries
    }

    /// True when no indexed violator sits inside `a`.
    pub fn none_within(&self, a: &BitSet) -> bool {
        self.entries.iter().all(|(s, _)| !s.is_subset_of(a))
    }
}

/// A satisfying assignment is d-robust when no sub-assignment of weight
/// at most d violates the formula.
pub fn is_d_robust(phi: &Formula, a: &BitSet, d: usize) -> bool {
    debug_assert!(phi.satisfied_by(a), "robustness is defined on solutions");
    ViolationIndex::build(phi, d).none_within(a)
}

/// The NAND closure of phi at order d: one NAND clause per indexed
/// violating assignment. A weight-0 violator makes the whole formula
/// unsatisfiable (constant-false clause); weight-1 violators become
/// unary NANDs (forced zeros). For NAND_{d+1}-avoiding families its
/// solutions are solutions of phi, and every d-robust solution of phi
/// survives into it.
pub fn build_phi_d(phi: &Formula, d: usize) -> Formula {
    let mut funs: Vec<BoolFun> = (1..=d).map(BoolFun::nand).collect();
    funs.push(BoolFun::from_table_str("FALSE", 1, "00").expect("fixed table"));
    let fam = ConstraintFamily::new(funs).expect("fixed family");
    let idx = ViolationIndex::build(phi, d);
    let cons = idx
        .entries()
        .iter()
        .map(|(s, _)| {
            let w = s.count();
            if w == 0 {
                Constraint {
                    fun: d,
                    args: vec![Term::Const(false)],
                }
            } else {
                Constraint {
                    fun: w - 1,
                    args: s.iter_ones().map(Term::Var).collect(),
                }
            }
        })
        .collect();
    Formula::new(phi.n(), fam, "nand-closure", cons).expect("clauses fit the family")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ColorMode {
    /// Seeded independent colorings; NO answers are one-sided.
    Random { trials: u64, seed: u64 },
    /// Every coloring in k^n, exact but guarded to 8 variables.
    Exhaustive,
}

/// Colorings needed to hit a colorful solution with failure probability
/// at most delta: a fixed weight-k solution is colorful with
/// probability k!/k^k >= e^-k, so ceil(e^k * ln(1/delta)) suffice.
pub fn default_color_trials(k: usize, delta: f64) -> u64 {
    if k == 0 {
        return 1;
    }
    let t = (k as f64).exp() * (1.0 / delta).ln();
    t.ceil().min(1e18) as u64
}

const COLORING_CAP: u64 = 10_000_000;

/// Weight-k satisfiability via color coding. The formula's clauses are
/// first normalized: constants folded, constant-true clauses dropped,
/// constant-false clauses answer NO, and negated-variable clauses force
/// their variable out of the part system (with substitution to
/// fixpoint). Targets below the family arity fall back to direct
/// enumeration, since cross-part r-sets need k >= r.
pub fn colorcode_solve(psi: &Formula, k: usize, mode: &ColorMode) -> Result<Option<BitSet>> {
    let n = psi.n();
    let r = psi.family().arity();
    // Normalize clauses against a growing forced-zero set.
    let mut forced = BitSet::new(n);
    let mut pending: Vec<Constraint> = psi.constraints().to_vec();
    let not_x = BoolFun::nand(1);
    loop {
        let mut next = Vec::new();
        let mut grew = false;
        for c in pending {
            let c2 = Constraint {
                fun: c.fun,
                args: c
                    .args
                    .iter()
                    .map(|t| match t {
                        Term::Var(v) if forced.get(*v) => Term::Const(false),
                        other => *other,
                    })
                    .collect(),
            };
            let vars = c2.vars();
            let eff = psi.effective_function(&c2);
            let table = eff.table_string();
            if table.bytes().all(|b| b == b'0') {
                return Ok(None);
            }
            if table.bytes().all(|b| b == b'1') {
                continue;
            }
            if vars.len() == 1 && eff.same_table(&not_x) {
                forced.insert(vars[0]);
                grew = true;
                continue;
            }
            next.push(c2);
        }
        pending = next;
        if !grew {
            break;
        }
    }
    let clauses: Vec<(Vec<usize>, BoolFun)> = pending
        .iter()
        .map(|c| (c.vars(), psi.effective_function(c)))
        .collect();
    let eligible: Vec<usize> = (0..n).filter(|&v| !forced.get(v)).collect();
    let check = |a: &BitSet| a.count() == k && psi.satisfied_by(a);
    if k < r || k == 0 {
        let mut hit = None;
        for_each_combination(&eligible, k, &mut |s| {
            if hit.is_none() {
                let a = BitSet::from_indices(n, s.iter().copied());
                if check(&a) {
                    hit = Some(a);
                }
            }
        });
        return Ok(hit);
    }
    if k > eligible.len() {
        return Ok(None);
    }
    let run_coloring = |color: &[usize]| -> Option<BitSet> {
        // Index surviving clauses by the parts their variables touch.
        let mut by_parts: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        for (ci, (vars, _)) in clauses.iter().enumerate() {
            let mut ps: Vec<usize> = vars.iter().map(|&v| color[v]).collect();
            ps.sort_unstable();
            ps.dedup();
            by_parts.entry(ps).or_default().push(ci);
        }
        let mut hg = Hypergraph::new(r, n);
        for_each_combination(&eligible, r, &mut |t| {
            let mut parts: Vec<usize> = t.iter().map(|&v| color[v]).collect();
            parts.sort_unstable();
            parts.dedup();
            if parts.len() != r {
                return;
            }
            // Test every clause whose touched parts sit inside this
            // set's parts, under the assignment that turns on exactly
            // this r-set within those parts.
            for mask in 0u32..1 << r {
                let q: Vec<usize> = (0..r).filter(|&i| mask >> i & 1 == 1).map(|i| parts[i]).collect();
                if let Some(ids) = by_parts.get(&q) {
                    for &ci in ids {
                        let (vars, eff) = &clauses[ci];
                        let bits: Vec<bool> = vars.iter().map(|v| t.contains(v)).collect();
                        if !eff.eval(&bits).expect("arity matches") {
                            return;
                        }
                    }
                }
            }
            hg.add_edge(t.to_vec());
        });
        find_hyperclique(&hg, k).and_then(|s| {
            let a = BitSet::from_indices(n, s.iter().copied());
            check(&a).then_some(a)
        })
    };
    match mode {
        ColorMode::Random { trials, seed } => {
            if *trials > COLORING_CAP {
                return Err(capacity(format!(
                    "{trials} colorings exceed the cap of {COLORING_CAP}"
                )));
            }
            for t in 0..*trials {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ t);
                let color: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
                if let Some(a) = run_coloring(&color) {
                    return Ok(Some(a));
                }
            }
            Ok(None)
        }
        ColorMode::Exhaustive => {
            if n > 8 {
                return Err(capacity(format!(
                    "exhaustive coloring guarded to 8 variables, got {n}"
                )));
            }
            let total = (k as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
            if total > COLORING_CAP {
                return Err(capacity(format!(
                    "{total} colorings exceed the cap of {COLORING_CAP}"
                )));
            }
            let mut color = vec![0usize; n];
            loop {
                if let Some(a) = run_coloring(&color) {
                    return Ok(Some(a));
                }
                // Increment the base-k counter.
                let mut i = 0;
                while i < n {
                    color[i] += 1;
                    if color[i] < k {
                        break;
                    }
                    color[i] = 0;
                    i += 1;
                }
                if i == n {
                    return Ok(None);
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ColorConfig {
    pub seed: u64,
    /// Per-call failure probability for the random colorings.
    pub delta: f64,
    pub exhaustive: bool,
}

impl Default for ColorConfig {
    fn default() -> Self {
        ColorConfig {
            seed: 0,
            delta: 0.01,
            exhaustive: false,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CliqueStats {
    pub nodes: u64,
}

/// Exact-weight solver for NAND_{d+1}-avoiding families. For d = 2 the
/// avoidance is verified by classification; for d >= 3 the caller
/// asserts it. Recurses on dominated violators first, then color-codes
/// the NAND closure; every YES is re-verified against the original
/// formula. NO answers inherit the color-coding one-sidedness unless
/// cfg.exhaustive is set.
pub fn solve_nand_d_avoiding(
    phi: &Formula,
    k: usize,
    d: usize,
    cfg: &ColorConfig,
) -> Result<(Option<BitSet>, CliqueStats)> {
    if d == 0 {
        return Err(usage("closure order d must be at least 1".to_string()));
    }
    if !(cfg.delta > 0.0 && cfg.delta < 1.0) {
        return Err(usage(format!("delta {} outside (0, 1)", cfg.delta)));
    }
    if d == 2 {
        let regime = phi.family().classify()?;
        if regime.tag == RegimeTag::BruteForce {
            return Err(usage(format!(
                "family '{}' represents NAND3; the d = 2 pipeline needs NAND3 avoided",
                phi.family_name()
            )));
        }
    }
    let mut stats = CliqueStats::default();
    let mut memo: HashSet<BitSet> = HashSet::new();
    let forced = BitSet::new(phi.n());
    let hit = rec(phi, phi, &forced, k, k, d, cfg, &mut stats, &mut memo)?;
    Ok((hit, stats))
}

#[allow(clippy::too_many_arguments)]
fn rec(
    phi0: &Formula,
    cur: &Formula,
    forced: &BitSet,
    target: usize,
    k0: usize,
    d: usize,
    cfg: &ColorConfig,
    stats: &mut CliqueStats,
    memo: &mut HashSet<BitSet>,
) -> Result<Option<BitSet>> {
    stats.nodes += 1;
    debug_assert_eq!(forced.count() + target, k0);
    let idx = ViolationIndex::build(cur, d);
    for (support, cid) in idx.entries() {
        let w = support.count();
        if target < w + 1 {
            continue;
        }
        let mut cvars = cur.constraints()[*cid].vars();
        cvars.sort_unstable();
        for &x in &cvars {
            if support.get(x) {
                continue;
            }
            let mut add = support.clone();
            add.insert(x);
            let mut nf = forced.clone();
            nf.union_with(&add);
            if !memo.insert(nf.clone()) {
                continue;
            }
            let sub = target - (w + 1);
            if sub == 0 {
                if nf.count() == k0 && phi0.satisfied_by(&nf) {
                    return Ok(Some(nf));
                }
                continue;
            }
            let next = cur.restrict_vars_to_one(&add);
            if let Some(a) = rec(phi0, &next, &nf, sub, k0, d, cfg, stats, memo)? {
                return Ok(Some(a));
            }
        }
    }
    // d-robust remainder: color-code the NAND closure, with the forced
    // variables pinned to zero through unary clauses.
    let mut psi = build_phi_d(cur, d);
    if !forced.is_empty() {
        let mut cons = psi.constraints().to_vec();
        for f in forced.iter_ones() {
            cons.push(Constraint {
                fun: 0,
                args: vec![Term::Var(f)],
            });
        }
        psi = Formula::new(psi.n(), psi.family().clone(), "nand-closure", cons)
            .expect("unary clauses fit the family");
    }
    let mode = if cfg.exhaustive {
        ColorMode::Exhaustive
    } else {
        ColorMode::Random {
            trials: default_color_trials(target, cfg.delta),
            seed: cfg.seed,
        }
    };
    if let Some(s) = colorcode_solve(&psi, target, &mode)? {
        let mut cand = forced.clone();
        cand.union_with(&s);
        if cand.count() == k0 && phi0.satisfied_by(&cand) {
            return Ok(Some(cand));
        }
        debug_assert!(false, "closure solution failed verification");
    }
    Ok(None)
}
