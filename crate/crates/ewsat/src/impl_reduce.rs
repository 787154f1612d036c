//! Randomized reduction from exact-weight satisfiability to closed-set
//! search, for families that avoid NAND_2. Per 0-valid branch, a trial
//! grows an implication graph: while some vertex v has a violating
//! closure assignment, either wire v to a variable that some minimal
//! satisfying extension turns on, or delete v when no extension exists.
//! Closed sets of the finished graph correspond to satisfying
//! assignments, so the weighted closed-set solver finishes the job.
//! YES answers are re-verified and certified; NO answers are one-sided
//! Monte Carlo under the trial budget.

use crate::bits::BitSet;
use crate::boolfun::RegimeTag;
use crate::error::{capacity, usage, Result};
use crate::formula::{Branch, Formula};
use crate::wdi::{self, WdiInstance};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

#[derive(Debug, Clone, Copy)]
pub struct TrialConfig {
    pub budget: u64,
    pub seed: u64,
}

impl TrialConfig {
    pub fn new(budget: u64, seed: u64) -> Result<TrialConfig> {
        if budget == 0 {
            return Err(usage("trial budget must be at least 1".to_string()));
        }
        Ok(TrialConfig { budget, seed })
    }

    pub fn default_for(phi: &Formula, k: usize, seed: u64) -> TrialConfig {
        TrialConfig {
            budget: default_budget(k, phi.family().arity()),
            seed,
        }
    }
}

/// Default per-branch budget: min(10^6, (k * arity)^k), at least 1.
/// Empirically the choice fan is tiny and YES answers are certified, so
/// over-trialing is harmless and under-trialing only costs confidence.
pub fn default_budget(k: usize, arity: usize) -> u64 {
    let base = (k as u128) * (arity as u128);
    let mut acc: u128 = 1;
    for _ in 0..k {
        acc = acc.saturating_mul(base.max(1));
        if acc >= 1_000_000 {
            return 1_000_000;
        }
    }
    acc.clamp(1, 1_000_000) as u64
}

/// The graph a trial builds: vertices are the surviving variables,
/// arcs point from a variable to one of its mandatory companions.
#[derive(Debug, Clone)]
pub struct TrialGraph {
    n: usize,
    vertices: BitSet,
    arcs: Vec<(usize, usize)>,
    randomized: bool,
}

impl TrialGraph {
    pub fn vertices(&self) -> &BitSet {
        &self.vertices
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    /// True when construction took at least one choice among two or
    /// more options; false means every retry would rebuild this graph.
    pub fn randomized(&self) -> bool {
        self.randomized
    }

    /// Closed set of exact total size `target` among the surviving
    /// vertices, via condensation (component size becomes weight) and
    /// the layered-remainder solver.
    pub fn find_closed_set(&self, target: u64) -> Result<Option<BitSet>> {
        let verts: Vec<usize> = self.vertices.ones_vec();
        let mut id = vec![usize::MAX; self.n];
        for (i, &v) in verts.iter().enumerate() {
            id[v] = i;
        }
        let arcs: Vec<(usize, usize)> = self.arcs.iter().map(|&(u, v)| (id[u], id[v])).collect();
        let inst = WdiInstance::new(verts.len(), vec![1; verts.len()], arcs, target)?;
        let sol = wdi::solve_frobenius(&inst)?;
        Ok(sol.map(|s| BitSet::from_indices(self.n, s.iter_ones().map(|i| verts[i]))))
    }

    /// All closed sets, for exhaustive cross-checks. Guarded to 20
    /// surviving vertices.
    pub fn closed_sets(&self) -> Vec<BitSet> {
        let verts: Vec<usize> = self.vertices.ones_vec();
        assert!(verts.len() <= 20, "closed-set enumeration guard");
        let mut id = vec![usize::MAX; self.n];
        for (i, &v) in verts.iter().enumerate() {
            id[v] = i;
        }
        let mut out_mask = vec![0u32; verts.len()];
        for &(u, v) in &self.arcs {
            out_mask[id[u]] |= 1 << id[v];
        }
        let mut out = Vec::new();
        for mask in 0u32..1u32 << verts.len() {
            let closed = (0..verts.len())
                .all(|i| mask >> i & 1 == 0 || out_mask[i] & !mask == 0);
            if closed {
                out.push(BitSet::from_indices(
                    self.n,
                    (0..verts.len()).filter(|&i| mask >> i & 1 == 1).map(|i| verts[i]),
                ));
            }
        }
        out
    }
}

enum ChoiceDriver<'a> {
    Random {
        rng: &'a mut ChaCha8Rng,
        randomized: bool,
    },
    Script {
        script: &'a [usize],
        pos: usize,
        overflow: Option<usize>,
    },
}

impl ChoiceDriver<'_> {
    /// Index into a fan of `n` options, or None when a script ran out.
    fn pick(&mut self, n: usize) -> Option<usize> {
        match self {
            ChoiceDriver::Random { rng, randomized } => {
                if n > 1 {
                    *randomized = true;
                }
                Some(rng.gen_range(0..n))
            }
            ChoiceDriver::Script {
                script,
                pos,
                overflow,
            } => {
                if *pos < script.len() {
                    let i = script[*pos];
                    *pos += 1;
                    Some(i)
                } else {
                    *overflow = Some(n);
                    None
                }
            }
        }
    }

    fn randomized(&self) -> bool {
        match self {
            ChoiceDriver::Random { randomized, .. } => *randomized,
            ChoiceDriver::Script { .. } => false,
        }
    }
}

/// One graph-construction pass over `pool`. Scans vertices in ascending
/// index and restarts the scan after every mutation; finishes when each
/// surviving vertex's closure assignment satisfies phi. Returns None
/// only when a scripted driver runs out of choices.
fn build_inner(
    phi: &Formula,
    pool: &BitSet,
    k: usize,
    driver: &mut ChoiceDriver,
) -> Option<TrialGraph> {
    let n = phi.n();
    let mut alive = pool.clone();
    let mut out_adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut considered = vec![0usize; n];
    'scan: loop {
        for v in 0..n {
            if !alive.get(v) {
                continue;
            }
            let dv = reach(&out_adj, &alive, v);
            if phi.find_violated(&dv).is_none() {
                continue;
            }
            considered[v] += 1;
            assert!(
                considered[v] <= k,
                "vertex {v} processed more than k = {k} times"
            );
            let exts = phi.minimal_extensions(&dv, k);
            let mut settable = BitSet::new(n);
            for e in &exts {
                settable.union_with(e);
            }
            settable.subtract(&dv);
            // Extensions may lean on vertices this trial has already
            // dropped; an arc to a dropped vertex can never repair the
            // violation. Any live repair contains a minimal extension
            // whose added vertices are all live, so filtering keeps
            // the drop rule exact.
            settable.intersect_with(&alive);
            let options = settable.ones_vec();
            if options.is_empty() {
                // No way to repair v: drop it and everything that
                // reaches it.
                let asc = reach_reverse(&out_adj, &alive, v);
                alive.subtract(&asc);
            } else {
                let i = driver.pick(options.len())?;
                let x = options[i];
                debug_assert!(!out_adj[v].contains(&x) && x != v);
                out_adj[v].push(x);
            }
            continue 'scan;
        }
        break;
    }
    let mut arcs = Vec::new();
    for u in alive.iter_ones() {
        for &x in &out_adj[u] {
            debug_assert!(alive.get(x), "arc into a deleted vertex");
            arcs.push((u, x));
        }
    }
    Some(TrialGraph {
        n,
        vertices: alive,
        arcs,
        randomized: driver.randomized(),
    })
}

/// Vertices reachable from v (v included) along live arcs.
fn reach(out_adj: &[Vec<usize>], alive: &BitSet, v: usize) -> BitSet {
    let mut seen = BitSet::new(alive.nbits());
    let mut stack = vec![v];
    seen.insert(v);
    while let Some(u) = stack.pop() {
        for &x in &out_adj[u] {
            if alive.get(x) && !seen.get(x) {
                seen.insert(x);
                stack.push(x);
            }
        }
    }
    seen
}

/// Vertices that reach v (v included) along live arcs.
fn reach_reverse(out_adj: &[Vec<usize>], alive: &BitSet, v: usize) -> BitSet {
    let n = alive.nbits();
    let mut in_adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for u in alive.iter_ones() {
        for &x in &out_adj[u] {
            if alive.get(x) {
                in_adj[x].push(u);
            }
        }
    }
    let mut seen = BitSet::new(n);
    let mut stack = vec![v];
    seen.insert(v);
    while let Some(u) = stack.pop() {
        for &x in &in_adj[u] {
            if !seen.get(x) {
                seen.insert(x);
                stack.push(x);
            }
        }
    }
    seen
}

/// Public single-trial construction over all variables of a 0-valid
/// formula.
pub fn build_graph_trial(phi: &Formula, k: usize, rng: &mut ChaCha8Rng) -> Result<TrialGraph> {
    if phi.find_violated(&BitSet::new(phi.n())).is_some() {
        return Err(usage(
            "graph construction requires a 0-valid formula".to_string(),
        ));
    }
    let pool = BitSet::full(phi.n());
    let mut driver = ChoiceDriver::Random {
        rng,
        randomized: false,
    };
    Ok(build_inner(phi, &pool, k, &mut driver).expect("random driver never runs out"))
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ImplStats {
    pub branches: usize,
    pub trials: u64,
    /// Whether any trial construction actually made a random choice. A
    /// failure with this unset is a proof of infeasibility: the single
    /// deterministic outcome carries the whole success probability.
    pub randomized: bool,
}

fn check_regime(phi: &Formula) -> Result<()> {
    let regime = phi.family().classify()?;
    match regime.tag {
        RegimeTag::Fpt | RegimeTag::Subexponential => Ok(()),
        tag => Err(usage(format!(
            "family '{}' represents NAND2 (regime {tag}); this solver needs a NAND2-avoiding family",
            phi.family_name()
        ))),
    }
}

fn branch_pool(branch: &Branch, n: usize) -> BitSet {
    let mut pool = BitSet::full(n);
    pool.subtract(&branch.forced);
    pool
}

fn verified(phi: &Formula, k: usize, cand: BitSet) -> Option<BitSet> {
    (cand.count() == k && phi.satisfied_by(&cand)).then_some(cand)
}

/// Monte-Carlo solver for NAND_2-avoiding families: branches on the
/// minimal ways to leave the all-zero assignment, then runs up to
/// cfg.budget graph trials per branch. Any hit is mapped back, joined
/// with the branch's forced variables, and re-verified before being
/// returned, so YES is certified; NO may be wrong with probability
/// shrinking in the budget. Trials run in parallel but the result is
/// the first success by trial index, independent of scheduling.
pub fn solve_nand2_avoiding(
    phi: &Formula,
    k: usize,
    cfg: &TrialConfig,
) -> Result<(Option<BitSet>, ImplStats)> {
    check_regime(phi)?;
    let mut stats = ImplStats::default();
    for branch in phi.zero_valid_branches(k) {
        stats.branches += 1;
        if branch.target == 0 {
            if let Some(w) = verified(phi, k, branch.forced.clone()) {
                return Ok((Some(w), stats));
            }
            continue;
        }
        let pool = branch_pool(&branch, phi.n());
        let run_trial = |t: u64| -> (Option<BitSet>, bool) {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ t);
            let mut driver = ChoiceDriver::Random {
                rng: &mut rng,
                randomized: false,
            };
            let g = build_inner(&branch.residual, &pool, branch.target, &mut driver)
                .expect("random driver never runs out");
            let hit = g
                .find_closed_set(branch.target as u64)
                .expect("closed-set search failed on a trial graph")
                .and_then(|cs| {
                    let mut cand = branch.forced.clone();
                    cand.union_with(&cs);
                    verified(phi, k, cand)
                });
            (hit, g.randomized())
        };
        let (hit, randomized) = run_trial(0);
        stats.trials += 1;
        stats.randomized |= randomized;
        if let Some(w) = hit {
            return Ok((Some(w), stats));
        }
        if !randomized {
            continue;
        }
        if cfg.budget > 1 {
            let found = (1..cfg.budget)
                .into_par_iter()
                .map(|t| (t, run_trial(t).0))
                .find_first(|(_, r)| r.is_some());
            if let Some((t, Some(w))) = found {
                stats.trials += t;
                return Ok((Some(w), stats));
            }
            stats.trials += cfg.budget - 1;
        }
    }
    Ok((None, stats))
}

/// Deterministic fallback: replays every choice sequence of the graph
/// construction (guarded to 8 variables). Exact on both YES and NO.
pub fn solve_nand2_avoiding_exhaustive(phi: &Formula, k: usize) -> Result<Option<BitSet>> {
    if phi.n() > 8 {
        return Err(capacity(format!(
            "exhaustive choice replay guarded to 8 variables, got {}",
            phi.n()
        )));
    }
    check_regime(phi)?;
    for branch in phi.zero_valid_branches(k) {
        if branch.target == 0 {
            if let Some(w) = verified(phi, k, branch.forced.clone()) {
                return Ok(Some(w));
            }
            continue;
        }
        let pool = branch_pool(&branch, phi.n());
        let mut script = Vec::new();
        if let Some(w) = explore(phi, k, &branch, &pool, &mut script)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn explore(
    phi: &Formula,
    k: usize,
    branch: &Branch,
    pool: &BitSet,
    script: &mut Vec<usize>,
) -> Result<Option<BitSet>> {
    let (built, fan) = {
        let mut driver = ChoiceDriver::Script {
            script,
            pos: 0,
            overflow: None,
        };
        let g = build_inner(&branch.residual, pool, branch.target, &mut driver);
        let fan = match driver {
            ChoiceDriver::Script { overflow, .. } => overflow,
            _ => unreachable!(),
        };
        (g, fan)
    };
    match built {
        Some(g) => {
            let hit = g.find_closed_set(branch.target as u64)?.and_then(|cs| {
                let mut cand = branch.forced.clone();
                cand.union_with(&cs);
                verified(phi, k, cand)
            });
            Ok(hit)
        }
        None => {
            let fan = fan.expect("overflow recorded when the script runs out");
            for i in 0..fan {
                script.push(i);
                if let Some(w) = explore(phi, k, branch, pool, script)? {
                    return Ok(Some(w));
                }
                script.pop();
            }
            Ok(None)
        }
    }
}
