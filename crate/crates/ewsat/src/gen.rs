//! Instance generators built from the hardness-direction reductions:
//! clique search to weighted closed-set search, weight elimination by
//! cycle splitting, digraphs to implication formulas, hypergraph
//! complements to NAND formulas, and the constant-expression gadgets
//! that let any representing family simulate IMPL or NAND_d clauses.

use crate::bits::BitSet;
use crate::boolfun::{find_restriction, ArgMap, BoolFun, ConstraintFamily, RegimeTag, Slot};
use crate::clique::{for_each_combination, Graph, Hypergraph};
use crate::error::{internal, usage, Result};
use crate::formula::{Constraint, Formula, Term};
use crate::wdi::WdiInstance;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Clique search as closed-set search: each G-vertex becomes a node of
/// weight K = C(k,2)+1, each G-edge a unit node pointing at both
/// endpoints. Since C(k,2) < K, a closed set weighs k*K + C(k,2)
/// exactly when it is a k-clique with all its inner edge nodes.
pub fn clique_to_wdi(g: &Graph, k: usize) -> WdiInstance {
    assert!(k >= 2, "clique target below 2");
    let n = g.n();
    let edges = g.edges();
    let pairs = (k * (k - 1) / 2) as u64;
    let big = pairs + 1;
    let mut weight = vec![big; n];
    weight.extend(std::iter::repeat(1).take(edges.len()));
    let mut arcs = Vec::with_capacity(2 * edges.len());
    for (i, &(u, v)) in edges.iter().enumerate() {
        arcs.push((n + i, u));
        arcs.push((n + i, v));
    }
    let kprime = k as u64 * big + pairs;
    WdiInstance::new(n + edges.len(), weight, arcs, kprime).expect("construction is valid")
}

/// Splits each weight-w vertex into a w-cycle of unit vertices; arcs
/// run head to head. Closed sets correspond weight-for-weight, so the
/// target carries over. Returns the instance and each input vertex's
/// cycle head.
pub fn wdi_to_unit(inst: &WdiInstance) -> (WdiInstance, Vec<usize>) {
    let n = inst.n();
    let mut head = Vec::with_capacity(n);
    let mut total = 0usize;
    for v in 0..n {
        head.push(total);
        total += inst.weight()[v] as usize;
    }
    let mut arcs = Vec::new();
    for v in 0..n {
        let w = inst.weight()[v] as usize;
        if w > 1 {
            for i in 0..w {
                arcs.push((head[v] + i, head[v] + (i + 1) % w));
            }
        }
    }
    for &(u, v) in inst.arcs() {
        arcs.push((head[u], head[v]));
    }
    let out = WdiInstance::new(total, vec![1; total], arcs, inst.k()).expect("construction is valid");
    (out, head)
}

/// One implication per arc: closed sets of the digraph are exactly the
/// satisfying assignments, preserving weight when vertices are unit.
pub fn digraph_to_sat_impl(inst: &WdiInstance) -> Formula {
    let fam = ConstraintFamily::new(vec![BoolFun::impl2()]).expect("fixed family");
    let cons = inst
        .arcs()
        .iter()
        .map(|&(u, v)| Constraint {
            fun: 0,
            args: vec![Term::Var(u), Term::Var(v)],
        })
        .collect();
    Formula::new(inst.n(), fam, "implications", cons).expect("arcs are in range")
}

/// One NAND clause per missing d-set: weight-k satisfying assignments
/// are exactly the k-hypercliques.
pub fn hypergraph_to_sat_nand(h: &Hypergraph) -> Formula {
    let d = h.d();
    let n = h.n();
    let fam = ConstraintFamily::new(vec![BoolFun::nand(d)]).expect("fixed family");
    let items: Vec<usize> = (0..n).collect();
    let mut cons = Vec::new();
    for_each_combination(&items, d, &mut |s| {
        if !h.has_edge(s) {
            cons.push(Constraint {
                fun: 0,
                args: s.iter().map(|&v| Term::Var(v)).collect(),
            });
        }
    });
    Formula::new(n, fam, "hyperclique", cons).expect("vertices are in range")
}

fn eval_mask(f: &BoolFun, mask: u32) -> bool {
    let args: Vec<bool> = (0..f.arity()).map(|i| mask >> i & 1 == 1).collect();
    f.eval(&args).expect("arity matches")
}

/// All argument supports of arity r, smallest first, ties broken by the
/// support read as a sorted index list.
fn support_order(r: usize) -> Vec<u32> {
    let mut masks: Vec<u32> = (0..1u32 << r).collect();
    masks.sort_by_key(|&m| {
        (
            m.count_ones(),
            (0..r).filter(|i| m >> i & 1 == 1).collect::<Vec<_>>(),
        )
    });
    masks
}

fn check_contains_impl_or_nand2(f: &BoolFun) -> Result<()> {
    if f.arity() >= 2
        && (find_restriction(f, &BoolFun::impl2(), true)?.is_some()
            || find_restriction(f, &BoolFun::nand(2), true)?.is_some())
    {
        return Ok(());
    }
    Err(usage(format!(
        "{} contains neither IMPL nor NAND2 as a restriction",
        f.name()
    )))
}

/// Fragment on y, z_1..z_{k'+1} whose only satisfying assignment of
/// weight at most k' sets y = 1 and every z to 0. Needs a 0-invalid f
/// containing IMPL or NAND2 as a restriction.
pub fn gadget_const01(f: &BoolFun, kprime: usize) -> Result<Formula> {
    let fam = ConstraintFamily::new(vec![f.clone()])?;
    let zs: Vec<usize> = (1..=kprime + 1).collect();
    let cons = gadget_const01_cons(f, 0, kprime, 0, &zs)?;
    Formula::new(kprime + 2, fam, "const01-gadget", cons)
}

fn gadget_const01_cons(
    f: &BoolFun,
    fun_idx: usize,
    kprime: usize,
    y: usize,
    zs: &[usize],
) -> Result<Vec<Constraint>> {
    let r = f.arity();
    if f.is_zero_valid() {
        return Err(usage(format!(
            "{} is 0-valid; the 0/1 gadget needs a 0-invalid function",
            f.name()
        )));
    }
    check_contains_impl_or_nand2(f)?;
    debug_assert_eq!(zs.len(), kprime + 1);
    let order = support_order(r);
    // Satisfying support: y goes here, so a zero z-block forces y = 1.
    let s = order
        .iter()
        .copied()
        .find(|&m| eval_mask(f, m))
        .ok_or_else(|| internal("restriction witness exists but no satisfying row"))?;
    let mut cons = Vec::new();
    for &zj in zs {
        cons.push(Constraint {
            fun: fun_idx,
            args: (0..r)
                .map(|i| {
                    if s >> i & 1 == 1 {
                        Term::Var(y)
                    } else {
                        Term::Var(zj)
                    }
                })
                .collect(),
        });
    }
    // Nested pair s2 < t with f true on s2, false on t: with y = 1 and
    // one z known zero, the middle block decides between the two rows,
    // forcing every other z to 0.
    let mut pair = None;
    'outer: for &s2 in &order {
        if !eval_mask(f, s2) {
            continue;
        }
        for &t in &order {
            if s2 & t == s2 && s2 != t && !eval_mask(f, t) {
                pair = Some((s2, t));
                break 'outer;
            }
        }
    }
    let (s2, t) =
        pair.ok_or_else(|| internal("restriction witness exists but no nested value flip"))?;
    for &zj in zs {
        for &zjp in zs {
            if zj == zjp {
                continue;
            }
            cons.push(Constraint {
                fun: fun_idx,
                args: (0..r)
                    .map(|i| {
                        if s2 >> i & 1 == 1 {
                            Term::Var(y)
                        } else if t >> i & 1 == 1 {
                            Term::Var(zj)
                        } else {
                            Term::Var(zjp)
                        }
                    })
                    .collect(),
            });
        }
    }
    Ok(cons)
}

/// Fragment on z_1..z_{k+1} whose only satisfying assignment of weight
/// at most k is all-zero. Needs a 0-valid f containing IMPL or NAND2
/// as a restriction.
pub fn gadget_const0(f: &BoolFun, k: usize) -> Result<Formula> {
    let fam = ConstraintFamily::new(vec![f.clone()])?;
    let zs: Vec<usize> = (0..=k).collect();
    let cons = gadget_const0_cons(f, 0, &zs)?;
    Formula::new(k + 1, fam, "const0-gadget", cons)
}

fn gadget_const0_cons(f: &BoolFun, fun_idx: usize, zs: &[usize]) -> Result<Vec<Constraint>> {
    let r = f.arity();
    if !f.is_zero_valid() {
        return Err(usage(format!(
            "{} is 0-invalid; the 0 gadget needs a 0-valid function",
            f.name()
        )));
    }
    check_contains_impl_or_nand2(f)?;
    let mut cons = Vec::new();
    if !eval_mask(f, (1u32 << r) - 1) {
        // Not 1-valid: f(z_i, ..., z_i) pins each z_i to 0 directly.
        for &z in zs {
            cons.push(Constraint {
                fun: fun_idx,
                args: vec![Term::Var(z); r],
            });
        }
        return Ok(cons);
    }
    // 1-valid: chain the z's together through an unsatisfying support;
    // all equal plus the weight bound means all zero.
    let order = support_order(r);
    let s = order
        .iter()
        .copied()
        .find(|&m| m != 0 && m != (1u32 << r) - 1 && !eval_mask(f, m))
        .ok_or_else(|| internal("nonconstant function with no unsatisfying support"))?;
    for &zi in zs {
        for &zip in zs {
            if zi == zip {
                continue;
            }
            cons.push(Constraint {
                fun: fun_idx,
                args: (0..r)
                    .map(|p| {
                        if s >> p & 1 == 1 {
                            Term::Var(zi)
                        } else {
                            Term::Var(zip)
                        }
                    })
                    .collect(),
            });
        }
    }
    Ok(cons)
}

enum ConstPlan {
    /// 0-invalid witness: full 0/1 gadget, target grows by one.
    ZeroOne,
    /// Witness carries the target as a 0-restriction: 0 gadget only.
    ZeroOnly(ArgMap),
    /// Constant 1 recovered through implications onto a fresh variable,
    /// expanded via a member's IMPL 0-restriction.
    ZeroPlusImpl(usize, ArgMap),
}

/// Rewrites a formula over a single function g (IMPL or a NAND) into a
/// formula over a family representing g, expressing the constants the
/// expansion needs through a gadget on fresh trailing variables.
/// Returns the formula and its weight target, which grows by one
/// whenever an always-one variable is required.
pub fn express_sat_g_in_family(
    phi: &Formula,
    fam: &ConstraintFamily,
    fam_name: &str,
    k: usize,
) -> Result<(Formula, usize)> {
    if phi.family().funs().len() != 1 {
        return Err(usage(
            "expression input must be over a single function".to_string(),
        ));
    }
    let g = &phi.family().funs()[0];
    let is_impl = g.same_table(&BoolFun::impl2());
    let is_nand = g.arity() >= 2 && g.same_table(&BoolFun::nand(g.arity()));
    if !is_impl && !is_nand {
        return Err(usage(format!(
            "target function {} is neither IMPL nor a NAND",
            g.name()
        )));
    }
    let Some((w_idx, map)) = fam.represents(g)? else {
        return Err(usage(format!(
            "family '{fam_name}' does not represent {}",
            g.name()
        )));
    };
    let f = &fam.funs()[w_idx];
    let plan = if !f.is_zero_valid() {
        ConstPlan::ZeroOne
    } else if let Some(zmap) = find_restriction(f, g, false)? {
        ConstPlan::ZeroOnly(zmap)
    } else {
        // The witness needs Const1, so some member must hand us IMPL as
        // a 0-restriction to rebuild the constant.
        let mut found = None;
        for (i, h) in fam.funs().iter().enumerate() {
            if h.arity() < 2 {
                continue;
            }
            if let Some(im) = find_restriction(h, &BoolFun::impl2(), false)? {
                found = Some((i, im));
                break;
            }
        }
        match found {
            Some((i, im)) => ConstPlan::ZeroPlusImpl(i, im),
            None => {
                return Err(internal(format!(
                    "{} is 0-valid and contains {} only with the constant 1, \
                     yet no member yields IMPL as a 0-restriction",
                    f.name(),
                    g.name()
                )))
            }
        }
    };
    let n = phi.n();
    // Gadget variables go after the originals: y first when present,
    // then the z block.
    let (target, y_var, zs) = match &plan {
        ConstPlan::ZeroOne | ConstPlan::ZeroPlusImpl(..) => {
            let kp = k + 1;
            (kp, Some(n), (n + 1..n + kp + 2).collect::<Vec<_>>())
        }
        ConstPlan::ZeroOnly(_) => (k, None, (n..n + k + 1).collect::<Vec<_>>()),
    };
    let z1 = zs[0];
    let n_out = n + zs.len() + usize::from(y_var.is_some());
    let mut cons = match &plan {
        ConstPlan::ZeroOne => {
            gadget_const01_cons(f, w_idx, target, y_var.expect("y present"), &zs)?
        }
        ConstPlan::ZeroOnly(_) | ConstPlan::ZeroPlusImpl(..) => {
            gadget_const0_cons(f, w_idx, &zs)?
        }
    };
    if let ConstPlan::ZeroPlusImpl(i_impl, imap) = &plan {
        let y = y_var.expect("y present");
        for xj in 0..n {
            cons.push(Constraint {
                fun: *i_impl,
                args: imap
                    .slots()
                    .iter()
                    .map(|sl| match sl {
                        Slot::GArg(0) => Term::Var(xj),
                        Slot::GArg(_) => Term::Var(y),
                        Slot::Const0 => Term::Var(z1),
                        Slot::Const1 => unreachable!("0-restriction has no Const1"),
                    })
                    .collect(),
            });
        }
    }
    let expand = match &plan {
        ConstPlan::ZeroOnly(zm) => zm,
        _ => &map,
    };
    for c in phi.constraints() {
        let mut args = Vec::with_capacity(expand.slots().len());
        for sl in expand.slots() {
            let t = match sl {
                Slot::GArg(i) => c.args[*i],
                Slot::Const0 => Term::Const(false),
                Slot::Const1 => Term::Const(true),
            };
            let t = match t {
                Term::Const(false) => Term::Var(z1),
                Term::Const(true) => match y_var {
                    Some(y) => Term::Var(y),
                    None => {
                        return Err(usage(format!(
                            "family '{fam_name}' expresses only the constant 0, \
                             but the input formula uses the constant 1"
                        )))
                    }
                },
                other => other,
            };
            args.push(t);
        }
        cons.push(Constraint { fun: w_idx, args });
    }
    Ok((Formula::new(n_out, fam.clone(), fam_name, cons)?, target))
}

// ---------------------------------------------------------------------------
// Seeded instance pools. The cross-check suites and the shipped corpus
// both draw from these, so the same (base seed, index) pair always
// names the same instance.

/// Undirected graph where each pair is an edge with probability
/// `edge_pct` percent.
pub fn seeded_graph(n: usize, edge_pct: u32, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_range(0..100) < edge_pct {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Weighted DAG: arcs only run from higher to lower vertex id, each
/// with probability `arc_pct` percent; weights are uniform in
/// 1..=max_weight.
pub fn seeded_dag(n: usize, arc_pct: u32, max_weight: u64, k: u64, seed: u64) -> WdiInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weight: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=max_weight)).collect();
    let mut arcs = Vec::new();
    for u in 1..n {
        for v in 0..u {
            if rng.gen_range(0..100) < arc_pct {
                arcs.push((u, v));
            }
        }
    }
    WdiInstance::new(n, weight, arcs, k).expect("construction is valid")
}

/// Small layered instance meeting the four structure side conditions
/// (uniform weight per layer, descending arcs, layers at least k wide,
/// closure weights w with 2w^2 <= k), for k <= 8 and n <= 20. Returns
/// the instance and its layer partition, bottom layer first.
///
/// Inside this parameter box the side conditions pin every weight to 1
/// except single-layer weight-2 instances at k = 8, so the layer gcd
/// always divides k; infeasible instances cannot exist here.
pub fn seeded_frobenius(seed: u64) -> (WdiInstance, Vec<Vec<usize>>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Even a unit weight needs 2*1^2 <= k, so k starts at 2.
    let k: u64 = rng.gen_range(2..=8);
    if k == 8 && rng.gen_bool(0.5) {
        // Two layers: a source's closure weighs 2, and 2*2^2 <= k only
        // holds at k = 8.
        let n1 = rng.gen_range(8..=12usize);
        let n2 = rng.gen_range(8..=(20 - n1));
        let mut arcs = Vec::with_capacity(n2);
        for s in 0..n2 {
            arcs.push((n1 + s, rng.gen_range(0..n1)));
        }
        let inst = WdiInstance::new(n1 + n2, vec![1; n1 + n2], arcs, k).expect("valid");
        let layers = vec![(0..n1).collect(), (n1..n1 + n2).collect()];
        (inst, layers)
    } else {
        let w = if k == 8 && rng.gen_bool(0.5) { 2 } else { 1 };
        let n = rng.gen_range(k as usize..=20);
        let inst = WdiInstance::new(n, vec![w; n], vec![], k).expect("valid");
        (inst, vec![(0..n).collect()])
    }
}

/// Large two-layer instance on the gcd fast path: `half` unit-weight
/// sinks, `half` weight-2 sources with one or two arcs each. Closure
/// weights stay at most 4, so the caller must pass k >= 32.
pub fn seeded_layered(half: usize, k: u64, seed: u64) -> (WdiInstance, Vec<Vec<usize>>) {
    assert!(k >= 32, "closure weight 4 needs 2*4^2 <= k");
    assert!(half as u64 >= k, "layers must be at least k wide");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 2 * half;
    let mut weight = vec![1u64; half];
    weight.extend(std::iter::repeat(2).take(half));
    let mut arcs = Vec::with_capacity(2 * half);
    for s in half..n {
        for _ in 0..rng.gen_range(1..=2usize) {
            arcs.push((s, rng.gen_range(0..half)));
        }
    }
    let inst = WdiInstance::new(n, weight, arcs, k).expect("valid");
    (inst, vec![(0..half).collect(), (half..n).collect()])
}

/// Formula with a planted weight-k witness: every constraint is
/// rejection-sampled until the planted assignment satisfies it, so the
/// instance is feasible at weight exactly k by construction. Returns
/// the formula and the witness.
pub fn seeded_planted_formula(
    fam: &ConstraintFamily,
    name: &str,
    n: usize,
    m: usize,
    k: usize,
    seed: u64,
) -> (Formula, BitSet) {
    assert!(k <= n, "cannot plant {k} ones among {n} variables");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.gen_range(i..n);
        order.swap(i, j);
    }
    let witness = BitSet::from_indices(n, order[..k].iter().copied());
    let mut cons = Vec::with_capacity(m);
    let mut stuck = 0;
    while cons.len() < m {
        let fi = rng.gen_range(0..fam.funs().len());
        let f = &fam.funs()[fi];
        let mut placed = false;
        for _ in 0..500 {
            let args: Vec<Term> = (0..f.arity())
                .map(|_| Term::Var(rng.gen_range(0..n)))
                .collect();
            let bits: Vec<bool> = args
                .iter()
                .map(|t| match t {
                    Term::Var(v) => witness.get(*v),
                    Term::Const(b) => *b,
                })
                .collect();
            if f.eval(&bits).expect("arity matches") {
                cons.push(Constraint { fun: fi, args });
                placed = true;
                break;
            }
        }
        if !placed {
            // This member cannot be satisfied at the planted point for
            // these parameters (e.g. OR with k = 0); try another.
            stuck += 1;
            assert!(stuck < 10_000, "no member of '{name}' is satisfiable at the planted point");
        }
    }
    let phi = Formula::new(n, fam.clone(), name, cons).expect("terms are in range");
    (phi, witness)
}

/// Formula with uniformly random constraints and no feasibility
/// guarantee.
pub fn seeded_formula(fam: &ConstraintFamily, name: &str, n: usize, m: usize, seed: u64) -> Formula {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cons: Vec<Constraint> = (0..m)
        .map(|_| {
            let fi = rng.gen_range(0..fam.funs().len());
            let args = (0..fam.funs()[fi].arity())
                .map(|_| Term::Var(rng.gen_range(0..n)))
                .collect();
            Constraint { fun: fi, args }
        })
        .collect();
    Formula::new(n, fam.clone(), name, cons).expect("terms are in range")
}

/// One pooled instance: the formula, its target weight, and a witness
/// when the instance is feasible (planted or found by enumeration;
/// entries with `witness: None` were verified infeasible).
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub formula: Formula,
    pub k: usize,
    pub witness: Option<BitSet>,
}

fn dhorn() -> BoolFun {
    BoolFun::from_table_str("DHORN", 3, "10111111").expect("valid table")
}

/// Families that avoid NAND2: the bounded-search-tree pipeline's input
/// class.
pub fn nand2_avoiding_families() -> Vec<(&'static str, ConstraintFamily)> {
    let fams = vec![
        ("impl", vec![BoolFun::impl2()]),
        ("eq", vec![BoolFun::eq2()]),
        ("or", vec![BoolFun::or2()]),
        ("dhorn", vec![dhorn()]),
        ("impl-dhorn", vec![BoolFun::impl2(), dhorn()]),
        ("impl-or", vec![BoolFun::impl2(), BoolFun::or2()]),
    ];
    fams.into_iter()
        .map(|(name, funs)| {
            let fam = ConstraintFamily::new(funs).expect("valid family");
            let tag = fam.classify().expect("small family").tag;
            assert!(
                matches!(tag, RegimeTag::Fpt | RegimeTag::Subexponential),
                "family '{name}' represents NAND2"
            );
            (name, fam)
        })
        .collect()
}

/// Families that represent NAND2 but avoid NAND3: the color-coding
/// pipeline's input class.
pub fn nand3_avoiding_families() -> Vec<(&'static str, ConstraintFamily)> {
    let pad = BoolFun::from_table_str("NANDPAD", 3, "11101110").expect("valid table");
    let fams = vec![
        ("nand2", vec![BoolFun::nand(2)]),
        ("nand2-impl", vec![BoolFun::nand(2), BoolFun::impl2()]),
        ("nand2-eq", vec![BoolFun::nand(2), BoolFun::eq2()]),
        ("nand2-or", vec![BoolFun::nand(2), BoolFun::or2()]),
        ("nandpad", vec![pad]),
    ];
    fams.into_iter()
        .map(|(name, funs)| {
            let fam = ConstraintFamily::new(funs).expect("valid family");
            let tag = fam.classify().expect("small family").tag;
            assert!(
                matches!(tag, RegimeTag::Clique),
                "family '{name}' is outside the NAND2-not-NAND3 class"
            );
            (name, fam)
        })
        .collect()
}

/// Lex-first weight-k witness by full enumeration, or None.
fn enumerate_witness(phi: &Formula, k: usize) -> Option<BitSet> {
    let n = phi.n();
    if k > n {
        return None;
    }
    let vars: Vec<usize> = (0..n).collect();
    let mut found = None;
    for_each_combination(&vars, k, &mut |pick| {
        if found.is_none() {
            let a = BitSet::from_indices(n, pick.iter().copied());
            if phi.satisfied_by(&a) {
                found = Some(a);
            }
        }
    });
    found
}

/// Fixed pool of 200 feasible instances for the bounded-search-tree
/// pipeline: NAND2-avoiding families, planted witnesses, n <= 12,
/// k <= 5.
pub fn corpus_nand2_avoiding_sat(base: u64) -> Vec<CorpusEntry> {
    let fams = nand2_avoiding_families();
    let mut rng = ChaCha8Rng::seed_from_u64(base ^ 0x5A70_0001);
    (0..200)
        .map(|i| {
            let (fname, fam) = &fams[rng.gen_range(0..fams.len())];
            let n = rng.gen_range(4..=12usize);
            let k = rng.gen_range(1..=5.min(n - 1));
            let m = rng.gen_range(n / 2..=2 * n);
            let (formula, w) = seeded_planted_formula(fam, fname, n, m, k, rng.gen());
            CorpusEntry {
                name: format!("sat-{i:03}-{fname}"),
                formula,
                k,
                witness: Some(w),
            }
        })
        .collect()
}

/// Companion pool of 60 infeasible instances (k <= 4), each verified
/// infeasible by enumeration during generation.
pub fn corpus_nand2_avoiding_unsat(base: u64) -> Vec<CorpusEntry> {
    let fams = nand2_avoiding_families();
    let mut rng = ChaCha8Rng::seed_from_u64(base ^ 0x5A70_0002);
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < 60 {
        attempts += 1;
        assert!(attempts < 100_000, "unsat pool generation stalled");
        let (fname, fam) = &fams[rng.gen_range(0..fams.len())];
        let n = rng.gen_range(4..=12usize);
        let k = rng.gen_range(1..=4.min(n - 1));
        let m = rng.gen_range(2 * n..=3 * n);
        let formula = seeded_formula(fam, fname, n, m, rng.gen());
        if enumerate_witness(&formula, k).is_none() {
            out.push(CorpusEntry {
                name: format!("uns-{:03}-{fname}", out.len()),
                formula,
                k,
                witness: None,
            });
        }
    }
    out
}

/// Pool of 200 instances over NAND3-avoiding families for the
/// color-coding pipeline (n <= 10, k <= 4), half planted feasible,
/// the rest labeled by enumeration.
pub fn corpus_nand3_avoiding(base: u64) -> Vec<CorpusEntry> {
    let fams = nand3_avoiding_families();
    let mut rng = ChaCha8Rng::seed_from_u64(base ^ 0x5A70_0003);
    (0..200)
        .map(|i| {
            let (fname, fam) = &fams[rng.gen_range(0..fams.len())];
            let n = rng.gen_range(4..=10usize);
            let m = rng.gen_range(n / 2..=2 * n);
            let (formula, k, witness) = if rng.gen_bool(0.5) {
                let k = rng.gen_range(1..=4.min(n - 1));
                let (phi, w) = seeded_planted_formula(fam, fname, n, m, k, rng.gen());
                (phi, k, Some(w))
            } else {
                let k = rng.gen_range(0..=4.min(n));
                let phi = seeded_formula(fam, fname, n, m, rng.gen());
                let w = enumerate_witness(&phi, k);
                (phi, k, w)
            };
            CorpusEntry {
                name: format!("nnd-{i:03}-{fname}"),
                formula,
                k,
                witness,
            }
        })
        .collect()
}
