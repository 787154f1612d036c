//! Weighted DAG Implications: find a closed vertex set of exact total
//! weight k in a directed graph, where closed means every arc (u, v)
//! with u in the set also has v in the set.
//!
//! Three solvers live here. `solve_frobenius` peels high-weight-closure
//! vertices recursively until the remainder is layered with uniform
//! per-layer weights, where feasibility reduces to a gcd test with a
//! constructive witness. `solve_sources` guesses the small half of a
//! solution (its sources or its non-sources) and finishes by subset-sum.
//! `solve_bruteforce` enumerates subsets as the oracle.

use crate::bits::BitSet;
use crate::error::{capacity, internal, parse_err, usage, Result};
use crate::boolfun::strip_comment;
use num_integer::Integer;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WdiInstance {
    n: usize,
    weight: Vec<u64>,
    arcs: Vec<(usize, usize)>,
    k: u64,
}

impl WdiInstance {
    pub fn new(n: usize, weight: Vec<u64>, arcs: Vec<(usize, usize)>, k: u64) -> Result<Self> {
        if weight.len() != n {
            return Err(usage(format!("{} weights for {n} vertices", weight.len())));
        }
        if let Some(v) = weight.iter().position(|&w| w == 0) {
            return Err(usage(format!("vertex {} has weight 0", v + 1)));
        }
        let mut seen = std::collections::HashSet::new();
        let mut dedup = Vec::new();
        for &(u, v) in &arcs {
            if u >= n || v >= n {
                return Err(usage(format!("arc ({},{}) outside 1..={n}", u + 1, v + 1)));
            }
            if seen.insert((u, v)) {
                dedup.push((u, v));
            }
        }
        Ok(WdiInstance {
            n,
            weight,
            arcs: dedup,
            k,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn weight(&self) -> &[u64] {
        &self.weight
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn with_k(&self, k: u64) -> WdiInstance {
        WdiInstance { k, ..self.clone() }
    }

    pub fn total_weight(&self) -> u64 {
        self.weight.iter().sum()
    }

    fn out_adj(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.arcs {
            adj[u].push(v);
        }
        adj
    }

    fn in_adj(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.arcs {
            adj[v].push(u);
        }
        adj
    }

    /// True when the arc relation is acyclic (self-loops count as cycles).
    pub fn is_acyclic(&self) -> bool {
        if self.arcs.iter().any(|&(u, v)| u == v) {
            return false;
        }
        let (comp_of, ncomps) = tarjan(self.n, &self.out_adj());
        ncomps == self.n && comp_of.len() == self.n
    }

    /// Contracts strongly connected components. Returns the condensed
    /// instance (weights summed per component, arcs deduplicated, no
    /// self-loops) and the vertex-to-component map. Closed sets of the
    /// condensation are in bijection with closed sets of the original.
    pub fn condense(&self) -> (WdiInstance, Vec<usize>) {
        let (comp_of, ncomps) = tarjan(self.n, &self.out_adj());
        let mut weight = vec![0u64; ncomps];
        for v in 0..self.n {
            weight[comp_of[v]] += self.weight[v];
        }
        let mut arcs: Vec<(usize, usize)> = self
            .arcs
            .iter()
            .map(|&(u, v)| (comp_of[u], comp_of[v]))
            .filter(|&(cu, cv)| cu != cv)
            .collect();
        arcs.sort_unstable();
        arcs.dedup();
        let cond = WdiInstance {
            n: ncomps,
            weight,
            arcs,
            k: self.k,
        };
        (cond, comp_of)
    }

    /// Parses the wdi file format: `p wdi <n> <m> <k>`, optional
    /// `w <v> <weight>` lines (weight defaults to 1), and m arc lines
    /// `a <u> <v>`, all 1-based.
    pub fn parse(text: &str) -> Result<WdiInstance> {
        let mut header: Option<(usize, usize, u64)> = None;
        let mut weights: Vec<Option<u64>> = Vec::new();
        let mut arcs = Vec::new();
        let mut head_line = 1usize;
        for (ln, raw) in text.lines().enumerate() {
            let line = ln + 1;
            let body = strip_comment(raw);
            if body.is_empty() {
                continue;
            }
            let toks: Vec<&str> = body.split_whitespace().collect();
            match toks[0] {
                "p" => {
                    if header.is_some() {
                        return Err(parse_err(line, "duplicate header"));
                    }
                    if toks.len() != 5 || toks[1] != "wdi" {
                        return Err(parse_err(line, "expected 'p wdi <n> <m> <k>'"));
                    }
                    let n: usize = toks[2]
                        .parse()
                        .map_err(|_| parse_err(line, format!("bad number '{}'", toks[2])))?;
                    let m: usize = toks[3]
                        .parse()
                        .map_err(|_| parse_err(line, format!("bad number '{}'", toks[3])))?;
                    let k: u64 = toks[4]
                        .parse()
                        .map_err(|_| parse_err(line, format!("bad number '{}'", toks[4])))?;
                    header = Some((n, m, k));
                    weights = vec![None; n];
                    head_line = line;
                }
                "w" => {
                    let (n, _, _) =
                        header.ok_or_else(|| parse_err(line, "weight before header"))?;
                    if toks.len() != 3 {
                        return Err(parse_err(line, "expected 'w <v> <weight>'"));
                    }
                    let v = parse_vertex(toks[1], n, line)?;
                    let w: u64 = toks[2]
                        .parse()
                        .map_err(|_| parse_err(line, format!("bad weight '{}'", toks[2])))?;
                    if w == 0 {
                        return Err(parse_err(line, "weights must be positive"));
                    }
                    if weights[v].is_some() {
                        return Err(parse_err(line, format!("duplicate weight for vertex {}", v + 1)));
                    }
                    weights[v] = Some(w);
                }
                "a" => {
                    let (n, _, _) = header.ok_or_else(|| parse_err(line, "arc before header"))?;
                    if toks.len() != 3 {
                        return Err(parse_err(line, "expected 'a <u> <v>'"));
                    }
                    let u = parse_vertex(toks[1], n, line)?;
                    let v = parse_vertex(toks[2], n, line)?;
                    arcs.push((u, v));
                }
                other => return Err(parse_err(line, format!("unexpected token '{other}'"))),
            }
        }
        let (n, m, k) = header.ok_or_else(|| parse_err(1, "missing 'p wdi' header"))?;
        if arcs.len() != m {
            return Err(parse_err(
                head_line,
                format!("header declares {m} arcs, found {}", arcs.len()),
            ));
        }
        let weight = weights.into_iter().map(|w| w.unwrap_or(1)).collect();
        WdiInstance::new(n, weight, arcs, k)
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("p wdi {} {} {}\n", self.n, self.arcs.len(), self.k);
        for v in 0..self.n {
            out.push_str(&format!("w {} {}\n", v + 1, self.weight[v]));
        }
        for &(u, v) in &self.arcs {
            out.push_str(&format!("a {} {}\n", u + 1, v + 1));
        }
        out
    }
}

fn parse_vertex(tok: &str, n: usize, line: usize) -> Result<usize> {
    let v: usize = tok
        .parse()
        .map_err(|_| parse_err(line, format!("bad vertex '{tok}'")))?;
    if v == 0 || v > n {
        return Err(parse_err(line, format!("vertex {v} outside 1..={n}")));
    }
    Ok(v - 1)
}

/// Recursive Tarjan SCC. Returns (component id per vertex, component
/// count). Components are numbered in completion order, which on a DAG
/// is a reverse topological order.
fn tarjan(n: usize, adj: &[Vec<usize>]) -> (Vec<usize>, usize) {
    struct State<'a> {
        adj: &'a [Vec<usize>],
        index: usize,
        idx: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        comp_of: Vec<usize>,
        ncomps: usize,
    }
    fn strongconnect(s: &mut State, v: usize) {
        s.idx[v] = Some(s.index);
        s.low[v] = s.index;
        s.index += 1;
        s.stack.push(v);
        s.on_stack[v] = true;
        for &w in &s.adj[v] {
            if s.idx[w].is_none() {
                strongconnect(s, w);
                s.low[v] = s.low[v].min(s.low[w]);
            } else if s.on_stack[w] {
                s.low[v] = s.low[v].min(s.idx[w].expect("visited"));
            }
        }
        if s.low[v] == s.idx[v].expect("set above") {
            // Root of an SCC: pop the component.
            loop {
                let w = s.stack.pop().expect("stack underflow");
                s.on_stack[w] = false;
                s.comp_of[w] = s.ncomps;
                if w == v {
                    break;
                }
            }
            s.ncomps += 1;
        }
    }
    let mut s = State {
        adj,
        index: 0,
        idx: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        comp_of: vec![0; n],
        ncomps: 0,
    };
    for v in 0..n {
        if s.idx[v].is_none() {
            strongconnect(&mut s, v);
        }
    }
    (s.comp_of, s.ncomps)
}

/// Descendant closures (including the vertex itself) and closure weights
/// for the vertices of `alive`, which must induce an acyclic subgraph.
fn descendants(inst: &WdiInstance, alive: &BitSet) -> (Vec<BitSet>, Vec<u64>) {
    let n = inst.n;
    let mut out_deg = vec![0usize; n];
    let mut in_adj = vec![Vec::new(); n];
    for &(u, v) in &inst.arcs {
        if alive.get(u) && alive.get(v) {
            out_deg[u] += 1;
            in_adj[v].push(u);
        }
    }
    let out_adj = inst.out_adj();
    let mut desc = vec![BitSet::new(n); n];
    let mut wd = vec![0u64; n];
    let mut queue: Vec<usize> = alive.iter_ones().filter(|&v| out_deg[v] == 0).collect();
    let mut processed = 0usize;
    while let Some(v) = queue.pop() {
        processed += 1;
        let mut d = BitSet::new(n);
        d.insert(v);
        for &u in &out_adj[v] {
            if alive.get(u) {
                let du = std::mem::take(&mut desc[u]);
                d.union_with(&du);
                desc[u] = du;
            }
        }
        wd[v] = d.iter_ones().map(|x| inst.weight[x]).sum();
        desc[v] = d;
        for &u in &in_adj[v] {
            out_deg[u] -= 1;
            if out_deg[u] == 0 {
                queue.push(u);
            }
        }
    }
    debug_assert_eq!(processed, alive.count(), "alive subgraph must be acyclic");
    (desc, wd)
}

/// Layer index per the bottom-up rule: vertices with no live out-arcs
/// get layer 1, and otherwise 1 plus the max layer of the out-neighbors.
fn layer_indices(inst: &WdiInstance, alive: &BitSet) -> Vec<usize> {
    let n = inst.n;
    let mut out_deg = vec![0usize; n];
    let mut in_adj = vec![Vec::new(); n];
    for &(u, v) in &inst.arcs {
        if alive.get(u) && alive.get(v) {
            out_deg[u] += 1;
            in_adj[v].push(u);
        }
    }
    let out_adj = inst.out_adj();
    let mut layer = vec![0usize; n];
    let mut queue: Vec<usize> = alive.iter_ones().filter(|&v| out_deg[v] == 0).collect();
    while let Some(v) = queue.pop() {
        let mut l = 1usize;
        for &u in &out_adj[v] {
            if alive.get(u) {
                l = l.max(layer[u] + 1);
            }
        }
        layer[v] = l;
        for &u in &in_adj[v] {
            out_deg[u] -= 1;
            if out_deg[u] == 0 {
                queue.push(u);
            }
        }
    }
    layer
}

pub fn verify_witness(inst: &WdiInstance, s: &BitSet) -> bool {
    if s.nbits() != inst.n {
        return false;
    }
    for &(u, v) in &inst.arcs {
        if s.get(u) && !s.get(v) {
            return false;
        }
    }
    s.iter_ones().map(|v| inst.weight[v]).sum::<u64>() == inst.k
}

/// Feasibility of a layered uniform-weight instance: the layer-weight
/// gcd must divide k. With no layers only k = 0 is feasible.
pub fn frobenius_feasible(layer_weights: &[u64], k: u64) -> bool {
    if layer_weights.is_empty() {
        return k == 0;
    }
    let g = layer_weights.iter().fold(0u64, |acc, &w| acc.gcd(&w));
    k % g == 0
}

/// A layered view of an acyclic instance satisfying the four structure
/// properties: uniform weight per layer, arcs strictly descending in
/// layer index, every layer of size >= k, and every closure weight w
/// with 2w^2 <= k.
#[derive(Debug, Clone)]
pub struct FrobeniusView {
    inst: WdiInstance,
    layers: Vec<Vec<usize>>,
    layer_weights: Vec<u64>,
    desc: Vec<BitSet>,
}

impl FrobeniusView {
    pub fn new(inst: &WdiInstance, layers: Vec<Vec<usize>>) -> Result<Self> {
        let n = inst.n;
        let k = inst.k;
        let mut seen = BitSet::new(n);
        let mut layer_of = vec![usize::MAX; n];
        let mut layer_weights = Vec::with_capacity(layers.len());
        for (li, members) in layers.iter().enumerate() {
            if members.is_empty() {
                return Err(usage(format!("layer {} is empty", li + 1)));
            }
            let w0 = inst.weight[members[0]];
            for &v in members {
                if v >= n {
                    return Err(usage(format!("layer vertex {} outside range", v + 1)));
                }
                if seen.get(v) {
                    return Err(usage(format!("vertex {} listed twice", v + 1)));
                }
                seen.insert(v);
                layer_of[v] = li;
                if inst.weight[v] != w0 {
                    return Err(usage(format!("layer {} mixes weights", li + 1)));
                }
            }
            if (members.len() as u64) < k {
                return Err(usage(format!(
                    "layer {} has {} vertices, need at least k = {k}",
                    li + 1,
                    members.len()
                )));
            }
            layer_weights.push(w0);
        }
        if seen.count() != n {
            return Err(usage("layers do not cover every vertex".to_string()));
        }
        for &(u, v) in &inst.arcs {
            if layer_of[u] <= layer_of[v] {
                return Err(usage(format!(
                    "arc ({},{}) does not descend in layer index",
                    u + 1,
                    v + 1
                )));
            }
        }
        // Arcs strictly descend, so the instance is acyclic.
        let alive = BitSet::full(n);
        let (desc, wd) = descendants(inst, &alive);
        for v in 0..n {
            if 2u128 * (wd[v] as u128) * (wd[v] as u128) > k as u128 {
                return Err(usage(format!(
                    "closure weight {} at vertex {} too large for k = {k}",
                    wd[v],
                    v + 1
                )));
            }
        }
        Ok(FrobeniusView {
            inst: inst.clone(),
            layers,
            layer_weights,
            desc,
        })
    }

    pub fn layer_weights(&self) -> &[u64] {
        &self.layer_weights
    }

    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    pub fn instance(&self) -> &WdiInstance {
        &self.inst
    }

    pub fn feasible(&self) -> bool {
        frobenius_feasible(&self.layer_weights, self.inst.k)
    }
}

/// Constructive witness for a feasible layered view: peels the top
/// layer per the gcd recursion, choosing the smallest valid count b of
/// top-layer vertices and dividing weights through. Callers must have
/// checked feasibility; violations surface as internal errors.
pub fn frobenius_witness(view: &FrobeniusView) -> Result<BitSet> {
    let k = view.inst.k;
    if view.layers.is_empty() {
        if k == 0 {
            return Ok(BitSet::new(view.inst.n));
        }
        return Err(internal("witness requested for an empty infeasible view"));
    }
    if !view.feasible() {
        return Err(internal("witness requested for an infeasible view"));
    }
    let mut out = BitSet::new(view.inst.n);
    let mut removed = BitSet::new(view.inst.n);
    witness_rec(view, view.layers.len(), &mut removed, 1, k, &mut out)?;
    if !verify_witness(&view.inst, &out) {
        return Err(internal("constructed witness failed verification"));
    }
    Ok(out)
}

fn witness_rec(
    view: &FrobeniusView,
    ell: usize,
    removed: &mut BitSet,
    div: u64,
    k: u64,
    out: &mut BitSet,
) -> Result<()> {
    let inst = &view.inst;
    let cur_weight = |v: usize| -> Result<u64> {
        let w = inst.weight[v];
        if w % div != 0 {
            return Err(internal("weight not divisible by accumulated divisor"));
        }
        Ok(w / div)
    };
    let alive_members = |li: usize| -> Vec<usize> {
        view.layers[li]
            .iter()
            .copied()
            .filter(|&v| !removed.get(v))
            .collect()
    };
    // Derived-instance structure check: closures still fit under k.
    for li in 0..ell {
        for &v in &view.layers[li] {
            if removed.get(v) {
                continue;
            }
            let mut w = 0u64;
            for x in view.desc[v].iter_ones() {
                if !removed.get(x) {
                    w += cur_weight(x)?;
                }
            }
            if 2u128 * w as u128 * w as u128 > k as u128 {
                return Err(internal("derived instance violates the closure bound"));
            }
        }
    }
    if ell == 1 {
        let members = alive_members(0);
        let w1 = cur_weight(members[0])?;
        if k % w1 != 0 {
            return Err(internal("base layer weight does not divide the target"));
        }
        let need = (k / w1) as usize;
        if members.len() < need {
            return Err(internal("base layer too small for the target"));
        }
        for &v in members.iter().take(need) {
            out.insert(v);
        }
        return Ok(());
    }
    let lower_gcd = (0..ell - 1).try_fold(0u64, |acc, li| {
        let members = alive_members(li);
        if members.is_empty() {
            return Err(internal("derived layer became empty"));
        }
        Ok(acc.gcd(&cur_weight(members[0])?))
    })?;
    let d = lower_gcd;
    if k % d == 0 {
        return witness_rec(view, ell - 1, removed, div, k, out);
    }
    // d does not divide k, so d >= 2. Choose b top-layer vertices with
    // b * w_ell = k (mod d), smallest non-negative b.
    let top = alive_members(ell - 1);
    let w_ell = cur_weight(top[0])?;
    let a = w_ell % d;
    let c = k % d;
    let g = a.gcd(&d);
    if c % g != 0 {
        return Err(internal("congruence for b has no solution"));
    }
    let m = d / g;
    let b = (c / g % m) as i128 * mod_inverse((a / g % m) as i128, m as i128)? % m as i128;
    let b = b.rem_euclid(m as i128) as u64;
    if b == 0 || b >= d {
        return Err(internal("computed b outside (0, d)"));
    }
    if (top.len() as u64) < b {
        return Err(internal("top layer smaller than b"));
    }
    // D(S) for the b lowest-indexed top vertices, within the live part.
    let mut ds = BitSet::new(inst.n);
    for &v in top.iter().take(b as usize) {
        let mut dv = view.desc[v].clone();
        dv.subtract(removed);
        ds.union_with(&dv);
    }
    let mut w_ds = 0u64;
    for v in ds.iter_ones() {
        w_ds += cur_weight(v)?;
    }
    if w_ds > k || (k - w_ds) % d != 0 {
        return Err(internal("derived target is not a nonnegative multiple of d"));
    }
    let k2 = (k - w_ds) / d;
    out.union_with(&ds);
    removed.union_with(&ds);
    for &v in &top {
        removed.insert(v);
    }
    witness_rec(view, ell - 1, removed, div * d, k2, out)
}

/// Inverse of a modulo m, requiring gcd(a, m) = 1.
fn mod_inverse(a: i128, m: i128) -> Result<i128> {
    let e = a.extended_gcd(&m);
    if e.gcd != 1 {
        return Err(internal("modular inverse of non-coprime operand"));
    }
    Ok(e.x.rem_euclid(m))
}

/// Exact solver. Condenses internally, then peels: any vertex whose
/// closure weight w has 2w^2 > k either starts a recursion on the graph
/// without its closure or is deleted with all its ascendants; small
/// uniform-weight sublayers are handled the same way per vertex; the
/// remainder is a layered view answered by the gcd criterion.
pub fn solve_frobenius(inst: &WdiInstance) -> Result<Option<BitSet>> {
    if inst.k == 0 {
        return Ok(Some(BitSet::new(inst.n)));
    }
    let (cond, comp_of) = inst.condense();
    let alive = BitSet::full(cond.n);
    let sub = solve_condensed(&cond, alive, cond.k)?;
    Ok(sub.map(|s| {
        let mut back = BitSet::new(inst.n);
        for v in 0..inst.n {
            if s.get(comp_of[v]) {
                back.insert(v);
            }
        }
        debug_assert!(verify_witness(inst, &back));
        back
    }))
}

fn solve_condensed(g: &WdiInstance, mut alive: BitSet, k: u64) -> Result<Option<BitSet>> {
    if k == 0 {
        return Ok(Some(BitSet::new(g.n)));
    }
    let total: u64 = alive.iter_ones().map(|v| g.weight[v]).sum();
    if total < k {
        return Ok(None);
    }
    let (desc, wd) = descendants(g, &alive);
    let delete_with_ascendants = |alive: &mut BitSet, v: usize| {
        let holders: Vec<usize> = alive
            .iter_ones()
            .filter(|&u| desc[u].get(v))
            .collect();
        for u in holders {
            alive.remove(u);
        }
    };
    // Step 1: peel vertices whose closure is too heavy for the layered
    // remainder.
    for v in 0..g.n {
        if !alive.get(v) {
            continue;
        }
        if 2u128 * (wd[v] as u128) * (wd[v] as u128) > k as u128 {
            if wd[v] <= k {
                let mut rest = alive.clone();
                rest.subtract(&desc[v]);
                if let Some(s) = solve_condensed(g, rest, k - wd[v])? {
                    let mut s = s;
                    s.union_with(&desc[v]);
                    return Ok(Some(s));
                }
            }
            delete_with_ascendants(&mut alive, v);
        }
    }
    // Step 2: walk sublayers (layer index, then weight) and recurse per
    // vertex of any sublayer smaller than k.
    let layer = layer_indices(g, &alive);
    let max_layer = alive.iter_ones().map(|v| layer[v]).max().unwrap_or(0);
    assert!(
        2 * (max_layer as u128) * (max_layer as u128) <= k as u128,
        "layer count exceeds its bound after step 1"
    );
    for li in 1..=max_layer {
        let mut weights_here: Vec<u64> = alive
            .iter_ones()
            .filter(|&v| layer[v] == li)
            .map(|v| g.weight[v])
            .collect();
        weights_here.sort_unstable();
        weights_here.dedup();
        for w in weights_here {
            let members: Vec<usize> = alive
                .iter_ones()
                .filter(|&v| layer[v] == li && g.weight[v] == w)
                .collect();
            if members.is_empty() || members.len() as u64 >= k {
                continue;
            }
            for v in members {
                if !alive.get(v) {
                    continue;
                }
                if wd[v] <= k {
                    let mut rest = alive.clone();
                    rest.subtract(&desc[v]);
                    if let Some(s) = solve_condensed(g, rest, k - wd[v])? {
                        let mut s = s;
                        s.union_with(&desc[v]);
                        return Ok(Some(s));
                    }
                }
                delete_with_ascendants(&mut alive, v);
            }
        }
    }
    // Step 3: the remainder is a layered view; answer by gcd.
    let mut layer_lists: Vec<Vec<usize>> = Vec::new();
    for li in 1..=max_layer {
        let mut weights_here: Vec<u64> = alive
            .iter_ones()
            .filter(|&v| layer[v] == li)
            .map(|v| g.weight[v])
            .collect();
        weights_here.sort_unstable();
        weights_here.dedup();
        for w in weights_here {
            let members: Vec<usize> = alive
                .iter_ones()
                .filter(|&v| layer[v] == li && g.weight[v] == w)
                .collect();
            if members.is_empty() {
                continue;
            }
            assert!(
                members.len() as u64 >= k,
                "surviving sublayer smaller than k"
            );
            layer_lists.push(members);
        }
    }
    if layer_lists.is_empty() {
        return Ok(None);
    }
    // Extract the live subgraph so the view checks its structure.
    let verts: Vec<usize> = alive.iter_ones().collect();
    let mut new_id = vec![usize::MAX; g.n];
    for (i, &v) in verts.iter().enumerate() {
        new_id[v] = i;
    }
    let sub_arcs: Vec<(usize, usize)> = g
        .arcs
        .iter()
        .filter(|&&(u, v)| alive.get(u) && alive.get(v))
        .map(|&(u, v)| (new_id[u], new_id[v]))
        .collect();
    let sub_weights: Vec<u64> = verts.iter().map(|&v| g.weight[v]).collect();
    let sub = WdiInstance::new(verts.len(), sub_weights, sub_arcs, k)
        .map_err(|e| internal(format!("remainder extraction failed: {e}")))?;
    let sub_layers: Vec<Vec<usize>> = layer_lists
        .iter()
        .map(|l| l.iter().map(|&v| new_id[v]).collect())
        .collect();
    let view = FrobeniusView::new(&sub, sub_layers)
        .map_err(|e| internal(format!("remainder is not a layered view: {e}")))?;
    if !view.feasible() {
        return Ok(None);
    }
    let w = frobenius_witness(&view)?;
    let mut back = BitSet::new(g.n);
    for i in w.iter_ones() {
        back.insert(verts[i]);
    }
    Ok(Some(back))
}

/// Exact solver for acyclic instances that guesses the small half of a
/// solution. Either the solution's sources S' (at most floor(k/2) of
/// them, since every non-source adds weight) reproduce it as D(S'), or
/// its non-sources S'' do after dropping their in-arcs: the rest of the
/// solution must then be out-degree-0 vertices, found by subset-sum.
pub fn solve_sources(inst: &WdiInstance) -> Result<Option<BitSet>> {
    if !inst.is_acyclic() {
        return Err(usage("sources solver requires an acyclic instance".to_string()));
    }
    let k = inst.k;
    if k == 0 {
        return Ok(Some(BitSet::new(inst.n)));
    }
    let half = (k / 2) as usize;
    let alive = BitSet::full(inst.n);
    let (desc, _) = descendants(inst, &alive);
    let all: Vec<usize> = (0..inst.n).collect();
    // Case A: guess the sources.
    let mut found = None;
    for_each_subset(&all, half.min(inst.n), &mut |subset| {
        if found.is_some() {
            return;
        }
        let mut d = BitSet::new(inst.n);
        for &v in subset {
            d.union_with(&desc[v]);
        }
        let w: u64 = d.iter_ones().map(|v| inst.weight[v]).sum();
        if w == k {
            found = Some(d);
        }
    });
    if let Some(s) = found {
        debug_assert!(verify_witness(inst, &s));
        return Ok(Some(s));
    }
    // Case B: guess the non-sources.
    let in_adj = inst.in_adj();
    let non_sources: Vec<usize> = (0..inst.n).filter(|&v| !in_adj[v].is_empty()).collect();
    let mut found: Option<BitSet> = None;
    for_each_subset(&non_sources, half.min(non_sources.len()), &mut |subset| {
        if found.is_some() {
            return;
        }
        let mut ss = BitSet::new(inst.n);
        let mut w_ss = 0u64;
        for &v in subset {
            ss.insert(v);
            w_ss += inst.weight[v];
        }
        if w_ss > k {
            return;
        }
        // Drop in-arcs to the guessed set; survivors of the solution
        // must have out-degree 0 afterwards.
        let out_deg2 = |v: usize| -> usize {
            inst.arcs
                .iter()
                .filter(|&&(u, x)| u == v && !ss.get(x))
                .count()
        };
        let zero_out: Vec<usize> = (0..inst.n).filter(|&v| out_deg2(v) == 0).collect();
        if subset.iter().any(|&v| out_deg2(v) != 0) {
            return;
        }
        let pool: Vec<usize> = zero_out.iter().copied().filter(|&v| !ss.get(v)).collect();
        if let Some(extra) = subset_sum(&pool, &inst.weight, k - w_ss) {
            let mut s = ss.clone();
            for v in extra {
                s.insert(v);
            }
            found = Some(s);
        }
    });
    if let Some(s) = &found {
        debug_assert!(verify_witness(inst, s));
    }
    Ok(found)
}

/// Calls f on every subset of `items` of size 0..=max_size, sizes
/// ascending and lexicographic within a size.
fn for_each_subset(items: &[usize], max_size: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(
        items: &[usize],
        start: usize,
        left: usize,
        cur: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]),
    ) {
        if left == 0 {
            f(cur);
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, i + 1, left - 1, cur, f);
            cur.pop();
        }
    }
    let mut cur = Vec::new();
    for size in 0..=max_size.min(items.len()) {
        rec(items, 0, size, &mut cur, f);
    }
}

/// Picks a sub-multiset of pool vertices whose weights sum to target,
/// by a table over 0..=target, reconstructing one witness.
fn subset_sum(pool: &[usize], weight: &[u64], target: u64) -> Option<Vec<usize>> {
    let t = target as usize;
    // choice[s] = index into pool of the last item reaching sum s.
    let mut choice: Vec<Option<usize>> = vec![None; t + 1];
    let mut reachable = vec![false; t + 1];
    reachable[0] = true;
    for (i, &v) in pool.iter().enumerate() {
        let w = weight[v] as usize;
        if w > t {
            continue;
        }
        for s in (w..=t).rev() {
            if !reachable[s] && reachable[s - w] {
                reachable[s] = true;
                choice[s] = Some(i);
            }
        }
    }
    if !reachable[t] {
        return None;
    }
    let mut out = Vec::new();
    let mut s = t;
    while s > 0 {
        let i = choice[s].expect("reachable sums have a recorded choice");
        out.push(pool[i]);
        s -= weight[pool[i]] as usize;
    }
    Some(out)
}

/// Oracle: enumerate all subsets. Guarded to n <= 24.
pub fn solve_bruteforce(inst: &WdiInstance) -> Result<Option<BitSet>> {
    if inst.n > 24 {
        return Err(capacity(format!(
            "brute force over {} vertices exceeds the 24-vertex guard",
            inst.n
        )));
    }
    let n = inst.n;
    let mut out_mask = vec![0u32; n];
    for &(u, v) in &inst.arcs {
        out_mask[u] |= 1 << v;
    }
    for mask in 0u32..1u32 << n {
        let mut ok = true;
        let mut w = 0u64;
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if out_mask[v] & !mask != 0 {
                ok = false;
                break;
            }
            w += inst.weight[v];
            if w > inst.k {
                ok = false;
                break;
            }
        }
        if ok && w == inst.k {
            return Ok(Some(BitSet::from_indices(
                n,
                (0..n).filter(|i| mask >> i & 1 == 1),
            )));
        }
    }
    Ok(None)
}
