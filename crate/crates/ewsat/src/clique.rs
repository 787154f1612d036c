//! k-clique and d-uniform k-hyperclique detection. Brute-force solvers
//! double as oracles; `find_clique_mm` realizes the clique-to-triangle
//! scheme: split k into three nearly equal parts, enumerate cliques of
//! each part size as auxiliary vertices, and find a triangle across the
//! three classes via bit-row intersection.

use crate::bits::BitSet;
use crate::boolfun::strip_comment;
use crate::error::{parse_err, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    rows: Vec<BitSet>,
}

impl Graph {
    pub fn new(n: usize) -> Graph {
        Graph {
            n,
            rows: vec![BitSet::new(n); n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n && u != v, "edge ({u},{v}) invalid");
        self.rows[u].insert(v);
        self.rows[v].insert(u);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u].get(v)
    }

    pub fn neighbors(&self, v: usize) -> &BitSet {
        &self.rows[v]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in self.rows[u].iter_ones() {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Parses `p edge <n> <m>` plus m lines `e <u> <v>`, 1-based.
    pub fn parse(text: &str) -> Result<Graph> {
        let mut g: Option<Graph> = None;
        let mut m_decl = 0usize;
        let mut m_seen = 0usize;
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
                    if g.is_some() {
                        return Err(parse_err(line, "duplicate header"));
                    }
                    if toks.len() != 4 || toks[1] != "edge" {
                        return Err(parse_err(line, "expected 'p edge <n> <m>'"));
                    }
                    let n: usize = toks[2]
                        .parse()
                        .map_err(|_| parse_err(line, format!("bad number '{}'", toks[2])))?;
                    m_decl = toks[3]
                        .parse()
                        .map_err(|_| parse_err(line, format!("bad number '{}'", toks[3])))?;
                    g = Some(Graph::new(n));
                    head_line = line;
                }
                "e" => {
                    let g = g.as_mut().ok_or_else(|| parse_err(line, "edge before header"))?;
                    if toks.len() != 3 {
                        return Err(parse_err(line, "expected 'e <u> <v>'"));
                    }
                    let u = parse_vertex(toks[1], g.n, line)?;
                    let v = parse_vertex(toks[2], g.n, line)?;
                    if u == v {
                        return Err(parse_err(line, format!("self-loop at vertex {}", u + 1)));
                    }
                    g.add_edge(u, v);
                    m_seen += 1;
                }
                other => return Err(parse_err(line, format!("unexpected token '{other}'"))),
            }
        }
        let g = g.ok_or_else(|| parse_err(1, "missing 'p edge' header"))?;
        if m_seen != m_decl {
            return Err(parse_err(
                head_line,
                format!("header declares {m_decl} edges, found {m_seen}"),
            ));
        }
        Ok(g)
    }

    pub fn serialize(&self) -> String {
        let edges = self.edges();
        let mut out = format!("p edge {} {}\n", self.n, edges.len());
        for (u, v) in edges {
            out.push_str(&format!("e {} {}\n", u + 1, v + 1));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    d: usize,
    n: usize,
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    pub fn new(d: usize, n: usize) -> Hypergraph {
        assert!(d >= 1, "uniformity must be at least 1");
        Hypergraph {
            d,
            n,
            edges: Vec::new(),
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    /// Inserts a d-subset; duplicates are ignored.
    pub fn add_edge(&mut self, mut edge: Vec<usize>) {
        edge.sort_unstable();
        assert_eq!(edge.len(), self.d, "edge size must equal uniformity");
        assert!(edge.windows(2).all(|w| w[0] < w[1]), "edge vertices must be distinct");
        assert!(edge.iter().all(|&v| v < self.n), "edge vertex out of range");
        if !self.edges.contains(&edge) {
            self.edges.push(edge);
        }
    }

    pub fn has_edge(&self, edge: &[usize]) -> bool {
        let mut e = edge.to_vec();
        e.sort_unstable();
        self.edges.contains(&e)
    }

    /// Parses `p hedge <d> <n> <m>` plus m lines `e <v1> ... <vd>`.
    pub fn parse(text: &str) -> Result<Hypergraph> {
        let mut h: Option<Hypergraph> = None;
        let mut m_decl = 0usize;
        let mut m_seen = 0usize;
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
                    if h.is_some() {
                        return Err(parse_err(line, "duplicate header"));
                    }
                    if toks.len() != 5 || toks[1] != "hedge" {
                        return Err(parse_err(line, "expected 'p hedge <d> <n> <m>'"));
                    }
                    let d: usize = toks[2]
                        .parse()
                        .map_err(|_| parse_err(line, format!("bad number '{}'", toks[2])))?;
                    if d == 0 {
                        return Err(parse_err(line, "uniformity must be positive"));
                    }
                    let n: usize = toks[3]
                        .parse()
                        .map_err(|_| parse_err(line, format!("bad number '{}'", toks[3])))?;
                    m_decl = toks[4]
                        .parse()
                        .map_err(|_| parse_err(line, format!("bad number '{}'", toks[4])))?;
                    h = Some(Hypergraph::new(d, n));
                    head_line = line;
                }
                "e" => {
                    let h = h.as_mut().ok_or_else(|| parse_err(line, "edge before header"))?;
                    if toks.len() != h.d + 1 {
                        return Err(parse_err(line, format!("expected {} vertices", h.d)));
                    }
                    let mut edge = Vec::with_capacity(h.d);
                    for t in &toks[1..] {
                        edge.push(parse_vertex(t, h.n, line)?);
                    }
                    edge.sort_unstable();
                    if edge.windows(2).any(|w| w[0] == w[1]) {
                        return Err(parse_err(line, "repeated vertex in edge"));
                    }
                    h.add_edge(edge);
                    m_seen += 1;
                }
                other => return Err(parse_err(line, format!("unexpected token '{other}'"))),
            }
        }
        let h = h.ok_or_else(|| parse_err(1, "missing 'p hedge' header"))?;
        if m_seen != m_decl {
            return Err(parse_err(
                head_line,
                format!("header declares {m_decl} edges, found {m_seen}"),
            ));
        }
        Ok(h)
    }

    pub fn serialize(&self) -> String {
        let mut edges = self.edges.clone();
        edges.sort_unstable();
        let mut out = format!("p hedge {} {} {}\n", self.d, self.n, edges.len());
        for e in edges {
            out.push('e');
            for v in e {
                out.push_str(&format!(" {}", v + 1));
            }
            out.push('\n');
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

pub fn is_clique(g: &Graph, s: &[usize]) -> bool {
    for (i, &u) in s.iter().enumerate() {
        for &v in &s[i + 1..] {
            if u == v || !g.has_edge(u, v) {
                return false;
            }
        }
    }
    true
}

pub fn is_hyperclique(h: &Hypergraph, s: &[usize]) -> bool {
    if s.len() < h.d {
        return true;
    }
    let mut ok = true;
    for_each_combination(s, h.d, &mut |sub| {
        if ok && !h.has_edge(sub) {
            ok = false;
        }
    });
    ok
}

/// Lexicographically first k-clique, by ascending extension with
/// candidate-set intersection.
pub fn find_clique_bruteforce(g: &Graph, k: usize) -> Option<Vec<usize>> {
    fn rec(g: &Graph, cand: &BitSet, cur: &mut Vec<usize>, k: usize) -> bool {
        if cur.len() == k {
            return true;
        }
        for v in cand.iter_ones() {
            let mut next = cand.clone();
            next.intersect_with(g.neighbors(v));
            // Keep the extension ascending so the first hit is the
            // lexicographically first clique.
            for w in 0..=v {
                next.remove(w);
            }
            cur.push(v);
            if rec(g, &next, cur, k) {
                return true;
            }
            cur.pop();
        }
        false
    }
    if k == 0 {
        return Some(Vec::new());
    }
    let mut cur = Vec::new();
    if rec(g, &BitSet::full(g.n), &mut cur, k) {
        Some(cur)
    } else {
        None
    }
}

/// All cliques of exactly the given size, in lexicographic order.
fn enumerate_cliques(g: &Graph, size: usize) -> Vec<Vec<usize>> {
    fn rec(g: &Graph, cand: &BitSet, cur: &mut Vec<usize>, size: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for v in cand.iter_ones() {
            let mut next = cand.clone();
            next.intersect_with(g.neighbors(v));
            for w in 0..=v {
                next.remove(w);
            }
            cur.push(v);
            rec(g, &next, cur, size, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    rec(g, &BitSet::full(g.n), &mut cur, size, &mut out);
    out
}

/// How find_clique_mm answered: via the triangle construction or via
/// the brute-force fallback after hitting the auxiliary-size cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmPath {
    Direct,
    Triangle,
    Fallback,
}

pub const DEFAULT_AUX_CAP: usize = 2_000_000;

pub fn find_clique_mm(g: &Graph, k: usize) -> Option<Vec<usize>> {
    find_clique_mm_capped(g, k, DEFAULT_AUX_CAP).0
}

/// Triangle-based clique search with an explicit cap on the number of
/// auxiliary vertices; exceeding it falls back to brute force.
pub fn find_clique_mm_capped(g: &Graph, k: usize, aux_cap: usize) -> (Option<Vec<usize>>, MmPath) {
    if k == 0 {
        return (Some(Vec::new()), MmPath::Direct);
    }
    if k == 1 {
        return (
            if g.n >= 1 { Some(vec![0]) } else { None },
            MmPath::Direct,
        );
    }
    if k == 2 {
        for u in 0..g.n {
            if let Some(v) = g.neighbors(u).iter_ones().find(|&v| v > u) {
                return (Some(vec![u, v]), MmPath::Direct);
            }
        }
        return (None, MmPath::Direct);
    }
    let k1 = k.div_ceil(3);
    let k2 = (k - k1).div_ceil(2);
    let k3 = k - k1 - k2;
    let classes: Vec<Vec<Vec<usize>>> = [k1, k2, k3]
        .iter()
        .map(|&s| enumerate_cliques(g, s))
        .collect();
    let n_aux: usize = classes.iter().map(|c| c.len()).sum();
    if n_aux > aux_cap {
        return (find_clique_bruteforce(g, k), MmPath::Fallback);
    }
    if classes.iter().any(|c| c.is_empty()) {
        return (None, MmPath::Triangle);
    }
    // Flatten classes; per aux clique keep its vertex mask and the
    // common neighborhood of its members. Aux u, v are adjacent iff
    // mask(v) is inside common(u): the union is then a larger clique
    // (zero diagonal rules out overlap).
    let mut masks: Vec<BitSet> = Vec::with_capacity(n_aux);
    let mut commons: Vec<BitSet> = Vec::with_capacity(n_aux);
    let mut class_of: Vec<u8> = Vec::with_capacity(n_aux);
    let mut members: Vec<&Vec<usize>> = Vec::with_capacity(n_aux);
    for (ci, class) in classes.iter().enumerate() {
        for cl in class {
            let mask = BitSet::from_indices(g.n, cl.iter().copied());
            let mut common = BitSet::full(g.n);
            for &v in cl {
                common.intersect_with(g.neighbors(v));
            }
            masks.push(mask);
            commons.push(common);
            class_of.push(ci as u8);
            members.push(cl);
        }
    }
    let mut rows: Vec<BitSet> = vec![BitSet::new(n_aux); n_aux];
    for u in 0..n_aux {
        for v in u + 1..n_aux {
            if class_of[u] != class_of[v] && masks[v].is_subset_of(&commons[u]) {
                rows[u].insert(v);
                rows[v].insert(u);
            }
        }
    }
    let mut class3_mask = BitSet::new(n_aux);
    for v in 0..n_aux {
        if class_of[v] == 2 {
            class3_mask.insert(v);
        }
    }
    // Triangle scan: one class-1 by class-2 sweep, finishing each pair
    // with a word-level intersection against class 3.
    for u in 0..n_aux {
        if class_of[u] != 0 {
            continue;
        }
        for v in rows[u].iter_ones() {
            if class_of[v] != 1 {
                continue;
            }
            let mut third = rows[u].clone();
            third.intersect_with(&rows[v]);
            third.intersect_with(&class3_mask);
            if let Some(w) = third.first_one() {
                let mut out = members[u].clone();
                out.extend_from_slice(members[v]);
                out.extend_from_slice(members[w]);
                out.sort_unstable();
                debug_assert!(is_clique(g, &out) && out.len() == k);
                return (Some(out), MmPath::Triangle);
            }
        }
    }
    (None, MmPath::Triangle)
}

/// First k-set all of whose d-subsets are edges. For k < d every
/// condition is vacuous, so any k vertices do.
pub fn find_hyperclique(h: &Hypergraph, k: usize) -> Option<Vec<usize>> {
    if k < h.d {
        if k <= h.n {
            return Some((0..k).collect());
        }
        return None;
    }
    fn rec(h: &Hypergraph, start: usize, cur: &mut Vec<usize>, k: usize) -> bool {
        if cur.len() == k {
            return true;
        }
        'next: for v in start..h.n {
            // Check only the d-subsets that involve v; earlier ones
            // were checked when their last vertex was added.
            if cur.len() + 1 >= h.d {
                let mut ok = true;
                for_each_combination(cur, h.d - 1, &mut |sub| {
                    if ok {
                        let mut e = sub.to_vec();
                        e.push(v);
                        if !h.has_edge(&e) {
                            ok = false;
                        }
                    }
                });
                if !ok {
                    continue 'next;
                }
            }
            cur.push(v);
            if rec(h, v + 1, cur, k) {
                return true;
            }
            cur.pop();
        }
        false
    }
    let mut cur = Vec::new();
    if rec(h, 0, &mut cur, k) {
        Some(cur)
    } else {
        None
    }
}

/// Calls f on every size-`size` combination of `items`, lexicographic.
pub(crate) fn for_each_combination(items: &[usize], size: usize, f: &mut dyn FnMut(&[usize])) {
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
        if items.len() - start < left {
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, i + 1, left - 1, cur, f);
            cur.pop();
        }
    }
    let mut cur = Vec::new();
    rec(items, 0, size, &mut cur, f);
}
