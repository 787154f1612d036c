//! Exact-weight CSP instances: a conjunction of constraints drawn from a
//! family, evaluated against 0/1 assignments of prescribed weight.
//!
//! Besides representation and parsing this module hosts the two
//! instance-level transforms the solvers build on: minimal satisfying
//! extensions (bounded search tree) and the split of an instance into
//! 0-valid branches.

use crate::bits::BitSet;
use crate::boolfun::{strip_comment, BoolFun, ConstraintFamily};
use crate::error::{parse_err, usage, Result};

/// One argument position of a constraint: a variable (0-based index) or
/// a literal constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Term {
    Var(usize),
    Const(bool),
}

/// A single applied constraint: family member index plus an argument
/// tuple. Repeated variables are permitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub fun: usize,
    pub args: Vec<Term>,
}

impl Constraint {
    /// Distinct variables in first-occurrence order.
    pub fn vars(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for t in &self.args {
            if let Term::Var(v) = t {
                if !out.contains(v) {
                    out.push(*v);
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula {
    n: usize,
    family: ConstraintFamily,
    family_name: String,
    constraints: Vec<Constraint>,
}

/// One branch of the 0-valid split: the variables forced to one, the
/// residual formula with those variables substituted by Const(1), and
/// the leftover weight target. Solutions of the residual are sought
/// among variables outside `forced`; re-using a forced variable would
/// double-count its weight.
#[derive(Debug, Clone)]
pub struct Branch {
    pub forced: BitSet,
    pub residual: Formula,
    pub target: usize,
}

impl Formula {
    pub fn new(
        n: usize,
        family: ConstraintFamily,
        family_name: impl Into<String>,
        constraints: Vec<Constraint>,
    ) -> Result<Self> {
        for (i, c) in constraints.iter().enumerate() {
            let f = family
                .funs()
                .get(c.fun)
                .ok_or_else(|| usage(format!("constraint {} names a missing function", i + 1)))?;
            if c.args.len() != f.arity() {
                return Err(usage(format!(
                    "constraint {} has {} arguments, {} takes {}",
                    i + 1,
                    c.args.len(),
                    f.name(),
                    f.arity()
                )));
            }
            for t in &c.args {
                if let Term::Var(v) = t {
                    if *v >= n {
                        return Err(usage(format!(
                            "constraint {} references variable {} of {}",
                            i + 1,
                            v + 1,
                            n
                        )));
                    }
                }
            }
        }
        Ok(Formula {
            n,
            family,
            family_name: family_name.into(),
            constraints,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.constraints.len()
    }

    pub fn family(&self) -> &ConstraintFamily {
        &self.family
    }

    pub fn family_name(&self) -> &str {
        &self.family_name
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn eval_constraint(&self, c: &Constraint, a: &BitSet) -> bool {
        let f = &self.family.funs()[c.fun];
        let mut m = 0usize;
        for (j, t) in c.args.iter().enumerate() {
            let bit = match t {
                Term::Var(v) => a.get(*v),
                Term::Const(b) => *b,
            };
            if bit {
                m |= 1 << j;
            }
        }
        f.bit(m)
    }

    /// First violated constraint in file order, if any.
    pub fn find_violated(&self, a: &BitSet) -> Option<usize> {
        self.constraints
            .iter()
            .position(|c| !self.eval_constraint(c, a))
    }

    pub fn satisfied_by(&self, a: &BitSet) -> bool {
        self.find_violated(a).is_none()
    }

    /// Minimal satisfying extensions of `a` of weight at most `k`. A
    /// satisfying input returns `{a}` itself. Violating inputs run a
    /// bounded search tree: repair the first violated constraint by
    /// flipping each of its 0-valued variable arguments, prune above
    /// weight k, then keep the dominance-minimal distinct leaves.
    pub fn minimal_extensions(&self, a: &BitSet, k: usize) -> Vec<BitSet> {
        self.minimal_extensions_counted(a, k).0
    }

    /// Same, also reporting the number of search-tree leaves, which is
    /// bounded by r^(k - w(a)) with r the family arity.
    pub fn minimal_extensions_counted(&self, a: &BitSet, k: usize) -> (Vec<BitSet>, u64) {
        let mut leaves = 0u64;
        let mut found = Vec::new();
        let mut cur = a.clone();
        let start_weight = cur.count();
        self.extend_rec(&mut cur, start_weight, k, &mut found, &mut leaves);
        let r = self.family.arity().max(1) as u128;
        let depth = k.saturating_sub(start_weight).min(64) as u32;
        assert!(
            leaves as u128 <= r.saturating_pow(depth).max(1),
            "search tree exceeded its leaf bound"
        );
        // Dedup, then drop any leaf that strictly dominates another.
        found.sort_by(|x, y| x.count().cmp(&y.count()).then(x.ones_vec().cmp(&y.ones_vec())));
        found.dedup();
        let minimal: Vec<BitSet> = found
            .iter()
            .filter(|x| !found.iter().any(|y| y != *x && y.is_subset_of(x)))
            .cloned()
            .collect();
        (minimal, leaves)
    }

    fn extend_rec(
        &self,
        cur: &mut BitSet,
        weight: usize,
        k: usize,
        found: &mut Vec<BitSet>,
        leaves: &mut u64,
    ) {
        let cid = match self.find_violated(cur) {
            None => {
                found.push(cur.clone());
                *leaves += 1;
                return;
            }
            Some(c) => c,
        };
        if weight >= k {
            // No room to flip anything else.
            *leaves += 1;
            return;
        }
        let cands: Vec<usize> = self.constraints[cid]
            .vars()
            .into_iter()
            .filter(|&v| !cur.get(v))
            .collect();
        if cands.is_empty() {
            *leaves += 1;
            return;
        }
        for v in cands {
            cur.insert(v);
            self.extend_rec(cur, weight + 1, k, found, leaves);
            cur.remove(v);
        }
    }

    /// Substitutes Const(1) for every variable in S. The variable
    /// universe is unchanged; forced variables simply no longer occur.
    pub fn restrict_vars_to_one(&self, s: &BitSet) -> Formula {
        let constraints = self
            .constraints
            .iter()
            .map(|c| Constraint {
                fun: c.fun,
                args: c
                    .args
                    .iter()
                    .map(|t| match t {
                        Term::Var(v) if s.get(*v) => Term::Const(true),
                        other => *other,
                    })
                    .collect(),
            })
            .collect();
        Formula {
            n: self.n,
            family: self.family.clone(),
            family_name: self.family_name.clone(),
            constraints,
        }
    }

    /// Splits the instance into 0-valid branches: one per minimal
    /// satisfying extension m of the all-zero assignment with w(m) <= k
    /// (a 0-valid instance yields the single branch m = empty). The
    /// instance has a weight-k solution iff some branch's residual has a
    /// weight-(k - w(m)) solution over the non-forced variables.
    pub fn zero_valid_branches(&self, k: usize) -> Vec<Branch> {
        let zero = BitSet::new(self.n);
        let exts = self.minimal_extensions(&zero, k);
        exts.into_iter()
            .map(|m| {
                let w = m.count();
                let residual = self.restrict_vars_to_one(&m);
                debug_assert!(
                    residual.satisfied_by(&BitSet::new(self.n)),
                    "residual of a satisfying extension must be 0-valid"
                );
                Branch {
                    forced: m,
                    residual,
                    target: k - w,
                }
            })
            .collect()
    }

    /// The induced function on the distinct variables of a constraint,
    /// in first-occurrence order: constants folded, repeats merged.
    /// Constraints without variables fold to a unary constant.
    pub fn effective_function(&self, c: &Constraint) -> BoolFun {
        let f = &self.family.funs()[c.fun];
        let vars = c.vars();
        let s = vars.len().max(1);
        let bits: Vec<bool> = (0..1usize << s)
            .map(|m| {
                let mut idx = 0usize;
                for (j, t) in c.args.iter().enumerate() {
                    let bit = match t {
                        Term::Const(b) => *b,
                        Term::Var(v) => {
                            let pos = vars.iter().position(|x| x == v).expect("var listed");
                            m >> pos & 1 == 1
                        }
                    };
                    if bit {
                        idx |= 1 << j;
                    }
                }
                f.bit(idx)
            })
            .collect();
        BoolFun::new(format!("{}_eff", f.name()), s, &bits).expect("arity within bounds")
    }

    /// Parses the formula file format against an already-loaded family.
    /// Returns the formula and the header's weight target k.
    pub fn parse(text: &str, family: &ConstraintFamily) -> Result<(Formula, usize)> {
        let mut header: Option<(usize, usize, usize)> = None;
        let mut family_name: Option<String> = None;
        let mut constraints: Vec<Constraint> = Vec::new();
        let mut m_line = 0usize;
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
                    if toks.len() != 5 || toks[1] != "ewsat" {
                        return Err(parse_err(line, "expected 'p ewsat <n> <m> <k>'"));
                    }
                    let nums: Vec<usize> = toks[2..5]
                        .iter()
                        .map(|t| t.parse().map_err(|_| parse_err(line, format!("bad number '{t}'"))))
                        .collect::<Result<_>>()?;
                    header = Some((nums[0], nums[1], nums[2]));
                    m_line = line;
                }
                "use" => {
                    if toks.len() != 2 {
                        return Err(parse_err(line, "expected 'use <family-name>'"));
                    }
                    if family_name.is_some() {
                        return Err(parse_err(line, "duplicate use line"));
                    }
                    family_name = Some(toks[1].to_string());
                }
                "c" => {
                    let (n, _, _) =
                        header.ok_or_else(|| parse_err(line, "constraint before header"))?;
                    if toks.len() < 2 {
                        return Err(parse_err(line, "expected 'c <funname> <args..>'"));
                    }
                    let (fi, f) = family.by_name(toks[1]).ok_or_else(|| {
                        parse_err(line, format!("unknown function '{}'", toks[1]))
                    })?;
                    let args: Vec<Term> = toks[2..]
                        .iter()
                        .map(|t| match *t {
                            "T" => Ok(Term::Const(true)),
                            "F" => Ok(Term::Const(false)),
                            other => {
                                let v: usize = other.parse().map_err(|_| {
                                    parse_err(line, format!("bad term '{other}'"))
                                })?;
                                if v == 0 || v > n {
                                    return Err(parse_err(
                                        line,
                                        format!("variable {v} outside 1..={n}"),
                                    ));
                                }
                                Ok(Term::Var(v - 1))
                            }
                        })
                        .collect::<Result<_>>()?;
                    if args.len() != f.arity() {
                        return Err(parse_err(
                            line,
                            format!(
                                "{} takes {} arguments, got {}",
                                f.name(),
                                f.arity(),
                                args.len()
                            ),
                        ));
                    }
                    constraints.push(Constraint { fun: fi, args });
                }
                other => return Err(parse_err(line, format!("unexpected token '{other}'"))),
            }
        }
        let (n, m, k) = header.ok_or_else(|| parse_err(1, "missing 'p ewsat' header"))?;
        let family_name = family_name.ok_or_else(|| parse_err(m_line, "missing 'use' line"))?;
        if constraints.len() != m {
            return Err(parse_err(
                m_line,
                format!("header declares {m} constraints, found {}", constraints.len()),
            ));
        }
        let formula = Formula::new(n, family.clone(), family_name, constraints)?;
        Ok((formula, k))
    }

    pub fn serialize(&self, k: usize) -> String {
        let mut out = format!("p ewsat {} {} {}\n", self.n, self.m(), k);
        out.push_str(&format!("use {}\n", self.family_name));
        for c in &self.constraints {
            out.push_str(&format!("c {}", self.family.funs()[c.fun].name()));
            for t in &c.args {
                match t {
                    Term::Var(v) => out.push_str(&format!(" {}", v + 1)),
                    Term::Const(true) => out.push_str(" T"),
                    Term::Const(false) => out.push_str(" F"),
                }
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfun::BoolFun;
    use proptest::prelude::*;

    fn fam_impl_or_nand() -> ConstraintFamily {
        ConstraintFamily::new(vec![BoolFun::impl2(), BoolFun::or2(), BoolFun::nand(2)]).unwrap()
    }

    fn mk(n: usize, cs: &[(usize, &[Term])]) -> Formula {
        let constraints = cs
            .iter()
            .map(|(f, args)| Constraint {
                fun: *f,
                args: args.to_vec(),
            })
            .collect();
        Formula::new(n, fam_impl_or_nand(), "mixed", constraints).unwrap()
    }

    fn bs(n: usize, ones: &[usize]) -> BitSet {
        BitSet::from_indices(n, ones.iter().copied())
    }

    #[test]
    fn eval_and_find_violated() {
        let phi = mk(2, &[(0, &[Term::Var(0), Term::Var(1)])]);
        assert_eq!(phi.find_violated(&bs(2, &[0])), Some(0));
        assert_eq!(phi.find_violated(&bs(2, &[0, 1])), None);
        let empty = mk(2, &[]);
        assert_eq!(empty.find_violated(&bs(2, &[])), None);
        // Constants and repeats.
        let forced = mk(2, &[(0, &[Term::Var(0), Term::Const(true)])]);
        assert!(forced.satisfied_by(&bs(2, &[0])));
        let rep = mk(1, &[(2, &[Term::Var(0), Term::Var(0)])]);
        assert!(!rep.satisfied_by(&bs(1, &[0])));
    }

    #[test]
    fn minimal_extensions_chain() {
        // (x1 => x2) and (x1 => x3), from {x1}.
        let phi = mk(
            3,
            &[
                (0, &[Term::Var(0), Term::Var(1)]),
                (0, &[Term::Var(0), Term::Var(2)]),
            ],
        );
        let exts = phi.minimal_extensions(&bs(3, &[0]), 3);
        assert_eq!(exts, vec![bs(3, &[0, 1, 2])]);
        assert!(phi.minimal_extensions(&bs(3, &[0]), 2).is_empty());
        // A satisfying input returns itself.
        let sat = phi.minimal_extensions(&bs(3, &[]), 3);
        assert_eq!(sat, vec![bs(3, &[])]);
    }

    #[test]
    fn zero_valid_branch_shapes() {
        let impl_only = mk(2, &[(0, &[Term::Var(0), Term::Var(1)])]);
        let b = impl_only.zero_valid_branches(2);
        assert_eq!(b.len(), 1);
        assert!(b[0].forced.is_empty());
        assert_eq!(b[0].target, 2);

        let or = mk(2, &[(1, &[Term::Var(0), Term::Var(1)])]);
        let b = or.zero_valid_branches(2);
        let forced: Vec<Vec<usize>> = b.iter().map(|x| x.forced.ones_vec()).collect();
        assert_eq!(forced, vec![vec![0], vec![1]]);
        assert!(b.iter().all(|x| x.target == 1));
        assert!(b.iter().all(|x| x.residual.satisfied_by(&bs(2, &[]))));

        // Unsatisfiable at weight 0: no branch fits under the target.
        let clash = mk(1, &[(1, &[Term::Var(0), Term::Var(0)])]);
        assert!(clash.zero_valid_branches(0).is_empty());
    }

    #[test]
    fn restriction_preserves_eval_above_the_forced_set() {
        let phi = mk(2, &[(0, &[Term::Var(0), Term::Var(1)])]);
        let s = bs(2, &[0]);
        let r = phi.restrict_vars_to_one(&s);
        for m in 0..4usize {
            let a = BitSet::from_indices(2, (0..2).filter(|i| m >> i & 1 == 1));
            if s.is_subset_of(&a) {
                assert_eq!(phi.satisfied_by(&a), r.satisfied_by(&a));
            }
        }
        assert_eq!(phi.restrict_vars_to_one(&bs(2, &[])), phi);
        // NAND2 with both vars forced becomes constant false.
        let nand = mk(2, &[(2, &[Term::Var(0), Term::Var(1)])]);
        let dead = nand.restrict_vars_to_one(&bs(2, &[0, 1]));
        assert!(!dead.satisfied_by(&bs(2, &[])));
        assert!(!dead.satisfied_by(&bs(2, &[0, 1])));
    }

    #[test]
    fn effective_function_folds() {
        let phi = mk(
            2,
            &[
                (0, &[Term::Var(0), Term::Const(true)]),
                (0, &[Term::Var(0), Term::Var(0)]),
            ],
        );
        let e0 = phi.effective_function(&phi.constraints()[0]);
        assert_eq!(e0.table_string(), "11");
        let e1 = phi.effective_function(&phi.constraints()[1]);
        assert_eq!(e1.table_string(), "11");
        // NAND3(x1, x2, T) folds to NAND2.
        let fam = ConstraintFamily::new(vec![BoolFun::nand(3)]).unwrap();
        let c = Constraint {
            fun: 0,
            args: vec![Term::Var(0), Term::Var(1), Term::Const(true)],
        };
        let phi = Formula::new(2, fam, "n3", vec![c]).unwrap();
        let e = phi.effective_function(&phi.constraints()[0]);
        assert!(e.same_table(&BoolFun::nand(2)));
    }

    #[test]
    fn formula_file_round_trip() {
        let fam = fam_impl_or_nand();
        let text = "# sample\np ewsat 3 2 2\nuse mixed\nc IMPL 1 2\nc NAND2 2 T\n";
        let (phi, k) = Formula::parse(text, &fam).unwrap();
        assert_eq!((phi.n(), phi.m(), k), (3, 2, 2));
        let out = phi.serialize(k);
        let (back, k2) = Formula::parse(&out, &fam).unwrap();
        assert_eq!(phi, back);
        assert_eq!(k, k2);
    }

    #[test]
    fn formula_parse_errors_carry_line_numbers() {
        let fam = fam_impl_or_nand();
        for (text, want_line) in [
            ("p ewsat 2 1 1\nuse f\nc BAD 1 2\n", 3),
            ("p ewsat 2 1 1\nuse f\nc IMPL 1 3\n", 3),
            ("p ewsat 2 1 1\nuse f\nc IMPL 1\n", 3),
            ("p ewsat 2 2 1\nuse f\nc IMPL 1 2\n", 1),
            ("use f\nc IMPL 1 2\n", 2),
        ] {
            match Formula::parse(text, &fam) {
                Err(crate::Error::Parse { line, .. }) => {
                    assert_eq!(line, want_line, "text: {text:?}")
                }
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
    }

    // Oracle helpers: full 2^n enumeration.

    fn all_assignments(n: usize) -> Vec<BitSet> {
        (0..1usize << n)
            .map(|m| BitSet::from_indices(n, (0..n).filter(|i| m >> i & 1 == 1)))
            .collect()
    }

    fn oracle_min_extensions(phi: &Formula, a: &BitSet, k: usize) -> Vec<BitSet> {
        let cand: Vec<BitSet> = all_assignments(phi.n())
            .into_iter()
            .filter(|b| a.is_subset_of(b) && b.count() <= k && phi.satisfied_by(b))
            .collect();
        let mut min: Vec<BitSet> = cand
            .iter()
            .filter(|b| !cand.iter().any(|c| c != *b && c.is_subset_of(b)))
            .cloned()
            .collect();
        min.sort_by(|x, y| x.count().cmp(&y.count()).then(x.ones_vec().cmp(&y.ones_vec())));
        min
    }

    fn arb_formula() -> impl Strategy<Value = Formula> {
        // n in 2..=7, up to 6 constraints over the three binary functions.
        (2usize..=7).prop_flat_map(|n| {
            proptest::collection::vec((0usize..3, 0..n, 0..n), 1..=6).prop_map(move |cs| {
                let constraints = cs
                    .into_iter()
                    .map(|(f, a, b)| Constraint {
                        fun: f,
                        args: vec![Term::Var(a), Term::Var(b)],
                    })
                    .collect();
                Formula::new(n, fam_impl_or_nand(), "mixed", constraints).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn minimal_extensions_match_oracle(phi in arb_formula(), seed in 0u64..1000, k in 0usize..8) {
            let n = phi.n();
            let a = BitSet::from_indices(n, (0..n).filter(|i| seed >> i & 1 == 1));
            prop_assume!(!phi.satisfied_by(&a));
            let got = phi.minimal_extensions(&a, k);
            let want = oracle_min_extensions(&phi, &a, k);
            prop_assert_eq!(&got, &want);
            // Contract properties on the output.
            for b in &got {
                prop_assert!(phi.satisfied_by(b));
                prop_assert!(a.is_subset_of(b));
                prop_assert!(b.count() <= k);
            }
            for x in &got {
                for y in &got {
                    if x != y {
                        prop_assert!(!x.is_subset_of(y));
                    }
                }
            }
        }

        #[test]
        fn zero_valid_branches_match_oracle(phi in arb_formula(), k in 0usize..6) {
            let n = phi.n();
            let feasible = all_assignments(n)
                .iter()
                .any(|a| a.count() == k && phi.satisfied_by(a));
            let branches = phi.zero_valid_branches(k);
            let via_branches = branches.iter().any(|b| {
                all_assignments(n).iter().any(|a| {
                    a.is_disjoint(&b.forced)
                        && a.count() == b.target
                        && b.residual.satisfied_by(a)
                })
            });
            prop_assert_eq!(feasible, via_branches);
            for b in &branches {
                prop_assert!(b.residual.satisfied_by(&BitSet::new(n)));
                prop_assert!(b.forced.count() + b.target == k);
            }
        }
    }
}
