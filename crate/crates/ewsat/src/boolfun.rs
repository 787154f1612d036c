//! Boolean functions as packed truth tables: evaluation, restriction
//! search, representability, and the four-regime classification of a
//! constraint family.
//!
//! Table encoding is least-significant-argument-first: the table bit at
//! index m is f(y1, .., yr) where bit j of m holds the value of argument
//! j+1, so argument 1 toggles fastest. In the string form position m of
//! the string is table index m: `IMPL` (y1 implies y2) is "1011",
//! `NAND2` is "1110".

use crate::error::{capacity, parse_err, usage, Error, Result};
use std::fmt;

/// Hard cap on function arity. Restriction search is exhaustive over
/// (s+2)^r argument maps, so tables stay small by construction.
pub const MAX_ARITY: usize = 10;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BoolFun {
    name: String,
    arity: usize,
    table: Vec<u64>,
}

impl BoolFun {
    pub fn new(name: impl Into<String>, arity: usize, bits: &[bool]) -> Result<Self> {
        if arity == 0 || arity > MAX_ARITY {
            return Err(usage(format!("function arity {arity} outside 1..={MAX_ARITY}")));
        }
        if bits.len() != 1 << arity {
            return Err(usage(format!(
                "table has {} entries, arity {arity} needs {}",
                bits.len(),
                1usize << arity
            )));
        }
        let mut table = vec![0u64; (1usize << arity).div_ceil(64)];
        for (m, &b) in bits.iter().enumerate() {
            if b {
                table[m / 64] |= 1 << (m % 64);
            }
        }
        Ok(BoolFun {
            name: name.into(),
            arity,
            table,
        })
    }

    /// Builds from a '0'/'1' string, position m = table index m.
    pub fn from_table_str(name: impl Into<String>, arity: usize, s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return Err(usage(format!("table string contains '{c}'"))),
            }
        }
        BoolFun::new(name, arity, &bits)
    }

    /// Builds from the low 2^arity bits of `bits` (arity <= 6).
    pub fn from_bits(name: impl Into<String>, arity: usize, bits: u64) -> Result<Self> {
        if arity > 6 {
            return Err(usage("from_bits supports arity <= 6".to_string()));
        }
        let v: Vec<bool> = (0..1u64 << arity).map(|m| bits >> m & 1 == 1).collect();
        BoolFun::new(name, arity, &v)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Table bit at index m, no bounds check beyond debug.
    pub fn bit(&self, m: usize) -> bool {
        debug_assert!(m < 1 << self.arity);
        self.table[m / 64] >> (m % 64) & 1 == 1
    }

    pub fn table_string(&self) -> String {
        (0..1usize << self.arity)
            .map(|m| if self.bit(m) { '1' } else { '0' })
            .collect()
    }

    /// True when the two functions have identical arity and table,
    /// ignoring names.
    pub fn same_table(&self, other: &BoolFun) -> bool {
        self.arity == other.arity && self.table == other.table
    }

    pub fn eval(&self, args: &[bool]) -> Result<bool> {
        if args.len() != self.arity {
            return Err(usage(format!(
                "{} takes {} arguments, got {}",
                self.name,
                self.arity,
                args.len()
            )));
        }
        let mut m = 0usize;
        for (j, &a) in args.iter().enumerate() {
            if a {
                m |= 1 << j;
            }
        }
        Ok(self.bit(m))
    }

    /// True when the all-zero row satisfies the function.
    pub fn is_zero_valid(&self) -> bool {
        self.bit(0)
    }

    /// Applies an argument map, producing the restricted function by full
    /// table evaluation.
    pub fn restrict(&self, map: &ArgMap) -> Result<BoolFun> {
        map.validate_for(self.arity, true)?;
        let s = map.g_arity;
        let bits: Vec<bool> = (0..1usize << s)
            .map(|m| self.bit(map.source_index(m)))
            .collect();
        BoolFun::new(format!("{}{}", self.name, map), s, &bits)
    }

    pub fn impl2() -> BoolFun {
        BoolFun::from_table_str("IMPL", 2, "1011").expect("fixed table")
    }

    pub fn nand(d: usize) -> BoolFun {
        let bits: Vec<bool> = (0..1usize << d).map(|m| m != (1 << d) - 1).collect();
        BoolFun::new(format!("NAND{d}"), d, &bits).expect("fixed table")
    }

    pub fn or2() -> BoolFun {
        BoolFun::from_table_str("OR2", 2, "0111").expect("fixed table")
    }

    pub fn eq2() -> BoolFun {
        BoolFun::from_table_str("EQ2", 2, "1001").expect("fixed table")
    }
}

impl fmt::Debug for BoolFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}:{}", self.name, self.arity, self.table_string())
    }
}

/// One slot of an argument map: what a source argument is replaced by.
/// The derived ordering (ascending target argument, then Const0, then
/// Const1) is the tie-break order used by the restriction search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    /// Target argument index, 0-based.
    GArg(usize),
    Const0,
    Const1,
}

/// Maps each argument of a source function to a target argument or a
/// constant. Equivalently a partition of the source argument positions
/// into X_1..X_s (grouped by target argument), Z_0, and Z_1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ArgMap {
    g_arity: usize,
    slots: Vec<Slot>,
}

impl ArgMap {
    pub fn new(g_arity: usize, slots: Vec<Slot>) -> Self {
        ArgMap { g_arity, slots }
    }

    pub fn g_arity(&self) -> usize {
        self.g_arity
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    /// True when every target argument index appears in some slot.
    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.g_arity];
        for s in &self.slots {
            if let Slot::GArg(i) = s {
                if *i < self.g_arity {
                    seen[*i] = true;
                }
            }
        }
        seen.iter().all(|&b| b)
    }

    fn validate_for(&self, f_arity: usize, require_surjective: bool) -> Result<()> {
        if self.slots.len() != f_arity {
            return Err(usage(format!(
                "argument map has {} slots, function arity is {f_arity}",
                self.slots.len()
            )));
        }
        for s in &self.slots {
            if let Slot::GArg(i) = s {
                if *i >= self.g_arity {
                    return Err(usage(format!(
                        "argument map references target argument {} of {}",
                        i + 1,
                        self.g_arity
                    )));
                }
            }
        }
        if require_surjective && !self.is_surjective() {
            return Err(usage(
                "argument map leaves a target argument unused".to_string(),
            ));
        }
        Ok(())
    }

    /// Source table index induced by target row m.
    fn source_index(&self, m: usize) -> usize {
        let mut idx = 0usize;
        for (p, s) in self.slots.iter().enumerate() {
            let bit = match s {
                Slot::GArg(i) => m >> i & 1 == 1,
                Slot::Const0 => false,
                Slot::Const1 => true,
            };
            if bit {
                idx |= 1 << p;
            }
        }
        idx
    }
}

impl fmt::Display for ArgMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (p, s) in self.slots.iter().enumerate() {
            if p > 0 {
                write!(f, ",")?;
            }
            match s {
                Slot::GArg(i) => write!(f, "x{}", i + 1)?,
                Slot::Const0 => write!(f, "0")?,
                Slot::Const1 => write!(f, "1")?,
            }
        }
        write!(f, "]")
    }
}

/// Options for the exhaustive restriction search.
#[derive(Debug, Clone, Copy)]
pub struct SearchOpts {
    /// Permit Const1 slots. Off restricts the search to 0-restrictions.
    pub allow_const1: bool,
    /// Require every target argument to be used at least once.
    pub require_all_args: bool,
    /// Capacity guard on the source arity.
    pub max_arity: usize,
}

impl Default for SearchOpts {
    fn default() -> Self {
        SearchOpts {
            allow_const1: true,
            require_all_args: true,
            max_arity: MAX_ARITY,
        }
    }
}

/// Exhaustive search for an argument map with restrict(f, map) = g.
/// Returns the lexicographically first witness under the slot ordering
/// (ascending target argument, Const0, Const1), or None.
pub fn find_restriction(f: &BoolFun, g: &BoolFun, allow_const1: bool) -> Result<Option<ArgMap>> {
    find_restriction_with(
        f,
        g,
        SearchOpts {
            allow_const1,
            ..SearchOpts::default()
        },
    )
}

pub fn find_restriction_with(f: &BoolFun, g: &BoolFun, opts: SearchOpts) -> Result<Option<ArgMap>> {
    if g.arity > f.arity {
        return Err(usage(format!(
            "restriction target arity {} exceeds source arity {}",
            g.arity, f.arity
        )));
    }
    if f.arity > opts.max_arity {
        return Err(capacity(format!(
            "restriction search over arity {} exceeds the cap {}",
            f.arity, opts.max_arity
        )));
    }
    let mut search = RestrictionSearch {
        f,
        g,
        opts,
        slots: vec![Slot::Const0; f.arity],
    };
    Ok(search.dfs(0, 0))
}

struct RestrictionSearch<'a> {
    f: &'a BoolFun,
    g: &'a BoolFun,
    opts: SearchOpts,
    slots: Vec<Slot>,
}

impl RestrictionSearch<'_> {
    /// Assigns slots position by position in lexicographic order, so the
    /// first full match found is the lexicographically first witness.
    fn dfs(&mut self, pos: usize, used: u32) -> Option<ArgMap> {
        let r = self.f.arity;
        let s = self.g.arity;
        if pos == r {
            if self.opts.require_all_args && used.count_ones() as usize != s {
                return None;
            }
            if self.rows_match() {
                return Some(ArgMap::new(s, self.slots.clone()));
            }
            return None;
        }
        // Not enough positions left to cover the unused target arguments.
        if self.opts.require_all_args {
            let missing = s - used.count_ones() as usize;
            if missing > r - pos {
                return None;
            }
        }
        for i in 0..s {
            self.slots[pos] = Slot::GArg(i);
            if let Some(m) = self.dfs(pos + 1, used | 1 << i) {
                return Some(m);
            }
        }
        self.slots[pos] = Slot::Const0;
        if let Some(m) = self.dfs(pos + 1, used) {
            return Some(m);
        }
        if self.opts.allow_const1 {
            self.slots[pos] = Slot::Const1;
            if let Some(m) = self.dfs(pos + 1, used) {
                return Some(m);
            }
        }
        self.slots[pos] = Slot::Const0;
        None
    }

    fn rows_match(&self) -> bool {
        let s = self.g.arity;
        for m in 0..1usize << s {
            let mut idx = 0usize;
            for (p, slot) in self.slots.iter().enumerate() {
                let bit = match slot {
                    Slot::GArg(i) => m >> i & 1 == 1,
                    Slot::Const0 => false,
                    Slot::Const1 => true,
                };
                if bit {
                    idx |= 1 << p;
                }
            }
            if self.f.bit(idx) != self.g.bit(m) {
                return false;
            }
        }
        true
    }
}

/// An ordered, named, nonempty set of constraint functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintFamily {
    funs: Vec<BoolFun>,
    arity: usize,
}

impl ConstraintFamily {
    pub fn new(funs: Vec<BoolFun>) -> Result<Self> {
        if funs.is_empty() {
            return Err(usage("constraint family is empty".to_string()));
        }
        for (i, f) in funs.iter().enumerate() {
            if funs[..i].iter().any(|h| h.name == f.name) {
                return Err(usage(format!("duplicate function name {}", f.name)));
            }
        }
        let arity = funs.iter().map(|f| f.arity).max().unwrap_or(0);
        Ok(ConstraintFamily { funs, arity })
    }

    pub fn funs(&self) -> &[BoolFun] {
        &self.funs
    }

    /// Max arity over members.
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn by_name(&self, name: &str) -> Option<(usize, &BoolFun)> {
        self.funs
            .iter()
            .enumerate()
            .find(|(_, f)| f.name == name)
    }

    /// First member containing g as a restriction, with the witness map.
    pub fn represents(&self, g: &BoolFun) -> Result<Option<(usize, ArgMap)>> {
        for (i, f) in self.funs.iter().enumerate() {
            if g.arity > f.arity {
                continue;
            }
            if let Some(map) = find_restriction(f, g, true)? {
                return Ok(Some((i, map)));
            }
        }
        Ok(None)
    }

    /// Largest d >= 2 such that NAND_d is represented, 0 if none. The
    /// search is capped at the family arity since a restriction cannot
    /// raise arity.
    pub fn nand_order(&self) -> Result<usize> {
        for d in (2..=self.arity).rev() {
            if self.represents(&BoolFun::nand(d))?.is_some() {
                return Ok(d);
            }
        }
        Ok(0)
    }

    /// Four-regime classification with a replayable witness for the
    /// non-FPT regimes.
    pub fn classify(&self) -> Result<Regime> {
        if self.arity >= 3 {
            if let Some((member, map)) = self.represents(&BoolFun::nand(3))? {
                return Ok(Regime {
                    tag: RegimeTag::BruteForce,
                    evidence: Some(Evidence {
                        member,
                        map,
                        target: BoolFun::nand(3),
                    }),
                });
            }
        }
        if let Some((member, map)) = self.represents(&BoolFun::nand(2))? {
            return Ok(Regime {
                tag: RegimeTag::Clique,
                evidence: Some(Evidence {
                    member,
                    map,
                    target: BoolFun::nand(2),
                }),
            });
        }
        if let Some((member, map)) = self.represents(&BoolFun::impl2())? {
            return Ok(Regime {
                tag: RegimeTag::Subexponential,
                evidence: Some(Evidence {
                    member,
                    map,
                    target: BoolFun::impl2(),
                }),
            });
        }
        Ok(Regime {
            tag: RegimeTag::Fpt,
            evidence: None,
        })
    }

    /// Parses the family file format: '#' comments, blank lines, and
    /// `fun <name> <arity> <table>` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut funs = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = ln + 1;
            let body = strip_comment(raw);
            if body.is_empty() {
                continue;
            }
            let toks: Vec<&str> = body.split_whitespace().collect();
            if toks[0] != "fun" {
                return Err(parse_err(line, format!("expected 'fun', got '{}'", toks[0])));
            }
            if toks.len() != 4 {
                return Err(parse_err(line, "expected 'fun <name> <arity> <table>'"));
            }
            let arity: usize = toks[2]
                .parse()
                .map_err(|_| parse_err(line, format!("bad arity '{}'", toks[2])))?;
            let f = BoolFun::from_table_str(toks[1], arity, toks[3])
                .map_err(|e| parse_err(line, e.to_string()))?;
            funs.push(f);
        }
        let nlines = text.lines().count();
        ConstraintFamily::new(funs).map_err(|e| match e {
            Error::Usage(msg) => parse_err(nlines.max(1), msg),
            other => other,
        })
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for f in &self.funs {
            out.push_str(&format!(
                "fun {} {} {}\n",
                f.name,
                f.arity,
                f.table_string()
            ));
        }
        out
    }
}

pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => line[..i].trim(),
        None => line.trim(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegimeTag {
    Fpt,
    Subexponential,
    Clique,
    BruteForce,
}

impl fmt::Display for RegimeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RegimeTag::Fpt => "FPT",
            RegimeTag::Subexponential => "Subexponential",
            RegimeTag::Clique => "Clique",
            RegimeTag::BruteForce => "BruteForce",
        };
        f.write_str(s)
    }
}

/// Witness for a non-FPT classification: member index plus the map that
/// restricts it to the target.
#[derive(Debug, Clone)]
pub struct Evidence {
    pub member: usize,
    pub map: ArgMap,
    pub target: BoolFun,
}

#[derive(Debug, Clone)]
pub struct Regime {
    pub tag: RegimeTag,
    pub evidence: Option<Evidence>,
}

impl Regime {
    /// Replays the stored witness: restricting the named member by the
    /// stored map must reproduce the target table bit-exactly.
    pub fn replays(&self, family: &ConstraintFamily) -> bool {
        match &self.evidence {
            None => true,
            Some(e) => match family.funs().get(e.member) {
                None => false,
                Some(f) => f
                    .restrict(&e.map)
                    .map(|g| g.same_table(&e.target))
                    .unwrap_or(false),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dual_horn() -> BoolFun {
        // f(y1,y2,y3) = y1 => (y2 or y3)
        BoolFun::from_table_str("DHORN", 3, "10111111").unwrap()
    }

    #[test]
    fn eval_fixed_points() {
        let nand2 = BoolFun::nand(2);
        assert!(!nand2.eval(&[true, true]).unwrap());
        assert!(nand2.eval(&[true, false]).unwrap());
        let imp = BoolFun::impl2();
        assert!(!imp.eval(&[true, false]).unwrap());
        assert!(imp.eval(&[false, false]).unwrap());
        assert!(imp.eval(&[false, true]).unwrap());
    }

    #[test]
    fn eval_arity_mismatch_is_usage_error() {
        let imp = BoolFun::impl2();
        assert!(matches!(imp.eval(&[true]), Err(Error::Usage(_))));
    }

    #[test]
    fn table_strings() {
        assert_eq!(BoolFun::impl2().table_string(), "1011");
        assert_eq!(BoolFun::nand(2).table_string(), "1110");
        assert_eq!(BoolFun::eq2().table_string(), "1001");
        assert_eq!(BoolFun::nand(3).table_string(), "11111110");
    }

    #[test]
    fn restrict_dual_horn_to_impl() {
        let f = dual_horn();
        let map = ArgMap::new(2, vec![Slot::GArg(0), Slot::GArg(1), Slot::Const0]);
        let g = f.restrict(&map).unwrap();
        assert_eq!(g.table_string(), "1011");
    }

    #[test]
    fn restrict_nand3_to_nand2_via_const1() {
        let map = ArgMap::new(2, vec![Slot::GArg(0), Slot::GArg(1), Slot::Const1]);
        let g = BoolFun::nand(3).restrict(&map).unwrap();
        assert_eq!(g.table_string(), "1110");
    }

    #[test]
    fn restrict_identity() {
        let f = dual_horn();
        let map = ArgMap::new(3, vec![Slot::GArg(0), Slot::GArg(1), Slot::GArg(2)]);
        assert!(f.restrict(&map).unwrap().same_table(&f));
    }

    #[test]
    fn restrict_rejects_unused_target_arg() {
        let f = BoolFun::nand(2);
        let map = ArgMap::new(2, vec![Slot::GArg(0), Slot::GArg(0)]);
        assert!(matches!(f.restrict(&map), Err(Error::Usage(_))));
    }

    #[test]
    fn find_restriction_examples() {
        let f = dual_horn();
        assert!(find_restriction(&f, &BoolFun::impl2(), true)
            .unwrap()
            .is_some());
        assert!(find_restriction(&BoolFun::or2(), &BoolFun::nand(2), true)
            .unwrap()
            .is_none());
        let g = BoolFun::nand(2);
        let id = find_restriction(&g, &g, true).unwrap().unwrap();
        assert_eq!(id.slots(), &[Slot::GArg(0), Slot::GArg(1)]);
    }

    /// NAND3(x1,x1,x2) = NAND2(x1,x2), so the merge map is found even
    /// without Const1, and it is the lexicographically first witness.
    #[test]
    fn nand3_contains_nand2_as_zero_restriction() {
        let with_const1 = find_restriction(&BoolFun::nand(3), &BoolFun::nand(2), true)
            .unwrap()
            .unwrap();
        assert_eq!(
            with_const1.slots(),
            &[Slot::GArg(0), Slot::GArg(0), Slot::GArg(1)]
        );
        let zero_only = find_restriction(&BoolFun::nand(3), &BoolFun::nand(2), false)
            .unwrap()
            .unwrap();
        assert_eq!(zero_only, with_const1);
    }

    #[test]
    fn capacity_guard_fires_below_arity() {
        let f = BoolFun::nand(4);
        let err = find_restriction_with(
            &f,
            &BoolFun::nand(2),
            SearchOpts {
                max_arity: 3,
                ..SearchOpts::default()
            },
        );
        assert!(matches!(err, Err(Error::Capacity(_))));
    }

    #[test]
    fn represents_examples() {
        let f_impl = ConstraintFamily::new(vec![BoolFun::impl2()]).unwrap();
        assert!(f_impl.represents(&BoolFun::impl2()).unwrap().is_some());
        let f_eq = ConstraintFamily::new(vec![BoolFun::eq2()]).unwrap();
        assert!(f_eq.represents(&BoolFun::nand(2)).unwrap().is_none());
        let f_nand3 = ConstraintFamily::new(vec![BoolFun::nand(3)]).unwrap();
        assert!(f_nand3.represents(&BoolFun::nand(2)).unwrap().is_some());
    }

    #[test]
    fn classify_fixed_families() {
        let cases: Vec<(Vec<BoolFun>, RegimeTag)> = vec![
            (vec![BoolFun::impl2()], RegimeTag::Subexponential),
            (vec![BoolFun::nand(2)], RegimeTag::Clique),
            (vec![BoolFun::nand(3)], RegimeTag::BruteForce),
            (vec![BoolFun::or2()], RegimeTag::Fpt),
            (vec![BoolFun::eq2()], RegimeTag::Fpt),
            (vec![dual_horn()], RegimeTag::Subexponential),
        ];
        for (funs, want) in cases {
            let fam = ConstraintFamily::new(funs).unwrap();
            let regime = fam.classify().unwrap();
            assert_eq!(regime.tag, want, "family {:?}", fam.funs());
            assert!(regime.replays(&fam));
        }
    }

    #[test]
    fn nand_order_examples() {
        let f3 = ConstraintFamily::new(vec![BoolFun::nand(3)]).unwrap();
        assert_eq!(f3.nand_order().unwrap(), 3);
        let fi = ConstraintFamily::new(vec![BoolFun::impl2()]).unwrap();
        assert_eq!(fi.nand_order().unwrap(), 0);
        let f23 = ConstraintFamily::new(vec![BoolFun::nand(2), BoolFun::nand(3)]).unwrap();
        assert_eq!(f23.nand_order().unwrap(), 3);
    }

    #[test]
    fn zero_validity() {
        assert!(BoolFun::impl2().is_zero_valid());
        assert!(!BoolFun::or2().is_zero_valid());
        assert!(BoolFun::nand(3).is_zero_valid());
    }

    #[test]
    fn family_file_round_trip() {
        let text = "# two functions\nfun IMPL 2 1011\nfun NAND2 2 1110\n";
        let fam = ConstraintFamily::parse(text).unwrap();
        assert_eq!(fam.funs().len(), 2);
        assert_eq!(fam.arity(), 2);
        let out = fam.serialize();
        let back = ConstraintFamily::parse(&out).unwrap();
        assert_eq!(fam, back);
    }

    #[test]
    fn family_parse_errors_carry_line_numbers() {
        let e = ConstraintFamily::parse("fun A 2 1011\nfun B 2 10\n").unwrap_err();
        match e {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        let e = ConstraintFamily::parse("fun A 2 1011\nfun A 2 1110\n").unwrap_err();
        assert!(matches!(e, Error::Parse { .. }));
        assert!(ConstraintFamily::parse("# empty\n").is_err());
    }

    /// Applies an argument permutation to a function's table.
    fn permute_args(f: &BoolFun, perm: &[usize]) -> BoolFun {
        let r = f.arity();
        let bits: Vec<bool> = (0..1usize << r)
            .map(|m| {
                let mut src = 0usize;
                for (j, &pj) in perm.iter().enumerate() {
                    if m >> j & 1 == 1 {
                        src |= 1 << pj;
                    }
                }
                f.bit(src)
            })
            .collect();
        BoolFun::new(format!("{}p", f.name()), r, &bits).unwrap()
    }

    #[test]
    fn classify_invariant_under_permutations() {
        let perms3 = [
            [0usize, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        // A few structurally different ternary functions.
        for bits in [0b10111111u64, 0b11111110, 0b10010100, 0b11101010] {
            let f = BoolFun::from_bits("F", 3, bits).unwrap();
            let base = ConstraintFamily::new(vec![f.clone()])
                .unwrap()
                .classify()
                .unwrap()
                .tag;
            for perm in &perms3 {
                let fp = permute_args(&f, perm);
                let tag = ConstraintFamily::new(vec![fp])
                    .unwrap()
                    .classify()
                    .unwrap()
                    .tag;
                assert_eq!(tag, base, "bits {bits:08b} perm {perm:?}");
            }
        }
        // Member order does not matter either.
        let a = BoolFun::from_table_str("A", 2, "1011").unwrap();
        let b = BoolFun::from_table_str("B", 2, "1110").unwrap();
        let t1 = ConstraintFamily::new(vec![a.clone(), b.clone()])
            .unwrap()
            .classify()
            .unwrap()
            .tag;
        let t2 = ConstraintFamily::new(vec![b, a])
            .unwrap()
            .classify()
            .unwrap()
            .tag;
        assert_eq!(t1, t2);
    }
}
