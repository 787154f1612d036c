//! Shared plumbing for the command-line tools: the on-disk corpus
//! layout and the expectation-file format.
//!
//! A corpus directory holds one instance per stem: `<stem>.ewsat` with
//! the formula and target weight, `<stem>.fam` with the constraint
//! family, and `<stem>.expect` with the known outcome.

use ewsat::bits::BitSet;
use ewsat::gen::{self, CorpusEntry};
use std::fs;
use std::io;
use std::path::Path;

/// Formats an expectation: `yes <sorted 1-based variables>` or `no`.
pub fn format_expect(witness: Option<&BitSet>) -> String {
    match witness {
        Some(w) => {
            let mut line = String::from("yes");
            for v in w.iter_ones() {
                line.push_str(&format!(" {}", v + 1));
            }
            line.push('\n');
            line
        }
        None => "no\n".to_string(),
    }
}

/// Parses an expectation file against an n-variable instance.
pub fn parse_expect(text: &str, n: usize) -> Result<Option<BitSet>, String> {
    for raw in text.lines() {
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        return match toks[0] {
            "no" if toks.len() == 1 => Ok(None),
            "yes" => {
                let mut w = BitSet::new(n);
                for t in &toks[1..] {
                    let v: usize = t
                        .parse()
                        .map_err(|_| format!("bad variable '{t}'"))?;
                    if v == 0 || v > n {
                        return Err(format!("variable {v} outside 1..={n}"));
                    }
                    w.insert(v - 1);
                }
                Ok(Some(w))
            }
            other => Err(format!("expected 'yes' or 'no', got '{other}'")),
        };
    }
    Err("empty expectation file".to_string())
}

/// Writes the shipped corpus: a slice of each seeded pool, three files
/// per instance. Returns how many instances were written.
pub fn write_corpus(dir: &Path, seed: u64) -> io::Result<usize> {
    fs::create_dir_all(dir)?;
    let mut entries: Vec<CorpusEntry> = Vec::new();
    entries.extend(gen::corpus_nand2_avoiding_sat(seed).into_iter().take(40));
    entries.extend(gen::corpus_nand2_avoiding_unsat(seed).into_iter().take(10));
    entries.extend(gen::corpus_nand3_avoiding(seed).into_iter().take(30));
    for e in &entries {
        fs::write(dir.join(format!("{}.ewsat", e.name)), e.formula.serialize(e.k))?;
        fs::write(
            dir.join(format!("{}.fam", e.name)),
            e.formula.family().serialize(),
        )?;
        fs::write(
            dir.join(format!("{}.expect", e.name)),
            format_expect(e.witness.as_ref()),
        )?;
    }
    Ok(entries.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expect_round_trip() {
        let w = BitSet::from_indices(6, [1, 4]);
        let text = format_expect(Some(&w));
        assert_eq!(text, "yes 2 5\n");
        assert_eq!(parse_expect(&text, 6).unwrap(), Some(w));
        assert_eq!(parse_expect("no\n", 6).unwrap(), None);
        assert_eq!(parse_expect("# note\nyes\n", 3).unwrap(), Some(BitSet::new(3)));
        assert!(parse_expect("maybe\n", 6).is_err());
        assert!(parse_expect("yes 7\n", 6).is_err());
        assert!(parse_expect("", 6).is_err());
    }
}
