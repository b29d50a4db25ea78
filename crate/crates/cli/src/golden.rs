//! The golden corpus: commands paired with their exact output.
//!
//! ```text
//! # optional comment lines
//! $ factor "2*z^2 - 6*z^3"
//! unit=2 order=2 neg={} pos={1: 3}
//! [exit 0]
//! ```
//!
//! Cases are separated by a blank line. Rendering a corpus from its commands
//! must reproduce it byte for byte.

use crate::run;

pub const CORPUS: &str = include_str!("../golden/corpus.txt");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case {
    pub comments: Vec<String>,
    pub command: String,
}

/// The cases of a corpus, outputs ignored.
pub fn cases(corpus: &str) -> Vec<Case> {
    let mut out = Vec::new();
    let mut comments = Vec::new();
    for line in corpus.lines() {
        if line.starts_with('#') {
            comments.push(line.to_string());
        } else if let Some(cmd) = line.strip_prefix("$ ") {
            out.push(Case {
                comments: std::mem::take(&mut comments),
                command: cmd.to_string(),
            });
        }
    }
    out
}

pub fn render_case(case: &Case) -> Result<String, String> {
    let args = shlex::split(&case.command).ok_or_else(|| format!("unbalanced quotes in {:?}", case.command))?;
    let outcome = run(args);
    let mut s = String::new();
    for c in &case.comments {
        s.push_str(c);
        s.push('\n');
    }
    s.push_str(&format!("$ {}\n{}", case.command, outcome.output));
    if !outcome.output.is_empty() && !outcome.output.ends_with('\n') {
        s.push('\n');
    }
    s.push_str(&format!("[exit {}]\n", outcome.code));
    Ok(s)
}

pub fn render(cases: &[Case]) -> Result<String, String> {
    let blocks = cases.iter().map(render_case).collect::<Result<Vec<_>, _>>()?;
    Ok(blocks.join("\n"))
}

/// Number of cases when the corpus reproduces exactly; the first mismatch
/// otherwise.
pub fn check(corpus: &str) -> Result<usize, String> {
    let cases = cases(corpus);
    let blocks: Vec<&str> = corpus.split("\n\n").collect();
    if blocks.len() != cases.len() {
        return Err(format!("{} blocks but {} commands", blocks.len(), cases.len()));
    }
    for (case, expected) in cases.iter().zip(&blocks) {
        let got = render_case(case)?;
        let expected = format!("{}\n", expected.trim_end_matches('\n'));
        if got != expected {
            return Err(format!("golden mismatch for `{}`:\n--- expected\n{expected}--- got\n{got}", case.command));
        }
    }
    if render(&cases)? != corpus {
        return Err("corpus layout differs from its rendering".into());
    }
    Ok(cases.len())
}
