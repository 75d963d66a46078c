//! The line-oriented argument-file format.
//!
//! ```text
//! # comment
//! atoms typeI black
//! constraint P(typeI) = 0.6
//! constraint P(black | typeI) = 0.9
//! given typeI -> black          # structural: violating worlds get mass 0
//! observe black                 # conditioned on
//! query typeI
//! threshold 0.95
//! act hold { rain: -10 ; !rain: 10 }
//! support reading {
//!     constraint P(d | e) = 0.95
//!     observe e
//!     threshold 0.95
//!     concludes d
//! }
//! ```
//!
//! Numbers are decimals (parsed exactly as rationals) or `a/b`. The `atoms`
//! line comes first and appears once; `query` and `threshold` appear at
//! most once per document. Inside `constraint P(...)` the first `|` at
//! parenthesis depth zero separates target from condition, so a top-level
//! disjunction in the target needs parentheses.

use credence::logic::{parse_formula, Formula, WorldSpace};
use credence::rational::{parse_fraction, render_fraction, Fraction};
use credence::{Act, ProbStatement};
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct FileError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl FileError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> FileError {
        FileError {
            line,
            column,
            message: message.into(),
        }
    }
}

/// A nested argument justifying one categorical premise.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportBlock {
    pub name: String,
    pub constraints: Vec<ProbStatement>,
    pub given: Vec<Formula>,
    pub observe: Vec<Formula>,
    pub threshold: Option<Fraction>,
    pub concludes: Formula,
}

/// Parsed argument document.
#[derive(Debug, Clone, PartialEq)]
pub struct ArgumentFile {
    pub space: WorldSpace,
    pub constraints: Vec<ProbStatement>,
    pub given: Vec<Formula>,
    pub observe: Vec<Formula>,
    pub query: Option<Formula>,
    pub threshold: Option<Fraction>,
    pub acts: Vec<Act>,
    pub supports: Vec<SupportBlock>,
}

struct Line<'a> {
    number: usize,
    text: &'a str,
    /// Column (1-based) where the stripped text starts.
    indent: usize,
}

fn logical_lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let without_comment = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            let trimmed = without_comment.trim();
            if trimmed.is_empty() {
                return None;
            }
            let indent = without_comment.len() - without_comment.trim_start().len();
            Some(Line {
                number: i + 1,
                text: trimmed,
                indent: indent + 1,
            })
        })
        .collect()
}

pub fn parse_argument_file(text: &str, atom_cap: usize) -> Result<ArgumentFile, FileError> {
    let lines = logical_lines(text);
    let mut iter = lines.iter().peekable();

    let first = iter
        .next()
        .ok_or_else(|| FileError::new(1, 1, "empty file: expected an `atoms` line"))?;
    let Some(rest) = first.text.strip_prefix("atoms") else {
        return Err(FileError::new(
            first.number,
            first.indent,
            "the first directive must be `atoms`",
        ));
    };
    let names: Vec<&str> = rest.split_whitespace().collect();
    if names.is_empty() {
        return Err(FileError::new(
            first.number,
            first.indent,
            "`atoms` needs at least one name",
        ));
    }
    let space = WorldSpace::with_cap(&names, atom_cap)
        .map_err(|e| FileError::new(first.number, first.indent, e.to_string()))?;

    let mut file = ArgumentFile {
        space: space.clone(),
        constraints: Vec::new(),
        given: Vec::new(),
        observe: Vec::new(),
        query: None,
        threshold: None,
        acts: Vec::new(),
        supports: Vec::new(),
    };

    while let Some(line) = iter.next() {
        let (keyword, rest) = split_keyword(line.text);
        match keyword {
            "atoms" => {
                return Err(FileError::new(
                    line.number,
                    line.indent,
                    "duplicate `atoms` section",
                ));
            }
            "constraint" => file
                .constraints
                .push(parse_constraint(line, rest, &space)?),
            "given" => file.given.push(parse_line_formula(line, rest, &space)?),
            "observe" => file.observe.push(parse_line_formula(line, rest, &space)?),
            "query" => {
                if file.query.is_some() {
                    return Err(FileError::new(
                        line.number,
                        line.indent,
                        "duplicate `query` line",
                    ));
                }
                file.query = Some(parse_line_formula(line, rest, &space)?);
            }
            "threshold" => {
                if file.threshold.is_some() {
                    return Err(FileError::new(
                        line.number,
                        line.indent,
                        "duplicate `threshold` line",
                    ));
                }
                file.threshold = Some(parse_number(line, rest)?);
            }
            "act" => file.acts.push(parse_act(line, rest, &space)?),
            "support" => {
                let block = parse_support(line, rest, &mut iter, &space)?;
                if file.supports.iter().any(|s| s.name == block.name) {
                    return Err(FileError::new(
                        line.number,
                        line.indent,
                        format!("duplicate support name `{}`", block.name),
                    ));
                }
                file.supports.push(block);
            }
            other => {
                return Err(FileError::new(
                    line.number,
                    line.indent,
                    format!("unknown directive `{other}`"),
                ));
            }
        }
    }

    Ok(file)
}

fn split_keyword(text: &str) -> (&str, &str) {
    match text.find(char::is_whitespace) {
        Some(pos) => (&text[..pos], text[pos..].trim_start()),
        None => (text, ""),
    }
}

fn formula_at(line: &Line<'_>, text: &str, space: &WorldSpace) -> Result<Formula, FileError> {
    use credence::logic::ParseErrorKind;
    parse_formula(text, space).map_err(|e| {
        // Best-effort column: offset within the fragment plus where the
        // fragment sits in the line.
        let base = line.text.find(text.trim()).unwrap_or(0);
        let message = match &e.kind {
            ParseErrorKind::Syntax { expected, found } => {
                format!("syntax error: expected {expected}, found {found}")
            }
            ParseErrorKind::UnknownAtom { name } => format!("unknown atom `{name}`"),
        };
        FileError::new(line.number, line.indent + base + e.offset, message)
    })
}

fn parse_line_formula(
    line: &Line<'_>,
    rest: &str,
    space: &WorldSpace,
) -> Result<Formula, FileError> {
    if rest.is_empty() {
        return Err(FileError::new(
            line.number,
            line.indent,
            "expected a formula",
        ));
    }
    formula_at(line, rest, space)
}

fn parse_number(line: &Line<'_>, rest: &str) -> Result<Fraction, FileError> {
    parse_fraction(rest).map_err(|e| FileError::new(line.number, line.indent, e.to_string()))
}

/// `P(<target> [| <condition>]) (= x | >= x | <= x | in [x, y])`
fn parse_constraint(
    line: &Line<'_>,
    rest: &str,
    space: &WorldSpace,
) -> Result<ProbStatement, FileError> {
    let err = |msg: &str| FileError::new(line.number, line.indent, msg.to_string());
    let rest = rest.trim_start();
    let Some(after_p) = rest.strip_prefix("P(").or_else(|| rest.strip_prefix("P (")) else {
        return Err(err("expected `P(...)`"));
    };
    let close = matching_paren(after_p).ok_or_else(|| err("unbalanced parentheses in `P(...)`"))?;
    let inside = &after_p[..close];
    let bound_text = after_p[close + 1..].trim();

    let (target_text, condition_text) = match top_level_bar(inside) {
        Some(pos) => (&inside[..pos], Some(&inside[pos + 1..])),
        None => (inside, None),
    };
    let target = formula_at(line, target_text.trim(), space)?;
    let condition = condition_text
        .map(|t| formula_at(line, t.trim(), space))
        .transpose()?;

    let (lower, upper) = parse_bound(line, bound_text)?;
    ProbStatement::new(target, condition, lower, upper)
        .map_err(|e| FileError::new(line.number, line.indent, e.to_string()))
}

fn parse_bound(line: &Line<'_>, text: &str) -> Result<(Fraction, Fraction), FileError> {
    let err = |msg: &str| FileError::new(line.number, line.indent, msg.to_string());
    if let Some(rest) = text.strip_prefix(">=") {
        let value = parse_number(line, rest.trim())?;
        Ok((value, Fraction::one()))
    } else if let Some(rest) = text.strip_prefix("<=") {
        let value = parse_number(line, rest.trim())?;
        Ok((Fraction::zero(), value))
    } else if let Some(rest) = text.strip_prefix('=') {
        let value = parse_number(line, rest.trim())?;
        Ok((value.clone(), value))
    } else if let Some(rest) = text.strip_prefix("in") {
        let rest = rest.trim();
        let inner = rest
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| err("`in` bound needs the form `in [x, y]`"))?;
        let (lo, hi) = inner
            .split_once(',')
            .ok_or_else(|| err("`in [x, y]` needs two comma-separated numbers"))?;
        Ok((parse_number(line, lo.trim())?, parse_number(line, hi.trim())?))
    } else {
        Err(err("expected `= x`, `>= x`, `<= x` or `in [x, y]`"))
    }
}

/// Index of the closing parenthesis matching an already-consumed `(`.
fn matching_paren(text: &str) -> Option<usize> {
    let mut depth = 0usize;
    for (i, b) in text.bytes().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => {
                if depth == 0 {
                    return Some(i);
                }
                depth -= 1;
            }
            _ => {}
        }
    }
    None
}

/// First `|` at parenthesis depth zero: the conditional separator.
fn top_level_bar(text: &str) -> Option<usize> {
    let mut depth = 0usize;
    for (i, b) in text.bytes().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth = depth.saturating_sub(1),
            b'|' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

/// `act <ident> { <formula>: <number> ; ... }` on one line.
fn parse_act(line: &Line<'_>, rest: &str, space: &WorldSpace) -> Result<Act, FileError> {
    let err = |msg: &str| FileError::new(line.number, line.indent, msg.to_string());
    let (name, body) = split_keyword(rest);
    if name.is_empty() {
        return Err(err("`act` needs a name"));
    }
    let body = body
        .strip_prefix('{')
        .and_then(|b| b.strip_suffix('}'))
        .ok_or_else(|| err("`act` clauses must be wrapped in `{ ... }`"))?;
    let mut clauses = Vec::new();
    for clause in body.split(';') {
        let clause = clause.trim();
        if clause.is_empty() {
            continue;
        }
        let (formula_text, utility_text) = clause
            .rsplit_once(':')
            .ok_or_else(|| err("act clause needs the form `<formula>: <number>`"))?;
        let formula = formula_at(line, formula_text.trim(), space)?;
        let utility = parse_number(line, utility_text.trim())?;
        clauses.push((formula, utility));
    }
    if clauses.is_empty() {
        return Err(err("`act` needs at least one clause"));
    }
    Ok(Act::new(name, clauses))
}

fn parse_support<'a, I>(
    opening: &Line<'_>,
    rest: &str,
    iter: &mut std::iter::Peekable<I>,
    space: &WorldSpace,
) -> Result<SupportBlock, FileError>
where
    I: Iterator<Item = &'a Line<'a>>,
{
    let err_open = |msg: &str| FileError::new(opening.number, opening.indent, msg.to_string());
    let (name, brace) = split_keyword(rest);
    if name.is_empty() {
        return Err(err_open("`support` needs a name"));
    }
    if brace.trim() != "{" {
        return Err(err_open("`support <name> {` must end with an opening brace"));
    }

    let mut constraints = Vec::new();
    let mut given = Vec::new();
    let mut observe = Vec::new();
    let mut threshold: Option<Fraction> = None;
    let mut concludes: Option<Formula> = None;

    loop {
        let Some(line) = iter.next() else {
            return Err(err_open("unterminated `support` block"));
        };
        if line.text == "}" {
            break;
        }
        let (keyword, rest) = split_keyword(line.text);
        match keyword {
            "constraint" => constraints.push(parse_constraint(line, rest, space)?),
            "given" => given.push(parse_line_formula(line, rest, space)?),
            "observe" => observe.push(parse_line_formula(line, rest, space)?),
            "threshold" => {
                if threshold.is_some() {
                    return Err(FileError::new(
                        line.number,
                        line.indent,
                        "duplicate `threshold` in support block",
                    ));
                }
                threshold = Some(parse_number(line, rest)?);
            }
            "concludes" => {
                if concludes.is_some() {
                    return Err(FileError::new(
                        line.number,
                        line.indent,
                        "duplicate `concludes` in support block",
                    ));
                }
                concludes = Some(parse_line_formula(line, rest, space)?);
            }
            other => {
                return Err(FileError::new(
                    line.number,
                    line.indent,
                    format!("unknown directive `{other}` in support block"),
                ));
            }
        }
    }

    let concludes = concludes.ok_or_else(|| err_open("support block needs a `concludes` line"))?;
    Ok(SupportBlock {
        name: name.to_string(),
        constraints,
        given,
        observe,
        threshold,
        concludes,
    })
}

fn render_bound(lower: &Fraction, upper: &Fraction) -> String {
    if lower == upper {
        format!("= {}", render_fraction(lower))
    } else if lower.is_zero() && !upper.is_one() {
        format!("<= {}", render_fraction(upper))
    } else if upper.is_one() && !lower.is_zero() {
        format!(">= {}", render_fraction(lower))
    } else {
        format!(
            "in [{}, {}]",
            render_fraction(lower),
            render_fraction(upper)
        )
    }
}

fn render_constraint(statement: &ProbStatement, space: &WorldSpace) -> String {
    let inside = match statement.condition() {
        Some(c) => format!(
            "{} | {}",
            statement.target().render(space),
            c.render(space)
        ),
        None => statement.target().render(space),
    };
    format!(
        "constraint P({inside}) {}",
        render_bound(statement.lower_bound(), statement.upper_bound())
    )
}

/// Canonical rendering; re-parsing yields an identical [`ArgumentFile`].
pub fn render_argument_file(file: &ArgumentFile) -> String {
    let space = &file.space;
    let mut out = String::new();
    let atom_names: Vec<&str> = space.atoms().iter().map(|a| a.name()).collect();
    out.push_str(&format!("atoms {}\n", atom_names.join(" ")));
    for statement in &file.constraints {
        out.push_str(&render_constraint(statement, space));
        out.push('\n');
    }
    for f in &file.given {
        out.push_str(&format!("given {}\n", f.render(space)));
    }
    for f in &file.observe {
        out.push_str(&format!("observe {}\n", f.render(space)));
    }
    if let Some(query) = &file.query {
        out.push_str(&format!("query {}\n", query.render(space)));
    }
    if let Some(threshold) = &file.threshold {
        out.push_str(&format!("threshold {}\n", render_fraction(threshold)));
    }
    for act in &file.acts {
        let clauses: Vec<String> = act
            .clauses()
            .iter()
            .map(|(f, u)| format!("{}: {}", f.render(space), render_fraction(u)))
            .collect();
        out.push_str(&format!("act {} {{ {} }}\n", act.name(), clauses.join(" ; ")));
    }
    for support in &file.supports {
        out.push_str(&format!("support {} {{\n", support.name));
        for statement in &support.constraints {
            out.push_str("    ");
            out.push_str(&render_constraint(statement, space));
            out.push('\n');
        }
        for f in &support.given {
            out.push_str(&format!("    given {}\n", f.render(space)));
        }
        for f in &support.observe {
            out.push_str(&format!("    observe {}\n", f.render(space)));
        }
        if let Some(threshold) = &support.threshold {
            out.push_str(&format!("    threshold {}\n", render_fraction(threshold)));
        }
        out.push_str(&format!("    concludes {}\n", support.concludes.render(space)));
        out.push_str("}\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use credence::rational::frac;
    use credence::DEFAULT_ATOM_CAP;

    fn parse(text: &str) -> Result<ArgumentFile, FileError> {
        parse_argument_file(text, DEFAULT_ATOM_CAP)
    }

    #[test]
    fn minimal_file_parses() {
        let file = parse("atoms a\nconstraint P(a) = 0.5\nquery a\n").unwrap();
        assert_eq!(file.space.atom_count(), 1);
        assert_eq!(file.constraints.len(), 1);
        assert!(file.query.is_some());
    }

    #[test]
    fn duplicate_query_is_rejected() {
        let err = parse("atoms a\nquery a\nquery a\n").unwrap_err();
        assert_eq!(err.line, 3);
        assert!(err.message.contains("duplicate `query`"));
    }

    #[test]
    fn conditional_constraint_parses() {
        let file = parse("atoms typeI black\nconstraint P(black | typeI) = 0.9\nquery typeI\n")
            .unwrap();
        let statement = &file.constraints[0];
        assert!(statement.condition().is_some());
        assert_eq!(*statement.lower_bound(), frac(9, 10));
    }

    #[test]
    fn bounds_forms() {
        let file = parse(
            "atoms a\n\
             constraint P(a) >= 0.2\n\
             constraint P(a) <= 0.8\n\
             constraint P(a) in [0.3, 0.4]\n",
        )
        .unwrap();
        assert_eq!(*file.constraints[0].lower_bound(), frac(1, 5));
        assert_eq!(*file.constraints[0].upper_bound(), frac(1, 1));
        assert_eq!(*file.constraints[1].upper_bound(), frac(4, 5));
        assert_eq!(*file.constraints[2].lower_bound(), frac(3, 10));
    }

    #[test]
    fn acts_and_supports_parse() {
        let text = "\
atoms c d e
constraint P(c | d) = 0.9
observe d
query c
act hold { d: -10 ; !d: 10 }
support reading {
    constraint P(d | e) = 0.95
    observe e
    threshold 0.95
    concludes d
}
";
        let file = parse(text).unwrap();
        assert_eq!(file.acts.len(), 1);
        assert_eq!(file.acts[0].clauses().len(), 2);
        assert_eq!(file.supports.len(), 1);
        assert_eq!(file.supports[0].name, "reading");
        assert_eq!(file.supports[0].threshold, Some(frac(19, 20)));
    }

    #[test]
    fn errors_carry_line_and_column() {
        let err = parse("atoms a\nquery a &\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.column > 1);

        let err = parse("atoms a\nwobble a\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("unknown directive"));
    }

    #[test]
    fn atoms_must_come_first_and_once() {
        assert!(parse("query a\natoms a\n").unwrap_err().message.contains("atoms"));
        assert!(parse("atoms a\natoms b\n")
            .unwrap_err()
            .message
            .contains("duplicate `atoms`"));
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let file = parse("# header\natoms a b # trailing\n\nquery a & b\n").unwrap();
        assert_eq!(file.space.atom_count(), 2);
    }

    #[test]
    fn round_trip_is_identity() {
        let text = "\
atoms rain wet disaster
constraint P(rain) in [0.2, 0.3]
constraint P(wet | rain) >= 0.9
given rain -> wet
observe wet
query disaster | wet
threshold 19/20
act hold { rain: -10 ; !rain: 10 }
act cancel { true: 0 }
support src {
    constraint P(disaster) <= 0.4
    given wet -> rain
    observe rain
    threshold 0.8
    concludes wet
}
";
        let parsed = parse(text).unwrap();
        let rendered = render_argument_file(&parsed);
        let reparsed = parse(&rendered).unwrap();
        assert_eq!(parsed, reparsed);
        // Rendering is a fixed point after one normalization pass.
        assert_eq!(rendered, render_argument_file(&reparsed));
    }
}
