//! Finite propositional world algebra.
//!
//! A [`WorldSpace`] fixes an ordered vocabulary of atoms; a *world* is one
//! truth assignment, indexed so that atom `i` contributes bit `i` of the
//! world index. [`Formula`]s are classical propositional sentences over the
//! vocabulary and [`models`] maps them to bitset [`WorldSet`]s. Everything
//! here is immutable and pure.

use std::fmt;

use thiserror::Error;

/// Default cap on the number of atoms per space (65,536 worlds). Exact
/// solving is exponential in atoms; the cap keeps that explicit.
pub const DEFAULT_ATOM_CAP: usize = 16;

/// A named proposition. Names follow `[A-Za-z_][A-Za-z0-9_]*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    name: String,
}

impl Atom {
    pub fn name(&self) -> &str {
        &self.name
    }
}

/// Index of an atom within its [`WorldSpace`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("invalid atom name `{0}`")]
    InvalidName(String),
    #[error("duplicate atom name `{0}`")]
    DuplicateName(String),
    #[error("{requested} atoms exceed the cap of {cap}")]
    CapExceeded { requested: usize, cap: usize },
}

fn valid_identifier(name: &str) -> bool {
    let mut bytes = name.bytes();
    match bytes.next() {
        Some(b) if b.is_ascii_alphabetic() || b == b'_' => {}
        _ => return false,
    }
    bytes.all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

/// Ordered atom vocabulary; the carrier of `2^n` worlds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorldSpace {
    atoms: Vec<Atom>,
}

impl WorldSpace {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self, SpaceError> {
        Self::with_cap(names, DEFAULT_ATOM_CAP)
    }

    pub fn with_cap<S: AsRef<str>>(names: &[S], cap: usize) -> Result<Self, SpaceError> {
        if names.len() > cap {
            return Err(SpaceError::CapExceeded {
                requested: names.len(),
                cap,
            });
        }
        let mut atoms = Vec::with_capacity(names.len());
        for name in names {
            let name = name.as_ref();
            if !valid_identifier(name) {
                return Err(SpaceError::InvalidName(name.to_string()));
            }
            if atoms.iter().any(|a: &Atom| a.name == name) {
                return Err(SpaceError::DuplicateName(name.to_string()));
            }
            atoms.push(Atom {
                name: name.to_string(),
            });
        }
        Ok(WorldSpace { atoms })
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn world_count(&self) -> usize {
        1usize << self.atoms.len()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn atom(&self, name: &str) -> Option<AtomId> {
        self.atoms.iter().position(|a| a.name == name).map(AtomId)
    }

    pub fn atom_name(&self, id: AtomId) -> &str {
        &self.atoms[id.0].name
    }

    /// Whether atom `id` is true in world `world`.
    pub fn world_satisfies(&self, world: usize, id: AtomId) -> bool {
        (world >> id.0) & 1 == 1
    }

    /// Renders a world as its minterm, e.g. `rain & !wet`.
    pub fn world_minterm(&self, world: usize) -> String {
        if self.atoms.is_empty() {
            return "true".to_string();
        }
        let mut parts = Vec::with_capacity(self.atoms.len());
        for (i, atom) in self.atoms.iter().enumerate() {
            if self.world_satisfies(world, AtomId(i)) {
                parts.push(atom.name.clone());
            } else {
                parts.push(format!("!{}", atom.name));
            }
        }
        parts.join(" & ")
    }
}

/// Builds a [`WorldSpace`] from atom names with the default cap.
pub fn world_space<S: AsRef<str>>(names: &[S]) -> Result<WorldSpace, SpaceError> {
    WorldSpace::new(names)
}

/// Classical propositional formula over a [`WorldSpace`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(AtomId),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(id: AtomId) -> Formula {
        Formula::Atom(id)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    /// Left-folded conjunction; `true` for an empty list.
    pub fn conjoin_all<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
        let mut iter = items.into_iter();
        match iter.next() {
            None => Formula::True,
            Some(first) => iter.fold(first, Formula::and),
        }
    }

    /// Checks every referenced atom exists in `space`.
    pub fn well_formed(&self, space: &WorldSpace) -> bool {
        match self {
            Formula::True | Formula::False => true,
            Formula::Atom(id) => id.0 < space.atom_count(),
            Formula::Not(f) => f.well_formed(space),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.well_formed(space) && b.well_formed(space)
            }
        }
    }

    /// Canonical rendering that re-parses to a structurally equal formula.
    pub fn render(&self, space: &WorldSpace) -> String {
        let mut out = String::new();
        self.render_prec(space, 1, &mut out);
        out
    }

    // Precedence levels: -> is 1 (right associative), | is 2, & is 3, ! is 4.
    fn render_prec(&self, space: &WorldSpace, min_prec: u8, out: &mut String) {
        let prec = match self {
            Formula::Implies(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            _ => 4,
        };
        let parens = prec < min_prec;
        if parens {
            out.push('(');
        }
        match self {
            Formula::True => out.push_str("true"),
            Formula::False => out.push_str("false"),
            Formula::Atom(id) => out.push_str(space.atom_name(*id)),
            Formula::Not(f) => {
                out.push('!');
                f.render_prec(space, 4, out);
            }
            Formula::And(a, b) => {
                a.render_prec(space, 3, out);
                out.push_str(" & ");
                b.render_prec(space, 4, out);
            }
            Formula::Or(a, b) => {
                a.render_prec(space, 2, out);
                out.push_str(" | ");
                b.render_prec(space, 3, out);
            }
            Formula::Implies(a, b) => {
                a.render_prec(space, 2, out);
                out.push_str(" -> ");
                b.render_prec(space, 1, out);
            }
        }
        if parens {
            out.push(')');
        }
    }
}

/// Bitset over the worlds of a space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WorldSet {
    bits: Vec<u64>,
    world_count: usize,
}

impl WorldSet {
    pub fn empty(space: &WorldSpace) -> WorldSet {
        let n = space.world_count();
        WorldSet {
            bits: vec![0; n.div_ceil(64)],
            world_count: n,
        }
    }

    pub fn full(space: &WorldSpace) -> WorldSet {
        let mut set = WorldSet::empty(space);
        for (i, word) in set.bits.iter_mut().enumerate() {
            *word = Self::tail_mask(set.world_count, i);
        }
        set
    }

    /// Worlds where atom `id` holds: bit patterns with period `2^(id+1)`.
    pub fn atom_mask(space: &WorldSpace, id: AtomId) -> WorldSet {
        let mut set = WorldSet::empty(space);
        for w in 0..set.world_count {
            if (w >> id.0) & 1 == 1 {
                set.bits[w / 64] |= 1u64 << (w % 64);
            }
        }
        set
    }

    fn tail_mask(world_count: usize, word_index: usize) -> u64 {
        let full_words = world_count / 64;
        if word_index < full_words {
            u64::MAX
        } else {
            let rem = world_count % 64;
            if rem == 0 {
                0
            } else {
                (1u64 << rem) - 1
            }
        }
    }

    pub fn world_count(&self) -> usize {
        self.world_count
    }

    pub fn contains(&self, world: usize) -> bool {
        debug_assert!(world < self.world_count);
        (self.bits[world / 64] >> (world % 64)) & 1 == 1
    }

    pub fn insert(&mut self, world: usize) {
        debug_assert!(world < self.world_count);
        self.bits[world / 64] |= 1u64 << (world % 64);
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|w| *w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.world_count
    }

    pub fn intersect(&self, other: &WorldSet) -> WorldSet {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn union(&self, other: &WorldSet) -> WorldSet {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn complement(&self) -> WorldSet {
        let mut out = self.clone();
        for (i, word) in out.bits.iter_mut().enumerate() {
            *word = !*word & Self::tail_mask(self.world_count, i);
        }
        out
    }

    pub fn is_subset_of(&self, other: &WorldSet) -> bool {
        self.bits
            .iter()
            .zip(&other.bits)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn iter_worlds(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.world_count).filter(move |w| self.contains(*w))
    }

    fn zip_with(&self, other: &WorldSet, f: impl Fn(u64, u64) -> u64) -> WorldSet {
        assert_eq!(self.world_count, other.world_count, "mismatched spaces");
        WorldSet {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| f(*a, *b))
                .collect(),
            world_count: self.world_count,
        }
    }
}

/// The set of worlds satisfying `f` under classical truth tables.
pub fn models(f: &Formula, space: &WorldSpace) -> WorldSet {
    match f {
        Formula::True => WorldSet::full(space),
        Formula::False => WorldSet::empty(space),
        Formula::Atom(id) => WorldSet::atom_mask(space, *id),
        Formula::Not(g) => models(g, space).complement(),
        Formula::And(a, b) => models(a, space).intersect(&models(b, space)),
        Formula::Or(a, b) => models(a, space).union(&models(b, space)),
        Formula::Implies(a, b) => models(a, space).complement().union(&models(b, space)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax { expected: String, found: String },
    UnknownAtom { name: String },
}

/// Formula parse failure with the byte offset of the offending token.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Syntax { expected, found } => write!(
                f,
                "syntax error at column {}: expected {expected}, found {found}",
                self.offset + 1
            ),
            ParseErrorKind::UnknownAtom { name } => {
                write!(f, "unknown atom `{name}` at column {}", self.offset + 1)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Bang,
    Amp,
    Pipe,
    Arrow,
    LParen,
    RParen,
    End,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Ident(name) => format!("`{name}`"),
            Token::Bang => "`!`".into(),
            Token::Amp => "`&`".into(),
            Token::Pipe => "`|`".into(),
            Token::Arrow => "`->`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::End => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            text: text.as_bytes(),
            pos: 0,
        }
    }

    fn next_token(&mut self) -> Result<(usize, Token), ParseError> {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        if self.pos >= self.text.len() {
            return Ok((start, Token::End));
        }
        let b = self.text[self.pos];
        let token = match b {
            b'!' => {
                self.pos += 1;
                Token::Bang
            }
            b'&' => {
                self.pos += 1;
                Token::Amp
            }
            b'|' => {
                self.pos += 1;
                Token::Pipe
            }
            b'(' => {
                self.pos += 1;
                Token::LParen
            }
            b')' => {
                self.pos += 1;
                Token::RParen
            }
            b'-' => {
                if self.pos + 1 < self.text.len() && self.text[self.pos + 1] == b'>' {
                    self.pos += 2;
                    Token::Arrow
                } else {
                    return Err(ParseError {
                        offset: start,
                        kind: ParseErrorKind::Syntax {
                            expected: "`->`".into(),
                            found: "`-`".into(),
                        },
                    });
                }
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut end = self.pos + 1;
                while end < self.text.len()
                    && (self.text[end].is_ascii_alphanumeric() || self.text[end] == b'_')
                {
                    end += 1;
                }
                let name = std::str::from_utf8(&self.text[self.pos..end])
                    .expect("ascii")
                    .to_string();
                self.pos = end;
                Token::Ident(name)
            }
            other => {
                return Err(ParseError {
                    offset: start,
                    kind: ParseErrorKind::Syntax {
                        expected: "a formula token".into(),
                        found: format!("`{}`", other as char),
                    },
                });
            }
        };
        Ok((start, token))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    space: &'a WorldSpace,
    lookahead: (usize, Token),
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, space: &'a WorldSpace) -> Result<Self, ParseError> {
        let mut lexer = Lexer::new(text);
        let lookahead = lexer.next_token()?;
        Ok(Parser {
            lexer,
            space,
            lookahead,
        })
    }

    fn advance(&mut self) -> Result<(usize, Token), ParseError> {
        let next = self.lexer.next_token()?;
        Ok(std::mem::replace(&mut self.lookahead, next))
    }

    fn expect(&mut self, token: Token) -> Result<(), ParseError> {
        if self.lookahead.1 == token {
            self.advance()?;
            Ok(())
        } else {
            Err(self.unexpected(&token.describe()))
        }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        ParseError {
            offset: self.lookahead.0,
            kind: ParseErrorKind::Syntax {
                expected: expected.to_string(),
                found: self.lookahead.1.describe(),
            },
        }
    }

    // formula := impl ; impl := or ("->" impl)?
    fn implication(&mut self) -> Result<Formula, ParseError> {
        let left = self.disjunction()?;
        if self.lookahead.1 == Token::Arrow {
            self.advance()?;
            let right = self.implication()?;
            Ok(Formula::implies(left, right))
        } else {
            Ok(left)
        }
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.conjunction()?;
        while self.lookahead.1 == Token::Pipe {
            self.advance()?;
            let right = self.conjunction()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.negation()?;
        while self.lookahead.1 == Token::Amp {
            self.advance()?;
            let right = self.negation()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn negation(&mut self) -> Result<Formula, ParseError> {
        match self.lookahead.1.clone() {
            Token::Bang => {
                self.advance()?;
                Ok(Formula::not(self.negation()?))
            }
            Token::LParen => {
                self.advance()?;
                let inner = self.implication()?;
                self.expect(Token::RParen)?;
                Ok(inner)
            }
            Token::Ident(name) => {
                let (offset, _) = self.advance()?;
                match name.as_str() {
                    "true" => Ok(Formula::True),
                    "false" => Ok(Formula::False),
                    _ => match self.space.atom(&name) {
                        Some(id) => Ok(Formula::Atom(id)),
                        None => Err(ParseError {
                            offset,
                            kind: ParseErrorKind::UnknownAtom { name },
                        }),
                    },
                }
            }
            _ => Err(self.unexpected("`!`, `(`, `true`, `false` or an atom")),
        }
    }
}

/// Parses a formula under precedence `! > & > | > ->`, with `->`
/// right-associative.
pub fn parse_formula(text: &str, space: &WorldSpace) -> Result<Formula, ParseError> {
    let mut parser = Parser::new(text, space)?;
    let formula = parser.implication()?;
    if parser.lookahead.1 != Token::End {
        return Err(parser.unexpected("end of input"));
    }
    Ok(formula)
}
