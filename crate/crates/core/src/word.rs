//! Free-group words over constant symbols `a1, a2, ...` and variable symbols
//! `x1, x2, ...`, together with equation systems built from them.
//!
//! Words are kept freely reduced at all times. The concrete syntax is a
//! whitespace-separated list of terms `a<i>` / `x<i>`, each optionally
//! followed by a signed exponent: `x1^2 a1 x1^-1`. The lone term `1`
//! denotes the empty word.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::group::Group;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WordError {
    #[error("syntax error at column {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("symbol {0} is not assigned")]
    Unassigned(Letter),
    #[error("equation system has no equations")]
    EmptySystem,
    #[error("line {line}: {source}")]
    Line {
        line: usize,
        #[source]
        source: Box<WordError>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolKind {
    Constant,
    Variable,
}

/// A generator `a<i>` / `x<i>` or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub kind: SymbolKind,
    index: u32,
    inverse: bool,
}

impl Letter {
    pub fn constant(index: u32) -> Self {
        assert!(index >= 1, "symbol indices start at 1");
        Letter { kind: SymbolKind::Constant, index, inverse: false }
    }

    pub fn variable(index: u32) -> Self {
        assert!(index >= 1, "symbol indices start at 1");
        Letter { kind: SymbolKind::Variable, index, inverse: false }
    }

    /// 1-based symbol index.
    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn is_inverse(&self) -> bool {
        self.inverse
    }

    /// `+1` or `-1`.
    pub fn sign(&self) -> i32 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inv(self) -> Self {
        Letter { inverse: !self.inverse, ..self }
    }

    fn same_symbol(&self, other: &Letter) -> bool {
        self.kind == other.kind && self.index == other.index
    }

    fn cancels(&self, other: &Letter) -> bool {
        self.same_symbol(other) && self.inverse != other.inverse
    }

    fn symbol(&self) -> String {
        match self.kind {
            SymbolKind::Constant => format!("a{}", self.index),
            SymbolKind::Variable => format!("x{}", self.index),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "{}^-1", self.symbol())
        } else {
            f.write_str(&self.symbol())
        }
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

/// Freely reduces a letter sequence with a single left-to-right stack pass.
pub fn reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
    let mut stack: Vec<Letter> = Vec::new();
    for l in letters {
        match stack.last() {
            Some(top) if top.cancels(&l) => {
                stack.pop();
            }
            _ => stack.push(l),
        }
    }
    Word { letters: stack }
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.inv()).collect() }
    }

    /// Reduced product `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        reduce(self.letters.iter().chain(other.letters.iter()).copied())
    }

    /// Largest constant index used, 0 if none.
    pub fn max_constant(&self) -> u32 {
        self.max_index(SymbolKind::Constant)
    }

    /// Largest variable index used, 0 if none.
    pub fn max_variable(&self) -> u32 {
        self.max_index(SymbolKind::Variable)
    }

    fn max_index(&self, kind: SymbolKind) -> u32 {
        self.letters.iter().filter(|l| l.kind == kind).map(|l| l.index).max().unwrap_or(0)
    }

    /// All initial segments, from the empty word up to the word itself.
    pub fn prefixes(&self) -> impl Iterator<Item = Word> + '_ {
        (0..=self.letters.len()).map(move |i| Word { letters: self.letters[..i].to_vec() })
    }
}

/// The set of initial segments of `p` (`|p| + 1` elements).
pub fn prefix_set(p: &Word) -> BTreeSet<Word> {
    p.prefixes().collect()
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut run = 1;
            while i + run < self.letters.len() && self.letters[i + run] == l {
                run += 1;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            let exp = run as i64 * l.sign() as i64;
            if exp == 1 {
                f.write_str(&l.symbol())?;
            } else {
                write!(f, "{}^{}", l.symbol(), exp)?;
            }
            i += run;
        }
        Ok(())
    }
}

const MAX_EXPONENT: u64 = 1 << 20;

struct Lexer<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn err(&self, pos: usize, msg: impl Into<String>) -> WordError {
        WordError::Syntax { pos: pos + 1, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn digits(&mut self) -> Result<u64, WordError> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err(start, "expected digits"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse::<u64>()
            .map_err(|_| self.err(start, "number out of range"))
    }

    fn term(&mut self, out: &mut Vec<Letter>) -> Result<(), WordError> {
        let start = self.pos;
        let kind = match self.bytes[self.pos] {
            b'a' => SymbolKind::Constant,
            b'x' => SymbolKind::Variable,
            b'1' => {
                self.pos += 1;
                return self.end_of_term();
            }
            c => return Err(self.err(start, format!("unexpected character {:?}", c as char))),
        };
        self.pos += 1;
        let idx_pos = self.pos;
        let index = self.digits()?;
        if index == 0 {
            return Err(self.err(idx_pos, "symbol index 0 is not allowed"));
        }
        let index = u32::try_from(index).map_err(|_| self.err(idx_pos, "index out of range"))?;
        let mut exp: i64 = 1;
        if self.bytes.get(self.pos) == Some(&b'^') {
            self.pos += 1;
            let negative = match self.bytes.get(self.pos) {
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                _ => false,
            };
            let e_pos = self.pos;
            let mag = self.digits()?;
            if mag > MAX_EXPONENT {
                return Err(self.err(e_pos, "exponent too large"));
            }
            exp = if negative { -(mag as i64) } else { mag as i64 };
        }
        let letter = Letter { kind, index, inverse: exp < 0 };
        out.extend(std::iter::repeat_n(letter, exp.unsigned_abs() as usize));
        self.end_of_term()
    }

    fn end_of_term(&self) -> Result<(), WordError> {
        match self.bytes.get(self.pos) {
            None => Ok(()),
            Some(c) if c.is_ascii_whitespace() => Ok(()),
            Some(&c) => Err(self.err(self.pos, format!("unexpected character {:?}", c as char))),
        }
    }
}

/// Parses a word and returns its free reduction.
pub fn parse_word(text: &str) -> Result<Word, WordError> {
    let mut lx = Lexer { bytes: text.as_bytes(), pos: 0 };
    let mut letters = Vec::new();
    loop {
        lx.skip_ws();
        if lx.pos >= lx.bytes.len() {
            break;
        }
        lx.term(&mut letters)?;
    }
    Ok(reduce(letters))
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_word(s)
    }
}

/// Evaluates `w` in `group`, with `consts[i]` assigned to `a{i+1}` and
/// `vars[i]` to `x{i+1}`.
pub fn evaluate<G: Group>(w: &Word, group: &G, consts: &[G::Elem], vars: &[G::Elem]) -> Result<G::Elem, WordError> {
    let mut acc = group.identity();
    for l in &w.letters {
        let pool = match l.kind {
            SymbolKind::Constant => consts,
            SymbolKind::Variable => vars,
        };
        let v = pool.get(l.index as usize - 1).ok_or(WordError::Unassigned(*l))?;
        acc = if l.inverse { group.mul(&acc, &group.inv(v)) } else { group.mul(&acc, v) };
    }
    Ok(acc)
}

/// Image `S(ā)` of a set of words under evaluation.
pub fn prefix_values<'a, G, I>(
    words: I,
    group: &G,
    consts: &[G::Elem],
    vars: &[G::Elem],
) -> Result<BTreeSet<G::Elem>, WordError>
where
    G: Group,
    G::Elem: Ord,
    I: IntoIterator<Item = &'a Word>,
{
    words.into_iter().map(|w| evaluate(w, group, consts, vars)).collect()
}

/// A finite system `w_1 = 1, ..., w_r = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EquationSystem {
    words: Vec<Word>,
    k: usize,
    n: usize,
}

impl EquationSystem {
    pub fn new(words: Vec<Word>) -> Result<Self, WordError> {
        if words.is_empty() {
            return Err(WordError::EmptySystem);
        }
        let k = words.iter().map(Word::max_constant).max().unwrap_or(0) as usize;
        let n = words.iter().map(Word::max_variable).max().unwrap_or(0) as usize;
        Ok(EquationSystem { words, k, n })
    }

    /// Parses the equation file format: one word per line, `#` comments and
    /// blank lines ignored.
    pub fn parse(text: &str) -> Result<Self, WordError> {
        let mut words = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let w = parse_word(t).map_err(|e| WordError::Line { line: i + 1, source: Box::new(e) })?;
            words.push(w);
        }
        Self::new(words)
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    /// Number of constant symbols `a1..ak`.
    pub fn num_constants(&self) -> usize {
        self.k
    }

    /// Number of variable symbols `x1..xn`.
    pub fn num_variables(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Union of the prefix sets of every equation.
    pub fn prefix_union(&self) -> BTreeSet<Word> {
        self.words.iter().flat_map(prefix_set).collect()
    }

    pub fn evaluate<G: Group>(
        &self,
        group: &G,
        consts: &[G::Elem],
        vars: &[G::Elem],
    ) -> Result<Vec<G::Elem>, WordError> {
        self.words.iter().map(|w| evaluate(w, group, consts, vars)).collect()
    }

    /// True iff every equation evaluates to the identity.
    pub fn is_satisfied<G: Group>(&self, group: &G, consts: &[G::Elem], vars: &[G::Elem]) -> Result<bool, WordError> {
        let id = group.identity();
        for w in &self.words {
            if evaluate(w, group, consts, vars)? != id {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for EquationSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.words.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn a(i: u32) -> Letter {
        Letter::constant(i)
    }
    fn x(i: u32) -> Letter {
        Letter::variable(i)
    }
    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(w("x1^2 a1 x1^-1").letters(), &[x(1), x(1), a(1), x(1).inv()]);
        assert_eq!(w("x1 x1^-1 a1").letters(), &[a(1)]);
        assert!(w("a1^0").is_empty());
        assert!(w("").is_empty());
        assert!(w("1").is_empty());
        assert_eq!(w("  a12^+3 ").letters(), &[a(12); 3]);
    }

    #[test]
    fn parse_errors_carry_position() {
        match parse_word("x1 a0") {
            Err(WordError::Syntax { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{other:?}"),
        }
        for bad in ["y1", "x", "x1^", "x1^-", "x1a1", "x1 ^2", "a1^2x"] {
            assert!(matches!(parse_word(bad), Err(WordError::Syntax { .. })), "{bad}");
        }
    }

    #[test]
    fn reduce_examples() {
        assert!(reduce([x(1), x(1).inv()]).is_empty());
        assert_eq!(reduce([a(1), x(1), x(1).inv(), a(1)]).letters(), &[a(1), a(1)]);
        assert_eq!(reduce([a(1)]).letters(), &[a(1)]);
        // cancellation cascades
        assert!(reduce([a(1), x(2), x(2).inv(), a(1).inv()]).is_empty());
    }

    #[test]
    fn display_groups_runs() {
        assert_eq!(w("x1 x1 a1 x1^-1").to_string(), "x1^2 a1 x1^-1");
        assert_eq!(w("a2^-3").to_string(), "a2^-3");
        assert_eq!(Word::identity().to_string(), "1");
    }

    #[test]
    fn prefix_set_examples() {
        let p = w("x1^2 a1 x1^-1");
        let got: Vec<String> = prefix_set(&p).iter().map(|q| q.to_string()).collect();
        let want: BTreeSet<String> =
            ["1", "x1", "x1^2", "x1^2 a1", "x1^2 a1 x1^-1"].iter().map(|s| s.to_string()).collect();
        assert_eq!(got.into_iter().collect::<BTreeSet<_>>(), want);
        assert_eq!(prefix_set(&Word::identity()).len(), 1);
        assert_eq!(prefix_set(&w("a1 x1")).len(), 3);
    }

    #[test]
    fn evaluate_examples() {
        let z5 = FiniteGroup::cyclic(5);
        let z4 = FiniteGroup::cyclic(4);
        let s3 = FiniteGroup::from_permutations(3, &["(1 2 3)", "(1 2)"]).unwrap();
        for g in 0..6 {
            assert_eq!(evaluate(&w("x1 a1 x1^-1 a1^-1"), &s3, &[g], &[0]).unwrap(), 0);
        }
        assert_eq!(evaluate(&w("a1^2 x1"), &z5, &[2], &[1]).unwrap(), 0);
        assert_eq!(evaluate(&Word::identity(), &z5, &[], &[]).unwrap(), 0);

        let err = evaluate(&w("x2"), &z5, &[], &[1]).unwrap_err();
        assert_eq!(err, WordError::Unassigned(x(2)));
        assert_eq!(err.to_string(), "symbol x2 is not assigned");

        let sys = EquationSystem::parse("x1^2\nx1 a1\n").unwrap();
        let z2 = FiniteGroup::cyclic(2);
        assert_eq!(sys.evaluate(&z2, &[1], &[1]).unwrap(), vec![0, 0]);
        let trivial = EquationSystem::new(vec![Word::identity(), Word::identity()]).unwrap();
        assert_eq!(trivial.evaluate(&z2, &[], &[]).unwrap(), vec![0, 0]);

        let s = prefix_set(&w("x1^2"));
        let vals = prefix_values(&s, &z4, &[], &[1]).unwrap();
        assert_eq!(vals.into_iter().collect::<Vec<_>>(), vec![0, 1, 2]);
        let s = prefix_set(&w("a1 a1^-1"));
        assert_eq!(prefix_values(&s, &z4, &[3], &[]).unwrap().len(), 1);
    }

    #[test]
    fn system_file_format() {
        let sys = EquationSystem::parse("# comment\n\nx1 a1 x1^-1 a2^-1\n  \nx2\n").unwrap();
        assert_eq!(sys.len(), 2);
        assert_eq!(sys.num_constants(), 2);
        assert_eq!(sys.num_variables(), 2);
        assert_eq!(EquationSystem::parse("# nothing\n"), Err(WordError::EmptySystem));
        match EquationSystem::parse("x1\nx1 q\n") {
            Err(WordError::Line { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }
}
