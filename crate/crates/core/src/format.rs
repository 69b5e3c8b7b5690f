//! Reading and writing the PGSolver game format and its solution format.
//!
//! Games:
//!
//! ```text
//! parity <max-id>;
//! <id> <priority> <owner> <succ>(,<succ>)* ("<label>")?;
//! ```
//!
//! Solutions:
//!
//! ```text
//! paritysol <max-id>;
//! <id> <winner>( <strategy>)?;
//! ```
//!
//! Owner and winner bits are `0` for Even and `1` for Odd. Identifiers may be
//! sparse; they are preserved on output, which lists vertices by ascending id.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Read;

use crate::game::{DuplicateEdges, GameBuilder, GameError, ParityGame, Player};
use crate::solution::Solution;
use crate::Vertex;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("solution mentions unknown vertex {0}")]
    UnknownVertex(u64),
    #[error("solution has no entry for vertex {0}")]
    MissingVertex(u64),
    #[error("solution lists vertex {0} more than once")]
    DuplicateEntry(u64),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Options for [`parse_pgsolver_with`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    pub duplicate_edges: DuplicateEdges,
}

pub fn parse_pgsolver(text: &str) -> Result<ParityGame, FormatError> {
    parse_pgsolver_with(text, ParseOptions::default())
}

pub fn read_pgsolver(
    mut reader: impl Read,
    options: ParseOptions,
) -> Result<ParityGame, FormatError> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    let text = std::str::from_utf8(&bytes).map_err(|e| {
        let prefix = &bytes[..e.valid_up_to()];
        let line = 1 + prefix.iter().filter(|&&b| b == b'\n').count();
        let column = 1 + prefix.iter().rev().take_while(|&&b| b != b'\n').count();
        FormatError::Syntax {
            line,
            column,
            message: "input is not valid UTF-8".into(),
        }
    })?;
    parse_pgsolver_with(text, options)
}

pub fn parse_pgsolver_with(text: &str, options: ParseOptions) -> Result<ParityGame, FormatError> {
    let mut sc = Scanner::new(text);
    let mut builder = GameBuilder::new().duplicate_edges(options.duplicate_edges);
    sc.skip_ws();
    if sc.peek_keyword("parity") {
        sc.expect_keyword("parity")?;
        // advisory only; the records define the vertex set
        sc.signed_integer()?;
        sc.expect(b';')?;
    }
    loop {
        sc.skip_ws();
        if sc.at_end() {
            break;
        }
        let id = sc.unsigned("vertex id")?;
        let priority = sc.unsigned("priority")?;
        let priority =
            u32::try_from(priority).map_err(|_| sc.token_error("priority out of range"))?;
        let owner = match sc.unsigned("owner")? {
            0 => Player::Even,
            1 => Player::Odd,
            _ => return Err(sc.token_error("owner must be 0 or 1")),
        };
        let mut successors = vec![sc.unsigned("successor")?];
        loop {
            sc.skip_ws();
            if sc.eat(b',') {
                successors.push(sc.unsigned("successor")?);
            } else {
                break;
            }
        }
        sc.skip_ws();
        let label = if sc.peek() == Some(b'"') {
            Some(sc.quoted()?)
        } else {
            None
        };
        sc.expect(b';')?;
        builder.add_vertex(id, priority, owner, successors, label)?;
    }
    Ok(builder.build()?)
}

/// Writes a game in normalized PGSolver form.
pub fn write_pgsolver(game: &ParityGame) -> String {
    let mut out = String::new();
    let order = by_original_id(game);
    let Some(&last) = order.last() else {
        return out;
    };
    writeln!(out, "parity {};", game.original_id(last)).unwrap();
    for v in order {
        write!(
            out,
            "{} {} {} ",
            game.original_id(v),
            game.priority(v),
            game.owner(v) as u8
        )
        .unwrap();
        for (i, &u) in game.successors(v).iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write!(out, "{}", game.original_id(u)).unwrap();
        }
        if let Some(label) = game.label(v) {
            out.push_str(" \"");
            for c in label.chars() {
                if c == '"' || c == '\\' {
                    out.push('\\');
                }
                out.push(c);
            }
            out.push('"');
        }
        out.push_str(";\n");
    }
    out
}

/// Writes winners and strategies. The empty game produces empty output.
pub fn write_solution(game: &ParityGame, solution: &Solution) -> String {
    emit_solution(game, &solution.winner, Some(&solution.strategy))
}

/// Writes winners only, without strategy fields.
pub fn write_regions(game: &ParityGame, winner: &[Player]) -> String {
    emit_solution(game, winner, None)
}

fn emit_solution(
    game: &ParityGame,
    winner: &[Player],
    strategy: Option<&[Option<Vertex>]>,
) -> String {
    let mut out = String::new();
    let order = by_original_id(game);
    let Some(&last) = order.last() else {
        return out;
    };
    writeln!(out, "paritysol {};", game.original_id(last)).unwrap();
    for v in order {
        write!(out, "{} {}", game.original_id(v), winner[v] as u8).unwrap();
        if let Some(u) = strategy.and_then(|s| s[v]) {
            write!(out, " {}", game.original_id(u)).unwrap();
        }
        out.push_str(";\n");
    }
    out
}

fn by_original_id(game: &ParityGame) -> Vec<Vertex> {
    let mut order: Vec<Vertex> = game.vertices().collect();
    order.sort_by_key(|&v| game.original_id(v));
    order
}

/// Parses a solution file against `game`. Every vertex must have exactly one
/// entry. The result is not checked for consistency; use the verifier.
pub fn parse_solution(text: &str, game: &ParityGame) -> Result<Solution, FormatError> {
    let mut sc = Scanner::new(text);
    sc.skip_ws();
    if sc.peek_keyword("paritysol") {
        sc.expect_keyword("paritysol")?;
        sc.signed_integer()?;
        sc.expect(b';')?;
    }
    let mut entries: BTreeMap<u64, (Player, Option<u64>)> = BTreeMap::new();
    loop {
        sc.skip_ws();
        if sc.at_end() {
            break;
        }
        let id = sc.unsigned("vertex id")?;
        let winner = match sc.unsigned("winner")? {
            0 => Player::Even,
            1 => Player::Odd,
            _ => return Err(sc.token_error("winner must be 0 or 1")),
        };
        sc.skip_ws();
        let strategy = if sc.peek().is_some_and(|c| c.is_ascii_digit()) {
            Some(sc.unsigned("strategy")?)
        } else {
            None
        };
        sc.expect(b';')?;
        if entries.insert(id, (winner, strategy)).is_some() {
            return Err(FormatError::DuplicateEntry(id));
        }
    }
    let mut solution = Solution {
        winner: vec![Player::Even; game.vertex_count()],
        strategy: vec![None; game.vertex_count()],
    };
    let mut seen = vec![false; game.vertex_count()];
    for (id, (winner, strategy)) in entries {
        let v = game
            .vertex_by_original_id(id)
            .ok_or(FormatError::UnknownVertex(id))?;
        seen[v] = true;
        solution.winner[v] = winner;
        solution.strategy[v] = match strategy {
            Some(s) => Some(
                game.vertex_by_original_id(s)
                    .ok_or(FormatError::UnknownVertex(s))?,
            ),
            None => None,
        };
    }
    if let Some(v) = seen.iter().position(|&s| !s) {
        return Err(FormatError::MissingVertex(game.original_id(v)));
    }
    Ok(solution)
}

struct Scanner<'a> {
    bytes: &'a [u8],
    pos: usize,
    line: usize,
    line_start: usize,
    token: (usize, usize),
}

impl<'a> Scanner<'a> {
    fn new(text: &'a str) -> Self {
        Scanner {
            bytes: text.as_bytes(),
            pos: 0,
            line: 1,
            line_start: 0,
            token: (1, 1),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) {
        if self.bytes[self.pos] == b'\n' {
            self.line += 1;
            self.line_start = self.pos + 1;
        }
        self.pos += 1;
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.bump();
        }
    }

    fn error(&self, message: impl Into<String>) -> FormatError {
        FormatError::Syntax {
            line: self.line,
            column: self.pos - self.line_start + 1,
            message: message.into(),
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), FormatError> {
        self.skip_ws();
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", c as char)))
        }
    }

    fn peek_keyword(&self, word: &str) -> bool {
        let rest = &self.bytes[self.pos..];
        rest.starts_with(word.as_bytes())
            && rest
                .get(word.len())
                .is_none_or(|c| !c.is_ascii_alphanumeric())
    }

    fn expect_keyword(&mut self, word: &str) -> Result<(), FormatError> {
        if !self.peek_keyword(word) {
            return Err(self.error(format!("expected '{word}'")));
        }
        for _ in 0..word.len() {
            self.bump();
        }
        Ok(())
    }

    /// An error located at the start of the most recent number.
    fn token_error(&self, message: impl Into<String>) -> FormatError {
        FormatError::Syntax {
            line: self.token.0,
            column: self.token.1,
            message: message.into(),
        }
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        self.token = (self.line, self.pos - self.line_start + 1);
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        // only ASCII digits were consumed
        std::str::from_utf8(&self.bytes[start..self.pos]).unwrap()
    }

    fn unsigned(&mut self, what: &str) -> Result<u64, FormatError> {
        self.skip_ws();
        let column_err = self.error(format!("expected {what}"));
        let digits = self.digits();
        if digits.is_empty() {
            return Err(column_err);
        }
        digits
            .parse()
            .map_err(|_| self.token_error(format!("{what} out of range")))
    }

    fn signed_integer(&mut self) -> Result<i64, FormatError> {
        self.skip_ws();
        let negative = self.eat(b'-');
        let err = self.error("expected integer");
        let digits = self.digits();
        if digits.is_empty() {
            return Err(err);
        }
        let value: i64 = digits
            .parse()
            .map_err(|_| self.error("integer out of range"))?;
        Ok(if negative { -value } else { value })
    }

    fn quoted(&mut self) -> Result<String, FormatError> {
        let open = self.error("unterminated label");
        self.bump();
        let mut out = Vec::new();
        loop {
            match self.peek() {
                None => return Err(open),
                Some(b'"') => {
                    self.bump();
                    break;
                }
                Some(b'\\') => {
                    self.bump();
                    match self.peek() {
                        None => return Err(open),
                        Some(c) => {
                            out.push(c);
                            self.bump();
                        }
                    }
                }
                Some(c) => {
                    out.push(c);
                    self.bump();
                }
            }
        }
        String::from_utf8(out).map_err(|_| self.error("label is not valid UTF-8"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn parses_g1() {
        let g = parse_pgsolver("parity 1;\n0 1 0 0,1;\n1 2 0 0;").unwrap();
        assert_eq!(g, fixtures::g1());
    }

    #[test]
    fn parses_label_and_crlf() {
        let g = parse_pgsolver("0 2 1 0 \"loop\";\r\n").unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.owner(0), Player::Odd);
        assert_eq!(g.priority(0), 2);
        assert_eq!(g.successors(0), &[0]);
        assert_eq!(g.label(0), Some("loop"));
    }

    #[test]
    fn whitespace_inside_lines() {
        let g = parse_pgsolver("  parity   1 ;\n 1\t2 0  0 ;\n0 1 0 0 , 1;\n").unwrap();
        assert_eq!(g, fixtures::g1());
    }

    #[test]
    fn dangling_edge() {
        match parse_pgsolver("0 1 0 5;") {
            Err(FormatError::Game(GameError::DanglingEdge(0, 5))) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_vertex_and_edge() {
        assert!(matches!(
            parse_pgsolver("0 1 0 0;\n0 1 0 0;"),
            Err(FormatError::Game(GameError::DuplicateVertexId(0)))
        ));
        assert!(matches!(
            parse_pgsolver("0 1 0 0,0;"),
            Err(FormatError::Game(GameError::DuplicateEdge(0, 0)))
        ));
        let opts = ParseOptions {
            duplicate_edges: DuplicateEdges::Dedup,
        };
        assert_eq!(
            parse_pgsolver_with("0 1 0 0,0;", opts)
                .unwrap()
                .edge_count(),
            1
        );
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_pgsolver("parity 1;\n0 1 2 0;") {
            Err(FormatError::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 5)),
            other => panic!("unexpected {other:?}"),
        }
        match parse_pgsolver("0 1 0 0") {
            Err(FormatError::Syntax {
                line: 1, message, ..
            }) => assert!(message.contains(';')),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_pgsolver("0 1 0;"),
            Err(FormatError::Syntax { .. })
        ));
        assert!(matches!(
            parse_pgsolver("0 1 0 1 \"x;"),
            Err(FormatError::Syntax { .. })
        ));
    }

    #[test]
    fn empty_input_is_empty_game() {
        assert_eq!(parse_pgsolver("").unwrap(), ParityGame::empty());
        assert_eq!(parse_pgsolver("parity -1;\n").unwrap(), ParityGame::empty());
        assert_eq!(write_pgsolver(&ParityGame::empty()), "");
    }

    #[test]
    fn writes_g1_solution() {
        let g = fixtures::g1();
        let sol = Solution {
            winner: vec![Player::Even; 2],
            strategy: vec![Some(1), Some(0)],
        };
        assert_eq!(write_solution(&g, &sol), "paritysol 1;\n0 0 1;\n1 0 0;\n");
        assert_eq!(write_regions(&g, &sol.winner), "paritysol 1;\n0 0;\n1 0;\n");
    }

    #[test]
    fn writes_forced_odd_loop() {
        let g = parse_pgsolver("0 1 1 0;").unwrap();
        let sol = Solution {
            winner: vec![Player::Odd],
            strategy: vec![Some(0)],
        };
        assert_eq!(write_solution(&g, &sol), "paritysol 0;\n0 1 0;\n");
        assert_eq!(write_solution(&ParityGame::empty(), &Solution::empty()), "");
    }

    #[test]
    fn solution_round_trip_with_sparse_ids() {
        let g = fixtures::g2();
        let text =
            "paritysol 18;\n1 0;\n2 0 1;\n3 0 16;\n4 0 17;\n5 0 4;\n16 0 5;\n17 0 2;\n18 0 3;\n";
        let sol = parse_solution(text, &g).unwrap();
        assert_eq!(write_solution(&g, &sol), text);
        assert!(matches!(
            parse_solution("paritysol 18;\n1 0;\n", &g),
            Err(FormatError::MissingVertex(2))
        ));
        assert!(matches!(
            parse_solution("7 0;\n", &g),
            Err(FormatError::UnknownVertex(7))
        ));
    }

    #[test]
    fn label_escapes_round_trip() {
        let g = parse_pgsolver("0 0 0 0 \"a \\\"b\\\" \\\\c\";").unwrap();
        assert_eq!(g.label(0), Some("a \"b\" \\c"));
        assert_eq!(parse_pgsolver(&write_pgsolver(&g)).unwrap(), g);
    }

    #[test]
    fn fixture_files_match() {
        let root = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/");
        let g1 = std::fs::read_to_string(format!("{root}g1.pg")).unwrap();
        let g2 = std::fs::read_to_string(format!("{root}g2.pg")).unwrap();
        assert_eq!(parse_pgsolver(&g1).unwrap(), fixtures::g1());
        assert_eq!(parse_pgsolver(&g2).unwrap(), fixtures::g2());
        assert_eq!(write_pgsolver(&fixtures::g2()), g2);
    }
}
