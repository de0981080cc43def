//! Text grammar for trees:
//!
//! ```text
//! ROOTED   := INT | "(" ROOTED "," ROOTED ")"
//! UNROOTED := "<" ROOTED "," ROOTED ">"
//! INFTREE  := "inf" ROOTED
//! ```
//!
//! Whitespace is ignored everywhere.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::{Label, RootedTree, UnrootedTree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    /// 1-based character column of the offending position.
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

/// Any of the three expression forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeExpr {
    Rooted(RootedTree),
    Unrooted(UnrootedTree),
    /// `J^inf`, written `inf J`.
    Inf(RootedTree),
}

impl fmt::Display for TreeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeExpr::Rooted(t) => write!(f, "{t}"),
            TreeExpr::Unrooted(t) => write!(f, "{t}"),
            TreeExpr::Inf(t) => write!(f, "inf{t}"),
        }
    }
}

impl FromStr for TreeExpr {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_expr(s, None)
    }
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    max_label: Option<u32>,
    _src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, max_label: Option<u32>) -> Self {
        let chars = src.chars().enumerate().filter(|(_, c)| !c.is_whitespace()).collect();
        Parser { chars, pos: 0, max_label, _src: src }
    }

    fn column(&self) -> usize {
        match self.chars.get(self.pos) {
            Some((i, _)) => i + 1,
            None => self.chars.last().map(|(i, _)| i + 2).unwrap_or(1),
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { column: self.column(), message: message.into() })
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => self.err(format!("expected '{want}', found '{c}'")),
            None => self.err(format!("expected '{want}', found end of input")),
        }
    }

    fn rooted(&mut self) -> Result<RootedTree, ParseError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let a = self.rooted()?;
                self.expect(',')?;
                let b = self.rooted()?;
                self.expect(')')?;
                Ok(RootedTree::node(a, b))
            }
            Some(c) if c.is_ascii_digit() => self.label().map(RootedTree::Leaf),
            Some(c) => self.err(format!("expected label or '(', found '{c}'")),
            None => self.err("expected label or '(', found end of input"),
        }
    }

    fn label(&mut self) -> Result<Label, ParseError> {
        let start = self.pos;
        let col = self.column();
        let mut value: u64 = 0;
        while let Some(c) = self.peek().filter(|c| c.is_ascii_digit()) {
            value = value * 10 + u64::from(c.to_digit(10).unwrap());
            if value > u64::from(u32::MAX) {
                return Err(ParseError { column: col, message: "label too large".into() });
            }
            self.pos += 1;
        }
        debug_assert!(self.pos > start);
        let value = value as u32;
        if value == 0 {
            return Err(ParseError { column: col, message: "labels start at 1".into() });
        }
        if let Some(m) = self.max_label {
            if value > m {
                return Err(ParseError { column: col, message: format!("label {value} outside 1..={m}") });
            }
        }
        Ok(Label(value))
    }

    fn unrooted(&mut self) -> Result<UnrootedTree, ParseError> {
        self.expect('<')?;
        let a = self.rooted()?;
        self.expect(',')?;
        let b = self.rooted()?;
        self.expect('>')?;
        Ok(UnrootedTree::new(a, b))
    }

    fn keyword_inf(&mut self) -> bool {
        let rest: String = self.chars[self.pos..].iter().take(3).map(|&(_, c)| c).collect();
        if rest == "inf" {
            self.pos += 3;
            true
        } else {
            false
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.err(format!("unexpected trailing '{c}'")),
        }
    }
}

/// Parses a rooted tree; `m` bounds the labels when supplied.
pub fn parse_rooted(src: &str, m: Option<u32>) -> Result<RootedTree, ParseError> {
    let mut p = Parser::new(src, m);
    let t = p.rooted()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_unrooted(src: &str, m: Option<u32>) -> Result<UnrootedTree, ParseError> {
    let mut p = Parser::new(src, m);
    let t = p.unrooted()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_expr(src: &str, m: Option<u32>) -> Result<TreeExpr, ParseError> {
    let mut p = Parser::new(src, m);
    let e = match p.peek() {
        Some('<') => TreeExpr::Unrooted(p.unrooted()?),
        Some('i') => {
            if !p.keyword_inf() {
                return p.err("expected 'inf'");
            }
            TreeExpr::Inf(p.rooted()?)
        }
        _ => TreeExpr::Rooted(p.rooted()?),
    };
    p.finish()?;
    Ok(e)
}
