//! Recursive-descent parser for the supported XPath dialect. Constructs
//! outside the dialect fail with `Unsupported`, naming what was used.

use super::ast::*;
use super::XPathError;

pub fn parse(input: &str) -> Result<Expr, XPathError> {
    let mut p = Parser::new(input);
    let expr = p.parse_expr()?;
    p.expect_end()?;
    Ok(expr)
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Slash,
    DoubleSlash,
    Dot,
    DotDot,
    At,
    Star,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Equals,
    Name(String),
    Literal(String),
    Integer(i64),
    /// Constructs recognized but outside the dialect, kept for diagnostics.
    Unsupported(String),
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    input_len: usize,
}

impl Parser {
    fn new(input: &str) -> Parser {
        Parser {
            tokens: lex(input),
            pos: 0,
            input_len: input.len(),
        }
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn peek2(&self) -> Option<&Token> {
        self.tokens.get(self.pos + 1).map(|(_, t)| t)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn offset(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(o, _)| *o)
            .unwrap_or(self.input_len)
    }

    fn syntax(&self, message: impl Into<String>) -> XPathError {
        XPathError::Syntax {
            offset: self.offset(),
            message: message.into(),
        }
    }

    fn unsupported(construct: impl Into<String>) -> XPathError {
        XPathError::Unsupported {
            construct: construct.into(),
        }
    }

    fn eat(&mut self, token: &Token) -> bool {
        if self.peek() == Some(token) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: Token, what: &str) -> Result<(), XPathError> {
        if self.eat(&token) {
            Ok(())
        } else {
            Err(self.syntax(format!("expected {}", what)))
        }
    }

    fn expect_end(&self) -> Result<(), XPathError> {
        match self.peek() {
            None => Ok(()),
            Some(Token::Unsupported(c)) => Err(Self::unsupported(c.clone())),
            Some(t) => Err(self.syntax(format!("unexpected trailing {:?}", t))),
        }
    }

    fn parse_expr(&mut self) -> Result<Expr, XPathError> {
        let (path, normalize) = self.parse_path()?;
        Ok(Expr { path, normalize })
    }

    /// Parses a location path; returns the path plus whether it ended in
    /// `/normalize-space()`.
    fn parse_path(&mut self) -> Result<(Path, bool), XPathError> {
        let mut steps = Vec::new();
        let mut require_step = false;
        let absolute = match self.peek() {
            Some(Token::DoubleSlash) => {
                self.pos += 1;
                steps.push(PathStep::new(Axis::DescendantOrSelf, NodeTest::AnyNode));
                require_step = true;
                true
            }
            Some(Token::Slash) => {
                self.pos += 1;
                true
            }
            _ => false,
        };
        if require_step && !self.path_step_ahead() {
            if let Some(Token::Unsupported(construct)) = self.peek() {
                return Err(Self::unsupported(construct.clone()));
            }
            return Err(self.syntax("expected a path step after `//`"));
        }

        let mut normalize = false;
        if absolute && self.path_step_ahead() || !absolute {
            loop {
                match self.parse_step()? {
                    StepOrNormalize::Step(step) => steps.push(step),
                    StepOrNormalize::Normalize => {
                        normalize = true;
                        break;
                    }
                }
                match self.peek() {
                    Some(Token::Slash) => {
                        self.pos += 1;
                    }
                    Some(Token::DoubleSlash) => {
                        self.pos += 1;
                        steps.push(PathStep::new(Axis::DescendantOrSelf, NodeTest::AnyNode));
                    }
                    _ => break,
                }
            }
        }

        Ok((Path { absolute, steps }, normalize))
    }

    fn path_step_ahead(&self) -> bool {
        matches!(
            self.peek(),
            Some(Token::Name(_)) | Some(Token::Star) | Some(Token::At) | Some(Token::Dot)
                | Some(Token::DotDot)
        )
    }

    fn parse_step(&mut self) -> Result<StepOrNormalize, XPathError> {
        let step = match self.next() {
            Some(Token::Dot) => PathStep::new(Axis::SelfNode, NodeTest::AnyNode),
            Some(Token::DotDot) => PathStep::new(Axis::Parent, NodeTest::AnyNode),
            Some(Token::Star) => {
                let mut step = PathStep::new(Axis::Child, NodeTest::AnyElement);
                step.predicates = self.parse_predicates()?;
                return Ok(StepOrNormalize::Step(step));
            }
            Some(Token::At) => match self.next() {
                Some(Token::Name(name)) => PathStep::new(Axis::Attribute, NodeTest::Name(name)),
                Some(Token::Star) => return Err(Self::unsupported("attribute wildcard `@*`")),
                _ => return Err(self.syntax("expected attribute name after `@`")),
            },
            Some(Token::Name(name)) => {
                if self.peek() == Some(&Token::LParen) {
                    // Function-call-shaped step: text() is a node test,
                    // normalize-space() terminates the path.
                    self.pos += 1;
                    match name.as_str() {
                        "text" => {
                            self.expect(Token::RParen, "`)` after text(")?;
                            let mut step = PathStep::new(Axis::Child, NodeTest::Text);
                            step.predicates = self.parse_predicates()?;
                            return Ok(StepOrNormalize::Step(step));
                        }
                        "normalize-space" => {
                            self.expect(Token::RParen, "`)` after normalize-space(")?;
                            return Ok(StepOrNormalize::Normalize);
                        }
                        "node" => return Err(Self::unsupported("node test `node()`")),
                        other => {
                            return Err(Self::unsupported(format!("function `{}()`", other)))
                        }
                    }
                }
                let mut step = PathStep::new(Axis::Child, NodeTest::Name(name));
                step.predicates = self.parse_predicates()?;
                return Ok(StepOrNormalize::Step(step));
            }
            Some(Token::Unsupported(c)) => return Err(Self::unsupported(c)),
            _ => return Err(self.syntax("expected a path step")),
        };
        // `.`, `..` and attribute steps take no predicates in the dialect.
        if self.peek() == Some(&Token::LBracket) {
            return Err(Self::unsupported("predicate on `.`, `..`, or an attribute step"));
        }
        Ok(StepOrNormalize::Step(step))
    }

    fn parse_predicates(&mut self) -> Result<Vec<Predicate>, XPathError> {
        let mut predicates = Vec::new();
        while self.eat(&Token::LBracket) {
            let predicate = match self.peek() {
                Some(Token::Integer(n)) if self.peek2() == Some(&Token::RBracket) => {
                    let n = *n;
                    self.pos += 1;
                    Predicate::Position(n)
                }
                Some(Token::Integer(_)) => {
                    return Err(Self::unsupported("arithmetic in predicate"));
                }
                _ => Predicate::Bool(self.parse_or()?),
            };
            self.expect(Token::RBracket, "`]` to close predicate")?;
            predicates.push(predicate);
        }
        Ok(predicates)
    }

    fn parse_or(&mut self) -> Result<BoolExpr, XPathError> {
        let mut left = self.parse_and()?;
        while self.peek() == Some(&Token::Name("or".to_owned())) {
            self.pos += 1;
            let right = self.parse_and()?;
            left = BoolExpr::Or(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn parse_and(&mut self) -> Result<BoolExpr, XPathError> {
        let mut left = self.parse_comparison()?;
        while self.peek() == Some(&Token::Name("and".to_owned())) {
            self.pos += 1;
            let right = self.parse_comparison()?;
            left = BoolExpr::And(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn parse_comparison(&mut self) -> Result<BoolExpr, XPathError> {
        if self.eat(&Token::LParen) {
            let inner = self.parse_or()?;
            self.expect(Token::RParen, "`)`")?;
            return Ok(inner);
        }
        let left = self.parse_value()?;
        if self.eat(&Token::Equals) {
            let right = self.parse_value()?;
            return Ok(BoolExpr::Equals(left, right));
        }
        if let Some(Token::Unsupported(c)) = self.peek() {
            return Err(Self::unsupported(c.clone()));
        }
        Ok(BoolExpr::Truthy(left))
    }

    fn parse_value(&mut self) -> Result<ValueExpr, XPathError> {
        match self.peek() {
            Some(Token::Literal(_)) => {
                let Some(Token::Literal(s)) = self.next() else { unreachable!() };
                Ok(ValueExpr::Literal(s))
            }
            Some(Token::Integer(_)) => Err(Self::unsupported("numeric comparison")),
            Some(Token::Name(name)) if self.peek2() == Some(&Token::LParen) => {
                match name.as_str() {
                    "contains" => {
                        self.pos += 2;
                        let a = self.parse_value()?;
                        self.expect(Token::Comma, "`,` between contains() arguments")?;
                        let b = self.parse_value()?;
                        self.expect(Token::RParen, "`)` after contains() arguments")?;
                        Ok(ValueExpr::Contains(Box::new(a), Box::new(b)))
                    }
                    "normalize-space" => {
                        self.pos += 2;
                        if self.eat(&Token::RParen) {
                            Ok(ValueExpr::NormalizeSpace(None))
                        } else {
                            let arg = self.parse_value()?;
                            self.expect(Token::RParen, "`)` after normalize-space() argument")?;
                            Ok(ValueExpr::NormalizeSpace(Some(Box::new(arg))))
                        }
                    }
                    // text() is a path step, handled by parse_path below.
                    "text" => self.parse_value_path(),
                    other => Err(Self::unsupported(format!("function `{}()`", other))),
                }
            }
            Some(Token::Name(_)) | Some(Token::Star) | Some(Token::At) | Some(Token::Dot)
            | Some(Token::DotDot) | Some(Token::Slash) | Some(Token::DoubleSlash) => {
                self.parse_value_path()
            }
            Some(Token::Unsupported(c)) => Err(Self::unsupported(c.clone())),
            _ => Err(self.syntax("expected a literal, function call, or path")),
        }
    }

    fn parse_value_path(&mut self) -> Result<ValueExpr, XPathError> {
        let (path, normalize) = self.parse_path()?;
        if normalize {
            // `.../normalize-space()` inside a predicate coerces to a string.
            return Ok(ValueExpr::NormalizeSpace(Some(Box::new(ValueExpr::Path(
                path,
            )))));
        }
        Ok(ValueExpr::Path(path))
    }
}

enum StepOrNormalize {
    Step(PathStep),
    Normalize,
}

fn lex(input: &str) -> Vec<(usize, Token)> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '/' => {
                if chars.get(i + 1) == Some(&'/') {
                    tokens.push((start, Token::DoubleSlash));
                    i += 2;
                } else {
                    tokens.push((start, Token::Slash));
                    i += 1;
                }
            }
            '.' => {
                if chars.get(i + 1) == Some(&'.') {
                    tokens.push((start, Token::DotDot));
                    i += 2;
                } else {
                    tokens.push((start, Token::Dot));
                    i += 1;
                }
            }
            '@' => {
                tokens.push((start, Token::At));
                i += 1;
            }
            '*' => {
                tokens.push((start, Token::Star));
                i += 1;
            }
            '[' => {
                tokens.push((start, Token::LBracket));
                i += 1;
            }
            ']' => {
                tokens.push((start, Token::RBracket));
                i += 1;
            }
            '(' => {
                tokens.push((start, Token::LParen));
                i += 1;
            }
            ')' => {
                tokens.push((start, Token::RParen));
                i += 1;
            }
            ',' => {
                tokens.push((start, Token::Comma));
                i += 1;
            }
            '=' => {
                tokens.push((start, Token::Equals));
                i += 1;
            }
            '\'' | '"' => {
                let quote = c;
                i += 1;
                let lit_start = i;
                while i < chars.len() && chars[i] != quote {
                    i += 1;
                }
                let literal: String = chars[lit_start..i].iter().collect();
                if i < chars.len() {
                    i += 1; // closing quote
                    tokens.push((start, Token::Literal(literal)));
                } else {
                    tokens.push((start, Token::Unsupported("unterminated string literal".into())));
                }
            }
            '0'..='9' => {
                let mut n: i64 = 0;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    n = n.saturating_mul(10).saturating_add((chars[i] as u8 - b'0') as i64);
                    i += 1;
                }
                tokens.push((start, Token::Integer(n)));
            }
            '!' => {
                tokens.push((start, Token::Unsupported("operator `!=`".into())));
                i += if chars.get(i + 1) == Some(&'=') { 2 } else { 1 };
            }
            '<' | '>' => {
                tokens.push((start, Token::Unsupported(format!("operator `{}`", c))));
                i += 1;
            }
            '|' => {
                tokens.push((start, Token::Unsupported("union operator `|`".into())));
                i += 1;
            }
            '+' | '-' => {
                tokens.push((start, Token::Unsupported(format!("arithmetic operator `{}`", c))));
                i += 1;
            }
            '$' => {
                tokens.push((start, Token::Unsupported("variable reference `$`".into())));
                i += 1;
            }
            c if c.is_alphabetic() || c == '_' => {
                while i < chars.len()
                    && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '-')
                {
                    i += 1;
                }
                let name: String = chars[start..i].iter().collect();
                if i + 1 < chars.len() && chars[i] == ':' && chars[i + 1] == ':' {
                    tokens.push((start, Token::Unsupported(format!("axis `{}::`", name))));
                    i += 2;
                } else if i < chars.len() && chars[i] == ':' {
                    tokens.push((start, Token::Unsupported(format!("namespace prefix `{}:`", name))));
                    i += 1;
                } else {
                    tokens.push((start, Token::Name(name)));
                }
            }
            other => {
                tokens.push((start, Token::Unsupported(format!("character `{}`", other))));
                i += 1;
            }
        }
    }
    tokens
}
