//! Lenient HTML tokenizer. Never fails; malformed markup degrades to text or
//! bogus comments the way mainstream parsers recover.

use super::entities::decode_entities;

#[derive(Debug, Clone, PartialEq)]
pub enum Token {
    Doctype(String),
    StartTag {
        name: String,
        attrs: Vec<(String, String)>,
        self_closing: bool,
    },
    EndTag {
        name: String,
    },
    Text(String),
    Comment(String),
}

/// Elements whose content is raw text up to the matching end tag.
/// `title` and `textarea` still decode character references (RCDATA).
fn raw_text_kind(name: &str) -> Option<bool> {
    match name {
        "script" | "style" | "xmp" | "iframe" | "noembed" | "noframes" => Some(false),
        "title" | "textarea" => Some(true),
        _ => None,
    }
}

pub fn tokenize(input: &str) -> Vec<Token> {
    // Newline normalization happens before tokenizing, as browsers do.
    let input = input.replace("\r\n", "\n").replace('\r', "\n");
    let mut tokens = Vec::new();
    let mut lexer = Lexer {
        chars: input.chars().collect(),
        pos: 0,
    };
    lexer.run(&mut tokens);
    tokens
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
}

impl Lexer {
    fn run(&mut self, tokens: &mut Vec<Token>) {
        loop {
            let text = self.consume_until('<');
            if !text.is_empty() {
                tokens.push(Token::Text(decode_entities(&text)));
            }
            if self.at_end() {
                return;
            }
            // self.pos is at '<'
            match self.peek_at(1) {
                Some('!') => self.markup_declaration(tokens),
                Some('/') => self.end_tag(tokens),
                Some('?') => {
                    // Processing instructions become bogus comments with the
                    // '?' included, as the HTML tokenizer prescribes.
                    self.pos += 1;
                    let data = self.consume_until('>');
                    self.pos += 1; // skip '>'
                    tokens.push(Token::Comment(data));
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    if let Some(token) = self.start_tag() {
                        // Raw-text elements swallow content even when marked
                        // self-closing; the slash carries no meaning on them.
                        let raw = match &token {
                            Token::StartTag { name, .. } => {
                                raw_text_kind(name).map(|decode| (name.clone(), decode))
                            }
                            _ => None,
                        };
                        tokens.push(token);
                        if let Some((name, decode)) = raw {
                            self.raw_text(&name, decode, tokens);
                        }
                    }
                }
                None => {
                    // Lone '<' at EOF is literal text.
                    tokens.push(Token::Text("<".to_owned()));
                    self.pos += 1;
                }
                _ => {
                    // '<' followed by junk is literal text.
                    tokens.push(Token::Text("<".to_owned()));
                    self.pos += 1;
                }
            }
        }
    }

    fn markup_declaration(&mut self, tokens: &mut Vec<Token>) {
        // self.pos at '<', next is '!'
        if self.starts_with("<!--") {
            self.pos += 4;
            let data = self.consume_until_seq("-->");
            tokens.push(Token::Comment(data));
            return;
        }
        let rest: String = self.chars[self.pos..self.chars.len().min(self.pos + 9)]
            .iter()
            .collect();
        if rest.eq_ignore_ascii_case("<!doctype") {
            self.pos += 9;
            let body = self.consume_until('>');
            self.pos = (self.pos + 1).min(self.chars.len());
            tokens.push(Token::Doctype(body.trim().to_ascii_lowercase()));
            return;
        }
        // "<!stuff>" becomes a bogus comment holding "stuff".
        self.pos += 2;
        let data = self.consume_until('>');
        self.pos = (self.pos + 1).min(self.chars.len());
        tokens.push(Token::Comment(data));
    }

    fn end_tag(&mut self, tokens: &mut Vec<Token>) {
        // self.pos at '<', next is '/'
        match self.peek_at(2) {
            Some(c) if c.is_ascii_alphabetic() => {
                self.pos += 2;
                let name = self.consume_name();
                self.consume_until('>');
                self.pos = (self.pos + 1).min(self.chars.len());
                tokens.push(Token::EndTag { name });
            }
            Some('>') => {
                // "</>" has no name and is dropped entirely.
                self.pos += 3;
            }
            Some(_) => {
                // "</" + junk becomes a bogus comment.
                self.pos += 2;
                let data = self.consume_until('>');
                self.pos = (self.pos + 1).min(self.chars.len());
                tokens.push(Token::Comment(data));
            }
            None => {
                tokens.push(Token::Text("</".to_owned()));
                self.pos = self.chars.len();
            }
        }
    }

    /// Returns `None` when EOF interrupts the tag, which drops it.
    fn start_tag(&mut self) -> Option<Token> {
        self.pos += 1; // '<'
        let name = self.consume_name();
        let mut attrs: Vec<(String, String)> = Vec::new();
        let mut self_closing = false;
        loop {
            self.skip_whitespace();
            match self.peek() {
                None => return None,
                Some('>') => {
                    self.pos += 1;
                    break;
                }
                Some('/') => {
                    if self.peek_at(1) == Some('>') {
                        self_closing = true;
                        self.pos += 2;
                        break;
                    }
                    self.pos += 1; // stray slash
                }
                Some(_) => {
                    let attr_name = self.consume_attr_name();
                    if attr_name.is_empty() {
                        self.pos += 1; // junk character
                        continue;
                    }
                    self.skip_whitespace();
                    let value = if self.peek() == Some('=') {
                        self.pos += 1;
                        self.skip_whitespace();
                        self.consume_attr_value()?
                    } else {
                        String::new()
                    };
                    // First occurrence of a duplicated attribute wins.
                    if !attrs.iter().any(|(k, _)| *k == attr_name) {
                        attrs.push((attr_name, decode_entities(&value)));
                    }
                }
            }
        }
        Some(Token::StartTag {
            name,
            attrs,
            self_closing,
        })
    }

    fn raw_text(&mut self, name: &str, decode: bool, tokens: &mut Vec<Token>) {
        let close: Vec<char> = format!("</{}", name).chars().collect();
        let mut end = None;
        let mut i = self.pos;
        'scan: while i + close.len() <= self.chars.len() {
            for (j, &c) in close.iter().enumerate() {
                if self.chars[i + j].to_ascii_lowercase() != c {
                    i += 1;
                    continue 'scan;
                }
            }
            // The closing name must be followed by a tag-ending character.
            match self.chars.get(i + close.len()) {
                Some(&c) if c.is_whitespace() || c == '>' || c == '/' => {
                    end = Some(i);
                    break;
                }
                None => {
                    end = Some(i);
                    break;
                }
                _ => i += 1,
            }
        }
        let end = end.unwrap_or(self.chars.len());
        let raw: String = self.chars[self.pos..end].iter().collect();
        if !raw.is_empty() {
            tokens.push(Token::Text(if decode { decode_entities(&raw) } else { raw }));
        }
        self.pos = end;
        if self.pos < self.chars.len() {
            // Consume the end tag itself.
            self.pos += 2; // "</"
            let tag_name = self.consume_name();
            debug_assert_eq!(tag_name, name);
            self.consume_until('>');
            self.pos = (self.pos + 1).min(self.chars.len());
            tokens.push(Token::EndTag { name: tag_name });
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn starts_with(&self, s: &str) -> bool {
        s.chars()
            .enumerate()
            .all(|(i, c)| self.peek_at(i) == Some(c))
    }

    fn consume_until(&mut self, stop: char) -> String {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c == stop {
                break;
            }
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn consume_until_seq(&mut self, stop: &str) -> String {
        let start = self.pos;
        while !self.at_end() && !self.starts_with(stop) {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        self.pos = (self.pos + stop.len()).min(self.chars.len());
        text
    }

    fn consume_name(&mut self) -> String {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_whitespace() || c == '>' || c == '/' {
                break;
            }
            self.pos += 1;
        }
        self.chars[start..self.pos]
            .iter()
            .collect::<String>()
            .to_ascii_lowercase()
    }

    fn consume_attr_name(&mut self) -> String {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_whitespace() || c == '=' || c == '>' || c == '/' {
                break;
            }
            self.pos += 1;
        }
        self.chars[start..self.pos]
            .iter()
            .collect::<String>()
            .to_ascii_lowercase()
    }

    fn consume_attr_value(&mut self) -> Option<String> {
        match self.peek() {
            Some(q) if q == '"' || q == '\'' => {
                self.pos += 1;
                let start = self.pos;
                while let Some(c) = self.peek() {
                    if c == q {
                        let value: String = self.chars[start..self.pos].iter().collect();
                        self.pos += 1;
                        return Some(value);
                    }
                    self.pos += 1;
                }
                None // EOF inside quoted value drops the tag
            }
            _ => {
                let start = self.pos;
                while let Some(c) = self.peek() {
                    if c.is_whitespace() || c == '>' {
                        break;
                    }
                    self.pos += 1;
                }
                Some(self.chars[start..self.pos].iter().collect())
            }
        }
    }

    fn skip_whitespace(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }
}
