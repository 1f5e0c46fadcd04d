//! Boolean filter expressions over named edge-feature components, e.g.
//! `contiguous==1 && !(intersection_count < 1)`.

use super::{GraphError, EDGE_COMPONENTS, EDGE_DIM};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Comparison {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Predicate {
    Const(bool),
    Compare { component: usize, op: Comparison, value: f64 },
    Not(Box<Predicate>),
    And(Box<Predicate>, Box<Predicate>),
    Or(Box<Predicate>, Box<Predicate>),
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Number(f64),
    Op(&'static str),
    LParen,
    RParen,
}

const OPERATORS: [&str; 9] = ["&&", "||", "==", "!=", "<=", ">=", "<", ">", "!"];

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, GraphError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c == '(' || c == ')' {
            out.push((i, if c == '(' { Token::LParen } else { Token::RParen }));
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Token::Ident(text[start..i].to_string())));
        } else if c.is_ascii_digit() || c == '.' || c == '-' || c == '+' {
            let start = i;
            i += 1;
            while i < bytes.len() {
                let b = bytes[i];
                let exp_sign = (b == b'-' || b == b'+') && matches!(bytes[i - 1], b'e' | b'E');
                if b.is_ascii_digit() || b == b'.' || b == b'e' || b == b'E' || exp_sign {
                    i += 1;
                } else {
                    break;
                }
            }
            let lexeme = &text[start..i];
            let value = lexeme.parse::<f64>().map_err(|_| GraphError::BadPredicate {
                offset: start,
                message: format!("bad number `{lexeme}`"),
            })?;
            out.push((start, Token::Number(value)));
        } else if let Some(op) = OPERATORS.iter().find(|op| text[i..].starts_with(**op)) {
            out.push((i, Token::Op(op)));
            i += op.len();
        } else {
            return Err(GraphError::BadPredicate { offset: i, message: format!("unexpected `{c}`") });
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, GraphError> {
        Err(GraphError::BadPredicate { offset: self.offset(), message: message.into() })
    }

    fn eat_op(&mut self, op: &str) -> bool {
        if matches!(self.peek(), Some(Token::Op(o)) if *o == op) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn or(&mut self) -> Result<Predicate, GraphError> {
        let mut lhs = self.and()?;
        while self.eat_op("||") {
            lhs = Predicate::Or(Box::new(lhs), Box::new(self.and()?));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Predicate, GraphError> {
        let mut lhs = self.unary()?;
        while self.eat_op("&&") {
            lhs = Predicate::And(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Predicate, GraphError> {
        if self.eat_op("!") {
            return Ok(Predicate::Not(Box::new(self.unary()?)));
        }
        match self.peek().cloned() {
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.or()?;
                if self.peek() != Some(&Token::RParen) {
                    return self.fail("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(Token::Ident(name)) if name == "true" || name == "false" => {
                self.pos += 1;
                Ok(Predicate::Const(name == "true"))
            }
            Some(Token::Ident(name)) => {
                let Some(component) = EDGE_COMPONENTS.iter().position(|c| *c == name) else {
                    return self.fail(format!("unknown edge feature `{name}`; known: {}", EDGE_COMPONENTS.join(", ")));
                };
                self.pos += 1;
                let Some(op) = (match self.peek() {
                    Some(Token::Op(o)) => comparison(o),
                    _ => None,
                }) else {
                    return self.fail("expected a comparison operator");
                };
                self.pos += 1;
                let value = match self.peek() {
                    Some(Token::Number(v)) => *v,
                    _ => return self.fail("expected a number"),
                };
                self.pos += 1;
                Ok(Predicate::Compare { component, op, value })
            }
            Some(_) => self.fail("expected a comparison, `!`, `(` or a constant"),
            None => self.fail("unexpected end of expression"),
        }
    }
}

fn comparison(op: &str) -> Option<Comparison> {
    Some(match op {
        "==" => Comparison::Eq,
        "!=" => Comparison::Ne,
        "<" => Comparison::Lt,
        "<=" => Comparison::Le,
        ">" => Comparison::Gt,
        ">=" => Comparison::Ge,
        _ => return None,
    })
}

impl Predicate {
    pub fn parse(text: &str) -> Result<Predicate, GraphError> {
        let mut parser = Parser { tokens: tokenize(text)?, pos: 0, end: text.len() };
        let pred = parser.or()?;
        if parser.pos != parser.tokens.len() {
            return parser.fail("trailing input");
        }
        Ok(pred)
    }

    pub fn eval(&self, f: &[f64; EDGE_DIM]) -> bool {
        match self {
            Predicate::Const(b) => *b,
            Predicate::Compare { component, op, value } => {
                let x = f[*component];
                match op {
                    Comparison::Eq => x == *value,
                    Comparison::Ne => x != *value,
                    Comparison::Lt => x < *value,
                    Comparison::Le => x <= *value,
                    Comparison::Gt => x > *value,
                    Comparison::Ge => x >= *value,
                }
            }
            Predicate::Not(p) => !p.eval(f),
            Predicate::And(a, b) => a.eval(f) && b.eval(f),
            Predicate::Or(a, b) => a.eval(f) || b.eval(f),
        }
    }
}
