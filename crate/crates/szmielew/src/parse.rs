//! Concrete syntax: the sentence language and the descriptor JSON format.
//!
//! Sentence grammar, whitespace insensitive:
//!
//! ```text
//! sentence := disjunct ('|' disjunct)*
//! disjunct := conjunct ('&' conjunct)*
//! conjunct := '!' conjunct | 'true' | 'false' | atom | '(' sentence ')'
//! atom     := FAMILY '(' PRIME ',' LEVEL ')' REL BOUND
//! FAMILY   := 'Phi' | 'Theta' | 'Gamma' | 'Delta'
//! REL      := '=' | '>'
//! ```
//!
//! Descriptor JSON, all fields optional with 0 as the default:
//!
//! ```text
//! { "nu": <card>,
//!   "primes": { "<prime>": { "lambda": <card>, "mu": <card>,
//!                            "kappa": { "<level>": <card>, ... },
//!                            "kappa_tail": <card> } } }
//! ```
//!
//! where `<card>` is a non-negative integer or the string `"omega"`.
//!
//! Numbers are capped to keep downstream arithmetic comfortably inside
//! u64: primes, bounds and cardinal values at most 65535, levels at most
//! 4095. Inputs beyond the caps are rejected with a parse error.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::Value;

use crate::atom::{AtomError, Family, InvariantAtom, Relation, Sentence};
use crate::card::{ExtCard, Finite, Omega};
use crate::descriptor::{PrimeComponent, SzmielewDescriptor};

pub const MAX_PRIME: u64 = 65535;
pub const MAX_LEVEL: u32 = 4095;
pub const MAX_BOUND: u64 = 65535;

/// A syntax or schema violation, with the character offset it was
/// detected at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError { position, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at offset {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Parses the sentence language.
pub fn parse_sentence(text: &str) -> Result<Sentence, ParseError> {
    let mut p = SentenceParser { text: text.as_bytes(), pos: 0 };
    let s = p.sentence()?;
    p.skip_ws();
    if p.pos < p.text.len() {
        return Err(ParseError::new(p.pos, "unexpected trailing input"));
    }
    Ok(s)
}

struct SentenceParser<'a> {
    text: &'a [u8],
    pos: usize,
}

impl SentenceParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(ParseError::new(self.pos, format!("expected '{}'", c as char)))
        }
    }

    fn sentence(&mut self) -> Result<Sentence, ParseError> {
        let mut parts = vec![self.disjunct()?];
        while self.eat(b'|') {
            parts.push(self.disjunct()?);
        }
        Ok(Sentence::or(parts))
    }

    fn disjunct(&mut self) -> Result<Sentence, ParseError> {
        let mut parts = vec![self.conjunct()?];
        while self.eat(b'&') {
            parts.push(self.conjunct()?);
        }
        Ok(Sentence::and(parts))
    }

    fn conjunct(&mut self) -> Result<Sentence, ParseError> {
        match self.peek() {
            Some(b'!') => {
                self.pos += 1;
                Ok(Sentence::not(self.conjunct()?))
            }
            Some(b'(') => {
                self.pos += 1;
                let s = self.sentence()?;
                self.expect(b')')?;
                Ok(s)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let word = self.ident();
                match word {
                    "true" => Ok(Sentence::True),
                    "false" => Ok(Sentence::False),
                    "Phi" => self.atom_tail(Family::Phi, start),
                    "Theta" => self.atom_tail(Family::Theta, start),
                    "Gamma" => self.atom_tail(Family::Gamma, start),
                    "Delta" => self.atom_tail(Family::Delta, start),
                    other => Err(ParseError::new(
                        start,
                        format!("unknown keyword '{other}'; expected true, false or a family name"),
                    )),
                }
            }
            _ => Err(ParseError::new(self.pos, "expected a sentence")),
        }
    }

    fn ident(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.text[start..self.pos]).unwrap()
    }

    fn atom_tail(&mut self, family: Family, start: usize) -> Result<Sentence, ParseError> {
        self.expect(b'(')?;
        let prime_pos = {
            self.skip_ws();
            self.pos
        };
        let prime = self.number(MAX_PRIME, "prime")?;
        self.expect(b',')?;
        let level = self.number(MAX_LEVEL as u64, "level")? as u32;
        self.expect(b')')?;
        let relation = match self.peek() {
            Some(b'=') => Relation::Eq,
            Some(b'>') => Relation::Gt,
            _ => return Err(ParseError::new(self.pos, "expected '=' or '>'")),
        };
        self.pos += 1;
        let bound = self.number(MAX_BOUND, "bound")?;
        match InvariantAtom::new(family, relation, prime, level, bound) {
            Ok(a) => Ok(Sentence::Atom(a)),
            Err(AtomError::NotPrime(p)) => {
                Err(ParseError::new(prime_pos, format!("{p} is not prime")))
            }
            Err(e @ AtomError::DeltaEqZero) => Err(ParseError::new(start, e.to_string())),
        }
    }

    fn number(&mut self, cap: u64, what: &str) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(ParseError::new(start, format!("expected a {what}")));
        }
        let digits = std::str::from_utf8(&self.text[start..self.pos]).unwrap();
        match digits.parse::<u64>() {
            Ok(v) if v <= cap => Ok(v),
            _ => Err(ParseError::new(start, format!("{what} exceeds the maximum of {cap}"))),
        }
    }
}

/// Parses the descriptor JSON format.
pub fn parse_descriptor(text: &str) -> Result<SzmielewDescriptor, ParseError> {
    let value: Value = serde_json::from_str(text).map_err(|e| {
        let position = offset_of(text, e.line(), e.column());
        ParseError::new(position, format!("invalid JSON: {e}"))
    })?;
    descriptor_from_json(&value)
}

/// Line/column (1-based) to character offset.
fn offset_of(text: &str, line: usize, column: usize) -> usize {
    let skipped: usize =
        text.split_inclusive('\n').take(line.saturating_sub(1)).map(str::len).sum();
    (skipped + column.saturating_sub(1)).min(text.len())
}

/// Builds a descriptor from already-parsed JSON. Schema violations are
/// reported with the offending path in the message; positions are 0
/// because the original text layout is gone at this point.
pub fn descriptor_from_json(value: &Value) -> Result<SzmielewDescriptor, ParseError> {
    let err = |msg: String| ParseError::new(0, msg);
    let obj = value.as_object().ok_or_else(|| err("descriptor must be a JSON object".into()))?;
    let mut nu = ExtCard::ZERO;
    let mut primes = BTreeMap::new();
    for (key, val) in obj {
        match key.as_str() {
            "nu" => nu = card_from_json(val, "nu")?,
            "primes" => {
                let pobj = val
                    .as_object()
                    .ok_or_else(|| err("primes: expected an object keyed by primes".into()))?;
                for (pkey, pval) in pobj {
                    let p: u64 = pkey
                        .parse()
                        .ok()
                        .filter(|&p| p <= MAX_PRIME)
                        .ok_or_else(|| {
                            err(format!("primes.{pkey}: key must be a prime at most {MAX_PRIME}"))
                        })?;
                    if !crate::arith::is_prime(p) {
                        return Err(err(format!("primes.{pkey}: {p} is not prime")));
                    }
                    primes.insert(p, component_from_json(pval, pkey)?);
                }
            }
            other => return Err(err(format!("unknown field '{other}'"))),
        }
    }
    SzmielewDescriptor::new(primes, nu).map_err(|e| err(e.to_string()))
}

fn component_from_json(value: &Value, pkey: &str) -> Result<PrimeComponent, ParseError> {
    let err = |msg: String| ParseError::new(0, msg);
    let obj = value
        .as_object()
        .ok_or_else(|| err(format!("primes.{pkey}: expected an object")))?;
    let mut lambda = ExtCard::ZERO;
    let mut mu = ExtCard::ZERO;
    let mut tail = ExtCard::ZERO;
    let mut kappa = BTreeMap::new();
    for (key, val) in obj {
        let path = format!("primes.{pkey}.{key}");
        match key.as_str() {
            "lambda" => lambda = card_from_json(val, &path)?,
            "mu" => mu = card_from_json(val, &path)?,
            "kappa_tail" => tail = card_from_json(val, &path)?,
            "kappa" => {
                let kobj = val
                    .as_object()
                    .ok_or_else(|| err(format!("{path}: expected an object keyed by levels")))?;
                for (nkey, nval) in kobj {
                    let n: u32 = nkey
                        .parse()
                        .ok()
                        .filter(|&n| n <= MAX_LEVEL)
                        .ok_or_else(|| {
                            err(format!("{path}.{nkey}: key must be a level at most {MAX_LEVEL}"))
                        })?;
                    kappa.insert(n, card_from_json(nval, &format!("{path}.{nkey}"))?);
                }
            }
            other => return Err(err(format!("primes.{pkey}: unknown field '{other}'"))),
        }
    }
    Ok(PrimeComponent::new(kappa, tail, lambda, mu))
}

fn card_from_json(value: &Value, path: &str) -> Result<ExtCard, ParseError> {
    let err = |msg: String| ParseError::new(0, msg);
    match value {
        Value::String(s) if s == "omega" => Ok(Omega),
        Value::Number(n) => match n.as_u64() {
            Some(v) if v <= MAX_BOUND => Ok(Finite(v)),
            Some(_) => Err(err(format!("{path}: value exceeds the maximum of {MAX_BOUND}"))),
            None => Err(err(format!("{path}: expected a non-negative integer"))),
        },
        _ => Err(err(format!("{path}: expected a non-negative integer or \"omega\""))),
    }
}

fn card_to_json(c: ExtCard) -> Value {
    match c {
        Finite(v) => Value::from(v),
        Omega => Value::from("omega"),
    }
}

/// Serializes a descriptor to the JSON format; zero fields are omitted,
/// so the trivial group becomes `{}`.
pub fn descriptor_to_json(d: &SzmielewDescriptor) -> Value {
    let mut obj = serde_json::Map::new();
    if !d.primes().is_empty() {
        let mut pmap = serde_json::Map::new();
        for (&p, comp) in d.primes() {
            let mut cmap = serde_json::Map::new();
            if !comp.kappa_exceptions().is_empty() {
                let kmap: serde_json::Map<String, Value> = comp
                    .kappa_exceptions()
                    .iter()
                    .map(|(&n, &v)| (n.to_string(), card_to_json(v)))
                    .collect();
                cmap.insert("kappa".into(), Value::Object(kmap));
            }
            if !comp.kappa_tail().is_zero() {
                cmap.insert("kappa_tail".into(), card_to_json(comp.kappa_tail()));
            }
            if !comp.lambda().is_zero() {
                cmap.insert("lambda".into(), card_to_json(comp.lambda()));
            }
            if !comp.mu().is_zero() {
                cmap.insert("mu".into(), card_to_json(comp.mu()));
            }
            pmap.insert(p.to_string(), Value::Object(cmap));
        }
        obj.insert("primes".into(), Value::Object(pmap));
    }
    if !d.nu().is_zero() {
        obj.insert("nu".into(), card_to_json(d.nu()));
    }
    Value::Object(obj)
}
