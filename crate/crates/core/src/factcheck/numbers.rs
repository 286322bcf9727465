//! Recognition of cardinal numbers written as digits, as words
//! ("six", "twenty-one", "twenty - one") or as a/an meaning one.

use super::Span;

/// A recognised number and the tokens it occupies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NumberMatch {
    pub value: u32,
    pub span: Span,
}

const UNITS: [&str; 20] = [
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven", "twelve",
    "thirteen", "fourteen", "fifteen", "sixteen", "seventeen", "eighteen", "nineteen",
];
const TENS: [&str; 8] = ["twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty", "ninety"];

/// Singular nouns after which "a"/"an" denotes the quantity one.
const SINGULAR_COUNT_NOUNS: &[&str] = &[
    "point", "rebound", "board", "assist", "dime", "steal", "block", "turnover", "three-pointer", "3-pointer",
    "three", "trey", "basket", "field", "free", "foul",
];

pub(crate) fn unit_value(word: &str) -> Option<u32> {
    UNITS.iter().position(|u| *u == word).map(|v| v as u32)
}

fn tens_value(word: &str) -> Option<u32> {
    TENS.iter().position(|t| *t == word).map(|v| 20 + 10 * v as u32)
}

/// Value of a single word-number token such as "six" or "twenty-one".
pub(crate) fn word_value(word: &str) -> Option<u32> {
    let w = word.to_ascii_lowercase();
    if let Some(v) = unit_value(&w).or_else(|| tens_value(&w)) {
        return Some(v);
    }
    if w == "hundred" {
        return None;
    }
    let (tens, unit) = w.split_once('-')?;
    let t = tens_value(tens)?;
    let u = unit_value(unit).filter(|&u| (1..=9).contains(&u))?;
    Some(t + u)
}

pub(crate) fn digit_value(token: &str) -> Option<u32> {
    if token.is_empty() || token.len() > 4 || !token.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    token.parse().ok()
}

/// Splits a single token such as `102-91` or `5-2` into its two numbers.
pub fn parse_pair_token(token: &str) -> Option<(u32, u32)> {
    let (a, b) = token.split_once('-')?;
    Some((digit_value(a)?, digit_value(b)?))
}

/// Parses the number starting at `pos`, if any. Never spans more than three
/// tokens. "a"/"an" count as one only before a singular count noun.
pub fn parse_number_token(tokens: &[String], pos: usize) -> Option<NumberMatch> {
    let tok = tokens.get(pos)?;
    let lower = tok.to_ascii_lowercase();
    let single = |value| Some(NumberMatch { value, span: Span::new(pos, pos) });
    let next = |k: usize| tokens.get(pos + k).map(|t| t.to_ascii_lowercase());

    if let Some(v) = digit_value(tok) {
        return single(v);
    }
    if lower == "a" || lower == "an" {
        if next(1).is_some_and(|n| n == "hundred") {
            return Some(NumberMatch { value: 100, span: Span::new(pos, pos + 1) });
        }
        return next(1).filter(|n| SINGULAR_COUNT_NOUNS.contains(&n.as_str())).and_then(|_| single(1));
    }
    if lower == "one" && next(1).is_some_and(|n| n == "hundred") {
        return Some(NumberMatch { value: 100, span: Span::new(pos, pos + 1) });
    }
    if let Some(t) = tens_value(&lower) {
        // "twenty - one" and "twenty one"
        if next(1).as_deref() == Some("-") {
            if let Some(u) = next(2).and_then(|n| unit_value(&n)).filter(|u| (1..=9).contains(u)) {
                return Some(NumberMatch { value: t + u, span: Span::new(pos, pos + 2) });
            }
        }
        if let Some(u) = next(1).and_then(|n| unit_value(&n)).filter(|u| (1..=9).contains(u)) {
            return Some(NumberMatch { value: t + u, span: Span::new(pos, pos + 1) });
        }
        return single(t);
    }
    word_value(&lower).and_then(single)
}

const ORDINALS: [&str; 20] = [
    "first", "second", "third", "fourth", "fifth", "sixth", "seventh", "eighth", "ninth", "tenth", "eleventh",
    "twelfth", "thirteenth", "fourteenth", "fifteenth", "sixteenth", "seventeenth", "eighteenth", "nineteenth",
    "twentieth",
];

/// True for ordinal tokens ("third", "3rd").
pub fn is_ordinal(token: &str) -> bool {
    let lower = token.to_ascii_lowercase();
    if ORDINALS.contains(&lower.as_str()) {
        return true;
    }
    let digits = lower.trim_end_matches(|c: char| c.is_ascii_alphabetic());
    let suffix = &lower[digits.len()..];
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) && matches!(suffix, "st" | "nd" | "rd" | "th")
}

/// True for a single-token spelled-out number ("six", "twenty-one").
pub fn is_number_word(token: &str) -> bool {
    word_value(token).is_some() || token.eq_ignore_ascii_case("hundred")
}
