//! Structured point labels.
//!
//! The discrete engine works over finite sets of opaque labels, but the
//! constructions it cares about — sums `X + Y` and tensors `X ⊗ Y` — need
//! labels that remember how they were built.  A [`Label`] is therefore an
//! atom, a tagged copy of a label (`k1:` for the left summand, `k2:` for the
//! right), or a pair.  Every label has a canonical text form that round-trips
//! through [`Label::parse`], so labels can be used directly as JSON map keys:
//!
//! ```
//! use condprob::label::Label;
//!
//! let l = Label::pair(Label::left(Label::atom("M")), Label::atom("W"));
//! assert_eq!(l.to_string(), "(k1:M,W)");
//! assert_eq!(Label::parse("(k1:M,W)").unwrap(), l);
//! ```

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// A point of a finite set: an atom, a tagged summand member, or a pair.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    /// A plain named point.
    Atom(String),
    /// A point of the left summand of a sum, rendered `k1:…`.
    Left(Box<Label>),
    /// A point of the right summand of a sum, rendered `k2:…`.
    Right(Box<Label>),
    /// A point of a tensor of two sets, rendered `(…,…)`.
    Pair(Box<Label>, Box<Label>),
}

impl Label {
    /// Builds an atomic label.
    ///
    /// # Panics
    ///
    /// Panics if the name would not round-trip through the text form: it must
    /// be non-empty and must not contain `(`, `)`, `,`, whitespace, or start
    /// with a `k1:`/`k2:` tag.
    pub fn atom(name: impl Into<String>) -> Self {
        let name = name.into();
        assert!(
            Self::is_valid_atom(&name),
            "invalid atom `{name}`: atoms are non-empty, free of `(`, `)`, `,` \
             and whitespace, and do not start with `k1:` or `k2:`"
        );
        Label::Atom(name)
    }

    /// Tags a label as belonging to the left summand.
    pub fn left(inner: Label) -> Self {
        Label::Left(Box::new(inner))
    }

    /// Tags a label as belonging to the right summand.
    pub fn right(inner: Label) -> Self {
        Label::Right(Box::new(inner))
    }

    /// Pairs two labels into a tensor point.
    pub fn pair(first: Label, second: Label) -> Self {
        Label::Pair(Box::new(first), Box::new(second))
    }

    /// Returns the components if this is a pair label.
    pub fn as_pair(&self) -> Option<(&Label, &Label)> {
        match self {
            Label::Pair(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// Returns true when `name` can be used as an atom.
    pub fn is_valid_atom(name: &str) -> bool {
        !name.is_empty()
            && !name.contains(['(', ')', ','])
            && !name.contains(char::is_whitespace)
            && !name.starts_with("k1:")
            && !name.starts_with("k2:")
    }

    /// Parses the canonical text form.
    pub fn parse(s: &str) -> Result<Label, String> {
        let (label, rest) = parse_prefix(s)?;
        if !rest.is_empty() {
            return Err(format!("trailing characters `{rest}` after label in `{s}`"));
        }
        Ok(label)
    }
}

/// Parses one label from the front of `s`, returning the remainder.
fn parse_prefix(s: &str) -> Result<(Label, &str), String> {
    if let Some(rest) = s.strip_prefix("k1:") {
        let (inner, rest) = parse_prefix(rest)?;
        return Ok((Label::left(inner), rest));
    }
    if let Some(rest) = s.strip_prefix("k2:") {
        let (inner, rest) = parse_prefix(rest)?;
        return Ok((Label::right(inner), rest));
    }
    if let Some(rest) = s.strip_prefix('(') {
        let (first, rest) = parse_prefix(rest)?;
        let rest = rest
            .strip_prefix(',')
            .ok_or_else(|| format!("expected `,` in pair label `{s}`"))?;
        let (second, rest) = parse_prefix(rest)?;
        let rest = rest
            .strip_prefix(')')
            .ok_or_else(|| format!("expected `)` closing pair label `{s}`"))?;
        return Ok((Label::pair(first, second), rest));
    }
    let end = s
        .find([',', ')', '('])
        .unwrap_or(s.len());
    let name = &s[..end];
    if !Label::is_valid_atom(name) {
        return Err(format!("invalid atom `{name}` in label"));
    }
    Ok((Label::Atom(name.to_owned()), &s[end..]))
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Atom(name) => write!(f, "{name}"),
            Label::Left(inner) => write!(f, "k1:{inner}"),
            Label::Right(inner) => write!(f, "k2:{inner}"),
            Label::Pair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Label::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_form_round_trips() {
        let cases = [
            Label::atom("M"),
            Label::left(Label::atom("M")),
            Label::right(Label::pair(Label::atom("a"), Label::atom("b"))),
            Label::pair(
                Label::atom("A"),
                Label::pair(Label::left(Label::atom("x")), Label::atom("y")),
            ),
            Label::left(Label::left(Label::atom("deep"))),
        ];
        for label in cases {
            assert_eq!(Label::parse(&label.to_string()).unwrap(), label);
        }
    }

    #[test]
    fn parses_expected_spellings() {
        assert_eq!(Label::parse("M").unwrap(), Label::atom("M"));
        assert_eq!(
            Label::parse("k2:W").unwrap(),
            Label::right(Label::atom("W"))
        );
        assert_eq!(
            Label::parse("(A,M)").unwrap(),
            Label::pair(Label::atom("A"), Label::atom("M"))
        );
        assert_eq!(
            Label::parse("k1:(A,M)").unwrap(),
            Label::left(Label::pair(Label::atom("A"), Label::atom("M")))
        );
    }

    #[test]
    fn rejects_malformed_text() {
        for bad in ["", "(A", "(A,M", "A,B", "(A,B))", "k1:", "(a b,c)", "x y"] {
            assert!(Label::parse(bad).is_err(), "accepted `{bad}`");
        }
    }

    #[test]
    #[should_panic(expected = "invalid atom")]
    fn atom_constructor_rejects_tag_prefix() {
        let _ = Label::atom("k1:M");
    }

    #[test]
    fn serde_uses_text_form() {
        let label = Label::pair(Label::atom("A"), Label::right(Label::atom("w")));
        let json = serde_json::to_string(&label).unwrap();
        assert_eq!(json, "\"(A,k2:w)\"");
        assert_eq!(serde_json::from_str::<Label>(&json).unwrap(), label);
    }
}
