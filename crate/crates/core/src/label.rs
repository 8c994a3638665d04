//! Element identifiers.
//!
//! Every element of every finite set in this crate is a [`Label`]. Labels are
//! compared structurally; the derived order is the canonical order used to
//! sort carriers, so two computations that build "the same" set produce
//! identical values.

use std::fmt;
use std::sync::Arc;

/// Which summand of a binary coproduct an element came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    L,
    R,
}

/// A totally ordered element identifier.
///
/// Variants are ordered by declaration, then by payload.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Int(i64),
    Name(Arc<str>),
    /// Element of a product; pairs are two-element tuples.
    Tuple(Arc<[Label]>),
    /// A subset, listed in canonical order.
    Set(Arc<[Label]>),
    /// Element of a binary coproduct.
    Tagged(Side, Arc<Label>),
    /// The principal ultrafilter generated by the inner label.
    Principal(Arc<Label>),
}

impl Label {
    pub fn int(i: i64) -> Self {
        Label::Int(i)
    }

    pub fn name(s: &str) -> Self {
        Label::Name(Arc::from(s))
    }

    pub fn pair(a: Label, b: Label) -> Self {
        Label::Tuple(Arc::from(vec![a, b]))
    }

    pub fn tuple(items: Vec<Label>) -> Self {
        Label::Tuple(Arc::from(items))
    }

    pub fn set(items: Vec<Label>) -> Self {
        Label::Set(Arc::from(items))
    }

    pub fn tagged(side: Side, inner: Label) -> Self {
        Label::Tagged(side, Arc::new(inner))
    }

    pub fn principal(inner: Label) -> Self {
        Label::Principal(Arc::new(inner))
    }

    pub fn as_tuple(&self) -> Option<&[Label]> {
        match self {
            Label::Tuple(items) => Some(items),
            _ => None,
        }
    }
}

impl From<i64> for Label {
    fn from(i: i64) -> Self {
        Label::Int(i)
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label::name(s)
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, open: &str, items: &[Label], close: &str) -> fmt::Result {
    f.write_str(open)?;
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{item}")?;
    }
    f.write_str(close)
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Int(i) => write!(f, "{i}"),
            Label::Name(s) => f.write_str(s),
            Label::Tuple(items) => write_list(f, "(", items, ")"),
            Label::Set(items) => write_list(f, "{", items, "}"),
            Label::Tagged(Side::L, inner) => write!(f, "L:{inner}"),
            Label::Tagged(Side::R, inner) => write!(f, "R:{inner}"),
            Label::Principal(inner) => write!(f, "<{inner}>"),
        }
    }
}
