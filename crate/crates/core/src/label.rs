//! Signed alphabets and label sets.
//!
//! A label is an opaque symbol carrying an explicit sign. Numeric-looking ids
//! such as `"-1"` do not imply a sign; the sign field is the only authority.
//! Positive labels always carry an inverse pairing; the pairing is involutive
//! and fixes the zero label. Negative labels never have inverses.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sign of a label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    /// True for `Neg`.
    pub fn is_negative(self) -> bool {
        self == Sign::Neg
    }

    /// True for `Zero` or `Pos`.
    pub fn is_non_negative(self) -> bool {
        self != Sign::Neg
    }

    /// True for `Zero` or `Neg`.
    pub fn is_non_positive(self) -> bool {
        self != Sign::Pos
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Neg => write!(f, "neg"),
            Sign::Zero => write!(f, "zero"),
            Sign::Pos => write!(f, "pos"),
        }
    }
}

/// Index of a label inside its alphabet's declared order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelId(pub u32);

impl LabelId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// One declared label: id string, sign, optional inverse id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Label {
    pub id: String,
    pub sign: Sign,
    /// Declared inverse id. Required for positive labels, the zero label
    /// is its own inverse, negatives carry none.
    pub inverse: Option<String>,
}

/// A finite alphabet of signed labels with a fixed declared order.
///
/// Exactly one label has sign zero. The inverse pairing maps positives to
/// positives involutively and the zero label to itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedAlphabet {
    labels: Vec<Label>,
    /// inverse[i] is the LabelId of labels[i]'s inverse, where defined.
    inverse: Vec<Option<LabelId>>,
    zero: LabelId,
}

impl SignedAlphabet {
    /// Build an alphabet from declared labels, checking the structural rules.
    pub fn new(labels: Vec<Label>) -> Result<Self> {
        let mut zero = None;
        for (i, l) in labels.iter().enumerate() {
            if labels.iter().skip(i + 1).any(|m| m.id == l.id) {
                return Err(Error::Format(format!("duplicate label id `{}`", l.id)));
            }
            if l.sign == Sign::Zero {
                if zero.is_some() {
                    return Err(Error::IdentityMissing);
                }
                zero = Some(LabelId(i as u32));
            }
        }
        let zero = zero.ok_or(Error::IdentityMissing)?;
        let find = |id: &str| -> Option<LabelId> {
            labels
                .iter()
                .position(|l| l.id == id)
                .map(|i| LabelId(i as u32))
        };
        let mut inverse = vec![None; labels.len()];
        for (i, l) in labels.iter().enumerate() {
            match (l.sign, &l.inverse) {
                (Sign::Zero, inv) => {
                    if let Some(inv) = inv {
                        if *inv != l.id {
                            return Err(Error::Format(format!(
                                "zero label must be its own inverse, got `{inv}`"
                            )));
                        }
                    }
                    inverse[i] = Some(zero);
                }
                (Sign::Neg, Some(_)) => {
                    return Err(Error::Format(format!(
                        "negative label `{}` must not declare an inverse",
                        l.id
                    )));
                }
                (Sign::Neg, None) => {}
                (Sign::Pos, Some(inv)) => {
                    let j = find(inv).ok_or_else(|| Error::UnknownLabel(inv.clone()))?;
                    if labels[j.index()].sign != Sign::Pos {
                        return Err(Error::Format(format!(
                            "inverse of positive `{}` must be positive",
                            l.id
                        )));
                    }
                    inverse[i] = Some(j);
                }
                (Sign::Pos, None) => {
                    return Err(Error::Format(format!(
                        "positive label `{}` must declare an inverse",
                        l.id
                    )));
                }
            }
        }
        // Involution: declared pairings must point back.
        for (i, inv) in inverse.iter().enumerate() {
            if let Some(j) = inv {
                if inverse[j.index()] != Some(LabelId(i as u32)) {
                    return Err(Error::Format(format!(
                        "inverse pairing of `{}` is not involutive",
                        labels[i].id
                    )));
                }
            }
        }
        Ok(SignedAlphabet {
            labels,
            inverse,
            zero,
        })
    }

    /// Number of labels.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// True when the alphabet is just the zero label.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// The zero label's id.
    pub fn zero(&self) -> LabelId {
        self.zero
    }

    /// All labels in declared order.
    pub fn ids(&self) -> impl Iterator<Item = LabelId> + '_ {
        (0..self.labels.len() as u32).map(LabelId)
    }

    /// The label record behind an id.
    pub fn label(&self, id: LabelId) -> &Label {
        &self.labels[id.index()]
    }

    /// Sign of a label.
    pub fn sign(&self, id: LabelId) -> Sign {
        self.labels[id.index()].sign
    }

    /// Printable name of a label.
    pub fn name(&self, id: LabelId) -> &str {
        &self.labels[id.index()].id
    }

    /// Resolve an id string.
    pub fn resolve(&self, id: &str) -> Result<LabelId> {
        self.labels
            .iter()
            .position(|l| l.id == id)
            .map(|i| LabelId(i as u32))
            .ok_or_else(|| Error::UnknownLabel(id.to_string()))
    }

    /// Inverse of a label; errors on negatives.
    pub fn inverse_of(&self, id: LabelId) -> Result<LabelId> {
        self.inverse[id.index()]
            .ok_or_else(|| Error::NoInverse(self.name(id).to_string()))
    }

    /// Elementwise inverse of a set; errors if any member is negative.
    pub fn set_inverse(&self, set: &LabelSet) -> Result<LabelSet> {
        let mut out = LabelSet::new();
        for id in set.iter() {
            out.insert(self.inverse_of(id)?);
        }
        Ok(out)
    }

    /// Labels of the given sign, in declared order.
    pub fn with_sign(&self, sign: Sign) -> LabelSet {
        self.ids().filter(|&id| self.sign(id) == sign).collect()
    }

    /// All non-negative labels.
    pub fn non_negative(&self) -> LabelSet {
        self.ids()
            .filter(|&id| self.sign(id).is_non_negative())
            .collect()
    }

    /// All labels as a set.
    pub fn all(&self) -> LabelSet {
        self.ids().collect()
    }

    /// Render a set using declared label names.
    pub fn render(&self, set: &LabelSet) -> String {
        let names: Vec<&str> = set.iter().map(|id| self.name(id)).collect();
        format!("{{{}}}", names.join(","))
    }
}

/// A finite set of labels, ordered by the alphabet's declared order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default, Hash)]
pub struct LabelSet(BTreeSet<LabelId>);

impl LabelSet {
    pub fn new() -> Self {
        LabelSet(BTreeSet::new())
    }

    pub fn singleton(id: LabelId) -> Self {
        let mut s = BTreeSet::new();
        s.insert(id);
        LabelSet(s)
    }

    pub fn insert(&mut self, id: LabelId) -> bool {
        self.0.insert(id)
    }

    pub fn remove(&mut self, id: LabelId) -> bool {
        self.0.remove(&id)
    }

    pub fn contains(&self, id: LabelId) -> bool {
        self.0.contains(&id)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = LabelId> + '_ {
        self.0.iter().copied()
    }

    pub fn union_with(&mut self, other: &LabelSet) {
        self.0.extend(other.0.iter().copied());
    }

    pub fn is_subset(&self, other: &LabelSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn intersection(&self, other: &LabelSet) -> LabelSet {
        LabelSet(self.0.intersection(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &LabelSet) -> LabelSet {
        LabelSet(self.0.difference(&other.0).copied().collect())
    }

    /// First member in declared order, if any.
    pub fn first(&self) -> Option<LabelId> {
        self.0.iter().next().copied()
    }
}

impl FromIterator<LabelId> for LabelSet {
    fn from_iter<I: IntoIterator<Item = LabelId>>(iter: I) -> Self {
        LabelSet(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a LabelSet {
    type Item = LabelId;
    type IntoIter = std::iter::Copied<std::collections::btree_set::Iter<'a, LabelId>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}
