//! Set-valued product tables over a signed alphabet.
//!
//! A table assigns every pair of labels a nonempty finite set of labels.
//! The explicit backend stores all cells. The windowed backend stores the
//! cells of a rule evaluated up to a declared bound; cells the bound cannot
//! reach answer with [`Error::WindowExceeded`] instead of silently clipping.
//! A windowed cell may carry an infinite marker: the stored members are then
//! the in-window part of a set that keeps growing beyond every bound.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::label::{LabelId, LabelSet, Sign, SignedAlphabet};

/// Which sides of the alphabet continue past the stored labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Unbounded {
    pub neg: bool,
    pub pos: bool,
}

/// Answer for a single cell query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell<'a> {
    /// A stored value; `infinite` marks a window-truncated set.
    Value { set: &'a LabelSet, infinite: bool },
    /// The rule cannot be evaluated inside the declared window.
    OutOfWindow,
    /// A derived cell whose underlying composition was empty.
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Backend {
    Explicit {
        products: BTreeMap<(LabelId, LabelId), LabelSet>,
    },
    Windowed {
        window: u32,
        products: BTreeMap<(LabelId, LabelId), LabelSet>,
        infinite: BTreeSet<(LabelId, LabelId)>,
        empty: BTreeSet<(LabelId, LabelId)>,
        unbounded: Unbounded,
    },
}

/// A set-valued product table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiTable {
    alphabet: SignedAlphabet,
    backend: Backend,
}

impl MultiTable {
    /// Build a total table; every pair of labels must have a nonempty value.
    pub fn explicit(
        alphabet: SignedAlphabet,
        products: BTreeMap<(LabelId, LabelId), LabelSet>,
    ) -> Result<Self> {
        for u in alphabet.ids() {
            for v in alphabet.ids() {
                match products.get(&(u, v)) {
                    None => {
                        return Err(Error::Format(format!(
                            "missing product `{}`*`{}`",
                            alphabet.name(u),
                            alphabet.name(v)
                        )))
                    }
                    Some(s) if s.is_empty() => {
                        return Err(Error::Format(format!(
                            "empty product `{}`*`{}`",
                            alphabet.name(u),
                            alphabet.name(v)
                        )))
                    }
                    Some(_) => {}
                }
            }
        }
        if products.len() != alphabet.len() * alphabet.len() {
            return Err(Error::Format("product entry for undeclared label".into()));
        }
        Ok(MultiTable {
            alphabet,
            backend: Backend::Explicit { products },
        })
    }

    /// Build a window-bounded table. Missing cells answer `WindowExceeded`;
    /// `infinite` marks stored cells that are truncations of unbounded sets;
    /// `empty` marks cells whose defining composition had no pairs at all.
    pub fn windowed(
        alphabet: SignedAlphabet,
        window: u32,
        products: BTreeMap<(LabelId, LabelId), LabelSet>,
        infinite: BTreeSet<(LabelId, LabelId)>,
        empty: BTreeSet<(LabelId, LabelId)>,
        unbounded: Unbounded,
    ) -> Result<Self> {
        for (&(u, v), s) in &products {
            if s.is_empty() {
                return Err(Error::Format(format!(
                    "empty product `{}`*`{}`",
                    alphabet.name(u),
                    alphabet.name(v)
                )));
            }
            if empty.contains(&(u, v)) {
                return Err(Error::Format(format!(
                    "cell `{}`*`{}` is both valued and empty",
                    alphabet.name(u),
                    alphabet.name(v)
                )));
            }
        }
        for &(u, v) in &infinite {
            if !products.contains_key(&(u, v)) {
                return Err(Error::Format(format!(
                    "infinite marker on absent cell `{}`*`{}`",
                    alphabet.name(u),
                    alphabet.name(v)
                )));
            }
        }
        Ok(MultiTable {
            alphabet,
            backend: Backend::Windowed {
                window,
                products,
                infinite,
                empty,
                unbounded,
            },
        })
    }

    pub fn alphabet(&self) -> &SignedAlphabet {
        &self.alphabet
    }

    /// Declared window bound, if this table is rule-backed.
    pub fn window(&self) -> Option<u32> {
        match &self.backend {
            Backend::Explicit { .. } => None,
            Backend::Windowed { window, .. } => Some(*window),
        }
    }

    /// Which alphabet sides continue past the stored labels.
    pub fn unbounded(&self) -> Unbounded {
        match &self.backend {
            Backend::Explicit { .. } => Unbounded::default(),
            Backend::Windowed { unbounded, .. } => *unbounded,
        }
    }

    /// Inspect one cell without flattening window answers into errors.
    pub fn cell(&self, u: LabelId, v: LabelId) -> Cell<'_> {
        match &self.backend {
            Backend::Explicit { products } => Cell::Value {
                set: &products[&(u, v)],
                infinite: false,
            },
            Backend::Windowed {
                products,
                infinite,
                empty,
                ..
            } => {
                if let Some(set) = products.get(&(u, v)) {
                    Cell::Value {
                        set,
                        infinite: infinite.contains(&(u, v)),
                    }
                } else if empty.contains(&(u, v)) {
                    Cell::Empty
                } else {
                    Cell::OutOfWindow
                }
            }
        }
    }

    /// The product of two labels.
    pub fn product(&self, u: LabelId, v: LabelId) -> Result<&LabelSet> {
        match self.cell(u, v) {
            Cell::Value { set, .. } => Ok(set),
            Cell::OutOfWindow => Err(Error::WindowExceeded {
                left: self.alphabet.name(u).to_string(),
                right: self.alphabet.name(v).to_string(),
                window: self.window().unwrap_or(0),
            }),
            Cell::Empty => Err(Error::EmptyComposition {
                left: self.alphabet.name(u).to_string(),
                right: self.alphabet.name(v).to_string(),
            }),
        }
    }

    /// True when the stored value of `u*v` is the window truncation of an
    /// unbounded set.
    pub fn is_infinite(&self, u: LabelId, v: LabelId) -> bool {
        matches!(self.cell(u, v), Cell::Value { infinite: true, .. })
    }

    /// True when no cell carries an infinite marker.
    pub fn all_cells_finite(&self) -> bool {
        match &self.backend {
            Backend::Explicit { .. } => true,
            Backend::Windowed { infinite, .. } => infinite.is_empty(),
        }
    }

    /// Product of two nonempty sets: the union of member products.
    pub fn set_product(&self, xs: &LabelSet, ys: &LabelSet) -> Result<LabelSet> {
        if xs.is_empty() || ys.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut out = LabelSet::new();
        for x in xs.iter() {
            for y in ys.iter() {
                out.union_with(self.product(x, y)?);
            }
        }
        Ok(out)
    }

    /// Left-to-right fold of a nonempty word of labels.
    pub fn word_product(&self, word: &[LabelId]) -> Result<LabelSet> {
        let (&first, rest) = word.split_first().ok_or(Error::EmptySet)?;
        let mut acc = LabelSet::singleton(first);
        for &u in rest {
            acc = self.set_product(&acc, &LabelSet::singleton(u))?;
        }
        Ok(acc)
    }

    /// Every defined cell is a singleton.
    pub fn is_deterministic(&self) -> bool {
        self.defined_cells().all(|(_, _, s)| s.len() == 1)
    }

    /// Iterate over stored cells in declared label order.
    pub fn defined_cells(&self) -> impl Iterator<Item = (LabelId, LabelId, &LabelSet)> + '_ {
        let products = match &self.backend {
            Backend::Explicit { products } => products,
            Backend::Windowed { products, .. } => products,
        };
        products.iter().map(|(&(u, v), s)| (u, v, s))
    }

    /// Restrict to a label subset. The subset must contain the zero label,
    /// be closed under products of its stored cells, and keep inverse pairs
    /// together; otherwise the restriction would not be a table at all.
    pub fn restrict_to(&self, keep: &LabelSet) -> Result<MultiTable> {
        if !keep.contains(self.alphabet.zero()) {
            return Err(Error::IdentityMissing);
        }
        for id in keep.iter() {
            if self.alphabet.sign(id) == Sign::Pos {
                let inv = self.alphabet.inverse_of(id)?;
                if !keep.contains(inv) {
                    return Err(Error::Format(format!(
                        "restriction drops `{}` but keeps its inverse partner `{}`",
                        self.alphabet.name(inv),
                        self.alphabet.name(id)
                    )));
                }
            }
        }
        let labels = keep
            .iter()
            .map(|id| self.alphabet.label(id).clone())
            .collect();
        let alphabet = SignedAlphabet::new(labels)?;
        let map_id = |old: LabelId| -> LabelId {
            let name = self.alphabet.name(old);
            alphabet.resolve(name).expect("kept label")
        };
        let mut products = BTreeMap::new();
        let mut infinite = BTreeSet::new();
        let mut empty = BTreeSet::new();
        for u in keep.iter() {
            for v in keep.iter() {
                match self.cell(u, v) {
                    Cell::Value { set, infinite: inf } => {
                        for w in set.iter() {
                            if !keep.contains(w) {
                                return Err(Error::ClosureViolation {
                                    node: self.alphabet.render(keep),
                                    left: self.alphabet.name(u).to_string(),
                                    right: self.alphabet.name(v).to_string(),
                                });
                            }
                        }
                        let mapped: LabelSet = set.iter().map(map_id).collect();
                        if inf {
                            infinite.insert((map_id(u), map_id(v)));
                        }
                        products.insert((map_id(u), map_id(v)), mapped);
                    }
                    Cell::OutOfWindow => {}
                    Cell::Empty => {
                        empty.insert((map_id(u), map_id(v)));
                    }
                }
            }
        }
        match &self.backend {
            Backend::Explicit { .. } => MultiTable::explicit(alphabet, products),
            Backend::Windowed {
                window, unbounded, ..
            } => MultiTable::windowed(alphabet, *window, products, infinite, empty, *unbounded),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::Label;

    fn alpha(specs: &[(&str, Sign, Option<&str>)]) -> SignedAlphabet {
        SignedAlphabet::new(
            specs
                .iter()
                .map(|(id, sign, inv)| Label {
                    id: id.to_string(),
                    sign: *sign,
                    inverse: inv.map(str::to_string),
                })
                .collect(),
        )
        .unwrap()
    }

    /// Two-label table: {-1,0} with -1*-1 = {-1}.
    fn tiny() -> MultiTable {
        let a = alpha(&[("-1", Sign::Neg, None), ("0", Sign::Zero, None)]);
        let n = a.resolve("-1").unwrap();
        let z = a.resolve("0").unwrap();
        let mut m = BTreeMap::new();
        m.insert((z, z), LabelSet::singleton(z));
        m.insert((z, n), LabelSet::singleton(n));
        m.insert((n, z), LabelSet::singleton(n));
        m.insert((n, n), LabelSet::singleton(n));
        MultiTable::explicit(a, m).unwrap()
    }

    #[test]
    fn explicit_tables_must_be_total() {
        let a = alpha(&[("-1", Sign::Neg, None), ("0", Sign::Zero, None)]);
        let z = a.resolve("0").unwrap();
        let mut m = BTreeMap::new();
        m.insert((z, z), LabelSet::singleton(z));
        assert!(matches!(
            MultiTable::explicit(a, m),
            Err(Error::Format(_))
        ));
    }

    #[test]
    fn empty_values_are_rejected() {
        let a = alpha(&[("0", Sign::Zero, None)]);
        let z = a.resolve("0").unwrap();
        let mut m = BTreeMap::new();
        m.insert((z, z), LabelSet::new());
        assert!(matches!(MultiTable::explicit(a, m), Err(Error::Format(_))));
    }

    #[test]
    fn set_product_unions_member_cells() {
        let t = tiny();
        let all: LabelSet = t.alphabet().ids().collect();
        let n = t.alphabet().resolve("-1").unwrap();
        let got = t.set_product(&all, &all).unwrap();
        let want: LabelSet = [n, t.alphabet().zero()].into_iter().collect();
        assert_eq!(got, want);
    }

    #[test]
    fn set_product_rejects_empty_operands() {
        let t = tiny();
        let all: LabelSet = t.alphabet().ids().collect();
        assert_eq!(
            t.set_product(&LabelSet::new(), &all).unwrap_err(),
            Error::EmptySet
        );
    }

    #[test]
    fn word_product_folds_left() {
        let t = tiny();
        let n = t.alphabet().resolve("-1").unwrap();
        let z = t.alphabet().zero();
        assert_eq!(t.word_product(&[z]).unwrap(), LabelSet::singleton(z));
        assert_eq!(
            t.word_product(&[n, z, n]).unwrap(),
            LabelSet::singleton(n)
        );
        assert_eq!(t.word_product(&[]).unwrap_err(), Error::EmptySet);
    }

    #[test]
    fn windowed_cells_answer_out_of_window() {
        let a = alpha(&[("0", Sign::Zero, None), ("-1", Sign::Neg, None)]);
        let z = a.zero();
        let n = a.resolve("-1").unwrap();
        let mut m = BTreeMap::new();
        m.insert((z, z), LabelSet::singleton(z));
        m.insert((z, n), LabelSet::singleton(n));
        m.insert((n, z), LabelSet::singleton(n));
        // (n, n) deliberately absent: the rule runs past the window there.
        let t = MultiTable::windowed(
            a,
            1,
            m,
            BTreeSet::new(),
            BTreeSet::new(),
            Unbounded { neg: true, pos: false },
        )
        .unwrap();
        assert!(matches!(t.cell(n, n), Cell::OutOfWindow));
        assert!(matches!(
            t.product(n, n),
            Err(Error::WindowExceeded { .. })
        ));
        // A set product touching the missing cell propagates the error.
        let all: LabelSet = t.alphabet().ids().collect();
        assert!(t.set_product(&all, &all).is_err());
    }

    #[test]
    fn restriction_requires_closure() {
        let t = tiny();
        let z = t.alphabet().zero();
        let n = t.alphabet().resolve("-1").unwrap();
        let keep: LabelSet = [z].into_iter().collect();
        // {0} is closed: restriction succeeds and has one label.
        let r = t.restrict_to(&keep).unwrap();
        assert_eq!(r.alphabet().len(), 1);
        // {-1,0} is the whole table.
        let keep: LabelSet = [z, n].into_iter().collect();
        let r = t.restrict_to(&keep).unwrap();
        assert_eq!(r, t);
    }

    #[test]
    fn restriction_keeps_inverse_pairs_together() {
        let a = alpha(&[
            ("0", Sign::Zero, None),
            ("1", Sign::Pos, Some("2")),
            ("2", Sign::Pos, Some("1")),
        ]);
        let z = a.zero();
        let one = a.resolve("1").unwrap();
        let two = a.resolve("2").unwrap();
        let mut m = BTreeMap::new();
        for u in a.ids() {
            for v in a.ids() {
                // Cyclic group of order 3 written additively on indices.
                let s = (u.0 + v.0) % 3;
                m.insert((u, v), LabelSet::singleton(LabelId(s)));
            }
        }
        let t = MultiTable::explicit(a, m).unwrap();
        let keep: LabelSet = [z, one].into_iter().collect();
        assert!(t.restrict_to(&keep).is_err());
        let keep: LabelSet = [z, one, two].into_iter().collect();
        assert!(t.restrict_to(&keep).is_ok());
    }
}
