//! Table constructors: gluing a non-positive monoid onto a non-negative
//! one, and turning a group's Cayley table into a product table.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::label::{Label, LabelId, LabelSet, Sign, SignedAlphabet};
use crate::table::{MultiTable, Unbounded};

/// Check that a table is a monoid of the requested sign discipline:
/// every label passes `sign_ok`, the zero label is a two-sided unit,
/// all stored cells are bounded singletons, and every fully evaluable
/// triple associates.
fn check_monoid(side: &'static str, t: &MultiTable, sign_ok: fn(Sign) -> bool) -> Result<()> {
    let a = t.alphabet();
    let fail = |reason: String| Err(Error::NotAMonoid { side, reason });
    for u in a.ids() {
        if !sign_ok(a.sign(u)) {
            return fail(format!("label `{}` has the wrong sign", a.name(u)));
        }
    }
    let zero = a.zero();
    for u in a.ids() {
        let want = LabelSet::singleton(u);
        for (x, y) in [(zero, u), (u, zero)] {
            match t.product(x, y) {
                Ok(s) if *s == want => {}
                Ok(s) => {
                    return fail(format!(
                        "unit law fails: {}*{} = {}",
                        a.name(x),
                        a.name(y),
                        a.render(s)
                    ))
                }
                Err(_) => {
                    return fail(format!(
                        "unit cell {}*{} is not stored",
                        a.name(x),
                        a.name(y)
                    ))
                }
            }
        }
    }
    for (u, v, s) in t.defined_cells() {
        if s.len() != 1 || t.is_infinite(u, v) {
            return fail(format!(
                "product {}*{} = {} is not a bounded singleton",
                a.name(u),
                a.name(v),
                a.render(s)
            ));
        }
    }
    let all: Vec<LabelId> = a.ids().collect();
    for &u in &all {
        for &v in &all {
            for &w in &all {
                let uv = match t.product(u, v) {
                    Ok(s) => s.clone(),
                    Err(Error::WindowExceeded { .. }) => continue,
                    Err(e) => return Err(e),
                };
                let vw = match t.product(v, w) {
                    Ok(s) => s.clone(),
                    Err(Error::WindowExceeded { .. }) => continue,
                    Err(e) => return Err(e),
                };
                let left = match t.set_product(&uv, &LabelSet::singleton(w)) {
                    Ok(s) => s,
                    Err(Error::WindowExceeded { .. }) => continue,
                    Err(e) => return Err(e),
                };
                let right = match t.set_product(&LabelSet::singleton(u), &vw) {
                    Ok(s) => s,
                    Err(Error::WindowExceeded { .. }) => continue,
                    Err(e) => return Err(e),
                };
                if left != right {
                    return fail(format!(
                        "associativity fails at ({},{},{})",
                        a.name(u),
                        a.name(v),
                        a.name(w)
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Glue a non-positive monoid and a non-negative monoid into one table.
///
/// The sides keep their own products; a cross pair with `u` negative and
/// `v` positive multiplies to `{u}` in both orders. The unit is shared and
/// must carry the same label name on both sides; any other shared name is
/// rejected. The result is always a monoid. It passes the full axiom
/// battery exactly when the positive side does on its own (a positive side
/// that is not a group fails the inverse axiom, in the result as well).
pub fn band_compose(neg: &MultiTable, pos: &MultiTable) -> Result<MultiTable> {
    check_monoid("neg", neg, Sign::is_non_positive)?;
    check_monoid("pos", pos, Sign::is_non_negative)?;
    let na = neg.alphabet();
    let pa = pos.alphabet();
    if na.name(na.zero()) != pa.name(pa.zero()) {
        return Err(Error::Format(format!(
            "unit labels differ: `{}` vs `{}`",
            na.name(na.zero()),
            pa.name(pa.zero())
        )));
    }
    for u in na.ids() {
        if u != na.zero() && pa.resolve(na.name(u)).is_ok() {
            return Err(Error::AlphabetOverlap(na.name(u).to_string()));
        }
    }

    // Union alphabet: negative side in its order, then the positive side's
    // non-unit labels in theirs.
    let mut labels: Vec<Label> = na.ids().map(|u| na.label(u).clone()).collect();
    labels.extend(
        pa.ids()
            .filter(|&v| v != pa.zero())
            .map(|v| pa.label(v).clone()),
    );
    let alphabet = SignedAlphabet::new(labels)?;
    let zero = alphabet.zero();

    let mut products: BTreeMap<(LabelId, LabelId), LabelSet> = BTreeMap::new();
    let mut remap_side = |src: &SignedAlphabet, t: &MultiTable| -> Result<()> {
        for (u, v, s) in t.defined_cells() {
            let nu = alphabet.resolve(src.name(u))?;
            let nv = alphabet.resolve(src.name(v))?;
            let ns: LabelSet = s
                .iter()
                .map(|w| alphabet.resolve(src.name(w)))
                .collect::<Result<_>>()?;
            products.insert((nu, nv), ns);
        }
        Ok(())
    };
    remap_side(na, neg)?;
    remap_side(pa, pos)?;

    for u in alphabet.ids() {
        for v in alphabet.ids() {
            if alphabet.sign(u) == Sign::Neg && alphabet.sign(v) == Sign::Pos {
                products.insert((u, v), LabelSet::singleton(u));
                products.insert((v, u), LabelSet::singleton(u));
            }
        }
        products.insert((zero, u), LabelSet::singleton(u));
        products.insert((u, zero), LabelSet::singleton(u));
    }

    if neg.window().is_none() && pos.window().is_none() {
        return MultiTable::explicit(alphabet, products);
    }
    let window = match (neg.window(), pos.window()) {
        (Some(a), Some(b)) => a.min(b),
        (w, x) => w.or(x).expect("one side windowed"),
    };
    let unbounded = Unbounded {
        neg: neg.unbounded().neg || pos.unbounded().neg,
        pos: neg.unbounded().pos || pos.unbounded().pos,
    };
    MultiTable::windowed(
        alphabet,
        window,
        products,
        BTreeSet::new(),
        BTreeSet::new(),
        unbounded,
    )
}

/// A parsed and verified group presentation.
pub(crate) struct Group {
    pub symbols: Vec<String>,
    /// prod[i][j] = index of symbols[i] * symbols[j].
    pub prod: Vec<Vec<usize>>,
    pub identity: usize,
    pub inverse: Vec<usize>,
}

impl Group {
    /// Label name for element `i`: the identity is relabeled `0`.
    pub fn name(&self, i: usize) -> String {
        if i == self.identity {
            "0".to_string()
        } else {
            self.symbols[i].clone()
        }
    }
}

/// Parse a square Cayley array of symbols and verify the group axioms.
/// Rows and columns are indexed by the order in which symbols first appear
/// scanning the array row-major; the conventional layout whose first row
/// lists the elements in column order satisfies this.
pub(crate) fn parse_group(cayley: &[Vec<String>]) -> Result<Group> {
    let n = cayley.len();
    if n == 0 {
        return Err(Error::Format("empty Cayley array".into()));
    }
    if cayley.iter().any(|row| row.len() != n) {
        return Err(Error::Format("Cayley array is not square".into()));
    }
    let mut symbols: Vec<String> = Vec::new();
    for row in cayley {
        for s in row {
            if !symbols.contains(s) {
                symbols.push(s.clone());
            }
        }
    }
    if symbols.len() != n {
        return Err(Error::Format(format!(
            "Cayley array of order {n} mentions {} distinct symbols",
            symbols.len()
        )));
    }
    let index = |s: &str| symbols.iter().position(|t| t == s).expect("collected");
    let prod: Vec<Vec<usize>> = cayley
        .iter()
        .map(|row| row.iter().map(|s| index(s)).collect())
        .collect();

    let identity = (0..n)
        .find(|&e| (0..n).all(|j| prod[e][j] == j && prod[j][e] == j))
        .ok_or_else(|| Error::NotAGroup("no identity element".into()))?;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if prod[prod[i][j]][k] != prod[i][prod[j][k]] {
                    return Err(Error::NotAGroup(format!(
                        "associativity fails at ({},{},{})",
                        symbols[i], symbols[j], symbols[k]
                    )));
                }
            }
        }
    }
    let mut inverse = vec![usize::MAX; n];
    for (i, inv) in inverse.iter_mut().enumerate() {
        *inv = (0..n)
            .find(|&j| prod[i][j] == identity && prod[j][i] == identity)
            .ok_or_else(|| Error::NotAGroup(format!("no inverse for `{}`", symbols[i])))?;
    }
    if (0..n).any(|i| i != identity && symbols[i] == "0") {
        return Err(Error::Format(
            "the symbol `0` must name the identity element".into(),
        ));
    }
    Ok(Group {
        symbols,
        prod,
        identity,
        inverse,
    })
}

/// Turn a square Cayley array of symbols into a deterministic table.
///
/// The identity element is relabeled `0`; every other element becomes a
/// positive label paired with its group inverse.
pub fn group_table(cayley: &[Vec<String>]) -> Result<MultiTable> {
    let group = parse_group(cayley)?;
    let n = group.symbols.len();
    let (identity, prod, inverse) = (group.identity, &group.prod, &group.inverse);
    let name = |i: usize| group.name(i);
    let labels: Vec<Label> = (0..n)
        .map(|i| Label {
            id: name(i),
            sign: if i == identity { Sign::Zero } else { Sign::Pos },
            inverse: if i == identity {
                None
            } else {
                Some(name(inverse[i]))
            },
        })
        .collect();
    let alphabet = SignedAlphabet::new(labels)?;
    let ids: Vec<LabelId> = (0..n)
        .map(|i| alphabet.resolve(&name(i)).expect("declared"))
        .collect();
    let mut products = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            products.insert((ids[i], ids[j]), LabelSet::singleton(ids[prod[i][j]]));
        }
    }
    MultiTable::explicit(alphabet, products)
}
