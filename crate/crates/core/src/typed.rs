//! Sort-indexed tables: labels classified by source and target sorts, with
//! partial products defined exactly when the middle sorts agree.
//!
//! The label family `mu` must be regular: the zero label sits on every
//! diagonal class and nowhere else, distinct classes share nothing beyond
//! that, and the classes cover the alphabet. Products within one diagonal
//! class are total; cross-class products may be undefined, a distinct
//! outcome rather than an error.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::label::{Label, LabelId, LabelSet, Sign, SignedAlphabet};
use crate::table::MultiTable;
use crate::validate::{validate_table, CheckStatus};

/// Index into a table's sort list.
pub type SortId = usize;

/// Product key: source sort, middle sort, target sort, left label, right
/// label. The left label lives in mu(source, middle), the right one in
/// mu(middle, target).
type ProductKey = (SortId, SortId, SortId, LabelId, LabelId);

/// Outcome of one typed product query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypedCell<'a> {
    Value(&'a LabelSet),
    /// Sorts compose but the table does not define this product.
    Undefined,
    /// Middle sorts differ; the triples cannot compose at all.
    NotComposable,
}

/// A table over a family of sorts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypedTable {
    sorts: Vec<String>,
    alphabet: SignedAlphabet,
    mu: BTreeMap<(SortId, SortId), LabelSet>,
    products: BTreeMap<ProductKey, LabelSet>,
}

impl TypedTable {
    /// Build a typed table, enforcing regularity of `mu` and well-typed
    /// products.
    pub fn new(
        sorts: Vec<String>,
        alphabet: SignedAlphabet,
        mu: BTreeMap<(SortId, SortId), LabelSet>,
        products: BTreeMap<ProductKey, LabelSet>,
    ) -> Result<Self> {
        if sorts.is_empty() {
            return Err(Error::Format("no sorts declared".into()));
        }
        for (i, s) in sorts.iter().enumerate() {
            if sorts.iter().skip(i + 1).any(|t| t == s) {
                return Err(Error::Format(format!("duplicate sort `{s}`")));
            }
        }
        let n = sorts.len();
        let zero = alphabet.zero();
        let empty = LabelSet::new();
        let class = |p: SortId, q: SortId| mu.get(&(p, q)).unwrap_or(&empty);
        for &(p, q) in mu.keys() {
            if p >= n || q >= n {
                return Err(Error::Format("mu entry names an undeclared sort".into()));
            }
        }
        let mut covered = LabelSet::new();
        for p in 0..n {
            for q in 0..n {
                let set = class(p, q);
                if (p == q) != set.contains(zero) {
                    return Err(Error::RegularityViolation(format!(
                        "zero label must lie in mu({p},{q}) exactly when the sorts agree",
                    )));
                }
                covered.union_with(set);
                for p2 in 0..n {
                    for q2 in 0..n {
                        if (p2, q2) <= (p, q) {
                            continue;
                        }
                        let other = class(p2, q2);
                        let shared = set.intersection(other);
                        let allowed = if p == q && p2 == q2 {
                            LabelSet::singleton(zero)
                        } else {
                            LabelSet::new()
                        };
                        if shared != allowed && !shared.is_empty() {
                            return Err(Error::RegularityViolation(format!(
                                "mu({p},{q}) and mu({p2},{q2}) share {}",
                                alphabet.render(&shared)
                            )));
                        }
                    }
                }
            }
        }
        if covered != alphabet.all() {
            return Err(Error::RegularityViolation(
                "mu classes do not cover the alphabet".into(),
            ));
        }
        for (&(p, q, r, u, v), set) in &products {
            if p >= n || q >= n || r >= n {
                return Err(Error::Format("product names an undeclared sort".into()));
            }
            if !class(p, q).contains(u) {
                return Err(Error::RegularityViolation(format!(
                    "left label `{}` of a ({p},{q},{r}) product is not in mu({p},{q})",
                    alphabet.name(u)
                )));
            }
            if !class(q, r).contains(v) {
                return Err(Error::RegularityViolation(format!(
                    "right label `{}` of a ({p},{q},{r}) product is not in mu({q},{r})",
                    alphabet.name(v)
                )));
            }
            if set.is_empty() {
                return Err(Error::Format(format!(
                    "empty product of ({p},{},{q}) and ({q},{},{r})",
                    alphabet.name(u),
                    alphabet.name(v)
                )));
            }
            if !set.is_subset(class(p, r)) {
                return Err(Error::RegularityViolation(format!(
                    "product of ({p},{},{q}) and ({q},{},{r}) leaves mu({p},{r})",
                    alphabet.name(u),
                    alphabet.name(v)
                )));
            }
        }
        Ok(TypedTable {
            sorts,
            alphabet,
            mu,
            products,
        })
    }

    pub fn sorts(&self) -> &[String] {
        &self.sorts
    }

    pub fn alphabet(&self) -> &SignedAlphabet {
        &self.alphabet
    }

    pub fn sort_id(&self, name: &str) -> Result<SortId> {
        self.sorts
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::Format(format!("unknown sort `{name}`")))
    }

    /// The label class mu(p,q).
    pub fn class(&self, p: SortId, q: SortId) -> LabelSet {
        self.mu.get(&(p, q)).cloned().unwrap_or_default()
    }

    /// All stored products.
    pub fn defined_products(
        &self,
    ) -> impl Iterator<Item = (SortId, SortId, SortId, LabelId, LabelId, &LabelSet)> + '_ {
        self.products
            .iter()
            .map(|(&(p, q, r, u, v), s)| (p, q, r, u, v, s))
    }

    /// Product of the triples (p,u,q) and (q2,v,r).
    pub fn typed_product(
        &self,
        p: SortId,
        u: LabelId,
        q: SortId,
        q2: SortId,
        v: LabelId,
        r: SortId,
    ) -> TypedCell<'_> {
        if q != q2 {
            return TypedCell::NotComposable;
        }
        match self.products.get(&(p, q, r, u, v)) {
            Some(s) => TypedCell::Value(s),
            None => TypedCell::Undefined,
        }
    }

    /// Set product (p,X,q)*(q,Y,r): the union over member pairs. Undefined
    /// as soon as any member pair is undefined.
    pub fn typed_set_product(
        &self,
        p: SortId,
        xs: &LabelSet,
        q: SortId,
        ys: &LabelSet,
        r: SortId,
    ) -> Result<Option<LabelSet>> {
        if xs.is_empty() || ys.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut out = LabelSet::new();
        for u in xs.iter() {
            for v in ys.iter() {
                match self.typed_product(p, u, q, q, v, r) {
                    TypedCell::Value(s) => out.union_with(s),
                    TypedCell::Undefined => return Ok(None),
                    TypedCell::NotComposable => unreachable!("middle sort fixed"),
                }
            }
        }
        Ok(Some(out))
    }

    /// Extract one diagonal class as a plain table. Fails when the class
    /// is not total or its inverses leave the class.
    pub fn diagonal(&self, p: SortId) -> Result<MultiTable> {
        let class = self.class(p, p);
        let labels: Vec<Label> = class
            .iter()
            .map(|u| self.alphabet.label(u).clone())
            .collect();
        let alphabet = SignedAlphabet::new(labels)?;
        let mut products = BTreeMap::new();
        for u in class.iter() {
            for v in class.iter() {
                let set = match self.typed_product(p, u, p, p, v, p) {
                    TypedCell::Value(s) => s,
                    _ => {
                        return Err(Error::Format(format!(
                            "diagonal product {}*{} of sort `{}` is undefined",
                            self.alphabet.name(u),
                            self.alphabet.name(v),
                            self.sorts[p]
                        )))
                    }
                };
                let nu = alphabet.resolve(self.alphabet.name(u))?;
                let nv = alphabet.resolve(self.alphabet.name(v))?;
                let ns: LabelSet = set
                    .iter()
                    .map(|w| alphabet.resolve(self.alphabet.name(w)))
                    .collect::<Result<_>>()?;
                products.insert((nu, nv), ns);
            }
        }
        MultiTable::explicit(alphabet, products)
    }

    /// Wrap a plain table as a single-sort typed table.
    pub fn from_single(sort: &str, t: &MultiTable) -> Result<TypedTable> {
        if t.window().is_some() {
            return Err(Error::Format(
                "windowed tables cannot be wrapped as typed tables".into(),
            ));
        }
        let alphabet = t.alphabet().clone();
        let mut mu = BTreeMap::new();
        mu.insert((0, 0), alphabet.all());
        let mut products = BTreeMap::new();
        for (u, v, s) in t.defined_cells() {
            products.insert((0, 0, 0, u, v), s.clone());
        }
        TypedTable::new(vec![sort.to_string()], alphabet, mu, products)
    }
}

/// One entry of the typed validation battery.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypedCheck {
    pub name: &'static str,
    pub title: &'static str,
    pub status: CheckStatus,
    pub witness: Option<String>,
}

/// Result of the typed validation battery.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypedReport {
    pub checks: Vec<TypedCheck>,
}

impl TypedReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn check(&self, name: &str) -> &TypedCheck {
        self.checks
            .iter()
            .find(|c| c.name == name)
            .expect("fixed catalogue")
    }
}

struct CheckBuilder {
    name: &'static str,
    title: &'static str,
    tested: usize,
    witness: Option<String>,
}

impl CheckBuilder {
    fn new(name: &'static str, title: &'static str) -> Self {
        CheckBuilder {
            name,
            title,
            tested: 0,
            witness: None,
        }
    }

    fn hold(&mut self) {
        self.tested += 1;
    }

    fn violate(&mut self, witness: String) {
        if self.witness.is_none() {
            self.witness = Some(witness);
        }
    }

    fn done(&mut self) -> bool {
        self.witness.is_some()
    }

    fn finish(self) -> TypedCheck {
        let status = match (&self.witness, self.tested) {
            (Some(_), _) => CheckStatus::Fail,
            (None, 0) => CheckStatus::VacuousPass,
            (None, _) => CheckStatus::Pass,
        };
        TypedCheck {
            name: self.name,
            title: self.title,
            status,
            witness: self.witness,
        }
    }
}

/// Run the typed axiom battery.
pub fn validate_typed(t: &TypedTable) -> TypedReport {
    let a = t.alphabet();
    let n = t.sorts().len();
    let mut checks = Vec::new();

    // Regularity is enforced by the constructor; re-assert it here so the
    // report carries an explicit entry.
    let mut reg = CheckBuilder::new("regularity", "label classes form a regular family");
    reg.hold();
    checks.push(reg.finish());

    let mut diag = CheckBuilder::new("diagonals", "every diagonal class is a valid table");
    for p in 0..n {
        match t.diagonal(p) {
            Ok(table) => {
                let report = validate_table(&table);
                if report.passed() {
                    diag.hold();
                } else {
                    let failed: Vec<&str> =
                        report.failures().map(|c| c.id.name()).collect();
                    diag.violate(format!(
                        "diagonal of sort `{}` fails {}",
                        t.sorts()[p],
                        failed.join(",")
                    ));
                }
            }
            Err(e) => diag.violate(format!(
                "diagonal of sort `{}` does not extract: {e}",
                t.sorts()[p]
            )),
        }
    }
    checks.push(diag.finish());

    let mut absorb = CheckBuilder::new(
        "negative-absorption",
        "negative factors absorb into negatives",
    );
    let mut positive = CheckBuilder::new("positive-closure", "positive pairs stay non-negative");
    for (p, q, r, u, v, set) in t.defined_products() {
        let triple = |w: LabelId| {
            format!(
                "({p},{},{q})*({q},{},{r}) = {} contains `{}`",
                a.name(u),
                a.name(v),
                a.render(set),
                a.name(w)
            )
        };
        if a.sign(u) == Sign::Neg || a.sign(v) == Sign::Neg {
            if let Some(bad) = set.iter().find(|&w| !a.sign(w).is_negative()) {
                absorb.violate(triple(bad));
            } else {
                absorb.hold();
            }
        }
        if a.sign(u) == Sign::Pos && a.sign(v) == Sign::Pos {
            if let Some(bad) = set.iter().find(|&w| a.sign(w).is_negative()) {
                positive.violate(triple(bad));
            } else {
                positive.hold();
            }
        }
    }
    checks.push(absorb.finish());
    checks.push(positive.finish());

    let mut inverse = CheckBuilder::new(
        "inverses",
        "positive labels have a unique typed two-sided inverse",
    );
    for p in 0..n {
        for q in 0..n {
            let class = t.class(p, q);
            for u in class.iter() {
                if a.sign(u) != Sign::Pos {
                    continue;
                }
                let Ok(inv) = a.inverse_of(u) else {
                    inverse.violate(format!("`{}` has no declared inverse", a.name(u)));
                    continue;
                };
                let back = t.class(q, p);
                if !back.contains(inv) {
                    inverse.violate(format!(
                        "inverse `{}` of `{}` is missing from mu({q},{p})",
                        a.name(inv),
                        a.name(u)
                    ));
                    continue;
                }
                let zero = a.zero();
                let backward = t.typed_product(q, inv, p, p, u, q);
                let forward = t.typed_product(p, u, q, q, inv, p);
                match (backward, forward) {
                    (TypedCell::Value(b), TypedCell::Value(f))
                        if b.contains(zero) && f.contains(zero) =>
                    {
                        // Uniqueness: no second label in mu(q,p) pairs to zero.
                        let stray = back.iter().find(|&v| {
                            v != inv
                                && matches!(
                                    t.typed_product(q, v, p, p, u, q),
                                    TypedCell::Value(s) if s.contains(zero))
                                && matches!(
                                    t.typed_product(p, u, q, q, v, p),
                                    TypedCell::Value(s) if s.contains(zero))
                        });
                        match stray {
                            Some(v) => inverse.violate(format!(
                                "`{}` is a second two-sided inverse of `{}`",
                                a.name(v),
                                a.name(u)
                            )),
                            None => inverse.hold(),
                        }
                    }
                    _ => inverse.violate(format!(
                        "({q},{},{p})*({p},{},{q}) does not produce the zero label",
                        a.name(inv),
                        a.name(u)
                    )),
                }
            }
        }
    }
    checks.push(inverse.finish());

    let mut anti = CheckBuilder::new(
        "anti-homomorphism",
        "inversion reverses positive typed products",
    );
    for (p, q, r, v1, v2, set) in t.defined_products() {
        if a.sign(v1) == Sign::Neg || a.sign(v2) == Sign::Neg {
            continue;
        }
        for u in set.iter().filter(|&u| a.sign(u) == Sign::Pos) {
            let (Ok(i1), Ok(i2), Ok(ui)) =
                (a.inverse_of(v1), a.inverse_of(v2), a.inverse_of(u))
            else {
                continue;
            };
            match t.typed_product(r, i2, q, q, i1, p) {
                TypedCell::Value(rev) if rev.contains(ui) => anti.hold(),
                TypedCell::Value(rev) => anti.violate(format!(
                    "`{}` in ({p},{},{q})*({q},{},{r}) but `{}` missing from {}",
                    a.name(u),
                    a.name(v1),
                    a.name(v2),
                    a.name(ui),
                    a.render(rev)
                )),
                _ => anti.violate(format!(
                    "`{}` in a positive product but the reversed product ({r},{},{q})*({q},{},{p}) is undefined",
                    a.name(u),
                    a.name(i2),
                    a.name(i1)
                )),
            }
        }
    }
    checks.push(anti.finish());

    let mut assoc = CheckBuilder::new(
        "semi-associativity",
        "left-folded typed products cover right-folded ones",
    );
    let mut strictness = CheckBuilder::new(
        "strictness",
        "typed folds never differ on a finite table",
    );
    'chains: for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let c1 = t.class(p, q);
                    let c2 = t.class(q, r);
                    let c3 = t.class(r, s);
                    for u1 in c1.iter() {
                        for u2 in c2.iter() {
                            for u3 in c3.iter() {
                                let inner_right =
                                    match t.typed_product(q, u2, r, r, u3, s) {
                                        TypedCell::Value(x) => x.clone(),
                                        _ => continue,
                                    };
                                let right = match t.typed_set_product(
                                    p,
                                    &LabelSet::singleton(u1),
                                    q,
                                    &inner_right,
                                    s,
                                ) {
                                    Ok(Some(x)) => x,
                                    _ => continue,
                                };
                                let chain = format!(
                                    "({p},{},{q}),({q},{},{r}),({r},{},{s})",
                                    a.name(u1),
                                    a.name(u2),
                                    a.name(u3)
                                );
                                let inner_left =
                                    match t.typed_product(p, u1, q, q, u2, r) {
                                        TypedCell::Value(x) => x.clone(),
                                        _ => {
                                            assoc.violate(format!(
                                                "right fold of {chain} is defined but the left fold is not"
                                            ));
                                            continue;
                                        }
                                    };
                                let left = match t.typed_set_product(
                                    p,
                                    &inner_left,
                                    r,
                                    &LabelSet::singleton(u3),
                                    s,
                                ) {
                                    Ok(Some(x)) => x,
                                    _ => {
                                        assoc.violate(format!(
                                            "right fold of {chain} is defined but the left fold is not"
                                        ));
                                        continue;
                                    }
                                };
                                if !right.is_subset(&left) {
                                    assoc.violate(format!(
                                        "left fold {} of {chain} does not cover right fold {}",
                                        a.render(&left),
                                        a.render(&right)
                                    ));
                                } else {
                                    assoc.hold();
                                    if left != right {
                                        strictness.violate(format!(
                                            "folds of {chain} differ: {} vs {}",
                                            a.render(&left),
                                            a.render(&right)
                                        ));
                                    } else {
                                        strictness.hold();
                                    }
                                }
                                if assoc.done() && strictness.done() {
                                    break 'chains;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    checks.push(assoc.finish());
    checks.push(strictness.finish());

    let core = typed_deterministic_core(t);
    let mut det = CheckBuilder::new(
        "determinism",
        "deterministic typed labels multiply to singletons",
    );
    for (p, q, r, u, v, set) in t.defined_products() {
        let _ = (p, q, r);
        if core.contains(u) && core.contains(v) {
            if set.len() == 1 {
                det.hold();
            } else {
                det.violate(format!(
                    "({p},{},{q})*({q},{},{r}) = {} is not a singleton",
                    a.name(u),
                    a.name(v),
                    a.render(set)
                ));
            }
        }
    }
    checks.push(det.finish());

    let mut unit = CheckBuilder::new("unit", "the zero triple is a two-sided unit");
    for p in 0..n {
        for q in 0..n {
            for u in t.class(p, q).iter() {
                let want = LabelSet::singleton(u);
                let left = t.typed_product(p, a.zero(), p, p, u, q);
                let right = t.typed_product(p, u, q, q, a.zero(), q);
                let ok = |c: &TypedCell<'_>| matches!(c, TypedCell::Value(s) if **s == want);
                if ok(&left) && ok(&right) {
                    unit.hold();
                } else {
                    unit.violate(format!(
                        "unit products of ({p},{},{q}) are missing or wrong",
                        a.name(u)
                    ));
                }
            }
        }
    }
    checks.push(unit.finish());

    TypedReport { checks }
}

/// Labels of non-negative sign whose inverse-side typed product collapses
/// to the appropriate zero triple.
pub fn typed_deterministic_core(t: &TypedTable) -> LabelSet {
    let a = t.alphabet();
    let n = t.sorts().len();
    let zero_set = LabelSet::singleton(a.zero());
    let mut out = LabelSet::singleton(a.zero());
    for p in 0..n {
        for q in 0..n {
            for u in t.class(p, q).iter() {
                if a.sign(u) != Sign::Pos {
                    continue;
                }
                let Ok(inv) = a.inverse_of(u) else { continue };
                if !t.class(q, p).contains(inv) {
                    continue;
                }
                if let TypedCell::Value(s) = t.typed_product(q, inv, p, p, u, q) {
                    if *s == zero_set {
                        out.insert(u);
                    }
                }
            }
        }
    }
    out
}

/// Summary analysis of a typed table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypedAnalysis {
    /// Every defined product is a singleton.
    pub deterministic: bool,
    /// Per-sort relation classification of the diagonal classes.
    pub per_sort: Vec<SortClassification>,
    /// Overall flags over the whole alphabet.
    pub transitive: bool,
    pub partial_order: bool,
    pub equivalence: bool,
    /// Labels in the typed deterministic core.
    pub deterministic_core: Vec<String>,
    /// The core is closed under defined products.
    pub core_closed: bool,
    /// Every diagonal is a deterministic all-non-negative group-like table.
    pub join_of_groups: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SortClassification {
    pub sort: String,
    pub transitive: bool,
    pub partial_order: bool,
    pub equivalence: bool,
}

/// Analyze a typed table: determinism, per-sort and overall relation
/// classification, core closure, and join-of-groups detection.
pub fn typed_analysis(t: &TypedTable) -> Result<TypedAnalysis> {
    let a = t.alphabet();
    let deterministic = t.defined_products().all(|(_, _, _, _, _, s)| s.len() == 1);
    let mut per_sort = Vec::new();
    let mut join_of_groups = true;
    for (p, sort) in t.sorts().iter().enumerate() {
        let table = t.diagonal(p)?;
        let class = crate::analysis::classify_relation(&table);
        per_sort.push(SortClassification {
            sort: sort.clone(),
            transitive: class.transitive,
            partial_order: class.partial_order,
            equivalence: class.equivalence,
        });
        let group_like = table.is_deterministic()
            && table
                .alphabet()
                .ids()
                .all(|u| table.alphabet().sign(u).is_non_negative())
            && validate_table(&table).passed();
        join_of_groups &= group_like;
    }
    let core = typed_deterministic_core(t);
    let mut core_closed = true;
    for (_, _, _, u, v, s) in t.defined_products() {
        if core.contains(u) && core.contains(v) && !s.is_subset(&core) {
            core_closed = false;
        }
    }
    Ok(TypedAnalysis {
        deterministic,
        per_sort,
        transitive: true,
        partial_order: a.ids().all(|u| a.sign(u).is_non_positive()),
        equivalence: a.ids().all(|u| a.sign(u).is_non_negative()),
        deterministic_core: core.iter().map(|u| a.name(u).to_string()).collect(),
        core_closed,
        join_of_groups,
    })
}

/// Cross-class ingredients for a join: the off-diagonal label classes and
/// the products that involve them.
#[derive(Debug, Clone, Default)]
pub struct CrossSpec {
    /// Off-diagonal label declarations per (from, to) sort pair.
    pub mu: BTreeMap<(String, String), Vec<Label>>,
    /// Cross products: (from, via, to, left, right) -> result label names.
    pub products: Vec<CrossProduct>,
}

#[derive(Debug, Clone)]
pub struct CrossProduct {
    pub from: String,
    pub via: String,
    pub to: String,
    pub left: String,
    pub right: String,
    pub result: Vec<String>,
}

/// Join component tables over a sort family.
///
/// Component alphabets may share only the zero label's name. Diagonal
/// products come from the components, cross products from the spec; unit
/// products against the zero triple are synthesized for every label.
/// An empty `CrossSpec` yields the free join.
pub fn join_build(
    sorts: &[String],
    components: &BTreeMap<String, MultiTable>,
    cross: &CrossSpec,
) -> Result<TypedTable> {
    if sorts.is_empty() {
        return Err(Error::Format("no sorts declared".into()));
    }
    for sort in sorts {
        if !components.contains_key(sort) {
            return Err(Error::Format(format!("sort `{sort}` has no component")));
        }
    }
    for (sort, t) in components {
        if !sorts.contains(sort) {
            return Err(Error::Format(format!("component for undeclared sort `{sort}`")));
        }
        if t.window().is_some() {
            return Err(Error::Format(
                "windowed tables cannot join; components must be explicit".into(),
            ));
        }
    }
    let zero_name = {
        let first = &components[&sorts[0]];
        first
            .alphabet()
            .name(first.alphabet().zero())
            .to_string()
    };
    for t in components.values() {
        if t.alphabet().name(t.alphabet().zero()) != zero_name {
            return Err(Error::Format(
                "components disagree on the zero label's name".into(),
            ));
        }
    }

    // Global alphabet: the shared zero, then each sort's labels, then
    // cross labels, rejecting any overlap.
    let mut labels: Vec<Label> = vec![Label {
        id: zero_name.clone(),
        sign: Sign::Zero,
        inverse: None,
    }];
    let claim = |l: &Label, labels: &mut Vec<Label>| -> Result<()> {
        if labels.iter().any(|m| m.id == l.id) {
            return Err(Error::RegularityViolation(format!(
                "label `{}` appears in more than one class",
                l.id
            )));
        }
        labels.push(l.clone());
        Ok(())
    };
    for sort in sorts {
        let t = &components[sort];
        for u in t.alphabet().ids() {
            if u == t.alphabet().zero() {
                continue;
            }
            claim(t.alphabet().label(u), &mut labels)?;
        }
    }
    for ((from, to), decls) in &cross.mu {
        if from == to {
            return Err(Error::RegularityViolation(format!(
                "cross class ({from},{to}) must be off-diagonal"
            )));
        }
        if !sorts.contains(from) || !sorts.contains(to) {
            return Err(Error::Format(format!(
                "cross class ({from},{to}) names an undeclared sort"
            )));
        }
        for l in decls {
            if l.sign == Sign::Zero {
                return Err(Error::RegularityViolation(
                    "cross classes cannot contain a zero label".into(),
                ));
            }
            claim(l, &mut labels)?;
        }
    }
    let alphabet = SignedAlphabet::new(labels)?;

    let sort_id = |name: &str| sorts.iter().position(|s| s == name).expect("checked");
    let mut mu: BTreeMap<(SortId, SortId), LabelSet> = BTreeMap::new();
    for (p, sort) in sorts.iter().enumerate() {
        let t = &components[sort];
        let class: LabelSet = t
            .alphabet()
            .ids()
            .map(|u| alphabet.resolve(t.alphabet().name(u)))
            .collect::<Result<_>>()?;
        mu.insert((p, p), class);
    }
    for ((from, to), decls) in &cross.mu {
        let class: LabelSet = decls
            .iter()
            .map(|l| alphabet.resolve(&l.id))
            .collect::<Result<_>>()?;
        mu.insert((sort_id(from), sort_id(to)), class);
    }

    let mut products: BTreeMap<ProductKey, LabelSet> = BTreeMap::new();
    for (p, sort) in sorts.iter().enumerate() {
        let t = &components[sort];
        for (u, v, s) in t.defined_cells() {
            let nu = alphabet.resolve(t.alphabet().name(u))?;
            let nv = alphabet.resolve(t.alphabet().name(v))?;
            let ns: LabelSet = s
                .iter()
                .map(|w| alphabet.resolve(t.alphabet().name(w)))
                .collect::<Result<_>>()?;
            products.insert((p, p, p, nu, nv), ns);
        }
    }
    for cp in &cross.products {
        let (p, q, r) = (sort_id(&cp.from), sort_id(&cp.via), sort_id(&cp.to));
        let u = alphabet.resolve(&cp.left)?;
        let v = alphabet.resolve(&cp.right)?;
        let set: LabelSet = cp
            .result
            .iter()
            .map(|name| alphabet.resolve(name))
            .collect::<Result<_>>()?;
        products.insert((p, q, r, u, v), set);
    }
    // Unit products for every label of every class.
    let zero = alphabet.zero();
    let empty = LabelSet::new();
    for p in 0..sorts.len() {
        for q in 0..sorts.len() {
            let class = mu.get(&(p, q)).unwrap_or(&empty).clone();
            for u in class.iter() {
                products
                    .entry((p, p, q, zero, u))
                    .or_insert_with(|| LabelSet::singleton(u));
                products
                    .entry((p, q, q, u, zero))
                    .or_insert_with(|| LabelSet::singleton(u));
            }
        }
    }
    TypedTable::new(sorts.to_vec(), alphabet, mu, products)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::group_table;

    fn z2() -> MultiTable {
        group_table(&[
            vec!["0".to_string(), "g".to_string()],
            vec!["g".to_string(), "0".to_string()],
        ])
        .unwrap()
    }

    fn z3() -> MultiTable {
        group_table(&[
            vec!["0".to_string(), "a".to_string(), "b".to_string()],
            vec!["a".to_string(), "b".to_string(), "0".to_string()],
            vec!["b".to_string(), "0".to_string(), "a".to_string()],
        ])
        .unwrap()
    }

    fn free_join() -> TypedTable {
        let sorts = vec!["p".to_string(), "q".to_string()];
        let mut components = BTreeMap::new();
        components.insert("p".to_string(), z2());
        components.insert("q".to_string(), z3());
        join_build(&sorts, &components, &CrossSpec::default()).unwrap()
    }

    #[test]
    fn free_join_passes_the_typed_battery() {
        let t = free_join();
        let report = validate_typed(&t);
        assert!(report.passed(), "{:?}", report);
    }

    #[test]
    fn free_join_is_a_join_of_groups() {
        let t = free_join();
        let analysis = typed_analysis(&t).unwrap();
        assert!(analysis.join_of_groups);
        assert!(analysis.deterministic);
        assert!(analysis.equivalence);
        assert!(analysis.core_closed);
        // All four labels are deterministic in a join of groups.
        assert_eq!(analysis.deterministic_core.len(), 4);
    }

    #[test]
    fn cross_products_are_undefined_in_a_free_join() {
        let t = free_join();
        let a = t.alphabet();
        let g = a.resolve("g").unwrap();
        let x = a.resolve("a").unwrap();
        assert_eq!(t.typed_product(0, g, 0, 1, x, 1), TypedCell::NotComposable);
        // Composable sorts but no products defined across classes.
        assert!(t.class(0, 1).is_empty());
    }

    #[test]
    fn single_sort_embedding_reproduces_products()  {
        let table = z3();
        let t = TypedTable::from_single("p", &table).unwrap();
        for (u, v, s) in table.defined_cells() {
            match t.typed_product(0, u, 0, 0, v, 0) {
                TypedCell::Value(got) => assert_eq!(got, s),
                other => panic!("undefined product: {other:?}"),
            }
        }
        assert!(validate_typed(&t).passed());
    }

    #[test]
    fn minimal_cross_join_with_inverse_pair_passes() {
        // Two one-element components joined by a single positive cross
        // label and its inverse, with products collapsing to zero triples.
        let trivial = group_table(&[vec!["0".to_string()]]).unwrap();
        let sorts = vec!["p".to_string(), "q".to_string()];
        let mut components = BTreeMap::new();
        components.insert("p".to_string(), trivial.clone());
        components.insert("q".to_string(), trivial);
        let mut cross = CrossSpec::default();
        cross.mu.insert(
            ("p".to_string(), "q".to_string()),
            vec![Label {
                id: "a".into(),
                sign: Sign::Pos,
                inverse: Some("a'".into()),
            }],
        );
        cross.mu.insert(
            ("q".to_string(), "p".to_string()),
            vec![Label {
                id: "a'".into(),
                sign: Sign::Pos,
                inverse: Some("a".into()),
            }],
        );
        cross.products.push(CrossProduct {
            from: "p".into(),
            via: "q".into(),
            to: "p".into(),
            left: "a".into(),
            right: "a'".into(),
            result: vec!["0".into()],
        });
        cross.products.push(CrossProduct {
            from: "q".into(),
            via: "p".into(),
            to: "q".into(),
            left: "a'".into(),
            right: "a".into(),
            result: vec!["0".into()],
        });
        let t = join_build(&sorts, &components, &cross).unwrap();
        let report = validate_typed(&t);
        assert!(report.passed(), "{:?}", report);
        let core = typed_deterministic_core(&t);
        assert_eq!(core.len(), 3);
    }

    #[test]
    fn missing_inverse_class_fails_the_typed_inverse_check() {
        let trivial = group_table(&[vec!["0".to_string()]]).unwrap();
        let sorts = vec!["p".to_string(), "q".to_string()];
        let mut components = BTreeMap::new();
        components.insert("p".to_string(), trivial.clone());
        components.insert("q".to_string(), trivial);
        let mut cross = CrossSpec::default();
        // a > 0 in mu(p,q); its inverse label exists in the alphabet but
        // no mu(q,p) class carries it.
        cross.mu.insert(
            ("p".to_string(), "q".to_string()),
            vec![
                Label {
                    id: "a".into(),
                    sign: Sign::Pos,
                    inverse: Some("a'".into()),
                },
                Label {
                    id: "a'".into(),
                    sign: Sign::Pos,
                    inverse: Some("a".into()),
                },
            ],
        );
        let t = join_build(&sorts, &components, &cross).unwrap();
        let report = validate_typed(&t);
        assert_eq!(report.check("inverses").status, CheckStatus::Fail);
    }

    #[test]
    fn overlapping_component_alphabets_are_rejected() {
        let sorts = vec!["p".to_string(), "q".to_string()];
        let mut components = BTreeMap::new();
        components.insert("p".to_string(), z2());
        components.insert("q".to_string(), z2());
        let err = join_build(&sorts, &components, &CrossSpec::default()).unwrap_err();
        assert!(matches!(err, Error::RegularityViolation(_)));
    }
}
