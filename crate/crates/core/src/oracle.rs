//! Ground-truth product tables from finite relational structures.
//!
//! A structure names a finite universe, one binary relation per label, and
//! an interior window. A label `v` belongs to the product `u1*u2` when
//! every `v`-related pair with both endpoints in the window decomposes
//! through some middle element of the full universe via `u1` then `u2`.
//! Containment is checked on window-to-window pairs only: boundary
//! elements of a finite approximation misreport the infinite model the
//! structure stands in for, and the window margin is the soundness knob.
//!
//! Cells whose composition reaches pairs no declared label covers are
//! left out of the derived table (they would need labels past the declared
//! ones); cells whose composition has no window pairs at all are marked
//! empty.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::Serialize;

use crate::constructions::parse_group;
use crate::error::{Error, Result};
use crate::label::{Label, LabelId, LabelSet, Sign, SignedAlphabet};
use crate::table::{Cell, MultiTable, Unbounded};

/// A finite relational structure: universe, one pair set per label, and
/// the interior window on which derivation is sound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationalStructure {
    pub universe: BTreeSet<i64>,
    pub relations: BTreeMap<String, BTreeSet<(i64, i64)>>,
    pub window: BTreeSet<i64>,
}

impl RelationalStructure {
    /// Validate the structural rules: nonempty window inside the universe,
    /// an identity relation under the label `0`, nonempty relations over
    /// universe elements, pairwise disjoint as pair sets.
    pub fn validate(&self) -> Result<()> {
        if self.window.is_empty() {
            return Err(Error::EmptyWindow);
        }
        if !self.window.is_subset(&self.universe) {
            return Err(Error::Format("window leaves the universe".into()));
        }
        let zero = self
            .relations
            .get("0")
            .ok_or(Error::IdentityMissing)?;
        let identity: BTreeSet<(i64, i64)> =
            self.universe.iter().map(|&a| (a, a)).collect();
        if *zero != identity {
            return Err(Error::Format(
                "the relation for label `0` must be the identity on the universe".into(),
            ));
        }
        for (label, pairs) in &self.relations {
            if pairs.is_empty() {
                return Err(Error::Format(format!("relation `{label}` is empty")));
            }
            for &(a, b) in pairs {
                if !self.universe.contains(&a) || !self.universe.contains(&b) {
                    return Err(Error::Format(format!(
                        "relation `{label}` mentions elements outside the universe"
                    )));
                }
            }
        }
        let labels: Vec<&String> = self.relations.keys().collect();
        for (i, u) in labels.iter().enumerate() {
            for v in labels.iter().skip(i + 1) {
                if self.relations[*u]
                    .iter()
                    .any(|p| self.relations[*v].contains(p))
                {
                    return Err(Error::Format(format!(
                        "relations `{u}` and `{v}` share a pair"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Infer the signed alphabet: `0` is the zero label; a label whose
    /// relation is the converse of some label's relation is positive and
    /// paired with it; everything else is negative.
    pub fn alphabet(&self) -> Result<SignedAlphabet> {
        let mut labels = Vec::new();
        for (name, pairs) in &self.relations {
            if name == "0" {
                labels.push(Label {
                    id: name.clone(),
                    sign: Sign::Zero,
                    inverse: None,
                });
                continue;
            }
            let converse: BTreeSet<(i64, i64)> =
                pairs.iter().map(|&(a, b)| (b, a)).collect();
            let partner = self
                .relations
                .iter()
                .find(|(other, q)| *other != "0" && **q == converse)
                .map(|(other, _)| other.clone());
            match partner {
                Some(other) => labels.push(Label {
                    id: name.clone(),
                    sign: Sign::Pos,
                    inverse: Some(other),
                }),
                None => labels.push(Label {
                    id: name.clone(),
                    sign: Sign::Neg,
                    inverse: None,
                }),
            }
        }
        SignedAlphabet::new(labels)
    }
}

/// Derive the product table of a structure by relation composition.
pub fn derive_table(s: &RelationalStructure) -> Result<MultiTable> {
    s.validate()?;
    let alphabet = s.alphabet()?;
    let names: Vec<&String> = s.relations.keys().collect();
    let n = names.len();

    // Forward adjacency and pair-set per label, and a label for every pair.
    let mut forward: Vec<HashMap<i64, Vec<i64>>> = vec![HashMap::new(); n];
    let mut pair_sets: Vec<HashSet<(i64, i64)>> = vec![HashSet::new(); n];
    let mut pair_label: HashMap<(i64, i64), usize> = HashMap::new();
    for (i, name) in names.iter().enumerate() {
        for &(a, b) in &s.relations[*name] {
            forward[i].entry(a).or_default().push(b);
            pair_sets[i].insert((a, b));
            pair_label.insert((a, b), i);
        }
    }
    let in_window = |x: i64| s.window.contains(&x);
    // Window-restricted relation per label, for containment checks.
    let windowed_relation: Vec<Vec<(i64, i64)>> = (0..n)
        .map(|i| {
            s.relations[names[i]]
                .iter()
                .copied()
                .filter(|&(a, c)| in_window(a) && in_window(c))
                .collect()
        })
        .collect();

    let mut products: BTreeMap<(LabelId, LabelId), LabelSet> = BTreeMap::new();
    let mut empty: BTreeSet<(LabelId, LabelId)> = BTreeSet::new();
    let mut complete = true;
    for (i1, n1) in names.iter().enumerate() {
        let u1 = alphabet.resolve(n1)?;
        for (i2, n2) in names.iter().enumerate() {
            let u2 = alphabet.resolve(n2)?;
            // Composition pairs with both endpoints in the window.
            let mut comp: HashSet<(i64, i64)> = HashSet::new();
            let mut covered = true;
            for (&a, bs) in &forward[i1] {
                if !in_window(a) {
                    continue;
                }
                for &b in bs {
                    if let Some(cs) = forward[i2].get(&b) {
                        for &c in cs {
                            if in_window(c) {
                                covered &= pair_label.contains_key(&(a, c));
                                comp.insert((a, c));
                            }
                        }
                    }
                }
            }
            if comp.is_empty() {
                empty.insert((u1, u2));
                continue;
            }
            if !covered {
                // The composition needs labels past the declared alphabet;
                // the cell cannot be answered soundly.
                complete = false;
                continue;
            }
            let mut value = LabelSet::new();
            for (iv, name_v) in names.iter().enumerate() {
                if windowed_relation[iv].is_empty() {
                    continue;
                }
                let contained = windowed_relation[iv].iter().all(|&(a, c)| {
                    forward[i1].get(&a).is_some_and(|bs| {
                        bs.iter().any(|&b| pair_sets[i2].contains(&(b, c)))
                    })
                });
                if contained {
                    value.insert(alphabet.resolve(name_v)?);
                }
            }
            if value.is_empty() {
                // Covered but no whole label relation fits inside the
                // composition: the window is too ragged to certify a value.
                complete = false;
                continue;
            }
            products.insert((u1, u2), value);
        }
    }

    if complete && empty.is_empty() {
        return MultiTable::explicit(alphabet, products);
    }
    let window_bound = alphabet
        .ids()
        .filter_map(|u| alphabet.name(u).parse::<i64>().ok())
        .map(|v| v.unsigned_abs() as u32)
        .max()
        .unwrap_or(alphabet.len() as u32);
    MultiTable::windowed(
        alphabet,
        window_bound,
        products,
        BTreeSet::new(),
        empty,
        Unbounded::default(),
    )
}

/// Structure generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructureKind {
    /// A discrete chain of `n` anchors with a midpoint between each
    /// adjacent pair, ordered by `<` (label 1) and `>` (label 2).
    Chain { n: u32 },
    /// A path graph on `n` vertices with distance labels 1..=max_label.
    PathGraph { n: u32, max_label: u32 },
    /// A degree-regular tree of the given radius with distance labels.
    Tree {
        degree: u32,
        radius: u32,
        max_label: u32,
    },
    /// The Cayley graph of a group: one right-translation relation per
    /// element.
    Cayley { cayley: Vec<Vec<String>> },
    /// A dense order of group copies: `n` anchors with midpoints, each
    /// position carrying one copy of the group; label -1 relates
    /// position-increasing pairs, group labels translate within a
    /// position.
    DenseOrderWithPolygon { n: u32, cayley: Vec<Vec<String>> },
    /// `n` integers in a row with shift relations for every nonzero label
    /// in -max_label..=max_label.
    SuccessorLine { n: u32, max_label: u32 },
}

fn identity_relation(universe: &BTreeSet<i64>) -> BTreeSet<(i64, i64)> {
    universe.iter().map(|&a| (a, a)).collect()
}

/// Build one of the canonical structures. Windows are sized to keep a
/// margin of max-label radius from the boundary; parameters too small to
/// leave a window are rejected.
pub fn generate_structure(kind: &StructureKind) -> Result<RelationalStructure> {
    match kind {
        StructureKind::Chain { n } => chain(*n),
        StructureKind::PathGraph { n, max_label } => path_graph(*n, *max_label),
        StructureKind::Tree {
            degree,
            radius,
            max_label,
        } => tree(*degree, *radius, *max_label),
        StructureKind::Cayley { cayley } => cayley_structure(cayley),
        StructureKind::DenseOrderWithPolygon { n, cayley } => dense_order(*n, cayley),
        StructureKind::SuccessorLine { n, max_label } => successor_line(*n, *max_label),
    }
}

fn chain(n: u32) -> Result<RelationalStructure> {
    if n == 0 {
        return Err(Error::BadParams("chain needs at least one anchor".into()));
    }
    // Anchors at even ids, midpoints at odd ids; id order is chain order.
    let top = 2 * (n as i64 - 1);
    let universe: BTreeSet<i64> = (0..=top).collect();
    let mut relations = BTreeMap::new();
    relations.insert("0".to_string(), identity_relation(&universe));
    if n > 1 {
        let mut less = BTreeSet::new();
        let mut greater = BTreeSet::new();
        for &a in &universe {
            for &b in &universe {
                if a < b {
                    less.insert((a, b));
                    greater.insert((b, a));
                }
            }
        }
        relations.insert("1".to_string(), less);
        relations.insert("2".to_string(), greater);
    }
    // Interior anchors three positions from either end, or every anchor
    // when the chain is too short to leave a margin.
    let mut window: BTreeSet<i64> = (0..n as i64)
        .filter(|&i| i >= 3 && i <= n as i64 - 4)
        .map(|i| 2 * i)
        .collect();
    if window.is_empty() {
        window = (0..n as i64).map(|i| 2 * i).collect();
    }
    Ok(RelationalStructure {
        universe,
        relations,
        window,
    })
}

fn distance_relations(
    adjacency: &HashMap<i64, Vec<i64>>,
    universe: &BTreeSet<i64>,
    max_label: u32,
) -> BTreeMap<String, BTreeSet<(i64, i64)>> {
    let mut relations: BTreeMap<String, BTreeSet<(i64, i64)>> = BTreeMap::new();
    relations.insert("0".to_string(), identity_relation(universe));
    for d in 1..=max_label {
        relations.insert(d.to_string(), BTreeSet::new());
    }
    for &start in universe {
        // Breadth-first out to max_label.
        let mut dist: HashMap<i64, u32> = HashMap::new();
        dist.insert(start, 0);
        let mut frontier = vec![start];
        for d in 1..=max_label {
            let mut next = Vec::new();
            for &x in &frontier {
                for &y in adjacency.get(&x).into_iter().flatten() {
                    if let std::collections::hash_map::Entry::Vacant(slot) = dist.entry(y) {
                        slot.insert(d);
                        next.push(y);
                    }
                }
            }
            for &y in &next {
                relations
                    .get_mut(&d.to_string())
                    .expect("declared")
                    .insert((start, y));
            }
            frontier = next;
        }
    }
    relations.retain(|_, pairs| !pairs.is_empty());
    relations
}

fn path_graph(n: u32, max_label: u32) -> Result<RelationalStructure> {
    // The window needs a max_label margin on both sides, and its diameter
    // must reach 2*max_label so compositions that overflow the alphabet
    // show up inside it instead of vanishing.
    if max_label == 0 || n < 4 * max_label + 1 {
        return Err(Error::BadParams(format!(
            "path of {n} vertices is too short for labels up to {max_label}"
        )));
    }
    let universe: BTreeSet<i64> = (0..n as i64).collect();
    let mut adjacency: HashMap<i64, Vec<i64>> = HashMap::new();
    for a in 0..n as i64 - 1 {
        adjacency.entry(a).or_default().push(a + 1);
        adjacency.entry(a + 1).or_default().push(a);
    }
    let relations = distance_relations(&adjacency, &universe, max_label);
    let window: BTreeSet<i64> =
        (max_label as i64..=(n as i64 - 1 - max_label as i64)).collect();
    Ok(RelationalStructure {
        universe,
        relations,
        window,
    })
}

fn tree(degree: u32, radius: u32, max_label: u32) -> Result<RelationalStructure> {
    if degree < 2 {
        return Err(Error::BadParams("tree degree must be at least 2".into()));
    }
    // Window depth radius-max_label keeps distance sound, and its diameter
    // 2*(radius-max_label) must reach 2*max_label to expose compositions
    // that overflow the alphabet.
    if max_label == 0 || radius < 2 * max_label {
        return Err(Error::BadParams(format!(
            "tree radius {radius} is too small for labels up to {max_label}"
        )));
    }
    // Root has `degree` children; every other internal vertex has
    // degree-1 children, so all internal vertices have degree `degree`.
    let mut adjacency: HashMap<i64, Vec<i64>> = HashMap::new();
    let mut depth: HashMap<i64, u32> = HashMap::new();
    depth.insert(0, 0);
    let mut next_id: i64 = 1;
    let mut frontier = vec![0i64];
    for d in 1..=radius {
        let mut level = Vec::new();
        for &parent in &frontier {
            let children = if d == 1 { degree } else { degree - 1 };
            for _ in 0..children {
                let child = next_id;
                next_id += 1;
                adjacency.entry(parent).or_default().push(child);
                adjacency.entry(child).or_default().push(parent);
                depth.insert(child, d);
                level.push(child);
            }
        }
        frontier = level;
    }
    let universe: BTreeSet<i64> = (0..next_id).collect();
    let relations = distance_relations(&adjacency, &universe, max_label);
    let window: BTreeSet<i64> = universe
        .iter()
        .copied()
        .filter(|x| depth[x] + max_label <= radius)
        .collect();
    Ok(RelationalStructure {
        universe,
        relations,
        window,
    })
}

fn cayley_structure(cayley: &[Vec<String>]) -> Result<RelationalStructure> {
    let group = parse_group(cayley)?;
    let n = group.symbols.len();
    let universe: BTreeSet<i64> = (0..n as i64).collect();
    let mut relations = BTreeMap::new();
    for g in 0..n {
        let pairs: BTreeSet<(i64, i64)> = (0..n)
            .map(|a| (a as i64, group.prod[a][g] as i64))
            .collect();
        relations.insert(group.name(g), pairs);
    }
    Ok(RelationalStructure {
        window: universe.clone(),
        universe,
        relations,
    })
}

fn dense_order(n: u32, cayley: &[Vec<String>]) -> Result<RelationalStructure> {
    if n == 0 {
        return Err(Error::BadParams("dense order needs at least one anchor".into()));
    }
    let group = parse_group(cayley)?;
    let m = group.symbols.len() as i64;
    // Positions: anchors at even values, midpoints at odd values. Element
    // id = position * |G| + group index.
    let top = 2 * (n as i64 - 1);
    let positions: Vec<i64> = (0..=top).collect();
    let universe: BTreeSet<i64> = positions
        .iter()
        .flat_map(|&p| (0..m).map(move |g| p * m + g))
        .collect();
    let mut relations = BTreeMap::new();
    relations.insert("0".to_string(), identity_relation(&universe));
    let mut order = BTreeSet::new();
    for &x in &universe {
        for &y in &universe {
            if x / m < y / m {
                order.insert((x, y));
            }
        }
    }
    relations.insert("-1".to_string(), order);
    for g in 0..m as usize {
        if g == group.identity {
            continue;
        }
        let pairs: BTreeSet<(i64, i64)> = universe
            .iter()
            .map(|&x| {
                let (p, h) = (x / m, (x % m) as usize);
                (x, p * m + group.prod[h][g] as i64)
            })
            .collect();
        relations.insert(group.name(g), pairs);
    }
    let mut anchor_window: Vec<i64> = (0..n as i64)
        .filter(|&i| i >= 3 && i <= n as i64 - 4)
        .collect();
    if anchor_window.is_empty() {
        anchor_window = (0..n as i64).collect();
    }
    let window: BTreeSet<i64> = anchor_window
        .iter()
        .flat_map(|&i| (0..m).map(move |g| 2 * i * m + g))
        .collect();
    Ok(RelationalStructure {
        universe,
        relations,
        window,
    })
}

fn successor_line(n: u32, max_label: u32) -> Result<RelationalStructure> {
    // Same sizing rule as the path: margin max_label, diameter 2*max_label.
    if max_label == 0 || n < 4 * max_label + 1 {
        return Err(Error::BadParams(format!(
            "line of {n} elements is too short for shifts up to {max_label}"
        )));
    }
    let universe: BTreeSet<i64> = (0..n as i64).collect();
    let mut relations = BTreeMap::new();
    relations.insert("0".to_string(), identity_relation(&universe));
    for shift in 1..=max_label as i64 {
        for (label, step) in [(shift, shift), (-shift, -shift)] {
            let pairs: BTreeSet<(i64, i64)> = universe
                .iter()
                .filter_map(|&a| {
                    let b = a + step;
                    universe.contains(&b).then_some((a, b))
                })
                .collect();
            relations.insert(label.to_string(), pairs);
        }
    }
    let window: BTreeSet<i64> =
        (max_label as i64..=(n as i64 - 1 - max_label as i64)).collect();
    Ok(RelationalStructure {
        universe,
        relations,
        window,
    })
}

/// One cell where the derived table and the expected table disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellDiff {
    pub left: String,
    pub right: String,
    pub derived: String,
    pub expected: String,
}

/// Cell-by-cell comparison result; an empty list means the tables agree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiffReport {
    pub cells: Vec<CellDiff>,
}

impl DiffReport {
    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

fn cell_description(t: &MultiTable, u: LabelId, v: LabelId) -> String {
    match t.cell(u, v) {
        Cell::Value { set, infinite } => {
            let rendered = t.alphabet().render(set);
            if infinite {
                format!("{rendered} (unbounded)")
            } else {
                rendered
            }
        }
        Cell::OutOfWindow => "out-of-window".to_string(),
        Cell::Empty => "empty-composition".to_string(),
    }
}

/// Compare two tables cell-by-cell, matching labels by name. The alphabets
/// must agree as sets: same names, signs, and inverse pairings.
pub fn diff_tables(derived: &MultiTable, expected: &MultiTable) -> Result<DiffReport> {
    let da = derived.alphabet();
    let ea = expected.alphabet();
    if da.len() != ea.len() {
        return Err(Error::AlphabetMismatch(format!(
            "{} labels vs {}",
            da.len(),
            ea.len()
        )));
    }
    for u in da.ids() {
        let name = da.name(u);
        let eu = ea
            .resolve(name)
            .map_err(|_| Error::AlphabetMismatch(format!("label `{name}` missing")))?;
        if da.sign(u) != ea.sign(eu) {
            return Err(Error::AlphabetMismatch(format!(
                "label `{name}` changes sign"
            )));
        }
        let di = da.inverse_of(u).ok().map(|i| da.name(i).to_string());
        let ei = ea.inverse_of(eu).ok().map(|i| ea.name(i).to_string());
        if di != ei {
            return Err(Error::AlphabetMismatch(format!(
                "label `{name}` changes inverse"
            )));
        }
    }
    let mut cells = Vec::new();
    for u in da.ids() {
        for v in da.ids() {
            let eu = ea.resolve(da.name(u))?;
            let ev = ea.resolve(da.name(v))?;
            let left = cell_description(derived, u, v);
            let right = cell_description(expected, eu, ev);
            if left != right {
                cells.push(CellDiff {
                    left: da.name(u).to_string(),
                    right: da.name(v).to_string(),
                    derived: left,
                    expected: right,
                });
            }
        }
    }
    Ok(DiffReport { cells })
}

/// Derive a table from the structure and compare it with an expected one.
pub fn oracle_vs_table(s: &RelationalStructure, expected: &MultiTable) -> Result<DiffReport> {
    let derived = derive_table(s)?;
    diff_tables(&derived, expected)
}

/// A cell of a distance-labeled table whose value strictly exceeds the
/// two-point baseline {m+n, |m-n|}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParityNote {
    pub left: String,
    pub right: String,
    pub derived: Vec<String>,
    pub baseline: Vec<String>,
}

/// Scan a table whose labels are all non-negative integers for cells whose
/// value strictly contains {m+n, |m-n|}. Cells where either baseline label
/// is missing from the alphabet are skipped; non-numeric alphabets yield
/// no notes.
pub fn parity_notes(t: &MultiTable) -> Vec<ParityNote> {
    let a = t.alphabet();
    let mut numeric: BTreeMap<LabelId, i64> = BTreeMap::new();
    for u in a.ids() {
        match a.name(u).parse::<i64>() {
            Ok(v) if v >= 0 => {
                numeric.insert(u, v);
            }
            _ => return Vec::new(),
        }
    }
    let by_value: BTreeMap<i64, LabelId> = numeric.iter().map(|(&u, &v)| (v, u)).collect();
    let mut notes = Vec::new();
    for (u, v, set) in t.defined_cells() {
        let (m, n) = (numeric[&u], numeric[&v]);
        let (Some(&sum), Some(&diff)) = (by_value.get(&(m + n)), by_value.get(&(m - n).abs()))
        else {
            continue;
        };
        let mut baseline = LabelSet::singleton(sum);
        baseline.insert(diff);
        if baseline.is_subset(set) && *set != baseline {
            notes.push(ParityNote {
                left: a.name(u).to_string(),
                right: a.name(v).to_string(),
                derived: set.iter().map(|w| a.name(w).to_string()).collect(),
                baseline: baseline.iter().map(|w| a.name(w).to_string()).collect(),
            });
        }
    }
    notes
}
