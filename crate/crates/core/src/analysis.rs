//! Structural analyses of a validated table: deterministic parts, the
//! lattice of sign/determinism restrictions, the induced binary relation,
//! order-property witnesses, and graph-shaped criteria.
//!
//! Window semantics: all answers are verdicts about the stored fragment.
//! A cell the window cannot reach never certifies membership; candidates
//! that need such a cell are left out rather than guessed.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::label::{LabelId, LabelSet, Sign};
use crate::table::MultiTable;

/// Non-negative labels whose inverse-side product collapses to the unit:
/// `u` with `inverse(u)*u = {0}`. The zero label always qualifies.
pub fn deterministic_core(table: &MultiTable) -> LabelSet {
    let a = table.alphabet();
    let zero = LabelSet::singleton(a.zero());
    let mut out = LabelSet::new();
    for u in a.ids() {
        match a.sign(u) {
            Sign::Neg => {}
            Sign::Zero => {
                out.insert(u);
            }
            Sign::Pos => {
                let inv = match a.inverse_of(u) {
                    Ok(i) => i,
                    Err(_) => continue,
                };
                if let Ok(set) = table.product(inv, u) {
                    if *set == zero {
                        out.insert(u);
                    }
                }
            }
        }
    }
    out
}

/// Least superset of the deterministic core closed under the rule: when
/// `u*inverse(u)` and `inverse(u)*u` are both bounded and land inside the
/// set, `u` and `inverse(u)` join it. Only non-negative labels enter.
pub fn almost_deterministic_closure(table: &MultiTable) -> LabelSet {
    let a = table.alphabet();
    let mut acc = deterministic_core(table);
    loop {
        let mut grew = false;
        for u in a.ids() {
            if a.sign(u) != Sign::Pos || acc.contains(u) {
                continue;
            }
            let inv = match a.inverse_of(u) {
                Ok(i) => i,
                Err(_) => continue,
            };
            if table.is_infinite(u, inv) || table.is_infinite(inv, u) {
                continue;
            }
            let forward = match table.product(u, inv) {
                Ok(s) => s,
                Err(_) => continue,
            };
            let backward = match table.product(inv, u) {
                Ok(s) => s,
                Err(_) => continue,
            };
            if forward.is_subset(&acc) && backward.is_subset(&acc) {
                acc.insert(u);
                acc.insert(inv);
                grew = true;
            }
        }
        if !grew {
            return acc;
        }
    }
}

/// Verify that every in-window product of two members stays in the set.
pub fn assert_product_closed(table: &MultiTable, name: &str, set: &LabelSet) -> Result<()> {
    let a = table.alphabet();
    for u in set.iter() {
        for v in set.iter() {
            if let Ok(prod) = table.product(u, v) {
                if !prod.is_subset(set) {
                    return Err(Error::ClosureViolation {
                        node: name.to_string(),
                        left: a.name(u).to_string(),
                        right: a.name(v).to_string(),
                    });
                }
            }
        }
    }
    Ok(())
}

/// True when every invertible member's inverse is also a member.
pub fn inverse_closed(table: &MultiTable, set: &LabelSet) -> bool {
    let a = table.alphabet();
    set.iter().all(|u| match a.inverse_of(u) {
        Ok(inv) => set.contains(inv),
        Err(_) => true,
    })
}

/// One vertex of the restriction lattice: possibly several named
/// restrictions sharing the same label set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeNode {
    pub names: Vec<&'static str>,
    pub labels: Vec<String>,
}

/// Hasse diagram of the canonical restrictions ordered by inclusion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RestrictionLattice {
    pub nodes: Vec<LatticeNode>,
    /// Covering edges, child index to parent index.
    pub edges: Vec<(usize, usize)>,
}

const NODE_NAMES: [&str; 11] = [
    "full",
    "non-positive",
    "non-negative",
    "deterministic",
    "almost-deterministic",
    "non-positive-deterministic",
    "non-negative-deterministic",
    "non-positive-almost-deterministic",
    "non-negative-almost-deterministic",
    "group-part",
    "zero",
];

/// Compute the canonical restriction sets, verify each is product-closed,
/// and arrange the distinct sets into a Hasse diagram under inclusion.
pub fn restriction_lattice(table: &MultiTable) -> Result<RestrictionLattice> {
    let a = table.alphabet();
    let full = a.all();
    let nonpos: LabelSet = a.ids().filter(|&u| a.sign(u).is_non_positive()).collect();
    let nonneg = a.non_negative();
    let det = deterministic_core(table);
    let almost = almost_deterministic_closure(table);
    let grp: LabelSet = det
        .iter()
        .filter(|&u| match a.inverse_of(u) {
            Ok(inv) => det.contains(inv),
            Err(_) => false,
        })
        .collect();
    let zero = LabelSet::singleton(a.zero());
    let sets: Vec<(usize, LabelSet)> = vec![
        (0, full.clone()),
        (1, nonpos.clone()),
        (2, nonneg.clone()),
        (3, det.clone()),
        (4, almost.clone()),
        (5, nonpos.intersection(&det)),
        (6, nonneg.intersection(&det)),
        (7, nonpos.intersection(&almost)),
        (8, nonneg.intersection(&almost)),
        (9, grp),
        (10, zero),
    ];
    for (idx, set) in &sets {
        assert_product_closed(table, NODE_NAMES[*idx], set)?;
    }

    // Group name indices by identical label sets, keeping name order.
    let mut groups: Vec<(LabelSet, Vec<usize>)> = Vec::new();
    for (idx, set) in sets {
        match groups.iter_mut().find(|(s, _)| *s == set) {
            Some((_, names)) => names.push(idx),
            None => groups.push((set, vec![idx])),
        }
    }
    // Deterministic vertex order: by size then by member order.
    groups.sort_by(|(s1, _), (s2, _)| s1.len().cmp(&s2.len()).then_with(|| s1.cmp(s2)));

    let mut edges = Vec::new();
    for (i, (si, _)) in groups.iter().enumerate() {
        for (j, (sj, _)) in groups.iter().enumerate() {
            if i == j || !si.is_subset(sj) {
                continue;
            }
            // Covering edge: no distinct set strictly between.
            let covered = groups.iter().enumerate().any(|(k, (sk, _))| {
                k != i && k != j && si.is_subset(sk) && sk.is_subset(sj)
            });
            if !covered {
                edges.push((i, j));
            }
        }
    }
    let nodes = groups
        .into_iter()
        .map(|(set, idxs)| LatticeNode {
            names: idxs.iter().map(|&i| NODE_NAMES[i]).collect(),
            labels: set.iter().map(|u| a.name(u).to_string()).collect(),
        })
        .collect();
    Ok(RestrictionLattice { nodes, edges })
}

impl RestrictionLattice {
    /// Serialize as a DOT digraph, bottom-up.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph restriction_lattice {\n");
        out.push_str("  rankdir=BT;\n  node [shape=box];\n");
        for (i, node) in self.nodes.iter().enumerate() {
            let names = node.names.join(" = ");
            let labels = node.labels.join(",");
            out.push_str(&format!("  n{i} [label=\"{names}\\n{{{labels}}}\"];\n"));
        }
        for (child, parent) in &self.edges {
            out.push_str(&format!("  n{child} -> n{parent};\n"));
        }
        out.push_str("}\n");
        out
    }

    /// The label set carried by a named restriction.
    pub fn labels_of(&self, name: &str) -> Option<&[String]> {
        self.nodes
            .iter()
            .find(|n| n.names.contains(&name))
            .map(|n| n.labels.as_slice())
    }
}

/// The three relation properties read off a table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RelationClass {
    /// Every product set is bounded.
    pub transitive: bool,
    /// Transitive and every label is non-positive.
    pub partial_order: bool,
    /// Transitive and every label is non-negative.
    pub equivalence: bool,
}

/// Classify the binary relation a table describes.
pub fn classify_relation(table: &MultiTable) -> RelationClass {
    let a = table.alphabet();
    let unbounded = table.unbounded();
    let transitive = table.all_cells_finite();
    let all_nonpos =
        !unbounded.pos && a.ids().all(|u| a.sign(u).is_non_positive());
    let all_nonneg =
        !unbounded.neg && a.ids().all(|u| a.sign(u).is_non_negative());
    RelationClass {
        transitive,
        partial_order: transitive && all_nonpos,
        equivalence: transitive && all_nonneg,
    }
}

/// Kinds of order-property witnesses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SopWitnessKind {
    /// An element `u` of `X` with `u*(X+0)` inside `X+0`.
    DirectClosure,
    /// A negative set whose next power folds into earlier powers.
    PowerClosure,
}

/// Evidence that the table forces the strict order property.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SopWitness {
    pub kind: SopWitnessKind,
    /// The closing element, for direct-closure witnesses.
    pub element: Option<String>,
    /// The witnessing set X.
    pub set: Vec<String>,
    /// The closing power n, for power-closure witnesses.
    pub power: Option<u32>,
}

fn resolve_set(table: &MultiTable, names: &[String]) -> Option<LabelSet> {
    let mut out = LabelSet::new();
    for n in names {
        out.insert(table.alphabet().resolve(n).ok()?);
    }
    Some(out)
}

/// Check a direct-closure witness: `u` in `X` and `u*(X+0)` inside `X+0`.
fn direct_closure_holds(table: &MultiTable, u: LabelId, x: &LabelSet) -> bool {
    if !x.contains(u) {
        return false;
    }
    let mut padded = x.clone();
    padded.insert(table.alphabet().zero());
    match table.set_product(&LabelSet::singleton(u), &padded) {
        Ok(prod) => prod.is_subset(&padded),
        Err(_) => false,
    }
}

/// Minimal `n <= max_power` with `X^(n+1)` inside `X^1 + ... + X^n`.
fn closing_power(table: &MultiTable, x: &LabelSet, max_power: u32) -> Option<u32> {
    let mut power = x.clone();
    let mut union = x.clone();
    for n in 1..=max_power {
        let next = table.set_product(&power, x).ok()?;
        if next.is_subset(&union) {
            return Some(n);
        }
        union.union_with(&next);
        power = next;
    }
    None
}

/// Power-closure search over small negative subsets, smallest first.
pub fn power_closure_witness(
    table: &MultiTable,
    max_size: usize,
    max_power: u32,
) -> Option<SopWitness> {
    let a = table.alphabet();
    let negatives: Vec<LabelId> = a.ids().filter(|&u| a.sign(u) == Sign::Neg).collect();
    let mut subsets: Vec<Vec<LabelId>> = vec![vec![]];
    for &u in &negatives {
        let mut grown = Vec::new();
        for s in &subsets {
            if s.len() < max_size {
                let mut t = s.clone();
                t.push(u);
                grown.push(t);
            }
        }
        subsets.extend(grown);
    }
    subsets.retain(|s| !s.is_empty());
    subsets.sort_by_key(|s| (s.len(), s.clone()));
    for subset in subsets {
        let x: LabelSet = subset.iter().copied().collect();
        if let Some(n) = closing_power(table, &x, max_power) {
            return Some(SopWitness {
                kind: SopWitnessKind::PowerClosure,
                element: None,
                set: x.iter().map(|u| a.name(u).to_string()).collect(),
                power: Some(n),
            });
        }
    }
    None
}

/// Search for strict-order evidence.
///
/// When the negative part is fully stored and nonempty, the whole negative
/// part closes under left multiplication and yields a witness outright: a
/// direct-closure one for a single negative label, a power-closure one
/// otherwise. Tables whose negative side continues past the window fall
/// back to the subset power search.
pub fn sop_detect(table: &MultiTable, max_power: u32) -> Option<SopWitness> {
    let a = table.alphabet();
    let negatives: LabelSet = a.ids().filter(|&u| a.sign(u) == Sign::Neg).collect();
    if !negatives.is_empty() && !table.unbounded().neg {
        let first = negatives.first().expect("nonempty");
        if negatives.len() == 1 && direct_closure_holds(table, first, &negatives) {
            return Some(SopWitness {
                kind: SopWitnessKind::DirectClosure,
                element: Some(a.name(first).to_string()),
                set: negatives.iter().map(|u| a.name(u).to_string()).collect(),
                power: None,
            });
        }
        if let Some(n) = closing_power(table, &negatives, max_power) {
            return Some(SopWitness {
                kind: SopWitnessKind::PowerClosure,
                element: None,
                set: negatives.iter().map(|u| a.name(u).to_string()).collect(),
                power: Some(n),
            });
        }
    }
    power_closure_witness(table, 4, max_power)
}

/// Re-check a witness against the table.
pub fn reevaluate_sop(table: &MultiTable, witness: &SopWitness) -> bool {
    let a = table.alphabet();
    let Some(x) = resolve_set(table, &witness.set) else {
        return false;
    };
    if x.is_empty() || x.iter().any(|u| a.sign(u) != Sign::Neg) {
        return false;
    }
    match witness.kind {
        SopWitnessKind::DirectClosure => {
            let Some(name) = &witness.element else {
                return false;
            };
            let Ok(u) = a.resolve(name) else {
                return false;
            };
            direct_closure_holds(table, u, &x)
        }
        SopWitnessKind::PowerClosure => {
            // A closure at any m <= n keeps all later powers folded, so the
            // claimed bound holds as soon as some power within it closes.
            let Some(n) = witness.power else {
                return false;
            };
            closing_power(table, &x, n).is_some()
        }
    }
}

/// Negative labels that persist in every product with themselves on the
/// left: `u` with `u` in `u*v` for every `v` the window can evaluate, and
/// no cell of `u`'s row out of reach.
pub fn pip_elements(table: &MultiTable) -> LabelSet {
    let a = table.alphabet();
    let mut out = LabelSet::new();
    'next: for u in a.ids() {
        if a.sign(u) != Sign::Neg {
            continue;
        }
        for v in a.ids() {
            match table.product(u, v) {
                Ok(set) if set.contains(u) => {}
                _ => continue 'next,
            }
        }
        out.insert(u);
    }
    out
}

/// Result of the negative-word commutation check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecialReport {
    /// Word length the check ran to.
    pub bound: u32,
    /// No counterexample found among evaluable instances.
    pub pass: bool,
    /// Instances skipped for window reasons.
    pub skipped: usize,
    /// A violating (word, right factor, stranded label), if found.
    pub witness: Option<(Vec<String>, String, String)>,
}

/// For every negative word `w` up to the bound and non-negative `v`, each
/// label of `w*v` must also appear in some `v'*w` with `v'` non-negative.
pub fn special_check(table: &MultiTable, max_word: u32) -> Result<SpecialReport> {
    let a = table.alphabet();
    let negatives: Vec<LabelId> = a.ids().filter(|&u| a.sign(u) == Sign::Neg).collect();
    if negatives.is_empty() {
        return Err(Error::EmptyNegativePart);
    }
    let non_neg: Vec<LabelId> = a.ids().filter(|&u| a.sign(u).is_non_negative()).collect();
    let mut skipped = 0usize;
    let mut words: Vec<Vec<LabelId>> = negatives.iter().map(|&u| vec![u]).collect();
    for _len in 1..=max_word {
        for word in &words {
            let folded = match table.word_product(word) {
                Ok(f) => f,
                Err(_) => {
                    skipped += 1;
                    continue;
                }
            };
            for &v in &non_neg {
                let left = match table.set_product(&folded, &LabelSet::singleton(v)) {
                    Ok(s) => s,
                    Err(_) => {
                        skipped += 1;
                        continue;
                    }
                };
                for u in left.iter() {
                    let mut covered = false;
                    let mut undecided = false;
                    for &v2 in &non_neg {
                        let mut acc = LabelSet::singleton(v2);
                        let mut ok = true;
                        for &letter in word {
                            match table.set_product(&acc, &LabelSet::singleton(letter)) {
                                Ok(next) => acc = next,
                                Err(_) => {
                                    ok = false;
                                    break;
                                }
                            }
                        }
                        if !ok {
                            undecided = true;
                            continue;
                        }
                        if acc.contains(u) {
                            covered = true;
                            break;
                        }
                    }
                    if !covered {
                        if undecided {
                            skipped += 1;
                            continue;
                        }
                        return Ok(SpecialReport {
                            bound: max_word,
                            pass: false,
                            skipped,
                            witness: Some((
                                word.iter().map(|&l| a.name(l).to_string()).collect(),
                                a.name(v).to_string(),
                                a.name(u).to_string(),
                            )),
                        });
                    }
                }
            }
        }
        // Extend words by one negative letter for the next round.
        let mut next = Vec::new();
        for word in &words {
            if (word.len() as u32) < max_word {
                for &u in &negatives {
                    let mut w = word.clone();
                    w.push(u);
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        words = next;
    }
    Ok(SpecialReport {
        bound: max_word,
        pass: true,
        skipped,
        witness: None,
    })
}

/// Report of the generator-based graph criteria.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerfulReport {
    /// No generator word multiplies down to the zero label.
    pub zero_free: bool,
    pub zero_free_detail: Option<String>,
    /// Every `generator*label` product meets the generator set.
    pub pairwise_meets: bool,
    pub pairwise_detail: Option<String>,
    /// Inverse-generator words avoid the almost-deterministic part
    /// (reported separately; `None` when generators lack inverses).
    pub acl_disjoint: Option<bool>,
    /// Instances skipped for window reasons.
    pub skipped: usize,
    /// Conjunction of the two graph conditions.
    pub pass: bool,
}

/// Check the two graph conditions for a generator set, plus the separate
/// almost-deterministic disjointness probe over inverse-generator words.
pub fn powerful_graph_check(table: &MultiTable, generators: &[LabelId]) -> Result<PowerfulReport> {
    let a = table.alphabet();
    if generators.is_empty() {
        return Err(Error::BadParams("no generators given".into()));
    }
    let gens: LabelSet = generators.iter().copied().collect();
    let mut skipped = 0usize;

    // Condition: words over the generators never reach the zero label.
    let mut zero_free = true;
    let mut zero_free_detail = None;
    let mut frontier = gens.clone();
    let mut seen_frontiers: BTreeSet<LabelSet> = BTreeSet::new();
    let mut reached = gens.clone();
    let mut stage = 1usize;
    loop {
        if reached.contains(a.zero()) {
            zero_free = false;
            zero_free_detail = Some(format!(
                "a generator word of length {stage} multiplies to the zero label"
            ));
            break;
        }
        if !seen_frontiers.insert(frontier.clone()) {
            break;
        }
        let mut next = LabelSet::new();
        for u in frontier.iter() {
            for g in gens.iter() {
                match table.product(u, g) {
                    Ok(set) => next.union_with(set),
                    Err(_) => skipped += 1,
                }
            }
        }
        if next.is_empty() {
            break;
        }
        reached.union_with(&next);
        frontier = next;
        stage += 1;
    }

    // Condition: each generator's row meets the generators everywhere.
    let mut pairwise_meets = true;
    let mut pairwise_detail = None;
    'rows: for g in gens.iter() {
        for v in a.ids() {
            match table.product(g, v) {
                Ok(set) => {
                    if set.intersection(&gens).is_empty() {
                        pairwise_meets = false;
                        pairwise_detail = Some(format!(
                            "{}*{} = {} misses the generator set",
                            a.name(g),
                            a.name(v),
                            a.render(set)
                        ));
                        break 'rows;
                    }
                }
                Err(_) => skipped += 1,
            }
        }
    }

    // Probe: inverse-generator words against the almost-deterministic part.
    let acl_disjoint = if gens.iter().all(|g| a.sign(g) == Sign::Pos) {
        let almost = almost_deterministic_closure(table);
        let mut target = almost.clone();
        target.remove(a.zero());
        let inverses: Vec<LabelId> = gens
            .iter()
            .map(|g| a.inverse_of(g).expect("positive generators"))
            .collect();
        let mut disjoint = true;
        let mut frontier: LabelSet = inverses.iter().copied().collect();
        'probe: for _ in 0..4 {
            if !frontier.intersection(&target).is_empty() {
                disjoint = false;
                break;
            }
            let mut next = LabelSet::new();
            for u in frontier.iter() {
                for &i in &inverses {
                    match table.product(u, i) {
                        Ok(set) => next.union_with(set),
                        Err(_) => skipped += 1,
                    }
                }
            }
            if next.is_empty() {
                break 'probe;
            }
            frontier = next;
        }
        Some(disjoint)
    } else {
        None
    };

    Ok(PowerfulReport {
        pass: zero_free && pairwise_meets,
        zero_free,
        zero_free_detail,
        pairwise_meets,
        pairwise_detail,
        acl_disjoint,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::{Label, SignedAlphabet};
    use std::collections::BTreeMap;

    fn tiny_negative_table() -> MultiTable {
        let alpha = SignedAlphabet::new(vec![
            Label {
                id: "0".into(),
                sign: Sign::Zero,
                inverse: None,
            },
            Label {
                id: "-1".into(),
                sign: Sign::Neg,
                inverse: None,
            },
        ])
        .unwrap();
        let zero = alpha.zero();
        let neg = alpha.resolve("-1").unwrap();
        let mut products = BTreeMap::new();
        products.insert((zero, zero), LabelSet::singleton(zero));
        products.insert((zero, neg), LabelSet::singleton(neg));
        products.insert((neg, zero), LabelSet::singleton(neg));
        products.insert((neg, neg), LabelSet::singleton(neg));
        MultiTable::explicit(alpha, products).unwrap()
    }

    #[test]
    fn idempotent_negative_is_a_pip_element() {
        let t = tiny_negative_table();
        let neg = t.alphabet().resolve("-1").unwrap();
        assert_eq!(pip_elements(&t), LabelSet::singleton(neg));
    }

    #[test]
    fn single_negative_gets_a_direct_closure_witness() {
        let t = tiny_negative_table();
        let w = sop_detect(&t, 6).unwrap();
        assert_eq!(w.kind, SopWitnessKind::DirectClosure);
        assert_eq!(w.element.as_deref(), Some("-1"));
        assert!(reevaluate_sop(&t, &w));
    }

    #[test]
    fn deterministic_core_of_negative_table_is_zero() {
        let t = tiny_negative_table();
        let zero = t.alphabet().zero();
        assert_eq!(deterministic_core(&t), LabelSet::singleton(zero));
        assert_eq!(almost_deterministic_closure(&t), LabelSet::singleton(zero));
    }

    #[test]
    fn negative_table_classifies_as_partial_order() {
        let t = tiny_negative_table();
        let c = classify_relation(&t);
        assert!(c.transitive && c.partial_order && !c.equivalence);
    }

    #[test]
    fn lattice_collapses_to_two_vertices_on_the_tiny_table() {
        let t = tiny_negative_table();
        let lat = restriction_lattice(&t).unwrap();
        // {0,-1} for full/non-positive, {0} for everything else.
        assert_eq!(lat.nodes.len(), 2);
        assert_eq!(lat.edges, vec![(0, 1)]);
        assert_eq!(lat.labels_of("full"), lat.labels_of("non-positive"));
        assert_eq!(lat.labels_of("zero").unwrap(), ["0"]);
        assert!(lat.to_dot().contains("n0 -> n1"));
    }
}
