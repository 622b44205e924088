//! Axiom battery for set-valued product tables.
//!
//! Eight checks with fixed ids A1 through A8. Every check reports pass,
//! vacuous pass (hypothesis never satisfiable), fail with a witness, or
//! skipped-window when a rule-backed table cannot evaluate the instances
//! inside its declared bound. A fail witness always pins a concrete
//! instance that re-evaluates to a violation.
//!
//! Witness selection is deterministic: instances are visited in the
//! alphabet's declared label order and the first violation wins.

use serde::Serialize;

use crate::analysis::deterministic_core;
use crate::label::{LabelId, LabelSet, Sign};
use crate::table::MultiTable;

/// Identifiers of the eight table checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AxiomId {
    A1,
    A2,
    A3,
    A4,
    A5,
    A6,
    A7,
    A8,
}

pub const AXIOMS: [AxiomId; 8] = [
    AxiomId::A1,
    AxiomId::A2,
    AxiomId::A3,
    AxiomId::A4,
    AxiomId::A5,
    AxiomId::A6,
    AxiomId::A7,
    AxiomId::A8,
];

impl AxiomId {
    /// Stable short name used in reports.
    pub fn name(self) -> &'static str {
        match self {
            AxiomId::A1 => "A1",
            AxiomId::A2 => "A2",
            AxiomId::A3 => "A3",
            AxiomId::A4 => "A4",
            AxiomId::A5 => "A5",
            AxiomId::A6 => "A6",
            AxiomId::A7 => "A7",
            AxiomId::A8 => "A8",
        }
    }

    /// What the check verifies.
    pub fn title(self) -> &'static str {
        match self {
            AxiomId::A1 => "zero is a two-sided unit",
            AxiomId::A2 => "negative factors absorb into negatives",
            AxiomId::A3 => "positive pairs stay non-negative",
            AxiomId::A4 => "positives have a unique two-sided inverse",
            AxiomId::A5 => "inversion reverses positive products",
            AxiomId::A6 => "left-folded products cover right-folded ones",
            AxiomId::A7 => "strict folding gaps need an unbounded middle",
            AxiomId::A8 => "deterministic part multiplies to singletons",
        }
    }
}

impl std::fmt::Display for AxiomId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of one check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    /// The hypothesis never fired; nothing was actually tested.
    VacuousPass,
    Fail,
    /// Some instances could not be evaluated inside the window and none of
    /// the evaluable ones failed.
    SkippedWindow,
}

/// A concrete violating instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// The labels pinning the instance, in the axiom's argument order.
    pub labels: Vec<String>,
    /// Rendered account of what went wrong.
    pub detail: String,
}

/// Result of one axiom check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub id: AxiomId,
    pub title: &'static str,
    pub status: CheckStatus,
    pub witness: Option<Witness>,
    /// How many instances were skipped for window reasons.
    pub skipped_instances: usize,
}

/// The full battery result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<AxiomCheck>,
}

impl ValidationReport {
    /// True when no check failed. Skipped instances do not fail a table.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    /// The failed checks, if any.
    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks
            .iter()
            .filter(|c| c.status == CheckStatus::Fail)
    }

    pub fn check(&self, id: AxiomId) -> &AxiomCheck {
        self.checks.iter().find(|c| c.id == id).expect("fixed catalogue")
    }
}

enum Outcome {
    Holds,
    Violated(Witness),
    Skipped,
}

/// Run all eight checks.
pub fn validate_table(table: &MultiTable) -> ValidationReport {
    let checks = AXIOMS
        .iter()
        .map(|&id| run_check(table, id))
        .collect();
    ValidationReport { checks }
}

/// Re-run the instance a witness points at; true when it still violates.
///
/// Unknown labels in the witness make this return false: a witness that no
/// longer names table labels cannot re-evaluate to anything.
pub fn reevaluate_witness(table: &MultiTable, id: AxiomId, witness: &Witness) -> bool {
    let mut labels = Vec::new();
    for name in &witness.labels {
        match table.alphabet().resolve(name) {
            Ok(l) => labels.push(l),
            Err(_) => return false,
        }
    }
    matches!(evaluate_instance(table, id, &labels), Some(Outcome::Violated(_)))
}

fn run_check(table: &MultiTable, id: AxiomId) -> AxiomCheck {
    let mut skipped = 0usize;
    let mut tested = 0usize;
    let mut witness = None;
    for labels in instances(table, id) {
        match evaluate_instance(table, id, &labels) {
            None => {}
            Some(Outcome::Holds) => tested += 1,
            Some(Outcome::Skipped) => skipped += 1,
            Some(Outcome::Violated(w)) => {
                witness = Some(w);
                break;
            }
        }
    }
    let status = match (&witness, skipped, tested) {
        (Some(_), _, _) => CheckStatus::Fail,
        (None, 0, 0) => CheckStatus::VacuousPass,
        (None, 0, _) => CheckStatus::Pass,
        (None, _, _) => CheckStatus::SkippedWindow,
    };
    AxiomCheck {
        id,
        title: id.title(),
        status,
        witness,
        skipped_instances: skipped,
    }
}

/// Instance tuples for one axiom, in declared label order. The evaluator
/// discards tuples whose hypothesis does not fire.
fn instances(table: &MultiTable, id: AxiomId) -> Vec<Vec<LabelId>> {
    let all: Vec<LabelId> = table.alphabet().ids().collect();
    match id {
        AxiomId::A1 | AxiomId::A4 => all.iter().map(|&u| vec![u]).collect(),
        AxiomId::A2 | AxiomId::A3 | AxiomId::A5 => tuples(&all, 2),
        AxiomId::A6 | AxiomId::A7 => tuples(&all, 3),
        AxiomId::A8 => {
            let core = deterministic_core(table);
            let mut out = Vec::new();
            for u in core.iter() {
                for v in core.iter() {
                    out.push(vec![u, v]);
                }
            }
            out
        }
    }
}

fn tuples(all: &[LabelId], arity: usize) -> Vec<Vec<LabelId>> {
    let mut out = Vec::new();
    let mut tuple = vec![LabelId(0); arity];
    fill(all, &mut tuple, 0, &mut out);
    out
}

fn fill(all: &[LabelId], tuple: &mut Vec<LabelId>, pos: usize, out: &mut Vec<Vec<LabelId>>) {
    if pos == tuple.len() {
        out.push(tuple.clone());
        return;
    }
    for &l in all {
        tuple[pos] = l;
        fill(all, tuple, pos + 1, out);
    }
}

/// Evaluate one instance. `None` means the hypothesis does not fire.
fn evaluate_instance(table: &MultiTable, id: AxiomId, labels: &[LabelId]) -> Option<Outcome> {
    match id {
        AxiomId::A1 => Some(check_unit(table, labels[0])),
        AxiomId::A2 => check_negative_absorption(table, labels[0], labels[1]),
        AxiomId::A3 => check_positive_closure(table, labels[0], labels[1]),
        AxiomId::A4 => check_inverse(table, labels[0]),
        AxiomId::A5 => check_anti_homomorphism(table, labels[0], labels[1]),
        AxiomId::A6 => Some(check_fold_inclusion(table, labels[0], labels[1], labels[2])),
        AxiomId::A7 => Some(check_strictness(table, labels[0], labels[1], labels[2])),
        AxiomId::A8 => check_determinism(table, labels[0], labels[1]),
    }
}

fn names(table: &MultiTable, labels: &[LabelId]) -> Vec<String> {
    labels
        .iter()
        .map(|&l| table.alphabet().name(l).to_string())
        .collect()
}

fn check_unit(table: &MultiTable, u: LabelId) -> Outcome {
    let a = table.alphabet();
    let zero = a.zero();
    let want = LabelSet::singleton(u);
    let left = match table.product(zero, u) {
        Ok(s) => s,
        Err(_) => return Outcome::Skipped,
    };
    if *left != want {
        return Outcome::Violated(Witness {
            labels: names(table, &[u]),
            detail: format!(
                "0*{} = {}, expected {}",
                a.name(u),
                a.render(left),
                a.render(&want)
            ),
        });
    }
    let right = match table.product(u, zero) {
        Ok(s) => s,
        Err(_) => return Outcome::Skipped,
    };
    if *right != want {
        return Outcome::Violated(Witness {
            labels: names(table, &[u]),
            detail: format!(
                "{}*0 = {}, expected {}",
                a.name(u),
                a.render(right),
                a.render(&want)
            ),
        });
    }
    Outcome::Holds
}

fn check_negative_absorption(table: &MultiTable, u: LabelId, v: LabelId) -> Option<Outcome> {
    let a = table.alphabet();
    if a.sign(u) != Sign::Neg {
        return None;
    }
    for (x, y) in [(u, v), (v, u)] {
        let set = match table.product(x, y) {
            Ok(s) => s,
            Err(_) => return Some(Outcome::Skipped),
        };
        if let Some(bad) = set.iter().find(|&w| !a.sign(w).is_negative()) {
            return Some(Outcome::Violated(Witness {
                labels: names(table, &[u, v]),
                detail: format!(
                    "{}*{} = {} contains non-negative `{}`",
                    a.name(x),
                    a.name(y),
                    a.render(set),
                    a.name(bad)
                ),
            }));
        }
    }
    Some(Outcome::Holds)
}

fn check_positive_closure(table: &MultiTable, u: LabelId, v: LabelId) -> Option<Outcome> {
    let a = table.alphabet();
    if a.sign(u) != Sign::Pos || a.sign(v) != Sign::Pos {
        return None;
    }
    let set = match table.product(u, v) {
        Ok(s) => s,
        Err(_) => return Some(Outcome::Skipped),
    };
    if let Some(bad) = set.iter().find(|&w| a.sign(w).is_negative()) {
        return Some(Outcome::Violated(Witness {
            labels: names(table, &[u, v]),
            detail: format!(
                "{}*{} = {} contains negative `{}`",
                a.name(u),
                a.name(v),
                a.render(set),
                a.name(bad)
            ),
        }));
    }
    Some(Outcome::Holds)
}

fn check_inverse(table: &MultiTable, u: LabelId) -> Option<Outcome> {
    let a = table.alphabet();
    if a.sign(u) != Sign::Pos {
        return None;
    }
    let declared = a.inverse_of(u).ok()?;
    let zero = a.zero();
    let mut candidates = Vec::new();
    let mut unknown = false;
    for v in a.ids() {
        if a.sign(v) != Sign::Pos {
            continue;
        }
        let uv = table.product(u, v);
        let vu = table.product(v, u);
        match (uv, vu) {
            (Ok(uv), Ok(vu)) => {
                if uv.contains(zero) && vu.contains(zero) {
                    candidates.push(v);
                }
            }
            _ => unknown = true,
        }
    }
    if candidates.iter().any(|&v| v != declared) {
        let stray = *candidates.iter().find(|&&v| v != declared).unwrap();
        return Some(Outcome::Violated(Witness {
            labels: names(table, &[u, stray]),
            detail: format!(
                "`{}` is a two-sided inverse of `{}` besides the declared `{}`",
                a.name(stray),
                a.name(u),
                a.name(declared)
            ),
        }));
    }
    if candidates.contains(&declared) {
        if unknown {
            // Further candidates could hide outside the window.
            return Some(Outcome::Skipped);
        }
        return Some(Outcome::Holds);
    }
    match (table.product(u, declared), table.product(declared, u)) {
        (Ok(uv), Ok(vu)) => Some(Outcome::Violated(Witness {
            labels: names(table, &[u]),
            detail: format!(
                "declared inverse `{}` fails: {}*{} = {}, {}*{} = {}, zero missing",
                a.name(declared),
                a.name(u),
                a.name(declared),
                a.render(uv),
                a.name(declared),
                a.name(u),
                a.render(vu)
            ),
        })),
        _ => Some(Outcome::Skipped),
    }
}

fn check_anti_homomorphism(table: &MultiTable, v1: LabelId, v2: LabelId) -> Option<Outcome> {
    let a = table.alphabet();
    // Negative factors cannot produce positives, so only non-negative
    // pairs can fire the hypothesis.
    if a.sign(v1) == Sign::Neg || a.sign(v2) == Sign::Neg {
        return None;
    }
    let set = match table.product(v1, v2) {
        Ok(s) => s.clone(),
        Err(_) => return Some(Outcome::Skipped),
    };
    let positives: Vec<LabelId> = set
        .iter()
        .filter(|&u| a.sign(u) == Sign::Pos)
        .collect();
    if positives.is_empty() {
        return None;
    }
    let (i1, i2) = (a.inverse_of(v1).ok()?, a.inverse_of(v2).ok()?);
    let reversed = match table.product(i2, i1) {
        Ok(s) => s,
        Err(_) => return Some(Outcome::Skipped),
    };
    for u in positives {
        let ui = a.inverse_of(u).ok()?;
        if !reversed.contains(ui) {
            return Some(Outcome::Violated(Witness {
                labels: names(table, &[v1, v2, u]),
                detail: format!(
                    "{} in {}*{} but {} missing from {}*{} = {}",
                    a.name(u),
                    a.name(v1),
                    a.name(v2),
                    a.name(ui),
                    a.name(i2),
                    a.name(i1),
                    a.render(reversed)
                ),
            }));
        }
    }
    Some(Outcome::Holds)
}

struct Fold {
    left: LabelSet,
    right: LabelSet,
}

fn fold_both(table: &MultiTable, u1: LabelId, u2: LabelId, u3: LabelId) -> Option<Fold> {
    let s1 = LabelSet::singleton(u1);
    let s3 = LabelSet::singleton(u3);
    let left_inner = table.product(u1, u2).ok()?.clone();
    let left = table.set_product(&left_inner, &s3).ok()?;
    let right_inner = table.product(u2, u3).ok()?.clone();
    let right = table.set_product(&s1, &right_inner).ok()?;
    Some(Fold { left, right })
}

fn check_fold_inclusion(table: &MultiTable, u1: LabelId, u2: LabelId, u3: LabelId) -> Outcome {
    let a = table.alphabet();
    let fold = match fold_both(table, u1, u2, u3) {
        Some(f) => f,
        None => return Outcome::Skipped,
    };
    if !fold.right.is_subset(&fold.left) {
        return Outcome::Violated(Witness {
            labels: names(table, &[u1, u2, u3]),
            detail: format!(
                "({0}*{1})*{2} = {3} does not cover {0}*({1}*{2}) = {4}",
                a.name(u1),
                a.name(u2),
                a.name(u3),
                a.render(&fold.left),
                a.render(&fold.right)
            ),
        });
    }
    Outcome::Holds
}

fn check_strictness(table: &MultiTable, u1: LabelId, u2: LabelId, u3: LabelId) -> Outcome {
    let a = table.alphabet();
    let fold = match fold_both(table, u1, u2, u3) {
        Some(f) => f,
        None => return Outcome::Skipped,
    };
    let strict = fold.right.is_subset(&fold.left) && fold.right != fold.left;
    if !strict {
        return Outcome::Holds;
    }
    let permitted = a.sign(u1) == Sign::Neg && table.is_infinite(u2, u3);
    if permitted {
        return Outcome::Holds;
    }
    Outcome::Violated(Witness {
        labels: names(table, &[u1, u2, u3]),
        detail: format!(
            "({0}*{1})*{2} = {3} strictly exceeds {0}*({1}*{2}) = {4} with a bounded middle",
            a.name(u1),
            a.name(u2),
            a.name(u3),
            a.render(&fold.left),
            a.render(&fold.right)
        ),
    })
}

fn check_determinism(table: &MultiTable, u: LabelId, v: LabelId) -> Option<Outcome> {
    let a = table.alphabet();
    let set = match table.product(u, v) {
        Ok(s) => s,
        Err(_) => return Some(Outcome::Skipped),
    };
    if set.len() != 1 {
        return Some(Outcome::Violated(Witness {
            labels: names(table, &[u, v]),
            detail: format!(
                "{}*{} = {} on the deterministic part is not a singleton",
                a.name(u),
                a.name(v),
                a.render(set)
            ),
        }));
    }
    Some(Outcome::Holds)
}

/// How one triple folds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FoldRelation {
    Equal,
    StrictLeftInclusion,
    /// Right fold escapes the left fold; the table is broken.
    NotIncluded,
    SkippedWindow,
}

/// One triple's fold comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TripleFold {
    pub labels: Vec<String>,
    pub relation: FoldRelation,
}

/// Fold comparison over every label triple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AssociativityProfile {
    pub triples: Vec<TripleFold>,
}

impl AssociativityProfile {
    pub fn strict(&self) -> impl Iterator<Item = &TripleFold> {
        self.triples
            .iter()
            .filter(|t| t.relation == FoldRelation::StrictLeftInclusion)
    }

    pub fn skipped(&self) -> usize {
        self.triples
            .iter()
            .filter(|t| t.relation == FoldRelation::SkippedWindow)
            .count()
    }

    /// Strict triples whose first label is non-negative. Such triples are
    /// never legitimate: strictness demands a negative head.
    pub fn non_negative_head_violations<'a>(
        &'a self,
        table: &'a MultiTable,
    ) -> impl Iterator<Item = &'a TripleFold> {
        self.strict().filter(move |t| {
            table
                .alphabet()
                .resolve(&t.labels[0])
                .map(|l| !table.alphabet().sign(l).is_negative())
                .unwrap_or(false)
        })
    }
}

/// Compare left and right folds for every triple of labels.
pub fn associativity_profile(table: &MultiTable) -> AssociativityProfile {
    let all: Vec<LabelId> = table.alphabet().ids().collect();
    let mut triples = Vec::new();
    for &u1 in &all {
        for &u2 in &all {
            for &u3 in &all {
                let relation = match fold_both(table, u1, u2, u3) {
                    None => FoldRelation::SkippedWindow,
                    Some(f) => {
                        if f.left == f.right {
                            FoldRelation::Equal
                        } else if f.right.is_subset(&f.left) {
                            FoldRelation::StrictLeftInclusion
                        } else {
                            FoldRelation::NotIncluded
                        }
                    }
                };
                triples.push(TripleFold {
                    labels: names(table, &[u1, u2, u3]),
                    relation,
                });
            }
        }
    }
    AssociativityProfile { triples }
}

/// Result of checking one word against the sign rules.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignLemmaOutcome {
    pub pass: bool,
    pub detail: String,
}

/// Check the sign behaviour of one word's product: a word with a negative
/// letter multiplies into negatives; an all-non-negative word multiplies
/// into non-negatives and inverts to the reversed inverted word's product.
pub fn sign_lemma_check(
    table: &MultiTable,
    word: &[LabelId],
) -> crate::error::Result<SignLemmaOutcome> {
    let a = table.alphabet();
    let product = table.word_product(word)?;
    let has_negative = word.iter().any(|&u| a.sign(u) == Sign::Neg);
    if has_negative {
        if let Some(bad) = product.iter().find(|&w| !a.sign(w).is_negative()) {
            return Ok(SignLemmaOutcome {
                pass: false,
                detail: format!(
                    "word with a negative letter produced non-negative `{}` in {}",
                    a.name(bad),
                    a.render(&product)
                ),
            });
        }
        return Ok(SignLemmaOutcome {
            pass: true,
            detail: format!("negative word product {} stays negative", a.render(&product)),
        });
    }
    if let Some(bad) = product.iter().find(|&w| a.sign(w).is_negative()) {
        return Ok(SignLemmaOutcome {
            pass: false,
            detail: format!(
                "non-negative word produced negative `{}` in {}",
                a.name(bad),
                a.render(&product)
            ),
        });
    }
    let mut reversed = Vec::with_capacity(word.len());
    for &u in word.iter().rev() {
        reversed.push(a.inverse_of(u)?);
    }
    let reversed_product = table.word_product(&reversed)?;
    let inverted = a.set_inverse(&product)?;
    if inverted != reversed_product {
        return Ok(SignLemmaOutcome {
            pass: false,
            detail: format!(
                "inverse of product {} is {}, but reversed inverted word gives {}",
                a.render(&product),
                a.render(&inverted),
                a.render(&reversed_product)
            ),
        });
    }
    Ok(SignLemmaOutcome {
        pass: true,
        detail: format!(
            "product {} inverts to the reversed word's product {}",
            a.render(&product),
            a.render(&reversed_product)
        ),
    })
}
