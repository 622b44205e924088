//! JSON documents for tables, relational structures, typed tables, and
//! join specifications.
//!
//! Writers emit deterministic output: fixed field order, entries in
//! declared label order, two-space indentation. Readers reject unknown
//! fields and re-run the full constructor validation, so a loaded value
//! satisfies the same invariants as a built one.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label::{Label, LabelId, LabelSet, Sign, SignedAlphabet};
use crate::oracle::RelationalStructure;
use crate::table::{MultiTable, Unbounded};
use crate::typed::{CrossProduct, CrossSpec, SortId, TypedTable};

fn parse_error(e: serde_json::Error) -> Error {
    Error::Format(e.to_string())
}

fn render(value: &impl Serialize) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("serializable document");
    out.push('\n');
    out
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LabelDoc {
    id: String,
    sign: Sign,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    inverse: Option<String>,
}

fn label_docs(alphabet: &SignedAlphabet) -> Vec<LabelDoc> {
    alphabet
        .ids()
        .map(|u| {
            let l = alphabet.label(u);
            LabelDoc {
                id: l.id.clone(),
                sign: l.sign,
                // The zero label's self-inverse is implied, not written.
                inverse: if l.sign == Sign::Zero {
                    None
                } else {
                    l.inverse.clone()
                },
            }
        })
        .collect()
}

fn alphabet_of(docs: Vec<LabelDoc>) -> Result<SignedAlphabet> {
    SignedAlphabet::new(
        docs.into_iter()
            .map(|d| Label {
                id: d.id,
                sign: d.sign,
                inverse: d.inverse,
            })
            .collect(),
    )
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProductDoc {
    left: String,
    right: String,
    result: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableDoc {
    labels: Vec<LabelDoc>,
    products: Vec<ProductDoc>,
    /// Present exactly for rule-backed tables; the fields below are only
    /// meaningful (and only allowed) together with it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    window: Option<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    infinite: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    empty: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    unbounded: Vec<String>,
}

fn table_doc(t: &MultiTable) -> TableDoc {
    let a = t.alphabet();
    let named = |u: LabelId| a.name(u).to_string();
    let products = t
        .defined_cells()
        .map(|(u, v, set)| ProductDoc {
            left: named(u),
            right: named(v),
            result: set.iter().map(named).collect(),
        })
        .collect();
    let mut infinite = Vec::new();
    let mut empty = Vec::new();
    if t.window().is_some() {
        for u in a.ids() {
            for v in a.ids() {
                match t.cell(u, v) {
                    crate::table::Cell::Value { infinite: true, .. } => {
                        infinite.push((named(u), named(v)));
                    }
                    crate::table::Cell::Empty => empty.push((named(u), named(v))),
                    _ => {}
                }
            }
        }
    }
    let mut unbounded = Vec::new();
    if t.unbounded().neg {
        unbounded.push("neg".to_string());
    }
    if t.unbounded().pos {
        unbounded.push("pos".to_string());
    }
    TableDoc {
        labels: label_docs(a),
        products,
        window: t.window(),
        infinite,
        empty,
        unbounded,
    }
}

fn table_of(doc: TableDoc) -> Result<MultiTable> {
    let alphabet = alphabet_of(doc.labels)?;
    let mut products: BTreeMap<(LabelId, LabelId), LabelSet> = BTreeMap::new();
    for p in &doc.products {
        let u = alphabet.resolve(&p.left)?;
        let v = alphabet.resolve(&p.right)?;
        let mut set = LabelSet::new();
        for w in &p.result {
            set.insert(alphabet.resolve(w)?);
        }
        if products.insert((u, v), set).is_some() {
            return Err(Error::Format(format!(
                "duplicate product entry `{}`*`{}`",
                p.left, p.right
            )));
        }
    }
    let resolve_pairs = |pairs: &[(String, String)]| -> Result<BTreeSet<(LabelId, LabelId)>> {
        pairs
            .iter()
            .map(|(l, r)| Ok((alphabet.resolve(l)?, alphabet.resolve(r)?)))
            .collect()
    };
    match doc.window {
        Some(window) => {
            let infinite = resolve_pairs(&doc.infinite)?;
            let empty = resolve_pairs(&doc.empty)?;
            let mut unbounded = Unbounded::default();
            for side in &doc.unbounded {
                match side.as_str() {
                    "neg" => unbounded.neg = true,
                    "pos" => unbounded.pos = true,
                    other => {
                        return Err(Error::Format(format!(
                            "unbounded side must be `neg` or `pos`, got `{other}`"
                        )))
                    }
                }
            }
            MultiTable::windowed(alphabet, window, products, infinite, empty, unbounded)
        }
        None => {
            if !doc.infinite.is_empty() || !doc.empty.is_empty() || !doc.unbounded.is_empty() {
                return Err(Error::Format(
                    "cell markers require a window field".into(),
                ));
            }
            MultiTable::explicit(alphabet, products)
        }
    }
}

/// Serialize a table to its JSON document.
pub fn table_to_json(t: &MultiTable) -> String {
    render(&table_doc(t))
}

/// Parse a table from its JSON document.
pub fn table_from_json(text: &str) -> Result<MultiTable> {
    table_of(serde_json::from_str(text).map_err(parse_error)?)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StructureDoc {
    universe: Vec<i64>,
    relations: BTreeMap<String, Vec<(i64, i64)>>,
    window: Vec<i64>,
}

/// Serialize a relational structure to its JSON document.
pub fn structure_to_json(s: &RelationalStructure) -> String {
    render(&StructureDoc {
        universe: s.universe.iter().copied().collect(),
        relations: s
            .relations
            .iter()
            .map(|(l, pairs)| (l.clone(), pairs.iter().copied().collect()))
            .collect(),
        window: s.window.iter().copied().collect(),
    })
}

/// Parse and validate a relational structure from its JSON document.
pub fn structure_from_json(text: &str) -> Result<RelationalStructure> {
    let doc: StructureDoc = serde_json::from_str(text).map_err(parse_error)?;
    let s = RelationalStructure {
        universe: doc.universe.into_iter().collect(),
        relations: doc
            .relations
            .into_iter()
            .map(|(l, pairs)| (l, pairs.into_iter().collect()))
            .collect(),
        window: doc.window.into_iter().collect(),
    };
    s.validate()?;
    Ok(s)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MuDoc {
    from: String,
    to: String,
    labels: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TypedProductDoc {
    from: String,
    via: String,
    to: String,
    left: String,
    right: String,
    result: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TypedDoc {
    sorts: Vec<String>,
    labels: Vec<LabelDoc>,
    mu: Vec<MuDoc>,
    products: Vec<TypedProductDoc>,
}

/// Serialize a typed table to its JSON document.
pub fn typed_to_json(t: &TypedTable) -> String {
    let a = t.alphabet();
    let named = |u: LabelId| a.name(u).to_string();
    let n = t.sorts().len();
    let mut mu = Vec::new();
    for p in 0..n {
        for q in 0..n {
            let class = t.class(p, q);
            if !class.is_empty() {
                mu.push(MuDoc {
                    from: t.sorts()[p].clone(),
                    to: t.sorts()[q].clone(),
                    labels: class.iter().map(named).collect(),
                });
            }
        }
    }
    let products = t
        .defined_products()
        .map(|(p, q, r, u, v, set)| TypedProductDoc {
            from: t.sorts()[p].clone(),
            via: t.sorts()[q].clone(),
            to: t.sorts()[r].clone(),
            left: named(u),
            right: named(v),
            result: set.iter().map(named).collect(),
        })
        .collect();
    render(&TypedDoc {
        sorts: t.sorts().to_vec(),
        labels: label_docs(a),
        mu,
        products,
    })
}

/// Parse and validate a typed table from its JSON document.
pub fn typed_from_json(text: &str) -> Result<TypedTable> {
    let doc: TypedDoc = serde_json::from_str(text).map_err(parse_error)?;
    let alphabet = alphabet_of(doc.labels)?;
    let sort_id = |name: &str| -> Result<SortId> {
        doc.sorts
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::Format(format!("undeclared sort `{name}`")))
    };
    let mut mu: BTreeMap<(SortId, SortId), LabelSet> = BTreeMap::new();
    for entry in &doc.mu {
        let key = (sort_id(&entry.from)?, sort_id(&entry.to)?);
        let mut set = LabelSet::new();
        for l in &entry.labels {
            set.insert(alphabet.resolve(l)?);
        }
        if mu.insert(key, set).is_some() {
            return Err(Error::Format(format!(
                "duplicate mu entry ({},{})",
                entry.from, entry.to
            )));
        }
    }
    let mut products = BTreeMap::new();
    for p in &doc.products {
        let key = (
            sort_id(&p.from)?,
            sort_id(&p.via)?,
            sort_id(&p.to)?,
            alphabet.resolve(&p.left)?,
            alphabet.resolve(&p.right)?,
        );
        let mut set = LabelSet::new();
        for w in &p.result {
            set.insert(alphabet.resolve(w)?);
        }
        if products.insert(key, set).is_some() {
            return Err(Error::Format(format!(
                "duplicate typed product ({},{},{}) `{}`*`{}`",
                p.from, p.via, p.to, p.left, p.right
            )));
        }
    }
    TypedTable::new(doc.sorts, alphabet, mu, products)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CrossMuDoc {
    from: String,
    to: String,
    labels: Vec<LabelDoc>,
}

#[derive(Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct CrossDoc {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    mu: Vec<CrossMuDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    products: Vec<TypedProductDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JoinSpecDoc {
    sorts: Vec<String>,
    /// One component table per sort, keyed by sort name.
    components: BTreeMap<String, TableDoc>,
    #[serde(default)]
    cross: Option<CrossDoc>,
}

/// The parsed ingredients of a join: sorts, component tables, cross spec.
pub struct JoinSpec {
    pub sorts: Vec<String>,
    pub components: BTreeMap<String, MultiTable>,
    pub cross: CrossSpec,
}

/// Parse a join specification from its JSON document.
pub fn join_spec_from_json(text: &str) -> Result<JoinSpec> {
    let doc: JoinSpecDoc = serde_json::from_str(text).map_err(parse_error)?;
    let mut components = BTreeMap::new();
    for (sort, table) in doc.components {
        components.insert(sort, table_of(table)?);
    }
    let cross_doc = doc.cross.unwrap_or_default();
    let mut mu: BTreeMap<(String, String), Vec<Label>> = BTreeMap::new();
    for entry in cross_doc.mu {
        let labels = entry
            .labels
            .into_iter()
            .map(|d| Label {
                id: d.id,
                sign: d.sign,
                inverse: d.inverse,
            })
            .collect();
        if mu
            .insert((entry.from.clone(), entry.to.clone()), labels)
            .is_some()
        {
            return Err(Error::Format(format!(
                "duplicate cross mu entry ({},{})",
                entry.from, entry.to
            )));
        }
    }
    let products = cross_doc
        .products
        .into_iter()
        .map(|p| CrossProduct {
            from: p.from,
            via: p.via,
            to: p.to,
            left: p.left,
            right: p.right,
            result: p.result,
        })
        .collect();
    Ok(JoinSpec {
        sorts: doc.sorts,
        components,
        cross: CrossSpec { mu, products },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{generate_structure, StructureKind};

    fn tiny() -> MultiTable {
        let a = SignedAlphabet::new(vec![
            Label {
                id: "-1".into(),
                sign: Sign::Neg,
                inverse: None,
            },
            Label {
                id: "0".into(),
                sign: Sign::Zero,
                inverse: None,
            },
        ])
        .unwrap();
        let n = a.resolve("-1").unwrap();
        let z = a.zero();
        let mut m = BTreeMap::new();
        m.insert((z, z), LabelSet::singleton(z));
        m.insert((z, n), LabelSet::singleton(n));
        m.insert((n, z), LabelSet::singleton(n));
        m.insert((n, n), LabelSet::singleton(n));
        MultiTable::explicit(a, m).unwrap()
    }

    #[test]
    fn explicit_tables_round_trip_byte_stable() {
        let t = tiny();
        let text = table_to_json(&t);
        let back = table_from_json(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(table_to_json(&back), text);
    }

    #[test]
    fn windowed_tables_keep_their_markers() {
        let a = tiny().alphabet().clone();
        let n = a.resolve("-1").unwrap();
        let z = a.zero();
        let mut m = BTreeMap::new();
        m.insert((z, z), LabelSet::singleton(z));
        m.insert((z, n), LabelSet::singleton(n));
        m.insert((n, z), LabelSet::singleton(n));
        let t = MultiTable::windowed(
            a,
            3,
            m,
            BTreeSet::new(),
            [(n, n)].into_iter().collect(),
            Unbounded {
                neg: true,
                pos: false,
            },
        )
        .unwrap();
        let back = table_from_json(&table_to_json(&t)).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.window(), Some(3));
        assert!(back.unbounded().neg);
        assert!(matches!(back.cell(n, n), crate::table::Cell::Empty));
    }

    #[test]
    fn markers_without_a_window_are_rejected() {
        let text = r#"{
            "labels": [{"id": "0", "sign": "zero"}],
            "products": [{"left": "0", "right": "0", "result": ["0"]}],
            "empty": [["0", "0"]]
        }"#;
        assert!(matches!(table_from_json(text), Err(Error::Format(_))));
    }

    #[test]
    fn missing_cells_fail_the_explicit_load() {
        let text = r#"{
            "labels": [
                {"id": "0", "sign": "zero"},
                {"id": "u", "sign": "neg"}
            ],
            "products": [{"left": "0", "right": "0", "result": ["0"]}]
        }"#;
        assert!(matches!(table_from_json(text), Err(Error::Format(_))));
    }

    #[test]
    fn unknown_fields_are_load_errors() {
        let text = r#"{
            "labels": [{"id": "0", "sign": "zero"}],
            "products": [{"left": "0", "right": "0", "result": ["0"]}],
            "comment": "stray"
        }"#;
        let err = table_from_json(text).unwrap_err();
        assert!(matches!(err, Error::Format(_)));
    }

    #[test]
    fn structures_round_trip() {
        let s = generate_structure(&StructureKind::Chain { n: 4 }).unwrap();
        let text = structure_to_json(&s);
        let back = structure_from_json(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(structure_to_json(&back), text);
    }

    #[test]
    fn typed_tables_round_trip() {
        let t = TypedTable::from_single("p", &tiny()).unwrap();
        let text = typed_to_json(&t);
        let back = typed_from_json(&text).unwrap();
        assert_eq!(typed_to_json(&back), text);
        assert_eq!(back.sorts(), t.sorts());
        assert_eq!(
            back.defined_products().count(),
            t.defined_products().count()
        );
    }

    /// A one-label table holding only the zero cell.
    fn unit_table() -> MultiTable {
        let a = SignedAlphabet::new(vec![Label {
            id: "0".into(),
            sign: Sign::Zero,
            inverse: None,
        }])
        .unwrap();
        let z = a.zero();
        let mut m = BTreeMap::new();
        m.insert((z, z), LabelSet::singleton(z));
        MultiTable::explicit(a, m).unwrap()
    }

    #[test]
    fn join_specs_parse_into_components_and_cross_products() {
        let text = format!(
            r#"{{
                "sorts": ["p", "q"],
                "components": {{"p": {b1}, "q": {b2}}},
                "cross": {{
                    "mu": [
                        {{"from": "p", "to": "q",
                          "labels": [{{"id": "a", "sign": "pos", "inverse": "a'"}}]}},
                        {{"from": "q", "to": "p",
                          "labels": [{{"id": "a'", "sign": "pos", "inverse": "a"}}]}}
                    ],
                    "products": [
                        {{"from": "p", "via": "q", "to": "p",
                          "left": "a", "right": "a'", "result": ["0"]}},
                        {{"from": "q", "via": "p", "to": "q",
                          "left": "a'", "right": "a", "result": ["0"]}}
                    ]
                }}
            }}"#,
            b1 = table_to_json(&unit_table()).trim(),
            b2 = table_to_json(&unit_table()).trim(),
        );
        let spec = join_spec_from_json(&text).unwrap();
        assert_eq!(spec.sorts, ["p", "q"]);
        assert_eq!(spec.components.len(), 2);
        assert_eq!(spec.cross.products.len(), 2);
        let joined =
            crate::typed::join_build(&spec.sorts, &spec.components, &spec.cross).unwrap();
        assert!(crate::typed::validate_typed(&joined).passed());
    }
}
