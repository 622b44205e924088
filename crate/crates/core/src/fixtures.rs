//! Bundled tables: small canonical algebras used by the test suites and
//! shipped through the `fixtures` CLI subcommand.
//!
//! Explicit fixtures are tiny closed tables; the rule-backed ones carry a
//! window bound and an unbounded-alphabet marker on the side whose labels
//! keep going past the stored ones.

use std::collections::{BTreeMap, BTreeSet};

use crate::constructions::{band_compose, group_table};
use crate::error::Result;
use crate::label::{Label, LabelSet, Sign, SignedAlphabet};
use crate::table::{MultiTable, Unbounded};

fn alphabet(labels: &[(&str, Sign, Option<&str>)]) -> SignedAlphabet {
    SignedAlphabet::new(
        labels
            .iter()
            .map(|(id, sign, inverse)| Label {
                id: id.to_string(),
                sign: *sign,
                inverse: inverse.map(str::to_string),
            })
            .collect(),
    )
    .expect("fixture alphabet")
}

/// Explicit table from nonzero cells; unit cells are synthesized.
fn explicit(a: SignedAlphabet, nonzero: &[(&str, &str, &[&str])]) -> MultiTable {
    let zero = a.zero();
    let mut products = BTreeMap::new();
    for u in a.ids() {
        products.insert((zero, u), LabelSet::singleton(u));
        products.insert((u, zero), LabelSet::singleton(u));
    }
    for (left, right, result) in nonzero {
        let u = a.resolve(left).expect("fixture label");
        let v = a.resolve(right).expect("fixture label");
        let set: LabelSet = result
            .iter()
            .map(|w| a.resolve(w).expect("fixture label"))
            .collect();
        products.insert((u, v), set);
    }
    MultiTable::explicit(a, products).expect("fixture table")
}

/// Two labels: a single negative idempotent under a unit.
pub fn example_3() -> MultiTable {
    let a = alphabet(&[("-1", Sign::Neg, None), ("0", Sign::Zero, None)]);
    explicit(a, &[("-1", "-1", &["-1"])])
}

/// Three labels: a self-inverse positive whose square is the unit, and a
/// negative absorbing everything else.
pub fn example_4() -> MultiTable {
    let a = alphabet(&[
        ("-1", Sign::Neg, None),
        ("0", Sign::Zero, None),
        ("1", Sign::Pos, Some("1")),
    ]);
    explicit(
        a,
        &[
            ("1", "1", &["0"]),
            ("1", "-1", &["-1"]),
            ("-1", "1", &["-1"]),
            ("-1", "-1", &["-1"]),
        ],
    )
}

/// Three labels: two negatives, the deeper one idempotent, everything else
/// collapsing to the shallow one.
pub fn example_5() -> MultiTable {
    let a = alphabet(&[
        ("-2", Sign::Neg, None),
        ("-1", Sign::Neg, None),
        ("0", Sign::Zero, None),
    ]);
    explicit(
        a,
        &[
            ("-2", "-2", &["-2"]),
            ("-2", "-1", &["-1"]),
            ("-1", "-2", &["-1"]),
            ("-1", "-1", &["-1"]),
        ],
    )
}

/// Dense linear order labels: 1 = below, 2 = above, mutually inverse; the
/// mixed products cover the whole alphabet.
pub fn example_6() -> MultiTable {
    let a = alphabet(&[
        ("0", Sign::Zero, None),
        ("1", Sign::Pos, Some("2")),
        ("2", Sign::Pos, Some("1")),
    ]);
    explicit(
        a,
        &[
            ("1", "1", &["1"]),
            ("2", "2", &["2"]),
            ("1", "2", &["0", "1", "2"]),
            ("2", "1", &["0", "1", "2"]),
        ],
    )
}

/// Cayley table of the cyclic group of order n, symbols 0, g, g2, ...
pub fn cyclic_cayley(n: usize) -> Vec<Vec<String>> {
    assert!(n > 0);
    let name = |i: usize| match i {
        0 => "0".to_string(),
        1 => "g".to_string(),
        i => format!("g{i}"),
    };
    (0..n)
        .map(|i| (0..n).map(|j| name((i + j) % n)).collect())
        .collect()
}

/// Cayley table of the Klein four-group, symbols 0, a, b, c.
pub fn klein_cayley() -> Vec<Vec<String>> {
    [
        ["0", "a", "b", "c"],
        ["a", "0", "c", "b"],
        ["b", "c", "0", "a"],
        ["c", "b", "a", "0"],
    ]
    .iter()
    .map(|row| row.iter().map(|s| s.to_string()).collect())
    .collect()
}

/// The cyclic group of order three as a product table.
pub fn example_7() -> MultiTable {
    group_table(&cyclic_cayley(3)).expect("cyclic group table")
}

/// Graph-distance labels 0..=max on a two-branch line: m*n is the pair
/// {m+n, |m-n|} while the sum stays inside the window.
pub fn line_graph(max: u32) -> MultiTable {
    assert!(max > 0);
    let labels: Vec<(String, Sign, Option<String>)> = (0..=max)
        .map(|d| {
            let name = d.to_string();
            if d == 0 {
                (name, Sign::Zero, None)
            } else {
                (name.clone(), Sign::Pos, Some(name))
            }
        })
        .collect();
    let refs: Vec<(&str, Sign, Option<&str>)> = labels
        .iter()
        .map(|(n, s, i)| (n.as_str(), *s, i.as_deref()))
        .collect();
    let a = alphabet(&refs);
    let mut products = BTreeMap::new();
    for m in 0..=max {
        for n in 0..=max {
            if m + n > max {
                continue;
            }
            let u = a.resolve(&m.to_string()).expect("label");
            let v = a.resolve(&n.to_string()).expect("label");
            let mut set = LabelSet::singleton(a.resolve(&(m + n).to_string()).expect("label"));
            set.insert(a.resolve(&m.abs_diff(n).to_string()).expect("label"));
            products.insert((u, v), set);
        }
    }
    MultiTable::windowed(
        a,
        max,
        products,
        BTreeSet::new(),
        BTreeSet::new(),
        Unbounded {
            neg: false,
            pos: true,
        },
    )
    .expect("fixture table")
}

/// Integer shift labels -max..=max, all invertible: m*n = {m+n} while the
/// sum stays inside the window.
pub fn z_successor(max: u32) -> MultiTable {
    assert!(max > 0);
    let max = max as i64;
    let labels: Vec<(String, Sign, Option<String>)> = (-max..=max)
        .map(|m| {
            let name = m.to_string();
            if m == 0 {
                (name, Sign::Zero, None)
            } else {
                (name, Sign::Pos, Some((-m).to_string()))
            }
        })
        .collect();
    let refs: Vec<(&str, Sign, Option<&str>)> = labels
        .iter()
        .map(|(n, s, i)| (n.as_str(), *s, i.as_deref()))
        .collect();
    let a = alphabet(&refs);
    let mut products = BTreeMap::new();
    for m in -max..=max {
        for n in -max..=max {
            if (m + n).abs() > max {
                continue;
            }
            let u = a.resolve(&m.to_string()).expect("label");
            let v = a.resolve(&n.to_string()).expect("label");
            let w = a.resolve(&(m + n).to_string()).expect("label");
            products.insert((u, v), LabelSet::singleton(w));
        }
    }
    MultiTable::windowed(
        a,
        max as u32,
        products,
        BTreeSet::new(),
        BTreeSet::new(),
        Unbounded {
            neg: false,
            pos: true,
        },
    )
    .expect("fixture table")
}

/// Negative addition labels 0, -1, ..., -max: (-m)*(-n) = {-(m+n)} while
/// the sum stays inside the window.
pub fn omega_star(max: u32) -> MultiTable {
    assert!(max > 0);
    let max = max as i64;
    let labels: Vec<(String, Sign, Option<String>)> = (0..=max)
        .map(|m| {
            if m == 0 {
                ("0".to_string(), Sign::Zero, None)
            } else {
                (format!("-{m}"), Sign::Neg, None)
            }
        })
        .collect();
    let refs: Vec<(&str, Sign, Option<&str>)> = labels
        .iter()
        .map(|(n, s, i)| (n.as_str(), *s, i.as_deref()))
        .collect();
    let a = alphabet(&refs);
    let name = |m: i64| {
        if m == 0 {
            "0".to_string()
        } else {
            format!("-{m}")
        }
    };
    let mut products = BTreeMap::new();
    for m in 0..=max {
        for n in 0..=max {
            if m + n > max {
                continue;
            }
            let u = a.resolve(&name(m)).expect("label");
            let v = a.resolve(&name(n)).expect("label");
            let w = a.resolve(&name(m + n)).expect("label");
            products.insert((u, v), LabelSet::singleton(w));
        }
    }
    MultiTable::windowed(
        a,
        max as u32,
        products,
        BTreeSet::new(),
        BTreeSet::new(),
        Unbounded {
            neg: true,
            pos: false,
        },
    )
    .expect("fixture table")
}

/// Band of the two-label negative table with the two-element group.
pub fn thm52_z2() -> Result<MultiTable> {
    band_compose(&example_3(), &group_table(&cyclic_cayley(2))?)
}

/// Band of the windowed negative addition table with the cyclic group of
/// order three.
pub fn thm53_z3() -> Result<MultiTable> {
    band_compose(&omega_star(6), &example_7())
}

fn boundary_fixture(flagged: bool) -> MultiTable {
    // All-negative alphabet around a sink s: x*y = {s} except three cells.
    // u2*u3 holds the whole w-family and is the one unbounded cell;
    // u1*u2 = {a} and a*u3 = {s,b} make the fold
    //   (u1*u2)*u3 = {s,b}  against  u1*(u2*u3) = {s}
    // strictly bigger, and that is the only strict triple in the table.
    let mut labels: Vec<(String, Sign, Option<String>)> = Vec::new();
    labels.push(("0".to_string(), Sign::Zero, None));
    for n in ["a", "b", "s", "u1", "u2", "u3"] {
        labels.push((n.to_string(), Sign::Neg, None));
    }
    for i in 0..=6 {
        labels.push((format!("w{i}"), Sign::Neg, None));
    }
    let refs: Vec<(&str, Sign, Option<&str>)> = labels
        .iter()
        .map(|(n, s, i)| (n.as_str(), *s, i.as_deref()))
        .collect();
    let a = alphabet(&refs);
    let zero = a.zero();
    let id = |n: &str| a.resolve(n).expect("label");
    let mut products = BTreeMap::new();
    for u in a.ids() {
        products.insert((zero, u), LabelSet::singleton(u));
        products.insert((u, zero), LabelSet::singleton(u));
        if u == zero {
            continue;
        }
        for v in a.ids() {
            if v != zero {
                products.insert((u, v), LabelSet::singleton(id("s")));
            }
        }
    }
    let w_family: LabelSet = (0..=6).map(|i| id(&format!("w{i}"))).collect();
    products.insert((id("u2"), id("u3")), w_family);
    products.insert((id("u1"), id("u2")), LabelSet::singleton(id("a")));
    products.insert(
        (id("a"), id("u3")),
        [id("s"), id("b")].into_iter().collect(),
    );
    let infinite: BTreeSet<_> = if flagged {
        [(id("u2"), id("u3"))].into_iter().collect()
    } else {
        BTreeSet::new()
    };
    MultiTable::windowed(
        a,
        6,
        products,
        infinite,
        BTreeSet::new(),
        Unbounded {
            neg: true,
            pos: false,
        },
    )
    .expect("fixture table")
}

/// The strict-fold table: one cell is marked unbounded, sanctioning the
/// single strict semi-associativity triple.
pub fn example_3_1() -> MultiTable {
    boundary_fixture(true)
}

/// The same products with the unbounded marker dropped; the strict triple
/// then violates the strictness condition.
pub fn example_3_1_unflagged() -> MultiTable {
    boundary_fixture(false)
}

/// Names of all bundled fixtures, in listing order.
pub const FIXTURE_NAMES: [&str; 11] = [
    "example-3",
    "example-3-1",
    "example-4",
    "example-5",
    "example-6",
    "example-7",
    "line-graph",
    "omega-star",
    "thm52-z2",
    "thm53-z3",
    "z-successor",
];

/// One-line account of a bundled fixture.
pub fn describe(name: &str) -> Option<&'static str> {
    Some(match name {
        "example-3" => "one negative idempotent under a unit",
        "example-3-1" => "unbounded-cell table with one sanctioned strict fold",
        "example-4" => "self-inverse positive over an absorbing negative",
        "example-5" => "two-level negative collapse",
        "example-6" => "dense order labels: below/above with full mixed products",
        "example-7" => "cyclic group of order three",
        "line-graph" => "graph distances on a line: m*n = {m+n, |m-n|}, window 5",
        "omega-star" => "negative addition truncated at window 6",
        "thm52-z2" => "band of the negative idempotent with the two-element group",
        "thm53-z3" => "band of windowed negative addition with the order-three group",
        "z-successor" => "integer shifts: m*n = {m+n}, window 5",
        _ => return None,
    })
}

/// Build a bundled fixture by listing name.
pub fn by_name(name: &str) -> Option<MultiTable> {
    Some(match name {
        "example-3" => example_3(),
        "example-3-1" => example_3_1(),
        "example-4" => example_4(),
        "example-5" => example_5(),
        "example-6" => example_6(),
        "example-7" => example_7(),
        "line-graph" => line_graph(5),
        "omega-star" => omega_star(6),
        "thm52-z2" => thm52_z2().expect("band of bundled monoids"),
        "thm53-z3" => thm53_z3().expect("band of bundled monoids"),
        "z-successor" => z_successor(5),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::validate::{validate_table, AxiomId, CheckStatus};

    #[test]
    fn every_bundled_fixture_validates() {
        for name in FIXTURE_NAMES {
            let t = by_name(name).unwrap();
            let report = validate_table(&t);
            assert!(
                report.passed(),
                "{name}: {:?}",
                report.failures().collect::<Vec<_>>()
            );
            assert!(describe(name).is_some());
        }
    }

    #[test]
    fn explicit_fixtures_have_no_skipped_checks() {
        for name in ["example-3", "example-4", "example-5", "example-6", "example-7", "thm52-z2"] {
            let t = by_name(name).unwrap();
            for check in validate_table(&t).checks {
                assert!(
                    matches!(check.status, CheckStatus::Pass | CheckStatus::VacuousPass),
                    "{name} {}: {:?}",
                    check.id,
                    check.status
                );
            }
        }
    }

    #[test]
    fn banded_omega_star_keeps_its_window_products() {
        let t = thm53_z3().unwrap();
        let a = t.alphabet();
        let p = |l: &str, r: &str| t.product(a.resolve(l).unwrap(), a.resolve(r).unwrap());
        assert_eq!(*p("-2", "-3").unwrap(), LabelSet::singleton(a.resolve("-5").unwrap()));
        assert_eq!(*p("-2", "g").unwrap(), LabelSet::singleton(a.resolve("-2").unwrap()));
        assert_eq!(*p("g", "-2").unwrap(), LabelSet::singleton(a.resolve("-2").unwrap()));
        assert_eq!(*p("g", "g").unwrap(), LabelSet::singleton(a.resolve("g2").unwrap()));
        assert!(p("-4", "-5").is_err());
        assert!(t.unbounded().neg);
    }

    #[test]
    fn shift_table_adds_and_clips() {
        let t = z_successor(5);
        let a = t.alphabet();
        let p = |l: &str, r: &str| t.product(a.resolve(l).unwrap(), a.resolve(r).unwrap());
        assert_eq!(*p("2", "3").unwrap(), LabelSet::singleton(a.resolve("5").unwrap()));
        assert_eq!(*p("-2", "3").unwrap(), LabelSet::singleton(a.resolve("1").unwrap()));
        assert!(p("3", "3").is_err());
        let three = a.resolve("3").unwrap();
        assert_eq!(a.inverse_of(three).unwrap(), a.resolve("-3").unwrap());
        assert_eq!(a.sign(three), Sign::Pos);
    }

    #[test]
    fn strict_fold_is_sanctioned_only_by_the_unbounded_marker() {
        let flagged = example_3_1();
        let report = validate_table(&flagged);
        assert!(report.passed());
        assert_eq!(report.check(AxiomId::A7).status, CheckStatus::Pass);

        let profile = crate::validate::associativity_profile(&flagged);
        let strict: Vec<_> = profile.strict().collect();
        assert_eq!(strict.len(), 1, "exactly one strict triple");
        assert_eq!(strict[0].labels, ["u1", "u2", "u3"]);

        let bare = example_3_1_unflagged();
        let report = validate_table(&bare);
        assert!(!report.passed());
        let a7 = report.check(AxiomId::A7);
        assert_eq!(a7.status, CheckStatus::Fail);
        let witness = a7.witness.as_ref().unwrap();
        assert_eq!(witness.labels, ["u1", "u2", "u3"]);
    }
}
