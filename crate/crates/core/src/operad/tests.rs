use super::presets::MobiusCorolla;
use super::*;
use crate::graph::GraphBuilder;
use crate::linalg::q;
use crate::structured::StructuredGraph;

/// Comm tensored with the graded commutative algebra spanned by 1, x, y, xy
/// with |y| = 1, dy = x and x² = y² = 0. Elements of odd degree make the
/// Koszul signs in graph complexes visible.
#[derive(Clone, Copy, Debug)]
pub(crate) struct DgComm;

impl DgComm {
    const DEG: [i64; 4] = [0, 0, 1, 1];

    fn product(a: usize, b: usize) -> Option<usize> {
        match (a, b) {
            (0, z) | (z, 0) => Some(z),
            (1, 2) | (2, 1) => Some(3),
            _ => None,
        }
    }
}

impl LinearOperad for DgComm {
    fn name(&self) -> &str {
        "dgcomm"
    }
    fn admits(&self, n: usize) -> bool {
        n >= 2
    }
    fn dim(&self, n: usize) -> usize {
        if n >= 2 {
            4
        } else {
            0
        }
    }
    fn degree(&self, _n: usize, b: usize) -> i64 {
        Self::DEG[b]
    }
    fn act(&self, _n: usize, _perm: &[usize], b: usize) -> SparseVec {
        SparseVec::unit(b)
    }
    fn compose(&self, _n: usize, _i: usize, a: usize, _m: usize, _j: usize, b: usize) -> SparseVec {
        Self::product(a, b).map_or_else(SparseVec::new, SparseVec::unit)
    }
    fn differential(&self, _n: usize, b: usize) -> SparseVec {
        if b == 2 {
            SparseVec::unit(1)
        } else {
            SparseVec::new()
        }
    }
    fn basis_name(&self, _n: usize, b: usize) -> String {
        ["1", "x", "y", "xy"][b].to_string()
    }
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

#[test]
fn component_sizes() {
    for n in 2..=7 {
        assert_eq!(Ass.size(n), factorial(n - 1));
    }
    assert_eq!(Ass.size(4), 6);
    assert_eq!(InvAss.size(2), 2);
    assert_eq!(InvAss.size(3), 8);
    assert_eq!(Linearized(Comm).dim(3), 1);
    assert_eq!(Linearized(Comm).differential(3, 0), SparseVec::new());
    assert_eq!(Ass.size(1), 0);
}

/// InvAss(P) counted as pairs (cyclic order, labels) modulo the flip.
#[test]
fn invass_matches_flip_orbits() {
    for n in 2..=5 {
        let mut seen = std::collections::BTreeSet::new();
        for r in 0..factorial(n - 1) {
            for bits in 0..(1usize << n) {
                let c = MobiusCorolla {
                    order: cyclic_order_unrank(n, r),
                    labels: (0..n).map(|k| ((bits >> k) & 1) as u8).collect(),
                };
                let idx = c.index();
                assert_eq!(idx, c.flipped().index());
                seen.insert(idx);
            }
        }
        assert_eq!(seen.len(), InvAss.size(n));
    }
}

#[test]
fn ass_splice_and_action() {
    // (i a b) glued to (j c d) at i, j gives (a b c d)
    let x = cyclic_order_rank(&[0, 1, 2]);
    let out = Ass.compose(3, 0, x, 3, 0, x);
    assert_eq!(cyclic_order_unrank(4, out), vec![0, 1, 2, 3]);
    // a transposition swaps the two cyclic orders of three legs
    assert_eq!(Ass.act(3, &[1, 0, 2], 0), 1);
    assert_eq!(Ass.act(3, &[1, 0, 2], 1), 0);
    // all-zero Möbius corollas compose like Ass
    for (n, m) in [(3, 3), (3, 4), (4, 2)] {
        for a in 0..Ass.size(n) {
            for b in 0..Ass.size(m) {
                let inv = InvAss.compose(n, 1, a << (n - 1), m, 0, b << (m - 1));
                assert_eq!(inv, Ass.compose(n, 1, a, m, 0, b) << (n + m - 3));
            }
        }
    }
}

fn corolla(labels: &[String], c: &MobiusCorolla) -> StructuredGraph {
    let mut b = GraphBuilder::with_vertices(1);
    let hs: Vec<usize> = labels.iter().map(|l| b.leg(0, l.clone())).collect();
    let g = b.build().unwrap();
    let order: Vec<usize> = c.order.iter().map(|&k| hs[k]).collect();
    let mut twist = vec![0; g.num_half_edges()];
    for (k, &h) in hs.iter().enumerate() {
        twist[h] = c.labels[k];
        twist[h + 1] = c.labels[k];
    }
    StructuredGraph::mobius(g, &[order], twist).unwrap()
}

/// Composition computed directly agrees with gluing Möbius corollas and
/// contracting the new edge.
#[test]
fn invass_composition_matches_structured_contraction() {
    for n in 2..=4 {
        for m in 2..=4 {
            let xl: Vec<String> = (0..n).map(|k| format!("x{k}")).collect();
            let yl: Vec<String> = (0..m).map(|k| format!("y{k}")).collect();
            let mut out_labels = vec![String::new(); n + m - 2];
            for i in 0..n {
                for j in 0..m {
                    for k in (0..n).filter(|&k| k != i) {
                        out_labels[left_position(i, k)] = xl[k].clone();
                    }
                    for k in (0..m).filter(|&k| k != j) {
                        out_labels[right_position(n, j, k)] = yl[k].clone();
                    }
                    for x in 0..InvAss.size(n) {
                        for y in 0..InvAss.size(m) {
                            let cx = MobiusCorolla::from_index(n, x);
                            let cy = MobiusCorolla::from_index(m, y);
                            let both = corolla(&xl, &cx).disjoint_union(&corolla(&yl, &cy)).unwrap();
                            let glued = both.glue(&xl[i], &yl[j]).unwrap();
                            let e = glued.graph().internal_edges()[0];
                            let via_graph = glued.contract(e).unwrap().canonical_key();
                            let z = InvAss.compose(n, i, x, m, j, y);
                            let direct = corolla(&out_labels, &MobiusCorolla::from_index(n + m - 2, z));
                            assert_eq!(direct.canonical_key(), via_graph, "n={n} i={i} x={x} m={m} j={j} y={y}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn presets_satisfy_axioms() {
    let r = check_axioms(&Linearized(Ass), 5);
    assert!(r.is_clean(), "{:?}", r.violations);
    assert!(r.checks > 1000);
    let r = check_axioms(&Linearized(InvAss), 4);
    assert!(r.is_clean(), "{:?}", r.violations);
    let r = check_axioms(&Linearized(Comm), 7);
    assert!(r.is_clean(), "{:?}", r.violations);
    let r = check_axioms(&DgComm, 5);
    assert!(r.is_clean(), "{:?}", r.violations);
}

/// Ass with one splice result replaced.
struct Corrupted;

impl SetOperad for Corrupted {
    fn name(&self) -> &str {
        "corrupted"
    }
    fn size(&self, n: usize) -> usize {
        Ass.size(n)
    }
    fn act(&self, n: usize, perm: &[usize], x: usize) -> usize {
        Ass.act(n, perm, x)
    }
    fn describe(&self, n: usize, x: usize) -> String {
        Ass.describe(n, x)
    }
    fn compose(&self, n: usize, i: usize, x: usize, m: usize, j: usize, y: usize) -> usize {
        let z = Ass.compose(n, i, x, m, j, y);
        if (n, i, x, m, j, y) == (3, 2, 0, 3, 0, 1) {
            (z + 1) % Ass.size(4)
        } else {
            z
        }
    }
}

#[test]
fn corrupted_table_is_located() {
    let r = check_axioms(&Linearized(Corrupted), 4);
    assert!(!r.is_clean());
    assert!(r.violations.iter().any(|v| v.location.contains("(0 1 2) _2∘_0 (0 2 1)")), "{:?}", r.violations);
}

#[test]
fn documents_round_trip() {
    let doc = TableOperad::document_of(&Linearized(Comm), 6);
    let loaded = TableOperad::from_doc(&doc, &LoadOptions::default()).unwrap();
    assert_eq!(loaded.to_doc(), doc);
    let text = loaded.to_json();
    assert_eq!(TableOperad::from_json(&text, &LoadOptions::default()).unwrap().to_doc(), doc);

    let ass = Linearized(Ass);
    let doc = TableOperad::document_of(&ass, 5);
    let loaded = TableOperad::from_doc(&doc, &LoadOptions::default()).unwrap();
    for n in 2..=5 {
        for m in 2..=(7 - n) {
            for i in 0..n {
                for j in 0..m {
                    for a in 0..ass.dim(n) {
                        for b in 0..ass.dim(m) {
                            assert_eq!(loaded.compose(n, i, a, m, j, b), ass.compose(n, i, a, m, j, b));
                        }
                    }
                }
            }
        }
    }
    let dg = TableOperad::document_of(&DgComm, 4);
    let loaded = TableOperad::from_doc(&dg, &LoadOptions::default()).unwrap();
    assert_eq!(loaded.differential(3, 2), SparseVec::unit(1));
}

#[test]
fn bad_documents_are_rejected() {
    let mut doc = TableOperad::document_of(&Linearized(Ass), 4);
    // the transposition of legs 0, 1 in arity 3 now fixes one order and kills the other
    doc.action.get_mut("3").unwrap().insert("1 0 2".into(), vec![(0, 0, "1".into())]);
    assert!(matches!(
        TableOperad::from_doc(&doc, &LoadOptions::default()),
        Err(OperadError::AxiomViolation(_))
    ));

    let mut doc = TableOperad::document_of(&Linearized(Comm), 4);
    doc.action.get_mut("4").unwrap().remove("0 2 1 3");
    assert!(matches!(TableOperad::from_doc(&doc, &LoadOptions::default()), Err(OperadError::Schema(_))));

    let mut doc = TableOperad::document_of(&Linearized(Comm), 4);
    doc.compose.remove("3,2,3,0");
    assert!(matches!(TableOperad::from_doc(&doc, &LoadOptions::default()), Err(OperadError::Schema(_))));

    assert!(matches!(TableOperad::from_json("{\"name\": 1}", &LoadOptions::default()), Err(OperadError::Schema(_))));
    let mut doc = TableOperad::document_of(&Linearized(Comm), 3);
    doc.arities.push(1);
    assert!(matches!(
        TableOperad::from_doc(&doc, &LoadOptions::default()),
        Err(OperadError::ArityBelowTwo(1))
    ));
}

#[test]
fn twists_change_action_and_degrees() {
    let doc = TableOperad::document_of(&Linearized(Comm), 5);
    let opts = LoadOptions {
        twist: ComponentTwist { sign: true, shift: 0 },
        leg_shift: 1,
        ..LoadOptions::default()
    };
    let t = TableOperad::from_doc_unchecked(&doc, &opts).unwrap();
    assert_eq!(t.act(3, &[1, 0, 2], 0), SparseVec::term(0, q(-1)));
    assert_eq!(t.act(3, &[1, 2, 0], 0), SparseVec::unit(0));
    assert_eq!(t.degree(5, 0), 3);
    // a constant shift breaks additivity of degrees under composition
    let opts = LoadOptions {
        twist: ComponentTwist { sign: false, shift: 1 },
        ..LoadOptions::default()
    };
    assert!(matches!(TableOperad::from_doc(&doc, &opts), Err(OperadError::AxiomViolation(_))));
}

#[test]
fn evaluation_on_graphs() {
    let theta = crate::graph::tests::theta();
    let comm = Linearized(Comm);
    assert_eq!(evaluate_on_graph(&comm, &theta).unwrap().total(), 1);

    let tadpole = crate::graph::tests::rose(1, &["1"]);
    assert_eq!(evaluate_on_graph(&Linearized(Ass), &tadpole).unwrap().total(), 2);

    let mut b = GraphBuilder::with_vertices(2);
    b.edge(0, 1);
    for (v, l) in [(0, "a"), (0, "b"), (1, "c"), (1, "d")] {
        b.leg(v, l);
    }
    let g = b.build().unwrap();
    let dec = evaluate_on_graph(&Linearized(Ass), &g).unwrap();
    assert_eq!(dec.total(), 4);
    assert_eq!(dec.decode(3), vec![1, 1]);
    assert_eq!(dec.encode(&[1, 0]), 2);

    let doc = TableOperad::document_of(&Linearized(Comm), 3);
    let only3 = TableOperad::from_doc(&doc, &LoadOptions::default()).unwrap();
    let star4 = crate::graph::HalfEdgeGraph::corolla(&["a", "b", "c", "d"]).unwrap();
    assert!(matches!(evaluate_on_graph(&only3, &star4), Err(OperadError::MissingArity { n: 4, .. })));
}
