use super::*;
use crate::census::default_labels;
use crate::graph::tests::rose;
use crate::operad::{Ass, Comm, InvAss};

fn labels(n: usize) -> Vec<String> {
    default_labels(n)
}

#[test]
fn small_component_counts() {
    assert_eq!(pi0_colimit(&Ass, 1, &labels(1)).unwrap().len(), 1);
    assert_eq!(pi0_colimit(&Ass, 0, &labels(3)).unwrap().len(), 2);
    assert_eq!(pi0_colimit(&Comm, 0, &labels(4)).unwrap().len(), 1);
    let inv = pi0_colimit(&InvAss, 1, &labels(1)).unwrap();
    let thick = thickening_invariants(&InvAss, 1, &labels(1)).unwrap();
    assert_eq!(inv.len(), thick.len());
    assert!(thick.iter().any(|s| !s.orientable));
}

#[test]
fn tadpole_thickens_to_annulus() {
    let d = DecoratedGraph {
        graph: rose(1, &["1"]),
        decorations: vec![0],
    };
    let s = component_invariant(&Ass, &d).unwrap();
    assert!(s.orientable);
    assert_eq!((s.chi, s.num_boundaries(), s.genus_or_crosscaps), (0, 2, 0));
    assert!(component_invariant(&Comm, &d).is_err());
}

#[test]
fn twisted_loop_thickens_to_mobius_band() {
    // labels (0, 1, 0) on (loop end, loop end, leg): the loop is twisted
    let g = rose(1, &["1"]);
    let star = g.star(0).to_vec();
    let leg_pos = star.iter().position(|&h| g.vertex_of(g.pair(h)).is_none()).unwrap();
    let loop_pos: Vec<usize> = (0..3).filter(|&k| k != leg_pos).collect();
    let mut labels_at = vec![0u8; 3];
    labels_at[loop_pos[1]] = 1;
    let x = MobiusCorolla {
        order: vec![0, 1, 2],
        labels: labels_at,
    }
    .index();
    let d = DecoratedGraph {
        graph: g,
        decorations: vec![x],
    };
    let s = component_invariant(&InvAss, &d).unwrap();
    assert!(!s.orientable);
    assert_eq!((s.chi, s.num_boundaries(), s.genus_or_crosscaps), (0, 1, 1));
}

#[test]
fn bijection_at_desk_scale() {
    for (g, n) in [(0, 3), (0, 4), (1, 1), (1, 2), (2, 0), (2, 1)] {
        for report in [check_bijection(&Ass, g, &labels(n)).unwrap(), check_bijection(&InvAss, g, &labels(n)).unwrap()] {
            assert!(report.holds(), "({g},{n}) {report:?}");
        }
    }
}

#[test]
fn every_node_is_found_again() {
    let set = pi0_colimit(&InvAss, 1, &labels(2)).unwrap();
    for x in 0..set.node_count() {
        let d = set.node(x);
        assert_eq!(set.node_of(&InvAss, &d), Some(x));
        // any relabeling of the vertices lands on the same node
        let n = d.graph.num_vertices();
        let perm: Vec<usize> = (0..n).rev().collect();
        let moved = d.graph.relabel_vertices(&perm);
        let mut decorations = vec![0; n];
        for v in 0..n {
            decorations[perm[v]] = d.decorations[v];
        }
        let e = DecoratedGraph {
            graph: moved,
            decorations,
        };
        assert_eq!(set.class_of(&InvAss, &e), Some(set.component_of_node(x)));
    }
}

#[test]
fn excluded_cases_are_errors() {
    assert!(matches!(pi0_colimit(&Ass, 1, &[]), Err(EnvelopeError::Census(CensusError::ExcludedCase { .. }))));
    assert!(check_bijection(&Ass, 0, &labels(1)).is_err());
}

#[test]
fn json_lists_components() {
    let set = pi0_colimit(&Ass, 0, &labels(3)).unwrap();
    let v: serde_json::Value = serde_json::from_str(&set.to_json(&Ass)).unwrap();
    let list = v.as_array().unwrap();
    assert_eq!(list.len(), 2);
    for c in list {
        assert_eq!(c["class_size"], 1);
        assert!(c["surface"]["orientable"].as_bool().unwrap());
    }
}
