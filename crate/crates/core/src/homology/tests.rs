use std::collections::BTreeMap;

use num_traits::Zero;
use proptest::prelude::*;

use super::*;
use crate::census::default_labels;
use crate::graph::tests::{rose, theta};
use crate::graph::GraphBuilder;
use crate::linalg::{q, Q};
use crate::operad::tests::DgComm;
use crate::operad::{Ass, Comm, InvAss, Linearized};

fn complex<O: LinearOperad>(op: &O, g: usize, n: usize, route: Route) -> GraphChainComplex {
    let census = enumerate_reduced(Kind::Plain, g, &default_labels(n)).unwrap();
    build_complex(op, &census, route).unwrap()
}

fn perm_sign(p: &[usize]) -> i64 {
    let mut s = 1;
    for a in 0..p.len() {
        for b in a + 1..p.len() {
            if p[a] > p[b] {
                s = -s;
            }
        }
    }
    s
}

/// For a connected graph, `det(k^E) ⊗ det(H_1)` is isomorphic to
/// `det(C_1) ⊗ det(C_0)^{-1}` with `C_1` spanned by oriented edges, so an
/// automorphism acts by the sign of its vertex permutation times `-1` per
/// reversed edge.
fn simplicial_sign(g: &HalfEdgeGraph, phi: &[usize]) -> i64 {
    let mut s = 1;
    for e in g.internal_edges() {
        if phi[e] > phi[g.pair(e)] {
            s = -s;
        }
    }
    let vperm: Vec<usize> = (0..g.num_vertices()).map(|v| g.vertex_of(phi[g.star(v)[0]]).unwrap()).collect();
    s * perm_sign(&vperm)
}

#[test]
fn loop_swap_reverses_orientation() {
    let g = rose(1, &["1"]);
    let o = OrientationData::new(&g);
    let auts = g.automorphisms();
    assert_eq!(auts.len(), 2);
    assert_eq!(automorphism_sign(&g, &o, &auts[0]), 1);
    assert_eq!(automorphism_sign(&g, &o, &auts[1]), -1);
}

#[test]
fn theta_signs_match_simplicial_oracle() {
    let g = theta();
    let o = OrientationData::new(&g);
    assert_eq!(o.cycle_rank(), 2);
    let auts = g.automorphisms();
    assert_eq!(auts.len(), 12);
    let mut seen = BTreeMap::new();
    for phi in &auts {
        let s = automorphism_sign(&g, &o, phi);
        assert_eq!(s, simplicial_sign(&g, phi), "{phi:?}");
        *seen.entry(s).or_insert(0) += 1;
    }
    // every symmetry of the theta graph preserves its orientation
    assert_eq!(seen.get(&1), Some(&12));
}

#[test]
fn census_automorphism_signs_match_simplicial_oracle() {
    for (g, n) in [(1, 1), (1, 2), (2, 0), (2, 1), (1, 3)] {
        let census = enumerate_reduced(Kind::Plain, g, &default_labels(n)).unwrap();
        for class in &census.classes {
            let o = OrientationData::new(&class.graph);
            for phi in class.graph.automorphisms() {
                assert_eq!(automorphism_sign(&class.graph, &o, &phi), simplicial_sign(&class.graph, &phi));
            }
        }
    }
}

#[test]
fn determinants() {
    assert_eq!(int_det(&[]), 1);
    assert_eq!(int_det(&[vec![0, 1], vec![1, 0]]), -1);
    assert_eq!(int_det(&[vec![2, 1, 0], vec![1, 2, 1], vec![0, 1, 2]]), 4);
    assert_eq!(int_det(&[vec![1, 2], vec![2, 4]]), 0);
}

#[test]
fn theta_contractions_are_signed_consistently() {
    let g = theta();
    let o = OrientationData::new(&g);
    let signs: Vec<i64> = o.edges.iter().map(|&e| contraction_sign(&g, &o, e).unwrap()).collect();
    assert!(signs.iter().all(|s| s.abs() == 1));
    // both halves of an edge name the same contraction
    for &e in &o.edges {
        assert_eq!(contraction_sign(&g, &o, e).unwrap(), contraction_sign(&g, &o, g.pair(e)).unwrap());
    }
}

#[test]
fn comm_on_tadpole_is_zero() {
    let c = complex(&Linearized(Comm), 1, 1, Route::Auto);
    assert!(c.dims().is_empty());
    assert!(c.homology_ranks().is_empty());
    assert_eq!(c.euler_characteristic(), 0);
}

#[test]
fn ass_on_tadpole_is_a_line() {
    for route in [Route::Auto, Route::Projector] {
        let c = complex(&Linearized(Ass), 1, 1, route);
        assert_eq!(c.dims(), BTreeMap::from([(0, 1)]));
        assert_eq!(c.homology_ranks(), BTreeMap::from([(0, 1)]));
        assert_eq!(c.euler_characteristic(), 1);
        let s = c.summary();
        assert_eq!((s.g, s.n, s.operad.as_str()), (1, 1, "ass"));
    }
}

#[test]
fn differential_squares_to_zero() {
    for (g, n) in [(0, 3), (0, 4), (1, 1), (1, 2), (2, 0), (0, 5), (1, 3), (2, 1)] {
        for c in [
            complex(&Linearized(Comm), g, n, Route::Auto),
            complex(&Linearized(Ass), g, n, Route::Auto),
            complex(&Linearized(InvAss), g, n, Route::Auto),
            complex(&DgComm, g, n, Route::Auto),
        ] {
            assert!(c.d_squared_failures().is_empty(), "{} ({g},{n})", c.operad);
        }
    }
}

/// Hides the set operad behind a linear one, forcing the vector code paths.
struct Opaque<O>(O);

impl<O: LinearOperad> LinearOperad for Opaque<O> {
    fn name(&self) -> &str {
        self.0.name()
    }
    fn admits(&self, n: usize) -> bool {
        self.0.admits(n)
    }
    fn dim(&self, n: usize) -> usize {
        self.0.dim(n)
    }
    fn degree(&self, n: usize, b: usize) -> i64 {
        self.0.degree(n, b)
    }
    fn act(&self, n: usize, perm: &[usize], b: usize) -> SparseVec {
        self.0.act(n, perm, b)
    }
    fn compose(&self, n: usize, i: usize, a: usize, m: usize, j: usize, b: usize) -> SparseVec {
        self.0.compose(n, i, a, m, j, b)
    }
    fn differential(&self, n: usize, b: usize) -> SparseVec {
        self.0.differential(n, b)
    }
}

#[test]
fn index_path_matches_vector_path() {
    for (g, n) in [(0, 4), (1, 2), (2, 0), (1, 3)] {
        let census = enumerate_reduced(Kind::Plain, g, &default_labels(n)).unwrap();
        let fast = build_complex(&Linearized(InvAss), &census, Route::Auto).unwrap();
        let slow = build_complex(&Opaque(Linearized(InvAss)), &census, Route::Auto).unwrap();
        assert_eq!(fast.basis, slow.basis);
        assert_eq!(fast.differentials, slow.differentials, "({g},{n})");
    }
}

#[test]
fn streaming_check_agrees_with_matrices() {
    for (g, n) in [(0, 4), (1, 2), (2, 1)] {
        let census = enumerate_reduced(Kind::Plain, g, &default_labels(n)).unwrap();
        for op in [&Linearized(Ass) as &dyn LinearOperad, &Linearized(InvAss), &DgComm, &Opaque(Linearized(Comm))] {
            let c = build_complex(op, &census, Route::Auto).unwrap();
            let r = check_d_squared(op, &census, Route::Auto).unwrap();
            assert!(r.holds());
            assert_eq!(r.failing_degrees, c.d_squared_failures());
            let dims: BTreeMap<i64, usize> = r.dims.into_iter().filter(|(_, n)| *n > 0).collect();
            assert_eq!(dims, c.dims());
        }
    }
}

#[test]
fn routes_agree() {
    for (g, n) in [(0, 4), (1, 2), (2, 0), (1, 3)] {
        for (a, b) in [
            (complex(&Linearized(Ass), g, n, Route::Auto), complex(&Linearized(Ass), g, n, Route::Projector)),
            (complex(&Linearized(Comm), g, n, Route::Auto), complex(&Linearized(Comm), g, n, Route::Projector)),
            (complex(&DgComm, g, n, Route::Auto), complex(&DgComm, g, n, Route::Projector)),
        ] {
            assert_eq!(a.dims(), b.dims(), "{} ({g},{n})", a.operad);
            assert_eq!(a.homology_ranks(), b.homology_ranks(), "{} ({g},{n})", a.operad);
            assert!(b.d_squared_failures().is_empty());
        }
    }
}

#[test]
fn differential_descends_to_coinvariants() {
    for (g, n) in [(0, 4), (1, 2), (2, 0), (1, 3)] {
        let census = enumerate_reduced(Kind::Plain, g, &default_labels(n)).unwrap();
        assert!(verify_projectors(&Linearized(Ass), &census).unwrap().is_empty());
        assert!(verify_projectors(&Linearized(InvAss), &census).unwrap().is_empty());
        assert!(verify_projectors(&DgComm, &census).unwrap().is_empty());
    }
}

#[test]
fn dgcomm_has_nonzero_internal_differential() {
    let c = complex(&DgComm, 0, 3, Route::Auto);
    // corolla decorated by 1, x, y, xy with d y = x, shifted down by one
    assert_eq!(c.dims(), BTreeMap::from([(-1, 2), (0, 2)]));
    assert_eq!(c.homology_ranks(), BTreeMap::from([(-1, 1), (0, 1)]));
}

#[test]
fn ribbon_census_is_rejected() {
    let census = enumerate_reduced(Kind::Ribbon, 1, &default_labels(1)).unwrap();
    assert!(matches!(build_complex(&Linearized(Ass), &census, Route::Auto), Err(HomologyError::WrongKind(_))));
}

#[test]
fn missing_arity_is_reported() {
    struct OnlyThree;
    impl LinearOperad for OnlyThree {
        fn name(&self) -> &str {
            "only3"
        }
        fn admits(&self, n: usize) -> bool {
            n == 3
        }
        fn dim(&self, n: usize) -> usize {
            usize::from(n == 3)
        }
        fn degree(&self, _: usize, _: usize) -> i64 {
            0
        }
        fn act(&self, _: usize, _: &[usize], b: usize) -> SparseVec {
            SparseVec::unit(b)
        }
        fn compose(&self, _: usize, _: usize, _: usize, _: usize, _: usize, _: usize) -> SparseVec {
            SparseVec::new()
        }
        fn differential(&self, _: usize, _: usize) -> SparseVec {
            SparseVec::new()
        }
    }
    let census = enumerate_reduced(Kind::Plain, 0, &default_labels(4)).unwrap();
    assert!(matches!(
        build_complex(&OnlyThree, &census, Route::Auto),
        Err(HomologyError::Operad(OperadError::MissingArity { .. }))
    ));
}

#[test]
fn matrices_are_dumped() {
    let dir = tempfile::tempdir().unwrap();
    let c = complex(&Linearized(Ass), 0, 4, Route::Auto);
    let files = c.dump_matrices(dir.path()).unwrap();
    assert_eq!(files.len(), c.differentials.len());
    let text = std::fs::read_to_string(&files[0]).unwrap();
    assert!(text.starts_with("# "));
}

#[test]
fn contraction_sign_of_two_vertex_edge() {
    let mut b = GraphBuilder::with_vertices(2);
    let e = b.edge(0, 1);
    b.leg(0, "1");
    b.leg(0, "2");
    b.leg(1, "3");
    b.leg(1, "4");
    let g = b.build().unwrap();
    let o = OrientationData::new(&g);
    assert_eq!(contraction_sign(&g, &o, e).unwrap(), 1);
}

/// Dense elimination over the rationals, independent of the sparse code.
fn dense_rank(mut m: Vec<Vec<Q>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                for j in 0..cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

fn matrix(rows: usize, cols: usize, entries: &[i64]) -> SparseMatrix {
    let columns = (0..cols)
        .map(|c| SparseVec::from_entries((0..rows).map(|r| (r, q(entries[r * cols + c]))).filter(|(_, x)| !x.is_zero())))
        .collect();
    SparseMatrix::from_columns(rows, columns)
}

fn toy(dims: [usize; 3], d1: SparseMatrix, d2: SparseMatrix) -> GraphChainComplex {
    let basis = (0..3)
        .map(|k| {
            let elems = (0..dims[k]).map(|i| BasisElement { class: 0, pivot: i }).collect();
            (k as i64, elems)
        })
        .collect();
    GraphChainComplex {
        operad: "toy".into(),
        rank: 0,
        labels: vec![],
        basis,
        differentials: BTreeMap::from([(1, d1), (2, d2)]),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn planted_exact_pair_drops_rank(
        a in proptest::collection::vec(-3i64..=3, 9),
    ) {
        // C_2 = k, C_1 = k^3 ⊕ k, C_0 = k^3; d_2 is an isomorphism onto the
        // planted summand, d_1 is `a` on the first three coordinates.
        let mut d1 = Vec::new();
        for r in 0..3 {
            d1.extend_from_slice(&a[r * 3..r * 3 + 3]);
            d1.push(0);
        }
        let d2 = [0, 0, 0, 1];
        let base = toy([3, 3, 0], matrix(3, 3, &a), SparseMatrix::zero(3, 0));
        let planted = toy([3, 4, 1], matrix(3, 4, &d1), matrix(4, 1, &d2));
        prop_assert!(planted.d_squared_failures().is_empty());
        let dense = dense_rank((0..3).map(|r| a[r * 3..r * 3 + 3].iter().map(|&x| q(x)).collect()).collect());
        prop_assert_eq!(base.differential_ranks()[&1], dense);
        let nonzero = |c: &GraphChainComplex| -> BTreeMap<i64, usize> {
            c.homology_ranks().into_iter().filter(|(_, r)| *r > 0).collect()
        };
        prop_assert_eq!(planted.differential_ranks()[&2], 1);
        prop_assert_eq!(nonzero(&base), nonzero(&planted));
        prop_assert_eq!(base.euler_characteristic(), planted.euler_characteristic());
    }
}
