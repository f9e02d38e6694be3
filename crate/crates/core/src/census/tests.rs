use super::*;

fn labels(n: usize) -> Vec<String> {
    default_labels(n)
}

fn fact(n: usize) -> u128 {
    (1..=n as u128).product()
}

#[test]
fn small_census_examples() {
    assert_eq!(enumerate_reduced(Kind::Plain, 0, &labels(3)).unwrap().len(), 1);
    assert_eq!(enumerate_reduced(Kind::Ribbon, 1, &labels(1)).unwrap().len(), 1);
    let m = enumerate_reduced(Kind::Mobius, 1, &labels(1)).unwrap();
    assert_eq!(m.len(), 2);
    let invariants: BTreeSet<bool> = m
        .classes
        .iter()
        .map(|c| c.structure.as_ref().unwrap().is_orientable())
        .collect();
    assert_eq!(invariants.len(), 2, "annulus and Möbius band classes");
    for (g, n) in [(1, 0), (0, 0), (0, 1)] {
        for kind in [Kind::Plain, Kind::Ribbon, Kind::Mobius] {
            assert!(matches!(
                enumerate_reduced(kind, g, &labels(n)),
                Err(CensusError::ExcludedCase { .. })
            ));
        }
    }
    let star2 = enumerate_reduced(Kind::Plain, 0, &labels(2)).unwrap();
    assert_eq!(star2.len(), 1);
    assert_eq!(star2.classes[0].graph.num_vertices(), 1);
    assert_eq!(enumerate_reduced(Kind::Mobius, 0, &labels(2)).unwrap().len(), 2);
}

#[test]
fn plain_counts_of_small_cases() {
    // rank 1 with one leg: the tadpole only; rank 2 without legs: theta,
    // dumbbell and the two-petal rose
    assert_eq!(enumerate_reduced(Kind::Plain, 1, &labels(1)).unwrap().len(), 1);
    assert_eq!(enumerate_reduced(Kind::Plain, 2, &labels(0)).unwrap().len(), 3);
    // trees with four legs: the 4-corolla and three binary trees
    assert_eq!(enumerate_reduced(Kind::Plain, 0, &labels(4)).unwrap().len(), 4);
}

#[test]
fn classes_are_sorted_and_distinct() {
    for kind in [Kind::Plain, Kind::Ribbon, Kind::Mobius] {
        let c = enumerate_reduced(kind, 1, &labels(2)).unwrap();
        assert!(c.classes.windows(2).all(|w| w[0].key < w[1].key));
        for cl in &c.classes {
            assert!(cl.graph.is_reduced() && cl.graph.is_connected());
            assert_eq!(cl.graph.rank(), 1);
        }
    }
}

/// Vertex-labelled reduced connected multigraphs counted directly, compared
/// against the orbit-stabilizer sum over classes.
#[test]
fn plain_orbit_counting() {
    for g in 0..=2usize {
        for n in 0..=3usize {
            if is_excluded(g, n) || (g, n) == (0, 2) {
                continue;
            }
            let census = enumerate_bounded(Kind::Plain, g, &labels(n), Bounds::edges(4)).unwrap();
            for v in 1..=(2 * g + n - 2) {
                let e = g + v - 1;
                if e > 4 {
                    continue;
                }
                let expected: u128 = census
                    .classes
                    .iter()
                    .filter(|c| c.graph.num_vertices() == v)
                    .map(|c| fact(v) / c.graph.canonize().vertex_automorphisms().len() as u128)
                    .sum();
                assert_eq!(raw_labelled_count(v, e, n), expected, "g={g} n={n} v={v}");
            }
        }
    }
}

fn raw_labelled_count(v: usize, e: usize, n: usize) -> u128 {
    let pairs: Vec<(usize, usize)> = (0..v).flat_map(|u| (u..v).map(move |w| (u, w))).collect();
    let mut count = 0u128;
    // multisets of e vertex pairs
    fn multisets(k: usize, from: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            out.push(cur.clone());
            return;
        }
        for i in from..len {
            cur.push(i);
            multisets(k - 1, i, len, cur, out);
            cur.pop();
        }
    }
    let mut sets = Vec::new();
    multisets(e, 0, pairs.len(), &mut vec![], &mut sets);
    for s in sets {
        let mut deg = vec![0usize; v];
        let mut uf = crate::graph::UnionFind::new(v);
        for &i in &s {
            let (a, b) = pairs[i];
            deg[a] += 1;
            deg[b] += 1;
            uf.union(a, b);
        }
        if !(1..v).all(|x| uf.find(x) == uf.find(0)) {
            continue;
        }
        // leg maps: v^n functions
        for code in 0..v.pow(n as u32) {
            let mut d = deg.clone();
            let mut c = code;
            for _ in 0..n {
                d[c % v] += 1;
                c /= v;
            }
            if d.iter().all(|&x| x >= 3) {
                count += 1;
            }
        }
    }
    count
}

#[test]
fn structured_orbit_counting() {
    for g in 0..=2usize {
        for n in 0..=3usize {
            if is_excluded(g, n) {
                continue;
            }
            let b = Bounds::edges(4);
            let plain = enumerate_bounded(Kind::Plain, g, &labels(n), b).unwrap();
            let ribbon = enumerate_bounded(Kind::Ribbon, g, &labels(n), b).unwrap();
            let mobius = enumerate_bounded(Kind::Mobius, g, &labels(n), b).unwrap();
            let aut_of = |gr: &HalfEdgeGraph| gr.canonize().automorphism_count();
            let mut raw_r = 0u128;
            let mut raw_m = 0u128;
            for c in &plain.classes {
                let orders: u128 = (0..c.graph.num_vertices()).map(|v| fact(c.graph.valence(v) - 1)).product();
                raw_r += orders;
                raw_m += orders << c.graph.num_edges();
            }
            let sum_r: u128 = ribbon
                .classes
                .iter()
                .map(|c| aut_of(&c.graph) / c.automorphism_count)
                .sum();
            let sum_m: u128 = mobius
                .classes
                .iter()
                .map(|c| (aut_of(&c.graph) << c.graph.num_vertices()) / c.automorphism_count)
                .sum();
            assert_eq!(sum_r, raw_r, "ribbon g={g} n={n}");
            assert_eq!(sum_m, raw_m, "mobius g={g} n={n}");
        }
    }
}

#[test]
fn generating_sets_generate() {
    let c = enumerate_reduced(Kind::Plain, 2, &labels(0)).unwrap();
    for cl in &c.classes {
        let all = cl.graph.automorphisms();
        let gens = generating_set(&all);
        assert!(gens.len() <= all.len());
        // closure of the generators has the full order
        let mut group: BTreeSet<Vec<usize>> = BTreeSet::from([(0..cl.graph.num_half_edges()).collect()]);
        loop {
            let before = group.len();
            let cur: Vec<_> = group.iter().cloned().collect();
            for a in &cur {
                for s in &gens {
                    group.insert((0..a.len()).map(|h| s[a[h]]).collect());
                }
            }
            if group.len() == before {
                break;
            }
        }
        assert_eq!(group.len() as u128, cl.automorphism_count);
    }
}

#[test]
fn cache_round_trip_and_self_heal() {
    let dir = tempfile::tempdir().unwrap();
    let cache = CensusCache::new(dir.path());
    let ls = labels(2);
    let (a, o1) = cache.load_or_compute(Kind::Ribbon, 1, &ls, Bounds::none()).unwrap();
    assert_eq!(o1, CacheOutcome::Computed);
    let path = cache.path_for(Kind::Ribbon, 1, &ls, Bounds::none());
    assert!(path.ends_with("ribbon-g1-n2.json"));
    let (b, o2) = cache.load_or_compute(Kind::Ribbon, 1, &ls, Bounds::none()).unwrap();
    assert_eq!(o2, CacheOutcome::Loaded);
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(a.to_json(), enumerate_reduced(Kind::Ribbon, 1, &ls).unwrap().to_json());

    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&path, text.replacen("\"automorphisms\": ", "\"automorphisms\": 1", 1)).unwrap();
    assert!(matches!(cache.load(&path), Err(CensusError::CacheCorrupt { .. })));
    let (c, o3) = cache.load_or_compute(Kind::Ribbon, 1, &ls, Bounds::none()).unwrap();
    assert!(matches!(o3, CacheOutcome::Healed(_)));
    assert_eq!(c.to_json(), a.to_json());
    assert_eq!(cache.load(&path).unwrap().to_json(), a.to_json());

    let other = CensusCache::file_name(Kind::Plain, 1, &["a".into(), "b".into()], Bounds::none());
    assert!(other.starts_with("plain-g1-n2-") && other != "plain-g1-n2.json");
}
