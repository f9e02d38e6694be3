use serde::{Deserialize, Serialize};

use super::{Structure, StructureError, StructuredGraph};
use crate::graph::End;

/// A boundary word: leg labels with a direction suffix, `"a+"` or `"a-"`.
pub type Word = Vec<String>;

/// Homeomorphism invariant of the thickened surface with its marked
/// boundary intervals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SurfaceInvariant {
    pub orientable: bool,
    pub chi: i64,
    pub boundaries: Vec<Word>,
    pub genus_or_crosscaps: u64,
}

impl SurfaceInvariant {
    pub fn num_boundaries(&self) -> usize {
        self.boundaries.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("invariant serializes")
    }
}

fn reversed_letter(s: &str) -> String {
    let (body, sign) = s.split_at(s.len() - 1);
    format!("{body}{}", if sign == "+" { "-" } else { "+" })
}

/// Least rotation of a cyclic word.
pub fn min_rotation(w: &[String]) -> Word {
    (0..w.len().max(1))
        .map(|k| w[k.min(w.len())..].iter().chain(&w[..k.min(w.len())]).cloned().collect::<Word>())
        .min()
        .unwrap_or_default()
}

/// The word read backwards with every direction toggled.
pub fn reverse_flip(w: &[String]) -> Word {
    w.iter().rev().map(|s| reversed_letter(s)).collect()
}

/// Least representative of a word over rotations and reverse-flips.
pub fn min_unoriented(w: &[String]) -> Word {
    min_rotation(w).min(min_rotation(&reverse_flip(w)))
}

/// Canonical boundary multiset for an oriented surface whose orientation may
/// be reversed: the smaller of the sorted words and the sorted reverse-flips.
pub fn canonical_oriented(words: &[Word], reversible: bool) -> Vec<Word> {
    let mut a: Vec<Word> = words.iter().map(|w| min_rotation(w)).collect();
    a.sort();
    if !reversible {
        return a;
    }
    let mut b: Vec<Word> = words.iter().map(|w| min_rotation(&reverse_flip(w))).collect();
    b.sort();
    a.min(b)
}

impl StructuredGraph {
    /// Orbits of the boundary-tracing map on the orientation double cover.
    ///
    /// A dart is a half-edge with a side bit. Crossing an edge multiplies the
    /// side by the edge's sign, and the walk continues to the cyclic successor
    /// (or predecessor, on the negative side) at the far end. Each boundary
    /// circle of the thickening is traced twice, once from each side.
    pub fn boundary_darts(&self) -> Vec<Vec<(usize, bool)>> {
        let n = self.next.len();
        let mut prev = vec![0; n];
        for h in 0..n {
            prev[self.next[h]] = h;
        }
        let mut seen = vec![false; 2 * n];
        let mut orbits = Vec::new();
        for start in 0..2 * n {
            if seen[start] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut d = start;
            while !seen[d] {
                seen[d] = true;
                let (h, pos) = (d / 2, d % 2 == 0);
                orbit.push((h, pos));
                let hp = self.graph.pair(h);
                let pos2 = pos ^ (self.twist[h] == 1);
                let h2 = if pos2 { self.next[hp] } else { prev[hp] };
                d = 2 * h2 + usize::from(!pos2);
            }
            orbits.push(orbit);
        }
        orbits
    }

    fn orbit_word(&self, orbit: &[(usize, bool)]) -> Word {
        orbit
            .iter()
            .filter_map(|&(h, pos)| match self.graph.end(h) {
                End::Leg(l) => Some(format!("{}{}", self.graph.label(l), if pos { '+' } else { '-' })),
                End::Vertex(_) => None,
            })
            .collect()
    }
}

pub(super) fn thicken(s: &StructuredGraph) -> Result<SurfaceInvariant, StructureError> {
    let g = s.graph();
    if !g.is_connected() || g.num_vertices() == 0 {
        return Err(StructureError::Disconnected);
    }
    let chi = (g.num_vertices() + g.num_legs()) as i64 - g.num_edges() as i64;
    let oriented = match s.kind() {
        Structure::Ribbon => Some(s.clone()),
        Structure::Mobius => s.untwisted(),
    };
    let (orientable, boundaries) = match oriented {
        Some(t) => {
            // keep the side on which the untwisted internal edges are
            // traversed positively
            let words: Vec<Word> = t
                .boundary_darts()
                .into_iter()
                .filter(|o| {
                    o.iter()
                        .find(|(h, _)| matches!(g.end(*h), End::Vertex(_)))
                        .map_or(false, |d| d.1)
                })
                .map(|o| t.orbit_word(&o))
                .collect();
            (true, canonical_oriented(&words, s.kind() == Structure::Mobius))
        }
        None => {
            let mut words: Vec<Word> = s
                .boundary_darts()
                .iter()
                .map(|o| min_unoriented(&s.orbit_word(o)))
                .collect();
            words.sort();
            debug_assert!(words.chunks(2).all(|p| p.len() == 2 && p[0] == p[1]));
            (false, words.into_iter().step_by(2).collect())
        }
    };
    let b = boundaries.len() as i64;
    let gc = if orientable { (2 - b - chi) / 2 } else { 2 - b - chi };
    debug_assert!(gc >= 0 && (orientable || gc >= 1));
    Ok(SurfaceInvariant {
        orientable,
        chi,
        boundaries,
        genus_or_crosscaps: gc as u64,
    })
}
