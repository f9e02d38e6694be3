//! Operads stored as explicit tables, with a JSON document form.
//!
//! The symmetric action is stored through the adjacent transpositions
//! `s_k = (k k+1)` of each arity; other permutations act through a reduced
//! word. Compositions are stored at the standard slot `_{n-1}∘_0`; any other
//! slot is obtained by first moving the glued legs there with order-preserving
//! cycles, so the stored table determines every `_i∘_j`. An explicit table for
//! another slot overrides the derived one.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{act_vec, left_position, check_axioms_sampled, LinearOperad, OperadError};
use crate::linalg::{format_q, parse_q, Accumulator, SparseVec, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisEntry {
    pub name: String,
    pub degree: i64,
}

/// `(row, col, value)`; columns are input basis elements.
pub type Triplet = (usize, usize, String);

/// `(a, b, out, value)`.
pub type TensorEntry = (usize, usize, usize, String);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperadDoc {
    pub name: String,
    pub arities: Vec<usize>,
    pub basis: BTreeMap<String, Vec<BasisEntry>>,
    /// Arity, then a permutation in one-line notation such as `"1 0 2"`.
    pub action: BTreeMap<String, BTreeMap<String, Vec<Triplet>>>,
    /// Keys `"n,i,m,j"`.
    pub compose: BTreeMap<String, Vec<TensorEntry>>,
    #[serde(default)]
    pub differential: BTreeMap<String, Vec<Triplet>>,
}

/// Twist applied to one component at load time.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentTwist {
    /// Multiply the action by the sign of the permutation.
    #[serde(default)]
    pub sign: bool,
    /// Added to every degree of the component.
    #[serde(default)]
    pub shift: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoadOptions {
    /// Applies to arities without an entry in `per_arity`.
    #[serde(default)]
    pub twist: ComponentTwist,
    #[serde(default)]
    pub per_arity: BTreeMap<usize, ComponentTwist>,
    /// Adds `leg_shift * (n - 2)` to the degrees of arity `n`; unlike a
    /// constant shift this keeps compositions degree-preserving.
    #[serde(default)]
    pub leg_shift: i64,
    /// Cap on sampled elements per axiom case during load verification;
    /// `None` checks exhaustively.
    #[serde(default)]
    pub check_samples: Option<usize>,
}

impl LoadOptions {
    fn twist_for(&self, n: usize) -> ComponentTwist {
        self.per_arity.get(&n).copied().unwrap_or(self.twist)
    }
}

type Matrix = Vec<SparseVec>;

#[derive(Clone, Debug)]
pub struct TableOperad {
    name: String,
    arities: BTreeSet<usize>,
    basis: BTreeMap<usize, Vec<BasisEntry>>,
    transpositions: BTreeMap<usize, Vec<Matrix>>,
    explicit_actions: BTreeMap<usize, BTreeMap<Vec<usize>, Matrix>>,
    compose: BTreeMap<(usize, usize, usize, usize), Vec<Vec<SparseVec>>>,
    differential: BTreeMap<usize, Matrix>,
}

fn schema(msg: impl Into<String>) -> OperadError {
    OperadError::Schema(msg.into())
}

fn parse_perm(s: &str, n: usize) -> Result<Vec<usize>, OperadError> {
    let p: Vec<usize> = s
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| schema(format!("bad permutation {s:?}"))))
        .collect::<Result<_, _>>()?;
    let mut seen = vec![false; n];
    if p.len() != n || !p.iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true)) {
        return Err(schema(format!("{s:?} is not a permutation of {n} legs")));
    }
    Ok(p)
}

fn perm_key(p: &[usize]) -> String {
    p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn parse_value(s: &str) -> Result<Q, OperadError> {
    parse_q(s).ok_or_else(|| schema(format!("bad rational {s:?}")))
}

fn matrix_from(triplets: &[Triplet], rows: usize, cols: usize, what: &str) -> Result<Matrix, OperadError> {
    let mut acc: Vec<Accumulator> = (0..cols).map(|_| Accumulator::default()).collect();
    for (r, c, v) in triplets {
        if *r >= rows || *c >= cols {
            return Err(schema(format!("{what}: entry ({r}, {c}) out of range")));
        }
        acc[*c].add(*r, parse_value(v)?);
    }
    Ok(acc.into_iter().map(Accumulator::finish).collect())
}

fn triplets_of(m: &[SparseVec]) -> Vec<Triplet> {
    let mut out: Vec<Triplet> = Vec::new();
    for (c, col) in m.iter().enumerate() {
        for (r, v) in col.entries() {
            out.push((*r, c, format_q(v)));
        }
    }
    out.sort();
    out
}

fn adjacent(n: usize, k: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.swap(k, k + 1);
    p
}

/// Adjacent transpositions `k_1, ..., k_r` with `perm = s_{k_1} ∘ ... ∘ s_{k_r}`.
fn reduced_word(perm: &[usize]) -> Vec<usize> {
    let mut p = perm.to_vec();
    let mut word = Vec::new();
    loop {
        let inv = super::invert_perm(&p);
        let Some(k) = (0..p.len().saturating_sub(1)).find(|&k| inv[k] > inv[k + 1]) else {
            return word;
        };
        word.push(k);
        // p ← s_k ∘ p
        for x in p.iter_mut() {
            if *x == k {
                *x = k + 1;
            } else if *x == k + 1 {
                *x = k;
            }
        }
    }
}

impl TableOperad {
    pub fn from_json(text: &str, options: &LoadOptions) -> Result<Self, OperadError> {
        let doc: OperadDoc = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
        Self::from_doc(&doc, options)
    }

    /// Validates a document, applies twists and verifies the axioms.
    pub fn from_doc(doc: &OperadDoc, options: &LoadOptions) -> Result<Self, OperadError> {
        let op = Self::from_doc_unchecked(doc, options)?;
        let max = op.arities.iter().copied().max().unwrap_or(0);
        let report = check_axioms_sampled(&op, max, options.check_samples, 0);
        if let Some(v) = report.violations.first() {
            return Err(OperadError::AxiomViolation(format!(
                "{} ({} violations in total)",
                v,
                report.violation_count
            )));
        }
        if let Some(m) = explicit_action_mismatches(&op).into_iter().next() {
            return Err(OperadError::AxiomViolation(m));
        }
        Ok(op)
    }

    /// Validates the shape of a document without checking axioms.
    pub fn from_doc_unchecked(doc: &OperadDoc, options: &LoadOptions) -> Result<Self, OperadError> {
        let arities: BTreeSet<usize> = doc.arities.iter().copied().collect();
        if let Some(&n) = arities.iter().find(|&&n| n < 2) {
            return Err(OperadError::ArityBelowTwo(n));
        }
        let mut basis = BTreeMap::new();
        for (k, entries) in &doc.basis {
            let n: usize = k.parse().map_err(|_| schema(format!("bad arity key {k:?}")))?;
            if !arities.contains(&n) {
                return Err(schema(format!("basis given for unlisted arity {n}")));
            }
            let t = options.twist_for(n);
            let shifted = entries
                .iter()
                .map(|e| BasisEntry {
                    name: e.name.clone(),
                    degree: e.degree + t.shift + options.leg_shift * (n as i64 - 2),
                })
                .collect();
            basis.insert(n, shifted);
        }
        if let Some(n) = arities.iter().find(|n| !basis.contains_key(n)) {
            return Err(schema(format!("no basis for arity {n}")));
        }
        let dim = |n: usize| basis.get(&n).map_or(0, |b: &Vec<BasisEntry>| b.len());

        let mut transpositions = BTreeMap::new();
        let mut explicit_actions = BTreeMap::new();
        for &n in &arities {
            let given = doc.action.get(&n.to_string());
            let sign_twist = options.twist_for(n).sign;
            let mut explicit = BTreeMap::new();
            if let Some(given) = given {
                for (k, trip) in given {
                    let p = parse_perm(k, n)?;
                    let mut m = matrix_from(trip, dim(n), dim(n), &format!("action {n} [{k}]"))?;
                    if sign_twist && super::perm_sign(&p) < 0 {
                        m = m.iter().map(|c| c.scale(&-Q::one())).collect();
                    }
                    explicit.insert(p, m);
                }
            }
            let mut ts = Vec::new();
            for k in 0..n - 1 {
                let p = adjacent(n, k);
                let m = explicit
                    .remove(&p)
                    .ok_or_else(|| schema(format!("arity {n}: missing action of [{}]", perm_key(&p))))?;
                ts.push(m);
            }
            transpositions.insert(n, ts);
            explicit_actions.insert(n, explicit);
        }

        let mut compose = BTreeMap::new();
        for (k, entries) in &doc.compose {
            let parts: Vec<usize> = k
                .split(',')
                .map(|t| t.trim().parse().map_err(|_| schema(format!("bad composition key {k:?}"))))
                .collect::<Result<_, _>>()?;
            let [n, i, m, j] = parts[..] else {
                return Err(schema(format!("composition key {k:?} needs four parts")));
            };
            if !arities.contains(&n) || !arities.contains(&m) || !arities.contains(&(n + m - 2)) || i >= n || j >= m {
                return Err(schema(format!("composition {k:?} refers to missing arities or legs")));
            }
            let out = dim(n + m - 2);
            let mut table = vec![vec![Accumulator::default(); dim(m)]; dim(n)];
            for (a, b, o, v) in entries {
                if *a >= dim(n) || *b >= dim(m) || *o >= out {
                    return Err(schema(format!("composition {k:?}: entry ({a}, {b}, {o}) out of range")));
                }
                table[*a][*b].add(*o, parse_value(v)?);
            }
            let table = table
                .into_iter()
                .map(|row| row.into_iter().map(Accumulator::finish).collect())
                .collect();
            compose.insert((n, i, m, j), table);
        }
        for &n in &arities {
            for &m in &arities {
                if arities.contains(&(n + m - 2)) && !compose.contains_key(&(n, n - 1, m, 0)) {
                    return Err(schema(format!("missing composition \"{},{},{},0\"", n, n - 1, m)));
                }
            }
        }

        let mut differential = BTreeMap::new();
        for (k, trip) in &doc.differential {
            let n: usize = k.parse().map_err(|_| schema(format!("bad arity key {k:?}")))?;
            if !arities.contains(&n) {
                return Err(schema(format!("differential given for unlisted arity {n}")));
            }
            differential.insert(n, matrix_from(trip, dim(n), dim(n), &format!("differential {n}"))?);
        }

        Ok(TableOperad {
            name: doc.name.clone(),
            arities,
            basis,
            transpositions,
            explicit_actions,
            compose,
            differential,
        })
    }

    /// Tabulates any operad up to `max_arity`.
    pub fn document_of<O: LinearOperad + ?Sized>(op: &O, max_arity: usize) -> OperadDoc {
        let arities: Vec<usize> = (2..=max_arity).filter(|&n| op.admits(n)).collect();
        let mut doc = OperadDoc {
            name: op.name().to_string(),
            arities: arities.clone(),
            basis: BTreeMap::new(),
            action: BTreeMap::new(),
            compose: BTreeMap::new(),
            differential: BTreeMap::new(),
        };
        for &n in &arities {
            let d = op.dim(n);
            doc.basis.insert(
                n.to_string(),
                (0..d)
                    .map(|b| BasisEntry {
                        name: op.basis_name(n, b),
                        degree: op.degree(n, b),
                    })
                    .collect(),
            );
            let mut acts = BTreeMap::new();
            for k in 0..n - 1 {
                let p = adjacent(n, k);
                let m: Matrix = (0..d).map(|b| op.act(n, &p, b)).collect();
                acts.insert(perm_key(&p), triplets_of(&m));
            }
            doc.action.insert(n.to_string(), acts);
            let dm: Matrix = (0..d).map(|b| op.differential(n, b)).collect();
            if dm.iter().any(|c| !c.is_zero()) {
                doc.differential.insert(n.to_string(), triplets_of(&dm));
            }
        }
        for &n in &arities {
            for &m in &arities {
                if !arities.contains(&(n + m - 2)) {
                    continue;
                }
                let mut entries: Vec<TensorEntry> = Vec::new();
                for a in 0..op.dim(n) {
                    for b in 0..op.dim(m) {
                        for (o, v) in op.compose(n, n - 1, a, m, 0, b).entries() {
                            entries.push((a, b, *o, format_q(v)));
                        }
                    }
                }
                doc.compose.insert(format!("{},{},{},0", n, n - 1, m), entries);
            }
        }
        doc
    }

    pub fn to_doc(&self) -> OperadDoc {
        let max = self.arities.iter().copied().max().unwrap_or(0);
        let mut doc = Self::document_of(self, max);
        for ((n, i, m, j), table) in &self.compose {
            if *i == n - 1 && *j == 0 {
                continue;
            }
            let mut entries = Vec::new();
            for (a, row) in table.iter().enumerate() {
                for (b, v) in row.iter().enumerate() {
                    for (o, c) in v.entries() {
                        entries.push((a, b, *o, format_q(c)));
                    }
                }
            }
            doc.compose.insert(format!("{n},{i},{m},{j}"), entries);
        }
        for (n, acts) in &self.explicit_actions {
            for (p, m) in acts {
                doc.action
                    .entry(n.to_string())
                    .or_default()
                    .insert(perm_key(p), triplets_of(m));
            }
        }
        doc
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("documents serialize")
    }

    /// Explicitly listed actions of non-adjacent permutations.
    pub fn explicit_actions(&self) -> impl Iterator<Item = (usize, &Vec<usize>, &Matrix)> {
        self.explicit_actions
            .iter()
            .flat_map(|(n, acts)| acts.iter().map(move |(p, m)| (*n, p, m)))
    }

    fn act_word(&self, n: usize, word: &[usize], v: SparseVec) -> SparseVec {
        let ts = &self.transpositions[&n];
        let mut v = v;
        for &k in word.iter().rev() {
            let mut acc = Accumulator::default();
            for (b, c) in v.entries() {
                acc.add_vec(&ts[k][*b], c);
            }
            v = acc.finish();
        }
        v
    }
}

impl LinearOperad for TableOperad {
    fn name(&self) -> &str {
        &self.name
    }
    fn admits(&self, n: usize) -> bool {
        self.arities.contains(&n)
    }
    fn dim(&self, n: usize) -> usize {
        self.basis.get(&n).map_or(0, |b| b.len())
    }
    fn degree(&self, n: usize, b: usize) -> i64 {
        self.basis[&n][b].degree
    }
    fn act(&self, n: usize, perm: &[usize], b: usize) -> SparseVec {
        self.act_word(n, &reduced_word(perm), SparseVec::unit(b))
    }
    fn compose(&self, n: usize, i: usize, a: usize, m: usize, j: usize, b: usize) -> SparseVec {
        if let Some(t) = self.compose.get(&(n, i, m, j)) {
            return t[a][b].clone();
        }
        let Some(t) = self.compose.get(&(n, n - 1, m, 0)) else {
            return SparseVec::new();
        };
        // move leg i to the end and leg j to the front, keeping the others in order
        let sigma: Vec<usize> = (0..n).map(|k| if k == i { n - 1 } else { left_position(i, k) }).collect();
        let tau: Vec<usize> = (0..m).map(|k| if k == j { 0 } else if k < j { k + 1 } else { k }).collect();
        let sa = self.act(n, &sigma, a);
        let tb = self.act(m, &tau, b);
        let mut acc = Accumulator::default();
        for (x, cx) in sa.entries() {
            for (y, cy) in tb.entries() {
                acc.add_vec(&t[*x][*y], &(cx * cy));
            }
        }
        acc.finish()
    }
    fn differential(&self, n: usize, b: usize) -> SparseVec {
        self.differential.get(&n).map_or_else(SparseVec::new, |d| d[b].clone())
    }
    fn basis_name(&self, n: usize, b: usize) -> String {
        self.basis[&n][b].name.clone()
    }
    fn max_arity(&self) -> Option<usize> {
        self.arities.iter().copied().max()
    }
}

/// Checks that every explicitly listed action agrees with the action built
/// from transpositions.
fn explicit_action_mismatches(op: &TableOperad) -> Vec<String> {
    let mut out = Vec::new();
    for (n, p, m) in op.explicit_actions() {
        for (b, col) in m.iter().enumerate() {
            if act_vec(op, n, p, &SparseVec::unit(b)) != *col {
                out.push(format!("arity {n}: listed action of [{}] disagrees on {}", perm_key(p), op.basis_name(n, b)));
            }
        }
    }
    out
}
