//! Exhaustive (or sampled) verification of the cyclic operad axioms.

use std::fmt;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{act_vec, compose_perms, left_position, right_position, LinearOperad};
use crate::graph::permutations;
use crate::linalg::{q, Accumulator, SparseVec};

/// Where an identity failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: &'static str,
    pub location: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at {}", self.axiom, self.location)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub operad: String,
    pub max_arity: usize,
    /// Number of identities evaluated.
    pub checks: u64,
    pub violation_count: u64,
    /// The first violations found, in check order.
    pub violations: Vec<Violation>,
}

const KEPT: usize = 64;

impl AxiomReport {
    pub fn is_clean(&self) -> bool {
        self.violation_count == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

struct Checker<'a, O: ?Sized> {
    op: &'a O,
    rng: ChaCha8Rng,
    cap: Option<usize>,
    report: AxiomReport,
}

fn compose_vec<O: LinearOperad + ?Sized>(
    op: &O,
    n: usize,
    i: usize,
    u: &SparseVec,
    m: usize,
    j: usize,
    v: &SparseVec,
) -> SparseVec {
    let mut acc = Accumulator::default();
    for (a, ca) in u.entries() {
        for (b, cb) in v.entries() {
            acc.add_vec(&op.compose(n, i, *a, m, j, *b), &(ca * cb));
        }
    }
    acc.finish()
}

fn diff_vec<O: LinearOperad + ?Sized>(op: &O, n: usize, v: &SparseVec) -> SparseVec {
    let mut acc = Accumulator::default();
    for (b, c) in v.entries() {
        acc.add_vec(&op.differential(n, *b), c);
    }
    acc.finish()
}

fn adjacent(n: usize, k: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.swap(k, k + 1);
    p
}

impl<'a, O: LinearOperad + ?Sized> Checker<'a, O> {
    fn pick(&mut self, count: usize) -> Vec<usize> {
        match self.cap {
            Some(cap) if count > cap => {
                let mut v = sample(&mut self.rng, count, cap).into_vec();
                v.sort_unstable();
                v
            }
            _ => (0..count).collect(),
        }
    }

    fn expect(&mut self, ok: bool, axiom: &'static str, location: impl FnOnce() -> String) {
        self.report.checks += 1;
        if !ok {
            self.report.violation_count += 1;
            if self.report.violations.len() < KEPT {
                self.report.violations.push(Violation {
                    axiom,
                    location: location(),
                });
            }
        }
    }

    fn component(&mut self, n: usize) {
        let op = self.op;
        let dim = op.dim(n);
        let id: Vec<usize> = (0..n).collect();
        for b in 0..dim {
            let e = SparseVec::unit(b);
            self.expect(op.act(n, &id, b) == e, "identity acts trivially", || format!("arity {n}, {}", op.basis_name(n, b)));
            let d = op.differential(n, b);
            let deg = op.degree(n, b);
            let ok = d.entries().iter().all(|(x, _)| op.degree(n, *x) == deg - 1);
            self.expect(ok, "differential has degree -1", || format!("arity {n}, {}", op.basis_name(n, b)));
            let dd = diff_vec(op, n, &d);
            self.expect(dd.is_zero(), "d∘d = 0", || format!("arity {n}, {}", op.basis_name(n, b)));
            for k in 0..n - 1 {
                let s = adjacent(n, k);
                let sb = op.act(n, &s, b);
                let ok = sb.entries().iter().all(|(x, _)| op.degree(n, *x) == deg);
                self.expect(ok, "action preserves degree", || format!("arity {n}, s{k}, {}", op.basis_name(n, b)));
                self.expect(diff_vec(op, n, &sb) == act_vec(op, n, &s, &d), "d commutes with the action", || {
                    format!("arity {n}, s{k}, {}", op.basis_name(n, b))
                });
            }
        }
        // functoriality: s_k·(σ·b) = (s_k∘σ)·b for every σ; with the identity
        // check this pins down a group action
        let perms = permutations(n);
        let chosen = self.pick(perms.len());
        for pi in chosen {
            let sigma = &perms[pi];
            for b in self.pick(dim) {
                let sb = op.act(n, sigma, b);
                for k in 0..n - 1 {
                    let s = adjacent(n, k);
                    let lhs = act_vec(op, n, &s, &sb);
                    let rhs = op.act(n, &compose_perms(&s, sigma), b);
                    self.expect(lhs == rhs, "action is functorial", || {
                        format!("arity {n}, s{k} after {sigma:?}, {}", op.basis_name(n, b))
                    });
                }
            }
        }
    }

    fn pair(&mut self, n: usize, m: usize) {
        let op = self.op;
        let out = n + m - 2;
        let sa = self.pick(op.dim(n));
        let sb = self.pick(op.dim(m));
        for &a in &sa {
            for &b in &sb {
                let (ea, eb) = (SparseVec::unit(a), SparseVec::unit(b));
                let (da, db) = (op.differential(n, a), op.differential(m, b));
                let deg_a = op.degree(n, a);
                for i in 0..n {
                    for j in 0..m {
                        let loc = || format!("{} _{i}∘_{j} {}", op.basis_name(n, a), op.basis_name(m, b));
                        let c = op.compose(n, i, a, m, j, b);
                        let ok = c.entries().iter().all(|(x, _)| op.degree(out, *x) == deg_a + op.degree(m, b));
                        self.expect(ok, "composition preserves degree", loc);

                        let lhs = diff_vec(op, out, &c);
                        let sign = if deg_a % 2 == 0 { q(1) } else { q(-1) };
                        let rhs = compose_vec(op, n, i, &da, m, j, &eb)
                            .add_scaled(&compose_vec(op, n, i, &ea, m, j, &db), &sign);
                        self.expect(lhs == rhs, "d is a derivation of composition", || {
                            format!("{} _{i}∘_{j} {}", op.basis_name(n, a), op.basis_name(m, b))
                        });

                        // gluing is unordered: b _j∘_i a is a _i∘_j b with the blocks swapped
                        let swapped = op.compose(m, j, b, n, i, a);
                        let block: Vec<usize> =
                            (0..out).map(|x| if x < m - 1 { x + n - 1 } else { x - (m - 1) }).collect();
                        let koszul = if (deg_a * op.degree(m, b)) % 2 == 0 { q(1) } else { q(-1) };
                        self.expect(act_vec(op, out, &block, &swapped).scale(&koszul) == c, "composition is symmetric", || {
                            format!("{} _{i}∘_{j} {}", op.basis_name(n, a), op.basis_name(m, b))
                        });

                        for k in 0..n - 1 {
                            let s = adjacent(n, k);
                            self.equivariance(n, i, a, m, j, b, &s, &(0..m).collect::<Vec<_>>(), &c);
                        }
                        for k in 0..m - 1 {
                            let t = adjacent(m, k);
                            self.equivariance(n, i, a, m, j, b, &(0..n).collect::<Vec<_>>(), &t, &c);
                        }
                    }
                }
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn equivariance(
        &mut self,
        n: usize,
        i: usize,
        a: usize,
        m: usize,
        j: usize,
        b: usize,
        sigma: &[usize],
        tau: &[usize],
        composed: &SparseVec,
    ) {
        let op = self.op;
        let lhs = compose_vec(op, n, sigma[i], &op.act(n, sigma, a), m, tau[j], &op.act(m, tau, b));
        let mut induced = vec![0; n + m - 2];
        for k in (0..n).filter(|&k| k != i) {
            induced[left_position(i, k)] = left_position(sigma[i], sigma[k]);
        }
        for k in (0..m).filter(|&k| k != j) {
            induced[right_position(n, j, k)] = right_position(n, tau[j], tau[k]);
        }
        let rhs = act_vec(op, n + m - 2, &induced, composed);
        self.expect(lhs == rhs, "composition is equivariant", || {
            format!("{} _{i}∘_{j} {} under {sigma:?} ⊔ {tau:?}", op.basis_name(n, a), op.basis_name(m, b))
        });
    }

    fn triple(&mut self, n: usize, m: usize, p: usize) {
        let op = self.op;
        let nm = n + m - 2;
        let sa = self.pick(op.dim(n));
        let sb = self.pick(op.dim(m));
        let sc = self.pick(op.dim(p));
        for &a in &sa {
            for &b in &sb {
                for &c in &sc {
                    let ec = SparseVec::unit(c);
                    let eb = SparseVec::unit(b);
                    let koszul = if (op.degree(m, b) * op.degree(p, c)) % 2 == 0 { q(1) } else { q(-1) };
                    for i in 0..n {
                        for j in 0..m {
                            let ab = op.compose(n, i, a, m, j, b);
                            for l in 0..p {
                                // c glued to a leg of b
                                for k in (0..m).filter(|&k| k != j) {
                                    let lhs = compose_vec(op, nm, right_position(n, j, k), &ab, p, l, &ec);
                                    let bc = op.compose(m, k, b, p, l, c);
                                    let rhs = compose_vec(op, n, i, &SparseVec::unit(a), m + p - 2, left_position(k, j), &bc);
                                    self.expect(lhs == rhs, "composition is associative", || {
                                        format!(
                                            "({} _{i}∘_{j} {}) then leg {k} of the second with {} at {l}",
                                            op.basis_name(n, a),
                                            op.basis_name(m, b),
                                            op.basis_name(p, c)
                                        )
                                    });
                                }
                                // c glued to another leg of a
                                for k in (0..n).filter(|&k| k != i) {
                                    let lhs = compose_vec(op, nm, left_position(i, k), &ab, p, l, &ec);
                                    let ac = op.compose(n, k, a, p, l, c);
                                    let r = compose_vec(op, n + p - 2, left_position(k, i), &ac, m, j, &eb);
                                    // move the block of b's legs in front of c's legs
                                    let total = n + m + p - 4;
                                    let perm: Vec<usize> = (0..total)
                                        .map(|x| {
                                            if x < n - 2 {
                                                x
                                            } else if x < n - 2 + p - 1 {
                                                x + m - 1
                                            } else {
                                                x - (p - 1)
                                            }
                                        })
                                        .collect();
                                    let rhs = act_vec(op, total, &perm, &r).scale(&koszul);
                                    self.expect(lhs == rhs, "compositions at distinct legs commute", || {
                                        format!(
                                            "{} with {} at {i},{j} and {} at {k},{l}",
                                            op.basis_name(n, a),
                                            op.basis_name(m, b),
                                            op.basis_name(p, c)
                                        )
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Checks every axiom on all admitted arities up to `max_arity`.
pub fn check_axioms<O: LinearOperad + ?Sized>(op: &O, max_arity: usize) -> AxiomReport {
    check_axioms_sampled(op, max_arity, None, 0)
}

/// Like [`check_axioms`], but with at most `cap` elements per component in
/// each case, drawn from a generator seeded with `seed`.
pub fn check_axioms_sampled<O: LinearOperad + ?Sized>(
    op: &O,
    max_arity: usize,
    cap: Option<usize>,
    seed: u64,
) -> AxiomReport {
    let mut ch = Checker {
        op,
        rng: ChaCha8Rng::seed_from_u64(seed),
        cap,
        report: AxiomReport {
            operad: op.name().to_string(),
            max_arity,
            checks: 0,
            violation_count: 0,
            violations: Vec::new(),
        },
    };
    let ar: Vec<usize> = (2..=max_arity).filter(|&n| op.admits(n)).collect();
    let ok = |n: usize| n <= max_arity && op.admits(n);
    for &n in &ar {
        ch.component(n);
    }
    for &n in &ar {
        for &m in &ar {
            if ok(n + m - 2) {
                ch.pair(n, m);
            }
        }
    }
    for &n in &ar {
        for &m in &ar {
            for &p in &ar {
                let needed = [n + m - 2, m + p - 2, n + p - 2, n + m + p - 4];
                if needed.iter().all(|&x| ok(x)) {
                    ch.triple(n, m, p);
                }
            }
        }
    }
    ch.report
}
