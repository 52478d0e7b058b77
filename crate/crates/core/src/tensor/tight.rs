//! Tightness witnesses: injective integer labelings `μ, ν, π` of the three
//! axes with `μ(i) + ν(j) + π(k) = 0` on the support.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Tensor3;
use crate::ring::{ExactRational, Field, Ring};

/// Default bound on the absolute value of witness labels.
pub const DEFAULT_TIGHTNESS_BOUND: i64 = 32;

/// Candidate combinations examined before giving up.
const SEARCH_BUDGET: u64 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TightnessWitness {
    pub mu: Vec<i64>,
    pub nu: Vec<i64>,
    pub pi: Vec<i64>,
}

fn injective(v: &[i64]) -> bool {
    let mut s = v.to_vec();
    s.sort_unstable();
    s.windows(2).all(|w| w[0] != w[1])
}

impl TightnessWitness {
    /// Exhaustive re-check against `t`: lengths, injectivity, and the
    /// zero-sum condition on every support triple.
    pub fn check<R: Ring>(&self, t: &Tensor3<R>) -> bool {
        let (m, n, p) = t.dims();
        self.mu.len() == m
            && self.nu.len() == n
            && self.pi.len() == p
            && injective(&self.mu)
            && injective(&self.nu)
            && injective(&self.pi)
            && t.support().iter().all(|&(i, j, k)| self.mu[i] + self.nu[j] + self.pi[k] == 0)
    }
}

/// Integer basis of the kernel of the support equations, one vector per free
/// variable of the reduced row echelon form.
fn kernel_basis(vars: usize, equations: &[[usize; 3]]) -> Vec<Vec<i64>> {
    let q = |v: i64| ExactRational::integer(v);
    let mut rows: Vec<Vec<ExactRational>> = equations
        .iter()
        .map(|eq| {
            let mut row = vec![q(0); vars];
            for &x in eq {
                row[x] = row[x].add(&q(1));
            }
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..vars {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][col].inv().expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = x.mul(&inv);
        }
        for i in 0..rows.len() {
            if i == r || rows[i][col].is_zero() {
                continue;
            }
            let f = rows[i][col].clone();
            for c in 0..vars {
                let s = f.mul(&rows[r][c]);
                rows[i][c] = rows[i][c].sub(&s);
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..vars).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![q(0); vars];
            v[f] = q(1);
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = rows[row][f].neg();
            }
            let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(&x.denom()));
            let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
            let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            ints.iter()
                .map(|x| (x / &g).to_i64().expect("kernel entries fit in i64"))
                .collect()
        })
        .collect()
}

/// Search for a witness with labels in `[−bound, bound]`.
///
/// The zero-sum conditions form a homogeneous linear system; the search runs
/// over small integer combinations of a kernel basis, in order of increasing
/// coefficient magnitude, and returns the first injective labeling. `None`
/// means no witness was found within the bound (or none can exist because the
/// kernel forces two labels on one axis to coincide).
pub fn find_tightness_witness<R: Ring>(t: &Tensor3<R>, bound: i64) -> Option<TightnessWitness> {
    assert!(bound >= 1, "bound must be positive");
    let (m, n, p) = t.dims();
    let vars = m + n + p;
    let equations: Vec<[usize; 3]> = t.support().iter().map(|&(i, j, k)| [i, m + j, m + n + k]).collect();
    let basis = kernel_basis(vars, &equations);
    let axes = [(0, m), (m, m + n), (m + n, vars)];

    // Two labels that agree on every basis vector agree on every solution.
    for &(lo, hi) in &axes {
        for a in lo..hi {
            for b in (a + 1)..hi {
                if basis.iter().all(|v| v[a] == v[b]) {
                    return None;
                }
            }
        }
    }

    let dim = basis.len();
    let split = |v: &[i64]| TightnessWitness {
        mu: v[..m].to_vec(),
        nu: v[m..m + n].to_vec(),
        pi: v[m + n..].to_vec(),
    };
    let mut tried = 0u64;
    for k in 1..=bound {
        // All coefficient vectors in [−k, k]^dim with at least one entry ±k.
        let mut coeffs = vec![-k; dim];
        loop {
            if coeffs.iter().any(|c| c.abs() == k) {
                tried += 1;
                if tried > SEARCH_BUDGET {
                    return None;
                }
                let mut values = vec![0i64; vars];
                for (c, v) in coeffs.iter().zip(&basis) {
                    if *c != 0 {
                        for (dst, x) in values.iter_mut().zip(v) {
                            *dst += c * x;
                        }
                    }
                }
                if values.iter().all(|x| x.abs() <= bound)
                    && axes.iter().all(|&(lo, hi)| injective(&values[lo..hi]))
                {
                    let w = split(&values);
                    debug_assert!(w.check(t));
                    return Some(w);
                }
            }
            let Some(pos) = coeffs.iter().rposition(|&c| c < k) else {
                break;
            };
            coeffs[pos] += 1;
            for c in coeffs.iter_mut().skip(pos + 1) {
                *c = -k;
            }
        }
    }
    None
}
