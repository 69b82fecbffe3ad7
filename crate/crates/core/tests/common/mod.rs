//! Fixtures and brute-force oracles shared by the integration tests.
//!
//! The oracle recomputes every score from approval sets with its own integer
//! scaling and enumerates all (coalition, committee) pairs. It never calls the
//! library's scoring or search code.

#![allow(dead_code)]

use corevote::{Instance, Rational, Rule, UtilityVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn inst(m: usize, approvals: &[&[usize]], k: usize) -> Instance {
    Instance::from_approvals(m, approvals.iter().map(|a| a.to_vec()).collect(), k).unwrap()
}

pub fn ex1() -> Instance {
    inst(5, &[&[0, 1, 2], &[0, 1, 2], &[0, 1, 2], &[0, 1, 2], &[3, 4], &[3, 4]], 3)
}

pub fn ex2() -> Instance {
    inst(3, &[&[0], &[0], &[0, 1], &[1, 2]], 2)
}

pub fn ex3() -> Instance {
    inst(4, &[&[0], &[0, 3], &[0, 3], &[1], &[1, 2, 3], &[1, 2, 3]], 2)
}

/// Six voters on four alternatives, each alternative approved by three of them.
pub fn empty_core() -> Instance {
    inst(4, &[&[0, 1], &[0, 3], &[0, 2], &[1, 2], &[1, 3], &[2, 3]], 2)
}

pub fn shapley_av() -> Instance {
    inst(5, &[&[0, 1], &[0, 1], &[0, 1], &[2, 3, 4], &[2, 3, 4], &[2, 3, 4]], 4)
}

pub fn shapley_sav() -> Instance {
    let rest = [1, 2, 3, 4, 5];
    inst(6, &[&[0], &rest, &rest, &rest], 2)
}

pub fn shapley_cc_pav() -> Instance {
    inst(4, &[&[0, 1], &[0, 2], &[1, 2], &[3]], 2)
}

pub fn q(p: i64, d: i64) -> Rational {
    Rational::frac(p, d)
}

pub fn vector(values: &[(i64, i64)]) -> UtilityVector {
    UtilityVector::new(values.iter().map(|&(p, d)| q(p, d)).collect()).unwrap()
}

/// Random instance with `n ≤ max_n`, `m ≤ max_m`, `k ≤ min(max_k, m)`.
pub fn random_instance(rng: &mut ChaCha8Rng, max_n: usize, max_m: usize, max_k: usize) -> Instance {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(1..=max_m);
    let k = rng.gen_range(1..=max_k.min(m));
    let density = rng.gen_range(0.15..0.75);
    let approvals = (0..n)
        .map(|_| (0..m).filter(|_| rng.gen_bool(density)).collect())
        .collect();
    Instance::from_approvals(m, approvals, k).unwrap()
}

pub fn random_committee(rng: &mut ChaCha8Rng, m: usize, size: usize) -> Vec<usize> {
    rand::seq::index::sample(rng, m, size).into_vec()
}

/// Exhaustive oracle over one instance and rule.
pub struct Oracle {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    /// Every score is an integer multiple of `1 / scale`.
    pub scale: i64,
    /// `score[v][w]` for committee bitmask `w`, scaled.
    pub score: Vec<Vec<i64>>,
}

fn lcm(a: i64, b: i64) -> i64 {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

impl Oracle {
    pub fn new(instance: &Instance, rule: Rule) -> Self {
        let (n, m, k) = (instance.n(), instance.m(), instance.k());
        assert!(n <= 12 && m <= 12, "oracle is for tiny instances");
        let scale = (1..=m.max(1) as i64).fold(1, lcm);
        let score = (0..n)
            .map(|v| {
                let approved: usize =
                    instance.profile().approvals(v).iter().map(|&c| 1usize << c).sum();
                let a = approved.count_ones() as i64;
                (0..1usize << m)
                    .map(|w| {
                        let t = (approved & w).count_ones() as i64;
                        match rule {
                            Rule::Av => t * scale,
                            Rule::Sav if a == 0 => 0,
                            Rule::Sav => t * scale / a,
                            Rule::Cc => t.min(1) * scale,
                            Rule::Pav => (1..=t).map(|z| scale / z).sum(),
                        }
                    })
                    .collect()
            })
            .collect();
        Oracle { n, m, k, scale, score }
    }

    pub fn cap(&self, size: usize) -> usize {
        size * self.k / self.n
    }

    fn scaled(&self, alpha: &UtilityVector) -> Vec<Rational> {
        let s = Rational::from_integer(self.scale);
        alpha.iter().map(|a| a * &s).collect()
    }

    pub fn induced(&self, w: usize) -> UtilityVector {
        UtilityVector::new(
            (0..self.n)
                .map(|v| Rational::new(self.score[v][w], self.scale).unwrap())
                .collect(),
        )
        .unwrap()
    }

    pub fn grand_value(&self) -> Rational {
        let best = (0..1usize << self.m)
            .filter(|w| w.count_ones() as usize <= self.k)
            .map(|w| (0..self.n).map(|v| self.score[v][w]).sum::<i64>())
            .max()
            .unwrap();
        Rational::new(best, self.scale).unwrap()
    }

    /// Whether coalition `s` TU-blocks `alpha`.
    pub fn tu_blocks(&self, alpha: &UtilityVector, s: usize) -> bool {
        let a = self.scaled(alpha);
        let cap = self.cap(s.count_ones() as usize);
        let claim: Rational = (0..self.n).filter(|v| s >> v & 1 == 1).map(|v| a[v].clone()).sum();
        (0..1usize << self.m)
            .filter(|w| w.count_ones() as usize <= cap)
            .any(|w| {
                let total: i64 = (0..self.n).filter(|v| s >> v & 1 == 1).map(|v| self.score[v][w]).sum();
                Rational::from_integer(total) > claim
            })
    }

    /// For each committee, the set of voters strictly better off than under `alpha`.
    fn improved(&self, alpha: &UtilityVector) -> Vec<usize> {
        let a = self.scaled(alpha);
        (0..1usize << self.m)
            .map(|w| {
                (0..self.n)
                    .filter(|&v| Rational::from_integer(self.score[v][w]) > a[v])
                    .fold(0, |acc, v| acc | 1 << v)
            })
            .collect()
    }

    /// Whether coalition `s` NTU-blocks `alpha`.
    pub fn ntu_blocks_with(&self, improved: &[usize], s: usize) -> bool {
        let cap = self.cap(s.count_ones() as usize);
        (0..1usize << self.m)
            .any(|w| w.count_ones() as usize <= cap && improved[w] & s == s)
    }

    pub fn ntu_blocking_coalitions(&self, alpha: &UtilityVector) -> Vec<usize> {
        let improved = self.improved(alpha);
        (1..1usize << self.n).filter(|&s| self.ntu_blocks_with(&improved, s)).collect()
    }

    pub fn tu_blocked(&self, alpha: &UtilityVector) -> bool {
        (1..1usize << self.n).any(|s| self.tu_blocks(alpha, s))
    }

    pub fn ntu_blocked(&self, alpha: &UtilityVector) -> bool {
        let improved = self.improved(alpha);
        (1..1usize << self.n).any(|s| self.ntu_blocks_with(&improved, s))
    }

    pub fn tu_member(&self, alpha: &UtilityVector) -> bool {
        alpha.sum() == self.grand_value() && !self.tu_blocked(alpha)
    }

    pub fn ntu_feasible(&self, alpha: &UtilityVector) -> bool {
        let a = self.scaled(alpha);
        (0..1usize << self.m).any(|w| {
            w.count_ones() as usize <= self.k
                && (0..self.n).all(|v| Rational::from_integer(self.score[v][w]) == a[v])
        })
    }

    pub fn ntu_member(&self, alpha: &UtilityVector) -> bool {
        self.ntu_feasible(alpha) && !self.ntu_blocked(alpha)
    }
}

/// Justified representation checked straight from the definition: no group of
/// at least `ceil(n/k)` voters shares an approved alternative while every one
/// of them misses the committee.
pub fn satisfies_jr(instance: &Instance, committee: &[usize]) -> bool {
    let n = instance.n();
    let quota = n.div_ceil(instance.k());
    let p = instance.profile();
    let uncovered: Vec<usize> = (0..n)
        .filter(|&v| !p.approvals(v).iter().any(|c| committee.contains(c)))
        .collect();
    (0..instance.m()).all(|c| {
        uncovered.iter().filter(|&&v| p.approves(v, c)).count() < quota.max(1)
    })
}
