//! Seeded random games.
//!
//! The output is a pure function of [`GenParams`], identical on every
//! platform. The random stream is SplitMix64 (Steele, Lea and Flood) seeded
//! with `seed`, and it is consumed in this exact order:
//!
//! 1. for each vertex `v` in `0..n`:
//!    priority `below(max_priority + 1)`, owner `below(2)` (1 is Odd),
//!    outdegree `lo + below(hi - lo + 1)`, then one `unit()` draw deciding
//!    the self-loop (`unit() < self_loop_probability`);
//! 2. the remaining targets of `v` are drawn from the other `n - 1` vertices
//!    without replacement by Floyd's algorithm.
//!
//! A self-loop is also added when the outdegree exceeds `n - 1`. When present
//! it is the first successor. `below(b)` rejects raw outputs smaller than
//! `2^64 mod b` and returns the rest modulo `b`; `unit()` is the top 53 bits
//! of one output scaled to `[0, 1)`.
//!
//! Changing any of this changes every seeded game, so it must not change
//! within a major version.

use crate::game::{ParityGame, Player};
use crate::{Priority, Vertex};

/// The SplitMix64 generator.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in `0..bound`.
    ///
    /// # Panics
    /// If `bound` is zero.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let r = self.next_u64();
            if r >= threshold {
                return r % bound;
            }
        }
    }

    /// Uniform in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    pub n: usize,
    pub max_priority: Priority,
    pub min_outdegree: usize,
    pub max_outdegree: usize,
    pub self_loop_probability: f64,
    pub seed: u64,
}

impl GenParams {
    /// Outdegree between 1 and `min(4, n)`, no forced self-loops.
    pub fn new(n: usize, max_priority: Priority, seed: u64) -> GenParams {
        GenParams {
            n,
            max_priority,
            min_outdegree: 1,
            max_outdegree: n.clamp(1, 4),
            self_loop_probability: 0.0,
            seed,
        }
    }

    pub fn outdegree(mut self, lo: usize, hi: usize) -> GenParams {
        self.min_outdegree = lo;
        self.max_outdegree = hi;
        self
    }

    pub fn self_loops(mut self, probability: f64) -> GenParams {
        self.self_loop_probability = probability;
        self
    }

    pub fn validate(&self) -> Result<(), InvalidParams> {
        let fail = |msg: String| Err(InvalidParams(msg));
        if self.n == 0 {
            return fail("n must be at least 1".into());
        }
        if self.min_outdegree == 0 {
            return fail("minimum outdegree must be at least 1".into());
        }
        if self.max_outdegree < self.min_outdegree {
            return fail(format!(
                "outdegree range [{}, {}] is empty",
                self.min_outdegree, self.max_outdegree
            ));
        }
        if self.max_outdegree > self.n {
            return fail(format!(
                "maximum outdegree {} exceeds n = {}",
                self.max_outdegree, self.n
            ));
        }
        if !(0.0..=1.0).contains(&self.self_loop_probability) {
            return fail(format!(
                "self-loop probability {} is not in [0, 1]",
                self.self_loop_probability
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid generator parameters: {0}")]
pub struct InvalidParams(pub String);

pub fn random_game(params: &GenParams) -> Result<ParityGame, InvalidParams> {
    params.validate()?;
    let n = params.n;
    let mut rng = SplitMix64::new(params.seed);
    let mut priority = Vec::with_capacity(n);
    let mut owner = Vec::with_capacity(n);
    let mut successors = Vec::with_capacity(n);
    let span = (params.max_outdegree - params.min_outdegree + 1) as u64;
    let mut picked: Vec<u64> = Vec::new();
    for v in 0..n {
        priority.push(rng.below(params.max_priority as u64 + 1) as Priority);
        owner.push(Player::from_bit(rng.below(2) == 1));
        let degree = params.min_outdegree + rng.below(span) as usize;
        let self_loop = rng.unit() < params.self_loop_probability || degree > n - 1;
        let others = degree - self_loop as usize;

        let mut succ: Vec<Vertex> = Vec::with_capacity(degree);
        if self_loop {
            succ.push(v);
        }
        // Floyd's sampling of `others` distinct indices from 0..n-1.
        picked.clear();
        let pool = (n - 1) as u64;
        for j in pool - others as u64..pool {
            let t = rng.below(j + 1);
            picked.push(if picked.contains(&t) { j } else { t });
        }
        succ.extend(picked.iter().map(|&x| {
            let x = x as Vertex;
            if x < v {
                x
            } else {
                x + 1
            }
        }));
        successors.push(succ);
    }
    Ok(ParityGame::new(priority, owner, successors).expect("generated games are valid"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_values() {
        // First outputs for seed 0 as published with the algorithm.
        let mut rng = SplitMix64::new(0);
        assert_eq!(rng.next_u64(), 0xe220_a839_7b1d_cdaf);
        assert_eq!(rng.next_u64(), 0x6e78_9e6a_a1b9_65f4);
    }

    #[test]
    fn deterministic() {
        let p = GenParams::new(30, 5, 42).self_loops(0.2);
        assert_eq!(random_game(&p).unwrap(), random_game(&p).unwrap());
        let q = GenParams {
            seed: 43,
            ..p.clone()
        };
        assert_ne!(random_game(&p).unwrap(), random_game(&q).unwrap());
    }

    #[test]
    fn every_vertex_has_a_successor() {
        let g = random_game(&GenParams::new(5, 3, 7).outdegree(1, 5)).unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert!(g.vertices().all(|v| !g.successors(v).is_empty()));
        assert_eq!(g.validate(), Ok(()));
    }

    #[test]
    fn single_self_loop() {
        let g = random_game(&GenParams::new(1, 0, 0).outdegree(1, 1).self_loops(1.0)).unwrap();
        assert_eq!(g.successors(0), &[0]);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(random_game(&GenParams::new(0, 0, 0)).is_err());
        assert!(random_game(&GenParams::new(3, 0, 0).outdegree(0, 1)).is_err());
        assert!(random_game(&GenParams::new(3, 0, 0).outdegree(2, 1)).is_err());
        assert!(random_game(&GenParams::new(3, 0, 0).outdegree(1, 4)).is_err());
        assert!(random_game(&GenParams::new(3, 0, 0).self_loops(1.5)).is_err());
    }

    #[test]
    fn bounded_draws_stay_in_range() {
        let mut rng = SplitMix64::new(9);
        for bound in 1..50 {
            assert!(rng.below(bound) < bound);
        }
        let u = rng.unit();
        assert!((0.0..1.0).contains(&u));
    }
}
