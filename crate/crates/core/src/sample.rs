//! Deterministic sampling of Hamiltonian letters and wedge words.
//!
//! Every sample is drawn from a ChaCha stream keyed by `(model seed, suite
//! tag, sample index)`, so suites are reproducible and may be evaluated in
//! parallel without sharing state.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

use crate::model::Model;
use crate::observable::{combo_pair, Letter, Observable};
use crate::rat::{rat, Rat};

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(model: &Model, tag: u64, index: u64) -> Self {
        let mut seed = [0u8; 32];
        seed[..8].copy_from_slice(&model.data.seed.to_le_bytes());
        seed[8..16].copy_from_slice(&tag.to_le_bytes());
        seed[16..24].copy_from_slice(&index.to_le_bytes());
        Sampler {
            rng: ChaCha8Rng::from_seed(seed),
        }
    }

    /// Small nonzero rational.
    pub fn rat(&mut self) -> Rat {
        let num = loop {
            let n: i64 = self.rng.gen_range(-3..=3);
            if n != 0 {
                break n;
            }
        };
        let den: i64 = self.rng.gen_range(1..=2);
        rat(num, den)
    }

    /// The distinct form degrees available in the pool.
    fn pool_degrees(&self, model: &Model) -> Vec<usize> {
        let mut degs: Vec<usize> = model.pool.iter().map(|l| l.form_degree).collect();
        degs.sort_unstable();
        degs.dedup();
        degs
    }

    /// A fresh letter: a rational combination of one or two pool letters
    /// of a common form degree.
    pub fn combo_letter_of_degree(&mut self, model: &Model, degree: usize) -> Letter {
        let candidates: Vec<usize> = model
            .pool
            .iter()
            .enumerate()
            .filter(|(_, l)| l.form_degree == degree)
            .map(|(i, _)| i)
            .collect();
        assert!(!candidates.is_empty(), "no pool letters of degree {degree}");
        let k = if candidates.len() > 1 && self.rng.gen_bool(0.5) {
            2
        } else {
            1
        };
        let mut parts = Vec::new();
        let mut chosen = candidates.clone();
        for _ in 0..k {
            let at = self.rng.gen_range(0..chosen.len());
            parts.push((chosen.remove(at), self.rat()));
        }
        Arc::new(combo_pair(model, &parts).expect("combo of one degree"))
    }

    pub fn combo_letter(&mut self, model: &Model) -> Letter {
        let degs = self.pool_degrees(model);
        let d = degs[self.rng.gen_range(0..degs.len())];
        self.combo_letter_of_degree(model, d)
    }

    /// Letter of the top Hamiltonian degree `n - 1`.
    pub fn top_degree_letter(&mut self, model: &Model) -> Letter {
        self.combo_letter_of_degree(model, model.n() - 1)
    }

    pub fn observable_from_letter(&self, model: &Model, l: Letter) -> Observable {
        Observable::from_pair(model.dim(), model.n(), l)
    }

    /// A nonzero wedge word of combo letters, up to `max_len` letters.
    pub fn word(&mut self, model: &Model, max_len: usize) -> Observable {
        let max_len = max_len.max(1);
        loop {
            let len = self.rng.gen_range(1..=max_len);
            let mut obs = Observable::unit(model.dim(), model.n());
            for _ in 0..len {
                let l = self.combo_letter(model);
                obs = obs.wedge(&self.observable_from_letter(model, l));
            }
            if !obs.is_zero() {
                return obs;
            }
        }
    }
}
