//! Seeded random filtered dgls with nontrivial linear parts, for testing.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::DglPresentation;
use crate::lie::{spanning_set_with, Alphabet, GenId, Generator, LieElement, SpanSpec};
use crate::linalg::rat;

#[derive(Clone, Debug)]
pub struct RandomDglConfig {
    /// Filtration length, at most this many stages.
    pub stages: u32,
    pub min_degree: u32,
    pub max_degree: u32,
    pub max_generators: usize,
}

impl Default for RandomDglConfig {
    fn default() -> Self {
        Self {
            stages: 3,
            min_degree: 3,
            max_degree: 14,
            max_generators: 7,
        }
    }
}

/// A filtered free dgl with `d^2 = 0` by construction. Differentials are
/// random combinations of cycles built from earlier stages: cycle
/// generators, brackets of them, boundaries `d t` of decomposables, and
/// differences `h - t` where `d h = d t` was arranged earlier (which puts
/// `h` in the linear part).
pub fn random_filtered_dgl(seed: u64, cfg: &RandomDglConfig) -> DglPresentation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = DglPresentation::new(Alphabet::new());
    let mut stage_of: Vec<u32> = Vec::new();
    let mut twins: Vec<(GenId, LieElement)> = Vec::new();

    let first = rng.gen_range(2..=3);
    for i in 0..first {
        let d = rng.gen_range(cfg.min_degree..=cfg.min_degree + 5);
        p.add_generator(Generator::filtered(format!("x{i}"), d, 1), LieElement::zero(d - 1))
            .unwrap();
        stage_of.push(1);
    }

    for stage in 2..=cfg.stages {
        let count = rng.gen_range(1..=3);
        for _ in 0..count {
            if p.len() >= cfg.max_generators {
                break;
            }
            let earlier: Vec<GenId> = (0..p.len() as GenId)
                .filter(|&g| stage_of[g as usize] < stage)
                .collect();
            let al = p.alphabet().clone();
            let cycles: Vec<GenId> = earlier
                .iter()
                .copied()
                .filter(|&g| p.differential(g).is_zero())
                .collect();
            let linear_sources: Vec<u32> = cycles
                .iter()
                .map(|&g| al.degree(g))
                .chain(
                    twins
                        .iter()
                        .filter(|(h, _)| stage_of[*h as usize] < stage)
                        .map(|(h, _)| al.degree(*h)),
                )
                .collect();
            let degree = if !linear_sources.is_empty() && rng.gen_bool(0.6) {
                linear_sources.choose(&mut rng).unwrap() + 1
            } else {
                rng.gen_range(cfg.min_degree..=cfg.max_degree)
            };
            if degree > cfg.max_degree {
                continue;
            }
            let spec = SpanSpec {
                letters: Some(earlier.clone()),
                min_weight: Some(2),
                max_weight: Some(3),
            };
            let trees = spanning_set_with(&al, degree, &spec);
            let boundaries: Vec<(LieElement, LieElement)> = trees
                .iter()
                .map(|t| {
                    let e = LieElement::from_tree(&al, t.clone());
                    (p.d(&e), e)
                })
                .filter(|(d, _)| !d.is_zero())
                .collect();

            let name = format!("x{}", p.len());
            if !boundaries.is_empty() && rng.gen_bool(0.35) {
                let (dt, t) = boundaries.choose(&mut rng).unwrap().clone();
                let id = p.add_generator(Generator::filtered(name, degree, stage), dt).unwrap();
                stage_of.push(stage);
                twins.push((id, t));
                continue;
            }

            let mut candidates: Vec<LieElement> = Vec::new();
            for &g in &cycles {
                if al.degree(g) + 1 == degree {
                    candidates.push(al.elem(g));
                }
            }
            for (h, t) in &twins {
                if stage_of[*h as usize] < stage && al.degree(*h) + 1 == degree {
                    candidates.push(&al.elem(*h) - t);
                }
            }
            for (i, &z1) in cycles.iter().enumerate() {
                for &z2 in &cycles[i..] {
                    if al.degree(z1) + al.degree(z2) + 1 == degree {
                        let b = al.elem(z1).bracket(&al.elem(z2));
                        if !b.is_zero() {
                            candidates.push(b);
                        }
                    }
                }
            }
            if let Some((dt, _)) = boundaries.choose(&mut rng) {
                candidates.push(dt.clone());
            }
            let mut d = LieElement::zero(degree - 1);
            for c in &candidates {
                if rng.gen_bool(0.7) {
                    let coeff = [-2i64, -1, 1, 2].choose(&mut rng).copied().unwrap();
                    d.add_scaled(&rat(coeff), c);
                }
            }
            if d.is_zero() {
                if let Some(c) = candidates.first() {
                    d = c.clone();
                }
            }
            let d = d.normalized(&al);
            p.add_generator(Generator::filtered(name, degree, stage), d).unwrap();
            stage_of.push(stage);
        }
    }
    p
}
