//! Seeded random generators for the three structured system families,
//! registered by name.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::measures::{DiscreteMeasure, Interval, MeasureSystem};
use crate::rational::{int, rat, Rational};

pub trait SystemFamily: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    /// Deterministic in `seed`.
    fn generate(&self, seed: u64) -> MeasureSystem;
}

/// `count` distinct points strictly inside `iv`, on a grid of `1/den` of its
/// length, with positive weights `k/m`, `1 <= k <= 9`, `1 <= m <= 4`.
fn random_atoms(rng: &mut ChaCha8Rng, iv: &Interval, count: usize, den: i64) -> Vec<(Rational, Rational)> {
    let mut ticks = BTreeSet::new();
    while ticks.len() < count {
        ticks.insert(rng.gen_range(1..den));
    }
    let len = &iv.hi - &iv.lo;
    ticks
        .into_iter()
        .map(|t| {
            let x = &iv.lo + &len * rat(t, den);
            (x, rat(rng.gen_range(1..=9), rng.gen_range(1..=4)))
        })
        .collect()
}

fn measure_on(rng: &mut ChaCha8Rng, iv: &Interval, count: usize) -> DiscreteMeasure {
    DiscreteMeasure::new(random_atoms(rng, iv, count, 32), Some(iv.clone())).expect("generated atoms are valid")
}

/// Consecutive intervals tiling `[-1, 1]`, adjacent ones touching.
pub struct AngelescoFamily;

impl SystemFamily for AngelescoFamily {
    fn name(&self) -> &'static str {
        "angelesco"
    }

    fn description(&self) -> &'static str {
        "r in 1..=3 measures on touching intervals tiling [-1, 1], 3 to 8 atoms each"
    }

    fn generate(&self, seed: u64) -> MeasureSystem {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = match rng.gen_range(0..10) {
            0 => 1,
            1..=6 => 2,
            _ => 3,
        };
        // breakpoints on a 1/8 grid, at least 1/4 apart
        let mut cuts = vec![int(-1)];
        let mut k = -8i64;
        for i in 1..r {
            let remaining = (r - i) as i64;
            let hi = 8 - 2 * remaining;
            k = rng.gen_range(k + 2..=hi);
            cuts.push(rat(k, 8));
        }
        cuts.push(int(1));
        let measures = (0..r)
            .map(|j| {
                let iv = Interval::new(cuts[j].clone(), cuts[j + 1].clone()).unwrap();
                let count = rng.gen_range(3..=8);
                measure_on(&mut rng, &iv, count)
            })
            .collect();
        MeasureSystem::angelesco(measures).expect("generated intervals are ordered")
    }
}

/// Cauchy-Vandermonde weights `1/(b_j - x)` over a base measure on `[0, 1]`.
pub struct AtCauchyFamily;

impl SystemFamily for AtCauchyFamily {
    fn name(&self) -> &'static str {
        "at"
    }

    fn description(&self) -> &'static str {
        "base measure on [0, 1] with 4 to 8 atoms, 2 or 3 poles on one side"
    }

    fn generate(&self, seed: u64) -> MeasureSystem {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gamma = Interval::new(int(0), int(1)).unwrap();
        let count = rng.gen_range(4..=8);
        let base = measure_on(&mut rng, &gamma, count);
        let r = rng.gen_range(2..=3);
        let above = rng.gen_bool(0.5);
        let mut ticks = BTreeSet::new();
        while ticks.len() < r {
            ticks.insert(rng.gen_range(1..=12i64));
        }
        let poles = ticks
            .into_iter()
            .map(|t| if above { int(1) + rat(t, 4) } else { -rat(t, 4) })
            .collect();
        MeasureSystem::at_cauchy(base, poles).expect("generated poles are valid")
    }
}

/// `(s_1, <s_1, s_2>)` with `s_1` on `[0, 1]` and `s_2` on `[2, 3]`.
pub struct NikishinFamily;

impl SystemFamily for NikishinFamily {
    fn name(&self) -> &'static str {
        "nikishin"
    }

    fn description(&self) -> &'static str {
        "s1 on [0, 1] with 5 to 8 atoms, s2 on [2, 3] with 3 to 8 atoms"
    }

    fn generate(&self, seed: u64) -> MeasureSystem {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g1 = Interval::new(int(0), int(1)).unwrap();
        let g2 = Interval::new(int(2), int(3)).unwrap();
        let n1 = rng.gen_range(5..=8);
        let n2 = rng.gen_range(3..=8);
        let s1 = measure_on(&mut rng, &g1, n1);
        let s2 = measure_on(&mut rng, &g2, n2);
        MeasureSystem::nikishin(vec![s1, s2]).expect("generated supports are disjoint")
    }
}

/// Families keyed by name.
#[derive(Clone)]
pub struct FamilyRegistry {
    families: BTreeMap<String, Arc<dyn SystemFamily>>,
}

impl FamilyRegistry {
    pub fn empty() -> Self {
        FamilyRegistry { families: BTreeMap::new() }
    }

    pub fn register(&mut self, family: Arc<dyn SystemFamily>) {
        self.families.insert(family.name().to_string(), family);
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn SystemFamily>> {
        self.families.get(name).cloned()
    }

    pub fn names(&self) -> Vec<&str> {
        self.families.keys().map(String::as_str).collect()
    }
}

impl Default for FamilyRegistry {
    fn default() -> Self {
        let mut reg = FamilyRegistry::empty();
        reg.register(Arc::new(AngelescoFamily));
        reg.register(Arc::new(AtCauchyFamily));
        reg.register(Arc::new(NikishinFamily));
        reg
    }
}
