//! Deterministic set generators: arithmetic and geometric progressions,
//! integer lattices, seeded random Gaussian rationals, and seeded random
//! sector sets. Fixed parameters and seed always reproduce the same set,
//! and every generator avoids the zero element.

use num_traits::{Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rational::{rat, GaussianRational, Rational};
use crate::set::FiniteComplexSet;

/// Generator parameter blocks.
#[derive(Debug, Clone)]
pub enum Generator {
    Arithmetic {
        start: GaussianRational,
        step: GaussianRational,
        n: usize,
    },
    Geometric {
        start: GaussianRational,
        ratio: GaussianRational,
        n: usize,
    },
    ComplexLattice {
        width: usize,
        height: usize,
    },
    Random {
        n: usize,
        seed: u64,
    },
    RandomSector {
        n: usize,
        eps: Rational,
        seed: u64,
    },
}

pub fn generate(g: &Generator) -> Result<FiniteComplexSet> {
    match g {
        Generator::Arithmetic { start, step, n } => arithmetic(start, step, *n),
        Generator::Geometric { start, ratio, n } => geometric(start, ratio, *n),
        Generator::ComplexLattice { width, height } => lattice(*width, *height),
        Generator::Random { n, seed } => random(*n, *seed),
        Generator::RandomSector { n, eps, seed } => random_sector(*n, eps, *seed),
    }
}

fn arithmetic(start: &GaussianRational, step: &GaussianRational, n: usize) -> Result<FiniteComplexSet> {
    if n < 2 {
        return Err(Error::BadParams("need n >= 2".into()));
    }
    if step.is_zero() {
        return Err(Error::BadParams("step must be nonzero".into()));
    }
    let mut out = FiniteComplexSet::new();
    let mut cur = start.clone();
    for _ in 0..n {
        if cur.is_zero() {
            return Err(Error::BadParams("progression passes through zero".into()));
        }
        out.insert(cur.clone());
        cur = &cur + step;
    }
    Ok(out)
}

fn geometric(start: &GaussianRational, ratio: &GaussianRational, n: usize) -> Result<FiniteComplexSet> {
    if n < 2 {
        return Err(Error::BadParams("need n >= 2".into()));
    }
    if start.is_zero() || ratio.is_zero() {
        return Err(Error::BadParams("start and ratio must be nonzero".into()));
    }
    let mut out = FiniteComplexSet::new();
    let mut cur = start.clone();
    for _ in 0..n {
        out.insert(cur.clone());
        cur = &cur * ratio;
    }
    if out.len() != n {
        return Err(Error::BadParams("ratio collapses the progression".into()));
    }
    Ok(out)
}

fn lattice(width: usize, height: usize) -> Result<FiniteComplexSet> {
    if width < 1 || height < 1 || width * height < 2 {
        return Err(Error::BadParams("lattice needs at least 2 points".into()));
    }
    let mut out = FiniteComplexSet::new();
    for a in 1..=width {
        for b in 0..height {
            out.insert(GaussianRational::from_integers(a as i64, b as i64));
        }
    }
    Ok(out)
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    let numer = rng.gen_range(-30i64..=30);
    let denom = rng.gen_range(1i64..=6);
    rat(numer, denom)
}

fn random(n: usize, seed: u64) -> Result<FiniteComplexSet> {
    if n < 2 {
        return Err(Error::BadParams("need n >= 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = FiniteComplexSet::new();
    let mut attempts = 0;
    while out.len() < n {
        attempts += 1;
        if attempts > 10_000 * n {
            return Err(Error::BadParams("sample space exhausted".into()));
        }
        let z = GaussianRational::new(random_rational(&mut rng), random_rational(&mut rng));
        if z.is_zero() {
            continue;
        }
        out.insert(z);
    }
    Ok(out)
}

fn random_sector(n: usize, eps: &Rational, seed: u64) -> Result<FiniteComplexSet> {
    if n < 2 {
        return Err(Error::BadParams("need n >= 2".into()));
    }
    if !eps.is_positive() {
        return Err(Error::BadParams("epsilon must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = FiniteComplexSet::new();
    let mut attempts = 0;
    while out.len() < n {
        attempts += 1;
        if attempts > 10_000 * n {
            return Err(Error::BadParams("sample space exhausted".into()));
        }
        let re_num = rng.gen_range(1i64..=40);
        let re_den = rng.gen_range(1i64..=3);
        let re = rat(re_num, re_den);
        // slope t = im/re with |t| ≤ eps/4, comfortably inside the sector
        let t_num = rng.gen_range(-3i64..=3);
        let t_den = rng.gen_range(1i64..=4);
        let t = &(eps * &rat(t_num, 4 * t_den)) / &rat(3, 1);
        let im = &re * &t;
        let z = GaussianRational::new(re, im);
        debug_assert!(!z.is_zero());
        out.insert(z);
    }
    debug_assert!(out.sector_check(eps)?);
    Ok(out)
}

/// Parses a one-shot generator spec:
/// `ap:start,step,n` | `gp:start,ratio,n` | `lattice:w,h` | `random:n` |
/// `sector:n`, where start/step/ratio are rationals (`p/q` or integers).
/// Seed and epsilon come from the caller for the seeded kinds.
pub fn parse_generator_spec(s: &str, seed: u64, eps: &Rational) -> Result<Generator> {
    let bad = || Error::BadParams(format!("bad generator spec {s:?}"));
    let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
    let fields: Vec<&str> = rest.split(',').map(str::trim).collect();
    let real = |f: &str| -> Result<GaussianRational> {
        crate::rational::parse_rational(f)
            .map(|r| GaussianRational::new(r, Rational::zero()))
            .map_err(Error::BadParams)
    };
    let count = |f: &str| -> Result<usize> { f.parse().map_err(|_| bad()) };
    Ok(match (kind.trim(), fields.as_slice()) {
        ("ap", [start, step, n]) => Generator::Arithmetic {
            start: real(start)?,
            step: real(step)?,
            n: count(n)?,
        },
        ("gp", [start, ratio, n]) => Generator::Geometric {
            start: real(start)?,
            ratio: real(ratio)?,
            n: count(n)?,
        },
        ("lattice", [w, h]) => Generator::ComplexLattice {
            width: count(w)?,
            height: count(h)?,
        },
        ("random", [n]) => Generator::Random {
            n: count(n)?,
            seed,
        },
        ("sector", [n]) => Generator::RandomSector {
            n: count(n)?,
            eps: eps.clone(),
            seed,
        },
        _ => return Err(bad()),
    })
}

/// A family of sets for batch suites: a kind plus a size limit. Member `i`
/// of a family is fully determined by `(spec, i, seed)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilySpec {
    Ap { n_max: usize },
    Gp { n_max: usize },
    Random { n_max: usize },
    Sector { n_max: usize },
    Lattice { n_max: usize },
    /// Cycles through arithmetic, geometric, random and sector members.
    Mixed { n_max: usize },
}

impl FamilySpec {
    pub fn n_max(&self) -> usize {
        match *self {
            FamilySpec::Ap { n_max }
            | FamilySpec::Gp { n_max }
            | FamilySpec::Random { n_max }
            | FamilySpec::Sector { n_max }
            | FamilySpec::Lattice { n_max }
            | FamilySpec::Mixed { n_max } => n_max,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Ap { .. } => "ap",
            FamilySpec::Gp { .. } => "gp",
            FamilySpec::Random { .. } => "random",
            FamilySpec::Sector { .. } => "sector",
            FamilySpec::Lattice { .. } => "lattice",
            FamilySpec::Mixed { .. } => "mixed",
        }
    }
}

/// Parses `kind:n_max`, e.g. `ap:16`, `sector:12`, `mixed:16`.
pub fn parse_family_spec(s: &str) -> Result<FamilySpec> {
    let bad = || Error::BadParams(format!("bad family spec {s:?} (expected kind:n_max)"));
    let (kind, n_str) = s.split_once(':').ok_or_else(bad)?;
    let n_max: usize = n_str.trim().parse().map_err(|_| bad())?;
    if n_max < 2 {
        return Err(Error::BadParams("family needs n_max >= 2".into()));
    }
    Ok(match kind.trim() {
        "ap" => FamilySpec::Ap { n_max },
        "gp" => FamilySpec::Gp { n_max },
        "random" => FamilySpec::Random { n_max },
        "sector" => FamilySpec::Sector { n_max },
        "lattice" => FamilySpec::Lattice { n_max },
        "mixed" => FamilySpec::Mixed { n_max },
        _ => return Err(bad()),
    })
}

fn member_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index as u64)
}

fn member_size(n_max: usize, index: usize) -> usize {
    2 + index % (n_max - 1)
}

/// The `index`-th set of a family. Deterministic in `(spec, index, seed)`.
pub fn family_member(
    spec: FamilySpec,
    index: usize,
    seed: u64,
    eps: &Rational,
) -> Result<FiniteComplexSet> {
    let s = member_seed(seed, index);
    let mut rng = ChaCha8Rng::seed_from_u64(s);
    let n = member_size(spec.n_max(), index);
    match spec {
        FamilySpec::Ap { .. } => {
            let start = rat(rng.gen_range(1i64..=20), rng.gen_range(1i64..=4));
            let step = rat(rng.gen_range(1i64..=10), rng.gen_range(1i64..=4));
            generate(&Generator::Arithmetic {
                start: GaussianRational::new(start, Rational::zero()),
                step: GaussianRational::new(step, Rational::zero()),
                n,
            })
        }
        FamilySpec::Gp { .. } => {
            let start = rat(rng.gen_range(1i64..=6), 1);
            let ratio = match rng.gen_range(0u8..4) {
                0 => rat(2, 1),
                1 => rat(3, 1),
                2 => rat(3, 2),
                _ => rat(5, 2),
            };
            generate(&Generator::Geometric {
                start: GaussianRational::new(start, Rational::zero()),
                ratio: GaussianRational::new(ratio, Rational::zero()),
                n,
            })
        }
        FamilySpec::Random { .. } => generate(&Generator::Random { n, seed: s }),
        FamilySpec::Sector { .. } => generate(&Generator::RandomSector {
            n,
            eps: eps.clone(),
            seed: s,
        }),
        FamilySpec::Lattice { .. } => {
            let height = (1..=n).rev().find(|h| n.is_multiple_of(*h) && *h * *h <= n).unwrap_or(1);
            generate(&Generator::ComplexLattice {
                width: n / height,
                height,
            })
        }
        FamilySpec::Mixed { n_max } => {
            let inner = match index % 4 {
                0 => FamilySpec::Ap { n_max },
                1 => FamilySpec::Gp { n_max },
                2 => FamilySpec::Random { n_max },
                _ => FamilySpec::Sector { n_max },
            };
            family_member(inner, index, seed, eps)
        }
    }
}
