//! End-to-end verification of the disjointness construction over a sector
//! set: build the ratio set, span it with an exact minimum spanning tree,
//! and check that
//!
//! 1. the open rhombi around distinct tree edges are pairwise disjoint
//!    (exact separating-axis test),
//! 2. every pairwise sum image `(y1+y2)/(x1+x2)` of realisations of an
//!    edge's two ratios lands in that edge's open meniscus (exact two-disc
//!    test),
//! 3. the map from realisation pairs to vector sums `(x1+x2, y1+y2)` is
//!    injective across all edges, and
//! 4. `|A+A|² ≥ Σ_{(l1,l2)∈T} n(l1) n(l2)`.
//!
//! A passing report is the expected outcome; any violation is collected
//! with exact coordinates so it can be persisted and replayed.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::{
    meniscus_inside_rhombus, rhombi_disjoint_open, rhombus_of_edge, sum_image, Meniscus,
    PlanarPoint, Rhombus,
};
use crate::error::{Error, Result};
use crate::geometry::mst::{euclidean_mst, verify_mst_properties, MstPropertyReport, SpanningTree};
use crate::rational::{GaussianRational, Rational};
use crate::set::FiniteComplexSet;

/// Which vertex set the spanning tree is built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClaimVertices {
    /// Every ratio in `A:A`.
    #[default]
    FullRatioSet,
    /// Only ratios whose line supports at least `|A|²/(2|A:A|)` points.
    PopularLines,
}

/// A sum image that escaped its meniscus, with everything needed to replay.
#[derive(Debug, Clone)]
pub struct MeniscusMiss {
    pub edge: (usize, usize),
    pub x1: GaussianRational,
    pub y1: GaussianRational,
    pub x2: GaussianRational,
    pub y2: GaussianRational,
    pub image: GaussianRational,
}

/// Full outcome of the construction over one set.
#[derive(Debug, Clone)]
pub struct ClaimReport {
    pub epsilon: Rational,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub mst: MstPropertyReport,
    /// Edge-index pairs whose open rhombi overlap.
    pub rhombus_overlaps: Vec<(usize, usize)>,
    /// Realisation sums that failed the exact meniscus membership.
    pub meniscus_misses: Vec<MeniscusMiss>,
    /// Vector sums hit by more than one realisation pair, rendered exactly.
    pub image_collisions: Vec<String>,
    /// `Σ_{(l1,l2)∈T} n(l1) n(l2)`.
    pub realisation_pairs: u128,
    /// `|A+A|²`.
    pub sumset_size_sq: u128,
    /// Sampled meniscus-inside-rhombus probes that landed outside.
    pub containment_failures: usize,
    pub containment_samples: usize,
}

impl ClaimReport {
    pub fn passes(&self) -> bool {
        self.mst.passes()
            && self.rhombus_overlaps.is_empty()
            && self.meniscus_misses.is_empty()
            && self.image_collisions.is_empty()
            && self.realisation_pairs <= self.sumset_size_sq
            && self.containment_failures == 0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "epsilon": crate::rational::format_rational(&self.epsilon),
            "vertex_count": self.vertex_count,
            "edge_count": self.edge_count,
            "mst": self.mst.to_json(),
            "rhombus_overlaps": self.rhombus_overlaps,
            "meniscus_misses": self.meniscus_misses.iter().map(|m| json!({
                "edge": m.edge,
                "x1": m.x1.to_string(),
                "y1": m.y1.to_string(),
                "x2": m.x2.to_string(),
                "y2": m.y2.to_string(),
                "image": m.image.to_string(),
            })).collect::<Vec<_>>(),
            "image_collisions": self.image_collisions,
            "realisation_pairs": self.realisation_pairs.to_string(),
            "sumset_size_sq": self.sumset_size_sq.to_string(),
            "count_bound_holds": self.realisation_pairs <= self.sumset_size_sq,
            "containment_failures": self.containment_failures,
            "containment_samples": self.containment_samples,
            "passes": self.passes(),
        })
    }
}

/// Groups the realisations of every ratio: `l ↦ [(x, y) : y/x = l]`.
fn ratio_realisations(
    a: &FiniteComplexSet,
) -> Result<BTreeMap<GaussianRational, Vec<(GaussianRational, GaussianRational)>>> {
    if a.contains_zero() {
        return Err(Error::ZeroElement);
    }
    let mut map: BTreeMap<GaussianRational, Vec<(GaussianRational, GaussianRational)>> =
        BTreeMap::new();
    for y in a.iter() {
        for x in a.iter() {
            let l = y.checked_div(x)?;
            map.entry(l).or_default().push((x.clone(), y.clone()));
        }
    }
    Ok(map)
}

const CONTAINMENT_SAMPLES_PER_EDGE: usize = 16;

/// Runs the whole construction for a sector set `A` at half-width `eps`.
///
/// Preconditions: `A` passes the sector test for `eps` (so `0 ∉ A+A`) and
/// the chosen vertex set has at least two ratios.
pub fn verify_claim(
    a: &FiniteComplexSet,
    eps: &Rational,
    vertices: ClaimVertices,
) -> Result<ClaimReport> {
    if !a.sector_check(eps)? {
        return Err(Error::SectorViolation);
    }
    let realisations = ratio_realisations(a)?;

    let chosen: Vec<(&GaussianRational, &Vec<(GaussianRational, GaussianRational)>)> =
        match vertices {
            ClaimVertices::FullRatioSet => realisations.iter().collect(),
            ClaimVertices::PopularLines => {
                let threshold = Rational::from_integer(((a.len() * a.len()) as u128).into())
                    / Rational::from_integer(((2 * realisations.len()) as u128).into());
                realisations
                    .iter()
                    .filter(|(_, r)| {
                        Rational::from_integer((r.len() as u128).into()) >= threshold
                    })
                    .collect()
            }
        };
    if chosen.len() < 2 {
        return Err(Error::BadParams(
            "need at least two ratio-set vertices".into(),
        ));
    }

    let points: Vec<PlanarPoint> = chosen
        .iter()
        .map(|(l, _)| PlanarPoint::from_complex(l))
        .collect();
    let tree: SpanningTree = euclidean_mst(&points)?;
    let mst_report = verify_mst_properties(&tree);

    // (1) pairwise disjointness of the open rhombi
    let rhombi: Vec<Rhombus> = tree
        .edges
        .iter()
        .map(|&(i, j)| rhombus_of_edge(&tree.vertices[i], &tree.vertices[j], eps))
        .collect::<Result<_>>()?;
    let mut rhombus_overlaps = Vec::new();
    for i in 0..rhombi.len() {
        for j in (i + 1)..rhombi.len() {
            if !rhombi_disjoint_open(&rhombi[i], &rhombi[j]) {
                rhombus_overlaps.push((i, j));
            }
        }
    }

    // (2)-(3) meniscus membership and global injectivity of the sum map
    let mut meniscus_misses = Vec::new();
    let mut image_collisions = Vec::new();
    let mut seen: BTreeMap<(GaussianRational, GaussianRational), (usize, usize)> = BTreeMap::new();
    let mut realisation_pairs: u128 = 0;
    let mut containment_failures = 0;
    let mut containment_samples = 0;
    for (edge_idx, &(i, j)) in tree.edges.iter().enumerate() {
        let (l1, reals1) = chosen[i];
        let (l2, reals2) = chosen[j];
        let meniscus = Meniscus::new(l1.clone(), l2.clone(), eps.clone())?;

        let sample = meniscus_inside_rhombus(&meniscus, &rhombi[edge_idx], CONTAINMENT_SAMPLES_PER_EDGE);
        containment_samples += sample.samples_tested;
        if !sample.all_inside {
            containment_failures += 1;
        }

        realisation_pairs += (reals1.len() as u128) * (reals2.len() as u128);
        for (x1, y1) in reals1.iter() {
            for (x2, y2) in reals2.iter() {
                let image = sum_image(x1, y1, x2, y2)?;
                if !meniscus.contains(&image) {
                    meniscus_misses.push(MeniscusMiss {
                        edge: (i, j),
                        x1: x1.clone(),
                        y1: y1.clone(),
                        x2: x2.clone(),
                        y2: y2.clone(),
                        image: image.clone(),
                    });
                }
                // injectivity key: the full vector sum (x1+x2, y1+y2) in C²
                let sx = x1 + x2;
                let sy = y1 + y2;
                if seen
                    .insert((sx.clone(), sy.clone()), (edge_idx, seen.len()))
                    .is_some()
                {
                    image_collisions.push(format!("sum ({sx}, {sy}) realised twice"));
                }
            }
        }
    }

    let sumset = a.sumset(a)?;
    let sumset_size_sq = (sumset.len() as u128) * (sumset.len() as u128);

    Ok(ClaimReport {
        epsilon: eps.clone(),
        vertex_count: chosen.len(),
        edge_count: tree.edges.len(),
        mst: mst_report,
        rhombus_overlaps,
        meniscus_misses,
        image_collisions,
        realisation_pairs,
        sumset_size_sq,
        containment_failures,
        containment_samples,
    })
}
