//! Exact point-line incidence machinery in the complex plane: lines in
//! slope-intercept form over Gaussian rationals, naive and hashed counting
//! paths (kept separate so they can be compared), rich-object extraction,
//! weighted line families with capping, dyadic popular-line selection, the
//! difference-indexed line family, and the finite-instance sum reports.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Signed;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::powcmp::le_coeff_log2;
use crate::rational::{format_rational, parse_rational, GaussianRational, Rational};
use crate::set::{FiniteComplexSet, SetOp};

/// A point of `C²`.
pub type PointC = (GaussianRational, GaussianRational);

/// A line in `C²` in canonical slope-intercept form, with a marker for
/// vertical lines. Two lines are equal iff they are the same point set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LineC {
    Slant {
        slope: GaussianRational,
        intercept: GaussianRational,
    },
    Vertical {
        x: GaussianRational,
    },
}

impl LineC {
    pub fn through_origin(slope: GaussianRational) -> Self {
        LineC::Slant {
            slope,
            intercept: GaussianRational::zero(),
        }
    }

    /// The translate of an origin line with this slope through `q`.
    pub fn through_point(slope: &GaussianRational, q: &PointC) -> Self {
        LineC::Slant {
            slope: slope.clone(),
            intercept: &q.1 - &(slope * &q.0),
        }
    }

    /// Exact membership.
    pub fn contains(&self, p: &PointC) -> bool {
        match self {
            LineC::Slant { slope, intercept } => p.1 == &(slope * &p.0) + intercept,
            LineC::Vertical { x } => &p.0 == x,
        }
    }
}

/// Incidence totals with per-object counts, aligned with the input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceCounts {
    pub total: u128,
    pub per_point: Vec<u64>,
    pub per_line: Vec<u64>,
}

/// The oracle path: a literal double loop over all point-line pairs.
pub fn incidences_naive(points: &[PointC], lines: &[LineC]) -> IncidenceCounts {
    let mut per_point = vec![0u64; points.len()];
    let mut per_line = vec![0u64; lines.len()];
    let mut total = 0u128;
    for (i, p) in points.iter().enumerate() {
        for (j, l) in lines.iter().enumerate() {
            if l.contains(p) {
                per_point[i] += 1;
                per_line[j] += 1;
                total += 1;
            }
        }
    }
    IncidenceCounts {
        total,
        per_point,
        per_line,
    }
}

/// Index of a line collection grouped by slope, for O(#slopes) membership
/// queries per point.
struct LineIndex<'a> {
    slants: BTreeMap<&'a GaussianRational, BTreeMap<&'a GaussianRational, Vec<usize>>>,
    verticals: BTreeMap<&'a GaussianRational, Vec<usize>>,
}

impl<'a> LineIndex<'a> {
    fn build(lines: &'a [LineC]) -> Self {
        let mut slants: BTreeMap<&GaussianRational, BTreeMap<&GaussianRational, Vec<usize>>> =
            BTreeMap::new();
        let mut verticals: BTreeMap<&GaussianRational, Vec<usize>> = BTreeMap::new();
        for (j, l) in lines.iter().enumerate() {
            match l {
                LineC::Slant { slope, intercept } => {
                    slants
                        .entry(slope)
                        .or_default()
                        .entry(intercept)
                        .or_default()
                        .push(j);
                }
                LineC::Vertical { x } => verticals.entry(x).or_default().push(j),
            }
        }
        LineIndex { slants, verticals }
    }

    /// Indices of all lines through `p`.
    fn lines_through(&self, p: &PointC) -> Vec<usize> {
        let mut hits = Vec::new();
        for (slope, by_intercept) in &self.slants {
            let c = &p.1 - &(*slope * &p.0);
            if let Some(idxs) = by_intercept.get(&c) {
                hits.extend_from_slice(idxs);
            }
        }
        if let Some(idxs) = self.verticals.get(&p.0) {
            hits.extend_from_slice(idxs);
        }
        hits
    }
}

/// The fast path: group lines by slope, then for each point look up the one
/// intercept that could match. Must agree with [`incidences_naive`] exactly.
pub fn incidences(points: &[PointC], lines: &[LineC]) -> IncidenceCounts {
    let index = LineIndex::build(lines);
    let mut per_point = vec![0u64; points.len()];
    let mut per_line = vec![0u64; lines.len()];
    let mut total = 0u128;
    for (i, p) in points.iter().enumerate() {
        for j in index.lines_through(p) {
            per_point[i] += 1;
            per_line[j] += 1;
            total += 1;
        }
    }
    IncidenceCounts {
        total,
        per_point,
        per_line,
    }
}

/// Points incident to at least `t` of the lines.
pub fn rich_points(points: &[PointC], lines: &[LineC], t: u64) -> Vec<PointC> {
    let counts = incidences(points, lines);
    points
        .iter()
        .zip(&counts.per_point)
        .filter(|(_, &c)| c >= t)
        .map(|(p, _)| p.clone())
        .collect()
}

/// Lines incident to at least `t` of the points.
pub fn rich_lines(points: &[PointC], lines: &[LineC], t: u64) -> Vec<LineC> {
    let counts = incidences(points, lines);
    lines
        .iter()
        .zip(&counts.per_line)
        .filter(|(_, &c)| c >= t)
        .map(|(l, _)| l.clone())
        .collect()
}

/// A finite family of lines with positive integer weights.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightedLineFamily {
    weights: BTreeMap<LineC, u64>,
    /// Cap applied to the weights, when any.
    pub cap: Option<u64>,
    /// `(|L|, |Q|)` of the translation that built the family, when known;
    /// `|Q|/|L|` is the square of the mean-weight pivot.
    pub source_sizes: Option<(usize, usize)>,
}

impl WeightedLineFamily {
    pub fn from_weights(weights: BTreeMap<LineC, u64>) -> Self {
        assert!(weights.values().all(|&w| w >= 1), "weights must be >= 1");
        WeightedLineFamily {
            weights,
            cap: None,
            source_sizes: None,
        }
    }

    pub fn unit_weights<I: IntoIterator<Item = LineC>>(lines: I) -> Self {
        let mut weights = BTreeMap::new();
        for l in lines {
            weights.entry(l).or_insert(1);
        }
        WeightedLineFamily {
            weights,
            cap: None,
            source_sizes: None,
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, l: &LineC) -> u64 {
        self.weights.get(l).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LineC, u64)> {
        self.weights.iter().map(|(l, &w)| (l, w))
    }

    pub fn lines(&self) -> Vec<LineC> {
        self.weights.keys().cloned().collect()
    }

    /// Total weight `W`.
    pub fn total_weight(&self) -> u128 {
        self.weights.values().map(|&w| w as u128).sum()
    }

    pub fn max_weight(&self) -> u64 {
        self.weights.values().copied().max().unwrap_or(0)
    }

    /// `|Q|/|L|`, the square of the mean-weight pivot, exact.
    pub fn mean_weight_sq(&self) -> Option<Rational> {
        self.source_sizes.map(|(l, q)| {
            Rational::from_integer((q as u128).into())
                / Rational::from_integer((l as u128).into())
        })
    }
}

/// Translates every origin line of slope `l ∈ slopes` to every point of
/// `q`, deduplicating coincident translates; the weight of a line is the
/// number of points of `q` on it.
pub fn translated_family(slopes: &[GaussianRational], q: &[PointC]) -> Result<WeightedLineFamily> {
    if slopes.is_empty() || q.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut weights: BTreeMap<LineC, u64> = BTreeMap::new();
    for slope in slopes {
        for point in q {
            *weights
                .entry(LineC::through_point(slope, point))
                .or_insert(0) += 1;
        }
    }
    let mut family = WeightedLineFamily::from_weights(weights);
    family.source_sizes = Some((slopes.len(), q.len()));
    Ok(family)
}

/// Replaces each weight by `min(weight, cap)` and records the cap. The
/// capped total never exceeds `|L||Q|` for a translated family.
pub fn cap_weights(family: &WeightedLineFamily, cap: u64) -> Result<WeightedLineFamily> {
    if cap < 1 {
        return Err(Error::BadParams("cap must be >= 1".into()));
    }
    let weights = family
        .iter()
        .map(|(l, w)| (l.clone(), w.min(cap)))
        .collect();
    let mut out = WeightedLineFamily::from_weights(weights);
    out.cap = Some(cap);
    out.source_sizes = family.source_sizes;
    if let Some((l, q)) = out.source_sizes {
        debug_assert!(out.total_weight() <= (l * q) as u128);
    }
    Ok(out)
}

/// `Σ m(l)` over incident point-line pairs.
pub fn weighted_incidences(points: &[PointC], family: &WeightedLineFamily) -> u128 {
    let lines: Vec<LineC> = family.lines();
    let index = LineIndex::build(&lines);
    let mut total = 0u128;
    for p in points {
        for j in index.lines_through(p) {
            total += family.weight(&lines[j]) as u128;
        }
    }
    total
}

/// A dyadic popular-line class over the ratio set: all origin lines whose
/// point count over `A × A` lies in `(N/2, N]`.
#[derive(Debug, Clone)]
pub struct PopularLineSelection {
    /// The dyadic level `N`.
    pub n_max: u64,
    /// Slopes of the selected lines.
    pub slopes: Vec<GaussianRational>,
    /// `|L| · N²`, the pigeonhole witness for this class.
    pub class_weight: u128,
    /// `Σ_{l ∈ L} n(l)²`, the multiplicative energy carried by the class.
    pub energy_contribution: u128,
    /// Certified verdict of `E_*(A) ≤ 2 |L| N² log2 |A|`; `None` when the
    /// certification could not separate the sides.
    pub pigeonhole_bound: Option<bool>,
}

fn dyadic_level(n: u64) -> u32 {
    // smallest j with n ≤ 2^j, i.e. n ∈ (2^(j-1), 2^j]
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

fn ratio_counts(a: &FiniteComplexSet) -> Result<Vec<(GaussianRational, u64)>> {
    if a.contains_zero() {
        return Err(Error::ZeroElement);
    }
    if a.len() < 2 {
        return Err(Error::BadParams("need |A| >= 2".into()));
    }
    Ok(a.representation_counts(a, SetOp::Ratio)?
        .iter()
        .map(|(l, n)| (l.clone(), n))
        .collect())
}

fn dyadic_classes(counts: &[(GaussianRational, u64)]) -> BTreeMap<u32, Vec<usize>> {
    let mut classes: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (idx, (_, n)) in counts.iter().enumerate() {
        classes.entry(dyadic_level(*n)).or_default().push(idx);
    }
    classes
}

fn selection_for_class(
    counts: &[(GaussianRational, u64)],
    level: u32,
    members: &[usize],
    mult_energy: u128,
    set_size: usize,
) -> PopularLineSelection {
    let n_max = 1u64 << level;
    let slopes: Vec<GaussianRational> = members.iter().map(|&i| counts[i].0.clone()).collect();
    let class_weight = (slopes.len() as u128) * (n_max as u128) * (n_max as u128);
    let energy_contribution = members
        .iter()
        .map(|&i| (counts[i].1 as u128) * (counts[i].1 as u128))
        .sum();
    let pigeonhole_bound = le_coeff_log2(
        &BigUint::from(mult_energy),
        &BigUint::from(2u128 * class_weight),
        set_size as u64,
    );
    PopularLineSelection {
        n_max,
        slopes,
        class_weight,
        energy_contribution,
        pigeonhole_bound,
    }
}

/// Product-case popular lines: the dyadic class maximizing `|L| N²` (ties to
/// the smaller `N`), which the pigeonhole argument guarantees satisfies
/// `|L| N² ≥ E_*(A) / (2 log2 |A|)`.
pub fn popular_lines(a: &FiniteComplexSet) -> Result<PopularLineSelection> {
    let counts = ratio_counts(a)?;
    let mult_energy: u128 = counts
        .iter()
        .map(|(_, n)| (*n as u128) * (*n as u128))
        .sum();
    let classes = dyadic_classes(&counts);
    let mut best: Option<PopularLineSelection> = None;
    for (&level, members) in &classes {
        let cand = selection_for_class(&counts, level, members, mult_energy, a.len());
        let better = match &best {
            None => true,
            Some(b) => {
                cand.class_weight > b.class_weight
                    || (cand.class_weight == b.class_weight && cand.n_max < b.n_max)
            }
        };
        if better {
            best = Some(cand);
        }
    }
    Ok(best.expect("nonempty ratio set"))
}

/// Ratio-case popular lines: every origin line supporting at least
/// `|A|²/(2|A:A|)` points of `A × A`, together with the total number of
/// points they support (always at least `|A|²/2`).
#[derive(Debug, Clone)]
pub struct RatioPopularSelection {
    pub threshold: Rational,
    pub slopes: Vec<GaussianRational>,
    pub supported_points: u128,
}

pub fn popular_lines_ratio(a: &FiniteComplexSet) -> Result<RatioPopularSelection> {
    let counts = ratio_counts(a)?;
    let threshold = Rational::from_integer(((a.len() * a.len()) as u128).into())
        / Rational::from_integer((2 * counts.len() as u128).into());
    let mut slopes = Vec::new();
    let mut supported: u128 = 0;
    for (l, n) in &counts {
        if Rational::from_integer((*n as u128).into()) >= threshold {
            slopes.push(l.clone());
            supported += *n as u128;
        }
    }
    Ok(RatioPopularSelection {
        threshold,
        slopes,
        supported_points: supported,
    })
}

/// Default cap constant for [`select_popular_with_n_bound`]: never observed
/// to come back empty on the tested families.
pub const DEFAULT_CAP_CONSTANT: i64 = 4;

/// Popular-line selection restricted to dyadic classes with
/// `N ≤ c · |A-A|² |A·A| / |A|³`; reports the smallest cap constant that
/// admits the class it returns.
#[derive(Debug, Clone)]
pub struct CappedSelection {
    pub selection: PopularLineSelection,
    /// `N |A|³ / (|A-A|² |A·A|)` for the chosen class: the smallest cap
    /// constant under which it is admissible.
    pub observed_min_c: Rational,
}

pub fn select_popular_with_n_bound(a: &FiniteComplexSet, c: &Rational) -> Result<CappedSelection> {
    if !c.is_positive() {
        return Err(Error::BadParams("cap constant must be positive".into()));
    }
    let counts = ratio_counts(a)?;
    let mult_energy: u128 = counts
        .iter()
        .map(|(_, n)| (*n as u128) * (*n as u128))
        .sum();
    let diff_size = a.difference_set(a)?.len() as u128;
    let prod_size = a.product_set(a)?.len() as u128;
    let a_cubed = (a.len() as u128).pow(3);
    // admissibility: N ≤ c · |A-A|²|A·A|/|A|³
    let scale = Rational::from_integer((diff_size * diff_size * prod_size).into())
        / Rational::from_integer(a_cubed.into());
    let cap = c * &scale;

    let classes = dyadic_classes(&counts);
    let mut best: Option<PopularLineSelection> = None;
    let mut smallest_feasible_n: Option<u64> = None;
    for (&level, members) in &classes {
        let cand = selection_for_class(&counts, level, members, mult_energy, a.len());
        if cand.pigeonhole_bound != Some(true) {
            continue;
        }
        if smallest_feasible_n.is_none_or(|n| cand.n_max < n) {
            smallest_feasible_n = Some(cand.n_max);
        }
        if Rational::from_integer((cand.n_max as u128).into()) > cap {
            continue;
        }
        let better = match &best {
            None => true,
            Some(b) => {
                cand.class_weight > b.class_weight
                    || (cand.class_weight == b.class_weight && cand.n_max < b.n_max)
            }
        };
        if better {
            best = Some(cand);
        }
    }
    match best {
        Some(selection) => {
            let observed_min_c = Rational::from_integer((selection.n_max as u128).into()) / &scale;
            Ok(CappedSelection {
                selection,
                observed_min_c,
            })
        }
        None => {
            let required_c = smallest_feasible_n
                .map(|n| Rational::from_integer((n as u128).into()) / &scale)
                .map(|r| format_rational(&r))
                .unwrap_or_else(|| "unbounded".into());
            Err(Error::NoAdmissibleClass { required_c })
        }
    }
}

/// The difference-indexed line family `y = (d + x)/a` for
/// `(d, a) ∈ (A-A) × A`: `|A-A||A|` pairwise distinct lines.
pub fn difference_indexed_family(a: &FiniteComplexSet) -> Result<WeightedLineFamily> {
    if a.contains_zero() {
        return Err(Error::ZeroElement);
    }
    let diff = a.difference_set(a)?;
    let mut lines = Vec::new();
    for d in diff.iter() {
        for denom in a.iter() {
            // slope 1/a, intercept d/a; distinct pairs give distinct lines
            let slope = GaussianRational::one().checked_div(denom)?;
            let intercept = d.checked_div(denom)?;
            lines.push(LineC::Slant { slope, intercept });
        }
    }
    let family = WeightedLineFamily::unit_weights(lines);
    debug_assert_eq!(family.len(), diff.len() * a.len());
    Ok(family)
}

/// Containment report for the difference-indexed family: every point of
/// `A × L_t` (ratios with at least `t` realisations) must be `t`-rich.
#[derive(Debug, Clone)]
pub struct DifferenceFamilyContainment {
    pub t: u64,
    pub grid_points: usize,
    pub rich_ok: bool,
    /// Points of `A × L_t` incident to fewer than `t` family lines.
    pub failures: Vec<PointC>,
}

pub fn difference_family_containment(a: &FiniteComplexSet, t: u64) -> Result<DifferenceFamilyContainment> {
    if t < 1 {
        return Err(Error::BadParams("t must be >= 1".into()));
    }
    let counts = ratio_counts(a)?;
    let family = difference_indexed_family(a)?;
    let lines = family.lines();
    let rich_slopes: Vec<&GaussianRational> = counts
        .iter()
        .filter(|(_, n)| *n >= t)
        .map(|(l, _)| l)
        .collect();
    let points: Vec<PointC> = a
        .iter()
        .flat_map(|x| rich_slopes.iter().map(move |l| (x.clone(), (*l).clone())))
        .collect();
    let incidence = incidences(&points, &lines);
    let mut failures = Vec::new();
    for (p, &count) in points.iter().zip(&incidence.per_point) {
        if count < t {
            failures.push(p.clone());
        }
    }
    Ok(DifferenceFamilyContainment {
        t,
        grid_points: points.len(),
        rich_ok: failures.is_empty(),
        failures,
    })
}

/// All pairwise intersection points of the family, each with the summed
/// weight `m(x)` of every family line through it.
pub fn intersection_points(family: &WeightedLineFamily) -> Result<BTreeMap<PointC, u128>> {
    if family.len() < 2 {
        return Err(Error::BadParams("need at least 2 lines".into()));
    }
    let lines = family.lines();
    let mut points: Vec<PointC> = Vec::new();
    for i in 0..lines.len() {
        for j in (i + 1)..lines.len() {
            if let Some(p) = line_pair_intersection(&lines[i], &lines[j]) {
                points.push(p);
            }
        }
    }
    points.sort();
    points.dedup();
    let index = LineIndex::build(&lines);
    let mut out = BTreeMap::new();
    for p in points {
        let m: u128 = index
            .lines_through(&p)
            .into_iter()
            .map(|j| family.weight(&lines[j]) as u128)
            .sum();
        out.insert(p, m);
    }
    Ok(out)
}

fn line_pair_intersection(a: &LineC, b: &LineC) -> Option<PointC> {
    match (a, b) {
        (
            LineC::Slant {
                slope: s1,
                intercept: c1,
            },
            LineC::Slant {
                slope: s2,
                intercept: c2,
            },
        ) => {
            if s1 == s2 {
                return None; // parallel or identical
            }
            let x = (c2 - c1).checked_div(&(s1 - s2)).expect("slopes differ");
            let y = &(s1 * &x) + c1;
            Some((x, y))
        }
        (LineC::Slant { slope, intercept }, LineC::Vertical { x })
        | (LineC::Vertical { x }, LineC::Slant { slope, intercept }) => {
            let y = &(slope * x) + intercept;
            Some((x.clone(), y))
        }
        (LineC::Vertical { .. }, LineC::Vertical { .. }) => None,
    }
}

/// A translated-and-capped line system ready for the sum reports.
#[derive(Debug, Clone)]
pub struct TranslatedSystem {
    pub slopes: Vec<GaussianRational>,
    pub q: Vec<PointC>,
    pub family: WeightedLineFamily,
    /// The cap `N` applied to the weights.
    pub n_cap: u64,
}

pub fn build_translated_system(
    slopes: &[GaussianRational],
    q: &[PointC],
    n_cap: u64,
) -> Result<TranslatedSystem> {
    let family = cap_weights(&translated_family(slopes, q)?, n_cap)?;
    Ok(TranslatedSystem {
        slopes: slopes.to_vec(),
        q: q.to_vec(),
        family,
        n_cap,
    })
}

/// Exact contracts plus the report-only rich-sum tail for `P + Q` over a
/// translated system.
#[derive(Debug, Clone)]
pub struct RichSumReport {
    pub t: u64,
    /// `|{x ∈ P+Q : n(x) ≥ t}|`.
    pub rich_count: u128,
    /// `(|L|^{3/2}|Q|^{5/2}/t³)²`, kept squared so it stays rational.
    pub bound_quantity_sq: Rational,
    /// Violations of `n(x) ≤ m(x)`; exact, must be zero.
    pub nmx_violations: usize,
    /// Points of `P+Q` on no family line; must be zero.
    pub off_family_points: usize,
    /// Points with `n(x) > N` on fewer than two lines; must be zero.
    pub over_cap_single_line: usize,
    /// Largest number of family lines through any point of `P+Q`.
    pub max_point_multiplicity: u64,
    pub distinct_sums: usize,
}

impl RichSumReport {
    pub fn contracts_hold(&self) -> bool {
        self.nmx_violations == 0 && self.off_family_points == 0 && self.over_cap_single_line == 0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "t": self.t,
            "rich_count": self.rich_count.to_string(),
            "bound_quantity_sq": format_rational(&self.bound_quantity_sq),
            "nmx_violations": self.nmx_violations,
            "off_family_points": self.off_family_points,
            "over_cap_single_line": self.over_cap_single_line,
            "max_point_multiplicity": self.max_point_multiplicity,
            "distinct_sums": self.distinct_sums,
            "contracts_hold": self.contracts_hold(),
        })
    }
}

/// Builds `P + Q`, checks `n(x) ≤ m(x)` and the structural contracts for
/// every sum, and tabulates the `t`-rich count against the inverse-cube
/// quantity (report only; the bound itself is asymptotic).
pub fn rich_sum_report(sys: &TranslatedSystem, p: &[PointC], t: u64) -> Result<RichSumReport> {
    if sys.q.len() < p.len() {
        return Err(Error::BadParams("need |Q| >= |P|".into()));
    }
    if t < 1 {
        return Err(Error::BadParams("t must be >= 1".into()));
    }
    let mut sums: BTreeMap<PointC, u64> = BTreeMap::new();
    for pp in p {
        for qq in &sys.q {
            let x = (&pp.0 + &qq.0, &pp.1 + &qq.1);
            *sums.entry(x).or_insert(0) += 1;
        }
    }
    let lines = sys.family.lines();
    let index = LineIndex::build(&lines);
    let mut nmx_violations = 0;
    let mut off_family_points = 0;
    let mut over_cap_single_line = 0;
    let mut max_mult = 0u64;
    let mut rich_count = 0u128;
    for (x, &n_x) in &sums {
        let through = index.lines_through(x);
        let m_x: u128 = through
            .iter()
            .map(|&j| sys.family.weight(&lines[j]) as u128)
            .sum();
        let mult = through.len() as u64;
        max_mult = max_mult.max(mult);
        if mult == 0 {
            off_family_points += 1;
        }
        if (n_x as u128) > m_x {
            nmx_violations += 1;
        }
        if n_x > sys.n_cap && mult < 2 {
            over_cap_single_line += 1;
        }
        if n_x >= t {
            rich_count += 1;
        }
    }
    let l = sys.slopes.len() as u128;
    let q = sys.q.len() as u128;
    let bound_quantity_sq = Rational::from_integer((l.pow(3)).into())
        * Rational::from_integer((q.pow(5)).into())
        / Rational::from_integer(((t as u128).pow(6)).into());
    Ok(RichSumReport {
        t,
        rich_count,
        bound_quantity_sq,
        nmx_violations,
        off_family_points,
        over_cap_single_line,
        max_point_multiplicity: max_mult,
        distinct_sums: sums.len(),
    })
}

/// CSV with columns `(t, count, bound_quantity, ratio)`: the `t`-rich sum
/// count against `|L|^{3/2}|Q|^{5/2}/t³` and their quotient, decimals
/// rendered from the exact squared quantities.
pub fn rich_sum_csv(reports: &[RichSumReport]) -> String {
    use crate::report::sqrt_decimal;
    let mut out = String::from("t,count,bound_quantity,ratio\n");
    for r in reports {
        let count_sq = Rational::from_integer((r.rich_count * r.rich_count).into());
        let ratio_sq = count_sq / &r.bound_quantity_sq;
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.t,
            r.rich_count,
            sqrt_decimal(&r.bound_quantity_sq, 12),
            sqrt_decimal(&ratio_sq, 12),
        ));
    }
    out
}

/// One row of the dyadic weight-distribution table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightRow {
    pub t: u64,
    /// `|L_t| = |{l : m(l) ≥ t}|`.
    pub line_count: u64,
    /// `W(L_t)`, total weight on those lines.
    pub total_weight: u128,
}

/// Tabulates `|L_t|` and `W(L_t)` for dyadic `t`, plus observed log-log
/// slopes between consecutive rows. Report only; nothing is asserted.
#[derive(Debug, Clone)]
pub struct WeightDistributionReport {
    pub rows: Vec<WeightRow>,
    /// `log2(count(2t)/count(t))` per consecutive row pair (empty rows skipped).
    pub count_slopes: Vec<f64>,
}

impl WeightDistributionReport {
    /// CSV with columns `(t, count, bound_quantity, ratio)`, where the bound
    /// quantity is the inverse-cube reference `|Q|²/t³`. Requires the family
    /// to have come from a translation so `|Q|` is known; the bound columns
    /// stay empty otherwise.
    pub fn to_csv(&self, q_size: Option<usize>) -> String {
        use crate::report::rational_decimal;
        let mut out = String::from("t,count,bound_quantity,ratio\n");
        for row in &self.rows {
            match q_size {
                Some(q) => {
                    let t3 = (row.t as u128).pow(3);
                    let bound = Rational::from_integer(((q * q) as u128).into())
                        / Rational::from_integer(t3.into());
                    let ratio = Rational::from_integer((row.line_count as u128).into()) / &bound;
                    out.push_str(&format!(
                        "{},{},{},{}\n",
                        row.t,
                        row.line_count,
                        rational_decimal(&bound, 12),
                        rational_decimal(&ratio, 12),
                    ));
                }
                None => {
                    out.push_str(&format!("{},{},,\n", row.t, row.line_count));
                }
            }
        }
        out
    }
}

pub fn weight_distribution_report(family: &WeightedLineFamily) -> WeightDistributionReport {
    let max_w = family.max_weight();
    let mut rows = Vec::new();
    let mut t = 1u64;
    loop {
        let mut line_count = 0u64;
        let mut total_weight = 0u128;
        for (_, w) in family.iter() {
            if w >= t {
                line_count += 1;
                total_weight += w as u128;
            }
        }
        rows.push(WeightRow {
            t,
            line_count,
            total_weight,
        });
        if t > max_w {
            break;
        }
        t = t.saturating_mul(2);
    }
    let mut count_slopes = Vec::new();
    for pair in rows.windows(2) {
        if pair[0].line_count > 0 && pair[1].line_count > 0 {
            count_slopes.push((pair[1].line_count as f64 / pair[0].line_count as f64).log2());
        }
    }
    WeightDistributionReport { rows, count_slopes }
}

/// Points of `A × A` lying on origin lines with the given slopes.
pub fn points_on_slopes(a: &FiniteComplexSet, slopes: &[GaussianRational]) -> Vec<PointC> {
    let slope_set: std::collections::BTreeSet<&GaussianRational> = slopes.iter().collect();
    let mut out = Vec::new();
    for x in a.iter() {
        for y in a.iter() {
            if let Ok(l) = y.checked_div(x) {
                if slope_set.contains(&l) {
                    out.push((x.clone(), y.clone()));
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Renders the line-family file format: one record per line,
/// `slope_re slope_im intercept_re intercept_im weight`, or
/// `V x_re x_im weight` for verticals.
pub fn render_family(family: &WeightedLineFamily) -> String {
    let mut out = String::new();
    for (l, w) in family.iter() {
        match l {
            LineC::Slant { slope, intercept } => {
                out.push_str(&format!(
                    "{} {} {} {} {}\n",
                    format_rational(slope.re()),
                    format_rational(slope.im()),
                    format_rational(intercept.re()),
                    format_rational(intercept.im()),
                    w
                ));
            }
            LineC::Vertical { x } => {
                out.push_str(&format!(
                    "V {} {} {}\n",
                    format_rational(x.re()),
                    format_rational(x.im()),
                    w
                ));
            }
        }
    }
    out
}

pub fn parse_family(text: &str) -> Result<WeightedLineFamily> {
    let mut weights = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = match raw.split_once('#') {
            Some((before, _)) => before,
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: idx + 1, msg };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let (record, weight_str) = if fields.first() == Some(&"V") {
            if fields.len() != 4 {
                return Err(err(format!("expected `V x_re x_im weight`, got {line:?}")));
            }
            let x = GaussianRational::new(
                parse_rational(fields[1]).map_err(&err)?,
                parse_rational(fields[2]).map_err(&err)?,
            );
            (LineC::Vertical { x }, fields[3])
        } else {
            if fields.len() != 5 {
                return Err(err(format!(
                    "expected `slope_re slope_im intercept_re intercept_im weight`, got {line:?}"
                )));
            }
            let slope = GaussianRational::new(
                parse_rational(fields[0]).map_err(&err)?,
                parse_rational(fields[1]).map_err(&err)?,
            );
            let intercept = GaussianRational::new(
                parse_rational(fields[2]).map_err(&err)?,
                parse_rational(fields[3]).map_err(&err)?,
            );
            (LineC::Slant { slope, intercept }, fields[4])
        };
        let weight: u64 = weight_str
            .parse()
            .map_err(|e| err(format!("bad weight {weight_str:?}: {e}")))?;
        if weight == 0 {
            return Err(err("weight must be >= 1".into()));
        }
        weights.insert(record, weight);
    }
    Ok(WeightedLineFamily::from_weights(weights))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn gp(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_integers(re, im)
    }

    fn real_point(x: i64, y: i64) -> PointC {
        (gp(x, 0), gp(y, 0))
    }

    fn grid_3x3() -> (Vec<PointC>, Vec<LineC>) {
        let mut points = Vec::new();
        for x in 0..3 {
            for y in 0..3 {
                points.push(real_point(x, y));
            }
        }
        let mut lines = Vec::new();
        for c in 0..3 {
            lines.push(LineC::Slant {
                slope: GaussianRational::zero(),
                intercept: gp(c, 0),
            });
            lines.push(LineC::Vertical { x: gp(c, 0) });
        }
        (points, lines)
    }

    #[test]
    fn incidence_examples() {
        let points = vec![real_point(0, 0), real_point(1, 1)];
        let lines = vec![
            LineC::through_origin(GaussianRational::one()),
            LineC::Slant {
                slope: GaussianRational::zero(),
                intercept: GaussianRational::zero(),
            },
        ];
        assert_eq!(incidences(&points, &lines).total, 3);

        let (points, lines) = grid_3x3();
        let counts = incidences(&points, &lines);
        assert_eq!(counts.total, 18);
        assert!(counts.per_point.iter().all(|&c| c == 2));

        // n points on one line
        let diag = LineC::through_origin(GaussianRational::one());
        let pts: Vec<PointC> = (0..7).map(|k| real_point(k, k)).collect();
        assert_eq!(incidences(&pts, &[diag]).total, 7);
    }

    #[test]
    fn fast_path_equals_naive_path() {
        let (points, lines) = grid_3x3();
        assert_eq!(
            incidences(&points, &lines),
            incidences_naive(&points, &lines)
        );

        // complex slopes and verticals mixed
        let points: Vec<PointC> = (0..20)
            .map(|k| (gp(k % 5, k % 3), gp((k * k) % 7, k % 2)))
            .collect();
        let mut lines: Vec<LineC> = (0..15)
            .map(|k| LineC::Slant {
                slope: gp(k % 4, (k + 1) % 3),
                intercept: gp(k % 3, k % 5),
            })
            .collect();
        lines.push(LineC::Vertical { x: gp(1, 0) });
        lines.push(LineC::Vertical { x: gp(3, 1) });
        assert_eq!(
            incidences(&points, &lines),
            incidences_naive(&points, &lines)
        );
    }

    #[test]
    fn rich_object_extraction() {
        let (points, lines) = grid_3x3();
        assert_eq!(rich_points(&points, &lines, 1).len(), 9);
        assert_eq!(rich_points(&points, &lines, 2).len(), 9);
        assert_eq!(rich_points(&points, &lines, 3).len(), 0);
        assert_eq!(rich_lines(&points, &lines, 3).len(), 6);
        // t above the line count empties the selection
        assert_eq!(rich_points(&points, &lines, 7).len(), 0);
    }

    #[test]
    fn weighted_incidences_examples() {
        let (points, lines) = grid_3x3();
        let unit = WeightedLineFamily::unit_weights(lines.clone());
        assert_eq!(
            weighted_incidences(&points, &unit),
            incidences(&points, &lines).total
        );

        // horizontals weight 2, verticals weight 1: 9·2 + 9·1 = 27
        let mut weights = BTreeMap::new();
        for l in &lines {
            let w = match l {
                LineC::Slant { .. } => 2,
                LineC::Vertical { .. } => 1,
            };
            weights.insert(l.clone(), w);
        }
        let family = WeightedLineFamily::from_weights(weights);
        assert_eq!(weighted_incidences(&points, &family), 27);

        // one line of weight 5 through 3 points
        let line = LineC::through_origin(GaussianRational::one());
        let mut weights = BTreeMap::new();
        weights.insert(line, 5);
        let family = WeightedLineFamily::from_weights(weights);
        let pts = vec![real_point(0, 0), real_point(1, 1), real_point(2, 2)];
        assert_eq!(weighted_incidences(&pts, &family), 15);
    }

    #[test]
    fn translated_family_examples() {
        let slope = GaussianRational::one();
        // two distinct translates
        let fam =
            translated_family(std::slice::from_ref(&slope), &[real_point(0, 0), real_point(1, 0)]).unwrap();
        assert_eq!(fam.len(), 2);
        assert!(fam.iter().all(|(_, w)| w == 1));
        assert_eq!(fam.total_weight(), 2);

        // collinear translates merge with weight 2
        let fam =
            translated_family(std::slice::from_ref(&slope), &[real_point(0, 0), real_point(1, 1)]).unwrap();
        assert_eq!(fam.len(), 1);
        assert_eq!(fam.max_weight(), 2);

        // singleton Q keeps |L| lines
        let slopes = vec![gp(1, 0), gp(2, 0), gp(0, 1)];
        let fam = translated_family(&slopes, &[real_point(3, 4)]).unwrap();
        assert_eq!(fam.len(), 3);
        assert_eq!(fam.mean_weight_sq(), Some(rat(1, 3)));
    }

    #[test]
    fn weight_capping() {
        let line = LineC::through_origin(gp(2, 0));
        let mut weights = BTreeMap::new();
        weights.insert(line.clone(), 5);
        let fam = WeightedLineFamily::from_weights(weights);
        assert_eq!(cap_weights(&fam, 3).unwrap().weight(&line), 3);
        assert_eq!(cap_weights(&fam, 7).unwrap().weight(&line), 5);
        let all_one = cap_weights(&fam, 1).unwrap();
        assert_eq!(all_one.total_weight(), all_one.len() as u128);
    }

    #[test]
    fn dyadic_levels() {
        assert_eq!(dyadic_level(1), 0);
        assert_eq!(dyadic_level(2), 1);
        assert_eq!(dyadic_level(3), 2);
        assert_eq!(dyadic_level(4), 2);
        assert_eq!(dyadic_level(5), 3);
        assert_eq!(dyadic_level(8), 3);
        assert_eq!(dyadic_level(9), 4);
    }

    #[test]
    fn popular_lines_gp_example() {
        // {1,2,4}: classes (N=1,|L|=2),(N=2,|L|=2),(N=4,|L|=1); max |L|N² at N=4
        let a = FiniteComplexSet::from_reals(&[1, 2, 4]);
        let sel = popular_lines(&a).unwrap();
        assert_eq!(sel.n_max, 4);
        assert_eq!(sel.slopes, vec![GaussianRational::one()]);
        assert_eq!(sel.class_weight, 16);
        assert_eq!(sel.pigeonhole_bound, Some(true));
    }

    #[test]
    fn popular_lines_pair_example() {
        let a = FiniteComplexSet::from_reals(&[1, 2]);
        let sel = popular_lines(&a).unwrap();
        assert_eq!(sel.n_max, 2);
        assert_eq!(sel.class_weight, 4);
        assert_eq!(sel.pigeonhole_bound, Some(true));

        // dilation invariance
        let b = FiniteComplexSet::from_reals(&[3, 6]);
        let sel_b = popular_lines(&b).unwrap();
        assert_eq!(sel_b.n_max, sel.n_max);
        assert_eq!(sel_b.slopes, sel.slopes);
    }

    #[test]
    fn ratio_case_popular_lines() {
        let a = FiniteComplexSet::from_reals(&[1, 2]);
        let sel = popular_lines_ratio(&a).unwrap();
        assert_eq!(sel.threshold, rat(2, 3));
        assert_eq!(sel.slopes.len(), 3);
        assert_eq!(sel.supported_points, 4);

        // |P| ≥ |A|²/2 and |A|/2 ≤ |L| ≤ |A:A|, every line carries ≤ |A| points
        for set in [
            FiniteComplexSet::from_reals(&[1, 2]),
            FiniteComplexSet::from_reals(&[1, 2, 3, 4, 5]),
            FiniteComplexSet::from_reals(&[1, 2, 4, 8]),
            FiniteComplexSet::from_integer_pairs(&[(1, 1), (2, -1), (3, 2), (5, 0)]),
        ] {
            let sel = popular_lines_ratio(&set).unwrap();
            let n = set.len();
            assert!(
                Rational::from_integer(sel.supported_points.into()) >= rat((n * n) as i64, 2)
            );
            assert!(2 * sel.slopes.len() >= n);
            assert!(sel.slopes.len() <= set.ratio_set(&set).unwrap().len());
        }
    }

    #[test]
    fn capped_selection_reports_constant() {
        let ap = FiniteComplexSet::from_reals(&[1, 2, 3, 4, 5, 6, 7, 8]);
        let got = select_popular_with_n_bound(&ap, &rat_int(1)).unwrap();
        assert!(got.selection.pigeonhole_bound == Some(true));
        assert!(got.observed_min_c <= rat_int(1));

        let gp_set = FiniteComplexSet::from_reals(&[1, 2, 4, 8]);
        let got = select_popular_with_n_bound(&gp_set, &rat_int(4)).unwrap();
        assert!(got.observed_min_c.is_positive());
    }

    #[test]
    fn difference_indexed_family_examples() {
        let a = FiniteComplexSet::from_reals(&[1, 2]);
        let fam = difference_indexed_family(&a).unwrap();
        // 3 differences × 2 denominators
        assert_eq!(fam.len(), 6);

        // the point (1, 1): slope l = 1 has n(l) = 2, so ≥ 2 family lines
        let pt = (GaussianRational::one(), GaussianRational::one());
        let lines = fam.lines();
        let hits = lines.iter().filter(|l| l.contains(&pt)).count();
        assert!(hits >= 2, "got {hits}");

        let single = FiniteComplexSet::from_reals(&[5]);
        assert_eq!(difference_indexed_family(&single).unwrap().len(), 1);
    }

    #[test]
    fn difference_family_containment_holds() {
        let a = FiniteComplexSet::from_reals(&[1, 2, 3, 5]);
        for t in [1, 2, 4] {
            let report = difference_family_containment(&a, t).unwrap();
            assert!(report.rich_ok, "t={t}: {:?}", report.failures);
        }
    }

    #[test]
    fn intersection_point_examples() {
        // {y=x, y=-x} meet only at the origin with m = 2
        let fam = WeightedLineFamily::unit_weights(vec![
            LineC::through_origin(gp(1, 0)),
            LineC::through_origin(gp(-1, 0)),
        ]);
        let pts = intersection_points(&fam).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(
            pts[&(GaussianRational::zero(), GaussianRational::zero())],
            2
        );

        // parallel lines: no intersections
        let fam = WeightedLineFamily::unit_weights(vec![
            LineC::Slant {
                slope: gp(1, 0),
                intercept: gp(0, 0),
            },
            LineC::Slant {
                slope: gp(1, 0),
                intercept: gp(1, 0),
            },
        ]);
        assert!(intersection_points(&fam).unwrap().is_empty());

        // {y=x, y=0, x=1}: three pairwise intersections, m = 2 each
        let fam = WeightedLineFamily::unit_weights(vec![
            LineC::through_origin(gp(1, 0)),
            LineC::through_origin(gp(0, 0)),
            LineC::Vertical { x: gp(1, 0) },
        ]);
        let pts = intersection_points(&fam).unwrap();
        assert_eq!(pts.len(), 3);
        assert!(pts.values().all(|&m| m == 2));
    }

    #[test]
    fn family_file_round_trip() {
        let fam = WeightedLineFamily::from_weights(
            vec![
                (
                    LineC::Slant {
                        slope: GaussianRational::new(rat(1, 2), rat(-3, 4)),
                        intercept: gp(0, 2),
                    },
                    3,
                ),
                (LineC::Vertical { x: gp(5, 0) }, 1),
            ]
            .into_iter()
            .collect(),
        );
        let text = render_family(&fam);
        let back = parse_family(&text).unwrap();
        assert_eq!(back, fam);
        assert!(parse_family("1 2 3\n").is_err());
        assert!(parse_family("1 0 0 0 0\n").is_err());
    }

    #[test]
    fn weight_distribution_rows() {
        // unit-weight family: |L_t| = 0 for t ≥ 2
        let fam = WeightedLineFamily::unit_weights(vec![
            LineC::through_origin(gp(1, 0)),
            LineC::through_origin(gp(2, 0)),
        ]);
        let rep = weight_distribution_report(&fam);
        assert_eq!(rep.rows[0].line_count, 2);
        assert!(rep.rows.iter().skip(1).all(|r| r.line_count == 0));

        // single line: a short table with one populated head row
        let one = WeightedLineFamily::unit_weights(vec![LineC::through_origin(gp(1, 0))]);
        let rep = weight_distribution_report(&one);
        assert_eq!(rep.rows[0].line_count, 1);
    }

    #[test]
    fn weight_distribution_on_ap_square_family() {
        // translated family over the 16-point square of a 4-term progression:
        // the tail table is monotone nonincreasing in t
        let a = FiniteComplexSet::from_reals(&[1, 2, 3, 4]);
        let slopes: Vec<GaussianRational> = a
            .representation_counts(&a, SetOp::Ratio)
            .unwrap()
            .iter()
            .map(|(l, _)| l.clone())
            .collect();
        let mut q: Vec<PointC> = Vec::new();
        for x in a.iter() {
            for y in a.iter() {
                q.push((x.clone(), y.clone()));
            }
        }
        assert_eq!(q.len(), 16);
        let fam = translated_family(&slopes, &q).unwrap();
        let rep = weight_distribution_report(&fam);
        for pair in rep.rows.windows(2) {
            assert!(pair[1].line_count <= pair[0].line_count);
            assert!(pair[1].total_weight <= pair[0].total_weight);
        }
        let csv = rep.to_csv(Some(q.len()));
        assert!(csv.starts_with("t,count,bound_quantity,ratio\n"));
        assert_eq!(csv.lines().count(), rep.rows.len() + 1);
    }

    #[test]
    fn rich_sum_csv_columns() {
        let a = FiniteComplexSet::from_reals(&[1, 2]);
        let sel = popular_lines(&a).unwrap();
        let p = points_on_slopes(&a, &sel.slopes);
        let sys = build_translated_system(&sel.slopes, &p, sel.n_max).unwrap();
        let reports: Vec<RichSumReport> = [1, 2, 4]
            .iter()
            .map(|&t| rich_sum_report(&sys, &p, t).unwrap())
            .collect();
        let csv = rich_sum_csv(&reports);
        assert!(csv.starts_with("t,count,bound_quantity,ratio\n"));
        assert_eq!(csv.lines().count(), 4);
        for line in csv.lines().skip(1) {
            assert_eq!(line.split(',').count(), 4);
        }
    }

    #[test]
    fn capped_selection_trivial_pair() {
        // |A| = 2: n-values (1, 2, 1); the N = 2 class carries the energy
        let a = FiniteComplexSet::from_reals(&[1, 2]);
        let got = select_popular_with_n_bound(&a, &rat_int(DEFAULT_CAP_CONSTANT)).unwrap();
        assert!(got.selection.n_max == 1 || got.selection.n_max == 2);
        assert_eq!(got.selection.pigeonhole_bound, Some(true));
    }

    #[test]
    fn translated_system_contracts_on_a_small_set() {
        let a = FiniteComplexSet::from_reals(&[1, 2]);
        let sel = popular_lines(&a).unwrap();
        let p = points_on_slopes(&a, &sel.slopes);
        let sys = build_translated_system(&sel.slopes, &p, sel.n_max).unwrap();
        assert!(sys.family.total_weight() <= (sys.slopes.len() * sys.q.len()) as u128);
        let report = rich_sum_report(&sys, &p, 1).unwrap();
        assert!(report.contracts_hold(), "{report:?}");
        // t = 1 counts every distinct sum
        assert_eq!(report.rich_count as usize, report.distinct_sums);
        // t beyond |P| leaves nothing
        let report = rich_sum_report(&sys, &p, (p.len() + 1) as u64).unwrap();
        assert_eq!(report.rich_count, 0);
    }
}
