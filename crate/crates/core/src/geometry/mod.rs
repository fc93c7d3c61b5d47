//! Planar geometry over exact rationals: the wedge and its Mobius image
//! (an open meniscus between two discs), the rhombus around a segment,
//! segment intersection and separating-axis predicates, and the minimum
//! spanning tree machinery built on them.
//!
//! Every predicate in this module is decided by rational arithmetic alone.
//! The only non-rational boundary (the meniscus arc) is handled either
//! through its exact two-disc characterization or, for the containment
//! sampling, through certified square-root lower bounds.

mod claim;
mod mst;

pub use claim::{verify_claim, ClaimReport, ClaimVertices, MeniscusMiss};
pub use mst::{euclidean_mst, verify_mst_properties, MstPropertyReport, SpanningTree};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::powcmp::sqrt_lower_bound;
use crate::rational::{GaussianRational, Rational};

/// A point of the real plane with exact rational coordinates; ratios
/// `l ∈ A:A` are viewed this way when they become vertices of the tree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlanarPoint {
    pub x: Rational,
    pub y: Rational,
}

impl PlanarPoint {
    pub fn new(x: Rational, y: Rational) -> Self {
        PlanarPoint { x, y }
    }

    pub fn from_complex(z: &GaussianRational) -> Self {
        PlanarPoint::new(z.re().clone(), z.im().clone())
    }

    pub fn to_complex(&self) -> GaussianRational {
        GaussianRational::new(self.x.clone(), self.y.clone())
    }

    fn sub(&self, other: &PlanarPoint) -> PlanarPoint {
        PlanarPoint::new(&self.x - &other.x, &self.y - &other.y)
    }

    fn add(&self, other: &PlanarPoint) -> PlanarPoint {
        PlanarPoint::new(&self.x + &other.x, &self.y + &other.y)
    }

    fn scale(&self, c: &Rational) -> PlanarPoint {
        PlanarPoint::new(&self.x * c, &self.y * c)
    }

    /// Rotation by 90 degrees counterclockwise.
    fn rot90(&self) -> PlanarPoint {
        PlanarPoint::new(-self.y.clone(), self.x.clone())
    }

    pub fn dist_sq(&self, other: &PlanarPoint) -> Rational {
        let dx = &self.x - &other.x;
        let dy = &self.y - &other.y;
        &dx * &dx + &dy * &dy
    }
}

pub(crate) fn dot(u: &PlanarPoint, v: &PlanarPoint) -> Rational {
    &u.x * &v.x + &u.y * &v.y
}

pub(crate) fn cross(u: &PlanarPoint, v: &PlanarPoint) -> Rational {
    &u.x * &v.y - &u.y * &v.x
}

/// Sign of the signed area of the triangle `a, b, c`.
fn orient(a: &PlanarPoint, b: &PlanarPoint, c: &PlanarPoint) -> i8 {
    let v = cross(&b.sub(a), &c.sub(a));
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// The Mobius map `u ↦ u/(1+u)`; pole at `u = -1`.
pub fn mobius_point(u: &GaussianRational) -> Result<GaussianRational> {
    let denom = &GaussianRational::one() + u;
    if denom.is_zero() {
        return Err(Error::PoleAtMinusOne);
    }
    u.checked_div(&denom)
}

/// Exact wedge membership: `re(u) > 0` and `|im(u)| < eps · re(u)`.
pub fn wedge_contains(u: &GaussianRational, eps: &Rational) -> bool {
    u.re().is_positive() && u.im().abs() < eps * u.re()
}

/// The open meniscus attached to a segment `(l1, l2)`: the image of the
/// normalized meniscus `M_eps` under `w ↦ l1 + (l2 - l1) w`.
///
/// Membership is decided exactly: `z` belongs iff `w = (z - l1)/(l2 - l1)`
/// lies strictly inside both open discs centred at `(1/2, ±1/(2 eps))` with
/// squared radius `1/4 + 1/(4 eps²)`.
#[derive(Debug, Clone)]
pub struct Meniscus {
    pub l1: GaussianRational,
    pub l2: GaussianRational,
    pub eps: Rational,
}

impl Meniscus {
    pub fn new(l1: GaussianRational, l2: GaussianRational, eps: Rational) -> Result<Self> {
        if l1 == l2 {
            return Err(Error::DegenerateEdge);
        }
        if !eps.is_positive() {
            return Err(Error::BadParams("epsilon must be positive".into()));
        }
        Ok(Meniscus { l1, l2, eps })
    }

    /// Exact strict-interior test through the two-disc characterization.
    pub fn contains(&self, z: &GaussianRational) -> bool {
        let span = &self.l2 - &self.l1;
        let w = (z - &self.l1).checked_div(&span).expect("l1 != l2");
        normalized_meniscus_contains(w.re(), w.im(), &self.eps)
    }
}

/// Membership of `(x, y)` in the normalized meniscus around `(0, 1)`.
pub(crate) fn normalized_meniscus_contains(x: &Rational, y: &Rational, eps: &Rational) -> bool {
    let half = Rational::new(1.into(), 2.into());
    let c = Rational::one() / (eps + eps); // 1/(2 eps)
    let radius_sq = &half * &half + &c * &c;
    let dx = x - &half;
    let dx_sq = &dx * &dx;
    // distance to the upper and lower centres
    let upper = &dx_sq + &(&(y - &c) * &(y - &c));
    let lower = &dx_sq + &(&(y + &c) * &(y + &c));
    upper < radius_sq && lower < radius_sq
}

/// The open rhombus around a segment: major diagonal `(l1, l2)`, minor
/// diagonal of length `eps |l2 - l1|` through the midpoint.
#[derive(Debug, Clone)]
pub struct Rhombus {
    pub v_major_1: PlanarPoint,
    pub v_major_2: PlanarPoint,
    pub v_minor_1: PlanarPoint,
    pub v_minor_2: PlanarPoint,
}

impl Rhombus {
    /// Vertices in convex cyclic order.
    pub fn cycle(&self) -> [&PlanarPoint; 4] {
        [
            &self.v_major_1,
            &self.v_minor_1,
            &self.v_major_2,
            &self.v_minor_2,
        ]
    }

    /// Exact strict-interior membership.
    pub fn contains(&self, p: &PlanarPoint) -> bool {
        let cycle = self.cycle();
        let mut sign = 0i8;
        for i in 0..4 {
            let s = orient(cycle[i], cycle[(i + 1) % 4], p);
            if s == 0 {
                return false;
            }
            if sign == 0 {
                sign = s;
            } else if s != sign {
                return false;
            }
        }
        true
    }
}

pub fn rhombus_of_edge(l1: &PlanarPoint, l2: &PlanarPoint, eps: &Rational) -> Result<Rhombus> {
    if l1 == l2 {
        return Err(Error::DegenerateEdge);
    }
    if !eps.is_positive() {
        return Err(Error::BadParams("epsilon must be positive".into()));
    }
    let two = Rational::new(2.into(), 1.into());
    let mid = l1.add(l2).scale(&(Rational::one() / &two));
    let half_minor = l2.sub(l1).rot90().scale(&(eps / &two));
    Ok(Rhombus {
        v_major_1: l1.clone(),
        v_major_2: l2.clone(),
        v_minor_1: mid.add(&half_minor),
        v_minor_2: mid.sub(&half_minor),
    })
}

fn projection_range<'p>(
    points: &[&'p PlanarPoint; 4],
    project: &dyn Fn(&PlanarPoint) -> Rational,
) -> (Rational, Rational) {
    let mut lo = project(points[0]);
    let mut hi = lo.clone();
    for p in &points[1..] {
        let d = project(p);
        if d < lo {
            lo = d;
        } else if d > hi {
            hi = d;
        }
    }
    (lo, hi)
}

fn separated(a: &(Rational, Rational), b: &(Rational, Rational)) -> bool {
    a.1 <= b.0 || b.1 <= a.0
}

/// Separating-axis disjointness for two convex quadrilaterals, as open
/// sets: touching boundaries count as disjoint. The coordinate axes are
/// tried first (they need no multiplications and reject most far pairs),
/// then the edge normals of both quadrilaterals.
pub fn rhombi_disjoint_open(a: &Rhombus, b: &Rhombus) -> bool {
    let pa = a.cycle();
    let pb = b.cycle();
    let proj_x: &dyn Fn(&PlanarPoint) -> Rational = &|p| p.x.clone();
    let proj_y: &dyn Fn(&PlanarPoint) -> Rational = &|p| p.y.clone();
    for proj in [proj_x, proj_y] {
        if separated(&projection_range(&pa, proj), &projection_range(&pb, proj)) {
            return true;
        }
    }
    for quad in [&pa, &pb] {
        for i in 0..4 {
            let axis = quad[(i + 1) % 4].sub(quad[i]).rot90();
            let proj: &dyn Fn(&PlanarPoint) -> Rational = &|p| dot(&axis, p);
            if separated(&projection_range(&pa, proj), &projection_range(&pb, proj)) {
                return true;
            }
        }
    }
    false
}

/// Exact open-segment intersection. Shared endpoints do not count; collinear
/// overlap of positive length does.
pub fn segments_cross(
    p1: &PlanarPoint,
    p2: &PlanarPoint,
    q1: &PlanarPoint,
    q2: &PlanarPoint,
) -> bool {
    assert!(p1 != p2 && q1 != q2, "degenerate segment");
    let o1 = orient(p1, p2, q1);
    let o2 = orient(p1, p2, q2);
    let o3 = orient(q1, q2, p1);
    let o4 = orient(q1, q2, p2);
    if o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0 {
        return true;
    }
    if o1 == 0 && o2 == 0 {
        // collinear: open 1-D overlap along the dominant coordinate
        let d = p2.sub(p1);
        let key = |p: &PlanarPoint| -> Rational {
            if d.x.is_zero() {
                p.y.clone()
            } else {
                p.x.clone()
            }
        };
        let (a1, a2) = minmax(key(p1), key(p2));
        let (b1, b2) = minmax(key(q1), key(q2));
        let lo = if a1 > b1 { a1 } else { b1 };
        let hi = if a2 < b2 { a2 } else { b2 };
        return lo < hi;
    }
    false
}

fn minmax(a: Rational, b: Rational) -> (Rational, Rational) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// `(y1 + y2)/(x1 + x2)`, with the decomposition identity
/// `= l1 + (l2 - l1) · u/(1+u)` (`u = x2/x1`) asserted exactly whenever the
/// slopes are defined.
pub fn sum_image(
    x1: &GaussianRational,
    y1: &GaussianRational,
    x2: &GaussianRational,
    y2: &GaussianRational,
) -> Result<GaussianRational> {
    let z = (y1 + y2).checked_div(&(x1 + x2))?;
    if !x1.is_zero() && !x2.is_zero() {
        let l1 = y1.checked_div(x1)?;
        let l2 = y2.checked_div(x2)?;
        let u = x2.checked_div(x1)?;
        let m = mobius_point(&u).map_err(|_| Error::ZeroDenominator)?;
        let via_mobius = &l1 + &(&(&l2 - &l1) * &m);
        if via_mobius != z {
            return Err(Error::IdentityViolation {
                lhs: z.to_string(),
                rhs: via_mobius.to_string(),
            });
        }
    }
    Ok(z)
}

/// Outcome of the sampled check that the meniscus sits inside its rhombus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContainmentSample {
    pub samples_tested: usize,
    pub all_inside: bool,
    /// True when zero samples were requested: vacuously inside.
    pub vacuous: bool,
}

/// Samples points of the open meniscus near its boundary arcs (certified
/// rational lower bounds on the arc height) and tests each against the open
/// rhombus of the same edge. A validation aid, not a proof.
pub fn meniscus_inside_rhombus(m: &Meniscus, r: &Rhombus, samples: usize) -> ContainmentSample {
    if samples == 0 {
        return ContainmentSample {
            samples_tested: 0,
            all_inside: true,
            vacuous: true,
        };
    }
    let eps = &m.eps;
    let half = Rational::new(1.into(), 2.into());
    let c = Rational::one() / (eps + eps);
    let radius_sq = &half * &half + &c * &c;
    let span = &m.l2 - &m.l1;
    let mut tested = 0;
    let mut all_inside = true;
    for k in 1..=samples {
        let x = Rational::new((k as i64).into(), ((samples + 1) as i64).into());
        let dx = &x - &half;
        // arc height: sqrt(radius² - dx²) - c, bounded from below
        let under_root = &radius_sq - &(&dx * &dx);
        let root_lb = sqrt_lower_bound(&under_root, 64);
        let mut y = &root_lb - &c;
        // shave a hair so the sample is strictly interior even when the
        // root is exact
        y = &y - &(eps * &Rational::new(1.into(), (1i64 << 32).into()));
        if y.is_negative() {
            y = Rational::zero();
        }
        for y_signed in [y.clone(), -y.clone()] {
            if !normalized_meniscus_contains(&x, &y_signed, eps) {
                // landed outside the open lens (can only happen for y
                // rounded to the axis at the very ends); skip, the axis
                // point is covered by the opposite sign
                continue;
            }
            tested += 1;
            let w = GaussianRational::new(x.clone(), y_signed);
            let z = &m.l1 + &(&span * &w);
            if !r.contains(&PlanarPoint::from_complex(&z)) {
                all_inside = false;
            }
        }
    }
    ContainmentSample {
        samples_tested: tested,
        all_inside,
        vacuous: false,
    }
}

/// Decides `tan²(angle between u and v) ≤ bound²` for the acute angle
/// between two directions, exactly. `None` when the angle is π/2 (infinite
/// tangent).
pub fn angle_tan_sq_le(u: &PlanarPoint, v: &PlanarPoint, bound: &Rational) -> Option<bool> {
    let d = dot(u, v);
    if d.is_zero() {
        return None;
    }
    let x = cross(u, v);
    Some(&x * &x <= &(bound * bound) * &(&d * &d))
}
