//! Exact bottleneck bipartite matching between equal-size point clouds.
//!
//! The bottleneck (minimax) matching cost of clouds `A` and `B` is
//! `min over permutations σ of max_j d(A_j, B_σ(j))`. For bootstrap
//! replicates this is the radius of the smallest ball dilation that carries
//! the replicate onto the original sample.

mod hopcroft_karp;

use crate::error::{Error, Result};
use hopcroft_karp::HopcroftKarp;

/// Brute force enumerates `n!` permutations; refuse beyond this.
pub const BRUTE_FORCE_MAX_N: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Norm {
    /// `max_i |x_i - y_i|`
    #[default]
    Sup,
    Euclidean,
}

impl Norm {
    pub fn name(self) -> &'static str {
        match self {
            Norm::Sup => "sup",
            Norm::Euclidean => "euclidean",
        }
    }
}

impl std::str::FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sup" | "max" | "inf" => Ok(Norm::Sup),
            "euclidean" | "l2" => Ok(Norm::Euclidean),
            other => Err(Error::InvalidParameter(format!("unknown norm `{other}`"))),
        }
    }
}

/// `n >= 1` points in `R^d`, stored row-major, with the norm used to measure
/// distances from them.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    coords: Vec<f64>,
    dim: usize,
    norm: Norm,
}

impl PointCloud {
    pub fn new(points: &[Vec<f64>], norm: Norm) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyCloud)?;
        let dim = first.len();
        let mut coords = Vec::with_capacity(points.len() * dim);
        for p in points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch(dim, p.len()));
            }
            coords.extend_from_slice(p);
        }
        Self::from_flat(coords, dim, norm)
    }

    /// Builds a cloud from row-major coordinates.
    pub fn from_flat(coords: Vec<f64>, dim: usize, norm: Norm) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be at least 1".into()));
        }
        if coords.is_empty() {
            return Err(Error::EmptyCloud);
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::DimensionMismatch(dim, coords.len() % dim));
        }
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite(i / dim));
        }
        Ok(PointCloud { coords, dim, norm })
    }

    /// One-dimensional cloud under the sup norm.
    pub fn univariate(values: &[f64]) -> Result<Self> {
        Self::from_flat(values.to_vec(), 1, Norm::Sup)
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn norm(&self) -> Norm {
        self.norm
    }

    pub fn with_norm(mut self, norm: Norm) -> Self {
        self.norm = norm;
        self
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Applies `f` to every coordinate. Fails if the result is not finite.
    pub fn map_coords(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_flat(self.coords.iter().map(|&c| f(c)).collect(), self.dim, self.norm)
    }
}

/// Distance between `x` and `y` under `norm`.
pub fn distance(x: &[f64], y: &[f64], norm: Norm) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch(x.len(), y.len()));
    }
    Ok(dist(x, y, norm))
}

#[inline]
fn dist(x: &[f64], y: &[f64], norm: Norm) -> f64 {
    match norm {
        Norm::Sup => x.iter().zip(y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max),
        // in one dimension both norms agree bit for bit
        Norm::Euclidean if x.len() == 1 => (x[0] - y[0]).abs(),
        Norm::Euclidean => x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt(),
    }
}

/// A permutation together with its bottleneck cost.
///
/// `assignment[j] = k` pairs point `j` of the first cloud with point `k` of
/// the second.
#[derive(Debug, Clone, PartialEq)]
pub struct BottleneckMatch {
    pub assignment: Vec<usize>,
    pub cost: f64,
}

impl BottleneckMatch {
    /// Recomputes the cost of `assignment` between `a` and `b`.
    pub fn evaluate(a: &PointCloud, b: &PointCloud, assignment: &[usize]) -> Result<f64> {
        check_pair(a, b)?;
        if assignment.len() != a.len() {
            return Err(Error::SizeMismatch(assignment.len(), a.len()));
        }
        Ok(assignment.iter().enumerate().map(|(j, &k)| dist(a.point(j), b.point(k), a.norm)).fold(0.0, f64::max))
    }
}

fn check_pair(a: &PointCloud, b: &PointCloud) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch(a.len(), b.len()));
    }
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch(a.dim, b.dim));
    }
    if a.norm != b.norm {
        return Err(Error::InvalidParameter(format!(
            "clouds declare different norms ({} vs {})",
            a.norm.name(),
            b.norm.name()
        )));
    }
    Ok(())
}

/// Exact bottleneck matching.
///
/// The optimal cost is one of the `n²` pairwise distances. A threshold `t` is
/// feasible when the graph with edges `d(A_j, B_k) <= t` has a perfect
/// matching (Hopcroft-Karp). The search starts from the lower bound given by
/// the largest nearest-neighbour distance on either side, gallops upward to a
/// feasible threshold, then bisects over the distinct distances in between.
pub fn bottleneck_match(a: &PointCloud, b: &PointCloud) -> Result<BottleneckMatch> {
    check_pair(a, b)?;
    let n = a.len();
    if n == 1 {
        return Ok(BottleneckMatch { assignment: vec![0], cost: dist(a.point(0), b.point(0), a.norm) });
    }

    let d: Vec<f64> = a.points().flat_map(|p| b.points().map(move |q| dist(p, q, a.norm))).collect();
    let at = |j: usize, k: usize| d[j * n + k];

    let mut col_min = vec![f64::INFINITY; n];
    let mut lower = 0.0f64;
    for j in 0..n {
        let row = &d[j * n..(j + 1) * n];
        lower = lower.max(row.iter().copied().fold(f64::INFINITY, f64::min));
        for (m, &v) in col_min.iter_mut().zip(row) {
            *m = m.min(v);
        }
    }
    lower = col_min.iter().copied().fold(lower, f64::max);

    let mut hk = HopcroftKarp::new(n);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let feasible_at = |t: f64, hk: &mut HopcroftKarp, adj: &mut Vec<Vec<usize>>| {
        for (j, row) in adj.iter_mut().enumerate() {
            row.clear();
            row.extend((0..n).filter(|&k| at(j, k) <= t));
        }
        hk.retain(|j, k| at(j, k) <= t);
        hk.run(|j| adj[j].as_slice());
        hk.is_perfect()
    };

    // Gallop: lower, then lower + step * 2^i.
    let mut infeasible_below = f64::NEG_INFINITY;
    let mut upper = lower;
    if !feasible_at(upper, &mut hk, &mut adj) {
        let step =
            if lower > 0.0 { lower } else { d.iter().copied().filter(|&v| v > 0.0).fold(f64::INFINITY, f64::min) };
        let mut scale = 1.0;
        loop {
            infeasible_below = upper;
            upper = lower + step * scale;
            if feasible_at(upper, &mut hk, &mut adj) {
                break;
            }
            scale *= 2.0;
        }
    }
    let mut best = hk.match_left.clone();
    if infeasible_below == f64::NEG_INFINITY {
        return Ok(finish(&d, n, best));
    }

    // Candidate edges: distance in (infeasible_below, upper], plus everything
    // at or below infeasible_below, sorted per row by distance.
    let rows: Vec<Vec<(f64, usize)>> = (0..n)
        .map(|j| {
            let mut r: Vec<(f64, usize)> = (0..n).filter(|&k| at(j, k) <= upper).map(|k| (at(j, k), k)).collect();
            r.sort_by(|x, y| x.0.total_cmp(&y.0));
            r
        })
        .collect();
    let mut candidates: Vec<f64> = rows.iter().flatten().map(|&(v, _)| v).filter(|&v| v > infeasible_below).collect();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    let cols: Vec<Vec<usize>> = rows.iter().map(|r| r.iter().map(|&(_, k)| k).collect()).collect();
    let dists: Vec<Vec<f64>> = rows.into_iter().map(|r| r.into_iter().map(|(v, _)| v).collect()).collect();

    // the largest candidate has the same edge set as `upper`, so it is
    // feasible; `best` always costs at most candidates[hi]
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        let t = candidates[mid];
        let limits: Vec<usize> = dists.iter().map(|r| r.partition_point(|&v| v <= t)).collect();
        hk.retain(|j, k| at(j, k) <= t);
        hk.run(|j| &cols[j][..limits[j]]);
        if hk.is_perfect() {
            best.clone_from(&hk.match_left);
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(finish(&d, n, best))
}

fn finish_cost(d: &[f64], n: usize, assignment: &[usize]) -> f64 {
    assignment.iter().enumerate().map(|(j, &k)| d[j * n + k]).fold(0.0, f64::max)
}

fn finish(d: &[f64], n: usize, assignment: Vec<usize>) -> BottleneckMatch {
    let cost = finish_cost(d, n, &assignment);
    BottleneckMatch { assignment, cost }
}

/// Exhaustive search over all `n!` permutations, `n <= 8`. Among optimal
/// permutations the lexicographically smallest is returned.
pub fn brute_force_bottleneck(a: &PointCloud, b: &PointCloud) -> Result<BottleneckMatch> {
    check_pair(a, b)?;
    let n = a.len();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::TooLargeForBruteForce { n, max: BRUTE_FORCE_MAX_N });
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = BottleneckMatch { cost: BottleneckMatch::evaluate(a, b, &perm)?, assignment: perm.clone() };
    while next_permutation(&mut perm) {
        let cost = perm.iter().enumerate().map(|(j, &k)| dist(a.point(j), b.point(k), a.norm)).fold(0.0, f64::max);
        if cost < best.cost {
            best = BottleneckMatch { assignment: perm.clone(), cost };
        }
    }
    Ok(best)
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = p.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = p.iter().rposition(|&x| x > p[i]).unwrap();
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// Univariate bottleneck matching: pair the j-th order statistic of `a`
/// with the j-th order statistic of `b`.
pub fn sorted_match_1d(a: &PointCloud, b: &PointCloud) -> Result<BottleneckMatch> {
    if a.dim != 1 {
        return Err(Error::NotUnivariate(a.dim));
    }
    if b.dim != 1 {
        return Err(Error::NotUnivariate(b.dim));
    }
    if a.len() != b.len() {
        return Err(Error::SizeMismatch(a.len(), b.len()));
    }
    let ia = argsort(&a.coords);
    let ib = argsort(&b.coords);
    let mut assignment = vec![0; a.len()];
    let mut cost = 0.0f64;
    for (&j, &k) in ia.iter().zip(&ib) {
        assignment[j] = k;
        cost = cost.max((a.coords[j] - b.coords[k]).abs());
    }
    Ok(BottleneckMatch { assignment, cost })
}

/// `max_j |a_(j) - b_(j)|` for two equal-length samples, sorting copies.
pub(crate) fn sorted_deviation(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable_by(f64::total_cmp);
    b.sort_unstable_by(f64::total_cmp);
    sorted_deviation_presorted(&a, &b)
}

#[inline]
pub(crate) fn sorted_deviation_presorted(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn argsort(v: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&i, &j| v[i].total_cmp(&v[j]));
    idx
}
