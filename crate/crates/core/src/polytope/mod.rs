//! Exact rational polytopes: hulls, Minkowski sums, lattice points and volumes.
//!
//! Points are stored scaled by a common denominator so that all geometry runs
//! in integer arithmetic. A polytope of dimension `k` is handled inside a
//! coordinate projection onto `k` coordinates that is injective on its affine
//! span; facets and triangulations live in that projection.

mod dd;
mod mixed;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::linalg;
use crate::rational::{factorial, Q};

pub use dd::Halfspace;
pub use mixed::{mixed_volume_ie, MinkowskiVolumes};

#[derive(Clone, Debug)]
pub struct Polytope {
    ambient_dim: usize,
    denom: i64,
    /// Extreme points (scaled by `denom`), sorted lexicographically.
    verts: Vec<Vec<i64>>,
    dim: usize,
    /// Coordinates onto which the affine span projects injectively.
    coords: Vec<usize>,
    /// `c . x = e` for all scaled points.
    equalities: Vec<(Vec<i64>, i64)>,
    /// Facets in the projected coordinates; `tight` indexes `verts`.
    facets: Vec<Halfspace>,
}

impl Polytope {
    /// Convex hull of integer points.
    pub fn from_integer_points(points: &[Vec<i64>]) -> Result<Self> {
        let first = points.first().ok_or(Error::Empty("hull of no points"))?;
        let n = first.len();
        if let Some(p) = points.iter().find(|p| p.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.len(),
            });
        }
        Ok(Self::build(n, 1, points.to_vec()))
    }

    /// Convex hull of rational points.
    pub fn hull(points: &[Vec<Q>]) -> Result<Self> {
        let first = points.first().ok_or(Error::Empty("hull of no points"))?;
        let n = first.len();
        if let Some(p) = points.iter().find(|p| p.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.len(),
            });
        }
        let l = points
            .iter()
            .flatten()
            .fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let denom = l.to_i64().expect("denominator overflow");
        let scaled = points
            .iter()
            .map(|p| {
                p.iter()
                    .map(|x| {
                        (x * Q::from_integer(l.clone()))
                            .to_integer()
                            .to_i64()
                            .expect("coordinate overflow")
                    })
                    .collect()
            })
            .collect();
        Ok(Self::build(n, denom, scaled))
    }

    fn build(ambient_dim: usize, denom: i64, mut pts: Vec<Vec<i64>>) -> Self {
        pts.sort();
        pts.dedup();
        let base = pts[0].clone();
        let diffs: Vec<Vec<i64>> = pts[1..]
            .iter()
            .map(|p| p.iter().zip(&base).map(|(a, b)| a - b).collect())
            .collect();
        let coords = pivot_columns(&diffs, ambient_dim);
        let dim = coords.len();
        let equalities = linalg::kernel(&diffs, ambient_dim)
            .into_iter()
            .map(|c| {
                let e = linalg::dot(&c, &base);
                (c, e)
            })
            .collect();

        if dim == 0 {
            return Polytope {
                ambient_dim,
                denom,
                verts: pts,
                dim,
                coords,
                equalities,
                facets: vec![],
            };
        }

        let proj: Vec<Vec<i64>> = pts
            .iter()
            .map(|p| coords.iter().map(|&c| p[c]).collect())
            .collect();
        let hs = dd::facets(&proj, dim);

        // A point is a vertex iff the normals of its tight facets span R^dim.
        let is_vertex: Vec<bool> = (0..pts.len())
            .map(|i| {
                let normals: Vec<Vec<i64>> = hs
                    .iter()
                    .filter(|h| h.tight.contains(&i))
                    .map(|h| h.normal.clone())
                    .collect();
                linalg::rank(&normals) == dim
            })
            .collect();
        let mut remap = vec![usize::MAX; pts.len()];
        let mut verts = Vec::new();
        for (i, p) in pts.into_iter().enumerate() {
            if is_vertex[i] {
                remap[i] = verts.len();
                verts.push(p);
            }
        }
        let facets = hs
            .into_iter()
            .map(|h| Halfspace {
                tight: h
                    .tight
                    .iter()
                    .filter(|&&i| is_vertex[i])
                    .map(|&i| remap[i])
                    .collect(),
                ..h
            })
            .collect();
        Polytope {
            ambient_dim,
            denom,
            verts,
            dim,
            coords,
            equalities,
            facets,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_vertices(&self) -> usize {
        self.verts.len()
    }

    pub fn vertices(&self) -> Vec<Vec<Q>> {
        let d = BigInt::from(self.denom);
        self.verts
            .iter()
            .map(|p| {
                p.iter()
                    .map(|&x| Q::new(BigInt::from(x), d.clone()))
                    .collect()
            })
            .collect()
    }

    /// Vertices as integers, if the polytope is a lattice polytope.
    pub fn integer_vertices(&self) -> Option<Vec<Vec<i64>>> {
        (self.denom == 1).then(|| self.verts.clone())
    }

    /// Facet inequalities in the projected coordinates returned by [`Self::span_coordinates`].
    pub fn facets(&self) -> &[Halfspace] {
        &self.facets
    }

    pub fn span_coordinates(&self) -> &[usize] {
        &self.coords
    }

    fn contains_scaled(&self, x: &[i64]) -> bool {
        if self.equalities.iter().any(|(c, e)| linalg::dot(c, x) != *e) {
            return false;
        }
        let y: Vec<i64> = self.coords.iter().map(|&c| x[c]).collect();
        self.facets
            .iter()
            .all(|h| h.offset + linalg::dot(&h.normal, &y) >= 0)
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        if x.len() != self.ambient_dim {
            return false;
        }
        let d = Q::from_integer(BigInt::from(self.denom));
        let mut scaled = Vec::with_capacity(x.len());
        for v in x {
            let s = v * &d;
            if !s.is_integer() {
                // Scaled vertices are integral; a non-integral scaled point can
                // still lie inside, so fall back to a finer common scale.
                return self.refine(v.denom()).contains(x);
            }
            scaled.push(s.to_integer().to_i64().expect("coordinate overflow"));
        }
        self.contains_scaled(&scaled)
    }

    fn refine(&self, extra: &BigInt) -> Polytope {
        let k = extra.to_i64().expect("denominator overflow");
        let pts = self
            .verts
            .iter()
            .map(|p| p.iter().map(|x| x * k).collect())
            .collect();
        Polytope::build(self.ambient_dim, self.denom * k, pts)
    }

    /// All lattice points, in lexicographic order.
    pub fn integral_points(&self) -> Vec<Vec<i64>> {
        let n = self.ambient_dim;
        let lo: Vec<i64> = (0..n)
            .map(|c| self.verts.iter().map(|p| p[c]).min().unwrap())
            .map(|m| Integer::div_ceil(&m, &self.denom))
            .collect();
        let hi: Vec<i64> = (0..n)
            .map(|c| self.verts.iter().map(|p| p[c]).max().unwrap())
            .map(|m| Integer::div_floor(&m, &self.denom))
            .collect();
        let mut out = Vec::new();
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return out;
        }
        let mut cur = lo.clone();
        loop {
            let scaled: Vec<i64> = cur.iter().map(|x| x * self.denom).collect();
            if self.contains_scaled(&scaled) {
                out.push(cur.clone());
            }
            // Odometer increment, last coordinate fastest.
            let mut i = n;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < hi[i] {
                    cur[i] += 1;
                    break;
                }
                cur[i] = lo[i];
            }
        }
    }

    pub fn minkowski_sum(&self, other: &Polytope) -> Result<Polytope> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: other.ambient_dim,
            });
        }
        let l = self.denom.lcm(&other.denom);
        let (fa, fb) = (l / self.denom, l / other.denom);
        let mut pts = Vec::with_capacity(self.verts.len() * other.verts.len());
        for a in &self.verts {
            for b in &other.verts {
                pts.push(a.iter().zip(b).map(|(x, y)| x * fa + y * fb).collect());
            }
        }
        Ok(Polytope::build(self.ambient_dim, l, pts).normalized())
    }

    pub fn dilate(&self, k: i64) -> Polytope {
        let pts = self
            .verts
            .iter()
            .map(|p| p.iter().map(|x| x * k).collect())
            .collect();
        Polytope::build(self.ambient_dim, self.denom, pts).normalized()
    }

    /// Removes common factors between the denominator and all coordinates.
    fn normalized(self) -> Polytope {
        let g = self
            .verts
            .iter()
            .flatten()
            .fold(self.denom, |g, &x| g.gcd(&x));
        if g <= 1 {
            return self;
        }
        let pts = self
            .verts
            .iter()
            .map(|p| p.iter().map(|x| x / g).collect())
            .collect();
        Polytope::build(self.ambient_dim, self.denom / g, pts)
    }

    /// Coordinates along which the vertices are not constant.
    pub fn varying_coordinates(&self) -> Vec<usize> {
        (0..self.ambient_dim)
            .filter(|&c| self.verts.iter().any(|p| p[c] != self.verts[0][c]))
            .collect()
    }

    /// Lebesgue volume inside the coordinate subspace spanned by the polytope.
    pub fn volume_in_coordinate_span(&self) -> Result<Q> {
        let varying = self.varying_coordinates();
        if varying.len() != self.dim {
            return Err(Error::NotCoordinateAligned {
                dim: self.dim,
                varying: varying.len(),
            });
        }
        if self.dim == 0 {
            return Ok(Q::one());
        }
        let twice = self.scaled_volume_times_factorial();
        let scale = BigInt::from(self.denom).pow(self.dim as u32)
            * BigInt::from(factorial(self.dim as u64));
        Ok(Q::new(BigInt::from(twice), scale))
    }

    /// `dim! * Vol` of the projection in scaled coordinates, summed over a pulling triangulation.
    fn scaled_volume_times_factorial(&self) -> i128 {
        let proj: Vec<Vec<i64>> = self
            .verts
            .iter()
            .map(|p| self.coords.iter().map(|&c| p[c]).collect())
            .collect();
        self.triangulation()
            .iter()
            .map(|s| simplex_det(&proj, s).abs())
            .sum()
    }

    /// Pulling triangulation of the polytope into simplices (vertex index lists).
    pub fn triangulation(&self) -> Vec<Vec<usize>> {
        let proj: Vec<Vec<i64>> = self
            .verts
            .iter()
            .map(|p| self.coords.iter().map(|&c| p[c]).collect())
            .collect();
        let facet_sets: Vec<BTreeSet<usize>> = self
            .facets
            .iter()
            .map(|h| h.tight.iter().copied().collect())
            .collect();
        let all: BTreeSet<usize> = (0..self.verts.len()).collect();
        let mut out = Vec::new();
        pull(&proj, &facet_sets, &all, self.dim, &mut out);
        out
    }
}

fn pivot_columns(rows: &[Vec<i64>], ncols: usize) -> Vec<usize> {
    // Greedy column selection preserving rank.
    let mut chosen = Vec::new();
    let r = linalg::rank(rows);
    for c in 0..ncols {
        if chosen.len() == r {
            break;
        }
        let mut trial = chosen.clone();
        trial.push(c);
        let sub: Vec<Vec<i64>> = rows
            .iter()
            .map(|row| trial.iter().map(|&j| row[j]).collect())
            .collect();
        if linalg::rank(&sub) == trial.len() {
            chosen = trial;
        }
    }
    chosen
}

fn affine_dim(proj: &[Vec<i64>], set: &BTreeSet<usize>) -> usize {
    let mut it = set.iter();
    let Some(&b) = it.next() else { return 0 };
    let diffs: Vec<Vec<i64>> = it
        .map(|&i| proj[i].iter().zip(&proj[b]).map(|(x, y)| x - y).collect())
        .collect();
    linalg::rank(&diffs)
}

fn pull(
    proj: &[Vec<i64>],
    facets: &[BTreeSet<usize>],
    face: &BTreeSet<usize>,
    k: usize,
    out: &mut Vec<Vec<usize>>,
) {
    if face.len() == k + 1 {
        out.push(face.iter().copied().collect());
        return;
    }
    let apex = *face.iter().next().unwrap();
    let mut subfaces: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    for f in facets {
        let s: BTreeSet<usize> = face.intersection(f).copied().collect();
        if s.len() >= k
            && s.len() < face.len()
            && !s.contains(&apex)
            && affine_dim(proj, &s) == k - 1
        {
            subfaces.insert(s);
        }
    }
    for s in &subfaces {
        let mut inner = Vec::new();
        pull(proj, facets, s, k - 1, &mut inner);
        for mut simplex in inner {
            simplex.push(apex);
            out.push(simplex);
        }
    }
}

fn simplex_det(proj: &[Vec<i64>], s: &[usize]) -> i128 {
    let base = &proj[s[0]];
    let m: Vec<Vec<i64>> = s[1..]
        .iter()
        .map(|&i| proj[i].iter().zip(base).map(|(x, y)| x - y).collect())
        .collect();
    linalg::det(&m)
}

/// `|det(v1 - v0, ..., vd - v0)| / d!` for a full-dimensional simplex.
pub fn simplex_volume(vertices: &[Vec<i64>]) -> Q {
    let d = vertices.len() - 1;
    let base = &vertices[0];
    let m: Vec<Vec<i64>> = vertices[1..]
        .iter()
        .map(|v| v.iter().zip(base).map(|(x, y)| x - y).collect())
        .collect();
    Q::new(
        BigInt::from(linalg::det(&m).abs()),
        BigInt::from(factorial(d as u64)),
    )
}

impl Polytope {
    /// A point as a zero-dimensional polytope.
    pub fn point(p: &[i64]) -> Polytope {
        Polytope::build(p.len(), 1, vec![p.to_vec()])
    }
}

// Equality is by vertex set; facet order depends on the input point order.
impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.denom == other.denom
            && self.verts == other.verts
    }
}

impl Eq for Polytope {}

impl std::hash::Hash for Polytope {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ambient_dim.hash(state);
        self.denom.hash(state);
        self.verts.hash(state);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn ip(points: &[&[i64]]) -> Polytope {
        Polytope::from_integer_points(&points.iter().map(|p| p.to_vec()).collect::<Vec<_>>())
            .unwrap()
    }

    #[test]
    fn hull_drops_interior_points() {
        let p = Polytope::hull(&[
            vec![qi(0), qi(0)],
            vec![qi(1), qi(0)],
            vec![qi(0), qi(1)],
            vec![qi(1), qi(1)],
            vec![q(1, 2), q(1, 2)],
        ])
        .unwrap();
        assert_eq!(p.num_vertices(), 4);
        assert_eq!(p.dim(), 2);
        assert_eq!(p.volume_in_coordinate_span().unwrap(), qi(1));
    }

    #[test]
    fn point_and_simplex() {
        let p = ip(&[&[0, 0, 0]]);
        assert_eq!(p.dim(), 0);
        let s = ip(&[&[0, 0, 0], &[3, 0, 0], &[0, 3, 0], &[0, 0, 3]]);
        assert_eq!((s.dim(), s.num_vertices()), (3, 4));
        assert_eq!(s.volume_in_coordinate_span().unwrap(), q(9, 2));
    }

    #[test]
    fn unit_triangle_volume_and_points() {
        let t = ip(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(t.volume_in_coordinate_span().unwrap(), q(1, 2));
        assert_eq!(t.integral_points().len(), 3);
    }

    #[test]
    fn minkowski_examples() {
        let sx = ip(&[&[0, 0], &[1, 0]]);
        let sy = ip(&[&[0, 0], &[0, 1]]);
        let sq = sx.minkowski_sum(&sy).unwrap();
        assert_eq!(sq, ip(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]));
        let tri = ip(&[&[0, 0], &[1, 0], &[0, 1]]);
        let pt = ip(&[&[2, 5]]);
        assert_eq!(
            tri.minkowski_sum(&pt).unwrap(),
            ip(&[&[2, 5], &[3, 5], &[2, 6]])
        );
        let two = tri.minkowski_sum(&tri).unwrap();
        assert_eq!(
            two.volume_in_coordinate_span().unwrap(),
            qi(4) * tri.volume_in_coordinate_span().unwrap()
        );
        assert!(sx.minkowski_sum(&ip(&[&[0, 0, 0]])).is_err());
    }

    #[test]
    fn misaligned_span_is_rejected() {
        let diag = ip(&[&[0, 0], &[1, 1]]);
        assert!(matches!(
            diag.volume_in_coordinate_span(),
            Err(Error::NotCoordinateAligned { .. })
        ));
        let seg = ip(&[&[0, 4], &[3, 4]]);
        assert_eq!(seg.volume_in_coordinate_span().unwrap(), qi(3));
    }

    #[test]
    fn lower_dimensional_lattice_points() {
        // Triangle inside R^3 on the plane x + y + z = 3.
        let t = ip(&[&[3, 0, 0], &[0, 3, 0], &[0, 0, 3]]);
        assert_eq!(t.dim(), 2);
        assert_eq!(t.integral_points().len(), 10);
        let seg = ip(&[&[0, 0], &[2, 0]]);
        assert_eq!(
            seg.integral_points(),
            vec![vec![0, 0], vec![1, 0], vec![2, 0]]
        );
    }

    #[test]
    fn dilated_simplex_lattice_points() {
        let s = ip(&[&[3, 0, 0, 0], &[0, 3, 0, 0], &[0, 0, 3, 0], &[0, 0, 0, 3]]);
        assert_eq!(s.integral_points().len(), 20);
    }

    #[test]
    fn rational_containment() {
        let t = ip(&[&[0, 0], &[2, 0], &[0, 2]]);
        assert!(t.contains(&[q(1, 3), q(1, 3)]));
        assert!(!t.contains(&[q(3, 2), q(3, 4)]));
    }
}
