//! The fans Σ and Π in the rank-5 lattice `N = {x in Z^6 : sum x = 0}`.
//!
//! Vectors are kept in six coordinates; all matrix work uses the projection
//! to `Z^5` that drops the sixth coordinate.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::polytope::Polytope;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeVector {
    pub coords: [i64; 6],
}

impl LatticeVector {
    pub fn new(coords: [i64; 6]) -> Result<Self> {
        if coords.iter().sum::<i64>() != 0 {
            return Err(Error::Fan(format!("{coords:?} does not lie in N")));
        }
        Ok(LatticeVector { coords })
    }

    pub fn from_proj(p: [i64; 5]) -> Self {
        let last = -p.iter().sum::<i64>();
        LatticeVector {
            coords: [p[0], p[1], p[2], p[3], p[4], last],
        }
    }

    pub fn proj(&self) -> [i64; 5] {
        let c = self.coords;
        [c[0], c[1], c[2], c[3], c[4]]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&x| x == 0)
    }
}

fn triple(i: usize, j: usize, k: usize, which: char) -> Result<[i64; 6]> {
    if !(1 <= i && i <= j && j <= k && k <= 6) {
        return Err(Error::InvalidTriple(
            i,
            j,
            k,
            which,
            "indices must satisfy 1 <= i <= j <= k <= 6",
        ));
    }
    let mut a = [0i64; 6];
    a[i - 1] += 1;
    a[j - 1] += 1;
    a[k - 1] += 1;
    Ok(a)
}

/// `u_{ijk} = -e1 - e2 - e3 + e_i + e_j + e_k`.
pub fn ray_u(i: usize, j: usize, k: usize) -> Result<LatticeVector> {
    if (i, j, k) == (1, 2, 3) {
        return Err(Error::InvalidTriple(
            i,
            j,
            k,
            'u',
            "(1,2,3) gives the zero vector",
        ));
    }
    let mut a = triple(i, j, k, 'u')?;
    a[..3].iter_mut().for_each(|x| *x -= 1);
    Ok(LatticeVector { coords: a })
}

/// `v_{ijk} = -e4 - e5 - e6 + e_i + e_j + e_k`.
pub fn ray_v(i: usize, j: usize, k: usize) -> Result<LatticeVector> {
    if (i, j, k) == (4, 5, 6) {
        return Err(Error::InvalidTriple(
            i,
            j,
            k,
            'v',
            "(4,5,6) gives the zero vector",
        ));
    }
    let mut a = triple(i, j, k, 'v')?;
    a[3..].iter_mut().for_each(|x| *x -= 1);
    Ok(LatticeVector { coords: a })
}

/// Which family a ray of Π belongs to, with its sorted index triple (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RayLabel {
    U(usize, usize, usize),
    V(usize, usize, usize),
}

impl RayLabel {
    pub fn triple(&self) -> [usize; 3] {
        match *self {
            RayLabel::U(i, j, k) | RayLabel::V(i, j, k) => [i, j, k],
        }
    }

    pub fn is_u(&self) -> bool {
        matches!(self, RayLabel::U(..))
    }
}

impl std::fmt::Display for RayLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (c, [i, j, k]) = (if self.is_u() { 'u' } else { 'v' }, self.triple());
        write!(f, "{c}{i}{j}{k}")
    }
}

/// All valid labels: the 55 u-triples followed by the 55 v-triples.
pub fn pi_labels() -> Vec<RayLabel> {
    let mut us = Vec::new();
    let mut vs = Vec::new();
    for i in 1..=6 {
        for j in i..=6 {
            for k in j..=6 {
                if (i, j, k) != (1, 2, 3) {
                    us.push(RayLabel::U(i, j, k));
                }
                if (i, j, k) != (4, 5, 6) {
                    vs.push(RayLabel::V(i, j, k));
                }
            }
        }
    }
    us.extend(vs);
    us
}

pub fn label_vector(l: RayLabel) -> LatticeVector {
    let [i, j, k] = l.triple();
    match l {
        RayLabel::U(..) => ray_u(i, j, k),
        RayLabel::V(..) => ray_v(i, j, k),
    }
    .expect("labels are valid by construction")
}

/// Esd_3 subdivision of `conv{3e_1..3e_4}` (27 simplices, points in `Z^4`).
pub fn esd3_simplex3() -> Vec<Vec<Vec<i64>>> {
    let mut out = Vec::with_capacity(27);
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let color: Vec<usize> = (0..12)
                    .map(|t| {
                        (t > 4 * i) as usize + (t > 1 + 4 * j) as usize + (t > 2 + 4 * k) as usize
                    })
                    .collect();
                let simplex = (0..4)
                    .map(|j1| {
                        let mut p = vec![0i64; 4];
                        for i1 in 0..3 {
                            p[color[j1 + i1 * 4]] += 1;
                        }
                        p
                    })
                    .collect();
                out.push(simplex);
            }
        }
    }
    out
}

/// Esd_3 subdivision of `conv{3e_1..3e_5}` (81 simplices, points in `Z^5`).
pub fn esd3_simplex4() -> Vec<Vec<Vec<i64>>> {
    let mut out = Vec::with_capacity(81);
    for i1 in 0..3 {
        for i2 in 0..3 {
            for i3 in 0..3 {
                for i4 in 0..3 {
                    let color: Vec<usize> = (0..15)
                        .map(|t| {
                            (t > 5 * i1) as usize
                                + (t > 1 + 5 * i2) as usize
                                + (t > 2 + 5 * i3) as usize
                                + (t > 3 + 5 * i4) as usize
                        })
                        .collect();
                    let simplex = (0..5)
                        .map(|j| {
                            let mut p = vec![0i64; 5];
                            for i in 0..3 {
                                p[color[j + i * 5]] += 1;
                            }
                            p
                        })
                        .collect();
                    out.push(simplex);
                }
            }
        }
    }
    out
}

/// Splits the prism over a 4-point simplex `σ` and `σ + (1,1,1,-1,-1,-1)` into 4 simplices.
pub fn prism_subdivision(sigma: &[Vec<i64>]) -> Vec<Vec<Vec<i64>>> {
    let delta: Vec<Vec<i64>> = sigma
        .iter()
        .map(|p| {
            let mut q = p.clone();
            q[..3].iter_mut().for_each(|x| *x += 1);
            q[3..].iter_mut().for_each(|x| *x -= 1);
            q
        })
        .collect();
    (0..4)
        .map(|i| {
            let mut s: Vec<Vec<i64>> = sigma[..=i].to_vec();
            s.extend_from_slice(&delta[i..4]);
            s
        })
        .collect()
}

/// Generator lists (six coordinates) of the maximal cones of Π, in construction order.
pub fn pi_maximal_cone_vectors() -> Vec<Vec<[i64; 6]>> {
    let to6 = |p: Vec<i64>| -> [i64; 6] { p.try_into().expect("six coordinates") };
    let mut cones = Vec::with_capacity(1458);
    for (range, shift) in [(0..3, 0..3), (3..6, 3..6)] {
        for i in range {
            for simplex in esd3_simplex4() {
                cones.push(
                    simplex
                        .into_iter()
                        .map(|mut p| {
                            p.insert(i, 0);
                            shift.clone().for_each(|c| p[c] -= 1);
                            to6(p)
                        })
                        .collect(),
                );
            }
        }
    }
    for i in 0..3 {
        for j in 3..6 {
            for simplex in esd3_simplex3() {
                let lifted: Vec<Vec<i64>> = simplex
                    .into_iter()
                    .map(|mut p| {
                        p.insert(i, 0);
                        p.insert(j, 0);
                        p[..3].iter_mut().for_each(|x| *x -= 1);
                        p
                    })
                    .collect();
                for s in prism_subdivision(&lifted) {
                    cones.push(s.into_iter().map(to6).collect());
                }
            }
        }
    }
    cones
}

/// A cone given by indices into its fan's ray table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cone {
    pub generators: Vec<usize>,
}

impl Cone {
    pub fn new(generators: Vec<usize>) -> Self {
        Cone { generators }
    }

    pub fn zero() -> Self {
        Cone { generators: vec![] }
    }

    /// Number of generators (the dimension for simplicial cones).
    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn sorted(&self) -> Vec<usize> {
        let mut g = self.generators.clone();
        g.sort_unstable();
        g
    }

    pub fn is_face_of(&self, other: &Cone) -> bool {
        self.generators.iter().all(|g| other.generators.contains(g))
    }
}

/// On-disk fan format: rays in the 5-coordinate projection, 0-based cone indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanJson {
    pub rays: Vec<[i64; 5]>,
    pub maximal_cones: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct Fan {
    pub rays: Vec<LatticeVector>,
    pub maximal_cones: Vec<Cone>,
    /// Labels for Π rays; empty for other fans.
    pub labels: Vec<RayLabel>,
    index: HashMap<LatticeVector, usize>,
}

impl Fan {
    pub fn new(rays: Vec<LatticeVector>, maximal_cones: Vec<Cone>) -> Result<Self> {
        let mut index = HashMap::with_capacity(rays.len());
        for (i, r) in rays.iter().enumerate() {
            if r.is_zero() {
                return Err(Error::Fan(format!("ray {i} is zero")));
            }
            if index.insert(*r, i).is_some() {
                return Err(Error::Fan(format!("ray {i} is repeated")));
            }
        }
        for c in &maximal_cones {
            if let Some(&g) = c.generators.iter().find(|&&g| g >= rays.len()) {
                return Err(Error::Fan(format!("cone references missing ray {g}")));
            }
        }
        Ok(Fan {
            rays,
            maximal_cones,
            labels: vec![],
            index,
        })
    }

    pub fn ray_index(&self, v: &LatticeVector) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn ray_proj(&self, i: usize) -> Vec<i64> {
        self.rays[i].proj().to_vec()
    }

    pub fn generator_matrix(&self, cone: &Cone) -> Vec<Vec<i64>> {
        cone.generators.iter().map(|&g| self.ray_proj(g)).collect()
    }

    pub fn is_simplicial(&self) -> bool {
        self.maximal_cones
            .iter()
            .all(|c| linalg::rank(&self.generator_matrix(c)) == c.dim())
    }

    fn require_simplicial(&self) -> Result<()> {
        match self
            .maximal_cones
            .iter()
            .find(|c| linalg::rank(&self.generator_matrix(c)) != c.dim())
        {
            Some(c) => Err(Error::NotSimplicial(c.generators.clone())),
            None => Ok(()),
        }
    }

    /// Distinct `d`-faces, sorted by generator set.
    pub fn faces(&self, d: usize) -> Result<Vec<Cone>> {
        self.require_simplicial()?;
        let mut set: BTreeSet<Vec<usize>> = BTreeSet::new();
        for c in &self.maximal_cones {
            let g = c.sorted();
            if d > g.len() {
                continue;
            }
            for_each_subset(&g, d, |s| {
                set.insert(s.to_vec());
            });
        }
        Ok(set.into_iter().map(Cone::new).collect())
    }

    /// All faces of every dimension, grouped by dimension.
    pub fn all_faces(&self) -> Result<Vec<Vec<Cone>>> {
        (0..=5).map(|d| self.faces(d)).collect()
    }

    /// The first maximal cone (construction order) having `sigma` as a face.
    pub fn containing_maximal_cone(&self, sigma: &Cone) -> Result<&Cone> {
        self.maximal_cones
            .iter()
            .find(|c| sigma.is_face_of(c))
            .ok_or_else(|| Error::NoContainingCone(sigma.generators.clone()))
    }

    /// All maximal cones having `sigma` as a face.
    pub fn containing_maximal_cones(&self, sigma: &Cone) -> Vec<&Cone> {
        self.maximal_cones
            .iter()
            .filter(|c| sigma.is_face_of(c))
            .collect()
    }

    pub fn check_smooth(&self) -> Result<bool> {
        self.require_simplicial()?;
        Ok(self
            .maximal_cones
            .par_iter()
            .all(|c| c.dim() == 5 && linalg::det(&self.generator_matrix(c)).abs() == 1))
    }

    /// Every codimension-one face of a maximal cone lies in exactly two maximal cones.
    pub fn check_complete(&self) -> Result<bool> {
        self.require_simplicial()?;
        if self.maximal_cones.iter().any(|c| c.dim() != 5) {
            return Ok(false);
        }
        let mut count: HashMap<Vec<usize>, usize> = HashMap::new();
        for c in &self.maximal_cones {
            let g = c.sorted();
            for skip in 0..g.len() {
                let mut f = g.clone();
                f.remove(skip);
                *count.entry(f).or_default() += 1;
            }
        }
        Ok(count.values().all(|&n| n == 2))
    }

    /// Every ray is used by some maximal cone.
    pub fn check_ray_closure(&self) -> bool {
        let used: BTreeSet<usize> = self
            .maximal_cones
            .iter()
            .flat_map(|c| c.generators.iter().copied())
            .collect();
        used.len() == self.rays.len()
    }

    pub fn to_json(&self) -> FanJson {
        FanJson {
            rays: self.rays.iter().map(|r| r.proj()).collect(),
            maximal_cones: self
                .maximal_cones
                .iter()
                .map(|c| c.generators.clone())
                .collect(),
        }
    }

    pub fn from_json(j: &FanJson) -> Result<Self> {
        let rays = j
            .rays
            .iter()
            .map(|&p| LatticeVector::from_proj(p))
            .collect();
        let cones = j
            .maximal_cones
            .iter()
            .map(|c| Cone::new(c.clone()))
            .collect();
        let mut fan = Fan::new(rays, cones)?;
        fan.relabel();
        Ok(fan)
    }

    /// Attaches u/v labels when every ray is one of the Π generators.
    fn relabel(&mut self) {
        let table: HashMap<LatticeVector, RayLabel> = pi_labels()
            .into_iter()
            .map(|l| (label_vector(l), l))
            .collect();
        let labels: Option<Vec<RayLabel>> =
            self.rays.iter().map(|r| table.get(r).copied()).collect();
        self.labels = labels.unwrap_or_default();
    }
}

fn for_each_subset(items: &[usize], k: usize, mut f: impl FnMut(&[usize])) {
    fn rec(
        items: &[usize],
        k: usize,
        start: usize,
        cur: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]),
    ) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, f);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut Vec::with_capacity(k), &mut f);
}

/// The fan Π: 110 rays (55 u-rays then 55 v-rays) and the subdivided maximal cones.
pub fn build_fan_pi() -> Result<Fan> {
    let labels = pi_labels();
    let rays: Vec<LatticeVector> = labels.iter().map(|&l| label_vector(l)).collect();
    let mut fan = Fan::new(rays, vec![])?;
    let mut cones = Vec::with_capacity(1458);
    for gens in pi_maximal_cone_vectors() {
        let idx = gens
            .iter()
            .map(|g| {
                fan.ray_index(&LatticeVector { coords: *g })
                    .ok_or_else(|| Error::Fan(format!("generator {g:?} is not a u/v ray")))
            })
            .collect::<Result<Vec<usize>>>()?;
        cones.push(Cone::new(idx));
    }
    fan.maximal_cones = cones;
    fan.labels = labels;
    Ok(fan)
}

/// The 12 rays of Σ: `u_i = -e1-e2-e3+3e_i`, then `v_i = -e4-e5-e6+3e_i`.
pub fn sigma_rays() -> Vec<LatticeVector> {
    let mut out = Vec::with_capacity(12);
    for shift in [0usize, 3] {
        for i in 0..6 {
            let mut a = [0i64; 6];
            a[shift..shift + 3].iter_mut().for_each(|x| *x = -1);
            a[i] += 3;
            out.push(LatticeVector { coords: a });
        }
    }
    out
}

/// The polytope spanned by the rays of Σ, in the 5-coordinate projection.
pub fn sigma_polytope() -> Polytope {
    let pts: Vec<Vec<i64>> = sigma_rays().iter().map(|r| r.proj().to_vec()).collect();
    Polytope::from_integer_points(&pts).expect("nonempty")
}

/// The fan Σ as the face fan of its ray polytope: one maximal cone per facet.
///
/// Several of these cones are not simplicial, so Σ only supports refinement
/// queries, not the simplicial-fan checks.
pub fn build_fan_sigma() -> Result<Fan> {
    let poly = sigma_polytope();
    let rays = sigma_rays();
    if poly.dim() != 5 || poly.num_vertices() != 12 {
        return Err(Error::Fan(
            "ray polytope of Σ is not a full-dimensional 12-vertex polytope".into(),
        ));
    }
    let verts = poly.integer_vertices().expect("lattice polytope");
    let mut cones = Vec::new();
    for h in poly.facets() {
        if h.offset <= 0 {
            return Err(Error::Fan(
                "origin is not interior to the ray polytope of Σ".into(),
            ));
        }
        let mut gens: Vec<usize> = h
            .tight
            .iter()
            .map(|&t| {
                let v: [i64; 5] = verts[t].clone().try_into().expect("five coordinates");
                rays.iter()
                    .position(|r| r.proj() == v)
                    .expect("vertex is a ray")
            })
            .collect();
        gens.sort_unstable();
        cones.push(Cone::new(gens));
    }
    cones.sort();
    Fan::new(rays, cones)
}

/// Inequality description of the cone over a facet of a polytope containing 0 in its interior.
#[derive(Clone, Debug)]
struct FacetCone {
    facet: usize,
}

/// `x` lies in the cone over facet `f` iff `-a_f.x >= 0` and, rescaled onto the
/// facet hyperplane, satisfies every facet inequality.
fn in_facet_cone(poly: &Polytope, f: &FacetCone, x: &[i64]) -> bool {
    let hs = poly.facets();
    let coords = poly.span_coordinates();
    let y: Vec<i64> = coords.iter().map(|&c| x[c]).collect();
    let hf = &hs[f.facet];
    let s = -(linalg::dot(&hf.normal, &y) as i128);
    if s < 0 {
        return false;
    }
    if s == 0 {
        return y.iter().all(|&v| v == 0);
    }
    hs.iter().all(|g| {
        let lhs = g.offset as i128 * s + hf.offset as i128 * linalg::dot(&g.normal, &y) as i128;
        lhs >= 0
    })
}

/// Every maximal cone of `fine` lies inside one maximal cone of `coarse`, and every
/// maximal cone of `coarse` contains at least one of them.
///
/// Cones of `coarse` must be the cones over the facets of the polytope spanned
/// by its rays (as produced by [`build_fan_sigma`]), or simplicial.
pub fn check_refines(fine: &Fan, coarse: &Fan) -> Result<bool> {
    fine.require_simplicial()?;
    let pts: Vec<Vec<i64>> = coarse.rays.iter().map(|r| r.proj().to_vec()).collect();
    let poly = Polytope::from_integer_points(&pts)?;
    let verts = poly.integer_vertices().expect("lattice polytope");
    // Match each coarse cone to the facet whose tight vertices are its generators.
    let mut facet_of: Vec<Option<usize>> = vec![None; coarse.maximal_cones.len()];
    for (fi, h) in poly.facets().iter().enumerate() {
        let mut gens: Vec<usize> = h
            .tight
            .iter()
            .filter_map(|&t| {
                let v: [i64; 5] = verts[t].clone().try_into().ok()?;
                coarse.ray_index(&LatticeVector::from_proj(v))
            })
            .collect();
        gens.sort_unstable();
        if let Some(ci) = coarse.maximal_cones.iter().position(|c| c.sorted() == gens) {
            facet_of[ci] = Some(fi);
        }
    }
    let facet_cones: Vec<(usize, FacetCone)> = facet_of
        .iter()
        .enumerate()
        .filter_map(|(ci, f)| f.map(|facet| (ci, FacetCone { facet })))
        .collect();
    if facet_cones.len() != coarse.maximal_cones.len() {
        return Err(Error::Fan(
            "coarse fan is not the face fan of its ray polytope".into(),
        ));
    }

    let owners: Vec<Option<usize>> = fine
        .maximal_cones
        .par_iter()
        .map(|c| {
            facet_cones
                .iter()
                .find(|(_, fc)| {
                    c.generators
                        .iter()
                        .all(|&g| in_facet_cone(&poly, fc, &fine.ray_proj(g)))
                })
                .map(|(ci, _)| *ci)
        })
        .collect();
    if owners.iter().any(|o| o.is_none()) {
        return Ok(false);
    }
    let hit: BTreeSet<usize> = owners.into_iter().flatten().collect();
    Ok(hit.len() == coarse.maximal_cones.len())
}

/// Number of maximal cones of `fine` inside each maximal cone of `coarse`.
pub fn refinement_histogram(fine: &Fan, coarse: &Fan) -> Result<BTreeMap<usize, usize>> {
    let pts: Vec<Vec<i64>> = coarse.rays.iter().map(|r| r.proj().to_vec()).collect();
    let poly = Polytope::from_integer_points(&pts)?;
    let mut out = BTreeMap::new();
    for c in &fine.maximal_cones {
        for (fi, _) in poly.facets().iter().enumerate() {
            let fc = FacetCone { facet: fi };
            if c.generators
                .iter()
                .all(|&g| in_facet_cone(&poly, &fc, &fine.ray_proj(g)))
            {
                *out.entry(fi).or_default() += 1;
                break;
            }
        }
    }
    Ok(out)
}

/// Summary of the structural checks on a smooth complete fan refining Σ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanCertificate {
    pub rays: usize,
    pub maximal_cones: usize,
    pub unimodular: bool,
    pub facet_pairing: bool,
    pub ray_closure: bool,
    pub refines_sigma: bool,
    /// Number of cones by dimension, including the zero cone.
    pub face_counts: Vec<usize>,
}

impl FanCertificate {
    pub fn is_valid(&self) -> bool {
        self.unimodular && self.facet_pairing && self.ray_closure && self.refines_sigma
    }
}

pub fn certify(fan: &Fan) -> Result<FanCertificate> {
    let unimodular = fan.check_smooth()?;
    let facet_pairing = fan.check_complete()?;
    let sigma = build_fan_sigma()?;
    Ok(FanCertificate {
        rays: fan.rays.len(),
        maximal_cones: fan.maximal_cones.len(),
        unimodular,
        facet_pairing,
        ray_closure: fan.check_ray_closure(),
        refines_sigma: check_refines(fan, &sigma)?,
        face_counts: fan.all_faces()?.iter().map(Vec::len).collect(),
    })
}


#[cfg(test)]
mod pi_tests {
    use super::*;

    #[test]
    fn pi_certificate() {
        let pi = build_fan_pi().unwrap();
        let cert = certify(&pi).unwrap();
        assert!(cert.is_valid());
        assert_eq!((cert.rays, cert.maximal_cones), (110, 1458));
        assert_eq!(cert.face_counts, vec![1, 110, 1053, 3132, 3645, 1458]);
        let euler: i64 = cert.face_counts[1..]
            .iter()
            .enumerate()
            .map(|(i, &n)| if i % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum();
        assert_eq!(euler, 2);
        let sigma = build_fan_sigma().unwrap();
        assert_eq!((sigma.rays.len(), sigma.maximal_cones.len()), (12, 15));
        let hist = refinement_histogram(&pi, &sigma).unwrap();
        assert_eq!(hist.len(), 15);
        assert!(hist.values().all(|&n| n == 108 || n == 81));
        assert_eq!(hist.values().sum::<usize>(), 1458);
    }
}
