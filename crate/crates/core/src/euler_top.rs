//! Topological Euler characteristic of the central fiber by summing BKK
//! contributions over the torus orbits of Π.

use std::collections::BTreeMap;
use std::time::Instant;

use log::{debug, info};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cox_geometry::{
    h1_at_psi0, h2_at_psi0, is_saturated, restrict_to_stratum, CoxPolynomial, LaurentPoly,
};
use crate::error::{Error, Result};
use crate::lattice_fan::{Cone, Fan};
use crate::polytope::MinkowskiVolumes;
use crate::rational::Q;

/// Euler characteristic of a generic complete intersection `{f_1 = .. = f_m = 0}`
/// in a `k`-dimensional torus, from the Newton polytopes of the `f_i`.
///
/// Zero polynomials are dropped first. The `m = 0` case returns 0 for every `k`
/// (for `k = 0` this is the convention of the stratum sum; see [`point_semantics`]).
pub fn chi_by_equations(eqs: &[LaurentPoly], k: usize) -> Result<i64> {
    let eqs: Vec<&LaurentPoly> = eqs.iter().filter(|p| !p.is_zero()).collect();
    if eqs.iter().any(|p| p.is_nonzero_constant()) {
        return Ok(0);
    }
    let m = eqs.len();
    if m == 0 {
        return Ok(0);
    }
    if m > k {
        debug!("overdetermined stratum: {m} equations in a {k}-torus");
        return Ok(0);
    }
    if let Some(p) = eqs.iter().find(|p| p.nvars != k) {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: p.nvars,
        });
    }
    let base = eqs
        .iter()
        .map(|p| p.newton_polytope())
        .collect::<Result<Vec<_>>>()?;
    let mut engine = MinkowskiVolumes::new(base, k)?;
    let mut total = Q::zero();
    for extra in multisets(m, k - m) {
        let mult: Vec<usize> = (0..m)
            .map(|i| 1 + extra.iter().filter(|&&e| e == i).count())
            .collect();
        total += engine.mixed_volume(&mult)?;
    }
    if !total.is_integer() {
        return Err(Error::NonIntegral(total.to_string()));
    }
    let v = total
        .to_integer()
        .to_i64()
        .expect("Euler characteristic fits in i64");
    Ok(if (k - m).is_multiple_of(2) { v } else { -v })
}

/// Multisets of size `r` from `0..n`, as nondecreasing index lists in lexicographic order.
pub fn multisets(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, r: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, r, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, r, 0, &mut Vec::with_capacity(r), &mut out);
    out
}

/// Both readings of a zero-dimensional stratum: the stratum sum convention and the
/// honest count of points of the variety in that orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PointSemantics {
    pub convention: i64,
    pub point_count: i64,
}

/// For a point orbit (`k = 0`): the orbit is on the variety iff every restriction vanishes.
pub fn point_semantics(eqs: &[LaurentPoly]) -> PointSemantics {
    let on_variety = eqs.iter().all(|p| p.is_zero());
    PointSemantics {
        convention: 0,
        point_count: i64::from(on_variety),
    }
}

#[derive(Clone, Debug)]
pub struct StratumOptions {
    pub check_saturation: bool,
}

impl Default for StratumOptions {
    fn default() -> Self {
        StratumOptions {
            check_saturation: true,
        }
    }
}

/// The two defining equations, built once and shared across strata.
pub struct Equations {
    pub h: [CoxPolynomial; 2],
}

impl Equations {
    pub fn new(fan: &Fan) -> Result<Self> {
        Ok(Equations {
            h: [h1_at_psi0(fan)?, h2_at_psi0(fan)?],
        })
    }
}

/// Contribution of the orbit of `sigma`, computed in the chart of `delta`.
pub fn stratum_chi_in_chart(
    eqs: &Equations,
    sigma: &Cone,
    delta: &Cone,
    opts: &StratumOptions,
) -> Result<i64> {
    let k = delta.dim() - sigma.dim();
    let mut restricted = Vec::with_capacity(2);
    for h in &eqs.h {
        let r = restrict_to_stratum(h, sigma, delta)?;
        if opts.check_saturation && !is_saturated(&r.poly)? {
            let pts = r.poly.newton_polytope()?.integral_points().len();
            return Err(Error::Saturation {
                cone: sigma.generators.clone(),
                points: pts,
                monomials: r.poly.num_monomials(),
            });
        }
        restricted.push(r.poly);
    }
    if k == 0 {
        let s = point_semantics(&restricted);
        if s.convention != s.point_count {
            return Err(Error::PointStratum(sigma.generators.clone()));
        }
        return Ok(s.convention);
    }
    chi_by_equations(&restricted, k)
}

/// Contribution of the orbit of `sigma` in its first containing chart.
pub fn stratum_chi(fan: &Fan, eqs: &Equations, sigma: &Cone, opts: &StratumOptions) -> Result<i64> {
    let delta = fan.containing_maximal_cone(sigma)?;
    stratum_chi_in_chart(eqs, sigma, delta, opts)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StratumRecord {
    pub cone: Vec<usize>,
    pub dim: usize,
    pub chi: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TopReport {
    pub total: i64,
    pub by_dimension: BTreeMap<usize, i64>,
    pub strata: Vec<StratumRecord>,
    pub timing_ms: u128,
}

/// Sums the orbit contributions over all faces of the fan.
pub fn total_chi_y0(fan: &Fan, opts: &StratumOptions) -> Result<TopReport> {
    let start = Instant::now();
    let eqs = Equations::new(fan)?;
    let faces: Vec<Cone> = fan.all_faces()?.into_iter().flatten().collect();
    let chis = faces
        .par_iter()
        .map(|s| stratum_chi(fan, &eqs, s, opts))
        .collect::<Result<Vec<i64>>>()?;
    let mut by_dimension: BTreeMap<usize, i64> = (0..=5).map(|d| (d, 0)).collect();
    let mut strata = Vec::with_capacity(faces.len());
    for (s, &chi) in faces.iter().zip(&chis) {
        *by_dimension.get_mut(&s.dim()).unwrap() += chi;
        strata.push(StratumRecord {
            cone: s.generators.clone(),
            dim: s.dim(),
            chi,
        });
    }
    let total = chis.iter().sum();
    let timing_ms = start.elapsed().as_millis();
    info!(
        "chi(Y0) = {total} over {} strata in {timing_ms} ms",
        faces.len()
    );
    Ok(TopReport {
        total,
        by_dimension,
        strata,
        timing_ms,
    })
}
